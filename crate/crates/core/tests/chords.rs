use nalgebra::DVector;
use proptest::prelude::*;
use strhom::chords::{
    builtin_config, chord_sum_spectrum, descend, find_spectrum, l_r_gradient, l_r_value, max_segment_value,
    tangent_basis, BrokenPath, BuiltinLink, ChordConfig, ChordError, ManifoldSpec, ParamSubmanifold, MONOTONE_SLACK,
};

fn unit(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v).normalize()
}

fn coplanar_circles() -> ParamSubmanifold {
    let spec: ManifoldSpec = serde_json::from_str(
        r#"{"name": "coplanar", "components": [
            {"center": [0, 0, 0], "frame": [[1, 0, 0], [0, 1, 0]], "radius": 1},
            {"center": [4, 0, 0], "frame": [[1, 0, 0], [0, 1, 0]], "radius": 1}]}"#,
    )
    .unwrap();
    ParamSubmanifold::from_spec(&spec).unwrap()
}

#[test]
fn coplanar_circles_have_collinear_chords() {
    // chords normal to two coplanar circles pass through both centres:
    // diameters 2 and cross chords 2, 4, 6 along the centre line
    let k = coplanar_circles();
    let report = find_spectrum(&k, &ChordConfig::default()).unwrap();
    let lengths = report.lengths();
    assert_eq!(lengths.len(), 3, "{lengths:?}");
    for (got, want) in lengths.iter().zip([2.0, 4.0, 6.0]) {
        assert!((got - want).abs() < 1e-6, "{lengths:?}");
    }
    let cross: Vec<f64> = report.chords.iter().filter(|c| c.components == (0, 1)).map(|c| c.length).collect();
    assert_eq!(cross.len(), 3, "{cross:?}");
    assert!(report.chords.iter().all(|c| c.residual < 1e-8));
    assert_eq!(report.l_violations + report.f_violations, 0);
}

#[test]
fn invalid_configurations_are_rejected() {
    let bad: ManifoldSpec = serde_json::from_str(
        r#"{"components": [{"center": [0, 0, 0], "frame": [[1, 0], [0, 1, 0]], "radius": 1}]}"#,
    )
    .unwrap();
    assert!(matches!(ParamSubmanifold::from_spec(&bad), Err(ChordError::InvalidManifold(_))));
    assert!(builtin_config(BuiltinLink::Unlink, 2, 1.5).is_err());
    assert!(builtin_config(BuiltinLink::Hopf, 1, 3.0).is_err());
    let k = builtin_config(BuiltinLink::Hopf, 2, 3.0).unwrap();
    let cfg = ChordConfig { nu: 1, ..ChordConfig::default() };
    assert!(matches!(find_spectrum(&k, &cfg), Err(ChordError::InvalidConfig(_))));
    let p = BrokenPath::straight(&k, (0, unit(&[1.0, 0.0])), (1, unit(&[1.0, 0.0])), 4);
    assert!(matches!(l_r_value(&p, 0.0), Err(ChordError::InvalidSmoothing(_))));
}

#[test]
fn sums_of_chord_lengths() {
    assert_eq!(chord_sum_spectrum(&[1.0, 2.0, 3.0], 2, 3.5, 1e-9), [2.0, 3.0]);
    assert_eq!(chord_sum_spectrum(&[2.0, 3.0], 3, 10.0, 1e-9), [6.0, 7.0, 8.0, 9.0]);
    assert!(chord_sum_spectrum(&[1.0], 0, 5.0, 1e-9).is_empty());
}

/// Random path between two components of a built-in, interior points
/// displaced by up to `0.4 / ν`.
fn random_path() -> impl Strategy<Value = (usize, BrokenPath)> {
    (0usize..3, 0usize..2, 0usize..2, 2usize..12, prop::collection::vec(-1.0f64..1.0, 200)).prop_map(
        |(which, s, t, nu, noise)| {
            let k = config(which);
            let pick = |off: usize, dim: usize| {
                let v = DVector::from_iterator(dim, (0..dim).map(|i| noise[off + i] + 0.05));
                v.normalize()
            };
            let u0 = pick(0, k.components[s].param_dim());
            let u1 = pick(5, k.components[t].param_dim());
            let mut p = BrokenPath::straight(&k, (s, u0), (t, u1), nu);
            let n = p.points[0].len();
            for l in 1..nu {
                for c in 0..n {
                    p.points[l][c] += 0.4 / nu as f64 * noise[(10 + l * n + c) % noise.len()];
                }
            }
            (which, p)
        },
    )
}

fn config(which: usize) -> ParamSubmanifold {
    match which {
        0 => builtin_config(BuiltinLink::Hopf, 2, 3.0).unwrap(),
        1 => builtin_config(BuiltinLink::Unlink, 2, 3.0).unwrap(),
        _ => builtin_config(BuiltinLink::Hopf, 3, 3.0).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gradient_matches_central_differences((which, p) in random_path(), small in any::<bool>()) {
        let k = config(which);
        let r = if small { 1e-6 } else { 1e-2 };
        prop_assume!(p.segment_lengths().iter().all(|&s| s > 1e-3));
        let g = l_r_gradient(&k, &p, r).unwrap();
        let h = 1e-6;
        let mut err = 0.0f64;
        let mut norm = 0.0f64;
        for l in 1..p.nu() {
            for c in 0..p.points[l].len() {
                let (mut a, mut b) = (p.clone(), p.clone());
                a.points[l][c] += h;
                b.points[l][c] -= h;
                let fd = (l_r_value(&a, r).unwrap() - l_r_value(&b, r).unwrap()) / (2.0 * h);
                err += (fd - g.interior[l - 1][c]).powi(2);
                norm += g.interior[l - 1][c].powi(2);
            }
        }
        let t0 = tangent_basis(&p.u0);
        for c in 0..g.source.len() {
            let mut e = DVector::zeros(g.source.len());
            e[c] = h;
            let (mut a, mut b) = (p.clone(), p.clone());
            a.u0 = (&p.u0 + &t0 * &e).normalize();
            b.u0 = (&p.u0 - &t0 * &e).normalize();
            a.sync_endpoints(&k);
            b.sync_endpoints(&k);
            let fd = (l_r_value(&a, r).unwrap() - l_r_value(&b, r).unwrap()) / (2.0 * h);
            err += (fd - g.source[c]).powi(2);
            norm += g.source[c].powi(2);
        }
        prop_assert!(err.sqrt() < 1e-5 * norm.sqrt(), "relative error {}", err.sqrt() / norm.sqrt());
    }

    #[test]
    fn descent_never_increases_length_or_longest_segment((which, p) in random_path()) {
        let k = config(which);
        let cfg = ChordConfig { max_iters: 300, ..ChordConfig::default() };
        let r = 1e-4;
        let out = descend(&k, &p, r, &cfg).unwrap();
        prop_assert_eq!(out.l_violations, 0);
        prop_assert_eq!(out.f_violations, 0);
        for w in out.trace.windows(2) {
            let (l0, f0) = w[0];
            let (l1, f1) = w[1];
            prop_assert!(l1 <= l0 + MONOTONE_SLACK * l0.abs().max(1.0));
            prop_assert!(f1 <= f0 + MONOTONE_SLACK * f0.abs().max(1.0));
        }
        let last = out.trace.last().unwrap();
        prop_assert!((last.1 - max_segment_value(&out.path, r)).abs() < 1e-12);
    }
}
