use nalgebra::DVector;

use super::manifold::{tangent_basis, ParamSubmanifold};
use super::ChordError;

/// Polygonal path `q^0, ..., q^ν` in `R^n` whose endpoints lie on components
/// `source` and `target` at parameters `u0`, `u1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrokenPath {
    pub source: usize,
    pub target: usize,
    pub u0: DVector<f64>,
    pub u1: DVector<f64>,
    pub points: Vec<DVector<f64>>,
}

impl BrokenPath {
    /// Straight path with `nu` equal segments between the given endpoints.
    pub fn straight(
        k: &ParamSubmanifold,
        (source, u0): (usize, DVector<f64>),
        (target, u1): (usize, DVector<f64>),
        nu: usize,
    ) -> Self {
        let p = k.components[source].embed(&u0);
        let q = k.components[target].embed(&u1);
        let points = (0..=nu)
            .map(|l| {
                let t = l as f64 / nu as f64;
                &p * (1.0 - t) + &q * t
            })
            .collect();
        BrokenPath {
            source,
            target,
            u0,
            u1,
            points,
        }
    }

    /// Number of segments `ν`.
    pub fn nu(&self) -> usize {
        self.points.len() - 1
    }

    /// Polygonal length `Σ |q^{l+1} - q^l|`.
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| (&w[1] - &w[0]).norm()).sum()
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| (&w[1] - &w[0]).norm()).collect()
    }

    /// Largest distance between an endpoint and the image of its parameter.
    pub fn endpoint_defect(&self, k: &ParamSubmanifold) -> f64 {
        let a = (&self.points[0] - k.components[self.source].embed(&self.u0)).norm();
        let b = (self.points[self.nu()].clone() - k.components[self.target].embed(&self.u1)).norm();
        a.max(b)
    }

    /// Re-places both endpoints exactly on the submanifold.
    pub fn sync_endpoints(&mut self, k: &ParamSubmanifold) {
        let nu = self.nu();
        self.points[0] = k.components[self.source].embed(&self.u0);
        self.points[nu] = k.components[self.target].embed(&self.u1);
    }

    /// Keeps the endpoints and redistributes the interior points equally
    /// along the straight segment between them.
    pub fn straightened(&self) -> BrokenPath {
        let nu = self.nu();
        let p = self.points[0].clone();
        let q = self.points[nu].clone();
        BrokenPath {
            points: (0..=nu)
                .map(|l| {
                    let t = l as f64 / nu as f64;
                    &p * (1.0 - t) + &q * t
                })
                .collect(),
            ..self.clone()
        }
    }
}

fn check_r(r: f64) -> Result<(), ChordError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(ChordError::InvalidSmoothing(r))
    }
}

/// `σ_r(z) = sqrt(z + r)`.
pub fn sigma_r(z: f64, r: f64) -> f64 {
    (z + r).sqrt()
}

/// `σ_r'(z) = 1 / (2 sqrt(z + r))`.
pub fn sigma_r_prime(z: f64, r: f64) -> f64 {
    0.5 / (z + r).sqrt()
}

/// Inverts `L = ν σ_r(l^2 / ν^2)` for a straight path with `ν` equal
/// segments, returning its polygonal length `l`.
pub fn length_from_smoothed(value: f64, nu: usize, r: f64) -> f64 {
    let nu = nu as f64;
    nu * ((value / nu).powi(2) - r).max(0.0).sqrt()
}

/// `L_r = Σ_l sqrt(|q^{l+1} - q^l|^2 + r)`.
pub fn l_r_value(path: &BrokenPath, r: f64) -> Result<f64, ChordError> {
    check_r(r)?;
    Ok(path
        .points
        .windows(2)
        .map(|w| ((&w[1] - &w[0]).norm_squared() + r).sqrt())
        .sum())
}

/// `L_r(y) - L_r(x)` for paths with the same segment count, evaluated from
/// the displacements `y - x` so that the result keeps its relative accuracy
/// when it is far below the rounding error of `L_r` itself.
pub fn l_r_difference(x: &BrokenPath, y: &BrokenPath, r: f64) -> Result<f64, ChordError> {
    check_r(r)?;
    let mut total = 0.0;
    for l in 0..x.nu() {
        let dx = &x.points[l + 1] - &x.points[l];
        let delta = (&y.points[l + 1] - &x.points[l + 1]) - (&y.points[l] - &x.points[l]);
        let dy = &dx + &delta;
        let dh = delta.dot(&(&dx * 2.0 + &delta));
        total += dh / ((dx.norm_squared() + r).sqrt() + (dy.norm_squared() + r).sqrt());
    }
    Ok(total)
}

/// `max_l sqrt(|q^{l+1} - q^l|^2 + r)`.
pub fn max_segment_value(path: &BrokenPath, r: f64) -> f64 {
    path.points
        .windows(2)
        .map(|w| ((&w[1] - &w[0]).norm_squared() + r).sqrt())
        .fold(0.0, f64::max)
}

/// Gradient of `L_r` with endpoints constrained to the submanifold.
///
/// Interior entries are Euclidean gradients in `R^n`. Endpoint entries are
/// coordinates in the tangent basis [`tangent_basis`] of the parameter sphere,
/// i.e. derivatives along `u ↦ normalize(u + T ξ)` at `ξ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathGradient {
    pub interior: Vec<DVector<f64>>,
    pub source: DVector<f64>,
    pub target: DVector<f64>,
}

impl PathGradient {
    pub fn norm_squared(&self) -> f64 {
        self.interior.iter().map(|g| g.norm_squared()).sum::<f64>()
            + self.source.norm_squared()
            + self.target.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn dot(&self, other: &PathGradient) -> f64 {
        self.interior
            .iter()
            .zip(&other.interior)
            .map(|(a, b)| a.dot(b))
            .sum::<f64>()
            + self.source.dot(&other.source)
            + self.target.dot(&other.target)
    }

    pub fn sub(&self, other: &PathGradient) -> PathGradient {
        PathGradient {
            interior: self.interior.iter().zip(&other.interior).map(|(a, b)| a - b).collect(),
            source: &self.source - &other.source,
            target: &self.target - &other.target,
        }
    }
}

pub fn l_r_gradient(k: &ParamSubmanifold, path: &BrokenPath, r: f64) -> Result<PathGradient, ChordError> {
    check_r(r)?;
    let nu = path.nu();
    let pts = &path.points;
    // d/dq^l of sqrt(|q^{l+1} - q^l|^2 + r) = (q^l - q^{l+1}) / σ_l
    let sigma: Vec<f64> = pts
        .windows(2)
        .map(|w| ((&w[1] - &w[0]).norm_squared() + r).sqrt())
        .collect();
    let interior = (1..nu)
        .map(|l| (&pts[l] - &pts[l - 1]) / sigma[l - 1] + (&pts[l] - &pts[l + 1]) / sigma[l])
        .collect();
    let g0 = (&pts[0] - &pts[1]) / sigma[0];
    let g1 = (&pts[nu] - &pts[nu - 1]) / sigma[nu - 1];
    let endpoint = |comp: usize, u: &DVector<f64>, g: DVector<f64>| {
        let c = &k.components[comp];
        tangent_basis(u).transpose() * (c.frame.transpose() * g) * c.radius
    };
    Ok(PathGradient {
        interior,
        source: endpoint(path.source, &path.u0, g0),
        target: endpoint(path.target, &path.u1, g1),
    })
}

/// The path moved by `-t · g`: interior points linearly, endpoint parameters
/// along the sphere retraction.
pub fn step(k: &ParamSubmanifold, path: &BrokenPath, g: &PathGradient, t: f64) -> BrokenPath {
    let nu = path.nu();
    let u0 = (&path.u0 - tangent_basis(&path.u0) * &g.source * t).normalize();
    let u1 = (&path.u1 - tangent_basis(&path.u1) * &g.target * t).normalize();
    let mut points = Vec::with_capacity(nu + 1);
    points.push(k.components[path.source].embed(&u0));
    for (l, gi) in g.interior.iter().enumerate() {
        points.push(&path.points[l + 1] - gi * t);
    }
    points.push(k.components[path.target].embed(&u1));
    BrokenPath {
        source: path.source,
        target: path.target,
        u0,
        u1,
        points,
    }
}

/// Midpoint refinement: every segment is split in two, giving `2ν`
/// segments with the same polygonal length and endpoints.
pub fn refine(path: &BrokenPath) -> BrokenPath {
    let mut points = Vec::with_capacity(2 * path.nu() + 1);
    for w in path.points.windows(2) {
        points.push(w[0].clone());
        points.push((&w[0] + &w[1]) * 0.5);
    }
    points.push(path.points[path.nu()].clone());
    BrokenPath {
        points,
        ..path.clone()
    }
}

/// Defect of the discrete binormal-chord conditions: the largest of the
/// direction jumps between consecutive segments, the components of the
/// end segments along the tangent spaces at the endpoints, and the relative
/// spread of segment lengths.
pub fn binormality_residual(k: &ParamSubmanifold, path: &BrokenPath, eps_min: f64) -> Result<f64, ChordError> {
    let seg = path.segment_lengths();
    let nu = path.nu();
    let floor = eps_min / nu as f64;
    if let Some(l) = seg.iter().position(|&s| s <= floor) {
        return Err(ChordError::DegenerateSegment { index: l, length: seg[l] });
    }
    let dirs: Vec<DVector<f64>> = path
        .points
        .windows(2)
        .zip(&seg)
        .map(|(w, s)| (&w[1] - &w[0]) / *s)
        .collect();
    let mut res: f64 = 0.0;
    for w in dirs.windows(2) {
        res = res.max((&w[1] - &w[0]).norm());
    }
    let t0 = k.components[path.source].tangent(&path.u0);
    let t1 = k.components[path.target].tangent(&path.u1);
    res = res.max((t0.transpose() * &dirs[0]).amax());
    res = res.max((t1.transpose() * &dirs[nu - 1]).amax());
    let mean = seg.iter().sum::<f64>() / nu as f64;
    let (lo, hi) = seg.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    res = res.max((hi - lo) / mean);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chords::manifold::{builtin_config, BuiltinLink, SphereComponent};
    use nalgebra::DMatrix;

    fn unit_circle() -> ParamSubmanifold {
        let c = SphereComponent::new(DVector::zeros(3), DMatrix::identity(3, 2), 1.0).unwrap();
        ParamSubmanifold::new("circle", vec![c]).unwrap()
    }

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    #[test]
    fn l_r_examples() {
        let k = unit_circle();
        let p = BrokenPath::straight(&k, (0, v(&[1.0, 0.0])), (0, v(&[-1.0, 0.0])), 2);
        assert!((l_r_value(&p, 1e-14).unwrap() - 2.0).abs() < 1e-6);
        let mut q = p.clone();
        q.points = vec![v(&[0.0, 0.0, 0.0]); 5];
        assert!((l_r_value(&q, 0.01).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(l_r_value(&p, 0.0), Err(ChordError::InvalidSmoothing(0.0)));
    }

    #[test]
    fn diameter_is_critical_with_zero_residual() {
        let k = unit_circle();
        let p = BrokenPath::straight(&k, (0, v(&[1.0, 0.0])), (0, v(&[-1.0, 0.0])), 2);
        assert!(binormality_residual(&k, &p, 1e-3).unwrap() < 1e-15);
        assert!(l_r_gradient(&k, &p, 1e-4).unwrap().norm() < 1e-15);
    }

    #[test]
    fn hopf_center_chord_is_binormal() {
        let k = builtin_config(BuiltinLink::Hopf, 2, 0.0).unwrap();
        // (0,1,0) on K0 to (0,0,0) on K1
        let p = BrokenPath::straight(&k, (0, v(&[0.0, 1.0])), (1, v(&[-1.0, 0.0])), 4);
        assert!((p.points[4].norm()) < 1e-15);
        assert!(binormality_residual(&k, &p, 1e-3).unwrap() < 1e-15);
    }

    #[test]
    fn collinear_interior_gradient_vanishes() {
        let k = unit_circle();
        // chord from angle 0 to angle 1: not binormal
        let u1 = v(&[1f64.cos(), 1f64.sin()]);
        let p = BrokenPath::straight(&k, (0, v(&[1.0, 0.0])), (0, u1), 4);
        let g = l_r_gradient(&k, &p, 1e-3).unwrap();
        assert!(g.interior.iter().all(|x| x.norm() < 1e-14));
        assert!(g.source.norm() > 0.1);
        // the endpoint gradient is the tangential part of the unit direction
        let dir = (&p.points[0] - &p.points[1]).normalize();
        let sigma = ((&p.points[1] - &p.points[0]).norm_squared() + 1e-3).sqrt();
        let s = (&p.points[1] - &p.points[0]).norm();
        let expected = k.components[0].tangent(&p.u0).transpose() * dir * (s / sigma);
        assert!((&g.source - expected).norm() < 1e-14);
    }

    #[test]
    fn refine_preserves_length_and_endpoints() {
        let k = unit_circle();
        let mut p = BrokenPath::straight(&k, (0, v(&[1.0, 0.0])), (0, v(&[0.0, 1.0])), 1);
        p.points[0] = v(&[1.0, 0.0, 0.0]);
        let r = refine(&p);
        assert_eq!(r.nu(), 2);
        assert_eq!(r.points[1], v(&[0.5, 0.5, 0.0]));
        let bent = BrokenPath {
            points: vec![v(&[1.0, 0.0, 0.0]), v(&[0.3, 0.9, 0.4]), v(&[0.0, 1.0, 0.0])],
            ..p.clone()
        };
        let rr = refine(&refine(&bent));
        assert_eq!(rr.nu(), 8);
        assert!((rr.length() - bent.length()).abs() < 1e-15);
        assert_eq!(rr.points[0], bent.points[0]);
        assert_eq!(rr.points[8], bent.points[2]);
    }

    #[test]
    fn sigma_prime_times_sqrt_is_increasing() {
        for r in [1e-2, 1e-6, 1.0] {
            let f = |z: f64| sigma_r_prime(z, r) * z.sqrt();
            let mut last = f(0.0);
            for i in 1..2000 {
                let z = i as f64 * 1e-3 * (1.0 + i as f64 * 0.01);
                assert!(f(z) > last, "r = {r}, z = {z}");
                last = f(z);
            }
        }
        let h = 1e-6;
        let fd = (sigma_r(0.3 + h, 0.01) - sigma_r(0.3 - h, 0.01)) / (2.0 * h);
        assert!((fd - sigma_r_prime(0.3, 0.01)).abs() < 1e-8);
    }

    #[test]
    fn smoothed_value_recovers_length() {
        let k = unit_circle();
        let p = BrokenPath::straight(&k, (0, v(&[1.0, 0.0])), (0, v(&[0.0, 1.0])), 8);
        let r = 1e-3;
        let l = length_from_smoothed(l_r_value(&p, r).unwrap(), 8, r);
        assert!((l - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let k = builtin_config(BuiltinLink::Hopf, 3, 0.0).unwrap();
        let u0 = v(&[0.2, 0.7, -0.4]).normalize();
        let u1 = v(&[-0.5, 0.3, 0.6]).normalize();
        let mut p = BrokenPath::straight(&k, (0, u0.clone()), (1, u1.clone()), 5);
        for l in 1..5 {
            for c in 0..5 {
                p.points[l][c] += 0.1 * ((3 * l + c) as f64).sin();
            }
        }
        let r = 1e-2;
        let g = l_r_gradient(&k, &p, r).unwrap();
        let h = 1e-6;
        let rel = |fd: f64, an: f64| (fd - an).abs() / an.abs().max(1e-3);
        for l in 1..5 {
            for c in 0..5 {
                let mut a = p.clone();
                let mut b = p.clone();
                a.points[l][c] += h;
                b.points[l][c] -= h;
                let fd = (l_r_value(&a, r).unwrap() - l_r_value(&b, r).unwrap()) / (2.0 * h);
                assert!(rel(fd, g.interior[l - 1][c]) < 1e-5);
            }
        }
        // endpoints move along the sphere chart normalize(u + T ξ)
        let t0 = tangent_basis(&u0);
        for c in 0..2 {
            let mut e = DVector::zeros(2);
            e[c] = h;
            let mut a = p.clone();
            let mut b = p.clone();
            a.u0 = (&u0 + &t0 * &e).normalize();
            b.u0 = (&u0 - &t0 * &e).normalize();
            a.sync_endpoints(&k);
            b.sync_endpoints(&k);
            let fd = (l_r_value(&a, r).unwrap() - l_r_value(&b, r).unwrap()) / (2.0 * h);
            assert!(rel(fd, g.source[c]) < 1e-5);
        }
        let t1 = tangent_basis(&u1);
        for c in 0..2 {
            let mut e = DVector::zeros(2);
            e[c] = h;
            let mut a = p.clone();
            let mut b = p.clone();
            a.u1 = (&u1 + &t1 * &e).normalize();
            b.u1 = (&u1 - &t1 * &e).normalize();
            a.sync_endpoints(&k);
            b.sync_endpoints(&k);
            let fd = (l_r_value(&a, r).unwrap() - l_r_value(&b, r).unwrap()) / (2.0 * h);
            assert!(rel(fd, g.target[c]) < 1e-5);
        }
    }

    #[test]
    fn degenerate_segments_are_rejected() {
        let k = unit_circle();
        let mut p = BrokenPath::straight(&k, (0, v(&[1.0, 0.0])), (0, v(&[-1.0, 0.0])), 2);
        p.points[1] = p.points[0].clone();
        assert!(matches!(
            binormality_residual(&k, &p, 1e-3),
            Err(ChordError::DegenerateSegment { index: 0, .. })
        ));
    }
}
