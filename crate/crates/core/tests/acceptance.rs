//! Acceptance checks. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::DVector;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use strhom::chords::{
    builtin_config, find_spectrum, l_r_gradient, l_r_value, tangent_basis, BrokenPath, BuiltinLink, ChordConfig,
    ParamSubmanifold, SpectrumReport,
};
use strhom::cord::{builtin_presentation, compare_with_h0, quotient_dims_by_wordcount, CordBuiltin};
use strhom::exactlin::Rational;
use strhom::free_dga::{
    build_hopf, build_unlink, h0_dims_by_wordcount, homology_dim, word_basis, Dga, LengthWindow, Word,
};
use strhom::specseq::{associated_graded_homology, convergence_check, FilteredComplex, SpectralSequence};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for d in 2..=5 {
        let three = Rational::from_int(3);
        for (dga, count) in [(build_hopf(d).map_err(|e| e.to_string())?, 24), (build_unlink(d, &three).map_err(|e| e.to_string())?, 12)] {
            let name = dga.name().to_string();
            check(dga.num_generators() == count, || format!("{name}: {} generators", dga.num_generators()))?;
            let sq = dga.d_squared_zero_check();
            check(sq.ok, || format!("{name}: D^2 != 0 at {:?}", sq.witness.as_ref().map(|w| &w.0)))?;
            dga.validate().map_err(|e| format!("{name}: {e}"))?;
            for (g, gen) in dga.generators().iter().enumerate() {
                for (w, _) in dga.diff_of(g as u32).terms() {
                    check(dga.word_degree(w) == gen.degree - 1, || format!("{name}: degree of D({})", gen.id))?;
                    check(dga.word_length(w) <= gen.length, || format!("{name}: length of D({})", gen.id))?;
                }
            }
        }
    }
    within(start, Duration::from_secs(1), "all checks")?;
    Ok("hopf and unlink, d = 2..5".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let h = build_hopf(2).map_err(|e| e.to_string())?;
    let dims = h0_dims_by_wordcount(&h, &h.window(q(13, 2)).map_err(|e| e.to_string())?, 4).map_err(|e| e.to_string())?;
    check(dims == [1, 2, 2, 2, 2], || format!("got {dims:?}"))?;
    within(start, Duration::from_secs(5), "hopf H0")?;
    Ok(format!("{dims:?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let u = build_unlink(2, &Rational::from_int(3)).map_err(|e| e.to_string())?;
    let dims = h0_dims_by_wordcount(&u, &u.window(q(41, 2)).map_err(|e| e.to_string())?, 4).map_err(|e| e.to_string())?;
    check(dims == [1, 2, 4, 8, 16], || format!("got {dims:?}"))?;
    within(start, Duration::from_secs(5), "unlink H0")?;
    Ok(format!("{dims:?}"))
}

/// The window `a = 8.5 d`; for `d = 4` it sits on a realizable length, so
/// the validated constructor must refuse it and the raw window is used.
fn table_window(dga: &Dga, d: i64) -> Result<(LengthWindow, bool), String> {
    let a = q(17 * d, 2);
    match dga.window(a.clone()) {
        Ok(w) => Ok((w, false)),
        Err(_) => Ok((LengthWindow::unchecked(a).map_err(|e| e.to_string())?, true)),
    }
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for d in [3i64, 4] {
        let start = Instant::now();
        let h = build_hopf(d).map_err(|e| e.to_string())?;
        let u = build_unlink(d, &Rational::from_int(3)).map_err(|e| e.to_string())?;
        let (hw, collides) = table_window(&h, d)?;
        let (uw, _) = table_window(&u, d)?;
        for p in 0..=(2 * d - 5) {
            let want = if p == 0 {
                1
            } else if p == d - 2 {
                2
            } else {
                0
            };
            let got = homology_dim(&h, p, &hw).map_err(|e| e.to_string())?;
            check(got == want, || format!("d = {d}: H_{p}(hopf) = {got}, want {want}"))?;
        }
        let top = 2 * d - 4;
        let hd = homology_dim(&h, top, &hw).map_err(|e| e.to_string())?;
        let ud = homology_dim(&u, top, &uw).map_err(|e| e.to_string())?;
        check((hd, ud) == (2, 4), || format!("d = {d}: H_{top} hopf {hd}, unlink {ud}"))?;
        within(start, Duration::from_secs(60), &format!("d = {d}"))?;
        notes.push(format!("d={d}: H_{top} {hd} vs {ud}{}", if collides { " (a on a realizable length, unchecked window)" } else { "" }));
    }
    Ok(notes.join("; "))
}

fn is_chord_word(dga: &Dga, w: &Word) -> bool {
    w.letters().iter().all(|&g| dga.generator(g).weight == 1)
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for d in [2i64, 3] {
        let f = build_hopf(d).and_then(|h| h.forget_f()).map_err(|e| e.to_string())?;
        for a in [q(9, 2), q(13, 2)] {
            let w = f.window(a.clone()).map_err(|e| e.to_string())?;
            let top = (0..).take_while(|&p| p < 64).filter(|&p| !word_basis(&f, p, &w).is_empty()).max().unwrap_or(0);
            for p in 0..=top {
                let words = word_basis(&f, p, &w);
                let chord_words = words.iter().filter(|x| is_chord_word(&f, x)).count();
                let dim = homology_dim(&f, p, &w).map_err(|e| e.to_string())?;
                check(dim == chord_words, || format!("d = {d}, a = {a}, p = {p}: H = {dim}, chord words {chord_words}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (d, a, p) cases"))
}

fn criterion_6() -> Outcome {
    let h = build_hopf(2).map_err(|e| e.to_string())?;
    let w = h.window(q(9, 2)).map_err(|e| e.to_string())?;
    let fc = FilteredComplex::from_dga(&h, &w).map_err(|e| e.to_string())?;
    let e1 = SpectralSequence::new(&fc).page(1).map_err(|e| e.to_string())?;
    for (&(p, qq), &d) in &e1.dims {
        let direct = associated_graded_homology(&fc, p, p + qq);
        check(d == direct, || format!("E1({p},{qq}) = {d}, direct {direct}"))?;
    }
    check(convergence_check(&fc), || "hopf(2) does not converge".into())?;

    let f = h.forget_f().map_err(|e| e.to_string())?;
    let ff = FilteredComplex::from_dga(&f, &w).map_err(|e| e.to_string())?;
    let e2 = SpectralSequence::new(&ff).page(2).map_err(|e| e.to_string())?;
    check(convergence_check(&ff), || "forget_F does not converge".into())?;
    let top = e2.dims.keys().map(|&(p, qq)| p + qq).max().unwrap_or(0);
    let mut expected = std::collections::BTreeMap::new();
    for n in 0..=top {
        for x in word_basis(&f, n, &w).iter().filter(|x| is_chord_word(&f, x)) {
            *expected.entry((-(x.len() as i64), n + x.len() as i64)).or_insert(0usize) += 1;
        }
    }
    for (&(p, qq), &d) in &e2.dims {
        let want = expected.get(&(p, qq)).copied().unwrap_or(0);
        check(d == want, || format!("forget_F E2({p},{qq}) = {d}, chord words {want}"))?;
    }
    check(expected.keys().all(|k| e2.dims.contains_key(k)), || "chord word outside the E2 table".into())?;
    Ok(format!("{} E1 entries, {} E2 entries", e1.dims.len(), e2.dims.len()))
}

struct ChordRun {
    name: &'static str,
    report: SpectrumReport,
    expected: Vec<f64>,
    time: Duration,
}

fn chord_runs() -> Result<Vec<ChordRun>, String> {
    let configs = [
        ("hopf d=2", BuiltinLink::Hopf, 2, vec![1.0, 2.0, 3.0]),
        ("unlink z2*=3", BuiltinLink::Unlink, 2, vec![2.0, 3.0, 13f64.sqrt()]),
        ("hopf d=3", BuiltinLink::Hopf, 3, vec![1.0, 2.0, 3.0]),
    ];
    let mut out = Vec::new();
    for (name, which, d, expected) in configs {
        let k = builtin_config(which, d, 3.0).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let report = find_spectrum(&k, &ChordConfig::default()).map_err(|e| e.to_string())?;
        out.push(ChordRun { name, report, expected, time: start.elapsed() });
    }
    Ok(out)
}

fn criterion_7(runs: &[ChordRun]) -> Outcome {
    let mut notes = Vec::new();
    for run in runs {
        let got = run.report.lengths();
        check(
            got.len() == run.expected.len() && got.iter().zip(&run.expected).all(|(g, w)| (g - w).abs() < 1e-6),
            || format!("{}: lengths {got:?}, want {:?}", run.name, run.expected),
        )?;
        let worst = run.report.chords.iter().map(|c| c.residual).fold(0.0, f64::max);
        check(worst < 1e-8, || format!("{}: residual {worst:e}", run.name))?;
        check(run.time < Duration::from_secs(30), || format!("{}: took {:?}", run.name, run.time))?;
        notes.push(format!("{} {:.1}s", run.name, run.time.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn random_unit(rng: &mut StdRng, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

fn gradient_error(k: &ParamSubmanifold, path: &BrokenPath, r: f64) -> Result<f64, String> {
    let g = l_r_gradient(k, path, r).map_err(|e| e.to_string())?;
    let h = 1e-6;
    let f = |p: &BrokenPath| l_r_value(p, r).unwrap();
    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    let n = path.points[0].len();
    for l in 1..path.nu() {
        for c in 0..n {
            let mut a = path.clone();
            let mut b = path.clone();
            a.points[l][c] += h;
            b.points[l][c] -= h;
            numeric.push((f(&a) - f(&b)) / (2.0 * h));
            analytic.push(g.interior[l - 1][c]);
        }
    }
    for (end, grad) in [(0, &g.source), (1, &g.target)] {
        let u = if end == 0 { &path.u0 } else { &path.u1 };
        let t = tangent_basis(u);
        for c in 0..grad.len() {
            let mut e = DVector::zeros(grad.len());
            e[c] = h;
            let mut a = path.clone();
            let mut b = path.clone();
            let (ua, ub) = ((u + &t * &e).normalize(), (u - &t * &e).normalize());
            if end == 0 {
                (a.u0, b.u0) = (ua, ub);
            } else {
                (a.u1, b.u1) = (ua, ub);
            }
            a.sync_endpoints(k);
            b.sync_endpoints(k);
            numeric.push((f(&a) - f(&b)) / (2.0 * h));
            analytic.push(grad[c]);
        }
    }
    let diff: f64 = analytic.iter().zip(&numeric).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = analytic.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(diff / norm)
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let configs = [
        builtin_config(BuiltinLink::Hopf, 2, 3.0),
        builtin_config(BuiltinLink::Unlink, 2, 3.0),
        builtin_config(BuiltinLink::Hopf, 3, 3.0),
    ];
    let configs: Vec<ParamSubmanifold> = configs.into_iter().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let k = &configs[i % configs.len()];
        let (s, t) = (rng.random_range(0..2usize), rng.random_range(0..2usize));
        let dim = k.components[s].param_dim();
        let u0 = random_unit(&mut rng, dim);
        let u1 = random_unit(&mut rng, k.components[t].param_dim());
        let nu = rng.random_range(2..=16usize);
        let mut path = BrokenPath::straight(k, (s, u0), (t, u1), nu);
        let scale = 0.5 / nu as f64;
        for l in 1..nu {
            for c in 0..path.points[l].len() {
                path.points[l][c] += rng.random_range(-scale..scale);
            }
        }
        for r in [1e-2, 1e-6] {
            let e = gradient_error(k, &path, r)?;
            check(e < 1e-5, || format!("path {i}, r = {r}: relative error {e:e}"))?;
            worst = worst.max(e);
        }
    }
    Ok(format!("max relative error {worst:.1e} over 100 paths x 2 r"))
}

fn criterion_9(runs: &[ChordRun]) -> Outcome {
    let (mut l, mut f, mut steps) = (0, 0, 0);
    for run in runs {
        l += run.report.l_violations;
        f += run.report.f_violations;
        steps += run.report.descent_steps;
    }
    check(l == 0 && f == 0, || format!("{l} L_r and {f} max-segment violations"))?;
    check(steps > 0, || "no descent steps were taken".into())?;
    Ok(format!("0 violations over {steps} accepted steps"))
}

fn criterion_10(runs: &[ChordRun]) -> Outcome {
    let mut worst: f64 = 0.0;
    for run in runs {
        for c in &run.report.chords {
            check(c.nu == 16, || format!("{}: chord at nu = {}", run.name, c.nu))?;
            check(c.refinement_shift < 1e-6, || format!("{}: shift {:e} at length {}", run.name, c.refinement_shift, c.length))?;
            worst = worst.max(c.refinement_shift);
        }
    }
    // an independent search at nu = 32 lands on the same lengths
    let k = builtin_config(BuiltinLink::Hopf, 2, 3.0).map_err(|e| e.to_string())?;
    let fine = find_spectrum(&k, &ChordConfig { nu: 32, ..ChordConfig::default() }).map_err(|e| e.to_string())?;
    let coarse = runs[0].report.lengths();
    let got = fine.lengths();
    check(
        got.len() == coarse.len() && got.iter().zip(&coarse).all(|(a, b)| (a - b).abs() < 1e-6),
        || format!("nu = 32 lengths {got:?} vs nu = 16 {coarse:?}"),
    )?;
    Ok(format!("max shift {worst:.1e}"))
}

fn criterion_11() -> Outcome {
    let err = |e: strhom::cord::CordError| e.to_string();
    let h = build_hopf(2).map_err(|e| e.to_string())?;
    let u = build_unlink(2, &Rational::from_int(3)).map_err(|e| e.to_string())?;
    let hw = h.window(q(13, 2)).map_err(|e| e.to_string())?;
    let uw = u.window(q(41, 2)).map_err(|e| e.to_string())?;
    for wmax in 0..=4 {
        let c = compare_with_h0(&builtin_presentation(CordBuiltin::HopfLink, 2).map_err(err)?, &h, &hw, wmax).map_err(err)?;
        check(c.matches(), || format!("hopf wmax {wmax}: {c:?}"))?;
        let c = compare_with_h0(&builtin_presentation(CordBuiltin::Unlink2, 2).map_err(err)?, &u, &uw, wmax).map_err(err)?;
        check(c.matches(), || format!("unlink wmax {wmax}: {c:?}"))?;
    }
    let unknot = quotient_dims_by_wordcount(&builtin_presentation(CordBuiltin::Unknot, 2).map_err(err)?, 3).map_err(err)?;
    check(unknot == [1, 0, 0, 0], || format!("unknot {unknot:?}"))?;
    for which in [CordBuiltin::Unknot, CordBuiltin::HopfLink, CordBuiltin::Unlink2] {
        let a = quotient_dims_by_wordcount(&builtin_presentation(which, 2).map_err(err)?, 4).map_err(err)?;
        let b = quotient_dims_by_wordcount(&builtin_presentation(which, 4).map_err(err)?, 4).map_err(err)?;
        check(a == b, || format!("{which:?}: kmax 2 {a:?}, kmax 4 {b:?}"))?;
    }
    Ok("MATCH for hopf_link and unlink2, unknot [1,0,0,0], stable for kmax 2 -> 4".into())
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "DGA well-formedness", criterion_1()),
        (2, "Hopf d=2 degree-0 homology", criterion_2()),
        (3, "Unlink d=2 degree-0 homology", criterion_3()),
        (4, "d>=3 low-degree table", criterion_4()),
        (5, "Stabilization", criterion_5()),
        (6, "Spectral sequence", criterion_6()),
    ];
    match chord_runs() {
        Ok(runs) => {
            results.push((7, "Chord spectra", criterion_7(&runs)));
            results.push((8, "Gradient correctness", criterion_8()));
            results.push((9, "Flow monotonicity", criterion_9(&runs)));
            results.push((10, "Refinement stability", criterion_10(&runs)));
        }
        Err(e) => {
            for (n, name) in [(7, "Chord spectra"), (9, "Flow monotonicity"), (10, "Refinement stability")] {
                results.push((n, name, Err(e.clone())));
            }
            results.push((8, "Gradient correctness", criterion_8()));
            results.sort_by_key(|r| r.0);
        }
    }
    results.push((11, "Cord cross-check", criterion_11()));
    let all = results.iter().all(|r| r.2.is_ok());
    results.push((
        12,
        "Scope: acceptance rests on criteria 1-11",
        if all { Ok("all finite checks pass".into()) } else { Err("a finite check failed".into()) },
    ));
    for (n, name, outcome) in &results {
        match outcome {
            Ok(note) => println!("PASS {n:>2} {name}: {note}"),
            Err(why) => println!("FAIL {n:>2} {name}: {why}"),
        }
    }
    if !all {
        std::process::exit(1);
    }
}
