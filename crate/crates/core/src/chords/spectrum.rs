use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::critical::{newton_critical, CriticalPair};
use super::descent::{descend, ChordConfig};
use super::manifold::{seed_params, ParamSubmanifold};
use super::path::{binormality_residual, refine, BrokenPath};
use super::ChordError;

/// Largest binormality residual of an accepted chord.
pub const ACCEPT_RESIDUAL: f64 = 1e-8;
/// Largest length change of an accepted chord under `ν ↦ 2ν`.
pub const REFINE_TOL: f64 = 1e-6;

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_ITERS: usize = 60;

/// A converged binormal chord, one per length class and component pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordResult {
    /// Source and target component, with `source <= target`.
    pub components: (usize, usize),
    /// Unit parameter vectors of the endpoints.
    pub theta0: Vec<f64>,
    pub theta1: Vec<f64>,
    /// Polygonal length `Σ |q^{l+1} - q^l|`.
    pub length: f64,
    pub residual: f64,
    /// Number of distinct endpoint pairs found with this length.
    pub multiplicity: usize,
    /// Segment count of the reported path.
    pub nu: usize,
    /// Length change after midpoint refinement and renewed descent.
    pub refinement_shift: f64,
    pub points: Vec<Vec<f64>>,
}

/// Output of [`find_spectrum`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub config: ChordConfig,
    pub length_bound: f64,
    pub chords: Vec<ChordResult>,
    /// Seed pairs tried.
    pub seeds: usize,
    /// Seeds whose endpoint Newton iteration did not converge.
    pub seed_failures: usize,
    /// Length classes whose descent, residual or refinement check failed.
    pub chord_failures: usize,
    /// Length classes attempted.
    pub classes: usize,
    pub l_violations: usize,
    pub f_violations: usize,
    pub descent_steps: usize,
}

impl SpectrumReport {
    /// Failed runs over all runs, counting seeds and length classes.
    pub fn failure_rate(&self) -> f64 {
        let total = self.seeds + self.classes;
        if total == 0 {
            0.0
        } else {
            (self.seed_failures + self.chord_failures) as f64 / total as f64
        }
    }

    /// Distinct chord lengths in increasing order.
    pub fn lengths(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for c in &self.chords {
            if out.last().is_none_or(|&l| c.length - l >= self.config.dedup_len_tol) {
                out.push(c.length);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per chord class: `length,source,target,multiplicity,residual`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("length,source,target,multiplicity,residual\n");
        for c in &self.chords {
            s.push_str(&format!(
                "{:.15},{},{},{},{:e}\n",
                c.length, c.components.0, c.components.1, c.multiplicity, c.residual
            ));
        }
        s
    }
}

struct Found {
    pair: (usize, usize),
    crit: CriticalPair,
    p: DVector<f64>,
    q: DVector<f64>,
    length: f64,
}

/// Puts a critical pair in canonical orientation: `source <= target`, and
/// for self chords the lexicographically smaller endpoint first.
fn orient(k: &ParamSubmanifold, i: usize, j: usize, c: CriticalPair) -> Found {
    let (i, j, c) = if i > j {
        (
            j,
            i,
            CriticalPair {
                u0: c.u1,
                u1: c.u0,
                ..c
            },
        )
    } else {
        (i, j, c)
    };
    let mut p = k.components[i].embed(&c.u0);
    let mut q = k.components[j].embed(&c.u1);
    let mut c = c;
    if i == j && q.iter().partial_cmp(p.iter()) == Some(std::cmp::Ordering::Less) {
        std::mem::swap(&mut p, &mut q);
        std::mem::swap(&mut c.u0, &mut c.u1);
    }
    let length = (&q - &p).norm();
    Found {
        pair: (i, j),
        crit: c,
        p,
        q,
        length,
    }
}

fn dist(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

struct PipelineStats {
    l_violations: usize,
    f_violations: usize,
    steps: usize,
}

enum Flow {
    Converged,
    Stalled,
    /// The path became shorter than `eps_min`.
    Short,
}

/// Runs [`descend`] down the `r` schedule.
fn continuation(
    k: &ParamSubmanifold,
    path: &mut BrokenPath,
    cfg: &ChordConfig,
    stats: &mut PipelineStats,
) -> Result<Flow, ChordError> {
    let mut converged = true;
    for &r in &cfg.r_schedule {
        let out = descend(k, path, r, cfg)?;
        stats.l_violations += out.l_violations;
        stats.f_violations += out.f_violations;
        stats.steps += out.iterations;
        converged = out.converged;
        *path = out.path;
        if path.length() < cfg.eps_min {
            return Ok(Flow::Short);
        }
    }
    Ok(if converged { Flow::Converged } else { Flow::Stalled })
}

/// Descent with continuation in `r`, polish, and the acceptance checks for a
/// single chord class.
fn run_pipeline(
    k: &ParamSubmanifold,
    rep: &Found,
    multiplicity: usize,
    cfg: &ChordConfig,
    stats: &mut PipelineStats,
) -> Result<Option<ChordResult>, ChordError> {
    let mut nu = cfg.nu;
    while rep.length / nu as f64 >= cfg.epsilon_g {
        nu *= 2;
    }
    let (i, j) = rep.pair;
    let mut path = BrokenPath::straight(k, (i, rep.crit.u0.clone()), (j, rep.crit.u1.clone()), nu);
    if !matches!(continuation(k, &mut path, cfg, stats)?, Flow::Converged) {
        return Ok(None);
    }
    let polished = newton_critical(k, (i, &path.u0), (j, &path.u1), NEWTON_TOL, NEWTON_ITERS);
    if polished.converged {
        path.u0 = polished.u0;
        path.u1 = polished.u1;
        path.sync_endpoints(k);
    }
    let r_last = *cfg.r_schedule.last().expect("validated schedule");
    let out = descend(k, &path.straightened(), r_last, cfg)?;
    stats.l_violations += out.l_violations;
    stats.f_violations += out.f_violations;
    stats.steps += out.iterations;
    if !out.converged {
        return Ok(None);
    }
    let path = out.path;
    let residual = match binormality_residual(k, &path, cfg.eps_min) {
        Ok(r) => r,
        Err(ChordError::DegenerateSegment { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let fine = descend(k, &refine(&path), r_last, cfg)?;
    stats.l_violations += fine.l_violations;
    stats.f_violations += fine.f_violations;
    stats.steps += fine.iterations;
    let length = path.length();
    let shift = (fine.path.length() - length).abs();
    if residual >= ACCEPT_RESIDUAL || !fine.converged || shift >= REFINE_TOL {
        return Ok(None);
    }
    Ok(Some(ChordResult {
        components: (i, j),
        theta0: path.u0.iter().copied().collect(),
        theta1: path.u1.iter().copied().collect(),
        length,
        residual,
        multiplicity,
        nu,
        refinement_shift: shift,
        points: path.points.iter().map(|p| p.iter().copied().collect()).collect(),
    }))
}

/// Binormal chords of `k` shorter than the length bound.
///
/// Every pair of seed parameters on every ordered pair of components is
/// driven to a critical point of the endpoint distance by Newton's method,
/// and `cfg.flow_seeds` straight seed paths per ordered pair follow the
/// gradient flow of `L_r` down the `r` schedule. The critical points are grouped by component pair and length; one chord
/// per group then goes through `r`-continuation of the gradient flow of
/// `L_r`, a final Newton polish, and the residual and refinement checks.
pub fn find_spectrum(k: &ParamSubmanifold, cfg: &ChordConfig) -> Result<SpectrumReport, ChordError> {
    cfg.validate()?;
    let a = cfg.length_bound_for(k);
    let b0 = cfg.b0_for(k);
    let n = k.components.len();
    let mut found: Vec<Found> = Vec::new();
    let (mut seeds, mut seed_failures) = (0, 0);
    for i in 0..n {
        let si = seed_params(k.components[i].param_dim(), cfg.seeds_per_circle, cfg.sphere_freq);
        for j in 0..n {
            let sj = seed_params(k.components[j].param_dim(), cfg.seeds_per_circle, cfg.sphere_freq);
            for u0 in &si {
                for u1 in &sj {
                    let start = (k.components[i].embed(u0) - k.components[j].embed(u1)).norm();
                    if start < cfg.eps_min || start > b0 {
                        continue;
                    }
                    seeds += 1;
                    let c = newton_critical(k, (i, u0), (j, u1), NEWTON_TOL, NEWTON_ITERS);
                    if !c.converged {
                        seed_failures += 1;
                        continue;
                    }
                    let f = orient(k, i, j, c);
                    if f.length >= cfg.eps_min && f.length < a {
                        found.push(f);
                    }
                }
            }
        }
    }
    let mut stats = PipelineStats {
        l_violations: 0,
        f_violations: 0,
        steps: 0,
    };
    // gradient flow of L_r from straight seed paths; these runs end at local
    // minima, which join the Newton results
    for i in 0..n {
        let si = seed_params(k.components[i].param_dim(), cfg.seeds_per_circle, cfg.sphere_freq);
        for j in 0..n {
            let sj = seed_params(k.components[j].param_dim(), cfg.seeds_per_circle, cfg.sphere_freq);
            let total = si.len() * sj.len();
            let count = cfg.flow_seeds.min(total);
            for s in 0..count {
                // spread the picks over the seed grid, off its diagonal
                let idx = (s * total / count.max(1) + s * si.len() / count.max(1) + total / 3) % total;
                let (u0, u1) = (&si[idx / sj.len()], &sj[idx % sj.len()]);
                let mut path = BrokenPath::straight(k, (i, u0.clone()), (j, u1.clone()), cfg.nu);
                if path.length() < cfg.eps_min {
                    continue;
                }
                seeds += 1;
                match continuation(k, &mut path, cfg, &mut stats)? {
                    Flow::Converged => {}
                    Flow::Short => continue,
                    Flow::Stalled => {
                        seed_failures += 1;
                        continue;
                    }
                }
                let c = newton_critical(k, (i, &path.u0), (j, &path.u1), NEWTON_TOL, NEWTON_ITERS);
                if !c.converged {
                    seed_failures += 1;
                    continue;
                }
                let f = orient(k, i, j, c);
                if f.length >= cfg.eps_min && f.length < a {
                    found.push(f);
                }
            }
        }
    }
    found.sort_by(|x, y| x.pair.cmp(&y.pair).then(x.length.total_cmp(&y.length)));

    let mut chords = Vec::new();
    let (mut classes, mut chord_failures) = (0, 0);
    let mut start = 0;
    while start < found.len() {
        let mut end = start + 1;
        while end < found.len()
            && found[end].pair == found[start].pair
            && found[end].length - found[end - 1].length < cfg.dedup_len_tol
        {
            end += 1;
        }
        let group = &found[start..end];
        let mut clusters: Vec<&Found> = Vec::new();
        for f in group {
            let near = |g: &&Found| dist(&g.p, &f.p) < cfg.dedup_pt_tol && dist(&g.q, &f.q) < cfg.dedup_pt_tol;
            if !clusters.iter().any(near) {
                clusters.push(f);
            }
        }
        classes += 1;
        match run_pipeline(k, clusters[0], clusters.len(), cfg, &mut stats)? {
            Some(c) => chords.push(c),
            None => chord_failures += 1,
        }
        start = end;
    }
    chords.sort_by(|x, y| x.length.total_cmp(&y.length).then(x.components.cmp(&y.components)));
    Ok(SpectrumReport {
        config: cfg.clone(),
        length_bound: a,
        chords,
        seeds,
        seed_failures,
        chord_failures,
        classes,
        l_violations: stats.l_violations,
        f_violations: stats.f_violations,
        descent_steps: stats.steps,
    })
}

/// All sums of `m` chord lengths (with repetition) below `a`, sorted and
/// merged within `tol`.
pub fn chord_sum_spectrum(lengths: &[f64], m: usize, a: f64, tol: f64) -> Vec<f64> {
    let base: Vec<f64> = lengths.iter().copied().filter(|&l| l < a).collect();
    let mut sums = vec![0.0];
    for _ in 0..m {
        let mut next = Vec::new();
        for s in &sums {
            for l in &base {
                if s + l < a {
                    next.push(s + l);
                }
            }
        }
        next.sort_by(f64::total_cmp);
        next.dedup_by(|x, y| (*x - *y).abs() < tol);
        sums = next;
    }
    if m == 0 {
        return Vec::new();
    }
    sums
}
