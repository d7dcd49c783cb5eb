use serde::{Deserialize, Serialize};

use super::manifold::ParamSubmanifold;
use super::path::{l_r_difference, l_r_gradient, l_r_value, max_segment_value, step, BrokenPath};
use super::ChordError;

/// Numerical settings for chord searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordConfig {
    /// Segments per broken path.
    pub nu: usize,
    /// Smoothing parameters, strictly decreasing.
    pub r_schedule: Vec<f64>,
    pub grad_tol: f64,
    pub dedup_len_tol: f64,
    pub dedup_pt_tol: f64,
    /// Only chords shorter than this are reported; `None` picks the diameter
    /// bound of the submanifold plus 0.5.
    pub length_bound: Option<f64>,
    /// Cap on individual segment lengths.
    pub epsilon_g: f64,
    /// Cap on total path length; `None` means `length_bound + 1`.
    pub b0: Option<f64>,
    /// Chords shorter than this are discarded.
    pub eps_min: f64,
    /// Seed angles per circle.
    pub seeds_per_circle: usize,
    /// Icosphere subdivision frequency for 2-sphere seeds.
    pub sphere_freq: usize,
    /// Iteration cap for each descent run.
    pub max_iters: usize,
    /// Seed paths per ordered component pair that run the full gradient flow.
    pub flow_seeds: usize,
}

impl Default for ChordConfig {
    fn default() -> Self {
        ChordConfig {
            nu: 16,
            r_schedule: (2..=10).map(|k| 10f64.powi(-k)).collect(),
            grad_tol: 1e-9,
            dedup_len_tol: 1e-6,
            dedup_pt_tol: 1e-4,
            length_bound: None,
            epsilon_g: 1.0,
            b0: None,
            eps_min: 1e-3,
            seeds_per_circle: 24,
            sphere_freq: 4,
            max_iters: 20_000,
            flow_seeds: 4,
        }
    }
}

impl ChordConfig {
    pub fn validate(&self) -> Result<(), ChordError> {
        let bad = |msg: String| Err(ChordError::InvalidConfig(msg));
        if self.nu < 2 {
            return bad(format!("nu must be at least 2, got {}", self.nu));
        }
        if self.r_schedule.is_empty() {
            return bad("r_schedule is empty".into());
        }
        if self.r_schedule.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return bad("r_schedule entries must be positive".into());
        }
        if self.r_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return bad("r_schedule must be strictly decreasing".into());
        }
        let positive = [
            ("grad_tol", self.grad_tol),
            ("dedup_len_tol", self.dedup_len_tol),
            ("dedup_pt_tol", self.dedup_pt_tol),
            ("epsilon_g", self.epsilon_g),
            ("eps_min", self.eps_min),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        for (name, v) in [("length_bound", self.length_bound), ("b0", self.b0)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        if self.seeds_per_circle < 3 || self.max_iters == 0 {
            return bad("seeds_per_circle must be at least 3 and max_iters positive".into());
        }
        Ok(())
    }

    pub fn length_bound_for(&self, k: &ParamSubmanifold) -> f64 {
        self.length_bound.unwrap_or_else(|| k.diameter_bound() + 0.5)
    }

    pub fn b0_for(&self, k: &ParamSubmanifold) -> f64 {
        self.b0.unwrap_or_else(|| self.length_bound_for(k) + 1.0)
    }
}

/// Relative slack used when checking that monitored values do not increase.
pub const MONOTONE_SLACK: f64 = 1e-13;

/// Result of one descent run.
#[derive(Clone, Debug)]
pub struct DescentOutcome {
    pub path: BrokenPath,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm: f64,
    /// Accepted steps along which `L_r` increased.
    pub l_violations: usize,
    /// Accepted steps along which the largest smoothed segment increased.
    pub f_violations: usize,
    /// `(L_r, max segment)` before the first and after every accepted step.
    pub trace: Vec<(f64, f64)>,
}

fn increased(new: f64, old: f64) -> bool {
    new > old + MONOTONE_SLACK * old.abs().max(1.0)
}

/// Negative gradient flow of `L_r`, discretised with Barzilai–Borwein step
/// sizes and backtracking. A step is accepted when it satisfies the Armijo
/// condition and does not increase the largest smoothed segment. Stops once the gradient norm is below
/// `cfg.grad_tol`; otherwise returns the last iterate with
/// `converged = false`.
pub fn descend(
    k: &ParamSubmanifold,
    path: &BrokenPath,
    r: f64,
    cfg: &ChordConfig,
) -> Result<DescentOutcome, ChordError> {
    let mut x = path.clone();
    x.sync_endpoints(k);
    let mut value = l_r_value(&x, r)?;
    let mut fmax = max_segment_value(&x, r);
    let mut g = l_r_gradient(k, &x, r)?;
    let mut trace = vec![(value, fmax)];
    let mut t = 0.5 * x.length().max(cfg.eps_min) / x.nu() as f64;
    let (mut l_violations, mut f_violations) = (0, 0);

    // Re-normalising the endpoint parameters moves the endpoints off the
    // sphere by about one ulp, which changes L_r by that much regardless of
    // the step size.
    let nu = x.nu();
    let noise = 4.0 * f64::EPSILON * (1.0 + x.points[0].norm() + x.points[nu].norm());
    for it in 0..cfg.max_iters {
        let gn2 = g.norm_squared();
        if gn2.sqrt() < cfg.grad_tol {
            return Ok(DescentOutcome {
                path: x,
                converged: true,
                iterations: it,
                grad_norm: gn2.sqrt(),
                l_violations,
                f_violations,
                trace,
            });
        }
        // Armijo backtracking from the current trial step
        let mut trial = t;
        let mut accepted = None;
        for _ in 0..80 {
            let y = step(k, &x, &g, trial);
            let change = l_r_difference(&x, &y, r)?;
            if change <= -1e-4 * trial * gn2 + noise && !increased(max_segment_value(&y, r), fmax) {
                accepted = Some((y, change));
                break;
            }
            trial *= 0.5;
        }
        let Some((y, change)) = accepted else {
            break;
        };
        let v = l_r_value(&y, r)?;
        let fy = max_segment_value(&y, r);
        if change > MONOTONE_SLACK * value.abs().max(1.0) || increased(v, value) {
            l_violations += 1;
        }
        if increased(fy, fmax) {
            f_violations += 1;
        }
        let gy = l_r_gradient(k, &y, r)?;
        // Barzilai–Borwein step from the accepted move
        let s_dot_y = trial * g.dot(&g.sub(&gy));
        let s_dot_s = trial * trial * gn2;
        t = if s_dot_y > 0.0 {
            (s_dot_s / s_dot_y).clamp(1e-12, 1e3)
        } else {
            trial * 2.0
        };
        x = y;
        value = v;
        fmax = fy;
        g = gy;
        trace.push((value, fmax));
    }
    let grad_norm = g.norm();
    Ok(DescentOutcome {
        path: x,
        converged: grad_norm < cfg.grad_tol,
        iterations: trace.len() - 1,
        grad_norm,
        l_violations,
        f_violations,
        trace,
    })
}
