use nalgebra::{DMatrix, DVector};

use super::manifold::{tangent_basis, ParamSubmanifold};

/// Critical point of `E(u, u') = |p(u) - p'(u')|^2 / 2` on a pair of
/// parameter spheres.
#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub u0: DVector<f64>,
    pub u1: DVector<f64>,
    pub grad_norm: f64,
    pub converged: bool,
}

/// Gradient and Hessian of `E` in the chart `ξ ↦ normalize(u + T ξ)` at
/// `ξ = 0`, for both spheres at once.
fn derivatives(
    k: &ParamSubmanifold,
    (i, u0): (usize, &DVector<f64>),
    (j, u1): (usize, &DVector<f64>),
) -> (DVector<f64>, DMatrix<f64>) {
    let a = &k.components[i];
    let b = &k.components[j];
    let t0 = tangent_basis(u0);
    let t1 = tangent_basis(u1);
    let w = a.embed(u0) - b.embed(u1);
    // ambient tangent directions scaled by the radii
    let j0 = &a.frame * &t0 * a.radius;
    let j1 = &b.frame * &t1 * b.radius;
    let m0 = t0.ncols();
    let m1 = t1.ncols();
    let mut g = DVector::zeros(m0 + m1);
    g.rows_mut(0, m0).copy_from(&(j0.transpose() * &w));
    g.rows_mut(m0, m1).copy_from(&(-(j1.transpose() * &w)));
    // second derivative of normalize(u + Tξ) at 0 is -δ_ij u
    let c0 = a.radius * w.dot(&(&a.frame * u0));
    let c1 = b.radius * w.dot(&(&b.frame * u1));
    let mut h = DMatrix::zeros(m0 + m1, m0 + m1);
    h.view_mut((0, 0), (m0, m0))
        .copy_from(&(j0.transpose() * &j0 - DMatrix::identity(m0, m0) * c0));
    h.view_mut((m0, m0), (m1, m1))
        .copy_from(&(j1.transpose() * &j1 + DMatrix::identity(m1, m1) * c1));
    let cross = -(j0.transpose() * &j1);
    h.view_mut((0, m0), (m0, m1)).copy_from(&cross);
    h.view_mut((m0, 0), (m1, m0)).copy_from(&cross.transpose());
    (g, h)
}

/// Riemannian Newton iteration for a critical point of `E` from a seed.
///
/// The Newton system is solved with an SVD pseudo-inverse, so directions
/// along a family of critical points (zero Hessian eigenvalues) are left
/// alone. Steps are capped at `max_step` radians.
pub fn newton_critical(
    k: &ParamSubmanifold,
    (i, u0): (usize, &DVector<f64>),
    (j, u1): (usize, &DVector<f64>),
    tol: f64,
    max_iters: usize,
) -> CriticalPair {
    let max_step = 0.5;
    let mut u0 = u0.normalize();
    let mut u1 = u1.normalize();
    let mut gn = f64::INFINITY;
    for _ in 0..max_iters {
        let (g, h) = derivatives(k, (i, &u0), (j, &u1));
        gn = g.norm();
        if gn < tol {
            return CriticalPair {
                u0,
                u1,
                grad_norm: gn,
                converged: true,
            };
        }
        let svd = h.svd(true, true);
        let smax = svd.singular_values.max();
        let eps = (smax * 1e-10).max(1e-300);
        let mut delta = match svd.pseudo_inverse(eps) {
            Ok(pinv) => -(pinv * &g),
            Err(_) => -g.clone(),
        };
        if !delta.iter().all(|x| x.is_finite()) || delta.norm() < 1e-300 {
            delta = -g.clone();
        }
        let norm = delta.norm();
        if norm > max_step {
            delta *= max_step / norm;
        }
        let m0 = u0.len() - 1;
        let t0 = tangent_basis(&u0);
        let t1 = tangent_basis(&u1);
        u0 = (&u0 + &t0 * delta.rows(0, m0)).normalize();
        u1 = (&u1 + &t1 * delta.rows(m0, delta.len() - m0)).normalize();
    }
    let (g, _) = derivatives(k, (i, &u0), (j, &u1));
    gn = gn.min(g.norm());
    CriticalPair {
        converged: g.norm() < tol,
        u0,
        u1,
        grad_norm: gn,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chords::manifold::{builtin_config, BuiltinLink};

    #[test]
    fn finite_difference_hessian() {
        let k = builtin_config(BuiltinLink::Hopf, 3, 0.0).unwrap();
        let u0 = DVector::from_vec(vec![0.3, 0.5, -0.4]).normalize();
        let u1 = DVector::from_vec(vec![-0.6, 0.1, 0.7]).normalize();
        let (g, h) = derivatives(&k, (0, &u0), (1, &u1));
        let energy = |x: &DVector<f64>| {
            let t0 = tangent_basis(&u0);
            let t1 = tangent_basis(&u1);
            let a = (&u0 + &t0 * x.rows(0, 2)).normalize();
            let b = (&u1 + &t1 * x.rows(2, 2)).normalize();
            0.5 * (k.components[0].embed(&a) - k.components[1].embed(&b)).norm_squared()
        };
        let eps = 1e-4;
        for a in 0..4 {
            let mut e = DVector::zeros(4);
            e[a] = eps;
            let fd = (energy(&e) - energy(&-&e)) / (2.0 * eps);
            assert!((fd - g[a]).abs() < 1e-7, "gradient {a}");
            for b in 0..4 {
                let mut f = DVector::zeros(4);
                f[b] = eps;
                let fd2 = (energy(&(&e + &f)) - energy(&(&e - &f)) - energy(&(&f - &e)) + energy(&(-&e - &f)))
                    / (4.0 * eps * eps);
                assert!((fd2 - h[(a, b)]).abs() < 1e-5, "hessian {a},{b}");
            }
        }
    }

    #[test]
    fn newton_finds_the_long_hopf_chord() {
        let k = builtin_config(BuiltinLink::Hopf, 2, 0.0).unwrap();
        let u0 = DVector::from_vec(vec![0.2, -1.0]).normalize();
        let u1 = DVector::from_vec(vec![0.9, 0.3]).normalize();
        let c = newton_critical(&k, (0, &u0), (1, &u1), 1e-13, 60);
        assert!(c.converged);
        let len = (k.components[0].embed(&c.u0) - k.components[1].embed(&c.u1)).norm();
        assert!((len - 3.0).abs() < 1e-12, "{len}");
    }
}
