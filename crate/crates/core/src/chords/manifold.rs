use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ChordError;

/// Round sphere `S^{k-1}` embedded in `R^n` as `u ↦ center + radius·frame·u`
/// for unit vectors `u ∈ R^k`. The columns of `frame` are orthonormal.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereComponent {
    pub center: DVector<f64>,
    pub frame: DMatrix<f64>,
    pub radius: f64,
}

impl SphereComponent {
    pub fn new(center: DVector<f64>, frame: DMatrix<f64>, radius: f64) -> Result<Self, ChordError> {
        if frame.nrows() != center.len() {
            return Err(ChordError::InvalidManifold(format!(
                "frame has {} rows for a center in R^{}",
                frame.nrows(),
                center.len()
            )));
        }
        if frame.ncols() < 2 {
            return Err(ChordError::InvalidManifold("spheres need a frame of at least 2 columns".into()));
        }
        if radius.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(ChordError::InvalidManifold(format!("radius must be positive, got {radius}")));
        }
        let gram = frame.transpose() * &frame;
        let defect = (gram - DMatrix::identity(frame.ncols(), frame.ncols())).amax();
        if defect > 1e-10 {
            return Err(ChordError::InvalidManifold(format!(
                "frame columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(SphereComponent { center, frame, radius })
    }

    /// Dimension `k` of the parameter space `R^k ⊃ S^{k-1}`.
    pub fn param_dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.center.len()
    }

    pub fn embed(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.center + &self.frame * u * self.radius
    }

    /// Orthonormal tangent basis of the sphere at `u`, in parameter space.
    pub fn param_tangent(&self, u: &DVector<f64>) -> DMatrix<f64> {
        tangent_basis(u)
    }

    /// Orthonormal basis of the tangent space of the embedded sphere at the
    /// image of `u`, as columns in `R^n`.
    pub fn tangent(&self, u: &DVector<f64>) -> DMatrix<f64> {
        &self.frame * tangent_basis(u)
    }

    /// Moves `u` along the tangent vector `t·basis·xi` and renormalises.
    pub fn retract(&self, u: &DVector<f64>, basis: &DMatrix<f64>, xi: &DVector<f64>) -> DVector<f64> {
        (u + basis * xi).normalize()
    }

    /// Preimage of the nearest point of the sphere to `x`.
    pub fn project_param(&self, x: &DVector<f64>) -> DVector<f64> {
        let v = self.frame.transpose() * (x - &self.center);
        if v.norm() < 1e-300 {
            let mut e = DVector::zeros(self.param_dim());
            e[0] = 1.0;
            e
        } else {
            v.normalize()
        }
    }
}

/// Deterministic orthonormal basis of `u^⊥` for a unit vector `u ∈ R^k`:
/// Gram–Schmidt on the standard basis with the coordinate of largest
/// `|u_i|` left out.
pub fn tangent_basis(u: &DVector<f64>) -> DMatrix<f64> {
    let k = u.len();
    let skip = u.iamax();
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(k - 1);
    for i in (0..k).filter(|&i| i != skip) {
        let mut v = DVector::zeros(k);
        v[i] = 1.0;
        v -= u * u[i];
        for c in &cols {
            let dot = c.dot(&v);
            v -= c * dot;
        }
        cols.push(v.normalize());
    }
    DMatrix::from_columns(&cols)
}

/// Finite union of disjoint round spheres in `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSubmanifold {
    pub name: String,
    pub components: Vec<SphereComponent>,
}

impl ParamSubmanifold {
    pub fn new(name: impl Into<String>, components: Vec<SphereComponent>) -> Result<Self, ChordError> {
        let n = components.first().map(|c| c.ambient_dim()).unwrap_or(0);
        if components.is_empty() || components.iter().any(|c| c.ambient_dim() != n) {
            return Err(ChordError::InvalidManifold(
                "need at least one component, all in the same ambient space".into(),
            ));
        }
        Ok(ParamSubmanifold {
            name: name.into(),
            components,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.components[0].ambient_dim()
    }

    /// Upper bound for the distance between any two points.
    pub fn diameter_bound(&self) -> f64 {
        let mut best: f64 = 0.0;
        for a in &self.components {
            for b in &self.components {
                best = best.max((&a.center - &b.center).norm() + a.radius + b.radius);
            }
        }
        best
    }

    pub fn to_spec(&self) -> ManifoldSpec {
        ManifoldSpec {
            name: Some(self.name.clone()),
            components: self
                .components
                .iter()
                .map(|c| ComponentSpec {
                    center: c.center.iter().copied().collect(),
                    frame: c.frame.column_iter().map(|col| col.iter().copied().collect()).collect(),
                    radius: c.radius,
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &ManifoldSpec) -> Result<Self, ChordError> {
        let components = spec
            .components
            .iter()
            .map(|c| {
                let n = c.center.len();
                if c.frame.iter().any(|col| col.len() != n) {
                    return Err(ChordError::InvalidManifold("frame columns must match the center dimension".into()));
                }
                let cols: Vec<DVector<f64>> = c.frame.iter().map(|col| DVector::from_vec(col.clone())).collect();
                if cols.is_empty() {
                    return Err(ChordError::InvalidManifold("empty frame".into()));
                }
                SphereComponent::new(DVector::from_vec(c.center.clone()), DMatrix::from_columns(&cols), c.radius)
            })
            .collect::<Result<Vec<_>, _>>()?;
        ParamSubmanifold::new(spec.name.clone().unwrap_or_else(|| "custom".into()), components)
    }
}

/// JSON form of a [`ParamSubmanifold`]: each frame is a list of columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub center: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
    pub radius: f64,
}

/// Which link to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinLink {
    Hopf,
    Unlink,
}

/// The Hopf link `K0 ∪ K1` or the unlink `K0 ∪ K2` of unit `(d-1)`-spheres
/// in `R^{2d-1} = R^{d-1} × R × R^{d-1}`:
/// `K0 = {(z0, z1, 0)}`, `K1 = {(0, z1 + 1, z2)}`, `K2 = K0 + (0, 0, z2star)`
/// with `z2star = (z, 0, ..., 0)`.
pub fn builtin_config(which: BuiltinLink, d: usize, z2star: f64) -> Result<ParamSubmanifold, ChordError> {
    if d < 2 {
        return Err(ChordError::ParameterOutOfRange(format!("d must be at least 2, got {d}")));
    }
    let n = 2 * d - 1;
    // K0 spans the first d coordinates
    let mut f0 = DMatrix::zeros(n, d);
    for i in 0..d {
        f0[(i, i)] = 1.0;
    }
    let k0 = SphereComponent::new(DVector::zeros(n), f0.clone(), 1.0)?;
    match which {
        BuiltinLink::Hopf => {
            // K1 spans coordinates d-1 .. 2d-2, centred at e_{d-1}
            let mut f1 = DMatrix::zeros(n, d);
            for i in 0..d {
                f1[(d - 1 + i, i)] = 1.0;
            }
            let mut c1 = DVector::zeros(n);
            c1[d - 1] = 1.0;
            let k1 = SphereComponent::new(c1, f1, 1.0)?;
            ParamSubmanifold::new(format!("hopf(d={d})"), vec![k0, k1])
        }
        BuiltinLink::Unlink => {
            if z2star.is_nan() || z2star.abs() <= 2.0 {
                return Err(ChordError::ParameterOutOfRange(format!(
                    "unlink needs |z2star| > 2, got {z2star}"
                )));
            }
            let mut c2 = DVector::zeros(n);
            c2[d] = z2star;
            let k2 = SphereComponent::new(c2, f0, 1.0)?;
            ParamSubmanifold::new(format!("unlink(d={d}, z2star={z2star})"), vec![k0, k2])
        }
    }
}

/// Deterministic seed parameters on `S^{k-1}`: `per_circle` equally spaced
/// angles for circles, the vertices of a subdivided icosahedron (frequency
/// `sphere_freq`, `10 f^2 + 2` points) for 2-spheres, and a normalised grid on
/// the faces of the cube for higher dimensions.
pub fn seed_params(k: usize, per_circle: usize, sphere_freq: usize) -> Vec<DVector<f64>> {
    match k {
        2 => (0..per_circle)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / per_circle as f64;
                DVector::from_vec(vec![t.cos(), t.sin()])
            })
            .collect(),
        3 => icosphere(sphere_freq),
        _ => cube_grid(k, 3),
    }
}

fn push_unique(points: &mut Vec<DVector<f64>>, p: DVector<f64>) {
    if !points.iter().any(|q| (q - &p).norm() < 1e-9) {
        points.push(p);
    }
}

fn icosphere(freq: usize) -> Vec<DVector<f64>> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let v: Vec<DVector<f64>> = raw.iter().map(|p| DVector::from_row_slice(p)).collect();
    let faces = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let f = freq.max(1);
    let mut points = Vec::new();
    for [a, b, c] in faces {
        for i in 0..=f {
            for j in 0..=(f - i) {
                let k = f - i - j;
                let p = (&v[a] * i as f64 + &v[b] * j as f64 + &v[c] * k as f64).normalize();
                push_unique(&mut points, p);
            }
        }
    }
    points
}

fn cube_grid(k: usize, m: usize) -> Vec<DVector<f64>> {
    // m points per free coordinate on each of the 2k faces
    let ticks: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / m as f64).collect();
    let mut points = Vec::new();
    for axis in 0..k {
        for sign in [-1.0, 1.0] {
            let free = k - 1;
            let total = m.pow(free as u32);
            for idx in 0..total {
                let mut p = DVector::zeros(k);
                p[axis] = sign;
                let mut rest = idx;
                for c in (0..k).filter(|&c| c != axis) {
                    p[c] = ticks[rest % m];
                    rest /= m;
                }
                push_unique(&mut points, p.normalize());
            }
        }
    }
    points
}
