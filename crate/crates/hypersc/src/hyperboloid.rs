//! Hyperbolic space of curvature `-kappa` in the hyperboloid (Lorentz) model.
//!
//! Points are stored on the *unit* hyperboloid sheet
//! `{ v : <v,v>_L = -1, v_0 >= 1 }` in ambient Minkowski coordinates, where
//! `<a,b>_L = -a_0 b_0 + sum_{i>=1} a_i b_i`. Curvature enters only through
//! the local metric: the Riemannian inner product at curvature `-kappa` is
//! `<u,w>_L / kappa`, so distances scale as `d_kappa = d_1 / sqrt(kappa)`.
//! Keeping one normalized sheet keeps one set of closed forms.
//!
//! Numerical conventions:
//! - `exp` and parallel transport re-project their results onto the
//!   sheet/tangent space to bound error accumulation in long solver runs.
//! - Sheet and tangency defects are measured relative to the magnitude of the
//!   coordinates involved; for far points (`v_0` large) an absolute defect
//!   below f64 evaluation error is not observable.
//! - `distance` clamps `-<x,y>_L` to `[1, inf)`; violations beyond `1e-8`
//!   (relative) are reported as errors rather than clamped, since they signal
//!   a bug rather than floating-point drift.

use crate::error::{Error, Result};

/// Relative defect accepted by validating constructors before snapping the
/// value exactly onto the sheet / tangent space.
const VALIDATE_TOL: f64 = 1e-8;

/// Below this unit-sheet geodesic length, `sinh(r)/r`-type factors switch to
/// series expansions.
const SMALL_ARC: f64 = 1e-6;

/// Minkowski inner product `-a_0 b_0 + sum_{i>=1} a_i b_i`.
///
/// Errors on dimension mismatch; the crate-internal [`mink`] skips the check
/// on values already validated.
pub fn minkowski_inner(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "minkowski_inner: dimension mismatch ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(mink(a, b))
}

pub(crate) fn mink(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = -a[0] * b[0];
    for i in 1..a.len() {
        s += a[i] * b[i];
    }
    s
}

fn euclid_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A point on the upper unit hyperboloid sheet, tagged with the curvature
/// magnitude `kappa` of the space it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct HPoint {
    coords: Vec<f64>,
    kappa: f64,
}

/// A tangent vector at an [`HPoint`], in ambient Minkowski coordinates
/// (`<base, v>_L = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct HTangent {
    base: HPoint,
    coords: Vec<f64>,
}

impl HPoint {
    /// Validates ambient coordinates and snaps them exactly onto the sheet.
    ///
    /// Rejects non-finite input, dimension < 2 (`n >= 1`), lower-sheet points,
    /// and sheet defects beyond `1e-8` relative to the coordinate magnitude.
    pub fn new(coords: Vec<f64>, kappa: f64) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint(format!(
                "need at least 2 ambient coordinates, got {}",
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidPoint(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        if coords[0] <= 0.0 {
            return Err(Error::InvalidPoint(format!(
                "timelike coordinate {} is not on the upper sheet",
                coords[0]
            )));
        }
        let q = mink(&coords, &coords);
        let scale = (coords[0] * coords[0]).max(1.0);
        if (q + 1.0).abs() > VALIDATE_TOL * scale {
            return Err(Error::InvalidPoint(format!(
                "sheet defect {:.3e} exceeds tolerance (coords {:?})",
                (q + 1.0).abs(),
                coords
            )));
        }
        Ok(Self::project_spatial(coords, kappa))
    }

    /// Lifts spatial coordinates by solving the sheet constraint for `v_0`.
    pub fn from_spatial(spatial: &[f64], kappa: f64) -> Result<Self> {
        if spatial.is_empty() {
            return Err(Error::InvalidPoint(
                "need at least 1 spatial coordinate".into(),
            ));
        }
        if !spatial.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidPoint(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        let mut coords = Vec::with_capacity(spatial.len() + 1);
        coords.push(0.0);
        coords.extend_from_slice(spatial);
        Ok(Self::project_spatial(coords, kappa))
    }

    /// The apex `(1, 0, ..., 0)` of the sheet.
    pub fn apex(dim: usize, kappa: f64) -> Self {
        let mut coords = vec![0.0; dim + 1];
        coords[0] = 1.0;
        HPoint { coords, kappa }
    }

    fn project_spatial(mut coords: Vec<f64>, kappa: f64) -> Self {
        let s2: f64 = coords[1..].iter().map(|c| c * c).sum();
        coords[0] = (1.0 + s2).sqrt();
        HPoint { coords, kappa }
    }

    /// Manifold dimension `n` (ambient dimension is `n + 1`).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn check_compatible(&self, other: &HPoint) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::Usage(format!(
                "points of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        if self.kappa != other.kappa {
            return Err(Error::Usage(format!(
                "points of curvature {} and {}",
                self.kappa, other.kappa
            )));
        }
        Ok(())
    }

    /// `-<x,y>_L`, clamped to `[1, inf)`. Values below `1 - 1e-8` are errors.
    pub(crate) fn cosh_gap(&self, other: &HPoint) -> Result<f64> {
        let a = -mink(&self.coords, &other.coords);
        let scale = (self.coords[0] * other.coords[0]).max(1.0);
        if a < 1.0 - VALIDATE_TOL * scale {
            return Err(Error::InvalidPoint(format!(
                "inner product defect {:.3e}: points drifted off the sheet",
                1.0 - a
            )));
        }
        Ok(a.max(1.0))
    }

    /// Geodesic distance at curvature `-kappa`: `arccosh(-<x,y>_L) / sqrt(kappa)`.
    pub fn distance(&self, other: &HPoint) -> Result<f64> {
        Ok(self.arc_to(other)? / self.kappa.sqrt())
    }

    /// Unit-sheet (normalized) geodesic distance `arccosh(-<x,y>_L)`.
    pub(crate) fn arc_to(&self, other: &HPoint) -> Result<f64> {
        self.check_compatible(other)?;
        if self.coords == other.coords {
            return Ok(0.0);
        }
        let a = self.cosh_gap(other)?;
        // arccosh(1 + d) ~ sqrt(2 d) amplifies rounding in `a` near 1; snap
        // sub-roundoff gaps to zero.
        let scale = (self.coords[0] * other.coords[0]).max(1.0);
        if a - 1.0 <= 4.0 * f64::EPSILON * scale {
            return Ok(0.0);
        }
        Ok(a.acosh())
    }

    /// Riemannian inner product of two tangents at this point.
    pub fn local_inner(&self, u: &HTangent, w: &HTangent) -> f64 {
        mink(&u.coords, &w.coords) / self.kappa
    }

    /// Exponential map. `distance(x, exp(x, u))` equals the local norm of `u`.
    pub fn exp(&self, u: &HTangent) -> Result<HPoint> {
        if u.base.coords != self.coords {
            return Err(Error::Usage(
                "exp: tangent based at a different point".into(),
            ));
        }
        let r2 = mink(&u.coords, &u.coords).max(0.0);
        let r = r2.sqrt();
        let (cosh_r, sinhc_r) = if r < SMALL_ARC {
            (
                1.0 + r2 / 2.0 + r2 * r2 / 24.0,
                1.0 + r2 / 6.0 + r2 * r2 / 120.0,
            )
        } else {
            (r.cosh(), r.sinh() / r)
        };
        let mut y: Vec<f64> = self
            .coords
            .iter()
            .zip(&u.coords)
            .map(|(x, v)| cosh_r * x + sinhc_r * v)
            .collect();
        // Re-project onto the sheet.
        let s2: f64 = y[1..].iter().map(|c| c * c).sum();
        y[0] = (1.0 + s2).sqrt();
        Ok(HPoint {
            coords: y,
            kappa: self.kappa,
        })
    }

    /// Inverse of the exponential map: `exp(x, log(x, y)) = y` and
    /// `|log(x, y)| = distance(x, y)` in the local norm.
    pub fn log(&self, y: &HPoint) -> Result<HTangent> {
        self.check_compatible(y)?;
        let d = self.arc_to(y)?;
        let a = self.cosh_gap(y)?;
        // w = y - a x is tangent at x with Minkowski norm sinh(d).
        let mut w: Vec<f64> = y
            .coords
            .iter()
            .zip(&self.coords)
            .map(|(yi, xi)| yi - a * xi)
            .collect();
        let t = mink(&self.coords, &w);
        for (wi, xi) in w.iter_mut().zip(&self.coords) {
            *wi += t * xi;
        }
        let coef = if d < SMALL_ARC {
            1.0 - d * d / 6.0 + 7.0 * d.powi(4) / 360.0
        } else {
            d / d.sinh()
        };
        for wi in w.iter_mut() {
            *wi *= coef;
        }
        Ok(HTangent {
            base: self.clone(),
            coords: w,
        })
    }

    /// Parallel transport of `u` along the geodesic from `u.base` to `y`.
    ///
    /// An isometry of the local metric; the geodesic's own tangent is
    /// self-parallel (`tau(log(x,y)) = -log(y,x)`).
    pub fn transport(&self, y: &HPoint, u: &HTangent) -> Result<HTangent> {
        if u.base.coords != self.coords {
            return Err(Error::Usage(
                "transport: tangent based at a different point".into(),
            ));
        }
        self.check_compatible(y)?;
        if self.coords == y.coords {
            return Ok(HTangent {
                base: y.clone(),
                coords: u.coords.clone(),
            });
        }
        let a = self.cosh_gap(y)?;
        let c = mink(&y.coords, &u.coords) / (1.0 + a);
        let mut v: Vec<f64> = u
            .coords
            .iter()
            .zip(self.coords.iter().zip(&y.coords))
            .map(|(ui, (xi, yi))| ui + c * (xi + yi))
            .collect();
        // Re-project onto the tangent space at y.
        let t = mink(&y.coords, &v);
        for (vi, yi) in v.iter_mut().zip(&y.coords) {
            *vi += t * yi;
        }
        Ok(HTangent {
            base: y.clone(),
            coords: v,
        })
    }

    /// Curvature tensor applied to tangents at this point:
    /// `R(u,v)w = -kappa (<v,w> u - <u,w> v)` in the local metric, which in
    /// ambient coordinates is `-(<v,w>_L u - <u,w>_L v)` independent of kappa.
    pub fn curvature_apply(&self, u: &HTangent, v: &HTangent, w: &HTangent) -> Result<HTangent> {
        for t in [u, v, w] {
            if t.base.coords != self.coords {
                return Err(Error::Usage(
                    "curvature_apply: tangent based at a different point".into(),
                ));
            }
        }
        let vw = mink(&v.coords, &w.coords);
        let uw = mink(&u.coords, &w.coords);
        let coords: Vec<f64> = u
            .coords
            .iter()
            .zip(&v.coords)
            .map(|(ui, vi)| -(vw * ui - uw * vi))
            .collect();
        Ok(HTangent {
            base: self.clone(),
            coords,
        })
    }

    /// Deterministic basis of the tangent space, orthonormal in the local
    /// metric: ambient canonical vectors are projected onto the tangent space
    /// and Gram-Schmidt is applied in order, skipping degenerate candidates.
    pub fn tangent_basis(&self) -> Vec<HTangent> {
        let n = self.dim();
        let ambient = n + 1;
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..ambient {
            if basis.len() == n {
                break;
            }
            // Project e_i onto T_x: w = e_i + <x, e_i>_L x.
            let ei_x = if i == 0 {
                -self.coords[0]
            } else {
                self.coords[i]
            };
            let mut w: Vec<f64> = self.coords.iter().map(|xi| ei_x * xi).collect();
            w[i] += 1.0;
            for b in &basis {
                let c = mink(&w, b) / self.kappa;
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
            let q = mink(&w, &w).max(0.0) / self.kappa;
            if q.sqrt() < 1e-8 {
                continue;
            }
            let inv = 1.0 / q.sqrt();
            for wi in w.iter_mut() {
                *wi *= inv;
            }
            basis.push(w);
        }
        debug_assert_eq!(basis.len(), n);
        basis
            .into_iter()
            .map(|coords| HTangent {
                base: self.clone(),
                coords,
            })
            .collect()
    }
}

impl HTangent {
    /// Validates tangency (relative defect <= 1e-8) and snaps the vector
    /// exactly onto the tangent space.
    pub fn new(base: HPoint, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != base.coords.len() {
            return Err(Error::InvalidTangent(format!(
                "ambient dimension {} does not match base {}",
                coords.len(),
                base.coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidTangent("non-finite coordinate".into()));
        }
        let t = mink(&base.coords, &coords);
        let scale = (base.coords[0] * euclid_norm(&coords)).max(1.0);
        if t.abs() > VALIDATE_TOL * scale {
            return Err(Error::InvalidTangent(format!(
                "tangency defect {:.3e} at base {:?}",
                t.abs(),
                base.coords
            )));
        }
        let mut coords = coords;
        for (ci, bi) in coords.iter_mut().zip(&base.coords) {
            *ci += t * bi;
        }
        Ok(HTangent { base, coords })
    }

    pub fn zero(base: HPoint) -> Self {
        let coords = vec![0.0; base.coords.len()];
        HTangent { base, coords }
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Norm in the local metric at the base point.
    pub fn local_norm(&self) -> f64 {
        (mink(&self.coords, &self.coords).max(0.0) / self.base.kappa).sqrt()
    }

    /// Minkowski (unit-sheet) norm.
    pub(crate) fn mink_norm(&self) -> f64 {
        mink(&self.coords, &self.coords).max(0.0).sqrt()
    }

    pub fn scale(&self, a: f64) -> Self {
        HTangent {
            base: self.base.clone(),
            coords: self.coords.iter().map(|c| a * c).collect(),
        }
    }

    pub fn add(&self, other: &HTangent) -> Result<Self> {
        if other.base.coords != self.base.coords {
            return Err(Error::Usage(
                "adding tangents at different base points".into(),
            ));
        }
        Ok(HTangent {
            base: self.base.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Raw constructor for coordinates already known to be tangent.
    pub(crate) fn from_raw(base: HPoint, coords: Vec<f64>) -> Self {
        HTangent { base, coords }
    }
}
