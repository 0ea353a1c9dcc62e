//! Scalar fields with exact first, second and third covariant derivatives.
//!
//! A [`ScalarField`] exposes its value, differential (as a Riesz tangent
//! vector in the manifold metric), Hessian bilinear form, and the covariant
//! derivative of the Hessian. The concrete fields here are the ones the
//! barrier machinery needs: the squared distance to a pole, affine functions
//! of the Euclidean factor, logarithmic barriers `-log(level - f)`, and
//! weighted sums. They compose: the minimum-enclosing-ball barrier is a
//! weighted sum of log barriers of (squared distance minus a coordinate).
//!
//! Derivative conventions: `differential` and the diagonal Hessian agree with
//! `d/dt` and `d^2/dt^2` of `t -> f(exp_x(t u))`; the Hessian-derivative form
//! `(u, w) -> nabla_v Hf(u, w)` is symmetric in `(u, w)` and linear in `v`.

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hyperboloid::{mink, HPoint, HTangent};
use crate::product::{ProductPoint, ProductTangent};

/// `z * coth(z)`, with a series branch for small `z`.
pub fn z_coth_z(z: f64) -> f64 {
    if z < 0.02 {
        let z2 = z * z;
        1.0 + z2 / 3.0 - z2 * z2 / 45.0 + 2.0 * z2 * z2 * z2 / 945.0
    } else {
        z * z.cosh() / z.sinh()
    }
}

/// `Phi(z) = (z coth z)' = coth z + z - z coth^2 z`.
///
/// Evaluated as `coth z - z / sinh^2 z` to avoid the `1/z` cancellation, with
/// a series branch for small `z`. Satisfies `0 <= Phi(z) <= min(1, z)`.
pub fn phi(z: f64) -> f64 {
    if z < 0.02 {
        let z2 = z * z;
        z * (2.0 / 3.0 - 4.0 * z2 / 45.0 + 4.0 * z2 * z2 / 315.0)
    } else {
        let s = z.sinh();
        z.cosh() / s - z / (s * s)
    }
}

/// A cotangent vector stored by its Riesz representative in the manifold
/// metric: `p(u) = <riesz, u>` at the base point.
#[derive(Debug, Clone)]
pub struct Covector {
    pub base: ProductPoint,
    pub riesz: ProductTangent,
}

impl Covector {
    pub fn zero(base: ProductPoint) -> Self {
        let riesz = base.zero_tangent();
        Covector { base, riesz }
    }

    pub fn apply(&self, u: &ProductTangent) -> f64 {
        self.base.inner(&self.riesz, u)
    }
}

/// A symmetric bilinear form materialized in the coordinates of
/// `tangent_basis(base)`.
#[derive(Debug, Clone)]
pub struct HessianForm {
    pub base: ProductPoint,
    pub basis: Vec<ProductTangent>,
    pub matrix: DMatrix<f64>,
}

impl HessianForm {
    /// Coordinates of a tangent in the form's (orthonormal) basis.
    pub fn coords_of(&self, u: &ProductTangent) -> DVector<f64> {
        DVector::from_iterator(
            self.basis.len(),
            self.basis.iter().map(|b| self.base.inner(b, u)),
        )
    }

    pub fn eval(&self, u: &ProductTangent, w: &ProductTangent) -> f64 {
        let cu = self.coords_of(u);
        let cw = self.coords_of(w);
        (cu.transpose() * &self.matrix * cw)[(0, 0)]
    }
}

/// A smooth function on the manifold with derivatives up to third order.
///
/// Methods may return `NaN` outside the open domain; callers gate on
/// `domain_contains` first.
pub trait ScalarField: Send + Sync {
    fn domain_contains(&self, x: &ProductPoint) -> bool;

    fn value(&self, x: &ProductPoint) -> f64;

    /// Riesz representative of the differential in the manifold metric.
    fn differential_riesz(&self, x: &ProductPoint) -> ProductTangent;

    /// `Hf_x(u, w)`.
    fn hessian_bilinear(&self, x: &ProductPoint, u: &ProductTangent, w: &ProductTangent) -> f64;

    /// `(nabla_v Hf)_x(u, w)`.
    fn hessian_derivative_bilinear(
        &self,
        x: &ProductPoint,
        v: &ProductTangent,
        u: &ProductTangent,
        w: &ProductTangent,
    ) -> f64;

    fn differential(&self, x: &ProductPoint) -> Covector {
        Covector {
            base: x.clone(),
            riesz: self.differential_riesz(x),
        }
    }

    /// `Df_x(u)`.
    fn differential_apply(&self, x: &ProductPoint, u: &ProductTangent) -> f64 {
        x.inner(&self.differential_riesz(x), u)
    }

    /// Dense Hessian in the deterministic tangent basis at `x`. Symmetric by
    /// construction.
    fn hessian(&self, x: &ProductPoint) -> HessianForm {
        let basis = x.tangent_basis();
        let matrix = symmetric_matrix(basis.len(), |i, j| {
            self.hessian_bilinear(x, &basis[i], &basis[j])
        });
        HessianForm {
            base: x.clone(),
            basis,
            matrix,
        }
    }

    /// Dense `(u, w) -> nabla_v Hf(u, w)` in the tangent basis at `x`.
    fn hessian_derivative(&self, x: &ProductPoint, v: &ProductTangent) -> HessianForm {
        let basis = x.tangent_basis();
        let matrix = symmetric_matrix(basis.len(), |i, j| {
            self.hessian_derivative_bilinear(x, v, &basis[i], &basis[j])
        });
        HessianForm {
            base: x.clone(),
            basis,
            matrix,
        }
    }
}

fn symmetric_matrix(n: usize, mut entry: impl FnMut(usize, usize) -> f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = entry(i, j);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Local norm `|u|_{f,x} = sqrt(Hf(u,u))`.
pub fn local_norm(field: &dyn ScalarField, x: &ProductPoint, u: &ProductTangent) -> Result<f64> {
    let q = field.hessian_bilinear(x, u, u);
    if q < 0.0 || (q == 0.0 && u.local_norm() > 0.0) {
        return Err(Error::DegenerateHessian(format!(
            "Hf(u,u) = {q} for a nonzero direction"
        )));
    }
    Ok(q.sqrt())
}

/// Dual norm `|p|*_{f,x} = sqrt(p^T Hf^{-1} p)` via a symmetric
/// positive-definite solve in tangent-basis coordinates.
pub fn dual_norm(field: &dyn ScalarField, x: &ProductPoint, p: &Covector) -> Result<f64> {
    let h = field.hessian(x);
    let coords = DVector::from_iterator(h.basis.len(), h.basis.iter().map(|b| p.apply(b)));
    let chol = Cholesky::new(h.matrix.clone())
        .ok_or_else(|| Error::DegenerateHessian("Hessian is not positive definite".into()))?;
    let y = chol.solve(&coords);
    Ok(coords.dot(&y).max(0.0).sqrt())
}

/// Half the squared geodesic distance to a pole: `x -> d(pole, x)^2 / 2`.
///
/// Reads only the hyperbolic factor; its derivatives vanish on the Euclidean
/// factor. At the pole the Hessian is the identity form and the Hessian
/// derivative vanishes (the continuous limit).
#[derive(Debug, Clone)]
pub struct SquaredDistanceField {
    pole: HPoint,
}

/// Radial data of the squared-distance field at a point: the normalized
/// (unit-sheet) distance and the Minkowski-unit tangent pointing away from
/// the pole.
struct RadialFrame {
    l: f64,
    outward: Vec<f64>,
}

impl SquaredDistanceField {
    pub fn new(pole: HPoint) -> Self {
        SquaredDistanceField { pole }
    }

    pub fn pole(&self) -> &HPoint {
        &self.pole
    }

    pub fn kappa(&self) -> f64 {
        self.pole.kappa()
    }

    fn hyper_part<'a>(&self, x: &'a ProductPoint) -> &'a HPoint {
        x.hyper
            .as_ref()
            .expect("SquaredDistanceField evaluated on a point without a hyperbolic factor")
    }

    fn frame(&self, x: &ProductPoint) -> Option<RadialFrame> {
        let xh = self.hyper_part(x);
        let l = xh
            .arc_to(&self.pole)
            .expect("incompatible point for SquaredDistanceField");
        if l < 1e-9 {
            return None;
        }
        let log = xh.log(&self.pole).expect("log failed on validated points");
        let outward: Vec<f64> = log.coords().iter().map(|c| -c / l).collect();
        Some(RadialFrame { l, outward })
    }
}

impl ScalarField for SquaredDistanceField {
    fn domain_contains(&self, x: &ProductPoint) -> bool {
        x.hyper.is_some()
    }

    fn value(&self, x: &ProductPoint) -> f64 {
        let xh = self.hyper_part(x);
        let l = xh
            .arc_to(&self.pole)
            .expect("incompatible point for SquaredDistanceField");
        l * l / (2.0 * self.kappa())
    }

    fn differential_riesz(&self, x: &ProductPoint) -> ProductTangent {
        let xh = self.hyper_part(x);
        let coords = match self.frame(x) {
            None => vec![0.0; xh.coords().len()],
            // l * outward = -log(x, pole); kappa-independent by the Riesz
            // convention (the pairing divides by kappa, the value scales by
            // 1/kappa, and l here is the unit-sheet arc = sqrt(kappa) d).
            Some(f) => f.outward.iter().map(|c| f.l * c).collect(),
        };
        ProductTangent {
            hyper: Some(HTangent::from_raw(xh.clone(), coords)),
            eucl: vec![0.0; x.eucl.len()],
        }
    }

    fn hessian_bilinear(&self, x: &ProductPoint, u: &ProductTangent, w: &ProductTangent) -> f64 {
        let kappa = self.kappa();
        let (uh, wh) = match (&u.hyper, &w.hyper) {
            (Some(a), Some(b)) => (a, b),
            _ => return 0.0,
        };
        match self.frame(x) {
            None => mink(uh.coords(), wh.coords()) / kappa,
            Some(f) => {
                let c = z_coth_z(f.l);
                let au = mink(uh.coords(), &f.outward);
                let aw = mink(wh.coords(), &f.outward);
                (c * (mink(uh.coords(), wh.coords()) - au * aw) + au * aw) / kappa
            }
        }
    }

    fn hessian_derivative_bilinear(
        &self,
        x: &ProductPoint,
        v: &ProductTangent,
        u: &ProductTangent,
        w: &ProductTangent,
    ) -> f64 {
        let kappa = self.kappa();
        let (uh, vh, wh) = match (&u.hyper, &v.hyper, &w.hyper) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return 0.0,
        };
        match self.frame(x) {
            None => 0.0,
            Some(f) => {
                let p = phi(f.l);
                let au = mink(uh.coords(), &f.outward);
                let av = mink(vh.coords(), &f.outward);
                let aw = mink(wh.coords(), &f.outward);
                let uw = mink(uh.coords(), wh.coords());
                let uv = mink(uh.coords(), vh.coords());
                let wv = mink(wh.coords(), vh.coords());
                // Symmetric polarization in (u, w) of
                //   Phi <v,r> (<u,u> - <u,r>^2)
                //   + 2 (l - Phi) <u,r> (<v,r><u,r> - <u,v>).
                (p * av * (uw - au * aw) + (f.l - p) * (au * (av * aw - wv) + aw * (av * au - uv)))
                    / kappa
            }
        }
    }
}

/// An affine function of the Euclidean factor: `x -> c . e(x) + offset`.
///
/// Affine along every geodesic of the product (zero Hessian), hence usable as
/// the objective of the path-following method.
#[derive(Debug, Clone)]
pub struct LinearObjectiveField {
    pub coeffs: Vec<f64>,
    pub offset: f64,
}

impl LinearObjectiveField {
    pub fn new(coeffs: Vec<f64>) -> Self {
        LinearObjectiveField {
            coeffs,
            offset: 0.0,
        }
    }

    /// Selects a single Euclidean coordinate: `x -> e(x)[index]`.
    pub fn coordinate(index: usize, k: usize) -> Self {
        let mut coeffs = vec![0.0; k];
        coeffs[index] = 1.0;
        LinearObjectiveField {
            coeffs,
            offset: 0.0,
        }
    }
}

impl ScalarField for LinearObjectiveField {
    fn domain_contains(&self, x: &ProductPoint) -> bool {
        x.eucl.len() == self.coeffs.len()
    }

    fn value(&self, x: &ProductPoint) -> f64 {
        self.offset
            + self
                .coeffs
                .iter()
                .zip(&x.eucl)
                .map(|(c, e)| c * e)
                .sum::<f64>()
    }

    fn differential_riesz(&self, x: &ProductPoint) -> ProductTangent {
        ProductTangent {
            hyper: x.hyper.as_ref().map(|h| HTangent::zero(h.clone())),
            eucl: self.coeffs.clone(),
        }
    }

    fn hessian_bilinear(&self, _: &ProductPoint, _: &ProductTangent, _: &ProductTangent) -> f64 {
        0.0
    }

    fn hessian_derivative_bilinear(
        &self,
        _: &ProductPoint,
        _: &ProductTangent,
        _: &ProductTangent,
        _: &ProductTangent,
    ) -> f64 {
        0.0
    }
}

/// A constant field (domain everywhere, all derivatives zero).
#[derive(Debug, Clone)]
pub struct ConstantField(pub f64);

impl ScalarField for ConstantField {
    fn domain_contains(&self, _: &ProductPoint) -> bool {
        true
    }

    fn value(&self, _: &ProductPoint) -> f64 {
        self.0
    }

    fn differential_riesz(&self, x: &ProductPoint) -> ProductTangent {
        x.zero_tangent()
    }

    fn hessian_bilinear(&self, _: &ProductPoint, _: &ProductTangent, _: &ProductTangent) -> f64 {
        0.0
    }

    fn hessian_derivative_bilinear(
        &self,
        _: &ProductPoint,
        _: &ProductTangent,
        _: &ProductTangent,
        _: &ProductTangent,
    ) -> f64 {
        0.0
    }
}

/// Logarithmic barrier `x -> -log(level - f(x))` of the sublevel set
/// `{f < level}`.
#[derive(Clone)]
pub struct LogBarrierField {
    pub inner: Arc<dyn ScalarField>,
    pub level: f64,
}

impl LogBarrierField {
    pub fn new(inner: Arc<dyn ScalarField>, level: f64) -> Self {
        LogBarrierField { inner, level }
    }

    fn gap(&self, x: &ProductPoint) -> f64 {
        self.level - self.inner.value(x)
    }
}

impl ScalarField for LogBarrierField {
    fn domain_contains(&self, x: &ProductPoint) -> bool {
        self.inner.domain_contains(x) && self.gap(x) > 0.0
    }

    fn value(&self, x: &ProductPoint) -> f64 {
        -self.gap(x).ln()
    }

    fn differential_riesz(&self, x: &ProductPoint) -> ProductTangent {
        self.inner.differential_riesz(x).scale(1.0 / self.gap(x))
    }

    fn hessian_bilinear(&self, x: &ProductPoint, u: &ProductTangent, w: &ProductTangent) -> f64 {
        let omega = self.gap(x);
        let df = self.inner.differential(x);
        self.inner.hessian_bilinear(x, u, w) / omega + df.apply(u) * df.apply(w) / (omega * omega)
    }

    fn hessian_derivative_bilinear(
        &self,
        x: &ProductPoint,
        v: &ProductTangent,
        u: &ProductTangent,
        w: &ProductTangent,
    ) -> f64 {
        let omega = self.gap(x);
        let o2 = omega * omega;
        let o3 = o2 * omega;
        let df = self.inner.differential(x);
        let (du, dv, dw) = (df.apply(u), df.apply(v), df.apply(w));
        let huw = self.inner.hessian_bilinear(x, u, w);
        let huv = self.inner.hessian_bilinear(x, u, v);
        let hwv = self.inner.hessian_bilinear(x, w, v);
        self.inner.hessian_derivative_bilinear(x, v, u, w) / omega
            + dv * huw / o2
            + (du * hwv + dw * huv) / o2
            + 2.0 * dv * du * dw / o3
    }
}

/// A coefficient-weighted sum of fields on the intersection of their domains.
#[derive(Clone, Default)]
pub struct WeightedSumField {
    pub terms: Vec<(f64, Arc<dyn ScalarField>)>,
}

impl WeightedSumField {
    pub fn new(terms: Vec<(f64, Arc<dyn ScalarField>)>) -> Self {
        WeightedSumField { terms }
    }
}

impl ScalarField for WeightedSumField {
    fn domain_contains(&self, x: &ProductPoint) -> bool {
        self.terms.iter().all(|(_, f)| f.domain_contains(x))
    }

    fn value(&self, x: &ProductPoint) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.value(x)).sum()
    }

    fn differential_riesz(&self, x: &ProductPoint) -> ProductTangent {
        let mut acc = x.zero_tangent();
        for (c, f) in &self.terms {
            acc = acc
                .add(&f.differential_riesz(x).scale(*c))
                .expect("sum terms share the base point structure");
        }
        acc
    }

    fn hessian_bilinear(&self, x: &ProductPoint, u: &ProductTangent, w: &ProductTangent) -> f64 {
        self.terms
            .iter()
            .map(|(c, f)| c * f.hessian_bilinear(x, u, w))
            .sum()
    }

    fn hessian_derivative_bilinear(
        &self,
        x: &ProductPoint,
        v: &ProductTangent,
        u: &ProductTangent,
        w: &ProductTangent,
    ) -> f64 {
        self.terms
            .iter()
            .map(|(c, f)| c * f.hessian_derivative_bilinear(x, v, u, w))
            .sum()
    }
}

/// The ball barrier `x -> -log(R^2 - d(pole, x)^2)` as a log barrier of
/// `2 * sqdist` at level `R^2` (distances in the curvature-`kappa` metric).
pub fn ball_barrier(pole: HPoint, radius: f64) -> LogBarrierField {
    let d2 = WeightedSumField::new(vec![(
        2.0,
        Arc::new(SquaredDistanceField::new(pole)) as Arc<dyn ScalarField>,
    )]);
    LogBarrierField::new(Arc::new(d2), radius * radius)
}
