//! Product manifolds `H^n x R^k`, with either factor possibly trivial.
//!
//! All geometry acts componentwise; the product distance satisfies
//! `d^2 = d_h^2 + |e_x - e_y|^2`. Scalar fields, solvers and the analyzer all
//! operate on [`ProductPoint`] so that a plain hyperbolic problem, a plain
//! Euclidean one, and the mixed barrier problems share one code path.

use crate::error::{Error, Result};
use crate::hyperboloid::{HPoint, HTangent};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub hyper: Option<HPoint>,
    pub eucl: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductTangent {
    pub hyper: Option<HTangent>,
    pub eucl: Vec<f64>,
}

/// The geodesic `t -> exp(base, t dir)` for `t` in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Geodesic {
    pub base: ProductPoint,
    pub dir: ProductTangent,
}

impl ProductPoint {
    pub fn hyperbolic(h: HPoint) -> Self {
        ProductPoint {
            hyper: Some(h),
            eucl: Vec::new(),
        }
    }

    pub fn euclidean(e: Vec<f64>) -> Self {
        ProductPoint {
            hyper: None,
            eucl: e,
        }
    }

    pub fn mixed(h: HPoint, e: Vec<f64>) -> Self {
        ProductPoint {
            hyper: Some(h),
            eucl: e,
        }
    }

    /// Total tangent dimension.
    pub fn dim(&self) -> usize {
        self.hyper.as_ref().map_or(0, |h| h.dim()) + self.eucl.len()
    }

    fn check_compatible(&self, other: &ProductPoint) -> Result<()> {
        match (&self.hyper, &other.hyper) {
            (Some(_), None) | (None, Some(_)) => {
                return Err(Error::Usage(
                    "mixing product points with and without a hyperbolic factor".into(),
                ))
            }
            _ => {}
        }
        if self.eucl.len() != other.eucl.len() {
            return Err(Error::Usage(
                "Euclidean factors of different dimension".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn check_tangent(&self, u: &ProductTangent) -> Result<()> {
        match (&self.hyper, &u.hyper) {
            (Some(h), Some(uh)) => {
                if uh.base().coords() != h.coords() {
                    return Err(Error::Usage("tangent based at a different point".into()));
                }
            }
            (None, None) => {}
            _ => return Err(Error::Usage("tangent factor structure mismatch".into())),
        }
        if self.eucl.len() != u.eucl.len() {
            return Err(Error::Usage(
                "tangent Euclidean factor dimension mismatch".into(),
            ));
        }
        Ok(())
    }

    pub fn distance(&self, other: &ProductPoint) -> Result<f64> {
        self.check_compatible(other)?;
        let dh = match (&self.hyper, &other.hyper) {
            (Some(a), Some(b)) => a.distance(b)?,
            _ => 0.0,
        };
        let de2: f64 = self
            .eucl
            .iter()
            .zip(&other.eucl)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok((dh * dh + de2).sqrt())
    }

    pub fn inner(&self, u: &ProductTangent, w: &ProductTangent) -> f64 {
        let mut s = match (&self.hyper, &u.hyper, &w.hyper) {
            (Some(h), Some(uh), Some(wh)) => h.local_inner(uh, wh),
            _ => 0.0,
        };
        s += u.eucl.iter().zip(&w.eucl).map(|(a, b)| a * b).sum::<f64>();
        s
    }

    pub fn exp(&self, u: &ProductTangent) -> Result<ProductPoint> {
        self.check_tangent(u)?;
        let hyper = match (&self.hyper, &u.hyper) {
            (Some(h), Some(uh)) => Some(h.exp(uh)?),
            _ => None,
        };
        let eucl = self.eucl.iter().zip(&u.eucl).map(|(a, b)| a + b).collect();
        Ok(ProductPoint { hyper, eucl })
    }

    pub fn log(&self, y: &ProductPoint) -> Result<ProductTangent> {
        self.check_compatible(y)?;
        let hyper = match (&self.hyper, &y.hyper) {
            (Some(a), Some(b)) => Some(a.log(b)?),
            _ => None,
        };
        let eucl = y.eucl.iter().zip(&self.eucl).map(|(b, a)| b - a).collect();
        Ok(ProductTangent { hyper, eucl })
    }

    pub fn transport(&self, y: &ProductPoint, u: &ProductTangent) -> Result<ProductTangent> {
        self.check_tangent(u)?;
        self.check_compatible(y)?;
        let hyper = match (&self.hyper, &y.hyper, &u.hyper) {
            (Some(a), Some(b), Some(uh)) => Some(a.transport(b, uh)?),
            _ => None,
        };
        Ok(ProductTangent {
            hyper,
            eucl: u.eucl.clone(),
        })
    }

    /// Product curvature: the hyperbolic block, zero on the flat factor.
    pub fn curvature_apply(
        &self,
        u: &ProductTangent,
        v: &ProductTangent,
        w: &ProductTangent,
    ) -> Result<ProductTangent> {
        for t in [u, v, w] {
            self.check_tangent(t)?;
        }
        let hyper = match (&self.hyper, &u.hyper, &v.hyper, &w.hyper) {
            (Some(h), Some(uh), Some(vh), Some(wh)) => Some(h.curvature_apply(uh, vh, wh)?),
            _ => None,
        };
        Ok(ProductTangent {
            hyper,
            eucl: vec![0.0; self.eucl.len()],
        })
    }

    /// Deterministic local-orthonormal tangent basis: hyperbolic factor basis
    /// first, then the Euclidean canonical directions.
    pub fn tangent_basis(&self) -> Vec<ProductTangent> {
        let k = self.eucl.len();
        let mut out = Vec::with_capacity(self.dim());
        if let Some(h) = &self.hyper {
            for b in h.tangent_basis() {
                out.push(ProductTangent {
                    hyper: Some(b),
                    eucl: vec![0.0; k],
                });
            }
        }
        for j in 0..k {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            out.push(ProductTangent {
                hyper: self.hyper.as_ref().map(|h| HTangent::zero(h.clone())),
                eucl: e,
            });
        }
        out
    }

    pub fn zero_tangent(&self) -> ProductTangent {
        ProductTangent {
            hyper: self.hyper.as_ref().map(|h| HTangent::zero(h.clone())),
            eucl: vec![0.0; self.eucl.len()],
        }
    }
}

impl ProductTangent {
    pub fn hyperbolic(u: HTangent) -> Self {
        ProductTangent {
            hyper: Some(u),
            eucl: Vec::new(),
        }
    }

    pub fn euclidean(e: Vec<f64>) -> Self {
        ProductTangent {
            hyper: None,
            eucl: e,
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        ProductTangent {
            hyper: self.hyper.as_ref().map(|h| h.scale(a)),
            eucl: self.eucl.iter().map(|c| a * c).collect(),
        }
    }

    pub fn add(&self, other: &ProductTangent) -> Result<Self> {
        let hyper = match (&self.hyper, &other.hyper) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            (None, None) => None,
            _ => {
                return Err(Error::Usage(
                    "adding tangents with different factor structure".into(),
                ))
            }
        };
        Ok(ProductTangent {
            hyper,
            eucl: self
                .eucl
                .iter()
                .zip(&other.eucl)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Norm in the local metric (requires the base for the hyperbolic part,
    /// which the hyperbolic tangent carries itself).
    pub fn local_norm(&self) -> f64 {
        let h2 = self.hyper.as_ref().map_or(0.0, |h| {
            let n = h.local_norm();
            n * n
        });
        let e2: f64 = self.eucl.iter().map(|c| c * c).sum();
        (h2 + e2).sqrt()
    }
}

impl Geodesic {
    pub fn new(base: ProductPoint, dir: ProductTangent) -> Result<Self> {
        base.check_tangent(&dir)?;
        Ok(Geodesic { base, dir })
    }

    pub fn point_at(&self, t: f64) -> Result<ProductPoint> {
        self.base.exp(&self.dir.scale(t))
    }

    /// The geodesic's tangent at parameter `t` (the transported initial
    /// direction).
    pub fn tangent_at(&self, t: f64) -> Result<ProductTangent> {
        let y = self.point_at(t)?;
        self.base.transport(&y, &self.dir)
    }
}
