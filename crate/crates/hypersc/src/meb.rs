//! Minimum enclosing ball in hyperbolic space.
//!
//! The problem `min r s.t. d(p_i, x) <= r` is solved through the smooth
//! reformulation `min s s.t. d(p_i,x)^2 <= s <= R^2` on `H^n x R`, with the
//! barrier
//!
//! `F(x,s) = -sum_i K^2 log(s - d(p_i,x)^2) - log(R^2 - s)`,
//!
//! `R = 2 max_{i<j} d(p_i,p_j)` and `K = sqrt(2^{-1/2}(R+1)^2 + 9/4)`, which
//! is an `(m K^2 + 1)`-self-concordant barrier. Everything runs on the unit
//! sheet (curvature normalized to 1, distances scaled by `sqrt(kappa)`) and
//! results are scaled back.
//!
//! A farthest-point geodesic iteration serves as an independent oracle for
//! validating the interior-point route.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{
    LinearObjectiveField, LogBarrierField, ScalarField, SquaredDistanceField, WeightedSumField,
};
use crate::hyperboloid::HPoint;
use crate::path::{solve as path_solve, BarrierProblem, PathParams, PathTrace};
use crate::product::ProductPoint;

#[derive(Debug, Clone)]
pub struct MebInstance {
    pub points: Vec<HPoint>,
    pub kappa: f64,
    /// Additive accuracy target on the radius.
    pub epsilon: f64,
}

impl MebInstance {
    pub fn new(points: Vec<HPoint>, kappa: f64, epsilon: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Usage("MEB instance needs at least one point".into()));
        }
        if !(epsilon > 0.0) {
            return Err(Error::Usage(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        let dim = points[0].dim();
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::Usage(format!(
                    "point {i} has dimension {} != {dim}",
                    p.dim()
                )));
            }
            if p.kappa() != kappa {
                return Err(Error::Usage(format!(
                    "point {i} has curvature {} != {kappa}",
                    p.kappa()
                )));
            }
        }
        Ok(MebInstance {
            points,
            kappa,
            epsilon,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MebIterations {
    pub centering: usize,
    pub path: usize,
}

#[derive(Debug, Clone)]
pub struct MebSolution {
    pub center: HPoint,
    pub radius: f64,
    /// Squared-radius decision variable (curvature-`kappa` scale).
    pub s: f64,
    /// Certified upper bound on `s - s*` (same scale as `s`).
    pub gap_certificate: f64,
    pub iterations: MebIterations,
    /// Dual barrier-norm of the objective at the start point (recorded, not
    /// used for control).
    pub alpha0: Option<f64>,
}

/// Derived constants of the barrier formulation, in unit-sheet scale.
#[derive(Debug, Clone, Copy)]
pub struct MebDerived {
    /// Radius bound `R = 2 max_{i<j} d(p_i, p_j)` (unit sheet).
    pub r_bound: f64,
    /// Per-constraint scale `K`.
    pub k_const: f64,
    /// Barrier parameter `nu = m K^2 + 1`.
    pub nu: f64,
    pub min_pairwise: f64,
    pub max_pairwise: f64,
    /// Path accuracy `eps' = min(eps1 / min_pairwise, eps1^2)` where `eps1`
    /// is the unit-sheet radius target.
    pub eps_prime: f64,
}

/// The barrier problem on the unit sheet, its start point, and the derived
/// constants.
pub struct MebProblem {
    pub problem: BarrierProblem,
    pub start: ProductPoint,
    pub derived: MebDerived,
    /// Instance points reinterpreted on the unit sheet.
    pub norm_points: Vec<HPoint>,
}

fn normalize_points(instance: &MebInstance) -> Result<Vec<HPoint>> {
    instance
        .points
        .iter()
        .map(|p| HPoint::new(p.coords().to_vec(), 1.0))
        .collect()
}

/// Builds the barrier formulation. Requires `m >= 2` and pairwise-distinct
/// points (`m = 1` short-circuits in [`solve`]).
pub fn build_problem(instance: &MebInstance) -> Result<MebProblem> {
    let m = instance.points.len();
    if m < 2 {
        return Err(Error::Usage(
            "build_problem requires at least two points".into(),
        ));
    }
    let pts = normalize_points(instance)?;
    let mut min_d = f64::INFINITY;
    let mut max_d: f64 = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            let d = pts[i].distance(&pts[j])?;
            if d < 1e-12 {
                return Err(Error::Usage(format!("points {i} and {j} coincide")));
            }
            min_d = min_d.min(d);
            max_d = max_d.max(d);
        }
    }
    let r_bound = 2.0 * max_d;
    let k2 = (r_bound + 1.0) * (r_bound + 1.0) / 2.0f64.sqrt() + 2.25;
    let k_const = k2.sqrt();
    let nu = m as f64 * k2 + 1.0;

    let coord = Arc::new(LinearObjectiveField::coordinate(0, 1));
    let mut terms: Vec<(f64, Arc<dyn ScalarField>)> = Vec::with_capacity(m + 1);
    for p in &pts {
        // s - d(p,x)^2 > 0 as the log barrier of (2 sqdist - s) at level 0.
        let inner = WeightedSumField::new(vec![
            (
                2.0,
                Arc::new(SquaredDistanceField::new(p.clone())) as Arc<dyn ScalarField>,
            ),
            (-1.0, coord.clone() as Arc<dyn ScalarField>),
        ]);
        terms.push((k2, Arc::new(LogBarrierField::new(Arc::new(inner), 0.0))));
    }
    terms.push((
        1.0,
        Arc::new(LogBarrierField::new(coord.clone(), r_bound * r_bound)),
    ));
    let barrier = WeightedSumField::new(terms);

    let eps1 = instance.epsilon * instance.kappa.sqrt();
    let eps_prime = (eps1 / min_d).min(eps1 * eps1);

    let start = ProductPoint::mixed(pts[0].clone(), vec![r_bound * r_bound / 2.0]);
    let problem = BarrierProblem {
        objective: coord,
        barrier: Arc::new(barrier),
        nu,
        sc_sigma: 1.0,
        objective_span: Some(r_bound * r_bound),
        barrier_lower: Some(-nu * (r_bound * r_bound).ln()),
    };
    Ok(MebProblem {
        problem,
        start,
        derived: MebDerived {
            r_bound,
            k_const,
            nu,
            min_pairwise: min_d,
            max_pairwise: max_d,
            eps_prime,
        },
        norm_points: pts,
    })
}

/// Deterministic strictly feasible interior samples `(x, s)` of the barrier
/// domain, for certification checks.
pub fn sample_interior(mp: &MebProblem, count: usize, seed: u64) -> Result<Vec<ProductPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r2 = mp.derived.r_bound * mp.derived.r_bound;
    let anchor = &mp.norm_points[0];
    let basis = anchor.tangent_basis();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut w = crate::hyperboloid::HTangent::zero(anchor.clone());
        for b in &basis {
            let g: f64 = rng.sample(rand_distr::StandardNormal);
            w = w.add(&b.scale(g))?;
        }
        let n = w.mink_norm();
        if n < 1e-12 {
            continue;
        }
        let radius = rng.random::<f64>() * 0.9 * mp.derived.max_pairwise;
        let x = anchor.exp(&w.scale(radius / n))?;
        let worst = mp
            .norm_points
            .iter()
            .map(|p| {
                let d = p.arc_to(&x).expect("distance");
                d * d
            })
            .fold(0.0f64, f64::max);
        if worst >= r2 * 0.98 {
            continue;
        }
        let lo = worst + 0.01 * (r2 - worst);
        let hi = r2 - 0.01 * (r2 - worst);
        let s = lo + rng.random::<f64>() * (hi - lo);
        let candidate = ProductPoint::mixed(x, vec![s]);
        if mp.problem.barrier.domain_contains(&candidate) {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// Farthest-point geodesic iteration (independent approximation oracle):
/// `x_{k+1} = exp_{x_k}(log_{x_k}(p_f) / (k + 2))` with `p_f` the current
/// farthest input point; the first index attaining the maximum wins ties.
pub fn oracle_solve(instance: &MebInstance, iterations: usize) -> Result<MebSolution> {
    let pts = &instance.points;
    if pts.len() == 1 {
        return Ok(MebSolution {
            center: pts[0].clone(),
            radius: 0.0,
            s: 0.0,
            gap_certificate: 0.0,
            iterations: MebIterations::default(),
            alpha0: None,
        });
    }
    let mut x = pts[0].clone();
    for k in 0..iterations {
        let mut far_idx = 0usize;
        let mut far_d = -1.0;
        for (i, p) in pts.iter().enumerate() {
            let d = x.distance(p)?;
            if d > far_d {
                far_d = d;
                far_idx = i;
            }
        }
        let step = x.log(&pts[far_idx])?.scale(1.0 / (k as f64 + 2.0));
        x = x.exp(&step)?;
    }
    let radius = pts
        .iter()
        .map(|p| x.distance(p).expect("distance"))
        .fold(0.0f64, f64::max);
    Ok(MebSolution {
        center: x,
        radius,
        s: radius * radius,
        gap_certificate: f64::NAN,
        iterations: MebIterations {
            centering: 0,
            path: iterations,
        },
        alpha0: None,
    })
}

/// Interior-point solve: build the barrier problem, center from
/// `(p_1, R^2/2)`, follow the path to the converted accuracy, and scale the
/// solution back to the instance curvature.
pub fn solve(instance: &MebInstance) -> Result<(MebSolution, PathTrace)> {
    if instance.points.len() == 1 {
        let sol = MebSolution {
            center: instance.points[0].clone(),
            radius: 0.0,
            s: 0.0,
            gap_certificate: 0.0,
            iterations: MebIterations::default(),
            alpha0: None,
        };
        return Ok((sol, PathTrace::default()));
    }
    let mp = build_problem(instance)?;
    let params = PathParams::default();
    let alpha0 = crate::fields::dual_norm(
        mp.problem.barrier.as_ref(),
        &mp.start,
        &mp.problem.objective.differential(&mp.start),
    )
    .ok();

    let (state, trace) = path_solve(&mp.problem, &mp.start, mp.derived.eps_prime, &params)?;
    let kappa = instance.kappa;
    let s1 = state.x.eucl[0];
    let center = HPoint::new(
        state
            .x
            .hyper
            .as_ref()
            .expect("hyper factor")
            .coords()
            .to_vec(),
        kappa,
    )?;
    let sol = MebSolution {
        center,
        radius: s1.sqrt() / kappa.sqrt(),
        s: s1 / kappa,
        gap_certificate: state.gap_bound / kappa,
        iterations: MebIterations {
            centering: trace.centering.len(),
            path: trace.path.len(),
        },
        alpha0,
    };
    Ok((sol, trace))
}
