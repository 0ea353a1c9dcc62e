//! Short-step path-following for minimizing an affine function over a convex
//! body given a nu-self-concordant barrier.
//!
//! The method tracks the central path `x*(t) = argmin t l(x) + F(x)`:
//! starting from an approximate analytic center (`lambda_F <= beta`), each
//! step raises `t` by `alpha / |Dl_x|*_{F,x}` and takes one full Newton step
//! on `f_{t+}`. With `beta = 1/9` and `alpha = sqrt(beta)/(1+sqrt(beta)) -
//! beta = 5/36` the decrement stays at or below `beta` after every step, `t`
//! grows geometrically (factor `1 + alpha/(beta + sqrt(nu))`), and the
//! optimality gap is bounded by `(nu + (beta + sqrt(nu)) beta/(1-beta))/t` —
//! the computable certificate the solver terminates on. All three facts are
//! asserted per-step.

use std::sync::Arc;

use nalgebra::{Cholesky, DVector};

use crate::error::{Error, Result};
use crate::fields::{dual_norm, ScalarField};
use crate::newton::{minimize, MinimizeOptions, SolveTrace};
use crate::product::ProductPoint;

/// An affine objective, a barrier certified for it, and the barrier
/// parameter.
#[derive(Clone)]
pub struct BarrierProblem {
    pub objective: Arc<dyn ScalarField>,
    pub barrier: Arc<dyn ScalarField>,
    /// Barrier parameter nu (supplied analytically by the problem builder,
    /// not estimated at runtime).
    pub nu: f64,
    /// Self-concordance constant of the barrier (1 for a nu-SCB).
    pub sc_sigma: f64,
    /// Optional a-priori bound on `sup l - inf l` over the body; lets the
    /// solver return right after centering when the requested accuracy
    /// exceeds it.
    pub objective_span: Option<f64>,
    /// Optional lower bound on `inf F`, tightening the centering iteration
    /// cap.
    pub barrier_lower: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct PathParams {
    pub beta: f64,
    pub alpha: f64,
}

impl PathParams {
    /// `alpha = sqrt(beta)/(1 + sqrt(beta)) - beta`, which must be positive.
    pub fn new(beta: f64) -> Result<Self> {
        let alpha = beta.sqrt() / (1.0 + beta.sqrt()) - beta;
        if !(beta > 0.0 && alpha > 0.0) {
            return Err(Error::Usage(format!(
                "path parameters infeasible: beta = {beta}, alpha = {alpha}"
            )));
        }
        Ok(PathParams { beta, alpha })
    }
}

impl Default for PathParams {
    fn default() -> Self {
        PathParams::new(1.0 / 9.0).expect("default beta = 1/9 is feasible")
    }
}

/// Iterate of the path-following method.
#[derive(Debug, Clone)]
pub struct CentralPathState {
    pub x: ProductPoint,
    pub t: f64,
    /// `|D f_t|*_{F,x}` (the barrier norm; equals the `f_t` norm since the
    /// objective is affine).
    pub decrement: f64,
    /// `gap_bound` at the current `t`; infinite at `t = 0`.
    pub gap_bound: f64,
}

#[derive(Debug, Clone)]
pub struct PathRecord {
    pub iter: usize,
    pub t: f64,
    pub lambda: f64,
    pub objective: f64,
    pub gap_bound: f64,
}

#[derive(Debug, Clone, Default)]
pub struct PathTrace {
    /// Damped-Newton centering phase (objective values recorded per iterate).
    pub centering: Vec<(usize, f64, f64)>, // (iter, lambda, objective)
    pub path: Vec<PathRecord>,
}

/// Certified bound on the optimality gap at parameter `t > 0`:
/// `(nu + (beta + sqrt(nu)) beta / (1 - beta)) / t`.
pub fn gap_bound(
    problem: &BarrierProblem,
    params: &PathParams,
    state: &CentralPathState,
) -> Result<f64> {
    if !(state.t > 0.0) {
        return Err(Error::Usage("gap_bound undefined at t = 0".into()));
    }
    Ok(gap_numerator(problem.nu, params.beta) / state.t)
}

fn gap_numerator(nu: f64, beta: f64) -> f64 {
    nu + (beta + nu.sqrt()) * beta / (1.0 - beta)
}

/// Damped Newton on the barrier alone until `lambda_F <= beta`; the returned
/// state sits at `t = 0`.
pub fn analytic_center(
    problem: &BarrierProblem,
    x_start: &ProductPoint,
    params: &PathParams,
) -> Result<(CentralPathState, SolveTrace)> {
    if !problem.barrier.domain_contains(x_start) {
        return Err(Error::OutsideDomain(
            "analytic_center: start point infeasible".into(),
        ));
    }
    let mut opts = MinimizeOptions::new(problem.sc_sigma, params.beta);
    opts.f_lower = problem.barrier_lower;
    let (x, trace) = minimize(problem.barrier.as_ref(), x_start, &opts)?;
    let decrement = trace.records.last().map_or(0.0, |r| r.lambda);
    Ok((
        CentralPathState {
            x,
            t: 0.0,
            decrement,
            gap_bound: f64::INFINITY,
        },
        trace,
    ))
}

/// Dual barrier-norm of the objective differential at `x`.
fn objective_dual_norm(problem: &BarrierProblem, x: &ProductPoint) -> Result<f64> {
    let dl = problem.objective.differential(x);
    let n = dual_norm(problem.barrier.as_ref(), x, &dl)?;
    if !(n > 0.0) {
        return Err(Error::Usage(
            "path step: objective differential vanishes (constant objective?)".into(),
        ));
    }
    Ok(n)
}

/// One parameter increase plus one full Newton step on `f_{t+}`.
///
/// Asserts the per-step guarantees: the new decrement stays at or below
/// `beta`, and for `t > 0` the parameter grows by at least
/// `1 + alpha/(beta + sqrt(nu))`.
pub fn pf_step(
    problem: &BarrierProblem,
    state: &CentralPathState,
    params: &PathParams,
) -> Result<CentralPathState> {
    if state.decrement > params.beta + crate::analyzer::BOUND_SLACK {
        return Err(Error::Usage(format!(
            "pf_step precondition: decrement {} exceeds beta {}",
            state.decrement, params.beta
        )));
    }
    let x = &state.x;
    let t_plus = state.t + params.alpha / objective_dual_norm(problem, x)?;
    if state.t > 0.0 {
        let growth = 1.0 + params.alpha / (params.beta + problem.nu.sqrt());
        if t_plus < growth * state.t - crate::analyzer::BOUND_SLACK {
            return Err(Error::InvariantViolation(format!(
                "parameter growth {} below the guaranteed factor {}",
                t_plus / state.t,
                growth
            )));
        }
    }

    // Newton direction of f_{t+} at x; the Hessian is the barrier's.
    let h = problem.barrier.hessian(x);
    let g = DVector::from_iterator(
        h.basis.len(),
        h.basis.iter().map(|b| {
            t_plus * problem.objective.differential_apply(x, b)
                + problem.barrier.differential_apply(x, b)
        }),
    );
    let chol = Cholesky::new(h.matrix.clone()).ok_or_else(|| {
        Error::DegenerateHessian("pf_step: barrier Hessian not positive definite".into())
    })?;
    let coords = chol.solve(&(-&g));
    let mut dir = x.zero_tangent();
    for (c, b) in coords.iter().zip(&h.basis) {
        dir = dir.add(&b.scale(*c))?;
    }
    let x_plus = x.exp(&dir)?;
    if !problem.barrier.domain_contains(&x_plus) {
        return Err(Error::InvariantViolation(
            "path step left the domain".into(),
        ));
    }

    // New decrement, measured in the barrier norm at x+.
    let hf = problem.barrier.hessian(&x_plus);
    let g_plus = DVector::from_iterator(
        hf.basis.len(),
        hf.basis.iter().map(|b| {
            t_plus * problem.objective.differential_apply(&x_plus, b)
                + problem.barrier.differential_apply(&x_plus, b)
        }),
    );
    let chol_plus = Cholesky::new(hf.matrix.clone()).ok_or_else(|| {
        Error::DegenerateHessian("pf_step: Hessian at x+ not positive definite".into())
    })?;
    let y = chol_plus.solve(&g_plus);
    let decrement = g_plus.dot(&y).max(0.0).sqrt();
    if decrement > params.beta + crate::analyzer::BOUND_SLACK {
        return Err(Error::InvariantViolation(format!(
            "decrement {} exceeded beta {} after a path step (bad barrier certificate?)",
            decrement, params.beta
        )));
    }

    let next = CentralPathState {
        x: x_plus,
        t: t_plus,
        decrement,
        gap_bound: f64::INFINITY,
    };
    let gap = gap_bound(problem, params, &next)?;
    Ok(CentralPathState {
        gap_bound: gap,
        ..next
    })
}

/// Iteration-count constant of the termination assertion:
/// `iters <= C sqrt(nu) log(nu |Dl_{x0}|* / eps) + C`.
pub const ITER_BOUND_CONST: f64 = 50.0;

/// Full run: analytic centering, then path steps until the gap certificate
/// reaches `epsilon`.
pub fn solve(
    problem: &BarrierProblem,
    x_start: &ProductPoint,
    epsilon: f64,
    params: &PathParams,
) -> Result<(CentralPathState, PathTrace)> {
    if !(epsilon > 0.0) {
        return Err(Error::Usage(format!(
            "solve: epsilon must be positive, got {epsilon}"
        )));
    }
    let (mut state, center_trace) = analytic_center(problem, x_start, params)?;
    let mut trace = PathTrace::default();
    for r in &center_trace.records {
        trace
            .centering
            .push((r.iter, r.lambda, problem.objective.value(&r.x)));
    }

    if let Some(span) = problem.objective_span {
        if span <= epsilon {
            state.gap_bound = span;
            return Ok((state, trace));
        }
    }

    let dl0 = objective_dual_norm(problem, &state.x)?;
    let cap = (ITER_BOUND_CONST
        * problem.nu.sqrt()
        * (problem.nu * dl0 / epsilon).max(std::f64::consts::E).ln()
        + ITER_BOUND_CONST)
        .ceil() as usize;

    let mut iter = 0usize;
    while state.gap_bound > epsilon {
        if iter >= cap {
            return Err(Error::ConvergenceFailure(format!(
                "path-following exceeded the iteration bound {cap} (gap {})",
                state.gap_bound
            )));
        }
        state = pf_step(problem, &state, params)?;
        iter += 1;
        trace.path.push(PathRecord {
            iter,
            t: state.t,
            lambda: state.decrement,
            objective: problem.objective.value(&state.x),
            gap_bound: state.gap_bound,
        });
    }
    Ok((state, trace))
}
