//! Newton's method for self-concordant functions on the manifold.
//!
//! The full step is `x -> exp_x(-Hf^{-1} Df)`; the damped step scales the
//! direction by `1/(1 + sigma lambda)`. For a sigma-self-concordant function
//! both come with guarantees (quadratic decrement contraction, and an
//! `omega(sigma lambda)/sigma^2` value decrease per damped step) which
//! [`minimize`] checks at runtime on every step: a violation is reported as
//! an error rather than tolerated, since it falsifies the certificate the
//! method is built on.

use nalgebra::{Cholesky, DVector};

use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::product::{ProductPoint, ProductTangent};

/// `omega(t) = t - log(1 + t)`.
pub fn omega(t: f64) -> f64 {
    t - (1.0 + t).ln()
}

/// `omega*(t) = -t - log(1 - t)`, finite for `t < 1`.
pub fn omega_star(t: f64) -> f64 {
    -t - (1.0 - t).ln()
}

/// Newton data at a point: direction, decrement, value.
#[derive(Debug, Clone)]
pub struct NewtonState {
    pub x: ProductPoint,
    pub direction: ProductTangent,
    pub decrement: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Damped,
    Full,
    /// Terminal record: no step taken.
    None,
}

#[derive(Debug, Clone)]
pub struct TraceRecord {
    pub iter: usize,
    pub lambda: f64,
    pub value: f64,
    pub kind: StepKind,
    /// For a full step, the guaranteed bound on the next decrement,
    /// `sigma lambda^2 / (1 - sigma lambda)^2`.
    pub predicted_lambda_bound: Option<f64>,
    pub x: ProductPoint,
}

#[derive(Debug, Clone, Default)]
pub struct SolveTrace {
    pub records: Vec<TraceRecord>,
}

impl SolveTrace {
    pub fn damped_steps(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.kind == StepKind::Damped)
            .count()
    }

    pub fn full_steps(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.kind == StepKind::Full)
            .count()
    }
}

/// Solves `Hf_x(u, .) = -Df_x(.)` in tangent-basis coordinates.
///
/// The decrement satisfies `lambda = |u|_{f,x} = |Df_x|*_{f,x}`; the solve
/// residual is checked to 1e-10 relative.
pub fn newton_direction(field: &dyn ScalarField, x: &ProductPoint) -> Result<NewtonState> {
    let h = field.hessian(x);
    let g = DVector::from_iterator(
        h.basis.len(),
        h.basis.iter().map(|b| field.differential_apply(x, b)),
    );
    let chol = Cholesky::new(h.matrix.clone()).ok_or_else(|| {
        Error::DegenerateHessian("Newton direction: Hessian not positive definite".into())
    })?;
    let dir_coords = chol.solve(&(-&g));

    let residual = (&h.matrix * &dir_coords + &g).norm();
    if residual > 1e-10 * g.norm().max(1.0) {
        return Err(Error::DegenerateHessian(format!(
            "Newton solve residual {residual:.3e} (ill-conditioned Hessian)"
        )));
    }

    let mut direction = x.zero_tangent();
    for (c, b) in dir_coords.iter().zip(&h.basis) {
        direction = direction.add(&b.scale(*c))?;
    }
    let lambda2 = (dir_coords.transpose() * &h.matrix * &dir_coords)[(0, 0)];
    Ok(NewtonState {
        x: x.clone(),
        direction,
        decrement: lambda2.max(0.0).sqrt(),
        value: field.value(x),
    })
}

/// Full Newton step `exp_x(u)`. Errors if the step leaves the domain, which
/// signals a violated precondition (`lambda < 1/sigma`).
pub fn newton_step(field: &dyn ScalarField, x: &ProductPoint) -> Result<ProductPoint> {
    let state = newton_direction(field, x)?;
    let y = x.exp(&state.direction)?;
    if !field.domain_contains(&y) {
        return Err(Error::OutsideDomain(
            "full Newton step left the domain (decrement not inside 1/sigma?)".into(),
        ));
    }
    Ok(y)
}

/// Damped Newton step `exp_x(u / (1 + sigma lambda))`; stays in the domain
/// for any sigma-self-concordant field.
pub fn damped_step(field: &dyn ScalarField, x: &ProductPoint, sigma: f64) -> Result<ProductPoint> {
    let state = newton_direction(field, x)?;
    let y = x.exp(&state.direction.scale(1.0 / (1.0 + sigma * state.decrement)))?;
    if !field.domain_contains(&y) {
        return Err(Error::InvariantViolation(
            "damped Newton step left the domain; the field is not sigma-self-concordant".into(),
        ));
    }
    Ok(y)
}

#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    /// Self-concordance constant of the field.
    pub sigma: f64,
    /// Stop once the decrement is at or below this.
    pub lambda_target: f64,
    /// Known lower bound on the field's infimum; tightens the damped-phase
    /// iteration cap.
    pub f_lower: Option<f64>,
    /// Assert the per-step guarantees (descent and quadratic
    /// contraction) with 1e-9 slack.
    pub check_guarantees: bool,
}

impl MinimizeOptions {
    pub fn new(sigma: f64, lambda_target: f64) -> Self {
        MinimizeOptions {
            sigma,
            lambda_target,
            f_lower: None,
            check_guarantees: true,
        }
    }
}

/// Quadratic-phase entry threshold, slightly inside the open bound
/// `(3 - sqrt 5)/2 = 0.3819...` of the region of quadratic convergence.
pub const QUADRATIC_ENTRY: f64 = 0.38;

/// Damped Newton until `sigma lambda < QUADRATIC_ENTRY`, then full Newton
/// until `lambda <= lambda_target`.
pub fn minimize(
    field: &dyn ScalarField,
    x0: &ProductPoint,
    opts: &MinimizeOptions,
) -> Result<(ProductPoint, SolveTrace)> {
    if !field.domain_contains(x0) {
        return Err(Error::OutsideDomain(
            "minimize: start point infeasible".into(),
        ));
    }
    let sigma = opts.sigma;
    if !(sigma > 0.0) {
        return Err(Error::Usage(format!(
            "minimize: sigma must be positive, got {sigma}"
        )));
    }
    let mut trace = SolveTrace::default();
    let mut state = newton_direction(field, x0)?;

    let damped_cap = match opts.f_lower {
        Some(lo) => {
            let gap = (state.value - lo).max(0.0);
            10 * (sigma * sigma * gap / omega(QUADRATIC_ENTRY)).ceil() as usize + 100
        }
        None => 100_000,
    };
    let full_cap = 60usize;
    let (mut damped_used, mut full_used) = (0usize, 0usize);
    let mut iter = 0usize;

    loop {
        let lambda = state.decrement;
        if lambda <= opts.lambda_target {
            trace.records.push(TraceRecord {
                iter,
                lambda,
                value: state.value,
                kind: StepKind::None,
                predicted_lambda_bound: None,
                x: state.x.clone(),
            });
            return Ok((state.x, trace));
        }

        if sigma * lambda < QUADRATIC_ENTRY {
            // Quadratic phase.
            if full_used >= full_cap {
                return Err(Error::ConvergenceFailure(format!(
                    "full-Newton cap {full_cap} exceeded at lambda = {lambda:.3e}"
                )));
            }
            let bound = sigma * lambda * lambda / (1.0 - sigma * lambda).powi(2);
            let y = state.x.exp(&state.direction)?;
            if !field.domain_contains(&y) {
                return Err(Error::InvariantViolation(
                    "full Newton step left the domain".into(),
                ));
            }
            trace.records.push(TraceRecord {
                iter,
                lambda,
                value: state.value,
                kind: StepKind::Full,
                predicted_lambda_bound: Some(bound),
                x: state.x.clone(),
            });
            let next = newton_direction(field, &y)?;
            if opts.check_guarantees && next.decrement > bound + 1e-9 {
                return Err(Error::InvariantViolation(format!(
                    "quadratic contraction failed: lambda+ = {:.6e} > bound {:.6e}",
                    next.decrement, bound
                )));
            }
            state = next;
            full_used += 1;
        } else {
            // Damped phase.
            if damped_used >= damped_cap {
                return Err(Error::ConvergenceFailure(format!(
                    "damped-Newton cap {damped_cap} exceeded at lambda = {lambda:.3e}"
                )));
            }
            let y = state
                .x
                .exp(&state.direction.scale(1.0 / (1.0 + sigma * lambda)))?;
            if !field.domain_contains(&y) {
                return Err(Error::InvariantViolation(
                    "damped Newton step left the domain".into(),
                ));
            }
            trace.records.push(TraceRecord {
                iter,
                lambda,
                value: state.value,
                kind: StepKind::Damped,
                predicted_lambda_bound: None,
                x: state.x.clone(),
            });
            let next = newton_direction(field, &y)?;
            if opts.check_guarantees {
                let required = state.value - omega(sigma * lambda) / (sigma * sigma);
                if next.value > required + 1e-9 {
                    return Err(Error::InvariantViolation(format!(
                        "damped descent failed: f+ = {:.12e} > f - omega(sigma lambda)/sigma^2 = {:.12e}",
                        next.value, required
                    )));
                }
            }
            state = next;
            damped_used += 1;
        }
        iter += 1;
    }
}
