//! Numerical certification and falsification of self-concordance properties.
//!
//! The central quantity is the ratio
//! `sigma_x(u,v) = |nabla_v Hf(u,u)| / (2 Hf(v,v)^{1/2} Hf(u,u))`
//! whose supremum over the domain is the best self-concordance constant; the
//! diagonal `u = v` with exponent 3/2 gives the weak constant. [`certify`]
//! estimates the suprema by seeded random sampling plus the analytic extremal
//! configurations ("probes"), which is how the tight constants
//! `sqrt(kappa)/2` (SC) and `sqrt(4 kappa / 27)` (WSC) of the hyperbolic
//! squared distance are reproduced numerically.
//!
//! Sampling places the *evaluation* point near the apex of the sheet and
//! moves the pole out to the requested arc instead of the other way around
//! (the two are isometric): tangent-space arithmetic at a far point loses
//! `cosh(l)^2`-scaled precision in f64, while a far pole only ever enters
//! through well-conditioned inner products.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fields::{ball_barrier, phi, z_coth_z, ScalarField, SquaredDistanceField};
use crate::hyperboloid::{HPoint, HTangent};
use crate::newton::{omega, omega_star};
use crate::product::{Geodesic, ProductPoint, ProductTangent};

/// Slack added to analytic bounds before declaring a falsification.
pub const BOUND_SLACK: f64 = 1e-9;

/// `sigma_x(u,v) = |nabla_v Hf(u,u)| / (2 Hf(v,v)^{1/2} Hf(u,u))`.
///
/// Scale-invariant in `u` and `v` separately.
pub fn sc_ratio(
    field: &dyn ScalarField,
    x: &ProductPoint,
    u: &ProductTangent,
    v: &ProductTangent,
) -> Result<f64> {
    let huu = field.hessian_bilinear(x, u, u);
    let hvv = field.hessian_bilinear(x, v, v);
    if !(huu > 0.0 && hvv > 0.0) {
        return Err(Error::DegenerateHessian(format!(
            "sc_ratio: Hf(u,u) = {huu}, Hf(v,v) = {hvv}"
        )));
    }
    let num = field.hessian_derivative_bilinear(x, v, u, u).abs();
    Ok(num / (2.0 * hvv.sqrt() * huu))
}

/// `|nabla_u Hf(u,u)| / (2 Hf(u,u)^{3/2})` — the weak (diagonal) ratio.
///
/// Evaluates the same expression as `sc_ratio(field, x, u, u)` so the
/// diagonal identity is exact.
pub fn wsc_ratio(field: &dyn ScalarField, x: &ProductPoint, u: &ProductTangent) -> Result<f64> {
    sc_ratio(field, x, u, u)
}

/// Where a certification maximum was found.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub ratio: f64,
    pub x_hyper: Vec<f64>,
    pub x_eucl: Vec<f64>,
    pub u_hyper: Vec<f64>,
    pub u_eucl: Vec<f64>,
    pub v_hyper: Vec<f64>,
    pub v_eucl: Vec<f64>,
    /// Pole of the per-sample field, when the target has one.
    pub pole: Vec<f64>,
    /// Unit-sheet arc from the evaluation point to the pole (0 if no pole).
    pub arc: f64,
    /// True when the witness came from an analytic probe rather than a
    /// random sample.
    pub from_probe: bool,
}

impl Witness {
    fn new(
        ratio: f64,
        x: &ProductPoint,
        u: &ProductTangent,
        v: &ProductTangent,
        pole: Option<&HPoint>,
        arc: f64,
        from_probe: bool,
    ) -> Self {
        Witness {
            ratio,
            x_hyper: x
                .hyper
                .as_ref()
                .map_or_else(Vec::new, |h| h.coords().to_vec()),
            x_eucl: x.eucl.clone(),
            u_hyper: u
                .hyper
                .as_ref()
                .map_or_else(Vec::new, |h| h.coords().to_vec()),
            u_eucl: u.eucl.clone(),
            v_hyper: v
                .hyper
                .as_ref()
                .map_or_else(Vec::new, |h| h.coords().to_vec()),
            v_eucl: v.eucl.clone(),
            pole: pole.map_or_else(Vec::new, |p| p.coords().to_vec()),
            arc,
            from_probe,
        }
    }
}

/// One entry of the probe curve: measured and (when available) analytic
/// ratios at a given unit-sheet arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePoint {
    pub arc: f64,
    pub sc: f64,
    pub wsc: f64,
    pub sc_analytic: Option<f64>,
    pub wsc_analytic: Option<f64>,
}

/// Result of a certification run. Reproducible: identical for identical
/// seed/config regardless of thread count.
#[derive(Debug, Clone, PartialEq)]
pub struct SCReport {
    pub max_sc_ratio: f64,
    pub max_wsc_ratio: f64,
    pub sc_witness: Witness,
    pub wsc_witness: Witness,
    pub samples: usize,
    pub seed: u64,
    pub probe_curve: Vec<ProbePoint>,
}

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub seed: u64,
    pub samples: usize,
    /// Unit-sheet arc range for pole placement (log-uniform).
    pub arc_min: f64,
    pub arc_max: f64,
    /// Arcs at which the analytic extremal probes are evaluated. The probes
    /// are first-class: random sampling approaches the tight constants only
    /// as the arc grows, so the grid extends beyond `arc_max`.
    pub probe_arcs: Vec<f64>,
    /// Worker threads; `None` uses the machine parallelism.
    pub threads: Option<usize>,
}

impl SamplerConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        SamplerConfig {
            seed,
            samples,
            arc_min: 0.01,
            arc_max: 50.0,
            probe_arcs: vec![0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0],
            threads: None,
        }
    }
}

/// What to certify.
#[derive(Debug, Clone)]
pub enum CertifyTarget {
    /// Squared distance on `H^dim` at curvature `-kappa`.
    Sqdist { dim: usize, kappa: f64 },
    /// Ball barrier `-log(R^2 - d^2)` on `H^dim` (radius in the
    /// curvature-`kappa` metric).
    BallBarrier { dim: usize, kappa: f64, radius: f64 },
}

/// Analytic value of the SC probe for the squared distance at unit-sheet arc
/// `l` (normalized curvature): `(l - Phi(l)) tanh(l) / (2 l)`.
pub fn sqdist_sc_probe_value(l: f64, kappa: f64) -> f64 {
    kappa.sqrt() * (l - phi(l)) * l.tanh() / (2.0 * l)
}

/// Analytic value of the WSC probe: `|3 coth l - tanh l - 3/l| / sqrt(27)`.
pub fn sqdist_wsc_probe_value(l: f64, kappa: f64) -> f64 {
    kappa.sqrt() * (3.0 / l.tanh() - l.tanh() - 3.0 / l).abs() / 27.0f64.sqrt()
}

/// Tight self-concordance bound for the squared distance: `sqrt(kappa)/2`.
pub fn sqdist_sc_bound(kappa: f64) -> f64 {
    kappa.sqrt() / 2.0
}

/// Tight weak bound: `sqrt(4 kappa / 27)`.
pub fn sqdist_wsc_bound(kappa: f64) -> f64 {
    (4.0 * kappa / 27.0).sqrt()
}

/// Self-concordance constant of the ball barrier `-log(R^2 - d^2)`:
/// `sqrt((sigma sqrt(beta - f*) + 1)^2 + 9/4)` with `sigma = sqrt(kappa/8)`
/// for the inner field `d^2` and `beta - f* = R^2`.
pub fn sigma_tilde_ball(kappa: f64, radius: f64) -> f64 {
    let s = (kappa / 8.0).sqrt() * radius;
    ((s + 1.0) * (s + 1.0) + 2.25).sqrt()
}

struct MaxTracker {
    sc: f64,
    sc_witness: Option<Witness>,
    wsc: f64,
    wsc_witness: Option<Witness>,
}

impl MaxTracker {
    fn new() -> Self {
        MaxTracker {
            sc: f64::NEG_INFINITY,
            sc_witness: None,
            wsc: f64::NEG_INFINITY,
            wsc_witness: None,
        }
    }

    fn offer_sc(&mut self, w: Witness) {
        if w.ratio > self.sc {
            self.sc = w.ratio;
            self.sc_witness = Some(w);
        }
    }

    fn offer_wsc(&mut self, w: Witness) {
        if w.ratio > self.wsc {
            self.wsc = w.ratio;
            self.wsc_witness = Some(w.clone());
        }
        // The diagonal is also an SC candidate, keeping
        // max_wsc <= max_sc structurally.
        self.offer_sc(w);
    }

    fn merge(&mut self, other: MaxTracker) {
        if let Some(w) = other.sc_witness {
            self.offer_sc(w);
        }
        if let Some(w) = other.wsc_witness {
            if w.ratio > self.wsc {
                self.wsc = w.ratio;
                self.wsc_witness = Some(w);
            }
        }
    }
}

fn resolve_threads(requested: Option<usize>, nbatch: usize) -> usize {
    let hw = std::thread::available_parallelism().map_or(1, |n| n.get());
    requested.unwrap_or(hw).clamp(1, nbatch)
}

/// Runs `job(batch_index)` over `nbatch` batches on a small worker pool and
/// returns the results in batch order (deterministic regardless of the
/// number of threads).
fn run_batches<R: Send>(
    nbatch: usize,
    threads: usize,
    job: &(dyn Fn(usize) -> R + Sync),
) -> Vec<R> {
    if threads <= 1 {
        return (0..nbatch).map(job).collect();
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, R)>();
    std::thread::scope(|s| {
        for _ in 0..threads {
            let tx = tx.clone();
            let next = &next;
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= nbatch {
                    break;
                }
                let r = job(i);
                if tx.send((i, r)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut slots: Vec<Option<R>> = (0..nbatch).map(|_| None).collect();
        for (i, r) in rx {
            slots[i] = Some(r);
        }
        slots
            .into_iter()
            .map(|r| r.expect("batch result missing"))
            .collect()
    })
}

const NBATCH: usize = 64;

/// Random tangent at `x` with unit Minkowski norm (direction uniform under
/// the local metric; the two coincide up to scale).
fn random_unit_tangent(rng: &mut ChaCha8Rng, x: &HPoint) -> HTangent {
    let basis = x.tangent_basis();
    loop {
        let mut acc = HTangent::zero(x.clone());
        for b in &basis {
            let g: f64 = rng.sample(StandardNormal);
            acc = acc.add(&b.scale(g)).expect("same base");
        }
        let n = acc.mink_norm();
        if n > 1e-12 {
            return acc.scale(1.0 / n);
        }
    }
}

/// The sampled configuration for pole-based targets: an evaluation point
/// within unit arc of the apex, a pole at arc `l` in a random direction, and
/// the per-sample field.
struct SampleConfig {
    x: ProductPoint,
    pole: HPoint,
    arc: f64,
    u: ProductTangent,
    v: ProductTangent,
    field: Box<dyn ScalarField>,
}

fn draw_sample(
    rng: &mut ChaCha8Rng,
    target: &CertifyTarget,
    arc_min: f64,
    arc_max: f64,
) -> SampleConfig {
    let (dim, kappa) = match target {
        CertifyTarget::Sqdist { dim, kappa } => (*dim, *kappa),
        CertifyTarget::BallBarrier { dim, kappa, .. } => (*dim, *kappa),
    };
    let apex = HPoint::apex(dim, kappa);
    // Evaluation point: random direction, arc radius U(0, 1) from the apex.
    let w = random_unit_tangent(rng, &apex);
    let r: f64 = rng.random::<f64>();
    let xh = apex.exp(&w.scale(r)).expect("exp from apex");

    // Pole at log-uniform arc in a random direction.
    let arc = (rng.random::<f64>() * (arc_max.ln() - arc_min.ln()) + arc_min.ln()).exp();
    let dir = random_unit_tangent(rng, &xh);
    let pole = xh.exp(&dir.scale(-arc)).expect("exp to pole");

    let u = ProductTangent::hyperbolic(random_unit_tangent(rng, &xh));
    let v = ProductTangent::hyperbolic(random_unit_tangent(rng, &xh));
    let x = ProductPoint::hyperbolic(xh);

    let field: Box<dyn ScalarField> = match target {
        CertifyTarget::Sqdist { .. } => Box::new(SquaredDistanceField::new(pole.clone())),
        CertifyTarget::BallBarrier { radius, .. } => Box::new(ball_barrier(pole.clone(), *radius)),
    };
    SampleConfig {
        x,
        pole,
        arc,
        u,
        v,
        field,
    }
}

/// An extremal probe configuration in the spherical parametrization against
/// the radial direction at the evaluation point: the pole sits at unit-sheet
/// arc `arc`, `u = (sin theta, 0, cos theta)` and
/// `v = (sin phi cos alpha, sin phi sin alpha, cos phi)` in the frame
/// `(t1, t2, gdot)` with `gdot` the outward radial. The induced `u`, `v` are
/// unit vectors.
#[derive(Debug, Clone, Copy)]
pub struct ProbeSpec {
    pub arc: f64,
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
}

impl ProbeSpec {
    /// Extremal configuration for the off-diagonal ratio of the squared
    /// distance: `tan^2 theta = 1/(l coth l)`, `v` transverse in `u`'s plane.
    pub fn sc_extremal(arc: f64) -> Self {
        ProbeSpec {
            arc,
            theta: (1.0 / z_coth_z(arc)).sqrt().atan(),
            phi: std::f64::consts::FRAC_PI_2,
            alpha: 0.0,
        }
    }

    /// Extremal diagonal configuration: `tan^2 theta = 2 tanh(l)/l`, `v = u`.
    pub fn wsc_extremal(arc: f64) -> Self {
        let theta = (2.0 / z_coth_z(arc)).sqrt().atan();
        ProbeSpec {
            arc,
            theta,
            phi: theta,
            alpha: 0.0,
        }
    }

    /// Diagonal configuration at an explicit angle (`v = u`).
    pub fn diagonal(arc: f64, tan2_theta: f64) -> Self {
        let theta = tan2_theta.sqrt().atan();
        ProbeSpec {
            arc,
            theta,
            phi: theta,
            alpha: 0.0,
        }
    }

    /// Realizes the configuration at the apex of `H^dim`: evaluation point,
    /// pole, and the tangents `u`, `v`.
    pub fn build(
        &self,
        dim: usize,
        kappa: f64,
    ) -> Result<(ProductPoint, HPoint, ProductTangent, ProductTangent)> {
        if dim < 2 {
            return Err(Error::Usage("probe needs dimension >= 2".into()));
        }
        let x = HPoint::apex(dim, kappa);
        let basis = x.tangent_basis();
        // Minkowski-unit frame: radial, in-plane transverse, off-plane.
        let g = basis[0].scale(1.0 / basis[0].mink_norm());
        let t1 = basis[1].scale(1.0 / basis[1].mink_norm());
        let pole = x.exp(&g.scale(-self.arc))?;
        let u = t1.scale(self.theta.sin()).add(&g.scale(self.theta.cos()))?;
        let v_t2 = self.phi.sin() * self.alpha.sin();
        let mut v = t1
            .scale(self.phi.sin() * self.alpha.cos())
            .add(&g.scale(self.phi.cos()))?;
        if v_t2.abs() > 1e-15 {
            if dim < 3 {
                return Err(Error::Usage(
                    "alpha outside {0, pi} needs dimension >= 3".into(),
                ));
            }
            let t2 = basis[2].scale(1.0 / basis[2].mink_norm());
            v = v.add(&t2.scale(v_t2))?;
        }
        Ok((
            ProductPoint::hyperbolic(x),
            pole,
            ProductTangent::hyperbolic(u),
            ProductTangent::hyperbolic(v),
        ))
    }
}

fn probe_tangents(
    dim: usize,
    kappa: f64,
    l: f64,
    tan2_theta: f64,
) -> (ProductPoint, HPoint, ProductTangent, ProductTangent) {
    // SC-style frame: u at angle theta, v transverse (phi = pi/2, alpha = 0).
    let spec = ProbeSpec {
        arc: l,
        theta: tan2_theta.sqrt().atan(),
        phi: std::f64::consts::FRAC_PI_2,
        alpha: 0.0,
    };
    spec.build(dim, kappa).expect("probe configuration")
}

fn sqdist_probes(
    dim: usize,
    kappa: f64,
    arcs: &[f64],
    tracker: &mut MaxTracker,
) -> Vec<ProbePoint> {
    let mut curve = Vec::with_capacity(arcs.len());
    for &l in arcs {
        let (x, pole, u, v) = ProbeSpec::sc_extremal(l).build(dim, kappa).expect("probe");
        let field = SquaredDistanceField::new(pole.clone());
        let sc = sc_ratio(&field, &x, &u, &v).expect("probe ratio");
        tracker.offer_sc(Witness::new(sc, &x, &u, &v, Some(&pole), l, true));

        let (x, pole, u, _) = ProbeSpec::wsc_extremal(l).build(dim, kappa).expect("probe");
        let field = SquaredDistanceField::new(pole.clone());
        let wsc = wsc_ratio(&field, &x, &u).expect("probe ratio");
        tracker.offer_wsc(Witness::new(wsc, &x, &u, &u, Some(&pole), l, true));

        curve.push(ProbePoint {
            arc: l,
            sc,
            wsc,
            sc_analytic: Some(sqdist_sc_probe_value(l, kappa)),
            wsc_analytic: Some(sqdist_wsc_probe_value(l, kappa)),
        });
    }
    curve
}

fn ball_barrier_probes(
    dim: usize,
    kappa: f64,
    radius: f64,
    tracker: &mut MaxTracker,
) -> Vec<ProbePoint> {
    let r_sheet = kappa.sqrt() * radius;
    let mut curve = Vec::new();
    for frac in [0.3, 0.5, std::f64::consts::FRAC_1_SQRT_2, 0.9] {
        let l = frac * r_sheet;
        // Proof angle: tan^2(theta) = ((omega + l^2)/omega) tanh(l)/l in
        // normalized units, omega = (R^2 - l^2)/2.
        let omega_n = (r_sheet * r_sheet - l * l) / 2.0;
        let tan2 = ((omega_n + l * l) / omega_n) * l.tanh() / l;
        let (x, pole, u, v) = probe_tangents(dim, kappa, l, tan2);
        let field = ball_barrier(pole.clone(), radius);
        let wsc = wsc_ratio(&field, &x, &u).expect("probe ratio");
        tracker.offer_wsc(Witness::new(wsc, &x, &u, &u, Some(&pole), l, true));
        let sc = sc_ratio(&field, &x, &u, &v).expect("probe ratio");
        tracker.offer_sc(Witness::new(sc, &x, &u, &v, Some(&pole), l, true));
        curve.push(ProbePoint {
            arc: l,
            sc,
            wsc,
            sc_analytic: None,
            wsc_analytic: None,
        });
    }
    curve
}

/// Seeded random certification of a target, with the analytic probes always
/// included in the candidate set.
pub fn certify(target: &CertifyTarget, config: &SamplerConfig) -> Result<SCReport> {
    match target {
        CertifyTarget::Sqdist { dim, kappa } | CertifyTarget::BallBarrier { dim, kappa, .. } => {
            if *dim < 2 {
                return Err(Error::Usage("certify: dimension must be >= 2".into()));
            }
            if !(kappa.is_finite() && *kappa > 0.0) {
                return Err(Error::Usage("certify: kappa must be positive".into()));
            }
        }
    }
    let (arc_min, mut arc_max) = (config.arc_min, config.arc_max);
    if let CertifyTarget::BallBarrier { kappa, radius, .. } = target {
        // Samples must stay strictly inside the ball.
        arc_max = arc_max.min(0.995 * kappa.sqrt() * radius);
    }
    if !(arc_min > 0.0 && arc_max > arc_min) {
        return Err(Error::Usage(format!(
            "certify: bad arc range [{arc_min}, {arc_max}]"
        )));
    }

    let threads = resolve_threads(config.threads, NBATCH);
    let per_batch = config.samples / NBATCH;
    let remainder = config.samples % NBATCH;

    let job = |batch: usize| -> MaxTracker {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(batch as u64 + 1);
        let count = per_batch + usize::from(batch < remainder);
        let mut tracker = MaxTracker::new();
        for _ in 0..count {
            let s = draw_sample(&mut rng, target, arc_min, arc_max);
            if !s.field.domain_contains(&s.x) {
                continue;
            }
            let r_sc = sc_ratio(s.field.as_ref(), &s.x, &s.u, &s.v).expect("sampled ratio");
            tracker.offer_sc(Witness::new(
                r_sc,
                &s.x,
                &s.u,
                &s.v,
                Some(&s.pole),
                s.arc,
                false,
            ));
            let r_wsc = wsc_ratio(s.field.as_ref(), &s.x, &s.u).expect("sampled ratio");
            tracker.offer_wsc(Witness::new(
                r_wsc,
                &s.x,
                &s.u,
                &s.u,
                Some(&s.pole),
                s.arc,
                false,
            ));
        }
        tracker
    };

    let mut tracker = MaxTracker::new();
    for batch in run_batches(NBATCH, threads, &job) {
        tracker.merge(batch);
    }

    let probe_curve = match target {
        CertifyTarget::Sqdist { dim, kappa } => {
            sqdist_probes(*dim, *kappa, &config.probe_arcs, &mut tracker)
        }
        CertifyTarget::BallBarrier { dim, kappa, radius } => {
            ball_barrier_probes(*dim, *kappa, *radius, &mut tracker)
        }
    };

    let sc_witness = tracker
        .sc_witness
        .ok_or_else(|| Error::Usage("certify: no samples and no probes".into()))?;
    let wsc_witness = tracker
        .wsc_witness
        .expect("wsc witness accompanies sc witness");
    Ok(SCReport {
        max_sc_ratio: tracker.sc,
        max_wsc_ratio: tracker.wsc,
        sc_witness,
        wsc_witness,
        samples: config.samples,
        seed: config.seed,
        probe_curve,
    })
}

/// Sampled certification of an arbitrary field over caller-provided interior
/// points (used for the minimum-enclosing-ball barrier, whose domain only the
/// caller knows how to sample).
pub fn certify_field(
    field: &dyn ScalarField,
    interior: &[ProductPoint],
    seed: u64,
    dirs_per_point: usize,
) -> Result<SCReport> {
    if interior.is_empty() {
        return Err(Error::Usage("certify_field: no interior points".into()));
    }
    let mut tracker = MaxTracker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for x in interior {
        if !field.domain_contains(x) {
            return Err(Error::OutsideDomain(
                "certify_field: point not in domain".into(),
            ));
        }
        let basis = x.tangent_basis();
        let draw = |rng: &mut ChaCha8Rng| -> ProductTangent {
            let mut acc = x.zero_tangent();
            for b in &basis {
                let g: f64 = rng.sample(StandardNormal);
                acc = acc.add(&b.scale(g)).expect("same base");
            }
            acc
        };
        for _ in 0..dirs_per_point {
            let u = draw(&mut rng);
            let v = draw(&mut rng);
            let r_sc = sc_ratio(field, x, &u, &v)?;
            tracker.offer_sc(Witness::new(r_sc, x, &u, &v, None, 0.0, false));
            let r_wsc = wsc_ratio(field, x, &u)?;
            tracker.offer_wsc(Witness::new(r_wsc, x, &u, &u, None, 0.0, false));
        }
    }
    let sc_witness = tracker.sc_witness.expect("at least one sample");
    let wsc_witness = tracker.wsc_witness.expect("at least one sample");
    Ok(SCReport {
        max_sc_ratio: tracker.sc,
        max_wsc_ratio: tracker.wsc,
        sc_witness,
        wsc_witness,
        samples: interior.len() * dirs_per_point,
        seed,
        probe_curve: Vec::new(),
    })
}

/// Worst sampled `DF(u)^2 / HF(u,u)` against the claimed barrier parameter.
#[derive(Debug, Clone)]
pub struct BarrierParamReport {
    pub worst_ratio: f64,
    pub nu: f64,
    pub ok: bool,
}

pub fn barrier_parameter_check(
    field: &dyn ScalarField,
    nu: f64,
    samples: &[(ProductPoint, ProductTangent)],
) -> Result<BarrierParamReport> {
    let mut worst: f64 = 0.0;
    for (x, u) in samples {
        if !field.domain_contains(x) {
            return Err(Error::OutsideDomain(
                "barrier_parameter_check: infeasible sample".into(),
            ));
        }
        let df = field.differential_apply(x, u);
        let hf = field.hessian_bilinear(x, u, u);
        if !(hf > 0.0) {
            if df.abs() <= 1e-14 {
                continue; // zero direction
            }
            return Err(Error::DegenerateHessian(format!(
                "barrier_parameter_check: HF(u,u) = {hf} with DF(u) = {df}"
            )));
        }
        worst = worst.max(df * df / hf);
    }
    Ok(BarrierParamReport {
        worst_ratio: worst,
        nu,
        ok: worst <= nu + BOUND_SLACK,
    })
}

/// One named inequality of the Dikin-step check, with its slack
/// (`margin >= -BOUND_SLACK` means it held).
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: &'static str,
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct DikinReport {
    pub inside_domain: bool,
    pub checks: Vec<BoundCheck>,
}

impl DikinReport {
    pub fn ok(&self) -> bool {
        self.inside_domain && self.checks.iter().all(|c| c.margin >= -BOUND_SLACK)
    }
}

/// Checks, along the geodesic `t -> exp_x(t u)`, the guarantees of a
/// sigma-weakly-self-concordant field for `|u|_{f,x} < 1/sigma`:
/// domain membership of the endpoint, the two tangent-norm bounds, the two
/// gradient-growth bounds and the two value bounds (with `omega`/`omega*`).
pub fn dikin_step_check(
    field: &dyn ScalarField,
    sigma: f64,
    x: &ProductPoint,
    u: &ProductTangent,
) -> Result<DikinReport> {
    let r = crate::fields::local_norm(field, x, u)?;
    if !(sigma * r < 1.0) {
        return Err(Error::Usage(format!(
            "dikin_step_check: |u|_f = {r} not inside the Dikin radius 1/sigma = {}",
            1.0 / sigma
        )));
    }
    let y = x.exp(u)?;
    let inside_domain = field.domain_contains(&y);
    let mut checks = Vec::new();
    if !inside_domain {
        return Ok(DikinReport {
            inside_domain,
            checks,
        });
    }

    let tu = x.transport(&y, u)?;
    let n1 = crate::fields::local_norm(field, &y, &tu)?;
    let lo = r / (1.0 + sigma * r);
    let hi = r / (1.0 - sigma * r);
    checks.push(BoundCheck {
        name: "tangent_norm_lower",
        margin: n1 - lo,
    });
    checks.push(BoundCheck {
        name: "tangent_norm_upper",
        margin: hi - n1,
    });

    let df0 = field.differential_apply(x, u);
    let df1 = field.differential_apply(&y, &tu);
    let growth = df1 - df0;
    checks.push(BoundCheck {
        name: "gradient_growth_lower",
        margin: growth - r * r / (1.0 + sigma * r),
    });
    checks.push(BoundCheck {
        name: "gradient_growth_upper",
        margin: r * r / (1.0 - sigma * r) - growth,
    });

    let f0 = field.value(x);
    let f1 = field.value(&y);
    let s2 = sigma * sigma;
    checks.push(BoundCheck {
        name: "value_lower",
        margin: f1 - (f0 + df0 + omega(sigma * r) / s2),
    });
    checks.push(BoundCheck {
        name: "value_upper",
        margin: (f0 + df0 + omega_star(sigma * r) / s2) - f1,
    });

    Ok(DikinReport {
        inside_domain,
        checks,
    })
}

/// Eigenvalues of `Hf_{gamma(0)}^{-1} (tau* Hf_{gamma(1)} tau)` in
/// tangent-basis coordinates: the round trip "transport out with the
/// connection, back with its Hessian-dual". For a sigma-SC field with
/// `r = |dir|_{f,base} < 1/sigma` they lie in
/// `[(1 - sigma r)^2, (1 - sigma r)^{-2}]`.
pub fn transport_comparison(field: &dyn ScalarField, geodesic: &Geodesic) -> Result<Vec<f64>> {
    let x = &geodesic.base;
    let y = geodesic.point_at(1.0)?;
    if !field.domain_contains(&y) {
        return Err(Error::OutsideDomain(
            "transport_comparison: endpoint infeasible".into(),
        ));
    }
    let h0 = field.hessian(x);
    let n = h0.basis.len();
    // Pulled-back form A_{ij} = Hf_y(tau b_i, tau b_j).
    let moved: Vec<ProductTangent> = h0
        .basis
        .iter()
        .map(|b| x.transport(&y, b))
        .collect::<Result<_>>()?;
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = field.hessian_bilinear(&y, &moved[i], &moved[j]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    generalized_sym_eigenvalues(&h0.matrix, &a)
}

/// Eigenvalues of `H0^{-1} A` for symmetric positive-definite `H0` and
/// symmetric `A`, via the Cholesky congruence `L^{-1} A L^{-T}`.
fn generalized_sym_eigenvalues(h0: &DMatrix<f64>, a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = Cholesky::new(h0.clone()).ok_or_else(|| {
        Error::DegenerateHessian("transport_comparison: H0 not positive definite".into())
    })?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or_else(|| {
        Error::DegenerateHessian("transport_comparison: singular Cholesky factor".into())
    })?;
    let m = &linv * a * linv.transpose();
    let sym = (&m + m.transpose()) * 0.5;
    let mut eig: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eig.sort_by(|p, q| p.partial_cmp(q).expect("finite eigenvalues"));
    Ok(eig)
}

/// Dual route of the transport comparison: eigenvalues of the same operator
/// computed through inverse Hessians (`H1_pulled^{-1}` acting on `H0`),
/// whose spectrum must be the reciprocal set.
pub fn transport_comparison_dual(field: &dyn ScalarField, geodesic: &Geodesic) -> Result<Vec<f64>> {
    let x = &geodesic.base;
    let y = geodesic.point_at(1.0)?;
    let h0 = field.hessian(x);
    let n = h0.basis.len();
    let moved: Vec<ProductTangent> = h0
        .basis
        .iter()
        .map(|b| x.transport(&y, b))
        .collect::<Result<_>>()?;
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = field.hessian_bilinear(&y, &moved[i], &moved[j]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    generalized_sym_eigenvalues(&a, &h0.matrix)
}

/// Sampled check of the weighted-sum rule: the SC ratio of
/// `alpha f1 + beta f2` never exceeds `max(s1/sqrt(alpha), s2/sqrt(beta))`.
#[allow(clippy::too_many_arguments)]
pub fn sum_rule_check(
    f1: Arc<dyn ScalarField>,
    s1: f64,
    f2: Arc<dyn ScalarField>,
    s2: f64,
    alpha: f64,
    beta: f64,
    points: &[ProductPoint],
    seed: u64,
    dirs_per_point: usize,
) -> Result<(bool, f64, f64)> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Usage(
            "sum_rule_check: weights must be positive".into(),
        ));
    }
    let bound = (s1 / alpha.sqrt()).max(s2 / beta.sqrt());
    let sum = crate::fields::WeightedSumField::new(vec![(alpha, f1), (beta, f2)]);
    let report = certify_field(&sum, points, seed, dirs_per_point)?;
    Ok((
        report.max_sc_ratio <= bound + BOUND_SLACK,
        report.max_sc_ratio,
        bound,
    ))
}

/// Sampled check that the ball barrier's SC constant stays below the
/// analytic `sigma_tilde` from the log-barrier composition rule.
pub fn barrier_sc_constant_check(
    kappa: f64,
    radius: f64,
    config: &SamplerConfig,
) -> Result<(bool, f64, f64)> {
    let sigma = sigma_tilde_ball(kappa, radius);
    let report = certify(
        &CertifyTarget::BallBarrier {
            dim: 2,
            kappa,
            radius,
        },
        config,
    )?;
    Ok((
        report.max_sc_ratio <= sigma + BOUND_SLACK,
        report.max_sc_ratio,
        sigma,
    ))
}

/// Evaluates the weak-SC ratio of the ball barrier at the proof's extremal
/// configuration (`d(p,x)^2 = R^2/2`, the stated angle) for each radius.
/// The ratio grows linearly in `R` for large `R`.
pub fn tightness_scan(radii: &[f64], kappa: f64) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(radii.len());
    for &radius in radii {
        if !(radius > 0.0) {
            return Err(Error::Usage(
                "tightness_scan: radii must be positive".into(),
            ));
        }
        let r_sheet = kappa.sqrt() * radius;
        let l = r_sheet / 2.0f64.sqrt();
        let omega_n = (r_sheet * r_sheet - l * l) / 2.0;
        let tan2 = ((omega_n + l * l) / omega_n) * l.tanh() / l;
        let (x, pole, u, _) = ProbeSpec::diagonal(l, tan2).build(2, kappa)?;
        let field = ball_barrier(pole, radius);
        out.push((radius, wsc_ratio(&field, &x, &u)?));
    }
    Ok(out)
}

/// Explicit lower bound on the ball-barrier WSC ratio at `l^2 = R^2/2`
/// (normalized curvature):
/// `(R^2 - l^2)/(8 sqrt(R^2 + l^2)) |2 tanh l - 3 Phi(l) tanh(l)/l| - 5/2^{5/2}`.
///
/// The leading constant comes from `2 HF^{3/2} = 2^{5/2} (omega + l^2)^{3/2}
/// cos^3(theta) / omega^3` at the extremal angle; it is asymptotically tight
/// (grows like the measured ratio, linearly in `R`).
pub fn tightness_lower_bound(radius: f64) -> f64 {
    let l = radius / 2.0f64.sqrt();
    let th = l.tanh();
    (radius * radius - l * l) / (8.0 * (radius * radius + l * l).sqrt())
        * (2.0 * th - 3.0 * phi(l) * th / l).abs()
        - 5.0 / 2.0f64.powf(2.5)
}
