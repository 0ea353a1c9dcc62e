//! Sampled invariants of the derivative calculus: closed forms against the
//! value-only finite-difference oracles, symmetry of the Hessian-derivative
//! form, the log-barrier inequality, and the curvature-defect identity.

use std::sync::Arc;

use hypersc::fields::{
    ball_barrier, LinearObjectiveField, ScalarField, SquaredDistanceField, WeightedSumField,
};
use hypersc::hyperboloid::{HPoint, HTangent};
use hypersc::oracles::{curvature_defect, fd_directional, fd_hessian_derivative};
use hypersc::product::{ProductPoint, ProductTangent};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn random_unit(rng: &mut ChaCha8Rng, x: &HPoint) -> HTangent {
    let basis = x.tangent_basis();
    loop {
        let mut acc = HTangent::zero(x.clone());
        for b in &basis {
            let g: f64 = rng.sample(StandardNormal);
            acc = acc.add(&b.scale(g)).unwrap();
        }
        if acc.local_norm() > 1e-9 {
            return acc.scale(1.0 / acc.local_norm());
        }
    }
}

/// A random squared-distance configuration: evaluation point near the apex,
/// pole at log-uniform unit-sheet arc in `(0.01, 20)`.
fn random_config(
    rng: &mut ChaCha8Rng,
    dim: usize,
    kappa: f64,
) -> (
    ProductPoint,
    SquaredDistanceField,
    ProductTangent,
    ProductTangent,
) {
    let apex = HPoint::apex(dim, kappa);
    let w = random_unit(rng, &apex);
    let xh = apex.exp(&w.scale(rng.random::<f64>())).unwrap();
    let arc = (rng.random::<f64>() * (20.0f64.ln() - 0.01f64.ln()) + 0.01f64.ln()).exp();
    let dir = random_unit(rng, &xh);
    let pole = xh.exp(&dir.scale(-arc / kappa.sqrt())).unwrap();
    let u = ProductTangent::hyperbolic(random_unit(rng, &xh));
    let v = ProductTangent::hyperbolic(random_unit(rng, &xh));
    (
        ProductPoint::hyperbolic(xh),
        SquaredDistanceField::new(pole),
        u,
        v,
    )
}

#[test]
fn sqdist_closed_forms_match_fd_sampled() {
    for (dim, kappa) in [(2usize, 1.0f64), (3, 4.0)] {
        let mut rng = ChaCha8Rng::seed_from_u64(101 + dim as u64);
        for _ in 0..120 {
            let (x, f, u, v) = random_config(&mut rng, dim, kappa);
            assert!(rel_err(fd_directional(&f, &x, &u, 1), f.differential_apply(&x, &u)) <= 1e-6);
            assert!(
                rel_err(
                    fd_directional(&f, &x, &u, 2),
                    f.hessian_bilinear(&x, &u, &u)
                ) <= 1e-6
            );
            assert!(
                rel_err(
                    fd_directional(&f, &x, &u, 3),
                    f.hessian_derivative_bilinear(&x, &u, &u, &u)
                ) <= 1e-6
            );
            assert!(
                rel_err(
                    fd_hessian_derivative(&f, &x, &v, &u),
                    f.hessian_derivative_bilinear(&x, &v, &u, &u)
                ) <= 1e-6
            );
        }
    }
}

#[test]
fn hessian_derivative_symmetric_in_last_two_arguments() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let (x, f, u, v) = random_config(&mut rng, 2, 1.0);
        let w = ProductTangent::hyperbolic(random_unit(&mut rng, x.hyper.as_ref().unwrap()));
        let a = f.hessian_derivative_bilinear(&x, &v, &u, &w);
        let b = f.hessian_derivative_bilinear(&x, &v, &w, &u);
        assert_eq!(a, b, "polarized form must be symmetric by construction");

        // Also through the log barrier and a weighted sum.
        let barrier = ball_barrier(f.pole().clone(), 60.0);
        let a = barrier.hessian_derivative_bilinear(&x, &v, &u, &w);
        let b = barrier.hessian_derivative_bilinear(&x, &v, &w, &u);
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn log_barrier_inequality_everywhere_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let pole = HPoint::apex(2, 1.0);
    let barrier = ball_barrier(pole.clone(), 3.0);
    for _ in 0..200 {
        let w = random_unit(&mut rng, &pole);
        let xh = pole.exp(&w.scale(rng.random::<f64>() * 2.9)).unwrap();
        let x = ProductPoint::hyperbolic(xh.clone());
        let u = ProductTangent::hyperbolic(random_unit(&mut rng, &xh));
        let df = barrier.differential_apply(&x, &u);
        let hf = barrier.hessian_bilinear(&x, &u, &u);
        assert!(df * df <= hf + 1e-12);
    }
}

#[test]
fn curvature_defect_small_for_sqdist_and_barrier() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..200 {
        let (x, f, u, v) = random_config(&mut rng, 2, 1.0);
        let w = ProductTangent::hyperbolic(random_unit(&mut rng, x.hyper.as_ref().unwrap()));
        assert!(curvature_defect(&f, &x, &u, &v, &w).unwrap().abs() <= 1e-6);
        let barrier = ball_barrier(f.pole().clone(), 25.0);
        assert!(curvature_defect(&barrier, &x, &u, &v, &w).unwrap().abs() <= 1e-6);
    }
}

#[test]
fn affine_objective_higher_fd_orders_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let ell = LinearObjectiveField::new(vec![0.4, -0.3, 0.25]);
    for _ in 0..100 {
        let x = ProductPoint::euclidean(vec![
            rng.random::<f64>() * 4.0 - 2.0,
            rng.random::<f64>() * 4.0 - 2.0,
            rng.random::<f64>() * 4.0 - 2.0,
        ]);
        let raw = ProductTangent::euclidean(vec![
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ]);
        let u = raw.scale(1.0 / raw.local_norm());
        assert!(fd_directional(&ell, &x, &u, 2).abs() <= 1e-9);
        assert!(fd_directional(&ell, &x, &u, 3).abs() <= 1e-9);
    }
}

#[test]
fn weighted_sum_derivatives_are_linear_combinations() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let p1 = HPoint::apex(2, 1.0);
    let p2 = HPoint::from_spatial(&[0.9, -0.2], 1.0).unwrap();
    let f1 = Arc::new(SquaredDistanceField::new(p1)) as Arc<dyn ScalarField>;
    let f2 = Arc::new(SquaredDistanceField::new(p2)) as Arc<dyn ScalarField>;
    let sum = WeightedSumField::new(vec![(0.7, f1.clone()), (2.3, f2.clone())]);
    for _ in 0..50 {
        let xh = HPoint::from_spatial(
            &[
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ],
            1.0,
        )
        .unwrap();
        let x = ProductPoint::hyperbolic(xh.clone());
        let u = ProductTangent::hyperbolic(random_unit(&mut rng, &xh));
        let v = ProductTangent::hyperbolic(random_unit(&mut rng, &xh));
        let lin = 0.7 * f1.hessian_derivative_bilinear(&x, &v, &u, &u)
            + 2.3 * f2.hessian_derivative_bilinear(&x, &v, &u, &u);
        assert!(
            (sum.hessian_derivative_bilinear(&x, &v, &u, &u) - lin).abs()
                <= 1e-12 * (1.0 + lin.abs())
        );
        // And against the FD oracle.
        assert!(
            rel_err(
                fd_directional(&sum, &x, &u, 2),
                sum.hessian_bilinear(&x, &u, &u)
            ) <= 1e-6
        );
    }
}
