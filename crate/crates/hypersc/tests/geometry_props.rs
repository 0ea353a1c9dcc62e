//! Property tests for the hyperboloid and product geometry.
//!
//! Far-point caveats: comparing two far points through the Minkowski form
//! loses cosh(arc)^2-scaled precision in f64, so point-level roundtrips are
//! asserted in *relative* ambient error and transport roundtrips are tested
//! within the arc range where 1e-9 is actually representable.

use hypersc::hyperboloid::{minkowski_inner, HPoint, HTangent};
use hypersc::product::{ProductPoint, ProductTangent};
use proptest::prelude::*;

fn spatial2() -> impl Strategy<Value = [f64; 2]> {
    [-2.0f64..2.0, -2.0f64..2.0]
}

fn tangent_coeffs() -> impl Strategy<Value = [f64; 2]> {
    [-1.0f64..1.0, -1.0f64..1.0]
}

fn point(s: [f64; 2], kappa: f64) -> HPoint {
    HPoint::from_spatial(&s, kappa).unwrap()
}

fn tangent(x: &HPoint, c: [f64; 2]) -> HTangent {
    let b = x.tangent_basis();
    b[0].scale(c[0]).add(&b[1].scale(c[1])).unwrap()
}

fn rel_ambient_err(a: &HPoint, b: &HPoint) -> f64 {
    let scale = b
        .coords()
        .iter()
        .map(|c| c * c)
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max)
        / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exp_stays_on_sheet(s in spatial2(), c in tangent_coeffs(), scale in 0.0f64..8.0) {
        let x = point(s, 1.0);
        let u = tangent(&x, c).scale(scale);
        let y = x.exp(&u).unwrap();
        let q = minkowski_inner(y.coords(), y.coords()).unwrap();
        let mag = (y.coords()[0] * y.coords()[0]).max(1.0);
        prop_assert!((q + 1.0).abs() <= 1e-9 * mag);
        // Within moderate range the absolute form holds too.
        if y.coords()[0] < 1e3 {
            prop_assert!((q + 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn exp_log_inversion_both_ways(s in spatial2(), c in tangent_coeffs(), arc in 0.0f64..30.0) {
        let x = point(s, 1.0);
        let raw = tangent(&x, c);
        prop_assume!(raw.local_norm() > 1e-6);
        let u = raw.scale(arc / raw.local_norm());
        let y = x.exp(&u).unwrap();

        // log(x, exp(x, u)) = u, measured at the (near-apex) base point.
        let back = x.log(&y).unwrap();
        let diff = back.add(&u.scale(-1.0)).unwrap();
        prop_assert!(diff.local_norm() <= 1e-9 * (1.0 + u.local_norm()));

        // exp(x, log(x, y)) = y in relative ambient error.
        let fwd = x.exp(&back).unwrap();
        prop_assert!(rel_ambient_err(&fwd, &y) <= 1e-9);
    }

    #[test]
    fn log_norm_equals_distance(s in spatial2(), t in spatial2(), kappa in prop::sample::select(vec![1.0f64, 4.0])) {
        let x = point(s, kappa);
        let y = point(t, kappa);
        let u = x.log(&y).unwrap();
        let d = x.distance(&y).unwrap();
        prop_assert!((u.local_norm() - d).abs() <= 1e-10 * (1.0 + d));
    }

    #[test]
    fn transport_roundtrip_identity(s in spatial2(), c in tangent_coeffs(), arc in 0.0f64..10.0) {
        let x = point(s, 1.0);
        let raw = tangent(&x, c);
        prop_assume!(raw.local_norm() > 1e-6);
        let dir = raw.scale(arc / raw.local_norm());
        let y = x.exp(&dir).unwrap();
        let u = tangent(&x, [c[1], -c[0]]); // some other tangent
        let there = x.transport(&y, &u).unwrap();
        let back = y.transport(&x, &there).unwrap();
        let diff = back.add(&u.scale(-1.0)).unwrap();
        prop_assert!(diff.local_norm() <= 1e-9 * (1.0 + u.local_norm()));
    }

    #[test]
    fn transport_is_isometry(s in spatial2(), t in spatial2(), c in tangent_coeffs(), d in tangent_coeffs()) {
        let x = point(s, 1.0);
        let y = point(t, 1.0);
        let u = tangent(&x, c);
        let w = tangent(&x, d);
        let tu = x.transport(&y, &u).unwrap();
        let tw = x.transport(&y, &w).unwrap();
        let before = x.local_inner(&u, &w);
        let after = y.local_inner(&tu, &tw);
        prop_assert!((before - after).abs() <= 1e-10 * (1.0 + before.abs()));
    }

    #[test]
    fn triangle_inequality(a in spatial2(), b in spatial2(), c in spatial2()) {
        let (x, y, z) = (point(a, 1.0), point(b, 1.0), point(c, 1.0));
        let dxz = x.distance(&z).unwrap();
        let dxy = x.distance(&y).unwrap();
        let dyz = y.distance(&z).unwrap();
        prop_assert!(dxz <= dxy + dyz + 1e-10);
    }

    #[test]
    fn curvature_antisymmetric_exactly(s in spatial2(), c in tangent_coeffs(), d in tangent_coeffs(), e in tangent_coeffs()) {
        let x = point(s, 1.0);
        let u = tangent(&x, c);
        let v = tangent(&x, d);
        let w = tangent(&x, e);
        let ruv = x.curvature_apply(&u, &v, &w).unwrap();
        let rvu = x.curvature_apply(&v, &u, &w).unwrap();
        for i in 0..3 {
            prop_assert_eq!(ruv.coords()[i], -rvu.coords()[i]);
        }
    }

    #[test]
    fn curvature_bilinear_under_scaling(s in spatial2(), c in tangent_coeffs(), a in 0.1f64..4.0) {
        let x = point(s, 1.0);
        let u = tangent(&x, c);
        let v = tangent(&x, [c[1] + 0.3, c[0] - 0.2]);
        let w = tangent(&x, [0.5, -0.7]);
        let r1 = x.curvature_apply(&u.scale(a), &v, &w).unwrap();
        let r2 = x.curvature_apply(&u, &v, &w).unwrap().scale(a);
        for i in 0..3 {
            prop_assert!((r1.coords()[i] - r2.coords()[i]).abs() <= 1e-12 * (1.0 + r2.coords()[i].abs()));
        }
    }

    #[test]
    fn product_distance_pythagoras(s in spatial2(), t in spatial2(), e1 in -3.0f64..3.0, e2 in -3.0f64..3.0) {
        let a = ProductPoint::mixed(point(s, 1.0), vec![e1]);
        let b = ProductPoint::mixed(point(t, 1.0), vec![e2]);
        let d = a.distance(&b).unwrap();
        let dh = point(s, 1.0).distance(&point(t, 1.0)).unwrap();
        let de = (e1 - e2).abs();
        prop_assert!((d * d - (dh * dh + de * de)).abs() <= 1e-9 * (1.0 + d * d));
    }

    #[test]
    fn product_transport_blockwise(s in spatial2(), t in spatial2(), c in tangent_coeffs(), e in -2.0f64..2.0) {
        let x = ProductPoint::mixed(point(s, 1.0), vec![0.0]);
        let y = ProductPoint::mixed(point(t, 1.0), vec![1.0]);
        let u = ProductTangent {
            hyper: Some(tangent(x.hyper.as_ref().unwrap(), c)),
            eucl: vec![e],
        };
        let moved = x.transport(&y, &u).unwrap();
        // Euclidean block unchanged; norms preserved overall.
        prop_assert_eq!(moved.eucl[0], e);
        prop_assert!((u.local_norm() - moved.local_norm()).abs() <= 1e-10 * (1.0 + u.local_norm()));
    }

    #[test]
    fn basis_gram_identity(s in spatial2(), kappa in prop::sample::select(vec![1.0f64, 4.0])) {
        let x = point(s, kappa);
        let basis = x.tangent_basis();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let g = x.local_inner(&basis[i], &basis[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - expect).abs() <= 1e-12);
            }
            let tangency = minkowski_inner(x.coords(), basis[i].coords()).unwrap();
            prop_assert!(tangency.abs() <= 1e-12);
        }
    }
}
