use hardy_verify::geometry::{sphere_measure, GrushinGeometry, Point, WeightExponents};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `rho` written out directly from its definition.
fn rho_direct(gamma: f64, x: &[f64], y: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let y2: f64 = y.iter().map(|v| v * v).sum();
    (r2.powf(1.0 + gamma) + (1.0 + gamma).powi(2) * y2).powf(0.5 / (1.0 + gamma))
}

fn setup() -> impl Strategy<Value = (usize, usize, f64, Vec<f64>, Vec<f64>)> {
    (1usize..=3, 1usize..=2, 0.0f64..3.0).prop_flat_map(|(m, k, g)| {
        (
            Just(m),
            Just(k),
            Just(g),
            prop::collection::vec(-3.0f64..3.0, m),
            prop::collection::vec(-3.0f64..3.0, k),
        )
    })
}

proptest! {
    #[test]
    fn rho_matches_its_definition((m, k, g, x, y) in setup()) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
        let geom = GrushinGeometry::new(m, k, g).unwrap();
        let rho = geom.rho(&Point::new(&x, &y)).unwrap();
        prop_assert!(rel(rho, rho_direct(g, &x, &y)) < 1e-13);
    }

    #[test]
    fn rho_is_homogeneous((m, k, g, x, y) in setup(), lambda in 0.05f64..20.0) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
        let geom = GrushinGeometry::new(m, k, g).unwrap();
        let p = Point::new(&x, &y);
        let q = geom.dilate(lambda, &p).unwrap();
        prop_assert!(rel(geom.rho(&q).unwrap(), lambda * geom.rho(&p).unwrap()) < 1e-12);
    }

    #[test]
    fn grad_norm_formula((m, k, g, x, y) in setup()) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
        let geom = GrushinGeometry::new(m, k, g).unwrap();
        let p = Point::new(&x, &y);
        let grad = geom.grad_rho(&p).unwrap();
        let norm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rho = geom.rho(&p).unwrap();
        prop_assert!(rel(norm, (p.x_norm() / rho).powf(g)) < 1e-12);
        prop_assert!(rel(geom.grad_norm(&p).unwrap(), norm) < 1e-12);
    }

    #[test]
    fn euclidean_gradient_matches_finite_differences((m, k, g, x, y) in setup()) {
        prop_assume!(x.iter().all(|v| v.abs() > 0.05));
        let geom = GrushinGeometry::new(m, k, g).unwrap();
        let grad = geom.euclid_grad_rho(&Point::new(&x, &y)).unwrap();
        let h = 1e-5;
        for i in 0..m + k {
            let mut z: Vec<f64> = x.iter().chain(y.iter()).copied().collect();
            z[i] += h;
            let up = rho_direct(g, &z[..m], &z[m..]);
            z[i] -= 2.0 * h;
            let down = rho_direct(g, &z[..m], &z[m..]);
            let fd = (up - down) / (2.0 * h);
            prop_assert!((fd - grad[i]).abs() < 1e-6 * (1.0 + grad[i].abs()), "component {}: {} vs {}", i, fd, grad[i]);
        }
    }

    #[test]
    fn weight_b_scales_with_alpha1((m, k, g, x, y) in setup(), a1 in -2.0f64..2.0, a2 in -1.0f64..1.0, lambda in 0.1f64..10.0) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-2));
        let geom = GrushinGeometry::new(m, k, g).unwrap();
        let exps = WeightExponents::new(a1, a2);
        let p = Point::new(&x, &y);
        let q = geom.dilate(lambda, &p).unwrap();
        let ratio = geom.weight_b(exps, &q).unwrap() / geom.weight_b(exps, &p).unwrap();
        prop_assert!(rel(ratio, lambda.powf(a1)) < 1e-11);
    }
}

#[test]
fn homogeneous_dimension() {
    assert_eq!(GrushinGeometry::new(2, 1, 1.0).unwrap().hom_dim(), 4.0);
    assert_eq!(GrushinGeometry::new(3, 2, 0.5).unwrap().hom_dim(), 6.0);
}

#[test]
fn sphere_measures() {
    let pi = std::f64::consts::PI;
    assert!(rel(sphere_measure(1.0), 2.0) < 1e-15);
    assert!(rel(sphere_measure(2.0), 2.0 * pi) < 1e-15);
    assert!(rel(sphere_measure(3.0), 4.0 * pi) < 1e-15);
    assert!(rel(sphere_measure(4.0), 2.0 * pi * pi) < 1e-14);
}

#[test]
fn origin_and_bad_inputs_are_rejected() {
    let geom = GrushinGeometry::new(2, 1, 1.0).unwrap();
    assert!(geom.rho(&Point::new(&[0.0, 0.0], &[0.0])).is_err());
    assert!(geom.rho(&Point::new(&[1.0], &[0.0])).is_err());
    assert!(geom.dilate(-1.0, &Point::new(&[1.0, 0.0], &[0.0])).is_err());
    assert!(GrushinGeometry::new(0, 1, 1.0).is_err());
    assert!(GrushinGeometry::new(2, 1, -0.5).is_err());
}
