use std::f64::consts::PI;

use hardy_verify::functions::{
    bump, make_bump, make_trial, random_function, smooth_step, FnJet, LogSide, RandomFunctionOptions, TestFunction,
    TrialBase, TrialFamily, C64,
};
use hardy_verify::quadrature::Site;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random(seed: u64, y_dims: usize, real: bool) -> TestFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_function(
        &mut rng,
        &RandomFunctionOptions {
            y_dims,
            real,
            ..Default::default()
        },
    )
}

fn at(f: &TestFunction, r: f64, phi: f64, y: &[f64]) -> C64 {
    f.evaluate(&Site::polar(2, r, r.ln(), phi, y))
}

/// Fourth-order central difference.
fn d4(g: impl Fn(f64) -> C64, x: f64, h: f64) -> C64 {
    (g(x - 2.0 * h) - g(x + 2.0 * h) + (g(x + h) - g(x - h)) * 8.0) / (12.0 * h)
}

/// Size of the jet over a grid covering the support.
fn jet_scale(f: &TestFunction) -> f64 {
    let s = f.support().unwrap();
    let mut scale: f64 = 0.0;
    for i in 1..16 {
        let r = s.r_lo * (s.r_hi / s.r_lo).powf(i as f64 / 16.0);
        for j in 1..8 {
            let y: Vec<f64> = s.y.iter().map(|(a, b)| a + (b - a) * j as f64 / 8.0).collect();
            let jet = f.jet(&Site::polar(2, r, r.ln(), 0.3, &y));
            let parts = [jet.v.norm() / r, jet.dr.norm(), jet.dphi.norm() / r];
            scale = parts.into_iter().chain(jet.dy.iter().map(|d| d.norm())).fold(scale, f64::max);
        }
    }
    scale
}

/// Largest finite-difference error of the jet at one point, relative to the size of the jet.
fn jet_fd_error(f: &TestFunction, r: f64, phi: f64, y: &[f64]) -> f64 {
    let jet: FnJet = f.jet(&Site::polar(2, r, r.ln(), phi, y));
    let h = 1e-4 * r;
    let mut pairs = vec![
        (jet.dr, d4(|s| at(f, s, phi, y), r, h)),
        (jet.dphi, d4(|s| at(f, r, s, y), phi, 1e-4)),
    ];
    for j in 0..y.len() {
        let g = |s: f64| {
            let mut z = y.to_vec();
            z[j] = s;
            at(f, r, phi, &z)
        };
        pairs.push((jet.dy[j], d4(g, y[j], 1e-4)));
    }
    let scale = pairs.iter().map(|(a, _)| a.norm()).fold(jet_scale(f), f64::max);
    pairs.iter().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
}

fn sample_point(f: &TestFunction, u: f64, yu: &[f64]) -> (f64, Vec<f64>) {
    let s = f.support().unwrap();
    let r = s.r_lo * (s.r_hi / s.r_lo).powf(u);
    let y = s.y.iter().zip(yu).map(|((a, b), v)| a + (b - a) * v).collect();
    (r, y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_jets_match_finite_differences(seed in any::<u64>(), u in 0.02f64..0.98, phi in 0.0f64..std::f64::consts::TAU, yu in prop::collection::vec(0.05f64..0.95, 2)) {
        let f = random(seed, 2, false);
        let (r, y) = sample_point(&f, u, &yu);
        prop_assert!(jet_fd_error(&f, r, phi, &y) < 1e-6);
    }

    #[test]
    fn dilated_jets_match_finite_differences(seed in any::<u64>(), lambda in 0.3f64..3.0, gamma in 0.0f64..2.0, u in 0.02f64..0.98, yu in 0.05f64..0.95) {
        let f = random(seed, 1, true).dilated(lambda, gamma).unwrap();
        let (r, y) = sample_point(&f, u, &[yu]);
        prop_assert!(jet_fd_error(&f, r, 0.7, &y) < 1e-6);
    }

    #[test]
    fn dilation_is_composition(seed in any::<u64>(), lambda in 0.3f64..3.0, gamma in 0.0f64..2.0, u in 0.02f64..0.98, yu in 0.05f64..0.95) {
        let f = random(seed, 1, false);
        let g = f.dilated(lambda, gamma).unwrap();
        let (r, y) = sample_point(&g, u, &[yu]);
        let direct = at(&f, lambda * r, 0.4, &[lambda.powf(1.0 + gamma) * y[0]]);
        prop_assert!((at(&g, r, 0.4, &y) - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
    }

    /// Trapezoid sums over the circle are exact for trigonometric polynomials of low enough degree.
    #[test]
    fn parseval_on_circles(seed in any::<u64>(), u in 0.02f64..0.98, yu in 0.05f64..0.95) {
        let f = random(seed, 1, false);
        let (r, y) = sample_point(&f, u, &[yu]);
        let n = 4 * (f.max_abs_k() as usize + 1);
        let circle: f64 = (0..n).map(|i| at(&f, r, 2.0 * PI * i as f64 / n as f64, &y).norm_sqr()).sum::<f64>() * 2.0 * PI / n as f64;
        let mut ks: Vec<i32> = f.modes().iter().map(|m| m.k).collect();
        ks.sort();
        ks.dedup();
        let coeffs: f64 = ks
            .iter()
            .map(|&k| {
                let modes = f.modes().iter().filter(|m| m.k == k).cloned().collect();
                at(&TestFunction::new(modes, 1).unwrap(), r, 0.0, &y).norm_sqr()
            })
            .sum::<f64>()
            * 2.0
            * PI;
        prop_assert!((circle - coeffs).abs() <= 1e-12 * (1.0 + coeffs));
    }

    #[test]
    fn angular_average_is_a_contractive_projection(seed in any::<u64>(), u in 0.02f64..0.98, yu in 0.05f64..0.95) {
        let f = random(seed, 1, false);
        let f0 = f.angular_average();
        let (r, y) = sample_point(&f, u, &[yu]);
        let n = 4 * (f.max_abs_k() as usize + 1);
        let phis: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let mean: C64 = phis.iter().map(|&p| at(&f, r, p, &y)).sum::<C64>() / n as f64;
        let avg = at(&f0, r, 1.1, &y);
        prop_assert!((mean - avg).norm() <= 1e-12 * (1.0 + mean.norm()));
        prop_assert_eq!(at(&f0.angular_average(), r, 0.3, &y), avg);
        prop_assert_eq!(f.mode0(&Site::polar(2, r, r.ln(), 2.0, &y)), avg);
        let energy = |g: &TestFunction| phis.iter().map(|&p| at(g, r, p, &y).norm_sqr()).sum::<f64>();
        prop_assert!(energy(&f0) <= energy(&f) * (1.0 + 1e-12));
    }

    /// `int |d_phi f|^2 dphi >= int |f - f_0|^2 dphi` on every circle, with equality for `|k| <= 1`.
    #[test]
    fn angular_energy_controls_the_nonradial_part(seed in any::<u64>(), u in 0.02f64..0.98, yu in 0.05f64..0.95, max_k in 1i32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_function(&mut rng, &RandomFunctionOptions { y_dims: 1, max_k, ..Default::default() });
        let (r, y) = sample_point(&f, u, &[yu]);
        let n = 4 * (f.max_abs_k() as usize + 1);
        let (mut ang, mut rem) = (0.0, 0.0);
        for i in 0..n {
            let s = Site::polar(2, r, r.ln(), 2.0 * PI * i as f64 / n as f64, &y);
            let j = f.jet(&s);
            ang += j.dphi.norm_sqr();
            rem += (j.v - f.mode0(&s)).norm_sqr();
        }
        prop_assert!(ang >= rem - 1e-12 * (1.0 + ang));
        if f.max_abs_k() <= 1 {
            prop_assert!((ang - rem).abs() <= 1e-12 * (1.0 + ang));
        }
    }

    #[test]
    fn real_random_functions_are_real(seed in any::<u64>(), u in 0.02f64..0.98, phi in 0.0f64..std::f64::consts::TAU, yu in 0.05f64..0.95) {
        let f = random(seed, 1, true);
        prop_assert!(f.is_real());
        let (r, y) = sample_point(&f, u, &[yu]);
        let v = at(&f, r, phi, &y);
        prop_assert!(v.im.abs() <= 1e-14 * (1.0 + v.re.abs()));
    }

    #[test]
    fn step_and_bump_derivatives(s in -0.2f64..1.2) {
        let h = 1e-5;
        let (_, ds) = smooth_step(s);
        let fd = (smooth_step(s + h).0 - smooth_step(s - h).0) / (2.0 * h);
        prop_assert!((ds - fd).abs() < 1e-6);
        let t = 2.0 * s - 1.0;
        let (_, db) = bump(t);
        let fd = (bump(t + h).0 - bump(t - h).0) / (2.0 * h);
        prop_assert!((db - fd).abs() < 1e-6);
    }
}

#[test]
fn bump_values() {
    assert_eq!(bump(0.0), (1.0, 0.0));
    assert_eq!(bump(1.0).0, 0.0);
    assert_eq!(bump(-1.5).0, 0.0);
    assert!((bump(0.5).0 - (-1.0f64 / 3.0).exp()).abs() < 1e-15);
    assert_eq!(smooth_step(0.0).0, 0.0);
    assert_eq!(smooth_step(1.0).0, 1.0);
    assert!((smooth_step(0.5).0 - 0.5).abs() < 1e-15);
    for s in [0.1, 0.3, 0.7] {
        assert!((smooth_step(s).0 + smooth_step(1.0 - s).0 - 1.0).abs() < 1e-15);
    }
}

#[test]
fn unit_bump_is_flat_in_the_middle() {
    let f = make_bump(1.0, 4.0, 1.0, 0).unwrap();
    assert_eq!(at(&f, 2.0, 0.0, &[]), C64::new(1.0, 0.0));
    assert_eq!(at(&f, 0.9, 0.0, &[]), C64::new(0.0, 0.0));
    assert_eq!(at(&f, 4.1, 0.0, &[]), C64::new(0.0, 0.0));
    let s = f.support().unwrap();
    assert_eq!((s.r_lo, s.r_hi), (1.0, 4.0));
}

#[test]
fn trial_jets_match_finite_differences() {
    let families = [
        (TrialBase::InversePower { c: 1.0 }, 0.0, 0),
        (TrialBase::Power { c: -0.5 }, 0.3, 0),
        (TrialBase::LogPower { c: -0.5, side: LogSide::Inner }, 0.0, 0),
        (TrialBase::LogPower { c: -0.5, side: LogSide::Outer }, 0.5, 0),
        (TrialBase::RhoPower { c: -1.0, gamma: 1.0 }, 0.0, 1),
    ];
    for (base, center, ky) in families {
        let fam = TrialFamily {
            base,
            center,
            width: 0.3,
            max_half_width: 4.0,
            floor: 1e-12,
        };
        let f = make_trial(&fam, 0.2, ky).unwrap();
        let s = f.support().unwrap();
        for i in 1..20 {
            let u = i as f64 / 20.0;
            let r = s.r_lo * (s.r_hi / s.r_lo).powf(u);
            let y: Vec<f64> = (0..ky).map(|_| 0.3 * r).collect();
            let e = jet_fd_error(&f, r, 0.0, &y);
            assert!(e < 1e-6, "{base:?} at r = {r}: {e}");
        }
    }
}

