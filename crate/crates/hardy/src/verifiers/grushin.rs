//! Weighted Hardy, magnetic Hardy and uncertainty inequalities on Grushin space.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{identity, integrate_checked, Admissibility, InequalityReport, Inequality, IdentityReport, Term, VerifyOptions};
use crate::error::{HardyError, Result};
use crate::fields::{
    ab_potential_at, grushin_grad_at, grushin_potential_at, magnetic_grad_at, norm_sq, PotentialKind, RhoData,
};
use crate::functions::TestFunction;
use crate::geometry::{pow0, GrushinGeometry, WeightExponents};
use crate::quadrature::{Site, Support};

fn prepare(geom: &GrushinGeometry, exps: WeightExponents, f: &TestFunction) -> Result<Support> {
    f.check_space(geom.m(), geom.k())?;
    let s = f.support()?;
    if s.effective_r_lo() <= 0.0 && exps.alpha2 * geom.gamma() < 0.0 {
        return Err(HardyError::SingularWeight("support meets x = 0".into()));
    }
    Ok(with_y_scale(s, geom.gamma()))
}

/// Sets the `y` stretching scale to the width `r_lo^(1+gamma)/(1+gamma)` of the
/// peak of `rho`-weights around `y = 0`, unless the support already has one.
pub(crate) fn with_y_scale(mut s: Support, gamma: f64) -> Support {
    let r = s.effective_r_lo();
    if s.y_scale.is_none() && !s.y.is_empty() && r > 0.0 {
        s.y_scale = Some(r.powf(1.0 + gamma) / (1.0 + gamma));
    }
    s
}

fn y_norm_sq(v: &[num_complex::Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `(Q + alpha1 - 2) / 2`.
pub fn hardy_half(geom: &GrushinGeometry, exps: WeightExponents) -> f64 {
    (geom.hom_dim() + exps.alpha1 - 2.0) / 2.0
}

fn radial_conditions(geom: &GrushinGeometry, exps: WeightExponents) -> [(&'static str, bool); 2] {
    [
        ("Q+alpha1-2>0", geom.hom_dim() + exps.alpha1 - 2.0 > 0.0),
        ("m+gamma*alpha2>0", geom.m() as f64 + geom.gamma() * exps.alpha2 > 0.0),
    ]
}

fn require(conds: &[(&str, bool)]) -> Result<()> {
    let failed: Vec<&str> = conds.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(HardyError::Admissibility(format!("violated: {}", failed.join(", "))))
    }
}

/// Weighted Hardy inequality for `|d f / d|x||` and the Grushin `y`-gradient:
/// `int B (|f_r|^2 + |x|^(2 gamma) |grad_y f|^2) >= ((Q + alpha1 - 2)/2)^2 int B |grad_gamma rho|^2 / rho^2 |f|^2`.
pub fn verify_radial_hardy(
    geom: &GrushinGeometry,
    exps: WeightExponents,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    let conds = radial_conditions(geom, exps);
    require(&conds)?;
    let support = prepare(geom, exps, f)?;
    let g2 = 2.0 * geom.gamma();
    let ([lhs, main], oracle) = integrate_checked(geom.m(), geom.k(), &support, opts, |s: &Site| {
        let j = f.jet(s);
        let rd = RhoData::at(geom, s);
        let b = geom.weight_b_ry(exps, s.r, rd.rho);
        let w = geom.hardy_weight_ry(s.r, rd.rho);
        [
            b * (j.dr.norm_sqr() + pow0(s.r, g2) * y_norm_sq(&j.dy)),
            b * w * j.v.norm_sqr(),
        ]
    })?;
    let c = hardy_half(geom, exps).powi(2);
    Ok(Inequality::new("radial_hardy", lhs, c, main)
        .admissible(&conds)
        .params(json!({"geometry": geom, "weights": exps, "function": f}))
        .oracle(oracle)
        .finish(opts))
}

/// Integration-by-parts identity behind the weighted Hardy inequality:
/// `int B (|(d_r + alpha d_r rho/rho) f|^2 + |x|^(2 gamma) |(grad_y + alpha grad_y rho/rho) f|^2)
///  = int B (|f_r|^2 + |x|^(2 gamma) |grad_y f|^2) - ((Q + alpha1 - 2) alpha - alpha^2) int B |grad_gamma rho|^2/rho^2 |f|^2`.
pub fn check_grushin_ibp_identity(
    geom: &GrushinGeometry,
    exps: WeightExponents,
    f: &TestFunction,
    alpha: f64,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    let support = prepare(geom, exps, f)?;
    let g2 = 2.0 * geom.gamma();
    let ([l, d, w], oracle) = integrate_checked(geom.m(), geom.k(), &support, opts, |s: &Site| {
        let j = f.jet(s);
        let rd = RhoData::at(geom, s);
        let b = geom.weight_b_ry(exps, s.r, rd.rho);
        let rg = pow0(s.r, g2);
        let shifted_r = j.dr + j.v * (alpha * rd.a);
        let shifted_y: f64 = j
            .dy
            .iter()
            .zip(s.point.y.iter())
            .map(|(dy, y)| (dy + j.v * (alpha * rd.y_fac * y)).norm_sqr())
            .sum();
        [
            b * (shifted_r.norm_sqr() + rg * shifted_y),
            b * (j.dr.norm_sqr() + rg * y_norm_sq(&j.dy)),
            b * geom.hardy_weight_ry(s.r, rd.rho) * j.v.norm_sqr(),
        ]
    })?;
    let coef = 2.0 * hardy_half(geom, exps) * alpha - alpha * alpha;
    Ok(identity(
        "grushin_ibp_identity",
        l,
        vec![Term::new("gradient_energy", d), Term::new("hardy_term", -coef * w)],
        json!({"geometry": geom, "weights": exps, "alpha": alpha, "function": f}),
        opts,
        oracle,
    ))
}

/// Magnetic Hardy inequality for real `f`:
/// `int B |(grad_gamma + i beta A) f|^2 >= (((Q + alpha1 - 2)/2)^2 + beta^2) int B |x|^(2 gamma)/rho^(2 gamma + 2) |f|^2`,
/// together with the split `|(grad_gamma + i beta A) f|^2 = |grad_gamma f|^2 + beta^2 |A|^2 f^2`.
pub fn verify_magnetic_grushin(
    geom: &GrushinGeometry,
    exps: WeightExponents,
    flux: f64,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    let conds = radial_conditions(geom, exps);
    require(&conds)?;
    f.require_real()?;
    let support = prepare(geom, exps, f)?;
    let ([lhs, grad, pot, main], oracle) = integrate_checked(geom.m(), geom.k(), &support, opts, |s: &Site| {
        let j = f.jet(s);
        let rd = RhoData::at(geom, s);
        let b = geom.weight_b_ry(exps, s.r, rd.rho);
        let a2: f64 = grushin_potential_at(s, &rd).iter().map(|v| v * v).sum();
        let f2 = j.v.norm_sqr();
        [
            b * norm_sq(&magnetic_grad_at(geom, PotentialKind::Grushin, flux, s, &j, &rd)),
            b * norm_sq(&grushin_grad_at(geom, s, &j)),
            b * a2 * f2,
            b * geom.hardy_weight_ry(s.r, rd.rho) * f2,
        ]
    })?;
    let params = json!({"geometry": geom, "weights": exps, "flux": flux, "function": f});
    let split = identity(
        "magnetic_split",
        lhs,
        vec![Term::new("gradient_energy", grad), Term::new("potential_energy", flux * flux * pot)],
        params.clone(),
        opts,
        oracle.clone(),
    );
    let c = hardy_half(geom, exps).powi(2) + flux * flux;
    let mut ineq = Inequality::new("magnetic_grushin", lhs, c, main)
        .admissible(&conds)
        .params(params)
        .oracle(oracle);
    ineq.identities.push(split);
    Ok(ineq.finish(opts))
}

/// Conditions of the Aharonov-Bohm Hardy inequality, all reported.
pub fn ab_conditions(geom: &GrushinGeometry, exps: WeightExponents) -> [(&'static str, bool); 3] {
    let g = geom.gamma();
    [
        ("alpha1+k(gamma+1)>0", exps.alpha1 + geom.k() as f64 * (g + 1.0) > 0.0),
        ("alpha2+2gamma>0", exps.alpha2 + 2.0 * g > 0.0),
        ("alpha2*gamma+2>0", exps.alpha2 * g + 2.0 > 0.0),
    ]
}

fn require_ab(geom: &GrushinGeometry, exps: WeightExponents, adm: Admissibility) -> Result<[(&'static str, bool); 3]> {
    if geom.m() != 2 {
        return Err(HardyError::Domain("the Aharonov-Bohm type field needs m = 2".into()));
    }
    let conds = ab_conditions(geom, exps);
    let gate = match adm {
        Admissibility::Main => [conds[0], conds[1]],
        Admissibility::Corollary => [conds[0], conds[2]],
    };
    require(&gate)?;
    Ok(conds)
}

/// Aharonov-Bohm Hardy inequality with Fourier remainder, complex `f`, `m = 2`:
/// `int B |(tilde grad + i beta tilde A) f|^2 >= (((alpha1 + k(gamma+1))/2)^2 + beta^2) int B |x|^(2 gamma)/rho^(2 gamma+2) |f|^2
///  + int B (|f|^2 - |f_0|^2) / |x|^2`.
pub fn verify_ab_hardy(
    geom: &GrushinGeometry,
    exps: WeightExponents,
    flux: f64,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    let conds = require_ab(geom, exps, opts.admissibility)?;
    let support = prepare(geom, exps, f)?;
    let ([lhs, main, rem], oracle) = integrate_checked(2, geom.k(), &support, opts, |s: &Site| {
        let j = f.jet(s);
        let rd = RhoData::at(geom, s);
        let b = geom.weight_b_ry(exps, s.r, rd.rho);
        let f2 = j.v.norm_sqr();
        [
            b * norm_sq(&magnetic_grad_at(geom, PotentialKind::Tilde, flux, s, &j, &rd)),
            b * geom.hardy_weight_ry(s.r, rd.rho) * f2,
            b * (f2 - f.mode0(s).norm_sqr()) / (s.r * s.r),
        ]
    })?;
    let c = hardy_half(geom, exps).powi(2) + flux * flux;
    Ok(Inequality::new("ab_hardy", lhs, c, main)
        .term("fourier_remainder", rem)
        .alt("without_remainder", lhs - c * main)
        .admissible(&conds)
        .params(json!({"geometry": geom, "weights": exps, "flux": flux, "admissibility": opts.admissibility, "function": f}))
        .oracle(oracle)
        .finish(opts))
}

/// Angular energy against the Fourier remainder:
/// `int B |d_phi f|^2 / |x|^2 >= int B (|f|^2 - |f_0|^2) / |x|^2`, with equality when all modes have `|k| <= 1`.
pub fn check_fourier_step(
    geom: &GrushinGeometry,
    exps: WeightExponents,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    if geom.m() != 2 {
        return Err(HardyError::Domain("Fourier modes need m = 2".into()));
    }
    let support = prepare(geom, exps, f)?;
    let ([ang, rem], oracle) = integrate_checked(2, geom.k(), &support, opts, |s: &Site| {
        let j = f.jet(s);
        let rho = geom.rho_ry(s.r, s.point.y_norm_sq());
        let b = geom.weight_b_ry(exps, s.r, rho) / (s.r * s.r);
        [b * j.dphi.norm_sqr(), b * (j.v.norm_sqr() - f.mode0(s).norm_sqr())]
    })?;
    let mut rep = identity(
        "fourier_step",
        ang,
        vec![Term::new("fourier_remainder", rem)],
        json!({"geometry": geom, "weights": exps, "function": f}),
        opts,
        oracle,
    );
    let slack = ang - rem;
    rep.diagnostics.insert("slack".into(), slack);
    rep.diagnostics.insert("max_abs_k".into(), f.max_abs_k() as f64);
    if f.max_abs_k() > 1 {
        // Only an inequality once |k| >= 2 modes are present.
        let oracle_ok = rep.oracle.as_ref().is_none_or(|o| o.passed);
        rep.passed = slack >= -opts.margin_tol * (ang.abs() + rem.abs()) && oracle_ok;
    }
    Ok(rep)
}

/// Which uncertainty principle to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UncertaintyVariant {
    /// Grushin gradient and potential, real `f`, any `m`.
    Lemma,
    /// Tilde gradient and Aharonov-Bohm potential, complex `f`, `m = 2`.
    Ab,
}

/// Uncertainty principle
/// `||B^(1/2) (D + i beta P) f|| ||f|| >= C^(1/2) int rho^(alpha1/2) |grad_gamma rho|^(alpha2/2) |x|^gamma / rho^(gamma+1) |f|^2`.
pub fn verify_uncertainty_grushin(
    variant: UncertaintyVariant,
    geom: &GrushinGeometry,
    exps: WeightExponents,
    flux: f64,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    let (kind, conds, id): (PotentialKind, Vec<(&str, bool)>, &'static str) = match variant {
        UncertaintyVariant::Lemma => {
            let c = radial_conditions(geom, exps);
            require(&c)?;
            f.require_real()?;
            (PotentialKind::Grushin, c.to_vec(), "uncertainty_lemma")
        }
        UncertaintyVariant::Ab => {
            let c = require_ab(geom, exps, opts.admissibility)?;
            (PotentialKind::Tilde, c.to_vec(), "uncertainty_ab")
        }
    };
    let support = prepare(geom, exps, f)?;
    let ([grad, norm, weighted], oracle) = integrate_checked(geom.m(), geom.k(), &support, opts, |s: &Site| {
        let j = f.jet(s);
        let rd = RhoData::at(geom, s);
        let b = geom.weight_b_ry(exps, s.r, rd.rho);
        let f2 = j.v.norm_sqr();
        [
            b * norm_sq(&magnetic_grad_at(geom, kind, flux, s, &j, &rd)),
            f2,
            (b * geom.hardy_weight_ry(s.r, rd.rho)).sqrt() * f2,
        ]
    })?;
    let c = hardy_half(geom, exps).powi(2) + flux * flux;
    Ok(Inequality::new(id, (grad * norm).sqrt(), c.sqrt(), weighted)
        .admissible(&conds)
        .params(json!({"variant": variant, "geometry": geom, "weights": exps, "flux": flux, "function": f}))
        .oracle(oracle)
        .finish(opts))
}

/// `|A|^2` of the Aharonov-Bohm potential, equal to `|grad_gamma rho|^2 / rho^2`.
pub fn ab_potential_norm_sq(geom: &GrushinGeometry, s: &Site) -> f64 {
    let rd = RhoData::at(geom, s);
    ab_potential_at(s, &rd).iter().map(|v| v * v).sum()
}
