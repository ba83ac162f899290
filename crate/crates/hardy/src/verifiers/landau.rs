//! Inequalities for the generalized twisted gradient on the plane and for the
//! Landau gradient on `C^n`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::radial_p::SuperweightParams;
use super::{identity, integrate_checked, IdentityReport, InequalityReport, Inequality, Term, VerifyOptions};
use crate::error::{HardyError, Result};
use crate::fields::{landau_grad_at, norm_sq, twisted_grad_at, Scalar1D};
use crate::functions::{grad_x, TestFunction};
use crate::quadrature::{Site, Support};

/// Radial weight `kappa(|z|)`; integrands carry `1 / kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum Kappa {
    /// `kappa = 1`.
    Unit,
    /// `kappa = |z|^exponent`.
    Power { exponent: f64 },
    /// `kappa = |log|z||^(-2)`.
    Log,
    /// `kappa = |z|^(2 theta4) / (a + b|z|^theta2)^theta3`.
    Superweight(SuperweightParams),
}

impl Kappa {
    /// `1 / kappa(r)` with `t = log r`.
    pub fn inverse(&self, r: f64, t: f64) -> f64 {
        match *self {
            Kappa::Unit => 1.0,
            Kappa::Power { exponent } => (-exponent * t).exp(),
            Kappa::Log => t * t,
            Kappa::Superweight(s) => s.base(r) * (-2.0 * s.theta4 * t).exp(),
        }
    }
}

fn plane_support(f: &TestFunction) -> Result<Support> {
    f.check_space(2, 0)?;
    f.support()
}

/// Polar form of the twisted Dirichlet energy:
/// `int |tilde grad f|^2 / kappa = int (|f_r|^2 + |f_phi|^2 / r^2 + psi^2 r^2 |f|^2) / kappa`.
///
/// The pointwise expansion also contains `2 psi Im(f_phi conj f)`, whose integral
/// vanishes for real `f` but equals `2 psi k |f_k|^2` per mode in general. It is
/// reported as the `cross_term` diagnostic together with the error of the
/// four-term form.
pub fn check_twisted_polar_identity(
    psi: &Scalar1D,
    kappa: Kappa,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    let support = plane_support(f)?;
    let ([lhs, radial, angular, potential, cross], oracle) = integrate_checked(2, 0, &support, opts, |s: &Site| {
        let j = f.jet(s);
        let w = kappa.inverse(s.r, s.t);
        let ps = psi.eval(s.r);
        let f2 = j.v.norm_sqr();
        [
            w * norm_sq(&twisted_grad_at(psi, s, &j)),
            w * j.dr.norm_sqr(),
            w * j.dphi.norm_sqr() / (s.r * s.r),
            w * ps * ps * s.r * s.r * f2,
            w * 2.0 * ps * (j.dphi * j.v.conj()).im,
        ]
    })?;
    let mut rep = identity(
        "twisted_polar_identity",
        lhs,
        vec![
            Term::new("radial", radial),
            Term::new("angular", angular),
            Term::new("potential", potential),
        ],
        json!({"psi": psi, "kappa": kappa, "function": f}),
        opts,
        oracle,
    );
    let scale = lhs.abs() + radial.abs() + angular.abs() + potential.abs() + cross.abs();
    let full = (lhs - radial - angular - potential - cross).abs();
    rep.diagnostics.insert("cross_term".into(), cross);
    rep.diagnostics
        .insert("rel_err_with_cross_term".into(), if scale == 0.0 { 0.0 } else { full / scale });
    Ok(rep)
}

/// Which twisted-gradient inequality to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant", deny_unknown_fields)]
pub enum LandauVariant {
    /// Weight `|z|^(-2 theta1)`, constant `theta1^2` against `|f|^2 / |z|^(2 theta1 + 2)`.
    HardySobolev { theta1: f64 },
    /// Weight `|log|z||^2`, constant `1/4` against `|f|^2 / |z|^2`.
    Log,
    /// Functions supported in the disc of radius `R`, constant `1/R^2` against `|f|^2`.
    Poincare { radius: f64 },
    /// Weight `(a + b|z|^theta2)^theta3 / |z|^(2 theta4)`, constant `((theta2 theta3 - 2 theta4)/2)^2`.
    Superweight(SuperweightParams),
}

impl LandauVariant {
    pub fn theorem_id(&self) -> &'static str {
        match self {
            LandauVariant::HardySobolev { .. } => "landau_hardy_sobolev",
            LandauVariant::Log => "landau_log",
            LandauVariant::Poincare { .. } => "landau_poincare",
            LandauVariant::Superweight(_) => "landau_superweight",
        }
    }

    pub fn kappa(&self) -> Kappa {
        match *self {
            LandauVariant::HardySobolev { theta1 } => Kappa::Power { exponent: 2.0 * theta1 },
            LandauVariant::Log => Kappa::Log,
            LandauVariant::Poincare { .. } => Kappa::Unit,
            LandauVariant::Superweight(s) => Kappa::Superweight(s),
        }
    }

    pub fn sharp_constant(&self) -> f64 {
        match *self {
            LandauVariant::HardySobolev { theta1 } => theta1 * theta1,
            LandauVariant::Log => 0.25,
            LandauVariant::Poincare { radius } => 1.0 / (radius * radius),
            LandauVariant::Superweight(s) => s.constant(2.0, 2.0).powi(2),
        }
    }

    fn conditions(&self) -> Vec<(&'static str, bool)> {
        match *self {
            LandauVariant::HardySobolev { theta1 } => vec![("theta1!=0", theta1 != 0.0)],
            LandauVariant::Log => vec![],
            LandauVariant::Poincare { radius } => vec![("R>0", radius > 0.0)],
            LandauVariant::Superweight(s) => s.conditions(2.0, 2.0).to_vec(),
        }
    }
}

/// Twisted-gradient inequality with `psi` and Fourier remainders:
/// `int |tilde grad f|^2 / kappa >= C main + int psi^2 |z|^2 |f|^2 / kappa + int (|f|^2 - |f_0|^2) / (|z|^2 kappa)`.
///
/// The left side is integrated directly from the gradient components.
pub fn verify_landau(
    variant: LandauVariant,
    psi: &Scalar1D,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    let conds = variant.conditions();
    if let Some((name, _)) = conds.iter().find(|(_, ok)| !ok) {
        return Err(HardyError::Admissibility(format!("violated: {name}")));
    }
    let support = plane_support(f)?;
    if let LandauVariant::Poincare { radius } = variant {
        if support.r_hi > radius {
            return Err(HardyError::Admissibility(format!(
                "support reaches |z| = {} outside the disc of radius {radius}",
                support.r_hi
            )));
        }
    }
    let kappa = variant.kappa();
    let ([lhs, main, pot, rem, plain, cross], oracle) = integrate_checked(2, 0, &support, opts, |s: &Site| {
        let j = f.jet(s);
        let w = kappa.inverse(s.r, s.t);
        let ps = psi.eval(s.r);
        let f2 = j.v.norm_sqr();
        let r2 = s.r * s.r;
        let main = match variant {
            LandauVariant::Poincare { .. } => f2,
            LandauVariant::Log => f2 / r2,
            _ => w * f2 / r2,
        };
        [
            w * norm_sq(&twisted_grad_at(psi, s, &j)),
            main,
            w * ps * ps * r2 * f2,
            w * (f2 - f.mode0(s).norm_sqr()) / r2,
            f2,
            w * 2.0 * ps * (j.dphi * j.v.conj()).im,
        ]
    })?;
    let c = variant.sharp_constant();
    let mut ineq = Inequality::new(variant.theorem_id(), lhs, c, main)
        .term("psi_term", pot)
        .term("fourier_remainder", rem)
        .alt("cross_term_dropped", lhs - cross - c * main - pot - rem)
        .admissible(&conds);
    match variant {
        LandauVariant::Log => ineq = ineq.alt("as_printed", lhs - 0.25 * plain - pot - rem),
        LandauVariant::Superweight(s) => ineq = ineq.alt("as_printed", lhs - s.constant(2.0, 2.0) * main - pot - rem),
        _ => {}
    }
    Ok(ineq
        .params(json!({"variant": variant, "psi": psi, "function": f}))
        .oracle(oracle)
        .finish(opts))
}

/// Which real Landau statement on `C^n` to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant", deny_unknown_fields)]
pub enum RealLandauVariant {
    /// `int |grad_L f|^2 = int |grad f|^2 + int |z|^2/4 |f|^2`.
    Identity,
    /// `int |grad_L f|^2 >= (n-1)^2 int |f|^2/|z|^2 + int |z|^2/4 |f|^2`.
    Hardy,
    /// `n = 1`, `f` supported in the disc of radius `omega_radius`, `R >= e * omega_radius`:
    /// `int |grad_L f|^2 >= 1/4 int |f|^2 / (|z|^2 log^2(R/|z|)) + int |z|^2/4 |f|^2`.
    Critical { omega_radius: f64, big_r: f64 },
    /// `||grad_L f|| ||f|| >= int sqrt((n-1)^2/|z|^2 + |z|^2/4) |f|^2`.
    Uncertainty,
    /// `n = 1`: `||grad_L f|| ||f|| >= int sqrt(1/(4 |z|^2 log^2(R/|z|)) + |z|^2/4) |f|^2`.
    UncertaintyCritical { omega_radius: f64, big_r: f64 },
}

impl RealLandauVariant {
    pub fn theorem_id(&self) -> &'static str {
        match self {
            RealLandauVariant::Identity => "real_landau_identity",
            RealLandauVariant::Hardy => "real_landau_hardy",
            RealLandauVariant::Critical { .. } => "real_landau_critical",
            RealLandauVariant::Uncertainty => "real_landau_uncertainty",
            RealLandauVariant::UncertaintyCritical { .. } => "real_landau_uncertainty_critical",
        }
    }
}

/// Outcome of a real Landau check: the identity or an inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealLandauReport {
    Identity(IdentityReport),
    Inequality(InequalityReport),
}

/// Real Landau statements on `C^n = R^(2n)`, coordinates `(x_1..x_n, y_1..y_n)`.
/// For `n >= 2` only radial `f` are supported.
pub fn verify_real_landau(
    variant: RealLandauVariant,
    n: usize,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<RealLandauReport> {
    if n == 0 {
        return Err(HardyError::Domain("n must be positive".into()));
    }
    f.require_real()?;
    let m = 2 * n;
    f.check_space(m, 0)?;
    let support = f.support()?;
    let critical = match variant {
        RealLandauVariant::Critical { omega_radius, big_r }
        | RealLandauVariant::UncertaintyCritical { omega_radius, big_r } => {
            let conds = [
                ("n=1", n == 1),
                ("R>=e*sup|z|", big_r >= std::f64::consts::E * omega_radius),
                ("supp f in Omega", support.r_hi <= omega_radius),
            ];
            if let Some((name, _)) = conds.iter().find(|(_, ok)| !ok) {
                return Err(HardyError::Admissibility(format!("violated: {name}")));
            }
            Some((big_r, conds))
        }
        _ => None,
    };
    let hardy_c = match critical {
        Some(_) => 0.25,
        None => ((n - 1) * (n - 1)) as f64,
    };
    let ([grad_l, grad, pot, norm, main], oracle) = integrate_checked(m, 0, &support, opts, |s: &Site| {
        let j = f.jet(s);
        let f2 = j.v.norm_sqr();
        let r2 = s.r * s.r;
        let hardy_w = match critical {
            Some((big_r, _)) => 1.0 / (r2 * (big_r / s.r).ln().powi(2)),
            None => 1.0 / r2,
        };
        let main = match variant {
            RealLandauVariant::Identity => 0.0,
            RealLandauVariant::Uncertainty | RealLandauVariant::UncertaintyCritical { .. } => {
                (hardy_c * hardy_w + 0.25 * r2).sqrt() * f2
            }
            _ => hardy_w * f2,
        };
        [
            norm_sq(&landau_grad_at(s, &j)),
            norm_sq(&grad_x(s, &j)),
            0.25 * r2 * f2,
            f2,
            main,
        ]
    })?;
    let params = json!({"variant": variant, "n": n, "function": f});
    let conds: Vec<(&str, bool)> = critical.map(|(_, c)| c.to_vec()).unwrap_or_default();
    let id = variant.theorem_id();
    Ok(match variant {
        RealLandauVariant::Identity => RealLandauReport::Identity(identity(
            id,
            grad_l,
            vec![Term::new("gradient_energy", grad), Term::new("potential_energy", pot)],
            params,
            opts,
            oracle,
        )),
        RealLandauVariant::Hardy | RealLandauVariant::Critical { .. } => {
            RealLandauReport::Inequality(
                Inequality::new(id, grad_l, hardy_c, main)
                    .term("potential_energy", pot)
                    .admissible(&conds)
                    .params(params)
                    .oracle(oracle)
                    .finish(opts),
            )
        }
        RealLandauVariant::Uncertainty | RealLandauVariant::UncertaintyCritical { .. } => RealLandauReport::Inequality(
            Inequality::new(id, (grad_l * norm).sqrt(), 1.0, main)
                .admissible(&conds)
                .params(params)
                .oracle(oracle)
                .finish(opts),
        ),
    })
}
