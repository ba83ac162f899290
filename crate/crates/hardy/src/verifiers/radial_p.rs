//! `L^p` Hardy-type inequalities for radial functions on `R^Q` with the Euclidean norm.
//!
//! Every inequality is stated in `p`-th power form, `lhs >= C^p * main`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{integrate_radial_checked, InequalityReport, Inequality, VerifyOptions};
use crate::error::{HardyError, Result};
use crate::functions::TestFunction;
use crate::quadrature::Site;

/// Weight `(a + b |x|^theta2)^theta3 / |x|^(p theta4)` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperweightParams {
    pub a: f64,
    pub b: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
}

impl SuperweightParams {
    /// `(a + b r^theta2)^theta3`.
    pub fn base(&self, r: f64) -> f64 {
        (self.a + self.b * r.powf(self.theta2)).powf(self.theta3)
    }

    /// `(Q - p theta4 + theta2 theta3 - p) / p`.
    pub fn constant(&self, hom_dim: f64, p: f64) -> f64 {
        (hom_dim - p * self.theta4 + self.theta2 * self.theta3 - p) / p
    }

    /// Conditions `a, b > 0`, `theta2 theta3 < 0`, `p theta4 - theta2 theta3 <= Q - p`.
    pub fn conditions(&self, hom_dim: f64, p: f64) -> [(&'static str, bool); 3] {
        [
            ("a>0,b>0", self.a > 0.0 && self.b > 0.0),
            ("theta2*theta3<0", self.theta2 * self.theta3 < 0.0),
            (
                "p*theta4-theta2*theta3<=Q-p",
                p * self.theta4 - self.theta2 * self.theta3 <= hom_dim - p,
            ),
        ]
    }
}

/// Which radial inequality to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant", deny_unknown_fields)]
pub enum RadialPVariant {
    /// `int |E f|^p / |x|^(theta p) >= |(Q - theta p)/p|^p int |f|^p / |x|^(theta p)`.
    Weighted { theta: f64 },
    /// `int |E f|^p |log|x||^p / |x|^Q >= p^(-p) int |f|^p / |x|^Q`.
    Log,
    /// `int |f'|^p >= (Q / (R p))^p int |f|^p` for `f` supported in the ball of radius `R`.
    Poincare { radius: f64 },
    /// `int w |f'|^p / |x|^(p theta4) >= C^p int w |f|^p / |x|^(p theta4 + p)`,
    /// `w = (a + b|x|^theta2)^theta3`, `C = (Q - p theta4 + theta2 theta3 - p)/p`.
    Superweight(SuperweightParams),
}

impl RadialPVariant {
    pub fn theorem_id(&self) -> &'static str {
        match self {
            RadialPVariant::Weighted { .. } => "radial_p_weighted",
            RadialPVariant::Log => "radial_p_log",
            RadialPVariant::Poincare { .. } => "radial_p_poincare",
            RadialPVariant::Superweight(_) => "radial_p_superweight",
        }
    }

    /// Sharp constant in `p`-th power form.
    pub fn sharp_constant(&self, hom_dim: f64, p: f64) -> f64 {
        match *self {
            RadialPVariant::Weighted { theta } => ((hom_dim - theta * p) / p).abs().powf(p),
            RadialPVariant::Log => p.powf(-p),
            RadialPVariant::Poincare { radius } => (hom_dim / (radius * p)).powf(p),
            RadialPVariant::Superweight(s) => s.constant(hom_dim, p).powf(p),
        }
    }

    fn conditions(&self, hom_dim: f64, p: f64) -> Vec<(&'static str, bool)> {
        let mut c = vec![("p>1", p > 1.0)];
        match self {
            RadialPVariant::Weighted { theta } => c.push(("theta*p!=Q", theta * p != hom_dim)),
            RadialPVariant::Log => {}
            RadialPVariant::Poincare { radius } => c.push(("R>0", *radius > 0.0)),
            RadialPVariant::Superweight(s) => c.extend(s.conditions(hom_dim, p)),
        }
        c
    }
}

/// Checks a radial `L^p` inequality for a radial `f` on `R^Q`.
pub fn verify_radial_p(
    variant: RadialPVariant,
    hom_dim: f64,
    p: f64,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    if !(hom_dim > 0.0) {
        return Err(HardyError::Domain(format!("homogeneous dimension must be positive, got {hom_dim}")));
    }
    let conds = variant.conditions(hom_dim, p);
    if let Some((name, _)) = conds.iter().find(|(_, ok)| !ok) {
        return Err(HardyError::Admissibility(format!("violated: {name}")));
    }
    if !f.is_radial() || f.y_dims() != 0 {
        return Err(HardyError::Domain("radial L^p inequalities need a radial function without y".into()));
    }
    let support = f.support()?;
    if let RadialPVariant::Poincare { radius } = variant {
        if support.r_hi > radius {
            return Err(HardyError::Admissibility(format!(
                "support reaches r = {} outside the ball of radius {radius}",
                support.r_hi
            )));
        }
    }
    let ([lhs, main], oracle) = integrate_radial_checked(&support, hom_dim, opts, |r, t| {
        let j = f.jet(&Site::polar(1, r, t, 0.0, &[]));
        let fp = j.v.norm().powf(p);
        let dp = j.dr.norm().powf(p);
        match variant {
            RadialPVariant::Weighted { theta } => {
                let w = (-theta * p * t).exp();
                [w * r.powf(p) * dp, w * fp]
            }
            RadialPVariant::Log => {
                let w = (-hom_dim * t).exp();
                [w * (r * t.abs()).powf(p) * dp, w * fp]
            }
            RadialPVariant::Poincare { .. } => [dp, fp],
            RadialPVariant::Superweight(s) => {
                let w = s.base(r) * (-p * s.theta4 * t).exp();
                [w * dp, w * fp / r.powf(p)]
            }
        }
    })?;
    Ok(Inequality::new(variant.theorem_id(), lhs, variant.sharp_constant(hom_dim, p), main)
        .admissible(&conds)
        .params(json!({"variant": variant, "hom_dim": hom_dim, "p": p, "function": f}))
        .oracle(oracle)
        .finish(opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::make_bump;
    use crate::quadrature::QuadratureSpec;

    fn opts() -> VerifyOptions {
        VerifyOptions::with_quadrature(QuadratureSpec::new(256, 1, 1))
    }

    #[test]
    fn weighted_bump_margin() {
        let f = make_bump(1.0, 2.0, 1.0, 0).unwrap();
        let r = verify_radial_p(RadialPVariant::Weighted { theta: 1.0 }, 4.0, 3.0, &f, &opts()).unwrap();
        assert!(r.passed && r.margin > 0.0);
        assert!((r.sharp_constant - (1.0f64 / 3.0).powi(3)).abs() < 1e-15);
    }

    #[test]
    fn sharp_constants() {
        assert_eq!(RadialPVariant::Log.sharp_constant(4.0, 2.0), 0.25);
        assert_eq!(RadialPVariant::Poincare { radius: 2.0 }.sharp_constant(4.0, 2.0), 1.0);
        let s = SuperweightParams {
            a: 1.0,
            b: 1.0,
            theta2: 2.0,
            theta3: -1.0,
            theta4: 0.0,
        };
        // (Q - p theta4 + theta2 theta3 - p) / p = (4 - 2 - 2) / 2 = 0.
        assert_eq!(RadialPVariant::Superweight(s).sharp_constant(4.0, 2.0), 0.0);
    }

    #[test]
    fn conditions_are_enforced() {
        let f = make_bump(1.0, 2.0, 1.0, 0).unwrap();
        assert!(verify_radial_p(RadialPVariant::Log, 4.0, 1.0, &f, &opts()).is_err());
        assert!(verify_radial_p(RadialPVariant::Weighted { theta: 2.0 }, 4.0, 2.0, &f, &opts()).is_err());
        assert!(verify_radial_p(RadialPVariant::Poincare { radius: 1.5 }, 4.0, 2.0, &f, &opts()).is_err());
    }

    #[test]
    fn functions_with_y_are_rejected() {
        let f = make_bump(1.0, 2.0, 1.0, 1).unwrap();
        assert!(matches!(
            verify_radial_p(RadialPVariant::Log, 4.0, 2.0, &f, &opts()).unwrap_err(),
            HardyError::Domain(_)
        ));
    }
}
