//! Serializable verification cases and the theorem catalogue.

use serde::{Deserialize, Serialize};

use super::constant_field::verify_constant_field;
use super::grushin::{
    check_fourier_step, check_grushin_ibp_identity, verify_ab_hardy, verify_magnetic_grushin, verify_radial_hardy,
    verify_uncertainty_grushin, UncertaintyVariant,
};
use super::landau::{
    check_twisted_polar_identity, verify_landau, verify_real_landau, Kappa, LandauVariant, RealLandauReport,
    RealLandauVariant,
};
use super::radial_p::{verify_radial_p, RadialPVariant, SuperweightParams};
use super::{IdentityReport, InequalityReport, VerifyOptions};
use crate::error::{HardyError, Result};
use crate::fields::{ConstantFieldPotentials, Scalar1D};
use crate::functions::{gaussian_2d, make_bump, TestFunction};
use crate::geometry::{GrushinGeometry, WeightExponents};

/// Test function of a case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family", deny_unknown_fields)]
pub enum FunctionSpec {
    /// Radial bump on `[r_lo, r_hi]` with a `y` profile on `[-y_half, y_half]`.
    Bump { r_lo: f64, r_hi: f64, y_half: f64 },
    /// `exp(-|z|^2/2)` on the plane, smoothly cut off at `|z| = 8`.
    Gaussian2d,
    /// Explicit mode list.
    Modes(TestFunction),
}

impl FunctionSpec {
    pub fn build(&self, y_dims: usize) -> Result<TestFunction> {
        match self {
            FunctionSpec::Bump { r_lo, r_hi, y_half } => {
                if !(0.0 < *r_lo && r_lo < r_hi && *y_half > 0.0) {
                    return Err(HardyError::Config("bump needs 0 < r_lo < r_hi and y_half > 0".into()));
                }
                make_bump(*r_lo, *r_hi, *y_half, y_dims)
            }
            FunctionSpec::Gaussian2d => Ok(gaussian_2d()),
            FunctionSpec::Modes(f) => TestFunction::new(f.modes().to_vec(), f.y_dims()),
        }
    }
}

fn function(spec: &Option<FunctionSpec>, y_dims: usize) -> Result<TestFunction> {
    match spec {
        Some(s) => s.build(y_dims),
        None => make_bump(1.0, 2.0, 1.0, y_dims),
    }
}

/// One verification case, tagged by theorem id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "theorem", deny_unknown_fields)]
pub enum Case {
    RadialHardy {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        function: Option<FunctionSpec>,
    },
    GrushinIbpIdentity {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        alpha: f64,
        function: Option<FunctionSpec>,
    },
    MagneticGrushin {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        #[serde(default)]
        flux: f64,
        function: Option<FunctionSpec>,
    },
    Hardy2Split {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        #[serde(default)]
        flux: f64,
        function: Option<FunctionSpec>,
    },
    AbHardy {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        #[serde(default)]
        flux: f64,
        function: Option<FunctionSpec>,
    },
    UncertaintyLemma {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        #[serde(default)]
        flux: f64,
        function: Option<FunctionSpec>,
    },
    UncertaintyAb {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        #[serde(default)]
        flux: f64,
        function: Option<FunctionSpec>,
    },
    FourierStep {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        function: Option<FunctionSpec>,
    },
    TwistedPolarIdentity {
        #[serde(default = "Scalar1D::landau")]
        psi: Scalar1D,
        #[serde(default = "unit_kappa")]
        kappa: Kappa,
        function: Option<FunctionSpec>,
    },
    LandauHardySobolev {
        theta1: f64,
        #[serde(default = "Scalar1D::landau")]
        psi: Scalar1D,
        function: Option<FunctionSpec>,
    },
    LandauLog {
        #[serde(default = "Scalar1D::landau")]
        psi: Scalar1D,
        function: Option<FunctionSpec>,
    },
    LandauPoincare {
        radius: f64,
        #[serde(default = "Scalar1D::landau")]
        psi: Scalar1D,
        function: Option<FunctionSpec>,
    },
    LandauSuperweight {
        superweight: SuperweightParams,
        #[serde(default = "Scalar1D::landau")]
        psi: Scalar1D,
        function: Option<FunctionSpec>,
    },
    RealLandauIdentity {
        n: usize,
        function: Option<FunctionSpec>,
    },
    RealLandauHardy {
        n: usize,
        function: Option<FunctionSpec>,
    },
    RealLandauCritical {
        omega_radius: f64,
        big_r: f64,
        function: Option<FunctionSpec>,
    },
    RealLandauUncertainty {
        n: usize,
        function: Option<FunctionSpec>,
    },
    RealLandauUncertaintyCritical {
        omega_radius: f64,
        big_r: f64,
        function: Option<FunctionSpec>,
    },
    RadialPWeighted {
        hom_dim: f64,
        p: f64,
        theta: f64,
        function: Option<FunctionSpec>,
    },
    RadialPLog {
        hom_dim: f64,
        p: f64,
        function: Option<FunctionSpec>,
    },
    RadialPPoincare {
        hom_dim: f64,
        p: f64,
        radius: f64,
        function: Option<FunctionSpec>,
    },
    RadialPSuperweight {
        hom_dim: f64,
        p: f64,
        superweight: SuperweightParams,
        function: Option<FunctionSpec>,
    },
    ConstantField {
        geometry: GrushinGeometry,
        weights: WeightExponents,
        potentials: Option<ConstantFieldPotentials>,
        function: Option<FunctionSpec>,
    },
}

fn unit_kappa() -> Kappa {
    Kappa::Unit
}

/// Report of a case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    Inequality(InequalityReport),
    Identity(IdentityReport),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Inequality(r) => r.passed,
            Outcome::Identity(r) => r.passed,
        }
    }

    pub fn id(&self) -> &str {
        match self {
            Outcome::Inequality(r) => &r.theorem_id,
            Outcome::Identity(r) => &r.identity_id,
        }
    }
}

impl From<RealLandauReport> for Outcome {
    fn from(r: RealLandauReport) -> Self {
        match r {
            RealLandauReport::Identity(i) => Outcome::Identity(i),
            RealLandauReport::Inequality(i) => Outcome::Inequality(i),
        }
    }
}

impl Case {
    pub fn theorem_id(&self) -> &'static str {
        match self {
            Case::RadialHardy { .. } => "radial_hardy",
            Case::GrushinIbpIdentity { .. } => "grushin_ibp_identity",
            Case::MagneticGrushin { .. } => "magnetic_grushin",
            Case::Hardy2Split { .. } => "hardy2_split",
            Case::AbHardy { .. } => "ab_hardy",
            Case::UncertaintyLemma { .. } => "uncertainty_lemma",
            Case::UncertaintyAb { .. } => "uncertainty_ab",
            Case::FourierStep { .. } => "fourier_step",
            Case::TwistedPolarIdentity { .. } => "twisted_polar_identity",
            Case::LandauHardySobolev { .. } => "landau_hardy_sobolev",
            Case::LandauLog { .. } => "landau_log",
            Case::LandauPoincare { .. } => "landau_poincare",
            Case::LandauSuperweight { .. } => "landau_superweight",
            Case::RealLandauIdentity { .. } => "real_landau_identity",
            Case::RealLandauHardy { .. } => "real_landau_hardy",
            Case::RealLandauCritical { .. } => "real_landau_critical",
            Case::RealLandauUncertainty { .. } => "real_landau_uncertainty",
            Case::RealLandauUncertaintyCritical { .. } => "real_landau_uncertainty_critical",
            Case::RadialPWeighted { .. } => "radial_p_weighted",
            Case::RadialPLog { .. } => "radial_p_log",
            Case::RadialPPoincare { .. } => "radial_p_poincare",
            Case::RadialPSuperweight { .. } => "radial_p_superweight",
            Case::ConstantField { .. } => "constant_field",
        }
    }
}

/// Runs one case.
pub fn run_case(case: &Case, opts: &VerifyOptions) -> Result<Outcome> {
    use Outcome::{Identity as Id, Inequality as In};
    Ok(match case {
        Case::RadialHardy {
            geometry,
            weights,
            function: fs,
        } => In(verify_radial_hardy(geometry, *weights, &function(fs, geometry.k())?, opts)?),
        Case::GrushinIbpIdentity {
            geometry,
            weights,
            alpha,
            function: fs,
        } => Id(check_grushin_ibp_identity(
            geometry,
            *weights,
            &function(fs, geometry.k())?,
            *alpha,
            opts,
        )?),
        Case::MagneticGrushin {
            geometry,
            weights,
            flux,
            function: fs,
        } => In(verify_magnetic_grushin(geometry, *weights, *flux, &function(fs, geometry.k())?, opts)?),
        Case::Hardy2Split {
            geometry,
            weights,
            flux,
            function: fs,
        } => {
            let rep = verify_magnetic_grushin(geometry, *weights, *flux, &function(fs, geometry.k())?, opts)?;
            let mut split = rep.identities.into_iter().next().expect("split identity is always attached");
            split.identity_id = "hardy2_split".into();
            split.passed &= rep.oracle.as_ref().is_none_or(|o| o.passed);
            split.oracle = rep.oracle;
            Id(split)
        }
        Case::AbHardy {
            geometry,
            weights,
            flux,
            function: fs,
        } => In(verify_ab_hardy(geometry, *weights, *flux, &function(fs, geometry.k())?, opts)?),
        Case::UncertaintyLemma {
            geometry,
            weights,
            flux,
            function: fs,
        } => In(verify_uncertainty_grushin(
            UncertaintyVariant::Lemma,
            geometry,
            *weights,
            *flux,
            &function(fs, geometry.k())?,
            opts,
        )?),
        Case::UncertaintyAb {
            geometry,
            weights,
            flux,
            function: fs,
        } => In(verify_uncertainty_grushin(
            UncertaintyVariant::Ab,
            geometry,
            *weights,
            *flux,
            &function(fs, geometry.k())?,
            opts,
        )?),
        Case::FourierStep {
            geometry,
            weights,
            function: fs,
        } => Id(check_fourier_step(geometry, *weights, &function(fs, geometry.k())?, opts)?),
        Case::TwistedPolarIdentity { psi, kappa, function: fs } => {
            Id(check_twisted_polar_identity(psi, *kappa, &function(fs, 0)?, opts)?)
        }
        Case::LandauHardySobolev { theta1, psi, function: fs } => In(verify_landau(
            LandauVariant::HardySobolev { theta1: *theta1 },
            psi,
            &function(fs, 0)?,
            opts,
        )?),
        Case::LandauLog { psi, function: fs } => In(verify_landau(LandauVariant::Log, psi, &function(fs, 0)?, opts)?),
        Case::LandauPoincare { radius, psi, function: fs } => In(verify_landau(
            LandauVariant::Poincare { radius: *radius },
            psi,
            &function(fs, 0)?,
            opts,
        )?),
        Case::LandauSuperweight {
            superweight,
            psi,
            function: fs,
        } => In(verify_landau(
            LandauVariant::Superweight(*superweight),
            psi,
            &function(fs, 0)?,
            opts,
        )?),
        Case::RealLandauIdentity { n, function: fs } => {
            verify_real_landau(RealLandauVariant::Identity, *n, &function(fs, 0)?, opts)?.into()
        }
        Case::RealLandauHardy { n, function: fs } => {
            verify_real_landau(RealLandauVariant::Hardy, *n, &function(fs, 0)?, opts)?.into()
        }
        Case::RealLandauCritical {
            omega_radius,
            big_r,
            function: fs,
        } => verify_real_landau(
            RealLandauVariant::Critical {
                omega_radius: *omega_radius,
                big_r: *big_r,
            },
            1,
            &function(fs, 0)?,
            opts,
        )?
        .into(),
        Case::RealLandauUncertainty { n, function: fs } => {
            verify_real_landau(RealLandauVariant::Uncertainty, *n, &function(fs, 0)?, opts)?.into()
        }
        Case::RealLandauUncertaintyCritical {
            omega_radius,
            big_r,
            function: fs,
        } => verify_real_landau(
            RealLandauVariant::UncertaintyCritical {
                omega_radius: *omega_radius,
                big_r: *big_r,
            },
            1,
            &function(fs, 0)?,
            opts,
        )?
        .into(),
        Case::RadialPWeighted {
            hom_dim,
            p,
            theta,
            function: fs,
        } => In(verify_radial_p(
            RadialPVariant::Weighted { theta: *theta },
            *hom_dim,
            *p,
            &function(fs, 0)?,
            opts,
        )?),
        Case::RadialPLog { hom_dim, p, function: fs } => {
            In(verify_radial_p(RadialPVariant::Log, *hom_dim, *p, &function(fs, 0)?, opts)?)
        }
        Case::RadialPPoincare {
            hom_dim,
            p,
            radius,
            function: fs,
        } => In(verify_radial_p(
            RadialPVariant::Poincare { radius: *radius },
            *hom_dim,
            *p,
            &function(fs, 0)?,
            opts,
        )?),
        Case::RadialPSuperweight {
            hom_dim,
            p,
            superweight,
            function: fs,
        } => In(verify_radial_p(
            RadialPVariant::Superweight(*superweight),
            *hom_dim,
            *p,
            &function(fs, 0)?,
            opts,
        )?),
        Case::ConstantField {
            geometry,
            weights,
            potentials,
            function: fs,
        } => {
            let pots = potentials
                .clone()
                .unwrap_or_else(|| ConstantFieldPotentials::symmetric(geometry.m()));
            In(verify_constant_field(geometry, *weights, &pots, &function(fs, geometry.k())?, opts)?)
        }
    })
}

/// Catalogue entry of a theorem id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremInfo {
    pub id: &'static str,
    pub statement: &'static str,
    pub constant: &'static str,
    pub conditions: &'static str,
    pub sharpness: bool,
}

const fn info(
    id: &'static str,
    statement: &'static str,
    constant: &'static str,
    conditions: &'static str,
    sharpness: bool,
) -> TheoremInfo {
    TheoremInfo {
        id,
        statement,
        constant,
        conditions,
        sharpness,
    }
}

/// Every theorem id the tool can check, in a fixed order.
pub fn list_theorems() -> Vec<TheoremInfo> {
    vec![
        info(
            "radial_hardy",
            "int B (|d_|x| f|^2 + |x|^(2g)|grad_y f|^2) >= C int B |grad_g rho|^2/rho^2 |f|^2, B = rho^a1 |grad_g rho|^a2",
            "((Q+a1-2)/2)^2",
            "Q+a1-2>0, m+g*a2>0",
            true,
        ),
        info(
            "grushin_ibp_identity",
            "completing-the-square identity behind radial_hardy, any real alpha",
            "(Q+a1-2)*alpha - alpha^2",
            "none",
            false,
        ),
        info(
            "magnetic_grushin",
            "int B |(grad_g + i b A) f|^2 >= C int B |x|^(2g)/rho^(2g+2) |f|^2, real f, A = grad_g rho/rho",
            "((Q+a1-2)/2)^2 + b^2",
            "Q+a1-2>0, m+g*a2>0, f real",
            true,
        ),
        info(
            "hardy2_split",
            "|(grad_g + i b A) f|^2 = |grad_g f|^2 + b^2 |A|^2 f^2 for real f, integrated with weight B",
            "identity",
            "f real",
            false,
        ),
        info(
            "ab_hardy",
            "int B |(tilde grad_g + i b tilde A) f|^2 >= C int B |x|^(2g)/rho^(2g+2) |f|^2 + int B (|f|^2-|f_0|^2)/|x|^2, m = 2",
            "((a1+k(g+1))/2)^2 + b^2",
            "a1+k(g+1)>0; a2+2g>0 (main) or a2*g+2>0 (corollary)",
            true,
        ),
        info(
            "uncertainty_lemma",
            "||B^(1/2)(grad_g + i b A) f|| ||f|| >= C^(1/2) int rho^(a1/2)|grad_g rho|^(a2/2) |x|^g/rho^(g+1) |f|^2, real f",
            "(((Q+a1-2)/2)^2 + b^2)^(1/2)",
            "Q+a1-2>0, m+g*a2>0, f real",
            false,
        ),
        info(
            "uncertainty_ab",
            "||B^(1/2)(tilde grad_g + i b tilde A) f|| ||f|| >= C^(1/2) int rho^(a1/2)|grad_g rho|^(a2/2) |x|^g/rho^(g+1) |f|^2, m = 2",
            "(((a1+k(g+1))/2)^2 + b^2)^(1/2)",
            "as ab_hardy",
            false,
        ),
        info(
            "fourier_step",
            "int B |d_phi f|^2/|x|^2 >= int B (|f|^2-|f_0|^2)/|x|^2, equality for modes |k| <= 1, m = 2",
            "min_{k!=0} k^2 = 1",
            "m = 2",
            false,
        ),
        info(
            "twisted_polar_identity",
            "int |tilde grad_L f|^2/kappa = int (|f_r|^2 + |f_phi|^2/r^2 + psi^2 r^2 |f|^2)/kappa",
            "identity",
            "kappa > 0 on supp f",
            false,
        ),
        info(
            "landau_hardy_sobolev",
            "int |tilde grad_L f|^2/|z|^(2t1) - C int |f|^2/|z|^(2t1+2) >= int psi^2 |f|^2/|z|^(2t1-2) + int (|f|^2-|f_0|^2)/|z|^(2t1+2)",
            "t1^2",
            "t1 != 0",
            true,
        ),
        info(
            "landau_log",
            "int |tilde grad_L f|^2 log^2|z| - C int |f|^2/|z|^2 >= int psi^2 |z|^2 log^2|z| |f|^2 + int (|f|^2-|f_0|^2) log^2|z|/|z|^2",
            "1/4",
            "none",
            true,
        ),
        info(
            "landau_poincare",
            "int |tilde grad_L f|^2 - C int |f|^2 >= int psi^2 |z|^2 |f|^2 + int (|f|^2-|f_0|^2)/|z|^2, supp f in |z| < R",
            "1/R^2",
            "R = sup |z| on Omega",
            false,
        ),
        info(
            "landau_superweight",
            "int w |tilde grad_L f|^2/|z|^(2t4) >= C int w |f|^2/|z|^(2t4+2) + psi and Fourier remainders, w = (a+b|z|^t2)^t3",
            "((t2*t3-2*t4)/2)^2",
            "a,b>0, t2*t3<0, 2*t4<=t2*t3",
            true,
        ),
        info(
            "real_landau_identity",
            "int |grad_L f|^2 = int |grad f|^2 + int |z|^2/4 |f|^2 on C^n, real f",
            "identity",
            "f real",
            false,
        ),
        info(
            "real_landau_hardy",
            "int |grad_L f|^2 >= C int |f|^2/|z|^2 + int |z|^2/4 |f|^2 on C^n, real f",
            "(n-1)^2",
            "n >= 1, f real",
            false,
        ),
        info(
            "real_landau_critical",
            "int |grad_L f|^2 >= C int |f|^2/(|z|^2 log^2(R/|z|)) + int |z|^2/4 |f|^2 on Omega in C, real f",
            "1/4",
            "n = 1, R >= e sup_Omega |z|, f real",
            false,
        ),
        info(
            "real_landau_uncertainty",
            "||grad_L f|| ||f|| >= int sqrt((n-1)^2/|z|^2 + |z|^2/4) |f|^2, real f",
            "1",
            "n >= 1, f real",
            false,
        ),
        info(
            "real_landau_uncertainty_critical",
            "||grad_L f|| ||f|| >= int sqrt(1/(4|z|^2 log^2(R/|z|)) + |z|^2/4) |f|^2 on Omega in C, real f",
            "1",
            "n = 1, R >= e sup_Omega |z|, f real",
            false,
        ),
        info(
            "radial_p_weighted",
            "int |E f|^p/|x|^(t p) >= C int |f|^p/|x|^(t p) on R^Q, radial f",
            "|(Q-t p)/p|^p",
            "p > 1, t p != Q",
            true,
        ),
        info(
            "radial_p_log",
            "int |E f|^p |log|x||^p/|x|^Q >= C int |f|^p/|x|^Q on R^Q, radial f",
            "p^(-p)",
            "p > 1",
            true,
        ),
        info(
            "radial_p_poincare",
            "int |f'|^p >= C int |f|^p, supp f in |x| < R, radial f",
            "(Q/(R p))^p",
            "p > 1, R > 0",
            false,
        ),
        info(
            "radial_p_superweight",
            "int w |f'|^p/|x|^(p t4) >= C int w |f|^p/|x|^(p t4+p), w = (a+b|x|^t2)^t3, radial f",
            "((Q-p*t4+t2*t3-p)/p)^p",
            "p > 1, a,b>0, t2*t3<0, p*t4-t2*t3<=Q-p",
            true,
        ),
        info(
            "constant_field",
            "int B |grad_GL f|^2 >= C int B |x|^(2g)/rho^(2g+2) |f|^2 + sum_j int B (psi_2j^2 + psi_1j^2) |f|^2, m = k = n, real f",
            "((n(2+g)+a1-2)/2)^2 (unsquared reading reported as as_printed)",
            "n(2+g)+a1-2>0, n+a2*g>0, f real, n in {1,2}",
            false,
        ),
    ]
}
