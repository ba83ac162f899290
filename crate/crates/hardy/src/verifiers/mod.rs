//! Verifiers: each one integrates both sides of an inequality or identity
//! for a given test function and returns a structured report.
//!
//! Inequality margins are `lhs - sum(rhs terms)`; a margin passes when it is
//! at least `-margin_tol * scale`, with `scale = |lhs| + sum |terms|`.
//! Identities pass when `|lhs - rhs| / scale <= identity_tol`.

pub mod cases;
pub mod constant_field;
pub mod grushin;
pub mod landau;
pub mod radial_p;
pub mod sharpness;
pub mod sweep;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadrature::{
    integrate_radial, oracle_integrate, oracle_integrate_radial, Grid, OracleResolution, QuadratureSpec, RadialNode, Site,
    Support,
};

pub use cases::{list_theorems, run_case, Case, Outcome, TheoremInfo};
pub use sharpness::{estimate_sharpness, SharpnessOptions, SharpnessPoint, SharpnessResult, SharpnessTarget};
pub use sweep::{random_case, run_random_sweep, SweepSummary};

/// Default relative tolerance for margins.
pub const MARGIN_TOL: f64 = 1e-9;
/// Default relative tolerance for identities.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Relative agreement required between the main engine and the oracle.
pub const ORACLE_TOL: f64 = 1e-7;

/// Which second admissibility condition gates the Aharonov-Bohm Hardy inequality.
///
/// `Main` requires `alpha2 + 2 gamma > 0`, `Corollary` requires `alpha2 gamma + 2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    #[default]
    #[serde(alias = "thm2")]
    Main,
    Corollary,
}

/// Shared verification settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {
    pub quadrature: QuadratureSpec,
    pub oracle_resolution: OracleResolution,
    pub admissibility: Admissibility,
    pub margin_tol: f64,
    pub identity_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            quadrature: QuadratureSpec::default(),
            oracle_resolution: OracleResolution::default(),
            admissibility: Admissibility::Main,
            margin_tol: MARGIN_TOL,
            identity_tol: IDENTITY_TOL,
        }
    }
}

impl VerifyOptions {
    pub fn with_quadrature(spec: QuadratureSpec) -> Self {
        VerifyOptions {
            quadrature: spec,
            ..Default::default()
        }
    }
}

/// Named contribution to a right-hand side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

impl Term {
    pub fn new(name: &str, value: f64) -> Self {
        Term {
            name: name.to_string(),
            value,
        }
    }
}

/// Comparison of the main engine against the midpoint oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub engine: Vec<f64>,
    pub oracle: Vec<f64>,
    pub max_rel_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleCheck {
    pub fn compare(engine: &[f64], oracle: &[f64]) -> Self {
        let top = engine.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 1e-10 * top;
        let max_rel_diff = engine
            .iter()
            .zip(oracle)
            .map(|(a, b)| {
                let d = (a - b).abs();
                if d == 0.0 {
                    0.0
                } else {
                    d / a.abs().max(b.abs()).max(floor)
                }
            })
            .fold(0.0, f64::max);
        OracleCheck {
            engine: engine.to_vec(),
            oracle: oracle.to_vec(),
            max_rel_diff,
            tolerance: ORACLE_TOL,
            passed: max_rel_diff <= ORACLE_TOL,
        }
    }
}

/// Result of checking an identity `lhs = rhs` by quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub terms: Vec<Term>,
    pub rel_err: f64,
    pub tolerance: f64,
    pub diagnostics: BTreeMap<String, f64>,
    pub params: serde_json::Value,
    pub resolution: QuadratureSpec,
    pub oracle: Option<OracleCheck>,
    pub passed: bool,
}

/// Result of checking an inequality `lhs >= sum(rhs_terms)` by quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theorem_id: String,
    pub lhs: f64,
    pub rhs_terms: Vec<Term>,
    pub margin: f64,
    pub scale: f64,
    /// Absolute tolerance `margin_tol * scale`.
    pub tolerance: f64,
    pub sharp_constant: f64,
    /// Integral multiplying the sharp constant in the main term.
    pub main_integral: f64,
    /// `lhs / main_integral`.
    pub ratio: f64,
    /// `(lhs - non-main terms) / main_integral`.
    pub quotient: f64,
    /// Margins under alternative readings of the statement.
    pub alt_margins: BTreeMap<String, f64>,
    pub admissibility: BTreeMap<String, bool>,
    pub identities: Vec<IdentityReport>,
    pub params: serde_json::Value,
    pub resolution: QuadratureSpec,
    pub oracle: Option<OracleCheck>,
    pub margin_ok: bool,
    /// Every non-main right-hand term is at least `-tolerance`.
    pub remainders_ok: bool,
    pub passed: bool,
}

/// Pieces from which an [`InequalityReport`] is assembled.
pub(crate) struct Inequality {
    pub theorem_id: &'static str,
    pub lhs: f64,
    pub sharp_constant: f64,
    pub main_integral: f64,
    /// Right-hand terms other than the main one.
    pub extra: Vec<Term>,
    pub alt_margins: BTreeMap<String, f64>,
    pub admissibility: BTreeMap<String, bool>,
    pub identities: Vec<IdentityReport>,
    pub params: serde_json::Value,
    pub oracle: Option<OracleCheck>,
}

impl Inequality {
    pub fn new(theorem_id: &'static str, lhs: f64, sharp_constant: f64, main_integral: f64) -> Self {
        Inequality {
            theorem_id,
            lhs,
            sharp_constant,
            main_integral,
            extra: Vec::new(),
            alt_margins: BTreeMap::new(),
            admissibility: BTreeMap::new(),
            identities: Vec::new(),
            params: serde_json::Value::Null,
            oracle: None,
        }
    }

    pub fn term(mut self, name: &str, value: f64) -> Self {
        self.extra.push(Term::new(name, value));
        self
    }

    pub fn params(mut self, p: serde_json::Value) -> Self {
        self.params = p;
        self
    }

    pub fn admissible(mut self, conds: &[(&str, bool)]) -> Self {
        for (k, v) in conds {
            self.admissibility.insert(k.to_string(), *v);
        }
        self
    }

    pub fn alt(mut self, name: &str, margin: f64) -> Self {
        self.alt_margins.insert(name.to_string(), margin);
        self
    }

    pub fn oracle(mut self, o: Option<OracleCheck>) -> Self {
        self.oracle = o;
        self
    }

    pub fn finish(self, opts: &VerifyOptions) -> InequalityReport {
        let main = self.sharp_constant * self.main_integral;
        let extra_sum: f64 = self.extra.iter().map(|t| t.value).sum();
        let margin = self.lhs - main - extra_sum;
        let scale = self.lhs.abs() + main.abs() + self.extra.iter().map(|t| t.value.abs()).sum::<f64>();
        let tolerance = opts.margin_tol * scale;
        let margin_ok = margin >= -tolerance;
        let remainders_ok = self.extra.iter().all(|t| t.value >= -tolerance);
        let passed = margin_ok
            && remainders_ok
            && self.identities.iter().all(|i| i.passed)
            && self.oracle.as_ref().is_none_or(|o| o.passed);
        let mut rhs_terms = vec![Term::new("main", main)];
        rhs_terms.extend(self.extra);
        InequalityReport {
            theorem_id: self.theorem_id.to_string(),
            lhs: self.lhs,
            rhs_terms,
            margin,
            scale,
            tolerance,
            sharp_constant: self.sharp_constant,
            main_integral: self.main_integral,
            ratio: self.lhs / self.main_integral,
            quotient: (self.lhs - extra_sum) / self.main_integral,
            alt_margins: self.alt_margins,
            admissibility: self.admissibility,
            identities: self.identities,
            params: self.params,
            resolution: opts.quadrature.clone(),
            oracle: self.oracle,
            margin_ok,
            remainders_ok,
            passed,
        }
    }
}

/// Builds an identity report; `terms` are summed into the right-hand side.
pub(crate) fn identity(
    identity_id: &str,
    lhs: f64,
    terms: Vec<Term>,
    params: serde_json::Value,
    opts: &VerifyOptions,
    oracle: Option<OracleCheck>,
) -> IdentityReport {
    let rhs: f64 = terms.iter().map(|t| t.value).sum();
    let scale = lhs.abs() + terms.iter().map(|t| t.value.abs()).sum::<f64>();
    let rel_err = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    let passed = rel_err <= opts.identity_tol && oracle.as_ref().is_none_or(|o| o.passed);
    IdentityReport {
        identity_id: identity_id.to_string(),
        lhs,
        rhs,
        terms,
        rel_err,
        tolerance: opts.identity_tol,
        diagnostics: BTreeMap::new(),
        params,
        resolution: opts.quadrature.clone(),
        oracle,
        passed,
    }
}

/// Integrates with the main engine and, if requested, with the oracle.
pub(crate) fn integrate_checked<const N: usize, F>(
    m: usize,
    ky: usize,
    support: &Support,
    opts: &VerifyOptions,
    density: F,
) -> Result<([f64; N], Option<OracleCheck>)>
where
    F: Fn(&Site) -> [f64; N] + Sync,
{
    let grid = Grid::new(m, ky, support, &opts.quadrature)?;
    let values = grid.integrate(&density)?;
    let oracle = if opts.quadrature.oracle {
        let reference = oracle_integrate(m, support, &opts.oracle_resolution, &density)?;
        Some(OracleCheck::compare(&values, &reference))
    } else {
        None
    };
    Ok((values, oracle))
}

/// Radial counterpart of [`integrate_checked`]: `density(r, log r)` in homogeneous dimension `hom_dim`.
pub(crate) fn integrate_radial_checked<const N: usize, F>(
    support: &Support,
    hom_dim: f64,
    opts: &VerifyOptions,
    density: F,
) -> Result<([f64; N], Option<OracleCheck>)>
where
    F: Fn(f64, f64) -> [f64; N],
{
    let values = integrate_radial(support, hom_dim, &opts.quadrature, |n: &RadialNode| density(n.r, n.t))?;
    let oracle = if opts.quadrature.oracle {
        let reference = oracle_integrate_radial(support, hom_dim, opts.oracle_resolution.n_r, &density)?;
        Some(OracleCheck::compare(&values, &reference))
    } else {
        None
    };
    Ok((values, oracle))
}

/// Angular node count making trigonometric densities of the given modes exact.
pub fn exact_n_phi(max_abs_k: u32) -> usize {
    4 * (max_abs_k as usize + 1)
}
