//! Randomized admissible cases and margin sweeps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cases::{list_theorems, run_case, Case, FunctionSpec, Outcome};
use super::landau::Kappa;
use super::radial_p::SuperweightParams;
use super::{exact_n_phi, VerifyOptions};
use crate::error::{HardyError, Result};
use crate::fields::{ConstantFieldPotentials, Scalar1D};
use crate::functions::{random_function, RandomFunctionOptions, TestFunction};
use crate::geometry::{GrushinGeometry, WeightExponents};
use crate::quadrature::QuadratureSpec;

/// Radial nodes used by sweeps.
pub const SWEEP_N_R: usize = 48;

/// Radial nodes for the integration-by-parts identity, whose two sides only agree after integration.
pub const IBP_SWEEP_N_R: usize = 192;


/// A random case with the resolution it should run at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomCase {
    pub case: Case,
    pub quadrature: QuadratureSpec,
}

fn geometry<R: Rng>(rng: &mut R, m: usize) -> GrushinGeometry {
    let k = if rng.gen_bool(0.25) { 2 } else { 1 };
    GrushinGeometry::new(m, k, rng.gen_range(0.0..=2.0)).expect("sampled geometry is valid")
}

/// `alpha1` with `Q + alpha1 - 2` in `[0.5, 6]`, `alpha2` satisfying every candidate condition.
fn weights<R: Rng>(rng: &mut R, g: &GrushinGeometry) -> WeightExponents {
    let alpha1 = 2.0 - g.hom_dim() + rng.gen_range(0.5..=6.0);
    let gamma = g.gamma();
    loop {
        let alpha2: f64 = rng.gen_range(-1.0..=2.0);
        if alpha2 + 2.0 * gamma > 0.0 && alpha2 * gamma + 2.0 > 0.0 && g.m() as f64 + gamma * alpha2 > 0.0 {
            return WeightExponents::new(alpha1, alpha2);
        }
    }
}

fn scalar<R: Rng>(rng: &mut R) -> Scalar1D {
    match rng.gen_range(0..3) {
        0 => Scalar1D::Constant {
            value: rng.gen_range(-1.0..=1.0),
        },
        1 => Scalar1D::Linear {
            slope: rng.gen_range(-1.0..=1.0),
        },
        _ => Scalar1D::Power {
            coef: rng.gen_range(-1.0..=1.0),
            exponent: rng.gen_range(-1.0..=2.0),
        },
    }
}

/// Superweight with `a, b > 0`, `theta2 theta3 < 0` and `p theta4 - theta2 theta3 <= Q - p`.
fn superweight<R: Rng>(rng: &mut R, hom_dim: f64, p: f64) -> SuperweightParams {
    let s2 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let theta2 = s2 * rng.gen_range(0.5..=2.0);
    let theta3 = -s2 * rng.gen_range(0.5..=2.0);
    let theta4 = (hom_dim - p + theta2 * theta3) / p - rng.gen_range(0.0..=1.0);
    SuperweightParams {
        a: rng.gen_range(0.5..=2.0),
        b: rng.gen_range(0.5..=2.0),
        theta2,
        theta3,
        theta4,
    }
}

fn func<R: Rng>(rng: &mut R, y_dims: usize, radial: bool, real: bool) -> TestFunction {
    random_function(
        rng,
        &RandomFunctionOptions {
            y_dims,
            radial,
            real,
            ..Default::default()
        },
    )
}

/// Keeps one summand of `f`, moved to a random mode `k` when `m = 2`.
fn single_mode<R: Rng>(rng: &mut R, g: &GrushinGeometry, f: TestFunction) -> Result<TestFunction> {
    let mut mode = f.modes()[0].clone();
    if g.m() == 2 {
        mode.k = rng.gen_range(-2..=2);
    }
    TestFunction::new(vec![mode], f.y_dims())
}

fn spec(f: &TestFunction, ky: usize) -> QuadratureSpec {
    QuadratureSpec::new(SWEEP_N_R, exact_n_phi(f.max_abs_k()), if ky >= 2 { 16 } else { 24 })
}

fn modes(f: TestFunction) -> Option<FunctionSpec> {
    Some(FunctionSpec::Modes(f))
}

/// Draws an admissible random case for `theorem_id`.
pub fn random_case<R: Rng>(theorem_id: &str, rng: &mut R) -> Result<RandomCase> {
    let grushin = |rng: &mut R, m: Option<usize>, real: bool| {
        let m = m.unwrap_or_else(|| rng.gen_range(1..=3));
        let g = geometry(rng, m);
        let w = weights(rng, &g);
        let f = func(rng, g.k(), m != 2, real);
        (g, w, f)
    };
    let plane = |rng: &mut R, real: bool| func(rng, 0, false, real);
    let (case, f, ky) = match theorem_id {
        "radial_hardy" => {
            let (g, w, f) = grushin(rng, None, false);
            (
                Case::RadialHardy {
                    geometry: g,
                    weights: w,
                    function: modes(f.clone()),
                },
                f,
                g.k(),
            )
        }
        "grushin_ibp_identity" => {
            let (g, w, f) = grushin(rng, None, false);
            let f = single_mode(rng, &g, f)?;
            (
                Case::GrushinIbpIdentity {
                    geometry: g,
                    weights: w,
                    alpha: rng.gen_range(-2.0..=2.0),
                    function: modes(f.clone()),
                },
                f,
                g.k(),
            )
        }
        "magnetic_grushin" | "hardy2_split" | "uncertainty_lemma" => {
            let (g, w, f) = grushin(rng, None, true);
            let flux = rng.gen_range(-1.0..=1.0);
            let (geometry, weights, function) = (g, w, modes(f.clone()));
            let case = match theorem_id {
                "magnetic_grushin" => Case::MagneticGrushin {
                    geometry,
                    weights,
                    flux,
                    function,
                },
                "hardy2_split" => Case::Hardy2Split {
                    geometry,
                    weights,
                    flux,
                    function,
                },
                _ => Case::UncertaintyLemma {
                    geometry,
                    weights,
                    flux,
                    function,
                },
            };
            (case, f, g.k())
        }
        "ab_hardy" | "uncertainty_ab" | "fourier_step" => {
            let (g, w, f) = grushin(rng, Some(2), false);
            let flux = rng.gen_range(-1.0..=1.0);
            let (geometry, weights, function) = (g, w, modes(f.clone()));
            let case = match theorem_id {
                "ab_hardy" => Case::AbHardy {
                    geometry,
                    weights,
                    flux,
                    function,
                },
                "uncertainty_ab" => Case::UncertaintyAb {
                    geometry,
                    weights,
                    flux,
                    function,
                },
                _ => Case::FourierStep {
                    geometry,
                    weights,
                    function,
                },
            };
            (case, f, g.k())
        }
        "twisted_polar_identity" => {
            let f = plane(rng, false);
            let kappa = match rng.gen_range(0..3) {
                0 => Kappa::Unit,
                1 => Kappa::Power {
                    exponent: rng.gen_range(-2.0..=2.0),
                },
                _ => Kappa::Log,
            };
            (
                Case::TwistedPolarIdentity {
                    psi: scalar(rng),
                    kappa,
                    function: modes(f.clone()),
                },
                f,
                0,
            )
        }
        "landau_hardy_sobolev" | "landau_log" | "landau_poincare" | "landau_superweight" => {
            let f = plane(rng, false);
            let psi = scalar(rng);
            let function = modes(f.clone());
            let case = match theorem_id {
                "landau_hardy_sobolev" => {
                    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    Case::LandauHardySobolev {
                        theta1: s * rng.gen_range(0.1..=2.0),
                        psi,
                        function,
                    }
                }
                "landau_log" => Case::LandauLog { psi, function },
                "landau_poincare" => Case::LandauPoincare {
                    radius: f.support()?.r_hi * rng.gen_range(1.0..=1.5),
                    psi,
                    function,
                },
                _ => Case::LandauSuperweight {
                    superweight: superweight(rng, 2.0, 2.0),
                    psi,
                    function,
                },
            };
            (case, f, 0)
        }
        "real_landau_identity" | "real_landau_hardy" | "real_landau_uncertainty" => {
            let n = rng.gen_range(1..=2usize);
            let f = func(rng, 0, n != 1, true);
            let function = modes(f.clone());
            let case = match theorem_id {
                "real_landau_identity" => Case::RealLandauIdentity { n, function },
                "real_landau_hardy" => Case::RealLandauHardy { n, function },
                _ => Case::RealLandauUncertainty { n, function },
            };
            (case, f, 0)
        }
        "real_landau_critical" | "real_landau_uncertainty_critical" => {
            let f = plane(rng, true);
            let omega_radius = f.support()?.r_hi * rng.gen_range(1.0..=1.5);
            let big_r = std::f64::consts::E * omega_radius * rng.gen_range(1.0..=2.0);
            let function = modes(f.clone());
            let case = if theorem_id == "real_landau_critical" {
                Case::RealLandauCritical {
                    omega_radius,
                    big_r,
                    function,
                }
            } else {
                Case::RealLandauUncertaintyCritical {
                    omega_radius,
                    big_r,
                    function,
                }
            };
            (case, f, 0)
        }
        "radial_p_weighted" | "radial_p_log" | "radial_p_poincare" | "radial_p_superweight" => {
            let hom_dim = rng.gen_range(1.5..=6.0);
            let p = rng.gen_range(1.2..=4.0);
            let f = func(rng, 0, true, false);
            let function = modes(f.clone());
            let case = match theorem_id {
                "radial_p_weighted" => {
                    let theta = loop {
                        let t: f64 = rng.gen_range(-2.0..=3.0);
                        if (t * p - hom_dim).abs() > 0.1 {
                            break t;
                        }
                    };
                    Case::RadialPWeighted {
                        hom_dim,
                        p,
                        theta,
                        function,
                    }
                }
                "radial_p_log" => Case::RadialPLog { hom_dim, p, function },
                "radial_p_poincare" => Case::RadialPPoincare {
                    hom_dim,
                    p,
                    radius: f.support()?.r_hi * rng.gen_range(1.0..=1.5),
                    function,
                },
                _ => Case::RadialPSuperweight {
                    hom_dim,
                    p,
                    superweight: superweight(rng, hom_dim, p),
                    function,
                },
            };
            (case, f, 0)
        }
        "constant_field" => {
            let n = rng.gen_range(1..=2usize);
            let g = GrushinGeometry::new(n, n, rng.gen_range(0.0..=2.0)).expect("sampled geometry is valid");
            let w = weights(rng, &g);
            let lin = |rng: &mut R| {
                if rng.gen_bool(0.5) {
                    Scalar1D::Linear {
                        slope: rng.gen_range(-1.0..=1.0),
                    }
                } else {
                    Scalar1D::Constant {
                        value: rng.gen_range(-1.0..=1.0),
                    }
                }
            };
            let pots = ConstantFieldPotentials {
                psi1: (0..n).map(|_| lin(rng)).collect(),
                psi2: (0..n).map(|_| lin(rng)).collect(),
            };
            let f = func(rng, n, n != 2, true);
            (
                Case::ConstantField {
                    geometry: g,
                    weights: w,
                    potentials: Some(pots),
                    function: modes(f.clone()),
                },
                f,
                n,
            )
        }
        other => return Err(HardyError::Config(format!("unknown theorem id '{other}'"))),
    };
    let mut quadrature = spec(&f, ky);
    if theorem_id == "grushin_ibp_identity" {
        quadrature.n_r = IBP_SWEEP_N_R;
        quadrature.n_y = if ky >= 2 { 24 } else { 32 };
    }
    Ok(RandomCase { quadrature, case })
}

/// A case that failed or errored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub index: usize,
    pub case: Case,
    pub reason: String,
    /// `margin / scale` for inequalities, `rel_err` for identities.
    pub value: Option<f64>,
}

/// Summary of a randomized sweep for one theorem id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub theorem_id: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub errors: usize,
    /// Smallest `margin / scale` over inequality cases.
    pub worst_scaled_margin: Option<f64>,
    /// Largest `rel_err` over identity cases.
    pub worst_rel_err: Option<f64>,
    pub failures: Vec<SweepFailure>,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.cases
    }
}

fn stream_of(theorem_id: &str) -> u64 {
    list_theorems()
        .iter()
        .position(|t| t.id == theorem_id)
        .map_or(u64::MAX, |i| i as u64)
}

/// Runs `count` random admissible cases of `theorem_id`; each uses its own sweep resolution.
pub fn run_random_sweep(theorem_id: &str, count: usize, seed: u64, base: &VerifyOptions) -> Result<SweepSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_of(theorem_id));
    let mut summary = SweepSummary {
        theorem_id: theorem_id.to_string(),
        seed,
        cases: count,
        passed: 0,
        errors: 0,
        worst_scaled_margin: None,
        worst_rel_err: None,
        failures: Vec::new(),
    };
    for index in 0..count {
        let rc = random_case(theorem_id, &mut rng)?;
        let opts = VerifyOptions {
            quadrature: QuadratureSpec {
                oracle: base.quadrature.oracle,
                ..rc.quadrature.clone()
            },
            ..base.clone()
        };
        match run_case(&rc.case, &opts) {
            Ok(out) => {
                let value = match &out {
                    Outcome::Inequality(r) => {
                        let v = if r.scale == 0.0 { 0.0 } else { r.margin / r.scale };
                        summary.worst_scaled_margin = Some(summary.worst_scaled_margin.map_or(v, |w| w.min(v)));
                        v
                    }
                    Outcome::Identity(r) => {
                        summary.worst_rel_err = Some(summary.worst_rel_err.map_or(r.rel_err, |w| w.max(r.rel_err)));
                        r.rel_err
                    }
                };
                if out.passed() {
                    summary.passed += 1;
                } else {
                    summary.failures.push(SweepFailure {
                        index,
                        case: rc.case,
                        reason: "check failed".into(),
                        value: Some(value),
                    });
                }
            }
            Err(e) => {
                summary.errors += 1;
                summary.failures.push(SweepFailure {
                    index,
                    case: rc.case,
                    reason: e.to_string(),
                    value: None,
                });
            }
        }
    }
    Ok(summary)
}
