//! Smooth compactly supported test functions with exact derivatives.
//!
//! A test function is a finite Fourier sum
//! `f(x, y) = sum_k c_k g_k(|x|, y) e^{i k phi}` where `phi` is the polar
//! angle of `x` (only `k = 0` is allowed unless `m = 2`). Each profile
//! `g_k` is a product of [`Factor`]s, all of which know their first
//! derivatives, so every partial of `f` is available in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{HardyError, Result};
use crate::geometry::{pow0, rho_ry, Coords, Point};
use crate::quadrature::{Focus, Site, Support};

pub type C64 = Complex64;

/// Complex inline vector for gradients.
pub type CCoords = SmallVec<[C64; 4]>;

/// Smooth step: 0 for `s <= 0`, 1 for `s >= 1`. Returns `(S, S')`.
pub fn smooth_step(s: f64) -> (f64, f64) {
    if s <= 0.0 {
        return (0.0, 0.0);
    }
    if s >= 1.0 {
        return (1.0, 0.0);
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    let d = a + b;
    let ds = a * b * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s))) / (d * d);
    (a / d, if ds.is_finite() { ds } else { 0.0 })
}

/// Bump `exp(1 - 1/(1 - s^2))` on `(-1, 1)`, peak value 1. Returns `(b, b')`.
pub fn bump(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    let b = (1.0 - 1.0 / q).exp();
    if b == 0.0 {
        return (0.0, 0.0);
    }
    (b, b * (-2.0 * s / (q * q)))
}

/// Which side of `r = 1` a window in `log|log r|` lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogSide {
    /// `r < 1`.
    Inner,
    /// `r > 1`.
    Outer,
}

fn default_floor() -> f64 {
    1e-12
}

/// One multiplicative factor of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Factor {
    /// Identically 1 on the middle half (in `log r`) of `[lo, hi]`, zero outside.
    RBump { lo: f64, hi: f64 },
    /// `exp(-r^2 / (2 sigma^2))`.
    RGaussian { sigma: f64 },
    /// `r^exponent`.
    RPower { exponent: f64 },
    /// 1 for `r <= start`, 0 for `r >= end`, smooth in between.
    ROuterCutoff { start: f64, end: f64 },
    /// Bump in `log r` centred at `center` with half-width `half_width`.
    RLogWindow { center: f64, half_width: f64 },
    /// `|log r|^exponent`.
    LogAbsPower { exponent: f64 },
    /// Bump in `log|log r|` on one side of `r = 1`.
    LogLogWindow { center: f64, half_width: f64, side: LogSide },
    /// Product of bumps `prod_j bump((y_j - c_j) / half)`.
    YBump { center: Coords, half: f64 },
    /// `exp(-|y - c|^2 / (2 sigma^2))`.
    YGaussian { center: Coords, sigma: f64 },
    /// `rho^exponent` for the quasi-norm with parameter `gamma`.
    RhoPower { exponent: f64, gamma: f64 },
    /// Bump in `log rho`. Below `floor * rho_min` in `|x|` the factor is
    /// treated as negligible by [`Factor::support`].
    RhoWindow {
        center: f64,
        half_width: f64,
        gamma: f64,
        #[serde(default = "default_floor")]
        floor: f64,
    },
}

/// Value and first derivatives of a real profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileJet {
    pub v: f64,
    pub dr: f64,
    pub dy: Coords,
}

impl ProfileJet {
    fn zero(ky: usize) -> Self {
        ProfileJet {
            v: 0.0,
            dr: 0.0,
            dy: SmallVec::from_elem(0.0, ky),
        }
    }

    fn radial(v: f64, dr: f64, ky: usize) -> Self {
        ProfileJet {
            v,
            dr,
            dy: SmallVec::from_elem(0.0, ky),
        }
    }

    fn mul(self, o: ProfileJet) -> ProfileJet {
        ProfileJet {
            v: self.v * o.v,
            dr: self.dr * o.v + self.v * o.dr,
            dy: self
                .dy
                .iter()
                .zip(o.dy.iter())
                .map(|(a, b)| a * o.v + self.v * b)
                .collect(),
        }
    }
}

/// `(rho, d_r rho / rho, d_{y_j} rho / rho)` for the quasi-norm with parameter `gamma`.
fn rho_jet(gamma: f64, r: f64, y: &[f64]) -> (f64, f64, Coords) {
    let y_sq: f64 = y.iter().map(|v| v * v).sum();
    let rho = rho_ry(gamma, r, y_sq);
    let dr = pow0(r / rho, 2.0 * gamma + 1.0) / rho;
    let scale = (1.0 + gamma) / rho.powf(2.0 * gamma + 2.0);
    (rho, dr, y.iter().map(|v| v * scale).collect())
}

impl Factor {
    fn y_dims(&self) -> Option<usize> {
        match self {
            Factor::YBump { center, .. } | Factor::YGaussian { center, .. } => Some(center.len()),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(HardyError::Domain(format!("invalid factor {self:?}: {what}")));
        let finite = |v: f64| v.is_finite();
        match self {
            Factor::RBump { lo, hi } if !(*lo > 0.0 && hi > lo && finite(*hi)) => bad("need 0 < lo < hi"),
            Factor::RGaussian { sigma } | Factor::YGaussian { sigma, .. } if !(*sigma > 0.0 && finite(*sigma)) => {
                bad("sigma must be positive")
            }
            Factor::ROuterCutoff { start, end } if !(*start >= 0.0 && end > start && finite(*end)) => {
                bad("need 0 <= start < end")
            }
            Factor::RLogWindow { center, half_width }
            | Factor::LogLogWindow { center, half_width, .. }
            | Factor::RhoWindow { center, half_width, .. }
                if !(*half_width > 0.0 && finite(*half_width) && finite(*center)) =>
            {
                bad("half_width must be positive")
            }
            Factor::YBump { half, .. } if !(*half > 0.0 && finite(*half)) => bad("half must be positive"),
            Factor::RhoPower { gamma, .. } | Factor::RhoWindow { gamma, .. } if !(*gamma >= 0.0) => {
                bad("gamma must be >= 0")
            }
            _ => Ok(()),
        }
    }

    /// Jet at `(r, t = log r, y)`.
    pub fn jet(&self, r: f64, t: f64, y: &[f64]) -> ProfileJet {
        let ky = y.len();
        match self {
            Factor::RBump { lo, hi } => {
                let l = (hi / lo).ln();
                let u = (t - lo.ln()) / l;
                let (a, da) = smooth_step(4.0 * u);
                let (b, db) = smooth_step(4.0 - 4.0 * u);
                let dchi = 4.0 * da * b - 4.0 * a * db;
                ProfileJet::radial(a * b, dchi / (l * r), ky)
            }
            Factor::RGaussian { sigma } => {
                let s2 = sigma * sigma;
                let v = (-r * r / (2.0 * s2)).exp();
                ProfileJet::radial(v, -r / s2 * v, ky)
            }
            Factor::RPower { exponent } => {
                let v = (exponent * t).exp();
                ProfileJet::radial(v, exponent * v / r, ky)
            }
            Factor::ROuterCutoff { start, end } => {
                let w = end - start;
                let (s, ds) = smooth_step((end - r) / w);
                ProfileJet::radial(s, -ds / w, ky)
            }
            Factor::RLogWindow { center, half_width } => {
                let (b, db) = bump((t - center) / half_width);
                ProfileJet::radial(b, db / (half_width * r), ky)
            }
            Factor::LogAbsPower { exponent } => {
                let a = t.abs();
                let v = a.powf(*exponent);
                ProfileJet::radial(v, exponent * v / t / r, ky)
            }
            Factor::LogLogWindow {
                center,
                half_width,
                side,
            } => {
                let on_side = match side {
                    LogSide::Inner => t < 0.0,
                    LogSide::Outer => t > 0.0,
                };
                if !on_side {
                    return ProfileJet::zero(ky);
                }
                let (b, db) = bump((t.abs().ln() - center) / half_width);
                ProfileJet::radial(b, db / (half_width * t * r), ky)
            }
            Factor::YBump { center, half } => {
                let parts: SmallVec<[(f64, f64); 4]> =
                    y.iter().zip(center.iter()).map(|(yj, c)| bump((yj - c) / half)).collect();
                let v: f64 = parts.iter().map(|p| p.0).product();
                let dy = (0..ky)
                    .map(|j| {
                        let others: f64 = parts.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, p)| p.0).product();
                        parts[j].1 / half * others
                    })
                    .collect();
                ProfileJet { v, dr: 0.0, dy }
            }
            Factor::YGaussian { center, sigma } => {
                let s2 = sigma * sigma;
                let d2: f64 = y.iter().zip(center.iter()).map(|(a, c)| (a - c) * (a - c)).sum();
                let v = (-d2 / (2.0 * s2)).exp();
                ProfileJet {
                    v,
                    dr: 0.0,
                    dy: y.iter().zip(center.iter()).map(|(a, c)| -(a - c) / s2 * v).collect(),
                }
            }
            Factor::RhoPower { exponent, gamma } => {
                let (rho, lr, ly) = rho_jet(*gamma, r, y);
                let v = rho.powf(*exponent);
                ProfileJet {
                    v,
                    dr: exponent * v * lr,
                    dy: ly.iter().map(|g| exponent * v * g).collect(),
                }
            }
            Factor::RhoWindow {
                center,
                half_width,
                gamma,
                ..
            } => {
                let (rho, lr, ly) = rho_jet(*gamma, r, y);
                let (b, db) = bump((rho.ln() - center) / half_width);
                let s = db / half_width;
                ProfileJet {
                    v: b,
                    dr: s * lr,
                    dy: ly.iter().map(|g| s * g).collect(),
                }
            }
        }
    }

    /// Restricts `acc` to a region containing this factor's support.
    fn restrict(&self, acc: &mut Support) {
        let cap_r = |lo: f64, hi: f64, acc: &mut Support| {
            acc.r_lo = acc.r_lo.max(lo);
            acc.r_hi = acc.r_hi.min(hi);
        };
        match self {
            Factor::RBump { lo, hi } => cap_r(*lo, *hi, acc),
            Factor::RGaussian { sigma } => cap_r(0.0, 9.0 * sigma, acc),
            Factor::ROuterCutoff { end, .. } => cap_r(0.0, *end, acc),
            Factor::RLogWindow { center, half_width } => {
                cap_r((center - half_width).exp(), (center + half_width).exp(), acc)
            }
            Factor::LogLogWindow {
                center,
                half_width,
                side,
            } => {
                let near = (center - half_width).exp();
                let far = (center + half_width).exp();
                match side {
                    LogSide::Inner => cap_r((-far).exp(), (-near).exp(), acc),
                    LogSide::Outer => cap_r(near.exp(), far.exp(), acc),
                }
                acc.r_focus.get_or_insert(Focus {
                    t0: 0.0,
                    delta: 0.5 * near,
                });
            }
            Factor::YBump { center, half } => {
                for (b, c) in acc.y.iter_mut().zip(center.iter()) {
                    b.0 = b.0.max(c - half);
                    b.1 = b.1.min(c + half);
                }
            }
            Factor::YGaussian { center, sigma } => {
                for (b, c) in acc.y.iter_mut().zip(center.iter()) {
                    b.0 = b.0.max(c - 9.0 * sigma);
                    b.1 = b.1.min(c + 9.0 * sigma);
                }
            }
            Factor::RhoWindow {
                center,
                half_width,
                gamma,
                floor,
            } => {
                let rho_max = (center + half_width).exp();
                let rho_min = (center - half_width).exp();
                cap_r(rho_min * floor, rho_max, acc);
                let y_max = rho_max.powf(1.0 + gamma) / (1.0 + gamma);
                for b in acc.y.iter_mut() {
                    b.0 = b.0.max(-y_max);
                    b.1 = b.1.min(y_max);
                }
                acc.y_scale
                    .get_or_insert(0.25 * rho_min.powf(1.0 + gamma) / (1.0 + gamma));
                acc.r_focus.get_or_insert(Focus {
                    t0: *center,
                    delta: 0.5 * half_width.max(1.0),
                });
            }
            Factor::RPower { .. } | Factor::LogAbsPower { .. } | Factor::RhoPower { .. } => {}
        }
    }
}

/// Product of factors.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile {
    pub factors: Vec<Factor>,
}

impl Profile {
    pub fn new(factors: Vec<Factor>) -> Self {
        Profile { factors }
    }

    pub fn jet(&self, r: f64, t: f64, y: &[f64]) -> ProfileJet {
        let mut acc = ProfileJet::radial(1.0, 0.0, y.len());
        for f in &self.factors {
            let j = f.jet(r, t, y);
            if j.v == 0.0 && j.dr == 0.0 && j.dy.iter().all(|d| *d == 0.0) {
                return ProfileJet::zero(y.len());
            }
            acc = acc.mul(j);
        }
        acc
    }

    fn support(&self, ky: usize) -> Support {
        let mut s = Support {
            r_lo: 0.0,
            r_hi: f64::INFINITY,
            y: SmallVec::from_elem((f64::NEG_INFINITY, f64::INFINITY), ky),
            r_focus: None,
            y_scale: None,
            r_breaks: Vec::new(),
        };
        for f in &self.factors {
            f.restrict(&mut s);
        }
        s
    }
}

/// One Fourier mode `c e^{i k phi} g(r, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k: i32,
    pub amplitude: C64,
    pub profile: Profile,
}

/// Anisotropic dilation `f(lambda x, lambda^(1+gamma) y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dilation {
    pub lambda: f64,
    pub gamma: f64,
}

/// Value and first partials of a test function in polar form.
#[derive(Debug, Clone, PartialEq)]
pub struct FnJet {
    pub v: C64,
    pub dr: C64,
    pub dphi: C64,
    pub dy: CCoords,
}

/// Finite Fourier sum of smooth compactly supported profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    modes: Vec<Mode>,
    y_dims: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dilation: Option<Dilation>,
}

impl TestFunction {
    pub fn new(modes: Vec<Mode>, y_dims: usize) -> Result<Self> {
        if modes.is_empty() {
            return Err(HardyError::Domain("test function needs at least one mode".into()));
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].iter().any(|o| o.k == m.k) {
                return Err(HardyError::Domain(format!("duplicate angular mode k = {}", m.k)));
            }
            if !(m.amplitude.re.is_finite() && m.amplitude.im.is_finite()) {
                return Err(HardyError::NonFinite(format!("amplitude of mode {}", m.k)));
            }
            for f in &m.profile.factors {
                f.validate()?;
                if let Some(d) = f.y_dims() {
                    if d != y_dims {
                        return Err(HardyError::Domain(format!(
                            "factor has {d} y-dimensions, function has {y_dims}"
                        )));
                    }
                }
            }
        }
        Ok(TestFunction {
            modes,
            y_dims,
            dilation: None,
        })
    }

    /// Radial (`k = 0`) function with the given profile.
    pub fn radial(profile: Profile, y_dims: usize) -> Result<Self> {
        Self::new(
            vec![Mode {
                k: 0,
                amplitude: C64::new(1.0, 0.0),
                profile,
            }],
            y_dims,
        )
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn y_dims(&self) -> usize {
        self.y_dims
    }

    pub fn dilation(&self) -> Option<Dilation> {
        self.dilation
    }

    pub fn max_abs_k(&self) -> u32 {
        self.modes.iter().map(|m| m.k.unsigned_abs()).max().unwrap_or(0)
    }

    /// Only the `k = 0` mode is present.
    pub fn is_radial(&self) -> bool {
        self.modes.iter().all(|m| m.k == 0)
    }

    /// Structural realness: modes pair as `(k, c, g)` and `(-k, conj c, g)`, with real `c_0`.
    pub fn is_real(&self) -> bool {
        self.modes.iter().all(|m| {
            if m.k == 0 {
                m.amplitude.im == 0.0
            } else {
                self.modes
                    .iter()
                    .any(|o| o.k == -m.k && o.amplitude == m.amplitude.conj() && o.profile == m.profile)
            }
        })
    }

    pub fn require_real(&self) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(HardyError::Realness(
                "modes are not conjugate-symmetric with real k = 0 amplitude".into(),
            ))
        }
    }

    /// Checks that the function can live on `R^m x R^ky`.
    pub fn check_space(&self, m: usize, ky: usize) -> Result<()> {
        if ky != self.y_dims {
            return Err(HardyError::Domain(format!(
                "function has {} y-dimensions, space has {ky}",
                self.y_dims
            )));
        }
        if m != 2 && !self.is_radial() {
            return Err(HardyError::Domain(format!(
                "angular modes need m = 2, got m = {m}"
            )));
        }
        Ok(())
    }

    /// `f(lambda x, lambda^(1+gamma) y)`.
    pub fn dilated(&self, lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(HardyError::Domain(format!("dilation factor must be positive, got {lambda}")));
        }
        let dilation = match self.dilation {
            None => Dilation { lambda, gamma },
            Some(d) if d.gamma == gamma => Dilation {
                lambda: d.lambda * lambda,
                gamma,
            },
            Some(_) => {
                return Err(HardyError::Domain("cannot compose dilations with different gamma".into()))
            }
        };
        Ok(TestFunction {
            dilation: Some(dilation),
            ..self.clone()
        })
    }

    fn scaled_args(&self, site: &Site) -> (f64, f64, Coords, f64, f64) {
        match self.dilation {
            None => (site.r, site.t, site.point.y.clone(), 1.0, 1.0),
            Some(Dilation { lambda, gamma }) => {
                let ly = lambda.powf(1.0 + gamma);
                (
                    lambda * site.r,
                    site.t + lambda.ln(),
                    site.point.y.iter().map(|v| v * ly).collect(),
                    lambda,
                    ly,
                )
            }
        }
    }

    /// Value and polar partials `(f, d_r f, d_phi f, grad_y f)`.
    pub fn jet(&self, site: &Site) -> FnJet {
        let (r, t, y, sr, sy) = self.scaled_args(site);
        let ky = self.y_dims;
        let mut out = FnJet {
            v: C64::new(0.0, 0.0),
            dr: C64::new(0.0, 0.0),
            dphi: C64::new(0.0, 0.0),
            dy: SmallVec::from_elem(C64::new(0.0, 0.0), ky),
        };
        for m in &self.modes {
            let pj = m.profile.jet(r, t, &y);
            if pj.v == 0.0 && pj.dr == 0.0 && pj.dy.iter().all(|d| *d == 0.0) {
                continue;
            }
            let phase = if m.k == 0 {
                m.amplitude
            } else {
                let (s, c) = (m.k as f64 * site.phi).sin_cos();
                m.amplitude * C64::new(c, s)
            };
            out.v += phase * pj.v;
            out.dr += phase * (pj.dr * sr);
            out.dphi += phase * C64::new(0.0, m.k as f64 * pj.v);
            for (o, d) in out.dy.iter_mut().zip(pj.dy.iter()) {
                *o += phase * (d * sy);
            }
        }
        out
    }

    pub fn evaluate(&self, site: &Site) -> C64 {
        let (r, t, y, _, _) = self.scaled_args(site);
        let mut v = C64::new(0.0, 0.0);
        for m in &self.modes {
            let g = m.profile.jet(r, t, &y).v;
            if g == 0.0 {
                continue;
            }
            let (s, c) = (m.k as f64 * site.phi).sin_cos();
            v += m.amplitude * C64::new(c, s) * g;
        }
        v
    }

    pub fn evaluate_point(&self, p: &Point) -> C64 {
        self.evaluate(&Site::from_point(p))
    }

    /// Angular average `f_0`, which is exactly the `k = 0` mode.
    pub fn mode0(&self, site: &Site) -> C64 {
        let (r, t, y, _, _) = self.scaled_args(site);
        self.modes
            .iter()
            .filter(|m| m.k == 0)
            .map(|m| m.amplitude * m.profile.jet(r, t, &y).v)
            .sum()
    }

    /// The angular average as a function: its `k = 0` modes, or zero when there are none.
    pub fn angular_average(&self) -> TestFunction {
        let mut modes: Vec<Mode> = self.modes.iter().filter(|m| m.k == 0).cloned().collect();
        if modes.is_empty() {
            modes.push(Mode {
                k: 0,
                amplitude: C64::new(0.0, 0.0),
                profile: self.modes[0].profile.clone(),
            });
        }
        TestFunction {
            modes,
            y_dims: self.y_dims,
            dilation: self.dilation,
        }
    }

    /// A bounded region containing the support.
    pub fn support(&self) -> Result<Support> {
        let mut total: Option<Support> = None;
        let mut r_breaks = Vec::new();
        for m in &self.modes {
            let s = m.profile.support(self.y_dims);
            r_breaks.extend([s.r_lo, s.r_hi]);
            total = Some(match total {
                None => s,
                Some(mut t) => {
                    t.r_lo = t.r_lo.min(s.r_lo);
                    t.r_hi = t.r_hi.max(s.r_hi);
                    for (a, b) in t.y.iter_mut().zip(s.y.iter()) {
                        a.0 = a.0.min(b.0);
                        a.1 = a.1.max(b.1);
                    }
                    t.r_focus = t.r_focus.or(s.r_focus);
                    t.y_scale = t.y_scale.or(s.y_scale);
                    t
                }
            });
        }
        let mut s = total.ok_or_else(|| HardyError::Domain("no modes".into()))?;
        if self.modes.len() > 1 {
            s.r_breaks = r_breaks.into_iter().filter(|&b| b > s.r_lo && b < s.r_hi).collect();
        }
        if let Some(Dilation { lambda, gamma }) = self.dilation {
            let ly = lambda.powf(1.0 + gamma);
            s.r_lo /= lambda;
            s.r_hi /= lambda;
            for b in s.y.iter_mut() {
                b.0 /= ly;
                b.1 /= ly;
            }
            s.r_breaks.iter_mut().for_each(|b| *b /= lambda);
            if let Some(f) = s.r_focus.as_mut() {
                f.t0 -= lambda.ln();
            }
            if let Some(v) = s.y_scale.as_mut() {
                *v /= ly;
            }
        }
        if !s.r_hi.is_finite() || s.y.iter().any(|b| !b.0.is_finite() || !b.1.is_finite()) {
            return Err(HardyError::Domain("test function does not have bounded support".into()));
        }
        if s.r_lo >= s.r_hi || s.y.iter().any(|b| b.0 >= b.1) {
            return Err(HardyError::Domain("test function support is empty".into()));
        }
        Ok(s)
    }
}

/// Cartesian gradient in `x` from the polar jet: for `m = 2`
/// `(cos f_r - sin f_phi / r, sin f_r + cos f_phi / r)`, otherwise `f_r x / r`.
pub fn grad_x(site: &Site, jet: &FnJet) -> CCoords {
    if site.point.x.len() == 2 {
        let inv_r = 1.0 / site.r;
        let mut g = CCoords::new();
        g.push(jet.dr * site.cos - jet.dphi * (site.sin * inv_r));
        g.push(jet.dr * site.sin + jet.dphi * (site.cos * inv_r));
        g
    } else {
        site.point.x.iter().map(|xi| jet.dr * (xi / site.r)).collect()
    }
}

/// Radial bump on `[r_lo, r_hi]` times a Gaussian-bump `y` profile on `[-y_half, y_half]^ky`.
pub fn make_bump(r_lo: f64, r_hi: f64, y_half: f64, y_dims: usize) -> Result<TestFunction> {
    let mut factors = vec![Factor::RBump { lo: r_lo, hi: r_hi }];
    if y_dims > 0 {
        let c: Coords = SmallVec::from_elem(0.0, y_dims);
        factors.push(Factor::YGaussian {
            center: c.clone(),
            sigma: y_half / 3.0,
        });
        factors.push(Factor::YBump { center: c, half: y_half });
    }
    TestFunction::radial(Profile::new(factors), y_dims)
}

/// `exp(-r^2 / 2)` on the plane, cut off smoothly between `r = 6` and `r = 8`.
pub fn gaussian_2d() -> TestFunction {
    TestFunction::radial(
        Profile::new(vec![
            Factor::RGaussian { sigma: 1.0 },
            Factor::ROuterCutoff { start: 6.0, end: 8.0 },
        ]),
        0,
    )
    .expect("static profile is valid")
}

/// Base of a trial family; the exponent of the family member is `c + epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum TrialBase {
    /// `|x|^(-(c + epsilon))`.
    InversePower { c: f64 },
    /// `|x|^(c + epsilon)`.
    Power { c: f64 },
    /// `|log|x||^(c + epsilon)` on one side of `|x| = 1`.
    LogPower { c: f64, side: LogSide },
    /// `rho^(c + epsilon)`.
    RhoPower { c: f64, gamma: f64 },
}

/// Trial family: base power times a smooth window whose log half-width
/// grows like `width / epsilon` (capped at `max_half_width`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialFamily {
    pub base: TrialBase,
    /// Window centre in the log variable of the base (`log r`, `log|log r|` or `log rho`).
    pub center: f64,
    pub width: f64,
    pub max_half_width: f64,
    /// Relative `|x|` floor below `rho_min` for `rho` windows.
    #[serde(default = "default_floor")]
    pub floor: f64,
}

impl TrialFamily {
    pub fn half_width(&self, epsilon: f64) -> f64 {
        (self.width / epsilon).min(self.max_half_width)
    }
}

/// Member of a trial family at regularisation `epsilon`.
pub fn make_trial(family: &TrialFamily, epsilon: f64, y_dims: usize) -> Result<TestFunction> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(HardyError::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let h = family.half_width(epsilon);
    let center = family.center;
    let factors = match family.base {
        TrialBase::InversePower { c } => vec![
            Factor::RPower { exponent: -(c + epsilon) },
            Factor::RLogWindow { center, half_width: h },
        ],
        TrialBase::Power { c } => vec![
            Factor::RPower { exponent: c + epsilon },
            Factor::RLogWindow { center, half_width: h },
        ],
        TrialBase::LogPower { c, side } => vec![
            Factor::LogAbsPower { exponent: c + epsilon },
            Factor::LogLogWindow {
                center,
                half_width: h,
                side,
            },
        ],
        TrialBase::RhoPower { c, gamma } => vec![
            Factor::RhoPower {
                exponent: c + epsilon,
                gamma,
            },
            Factor::RhoWindow {
                center,
                half_width: h,
                gamma,
                floor: family.floor,
            },
        ],
    };
    let is_rho = matches!(family.base, TrialBase::RhoPower { .. });
    if !is_rho && y_dims > 0 {
        return Err(HardyError::Domain("only rho trials have a y-dependence".into()));
    }
    TestFunction::radial(Profile::new(factors), y_dims)
}

/// Distribution of random test functions for property sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFunctionOptions {
    pub y_dims: usize,
    /// Largest `|k|`; ignored when `radial` is set.
    pub max_k: i32,
    pub radial: bool,
    pub real: bool,
    /// Inner radius range `[a, b]`.
    pub r_lo_range: (f64, f64),
    /// Range of the ratio `r_hi / r_lo`.
    pub ratio_range: (f64, f64),
}

impl Default for RandomFunctionOptions {
    fn default() -> Self {
        RandomFunctionOptions {
            y_dims: 1,
            max_k: 2,
            radial: false,
            real: false,
            r_lo_range: (0.25, 2.5),
            ratio_range: (1.5, 5.0),
        }
    }
}

fn random_profile<R: Rng>(rng: &mut R, o: &RandomFunctionOptions) -> Profile {
    let lo = rng.gen_range(o.r_lo_range.0..=o.r_lo_range.1);
    let hi = lo * rng.gen_range(o.ratio_range.0..=o.ratio_range.1);
    let mut factors = vec![Factor::RBump { lo, hi }];
    if rng.gen_bool(0.5) {
        factors.push(Factor::RPower {
            exponent: rng.gen_range(-1.0..=1.0),
        });
    }
    if o.y_dims > 0 {
        let center: Coords = (0..o.y_dims).map(|_| rng.gen_range(-0.5..=0.5)).collect();
        let sigma = rng.gen_range(0.5..=1.5);
        factors.push(Factor::YGaussian {
            center: center.clone(),
            sigma,
        });
        factors.push(Factor::YBump {
            center,
            half: 3.0 * sigma,
        });
    }
    Profile::new(factors)
}

/// Random test function; real functions come with conjugate-symmetric modes.
pub fn random_function<R: Rng>(rng: &mut R, o: &RandomFunctionOptions) -> TestFunction {
    let amp = |rng: &mut R| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    let mut modes = Vec::new();
    if o.radial {
        let a = if o.real {
            C64::new(rng.gen_range(0.2..=1.0), 0.0)
        } else {
            amp(rng)
        };
        modes.push(Mode {
            k: 0,
            amplitude: a,
            profile: random_profile(rng, o),
        });
    } else if o.real {
        let n = rng.gen_range(1..=o.max_k.max(0) as usize + 1);
        let mut ks: Vec<i32> = (0..=o.max_k.max(0)).collect();
        for _ in 0..n {
            let k = ks.swap_remove(rng.gen_range(0..ks.len()));
            let profile = random_profile(rng, o);
            if k == 0 {
                modes.push(Mode {
                    k,
                    amplitude: C64::new(rng.gen_range(-1.0..=1.0), 0.0),
                    profile,
                });
            } else {
                let a = amp(rng);
                modes.push(Mode {
                    k,
                    amplitude: a,
                    profile: profile.clone(),
                });
                modes.push(Mode {
                    k: -k,
                    amplitude: a.conj(),
                    profile,
                });
            }
        }
    } else {
        let mut ks: Vec<i32> = (-o.max_k.max(0)..=o.max_k.max(0)).collect();
        let n = rng.gen_range(1..=3usize).min(ks.len());
        for _ in 0..n {
            let k = ks.swap_remove(rng.gen_range(0..ks.len()));
            modes.push(Mode {
                k,
                amplitude: amp(rng),
                profile: random_profile(rng, o),
            });
        }
    }
    modes.sort_by_key(|m| m.k);
    TestFunction::new(modes, o.y_dims).expect("random profiles are valid")
}

/// `2 pi` as used by angular averages.
pub const TWO_PI: f64 = 2.0 * PI;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn site2(r: f64, phi: f64, y: &[f64]) -> Site {
        Site::polar(2, r, r.ln(), phi, y)
    }

    #[test]
    fn rbump_is_one_on_middle_half_and_zero_outside() {
        let f = Factor::RBump { lo: 1.0, hi: 16.0 };
        for r in [2.0, 3.0, 4.0, 6.0, 8.0] {
            assert_eq!(f.jet(r, f64::ln(r), &[]).v, 1.0);
        }
        for r in [0.9, 1.0, 16.0, 20.0] {
            assert_eq!(f.jet(r, f64::ln(r), &[]).v, 0.0);
        }
    }

    #[test]
    fn smooth_step_is_monotone() {
        let mut prev = 0.0;
        for i in 0..=100 {
            let (s, ds) = smooth_step(i as f64 / 100.0);
            assert!(s >= prev && ds >= 0.0);
            prev = s;
        }
        assert_relative_eq!(smooth_step(0.5).0, 0.5);
    }

    #[test]
    fn real_structure_detected() {
        let p = Profile::new(vec![Factor::RBump { lo: 1.0, hi: 2.0 }]);
        let a = C64::new(0.3, -0.7);
        let f = TestFunction::new(
            vec![
                Mode { k: 1, amplitude: a, profile: p.clone() },
                Mode { k: -1, amplitude: a.conj(), profile: p.clone() },
            ],
            0,
        )
        .unwrap();
        assert!(f.is_real());
        let v = f.evaluate(&site2(1.4, 0.8, &[]));
        assert!(v.im.abs() < 1e-15);
        let g = TestFunction::new(vec![Mode { k: 1, amplitude: a, profile: p }], 0).unwrap();
        assert!(!g.is_real());
        assert_eq!(g.require_real().unwrap_err().kind(), "realness");
    }

    #[test]
    fn duplicate_modes_rejected() {
        let p = Profile::new(vec![Factor::RBump { lo: 1.0, hi: 2.0 }]);
        let m = Mode { k: 1, amplitude: C64::new(1.0, 0.0), profile: p };
        assert!(TestFunction::new(vec![m.clone(), m], 0).is_err());
    }

    #[test]
    fn unbounded_support_rejected() {
        let f = TestFunction::radial(Profile::new(vec![Factor::RPower { exponent: 1.0 }]), 0).unwrap();
        assert_eq!(f.support().unwrap_err().kind(), "domain");
    }

    #[test]
    fn dilated_support_scales() {
        let f = make_bump(1.0, 2.0, 3.0, 1).unwrap();
        let g = f.dilated(2.0, 1.0).unwrap();
        let s = g.support().unwrap();
        assert_relative_eq!(s.r_lo, 0.5);
        assert_relative_eq!(s.r_hi, 1.0);
        assert_relative_eq!(s.y[0].1, 0.75);
        let site = site2(0.7, 0.3, &[0.2]);
        let big = site2(1.4, 0.3, &[0.8]);
        assert_relative_eq!(g.evaluate(&site).re, f.evaluate(&big).re, max_relative = 1e-14);
    }

    #[test]
    fn trial_support_and_focus() {
        let fam = TrialFamily {
            base: TrialBase::LogPower { c: -0.5, side: LogSide::Inner },
            center: -10.0,
            width: 0.36,
            max_half_width: 18.0,
            floor: 1e-12,
        };
        let f = make_trial(&fam, 0.1, 0).unwrap();
        let s = f.support().unwrap();
        assert!(s.r_hi < 1.0 && s.r_focus.is_some());
    }

    #[test]
    fn random_real_functions_are_real() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let o = RandomFunctionOptions { real: true, ..Default::default() };
            let f = random_function(&mut rng, &o);
            assert!(f.is_real());
            f.support().unwrap();
        }
    }
}
