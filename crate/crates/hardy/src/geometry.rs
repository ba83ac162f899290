//! Grushin space geometry: the quasi-norm `rho`, its Grushin gradient,
//! anisotropic dilations and the power weights `B`.
//!
//! Points are split as `(x, y)` with `x` in `R^m` and `y` in `R^k`. The
//! Grushin gradient of a scalar `u` is `(grad_x u, |x|^gamma grad_y u)`.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{HardyError, Result};

/// Small inline vector used for coordinates and gradients.
pub type Coords = SmallVec<[f64; 4]>;

/// A point `(x, y)` of `R^m x R^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: Coords,
    pub y: Coords,
}

impl Point {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        Point {
            x: x.iter().copied().collect(),
            y: y.iter().copied().collect(),
        }
    }

    /// Euclidean norm of the `x` block.
    pub fn x_norm(&self) -> f64 {
        norm(&self.x)
    }

    /// Squared Euclidean norm of the `y` block.
    pub fn y_norm_sq(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum()
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// `base^e` with the convention `0^0 = 1`.
#[inline]
pub(crate) fn pow0(base: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        base.powf(e)
    }
}

/// Exponents `(alpha1, alpha2)` of the weight `rho^alpha1 |grad_gamma rho|^alpha2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightExponents {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl WeightExponents {
    pub fn new(alpha1: f64, alpha2: f64) -> Self {
        WeightExponents { alpha1, alpha2 }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    m: usize,
    k: usize,
    gamma: f64,
}

/// Grushin space `R^m x R^k` with parameter `gamma >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry")]
pub struct GrushinGeometry {
    m: usize,
    k: usize,
    gamma: f64,
}

impl TryFrom<RawGeometry> for GrushinGeometry {
    type Error = HardyError;
    fn try_from(raw: RawGeometry) -> Result<Self> {
        GrushinGeometry::new(raw.m, raw.k, raw.gamma)
    }
}

impl GrushinGeometry {
    pub fn new(m: usize, k: usize, gamma: f64) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(HardyError::Domain(format!(
                "dimensions must be positive (m = {m}, k = {k})"
            )));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(HardyError::Domain(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(GrushinGeometry { m, k, gamma })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Homogeneous dimension `Q = m + (1 + gamma) k`.
    pub fn hom_dim(&self) -> f64 {
        self.m as f64 + (1.0 + self.gamma) * self.k as f64
    }

    fn check(&self, p: &Point) -> Result<()> {
        if p.x.len() != self.m || p.y.len() != self.k {
            return Err(HardyError::Domain(format!(
                "point has dimensions ({}, {}), geometry expects ({}, {})",
                p.x.len(),
                p.y.len(),
                self.m,
                self.k
            )));
        }
        if p.x.iter().chain(p.y.iter()).any(|v| !v.is_finite()) {
            return Err(HardyError::NonFinite("point coordinates".into()));
        }
        Ok(())
    }

    /// `rho` from `r = |x|` and `|y|^2`.
    #[inline]
    pub fn rho_ry(&self, r: f64, y_sq: f64) -> f64 {
        rho_ry(self.gamma, r, y_sq)
    }

    /// Quasi-norm `rho = (|x|^(2(1+gamma)) + (1+gamma)^2 |y|^2)^(1/(2(1+gamma)))`.
    pub fn rho(&self, p: &Point) -> Result<f64> {
        self.check(p)?;
        let rho = self.rho_ry(p.x_norm(), p.y_norm_sq());
        if rho == 0.0 {
            return Err(HardyError::Origin);
        }
        Ok(rho)
    }

    /// Euclidean gradient `(grad_x rho, grad_y rho)`, concatenated.
    pub fn euclid_grad_rho(&self, p: &Point) -> Result<SmallVec<[f64; 8]>> {
        let rho = self.rho(p)?;
        let g = self.gamma;
        let r = p.x_norm();
        let denom = rho.powf(2.0 * g + 1.0);
        let rx = pow0(r, 2.0 * g);
        let mut out = SmallVec::new();
        for &xi in &p.x {
            out.push(xi * rx / denom);
        }
        for &yj in &p.y {
            out.push((1.0 + g) * yj / denom);
        }
        Ok(out)
    }

    /// Grushin gradient `(grad_x rho, |x|^gamma grad_y rho)`.
    pub fn grad_rho(&self, p: &Point) -> Result<SmallVec<[f64; 8]>> {
        let mut g = self.euclid_grad_rho(p)?;
        let s = pow0(p.x_norm(), self.gamma);
        for v in g.iter_mut().skip(self.m) {
            *v *= s;
        }
        Ok(g)
    }

    /// `|grad_gamma rho| = |x|^gamma / rho^gamma`.
    pub fn grad_norm(&self, p: &Point) -> Result<f64> {
        let rho = self.rho(p)?;
        Ok(pow0(p.x_norm() / rho, self.gamma))
    }

    /// Dilation `(lambda x, lambda^(1+gamma) y)`.
    pub fn dilate(&self, lambda: f64, p: &Point) -> Result<Point> {
        self.check(p)?;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(HardyError::Domain(format!("dilation factor must be positive, got {lambda}")));
        }
        let ly = lambda.powf(1.0 + self.gamma);
        Ok(Point {
            x: p.x.iter().map(|v| lambda * v).collect(),
            y: p.y.iter().map(|v| ly * v).collect(),
        })
    }

    /// Weight `B = rho^alpha1 |grad_gamma rho|^alpha2 = r^(alpha2 gamma) rho^(alpha1 - alpha2 gamma)`.
    pub fn weight_b(&self, exps: WeightExponents, p: &Point) -> Result<f64> {
        let rho = self.rho(p)?;
        let r = p.x_norm();
        let e = exps.alpha2 * self.gamma;
        if r == 0.0 && e < 0.0 {
            return Err(HardyError::SingularWeight(format!(
                "|x|^{e} at x = 0"
            )));
        }
        Ok(self.weight_b_ry(exps, r, rho))
    }

    #[inline]
    pub fn weight_b_ry(&self, exps: WeightExponents, r: f64, rho: f64) -> f64 {
        let e = exps.alpha2 * self.gamma;
        pow0(r, e) * pow0(rho, exps.alpha1 - e)
    }

    /// `|grad_gamma rho|^2 / rho^2 = r^(2 gamma) / rho^(2 gamma + 2)`, evaluated as `(r/rho)^(2 gamma) / rho^2`.
    #[inline]
    pub fn hardy_weight_ry(&self, r: f64, rho: f64) -> f64 {
        pow0(r / rho, 2.0 * self.gamma) / (rho * rho)
    }
}

#[inline]
pub(crate) fn rho_ry(gamma: f64, r: f64, y_sq: f64) -> f64 {
    let a = 2.0 * (1.0 + gamma);
    let s = r.powf(a) + (1.0 + gamma) * (1.0 + gamma) * y_sq;
    s.powf(1.0 / a)
}

/// Surface measure of the unit sphere `S^(d-1)`, `2 pi^(d/2) / Gamma(d/2)`, for real `d > 0`.
pub fn sphere_measure(d: f64) -> f64 {
    2.0 * std::f64::consts::PI.powf(d / 2.0) / libm::tgamma(d / 2.0)
}
