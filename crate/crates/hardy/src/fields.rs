//! Magnetic potentials and twisted gradients applied to test functions.
//!
//! Every operator has a public form taking a Cartesian [`Point`] and a
//! `*_at` form taking a prepared [`Site`] and [`FnJet`], used inside
//! integrands.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{HardyError, Result};
use crate::functions::{grad_x, CCoords, FnJet, TestFunction, C64};
use crate::geometry::{pow0, GrushinGeometry, Point};
use crate::quadrature::Site;

/// Small inline real vector for potentials.
pub type Field = SmallVec<[f64; 8]>;

/// Quasi-norm data at a site.
#[derive(Debug, Clone, Copy)]
pub struct RhoData {
    pub rho: f64,
    /// `d_r rho / rho = r^(2 gamma + 1) / rho^(2 gamma + 2)`.
    pub a: f64,
    /// `(1 + gamma) / rho^(2 gamma + 2)`, so that `d_{y_j} rho / rho = y_fac * y_j`.
    pub y_fac: f64,
    /// `|x|^gamma`.
    pub r_gamma: f64,
}

impl RhoData {
    pub fn at(geom: &GrushinGeometry, site: &Site) -> RhoData {
        let g = geom.gamma();
        let rho = geom.rho_ry(site.r, site.point.y_norm_sq());
        RhoData {
            rho,
            a: pow0(site.r / rho, 2.0 * g + 1.0) / rho,
            y_fac: (1.0 + g) / rho.powf(2.0 * g + 2.0),
            r_gamma: pow0(site.r, g),
        }
    }
}

fn check_site(geom: &GrushinGeometry, f: &TestFunction, p: &Point) -> Result<Site> {
    geom.rho(p)?;
    f.check_space(geom.m(), geom.k())?;
    let site = Site::from_point(p);
    if site.r == 0.0 && !f.is_radial() {
        return Err(HardyError::Domain("angular modes are undefined on x = 0".into()));
    }
    Ok(site)
}

/// Grushin potential `A = grad_gamma rho / rho`.
pub fn grushin_potential(geom: &GrushinGeometry, p: &Point) -> Result<Field> {
    geom.rho(p)?;
    let site = Site::from_point(p);
    Ok(grushin_potential_at(&site, &RhoData::at(geom, &site)))
}

pub fn grushin_potential_at(site: &Site, rd: &RhoData) -> Field {
    let mut out = Field::new();
    let r = site.r;
    for &xi in &site.point.x {
        out.push(if r > 0.0 { xi / r * rd.a } else { 0.0 });
    }
    for &yj in &site.point.y {
        out.push(rd.r_gamma * rd.y_fac * yj);
    }
    out
}

fn require_m2(geom: &GrushinGeometry) -> Result<()> {
    if geom.m() != 2 {
        return Err(HardyError::Domain(format!(
            "the Aharonov-Bohm type field needs m = 2, got m = {}",
            geom.m()
        )));
    }
    Ok(())
}

/// Aharonov-Bohm type potential
/// `(-d_{x2} rho / rho, d_{x1} rho / rho, -s grad_y rho / rho, s grad_y rho / rho)`, `s = |x|^gamma / sqrt 2`.
pub fn ab_potential(geom: &GrushinGeometry, p: &Point) -> Result<Field> {
    require_m2(geom)?;
    geom.rho(p)?;
    let site = Site::from_point(p);
    Ok(ab_potential_at(&site, &RhoData::at(geom, &site)))
}

pub fn ab_potential_at(site: &Site, rd: &RhoData) -> Field {
    let mut out = Field::new();
    out.push(-site.sin * rd.a);
    out.push(site.cos * rd.a);
    let s = rd.r_gamma * FRAC_1_SQRT_2 * rd.y_fac;
    for &yj in &site.point.y {
        out.push(-s * yj);
    }
    for &yj in &site.point.y {
        out.push(s * yj);
    }
    out
}

/// Grushin gradient `(grad_x f, |x|^gamma grad_y f)`.
pub fn grushin_grad(geom: &GrushinGeometry, f: &TestFunction, p: &Point) -> Result<CCoords> {
    let site = check_site(geom, f, p)?;
    Ok(grushin_grad_at(geom, &site, &f.jet(&site)))
}

pub fn grushin_grad_at(geom: &GrushinGeometry, site: &Site, jet: &FnJet) -> CCoords {
    let mut g = grad_x(site, jet);
    let s = pow0(site.r, geom.gamma());
    g.extend(jet.dy.iter().map(|d| d * s));
    g
}

/// Tilde gradient `(d_{x1} f, d_{x2} f, s grad_y f, s grad_y f)`, `s = |x|^gamma / sqrt 2`.
pub fn tilde_grad(geom: &GrushinGeometry, f: &TestFunction, p: &Point) -> Result<CCoords> {
    require_m2(geom)?;
    let site = check_site(geom, f, p)?;
    Ok(tilde_grad_at(geom, &site, &f.jet(&site)))
}

pub fn tilde_grad_at(geom: &GrushinGeometry, site: &Site, jet: &FnJet) -> CCoords {
    let mut g = grad_x(site, jet);
    let s = pow0(site.r, geom.gamma()) * FRAC_1_SQRT_2;
    g.extend(jet.dy.iter().map(|d| d * s));
    g.extend(jet.dy.iter().map(|d| d * s));
    g
}

/// Which magnetic gradient to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// `grad_gamma + i beta A`.
    Grushin,
    /// `tilde grad + i beta tilde A` (requires `m = 2`).
    Tilde,
}

/// Magnetic gradient `(D + i beta P) f` for the chosen kind.
pub fn magnetic_grad(
    geom: &GrushinGeometry,
    kind: PotentialKind,
    flux: f64,
    f: &TestFunction,
    p: &Point,
) -> Result<CCoords> {
    if kind == PotentialKind::Tilde {
        require_m2(geom)?;
    }
    let site = check_site(geom, f, p)?;
    Ok(magnetic_grad_at(geom, kind, flux, &site, &f.jet(&site), &RhoData::at(geom, &site)))
}

pub fn magnetic_grad_at(
    geom: &GrushinGeometry,
    kind: PotentialKind,
    flux: f64,
    site: &Site,
    jet: &FnJet,
    rd: &RhoData,
) -> CCoords {
    let (mut g, pot) = match kind {
        PotentialKind::Grushin => (grushin_grad_at(geom, site, jet), grushin_potential_at(site, rd)),
        PotentialKind::Tilde => (tilde_grad_at(geom, site, jet), ab_potential_at(site, rd)),
    };
    for (gi, ai) in g.iter_mut().zip(pot.iter()) {
        *gi += C64::new(0.0, flux * ai) * jet.v;
    }
    g
}

/// Squared modulus of a complex vector.
pub fn norm_sq(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Radial function of one variable, `psi(|z|)` or `psi_j(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Scalar1D {
    /// `value`.
    Constant { value: f64 },
    /// `slope * s`.
    Linear { slope: f64 },
    /// `coef * |s|^exponent`.
    Power { coef: f64, exponent: f64 },
}

impl Scalar1D {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Scalar1D::Constant { value } => value,
            Scalar1D::Linear { slope } => slope * s,
            Scalar1D::Power { coef, exponent } => coef * pow0(s.abs(), exponent),
        }
    }

    /// The classical Landau choice `psi = 1/2`.
    pub fn landau() -> Self {
        Scalar1D::Constant { value: 0.5 }
    }
}

/// Twisted gradient on the plane `z = (x, y)`:
/// `(d_x f - i psi(|z|) y f, d_y f + i psi(|z|) x f)`.
pub fn twisted_grad_psi(psi: &Scalar1D, f: &TestFunction, p: &Point) -> Result<[C64; 2]> {
    if p.x.len() != 2 || !p.y.is_empty() || f.y_dims() != 0 {
        return Err(HardyError::Domain("twisted gradient lives on the plane (m = 2, k = 0)".into()));
    }
    let site = Site::from_point(p);
    if site.r == 0.0 {
        return Err(HardyError::Origin);
    }
    Ok(twisted_grad_at(psi, &site, &f.jet(&site)))
}

pub fn twisted_grad_at(psi: &Scalar1D, site: &Site, jet: &FnJet) -> [C64; 2] {
    let g = grad_x(site, jet);
    let s = psi.eval(site.r);
    let (x, y) = (site.point.x[0], site.point.x[1]);
    [
        g[0] - C64::new(0.0, s * y) * jet.v,
        g[1] + C64::new(0.0, s * x) * jet.v,
    ]
}

/// Real twisted gradient on `C^n = R^(2n)`, coordinates `(x_1..x_n, y_1..y_n)`:
/// `(d_{x_j} f - (i/2) y_j f, d_{y_j} f + (i/2) x_j f)`.
pub fn landau_grad_at(site: &Site, jet: &FnJet) -> CCoords {
    let g = grad_x(site, jet);
    let x = &site.point.x;
    let n = x.len() / 2;
    let mut out = CCoords::new();
    for j in 0..n {
        out.push(g[j] - C64::new(0.0, 0.5 * x[n + j]) * jet.v);
    }
    for j in 0..n {
        out.push(g[n + j] + C64::new(0.0, 0.5 * x[j]) * jet.v);
    }
    out
}

/// Potentials `psi_{1,j}(y_j)` and `psi_{2,j}(x_j)` of the constant-field gradient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantFieldPotentials {
    pub psi1: Vec<Scalar1D>,
    pub psi2: Vec<Scalar1D>,
}

impl ConstantFieldPotentials {
    /// `psi_{1,j}(s) = -s/2`, `psi_{2,j}(s) = s/2`.
    pub fn symmetric(n: usize) -> Self {
        ConstantFieldPotentials {
            psi1: vec![Scalar1D::Linear { slope: -0.5 }; n],
            psi2: vec![Scalar1D::Linear { slope: 0.5 }; n],
        }
    }

    fn check(&self, geom: &GrushinGeometry) -> Result<()> {
        if geom.m() != geom.k() || self.psi1.len() != geom.m() || self.psi2.len() != geom.m() {
            return Err(HardyError::Domain(
                "constant-field gradient needs m = k = n and n potentials of each kind".into(),
            ));
        }
        Ok(())
    }
}

/// `(i d_{x_j} f + psi_{1,j}(y_j) f, i |x|^gamma d_{y_j} f + psi_{2,j}(x_j) f)`.
pub fn constant_field_grad(
    geom: &GrushinGeometry,
    pots: &ConstantFieldPotentials,
    f: &TestFunction,
    p: &Point,
) -> Result<CCoords> {
    pots.check(geom)?;
    let site = check_site(geom, f, p)?;
    Ok(constant_field_grad_at(geom, pots, &site, &f.jet(&site)))
}

pub fn constant_field_grad_at(
    geom: &GrushinGeometry,
    pots: &ConstantFieldPotentials,
    site: &Site,
    jet: &FnJet,
) -> CCoords {
    let i = C64::new(0.0, 1.0);
    let gx = grad_x(site, jet);
    let s = pow0(site.r, geom.gamma());
    let x = &site.point.x;
    let y = &site.point.y;
    let mut out = CCoords::new();
    for j in 0..x.len() {
        out.push(i * gx[j] + jet.v * pots.psi1[j].eval(y[j]));
    }
    for j in 0..y.len() {
        out.push(i * s * jet.dy[j] + jet.v * pots.psi2[j].eval(x[j]));
    }
    out
}
