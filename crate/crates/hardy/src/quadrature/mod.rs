//! Tensor-product quadrature over `(r, angle, y)`.
//!
//! The radial variable is integrated in `t = log r` with Gauss-Legendre
//! nodes, optionally through a `sinh` stretching that concentrates nodes
//! near a focus point. Angles use the uniform trapezoid rule, which is exact
//! for the trigonometric polynomials produced by finitely many Fourier
//! modes. The `y` block is a tensor product of one-dimensional rules.
//!
//! Sums are compensated and reduced in a fixed order, so results do not
//! depend on the number of worker threads.

mod oracle;
mod summation;

pub use oracle::{oracle_integrate, oracle_integrate_radial, OracleResolution};
pub use summation::{neumaier_sum, NeumaierSum, NeumaierVec};

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{HardyError, Result};
use crate::geometry::{sphere_measure, Point};

/// Below this, `r_lo = 0` supports are cut at `r_hi * AXIS_FLOOR`.
pub const AXIS_FLOOR: f64 = 1e-13;

/// Radial node placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialMap {
    /// Gauss-Legendre in `log r`.
    #[default]
    Log,
    /// Gauss-Legendre in `v` with `log r = t0 + delta sinh v`, using the support focus.
    LogSinh,
}

/// Node placement along each `y` coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YMap {
    /// Gauss-Legendre on the support box.
    Box,
    /// Gauss-Legendre in `v` with `y = delta sinh v`, `delta` the support's `y_scale`.
    /// Falls back to `Box` when the support has no scale.
    #[default]
    Sinh,
}

/// Resolution and node placement of the main engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub n_r: usize,
    pub r_map: RadialMap,
    pub n_phi: usize,
    pub n_y: usize,
    pub y_map: YMap,
    /// Also integrate with the independent midpoint oracle and report the discrepancy.
    pub oracle: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            n_r: 256,
            r_map: RadialMap::Log,
            n_phi: 32,
            n_y: 64,
            y_map: YMap::Sinh,
            oracle: false,
        }
    }
}

impl QuadratureSpec {
    pub fn new(n_r: usize, n_phi: usize, n_y: usize) -> Self {
        QuadratureSpec {
            n_r,
            n_phi,
            n_y,
            ..Default::default()
        }
    }

    /// Same spec with every node count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        QuadratureSpec {
            n_r: self.n_r * factor,
            n_phi: self.n_phi * factor,
            n_y: self.n_y * factor,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_r == 0 || self.n_phi == 0 || self.n_y == 0 {
            return Err(HardyError::Domain("quadrature node counts must be positive".into()));
        }
        Ok(())
    }
}

/// Stretching focus for the `LogSinh` radial map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Focus {
    pub t0: f64,
    pub delta: f64,
}

/// Compact region containing the support of an integrand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub r_lo: f64,
    pub r_hi: f64,
    pub y: SmallVec<[(f64, f64); 4]>,
    /// Focus in `log r` for `RadialMap::LogSinh`.
    pub r_focus: Option<Focus>,
    /// Smallest relevant `|y|` scale for `YMap::Sinh`.
    pub y_scale: Option<f64>,
    /// Radii where a summand's support starts or ends; the radial rule is split there.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub r_breaks: Vec<f64>,
}

impl Support {
    pub fn annulus(r_lo: f64, r_hi: f64) -> Self {
        Support {
            r_lo,
            r_hi,
            y: SmallVec::new(),
            r_focus: None,
            y_scale: None,
            r_breaks: Vec::new(),
        }
    }

    /// Lower radial limit actually used by the engine.
    pub fn effective_r_lo(&self) -> f64 {
        if self.r_lo > 0.0 {
            self.r_lo
        } else {
            self.r_hi * AXIS_FLOOR
        }
    }

    pub fn validate(&self, ky: usize) -> Result<()> {
        let ok = self.r_lo >= 0.0 && self.r_hi > self.r_lo && self.r_hi.is_finite();
        if !ok {
            return Err(HardyError::Domain(format!(
                "radial support [{}, {}] is not a bounded interval",
                self.r_lo, self.r_hi
            )));
        }
        if self.y.len() != ky {
            return Err(HardyError::Domain(format!(
                "support has {} y-dimensions, expected {ky}",
                self.y.len()
            )));
        }
        for &(a, b) in &self.y {
            if !(a < b && a.is_finite() && b.is_finite()) {
                return Err(HardyError::Domain(format!("y-support [{a}, {b}] is not bounded")));
            }
        }
        Ok(())
    }
}

/// Evaluation site: Cartesian point plus polar data of the `x` block.
#[derive(Debug, Clone)]
pub struct Site {
    pub r: f64,
    /// `log r`, carried exactly so that integrands near `r = 1` keep full precision.
    pub t: f64,
    pub phi: f64,
    pub cos: f64,
    pub sin: f64,
    pub point: Point,
}

impl Site {
    /// Site from Cartesian coordinates. The angle is the polar angle of `(x1, x2)` when `m = 2`.
    pub fn from_point(p: &Point) -> Self {
        let r = p.x_norm();
        let (phi, cos, sin) = match p.x.len() {
            2 if r > 0.0 => {
                let phi = p.x[1].atan2(p.x[0]);
                (phi, p.x[0] / r, p.x[1] / r)
            }
            1 if p.x[0] < 0.0 => (PI, -1.0, 0.0),
            _ => (0.0, 1.0, 0.0),
        };
        Site {
            r,
            t: r.ln(),
            phi,
            cos,
            sin,
            point: p.clone(),
        }
    }

    /// Site on the ray with angle `phi` (or direction sign for `m = 1`).
    pub fn polar(m: usize, r: f64, t: f64, phi: f64, y: &[f64]) -> Self {
        let (sin, cos) = phi.sin_cos();
        let mut x: SmallVec<[f64; 4]> = SmallVec::new();
        match m {
            1 => x.push(if cos < 0.0 { -r } else { r }),
            2 => {
                x.push(r * cos);
                x.push(r * sin);
            }
            _ => {
                x.push(r);
                x.extend(std::iter::repeat_n(0.0, m - 1));
            }
        }
        Site {
            r,
            t,
            phi,
            cos,
            sin,
            point: Point {
                x,
                y: y.iter().copied().collect(),
            },
        }
    }
}

/// Radial node: `log r`, `r` and the weight for `dr`.
#[derive(Debug, Clone, Copy)]
pub struct RadialNode {
    pub t: f64,
    pub r: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy)]
struct AngularNode {
    phi: f64,
    w: f64,
}

fn rule_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, sorted by node.
pub fn gauss_legendre(n: usize) -> Arc<Vec<(f64, f64)>> {
    let mut cache = rule_cache().lock().expect("rule cache poisoned");
    cache
        .entry(n)
        .or_insert_with(|| {
            let n = NonZeroUsize::new(n).expect("rule size must be positive");
            let rule = gauss_quad::GaussLegendre::new(n);
            let mut pairs = rule.as_node_weight_pairs().to_vec();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            Arc::new(pairs)
        })
        .clone()
}

/// Gauss-Legendre nodes mapped to `[a, b]`.
fn gl_on(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre(n)
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Fewest nodes given to one panel of a composite rule.
const MIN_PANEL_NODES: usize = 8;

/// Composite Gauss-Legendre on `[a, b]` split at the interior `cuts`. The `n` nodes are
/// shared in proportion to panel length, with at least [`MIN_PANEL_NODES`] per panel.
fn composite_gl(a: f64, b: f64, cuts: impl IntoIterator<Item = f64>, n: usize) -> Vec<(f64, f64)> {
    let mut edges: Vec<f64> = cuts.into_iter().filter(|&c| c > a && c < b).collect();
    if edges.is_empty() {
        return gl_on(a, b, n);
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges.insert(0, a);
    edges.push(b);
    let floor = MIN_PANEL_NODES.min(n);
    edges
        .windows(2)
        .flat_map(|w| {
            let k = ((n as f64 * (w[1] - w[0]) / (b - a)).round() as usize).max(floor);
            gl_on(w[0], w[1], k)
        })
        .collect()
}

/// Radial nodes for `[r_lo, r_hi]` under `map`.
pub fn radial_nodes(support: &Support, n: usize, map: RadialMap) -> Vec<RadialNode> {
    let t_lo = support.effective_r_lo().ln();
    let t_hi = support.r_hi.ln();
    let focus = match (map, support.r_focus) {
        (RadialMap::LogSinh, Some(f)) => Some(f),
        _ => None,
    };
    match focus {
        None => composite_gl(t_lo, t_hi, support.r_breaks.iter().map(|b| b.ln()), n)
            .into_iter()
            .map(|(t, w)| {
                let r = t.exp();
                RadialNode { t, r, w: w * r }
            })
            .collect(),
        Some(Focus { t0, delta }) => {
            let va = ((t_lo - t0) / delta).asinh();
            let vb = ((t_hi - t0) / delta).asinh();
            let cuts = support.r_breaks.iter().map(|b| ((b.ln() - t0) / delta).asinh());
            composite_gl(va, vb, cuts, n)
                .into_iter()
                .map(|(v, w)| {
                    let t = t0 + delta * v.sinh();
                    let r = t.exp();
                    RadialNode {
                        t,
                        r,
                        w: w * delta * v.cosh() * r,
                    }
                })
                .collect()
        }
    }
}

fn y_nodes_1d(lo: f64, hi: f64, n: usize, map: YMap, scale: Option<f64>) -> Vec<(f64, f64)> {
    match (map, scale) {
        (YMap::Sinh, Some(delta)) => {
            let va = (lo / delta).asinh();
            let vb = (hi / delta).asinh();
            gl_on(va, vb, n)
                .into_iter()
                .map(|(v, w)| (delta * v.sinh(), w * delta * v.cosh()))
                .collect()
        }
        _ => gl_on(lo, hi, n),
    }
}

/// Tensor grid over `R^m x R^ky` restricted to a support.
#[derive(Debug, Clone)]
pub struct Grid {
    m: usize,
    ky: usize,
    radial: Vec<RadialNode>,
    angular: Vec<AngularNode>,
    /// Flattened `y` coordinates, `ky` per node.
    y_pts: Vec<f64>,
    y_w: Vec<f64>,
}

impl Grid {
    /// Builds the grid. For `m >= 3` the integrand must be radial in `x`:
    /// a single direction carries the full sphere measure.
    pub fn new(m: usize, ky: usize, support: &Support, spec: &QuadratureSpec) -> Result<Grid> {
        spec.validate()?;
        support.validate(ky)?;
        if m == 0 {
            return Err(HardyError::Domain("x-dimension must be positive".into()));
        }
        let mf = m as f64;
        let radial = radial_nodes(support, spec.n_r, spec.r_map)
            .into_iter()
            .map(|n| RadialNode {
                w: n.w * n.r.powf(mf - 1.0),
                ..n
            })
            .collect();
        let angular = match m {
            1 => vec![AngularNode { phi: 0.0, w: 1.0 }, AngularNode { phi: PI, w: 1.0 }],
            2 => (0..spec.n_phi)
                .map(|j| AngularNode {
                    phi: 2.0 * PI * j as f64 / spec.n_phi as f64,
                    w: 2.0 * PI / spec.n_phi as f64,
                })
                .collect(),
            _ => vec![AngularNode {
                phi: 0.0,
                w: sphere_measure(mf),
            }],
        };
        let per_dim: Vec<Vec<(f64, f64)>> = support
            .y
            .iter()
            .map(|&(lo, hi)| y_nodes_1d(lo, hi, spec.n_y, spec.y_map, support.y_scale))
            .collect();
        let mut y_pts = Vec::new();
        let mut y_w = Vec::new();
        let total: usize = per_dim.iter().map(|d| d.len()).product();
        for flat in 0..total {
            let mut rem = flat;
            let mut w = 1.0;
            for d in &per_dim {
                let (y, wy) = d[rem % d.len()];
                rem /= d.len();
                y_pts.push(y);
                w *= wy;
            }
            y_w.push(w);
        }
        Ok(Grid {
            m,
            ky,
            radial,
            angular,
            y_pts,
            y_w,
        })
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.angular.len() * self.y_w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Integrates a vector-valued density. Non-finite values abort with
    /// `NonFinite`, reporting the offending site.
    pub fn integrate<const N: usize, F>(&self, density: F) -> Result<[f64; N]>
    where
        F: Fn(&Site) -> [f64; N] + Sync,
    {
        let partials: Vec<Result<[f64; N]>> = self
            .radial
            .par_iter()
            .map(|rn| {
                let mut acc = NeumaierVec::<N>::default();
                for an in &self.angular {
                    for (iy, &wy) in self.y_w.iter().enumerate() {
                        let y = &self.y_pts[iy * self.ky..(iy + 1) * self.ky];
                        let site = Site::polar(self.m, rn.r, rn.t, an.phi, y);
                        let v = density(&site);
                        if v.iter().any(|c| !c.is_finite()) {
                            return Err(HardyError::NonFinite(format!(
                                "integrand at r = {:e}, phi = {}, y = {:?}",
                                rn.r, an.phi, y
                            )));
                        }
                        acc.add_scaled(&v, an.w * wy);
                    }
                }
                let mut out = acc.value();
                for o in &mut out {
                    *o *= rn.w;
                }
                Ok(out)
            })
            .collect();
        let mut total = NeumaierVec::<N>::default();
        for p in partials {
            total.add_scaled(&p?, 1.0);
        }
        Ok(total.value())
    }
}

/// Integrates a complex density over the support with the main engine.
pub fn integrate_polar<F>(
    m: usize,
    ky: usize,
    support: &Support,
    spec: &QuadratureSpec,
    density: F,
) -> Result<Complex64>
where
    F: Fn(&Site) -> Complex64 + Sync,
{
    let grid = Grid::new(m, ky, support, spec)?;
    let [re, im] = grid.integrate(|s| {
        let z = density(s);
        [z.re, z.im]
    })?;
    Ok(Complex64::new(re, im))
}

/// `|S^(Q-1)| * int density(r) r^(Q-1) dr` for radial densities in homogeneous dimension `Q`.
pub fn integrate_radial<const N: usize, F>(
    support: &Support,
    hom_dim: f64,
    spec: &QuadratureSpec,
    density: F,
) -> Result<[f64; N]>
where
    F: Fn(&RadialNode) -> [f64; N],
{
    spec.validate()?;
    support.validate(0)?;
    if !(hom_dim > 0.0) {
        return Err(HardyError::Domain(format!("homogeneous dimension must be positive, got {hom_dim}")));
    }
    let mut acc = NeumaierVec::<N>::default();
    for rn in radial_nodes(support, spec.n_r, spec.r_map) {
        let v = density(&rn);
        if v.iter().any(|c| !c.is_finite()) {
            return Err(HardyError::NonFinite(format!("radial integrand at r = {:e}", rn.r)));
        }
        acc.add_scaled(&v, rn.w * rn.r.powf(hom_dim - 1.0));
    }
    let mut out = acc.value();
    let s = sphere_measure(hom_dim);
    for o in &mut out {
        *o *= s;
    }
    Ok(out)
}

/// One level of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceLevel {
    pub n_r: usize,
    pub n_phi: usize,
    pub n_y: usize,
    pub value: f64,
    /// `|value - previous value|`, absent on the first level.
    pub delta: Option<f64>,
}

/// Values of an integral across a resolution schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub levels: Vec<ConvergenceLevel>,
    /// `log(delta_{i-1} / delta_i) / log(n_i / n_{i-1})` from the last three levels.
    pub observed_order: Option<f64>,
    /// Final relative change is below `rel_tol` and the changes did not grow.
    pub converged: bool,
}

/// Evaluates `integral` at each spec and summarises the convergence.
pub fn convergence_study<F>(
    specs: &[QuadratureSpec],
    rel_tol: f64,
    integral: F,
) -> Result<ConvergenceReport>
where
    F: Fn(&QuadratureSpec) -> Result<f64>,
{
    let mut levels: Vec<ConvergenceLevel> = Vec::with_capacity(specs.len());
    for spec in specs {
        let value = integral(spec)?;
        let delta = levels.last().map(|l| (value - l.value).abs());
        levels.push(ConvergenceLevel {
            n_r: spec.n_r,
            n_phi: spec.n_phi,
            n_y: spec.n_y,
            value,
            delta,
        });
    }
    let deltas: Vec<(usize, f64)> = levels
        .iter()
        .filter_map(|l| l.delta.map(|d| (l.n_r, d)))
        .collect();
    let observed_order = match deltas.as_slice() {
        [.., (n0, d0), (n1, d1)] if *d0 > 0.0 && *d1 > 0.0 && n1 > n0 => {
            Some((d0 / d1).ln() / (*n1 as f64 / *n0 as f64).ln())
        }
        _ => None,
    };
    let converged = match (levels.last(), deltas.last()) {
        (Some(last), Some(&(_, d))) => {
            let non_growing = deltas.windows(2).all(|w| w[1].1 <= w[0].1 || w[1].1 <= rel_tol * last.value.abs());
            d <= rel_tol * last.value.abs().max(f64::MIN_POSITIVE) && non_growing
        }
        _ => false,
    };
    Ok(ConvergenceReport {
        levels,
        observed_order,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let nodes = gl_on(0.0, 2.0, 5);
        let v: f64 = nodes.iter().map(|(x, w)| w * x.powi(9)).sum();
        assert_relative_eq!(v, 2f64.powi(10) / 10.0, max_relative = 1e-13);
    }

    #[test]
    fn annulus_area() {
        let s = Support::annulus(1.0, 2.0);
        let z = integrate_polar(2, 0, &s, &QuadratureSpec::new(32, 4, 1), |_| Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(z.re, 3.0 * PI, max_relative = 1e-13);
    }

    #[test]
    fn shell_volume_in_three_dimensions() {
        let s = Support::annulus(1.0, 2.0);
        let grid = Grid::new(3, 0, &s, &QuadratureSpec::new(32, 4, 1)).unwrap();
        let [v] = grid.integrate(|_| [1.0]).unwrap();
        assert_relative_eq!(v, 4.0 * PI / 3.0 * 7.0, max_relative = 1e-13);
    }

    #[test]
    fn trig_polynomial_integrated_exactly_in_angle() {
        let s = Support::annulus(1.0, 2.0);
        let grid = Grid::new(2, 0, &s, &QuadratureSpec::new(16, 8, 1)).unwrap();
        let [v] = grid.integrate(|st| [st.cos.powi(2) * st.sin.powi(4)]).unwrap();
        // int cos^2 sin^4 dphi = pi / 8
        assert_relative_eq!(v, PI / 8.0 * 1.5, max_relative = 1e-13);
    }

    #[test]
    fn sinh_maps_preserve_integrals() {
        let mut s = Support::annulus(0.5, 4.0);
        s.r_focus = Some(Focus { t0: 0.0, delta: 1e-3 });
        s.y.push((-3.0, 5.0));
        s.y_scale = Some(1e-2);
        let spec = QuadratureSpec {
            r_map: RadialMap::LogSinh,
            y_map: YMap::Sinh,
            ..QuadratureSpec::new(200, 4, 200)
        };
        let grid = Grid::new(2, 1, &s, &spec).unwrap();
        let [v] = grid.integrate(|st| [st.point.y[0].powi(2)]).unwrap();
        let expected = PI * (16.0 - 0.25) * (125.0 + 27.0) / 3.0;
        assert_relative_eq!(v, expected, max_relative = 1e-10);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let s = Support::annulus(1.0, 2.0);
        let grid = Grid::new(2, 0, &s, &QuadratureSpec::new(8, 4, 1)).unwrap();
        let err = grid.integrate(|_| [f64::NAN]).unwrap_err();
        assert_eq!(err.kind(), "non_finite");
    }

    #[test]
    fn discontinuous_density_is_flagged() {
        let s = Support::annulus(1.0, 3.0);
        let specs: Vec<_> = [8, 16, 32, 64].iter().map(|&n| QuadratureSpec::new(n, 4, 1)).collect();
        let rep = convergence_study(&specs, 1e-8, |spec| {
            let grid = Grid::new(2, 0, &s, spec)?;
            Ok(grid.integrate(|st| [if st.r < 1.7 { 1.0 } else { 0.0 }])?[0])
        })
        .unwrap();
        assert!(!rep.converged);
    }

    #[test]
    fn smooth_density_converges() {
        let s = Support::annulus(1.0, 3.0);
        let specs: Vec<_> = [8, 16, 32, 64].iter().map(|&n| QuadratureSpec::new(n, 4, 1)).collect();
        let rep = convergence_study(&specs, 1e-8, |spec| {
            let grid = Grid::new(2, 0, &s, spec)?;
            Ok(grid.integrate(|st| [(-st.r).exp()])?[0])
        })
        .unwrap();
        assert!(rep.converged);
    }
}
