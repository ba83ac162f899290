//! Independent reference integrator.
//!
//! Composite midpoint rule on a uniform grid in `(r, phi, y)`, with one
//! Richardson step in the radial direction to remove the `h^2` term that
//! appears when the support touches `r = 0`. Radial midpoints are uniform in
//! `r` when the support reaches the axis, otherwise uniform in `log r` (or in
//! the stretched variable of the support's focus). When the support carries a
//! `y_scale`, the `y` midpoints are uniform in `asinh(y / y_scale)`.
//! It shares no rule or summation code with the main engine.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Focus, Site, Support};
use crate::error::{HardyError, Result};

/// Node counts of the oracle grid (the fine Richardson pass doubles `n_r`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleResolution {
    pub n_r: usize,
    pub n_phi: usize,
    pub n_y: usize,
    /// Per-axis `y` count when there are two or more `y` dimensions.
    pub n_y_multi: usize,
}

impl Default for OracleResolution {
    fn default() -> Self {
        OracleResolution {
            n_r: 400,
            n_phi: 24,
            n_y: 96,
            n_y_multi: 48,
        }
    }
}

/// Kahan summation, kept separate from the engine's Neumaier sums.
#[derive(Clone, Copy, Default)]
struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
}

/// `|S^(d-1)|` for integer `d` by the recursion `|S^(d+1)| = 2 pi |S^(d-1)| / d`.
fn sphere_area(d: usize) -> f64 {
    let (mut a, mut dim) = if d % 2 == 1 { (2.0, 1usize) } else { (2.0 * PI, 2usize) };
    while dim < d {
        a *= 2.0 * PI / dim as f64;
        dim += 2;
    }
    a
}

/// Radial midpoints `(r, log r, weight for dr)`.
fn radial_midpoints(support: &Support, n: usize) -> Vec<(f64, f64, f64)> {
    let mid = |a: f64, b: f64| {
        let h = (b - a) / n as f64;
        (0..n).map(move |i| (a + (i as f64 + 0.5) * h, h))
    };
    if support.r_lo <= 0.0 {
        return mid(0.0, support.r_hi).map(|(r, h)| (r, r.ln(), h)).collect();
    }
    let (t_lo, t_hi) = (support.r_lo.ln(), support.r_hi.ln());
    match support.r_focus {
        Some(Focus { t0, delta }) => mid(((t_lo - t0) / delta).asinh(), ((t_hi - t0) / delta).asinh())
            .map(|(v, h)| {
                let t = t0 + delta * v.sinh();
                let r = t.exp();
                (r, t, h * delta * v.cosh() * r)
            })
            .collect(),
        None => mid(t_lo, t_hi)
            .map(|(t, h)| {
                let r = t.exp();
                (r, t, h * r)
            })
            .collect(),
    }
}

/// Midpoints with weights on `[a, b]`, uniform in `y` or in `asinh(y / scale)`.
fn y_midpoints(a: f64, b: f64, n: usize, scale: Option<f64>) -> Vec<(f64, f64)> {
    match scale {
        Some(d) => {
            let (va, vb) = ((a / d).asinh(), (b / d).asinh());
            let h = (vb - va) / n as f64;
            (0..n)
                .map(|i| {
                    let v = va + (i as f64 + 0.5) * h;
                    (d * v.sinh(), h * d * v.cosh())
                })
                .collect()
        }
        None => {
            let h = (b - a) / n as f64;
            (0..n).map(|i| (a + (i as f64 + 0.5) * h, h)).collect()
        }
    }
}

fn midpoint_pass<const N: usize, F>(
    m: usize,
    support: &Support,
    n_r: usize,
    res: &OracleResolution,
    density: &F,
) -> Result<[f64; N]>
where
    F: Fn(&Site) -> [f64; N],
{
    let ky = support.y.len();
    let n_y = if ky >= 2 { res.n_y_multi } else { res.n_y };
    let dirs: Vec<(f64, f64)> = match m {
        1 => vec![(0.0, 1.0), (PI, 1.0)],
        2 => (0..res.n_phi)
            .map(|j| (2.0 * PI * (j as f64 + 0.5) / res.n_phi as f64, 2.0 * PI / res.n_phi as f64))
            .collect(),
        _ => vec![(0.0, sphere_area(m))],
    };
    let y_axes: Vec<Vec<(f64, f64)>> = support
        .y
        .iter()
        .map(|&(a, b)| y_midpoints(a, b, n_y, support.y_scale))
        .collect();
    let ny_total = n_y.pow(ky as u32);
    let mut acc = [Kahan::default(); N];
    let mut y = vec![0.0; ky];
    for (r, t, wr) in radial_midpoints(support, n_r) {
        let jac = wr * r.powi(m as i32 - 1);
        for &(phi, wphi) in &dirs {
            for flat in 0..ny_total {
                let mut rem = flat;
                let mut wy = 1.0;
                for (yd, axis) in y.iter_mut().zip(y_axes.iter()) {
                    let (node, w) = axis[rem % n_y];
                    *yd = node;
                    wy *= w;
                    rem /= n_y;
                }
                let site = Site::polar(m, r, t, phi, &y);
                let v = density(&site);
                let w = jac * wphi * wy;
                for (a, x) in acc.iter_mut().zip(v.iter()) {
                    if !x.is_finite() {
                        return Err(HardyError::NonFinite(format!("oracle integrand at r = {r:e}")));
                    }
                    a.add(x * w);
                }
            }
        }
    }
    let mut out = [0.0; N];
    for (o, a) in out.iter_mut().zip(acc.iter()) {
        *o = a.s;
    }
    Ok(out)
}

/// Reference integral of a vector-valued density over `support` in `R^m x R^ky`.
///
/// The support's `r_lo` is used as given, including `0`.
pub fn oracle_integrate<const N: usize, F>(
    m: usize,
    support: &Support,
    res: &OracleResolution,
    density: F,
) -> Result<[f64; N]>
where
    F: Fn(&Site) -> [f64; N],
{
    if res.n_r == 0 || res.n_phi == 0 || res.n_y == 0 || res.n_y_multi == 0 {
        return Err(HardyError::Domain("oracle node counts must be positive".into()));
    }
    support.validate(support.y.len())?;
    let coarse = midpoint_pass(m, support, res.n_r, res, &density)?;
    let fine = midpoint_pass(m, support, 2 * res.n_r, res, &density)?;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    }
    Ok(out)
}

/// Reference for `|S^(Q-1)| int density(r) r^(Q-1) dr` (see `integrate_radial`).
pub fn oracle_integrate_radial<const N: usize, F>(
    support: &Support,
    hom_dim: f64,
    n_r: usize,
    density: F,
) -> Result<[f64; N]>
where
    F: Fn(f64, f64) -> [f64; N],
{
    if n_r == 0 {
        return Err(HardyError::Domain("oracle node count must be positive".into()));
    }
    let pass = |n: usize| -> Result<[f64; N]> {
        let mut acc = [Kahan::default(); N];
        for (r, t, wr) in radial_midpoints(support, n) {
            let v = density(r, t);
            for (a, x) in acc.iter_mut().zip(v.iter()) {
                if !x.is_finite() {
                    return Err(HardyError::NonFinite(format!("oracle integrand at r = {r:e}")));
                }
                a.add(x * wr * r.powf(hom_dim - 1.0));
            }
        }
        let mut out = [0.0; N];
        for (o, a) in out.iter_mut().zip(acc.iter()) {
            *o = a.s;
        }
        Ok(out)
    };
    let coarse = pass(n_r)?;
    let fine = pass(2 * n_r)?;
    let area = 2.0 * PI.powf(hom_dim / 2.0) / libm::tgamma(hom_dim / 2.0);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = area * (4.0 * fine[i] - coarse[i]) / 3.0;
    }
    Ok(out)
}
