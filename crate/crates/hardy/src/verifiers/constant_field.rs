//! Hardy inequality for the Grushin gradient with a constant magnetic field on `C^n`.

use serde_json::json;

use super::grushin::{hardy_half, with_y_scale};
use super::{identity, integrate_checked, InequalityReport, Inequality, Term, VerifyOptions};
use crate::error::{HardyError, Result};
use crate::fields::{constant_field_grad_at, grushin_grad_at, norm_sq, ConstantFieldPotentials, RhoData};
use crate::functions::TestFunction;
use crate::geometry::{GrushinGeometry, WeightExponents};
use crate::quadrature::Site;

/// `int B |grad_GL f|^2 >= ((n(2+gamma) + alpha1 - 2)/2)^2 int B |x|^(2 gamma)/rho^(2 gamma+2) |f|^2
///  + sum_j int B (psi_2j(x_j)^2 + psi_1j(y_j)^2) |f|^2` for real `f`, `m = k = n`.
///
/// The margin with the unsquared constant is reported as the `as_printed` alternative,
/// and the expansion of `|grad_GL f|^2` is attached as an identity.
pub fn verify_constant_field(
    geom: &GrushinGeometry,
    exps: WeightExponents,
    pots: &ConstantFieldPotentials,
    f: &TestFunction,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    let n = geom.m();
    if geom.k() != n || !(1..=2).contains(&n) {
        return Err(HardyError::Domain("constant-field checks need m = k = n with n in {1, 2}".into()));
    }
    if pots.psi1.len() != n || pots.psi2.len() != n {
        return Err(HardyError::Domain(format!("need {n} potentials of each kind")));
    }
    let q = geom.hom_dim();
    let conds = [
        ("n(2+gamma)+alpha1-2>0", q + exps.alpha1 - 2.0 > 0.0),
        ("n+alpha2*gamma>0", n as f64 + exps.alpha2 * geom.gamma() > 0.0),
    ];
    if let Some((name, _)) = conds.iter().find(|(_, ok)| !ok) {
        return Err(HardyError::Admissibility(format!("violated: {name}")));
    }
    f.require_real()?;
    f.check_space(n, n)?;
    let support = with_y_scale(f.support()?, geom.gamma());
    let ([lhs, grad, pot, main], oracle) = integrate_checked(n, n, &support, opts, |s: &Site| {
        let j = f.jet(s);
        let rd = RhoData::at(geom, s);
        let b = geom.weight_b_ry(exps, s.r, rd.rho);
        let f2 = j.v.norm_sqr();
        let x = &s.point.x;
        let y = &s.point.y;
        let p: f64 = (0..n)
            .map(|i| pots.psi2[i].eval(x[i]).powi(2) + pots.psi1[i].eval(y[i]).powi(2))
            .sum();
        [
            b * norm_sq(&constant_field_grad_at(geom, pots, s, &j)),
            b * norm_sq(&grushin_grad_at(geom, s, &j)),
            b * p * f2,
            b * geom.hardy_weight_ry(s.r, rd.rho) * f2,
        ]
    })?;
    let half = hardy_half(geom, exps);
    let params = json!({"geometry": geom, "weights": exps, "potentials": pots, "function": f});
    let split = identity(
        "constant_field_split",
        lhs,
        vec![Term::new("gradient_energy", grad), Term::new("potential_energy", pot)],
        params.clone(),
        opts,
        oracle.clone(),
    );
    let mut ineq = Inequality::new("constant_field", lhs, half * half, main)
        .term("potential_energy", pot)
        .alt("as_printed", lhs - half * main - pot)
        .admissible(&conds)
        .params(params)
        .oracle(oracle);
    ineq.identities.push(split);
    Ok(ineq.finish(opts))
}
