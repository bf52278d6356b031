//! Einstein–Yang–Mills residual on a complex surface.

use crate::error::{Error, Result};
use crate::forms::{PointMetric, TwoForm, PAIRS};
use crate::gauge::CurvatureField;
use crate::kahler::KahlerData;

fn lambda_pairing(m: &PointMetric, f: &TwoForm) -> [f64; 6] {
    let l = m.lambda(f);
    let mut out = [0.0; 6];
    for (k, _) in PAIRS.iter().enumerate() {
        out[k] = l.pairing(f.c[k]);
    }
    out
}

/// `Λ(F∧F) = ((F∧F)/vol) ω` for the pairing `−tr`.
fn lambda_wedge(m: &PointMetric, f: &TwoForm) -> [f64; 6] {
    let b = 0.5 * m.lambda2_wedge(f);
    m.omega().map(|w| b * w)
}

fn check(k: &KahlerData, f: &CurvatureField) -> Result<Vec<PointMetric>> {
    if k.geometry.complex_dim() != 2 {
        return Err(Error::Geometry("the Einstein–Yang–Mills residual needs a complex surface".into()));
    }
    if f.values.len() != k.len() {
        return Err(Error::Geometry("curvature samples do not match the metric grid".into()));
    }
    k.point_metrics()
}

/// `α₀(ρ − c′ω) − α₁(2(ΛF, F) − Λ(F∧F) − c″ω)` per sample.
pub fn eym_residual(
    k: &KahlerData,
    f: &CurvatureField,
    alpha0: f64,
    alpha1: f64,
    c1: f64,
    c2: f64,
) -> Result<Vec<[f64; 6]>> {
    let metrics = check(k, f)?;
    Ok(metrics
        .iter()
        .zip(&f.values)
        .enumerate()
        .map(|(i, (m, fv))| {
            let rho = k.ricci_form(i);
            let om = m.omega();
            let lp = lambda_pairing(m, fv);
            let lw = lambda_wedge(m, fv);
            let mut out = [0.0; 6];
            for c in 0..6 {
                out[c] = alpha0 * (rho[c] - c1 * om[c]) - alpha1 * (2.0 * lp[c] - lw[c] - c2 * om[c]);
            }
            out
        })
        .collect())
}

/// Largest deviation of `2(ΛF, F) − Λ(F∧F)` from `|F|² ω`, which holds
/// for anti-self-dual `F`.
pub fn eym_asd_reduction_defect(k: &KahlerData, f: &CurvatureField) -> Result<f64> {
    let metrics = check(k, f)?;
    let mut worst = 0.0_f64;
    for (m, fv) in metrics.iter().zip(&f.values) {
        let lp = lambda_pairing(m, fv);
        let lw = lambda_wedge(m, fv);
        let nf = m.norm_sqr(fv);
        let om = m.omega();
        for c in 0..6 {
            worst = worst.max((2.0 * lp[c] - lw[c] - nf * om[c]).abs());
        }
    }
    Ok(worst)
}
