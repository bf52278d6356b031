use super::reduced::{Profile, RadialPoint};
use super::scheme::BoxScheme;
use super::CouplingConstants;
use crate::error::{Error, Result};
use crate::forms::{PointMetric, TwoForm};
use crate::gauge::CurvatureField;
use crate::kahler::KahlerData;
use crate::quaternion::Quaternion;
use crate::reduce::{pairwise_dot, pairwise_sum};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Pointwise data of a pair on a complex surface: metric, scalar
/// curvature, curvature of the connection and volume weights.
#[derive(Clone, Debug)]
pub struct PairSamples {
    pub points: Vec<Quaternion>,
    pub metrics: Vec<PointMetric>,
    pub scalar: Vec<f64>,
    pub curvature: Vec<TwoForm>,
    pub weights: Vec<f64>,
}

fn ray_metric(s: f64, lr: f64, lt: f64) -> Result<(Quaternion, PointMetric)> {
    let r = s.sqrt();
    let m = PointMetric::radial(lr, lt, [Complex64::new(r, 0.0), Complex64::new(0.0, 0.0)])?;
    Ok((Quaternion::new(r, 0.0, 0.0, 0.0), m))
}

impl PairSamples {
    pub fn from_fields(k: &KahlerData, f: &CurvatureField) -> Result<Self> {
        let metrics = k.point_metrics()?;
        if f.values.len() != metrics.len() {
            return Err(Error::Geometry(format!(
                "{} curvature samples for {} metric samples",
                f.values.len(),
                metrics.len()
            )));
        }
        Ok(PairSamples {
            points: k.points(),
            metrics,
            scalar: k.scalar.clone(),
            curvature: f.values.clone(),
            weights: k.weights.clone(),
        })
    }

    /// Midpoint samples of a box-scheme state.
    pub fn from_scheme(scheme: &BoxScheme, x: &[f64]) -> Result<Self> {
        let h = scheme.grid.h;
        let mids = scheme.midpoints(x);
        let mut out = PairSamples::with_capacity(mids.len());
        for (i, m) in mids.iter().enumerate() {
            let (p, metric) = ray_metric(m.s, m.lambda_r, m.lambda_t).map_err(|_| Error::Degenerate {
                index: i,
                value: m.lambda_r.min(m.lambda_t),
            })?;
            out.points.push(p);
            out.metrics.push(metric);
            out.scalar.push(m.scalar);
            out.curvature.push(m.curvature.two_form());
            out.weights.push(PI * PI * m.s * m.s * m.lambda_r * m.lambda_t * h);
        }
        Ok(out)
    }

    /// Samples of the pair given by analytic profiles at the points `ts`,
    /// with midpoint-rule weights of spacing `h`.
    pub fn from_profiles(lam2: f64, phi: &Profile, a: &Profile, ts: &[f64], h: f64) -> Result<Self> {
        let mut out = PairSamples::with_capacity(ts.len());
        for (i, &t) in ts.iter().enumerate() {
            let rp = RadialPoint::from_jets(lam2, t, phi, a);
            let (p, metric) = ray_metric(rp.s, rp.lambda_r, rp.lambda_t)
                .map_err(|_| Error::Degenerate { index: i, value: rp.lambda_r.min(rp.lambda_t) })?;
            out.points.push(p);
            out.metrics.push(metric);
            out.scalar.push(rp.scalar);
            out.curvature.push(rp.curvature.two_form());
            out.weights.push(PI * PI * rp.s * rp.s * rp.lambda_r * rp.lambda_t * h);
        }
        Ok(out)
    }

    fn with_capacity(n: usize) -> Self {
        PairSamples {
            points: Vec::with_capacity(n),
            metrics: Vec::with_capacity(n),
            scalar: Vec::with_capacity(n),
            curvature: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledResidual {
    /// `ΛF − z`.
    pub hermitian: Vec<Quaternion>,
    /// `α₀S + α₁Λ²(F∧F) − c`.
    pub scalar: Vec<f64>,
}

impl CoupledResidual {
    pub fn hermitian_norm(&self) -> f64 {
        self.hermitian.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    pub fn scalar_norm(&self) -> f64 {
        self.scalar.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

pub fn coupled_residual(p: &PairSamples, coupling: CouplingConstants, z: Quaternion, c: f64) -> CoupledResidual {
    let mut hermitian = Vec::with_capacity(p.len());
    let mut scalar = Vec::with_capacity(p.len());
    for ((m, f), s) in p.metrics.iter().zip(&p.curvature).zip(&p.scalar) {
        hermitian.push(m.lambda(f) - z);
        scalar.push(coupling.alpha0 * s + coupling.alpha1 * m.lambda2_wedge(f) - c);
    }
    CoupledResidual { hermitian, scalar }
}

/// Value of the CYM functional and the terms of its decomposition
/// `‖α₀S − 2α₁|F|² − c‖² + 2α₁(1−2c)(‖ΛF‖² + 4‖F^{0,2}‖²) + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CymReport {
    pub value: f64,
    pub misfit: f64,
    pub lambda_term: f64,
    pub f02_term: f64,
    /// `2cα₀∫S − c²V − 2α₁(1−2c)∫½Λ²(F∧F)`, topological in the continuum.
    pub constant: f64,
    pub volume: f64,
    /// `|value − decomposition|`.
    pub decomposition_defect: f64,
    /// `2c ≥ 1`: the decomposition no longer bounds the functional below.
    pub c_out_of_range: bool,
}

pub fn cym_functional(p: &PairSamples, coupling: CouplingConstants, c: f64) -> CymReport {
    let (a0, a1) = (coupling.alpha0, coupling.alpha1);
    let n = p.len();
    let mut x2 = Vec::with_capacity(n);
    let mut f2 = Vec::with_capacity(n);
    let mut miss = Vec::with_capacity(n);
    let mut lam = Vec::with_capacity(n);
    let mut f02 = Vec::with_capacity(n);
    let mut wedge = Vec::with_capacity(n);
    for ((m, f), s) in p.metrics.iter().zip(&p.curvature).zip(&p.scalar) {
        let nf = m.norm_sqr(f);
        let x = a0 * s - 2.0 * a1 * nf;
        x2.push(x * x);
        f2.push(nf);
        miss.push((x - c) * (x - c));
        let l = m.lambda(f);
        lam.push(l.pairing(l));
        f02.push(m.f02_norm_sqr(f));
        wedge.push(0.5 * m.lambda2_wedge(f));
    }
    let w = &p.weights;
    let value = pairwise_dot(w, &x2) + 2.0 * a1 * pairwise_dot(w, &f2);
    let misfit = pairwise_dot(w, &miss);
    let lambda_term = pairwise_dot(w, &lam);
    let f02_term = pairwise_dot(w, &f02);
    let volume = pairwise_sum(w);
    let constant = 2.0 * c * a0 * pairwise_dot(w, &p.scalar) - c * c * volume
        - 2.0 * a1 * (1.0 - 2.0 * c) * pairwise_dot(w, &wedge);
    let decomposition = misfit + 2.0 * a1 * (1.0 - 2.0 * c) * (lambda_term + 4.0 * f02_term) + constant;
    CymReport {
        value,
        misfit,
        lambda_term,
        f02_term,
        constant,
        volume,
        decomposition_defect: (value - decomposition).abs(),
        c_out_of_range: 2.0 * c >= 1.0,
    }
}
