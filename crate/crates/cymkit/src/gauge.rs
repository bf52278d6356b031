//! SU(2) connections on ℝ⁴ = ℍ: explicit instantons, curvature, ASD
//! residuals and topological charge.
//!
//! su(2) is the imaginary quaternions. A connection is stored as its four
//! coefficients `A = Σ A_μ dx_μ` and the curvature is `F = dA + A∧A`.

use crate::error::{Error, Result};
use crate::forms::{PointMetric, TwoForm, PAIRS};
use crate::grid::{hyperspherical_rule, ProductGrid4};
use crate::quaternion::{Quaternion, BASIS, ZERO};
use crate::reduce::{pairwise_dot, pairwise_sum, par_map};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Coefficients `(A_1, …, A_4)` of an su(2)-valued 1-form at a point.
pub type OneForm = [Quaternion; 4];

/// Centres and scales of a 't Hooft multi-instanton. The j-th summand has
/// size `1/λ_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstantonSpec {
    pub centers: Vec<Quaternion>,
    pub scales: Vec<f64>,
}

#[derive(Deserialize)]
struct SpecJson {
    centers: Vec<[f64; 4]>,
    scales: Vec<f64>,
}

impl InstantonSpec {
    pub fn new(centers: Vec<Quaternion>, scales: Vec<f64>) -> Result<Self> {
        let s = InstantonSpec { centers, scales };
        s.validate()?;
        Ok(s)
    }

    /// The unit instanton at the origin.
    pub fn basic() -> Self {
        InstantonSpec { centers: vec![ZERO], scales: vec![1.0] }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecJson =
            serde_json::from_str(text).map_err(|e| Error::input(format!("instanton spec: {e}")))?;
        Self::new(raw.centers.into_iter().map(Quaternion::from_array).collect(), raw.scales)
    }

    pub fn validate(&self) -> Result<()> {
        if self.centers.is_empty() {
            return Err(Error::input("instanton spec has no centres"));
        }
        if self.centers.len() != self.scales.len() {
            return Err(Error::input(format!(
                "{} centres but {} scales",
                self.centers.len(),
                self.scales.len()
            )));
        }
        for (j, &l) in self.scales.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::input(format!("scale {j} must be positive, got {l}")));
            }
        }
        for (j, b) in self.centers.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::input(format!("centre {j} is not finite")));
            }
            for (i, c) in self.centers[..j].iter().enumerate() {
                if (*b - *c).norm() == 0.0 {
                    return Err(Error::input(format!("centres {i} and {j} coincide")));
                }
            }
        }
        Ok(())
    }

    pub fn charge(&self) -> usize {
        self.centers.len()
    }

    /// Squared sizes `1/λ_j²`.
    fn sizes_sqr(&self) -> impl Iterator<Item = f64> + '_ {
        self.scales.iter().map(|l| 1.0 / (l * l))
    }

    /// Length scale beyond which the density behaves like `C r⁻⁸`.
    pub fn extent(&self) -> (f64, f64) {
        let reach = self.centers.iter().map(|b| b.norm()).fold(0.0, f64::max);
        let size = self.sizes_sqr().sum::<f64>().sqrt();
        (reach, size)
    }
}

/// `A = Im(x̄ dx) / (1 + |x|²)`.
pub fn basic_instanton(x: Quaternion) -> OneForm {
    let d = 1.0 + x.norm_sqr();
    let xb = x.conj();
    BASIS.map(|e| (xb * e).im().scale(1.0 / d))
}

/// `F = dx̄ ∧ dx / (1 + |x|²)²`.
pub fn basic_curvature(x: Quaternion) -> TwoForm {
    scaled_basic_curvature(x, 1.0)
}

fn scaled_basic_curvature(y: Quaternion, lam: f64) -> TwoForm {
    let l2 = lam * lam;
    let d = 1.0 + l2 * y.norm_sqr();
    let c = l2 / (d * d);
    let mut f = TwoForm::ZERO;
    for (k, &(m, n)) in PAIRS.iter().enumerate() {
        f.c[k] = (BASIS[m].conj() * BASIS[n] - BASIS[n].conj() * BASIS[m]).scale(c);
    }
    f
}

/// 't Hooft connection at `x`. A single centre uses the regular gauge, i.e.
/// the basic instanton pulled back by `x ↦ λ(x − b)`; several centres use the
/// singular gauge `A_μ = ½ Im(e_μ D̄)` with `D = ∇ log ρ`,
/// `ρ = 1 + Σ λ_j⁻² / |x − b_j|²`.
pub fn thooft_instanton(spec: &InstantonSpec, x: Quaternion) -> Result<OneForm> {
    if spec.charge() == 1 {
        let lam = spec.scales[0];
        let y = x - spec.centers[0];
        let d = 1.0 / (lam * lam) + y.norm_sqr();
        let yb = y.conj();
        return Ok(BASIS.map(|e| (yb * e).im().scale(1.0 / d)));
    }
    let (rho, grad, _) = rho_jet(spec, x)?;
    let dq = Quaternion::from_array(grad.map(|g| g / rho));
    let db = dq.conj();
    Ok(BASIS.map(|e| (e * db).im().scale(0.5)))
}

/// ρ, ∇ρ and the Hessian of ρ.
fn rho_jet(spec: &InstantonSpec, x: Quaternion) -> Result<(f64, [f64; 4], [[f64; 4]; 4])> {
    let mut rho = 1.0;
    let mut g = [0.0; 4];
    let mut h = [[0.0; 4]; 4];
    for (b, c) in spec.centers.iter().zip(spec.sizes_sqr()) {
        let y = (x - *b).to_array();
        let r2: f64 = y.iter().map(|v| v * v).sum();
        if r2 < 1e-28 {
            return Err(Error::Sample {
                index: 0,
                reason: "point coincides with an instanton centre (singular gauge)".into(),
            });
        }
        let r4 = r2 * r2;
        let r6 = r4 * r2;
        rho += c / r2;
        for m in 0..4 {
            g[m] -= 2.0 * c * y[m] / r4;
            for n in 0..4 {
                h[m][n] += c * (8.0 * y[m] * y[n] / r6 - if m == n { 2.0 / r4 } else { 0.0 });
            }
        }
    }
    Ok((rho, g, h))
}

/// Closed-form curvature of the 't Hooft connection.
pub fn thooft_curvature(spec: &InstantonSpec, x: Quaternion) -> Result<TwoForm> {
    if spec.charge() == 1 {
        return Ok(scaled_basic_curvature(x - spec.centers[0], spec.scales[0]));
    }
    let (rho, g, h) = rho_jet(spec, x)?;
    // ∂_μ∂_σ log ρ
    let mut l2 = [[0.0; 4]; 4];
    for m in 0..4 {
        for s in 0..4 {
            l2[m][s] = h[m][s] / rho - g[m] * g[s] / (rho * rho);
        }
    }
    let a = thooft_instanton(spec, x)?;
    let mut f = TwoForm::ZERO;
    for (k, &(m, n)) in PAIRS.iter().enumerate() {
        let mut d = ZERO;
        for s in 0..4 {
            let es = BASIS[s].conj();
            d += (BASIS[n] * es).im().scale(0.5 * l2[m][s]) - (BASIS[m] * es).im().scale(0.5 * l2[n][s]);
        }
        f.c[k] = d + a[m] * a[n] - a[n] * a[m];
    }
    Ok(f)
}

/// Where connection samples came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConnectionSource {
    Basic,
    THooft(InstantonSpec),
    /// Arbitrary samples. `decay` is a certified exponent `δ` with
    /// `|A| = O(r^δ)`, e.g. from a weighted norm; `None` means unknown.
    Perturbed { decay: Option<f64> },
}

/// Sampled su(2)-valued 1-form.
#[derive(Clone, Debug)]
pub struct ConnectionField {
    pub points: Vec<Quaternion>,
    pub values: Vec<OneForm>,
    pub source: ConnectionSource,
    /// Present when the samples lie on a product grid (needed for
    /// finite-difference curvature).
    pub grid: Option<ProductGrid4>,
}

fn eval_source(source: &ConnectionSource, x: Quaternion) -> Result<OneForm> {
    match source {
        ConnectionSource::Basic => Ok(basic_instanton(x)),
        ConnectionSource::THooft(spec) => thooft_instanton(spec, x),
        ConnectionSource::Perturbed { .. } => {
            Err(Error::input("perturbed connections carry samples only"))
        }
    }
}

fn with_index<T>(r: Result<T>, index: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Sample { reason, .. } => Error::Sample { index, reason },
        Error::Degenerate { value, .. } => Error::Degenerate { index, value },
        other => other,
    })
}

impl ConnectionField {
    pub fn sample(source: ConnectionSource, points: Vec<Quaternion>) -> Result<Self> {
        let vals = par_map(&points, |x| eval_source(&source, *x));
        let values = vals.into_iter().enumerate().map(|(i, v)| with_index(v, i)).collect::<Result<_>>()?;
        Ok(ConnectionField { points, values, source, grid: None })
    }

    pub fn on_grid(source: ConnectionSource, grid: &ProductGrid4) -> Result<Self> {
        let mut f = Self::sample(source, grid.points())?;
        f.grid = Some(grid.clone());
        Ok(f)
    }

    /// Samples of `A + δA` on a grid, tagged as perturbed.
    pub fn perturbed(
        base: &ConnectionField,
        delta: impl Fn(Quaternion) -> OneForm + Sync,
        decay: Option<f64>,
    ) -> Self {
        let d = par_map(&base.points, |x| delta(*x));
        let values = base.values.iter().zip(d).map(|(a, b)| [0, 1, 2, 3].map(|m| a[m] + b[m])).collect();
        ConnectionField {
            points: base.points.clone(),
            values,
            source: ConnectionSource::Perturbed { decay },
            grid: base.grid.clone(),
        }
    }

    /// Constant gauge rotation `A ↦ g A g⁻¹`.
    pub fn rotated(&self, g: Quaternion) -> Self {
        let gi = g.conj();
        let values = self.values.iter().map(|a| a.map(|q| g * q * gi)).collect();
        ConnectionField { values, source: ConnectionSource::Perturbed { decay: None }, ..self.clone() }
    }

    pub fn is_imaginary(&self, tol: f64) -> bool {
        self.values.iter().all(|a| a.iter().all(|q| q.w.abs() <= tol))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Debug)]
pub struct CurvatureField {
    pub points: Vec<Quaternion>,
    pub values: Vec<TwoForm>,
    pub derivation: Derivation,
    /// Samples computed with one-sided stencils.
    pub boundary: Vec<bool>,
}

impl CurvatureField {
    pub fn from_values(points: Vec<Quaternion>, values: Vec<TwoForm>) -> Self {
        let n = values.len();
        CurvatureField { points, values, derivation: Derivation::Analytic, boundary: vec![false; n] }
    }
}

/// Scalar samples with the boundary mask inherited from a curvature field.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
    pub boundary: Vec<bool>,
}

impl ScalarField {
    /// Maximum of `|v|` over interior samples.
    pub fn interior_max(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.boundary)
            .filter(|(_, b)| !**b)
            .fold(0.0, |a, (v, _)| a.max(v.abs()))
    }
}

/// Curvature with the closed-form expression when the source is an explicit
/// instanton, otherwise by second-order central differences on the grid.
pub fn curvature(a: &ConnectionField) -> Result<CurvatureField> {
    match &a.source {
        ConnectionSource::Basic | ConnectionSource::THooft(_) => curvature_analytic(a),
        ConnectionSource::Perturbed { .. } => curvature_fd(a),
    }
}

pub fn curvature_analytic(a: &ConnectionField) -> Result<CurvatureField> {
    let vals = par_map(&a.points, |x| match &a.source {
        ConnectionSource::Basic => Ok(basic_curvature(*x)),
        ConnectionSource::THooft(spec) => thooft_curvature(spec, *x),
        ConnectionSource::Perturbed { .. } => Err(Error::input("no closed form for perturbed data")),
    });
    let values = vals.into_iter().enumerate().map(|(i, v)| with_index(v, i)).collect::<Result<_>>()?;
    Ok(CurvatureField {
        points: a.points.clone(),
        values,
        derivation: Derivation::Analytic,
        boundary: vec![false; a.points.len()],
    })
}

/// `F_{μν} = ∂_μA_ν − ∂_νA_μ + [A_μ, A_ν]` with central differences; samples
/// on the outer layer of a non-periodic grid use one-sided second-order
/// stencils and are flagged.
pub fn curvature_fd(a: &ConnectionField) -> Result<CurvatureField> {
    let grid = a.grid.as_ref().ok_or_else(|| Error::input("finite differences need a product grid"))?;
    if grid.len() != a.values.len() {
        return Err(Error::Geometry("grid size does not match samples".into()));
    }
    let deriv = |k: usize, mu: usize, nu: usize| -> Quaternion {
        let h = grid.h[mu];
        let v = |i: usize| a.values[i][nu];
        match (grid.neighbour(k, mu, -1), grid.neighbour(k, mu, 1)) {
            (Some(m), Some(p)) => (v(p) - v(m)).scale(0.5 / h),
            (None, Some(p)) => {
                let pp = grid.neighbour(p, mu, 1).expect("grid has at least three nodes per axis");
                (v(k).scale(-3.0) + v(p).scale(4.0) - v(pp)).scale(0.5 / h)
            }
            (Some(m), None) => {
                let mm = grid.neighbour(m, mu, -1).expect("grid has at least three nodes per axis");
                (v(k).scale(3.0) - v(m).scale(4.0) + v(mm)).scale(0.5 / h)
            }
            (None, None) => ZERO,
        }
    };
    let idx: Vec<usize> = (0..grid.len()).collect();
    let values = par_map(&idx, |&k| {
        let av = &a.values[k];
        let mut f = TwoForm::ZERO;
        for (c, &(m, n)) in PAIRS.iter().enumerate() {
            f.c[c] = deriv(k, m, n) - deriv(k, n, m) + av[m] * av[n] - av[n] * av[m];
        }
        f
    });
    Ok(CurvatureField {
        points: a.points.clone(),
        values,
        derivation: Derivation::FiniteDifference,
        boundary: idx.iter().map(|&k| grid.is_boundary(k)).collect(),
    })
}

/// Anything that provides a Kähler metric at points of ℂ².
pub trait MetricSampler: Sync {
    fn metric_at(&self, x: Quaternion) -> Result<PointMetric>;
}

impl MetricSampler for PointMetric {
    fn metric_at(&self, _x: Quaternion) -> Result<PointMetric> {
        Ok(*self)
    }
}

/// Pointwise norm of the self-dual part of `F` with respect to the metric.
pub fn asd_residual(f: &CurvatureField, metric: &dyn MetricSampler) -> Result<ScalarField> {
    let idx: Vec<usize> = (0..f.values.len()).collect();
    let vals = par_map(&idx, |&i| {
        let g = with_index(metric.metric_at(f.points[i]), i)?;
        Ok(g.self_dual_norm_sqr(&f.values[i]).sqrt())
    });
    Ok(ScalarField { values: vals.into_iter().collect::<Result<_>>()?, boundary: f.boundary.clone() })
}

/// Coefficient of `tr F∧F` against `dx₁∧dx₂∧dx₃∧dx₄`.
pub fn chern_weil_density(f: &CurvatureField) -> ScalarField {
    ScalarField {
        values: f.values.iter().map(|v| v.wedge_self().trace()).collect(),
        boundary: f.boundary.clone(),
    }
}

/// Least-squares constant `c` with `density ≈ c · 24/(1+|x|²)⁴` and the
/// largest relative deviation from the fit.
pub fn fit_density_profile(points: &[Quaternion], density: &[f64]) -> (f64, f64) {
    let prof: Vec<f64> = points.iter().map(|x| 24.0 / (1.0 + x.norm_sqr()).powi(4)).collect();
    let c = pairwise_dot(&prof, density) / pairwise_dot(&prof, &prof);
    let dev = prof
        .iter()
        .zip(density)
        .map(|(p, d)| ((d - c * p) / (c * p)).abs())
        .fold(0.0, f64::max);
    (c, dev)
}

/// Result of a charge quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeEstimate {
    /// `∫ tr F∧F / 8π²` over the truncated domain.
    pub value: f64,
    /// Analytic bound on the neglected tail.
    pub tail_bound: f64,
    /// Difference between two quadrature resolutions.
    pub quadrature_error: f64,
    pub radius: f64,
}

/// Radius at which the `r⁻⁸` tail of an instanton of the given extent
/// contributes less than `tol / 2` relative to the charge.
pub fn select_radius(reach: f64, size: f64, tol: f64) -> f64 {
    reach + size * (6.0 / tol).powf(0.25)
}

/// Tail `∫_{|x|>R} tr F∧F / 8π²` of an instanton-like density
/// `48 a⁴ / |x − b|⁸`, per unit charge.
fn tail_bound(reach: f64, size: f64, radius: f64, k: usize) -> f64 {
    let rr = (radius - reach).max(size);
    3.0 * k as f64 * (size / rr).powi(4)
}

/// Topological charge estimate `(1/8π²) ∫ tr F∧F`.
///
/// Explicit instantons are integrated with a hyperspherical product rule
/// over a ball sized by [`select_radius`]; sampled fields on a product grid
/// are integrated with the trapezoid rule and need a decay certificate
/// `δ < −1` (so that `tr F∧F = O(r^{2δ−2})` is integrable).
pub fn instanton_number(a: &ConnectionField, tol: f64) -> Result<ChargeEstimate> {
    match &a.source {
        ConnectionSource::Basic => charge_quadrature(&InstantonSpec::basic(), tol),
        ConnectionSource::THooft(spec) => charge_quadrature(spec, tol),
        ConnectionSource::Perturbed { decay } => {
            let d = decay.ok_or_else(|| {
                Error::input("charge needs a decay certificate for sampled connections")
            })?;
            if d >= -1.0 {
                return Err(Error::input(format!(
                    "decay exponent {d} is too slow: tr F∧F is not integrable unless δ < −1"
                )));
            }
            let grid = a.grid.as_ref().ok_or_else(|| Error::input("sampled charge needs a grid"))?;
            let f = curvature_fd(a)?;
            let dens = chern_weil_density(&f);
            let value = trapezoid(grid, &dens.values) / (8.0 * PI * PI);
            let radius = grid.h[0] * (grid.n[0] - 1) as f64 / 2.0;
            // tr F∧F = O(r^{2δ−2}), so the tail is O(R^{2δ+2}) up to the unknown constant.
            let tail = radius.powf(2.0 * d + 2.0) / (-(2.0 * d + 2.0));
            Ok(ChargeEstimate { value, tail_bound: tail, quadrature_error: f64::NAN, radius })
        }
    }
}

fn charge_at(spec: &InstantonSpec, radius: f64, n: usize) -> Result<f64> {
    let (reach, size) = spec.extent();
    let mut breaks = Vec::new();
    for b in &spec.centers {
        let r = b.norm();
        for s in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            breaks.push(r + s * size.min(r.max(size)) * 0.5);
        }
    }
    let mut r = (reach + size).max(size);
    while r < radius {
        breaks.push(r);
        r *= 2.0;
    }
    let rule = hyperspherical_rule(radius, &breaks, n, 2 * n, 2 * n, 2 * n);
    let terms = par_map(&rule, |q| thooft_curvature(spec, q.x).map(|f| q.w * f.wedge_self().trace()));
    let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms) / (8.0 * PI * PI))
}

/// Charge of an explicit instanton by hyperspherical quadrature.
pub fn charge_quadrature(spec: &InstantonSpec, tol: f64) -> Result<ChargeEstimate> {
    spec.validate()?;
    let (reach, size) = spec.extent();
    let radius = select_radius(reach, size, tol);
    let coarse = charge_at(spec, radius, 12)?;
    let fine = charge_at(spec, radius, 16)?;
    Ok(ChargeEstimate {
        value: fine,
        tail_bound: tail_bound(reach, size, radius, spec.charge()),
        quadrature_error: (fine - coarse).abs(),
        radius,
    })
}

/// Trapezoid rule on a product grid (periodic grids use equal weights).
pub fn trapezoid(grid: &ProductGrid4, values: &[f64]) -> f64 {
    let w: Vec<f64> = (0..grid.len())
        .map(|k| {
            if grid.periodic {
                return grid.cell_volume();
            }
            let m = grid.multi(k);
            let mut w = grid.cell_volume();
            for a in 0..4 {
                if m[a] == 0 || m[a] + 1 == grid.n[a] {
                    w *= 0.5;
                }
            }
            w
        })
        .collect();
    pairwise_dot(&w, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{I, J, K};

    fn pts() -> Vec<Quaternion> {
        vec![
            Quaternion::new(0.3, -0.7, 1.1, 0.2),
            Quaternion::new(-1.4, 0.5, 0.0, 0.9),
            Quaternion::new(2.0, 1.0, -1.5, -0.3),
        ]
    }

    #[test]
    fn basic_values() {
        let a = basic_instanton(Quaternion::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(a[1], I.scale(0.5));
        assert_eq!(a[0], ZERO);
        let f = basic_curvature(ZERO);
        assert_eq!(f.get(0, 1), I.scale(2.0));
        assert_eq!(f.get(2, 3), I.scale(-2.0));
    }

    #[test]
    fn single_centre_thooft_is_pullback() {
        let spec = InstantonSpec::new(vec![ZERO], vec![2.0]).unwrap();
        for x in pts() {
            let a = thooft_instanton(&spec, x).unwrap();
            let b = basic_instanton(x.scale(2.0));
            for m in 0..4 {
                assert!((a[m] - b[m].scale(2.0)).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn multi_centre_curvature_is_asd_and_matches_fd() {
        let spec = InstantonSpec::new(
            vec![Quaternion::new(1.0, 0.0, 0.0, 0.0), Quaternion::new(-1.0, 0.0, 0.0, 0.0)],
            vec![1.0, 1.0],
        )
        .unwrap();
        let flat = PointMetric::flat();
        for x in pts() {
            let f = thooft_curvature(&spec, x).unwrap();
            assert!(flat.self_dual_norm_sqr(&f) < 1e-24);
            let h = 1e-5;
            for (c, &(m, n)) in PAIRS.iter().enumerate() {
                let d = |mu: usize, nu: usize| {
                    let e = BASIS[mu].scale(h);
                    let p = thooft_instanton(&spec, x + e).unwrap()[nu];
                    let q = thooft_instanton(&spec, x - e).unwrap()[nu];
                    (p - q).scale(0.5 / h)
                };
                let a = thooft_instanton(&spec, x).unwrap();
                let fd = d(m, n) - d(n, m) + a[m] * a[n] - a[n] * a[m];
                assert!((fd - f.c[c]).max_abs() < 1e-7);
            }
        }
    }

    #[test]
    fn centre_evaluation_is_a_sample_error() {
        let spec = InstantonSpec::new(vec![ZERO, I], vec![1.0, 1.0]).unwrap();
        let e = ConnectionField::sample(ConnectionSource::THooft(spec), vec![J, I]).unwrap_err();
        assert!(matches!(e, Error::Sample { index: 1, .. }));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(InstantonSpec::new(vec![ZERO], vec![-1.0]).is_err());
        assert!(InstantonSpec::new(vec![K, K], vec![1.0, 1.0]).is_err());
        assert!(InstantonSpec::from_json("{\"centers\": [[0,0,0,0]], \"scales\": [-1]}").unwrap_err().is_input());
    }

    #[test]
    fn density_at_origin() {
        let f = CurvatureField::from_values(vec![ZERO], vec![basic_curvature(ZERO)]);
        assert!((chern_weil_density(&f).values[0] - 48.0).abs() < 1e-13);
    }
}
