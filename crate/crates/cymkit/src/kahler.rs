//! Discrete Kähler geometry on a fixed menu of model spaces.
//!
//! A metric is `g_{jk̄} = g⁰_{jk̄} + ∂_j∂̄_k φ` where `g⁰` is the reference
//! metric of the geometry and `φ` the sampled potential. Radial geometries
//! use `t = log s`, `s = |z|²`; in that variable `u = Φ_t`, `ψ = Φ_tt` for the
//! total potential `Φ`, and the metric has eigenvalues `ψ/s` (radial) and
//! `u/s` (tangential).
//!
//! `S` is the Riemannian scalar curvature. With the Ricci form
//! `ρ = −i∂∂̄ log det g` and the contraction `Λ` normalized by `Λω = n`, it is
//! `S = 2Λρ`, i.e. twice the Hermitian scalar curvature.

use crate::error::{Error, Result};
use crate::forms::{hermitian_form, PointMetric, TwoForm, PAIRS};
use crate::gauge::{charge_quadrature, CurvatureField, InstantonSpec, MetricSampler};
use crate::grid::{ProductGrid4, RadialGrid};
use crate::quaternion::Quaternion;
use crate::reduce::{pairwise_dot, pairwise_sum};
use crate::stencil;
use nalgebra::Matrix2;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// ℂ² with U(2)-invariant potentials, flat reference metric.
    C2Radial,
    /// Flat torus ℂ²/Λ, periodic potentials.
    TorusT4,
    /// Constant-curvature reference: genus 0 is the Fubini–Study sphere,
    /// genus 1 a flat square torus, genus ≥ 2 a disc patch of the
    /// curvature −1 metric.
    RiemannSurface { genus: u32 },
    /// P¹ with the Fubini–Study metric of area 1.
    P1FubiniStudy,
}

impl Geometry {
    pub fn complex_dim(&self) -> usize {
        match self {
            Geometry::C2Radial | Geometry::TorusT4 => 2,
            _ => 1,
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, Geometry::C2Radial)
    }

    fn is_radial(&self) -> bool {
        match self {
            Geometry::C2Radial | Geometry::P1FubiniStudy => true,
            Geometry::RiemannSurface { genus } => *genus != 1,
            Geometry::TorusT4 => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Radial(RadialGrid),
    Periodic(ProductGrid4),
}

/// Radial jets at the nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialJets {
    pub u: Vec<f64>,
    pub psi: Vec<f64>,
    /// `L = log det g` and its `t`-derivatives.
    pub l_t: Vec<f64>,
    pub l_tt: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct KahlerData {
    pub geometry: Geometry,
    pub domain: Domain,
    pub phi: Vec<f64>,
    /// `g_{jk̄}`; in complex dimension 1 only the `(0,0)` entry is used.
    pub metric: Vec<Matrix2<Complex64>>,
    /// `R_{jk̄} = −∂_j∂̄_k log det g`, so that `ρ = i R_{jk̄} dz_j∧dz̄_k`.
    pub ricci: Vec<Matrix2<Complex64>>,
    pub scalar: Vec<f64>,
    /// Quadrature weights of `vol_ω` (`ωⁿ/n!`).
    pub weights: Vec<f64>,
    /// Samples whose derivatives used one-sided stencils.
    pub boundary: Vec<bool>,
    pub radial: Option<RadialJets>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn diag(a: f64, b: f64) -> Matrix2<Complex64> {
    Matrix2::new(c(a), c(0.0), c(0.0), c(b))
}

/// `(u₀, ψ₀, L₀_t, L₀_tt)` of the reference potential at `t`.
fn reference_jets(geometry: Geometry, t: f64) -> Result<(f64, f64, f64, f64)> {
    let s = t.exp();
    match geometry {
        Geometry::C2Radial => Ok((s, s, 0.0, 0.0)),
        Geometry::P1FubiniStudy | Geometry::RiemannSurface { genus: 0 } => {
            // Φ = log(1 + s)/π
            let sig = 1.0 / (1.0 + (-t).exp());
            let e = (-t.abs()).exp();
            let q = e / ((1.0 + e) * (1.0 + e));
            Ok((sig / PI, q / PI, -2.0 * sig, -2.0 * q))
        }
        Geometry::RiemannSurface { .. } => {
            // Φ = −4 log(1 − s), curvature −1
            if s >= 1.0 {
                return Err(Error::Geometry("hyperbolic disc patch needs s < 1".into()));
            }
            let d = 1.0 - s;
            Ok((4.0 * s / d, 4.0 * s / (d * d), 2.0 * s / d, 2.0 * s / (d * d)))
        }
        Geometry::TorusT4 => Err(Error::Geometry("torus is not radial".into())),
    }
}

impl KahlerData {
    /// Metric, Ricci curvature and scalar curvature of `g⁰ + ∂∂̄φ`.
    pub fn from_potential(geometry: Geometry, domain: Domain, phi: Vec<f64>) -> Result<Self> {
        match (&domain, geometry.is_radial()) {
            (Domain::Radial(grid), true) => {
                let grid = grid.clone();
                Self::radial(geometry, grid, phi)
            }
            (Domain::Periodic(grid), false) => {
                let grid = grid.clone();
                Self::periodic(geometry, grid, phi)
            }
            _ => Err(Error::Geometry(format!("{geometry:?} does not live on this domain"))),
        }
    }

    pub fn flat_c2(grid: &RadialGrid) -> Self {
        Self::radial(Geometry::C2Radial, grid.clone(), vec![0.0; grid.len()]).expect("flat metric")
    }

    pub fn fubini_study(grid: &RadialGrid) -> Self {
        Self::radial(Geometry::P1FubiniStudy, grid.clone(), vec![0.0; grid.len()]).expect("FS metric")
    }

    /// Flat `ℂ²/(Lℤ)⁴` sampled with `n` nodes per axis.
    pub fn flat_torus4(length: f64, n: usize) -> Self {
        let g = ProductGrid4::torus(length, n);
        let len = g.len();
        Self::periodic(Geometry::TorusT4, g, vec![0.0; len]).expect("flat torus")
    }

    /// Flat square torus `ℂ/(Lℤ)²`.
    pub fn flat_torus2(length: f64, n: usize) -> Self {
        let g = torus2_grid(length, n);
        let len = g.len();
        Self::periodic(Geometry::RiemannSurface { genus: 1 }, g, vec![0.0; len]).expect("flat torus")
    }

    fn radial(geometry: Geometry, grid: RadialGrid, phi: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if phi.len() != n {
            return Err(Error::input(format!("{} potential samples for {n} nodes", phi.len())));
        }
        if n < 10 {
            return Err(Error::input("radial grid too coarse"));
        }
        let dim = geometry.complex_dim();
        let h = grid.h;
        let pt = stencil::d1(&phi, h);
        let ptt = stencil::d2(&phi, h);
        let mut u = vec![0.0; n];
        let mut psi = vec![0.0; n];
        let mut corr = vec![0.0; n];
        let mut base = Vec::with_capacity(n);
        for i in 0..n {
            let (u0, p0, lt0, ltt0) = reference_jets(geometry, grid.t(i))?;
            u[i] = u0 + pt[i];
            psi[i] = p0 + ptt[i];
            let s = grid.t(i).exp();
            let smallest = if dim == 2 { u[i].min(psi[i]) } else { psi[i] } / s;
            if !(smallest > 0.0) {
                return Err(Error::Degenerate { index: i, value: smallest });
            }
            corr[i] = (psi[i] / p0).ln() + if dim == 2 { (u[i] / u0).ln() } else { 0.0 };
            base.push((lt0, ltt0));
        }
        let ct = stencil::d1(&corr, h);
        let ctt = stencil::d2(&corr, h);
        let l_t: Vec<f64> = (0..n).map(|i| base[i].0 + ct[i]).collect();
        let l_tt: Vec<f64> = (0..n).map(|i| base[i].1 + ctt[i]).collect();
        let mut metric = Vec::with_capacity(n);
        let mut ricci = Vec::with_capacity(n);
        let mut scalar = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let s = grid.t(i).exp();
            let end = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
            if dim == 2 {
                metric.push(diag(psi[i] / s, u[i] / s));
                ricci.push(diag(-l_tt[i] / s, -l_t[i] / s));
                scalar.push(-4.0 * (l_t[i] / u[i] + l_tt[i] / psi[i]));
                weights.push(end * h * PI * PI * u[i] * psi[i]);
            } else {
                metric.push(diag(psi[i] / s, 0.0));
                ricci.push(diag(-l_tt[i] / s, 0.0));
                scalar.push(-4.0 * l_tt[i] / psi[i]);
                weights.push(end * h * PI * psi[i]);
            }
        }
        let boundary = (0..n).map(|i| i < 4 || i + 4 >= n).collect();
        Ok(KahlerData {
            geometry,
            domain: Domain::Radial(grid),
            phi,
            metric,
            ricci,
            scalar,
            weights,
            boundary,
            radial: Some(RadialJets { u, psi, l_t, l_tt }),
        })
    }

    fn periodic(geometry: Geometry, grid: ProductGrid4, phi: Vec<f64>) -> Result<Self> {
        if !grid.periodic {
            return Err(Error::Geometry("compact flat geometries need a periodic grid".into()));
        }
        if phi.len() != grid.len() {
            return Err(Error::input(format!("{} potential samples for {} nodes", phi.len(), grid.len())));
        }
        let dim = geometry.complex_dim();
        if dim == 1 && (grid.n[2] != 1 || grid.n[3] != 1) {
            return Err(Error::Geometry("a flat Riemann surface uses a two-axis grid".into()));
        }
        let m = grid.len();
        let mut metric = Vec::with_capacity(m);
        let mut logdet = Vec::with_capacity(m);
        for k in 0..m {
            let hs = complex_hessian(&grid, &phi, k);
            let g = if dim == 2 {
                Matrix2::identity() + hs
            } else {
                diag(1.0 + hs[(0, 0)].re, 0.0)
            };
            let det = if dim == 2 { (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re } else { g[(0, 0)].re };
            if !(g[(0, 0)].re > 0.0 && det > 0.0) {
                return Err(Error::Degenerate { index: k, value: det.min(g[(0, 0)].re) });
            }
            metric.push(g);
            logdet.push(det.ln());
        }
        let cell = if dim == 2 { grid.cell_volume() } else { grid.h[0] * grid.h[1] };
        let mut ricci = Vec::with_capacity(m);
        let mut scalar = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for k in 0..m {
            let r = -complex_hessian(&grid, &logdet, k);
            let g = metric[k];
            if dim == 2 {
                let gi = g.try_inverse().expect("positive metric");
                scalar.push(4.0 * (gi * r).trace().re);
                weights.push(logdet[k].exp() * cell);
                ricci.push(r);
            } else {
                scalar.push(4.0 * r[(0, 0)].re / g[(0, 0)].re);
                weights.push(g[(0, 0)].re * cell);
                ricci.push(diag(r[(0, 0)].re, 0.0));
            }
        }
        Ok(KahlerData {
            geometry,
            domain: Domain::Periodic(grid),
            phi,
            metric,
            ricci,
            scalar,
            weights,
            boundary: vec![false; m],
            radial: None,
        })
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Sample locations; radial data sits on the ray `(r, 0, 0, 0)`.
    pub fn points(&self) -> Vec<Quaternion> {
        match &self.domain {
            Domain::Radial(g) => (0..g.len()).map(|i| Quaternion::new(g.r(i), 0.0, 0.0, 0.0)).collect(),
            Domain::Periodic(g) => g.points(),
        }
    }

    /// Pointwise metrics (complex dimension 2 only).
    pub fn point_metrics(&self) -> Result<Vec<PointMetric>> {
        if self.geometry.complex_dim() != 2 {
            return Err(Error::Geometry("pointwise 4-d metrics need a complex surface".into()));
        }
        self.metric
            .iter()
            .enumerate()
            .map(|(i, h)| {
                PointMetric::from_hermitian(*h).map_err(|_| Error::Degenerate { index: i, value: 0.0 })
            })
            .collect()
    }

    pub fn volume(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// `∫ f vol_ω` by the stored weights.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        pairwise_dot(&self.weights, f)
    }

    /// Average scalar curvature on compact geometries.
    pub fn s_hat(&self) -> Result<f64> {
        if !self.geometry.is_compact() {
            return Err(Error::Geometry("Ŝ needs a compact geometry".into()));
        }
        Ok(self.integrate(&self.scalar) / self.volume())
    }

    /// `sup S − inf S` over interior samples.
    pub fn scalar_spread(&self) -> f64 {
        let (lo, hi) = self
            .scalar
            .iter()
            .zip(&self.boundary)
            .filter(|(_, b)| !**b)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (s, _)| (lo.min(*s), hi.max(*s)));
        hi - lo
    }

    /// Real components of the Ricci form at sample `k`.
    pub fn ricci_form(&self, k: usize) -> [f64; 6] {
        hermitian_form(&(self.ricci[k] * c(2.0)))
    }

    /// Max over the grid of `|dρ|` by central differences (periodic
    /// 4-d grids only).
    pub fn ricci_closedness(&self) -> Result<f64> {
        let grid = match (&self.domain, self.geometry) {
            (Domain::Periodic(g), Geometry::TorusT4) => g,
            _ => return Err(Error::Geometry("closedness check needs the 4-torus".into())),
        };
        let rho: Vec<[f64; 6]> = (0..self.len()).map(|k| self.ricci_form(k)).collect();
        let comp = |k: usize, a: usize, b: usize| -> f64 {
            let i = PAIRS.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
            if a < b {
                rho[k][i]
            } else {
                -rho[k][i]
            }
        };
        let deriv = |k: usize, ax: usize, a: usize, b: usize| -> f64 {
            let p = grid.neighbour(k, ax, 1).unwrap();
            let m = grid.neighbour(k, ax, -1).unwrap();
            (comp(p, a, b) - comp(m, a, b)) / (2.0 * grid.h[ax])
        };
        let mut worst = 0.0_f64;
        for k in 0..self.len() {
            for (l, m, n) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
                let d = deriv(k, l, m, n) - deriv(k, m, l, n) + deriv(k, n, l, m);
                worst = worst.max(d.abs());
            }
        }
        Ok(worst)
    }

    /// `c · h^*ω` with `h(z) = z/√c` on ℂ². The samples are unchanged up to
    /// the factor: node `i` of the result sits on the grid shifted by
    /// `log c`, where `S_new = S_old / c`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        let grid = match (&self.domain, self.geometry) {
            (Domain::Radial(g), Geometry::C2Radial) => g.shifted(factor.ln()),
            _ => return Err(Error::Geometry("rescaling is defined on ℂ²".into())),
        };
        if !(factor > 0.0) {
            return Err(Error::input("rescaling factor must be positive"));
        }
        Self::radial(Geometry::C2Radial, grid, self.phi.iter().map(|p| p * factor).collect())
    }
}

/// Two-axis periodic grid for a flat Riemann surface.
pub fn torus2_grid(length: f64, n: usize) -> ProductGrid4 {
    let h = length / n as f64;
    ProductGrid4 { lo: [0.0; 4], h: [h, h, 1.0, 1.0], n: [n, n, 1, 1], periodic: true }
}

fn second_partial(grid: &ProductGrid4, f: &[f64], k: usize, a: usize, b: usize) -> f64 {
    if grid.n[a] == 1 || grid.n[b] == 1 {
        return 0.0;
    }
    let nb = |k: usize, ax: usize, s: isize| grid.neighbour(k, ax, s).expect("periodic");
    if a == b {
        (f[nb(k, a, 1)] - 2.0 * f[k] + f[nb(k, a, -1)]) / (grid.h[a] * grid.h[a])
    } else {
        let pp = nb(nb(k, a, 1), b, 1);
        let pm = nb(nb(k, a, 1), b, -1);
        let mp = nb(nb(k, a, -1), b, 1);
        let mm = nb(nb(k, a, -1), b, -1);
        (f[pp] - f[pm] - f[mp] + f[mm]) / (4.0 * grid.h[a] * grid.h[b])
    }
}

/// `∂_j∂̄_k f = ¼[f_{x_j x_k} + f_{y_j y_k} + i(f_{x_j y_k} − f_{y_j x_k})]`.
fn complex_hessian(grid: &ProductGrid4, f: &[f64], k: usize) -> Matrix2<Complex64> {
    let mut out = Matrix2::zeros();
    for j in 0..2 {
        for l in 0..2 {
            let (xj, yj, xl, yl) = (2 * j, 2 * j + 1, 2 * l, 2 * l + 1);
            let re = second_partial(grid, f, k, xj, xl) + second_partial(grid, f, k, yj, yl);
            let im = second_partial(grid, f, k, xj, yl) - second_partial(grid, f, k, yj, xl);
            out[(j, l)] = Complex64::new(0.25 * re, 0.25 * im);
        }
    }
    out
}

impl MetricSampler for KahlerData {
    /// Radial data is interpolated in `t`; outside the grid the end values
    /// of the eigenvalues are used. Periodic data uses the nearest node.
    fn metric_at(&self, x: Quaternion) -> Result<PointMetric> {
        match (&self.domain, self.geometry) {
            (Domain::Radial(g), Geometry::C2Radial) => {
                let j = self.radial.as_ref().expect("radial jets");
                let s = x.norm_sqr();
                let lr: Vec<f64> = (0..g.len()).map(|i| j.psi[i] / g.t(i).exp()).collect();
                let lt: Vec<f64> = (0..g.len()).map(|i| j.u[i] / g.t(i).exp()).collect();
                let t = if s > 0.0 { s.ln() } else { g.t0 };
                let (a, b) = (g.interpolate_cubic(&lr, t), g.interpolate_cubic(&lt, t));
                PointMetric::radial(a, b, [Complex64::new(x.w, x.x), Complex64::new(x.y, x.z)])
            }
            (Domain::Periodic(g), Geometry::TorusT4) => {
                let idx = [x.w, x.x, x.y, x.z];
                let mut m = [0usize; 4];
                for a in 0..4 {
                    let q = ((idx[a] - g.lo[a]) / g.h[a]).round() as isize;
                    m[a] = q.rem_euclid(g.n[a] as isize) as usize;
                }
                PointMetric::from_hermitian(self.metric[g.index(m)])
            }
            _ => Err(Error::Geometry("pointwise metrics need a complex surface".into())),
        }
    }
}

/// Input to [`lambda_contract`]: a 2-form, or the 4-form `F∧F` given by `F`.
#[derive(Clone, Copy, Debug)]
pub enum FormSamples<'a> {
    Two(&'a [TwoForm]),
    WedgeSquare(&'a [TwoForm]),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Contraction {
    /// `ΛF` per sample.
    Lie(Vec<Quaternion>),
    /// `Λ²(F∧F)` per sample.
    Scalar(Vec<f64>),
}

/// `Λ` (power 1) of a 2-form or `Λ²` (power 2) of `F∧F`, against the
/// Kähler form of `k` at its samples.
pub fn lambda_contract(form: FormSamples, k: &KahlerData, power: u8) -> Result<Contraction> {
    let metrics = k.point_metrics()?;
    let check = |len: usize| {
        if len != metrics.len() {
            Err(Error::Geometry(format!("{len} form samples for {} metric samples", metrics.len())))
        } else {
            Ok(())
        }
    };
    match (form, power) {
        (FormSamples::Two(f), 1) => {
            check(f.len())?;
            Ok(Contraction::Lie(f.iter().zip(&metrics).map(|(f, m)| m.lambda(f)).collect()))
        }
        (FormSamples::WedgeSquare(f), 2) => {
            check(f.len())?;
            Ok(Contraction::Scalar(f.iter().zip(&metrics).map(|(f, m)| m.lambda2_wedge(f)).collect()))
        }
        _ => Err(Error::Geometry(format!("degree mismatch for Λ^{power}"))),
    }
}

/// Bundle data for [`topological_constants`].
#[derive(Clone, Copy, Debug)]
pub enum BundleData<'a> {
    Flat,
    /// Curvature sampled at the nodes of a compact geometry.
    Curvature(&'a CurvatureField),
    /// Explicit instanton on ℂ².
    Instanton(&'a InstantonSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologicalConstants {
    pub s_hat: f64,
    /// `∫ (F∧F)∧ω^{n−2}`, divided by the volume on compact geometries and
    /// left as the raw integral on ℂ².
    pub c_hat: f64,
    pub c_z: f64,
    pub volume: f64,
    /// Truncation bound carried by `c_hat` on ℂ².
    pub tail_bound: f64,
}

/// `Ŝ`, `ĉ` and `c_z = α₀Ŝ + α₁(2ĉ/(n−2)! − 4|z|²)`, with `ĉ = 0` in complex
/// dimension 1 and `|z|² = (z, z)`.
pub fn topological_constants(
    k: &KahlerData,
    bundle: BundleData,
    alpha0: f64,
    alpha1: f64,
    z: Quaternion,
) -> Result<TopologicalConstants> {
    let n = k.geometry.complex_dim();
    let (s_hat, volume) = if k.geometry.is_compact() {
        (k.s_hat()?, k.volume())
    } else {
        (0.0, f64::INFINITY)
    };
    let (c_hat, tail) = match (bundle, n) {
        (_, 1) | (BundleData::Flat, _) => (0.0, 0.0),
        (BundleData::Curvature(f), _) => {
            if !k.geometry.is_compact() {
                return Err(Error::Geometry(
                    "sampled curvature on ℂ² has no tail control; pass the instanton".into(),
                ));
            }
            if f.values.len() != k.len() {
                return Err(Error::Geometry("curvature samples do not match the metric grid".into()));
            }
            let cell = match &k.domain {
                Domain::Periodic(g) => g.cell_volume(),
                Domain::Radial(_) => return Err(Error::Geometry("expected a periodic grid".into())),
            };
            let dens: Vec<f64> = f.values.iter().map(|v| -v.wedge_self().trace() * cell).collect();
            (pairwise_sum(&dens) / volume, 0.0)
        }
        (BundleData::Instanton(spec), _) => {
            if k.geometry.is_compact() {
                return Err(Error::Geometry("instantons are modelled on ℂ² only".into()));
            }
            let q = charge_quadrature(spec, 1e-3)?;
            let scale = 8.0 * PI * PI;
            (-scale * q.value, scale * (q.tail_bound + q.quadrature_error))
        }
    };
    let ff = if n >= 2 { 2.0 * c_hat } else { 0.0 };
    let c_z = alpha0 * s_hat + alpha1 * (ff - 4.0 * z.pairing(z));
    Ok(TopologicalConstants { s_hat, c_hat, c_z, volume, tail_bound: tail })
}
