//! Complex dimension 1: a line bundle with Hermitian metric
//! `H = e^{−μΦ−χ}` over a Riemann surface with Kähler potential `Φ`. There `F_H = (ΛF_H) ω` and `F∧F = 0`, so the
//! coupled system splits into `ΛF_H = z` and `S = Ŝ`.

use super::CouplingConstants;
use crate::error::{Error, Result};
use crate::kahler::{Domain, Geometry, KahlerData};
use crate::stencil;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineBundleMetric {
    /// Multiple `μ` of the base potential; contributes `F = −2iμ ω`.
    pub mu: f64,
    /// Remaining part of `−log H` at the samples of the base.
    pub chi: Vec<f64>,
}

impl LineBundleMetric {
    /// The metric whose curvature is `−2iμ ω`.
    pub fn constant_curvature(mu: f64, samples: usize) -> Self {
        LineBundleMetric { mu, chi: vec![0.0; samples] }
    }
}

/// Residual pair on a surface. Hermitian entries are coefficients of `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoupledResidual {
    pub hermitian: Vec<f64>,
    pub scalar: Vec<f64>,
    /// Samples that used one-sided stencils.
    pub boundary: Vec<bool>,
}

impl DecoupledResidual {
    fn sup(&self, v: &[f64]) -> f64 {
        v.iter().zip(&self.boundary).filter(|(_, b)| !**b).map(|(x, _)| x.abs()).fold(0.0, f64::max)
    }

    pub fn hermitian_norm(&self) -> f64 {
        self.sup(&self.hermitian)
    }

    pub fn scalar_norm(&self) -> f64 {
        self.sup(&self.scalar)
    }
}

/// `ΛF_H = −2i(μ + ∂∂̄χ / g)` as the coefficient of `i`.
pub fn line_bundle_contraction(k: &KahlerData, h: &LineBundleMetric) -> Result<Vec<f64>> {
    match k.geometry {
        Geometry::RiemannSurface { .. } | Geometry::P1FubiniStudy => {}
        g => return Err(Error::Geometry(format!("{g:?} is not a Riemann surface"))),
    }
    if h.chi.len() != k.len() {
        return Err(Error::Geometry(format!("{} bundle samples for {} base samples", h.chi.len(), k.len())));
    }
    match &k.domain {
        Domain::Radial(grid) => {
            let jets = k.radial.as_ref().ok_or_else(|| Error::Geometry("missing radial jets".into()))?;
            let chi_tt = stencil::d2(&h.chi, grid.h);
            Ok(chi_tt.iter().zip(&jets.psi).map(|(c, p)| -2.0 * (h.mu + c / p)).collect())
        }
        Domain::Periodic(grid) => {
            let chi = &h.chi;
            let out = (0..k.len())
                .map(|i| {
                    let mut lap = 0.0;
                    for ax in 0..2 {
                        let p = grid.neighbour(i, ax, 1).expect("periodic");
                        let m = grid.neighbour(i, ax, -1).expect("periodic");
                        lap += (chi[p] - 2.0 * chi[i] + chi[m]) / (grid.h[ax] * grid.h[ax]);
                    }
                    -2.0 * (h.mu + 0.25 * lap / k.metric[i][(0, 0)].re)
                })
                .collect();
            Ok(out)
        }
    }
}

/// `(ΛF_H − z, S − Ŝ)` with `z` the coefficient of `i`.
pub fn riemann_surface_decoupled_check(k: &KahlerData, h: &LineBundleMetric, z: f64) -> Result<DecoupledResidual> {
    let lf = line_bundle_contraction(k, h)?;
    let s_hat = k.s_hat()?;
    Ok(DecoupledResidual {
        hermitian: lf.iter().map(|v| v - z).collect(),
        scalar: k.scalar.iter().map(|s| s - s_hat).collect(),
        boundary: k.boundary.clone(),
    })
}

/// The coupled residual on a surface, `(ΛF_H − z, α₀S − c)` with
/// `c = α₀Ŝ`; the `Λ²(F∧F)` term vanishes in complex dimension 1.
pub fn surface_coupled_residual(
    k: &KahlerData,
    h: &LineBundleMetric,
    coupling: CouplingConstants,
    z: f64,
) -> Result<DecoupledResidual> {
    let lf = line_bundle_contraction(k, h)?;
    let c = coupling.alpha0 * k.s_hat()?;
    Ok(DecoupledResidual {
        hermitian: lf.iter().map(|v| v - z).collect(),
        scalar: k.scalar.iter().map(|s| coupling.alpha0 * s - c).collect(),
        boundary: k.boundary.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use std::f64::consts::PI;

    #[test]
    fn degree_one_bundle_on_the_sphere() {
        let grid = RadialGrid::new(1e-3, 1e3, 2000).unwrap();
        let k = KahlerData::fubini_study(&grid);
        let r = riemann_surface_decoupled_check(&k, &LineBundleMetric::constant_curvature(PI, k.len()), -2.0 * PI)
            .unwrap();
        assert!(r.hermitian_norm() < 1e-8, "{}", r.hermitian_norm());
        assert!(r.scalar_norm() < 1e-8, "{}", r.scalar_norm());
    }

    #[test]
    fn sampled_potential_part_on_a_coarse_sphere() {
        // χ = log(1+s) is π times the Fubini–Study potential: degree one.
        let grid = RadialGrid::new(0.1, 10.0, 400).unwrap();
        let k = KahlerData::fubini_study(&grid);
        let chi: Vec<f64> = (0..grid.len()).map(|i| grid.t(i).exp().ln_1p()).collect();
        let r = riemann_surface_decoupled_check(&k, &LineBundleMetric { mu: 0.0, chi }, -2.0 * PI).unwrap();
        assert!(r.hermitian_norm() < 1e-6, "{}", r.hermitian_norm());
    }

    #[test]
    fn rejects_surfaces_of_dimension_two() {
        let k = KahlerData::flat_torus4(1.0, 4);
        let h = LineBundleMetric::constant_curvature(0.0, k.len());
        assert!(riemann_surface_decoupled_check(&k, &h, 0.0).unwrap_err().is_input());
    }
}
