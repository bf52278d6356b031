//! The smooth character on sampled data and its comparison with the exact
//! invariant.

use super::{alpha_pieces, SheafOnP1, TestConfig};
use crate::coupled::{line_bundle_contraction, LineBundleMetric};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::kahler::{topological_constants, BundleData, KahlerData};
use crate::quaternion;
use num::complex::Complex64;
use num::ToPrimitive;
use serde::Serialize;
use std::f64::consts::PI;

/// Diagonal bundle data: `ΛF_H` per summand as the coefficient of `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterBundle {
    pub contraction: Vec<Vec<f64>>,
    /// `Λ²(F_H∧F_H)` samples; `None` when it vanishes identically.
    pub wedge: Option<Vec<f64>>,
}

impl CharacterBundle {
    pub fn trivial(rank: usize, samples: usize) -> Self {
        CharacterBundle { contraction: vec![vec![0.0; samples]; rank], wedge: None }
    }

    /// `⊕ L_a` over a Riemann surface.
    pub fn from_line_bundles(k: &KahlerData, h: &[LineBundleMetric]) -> Result<Self> {
        let contraction = h.iter().map(|l| line_bundle_contraction(k, l)).collect::<Result<_>>()?;
        Ok(CharacterBundle { contraction, wedge: None })
    }
}

/// A generator `ζ`: Hamiltonian `φ₁ + iφ₂` on the base and the vertical part
/// `θ_Hζ`, diagonal, as coefficients of `i` per summand.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldData {
    pub hamiltonian: Vec<Complex64>,
    pub vertical: Vec<Vec<Complex64>>,
}

/// `F_α(ζ) = −∫ (φ(α₀S + α₁Λ²(F∧F) − c) − 4α₁(θ_Hζ, ΛF_H)) vol`.
///
/// With `c = None` the constant is recomputed from the coupling: `α₀Ŝ` plus
/// `α₁` times the mean of `Λ²(F∧F)`.
pub fn futaki_character_numeric(
    k: &KahlerData,
    bundle: &CharacterBundle,
    field: &VectorFieldData,
    alpha0: f64,
    alpha1: f64,
    c: Option<f64>,
) -> Result<Complex64> {
    if !k.geometry.is_compact() {
        return Err(Error::Geometry("the character needs a compact base".into()));
    }
    let n = k.len();
    let rank = bundle.contraction.len();
    if field.hamiltonian.len() != n || bundle.contraction.iter().any(|v| v.len() != n) {
        return Err(Error::input("sample counts do not match the base"));
    }
    if field.vertical.len() != rank || field.vertical.iter().any(|v| v.len() != n) {
        return Err(Error::input("vertical part does not match the bundle"));
    }
    if let Some(w) = &bundle.wedge {
        if w.len() != n {
            return Err(Error::input("wedge samples do not match the base"));
        }
    }
    let wedge = |i: usize| bundle.wedge.as_ref().map_or(0.0, |w| w[i]);
    let c = match c {
        Some(c) => c,
        None => {
            let t = topological_constants(k, BundleData::Flat, alpha0, alpha1, quaternion::ZERO)?;
            let mean_wedge = match &bundle.wedge {
                Some(w) => k.integrate(w) / t.volume,
                None => 0.0,
            };
            t.c_z + alpha1 * mean_wedge
        }
    };
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    for i in 0..n {
        let bracket = alpha0 * k.scalar[i] + alpha1 * wedge(i) - c;
        // (ξ, η) = −tr(ξη) = Σ ξ_a η_a for diagonal i·ξ_a, i·η_a
        let pair: Complex64 = (0..rank).map(|a| field.vertical[a][i] * bundle.contraction[a][i]).sum();
        let v = -(field.hamiltonian[i] * bracket - 4.0 * alpha1 * pair);
        re[i] = v.re;
        im[i] = v.im;
    }
    Ok(Complex64::new(k.integrate(&re), k.integrate(&im)))
}

/// The generator of `[z₀:z₁] ↦ [λ^{u₀}z₀ : λ^{u₁}z₁]` on a radial metric of
/// area one, lifted to `⊕O(a_i)` with fibre shifts. The moment map runs from
/// `u₁` to `u₀`.
pub fn rotation_field(k: &KahlerData, base_weights: [i64; 2], splitting: &[i64], shifts: &[i64]) -> Result<VectorFieldData> {
    let jets = k.radial.as_ref().ok_or_else(|| Error::Geometry("rotation needs a radial metric".into()))?;
    let (u0, u1) = (base_weights[0] as f64, base_weights[1] as f64);
    let m: Vec<f64> = jets.u.iter().map(|u| u1 + (u0 - u1) * PI * u).collect();
    let vertical = splitting
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let sh = shifts.get(i).copied().unwrap_or(0) as f64;
            m.iter().map(|mi| Complex64::new(-2.0 * PI * (a as f64 * mi + sh), 0.0)).collect()
        })
        .collect();
    Ok(VectorFieldData { hamiltonian: m.iter().map(|&v| Complex64::new(v, 0.0)).collect(), vertical })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeReport {
    /// `F_α` from the exact weights, in floating point.
    pub algebraic: f64,
    /// `−F_α(ζ)/(4 vol α₀)` from quadrature.
    pub numeric: f64,
    /// Relative when `algebraic ≠ 0`, absolute otherwise.
    pub discrepancy: f64,
    pub relative: bool,
    /// `α = 4π² r α₁/α₀`, the value that matches the character.
    pub alpha: f64,
    /// `α₁π²r/α₀`, a quarter of the matching value.
    pub alpha_quarter: f64,
}

const BRIDGE_NODES: usize = 4000;

/// Exact `F_α` against the character of the matching generator on the
/// Fubini–Study sphere with constant-curvature metrics on each `O(a_i)`.
///
/// Only `L = O(1)` and degree-zero bundles are realized.
pub fn bridge_check(e: &SheafOnP1, cfg: &TestConfig, alpha0: f64, alpha1: f64) -> Result<BridgeReport> {
    if !e.is_degree_zero() {
        return Err(Error::input("the bridge needs a degree-zero bundle"));
    }
    if alpha0 == 0.0 {
        return Err(Error::input("α₀ must be nonzero"));
    }
    cfg.validate(e)?;
    let r = e.rank() as f64;
    let alpha = 4.0 * PI * PI * r * alpha1 / alpha0;
    let pieces = alpha_pieces(cfg, e, 1)?;
    let algebraic = pieces.futaki().to_f64().unwrap_or(f64::NAN) + alpha * pieces.alpha_coefficient().to_f64().unwrap_or(f64::NAN);

    let grid = RadialGrid::new(1e-3, 1e3, BRIDGE_NODES)?;
    let k = KahlerData::fubini_study(&grid);
    let n = k.len();
    let metrics: Vec<LineBundleMetric> = e
        .splitting
        .iter()
        .map(|&a| LineBundleMetric { mu: 0.0, chi: (0..n).map(|i| a as f64 * grid.t(i).exp().ln_1p()).collect() })
        .collect();
    let bundle = CharacterBundle::from_line_bundles(&k, &metrics)?;
    let field = match cfg {
        TestConfig::Trivial => VectorFieldData {
            hamiltonian: vec![Complex64::new(0.0, 0.0); n],
            vertical: vec![vec![Complex64::new(0.0, 0.0); n]; e.rank()],
        },
        TestConfig::Product { base_weights, shifts } => rotation_field(&k, *base_weights, &e.splitting, shifts)?,
        TestConfig::BasePreserving { .. } => {
            let graded = cfg.graded(e)?;
            // weight of each summand of E, read off the graded pieces
            let mut pool: Vec<(i64, i64)> = graded.iter().flat_map(|(g, w)| g.iter().map(move |a| (*a, *w))).collect();
            let weights: Vec<i64> = e
                .splitting
                .iter()
                .map(|a| {
                    let j = pool.iter().position(|(b, _)| b == a).expect("graded pieces exhaust E");
                    pool.remove(j).1
                })
                .collect();
            VectorFieldData {
                hamiltonian: vec![Complex64::new(0.0, 0.0); n],
                vertical: weights.iter().map(|&w| vec![Complex64::new(-2.0 * PI * w as f64, 0.0); n]).collect(),
            }
        }
    };
    let value = futaki_character_numeric(&k, &bundle, &field, alpha0, alpha1, None)?;
    let numeric = -value.re / (4.0 * k.volume() * alpha0);
    let relative = algebraic != 0.0;
    let diff = (algebraic - numeric).abs();
    Ok(BridgeReport {
        algebraic,
        numeric,
        discrepancy: if relative { diff / algebraic.abs() } else { diff },
        relative,
        alpha,
        alpha_quarter: alpha / 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::{Domain, Geometry};

    fn sphere() -> KahlerData {
        KahlerData::fubini_study(&RadialGrid::new(1e-3, 1e3, 2000).unwrap())
    }

    #[test]
    fn rotation_on_round_sphere_vanishes() {
        let k = sphere();
        let f = rotation_field(&k, [1, 0], &[0], &[]).unwrap();
        let v = futaki_character_numeric(&k, &CharacterBundle::trivial(1, k.len()), &f, 1.0, 0.7, None).unwrap();
        assert!(v.norm() < 1e-8, "{v}");
    }

    #[test]
    fn scalar_curvature_as_hamiltonian() {
        let grid = RadialGrid::new(1e-3, 1e3, 2000).unwrap();
        let phi = (0..grid.len()).map(|i| 0.005 * (-(grid.t(i) - 1.0).powi(2)).exp()).collect();
        let k = KahlerData::from_potential(Geometry::P1FubiniStudy, Domain::Radial(grid), phi).unwrap();
        let s_hat = k.s_hat().unwrap();
        let dev: Vec<f64> = k.scalar.iter().map(|s| s - s_hat).collect();
        let field = VectorFieldData { hamiltonian: dev.iter().map(|&d| Complex64::new(d, 0.0)).collect(), vertical: vec![vec![Complex64::new(0.0, 0.0); k.len()]] };
        let b = CharacterBundle::trivial(1, k.len());
        let v = futaki_character_numeric(&k, &b, &field, 1.0, 0.0, None).unwrap();
        let sq: Vec<f64> = dev.iter().map(|d| d * d).collect();
        let expect = -k.integrate(&sq);
        assert!(expect < 0.0);
        assert!((v.re - expect).abs() < 1e-10 * expect.abs(), "{} vs {expect}", v.re);
        let w = futaki_character_numeric(&k, &b, &field, 2.0, 0.0, None).unwrap();
        assert!((w.re - 2.0 * v.re).abs() < 1e-10 * v.re.abs());
    }

    #[test]
    fn non_compact_base_rejected() {
        let k = KahlerData::flat_c2(&RadialGrid::new(0.1, 10.0, 50).unwrap());
        let f = VectorFieldData { hamiltonian: vec![Complex64::new(0.0, 0.0); 50], vertical: vec![] };
        let b = CharacterBundle { contraction: vec![], wedge: None };
        assert!(futaki_character_numeric(&k, &b, &f, 1.0, 1.0, None).unwrap_err().is_input());
    }

    #[test]
    fn bridge_cases() {
        let e = SheafOnP1::new(vec![1, -1]).unwrap();
        let t = bridge_check(&e, &TestConfig::Trivial, 1.0, 0.1).unwrap();
        assert_eq!((t.algebraic, t.numeric, t.discrepancy), (0.0, 0.0, 0.0));
        let sub = TestConfig::BasePreserving { filtration: vec![vec![1]], weights: vec![1, 0] };
        let b = bridge_check(&e, &sub, 1.0, 0.1).unwrap();
        assert!((b.algebraic + b.alpha / 2.0).abs() < 1e-12);
        assert!(b.discrepancy < 1e-4, "{b:?}");
        let rot = TestConfig::Product { base_weights: [1, 0], shifts: vec![2, -1] };
        let p = bridge_check(&e, &rot, 2.0, 0.3).unwrap();
        assert!(p.discrepancy < 1e-4, "{p:?}");
        let triv = SheafOnP1::trivial(2);
        let p = bridge_check(&triv, &TestConfig::Product { base_weights: [1, 0], shifts: vec![] }, 1.0, 0.2).unwrap();
        assert!(p.discrepancy < 1e-6, "{p:?}");
        assert!(bridge_check(&SheafOnP1::new(vec![1]).unwrap(), &TestConfig::Trivial, 1.0, 0.1).is_err());
    }
}
