//! The coupled Kähler–Yang–Mills system: residuals, the CYM functional,
//! and continuation of U(2)-invariant solutions on ℂ² from the basic
//! instanton.

pub mod banded;
mod eym;
mod newton;
mod pair;
pub mod reduced;
pub mod scheme;
mod surfaces;

pub use eym::{eym_asd_reduction_defect, eym_residual};
pub use newton::{newton, newton_continuation, ContinuationConfig, ContinuationResult, NewtonOutcome};
pub use pair::{coupled_residual, cym_functional, CoupledResidual, CymReport, PairSamples};
pub use reduced::{c2_residual, c2_residual_with, linearization_apply, Bump, Profile, RadialResidual};
pub use scheme::BoxScheme;
pub use surfaces::{line_bundle_contraction, riemann_surface_decoupled_check, surface_coupled_residual, DecoupledResidual, LineBundleMetric};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::kahler::{Domain, Geometry, KahlerData};
use crate::reduce::max_abs;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConstants {
    pub alpha0: f64,
    pub alpha1: f64,
}

impl CouplingConstants {
    pub fn new(alpha0: f64, alpha1: f64) -> Self {
        CouplingConstants { alpha0, alpha1 }
    }

    /// The ℂ² normalization `α₀ = 1`, `α₁ = −α/2`, under which the scalar
    /// equation reads `S + α tr(F∧F)/vol = c`.
    pub fn from_alpha(alpha: f64) -> Self {
        CouplingConstants { alpha0: 1.0, alpha1: -0.5 * alpha }
    }

    pub fn alpha(&self) -> f64 {
        -2.0 * self.alpha1 / self.alpha0
    }

    pub fn ratio(&self) -> f64 {
        self.alpha1 / self.alpha0
    }

    /// `α₁/α₀ > 0`, the range where the coupled symplectic form is Kähler.
    pub fn is_kahler_range(&self) -> bool {
        self.ratio() > 0.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualNorms {
    /// Sup of `|ΛF|` over the midpoints.
    pub hermitian: f64,
    /// Sup of the scalar equation residual over the midpoints.
    pub scalar: f64,
    /// Sup over every row of the discrete system.
    pub all: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub newton_iterations: usize,
    pub residual_history: Vec<f64>,
    pub step: f64,
}

/// A radial pair (metric, connection) on ℂ² with its coupling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionPair {
    pub grid: RadialGrid,
    pub lam2: f64,
    pub c: f64,
    pub alpha: f64,
    pub coupling: CouplingConstants,
    pub charge: u32,
    /// Node unknowns `φ, U, P, κ, f, g`, six per node.
    pub state: Vec<f64>,
    pub norms: ResidualNorms,
    pub step: StepInfo,
}

impl SolutionPair {
    /// Flat metric with the basic instanton of size² `1/lam2`, at α = 0.
    pub fn seed(grid: RadialGrid, lam2: f64) -> Result<Self> {
        if !(lam2 > 0.0) {
            return Err(Error::input("instanton scale must be positive"));
        }
        if grid.len() < 8 {
            return Err(Error::input("radial grid needs at least 8 nodes"));
        }
        let scheme = BoxScheme::new(grid, lam2);
        let state = vec![0.0; scheme.unknowns()];
        Ok(Self::from_state(scheme, 0.0, state, StepInfo::default()))
    }

    pub(crate) fn from_state(scheme: BoxScheme, alpha: f64, state: Vec<f64>, step: StepInfo) -> Self {
        let mut p = SolutionPair {
            grid: scheme.grid,
            lam2: scheme.lam2,
            c: scheme.c,
            alpha,
            coupling: CouplingConstants::from_alpha(alpha),
            charge: 1,
            state,
            norms: ResidualNorms::default(),
            step,
        };
        p.norms = p.evaluate_norms();
        p
    }

    pub fn scheme(&self) -> BoxScheme {
        BoxScheme { grid: self.grid.clone(), lam2: self.lam2, c: self.c }
    }

    pub fn evaluate_norms(&self) -> ResidualNorms {
        let s = self.scheme();
        let r = s.residual_f64(&self.state, self.alpha);
        let mut herm = 0.0_f64;
        let mut scal = 0.0_f64;
        for i in 0..self.grid.len() - 1 {
            let row = 3 + scheme::STRIDE * i;
            scal = scal.max(r[row + 3].abs());
            herm = herm.max(r[row + 5].abs());
        }
        ResidualNorms { hermitian: herm, scalar: scal, all: max_abs(&r) }
    }

    /// Node values of one unknown (see [`scheme::PHI`] and friends).
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.state.iter().skip(c).step_by(scheme::STRIDE).copied().collect()
    }

    /// Scalar curvature at the midpoints.
    pub fn scalar_curvature(&self) -> Vec<f64> {
        self.scheme().midpoints(&self.state).iter().map(|m| m.scalar).collect()
    }

    pub fn scalar_spread(&self) -> f64 {
        let s = self.scalar_curvature();
        let hi = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn instanton_number(&self) -> f64 {
        self.scheme().charge(&self.state)
    }

    /// The metric rebuilt from the node potential by finite differences.
    pub fn kahler(&self) -> Result<KahlerData> {
        KahlerData::from_potential(Geometry::C2Radial, Domain::Radial(self.grid.clone()), self.component(scheme::PHI))
    }

    /// Pointwise metric and curvature at the midpoints.
    pub fn samples(&self) -> Result<PairSamples> {
        PairSamples::from_scheme(&self.scheme(), &self.state)
    }

    /// State increment adding `phi` to the potential and `a` to the gauge
    /// exponent, with the auxiliary node unknowns moved consistently.
    pub fn perturbation(&self, phi: &Profile, a: &Profile) -> Vec<f64> {
        use scheme::{F, G, KAPPA, P, PHI, STRIDE, U};
        let mut d = vec![0.0; self.state.len()];
        for i in 0..self.grid.len() {
            let t = self.grid.t(i);
            let e = (-t).exp();
            let p = phi.jet(t);
            let f = a.jet(t);
            let x = &self.state[STRIDE * i..STRIDE * (i + 1)];
            let pt = x[KAPPA] * (1.0 + x[P]) / ((1.0 + x[U]) * (1.0 + x[U]));
            let un = x[U] + e * p[1];
            let pn = x[P] + e * p[2];
            let kn = (1.0 + un) * (1.0 + un) * (pt + e * (p[3] - p[2])) / (1.0 + pn);
            let o = &mut d[STRIDE * i..STRIDE * (i + 1)];
            o[PHI] = p[0];
            o[U] = e * p[1];
            o[P] = e * p[2];
            o[KAPPA] = kn - x[KAPPA];
            o[F] = f[0];
            o[G] = f[1];
        }
        d
    }

    /// Same pair with `delta` added to the state and norms re-evaluated.
    pub fn perturbed(&self, delta: &[f64]) -> Result<Self> {
        if delta.len() != self.state.len() {
            return Err(Error::input("perturbation has the wrong length"));
        }
        let state: Vec<f64> = self.state.iter().zip(delta).map(|(a, b)| a + b).collect();
        if !self.scheme().admissible(&state) {
            return Err(Error::Degenerate { index: 0, value: -1.0 });
        }
        Ok(Self::from_state(self.scheme(), self.alpha, state, StepInfo::default()))
    }
}

/// Pulls a pair at coupling α back by the homothety `z ↦ z/√(β/α)` and
/// scales the metric by `β/α`, giving a pair at coupling β. Node values
/// are carried over unchanged onto the grid shifted by `log(β/α)`.
pub fn rescale_solution(p: &SolutionPair, beta: f64) -> Result<SolutionPair> {
    if !(p.alpha * beta > 0.0) {
        return Err(Error::input(format!("rescaling needs α·β > 0 (α = {}, β = {beta})", p.alpha)));
    }
    let c = beta / p.alpha;
    let mut state = p.state.clone();
    for v in state.iter_mut().step_by(scheme::STRIDE) {
        *v *= c;
    }
    let scheme = BoxScheme { grid: p.grid.shifted(c.ln()), lam2: p.lam2 * c, c: p.c / c };
    let mut out = SolutionPair::from_state(scheme, beta, state, p.step.clone());
    out.charge = p.charge;
    Ok(out)
}
