//! Weighted norms on radial samples and the radial model of the connection
//! Laplacian on ℝ⁴: `−∂²_r − (3/r)∂_r + V(r)`.

use crate::coupled::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightedNormSpec {
    pub delta: f64,
    pub r0: f64,
    /// Derivative order, at most 2.
    pub order: usize,
    pub beta: f64,
}

impl WeightedNormSpec {
    pub fn sup(delta: f64, r0: f64) -> Self {
        WeightedNormSpec { delta, r0, order: 0, beta: 0.5 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0) {
            return Err(Error::input("r₀ must be positive"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::input("Hölder exponent must lie in (0, 1)"));
        }
        if self.order > 2 {
            return Err(Error::input("derivative order above 2 is not supported"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedNorm {
    /// `+∞` when the annulus maxima keep growing.
    pub value: f64,
    pub growing: bool,
    /// `r^{−δ}`-weighted local norm on each dyadic annulus `[r₀2^j, r₀2^{j+1})`.
    pub annuli: Vec<f64>,
}

/// Annulus maxima growing faster than this per octave count as growth.
const GROWTH_SLOPE: f64 = 1e-3;

fn dyadic_annuli(r: &[f64], r0: f64) -> Result<Vec<Vec<usize>>> {
    if r.is_empty() || r.iter().copied().fold(f64::INFINITY, f64::min) > r0 * (1.0 + 1e-12) {
        return Err(Error::input("samples do not reach r₀"));
    }
    let r_max = r.iter().copied().fold(0.0, f64::max);
    let count = ((r_max / r0).log2().floor() as usize + 1).max(1);
    let mut out = vec![Vec::new(); count];
    for (i, &ri) in r.iter().enumerate() {
        if ri < r0 * (1.0 - 1e-12) {
            continue;
        }
        let j = ((ri / r0).log2().max(0.0).floor() as usize).min(count - 1);
        out[j].push(i);
    }
    out.retain(|a| !a.is_empty());
    Ok(out)
}

fn summarize(annuli: Vec<f64>) -> WeightedNorm {
    // slope of log max against the octave index over the outer half
    let m = annuli.len();
    let tail: Vec<(f64, f64)> =
        annuli.iter().enumerate().skip(m / 2).filter(|(_, v)| **v > 0.0).map(|(j, v)| (j as f64, v.ln())).collect();
    let growing = tail.len() >= 2 && least_squares(&tail).0 > GROWTH_SLOPE;
    let value = if growing { f64::INFINITY } else { annuli.iter().copied().fold(0.0, f64::max) };
    WeightedNorm { value, growing, annuli }
}

/// `sup_{r ≥ r₀} r^{−δ}|φ|`, estimated annulus by annulus.
pub fn weighted_sup_norm(r: &[f64], values: &[f64], spec: &WeightedNormSpec) -> Result<WeightedNorm> {
    spec.validate()?;
    if r.len() != values.len() {
        return Err(Error::input("radii and values differ in length"));
    }
    let annuli = dyadic_annuli(r, spec.r0)?
        .iter()
        .map(|idx| idx.iter().map(|&i| r[i].powf(-spec.delta) * values[i].abs()).fold(0.0, f64::max))
        .collect();
    Ok(summarize(annuli))
}

/// Derivatives of `x ↦ f(x)` at scattered sorted points by three-point
/// quotients.
fn derivative(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 { (0, 1) } else if i + 1 == n { (n - 2, n - 1) } else { (i - 1, i + 1) };
            (f[b] - f[a]) / (x[b] - x[a])
        })
        .collect()
}

/// `C^{k,β}_δ` norm: on each annulus the rescaled `φ(ρ·)` on `[1, 2)` is
/// measured by its derivatives up to order `k` and the largest Hölder
/// quotient of the `k`-th one, then weighted by `ρ^{−δ}`. An estimator,
/// limited by the sampling.
pub fn weighted_holder_norm(r: &[f64], values: &[f64], spec: &WeightedNormSpec) -> Result<WeightedNorm> {
    spec.validate()?;
    if r.len() != values.len() {
        return Err(Error::input("radii and values differ in length"));
    }
    let mut annuli = Vec::new();
    for idx in dyadic_annuli(r, spec.r0)? {
        if idx.len() < 3 {
            continue;
        }
        let rho = r[idx[0]];
        let x: Vec<f64> = idx.iter().map(|&i| r[i] / rho).collect();
        let mut f: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        let mut norm = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for _ in 0..spec.order {
            f = derivative(&x, &f);
            norm += f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        }
        let mut holder = 0.0f64;
        for a in 0..x.len() {
            for b in a + 1..x.len() {
                holder = holder.max((f[b] - f[a]).abs() / (x[b] - x[a]).powf(spec.beta));
            }
        }
        annuli.push(rho.powf(-spec.delta) * (norm + holder));
    }
    Ok(summarize(annuli))
}

/// Both roots `−1 ± √(1+λ)` per eigenvalue, as `(δ⁺, δ⁻)`, sorted by `λ`.
pub fn indicial_roots(eigenvalues: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut ev = eigenvalues.to_vec();
    if let Some(bad) = ev.iter().find(|l| !(**l >= 0.0)) {
        return Err(Error::input(format!("eigenvalue {bad} is negative")));
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev
        .iter()
        .map(|l| {
            let s = (1.0 + l).sqrt();
            (-1.0 + s, -1.0 - s)
        })
        .collect())
}

/// Lowest eigenvalues of the Laplacian on the round `S³` among zonal
/// functions `f(ψ)`, from a dense finite-volume discretization of
/// `−sin⁻²ψ ∂_ψ(sin²ψ ∂_ψ f)`. Far from the instanton core the connection is
/// gauge equivalent to the trivial one, so these are the `Δ_B` values of
/// the invariant sector; they approximate `d(d+2)`.
pub fn delta_b_table(modes: usize, cells: usize) -> Result<Vec<f64>> {
    if cells < 2 * modes + 4 {
        return Err(Error::input("too few cells for the requested modes"));
    }
    let h = std::f64::consts::PI / cells as f64;
    let centers: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
    let mass: Vec<f64> = centers.iter().map(|c| c.sin().powi(2) * h).collect();
    let mut a = DMatrix::<f64>::zeros(cells, cells);
    for i in 0..cells - 1 {
        let face = ((i + 1) as f64 * h).sin().powi(2) / h;
        let e = face / (mass[i] * mass[i + 1]).sqrt();
        a[(i, i)] += face / mass[i];
        a[(i + 1, i + 1)] += face / mass[i + 1];
        a[(i, i + 1)] = -e;
        a[(i + 1, i)] = -e;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.truncate(modes);
    Ok(ev)
}

/// Coefficient of the instanton's decaying term `8/(r²(1+r²)²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InstantonProfile {
    pub strength: f64,
}

impl InstantonProfile {
    pub const FLAT: InstantonProfile = InstantonProfile { strength: 0.0 };
    pub const BASIC: InstantonProfile = InstantonProfile { strength: 1.0 };

    /// `V_λ(r) = (λ + 8κ(1 − p)²)/r²` with the profile factor `p = r²/(1+r²)`.
    pub fn potential(&self, lambda: f64, r: f64) -> f64 {
        let q = 1.0 / (1.0 + r * r);
        (lambda + 8.0 * self.strength * q * q) / (r * r)
    }
}

/// Finite-volume discretization with cells around each node, zero flux
/// through the innermost face and a Dirichlet value at the last node.
/// Unknowns are nodes `0..N`; node `N` is the boundary.
#[derive(Clone, Debug)]
pub struct RadialOperator {
    pub r: Vec<f64>,
    /// `∫ r³ dr` over each cell.
    pub mass: Vec<f64>,
    /// `r³/Δr` on the face between nodes `i` and `i+1`.
    pub face: Vec<f64>,
    pub potential: Vec<f64>,
}

pub fn assemble_radial_laplacian(grid: &RadialGrid, lambda: f64, profile: InstantonProfile) -> Result<RadialOperator> {
    assemble_on_nodes(&grid.nodes_r(), lambda, profile)
}

pub fn assemble_on_nodes(r: &[f64], lambda: f64, profile: InstantonProfile) -> Result<RadialOperator> {
    if !(lambda >= 0.0) {
        return Err(Error::input("sector eigenvalue must be non-negative"));
    }
    if r.len() < 4 || r.windows(2).any(|w| !(w[1] > w[0])) || !(r[0] > 0.0) {
        return Err(Error::input("radial nodes must be positive and increasing"));
    }
    let n = r.len() - 1;
    let mid: Vec<f64> = r.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
    let face: Vec<f64> = (0..n).map(|i| mid[i].powi(3) / (r[i + 1] - r[i])).collect();
    let mass: Vec<f64> = (0..n)
        .map(|i| {
            let lo = if i == 0 { r[0] } else { mid[i - 1] };
            (mid[i].powi(4) - lo.powi(4)) / 4.0
        })
        .collect();
    let potential = r[..n].iter().map(|&ri| profile.potential(lambda, ri)).collect();
    Ok(RadialOperator { r: r.to_vec(), mass, face, potential })
}

impl RadialOperator {
    pub fn unknowns(&self) -> usize {
        self.mass.len()
    }

    /// Rows at the unknown nodes; `u` includes the boundary value.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = self.unknowns();
        assert_eq!(u.len(), n + 1, "values at every node expected");
        (0..n)
            .map(|i| {
                let mut flux = self.face[i] * (u[i] - u[i + 1]);
                if i > 0 {
                    flux += self.face[i - 1] * (u[i] - u[i - 1]);
                }
                flux / self.mass[i] + self.potential[i] * u[i]
            })
            .collect()
    }

    /// `Σ m_i u_i v_i` over the unknowns.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.mass.iter().zip(u).zip(v).map(|((m, a), b)| m * a * b).sum()
    }

    /// Solves `L u = f` with `u = 0` at the outer node.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.unknowns();
        if rhs.len() != n {
            return Err(Error::input(format!("{} right-hand side values for {n} unknowns", rhs.len())));
        }
        let mut a = BandMatrix::zeros(n, 1, 1);
        for i in 0..n {
            let m = self.mass[i];
            let mut d = self.face[i] + self.potential[i] * m;
            if i > 0 {
                d += self.face[i - 1];
                a.set(i, i - 1, -self.face[i - 1]);
            }
            if i + 1 < n {
                a.set(i, i + 1, -self.face[i]);
            }
            a.set(i, i, d);
        }
        let lu = a.factor()?;
        let b: Vec<f64> = rhs.iter().zip(&self.mass).map(|(f, m)| f * m).collect();
        let mut u = lu.solve(&b);
        u.push(0.0);
        Ok(u)
    }

    /// Symmetric tridiagonal form `M^{−1/2}(K + MV)M^{−1/2}`.
    fn symmetric(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.unknowns();
        let d = (0..n)
            .map(|i| (self.face[i] + if i > 0 { self.face[i - 1] } else { 0.0 }) / self.mass[i] + self.potential[i])
            .collect();
        let e = (0..n - 1).map(|i| -self.face[i] / (self.mass[i] * self.mass[i + 1]).sqrt()).collect();
        (d, e)
    }

    /// Number of eigenvalues below `x` (Sturm count).
    fn count_below(d: &[f64], e: &[f64], x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..d.len() {
            let off = if i > 0 { e[i - 1] * e[i - 1] / q } else { 0.0 };
            q = d[i] - x - off;
            if q == 0.0 {
                q = f64::EPSILON * (d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Lowest eigenvalue of the Dirichlet problem, by bisection on the
    /// Sturm count.
    pub fn lowest_eigenvalue(&self) -> f64 {
        let (d, e) = self.symmetric();
        // Gershgorin bounds
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..d.len() {
            let rad = if i > 0 { e[i - 1].abs() } else { 0.0 } + e.get(i).map_or(0.0, |v| v.abs());
            lo = lo.min(d[i] - rad);
            hi = hi.max(d[i] + rad);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if Self::count_below(&d, &e, mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * hi.abs().max(1e-300) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

fn least_squares(p: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = p.len() as f64;
    let mx = p.iter().map(|v| v.0).sum::<f64>() / n;
    let my = p.iter().map(|v| v.1).sum::<f64>() / n;
    let sxx: f64 = p.iter().map(|v| (v.0 - mx).powi(2)).sum();
    let sxy: f64 = p.iter().map(|v| (v.0 - mx) * (v.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (p.iter().map(|v| (v.1 - icpt - slope * v.0).powi(2)).sum::<f64>() / n).sqrt();
    (slope, icpt, rms)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    /// Fitted `δ` in `|u| ~ r^δ`; `None` for a zero solution.
    pub exponent: Option<f64>,
    pub fit_residual: f64,
    pub window: (f64, f64),
    pub trivial: bool,
    pub flagged: bool,
}

/// Largest acceptable rms of the log-log fit.
const FIT_TOLERANCE: f64 = 0.05;

/// Solves `L u = f` and fits `log|u|` against `log r` on the outer third
/// (in `log r`) of `[r_f, R/10]`, where `r_f` bounds the support of `f`
/// and `R` is the outer node.
pub fn decay_probe(op: &RadialOperator, rhs: &[f64]) -> Result<DecayReport> {
    let support = rhs
        .iter()
        .rposition(|v| *v != 0.0)
        .map(|i| op.r[i]);
    let r_out = *op.r.last().expect("nonempty");
    let Some(r_f) = support else {
        return Ok(DecayReport { exponent: None, fit_residual: 0.0, window: (r_out, r_out), trivial: true, flagged: false });
    };
    if r_out < 10.0 * r_f {
        return Err(Error::input("outer radius must be at least ten times the support radius"));
    }
    let u = op.solve(rhs)?;
    let (a, b) = (r_f.ln(), (r_out / 10.0).ln());
    let lo = (a + 2.0 * (b - a) / 3.0).exp();
    let hi = b.exp();
    let pts: Vec<(f64, f64)> = op
        .r
        .iter()
        .zip(&u)
        .filter(|(r, _)| **r >= lo && **r <= hi)
        .map(|(r, v)| (r.ln(), v.abs().max(f64::MIN_POSITIVE).ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::input("fit window holds fewer than three nodes"));
    }
    let signs_change = op.r.iter().zip(&u).filter(|(r, _)| **r >= lo && **r <= hi).map(|(_, v)| v.signum()).collect::<Vec<_>>();
    let mixed = signs_change.windows(2).any(|w| w[0] != w[1]);
    let (slope, _, rms) = least_squares(&pts);
    Ok(DecayReport {
        exponent: Some(slope),
        fit_residual: rms,
        window: (lo, hi),
        trivial: false,
        flagged: mixed || rms > FIT_TOLERANCE,
    })
}

/// A narrow bump at `center`, zero beyond three widths.
pub fn bump_rhs(op: &RadialOperator, center: f64, width: f64) -> Vec<f64> {
    op.r[..op.unknowns()]
        .iter()
        .map(|r| {
            let x = (r - center) / width;
            if x.abs() < 3.0 {
                (-x * x).exp()
            } else {
                0.0
            }
        })
        .collect()
}
