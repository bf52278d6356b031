//! Exact α-K-stability invariants for split bundles over `P¹`, plus the
//! smooth Futaki-type character they are compared against.
//!
//! Everything outside [`futaki`] is exact rational arithmetic.

mod futaki;
pub mod poly;

pub use futaki::{
    bridge_check, futaki_character_numeric, rotation_field, BridgeReport, CharacterBundle, VectorFieldData,
};
pub use poly::{RationalPoly, Q};

use crate::error::{Error, Result};
use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `E = ⊕ O(a_i)` on `P¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafOnP1 {
    pub splitting: Vec<i64>,
}

impl SheafOnP1 {
    pub fn new(splitting: Vec<i64>) -> Result<Self> {
        if splitting.is_empty() {
            return Err(Error::input("a sheaf needs rank at least one"));
        }
        Ok(SheafOnP1 { splitting })
    }

    pub fn trivial(rank: usize) -> Self {
        SheafOnP1 { splitting: vec![0; rank.max(1)] }
    }

    pub fn rank(&self) -> usize {
        self.splitting.len()
    }

    pub fn degree(&self) -> i64 {
        self.splitting.iter().sum()
    }

    pub fn is_degree_zero(&self) -> bool {
        self.degree() == 0
    }
}

/// `P(k) = Σ (pk + a_i + 1)` for the polarization `O(p)`.
pub fn hilbert_poly(s: &SheafOnP1, p: u32) -> RationalPoly {
    multiset_hilbert(&s.splitting, p)
}

fn multiset_hilbert(a: &[i64], p: u32) -> RationalPoly {
    let d0 = poly::q(p as i64 * a.len() as i64);
    let d1 = poly::q(a.iter().map(|v| v + 1).sum());
    RationalPoly::linear(d0, d1)
}

/// `d₁/d₀` with respect to `O(p)`.
pub fn slope(s: &SheafOnP1, p: u32) -> Q {
    let h = hilbert_poly(s, p);
    h.coeff(0) / h.coeff(1)
}

/// A one-parameter degeneration of `(P¹, O(p), E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestConfig {
    Trivial,
    /// `λ·[z₀:z₁] = [λ^{u₀}z₀ : λ^{u₁}z₁]`, lifted to `O(a_i)` with the extra
    /// fibre weight `shifts[i]`.
    Product {
        base_weights: [i64; 2],
        #[serde(default)]
        shifts: Vec<i64>,
    },
    /// Filtration `0 ⊂ F₁ ⊂ … ⊂ F_m ⊂ E` by sub-direct-sums, given as
    /// splitting types. `weights[j]` acts on `F_{j+1}/F_j`, with `F_{m+1} = E`.
    BasePreserving { filtration: Vec<Vec<i64>>, weights: Vec<i64> },
}

/// Removes `sub` from `whole` as multisets.
fn multiset_difference(whole: &[i64], sub: &[i64]) -> Option<Vec<i64>> {
    let mut rest = whole.to_vec();
    for v in sub {
        let i = rest.iter().position(|x| x == v)?;
        rest.remove(i);
    }
    Some(rest)
}

impl TestConfig {
    /// Splitting types of the graded pieces with their weights.
    fn graded(&self, e: &SheafOnP1) -> Result<Vec<(Vec<i64>, i64)>> {
        let TestConfig::BasePreserving { filtration, weights } = self else {
            return Err(Error::input("not a base-preserving configuration"));
        };
        if weights.len() != filtration.len() + 1 {
            return Err(Error::input(format!(
                "{} weights for a filtration with {} pieces",
                weights.len(),
                filtration.len() + 1
            )));
        }
        let mut pieces = Vec::with_capacity(weights.len());
        let mut prev: Vec<i64> = Vec::new();
        for (j, f) in filtration.iter().chain(std::iter::once(&e.splitting)).enumerate() {
            let g = multiset_difference(f, &prev)
                .ok_or_else(|| Error::input(format!("filtration is not nested at piece {}", j + 1)))?;
            if multiset_difference(&e.splitting, f).is_none() {
                return Err(Error::input(format!("piece {} is not a sub-direct-sum of E", j + 1)));
            }
            pieces.push((g, weights[j]));
            prev = f.clone();
        }
        Ok(pieces)
    }

    pub fn validate(&self, e: &SheafOnP1) -> Result<()> {
        match self {
            TestConfig::Trivial => Ok(()),
            TestConfig::Product { shifts, .. } => {
                if !shifts.is_empty() && shifts.len() != e.rank() {
                    return Err(Error::input(format!("{} shifts for rank {}", shifts.len(), e.rank())));
                }
                Ok(())
            }
            TestConfig::BasePreserving { .. } => self.graded(e).map(|_| ()),
        }
    }

    fn shift(&self, i: usize) -> i64 {
        match self {
            TestConfig::Product { shifts, .. } => shifts.get(i).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// Central fibre of the bundle is isomorphic to `E` itself. Always true
    /// here: graded pieces of a filtration by sub-direct-sums reassemble `E`.
    pub fn central_fibre_is_e(&self) -> bool {
        true
    }
}

/// Total weight of the action on `H⁰(O(pk + a))` for a product
/// configuration, as a polynomial in `k`.
fn product_section_weight(u: [i64; 2], p: u32, a: i64, shift: i64) -> RationalPoly {
    // Σ_{i=0}^{m} (u₀ i + u₁ (m − i)) = (u₀+u₁) m(m+1)/2 with m = pk + a
    let m = RationalPoly::linear(poly::q(p as i64), poly::q(a));
    let m1 = RationalPoly::linear(poly::q(p as i64), poly::q(a + 1));
    let base = (&m * &m1).scale(&poly::frac(u[0] + u[1], 2));
    &base + &m1.scale(&poly::q(shift))
}

/// `w(k)` of the action on `H⁰(E ⊗ L^k)`.
pub fn weight_polynomial(cfg: &TestConfig, e: &SheafOnP1, p: u32) -> Result<RationalPoly> {
    cfg.validate(e)?;
    Ok(match cfg {
        TestConfig::Trivial => RationalPoly::zero(),
        TestConfig::Product { base_weights, .. } => e
            .splitting
            .iter()
            .enumerate()
            .fold(RationalPoly::zero(), |acc, (i, &a)| &acc + &product_section_weight(*base_weights, p, a, cfg.shift(i))),
        TestConfig::BasePreserving { .. } => cfg
            .graded(e)?
            .iter()
            .fold(RationalPoly::zero(), |acc, (g, w)| &acc + &multiset_hilbert(g, p).scale(&poly::q(*w))),
    })
}

/// `w(k)` on `H⁰(L^k)`.
pub fn base_weight_polynomial(cfg: &TestConfig, p: u32) -> RationalPoly {
    match cfg {
        TestConfig::Product { base_weights, .. } => product_section_weight(*base_weights, p, 0, 0),
        _ => RationalPoly::zero(),
    }
}

/// Leading coefficients of `w(k)/(k P(k)) = F₀ + F₁/k + F₂/k² + …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightExpansion {
    pub f0: Q,
    pub f1: Q,
    pub f2: Q,
    /// The series in `1/k`, starting with `F₀`.
    pub prefix: Vec<Q>,
}

const PREFIX_LEN: usize = 6;

/// Exact series division in `x = 1/k`.
pub fn expansion(w: &RationalPoly, p: &RationalPoly) -> Result<WeightExpansion> {
    let d = p.degree().ok_or_else(|| Error::input("Hilbert polynomial is zero"))?;
    if let Some(dw) = w.degree() {
        if dw > d + 1 {
            return Err(Error::input(format!("weight degree {dw} exceeds {}", d + 1)));
        }
    }
    // w(k)/(kP(k)) = N(x)/D(x) with N = x^{d+1} w(1/x), D = x^d P(1/x)
    let num: Vec<Q> = (0..=d + 1).map(|i| w.coeff(d + 1 - i)).collect();
    let den: Vec<Q> = (0..=d).map(|i| p.coeff(d - i)).collect();
    let lead = den[0].clone();
    let mut out: Vec<Q> = Vec::with_capacity(PREFIX_LEN);
    for n in 0..PREFIX_LEN {
        let mut acc = num.get(n).cloned().unwrap_or_else(Q::zero);
        for j in 1..=n.min(d) {
            acc -= &den[j] * &out[n - j];
        }
        out.push(acc / &lead);
    }
    Ok(WeightExpansion { f0: out[0].clone(), f1: out[1].clone(), f2: out[2].clone(), prefix: out })
}

impl WeightExpansion {
    /// `w(k) − kP(k)(F₀ + F₁/k + F₂/k²)`, which has degree at most
    /// `deg P − 2` exactly when the first three terms are right.
    pub fn remainder(&self, w: &RationalPoly, p: &RationalPoly) -> RationalPoly {
        // kP(F₀ + F₁/k + F₂/k²) = P (F₀k² + F₁k + F₂) / k
        let head = &p.shift(1).scale(&self.f0) + &(p.scale(&self.f1));
        let tail = p.scale(&self.f2);
        // P·F₂/k: drop the constant term after dividing, which is the O(k⁻¹) part
        let tail_div = RationalPoly::new(tail.coeffs().iter().skip(1).cloned().collect());
        &(w - &head) - &tail_div
    }
}

/// Exact pieces of `F_α` for one configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaPieces {
    pub bundle: WeightExpansion,
    pub base: WeightExpansion,
}

impl AlphaPieces {
    /// `−F₁(O)`, the Futaki invariant of the base.
    pub fn futaki(&self) -> Q {
        -self.base.f1.clone()
    }

    /// Coefficient `B` in `F_α = −F₁(O) + Bα`.
    pub fn alpha_coefficient(&self) -> Q {
        -(&self.bundle.f2 - &self.base.f2)
    }

    pub fn at(&self, alpha: &Q) -> Q {
        self.futaki() + self.alpha_coefficient() * alpha
    }
}

pub fn alpha_pieces(cfg: &TestConfig, e: &SheafOnP1, p: u32) -> Result<AlphaPieces> {
    let w = weight_polynomial(cfg, e, p)?;
    let bundle = expansion(&w, &hilbert_poly(e, p))?;
    let base = expansion(&base_weight_polynomial(cfg, p), &hilbert_poly(&SheafOnP1::trivial(1), p))?;
    Ok(AlphaPieces { bundle, base })
}

/// `F_α = −F₁(O_{X₀}) − α(F₂(E₀) − F₂(O_{X₀}))`.
pub fn alpha_invariant(cfg: &TestConfig, e: &SheafOnP1, p: u32, alpha: &Q) -> Result<Q> {
    if alpha.is_negative() {
        return Err(Error::input("α must be non-negative"));
    }
    Ok(alpha_pieces(cfg, e, p)?.at(alpha))
}

/// `(P¹, O(p), E)` with a list of configurations to test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub splitting: Vec<i64>,
    #[serde(default = "one")]
    pub polarization_power: u32,
    #[serde(default)]
    pub configs: Vec<TestConfig>,
}

fn one() -> u32 {
    1
}

impl Triple {
    pub fn sheaf(&self) -> Result<SheafOnP1> {
        if self.polarization_power == 0 {
            return Err(Error::input("polarization power must be positive"));
        }
        SheafOnP1::new(self.splitting.clone())
    }
}

/// Every base-preserving configuration `F ⊂ E` with `F` a proper nonzero
/// sub-direct-sum, weight one on `F`. Repeated summands give one entry.
pub fn sub_direct_sum_configs(e: &SheafOnP1) -> Vec<TestConfig> {
    let r = e.rank();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1..(1u64 << r) - 1 {
        let mut f: Vec<i64> = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| e.splitting[i]).collect();
        f.sort_unstable();
        if seen.insert(f.clone()) {
            out.push(TestConfig::BasePreserving { filtration: vec![f], weights: vec![1, 0] });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigVerdict {
    pub index: usize,
    pub kind: &'static str,
    #[serde(serialize_with = "ser_q")]
    pub f0: Q,
    #[serde(serialize_with = "ser_q")]
    pub f1: Q,
    #[serde(serialize_with = "ser_q")]
    pub f2: Q,
    /// `−F₁(O)`, the value at `α = 0`.
    #[serde(serialize_with = "ser_q")]
    pub futaki: Q,
    #[serde(serialize_with = "ser_q")]
    pub f_alpha: Q,
    /// `F_α` as an expression in `α`.
    pub symbolic: String,
    pub sign: i8,
    pub central_fibre_is_e: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "label", rename_all = "snake_case")]
pub enum Aggregate {
    /// No supplied configuration has `F_α < 0`. This says nothing about
    /// configurations outside the list.
    SemistableOverSet {
        /// Every `F_α` vanishes and every central fibre is `E` again.
        polystable_pattern: bool,
    },
    Destabilized {
        witness: usize,
        #[serde(serialize_with = "ser_q")]
        f_alpha: Q,
        symbolic: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(serialize_with = "ser_q")]
    pub alpha: Q,
    pub splitting: Vec<i64>,
    pub polarization_power: u32,
    pub mumford_slope: String,
    pub configs: Vec<ConfigVerdict>,
    pub aggregate: Aggregate,
    pub scope: &'static str,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&poly::to_string(x))
}

/// `A + Bα` written out, e.g. `-α/2` or `1/3 + 2α`.
pub fn symbolic(futaki: &Q, coeff: &Q) -> String {
    let alpha_term = if coeff.is_zero() {
        None
    } else {
        let (n, d) = (coeff.numer().abs(), coeff.denom().clone());
        let num = if n.is_one() { "α".to_string() } else { format!("{n}α") };
        Some(if d.is_one() { num } else { format!("{num}/{d}") })
    };
    match (futaki.is_zero(), alpha_term) {
        (_, None) => poly::to_string(futaki),
        (true, Some(t)) => {
            if coeff.is_negative() {
                format!("-{t}")
            } else {
                t
            }
        }
        (false, Some(t)) => {
            format!("{} {} {t}", poly::to_string(futaki), if coeff.is_negative() { "-" } else { "+" })
        }
    }
}

/// Sign of `F_α` over the supplied configurations.
pub fn stability_verdict(triple: &Triple, alpha: &Q) -> Result<Verdict> {
    if alpha.is_negative() {
        return Err(Error::input("α must be non-negative"));
    }
    let e = triple.sheaf()?;
    let p = triple.polarization_power;
    let defaults;
    let supplied = if triple.configs.is_empty() {
        defaults = sub_direct_sum_configs(&e);
        &defaults
    } else {
        &triple.configs
    };
    let configs: Vec<ConfigVerdict> = supplied
        .par_iter()
        .enumerate()
        .map(|(index, cfg)| {
            let pieces = alpha_pieces(cfg, &e, p)?;
            let f_alpha = pieces.at(alpha);
            let sign = if f_alpha.is_zero() {
                0
            } else if f_alpha.is_negative() {
                -1
            } else {
                1
            };
            Ok(ConfigVerdict {
                index,
                kind: match cfg {
                    TestConfig::Trivial => "trivial",
                    TestConfig::Product { .. } => "product",
                    TestConfig::BasePreserving { .. } => "base_preserving",
                },
                f0: pieces.bundle.f0.clone(),
                f1: pieces.bundle.f1.clone(),
                f2: pieces.bundle.f2.clone(),
                futaki: pieces.futaki(),
                symbolic: symbolic(&pieces.futaki(), &pieces.alpha_coefficient()),
                f_alpha,
                sign,
                central_fibre_is_e: cfg.central_fibre_is_e(),
            })
        })
        .collect::<Result<_>>()?;
    let aggregate = match configs.iter().find(|c| c.sign < 0) {
        Some(c) => Aggregate::Destabilized { witness: c.index, f_alpha: c.f_alpha.clone(), symbolic: c.symbolic.clone() },
        None => Aggregate::SemistableOverSet {
            polystable_pattern: configs.iter().all(|c| c.sign == 0 && c.central_fibre_is_e),
        },
    };
    Ok(Verdict {
        alpha: alpha.clone(),
        splitting: triple.splitting.clone(),
        polarization_power: p,
        mumford_slope: poly::to_string(&slope(&e, p)),
        configs,
        aggregate,
        scope: if triple.configs.is_empty() {
            "checked over the sub-direct-sum filtrations only"
        } else {
            "checked over the supplied configurations only"
        },
    })
}

#[cfg(test)]
mod tests {
    use super::poly::{frac, q};
    use super::*;

    fn sub_o1() -> TestConfig {
        TestConfig::BasePreserving { filtration: vec![vec![1]], weights: vec![1, 0] }
    }

    #[test]
    fn hilbert_polynomials_and_slopes() {
        assert_eq!(hilbert_poly(&SheafOnP1::trivial(1), 1), RationalPoly::from_ints(&[1, 1]));
        let e = SheafOnP1::new(vec![1, -1]).unwrap();
        assert_eq!(hilbert_poly(&e, 1), RationalPoly::from_ints(&[2, 2]));
        assert_eq!(hilbert_poly(&SheafOnP1::trivial(3), 1), RationalPoly::from_ints(&[3, 3]));
        assert_eq!(slope(&SheafOnP1::trivial(4), 1), q(1));
        assert_eq!(slope(&e, 1), q(1));
        assert_eq!(slope(&SheafOnP1::new(vec![2]).unwrap(), 1), q(3));
        assert!(SheafOnP1::new(vec![]).is_err());
    }

    #[test]
    fn weight_polynomials() {
        let e = SheafOnP1::new(vec![1, -1]).unwrap();
        let w = weight_polynomial(&sub_o1(), &e, 1).unwrap();
        assert_eq!(w, RationalPoly::from_ints(&[2, 1]));
        let zero = TestConfig::BasePreserving { filtration: vec![], weights: vec![0] };
        assert!(weight_polynomial(&zero, &e, 1).unwrap().is_zero());
        let doubled = TestConfig::BasePreserving { filtration: vec![vec![1]], weights: vec![2, 0] };
        assert_eq!(weight_polynomial(&doubled, &e, 1).unwrap(), w.scale(&q(2)));
    }

    #[test]
    fn rejects_bad_filtrations() {
        let e = SheafOnP1::new(vec![2, 0, -2]).unwrap();
        let crossed = TestConfig::BasePreserving { filtration: vec![vec![2], vec![0, -2]], weights: vec![2, 1, 0] };
        assert!(weight_polynomial(&crossed, &e, 1).unwrap_err().is_input());
        let foreign = TestConfig::BasePreserving { filtration: vec![vec![5]], weights: vec![1, 0] };
        assert!(weight_polynomial(&foreign, &e, 1).is_err());
        let short = TestConfig::BasePreserving { filtration: vec![vec![2]], weights: vec![1] };
        assert!(weight_polynomial(&short, &e, 1).is_err());
        let nested = TestConfig::BasePreserving { filtration: vec![vec![2], vec![2, -2]], weights: vec![2, 1, 0] };
        assert!(weight_polynomial(&nested, &e, 1).is_ok());
    }

    #[test]
    fn expansions() {
        let e = SheafOnP1::new(vec![1, -1]).unwrap();
        let w = weight_polynomial(&sub_o1(), &e, 1).unwrap();
        let p = hilbert_poly(&e, 1);
        let x = expansion(&w, &p).unwrap();
        assert_eq!((x.f0.clone(), x.f1.clone(), x.f2.clone()), (q(0), frac(1, 2), frac(1, 2)));
        let rem = x.remainder(&w, &p);
        assert!(rem.degree().is_none_or(|d| d + 2 <= p.degree().unwrap()));

        // standard action on (P¹, O(m)): F ≡ 1/2
        let m = RationalPoly::from_ints(&[0, 1]);
        let wm = (&m * &RationalPoly::from_ints(&[1, 1])).scale(&frac(1, 2));
        let x = expansion(&wm, &RationalPoly::from_ints(&[1, 1])).unwrap();
        assert_eq!((x.f0, x.f1, x.f2), (frac(1, 2), q(0), q(0)));

        let z = expansion(&RationalPoly::zero(), &p).unwrap();
        assert!(z.prefix.iter().all(|c| c.is_zero()));
        assert!(expansion(&w, &RationalPoly::zero()).is_err());
        assert!(expansion(&RationalPoly::from_ints(&[0, 0, 0, 1]), &p).is_err());
    }

    #[test]
    fn alpha_invariants() {
        let e = SheafOnP1::new(vec![1, -1]).unwrap();
        let a = q(3);
        assert_eq!(alpha_invariant(&sub_o1(), &e, 1, &a).unwrap(), frac(-3, 2));
        assert_eq!(alpha_invariant(&TestConfig::Trivial, &e, 1, &a).unwrap(), q(0));
        let rot = TestConfig::Product { base_weights: [1, 0], shifts: vec![] };
        assert_eq!(alpha_pieces(&rot, &e, 1).unwrap().futaki(), q(0));
        assert!(alpha_invariant(&sub_o1(), &e, 1, &q(-1)).is_err());
    }

    #[test]
    fn verdicts() {
        let t = Triple { splitting: vec![1, -1], polarization_power: 1, configs: vec![sub_o1()] };
        let v = stability_verdict(&t, &q(1)).unwrap();
        match &v.aggregate {
            Aggregate::Destabilized { witness, symbolic, .. } => {
                assert_eq!(*witness, 0);
                assert_eq!(symbolic, "-α/2");
            }
            a => panic!("{a:?}"),
        }
        let e = SheafOnP1::trivial(2);
        let t = Triple { splitting: e.splitting.clone(), polarization_power: 1, configs: sub_direct_sum_configs(&e) };
        let v = stability_verdict(&t, &frac(1, 3)).unwrap();
        assert_eq!(v.aggregate, Aggregate::SemistableOverSet { polystable_pattern: true });
        let implicit = Triple { splitting: vec![1, -1], polarization_power: 1, configs: vec![] };
        let v = stability_verdict(&implicit, &q(1)).unwrap();
        assert_eq!(v.configs.len(), 2);
        assert!(matches!(v.aggregate, Aggregate::Destabilized { .. }));
        let empty = Triple { splitting: vec![0], polarization_power: 1, configs: vec![] };
        assert!(matches!(stability_verdict(&empty, &q(1)).unwrap().aggregate, Aggregate::SemistableOverSet { .. }));
    }

    #[test]
    fn symbolic_forms() {
        assert_eq!(symbolic(&q(0), &frac(-1, 2)), "-α/2");
        assert_eq!(symbolic(&frac(1, 3), &q(2)), "1/3 + 2α");
        assert_eq!(symbolic(&q(0), &q(0)), "0");
    }
}
