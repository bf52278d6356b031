use cymkit::gauge::basic_instanton;
use cymkit::grid::RadialGrid;
use cymkit::Quaternion;
use cymkit::weighted::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn decay_matches_lower_root() {
    let g = RadialGrid::new(1e-3, 1e6, 3000).unwrap();
    for (lam, prof) in [(0.0, InstantonProfile::FLAT), (3.0, InstantonProfile::BASIC), (8.0, InstantonProfile::BASIC)] {
        let op = assemble_radial_laplacian(&g, lam, prof).unwrap();
        let rep = decay_probe(&op, &bump_rhs(&op, 1.0, 0.05)).unwrap();
        let pred = indicial_roots(&[lam]).unwrap()[0].1;
        assert!(!rep.flagged);
        assert!((rep.exponent.unwrap() - pred).abs() < 0.1, "λ={lam}: {rep:?}");
    }
}

#[test]
fn discrete_self_adjointness() {
    let g = RadialGrid::new(1e-2, 50.0, 500).unwrap();
    let op = assemble_radial_laplacian(&g, 2.5, InstantonProfile::BASIC).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let mut u: Vec<f64> = (0..op.unknowns()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut v: Vec<f64> = (0..op.unknowns()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (lu, lv) = {
            u.push(0.0);
            v.push(0.0);
            (op.apply(&u), op.apply(&v))
        };
        let a = op.inner(&lu, &v);
        let b = op.inner(&u, &lv);
        assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()), "{a} {b}");
    }
}

#[test]
fn lowest_mode_converges_at_second_order() {
    let ev: Vec<f64> = [200, 400, 800]
        .iter()
        .map(|&n| {
            let g = RadialGrid::new(1e-4, 1.0, n).unwrap();
            assemble_radial_laplacian(&g, 0.0, InstantonProfile::FLAT).unwrap().lowest_eigenvalue()
        })
        .collect();
    let order = ((ev[1] - ev[0]) / (ev[2] - ev[1])).log2();
    assert!((order - 2.0).abs() < 0.1, "order {order}");
    let extrapolated = ev[2] + (ev[2] - ev[1]) / 3.0;
    let j11 = 3.831_705_970_207_512f64;
    assert!((extrapolated - j11 * j11).abs() < 1e-3, "{extrapolated}");
}

#[test]
fn no_decaying_kernel() {
    let g = RadialGrid::new(1e-3, 1e3, 800).unwrap();
    for lam in [0.0, 3.0, 8.0, 15.0] {
        let op = assemble_radial_laplacian(&g, lam, InstantonProfile::BASIC).unwrap();
        assert!(op.lowest_eigenvalue() > 0.0);
        let u = op.solve(&vec![0.0; op.unknowns()]).unwrap();
        assert!(u.iter().all(|v| *v == 0.0));
    }
}

#[test]
fn instanton_potential_decays_like_r_inverse() {
    let r: Vec<f64> = (0..600).map(|i| 0.5 * 1.02f64.powi(i)).collect();
    let a: Vec<f64> = r
        .iter()
        .map(|&x| basic_instanton(Quaternion::new(x, 0.0, 0.0, 0.0)).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let n = weighted_sup_norm(&r, &a, &WeightedNormSpec::sup(-1.0, 0.5)).unwrap();
    assert!(!n.growing);
    // |A| ≤ C/(1+r) with the constant read off the closed form
    let bound: f64 = r.iter().zip(&a).map(|(x, v)| v * (1.0 + x)).fold(0.0, f64::max);
    assert!(n.value.is_finite() && n.value <= bound + 1e-12);
    let h = weighted_holder_norm(&r, &a, &WeightedNormSpec { delta: -1.0, r0: 0.5, order: 1, beta: 0.5 }).unwrap();
    assert!(!h.growing && h.value.is_finite());
}

proptest! {
    #[test]
    fn viete(lams in prop::collection::vec(0.0f64..50.0, 1..20)) {
        for ((p, m), l) in indicial_roots(&lams).unwrap().iter().zip({ let mut s = lams.clone(); s.sort_by(f64::total_cmp); s }) {
            prop_assert!((p + m + 2.0).abs() < 1e-12);
            prop_assert!((p * m + l).abs() < 1e-12 * (1.0 + l));
            prop_assert!(!(*p > -2.0 && *p < 0.0) && !(*m > -2.0 && *m < 0.0));
        }
    }

    #[test]
    fn norm_monotone_in_weight(p in 0.0f64..2.0, d1 in -1.0f64..2.0, dd in 0.0f64..1.0) {
        let r: Vec<f64> = (0..200).map(|i| 1.03f64.powi(i)).collect();
        let v: Vec<f64> = r.iter().map(|x| x.powf(p)).collect();
        let a = weighted_sup_norm(&r, &v, &WeightedNormSpec::sup(d1, 1.0)).unwrap();
        let b = weighted_sup_norm(&r, &v, &WeightedNormSpec::sup(d1 + dd, 1.0)).unwrap();
        prop_assert!(b.value <= a.value || a.value.is_infinite());
    }
}
