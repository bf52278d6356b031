//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits nonzero if any check fails.

use cymkit::coupled::*;
use cymkit::forms::{PointMetric, TwoForm, PAIRS};
use cymkit::gauge::*;
use cymkit::grid::{ProductGrid4, RadialGrid};
use cymkit::kahler::KahlerData;
use cymkit::stability::poly::{frac, q};
use cymkit::stability::*;
use cymkit::weighted::*;
use cymkit::Quaternion;
use nalgebra::{Complex, Matrix2};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn main() -> ExitCode {
    let checks: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        ("basic instanton", Some(Duration::from_secs(5)), basic_instanton_check),
        ("'t Hooft charges k=2,3", Some(Duration::from_secs(30)), thooft_charges),
        ("squared-curvature identity", None, squared_curvature_identity),
        ("linearization vs differences", None, linearization),
        ("continuation to α=0.3", Some(Duration::from_secs(120)), continuation),
        ("rescaling α → 4α", None, rescaling),
        ("decoupled T² and P¹", None, decoupled_surfaces),
        ("exact stability suite", Some(Duration::from_secs(5)), exact_stability),
        ("numeric vs exact Futaki", None, bridge),
        ("indicial window and decay", None, indicial_window),
        ("CYM minimizer", None, minimizer),
    ];
    let mut failed = 0;
    for (n, (name, budget, run)) in checks.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let dt = start.elapsed();
        let late = budget.is_some_and(|b| dt > b);
        let (pass, detail) = match out {
            Ok(d) if !late => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {:?}", budget.unwrap())),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "[{:>2}] {} {:<30} {:>8.2}s  {}",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            name,
            dt.as_secs_f64(),
            detail
        );
    }
    if failed == 0 {
        println!("all acceptance checks passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance check(s) failed");
        ExitCode::FAILURE
    }
}

fn off_centre_cube(half: f64) -> Vec<Quaternion> {
    let shift = Quaternion::new(0.0137, 0.0071, -0.0093, 0.0053);
    ProductGrid4::cube(-half, half, 9).points().into_iter().map(|x| x + shift).collect()
}

fn basic_instanton_check() -> Outcome {
    let points = off_centre_cube(4.0);
    let a = ConnectionField::sample(ConnectionSource::Basic, points.clone()).map_err(err)?;
    let f = curvature(&a).map_err(err)?;
    let asd = asd_residual(&f, &PointMetric::flat()).map_err(err)?.interior_max();
    let charge = charge_quadrature(&InstantonSpec::basic(), 1e-3).map_err(err)?;
    let (_, shape) = fit_density_profile(&points, &chern_weil_density(&f).values);
    let rel = (charge.value - 1.0).abs();
    ensure(
        asd <= 1e-8 && rel <= 1e-3 && shape <= 1e-8,
        format!("asd {asd:.1e}, charge {:.6} (rel {rel:.1e}), shape {shape:.1e}", charge.value),
    )
}

fn thooft_charges() -> Outcome {
    let specs = [
        InstantonSpec::new(vec![Quaternion::new(1.0, 0.0, 0.0, 0.0), Quaternion::new(-1.0, 0.0, 0.0, 0.0)], vec![1.0, 1.0]),
        InstantonSpec::new(
            vec![
                Quaternion::new(1.5, 0.0, 0.0, 0.0),
                Quaternion::new(-0.5, 1.0, 0.0, 0.0),
                Quaternion::new(0.0, -1.0, 0.5, 0.0),
            ],
            vec![1.0, 1.5, 0.8],
        ),
    ];
    let mut ok = true;
    let mut msg = Vec::new();
    for s in specs {
        let s = s.map_err(err)?;
        let k = s.charge() as f64;
        let c = charge_quadrature(&s, 1e-3).map_err(err)?;
        let rel = (c.value - k) / k;
        ok &= rel.abs() <= 1e-2;
        msg.push(format!("k={k}: {:.5} (rel {rel:.1e})", c.value));
    }
    ensure(ok, msg.join(", "))
}

fn random_metric(rng: &mut ChaCha8Rng) -> PointMetric {
    loop {
        let a = rng.gen_range(0.3..3.0);
        let d = rng.gen_range(0.3..3.0);
        let b = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let h = Matrix2::new(Complex::new(a, 0.0), b, b.conj(), Complex::new(d, 0.0));
        // keep the metric uniformly positive so the pointwise terms stay O(1)
        if b.norm_sqr() > 0.5 * a * d {
            continue;
        }
        if let Ok(m) = PointMetric::from_hermitian(h) {
            return m;
        }
    }
}

fn random_field(rng: &mut ChaCha8Rng) -> TwoForm {
    let mut f = TwoForm::ZERO;
    for c in f.c.iter_mut() {
        *c = Quaternion::imaginary(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    f
}

/// Removes the ω and (2,0)+(0,2) components, which span Λ⁺ on a Kähler
/// surface.
fn asd_projection(m: &PointMetric, f: &TwoForm) -> TwoForm {
    let mut g = *f;
    let anti = m.anti_invariant_part(f);
    for k in 0..6 {
        g.c[k] -= anti.c[k];
    }
    let l = m.lambda(&g).scale(0.5);
    let om = m.omega();
    for (k, _) in PAIRS.iter().enumerate() {
        g.c[k] -= l.scale(om[k]);
    }
    g
}

fn identity_defect(m: &PointMetric, f: &TwoForm) -> f64 {
    let l = m.lambda(f);
    (0.5 * m.lambda2_wedge(f) + m.norm_sqr(f) - l.pairing(l) - 4.0 * m.f02_norm_sqr(f)).abs()
}

fn squared_curvature_identity() -> Outcome {
    let mut worst = 0.0_f64;
    // basic instanton on the flat metric over an off-centre cube
    for x in off_centre_cube(3.0) {
        worst = worst.max(identity_defect(&PointMetric::flat(), &basic_curvature(x)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut sd_left = 0.0_f64;
    for _ in 0..100 {
        let m = random_metric(&mut rng);
        let f = asd_projection(&m, &random_field(&mut rng));
        sd_left = sd_left.max(m.self_dual_norm_sqr(&f));
        worst = worst.max(identity_defect(&m, &f));
    }
    ensure(
        worst <= 1e-9 && sd_left <= 1e-12,
        format!("max defect {worst:.1e}, self-dual remainder {sd_left:.1e}"),
    )
}

fn linearization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ts: Vec<f64> = (0..120).map(|i| -5.0 + 0.1 * i as f64).collect();
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let rb = |rng: &mut ChaCha8Rng| {
            let center = rng.gen_range(-2.0..2.0);
            Bump { amplitude: rng.gen_range(-1.0..1.0) * f64::exp(center), center, width: rng.gen_range(0.5..2.0) }
        };
        let phi = Profile { bumps: vec![rb(&mut rng), rb(&mut rng)] };
        let a = Profile { bumps: vec![rb(&mut rng)] };
        let eps = 1e-4;
        let p = c2_residual(0.0, 1, 1.0, &phi.scaled(eps), &a.scaled(eps), &ts);
        let m = c2_residual(0.0, 1, 1.0, &phi.scaled(-eps), &a.scaled(-eps), &ts);
        let lin = linearization_apply(1.0, &phi, &a, &ts);
        let scale = lin.scalar.iter().chain(&lin.hermitian).fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut diff = 0.0_f64;
        for i in 0..ts.len() {
            diff = diff.max(((p.scalar[i] - m.scalar[i]) / (2.0 * eps) - lin.scalar[i]).abs());
            diff = diff.max(((p.hermitian[i] - m.hermitian[i]) / (2.0 * eps) - lin.hermitian[i]).abs());
        }
        worst = worst.max(diff / scale);
    }
    ensure(worst <= 1e-5, format!("max relative mismatch {worst:.1e} over 20 directions"))
}

fn branch(alpha: f64) -> Result<ContinuationResult, String> {
    let seed = SolutionPair::seed(RadialGrid::new(1e-2, 1e3, 2000).map_err(err)?, 1.0).map_err(err)?;
    let out = newton_continuation(seed, &ContinuationConfig::to(alpha)).map_err(err)?;
    if out.reached_target {
        Ok(out)
    } else {
        Err(format!("stopped at α = {}: {:?}", out.last().alpha, out.diagnostic))
    }
}

fn positive_branch() -> Result<&'static ContinuationResult, String> {
    static CELL: OnceLock<Result<ContinuationResult, String>> = OnceLock::new();
    CELL.get_or_init(|| branch(0.3)).as_ref().map_err(Clone::clone)
}

fn continuation() -> Outcome {
    let out = positive_branch()?;
    let steps = &out.pairs[1..];
    let res = steps.iter().map(|p| p.norms.hermitian.max(p.norms.scalar)).fold(0.0, f64::max);
    let spread = steps.iter().map(|p| p.scalar_spread()).fold(f64::INFINITY, f64::min);
    ensure(
        !steps.is_empty() && res < 1e-8 && spread > 0.0,
        format!("{} steps, max residual {res:.1e}, min spread {spread:.3e}", steps.len()),
    )
}

fn rescaling() -> Outcome {
    let out = positive_branch()?;
    let p = out.last();
    let r = rescale_solution(p, 4.0 * p.alpha).map_err(err)?;
    let fresh = r.evaluate_norms();
    let dq = (r.instanton_number() - p.instanton_number()).abs();
    ensure(
        fresh.hermitian <= 1e-8 && fresh.scalar <= 1e-8 && dq <= 1e-3,
        format!(
            "α {} → {}: residuals {:.1e}/{:.1e}, charge shift {dq:.1e}",
            p.alpha, r.alpha, fresh.hermitian, fresh.scalar
        ),
    )
}

fn decoupled_surfaces() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = RadialGrid::new(1e-3, 1e3, 2000).map_err(err)?;
    let cases = [("P¹", KahlerData::fubini_study(&g), 2.0 * PI, -4.0 * PI), ("T²", KahlerData::flat_torus2(1.0, 16), 0.0, 0.0)];
    let mut worst = 0.0_f64;
    for (_, k, mu, z) in cases.iter() {
        let h = LineBundleMetric { mu: *mu, chi: vec![0.0; k.len()] };
        for _ in 0..3 {
            let cc = CouplingConstants::new(rng.gen_range(0.1..2.0), rng.gen_range(-1.0..1.0));
            let c = surface_coupled_residual(k, &h, cc, *z).map_err(err)?;
            worst = worst.max(c.hermitian_norm()).max(c.scalar_norm());
        }
    }
    ensure(worst <= 1e-8, format!("max residual {worst:.1e} over 2 surfaces × 3 couplings"))
}

fn exact_stability() -> Outcome {
    let e = SheafOnP1::new(vec![1, -1]).map_err(err)?;
    let cfg = TestConfig::BasePreserving { filtration: vec![vec![1]], weights: vec![1, 0] };
    let x = alpha_pieces(&cfg, &e, 1).map_err(err)?;
    if (&x.bundle.f0, &x.bundle.f1, &x.bundle.f2) != (&q(0), &frac(1, 2), &frac(1, 2)) {
        return Err(format!("expansion ({}, {}, {})", x.bundle.f0, x.bundle.f1, x.bundle.f2));
    }
    for a in [frac(1, 7), q(1), frac(9, 2)] {
        let v = alpha_invariant(&cfg, &e, 1, &a).map_err(err)?;
        if v != -&a / q(2) {
            return Err(format!("F_α at α = {a}: {v}"));
        }
    }
    for u in [[1, 0], [0, 1], [3, -2]] {
        let pc = TestConfig::Product { base_weights: u, shifts: vec![] };
        let p = alpha_pieces(&pc, &SheafOnP1::trivial(2), 1).map_err(err)?;
        if !p.futaki().is_zero() {
            return Err(format!("product Futaki {}", p.futaki()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    while checked < 200 {
        let r = rng.gen_range(2..=4);
        let s: Vec<i64> = (0..r).map(|_| rng.gen_range(-5..=5)).collect();
        let mask: u32 = rng.gen_range(1..(1 << r) - 1);
        let f: Vec<i64> = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| *a).collect();
        let sub = SheafOnP1::new(f.clone()).map_err(err)?;
        let e = SheafOnP1::new(s.clone()).map_err(err)?;
        let cfg = TestConfig::BasePreserving { filtration: vec![f], weights: vec![1, 0] };
        let alpha = frac(rng.gen_range(1..20), rng.gen_range(1..20));
        let fa = alpha_invariant(&cfg, &e, 1, &alpha).map_err(err)?;
        let diff = slope(&sub, 1) - slope(&e, 1);
        if fa.signum() != -diff.signum() {
            return Err(format!("sign law fails for {s:?} at α = {alpha}"));
        }
        checked += 1;
    }
    Ok("(0, 1/2, 1/2), F_α = −α/2, product Futaki 0, sign law 200/200".into())
}

fn bridge() -> Outcome {
    let cfg = TestConfig::Product { base_weights: [1, 0], shifts: vec![] };
    let triv = bridge_check(&SheafOnP1::trivial(2), &cfg, 1.0, 0.3).map_err(err)?;
    let split = bridge_check(&SheafOnP1::new(vec![1, -1]).map_err(err)?, &cfg, 1.0, 0.3).map_err(err)?;
    ensure(
        triv.discrepancy <= 1e-6 && split.discrepancy <= 1e-4,
        format!("trivial {:.1e}, O(1)⊕O(−1) {:.1e}", triv.discrepancy, split.discrepancy),
    )
}

fn indicial_window() -> Outcome {
    let lams: Vec<f64> = (0..=40).map(|i| 0.5 * i as f64).collect();
    let roots = indicial_roots(&lams).map_err(err)?;
    let mut viete = 0.0_f64;
    for ((p, m), l) in roots.iter().zip(&lams) {
        for x in [p, m] {
            if *x > -2.0 + 1e-12 && *x < -1e-12 {
                return Err(format!("root {x} inside the window at λ = {l}"));
            }
        }
        viete = viete.max((p + m + 2.0).abs()).max((p * m + l).abs() / (1.0 + l));
    }
    let g = RadialGrid::new(1e-3, 1e6, 3000).map_err(err)?;
    let mut worst = 0.0_f64;
    for ((_, m), &l) in roots.iter().zip(&lams) {
        let op = assemble_radial_laplacian(&g, l, InstantonProfile::BASIC).map_err(err)?;
        let rep = decay_probe(&op, &bump_rhs(&op, 1.0, 0.05)).map_err(err)?;
        match rep.exponent {
            Some(x) if !rep.flagged => worst = worst.max((x - m).abs()),
            _ => return Err(format!("decay fit failed at λ = {l}: {rep:?}")),
        }
    }
    ensure(
        viete <= 1e-12 && worst <= 0.15,
        format!("{} eigenvalues, Viète {viete:.1e}, max decay error {worst:.1e}", lams.len()),
    )
}

fn minimizer() -> Outcome {
    let out = branch(-0.3)?;
    let p = out.last();
    let coupling = CouplingConstants::from_alpha(p.alpha);
    let base = cym_functional(&p.samples().map_err(err)?, coupling, 0.0);
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut margin = f64::INFINITY;
    for _ in 0..20 {
        let mut bump = |weight: bool| {
            let center = rng.gen_range(-6.0..10.0);
            let scale = if weight { f64::exp(center) } else { 1.0 };
            Bump { amplitude: rng.gen_range(-1e-2..1e-2) * scale, center, width: rng.gen_range(0.5..2.0) }
        };
        let phi = Profile { bumps: vec![bump(true)] };
        let a = Profile { bumps: vec![bump(false)] };
        let q = p.perturbed(&p.perturbation(&phi, &a)).map_err(err)?;
        let v = cym_functional(&q.samples().map_err(err)?, coupling, 0.0);
        margin = margin.min(v.value - base.value);
    }
    ensure(margin >= -tol, format!("α = {}: CYM {:.6}, min margin {margin:.3e}", p.alpha, base.value))
}
