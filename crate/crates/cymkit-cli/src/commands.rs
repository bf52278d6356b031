//! Subcommand bodies.

use crate::io::{num, read_json, write_csv, write_json, CliError, CliResult};
use crate::Common;
use cymkit::coupled::{newton_continuation, rescale_solution, ContinuationConfig, SolutionPair};
use cymkit::forms::PointMetric;
use cymkit::gauge::{asd_residual, charge_quadrature, chern_weil_density, curvature, fit_density_profile};
use cymkit::gauge::{ConnectionField, ConnectionSource, InstantonSpec};
use cymkit::grid::{ProductGrid4, RadialGrid};
use cymkit::stability::{self, bridge_check, stability_verdict, SheafOnP1, TestConfig, Triple, Verdict};
use cymkit::weighted::{assemble_radial_laplacian, bump_rhs, decay_probe, indicial_roots, DecayReport, InstantonProfile};
use cymkit::Quaternion;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Serialize)]
struct DensityFit {
    constant: f64,
    max_relative_deviation: f64,
}

#[derive(Serialize)]
struct InstantonReport {
    seed: u64,
    expected_charge: usize,
    charge: f64,
    tail_bound: f64,
    quadrature_error: f64,
    radius: f64,
    asd_residual_max: f64,
    samples: usize,
    density_fit: Option<DensityFit>,
    charge_tolerance: f64,
    pass: bool,
}

const ASD_TOL: f64 = 1e-8;
const SHAPE_TOL: f64 = 1e-8;

pub fn instanton_check(c: &Common) -> CliResult<()> {
    let path = c.input.as_ref().ok_or_else(|| CliError::Input("--input is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let spec = InstantonSpec::from_json(&text)?;
    let tol = c.tol.unwrap_or(1e-3);
    let k = spec.charge();

    // off-centre sample box
    let (reach, size) = spec.extent();
    let half = 2.0 * (reach + size);
    let grid = ProductGrid4::cube(-half, half, 9);
    let points: Vec<Quaternion> = grid.points().into_iter().map(|x| x + Quaternion::new(0.0137, 0.0071, -0.0093, 0.0053)).collect();
    let a = ConnectionField::sample(ConnectionSource::THooft(spec.clone()), points.clone())?;
    let f = curvature(&a)?;
    let asd = asd_residual(&f, &PointMetric::flat())?.interior_max();
    let charge = charge_quadrature(&spec, tol)?;

    let density_fit = (k == 1).then(|| {
        let lam = spec.scales[0];
        let b = spec.centers[0];
        let y: Vec<Quaternion> = points.iter().map(|x| (*x - b).scale(lam)).collect();
        let d: Vec<f64> = chern_weil_density(&f).values.iter().map(|v| v / lam.powi(4)).collect();
        let (constant, dev) = fit_density_profile(&y, &d);
        DensityFit { constant, max_relative_deviation: dev }
    });
    let pass = asd <= ASD_TOL
        && (charge.value - k as f64).abs() <= tol * k as f64
        && density_fit.as_ref().is_none_or(|d| d.max_relative_deviation <= SHAPE_TOL);
    let report = InstantonReport {
        seed: c.seed,
        expected_charge: k,
        charge: charge.value,
        tail_bound: charge.tail_bound,
        quadrature_error: charge.quadrature_error,
        radius: charge.radius,
        asd_residual_max: asd,
        samples: points.len(),
        density_fit,
        charge_tolerance: tol,
        pass,
    };
    write_json(c.out.as_deref(), &report)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numerical("instanton checks outside tolerance".into()))
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ContinuationDescriptor {
    r_min: f64,
    r_max: f64,
    intervals: usize,
    lam2: f64,
    alpha_target: f64,
    initial_step: f64,
    min_step: f64,
    max_step: f64,
    tol: f64,
    max_newton: usize,
    max_steps: usize,
    /// Coupling to rescale the last pair to.
    beta: Option<f64>,
    /// Where to dump every pair as JSON.
    pairs_out: Option<PathBuf>,
}

impl Default for ContinuationDescriptor {
    fn default() -> Self {
        let c = ContinuationConfig::to(0.1);
        ContinuationDescriptor {
            r_min: 1e-2,
            r_max: 1e3,
            intervals: 2000,
            lam2: 1.0,
            alpha_target: c.alpha_target,
            initial_step: c.initial_step,
            min_step: c.min_step,
            max_step: c.max_step,
            tol: c.tol,
            max_newton: c.max_newton,
            max_steps: c.max_steps,
            beta: None,
            pairs_out: None,
        }
    }
}

pub const CONTINUATION_HEADER: [&str; 10] = [
    "kind",
    "step",
    "alpha",
    "hermitian_residual",
    "scalar_residual",
    "residual_all",
    "newton_iterations",
    "scalar_spread",
    "charge",
    "seed",
];

fn pair_row(kind: &str, step: usize, p: &SolutionPair, seed: u64) -> Vec<String> {
    vec![
        kind.to_string(),
        step.to_string(),
        num(p.alpha),
        num(p.norms.hermitian),
        num(p.norms.scalar),
        num(p.norms.all),
        p.step.newton_iterations.to_string(),
        num(p.scalar_spread()),
        num(p.instanton_number()),
        seed.to_string(),
    ]
}

pub fn continuation(c: &Common) -> CliResult<()> {
    let mut d: ContinuationDescriptor = match &c.input {
        Some(_) => read_json(c.input.as_deref())?,
        None => ContinuationDescriptor::default(),
    };
    if let Some(a) = &c.alpha {
        d.alpha_target = a.parse().map_err(|_| CliError::Input(format!("--alpha {a} is not a number")))?;
    }
    if let Some(t) = c.tol {
        d.tol = t;
    }
    if c.beta.is_some() {
        d.beta = c.beta;
    }
    let grid = RadialGrid::new(d.r_min, d.r_max, d.intervals)?;
    let seed = SolutionPair::seed(grid, d.lam2)?;
    let cfg = ContinuationConfig {
        alpha_target: d.alpha_target,
        initial_step: d.initial_step,
        min_step: d.min_step,
        max_step: d.max_step,
        tol: d.tol,
        max_newton: d.max_newton,
        max_steps: d.max_steps,
    };
    let out = newton_continuation(seed, &cfg)?;
    let mut rows: Vec<Vec<String>> = out
        .pairs
        .iter()
        .enumerate()
        .map(|(i, p)| pair_row(if i == 0 { "seed" } else { "step" }, i, p, c.seed))
        .collect();
    let mut pairs = out.pairs.clone();
    let mut failure = out.diagnostic.clone().filter(|_| !out.reached_target);
    if let (Some(beta), true) = (d.beta, out.reached_target) {
        match rescale_solution(out.last(), beta) {
            Ok(r) => {
                rows.push(pair_row("rescaled", rows.len(), &r, c.seed));
                pairs.push(r);
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }
    write_csv(c.out.as_deref(), &CONTINUATION_HEADER, &rows)?;
    if let Some(path) = &d.pairs_out {
        let text = serde_json::to_string(&pairs).map_err(|e| CliError::Input(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    eprintln!("max alpha reached: {}", out.last().alpha);
    match failure {
        None => Ok(()),
        Some(m) => Err(CliError::Numerical(m)),
    }
}

#[derive(Serialize)]
struct StabilityOutput {
    seed: u64,
    #[serde(flatten)]
    verdict: Verdict,
}

pub fn stability(c: &Common) -> CliResult<()> {
    let triple: Triple = read_json(c.input.as_deref())?;
    let text = c.alpha.as_deref().unwrap_or("0");
    let alpha = stability::poly::parse(text).ok_or_else(|| CliError::Input(format!("--alpha {text} is not a rational")))?;
    let verdict = stability_verdict(&triple, &alpha)?;
    write_json(c.out.as_deref(), &StabilityOutput { seed: c.seed, verdict })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FutakiInput {
    splitting: Vec<i64>,
    config: TestConfig,
    alpha0: f64,
    alpha1: f64,
}

#[derive(Serialize)]
struct FutakiOutput {
    seed: u64,
    #[serde(flatten)]
    report: stability::BridgeReport,
    tolerance: f64,
    pass: bool,
}

pub fn futaki(c: &Common) -> CliResult<()> {
    let input: FutakiInput = read_json(c.input.as_deref())?;
    let e = SheafOnP1::new(input.splitting)?;
    let report = bridge_check(&e, &input.config, input.alpha0, input.alpha1)?;
    let tolerance = c.tol.unwrap_or(1e-4);
    let pass = report.discrepancy <= tolerance;
    write_json(c.out.as_deref(), &FutakiOutput { seed: c.seed, report, tolerance, pass })?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numerical("character and invariant disagree".into()))
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ProbeInput {
    lambdas: Vec<f64>,
    profile: String,
    r_min: f64,
    r_max: f64,
    intervals: usize,
    center: f64,
    width: f64,
}

impl Default for ProbeInput {
    fn default() -> Self {
        ProbeInput {
            lambdas: vec![0.0, 3.0, 8.0, 15.0],
            profile: "basic".into(),
            r_min: 1e-3,
            r_max: 1e6,
            intervals: 3000,
            center: 1.0,
            width: 0.05,
        }
    }
}

#[derive(Serialize)]
struct ProbeRow {
    lambda: f64,
    delta_plus: f64,
    delta_minus: f64,
    #[serde(flatten)]
    report: DecayReport,
    within: bool,
}

#[derive(Serialize)]
struct ProbeOutput {
    seed: u64,
    profile: String,
    tolerance: f64,
    /// No root strictly inside (−2, 0).
    window_clear: bool,
    probes: Vec<ProbeRow>,
}

pub fn laplacian_probe(c: &Common) -> CliResult<()> {
    let p: ProbeInput = match &c.input {
        Some(_) => read_json(c.input.as_deref())?,
        None => ProbeInput::default(),
    };
    let profile = match p.profile.as_str() {
        "flat" => InstantonProfile::FLAT,
        "basic" => InstantonProfile::BASIC,
        other => return Err(CliError::Input(format!("unknown profile {other}"))),
    };
    let tolerance = c.tol.unwrap_or(0.15);
    let grid = RadialGrid::new(p.r_min, p.r_max, p.intervals)?;
    let roots = indicial_roots(&p.lambdas)?;
    let mut lambdas = p.lambdas.clone();
    lambdas.sort_by(f64::total_cmp);
    let mut probes = Vec::with_capacity(roots.len());
    for (&lambda, &(delta_plus, delta_minus)) in lambdas.iter().zip(&roots) {
        let op = assemble_radial_laplacian(&grid, lambda, profile)?;
        let report = decay_probe(&op, &bump_rhs(&op, p.center, p.width))?;
        let within = !report.flagged && report.exponent.is_some_and(|e| (e - delta_minus).abs() <= tolerance);
        probes.push(ProbeRow { lambda, delta_plus, delta_minus, report, within });
    }
    let window_clear = roots.iter().all(|(a, b)| [a, b].iter().all(|r| !(**r > -2.0 && **r < 0.0)));
    let ok = window_clear && probes.iter().all(|r| r.within);
    write_json(c.out.as_deref(), &ProbeOutput { seed: c.seed, profile: p.profile, tolerance, window_clear, probes })?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Numerical("decay rates outside tolerance".into()))
    }
}
