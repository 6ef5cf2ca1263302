use std::fs;
use std::path::Path;
use std::time::Instant;

use discord_core::discord::{discord_povm, discord_projective, DiscordResult, OptimizerConfig};
use discord_core::entropy::von_neumann;
use discord_core::generate::{gen, gen_violating, Family, GenSpec};
use discord_core::linalg::{ComplexMatrix, Subsystem};
use discord_core::measurements::{neumark_dilate, Measurement};
use discord_core::random::{random_density, random_unit_vector, rng};
use discord_core::states::{DensityMatrix, PureState};
use discord_core::theorems::{
    check_saturation, verify_thm1, verify_thm2, verify_thm3, verify_tripartite, Outcome, TheoremVerdict,
};
use serde_json::json;

use crate::report::{digest, emit, quantity, InstanceVerdict, Report, ReportConfig};
use crate::{files, Cli, CliError, Command, ConditionFamily, Suite};

/// Runs the selected command. `Ok(false)` means a theorem check failed.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = cli.optimizer()?;
    let started = Instant::now();
    let mut report = match &cli.command {
        Command::Discord { state, route } => discord(state, (*route).into(), &cfg)?,
        Command::Verify { suite, family } => verify(*suite, *family, cli.instances, &cfg)?,
        Command::Gen { spec, family, dims, blocks, weights, rank, violating } => {
            let spec = match spec {
                Some(path) => {
                    let text = read(path)?;
                    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
                }
                None => {
                    let &[da, db] = dims.as_slice() else {
                        return Err(CliError::Input(format!("--dims needs two entries, got {dims:?}")));
                    };
                    let mut s = GenSpec::new(*family, (da, db), cli.seed)
                        .with_blocks(blocks.clone())
                        .with_weights(weights.clone());
                    s.rank = *rank;
                    s
                }
            };
            let state = if *violating { gen_violating(&spec)?.0 } else { gen(&spec)?.state };
            emit(&files::write_state(&state), cli.out.as_deref())?;
            return Ok(true);
        }
        Command::Neumark { povm, dilation } => neumark(povm, dilation.as_deref(), &cfg)?,
    };
    report.command = std::env::args().collect();
    report.wall_time_seconds = started.elapsed().as_secs_f64();
    emit(&report.render(cli.format)?, cli.out.as_deref())?;
    Ok(report.verdicts.iter().all(|v| v.verdict.outcome != Outcome::Failed))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn empty_report(inputs: &[u8], cfg: &OptimizerConfig, instances: Option<usize>) -> Report {
    Report {
        command: Vec::new(),
        inputs_digest: digest(inputs),
        config: ReportConfig { optimizer: *cfg, instances },
        quantities: Vec::new(),
        verdicts: Vec::new(),
        details: serde_json::Value::Null,
        wall_time_seconds: 0.0,
    }
}

fn encode(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn measurement_details<M: Measurement>(r: &DiscordResult<M>) -> serde_json::Value {
    json!({
        "converged": r.converged,
        "restarts_agreeing": r.restarts_agreeing,
        "starts": r.starts,
        "parameters": r.parameters,
        "effects": r.optimal_measurement.effects().iter().map(encode).collect::<Vec<_>>(),
    })
}

fn discord(path: &Path, route: discord_core::discord::Route, cfg: &OptimizerConfig) -> Result<Report, CliError> {
    let text = read(path)?;
    let rho = files::parse_state(&text)?;
    rho.bipartite_dims()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let proj = discord_projective(&rho, cfg)?;
    let povm = discord_povm(&rho, cfg, route)?;
    let sa = von_neumann(&rho.reduced(Subsystem::A)?);
    let sb = von_neumann(&rho.reduced(Subsystem::B)?);
    let sab = von_neumann(&rho);

    let mut report = empty_report(text.as_bytes(), cfg, None);
    report.quantities = vec![
        quantity("entropy_a", sa),
        quantity("entropy_b", sb),
        quantity("entropy_ab", sab),
        quantity("mutual_information", sa + sb - sab),
        quantity("classical_correlations_projective", sb - proj.min_conditional_entropy),
        quantity("classical_correlations_povm", sb - povm.min_conditional_entropy),
        quantity("min_conditional_entropy_projective", proj.min_conditional_entropy),
        quantity("min_conditional_entropy_povm", povm.min_conditional_entropy),
        quantity("discord_projective", proj.value),
        quantity("discord_povm", povm.value),
    ];
    report.details = json!({
        "route": route,
        "projective": measurement_details(&proj),
        "povm": measurement_details(&povm),
    });
    Ok(report)
}

struct Instance {
    family: &'static str,
    dims: [usize; 2],
    verdict: TheoremVerdict,
}

fn instance_seed(seed: u64, suite: u64, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(suite * 10_000 + i as u64)
}

fn condition_family(dims: (usize, usize), seed: u64, blocks: bool) -> Result<discord_core::generate::Generated, CliError> {
    let mut spec = GenSpec::new(Family::ConditionPureFamily, dims, seed);
    if blocks {
        spec = spec.with_blocks(vec![2, 2]);
    }
    Ok(gen(&spec)?)
}

fn run_instance(
    suite: Suite,
    family: ConditionFamily,
    seed: u64,
    i: usize,
    cfg: &OptimizerConfig,
) -> Result<Instance, CliError> {
    Ok(match (suite, family) {
        (Suite::Thm1, ConditionFamily::Satisfying) => {
            let dims = if i.is_multiple_of(2) { (4, 2) } else { (4, 3) };
            let g = condition_family(dims, seed, false)?;
            let verdict = verify_thm1(&g.state, g.decomposition.as_ref(), cfg)?;
            Instance { family: "condition_pure_family", dims: [dims.0, dims.1], verdict }
        }
        (Suite::Thm1, ConditionFamily::Violating) => {
            let dims = if i.is_multiple_of(2) { (2, 2) } else { (2, 3) };
            let (rho, d) = gen_violating(&GenSpec::new(Family::RandomDensity, dims, seed))?;
            let verdict = verify_thm1(&rho, Some(&d), cfg)?;
            Instance { family: "violating", dims: [dims.0, dims.1], verdict }
        }
        (Suite::Thm2, _) => {
            let g = condition_family((4, 2), seed, true)?;
            let verdict = verify_thm2(&g.state, g.decomposition.as_ref(), cfg)?;
            Instance { family: "condition_pure_family", dims: [4, 2], verdict }
        }
        (Suite::Thm3, _) => {
            let g = gen(&GenSpec::new(Family::OrthogonalMixedFamily, (4, 2), seed).with_blocks(vec![2, 2]))?;
            let ensemble = g.ensemble.as_ref().expect("block families carry their ensemble");
            let verdict = verify_thm3(ensemble, cfg)?;
            Instance { family: "orthogonal_mixed_family", dims: [4, 2], verdict }
        }
        (Suite::Tripartite, _) => {
            let g = condition_family((4, 2), seed, true)?;
            let verdict = verify_tripartite(&g.state, g.decomposition.as_ref(), cfg)?;
            Instance { family: "condition_pure_family", dims: [4, 2], verdict }
        }
        (Suite::Saturation, _) => {
            // Alternate a saturating family (pure A marginal) with one that is not.
            if i.is_multiple_of(2) {
                let mut g = rng(seed);
                let a = PureState::new(random_unit_vector(&mut g, 2), vec![2])?.to_density();
                let b = DensityMatrix::new(random_density(&mut g, 2, 2), vec![2])?;
                let verdict = check_saturation(&a.tensor(&b), None, cfg)?;
                Instance { family: "pure_a_product", dims: [2, 2], verdict }
            } else {
                let g = gen(&GenSpec::new(Family::ClassicalQuantum, (2, 2), seed))?;
                let verdict = check_saturation(&g.state, None, cfg)?;
                Instance { family: "classical_quantum", dims: [2, 2], verdict }
            }
        }
        (Suite::All, _) => unreachable!("expanded by the caller"),
    })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Thm1 => "thm1",
        Suite::Thm2 => "thm2",
        Suite::Thm3 => "thm3",
        Suite::Tripartite => "tripartite",
        Suite::Saturation => "saturation",
        Suite::All => "all",
    }
}

fn verify(suite: Suite, family: ConditionFamily, instances: usize, cfg: &OptimizerConfig) -> Result<Report, CliError> {
    if family == ConditionFamily::Violating && !matches!(suite, Suite::Thm1 | Suite::All) {
        return Err(CliError::Input(format!(
            "--family violating only applies to thm1; {} needs the condition to hold",
            suite_name(suite)
        )));
    }
    let suites = match suite {
        Suite::All => vec![Suite::Thm1, Suite::Thm2, Suite::Thm3, Suite::Tripartite, Suite::Saturation],
        s => vec![s],
    };
    let request = json!({
        "suite": suite_name(suite),
        "family": format!("{family:?}").to_lowercase(),
        "instances": instances,
        "config": cfg,
    });
    let mut report = empty_report(request.to_string().as_bytes(), cfg, Some(instances));
    let (mut passed, mut failed, mut inconclusive) = (0, 0, 0);
    for (k, &s) in suites.iter().enumerate() {
        for i in 0..instances {
            let seed = instance_seed(cfg.seed, k as u64 + 1, i);
            let inst = run_instance(s, family, seed, i, &OptimizerConfig { seed, ..*cfg })?;
            match inst.verdict.outcome {
                Outcome::Passed => passed += 1,
                Outcome::Failed => failed += 1,
                Outcome::Inconclusive => inconclusive += 1,
            }
            report.verdicts.push(InstanceVerdict {
                suite: suite_name(s).to_string(),
                instance: i,
                seed,
                family: inst.family.to_string(),
                dims: inst.dims,
                verdict: inst.verdict,
            });
        }
    }
    report.quantities = vec![
        quantity("instances", report.verdicts.len() as f64),
        quantity("passed", passed as f64),
        quantity("failed", failed as f64),
        quantity("inconclusive", inconclusive as f64),
    ];
    Ok(report)
}

fn neumark(path: &Path, dilation_out: Option<&Path>, cfg: &OptimizerConfig) -> Result<Report, CliError> {
    let text = read(path)?;
    let povm = files::parse_povm(&text)?;
    let d = povm.dim();
    let dilation = neumark_dilate(&povm);

    // Seeded test states plus the maximally mixed state.
    let mut g = rng(cfg.seed);
    let mut tests = vec![DensityMatrix::maximally_mixed(vec![d])?];
    for _ in 0..3 {
        tests.push(DensityMatrix::new(random_density(&mut g, d, d), vec![d])?);
    }
    let r = dilation.residuals(&povm, &tests)?;

    let mut report = empty_report(text.as_bytes(), cfg, None);
    report.quantities = vec![
        quantity("outcomes", povm.len() as f64),
        quantity("system_dim", d as f64),
        quantity("ancilla_dim", dilation.ancilla_dim as f64),
        quantity("kraus_action_residual", r.kraus_action),
        quantity("effect_residual", r.effect),
        quantity("probability_residual", r.probability),
        quantity("unitarity_residual", r.unitarity),
    ];
    report.details = match dilation_out {
        Some(p) => {
            emit(&files::write_dilation(&dilation), Some(p))?;
            json!({ "test_states": tests.len(), "dilation_file": p.display().to_string() })
        }
        None => json!({
            "test_states": tests.len(),
            "dilation": {
                "unitary": encode(&dilation.unitary),
                "ancilla_state": dilation.ancilla_state.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "ancilla_projectors": dilation.ancilla_projectors.effects().iter().map(encode).collect::<Vec<_>>(),
            }
        }),
    };
    Ok(report)
}
