//! Command-line front end: builds the simulated state, runs the analyses
//! and writes figure data or machine-readable reports.

mod config;
mod output;

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ghz4::ghz::{contradiction_report, stabilizer_settings};
use ghz4::mabk::{
    mabk_expectation, quantum_max, threshold_visibilities, witness, LHV_BOUND, WITNESS_BOUND,
};
use ghz4::optics::{apply_noise, delay_scan, DelayScanConfig, NoiseParams};
use ghz4::qcore::{correlation, outcome_distribution, Outcome, SettingVector};
use ghz4::stats::{estimate_mabk, replicate, simulate_counts, RunConfig, RNG_ALGORITHM};

use config::FileConfig;
use output::{document, render_csv, render_json, write_output, OutputFormat};

/// Reference dataset the defaults reproduce: GHZ fidelity and Bell value.
const REFERENCE_FIDELITY: f64 = 0.840;
const REFERENCE_MABK: f64 = 4.433;
const DEFAULT_RATE: f64 = 2.6;
const DEFAULT_INTEGRATION_S: f64 = 1000.0;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_REPS: usize = 200;

/// Summed H/V-basis population of the two GHZ branches in the reference
/// dataset, implied by the reference fidelity and Bell value.
fn reference_pop_sum() -> f64 {
    2.0 * (REFERENCE_FIDELITY - REFERENCE_MABK / (8.0 * std::f64::consts::SQRT_2))
}

#[derive(Parser)]
#[command(
    name = "ghz4",
    version,
    about = "Four-photon GHZ entanglement simulator and analysis toolkit",
    after_help = "Defaults reproduce the bundled reference dataset \
                  (fidelity 0.840, Bell value 4.433, rate 2.6/s, 1000 s per setting)."
)]
struct Cli {
    /// TOML config file mirroring the flags; flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the report to this path instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// json for reports (default), csv for plot data
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local-realism contradiction report for the X₁Y₂Y₃X₄ measurement
    GhzParadox {
        #[command(flatten)]
        state: StateArgs,
    },
    /// The four joint-measurement outcome distributions with visibilities
    Fig3 {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Bell value of the state, with an optional Monte Carlo run
    Mabk {
        #[command(flatten)]
        state: StateArgs,
        /// Also simulate a counting run and estimate the value from it
        #[arg(long)]
        simulate: bool,
        #[command(flatten)]
        counting: CountingArgs,
    },
    /// Genuine four-partite entanglement witness
    Witness {
        #[command(flatten)]
        state: StateArgs,
        /// Target GHZ fidelity; combine with --a-value or --a-from-fidelity
        #[arg(long)]
        fidelity: Option<f64>,
        /// Target Bell value to fit together with --fidelity
        #[arg(long)]
        a_value: Option<f64>,
        /// Derive the Bell value from the fidelity and the branch populations
        #[arg(long)]
        a_from_fidelity: bool,
        /// Summed H/V populations of the two GHZ branches
        /// (default: the bundled reference value 0.89635)
        #[arg(long)]
        pop_sum: Option<f64>,
    },
    /// All-H′ and single-V′ coincidence rates against pump delay
    DelayScan {
        /// Coherence at zero delay (best attainable visibility)
        #[arg(long)]
        ceiling: Option<f64>,
        /// Coherence length of the overlap envelope, micrometers
        #[arg(long)]
        tau_um: Option<f64>,
        /// Scan endpoint: positions run from −max to +max
        #[arg(long)]
        max_delay_um: Option<f64>,
        /// Number of scan positions
        #[arg(long)]
        steps: Option<usize>,
        /// Total fourfold rate, per second
        #[arg(long)]
        rate: Option<f64>,
    },
    /// Replicated Poissonian counting simulation of the Bell measurement
    Montecarlo {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        counting: CountingArgs,
        /// Number of independent replications
        #[arg(long)]
        reps: Option<usize>,
    },
}

#[derive(Args, Clone, Copy, Default)]
struct StateArgs {
    /// Dephasing-model shorthand: coherent weight V, branch mixture 1−V
    #[arg(long)]
    visibility: Option<f64>,
    /// Coherent GHZ weight (give all three weights together)
    #[arg(long)]
    p_coh: Option<f64>,
    /// Incoherent branch-mixture weight
    #[arg(long)]
    p_diag: Option<f64>,
    /// White-noise weight
    #[arg(long)]
    p_white: Option<f64>,
}

#[derive(Args, Clone, Copy, Default)]
struct CountingArgs {
    /// Total fourfold rate, all 16 outcomes combined, per second
    #[arg(long)]
    rate: Option<f64>,
    /// Integration time per setting, seconds
    #[arg(long)]
    time: Option<f64>,
    /// RNG seed for the counting streams
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let format = resolve_format(cli.format, &file, &cli.command)?;
    let out = cli.out.clone().or_else(|| file.out.clone());

    let content = match &cli.command {
        Command::GhzParadox { state } => cmd_ghz_paradox(state, &file, format)?,
        Command::Fig3 { state } => cmd_fig3(state, &file, format)?,
        Command::Mabk {
            state,
            simulate,
            counting,
        } => cmd_mabk(state, *simulate, counting, &file, format)?,
        Command::Witness {
            state,
            fidelity,
            a_value,
            a_from_fidelity,
            pop_sum,
        } => cmd_witness(
            state,
            *fidelity,
            *a_value,
            *a_from_fidelity,
            *pop_sum,
            &file,
            format,
        )?,
        Command::DelayScan {
            ceiling,
            tau_um,
            max_delay_um,
            steps,
            rate,
        } => cmd_delay_scan(*ceiling, *tau_um, *max_delay_um, *steps, *rate, &file, format)?,
        Command::Montecarlo {
            state,
            counting,
            reps,
        } => cmd_montecarlo(state, counting, *reps, &file, format)?,
    };

    write_output(out.as_deref(), &content)
}

fn resolve_format(
    flag: Option<OutputFormat>,
    file: &FileConfig,
    command: &Command,
) -> anyhow::Result<OutputFormat> {
    if let Some(f) = flag {
        return Ok(f);
    }
    if let Some(name) = &file.format {
        return match name.as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => bail!("unknown format {other:?} in config file (expected json or csv)"),
        };
    }
    // Plot data defaults to CSV, reports to JSON.
    Ok(match command {
        Command::Fig3 { .. } | Command::DelayScan { .. } => OutputFormat::Csv,
        _ => OutputFormat::Json,
    })
}

/// Resolves the simulated state: explicit weights beat the visibility
/// shorthand, flags beat the config file, and with nothing given the
/// reference fit is used.
fn resolve_state(args: &StateArgs, file: &FileConfig) -> anyhow::Result<NoiseParams> {
    let flag_weights = [args.p_coh, args.p_diag, args.p_white];
    let given = flag_weights.iter().flatten().count();
    if given > 0 && given < 3 {
        bail!("give --p-coh, --p-diag and --p-white together");
    }
    if given == 3 {
        if args.visibility.is_some() {
            bail!("give either --visibility or the three weights, not both");
        }
        return Ok(NoiseParams::new(
            args.p_coh.unwrap(),
            args.p_diag.unwrap(),
            args.p_white.unwrap(),
        )?);
    }
    if let Some(v) = args.visibility {
        return Ok(NoiseParams::dephased(v)?);
    }
    if let (Some(p_coh), Some(p_diag), Some(p_white)) = (file.p_coh, file.p_diag, file.p_white) {
        return Ok(NoiseParams::new(p_coh, p_diag, p_white)?);
    }
    if let Some(v) = file.visibility {
        return Ok(NoiseParams::dephased(v)?);
    }
    Ok(NoiseParams::fit_fidelity_mabk(
        REFERENCE_FIDELITY,
        REFERENCE_MABK,
    )?)
}

fn state_parameters(params: &NoiseParams) -> serde_json::Value {
    json!({
        "p_coh": params.p_coh,
        "p_diag": params.p_diag,
        "p_white": params.p_white,
    })
}

fn cmd_ghz_paradox(
    state: &StateArgs,
    file: &FileConfig,
    format: OutputFormat,
) -> anyhow::Result<String> {
    let params = resolve_state(state, file)?;
    let rho = apply_noise(&params);
    let report = contradiction_report(&rho);
    let parameters = state_parameters(&params);
    match format {
        OutputFormat::Json => render_json(&document("ghz-paradox", parameters, &report)),
        OutputFormat::Csv => {
            let setting: SettingVector = "XYYX".parse().unwrap();
            let dist = outcome_distribution(&rho, &setting);
            let mut parameters = parameters;
            merge(
                &mut parameters,
                json!({
                    "error_rate": report.error_rate,
                    "ryff_bound": report.ryff_bound,
                    "passes_ryff": report.passes_ryff,
                }),
            );
            let rows: Vec<String> = Outcome::all()
                .map(|o| {
                    let side = if report.lhv_support.contains(&o.label(&setting)) {
                        "lhv"
                    } else {
                        "qm"
                    };
                    format!("{},{side},{}", o.label(&setting), dist.prob(o))
                })
                .collect();
            Ok(render_csv(
                "ghz-paradox",
                &parameters,
                "outcome,side,probability",
                &rows,
            ))
        }
    }
}

fn cmd_fig3(state: &StateArgs, file: &FileConfig, format: OutputFormat) -> anyhow::Result<String> {
    let params = resolve_state(state, file)?;
    let rho = apply_noise(&params);

    let mut distributions = Vec::new();
    for setting in stabilizer_settings() {
        let dist = outcome_distribution(&rho, &setting);
        let bars: Vec<serde_json::Value> = Outcome::all()
            .map(|o| {
                json!({
                    "outcome": o.label(&setting),
                    "probability": dist.prob(o),
                })
            })
            .collect();
        distributions.push(json!({
            "settings": setting.to_string(),
            "visibility": correlation(&rho, &setting).abs(),
            "bars": bars,
        }));
    }

    let parameters = state_parameters(&params);
    match format {
        OutputFormat::Json => render_json(&document(
            "fig3",
            parameters,
            &json!({ "distributions": distributions }),
        )),
        OutputFormat::Csv => {
            let mut parameters = parameters;
            for d in &distributions {
                let key = format!("visibility_{}", d["settings"].as_str().unwrap());
                merge(&mut parameters, json!({ key: d["visibility"] }));
            }
            let mut rows = Vec::new();
            for d in &distributions {
                for bar in d["bars"].as_array().unwrap() {
                    rows.push(format!(
                        "{},{},{}",
                        d["settings"].as_str().unwrap(),
                        bar["outcome"].as_str().unwrap(),
                        bar["probability"]
                    ));
                }
            }
            Ok(render_csv(
                "fig3",
                &parameters,
                "settings,outcome,probability",
                &rows,
            ))
        }
    }
}

fn counting_config(
    counting: &CountingArgs,
    file: &FileConfig,
    seed_default: u64,
) -> (f64, f64, u64) {
    (
        counting.rate.or(file.rate).unwrap_or(DEFAULT_RATE),
        counting
            .time
            .or(file.integration_s)
            .unwrap_or(DEFAULT_INTEGRATION_S),
        counting.seed.or(file.seed).unwrap_or(seed_default),
    )
}

fn cmd_mabk(
    state: &StateArgs,
    simulate: bool,
    counting: &CountingArgs,
    file: &FileConfig,
    format: OutputFormat,
) -> anyhow::Result<String> {
    let params = resolve_state(state, file)?;
    let rho = apply_noise(&params);
    let value = mabk_expectation(&rho);

    let mut parameters = state_parameters(&params);
    let mut result = json!({
        "analytic_value": value,
        "lhv_bound": LHV_BOUND,
        "witness_bound": WITNESS_BOUND,
        "quantum_max": quantum_max(),
        "thresholds": threshold_visibilities(),
    });

    let mut records = Vec::new();
    if simulate {
        let (rate, time, seed) = counting_config(counting, file, DEFAULT_SEED);
        let cfg = RunConfig::mabk(rate, time, seed)?;
        records = simulate_counts(&rho, &cfg);
        let estimate = estimate_mabk(&records)?;
        merge(
            &mut parameters,
            json!({
                "rate": rate,
                "integration_s": time,
                "seed": seed,
                "rng": RNG_ALGORITHM,
            }),
        );
        merge(
            &mut result,
            json!({
                "simulation": {
                    "estimate": estimate,
                    "counts": records,
                }
            }),
        );
    }

    match format {
        OutputFormat::Json => render_json(&document("mabk", parameters, &result)),
        OutputFormat::Csv => {
            merge(
                &mut parameters,
                json!({
                    "analytic_value": value,
                    "quantum_max": quantum_max(),
                }),
            );
            if let Some(estimate) = result.get("simulation").map(|s| &s["estimate"]) {
                merge(
                    &mut parameters,
                    json!({
                        "estimated_value": estimate["value"],
                        "sigma": estimate["sigma"],
                        "sigmas_of_violation": estimate["sigmas_of_violation"],
                    }),
                );
            }
            let mut rows = Vec::new();
            for record in &records {
                for o in Outcome::all() {
                    rows.push(format!(
                        "{},{},{}",
                        record.settings,
                        o.label(&record.settings),
                        record.counts[o.index()]
                    ));
                }
            }
            Ok(render_csv(
                "mabk",
                &parameters,
                "settings,outcome,count",
                &rows,
            ))
        }
    }
}

fn cmd_witness(
    state: &StateArgs,
    fidelity: Option<f64>,
    a_value: Option<f64>,
    a_from_fidelity: bool,
    pop_sum: Option<f64>,
    file: &FileConfig,
    format: OutputFormat,
) -> anyhow::Result<String> {
    let fidelity = fidelity.or(file.fidelity);
    let a_value = a_value.or(file.a_value);
    let params = match fidelity {
        Some(f) => {
            if a_from_fidelity {
                let pop = pop_sum.or(file.pop_sum).unwrap_or_else(reference_pop_sum);
                NoiseParams::fit_fidelity_population(f, pop)
                    .context("fitting state from fidelity and populations")?
            } else if let Some(a) = a_value {
                NoiseParams::fit_fidelity_mabk(f, a)
                    .context("fitting state from fidelity and Bell value")?
            } else {
                bail!("--fidelity needs either --a-value or --a-from-fidelity");
            }
        }
        None => resolve_state(state, file)?,
    };
    let rho = apply_noise(&params);
    let report = witness(&rho);
    let parameters = state_parameters(&params);
    match format {
        OutputFormat::Json => render_json(&document("witness", parameters, &report)),
        OutputFormat::Csv => {
            let rows = vec![
                format!("mabk_value,{}", report.mabk_value),
                format!("fidelity,{}", report.fidelity),
                format!("lhv_violated,{}", report.lhv_violated),
                format!("genuine,{}", report.genuine),
                format!("lhv_margin,{}", report.lhv_margin),
                format!("mabk_margin,{}", report.mabk_margin),
                format!("fidelity_margin,{}", report.fidelity_margin),
            ];
            Ok(render_csv("witness", &parameters, "quantity,value", &rows))
        }
    }
}

fn cmd_delay_scan(
    ceiling: Option<f64>,
    tau_um: Option<f64>,
    max_delay_um: Option<f64>,
    steps: Option<usize>,
    rate: Option<f64>,
    file: &FileConfig,
    format: OutputFormat,
) -> anyhow::Result<String> {
    let cfg = DelayScanConfig {
        coherence_tau_um: tau_um.or(file.tau_um).unwrap_or(25.0),
        visibility_ceiling: ceiling.or(file.ceiling).unwrap_or(0.84),
        rate_total: rate.or(file.rate).unwrap_or(DEFAULT_RATE),
    };
    let max_delay = max_delay_um
        .or(file.max_delay_um)
        .unwrap_or(4.0 * cfg.coherence_tau_um);
    let steps = steps.or(file.steps).unwrap_or(41).max(2);
    let positions: Vec<f64> = (0..steps)
        .map(|k| -max_delay + 2.0 * max_delay * k as f64 / (steps - 1) as f64)
        .collect();
    let scan = delay_scan(&positions, &cfg)?;

    let parameters = json!({
        "ceiling": cfg.visibility_ceiling,
        "tau_um": cfg.coherence_tau_um,
        "rate": cfg.rate_total,
        "max_delay_um": max_delay,
        "steps": steps,
    });
    match format {
        OutputFormat::Json => render_json(&document(
            "delay-scan",
            parameters,
            &json!({ "points": scan }),
        )),
        OutputFormat::Csv => {
            // One (delay, rate) column pair per series, stacked long-form.
            let mut rows = Vec::new();
            for point in &scan {
                rows.push(format!("H'H'H'H',{},{}", point.delay_um, point.rate_all_hp));
            }
            for point in &scan {
                rows.push(format!("H'H'H'V',{},{}", point.delay_um, point.rate_last_vp));
            }
            Ok(render_csv(
                "delay-scan",
                &parameters,
                "series,delay_um,rate_per_s",
                &rows,
            ))
        }
    }
}

fn cmd_montecarlo(
    state: &StateArgs,
    counting: &CountingArgs,
    reps: Option<usize>,
    file: &FileConfig,
    format: OutputFormat,
) -> anyhow::Result<String> {
    let params = resolve_state(state, file)?;
    let rho = apply_noise(&params);
    let (rate, time, seed) = counting_config(counting, file, DEFAULT_SEED);
    let reps = reps.or(file.reps).unwrap_or(DEFAULT_REPS);
    let cfg = RunConfig::mabk(rate, time, seed)?;
    let summary = replicate(&rho, &cfg, reps)?;

    let mut parameters = state_parameters(&params);
    merge(
        &mut parameters,
        json!({
            "rate": rate,
            "integration_s": time,
            "seed": seed,
            "reps": reps,
            "rng": RNG_ALGORITHM,
        }),
    );
    match format {
        OutputFormat::Json => render_json(&document("montecarlo", parameters, &summary)),
        OutputFormat::Csv => {
            let rows = vec![
                format!("n_rep,{}", summary.n_rep),
                format!("analytic_value,{}", summary.analytic_value),
                format!("mean_value,{}", summary.mean_value),
                format!("empirical_sigma,{}", summary.empirical_sigma),
                format!("mean_propagated_sigma,{}", summary.mean_propagated_sigma),
                format!("sigma_agreement,{}", summary.sigma_agreement),
                format!(
                    "mean_sigmas_of_violation,{}",
                    summary.mean_sigmas_of_violation
                ),
            ];
            Ok(render_csv(
                "montecarlo",
                &parameters,
                "quantity,value",
                &rows,
            ))
        }
    }
}

fn merge(target: &mut serde_json::Value, extra: serde_json::Value) {
    if let (Some(map), Some(other)) = (target.as_object_mut(), extra.as_object()) {
        for (k, v) in other {
            map.insert(k.clone(), v.clone());
        }
    }
}
