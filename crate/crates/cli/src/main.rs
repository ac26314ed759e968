//! Command-line front end for the entanglement-gain experiments: Monte Carlo
//! sampling, closed-form two-qubit theory, constructive recipes, dephasing
//! dynamics, and Bell-basis reduction. Every output embeds a metadata header
//! with the tool version and the fully resolved configuration, and identical
//! invocations produce byte-identical files regardless of `--jobs`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use entgain::constructions::{
    measurement_for_state, optimal_measurement_2q, schmidt_ket_2q, state_for_measurement,
};
use entgain::dynamics::{max_coherence, negativity_trajectory, ArakiZurekModel};
use entgain::entanglement::pure_negativity;
use entgain::measurement::{bell_reduction, bell_residual, gain, ProjectiveBasis};
use entgain::montecarlo::{
    gain_probability, gain_scatter, mean_statistical_distance, negativity_distributions,
    Histogram, SamplerConfig,
};
use entgain::{CMatrix, DensityMatrix, Ket};

type CliError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(name = "entgain", version, about = "Entanglement gain under non-selective measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for sampling commands (default: all cores; results do
    /// not depend on this).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random (state, basis) pairs; columns n_i,gain.
    GainScatter {
        /// Subsystem dimension of the d×d system.
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trials: usize,
        /// Sampling seed (default: $ENTGAIN_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Estimate the probability that a random measurement gains negativity.
    GainProb {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Histogram post-measurement negativity; columns
    /// series,bin_left,bin_right,frequency with series one of
    /// conditional|unconditional|inputs.
    Distributions {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        bins: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Fix the conditional input to a|00⟩+√(1−a²)|11⟩ (requires --d 2,
        /// a in [0, 1/√2]); default: a Haar-random input.
        #[arg(long)]
        input_a: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Mean statistical distance between conditional and pooled
    /// post-measurement negativity histograms.
    Statdist {
        #[arg(long)]
        d: usize,
        /// Number of sampled inputs and of bases per input.
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        bins: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evolve |00⟩⟨00| under the dephasing model; columns
    /// t,negativity,max_offdiag.
    Evolve {
        /// Measurement-basis parameter b in [0, 1/√2].
        #[arg(long)]
        b: f64,
        /// Coupling scale; the first two basis states are separated by |mu|.
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        /// Number of equal time steps (output has steps+1 rows).
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Measurement negativity and gain maximizing two-qubit entanglement
    /// gain at input negativity --ni.
    #[command(name = "optimal-2q")]
    Optimal2q {
        /// Input-state negativity in [0, 1/2].
        #[arg(long)]
        ni: f64,
    },
    /// Construct an input state that strictly gains under the basis read
    /// from a JSON file.
    ConstructState {
        /// Basis file in the JSON schema written by construct-measurement.
        #[arg(long)]
        basis: PathBuf,
        /// Mixing parameter inside the reported window (default: midpoint).
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Construct a measurement basis that strictly gains on the input
    /// a|00⟩+√(1−a²)|11⟩; output is a loadable basis file.
    ConstructMeasurement {
        /// Schmidt parameter a in [0, 1/√2].
        #[arg(long)]
        a: f64,
    },
    /// Reduce a maximally entangled two-qubit basis to the Bell basis by
    /// local unitaries.
    ReduceBell {
        #[arg(long)]
        basis: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs < 1 {
            return Err("--jobs must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()?;
    }
    let text = render(cli.command)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn render(command: Command) -> Result<String, CliError> {
    match command {
        Command::GainScatter {
            d,
            trials,
            seed,
            format,
        } => {
            let config = resolve_config(d, trials, None, seed)?;
            let samples = gain_scatter(&config)?;
            match format {
                Format::Csv => {
                    let mut out = csv_header("gain-scatter", &config);
                    out.push_str("n_i,gain\n");
                    for s in &samples {
                        writeln!(out, "{},{}", sig17(s.n_i), sig17(s.gain())).unwrap();
                    }
                    Ok(out)
                }
                Format::Json => {
                    let rows: Vec<Value> = samples
                        .iter()
                        .map(|s| json!({ "n_i": s.n_i, "n_f": s.n_f, "gain": s.gain() }))
                        .collect();
                    finish_json(
                        meta("gain-scatter", &config),
                        [("samples".to_string(), Value::Array(rows))],
                    )
                }
            }
        }
        Command::GainProb { d, trials, seed } => {
            let config = resolve_config(d, trials, None, seed)?;
            let result = gain_probability(&config)?;
            finish_json(
                meta("gain-prob", &config),
                match serde_json::to_value(result)? {
                    Value::Object(map) => map,
                    _ => unreachable!("estimates serialize as objects"),
                },
            )
        }
        Command::Distributions {
            d,
            trials,
            bins,
            seed,
            input_a,
            format,
        } => {
            let config = resolve_config(d, trials, Some(bins), seed)?;
            let input = match input_a {
                Some(a) => {
                    if d != 2 {
                        return Err("--input-a requires --d 2".into());
                    }
                    Some(schmidt_ket_2q(check_wlog_range("a", a)?)?)
                }
                None => None,
            };
            let dist = negativity_distributions(&config, input.as_ref())?;
            let series = [
                ("conditional", &dist.conditional),
                ("unconditional", &dist.unconditional),
                ("inputs", &dist.inputs),
            ];
            match format {
                Format::Csv => {
                    let mut out = csv_header("distributions", &config);
                    out.push_str("series,bin_left,bin_right,frequency\n");
                    for (name, hist) in series {
                        let freqs = hist.frequencies();
                        for (k, f) in freqs.iter().enumerate() {
                            let (left, right) = hist.bin_range(k);
                            writeln!(
                                out,
                                "{name},{},{},{}",
                                sig17(left),
                                sig17(right),
                                sig17(*f)
                            )
                            .unwrap();
                        }
                    }
                    Ok(out)
                }
                Format::Json => {
                    let entries = series
                        .iter()
                        .map(|(name, hist)| (name.to_string(), histogram_value(hist)));
                    finish_json(meta("distributions", &config), entries)
                }
            }
        }
        Command::Statdist {
            d,
            trials,
            bins,
            seed,
        } => {
            let config = resolve_config(d, trials, Some(bins), seed)?;
            let mean = mean_statistical_distance(&config)?;
            finish_json(
                meta("statdist", &config),
                [("mean_distance".to_string(), json!(mean))],
            )
        }
        Command::Evolve { b, mu, tmax, steps } => {
            let b = check_wlog_range("b", b)?;
            if !(tmax > 0.0) {
                return Err("--tmax must be positive".into());
            }
            if steps < 1 {
                return Err("--steps must be at least 1".into());
            }
            let reference = ArakiZurekModel::two_qubit_default(b)?;
            let lambdas: Vec<f64> = reference.couplings().iter().map(|l| l * mu).collect();
            let gammas = reference.phases().to_vec();
            let model = ArakiZurekModel::new(reference.basis().clone(), lambdas, gammas)?;

            let zero = Ket::computational(2, 0)?;
            let rho0 = DensityMatrix::pure(&entgain::qstate::tensor(&zero, &zero)?);
            let times: Vec<f64> = (0..=steps)
                .map(|k| k as f64 * tmax / steps as f64)
                .collect();
            let traj = negativity_trajectory(&model, &rho0, &times)?;

            let config = json!({ "b": b, "mu": mu, "tmax": tmax, "steps": steps });
            let mut out = csv_header("evolve", &config);
            out.push_str("t,negativity,max_offdiag\n");
            for ((t, n), state) in times
                .iter()
                .zip(traj.negativities())
                .zip(traj.states())
            {
                writeln!(
                    out,
                    "{},{},{}",
                    sig17(*t),
                    sig17(*n),
                    sig17(max_coherence(&model, state))
                )
                .unwrap();
            }
            Ok(out)
        }
        Command::Optimal2q { ni } => {
            let (nb_max, gain_max) = optimal_measurement_2q(ni)?;
            finish_json(
                meta("optimal-2q", &json!({ "ni": ni })),
                [
                    ("n_i".to_string(), json!(ni)),
                    ("nb_max".to_string(), json!(nb_max)),
                    ("gain_max".to_string(), json!(gain_max)),
                ],
            )
        }
        Command::ConstructState { basis, epsilon } => {
            let text = std::fs::read_to_string(&basis)?;
            let basis = ProjectiveBasis::from_json(&text)?;
            let (state, window) = state_for_measurement(&basis, epsilon)?;
            let achieved = gain(&basis, &DensityMatrix::pure(&state))?;
            let config = json!({
                "basis_dims": { "d1": basis.dims().d1, "d2": basis.dims().d2 },
                "epsilon": epsilon,
            });
            finish_json(
                meta("construct-state", &config),
                [
                    ("dims".to_string(), serde_json::to_value(state.dims())?),
                    ("amplitudes".to_string(), amplitudes_value(&state)),
                    (
                        "epsilon".to_string(),
                        json!(epsilon.unwrap_or_else(|| window.midpoint())),
                    ),
                    ("window".to_string(), serde_json::to_value(window)?),
                    ("negativity".to_string(), json!(pure_negativity(&state))),
                    ("gain".to_string(), json!(achieved)),
                ],
            )
        }
        Command::ConstructMeasurement { a } => {
            let a = check_wlog_range("a", a)?;
            let input = schmidt_ket_2q(a)?;
            let basis = measurement_for_state(&input)?;
            let achieved = gain(&basis, &DensityMatrix::pure(&input))?;
            let basis_value: Value = serde_json::from_str(&basis.to_json())?;
            let Value::Object(map) = basis_value else {
                unreachable!("basis JSON is an object");
            };
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.push(("input_negativity".to_string(), json!(pure_negativity(&input))));
            entries.push(("gain".to_string(), json!(achieved)));
            finish_json(meta("construct-measurement", &json!({ "a": a })), entries)
        }
        Command::ReduceBell { basis } => {
            let text = std::fs::read_to_string(&basis)?;
            let basis = ProjectiveBasis::from_json(&text)?;
            let pair = bell_reduction(&basis)?;
            let residual = bell_residual(&basis, &pair)?;
            finish_json(
                meta("reduce-bell", &json!({})),
                [
                    ("u1".to_string(), matrix_value(&pair.u1)),
                    ("u2".to_string(), matrix_value(&pair.u2)),
                    ("residual".to_string(), json!(residual)),
                ],
            )
        }
    }
}

/// Seed precedence: --seed flag, then $ENTGAIN_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("ENTGAIN_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("ENTGAIN_SEED must be a 64-bit unsigned integer, got {text:?}").into()),
        Err(_) => Ok(0),
    }
}

fn resolve_config(
    d: usize,
    trials: usize,
    bins: Option<usize>,
    seed: Option<u64>,
) -> Result<SamplerConfig, CliError> {
    let mut config = SamplerConfig::new(d, trials, resolve_seed(seed)?);
    if let Some(bins) = bins {
        config.bins = bins;
    }
    Ok(config)
}

/// The parameters a and b enter only through {x, √(1−x²)}, so values beyond
/// 1/√2 duplicate smaller ones and are rejected.
fn check_wlog_range(name: &str, value: f64) -> Result<f64, CliError> {
    if !(0.0..=FRAC_1_SQRT_2).contains(&value) {
        return Err(format!("--{name} must lie in [0, 1/√2 ≈ 0.7071067811865476], got {value}").into());
    }
    Ok(value)
}

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn meta(command: &str, config: &impl serde::Serialize) -> Value {
    json!({
        "tool": "entgain",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": serde_json::to_value(config).expect("configs serialize"),
    })
}

fn csv_header(command: &str, config: &impl serde::Serialize) -> String {
    let config = serde_json::to_value(config).expect("configs serialize");
    let mut out = String::new();
    writeln!(out, "# tool: entgain {}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(out, "# command: {command}").unwrap();
    if let Some(seed) = config.get("seed") {
        writeln!(out, "# seed: {seed}").unwrap();
    }
    writeln!(out, "# config: {config}").unwrap();
    out
}

/// Assembles the final JSON document: meta plus payload fields, then a
/// trailing newline. Keys are emitted in sorted order for stable bytes.
fn finish_json(
    meta: Value,
    payload: impl IntoIterator<Item = (String, Value)>,
) -> Result<String, CliError> {
    let mut map = Map::new();
    map.insert("meta".to_string(), meta);
    for (key, value) in payload {
        map.insert(key, value);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(map))?;
    text.push('\n');
    Ok(text)
}

fn histogram_value(hist: &Histogram) -> Value {
    let edges: Vec<f64> = (0..hist.bins())
        .map(|k| hist.bin_range(k).0)
        .chain(std::iter::once(hist.max()))
        .collect();
    json!({
        "bin_edges": edges,
        "counts": hist.counts(),
        "frequencies": hist.frequencies(),
    })
}

fn amplitudes_value(ket: &Ket) -> Value {
    Value::Array(
        ket.amplitudes()
            .iter()
            .map(|z| json!([z.re, z.im]))
            .collect(),
    )
}

fn matrix_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}
