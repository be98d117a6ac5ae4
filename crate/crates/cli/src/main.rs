use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dstrength::discrimination::{chernoff_overlap, fidelity, helstrom_error};
use dstrength::experiments::{
    decay_study, property_suite, sweep_separable, uniform_pqc_limit, write_csv, write_json, SweepConfig,
    SweepMode,
};
use dstrength::io::StateFile;
use dstrength::measures::{discriminating_strength, lqu, MethodChoice, OptimizerOptions};
use dstrength::{BipartiteState, Error, LocalHamiltonian, Spectrum};

mod fixtures;
mod output;

#[derive(Parser)]
#[command(name = "dstrength", version, about = "Discriminating strength of bipartite quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum Chernoff overlap Q, optimal s and decay rate of two states.
    Qcb { state0: PathBuf, state1: PathBuf },
    /// Discriminating strength of a state.
    Ds {
        state: PathBuf,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Local quantum uncertainty of a state.
    Lqu {
        state: PathBuf,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Use the unitary search even when A is a qubit.
        #[arg(long)]
        general: bool,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Minimum error probability for n copies of two equiprobable states.
    Helstrom {
        state0: PathBuf,
        state1: PathBuf,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Numerical experiments; results go to --out.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Write a named state to a file (or stdout).
    State {
        #[arg(value_enum)]
        name: fixtures::Fixture,
        #[command(flatten)]
        params: fixtures::FixtureParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Separable two-qubit sweep with a DS histogram.
    SeparableSweep {
        /// Ensemble size (2, 3 or 4).
        #[arg(long)]
        n: usize,
        /// Grid points per Bloch angle.
        #[arg(long, default_value_t = 9)]
        resolution: usize,
        /// Grid points per probability angle (defaults to --resolution).
        #[arg(long)]
        prob_resolution: Option<usize>,
        #[arg(long)]
        lambda: f64,
        /// Draw this many random ensembles instead of walking the grid.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_states: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// DS of uniform pure quantum-classical states for growing ensembles.
    UniformPqc {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Error probability against copies, for a state and its optimal rotation.
    Decay {
        state: PathBuf,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Randomized checks of the defining properties of DS.
    Properties {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct SpectrumArgs {
    /// Qubit spectrum {λ, −λ}.
    #[arg(long)]
    lambda: Option<f64>,
    /// Descending comma-separated eigenvalues.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    spectrum: Option<Vec<f64>>,
}

impl SpectrumArgs {
    fn resolve(&self, dim_a: usize) -> dstrength::Result<Spectrum> {
        match (self.lambda, &self.spectrum) {
            (Some(l), _) if dim_a == 2 => Spectrum::qubit(l),
            (Some(_), _) => Err(Error::Range(format!(
                "--lambda needs a qubit A; use --spectrum for dim_a = {dim_a}"
            ))),
            (None, Some(v)) => Spectrum::new(v.clone()),
            (None, None) => unreachable!("clap enforces one of the two"),
        }
    }
}

#[derive(Args, Clone)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
}

impl OptimizerArgs {
    fn options(&self) -> OptimizerOptions {
        OptimizerOptions {
            seed: self.seed,
            restarts: self.restarts,
            ..OptimizerOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    General,
    Pure,
    Qubit,
}

impl From<Method> for MethodChoice {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => MethodChoice::Auto,
            Method::General => MethodChoice::General,
            Method::Pure => MethodChoice::Pure,
            Method::Qubit => MethodChoice::Qubit,
        }
    }
}

const EXIT_PARSE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_CONFIG: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => EXIT_PARSE,
        Error::Contract(_) | Error::Dimension(_) | Error::Precondition(_) => EXIT_INVARIANT,
        Error::Range(_) | Error::Spectrum(_) | Error::Capacity(_) => EXIT_CONFIG,
    }
}

fn load(path: &Path) -> dstrength::Result<BipartiteState> {
    let file = StateFile::load(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })?;
    file.to_state()
}

fn hamiltonian_json(h: &LocalHamiltonian) -> Value {
    json!({
        "spectrum": h.spectrum().values(),
        "basis": output::matrix(h.basis()),
    })
}

fn prepare_dir(dir: &Path) -> dstrength::Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn run(cli: Cli) -> dstrength::Result<()> {
    match cli.command {
        Command::Qcb { state0, state1 } => {
            let (a, b) = (load(&state0)?, load(&state1)?);
            let r = chernoff_overlap(a.rho(), b.rho())?;
            output::print(&json!({
                "q": r.q,
                "s_star": r.s_star,
                "xi": r.xi,
                "fidelity": fidelity(a.rho(), b.rho())?,
            }));
        }
        Command::Ds {
            state,
            spectrum,
            method,
            optimizer,
        } => {
            let st = load(&state)?;
            let sp = spectrum.resolve(st.dim_a())?;
            let r = discriminating_strength(&st, &sp, method.into(), &optimizer.options())?;
            output::print(&json!({
                "value": r.value,
                "method": r.method.to_string(),
                "optimal_hamiltonian": hamiltonian_json(&r.optimal_hamiltonian),
            }));
        }
        Command::Lqu {
            state,
            spectrum,
            general,
            optimizer,
        } => {
            let st = load(&state)?;
            let sp = spectrum.resolve(st.dim_a())?;
            let opts = OptimizerOptions {
                force_general: general,
                ..optimizer.options()
            };
            let r = lqu(&st, &sp, &opts)?;
            output::print(&json!({
                "value": r.value,
                "optimal_hamiltonian": hamiltonian_json(&r.optimal_hamiltonian),
            }));
        }
        Command::Helstrom { state0, state1, copies } => {
            let (a, b) = (load(&state0)?, load(&state1)?);
            let p = helstrom_error(a.rho(), b.rho(), copies)?;
            output::print(&json!({ "copies": copies, "p_err": p }));
        }
        Command::Experiment(e) => run_experiment(e)?,
        Command::State { name, params, out } => {
            let (state, meta) = fixtures::build(name, &params)?;
            let text = StateFile::from_state(&state, Some(meta)).to_canonical();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn run_experiment(e: Experiment) -> dstrength::Result<()> {
    match e {
        Experiment::SeparableSweep {
            n,
            resolution,
            prob_resolution,
            lambda,
            random,
            seed,
            max_states,
            out,
        } => {
            let cfg = SweepConfig {
                ensemble_size: n,
                resolution,
                prob_resolution,
                lambda,
                seed,
                max_states,
                mode: random.map_or(SweepMode::Grid, |samples| SweepMode::Random { samples }),
            };
            cfg.validate()?;
            prepare_dir(&out)?;
            let r = sweep_separable(&cfg)?;
            let csv = out.join(format!("sweep_n{n}_histogram.csv"));
            let summary = out.join(format!("sweep_n{n}_summary.json"));
            write_csv(&csv, &r.histogram_rows())?;
            write_json(&summary, &output::rounded(&r.summary()))?;
            println!(
                "best DS/sin^2(lambda) = {} over {} states{}; wrote {} and {}",
                output::fmt(r.best_value),
                r.states_evaluated,
                if r.truncated { " (truncated)" } else { "" },
                csv.display(),
                summary.display()
            );
        }
        Experiment::UniformPqc { d, lambda, out } => {
            prepare_dir(&out)?;
            let rows = uniform_pqc_limit(&d, lambda)?;
            let csv = out.join("uniform_pqc.csv");
            let summary = out.join("uniform_pqc.json");
            write_csv(&csv, &rows)?;
            write_json(&summary, &output::rounded(&json!({ "lambda": lambda, "rows": rows })))?;
            let last = rows.last().expect("clap requires at least one d");
            println!(
                "d = {}: DS/sin^2(lambda) = {} (|diff from 2/3| = {}); wrote {} and {}",
                last.d,
                output::fmt(last.normalized),
                output::fmt(last.deviation),
                csv.display(),
                summary.display()
            );
        }
        Experiment::Decay {
            state,
            spectrum,
            n_max,
            optimizer,
            out,
        } => {
            let st = load(&state)?;
            let sp = spectrum.resolve(st.dim_a())?;
            prepare_dir(&out)?;
            let study = decay_study(&st, &sp, n_max, &optimizer.options())?;
            let csv = out.join("decay.csv");
            let summary = out.join("decay.json");
            write_csv(&csv, &study.table.rows)?;
            write_json(&summary, &output::rounded(&serde_json::to_value(&study)?))?;
            println!(
                "DS = {}, Q = {}, rate = {}; wrote {} and {}",
                output::fmt(study.ds),
                output::fmt(study.table.chernoff.q),
                output::fmt(study.table.chernoff.xi.value()),
                csv.display(),
                summary.display()
            );
        }
        Experiment::Properties {
            trials,
            seed,
            restarts,
            out,
        } => {
            prepare_dir(&out)?;
            let opts = OptimizerOptions {
                seed,
                restarts,
                ..OptimizerOptions::default()
            };
            let report = property_suite(seed, trials, &opts)?;
            let csv = out.join("properties.csv");
            let summary = out.join("properties.json");
            write_csv(&csv, &report.rows())?;
            write_json(&summary, &output::rounded(&serde_json::to_value(&report)?))?;
            if report.all_passed() {
                println!("all properties passed; wrote {} and {}", csv.display(), summary.display());
            } else {
                let failed: Vec<_> = report
                    .properties
                    .iter()
                    .filter(|p| !p.passed())
                    .map(|p| p.name.as_str())
                    .collect();
                return Err(Error::Contract(format!(
                    "properties failed: {}; see {}",
                    failed.join(", "),
                    summary.display()
                )));
            }
        }
    }
    Ok(())
}

fn configure_threads() -> dstrength::Result<()> {
    let Ok(raw) = std::env::var("DSTRENGTH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Range(format!("DSTRENGTH_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Range(format!("cannot size the worker pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
