use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modspace::norms::Space;
use modspace::{Exponent, Grid};
use modspace_cli::{list, run, CliError, ExperimentConfig, Result, RunConfig};

#[derive(Parser)]
#[command(name = "modspace", version, about = "Modulation-space experiments on uniform grids")]
struct Cli {
    /// List every experiment with its anchor and exit.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment, or `all`.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment name (see --list); optional when --config names one.
    experiment: Option<String>,
    /// JSON RunConfig; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "L")]
    half_width: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for `all`.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Depth of the Rudin-Shapiro recursion (rudin-shapiro, counterexample-flat).
    #[arg(long)]
    m: Option<u32>,
    /// First block index (counterexample-l2).
    #[arg(long)]
    k0: Option<u64>,
    /// Comma-separated K values (counterexample-l2).
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<f64>>,
    /// Corpus signal name.
    #[arg(long)]
    signal: Option<String>,
    /// Analytic function: z, z^2, 1/z, saturating, exp(z)-1.
    #[arg(long)]
    function: Option<String>,
    /// Signal CSV with a JSON sidecar (norm).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    space: Option<String>,
    /// Integrability exponent; a comma-separated list for counterexample-flat.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    s: Option<f64>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn exponent(s: &str) -> Result<Exponent> {
    s.parse().map_err(|e: modspace::Error| bad(e.to_string()))
}

fn space(s: &str) -> Result<Space> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| bad(format!("unknown space {s:?}")))
}

impl RunArgs {
    fn into_config(self) -> Result<(RunConfig, usize)> {
        let mut config = match (&self.config, &self.experiment) {
            (Some(path), _) => RunConfig::load(path)?,
            (None, Some(name)) => RunConfig::new(ExperimentConfig::parse_name(name)?),
            (None, None) => return Err(bad("run needs an experiment name or --config")),
        };
        if let (Some(_), Some(name)) = (&self.config, &self.experiment) {
            if config.experiment.name() != name {
                return Err(bad(format!("--config names {:?} but the command names {name:?}", config.experiment.name())));
            }
        }
        if self.n.is_some() || self.half_width.is_some() {
            let n = self.n.unwrap_or(config.grid.n());
            let l = self.half_width.unwrap_or(config.grid.half_width());
            config.grid = Grid::new(n, l)?;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.out = out.clone();
        }
        self.apply_experiment_flags(&mut config.experiment)?;
        Ok((config, self.jobs))
    }

    fn apply_experiment_flags(&self, exp: &mut ExperimentConfig) -> Result<()> {
        let name = exp.name();
        let mut used = Vec::new();
        macro_rules! flag {
            ($field:ident, $label:literal, |$v:ident| $apply:expr) => {
                if let Some($v) = &self.$field {
                    used.push($label);
                    $apply;
                }
            };
        }
        match exp {
            ExperimentConfig::RudinShapiro(p) => flag!(m, "--m", |v| p.m = *v),
            ExperimentConfig::CounterexampleFlat(p) => {
                flag!(m, "--m", |v| p.m = *v);
                flag!(p, "--p", |v| {
                    p.p = v.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| bad(format!("--p: {e}")))).collect::<Result<_>>()?
                });
            }
            ExperimentConfig::CounterexampleL2(p) => {
                flag!(k0, "--k0", |v| p.k0 = *v);
                flag!(checkpoints, "--checkpoints", |v| p.checkpoints = v.clone());
            }
            ExperimentConfig::Norm(p) => {
                flag!(signal, "--signal", |v| p.signal = v.clone());
                flag!(input, "--input", |v| p.input = Some(v.clone()));
                flag!(space, "--space", |v| p.space = space(v)?);
                flag!(p, "--p", |v| p.p = exponent(v)?);
                flag!(q, "--q", |v| p.q = exponent(v)?);
                flag!(s, "--s", |v| p.s = *v);
            }
            ExperimentConfig::Compose(p) => {
                flag!(signal, "--signal", |v| p.signal = v.clone());
                flag!(function, "--function", |v| p.function = v.clone());
            }
            ExperimentConfig::Stft(p) => flag!(signal, "--signal", |v| p.signal = v.clone()),
            ExperimentConfig::ApproxUnit(p) => flag!(signal, "--signal", |v| p.signal = v.clone()),
            _ => {}
        }
        let given = [
            ("--m", self.m.is_some()),
            ("--k0", self.k0.is_some()),
            ("--checkpoints", self.checkpoints.is_some()),
            ("--signal", self.signal.is_some()),
            ("--function", self.function.is_some()),
            ("--input", self.input.is_some()),
            ("--space", self.space.is_some()),
            ("--p", self.p.is_some()),
            ("--q", self.q.is_some()),
            ("--s", self.s.is_some()),
        ];
        if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !used.contains(f)) {
            return Err(bad(format!("{flag} does not apply to {name}")));
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.list {
        print!("{}", list());
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run(args)) = cli.command else {
        eprintln!("nothing to do; try `modspace --list` or `modspace run <experiment>`");
        return ExitCode::from(1);
    };
    let outcome = args.into_config().and_then(|(config, jobs)| run(&config, jobs).map(|o| (config, o)));
    match outcome {
        Ok((config, o)) => {
            for a in &o.summary.assertions {
                println!("{} {} measured={:e} tolerance={:e}", if a.pass { "PASS" } else { "FAIL" }, a.name, a.measured, a.tolerance);
            }
            println!("report: {}", config.out.join("report.json").display());
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
