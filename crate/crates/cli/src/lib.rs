//! Configuration, dispatch and report emission for the `modspace` binary.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use modspace::experiments::{self as exp, Experiment};
use modspace::report::{Assertion, Row, SweepReport};
use modspace::Grid;
use rayon::prelude::*;
use serde::ser::Serialize;
use serde::{Deserialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] modspace::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

pub type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

// ---------------------------------------------------------------- config

/// Experiment name plus its typed parameters.
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "kebab-case")]
#[serde(try_from = "RawExperiment")]
pub enum ExperimentConfig {
    Stft(exp::StftParams),
    Moyal(exp::MoyalParams),
    Norm(exp::NormParams),
    BupuCheck(exp::BupuParams),
    RudinShapiro(exp::RudinShapiroParams),
    Plateau(exp::PlateauParams),
    TranslationBound(exp::TranslationParams),
    Compose(exp::ComposeParams),
    Reciprocal(exp::ReciprocalParams),
    ApproxUnit(exp::ApproxUnitParams),
    EmbeddingSweep(exp::EmbeddingParams),
    AlgebraSweep(exp::AlgebraParams),
    CounterexampleFlat(exp::FlatParams),
    CounterexampleL2(exp::L2Params),
    All,
}

/// Lets `params` be omitted or partial; missing fields take their defaults.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: String,
    #[serde(default)]
    params: Option<serde_json::Value>,
}

impl TryFrom<RawExperiment> for ExperimentConfig {
    type Error = String;

    fn try_from(raw: RawExperiment) -> std::result::Result<Self, String> {
        let params = raw.params.unwrap_or_else(|| serde_json::json!({}));
        if raw.name == "all" {
            return match params.as_object() {
                Some(m) if m.is_empty() => Ok(ExperimentConfig::All),
                _ => Err("experiment \"all\" takes no params".into()),
            };
        }
        let e = Experiment::parse(&raw.name).map_err(|e| e.to_string())?;
        ExperimentConfig::with_params(e, params).map_err(|e| e.to_string())
    }
}

impl ExperimentConfig {
    pub fn default_for(e: Experiment) -> Self {
        ExperimentConfig::with_params(e, serde_json::json!({})).expect("defaults deserialize")
    }

    fn with_params(e: Experiment, v: serde_json::Value) -> serde_json::Result<Self> {
        use serde_json::from_value as p;
        Ok(match e {
            Experiment::Stft => ExperimentConfig::Stft(p(v)?),
            Experiment::Moyal => ExperimentConfig::Moyal(p(v)?),
            Experiment::Norm => ExperimentConfig::Norm(p(v)?),
            Experiment::BupuCheck => ExperimentConfig::BupuCheck(p(v)?),
            Experiment::RudinShapiro => ExperimentConfig::RudinShapiro(p(v)?),
            Experiment::Plateau => ExperimentConfig::Plateau(p(v)?),
            Experiment::TranslationBound => ExperimentConfig::TranslationBound(p(v)?),
            Experiment::Compose => ExperimentConfig::Compose(p(v)?),
            Experiment::Reciprocal => ExperimentConfig::Reciprocal(p(v)?),
            Experiment::ApproxUnit => ExperimentConfig::ApproxUnit(p(v)?),
            Experiment::EmbeddingSweep => ExperimentConfig::EmbeddingSweep(p(v)?),
            Experiment::AlgebraSweep => ExperimentConfig::AlgebraSweep(p(v)?),
            Experiment::CounterexampleFlat => ExperimentConfig::CounterexampleFlat(p(v)?),
            Experiment::CounterexampleL2 => ExperimentConfig::CounterexampleL2(p(v)?),
        })
    }

    /// `None` for `all`.
    pub fn experiment(&self) -> Option<Experiment> {
        Some(match self {
            ExperimentConfig::Stft(_) => Experiment::Stft,
            ExperimentConfig::Moyal(_) => Experiment::Moyal,
            ExperimentConfig::Norm(_) => Experiment::Norm,
            ExperimentConfig::BupuCheck(_) => Experiment::BupuCheck,
            ExperimentConfig::RudinShapiro(_) => Experiment::RudinShapiro,
            ExperimentConfig::Plateau(_) => Experiment::Plateau,
            ExperimentConfig::TranslationBound(_) => Experiment::TranslationBound,
            ExperimentConfig::Compose(_) => Experiment::Compose,
            ExperimentConfig::Reciprocal(_) => Experiment::Reciprocal,
            ExperimentConfig::ApproxUnit(_) => Experiment::ApproxUnit,
            ExperimentConfig::EmbeddingSweep(_) => Experiment::EmbeddingSweep,
            ExperimentConfig::AlgebraSweep(_) => Experiment::AlgebraSweep,
            ExperimentConfig::CounterexampleFlat(_) => Experiment::CounterexampleFlat,
            ExperimentConfig::CounterexampleL2(_) => Experiment::CounterexampleL2,
            ExperimentConfig::All => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        self.experiment().map_or("all", Experiment::name)
    }

    /// Parses a name accepted on the command line, `all` included.
    pub fn parse_name(name: &str) -> Result<Self> {
        if name == "all" {
            return Ok(ExperimentConfig::All);
        }
        let e = Experiment::parse(name).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(ExperimentConfig::default_for(e))
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_grid")]
    pub grid: Grid,
    pub experiment: ExperimentConfig,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

pub fn default_grid() -> Grid {
    Grid::new(4096, 40.0).expect("default grid")
}

pub fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn new(experiment: ExperimentConfig) -> Self {
        RunConfig { grid: default_grid(), experiment, out: default_out(), seed: 0 }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        RunConfig::from_json(&fs::read_to_string(path).map_err(io_err(path))?)
    }

    pub fn to_json(&self) -> String {
        to_fixed_json(self)
    }
}

// ---------------------------------------------------------------- formatting

/// Pretty JSON with every float printed as `d.dddddddddddddddde±x` (17 significant digits).
#[derive(Default)]
pub struct Fixed17<'a>(PrettyFormatter<'a>);

impl Formatter for Fixed17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_fixed_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17::default());
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

// ---------------------------------------------------------------- reports

/// The part of [`RunConfig`] that determines a report's contents.
#[derive(serde::Serialize)]
struct ReportConfig<'a> {
    grid: Grid,
    experiment: &'a ExperimentConfig,
    seed: u64,
}

struct Report<'a> {
    experiment: &'a str,
    config: ReportConfig<'a>,
    rows: &'a [Row],
    assertions: &'a [Assertion],
}

impl serde::Serialize for Report<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Report", 5)?;
        st.serialize_field("schema", &SCHEMA_VERSION)?;
        st.serialize_field("experiment", self.experiment)?;
        st.serialize_field("config", &self.config)?;
        st.serialize_field("rows", self.rows)?;
        st.serialize_field("assertions", self.assertions)?;
        st.end()
    }
}

/// Outcome of one `run`.
#[derive(Debug)]
pub struct Outcome {
    pub reports: Vec<(Experiment, std::result::Result<SweepReport, String>)>,
    pub summary: SweepReport,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.summary.passed()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig, grid: Grid, seed: u64) -> modspace::Result<SweepReport> {
    match config {
        ExperimentConfig::Stft(p) => exp::stft_check(grid, seed, p),
        ExperimentConfig::Moyal(p) => exp::moyal(grid, seed, p),
        ExperimentConfig::Norm(p) => exp::norm_report(grid, seed, p),
        ExperimentConfig::BupuCheck(p) => exp::bupu_check(grid, seed, p),
        ExperimentConfig::RudinShapiro(p) => exp::rudin_shapiro_check(p),
        ExperimentConfig::Plateau(p) => exp::plateau_check(grid, p),
        ExperimentConfig::TranslationBound(p) => exp::translation_bound_check(grid, p),
        ExperimentConfig::Compose(p) => exp::compose_check(grid, seed, p),
        ExperimentConfig::Reciprocal(p) => exp::reciprocal_check(grid, p),
        ExperimentConfig::ApproxUnit(p) => exp::approx_unit_check(grid, seed, p),
        ExperimentConfig::EmbeddingSweep(p) => exp::embedding_check(grid, seed, p),
        ExperimentConfig::AlgebraSweep(p) => exp::algebra_check(grid, seed, p),
        ExperimentConfig::CounterexampleFlat(p) => exp::counterexample_flat(p),
        ExperimentConfig::CounterexampleL2(p) => exp::counterexample_l2(p.k0, &p.checkpoints),
        ExperimentConfig::All => Err(modspace::Error::InvalidArgument("`all` is not a single experiment".into())),
    }
}

fn write_report(dir: &Path, name: &str, config: ReportConfig<'_>, rep: &SweepReport) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let report = Report { experiment: name, config, rows: &rep.rows, assertions: &rep.assertions };
    let write = |file: &str, contents: &str| {
        let path = dir.join(file);
        fs::write(&path, contents).map_err(io_err(&path))
    };
    write("report.json", &to_fixed_json(&report))?;
    write("report.csv", &rep.to_csv())?;
    for a in &rep.artifacts {
        write(&a.file_name, &a.contents)?;
    }
    Ok(())
}

/// One row per experiment; every sub-assertion is re-exported as `experiment/assertion`.
fn summarize(reports: &[(Experiment, std::result::Result<SweepReport, String>)]) -> SweepReport {
    let mut summary = SweepReport::new("all", "experiment");
    for (e, r) in reports {
        match r {
            Ok(rep) => {
                let failed = rep.assertions.iter().filter(|a| !a.pass).count();
                summary.rows.push(
                    Row::new()
                        .with("experiment", e.name())
                        .with("pass", rep.passed())
                        .with("assertions", rep.assertions.len())
                        .with("failed", failed),
                );
                for a in &rep.assertions {
                    summary.assertions.push(Assertion { name: format!("{}/{}", e.name(), a.name), ..a.clone() });
                }
            }
            Err(msg) => {
                summary.rows.push(Row::new().with("experiment", e.name()).with("pass", false).with("error", msg.as_str()));
                summary.assertions.push(Assertion::at_most(format!("{}/completed", e.name()), 1.0, 0.0));
            }
        }
    }
    summary
}

/// Runs `config` and writes `report.json`, `report.csv` and artifacts under `config.out`.
///
/// `all` runs every experiment with default parameters on up to `jobs` threads and
/// writes each one to `out/<experiment>/`, plus a summary report in `out/`.
pub fn run(config: &RunConfig, jobs: usize) -> Result<Outcome> {
    let grid = config.grid;
    let seed = config.seed;
    match config.experiment.experiment() {
        Some(e) => {
            let rep = run_experiment(&config.experiment, grid, seed)?;
            let rc = ReportConfig { grid, experiment: &config.experiment, seed };
            write_report(&config.out, e.name(), rc, &rep)?;
            let reports = vec![(e, Ok(rep))];
            let mut summary = summarize(&reports);
            summary.name = e.name().into();
            Ok(Outcome { reports, summary })
        }
        None => {
            let configs: Vec<ExperimentConfig> = Experiment::ALL.iter().map(|&e| ExperimentConfig::default_for(e)).collect();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
            let results: Vec<std::result::Result<SweepReport, String>> = pool.install(|| {
                configs.par_iter().map(|c| run_experiment(c, grid, seed).map_err(|e| e.to_string())).collect()
            });
            for (c, r) in configs.iter().zip(&results) {
                if let Ok(rep) = r {
                    let rc = ReportConfig { grid, experiment: c, seed };
                    write_report(&config.out.join(c.name()), c.name(), rc, rep)?;
                }
            }
            let reports: Vec<_> = Experiment::ALL.into_iter().zip(results).collect();
            let summary = summarize(&reports);
            let rc = ReportConfig { grid, experiment: &config.experiment, seed };
            write_report(&config.out, "all", rc, &summary)?;
            Ok(Outcome { reports, summary })
        }
    }
}

/// `name<TAB>anchor` per experiment.
pub fn list() -> String {
    let mut s = String::new();
    for e in Experiment::ALL {
        s.push_str(&format!("{:<20} {}\n", e.name(), e.anchor()));
    }
    s.push_str(&format!("{:<20} {}\n", "all", "Every experiment above with default parameters"));
    s
}
