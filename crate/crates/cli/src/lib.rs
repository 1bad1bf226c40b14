//! Command-line front end: runs scenarios and writes reports and figures.

pub mod config;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use braidflow::obstruction::find_obstruction;
use braidflow::scenarios::{
    autonomous_baseline_suite, auxiliary_windings, perturbation_sweep, run_scenario, scenario_braid,
    set_valued_with_window,
};
use braidflow::{ScenarioConfig, ScenarioError, ScenarioResult, SurfaceModel};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use config::{load_config, parse_config, to_toml, ConfigError};
pub use report::{from_json, to_json, to_text, ReportDocument};
pub use svg::{emit_svg, SvgError, SvgKind};

pub const OUT_DIR_ENV: &str = "BRAIDFLOW_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "braidflow", version, about = "Braids of fixed points of Hamiltonian disk maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Built-in scenario.
    #[arg(long, default_value = "paper-disk", value_parser = clap::builder::PossibleValuesParser::new(ScenarioConfig::NAMES))]
    pub scenario: String,
    /// Scenario file (TOML); replaces --scenario.
    #[arg(long, conflicts_with = "scenario")]
    pub config: Option<PathBuf>,
    /// Directory for report and SVG files.
    #[arg(long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
    /// Rendering printed on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write an SVG figure.
    #[arg(long, value_enum)]
    pub svg: Option<SvgKind>,
    /// Override the integrator step count.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline: braid, obstruction, fixed sets, spectrum, admissibility.
    Simulate(Common),
    /// Winding matrix of the marked points.
    Winding(Common),
    /// Winding matrix and obstruction search.
    Obstruct(Common),
    /// Fixed-set classification, action spectrum and admissibility.
    Spectrum(Common),
    /// Persistence of the braid under bump perturbations.
    Perturb {
        #[command(flatten)]
        common: Common,
        /// Perturbation amplitudes; defaults to the scenario's list.
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
    },
    /// Random autonomous systems checked against the order laws.
    Baseline {
        #[command(flatten)]
        common: Common,
        /// Defaults to the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Everything `simulate` reports plus the perturbation sweep.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Svg(#[from] SvgError),
}

impl CliError {
    /// 2 for bad input, 3 for failures while computing or writing results.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(e) if e.is_validation() => 2,
            CliError::Config(_) | CliError::Invalid(_) => 2,
            CliError::Scenario(_) | CliError::Write { .. } | CliError::Svg(_) => 3,
        }
    }
}

/// Files written by one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Artifacts {
    pub report: Option<PathBuf>,
    pub text: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub struct Outcome {
    pub document: ReportDocument,
    pub result: Option<ScenarioResult>,
}

fn resolve_config(common: &Common) -> Result<ScenarioConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => load_config(path)?,
        None => ScenarioConfig::named(&common.scenario)
            .ok_or_else(|| CliError::Invalid(format!("unknown scenario {:?}", common.scenario)))?,
    };
    if let Some(steps) = common.steps {
        config.integrator.steps = steps;
    }
    Ok(config)
}

fn fill_full(doc: &mut ReportDocument, r: &ScenarioResult) {
    doc.marked_points = Some(r.marked.clone());
    doc.winding = Some(r.winding.clone());
    doc.obstruction = Some(report::ObstructionSection::new(&r.winding, r.obstruction.clone()));
    doc.auxiliary_points = Some(r.auxiliary.clone());
    if r.config.model != SurfaceModel::Disk {
        doc.set_valued_windings = Some(r.set_valued.clone());
    }
    doc.fixed_sets = Some(r.components.clone());
    doc.spectrum = Some(r.spectrum.clone());
    doc.admissibility = Some(r.admissibility.clone());
}

/// Runs a subcommand without touching the filesystem.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    let (name, common) = match command {
        Command::Simulate(c) => ("simulate", c),
        Command::Winding(c) => ("winding", c),
        Command::Obstruct(c) => ("obstruct", c),
        Command::Spectrum(c) => ("spectrum", c),
        Command::Perturb { common, .. } => ("perturb", common),
        Command::Baseline { common, .. } => ("baseline", common),
        Command::Report { common, .. } => ("report", common),
    };
    let config = resolve_config(common)?;
    let mut doc = ReportDocument::new(name, &config);
    let mut result = None;
    match command {
        Command::Simulate(_) => {
            let r = run_scenario(&config)?;
            fill_full(&mut doc, &r);
            result = Some(r);
        }
        Command::Winding(_) | Command::Obstruct(_) => {
            let (built, marked, strands, w) = scenario_braid(&config)?;
            doc.marked_points = Some(marked.clone());
            doc.auxiliary_points = Some(auxiliary_windings(&built, &strands, &config)?);
            if config.model != SurfaceModel::Disk {
                doc.set_valued_windings = Some(set_valued_with_window(
                    &strands,
                    config.model,
                    config.tolerances.deck_window,
                    &config.tolerances.braid_options(),
                )?);
            }
            if matches!(command, Command::Obstruct(_)) {
                let cert = find_obstruction(&w).map_err(|e| {
                    CliError::Scenario(ScenarioError::Stage {
                        stage: braidflow::scenarios::Stage::Obstruction,
                        source: e.into(),
                    })
                })?;
                doc.obstruction = Some(report::ObstructionSection::new(&w, cert));
            }
            doc.winding = Some(w);
            if common.svg.is_some() {
                result = Some(run_scenario(&config)?);
            }
        }
        Command::Spectrum(_) => {
            let r = run_scenario(&config)?;
            doc.marked_points = Some(r.marked.clone());
            doc.fixed_sets = Some(r.components.clone());
            doc.spectrum = Some(r.spectrum.clone());
            doc.admissibility = Some(r.admissibility.clone());
            result = Some(r);
        }
        Command::Perturb { deltas, .. } | Command::Report { deltas, .. } => {
            let r = run_scenario(&config)?;
            let deltas = deltas.clone().unwrap_or_else(|| config.sweep.deltas.clone());
            let sweep = perturbation_sweep(&config, &deltas, r.spectrum.epsilon)?;
            if matches!(command, Command::Report { .. }) {
                fill_full(&mut doc, &r);
            } else {
                doc.winding = Some(r.winding.clone());
                doc.spectrum = Some(r.spectrum.clone());
            }
            doc.persistence = Some(sweep);
            result = Some(r);
        }
        Command::Baseline { seed, count, .. } => {
            if *count == 0 {
                return Err(CliError::Invalid("--count must be at least 1".into()));
            }
            if common.svg.is_some() {
                return Err(CliError::Invalid("the baseline suite has no single braid to draw".into()));
            }
            doc.baseline = Some(autonomous_baseline_suite(seed.unwrap_or(config.seed), *count)?);
        }
    }
    Ok(Outcome { document: doc, result })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
        }
    }
    std::fs::write(path, contents).map_err(|source| CliError::Write { path: path.into(), source })
}

/// Executes a subcommand, prints the report and writes the requested files.
pub fn run_command(command: &Command, stdout: &mut dyn Write) -> Result<Artifacts, CliError> {
    let common = match command {
        Command::Simulate(c) | Command::Winding(c) | Command::Obstruct(c) | Command::Spectrum(c) => c,
        Command::Perturb { common, .. } | Command::Baseline { common, .. } | Command::Report { common, .. } => common,
    };
    let outcome = execute(command)?;
    let doc = &outcome.document;
    let json = to_json(doc);
    let text = to_text(doc);
    let shown = match common.format {
        Format::Json => &json,
        Format::Text => &text,
    };
    stdout.write_all(shown.as_bytes()).map_err(|source| CliError::Write { path: "<stdout>".into(), source })?;

    let mut artifacts = Artifacts::default();
    let stem = format!("{}-{}", doc.scenario, doc.command);
    if let Some(dir) = &common.out_dir {
        let path = dir.join(format!("{stem}.json"));
        write_file(&path, &json)?;
        artifacts.report = Some(path);
        if common.format == Format::Text {
            let path = dir.join(format!("{stem}.txt"));
            write_file(&path, &text)?;
            artifacts.text = Some(path);
        }
    }
    if let Some(kind) = common.svg {
        let result = outcome.result.as_ref().ok_or(SvgError::Empty)?;
        let svg = emit_svg(result, kind)?;
        let dir = common.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
        let path = dir.join(format!("{}-{}.svg", doc.scenario, kind.file_stem()));
        write_file(&path, &svg)?;
        artifacts.svg = Some(path);
    }
    Ok(artifacts)
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run_command(&cli.command, stdout) {
        Ok(_) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
