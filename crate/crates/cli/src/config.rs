//! Command-line flags, the key=value config file, and their merge into one
//! resolved [`RunConfig`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qcycle::kzm::log_space;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qcycle",
    version,
    about = "Harmonic modes driven through a gapless critical point"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    HalfCycle,
    FullCycle,
    Gapped,
    Universality,
    KzmFit,
    Spherical,
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Drive from the adiabatic past to the critical point and report the heat.
    HalfCycle(Flags),
    /// Cross the critical point and follow the excitation plateau.
    FullCycle(Flags),
    /// Gapped cycles over a grid of offsets, optionally a rate scan at fixed offset.
    Gapped(Flags),
    /// Corrected power-law drives over several correction amplitudes.
    Universality(Flags),
    /// Half-cycle heat over a range of rates and its power-law fit.
    KzmFit(Flags),
    /// Large-N chain with long-range couplings driven through criticality.
    Spherical(Flags),
    /// Cross-validation checks of the numerical core.
    Verify(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::HalfCycle(f) => (CommandKind::HalfCycle, f),
            Command::FullCycle(f) => (CommandKind::FullCycle, f),
            Command::Gapped(f) => (CommandKind::Gapped, f),
            Command::Universality(f) => (CommandKind::Universality, f),
            Command::KzmFit(f) => (CommandKind::KzmFit, f),
            Command::Spherical(f) => (CommandKind::Spherical, f),
            Command::Verify(f) => (CommandKind::Verify, f),
        }
    }
}

/// Every flag is optional here; defaults are applied after merging with the
/// config file so that the file can supply anything the flags do not.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Critical exponent product zν.
    #[arg(long)]
    pub znu: Option<f64>,
    /// Drive rate δ.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Gap offset t0 (physical units); selects a gapped drive.
    #[arg(long)]
    pub t0: Option<f64>,
    /// Correction amplitude γ; selects a corrected drive.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Correction exponent n.
    #[arg(long = "n-corr")]
    pub n_corr: Option<u32>,
    /// Unit-rate horizon of a cycle.
    #[arg(long = "s-end")]
    pub s_end: Option<f64>,
    /// Integrator tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Rates, as `lo..hi[:n]` (log-spaced) or a comma-separated list.
    #[arg(long)]
    pub deltas: Option<String>,
    /// Correction amplitudes (comma-separated).
    #[arg(long)]
    pub gammas: Option<String>,
    /// Gap offsets in unit-rate units, as `lo..hi[:n]` (linear) or a list.
    #[arg(long)]
    pub offsets: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for parameter sweeps.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Trailing fraction of a run used for plateau averages.
    #[arg(long)]
    pub window: Option<f64>,
    /// Samples recorded per cycle.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Chain length of the spherical model.
    #[arg(long)]
    pub sites: Option<usize>,
    /// Coupling decay exponent α of the spherical model.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Quartic coupling g of the spherical model.
    #[arg(long)]
    pub g: Option<f64>,
    /// Modes written by `spherical`: a comma-separated list or `all`.
    #[arg(long)]
    pub modes: Option<String>,
    /// Flat key=value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Which single-mode drive the parameters describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveChoice {
    PowerLaw,
    Gapped,
    Corrected,
}

/// Fully resolved run parameters, echoed in the summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub drive: DriveChoice,
    pub znu: f64,
    pub delta: f64,
    pub t0: f64,
    pub gamma: f64,
    pub n_corr: u32,
    pub s_end: f64,
    pub tol: f64,
    pub deltas: Option<Vec<f64>>,
    pub gammas: Vec<f64>,
    pub offsets: Vec<f64>,
    pub out: PathBuf,
    pub workers: usize,
    pub window: f64,
    pub samples: usize,
    pub sites: usize,
    pub alpha: f64,
    pub g: f64,
    pub modes: ModeSelection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSelection {
    All,
    List(Vec<usize>),
}

const KEYS: &[&str] = &[
    "znu", "delta", "t0", "gamma", "n-corr", "s-end", "tol", "deltas", "gammas", "offsets", "out",
    "workers", "window", "samples", "sites", "alpha", "g", "modes",
];

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("config line {}: expected key=value", no + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(config_err(format!(
                "config line {}: unknown key `{key}`",
                no + 1
            )));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(config_err(format!(
                "config line {}: duplicate key `{key}`",
                no + 1
            )));
        }
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| config_err(format!("invalid value `{v}` for `{key}`")))
}

impl Flags {
    /// Fills every unset flag from the config file map.
    pub fn merge_file(mut self, file: &BTreeMap<String, String>) -> Result<Flags, CliError> {
        fn fill<T: std::str::FromStr>(
            slot: &mut Option<T>,
            file: &BTreeMap<String, String>,
            key: &str,
        ) -> Result<(), CliError> {
            if slot.is_none() {
                if let Some(v) = file.get(key) {
                    *slot = Some(parse_value(key, v)?);
                }
            }
            Ok(())
        }
        fill(&mut self.znu, file, "znu")?;
        fill(&mut self.delta, file, "delta")?;
        fill(&mut self.t0, file, "t0")?;
        fill(&mut self.gamma, file, "gamma")?;
        fill(&mut self.n_corr, file, "n-corr")?;
        fill(&mut self.s_end, file, "s-end")?;
        fill(&mut self.tol, file, "tol")?;
        fill(&mut self.deltas, file, "deltas")?;
        fill(&mut self.gammas, file, "gammas")?;
        fill(&mut self.offsets, file, "offsets")?;
        fill(&mut self.out, file, "out")?;
        fill(&mut self.workers, file, "workers")?;
        fill(&mut self.window, file, "window")?;
        fill(&mut self.samples, file, "samples")?;
        fill(&mut self.sites, file, "sites")?;
        fill(&mut self.alpha, file, "alpha")?;
        fill(&mut self.g, file, "g")?;
        fill(&mut self.modes, file, "modes")?;
        Ok(self)
    }
}

/// `lo..hi[:n]` or `a,b,c`. `log` selects logarithmic spacing for ranges.
pub fn parse_range(
    key: &str,
    text: &str,
    log: bool,
    default_n: usize,
) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    let values = if let Some((lo, rest)) = text.split_once("..") {
        let (hi, n) = match rest.split_once(':') {
            Some((hi, n)) => (hi, parse_value::<usize>(key, n.trim())?),
            None => (rest, default_n),
        };
        let lo: f64 = parse_value(key, lo.trim())?;
        let hi: f64 = parse_value(key, hi.trim())?;
        if n < 2 || !(hi > lo) {
            return Err(config_err(format!(
                "`{key}` range needs lo < hi and at least 2 points"
            )));
        }
        if log {
            if !(lo > 0.0) {
                return Err(config_err(format!("`{key}` log range must be positive")));
            }
            log_space(lo, hi, n)
        } else {
            (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()
        }
    } else {
        text.split(',')
            .map(|v| parse_value::<f64>(key, v.trim()))
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(config_err(format!("`{key}` must list finite numbers")));
    }
    Ok(values)
}

fn parse_modes(text: &str) -> Result<ModeSelection, CliError> {
    if text.trim() == "all" {
        return Ok(ModeSelection::All);
    }
    let list = text
        .split(',')
        .map(|v| parse_value::<usize>("modes", v.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModeSelection::List(list))
}

impl RunConfig {
    /// Applies defaults and checks every invariant that does not need a run.
    pub fn resolve(command: CommandKind, flags: Flags) -> Result<RunConfig, CliError> {
        let flags = match &flags.config {
            Some(path) => flags.clone().merge_file(&read_config(path)?)?,
            None => flags,
        };
        let drive = match (flags.t0, flags.gamma) {
            (Some(_), Some(_)) => {
                return Err(config_err(
                    "`t0` and `gamma` select different drives; give one",
                ))
            }
            (Some(_), None) => DriveChoice::Gapped,
            (None, Some(_)) => DriveChoice::Corrected,
            (None, None) => DriveChoice::PowerLaw,
        };
        let default_znu = match command {
            CommandKind::Universality | CommandKind::Spherical | CommandKind::KzmFit => 0.5,
            _ => 1.0,
        };
        let default_delta = if command == CommandKind::Spherical {
            0.01
        } else {
            1.0
        };
        let cfg = RunConfig {
            command,
            drive,
            znu: flags.znu.unwrap_or(default_znu),
            delta: flags.delta.unwrap_or(default_delta),
            t0: flags.t0.unwrap_or(0.0),
            gamma: flags.gamma.unwrap_or(0.0),
            n_corr: flags.n_corr.unwrap_or(2),
            s_end: flags.s_end.unwrap_or(40.0),
            tol: flags.tol.unwrap_or(1e-10),
            deltas: match (&flags.deltas, command) {
                (Some(d), _) => Some(parse_range("deltas", d, true, 8)?),
                (None, CommandKind::KzmFit) => Some(log_space(1e-3, 1e-1, 8)),
                (None, _) => None,
            },
            gammas: match &flags.gammas {
                Some(g) => parse_range("gammas", g, false, 3)?,
                None => vec![0.0, 0.005, 0.01],
            },
            offsets: match &flags.offsets {
                Some(o) => parse_range("offsets", o, false, 11)?,
                None => (0..=10).map(f64::from).collect(),
            },
            out: flags
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("qcycle-out")),
            workers: flags.workers.unwrap_or(1),
            window: flags.window.unwrap_or(0.25),
            samples: flags
                .samples
                .unwrap_or(if command == CommandKind::Spherical {
                    4001
                } else {
                    8001
                }),
            sites: flags.sites.unwrap_or(256),
            alpha: flags.alpha.unwrap_or(0.5),
            g: flags.g.unwrap_or(0.1),
            modes: match &flags.modes {
                Some(m) => parse_modes(m)?,
                None => ModeSelection::List(vec![0, 1, 2, 3, 4]),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_err(format!(
                    "`{key}` must be positive and finite, got {v}"
                )))
            }
        };
        positive("znu", self.znu)?;
        positive("delta", self.delta)?;
        positive("s-end", self.s_end)?;
        if !(self.tol > 1e-14 && self.tol < 1e-3) {
            return Err(config_err(format!(
                "`tol` must lie in (1e-14, 1e-3), got {:e}",
                self.tol
            )));
        }
        if self.workers == 0 {
            return Err(config_err("`workers` must be at least 1"));
        }
        if !(self.window > 0.0 && self.window <= 0.5) {
            return Err(config_err(format!(
                "`window` must lie in (0, 0.5], got {}",
                self.window
            )));
        }
        if self.samples < 65 {
            return Err(config_err(format!(
                "`samples` must be at least 65, got {}",
                self.samples
            )));
        }
        if !(self.t0 >= 0.0) || !(self.gamma >= 0.0) || self.gammas.iter().any(|g| *g < 0.0) {
            return Err(config_err("`t0` and correction amplitudes must be >= 0"));
        }
        if self.offsets.iter().any(|o| *o < 0.0) {
            return Err(config_err("`offsets` must be >= 0"));
        }
        if let Some(d) = &self.deltas {
            if d.iter().any(|x| !(*x > 0.0)) {
                return Err(config_err("`deltas` must be positive"));
            }
        }
        if self.command == CommandKind::Spherical {
            if !(2..=qcycle::spherical::MAX_SITES).contains(&self.sites)
                || !self.sites.is_multiple_of(2)
            {
                return Err(config_err(format!(
                    "`sites` must be even and within [2, {}], got {}",
                    qcycle::spherical::MAX_SITES,
                    self.sites
                )));
            }
            positive("alpha", self.alpha)?;
            if !(self.g >= 0.0) {
                return Err(config_err("`g` must be >= 0"));
            }
            if let ModeSelection::List(list) = &self.modes {
                if let Some(q) = list.iter().find(|&&q| q >= self.sites) {
                    return Err(config_err(format!(
                        "mode {q} does not exist on {} sites",
                        self.sites
                    )));
                }
            }
        }
        Ok(())
    }

    /// The single-mode drive described by the parameters.
    pub fn drive_spec(&self) -> Result<qcycle::DriveSpec, CliError> {
        use qcycle::DriveSpec;
        let spec = match self.drive {
            DriveChoice::PowerLaw => DriveSpec::power_law(self.znu, self.delta),
            DriveChoice::Gapped => DriveSpec::gapped(self.znu, self.delta, self.t0),
            DriveChoice::Corrected => {
                DriveSpec::corrected(self.znu, self.delta, self.gamma, self.n_corr)
            }
        };
        spec.map_err(|e| config_err(e.to_string()))
    }
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}
