use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use fitbench_core::geometry::BodyRegion;
use fitbench_core::harness::{Pairing, ReportFormat};
use fitbench_core::FitClass;
use thiserror::Error;

/// Process exit status: 0 clean, 1 partial per-item failures, 2 configuration failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    Partial,
    ConfigFailure,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Clean => 0,
            Outcome::Partial => 1,
            Outcome::ConfigFailure => 2,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("--parallelism must be at least 1")]
    Parallelism,
    #[error("`{command}` needs {flag}")]
    MissingFlag {
        command: &'static str,
        flag: &'static str,
    },
    #[error("invalid --canvas `{0}` (expected HEIGHTxWIDTH)")]
    Canvas(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// Rectangular garment-agnostic masks from keypoint JSON files
    Mask,
    /// Synthetic dense poses from keypoint JSON files
    Densepose,
    /// Garment contours of layout PNGs as JSON point arrays
    Contour,
    /// Per-pair Hu and Hausdorff distances between two manifests (JSON lines)
    Metrics,
    /// Fit confusion report over two manifests
    Report,
    /// Built-in invariant checks
    Selftest,
    /// Synthetic silhouette layouts plus a manifest
    Synth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    Paired,
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    PhiPerturb,
}

#[derive(Debug, Parser)]
#[command(
    name = "fitbench",
    version,
    about = "Garment-agnostic preprocessing and fit-consistency evaluation"
)]
pub struct Cli {
    pub command: CommandKind,
    #[arg(long, value_enum, default_value = "upper")]
    pub region: RegionArg,
    /// Input directory, or the generated-layout manifest for metrics/report
    #[arg(long = "in", value_name = "DIR|MANIFEST")]
    pub input: Option<PathBuf>,
    /// Source-layout manifest for metrics/report
    #[arg(long, value_name = "MANIFEST")]
    pub source: Option<PathBuf>,
    /// Predicted dense poses (`<stem>.png`) to intersect with the synthetic ones
    #[arg(long, value_name = "DIR")]
    pub predicted: Option<PathBuf>,
    /// Output directory, or output file for metrics/report (stdout when omitted)
    #[arg(long, value_name = "DIR|FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "paired")]
    pub pairing: PairingArg,
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: FormatArg,
    /// Fits to synthesize (all top fits when omitted)
    #[arg(long, value_delimiter = ',')]
    pub fit: Vec<FitClass>,
    /// Synthetic samples per fit
    #[arg(long, default_value_t = 10)]
    pub count: u64,
    /// First synthetic seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Synthetic canvas as HEIGHTxWIDTH
    #[arg(long, default_value = "256x192")]
    pub canvas: String,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

/// Validated job description.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: CommandKind,
    pub region: BodyRegion,
    pub input: Option<PathBuf>,
    pub source: Option<PathBuf>,
    pub predicted: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub pairing: Pairing,
    pub parallelism: usize,
    pub format: ReportFormat,
    pub fits: Vec<FitClass>,
    pub count: u64,
    pub seed: u64,
    pub canvas: (usize, usize),
    pub inject_fault: Option<FaultArg>,
}

fn parse_canvas(s: &str) -> Result<(usize, usize), ConfigError> {
    let err = || ConfigError::Canvas(s.to_string());
    let (h, w) = s.split_once(['x', 'X']).ok_or_else(err)?;
    Ok((
        h.trim().parse().map_err(|_| err())?,
        w.trim().parse().map_err(|_| err())?,
    ))
}

impl JobConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            region: BodyRegion::UpperBody,
            input: None,
            source: None,
            predicted: None,
            out: None,
            pairing: Pairing::Paired,
            parallelism: 1,
            format: ReportFormat::Markdown,
            fits: Vec::new(),
            count: 10,
            seed: 0,
            canvas: (256, 192),
            inject_fault: None,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let config = Self {
            command: cli.command,
            region: match cli.region {
                RegionArg::Upper => BodyRegion::UpperBody,
                RegionArg::Lower => BodyRegion::LowerBody,
            },
            input: cli.input,
            source: cli.source,
            predicted: cli.predicted,
            out: cli.out,
            pairing: match cli.pairing {
                PairingArg::Paired => Pairing::Paired,
                PairingArg::AllPairs => Pairing::AllPairs,
            },
            parallelism: cli.parallelism,
            format: match cli.format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Markdown => ReportFormat::Markdown,
            },
            fits: cli.fit,
            count: cli.count,
            seed: cli.seed,
            canvas: parse_canvas(&cli.canvas)?,
            inject_fault: cli.inject_fault,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.parallelism == 0 {
            return Err(ConfigError::Parallelism);
        }
        let name = match self.command {
            CommandKind::Mask => "mask",
            CommandKind::Densepose => "densepose",
            CommandKind::Contour => "contour",
            CommandKind::Metrics => "metrics",
            CommandKind::Report => "report",
            CommandKind::Selftest => "selftest",
            CommandKind::Synth => "synth",
        };
        let need = |present: bool, flag| {
            if present {
                Ok(())
            } else {
                Err(ConfigError::MissingFlag {
                    command: name,
                    flag,
                })
            }
        };
        match self.command {
            CommandKind::Mask | CommandKind::Densepose | CommandKind::Contour => {
                need(self.input.is_some(), "--in DIR")?;
                need(self.out.is_some(), "--out DIR")
            }
            CommandKind::Metrics | CommandKind::Report => {
                need(self.input.is_some(), "--in MANIFEST")?;
                need(self.source.is_some(), "--source MANIFEST")
            }
            CommandKind::Synth => need(self.out.is_some(), "--out DIR"),
            CommandKind::Selftest => Ok(()),
        }
    }
}
