use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use clap::{Args, ValueEnum};
use gammahom::operad::arity_cap;
use gammahom::RingSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    Gamma,
    Koszul,
    Cochain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum KoszulSource {
    Generic,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SectionKind {
    First,
    Last,
}

/// Contents of a `--config` file; every key is optional.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub operad: Option<String>,
    pub algebra: Option<String>,
    pub coefficients: Option<String>,
    pub ring: Option<String>,
    pub d_max: Option<usize>,
    pub koszul_source: Option<KoszulSource>,
    pub complex: Option<ComplexKind>,
    pub section: Option<SectionKind>,
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// TOML file with job settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Com, Lie, Ass or a presentation file.
    #[arg(long)]
    pub operad: Option<String>,
    /// Builtin such as `sl2` or `trivial_square_zero(2)`, or an algebra file.
    #[arg(long)]
    pub algebra: Option<String>,
    /// `trivial`, `adjoint` or a module file.
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Z, Q or Fp(p).
    #[arg(long)]
    pub ring: Option<String>,
    #[arg(long)]
    pub dmax: Option<usize>,
    #[arg(long, value_enum)]
    pub complex: Option<ComplexKind>,
    #[arg(long, value_enum)]
    pub koszul_source: Option<KoszulSource>,
    #[arg(long, value_enum)]
    pub section: Option<SectionKind>,
    /// Write the result as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the result as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the assembled complex in the text dump format.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Check the algebra and module axioms before computing.
    #[arg(long)]
    pub verify: bool,
}

/// A fully resolved job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JobConfig {
    pub operad: String,
    pub algebra: String,
    pub coefficients: String,
    pub ring: RingSpec,
    pub d_max: usize,
    pub koszul_source: KoszulSource,
    pub complex: ComplexKind,
    pub section: SectionKind,
}

fn read_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).map_err(|e| gammahom::Error::Parse(format!("{}: {e}", path.display())).into())
}

impl JobConfig {
    pub fn resolve(args: &JobArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => read_config(p)?,
            None => ConfigFile::default(),
        };
        let ring_text = args.ring.clone().or(file.ring).unwrap_or_else(|| "Q".into());
        let ring: RingSpec = ring_text.parse()?;
        let operad = args.operad.clone().or(file.operad).unwrap_or_else(|| "Com".into());
        let builtin = matches!(operad.as_str(), "Com" | "Lie" | "Ass");
        let cfg = JobConfig {
            algebra: args.algebra.clone().or(file.algebra).unwrap_or_else(|| "trivial_square_zero(1)".into()),
            coefficients: args.coeffs.clone().or(file.coefficients).unwrap_or_else(|| "trivial".into()),
            ring,
            d_max: args.dmax.or(file.d_max).unwrap_or(2),
            koszul_source: args.koszul_source.or(file.koszul_source).unwrap_or(if builtin {
                KoszulSource::ClosedForm
            } else {
                KoszulSource::Generic
            }),
            complex: args.complex.or(file.complex).unwrap_or(ComplexKind::Gamma),
            section: args.section.or(file.section).unwrap_or(SectionKind::First),
            operad,
        };
        let cap = arity_cap();
        if cfg.d_max + 2 > cap {
            bail!(gammahom::Error::ArityCap { arity: cfg.d_max + 2, cap });
        }
        if cfg.complex == ComplexKind::Koszul && !cfg.ring.is_field() {
            bail!(gammahom::Error::NotAField(format!("{} (the Koszul complex needs a field)", cfg.ring)));
        }
        Ok(cfg)
    }
}
