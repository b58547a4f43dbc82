mod config;
mod run;
mod verify;

use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand};
use gammahom::koszul::bar_complex;
use gammahom::operad::arity_cap;
use gammahom::{Field, Operad, Presentation, PrimeField, Rationals, RingSpec};

use config::{JobArgs, JobConfig};
use verify::Suite;

/// Exact Γ-homology of finite-dimensional algebras over binary quadratic operads.
#[derive(Parser)]
#[command(name = "gammahom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute homology (or cohomology) in degrees 0..=dmax.
    Homology(JobArgs),
    /// Run an invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest arity exercised.
        #[arg(long, default_value_t = 4)]
        rmax: usize,
    },
    /// Bar homology dimensions of an operad per arity.
    KoszulInfo {
        #[arg(long)]
        operad: String,
        #[arg(long, default_value_t = 5)]
        rmax: usize,
        /// Q or Fp(p).
        #[arg(long, default_value = "Q")]
        ring: String,
    },
}

fn homology(args: &JobArgs) -> Result<ExitCode> {
    let cfg = JobConfig::resolve(args)?;
    let outcome = run::run(&cfg, args.verify)?;
    print!("{}", run::to_table(&outcome.summaries));
    if let Some(p) = &args.out {
        std::fs::write(p, run::to_json(&outcome.summaries)).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &args.csv {
        std::fs::write(p, run::to_csv(&outcome.summaries)).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &args.dump {
        std::fs::write(p, &outcome.dump).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(suite: Suite, r_max: usize) -> Result<ExitCode> {
    let rep = verify::run(suite, r_max)?;
    for f in &rep.failures {
        eprintln!("FAIL {f}");
    }
    let status = if rep.failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{suite:?}: {status} ({} checks, {} failures)", rep.checks, rep.failures.len());
    Ok(if rep.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn bar_table<F: Field>(field: F, pres: Presentation, r_max: usize) -> Result<bool> {
    let op = Operad::new(pres, field.clone(), arity_cap())?;
    println!("{:>5}  {:>6}  {:>6}  concentrated  bar homology", "arity", "dim", "degree");
    let mut all = true;
    println!("{:>5}  {:>6}  {:>6}  {:<12}  [1]", 1, 1, 0, "yes");
    for r in 2..=r_max {
        let dims = bar_complex(&op, r)?.homology_dims(&field);
        let top = dims.len() - 1;
        let ok = dims[..top].iter().all(|&d| d == 0);
        all &= ok;
        println!("{r:>5}  {:>6}  {:>6}  {:<12}  {dims:?}", dims[top], r - 1, if ok { "yes" } else { "NO" });
    }
    Ok(all)
}

fn koszul_info(operad: &str, r_max: usize, ring: &str) -> Result<ExitCode> {
    let pres = Presentation::resolve(operad)?;
    gammahom::operad::check_cap(r_max, arity_cap())?;
    let concentrated = match ring.parse::<RingSpec>()? {
        RingSpec::Integers => anyhow::bail!(gammahom::Error::NotAField("Z".into())),
        RingSpec::Rationals => bar_table(Rationals, pres, r_max)?,
        RingSpec::PrimeField(p) => bar_table(PrimeField::new(p)?, pres, r_max)?,
    };
    Ok(if concentrated { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<gammahom::Error>() {
        Some(gammahom::Error::NonzeroComposite { .. }) => 3,
        Some(gammahom::Error::NotKoszul { .. }) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Homology(args) => homology(args),
        Command::Verify { suite, rmax } => verify(*suite, *rmax),
        Command::KoszulInfo { operad, rmax, ring } => koszul_info(operad, *rmax, ring),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
