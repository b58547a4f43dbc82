use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use gammahom::algebra::{check_algebra, check_module};
use gammahom::coeff::ring::from_i128;
use gammahom::coeff::HomologyRing;
use gammahom::complex::{assemble_cochain, assemble_gamma, assemble_koszul};
use gammahom::koszul::{closed_form, generic_family, integral_family};
use gammahom::operad::arity_cap;
use gammahom::{
    CoefficientModule, Context, Field, FiniteAlgebra, HomologySummary, Integers, KoszulData, Operad, Presentation,
    PrimeField, Rationals, Ring, RingSpec, Section, Truncation,
};
use serde::Serialize;

use crate::config::{ComplexKind, JobConfig, KoszulSource, SectionKind};

pub struct Loaded {
    pub pres: Presentation,
    pub algebra: FiniteAlgebra,
    pub module: CoefficientModule,
}

pub fn load(cfg: &JobConfig) -> Result<Loaded> {
    let pres = Presentation::resolve(&cfg.operad)?;
    let algebra = FiniteAlgebra::resolve(&cfg.algebra, &pres)?;
    let module = match (cfg.complex, cfg.coefficients.as_str()) {
        (ComplexKind::Cochain, "adjoint") => CoefficientModule::adjoint_left(&algebra),
        _ => CoefficientModule::resolve(&cfg.coefficients, &algebra)?,
    };
    Ok(Loaded { pres, algebra, module })
}

pub struct Outcome {
    pub summaries: Vec<HomologySummary>,
    pub dump: String,
}

fn integral_data(cfg: &JobConfig, pres: &Presentation, r_max: usize) -> Result<Vec<KoszulData<i128>>> {
    let cap = arity_cap();
    Ok(match cfg.koszul_source {
        KoszulSource::ClosedForm if pres.is_builtin() => closed_form(&pres.name, r_max, cap)?,
        KoszulSource::ClosedForm => bail!(gammahom::Error::Invalid(format!(
            "no closed form for operad {:?}; use --koszul-source generic",
            pres.name
        ))),
        KoszulSource::Generic => integral_family(pres.clone(), r_max, cap)?,
    })
}

fn field_data<F: Field>(field: &F, cfg: &JobConfig, pres: &Presentation, r_max: usize) -> Result<Vec<KoszulData<F::El>>> {
    Ok(match cfg.koszul_source {
        KoszulSource::Generic => generic_family(&Operad::new(pres.clone(), field.clone(), arity_cap())?, r_max)?,
        KoszulSource::ClosedForm => integral_data(cfg, pres, r_max)?
            .iter()
            .map(|d| d.map(field, |v| from_i128(field, *v)))
            .collect(),
    })
}

fn verify_inputs<R: Ring>(ring: &R, cfg: &JobConfig, l: &Loaded) -> Result<()> {
    let bad = check_algebra(&l.pres, &l.algebra, ring)?;
    if let Some(r) = bad.first() {
        bail!(gammahom::Error::Invalid(format!("algebra fails {:?} on {:?}", r.check, r.inputs)));
    }
    if cfg.complex != ComplexKind::Cochain {
        let bad = check_module(&l.pres, &l.algebra, &l.module, ring)?;
        if let Some(r) = bad.first() {
            bail!(gammahom::Error::Invalid(format!("module fails {:?} on {:?}", r.check, r.inputs)));
        }
    }
    Ok(())
}

fn section(cfg: &JobConfig) -> Section {
    match cfg.section {
        SectionKind::First => Section::First,
        SectionKind::Last => Section::Last,
    }
}

fn run_ring<R: HomologyRing>(ring: &R, cfg: &JobConfig, l: &Loaded, koszul: &[KoszulData<R::El>]) -> Result<Outcome> {
    let trunc = Truncation::Degree(cfg.d_max);
    let ctx = Context { ring, koszul, algebra: &l.algebra, module: &l.module };
    let complex = match cfg.complex {
        ComplexKind::Gamma => assemble_gamma(&ctx, trunc, section(cfg))?,
        ComplexKind::Cochain => assemble_cochain(&ctx, &l.module, trunc, section(cfg))?,
        ComplexKind::Koszul => unreachable!("handled over fields"),
    };
    Ok(Outcome { summaries: complex.homology(ring)?, dump: complex.dump(ring) })
}

fn run_field<F: Field + HomologyRing>(field: &F, cfg: &JobConfig, l: &Loaded) -> Result<Outcome> {
    let koszul = field_data(field, cfg, &l.pres, cfg.d_max + 2)?;
    if cfg.complex != ComplexKind::Koszul {
        return run_ring(field, cfg, l, &koszul);
    }
    let ctx = Context { ring: field, koszul: &koszul, algebra: &l.algebra, module: &l.module };
    let complex = assemble_koszul(&ctx, Truncation::Degree(cfg.d_max))?;
    Ok(Outcome { summaries: complex.homology(field)?, dump: complex.dump(field) })
}

pub fn run(cfg: &JobConfig, verify: bool) -> Result<Outcome> {
    let l = load(cfg)?;
    match cfg.ring {
        RingSpec::Integers => {
            if verify {
                verify_inputs(&Integers, cfg, &l)?;
            }
            let koszul = integral_data(cfg, &l.pres, cfg.d_max + 2)?;
            run_ring(&Integers, cfg, &l, &koszul)
        }
        RingSpec::Rationals => {
            if verify {
                verify_inputs(&Rationals, cfg, &l)?;
            }
            run_field(&Rationals, cfg, &l)
        }
        RingSpec::PrimeField(p) => {
            let f = PrimeField::new(p)?;
            if verify {
                verify_inputs(&f, cfg, &l)?;
            }
            run_field(&f, cfg, &l)
        }
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    betti: usize,
    torsion: &'a [i128],
}

pub fn to_json(summaries: &[HomologySummary]) -> String {
    let map: BTreeMap<i64, Entry> =
        summaries.iter().map(|s| (s.degree, Entry { betti: s.betti, torsion: &s.torsion })).collect();
    serde_json::to_string_pretty(&map).expect("plain data serialises") + "\n"
}

fn torsion_text(t: &[i128], sep: &str) -> String {
    t.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

pub fn to_csv(summaries: &[HomologySummary]) -> String {
    let mut s = String::from("degree,betti,torsion\n");
    for h in summaries {
        let _ = writeln!(s, "{},{},{}", h.degree, h.betti, torsion_text(&h.torsion, ";"));
    }
    s
}

pub fn to_table(summaries: &[HomologySummary]) -> String {
    let mut s = format!("{:>6}  {:>6}  torsion\n", "degree", "betti");
    for h in summaries {
        let t = if h.torsion.is_empty() { "-".to_string() } else { torsion_text(&h.torsion, " ") };
        let _ = writeln!(s, "{:>6}  {:>6}  {t}", h.degree, h.betti);
    }
    s
}
