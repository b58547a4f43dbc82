use anyhow::Result;
use clap::ValueEnum;
use gammahom::coeff::ring::from_i128;
use gammahom::complex::{assemble_gamma, assemble_koszul, e_sigma};
use gammahom::koszul::{bar_complex, closed_form, generic_family};
use gammahom::operad::{arity_cap, DEFAULT_ARITY_CAP};
use gammahom::perm::{pair_equivariant, single_equivariant, single_is_pair};
use gammahom::{
    CoefficientModule, Context, Field, FiniteAlgebra, Integers, Operad, Perm, Presentation, PrimeField, Rationals,
    Section, Truncation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Perm,
    Bar,
    Koszul,
    Closure,
    Compare,
}

/// Outcome of one suite: number of checks and the failures.
pub struct Report {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    fn new() -> Self {
        Report { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

pub fn run(suite: Suite, r_max: usize) -> Result<Report> {
    let mut rep = Report::new();
    match suite {
        Suite::Perm => perm(&mut rep, r_max)?,
        Suite::Bar => bar(&mut rep, r_max)?,
        Suite::Koszul => koszul(&mut rep, r_max)?,
        Suite::Closure => closure(&mut rep, r_max)?,
        Suite::Compare => compare(&mut rep)?,
    }
    Ok(rep)
}

fn perm(rep: &mut Report, r_max: usize) -> Result<()> {
    for r in 2..=r_max {
        let all = Perm::all(r);
        for w in &all {
            for i in 1..=r {
                rep.check(single_is_pair(w, i)?, || format!("c(∅,{i}) vs pair contraction at w = {w}"));
            }
            for s in &all {
                for i in 1..=r {
                    rep.check(single_equivariant(w, s, i)?, || format!("single {i}, w = {w}, σ = {s}"));
                    for j in (1..=r).filter(|&j| j != i) {
                        rep.check(pair_equivariant(w, s, i, j)?, || format!("pair ({i},{j}), w = {w}, σ = {s}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn bar(rep: &mut Report, r_max: usize) -> Result<()> {
    for n in 1..=3 {
        let h = e_sigma(&Integers, n, 4)?.homology(&Integers)?;
        let ok = h[0].betti == 1 && h[0].torsion.is_empty() && h[1..].iter().all(|s| s.betti == 0 && s.torsion.is_empty());
        rep.check(ok, || format!("C(EΣ_{n}) is not acyclic: {h:?}"));
    }
    for name in ["Com", "Lie", "Ass"] {
        let op = Operad::new(Presentation::builtin(name)?, Rationals, arity_cap())?;
        for r in 2..=r_max {
            let dims = bar_complex(&op, r)?.homology_dims(&Rationals);
            let ok = dims[..dims.len() - 1].iter().all(|&d| d == 0);
            rep.check(ok, || format!("bar homology of {name}({r}) is not concentrated: {dims:?}"));
        }
    }
    Ok(())
}

fn dims_over<F: Field>(field: F, name: &str, r_max: usize) -> Result<Vec<usize>> {
    let op = Operad::new(Presentation::builtin(name)?, field, arity_cap())?;
    Ok(generic_family(&op, r_max)?.iter().map(|d| d.dim).collect())
}

fn koszul(rep: &mut Report, r_max: usize) -> Result<()> {
    for name in ["Com", "Lie", "Ass"] {
        let r = if name == "Ass" { r_max.min(4) } else { r_max };
        let closed: Vec<usize> = closed_form(name, r, arity_cap())?.iter().map(|d| d.dim).collect();
        let expected: Vec<usize> = (1..=r)
            .map(|k| match name {
                "Lie" => 1,
                "Com" => (1..k).product(),
                _ => (1..=k).product(),
            })
            .collect();
        rep.check(closed == expected, || format!("{name}: closed form dims {closed:?}, expected {expected:?}"));
        for (label, dims) in [
            ("Q", dims_over(Rationals, name, r)?),
            ("F2", dims_over(PrimeField::new(2)?, name, r)?),
            ("F3", dims_over(PrimeField::new(3)?, name, r)?),
        ] {
            rep.check(dims == closed, || format!("{name} over {label}: generic dims {dims:?} vs {closed:?}"));
        }
    }
    Ok(())
}

fn closure(rep: &mut Report, r_max: usize) -> Result<()> {
    let trunc = Truncation::Box { r_max: r_max.min(DEFAULT_ARITY_CAP), t_max: 2 };
    for (op, alg) in [("Com", "trivial_square_zero(2)"), ("Lie", "trivial_square_zero(2)"), ("Lie", "sl2")] {
        let pres = Presentation::builtin(op)?;
        let algebra = FiniteAlgebra::builtin(alg, &pres)?;
        let koszul = closed_form(op, trunc.max_arity(), arity_cap())?;
        for coeffs in ["trivial", "adjoint"] {
            let module = CoefficientModule::builtin(coeffs, &algebra)?;
            let ctx = Context { ring: &Integers, koszul: &koszul, algebra: &algebra, module: &module };
            let result = assemble_gamma(&ctx, trunc, Section::First);
            rep.check(result.is_ok(), || format!("{op}/{alg}/{coeffs}: {:?}", result.err()));
        }
    }
    Ok(())
}

fn compare(rep: &mut Report) -> Result<()> {
    let pres = Presentation::lie();
    let koszul: Vec<_> =
        closed_form("Lie", 4, arity_cap())?.iter().map(|d| d.map(&Rationals, |v| from_i128(&Rationals, *v))).collect();
    for alg in ["abelian_lie(2)", "sl2"] {
        let algebra = FiniteAlgebra::builtin(alg, &pres)?;
        let module = CoefficientModule::trivial(&algebra);
        let ctx = Context { ring: &Rationals, koszul: &koszul, algebra: &algebra, module: &module };
        let g = assemble_gamma(&ctx, Truncation::Degree(2), Section::First)?.homology(&Rationals)?;
        let k = assemble_koszul(&ctx, Truncation::Degree(2))?.homology(&Rationals)?;
        rep.check(g == k, || format!("Lie/{alg}: gamma {g:?} vs koszul {k:?}"));
    }
    Ok(())
}
