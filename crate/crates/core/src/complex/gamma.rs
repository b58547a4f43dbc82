use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::CoefficientModule;
use crate::coeff::matrix::Accumulator;
use crate::coeff::ring::Ring;
use crate::coeff::SparseMatrix;
use crate::error::{Error, Result};
use crate::perm::{BarTuple, Contraction, Perm};

use super::{AssembledComplex, Context, Grading, Section, Truncation};

/// `x ⊗ γ ⊗ w̲ ⊗ (a_1, …, a_r)` with `w̲` in the chosen section.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaGenerator {
    pub e_idx: usize,
    pub r: usize,
    pub g_idx: usize,
    pub bar: BarTuple,
    pub a_idx: Vec<usize>,
}

impl GammaGenerator {
    pub fn t(&self) -> usize {
        self.bar.degree()
    }

    pub fn degree(&self) -> usize {
        self.r - 1 + self.t()
    }
}

impl fmt::Display for GammaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a_idx.iter().map(ToString::to_string).collect();
        write!(f, "e{} k{}:{} [{}] a({})", self.e_idx, self.r, self.g_idx, self.bar, a.join(","))
    }
}

fn pm<R: Ring>(ring: &R, odd: bool) -> R::El {
    if odd {
        ring.neg(&ring.one())
    } else {
        ring.one()
    }
}

/// Precomputed `K P(r)` action matrices for every permutation, keyed by arity.
pub(super) struct Actions<E> {
    by_arity: HashMap<usize, HashMap<Perm, SparseMatrix<E>>>,
}

impl<E: Clone + PartialEq> Actions<E> {
    pub(super) fn new<R: Ring<El = E>>(ctx: &Context<'_, R>, arities: impl Iterator<Item = usize>) -> Result<Self> {
        let mut by_arity = HashMap::new();
        for r in arities {
            let kp = &ctx.koszul[r - 1];
            let mut m = HashMap::new();
            for s in Perm::all(r) {
                let a = kp.action(ctx.ring, &s)?;
                m.insert(s, a);
            }
            by_arity.insert(r, m);
        }
        Ok(Actions { by_arity })
    }

    pub(super) fn get(&self, s: &Perm) -> &SparseMatrix<E> {
        &self.by_arity[&s.size()][s]
    }
}

/// The two coproduct terms of the differential, applied to `x ⊗ γ ⊗ (…) ⊗ a`.
/// `emit(coef, y, γ', contraction, a')` receives each term.
pub(super) fn coproduct_terms<R: Ring>(
    ctx: &Context<'_, R>,
    e_idx: usize,
    r: usize,
    g_idx: usize,
    a_idx: &[usize],
    mut emit: impl FnMut(R::El, usize, usize, Contraction, Vec<usize>),
) {
    if r < 2 {
        return;
    }
    let ring = ctx.ring;
    let kp = &ctx.koszul[r - 1];
    for d in &kp.delta_plus[g_idx] {
        let (i, j) = (d.i, d.j);
        for (c, pc) in ctx.algebra.product(d.gen, a_idx[i - 1], a_idx[j - 1]) {
            let mut a: Vec<usize> = a_idx.to_vec();
            a[i - 1] = *c;
            a.remove(j - 1);
            let pc = ring.from_i64(*pc);
            for (g2, k) in &d.coeffs {
                emit(ring.mul(k, &pc), e_idx, *g2, Contraction::Pair(i, j), a.clone());
            }
        }
    }
    for d in &kp.delta_minus[g_idx] {
        let i = d.i;
        let act = ctx.module.act(d.gen, e_idx, a_idx[i - 1]);
        if act.is_empty() {
            continue;
        }
        let mut a: Vec<usize> = a_idx.to_vec();
        a.remove(i - 1);
        for (y, ac) in act {
            let ac = ring.from_i64(*ac);
            for (g2, k) in &d.coeffs {
                emit(ring.mul(k, &ac), *y, *g2, Contraction::Single(i), a.clone());
            }
        }
    }
}

/// The differential of one generator, as a combination of generators in the
/// same section.
pub fn gamma_differential<R: Ring>(
    ctx: &Context<'_, R>,
    gen: &GammaGenerator,
    section: Section,
) -> Result<Vec<(R::El, GammaGenerator)>> {
    let r_needed = gen.r;
    ctx.validate(r_needed)?;
    let actions = Actions::new(ctx, std::iter::once(gen.r).filter(|_| gen.t() > 0))?;
    differential_with(ctx, &actions, gen, section)
}

pub(super) fn differential_with<R: Ring>(
    ctx: &Context<'_, R>,
    actions: &Actions<R::El>,
    gen: &GammaGenerator,
    section: Section,
) -> Result<Vec<(R::El, GammaGenerator)>> {
    let ring = ctx.ring;
    let mut out = Vec::new();
    let mut failure = None;
    coproduct_terms(ctx, gen.e_idx, gen.r, gen.g_idx, &gen.a_idx, |c, y, g2, mode, a| {
        match gen.bar.contract(mode) {
            Ok(bar) => out.push((c, GammaGenerator { e_idx: y, r: gen.r - 1, g_idx: g2, bar, a_idx: a })),
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    // simplicial part: (-1)^{|γ|} γ ⊗ δ(w̲)
    let t = gen.t();
    if t > 0 {
        let outer = pm(ring, (gen.r - 1) % 2 == 1);
        for (k, (s, face)) in gen.bar.differential().into_iter().enumerate() {
            let coef = ring.mul(&outer, &ring.from_i64(s));
            let renormalise = match section {
                Section::First => k == 0,
                Section::Last => k == t,
            };
            if !renormalise {
                out.push((coef, GammaGenerator { bar: face, ..gen.clone() }));
                continue;
            }
            let (s, canonical) = match section {
                Section::First => face.normalize(),
                Section::Last => face.normalize_last(),
            };
            // γ ⊗ s·w̲ ⊗ a = (s⁻¹·γ) ⊗ w̲ ⊗ a' with a'_y = a_{s(y)}
            let a: Vec<usize> = (1..=gen.r).map(|y| gen.a_idx[s.apply(y) - 1]).collect();
            let m = actions.get(&s.inverse());
            for (g2, v) in m.col(gen.g_idx) {
                out.push((
                    ring.mul(&coef, v),
                    GammaGenerator { e_idx: gen.e_idx, r: gen.r, g_idx: *g2, bar: canonical.clone(), a_idx: a.clone() },
                ));
            }
        }
    }
    Ok(out)
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn bar_tuples(r: usize, t: usize, section: Section) -> Vec<BarTuple> {
    let all = Perm::all(r);
    tuples(all.len(), t)
        .into_iter()
        .map(|idx| {
            let mut ws: Vec<Perm> = idx.iter().map(|&i| all[i].clone()).collect();
            match section {
                Section::First => ws.insert(0, Perm::identity(r)),
                Section::Last => ws.push(Perm::identity(r)),
            }
            BarTuple::new(ws).expect("same size")
        })
        .collect()
}

pub(super) fn enumerate<R: Ring>(ctx: &Context<'_, R>, trunc: Truncation, section: Section) -> Vec<Vec<GammaGenerator>> {
    let max_degree = trunc.max_degree();
    let mut by_degree = vec![Vec::new(); max_degree + 1];
    for r in 1..=trunc.max_arity() {
        let a_tuples = tuples(ctx.algebra.dim, r);
        for t in 0..=max_degree + 1 - r {
            if !trunc.admits(r, t) {
                continue;
            }
            let bars = bar_tuples(r, t, section);
            for e_idx in 0..ctx.module.dim {
                for g_idx in 0..ctx.koszul[r - 1].dim {
                    for bar in &bars {
                        for a in &a_tuples {
                            by_degree[r - 1 + t].push(GammaGenerator {
                                e_idx,
                                r,
                                g_idx,
                                bar: bar.clone(),
                                a_idx: a.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    by_degree
}

/// Assembles the Γ-complex and checks `∂ ∘ ∂ = 0`.
pub fn assemble_gamma<R: Ring>(
    ctx: &Context<'_, R>,
    trunc: Truncation,
    section: Section,
) -> Result<AssembledComplex<R::El>> {
    let max_arity = trunc.max_arity();
    ctx.validate(max_arity)?;
    let ring = ctx.ring;
    let gens = enumerate(ctx, trunc, section);
    let with_bar = (1..=max_arity).filter(|&r| trunc.admits(r, 1));
    let actions = Actions::new(ctx, with_bar)?;
    let index: Vec<HashMap<&GammaGenerator, usize>> =
        gens.iter().map(|g| g.iter().enumerate().map(|(i, x)| (x, i)).collect()).collect();
    let mut diffs = vec![SparseMatrix::zero(0, gens[0].len())];
    for d in 1..gens.len() {
        let cols: Vec<_> = gens[d]
            .par_iter()
            .map(|g| {
                let mut acc = Accumulator::new();
                for (c, out) in differential_with(ctx, &actions, g, section)? {
                    let row = *index[d - 1].get(&out).ok_or_else(|| {
                        Error::Invalid(format!("differential of {g} leaves the truncation at {out}"))
                    })?;
                    acc.add(ring, row, c);
                }
                Ok(acc.into_svec(ring))
            })
            .collect::<Result<_>>()?;
        diffs.push(SparseMatrix::from_columns(gens[d - 1].len(), cols)?);
    }
    let complex = AssembledComplex {
        name: "gamma".into(),
        grading: Grading::Homological,
        generators: gens.iter().map(|g| g.iter().map(ToString::to_string).collect()).collect(),
        diffs,
        valid_degrees: trunc.homology_degrees(),
    };
    complex.check_closure(ring)?;
    Ok(complex)
}

/// Cochains `Hom(M ∘ A, F)` for a left module `F` given in right-module
/// layout: the chain complex with coefficients in the dual of `F`, transposed.
pub fn assemble_cochain<R: Ring>(
    ctx: &Context<'_, R>,
    left_module: &CoefficientModule,
    trunc: Truncation,
    section: Section,
) -> Result<AssembledComplex<R::El>> {
    let dual = left_module.dual();
    let chain_ctx = Context { ring: ctx.ring, koszul: ctx.koszul, algebra: ctx.algebra, module: &dual };
    let chain = assemble_gamma(&chain_ctx, trunc, section)?;
    let diffs = chain.diffs[1..].iter().map(SparseMatrix::transpose).collect();
    let complex = AssembledComplex {
        name: "cochain".into(),
        grading: Grading::Cohomological,
        generators: chain.generators,
        diffs,
        valid_degrees: chain.valid_degrees,
    };
    complex.check_closure(ctx.ring)?;
    Ok(complex)
}
