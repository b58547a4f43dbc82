use std::collections::{BTreeMap, HashMap};

use crate::coeff::linalg::RowEchelon;
use crate::coeff::matrix::{axpy, Accumulator};
use crate::coeff::ring::Field;
use crate::coeff::{SVec, SparseMatrix};
use crate::error::{Error, Result};
use crate::perm::Perm;

use super::gamma::{coproduct_terms, Actions};
use super::{AssembledComplex, Context, Grading, Truncation};

/// `K P(r)` modulo the stabiliser of one sorted tuple of algebra elements.
struct Block<F: Field> {
    relations: RowEchelon<F>,
    /// Position among the quotient basis, keyed by free coordinate.
    free: BTreeMap<usize, usize>,
}

fn sorted_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let lo = p.last().copied().unwrap_or(0);
                (lo..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// `σ` with `sorted_{σ(y)} = a_y`.
fn sorting_perm(a: &[usize]) -> (Perm, Vec<usize>) {
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&y| a[y]);
    let mut images = vec![0; a.len()];
    for (k, &y) in order.iter().enumerate() {
        images[y] = k + 1;
    }
    let sorted = order.iter().map(|&y| a[y]).collect();
    (Perm::from_one_line(&images).expect("valid permutation"), sorted)
}

/// Degree `r - 1` generators `x ⊗ [γ ⊗ a]` with `a` sorted.
struct Degree<F: Field> {
    blocks: HashMap<Vec<usize>, Block<F>>,
    /// `(x, a) -> offset` of the block's basis among the degree's generators.
    offsets: HashMap<(usize, Vec<usize>), usize>,
    descriptors: Vec<String>,
    /// `(x, a, free coordinate)` per generator.
    gens: Vec<(usize, Vec<usize>, usize)>,
}

fn build_degree<F: Field>(ctx: &Context<'_, F>, r: usize) -> Degree<F> {
    let field = ctx.ring;
    let kp = &ctx.koszul[r - 1];
    let mut blocks = HashMap::new();
    let mut order = Vec::new();
    for a in sorted_tuples(ctx.algebra.dim, r) {
        let mut relations = RowEchelon::new(field.clone());
        for k in 1..r {
            if a[k - 1] != a[k] {
                continue;
            }
            let t = &kp.transpositions[k - 1];
            for g in 0..kp.dim {
                let v = axpy(field, t.col(g), &field.neg(&field.one()), &vec![(g, field.one())]);
                relations.insert(&v);
            }
        }
        let free = (0..kp.dim).filter(|&g| !relations.is_pivot(g)).enumerate().map(|(p, g)| (g, p)).collect();
        order.push(a.clone());
        blocks.insert(a, Block { relations, free });
    }
    let mut offsets = HashMap::new();
    let mut descriptors = Vec::new();
    let mut gens = Vec::new();
    for x in 0..ctx.module.dim {
        for a in &order {
            offsets.insert((x, a.clone()), gens.len());
            let labels: Vec<String> = a.iter().map(ToString::to_string).collect();
            for &g in blocks[a].free.keys() {
                descriptors.push(format!("e{x} k{r}:{g} a({})", labels.join(",")));
                gens.push((x, a.clone(), g));
            }
        }
    }
    Degree { blocks, offsets, descriptors, gens }
}

/// Assembles `E ⊗ K P ∘ A` over a field, with the Koszul dual in arities
/// allowed by the truncation; checks `∂ ∘ ∂ = 0`.
pub fn assemble_koszul<F: Field>(ctx: &Context<'_, F>, trunc: Truncation) -> Result<AssembledComplex<F::El>> {
    let max_arity = match trunc {
        Truncation::Degree(d) => d + 2,
        Truncation::Box { r_max, .. } => r_max,
    };
    ctx.validate(max_arity)?;
    let field = ctx.ring;
    let actions = Actions::new(ctx, 1..max_arity)?;
    let degrees: Vec<Degree<F>> = (1..=max_arity).map(|r| build_degree(ctx, r)).collect();
    let mut diffs = vec![SparseMatrix::zero(0, degrees[0].gens.len())];
    for r in 2..=max_arity {
        let (src, dst) = (&degrees[r - 1], &degrees[r - 2]);
        let mut cols = Vec::with_capacity(src.gens.len());
        for (x, a, g) in &src.gens {
            let mut acc = Accumulator::new();
            let mut failure = None;
            coproduct_terms(ctx, *x, r, *g, a, |c, y, g2, _, a2| {
                let (s, sorted) = sorting_perm(&a2);
                let Some(block) = dst.blocks.get(&sorted) else {
                    failure = Some(Error::Invalid(format!("tuple {sorted:?} outside the algebra")));
                    return;
                };
                let offset = dst.offsets[&(y, sorted)];
                let moved: SVec<F::El> =
                    actions.get(&s).col(g2).iter().map(|(i, v)| (*i, field.mul(&c, v))).collect();
                for (i, v) in block.relations.reduce(&moved) {
                    acc.add(field, offset + block.free[&i], v);
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            cols.push(acc.into_svec(field));
        }
        diffs.push(SparseMatrix::from_columns(dst.gens.len(), cols)?);
    }
    let complex = AssembledComplex {
        name: "koszul".into(),
        grading: Grading::Homological,
        generators: degrees.into_iter().map(|d| d.descriptors).collect(),
        diffs,
        valid_degrees: match trunc {
            Truncation::Degree(d) => d + 1,
            Truncation::Box { r_max, .. } => r_max - 1,
        },
    };
    complex.check_closure(field)?;
    Ok(complex)
}
