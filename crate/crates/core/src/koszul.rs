//! The Koszul dual cooperad in each arity, extracted from the top homology of
//! the bar construction, together with the two coproduct patterns that drive
//! the Γ-complex differential.
//!
//! A bar tree has vertices labelled by basis elements of `P(k)`, each vertex
//! of degree one, listed in preorder. `K P(r)` is the kernel of the bar
//! differential on fully binary trees with `r` leaves.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::BigRational;

use crate::coeff::linalg::{self, RowEchelon};
use crate::coeff::matrix::Accumulator;
use crate::coeff::ring::{rational_to_i128, Field, Integers, Rationals, Ring};
use crate::coeff::{SVec, SparseMatrix};
use crate::error::{Error, Result};
use crate::operad::tree::{canonicalize, reduced_trees, sort_trees, Tree};
use crate::operad::{Operad, Presentation};
use crate::perm::Perm;

/// `γ ↦ γ'₊ ⊗ γ''₊`: the cherry on inputs `i < j` labelled by generator `gen`
/// is split off, leaving `coeffs` in `K P(r-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPlus<E> {
    pub i: usize,
    pub j: usize,
    pub gen: usize,
    pub coeffs: SVec<E>,
}

/// `γ ↦ γ'₋ ⊗ γ''₋`: the root, written `μ_gen(◇, x_i)`, is split off, leaving
/// `coeffs` in `K P(r-1)` on the remaining inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMinus<E> {
    pub i: usize,
    pub gen: usize,
    pub coeffs: SVec<E>,
}

/// Cycle representatives in the top degree of the bar complex.
#[derive(Debug, Clone, PartialEq)]
pub struct Representatives<E> {
    pub trees: Vec<Tree>,
    pub cycles: Vec<SVec<E>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KoszulData<E> {
    pub arity: usize,
    pub dim: usize,
    /// Action of the adjacent transpositions `t_1, …, t_{r-1}` (renaming inputs).
    pub transpositions: Vec<SparseMatrix<E>>,
    pub delta_plus: Vec<Vec<DeltaPlus<E>>>,
    pub delta_minus: Vec<Vec<DeltaMinus<E>>>,
    pub representatives: Option<Representatives<E>>,
}

impl<E: Clone + PartialEq> KoszulData<E> {
    /// Homological degree of every basis element.
    pub fn degree(&self) -> usize {
        self.arity - 1
    }

    /// Matrix of renaming inputs by `s`.
    pub fn action<R: Ring<El = E>>(&self, ring: &R, s: &Perm) -> Result<SparseMatrix<E>> {
        if s.size() != self.arity {
            return Err(Error::DimensionMismatch(format!("Σ_{} acting on arity {}", s.size(), self.arity)));
        }
        let mut acc = SparseMatrix::identity(ring, self.dim);
        for k in s.adjacent_word() {
            acc = self.transpositions[k - 1].mul(ring, &acc)?;
        }
        Ok(acc)
    }

    pub fn map<R: Ring>(&self, ring: &R, f: impl Fn(&E) -> R::El) -> KoszulData<R::El> {
        let vec = |v: &SVec<E>| -> SVec<R::El> {
            v.iter()
                .filter_map(|(i, x)| {
                    let y = f(x);
                    (!ring.is_zero(&y)).then_some((*i, y))
                })
                .collect()
        };
        KoszulData {
            arity: self.arity,
            dim: self.dim,
            transpositions: self.transpositions.iter().map(|m| m.map(ring, &f)).collect(),
            delta_plus: self
                .delta_plus
                .iter()
                .map(|ts| ts.iter().map(|d| DeltaPlus { i: d.i, j: d.j, gen: d.gen, coeffs: vec(&d.coeffs) }).collect())
                .collect(),
            delta_minus: self
                .delta_minus
                .iter()
                .map(|ts| ts.iter().map(|d| DeltaMinus { i: d.i, gen: d.gen, coeffs: vec(&d.coeffs) }).collect())
                .collect(),
            representatives: self
                .representatives
                .as_ref()
                .map(|r| Representatives { trees: r.trees.clone(), cycles: r.cycles.iter().map(vec).collect() }),
        }
    }

    /// Text dump for auditing.
    pub fn dump<R: Ring<El = E>>(&self, ring: &R) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "arity {}\ndim {}\ndegree {}", self.arity, self.dim, self.degree());
        for (k, m) in self.transpositions.iter().enumerate() {
            let _ = write!(s, "transposition {}\n{}", k + 1, m.dump(ring));
        }
        let fmt = |v: &SVec<E>| {
            v.iter().map(|(i, x)| format!("{}:{}", i, ring.format(x))).collect::<Vec<_>>().join(" ")
        };
        for (b, terms) in self.delta_plus.iter().enumerate() {
            for d in terms {
                let _ = writeln!(s, "delta_plus {b} i={} j={} gen={} -> {}", d.i, d.j, d.gen, fmt(&d.coeffs));
            }
        }
        for (b, terms) in self.delta_minus.iter().enumerate() {
            for d in terms {
                let _ = writeln!(s, "delta_minus {b} i={} gen={} -> {}", d.i, d.gen, fmt(&d.coeffs));
            }
        }
        if let Some(reps) = &self.representatives {
            for (b, c) in reps.cycles.iter().enumerate() {
                let terms: Vec<String> =
                    c.iter().map(|(t, x)| format!("{}*{}", ring.format(x), reps.trees[*t])).collect();
                let _ = writeln!(s, "cycle {b} = {}", terms.join(" + "));
            }
        }
        s
    }
}

/// `κ`: the identification of `K P(2)` with `P(2)`; basis element `b` of
/// `K P(2)` is the generator `μ_b`.
pub fn kappa<E>(data: &KoszulData<E>, b: usize) -> Result<usize> {
    if data.arity != 2 {
        return Err(Error::Invalid(format!("kappa is only defined in arity 2, got {}", data.arity)));
    }
    if b >= data.dim {
        return Err(Error::BadLabel(format!("basis index {b} of K P(2)")));
    }
    Ok(b)
}

/// One arity of the bar construction: trees graded by vertex count.
pub struct BarComplex<F: Field> {
    pub arity: usize,
    /// `bases[s]` lists the trees with `s` vertices (empty for `s = 0`).
    pub bases: Vec<Vec<Tree>>,
    index: Vec<HashMap<Tree, usize>>,
    /// `diffs[s]` maps degree `s` to degree `s - 1` (`diffs[0]` is empty).
    pub diffs: Vec<SparseMatrix<F::El>>,
}

impl<F: Field> BarComplex<F> {
    pub fn index_of(&self, s: usize, t: &Tree) -> Option<usize> {
        self.index[s].get(t).copied()
    }

    /// `dim H_s` for `s = 0..=r-1`.
    pub fn homology_dims(&self, field: &F) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(|d| linalg::rank(field, d)).collect();
        (0..self.bases.len())
            .map(|s| {
                let out = ranks[s];
                let inc = ranks.get(s + 1).copied().unwrap_or(0);
                self.bases[s].len() - out - inc
            })
            .collect()
    }
}

fn sign<F: Field>(field: &F, negative: bool) -> F::El {
    if negative {
        field.neg(&field.one())
    } else {
        field.one()
    }
}

/// Bar differential of one tree, as a combination of canonical trees with one
/// vertex fewer.
pub fn bar_boundary<F: Field>(op: &Operad<F>, tree: &Tree) -> Result<Vec<(F::El, Tree)>> {
    let f = op.field();
    let mut out = Vec::new();
    for (pos, path) in tree.vertex_paths().into_iter().enumerate() {
        let Tree::Node(lu, ch) = tree.at(&path) else { unreachable!() };
        let mut between = 0;
        for (c, child) in ch.iter().enumerate() {
            if let Tree::Node(lv, grand) = child {
                let merged = op.compose_basis(ch.len(), *lu, c + 1, grand.len(), *lv)?;
                let mut children: Vec<Tree> = ch[..c].to_vec();
                children.extend(grand.iter().cloned());
                children.extend(ch[c + 1..].iter().cloned());
                let s = sign(f, (pos + between) % 2 == 1);
                for (label, coef) in merged {
                    let t = tree.replace_at(&path, Tree::Node(label, children.clone()));
                    for (d, ct) in canonicalize(f, op, &t, true) {
                        out.push((f.mul(&f.mul(&s, &coef), &d), ct));
                    }
                }
            }
            between += child.n_vertices();
        }
    }
    Ok(out)
}

/// The arity-`r` bar complex (`r >= 2`).
pub fn bar_complex<F: Field>(op: &Operad<F>, r: usize) -> Result<BarComplex<F>> {
    if r < 2 {
        return Err(Error::Invalid("bar complex needs arity at least 2".into()));
    }
    crate::operad::check_cap(r, op.cap())?;
    let mut dims = vec![0; r + 1];
    for (k, d) in dims.iter_mut().enumerate().skip(2) {
        *d = op.dim(k)?;
    }
    let leaves: Vec<u8> = (1..=r as u8).collect();
    let mut bases: Vec<Vec<Tree>> = vec![Vec::new(); r];
    for t in reduced_trees(&leaves, &|k| dims[k]) {
        let s = t.n_vertices();
        bases[s].push(t);
    }
    for b in &mut bases {
        sort_trees(b);
    }
    let index: Vec<HashMap<Tree, usize>> =
        bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()).collect();
    let f = op.field();
    let mut diffs = vec![SparseMatrix::zero(0, bases[0].len())];
    for s in 1..r {
        let mut cols = Vec::with_capacity(bases[s].len());
        for t in &bases[s] {
            let mut acc = Accumulator::new();
            for (c, ct) in bar_boundary(op, t)? {
                acc.add(f, index[s - 1][&ct], c);
            }
            cols.push(acc.into_svec(f));
        }
        diffs.push(SparseMatrix::from_columns(bases[s - 1].len(), cols)?);
    }
    Ok(BarComplex { arity: r, bases, index, diffs })
}

fn unit_data<R: Ring>(ring: &R) -> KoszulData<R::El> {
    KoszulData {
        arity: 1,
        dim: 1,
        transpositions: Vec::new(),
        delta_plus: vec![Vec::new()],
        delta_minus: vec![Vec::new()],
        representatives: Some(Representatives { trees: vec![Tree::Leaf(1)], cycles: vec![vec![(0, ring.one())]] }),
    }
}

fn echelon_of<F: Field>(field: &F, rows: &[SVec<F::El>]) -> RowEchelon<F> {
    let mut e = RowEchelon::new(field.clone());
    for r in rows {
        e.insert(r);
    }
    e
}

/// Coordinates over `K P(r-1)` of per-key tree combinations.
fn to_coords<F: Field, K: Ord>(
    field: &F,
    prev: &KoszulData<F::El>,
    prev_ech: &RowEchelon<F>,
    prev_index: &HashMap<&Tree, usize>,
    parts: BTreeMap<K, Vec<(F::El, Tree)>>,
) -> Result<Vec<(K, SVec<F::El>)>> {
    let mut out = Vec::new();
    for (key, terms) in parts {
        let mut acc = Accumulator::new();
        for (c, t) in terms {
            let idx = prev_index
                .get(&t)
                .ok_or_else(|| Error::Invalid(format!("coproduct produced unexpected tree {t}")))?;
            acc.add(field, *idx, c);
        }
        let v = acc.into_svec(field);
        if v.is_empty() {
            continue;
        }
        let coords = prev_ech.coords(&v).ok_or_else(|| {
            Error::Invalid(format!("coproduct component does not lie in K P({})", prev.arity))
        })?;
        out.push((key, coords));
    }
    Ok(out)
}

/// `K P(r)` from bar homology, with coordinates against `prev = K P(r-1)`.
///
/// Fails with [`Error::NotKoszul`] if the bar homology is not concentrated in
/// the top degree.
pub fn koszul_component<F: Field>(op: &Operad<F>, r: usize, prev: Option<&KoszulData<F::El>>) -> Result<KoszulData<F::El>> {
    let f = op.field();
    if r == 1 {
        return Ok(unit_data(f));
    }
    let prev = prev.ok_or(Error::MissingKoszul(r - 1))?;
    let bar = bar_complex(op, r)?;
    let h = bar.homology_dims(f);
    for (s, d) in h.iter().enumerate().take(r - 1).skip(1) {
        if *d != 0 {
            return Err(Error::NotKoszul { arity: r, degree: s, dim: *d });
        }
    }
    let top = r - 1;
    let cycles = linalg::kernel(f, bar.diffs[top].columns());
    let trees = bar.bases[top].clone();
    let ech = echelon_of(f, &cycles);

    let prev_reps = prev.representatives.as_ref().ok_or(Error::MissingKoszul(r - 1))?;
    let prev_ech = echelon_of(f, &prev_reps.cycles);
    let prev_index: HashMap<&Tree, usize> = prev_reps.trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let sigma = &op.presentation().sigma2_action;
    let minus_one = f.neg(&f.one());

    let mut transpositions = Vec::new();
    for k in 1..r {
        let t = Perm::transposition(r, k);
        let mut cols = Vec::new();
        for cyc in &cycles {
            let mut acc = Accumulator::new();
            for (ti, c) in cyc {
                let moved = trees[*ti].relabel_leaves(&|x| t.apply(x as usize) as u8);
                for (d, ct) in canonicalize(f, op, &moved, true) {
                    acc.add(f, bar.index_of(top, &ct).expect("binary tree"), f.mul(c, &d));
                }
            }
            let coords = ech
                .coords(&acc.into_svec(f))
                .ok_or_else(|| Error::Invalid("symmetric group action leaves the cycles".into()))?;
            cols.push(coords);
        }
        transpositions.push(SparseMatrix::from_columns(cycles.len(), cols)?);
    }

    let mut delta_plus = Vec::new();
    let mut delta_minus = Vec::new();
    for cyc in &cycles {
        let mut plus: BTreeMap<(usize, usize, usize), Vec<(F::El, Tree)>> = BTreeMap::new();
        let mut minus: BTreeMap<(usize, usize), Vec<(F::El, Tree)>> = BTreeMap::new();
        for (ti, c) in cyc {
            let t = &trees[*ti];
            for (pos, path) in t.vertex_paths().into_iter().enumerate() {
                let Tree::Node(g, ch) = t.at(&path) else { unreachable!() };
                if let [Tree::Leaf(i), Tree::Leaf(j)] = ch.as_slice() {
                    let (i, j) = (*i, *j);
                    let rest = t.replace_at(&path, Tree::Leaf(i)).relabel_leaves(&|x| if x > j { x - 1 } else { x });
                    let s = sign(f, pos % 2 == 1);
                    plus.entry((i as usize, j as usize, *g)).or_default().push((f.mul(&s, c), rest));
                }
            }
            let Tree::Node(g, ch) = t else { unreachable!() };
            for (side, child) in ch.iter().enumerate() {
                let Tree::Leaf(i) = child else { continue };
                let i = *i;
                let rest = ch[1 - side].relabel_leaves(&|x| if x > i { x - 1 } else { x });
                let base = f.mul(&minus_one, c);
                if side == 1 {
                    minus.entry((i as usize, *g)).or_default().push((base, rest));
                } else {
                    // μ_g(x_i, ◇) = Σ σ[g'][g] μ_{g'}(◇, x_i)
                    for (g2, row) in sigma.iter().enumerate() {
                        if row[*g] != 0 {
                            let coef = f.mul(&base, &f.from_i64(row[*g]));
                            minus.entry((i as usize, g2)).or_default().push((coef, rest.clone()));
                        }
                    }
                }
            }
        }
        delta_plus.push(
            to_coords(f, prev, &prev_ech, &prev_index, plus)?
                .into_iter()
                .map(|((i, j, gen), coeffs)| DeltaPlus { i, j, gen, coeffs })
                .collect(),
        );
        delta_minus.push(
            to_coords(f, prev, &prev_ech, &prev_index, minus)?
                .into_iter()
                .map(|((i, gen), coeffs)| DeltaMinus { i, gen, coeffs })
                .collect(),
        );
    }
    Ok(KoszulData {
        arity: r,
        dim: cycles.len(),
        transpositions,
        delta_plus,
        delta_minus,
        representatives: Some(Representatives { trees, cycles }),
    })
}

/// `K P(1), …, K P(r_max)` from bar homology.
pub fn generic_family<F: Field>(op: &Operad<F>, r_max: usize) -> Result<Vec<KoszulData<F::El>>> {
    let mut out: Vec<KoszulData<F::El>> = Vec::new();
    for r in 1..=r_max {
        let d = koszul_component(op, r, out.last())?;
        out.push(d);
    }
    Ok(out)
}

/// Hand-written integral data for `K Lie`: one generator `γ_r` per arity,
/// acted on by the sign, with `Δ₊` coefficient `(-1)^j` and `Δ₋` coefficient
/// `(-1)^{i-1}`.
pub fn lie_closed_form(r: usize) -> KoszulData<i128> {
    if r == 1 {
        return unit_data(&Integers);
    }
    let pm = |e: usize| if e.is_multiple_of(2) { 1i128 } else { -1 };
    let mut plus = Vec::new();
    for i in 1..=r {
        for j in i + 1..=r {
            plus.push(DeltaPlus { i, j, gen: 0, coeffs: vec![(0, pm(j))] });
        }
    }
    let minus = (1..=r).map(|i| DeltaMinus { i, gen: 0, coeffs: vec![(0, pm(i - 1))] }).collect();
    KoszulData {
        arity: r,
        dim: 1,
        transpositions: (1..r).map(|_| SparseMatrix::from_columns(1, vec![vec![(0, -1)]]).unwrap()).collect(),
        delta_plus: vec![plus],
        delta_minus: vec![minus],
        representatives: None,
    }
}

/// Integral Koszul data for a builtin operad, arities `1..=r_max`.
///
/// `Lie` is written out by hand. For `Com` and `Ass` the reduced echelon
/// cycle basis over ℚ is integral, so it is a basis of the saturated lattice
/// of integral cycles and all structure constants are integers.
pub fn closed_form(name: &str, r_max: usize, cap: usize) -> Result<Vec<KoszulData<i128>>> {
    let pres = Presentation::builtin(name)?;
    crate::operad::check_cap(r_max, cap)?;
    if pres.name == "Lie" {
        return Ok((1..=r_max).map(lie_closed_form).collect());
    }
    integral_family(pres, r_max, cap)
}

/// Generic Koszul data over ℚ, converted to integers; fails if any structure
/// constant is not integral.
pub fn integral_family(pres: Presentation, r_max: usize, cap: usize) -> Result<Vec<KoszulData<i128>>> {
    let op = Operad::new(pres, Rationals, cap)?;
    let family = generic_family(&op, r_max)?;
    family.iter().map(integral).collect()
}

fn integral(d: &KoszulData<BigRational>) -> Result<KoszulData<i128>> {
    let ok = |v: &SVec<BigRational>| v.iter().all(|(_, x)| rational_to_i128(x).is_some());
    let all = d.transpositions.iter().all(|m| m.columns().iter().all(ok))
        && d.delta_plus.iter().flatten().all(|t| ok(&t.coeffs))
        && d.delta_minus.iter().flatten().all(|t| ok(&t.coeffs))
        && d.representatives.as_ref().is_none_or(|r| r.cycles.iter().all(ok));
    if !all {
        return Err(Error::Invalid(format!("non-integral Koszul data in arity {}", d.arity)));
    }
    Ok(d.map(&Integers, |v| rational_to_i128(v).expect("checked integral")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ring::PrimeField;

    fn q_op(p: Presentation) -> Operad<Rationals> {
        Operad::new(p, Rationals, 6).unwrap()
    }

    #[test]
    fn bar_differential_squares_to_zero() {
        for p in [Presentation::com(), Presentation::lie(), Presentation::ass()] {
            let op = q_op(p);
            for r in 2..=4 {
                let bar = bar_complex(&op, r).unwrap();
                for s in 2..r {
                    let dd = bar.diffs[s - 1].mul(&Rationals, &bar.diffs[s]).unwrap();
                    assert!(dd.is_zero(), "{} r={r} s={s}", op.presentation().name);
                }
            }
        }
    }

    #[test]
    fn arity_two_and_three() {
        let op = q_op(Presentation::com());
        let bar = bar_complex(&op, 3).unwrap();
        assert_eq!(bar.bases[2].len(), 3);
        assert_eq!(bar.bases[1].len(), 1);
        assert_eq!(bar.homology_dims(&Rationals), vec![0, 0, 2]);
        let fam = generic_family(&op, 3).unwrap();
        assert_eq!(fam.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![1, 1, 2]);
        // K Com(2) is the trivial representation in this orientation
        assert_eq!(fam[1].transpositions[0], SparseMatrix::identity(&Rationals, 1));
        let lie = generic_family(&q_op(Presentation::lie()), 3).unwrap();
        assert_eq!(lie[2].dim, 1);
        assert_eq!(lie[1].transpositions[0].col(0), &vec![(0, Rationals.from_i64(-1))]);
    }

    #[test]
    fn arity_three_coproducts_agree() {
        // for three inputs both patterns see every tree
        let fam = generic_family(&q_op(Presentation::lie()), 3).unwrap();
        let n_plus: usize = fam[2].delta_plus.iter().map(Vec::len).sum();
        let n_minus: usize = fam[2].delta_minus.iter().map(Vec::len).sum();
        assert_eq!((n_plus, n_minus), (3, 3));
    }

    #[test]
    fn dims_over_small_primes() {
        for p in [2, 3] {
            let op = Operad::new(Presentation::com(), PrimeField::new(p).unwrap(), 6).unwrap();
            let fam = generic_family(&op, 4).unwrap();
            assert_eq!(fam.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![1, 1, 2, 6]);
        }
    }

    #[test]
    fn closed_forms_are_integral() {
        let com = closed_form("Com", 4, 6).unwrap();
        assert_eq!(com.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![1, 1, 2, 6]);
        let ass = closed_form("Ass", 3, 6).unwrap();
        assert_eq!(ass.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![1, 2, 6]);
        assert!(closed_form("Foo", 3, 6).is_err());
        assert_eq!(kappa(&com[1], 0).unwrap(), 0);
        assert!(kappa(&com[2], 0).is_err());
    }

    #[test]
    fn lie_closed_form_matches_generic_up_to_scaling() {
        let q = Rationals;
        let gen = generic_family(&q_op(Presentation::lie()), 5).unwrap();
        let closed: Vec<KoszulData<BigRational>> =
            (1..=5).map(|r| lie_closed_form(r).map(&q, |v| q.from_i64(*v as i64))).collect();
        // γ_r(generic) = ε_r γ_r(closed)
        let mut eps = vec![q.one(); 6];
        for r in 2..=5 {
            let g = &gen[r - 1];
            let c = &closed[r - 1];
            assert_eq!(g.transpositions, c.transpositions, "action r={r}");
            let (gp, cp) = (&g.delta_plus[0][0], &c.delta_plus[0][0]);
            // g = ε_r c, coeffs scale by ε_r / ε_{r-1}
            eps[r] = q.mul(&q.div(&gp.coeffs[0].1, &cp.coeffs[0].1), &eps[r - 1]);
            let ratio = q.div(&eps[r], &eps[r - 1]);
            let scaled = c.map(&q, |v| q.mul(v, &ratio));
            assert_eq!(g.delta_plus, scaled.delta_plus, "delta_plus r={r}");
            assert_eq!(g.delta_minus, scaled.delta_minus, "delta_minus r={r}");
        }
    }
}
