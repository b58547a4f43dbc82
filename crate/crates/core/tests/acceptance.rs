//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use gammahom::coeff::ring::from_i128;
use gammahom::complex::{assemble_gamma, assemble_koszul, e_sigma};
use gammahom::koszul::{bar_complex, closed_form, generic_family, KoszulData};
use gammahom::operad::DEFAULT_ARITY_CAP;
use gammahom::perm::{contract_pair, contract_single};
use gammahom::{
    CoefficientModule, Context, Field, FiniteAlgebra, Integers, Operad, Perm, Presentation, PrimeField, Rationals,
    Section, SparseMatrix, Truncation,
};
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every comparison below is exact.
const TOLERANCE: usize = 0;
const RANDOM_EQUIVARIANCE_SAMPLES: usize = 10_000;
const SEED: u64 = 0x5eed_2024;

fn budget(secs: u64) -> Duration {
    Duration::from_secs(secs)
}

fn report(n: u32, what: &str, ok: bool, start: Instant, limit: Duration, detail: &str) {
    let elapsed = start.elapsed();
    let ok = ok && elapsed <= limit;
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n} ({what}): {status} [{:.2}s of {}s] {detail}", elapsed.as_secs_f64(), limit.as_secs());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn over<F: Field>(field: &F, d: &[KoszulData<i128>]) -> Vec<KoszulData<F::El>> {
    d.iter().map(|k| k.map(field, |v| from_i128(field, *v))).collect()
}

// ---------------------------------------------------------------- criterion 1

/// Nonzero entries of `outer * inner`, computed column by column.
fn composite_nonzeros(outer: &SparseMatrix<i128>, inner: &SparseMatrix<i128>) -> usize {
    let mut count = 0;
    for j in 0..inner.n_cols() {
        let mut acc: HashMap<usize, i128> = HashMap::new();
        for (k, v) in inner.col(j) {
            for (i, w) in outer.col(*k) {
                *acc.entry(*i).or_default() += v * w;
            }
        }
        count += acc.values().filter(|v| **v != 0).count();
    }
    count
}

#[test]
fn criterion_1_closure_over_z() {
    let start = Instant::now();
    let trunc = Truncation::Box { r_max: 4, t_max: 2 };
    let mut detail = Vec::new();
    let mut ok = true;
    for (op, alg) in [("Com", "trivial_square_zero(2)"), ("Lie", "trivial_square_zero(2)"), ("Lie", "sl2")] {
        let pres = Presentation::builtin(op).unwrap();
        let algebra = FiniteAlgebra::builtin(alg, &pres).unwrap();
        let koszul = closed_form(op, 4, DEFAULT_ARITY_CAP).unwrap();
        for coeffs in ["trivial", "adjoint"] {
            let module = CoefficientModule::builtin(coeffs, &algebra).unwrap();
            let ctx = Context { ring: &Integers, koszul: &koszul, algebra: &algebra, module: &module };
            match assemble_gamma(&ctx, trunc, Section::First) {
                Ok(c) => {
                    let bad: usize = (2..c.diffs.len()).map(|d| composite_nonzeros(&c.diffs[d - 1], &c.diffs[d])).sum();
                    ok &= bad <= TOLERANCE;
                    detail.push(format!("{op}/{alg}/{coeffs}: {} generators, {bad} nonzero", c.ranks().iter().sum::<usize>()));
                }
                Err(e) => {
                    ok = false;
                    detail.push(format!("{op}/{alg}/{coeffs}: {e}"));
                }
            }
        }
    }
    report(1, "closure over Z", ok, start, budget(60), &detail.join("; "));
}

// ---------------------------------------------------------------- criterion 2

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Label {
    Y(usize),
    E,
}

/// `c^e_{i,j}(w)` as its table of columns `(x, image)`.
fn pair_table(w: &[usize], i: usize, j: usize) -> Vec<(usize, Label)> {
    let pre = |y: usize| w.iter().position(|&v| v == y).unwrap();
    let (dropped, kept) = if pre(i) < pre(j) { (j, i) } else { (i, j) };
    (1..=w.len())
        .filter(|&x| w[x - 1] != dropped)
        .map(|x| (x, if w[x - 1] == kept { Label::E } else { Label::Y(w[x - 1]) }))
        .collect()
}

fn single_table(w: &[usize], i: usize) -> Vec<(usize, Label)> {
    (1..=w.len()).filter(|&x| w[x - 1] != i).map(|x| (x, Label::Y(w[x - 1]))).collect()
}

/// Reads a table through the induced orders, `e` sitting at the place of `slot`.
fn ranked(table: &[(usize, Label)], slot: usize) -> Vec<usize> {
    let key = |l: Label| match l {
        Label::Y(y) => y,
        Label::E => slot,
    };
    let mut keys: Vec<usize> = table.iter().map(|(_, l)| key(*l)).collect();
    keys.sort_unstable();
    table.iter().map(|(_, l)| keys.binary_search(&key(*l)).unwrap() + 1).collect()
}

fn act(s: &[usize], table: &[(usize, Label)]) -> Vec<(usize, Label)> {
    table
        .iter()
        .map(|&(x, l)| (x, if let Label::Y(y) = l { Label::Y(s[y - 1]) } else { Label::E }))
        .collect()
}

fn compose(s: &[usize], w: &[usize]) -> Vec<usize> {
    w.iter().map(|&y| s[y - 1]).collect()
}

/// Failures for one `(w, σ)` and every pair and single of labels.
fn equivariance_failures(w: &[usize], s: &[usize], pairs: &[(usize, usize)]) -> usize {
    let (wp, sw) = (Perm::from_one_line(w).unwrap(), compose(s, w));
    let mut bad = 0;
    for &(i, j) in pairs {
        let lhs = act(s, &pair_table(w, i, j));
        let rhs = pair_table(&sw, s[i - 1], s[j - 1]);
        bad += usize::from(lhs != rhs);
        bad += usize::from(contract_pair(&wp, i, j).unwrap().one_line() != ranked(&pair_table(w, i, j), i));
    }
    for i in 1..=w.len() {
        bad += usize::from(act(s, &single_table(w, i)) != single_table(&sw, s[i - 1]));
        bad += usize::from(contract_single(&wp, i).unwrap().one_line() != ranked(&single_table(w, i), i));
    }
    bad
}

#[test]
fn criterion_2_equivariance() {
    let start = Instant::now();
    let mut failures = 0;
    let mut cases = 0;
    for r in 2..=4 {
        let pairs: Vec<_> = (1..=r).flat_map(|i| (i + 1..=r).map(move |j| (i, j))).collect();
        let all: Vec<Vec<usize>> = Perm::all(r).iter().map(Perm::one_line).collect();
        for w in &all {
            for s in &all {
                failures += equivariance_failures(w, s, &pairs);
                cases += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut base: Vec<usize> = (1..=5).collect();
    for _ in 0..RANDOM_EQUIVARIANCE_SAMPLES {
        base.shuffle(&mut rng);
        let w = base.clone();
        base.shuffle(&mut rng);
        let s = base.clone();
        let i = rng.gen_range(1..=4);
        let j = rng.gen_range(i + 1..=5);
        failures += equivariance_failures(&w, &s, &[(i, j)]);
        cases += 1;
    }
    report(2, "equivariance of contractions", failures <= TOLERANCE, start, budget(30), &format!("{cases} cases, {failures} failures"));
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_3_e_sigma_acyclic() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in 1..=3 {
        let h = e_sigma(&Integers, n, 4).unwrap().homology(&Integers).unwrap();
        let betti: Vec<usize> = h.iter().map(|s| s.betti).collect();
        ok &= betti == [1, 0, 0, 0] && h.iter().all(|s| s.torsion.is_empty());
        detail.push(format!("n={n}: {betti:?}"));
    }
    report(3, "acyclicity of C(EΣ_n)", ok, start, budget(10), &detail.join("; "));
}

// ---------------------------------------------------------------- criterion 4

fn generic_dims<F: Field>(field: F, name: &str, r_max: usize) -> Result<Vec<usize>, String> {
    let op = Operad::new(Presentation::builtin(name).unwrap(), field.clone(), DEFAULT_ARITY_CAP).map_err(|e| e.to_string())?;
    for r in 2..=r_max {
        let dims = bar_complex(&op, r).map_err(|e| e.to_string())?.homology_dims(&field);
        if dims[..r - 1].iter().any(|&d| d != 0) {
            return Err(format!("{name}({r}) bar homology {dims:?}"));
        }
    }
    Ok(generic_family(&op, r_max).map_err(|e| e.to_string())?.iter().map(|d| d.dim).collect())
}

#[test]
fn criterion_4_koszul_dimensions() {
    let start = Instant::now();
    let factorial = |n: usize| (1..=n).product::<usize>();
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, expected) in [("Lie", vec![1; 5]), ("Com", (1..=5).map(|r| factorial(r - 1)).collect::<Vec<_>>())] {
        let closed: Vec<usize> = closed_form(name, 5, DEFAULT_ARITY_CAP).unwrap().iter().map(|d| d.dim).collect();
        ok &= closed == expected;
        for (label, dims) in [
            ("Q", generic_dims(Rationals, name, 5)),
            ("F2", generic_dims(PrimeField::new(2).unwrap(), name, 5)),
            ("F3", generic_dims(PrimeField::new(3).unwrap(), name, 5)),
        ] {
            ok &= dims.as_ref() == Ok(&expected);
            detail.push(format!("{name}/{label}: {dims:?}"));
        }
    }
    report(4, "Koszul dual dimensions", ok, start, budget(120), &detail.join("; "));
}

// ---------------------------------------------------------------- criterion 5

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (0..n)
        .flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
            s.push(last);
            s
        }))
        .collect()
}

/// Exact rank of a dense rational matrix.
fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    let n_cols = rows.first().map_or(0, Vec::len);
    for c in 0..n_cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Chevalley–Eilenberg boundary `Λ^k g → Λ^{k-1} g`, with trivial coefficients.
fn ce_boundary(alg: &FiniteAlgebra, k: usize) -> Vec<Vec<BigRational>> {
    let n = alg.dim;
    let (src, dst) = (subsets(n, k), subsets(n, k - 1));
    let index: HashMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = vec![vec![BigRational::zero(); src.len()]; dst.len()];
    for (col, s) in src.iter().enumerate() {
        for p in 0..k {
            for q in p + 1..k {
                let rest: Vec<usize> = (0..k).filter(|&t| t != p && t != q).map(|t| s[t]).collect();
                for (c, coef) in alg.product(0, s[p], s[q]) {
                    // [x_p, x_q] ∧ rest, sorted with its sign
                    if rest.contains(c) {
                        continue;
                    }
                    let mut word = vec![*c];
                    word.extend(&rest);
                    let inversions = word[1..].iter().filter(|&&y| y < *c).count();
                    word.sort_unstable();
                    let sign = if (p + q + 1 + inversions) % 2 == 0 { 1 } else { -1 };
                    m[index[&word]][col] += BigRational::from_integer((sign * coef).into());
                }
            }
        }
    }
    m
}

/// `H_{d+1}` of the Chevalley–Eilenberg complex for `d = 0..3`.
fn ce_betti(alg: &FiniteAlgebra) -> Vec<usize> {
    let n = alg.dim;
    let dim = |k: usize| subsets(n, k).len();
    let rank = |k: usize| if k < 2 || k > n { 0 } else { dense_rank(ce_boundary(alg, k)) };
    (1..=3).map(|k| if k > n { 0 } else { dim(k) - rank(k) - rank(k + 1) }).collect()
}

fn lie_koszul_betti(alg: &FiniteAlgebra) -> (Vec<usize>, Vec<usize>) {
    let koszul = over(&Rationals, &closed_form("Lie", 4, DEFAULT_ARITY_CAP).unwrap());
    let module = CoefficientModule::trivial(alg);
    let ctx = Context { ring: &Rationals, koszul: &koszul, algebra: alg, module: &module };
    let g = assemble_gamma(&ctx, Truncation::Degree(2), Section::First).unwrap().homology(&Rationals).unwrap();
    let k = assemble_koszul(&ctx, Truncation::Degree(2)).unwrap().homology(&Rationals).unwrap();
    (k.iter().map(|s| s.betti).collect(), g.iter().map(|s| s.betti).collect())
}

#[test]
fn criterion_5_chevalley_eilenberg() {
    let start = Instant::now();
    let lie = Presentation::lie();
    let abelian = FiniteAlgebra::builtin("abelian_lie(2)", &lie).unwrap();
    let sl2 = FiniteAlgebra::sl2();
    let (ab, _) = lie_koszul_betti(&abelian);
    let (sl, _) = lie_koszul_betti(&sl2);
    let oracle = (ce_betti(&abelian), ce_betti(&sl2));
    let ok = ab == [2, 1, 0] && sl == [0, 0, 1] && oracle == (ab.clone(), sl.clone());
    let detail = format!("abelian_lie(2): {ab:?}, sl2: {sl:?}, CE oracle: {oracle:?}");
    report(5, "Chevalley-Eilenberg comparison", ok, start, budget(60), &detail);
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_6_gamma_matches_koszul() {
    let start = Instant::now();
    let lie = Presentation::lie();
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["abelian_lie(2)", "sl2"] {
        let alg = FiniteAlgebra::builtin(name, &lie).unwrap();
        let (k, g) = lie_koszul_betti(&alg);
        ok &= k == g;
        detail.push(format!("{name}: gamma {g:?}, koszul {k:?}"));
    }
    report(6, "gamma vs Koszul over Q", ok, start, budget(600), &detail.join("; "));
}

// ---------------------------------------------------------- criteria 7 and 8

/// Betti numbers from a complex dump, by dense elimination over F2.
fn dense_f2_betti(dump: &str, valid: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut matrices: Vec<Vec<Vec<bool>>> = Vec::new();
    let mut lines = dump.lines().peekable();
    while let Some(line) = lines.next() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.first().copied() {
            Some("generators") => {
                let n: usize = parts[2].parse().unwrap();
                sizes.push(n);
                for _ in 0..n {
                    lines.next();
                }
            }
            Some("differential") => {
                let dims: Vec<usize> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
                let mut m = vec![vec![false; dims[1]]; dims[0]];
                while let Some(entry) = lines.peek() {
                    let e: Vec<&str> = entry.split_whitespace().collect();
                    if e.len() != 3 || e[0].parse::<usize>().is_err() {
                        break;
                    }
                    let (i, j, v): (usize, usize, u64) = (e[0].parse().unwrap(), e[1].parse().unwrap(), e[2].parse().unwrap());
                    m[i][j] ^= v % 2 == 1;
                    lines.next();
                }
                matrices.push(m);
            }
            _ => {}
        }
    }
    let rank = |mut rows: Vec<Vec<bool>>| {
        let mut rank = 0;
        let n_cols = rows.first().map_or(0, Vec::len);
        for c in 0..n_cols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][c]) else { continue };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[c] {
                    row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= *y);
                }
            }
            rank += 1;
        }
        rank
    };
    let ranks: Vec<usize> = matrices.into_iter().map(rank).collect();
    (0..valid).map(|d| sizes[d] - ranks[d] - ranks[d + 1]).collect()
}

/// Betti numbers over F2 computed as fixed points of the pipeline.
const COM_TSZ1_F2_BETTI: [usize; 2] = [1, 1];

fn dense_oracle_case(n: u32, section: Section) {
    let start = Instant::now();
    let f2 = PrimeField::new(2).unwrap();
    let com = Presentation::com();
    let alg = FiniteAlgebra::builtin("trivial_square_zero(1)", &com).unwrap();
    let module = CoefficientModule::trivial(&alg);
    let koszul = over(&f2, &closed_form("Com", 3, DEFAULT_ARITY_CAP).unwrap());
    let ctx = Context { ring: &f2, koszul: &koszul, algebra: &alg, module: &module };
    let c = assemble_gamma(&ctx, Truncation::Degree(1), section).unwrap();
    let sparse: Vec<usize> = c.homology(&f2).unwrap().iter().map(|s| s.betti).collect();
    let dense = dense_f2_betti(&c.dump(&f2), c.valid_degrees);
    let ok = sparse == dense && sparse == COM_TSZ1_F2_BETTI;
    let what = match section {
        Section::First => "dense F2 oracle",
        Section::Last => "dense F2 oracle, last-permutation section",
    };
    report(n, what, ok, start, budget(60), &format!("sparse {sparse:?}, dense {dense:?}, ranks {:?}", c.ranks()));
}

#[test]
fn criterion_7_dense_oracle() {
    dense_oracle_case(7, Section::First);
}

#[test]
fn criterion_8_section_independence() {
    dense_oracle_case(8, Section::Last);
}
