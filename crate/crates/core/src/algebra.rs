//! Finite-dimensional algebras over a binary operad, given by integer
//! structure constants per generator, and coefficient modules.
//!
//! A right module `E` is given by `act_g(x, a) = x · μ_g(◇, a)`. Longer
//! operations act root first: `x · μ_g(μ_h(◇, b), a) = act_h(act_g(x, a), b)`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeff::ring::Ring;
use crate::coeff::SVec;
use crate::error::{Error, Result};
use crate::operad::tree::Tree;
use crate::operad::Presentation;

/// Structure constants `μ_g(e_a, e_b) = Σ_c mult[g][a][b][c] e_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub name: String,
    pub dim: usize,
    pub gen_dim: usize,
    mult: Vec<SVec<i64>>,
}

/// Right module structure `act_g(e_x, e_a) = Σ_y act[g][x][a][y] e_y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientModule {
    pub name: String,
    pub dim: usize,
    pub algebra_dim: usize,
    pub gen_dim: usize,
    act: Vec<SVec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    dim: usize,
    mult: Vec<Vec<Vec<Vec<i64>>>>,
}

#[derive(Serialize, Deserialize)]
struct ModuleFile {
    name: String,
    dim: usize,
    algebra_dim: usize,
    act: Vec<Vec<Vec<Vec<i64>>>>,
}

fn sparse(v: &[i64]) -> SVec<i64> {
    v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect()
}

fn dense(v: &SVec<i64>, n: usize) -> Vec<i64> {
    let mut d = vec![0; n];
    for (i, c) in v {
        d[*i] = *c;
    }
    d
}

/// Unpacks `t[g][x][y]` (each a dense vector of length `out`) into flat sparse storage.
fn flatten(t: &[Vec<Vec<Vec<i64>>>], gen_dim: usize, nx: usize, ny: usize, out: usize) -> Result<Vec<SVec<i64>>> {
    let bad = || Error::DimensionMismatch(format!("expected a {gen_dim}x{nx}x{ny}x{out} array"));
    if t.len() != gen_dim {
        return Err(bad());
    }
    let mut flat = Vec::with_capacity(gen_dim * nx * ny);
    for g in t {
        if g.len() != nx {
            return Err(bad());
        }
        for row in g {
            if row.len() != ny {
                return Err(bad());
            }
            for v in row {
                if v.len() != out {
                    return Err(bad());
                }
                flat.push(sparse(v));
            }
        }
    }
    Ok(flat)
}

fn unflatten(flat: &[SVec<i64>], gen_dim: usize, nx: usize, ny: usize, out: usize) -> Vec<Vec<Vec<Vec<i64>>>> {
    (0..gen_dim)
        .map(|g| {
            (0..nx)
                .map(|x| (0..ny).map(|y| dense(&flat[(g * nx + x) * ny + y], out)).collect())
                .collect()
        })
        .collect()
}

impl FiniteAlgebra {
    /// From dense arrays `mult[g][a][b]`, each of length `dim`.
    pub fn new(name: &str, dim: usize, mult: &[Vec<Vec<Vec<i64>>>]) -> Result<Self> {
        let gen_dim = mult.len();
        Ok(FiniteAlgebra { name: name.to_string(), dim, gen_dim, mult: flatten(mult, gen_dim, dim, dim, dim)? })
    }

    /// Builds all generator products from a rule for each generator.
    pub fn from_fn(name: &str, dim: usize, gen_dim: usize, f: impl Fn(usize, usize, usize) -> SVec<i64>) -> Self {
        let mut mult = Vec::with_capacity(gen_dim * dim * dim);
        for g in 0..gen_dim {
            for a in 0..dim {
                for b in 0..dim {
                    mult.push(f(g, a, b).into_iter().filter(|(_, c)| *c != 0).collect());
                }
            }
        }
        FiniteAlgebra { name: name.to_string(), dim, gen_dim, mult }
    }

    pub fn product(&self, g: usize, a: usize, b: usize) -> &SVec<i64> {
        &self.mult[(g * self.dim + a) * self.dim + b]
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(Vec::is_empty)
    }

    /// The algebra with zero multiplication.
    pub fn trivial_square_zero(pres: &Presentation, n: usize) -> Self {
        Self::from_fn(&format!("trivial_square_zero({n})"), n, pres.gen_dim, |_, _, _| Vec::new())
    }

    pub fn abelian_lie(n: usize) -> Self {
        Self::from_fn(&format!("abelian_lie({n})"), n, 1, |_, _, _| Vec::new())
    }

    /// Basis `h, e, f` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        Self::from_fn("sl2", 3, 1, |_, a, b| match (a, b) {
            (0, 1) => vec![(1, 2)],
            (1, 0) => vec![(1, -2)],
            (0, 2) => vec![(2, -2)],
            (2, 0) => vec![(2, 2)],
            (1, 2) => vec![(0, 1)],
            (2, 1) => vec![(0, -1)],
            _ => Vec::new(),
        })
    }

    /// `x, x², …, x^k` with `x^i x^j = x^{i+j}`, zero past `k`. For `Ass`
    /// the opposite product is filled in as well.
    pub fn nilpotent_truncated_polynomial(pres: &Presentation, k: usize) -> Self {
        Self::from_fn(&format!("nilpotent_truncated_polynomial({k})"), k, pres.gen_dim, |_, a, b| {
            // basis index i holds x^{i+1}
            if a + b + 2 <= k {
                vec![(a + b + 1, 1)]
            } else {
                Vec::new()
            }
        })
    }

    /// Builtin by name, e.g. `sl2` or `trivial_square_zero(2)`.
    pub fn builtin(name: &str, pres: &Presentation) -> Result<Self> {
        let (base, arg) = split_call(name)?;
        let need_arg = || arg.ok_or_else(|| Error::Invalid(format!("{base} needs a size, e.g. {base}(2)")));
        match base {
            "trivial_square_zero" => Ok(Self::trivial_square_zero(pres, need_arg()?)),
            "abelian_lie" => Ok(Self::abelian_lie(need_arg()?)),
            "sl2" => Ok(Self::sl2()),
            "nilpotent_truncated_polynomial" => Ok(Self::nilpotent_truncated_polynomial(pres, need_arg()?)),
            _ => Err(Error::UnknownName(format!("algebra {name:?}"))),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let f: AlgebraFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(&f.name, f.dim, &f.mult)
    }

    pub fn to_toml(&self) -> String {
        let f = AlgebraFile {
            name: self.name.clone(),
            dim: self.dim,
            mult: unflatten(&self.mult, self.gen_dim, self.dim, self.dim, self.dim),
        };
        toml::to_string(&f).expect("algebra serialises")
    }

    /// Builtin name or file path.
    pub fn resolve(spec: &str, pres: &Presentation) -> Result<Self> {
        match Self::builtin(spec, pres) {
            Ok(a) => Ok(a),
            Err(_) if Path::new(spec).exists() => {
                let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
                Self::from_toml(&text)
            }
            Err(e) => Err(e),
        }
    }
}

fn split_call(name: &str) -> Result<(&str, Option<usize>)> {
    let name = name.trim();
    match name.split_once('(') {
        None => Ok((name, None)),
        Some((base, rest)) => {
            let n = rest
                .strip_suffix(')')
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad builtin name {name:?}")))?;
            Ok((base.trim(), Some(n)))
        }
    }
}

impl CoefficientModule {
    pub fn new(name: &str, dim: usize, algebra_dim: usize, act: &[Vec<Vec<Vec<i64>>>]) -> Result<Self> {
        let gen_dim = act.len();
        Ok(CoefficientModule {
            name: name.to_string(),
            dim,
            algebra_dim,
            gen_dim,
            act: flatten(act, gen_dim, dim, algebra_dim, dim)?,
        })
    }

    pub fn act(&self, g: usize, x: usize, a: usize) -> &SVec<i64> {
        &self.act[(g * self.dim + x) * self.algebra_dim + a]
    }

    pub fn is_zero(&self) -> bool {
        self.act.iter().all(Vec::is_empty)
    }

    /// `E = 𝕂` with zero action.
    pub fn trivial(alg: &FiniteAlgebra) -> Self {
        CoefficientModule {
            name: "trivial".into(),
            dim: 1,
            algebra_dim: alg.dim,
            gen_dim: alg.gen_dim,
            act: vec![Vec::new(); alg.gen_dim * alg.dim],
        }
    }

    /// `E = A` with `act_g(x, a) = μ_g(a, x)`.
    pub fn adjoint(alg: &FiniteAlgebra) -> Self {
        let n = alg.dim;
        let mut act = Vec::with_capacity(alg.gen_dim * n * n);
        for g in 0..alg.gen_dim {
            for x in 0..n {
                for a in 0..n {
                    act.push(alg.product(g, a, x).clone());
                }
            }
        }
        CoefficientModule { name: "adjoint".into(), dim: n, algebra_dim: n, gen_dim: alg.gen_dim, act }
    }

    /// The left module `A` with `μ_g(◇, a) · f = μ_g(f, a)`, stored in the
    /// same layout as a right module; see [`CoefficientModule::dual`].
    pub fn adjoint_left(alg: &FiniteAlgebra) -> Self {
        let n = alg.dim;
        let mut act = Vec::with_capacity(alg.gen_dim * n * n);
        for g in 0..alg.gen_dim {
            for x in 0..n {
                for a in 0..n {
                    act.push(alg.product(g, x, a).clone());
                }
            }
        }
        CoefficientModule { name: "adjoint".into(), dim: n, algebra_dim: n, gen_dim: alg.gen_dim, act }
    }

    /// The dual module: transposes every action matrix.
    pub fn dual(&self) -> Self {
        let n = self.dim;
        let mut act = vec![Vec::new(); self.act.len()];
        for g in 0..self.gen_dim {
            for a in 0..self.algebra_dim {
                for x in 0..n {
                    for (y, c) in self.act(g, x, a) {
                        act[(g * n + *y) * self.algebra_dim + a].push((x, *c));
                    }
                }
            }
        }
        for v in &mut act {
            v.sort_unstable();
        }
        CoefficientModule { name: format!("{}*", self.name), act, ..self.clone() }
    }

    pub fn builtin(name: &str, alg: &FiniteAlgebra) -> Result<Self> {
        match name.trim() {
            "trivial" => Ok(Self::trivial(alg)),
            "adjoint" => Ok(Self::adjoint(alg)),
            _ => Err(Error::UnknownName(format!("coefficients {name:?}"))),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let f: ModuleFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(&f.name, f.dim, f.algebra_dim, &f.act)
    }

    pub fn to_toml(&self) -> String {
        let f = ModuleFile {
            name: self.name.clone(),
            dim: self.dim,
            algebra_dim: self.algebra_dim,
            act: unflatten(&self.act, self.gen_dim, self.dim, self.algebra_dim, self.dim),
        };
        toml::to_string(&f).expect("module serialises")
    }

    pub fn resolve(spec: &str, alg: &FiniteAlgebra) -> Result<Self> {
        match Self::builtin(spec, alg) {
            Ok(m) => Ok(m),
            Err(_) if Path::new(spec).exists() => {
                let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
                Self::from_toml(&text)
            }
            Err(e) => Err(e),
        }
    }
}

/// Which identity a residual violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    /// `μ_g(a, b) = Σ σ[g'][g] μ_{g'}(b, a)`.
    Symmetry { gen: usize },
    /// A relation of the presentation; `hole` is the leaf holding `◇`.
    Relation { index: usize, hole: Option<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual<E> {
    pub check: Check,
    /// Basis indices at the inputs (the hole, if any, carries the module index).
    pub inputs: Vec<usize>,
    pub value: SVec<E>,
}

fn to_svec<R: Ring>(ring: &R, v: Vec<R::El>) -> SVec<R::El> {
    v.into_iter().enumerate().filter(|(_, x)| !ring.is_zero(x)).collect()
}

fn axpy_int<R: Ring>(ring: &R, acc: &mut [R::El], coef: &R::El, v: &SVec<i64>) {
    for (i, c) in v {
        ring.add_mul_assign(&mut acc[*i], coef, &ring.from_i64(*c));
    }
}

fn mul_vec<R: Ring>(ring: &R, alg: &FiniteAlgebra, g: usize, x: &[R::El], y: &[R::El]) -> Vec<R::El> {
    let mut out = vec![ring.zero(); alg.dim];
    for (a, xa) in x.iter().enumerate().filter(|(_, v)| !ring.is_zero(v)) {
        for (b, yb) in y.iter().enumerate().filter(|(_, v)| !ring.is_zero(v)) {
            axpy_int(ring, &mut out, &ring.mul(xa, yb), alg.product(g, a, b));
        }
    }
    out
}

fn act_vec<R: Ring>(ring: &R, m: &CoefficientModule, g: usize, x: &[R::El], a: &[R::El]) -> Vec<R::El> {
    let mut out = vec![ring.zero(); m.dim];
    for (xi, xv) in x.iter().enumerate().filter(|(_, v)| !ring.is_zero(v)) {
        for (ai, av) in a.iter().enumerate().filter(|(_, v)| !ring.is_zero(v)) {
            axpy_int(ring, &mut out, &ring.mul(xv, av), m.act(g, xi, ai));
        }
    }
    out
}

fn eval_tree<R: Ring>(ring: &R, alg: &FiniteAlgebra, t: &Tree, args: &[usize]) -> Vec<R::El> {
    match t {
        Tree::Leaf(x) => {
            let mut v = vec![ring.zero(); alg.dim];
            v[args[*x as usize - 1]] = ring.one();
            v
        }
        Tree::Node(g, ch) => {
            let l = eval_tree(ring, alg, &ch[0], args);
            let r = eval_tree(ring, alg, &ch[1], args);
            mul_vec(ring, alg, *g, &l, &r)
        }
    }
}

fn contains_leaf(t: &Tree, x: u8) -> bool {
    t.leaves().contains(&x)
}

/// `x · T` for a binary tree `T` with `◇` at leaf `hole`, root first.
fn eval_module<R: Ring>(
    ring: &R,
    pres: &Presentation,
    alg: &FiniteAlgebra,
    m: &CoefficientModule,
    t: &Tree,
    hole: u8,
    x: Vec<R::El>,
    args: &[usize],
) -> Vec<R::El> {
    match t {
        Tree::Leaf(_) => x,
        Tree::Node(g, ch) => {
            if contains_leaf(&ch[0], hole) {
                let other = eval_tree(ring, alg, &ch[1], args);
                let y = act_vec(ring, m, *g, &x, &other);
                eval_module(ring, pres, alg, m, &ch[0], hole, y, args)
            } else {
                let other = eval_tree(ring, alg, &ch[0], args);
                let mut y = vec![ring.zero(); m.dim];
                for g2 in 0..pres.gen_dim {
                    let s = pres.sigma(g2, *g);
                    if s != 0 {
                        let part = act_vec(ring, m, g2, &x, &other);
                        for (acc, p) in y.iter_mut().zip(part) {
                            ring.add_mul_assign(acc, &ring.from_i64(s), &p);
                        }
                    }
                }
                eval_module(ring, pres, alg, m, &ch[1], hole, y, args)
            }
        }
    }
}

/// Nonzero residuals of the symmetry and relation identities on basis inputs.
pub fn check_algebra<R: Ring>(pres: &Presentation, alg: &FiniteAlgebra, ring: &R) -> Result<Vec<Residual<R::El>>> {
    if alg.gen_dim != pres.gen_dim {
        return Err(Error::DimensionMismatch(format!(
            "algebra has {} generators, presentation {}",
            alg.gen_dim, pres.gen_dim
        )));
    }
    let n = alg.dim;
    let mut out = Vec::new();
    for g in 0..pres.gen_dim {
        for a in 0..n {
            for b in 0..n {
                let mut v = vec![ring.zero(); n];
                axpy_int(ring, &mut v, &ring.one(), alg.product(g, a, b));
                for g2 in 0..pres.gen_dim {
                    axpy_int(ring, &mut v, &ring.from_i64(-pres.sigma(g2, g)), alg.product(g2, b, a));
                }
                let value = to_svec(ring, v);
                if !value.is_empty() {
                    out.push(Residual { check: Check::Symmetry { gen: g }, inputs: vec![a, b], value });
                }
            }
        }
    }
    for (index, rel) in pres.relation_trees().iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let args = [a, b, c];
                    let mut v = vec![ring.zero(); n];
                    for (coef, t) in rel {
                        let e = eval_tree(ring, alg, t, &args);
                        for (acc, x) in v.iter_mut().zip(e) {
                            ring.add_mul_assign(acc, &ring.from_i64(*coef), &x);
                        }
                    }
                    let value = to_svec(ring, v);
                    if !value.is_empty() {
                        out.push(Residual { check: Check::Relation { index, hole: None }, inputs: args.to_vec(), value });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Nonzero residuals of the module identities: every relation with `◇` at each
/// input, evaluated root first, on all basis inputs.
pub fn check_module<R: Ring>(
    pres: &Presentation,
    alg: &FiniteAlgebra,
    m: &CoefficientModule,
    ring: &R,
) -> Result<Vec<Residual<R::El>>> {
    if m.algebra_dim != alg.dim || m.gen_dim != pres.gen_dim || alg.gen_dim != pres.gen_dim {
        return Err(Error::DimensionMismatch("module, algebra and presentation do not fit together".into()));
    }
    let (n, e) = (alg.dim, m.dim);
    let mut out = Vec::new();
    for (index, rel) in pres.relation_trees().iter().enumerate() {
        for hole in 1..=3u8 {
            for x in 0..e {
                for a in 0..n {
                    for b in 0..n {
                        // args indexed by leaf; the hole's slot is ignored
                        let mut args = [0usize; 3];
                        let others: Vec<usize> = (0..3).filter(|&s| s != hole as usize - 1).collect();
                        args[others[0]] = a;
                        args[others[1]] = b;
                        let mut v = vec![ring.zero(); e];
                        for (coef, t) in rel {
                            let mut xv = vec![ring.zero(); e];
                            xv[x] = ring.one();
                            let r = eval_module(ring, pres, alg, m, t, hole, xv, &args);
                            for (acc, y) in v.iter_mut().zip(r) {
                                ring.add_mul_assign(acc, &ring.from_i64(*coef), &y);
                            }
                        }
                        let value = to_svec(ring, v);
                        if !value.is_empty() {
                            let mut inputs = args.to_vec();
                            inputs[hole as usize - 1] = x;
                            out.push(Residual {
                                check: Check::Relation { index, hole: Some(hole as usize) },
                                inputs,
                                value,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ring::{Integers, PrimeField, Rationals};

    #[test]
    fn builtins_pass_their_checks() {
        let lie = Presentation::lie();
        let com = Presentation::com();
        let ass = Presentation::ass();
        let f2 = PrimeField::new(2).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        let cases = [
            (&lie, FiniteAlgebra::sl2()),
            (&lie, FiniteAlgebra::abelian_lie(2)),
            (&com, FiniteAlgebra::trivial_square_zero(&com, 2)),
            (&com, FiniteAlgebra::nilpotent_truncated_polynomial(&com, 3)),
            (&ass, FiniteAlgebra::nilpotent_truncated_polynomial(&ass, 3)),
        ];
        for (p, a) in &cases {
            assert!(check_algebra(p, a, &Integers).unwrap().is_empty(), "{}", a.name);
            assert!(check_algebra(p, a, &Rationals).unwrap().is_empty());
            assert!(check_algebra(p, a, &f2).unwrap().is_empty());
            assert!(check_algebra(p, a, &f3).unwrap().is_empty());
            for m in [CoefficientModule::trivial(a), CoefficientModule::adjoint(a)] {
                assert!(check_module(p, a, &m, &Integers).unwrap().is_empty(), "{} {}", a.name, m.name);
            }
            let left = CoefficientModule::adjoint_left(a).dual();
            assert!(check_module(p, a, &left, &Integers).unwrap().is_empty(), "{} dual", a.name);
        }
    }

    #[test]
    fn failures_are_reported() {
        let com = Presentation::com();
        // x·x = y, x·y = x: not associative
        let bad = FiniteAlgebra::from_fn("bad", 2, 1, |_, a, b| match (a, b) {
            (0, 0) => vec![(1, 1)],
            (0, 1) | (1, 0) => vec![(0, 1)],
            _ => Vec::new(),
        });
        assert!(!check_algebra(&com, &bad, &Integers).unwrap().is_empty());
        let lie = Presentation::lie();
        let sl2 = FiniteAlgebra::sl2();
        // left-first adjoint is not a right module under root-first evaluation
        let wrong = CoefficientModule::adjoint_left(&sl2);
        assert!(!check_module(&lie, &sl2, &wrong, &Integers).unwrap().is_empty());
    }

    #[test]
    fn names_and_files() {
        let lie = Presentation::lie();
        let a = FiniteAlgebra::builtin("trivial_square_zero(2)", &lie).unwrap();
        assert_eq!(a.dim, 2);
        assert!(FiniteAlgebra::builtin("trivial_square_zero", &lie).is_err());
        assert!(FiniteAlgebra::builtin("nope", &lie).is_err());
        let s = FiniteAlgebra::sl2();
        assert_eq!(FiniteAlgebra::from_toml(&s.to_toml()).unwrap(), s);
        let m = CoefficientModule::adjoint(&s);
        assert_eq!(CoefficientModule::from_toml(&m.to_toml()).unwrap(), m);
        assert_eq!(m.dual().dual(), CoefficientModule { name: "adjoint**".into(), ..m.clone() });
        let p = FiniteAlgebra::nilpotent_truncated_polynomial(&Presentation::com(), 2);
        assert_eq!(p.product(0, 0, 0), &vec![(1, 1)]);
        assert!(p.product(0, 0, 1).is_empty());
    }
}
