//! Binary quadratic operads: presentations, free tree bases and quadratic
//! quotients with their symmetric group actions and partial compositions.

mod component;
pub mod tree;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeff::linalg;
use crate::coeff::ring::{Rationals, Ring};
use crate::coeff::SparseMatrix;
use crate::error::{Error, Result};
use tree::{binary_trees, canonicalize, sort_trees, LabelAction, Tree};

pub use component::Operad;

pub const DEFAULT_ARITY_CAP: usize = 6;

/// The arity cap, overridable through `GAMMAHOM_ARITY_CAP`.
pub fn arity_cap() -> usize {
    std::env::var("GAMMAHOM_ARITY_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ARITY_CAP)
}

pub fn check_cap(arity: usize, cap: usize) -> Result<()> {
    if arity > cap {
        return Err(Error::ArityCap { arity, cap });
    }
    Ok(())
}

/// Generators `μ_0, …, μ_{n-1}` of arity two, the transposition action
/// `μ_g(a, b) = Σ_{g'} σ[g'][g] μ_{g'}(b, a)`, and relations given as integer
/// vectors over the canonical arity-3 free basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    pub gen_dim: usize,
    pub sigma2_action: Vec<Vec<i64>>,
    pub relations: Vec<Vec<i64>>,
}

/// The transposition action on generators, used to canonicalise free trees.
pub struct SigmaAction<'a, R: Ring> {
    pub ring: &'a R,
    pub sigma: &'a [Vec<i64>],
}

impl<R: Ring> LabelAction<R> for SigmaAction<'_, R> {
    fn relabel(&self, k: usize, label: usize, perm: &[u8]) -> Vec<(usize, R::El)> {
        assert_eq!(k, 2, "free trees are binary");
        if perm == [0, 1] {
            return vec![(label, self.ring.one())];
        }
        (0..self.sigma.len())
            .filter(|&g| self.sigma[g][label] != 0)
            .map(|g| (g, self.ring.from_i64(self.sigma[g][label])))
            .collect()
    }
}

/// Canonical basis of the arity-`r` component of the free operad on `gen_dim`
/// binary generators. Arity one is the unit.
pub fn free_basis(gen_dim: usize, r: usize, cap: usize) -> Result<Vec<Tree>> {
    check_cap(r, cap)?;
    if r == 0 {
        return Ok(Vec::new());
    }
    let leaves: Vec<u8> = (1..=r as u8).collect();
    let mut trees = binary_trees(&leaves, gen_dim);
    sort_trees(&mut trees);
    Ok(trees)
}

fn node(g: usize, l: Tree, r: Tree) -> Tree {
    Tree::Node(g, vec![l, r])
}

fn leaf(x: u8) -> Tree {
    Tree::Leaf(x)
}

impl Presentation {
    pub fn new(name: &str, gen_dim: usize, sigma2_action: Vec<Vec<i64>>, relations: Vec<Vec<i64>>) -> Result<Self> {
        let p = Presentation { name: name.to_string(), gen_dim, sigma2_action, relations };
        p.validate()?;
        Ok(p)
    }

    /// Builds a presentation from relations written as arbitrary arity-3 trees.
    pub fn from_tree_relations(
        name: &str,
        gen_dim: usize,
        sigma2_action: Vec<Vec<i64>>,
        relations: &[Vec<(i64, Tree)>],
    ) -> Result<Self> {
        let basis = free_basis(gen_dim, 3, 3)?;
        let index: std::collections::HashMap<&Tree, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let ring = crate::coeff::Integers;
        let act = SigmaAction { ring: &ring, sigma: &sigma2_action };
        let mut vectors = Vec::new();
        for rel in relations {
            let mut v = vec![0i64; basis.len()];
            for (c, t) in rel {
                for (d, ct) in canonicalize(&ring, &act, t, false) {
                    let i = *index
                        .get(&ct)
                        .ok_or_else(|| Error::Invalid(format!("{t} is not an arity-3 binary tree")))?;
                    v[i] += *c * d as i64;
                }
            }
            vectors.push(v);
        }
        Presentation::new(name, gen_dim, sigma2_action, vectors)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.gen_dim;
        if n == 0 {
            return Err(Error::Invalid("presentation needs at least one generator".into()));
        }
        if self.sigma2_action.len() != n || self.sigma2_action.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("sigma2_action must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let sq: i64 = (0..n).map(|k| self.sigma2_action[i][k] * self.sigma2_action[k][j]).sum();
                if sq != i64::from(i == j) {
                    return Err(Error::Invalid("sigma2_action does not square to the identity".into()));
                }
            }
        }
        let len = 3 * n * n;
        if let Some(bad) = self.relations.iter().find(|r| r.len() != len) {
            return Err(Error::DimensionMismatch(format!(
                "relation of length {} (arity-3 free basis has {len} elements)",
                bad.len()
            )));
        }
        let q = Rationals;
        let cols = self
            .relations
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| (i, q.from_i64(*c)))
                    .collect()
            })
            .collect();
        let m = SparseMatrix::from_columns(len, cols)?;
        if linalg::rank(&q, &m) != self.relations.len() {
            return Err(Error::Invalid("relations are linearly dependent".into()));
        }
        Ok(())
    }

    /// Commutative associative: one symmetric generator, associativity.
    pub fn com() -> Self {
        let rel = vec![(1, node(0, node(0, leaf(1), leaf(2)), leaf(3))), (-1, node(0, leaf(1), node(0, leaf(2), leaf(3))))];
        Self::from_tree_relations("Com", 1, vec![vec![1]], &[rel]).expect("builtin Com")
    }

    /// Lie: one antisymmetric generator, Jacobi.
    pub fn lie() -> Self {
        let rel = vec![
            (1, node(0, node(0, leaf(1), leaf(2)), leaf(3))),
            (1, node(0, node(0, leaf(2), leaf(3)), leaf(1))),
            (1, node(0, node(0, leaf(3), leaf(1)), leaf(2))),
        ];
        Self::from_tree_relations("Lie", 1, vec![vec![-1]], &[rel]).expect("builtin Lie")
    }

    /// Associative: generators `μ_0(a,b) = ab` and `μ_1(a,b) = ba`, associativity.
    pub fn ass() -> Self {
        let rel = vec![(1, node(0, node(0, leaf(1), leaf(2)), leaf(3))), (-1, node(0, leaf(1), node(0, leaf(2), leaf(3))))];
        Self::from_tree_relations("Ass", 2, vec![vec![0, 1], vec![1, 0]], &[rel]).expect("builtin Ass")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "com" => Ok(Self::com()),
            "lie" => Ok(Self::lie()),
            "ass" => Ok(Self::ass()),
            _ => Err(Error::UnknownName(format!("operad {name:?}"))),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let p: Presentation = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("presentation serialises")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Builtin name or presentation file.
    pub fn resolve(spec: &str) -> Result<Self> {
        match Self::builtin(spec) {
            Ok(p) => Ok(p),
            Err(_) if Path::new(spec).exists() => Self::load(Path::new(spec)),
            Err(e) => Err(e),
        }
    }

    pub fn is_builtin(&self) -> bool {
        Self::builtin(&self.name).is_ok_and(|b| b == *self)
    }

    pub fn sigma(&self, to: usize, from: usize) -> i64 {
        self.sigma2_action[to][from]
    }

    pub fn relation_trees(&self) -> Vec<Vec<(i64, Tree)>> {
        let basis = free_basis(self.gen_dim, 3, 3).expect("arity 3");
        self.relations
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&basis)
                    .filter(|(c, _)| **c != 0)
                    .map(|(c, t)| (*c, t.clone()))
                    .collect()
            })
            .collect()
    }
}
