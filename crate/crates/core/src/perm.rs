//! Permutations, table bijections, the contraction maps on bijections and the
//! homogeneous bar construction of the symmetric groups.
//!
//! Labels in the public API are 1-based, as in one-line notation. Internally
//! a [`Perm`] stores 0-based images.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of `{1..r}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(r: usize) -> Self {
        Perm { images: (0..r as u8).collect() }
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let r = images.len();
        if r > u8::MAX as usize {
            return Err(Error::Invalid(format!("permutation size {r} too large")));
        }
        let mut seen = vec![false; r];
        for &x in images {
            if x == 0 || x > r || seen[x - 1] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
            seen[x - 1] = true;
        }
        Ok(Perm { images: images.iter().map(|&x| (x - 1) as u8).collect() })
    }

    /// From 0-based images; caller guarantees bijectivity.
    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x as usize)
        });
        Perm { images }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based label `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    pub(crate) fn images0(&self) -> &[u8] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.size()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Self {
        assert_eq!(self.size(), other.size(), "composing permutations of different sizes");
        Perm { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.size()];
        let mut sign = 1;
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Adjacent transpositions `k_1, …, k_m` (1-based, `t_k` swaps `k` and
    /// `k+1`) with `self = t_{k_m} ∘ … ∘ t_{k_1}`.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut v = self.images.clone();
        let mut word = Vec::new();
        // bubble sort on positions: v ∘ t_k swaps entries k, k+1
        loop {
            let Some(k) = (0..v.len().saturating_sub(1)).find(|&k| v[k] > v[k + 1]) else {
                break;
            };
            v.swap(k, k + 1);
            word.push(k + 1);
        }
        word
    }

    /// The adjacent transposition `t_k` of size `r`.
    pub fn transposition(r: usize, k: usize) -> Perm {
        let mut images: Vec<u8> = (0..r as u8).collect();
        images.swap(k - 1, k);
        Perm { images }
    }

    /// All permutations of size `r`, in lexicographic order of one-line notation.
    pub fn all(r: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..r as u8).collect();
        loop {
            out.push(Perm { images: cur.clone() });
            // next permutation
            let Some(i) = (0..r.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..r).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images: Vec<usize> = s
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad permutation {s:?}"))))
            .collect::<Result<_>>()?;
        Perm::from_one_line(&images)
    }
}

/// A bijection between two explicitly ordered label sets, stored as a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bijection {
    pub domain: Vec<u32>,
    pub codomain: Vec<u32>,
    /// `table[k]` is the image of `domain[k]`.
    pub table: Vec<u32>,
}

impl Bijection {
    pub fn new(domain: Vec<u32>, codomain: Vec<u32>, table: Vec<u32>) -> Result<Self> {
        if domain.len() != codomain.len() || domain.len() != table.len() {
            return Err(Error::DimensionMismatch("bijection sizes differ".into()));
        }
        let mut hit = vec![false; codomain.len()];
        for y in &table {
            let pos = codomain
                .iter()
                .position(|c| c == y)
                .ok_or_else(|| Error::BadLabel(format!("{y} not in codomain")))?;
            if hit[pos] {
                return Err(Error::Invalid("table is not injective".into()));
            }
            hit[pos] = true;
        }
        Ok(Bijection { domain, codomain, table })
    }

    /// The permutation read through the order-preserving identifications of
    /// domain and codomain with `{1..r}`.
    pub fn as_perm(&self) -> Perm {
        let images = self
            .table
            .iter()
            .map(|y| self.codomain.iter().position(|c| c == y).unwrap() as u8)
            .collect();
        Perm::from_zero_based(images)
    }
}

fn check_label(r: usize, x: usize) -> Result<()> {
    if x == 0 || x > r {
        return Err(Error::BadLabel(format!("label {x} outside 1..={r}")));
    }
    Ok(())
}

/// Rank of codomain label `y` once `removed` is deleted (0-based result, labels 1-based).
#[inline]
fn rank_without(y: usize, removed: usize) -> u8 {
    (if y > removed { y - 2 } else { y - 1 }) as u8
}

/// The pair contraction: the later-preimage column of `{i, j}` is deleted, the
/// other one's image becomes the dummy `e`, and `e` takes the place of `i` in
/// the codomain order.
pub fn contract_pair(w: &Perm, i: usize, j: usize) -> Result<Perm> {
    let r = w.size();
    check_label(r, i)?;
    check_label(r, j)?;
    if i == j || r < 2 {
        return Err(Error::BadLabel(format!("pair ({i},{j}) is not a pair of distinct labels")));
    }
    let inv = w.inverse();
    let (pi, pj) = (inv.apply(i), inv.apply(j));
    let deleted = pi.max(pj);
    let kept = pi.min(pj);
    let images = (1..=r)
        .filter(|&x| x != deleted)
        .map(|x| {
            let y = if x == kept { i } else { w.apply(x) };
            rank_without(y, j)
        })
        .collect();
    Ok(Perm::from_zero_based(images))
}

/// Deletes the column whose image is `i`.
pub fn contract_single(w: &Perm, i: usize) -> Result<Perm> {
    let r = w.size();
    check_label(r, i)?;
    if r < 2 {
        return Err(Error::BadLabel("cannot contract a permutation of size 1".into()));
    }
    let images = (1..=r)
        .map(|x| w.apply(x))
        .filter(|&y| y != i)
        .map(|y| rank_without(y, i))
        .collect();
    Ok(Perm::from_zero_based(images))
}

/// `σ̄`: the bijection induced by `σ` from `{1..r} ∖ {removed}` to
/// `{1..r} ∖ {σ(removed)}`, read through the induced orders.
pub fn induced(s: &Perm, removed: usize) -> Result<Perm> {
    check_label(s.size(), removed)?;
    let target = s.apply(removed);
    let mut images = vec![0u8; s.size() - 1];
    for y in (1..=s.size()).filter(|&y| y != removed) {
        images[rank_without(y, removed) as usize] = rank_without(s.apply(y), target);
    }
    Ok(Perm::from_zero_based(images))
}

/// `σ̄ · c^e_{i,j}(w) == c^e_{σ(i),σ(j)}(σ · w)`.
pub fn pair_equivariant(w: &Perm, s: &Perm, i: usize, j: usize) -> Result<bool> {
    let lhs = induced(s, j)?.compose(&contract_pair(w, i, j)?);
    let rhs = contract_pair(&s.compose(w), s.apply(i), s.apply(j))?;
    Ok(lhs == rhs)
}

/// `σ̄ · c_{∅,i}(w) == c_{∅,σ(i)}(σ · w)`.
pub fn single_equivariant(w: &Perm, s: &Perm, i: usize) -> Result<bool> {
    let lhs = induced(s, i)?.compose(&contract_single(w, i)?);
    let rhs = contract_single(&s.compose(w), s.apply(i))?;
    Ok(lhs == rhs)
}

/// `c_{∅,i}(w) == c^y_{y,i}(w)` for every `y` whose preimage precedes `i`'s.
pub fn single_is_pair(w: &Perm, i: usize) -> Result<bool> {
    let single = contract_single(w, i)?;
    let inv = w.inverse();
    for y in (1..=w.size()).filter(|&y| inv.apply(y) < inv.apply(i)) {
        if contract_pair(w, y, i)? != single {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which contraction to apply componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contraction {
    Pair(usize, usize),
    Single(usize),
}

/// A `(t+1)`-tuple of permutations of the same size: a basis element of the
/// degree-`t` part of the homogeneous bar construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarTuple {
    ws: Vec<Perm>,
}

impl BarTuple {
    pub fn new(ws: Vec<Perm>) -> Result<Self> {
        let Some(first) = ws.first() else {
            return Err(Error::Invalid("bar tuple needs at least one permutation".into()));
        };
        if ws.iter().any(|w| w.size() != first.size()) {
            return Err(Error::DimensionMismatch("bar tuple permutations differ in size".into()));
        }
        Ok(BarTuple { ws })
    }

    pub fn arity(&self) -> usize {
        self.ws[0].size()
    }

    pub fn degree(&self) -> usize {
        self.ws.len() - 1
    }

    pub fn perms(&self) -> &[Perm] {
        &self.ws
    }

    pub fn contract(&self, mode: Contraction) -> Result<BarTuple> {
        let ws = self
            .ws
            .iter()
            .map(|w| match mode {
                Contraction::Pair(i, j) => contract_pair(w, i, j),
                Contraction::Single(i) => contract_single(w, i),
            })
            .collect::<Result<_>>()?;
        Ok(BarTuple { ws })
    }

    /// `Σ_i (-1)^i (w_0, …, ŵ_i, …, w_t)`; empty in degree 0.
    pub fn differential(&self) -> Vec<(i64, BarTuple)> {
        if self.degree() == 0 {
            return Vec::new();
        }
        (0..self.ws.len())
            .map(|i| {
                let mut ws = self.ws.clone();
                ws.remove(i);
                (if i % 2 == 0 { 1 } else { -1 }, BarTuple { ws })
            })
            .collect()
    }

    /// Diagonal left action `(s w_0, …, s w_t)`.
    pub fn left_act(&self, s: &Perm) -> Result<BarTuple> {
        if s.size() != self.arity() {
            return Err(Error::DimensionMismatch(format!(
                "acting by Σ_{} on a tuple of arity {}",
                s.size(),
                self.arity()
            )));
        }
        Ok(BarTuple { ws: self.ws.iter().map(|w| s.compose(w)).collect() })
    }

    /// Splits off `w_0`: returns `(w_0, w_0^{-1} · self)`.
    pub fn normalize(&self) -> (Perm, BarTuple) {
        self.normalize_at(0)
    }

    /// Splits off `w_t`: returns `(w_t, w_t^{-1} · self)`.
    pub fn normalize_last(&self) -> (Perm, BarTuple) {
        self.normalize_at(self.ws.len() - 1)
    }

    fn normalize_at(&self, k: usize) -> (Perm, BarTuple) {
        let s = self.ws[k].clone();
        let inv = s.inverse();
        let ws = self.ws.iter().map(|w| inv.compose(w)).collect();
        (s, BarTuple { ws })
    }
}

impl fmt::Display for BarTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ws.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl fmt::Debug for BarTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for BarTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BarTuple::new(s.split('|').map(str::parse).collect::<Result<_>>()?)
    }
}
