//! Rooted trees with labelled leaves and labelled internal vertices.
//!
//! A vertex with children `[C_1, …, C_k]` and label `p` stands for the
//! composite `p(C_1, …, C_k)`. A tree is canonical when the children of every
//! vertex are ordered by their minimal leaf; reordering children relabels the
//! inputs of the vertex label, which is why canonicalisation produces a linear
//! combination in general.

use std::fmt;

use crate::coeff::ring::Ring;
use crate::coeff::SVec;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf(u8),
    Node(usize, Vec<Tree>),
}

/// How vertex labels transform when their inputs are renamed.
pub trait LabelAction<R: Ring> {
    /// Label `label` of a `k`-ary vertex after renaming its input `x` to
    /// `perm[x]` (both 0-based), as a combination of labels.
    fn relabel(&self, k: usize, label: usize, perm: &[u8]) -> SVec<R::El>;
}

/// Sort key: shape (preorder arities), then vertex labels, then leaf word.
pub type TreeKey = (Vec<u8>, Vec<usize>, Vec<u8>);

impl Tree {
    pub fn min_leaf(&self) -> u8 {
        match self {
            Tree::Leaf(x) => *x,
            Tree::Node(_, ch) => ch[0].min_leaf_any(),
        }
    }

    // children may be unsorted before canonicalisation
    fn min_leaf_any(&self) -> u8 {
        match self {
            Tree::Leaf(x) => *x,
            Tree::Node(_, ch) => ch.iter().map(Tree::min_leaf_any).min().unwrap(),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, ch) => ch.iter().map(Tree::n_leaves).sum(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(Tree::n_vertices).sum::<usize>(),
        }
    }

    /// Leaves in planar order.
    pub fn leaves(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Tree::Leaf(x) = t {
                out.push(*x);
            }
        });
        out
    }

    /// Preorder traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Tree)) {
        f(self);
        if let Tree::Node(_, ch) = self {
            for c in ch {
                c.walk(f);
            }
        }
    }

    pub fn relabel_leaves(&self, f: &impl Fn(u8) -> u8) -> Tree {
        match self {
            Tree::Leaf(x) => Tree::Leaf(f(*x)),
            Tree::Node(l, ch) => Tree::Node(*l, ch.iter().map(|c| c.relabel_leaves(f)).collect()),
        }
    }

    /// Replaces leaf `x` by `sub(x)` everywhere.
    pub fn substitute(&self, sub: &impl Fn(u8) -> Tree) -> Tree {
        match self {
            Tree::Leaf(x) => sub(*x),
            Tree::Node(l, ch) => Tree::Node(*l, ch.iter().map(|c| c.substitute(sub)).collect()),
        }
    }

    pub fn at(&self, path: &[usize]) -> &Tree {
        match (path.split_first(), self) {
            (None, _) => self,
            (Some((c, rest)), Tree::Node(_, ch)) => ch[*c].at(rest),
            (Some(_), Tree::Leaf(_)) => panic!("path runs past a leaf"),
        }
    }

    pub fn replace_at(&self, path: &[usize], new: Tree) -> Tree {
        match (path.split_first(), self) {
            (None, _) => new,
            (Some((c, rest)), Tree::Node(l, ch)) => {
                let mut ch = ch.clone();
                ch[*c] = ch[*c].replace_at(rest, new);
                Tree::Node(*l, ch)
            }
            (Some(_), Tree::Leaf(_)) => panic!("path runs past a leaf"),
        }
    }

    /// Paths to all internal vertices, in preorder.
    pub fn vertex_paths(&self) -> Vec<Vec<usize>> {
        fn go(t: &Tree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if let Tree::Node(_, ch) = t {
                out.push(path.clone());
                for (i, c) in ch.iter().enumerate() {
                    path.push(i);
                    go(c, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn sort_key(&self) -> TreeKey {
        let (mut shape, mut labels, mut leaves) = (Vec::new(), Vec::new(), Vec::new());
        self.walk(&mut |t| match t {
            Tree::Leaf(x) => {
                shape.push(0);
                leaves.push(*x);
            }
            Tree::Node(l, ch) => {
                shape.push(ch.len() as u8);
                labels.push(*l);
            }
        });
        (shape, labels, leaves)
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Node(_, ch) => {
                ch.windows(2).all(|w| w[0].min_leaf() < w[1].min_leaf())
                    && ch.iter().all(Tree::is_canonical)
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(x) => write!(f, "{x}"),
            Tree::Node(l, ch) => {
                write!(f, "{l}(")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sign of permuting blocks of the given parities into the order `order`
/// (`order[p]` is the old index of the block placed at position `p`).
pub fn block_sign(parities: &[bool], order: &[usize]) -> i64 {
    let mut sign = 1;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && parities[order[a]] && parities[order[b]] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Rewrites `tree` as a combination of canonical trees.
///
/// When `odd` is set, every vertex has degree one and reordering children
/// picks up the Koszul sign of the corresponding block permutation.
pub fn canonicalize<R: Ring>(
    ring: &R,
    action: &impl LabelAction<R>,
    tree: &Tree,
    odd: bool,
) -> Vec<(R::El, Tree)> {
    match tree {
        Tree::Leaf(_) => vec![(ring.one(), tree.clone())],
        Tree::Node(label, children) => {
            let mut partial: Vec<(R::El, Vec<Tree>)> = vec![(ring.one(), Vec::new())];
            for c in children {
                let opts = canonicalize(ring, action, c, odd);
                let mut next = Vec::with_capacity(partial.len() * opts.len());
                for (coef, prefix) in &partial {
                    for (oc, ot) in &opts {
                        let mut v = prefix.clone();
                        v.push(ot.clone());
                        next.push((ring.mul(coef, oc), v));
                    }
                }
                partial = next;
            }
            let k = children.len();
            let mut out = Vec::new();
            for (coef, ch) in partial {
                let mut order: Vec<usize> = (0..k).collect();
                order.sort_by_key(|&x| ch[x].min_leaf());
                if order.iter().enumerate().all(|(p, &x)| p == x) {
                    out.push((coef, Tree::Node(*label, ch)));
                    continue;
                }
                let mut inv = vec![0u8; k];
                for (p, &x) in order.iter().enumerate() {
                    inv[x] = p as u8;
                }
                let mut coef = coef;
                if odd {
                    let parities: Vec<bool> = ch.iter().map(|c| c.n_vertices() % 2 == 1).collect();
                    if block_sign(&parities, &order) < 0 {
                        coef = ring.neg(&coef);
                    }
                }
                let sorted: Vec<Tree> = order.iter().map(|&x| ch[x].clone()).collect();
                for (l, c) in action.relabel(k, *label, &inv) {
                    out.push((ring.mul(&coef, &c), Tree::Node(l, sorted.clone())));
                }
            }
            out
        }
    }
}

/// Canonical fully binary trees on the given sorted leaves, with every vertex
/// labelled from `0..n_labels`.
pub fn binary_trees(leaves: &[u8], n_labels: usize) -> Vec<Tree> {
    if leaves.len() == 1 {
        return vec![Tree::Leaf(leaves[0])];
    }
    let mut out = Vec::new();
    let rest = &leaves[1..];
    // the block containing the first leaf goes left
    for mask in 0..(1u32 << rest.len()) - 1 {
        let mut left = vec![leaves[0]];
        let mut right = Vec::new();
        for (b, &x) in rest.iter().enumerate() {
            if mask >> b & 1 == 1 {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        let ls = binary_trees(&left, n_labels);
        let rs = binary_trees(&right, n_labels);
        for l in &ls {
            for r in &rs {
                for g in 0..n_labels {
                    out.push(Tree::Node(g, vec![l.clone(), r.clone()]));
                }
            }
        }
    }
    out
}

/// Set partitions of `items` into blocks, each block sorted, blocks ordered by
/// their first element.
pub fn set_partitions(items: &[u8]) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    fn go(items: &[u8], i: usize, blocks: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>) {
        if i == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[i]);
            go(items, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[i]]);
        go(items, i + 1, blocks, out);
        blocks.pop();
    }
    go(items, 0, &mut Vec::new(), &mut out);
    out
}

/// Canonical trees on the sorted leaves whose vertices have at least two
/// children; a `k`-ary vertex is labelled from `0..labels(k)`.
pub fn reduced_trees(leaves: &[u8], labels: &impl Fn(usize) -> usize) -> Vec<Tree> {
    if leaves.len() == 1 {
        return vec![Tree::Leaf(leaves[0])];
    }
    let mut out = Vec::new();
    for blocks in set_partitions(leaves) {
        let k = blocks.len();
        if k < 2 || labels(k) == 0 {
            continue;
        }
        let options: Vec<Vec<Tree>> = blocks.iter().map(|b| reduced_trees(b, labels)).collect();
        let mut combos: Vec<Vec<Tree>> = vec![Vec::new()];
        for opts in &options {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |o| {
                        let mut c = c.clone();
                        c.push(o.clone());
                        c
                    })
                })
                .collect();
        }
        for ch in combos {
            for l in 0..labels(k) {
                out.push(Tree::Node(l, ch.clone()));
            }
        }
    }
    out
}

pub fn sort_trees(trees: &mut [Tree]) {
    trees.sort_by_cached_key(Tree::sort_key);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ring::Integers;

    struct Sign;
    impl LabelAction<Integers> for Sign {
        fn relabel(&self, _k: usize, label: usize, perm: &[u8]) -> SVec<i128> {
            let p = crate::perm::Perm::from_zero_based(perm.to_vec());
            vec![(label, p.sign() as i128)]
        }
    }

    fn leaf(x: u8) -> Tree {
        Tree::Leaf(x)
    }

    #[test]
    fn binary_counts() {
        // (2r-3)!!
        for (r, n) in [(1, 1), (2, 1), (3, 3), (4, 15), (5, 105)] {
            let leaves: Vec<u8> = (1..=r).collect();
            assert_eq!(binary_trees(&leaves, 1).len(), n);
        }
        assert_eq!(binary_trees(&[1, 2, 3], 2).len(), 12);
        assert!(binary_trees(&[1, 2, 3, 4], 1).iter().all(Tree::is_canonical));
    }

    #[test]
    fn reduced_counts() {
        // total phylogenetic trees: 1, 1, 4, 26, 236
        for (r, n) in [(1, 1), (2, 1), (3, 4), (4, 26), (5, 236)] {
            let leaves: Vec<u8> = (1..=r).collect();
            assert_eq!(reduced_trees(&leaves, &|_| 1).len(), n);
        }
    }

    #[test]
    fn canonicalize_swaps_with_sign() {
        let t = Tree::Node(0, vec![Tree::Node(0, vec![leaf(2), leaf(3)]), leaf(1)]);
        let c = canonicalize(&Integers, &Sign, &t, false);
        assert_eq!(c, vec![(-1, Tree::Node(0, vec![leaf(1), Tree::Node(0, vec![leaf(2), leaf(3)])]))]);
        let t = Tree::Node(0, vec![Tree::Node(0, vec![leaf(3), leaf(4)]), Tree::Node(0, vec![leaf(1), leaf(2)])]);
        // odd blocks of one vertex each: extra sign
        let c = canonicalize(&Integers, &Sign, &t, true);
        assert_eq!(c[0].0, 1);
        assert!(c[0].1.is_canonical());
    }

    #[test]
    fn display_and_key() {
        let t = Tree::Node(1, vec![leaf(1), Tree::Node(0, vec![leaf(2), leaf(3)])]);
        assert_eq!(t.to_string(), "1(1,0(2,3))");
        assert_eq!(t.sort_key(), (vec![2, 0, 2, 0, 0], vec![1, 0], vec![1, 2, 3]));
        assert_eq!(t.n_vertices(), 2);
        assert_eq!(t.vertex_paths(), vec![vec![], vec![1]]);
    }
}
