//! Binary trees with labelled leaves, and quotients of free operads on
//! binary generators by an ideal generated in arity 3.
//!
//! A tree stands for the composite of its vertices read in preorder. Moving
//! a subtree past vertices costs the Koszul sign of their degrees, which is
//! the only source of signs here.

use std::collections::HashMap;

use crate::linalg::{Echelon, Rat, Rref, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(usize),
    Node(usize, Box<Tree>, Box<Tree>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryGen {
    pub name: String,
    pub degree: i64,
    /// `s . g = swap * g` for the transposition of the two inputs.
    pub swap: i64,
}

impl Tree {
    pub fn node(g: usize, l: Tree, r: Tree) -> Tree {
        Tree::Node(g, Box::new(l), Box::new(r))
    }

    /// Left comb `g(g(g(l0, l1), l2), ...)` on the given leaf labels.
    pub fn left_comb(g: usize, leaves: &[usize]) -> Tree {
        let mut t = Tree::Leaf(leaves[0]);
        for &l in &leaves[1..] {
            t = Tree::node(g, t, Tree::Leaf(l));
        }
        t
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, l, r) => l.arity() + r.arity(),
        }
    }

    pub fn min_leaf(&self) -> usize {
        match self {
            Tree::Leaf(x) => *x,
            Tree::Node(_, l, r) => l.min_leaf().min(r.min_leaf()),
        }
    }

    /// Leaf labels in planar order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Leaf(x) => out.push(*x),
            Tree::Node(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn degree(&self, gens: &[BinaryGen]) -> i64 {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(g, l, r) => gens[*g].degree + l.degree(gens) + r.degree(gens),
        }
    }

    pub fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(x) => Tree::Leaf(f(*x)),
            Tree::Node(g, l, r) => Tree::node(*g, l.relabel(f), r.relabel(f)),
        }
    }

    /// Puts children in order of their minimal leaf, returning the sign.
    pub fn canonical(&self, gens: &[BinaryGen]) -> (Tree, i64) {
        match self {
            Tree::Leaf(x) => (Tree::Leaf(*x), 1),
            Tree::Node(g, l, r) => {
                let (l, sl) = l.canonical(gens);
                let (r, sr) = r.canonical(gens);
                let mut sign = sl * sr;
                if l.min_leaf() < r.min_leaf() {
                    (Tree::node(*g, l, r), sign)
                } else {
                    sign *= gens[*g].swap;
                    if (l.degree(gens) * r.degree(gens)).rem_euclid(2) == 1 {
                        sign = -sign;
                    }
                    (Tree::node(*g, r, l), sign)
                }
            }
        }
    }

    /// Total degree of the vertices that come after leaf `leaf` in preorder.
    fn degree_after_leaf(&self, leaf: usize, gens: &[BinaryGen]) -> i64 {
        fn walk(t: &Tree, leaf: usize, gens: &[BinaryGen], seen: &mut bool, acc: &mut i64) {
            match t {
                Tree::Leaf(x) => {
                    if *x == leaf {
                        *seen = true;
                    }
                }
                Tree::Node(g, l, r) => {
                    if *seen {
                        *acc += gens[*g].degree;
                    }
                    walk(l, leaf, gens, seen, acc);
                    walk(r, leaf, gens, seen, acc);
                }
            }
        }
        let (mut seen, mut acc) = (false, 0);
        walk(self, leaf, gens, &mut seen, &mut acc);
        acc
    }

    /// `self ∘_i other` with standard relabelling; not canonicalized.
    pub fn compose(&self, i: usize, other: &Tree, gens: &[BinaryGen]) -> (Tree, i64) {
        let n = other.arity();
        let sign = if (other.degree(gens) * self.degree_after_leaf(i, gens)).rem_euclid(2) == 1 {
            -1
        } else {
            1
        };
        let shifted = other.relabel(&|x| x + i);
        fn subst(t: &Tree, i: usize, n: usize, s: &Tree) -> Tree {
            match t {
                Tree::Leaf(x) if *x == i => s.clone(),
                Tree::Leaf(x) if *x > i => Tree::Leaf(x + n - 1),
                Tree::Leaf(x) => Tree::Leaf(*x),
                Tree::Node(g, l, r) => Tree::node(*g, subst(l, i, n, s), subst(r, i, n, s)),
            }
        }
        (subst(self, i, n, &shifted), sign)
    }
}

/// All canonical trees whose leaves are exactly `labels` (sorted).
pub fn canonical_trees(labels: &[usize], ngens: usize) -> Vec<Tree> {
    if labels.len() == 1 {
        return vec![Tree::Leaf(labels[0])];
    }
    let rest = &labels[1..];
    let mut out = Vec::new();
    // the left child contains the minimal label plus a proper subset of the rest
    for mask in 0u64..(1u64 << rest.len()) - 1 {
        let mut left = vec![labels[0]];
        let mut right = Vec::new();
        for (k, &x) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        let lt = canonical_trees(&left, ngens);
        let rt = canonical_trees(&right, ngens);
        for g in 0..ngens {
            for l in &lt {
                for r in &rt {
                    out.push(Tree::node(g, l.clone(), r.clone()));
                }
            }
        }
    }
    out.sort();
    out
}

/// Linear combination of trees, keyed by canonical form.
pub type TreeComb = Vec<(Tree, Rat)>;

/// The quotient of the free operad in one arity.
#[derive(Clone, Debug)]
pub struct QuotientArity {
    pub trees: Vec<Tree>,
    pub index: HashMap<Tree, usize>,
    pub ideal: Rref,
    /// Tree indices of the quotient basis (non-pivots of the ideal).
    pub basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

impl QuotientArity {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_tree(&self, k: usize) -> &Tree {
        &self.trees[self.basis[k]]
    }

    /// Coordinates over all canonical trees of a combination of arbitrary trees.
    pub fn tree_vector(&self, comb: &[(Tree, Rat)], gens: &[BinaryGen]) -> SparseVec {
        let mut v = SparseVec::new();
        for (t, c) in comb {
            let (t, s) = t.canonical(gens);
            let j = self.index[&t];
            crate::linalg::add_entry(&mut v, j, if s < 0 { -c.clone() } else { c.clone() });
        }
        v
    }

    /// Coordinates in the quotient basis.
    pub fn reduce(&self, comb: &[(Tree, Rat)], gens: &[BinaryGen]) -> SparseVec {
        let v = self.ideal.reduce(&self.tree_vector(comb, gens));
        v.into_iter()
            .map(|(j, c)| (self.basis_pos[&j], c))
            .collect()
    }
}

/// Free operad on binary generators modulo the ideal generated by
/// `relations` (combinations of arity-3 trees), tabulated up to `max_arity`.
#[derive(Clone, Debug)]
pub struct TreeQuotient {
    pub gens: Vec<BinaryGen>,
    pub arities: Vec<QuotientArity>,
}

impl TreeQuotient {
    pub fn build(gens: Vec<BinaryGen>, relations: &[TreeComb], max_arity: usize) -> Self {
        let mut arities: Vec<QuotientArity> = Vec::new();
        let mut prev_ideal: Vec<SparseVec> = Vec::new();
        for n in 1..=max_arity {
            let labels: Vec<usize> = (0..n).collect();
            let trees = canonical_trees(&labels, gens.len());
            let index: HashMap<Tree, usize> =
                trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            let to_vec = |comb: &[(Tree, Rat)]| -> SparseVec {
                let mut v = SparseVec::new();
                for (t, c) in comb {
                    let (t, s) = t.canonical(&gens);
                    crate::linalg::add_entry(&mut v, index[&t], if s < 0 { -c.clone() } else { c.clone() });
                }
                v
            };
            let mut seeds: Vec<SparseVec> = Vec::new();
            if n == 3 {
                seeds.extend(relations.iter().map(|r| to_vec(r)));
            }
            if n > 3 {
                let prev = &arities[n - 2];
                for x in &prev_ideal {
                    for g in 0..gens.len() {
                        let gt = Tree::node(g, Tree::Leaf(0), Tree::Leaf(1));
                        for j in 0..n - 1 {
                            let comb: TreeComb = x
                                .iter()
                                .map(|(&k, c)| {
                                    let (t, s) = prev.trees[k].compose(j, &gt, &gens);
                                    (t, if s < 0 { -c.clone() } else { c.clone() })
                                })
                                .collect();
                            seeds.push(to_vec(&comb));
                        }
                        for j in 0..2 {
                            let comb: TreeComb = x
                                .iter()
                                .map(|(&k, c)| {
                                    let (t, s) = gt.compose(j, &prev.trees[k], &gens);
                                    (t, if s < 0 { -c.clone() } else { c.clone() })
                                })
                                .collect();
                            seeds.push(to_vec(&comb));
                        }
                    }
                }
            }
            // close under the symmetric group
            let mut ech = Echelon::new(trees.len());
            let mut work = seeds;
            while let Some(v) = work.pop() {
                if v.is_empty() || !ech.insert(&v) {
                    continue;
                }
                for i in 0..n.saturating_sub(1) {
                    let comb: TreeComb = v
                        .iter()
                        .map(|(&k, c)| {
                            let t = trees[k].relabel(&|x| {
                                if x == i {
                                    i + 1
                                } else if x == i + 1 {
                                    i
                                } else {
                                    x
                                }
                            });
                            (t, c.clone())
                        })
                        .collect();
                    work.push(to_vec(&comb));
                }
            }
            let ideal = ech.finish();
            prev_ideal = ideal.rows().to_vec();
            let basis = ideal.non_pivots();
            let basis_pos = basis.iter().enumerate().map(|(p, &j)| (j, p)).collect();
            arities.push(QuotientArity {
                trees,
                index,
                ideal,
                basis,
                basis_pos,
            });
        }
        TreeQuotient { gens, arities }
    }

    /// Quotient in arity `n` (n >= 1).
    pub fn arity(&self, n: usize) -> &QuotientArity {
        &self.arities[n - 1]
    }

    pub fn max_arity(&self) -> usize {
        self.arities.len()
    }

    /// Dimension of the quotient in arity `n`, split by degree.
    pub fn dims_by_degree(&self, n: usize) -> std::collections::BTreeMap<i64, usize> {
        let a = self.arity(n);
        let mut out = std::collections::BTreeMap::new();
        for &j in &a.basis {
            *out.entry(a.trees[j].degree(&self.gens)).or_insert(0) += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lie_gens() -> Vec<BinaryGen> {
        vec![BinaryGen {
            name: "b".into(),
            degree: 0,
            swap: -1,
        }]
    }

    #[test]
    fn canonical_tree_counts() {
        // (2n-3)!! unordered binary trees with n labelled leaves
        for (n, want) in [(1, 1), (2, 1), (3, 3), (4, 15), (5, 105)] {
            let labels: Vec<usize> = (0..n).collect();
            assert_eq!(canonical_trees(&labels, 1).len(), want);
        }
        assert_eq!(canonical_trees(&[0, 1, 2], 2).len(), 12);
    }

    #[test]
    fn antisymmetric_swap_sign() {
        let g = lie_gens();
        let t = Tree::node(0, Tree::Leaf(1), Tree::Leaf(0));
        let (c, s) = t.canonical(&g);
        assert_eq!(c, Tree::node(0, Tree::Leaf(0), Tree::Leaf(1)));
        assert_eq!(s, -1);
    }

    #[test]
    fn composition_relabels() {
        let g = lie_gens();
        let b = Tree::node(0, Tree::Leaf(0), Tree::Leaf(1));
        let (t, s) = b.compose(1, &b, &g);
        assert_eq!(s, 1);
        assert_eq!(t.leaves(), vec![0, 1, 2]);
        assert_eq!(t, Tree::node(0, Tree::Leaf(0), Tree::node(0, Tree::Leaf(1), Tree::Leaf(2))));
    }

    #[test]
    fn odd_generator_composition_sign() {
        let g = vec![BinaryGen {
            name: "l".into(),
            degree: 1,
            swap: 1,
        }];
        let l = Tree::node(0, Tree::Leaf(0), Tree::Leaf(1));
        // inserting at leaf 0 passes no vertex; the root precedes its leaves
        assert_eq!(l.compose(0, &l, &g).1, 1);
        // in l(l(0,1),2) every vertex precedes the leaves in preorder
        let ll = l.compose(0, &l, &g).0;
        assert_eq!(ll.compose(0, &l, &g).1, 1);
        assert_eq!(ll.compose(2, &l, &g).1, 1);
        // in l(0,l(1,2)) the inner vertex comes after leaf 0 but not after leaf 1
        let lr = l.compose(1, &l, &g).0;
        assert_eq!(lr, Tree::node(0, Tree::Leaf(0), Tree::node(0, Tree::Leaf(1), Tree::Leaf(2))));
        assert_eq!(lr.compose(0, &l, &g).1, -1);
        assert_eq!(lr.compose(1, &l, &g).1, 1);
    }
}
