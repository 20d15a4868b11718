use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::Convention;
use crate::error::{Error, Result};
use crate::linalg::{axpy, Rat, RatMatrix, SparseVec};

use super::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unitality {
    /// `P(0) = k` in degree 0.
    Unitary,
    /// `P(0) = 0`.
    Reduced,
}

/// Lower bound `base + slope * n` on the degrees of `P(n)` for arities past
/// the stored bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeFloor {
    pub base: i64,
    pub slope: i64,
}

impl DegreeFloor {
    pub fn at(&self, n: usize) -> i64 {
        self.base + self.slope * n as i64
    }

    /// The floor `(1-n)(1+r) + 1` implied by r-tameness.
    pub fn tame(r: usize) -> Self {
        let r = r as i64;
        DegreeFloor {
            base: r + 2,
            slope: -(r + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpIndex {
    pub arity: usize,
    pub index: usize,
}

impl OpIndex {
    pub fn new(arity: usize, index: usize) -> Self {
        OpIndex { arity, index }
    }
}

/// Basis, symmetric action and differential of one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityTable {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    /// `transpositions[i]` is the action of the transposition of inputs `i, i+1`.
    pub transpositions: Vec<RatMatrix>,
    pub differential: RatMatrix,
}

impl ArityTable {
    pub fn empty(n: usize) -> Self {
        ArityTable {
            labels: Vec::new(),
            degrees: Vec::new(),
            transpositions: vec![RatMatrix::zeros(0, 0); n.saturating_sub(1)],
            differential: RatMatrix::zeros(0, 0),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Presentation of every basis element as a composite of binary generators.
/// Used to build structure tables from binary ones and to evaluate operad
/// morphisms given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    /// Arity-2 basis indices of the generators.
    pub generators: Vec<usize>,
    /// `trees[n][a]`; `None` only for the unit of `P(0)`.
    pub trees: Vec<Vec<Option<Tree>>>,
}

/// An operad truncated at `arity_bound`, stored as explicit tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadTable {
    pub name: String,
    pub convention: Convention,
    pub unitality: Unitality,
    pub arity_bound: usize,
    pub degree_floor: Option<DegreeFloor>,
    pub arities: Vec<ArityTable>,
    /// Keyed by `(m, n)`; entry `(i * dim P(m) + a) * dim P(n) + b` is `e_a ∘_i e_b`.
    pub comps: BTreeMap<(usize, usize), Vec<SparseVec>>,
    pub presentation: Option<Presentation>,
}

impl OperadTable {
    pub fn arity(&self, n: usize) -> Result<&ArityTable> {
        self.arities.get(n).ok_or(Error::ArityOverflow {
            arity: n,
            bound: self.arity_bound,
        })
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.arity(n)?.dim())
    }

    pub fn degree(&self, op: OpIndex) -> i64 {
        self.arities[op.arity].degrees[op.index]
    }

    pub fn label(&self, op: OpIndex) -> &str {
        &self.arities[op.arity].labels[op.index]
    }

    pub fn find_label(&self, n: usize, label: &str) -> Option<usize> {
        self.arities.get(n)?.labels.iter().position(|l| l == label)
    }

    pub fn basis_of_degree(&self, n: usize, q: i64) -> Vec<usize> {
        match self.arities.get(n) {
            Some(a) => (0..a.dim()).filter(|&i| a.degrees[i] == q).collect(),
            None => Vec::new(),
        }
    }

    /// Distinct degrees present in arity `n`.
    pub fn degrees_in_arity(&self, n: usize) -> Vec<i64> {
        let mut ds: Vec<i64> = self.arities.get(n).map_or(Vec::new(), |a| a.degrees.clone());
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Smallest degree that may occur in arity `n`: exact within the bound,
    /// the declared floor beyond it (`None` if unknown or empty).
    pub fn min_degree(&self, n: usize) -> Option<i64> {
        if n <= self.arity_bound {
            self.arities[n].degrees.iter().copied().min()
        } else {
            self.degree_floor.map(|f| f.at(n))
        }
    }

    pub fn id(&self) -> OpIndex {
        OpIndex::new(1, 0)
    }

    /// The unit of `P(0)` for unitary operads.
    pub fn unit_op(&self) -> Option<OpIndex> {
        match self.unitality {
            Unitality::Unitary => Some(OpIndex::new(0, 0)),
            Unitality::Reduced => None,
        }
    }

    pub fn has_zero_differential(&self) -> bool {
        self.arities.iter().all(|a| a.differential.is_zero())
    }

    /// Action of the transposition of inputs `i` and `i + 1`.
    pub fn transpose(&self, n: usize, i: usize, v: &SparseVec) -> SparseVec {
        self.arities[n].transpositions[i].mul_vec(v)
    }

    /// Left action of `sigma` (input `j` is relabelled `sigma[j]`).
    pub fn act(&self, n: usize, sigma: &[usize], v: &SparseVec) -> SparseVec {
        let mut sigma = sigma.to_vec();
        let mut v = v.clone();
        // sigma = (sigma s_i) s_i whenever sigma has a descent at i
        while let Some(i) = (0..n.saturating_sub(1)).find(|&i| sigma[i] > sigma[i + 1]) {
            v = self.transpose(n, i, &v);
            sigma.swap(i, i + 1);
        }
        v
    }

    pub fn act_basis(&self, n: usize, sigma: &[usize], a: usize) -> SparseVec {
        self.act(n, sigma, &crate::linalg::unit_vec(a))
    }

    /// `e_a ∘_i e_b` with `e_a ∈ P(m)`, `e_b ∈ P(n)`.
    pub fn compose_basis(&self, m: usize, i: usize, a: usize, n: usize, b: usize) -> Result<&SparseVec> {
        if m + n - 1 > self.arity_bound || n > self.arity_bound || m > self.arity_bound {
            return Err(Error::ArityOverflow {
                arity: m + n - 1,
                bound: self.arity_bound,
            });
        }
        let table = self.comps.get(&(m, n)).ok_or_else(|| {
            Error::MissingStructure(format!("{}: composition table P({m}) o P({n})", self.name))
        })?;
        let (dm, dn) = (self.arities[m].dim(), self.arities[n].dim());
        Ok(&table[(i * dm + a) * dn + b])
    }

    pub fn compose(&self, m: usize, i: usize, x: &SparseVec, n: usize, y: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (&a, ca) in x {
            for (&b, cb) in y {
                let e = self.compose_basis(m, i, a, n, b)?;
                axpy(&mut out, &(ca * cb), e);
            }
        }
        Ok(out)
    }

    /// `γ(x; y_1, ..., y_l)` as left-to-right iterated partial compositions.
    pub fn gamma(&self, l: usize, x: &SparseVec, args: &[(usize, SparseVec)]) -> Result<SparseVec> {
        assert_eq!(args.len(), l);
        let mut cur = x.clone();
        let mut ar = l;
        let mut pos = 0;
        for (n, y) in args {
            cur = self.compose(ar, pos, &cur, *n, y)?;
            ar = ar + n - 1;
            pos += n;
        }
        Ok(cur)
    }

    pub fn differential(&self, n: usize, v: &SparseVec) -> SparseVec {
        self.arities[n].differential.mul_vec(v)
    }

    /// Composite of generators along a planar tree with labelled leaves;
    /// `images[g]` is the value assigned to generator `g` (in arity 2).
    pub fn eval_tree(&self, tree: &Tree, images: &[SparseVec]) -> Result<SparseVec> {
        let n = tree.arity();
        let planar = self.eval_planar(tree, images)?;
        Ok(self.act(n, &tree.leaves(), &planar))
    }

    fn eval_planar(&self, tree: &Tree, images: &[SparseVec]) -> Result<SparseVec> {
        match tree {
            Tree::Leaf(_) => Ok(crate::linalg::unit_vec(0)),
            Tree::Node(g, l, r) => {
                let (a, b) = (l.arity(), r.arity());
                let vl = self.eval_planar(l, images)?;
                let vr = self.eval_planar(r, images)?;
                let t = self.compose(2, 0, &images[*g], a, &vl)?;
                self.compose(a + 1, a, &t, b, &vr)
            }
        }
    }

    /// Every `(n, q)` with `2 <= n` and `P(n)^q != 0`, within the bound.
    pub fn arity_degrees(&self) -> Vec<ArityDegree> {
        let mut out = Vec::new();
        for n in 2..=self.arity_bound {
            for q in self.degrees_in_arity(n) {
                out.push(ArityDegree { n, q });
            }
        }
        out
    }
}

/// Arity and degree of an operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArityDegree {
    pub n: usize,
    pub q: i64,
}

/// `q > (r+1)(1-n)`; only defined for `n >= 2`.
pub fn element_tame(ad: ArityDegree, r: usize) -> Result<bool> {
    if ad.n < 2 {
        return Err(Error::Precondition(format!(
            "tameness only constrains arities >= 2, got arity {}",
            ad.n
        )));
    }
    Ok(ad.q > (r as i64 + 1) * (1 - ad.n as i64))
}

pub fn compose_arity_degree(a: ArityDegree, b: ArityDegree) -> ArityDegree {
    assert!(a.n >= 1, "outer operation must have positive arity");
    ArityDegree {
        n: a.n + b.n - 1,
        q: a.q + b.q,
    }
}

/// Smallest `r` making a single arity-degree `r`-tame.
pub fn min_tame_level(ad: ArityDegree) -> usize {
    if ad.q >= 0 {
        0
    } else {
        ((-ad.q) as usize) / (ad.n - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TamenessReport {
    pub index: Option<usize>,
    /// Arity-degrees that force the index (those tame at `index` but not below).
    pub binding: Vec<ArityDegree>,
    pub arity_bound: usize,
}

pub fn tameness_index(p: &OperadTable, cap: usize) -> TamenessReport {
    let ads = p.arity_degrees();
    let r = ads.iter().map(|&ad| min_tame_level(ad)).max().unwrap_or(0);
    let binding = ads.iter().copied().filter(|&ad| min_tame_level(ad) == r).collect();
    TamenessReport {
        index: (r <= cap).then_some(r),
        binding,
        arity_bound: p.arity_bound,
    }
}


pub(crate) fn signed(c: &Rat, s: i64) -> Rat {
    if s < 0 {
        -c.clone()
    } else {
        c.clone()
    }
}
