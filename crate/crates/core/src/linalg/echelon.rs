//! Fraction-free elimination over primitive integer rows, normalized to a
//! rational reduced row-echelon form at the end.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{axpy, RatMatrix, SparseVec};
use super::rat::Rat;

type IntRow = BTreeMap<usize, BigInt>;

/// Scale a rational vector to a primitive integer vector with positive leading entry.
fn to_primitive(v: &SparseVec) -> IntRow {
    let mut lcm = BigInt::one();
    for x in v.values() {
        lcm = lcm.lcm(x.denom());
    }
    let mut row: IntRow = v
        .iter()
        .map(|(&j, x)| (j, x.numer() * (&lcm / x.denom())))
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for x in row.values() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    let neg = row.values().next().is_some_and(|x| x.is_negative());
    if g.is_zero() {
        return;
    }
    let g = if neg { -g } else { g };
    if !g.is_one() {
        for x in row.values_mut() {
            *x = &*x / &g;
        }
    }
}

/// Incrementally maintained echelon basis of a subspace of `Q^ncols`.
///
/// Rows are primitive integer vectors whose leading column is their pivot;
/// pivots are distinct. Inserting a vector reduces it against every pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<IntRow>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_int(&self, mut v: IntRow) -> IntRow {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .map(|(&c, _)| c)
                .find(|c| self.pivot_row.contains_key(c));
            let Some(c) = next else { break };
            let row = &self.rows[self.pivot_row[&c]];
            let a = row[&c].clone();
            let b = v[&c].clone();
            let g = a.gcd(&b);
            let (fa, fb) = (&a / &g, &b / &g);
            // v <- fa*v - fb*row
            if !fa.is_one() {
                for x in v.values_mut() {
                    *x *= &fa;
                }
            }
            for (&j, x) in row {
                let e = v.entry(j).or_insert_with(BigInt::zero);
                *e -= &fb * x;
                if e.is_zero() {
                    v.remove(&j);
                }
            }
            make_primitive(&mut v);
            cursor = c + 1;
        }
        v
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        debug_assert!(v.keys().all(|&j| j < self.ncols));
        if v.is_empty() {
            return false;
        }
        let r = self.reduce_int(to_primitive(v));
        match r.keys().next() {
            None => false,
            Some(&p) => {
                self.pivot_row.insert(p, self.rows.len());
                self.rows.push(r);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        v.is_empty() || self.reduce_int(to_primitive(v)).is_empty()
    }

    /// Back-substitute and normalize pivots to one.
    pub fn finish(&self) -> Rref {
        let mut reduced: BTreeMap<usize, IntRow> = BTreeMap::new();
        for (&p, &ri) in self.pivot_row.iter().rev() {
            let mut v = self.rows[ri].clone();
            // eliminate later pivots, already fully reduced
            let later: Vec<usize> = v.keys().copied().filter(|c| *c > p && reduced.contains_key(c)).collect();
            for c in later {
                let Some(b) = v.get(&c).cloned() else { continue };
                let row = &reduced[&c];
                let a = row[&c].clone();
                let g = a.gcd(&b);
                let (fa, fb) = (&a / &g, &b / &g);
                if !fa.is_one() {
                    for x in v.values_mut() {
                        *x *= &fa;
                    }
                }
                for (&j, x) in row {
                    let e = v.entry(j).or_insert_with(BigInt::zero);
                    *e -= &fb * x;
                    if e.is_zero() {
                        v.remove(&j);
                    }
                }
                make_primitive(&mut v);
            }
            reduced.insert(p, v);
        }
        let mut pivots = Vec::new();
        let mut rows = Vec::new();
        for (p, v) in reduced {
            let lead = v[&p].clone();
            let row: SparseVec = v
                .into_iter()
                .map(|(j, x)| (j, Rat::from_parts(x, lead.clone())))
                .collect();
            pivots.push(p);
            rows.push(row);
        }
        Rref {
            ncols: self.ncols,
            pivots,
            rows,
        }
    }
}

/// Reduced row-echelon basis: pivot entries are one and every other row is
/// zero in each pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    ncols: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseVec>,
}

impl Rref {
    pub fn from_vectors<'a>(ncols: usize, vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut e = Echelon::new(ncols);
        for v in vs {
            e.insert(v);
        }
        e.finish()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        let mut it = self.pivots.iter().peekable();
        (0..self.ncols)
            .filter(|j| {
                if it.peek() == Some(&j) {
                    it.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }

    /// `v` minus its component in the span; the result vanishes on every pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (p, row) in self.pivots.iter().zip(&self.rows) {
            if let Some(c) = v.get(p) {
                let c = -c;
                axpy(&mut out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in the row basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rat>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .map(|p| v.get(p).cloned().unwrap_or_default())
                .collect(),
        )
    }
}

/// Reduced row-echelon form and pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let r = Rref::from_vectors(m.cols(), m.row_vecs());
    let mut rows = r.rows().to_vec();
    rows.resize(m.rows(), SparseVec::new());
    (RatMatrix::from_rows(m.cols(), rows), r.pivots().to_vec())
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut e = Echelon::new(m.cols());
    for r in m.row_vecs() {
        e.insert(r);
    }
    e.rank()
}

/// A subspace of `Q^ambient` held by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub ambient: usize,
    pub rref: Rref,
}

impl SubspaceBasis {
    pub fn zero(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            rref: Rref::from_vectors(ambient, []),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let vs: Vec<SparseVec> = (0..ambient).map(super::matrix::unit_vec).collect();
        Self::span(ambient, &vs)
    }

    pub fn span(ambient: usize, vs: &[SparseVec]) -> Self {
        SubspaceBasis {
            ambient,
            rref: Rref::from_vectors(ambient, vs),
        }
    }

    pub fn dim(&self) -> usize {
        self.rref.rank()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        self.rref.rows()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.rref.contains(v)
    }
}

/// Kernel of `m` as a subspace of its column space.
pub fn kernel(m: &RatMatrix) -> SubspaceBasis {
    let r = Rref::from_vectors(m.cols(), m.row_vecs());
    let mut vs = Vec::new();
    for f in r.non_pivots() {
        let mut v = SparseVec::new();
        v.insert(f, Rat::one());
        for (p, row) in r.pivots().iter().zip(r.rows()) {
            if let Some(x) = row.get(&f) {
                v.insert(*p, -x);
            }
        }
        vs.push(v);
    }
    SubspaceBasis::span(m.cols(), &vs)
}

/// Column space of `m`.
pub fn image(m: &RatMatrix) -> SubspaceBasis {
    SubspaceBasis::span(m.rows(), &m.columns())
}

/// Canonical projection onto `Q^ambient / sub` and a section of it.
///
/// Quotient coordinates are the non-pivot coordinates of `sub`'s echelon
/// basis; the section sends the j-th quotient basis vector to the unit
/// vector at the j-th non-pivot coordinate.
pub fn quotient_section(ambient: usize, sub: &SubspaceBasis) -> (RatMatrix, RatMatrix) {
    assert_eq!(ambient, sub.ambient, "subspace lives in a different ambient space");
    let free = sub.rref.non_pivots();
    let q = free.len();
    let pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut proj = RatMatrix::zeros(q, ambient);
    for c in 0..ambient {
        let red = sub.rref.reduce(&super::matrix::unit_vec(c));
        for (j, x) in red {
            proj.set(pos[&j], c, x);
        }
    }
    let mut section = RatMatrix::zeros(ambient, q);
    for (i, &c) in free.iter().enumerate() {
        section.set(c, i, Rat::one());
    }
    (proj, section)
}

/// A particular solution of `a x = b` (free variables set to zero).
pub fn solve(a: &RatMatrix, b: &SparseVec) -> Option<SparseVec> {
    let n = a.cols();
    let rows: Vec<SparseVec> = a
        .row_vecs()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            if let Some(x) = b.get(&i) {
                r.insert(n, x.clone());
            }
            r
        })
        .collect();
    debug_assert!(b.keys().all(|&i| i < a.rows()));
    let r = Rref::from_vectors(n + 1, &rows);
    if r.pivots().last() == Some(&n) {
        return None;
    }
    let mut x = SparseVec::new();
    for (p, row) in r.pivots().iter().zip(r.rows()) {
        if let Some(v) = row.get(&n) {
            x.insert(*p, v.clone());
        }
    }
    Some(x)
}
