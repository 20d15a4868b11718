use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::rat::Rat;

/// Sparse vector: coordinate index to nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Rat>;

/// `v += c * w`, dropping entries that cancel.
pub fn axpy(v: &mut SparseVec, c: &Rat, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&j, x) in w {
        let prod = c * x;
        match v.get_mut(&j) {
            Some(e) => {
                *e += &prod;
                if e.is_zero() {
                    v.remove(&j);
                }
            }
            None => {
                v.insert(j, prod);
            }
        }
    }
}

pub fn scale(v: &SparseVec, c: &Rat) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&j, x)| (j, x * c)).collect()
}

pub fn add_entry(v: &mut SparseVec, j: usize, c: Rat) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(&j) {
        Some(e) => {
            *e += c;
            if e.is_zero() {
                v.remove(&j);
            }
        }
        None => {
            v.insert(j, c);
        }
    }
}

pub fn dot(v: &SparseVec, w: &SparseVec) -> Rat {
    let (small, big) = if v.len() <= w.len() { (v, w) } else { (w, v) };
    small
        .iter()
        .filter_map(|(j, x)| big.get(j).map(|y| x * y))
        .sum()
}

pub fn unit_vec(j: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(j, Rat::one());
    v
}

/// Sparse rational matrix stored row-wise; zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, Rat::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        let mut data = rows;
        for r in &mut data {
            r.retain(|_, x| !x.is_zero());
            debug_assert!(r.keys().all(|&j| j < cols));
        }
        RatMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Build from column vectors.
    pub fn from_cols(rows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (&i, x) in c {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j, Rat::from_int(x)))
                    .collect()
            })
            .collect();
        RatMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.data[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if x.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, x);
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, x)| (i, j, x)))
    }

    pub fn column(&self, j: usize) -> SparseVec {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get(&j).map(|x| (i, x.clone())))
            .collect()
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, x) in self.entries() {
            t.data[j].insert(i, x.clone());
        }
        t
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, r) in self.data.iter().enumerate() {
            let x = dot(r, v);
            if !x.is_zero() {
                out.insert(i, x);
            }
        }
        out
    }

    /// Matrix product; panics on dimension mismatch.
    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = SparseVec::new();
                for (&k, x) in r {
                    axpy(&mut acc, x, &other.data[k]);
                }
                acc
            })
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                axpy(&mut r, &Rat::one(), b);
                r
            })
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        self.add(&other.scaled(&-Rat::one()))
    }

    pub fn scaled(&self, c: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| scale(r, c)).collect(),
        }
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// `[self other]`
    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows);
        let off = self.cols;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(&j, x)| (j + off, x.clone())));
                r
            })
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// `[[self, 0], [0, other]]`
    pub fn block_diag(&self, other: &RatMatrix) -> RatMatrix {
        self.hstack(&RatMatrix::zeros(self.rows, other.cols))
            .vstack(&RatMatrix::zeros(other.rows, self.cols).hstack(other))
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        super::echelon::rank(self)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.to_dense() {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rat)>,
}

impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries().map(|(i, j, x)| (i, j, x.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        let mut m = RatMatrix::zeros(r.rows, r.cols);
        for (i, j, x) in r.entries {
            if i >= r.rows || j >= r.cols {
                return Err(serde::de::Error::custom(format!(
                    "matrix entry ({i},{j}) outside {}x{}",
                    r.rows, r.cols
                )));
            }
            m.set(i, j, x);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = RatMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = RatMatrix::from_dense(&[vec![1, 0], vec![3, 1]]);
        assert_eq!(a.mul(&b), RatMatrix::from_dense(&[vec![7, 2], vec![3, 1]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.sub(&a).nnz(), 0);
    }

    #[test]
    fn stacking() {
        let a = RatMatrix::identity(2);
        let s = a.hstack(&a);
        assert_eq!((s.rows(), s.cols()), (2, 4));
        assert_eq!(s.get(1, 3), Rat::one());
        let v = a.vstack(&a);
        assert_eq!((v.rows(), v.cols()), (4, 2));
    }
}
