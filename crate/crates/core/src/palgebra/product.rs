use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, SparseVec, SubspaceBasis};
use crate::operad::OperadTable;

use super::morphism::same_operad;
use super::{Algebra, Elem};

/// Degreewise direct product with componentwise structure maps.
#[derive(Debug, Clone)]
pub struct ProductAlgebra {
    pub factors: Vec<Arc<dyn Algebra>>,
}

impl ProductAlgebra {
    pub fn new(factors: Vec<Arc<dyn Algebra>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("empty product".into()));
        }
        for f in &factors[1..] {
            same_operad(&*factors[0], &**f)?;
        }
        Ok(ProductAlgebra { factors })
    }

    /// Offsets of each factor inside the degree-`k` basis.
    pub fn offsets(&self, k: i64) -> Result<Vec<usize>> {
        let mut out = vec![0];
        for f in &self.factors {
            let last = *out.last().unwrap();
            out.push(last + f.dim(k)?);
        }
        Ok(out)
    }

    pub fn split(&self, e: &Elem) -> Result<Vec<Elem>> {
        let off = self.offsets(e.degree)?;
        Ok((0..self.factors.len())
            .map(|i| {
                let v = e
                    .coords
                    .range(off[i]..off[i + 1])
                    .map(|(&j, c)| (j - off[i], c.clone()))
                    .collect();
                Elem::new(e.degree, v)
            })
            .collect())
    }

    pub fn join(&self, k: i64, parts: &[Elem]) -> Result<Elem> {
        let off = self.offsets(k)?;
        let mut v = SparseVec::new();
        for (i, p) in parts.iter().enumerate() {
            for (&j, c) in &p.coords {
                v.insert(j + off[i], c.clone());
            }
        }
        Ok(Elem::new(k, v))
    }

    /// Projection onto factor `i` in degree `k`.
    pub fn projection(&self, i: usize, k: i64) -> Result<RatMatrix> {
        let off = self.offsets(k)?;
        let mut m = RatMatrix::zeros(off[i + 1] - off[i], *off.last().unwrap());
        for j in 0..off[i + 1] - off[i] {
            m.set(j, off[i] + j, Rat::one());
        }
        Ok(m)
    }
}

impl Algebra for ProductAlgebra {
    fn operad(&self) -> &Arc<OperadTable> {
        self.factors[0].operad()
    }

    fn lowest_degree(&self) -> i64 {
        self.factors.iter().map(|f| f.lowest_degree()).min().unwrap()
    }

    fn highest_degree(&self) -> Option<i64> {
        self.factors.iter().filter_map(|f| f.highest_degree()).min()
    }

    fn dim(&self, k: i64) -> Result<usize> {
        Ok(*self.offsets(k)?.last().unwrap())
    }

    fn differential(&self, k: i64) -> Result<RatMatrix> {
        let delta = self.convention().delta();
        let mut m = RatMatrix::zeros(0, 0);
        for f in &self.factors {
            let d = f.differential(k)?;
            debug_assert_eq!(d.rows(), f.dim(k + delta)?);
            m = m.block_diag(&d);
        }
        Ok(m)
    }

    fn theta(&self, n: usize, op: &SparseVec, args: &[Elem]) -> Result<Elem> {
        let split = args.iter().map(|a| self.split(a)).collect::<Result<Vec<_>>>()?;
        let mut parts = Vec::new();
        let mut degree = None;
        for (i, f) in self.factors.iter().enumerate() {
            let xs: Vec<Elem> = split.iter().map(|s| s[i].clone()).collect();
            let e = f.theta(n, op, &xs)?;
            degree = Some(e.degree);
            parts.push(e);
        }
        let k = degree.unwrap();
        self.join(k, &parts)
    }

    fn basis_labels(&self, k: i64) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            out.extend(f.basis_labels(k)?.into_iter().map(|l| format!("{l}@{i}")));
        }
        Ok(out)
    }
}

/// A subalgebra given by explicit degreewise bases inside a window.
///
/// Closure under `d` and the structure maps is checked lazily: evaluating
/// something that leaves the subspace is an error.
#[derive(Debug, Clone)]
pub struct SubAlgebra {
    pub parent: Arc<dyn Algebra>,
    pub lo: i64,
    pub hi: i64,
    pub bases: BTreeMap<i64, SubspaceBasis>,
}

impl SubAlgebra {
    pub fn new(parent: Arc<dyn Algebra>, lo: i64, hi: i64, bases: BTreeMap<i64, SubspaceBasis>) -> Result<Self> {
        for k in lo..=hi {
            let dim = parent.dim(k)?;
            if let Some(b) = bases.get(&k) {
                if b.ambient != dim {
                    return Err(Error::DegreeMismatch(format!("subspace in degree {k} has wrong ambient dimension")));
                }
            }
        }
        let lo = lo.max(parent.lowest_degree());
        Ok(SubAlgebra { parent, lo, hi, bases })
    }

    pub fn basis(&self, k: i64) -> &[SparseVec] {
        self.bases.get(&k).map(|b| b.vectors()).unwrap_or(&[])
    }

    /// Inclusion matrix into the parent in degree `k`.
    pub fn inclusion(&self, k: i64) -> Result<RatMatrix> {
        Ok(RatMatrix::from_cols(self.parent.dim(k)?, self.basis(k)))
    }

    pub fn to_parent(&self, e: &Elem) -> Elem {
        let b = self.basis(e.degree);
        let mut v = SparseVec::new();
        for (&i, c) in &e.coords {
            crate::linalg::axpy(&mut v, c, &b[i]);
        }
        Elem::new(e.degree, v)
    }

    pub fn from_parent(&self, e: &Elem) -> Result<Elem> {
        if e.is_zero() {
            return Ok(Elem::zero(e.degree));
        }
        let Some(b) = self.bases.get(&e.degree) else {
            return Err(Error::Precondition(format!("element of degree {} is not in the subalgebra", e.degree)));
        };
        let c = b
            .rref
            .coordinates(&e.coords)
            .ok_or_else(|| Error::Precondition(format!("element of degree {} is not in the subalgebra", e.degree)))?;
        Ok(Elem::new(
            e.degree,
            c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect(),
        ))
    }
}

impl Algebra for SubAlgebra {
    fn operad(&self) -> &Arc<OperadTable> {
        self.parent.operad()
    }

    fn lowest_degree(&self) -> i64 {
        self.lo
    }

    fn highest_degree(&self) -> Option<i64> {
        Some(self.hi)
    }

    fn dim(&self, k: i64) -> Result<usize> {
        if k > self.hi {
            return Err(Error::OutOfWindow {
                degree: k,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(self.basis(k).len())
    }

    fn differential(&self, k: i64) -> Result<RatMatrix> {
        let t = k + self.convention().delta();
        let (rows, cols) = (self.dim(t)?, self.dim(k)?);
        if rows == 0 || cols == 0 {
            return Ok(RatMatrix::zeros(rows, cols));
        }
        let d = self.parent.differential(k)?;
        let mut out = Vec::with_capacity(cols);
        for v in self.basis(k) {
            out.push(self.from_parent(&Elem::new(t, d.mul_vec(v)))?.coords);
        }
        Ok(RatMatrix::from_cols(rows, &out))
    }

    fn theta(&self, n: usize, op: &SparseVec, args: &[Elem]) -> Result<Elem> {
        let xs: Vec<Elem> = args.iter().map(|a| self.to_parent(a)).collect();
        let y = self.parent.theta(n, op, &xs)?;
        self.check_degree(y.degree)?;
        self.from_parent(&y)
    }
}
