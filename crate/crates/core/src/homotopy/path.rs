use std::sync::Arc;

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, scale, Rat, RatMatrix, SparseVec};
use crate::operad::OperadTable;
use crate::palgebra::{Algebra, AlgebraMap, Elem};

fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

/// `Σ_j a_j t^j + Σ_j b_j t^j dt` with `a_j` in degree `degree` and `b_j` in
/// degree `degree - |dt|`. Polynomial degree is at most `t_max`, counting
/// `dt` as one, so `b` has `t_max` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathElement {
    pub degree: i64,
    pub a: Vec<SparseVec>,
    pub b: Vec<SparseVec>,
}

impl PathElement {
    pub fn zero(degree: i64, t_max: usize) -> Self {
        PathElement {
            degree,
            a: vec![SparseVec::new(); t_max + 1],
            b: vec![SparseVec::new(); t_max],
        }
    }

    /// `x t^0`.
    pub fn constant(x: &Elem, t_max: usize) -> Self {
        let mut p = Self::zero(x.degree, t_max);
        p.a[0] = x.coords.clone();
        p
    }

    pub fn t_max(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(|v| v.is_empty())
    }

    /// Highest power of `t` that occurs.
    pub fn t_degree(&self) -> usize {
        (0..=self.t_max())
            .rev()
            .find(|&j| !self.a[j].is_empty() || (j > 0 && !self.b[j - 1].is_empty()))
            .unwrap_or(0)
    }

    /// Evaluation at `t = 0`.
    pub fn at0(&self) -> Elem {
        Elem::new(self.degree, self.a[0].clone())
    }

    /// Evaluation at `t = 1`.
    pub fn at1(&self) -> Elem {
        let mut v = SparseVec::new();
        for a in &self.a {
            axpy(&mut v, &Rat::one(), a);
        }
        Elem::new(self.degree, v)
    }

    /// Substitutes `t -> 1 - t` (so `dt -> -dt`).
    pub fn reversed(&self) -> PathElement {
        let t = self.t_max();
        let mut out = Self::zero(self.degree, t);
        for j in 0..=t {
            for i in 0..=j {
                let c = Rat::from_int(binomial(j as i64, i as i64)) * Rat::sign(odd(i as i64));
                axpy(&mut out.a[i], &c, &self.a[j]);
                if j < t {
                    axpy(&mut out.b[i], &-c.clone(), &self.b[j]);
                }
            }
        }
        out
    }
}

/// `A ⊗ k[t, dt]` truncated at polynomial degree `t_max` (`dt` counts one).
///
/// The truncation is a subcomplex with the cohomology of `A` but not a
/// subalgebra: a product whose
/// t-degree exceeds the bound is an error.
#[derive(Debug, Clone)]
pub struct PathAlgebra {
    pub base: Arc<dyn Algebra>,
    pub t_max: usize,
}

impl PathAlgebra {
    pub fn new(base: Arc<dyn Algebra>, t_max: usize) -> Self {
        PathAlgebra { base, t_max }
    }

    fn dt(&self) -> i64 {
        self.base.convention().delta()
    }

    fn dims(&self, k: i64) -> Result<(usize, usize)> {
        let lo = self.base.lowest_degree();
        let da = if k < lo { 0 } else { self.base.dim(k)? };
        let kb = k - self.dt();
        let db = if kb < lo { 0 } else { self.base.dim(kb)? };
        Ok((da, db))
    }

    pub fn to_elem(&self, p: &PathElement) -> Result<Elem> {
        if p.t_degree() > self.t_max {
            return Err(Error::PathDegreeOverflow(self.t_max));
        }
        let (da, db) = self.dims(p.degree)?;
        let t = self.t_max + 1;
        let mut v = SparseVec::new();
        for j in 0..t.min(p.a.len()) {
            for (&i, c) in &p.a[j] {
                v.insert(j * da + i, c.clone());
            }
        }
        for j in 0..self.t_max.min(p.b.len()) {
            for (&i, c) in &p.b[j] {
                v.insert(t * da + j * db + i, c.clone());
            }
        }
        Ok(Elem::new(p.degree, v))
    }

    pub fn from_elem(&self, e: &Elem) -> Result<PathElement> {
        let (da, db) = self.dims(e.degree)?;
        let t = self.t_max + 1;
        let mut p = PathElement::zero(e.degree, self.t_max);
        for (&i, c) in &e.coords {
            if i < t * da {
                p.a[i / da].insert(i % da, c.clone());
            } else {
                let i = i - t * da;
                p.b[i / db].insert(i % db, c.clone());
            }
        }
        Ok(p)
    }

    /// The constant embedding `ι` in degree `k`.
    pub fn include_matrix(&self, k: i64) -> Result<RatMatrix> {
        let (da, _) = self.dims(k)?;
        let n = self.dim(k)?;
        let mut m = RatMatrix::zeros(n, da);
        for i in 0..da {
            m.set(i, i, Rat::one());
        }
        Ok(m)
    }

    /// Evaluation at `t = 0` (`at_one = false`) or `t = 1`.
    pub fn eval_matrix(&self, k: i64, at_one: bool) -> Result<RatMatrix> {
        let (da, _) = self.dims(k)?;
        let n = self.dim(k)?;
        let mut m = RatMatrix::zeros(da, n);
        let powers = if at_one { self.t_max + 1 } else { 1 };
        for j in 0..powers {
            for i in 0..da {
                m.set(i, j * da + i, Rat::one());
            }
        }
        Ok(m)
    }
}

impl Algebra for PathAlgebra {
    fn operad(&self) -> &Arc<OperadTable> {
        self.base.operad()
    }

    fn lowest_degree(&self) -> i64 {
        self.base.lowest_degree() + self.dt().min(0)
    }

    fn highest_degree(&self) -> Option<i64> {
        self.base.highest_degree().map(|h| h + self.dt().min(0))
    }

    fn dim(&self, k: i64) -> Result<usize> {
        self.check_degree(k)?;
        let (da, db) = self.dims(k)?;
        Ok((self.t_max + 1) * da + self.t_max * db)
    }

    fn differential(&self, k: i64) -> Result<RatMatrix> {
        let delta = self.dt();
        let t = k + delta;
        let (rows, cols) = (self.dim(t)?, self.dim(k)?);
        let (da, db) = self.dims(k)?;
        let mut out = Vec::with_capacity(cols);
        let lo = self.base.lowest_degree();
        let d_a = if da > 0 { Some(self.base.differential(k)?) } else { None };
        let d_b = if db > 0 && k - delta >= lo { Some(self.base.differential(k - delta)?) } else { None };
        for col in 0..cols {
            let mut e = Elem::zero(k);
            e.coords.insert(col, Rat::one());
            let p = self.from_elem(&e)?;
            let mut q = PathElement::zero(t, self.t_max);
            for j in 0..=self.t_max {
                if !p.a[j].is_empty() {
                    let m = d_a.as_ref().unwrap();
                    q.a[j] = m.mul_vec(&p.a[j]);
                    if j > 0 {
                        let c = Rat::from_int(j as i64) * Rat::sign(odd(k));
                        axpy(&mut q.b[j - 1], &c, &p.a[j]);
                    }
                }
                if j < self.t_max && !p.b[j].is_empty() {
                    q.b[j] = d_b.as_ref().unwrap().mul_vec(&p.b[j]);
                }
            }
            out.push(self.to_elem(&q)?.coords);
        }
        Ok(RatMatrix::from_cols(rows, &out))
    }

    fn theta(&self, n: usize, op: &SparseVec, args: &[Elem]) -> Result<Elem> {
        let paths = args.iter().map(|e| self.from_elem(e)).collect::<Result<Vec<_>>>()?;
        let delta = self.dt();
        let total: i64 = args.iter().map(|a| a.degree).sum::<i64>()
            + op.keys().next().map(|&o| self.operad().degree(crate::operad::OpIndex::new(n, o))).unwrap_or(0);
        let mut out = PathElement::zero(total, self.t_max);
        // expand each argument into its monomials (t-power, has dt, base element)
        let terms: Vec<Vec<(usize, bool, Elem)>> = paths
            .iter()
            .map(|p| {
                let mut v = Vec::new();
                for j in 0..=self.t_max {
                    if !p.a[j].is_empty() {
                        v.push((j, false, Elem::new(p.degree, p.a[j].clone())));
                    }
                    if j < self.t_max && !p.b[j].is_empty() {
                        v.push((j, true, Elem::new(p.degree - delta, p.b[j].clone())));
                    }
                }
                v
            })
            .collect();
        if terms.iter().any(|t| t.is_empty()) {
            return self.to_elem(&out);
        }
        let mut idx = vec![0usize; n];
        loop {
            let picks: Vec<&(usize, bool, Elem)> = (0..n).map(|i| &terms[i][idx[i]]).collect();
            let dts = picks.iter().filter(|p| p.1).count();
            if dts <= 1 {
                let power: usize = picks.iter().map(|p| p.0).sum();
                // moving dt from argument i past the base parts of later arguments
                let mut neg = false;
                for (i, p) in picks.iter().enumerate() {
                    if p.1 {
                        let later: i64 = picks[i + 1..].iter().map(|q| q.2.degree).sum();
                        neg = odd(later);
                    }
                }
                let base_args: Vec<Elem> = picks.iter().map(|p| p.2.clone()).collect();
                let y = self.base.theta(n, op, &base_args)?;
                if !y.is_zero() {
                    if power + dts > self.t_max {
                        return Err(Error::PathDegreeOverflow(self.t_max));
                    }
                    let v = if neg { scale(&y.coords, &-Rat::one()) } else { y.coords };
                    let slot = if dts == 1 { &mut out.b[power] } else { &mut out.a[power] };
                    axpy(slot, &Rat::one(), &v);
                }
            }
            let mut i = 0;
            while i < n {
                idx[i] += 1;
                if idx[i] < terms[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        self.to_elem(&out)
    }

    fn basis_labels(&self, k: i64) -> Result<Vec<String>> {
        let lo = self.base.lowest_degree();
        let la = if k < lo { Vec::new() } else { self.base.basis_labels(k)? };
        let kb = k - self.dt();
        let lb = if kb < lo { Vec::new() } else { self.base.basis_labels(kb)? };
        let mut out = Vec::new();
        for j in 0..=self.t_max {
            out.extend(la.iter().map(|l| format!("{l}*t^{j}")));
        }
        for j in 0..self.t_max {
            out.extend(lb.iter().map(|l| format!("{l}*t^{j}dt")));
        }
        Ok(out)
    }
}

/// The structure maps `δ⁰`, `δ¹`: `A[t,dt] -> A` and `ι`: `A -> A[t,dt]`.
#[derive(Debug, Clone)]
pub struct PathMap {
    pub path: Arc<PathAlgebra>,
    pub kind: PathMapKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathMapKind {
    AtZero,
    AtOne,
    Include,
}

impl AlgebraMap for PathMap {
    fn source(&self) -> Arc<dyn Algebra> {
        match self.kind {
            PathMapKind::Include => self.path.base.clone(),
            _ => self.path.clone(),
        }
    }

    fn target(&self) -> Arc<dyn Algebra> {
        match self.kind {
            PathMapKind::Include => self.path.clone(),
            _ => self.path.base.clone(),
        }
    }

    fn matrix(&self, k: i64) -> Result<RatMatrix> {
        match self.kind {
            PathMapKind::AtZero => self.path.eval_matrix(k, false),
            PathMapKind::AtOne => self.path.eval_matrix(k, true),
            PathMapKind::Include => self.path.include_matrix(k),
        }
    }
}
