//! Graded vector spaces, (co)chain complexes, mapping cones and cohomology.
//!
//! Every complex carries an explicit degree window; asking for data outside
//! of it is an error, never an implicit zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{image, kernel, quotient_section, RatMatrix, SparseVec, SubspaceBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Differential of degree +1.
    Cochain,
    /// Differential of degree -1.
    Chain,
}

impl Convention {
    /// Degree of the differential.
    pub fn delta(self) -> i64 {
        match self {
            Convention::Cochain => 1,
            Convention::Chain => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Cochain => "cochain",
            Convention::Chain => "chain",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cochain" => Ok(Convention::Cochain),
            "chain" => Ok(Convention::Chain),
            _ => Err(Error::Schema(format!("unknown convention `{s}`"))),
        }
    }
}

/// Finite-dimensional graded vector space with labelled bases in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    pub lo: i64,
    pub hi: i64,
    pub basis: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi + 1, "empty window must have lo = hi + 1");
        GradedSpace {
            lo,
            hi,
            basis: BTreeMap::new(),
        }
    }

    pub fn from_dims(lo: i64, hi: i64, dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut s = GradedSpace::new(lo, hi);
        for (k, n) in dims {
            s.set_basis(k, (0..n).map(|i| format!("e{k}_{i}")).collect());
        }
        s
    }

    pub fn set_basis(&mut self, k: i64, labels: Vec<String>) {
        assert!(self.in_window(k), "degree {k} outside window");
        if labels.is_empty() {
            self.basis.remove(&k);
        } else {
            self.basis.insert(k, labels);
        }
    }

    pub fn in_window(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn check(&self, k: i64) -> Result<()> {
        if self.in_window(k) {
            Ok(())
        } else {
            Err(Error::OutOfWindow {
                degree: k,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    pub fn dim(&self, k: i64) -> Result<usize> {
        self.check(k)?;
        Ok(self.basis.get(&k).map_or(0, |b| b.len()))
    }

    pub fn labels(&self, k: i64) -> &[String] {
        self.basis.get(&k).map_or(&[], |b| b.as_slice())
    }
}

/// A (co)chain complex on a windowed graded space. `d[k]` maps degree `k`
/// to degree `k + delta` and is present whenever both degrees are in the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub space: GradedSpace,
    pub convention: Convention,
    pub d: BTreeMap<i64, RatMatrix>,
}

impl ChainComplex {
    /// Validates shapes and `d^2 = 0`. Missing matrices between in-window
    /// degrees are taken to be zero.
    pub fn new(space: GradedSpace, convention: Convention, d: BTreeMap<i64, RatMatrix>) -> Result<Self> {
        let delta = convention.delta();
        let mut full = BTreeMap::new();
        for k in space.lo..=space.hi {
            let t = k + delta;
            if !space.in_window(t) {
                continue;
            }
            let (rows, cols) = (space.dim(t)?, space.dim(k)?);
            let m = d.get(&k).cloned().unwrap_or_else(|| RatMatrix::zeros(rows, cols));
            if (m.rows(), m.cols()) != (rows, cols) {
                return Err(Error::DegreeMismatch(format!(
                    "differential in degree {k} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            full.insert(k, m);
        }
        for k in d.keys() {
            if !full.contains_key(k) && !d[k].is_zero() {
                return Err(Error::OutOfWindow {
                    degree: *k,
                    lo: space.lo,
                    hi: space.hi,
                });
            }
        }
        let c = ChainComplex {
            space,
            convention,
            d: full,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn check_square_zero(&self) -> Result<()> {
        let delta = self.convention.delta();
        for (&k, m) in &self.d {
            if let Some(n) = self.d.get(&(k + delta)) {
                if !n.mul(m).is_zero() {
                    return Err(Error::DifferentialSquare(format!("in degree {k}")));
                }
            }
        }
        Ok(())
    }

    pub fn lo(&self) -> i64 {
        self.space.lo
    }

    pub fn hi(&self) -> i64 {
        self.space.hi
    }

    pub fn dim(&self, k: i64) -> Result<usize> {
        self.space.dim(k)
    }

    /// The differential leaving degree `k`.
    pub fn differential(&self, k: i64) -> Result<&RatMatrix> {
        self.space.check(k)?;
        self.d.get(&k).ok_or(Error::OutOfWindow {
            degree: k + self.convention.delta(),
            lo: self.space.lo,
            hi: self.space.hi,
        })
    }

    pub fn cocycles(&self, k: i64) -> Result<SubspaceBasis> {
        Ok(kernel(self.differential(k)?))
    }

    pub fn coboundaries(&self, k: i64) -> Result<SubspaceBasis> {
        let src = k - self.convention.delta();
        self.space.check(src)?;
        Ok(image(self.differential(src)?))
    }

    /// Cohomology in degree `k` with canonical pivot-based representatives.
    pub fn cohomology(&self, k: i64) -> Result<CohomologyResult> {
        let z = self.cocycles(k)?;
        let b = self.coboundaries(k)?;
        Ok(CohomologyResult::from_subspaces(k, &z, &b))
    }

    pub fn betti(&self, k: i64) -> Result<usize> {
        let z = self.cocycles(k)?.dim();
        let b = self.coboundaries(k)?.dim();
        Ok(z - b)
    }
}

/// `H^k = Z/B` with explicit maps between `H` and the ambient degree-`k` space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    pub degree: i64,
    pub dimension: usize,
    /// Cocycle representatives of a basis of `H`, in ambient coordinates.
    pub representatives: Vec<SparseVec>,
    /// `H -> Z`, in the echelon coordinates of `cocycles`.
    pub section: RatMatrix,
    /// `Z -> H`.
    pub classifier: RatMatrix,
    pub cocycles: SubspaceBasis,
    pub coboundaries: SubspaceBasis,
}

impl CohomologyResult {
    pub fn from_subspaces(degree: i64, z: &SubspaceBasis, b: &SubspaceBasis) -> Self {
        // express B in the echelon coordinates of Z
        let bz: Vec<SparseVec> = b
            .vectors()
            .iter()
            .map(|v| {
                z.rref
                    .coordinates(v)
                    .expect("coboundary outside cocycles")
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        let bsub = SubspaceBasis::span(z.dim(), &bz);
        let (classifier, section) = quotient_section(z.dim(), &bsub);
        let zmat = RatMatrix::from_cols(z.ambient, z.vectors());
        let representatives = section.columns().iter().map(|c| zmat.mul_vec(c)).collect();
        CohomologyResult {
            degree,
            dimension: section.cols(),
            representatives,
            section,
            classifier,
            cocycles: z.clone(),
            coboundaries: b.clone(),
        }
    }

    /// Class of an ambient cocycle, or `None` if `v` is not a cocycle.
    pub fn classify(&self, v: &SparseVec) -> Option<SparseVec> {
        let coords = self.cocycles.rref.coordinates(v)?;
        let zc: SparseVec = coords
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect();
        Some(self.classifier.mul_vec(&zc))
    }
}

/// Degreewise linear map between two complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub maps: BTreeMap<i64, RatMatrix>,
}

impl ChainMap {
    /// Validates `f d = d f` wherever both sides are defined.
    pub fn new(source: ChainComplex, target: ChainComplex, maps: BTreeMap<i64, RatMatrix>) -> Result<Self> {
        if source.convention != target.convention {
            return Err(Error::ConventionMismatch("chain map between conventions".into()));
        }
        let f = ChainMap { source, target, maps };
        let delta = f.source.convention.delta();
        for (&k, m) in &f.maps {
            let rows = f.target.dim(k)?;
            let cols = f.source.dim(k)?;
            if (m.rows(), m.cols()) != (rows, cols) {
                return Err(Error::DegreeMismatch(format!("chain map block in degree {k}")));
            }
            if let (Some(fk1), Ok(ds), Ok(dt)) = (
                f.maps.get(&(k + delta)),
                f.source.differential(k),
                f.target.differential(k),
            ) {
                if fk1.mul(ds) != dt.mul(m) {
                    return Err(Error::NotChainMap(k));
                }
            }
        }
        Ok(f)
    }

    pub fn at(&self, k: i64) -> Result<RatMatrix> {
        match self.maps.get(&k) {
            Some(m) => Ok(m.clone()),
            None => Ok(RatMatrix::zeros(self.target.dim(k)?, self.source.dim(k)?)),
        }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let maps = (c.lo()..=c.hi())
            .map(|k| (k, RatMatrix::identity(c.dim(k).unwrap())))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }
}

/// Mapping cone `C(f)_n = A_{n+delta} (+) B_n` with `d(a, b) = (-da, db - f a)`.
///
/// For cochains this is `C^n = A^{n+1} (+) B^n`, `d(a,b) = (-da, -fa + db)`;
/// for chains `C_n = A_{n-1} (+) B_n`, `d(a,b) = (-da, db - f(a))`.
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    let conv = f.source.convention;
    let delta = conv.delta();
    let (a, b) = (&f.source, &f.target);
    let lo = (a.lo() - delta).max(b.lo());
    let hi = (a.hi() - delta).min(b.hi());
    let mut space = GradedSpace::new(lo, hi.max(lo - 1));
    for n in lo..=hi {
        let mut labels: Vec<String> = a.space.labels(n + delta).iter().map(|l| format!("s{l}")).collect();
        labels.extend(b.space.labels(n).iter().cloned());
        space.set_basis(n, labels);
    }
    let mut d = BTreeMap::new();
    for n in lo..=hi {
        let t = n + delta;
        if !space.in_window(t) {
            continue;
        }
        let (an, bn) = (a.dim(n + delta)?, b.dim(n)?);
        let (at, bt) = (a.dim(t + delta)?, b.dim(t)?);
        let da = a.differential(n + delta)?.scaled(&-crate::linalg::Rat::one());
        let fa = f.at(n + delta)?.scaled(&-crate::linalg::Rat::one());
        let db = b.differential(n)?.clone();
        let top = da.hstack(&RatMatrix::zeros(at, bn));
        let bottom = fa.hstack(&db);
        let m = top.vstack(&bottom);
        debug_assert_eq!((m.rows(), m.cols()), (at + bt, an + bn));
        d.insert(n, m);
    }
    ChainComplex::new(space, conv, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rat;

    fn two_term(conv: Convention, x: i64) -> ChainComplex {
        // Q in degrees 0 and delta, d = x
        let delta = conv.delta();
        let (lo, hi) = if delta > 0 { (-1, 2) } else { (-2, 1) };
        let s = GradedSpace::from_dims(lo, hi, [(0, 1), (delta, 1)]);
        let mut d = BTreeMap::new();
        d.insert(0, RatMatrix::from_dense(&[vec![x]]));
        ChainComplex::new(s, conv, d).unwrap()
    }

    #[test]
    fn exact_complex_is_acyclic() {
        for conv in [Convention::Cochain, Convention::Chain] {
            let c = two_term(conv, 1);
            assert_eq!(c.betti(0).unwrap(), 0);
            assert_eq!(c.betti(conv.delta()).unwrap(), 0);
        }
    }

    #[test]
    fn zero_differential_cohomology() {
        let s = GradedSpace::from_dims(-1, 2, [(0, 1), (1, 2)]);
        let c = ChainComplex::new(s, Convention::Cochain, BTreeMap::new()).unwrap();
        assert_eq!(c.betti(0).unwrap(), 1);
        let h = c.cohomology(1).unwrap();
        assert_eq!(h.dimension, 2);
        assert_eq!(h.classifier.mul(&h.section), RatMatrix::identity(2));
    }

    #[test]
    fn out_of_window_is_an_error() {
        let c = two_term(Convention::Cochain, 1);
        assert!(matches!(c.cohomology(2), Err(Error::OutOfWindow { .. })));
        assert!(c.cohomology(-1).is_err());
    }

    #[test]
    fn nonzero_square_rejected() {
        let s = GradedSpace::from_dims(0, 2, [(0, 1), (1, 1), (2, 1)]);
        let mut d = BTreeMap::new();
        d.insert(0, RatMatrix::from_dense(&[vec![1]]));
        d.insert(1, RatMatrix::from_dense(&[vec![1]]));
        assert!(matches!(
            ChainComplex::new(s, Convention::Cochain, d),
            Err(Error::DifferentialSquare(_))
        ));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = two_term(Convention::Cochain, 0);
        let k = cone(&ChainMap::identity(&c)).unwrap();
        for n in k.lo() + 1..k.hi() {
            assert_eq!(k.betti(n).unwrap(), 0, "degree {n}");
        }
    }

    #[test]
    fn cone_of_zero_map() {
        let s = GradedSpace::from_dims(-2, 3, [(0, 1), (1, 2)]);
        let a = ChainComplex::new(s.clone(), Convention::Cochain, BTreeMap::new()).unwrap();
        let f = ChainMap::new(a.clone(), a.clone(), BTreeMap::new()).unwrap();
        let k = cone(&f).unwrap();
        // H^n(cone) = A^{n+1} + B^n
        for n in k.lo() + 1..k.hi() {
            let want = a.dim(n + 1).unwrap() + a.dim(n).unwrap();
            assert_eq!(k.betti(n).unwrap(), want);
        }
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = two_term(Convention::Cochain, 1);
        let mut maps = BTreeMap::new();
        maps.insert(0, RatMatrix::identity(1));
        maps.insert(1, RatMatrix::zeros(1, 1));
        assert!(matches!(
            ChainMap::new(c.clone(), c, maps),
            Err(Error::NotChainMap(0))
        ));
        let _ = Rat::one();
    }
}
