use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::complex::CohomologyResult;
use crate::error::{Error, Result};
use crate::free::{FreeAlgebra, FreeElement, Monomial};
use crate::linalg::{axpy, image, kernel, unit_vec, Rat, RatMatrix, SparseVec};

use super::{algebra_cohomology, Algebra, Elem};

/// A degreewise linear map between algebras.
pub trait AlgebraMap: Send + Sync + std::fmt::Debug {
    fn source(&self) -> Arc<dyn Algebra>;
    fn target(&self) -> Arc<dyn Algebra>;
    /// Matrix from source degree `k` to target degree `k`.
    fn matrix(&self, k: i64) -> Result<RatMatrix>;

    fn apply_elem(&self, x: &Elem) -> Result<Elem> {
        Ok(Elem::new(x.degree, self.matrix(x.degree)?.mul_vec(&x.coords)))
    }
}

pub(crate) fn same_operad(a: &dyn Algebra, b: &dyn Algebra) -> Result<()> {
    let (p, q) = (a.operad(), b.operad());
    if Arc::ptr_eq(p, q) || **p == **q {
        Ok(())
    } else {
        Err(Error::OperadMismatch(format!("{} vs {}", p.name, q.name)))
    }
}

/// The morphism out of a free algebra determined by generator images.
#[derive(Debug)]
pub struct FreeMorphism {
    pub source: Arc<FreeAlgebra>,
    pub target: Arc<dyn Algebra>,
    pub images: Vec<Elem>,
    cache: Mutex<BTreeMap<i64, Arc<RatMatrix>>>,
}

impl Clone for FreeMorphism {
    fn clone(&self) -> Self {
        FreeMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl FreeMorphism {
    /// Builds the morphism without checking compatibility with `d`.
    pub fn from_images_unchecked(source: Arc<FreeAlgebra>, target: Arc<dyn Algebra>, images: Vec<Elem>) -> Self {
        FreeMorphism {
            source,
            target,
            images,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn set_image(&mut self, g: usize, image: Elem) {
        self.images[g] = image;
        self.cache.lock().unwrap().clear();
    }

    /// `f(v)` for every generator `v` of the source, as coordinates.
    pub fn generator_images_of(f: &dyn AlgebraMap, source: &FreeAlgebra) -> Result<Vec<Elem>> {
        (0..source.generators().len())
            .map(|i| {
                let g = source.generator_element(i);
                let v = source.coords(&g)?;
                f.apply_elem(&Elem::new(g.degree, v))
            })
            .collect()
    }

    fn monomial_image(&self, m: &Monomial) -> Result<Elem> {
        let args: Vec<Elem> = m.slots.iter().map(|&s| self.images[s].clone()).collect();
        self.target.theta(m.arity, &unit_vec(m.op), &args)
    }

    pub fn apply(&self, x: &FreeElement) -> Result<Elem> {
        let mut v = SparseVec::new();
        for (m, c) in &x.terms {
            let e = self.monomial_image(m)?;
            axpy(&mut v, c, &e.coords);
        }
        Ok(Elem::new(x.degree, v))
    }

    pub fn matrix_arc(&self, k: i64) -> Result<Arc<RatMatrix>> {
        if let Some(m) = self.cache.lock().unwrap().get(&k) {
            return Ok(m.clone());
        }
        let basis = self.source.basis(k)?;
        let rows = self.target.dim(k)?;
        let mut cols = Vec::with_capacity(basis.monomials.len());
        for m in &basis.monomials {
            cols.push(self.monomial_image(m)?.coords);
        }
        let mat = Arc::new(RatMatrix::from_cols(rows, &cols));
        self.cache.lock().unwrap().insert(k, mat.clone());
        Ok(mat)
    }

    /// Generator images as labelled sparse vectors.
    pub fn image_of(&self, label: &str) -> Option<&Elem> {
        self.source.find_generator(label).map(|i| &self.images[i])
    }
}

impl AlgebraMap for FreeMorphism {
    fn source(&self) -> Arc<dyn Algebra> {
        self.source.clone()
    }

    fn target(&self) -> Arc<dyn Algebra> {
        self.target.clone()
    }

    fn matrix(&self, k: i64) -> Result<RatMatrix> {
        Ok((*self.matrix_arc(k)?).clone())
    }
}

/// Extends generator images to the unique algebra morphism and checks
/// `d φ(v) = φ(d v)` on every generator whose boundary lies in the target's window.
pub fn extend_morphism(source: Arc<FreeAlgebra>, target: Arc<dyn Algebra>, images: Vec<Elem>) -> Result<FreeMorphism> {
    same_operad(&*source, &*target)?;
    if source.convention() != target.convention() {
        return Err(Error::ConventionMismatch("morphism source and target".into()));
    }
    let gens = source.generators();
    if images.len() != gens.len() {
        return Err(Error::Precondition(format!(
            "{} images for {} generators",
            images.len(),
            gens.len()
        )));
    }
    for (g, img) in gens.iter().zip(&images) {
        if img.degree != g.degree {
            return Err(Error::DegreeMismatch(format!(
                "image of {} has degree {}, expected {}",
                g.label, img.degree, g.degree
            )));
        }
        let dim = target.dim(g.degree)?;
        if img.coords.keys().any(|&j| j >= dim) {
            return Err(Error::DegreeMismatch(format!("image of {} is out of range", g.label)));
        }
    }
    let f = FreeMorphism {
        source: source.clone(),
        target: target.clone(),
        images,
        cache: Mutex::new(BTreeMap::new()),
    };
    let delta = source.convention().delta();
    for (i, g) in gens.iter().enumerate() {
        let t = g.degree + delta;
        if target.highest_degree().is_some_and(|hi| t > hi) {
            continue;
        }
        let lhs = if t < target.lowest_degree() {
            SparseVec::new()
        } else {
            target.differential(g.degree)?.mul_vec(&f.images[i].coords)
        };
        let rhs = f.apply(source.generator_differential(i))?;
        if lhs != rhs.coords {
            return Err(Error::NotMorphism(format!("d f({0}) != f(d {0})", g.label)));
        }
    }
    Ok(f)
}

/// A morphism given by explicit degreewise matrices.
#[derive(Debug, Clone)]
pub struct MatrixMap {
    pub source: Arc<dyn Algebra>,
    pub target: Arc<dyn Algebra>,
    pub maps: BTreeMap<i64, RatMatrix>,
}

impl MatrixMap {
    pub fn identity(a: Arc<dyn Algebra>, lo: i64, hi: i64) -> Result<Self> {
        let mut maps = BTreeMap::new();
        for k in lo..=hi {
            maps.insert(k, RatMatrix::identity(a.dim(k)?));
        }
        Ok(MatrixMap {
            source: a.clone(),
            target: a,
            maps,
        })
    }

    /// Checks `f d = d f` on `[lo, hi]`.
    pub fn check_chain_map(&self, lo: i64, hi: i64) -> Result<()> {
        let delta = self.source.convention().delta();
        for k in lo..=hi {
            if !(lo..=hi).contains(&(k + delta)) {
                continue;
            }
            let l = self.matrix(k + delta)?.mul(&self.source.differential(k)?);
            let r = self.target.differential(k)?.mul(&self.matrix(k)?);
            if l != r {
                return Err(Error::NotChainMap(k));
            }
        }
        Ok(())
    }
}

impl AlgebraMap for MatrixMap {
    fn source(&self) -> Arc<dyn Algebra> {
        self.source.clone()
    }

    fn target(&self) -> Arc<dyn Algebra> {
        self.target.clone()
    }

    fn matrix(&self, k: i64) -> Result<RatMatrix> {
        if let Some(m) = self.maps.get(&k) {
            return Ok(m.clone());
        }
        let (r, c) = (self.target.dim(k)?, self.source.dim(k)?);
        if r == 0 || c == 0 {
            Ok(RatMatrix::zeros(r, c))
        } else {
            Err(Error::MissingStructure(format!("map not given in degree {k}")))
        }
    }
}

/// `second ∘ first`.
#[derive(Debug, Clone)]
pub struct ComposedMap {
    pub first: Arc<dyn AlgebraMap>,
    pub second: Arc<dyn AlgebraMap>,
}

impl AlgebraMap for ComposedMap {
    fn source(&self) -> Arc<dyn Algebra> {
        self.first.source()
    }

    fn target(&self) -> Arc<dyn Algebra> {
        self.second.target()
    }

    fn matrix(&self, k: i64) -> Result<RatMatrix> {
        Ok(self.second.matrix(k)?.mul(&self.first.matrix(k)?))
    }
}

/// Cone differential leaving degree `n`:
/// `[[-d_A, 0], [-f, d_B]]` on `A_{n+delta} (+) B_n`.
pub fn cone_differential(f: &dyn AlgebraMap, n: i64) -> Result<RatMatrix> {
    let (a, b) = (f.source(), f.target());
    let delta = a.convention().delta();
    let (an, bn) = (a.dim(n + delta)?, b.dim(n)?);
    let (at, bt) = (a.dim(n + 2 * delta)?, b.dim(n + delta)?);
    let minus = -Rat::one();
    let da = if an == 0 || at == 0 {
        RatMatrix::zeros(at, an)
    } else {
        a.differential(n + delta)?.scaled(&minus)
    };
    let fa = if an == 0 || bt == 0 {
        RatMatrix::zeros(bt, an)
    } else {
        f.matrix(n + delta)?.scaled(&minus)
    };
    let db = if bn == 0 || bt == 0 {
        RatMatrix::zeros(bt, bn)
    } else {
        b.differential(n)?
    };
    Ok(da.hstack(&RatMatrix::zeros(at, bn)).vstack(&fa.hstack(&db)))
}

/// Cohomology of the cone in degree `n`, with representatives.
pub fn cone_cohomology(f: &dyn AlgebraMap, n: i64) -> Result<CohomologyResult> {
    let delta = f.source().convention().delta();
    let z = kernel(&cone_differential(f, n)?);
    let b = image(&cone_differential(f, n - delta)?);
    Ok(CohomologyResult::from_subspaces(n, &z, &b))
}

fn cone_dim(f: &dyn AlgebraMap, n: i64) -> Result<usize> {
    let delta = f.source().convention().delta();
    let d = cone_differential(f, n)?;
    Ok(d.cols() - d.rank() - cone_differential(f, n - delta)?.rank())
}

/// Per-degree evidence for (or against) a quasi-isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIsoCertificate {
    pub up_to: i64,
    pub is_quasi_iso: bool,
    /// `(n, dim H^n(C(f)))` for every checked degree.
    pub cone_dims: Vec<(i64, usize)>,
    /// First degree where the cone has cohomology.
    pub first_failure: Option<i64>,
    /// `(k, dim H^k(A), dim H^k(B), rank H^k(f))`.
    pub cohomology: Vec<(i64, usize, usize, usize)>,
}

fn induced_rank(f: &dyn AlgebraMap, k: i64) -> Result<(usize, usize, usize)> {
    let (a, b) = (f.source(), f.target());
    let ha = algebra_cohomology(&*a, k)?;
    let hb = algebra_cohomology(&*b, k)?;
    if ha.dimension == 0 || hb.dimension == 0 {
        return Ok((ha.dimension, hb.dimension, 0));
    }
    let fm = f.matrix(k)?;
    let cols: Vec<SparseVec> = ha
        .representatives
        .iter()
        .map(|v| hb.classify(&fm.mul_vec(v)).expect("image of a cocycle is a cocycle"))
        .collect();
    Ok((ha.dimension, hb.dimension, RatMatrix::from_cols(hb.dimension, &cols).rank()))
}

/// Checks `H^n(C(f)) = 0` for all `n <= up_to`.
pub fn is_quasi_iso(f: &dyn AlgebraMap, up_to: i64) -> Result<QuasiIsoCertificate> {
    let (a, b) = (f.source(), f.target());
    same_operad(&*a, &*b)?;
    let delta = a.convention().delta();
    let lo = (a.lowest_degree() - delta).min(b.lowest_degree()) - 1;
    let mut cone_dims = Vec::new();
    let mut first_failure = None;
    for n in lo..=up_to {
        let d = cone_dim(f, n)?;
        if d != 0 && first_failure.is_none() {
            first_failure = Some(n);
        }
        cone_dims.push((n, d));
    }
    let mut cohomology = Vec::new();
    for k in a.lowest_degree().min(b.lowest_degree())..=up_to {
        let (x, y, r) = induced_rank(f, k)?;
        cohomology.push((k, x, y, r));
    }
    Ok(QuasiIsoCertificate {
        up_to,
        is_quasi_iso: first_failure.is_none(),
        cone_dims,
        first_failure,
        cohomology,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedReport {
    pub connected: bool,
    pub failing_degree: Option<i64>,
    pub reason: Option<String>,
    /// `(k, dim H^k)` for the checked degrees.
    pub betti: Vec<(i64, usize)>,
}

/// `H^i = 0` for `i < 0`, the unit induces `P(0) ≅ H^0`, and `H^1 = ... = H^r = 0`.
pub fn check_connected(a: &dyn Algebra, r: usize) -> Result<ConnectedReport> {
    let mut betti = Vec::new();
    let fail = |betti: Vec<(i64, usize)>, k: i64, why: String| ConnectedReport {
        connected: false,
        failing_degree: Some(k),
        reason: Some(why),
        betti,
    };
    for k in a.lowest_degree().min(0)..0 {
        let h = algebra_cohomology(a, k)?.dimension;
        betti.push((k, h));
        if h != 0 {
            return Ok(fail(betti, k, format!("H^{k} has dimension {h}")));
        }
    }
    let h0 = algebra_cohomology(a, 0)?;
    betti.push((0, h0.dimension));
    let p = a.operad();
    let p0 = p.dim(0)?;
    let mut classes = Vec::new();
    for op in 0..p0 {
        let e = a.theta(0, &unit_vec(op), &[])?;
        if e.degree != 0 {
            return Ok(fail(betti, 0, format!("P(0) has an operation in degree {}", e.degree)));
        }
        match h0.classify(&e.coords) {
            Some(c) => classes.push(c),
            None => return Ok(fail(betti, 0, "unit is not a cocycle".into())),
        }
    }
    let rank = RatMatrix::from_cols(h0.dimension, &classes).rank();
    if p0 != h0.dimension || rank != p0 {
        return Ok(fail(
            betti,
            0,
            format!("unit map P(0) -> H^0 has rank {rank}, dim P(0) = {p0}, dim H^0 = {}", h0.dimension),
        ));
    }
    for k in 1..=r as i64 {
        let h = algebra_cohomology(a, k)?.dimension;
        betti.push((k, h));
        if h != 0 {
            return Ok(fail(betti, k, format!("H^{k} has dimension {h}")));
        }
    }
    Ok(ConnectedReport {
        connected: true,
        failing_degree: None,
        reason: None,
        betti,
    })
}
