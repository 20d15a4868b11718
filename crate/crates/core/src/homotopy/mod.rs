//! Path objects, homotopies, lifting through surjective quasi-isomorphisms,
//! mapping paths, sections onto minimal algebras and the comparison of two
//! minimal models of the same algebra.

mod path;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::MinimalModel;
use crate::error::{Error, Result};
use crate::free::FreeAlgebra;
use crate::linalg::{kernel, solve, Rat, RatMatrix, SparseVec, SubspaceBasis};
use crate::palgebra::{
    extend_morphism, is_quasi_iso, Algebra, AlgebraMap, Elem, FreeMorphism, MatrixMap, ProductAlgebra, SubAlgebra,
};

pub use path::{PathAlgebra, PathElement, PathMap, PathMapKind};

/// Checks `f d = d f` between degrees `lo` and `hi`.
pub fn check_chain_map(f: &dyn AlgebraMap, lo: i64, hi: i64) -> Result<()> {
    let (a, b) = (f.source(), f.target());
    let delta = a.convention().delta();
    for k in lo..=hi {
        let t = k + delta;
        if !(lo..=hi).contains(&t) {
            continue;
        }
        let l = f.matrix(t)?.mul(&a.differential(k)?);
        let r = b.differential(k)?.mul(&f.matrix(k)?);
        if l != r {
            return Err(Error::NotChainMap(k));
        }
    }
    Ok(())
}

/// Generators of a Sullivan algebra in an order compatible with its stages.
fn stage_order(c: &FreeAlgebra) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..c.generators().len()).collect();
    idx.sort_by_key(|&i| (c.generators()[i].stage, i));
    idx
}

/// Images `β_v` in `A` with `dβ_v = g(dv)` and `w(β_v) = wanted_v`, solved
/// generator by generator along the stages of `c`.
fn solve_stagewise(c: &Arc<FreeAlgebra>, wanted: &[Elem], w: &dyn AlgebraMap) -> Result<Vec<Elem>> {
    if !c.is_sullivan() {
        return Err(Error::Precondition("source is not a Sullivan algebra".into()));
    }
    let a = w.source();
    let delta = c.convention().delta();
    let zeros: Vec<Elem> = c.generators().iter().map(|g| Elem::zero(g.degree)).collect();
    let mut g = FreeMorphism::from_images_unchecked(c.clone(), a.clone(), zeros);
    for v in stage_order(c) {
        let gen = &c.generators()[v];
        let n = gen.degree;
        let alpha = g.apply(c.generator_differential(v))?;
        let da = a.differential(n)?;
        let wn = w.matrix(n)?;
        let m = da.vstack(&wn);
        let mut rhs = alpha.coords.clone();
        let off = a.dim(n + delta)?;
        for (&i, x) in &wanted[v].coords {
            rhs.insert(off + i, x.clone());
        }
        let beta = solve(&m, &rhs)
            .ok_or_else(|| Error::NoSolution(format!("no lift for generator {} in degree {n}", gen.label)))?;
        g.set_image(v, Elem::new(n, beta));
    }
    Ok(g.images)
}

/// Post-composition `w ∘ g` on generators.
fn compose_images(w: &dyn AlgebraMap, images: &[Elem]) -> Result<Vec<Elem>> {
    images.iter().map(|e| w.apply_elem(e)).collect()
}

/// Lifts `f: C -> B` through a surjective quasi-isomorphism `w: A -> B`:
/// returns `g: C -> A` with `w ∘ g = f` exactly.
pub fn lift_through_surjection(
    c: Arc<FreeAlgebra>,
    f: &dyn AlgebraMap,
    w: &dyn AlgebraMap,
    up_to: i64,
) -> Result<FreeMorphism> {
    let (a, b) = (w.source(), w.target());
    for k in a.lowest_degree().min(b.lowest_degree())..=up_to {
        let m = w.matrix(k)?;
        if m.rank() != b.dim(k)? {
            return Err(Error::Precondition(format!("w is not surjective in degree {k}")));
        }
    }
    let cert = is_quasi_iso(w, up_to)?;
    if !cert.is_quasi_iso {
        return Err(Error::Precondition(format!(
            "w is not a quasi-isomorphism (degree {:?})",
            cert.first_failure
        )));
    }
    lift_unchecked(c, f, w)
}

fn lift_unchecked(c: Arc<FreeAlgebra>, f: &dyn AlgebraMap, w: &dyn AlgebraMap) -> Result<FreeMorphism> {
    let wanted = FreeMorphism::generator_images_of(f, &c)?;
    let images = solve_stagewise(&c, &wanted, w)?;
    if compose_images(w, &images)? != wanted {
        return Err(Error::NoSolution("lift does not commute".into()));
    }
    extend_morphism(c, w.source(), images)
}

/// The mapping path `M(w) = {(a, b(t, dt)) : w(a) = b(0)}` with its maps.
#[derive(Debug, Clone)]
pub struct MappingPath {
    pub algebra: Arc<SubAlgebra>,
    pub product: Arc<ProductAlgebra>,
    pub path: Arc<PathAlgebra>,
    /// First projection `M(w) -> A`.
    pub p: MatrixMap,
    /// Evaluation of the path at `t = 1`, `M(w) -> B`.
    pub q: MatrixMap,
    /// `a -> (a, ι w(a))`, `A -> M(w)`.
    pub j: MatrixMap,
}

impl MappingPath {
    /// The two components of an element of `M(w)`.
    pub fn components(&self, e: &Elem) -> Result<(Elem, PathElement)> {
        let parts = self.product.split(&self.algebra.to_parent(e))?;
        Ok((parts[0].clone(), self.path.from_elem(&parts[1])?))
    }
}

/// Builds the mapping path of `w: A -> B` on the degree window `[lo, hi]`
/// with paths of t-degree at most `t_max`.
pub fn mapping_path(w: Arc<dyn AlgebraMap>, t_max: usize, lo: i64, hi: i64) -> Result<MappingPath> {
    let (a, b) = (w.source(), w.target());
    let path = Arc::new(PathAlgebra::new(b.clone(), t_max));
    let product = Arc::new(ProductAlgebra::new(vec![a.clone(), path.clone()])?);
    let mut bases = BTreeMap::new();
    let mut incl = BTreeMap::new();
    for k in lo..=hi {
        let (da, dp) = (a.dim(k)?, path.dim(k)?);
        let wk = if da == 0 { RatMatrix::zeros(b.dim(k)?, 0) } else { w.matrix(k)? };
        let e0 = path.eval_matrix(k, false)?.scaled(&-Rat::one());
        let cond = wk.hstack(&e0);
        let ker = if cond.rows() == 0 {
            SubspaceBasis::full(da + dp)
        } else {
            kernel(&cond)
        };
        incl.insert(k, RatMatrix::from_cols(da + dp, ker.vectors()));
        bases.insert(k, ker);
    }
    let algebra = Arc::new(SubAlgebra::new(product.clone(), lo, hi, bases)?);
    let mut p = BTreeMap::new();
    let mut q = BTreeMap::new();
    let mut j = BTreeMap::new();
    for k in lo..=hi {
        let inc = &incl[&k];
        p.insert(k, product.projection(0, k)?.mul(inc));
        q.insert(k, path.eval_matrix(k, true)?.mul(&product.projection(1, k)?).mul(inc));
        let da = a.dim(k)?;
        let mut cols = Vec::with_capacity(da);
        let wk = if da == 0 { RatMatrix::zeros(b.dim(k)?, 0) } else { w.matrix(k)? };
        let iota = path.include_matrix(k)?;
        for i in 0..da {
            let mut x = SparseVec::new();
            x.insert(i, Rat::one());
            let bpart = iota.mul_vec(&wk.mul_vec(&x));
            let joined = product.join(k, &[Elem::new(k, x), Elem::new(k, bpart)])?;
            cols.push(algebra.from_parent(&joined)?.coords);
        }
        j.insert(k, RatMatrix::from_cols(algebra.dim(k)?, &cols));
    }
    let m: Arc<dyn Algebra> = algebra.clone();
    let mp = MappingPath {
        algebra,
        product,
        path,
        p: MatrixMap { source: m.clone(), target: a.clone(), maps: p },
        q: MatrixMap { source: m.clone(), target: b.clone(), maps: q },
        j: MatrixMap { source: a, target: m, maps: j },
    };
    for k in lo..=hi {
        if mp.q.matrix(k)?.mul(&mp.j.matrix(k)?) != w.matrix(k)? {
            return Err(Error::NotMorphism(format!("q j != w in degree {k}")));
        }
        if mp.q.matrix(k)?.rank() != b.dim(k)? {
            return Err(Error::Precondition(format!("q is not surjective in degree {k}")));
        }
    }
    Ok(mp)
}

/// A morphism `h: C -> A[t, dt]`; a homotopy from `δ⁰ h` to `δ¹ h`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    pub path: Arc<PathAlgebra>,
    pub map: FreeMorphism,
}

impl Homotopy {
    pub fn new(source: Arc<FreeAlgebra>, path: Arc<PathAlgebra>, images: Vec<PathElement>) -> Result<Self> {
        let elems = images.iter().map(|p| path.to_elem(p)).collect::<Result<Vec<_>>>()?;
        let map = extend_morphism(source, path.clone(), elems)?;
        Ok(Homotopy { path, map })
    }

    /// `ι ∘ f`, the constant homotopy.
    pub fn constant(f: &FreeMorphism, t_max: usize) -> Result<Self> {
        let path = Arc::new(PathAlgebra::new(f.target.clone(), t_max));
        let images = f.images.iter().map(|e| PathElement::constant(e, t_max)).collect();
        Self::new(f.source.clone(), path, images)
    }

    pub fn images(&self) -> Result<Vec<PathElement>> {
        self.map.images.iter().map(|e| self.path.from_elem(e)).collect()
    }

    /// Generator images of `δ⁰ h` and `δ¹ h`.
    pub fn endpoints(&self) -> Result<(Vec<Elem>, Vec<Elem>)> {
        let imgs = self.images()?;
        Ok((imgs.iter().map(|p| p.at0()).collect(), imgs.iter().map(|p| p.at1()).collect()))
    }

    /// The homotopy run backwards, `t -> 1 - t`.
    pub fn reversed(&self) -> Result<Self> {
        let imgs = self.images()?.iter().map(|p| p.reversed()).collect();
        Self::new(self.map.source.clone(), self.path.clone(), imgs)
    }
}

/// `δ⁰ h = f` and `δ¹ h = g`, compared on generators.
pub fn verify_homotopy(h: &Homotopy, f: &dyn AlgebraMap, g: &dyn AlgebraMap) -> Result<bool> {
    let (s, e) = h.endpoints()?;
    let c = &h.map.source;
    Ok(FreeMorphism::generator_images_of(f, c)? == s && FreeMorphism::generator_images_of(g, c)? == e)
}

/// A morphism `g: M -> A` with `f ∘ g = id` for a quasi-isomorphism `f: A -> M`
/// onto a minimal algebra, built stage by stage.
pub fn section_of_quasi_iso(f: &dyn AlgebraMap, m: Arc<FreeAlgebra>, up_to: i64) -> Result<FreeMorphism> {
    let a = f.source();
    check_chain_map(f, a.lowest_degree().min(0), up_to + 1)?;
    let cert = is_quasi_iso(f, up_to)?;
    if !cert.is_quasi_iso {
        return Err(Error::Precondition(format!(
            "not a quasi-isomorphism (degree {:?})",
            cert.first_failure
        )));
    }
    let wanted: Vec<Elem> = (0..m.generators().len())
        .map(|i| {
            let g = m.generator_element(i);
            Ok(Elem::new(g.degree, m.coords(&g)?))
        })
        .collect::<Result<_>>()?;
    let images = solve_stagewise(&m, &wanted, f)?;
    if compose_images(f, &images)? != wanted {
        return Err(Error::NoSolution("section does not split f".into()));
    }
    extend_morphism(m, a, images)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub t_start: usize,
    pub t_ceiling: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { t_start: 1, t_ceiling: 16 }
    }
}

#[derive(Debug, Clone)]
pub struct Comparison {
    /// The isomorphism `g: M -> M'`.
    pub map: FreeMorphism,
    /// Linear parts of `g` on generators, per degree.
    pub generator_matrices: BTreeMap<i64, RatMatrix>,
    /// `h` with `δ⁰ h = f' ∘ g` and `δ¹ h = f`, when it could be certified.
    pub homotopy: Option<Homotopy>,
    /// Why the homotopy witness is missing.
    pub witness_flag: Option<String>,
    pub t_max: usize,
}

/// Matrix of the linear part of `g` from generators of degree `n` of the
/// source to generators of degree `n` of the target.
pub fn linear_part(g: &FreeMorphism, target: &FreeAlgebra, n: i64) -> Result<RatMatrix> {
    let src: Vec<usize> = (0..g.source.generators().len()).filter(|&i| g.source.generators()[i].degree == n).collect();
    let tgt: Vec<usize> = (0..target.generators().len()).filter(|&i| target.generators()[i].degree == n).collect();
    let basis = target.basis(n)?;
    let mut row_of = BTreeMap::new();
    for (r, &t) in tgt.iter().enumerate() {
        row_of.insert(t, r);
    }
    let mut m = RatMatrix::zeros(tgt.len(), src.len());
    for (col, &s) in src.iter().enumerate() {
        for (&i, c) in &g.images[s].coords {
            let mono = &basis.monomials[i];
            if mono.arity == 1 {
                if let Some(&r) = row_of.get(&mono.slots[0]) {
                    m.set(r, col, c.clone());
                }
            }
        }
    }
    Ok(m)
}

fn same_target(a: &MinimalModel, b: &MinimalModel) -> bool {
    std::ptr::eq(
        Arc::as_ptr(&a.map.target) as *const u8,
        Arc::as_ptr(&b.map.target) as *const u8,
    )
}

/// The comparison isomorphism `g: M -> M'` between two minimal models of the
/// same algebra, with `f' ∘ g ≃ f`.
pub fn compare_models(m: &MinimalModel, m2: &MinimalModel, opts: &CompareOptions) -> Result<Comparison> {
    if !same_target(m, m2) {
        return Err(Error::Precondition("models have different targets".into()));
    }
    if m.r != m2.r || m.truncation != m2.truncation {
        return Err(Error::Precondition("models differ in r or truncation".into()));
    }
    let mut t = opts.t_start.max(1);
    loop {
        match compare_at(m, m2, t) {
            Err(Error::PathDegreeOverflow(_)) if t * 2 <= opts.t_ceiling => t *= 2,
            other => return other,
        }
    }
}

fn compare_at(m: &MinimalModel, m2: &MinimalModel, t_max: usize) -> Result<Comparison> {
    let a = m.map.target.clone();
    let delta = a.convention().delta();
    let n = m.truncation;
    let path_hi = PathAlgebra::new(a.clone(), t_max).highest_degree();
    let hi = path_hi.map_or(n + 1, |h| h.min(n + 1));
    let lo = Algebra::lowest_degree(&*m2.model).min(a.lowest_degree()) + delta.min(0);
    let f2: Arc<dyn AlgebraMap> = Arc::new(m2.map.clone());
    let mp = mapping_path(f2, t_max, lo, hi)?;
    let lifted = lift_unchecked(m.model.clone(), &m.map, &mp.q)?;
    let mut images = Vec::new();
    let mut hom = Vec::new();
    for e in &lifted.images {
        let (x, p) = mp.components(e)?;
        images.push(x);
        hom.push(p);
    }
    let g = extend_morphism(m.model.clone(), m2.model.clone(), images)?;
    let mut mats = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i64> = m
        .model
        .generators()
        .iter()
        .chain(m2.model.generators())
        .map(|x| x.degree)
        .collect();
    for d in degrees {
        let lp = linear_part(&g, &m2.model, d)?;
        if lp.rows() != lp.cols() || lp.rank() != lp.rows() {
            return Err(Error::Precondition(format!("comparison map is not invertible on generators of degree {d}")));
        }
        mats.insert(d, lp);
    }
    let (homotopy, witness_flag) = match Homotopy::new(m.model.clone(), mp.path.clone(), hom) {
        Ok(h) => {
            let f2g = crate::palgebra::ComposedMap { first: Arc::new(g.clone()), second: Arc::new(m2.map.clone()) };
            match verify_homotopy(&h, &f2g, &m.map) {
                Ok(true) => (Some(h), None),
                Ok(false) => (None, Some("endpoint check failed".to_string())),
                Err(e) => (None, Some(e.to_string())),
            }
        }
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(Comparison {
        map: g,
        generator_matrices: mats,
        homotopy,
        witness_flag,
        t_max,
    })
}
