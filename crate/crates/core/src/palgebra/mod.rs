//! Algebras over operads: the common interface, tabular algebras, morphisms,
//! quasi-isomorphism certificates and connectivity checks.

mod morphism;
mod product;
mod tabular;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{ChainComplex, CohomologyResult, Convention, GradedSpace};
use crate::error::{Error, Result};
use crate::free::FreeAlgebra;
use crate::linalg::{image, kernel, RatMatrix, SparseVec};
use crate::operad::OperadTable;

pub use morphism::{
    check_connected, cone_cohomology, cone_differential, extend_morphism, is_quasi_iso, AlgebraMap, ComposedMap,
    ConnectedReport, FreeMorphism, MatrixMap, QuasiIsoCertificate,
};
pub use product::{ProductAlgebra, SubAlgebra};
pub use tabular::{restrict, BinaryTable, TabularAlgebra, ThetaKey};

/// A homogeneous element given by coordinates in the degree's basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elem {
    pub degree: i64,
    pub coords: SparseVec,
}

impl Elem {
    pub fn zero(degree: i64) -> Self {
        Elem {
            degree,
            coords: SparseVec::new(),
        }
    }

    pub fn basis(degree: i64, i: usize) -> Self {
        Elem {
            degree,
            coords: crate::linalg::unit_vec(i),
        }
    }

    pub fn new(degree: i64, coords: SparseVec) -> Self {
        Elem { degree, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// What the engine needs from an algebra: degreewise bases, the differential,
/// structure maps and the unit.
pub trait Algebra: Send + Sync + std::fmt::Debug {
    fn operad(&self) -> &Arc<OperadTable>;

    fn convention(&self) -> Convention {
        self.operad().convention
    }

    /// The algebra vanishes below this degree.
    fn lowest_degree(&self) -> i64;

    /// Data is available through this degree (`None`: unbounded).
    fn highest_degree(&self) -> Option<i64>;

    fn dim(&self, k: i64) -> Result<usize>;

    /// Matrix of `d` from degree `k` to degree `k + delta`.
    fn differential(&self, k: i64) -> Result<RatMatrix>;

    /// `θ(op; args)` with `op ∈ P(n)` a combination of basis operations.
    fn theta(&self, n: usize, op: &SparseVec, args: &[Elem]) -> Result<Elem>;

    fn basis_labels(&self, k: i64) -> Result<Vec<String>> {
        Ok((0..self.dim(k)?).map(|i| format!("e{k}_{i}")).collect())
    }

    /// Image of the unit of `P(0)` (unitary operads only).
    fn unit(&self) -> Result<Option<Elem>> {
        match self.operad().unit_op() {
            Some(u) => Ok(Some(self.theta(0, &crate::linalg::unit_vec(u.index), &[])?)),
            None => Ok(None),
        }
    }

    /// Concrete type, for serialization.
    fn as_any(&self) -> Option<&dyn std::any::Any> {
        None
    }

    fn check_degree(&self, k: i64) -> Result<()> {
        if let Some(hi) = self.highest_degree() {
            if k > hi {
                return Err(Error::OutOfWindow {
                    degree: k,
                    lo: self.lowest_degree(),
                    hi,
                });
            }
        }
        Ok(())
    }
}

/// The underlying complex restricted to `[lo, hi]`.
pub fn complex_window(a: &dyn Algebra, lo: i64, hi: i64) -> Result<ChainComplex> {
    let delta = a.convention().delta();
    let mut space = GradedSpace::new(lo, hi);
    for k in lo..=hi {
        space.set_basis(k, a.basis_labels(k)?);
    }
    let mut d = BTreeMap::new();
    for k in lo..=hi {
        if space.in_window(k + delta) {
            d.insert(k, a.differential(k)?);
        }
    }
    ChainComplex::new(space, a.convention(), d)
}

/// Cohomology of an algebra in degree `k`.
pub fn algebra_cohomology(a: &dyn Algebra, k: i64) -> Result<CohomologyResult> {
    let delta = a.convention().delta();
    let z = kernel(&a.differential(k)?);
    let b = image(&a.differential(k - delta)?);
    Ok(CohomologyResult::from_subspaces(k, &z, &b))
}

pub fn betti(a: &dyn Algebra, k: i64) -> Result<usize> {
    let delta = a.convention().delta();
    let dim = a.dim(k)?;
    Ok(dim - a.differential(k)?.rank() - a.differential(k - delta)?.rank())
}

impl Algebra for FreeAlgebra {
    fn as_any(&self) -> Option<&dyn std::any::Any> {
        Some(self)
    }


    fn operad(&self) -> &Arc<OperadTable> {
        FreeAlgebra::operad(self)
    }

    fn lowest_degree(&self) -> i64 {
        // generators have degree >= 1; operations may lower degrees
        let bound = self.operad().arity_bound;
        let gmin = self.generators().iter().map(|g| g.degree).min().unwrap_or(0);
        (0..=bound)
            .filter_map(|n| self.operad().min_degree(n).map(|q| q + n as i64 * gmin))
            .min()
            .unwrap_or(0)
            .min(0)
    }

    fn highest_degree(&self) -> Option<i64> {
        None
    }

    fn dim(&self, k: i64) -> Result<usize> {
        FreeAlgebra::dim(self, k)
    }

    fn differential(&self, k: i64) -> Result<RatMatrix> {
        Ok((*FreeAlgebra::differential(self, k)?).clone())
    }

    fn theta(&self, n: usize, op: &SparseVec, args: &[Elem]) -> Result<Elem> {
        let xs = args
            .iter()
            .map(|e| self.from_coords(e.degree, &e.coords))
            .collect::<Result<Vec<_>>>()?;
        let y = FreeAlgebra::theta(self, n, op, &xs)?;
        Ok(Elem::new(y.degree, self.coords(&y)?))
    }

    fn basis_labels(&self, k: i64) -> Result<Vec<String>> {
        Ok(self.basis(k)?.monomials.iter().map(|m| self.format_monomial(m)).collect())
    }
}
