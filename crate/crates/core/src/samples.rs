//! Small ready-made algebras used by the command line tool, tests and benchmarks.

use std::collections::BTreeMap;

use crate::complex::{ChainComplex, Convention, GradedSpace};
use crate::error::Result;
use crate::free::{FreeAlgebra, Generator};
use crate::linalg::{unit_vec, Rat, SparseVec};
use crate::operad::builtin;
use crate::palgebra::{BinaryTable, TabularAlgebra};

/// `Q[x]/(x^k)` over unitary Com with `|x| = deg` even, on the window `[0, hi]`.
pub fn truncated_polynomial(deg: i64, k: usize, hi: i64, arity_bound: usize) -> Result<TabularAlgebra> {
    assert!(deg > 0 && deg % 2 == 0 && k >= 1);
    let com = builtin("Com", Convention::Cochain, arity_bound)?;
    let mut space = GradedSpace::new(0, hi);
    for j in 0..k as i64 {
        if j * deg <= hi {
            let label = match j {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            };
            space.set_basis(j * deg, vec![label]);
        }
    }
    let complex = ChainComplex::new(space, Convention::Cochain, BTreeMap::new())?;
    let mut mu = BinaryTable::new();
    for a in 0..k as i64 {
        for b in 0..k as i64 {
            if (a + b) < k as i64 && (a + b) * deg <= hi {
                mu.insert(((a * deg, 0), (b * deg, 0)), unit_vec(0));
            }
        }
    }
    TabularAlgebra::from_binary(
        format!("Q[x{deg}]/x^{k}"),
        com,
        complex,
        vec![mu],
        Some(unit_vec(0)),
        arity_bound,
    )
}

/// Rational cohomology of the 2-sphere, `Q[x]/(x^2)` with `|x| = 2`.
pub fn s2_cohomology(hi: i64, arity_bound: usize) -> Result<TabularAlgebra> {
    let mut a = truncated_polynomial(2, 2, hi, arity_bound)?;
    a.name = "H(S^2)".into();
    Ok(a)
}

/// The Sullivan model `Com<x_2, y_3>`, `dy = x^2`.
pub fn s2_model(arity_bound: usize) -> Result<FreeAlgebra> {
    let com = builtin("Com", Convention::Cochain, arity_bound)?;
    let a = FreeAlgebra::new(com, vec![Generator::new("x", 2, 0)])?;
    let x = a.generator_element(0);
    let xx = a.theta(2, &unit_vec(0), &[x.clone(), x])?;
    a.ks_extend(vec![("y".into(), xx)], 3)
}

/// Free algebra with zero differential on generators `(label, degree)`.
pub fn free_on(operad: &str, convention: Convention, arity_bound: usize, gens: &[(&str, i64)]) -> Result<FreeAlgebra> {
    let p = builtin(operad, convention, arity_bound)?;
    FreeAlgebra::new(p, gens.iter().map(|(l, d)| Generator::new(*l, *d, 0)).collect())
}

/// A two-term acyclic complex `Q u --1--> Q v` with zero products.
pub fn acyclic_pair(
    operad: &str,
    convention: Convention,
    arity_bound: usize,
    u: i64,
    hi: i64,
) -> Result<TabularAlgebra> {
    let p = builtin(operad, convention, arity_bound)?;
    let v = u + convention.delta();
    let lo = u.min(v).min(0);
    let mut space = GradedSpace::new(lo, hi);
    space.set_basis(u, vec!["u".into()]);
    space.set_basis(v, vec!["v".into()]);
    let mut d = BTreeMap::new();
    let mut one = SparseVec::new();
    one.insert(0, Rat::one());
    d.insert(u, crate::linalg::RatMatrix::from_cols(1, &[one]));
    let complex = ChainComplex::new(space, convention, d)?;
    let gens = p.presentation.as_ref().map(|q| q.generators.len()).unwrap_or(0);
    let unit = p.unit_op().map(|_| SparseVec::new());
    TabularAlgebra::from_binary("acyclic", p, complex, vec![BinaryTable::new(); gens], unit, 2)
}
