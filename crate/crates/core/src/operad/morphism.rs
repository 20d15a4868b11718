use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{unit_vec, RatMatrix, SparseVec};

use super::table::{OperadTable, Unitality};
use super::validate::{Axiom, ValidationReport};

/// Arity-wise linear maps `P(n) -> Q(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadMorphism {
    pub source: Arc<OperadTable>,
    pub target: Arc<OperadTable>,
    /// `maps[n]` is `dim Q(n) x dim P(n)`.
    pub maps: Vec<RatMatrix>,
}

impl OperadMorphism {
    pub fn identity(p: Arc<OperadTable>) -> Self {
        let maps = p.arities.iter().map(|a| RatMatrix::identity(a.dim())).collect();
        OperadMorphism {
            source: p.clone(),
            target: p,
            maps,
        }
    }

    /// The morphism determined by images of the binary generators of a
    /// presented source operad.
    pub fn from_generators(
        source: Arc<OperadTable>,
        target: Arc<OperadTable>,
        images: Vec<SparseVec>,
    ) -> Result<Self> {
        if source.convention != target.convention {
            return Err(Error::ConventionMismatch("operad morphism".into()));
        }
        if target.arity_bound < source.arity_bound {
            return Err(Error::ArityOverflow {
                arity: source.arity_bound,
                bound: target.arity_bound,
            });
        }
        let pres = source
            .presentation
            .as_ref()
            .ok_or_else(|| Error::MissingStructure(format!("{} has no generator presentation", source.name)))?;
        if images.len() != pres.generators.len() {
            return Err(Error::Precondition(format!(
                "{} generator images given, {} expected",
                images.len(),
                pres.generators.len()
            )));
        }
        let mut maps = Vec::new();
        for n in 0..=source.arity_bound {
            let mut cols = Vec::new();
            for t in &pres.trees[n] {
                cols.push(match t {
                    Some(t) => target.eval_tree(t, &images)?,
                    None => {
                        if target.unitality != Unitality::Unitary {
                            return Err(Error::OperadMismatch("unit of P(0) has no image".into()));
                        }
                        unit_vec(0)
                    }
                });
            }
            maps.push(RatMatrix::from_cols(target.dim(n)?, &cols));
        }
        Ok(OperadMorphism { source, target, maps })
    }

    pub fn apply(&self, n: usize, v: &SparseVec) -> SparseVec {
        self.maps[n].mul_vec(v)
    }

    /// Checks that the morphism preserves the identity, degrees, the
    /// symmetric action, compositions and differentials.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let (p, q) = (&*self.source, &*self.target);
        let mut check = |ok: bool, axiom: Axiom, w: &dyn Fn() -> String| {
            rep.checks += 1;
            if !ok {
                rep.violation_count += 1;
                if rep.violations.len() < 64 {
                    rep.violations.push(super::validate::Violation { axiom, witness: w() });
                }
            }
        };
        check(p.convention == q.convention, Axiom::Shape, &|| "conventions differ".into());
        check(
            self.maps.len() == p.arity_bound + 1 && q.arity_bound >= p.arity_bound,
            Axiom::Shape,
            &|| "arity ranges differ".into(),
        );
        if rep.violation_count > 0 {
            return rep;
        }
        let mut check = |ok: bool, axiom: Axiom, w: &dyn Fn() -> String| {
            rep.checks += 1;
            if !ok {
                rep.violation_count += 1;
                if rep.violations.len() < 64 {
                    rep.violations.push(super::validate::Violation { axiom, witness: w() });
                }
            }
        };
        check(self.apply(1, &unit_vec(0)) == unit_vec(0), Axiom::Unit, &|| "id not preserved".into());
        for n in 0..=p.arity_bound {
            let f = &self.maps[n];
            for (r, c, _) in f.entries() {
                check(
                    q.arities[n].degrees[r] == p.arities[n].degrees[c],
                    Axiom::Degree,
                    &|| format!("image of {} has wrong degree", p.arities[n].labels[c]),
                );
            }
            for i in 0..n.saturating_sub(1) {
                let lhs = f.mul(&p.arities[n].transpositions[i]);
                let rhs = q.arities[n].transpositions[i].mul(f);
                check(lhs == rhs, Axiom::Equivariance, &|| format!("s_{i} in arity {n}"));
            }
            let lhs = f.mul(&p.arities[n].differential);
            let rhs = q.arities[n].differential.mul(f);
            check(lhs == rhs, Axiom::Derivation, &|| format!("differential in arity {n}"));
        }
        for m in 1..=p.arity_bound {
            for n in 0..=p.arity_bound + 1 - m {
                for i in 0..m {
                    for a in 0..p.arities[m].dim() {
                        for b in 0..p.arities[n].dim() {
                            let Ok(e) = p.compose_basis(m, i, a, n, b) else { continue };
                            let lhs = self.apply(m + n - 1, e);
                            let rhs = q
                                .compose(m, i, &self.apply(m, &unit_vec(a)), n, &self.apply(n, &unit_vec(b)))
                                .unwrap_or_default();
                            check(lhs == rhs, Axiom::AssociativitySequential, &|| {
                                format!(
                                    "F({} o_{i} {}) != F({}) o_{i} F({})",
                                    p.arities[m].labels[a], p.arities[n].labels[b], p.arities[m].labels[a], p.arities[n].labels[b]
                                )
                            });
                        }
                    }
                }
            }
        }
        rep
    }
}
