use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::Rat;

/// `e_op ⊗ (slots)` in canonical form: slots sorted by generator key and
/// `op` a representative modulo the stabilizer of the slot word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub arity: usize,
    pub slots: Vec<usize>,
    pub op: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeElement {
    pub degree: i64,
    pub terms: BTreeMap<Monomial, Rat>,
}

impl FreeElement {
    pub fn zero(degree: i64) -> Self {
        FreeElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(degree: i64, m: Monomial, c: Rat) -> Self {
        let mut x = FreeElement::zero(degree);
        x.add_term(m, c);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FreeElement, c: &Rat) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rat) -> FreeElement {
        let mut out = FreeElement::zero(self.degree);
        out.add_scaled(self, c);
        out
    }
}
