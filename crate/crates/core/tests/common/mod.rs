//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use sullivan_core::linalg::{add_entry, rank, Rat, RatMatrix, SparseVec};
use sullivan_core::operad::OperadTable;

/// Dimension of `⊕_{n <= max_arity} P(n) ⊗_{Σ_n} V^{⊗n}` in degree `k`,
/// computed on the full tensor space (all words, no sorting) modulo the
/// explicit relations `(s_i μ) ⊗ w - ± μ ⊗ (s_i w)`.
pub fn coinvariant_dim(p: &OperadTable, gen_degrees: &[i64], k: i64, max_arity: usize) -> usize {
    let mut total = 0;
    for n in 0..=max_arity.min(p.arity_bound) {
        let dimp = p.arities[n].dim();
        if dimp == 0 {
            continue;
        }
        // all words of length n over the generators
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &words {
                for g in 0..gen_degrees.len() {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            words = next;
        }
        let mut cells: Vec<(usize, Vec<usize>)> = Vec::new();
        for w in &words {
            let wd: i64 = w.iter().map(|&g| gen_degrees[g]).sum();
            for a in 0..dimp {
                if p.arities[n].degrees[a] + wd == k {
                    cells.push((a, w.clone()));
                }
            }
        }
        if cells.is_empty() {
            continue;
        }
        let index: HashMap<(usize, Vec<usize>), usize> =
            cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut rels = Vec::new();
        for (a, w) in &cells {
            for i in 0..n.saturating_sub(1) {
                let mut v = SparseVec::new();
                let sa = p.transpose(n, i, &sullivan_core::linalg::unit_vec(*a));
                for (b, c) in sa {
                    add_entry(&mut v, index[&(b, w.clone())], c);
                }
                let mut sw = w.clone();
                sw.swap(i, i + 1);
                let odd = (gen_degrees[w[i]] * gen_degrees[w[i + 1]]).rem_euclid(2) == 1;
                add_entry(&mut v, index[&(*a, sw)], if odd { Rat::one() } else { -Rat::one() });
                rels.push(v);
            }
        }
        total += cells.len() - rank(&RatMatrix::from_rows(cells.len(), rels));
    }
    total
}

pub mod towers {
    use std::sync::Arc;

    use rand::Rng;
    use rand_chacha::ChaCha8Rng;
    use sullivan_core::free::{FreeAlgebra, FreeElement, Generator};
    use sullivan_core::linalg::{kernel, Rat, SparseVec};
    use sullivan_core::operad::{builtin, OperadTable};
    use sullivan_core::palgebra::{extend_morphism, Algebra, FreeMorphism};
    use sullivan_core::{Convention, Elem};

    pub const BOUND: usize = 5;
    pub const TOP: i64 = 6;

    pub fn operad(i: usize, chain: bool) -> Arc<OperadTable> {
        let c = if chain { Convention::Chain } else { Convention::Cochain };
        builtin(["Com", "Ass", "Lie", "Ger"][i], c, BOUND).unwrap()
    }

    /// Smallest generator degree that keeps arities below the bound through
    /// degree `TOP + 2`.
    fn floor(p: &OperadTable) -> i64 {
        if p.name == "Ger" && p.convention == Convention::Cochain {
            3
        } else {
            2
        }
    }

    fn small(rng: &mut ChaCha8Rng) -> Rat {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-2i64..=2);
        }
        Rat::from_int(c)
    }

    pub fn random_vec(rng: &mut ChaCha8Rng, basis: &[SparseVec]) -> SparseVec {
        let mut v = SparseVec::new();
        while v.is_empty() && !basis.is_empty() {
            for b in basis {
                if rng.gen_bool(0.6) {
                    sullivan_core::linalg::axpy(&mut v, &small(rng), b);
                }
            }
        }
        v
    }

    pub fn random_coords(rng: &mut ChaCha8Rng, dim: usize) -> SparseVec {
        let mut v = SparseVec::new();
        for j in 0..dim {
            if rng.gen_bool(0.5) {
                v.insert(j, small(rng));
            }
        }
        v
    }

    /// A random cocycle of degree `k` in `a` (zero when there is none).
    pub fn random_cocycle(rng: &mut ChaCha8Rng, a: &FreeAlgebra, k: i64) -> FreeElement {
        let n = a.dim(k).unwrap();
        if n == 0 {
            return FreeElement::zero(k);
        }
        let z = kernel(&a.differential(k).unwrap());
        a.from_coords(k, &random_vec(rng, z.vectors())).unwrap()
    }

    /// A Sullivan tower with `stages` stages over operad `p`: a free first
    /// stage, then stages whose generators bound random cocycles of the
    /// previous ones. Generator degrees stay in `[floor, TOP]`.
    pub fn random_tower(rng: &mut ChaCha8Rng, p: &Arc<OperadTable>, stages: usize) -> FreeAlgebra {
        let lo = floor(p);
        let delta = p.convention.delta();
        let first: Vec<Generator> = (0..rng.gen_range(1..=2))
            .map(|i| Generator::new(format!("s0_{i}"), rng.gen_range(lo..=lo + 2), 0))
            .collect();
        let mut a = FreeAlgebra::new(p.clone(), first).unwrap().with_arity_cap(Some(BOUND));
        for s in 1..stages {
            // prefer degrees whose generators can bound something
            let live: Vec<i64> = (lo..=TOP).filter(|&k| a.dim(k + delta).unwrap() > 0).collect();
            let k = if live.is_empty() || rng.gen_bool(0.15) {
                rng.gen_range(lo..=TOP)
            } else {
                live[rng.gen_range(0..live.len())]
            };
            let new = (0..rng.gen_range(1..=2))
                .map(|i| (format!("s{s}_{i}"), random_cocycle(rng, &a, k + delta)))
                .collect();
            a = a.ks_extend(new, k).unwrap();
        }
        a
    }

    /// `c ⊗ Λ(w, u)` with `d u = w`, projected back onto `c` by a map sending
    /// `u` to a random element `x` and `w` to `d x`. Surjective, and a
    /// quasi-isomorphism.
    pub fn contractible_projection(rng: &mut ChaCha8Rng, c: &Arc<FreeAlgebra>) -> FreeMorphism {
        let delta = c.convention().delta();
        let lo = floor(c.operad());
        // degrees of w and u, both at least lo
        let (dw, du) = if delta == 1 {
            let e = rng.gen_range(lo + 1..=TOP);
            (e, e - 1)
        } else {
            let e = rng.gen_range(lo..TOP);
            (e, e + 1)
        };
        let a = c
            .ks_extend(vec![("w".into(), FreeElement::zero(dw + delta))], dw)
            .unwrap();
        let w = a.generator_element(a.generators().len() - 1);
        let a = Arc::new(a.ks_extend(vec![("u".into(), w)], du).unwrap());
        let x = random_coords(rng, c.dim(du).unwrap());
        let dx = c.differential(du).unwrap().mul_vec(&x);
        let mut images: Vec<Elem> = (0..c.generators().len())
            .map(|i| Elem::new(c.generators()[i].degree, c.coords(&c.generator_element(i)).unwrap()))
            .collect();
        images.push(Elem::new(dw, dx));
        images.push(Elem::new(du, x));
        extend_morphism(a, c.clone(), images).unwrap()
    }

    pub fn identity(c: &Arc<FreeAlgebra>) -> FreeMorphism {
        let images = (0..c.generators().len())
            .map(|i| Elem::new(c.generators()[i].degree, c.coords(&c.generator_element(i)).unwrap()))
            .collect();
        extend_morphism(c.clone(), c.clone() as Arc<dyn Algebra>, images).unwrap()
    }
}
