//! Random complexes with known cohomology: a normal form (homology classes
//! plus contractible pairs) conjugated by random invertible matrices.

use std::collections::BTreeMap;

use proptest::prelude::*;
use sullivan_core::complex::{cone, ChainComplex, ChainMap, GradedSpace};
use sullivan_core::linalg::{kernel, rank, solve, Rat, RatMatrix};
use sullivan_core::Convention;

const LO: i64 = 0;
const HI: i64 = 5;

/// Invertible `n x n` matrix and its inverse, from elementary row operations.
fn invertible(n: usize, ops: &[(usize, usize, i64)]) -> (RatMatrix, RatMatrix) {
    let (mut g, mut ginv) = (RatMatrix::identity(n), RatMatrix::identity(n));
    for &(i, j, c) in ops {
        let (i, j) = (i % n.max(1), j % n.max(1));
        if n == 0 || i == j || c == 0 {
            continue;
        }
        let mut e = RatMatrix::identity(n);
        e.set(i, j, Rat::from_int(c));
        let mut einv = RatMatrix::identity(n);
        einv.set(i, j, Rat::from_int(-c));
        g = e.mul(&g);
        ginv = ginv.mul(&einv);
    }
    (g, ginv)
}

struct Sample {
    c: ChainComplex,
    betti: BTreeMap<i64, usize>,
}

/// `h[k]` classes and `e[k]` pairs `a -> da` leaving degree `k`, in
/// `[LO, HI]`, padded by a zero degree on each side.
fn sample(conv: Convention, h: &[usize], e: &[usize], ops: &[(usize, usize, i64)]) -> Sample {
    let delta = conv.delta();
    let idx = |k: i64| (k - LO) as usize;
    let pairs = |k: i64| -> usize {
        if !(LO..=HI).contains(&k) || !(LO..=HI).contains(&(k + delta)) {
            0
        } else {
            e[idx(k)]
        }
    };
    let dim = |k: i64| -> usize {
        if !(LO..=HI).contains(&k) {
            0
        } else {
            h[idx(k)] + pairs(k) + pairs(k - delta)
        }
    };
    let space = GradedSpace::from_dims(LO - 1, HI + 1, (LO - 1..=HI + 1).map(|k| (k, dim(k))));
    let conj: BTreeMap<i64, (RatMatrix, RatMatrix)> = (LO - 1..=HI + 1)
        .map(|k| (k, invertible(dim(k), &ops[(idx(k.clamp(LO, HI)) * 3) % ops.len()..])))
        .collect();
    let mut d = BTreeMap::new();
    for k in LO - 1..=HI + 1 {
        let t = k + delta;
        if !(LO - 1..=HI + 1).contains(&t) {
            continue;
        }
        let mut m = RatMatrix::zeros(dim(t), dim(k));
        for i in 0..pairs(k) {
            // source block starts after the classes; target block after classes and sources
            m.set(h[idx(t)] + pairs(t) + i, h[idx(k)] + i, Rat::one());
        }
        let m = conj[&t].0.mul(&m).mul(&conj[&k].1);
        d.insert(k, m);
    }
    let betti = (LO..=HI).map(|k| (k, h[idx(k)])).collect();
    Sample { c: ChainComplex::new(space, conv, d).unwrap(), betti }
}

fn conv_of(chain: bool) -> Convention {
    if chain {
        Convention::Chain
    } else {
        Convention::Cochain
    }
}

fn dims() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..3, (HI - LO + 1) as usize)
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    proptest::collection::vec((0usize..8, 0usize..8, -3i64..=3), 24..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn cohomology_matches_the_normal_form(chain in any::<bool>(), h in dims(), e in dims(), ops in ops()) {
        let s = sample(conv_of(chain), &h, &e, &ops);
        let mut euler = (0i64, 0i64);
        for k in LO..=HI {
            let n = s.c.dim(k).unwrap();
            let z = s.c.cocycles(k).unwrap().dim();
            // rank-nullity
            prop_assert_eq!(z + rank(s.c.differential(k).unwrap()), n);
            let res = s.c.cohomology(k).unwrap();
            prop_assert_eq!(res.dimension, s.betti[&k], "degree {}", k);
            for (i, rep) in res.representatives.iter().enumerate() {
                prop_assert!(s.c.differential(k).unwrap().mul_vec(rep).is_empty());
                let class = res.classify(rep).unwrap();
                prop_assert_eq!(class.len(), 1);
                prop_assert!(class[&i].is_one());
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            euler.0 += sign * n as i64;
            euler.1 += sign * res.dimension as i64;
        }
        prop_assert_eq!(euler.0, euler.1);
    }

    #[test]
    fn kernels_and_solutions(rows in 1usize..6, cols in 1usize..6, entries in proptest::collection::vec(-3i64..=3, 36), x in proptest::collection::vec(-2i64..=2, 6)) {
        let dense: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * 6..i * 6 + cols].to_vec()).collect();
        let m = RatMatrix::from_dense(&dense);
        let k = kernel(&m);
        prop_assert_eq!(k.dim() + rank(&m), cols);
        for v in k.vectors() {
            prop_assert!(m.mul_vec(v).is_empty());
        }
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        let xv = x[..cols].iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (j, Rat::from_int(*c))).collect();
        let b = m.mul_vec(&xv);
        let y = solve(&m, &b).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn cone_of_a_homotopy_equivalence_is_acyclic(
        chain in any::<bool>(), h in dims(), e in dims(), ops in ops(),
        s_entries in proptest::collection::vec(-2i64..=2, 64),
    ) {
        let conv = conv_of(chain);
        let delta = conv.delta();
        let c = sample(conv, &h, &e, &ops).c;
        // f = 1 + d s + s d with s of degree -delta
        let dim = |k: i64| if (c.lo()..=c.hi()).contains(&k) { c.dim(k).unwrap() } else { 0 };
        let s: BTreeMap<i64, RatMatrix> = (c.lo()..=c.hi())
            .map(|k| {
                let (r, q) = (dim(k - delta), dim(k));
                let mut m = RatMatrix::zeros(r, q);
                for i in 0..r {
                    for j in 0..q {
                        m.set(i, j, Rat::from_int(s_entries[(i * 8 + j + (k - c.lo()) as usize) % 64]));
                    }
                }
                (k, m)
            })
            .collect();
        let dd = |k: i64| c.differential(k).cloned().unwrap_or_else(|_| RatMatrix::zeros(dim(k + delta), dim(k)));
        let maps: BTreeMap<i64, RatMatrix> = (c.lo()..=c.hi())
            .map(|k| {
                let mut f = RatMatrix::identity(dim(k));
                if dim(k - delta) > 0 {
                    f = f.add(&dd(k - delta).mul(&s[&k]));
                }
                if dim(k + delta) > 0 {
                    f = f.add(&s[&(k + delta)].mul(&dd(k)));
                }
                (k, f)
            })
            .collect();
        let f = ChainMap::new(c.clone(), c.clone(), maps).unwrap();
        let cc = cone(&f).unwrap();
        for n in cc.lo() + 1..cc.hi() {
            prop_assert_eq!(cc.betti(n).unwrap(), 0, "cone degree {}", n);
        }
    }
}
