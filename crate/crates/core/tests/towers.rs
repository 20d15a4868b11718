//! Randomized Sullivan towers: `d^2 = 0` on every construction built from
//! them, and exact lifting through surjective quasi-isomorphisms.

mod common;

use std::sync::Arc;

use common::towers::{contractible_projection, identity, operad, random_tower, TOP};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sullivan_core::free::FreeAlgebra;
use sullivan_core::homotopy::{lift_through_surjection, PathAlgebra, PathMap, PathMapKind};
use sullivan_core::palgebra::{cone_differential, extend_morphism, Algebra, AlgebraMap, FreeMorphism};
use sullivan_core::{Elem, Error};

const UP_TO: i64 = TOP + 2;

fn tower(op: usize, chain: bool, stages: usize, seed: u64) -> (Arc<FreeAlgebra>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_tower(&mut rng, &operad(op, chain), stages);
    (Arc::new(c), rng)
}

fn squares_to_zero(a: &dyn Algebra, lo: i64, hi: i64) -> Result<(), TestCaseError> {
    let delta = a.convention().delta();
    for k in lo..=hi {
        if a.dim(k).unwrap() == 0 || a.dim(k + delta).unwrap() == 0 {
            continue;
        }
        let dd = a.differential(k + delta).unwrap().mul(&a.differential(k).unwrap());
        prop_assert!(dd.is_zero(), "d^2 != 0 from degree {}", k);
    }
    Ok(())
}

/// `w g = f` degreewise through `UP_TO`.
fn factors(g: &FreeMorphism, w: &dyn AlgebraMap, f: &dyn AlgebraMap) -> Result<(), TestCaseError> {
    for k in 0..=UP_TO {
        if g.source.dim(k).unwrap() == 0 {
            continue;
        }
        let wg = w.matrix(k).unwrap().mul(&g.matrix(k).unwrap());
        prop_assert_eq!(wg, f.matrix(k).unwrap(), "degree {}", k);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn towers_are_sullivan_with_square_zero_differential(
        op in 0usize..4, chain in any::<bool>(), stages in 1usize..=3, seed in any::<u64>(),
    ) {
        let (c, mut rng) = tower(op, chain, stages, seed);
        prop_assert!(c.is_sullivan());
        squares_to_zero(&*c, 0, UP_TO)?;
        let w = contractible_projection(&mut rng, &c);
        squares_to_zero(&*w.source, 0, UP_TO)?;
        for n in 0..=UP_TO {
            let d1 = cone_differential(&w, n).unwrap();
            let d2 = cone_differential(&w, n + c.convention().delta()).unwrap();
            prop_assert!(d2.mul(&d1).is_zero(), "cone, degree {}", n);
        }
        let path = PathAlgebra::new(c.clone(), 2);
        squares_to_zero(&path, 0, UP_TO)?;
    }
}

/// Generator images of `g f`, assembled into a morphism.
fn compose(f: &FreeMorphism, g: &FreeMorphism) -> FreeMorphism {
    let images = f.images.iter().map(|x| g.apply_elem(x).unwrap()).collect();
    extend_morphism(f.source.clone(), g.target.clone(), images).unwrap()
}

fn commutes_with_d(f: &dyn AlgebraMap) -> Result<(), TestCaseError> {
    let (s, t) = (f.source(), f.target());
    let delta = s.convention().delta();
    for k in 0..=UP_TO {
        let l = f.matrix(k + delta).unwrap().mul(&s.differential(k).unwrap());
        let r = t.differential(k).unwrap().mul(&f.matrix(k).unwrap());
        prop_assert_eq!(l, r, "degree {}", k);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn assembling_morphisms_is_functorial(
        op in 0usize..4, chain in any::<bool>(), stages in 1usize..=3, seed in any::<u64>(),
    ) {
        let (c, mut rng) = tower(op, chain, stages, seed);
        let p = contractible_projection(&mut rng, &c);
        let a = p.source.clone();
        let images = (0..c.generators().len())
            .map(|i| Elem::new(c.generators()[i].degree, a.coords(&a.generator_element(i)).unwrap()))
            .collect();
        let inc = extend_morphism(c.clone(), a.clone(), images).unwrap();
        for (f, g) in [(&inc, &p), (&p, &inc)] {
            let gf = compose(f, g);
            commutes_with_d(&gf)?;
            for k in 0..=UP_TO {
                prop_assert_eq!(gf.matrix(k).unwrap(), g.matrix(k).unwrap().mul(&f.matrix(k).unwrap()), "degree {}", k);
            }
        }
        commutes_with_d(&p)?;
        commutes_with_d(&inc)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn lift_through_contractible_projection(
        op in 0usize..4, chain in any::<bool>(), stages in 1usize..=3, seed in any::<u64>(),
    ) {
        let (c, mut rng) = tower(op, chain, stages, seed);
        let w = contractible_projection(&mut rng, &c);
        let f = identity(&c);
        let g = lift_through_surjection(c.clone(), &f, &w, UP_TO).unwrap();
        factors(&g, &w, &f)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lift_through_path_endpoint(
        op in 0usize..4, chain in any::<bool>(), stages in 1usize..=3, seed in any::<u64>(),
    ) {
        let (c, _) = tower(op, chain, stages, seed);
        let f = identity(&c);
        let mut t = 2;
        let (g, w) = loop {
            let w = PathMap { path: Arc::new(PathAlgebra::new(c.clone(), t)), kind: PathMapKind::AtZero };
            match lift_through_surjection(c.clone(), &f, &w, UP_TO) {
                Err(Error::PathDegreeOverflow(_)) if t < 16 => t *= 2,
                r => break (r.unwrap(), w),
            }
        };
        factors(&g, &w, &f)?;
    }
}
