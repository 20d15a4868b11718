use std::collections::BTreeMap;
use std::sync::Arc;

use sullivan_core::engine::{
    minimal_model_chain, minimal_model_cochain, model_from_free_homology, render_report, EngineOptions,
    FreeHomologyOutcome, MinimalModel, SectionMode,
};
use sullivan_core::free::{FreeAlgebra, Generator};
use sullivan_core::linalg::{unit_vec, Rat};
use sullivan_core::operad::builtin;
use sullivan_core::palgebra::{is_quasi_iso, Algebra};
use sullivan_core::samples::{acyclic_pair, free_on, s2_cohomology, truncated_polynomial};
use sullivan_core::Convention::{Chain, Cochain};
use sullivan_core::Error;

fn dims(m: &MinimalModel) -> Vec<(i64, usize)> {
    m.generator_dims().into_iter().collect()
}

fn assert_certified(m: &MinimalModel) {
    let c = m.certificate.as_ref().unwrap();
    assert!(c.is_quasi_iso, "{c:?}");
    assert!(m.check_stage_order());
    assert!(m.model.is_minimal(m.r as i64));
    assert!(m.is_complete());
}

#[test]
fn s2_model() {
    let a: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    let m = minimal_model_cochain(a, 1, 8, &EngineOptions::default()).unwrap();
    assert_eq!(dims(&m), vec![(2, 1), (3, 1)]);
    assert_certified(&m);
    // d(gen3) is a nonzero multiple of gen2^2
    let model = &m.model;
    let x = model.generator_element(0);
    let xx = model.theta(2, &unit_vec(0), &[x.clone(), x]).unwrap();
    let dy = model.generator_differential(1);
    let (mono, c) = xx.terms.iter().next().unwrap();
    assert_eq!(xx.terms.len(), 1);
    assert_eq!(dy.terms.len(), 1);
    assert!(!dy.terms[mono].is_zero() && !c.is_zero());
    let report = render_report(&m);
    assert!(report.contains("generators: 2:1, 3:1"), "{report}");
}

#[test]
fn odd_sphere_generator() {
    let a: Arc<dyn Algebra> = Arc::new(free_on("Com", Cochain, 8, &[("x", 3)]).unwrap());
    let m = minimal_model_cochain(a, 1, 10, &EngineOptions::default()).unwrap();
    assert_eq!(dims(&m), vec![(3, 1)]);
    assert_certified(&m);
    assert!(m.log.iter().all(|l| l.extensions == 1));
}

#[test]
fn cohomology_of_a_point() {
    let a: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 1, 7, 6).unwrap());
    let m = minimal_model_cochain(a, 1, 6, &EngineOptions::default()).unwrap();
    assert!(dims(&m).is_empty());
    assert_certified(&m);
}

#[test]
fn truncated_polynomial_needs_more_generators() {
    // Q[x]/x^3, |x| = 2: generators x (2) and y (5) with dy = x^3
    let a: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 3, 9, 8).unwrap());
    let m = minimal_model_cochain(a, 1, 8, &EngineOptions::default()).unwrap();
    assert_eq!(dims(&m), vec![(2, 1), (5, 1)]);
    assert_certified(&m);
}

#[test]
fn random_sections_keep_dimensions() {
    let a: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 3, 9, 8).unwrap());
    let base = minimal_model_cochain(a.clone(), 1, 8, &EngineOptions::default()).unwrap();
    for seed in [1, 7, 42] {
        let opts = EngineOptions { section: SectionMode::Random { seed }, ..Default::default() };
        let m = minimal_model_cochain(a.clone(), 1, 8, &opts).unwrap();
        assert_eq!(m.generator_dims(), base.generator_dims(), "seed {seed}");
        assert_certified(&m);
    }
}

#[test]
fn wrong_convention_and_preconditions() {
    let a: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    assert!(matches!(
        minimal_model_chain(a.clone(), 1, 8, &EngineOptions::default()),
        Err(Error::ConventionMismatch(_))
    ));
    // H^2 != 0, so not 2-connected
    assert!(matches!(
        minimal_model_cochain(a.clone(), 2, 8, &EngineOptions::default()),
        Err(Error::Precondition(_))
    ));
    // target must reach N + 1
    assert!(matches!(
        minimal_model_cochain(a, 1, 9, &EngineOptions::default()),
        Err(Error::Precondition(_))
    ));
    // Ger in cochain convention is not 0-tame
    let g: Arc<dyn Algebra> = Arc::new(free_on("Ger", Cochain, 4, &[("x", 3)]).unwrap());
    assert!(matches!(
        minimal_model_cochain(g, 0, 4, &EngineOptions::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn arity_bound_overflow_and_cap() {
    // Ger cochain, r = 1, generator of degree 2: degree k needs arity k - 1
    let g: Arc<dyn Algebra> = Arc::new(free_on("Ger", Cochain, 3, &[("x", 2)]).unwrap());
    let r = minimal_model_cochain(g, 1, 4, &EngineOptions::default());
    assert!(matches!(r, Err(Error::ArityOverflow { .. })), "{r:?}");

    let g: Arc<dyn Algebra> = Arc::new(free_on("Ger", Cochain, 3, &[("x", 2)]).unwrap().with_arity_cap(Some(3)));
    let opts = EngineOptions { arity_cap: Some(3), ..Default::default() };
    let m = minimal_model_cochain(g, 1, 4, &opts).unwrap();
    assert!(m.arity_capped);
    assert_eq!(dims(&m), vec![(2, 1)]);
}

#[test]
fn chain_acyclic_lie() {
    let a: Arc<dyn Algebra> = Arc::new(acyclic_pair("Lie", Chain, 4, 2, 7).unwrap());
    let m = minimal_model_chain(a, 0, 6, &EngineOptions::default()).unwrap();
    assert!(dims(&m).is_empty());
    assert_certified(&m);
}

#[test]
fn chain_free_ger_is_its_own_model() {
    let a: Arc<dyn Algebra> = Arc::new(free_on("Ger", Chain, 5, &[("e", 2)]).unwrap());
    let m = minimal_model_chain(a, 0, 6, &EngineOptions::default()).unwrap();
    assert_eq!(dims(&m), vec![(2, 1)]);
    assert_certified(&m);
    assert!(m.log.iter().all(|l| l.extensions == 1));
}

#[test]
fn abelian_lie_model_is_finite_type() {
    // two classes of degree 2 with zero bracket, cochain Lie (0-tame)
    let lie = builtin("Lie", Cochain, 5).unwrap();
    let space = sullivan_core::GradedSpace::from_dims(0, 7, [(2, 2)]);
    let c = sullivan_core::ChainComplex::new(space, Cochain, BTreeMap::new()).unwrap();
    let a = sullivan_core::TabularAlgebra::from_binary("ab", lie, c, vec![Default::default()], None, 5).unwrap();
    let a: Arc<dyn Algebra> = Arc::new(a);
    let m = minimal_model_cochain(a, 0, 6, &EngineOptions::default()).unwrap();
    assert_certified(&m);
    assert!(m.log.iter().all(|l| l.extensions == 1), "{:?}", m.log);
    // generators: the two classes, then one killing their bracket
    let d = m.generator_dims();
    assert_eq!(d.get(&2), Some(&2));
    assert_eq!(d.get(&3), Some(&1));
}

#[test]
fn free_homology_shortcut() {
    // free algebra itself
    let a: Arc<dyn Algebra> = Arc::new(free_on("Ger", Chain, 5, &[("e", 2)]).unwrap());
    let out = model_from_free_homology(a, &[("e".into(), 2)], None, 8, &EngineOptions::default()).unwrap();
    assert!(matches!(out, FreeHomologyOutcome::Model(_)));

    // Ger<e2, u5, w4> with du = w has homology Ger<e2>
    let ger = builtin("Ger", Chain, 5).unwrap();
    let base = FreeAlgebra::new(ger, vec![Generator::new("e", 2, 0), Generator::new("w", 4, 0)]).unwrap();
    let w = base.generator_element(1);
    let a = base.ks_extend(vec![("u".into(), w)], 5).unwrap();
    let a: Arc<dyn Algebra> = Arc::new(a);
    match model_from_free_homology(a, &[("e".into(), 2)], None, 8, &EngineOptions::default()).unwrap() {
        FreeHomologyOutcome::Model(m) => {
            assert_eq!(dims(&m), vec![(2, 1)]);
            assert!(m.certificate.unwrap().is_quasi_iso);
        }
        other => panic!("{other:?}"),
    }

    // Q[x]/x^3 is not free: refuted where x^3 dies
    let a: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 3, 9, 8).unwrap());
    match model_from_free_homology(a, &[("x".into(), 2)], None, 8, &EngineOptions::default()).unwrap() {
        FreeHomologyOutcome::Refuted { degree, .. } => assert_eq!(degree, 6),
        other => panic!("{other:?}"),
    }
}

#[test]
fn iteration_cap_flags_partial_model() {
    let a: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 3, 9, 8).unwrap());
    let opts = EngineOptions { iteration_cap: 0, skip_certificate: true, ..Default::default() };
    let m = minimal_model_cochain(a, 1, 8, &opts).unwrap();
    assert!(!m.is_complete());
    assert_eq!(m.non_terminated.first(), Some(&2));
}

#[test]
fn model_map_is_chain_map() {
    let a: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 3, 9, 8).unwrap());
    let m = minimal_model_cochain(a, 1, 8, &EngineOptions::default()).unwrap();
    let (s, t) = (m.map.source.clone(), m.map.target.clone());
    use sullivan_core::palgebra::AlgebraMap;
    for k in 0..=8 {
        let l = m.map.matrix(k + 1).unwrap().mul(&Algebra::differential(&*s, k).unwrap());
        let r = t.differential(k).unwrap().mul(&m.map.matrix(k).unwrap());
        assert_eq!(l, r);
    }
    assert!(is_quasi_iso(&m.map, 8).unwrap().is_quasi_iso);
    let _ = Rat::one();
}
