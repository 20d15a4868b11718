use std::sync::Arc;

use sullivan_core::engine::{minimal_model_cochain, EngineOptions};
use sullivan_core::homotopy::{compare_models, CompareOptions, Homotopy};
use sullivan_core::io::{
    from_json, load_algebra, load_model, load_morphism, load_operad, save_algebra, save_model, save_morphism,
    save_operad, to_json, AlgebraDoc, ComparisonDoc, HomotopyDoc, ModelDoc, OperadDoc,
};
use sullivan_core::operad::builtin;
use sullivan_core::palgebra::Algebra;
use sullivan_core::samples::{s2_cohomology, s2_model, truncated_polynomial};
use sullivan_core::{Convention, Error, TabularAlgebra};
use sullivan_core::free::FreeAlgebra;

#[test]
fn operad_tables_round_trip() {
    for conv in [Convention::Cochain, Convention::Chain] {
        for name in ["Com", "Ass", "Lie", "Ger"] {
            let p = builtin(name, conv, 4).unwrap();
            let json = save_operad(&p);
            let q = load_operad(&json).unwrap();
            assert_eq!(*p, *q, "{name}");
            assert_eq!(save_operad(&q), json);
        }
    }
}

#[test]
fn builtin_reference_form() {
    let doc = OperadDoc::builtin("Ger", Convention::Cochain, 3);
    let p = load_operad(&to_json(&doc)).unwrap();
    assert_eq!(*p, *builtin("Ger", Convention::Cochain, 3).unwrap());
}

#[test]
fn rationals_are_strings() {
    let p = builtin("Lie", Convention::Cochain, 3).unwrap();
    let json = save_operad(&p);
    assert!(json.contains("\"-1\"") || json.contains("\"1\""));
    assert!(!json.contains("1.0"));
}

#[test]
fn tabular_algebra_round_trip() {
    let a = truncated_polynomial(2, 3, 9, 6).unwrap();
    let json = save_algebra(&a).unwrap();
    let b = load_algebra(&json).unwrap();
    let b = b.as_any().unwrap().downcast_ref::<TabularAlgebra>().unwrap();
    assert_eq!(&a, b);
    assert_eq!(save_algebra(b).unwrap(), json);
}

#[test]
fn free_algebra_round_trip() {
    let a = s2_model(6).unwrap();
    let json = save_algebra(&a).unwrap();
    let b = load_algebra(&json).unwrap();
    let b = b.as_any().unwrap().downcast_ref::<FreeAlgebra>().unwrap();
    assert_eq!(&a, b);
}

#[test]
fn model_and_morphism_round_trip() {
    let a: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    let m = minimal_model_cochain(a, 1, 8, &EngineOptions::default()).unwrap();
    let json = save_model(&m).unwrap();
    let back = load_model(&json).unwrap();
    assert_eq!(*back.model, *m.model);
    assert_eq!(back.map.images, m.map.images);
    assert_eq!(back.stages, m.stages);
    assert_eq!(back.certificate, m.certificate);
    assert_eq!(save_model(&back).unwrap(), json);

    let fj = save_morphism(&m.map).unwrap();
    let f = load_morphism(&fj).unwrap();
    assert_eq!(f.images, m.map.images);
    assert_eq!(save_morphism(&f).unwrap(), fj);
}

#[test]
fn homotopy_and_comparison_documents() {
    let a: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    let m = minimal_model_cochain(a, 1, 8, &EngineOptions::default()).unwrap();
    let h = Homotopy::constant(&m.map, 2).unwrap();
    let doc = HomotopyDoc::from_homotopy(&h).unwrap();
    let back: HomotopyDoc = from_json(&to_json(&doc)).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_homotopy().unwrap().images().unwrap(), h.images().unwrap());

    let c = compare_models(&m, &m, &CompareOptions::default()).unwrap();
    let cd = ComparisonDoc::from_comparison(&c).unwrap();
    assert_eq!(from_json::<ComparisonDoc>(&to_json(&cd)).unwrap(), cd);
}

#[test]
fn schema_errors_carry_a_path() {
    let a = s2_cohomology(5, 4).unwrap();
    let json = save_algebra(&a).unwrap();
    let bad = json.replacen("\"max_arity\": 4", "\"max_arity\": \"four\"", 1);
    match load_algebra(&bad) {
        Err(Error::Schema(msg)) => assert!(msg.contains("max_arity"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let bad = json.replacen("\"lo\": 0", "\"lo\": 0, \"extra\": 1", 1);
    match load_algebra(&bad) {
        Err(Error::Schema(msg)) => assert!(msg.contains("complex") && msg.contains("extra"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let bad = json.replacen("\"tabular-algebra\"", "\"bogus\"", 1);
    assert!(matches!(load_algebra(&bad), Err(Error::Schema(_))));
}

#[test]
fn convention_is_declared_not_inferred() {
    let a = s2_cohomology(5, 4).unwrap();
    let mut doc: AlgebraDoc = from_json(&save_algebra(&a).unwrap()).unwrap();
    if let AlgebraDoc::TabularAlgebra(t) = &mut doc {
        t.convention = Convention::Chain;
    }
    assert!(matches!(doc.to_algebra(), Err(Error::ConventionMismatch(_))));

    let json = save_algebra(&a).unwrap().replacen("\"convention\": \"cochain\",\n", "", 1);
    assert!(matches!(load_algebra(&json), Err(Error::Schema(_))));
}

#[test]
fn model_document_can_share_a_target() {
    let a: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    let m = minimal_model_cochain(a.clone(), 1, 8, &EngineOptions::default()).unwrap();
    let doc: ModelDoc = from_json(&save_model(&m).unwrap()).unwrap();
    let back = doc.to_model(Some(a.clone())).unwrap();
    assert!(Arc::ptr_eq(&back.map.target, &a));
}

#[test]
fn documented_examples_load() {
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schemas.md")).unwrap();
    let mut loaded = 0;
    for block in doc.split("```json\n").skip(1) {
        let text = block.split("```").next().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        match v.get("kind").and_then(|k| k.as_str()) {
            Some("operad") => drop(sullivan_core::io::load_operad(text).unwrap()),
            Some("tabular-algebra") | Some("free-algebra") => {
                let a: sullivan_core::io::AlgebraDoc = sullivan_core::io::from_json(text).unwrap();
                a.to_algebra().unwrap();
            }
            Some("morphism") => {
                let m: sullivan_core::io::MorphismDoc = sullivan_core::io::from_json(text).unwrap();
                m.to_morphism().unwrap();
            }
            _ => continue,
        }
        loaded += 1;
    }
    assert_eq!(loaded, 4);
}
