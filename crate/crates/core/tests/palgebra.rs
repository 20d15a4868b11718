use std::collections::BTreeMap;
use std::sync::Arc;

use sullivan_core::complex::{cone, ChainComplex, ChainMap, GradedSpace};
use sullivan_core::free::FreeAlgebra;
use sullivan_core::linalg::{unit_vec, Rat, RatMatrix, SparseVec};
use sullivan_core::operad::{builtin, OperadMorphism};
use sullivan_core::palgebra::{
    algebra_cohomology, check_connected, extend_morphism, is_quasi_iso, restrict, Algebra, AlgebraMap, BinaryTable,
    ComposedMap, MatrixMap, TabularAlgebra,
};
use sullivan_core::samples::{acyclic_pair, free_on, s2_cohomology, s2_model, truncated_polynomial};
use sullivan_core::Convention::{Chain, Cochain};
use sullivan_core::{Elem, Error};

fn s2_map(x_image: i64) -> Result<sullivan_core::FreeMorphism, Error> {
    let src = Arc::new(s2_model(8).unwrap());
    let tgt: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    let mut x = SparseVec::new();
    if x_image != 0 {
        x.insert(0, Rat::from_int(x_image));
    }
    extend_morphism(src, tgt, vec![Elem::new(2, x), Elem::zero(3)])
}

#[test]
fn s2_cohomology_tables() {
    let a = s2_cohomology(9, 8).unwrap();
    let rep = a.validate();
    assert!(rep.is_ok(), "{:?}", rep.violations);
    assert!(rep.checks > 100);
    // x * x = 0, 1 * x = x, mu3(1, x, 1) = x
    let x = Elem::basis(2, 0);
    let one = a.unit().unwrap().unwrap();
    assert!(a.theta(2, &unit_vec(0), &[x.clone(), x.clone()]).unwrap().is_zero());
    assert_eq!(a.theta(2, &unit_vec(0), &[one.clone(), x.clone()]).unwrap(), x);
    assert_eq!(a.theta(3, &unit_vec(0), &[one.clone(), x.clone(), one]).unwrap(), x);
    let dims: Vec<usize> = (0..=4).map(|k| algebra_cohomology(&a, k).unwrap().dimension).collect();
    assert_eq!(dims, vec![1, 0, 1, 0, 0]);
}

#[test]
fn tabular_lookup_outside_window_is_an_error() {
    let a = truncated_polynomial(2, 3, 4, 4).unwrap();
    let x = Elem::basis(2, 0);
    assert!(matches!(
        a.theta(3, &unit_vec(0), &[x.clone(), x.clone(), x]),
        Err(Error::OutOfWindow { degree: 6, .. })
    ));
}

#[test]
fn corrupted_table_fails_validation() {
    let good = truncated_polynomial(2, 3, 6, 4).unwrap();
    let mut bad = good.clone();
    // break commutativity of mu on (x, x^2)
    let t = bad.tables.get_mut(&(2, 0)).unwrap();
    t.insert(vec![(2, 0), (4, 0)], unit_vec(0).into_keys().map(|j| (j, Rat::from_int(2))).collect());
    let rep = bad.validate();
    assert!(!rep.is_ok());
    assert!(good.validate().is_ok());
}

#[test]
fn s2_morphism_is_quasi_iso() {
    let f = s2_map(1).unwrap();
    let cert = is_quasi_iso(&f, 8).unwrap();
    assert!(cert.is_quasi_iso, "{cert:?}");
    assert!(cert.cone_dims.iter().all(|&(_, d)| d == 0));
    assert!(cert.cone_dims.iter().any(|&(n, _)| n == 8));
}

#[test]
fn zero_on_x_fails_at_degree_two() {
    let f = s2_map(0).unwrap();
    let cert = is_quasi_iso(&f, 8).unwrap();
    assert!(!cert.is_quasi_iso);
    let bad: Vec<i64> = cert.cohomology.iter().filter(|c| c.1 != c.3 || c.2 != c.3).map(|c| c.0).collect();
    assert_eq!(bad.first(), Some(&2));
    // the cone sees the failure through the kernel and cokernel of H^2 f
    assert!(cert.cone_dims.contains(&(1, 1)) && cert.cone_dims.contains(&(2, 1)));
}

#[test]
fn wrong_degree_image_rejected() {
    let src = Arc::new(s2_model(8).unwrap());
    let tgt: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    let r = extend_morphism(src, tgt, vec![Elem::basis(0, 0), Elem::zero(3)]);
    assert!(matches!(r, Err(Error::DegreeMismatch(_))));
}

#[test]
fn incompatible_image_rejected() {
    // Q[x]/x^3 has x^2 != 0, so y -> 0 violates d f(y) = f(dy)
    let src = Arc::new(s2_model(8).unwrap());
    let tgt: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 3, 9, 8).unwrap());
    let r = extend_morphism(src, tgt, vec![Elem::basis(2, 0), Elem::zero(3)]);
    match r {
        Err(Error::NotMorphism(msg)) => assert!(msg.contains('y'), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn identity_images_give_identity() {
    let a = Arc::new(s2_model(8).unwrap());
    let ids: Vec<Elem> = (0..2).map(|i| {
        let g = a.generator_element(i);
        Elem::new(g.degree, a.coords(&g).unwrap())
    }).collect();
    let f = extend_morphism(a.clone(), a.clone(), ids).unwrap();
    for k in 0..=9 {
        assert_eq!(f.matrix(k).unwrap(), RatMatrix::identity(a.dim(k).unwrap()), "degree {k}");
    }
    assert!(is_quasi_iso(&f, 7).unwrap().is_quasi_iso);
}

#[test]
fn morphisms_commute_with_differentials() {
    let f = s2_map(1).unwrap();
    let (a, b) = (f.source(), f.target());
    for k in 0..=8 {
        let l = f.matrix(k + 1).unwrap().mul(&a.differential(k).unwrap());
        let r = b.differential(k).unwrap().mul(&f.matrix(k).unwrap());
        assert_eq!(l, r, "degree {k}");
    }
}

#[test]
fn composition_matches_generator_images() {
    // Com<x> -> Com<x, y> (x -> x) -> H(S^2): composite of matrices equals
    // the morphism defined by composed generator images
    let small = Arc::new(free_on("Com", Cochain, 8, &[("x", 2)]).unwrap());
    let model = Arc::new(s2_model(8).unwrap());
    let xm = model.generator_element(0);
    let inc = Arc::new(
        extend_morphism(small.clone(), model.clone(), vec![Elem::new(2, model.coords(&xm).unwrap())]).unwrap(),
    );
    let g = Arc::new(s2_map(1).unwrap());
    let comp = ComposedMap { first: inc, second: g.clone() };
    let direct = extend_morphism(small, g.target(), vec![Elem::basis(2, 0)]).unwrap();
    for k in 0..=9 {
        assert_eq!(comp.matrix(k).unwrap(), direct.matrix(k).unwrap(), "degree {k}");
    }
}

#[test]
fn connectivity() {
    let s2 = s2_cohomology(9, 8).unwrap();
    assert!(check_connected(&s2, 1).unwrap().connected);
    let rep = check_connected(&s2, 2).unwrap();
    assert!(!rep.connected);
    assert_eq!(rep.failing_degree, Some(2));

    // reduced operad with H^0 != 0
    let lie = builtin("Lie", Cochain, 3).unwrap();
    let space = GradedSpace::from_dims(0, 3, [(0, 1)]);
    let c = ChainComplex::new(space, Cochain, BTreeMap::new()).unwrap();
    let a = TabularAlgebra::from_binary("point", lie, c, vec![BinaryTable::new()], None, 3).unwrap();
    let rep = check_connected(&a, 0).unwrap();
    assert_eq!((rep.connected, rep.failing_degree), (false, Some(0)));

    // H^{-1} != 0
    let com = builtin("Com", Cochain, 3).unwrap();
    let space = GradedSpace::from_dims(-1, 3, [(-1, 1), (0, 1)]);
    let c = ChainComplex::new(space, Cochain, BTreeMap::new()).unwrap();
    let mut mu = BinaryTable::new();
    mu.insert(((0, 0), (0, 0)), unit_vec(0));
    mu.insert(((0, 0), (-1, 0)), unit_vec(0));
    mu.insert(((-1, 0), (0, 0)), unit_vec(0));
    let a = TabularAlgebra::from_binary("neg", com, c, vec![mu], Some(unit_vec(0)), 3).unwrap();
    assert!(a.validate().is_ok());
    let rep = check_connected(&a, 1).unwrap();
    assert_eq!((rep.connected, rep.failing_degree), (false, Some(-1)));

    // acyclic Lie algebra: P(0) = 0 = H^0
    let a = acyclic_pair("Lie", Chain, 4, 2, 6).unwrap();
    assert!(check_connected(&a, 0).unwrap().connected);
}

#[test]
fn cone_of_identity_and_zero() {
    let a = s2_cohomology(6, 4).unwrap();
    let id = ChainMap::identity(&a.complex);
    let c = cone(&id).unwrap();
    for k in c.lo()..c.hi() {
        if c.space.in_window(k - 1) {
            assert_eq!(c.betti(k).unwrap(), 0);
        }
    }
    let a: Arc<dyn Algebra> = Arc::new(a);
    let m = MatrixMap::identity(a.clone(), 0, 6).unwrap();
    m.check_chain_map(0, 6).unwrap();
    assert!(is_quasi_iso(&m, 4).unwrap().is_quasi_iso);
    assert!(matches!(is_quasi_iso(&m, 5), Err(Error::OutOfWindow { .. })));
    let z = MatrixMap {
        source: a.clone(),
        target: a,
        maps: (0..=6).map(|k| (k, RatMatrix::zeros(m.maps[&k].rows(), m.maps[&k].cols()))).collect(),
    };
    let cert = is_quasi_iso(&z, 4).unwrap();
    // zero differentials: H^n(cone) = A^{n+1} + B^n
    for &(n, d) in &cert.cone_dims {
        let want = z.source.dim(n + 1).unwrap() + z.target.dim(n).unwrap();
        assert_eq!(d, want, "degree {n}");
    }
}

#[test]
fn restriction_along_commutator() {
    // 2x2 upper triangular matrices in degree 0 over Ass, restricted to Lie
    let ass = builtin("Ass", Cochain, 3).unwrap();
    let lie = builtin("Lie", Cochain, 3).unwrap();
    let space = GradedSpace::from_dims(0, 1, [(0, 3)]);
    let c = ChainComplex::new(space, Cochain, BTreeMap::new()).unwrap();
    // basis e11, e12, e22
    let prod = [[Some(0), Some(1), None], [None, None, Some(1)], [None, None, Some(2)]];
    let mut mu = BinaryTable::new();
    for (i, row) in prod.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if let Some(k) = v {
                mu.insert(((0, i), (0, j)), unit_vec(*k));
            }
        }
    }
    let unit: SparseVec = [(0, Rat::one()), (2, Rat::one())].into_iter().collect();
    let a = TabularAlgebra::from_binary("T2", ass.clone(), c, vec![mu], Some(unit), 3).unwrap();
    assert!(a.validate().is_ok(), "{:?}", a.validate().violations);

    let m = ass.find_label(2, "m(0,1)").unwrap();
    let mt = ass.find_label(2, "m(1,0)").unwrap();
    let mut img = unit_vec(m);
    img.insert(mt, -Rat::one());
    let f = OperadMorphism::from_generators(lie.clone(), ass.clone(), vec![img.clone()]).unwrap();
    let l = restrict(&f, &a).unwrap();
    assert!(l.validate().is_ok(), "{:?}", l.validate().violations);
    // [e11, e12] = e12
    let br = l.theta(2, &unit_vec(0), &[Elem::basis(0, 0), Elem::basis(0, 1)]).unwrap();
    assert_eq!(br, Elem::basis(0, 1));
    // tables agree with F applied by hand
    for key in [vec![(0, 0), (0, 1)], vec![(0, 2), (0, 1)], vec![(0, 1), (0, 1)]] {
        let args: Vec<Elem> = key.iter().map(|&(d, i)| Elem::basis(d, i)).collect();
        assert_eq!(l.theta(2, &unit_vec(0), &args).unwrap(), a.theta(2, &img, &args).unwrap());
    }

    // restriction keeps the complex, so a quasi-free map stays a morphism
    let free = Arc::new(FreeAlgebra::new(lie, vec![]).unwrap());
    let l: Arc<dyn Algebra> = Arc::new(l);
    assert!(extend_morphism(free, l, vec![]).is_ok());
}

#[test]
fn chain_convention_tabular() {
    let a = acyclic_pair("Lie", Chain, 4, 2, 6).unwrap();
    assert!(a.validate().is_ok());
    for k in 0..=5 {
        assert_eq!(algebra_cohomology(&a, k).unwrap().dimension, 0);
    }
}
