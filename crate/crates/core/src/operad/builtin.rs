//! Com, Ass, Lie and Ger as finite tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::complex::Convention;
use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, SparseVec};

use super::table::{signed, ArityTable, DegreeFloor, OperadTable, Presentation, Unitality};
use super::tree::{BinaryGen, Tree, TreeComb, TreeQuotient};

pub const BUILTIN_NAMES: [&str; 4] = ["Com", "Ass", "Lie", "Ger"];

type Key = (String, Convention, usize);

fn cache() -> &'static Mutex<HashMap<Key, Arc<OperadTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<OperadTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A built-in operad, tabulated through `arity_bound`. Results are cached.
pub fn builtin(name: &str, convention: Convention, arity_bound: usize) -> Result<Arc<OperadTable>> {
    if arity_bound < 2 {
        return Err(Error::Precondition("arity bound must be at least 2".into()));
    }
    let canonical = BUILTIN_NAMES
        .iter()
        .find(|b| b.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnsupportedOperad(name.to_string()))?;
    let key = (canonical.to_string(), convention, arity_bound);
    if let Some(p) = cache().lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let table = match *canonical {
        "Com" => com(convention, arity_bound),
        "Ass" => ass(convention, arity_bound),
        "Lie" => lie(convention, arity_bound),
        _ => ger(convention, arity_bound),
    };
    let p = Arc::new(table);
    cache().lock().unwrap().insert(key, p.clone());
    Ok(p)
}

fn one() -> SparseVec {
    crate::linalg::unit_vec(0)
}

fn zero_floor() -> Option<DegreeFloor> {
    Some(DegreeFloor { base: 0, slope: 0 })
}

pub fn com(convention: Convention, bound: usize) -> OperadTable {
    let arities: Vec<ArityTable> = (0..=bound)
        .map(|n| ArityTable {
            labels: vec![format!("mu{n}")],
            degrees: vec![0],
            transpositions: vec![RatMatrix::identity(1); n.saturating_sub(1)],
            differential: RatMatrix::zeros(1, 1),
        })
        .collect();
    let mut comps = BTreeMap::new();
    for m in 1..=bound {
        for n in 0..=bound + 1 - m {
            comps.insert((m, n), vec![one(); m]);
        }
    }
    let trees = (0..=bound)
        .map(|n| {
            vec![match n {
                0 => None,
                _ => Some(Tree::left_comb(0, &(0..n).collect::<Vec<_>>())),
            }]
        })
        .collect();
    OperadTable {
        name: "Com".into(),
        convention,
        unitality: Unitality::Unitary,
        arity_bound: bound,
        degree_floor: zero_floor(),
        arities,
        comps,
        presentation: Some(Presentation {
            generators: vec![0],
            trees,
        }),
    }
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q: Vec<usize> = Vec::with_capacity(n);
            q.push(k);
            q.extend(p.iter().map(|&x| if x >= k { x + 1 } else { x }));
            out.push(q);
        }
    }
    out.sort();
    out
}

fn word_label(w: &[usize]) -> String {
    let inner: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("m({})", inner.join(","))
}

/// Basis of `Ass(n)`: words `w`, the operation `x ↦ x_{w_0} x_{w_1} ...`.
pub fn ass(convention: Convention, bound: usize) -> OperadTable {
    let words: Vec<Vec<Vec<usize>>> = (0..=bound).map(permutations).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = words
        .iter()
        .map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
        .collect();
    let mut arities = Vec::new();
    for n in 0..=bound {
        let ws = &words[n];
        let transpositions = (0..n.saturating_sub(1))
            .map(|i| {
                let cols: Vec<SparseVec> = ws
                    .iter()
                    .map(|w| {
                        let v: Vec<usize> = w
                            .iter()
                            .map(|&x| if x == i { i + 1 } else if x == i + 1 { i } else { x })
                            .collect();
                        crate::linalg::unit_vec(index[n][&v])
                    })
                    .collect();
                RatMatrix::from_cols(ws.len(), &cols)
            })
            .collect();
        arities.push(ArityTable {
            labels: ws.iter().map(|w| word_label(w)).collect(),
            degrees: vec![0; ws.len()],
            transpositions,
            differential: RatMatrix::zeros(ws.len(), ws.len()),
        });
    }
    let mut comps = BTreeMap::new();
    for m in 1..=bound {
        for n in 0..=bound + 1 - m {
            let mut entries = Vec::with_capacity(m * words[m].len() * words[n].len());
            for i in 0..m {
                for a in &words[m] {
                    for b in &words[n] {
                        let mut w = Vec::with_capacity(m + n - 1);
                        for &x in a {
                            if x == i {
                                w.extend(b.iter().map(|&y| y + i));
                            } else if x > i {
                                w.push(x + n - 1);
                            } else {
                                w.push(x);
                            }
                        }
                        entries.push(crate::linalg::unit_vec(index[m + n - 1][&w]));
                    }
                }
            }
            comps.insert((m, n), entries);
        }
    }
    let trees = words
        .iter()
        .map(|ws| {
            ws.iter()
                .map(|w| if w.is_empty() { None } else { Some(Tree::left_comb(0, w)) })
                .collect()
        })
        .collect();
    OperadTable {
        name: "Ass".into(),
        convention,
        unitality: Unitality::Unitary,
        arity_bound: bound,
        degree_floor: zero_floor(),
        arities,
        comps,
        presentation: Some(Presentation {
            generators: vec![index[2][&vec![0, 1]]],
            trees,
        }),
    }
}

fn leaf(x: usize) -> Tree {
    Tree::Leaf(x)
}

fn jacobi(g: usize) -> TreeComb {
    vec![
        (Tree::node(g, Tree::node(g, leaf(0), leaf(1)), leaf(2)), Rat::one()),
        (Tree::node(g, Tree::node(g, leaf(1), leaf(2)), leaf(0)), Rat::one()),
        (Tree::node(g, Tree::node(g, leaf(2), leaf(0)), leaf(1)), Rat::one()),
    ]
}

pub fn lie_presentation() -> (Vec<BinaryGen>, Vec<TreeComb>) {
    let gens = vec![BinaryGen {
        name: "b".into(),
        degree: 0,
        swap: -1,
    }];
    (gens, vec![jacobi(0)])
}

/// Product `mu` (degree 0, symmetric) and bracket `lambda` (degree `-delta`,
/// symmetric as an odd operation), with associativity, Jacobi and Leibniz.
pub fn ger_presentation(convention: Convention) -> (Vec<BinaryGen>, Vec<TreeComb>) {
    let gens = vec![
        BinaryGen {
            name: "mu".into(),
            degree: 0,
            swap: 1,
        },
        BinaryGen {
            name: "lambda".into(),
            degree: -convention.delta(),
            swap: 1,
        },
    ];
    let assoc = vec![
        (Tree::node(0, Tree::node(0, leaf(0), leaf(1)), leaf(2)), Rat::one()),
        (Tree::node(0, leaf(0), Tree::node(0, leaf(1), leaf(2))), -Rat::one()),
    ];
    let leibniz = vec![
        (Tree::node(1, Tree::node(0, leaf(0), leaf(1)), leaf(2)), Rat::one()),
        (Tree::node(0, Tree::node(1, leaf(0), leaf(2)), leaf(1)), -Rat::one()),
        (Tree::node(0, leaf(0), Tree::node(1, leaf(1), leaf(2))), -Rat::one()),
    ];
    (gens, vec![assoc, jacobi(1), leibniz])
}

fn tree_label(t: &Tree, gens: &[BinaryGen]) -> String {
    match t {
        Tree::Leaf(x) => x.to_string(),
        Tree::Node(g, l, r) => format!("{}({},{})", gens[*g].name, tree_label(l, gens), tree_label(r, gens)),
    }
}

/// Tabulates a tree quotient as a reduced operad.
pub fn from_tree_quotient(
    name: &str,
    convention: Convention,
    q: &TreeQuotient,
    degree_floor: Option<DegreeFloor>,
) -> OperadTable {
    let bound = q.max_arity();
    let gens = &q.gens;
    let mut arities = vec![ArityTable::empty(0)];
    for n in 1..=bound {
        let qa = q.arity(n);
        let basis: Vec<&Tree> = (0..qa.dim()).map(|k| qa.basis_tree(k)).collect();
        let transpositions = (0..n - 1)
            .map(|i| {
                let cols: Vec<SparseVec> = basis
                    .iter()
                    .map(|t| {
                        let s = t.relabel(&|x| if x == i { i + 1 } else if x == i + 1 { i } else { x });
                        qa.reduce(&[(s, Rat::one())], gens)
                    })
                    .collect();
                RatMatrix::from_cols(basis.len(), &cols)
            })
            .collect();
        arities.push(ArityTable {
            labels: basis.iter().map(|t| tree_label(t, gens)).collect(),
            degrees: basis.iter().map(|t| t.degree(gens)).collect(),
            transpositions,
            differential: RatMatrix::zeros(basis.len(), basis.len()),
        });
    }
    let mut comps = BTreeMap::new();
    for m in 1..=bound {
        for n in 1..=bound + 1 - m {
            let target = q.arity(m + n - 1);
            let (qm, qn) = (q.arity(m), q.arity(n));
            let mut entries = Vec::with_capacity(m * qm.dim() * qn.dim());
            for i in 0..m {
                for a in 0..qm.dim() {
                    for b in 0..qn.dim() {
                        let (t, s) = qm.basis_tree(a).compose(i, qn.basis_tree(b), gens);
                        entries.push(target.reduce(&[(t, signed(&Rat::one(), s))], gens));
                    }
                }
            }
            comps.insert((m, n), entries);
        }
    }
    let generators = (0..gens.len())
        .map(|g| {
            let t = Tree::node(g, leaf(0), leaf(1));
            let qa = q.arity(2);
            (0..qa.dim()).find(|&k| *qa.basis_tree(k) == t).expect("generator survives")
        })
        .collect();
    let mut trees: Vec<Vec<Option<Tree>>> = vec![Vec::new()];
    for n in 1..=bound {
        let qa = q.arity(n);
        trees.push((0..qa.dim()).map(|k| Some(qa.basis_tree(k).clone())).collect());
    }
    OperadTable {
        name: name.to_string(),
        convention,
        unitality: Unitality::Reduced,
        arity_bound: bound,
        degree_floor,
        arities,
        comps,
        presentation: Some(Presentation { generators, trees }),
    }
}

pub fn lie(convention: Convention, bound: usize) -> OperadTable {
    let (gens, rels) = lie_presentation();
    let q = TreeQuotient::build(gens, &rels, bound);
    from_tree_quotient("Lie", convention, &q, zero_floor())
}

pub fn ger(convention: Convention, bound: usize) -> OperadTable {
    let (gens, rels) = ger_presentation(convention);
    let q = TreeQuotient::build(gens, &rels, bound);
    let floor = match convention {
        Convention::Cochain => DegreeFloor { base: 1, slope: -1 },
        Convention::Chain => DegreeFloor { base: 0, slope: 0 },
    };
    from_tree_quotient("Ger", convention, &q, Some(floor))
}
