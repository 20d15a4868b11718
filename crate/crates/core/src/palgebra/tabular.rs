use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{axpy, scale, unit_vec, Rat, RatMatrix, SparseVec};
use crate::operad::tree::Tree;
use crate::operad::{validate::Axiom, OpIndex, OperadMorphism, OperadTable, ValidationReport, Violation};

use super::{Algebra, Elem};

/// Input tuple of basis elements `(degree, index)`.
pub type ThetaKey = Vec<(i64, usize)>;

/// Values of a binary operation on pairs of basis elements.
pub type BinaryTable = BTreeMap<((i64, usize), (i64, usize)), SparseVec>;

fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

/// Koszul sign of reordering `degrees` into `degrees[sigma[0]], degrees[sigma[1]], ...`.
pub(crate) fn koszul_negative(degrees: &[i64], sigma: &[usize]) -> bool {
    let mut neg = false;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] && odd(degrees[sigma[a]]) && odd(degrees[sigma[b]]) {
                neg = !neg;
            }
        }
    }
    neg
}

/// A finite-type algebra with explicit structure tables on a degree window.
///
/// The algebra is zero below the window; asking for anything above it is an
/// error. Tables cover every operation of arity at most `max_arity`; a
/// missing tuple means zero unless it is listed in `undefined`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabularAlgebra {
    pub name: String,
    operad: Arc<OperadTable>,
    pub complex: ChainComplex,
    pub max_arity: usize,
    pub tables: BTreeMap<(usize, usize), BTreeMap<ThetaKey, SparseVec>>,
    /// Tuples whose value could not be computed inside the window.
    pub undefined: BTreeSet<(usize, usize, ThetaKey)>,
}

impl TabularAlgebra {
    pub fn new(
        name: impl Into<String>,
        operad: Arc<OperadTable>,
        complex: ChainComplex,
        max_arity: usize,
        tables: BTreeMap<(usize, usize), BTreeMap<ThetaKey, SparseVec>>,
    ) -> Result<Self> {
        if operad.convention != complex.convention {
            return Err(Error::ConventionMismatch("algebra and operad".into()));
        }
        if max_arity > operad.arity_bound {
            return Err(Error::ArityOverflow {
                arity: max_arity,
                bound: operad.arity_bound,
            });
        }
        let a = TabularAlgebra {
            name: name.into(),
            operad,
            complex,
            max_arity,
            tables,
            undefined: BTreeSet::new(),
        };
        a.check_shapes()?;
        Ok(a)
    }

    fn check_shapes(&self) -> Result<()> {
        for (&(n, op), t) in &self.tables {
            if n > self.max_arity || op >= self.operad.dim(n)? {
                return Err(Error::Schema(format!("table for unknown operation ({n}, {op})")));
            }
            let q = self.operad.degree(OpIndex::new(n, op));
            for (key, v) in t {
                if key.len() != n {
                    return Err(Error::Schema(format!("input tuple of length {} for arity {n}", key.len())));
                }
                let mut out = q;
                for &(d, i) in key {
                    if i >= self.complex.dim(d)? {
                        return Err(Error::Schema(format!("basis index {i} out of range in degree {d}")));
                    }
                    out += d;
                }
                if !v.is_empty() {
                    let dim = self.complex.dim(out)?;
                    if v.keys().any(|&j| j >= dim) {
                        return Err(Error::Schema(format!("output index out of range in degree {out}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds all tables up to `max_arity` from tables of the binary
    /// generators, using the operad's tree presentation.
    pub fn from_binary(
        name: impl Into<String>,
        operad: Arc<OperadTable>,
        complex: ChainComplex,
        binary: Vec<BinaryTable>,
        unit: Option<SparseVec>,
        max_arity: usize,
    ) -> Result<Self> {
        let pres = operad
            .presentation
            .clone()
            .ok_or_else(|| Error::MissingStructure(format!("{} has no generator presentation", operad.name)))?;
        if binary.len() != pres.generators.len() {
            return Err(Error::Precondition(format!(
                "{} binary tables for {} generators",
                binary.len(),
                pres.generators.len()
            )));
        }
        let mut alg = TabularAlgebra::new(name, operad.clone(), complex, max_arity.min(operad.arity_bound), BTreeMap::new())?;
        let (lo, hi) = (alg.complex.lo(), alg.complex.hi());
        if let Some(u) = unit {
            if operad.unit_op().is_none() {
                return Err(Error::Precondition("unit given for a reduced operad".into()));
            }
            alg.tables.insert((0, 0), BTreeMap::from([(Vec::new(), u)]));
        }
        let nonzero: Vec<i64> = (lo..=hi).filter(|&k| alg.complex.dim(k).unwrap_or(0) > 0).collect();
        for n in 1..=alg.max_arity {
            for (op, tree) in pres.trees[n].iter().enumerate() {
                let tree = tree.as_ref().expect("positive arity has a tree");
                let q = operad.degree(OpIndex::new(n, op));
                let mut table = BTreeMap::new();
                for key in tuples(&alg.complex, &nonzero, n, q, hi) {
                    match eval_tree(&alg.complex, &binary, &operad, tree, &key) {
                        Ok(Some(v)) => {
                            if !v.coords.is_empty() {
                                table.insert(key, v.coords);
                            }
                        }
                        Ok(None) => {
                            alg.undefined.insert((n, op, key));
                        }
                        Err(e) => return Err(e),
                    }
                }
                alg.tables.insert((n, op), table);
            }
        }
        Ok(alg)
    }

    fn lookup(&self, n: usize, op: usize, key: &ThetaKey) -> Result<Option<&SparseVec>> {
        if self.undefined.contains(&(n, op, key.clone())) {
            return Err(Error::MissingStructure(format!(
                "{}: value of {} on {key:?} leaves the degree window",
                self.name,
                self.operad.label(OpIndex::new(n, op))
            )));
        }
        Ok(self.tables.get(&(n, op)).and_then(|t| t.get(key)))
    }

    /// Sparse structure entries `(arity, op, inputs, output)` for serialization.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &ThetaKey, &SparseVec)> {
        self.tables
            .iter()
            .flat_map(|(&(n, op), t)| t.iter().map(move |(k, v)| (n, op, k, v)))
    }

    /// Exhaustive check of equivariance, associativity and the derivation
    /// law on all basis tuples of the window.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let record = |rep: &mut ValidationReport, ok: bool, axiom: Axiom, w: &dyn Fn() -> String| {
            rep.checks += 1;
            if !ok {
                rep.violation_count += 1;
                if rep.violations.len() < 64 {
                    rep.violations.push(Violation { axiom, witness: w() });
                }
            }
        };
        let p = &*self.operad;
        let (lo, hi) = (self.complex.lo(), self.complex.hi());
        let delta = p.convention.delta();
        let nonzero: Vec<i64> = (lo..=hi).filter(|&k| self.complex.dim(k).unwrap_or(0) > 0).collect();
        let elem = |key: &ThetaKey| -> Vec<Elem> { key.iter().map(|&(d, i)| Elem::basis(d, i)).collect() };
        let lo_arity = if p.unit_op().is_some() { 0 } else { 1 };

        // unit law and equivariance
        for n in 1..=self.max_arity {
            for key in tuples(&self.complex, &nonzero, n, i64::MIN, hi) {
                let args = elem(&key);
                if n == 1 {
                    let v = self.theta(1, &unit_vec(0), &args);
                    record(&mut rep, v.as_ref().ok() == Some(&args[0]), Axiom::Unit, &|| format!("id on {key:?}"));
                }
                for op in 0..p.arities[n].dim() {
                    for i in 0..n.saturating_sub(1) {
                        let mut sigma: Vec<usize> = (0..n).collect();
                        sigma.swap(i, i + 1);
                        let sop = p.transpose(n, i, &unit_vec(op));
                        let lhs = self.theta(n, &sop, &args);
                        let degs: Vec<i64> = key.iter().map(|k| k.0).collect();
                        let swapped: Vec<Elem> = sigma.iter().map(|&j| args[j].clone()).collect();
                        let rhs = self.theta(n, &unit_vec(op), &swapped).map(|mut e| {
                            if koszul_negative(&degs, &sigma) {
                                e.coords = scale(&e.coords, &-Rat::one());
                            }
                            e
                        });
                        if let (Ok(l), Ok(r)) = (lhs, rhs) {
                            record(&mut rep, l == r, Axiom::Equivariance, &|| {
                                format!("{} with s_{i} on {key:?}", p.label(OpIndex::new(n, op)))
                            });
                        }
                    }
                }
            }
        }

        // associativity
        for m in 1..=self.max_arity {
            for n in lo_arity..=self.max_arity + 1 - m {
                if m + n - 1 > self.max_arity {
                    continue;
                }
                for key in tuples(&self.complex, &nonzero, m + n - 1, i64::MIN, hi) {
                    let args = elem(&key);
                    for a in 0..p.arities[m].dim() {
                        for b in 0..p.arities[n].dim() {
                            for i in 0..m {
                                let Ok(comp) = p.compose_basis(m, i, a, n, b) else { continue };
                                let Ok(lhs) = self.theta(m + n - 1, comp, &args) else { continue };
                                let Ok(inner) = self.theta(n, &unit_vec(b), &args[i..i + n]) else { continue };
                                let mut outer: Vec<Elem> = args[..i].to_vec();
                                outer.push(inner);
                                outer.extend_from_slice(&args[i + n..]);
                                let Ok(mut rhs) = self.theta(m, &unit_vec(a), &outer) else { continue };
                                let before: i64 = key[..i].iter().map(|k| k.0).sum();
                                if odd(p.degree(OpIndex::new(n, b)) * before) {
                                    rhs.coords = scale(&rhs.coords, &-Rat::one());
                                }
                                record(&mut rep, lhs.coords == rhs.coords, Axiom::AssociativitySequential, &|| {
                                    format!(
                                        "{} o_{i} {} on {key:?}",
                                        p.label(OpIndex::new(m, a)),
                                        p.label(OpIndex::new(n, b))
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }

        // derivation law
        for n in lo_arity..=self.max_arity {
            for key in tuples(&self.complex, &nonzero, n, i64::MIN, hi) {
                let args = elem(&key);
                for op in 0..p.arities[n].dim() {
                    let q = p.degree(OpIndex::new(n, op));
                    let Ok(val) = self.theta(n, &unit_vec(op), &args) else { continue };
                    if !self.complex.space.in_window(val.degree + delta) || val.degree < lo {
                        continue;
                    }
                    let Ok(dmat) = self.complex.differential(val.degree) else { continue };
                    let lhs = dmat.mul_vec(&val.coords);
                    let mut rhs = SparseVec::new();
                    let mut ok = true;
                    let dop = p.differential(n, &unit_vec(op));
                    if !dop.is_empty() {
                        match self.theta(n, &dop, &args) {
                            Ok(e) => axpy(&mut rhs, &Rat::one(), &e.coords),
                            Err(_) => ok = false,
                        }
                    }
                    let mut before = q;
                    for i in 0..n {
                        let (d, idx) = key[i];
                        if self.complex.space.in_window(d + delta) {
                            let da = self.complex.differential(d).unwrap().column(idx);
                            if !da.is_empty() {
                                let mut xs = args.clone();
                                xs[i] = Elem::new(d + delta, da);
                                match self.theta(n, &unit_vec(op), &xs) {
                                    Ok(e) => axpy(&mut rhs, &Rat::sign(odd(before)), &e.coords),
                                    Err(_) => ok = false,
                                }
                            }
                        }
                        before += d;
                    }
                    if ok {
                        record(&mut rep, lhs == rhs, Axiom::Derivation, &|| {
                            format!("d {}({key:?})", p.label(OpIndex::new(n, op)))
                        });
                    }
                }
            }
        }
        rep
    }
}

/// Input tuples of `n` basis elements whose output degree `q + Σ` is at most `hi`
/// (all tuples when `q` is `i64::MIN`).
fn tuples(c: &ChainComplex, degrees: &[i64], n: usize, q: i64, hi: i64) -> Vec<ThetaKey> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(c: &ChainComplex, degrees: &[i64], left: usize, acc: i64, q: i64, hi: i64, cur: &mut ThetaKey, out: &mut Vec<ThetaKey>) {
        if left == 0 {
            if q == i64::MIN || (q + acc <= hi && q + acc >= c.lo()) {
                out.push(cur.clone());
            }
            return;
        }
        for &d in degrees {
            for i in 0..c.dim(d).unwrap_or(0) {
                cur.push((d, i));
                rec(c, degrees, left - 1, acc + d, q, hi, cur, out);
                cur.pop();
            }
        }
    }
    rec(c, degrees, n, 0, q, hi, &mut cur, &mut out);
    out
}

/// Value of a labelled tree on basis inputs, or `None` if an intermediate
/// value leaves the window.
fn eval_tree(
    c: &ChainComplex,
    binary: &[BinaryTable],
    p: &OperadTable,
    tree: &Tree,
    key: &ThetaKey,
) -> Result<Option<Elem>> {
    let leaves = tree.leaves();
    let degs: Vec<i64> = key.iter().map(|k| k.0).collect();
    let planar: Vec<Elem> = leaves.iter().map(|&l| Elem::basis(key[l].0, key[l].1)).collect();
    let gens: Vec<i64> = p
        .presentation
        .as_ref()
        .unwrap()
        .generators
        .iter()
        .map(|&g| p.degree(OpIndex::new(2, g)))
        .collect();
    let mut pos = 0;
    let v = eval_planar(c, binary, &gens, tree, &planar, &mut pos)?;
    Ok(v.map(|mut e| {
        if koszul_negative(&degs, &leaves) {
            e.coords = scale(&e.coords, &-Rat::one());
        }
        e
    }))
}

fn eval_planar(
    c: &ChainComplex,
    binary: &[BinaryTable],
    gen_degrees: &[i64],
    tree: &Tree,
    args: &[Elem],
    pos: &mut usize,
) -> Result<Option<Elem>> {
    match tree {
        Tree::Leaf(_) => {
            let e = args[*pos].clone();
            *pos += 1;
            Ok(Some(e))
        }
        Tree::Node(g, l, r) => {
            let start = *pos;
            let Some(x) = eval_planar(c, binary, gen_degrees, l, args, pos)? else { return Ok(None) };
            let left_deg: i64 = args[start..*pos].iter().map(|e| e.degree).sum();
            let Some(y) = eval_planar(c, binary, gen_degrees, r, args, pos)? else { return Ok(None) };
            let rdeg = tree_degree(r, gen_degrees);
            let out_deg = gen_degrees[*g] + x.degree + y.degree;
            if out_deg > c.hi() {
                return Ok(None);
            }
            let mut v = SparseVec::new();
            if out_deg >= c.lo() {
                for (&i, ci) in &x.coords {
                    for (&j, cj) in &y.coords {
                        if let Some(e) = binary[*g].get(&((x.degree, i), (y.degree, j))) {
                            axpy(&mut v, &(ci * cj), e);
                        }
                    }
                }
            }
            if odd(rdeg * left_deg) {
                v = scale(&v, &-Rat::one());
            }
            Ok(Some(Elem::new(out_deg, v)))
        }
    }
}

fn tree_degree(t: &Tree, gen_degrees: &[i64]) -> i64 {
    match t {
        Tree::Leaf(_) => 0,
        Tree::Node(g, l, r) => gen_degrees[*g] + tree_degree(l, gen_degrees) + tree_degree(r, gen_degrees),
    }
}

impl Algebra for TabularAlgebra {
    fn as_any(&self) -> Option<&dyn std::any::Any> {
        Some(self)
    }


    fn operad(&self) -> &Arc<OperadTable> {
        &self.operad
    }

    fn lowest_degree(&self) -> i64 {
        self.complex.lo()
    }

    fn highest_degree(&self) -> Option<i64> {
        Some(self.complex.hi())
    }

    fn dim(&self, k: i64) -> Result<usize> {
        if k < self.complex.lo() {
            return Ok(0);
        }
        self.complex.dim(k)
    }

    fn differential(&self, k: i64) -> Result<RatMatrix> {
        let delta = self.convention().delta();
        let (lo, hi) = (self.complex.lo(), self.complex.hi());
        if k > hi || k + delta > hi {
            return Err(Error::OutOfWindow { degree: k.max(k + delta), lo, hi });
        }
        if k < lo || k + delta < lo {
            return Ok(RatMatrix::zeros(self.dim(k + delta)?, self.dim(k)?));
        }
        Ok(self.complex.differential(k)?.clone())
    }

    fn theta(&self, n: usize, op: &SparseVec, args: &[Elem]) -> Result<Elem> {
        assert_eq!(args.len(), n);
        if n > self.max_arity {
            return Err(Error::MissingStructure(format!(
                "{}: structure maps of arity {n} not tabulated (max {})",
                self.name, self.max_arity
            )));
        }
        let argdeg: i64 = args.iter().map(|a| a.degree).sum();
        let mut out_deg = None;
        let mut v = SparseVec::new();
        for (&a, ca) in op {
            let d = self.operad.degree(OpIndex::new(n, a)) + argdeg;
            out_deg = Some(d);
            self.check_degree(d)?;
            if d < self.complex.lo() || args.iter().any(|e| e.is_zero()) {
                continue;
            }
            let terms: Vec<Vec<(&usize, &Rat)>> = args.iter().map(|e| e.coords.iter().collect()).collect();
            let mut idx = vec![0usize; n];
            loop {
                let mut key = Vec::with_capacity(n);
                let mut coef = ca.clone();
                for (i, t) in terms.iter().enumerate() {
                    let (&j, c) = t[idx[i]];
                    key.push((args[i].degree, j));
                    coef = &coef * c;
                }
                if let Some(val) = self.lookup(n, a, &key)? {
                    axpy(&mut v, &coef, val);
                }
                let mut i = 0;
                while i < n {
                    idx[i] += 1;
                    if idx[i] < terms[i].len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        Ok(Elem::new(out_deg.unwrap_or(argdeg), v))
    }

    fn basis_labels(&self, k: i64) -> Result<Vec<String>> {
        if k < self.complex.lo() {
            return Ok(Vec::new());
        }
        self.complex.space.check(k)?;
        Ok(self.complex.space.labels(k).to_vec())
    }
}

/// Restriction of scalars along `f`: `θ'(μ) = θ(F(μ))`, same complex.
pub fn restrict(f: &OperadMorphism, b: &TabularAlgebra) -> Result<TabularAlgebra> {
    if *f.target != **b.operad() {
        return Err(Error::OperadMismatch(format!(
            "morphism targets {}, algebra is over {}",
            f.target.name,
            b.operad().name
        )));
    }
    let src = &f.source;
    let max_arity = b.max_arity.min(src.arity_bound);
    let mut tables = BTreeMap::new();
    let mut undefined = BTreeSet::new();
    for n in 0..=max_arity {
        for a in 0..src.arities[n].dim() {
            let image = f.apply(n, &unit_vec(a));
            let mut t: BTreeMap<ThetaKey, SparseVec> = BTreeMap::new();
            for (&bop, c) in &image {
                if let Some(tb) = b.tables.get(&(n, bop)) {
                    for (key, v) in tb {
                        let e = t.entry(key.clone()).or_default();
                        axpy(e, c, v);
                    }
                }
                for (m, o, key) in &b.undefined {
                    if *m == n && *o == bop {
                        undefined.insert((n, a, key.clone()));
                    }
                }
            }
            t.retain(|_, v| !v.is_empty());
            tables.insert((n, a), t);
        }
    }
    let mut out = TabularAlgebra::new(
        format!("{}|{}", b.name, src.name),
        src.clone(),
        b.complex.clone(),
        max_arity,
        tables,
    )?;
    out.undefined = undefined;
    Ok(out)
}
