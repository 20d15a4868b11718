//! Free algebras `P<V>` on graded generators with derivation differentials.

mod element;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::complex::Convention;
use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, Rref, SparseVec};
use crate::operad::{OpIndex, OperadTable};

pub use element::{FreeElement, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub degree: i64,
    pub stage: usize,
}

impl Generator {
    pub fn new(label: impl Into<String>, degree: i64, stage: usize) -> Self {
        Generator {
            label: label.into(),
            degree,
            stage,
        }
    }
}

type StabKey = (usize, i64, Vec<Option<bool>>);

/// Quotients `P(n)^q / (s_i μ - ± μ)` for repeated slots, shared between
/// an algebra and its extensions.
#[derive(Debug, Default)]
struct StabCache {
    map: HashMap<StabKey, Arc<StabQuotient>>,
}

#[derive(Debug)]
struct StabQuotient {
    relations: Rref,
    /// Operation indices spanning the quotient.
    basis: Vec<usize>,
}

#[derive(Debug, Default)]
struct Caches {
    basis: BTreeMap<i64, Arc<Basis>>,
    differential: BTreeMap<i64, Arc<RatMatrix>>,
    /// Set when some basis was computed with the arity cap in force.
    capped: bool,
}

#[derive(Debug)]
pub struct Basis {
    pub monomials: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
}

/// `P<V>` with a differential given on generators.
#[derive(Debug)]
pub struct FreeAlgebra {
    operad: Arc<OperadTable>,
    generators: Vec<Generator>,
    d: Vec<FreeElement>,
    arity_cap: Option<usize>,
    stab: Arc<Mutex<StabCache>>,
    caches: Mutex<Caches>,
}

impl Clone for FreeAlgebra {
    fn clone(&self) -> Self {
        FreeAlgebra {
            operad: self.operad.clone(),
            generators: self.generators.clone(),
            d: self.d.clone(),
            arity_cap: self.arity_cap,
            stab: self.stab.clone(),
            caches: Mutex::new(Caches::default()),
        }
    }
}

impl PartialEq for FreeAlgebra {
    fn eq(&self, other: &Self) -> bool {
        *self.operad == *other.operad
            && self.generators == other.generators
            && self.d == other.d
            && self.arity_cap == other.arity_cap
    }
}

fn parity(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

impl FreeAlgebra {
    /// Free algebra with zero differential.
    pub fn new(operad: Arc<OperadTable>, generators: Vec<Generator>) -> Result<Self> {
        let d = generators
            .iter()
            .map(|g| FreeElement::zero(g.degree + operad.convention.delta()))
            .collect();
        Self::with_differential(operad, generators, d)
    }

    /// Free algebra with `d(generators[i]) = d[i]`; checks degrees and `d^2 = 0`
    /// on generators.
    pub fn with_differential(
        operad: Arc<OperadTable>,
        generators: Vec<Generator>,
        d: Vec<FreeElement>,
    ) -> Result<Self> {
        let alg = FreeAlgebra {
            operad,
            generators,
            d,
            arity_cap: None,
            stab: Arc::new(Mutex::new(StabCache::default())),
            caches: Mutex::new(Caches::default()),
        };
        alg.check_generators()?;
        Ok(alg)
    }

    fn check_generators(&self) -> Result<()> {
        let delta = self.convention().delta();
        if self.generators.len() != self.d.len() {
            return Err(Error::InvalidGenerator("one differential per generator required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.degree < 1 {
                return Err(Error::InvalidGenerator(format!(
                    "`{}` has degree {}; generators must have degree >= 1",
                    g.label, g.degree
                )));
            }
            if !seen.insert((g.label.clone(), g.stage)) {
                return Err(Error::InvalidGenerator(format!("duplicate generator `{}`", g.label)));
            }
            let dg = &self.d[i];
            if dg.degree != g.degree + delta {
                return Err(Error::DegreeMismatch(format!(
                    "d({}) has degree {}, expected {}",
                    g.label,
                    dg.degree,
                    g.degree + delta
                )));
            }
            for m in dg.terms.keys() {
                if m.slots.iter().any(|&s| s >= self.generators.len()) {
                    return Err(Error::InvalidGenerator(format!("d({}) uses an unknown generator", g.label)));
                }
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            if !self.d[i].is_zero() {
                let dd = self.apply_d(&self.d[i])?;
                if !dd.is_zero() {
                    return Err(Error::NotCocycle(g.label.clone()));
                }
            }
        }
        Ok(())
    }

    /// Caps the arity of monomials; results are then valid modulo the cap.
    pub fn with_arity_cap(mut self, cap: Option<usize>) -> Self {
        self.arity_cap = cap;
        self.caches = Mutex::new(Caches::default());
        self
    }

    pub fn arity_cap(&self) -> Option<usize> {
        self.arity_cap
    }

    /// Whether some computed basis was truncated by the arity cap.
    pub fn cap_in_force(&self) -> bool {
        self.caches.lock().unwrap().capped
    }

    pub fn operad(&self) -> &Arc<OperadTable> {
        &self.operad
    }

    pub fn convention(&self) -> Convention {
        self.operad.convention
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_differential(&self, i: usize) -> &FreeElement {
        &self.d[i]
    }

    pub fn find_generator(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn num_stages(&self) -> usize {
        self.generators.iter().map(|g| g.stage + 1).max().unwrap_or(0)
    }

    fn gen_key(&self, g: usize) -> (i64, &str, usize) {
        let x = &self.generators[g];
        (x.degree, x.label.as_str(), x.stage)
    }

    pub fn generator_element(&self, g: usize) -> FreeElement {
        FreeElement::monomial(
            self.generators[g].degree,
            Monomial {
                arity: 1,
                slots: vec![g],
                op: 0,
            },
            Rat::one(),
        )
    }

    pub fn unit_element(&self) -> Option<FreeElement> {
        self.operad.unit_op().map(|_| {
            FreeElement::monomial(
                0,
                Monomial {
                    arity: 0,
                    slots: vec![],
                    op: 0,
                },
                Rat::one(),
            )
        })
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        self.operad.degree(OpIndex::new(m.arity, m.op))
            + m.slots.iter().map(|&s| self.generators[s].degree).sum::<i64>()
    }

    fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&s| self.generators[s].degree).sum()
    }

    /// Largest arity that can contribute in degree `k`, and whether the cap
    /// had to be used.
    pub fn required_arity(&self, k: i64) -> Result<(usize, bool)> {
        let p = &*self.operad;
        let Some(gmin) = self.generators.iter().map(|g| g.degree).min() else {
            return Ok((0, false));
        };
        let mut best = 0;
        for n in 0..=p.arity_bound {
            if let Some(q) = p.min_degree(n) {
                if q + n as i64 * gmin <= k {
                    best = n;
                }
            }
        }
        let bound = p.arity_bound;
        let beyond: Option<Result<usize>> = match p.degree_floor {
            None => Some(Err(Error::ArityOverflow {
                arity: bound + 1,
                bound,
            })),
            Some(f) => {
                let rate = f.slope + gmin;
                let first = f.at(bound + 1) + (bound as i64 + 1) * gmin;
                if first > k && rate >= 0 {
                    None
                } else if rate <= 0 {
                    Some(Err(Error::UnboundedArity {
                        degree: k,
                        min_gen_degree: gmin,
                    }))
                } else {
                    // largest n with base + rate * n <= k
                    let n = (k - f.base).div_euclid(rate) as usize;
                    Some(Err(Error::ArityOverflow { arity: n, bound }))
                }
            }
        };
        match (beyond, self.arity_cap) {
            (None, cap) => Ok((cap.map_or(best, |c| best.min(c)), cap.is_some_and(|c| c < best))),
            (Some(Err(e)), None) => Err(e),
            (Some(Err(_)), Some(c)) => {
                if c > bound {
                    return Err(Error::ArityOverflow { arity: c, bound });
                }
                Ok((c, true))
            }
            (Some(Ok(_)), _) => unreachable!(),
        }
    }

    fn stab_quotient(&self, n: usize, q: i64, word: &[usize]) -> Arc<StabQuotient> {
        let pattern: Vec<Option<bool>> = (0..n.saturating_sub(1))
            .map(|i| (word[i] == word[i + 1]).then(|| parity(self.generators[word[i]].degree)))
            .collect();
        let key = (n, q, pattern);
        if let Some(s) = self.stab.lock().unwrap().map.get(&key) {
            return s.clone();
        }
        let p = &*self.operad;
        let ops = p.basis_of_degree(n, q);
        let mut rels = Vec::new();
        for (i, eq) in key.2.iter().enumerate() {
            if let Some(odd) = eq {
                for &a in &ops {
                    let mut v = p.transpose(n, i, &crate::linalg::unit_vec(a));
                    crate::linalg::add_entry(&mut v, a, Rat::from_int(if *odd { 1 } else { -1 }));
                    rels.push(v);
                }
            }
        }
        let relations = Rref::from_vectors(p.arities[n].dim(), rels.iter());
        let pivots: std::collections::HashSet<usize> = relations.pivots().iter().copied().collect();
        let basis = ops.into_iter().filter(|a| !pivots.contains(a)).collect();
        let s = Arc::new(StabQuotient { relations, basis });
        self.stab.lock().unwrap().map.insert(key, s.clone());
        s
    }

    /// Canonical form of `op ⊗ word` where `op` lies in `P(n)`.
    pub fn normalize(&self, n: usize, op: &SparseVec, word: &[usize], coef: &Rat, out: &mut FreeElement) {
        if op.is_empty() || coef.is_zero() {
            return;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.gen_key(word[a]).cmp(&self.gen_key(word[b])).then(a.cmp(&b)));
        // sigma(j) = position of word[j] in the sorted word
        let mut sigma = vec![0; n];
        for (pos, &j) in order.iter().enumerate() {
            sigma[j] = pos;
        }
        let sorted: Vec<usize> = order.iter().map(|&j| word[j]).collect();
        let mut negative = false;
        for a in 0..n {
            for b in a + 1..n {
                if sigma[a] > sigma[b]
                    && parity(self.generators[word[a]].degree)
                    && parity(self.generators[word[b]].degree)
                {
                    negative = !negative;
                }
            }
        }
        let moved = self.operad.act(n, &sigma, op);
        let c = if negative { -coef.clone() } else { coef.clone() };
        // every term of `moved` shares one degree per homogeneous component
        let mut by_degree: BTreeMap<i64, SparseVec> = BTreeMap::new();
        for (a, x) in moved {
            by_degree.entry(self.operad.arities[n].degrees[a]).or_default().insert(a, x);
        }
        for (q, v) in by_degree {
            let stab = self.stab_quotient(n, q, &sorted);
            let red = stab.relations.reduce(&v);
            for (a, x) in red {
                let m = Monomial {
                    arity: n,
                    slots: sorted.clone(),
                    op: a,
                };
                out.add_term(m, &c * &x);
            }
        }
    }

    /// Slot multisets (sorted by generator key) of size `n` and total degree `s`.
    fn words(&self, n: usize, total: i64) -> Vec<Vec<usize>> {
        let mut gens: Vec<usize> = (0..self.generators.len()).collect();
        gens.sort_by(|&a, &b| self.gen_key(a).cmp(&self.gen_key(b)));
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(
            alg: &FreeAlgebra,
            gens: &[usize],
            start: usize,
            left: usize,
            total: i64,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if left == 0 {
                if total == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for k in start..gens.len() {
                let d = alg.generators[gens[k]].degree;
                // later generators have degree >= d
                if d * left as i64 > total {
                    break;
                }
                cur.push(gens[k]);
                rec(alg, gens, k, left - 1, total - d, cur, out);
                cur.pop();
            }
        }
        rec(self, &gens, 0, n, total, &mut cur, &mut out);
        out
    }

    /// Ordered monomial basis in degree `k`.
    pub fn basis(&self, k: i64) -> Result<Arc<Basis>> {
        if let Some(b) = self.caches.lock().unwrap().basis.get(&k) {
            return Ok(b.clone());
        }
        let (max_n, capped) = self.required_arity(k)?;
        let p = &*self.operad;
        let mut monomials = Vec::new();
        for n in 0..=max_n {
            if p.dim(n)? == 0 {
                continue;
            }
            for q in p.degrees_in_arity(n) {
                let s = k - q;
                if n == 0 && s != 0 {
                    continue;
                }
                for w in self.words(n, s) {
                    let stab = self.stab_quotient(n, q, &w);
                    for &a in &stab.basis {
                        monomials.push(Monomial {
                            arity: n,
                            slots: w.clone(),
                            op: a,
                        });
                    }
                }
            }
        }
        monomials.sort();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let b = Arc::new(Basis { monomials, index });
        let mut c = self.caches.lock().unwrap();
        c.capped |= capped;
        c.basis.insert(k, b.clone());
        Ok(b)
    }

    pub fn dim(&self, k: i64) -> Result<usize> {
        Ok(self.basis(k)?.monomials.len())
    }

    /// Coordinates of an element in `basis(degree)`.
    pub fn coords(&self, x: &FreeElement) -> Result<SparseVec> {
        let b = self.basis(x.degree)?;
        let mut v = SparseVec::new();
        for (m, c) in &x.terms {
            let i = b.index.get(m).ok_or_else(|| {
                Error::Precondition(format!("monomial {m:?} outside the computed basis in degree {}", x.degree))
            })?;
            v.insert(*i, c.clone());
        }
        Ok(v)
    }

    pub fn from_coords(&self, k: i64, v: &SparseVec) -> Result<FreeElement> {
        let b = self.basis(k)?;
        let mut x = FreeElement::zero(k);
        for (&i, c) in v {
            x.add_term(b.monomials[i].clone(), c.clone());
        }
        Ok(x)
    }

    /// `θ(op; args)` for `op ∈ P(l)`: compose operations, shuffle, normalize.
    pub fn theta(&self, l: usize, op: &SparseVec, args: &[FreeElement]) -> Result<FreeElement> {
        assert_eq!(args.len(), l);
        let p = &*self.operad;
        let mut deg: Option<i64> = None;
        let mut out = FreeElement::zero(0);
        // iterate over all choices of one term per argument
        let terms: Vec<Vec<(&Monomial, &Rat)>> = args.iter().map(|a| a.terms.iter().collect()).collect();
        let arg_deg: i64 = args.iter().map(|a| a.degree).sum();
        for (&a, ca) in op {
            let d = p.degree(OpIndex::new(l, a)) + arg_deg;
            if let Some(d0) = deg {
                if d0 != d {
                    return Err(Error::DegreeMismatch("inhomogeneous operation".into()));
                }
            }
            deg = Some(d);
            out.degree = d;
            if terms.iter().any(|t| t.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; l];
            loop {
                let mut coef = ca.clone();
                let mut negative = false;
                let mut word = Vec::new();
                let mut inner = Vec::with_capacity(l);
                let mut wdeg_before = 0i64;
                for (i, t) in terms.iter().enumerate() {
                    let (m, c) = t[idx[i]];
                    coef = &coef * c;
                    let nu = p.degree(OpIndex::new(m.arity, m.op));
                    if parity(nu) && parity(wdeg_before) {
                        negative = !negative;
                    }
                    wdeg_before += self.word_degree(&m.slots);
                    word.extend_from_slice(&m.slots);
                    inner.push((m.arity, crate::linalg::unit_vec(m.op)));
                }
                let composed = p.gamma(l, &crate::linalg::unit_vec(a), &inner)?;
                if negative {
                    coef = -coef;
                }
                self.normalize(word.len(), &composed, &word, &coef, &mut out);
                // advance the multi-index
                let mut i = 0;
                while i < l {
                    idx[i] += 1;
                    if idx[i] < terms[i].len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == l {
                    break;
                }
            }
        }
        if deg.is_none() {
            out.degree = arg_deg;
        }
        Ok(out)
    }

    /// Applies the derivation extending the generator differentials.
    pub fn apply_d(&self, x: &FreeElement) -> Result<FreeElement> {
        let delta = self.convention().delta();
        let mut out = FreeElement::zero(x.degree + delta);
        for (m, c) in &x.terms {
            let y = self.d_monomial(m)?;
            out.add_scaled(&y, c);
        }
        Ok(out)
    }

    fn d_monomial(&self, m: &Monomial) -> Result<FreeElement> {
        let p = &*self.operad;
        let n = m.arity;
        let delta = self.convention().delta();
        let mu_deg = p.degree(OpIndex::new(n, m.op));
        let mut out = FreeElement::zero(self.monomial_degree(m) + delta);
        let op = crate::linalg::unit_vec(m.op);
        let dmu = p.differential(n, &op);
        if !dmu.is_empty() {
            self.normalize(n, &dmu, &m.slots, &Rat::one(), &mut out);
        }
        let gens: Vec<FreeElement> = m.slots.iter().map(|&s| self.generator_element(s)).collect();
        let mut before = mu_deg;
        for i in 0..n {
            let dg = &self.d[m.slots[i]];
            if !dg.is_zero() {
                let mut args = gens.clone();
                args[i] = dg.clone();
                let t = self.theta(n, &op, &args)?;
                out.add_scaled(&t, &Rat::sign(parity(before)));
            }
            before += self.generators[m.slots[i]].degree;
        }
        Ok(out)
    }

    /// Matrix of `d` from degree `k` to degree `k + delta`.
    pub fn differential(&self, k: i64) -> Result<Arc<RatMatrix>> {
        if let Some(m) = self.caches.lock().unwrap().differential.get(&k) {
            return Ok(m.clone());
        }
        let delta = self.convention().delta();
        let src = self.basis(k)?;
        let tgt = self.basis(k + delta)?;
        let mut cols = Vec::with_capacity(src.monomials.len());
        for m in &src.monomials {
            let y = self.d_monomial(m)?;
            cols.push(self.coords(&y)?);
        }
        let mat = Arc::new(RatMatrix::from_cols(tgt.monomials.len(), &cols));
        self.caches.lock().unwrap().differential.insert(k, mat.clone());
        Ok(mat)
    }

    /// Differential matrices for every degree in `[lo, hi]`, checking `d^2 = 0`.
    pub fn extend_derivation(&self, lo: i64, hi: i64) -> Result<BTreeMap<i64, Arc<RatMatrix>>> {
        let delta = self.convention().delta();
        let mut out = BTreeMap::new();
        for k in lo..=hi {
            out.insert(k, self.differential(k)?);
        }
        for k in lo..=hi {
            let next = self.differential(k + delta)?;
            let dd = next.mul(&out[&k]);
            if !dd.is_zero() {
                let (r, c, _) = dd.entries().next().unwrap();
                let b = self.basis(k)?;
                let _ = r;
                return Err(Error::DifferentialSquare(format!(
                    "on monomial {} in degree {k}",
                    self.format_monomial(&b.monomials[c])
                )));
            }
        }
        Ok(out)
    }

    /// Adjoins a stage of generators of one degree, with `d` landing in
    /// cocycles of the current algebra.
    pub fn ks_extend(&self, new: Vec<(String, FreeElement)>, degree: i64) -> Result<FreeAlgebra> {
        let delta = self.convention().delta();
        let stage = self.num_stages();
        let mut generators = self.generators.clone();
        let mut d = self.d.clone();
        for (label, dv) in new {
            if dv.degree != degree + delta {
                return Err(Error::DegreeMismatch(format!(
                    "d({label}) has degree {}, expected {}",
                    dv.degree,
                    degree + delta
                )));
            }
            if !dv.is_zero() {
                let ddv = self.apply_d(&dv)?;
                if !ddv.is_zero() {
                    return Err(Error::NotCocycle(label));
                }
            }
            generators.push(Generator { label, degree, stage });
            d.push(dv);
        }
        let alg = FreeAlgebra {
            operad: self.operad.clone(),
            generators,
            d,
            arity_cap: self.arity_cap,
            stab: self.stab.clone(),
            caches: Mutex::new(Caches::default()),
        };
        alg.check_generators()?;
        Ok(alg)
    }

    /// Every generator's differential involves only generators of earlier stages.
    pub fn is_sullivan(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, g)| {
            self.d[i]
                .terms
                .keys()
                .all(|m| m.slots.iter().all(|&s| self.generators[s].stage < g.stage))
        })
    }

    /// Sullivan, with stages homogeneous of non-decreasing degree `> r`.
    pub fn is_minimal(&self, r: i64) -> bool {
        if !self.is_sullivan() {
            return false;
        }
        let mut stage_deg: BTreeMap<usize, i64> = BTreeMap::new();
        for g in &self.generators {
            if g.degree <= r {
                return false;
            }
            if let Some(&d) = stage_deg.get(&g.stage) {
                if d != g.degree {
                    return false;
                }
            }
            stage_deg.insert(g.stage, g.degree);
        }
        stage_deg.values().zip(stage_deg.values().skip(1)).all(|(a, b)| a <= b)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let op = &self.operad.arities[m.arity].labels[m.op];
        let args: Vec<&str> = m.slots.iter().map(|&s| self.generators[s].label.as_str()).collect();
        match m.arity {
            0 => "1".to_string(),
            1 => args[0].to_string(),
            _ => format!("{op}[{}]", args.join(",")),
        }
    }

    pub fn format_element(&self, x: &FreeElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in x.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                s.push_str(&format!("{a}*"));
            }
            s.push_str(&self.format_monomial(m));
        }
        s
    }
}
