use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{unit_vec, Rat, RatMatrix, SparseVec};

use super::table::{OperadTable, Unitality};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Shape,
    Connected,
    Unit,
    Involution,
    Braid,
    Degree,
    AssociativitySequential,
    AssociativityParallel,
    Equivariance,
    Derivation,
    DifferentialSquare,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Shape => "shape",
            Axiom::Connected => "connected",
            Axiom::Unit => "unit",
            Axiom::Involution => "involution",
            Axiom::Braid => "braid",
            Axiom::Degree => "degree",
            Axiom::AssociativitySequential => "associativity (sequential)",
            Axiom::AssociativityParallel => "associativity (parallel)",
            Axiom::Equivariance => "equivariance",
            Axiom::Derivation => "derivation",
            Axiom::DifferentialSquare => "d^2 = 0",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: usize,
    pub violation_count: usize,
    /// At most `MAX_RECORDED` violations are kept verbatim.
    pub violations: Vec<Violation>,
}

const MAX_RECORDED: usize = 64;

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violation_count == 0
    }

    fn check(&mut self, ok: bool, axiom: Axiom, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(Violation {
                    axiom,
                    witness: witness(),
                });
            }
        }
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

fn transposition(n: usize, i: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).collect();
    s.swap(i, i + 1);
    s
}

/// The permutation of `λ ∘_i μ` induced by `σ` acting on `λ` (block of size `n` at `i`).
fn outer_block(sigma: &[usize], i: usize, n: usize) -> Vec<usize> {
    let m = sigma.len();
    let si = sigma[i];
    let place = |x: usize| {
        let s = sigma[x];
        if s < si {
            s
        } else {
            s + n - 1
        }
    };
    let mut out = Vec::with_capacity(m + n - 1);
    for x in 0..i {
        out.push(place(x));
    }
    for k in 0..n {
        out.push(si + k);
    }
    for x in i + 1..m {
        out.push(place(x));
    }
    out
}

/// The permutation of `λ ∘_i μ` induced by `τ` acting on `μ`.
fn inner_block(m: usize, i: usize, tau: &[usize]) -> Vec<usize> {
    let n = tau.len();
    let mut out: Vec<usize> = (0..m + n - 1).collect();
    for k in 0..n {
        out[i + k] = i + tau[k];
    }
    out
}

fn parity_sign(v: &SparseVec, parity: i64) -> SparseVec {
    if parity.rem_euclid(2) == 1 {
        crate::linalg::scale(v, &-Rat::one())
    } else {
        v.clone()
    }
}

fn sub(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = a.clone();
    crate::linalg::axpy(&mut out, &-Rat::one(), b);
    out
}

/// Exhaustive check of the operad axioms within the arity bound.
pub fn validate(p: &OperadTable) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let bound = p.arity_bound;
    let delta = p.convention.delta();

    // shapes
    rep.check(p.arities.len() == bound + 1, Axiom::Shape, || {
        format!("{} arity tables for bound {bound}", p.arities.len())
    });
    if !rep.is_ok() {
        return rep;
    }
    for (n, a) in p.arities.iter().enumerate() {
        let d = a.dim();
        rep.check(a.degrees.len() == d, Axiom::Shape, || format!("degrees of arity {n}"));
        rep.check(a.transpositions.len() == n.saturating_sub(1), Axiom::Shape, || {
            format!("transposition count in arity {n}")
        });
        for (i, t) in a.transpositions.iter().enumerate() {
            rep.check((t.rows(), t.cols()) == (d, d), Axiom::Shape, || {
                format!("transposition s_{i} in arity {n}")
            });
        }
        rep.check(
            (a.differential.rows(), a.differential.cols()) == (d, d),
            Axiom::Shape,
            || format!("differential in arity {n}"),
        );
    }
    for m in 1..=bound {
        let lo = if p.unitality == Unitality::Unitary { 0 } else { 1 };
        for n in lo..=bound + 1 - m {
            let want = m * p.arities[m].dim() * p.arities[n].dim();
            let got = p.comps.get(&(m, n)).map(|t| t.len());
            rep.check(got == Some(want) || (want == 0 && got.is_none()), Axiom::Shape, || {
                format!("composition table P({m}) o P({n}) has {got:?} entries, expected {want}")
            });
        }
    }
    if !rep.is_ok() {
        return rep;
    }

    // connectedness
    let p1 = &p.arities[1];
    rep.check(p1.dim() == 1 && p1.degrees[0] == 0, Axiom::Connected, || {
        "P(1) must be spanned by id in degree 0".into()
    });
    let p0_ok = match p.unitality {
        Unitality::Unitary => p.arities[0].dim() == 1 && p.arities[0].degrees[0] == 0,
        Unitality::Reduced => p.arities[0].dim() == 0,
    };
    rep.check(p0_ok, Axiom::Connected, || format!("P(0) does not match {:?}", p.unitality));
    if !rep.is_ok() {
        return rep;
    }

    // transpositions: degree, involution, braid, commuting
    for n in 2..=bound {
        let a = &p.arities[n];
        let d = a.dim();
        let id = RatMatrix::identity(d);
        for i in 0..n - 1 {
            let t = &a.transpositions[i];
            for (r, c, _) in t.entries() {
                rep.check(a.degrees[r] == a.degrees[c], Axiom::Degree, || {
                    format!("s_{i} mixes degrees in arity {n}")
                });
            }
            rep.check(t.mul(t) == id, Axiom::Involution, || format!("s_{i}^2 != 1 in arity {n}"));
            for j in i + 1..n - 1 {
                let u = &a.transpositions[j];
                let ok = if j == i + 1 {
                    t.mul(u).mul(t) == u.mul(t).mul(u)
                } else {
                    t.mul(u) == u.mul(t)
                };
                rep.check(ok, Axiom::Braid, || format!("s_{i}, s_{j} in arity {n}"));
            }
        }
    }

    let label = |n: usize, a: usize| p.arities[n].labels[a].clone();
    let deg = |n: usize, a: usize| p.arities[n].degrees[a];

    // degrees and units
    for m in 1..=bound {
        for n in 0..=bound + 1 - m {
            for i in 0..m {
                for a in 0..p.arities[m].dim() {
                    for b in 0..p.arities[n].dim() {
                        let e = p.compose_basis(m, i, a, n, b).unwrap();
                        let want = deg(m, a) + deg(n, b);
                        let ok = e.keys().all(|&c| deg(m + n - 1, c) == want);
                        rep.check(ok, Axiom::Degree, || {
                            format!("{} o_{i} {} not of degree {want}", label(m, a), label(n, b))
                        });
                    }
                }
            }
        }
    }
    for n in 0..=bound {
        for b in 0..p.arities[n].dim() {
            let e = unit_vec(b);
            let left = p.compose_basis(1, 0, 0, n, b).unwrap();
            rep.check(*left == e, Axiom::Unit, || format!("id o_0 {} != {}", label(n, b), label(n, b)));
            if n >= 1 {
                for i in 0..n {
                    let right = p.compose_basis(n, i, b, 1, 0).unwrap();
                    rep.check(*right == e, Axiom::Unit, || {
                        format!("{} o_{i} id != {}", label(n, b), label(n, b))
                    });
                }
            }
        }
    }

    // associativity
    let arity_lo = if p.unitality == Unitality::Unitary { 0 } else { 1 };
    for m in 1..=bound {
        for n in arity_lo..=bound + 1 - m {
            for k in arity_lo..=(bound + 2).saturating_sub(m + n).min(bound) {
                if m + n + k < 2 || m + n + k - 2 > bound {
                    continue;
                }
                check_assoc(p, &mut rep, m, n, k);
            }
        }
    }

    // equivariance on adjacent transpositions
    for m in 1..=bound {
        for n in arity_lo..=bound + 1 - m {
            for i in 0..m {
                for a in 0..p.arities[m].dim() {
                    for b in 0..p.arities[n].dim() {
                        let base = p.compose_basis(m, i, a, n, b).unwrap().clone();
                        for j in 0..m.saturating_sub(1) {
                            let s = transposition(m, j);
                            let sa = p.act_basis(m, &s, a);
                            let lhs = p.compose(m, s[i], &sa, n, &unit_vec(b)).unwrap();
                            let rhs = p.act(m + n - 1, &outer_block(&s, i, n), &base);
                            rep.check(lhs == rhs, Axiom::Equivariance, || {
                                format!("(s_{j} {}) o_{} {}", label(m, a), s[i], label(n, b))
                            });
                        }
                        for j in 0..n.saturating_sub(1) {
                            let s = transposition(n, j);
                            let sb = p.act_basis(n, &s, b);
                            let lhs = p.compose(m, i, &unit_vec(a), n, &sb).unwrap();
                            let rhs = p.act(m + n - 1, &inner_block(m, i, &s), &base);
                            rep.check(lhs == rhs, Axiom::Equivariance, || {
                                format!("{} o_{i} (s_{j} {})", label(m, a), label(n, b))
                            });
                        }
                    }
                }
            }
        }
    }

    // differential
    for n in 0..=bound {
        let a = &p.arities[n];
        let d = &a.differential;
        rep.check(d.mul(d).is_zero(), Axiom::DifferentialSquare, || format!("arity {n}"));
        for (r, c, _) in d.entries() {
            rep.check(a.degrees[r] == a.degrees[c] + delta, Axiom::Degree, || {
                format!("differential of {} has wrong degree", a.labels[c])
            });
        }
        for (i, t) in a.transpositions.iter().enumerate() {
            rep.check(t.mul(d) == d.mul(t), Axiom::Equivariance, || {
                format!("d does not commute with s_{i} in arity {n}")
            });
        }
    }
    if !p.has_zero_differential() {
        for m in 1..=bound {
            for n in arity_lo..=bound + 1 - m {
                for i in 0..m {
                    for a in 0..p.arities[m].dim() {
                        for b in 0..p.arities[n].dim() {
                            let (x, y) = (unit_vec(a), unit_vec(b));
                            let lhs = p.differential(m + n - 1, p.compose_basis(m, i, a, n, b).unwrap());
                            let t1 = p.compose(m, i, &p.differential(m, &x), n, &y).unwrap();
                            let t2 = p.compose(m, i, &x, n, &p.differential(n, &y)).unwrap();
                            let mut rhs = t1;
                            crate::linalg::axpy(&mut rhs, &Rat::sign(deg(m, a).rem_euclid(2) == 1), &t2);
                            rep.check(lhs == rhs, Axiom::Derivation, || {
                                format!("d({} o_{i} {})", label(m, a), label(n, b))
                            });
                        }
                    }
                }
            }
        }
    }
    rep
}

fn check_assoc(p: &OperadTable, rep: &mut ValidationReport, m: usize, n: usize, k: usize) {
    let label = |ar: usize, a: usize| p.arities[ar].labels[a].clone();
    let deg = |ar: usize, a: usize| p.arities[ar].degrees[a];
    for a in 0..p.arities[m].dim() {
        for b in 0..p.arities[n].dim() {
            for c in 0..p.arities[k].dim() {
                let (x, y, z) = (unit_vec(a), unit_vec(b), unit_vec(c));
                for i in 0..m {
                    let Ok(xy) = p.compose(m, i, &x, n, &y) else { continue };
                    // sequential: (x o_i y) o_{i+j} z = x o_i (y o_j z)
                    for j in 0..n {
                        let (Ok(lhs), Ok(yz)) = (p.compose(m + n - 1, i + j, &xy, k, &z), p.compose(n, j, &y, k, &z))
                        else {
                            continue;
                        };
                        let Ok(rhs) = p.compose(m, i, &x, n + k - 1, &yz) else { continue };
                        rep.check(lhs == rhs, Axiom::AssociativitySequential, || {
                            format!(
                                "({} o_{i} {}) o_{} {} != {} o_{i} ({} o_{j} {}); diff {:?}",
                                label(m, a),
                                label(n, b),
                                i + j,
                                label(k, c),
                                label(m, a),
                                label(n, b),
                                label(k, c),
                                sub(&lhs, &rhs)
                            )
                        });
                    }
                    // parallel: (x o_i y) o_{l+n-1} z = ± (x o_l z) o_i y for i < l
                    for l in i + 1..m {
                        let (Ok(lhs), Ok(xz)) = (p.compose(m + n - 1, l + n - 1, &xy, k, &z), p.compose(m, l, &x, k, &z))
                        else {
                            continue;
                        };
                        let Ok(rhs) = p.compose(m + k - 1, i, &xz, n, &y) else { continue };
                        let rhs = parity_sign(&rhs, deg(n, b) * deg(k, c));
                        rep.check(lhs == rhs, Axiom::AssociativityParallel, || {
                            format!(
                                "({} o_{i} {}) o_{} {} != ±({} o_{l} {}) o_{i} {}",
                                label(m, a),
                                label(n, b),
                                l + n - 1,
                                label(k, c),
                                label(m, a),
                                label(k, c),
                                label(n, b)
                            )
                        });
                    }
                }
            }
        }
    }
}
