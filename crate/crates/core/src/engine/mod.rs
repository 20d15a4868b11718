//! Step-by-step minimal models.
//!
//! Both conventions run the same loop: at each degree `n` the classes of
//! `H^n(C(f))` are attached as new generators `v` with `dv = m` and
//! `f(v) = a`, where `(m, a)` represents a class of the cone. In cochain
//! convention this kills the kernel of `H^{n+1} f` and the cokernel of
//! `H^n f`; in chain convention the same cone degree holds the kernel of
//! `H_{n-1} f` and the cokernel of `H_n f`.

mod report;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::Convention;
use crate::error::{Error, Result};
use crate::free::{FreeAlgebra, Generator};
use crate::linalg::{axpy, Rat, SparseVec};
use crate::operad::tameness_index;
use crate::palgebra::{
    algebra_cohomology, check_connected, cone_cohomology, extend_morphism, is_quasi_iso, Algebra, Elem, FreeMorphism,
    QuasiIsoCertificate,
};

pub use report::render_report;

/// How representatives are chosen whenever a section is needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SectionMode {
    /// Pivot-based representatives, reproducible.
    Canonical,
    /// Canonical representatives mixed by a seeded unipotent change of basis
    /// and shifted by random coboundaries.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineOptions {
    pub section: SectionMode,
    /// Extensions allowed per degree before giving up on that degree.
    pub iteration_cap: usize,
    pub arity_cap: Option<usize>,
    /// Skip the final quasi-isomorphism certificate.
    pub skip_certificate: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            section: SectionMode::Canonical,
            iteration_cap: 32,
            arity_cap: None,
            skip_certificate: false,
        }
    }
}

/// One KS-extension: the generators attached at `(degree, step)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub degree: i64,
    pub step: usize,
    /// Indices into the model's generators.
    pub generators: Vec<usize>,
}

/// What happened in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeLog {
    pub degree: i64,
    /// Cone cohomology dimension before each step; the last entry is 0 unless capped.
    pub cone_dims: Vec<usize>,
    /// KS-extensions performed (the first step counts even when nothing is attached).
    pub extensions: usize,
    pub capped: bool,
}

#[derive(Debug, Clone)]
pub struct MinimalModel {
    pub model: Arc<FreeAlgebra>,
    pub map: FreeMorphism,
    pub r: usize,
    pub truncation: i64,
    pub stages: Vec<Stage>,
    pub log: Vec<DegreeLog>,
    /// Degrees where the iteration cap fired; the model is partial there.
    pub non_terminated: Vec<i64>,
    /// The arity cap truncated some free algebra degree.
    pub arity_capped: bool,
    pub certificate: Option<QuasiIsoCertificate>,
}

impl MinimalModel {
    pub fn convention(&self) -> Convention {
        self.model.convention()
    }

    /// Number of generators in each degree.
    pub fn generator_dims(&self) -> std::collections::BTreeMap<i64, usize> {
        let mut out = std::collections::BTreeMap::new();
        for g in self.model.generators() {
            *out.entry(g.degree).or_insert(0) += 1;
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.non_terminated.is_empty()
    }

    /// Stages are ordered by non-decreasing degree and every differential
    /// lands in strictly earlier stages.
    pub fn check_stage_order(&self) -> bool {
        self.stages.windows(2).all(|w| w[0].degree <= w[1].degree) && self.model.is_sullivan()
    }
}

fn check_preconditions(a: &dyn Algebra, r: usize, n: i64) -> Result<()> {
    let p = a.operad();
    let t = tameness_index(p, r);
    if t.index.is_none() {
        return Err(Error::Precondition(format!("{} is not {r}-tame within arity {}", p.name, p.arity_bound)));
    }
    if let Some(hi) = a.highest_degree() {
        if hi < n + 1 {
            return Err(Error::Precondition(format!(
                "target is defined through degree {hi}, truncation {n} needs {}",
                n + 1
            )));
        }
    }
    let c = check_connected(a, r)?;
    if !c.connected {
        return Err(Error::Precondition(format!(
            "target is not {r}-connected: {}",
            c.reason.unwrap_or_default()
        )));
    }
    Ok(())
}

struct Section {
    rng: Option<ChaCha8Rng>,
}

impl Section {
    fn new(mode: SectionMode) -> Self {
        let rng = match mode {
            SectionMode::Canonical => None,
            SectionMode::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Section { rng }
    }

    /// Representatives for a basis of `Z / B`.
    fn pick(&mut self, reps: &[SparseVec], boundaries: &[SparseVec]) -> Vec<SparseVec> {
        let Some(rng) = self.rng.as_mut() else {
            return reps.to_vec();
        };
        let mut out: Vec<SparseVec> = Vec::with_capacity(reps.len());
        for (i, v) in reps.iter().enumerate() {
            let mut w = v.clone();
            for u in &reps[i + 1..] {
                let c = rng.gen_range(-2i64..=2);
                if c != 0 {
                    axpy(&mut w, &Rat::from_int(c), u);
                }
            }
            for b in boundaries {
                let c = rng.gen_range(-2i64..=2);
                if c != 0 {
                    axpy(&mut w, &Rat::from_int(c), b);
                }
            }
            out.push(w);
        }
        out
    }
}

fn label_for(model: &FreeAlgebra, degree: i64, k: usize) -> String {
    let mut j = k;
    loop {
        let l = format!("v{degree}_{j}");
        if model.find_generator(&l).is_none() {
            return l;
        }
        j += 1;
    }
}

/// Attaches generators for every class of `H^n(C(f))`; returns the cone dimension.
fn attach(
    model: &mut Arc<FreeAlgebra>,
    map: &mut FreeMorphism,
    target: &Arc<dyn Algebra>,
    n: i64,
    section: &mut Section,
    stages: &mut Vec<Stage>,
    step: usize,
) -> Result<usize> {
    let delta = model.convention().delta();
    let h = cone_cohomology(map, n)?;
    if h.dimension == 0 {
        return Ok(0);
    }
    let split = model.dim(n + delta)?;
    let reps = section.pick(&h.representatives, h.coboundaries.vectors());
    let mut new = Vec::new();
    let mut images = map.images.clone();
    let first = model.generators().len();
    let count = model.generators().iter().filter(|g| g.degree == n).count();
    for (j, rep) in reps.iter().enumerate() {
        let mut m = SparseVec::new();
        let mut a = SparseVec::new();
        for (&i, c) in rep {
            if i < split {
                m.insert(i, c.clone());
            } else {
                a.insert(i - split, c.clone());
            }
        }
        let dv = model.from_coords(n + delta, &m)?;
        new.push((label_for(model, n, count + j), dv));
        images.push(Elem::new(n, a));
    }
    let next = Arc::new(model.ks_extend(new, n)?);
    *map = extend_morphism(next.clone(), target.clone(), images)?;
    *model = next;
    stages.push(Stage {
        degree: n,
        step,
        generators: (first..model.generators().len()).collect(),
    });
    Ok(h.dimension)
}

/// Condition at degree `n`: the cone has no cohomology in degrees `n - 1` and `n`
/// (with `n - 1` skipped below the start).
fn check_stage_condition(map: &FreeMorphism, n: i64, start: i64) -> Result<()> {
    for k in (n - 1).max(start - 1)..=n {
        let h = cone_cohomology(map, k)?;
        if h.dimension != 0 {
            return Err(Error::Precondition(format!(
                "cone of the model map has cohomology of dimension {} in degree {k} after degree {n}",
                h.dimension
            )));
        }
    }
    Ok(())
}

fn run(a: Arc<dyn Algebra>, r: usize, n_max: i64, opts: &EngineOptions, conv: Convention) -> Result<MinimalModel> {
    if a.convention() != conv {
        return Err(Error::ConventionMismatch(format!(
            "engine expects {} convention, target is {}",
            conv.name(),
            a.convention().name()
        )));
    }
    check_preconditions(&*a, r, n_max)?;
    let p = a.operad().clone();
    let empty: Vec<Generator> = Vec::new();
    let mut model = Arc::new(FreeAlgebra::new(p, empty)?.with_arity_cap(opts.arity_cap));
    let mut map = extend_morphism(model.clone(), a.clone(), Vec::new())?;
    let mut section = Section::new(opts.section);
    let mut stages = Vec::new();
    let mut log = Vec::new();
    let mut non_terminated = Vec::new();
    let start = r as i64 + 1;
    for n in start..=n_max {
        let mut entry = DegreeLog {
            degree: n,
            cone_dims: Vec::new(),
            extensions: 0,
            capped: false,
        };
        loop {
            if entry.extensions >= opts.iteration_cap {
                let left = cone_cohomology(&map, n)?.dimension;
                entry.cone_dims.push(left);
                entry.capped = left != 0;
                break;
            }
            let dim = attach(&mut model, &mut map, &a, n, &mut section, &mut stages, entry.extensions)?;
            entry.cone_dims.push(dim);
            if dim == 0 {
                if entry.extensions == 0 {
                    entry.extensions = 1;
                }
                break;
            }
            entry.extensions += 1;
        }
        if entry.capped {
            non_terminated.push(n);
        } else if non_terminated.is_empty() {
            check_stage_condition(&map, n, start)?;
        }
        log.push(entry);
    }
    let arity_capped = model.cap_in_force() && {
        let mut capped = false;
        for k in start..=n_max + 2 {
            if model.required_arity(k).map(|(_, c)| c).unwrap_or(false) {
                capped = true;
            }
        }
        capped
    };
    let certificate = if opts.skip_certificate {
        None
    } else {
        Some(is_quasi_iso(&map, n_max)?)
    };
    let mm = MinimalModel {
        model,
        map,
        r,
        truncation: n_max,
        stages,
        log,
        non_terminated,
        arity_capped,
        certificate,
    };
    debug_assert!(mm.check_stage_order());
    Ok(mm)
}

/// Minimal model of an `r`-connected algebra in cochain convention, through degree `n`.
pub fn minimal_model_cochain(a: Arc<dyn Algebra>, r: usize, n: i64, opts: &EngineOptions) -> Result<MinimalModel> {
    run(a, r, n, opts, Convention::Cochain)
}

/// Minimal model in chain convention, through degree `n`.
pub fn minimal_model_chain(a: Arc<dyn Algebra>, r: usize, n: i64, opts: &EngineOptions) -> Result<MinimalModel> {
    run(a, r, n, opts, Convention::Chain)
}

/// Either convention, picked from the target.
pub fn minimal_model(a: Arc<dyn Algebra>, r: usize, n: i64, opts: &EngineOptions) -> Result<MinimalModel> {
    let conv = a.convention();
    run(a, r, n, opts, conv)
}

/// Outcome of testing whether the homology is free on a proposed set of generators.
#[derive(Debug, Clone)]
pub enum FreeHomologyOutcome {
    Model(Box<MinimalModel>),
    /// The map from the free algebra fails to be a quasi-isomorphism; `degree`
    /// is the first degree where it is not an isomorphism on cohomology.
    Refuted { degree: i64, certificate: QuasiIsoCertificate },
}

/// Builds `P<V> -> A` sending each generator to a cocycle and certifies it.
///
/// Generators of one degree take the canonical cohomology representatives
/// of that degree in order unless explicit cocycles are given.
pub fn model_from_free_homology(
    a: Arc<dyn Algebra>,
    generators: &[(String, i64)],
    cocycles: Option<Vec<Elem>>,
    n: i64,
    opts: &EngineOptions,
) -> Result<FreeHomologyOutcome> {
    let p = a.operad().clone();
    let gens: Vec<Generator> = generators.iter().map(|(l, d)| Generator::new(l.clone(), *d, 0)).collect();
    let model = Arc::new(FreeAlgebra::new(p, gens)?.with_arity_cap(opts.arity_cap));
    let images = match cocycles {
        Some(c) => {
            if c.len() != generators.len() {
                return Err(Error::Precondition("one cocycle per generator required".into()));
            }
            for (e, (l, _)) in c.iter().zip(generators) {
                if !a.differential(e.degree)?.mul_vec(&e.coords).is_empty() {
                    return Err(Error::NotCocycle(format!("image of {l}")));
                }
            }
            c
        }
        None => {
            let mut used: std::collections::BTreeMap<i64, usize> = Default::default();
            let mut out = Vec::new();
            for (l, d) in generators {
                let h = algebra_cohomology(&*a, *d)?;
                let j = used.entry(*d).or_insert(0);
                let Some(v) = h.representatives.get(*j) else {
                    return Err(Error::NoSolution(format!(
                        "no cohomology class left in degree {d} for {l}"
                    )));
                };
                *j += 1;
                out.push(Elem::new(*d, v.clone()));
            }
            out
        }
    };
    let map = extend_morphism(model.clone(), a, images)?;
    let cert = is_quasi_iso(&map, n)?;
    if !cert.is_quasi_iso {
        let degree = cert
            .cohomology
            .iter()
            .find(|c| c.1 != c.3 || c.2 != c.3)
            .map(|c| c.0)
            .or(cert.first_failure)
            .unwrap();
        return Ok(FreeHomologyOutcome::Refuted { degree, certificate: cert });
    }
    let stages = if generators.is_empty() {
        Vec::new()
    } else {
        vec![Stage {
            degree: generators.iter().map(|g| g.1).min().unwrap(),
            step: 0,
            generators: (0..generators.len()).collect(),
        }]
    };
    Ok(FreeHomologyOutcome::Model(Box::new(MinimalModel {
        model,
        map,
        r: 0,
        truncation: n,
        stages,
        log: Vec::new(),
        non_terminated: Vec::new(),
        arity_capped: false,
        certificate: Some(cert),
    })))
}
