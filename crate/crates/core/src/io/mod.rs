//! JSON documents for operads, algebras, morphisms, models, homotopies and
//! comparisons. Every document carries `schema_version` and `kind`;
//! documents holding algebra data also carry `convention`. Rationals are
//! `"p/q"` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::complex::{ChainComplex, Convention, GradedSpace};
use crate::engine::{DegreeLog, MinimalModel, Stage};
use crate::error::{Error, Result};
use crate::free::{FreeAlgebra, FreeElement, Generator};
use crate::homotopy::{Comparison, Homotopy, PathAlgebra, PathElement};
use crate::linalg::{unit_vec, Rat, RatMatrix, SparseVec};
use crate::operad::tree::Tree;
use crate::operad::{builtin, ArityTable, DegreeFloor, OperadTable, Presentation, Unitality};
use crate::palgebra::{extend_morphism, Algebra, BinaryTable, Elem, FreeMorphism, QuasiIsoCertificate, TabularAlgebra, ThetaKey};

pub const SCHEMA_VERSION: u32 = 1;

/// Parses `json` as `T`, reporting the JSON path of the first error.
pub fn from_json<T: DeserializeOwned>(json: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(json);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema(format!("at `{path}`: {}", e.into_inner()))
    })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn check_header(version: u32, kind: &str, want: &str) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(Error::Schema(format!("unsupported schema_version {version}")));
    }
    if kind != want {
        return Err(Error::Schema(format!("expected kind `{want}`, found `{kind}`")));
    }
    Ok(())
}

fn check_convention(declared: Convention, found: Convention, what: &str) -> Result<()> {
    if declared != found {
        return Err(Error::ConventionMismatch(format!(
            "document declares {} but {what} is {}",
            declared.name(),
            found.name()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- operads

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeDoc {
    Leaf(usize),
    Node(usize, Box<TreeDoc>, Box<TreeDoc>),
}

impl From<&Tree> for TreeDoc {
    fn from(t: &Tree) -> Self {
        match t {
            Tree::Leaf(x) => TreeDoc::Leaf(*x),
            Tree::Node(g, l, r) => TreeDoc::Node(*g, Box::new((&**l).into()), Box::new((&**r).into())),
        }
    }
}

impl From<&TreeDoc> for Tree {
    fn from(t: &TreeDoc) -> Self {
        match t {
            TreeDoc::Leaf(x) => Tree::Leaf(*x),
            TreeDoc::Node(g, l, r) => Tree::node(*g, (&**l).into(), (&**r).into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArityDoc {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub transpositions: Vec<RatMatrix>,
    pub differential: RatMatrix,
}

/// Nonzero `e_a ∘_i e_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompEntry {
    pub i: usize,
    pub a: usize,
    pub b: usize,
    pub value: SparseVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompDoc {
    pub outer: usize,
    pub inner: usize,
    pub entries: Vec<CompEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub generators: Vec<usize>,
    pub trees: Vec<Vec<Option<TreeDoc>>>,
}

/// Either `builtin` (with `arity_bound`) or the full tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadDoc {
    pub schema_version: u32,
    pub kind: String,
    pub name: String,
    pub convention: Convention,
    pub arity_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitality: Option<Unitality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_floor: Option<DegreeFloor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arities: Option<Vec<ArityDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compositions: Option<Vec<CompDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationDoc>,
}

impl OperadDoc {
    pub fn builtin(name: &str, convention: Convention, arity_bound: usize) -> Self {
        OperadDoc {
            schema_version: SCHEMA_VERSION,
            kind: "operad".into(),
            name: name.into(),
            convention,
            arity_bound,
            builtin: Some(name.into()),
            unitality: None,
            degree_floor: None,
            arities: None,
            compositions: None,
            presentation: None,
        }
    }

    pub fn from_table(p: &OperadTable) -> Self {
        let arities = p
            .arities
            .iter()
            .map(|a| ArityDoc {
                labels: a.labels.clone(),
                degrees: a.degrees.clone(),
                transpositions: a.transpositions.clone(),
                differential: a.differential.clone(),
            })
            .collect();
        let compositions = p
            .comps
            .iter()
            .map(|(&(m, n), table)| {
                let (dm, dn) = (p.arities[m].dim(), p.arities[n].dim());
                let entries = table
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_empty())
                    .map(|(k, v)| CompEntry { i: k / (dm * dn), a: (k / dn) % dm, b: k % dn, value: v.clone() })
                    .collect();
                CompDoc { outer: m, inner: n, entries }
            })
            .collect();
        let presentation = p.presentation.as_ref().map(|pr| PresentationDoc {
            generators: pr.generators.clone(),
            trees: pr.trees.iter().map(|ts| ts.iter().map(|t| t.as_ref().map(TreeDoc::from)).collect()).collect(),
        });
        OperadDoc {
            schema_version: SCHEMA_VERSION,
            kind: "operad".into(),
            name: p.name.clone(),
            convention: p.convention,
            arity_bound: p.arity_bound,
            builtin: None,
            unitality: Some(p.unitality),
            degree_floor: p.degree_floor,
            arities: Some(arities),
            compositions: Some(compositions),
            presentation,
        }
    }

    /// Builds the table. Shapes are checked; operad axioms are not (see
    /// `operad::validate`).
    pub fn to_table(&self) -> Result<Arc<OperadTable>> {
        check_header(self.schema_version, &self.kind, "operad")?;
        if let Some(b) = &self.builtin {
            let p = builtin(b, self.convention, self.arity_bound)?;
            return Ok(p);
        }
        let missing = |f: &str| Error::Schema(format!("operad `{}` needs `builtin` or `{f}`", self.name));
        let arity_docs = self.arities.as_ref().ok_or_else(|| missing("arities"))?;
        if arity_docs.len() != self.arity_bound + 1 {
            return Err(Error::Schema(format!(
                "{} arity tables for arity bound {}",
                arity_docs.len(),
                self.arity_bound
            )));
        }
        let mut arities = Vec::new();
        for (n, a) in arity_docs.iter().enumerate() {
            let d = a.labels.len();
            let ok = a.degrees.len() == d
                && a.transpositions.len() == n.saturating_sub(1)
                && a.transpositions.iter().all(|t| t.rows() == d && t.cols() == d)
                && a.differential.rows() == d
                && a.differential.cols() == d;
            if !ok {
                return Err(Error::Schema(format!("arity {n}: table shapes do not match {d} labels")));
            }
            arities.push(ArityTable {
                labels: a.labels.clone(),
                degrees: a.degrees.clone(),
                transpositions: a.transpositions.clone(),
                differential: a.differential.clone(),
            });
        }
        let mut comps = BTreeMap::new();
        for c in self.compositions.as_ref().ok_or_else(|| missing("compositions"))? {
            let (m, n) = (c.outer, c.inner);
            if m > self.arity_bound || n > self.arity_bound || m == 0 {
                return Err(Error::Schema(format!("composition table ({m}, {n}) outside the arity bound")));
            }
            let (dm, dn) = (arities[m].dim(), arities[n].dim());
            let mut table = vec![SparseVec::new(); m * dm * dn];
            for e in &c.entries {
                if e.i >= m || e.a >= dm || e.b >= dn {
                    return Err(Error::Schema(format!("composition entry ({m}, {n}) index out of range")));
                }
                table[(e.i * dm + e.a) * dn + e.b] = e.value.clone();
            }
            comps.insert((m, n), table);
        }
        let presentation = self.presentation.as_ref().map(|p| Presentation {
            generators: p.generators.clone(),
            trees: p.trees.iter().map(|ts| ts.iter().map(|t| t.as_ref().map(Tree::from)).collect()).collect(),
        });
        Ok(Arc::new(OperadTable {
            name: self.name.clone(),
            convention: self.convention,
            unitality: self.unitality.ok_or_else(|| missing("unitality"))?,
            arity_bound: self.arity_bound,
            degree_floor: self.degree_floor,
            arities,
            comps,
            presentation,
        }))
    }
}

pub fn load_operad(json: &str) -> Result<Arc<OperadTable>> {
    from_json::<OperadDoc>(json)?.to_table()
}

pub fn save_operad(p: &OperadTable) -> String {
    to_json(&OperadDoc::from_table(p))
}

// ---------------------------------------------------------------- algebras

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub lo: i64,
    pub hi: i64,
    /// Basis labels per degree.
    pub basis: BTreeMap<i64, Vec<String>>,
    /// `d` from degree `k`; missing degrees are zero.
    #[serde(default)]
    pub differential: BTreeMap<i64, RatMatrix>,
}

/// Value of a binary generator on a pair of basis elements `[degree, index]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryEntry {
    pub left: (i64, usize),
    pub right: (i64, usize),
    pub value: SparseVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub arity: usize,
    pub op: usize,
    pub args: ThetaKey,
    pub value: SparseVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndefinedEntry {
    pub arity: usize,
    pub op: usize,
    pub args: ThetaKey,
}

/// A tabular algebra given either by full `tables` or by `binary` tables of
/// the operad's generators (expanded along its presentation).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabularDoc {
    pub schema_version: u32,
    pub kind: String,
    pub name: String,
    pub convention: Convention,
    pub operad: OperadDoc,
    pub complex: ComplexDoc,
    pub max_arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<SparseVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary: Option<Vec<Vec<BinaryEntry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<Vec<TableEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<UndefinedEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coef: Rat,
    pub arity: usize,
    pub op: usize,
    pub slots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub label: String,
    pub degree: i64,
    #[serde(default)]
    pub stage: usize,
    /// Differential as `coef * op(generators at slots)`.
    #[serde(default)]
    pub d: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeDoc {
    pub schema_version: u32,
    pub kind: String,
    pub convention: Convention,
    pub operad: OperadDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_cap: Option<usize>,
    pub generators: Vec<GeneratorDoc>,
}

/// Dispatches on `kind`: `tabular-algebra` or `free-algebra`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraDoc {
    TabularAlgebra(TabularDoc),
    FreeAlgebra(FreeDoc),
}

impl Serialize for AlgebraDoc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlgebraDoc::TabularAlgebra(t) => t.serialize(s),
            AlgebraDoc::FreeAlgebra(f) => f.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for AlgebraDoc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        let kind = v.get("kind").and_then(|k| k.as_str()).unwrap_or_default().to_string();
        let inner = |e: serde_path_to_error::Error<serde_json::Error>| {
            let path = e.path().to_string();
            D::Error::custom(format!("at `{path}`: {}", e.into_inner()))
        };
        match kind.as_str() {
            "tabular-algebra" => serde_path_to_error::deserialize(v).map(AlgebraDoc::TabularAlgebra).map_err(inner),
            "free-algebra" => serde_path_to_error::deserialize(v).map(AlgebraDoc::FreeAlgebra).map_err(inner),
            other => Err(D::Error::custom(format!(
                "unknown algebra kind `{other}` (expected `tabular-algebra` or `free-algebra`)"
            ))),
        }
    }
}

impl TabularDoc {
    pub fn from_algebra(a: &TabularAlgebra, operad: OperadDoc) -> Self {
        let c = &a.complex;
        TabularDoc {
            schema_version: SCHEMA_VERSION,
            kind: "tabular-algebra".into(),
            name: a.name.clone(),
            convention: c.convention,
            operad,
            complex: ComplexDoc {
                lo: c.space.lo,
                hi: c.space.hi,
                basis: c.space.basis.clone(),
                differential: c.d.iter().filter(|(_, m)| !m.is_zero()).map(|(&k, m)| (k, m.clone())).collect(),
            },
            max_arity: a.max_arity,
            unit: None,
            binary: None,
            tables: Some(
                a.entries()
                    .map(|(arity, op, args, value)| TableEntry { arity, op, args: args.clone(), value: value.clone() })
                    .collect(),
            ),
            undefined: a
                .undefined
                .iter()
                .map(|(arity, op, args)| UndefinedEntry { arity: *arity, op: *op, args: args.clone() })
                .collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<TabularAlgebra> {
        check_header(self.schema_version, &self.kind, "tabular-algebra")?;
        let operad = self.operad.to_table()?;
        check_convention(self.convention, operad.convention, "the operad")?;
        let mut space = GradedSpace::new(self.complex.lo, self.complex.hi);
        for (&k, labels) in &self.complex.basis {
            if !space.in_window(k) {
                return Err(Error::Schema(format!("basis in degree {k} outside [{}, {}]", space.lo, space.hi)));
            }
            space.set_basis(k, labels.clone());
        }
        let complex = ChainComplex::new(space, self.convention, self.complex.differential.clone())?;
        let mut a = match (&self.tables, &self.binary) {
            (Some(entries), None) => {
                if self.unit.is_some() {
                    return Err(Error::Schema("`unit` goes with `binary`; put it in `tables` as arity 0".into()));
                }
                let mut tables: BTreeMap<(usize, usize), BTreeMap<ThetaKey, SparseVec>> = BTreeMap::new();
                for n in 0..=self.max_arity.min(operad.arity_bound) {
                    for op in 0..operad.dim(n)? {
                        tables.insert((n, op), BTreeMap::new());
                    }
                }
                if operad.unit_op().is_none() {
                    tables.retain(|&(n, _), _| n > 0);
                }
                for e in entries {
                    tables.entry((e.arity, e.op)).or_default().insert(e.args.clone(), e.value.clone());
                }
                TabularAlgebra::new(&self.name, operad, complex, self.max_arity, tables)?
            }
            (None, Some(binary)) => {
                let tables = binary
                    .iter()
                    .map(|t| t.iter().map(|e| ((e.left, e.right), e.value.clone())).collect::<BinaryTable>())
                    .collect();
                TabularAlgebra::from_binary(&self.name, operad, complex, tables, self.unit.clone(), self.max_arity)?
            }
            _ => return Err(Error::Schema("exactly one of `tables` and `binary` is required".into())),
        };
        for u in &self.undefined {
            a.undefined.insert((u.arity, u.op, u.args.clone()));
        }
        Ok(a)
    }
}

impl FreeDoc {
    pub fn from_algebra(a: &FreeAlgebra, operad: OperadDoc) -> Self {
        let generators = a
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| GeneratorDoc {
                label: g.label.clone(),
                degree: g.degree,
                stage: g.stage,
                d: a.generator_differential(i)
                    .terms
                    .iter()
                    .map(|(m, c)| TermDoc { coef: c.clone(), arity: m.arity, op: m.op, slots: m.slots.clone() })
                    .collect(),
            })
            .collect();
        FreeDoc {
            schema_version: SCHEMA_VERSION,
            kind: "free-algebra".into(),
            convention: a.convention(),
            operad,
            arity_cap: a.arity_cap(),
            generators,
        }
    }

    pub fn to_algebra(&self) -> Result<FreeAlgebra> {
        check_header(self.schema_version, &self.kind, "free-algebra")?;
        let operad = self.operad.to_table()?;
        check_convention(self.convention, operad.convention, "the operad")?;
        let gens: Vec<Generator> = self.generators.iter().map(|g| Generator::new(&g.label, g.degree, g.stage)).collect();
        // normalise the given terms in a differential-free copy
        let plain = FreeAlgebra::new(operad.clone(), gens.clone())?;
        let delta = operad.convention.delta();
        let mut ds = Vec::new();
        for g in &self.generators {
            let mut x = FreeElement::zero(g.degree + delta);
            for t in &g.d {
                if t.slots.len() != t.arity || t.arity > operad.arity_bound || t.op >= operad.dim(t.arity)? {
                    return Err(Error::Schema(format!("bad term in d({})", g.label)));
                }
                if t.slots.iter().any(|&s| s >= gens.len()) {
                    return Err(Error::Schema(format!("unknown generator slot in d({})", g.label)));
                }
                plain.normalize(t.arity, &unit_vec(t.op), &t.slots, &t.coef, &mut x);
            }
            ds.push(x);
        }
        Ok(FreeAlgebra::with_differential(operad, gens, ds)?.with_arity_cap(self.arity_cap))
    }
}

impl AlgebraDoc {
    /// Serializes an algebra whose operad is described by `operad`.
    pub fn from_algebra(a: &dyn Algebra, operad: OperadDoc) -> Result<Self> {
        let any = a.as_any().ok_or_else(|| Error::Schema("this algebra type has no JSON form".into()))?;
        if let Some(t) = any.downcast_ref::<TabularAlgebra>() {
            Ok(AlgebraDoc::TabularAlgebra(TabularDoc::from_algebra(t, operad)))
        } else if let Some(f) = any.downcast_ref::<FreeAlgebra>() {
            Ok(AlgebraDoc::FreeAlgebra(FreeDoc::from_algebra(f, operad)))
        } else {
            Err(Error::Schema("this algebra type has no JSON form".into()))
        }
    }

    pub fn convention(&self) -> Convention {
        match self {
            AlgebraDoc::TabularAlgebra(t) => t.convention,
            AlgebraDoc::FreeAlgebra(f) => f.convention,
        }
    }

    pub fn operad(&self) -> &OperadDoc {
        match self {
            AlgebraDoc::TabularAlgebra(t) => &t.operad,
            AlgebraDoc::FreeAlgebra(f) => &f.operad,
        }
    }

    pub fn to_algebra(&self) -> Result<Arc<dyn Algebra>> {
        Ok(match self {
            AlgebraDoc::TabularAlgebra(t) => Arc::new(t.to_algebra()?),
            AlgebraDoc::FreeAlgebra(f) => Arc::new(f.to_algebra()?),
        })
    }
}

/// Operad document for an algebra: the built-in form when the table matches
/// a built-in, the full tables otherwise.
pub fn operad_doc(p: &OperadTable) -> OperadDoc {
    let b = OperadDoc::builtin(&p.name, p.convention, p.arity_bound);
    match b.to_table() {
        Ok(t) if *t == *p => b,
        _ => OperadDoc::from_table(p),
    }
}

pub fn load_algebra(json: &str) -> Result<Arc<dyn Algebra>> {
    from_json::<AlgebraDoc>(json)?.to_algebra()
}

pub fn save_algebra(a: &dyn Algebra) -> Result<String> {
    Ok(to_json(&AlgebraDoc::from_algebra(a, operad_doc(a.operad()))?))
}

// ------------------------------------------------- morphisms and models

fn elems(source: &FreeAlgebra, images: &[SparseVec]) -> Result<Vec<Elem>> {
    if images.len() != source.generators().len() {
        return Err(Error::Schema(format!(
            "{} images for {} generators",
            images.len(),
            source.generators().len()
        )));
    }
    Ok(source.generators().iter().zip(images).map(|(g, v)| Elem::new(g.degree, v.clone())).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub schema_version: u32,
    pub kind: String,
    pub convention: Convention,
    pub source: FreeDoc,
    pub target: AlgebraDoc,
    /// Coordinates of the image of each generator in the target's basis.
    pub images: Vec<SparseVec>,
}

impl MorphismDoc {
    pub fn from_morphism(f: &FreeMorphism) -> Result<Self> {
        Ok(MorphismDoc {
            schema_version: SCHEMA_VERSION,
            kind: "morphism".into(),
            convention: f.source.convention(),
            source: FreeDoc::from_algebra(&f.source, operad_doc(f.source.operad())),
            target: AlgebraDoc::from_algebra(&*f.target, operad_doc(f.target.operad()))?,
            images: f.images.iter().map(|e| e.coords.clone()).collect(),
        })
    }

    pub fn to_morphism(&self) -> Result<FreeMorphism> {
        check_header(self.schema_version, &self.kind, "morphism")?;
        check_convention(self.convention, self.source.convention, "the source")?;
        check_convention(self.convention, self.target.convention(), "the target")?;
        let source = Arc::new(self.source.to_algebra()?);
        let target = self.target.to_algebra()?;
        let images = elems(&source, &self.images)?;
        extend_morphism(source, target, images)
    }
}

pub fn load_morphism(json: &str) -> Result<FreeMorphism> {
    from_json::<MorphismDoc>(json)?.to_morphism()
}

pub fn save_morphism(f: &FreeMorphism) -> Result<String> {
    Ok(to_json(&MorphismDoc::from_morphism(f)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub schema_version: u32,
    pub kind: String,
    pub convention: Convention,
    pub r: usize,
    pub truncation: i64,
    pub model: FreeDoc,
    pub target: AlgebraDoc,
    pub images: Vec<SparseVec>,
    pub stages: Vec<Stage>,
    pub log: Vec<DegreeLog>,
    #[serde(default)]
    pub non_terminated: Vec<i64>,
    #[serde(default)]
    pub arity_capped: bool,
    #[serde(default)]
    pub certificate: Option<QuasiIsoCertificate>,
}

impl ModelDoc {
    pub fn from_model(m: &MinimalModel) -> Result<Self> {
        Ok(ModelDoc {
            schema_version: SCHEMA_VERSION,
            kind: "minimal-model".into(),
            convention: m.convention(),
            r: m.r,
            truncation: m.truncation,
            model: FreeDoc::from_algebra(&m.model, operad_doc(m.model.operad())),
            target: AlgebraDoc::from_algebra(&*m.map.target, operad_doc(m.map.target.operad()))?,
            images: m.map.images.iter().map(|e| e.coords.clone()).collect(),
            stages: m.stages.clone(),
            log: m.log.clone(),
            non_terminated: m.non_terminated.clone(),
            arity_capped: m.arity_capped,
            certificate: m.certificate.clone(),
        })
    }

    /// Rebuilds the model; the target is the given algebra if supplied
    /// (so that several models can share one target), otherwise the stored one.
    pub fn to_model(&self, target: Option<Arc<dyn Algebra>>) -> Result<MinimalModel> {
        check_header(self.schema_version, &self.kind, "minimal-model")?;
        check_convention(self.convention, self.model.convention, "the model")?;
        check_convention(self.convention, self.target.convention(), "the target")?;
        let model = Arc::new(self.model.to_algebra()?);
        let target = match target {
            Some(t) => t,
            None => self.target.to_algebra()?,
        };
        let images = elems(&model, &self.images)?;
        let map = extend_morphism(model.clone(), target, images)?;
        Ok(MinimalModel {
            model,
            map,
            r: self.r,
            truncation: self.truncation,
            stages: self.stages.clone(),
            log: self.log.clone(),
            non_terminated: self.non_terminated.clone(),
            arity_capped: self.arity_capped,
            certificate: self.certificate.clone(),
        })
    }
}

pub fn load_model(json: &str) -> Result<MinimalModel> {
    from_json::<ModelDoc>(json)?.to_model(None)
}

pub fn save_model(m: &MinimalModel) -> Result<String> {
    Ok(to_json(&ModelDoc::from_model(m)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyDoc {
    pub schema_version: u32,
    pub kind: String,
    pub convention: Convention,
    pub source: FreeDoc,
    /// The algebra `A` of `A[t, dt]`.
    pub base: AlgebraDoc,
    pub t_max: usize,
    pub images: Vec<PathElement>,
}

impl HomotopyDoc {
    pub fn from_homotopy(h: &Homotopy) -> Result<Self> {
        let base = &h.path.base;
        Ok(HomotopyDoc {
            schema_version: SCHEMA_VERSION,
            kind: "homotopy".into(),
            convention: base.convention(),
            source: FreeDoc::from_algebra(&h.map.source, operad_doc(h.map.source.operad())),
            base: AlgebraDoc::from_algebra(&**base, operad_doc(base.operad()))?,
            t_max: h.path.t_max,
            images: h.images()?,
        })
    }

    pub fn to_homotopy(&self) -> Result<Homotopy> {
        check_header(self.schema_version, &self.kind, "homotopy")?;
        check_convention(self.convention, self.source.convention, "the source")?;
        let source = Arc::new(self.source.to_algebra()?);
        let path = Arc::new(PathAlgebra::new(self.base.to_algebra()?, self.t_max));
        Homotopy::new(source, path, self.images.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonDoc {
    pub schema_version: u32,
    pub kind: String,
    pub convention: Convention,
    pub map: MorphismDoc,
    pub generator_matrices: BTreeMap<i64, RatMatrix>,
    pub t_max: usize,
    pub homotopy: Option<HomotopyDoc>,
    pub witness_flag: Option<String>,
}

impl ComparisonDoc {
    pub fn from_comparison(c: &Comparison) -> Result<Self> {
        Ok(ComparisonDoc {
            schema_version: SCHEMA_VERSION,
            kind: "comparison".into(),
            convention: c.map.source.convention(),
            map: MorphismDoc::from_morphism(&c.map)?,
            generator_matrices: c.generator_matrices.clone(),
            t_max: c.t_max,
            homotopy: c.homotopy.as_ref().map(HomotopyDoc::from_homotopy).transpose()?,
            witness_flag: c.witness_flag.clone(),
        })
    }
}
