use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use sullivan_core::engine::{EngineOptions, MinimalModel, SectionMode};
use sullivan_core::homotopy::CompareOptions;
use sullivan_core::io::{self, AlgebraDoc, ModelDoc, MorphismDoc};
use sullivan_core::operad::{builtin, OperadTable};
use sullivan_core::palgebra::{Algebra, FreeMorphism};
use sullivan_core::Convention;

/// Settings shared by the subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub truncation: Option<i64>,
    pub r: Option<usize>,
    pub section: SectionMode,
    pub iteration_cap: usize,
    pub arity_cap: Option<usize>,
    pub t_ceiling: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let e = EngineOptions::default();
        RunConfig {
            truncation: None,
            r: None,
            section: e.section,
            iteration_cap: e.iteration_cap,
            arity_cap: e.arity_cap,
            t_ceiling: CompareOptions::default().t_ceiling,
        }
    }
}

impl RunConfig {
    pub fn engine_options(&self) -> EngineOptions {
        EngineOptions {
            section: self.section,
            iteration_cap: self.iteration_cap,
            arity_cap: self.arity_cap,
            ..Default::default()
        }
    }
}

/// Objects loaded during one invocation. All of them share one convention.
#[derive(Debug, Default)]
pub struct Workspace {
    pub dir: Option<PathBuf>,
    pub config: RunConfig,
    convention: Option<Convention>,
    pub operads: BTreeMap<String, Arc<OperadTable>>,
    pub algebras: BTreeMap<String, (AlgebraDoc, Arc<dyn Algebra>)>,
    pub models: BTreeMap<String, MinimalModel>,
}

impl Workspace {
    pub fn new(dir: Option<PathBuf>, config: RunConfig) -> Self {
        Workspace { dir, config, ..Default::default() }
    }

    /// Relative paths resolve against the workspace directory.
    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.dir {
            Some(d) if p.is_relative() => d.join(p),
            _ => p.to_path_buf(),
        }
    }

    fn read(&self, p: &Path) -> Result<String> {
        let path = self.resolve(p);
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))
    }

    pub fn write(&self, p: &Path, contents: &str) -> Result<PathBuf> {
        let path = self.resolve(p);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    /// Pins the invocation's convention, or checks against the pinned one.
    pub fn register_convention(&mut self, c: Convention, what: &str) -> Result<()> {
        match self.convention {
            Some(k) if k != c => bail!(
                "convention mismatch: {what} is {} but this invocation uses {}",
                c.name(),
                k.name()
            ),
            _ => {
                self.convention = Some(c);
                Ok(())
            }
        }
    }

    /// An operad from a JSON file, or a built-in name (`Com`, `Ass`, `Lie`,
    /// `Ger`) with the given convention and arity bound.
    pub fn operad(&mut self, spec: &str, convention: Option<Convention>, bound: usize) -> Result<Arc<OperadTable>> {
        let p = if ["Com", "Ass", "Lie", "Ger"].contains(&spec) {
            let Some(c) = convention.or(self.convention) else {
                bail!("built-in operad `{spec}` needs --convention");
            };
            builtin(spec, c, bound)?
        } else {
            let text = self.read(Path::new(spec))?;
            io::load_operad(&text)?
        };
        self.register_convention(p.convention, &format!("operad {spec}"))?;
        self.operads.insert(spec.to_string(), p.clone());
        Ok(p)
    }

    pub fn algebra(&mut self, path: &Path) -> Result<Arc<dyn Algebra>> {
        let key = path.display().to_string();
        if let Some((_, a)) = self.algebras.get(&key) {
            return Ok(a.clone());
        }
        let doc: AlgebraDoc = io::from_json(&self.read(path)?)?;
        self.register_convention(doc.convention(), &format!("algebra {key}"))?;
        let a = doc.to_algebra()?;
        self.algebras.insert(key, (doc, a.clone()));
        Ok(a)
    }

    /// Loads a model. Models whose targets are equal documents share one
    /// target object, so they can be compared.
    pub fn model(&mut self, path: &Path) -> Result<MinimalModel> {
        let key = path.display().to_string();
        let doc: ModelDoc = io::from_json(&self.read(path)?)?;
        self.register_convention(doc.convention, &format!("model {key}"))?;
        let shared = self.algebras.values().find(|(d, _)| *d == doc.target).map(|(_, a)| a.clone());
        let target = match shared {
            Some(a) => a,
            None => {
                let a = doc.target.to_algebra()?;
                self.algebras.insert(format!("{key}#target"), (doc.target.clone(), a.clone()));
                a
            }
        };
        let m = doc.to_model(Some(target))?;
        self.models.insert(key, m.clone());
        Ok(m)
    }

    pub fn morphism(&mut self, path: &Path) -> Result<FreeMorphism> {
        let key = path.display().to_string();
        let doc: MorphismDoc = io::from_json(&self.read(path)?)?;
        self.register_convention(doc.convention, &format!("morphism {key}"))?;
        Ok(doc.to_morphism()?)
    }
}
