use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Result};
use sullivan_core::engine::{minimal_model, render_report, SectionMode};
use sullivan_core::free::{FreeAlgebra, Generator};
use sullivan_core::homotopy::{compare_models, lift_through_surjection, CompareOptions};
use sullivan_core::io::{self, AlgebraDoc, ComparisonDoc, ModelDoc, MorphismDoc};
use sullivan_core::operad::{self, tameness_index, ValidationReport};
use sullivan_core::palgebra::{is_quasi_iso, QuasiIsoCertificate};

use crate::workspace::{RunConfig, Workspace};
use crate::{Cli, Command, Outcome, SectionArg};

pub fn run(cli: Cli) -> Result<Outcome> {
    let mut ws = Workspace::new(cli.workspace, RunConfig::default());
    match cli.command {
        Command::Validate { file } => validate(&mut ws, &file),
        Command::Tameness { operad, convention, arity_bound, cap } => {
            let p = ws.operad(&operad, convention.map(Into::into), arity_bound)?;
            let rep = tameness_index(&p, cap);
            let mut s = String::new();
            writeln!(s, "operad {} ({} convention), arity bound {}", p.name, p.convention.name(), p.arity_bound)?;
            match rep.index {
                Some(r) => writeln!(s, "r = {r}")?,
                None => writeln!(s, "not r-tame for any r <= {cap}")?,
            }
            let pairs: Vec<String> = rep.binding.iter().map(|ad| format!("(arity {}, degree {})", ad.n, ad.q)).collect();
            writeln!(s, "binding: {}", if pairs.is_empty() { "none".into() } else { pairs.join(", ") })?;
            Ok(Outcome { report: s, ok: rep.index.is_some() })
        }
        Command::FreeDims { operad, gens, max_degree, min_degree, convention, arity_bound, arity_cap } => {
            let p = ws.operad(&operad, convention.map(Into::into), arity_bound)?;
            let gens = parse_gens(&gens)?;
            let a = FreeAlgebra::new(p.clone(), gens)?.with_arity_cap(arity_cap);
            let mut s = String::new();
            writeln!(s, "free {} algebra ({} convention)", p.name, p.convention.name())?;
            for k in min_degree..=max_degree {
                writeln!(s, "degree {k}: {}", a.dim(k)?)?;
            }
            if a.cap_in_force() {
                writeln!(s, "note: arity cap in force")?;
            }
            Ok(Outcome { report: s, ok: true })
        }
        Command::MinimalModel {
            algebra,
            r,
            max_degree,
            convention,
            section,
            seed,
            iteration_cap,
            arity_cap,
            out,
            map_out,
        } => {
            if let Some(c) = convention {
                ws.register_convention(c.into(), "--convention")?;
            }
            ws.config.r = Some(r);
            ws.config.truncation = Some(max_degree);
            ws.config.iteration_cap = iteration_cap;
            ws.config.arity_cap = arity_cap;
            ws.config.section = match (section, seed) {
                (SectionArg::Canonical, None) => SectionMode::Canonical,
                (_, seed) => SectionMode::Random { seed: seed.unwrap_or(0) },
            };
            let a = ws.algebra(&algebra)?;
            let m = minimal_model(a, r, max_degree, &ws.config.engine_options())?;
            let mut report = render_report(&m);
            if let Some(o) = out {
                let p = ws.write(&o, &io::save_model(&m)?)?;
                writeln!(report, "wrote {}", p.display())?;
            }
            if let Some(o) = map_out {
                let p = ws.write(&o, &io::save_morphism(&m.map)?)?;
                writeln!(report, "wrote {}", p.display())?;
            }
            let ok = m.is_complete() && m.certificate.as_ref().is_none_or(|c| c.is_quasi_iso);
            Ok(Outcome { report, ok })
        }
        Command::Compare { first, second, t_ceiling, out } => {
            ws.config.t_ceiling = t_ceiling;
            let m1 = ws.model(&first)?;
            let m2 = ws.model(&second)?;
            if !Arc::ptr_eq(&m1.map.target, &m2.map.target) {
                bail!("the two models have different target algebras");
            }
            let opts = CompareOptions { t_ceiling, ..Default::default() };
            let c = compare_models(&m1, &m2, &opts)?;
            let mut s = String::new();
            writeln!(s, "isomorphism {} -> {}", first.display(), second.display())?;
            for (d, mat) in &c.generator_matrices {
                let rows: Vec<String> = (0..mat.rows())
                    .map(|i| {
                        let cells: Vec<String> = (0..mat.cols()).map(|j| mat.get(i, j).to_string()).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                writeln!(s, "degree {d}: linear part {}", rows.join(" "))?;
            }
            let target = &m2.model;
            for (g, img) in c.map.source.generators().iter().zip(&c.map.images) {
                let x = target.from_coords(g.degree, &img.coords)?;
                writeln!(s, "  {} -> {}", g.label, target.format_element(&x))?;
            }
            match (&c.homotopy, &c.witness_flag) {
                (Some(_), _) => writeln!(s, "homotopy f' g ~ f certified with t-degree {}", c.t_max)?,
                (None, Some(why)) => writeln!(s, "homotopy witness unavailable: {why}")?,
                (None, None) => writeln!(s, "homotopy witness unavailable")?,
            }
            if let Some(o) = out {
                let p = ws.write(&o, &io::to_json(&ComparisonDoc::from_comparison(&c)?))?;
                writeln!(s, "wrote {}", p.display())?;
            }
            Ok(Outcome { report: s, ok: c.homotopy.is_some() })
        }
        Command::Lift { f, w, up_to, out } => {
            let fd: MorphismDoc = io::from_json(&std::fs::read_to_string(ws.resolve(&f))?)?;
            let wd: MorphismDoc = io::from_json(&std::fs::read_to_string(ws.resolve(&w))?)?;
            if fd.target != wd.target {
                bail!("f and w must have the same target");
            }
            let fm = ws.morphism(&f)?;
            let wm = ws.morphism(&w)?;
            let g = lift_through_surjection(fm.source.clone(), &fm, &wm, up_to)?;
            let mut s = String::new();
            writeln!(s, "lift g: {} generators into the source of w, w g = f exactly", g.images.len())?;
            for (gen, img) in g.source.generators().iter().zip(&g.images) {
                let labels = g.target.basis_labels(img.degree)?;
                writeln!(s, "  {} -> {}", gen.label, format_coords(&img.coords, &labels))?;
            }
            if let Some(o) = out {
                let p = ws.write(&o, &io::save_morphism(&g)?)?;
                writeln!(s, "wrote {}", p.display())?;
            }
            Ok(Outcome { report: s, ok: true })
        }
        Command::CheckQiso { morphism, up_to } => {
            let f = ws.morphism(&morphism)?;
            let c = is_quasi_iso(&f, up_to)?;
            Ok(Outcome { report: certificate_report(&c), ok: c.is_quasi_iso })
        }
        Command::Builtin { name, convention, arity_bound, out } => {
            let p = operad::builtin(&name, convention.into(), arity_bound)?;
            let json = io::save_operad(&p);
            match out {
                Some(o) => {
                    let path = ws.write(&o, &json)?;
                    Ok(Outcome { report: format!("wrote {}\n", path.display()), ok: true })
                }
                None => Ok(Outcome { report: json, ok: true }),
            }
        }
    }
}

fn parse_gens(spec: &str) -> Result<Vec<Generator>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let Some((label, deg)) = item.trim().split_once(':') else {
                bail!("generator `{item}` must be label:degree");
            };
            Ok(Generator::new(label, deg.parse()?, 0))
        })
        .collect()
}

fn format_coords(v: &sullivan_core::SparseVec, labels: &[String]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(&j, c)| {
            let l = labels.get(j).cloned().unwrap_or_else(|| format!("e{j}"));
            if c.is_one() {
                l
            } else {
                format!("{c}*{l}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn certificate_report(c: &QuasiIsoCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "degree  H(source)  H(target)  rank");
    for &(k, a, b, r) in &c.cohomology {
        let _ = writeln!(s, "{k:>6}  {a:>9}  {b:>9}  {r:>4}");
    }
    if c.is_quasi_iso {
        let _ = writeln!(s, "quasi-isomorphism certified through degree {}", c.up_to);
    } else {
        let _ = writeln!(s, "NOT a quasi-isomorphism: first failure in degree {:?}", c.first_failure);
    }
    s
}

fn validation_report(what: &str, rep: &ValidationReport) -> (String, bool) {
    let mut s = String::new();
    if rep.is_ok() {
        let _ = writeln!(s, "{what}: ok ({} checks)", rep.checks);
    } else {
        let _ = writeln!(s, "{what}: {} violation(s) in {} checks", rep.violation_count, rep.checks);
        for v in &rep.violations {
            let _ = writeln!(s, "  {}: {}", v.axiom, v.witness);
        }
    }
    (s, rep.is_ok())
}

fn validate(ws: &mut Workspace, file: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(ws.resolve(file))?;
    let v: serde_json::Value = io::from_json(&text)?;
    let kind = v.get("kind").and_then(|k| k.as_str()).unwrap_or_default();
    let (report, ok) = match kind {
        "operad" => {
            let p = ws.operad(&file.display().to_string(), None, 0)?;
            validation_report(&format!("operad {} ({})", p.name, p.convention.name()), &operad::validate(&p))
        }
        "tabular-algebra" | "free-algebra" => {
            let doc: AlgebraDoc = io::from_json(&text)?;
            let a = ws.algebra(file)?;
            match doc {
                AlgebraDoc::TabularAlgebra(t) => {
                    let alg = t.to_algebra()?;
                    validation_report(&format!("algebra {}", alg.name), &alg.validate())
                }
                AlgebraDoc::FreeAlgebra(_) => {
                    let f = a.as_any().and_then(|x| x.downcast_ref::<FreeAlgebra>()).expect("free algebra");
                    free_report(f)?
                }
            }
        }
        "minimal-model" => {
            let doc: ModelDoc = io::from_json(&text)?;
            let m = ws.model(file)?;
            let c = is_quasi_iso(&m.map, doc.truncation)?;
            let mut s = format!("model: {} generators, minimal: {}\n", m.model.generators().len(), m.model.is_minimal(m.r as i64));
            s.push_str(&certificate_report(&c));
            (s, c.is_quasi_iso && m.model.is_minimal(m.r as i64))
        }
        "morphism" => {
            let f = ws.morphism(file)?;
            (format!("morphism on {} generators: commutes with d on generators\n", f.images.len()), true)
        }
        other => bail!("cannot validate documents of kind `{other}`"),
    };
    Ok(Outcome { report, ok })
}

/// Sullivan condition and `d^2 = 0` through the generators' degrees plus two.
fn free_report(f: &FreeAlgebra) -> Result<(String, bool)> {
    let delta = f.convention().delta();
    let top = f.generators().iter().map(|g| g.degree).max().unwrap_or(0) + 2;
    let lo = f.generators().iter().map(|g| g.degree).min().unwrap_or(0).min(0);
    let mut bad = Vec::new();
    let (a, b) = (lo, top);
    for k in a..=b {
        let d1 = f.differential(k)?;
        let d2 = f.differential(k + delta)?;
        if !d2.mul(&d1).is_zero() {
            bad.push(k);
        }
    }
    let sullivan = f.is_sullivan();
    let mut s = String::new();
    writeln!(s, "free algebra over {} ({}): Sullivan: {sullivan}", f.operad().name, f.convention().name())?;
    if bad.is_empty() {
        writeln!(s, "d^2 = 0 in degrees {a}..={b}")?;
    } else {
        writeln!(s, "d^2 != 0 in degrees {bad:?}")?;
    }
    Ok((s, bad.is_empty() && sullivan))
}
