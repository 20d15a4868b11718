use std::fmt::Write;

use super::MinimalModel;

/// Human-readable summary: generators by degree, their differentials and
/// images, the per-degree log and the certificate.
pub fn render_report(m: &MinimalModel) -> String {
    let a = &m.model;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "minimal model over {} ({} convention), r = {}, through degree {}",
        a.operad().name,
        a.convention().name(),
        m.r,
        m.truncation
    );
    let dims = m.generator_dims();
    if dims.is_empty() {
        let _ = writeln!(s, "generators: none");
    } else {
        let parts: Vec<String> = dims.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        let _ = writeln!(s, "generators: {}", parts.join(", "));
    }
    let target = m.map.target.clone();
    for (i, g) in a.generators().iter().enumerate() {
        let img = &m.map.images[i];
        let labels = target.basis_labels(img.degree).unwrap_or_default();
        let mut terms = Vec::new();
        for (&j, c) in &img.coords {
            let l = labels.get(j).cloned().unwrap_or_else(|| format!("e{j}"));
            terms.push(if c.is_one() { l } else { format!("{c}*{l}") });
        }
        let image = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let _ = writeln!(
            s,
            "  {} (degree {}, stage {}): d = {}; f = {}",
            g.label,
            g.degree,
            g.stage,
            a.format_element(a.generator_differential(i)),
            image
        );
    }
    for l in &m.log {
        let dims: Vec<String> = l.cone_dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            s,
            "degree {}: {} extension(s), cone dims [{}]{}",
            l.degree,
            l.extensions,
            dims.join(", "),
            if l.capped { " (iteration cap hit)" } else { "" }
        );
    }
    if m.arity_capped {
        let _ = writeln!(s, "note: arity cap in force, results hold modulo the cap");
    }
    match &m.certificate {
        Some(c) if c.is_quasi_iso => {
            let _ = writeln!(s, "quasi-isomorphism certified through degree {}", c.up_to);
        }
        Some(c) => {
            let _ = writeln!(s, "NOT a quasi-isomorphism: first failure in degree {:?}", c.first_failure);
        }
        None => {
            let _ = writeln!(s, "certificate skipped");
        }
    }
    s
}
