//! Canonical text for documents. `parse(render(d)) == d` for every parsed
//! document; zero entries of dense tables are left out.

use std::collections::HashMap;
use std::fmt::Write;

use graded_poisson::graded_algebra::{Chart, Coordinate, GradedPolynomial, Rational};
use num_traits::Zero;

use crate::document::*;

/// Renders `Σ v_k names_k` in canonical polynomial form.
pub fn render_lincomb(names: &[String], v: &[Rational]) -> String {
    let chart = Chart::new(names.iter().map(|n| Coordinate::new(n.clone(), 0)).collect())
        .expect("names were validated when parsed");
    let terms = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        let mut e = vec![0u32; names.len()];
        e[k] = 1;
        (e, c.clone())
    });
    GradedPolynomial::from_terms(&chart, terms).to_string()
}

fn nonzero(v: &[Rational]) -> bool {
    v.iter().any(|c| !c.is_zero())
}

pub fn render(doc: &Document) -> String {
    let mut out = String::new();
    let mut algebras: HashMap<&str, Vec<String>> = HashMap::new();
    let mut previous_task = false;
    for item in &doc.items {
        let is_task = matches!(item, Item::Task(_));
        if !out.is_empty() && !(is_task && previous_task) {
            out.push('\n');
        }
        previous_task = is_task;
        render_item(&mut out, item, &mut algebras);
    }
    out
}

fn render_item<'a>(out: &mut String, item: &'a Item, algebras: &mut HashMap<&'a str, Vec<String>>) {
    let names_of = |algebras: &HashMap<&str, Vec<String>>, a: &str| -> Vec<String> {
        algebras.get(a).cloned().expect("algebra declared earlier")
    };
    // writing to a String cannot fail
    let w = out;
    match item {
        Item::Chart(d) => {
            let _ = writeln!(w, "chart {} {{", d.name);
            for (c, deg) in &d.coords {
                let _ = writeln!(w, "  coord {c} : {deg};");
            }
            let _ = writeln!(w, "}}");
        }
        Item::Cotangent(d) => {
            let _ = writeln!(w, "cotangent {} = T*[{}] {};", d.name, d.shift, d.base);
        }
        Item::Poly(d) => {
            let _ = writeln!(w, "poly {} on {} = {};", d.name, d.space, d.value);
        }
        Item::HomotopyPoisson(d) => {
            let _ = writeln!(w, "homotopy-poisson {} on {} = {};", d.name, d.space, d.pi);
        }
        Item::LieAlgebra(d) => {
            let names: Vec<String> = d.basis.iter().map(|(n, _)| n.clone()).collect();
            let _ = writeln!(w, "lie-algebra {} {{", d.name);
            for (b, deg) in &d.basis {
                let _ = writeln!(w, "  basis {b} : {deg};");
            }
            for (i, j, v) in &d.brackets {
                let _ = writeln!(w, "  bracket {} {} = {};", names[*i], names[*j], render_lincomb(&names, v));
            }
            let _ = writeln!(w, "}}");
            algebras.insert(&d.name, names);
        }
        Item::Bialgebra(d) => {
            let names = names_of(algebras, &d.algebra);
            let _ = writeln!(w, "bialgebra {} {{", d.name);
            let _ = writeln!(w, "  algebra {};", d.algebra);
            let _ = writeln!(w, "  shift {};", d.shift);
            for (name, p) in names.iter().zip(&d.differential) {
                if !p.is_zero() {
                    let _ = writeln!(w, "  d {name} = {p};");
                }
            }
            let _ = writeln!(w, "}}");
        }
        Item::Courant(d) => {
            let gnames = names_of(algebras, &d.algebra);
            let _ = writeln!(w, "courant {} {{", d.name);
            let _ = writeln!(w, "  algebra {};", d.algebra);
            let _ = writeln!(w, "  basis {};", d.basis.join(", "));
            for (i, j, v) in &d.brackets {
                let _ = writeln!(
                    w,
                    "  bracket {} {} = {};",
                    d.basis[*i],
                    d.basis[*j],
                    render_lincomb(&d.basis, v)
                );
            }
            for (name, v) in d.basis.iter().zip(&d.projection) {
                if nonzero(v) {
                    let _ = writeln!(w, "  project {name} = {};", render_lincomb(&gnames, v));
                }
            }
            let _ = writeln!(w, "}}");
        }
        Item::MatchedPair(d) => {
            let gnames = names_of(algebras, &d.algebra);
            let knames = names_of(algebras, &d.dual);
            let _ = writeln!(w, "matched-pair {} {{", d.name);
            let _ = writeln!(w, "  algebra {};", d.algebra);
            let _ = writeln!(w, "  dual {};", d.dual);
            for (a, row) in d.act.iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    if nonzero(v) {
                        let _ = writeln!(w, "  act {} {} = {};", gnames[a], knames[i], render_lincomb(&knames, v));
                    }
                }
            }
            for (i, row) in d.coact.iter().enumerate() {
                for (a, v) in row.iter().enumerate() {
                    if nonzero(v) {
                        let _ = writeln!(w, "  coact {} {} = {};", knames[i], gnames[a], render_lincomb(&gnames, v));
                    }
                }
            }
            let _ = writeln!(w, "}}");
        }
        Item::Action(d) => {
            let _ = writeln!(w, "action {} {{", d.name);
            let _ = writeln!(w, "  bialgebra {};", d.bialgebra);
            let _ = writeln!(w, "  on {};", d.space);
            for (v, row) in d.fields.iter().enumerate() {
                if row.iter().all(GradedPolynomial::is_zero) {
                    continue;
                }
                let entries: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(c, p)| format!("{} -> {p}", p.chart().name(c)))
                    .collect();
                let _ = writeln!(w, "  rho {} = [{}];", basis_name(algebras, &d.bialgebra, v), entries.join(", "));
            }
            let _ = writeln!(w, "}}");
        }
        Item::MomentMap(d) => {
            let _ = writeln!(w, "moment-map {} {{", d.name);
            let _ = writeln!(w, "  bialgebra {};", d.bialgebra);
            let _ = writeln!(w, "  space {};", d.space);
            for (v, p) in d.images.iter().enumerate() {
                if !p.is_zero() {
                    let _ = writeln!(w, "  moment {} = {p};", basis_name(algebras, &d.bialgebra, v));
                }
            }
            let _ = writeln!(w, "}}");
        }
        Item::Reduction(d) => {
            let _ = writeln!(w, "reduction {} {{", d.name);
            let _ = writeln!(w, "  space {};", d.space);
            let _ = writeln!(w, "  hamiltonian = {};", d.hamiltonian);
            let _ = writeln!(w, "  moment {};", d.moment);
            if let Some(a) = &d.action {
                let _ = writeln!(w, "  action {a};");
            }
            let _ = writeln!(w, "  quotient {};", d.quotient);
            for (c, p) in &d.images {
                let _ = writeln!(w, "  image {c} = {p};");
            }
            let _ = writeln!(w, "}}");
        }
        Item::QuotientTheorem(d) => {
            let _ = writeln!(w, "quotient-theorem {} {{", d.name);
            let _ = writeln!(w, "  structure {};", d.structure);
            let _ = writeln!(w, "  action {};", d.action);
            let _ = writeln!(w, "  quotient {};", d.quotient);
            for (c, p) in &d.images {
                let _ = writeln!(w, "  image {c} = {p};");
            }
            for (c, p) in d.momenta.iter().flatten() {
                let _ = writeln!(w, "  momentum {c} = {p};");
            }
            let _ = writeln!(w, "}}");
        }
        Item::Task(t) => {
            let _ = writeln!(w, "task {};", t.label());
        }
    }
    if let Item::Bialgebra(d) = item {
        let names = names_of(algebras, &d.algebra);
        algebras.insert(&d.name, names);
    }
}

/// Basis name `v` of the algebra behind bialgebra `b`; bialgebras are
/// entered in the table under their own name.
fn basis_name(algebras: &HashMap<&str, Vec<String>>, b: &str, v: usize) -> String {
    algebras.get(b).expect("bialgebra declared earlier")[v].clone()
}
