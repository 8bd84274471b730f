//! Graphviz DOT export of relations and Hasse diagrams.

use std::fmt::Write;

use crate::error::Result;
use crate::order::validate_order;
use crate::relation::Rel;

/// Cover relation of the partial order generated by `r` (reflexive pairs
/// ignored): `(a, b)` with `a < b` and nothing strictly between.
pub fn hasse(r: &Rel) -> Result<Rel> {
    let order = validate_order(r, true)?;
    let order = order.order();
    let n = order.n();
    let mut strict = order.clone();
    for i in 0..n {
        strict.remove(i, i);
    }
    let two_step = strict.compose(&strict)?;
    strict.difference(&two_step)
}

/// `digraph` with one node per carrier point, in index order, and one edge
/// per pair in lexicographic order. `labels`, when given, become node labels.
pub fn to_dot(r: &Rel, name: &str, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for i in 0..r.n() {
        match labels.and_then(|l| l.get(i)) {
            Some(label) => writeln!(out, "  {i} [label={}];", quote(label)).unwrap(),
            None => writeln!(out, "  {i};").unwrap(),
        }
    }
    for (a, b) in r.pairs() {
        writeln!(out, "  {a} -> {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
