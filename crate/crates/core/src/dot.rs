//! Graphviz output. Node order follows the canonical form so the text is
//! stable under renaming of half-edges.

use std::fmt::Write;

use crate::quiver::Quiver;
use crate::ribbon::{GraphError, RibbonGraph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected multigraph; each vertex's clockwise rotation is recorded in a
/// comment.
pub fn graph_to_dot(graph: &RibbonGraph) -> Result<String, GraphError> {
    let d = graph.darts()?;
    let order: Vec<usize> = match graph.canonical_form() {
        Ok(cf) => {
            let mut first = vec![usize::MAX; graph.vertices.len()];
            for (h, name) in d.names.iter().enumerate() {
                let v = d.vertex[h];
                first[v] = first[v].min(cf.relabeling[name]);
            }
            let mut idx: Vec<usize> = (0..graph.vertices.len()).collect();
            idx.sort_by_key(|&v| (first[v], graph.vertices[v].id.clone()));
            idx
        }
        Err(_) => (0..graph.vertices.len()).collect(),
    };
    let mut out = String::from("graph brauer {\n");
    for &vi in &order {
        let v = &graph.vertices[vi];
        let _ = writeln!(out, "  // rotation {}: {}", v.id, v.rotation.join(" "));
        let _ = writeln!(out, "  {} [label={}];", quote(&v.id), quote(&format!("{} (m={})", v.id, v.multiplicity)));
    }
    let rank: Vec<usize> = {
        let mut r = vec![0; graph.vertices.len()];
        for (k, &vi) in order.iter().enumerate() {
            r[vi] = k;
        }
        r
    };
    let mut edges: Vec<(usize, usize, &str)> = graph
        .edges
        .iter()
        .map(|e| {
            let x = rank[d.vertex[d.index[&e.halves[0]]]];
            let y = rank[d.vertex[d.index[&e.halves[1]]]];
            (x.min(y), x.max(y), e.id.as_str())
        })
        .collect();
    edges.sort();
    for (x, y, id) in edges {
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(&graph.vertices[order[x]].id),
            quote(&graph.vertices[order[y]].id),
            quote(id)
        );
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn quiver_to_dot(quiver: &Quiver) -> String {
    let mut out = String::from("digraph quiver {\n");
    for v in &quiver.vertices {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for a in &quiver.arrows {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&quiver.vertices[a.source]),
            quote(&quiver.vertices[a.target]),
            quote(&format!("α{}", a.id))
        );
    }
    out.push_str("}\n");
    out
}
