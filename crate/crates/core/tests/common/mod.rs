#![allow(dead_code)]

use std::collections::BTreeSet;

use brauer_core::invariants::{char_poly, IntMatrix};
use brauer_core::ribbon::half_edge_id;
use brauer_core::{Edge, MAngulation, RibbonGraph, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    let base = std::env::var("BRAUER_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0u64);
    ChaCha8Rng::seed_from_u64(base ^ seed)
}

/// Connected Brauer graph with `edges` edges, loops and multiple edges
/// allowed, multiplicities in `1..=max_mult`.
pub fn random_graph<R: Rng>(rng: &mut R, edges: usize, max_mult: u32) -> RibbonGraph {
    let mut rot: Vec<Vec<String>> = vec![Vec::new()];
    let mut es = Vec::new();
    for k in 0..edges {
        let id = format!("e{k}");
        let (h0, h1) = (half_edge_id(&id, 0), half_edge_id(&id, 1));
        let x = rng.gen_range(0..rot.len());
        let p = rng.gen_range(0..=rot[x].len());
        rot[x].insert(p, h0);
        if rng.gen_bool(0.6) || rot.len() == 1 && rng.gen_bool(0.5) {
            rot.push(vec![h1]);
        } else {
            let y = rng.gen_range(0..rot.len());
            let q = rng.gen_range(0..=rot[y].len());
            rot[y].insert(q, h1);
        }
        es.push(Edge { id, halves: [half_edge_id(&format!("e{k}"), 0), half_edge_id(&format!("e{k}"), 1)] });
    }
    let vertices = rot
        .into_iter()
        .enumerate()
        .map(|(i, rotation)| Vertex { id: format!("v{i}"), multiplicity: rng.gen_range(1..=max_mult), rotation })
        .collect();
    RibbonGraph::new(vertices, es)
}

/// Brauer tree with `edges` edges and all multiplicities 1.
pub fn random_tree<R: Rng>(rng: &mut R, edges: usize) -> RibbonGraph {
    let mut rot: Vec<Vec<String>> = vec![Vec::new()];
    let mut es = Vec::new();
    for k in 0..edges {
        let id = format!("t{k}");
        let x = rng.gen_range(0..rot.len());
        let p = rng.gen_range(0..=rot[x].len());
        rot[x].insert(p, half_edge_id(&id, 0));
        rot.push(vec![half_edge_id(&id, 1)]);
        es.push(Edge { halves: [half_edge_id(&id, 0), half_edge_id(&id, 1)], id });
    }
    let vertices = rot
        .into_iter()
        .enumerate()
        .map(|(i, rotation)| Vertex { id: format!("v{i}"), multiplicity: 1, rotation })
        .collect();
    RibbonGraph::new(vertices, es)
}

/// A random `m`-angulation with `k` regions, reached from the fan by random
/// mutations.
pub fn random_angulation<R: Rng>(rng: &mut R, m: usize, k: usize) -> MAngulation {
    let mut t = MAngulation::fan(m, k);
    for _ in 0..4 * k {
        if t.diagonals.is_empty() {
            break;
        }
        let id = t.diagonals.choose(rng).unwrap().id.clone();
        t = t.mutate_m(&id).unwrap();
    }
    t
}

/// Rooted plane trees from balanced bracket words; the rotation at every
/// vertex lists the edge to its parent first, then its children.
fn plane_tree(word: &[bool]) -> RibbonGraph {
    let mut rot: Vec<Vec<String>> = vec![Vec::new()];
    let mut es = Vec::new();
    let mut stack = vec![0usize];
    for &open in word {
        if open {
            let id = format!("t{}", es.len());
            let parent = *stack.last().unwrap();
            rot[parent].push(half_edge_id(&id, 0));
            rot.push(vec![half_edge_id(&id, 1)]);
            stack.push(rot.len() - 1);
            es.push(Edge { halves: [half_edge_id(&id, 0), half_edge_id(&id, 1)], id });
        } else {
            stack.pop();
        }
    }
    let vertices = rot
        .into_iter()
        .enumerate()
        .map(|(i, rotation)| Vertex { id: format!("v{i}"), multiplicity: 1, rotation })
        .collect();
    RibbonGraph::new(vertices, es)
}

fn words(n: usize, open: usize, close: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
    if cur.len() == 2 * n {
        out.push(cur.clone());
        return;
    }
    if open < n {
        cur.push(true);
        words(n, open + 1, close, cur, out);
        cur.pop();
    }
    if close < open {
        cur.push(false);
        words(n, open, close + 1, cur, out);
        cur.pop();
    }
}

/// One representative of every plane tree with exactly `n` edges.
pub fn plane_trees(n: usize) -> Vec<RibbonGraph> {
    let mut all = Vec::new();
    words(n, 0, 0, &mut Vec::new(), &mut all);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in all {
        let t = plane_tree(&w);
        if seen.insert(t.canonical_form().unwrap().code) {
            out.push(t);
        }
    }
    out
}

/// The same graph under fresh ids and rotated rotation lists.
pub fn relabel<R: Rng>(rng: &mut R, g: &RibbonGraph) -> RibbonGraph {
    let mut halves: Vec<String> = g.edges.iter().flat_map(|e| e.halves.iter().cloned()).collect();
    halves.shuffle(rng);
    let fresh: std::collections::HashMap<String, String> =
        halves.iter().enumerate().map(|(i, h)| (h.clone(), format!("h{i}"))).collect();
    let mut vertices: Vec<Vertex> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut rotation: Vec<String> = v.rotation.iter().map(|h| fresh[h].clone()).collect();
            let s = rng.gen_range(0..rotation.len());
            rotation.rotate_left(s);
            Vertex { id: format!("w{i}"), multiplicity: v.multiplicity, rotation }
        })
        .collect();
    vertices.shuffle(rng);
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut h = [fresh[&e.halves[0]].clone(), fresh[&e.halves[1]].clone()];
            if rng.gen_bool(0.5) {
                h.swap(0, 1);
            }
            Edge { id: format!("f{i}"), halves: h }
        })
        .collect();
    edges.shuffle(rng);
    let boundary_faces = g.boundary_faces.iter().map(|f| f.iter().map(|h| fresh[h].clone()).collect()).collect();
    RibbonGraph { vertices, edges, boundary_faces }
}

fn sign_changes(c: &[BigInt]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Root counts of a real-rooted polynomial: Descartes' rule is exact there.
pub fn descartes(m: &IntMatrix) -> (usize, usize, usize) {
    let p = char_poly(m).coefficients;
    let zero = p.iter().take_while(|c| c.is_zero()).count();
    let rest = &p[zero..];
    let mirrored: Vec<BigInt> =
        rest.iter().enumerate().map(|(i, c)| if (i + zero) % 2 == 1 { -c } else { c.clone() }).collect();
    (sign_changes(rest), sign_changes(&mirrored), zero)
}
