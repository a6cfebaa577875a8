//! Graph rewriting: Kauer moves, flips and mutations of m-angulations, dual
//! trees and dual Kauer moves, and orbit exploration.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ribbon::{half_edge_id, Edge, GraphError, RibbonGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("nothing to move at edge {0}")]
    NothingToMove(String),
    #[error("edge {0} lies on a boundary face")]
    BoundaryEdge(String),
    #[error("move at edge {0} would break a boundary face")]
    BreaksBoundary(String),
    #[error("invalid m-angulation: {0}")]
    InvalidAngulation(String),
    #[error("arc {0} is a boundary arc")]
    BoundaryArc(String),
    #[error("flips need a triangulation, got m = {0}")]
    NotATriangulation(usize),
    #[error("graph is not a tree")]
    NotATree,
    #[error("edge {0} is incident to a leaf")]
    LeafEndpoint(String),
    #[error("limits must be positive")]
    BadLimits,
}

fn rotations(graph: &RibbonGraph) -> Vec<Vec<String>> {
    graph.vertices.iter().map(|v| v.rotation.clone()).collect()
}

fn remove_half(rot: &mut [Vec<String>], h: &str) {
    for r in rot.iter_mut() {
        if let Some(p) = r.iter().position(|x| x == h) {
            r.remove(p);
            return;
        }
    }
}

fn insert_relative(rot: &mut [Vec<String>], anchor: &str, h: String, after: bool) {
    for r in rot.iter_mut() {
        if let Some(p) = r.iter().position(|x| x == anchor) {
            r.insert(if after { p + 1 } else { p }, h);
            return;
        }
    }
    unreachable!("anchor half-edge is placed");
}

fn rebuild(graph: &RibbonGraph, rot: Vec<Vec<String>>, edge: &str) -> Result<RibbonGraph, MoveError> {
    let vertices = graph
        .vertices
        .iter()
        .zip(rot)
        .map(|(v, rotation)| Vertex { id: v.id.clone(), multiplicity: v.multiplicity, rotation })
        .collect();
    let out = RibbonGraph {
        vertices,
        edges: graph.edges.clone(),
        boundary_faces: graph.boundary_faces.clone(),
    };
    if !out.boundary_faces.is_empty() && out.resolve_boundary(&out.boundary_faces).is_err() {
        return Err(MoveError::BreaksBoundary(edge.into()));
    }
    Ok(out)
}

fn movable_edge(graph: &RibbonGraph, edge: &str) -> Result<(crate::ribbon::Darts, usize, usize), MoveError> {
    let d = graph.darts()?;
    let &e = d.edge_index.get(edge).ok_or_else(|| MoveError::UnknownEdge(edge.into()))?;
    if !graph.boundary_faces.is_empty() && graph.boundary_edges()?.contains(edge) {
        return Err(MoveError::BoundaryEdge(edge.into()));
    }
    let hx = d.index[&graph.edges[e].halves[0]];
    let hy = d.index[&graph.edges[e].halves[1]];
    Ok((d, hx, hy))
}

/// Kauer move at `edge`.
///
/// Each end of the edge slides along the edge that follows it clockwise: the
/// half-edge `h` at `X` is removed and reinserted at the far end of
/// `next(h)`, immediately after that edge's other half. An end whose
/// clockwise successor is itself stays put. A loop whose halves are adjacent,
/// so that it bounds a face of length one, is carried whole along the edge
/// that follows it. Boundary faces are kept; edges on them are frozen.
pub fn kauer_move(graph: &RibbonGraph, edge: &str) -> Result<RibbonGraph, MoveError> {
    let (d, hx, hy) = movable_edge(graph, edge)?;
    let mut plan = Vec::new();
    for (h, other) in [(hx, hy), (hy, hx)] {
        let t = d.next[h];
        if t != h && t != other {
            plan.push((d.names[h].clone(), d.names[d.partner[t]].clone()));
        }
    }
    if plan.len() == 1 && d.next[hx] != hx && d.next[hy] != hy {
        // the stuck half follows its partner, landing just before it
        let (moving, anchor) = plan[0].clone();
        let stuck = if d.names[hx] == moving { hy } else { hx };
        plan = vec![(moving, anchor.clone()), (d.names[stuck].clone(), anchor)];
    }
    if plan.is_empty() {
        return Err(MoveError::NothingToMove(edge.into()));
    }
    let mut rot = rotations(graph);
    for (h, _) in &plan {
        remove_half(&mut rot, h);
    }
    for (h, anchor) in plan {
        insert_relative(&mut rot, &anchor, h, true);
    }
    rebuild(graph, rot, edge)
}

/// Successor exchange at `edge`: with `b` the clockwise successor of the edge
/// at `X` and `c` the one at `Y`, the `X`-end of `b` is reattached at `Y` as
/// the clockwise predecessor of `edge`, and the `Y`-end of `c` at `X`
/// likewise. Missing successors are skipped.
pub fn successor_exchange(graph: &RibbonGraph, edge: &str) -> Result<RibbonGraph, MoveError> {
    let (d, hx, hy) = movable_edge(graph, edge)?;
    let mut plan = Vec::new();
    for (h, other) in [(hx, hy), (hy, hx)] {
        let t = d.next[h];
        if t != h && t != other {
            plan.push((d.names[t].clone(), d.names[other].clone()));
        }
    }
    if plan.is_empty() {
        return Err(MoveError::NothingToMove(edge.into()));
    }
    let mut rot = rotations(graph);
    for (h, _) in &plan {
        remove_half(&mut rot, h);
    }
    for (h, anchor) in plan {
        insert_relative(&mut rot, &anchor, h, false);
    }
    rebuild(graph, rot, edge)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "DiagonalRepr", into = "DiagonalRepr")]
pub struct Diagonal {
    pub id: String,
    pub ends: [usize; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DiagonalRepr {
    Pair([usize; 2]),
    Named { id: String, ends: [usize; 2] },
}

impl From<DiagonalRepr> for Diagonal {
    fn from(r: DiagonalRepr) -> Self {
        match r {
            DiagonalRepr::Pair(ends) => Diagonal::new(ends[0], ends[1]),
            DiagonalRepr::Named { id, ends } => Diagonal { id, ends: sorted(ends) },
        }
    }
}

impl From<Diagonal> for DiagonalRepr {
    fn from(d: Diagonal) -> Self {
        if d.id == arc_id(d.ends[0], d.ends[1]) {
            DiagonalRepr::Pair(d.ends)
        } else {
            DiagonalRepr::Named { id: d.id, ends: d.ends }
        }
    }
}

fn sorted([a, b]: [usize; 2]) -> [usize; 2] {
    [a.min(b), a.max(b)]
}

/// Default id of the chord `{i, j}`.
pub fn arc_id(i: usize, j: usize) -> String {
    format!("{}-{}", i.min(j), i.max(j))
}

impl Diagonal {
    pub fn new(i: usize, j: usize) -> Self {
        Diagonal { id: arc_id(i, j), ends: sorted([i, j]) }
    }
}

/// Subdivision of a convex `n`-gon, vertices `1..=n` clockwise, into `m`-gons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MAngulation {
    pub n: usize,
    pub m: usize,
    pub diagonals: Vec<Diagonal>,
}

fn crosses(a: [usize; 2], b: [usize; 2]) -> bool {
    (a[0] < b[0] && b[0] < a[1] && a[1] < b[1]) || (b[0] < a[0] && a[0] < b[1] && b[1] < a[1])
}

impl MAngulation {
    pub fn new(n: usize, m: usize, chords: &[(usize, usize)]) -> Result<Self, MoveError> {
        let t = MAngulation { n, m, diagonals: chords.iter().map(|&(i, j)| Diagonal::new(i, j)).collect() };
        t.validate()?;
        Ok(t)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The fan at vertex 1: chords `(1, t(m−2)+2)` for `t = 1..k−1`.
    pub fn fan(m: usize, k: usize) -> Self {
        let n = k * (m - 2) + 2;
        MAngulation { n, m, diagonals: (1..k).map(|t| Diagonal::new(1, t * (m - 2) + 2)).collect() }
    }

    pub fn boundary_arcs(&self) -> Vec<Diagonal> {
        (1..=self.n).map(|i| Diagonal::new(i, i % self.n + 1)).collect()
    }

    fn invalid(msg: impl Into<String>) -> MoveError {
        MoveError::InvalidAngulation(msg.into())
    }

    pub fn validate(&self) -> Result<(), MoveError> {
        let (n, m) = (self.n, self.m);
        if m < 3 || n < 3 || (n - 2) % (m - 2) != 0 {
            return Err(Self::invalid(format!("n = {n} is not k(m-2)+2 for m = {m}")));
        }
        let k = (n - 2) / (m - 2);
        if self.diagonals.len() != k - 1 {
            return Err(Self::invalid(format!("expected {} diagonals, got {}", k - 1, self.diagonals.len())));
        }
        let mut ids = BTreeSet::new();
        for b in self.boundary_arcs() {
            ids.insert(b.id);
        }
        let mut chords = BTreeSet::new();
        for d in &self.diagonals {
            let [i, j] = d.ends;
            if i < 1 || j > n || j - i < 2 || (i == 1 && j == n) {
                return Err(Self::invalid(format!("{i}-{j} is not a diagonal")));
            }
            if !chords.insert(d.ends) {
                return Err(Self::invalid(format!("diagonal {i}-{j} repeated")));
            }
            if !ids.insert(d.id.clone()) {
                return Err(Self::invalid(format!("arc id {} repeated", d.id)));
            }
        }
        for (x, a) in self.diagonals.iter().enumerate() {
            for b in &self.diagonals[x + 1..] {
                if crosses(a.ends, b.ends) {
                    return Err(Self::invalid(format!("{} crosses {}", a.id, b.id)));
                }
            }
        }
        for region in self.regions_unchecked() {
            if region.len() != m {
                return Err(Self::invalid(format!("region {region:?} is not an {m}-gon")));
            }
        }
        Ok(())
    }

    fn arcs(&self) -> Vec<Diagonal> {
        let mut arcs = self.boundary_arcs();
        arcs.extend(self.diagonals.iter().cloned());
        arcs
    }

    /// Ribbon graph with vertices `1..=n`, every arc an edge, and the outer
    /// face marked as boundary.
    pub fn to_ribbon(&self) -> RibbonGraph {
        let n = self.n;
        let arcs = self.arcs();
        let mut around: Vec<Vec<(usize, String)>> = vec![Vec::new(); n + 1];
        for a in &arcs {
            let [i, j] = a.ends;
            around[i].push(((j + n - i) % n, half_edge_id(&a.id, 0)));
            around[j].push(((i + n - j) % n, half_edge_id(&a.id, 1)));
        }
        let vertices = (1..=n)
            .map(|i| {
                let mut r = around[i].clone();
                r.sort();
                Vertex { id: i.to_string(), multiplicity: 1, rotation: r.into_iter().map(|(_, h)| h).collect() }
            })
            .collect();
        let edges = arcs
            .iter()
            .map(|a| Edge { id: a.id.clone(), halves: [half_edge_id(&a.id, 0), half_edge_id(&a.id, 1)] })
            .collect();
        let arc_of = |i: usize, j: usize| arcs.iter().find(|a| a.ends == sorted([i, j])).unwrap().id.clone();
        let outer = (1..=n)
            .map(|i| {
                let j = i % n + 1;
                half_edge_id(&arc_of(i, j), if i < j { 0 } else { 1 })
            })
            .collect();
        RibbonGraph { vertices, edges, boundary_faces: vec![outer] }
    }

    fn regions_unchecked(&self) -> Vec<Vec<usize>> {
        let g = self.to_ribbon();
        let d = match g.darts() {
            Ok(d) => d,
            Err(_) => return Vec::new(),
        };
        let outer = crate::ribbon::Face::from_cycle(&g.boundary_faces[0]);
        let mut out: Vec<Vec<usize>> = crate::ribbon::faces_of(&d)
            .into_iter()
            .filter(|f| *f != outer)
            .map(|f| {
                let mut vs: Vec<usize> =
                    f.cycle.iter().map(|h| g.vertices[d.vertex[d.index[h]]].id.parse().unwrap()).collect();
                vs.sort();
                vs
            })
            .collect();
        out.sort();
        out
    }

    /// The `m`-gons, each as its sorted vertex list.
    pub fn regions(&self) -> Vec<Vec<usize>> {
        self.regions_unchecked()
    }

    pub fn diagonal(&self, id: &str) -> Result<usize, MoveError> {
        if let Some(p) = self.diagonals.iter().position(|d| d.id == id) {
            return Ok(p);
        }
        if self.boundary_arcs().iter().any(|b| b.id == id) {
            return Err(MoveError::BoundaryArc(id.into()));
        }
        Err(MoveError::UnknownEdge(id.into()))
    }

    /// Rotates the diagonal one step clockwise inside the `(2m−2)`-gon formed
    /// by its two adjacent regions; the arc keeps its id.
    pub fn mutate_m(&self, id: &str) -> Result<MAngulation, MoveError> {
        self.validate()?;
        let p = self.diagonal(id)?;
        let [i, j] = self.diagonals[p].ends;
        let mut hull: Vec<usize> = self
            .regions()
            .into_iter()
            .filter(|r| r.contains(&i) && r.contains(&j) && is_side(r, i, j))
            .flatten()
            .collect();
        hull.sort();
        hull.dedup();
        let pred = |x: usize| {
            let q = hull.iter().position(|&y| y == x).unwrap();
            hull[(q + hull.len() - 1) % hull.len()]
        };
        let mut out = self.clone();
        out.diagonals[p].ends = sorted([pred(i), pred(j)]);
        if out.diagonals[p].id == arc_id(i, j) {
            out.diagonals[p].id = arc_id(pred(i), pred(j));
        }
        out.validate()?;
        Ok(out)
    }

    /// Flip of a triangulation: the diagonal is replaced by the other
    /// diagonal of its quadrilateral.
    pub fn flip(&self, id: &str) -> Result<MAngulation, MoveError> {
        if self.m != 3 {
            return Err(MoveError::NotATriangulation(self.m));
        }
        self.mutate_m(id)
    }

    /// Dual tree: an interior vertex for each region, whose rotation lists
    /// the region's sides clockwise, and a leaf for each boundary arc. Edge
    /// ids are arc ids.
    pub fn dual_tree(&self) -> Result<DualTree, MoveError> {
        self.validate()?;
        let arcs = self.arcs();
        let arc_of = |i: usize, j: usize| arcs.iter().find(|a| a.ends == sorted([i, j])).unwrap().id.clone();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut half = |id: String| {
            let side = seen.entry(id.clone()).or_insert(0);
            *side += 1;
            half_edge_id(&id, *side - 1)
        };
        let mut vertices = Vec::new();
        for (k, r) in self.regions().iter().enumerate() {
            let rotation = (0..r.len()).map(|t| half(arc_of(r[t], r[(t + 1) % r.len()]))).collect();
            vertices.push(Vertex { id: format!("R{}", k + 1), multiplicity: 1, rotation });
        }
        for b in self.boundary_arcs() {
            vertices.push(Vertex { id: format!("L{}", b.id), multiplicity: 1, rotation: vec![half(b.id.clone())] });
        }
        let edges =
            arcs.iter().map(|a| Edge { id: a.id.clone(), halves: [half_edge_id(&a.id, 0), half_edge_id(&a.id, 1)] }).collect();
        DualTree::new(RibbonGraph::new(vertices, edges))
    }
}

fn is_side(region: &[usize], i: usize, j: usize) -> bool {
    let k = region.len();
    (0..k).any(|t| sorted([region[t], region[(t + 1) % k]]) == [i, j])
}

/// A ribbon graph known to be a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DualTree {
    pub graph: RibbonGraph,
}

impl DualTree {
    pub fn new(graph: RibbonGraph) -> Result<Self, MoveError> {
        if !graph.is_connected()? || graph.vertices.len() != graph.edges.len() + 1 {
            return Err(MoveError::NotATree);
        }
        Ok(DualTree { graph })
    }

    /// Removes the leaves and their edges.
    pub fn strip_leaves(&self) -> Result<RibbonGraph, MoveError> {
        let leaves: BTreeSet<&str> =
            self.graph.vertices.iter().filter(|v| v.rotation.len() == 1).map(|v| v.id.as_str()).collect();
        let d = self.graph.darts()?;
        let dropped: BTreeSet<usize> = (0..d.len())
            .filter(|&h| leaves.contains(self.graph.vertices[d.vertex[h]].id.as_str()))
            .map(|h| d.edge[h])
            .collect();
        let dead: BTreeSet<&str> = dropped
            .iter()
            .flat_map(|&e| self.graph.edges[e].halves.iter().map(String::as_str))
            .collect();
        let vertices = self
            .graph
            .vertices
            .iter()
            .filter(|v| !leaves.contains(v.id.as_str()))
            .map(|v| Vertex {
                id: v.id.clone(),
                multiplicity: v.multiplicity,
                rotation: v.rotation.iter().filter(|h| !dead.contains(h.as_str())).cloned().collect(),
            })
            .collect();
        let edges = self.graph.edges.iter().enumerate().filter(|(e, _)| !dropped.contains(e)).map(|(_, e)| e.clone()).collect();
        let out = RibbonGraph::new(vertices, edges);
        out.darts()?;
        Ok(out)
    }

    /// Dual Kauer move: the first edge clockwise of `edge` at each of its
    /// endpoints is carried along `edge` to the other endpoint, where it
    /// becomes the clockwise predecessor of `edge`.
    pub fn dual_kauer(&self, edge: &str) -> Result<DualTree, MoveError> {
        let e = self.graph.edge(edge).ok_or_else(|| MoveError::UnknownEdge(edge.into()))?;
        for h in &e.halves {
            let v = self.graph.vertices.iter().find(|v| v.rotation.contains(h)).unwrap();
            if v.rotation.len() < 2 {
                return Err(MoveError::LeafEndpoint(edge.into()));
            }
        }
        DualTree::new(successor_exchange(&self.graph, edge)?)
    }

    /// Edges whose endpoints both have valency at least two.
    pub fn internal_edges(&self) -> Vec<String> {
        let d = match self.graph.darts() {
            Ok(d) => d,
            Err(_) => return Vec::new(),
        };
        let val = self.graph.valencies();
        self.graph
            .edges
            .iter()
            .filter(|e| e.halves.iter().all(|h| val[d.vertex[d.index[h]]] >= 2))
            .map(|e| e.id.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dedup {
    /// Nodes are ribbon isomorphism classes.
    Isomorphism,
    /// Nodes are graphs with fixed vertex ids, edge names ignored.
    Labeled,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitNode {
    pub key: String,
    pub depth: usize,
    pub graph: RibbonGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitMove {
    pub from: usize,
    pub edge: String,
    pub to: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub nodes: Vec<OrbitNode>,
    pub moves: Vec<OrbitMove>,
    /// Whether `max_nodes` cut the exploration short.
    pub truncated: bool,
}

fn orbit_key(g: &RibbonGraph, dedup: Dedup) -> Result<String, GraphError> {
    match dedup {
        Dedup::Isomorphism => Ok(format!("{:?}", g.canonical_form()?.code)),
        Dedup::Labeled => g.labeled_key(),
    }
}

type Expansion = Vec<(String, String, RibbonGraph)>;

fn expand(g: &RibbonGraph, dedup: Dedup) -> Result<Expansion, MoveError> {
    let mut out = Vec::new();
    for e in &g.edges {
        match kauer_move(g, &e.id) {
            Ok(h) => out.push((e.id.clone(), orbit_key(&h, dedup)?, h)),
            Err(MoveError::NothingToMove(_) | MoveError::BoundaryEdge(_) | MoveError::BreaksBoundary(_)) => {}
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

/// Breadth-first closure under Kauer moves at every edge. Frontiers are
/// expanded in parallel when `workers > 1`; results are merged in frontier
/// order, so the output does not depend on scheduling.
pub fn kauer_orbit(
    graph: &RibbonGraph,
    max_depth: usize,
    max_nodes: usize,
    dedup: Dedup,
    workers: usize,
) -> Result<Orbit, MoveError> {
    if max_nodes == 0 {
        return Err(MoveError::BadLimits);
    }
    let pool = if workers > 1 {
        Some(rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool"))
    } else {
        None
    };
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let root_key = orbit_key(graph, dedup)?;
    index.insert(root_key.clone(), 0);
    let mut nodes = vec![OrbitNode { key: root_key, depth: 0, graph: graph.clone() }];
    let mut moves = Vec::new();
    let mut truncated = false;
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    for depth in 1..=max_depth {
        if frontier.is_empty() {
            break;
        }
        let level: Vec<usize> = frontier.drain(..).collect();
        let results: Vec<Result<Expansion, MoveError>> = match &pool {
            Some(p) => p.install(|| level.par_iter().map(|&i| expand(&nodes[i].graph, dedup)).collect()),
            None => level.iter().map(|&i| expand(&nodes[i].graph, dedup)).collect(),
        };
        for (&from, result) in level.iter().zip(results) {
            for (edge, key, g) in result? {
                let to = match index.get(&key) {
                    Some(&t) => t,
                    None if nodes.len() < max_nodes => {
                        let t = nodes.len();
                        index.insert(key.clone(), t);
                        nodes.push(OrbitNode { key, depth, graph: g });
                        frontier.push_back(t);
                        t
                    }
                    None => {
                        truncated = true;
                        continue;
                    }
                };
                moves.push(OrbitMove { from, edge, to });
            }
        }
    }
    Ok(Orbit { nodes, moves, truncated })
}
