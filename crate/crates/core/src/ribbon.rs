//! Ribbon graphs with vertex multiplicities.
//!
//! A graph is stored as a set of half-edges: every edge owns two half-edges
//! (the involution `h ↦ h̄`) and every vertex owns a clockwise cyclic list of
//! the half-edges starting at it. A Brauer graph is exactly such a ribbon graph
//! with a positive multiplicity on each vertex.
//!
//! Most operations work on a [`Darts`] view, an index-based copy of the graph
//! built after validation.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub multiplicity: u32,
    /// Half-edges leaving this vertex, in clockwise order.
    pub rotation: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub halves: [String; 2],
}

/// A Brauer graph: ribbon graph plus multiplicities, optionally with a set of
/// faces marked as boundary components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary_faces: Vec<Vec<String>>,
}

/// A broken structural invariant reported by [`RibbonGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum Violation {
    NoEdges,
    DuplicateVertex(String),
    DuplicateEdge(String),
    ZeroMultiplicity(String),
    IsolatedVertex(String),
    HalfEdgeReused(String),
    HalfEdgeNotPlaced(String),
    HalfEdgeWithoutEdge(String),
    HalfEdgeInTwoEdges(String),
    EdgeHalvesEqual(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoEdges => write!(f, "a Brauer graph needs at least one edge"),
            Violation::DuplicateVertex(v) => write!(f, "vertex id {v} used twice"),
            Violation::DuplicateEdge(e) => write!(f, "edge id {e} used twice"),
            Violation::ZeroMultiplicity(v) => write!(f, "vertex {v} has multiplicity 0"),
            Violation::IsolatedVertex(v) => write!(f, "vertex {v} has an empty rotation"),
            Violation::HalfEdgeReused(h) => write!(f, "half-edge reused: {h}"),
            Violation::HalfEdgeNotPlaced(h) => {
                write!(f, "half-edge {h} belongs to an edge but to no rotation")
            }
            Violation::HalfEdgeWithoutEdge(h) => {
                write!(f, "half-edge {h} appears in a rotation but in no edge")
            }
            Violation::HalfEdgeInTwoEdges(h) => write!(f, "half-edge {h} belongs to two edges"),
            Violation::EdgeHalvesEqual(e) => write!(f, "edge {e} pairs a half-edge with itself"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid ribbon graph: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("boundary face {0:?} is not a face of the graph")]
    NotAFace(Vec<String>),
    #[error("edge {0} has both half-edges on boundary faces")]
    BoundaryOnBothSides(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Index-based view of a validated graph. Half-edges are numbered in the
/// order they appear in the vertex rotations.
#[derive(Debug, Clone)]
pub struct Darts {
    pub names: Vec<String>,
    pub index: HashMap<String, usize>,
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
    pub partner: Vec<usize>,
    pub next: Vec<usize>,
    pub prev: Vec<usize>,
    /// Position of each half-edge within its vertex rotation.
    pub position: Vec<usize>,
    pub edge_index: HashMap<String, usize>,
}

impl Darts {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Face permutation `h ↦ s_{h⁺}(h̄)`.
    pub fn face_step(&self, h: usize) -> usize {
        self.next[self.partner[h]]
    }
}

/// A face, stored starting from its lexicographically least half-edge id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Face {
    pub cycle: Vec<String>,
}

impl Face {
    /// Rotates an arbitrary cyclic listing into canonical position.
    pub fn from_cycle(cycle: &[String]) -> Face {
        if cycle.is_empty() {
            return Face { cycle: Vec::new() };
        }
        let start = (0..cycle.len()).min_by(|&a, &b| cycle[a].cmp(&cycle[b])).unwrap();
        let mut out = cycle[start..].to_vec();
        out.extend_from_slice(&cycle[..start]);
        Face { cycle: out }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub genus: i64,
}

/// Canonical code of a connected ribbon graph together with the relabeling
/// of half-edges that realises it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub code: Vec<u64>,
    pub relabeling: BTreeMap<String, usize>,
}

impl RibbonGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        RibbonGraph { vertices, edges, boundary_faces: Vec::new() }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialises")
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Every violated structural invariant; empty when the graph is legal.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.edges.is_empty() {
            out.push(Violation::NoEdges);
        }
        let mut seen_vertices = BTreeSet::new();
        let mut placed: BTreeMap<&str, usize> = BTreeMap::new();
        for v in &self.vertices {
            if !seen_vertices.insert(v.id.as_str()) {
                out.push(Violation::DuplicateVertex(v.id.clone()));
            }
            if v.multiplicity == 0 {
                out.push(Violation::ZeroMultiplicity(v.id.clone()));
            }
            if v.rotation.is_empty() {
                out.push(Violation::IsolatedVertex(v.id.clone()));
            }
            for h in &v.rotation {
                let count = placed.entry(h.as_str()).or_insert(0);
                *count += 1;
                if *count == 2 {
                    out.push(Violation::HalfEdgeReused(h.clone()));
                }
            }
        }
        let mut seen_edges = BTreeSet::new();
        let mut owned: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.edges {
            if !seen_edges.insert(e.id.as_str()) {
                out.push(Violation::DuplicateEdge(e.id.clone()));
            }
            if e.halves[0] == e.halves[1] {
                out.push(Violation::EdgeHalvesEqual(e.id.clone()));
            }
            for h in &e.halves {
                let count = owned.entry(h.as_str()).or_insert(0);
                *count += 1;
                if *count == 2 {
                    out.push(Violation::HalfEdgeInTwoEdges(h.clone()));
                }
                if !placed.contains_key(h.as_str()) {
                    out.push(Violation::HalfEdgeNotPlaced(h.clone()));
                }
            }
        }
        for h in placed.keys() {
            if !owned.contains_key(h) {
                out.push(Violation::HalfEdgeWithoutEdge(h.to_string()));
            }
        }
        out
    }

    pub fn darts(&self) -> Result<Darts, GraphError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let mut names = Vec::new();
        let mut vertex = Vec::new();
        let mut position = Vec::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            for (p, h) in v.rotation.iter().enumerate() {
                names.push(h.clone());
                vertex.push(vi);
                position.push(p);
            }
        }
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, h)| (h.clone(), i)).collect();
        let n = names.len();
        let mut next = vec![0; n];
        let mut prev = vec![0; n];
        let mut offset = 0;
        for v in &self.vertices {
            let k = v.rotation.len();
            for p in 0..k {
                next[offset + p] = offset + (p + 1) % k;
                prev[offset + p] = offset + (p + k - 1) % k;
            }
            offset += k;
        }
        let mut partner = vec![0; n];
        let mut edge = vec![0; n];
        let mut edge_index = HashMap::new();
        for (ei, e) in self.edges.iter().enumerate() {
            let a = index[&e.halves[0]];
            let b = index[&e.halves[1]];
            partner[a] = b;
            partner[b] = a;
            edge[a] = ei;
            edge[b] = ei;
            edge_index.insert(e.id.clone(), ei);
        }
        Ok(Darts { names, index, vertex, edge, partner, next, prev, position, edge_index })
    }

    /// Valency of each vertex, in vertex order; a loop counts twice.
    pub fn valencies(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.rotation.len()).collect()
    }

    pub fn is_connected(&self) -> Result<bool, GraphError> {
        let d = self.darts()?;
        Ok(component_count(&d, self.vertices.len()) == 1)
    }

    pub fn faces(&self) -> Result<Vec<Face>, GraphError> {
        let d = self.darts()?;
        Ok(faces_of(&d))
    }

    pub fn surface_invariants(&self) -> Result<SurfaceInvariants, GraphError> {
        let d = self.darts()?;
        if component_count(&d, self.vertices.len()) != 1 {
            return Err(GraphError::Disconnected);
        }
        let v = self.vertices.len();
        let e = self.edges.len();
        let f = faces_of(&d).len();
        let chi = v as i64 - e as i64 + f as i64;
        debug_assert_eq!(chi % 2, 0, "connected orientable surface has even χ");
        Ok(SurfaceInvariants {
            vertices: v,
            edges: e,
            faces: f,
            euler_characteristic: chi,
            genus: (2 - chi) / 2,
        })
    }

    /// Genus of the closed surface and number of boundary components after
    /// removing the discs of the marked faces.
    pub fn with_boundary(&self, marking: &[Vec<String>]) -> Result<(i64, usize), GraphError> {
        let inv = self.surface_invariants()?;
        let marked = self.resolve_boundary(marking)?;
        Ok((inv.genus, marked.len()))
    }

    /// Checks a boundary marking against the faces and returns the marked
    /// faces in canonical form.
    pub fn resolve_boundary(&self, marking: &[Vec<String>]) -> Result<Vec<Face>, GraphError> {
        let faces: BTreeSet<Face> = self.faces()?.into_iter().collect();
        let mut marked = BTreeSet::new();
        for cycle in marking {
            let face = Face::from_cycle(cycle);
            if !faces.contains(&face) {
                return Err(GraphError::NotAFace(cycle.clone()));
            }
            marked.insert(face);
        }
        let on_boundary: BTreeSet<&str> =
            marked.iter().flat_map(|f| f.cycle.iter().map(String::as_str)).collect();
        for e in &self.edges {
            if on_boundary.contains(e.halves[0].as_str()) && on_boundary.contains(e.halves[1].as_str())
            {
                return Err(GraphError::BoundaryOnBothSides(e.id.clone()));
            }
        }
        Ok(marked.into_iter().collect())
    }

    /// Edges with a half-edge on a boundary face.
    pub fn boundary_edges(&self) -> Result<BTreeSet<String>, GraphError> {
        let marked = self.resolve_boundary(&self.boundary_faces)?;
        let d = self.darts()?;
        Ok(marked
            .iter()
            .flat_map(|f| f.cycle.iter())
            .map(|h| self.edges[d.edge[d.index[h]]].id.clone())
            .collect())
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm, GraphError> {
        let mult: Vec<u64> = self.vertices.iter().map(|v| v.multiplicity as u64).collect();
        self.minimal_code(&mult)
    }

    fn minimal_code(&self, vertex_key: &[u64]) -> Result<CanonicalForm, GraphError> {
        let d = self.darts()?;
        if component_count(&d, self.vertices.len()) != 1 {
            return Err(GraphError::Disconnected);
        }
        let boundary: BTreeSet<usize> = self
            .resolve_boundary(&self.boundary_faces)?
            .iter()
            .flat_map(|f| f.cycle.iter().map(|h| d.index[h]))
            .collect();
        let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
        for start in 0..d.len() {
            let (code, labels) = traversal_code(&d, start, vertex_key, &boundary);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                best = Some((code, labels));
            }
        }
        let (code, labels) = best.expect("graph has half-edges");
        let relabeling = d.names.iter().cloned().zip(labels).collect();
        Ok(CanonicalForm { code, relabeling })
    }

    pub fn is_isomorphic(&self, other: &RibbonGraph) -> Result<bool, GraphError> {
        Ok(self.canonical_form()?.code == other.canonical_form()?.code)
    }

    /// Key that identifies the graph up to renaming of edges and half-edges
    /// while keeping vertex ids fixed.
    pub fn labeled_key(&self) -> Result<String, GraphError> {
        let mut ids: Vec<&str> = self.vertices.iter().map(|v| v.id.as_str()).collect();
        ids.sort();
        let key: Vec<u64> = self
            .vertices
            .iter()
            .map(|v| ((ids.binary_search(&v.id.as_str()).unwrap() as u64) << 32) | v.multiplicity as u64)
            .collect();
        let code = self.minimal_code(&key)?.code;
        let names: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        Ok(format!("{}|{:?}", names.join(","), code))
    }

    /// Number of incidences of every edge at every vertex (a loop counts twice),
    /// indexed `[vertex][edge]`.
    pub fn incidence(&self) -> Result<Vec<Vec<u64>>, GraphError> {
        let d = self.darts()?;
        let mut occ = vec![vec![0u64; self.edges.len()]; self.vertices.len()];
        for h in 0..d.len() {
            occ[d.vertex[h]][d.edge[h]] += 1;
        }
        Ok(occ)
    }
}

pub(crate) fn faces_of(d: &Darts) -> Vec<Face> {
    let mut seen = vec![false; d.len()];
    let mut faces = Vec::new();
    for start in 0..d.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cycle.push(d.names[h].clone());
            h = d.face_step(h);
        }
        faces.push(Face::from_cycle(&cycle));
    }
    faces.sort();
    faces
}

fn component_count(d: &Darts, vertex_count: usize) -> usize {
    let mut parent: Vec<usize> = (0..vertex_count).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let mut components = vertex_count;
    for h in 0..d.len() {
        let a = find(&mut parent, d.vertex[h]);
        let b = find(&mut parent, d.vertex[d.partner[h]]);
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

/// Breadth-first labelling from `start` following partner then rotation
/// successor; the code lists, in label order, the labels of partner and
/// successor, the vertex multiplicity and the boundary flag.
fn traversal_code(
    d: &Darts,
    start: usize,
    mult: &[u64],
    boundary: &BTreeSet<usize>,
) -> (Vec<u64>, Vec<usize>) {
    let n = d.len();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    label[start] = 0;
    order.push(start);
    queue.push_back(start);
    while let Some(h) = queue.pop_front() {
        for g in [d.partner[h], d.next[h]] {
            if label[g] == usize::MAX {
                label[g] = order.len();
                order.push(g);
                queue.push_back(g);
            }
        }
    }
    let mut code = Vec::with_capacity(4 * n);
    for &h in &order {
        code.push(label[d.partner[h]] as u64);
        code.push(label[d.next[h]] as u64);
        code.push(mult[d.vertex[h]]);
        code.push(boundary.contains(&h) as u64);
    }
    (code, label)
}

/// Half-edge naming used by generated graphs: side 0 and side 1 of `edge`.
pub fn half_edge_id(edge: &str, side: usize) -> String {
    format!("{edge}@{side}")
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn v(id: &str, m: u32, rotation: &[&str]) -> Vertex {
        Vertex {
            id: id.into(),
            multiplicity: m,
            rotation: rotation.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn e(id: &str, a: &str, b: &str) -> Edge {
        Edge { id: id.into(), halves: [a.into(), b.into()] }
    }

    pub fn single_edge(mx: u32, my: u32) -> RibbonGraph {
        RibbonGraph::new(vec![v("X", mx, &["h1"]), v("Y", my, &["h2"])], vec![e("a", "h1", "h2")])
    }

    /// Triangle with planar clockwise rotations.
    pub fn triangle() -> RibbonGraph {
        // edges a = X–Y, b = Y–Z, c = Z–X
        RibbonGraph::new(
            vec![v("X", 1, &["a0", "c1"]), v("Y", 1, &["b0", "a1"]), v("Z", 1, &["c0", "b1"])],
            vec![e("a", "a0", "a1"), e("b", "b0", "b1"), e("c", "c0", "c1")],
        )
    }

    pub fn two_loops() -> RibbonGraph {
        RibbonGraph::new(
            vec![v("X", 1, &["h1", "h2", "g1", "g2"])],
            vec![e("a", "h1", "g1"), e("b", "h2", "g2")],
        )
    }

    pub fn path3() -> RibbonGraph {
        RibbonGraph::new(
            vec![
                v("P", 1, &["a0"]),
                v("Q", 1, &["a1", "b0"]),
                v("R", 1, &["b1", "c0"]),
                v("S", 1, &["c1"]),
            ],
            vec![e("a", "a0", "a1"), e("b", "b0", "b1"), e("c", "c0", "c1")],
        )
    }
}
