//! Quiver with relations of a Brauer graph algebra.
//!
//! Quiver vertices are the edges of the Brauer graph. Every half-edge `h` at a
//! vertex `X` with `val(X)·m(X) ≥ 2` emits one arrow from the edge of `h` to
//! the edge of its clockwise successor. A leaf of multiplicity one emits no
//! arrow. The graph consisting of a single edge between two such leaves is the
//! exceptional case with one loop `α` and `α² = 0`.
//!
//! Paths are lists of arrow ids in traversal order: `[α, β]` means `α` first.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::invariants::IntMatrix;
use crate::ribbon::{Darts, GraphError, RibbonGraph};

pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Brauer graph vertex whose rotation produced the arrow.
    pub vertex: String,
    /// Position of the arrow's source half-edge in that rotation.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    /// Vertex labels; for a Brauer quiver these are the graph's edge ids.
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("vertex {0} carries a loop")]
    Loop(String),
    #[error("vertex {0} lies on a 2-cycle")]
    TwoCycle(String),
    #[error("no vertex {0}")]
    UnknownVertex(String),
}

impl Quiver {
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Number of arrows `i → j`, indexed `[i][j]`.
    pub fn count_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut c = vec![vec![0; n]; n];
        for a in &self.arrows {
            c[a.source][a.target] += 1;
        }
        c
    }

    /// Arrow multiplicities keyed by vertex labels; equal maps mean equal
    /// quivers up to renaming arrows.
    pub fn labeled_arrow_counts(&self) -> BTreeMap<(String, String), usize> {
        let mut out = BTreeMap::new();
        for a in &self.arrows {
            *out.entry((self.vertices[a.source].clone(), self.vertices[a.target].clone())).or_insert(0) += 1;
        }
        out
    }

    fn from_counts(vertices: Vec<String>, counts: &[Vec<usize>]) -> Quiver {
        let mut arrows = Vec::new();
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                for _ in 0..c {
                    arrows.push(Arrow { id: arrows.len(), source: i, target: j, witness: None });
                }
            }
        }
        Quiver { vertices, arrows }
    }

    /// Full subquiver on the given vertices, in the given order.
    pub fn full_subquiver(&self, keep: &[usize]) -> Quiver {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut arrows = Vec::new();
        for a in &self.arrows {
            if let (Some(&s), Some(&t)) = (pos.get(&a.source), pos.get(&a.target)) {
                arrows.push(Arrow { id: arrows.len(), source: s, target: t, witness: a.witness.clone() });
            }
        }
        Quiver { vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(), arrows }
    }

    /// Fomin–Zelevinsky mutation at vertex `k`: add a composite arrow `i → j`
    /// for each path `i → k → j`, reverse the arrows at `k`, then cancel the
    /// 2-cycles created between such `i` and `j`.
    pub fn fz_mutation(&self, k: usize) -> Result<Quiver, QuiverError> {
        let c = self.count_matrix();
        let label = || self.vertices[k].clone();
        if c[k][k] > 0 {
            return Err(QuiverError::Loop(label()));
        }
        let n = self.vertices.len();
        if (0..n).any(|i| c[i][k] > 0 && c[k][i] > 0) {
            return Err(QuiverError::TwoCycle(label()));
        }
        let mut out = c.clone();
        for i in 0..n {
            for j in 0..n {
                if i != k && j != k && c[i][k] > 0 && c[k][j] > 0 {
                    out[i][j] += c[i][k] * c[k][j];
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let touched = c[i][k] * c[k][j] + c[j][k] * c[k][i] > 0;
                if touched && i != k && j != k {
                    let cancel = out[i][j].min(out[j][i]);
                    out[i][j] -= cancel;
                    out[j][i] -= cancel;
                }
            }
        }
        for i in 0..n {
            if i != k {
                out[i][k] = c[k][i];
                out[k][i] = c[i][k];
            }
        }
        Ok(Quiver::from_counts(self.vertices.clone(), &out))
    }

    pub fn fz_mutation_at(&self, label: &str) -> Result<Quiver, QuiverError> {
        let k = self.vertex_index(label).ok_or_else(|| QuiverError::UnknownVertex(label.into()))?;
        self.fz_mutation(k)
    }
}

/// Quiver of a Brauer graph plus the bookkeeping that ties arrows back to
/// half-edges.
#[derive(Debug, Clone)]
pub struct BrauerQuiver {
    pub quiver: Quiver,
    /// Arrow emitted by each half-edge, if any.
    pub arrow_of_dart: Vec<Option<usize>>,
    /// Arrow that follows each arrow around its cycle; `None` for the loop of
    /// the exceptional single-edge case.
    pub successor: Vec<Option<usize>>,
    /// `val(X)·m(X)` for the vertex of each half-edge.
    pub cycle_length: Vec<usize>,
    pub darts: Darts,
}

impl BrauerQuiver {
    pub fn new(graph: &RibbonGraph) -> Result<Self, GraphError> {
        let darts = graph.darts()?;
        let cycle_length: Vec<usize> = (0..darts.len())
            .map(|h| {
                let v = &graph.vertices[darts.vertex[h]];
                v.rotation.len() * v.multiplicity as usize
            })
            .collect();
        let mut arrows = Vec::new();
        let mut arrow_of_dart = vec![None; darts.len()];
        for h in 0..darts.len() {
            let exceptional = cycle_length[h] == 1 && cycle_length[darts.partner[h]] == 1;
            if cycle_length[h] >= 2 || (exceptional && h < darts.partner[h]) {
                let target = if exceptional { darts.edge[h] } else { darts.edge[darts.next[h]] };
                arrow_of_dart[h] = Some(arrows.len());
                arrows.push(Arrow {
                    id: arrows.len(),
                    source: darts.edge[h],
                    target,
                    witness: Some(Witness {
                        vertex: graph.vertices[darts.vertex[h]].id.clone(),
                        position: darts.position[h],
                    }),
                });
            }
        }
        let successor = (0..arrows.len())
            .map(|a| {
                let h = arrow_of_dart.iter().position(|&x| x == Some(a)).unwrap();
                if cycle_length[h] >= 2 {
                    arrow_of_dart[darts.next[h]]
                } else {
                    None
                }
            })
            .collect();
        let quiver = Quiver { vertices: graph.edges.iter().map(|e| e.id.clone()).collect(), arrows };
        Ok(BrauerQuiver { quiver, arrow_of_dart, successor, cycle_length, darts })
    }

    /// The cycle `C_{a,X}^{m(X)}` starting at half-edge `h`.
    pub fn cycle_power(&self, h: usize) -> Path {
        let mut path = Vec::with_capacity(self.cycle_length[h]);
        let mut a = self.arrow_of_dart[h].expect("half-edge emits an arrow");
        for _ in 0..self.cycle_length[h] {
            path.push(a);
            a = self.successor[a].expect("cycle arrows have successors");
        }
        path
    }

    pub fn relations(&self) -> RelationSet {
        let d = &self.darts;
        let mut rel = RelationSet::default();
        let mut done = vec![false; d.len()];
        for h in 0..d.len() {
            if done[h] {
                continue;
            }
            let g = d.partner[h];
            done[h] = true;
            done[g] = true;
            match (self.cycle_length[h] >= 2, self.cycle_length[g] >= 2) {
                (true, true) => rel.type_one.push((self.cycle_power(h), self.cycle_power(g))),
                (true, false) | (false, true) => {
                    let long = if self.cycle_length[h] >= 2 { h } else { g };
                    let mut p = self.cycle_power(long);
                    p.push(self.arrow_of_dart[long].unwrap());
                    rel.type_two.push(p);
                }
                (false, false) => {}
            }
        }
        for a in &self.quiver.arrows {
            for b in &self.quiver.arrows {
                if a.target == b.source && self.successor[a.id] != Some(b.id) {
                    rel.type_three.push(vec![a.id, b.id]);
                }
            }
        }
        rel
    }
}

/// Generators of the ideal `I_Γ`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RelationSet {
    /// Pairs `(C_{a,X}^{m(X)}, C_{a,Y}^{m(Y)})` whose difference is a relation.
    pub type_one: Vec<(Path, Path)>,
    /// Paths `α₁·C_{a,X}^{m(X)}` at edges ending in a leaf of multiplicity one.
    pub type_two: Vec<Path>,
    /// Length-2 paths that do not continue a cycle; in the single-edge case
    /// this is `α²`.
    pub type_three: Vec<Path>,
}

pub fn brauer_quiver(graph: &RibbonGraph) -> Result<Quiver, GraphError> {
    Ok(BrauerQuiver::new(graph)?.quiver)
}

pub fn brauer_relations(graph: &RibbonGraph) -> Result<RelationSet, GraphError> {
    Ok(BrauerQuiver::new(graph)?.relations())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisPath {
    pub source: usize,
    pub target: usize,
    pub arrows: Path,
}

/// Monomial basis of `KQ/I` computed directly from the quiver and the
/// relations.
///
/// Paths avoiding every monomial relation (types II and III) are enumerated up
/// to a length beyond the Loewy length. Type I relations identify pairs of
/// such paths after multiplying on both sides; because every generator of the
/// ideal is then a difference of two paths or a single path, the quotient is
/// spanned by the classes of a union-find structure, minus the class of zero.
#[derive(Debug, Clone)]
pub struct PathBasis {
    pub vertex_count: usize,
    pub elements: Vec<BasisPath>,
    class_of: HashMap<(usize, Path), Option<usize>>,
    arrow_ends: Vec<(usize, usize)>,
}

impl PathBasis {
    pub fn new(quiver: &Quiver, relations: &RelationSet) -> PathBasis {
        let n = quiver.vertices.len();
        let arrows = &quiver.arrows;
        let mut forbidden_pairs = std::collections::HashSet::new();
        for p in &relations.type_three {
            forbidden_pairs.insert((p[0], p[1]));
        }
        let longest = relations
            .type_one
            .iter()
            .flat_map(|(p, q)| [p.len(), q.len()])
            .chain(relations.type_two.iter().map(|p| p.len()))
            .max()
            .unwrap_or(1);
        // every path of this length lies in the ideal
        let bound = longest + 2;

        let ends_with_type_two =
            |p: &Path| relations.type_two.iter().any(|r| p.len() >= r.len() && p.ends_with(r));
        let mut paths: Vec<(usize, Path)> = (0..n).map(|v| (v, Vec::new())).collect();
        let mut frontier: Vec<(usize, Path)> = paths.clone();
        for _ in 1..bound {
            let mut next = Vec::new();
            for (s, p) in &frontier {
                let end = p.last().map_or(*s, |&a| arrows[a].target);
                for a in arrows.iter().filter(|a| a.source == end) {
                    if let Some(&last) = p.last() {
                        if forbidden_pairs.contains(&(last, a.id)) {
                            continue;
                        }
                    }
                    let mut q = p.clone();
                    q.push(a.id);
                    if ends_with_type_two(&q) {
                        continue;
                    }
                    next.push((*s, q));
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }

        let index: HashMap<(usize, Path), usize> =
            paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let zero = paths.len();
        let mut parent: Vec<usize> = (0..=zero).collect();
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
        let target_of = |(s, p): &(usize, Path)| p.last().map_or(*s, |&a| arrows[a].target);
        let node = |s: usize, p: Path| index.get(&(s, p)).copied().unwrap_or(zero);
        for (left, right) in &relations.type_one {
            let a = arrows[left[0]].source;
            let before: Vec<&(usize, Path)> = paths.iter().filter(|x| target_of(x) == a).collect();
            let after: Vec<&Path> = paths.iter().filter(|(s, _)| *s == a).map(|(_, p)| p).collect();
            let shortest = left.len().min(right.len());
            for (s, w) in &before {
                for u in &after {
                    if w.len() + u.len() + shortest >= bound {
                        continue;
                    }
                    let x = node(*s, [w.as_slice(), left, u].concat());
                    let y = node(*s, [w.as_slice(), right, u].concat());
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    if rx != ry {
                        // keep the zero node as a root so its class is easy to spot
                        if ry == zero {
                            parent[rx] = ry;
                        } else {
                            parent[ry] = rx;
                        }
                    }
                }
            }
        }

        let zero_root = find(&mut parent, zero);
        let mut representative: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order: Vec<usize> = (0..paths.len()).collect();
        order.sort_by(|&x, &y| {
            let (px, py) = (&paths[x], &paths[y]);
            (px.1.len(), px.0, &px.1).cmp(&(py.1.len(), py.0, &py.1))
        });
        let mut elements = Vec::new();
        let mut class_of = HashMap::new();
        for &i in &order {
            let root = find(&mut parent, i);
            let class = if root == zero_root {
                None
            } else {
                Some(*representative.entry(root).or_insert_with(|| {
                    let (s, p) = &paths[i];
                    elements.push(BasisPath { source: *s, target: target_of(&paths[i]), arrows: p.clone() });
                    elements.len() - 1
                }))
            };
            class_of.insert(paths[i].clone(), class);
        }
        PathBasis {
            vertex_count: n,
            elements,
            class_of,
            arrow_ends: arrows.iter().map(|a| (a.source, a.target)).collect(),
        }
    }

    pub fn of_graph(graph: &RibbonGraph) -> Result<PathBasis, GraphError> {
        let bq = BrauerQuiver::new(graph)?;
        Ok(PathBasis::new(&bq.quiver, &bq.relations()))
    }

    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Basis elements that are paths from `source` to `target`.
    pub fn between(&self, source: usize, target: usize) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| self.elements[i].source == source && self.elements[i].target == target)
            .collect()
    }

    pub fn trivial(&self, vertex: usize) -> usize {
        self.class_of[&(vertex, Vec::new())].expect("idempotents are nonzero")
    }

    /// Basis element equal to the path, or `None` when the path is zero.
    pub fn reduce(&self, source: usize, path: &[usize]) -> Option<usize> {
        if let Some(&first) = path.first() {
            if self.arrow_ends[first].0 != source {
                return None;
            }
        }
        self.class_of.get(&(source, path.to_vec())).copied().flatten()
    }

    /// Product of two basis elements: traverse `first`, then `second`.
    pub fn multiply(&self, first: usize, second: usize) -> Option<usize> {
        let (x, y) = (&self.elements[first], &self.elements[second]);
        if x.target != y.source {
            return None;
        }
        self.reduce(x.source, &[x.arrows.as_slice(), &y.arrows].concat())
    }

    /// `C[i][j]` = number of basis paths from `i` to `j`.
    pub fn cartan(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count;
        let mut c = vec![vec![0u64; n]; n];
        for e in &self.elements {
            c[e.source][e.target] += 1;
        }
        c
    }
}

pub fn algebra_basis(graph: &RibbonGraph) -> Result<PathBasis, GraphError> {
    PathBasis::of_graph(graph)
}

fn to_matrix(graph: &RibbonGraph, c: Vec<Vec<u64>>) -> IntMatrix {
    let rows = c.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    IntMatrix::new(rows).expect("square").with_labels(graph.edges.iter().map(|e| e.id.clone()).collect())
}

/// Cartan matrix counted from the basis oracle.
pub fn cartan_from_basis(graph: &RibbonGraph, basis: &PathBasis) -> IntMatrix {
    to_matrix(graph, basis.cartan())
}

/// `C_ij = Σ_v m(v)·occ_i(v)·occ_j(v)`.
pub fn cartan_closed_form(graph: &RibbonGraph) -> Result<IntMatrix, GraphError> {
    let occ = graph.incidence()?;
    let n = graph.edges.len();
    let mut c = vec![vec![0u64; n]; n];
    for (v, row) in graph.vertices.iter().zip(&occ) {
        let m = v.multiplicity as u64;
        for i in 0..n {
            for j in 0..n {
                c[i][j] += m * row[i] * row[j];
            }
        }
    }
    Ok(to_matrix(graph, c))
}
