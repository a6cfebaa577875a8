use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use brauer_core::dot::{graph_to_dot, quiver_to_dot};
use brauer_core::invariants::{char_poly, derived_obstruction, det_exact, inertia};
use brauer_core::moves::{kauer_move, kauer_orbit, Dedup};
use brauer_core::quiver::{brauer_quiver, brauer_relations, cartan_closed_form};
use brauer_core::tilting::build_tilting;
use brauer_core::{DualTree, IntMatrix, MAngulation, RibbonGraph};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "brauer", version, about = "Brauer graphs, their moves and Cartan invariants")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum DedupArg {
    Iso,
    Labeled,
}

#[derive(Subcommand)]
enum Verb {
    /// Report every violated invariant of a graph file
    Validate { input: String },
    /// Faces of a ribbon graph
    Faces { input: String },
    /// Euler characteristic, genus and boundary count
    Surface { input: String },
    /// Quiver of the Brauer graph algebra
    Quiver { input: String },
    /// Relations of types I, II and III
    Relations { input: String },
    /// Cartan matrix
    Cartan { input: String },
    /// Kauer move at an edge
    Kauer {
        input: String,
        #[arg(long)]
        edge: String,
    },
    /// Flip a diagonal of a triangulation
    Flip {
        input: String,
        #[arg(long)]
        arc: String,
    },
    /// Mutate a diagonal of an m-angulation
    Mutate {
        input: String,
        #[arg(long)]
        arc: String,
        /// Expected value of m
        #[arg(long)]
        m: Option<usize>,
    },
    /// Dual tree of an m-angulation
    DualTree {
        input: String,
        /// Drop the leaves
        #[arg(long)]
        strip: bool,
    },
    /// Dual Kauer move on a tree
    DualKauer {
        input: String,
        #[arg(long)]
        edge: String,
    },
    /// Two-term tilting complex at an internal edge of a Brauer tree
    Tilting {
        input: String,
        #[arg(long)]
        edge: String,
    },
    /// Characteristic polynomial, determinant and inertia
    Invariants { input: String },
    /// Compare two matrices or graphs
    Compare { left: String, right: String },
    /// Breadth-first orbit under Kauer moves
    Orbit {
        input: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 1000)]
        max_nodes: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "iso")]
        dedup: DedupArg,
    },
}

enum Failure {
    Parse(String),
    Domain(String, String),
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn domain<E: std::fmt::Display>(kind: &str) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Domain(kind.to_string(), e.to_string())
}

fn read(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Parse(e.to_string()))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))
    }
}

fn read_graph(path: &str) -> Result<RibbonGraph, Failure> {
    match read_any(path)? {
        Input::Graph(g) => Ok(g),
        Input::Matrix(_) => Err(Failure::Parse(format!("{path}: expected a graph or an m-angulation"))),
    }
}

fn read_angulation(path: &str) -> Result<MAngulation, Failure> {
    MAngulation::from_json(&read(path)?).map_err(|e| Failure::Parse(format!("{path}: {e}")))
}

enum Input {
    Graph(RibbonGraph),
    Matrix(IntMatrix),
}

/// A graph, an m-angulation (read as its ribbon graph) or a matrix.
fn read_any(path: &str) -> Result<Input, Failure> {
    let text = read(path)?;
    if let Ok(v) = serde_json::from_str::<Value>(&text) {
        if v.get("vertices").is_some() {
            return RibbonGraph::from_json(&text)
                .map(Input::Graph)
                .map_err(|e| Failure::Parse(format!("{path}: {e}")));
        }
        if v.get("diagonals").is_some() {
            let t = MAngulation::from_json(&text).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
            t.validate().map_err(domain("invalid_angulation"))?;
            return Ok(Input::Graph(t.to_ribbon()));
        }
    }
    IntMatrix::parse(&text).map(Input::Matrix).map_err(|e| Failure::Parse(format!("{path}: {e}")))
}

fn graph_output(g: &RibbonGraph, format: Format) -> Outcome {
    match format {
        Format::Dot => graph_to_dot(g).map(Output::Text).map_err(domain("graph")),
        _ => Ok(Output::Json(serde_json::to_value(g).unwrap())),
    }
}

fn matrix_output(m: &IntMatrix, format: Format) -> Output {
    match format {
        Format::Text => Output::Text(m.to_string()),
        _ => Output::Json(m.to_json()),
    }
}

fn cartan_of(input: Input) -> Result<IntMatrix, Failure> {
    match input {
        Input::Graph(g) => cartan_closed_form(&g).map_err(domain("graph")),
        Input::Matrix(m) => Ok(m),
    }
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.verb {
        Verb::Validate { input } => {
            let g = read_graph(&input)?;
            let violations: Vec<String> = g.validate().iter().map(|v| v.to_string()).collect();
            if violations.is_empty() {
                Ok(Output::Json(json!({ "valid": true, "violations": [] })))
            } else {
                Err(Failure::Domain("invalid_graph".into(), violations.join("; ")))
            }
        }
        Verb::Faces { input } => {
            let faces = read_graph(&input)?.faces().map_err(domain("graph"))?;
            Ok(match format {
                Format::Text => Output::Text(faces.iter().map(|f| f.cycle.join(" ")).collect::<Vec<_>>().join("\n")),
                _ => Output::Json(json!(faces.iter().map(|f| &f.cycle).collect::<Vec<_>>())),
            })
        }
        Verb::Surface { input } => {
            let g = read_graph(&input)?;
            let s = g.surface_invariants().map_err(domain("graph"))?;
            let (_, boundary) = g.with_boundary(&g.boundary_faces).map_err(domain("boundary"))?;
            Ok(match format {
                Format::Text => Output::Text(format!(
                    "V={} E={} F={} chi={} genus={} boundary={}",
                    s.vertices, s.edges, s.faces, s.euler_characteristic, s.genus, boundary
                )),
                _ => {
                    let mut v = serde_json::to_value(s).unwrap();
                    v["boundary_components"] = json!(boundary);
                    Output::Json(v)
                }
            })
        }
        Verb::Quiver { input } => {
            let q = brauer_quiver(&read_graph(&input)?).map_err(domain("graph"))?;
            Ok(match format {
                Format::Dot => Output::Text(quiver_to_dot(&q)),
                _ => Output::Json(serde_json::to_value(q).unwrap()),
            })
        }
        Verb::Relations { input } => {
            let r = brauer_relations(&read_graph(&input)?).map_err(domain("graph"))?;
            Ok(Output::Json(serde_json::to_value(r).unwrap()))
        }
        Verb::Cartan { input } => {
            let c = cartan_closed_form(&read_graph(&input)?).map_err(domain("graph"))?;
            Ok(matrix_output(&c, format))
        }
        Verb::Kauer { input, edge } => {
            let g = kauer_move(&read_graph(&input)?, &edge).map_err(domain("move"))?;
            graph_output(&g, format)
        }
        Verb::Flip { input, arc } => {
            let t = read_angulation(&input)?.flip(&arc).map_err(domain("move"))?;
            Ok(Output::Json(serde_json::to_value(t).unwrap()))
        }
        Verb::Mutate { input, arc, m } => {
            let t = read_angulation(&input)?;
            if let Some(m) = m {
                if m != t.m {
                    return Err(Failure::Domain("move".into(), format!("input has m = {}, not {m}", t.m)));
                }
            }
            let u = t.mutate_m(&arc).map_err(domain("move"))?;
            Ok(Output::Json(serde_json::to_value(u).unwrap()))
        }
        Verb::DualTree { input, strip } => {
            let tree = read_angulation(&input)?.dual_tree().map_err(domain("move"))?;
            let g = if strip { tree.strip_leaves().map_err(domain("move"))? } else { tree.graph };
            graph_output(&g, format)
        }
        Verb::DualKauer { input, edge } => {
            let tree = DualTree::new(read_graph(&input)?).map_err(domain("move"))?;
            let out = tree.dual_kauer(&edge).map_err(domain("move"))?;
            graph_output(&out.graph, format)
        }
        Verb::Tilting { input, edge } => {
            let g = read_graph(&input)?;
            let t = build_tilting(&g, &edge).map_err(domain("tilting"))?;
            let report = t.verify();
            let end = t.end_cartan();
            let moved = DualTree::new(g).and_then(|tree| tree.dual_kauer(&edge)).map_err(domain("move"))?;
            let expected = cartan_closed_form(&moved.graph).map_err(domain("graph"))?;
            let witnesses = t.loop_witnesses().map_err(domain("tilting"))?;
            Ok(Output::Json(json!({
                "complex": { "summands": t.summands, "subtrees": t.subtrees },
                "report": report,
                "end_cartan": end.to_json(),
                "moved_cartan": expected.to_json(),
                "end_cartan_matches": end == expected,
                "loop_witness_failures": witnesses,
            })))
        }
        Verb::Invariants { input } => {
            let m = cartan_of(read_any(&input)?)?;
            let i = inertia(&m).map_err(domain("matrix"))?;
            let p = char_poly(&m);
            let d = det_exact(&m);
            Ok(match format {
                Format::Text => Output::Text(format!(
                    "char_poly: {p}\ndet: {d}\ninertia: n_plus={} n_minus={} n_zero={}",
                    i.n_plus, i.n_minus, i.n_zero
                )),
                _ => Output::Json(json!({
                    "size": m.size(),
                    "char_poly": p.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "char_poly_text": p.to_string(),
                    "det": d.to_string(),
                    "inertia": i,
                })),
            })
        }
        Verb::Compare { left, right } => {
            let (a, b) = (read_any(&left)?, read_any(&right)?);
            let isomorphic = match (&a, &b) {
                (Input::Graph(x), Input::Graph(y)) => Some(x.is_isomorphic(y).map_err(domain("graph"))?),
                _ => None,
            };
            let verdict = derived_obstruction(&cartan_of(a)?, &cartan_of(b)?).map_err(domain("matrix"))?;
            let mut v = serde_json::to_value(&verdict).unwrap();
            if let Some(iso) = isomorphic {
                v["isomorphic"] = json!(iso);
            }
            Ok(match format {
                Format::Text => Output::Text(match &verdict {
                    brauer_core::Verdict::NotDerivedEquivalent { witness } => {
                        format!("NotDerivedEquivalent: {witness}")
                    }
                    brauer_core::Verdict::Inconclusive => "Inconclusive".into(),
                }),
                _ => Output::Json(v),
            })
        }
        Verb::Orbit { input, depth, max_nodes, workers, dedup } => {
            let dedup = match dedup {
                DedupArg::Iso => Dedup::Isomorphism,
                DedupArg::Labeled => Dedup::Labeled,
            };
            let o = kauer_orbit(&read_graph(&input)?, depth, max_nodes, dedup, workers).map_err(domain("orbit"))?;
            Ok(Output::Json(serde_json::to_value(o).unwrap()))
        }
    }
}

fn emit(mut s: String) -> ExitCode {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    // a closed pipe downstream is not an error of ours
    let _ = io::stdout().write_all(s.as_bytes());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Output::Json(v)) => emit(serde_json::to_string_pretty(&v).unwrap()),
        Ok(Output::Text(s)) => emit(s),
        Err(Failure::Domain(kind, message)) => {
            eprintln!("{}", json!({ "error": kind, "message": message }));
            ExitCode::from(1)
        }
        Err(Failure::Parse(message)) => {
            eprintln!("{}", json!({ "error": "parse", "message": message }));
            ExitCode::from(2)
        }
    }
}
