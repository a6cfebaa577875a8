mod common;

use brauer_core::invariants::{char_poly, det_exact, inertia, IntMatrix};
use brauer_core::moves::{kauer_move, kauer_orbit, Dedup};
use brauer_core::quiver::{algebra_basis, cartan_closed_form, cartan_from_basis, BrauerQuiver, Quiver};
use brauer_core::tilting::build_tilting;
use brauer_core::{DualTree, MAngulation, MoveError, RibbonGraph};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn graph_from(seed: u64, max_edges: usize, max_mult: u32) -> RibbonGraph {
    let mut rng = common::rng(seed);
    let edges = rng.gen_range(1..=max_edges);
    common::random_graph(&mut rng, edges, max_mult)
}

fn mirror(g: &RibbonGraph) -> RibbonGraph {
    let mut h = g.clone();
    for v in &mut h.vertices {
        v.rotation.reverse();
    }
    h
}

fn random_symmetric(seed: u64, n: usize) -> IntMatrix {
    let mut rng = common::rng(seed);
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-3..=3);
            rows[i][j] = x;
            rows[j][i] = x;
        }
    }
    if rng.gen_bool(0.3) && n > 1 {
        // force a rank drop
        let r = rows[0].clone();
        rows[n - 1] = r.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            row[n - 1] = r[i];
        }
        rows[n - 1][n - 1] = r[0];
    }
    IntMatrix::from_i64(&rows).unwrap()
}

fn random_unimodular(seed: u64, n: usize) -> IntMatrix {
    let mut rng = common::rng(seed);
    let mut p = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.rows[i][j] = BigInt::from(rng.gen_range(-2..=2));
        p = p.mul(&e);
    }
    if rng.gen_bool(0.5) {
        p.rows.swap(0, n - 1);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_names(seed in any::<u64>()) {
        let g = graph_from(seed, 10, 3);
        let mut rng = common::rng(seed.wrapping_add(1));
        let h = common::relabel(&mut rng, &g);
        prop_assert_eq!(g.canonical_form().unwrap().code, h.canonical_form().unwrap().code);
    }

    #[test]
    fn canonical_form_ignores_names_with_boundary(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (m, k) = (rng.gen_range(3..=5), rng.gen_range(1..=4));
        let t = common::random_angulation(&mut rng, m, k).to_ribbon();
        let h = common::relabel(&mut rng, &t);
        prop_assert!(t.is_isomorphic(&h).unwrap());
        let mut bare = t.clone();
        bare.boundary_faces.clear();
        prop_assert!(!bare.is_isomorphic(&t).unwrap());
    }

    #[test]
    fn faces_partition_half_edges(seed in any::<u64>()) {
        let g = graph_from(seed, 12, 1);
        let faces = g.faces().unwrap();
        let total: usize = faces.iter().map(|f| f.len()).sum();
        prop_assert_eq!(total, 2 * g.edges.len());
        let mut all: Vec<String> = faces.iter().flat_map(|f| f.cycle.clone()).collect();
        all.sort();
        all.dedup();
        prop_assert_eq!(all.len(), 2 * g.edges.len());
        let s = g.surface_invariants().unwrap();
        prop_assert_eq!(s.euler_characteristic % 2, 0);
        prop_assert!(s.genus >= 0);
    }

    #[test]
    fn cartan_oracle(seed in any::<u64>()) {
        let g = graph_from(seed, 8, 3);
        let basis = algebra_basis(&g).unwrap();
        let c = cartan_from_basis(&g, &basis);
        prop_assert_eq!(&c, &cartan_closed_form(&g).unwrap());
        for i in 0..c.size() {
            prop_assert!(*c.get(i, i) >= BigInt::from(2));
        }
        prop_assert!(c.is_symmetric());
    }

    #[test]
    fn quiver_shape(seed in any::<u64>()) {
        let g = graph_from(seed, 10, 3);
        let bq = BrauerQuiver::new(&g).unwrap();
        let expected: usize = g.vertices.iter()
            .filter(|v| v.rotation.len() * v.multiplicity as usize >= 2)
            .map(|v| v.rotation.len())
            .sum();
        let special = (g.edges.len() == 1 && expected == 0) as usize;
        prop_assert_eq!(bq.quiver.arrows.len(), expected + special);
        let rel = bq.relations();
        for a in &bq.quiver.arrows {
            for b in bq.quiver.arrows.iter().filter(|b| b.source == a.target) {
                let continues = bq.successor[a.id] == Some(b.id);
                let killed = rel.type_three.contains(&vec![a.id, b.id]);
                prop_assert!(continues != killed);
            }
        }
    }

    #[test]
    fn fz_mutation_is_an_involution(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = common::rng(seed);
        let mut counts = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = rng.gen_range(0..=2);
                if rng.gen_bool(0.5) { counts[i][j] = c } else { counts[j][i] = c }
            }
        }
        let mut arrows = Vec::new();
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                for _ in 0..c {
                    arrows.push(brauer_core::quiver::Arrow { id: arrows.len(), source: i, target: j, witness: None });
                }
            }
        }
        let q = Quiver { vertices: (0..n).map(|i| i.to_string()).collect(), arrows };
        let k = rng.gen_range(0..n);
        let once = q.fz_mutation(k).unwrap();
        prop_assert_eq!(once.fz_mutation(k).unwrap().count_matrix(), q.count_matrix());
    }

    #[test]
    fn kauer_moves_are_well_formed(seed in any::<u64>()) {
        let g = graph_from(seed, 10, 3);
        for e in &g.edges {
            match kauer_move(&g, &e.id) {
                Ok(h) => {
                    prop_assert!(h.validate().is_empty());
                    prop_assert!(h.is_connected().unwrap());
                    prop_assert_eq!(h.edges.len(), g.edges.len());
                    for (x, y) in g.vertices.iter().zip(&h.vertices) {
                        prop_assert_eq!(x.multiplicity, y.multiplicity);
                    }
                    let (a, b) = (cartan_closed_form(&g).unwrap(), cartan_closed_form(&h).unwrap());
                    prop_assert_eq!(inertia(&a).unwrap(), inertia(&b).unwrap());
                    prop_assert_eq!(det_exact(&a).abs(), det_exact(&b).abs());
                }
                Err(MoveError::NothingToMove(_)) => {}
                Err(err) => prop_assert!(false, "{}", err),
            }
        }
    }

    #[test]
    fn dual_kauer_commutes_with_duality(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = rng.gen_range(3..=5);
        let k = rng.gen_range(2..=12 / (m - 2));
        let t = common::random_angulation(&mut rng, m, k);
        let p = rng.gen_range(0..t.diagonals.len());
        let d = t.diagonals[p].id.clone();
        let tree = t.dual_tree().unwrap();
        // read anticlockwise, the dual move is the mutation itself
        let moved = DualTree::new(mirror(&tree.graph)).unwrap().dual_kauer(&d).unwrap();
        let mutated = t.mutate_m(&d).unwrap().dual_tree().unwrap();
        prop_assert!(mirror(&mutated.graph).is_isomorphic(&moved.graph).unwrap());
        for v in &mutated.graph.vertices {
            prop_assert!(v.rotation.len() == 1 || v.rotation.len() == m);
        }
        // read clockwise, it is the inverse mutation
        let mut back = t.clone();
        for _ in 0..m - 2 {
            back = back.mutate_m(&back.diagonals[p].id.clone()).unwrap();
        }
        let moved = tree.dual_kauer(&d).unwrap();
        prop_assert!(back.dual_tree().unwrap().graph.is_isomorphic(&moved.graph).unwrap());
    }

    #[test]
    fn mutation_has_order_m_minus_one(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = rng.gen_range(3..=6);
        let k = rng.gen_range(2..=4);
        let t = common::random_angulation(&mut rng, m, k);
        let p = rng.gen_range(0..t.diagonals.len());
        let mut u = t.clone();
        for step in 1..m {
            u = u.mutate_m(&u.diagonals[p].id.clone()).unwrap();
            prop_assert_eq!(step == m - 1, u == t);
        }
    }

    #[test]
    fn determinant_and_char_poly_agree(seed in any::<u64>(), n in 1usize..8) {
        let m = random_symmetric(seed, n);
        let c0 = char_poly(&m).coefficients[0].clone();
        let signed = if n % 2 == 0 { c0 } else { -c0 };
        prop_assert_eq!(det_exact(&m), signed);
        let i = inertia(&m).unwrap();
        prop_assert_eq!(i.n_plus + i.n_minus + i.n_zero, n);
        prop_assert_eq!((i.n_plus, i.n_minus, i.n_zero), common::descartes(&m));
    }

    #[test]
    fn congruence_keeps_inertia_and_abs_det(seed in any::<u64>(), n in 1usize..8) {
        let m = random_symmetric(seed, n);
        let p = random_unimodular(seed.wrapping_mul(31), n);
        let c = m.congruent(&p);
        prop_assert_eq!(det_exact(&p).abs(), BigInt::from(1));
        prop_assert_eq!(inertia(&m).unwrap(), inertia(&c).unwrap());
        prop_assert_eq!(det_exact(&m).abs(), det_exact(&c).abs());
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let g = graph_from(seed, 8, 3);
        prop_assert_eq!(RibbonGraph::from_json(&g.to_json()).unwrap(), g.clone());
        let c = cartan_closed_form(&g).unwrap();
        prop_assert_eq!(IntMatrix::parse(&c.to_json().to_string()).unwrap(), c);
        let mut rng = common::rng(seed);
        let t = common::random_angulation(&mut rng, 4, 3);
        prop_assert_eq!(MAngulation::from_json(&t.to_json()).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tilting_complexes_on_random_trees(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let edges = rng.gen_range(2..=7);
        let tree = common::random_tree(&mut rng, edges);
        let internal = DualTree::new(tree.clone()).unwrap().internal_edges();
        prop_assume!(!internal.is_empty());
        let a = internal.choose(&mut rng).unwrap();
        let t = build_tilting(&tree, a).unwrap();
        let report = t.verify();
        prop_assert!(report.rigid);
        prop_assert!(report.generation_witness);
        let end = t.end_cartan();
        prop_assert!(end.is_symmetric());
        let moved = DualTree::new(tree.clone()).unwrap().dual_kauer(a).unwrap();
        prop_assert_eq!(end, cartan_closed_form(&moved.graph).unwrap());
        prop_assert_eq!(t.loop_witnesses().unwrap(), Vec::<(String, String)>::new());
    }

    #[test]
    fn orbit_is_independent_of_workers(seed in any::<u64>()) {
        let g = graph_from(seed, 5, 2);
        let one = kauer_orbit(&g, 3, 200, Dedup::Isomorphism, 1).unwrap();
        let four = kauer_orbit(&g, 3, 200, Dedup::Isomorphism, 4).unwrap();
        prop_assert_eq!(&one.moves, &four.moves);
        let keys = |o: &brauer_core::moves::Orbit| o.nodes.iter().map(|n| n.key.clone()).collect::<Vec<_>>();
        prop_assert_eq!(keys(&one), keys(&four));
    }
}

#[test]
fn pentagon_triangulations_form_one_class() {
    // all five triangulations, listed by hand
    let all = [[(1, 3), (1, 4)], [(2, 4), (2, 5)], [(3, 5), (1, 3)], [(1, 4), (2, 4)], [(2, 5), (3, 5)]];
    let forms: std::collections::BTreeSet<Vec<u64>> = all
        .iter()
        .map(|c| MAngulation::new(5, 3, c).unwrap().to_ribbon().canonical_form().unwrap().code)
        .collect();
    assert_eq!(forms.len(), 1);
    let start = MAngulation::new(5, 3, &all[0]).unwrap().to_ribbon();
    assert_eq!(kauer_orbit(&start, 10, 100, Dedup::Isomorphism, 1).unwrap().nodes.len(), forms.len());
    assert_eq!(kauer_orbit(&start, 10, 100, Dedup::Labeled, 1).unwrap().nodes.len(), all.len());
}
