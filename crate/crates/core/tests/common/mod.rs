//! Seeded instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use turncost::model::{CostEntry, EdgeId, Graph, HalfEdge, Rational, TurningCostTable, VertexId};
use turncost::planar::{trace_faces, PlaneGraph};
use turncost::sat::{CnfFormula, Literal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.gen_range(1..=4);
    Rational::new(rng.gen_range(0..=6), q)
}

/// Each pairing is left unlisted, priced, or (rarely) forbidden.
pub fn random_costs(rng: &mut ChaCha8Rng, g: &Graph, forbid_rate: f64) -> TurningCostTable {
    let mut w = TurningCostTable::new();
    for v in g.vertices() {
        let hs = g.incident(v).to_vec();
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                let entry = if rng.gen_bool(forbid_rate) {
                    CostEntry::Forbidden
                } else if rng.gen_bool(0.7) {
                    CostEntry::Finite(random_rational(rng))
                } else {
                    continue;
                };
                w.set(g, v, hs[i], hs[j], entry).unwrap();
            }
        }
    }
    w
}

/// Connected Eulerian multigraph with `1..=max_edges` edges: the edges of
/// a random closed walk, so loops and parallel edges occur naturally.
pub fn random_eulerian(rng: &mut ChaCha8Rng, max_edges: usize) -> Graph {
    let m = rng.gen_range(1..=max_edges);
    let n = rng.gen_range(1..=m.clamp(1, 5));
    let mut walk: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
    walk.push(walk[0]);
    let mut used: Vec<usize> = walk.clone();
    used.sort_unstable();
    used.dedup();
    let mut g = Graph::new();
    let ids: Vec<Option<VertexId>> =
        (0..n).map(|x| used.binary_search(&x).ok().map(|_| g.add_vertex(format!("v{x}")))).collect();
    let mut steps: Vec<(usize, usize)> = walk.windows(2).map(|w| (w[0], w[1])).collect();
    steps.shuffle(rng);
    for (i, (a, b)) in steps.into_iter().enumerate() {
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        g.add_edge(format!("e{i}"), ids[a].unwrap(), ids[b].unwrap());
    }
    g
}

pub fn random_instance(seed: u64, max_edges: usize, forbid_rate: f64) -> (Graph, TurningCostTable) {
    let mut r = rng(seed);
    let g = random_eulerian(&mut r, max_edges);
    let w = random_costs(&mut r, &g, forbid_rate);
    (g, w)
}

fn dart(h: HalfEdge) -> usize {
    2 * h.edge.0 + h.end as usize
}

/// Random connected plane multigraph with `edges` edges: a random tree with
/// random rotations, then edges drawn inside a face between two of its
/// corners (possibly the same corner, giving a loop).
fn random_plane_graph(rng: &mut ChaCha8Rng, edges: usize) -> (Graph, Vec<Vec<HalfEdge>>) {
    let n = rng.gen_range(1..=edges + 1).min(edges + 1);
    let mut g = Graph::new();
    let mut rot: Vec<Vec<HalfEdge>> = Vec::new();
    for i in 0..n {
        g.add_vertex(format!("p{i}"));
        rot.push(Vec::new());
    }
    let insert = |rot: &mut Vec<Vec<HalfEdge>>, v: VertexId, at: usize, h: HalfEdge| {
        let r = &mut rot[v.0];
        r.insert(at.min(r.len()), h);
    };
    for i in 1..n {
        let parent = VertexId(rng.gen_range(0..i));
        let e = g.add_edge(format!("t{i}"), parent, VertexId(i));
        let at = rng.gen_range(0..=rot[parent.0].len());
        insert(&mut rot, parent, at, HalfEdge::new(e, 0));
        rot[i].push(HalfEdge::new(e, 1));
    }
    while g.edge_count() < edges {
        let (fg, faces) = if g.edge_count() == 0 {
            (None, Vec::new())
        } else {
            let p = PlaneGraph::new(g.clone(), rot.clone(), 0).unwrap();
            let f = trace_faces(&p).unwrap();
            (Some(p), f.faces)
        };
        let e = EdgeId(g.edge_count());
        let name = format!("c{}", e.0);
        let Some(p) = fg else {
            // single isolated vertex: start with a loop
            g.add_edge(name, VertexId(0), VertexId(0));
            rot[0] = vec![HalfEdge::new(e, 0), HalfEdge::new(e, 1)];
            continue;
        };
        // corner i of a face sits at the head of dart i, just after opp(dart i)
        let face = faces.choose(rng).unwrap().clone();
        let i = rng.gen_range(0..face.len());
        let j = rng.gen_range(0..face.len());
        let corner = |k: usize| {
            let back = face[k].opposite();
            (p.graph().vertex_of(back), back)
        };
        let (u, after_u) = corner(i);
        let (v, after_v) = corner(j);
        g.add_edge(name, u, v);
        let (h0, h1) = (HalfEdge::new(e, 0), HalfEdge::new(e, 1));
        if i == j {
            let at = rot[u.0].iter().position(|&x| x == after_u).unwrap() + 1;
            rot[u.0].insert(at, h1);
            rot[u.0].insert(at, h0);
        } else {
            let at = rot[u.0].iter().position(|&x| x == after_u).unwrap() + 1;
            rot[u.0].insert(at, h0);
            let at = rot[v.0].iter().position(|&x| x == after_v).unwrap() + 1;
            rot[v.0].insert(at, h1);
        }
    }
    (g, rot)
}

/// Medial graph of a random plane graph with `1..=max_vertices` edges:
/// a 4-regular plane multigraph with `1..=max_vertices` vertices.
pub fn random_four_regular_plane(rng: &mut ChaCha8Rng, max_vertices: usize) -> PlaneGraph {
    let m = rng.gen_range(1..=max_vertices);
    let (base, base_rot) = random_plane_graph(rng, m);
    let bp = PlaneGraph::new(base.clone(), base_rot, 0).unwrap();
    let faces = trace_faces(&bp).unwrap().faces;
    let mut g = Graph::new();
    for e in base.edge_ids() {
        g.add_vertex(format!("m{}", base.edge_name(e)));
    }
    // around the midpoint of edge e: out(e.0), in(e.1), out(e.1), in(e.0)
    let mut out_slot = vec![None; 2 * base.edge_count()];
    let mut in_slot = vec![None; 2 * base.edge_count()];
    for face in &faces {
        for k in 0..face.len() {
            let (h, nh) = (face[k], face[(k + 1) % face.len()]);
            let e = g.add_edge(format!("s{}", g.edge_count()), VertexId(h.edge.0), VertexId(nh.edge.0));
            out_slot[dart(h)] = Some(HalfEdge::new(e, 0));
            in_slot[dart(nh)] = Some(HalfEdge::new(e, 1));
        }
    }
    let rot = base
        .edge_ids()
        .map(|e| {
            let (d0, d1) = (HalfEdge::new(e, 0), HalfEdge::new(e, 1));
            vec![
                out_slot[dart(d0)].unwrap(),
                in_slot[dart(d1)].unwrap(),
                out_slot[dart(d1)].unwrap(),
                in_slot[dart(d0)].unwrap(),
            ]
        })
        .collect();
    let outer = rng.gen_range(0..base.vertex_count() + faces.len());
    PlaneGraph::new(g, rot, outer).unwrap()
}

pub fn random_formula(rng: &mut ChaCha8Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(3..=max_vars.max(3));
    let r = rng.gen_range(1..=max_clauses.max(1));
    formula_of_size(rng, n, r)
}

/// `r` clauses of three distinct variables drawn from `1..=n`.
pub fn formula_of_size(rng: &mut ChaCha8Rng, n: usize, r: usize) -> CnfFormula {
    let vars: Vec<usize> = (1..=n).collect();
    let clauses = (0..r)
        .map(|_| {
            let pick: Vec<usize> = vars.choose_multiple(rng, 3).copied().collect();
            [0, 1, 2].map(|k| Literal { var: pick[k], positive: rng.gen_bool(0.5) })
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}
