//! Worked instances: the `C4` figure and its doubled lift, the signed `K2`,
//! the two `W6` wheels, seeded toroidal grids, and plain cycles and wheels.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::Instance;
use crate::correspondence::{CorrespondenceAssignment, Pair, PartialMatching};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::graph::{EdgeId, Multigraph, Orientation, Vertex};

/// Edge id of the crossed edge `{3,4}` in [`c4_figure`].
pub const C4_CROSSED_EDGE: EdgeId = 2;

fn q(n: i64) -> FieldElement {
    FieldSpec::Rationals.from_i64(n)
}

fn qs(ns: &[i64]) -> Vec<FieldElement> {
    ns.iter().map(|&n| q(n)).collect()
}

fn int_pairs(ps: &[(i64, i64)]) -> Vec<Pair> {
    ps.iter().map(|&(a, b)| (q(a), q(b))).collect()
}

/// Full identity matchings on the common colors of each edge.
fn straight(graph: &Multigraph, lists: &[Vec<FieldElement>]) -> Vec<PartialMatching> {
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| PartialMatching {
            edge: e,
            tail: u,
            head: v,
            pairs: lists[u].iter().filter(|c| lists[v].contains(c)).map(|c| (c.clone(), c.clone())).collect(),
        })
        .collect()
}

fn cycle_graph(n: usize) -> Multigraph {
    Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("n >= 2")
}

fn wheel_graph(n: usize) -> Multigraph {
    let rim = n - 1;
    let mut edges: Vec<(Vertex, Vertex)> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
    edges.extend((0..rim).map(|i| (i, rim)));
    Multigraph::new(n, edges).expect("n >= 4")
}

/// `C4` with lists `{1,2}`, three straight edges and the crossed edge `{3,4}`.
pub fn c4_figure() -> CorrespondenceAssignment {
    let g = cycle_graph(4);
    let lists = vec![qs(&[1, 2]); 4];
    let mut matchings = straight(&g, &lists);
    matchings[C4_CROSSED_EDGE].pairs = int_pairs(&[(1, 2), (2, 1)]);
    CorrespondenceAssignment::new(g, FieldSpec::Rationals, lists, matchings).expect("valid fixture")
}

/// The good lift of [`c4_figure`] (edge `{3,4}` doubled) with the drawn
/// orientation `1->2->3`, `3->4`, `4->3`, `4->1`.
pub fn c4_doubled() -> (CorrespondenceAssignment, Orientation) {
    let graph = Multigraph::from_one_based(4, &[(1, 2), (2, 3), (3, 4), (4, 1), (4, 3)]).expect("valid");
    let lists = vec![qs(&[1, 2]); 4];
    let mut matchings = straight(&graph, &lists);
    matchings[2].pairs = int_pairs(&[(1, 2)]);
    matchings[4].pairs = int_pairs(&[(1, 2)]);
    let a = CorrespondenceAssignment::new(graph, FieldSpec::Rationals, lists, matchings).expect("valid fixture");
    let d = Orientation::from_arcs(a.graph(), &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 2)]).expect("valid");
    (a, d)
}

/// `K2` on `v`, `w` with lists `{-1,1}` and the single pair `(v:-1, w:1)`.
pub fn k2_signed() -> CorrespondenceAssignment {
    let g = Multigraph::from_one_based(2, &[(1, 2)]).expect("valid");
    let m = PartialMatching { edge: 0, tail: 0, head: 1, pairs: int_pairs(&[(-1, 1)]) };
    CorrespondenceAssignment::new(g, FieldSpec::Rationals, vec![qs(&[-1, 1]); 2], vec![m]).expect("valid fixture")
}

/// `W6` with hub `6`, rim `1..5`.
pub fn w6_graph() -> Multigraph {
    wheel_graph(6)
}

/// The dashed edges `{5,1}`, `{2,6}`, `{4,6}` of the signable `W6`.
pub const W6_BAD_EDGES: [EdgeId; 3] = [4, 6, 8];

/// Hub list `{0}`, rim lists `{0,1,2}`, straight matchings.
pub fn w6_lists() -> CorrespondenceAssignment {
    let g = w6_graph();
    let mut lists = vec![qs(&[0, 1, 2]); 5];
    lists.push(qs(&[0]));
    let matchings = straight(&g, &lists);
    CorrespondenceAssignment::new(g, FieldSpec::Rationals, lists, matchings).expect("valid fixture")
}

/// Lists `{0,1,2}`; straight matchings on solid edges and the sign-reversing
/// matching `c1 + c2 = 2` on the dashed edges `{5,1}`, `{2,6}`, `{4,6}`.
pub fn w6_signable() -> CorrespondenceAssignment {
    let g = w6_graph();
    let lists = vec![qs(&[0, 1, 2]); 6];
    let mut matchings = straight(&g, &lists);
    for e in W6_BAD_EDGES {
        matchings[e].pairs = int_pairs(&[(0, 2), (1, 1), (2, 0)]);
    }
    CorrespondenceAssignment::new(g, FieldSpec::Rationals, lists, matchings).expect("valid fixture")
}

/// Straight cycle on `n` vertices with lists `{1,2}`.
pub fn cycle(n: usize) -> Result<CorrespondenceAssignment> {
    if n < 2 {
        return Err(Error::UnknownFixture(format!("cycle({n}) needs n >= 2")));
    }
    let g = cycle_graph(n);
    let lists = vec![qs(&[1, 2]); n];
    let matchings = straight(&g, &lists);
    CorrespondenceAssignment::new(g, FieldSpec::Rationals, lists, matchings)
}

/// Straight wheel on `n` vertices (hub `n`) with lists `{0,1,2}`.
pub fn wheel(n: usize) -> Result<CorrespondenceAssignment> {
    if n < 4 {
        return Err(Error::UnknownFixture(format!("wheel({n}) needs n >= 4")));
    }
    let g = wheel_graph(n);
    let lists = vec![qs(&[0, 1, 2]); n];
    let matchings = straight(&g, &lists);
    CorrespondenceAssignment::new(g, FieldSpec::Rationals, lists, matchings)
}

/// Vertex `v_{r·2k+c+1}` sits in row `r`, column `c` of the `2k × 2k` torus.
pub fn grid_vertex(k: usize, r: usize, c: usize) -> Vertex {
    let s = 2 * k;
    (r % s) * s + (c % s)
}

/// True when the 1-based index of `v` is even.
pub fn even_indexed(v: Vertex) -> bool {
    (v + 1).is_multiple_of(2)
}

/// The `2k × 2k` toroidal grid. For each vertex, the edge to its right
/// neighbour then the edge to the vertex below; vertical edges between
/// even-indexed vertices are the dashed rungs.
pub fn toroidal_graph(k: usize) -> Result<(Multigraph, Vec<bool>)> {
    if k < 2 {
        return Err(Error::UnknownFixture(format!("toroidal_grid({k}) needs k >= 2")));
    }
    let s = 2 * k;
    let mut edges = Vec::with_capacity(2 * s * s);
    let mut dashed = Vec::with_capacity(2 * s * s);
    for r in 0..s {
        for c in 0..s {
            let v = grid_vertex(k, r, c);
            let (right, below) = (grid_vertex(k, r, c + 1), grid_vertex(k, r + 1, c));
            edges.push((v.min(right), v.max(right)));
            dashed.push(false);
            edges.push((v.min(below), v.max(below)));
            dashed.push(even_indexed(v));
        }
    }
    Ok((Multigraph::new(s * s, edges)?, dashed))
}

/// A random conforming assignment on the `2k × 2k` torus: lists of four
/// distinct integers in `0..10` on even-indexed vertices and three on
/// odd-indexed ones; solid edges get random good matchings, dashed rungs get
/// matchings with `|c1 - c2| = a` using both signs.
pub fn toroidal_grid(k: usize, seed: u64) -> Result<CorrespondenceAssignment> {
    let (graph, dashed) = toroidal_graph(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette: Vec<i64> = (0..10).collect();
    'attempt: loop {
        let lists: Vec<Vec<i64>> = (0..graph.vertex_count())
            .map(|v| {
                let size = if even_indexed(v) { 4 } else { 3 };
                let mut l: Vec<i64> = palette.choose_multiple(&mut rng, size).copied().collect();
                l.sort_unstable();
                l
            })
            .collect();
        let mut matchings = Vec::with_capacity(graph.edge_count());
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            let pairs = if dashed[e] {
                match rung_pairs(&lists[u], &lists[v], &mut rng) {
                    Some(p) => p,
                    None => continue 'attempt,
                }
            } else {
                good_pairs(&lists[u], &lists[v], &mut rng)
            };
            matchings.push(PartialMatching { edge: e, tail: u, head: v, pairs: int_pairs(&pairs) });
        }
        let lists = lists.iter().map(|l| qs(l)).collect();
        return CorrespondenceAssignment::new(graph, FieldSpec::Rationals, lists, matchings);
    }
}

fn good_pairs(l1: &[i64], l2: &[i64], rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    let mut diffs: Vec<i64> = l1.iter().flat_map(|a| l2.iter().map(move |b| a - b)).collect();
    diffs.sort_unstable();
    diffs.dedup();
    let a = *diffs.choose(rng).expect("nonempty lists");
    let candidates: Vec<(i64, i64)> =
        l1.iter().filter(|&&c| l2.contains(&(c - a))).map(|&c| (c, c - a)).collect();
    let mut picked: Vec<(i64, i64)> = candidates.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
    if picked.is_empty() {
        picked.push(*candidates.choose(rng).expect("difference realized"));
    }
    picked
}

/// A matching with `|c1 - c2| = a` containing pairs of both signs, or `None`
/// when no `a > 0` admits one.
fn rung_pairs(l1: &[i64], l2: &[i64], rng: &mut ChaCha8Rng) -> Option<Vec<(i64, i64)>> {
    let mut options: Vec<i64> = (1..10).collect();
    options.shuffle(rng);
    for a in options {
        let plus: Vec<(i64, i64)> = l1.iter().filter(|&&c| l2.contains(&(c - a))).map(|&c| (c, c - a)).collect();
        let minus: Vec<(i64, i64)> = l1.iter().filter(|&&c| l2.contains(&(c + a))).map(|&c| (c, c + a)).collect();
        let mut seeds: Vec<((i64, i64), (i64, i64))> = plus
            .iter()
            .flat_map(|&p| minus.iter().map(move |&m| (p, m)))
            .filter(|(p, m)| p.0 != m.0 && p.1 != m.1)
            .collect();
        if seeds.is_empty() {
            continue;
        }
        seeds.shuffle(rng);
        let (p, m) = seeds[0];
        let mut picked = vec![p, m];
        let mut rest: Vec<(i64, i64)> = plus.iter().chain(&minus).copied().filter(|x| !picked.contains(x)).collect();
        rest.shuffle(rng);
        for x in rest {
            if rng.gen_bool(0.5) && picked.iter().all(|y| y.0 != x.0 && y.1 != x.1) {
                picked.push(x);
            }
        }
        picked.sort_unstable();
        return Some(picked);
    }
    None
}

/// Parses a fixture name such as `c4_figure`, `toroidal_grid(3)` or
/// `wheel(7)` and builds its instance; `seed` only affects the grid.
pub fn gen_fixture(name: &str, seed: u64) -> Result<Instance> {
    let name = name.trim();
    let (base, arg) = match name.find('(') {
        Some(i) if name.ends_with(')') => {
            let raw = &name[i + 1..name.len() - 1];
            let n = raw.trim().parse::<usize>().map_err(|_| Error::UnknownFixture(name.to_string()))?;
            (&name[..i], Some(n))
        }
        _ => (name, None),
    };
    let plain = |a: CorrespondenceAssignment| Ok(Instance::new(a));
    match (base, arg) {
        ("c4_figure", None) => plain(c4_figure()),
        ("c4_doubled", None) => {
            let (a, d) = c4_doubled();
            Instance::with_orientation(a, d)
        }
        ("k2_signed", None) => plain(k2_signed()),
        ("w6_lists", None) => plain(w6_lists()),
        ("w6_signable", None) => plain(w6_signable()),
        ("toroidal_grid", Some(k)) => plain(toroidal_grid(k, seed)?),
        ("cycle", Some(n)) => plain(cycle(n)?),
        ("wheel", Some(n)) => plain(wheel(n)?),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

pub const FIXTURE_NAMES: [&str; 8] = [
    "c4_figure",
    "c4_doubled",
    "k2_signed",
    "w6_lists",
    "w6_signable",
    "toroidal_grid(k)",
    "cycle(n)",
    "wheel(n)",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{classify_edge, EdgeClass};

    #[test]
    fn c4_shape() {
        let a = c4_figure();
        assert_eq!(a.graph().vertex_count(), 4);
        assert!(a.lists().iter().all(|l| *l == qs(&[1, 2])));
        let classes: Vec<EdgeClass> = (0..4).map(|e| classify_edge(&a, e, a.matching(e).unwrap().tail).unwrap()).collect();
        assert_eq!(classes.iter().filter(|c| **c == EdgeClass::Straight).count(), 3);
        assert_eq!(a.graph().edges()[C4_CROSSED_EDGE], (2, 3));
    }

    #[test]
    fn c4_doubled_degrees() {
        let (_, d) = c4_doubled();
        assert_eq!(d.out_degrees(), vec![1, 1, 1, 2]);
    }

    #[test]
    fn w6_shapes() {
        let w = w6_lists();
        assert_eq!(w.graph().edge_count(), 10);
        assert_eq!(w.lists()[5], qs(&[0]));
        let g = w6_graph();
        assert!(!g.is_bipartite());
        assert!(g.subdivide(&W6_BAD_EDGES).unwrap().is_bipartite());
    }

    #[test]
    fn grid_shape() {
        let a = toroidal_grid(2, 0).unwrap();
        assert_eq!(a.graph().vertex_count(), 16);
        assert_eq!(a.graph().edge_count(), 32);
        let (_, dashed) = toroidal_graph(2).unwrap();
        assert_eq!(dashed.iter().filter(|&&d| d).count(), 8);
        for v in 0..16 {
            assert_eq!(a.lists()[v].len(), if even_indexed(v) { 4 } else { 3 });
        }
        for (e, m) in a.matchings().iter().enumerate() {
            let class = classify_edge(&a, e, m.tail).unwrap();
            if dashed[e] {
                assert!(!matches!(class, EdgeClass::Good { .. } | EdgeClass::Straight));
            } else {
                assert!(matches!(class, EdgeClass::Good { .. } | EdgeClass::Straight));
            }
        }
        assert_eq!(toroidal_grid(2, 7).unwrap(), toroidal_grid(2, 7).unwrap());
        assert_eq!(toroidal_grid(3, 1).unwrap().graph().edge_count(), 72);
    }

    #[test]
    fn names() {
        for n in ["c4_figure", "c4_doubled", "k2_signed", "w6_lists", "w6_signable", "toroidal_grid(2)", "cycle(5)", "wheel(6)"] {
            gen_fixture(n, 0).unwrap();
        }
        assert!(gen_fixture("petersen", 0).is_err());
        assert!(gen_fixture("toroidal_grid(1)", 0).is_err());
        assert!(gen_fixture("cycle(x)", 0).is_err());
    }
}
