//! Loopless multigraphs, multidigraphs and orientations.
//!
//! Vertices and edges are dense 0-based indices inside the crate. The JSON,
//! DOT and CLI surfaces present them 1-based.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::caps::check_cap;
use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;
pub type ArcId = usize;

/// A finite loopless multigraph. Edge `i` joins `edges[i].0` and `edges[i].1`;
/// parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl Multigraph {
    /// Builds a multigraph from 0-based endpoint pairs. Edge ids follow input
    /// order.
    pub fn new(n: usize, endpoints: Vec<(Vertex, Vertex)>) -> Result<Multigraph> {
        for (i, &(u, v)) in endpoints.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w + 1, n });
                }
            }
            if u == v {
                return Err(Error::Loop { edge: i + 1, vertex: u + 1 });
            }
        }
        Ok(Multigraph { n, edges: endpoints })
    }

    /// Same as [`Multigraph::new`] but with 1-based vertex labels.
    pub fn from_one_based(n: usize, endpoints: &[(usize, usize)]) -> Result<Multigraph> {
        let mut edges = Vec::with_capacity(endpoints.len());
        for (i, &(u, v)) in endpoints.iter().enumerate() {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Loop { edge: i + 1, vertex: u });
            }
            edges.push((u - 1, v - 1));
        }
        Ok(Multigraph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(Vertex, Vertex)> {
        self.edges.get(e).copied().ok_or(Error::UnknownEdge(e + 1))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Incident edge ids per vertex, in edge-id order.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(e);
            inc[v].push(e);
        }
        inc
    }

    /// Replaces each selected edge `{u,v}` by a new vertex `x` and the edges
    /// `{u,x}`, `{x,v}`. The edge `{u,x}` keeps the old id, `{x,v}` and `x`
    /// are appended in increasing order of the selected ids.
    pub fn subdivide(&self, selected: &[EdgeId]) -> Result<Multigraph> {
        let mut chosen = vec![false; self.edges.len()];
        for &e in selected {
            if e >= self.edges.len() {
                return Err(Error::UnknownEdge(e + 1));
            }
            chosen[e] = true;
        }
        let mut n = self.n;
        let mut edges = self.edges.clone();
        let mut extra = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if chosen[e] {
                let x = n;
                n += 1;
                edges[e] = (u, x);
                extra.push((x, v));
            }
        }
        edges.extend(extra);
        Ok(Multigraph { n, edges })
    }

    /// Two-coloring or an odd closed walk.
    pub fn bipartition(&self) -> Bipartition {
        let inc = self.incidence();
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        let mut parent: Vec<Option<Vertex>> = vec![None; self.n];
        for root in 0..self.n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &e in &inc[u] {
                    let (a, b) = self.edges[e];
                    let w = if a == u { b } else { a };
                    match side[w] {
                        None => {
                            side[w] = Some(!side[u].unwrap());
                            parent[w] = Some(u);
                            queue.push_back(w);
                        }
                        Some(s) if s == side[u].unwrap() => {
                            return Bipartition::OddClosedWalk(odd_walk(&parent, u, w));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Bipartition::Bipartite(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.bipartition(), Bipartition::Bipartite(_))
    }
}

fn odd_walk(parent: &[Option<Vertex>], u: Vertex, w: Vertex) -> Vec<Vertex> {
    let path_to_root = |mut x: Vertex| {
        let mut p = vec![x];
        while let Some(y) = parent[x] {
            p.push(y);
            x = y;
        }
        p
    };
    let pu = path_to_root(u);
    let pw = path_to_root(w);
    // Strip the common suffix down to the lowest common ancestor.
    let mut i = pu.len();
    let mut j = pw.len();
    while i > 1 && j > 1 && pu[i - 2] == pw[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut walk: Vec<Vertex> = pu[..i].to_vec();
    walk.extend(pw[..j - 1].iter().rev());
    walk
}

/// Result of a bipartiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// Side of each vertex.
    Bipartite(Vec<bool>),
    /// Vertices of a closed walk of odd length; consecutive vertices (and the
    /// last and first) are adjacent.
    OddClosedWalk(Vec<Vertex>),
}

/// A finite loopless multidigraph. Arc `i` runs `arcs[i].0 -> arcs[i].1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(Vertex, Vertex)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(Vertex, Vertex)>) -> Result<Digraph> {
        for (i, &(u, v)) in arcs.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w + 1, n });
                }
            }
            if u == v {
                return Err(Error::Loop { edge: i + 1, vertex: u + 1 });
            }
        }
        Ok(Digraph { n, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(t, _) in &self.arcs {
            d[t] += 1;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(_, h) in &self.arcs {
            d[h] += 1;
        }
        d
    }

    /// The underlying undirected multigraph, edge ids equal to arc ids.
    pub fn underlying(&self) -> Multigraph {
        Multigraph { n: self.n, edges: self.arcs.clone() }
    }

    /// Every vertex balanced when restricted to the selected arcs.
    pub fn is_eulerian_subset(&self, selected: &[bool]) -> bool {
        let mut bal = vec![0i64; self.n];
        for (i, &(t, h)) in self.arcs.iter().enumerate() {
            if selected[i] {
                bal[t] += 1;
                bal[h] -= 1;
            }
        }
        bal.iter().all(|&b| b == 0)
    }

    /// DOT text; `vertex_label` names vertices, arcs are labelled with their
    /// 1-based id.
    pub fn to_dot(&self, name: &str, vertex_label: impl Fn(Vertex) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        for v in 0..self.n {
            let _ = writeln!(out, "  n{v} [label=\"{}\"];", vertex_label(v));
        }
        for (i, &(t, h)) in self.arcs.iter().enumerate() {
            let _ = writeln!(out, "  n{t} -> n{h} [label=\"{}\"];", i + 1);
        }
        out.push_str("}\n");
        out
    }
}

/// An orientation of a multigraph: `reversed[e]` is false when edge `e` is
/// directed from its first stored endpoint to its second.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    graph: Multigraph,
    reversed: Vec<bool>,
}

impl Orientation {
    pub fn new(graph: &Multigraph, reversed: Vec<bool>) -> Result<Orientation> {
        if reversed.len() != graph.edge_count() {
            return Err(Error::InvalidOrientation(format!(
                "{} directions for {} edges",
                reversed.len(),
                graph.edge_count()
            )));
        }
        Ok(Orientation { graph: graph.clone(), reversed })
    }

    /// Every edge directed as stored.
    pub fn as_stored(graph: &Multigraph) -> Orientation {
        Orientation { graph: graph.clone(), reversed: vec![false; graph.edge_count()] }
    }

    /// Builds an orientation from explicit `(tail, head)` pairs aligned with
    /// the edge ids.
    pub fn from_arcs(graph: &Multigraph, arcs: &[(Vertex, Vertex)]) -> Result<Orientation> {
        if arcs.len() != graph.edge_count() {
            return Err(Error::InvalidOrientation(format!(
                "{} arcs for {} edges",
                arcs.len(),
                graph.edge_count()
            )));
        }
        let mut reversed = Vec::with_capacity(arcs.len());
        for (e, (&(t, h), &(u, v))) in arcs.iter().zip(graph.edges()).enumerate() {
            if (t, h) == (u, v) {
                reversed.push(false);
            } else if (t, h) == (v, u) {
                reversed.push(true);
            } else {
                return Err(Error::InvalidOrientation(format!(
                    "arc ({},{}) does not orient edge {} = {{{},{}}}",
                    t + 1,
                    h + 1,
                    e + 1,
                    u + 1,
                    v + 1
                )));
            }
        }
        Ok(Orientation { graph: graph.clone(), reversed })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn reversed(&self) -> &[bool] {
        &self.reversed
    }

    pub fn arc(&self, e: EdgeId) -> (Vertex, Vertex) {
        let (u, v) = self.graph.edges[e];
        if self.reversed[e] {
            (v, u)
        } else {
            (u, v)
        }
    }

    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.graph.edge_count()).map(|e| self.arc(e)).collect()
    }

    pub fn tail(&self, e: EdgeId) -> Vertex {
        self.arc(e).0
    }

    pub fn digraph(&self) -> Digraph {
        Digraph { n: self.graph.n, arcs: self.arcs() }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.graph.n];
        for e in 0..self.graph.edge_count() {
            d[self.tail(e)] += 1;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.graph.n];
        for e in 0..self.graph.edge_count() {
            d[self.arc(e).1] += 1;
        }
        d
    }

    /// Same orientation with the given edges flipped.
    pub fn with_flipped(&self, edges: &[EdgeId]) -> Result<Orientation> {
        let mut reversed = self.reversed.clone();
        for &e in edges {
            let slot = reversed.get_mut(e).ok_or(Error::UnknownEdge(e + 1))?;
            *slot = !*slot;
        }
        Ok(Orientation { graph: self.graph.clone(), reversed })
    }

    /// Compact bit encoding used for deterministic ordering and dedup.
    pub fn key(&self) -> Vec<bool> {
        self.reversed.clone()
    }
}

/// All `2^m` orientations, ordered as a binary counter over edge ids (bit
/// `e` set means edge `e` reversed).
pub fn enumerate_orientations(
    graph: &Multigraph,
    cap: usize,
) -> Result<impl Iterator<Item = Orientation> + '_> {
    let m = graph.edge_count();
    check_cap("orientation enumeration edges", m, cap.min(63))?;
    Ok((0u64..(1u64 << m)).map(move |code| Orientation {
        graph: graph.clone(),
        reversed: (0..m).map(|e| code >> e & 1 == 1).collect(),
    }))
}

/// Finds an orientation with `d+(v) <= caps[v]`, or `None` when none exists.
///
/// `fixed[e] = Some(r)` pins edge `e` to direction `r` (same convention as
/// [`Orientation::reversed`]); pinned edges are never reoriented.
pub fn find_bounded_orientation_with_fixed(
    graph: &Multigraph,
    caps: &[usize],
    fixed: &[Option<bool>],
) -> Option<Orientation> {
    let m = graph.edge_count();
    let n = graph.vertex_count();
    assert_eq!(caps.len(), n, "one cap per vertex");
    assert_eq!(fixed.len(), m, "one entry per edge");
    let mut reversed: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(false)).collect();
    let arc = |reversed: &[bool], e: EdgeId| {
        let (u, v) = graph.edges[e];
        if reversed[e] {
            (v, u)
        } else {
            (u, v)
        }
    };
    let mut out = vec![0usize; n];
    for e in 0..m {
        out[arc(&reversed, e).0] += 1;
    }
    // Free arcs leaving each vertex, rebuilt lazily from `reversed`.
    let inc = graph.incidence();
    loop {
        let Some(over) = (0..n).find(|&v| out[v] > caps[v]) else {
            return Some(Orientation { graph: graph.clone(), reversed });
        };
        // BFS along free arcs from the overloaded vertex towards slack.
        let mut via: Vec<Option<EdgeId>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[over] = true;
        let mut queue = VecDeque::from([over]);
        let mut target = None;
        while let Some(u) = queue.pop_front() {
            if u != over && out[u] < caps[u] {
                target = Some(u);
                break;
            }
            for &e in &inc[u] {
                if fixed[e].is_some() {
                    continue;
                }
                let (t, h) = arc(&reversed, e);
                if t == u && !seen[h] {
                    seen[h] = true;
                    via[h] = Some(e);
                    queue.push_back(h);
                }
            }
        }
        // Everything reachable is saturated: the reachable set spans more
        // arcs than its total capacity, so no orientation fits.
        let target = target?;
        let mut x = target;
        while x != over {
            let e = via[x].expect("BFS tree edge");
            let (t, _) = arc(&reversed, e);
            reversed[e] = !reversed[e];
            x = t;
        }
        out[over] -= 1;
        out[target] += 1;
    }
}

pub fn find_bounded_orientation(graph: &Multigraph, caps: &[usize]) -> Option<Orientation> {
    find_bounded_orientation_with_fixed(graph, caps, &vec![None; graph.edge_count()])
}
