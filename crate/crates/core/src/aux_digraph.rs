//! Auxiliary digraphs built from an orientation and its sign data.
//!
//! `D_σ` subdivides every arc with sign `-1` once. `D_{σ,φ}` replaces an arc
//! `v -> w` by a gadget `v -> t_e`, `h_e -> w` joined by `φ⁺(e)` parallel arcs
//! `t_e -> h_e` (sign `+1`) or by `φ⁺(e)` two-arc paths through internal
//! vertices `x_e^i` (sign `-1`). Each gadget has exactly `φ⁺(e)` directed
//! `v -> w` paths, the γ-paths; paths of one gadget share exactly the first
//! and last arc.

use std::fmt;

use crate::correspondence::SignData;
use crate::error::{Error, Result};
use crate::field::Sign;
use crate::graph::{ArcId, Digraph, EdgeId, Orientation, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxVertex {
    Original(Vertex),
    Tail(EdgeId),
    Head(EdgeId),
    /// `Internal(e, i)` with `i` in `1..=φ⁺(e)`.
    Internal(EdgeId, u64),
    Mid(EdgeId),
}

impl fmt::Display for AuxVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxVertex::Original(v) => write!(f, "v{}", v + 1),
            AuxVertex::Tail(e) => write!(f, "t{}", e + 1),
            AuxVertex::Head(e) => write!(f, "h{}", e + 1),
            AuxVertex::Internal(e, i) => write!(f, "x{}_{}", e + 1, i),
            AuxVertex::Mid(e) => write!(f, "m{}", e + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxKind {
    /// `D_σ`.
    Sigma,
    /// `D_{σ,φ}`.
    SigmaPhi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPath {
    pub edge: EdgeId,
    /// 1-based index among the edge's paths.
    pub index: u64,
    pub arcs: Vec<ArcId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxDigraph {
    pub kind: AuxKind,
    pub digraph: Digraph,
    pub vertices: Vec<AuxVertex>,
    pub origin: Orientation,
    pub signs: Vec<Sign>,
    /// `φ⁺` per edge (all 1 for `D_σ`).
    pub magnitudes: Vec<u64>,
    /// Per original edge, its directed `v -> w` paths as arc id sequences.
    /// For `D_σ` this is the single arc or two-arc path replacing the edge.
    pub paths: Vec<Vec<Vec<ArcId>>>,
}

struct Builder {
    vertices: Vec<AuxVertex>,
    arcs: Vec<(Vertex, Vertex)>,
}

impl Builder {
    fn vertex(&mut self, tag: AuxVertex) -> Vertex {
        self.vertices.push(tag);
        self.vertices.len() - 1
    }

    fn arc(&mut self, t: Vertex, h: Vertex) -> ArcId {
        self.arcs.push((t, h));
        self.arcs.len() - 1
    }
}

fn originals(d: &Orientation) -> Builder {
    Builder {
        vertices: (0..d.graph().vertex_count()).map(AuxVertex::Original).collect(),
        arcs: Vec::new(),
    }
}

/// `D_σ`: arcs with sign `+1` copied, arcs with sign `-1` become `v -> m_e -> w`.
pub fn build_d_sigma(d: &Orientation, signs: &[Sign]) -> Result<AuxDigraph> {
    let m = d.graph().edge_count();
    if signs.len() != m {
        return Err(Error::InvalidSignData(format!("{} signs for {m} edges", signs.len())));
    }
    let mut b = originals(d);
    let mut paths = Vec::with_capacity(m);
    for (e, sign) in signs.iter().enumerate() {
        let (v, w) = d.arc(e);
        let path = match sign {
            Sign::Plus => vec![b.arc(v, w)],
            Sign::Minus => {
                let mid = b.vertex(AuxVertex::Mid(e));
                vec![b.arc(v, mid), b.arc(mid, w)]
            }
        };
        paths.push(vec![path]);
    }
    Ok(AuxDigraph {
        kind: AuxKind::Sigma,
        digraph: Digraph::new(b.vertices.len(), b.arcs)?,
        vertices: b.vertices,
        origin: d.clone(),
        signs: signs.to_vec(),
        magnitudes: vec![1; m],
        paths,
    })
}

/// `D_{σ,φ}` from sign data whose every edge carries a factorization.
pub fn build_d_sigma_phi(d: &Orientation, s: &SignData) -> Result<AuxDigraph> {
    if s.orientation() != d {
        return Err(Error::InvalidSignData("sign data belongs to another orientation".into()));
    }
    let factors = s.factors()?;
    let m = d.graph().edge_count();
    let mut b = originals(d);
    let mut paths = Vec::with_capacity(m);
    for (e, f) in factors.iter().enumerate() {
        let (v, w) = d.arc(e);
        let tail = b.vertex(AuxVertex::Tail(e));
        let mut middles: Vec<Vec<ArcId>> = Vec::new();
        let first = b.arc(v, tail);
        match f.sign {
            Sign::Plus => {
                let head = b.vertex(AuxVertex::Head(e));
                for _ in 0..f.magnitude {
                    middles.push(vec![b.arc(tail, head)]);
                }
                let last = b.arc(head, w);
                paths.push(middles.into_iter().map(|mid| [vec![first], mid, vec![last]].concat()).collect());
            }
            Sign::Minus => {
                let internals: Vec<Vertex> =
                    (1..=f.magnitude).map(|i| b.vertex(AuxVertex::Internal(e, i))).collect();
                let head = b.vertex(AuxVertex::Head(e));
                for x in internals {
                    let a1 = b.arc(tail, x);
                    let a2 = b.arc(x, head);
                    middles.push(vec![a1, a2]);
                }
                let last = b.arc(head, w);
                paths.push(middles.into_iter().map(|mid| [vec![first], mid, vec![last]].concat()).collect());
            }
        }
    }
    Ok(AuxDigraph {
        kind: AuxKind::SigmaPhi,
        digraph: Digraph::new(b.vertices.len(), b.arcs)?,
        vertices: b.vertices,
        origin: d.clone(),
        signs: factors.iter().map(|f| f.sign).collect(),
        magnitudes: factors.iter().map(|f| f.magnitude).collect(),
        paths,
    })
}

impl AuxDigraph {
    /// The γ-paths of edge `e`.
    pub fn gamma_paths(&self, e: EdgeId) -> Result<Vec<GammaPath>> {
        let paths = self.paths.get(e).ok_or(Error::UnknownEdge(e + 1))?;
        Ok(paths
            .iter()
            .enumerate()
            .map(|(i, arcs)| GammaPath { edge: e, index: i as u64 + 1, arcs: arcs.clone() })
            .collect())
    }

    pub fn to_dot(&self) -> String {
        let name = match self.kind {
            AuxKind::Sigma => "D_sigma",
            AuxKind::SigmaPhi => "D_sigma_phi",
        };
        self.digraph.to_dot(name, |v| self.vertices[v].to_string())
    }

    /// Decides whether the selected arcs form an Eulerian subdigraph by
    /// checking balance at the original vertices and that the arcs split
    /// into edge-disjoint γ-paths.
    pub fn check_eulerian_structure(&self, selected: &[bool]) -> EulerVerdict {
        assert_eq!(selected.len(), self.digraph.arc_count(), "one flag per arc");
        let verdict = self.structural_verdict(selected);
        debug_assert_eq!(
            matches!(verdict, EulerVerdict::Eulerian { .. }),
            self.digraph.is_eulerian_subset(selected)
        );
        verdict
    }

    fn structural_verdict(&self, selected: &[bool]) -> EulerVerdict {
        let mut decomposition = Vec::new();
        for (e, paths) in self.paths.iter().enumerate() {
            let gadget: Vec<ArcId> = {
                let mut all: Vec<ArcId> = paths.iter().flatten().copied().collect();
                all.sort_unstable();
                all.dedup();
                all
            };
            let chosen: Vec<ArcId> = gadget.iter().copied().filter(|&a| selected[a]).collect();
            if chosen.is_empty() {
                continue;
            }
            let hit = paths.iter().position(|p| {
                let mut sorted = p.clone();
                sorted.sort_unstable();
                sorted == chosen
            });
            match hit {
                Some(i) => decomposition.push((e, i as u64 + 1)),
                None => return EulerVerdict::NotGammaUnion { edge: e },
            }
        }
        let n = self.origin.graph().vertex_count();
        let mut out = vec![0usize; n];
        let mut inn = vec![0usize; n];
        for (a, &(t, h)) in self.digraph.arcs().iter().enumerate() {
            if !selected[a] {
                continue;
            }
            if let AuxVertex::Original(v) = self.vertices[t] {
                out[v] += 1;
            }
            if let AuxVertex::Original(v) = self.vertices[h] {
                inn[v] += 1;
            }
        }
        if let Some(v) = (0..n).find(|&v| out[v] != inn[v]) {
            return EulerVerdict::Unbalanced { vertex: v, out: out[v], inn: inn[v] };
        }
        EulerVerdict::Eulerian { decomposition }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerVerdict {
    /// Edge-disjoint γ-paths `(edge, index)` whose union is the selection.
    Eulerian { decomposition: Vec<(EdgeId, u64)> },
    /// An original vertex with unequal in- and out-degree.
    Unbalanced { vertex: Vertex, out: usize, inn: usize },
    /// Selected arcs inside this edge's gadget are not a single γ-path.
    NotGammaUnion { edge: EdgeId },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::EdgeSign;
    use crate::field::{Factorization, FieldSpec};
    use crate::graph::Multigraph;
    use proptest::prelude::*;

    fn sign_data(d: &Orientation, spec: &[(Sign, u64)]) -> SignData {
        let f = FieldSpec::Rationals;
        let edges = spec
            .iter()
            .map(|&(sign, magnitude)| {
                let fac = Factorization { sign, magnitude };
                EdgeSign { phi: f.from_factorization(&fac), a: f.zero(), factor: Some(fac) }
            })
            .collect();
        SignData::new(f, d.clone(), edges).unwrap()
    }

    fn single_arc() -> Orientation {
        Orientation::as_stored(&Multigraph::from_one_based(2, &[(1, 2)]).unwrap())
    }

    #[test]
    fn d_sigma_examples() {
        let c4 = Multigraph::from_one_based(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let d = Orientation::as_stored(&c4);
        let x = build_d_sigma(&d, &[Sign::Plus; 4]).unwrap();
        assert_eq!(x.digraph, d.digraph());

        let x = build_d_sigma(&single_arc(), &[Sign::Minus]).unwrap();
        assert_eq!(x.digraph.arc_count(), 2);
        assert_eq!(x.vertices[2], AuxVertex::Mid(0));

        let x = build_d_sigma(&d, &[Sign::Plus, Sign::Plus, Sign::Minus, Sign::Plus]).unwrap();
        assert_eq!(x.digraph.vertex_count(), 5);
        assert_eq!(x.digraph.arc_count(), 5);
        assert!(x.digraph.out_degrees().iter().all(|&o| o == 1));
        assert!(x.digraph.is_eulerian_subset(&[true; 5]));
    }

    #[test]
    fn d_sigma_phi_examples() {
        let d = single_arc();
        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Plus, 3)])).unwrap();
        assert_eq!((x.digraph.vertex_count(), x.digraph.arc_count()), (4, 5));
        let g = x.gamma_paths(0).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|p| p.arcs.len() == 3));

        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Minus, 2)])).unwrap();
        assert_eq!((x.digraph.vertex_count(), x.digraph.arc_count()), (6, 6));
        let g = x.gamma_paths(0).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|p| p.arcs.len() == 4));

        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Plus, 1)])).unwrap();
        assert_eq!(x.digraph.arc_count(), 3);
        assert_eq!(x.digraph.arcs(), &[(0, 2), (2, 3), (3, 1)]);
        assert!(x.gamma_paths(1).is_err());
    }

    #[test]
    fn vertex_ids_deterministic() {
        let g = Multigraph::from_one_based(2, &[(1, 2), (2, 1)]).unwrap();
        let d = Orientation::as_stored(&g);
        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Minus, 2), (Sign::Plus, 1)])).unwrap();
        let labels: Vec<String> = x.vertices.iter().map(ToString::to_string).collect();
        assert_eq!(labels, ["v1", "v2", "t1", "x1_1", "x1_2", "h1", "t2", "h2"]);
        let dot = x.to_dot();
        assert!(dot.contains("label=\"x1_2\""));
    }

    #[test]
    fn gamma_path_sharing() {
        let d = single_arc();
        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Plus, 2)])).unwrap();
        let g = x.gamma_paths(0).unwrap();
        assert_eq!(g[0].arcs[0], g[1].arcs[0]);
        assert_eq!(g[0].arcs[2], g[1].arcs[2]);
        assert_ne!(g[0].arcs[1], g[1].arcs[1]);
        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Minus, 1)])).unwrap();
        assert_eq!(x.gamma_paths(0).unwrap()[0].arcs.len(), 4);
    }

    #[test]
    fn structure_examples() {
        let d = single_arc();
        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Plus, 1)])).unwrap();
        assert_eq!(
            x.check_eulerian_structure(&[false; 3]),
            EulerVerdict::Eulerian { decomposition: vec![] }
        );
        assert_eq!(
            x.check_eulerian_structure(&[true; 3]),
            EulerVerdict::Unbalanced { vertex: 0, out: 1, inn: 0 }
        );

        // v->w with phi+ = 2 and w->v with phi+ = 1.
        let g = Multigraph::from_one_based(2, &[(1, 2), (2, 1)]).unwrap();
        let d = Orientation::as_stored(&g);
        let x = build_d_sigma_phi(&d, &sign_data(&d, &[(Sign::Plus, 2), (Sign::Plus, 1)])).unwrap();
        let mut sel = vec![false; x.digraph.arc_count()];
        for p in [&x.paths[0][1], &x.paths[1][0]] {
            for &a in p {
                sel[a] = true;
            }
        }
        assert_eq!(
            x.check_eulerian_structure(&sel),
            EulerVerdict::Eulerian { decomposition: vec![(0, 2), (1, 1)] }
        );
        // Both middle arcs of the first gadget at once is not a γ-path union.
        let mut both = sel.clone();
        both[x.paths[0][0][1]] = true;
        assert_eq!(x.check_eulerian_structure(&both), EulerVerdict::NotGammaUnion { edge: 0 });
    }

    fn arb_gadget_graph() -> impl Strategy<Value = (Orientation, Vec<(Sign, u64)>)> {
        (2usize..=4)
            .prop_flat_map(|n| {
                proptest::collection::vec(
                    ((0..n, 0..n - 1), prop_oneof![Just(Sign::Plus), Just(Sign::Minus)], 1u64..=2),
                    1..=3,
                )
                .prop_map(move |es| (n, es))
            })
            .prop_map(|(n, es)| {
                let edges = es.iter().map(|&((u, v), _, _)| (u, if v >= u { v + 1 } else { v })).collect();
                let g = Multigraph::new(n, edges).unwrap();
                (Orientation::as_stored(&g), es.into_iter().map(|(_, s, k)| (s, k)).collect())
            })
    }

    proptest! {
        #[test]
        fn structure_matches_naive_balance((d, spec) in arb_gadget_graph(), seed in any::<u64>()) {
            let x = build_d_sigma_phi(&d, &sign_data(&d, &spec)).unwrap();
            let arcs = x.digraph.arc_count();
            if arcs <= 14 {
                for code in 0u64..(1 << arcs) {
                    let sel: Vec<bool> = (0..arcs).map(|a| code >> a & 1 == 1).collect();
                    let v = x.check_eulerian_structure(&sel);
                    prop_assert_eq!(matches!(v, EulerVerdict::Eulerian { .. }), x.digraph.is_eulerian_subset(&sel));
                }
            } else {
                let mut s = seed;
                for _ in 0..2000 {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let sel: Vec<bool> = (0..arcs).map(|a| (s >> (a % 64)) & 1 == 1).collect();
                    let v = x.check_eulerian_structure(&sel);
                    prop_assert_eq!(matches!(v, EulerVerdict::Eulerian { .. }), x.digraph.is_eulerian_subset(&sel));
                }
            }
        }

        #[test]
        fn gamma_paths_shape((d, spec) in arb_gadget_graph()) {
            let x = build_d_sigma_phi(&d, &sign_data(&d, &spec)).unwrap();
            let mut owner = vec![None; x.digraph.arc_count()];
            for (e, &(sign, k)) in spec.iter().enumerate() {
                let paths = x.gamma_paths(e).unwrap();
                prop_assert_eq!(paths.len() as u64, k);
                let (v, w) = d.arc(e);
                for p in &paths {
                    prop_assert_eq!(p.arcs.len(), if sign == Sign::Plus { 3 } else { 4 });
                    prop_assert_eq!(x.vertices[x.digraph.arcs()[p.arcs[0]].0], AuxVertex::Original(v));
                    prop_assert_eq!(x.vertices[x.digraph.arcs()[*p.arcs.last().unwrap()].1], AuxVertex::Original(w));
                    for &a in &p.arcs {
                        prop_assert!(owner[a].is_none() || owner[a] == Some(e));
                        owner[a] = Some(e);
                    }
                }
                for i in 0..paths.len() {
                    for j in i + 1..paths.len() {
                        let shared: Vec<_> = paths[i].arcs.iter().filter(|a| paths[j].arcs.contains(a)).collect();
                        prop_assert_eq!(shared, vec![&paths[i].arcs[0], paths[i].arcs.last().unwrap()]);
                    }
                }
            }
            let expected: u64 = spec.iter().map(|&(s, k)| if s == Sign::Plus { 2 + k } else { 2 + 2 * k }).sum();
            prop_assert_eq!(x.digraph.arc_count() as u64, expected);
        }
    }
}
