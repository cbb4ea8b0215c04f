//! Backtracking `(L, C)`-coloring search and coloring verification.

use std::collections::HashSet;

use crate::correspondence::CorrespondenceAssignment;
use crate::field::FieldElement;
use crate::graph::{EdgeId, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring(pub Vec<FieldElement>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringCheck {
    Valid,
    /// `f(v)` is not in `L(v)` (or `f` is not total when `v >= n`).
    NotInList(Vertex),
    /// The colors at the ends of this edge are matched.
    Conflict(EdgeId),
}

impl ColoringCheck {
    pub fn is_valid(&self) -> bool {
        *self == ColoringCheck::Valid
    }
}

pub fn check_coloring(a: &CorrespondenceAssignment, f: &Coloring) -> ColoringCheck {
    let n = a.graph().vertex_count();
    if f.0.len() != n {
        return ColoringCheck::NotInList(f.0.len().min(n));
    }
    if let Some(v) = (0..n).find(|&v| !a.lists()[v].contains(&f.0[v])) {
        return ColoringCheck::NotInList(v);
    }
    for m in a.matchings() {
        let pair = (f.0[m.tail].clone(), f.0[m.head].clone());
        if m.pairs.contains(&pair) {
            return ColoringCheck::Conflict(m.edge);
        }
    }
    ColoringCheck::Valid
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Colorable(Coloring),
    NotColorable,
    BudgetExhausted { nodes: u64 },
}

impl SolveOutcome {
    pub fn coloring(&self) -> Option<&Coloring> {
        match self {
            SolveOutcome::Colorable(c) => Some(c),
            _ => None,
        }
    }
}

/// Conflict `(other vertex, my color index, other color index)` per vertex.
type Conflicts = Vec<Vec<(Vertex, usize, usize)>>;

struct Search {
    order: Vec<Vertex>,
    conflicts: Conflicts,
    /// `removed[v][i]` counts assigned neighbours that forbid color `i` of `v`.
    removed: Vec<Vec<u32>>,
    chosen: Vec<Option<usize>>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn run(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let v = self.order[depth];
        for i in 0..self.removed[v].len() {
            if self.removed[v][i] > 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.chosen[v] = Some(i);
            let mut wiped = false;
            for k in 0..self.conflicts[v].len() {
                let (w, mine, theirs) = self.conflicts[v][k];
                if mine == i && self.chosen[w].is_none() {
                    self.removed[w][theirs] += 1;
                    if self.removed[w][theirs] == 1 && self.removed[w].iter().all(|&r| r > 0) {
                        wiped = true;
                    }
                }
            }
            if !wiped {
                match self.run(depth + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            for k in 0..self.conflicts[v].len() {
                let (w, mine, theirs) = self.conflicts[v][k];
                if mine == i && self.chosen[w].is_none() {
                    self.removed[w][theirs] -= 1;
                }
            }
            self.chosen[v] = None;
        }
        Some(false)
    }
}

/// Searches for an `(L, C)`-coloring, visiting vertices by decreasing degree
/// (ties by id) and pruning colors matched to already colored neighbours.
/// `budget` bounds the number of color assignments tried.
pub fn solve(a: &CorrespondenceAssignment, budget: u64) -> SolveOutcome {
    let n = a.graph().vertex_count();
    let lists = a.lists();
    if lists.iter().any(Vec::is_empty) {
        return SolveOutcome::NotColorable;
    }
    let mut conflicts: Conflicts = vec![Vec::new(); n];
    let mut seen = HashSet::new();
    for m in a.matchings() {
        for (c1, c2) in &m.pairs {
            let i = lists[m.tail].iter().position(|c| c == c1).expect("validated pair");
            let j = lists[m.head].iter().position(|c| c == c2).expect("validated pair");
            if seen.insert((m.tail, i, m.head, j)) {
                conflicts[m.tail].push((m.head, i, j));
                conflicts[m.head].push((m.tail, j, i));
            }
        }
    }
    let degrees = a.graph().degrees();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degrees[v]), v));
    let mut s = Search {
        order,
        conflicts,
        removed: lists.iter().map(|l| vec![0; l.len()]).collect(),
        chosen: vec![None; n],
        nodes: 0,
        budget,
    };
    match s.run(0) {
        Some(true) => SolveOutcome::Colorable(Coloring(
            s.chosen.iter().enumerate().map(|(v, i)| lists[v][i.expect("complete")].clone()).collect(),
        )),
        Some(false) => SolveOutcome::NotColorable,
        None => SolveOutcome::BudgetExhausted { nodes: s.nodes },
    }
}

/// Plain product-space enumeration; `None` when no coloring exists.
pub fn brute_force(a: &CorrespondenceAssignment) -> Option<Coloring> {
    let lists = a.lists();
    if lists.iter().any(Vec::is_empty) {
        return None;
    }
    let mut idx = vec![0usize; lists.len()];
    loop {
        let f = Coloring(idx.iter().enumerate().map(|(v, &i)| lists[v][i].clone()).collect());
        if check_coloring(a, &f).is_valid() {
            return Some(f);
        }
        let mut v = 0;
        loop {
            if v == idx.len() {
                return None;
            }
            idx[v] += 1;
            if idx[v] < lists[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{apply_renaming, PartialMatching};
    use crate::field::FieldSpec;
    use crate::fixtures;
    use crate::graph::Multigraph;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn q(n: i64) -> FieldElement {
        FieldSpec::Rationals.from_i64(n)
    }

    #[test]
    fn check_examples() {
        let c4 = fixtures::c4_figure();
        assert!(matches!(check_coloring(&c4, &Coloring(vec![q(1); 4])), ColoringCheck::Conflict(_)));
        let k2 = fixtures::k2_signed();
        assert!(check_coloring(&k2, &Coloring(vec![q(1), q(-1)])).is_valid());
        assert_eq!(check_coloring(&k2, &Coloring(vec![q(-1), q(1)])), ColoringCheck::Conflict(0));
        assert_eq!(check_coloring(&k2, &Coloring(vec![q(5), q(1)])), ColoringCheck::NotInList(0));

        let g = Multigraph::from_one_based(2, &[(1, 2)]).unwrap();
        let empty = CorrespondenceAssignment::new(
            g,
            FieldSpec::Rationals,
            vec![vec![q(1)], vec![q(1)]],
            vec![PartialMatching { edge: 0, tail: 0, head: 1, pairs: vec![] }],
        )
        .unwrap();
        assert!(check_coloring(&empty, &Coloring(vec![q(1), q(1)])).is_valid());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&fixtures::c4_figure(), 10_000_000), SolveOutcome::NotColorable);
        assert_eq!(solve(&fixtures::w6_lists(), 10_000_000), SolveOutcome::NotColorable);
        let c4 = fixtures::cycle(4).unwrap();
        assert_eq!(solve(&c4, 10_000_000), SolveOutcome::Colorable(Coloring(vec![q(1), q(2), q(1), q(2)])));
        assert_eq!(solve(&fixtures::cycle(5).unwrap(), 10_000_000), SolveOutcome::NotColorable);
        let w = solve(&fixtures::w6_signable(), 10_000_000);
        assert!(check_coloring(&fixtures::w6_signable(), w.coloring().unwrap()).is_valid());
        assert!(matches!(solve(&fixtures::cycle(9).unwrap(), 3), SolveOutcome::BudgetExhausted { .. }));
    }

    pub(crate) fn arb_assignment(field: FieldSpec) -> impl Strategy<Value = CorrespondenceAssignment> {
        let palette: i64 = 4;
        (2usize..=5)
            .prop_flat_map(move |n| {
                (
                    Just(n),
                    proptest::collection::vec((0..n, 0..n - 1), 0..=7),
                    proptest::collection::vec(proptest::sample::subsequence((0..palette).collect::<Vec<_>>(), 1..=3), n),
                    any::<u64>(),
                )
            })
            .prop_map(move |(n, es, lists, seed)| {
                let edges: Vec<(usize, usize)> =
                    es.into_iter().map(|(u, v)| (u, if v >= u { v + 1 } else { v })).collect();
                let g = Multigraph::new(n, edges.clone()).unwrap();
                let lists: Vec<Vec<FieldElement>> =
                    lists.iter().map(|l| l.iter().map(|&c| field.from_i64(c)).collect()).collect();
                let mut s = seed;
                let mut next = || {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    s >> 33
                };
                let matchings = edges
                    .iter()
                    .enumerate()
                    .map(|(e, &(u, v))| {
                        let mut used = HashSet::new();
                        let mut pairs = Vec::new();
                        for c1 in &lists[u] {
                            let c2 = &lists[v][next() as usize % lists[v].len()];
                            if next() % 3 != 0 && used.insert(c2.clone()) {
                                pairs.push((c1.clone(), c2.clone()));
                            }
                        }
                        PartialMatching { edge: e, tail: u, head: v, pairs }
                    })
                    .collect();
                CorrespondenceAssignment::new(g, field, lists, matchings).unwrap()
            })
    }

    proptest! {
        #[test]
        fn sound_and_complete(a in arb_assignment(FieldSpec::Rationals)) {
            let got = solve(&a, 10_000_000);
            match (&got, brute_force(&a)) {
                (SolveOutcome::Colorable(f), Some(_)) => prop_assert!(check_coloring(&a, f).is_valid()),
                (SolveOutcome::NotColorable, None) => {}
                (g, b) => prop_assert!(false, "solver {:?} vs brute force {:?}", g, b),
            }
        }

        #[test]
        fn renaming_transport(a in arb_assignment(FieldSpec::Rationals), shift in -5i64..5, flip in any::<u8>()) {
            let f = a.field();
            let h: Vec<HashMap<FieldElement, FieldElement>> = a
                .lists()
                .iter()
                .enumerate()
                .map(|(v, l)| {
                    l.iter()
                        .map(|c| {
                            let s = f.add(c, &f.from_i64(shift + v as i64));
                            let img = if flip >> (v % 8) & 1 == 1 { f.neg(&s) } else { s };
                            (c.clone(), img)
                        })
                        .collect()
                })
                .collect();
            let b = apply_renaming(&a, &h).unwrap();
            let sa = solve(&a, 10_000_000);
            let sb = solve(&b, 10_000_000);
            prop_assert_eq!(sa.coloring().is_some(), sb.coloring().is_some());
            if let Some(c) = sa.coloring() {
                let mapped = Coloring(c.0.iter().enumerate().map(|(v, x)| h[v][x].clone()).collect());
                prop_assert!(check_coloring(&b, &mapped).is_valid());
            }
        }
    }
}
