//! Minimum covers of a matching by good, signable or Z-signable
//! sub-matchings, and the multigraph lifts they induce.
//!
//! A cover here is always a partition of the pair set: any union cover can be
//! shrunk to a partition without increasing its size, because subsets of a
//! matching in one of these classes stay in the class.

use std::collections::HashMap;

use crate::caps::check_cap;
use crate::correspondence::{
    classify_pairs, ClassRank, CorrespondenceAssignment, EdgeClass, Pair, PartialMatching,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graph::{EdgeId, Multigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiftMode {
    Good,
    Signable,
    ZSignable,
}

impl LiftMode {
    pub fn name(self) -> &'static str {
        match self {
            LiftMode::Good => "good",
            LiftMode::Signable => "signable",
            LiftMode::ZSignable => "zsignable",
        }
    }

    pub fn rank(self) -> ClassRank {
        match self {
            LiftMode::Good => ClassRank::Good,
            LiftMode::Signable => ClassRank::Signable,
            LiftMode::ZSignable => ClassRank::ZSignable,
        }
    }

    pub fn parse(s: &str) -> Result<LiftMode> {
        match s {
            "g" | "good" => Ok(LiftMode::Good),
            "s" | "signable" => Ok(LiftMode::Signable),
            "z" | "zsignable" => Ok(LiftMode::ZSignable),
            other => Err(Error::Parse(format!("unknown lift mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPart {
    pub pairs: Vec<Pair>,
    pub class: EdgeClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingCover {
    pub mode: LiftMode,
    pub parts: Vec<CoverPart>,
}

impl MatchingCover {
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    fn from_groups(field: &FieldSpec, mode: LiftMode, groups: Vec<Vec<Pair>>) -> MatchingCover {
        let parts = groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|pairs| {
                let class = classify_pairs(field, &pairs);
                debug_assert!(class.rank() <= mode.rank());
                CoverPart { pairs, class }
            })
            .collect();
        MatchingCover { mode, parts }
    }
}

/// Groups pairs by a key, in order of first appearance.
fn group_by_key<K: Eq + std::hash::Hash>(pairs: &[Pair], key: impl Fn(&Pair) -> K) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut of_pair = Vec::with_capacity(pairs.len());
    for (i, p) in pairs.iter().enumerate() {
        let next = groups.len();
        let g = *index.entry(key(p)).or_insert(next);
        if g == next {
            groups.push(Vec::new());
        }
        groups[g].push(i);
        of_pair.push(g);
    }
    (groups, of_pair)
}

/// One part per distinct difference `c1 - c2`.
pub fn omega_good(pairs: &[Pair], field: &FieldSpec) -> MatchingCover {
    let (groups, _) = group_by_key(pairs, |(c1, c2)| field.sub(c1, c2));
    let groups = groups
        .into_iter()
        .map(|g| g.into_iter().map(|i| pairs[i].clone()).collect())
        .collect();
    MatchingCover::from_groups(field, LiftMode::Good, groups)
}

/// Minimum number of signable parts.
///
/// Every pair lies in exactly one difference class (`c1 - c2 = a`) and one
/// sum class (`c1 + c2 = b`), so choosing the fewest classes that cover all
/// pairs is a minimum vertex cover in the bipartite graph whose edges are the
/// pairs. That is solved exactly through a maximum matching and König's
/// construction. Pairs covered by both a chosen difference class and a chosen
/// sum class go to the difference class.
pub fn omega_signable(pairs: &[Pair], field: &FieldSpec) -> MatchingCover {
    if field.characteristic() == 2 {
        // Sums and differences coincide.
        let mut cover = omega_good(pairs, field);
        cover.mode = LiftMode::Signable;
        return cover;
    }
    let (diff_groups, diff_of) = group_by_key(pairs, |(c1, c2)| field.sub(c1, c2));
    let (sum_groups, sum_of) = group_by_key(pairs, |(c1, c2)| field.add(c1, c2));
    let left = diff_groups.len();
    let right = sum_groups.len();
    let mut adj = vec![Vec::new(); left];
    for i in 0..pairs.len() {
        adj[diff_of[i]].push(sum_of[i]);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let (match_left, match_right) = max_bipartite_matching(&adj, right);
    let (cover_left, cover_right) = koenig_cover(&adj, &match_left, &match_right);

    let mut diff_parts: Vec<Vec<Pair>> = vec![Vec::new(); left];
    let mut sum_parts: Vec<Vec<Pair>> = vec![Vec::new(); right];
    for (i, p) in pairs.iter().enumerate() {
        if cover_left[diff_of[i]] {
            diff_parts[diff_of[i]].push(p.clone());
        } else {
            debug_assert!(cover_right[sum_of[i]]);
            sum_parts[sum_of[i]].push(p.clone());
        }
    }
    let groups = diff_parts.into_iter().chain(sum_parts).collect();
    MatchingCover::from_groups(field, LiftMode::Signable, groups)
}

/// Kuhn's augmenting-path maximum matching. Returns the partner of each left
/// and right vertex.
fn max_bipartite_matching(adj: &[Vec<usize>], right: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        ml: &mut [Option<usize>],
        mr: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if mr[v].is_none() || augment(mr[v].unwrap(), adj, seen, ml, mr) {
                ml[u] = Some(v);
                mr[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut ml = vec![None; adj.len()];
    let mut mr = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut ml, &mut mr);
    }
    (ml, mr)
}

/// König: with Z the vertices reachable from unmatched left vertices by
/// alternating paths, `(L \ Z) ∪ (R ∩ Z)` is a minimum vertex cover.
fn koenig_cover(
    adj: &[Vec<usize>],
    ml: &[Option<usize>],
    mr: &[Option<usize>],
) -> (Vec<bool>, Vec<bool>) {
    let mut zl = vec![false; adj.len()];
    let mut zr = vec![false; mr.len()];
    let mut stack: Vec<usize> = (0..adj.len()).filter(|&u| ml[u].is_none()).collect();
    for &u in &stack {
        zl[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if zr[v] || ml[u] == Some(v) {
                continue;
            }
            zr[v] = true;
            if let Some(w) = mr[v] {
                if !zl[w] {
                    zl[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    (zl.iter().map(|&z| !z).collect(), zr)
}

/// Minimum number of Z-signable parts, by exact branch and bound over the
/// maximal lines `c1 = phi*c2 + a` with `phi` in the unit subgroup that pass
/// through at least two pairs (single pairs are always Z-signable).
pub fn omega_zsignable(pairs: &[Pair], field: &FieldSpec, cap: usize) -> Result<MatchingCover> {
    check_cap("Z-signable cover pairs", pairs.len(), cap.min(63))?;
    let n = pairs.len();
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };

    let mut lines: Vec<u64> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (c1, c2) = &pairs[i];
            let (d1, d2) = &pairs[j];
            let Ok(phi) = field.div(&field.sub(c1, d1), &field.sub(c2, d2)) else {
                continue;
            };
            if !field.in_unit_subgroup(&phi) {
                continue;
            }
            let a = field.sub(c1, &field.mul(&phi, c2));
            let mask = pairs
                .iter()
                .enumerate()
                .filter(|(_, (x1, x2))| field.sub(x1, &field.mul(&phi, x2)) == a)
                .fold(0u64, |m, (k, _)| m | 1 << k);
            lines.push(mask);
        }
    }
    lines.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    lines.dedup();
    let max_line = lines.first().map_or(1, |m| m.count_ones().max(1)) as usize;

    // Greedy upper bound.
    let mut best: Vec<u64> = Vec::new();
    let mut covered = 0u64;
    while covered != full {
        let pick = lines
            .iter()
            .map(|&l| l & !covered)
            .max_by_key(|l| l.count_ones())
            .filter(|l| l.count_ones() >= 2)
            .unwrap_or_else(|| 1u64 << (!covered & full).trailing_zeros());
        best.push(pick);
        covered |= pick;
    }

    fn search(
        covered: u64,
        full: u64,
        chosen: &mut Vec<u64>,
        best: &mut Vec<u64>,
        lines: &[u64],
        max_line: usize,
    ) {
        if covered == full {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        let remaining = (full & !covered).count_ones() as usize;
        if chosen.len() + remaining.div_ceil(max_line) >= best.len() {
            return;
        }
        let first = (full & !covered).trailing_zeros();
        let bit = 1u64 << first;
        for &l in lines.iter().filter(|&&l| l & bit != 0) {
            chosen.push(l & !covered);
            search(covered | l, full, chosen, best, lines, max_line);
            chosen.pop();
        }
        chosen.push(bit);
        search(covered | bit, full, chosen, best, lines, max_line);
        chosen.pop();
    }
    let mut chosen = Vec::new();
    search(0, full, &mut chosen, &mut best, &lines, max_line);

    let groups = best
        .into_iter()
        .map(|mask| (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| pairs[k].clone()).collect())
        .collect();
    Ok(MatchingCover::from_groups(field, LiftMode::ZSignable, groups))
}

pub fn cover(pairs: &[Pair], field: &FieldSpec, mode: LiftMode, zcap: usize) -> Result<MatchingCover> {
    match mode {
        LiftMode::Good => Ok(omega_good(pairs, field)),
        LiftMode::Signable => Ok(omega_signable(pairs, field)),
        LiftMode::ZSignable => omega_zsignable(pairs, field, zcap),
    }
}

/// A lifted multigraph with its split assignment. `provenance[i]` is the
/// original edge and the cover part index of lifted edge `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftResult {
    pub mode: LiftMode,
    pub assignment: CorrespondenceAssignment,
    pub provenance: Vec<(EdgeId, usize)>,
}

impl LiftResult {
    /// The trivial lift: every edge kept once, parts equal to the matchings.
    pub fn identity(a: &CorrespondenceAssignment, mode: LiftMode) -> LiftResult {
        LiftResult {
            mode,
            assignment: a.clone(),
            provenance: (0..a.graph().edge_count()).map(|e| (e, 0)).collect(),
        }
    }

    /// Per original edge, the number of lifted copies.
    pub fn multiplicities(&self, original_edges: usize) -> Vec<usize> {
        let mut w = vec![0; original_edges];
        for &(e, _) in &self.provenance {
            w[e] += 1;
        }
        w
    }
}

/// Replaces each edge by one parallel copy per cover part. Empty matchings
/// contribute no edges.
pub fn lift(a: &CorrespondenceAssignment, mode: LiftMode, zcap: usize) -> Result<LiftResult> {
    let field = a.field();
    let mut endpoints = Vec::new();
    let mut matchings = Vec::new();
    let mut provenance = Vec::new();
    for m in a.matchings() {
        let c = cover(&m.pairs, &field, mode, zcap)?;
        for (i, part) in c.parts.into_iter().enumerate() {
            let id = endpoints.len();
            endpoints.push(a.graph().edges()[m.edge]);
            matchings.push(PartialMatching { edge: id, tail: m.tail, head: m.head, pairs: part.pairs });
            provenance.push((m.edge, i));
        }
    }
    let graph = Multigraph::new(a.graph().vertex_count(), endpoints)?;
    let assignment = CorrespondenceAssignment::new(graph, field, a.lists().to_vec(), matchings)?;
    Ok(LiftResult { mode, assignment, provenance })
}

/// Checks that a lift really splits `original`: every lifted edge copies its
/// source edge's endpoints, and per source edge the parts partition the
/// original pair set.
pub fn check_lift(original: &CorrespondenceAssignment, lift: &LiftResult) -> Result<()> {
    let g = lift.assignment.graph();
    if lift.provenance.len() != g.edge_count() {
        return Err(Error::InvalidMatching { edge: 0, reason: "provenance length mismatch".into() });
    }
    let mut collected: Vec<Vec<Pair>> = vec![Vec::new(); original.graph().edge_count()];
    for (i, &(e, _)) in lift.provenance.iter().enumerate() {
        let om = original.matching(e)?;
        let lm = lift.assignment.matching(i)?;
        let (u, v) = original.graph().endpoints(e)?;
        let (x, y) = g.endpoints(i)?;
        if !((u, v) == (x, y) || (u, v) == (y, x)) {
            return Err(Error::InvalidMatching { edge: i + 1, reason: "lifted edge moved".into() });
        }
        collected[e].extend(lm.pairs_from(om.tail));
    }
    for (e, mut got) in collected.into_iter().enumerate() {
        let mut want = original.matching(e)?.pairs.clone();
        got.sort();
        want.sort();
        if got != want {
            return Err(Error::InvalidMatching {
                edge: e + 1,
                reason: "lifted parts do not partition the matching".into(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::classify_assignment;
    use crate::field::{FieldElement, Sign};
    use crate::fixtures;

    fn q(n: i64) -> FieldElement {
        FieldSpec::Rationals.from_i64(n)
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<Pair> {
        v.iter().map(|&(a, b)| (q(a), q(b))).collect()
    }

    #[test]
    fn good_examples() {
        let f = FieldSpec::Rationals;
        assert_eq!(omega_good(&pairs(&[(1, 1), (2, 2), (3, 3)]), &f).k(), 1);
        assert_eq!(omega_good(&pairs(&[(1, 2), (2, 1)]), &f).k(), 2);
        let c = omega_good(&pairs(&[(1, 3), (2, 4), (4, 1)]), &f);
        assert_eq!(c.k(), 2);
        assert_eq!(c.parts[0].pairs.len(), 2);
        assert_eq!(omega_good(&[], &f).k(), 0);
    }

    #[test]
    fn signable_examples() {
        let f = FieldSpec::Rationals;
        let c = omega_signable(&pairs(&[(1, 2), (2, 1)]), &f);
        assert_eq!(c.k(), 1);
        assert_eq!(c.parts[0].class, EdgeClass::Signable { sign: Sign::Minus, a: q(3) });
        let c = omega_signable(&pairs(&[(0, 0), (1, 2), (2, 1)]), &f);
        assert_eq!(c.k(), 2);
        assert_eq!(omega_signable(&[], &f).k(), 0);
    }

    #[test]
    fn signable_tie_goes_to_difference_class() {
        // (0,0) lies in difference class 0 and sum class 0; (1,1) in
        // difference 0, sum 2; (2,-2) in difference 4, sum 0. Any minimum
        // cover uses two classes; ties favour differences.
        let f = FieldSpec::Rationals;
        let c = omega_signable(&pairs(&[(0, 0), (1, 1), (2, -2)]), &f);
        assert_eq!(c.k(), 2);
        for part in &c.parts {
            assert!(part.class.rank() <= ClassRank::Signable);
        }
    }

    #[test]
    fn zsignable_examples() {
        let f = FieldSpec::Rationals;
        let c = omega_zsignable(&pairs(&[(2, 1), (4, 2)]), &f, 12).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(c.parts[0].class, EdgeClass::ZSignable { phi: q(2), a: q(0) });
        assert_eq!(omega_zsignable(&pairs(&[(1, 2), (2, 5)]), &f, 12).unwrap().k(), 2);
        let p5 = FieldSpec::prime(5).unwrap();
        let r = |a: u64, b: u64| (FieldElement::Residue(a), FieldElement::Residue(b));
        let c = omega_zsignable(&[r(1, 2), r(2, 1)], &p5, 12).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(c.parts[0].class.witness(&p5).unwrap(), (FieldElement::Residue(4), FieldElement::Residue(3)));
        let many: Vec<_> = (0..13).map(|i| (q(i), q(i))).collect();
        assert!(matches!(omega_zsignable(&many, &f, 12), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lift_examples() {
        let w = fixtures::w6_lists();
        for mode in [LiftMode::Good, LiftMode::Signable, LiftMode::ZSignable] {
            let l = lift(&w, mode, 12).unwrap();
            assert_eq!(l.assignment.graph(), w.graph());
            check_lift(&w, &l).unwrap();
        }

        let c4 = fixtures::c4_figure();
        let l = lift(&c4, LiftMode::Good, 12).unwrap();
        assert_eq!(l.assignment.graph().edge_count(), 5);
        assert_eq!(l.multiplicities(4)[fixtures::C4_CROSSED_EDGE], 2);
        check_lift(&c4, &l).unwrap();

        let grid = fixtures::toroidal_grid(2, 0).unwrap();
        let l = lift(&grid, LiftMode::Good, 12).unwrap();
        assert_eq!(l.assignment.graph().edge_count(), 40);
        let doubled = l.multiplicities(32).iter().filter(|&&w| w == 2).count();
        assert_eq!(doubled, 8);
        assert!(l.assignment.graph().is_bipartite());
    }

    #[test]
    fn lifted_assignment_is_in_mode_class() {
        for a in [fixtures::c4_figure(), fixtures::toroidal_grid(2, 3).unwrap(), fixtures::w6_signable()] {
            for mode in [LiftMode::Good, LiftMode::Signable, LiftMode::ZSignable] {
                let l = lift(&a, mode, 12).unwrap();
                let d = l.assignment.stored_orientation();
                let class = classify_assignment(&l.assignment, &d).unwrap();
                assert!(class.rank <= mode.rank(), "{mode:?}: {:?}", class.rank);
            }
        }
    }
}
