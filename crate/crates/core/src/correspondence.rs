//! Correspondence assignments `(L, C)`, their classification into the
//! good / signable / Z-signable / generalized signable hierarchy, sign data
//! relative to an orientation, and list renamings.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::field::{Factorization, FieldElement, FieldSpec, Sign};
use crate::graph::{EdgeId, Multigraph, Orientation, Vertex};

pub type Pair = (FieldElement, FieldElement);

/// The partial matching of one edge. `pairs` hold `(c1, c2)` with
/// `c1 ∈ L(tail)` and `c2 ∈ L(head)`; `tail`/`head` only fix how pairs are
/// read, not an orientation of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMatching {
    pub edge: EdgeId,
    pub tail: Vertex,
    pub head: Vertex,
    pub pairs: Vec<Pair>,
}

impl PartialMatching {
    /// Pairs read from `from`'s side: swapped when `from` is the head.
    pub fn pairs_from(&self, from: Vertex) -> Vec<Pair> {
        if from == self.tail {
            self.pairs.clone()
        } else {
            self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceAssignment {
    graph: Multigraph,
    field: FieldSpec,
    lists: Vec<Vec<FieldElement>>,
    matchings: Vec<PartialMatching>,
}

impl CorrespondenceAssignment {
    /// Validates lists (distinct field elements) and matchings (one per edge,
    /// endpoints agreeing with the edge, pairs drawn from the lists, injective
    /// on both sides). `matchings` may come in any order.
    pub fn new(
        graph: Multigraph,
        field: FieldSpec,
        lists: Vec<Vec<FieldElement>>,
        matchings: Vec<PartialMatching>,
    ) -> Result<CorrespondenceAssignment> {
        if lists.len() != graph.vertex_count() {
            return Err(Error::InvalidList {
                vertex: lists.len().min(graph.vertex_count()) + 1,
                reason: format!("{} lists for {} vertices", lists.len(), graph.vertex_count()),
            });
        }
        for (v, list) in lists.iter().enumerate() {
            let mut seen = HashSet::new();
            for c in list {
                if !field.contains(c) {
                    return Err(Error::InvalidList { vertex: v + 1, reason: format!("{c} is not in {field}") });
                }
                if !seen.insert(c) {
                    return Err(Error::InvalidList { vertex: v + 1, reason: format!("{c} repeated") });
                }
            }
        }
        let mut slots: Vec<Option<PartialMatching>> = vec![None; graph.edge_count()];
        for m in matchings {
            let e = m.edge;
            let (u, v) = graph.endpoints(e)?;
            if !((m.tail, m.head) == (u, v) || (m.tail, m.head) == (v, u)) {
                return Err(Error::InvalidMatching {
                    edge: e + 1,
                    reason: format!("endpoints ({},{}) do not match the edge", m.tail + 1, m.head + 1),
                });
            }
            if slots[e].is_some() {
                return Err(Error::InvalidMatching { edge: e + 1, reason: "given twice".into() });
            }
            let mut left = HashSet::new();
            let mut right = HashSet::new();
            for (c1, c2) in &m.pairs {
                if !lists[m.tail].contains(c1) || !lists[m.head].contains(c2) {
                    return Err(Error::InvalidMatching {
                        edge: e + 1,
                        reason: format!("pair ({c1},{c2}) not drawn from the lists"),
                    });
                }
                if !left.insert(c1) || !right.insert(c2) {
                    return Err(Error::InvalidMatching {
                        edge: e + 1,
                        reason: format!("pair ({c1},{c2}) breaks the matching property"),
                    });
                }
            }
            slots[e] = Some(m);
        }
        let matchings = slots
            .into_iter()
            .enumerate()
            .map(|(e, m)| {
                m.ok_or(Error::InvalidMatching { edge: e + 1, reason: "missing".into() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CorrespondenceAssignment { graph, field, lists, matchings })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn lists(&self) -> &[Vec<FieldElement>] {
        &self.lists
    }

    pub fn list_sizes(&self) -> Vec<usize> {
        self.lists.iter().map(Vec::len).collect()
    }

    pub fn matchings(&self) -> &[PartialMatching] {
        &self.matchings
    }

    pub fn matching(&self, e: EdgeId) -> Result<&PartialMatching> {
        self.matchings.get(e).ok_or(Error::UnknownEdge(e + 1))
    }

    /// The orientation given by each matching's `tail`.
    pub fn stored_orientation(&self) -> Orientation {
        let arcs: Vec<_> = self.matchings.iter().map(|m| (m.tail, m.head)).collect();
        Orientation::from_arcs(&self.graph, &arcs).expect("matching endpoints validated")
    }
}

/// Most specific class of one directed matching, with witnesses `(phi, a)`
/// such that `c1 - phi*c2 = a` for every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeClass {
    Straight,
    Good { a: FieldElement },
    Signable { sign: Sign, a: FieldElement },
    ZSignable { phi: FieldElement, a: FieldElement },
    GeneralSignable { phi: FieldElement, a: FieldElement },
    Irregular,
}

/// Coarse class used to compare edges and whole assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassRank {
    Good,
    Signable,
    ZSignable,
    GeneralSignable,
    Irregular,
}

impl ClassRank {
    pub fn name(self) -> &'static str {
        match self {
            ClassRank::Good => "good",
            ClassRank::Signable => "signable",
            ClassRank::ZSignable => "zsignable",
            ClassRank::GeneralSignable => "general-signable",
            ClassRank::Irregular => "irregular",
        }
    }
}

impl EdgeClass {
    pub fn rank(&self) -> ClassRank {
        match self {
            EdgeClass::Straight | EdgeClass::Good { .. } => ClassRank::Good,
            EdgeClass::Signable { .. } => ClassRank::Signable,
            EdgeClass::ZSignable { .. } => ClassRank::ZSignable,
            EdgeClass::GeneralSignable { .. } => ClassRank::GeneralSignable,
            EdgeClass::Irregular => ClassRank::Irregular,
        }
    }

    /// `(phi, a)` for every class except `Irregular`.
    pub fn witness(&self, field: &FieldSpec) -> Option<(FieldElement, FieldElement)> {
        match self {
            EdgeClass::Straight => Some((field.one(), field.zero())),
            EdgeClass::Good { a } => Some((field.one(), a.clone())),
            EdgeClass::Signable { sign, a } => Some((field.from_i64(sign.value()), a.clone())),
            EdgeClass::ZSignable { phi, a } | EdgeClass::GeneralSignable { phi, a } => {
                Some((phi.clone(), a.clone()))
            }
            EdgeClass::Irregular => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EdgeClass::Straight => "straight",
            other => other.rank().name(),
        }
    }
}

/// Classifies directed pairs `(c1, c2)`.
///
/// Two or more pairs force `phi = (c1 - c1') / (c2 - c2')` from the first two
/// (the `c2` are distinct by the matching property), which is then checked
/// against every pair.
pub fn classify_pairs(field: &FieldSpec, pairs: &[Pair]) -> EdgeClass {
    if pairs.iter().all(|(c1, c2)| c1 == c2) {
        return EdgeClass::Straight;
    }
    if pairs.len() == 1 {
        let (c1, c2) = &pairs[0];
        return EdgeClass::Good { a: field.sub(c1, c2) };
    }
    let (c1, c2) = &pairs[0];
    let (d1, d2) = &pairs[1];
    let Ok(phi) = field.div(&field.sub(c1, d1), &field.sub(c2, d2)) else {
        return EdgeClass::Irregular;
    };
    let a = field.sub(c1, &field.mul(&phi, c2));
    if pairs
        .iter()
        .any(|(x1, x2)| field.sub(x1, &field.mul(&phi, x2)) != a)
    {
        return EdgeClass::Irregular;
    }
    if phi.is_one() {
        EdgeClass::Good { a }
    } else if phi == field.from_i64(-1) {
        EdgeClass::Signable { sign: Sign::Minus, a }
    } else if field.in_unit_subgroup(&phi) {
        EdgeClass::ZSignable { phi, a }
    } else {
        EdgeClass::GeneralSignable { phi, a }
    }
}

/// Classifies edge `e` read in the direction `tail -> other endpoint`.
pub fn classify_edge(a: &CorrespondenceAssignment, e: EdgeId, tail: Vertex) -> Result<EdgeClass> {
    let m = a.matching(e)?;
    if tail != m.tail && tail != m.head {
        return Err(Error::InvalidOrientation(format!("vertex {} is not on edge {}", tail + 1, e + 1)));
    }
    Ok(classify_pairs(&a.field, &m.pairs_from(tail)))
}

/// Per-edge sign data: `c1 - phi*c2 = a` for every pair read along the arc,
/// and `phi = sign * magnitude` when `phi` lies in the unit subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSign {
    pub phi: FieldElement,
    pub a: FieldElement,
    pub factor: Option<Factorization>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignData {
    field: FieldSpec,
    orientation: Orientation,
    edges: Vec<EdgeSign>,
}

impl SignData {
    /// Assembles sign data directly, checking `phi != 0` and
    /// `phi = sign * magnitude` wherever a factorization is given.
    pub fn new(field: FieldSpec, orientation: Orientation, edges: Vec<EdgeSign>) -> Result<SignData> {
        if edges.len() != orientation.graph().edge_count() {
            return Err(Error::InvalidSignData(format!(
                "{} entries for {} edges",
                edges.len(),
                orientation.graph().edge_count()
            )));
        }
        for (e, s) in edges.iter().enumerate() {
            field.check(&s.phi)?;
            field.check(&s.a)?;
            if s.phi.is_zero() {
                return Err(Error::ZeroWeight(e + 1));
            }
            if let Some(f) = &s.factor {
                if f.magnitude == 0 || field.from_factorization(f) != s.phi {
                    return Err(Error::InvalidSignData(format!(
                        "edge {}: {}*{} is not {}",
                        e + 1,
                        f.sign,
                        f.magnitude,
                        s.phi
                    )));
                }
            }
        }
        Ok(SignData { field, orientation, edges })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn edges(&self) -> &[EdgeSign] {
        &self.edges
    }

    /// Signs of all edges, failing on an edge without a factorization.
    pub fn signs(&self) -> Result<Vec<Sign>> {
        self.factors().map(|f| f.into_iter().map(|f| f.sign).collect())
    }

    pub fn factors(&self) -> Result<Vec<Factorization>> {
        self.edges
            .iter()
            .enumerate()
            .map(|(e, s)| s.factor.ok_or(Error::NoFactorization(e + 1)))
            .collect()
    }

    /// Re-factorizes every edge with the given sign overrides (only
    /// meaningful over `Z_p`; over the rationals a contradicting sign fails).
    pub fn with_signs(&self, overrides: &[Option<Sign>]) -> Result<SignData> {
        let mut edges = self.edges.clone();
        for (e, s) in edges.iter_mut().enumerate() {
            let over = overrides.get(e).copied().flatten();
            if over.is_some() || s.factor.is_some() {
                s.factor = Some(self.field.positive_factorization(&s.phi, over)?);
            }
        }
        SignData::new(self.field, self.orientation.clone(), edges)
    }
}

/// Class of a whole assignment relative to an orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentClass {
    pub rank: ClassRank,
    pub edges: Vec<EdgeClass>,
    /// Present unless some edge is irregular.
    pub sign_data: Option<SignData>,
    pub irregular: Vec<EdgeId>,
}

pub fn classify_assignment(a: &CorrespondenceAssignment, d: &Orientation) -> Result<AssignmentClass> {
    classify_assignment_with_signs(a, d, &[])
}

/// As [`classify_assignment`], threading optional per-edge sign overrides
/// into the factorization of `phi` (missing entries mean no override).
pub fn classify_assignment_with_signs(
    a: &CorrespondenceAssignment,
    d: &Orientation,
    overrides: &[Option<Sign>],
) -> Result<AssignmentClass> {
    if d.graph() != a.graph() {
        return Err(Error::InvalidOrientation("orientation is for a different graph".into()));
    }
    let field = a.field;
    let mut edges = Vec::with_capacity(a.graph.edge_count());
    let mut signs = Vec::with_capacity(a.graph.edge_count());
    let mut irregular = Vec::new();
    for e in 0..a.graph.edge_count() {
        let class = classify_edge(a, e, d.tail(e))?;
        match class.witness(&field) {
            Some((phi, shift)) => {
                let factor = if field.in_unit_subgroup(&phi) {
                    Some(field.positive_factorization(&phi, overrides.get(e).copied().flatten())?)
                } else {
                    None
                };
                signs.push(EdgeSign { phi, a: shift, factor });
            }
            None => irregular.push(e),
        }
        edges.push(class);
    }
    let rank = edges.iter().map(EdgeClass::rank).max().unwrap_or(ClassRank::Good);
    let sign_data = if irregular.is_empty() {
        Some(SignData::new(field, d.clone(), signs)?)
    } else {
        None
    };
    Ok(AssignmentClass { rank, edges, sign_data, irregular })
}

/// Reverses the given edges: `phi ↦ phi⁻¹`, `a ↦ -phi⁻¹·a`, keeping the sign
/// preference of an existing factorization. The new witnesses are checked
/// against the matchings of `assignment`.
pub fn reverse_sign_data(
    assignment: &CorrespondenceAssignment,
    s: &SignData,
    edges: &[EdgeId],
) -> Result<SignData> {
    let field = s.field;
    let orientation = s.orientation.with_flipped(edges)?;
    let mut entries = s.edges.clone();
    let mut flipped = vec![false; entries.len()];
    for &e in edges {
        flipped[e] = !flipped[e];
    }
    for (e, entry) in entries.iter_mut().enumerate() {
        if !flipped[e] {
            continue;
        }
        let inv = field.inv(&entry.phi)?;
        let a = field.neg(&field.mul(&inv, &entry.a));
        let factor = if field.in_unit_subgroup(&inv) {
            let preferred = entry.factor.map(|f| f.sign);
            Some(
                field
                    .positive_factorization(&inv, preferred)
                    .or_else(|_| field.positive_factorization(&inv, None))?,
            )
        } else {
            None
        };
        *entry = EdgeSign { phi: inv, a, factor };
    }
    for (e, entry) in entries.iter().enumerate() {
        let m = assignment.matching(e)?;
        for (c1, c2) in m.pairs_from(orientation.tail(e)) {
            if field.sub(&c1, &field.mul(&entry.phi, &c2)) != entry.a {
                return Err(Error::InvalidSignData(format!(
                    "edge {}: pair ({c1},{c2}) violates the reversed witness",
                    e + 1
                )));
            }
        }
    }
    SignData::new(field, orientation, entries)
}

/// Applies per-vertex renamings `h_v: L(v) -> L'(v)` to lists and pairs.
pub fn apply_renaming(
    a: &CorrespondenceAssignment,
    renaming: &[HashMap<FieldElement, FieldElement>],
) -> Result<CorrespondenceAssignment> {
    if renaming.len() != a.graph.vertex_count() {
        return Err(Error::InvalidRenaming {
            vertex: renaming.len() + 1,
            reason: "one map per vertex required".into(),
        });
    }
    let mut lists = Vec::with_capacity(a.lists.len());
    for (v, (list, h)) in a.lists.iter().zip(renaming).enumerate() {
        let mut image = Vec::with_capacity(list.len());
        let mut seen = HashSet::new();
        for c in list {
            let t = h.get(c).ok_or_else(|| Error::InvalidRenaming {
                vertex: v + 1,
                reason: format!("{c} has no image"),
            })?;
            if !a.field.contains(t) {
                return Err(Error::InvalidRenaming { vertex: v + 1, reason: format!("{t} is not a field element") });
            }
            if !seen.insert(t.clone()) {
                return Err(Error::InvalidRenaming { vertex: v + 1, reason: format!("{t} hit twice") });
            }
            image.push(t.clone());
        }
        lists.push(image);
    }
    let matchings = a
        .matchings
        .iter()
        .map(|m| PartialMatching {
            edge: m.edge,
            tail: m.tail,
            head: m.head,
            pairs: m
                .pairs
                .iter()
                .map(|(c1, c2)| (renaming[m.tail][c1].clone(), renaming[m.head][c2].clone()))
                .collect(),
        })
        .collect();
    CorrespondenceAssignment::new(a.graph.clone(), a.field, lists, matchings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num::BigRational;

    fn q(n: i64) -> FieldElement {
        FieldSpec::Rationals.from_i64(n)
    }

    fn qf(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(BigRational::new(n.into(), d.into()))
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<Pair> {
        v.iter().map(|&(a, b)| (q(a), q(b))).collect()
    }

    #[test]
    fn edge_examples() {
        let f = FieldSpec::Rationals;
        assert_eq!(classify_pairs(&f, &pairs(&[(1, 1), (2, 2)])), EdgeClass::Straight);
        assert_eq!(
            classify_pairs(&f, &pairs(&[(1, 2), (2, 1)])),
            EdgeClass::Signable { sign: Sign::Minus, a: q(3) }
        );
        assert_eq!(classify_pairs(&f, &pairs(&[(1, -1)])), EdgeClass::Good { a: q(2) });
        assert_eq!(
            classify_pairs(&f, &pairs(&[(2, 1), (4, 2)])),
            EdgeClass::ZSignable { phi: q(2), a: q(0) }
        );
        assert_eq!(
            classify_pairs(&f, &pairs(&[(1, 2), (2, 5)])),
            EdgeClass::GeneralSignable { phi: qf(1, 3), a: qf(1, 3) }
        );
        assert_eq!(classify_pairs(&f, &pairs(&[(0, 0), (1, 2), (2, 1)])), EdgeClass::Irregular);
        assert_eq!(classify_pairs(&f, &[]), EdgeClass::Straight);
    }

    #[test]
    fn prime_field_classes() {
        let p5 = FieldSpec::prime(5).unwrap();
        let r = |a: u64, b: u64| (FieldElement::Residue(a), FieldElement::Residue(b));
        // 1 - 4*2 = -7 = 3, 2 - 4*1 = -2 = 3: phi = 4 = -1.
        assert_eq!(
            classify_pairs(&p5, &[r(1, 2), r(2, 1)]),
            EdgeClass::Signable { sign: Sign::Minus, a: FieldElement::Residue(3) }
        );
        // Over Z_p nothing is merely generalized signable.
        let c = classify_pairs(&p5, &[r(1, 2), r(2, 4)]);
        assert_eq!(c.rank(), ClassRank::ZSignable);
    }

    #[test]
    fn witnesses_verify() {
        let f = FieldSpec::Rationals;
        for ps in [
            pairs(&[(1, 2), (2, 1)]),
            pairs(&[(2, 1), (4, 2), (6, 3)]),
            pairs(&[(3, 1), (4, 2)]),
            pairs(&[(1, 2), (2, 5)]),
        ] {
            let class = classify_pairs(&f, &ps);
            let (phi, a) = class.witness(&f).unwrap();
            for (c1, c2) in &ps {
                assert_eq!(f.sub(c1, &f.mul(&phi, c2)), a);
            }
        }
    }

    #[test]
    fn assignment_examples() {
        let c4 = fixtures::c4_figure();
        let d = c4.stored_orientation();
        let class = classify_assignment(&c4, &d).unwrap();
        assert_eq!(class.rank, ClassRank::Signable);
        let s = class.sign_data.unwrap();
        assert_eq!(s.signs().unwrap().iter().filter(|&&x| x == Sign::Minus).count(), 1);

        let straight = fixtures::w6_lists();
        let class = classify_assignment(&straight, &straight.stored_orientation()).unwrap();
        assert_eq!(class.rank, ClassRank::Good);
        assert!(class.sign_data.unwrap().edges().iter().all(|s| s.a.is_zero() && s.phi.is_one()));

        let g = Multigraph::from_one_based(2, &[(1, 2)]).unwrap();
        let a = CorrespondenceAssignment::new(
            g,
            FieldSpec::Rationals,
            vec![vec![q(0), q(1), q(2)], vec![q(0), q(1), q(2)]],
            vec![PartialMatching { edge: 0, tail: 0, head: 1, pairs: pairs(&[(0, 0), (1, 2), (2, 1)]) }],
        )
        .unwrap();
        let class = classify_assignment(&a, &a.stored_orientation()).unwrap();
        assert_eq!(class.rank, ClassRank::Irregular);
        assert_eq!(class.irregular, vec![0]);
        assert!(class.sign_data.is_none());
    }

    #[test]
    fn orientation_independence_of_class() {
        for a in [fixtures::c4_figure(), fixtures::w6_signable(), fixtures::k2_signed()] {
            let base = classify_assignment(&a, &a.stored_orientation()).unwrap().rank;
            for d in crate::graph::enumerate_orientations(a.graph(), 24).unwrap() {
                assert_eq!(classify_assignment(&a, &d).unwrap().rank, base);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_input() {
        let g = Multigraph::from_one_based(2, &[(1, 2)]).unwrap();
        let lists = vec![vec![q(1), q(2)], vec![q(1), q(2)]];
        let mk = |ps: Vec<Pair>| {
            CorrespondenceAssignment::new(
                g.clone(),
                FieldSpec::Rationals,
                lists.clone(),
                vec![PartialMatching { edge: 0, tail: 0, head: 1, pairs: ps }],
            )
        };
        assert!(mk(pairs(&[(1, 1), (1, 2)])).is_err());
        assert!(mk(pairs(&[(1, 1), (2, 1)])).is_err());
        assert!(mk(pairs(&[(3, 1)])).is_err());
        assert!(mk(pairs(&[(1, 2)])).is_ok());
        assert!(CorrespondenceAssignment::new(
            g.clone(),
            FieldSpec::Rationals,
            vec![vec![q(1), q(1)], vec![q(1)]],
            vec![PartialMatching { edge: 0, tail: 0, head: 1, pairs: vec![] }],
        )
        .is_err());
        assert!(CorrespondenceAssignment::new(g.clone(), FieldSpec::Rationals, lists.clone(), vec![]).is_err());
    }

    fn single_edge(ps: &[(i64, i64)]) -> CorrespondenceAssignment {
        let g = Multigraph::from_one_based(2, &[(1, 2)]).unwrap();
        let mut l1: Vec<_> = ps.iter().map(|p| q(p.0)).collect();
        let mut l2: Vec<_> = ps.iter().map(|p| q(p.1)).collect();
        l1.sort();
        l2.sort();
        CorrespondenceAssignment::new(
            g,
            FieldSpec::Rationals,
            vec![l1, l2],
            vec![PartialMatching { edge: 0, tail: 0, head: 1, pairs: pairs(ps) }],
        )
        .unwrap()
    }

    #[test]
    fn reversal_examples() {
        let a = single_edge(&[(1, 1), (2, 2)]);
        let s = classify_assignment(&a, &a.stored_orientation()).unwrap().sign_data.unwrap();
        let r = reverse_sign_data(&a, &s, &[0]).unwrap();
        assert_eq!((r.edges()[0].phi.clone(), r.edges()[0].a.clone()), (q(1), q(0)));

        // c1 - 2 c2 = 3
        let a = single_edge(&[(5, 1), (7, 2)]);
        let s = classify_assignment(&a, &a.stored_orientation()).unwrap().sign_data.unwrap();
        assert_eq!((s.edges()[0].phi.clone(), s.edges()[0].a.clone()), (q(2), q(3)));
        let r = reverse_sign_data(&a, &s, &[0]).unwrap();
        assert_eq!((r.edges()[0].phi.clone(), r.edges()[0].a.clone()), (qf(1, 2), qf(-3, 2)));
        assert!(r.edges()[0].factor.is_none());
        assert_eq!(reverse_sign_data(&a, &r, &[0]).unwrap(), s);

        let a = single_edge(&[(1, 2), (2, 1)]);
        let s = classify_assignment(&a, &a.stored_orientation()).unwrap().sign_data.unwrap();
        let r = reverse_sign_data(&a, &s, &[0]).unwrap();
        assert_eq!((r.edges()[0].phi.clone(), r.edges()[0].a.clone()), (q(-1), q(3)));
    }

    #[test]
    fn reversal_matches_reclassification() {
        let a = fixtures::c4_figure();
        let d = a.stored_orientation();
        let s = classify_assignment(&a, &d).unwrap().sign_data.unwrap();
        for d2 in crate::graph::enumerate_orientations(a.graph(), 24).unwrap() {
            let flips: Vec<_> = (0..4).filter(|&e| d2.reversed()[e] != d.reversed()[e]).collect();
            let r = reverse_sign_data(&a, &s, &flips).unwrap();
            let direct = classify_assignment(&a, &d2).unwrap().sign_data.unwrap();
            assert_eq!(r, direct);
            assert_eq!(reverse_sign_data(&a, &r, &flips).unwrap(), s);
        }
    }

    #[test]
    fn renaming_examples() {
        let a = fixtures::c4_figure();
        let ident: Vec<HashMap<_, _>> = a
            .lists()
            .iter()
            .map(|l| l.iter().map(|c| (c.clone(), c.clone())).collect())
            .collect();
        assert_eq!(apply_renaming(&a, &ident).unwrap(), a);

        let shift: Vec<HashMap<_, _>> = a
            .lists()
            .iter()
            .map(|l| l.iter().map(|c| (c.clone(), FieldSpec::Rationals.add(c, &q(5)))).collect())
            .collect();
        let b = apply_renaming(&a, &shift).unwrap();
        let d = b.stored_orientation();
        let classes = classify_assignment(&b, &d).unwrap().edges;
        let crossed = fixtures::C4_CROSSED_EDGE;
        for (e, c) in classes.iter().enumerate() {
            if e == crossed {
                assert_eq!(*c, EdgeClass::Signable { sign: Sign::Minus, a: q(13) });
            } else {
                assert_eq!(*c, EdgeClass::Straight);
            }
        }

        // Negating vertex 1's list turns its straight edges into sign -1.
        let neg: Vec<HashMap<_, _>> = a
            .lists()
            .iter()
            .enumerate()
            .map(|(v, l)| {
                l.iter()
                    .map(|c| (c.clone(), if v == 0 { FieldSpec::Rationals.neg(c) } else { c.clone() }))
                    .collect()
            })
            .collect();
        let b = apply_renaming(&a, &neg).unwrap();
        let classes = classify_assignment(&b, &b.stored_orientation()).unwrap().edges;
        let incident_to_first: Vec<_> =
            (0..4).filter(|&e| a.graph().edges()[e].0 == 0 || a.graph().edges()[e].1 == 0).collect();
        for e in incident_to_first {
            assert!(matches!(classes[e], EdgeClass::Signable { sign: Sign::Minus, .. }));
        }

        let mut collide = ident.clone();
        collide[0].insert(q(2), q(1));
        assert!(apply_renaming(&a, &collide).is_err());
    }
}
