//! Graph polynomials `∏ (x_v - φ(e) x_w)` over the arcs of an orientation,
//! coefficient extraction, and exact counts of even and odd spanning
//! Eulerian subdigraphs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigRational, BigUint, One, Signed, Zero};

use crate::aux_digraph::build_d_sigma_phi;
use crate::caps::{check_cap, Caps};
use crate::correspondence::SignData;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::graph::{Digraph, Orientation};

/// Exponent vector over the original vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Graded lexicographic comparison (higher degree first, then the
    /// exponent of `x_1`, `x_2`, ... descending).
    pub fn grlex_desc(&self, other: &Monomial) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &t)| t > 0)
            .map(|(i, &t)| if t == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, t) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: HashMap<Monomial, BigRational>,
}

impl SparsePolynomial {
    pub fn constant(nvars: usize, c: BigRational) -> SparsePolynomial {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(nvars), c);
        }
        SparsePolynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The stored coefficient, zero when absent.
    pub fn raw_coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in graded lexicographic order, largest first.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.grlex_desc(b.0));
        v
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.degree() == 0;
            if abs.is_one() && !is_const {
                write!(f, "{m}")?;
            } else if is_const {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Expansion weights from sign data: the integer `σ·φ⁺` where a
/// factorization exists, otherwise `φ` itself.
pub fn weights_from_sign_data(s: &SignData) -> Vec<BigRational> {
    s.edges()
        .iter()
        .map(|e| match &e.factor {
            Some(f) => BigRational::from_integer(BigInt::from(f.signed())),
            None => e.phi.to_rational(),
        })
        .collect()
}

/// Expands `∏_{(v,w)} (x_v - φ(e) x_w)` over the arcs of `d` in edge order.
/// With `degree_cap`, monomials not dividing the cap are dropped as soon as
/// they appear.
pub fn expand_graph_polynomial(
    d: &Orientation,
    weights: &[BigRational],
    degree_cap: Option<&Monomial>,
    cap: usize,
) -> Result<SparsePolynomial> {
    let n = d.graph().vertex_count();
    let m = d.graph().edge_count();
    check_cap("expansion edges", m, cap)?;
    if weights.len() != m {
        return Err(Error::InvalidSignData(format!("{} weights for {m} edges", weights.len())));
    }
    if let Some(e) = weights.iter().position(Zero::is_zero) {
        return Err(Error::ZeroWeight(e + 1));
    }
    let keep = |mono: &Monomial| degree_cap.is_none_or(|c| mono.divides(c));
    let mut terms: HashMap<Monomial, BigRational> = HashMap::new();
    terms.insert(Monomial::one(n), BigRational::one());
    for (e, phi) in weights.iter().enumerate() {
        let (v, w) = d.arc(e);
        let mut next: HashMap<Monomial, BigRational> = HashMap::with_capacity(terms.len() * 2);
        for (mono, c) in terms {
            for (var, factor) in [(v, c.clone()), (w, -(phi * &c))] {
                let mut t = mono.clone();
                t.0[var] += 1;
                if !keep(&t) {
                    continue;
                }
                let slot = next.entry(t).or_insert_with(BigRational::zero);
                *slot += factor;
            }
        }
        next.retain(|_, c| !c.is_zero());
        terms = next;
    }
    Ok(SparsePolynomial { nvars: n, terms })
}

/// `M_D = ∏ x_v^{d⁺(v)}`.
pub fn target_monomial(d: &Orientation) -> Monomial {
    Monomial(d.out_degrees().into_iter().map(|k| k as u32).collect())
}

/// The coefficient of `m` in `p`, mapped into the field.
pub fn coefficient(p: &SparsePolynomial, m: &Monomial, spec: &FieldSpec) -> Result<FieldElement> {
    spec.from_rational(&p.raw_coefficient(m))
}

/// The first monomial in graded lexicographic order whose coefficient is
/// nonzero in the field and whose exponents satisfy `t_i + 1 <= |L(i)|`.
pub fn at_sufficient_monomial(
    p: &SparsePolynomial,
    list_sizes: &[usize],
    spec: &FieldSpec,
) -> Result<Option<(Monomial, FieldElement)>> {
    for (m, _) in p.sorted_terms() {
        if m.0.iter().zip(list_sizes).any(|(&t, &l)| t as usize + 1 > l) {
            continue;
        }
        let c = coefficient(p, m, spec)?;
        if !c.is_zero() {
            return Ok(Some((m.clone(), c)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianCount {
    pub ee: BigUint,
    pub eo: BigUint,
}

impl EulerianCount {
    pub fn difference(&self) -> BigInt {
        BigInt::from(self.ee.clone()) - BigInt::from(self.eo.clone())
    }
}

struct Counter<'a> {
    arcs: &'a [(usize, usize)],
    order: Vec<usize>,
    balance: Vec<i64>,
    rem_out: Vec<i64>,
    rem_in: Vec<i64>,
    counts: [u128; 2],
}

impl Counter<'_> {
    fn feasible(&self, v: usize) -> bool {
        let b = self.balance[v];
        b - self.rem_in[v] <= 0 && 0 <= b + self.rem_out[v]
    }

    fn run(&mut self, i: usize, parity: usize) {
        if i == self.order.len() {
            self.counts[parity] += 1;
            return;
        }
        let (t, h) = self.arcs[self.order[i]];
        self.rem_out[t] -= 1;
        self.rem_in[h] -= 1;
        if self.feasible(t) && self.feasible(h) {
            self.run(i + 1, parity);
        }
        self.balance[t] += 1;
        self.balance[h] -= 1;
        if self.feasible(t) && self.feasible(h) {
            self.run(i + 1, parity ^ 1);
        }
        self.balance[t] -= 1;
        self.balance[h] += 1;
        self.rem_out[t] += 1;
        self.rem_in[h] += 1;
    }
}

/// Arc order: repeatedly take the vertex with the fewest undecided incident
/// arcs and schedule all of them.
fn arc_order(x: &Digraph) -> Vec<usize> {
    let n = x.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, &(t, h)) in x.arcs().iter().enumerate() {
        incident[t].push(a);
        incident[h].push(a);
    }
    let mut left: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut done = vec![false; x.arc_count()];
    let mut order = Vec::with_capacity(x.arc_count());
    while order.len() < x.arc_count() {
        let v = (0..n).filter(|&v| left[v] > 0).min_by_key(|&v| (left[v], v)).expect("arcs remain");
        for &a in &incident[v] {
            if !done[a] {
                done[a] = true;
                order.push(a);
                let (t, h) = x.arcs()[a];
                left[t] -= 1;
                left[h] -= 1;
            }
        }
    }
    order
}

/// Counts spanning Eulerian subdigraphs by arc-count parity.
pub fn count_eulerian(x: &Digraph, cap: usize) -> Result<EulerianCount> {
    check_cap("Eulerian arcs", x.arc_count(), cap)?;
    let n = x.vertex_count();
    let mut c = Counter {
        arcs: x.arcs(),
        order: arc_order(x),
        balance: vec![0; n],
        rem_out: x.out_degrees().into_iter().map(|d| d as i64).collect(),
        rem_in: x.in_degrees().into_iter().map(|d| d as i64).collect(),
        counts: [0, 0],
    };
    c.run(0, 0);
    Ok(EulerianCount { ee: BigUint::from(c.counts[0]), eo: BigUint::from(c.counts[1]) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianDifference {
    pub count: EulerianCount,
    pub difference: BigInt,
    pub residue: FieldElement,
    pub is_zero: bool,
}

pub fn eulerian_difference(x: &Digraph, spec: &FieldSpec, cap: usize) -> Result<EulerianDifference> {
    let count = count_eulerian(x, cap)?;
    let difference = count.difference();
    Ok(EulerianDifference {
        residue: spec.from_bigint(&difference),
        is_zero: spec.is_zero_residue(&difference),
        count,
        difference,
    })
}

/// Both sides of the coefficient identity for one orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub monomial: Monomial,
    pub coefficient: BigRational,
    pub coefficient_in_field: FieldElement,
    pub euler: EulerianDifference,
    pub holds: bool,
}

/// Compares the coefficient of `M_D` in `h_D` with `EE - EO` of `D_{σ,φ}`.
pub fn verify_identity(d: &Orientation, s: &SignData, caps: &Caps) -> Result<IdentityReport> {
    let spec = s.field();
    let weights = weights_from_sign_data(s);
    let monomial = target_monomial(d);
    let poly = expand_graph_polynomial(d, &weights, Some(&monomial), caps.expansion_edges)?;
    let coefficient = poly.raw_coefficient(&monomial);
    let coefficient_in_field = spec.from_rational(&coefficient)?;
    let aux = build_d_sigma_phi(d, s)?;
    let euler = eulerian_difference(&aux.digraph, &spec, caps.euler_arcs)?;
    let holds = match spec {
        FieldSpec::Rationals => coefficient == BigRational::from_integer(euler.difference.clone()),
        FieldSpec::Prime(_) => coefficient_in_field == euler.residue,
    };
    Ok(IdentityReport { monomial, coefficient, coefficient_in_field, euler, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::EdgeSign;
    use crate::field::{Factorization, Sign};
    use crate::graph::Multigraph;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn orient(n: usize, arcs: &[(usize, usize)]) -> Orientation {
        let g = Multigraph::from_one_based(n, arcs).unwrap();
        Orientation::as_stored(&g)
    }

    fn naive_count(x: &Digraph) -> (u64, u64) {
        let m = x.arc_count();
        let mut c = (0, 0);
        for code in 0u64..(1 << m) {
            let sel: Vec<bool> = (0..m).map(|a| code >> a & 1 == 1).collect();
            if x.is_eulerian_subset(&sel) {
                if code.count_ones() % 2 == 0 {
                    c.0 += 1;
                } else {
                    c.1 += 1;
                }
            }
        }
        c
    }

    #[test]
    fn expansion_examples() {
        let p = expand_graph_polynomial(&orient(2, &[(1, 2)]), &[r(1)], None, 26).unwrap();
        assert_eq!(p.to_string(), "x1 - x2");
        let digon = orient(2, &[(1, 2), (2, 1)]);
        let p = expand_graph_polynomial(&digon, &[r(1), r(1)], None, 26).unwrap();
        assert_eq!(p.to_string(), "-x1^2 + 2*x1*x2 - x2^2");
        let p = expand_graph_polynomial(&digon, &[r(2), r(1)], None, 26).unwrap();
        assert_eq!(p.to_string(), "-x1^2 + 3*x1*x2 - 2*x2^2");
        assert!(matches!(
            expand_graph_polynomial(&digon, &[r(0), r(1)], None, 26),
            Err(Error::ZeroWeight(1))
        ));
        assert!(matches!(
            expand_graph_polynomial(&digon, &[r(1), r(1)], None, 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn target_and_coefficients() {
        let c4 = orient(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert_eq!(target_monomial(&c4), Monomial(vec![1, 1, 1, 1]));
        assert_eq!(target_monomial(&orient(2, &[(1, 2)])), Monomial(vec![1, 0]));
        let star = orient(4, &[(1, 4), (2, 4), (3, 4)]);
        assert_eq!(target_monomial(&star), Monomial(vec![1, 1, 1, 0]));

        let digon = orient(2, &[(1, 2), (2, 1)]);
        let f = expand_graph_polynomial(&digon, &[r(1), r(1)], None, 26).unwrap();
        let q = FieldSpec::Rationals;
        assert_eq!(coefficient(&f, &Monomial(vec![1, 1]), &q).unwrap(), q.from_i64(2));
        assert!(coefficient(&f, &Monomial(vec![3, 0]), &q).unwrap().is_zero());
        let h = expand_graph_polynomial(&digon, &[r(2), r(1)], None, 26).unwrap();
        let p3 = FieldSpec::prime(3).unwrap();
        assert!(coefficient(&h, &Monomial(vec![1, 1]), &p3).unwrap().is_zero());
    }

    #[test]
    fn sufficient_monomial_examples() {
        let digon = orient(2, &[(1, 2), (2, 1)]);
        let f = expand_graph_polynomial(&digon, &[r(1), r(1)], None, 26).unwrap();
        let q = FieldSpec::Rationals;
        let (m, c) = at_sufficient_monomial(&f, &[2, 2], &q).unwrap().unwrap();
        assert_eq!((m, c), (Monomial(vec![1, 1]), q.from_i64(2)));
        assert_eq!(at_sufficient_monomial(&f, &[2, 1], &q).unwrap(), None);
        assert_eq!(at_sufficient_monomial(&f, &[2, 1], &FieldSpec::prime(2).unwrap()).unwrap(), None);
    }

    #[test]
    fn count_examples() {
        let one = Digraph::new(2, vec![(0, 1)]).unwrap();
        let c = count_eulerian(&one, 64).unwrap();
        assert_eq!((c.ee, c.eo), (1u32.into(), 0u32.into()));
        let tri = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = count_eulerian(&tri, 64).unwrap();
        assert_eq!((c.ee, c.eo), (1u32.into(), 1u32.into()));
        let digon = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let c = count_eulerian(&digon, 64).unwrap();
        assert_eq!((c.ee, c.eo), (2u32.into(), 0u32.into()));
        assert!(count_eulerian(&digon, 1).is_err());
    }

    #[test]
    fn difference_examples() {
        let q = FieldSpec::Rationals;
        let tri = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let d = eulerian_difference(&tri, &q, 64).unwrap();
        assert_eq!((d.difference, d.residue, d.is_zero), (0.into(), q.zero(), true));
        let digon = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let d = eulerian_difference(&digon, &q, 64).unwrap();
        assert_eq!((d.difference.clone(), d.is_zero), (2.into(), false));
        let d = eulerian_difference(&digon, &FieldSpec::prime(2).unwrap(), 64).unwrap();
        assert_eq!((d.residue, d.is_zero), (FieldElement::Residue(0), true));
    }

    fn sign_data(d: &Orientation, f: FieldSpec, spec: &[i64]) -> SignData {
        let edges = spec
            .iter()
            .map(|&k| {
                let fac = Factorization { sign: if k < 0 { Sign::Minus } else { Sign::Plus }, magnitude: k.unsigned_abs() };
                EdgeSign { phi: f.from_factorization(&fac), a: f.zero(), factor: Some(fac) }
            })
            .collect();
        SignData::new(f, d.clone(), edges).unwrap()
    }

    #[test]
    fn identity_examples() {
        let caps = Caps::default();
        let q = FieldSpec::Rationals;
        let arc = orient(2, &[(1, 2)]);
        let rep = verify_identity(&arc, &sign_data(&arc, q, &[2]), &caps).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.coefficient, r(1));
        assert_eq!(rep.euler.count.ee, 1u32.into());

        let digon = orient(2, &[(1, 2), (2, 1)]);
        let rep = verify_identity(&digon, &sign_data(&digon, q, &[2, 1]), &caps).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.coefficient, r(3));
        assert_eq!((rep.euler.count.ee.clone(), rep.euler.count.eo.clone()), (3u32.into(), 0u32.into()));

        let rep = verify_identity(&arc, &sign_data(&arc, q, &[-1]), &caps).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.coefficient, r(1));
    }

    fn arb_orientation(max_n: usize, max_m: usize) -> impl Strategy<Value = Orientation> {
        (2..=max_n)
            .prop_flat_map(move |n| proptest::collection::vec((0..n, 0..n - 1), 0..=max_m).prop_map(move |es| (n, es)))
            .prop_map(|(n, es)| {
                let edges = es.into_iter().map(|(u, v)| (u, if v >= u { v + 1 } else { v })).collect();
                Orientation::as_stored(&Multigraph::new(n, edges).unwrap())
            })
    }

    proptest! {
        #[test]
        fn homogeneous(d in arb_orientation(5, 7), ws in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 7)) {
            let m = d.graph().edge_count();
            let w: Vec<BigRational> = ws[..m].iter().map(|&k| r(k)).collect();
            let p = expand_graph_polynomial(&d, &w, None, 26).unwrap();
            for (mono, _) in p.sorted_terms() {
                prop_assert_eq!(mono.degree() as usize, m);
            }
            prop_assert_eq!(target_monomial(&d).degree() as usize, m);
        }

        #[test]
        fn pruned_matches_full(d in arb_orientation(5, 10), ws in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 10)) {
            let m = d.graph().edge_count();
            let w: Vec<BigRational> = ws[..m].iter().map(|&k| r(k)).collect();
            let t = target_monomial(&d);
            let full = expand_graph_polynomial(&d, &w, None, 26).unwrap();
            let pruned = expand_graph_polynomial(&d, &w, Some(&t), 26).unwrap();
            prop_assert_eq!(full.raw_coefficient(&t), pruned.raw_coefficient(&t));
        }

        #[test]
        fn counter_matches_naive(d in arb_orientation(5, 12)) {
            let x = d.digraph();
            let c = count_eulerian(&x, 64).unwrap();
            let (ee, eo) = naive_count(&x);
            prop_assert_eq!(c.ee, BigUint::from(ee));
            prop_assert_eq!(c.eo, BigUint::from(eo));
        }

        #[test]
        fn identity_over_q(d in arb_orientation(4, 5), ws in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 5)) {
            let m = d.graph().edge_count();
            let s = sign_data(&d, FieldSpec::Rationals, &ws[..m]);
            prop_assert!(verify_identity(&d, &s, &Caps::default()).unwrap().holds);
        }
    }
}
