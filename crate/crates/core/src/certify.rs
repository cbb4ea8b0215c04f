//! Colorability certificates: classify, lift if needed, search orientations
//! with `d⁺(v) + 1 <= |L(v)|`, and test the matching auxiliary digraph for a
//! nonzero `EE - EO`.

use std::collections::{HashSet, VecDeque};

use num::BigUint;

use crate::aux_digraph::{build_d_sigma, build_d_sigma_phi};
use crate::caps::Caps;
use crate::correspondence::{classify_assignment, CorrespondenceAssignment, EdgeClass};
use crate::decomposition::{check_lift, lift, LiftMode, LiftResult};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::graph::{
    enumerate_orientations, find_bounded_orientation_with_fixed, Bipartition, Digraph, EdgeId, Orientation,
};
use crate::nullstellensatz::eulerian_difference;

/// An assignment with an optional orientation to certify against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub assignment: CorrespondenceAssignment,
    pub orientation: Option<Orientation>,
}

impl Instance {
    pub fn new(assignment: CorrespondenceAssignment) -> Instance {
        Instance { assignment, orientation: None }
    }

    pub fn with_orientation(assignment: CorrespondenceAssignment, d: Orientation) -> Result<Instance> {
        if d.graph() != assignment.graph() {
            return Err(Error::InvalidOrientation("orientation is for a different graph".into()));
        }
        Ok(Instance { assignment, orientation: Some(d) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Good,
    Signable,
    ZSignable,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "auto" => Ok(Mode::Auto),
            other => LiftMode::parse(other).map(Mode::from),
        }
    }
}

impl From<LiftMode> for Mode {
    fn from(m: LiftMode) -> Mode {
        match m {
            LiftMode::Good => Mode::Good,
            LiftMode::Signable => Mode::Signable,
            LiftMode::ZSignable => Mode::ZSignable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    BoundedFirst,
    Exhaustive,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Strategy> {
        match s {
            "bounded-first" | "bounded" => Ok(Strategy::BoundedFirst),
            "exhaustive" => Ok(Strategy::Exhaustive),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::BoundedFirst => "bounded-first",
            Strategy::Exhaustive => "exhaustive",
        }
    }
}

/// Which digraph's Eulerian subdigraphs were counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxUsed {
    /// The orientation itself (good assignments).
    Plain,
    /// `D_σ` (signable assignments).
    Sigma,
    /// `D_{σ,φ}` (Z-signable assignments).
    SigmaPhi,
}

impl AuxUsed {
    pub fn for_mode(mode: LiftMode) -> AuxUsed {
        match mode {
            LiftMode::Good => AuxUsed::Plain,
            LiftMode::Signable => AuxUsed::Sigma,
            LiftMode::ZSignable => AuxUsed::SigmaPhi,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AuxUsed::Plain => "D",
            AuxUsed::Sigma => "D_sigma",
            AuxUsed::SigmaPhi => "D_sigma_phi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// Exact counts of the auxiliary digraph.
    Counted { ee: BigUint, eo: BigUint },
    /// The auxiliary digraph's underlying graph is bipartite with these
    /// sides, so `EO = 0` and `EE >= 1`.
    Bipartite { sides: Vec<bool> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub mode: LiftMode,
    pub lift: LiftResult,
    pub orientation: Orientation,
    pub aux: AuxUsed,
    /// Per vertex `(d⁺(v) + 1, |L(v)|)`.
    pub degree_table: Vec<(usize, usize)>,
    pub evidence: Evidence,
    /// `EE - EO` in the field, when counted.
    pub residue: Option<FieldElement>,
}

impl Certificate {
    pub fn eo(&self) -> BigUint {
        match &self.evidence {
            Evidence::Counted { eo, .. } => eo.clone(),
            Evidence::Bipartite { .. } => BigUint::from(0u32),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    NoFeasibleOrientation,
    AllZeroResidue,
    ClassNotApplicable,
    CapsExceeded,
}

impl InconclusiveReason {
    pub fn name(self) -> &'static str {
        match self {
            InconclusiveReason::NoFeasibleOrientation => "no feasible orientation",
            InconclusiveReason::AllZeroResidue => "all feasible orientations have zero residue",
            InconclusiveReason::ClassNotApplicable => "class not applicable",
            InconclusiveReason::CapsExceeded => "caps exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconclusive {
    pub reason: InconclusiveReason,
    pub mode: Option<LiftMode>,
    /// Orientations evaluated.
    pub tried: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified(Box<Certificate>),
    Inconclusive(Inconclusive),
}

impl Verdict {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Inconclusive(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }
}

fn inconclusive(reason: InconclusiveReason, mode: Option<LiftMode>, tried: usize, detail: String) -> Verdict {
    Verdict::Inconclusive(Inconclusive { reason, mode, tried, detail })
}

/// The lift used for `mode`: the assignment itself when it already lies in
/// the mode's class relative to its stored orientation.
pub fn lift_for_mode(a: &CorrespondenceAssignment, mode: LiftMode, caps: &Caps) -> Result<LiftResult> {
    let class = classify_assignment(a, &a.stored_orientation())?;
    if class.rank <= mode.rank() {
        Ok(LiftResult::identity(a, mode))
    } else {
        lift(a, mode, caps.zsignable_pairs)
    }
}

/// Resolves `auto` to the mode with the fewest lifted edges, preferring good,
/// then signable, then Z-signable on ties.
pub fn choose_mode(a: &CorrespondenceAssignment, mode: Mode, caps: &Caps) -> Result<(LiftMode, LiftResult)> {
    let single = |m: LiftMode| lift_for_mode(a, m, caps).map(|l| (m, l));
    match mode {
        Mode::Good => single(LiftMode::Good),
        Mode::Signable => single(LiftMode::Signable),
        Mode::ZSignable => single(LiftMode::ZSignable),
        Mode::Auto => {
            let mut best: Option<(LiftMode, LiftResult)> = None;
            let mut first_err = None;
            for m in [LiftMode::Good, LiftMode::Signable, LiftMode::ZSignable] {
                match single(m) {
                    Ok((m, l)) => {
                        let better = best
                            .as_ref()
                            .is_none_or(|(_, b)| l.assignment.graph().edge_count() < b.assignment.graph().edge_count());
                        if better {
                            best = Some((m, l));
                        }
                    }
                    Err(e) => first_err = first_err.or(Some(e)),
                }
            }
            best.ok_or_else(|| first_err.expect("some mode attempted"))
        }
    }
}

/// Edges whose direction is forced in Z-signable mode over the rationals:
/// reversing them would turn an integral `φ` into a non-integral one.
fn pinned_edges(l: &LiftResult, mode: LiftMode) -> Result<Vec<Option<bool>>> {
    let a = &l.assignment;
    let m = a.graph().edge_count();
    if mode != LiftMode::ZSignable || a.field() != FieldSpec::Rationals {
        return Ok(vec![None; m]);
    }
    let stored = a.stored_orientation();
    let class = classify_assignment(a, &stored)?;
    Ok(class
        .edges
        .iter()
        .enumerate()
        .map(|(e, c)| match c {
            EdgeClass::ZSignable { .. } | EdgeClass::GeneralSignable { .. } => Some(stored.reversed()[e]),
            _ => None,
        })
        .collect())
}

/// Lifted edges inherit the direction of their source edge.
fn lift_orientation(l: &LiftResult, d: &Orientation) -> Result<Orientation> {
    let arcs: Vec<_> = l.provenance.iter().map(|&(e, _)| d.arc(e)).collect();
    Orientation::from_arcs(l.assignment.graph(), &arcs)
}

enum Outcome {
    Certified(Box<Certificate>),
    Zero,
    NotApplicable,
    Caps,
}

fn aux_digraph(l: &LiftResult, mode: LiftMode, d: &Orientation) -> Result<Option<Digraph>> {
    let class = classify_assignment(&l.assignment, d)?;
    if class.rank > mode.rank() {
        return Ok(None);
    }
    let s = class.sign_data.expect("class within mode");
    Ok(Some(match mode {
        LiftMode::Good => d.digraph(),
        LiftMode::Signable => build_d_sigma(d, &s.signs()?)?.digraph,
        LiftMode::ZSignable => build_d_sigma_phi(d, &s)?.digraph,
    }))
}

fn evaluate(l: &LiftResult, mode: LiftMode, d: &Orientation, caps: &Caps) -> Result<Outcome> {
    let Some(x) = aux_digraph(l, mode, d)? else {
        return Ok(Outcome::NotApplicable);
    };
    let field = l.assignment.field();
    let sizes = l.assignment.list_sizes();
    let degree_table = d.out_degrees().into_iter().map(|k| k + 1).zip(sizes).collect();
    let cert = |evidence, residue| {
        Outcome::Certified(Box::new(Certificate {
            mode,
            lift: l.clone(),
            orientation: d.clone(),
            aux: AuxUsed::for_mode(mode),
            degree_table,
            evidence,
            residue,
        }))
    };
    if field == FieldSpec::Rationals {
        if let Bipartition::Bipartite(sides) = x.underlying().bipartition() {
            return Ok(cert(Evidence::Bipartite { sides }, None));
        }
    }
    match eulerian_difference(&x, &field, caps.euler_arcs) {
        Ok(diff) if !diff.is_zero => Ok(cert(
            Evidence::Counted { ee: diff.count.ee, eo: diff.count.eo },
            Some(diff.residue),
        )),
        Ok(_) => Ok(Outcome::Zero),
        Err(Error::CapExceeded { .. }) => Ok(Outcome::Caps),
        Err(e) => Err(e),
    }
}

fn feasible(d: &Orientation, caps: &[usize]) -> bool {
    d.out_degrees().iter().zip(caps).all(|(o, c)| o <= c)
}

/// Orientations reachable from `d` by reversing one arc into a vertex with
/// slack, or by reversing a directed cycle through one arc. Both keep the
/// out-degree caps.
fn neighbours(d: &Orientation, caps: &[usize], fixed: &[Option<bool>]) -> Vec<Orientation> {
    let g = d.graph();
    let n = g.vertex_count();
    let out = d.out_degrees();
    let free: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| fixed[e].is_none()).collect();
    let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for &e in &free {
        adj[d.tail(e)].push(e);
    }
    let mut result = Vec::new();
    for &e in &free {
        let (t, h) = d.arc(e);
        if out[h] < caps[h] {
            result.push(d.with_flipped(&[e]).expect("edge exists"));
        }
        // Shortest directed path h -> t avoiding e.
        let mut via: Vec<Option<EdgeId>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[h] = true;
        let mut queue = VecDeque::from([h]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &f in &adj[u] {
                let (_, w) = d.arc(f);
                if f != e && !seen[w] {
                    seen[w] = true;
                    via[w] = Some(f);
                    queue.push_back(w);
                }
            }
        }
        if seen[t] {
            let mut cycle = vec![e];
            let mut x = t;
            while x != h {
                let f = via[x].expect("BFS tree edge");
                cycle.push(f);
                x = d.tail(f);
            }
            result.push(d.with_flipped(&cycle).expect("edges exist"));
        }
    }
    result
}

/// Runs the certification pipeline.
pub fn certify(instance: &Instance, mode: Mode, strategy: Strategy, caps: &Caps) -> Verdict {
    match certify_inner(instance, mode, strategy, caps) {
        Ok(v) => v,
        Err(Error::CapExceeded { what, size, cap }) => inconclusive(
            InconclusiveReason::CapsExceeded,
            None,
            0,
            format!("{what}: {size} exceeds cap {cap}"),
        ),
        Err(e) => inconclusive(InconclusiveReason::ClassNotApplicable, None, 0, e.to_string()),
    }
}

fn certify_inner(instance: &Instance, mode: Mode, strategy: Strategy, caps: &Caps) -> Result<Verdict> {
    let (mode, l) = choose_mode(&instance.assignment, mode, caps)?;
    let sizes = l.assignment.list_sizes();
    let g = l.assignment.graph().clone();
    let none = |reason, tried, detail: &str| Ok(inconclusive(reason, Some(mode), tried, detail.to_string()));
    if sizes.contains(&0) {
        return none(InconclusiveReason::NoFeasibleOrientation, 0, "a list is empty");
    }
    let bounds: Vec<usize> = sizes.iter().map(|s| s - 1).collect();
    let fixed = pinned_edges(&l, mode)?;

    if let Some(d0) = &instance.orientation {
        let d = lift_orientation(&l, d0)?;
        if !feasible(&d, &bounds) {
            return none(InconclusiveReason::NoFeasibleOrientation, 0, "the given orientation exceeds the list bounds");
        }
        return Ok(match evaluate(&l, mode, &d, caps)? {
            Outcome::Certified(c) => Verdict::Certified(c),
            Outcome::Zero => inconclusive(InconclusiveReason::AllZeroResidue, Some(mode), 1, String::new()),
            Outcome::NotApplicable => inconclusive(
                InconclusiveReason::ClassNotApplicable,
                Some(mode),
                1,
                "the given orientation leaves the mode's class".into(),
            ),
            Outcome::Caps => inconclusive(InconclusiveReason::CapsExceeded, Some(mode), 1, String::new()),
        });
    }

    let mut tried = 0;
    let mut capped = 0;
    let mut consider = |d: &Orientation| -> Result<Option<Verdict>> {
        tried += 1;
        Ok(match evaluate(&l, mode, d, caps)? {
            Outcome::Certified(c) => Some(Verdict::Certified(c)),
            Outcome::Caps => {
                capped += 1;
                None
            }
            Outcome::Zero | Outcome::NotApplicable => None,
        })
    };
    match strategy {
        Strategy::BoundedFirst => {
            let Some(start) = find_bounded_orientation_with_fixed(&g, &bounds, &fixed) else {
                return none(InconclusiveReason::NoFeasibleOrientation, 0, "");
            };
            let mut seen: HashSet<Vec<bool>> = HashSet::from([start.key()]);
            let mut queue = VecDeque::from([start]);
            let mut visits = 0;
            while let Some(d) = queue.pop_front() {
                if visits >= caps.visit_budget {
                    break;
                }
                visits += 1;
                if let Some(v) = consider(&d)? {
                    return Ok(v);
                }
                for nb in neighbours(&d, &bounds, &fixed) {
                    if seen.insert(nb.key()) {
                        queue.push_back(nb);
                    }
                }
            }
        }
        Strategy::Exhaustive => {
            let mut any = false;
            for d in enumerate_orientations(&g, caps.exhaustive_edges.min(caps.orientation_edges))? {
                let pinned_ok = fixed.iter().zip(d.reversed()).all(|(f, &r)| f.is_none_or(|x| x == r));
                if !pinned_ok || !feasible(&d, &bounds) {
                    continue;
                }
                any = true;
                if let Some(v) = consider(&d)? {
                    return Ok(v);
                }
            }
            if !any {
                return none(InconclusiveReason::NoFeasibleOrientation, 0, "");
            }
        }
    }
    let reason = if capped > 0 && capped == tried {
        InconclusiveReason::CapsExceeded
    } else {
        InconclusiveReason::AllZeroResidue
    };
    let detail = if capped > 0 { format!("{capped} orientations over the Eulerian cap") } else { String::new() };
    none(reason, tried, &detail)
}

/// Re-derives a certificate's claims from the original assignment: the lift
/// partitions the matchings, the lifted assignment lies in the mode's class
/// under the orientation, the degree table holds, and the auxiliary digraph
/// reproduces the recorded evidence.
pub fn replay(original: &CorrespondenceAssignment, cert: &Certificate, caps: &Caps) -> Result<()> {
    let fail = |msg: &str| Err(Error::Parse(format!("replay failed: {msg}")));
    check_lift(original, &cert.lift)?;
    if cert.lift.mode != cert.mode || cert.aux != AuxUsed::for_mode(cert.mode) {
        return fail("mode mismatch");
    }
    let a = &cert.lift.assignment;
    if cert.orientation.graph() != a.graph() {
        return fail("orientation is not on the lifted graph");
    }
    let table: Vec<(usize, usize)> =
        cert.orientation.out_degrees().into_iter().map(|k| k + 1).zip(a.list_sizes()).collect();
    if table != cert.degree_table {
        return fail("degree table differs");
    }
    if table.iter().any(|(need, have)| need > have) {
        return fail("an out-degree exceeds its list bound");
    }
    let Some(x) = aux_digraph(&cert.lift, cert.mode, &cert.orientation)? else {
        return fail("lifted assignment is outside the mode's class");
    };
    let field = a.field();
    match &cert.evidence {
        Evidence::Bipartite { sides } => {
            if field != FieldSpec::Rationals {
                return fail("bipartite evidence needs the rationals");
            }
            let u = x.underlying();
            if sides.len() != u.vertex_count() || u.edges().iter().any(|&(p, q)| sides[p] == sides[q]) {
                return fail("sides are not a proper 2-coloring");
            }
        }
        Evidence::Counted { ee, eo } => {
            let diff = eulerian_difference(&x, &field, caps.euler_arcs)?;
            if &diff.count.ee != ee || &diff.count.eo != eo {
                return fail("Eulerian counts differ");
            }
            if diff.is_zero || cert.residue.as_ref() != Some(&diff.residue) {
                return fail("residue differs or vanishes");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Multigraph;

    fn run(a: CorrespondenceAssignment, mode: Mode) -> Verdict {
        certify(&Instance::new(a), mode, Strategy::BoundedFirst, &Caps::default())
    }

    #[test]
    fn c4_is_inconclusive() {
        match run(fixtures::c4_figure(), Mode::Good) {
            Verdict::Inconclusive(i) => assert_eq!(i.reason, InconclusiveReason::NoFeasibleOrientation),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn grid_certifies() {
        let a = fixtures::toroidal_grid(2, 0).unwrap();
        let v = run(a.clone(), Mode::Good);
        let c = v.certificate().expect("certified");
        assert_eq!(c.lift.assignment.graph().edge_count(), 40);
        for (v, d) in c.orientation.out_degrees().into_iter().enumerate() {
            assert!(d <= if fixtures::even_indexed(v) { 3 } else { 2 });
        }
        assert_eq!(c.eo(), BigUint::from(0u32));
        replay(&a, c, &Caps::default()).unwrap();
    }

    #[test]
    fn w6_signable_certifies() {
        let a = fixtures::w6_signable();
        let v = run(a.clone(), Mode::Signable);
        let c = v.certificate().expect("certified");
        assert_eq!(c.lift.assignment.graph().edge_count(), 10);
        assert!(matches!(c.evidence, Evidence::Bipartite { .. }));
        replay(&a, c, &Caps::default()).unwrap();
    }

    #[test]
    fn counted_certificate_over_zp() {
        // Straight triangle over Z_5 with lists of size 3: a cyclic
        // orientation has EE - EO = 1 - 1 = 0, a transitive one 1 - 0.
        let g = Multigraph::from_one_based(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let f = FieldSpec::prime(5).unwrap();
        let list: Vec<FieldElement> = (0..3).map(|i| f.from_i64(i)).collect();
        let matchings = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| crate::correspondence::PartialMatching {
                edge: e,
                tail: u,
                head: v,
                pairs: list.iter().map(|c| (c.clone(), c.clone())).collect(),
            })
            .collect();
        let a = CorrespondenceAssignment::new(g, f, vec![list; 3], matchings).unwrap();
        for strategy in [Strategy::BoundedFirst, Strategy::Exhaustive] {
            for mode in [Mode::Good, Mode::Signable, Mode::ZSignable, Mode::Auto] {
                let v = certify(&Instance::new(a.clone()), mode, strategy, &Caps::default());
                let c = v.certificate().expect("certified");
                assert!(matches!(c.evidence, Evidence::Counted { .. }));
                replay(&a, c, &Caps::default()).unwrap();
            }
        }
    }

    #[test]
    fn fixed_orientation_is_respected() {
        let (a, d) = fixtures::c4_doubled();
        let v = certify(&Instance::with_orientation(a, d).unwrap(), Mode::Good, Strategy::BoundedFirst, &Caps::default());
        assert!(matches!(
            v,
            Verdict::Inconclusive(Inconclusive { reason: InconclusiveReason::NoFeasibleOrientation, .. })
        ));
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let a = fixtures::w6_signable();
        let v = run(a.clone(), Mode::Signable);
        let mut c = v.certificate().unwrap().clone();
        c.degree_table[0].0 += 1;
        assert!(replay(&a, &c, &Caps::default()).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(Mode::parse("auto").unwrap(), Mode::Auto);
        assert_eq!(Mode::parse("z").unwrap(), Mode::ZSignable);
        assert!(Strategy::parse("random").is_err());
    }
}
