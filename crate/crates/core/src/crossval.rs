//! Randomized soundness harness: certified instances must be solvable, and
//! the coefficient identities must hold on every generated instance.

use num::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aux_digraph::{build_d_sigma, build_d_sigma_phi};
use crate::caps::Caps;
use crate::certify::{certify, lift_for_mode, replay, Instance, Mode, Strategy};
use crate::correspondence::{classify_assignment, CorrespondenceAssignment, EdgeSign, PartialMatching, SignData};
use crate::decomposition::LiftMode;
use crate::error::{Error, Result};
use crate::field::{Factorization, FieldElement, FieldSpec, Sign};
use crate::graph::{Multigraph, Orientation};
use crate::nullstellensatz::{eulerian_difference, verify_identity};
use crate::solver::{check_coloring, solve, SolveOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCaps {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_list: usize,
}

impl Default for SizeCaps {
    fn default() -> SizeCaps {
        SizeCaps { max_vertices: 5, max_edges: 7, max_list: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub trial: usize,
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossReport {
    pub trials: usize,
    pub certified: usize,
    pub colorable: usize,
    pub identity_checks: usize,
    pub skipped_checks: usize,
    pub discrepancies: Vec<Discrepancy>,
}

fn matching_pairs(
    rng: &mut ChaCha8Rng,
    field: &FieldSpec,
    l1: &[FieldElement],
    l2: &[FieldElement],
) -> Vec<(FieldElement, FieldElement)> {
    let f = field;
    let kind = rng.gen_range(0..5);
    let mut pairs = Vec::new();
    if kind == 4 {
        let mut right: Vec<&FieldElement> = l2.iter().collect();
        right.shuffle(rng);
        for (c1, c2) in l1.iter().zip(right) {
            if rng.gen_bool(0.7) {
                pairs.push((c1.clone(), c2.clone()));
            }
        }
        return pairs;
    }
    let phi = match kind {
        0 => f.one(),
        1 => f.from_i64(-1),
        2 => f.from_i64(*[2, -2, 3].choose(rng).expect("nonempty")),
        _ => f.from_i64(1),
    };
    if phi.is_zero() {
        return pairs;
    }
    // Pick the shift so that at least one pair exists.
    let c1 = l1.choose(rng).expect("nonempty list");
    let c2 = l2.choose(rng).expect("nonempty list");
    let a = f.sub(c1, &f.mul(&phi, c2));
    for x in l1 {
        for y in l2 {
            if f.sub(x, &f.mul(&phi, y)) == a && (rng.gen_bool(0.8) || (x == c1 && y == c2)) {
                pairs.push((x.clone(), y.clone()));
            }
        }
    }
    pairs
}

/// A random assignment with at most `caps.max_vertices` vertices and
/// `caps.max_edges` edges; matchings are straight, good, sign-reversing,
/// scaled, or arbitrary.
pub fn random_assignment(rng: &mut ChaCha8Rng, field: FieldSpec, caps: &SizeCaps) -> Result<CorrespondenceAssignment> {
    let n = rng.gen_range(2..=caps.max_vertices.max(2));
    let m = rng.gen_range(0..=caps.max_edges);
    let edges: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            (u, v)
        })
        .collect();
    let graph = Multigraph::new(n, edges.clone())?;
    let palette: Vec<i64> = match field {
        FieldSpec::Prime(p) => (0..p.min(7) as i64).collect(),
        FieldSpec::Rationals => (-2..5).collect(),
    };
    let lists: Vec<Vec<FieldElement>> = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=caps.max_list.min(palette.len()));
            palette.choose_multiple(rng, size).map(|&c| field.from_i64(c)).collect()
        })
        .collect();
    let matchings = edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| PartialMatching {
            edge: e,
            tail: u,
            head: v,
            pairs: matching_pairs(rng, &field, &lists[u], &lists[v]),
        })
        .collect();
    CorrespondenceAssignment::new(graph, field, lists, matchings)
}

/// A random orientation with at most `max_vertices` vertices and `max_edges`
/// arcs, and sign data `φ = σφ⁺` with `1 <= φ⁺ <= max_magnitude`.
/// Magnitudes divisible by the characteristic are skipped.
pub fn random_sign_data(
    rng: &mut ChaCha8Rng,
    field: FieldSpec,
    max_vertices: usize,
    max_edges: usize,
    max_magnitude: u64,
) -> Result<(Orientation, SignData)> {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let m = rng.gen_range(0..=max_edges);
    let edges: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            (u, (u + rng.gen_range(1..n)) % n)
        })
        .collect();
    let d = Orientation::as_stored(&Multigraph::new(n, edges)?);
    let magnitudes: Vec<u64> = (1..=max_magnitude.max(1))
        .filter(|&k| !field.is_zero_residue(&BigInt::from(k)))
        .collect();
    let signs = (0..m)
        .map(|_| {
            let f = Factorization {
                sign: if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus },
                magnitude: *magnitudes.choose(rng).expect("1 is always allowed"),
            };
            EdgeSign { phi: field.from_factorization(&f), a: field.from_i64(rng.gen_range(-2..3)), factor: Some(f) }
        })
        .collect();
    let s = SignData::new(field, d.clone(), signs)?;
    Ok((d, s))
}

struct Trial<'a> {
    index: usize,
    caps: &'a Caps,
    report: &'a mut CrossReport,
}

impl Trial<'_> {
    fn flag(&mut self, kind: &'static str, detail: String) {
        self.report.discrepancies.push(Discrepancy { trial: self.index, kind, detail });
    }

    fn skip_or_flag(&mut self, kind: &'static str, e: Error) {
        match e {
            Error::CapExceeded { .. } => self.report.skipped_checks += 1,
            e => self.flag(kind, e.to_string()),
        }
    }

    fn soundness(&mut self, a: &CorrespondenceAssignment) {
        let solved = solve(a, self.caps.solver_budget);
        if let SolveOutcome::Colorable(f) = &solved {
            self.report.colorable += 1;
            if !check_coloring(a, f).is_valid() {
                self.flag("solver", "returned coloring fails the check".into());
            }
        }
        let verdict = certify(&Instance::new(a.clone()), Mode::Auto, Strategy::BoundedFirst, self.caps);
        if let Some(cert) = verdict.certificate() {
            self.report.certified += 1;
            if solved == SolveOutcome::NotColorable {
                self.flag("soundness", format!("certified in mode {} but not colorable", cert.mode.name()));
            }
            if let Err(e) = replay(a, cert, self.caps) {
                self.flag("replay", e.to_string());
            }
        }
    }

    /// Coefficient identity on the Z-signable lift, and sign-choice
    /// independence of its residue over `Z_p`.
    fn identity(&mut self, a: &CorrespondenceAssignment, rng: &mut ChaCha8Rng) -> Result<()> {
        let l = lift_for_mode(a, LiftMode::ZSignable, self.caps)?;
        let d = l.assignment.stored_orientation();
        let s = classify_assignment(&l.assignment, &d)?.sign_data.expect("lift is in class");
        let rep = verify_identity(&d, &s, self.caps)?;
        self.report.identity_checks += 1;
        if !rep.holds {
            self.flag(
                "identity",
                format!("coefficient {} vs EE-EO {}", rep.coefficient, rep.euler.difference),
            );
        }
        if let FieldSpec::Prime(_) = s.field() {
            let flips: Vec<Option<Sign>> = s
                .factors()?
                .iter()
                .map(|f| rng.gen_bool(0.5).then_some(f.sign.flip()))
                .collect();
            let other = verify_identity(&d, &s.with_signs(&flips)?, self.caps)?;
            self.report.identity_checks += 1;
            if other.euler.residue != rep.euler.residue || !other.holds {
                self.flag(
                    "factorization",
                    format!("residue {} vs {} after sign changes", rep.euler.residue, other.euler.residue),
                );
            }
        }
        Ok(())
    }

    /// `D_σ` and `D_{σ,φ}` agree on `EE - EO` for the signable lift.
    fn subdivision(&mut self, a: &CorrespondenceAssignment) -> Result<()> {
        let l = lift_for_mode(a, LiftMode::Signable, self.caps)?;
        let d = l.assignment.stored_orientation();
        let s = classify_assignment(&l.assignment, &d)?.sign_data.expect("lift is in class");
        let spec = s.field();
        let x = build_d_sigma(&d, &s.signs()?)?;
        let y = build_d_sigma_phi(&d, &s)?;
        let dx = eulerian_difference(&x.digraph, &spec, self.caps.euler_arcs)?;
        let dy = eulerian_difference(&y.digraph, &spec, self.caps.euler_arcs)?;
        self.report.identity_checks += 1;
        if dx.difference != dy.difference {
            self.flag("subdivision", format!("D_sigma {} vs D_sigma_phi {}", dx.difference, dy.difference));
        }
        Ok(())
    }
}

pub fn cross_validate(seed: u64, trials: usize, field: FieldSpec, sizes: &SizeCaps, caps: &Caps) -> CrossReport {
    let mut report = CrossReport { trials, ..CrossReport::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for index in 0..trials {
        let a = match random_assignment(&mut rng, field, sizes) {
            Ok(a) => a,
            Err(e) => {
                report.discrepancies.push(Discrepancy { trial: index, kind: "generator", detail: e.to_string() });
                continue;
            }
        };
        let mut t = Trial { index, caps, report: &mut report };
        t.soundness(&a);
        if let Err(e) = t.identity(&a, &mut rng) {
            t.skip_or_flag("identity", e);
        }
        if let Err(e) = t.subdivision(&a) {
            t.skip_or_flag("subdivision", e);
        }
    }
    report
}
