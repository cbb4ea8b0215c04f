//! JSON encodings. Vertices, edges and arcs are 1-based on the wire.
//!
//! Scalars are bare integers or `"p/q"` strings; a field is `{"field":"Q"}`
//! or `{"field":"GF","p":5}`; an assignment is
//! `{"graph":{"n":..,"edges":[[u,v],..]},"field":..,"lists":{"1":[..],..},
//! "matchings":[{"edge":k,"tail":u,"pairs":[[c1,c2],..]},..]}`.

use std::collections::BTreeMap;

use num::{BigInt, BigUint, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::aux_digraph::AuxDigraph;
use crate::certify::{AuxUsed, Certificate, Evidence, Inconclusive, InconclusiveReason, Instance, Verdict};
use crate::correspondence::{AssignmentClass, CorrespondenceAssignment, EdgeClass, PartialMatching};
use crate::crossval::CrossReport;
use crate::decomposition::{LiftMode, LiftResult, MatchingCover};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::graph::{Multigraph, Orientation};
use crate::nullstellensatz::{EulerianDifference, IdentityReport, Monomial, SparsePolynomial};
use crate::solver::Coloring;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing key `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("`{what}` must be a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("`{what}` must be an array")))
}

/// 1-based vertex index into 0-based, range-checked against `n`.
fn vertex(v: &Value, n: usize) -> Result<usize> {
    let x = as_usize(v, "vertex")?;
    if x == 0 || x > n {
        return Err(Error::VertexOutOfRange { vertex: x, n });
    }
    Ok(x - 1)
}

fn pair_of(v: &Value, what: &str) -> Result<(Value, Value)> {
    match as_array(v, what)?.as_slice() {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(parse_err(format!("`{what}` entries must be pairs"))),
    }
}

pub fn scalar_to_json(x: &FieldElement) -> Value {
    match x {
        FieldElement::Residue(r) => json!(r),
        FieldElement::Rational(_) => match x.to_bigint().and_then(|n| n.to_i64()) {
            Some(n) => json!(n),
            None => json!(x.to_string()),
        },
    }
}

pub fn scalar_from_json(spec: &FieldSpec, v: &Value) -> Result<FieldElement> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(spec.from_i64(i)),
            None => Err(parse_err(format!("{n} is not an integer"))),
        },
        Value::String(s) => spec.parse(s),
        other => Err(parse_err(format!("{other} is not a field element"))),
    }
}

fn big_to_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

fn big_from_json(v: &Value) -> Result<BigUint> {
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(|| parse_err("count must be nonnegative")),
        Value::String(s) => s.parse().map_err(|_| parse_err(format!("`{s}` is not a count"))),
        _ => Err(parse_err("count must be a number or string")),
    }
}

pub fn field_to_json(spec: &FieldSpec) -> Value {
    match spec {
        FieldSpec::Rationals => json!({"field": "Q"}),
        FieldSpec::Prime(p) => json!({"field": "GF", "p": p}),
    }
}

pub fn field_from_json(v: &Value) -> Result<FieldSpec> {
    match get(v, "field")?.as_str() {
        Some("Q") => Ok(FieldSpec::Rationals),
        Some("GF") => FieldSpec::prime(get(v, "p")?.as_u64().ok_or_else(|| parse_err("`p` must be an integer"))?),
        _ => Err(parse_err("`field` must be \"Q\" or \"GF\"")),
    }
}

pub fn graph_to_json(g: &Multigraph) -> Value {
    let edges: Vec<Value> = g.edges().iter().map(|&(u, v)| json!([u + 1, v + 1])).collect();
    json!({"n": g.vertex_count(), "edges": edges})
}

pub fn graph_from_json(v: &Value) -> Result<Multigraph> {
    let n = as_usize(get(v, "n")?, "n")?;
    let mut pairs = Vec::new();
    for e in as_array(get(v, "edges")?, "edges")? {
        let (a, b) = pair_of(e, "edges")?;
        pairs.push((as_usize(&a, "edge endpoint")?, as_usize(&b, "edge endpoint")?));
    }
    Multigraph::from_one_based(n, &pairs)
}

fn arcs_to_json(d: &Orientation) -> Value {
    Value::Array(d.arcs().into_iter().map(|(t, h)| json!([t + 1, h + 1])).collect())
}

pub fn orientation_to_json(d: &Orientation) -> Value {
    json!({"arcs": arcs_to_json(d)})
}

/// Reads `[[t,h],..]` or `{"arcs":[[t,h],..]}`, one arc per edge in edge order.
pub fn orientation_from_json(g: &Multigraph, v: &Value) -> Result<Orientation> {
    let arcs = match v.get("arcs") {
        Some(a) => a,
        None => v,
    };
    let n = g.vertex_count();
    let mut out = Vec::new();
    for a in as_array(arcs, "arcs")? {
        let (t, h) = pair_of(a, "arcs")?;
        out.push((vertex(&t, n)?, vertex(&h, n)?));
    }
    Orientation::from_arcs(g, &out)
}

pub fn assignment_to_json(a: &CorrespondenceAssignment) -> Value {
    let mut lists = Map::new();
    for (v, l) in a.lists().iter().enumerate() {
        lists.insert((v + 1).to_string(), Value::Array(l.iter().map(scalar_to_json).collect()));
    }
    let matchings: Vec<Value> = a
        .matchings()
        .iter()
        .map(|m| {
            let pairs: Vec<Value> =
                m.pairs.iter().map(|(c1, c2)| json!([scalar_to_json(c1), scalar_to_json(c2)])).collect();
            json!({"edge": m.edge + 1, "tail": m.tail + 1, "pairs": pairs})
        })
        .collect();
    json!({
        "graph": graph_to_json(a.graph()),
        "field": field_to_json(&a.field()),
        "lists": Value::Object(lists),
        "matchings": matchings,
    })
}

pub fn assignment_from_json(v: &Value) -> Result<CorrespondenceAssignment> {
    let graph = graph_from_json(get(v, "graph")?)?;
    let field = field_from_json(get(v, "field")?)?;
    let n = graph.vertex_count();
    let list_obj = get(v, "lists")?.as_object().ok_or_else(|| parse_err("`lists` must be an object"))?;
    let mut lists: Vec<Option<Vec<FieldElement>>> = vec![None; n];
    for (key, entries) in list_obj {
        let idx: usize = key.parse().map_err(|_| parse_err(format!("list key `{key}` is not a vertex")))?;
        if idx == 0 || idx > n {
            return Err(Error::VertexOutOfRange { vertex: idx, n });
        }
        let l = as_array(entries, "list")?.iter().map(|c| scalar_from_json(&field, c)).collect::<Result<_>>()?;
        lists[idx - 1] = Some(l);
    }
    let lists = lists
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or(Error::InvalidList { vertex: v + 1, reason: "missing".into() }))
        .collect::<Result<Vec<_>>>()?;
    let mut matchings = Vec::new();
    for m in as_array(get(v, "matchings")?, "matchings")? {
        let e = as_usize(get(m, "edge")?, "edge")?;
        if e == 0 || e > graph.edge_count() {
            return Err(Error::UnknownEdge(e));
        }
        let (x, y) = graph.endpoints(e - 1)?;
        let tail = vertex(get(m, "tail")?, n)?;
        let head = if tail == x {
            y
        } else if tail == y {
            x
        } else {
            return Err(Error::InvalidMatching { edge: e, reason: format!("tail {} is not an endpoint", tail + 1) });
        };
        let mut pairs = Vec::new();
        for p in as_array(get(m, "pairs")?, "pairs")? {
            let (c1, c2) = pair_of(p, "pairs")?;
            pairs.push((scalar_from_json(&field, &c1)?, scalar_from_json(&field, &c2)?));
        }
        matchings.push(PartialMatching { edge: e - 1, tail, head, pairs });
    }
    CorrespondenceAssignment::new(graph, field, lists, matchings)
}

pub fn instance_to_json(i: &Instance) -> Value {
    let mut v = assignment_to_json(&i.assignment);
    if let Some(d) = &i.orientation {
        v["orientation"] = arcs_to_json(d);
    }
    v
}

/// An assignment, optionally carrying an `"orientation"` key.
pub fn instance_from_json(v: &Value) -> Result<Instance> {
    let a = assignment_from_json(v)?;
    match v.get("orientation") {
        None | Some(Value::Null) => Ok(Instance::new(a)),
        Some(o) => {
            let d = orientation_from_json(a.graph(), o)?;
            Instance::with_orientation(a, d)
        }
    }
}

pub fn lift_to_json(l: &LiftResult) -> Value {
    let mut v = assignment_to_json(&l.assignment);
    v["mode"] = json!(l.mode.name());
    v["provenance"] =
        Value::Array(l.provenance.iter().map(|&(e, part)| json!({"edge": e + 1, "part": part + 1})).collect());
    v
}

pub fn lift_from_json(v: &Value) -> Result<LiftResult> {
    let assignment = assignment_from_json(v)?;
    let mode = LiftMode::parse(get(v, "mode")?.as_str().ok_or_else(|| parse_err("`mode` must be a string"))?)?;
    let mut provenance = Vec::new();
    for p in as_array(get(v, "provenance")?, "provenance")? {
        let e = as_usize(get(p, "edge")?, "edge")?;
        let part = as_usize(get(p, "part")?, "part")?;
        if e == 0 || part == 0 {
            return Err(parse_err("provenance ids are 1-based"));
        }
        provenance.push((e - 1, part - 1));
    }
    Ok(LiftResult { mode, assignment, provenance })
}

fn class_fields(c: &EdgeClass, spec: &FieldSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tag".into(), json!(c.name()));
    if let Some((phi, a)) = c.witness(spec) {
        m.insert("phi".into(), scalar_to_json(&phi));
        m.insert("a".into(), scalar_to_json(&a));
    }
    m
}

pub fn classification_to_json(a: &CorrespondenceAssignment, d: &Orientation, c: &AssignmentClass) -> Value {
    let spec = a.field();
    let edges: Vec<Value> = c
        .edges
        .iter()
        .enumerate()
        .map(|(e, class)| {
            let (t, h) = d.arc(e);
            let mut m = class_fields(class, &spec);
            m.insert("edge".into(), json!(e + 1));
            m.insert("arc".into(), json!([t + 1, h + 1]));
            if let Some(f) = c.sign_data.as_ref().and_then(|s| s.edges()[e].factor) {
                m.insert("sigma".into(), json!(f.sign.value()));
                m.insert("phi_plus".into(), json!(f.magnitude));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "class": c.rank.name(),
        "edges": edges,
        "irregular": c.irregular.iter().map(|e| e + 1).collect::<Vec<_>>(),
    })
}

pub fn cover_to_json(edge: usize, c: &MatchingCover, spec: &FieldSpec) -> Value {
    let parts: Vec<Value> = c
        .parts
        .iter()
        .map(|p| {
            let mut m = class_fields(&p.class, spec);
            m.insert(
                "pairs".into(),
                Value::Array(p.pairs.iter().map(|(a, b)| json!([scalar_to_json(a), scalar_to_json(b)])).collect()),
            );
            Value::Object(m)
        })
        .collect();
    json!({"edge": edge + 1, "mode": c.mode.name(), "k": c.k(), "parts": parts})
}

pub fn polynomial_to_json(p: &SparsePolynomial) -> Value {
    Value::Array(
        p.sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let coef = if c.is_integer() { bigint_to_json(c.numer()) } else { json!(c.to_string()) };
                json!({"exp": m.0, "coef": coef})
            })
            .collect(),
    )
}

/// Parses `"x1^2*x3"`, `"1"` or a JSON exponent array.
pub fn monomial_from_str(s: &str, n: usize) -> Result<Monomial> {
    let s = s.trim();
    if s.starts_with('[') {
        let v: Vec<u32> = serde_json::from_str(s)?;
        if v.len() != n {
            return Err(parse_err(format!("monomial needs {n} exponents")));
        }
        return Ok(Monomial(v));
    }
    let mut exp = vec![0u32; n];
    if s == "1" {
        return Ok(Monomial(exp));
    }
    for factor in s.split('*') {
        let factor = factor.trim();
        let body = factor.strip_prefix('x').ok_or_else(|| parse_err(format!("bad factor `{factor}`")))?;
        let (var, power) = match body.split_once('^') {
            Some((v, p)) => (v, p.parse::<u32>().map_err(|_| parse_err(format!("bad exponent in `{factor}`")))?),
            None => (body, 1),
        };
        let i: usize = var.parse().map_err(|_| parse_err(format!("bad variable in `{factor}`")))?;
        if i == 0 || i > n {
            return Err(Error::VertexOutOfRange { vertex: i, n });
        }
        exp[i - 1] += power;
    }
    Ok(Monomial(exp))
}

pub fn coloring_to_json(f: &Coloring) -> Value {
    let mut m = Map::new();
    for (v, c) in f.0.iter().enumerate() {
        m.insert((v + 1).to_string(), scalar_to_json(c));
    }
    Value::Object(m)
}

pub fn coloring_from_json(spec: &FieldSpec, n: usize, v: &Value) -> Result<Coloring> {
    let obj = v.as_object().ok_or_else(|| parse_err("coloring must be an object"))?;
    let mut colors: BTreeMap<usize, FieldElement> = BTreeMap::new();
    for (k, c) in obj {
        let i: usize = k.parse().map_err(|_| parse_err(format!("`{k}` is not a vertex")))?;
        if i == 0 || i > n {
            return Err(Error::VertexOutOfRange { vertex: i, n });
        }
        colors.insert(i - 1, scalar_from_json(spec, c)?);
    }
    if colors.len() != n {
        return Err(parse_err("coloring must be total"));
    }
    Ok(Coloring(colors.into_values().collect()))
}

pub fn aux_to_json(x: &AuxDigraph) -> Value {
    let gamma: Vec<Value> = x
        .paths
        .iter()
        .enumerate()
        .map(|(e, ps)| {
            let paths: Vec<Vec<usize>> = ps.iter().map(|p| p.iter().map(|a| a + 1).collect()).collect();
            json!({"edge": e + 1, "sigma": x.signs[e].value(), "phi_plus": x.magnitudes[e], "paths": paths})
        })
        .collect();
    json!({
        "vertices": x.vertices.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "arcs": x.digraph.arcs().iter().map(|&(t, h)| json!([t + 1, h + 1])).collect::<Vec<_>>(),
        "gamma_paths": gamma,
    })
}

pub fn euler_to_json(d: &EulerianDifference) -> Value {
    json!({
        "ee": big_to_json(&d.count.ee),
        "eo": big_to_json(&d.count.eo),
        "difference": bigint_to_json(&d.difference),
        "residue": scalar_to_json(&d.residue),
        "is_zero": d.is_zero,
    })
}

pub fn identity_to_json(r: &IdentityReport) -> Value {
    let coef = if r.coefficient.is_integer() {
        bigint_to_json(r.coefficient.numer())
    } else {
        json!(r.coefficient.to_string())
    };
    json!({
        "monomial": r.monomial.to_string(),
        "coefficient": coef,
        "coefficient_in_field": scalar_to_json(&r.coefficient_in_field),
        "euler": euler_to_json(&r.euler),
        "holds": r.holds,
    })
}

fn aux_from_name(s: &str) -> Result<AuxUsed> {
    match s {
        "D" => Ok(AuxUsed::Plain),
        "D_sigma" => Ok(AuxUsed::Sigma),
        "D_sigma_phi" => Ok(AuxUsed::SigmaPhi),
        other => Err(parse_err(format!("unknown auxiliary digraph `{other}`"))),
    }
}

fn reason_from_name(s: &str) -> Result<InconclusiveReason> {
    [
        InconclusiveReason::NoFeasibleOrientation,
        InconclusiveReason::AllZeroResidue,
        InconclusiveReason::ClassNotApplicable,
        InconclusiveReason::CapsExceeded,
    ]
    .into_iter()
    .find(|r| r.name() == s)
    .ok_or_else(|| parse_err(format!("unknown reason `{s}`")))
}

/// A verdict together with the original assignment, enough for replay.
pub fn verdict_to_json(original: &CorrespondenceAssignment, v: &Verdict) -> Value {
    match v {
        Verdict::Certified(c) => {
            let evidence = match &c.evidence {
                Evidence::Counted { ee, eo } => json!({"kind": "counted", "ee": big_to_json(ee), "eo": big_to_json(eo)}),
                Evidence::Bipartite { sides } => json!({
                    "kind": "bipartite",
                    "sides": sides.iter().map(|&s| u8::from(s)).collect::<Vec<_>>(),
                }),
            };
            let table: Vec<Value> = c
                .degree_table
                .iter()
                .enumerate()
                .map(|(v, &(need, have))| json!({"vertex": v + 1, "out_degree_plus_one": need, "list_size": have}))
                .collect();
            json!({
                "outcome": "certified",
                "mode": c.mode.name(),
                "aux": c.aux.name(),
                "original": assignment_to_json(original),
                "lift": lift_to_json(&c.lift),
                "orientation": arcs_to_json(&c.orientation),
                "degree_table": table,
                "ee": match &c.evidence {
                    Evidence::Counted { ee, .. } => big_to_json(ee),
                    Evidence::Bipartite { .. } => Value::Null,
                },
                "eo": big_to_json(&c.eo()),
                "evidence": evidence,
                "residue": c.residue.as_ref().map(scalar_to_json),
            })
        }
        Verdict::Inconclusive(i) => json!({
            "outcome": "inconclusive",
            "reason": i.reason.name(),
            "mode": i.mode.map(LiftMode::name),
            "tried": i.tried,
            "detail": i.detail,
            "original": assignment_to_json(original),
        }),
    }
}

pub fn verdict_from_json(v: &Value) -> Result<(CorrespondenceAssignment, Verdict)> {
    let original = assignment_from_json(get(v, "original")?)?;
    let text = |key: &str| -> Result<&str> {
        get(v, key)?.as_str().ok_or_else(|| parse_err(format!("`{key}` must be a string")))
    };
    let verdict = match text("outcome")? {
        "certified" => {
            let lift = lift_from_json(get(v, "lift")?)?;
            let orientation = orientation_from_json(lift.assignment.graph(), get(v, "orientation")?)?;
            let mut degree_table = Vec::new();
            for row in as_array(get(v, "degree_table")?, "degree_table")? {
                degree_table.push((
                    as_usize(get(row, "out_degree_plus_one")?, "out_degree_plus_one")?,
                    as_usize(get(row, "list_size")?, "list_size")?,
                ));
            }
            let ev = get(v, "evidence")?;
            let evidence = match get(ev, "kind")?.as_str() {
                Some("counted") => Evidence::Counted { ee: big_from_json(get(ev, "ee")?)?, eo: big_from_json(get(ev, "eo")?)? },
                Some("bipartite") => Evidence::Bipartite {
                    sides: as_array(get(ev, "sides")?, "sides")?
                        .iter()
                        .map(|s| as_usize(s, "side").map(|x| x == 1))
                        .collect::<Result<_>>()?,
                },
                _ => return Err(parse_err("unknown evidence kind")),
            };
            let spec = lift.assignment.field();
            let residue = match v.get("residue") {
                None | Some(Value::Null) => None,
                Some(r) => Some(scalar_from_json(&spec, r)?),
            };
            let mode = LiftMode::parse(text("mode")?)?;
            Verdict::Certified(Box::new(Certificate {
                mode,
                aux: aux_from_name(text("aux")?)?,
                lift,
                orientation,
                degree_table,
                evidence,
                residue,
            }))
        }
        "inconclusive" => Verdict::Inconclusive(Inconclusive {
            reason: reason_from_name(text("reason")?)?,
            mode: match v.get("mode").and_then(Value::as_str) {
                Some(m) => Some(LiftMode::parse(m)?),
                None => None,
            },
            tried: v.get("tried").and_then(Value::as_u64).unwrap_or(0) as usize,
            detail: v.get("detail").and_then(Value::as_str).unwrap_or_default().to_string(),
        }),
        other => return Err(parse_err(format!("unknown outcome `{other}`"))),
    };
    Ok((original, verdict))
}

pub fn cross_report_to_json(r: &CrossReport) -> Value {
    json!({
        "trials": r.trials,
        "certified": r.certified,
        "colorable": r.colorable,
        "identity_checks": r.identity_checks,
        "skipped_checks": r.skipped_checks,
        "discrepancies": r.discrepancies.iter().map(|d| json!({
            "trial": d.trial,
            "kind": d.kind,
            "detail": d.detail,
        })).collect::<Vec<_>>(),
    })
}
