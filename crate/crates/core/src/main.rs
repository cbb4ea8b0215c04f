use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dporient::aux_digraph::{build_d_sigma, build_d_sigma_phi};
use dporient::caps::Caps;
use dporient::certify::{certify, replay, Instance, Mode, Strategy, Verdict};
use dporient::correspondence::{classify_assignment, SignData};
use dporient::crossval::{cross_validate, random_sign_data, SizeCaps};
use dporient::decomposition::{cover, lift, LiftMode};
use dporient::error::{Error, Result};
use dporient::field::FieldSpec;
use dporient::fixtures::{gen_fixture, FIXTURE_NAMES};
use dporient::graph::{Digraph, Orientation};
use dporient::io;
use dporient::nullstellensatz::{
    at_sufficient_monomial, coefficient, eulerian_difference, expand_graph_polynomial, target_monomial,
    verify_identity, weights_from_sign_data,
};
use dporient::solver::{solve, SolveOutcome};

#[derive(Parser)]
#[command(name = "dporient", version, about = "Orientation certificates for DP-colorings")]
struct Cli {
    /// Cap overrides such as `euler_arcs=40,solver_budget=1000`.
    #[arg(long, global = true)]
    caps: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuxKind {
    Plain,
    Sigma,
    Sigmaphi,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an assignment relative to its orientation.
    Classify { file: String },
    /// Minimal per-edge covers by in-class sub-matchings.
    Decompose {
        file: String,
        #[arg(long, default_value = "g")]
        mode: String,
    },
    /// Lift an assignment to the multigraph of a mode.
    Lift {
        file: String,
        #[arg(long, default_value = "g")]
        mode: String,
    },
    /// Build `D_σ` or `D_{σ,φ}` for the instance orientation.
    Aux {
        file: String,
        #[arg(long, value_enum, default_value = "sigmaphi")]
        kind: AuxKind,
        #[arg(long)]
        dot: bool,
    },
    /// Count even and odd spanning Eulerian subdigraphs.
    Euler {
        /// A digraph `{"n":..,"arcs":[[t,h],..]}` or an instance.
        file: String,
        #[arg(long, value_enum, default_value = "plain")]
        kind: AuxKind,
    },
    /// Coefficient of a monomial in the graph polynomial of the orientation.
    Coeff {
        file: String,
        /// `x1*x2^2`, `1` or `[1,2,0]`; defaults to `∏ x_v^{d⁺(v)}`.
        #[arg(long)]
        monomial: Option<String>,
        /// Also report the first monomial supported by the list sizes.
        #[arg(long)]
        sufficient: bool,
    },
    /// Check the coefficient / Eulerian identity on a file or random instances.
    VerifyIdentity {
        file: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `Q` or a prime such as `5`.
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Certify colorability through an orientation.
    Certify {
        file: String,
        #[arg(long, default_value = "auto")]
        mode: String,
        #[arg(long, default_value = "bounded-first")]
        strategy: String,
    },
    /// Search for a coloring.
    Solve { file: String },
    /// Re-check a certificate produced by `certify`.
    Replay { file: String },
    /// Emit a built-in instance.
    Gen {
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random soundness and identity checks.
    CrossValidate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        #[arg(long, default_value_t = 7)]
        max_edges: usize,
        #[arg(long, default_value_t = 3)]
        max_list: usize,
    },
}

enum Output {
    Json(Value, ExitCode),
    Text(String, ExitCode),
}

fn read_json(path: &str) -> Result<Value> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn read_instance(path: &str) -> Result<Instance> {
    io::instance_from_json(&read_json(path)?)
}

fn orientation_of(i: &Instance) -> Orientation {
    i.orientation.clone().unwrap_or_else(|| i.assignment.stored_orientation())
}

fn parse_field(s: &str) -> Result<FieldSpec> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t.trim_start_matches("GF").trim_start_matches('(').trim_end_matches(')');
    let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field `{s}`")))?;
    FieldSpec::prime(p)
}

fn sign_data_of(i: &Instance) -> Result<SignData> {
    let d = orientation_of(i);
    let class = classify_assignment(&i.assignment, &d)?;
    class.sign_data.ok_or_else(|| {
        Error::InvalidSignData(format!(
            "irregular edges {:?}",
            class.irregular.iter().map(|e| e + 1).collect::<Vec<_>>()
        ))
    })
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run(cli: Cli) -> Result<Output> {
    let caps = match &cli.caps {
        Some(spec) => Caps::from_env()?.with_overrides(spec)?,
        None => Caps::from_env()?,
    };
    let ok = ExitCode::SUCCESS;
    Ok(match cli.command {
        Command::Classify { file } => {
            let i = read_instance(&file)?;
            let d = orientation_of(&i);
            let class = classify_assignment(&i.assignment, &d)?;
            Output::Json(io::classification_to_json(&i.assignment, &d, &class), ok)
        }
        Command::Decompose { file, mode } => {
            let a = read_instance(&file)?.assignment;
            let mode = LiftMode::parse(&mode)?;
            let field = a.field();
            let covers = a
                .matchings()
                .iter()
                .map(|m| cover(&m.pairs, &field, mode, caps.zsignable_pairs).map(|c| io::cover_to_json(m.edge, &c, &field)))
                .collect::<Result<Vec<_>>>()?;
            Output::Json(Value::Array(covers), ok)
        }
        Command::Lift { file, mode } => {
            let a = read_instance(&file)?.assignment;
            let l = lift(&a, LiftMode::parse(&mode)?, caps.zsignable_pairs)?;
            Output::Json(io::lift_to_json(&l), ok)
        }
        Command::Aux { file, kind, dot } => {
            let i = read_instance(&file)?;
            let d = orientation_of(&i);
            let s = sign_data_of(&i)?;
            let x = match kind {
                AuxKind::Sigma => build_d_sigma(&d, &s.signs()?)?,
                AuxKind::Sigmaphi => build_d_sigma_phi(&d, &s)?,
                AuxKind::Plain => return Err(Error::Parse("aux needs --kind sigma or sigmaphi".into())),
            };
            if dot {
                Output::Text(x.to_dot(), ok)
            } else {
                Output::Json(io::aux_to_json(&x), ok)
            }
        }
        Command::Euler { file, kind } => {
            let v = read_json(&file)?;
            let (x, field) = if v.get("arcs").is_some() && v.get("graph").is_none() {
                let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing `n`".into()))? as usize;
                let arcs = v["arcs"]
                    .as_array()
                    .ok_or_else(|| Error::Parse("`arcs` must be an array".into()))?
                    .iter()
                    .map(|a| {
                        let t = a[0].as_u64().unwrap_or(0) as usize;
                        let h = a[1].as_u64().unwrap_or(0) as usize;
                        if t == 0 || h == 0 {
                            Err(Error::Parse("arcs are 1-based pairs".into()))
                        } else {
                            Ok((t - 1, h - 1))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let field = match v.get("field") {
                    Some(f) => io::field_from_json(f)?,
                    None => FieldSpec::Rationals,
                };
                (Digraph::new(n, arcs)?, field)
            } else {
                let i = io::instance_from_json(&v)?;
                let d = orientation_of(&i);
                let x = match kind {
                    AuxKind::Plain => d.digraph(),
                    AuxKind::Sigma => build_d_sigma(&d, &sign_data_of(&i)?.signs()?)?.digraph,
                    AuxKind::Sigmaphi => build_d_sigma_phi(&d, &sign_data_of(&i)?)?.digraph,
                };
                (x, i.assignment.field())
            };
            let diff = eulerian_difference(&x, &field, caps.euler_arcs)?;
            Output::Json(io::euler_to_json(&diff), ok)
        }
        Command::Coeff { file, monomial, sufficient } => {
            let i = read_instance(&file)?;
            let d = orientation_of(&i);
            let s = sign_data_of(&i)?;
            let field = i.assignment.field();
            let n = d.graph().vertex_count();
            let m = match &monomial {
                Some(text) => io::monomial_from_str(text, n)?,
                None => target_monomial(&d),
            };
            let weights = weights_from_sign_data(&s);
            let cap = if sufficient { None } else { Some(&m) };
            let p = expand_graph_polynomial(&d, &weights, cap, caps.expansion_edges)?;
            let c = coefficient(&p, &m, &field)?;
            let mut out = json!({"monomial": m.to_string(), "coefficient": io::scalar_to_json(&c)});
            if sufficient {
                out["sufficient"] = match at_sufficient_monomial(&p, &i.assignment.list_sizes(), &field)? {
                    Some((mono, c)) => json!({"monomial": mono.to_string(), "coefficient": io::scalar_to_json(&c)}),
                    None => Value::Null,
                };
            }
            Output::Json(out, ok)
        }
        Command::VerifyIdentity { file, trials, seed, field } => match file {
            Some(path) => {
                let i = read_instance(&path)?;
                let rep = verify_identity(&orientation_of(&i), &sign_data_of(&i)?, &caps)?;
                let holds = rep.holds;
                Output::Json(io::identity_to_json(&rep), exit(holds))
            }
            None => {
                let spec = parse_field(&field)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut failures = Vec::new();
                for t in 0..trials {
                    let (d, s) = random_sign_data(&mut rng, spec, 5, 7, 3)?;
                    let rep = verify_identity(&d, &s, &caps)?;
                    if !rep.holds {
                        failures.push(json!({"trial": t, "report": io::identity_to_json(&rep)}));
                    }
                }
                let clean = failures.is_empty();
                Output::Json(json!({"trials": trials, "field": spec.to_string(), "failures": failures}), exit(clean))
            }
        },
        Command::Certify { file, mode, strategy } => {
            let i = read_instance(&file)?;
            let v = certify(&i, Mode::parse(&mode)?, Strategy::parse(&strategy)?, &caps);
            let certified = v.is_certified();
            Output::Json(io::verdict_to_json(&i.assignment, &v), exit(certified))
        }
        Command::Solve { file } => {
            let a = read_instance(&file)?.assignment;
            match solve(&a, caps.solver_budget) {
                SolveOutcome::Colorable(f) => Output::Json(json!({"colorable": true, "coloring": io::coloring_to_json(&f)}), ok),
                SolveOutcome::NotColorable => Output::Json(json!({"colorable": false}), exit(false)),
                SolveOutcome::BudgetExhausted { nodes } => {
                    Output::Json(json!({"colorable": null, "budget_exhausted": nodes}), exit(false))
                }
            }
        }
        Command::Replay { file } => {
            let (original, verdict) = io::verdict_from_json(&read_json(&file)?)?;
            match verdict {
                Verdict::Certified(c) => {
                    replay(&original, &c, &caps)?;
                    Output::Json(json!({"replay": "certified"}), ok)
                }
                Verdict::Inconclusive(i) => {
                    Output::Json(json!({"replay": "inconclusive", "reason": i.reason.name()}), exit(false))
                }
            }
        }
        Command::Gen { fixture, seed } => {
            let i = gen_fixture(&fixture, seed).map_err(|e| match e {
                Error::UnknownFixture(n) => Error::UnknownFixture(format!("{n} (known: {})", FIXTURE_NAMES.join(", "))),
                e => e,
            })?;
            Output::Json(io::instance_to_json(&i), ok)
        }
        Command::CrossValidate { seed, trials, field, max_vertices, max_edges, max_list } => {
            let sizes = SizeCaps { max_vertices, max_edges, max_list };
            let r = cross_validate(seed, trials, parse_field(&field)?, &sizes, &caps);
            let clean = r.discrepancies.is_empty();
            Output::Json(io::cross_report_to_json(&r), if clean { ok } else { ExitCode::FAILURE })
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Output::Json(v, code)) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&v).expect("serializable"));
            code
        }
        Ok(Output::Text(s, code)) => {
            let _ = write!(std::io::stdout().lock(), "{s}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
