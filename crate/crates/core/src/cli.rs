//! Command-line front end. [`run`] is the whole program minus process I/O.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{ChoeOrder, FiniteAlgebra};
use crate::boundedness::{
    check_bounded_in, choe_bound, minimal_bound_with, BoundCheck, BoundMode, Certificate,
};
use crate::catalog::parse_builtin_spec;
use crate::classes::{verify_class_with, AlgebraClass};
use crate::congruence::CongruenceAnalyzer;
use crate::error::Error;
use crate::free_magma::{depth_invariant_check, free_magma_witness};
use crate::io::{parse_algebra, AlgebraFile};
use crate::skeleton::DEFAULT_SKELETON_BUDGET;
use crate::term::format_term;
use crate::translation::{brute_force_with, translation_monoid, BruteForceOptions};

/// Witnesses listed in text output unless `--all` is given.
pub const TEXT_LIST_CAP: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// The `--json` output: exactly one of these per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub status: Status,
    pub verb: String,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "affbound",
    version,
    about = "Translation monoids, congruences and affine-boundedness certificates"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Algebra file (JSON); `-` reads standard input.
    #[arg(long, value_name = "FILE")]
    algebra: Option<String>,
    /// Catalog algebra, e.g. `zn_ring:6`.
    #[arg(long, value_name = "NAME:P1,P2")]
    builtin: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Print one JSON report.
    #[arg(long)]
    json: bool,
    /// List every witness in text output.
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Signature, carrier and monoid size.
    Info {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Translation monoid with one witness term per element.
    Monoid {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Congruence lattice (carrier at most 7).
    Congruences {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Quotient by the principal congruence of a pair.
    Quotient {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long, value_name = "A,B")]
        pair: String,
    },
    /// Whether the only congruences are the trivial ones.
    Simple {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Affine-boundedness check at a given bound.
    Bound {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Least bound with its certificate.
    MinimalBound {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Bound formula for algebras distributive with respect to an order.
    Choe {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        /// Symbols of arity >= 2, lowest first; defaults to the file's order.
        #[arg(long, value_name = "S1,S2,..")]
        order: Option<String>,
    },
    /// Class membership and the class bound.
    VerifyClass {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        class: String,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Exhaustive term enumeration against the monoid closure.
    OracleCompare {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        max_height: usize,
        #[arg(long)]
        max_arity: usize,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Height lower bound in the free magma over {a, b}.
    FreeMagma {
        #[command(flatten)]
        out: Output,
        /// Largest index i checked.
        #[arg(long, default_value_t = 5)]
        m: usize,
        /// Node-count cap on constants; defaults to 2m.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Info { .. } => "info",
            Verb::Monoid { .. } => "monoid",
            Verb::Congruences { .. } => "congruences",
            Verb::Quotient { .. } => "quotient",
            Verb::Simple { .. } => "simple",
            Verb::Bound { .. } => "bound",
            Verb::MinimalBound { .. } => "minimal-bound",
            Verb::Choe { .. } => "choe",
            Verb::VerifyClass { .. } => "verify-class",
            Verb::OracleCompare { .. } => "oracle-compare",
            Verb::FreeMagma { .. } => "free-magma",
        }
    }

    fn output(&self) -> &Output {
        match self {
            Verb::Info { out, .. }
            | Verb::Monoid { out, .. }
            | Verb::Congruences { out, .. }
            | Verb::Quotient { out, .. }
            | Verb::Simple { out, .. }
            | Verb::Bound { out, .. }
            | Verb::MinimalBound { out, .. }
            | Verb::Choe { out, .. }
            | Verb::VerifyClass { out, .. }
            | Verb::OracleCompare { out, .. }
            | Verb::FreeMagma { out, .. } => out,
        }
    }
}

struct Loaded {
    algebra: FiniteAlgebra,
    order: Option<ChoeOrder>,
}

fn load(src: &Source, stdin: Option<&str>) -> Result<Loaded, Error> {
    match (&src.algebra, &src.builtin) {
        (Some(_), Some(_)) => Err(Error::Usage(
            "give either --algebra or --builtin, not both".into(),
        )),
        (None, None) => Err(Error::Usage(
            "an algebra is required (--algebra FILE or --builtin NAME:PARAMS)".into(),
        )),
        (None, Some(spec)) => Ok(Loaded {
            algebra: parse_builtin_spec(spec)?,
            order: None,
        }),
        (Some(path), None) => {
            let text = if path == "-" {
                stdin
                    .map(str::to_string)
                    .ok_or_else(|| Error::Format("no standard input available".into()))?
            } else {
                std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{path}: {e}")))?
            };
            let l = parse_algebra(&text)?;
            Ok(Loaded {
                algebra: l.algebra,
                order: l.choe_order,
            })
        }
    }
}

/// Verb result before rendering.
struct Done {
    status: Status,
    payload: Value,
    text: String,
}

fn done(status: Status, payload: impl Serialize, text: String) -> Result<Done, Error> {
    Ok(Done {
        status,
        payload: serde_json::to_value(payload).expect("payloads serialize"),
        text,
    })
}

fn parse_pair(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Format(format!("--pair expects `a,b`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn list_lines<T>(items: &[T], all: bool, mut line: impl FnMut(&T) -> String) -> String {
    let shown = if all {
        items.len()
    } else {
        items.len().min(TEXT_LIST_CAP)
    };
    let mut s = String::new();
    for it in &items[..shown] {
        let _ = writeln!(s, "  {}", line(it));
    }
    if shown < items.len() {
        let _ = writeln!(s, "  ... {} more (use --all)", items.len() - shown);
    }
    s
}

fn certificate_text(c: &Certificate, all: bool) -> String {
    list_lines(&c.witnesses, all, |w| format!("{:?}  {}", w.map, w.term))
}

fn bound_text(r: &BoundCheck, all: bool) -> String {
    match r {
        BoundCheck::Bounded(c) => format!(
            "affinely bounded by {}: {} witnesses\n{}",
            c.m,
            c.witnesses.len(),
            certificate_text(c, all)
        ),
        BoundCheck::NotBounded(f) => format!(
            "not affinely bounded by {}: {} maps missing\n{}",
            f.m,
            f.missing.len(),
            list_lines(&f.missing, all, |m| format!("{m:?}"))
        ),
    }
}

fn status_of(bounded: bool) -> Status {
    if bounded {
        Status::Ok
    } else {
        Status::Fail
    }
}

fn precondition_failure(err: Error, what: &str) -> Result<Done, Error> {
    match err {
        Error::Precondition(v) => {
            let mut text = format!("{what}: {} law(s) violated\n", v.len());
            for x in &v {
                let _ = writeln!(text, "  {x}");
            }
            done(Status::Fail, json!({ "violations": v }), text)
        }
        e => Err(e),
    }
}

fn execute(verb: &Verb, stdin: Option<&str>) -> Result<Done, Error> {
    let all = verb.output().all;
    match verb {
        Verb::Info { src, .. } => {
            let l = load(src, stdin)?;
            let a = &l.algebra;
            let monoid = translation_monoid(a)?;
            let symbols: Vec<Value> = a
                .signature()
                .iter()
                .map(|(_, s)| json!({ "symbol": s.name, "arity": s.arity }))
                .collect();
            let payload = json!({
                "name": a.name(),
                "carrier": a.carrier(),
                "symbols": symbols,
                "translations": monoid.generators().len(),
                "monoid_size": monoid.len(),
                "max_depth": monoid.max_depth(),
            });
            let text = format!(
                "{}\n|M(A)| = {}, {} translations, max witness height {}\n",
                a,
                monoid.len(),
                monoid.generators().len(),
                monoid.max_depth()
            );
            done(Status::Ok, payload, text)
        }
        Verb::Monoid { src, .. } => {
            let a = load(src, stdin)?.algebra;
            let monoid = translation_monoid(&a)?;
            let elements: Vec<Value> = (0..monoid.len())
                .map(|i| {
                    json!({
                        "map": monoid.elements()[i].image(),
                        "term": format_term(monoid.witness(i), a.signature()),
                        "depth": monoid.depth(i),
                    })
                })
                .collect();
            let payload = json!({
                "size": monoid.len(),
                "generators": monoid.generators().len(),
                "max_depth": monoid.max_depth(),
                "elements": elements,
            });
            let idx: Vec<usize> = (0..monoid.len()).collect();
            let text = format!(
                "{} elements ({} translations)\n{}",
                monoid.len(),
                monoid.generators().len(),
                list_lines(&idx, all, |&i| format!(
                    "{:?}  {}",
                    monoid.elements()[i].image(),
                    format_term(monoid.witness(i), a.signature())
                ))
            );
            done(Status::Ok, payload, text)
        }
        Verb::Congruences { src, .. } => {
            let a = load(src, stdin)?.algebra;
            let lattice = CongruenceAnalyzer::new(&a)?.lattice()?;
            let text = format!(
                "{} congruences\n{}",
                lattice.len(),
                list_lines(&lattice, true, |p| p.to_string())
            );
            done(
                Status::Ok,
                json!({ "count": lattice.len(), "congruences": lattice }),
                text,
            )
        }
        Verb::Quotient { src, pair, .. } => {
            let a = load(src, stdin)?.algebra;
            let (x, y) = parse_pair(pair)?;
            let an = CongruenceAnalyzer::new(&a)?;
            let theta = an.principal(x, y)?;
            let q = an.quotient(&theta)?;
            let file = AlgebraFile::from_algebra(&q, None);
            let text = format!(
                "congruence generated by ({x}, {y}): {theta}\nquotient has {} elements\n{}\n",
                q.carrier(),
                q
            );
            done(
                Status::Ok,
                json!({ "pair": [x, y], "congruence": theta, "quotient": file }),
                text,
            )
        }
        Verb::Simple { src, .. } => {
            let a = load(src, stdin)?.algebra;
            let an = CongruenceAnalyzer::new(&a)?;
            let simple = an.is_simple()?;
            // a proper nontrivial congruence, if any, as evidence
            let mut witness = Value::Null;
            let mut shown = String::new();
            if !simple && a.carrier() >= 2 {
                'outer: for x in 0..a.carrier() {
                    for y in x + 1..a.carrier() {
                        let p = an.principal(x, y)?;
                        if !p.is_total() {
                            shown = p.to_string();
                            witness = json!({ "pair": [x, y], "congruence": p });
                            break 'outer;
                        }
                    }
                }
            }
            let text = if simple {
                "simple\n".to_string()
            } else if witness.is_null() {
                "not simple: fewer than two elements\n".to_string()
            } else {
                format!("not simple: {shown} is a nontrivial congruence\n")
            };
            done(
                status_of(simple),
                json!({ "simple": simple, "witness": witness }),
                text,
            )
        }
        Verb::Bound { src, m, budget, .. } => {
            let a = load(src, stdin)?.algebra;
            let monoid = translation_monoid(&a)?;
            let r = check_bounded_in(
                &a,
                &monoid,
                *m,
                BoundMode::Full,
                budget.unwrap_or(DEFAULT_SKELETON_BUDGET),
            )?;
            let text = bound_text(&r, all);
            done(status_of(r.is_bounded()), &r, text)
        }
        Verb::MinimalBound { src, budget, .. } => {
            let a = load(src, stdin)?.algebra;
            let (m, cert) = minimal_bound_with(&a, budget.unwrap_or(DEFAULT_SKELETON_BUDGET))?;
            let text = format!("minimal bound {m}\n{}", certificate_text(&cert, all));
            done(Status::Ok, json!({ "m_min": m, "certificate": cert }), text)
        }
        Verb::Choe { src, order, .. } => {
            let l = load(src, stdin)?;
            let order = match order {
                Some(s) => {
                    let names: Vec<&str> = s
                        .split(',')
                        .map(str::trim)
                        .filter(|n| !n.is_empty())
                        .collect();
                    ChoeOrder::from_names(l.algebra.signature(), &names)?
                }
                None => l.order.ok_or_else(|| {
                    Error::InvalidOrder("no --order given and the algebra has none".into())
                })?,
            };
            match choe_bound(&l.algebra, &order) {
                Ok(b) => {
                    let text = format!(
                        "bound {} = 2*{} + {} - {}\n",
                        b.bound,
                        b.higher_symbols,
                        b.unary.iter().map(|u| u.monoid_size).sum::<usize>(),
                        b.unary.len()
                    );
                    done(Status::Ok, &b, text)
                }
                Err(e) => precondition_failure(e, "preconditions fail"),
            }
        }
        Verb::VerifyClass {
            src, class, budget, ..
        } => {
            let a = load(src, stdin)?.algebra;
            let class: AlgebraClass = class.parse()?;
            match verify_class_with(&a, class, budget.unwrap_or(DEFAULT_SKELETON_BUDGET)) {
                Ok(r) => {
                    let text = format!(
                        "{class} (bound {})\n{}",
                        r.bound,
                        bound_text(&r.result, all)
                    );
                    done(status_of(r.result.is_bounded()), &r, text)
                }
                Err(e) => precondition_failure(e, &format!("not a {class}")),
            }
        }
        Verb::OracleCompare {
            src,
            max_height,
            max_arity,
            budget,
            ..
        } => {
            let a = load(src, stdin)?.algebra;
            let payload = oracle_compare(
                &a,
                *max_height,
                *max_arity,
                budget.unwrap_or(DEFAULT_SKELETON_BUDGET),
            )?;
            let equal = payload["equal"].as_bool().unwrap_or(false);
            let text = format!(
                "monoid {} maps, enumeration {} maps, stabilization height {}\n",
                payload["monoid_size"],
                payload["enumerated_size"],
                payload["stabilization_height"]
                    .as_u64()
                    .map_or("not reached".to_string(), |h| h.to_string())
            );
            done(status_of(equal), payload, text)
        }
        Verb::FreeMagma {
            m,
            cap,
            seed,
            samples,
            ..
        } => {
            let cap = cap.unwrap_or(2 * m);
            let mut r = free_magma_witness(*m, cap)?;
            r.depth_check = Some(depth_invariant_check(*seed, *samples, *m, cap));
            let mut text = format!(
                "free magma over {{a, b}}, constants of at most {cap} nodes ({})\n",
                r.constants
            );
            for row in &r.rows {
                let _ = writeln!(
                    text,
                    "  i={} {}: least height {}, reachable below i: {}",
                    row.i,
                    row.target,
                    row.least_height
                        .map_or("none".to_string(), |h| h.to_string()),
                    row.reachable_below
                );
            }
            let d = r.depth_check.as_ref().unwrap();
            let _ = writeln!(
                text,
                "depth invariant: {} samples, {} violations",
                d.samples, d.violations
            );
            done(status_of(r.holds()), &r, text)
        }
    }
}

/// Enumerates proper terms within the bounds and compares with the
/// translation monoid. The stabilization height is the largest least-height
/// over all maps, defined when both sets agree.
pub fn oracle_compare(
    a: &FiniteAlgebra,
    max_height: usize,
    max_arity: usize,
    budget: u128,
) -> Result<Value, Error> {
    let monoid = translation_monoid(a)?;
    let found = brute_force_with(
        a,
        &BruteForceOptions::new(max_height, max_arity).skeleton_budget(budget),
    )?;
    let equal = found.image_set() == monoid.image_set();
    let stabilization = equal.then(|| {
        found
            .maps
            .iter()
            .map(|f| f.provenance().map_or(0, |t| t.height()))
            .max()
            .unwrap_or(0)
    });
    Ok(json!({
        "max_height": max_height,
        "max_arity": max_arity,
        "monoid_size": monoid.len(),
        "enumerated_size": found.len(),
        "skeletons": found.skeletons_examined,
        "equal": equal,
        "stabilization_height": stabilization,
    }))
}

/// Runs one invocation. `argv` excludes the program name.
pub fn run<S: AsRef<str>>(argv: &[S], stdin: Option<&str>) -> Outcome {
    let args = std::iter::once("affbound").chain(argv.iter().map(AsRef::as_ref));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let verb = cli.verb.name();
    let json_out = cli.verb.output().json;
    let (status, payload, text, stderr) = match execute(&cli.verb, stdin) {
        Ok(d) => (d.status, d.payload, d.text, String::new()),
        Err(e) => {
            let msg = format!("error: {e}\n");
            (
                Status::Error,
                json!({ "message": e.to_string() }),
                String::new(),
                msg,
            )
        }
    };
    let stdout = if json_out {
        let r = Report {
            status,
            verb: verb.to_string(),
            payload,
        };
        serde_json::to_string_pretty(&r).expect("reports serialize") + "\n"
    } else {
        text
    };
    Outcome {
        code: status.exit_code(),
        stdout,
        stderr,
    }
}

/// True if the arguments ask for an algebra on standard input.
pub fn wants_stdin<S: AsRef<str>>(argv: &[S]) -> bool {
    argv.windows(2)
        .any(|w| w[0].as_ref() == "--algebra" && w[1].as_ref() == "-")
        || argv.iter().any(|a| a.as_ref() == "--algebra=-")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Outcome {
        run(args, None)
    }

    fn report(args: &[&str]) -> (i32, Report) {
        let o = call(args);
        let r: Report =
            serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout));
        (o.code, r)
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            call(&["bound", "--builtin", "zn_ring:6", "--m", "3"]).code,
            0
        );
        assert_eq!(
            call(&["bound", "--builtin", "zn_ring:6", "--m", "1"]).code,
            1
        );
        assert_eq!(call(&["bound", "--builtin", "nope:1", "--m", "1"]).code, 2);
        assert_eq!(call(&["frobnicate"]).code, 2);
        assert_eq!(
            call(&["bound", "--builtin", "zn_ring:6", "--m", "1", "--bogus"]).code,
            2
        );
        assert_eq!(call(&["info"]).code, 2);
        assert_eq!(
            call(&["info", "--builtin", "zn_ring:2", "--algebra", "x.json"]).code,
            2
        );
    }

    #[test]
    fn json_reports() {
        let (code, r) = report(&["monoid", "--builtin", "left_zero_semigroup:2", "--json"]);
        assert_eq!(code, 0);
        assert_eq!(r.verb, "monoid");
        assert_eq!(r.payload["size"], 3);
        let (code, r) = report(&["simple", "--builtin", "zn_ring:6", "--json"]);
        assert_eq!((code, r.status), (1, Status::Fail));
        let (code, r) = report(&[
            "quotient",
            "--builtin",
            "zn_ring:6",
            "--pair",
            "0,9",
            "--json",
        ]);
        assert_eq!((code, r.status), (2, Status::Error));
        assert!(r.payload["message"].is_string());
    }

    #[test]
    fn stdin_algebra() {
        let src = crate::io::algebra_to_json(
            &crate::catalog::builtin_algebra("zn_ring", &[3]).unwrap(),
            None,
        );
        let o = run(&["info", "--algebra", "-"], Some(&src));
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(wants_stdin(&["info", "--algebra", "-"]));
        assert!(!wants_stdin(&["info", "--builtin", "-"]));
        let o = run(&["info", "--algebra", "-"], Some("{\"name\": 1}"));
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("line 1"), "{}", o.stderr);
    }

    #[test]
    fn witness_lists_are_capped_in_text() {
        // 72 maps: z -> a z b and z -> a z^-1 b
        let o = call(&["monoid", "--builtin", "sym_group:3"]);
        assert_eq!(o.stdout.lines().count(), 1 + TEXT_LIST_CAP + 1);
        assert!(o.stdout.contains("... 22 more"));
        let o = call(&["monoid", "--builtin", "sym_group:3", "--all"]);
        assert_eq!(o.stdout.lines().count(), 73);
    }
}
