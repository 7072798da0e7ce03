//! Oracles and generators shared by the integration tests. Everything here
//! is written directly from the definitions and avoids the library's own
//! algorithms.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use affbound::catalog::Lcg;
use affbound::cli::{run, Report};
use affbound::{Element, FiniteAlgebra, Partition, SymbolId, Term};

/// A random term of height at most `max_h`. With `proper` exactly one `x`
/// occurs, otherwise none.
pub fn random_term(rng: &mut Lcg, a: &FiniteAlgebra, max_h: usize, proper: bool) -> Term {
    let sig = a.signature();
    let inner: Vec<SymbolId> = sig.ids().filter(|&s| sig.arity(s) >= 1).collect();
    let nullary: Vec<SymbolId> = sig.ids().filter(|&s| sig.arity(s) == 0).collect();
    fn leaf(rng: &mut Lcg, a: &FiniteAlgebra, nullary: &[SymbolId], proper: bool) -> Term {
        if proper {
            Term::Var
        } else if !nullary.is_empty() && rng.below(3) == 0 {
            Term::apply(nullary[rng.below(nullary.len())], vec![])
        } else {
            Term::Const(rng.below(a.carrier()))
        }
    }
    fn go(
        rng: &mut Lcg,
        a: &FiniteAlgebra,
        inner: &[SymbolId],
        nullary: &[SymbolId],
        h: usize,
        proper: bool,
    ) -> Term {
        if h == 0 || inner.is_empty() || rng.below(4) == 0 {
            return leaf(rng, a, nullary, proper);
        }
        let s = inner[rng.below(inner.len())];
        let n = a.signature().arity(s);
        let x_slot = if proper { rng.below(n) } else { usize::MAX };
        let children = (0..n)
            .map(|k| go(rng, a, inner, nullary, h - 1, k == x_slot))
            .collect();
        Term::apply(s, children)
    }
    go(rng, a, &inner, &nullary, max_h, proper)
}

pub fn eval(a: &FiniteAlgebra, t: &Term, z: Element) -> Element {
    match t {
        Term::Var => z,
        Term::Const(c) => *c,
        Term::Apply(s, ch) => {
            let args: Vec<Element> = ch.iter().map(|c| eval(a, c, z)).collect();
            a.apply(*s, &args).unwrap()
        }
    }
}

pub fn image(a: &FiniteAlgebra, t: &Term) -> Vec<Element> {
    (0..a.carrier()).map(|z| eval(a, t, z)).collect()
}

/// Every tuple in `{0..n}^k`, lexicographic.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<Element>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut u = t.clone();
                    u.push(e);
                    u
                })
            })
            .collect();
    }
    out
}

/// Translations by their definition: fix all but one argument.
pub fn naive_translations(a: &FiniteAlgebra) -> HashSet<Vec<Element>> {
    let mut out = HashSet::new();
    for s in a.signature().ids() {
        let n = a.signature().arity(s);
        for slot in 0..n {
            for fixed in tuples(a.carrier(), n - 1) {
                let f: Vec<Element> = (0..a.carrier())
                    .map(|z| {
                        let mut args = fixed.clone();
                        args.insert(slot, z);
                        a.apply(s, &args).unwrap()
                    })
                    .collect();
                out.insert(f);
            }
        }
    }
    out
}

/// Identity plus the closure of the translations under composition, by
/// composing every pair until nothing new appears.
pub fn naive_monoid(a: &FiniteAlgebra) -> HashSet<Vec<Element>> {
    let mut set = naive_translations(a);
    set.insert((0..a.carrier()).collect());
    loop {
        let items: Vec<Vec<Element>> = set.iter().cloned().collect();
        let mut grew = false;
        for f in &items {
            for g in &items {
                let fg: Vec<Element> = g.iter().map(|&z| f[z]).collect();
                grew |= set.insert(fg);
            }
        }
        if !grew {
            return set;
        }
    }
}

/// Every partition of `{0..n}` via restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    // `blocks` labels are in use; label `blocks` opens a new block
    fn go(i: usize, blocks: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == rgs.len() {
            out.push(Partition::from_labels(rgs));
            return;
        }
        for l in 0..=blocks {
            rgs[i] = l;
            go(i + 1, blocks.max(l + 1), rgs, out);
        }
    }
    if n == 0 {
        return vec![Partition::discrete(0)];
    }
    go(1, 1, &mut rgs, &mut out);
    out
}

/// Compatibility with every operation over all componentwise related pairs
/// of argument tuples.
pub fn compatible(a: &FiniteAlgebra, p: &Partition) -> bool {
    a.signature().ids().all(|s| {
        let n = a.signature().arity(s);
        let ts = tuples(a.carrier(), n);
        ts.iter().all(|t| {
            ts.iter().all(|u| {
                !t.iter().zip(u).all(|(&x, &y)| p.related(x, y))
                    || p.related(a.apply(s, t).unwrap(), a.apply(s, u).unwrap())
            })
        })
    })
}

pub fn congruences(a: &FiniteAlgebra) -> BTreeSet<Partition> {
    all_partitions(a.carrier())
        .into_iter()
        .filter(|p| compatible(a, p))
        .collect()
}

/// Least congruence relating `x` and `y`: the finest among all that do.
pub fn principal_oracle(a: &FiniteAlgebra, x: Element, y: Element) -> Partition {
    let cands: Vec<Partition> = congruences(a)
        .into_iter()
        .filter(|c| c.related(x, y))
        .collect();
    cands
        .iter()
        .find(|c| cands.iter().all(|d| c.refines(d)))
        .cloned()
        .expect("congruences relating a pair have a least element")
}

/// Largest congruence inside `p`: the coarsest among those refining it.
pub fn largest_below_oracle(a: &FiniteAlgebra, p: &Partition) -> Partition {
    let cands: Vec<Partition> = congruences(a)
        .into_iter()
        .filter(|c| c.refines(p))
        .collect();
    cands
        .iter()
        .find(|c| cands.iter().all(|d| d.refines(c)))
        .cloned()
        .expect("congruences below a partition have a greatest element")
}

/// Random algebra with carrier in `1..=max_carrier`, 1 to `max_symbols`
/// symbols and arities in `0..=max_arity`, drawn from `seed`.
pub fn random_small_algebra(
    seed: u64,
    max_carrier: usize,
    max_symbols: usize,
    max_arity: usize,
) -> FiniteAlgebra {
    let mut rng = Lcg::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let carrier = 1 + rng.below(max_carrier);
    let k = 1 + rng.below(max_symbols);
    let arities: Vec<usize> = (0..k).map(|_| rng.below(max_arity + 1)).collect();
    affbound::random_algebra(seed, carrier, &arities).unwrap()
}

/// Every CLI verb on catalog algebras, with the expected exit code.
pub const CLI_CASES: &[(&str, i32, &[&str])] = &[
    ("info_z6", 0, &["info", "--builtin", "zn_ring:6"]),
    ("info_z5_group", 0, &["info", "--builtin", "zn_group:5"]),
    ("info_s3", 0, &["info", "--builtin", "sym_group:3"]),
    ("info_b2", 0, &["info", "--builtin", "boolean_algebra:2"]),
    (
        "info_semimodule",
        0,
        &["info", "--builtin", "boolean_semimodule:2"],
    ),
    (
        "info_semiring",
        0,
        &["info", "--builtin", "boolean_semiring"],
    ),
    ("info_magma", 0, &["info", "--builtin", "random_magma:4,7"]),
    (
        "monoid_lz2",
        0,
        &["monoid", "--builtin", "left_zero_semigroup:2"],
    ),
    (
        "monoid_div6",
        0,
        &["monoid", "--builtin", "divisor_lattice:6"],
    ),
    (
        "congruences_z6",
        0,
        &["congruences", "--builtin", "zn_ring:6"],
    ),
    (
        "congruences_div12",
        0,
        &["congruences", "--builtin", "divisor_lattice:12"],
    ),
    (
        "quotient_z6",
        0,
        &["quotient", "--builtin", "zn_ring:6", "--pair", "0,3"],
    ),
    (
        "quotient_out_of_range",
        2,
        &["quotient", "--builtin", "zn_ring:6", "--pair", "0,9"],
    ),
    ("simple_z5", 0, &["simple", "--builtin", "zn_ring:5"]),
    ("simple_z6", 1, &["simple", "--builtin", "zn_ring:6"]),
    (
        "simple_b1",
        0,
        &["simple", "--builtin", "boolean_algebra:1"],
    ),
    (
        "bound_z6_m3",
        0,
        &["bound", "--builtin", "zn_ring:6", "--m", "3"],
    ),
    (
        "bound_z6_m1",
        1,
        &["bound", "--builtin", "zn_ring:6", "--m", "1"],
    ),
    (
        "minimal_z6",
        0,
        &["minimal-bound", "--builtin", "zn_ring:6"],
    ),
    (
        "minimal_s3",
        0,
        &["minimal-bound", "--builtin", "sym_group:3"],
    ),
    (
        "choe_div6",
        0,
        &[
            "choe",
            "--builtin",
            "divisor_lattice:6",
            "--order",
            "join,meet",
        ],
    ),
    (
        "choe_z6",
        0,
        &["choe", "--builtin", "zn_ring:6", "--order", "+,*"],
    ),
    (
        "choe_z6_bad",
        1,
        &["choe", "--builtin", "zn_ring:6", "--order", "*,+"],
    ),
    (
        "class_semigroup",
        0,
        &[
            "verify-class",
            "--builtin",
            "left_zero_semigroup:3",
            "--class",
            "semigroup",
        ],
    ),
    (
        "class_group",
        0,
        &[
            "verify-class",
            "--builtin",
            "zn_group:4",
            "--class",
            "group",
        ],
    ),
    (
        "class_ring",
        0,
        &["verify-class", "--builtin", "zn_ring:6", "--class", "ring"],
    ),
    (
        "class_semiring",
        0,
        &[
            "verify-class",
            "--builtin",
            "boolean_semiring",
            "--class",
            "semiring",
        ],
    ),
    (
        "class_boolean",
        0,
        &[
            "verify-class",
            "--builtin",
            "boolean_algebra:2",
            "--class",
            "boolean",
        ],
    ),
    (
        "class_semimodule",
        0,
        &[
            "verify-class",
            "--builtin",
            "boolean_semimodule:2",
            "--class",
            "semimodule",
        ],
    ),
    (
        "class_wrong",
        1,
        &["verify-class", "--builtin", "zn_ring:4", "--class", "group"],
    ),
    (
        "class_unknown",
        2,
        &["verify-class", "--builtin", "zn_ring:4", "--class", "field"],
    ),
    (
        "oracle_z3",
        0,
        &[
            "oracle-compare",
            "--builtin",
            "zn_ring:3",
            "--max-height",
            "2",
            "--max-arity",
            "2",
        ],
    ),
    (
        "oracle_z6_short",
        1,
        &[
            "oracle-compare",
            "--builtin",
            "zn_ring:6",
            "--max-height",
            "1",
            "--max-arity",
            "2",
        ],
    ),
    (
        "free_magma",
        0,
        &["free-magma", "--m", "3", "--seed", "7", "--samples", "20"],
    ),
    ("unknown_builtin", 2, &["info", "--builtin", "nope:1"]),
    ("no_source", 2, &["info"]),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("AFFBOUND_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path)
        .map_err(|_| format!("missing {}; rerun with AFFBOUND_BLESS=1", path.display()))?;
    if actual != expected {
        return Err(format!("{name} differs from its golden file:\n{actual}"));
    }
    Ok(())
}

/// Runs every case in text and JSON form against the golden files, checks
/// exit codes and that the JSON output is one valid report.
pub fn check_cli_goldens() -> Result<usize, String> {
    for (name, code, argv) in CLI_CASES {
        let text = run(argv, None);
        if text.code != *code {
            return Err(format!("{name}: exit {} instead of {code}", text.code));
        }
        check_golden(
            &format!("{name}.txt"),
            &format!("exit {}\n{}{}", text.code, text.stdout, text.stderr),
        )?;
        let mut with_json = argv.to_vec();
        with_json.push("--json");
        let json = run(&with_json, None);
        if json.code != *code {
            return Err(format!(
                "{name} --json: exit {} instead of {code}",
                json.code
            ));
        }
        let report: Report = serde_json::from_str(&json.stdout)
            .map_err(|e| format!("{name}: invalid JSON report: {e}"))?;
        if report.status.exit_code() != json.code {
            return Err(format!(
                "{name}: status {:?} with exit {}",
                report.status, json.code
            ));
        }
        check_golden(&format!("{name}.json"), &json.stdout)?;
    }
    Ok(CLI_CASES.len())
}
