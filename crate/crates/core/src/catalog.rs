//! Builtin algebras and the deterministic random generator used for fixtures.

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};

/// Names accepted by [`builtin_algebra`].
pub const BUILTIN_KINDS: &[&str] = &[
    "zn_ring",
    "zn_group",
    "sym_group",
    "left_zero_semigroup",
    "divisor_lattice",
    "boolean_algebra",
    "boolean_semimodule",
    "boolean_semiring",
    "random_magma",
];

/// 64-bit linear congruential generator with Knuth's MMIX constants:
/// `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
/// and `below(n)` returns `(state >> 33) % n` after advancing. The initial
/// state is the seed itself. Other implementations reproduce fixtures by
/// following exactly this recipe.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() >> 33) % n as u64) as usize
    }
}

fn invalid(kind: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParams {
        kind: kind.to_string(),
        reason: reason.into(),
    }
}

fn one_param(kind: &str, params: &[u64], lo: u64, hi: u64) -> Result<usize> {
    match params {
        [n] if (lo..=hi).contains(n) => Ok(*n as usize),
        [n] => Err(invalid(kind, format!("parameter {n} outside {lo}..={hi}"))),
        _ => Err(invalid(
            kind,
            format!("expected one parameter, got {}", params.len()),
        )),
    }
}

/// Instantiates a catalog algebra.
///
/// | kind | params | symbols |
/// |---|---|---|
/// | `zn_ring` | `n` | `+/2 */2` modulo `n` |
/// | `zn_group` | `n` | `+/2 zero/0 neg/1` |
/// | `sym_group` | `n <= 4` | `*/2 e/0 inv/1` on permutations in lexicographic order, `(p*q)(i) = p(q(i))` |
/// | `left_zero_semigroup` | `n` | `*/2` with `x*y = x` |
/// | `divisor_lattice` | `n` | `join/2 meet/2` (lcm, gcd) on the divisors of `n`, ascending |
/// | `boolean_algebra` | `k <= 4` | `join/2 meet/2 neg/1 bot/0 top/0` on subsets of a `k`-set (bitmasks) |
/// | `boolean_semimodule` | `k <= 4` | `+/2` (union) and `T0/1 T1/1`, the Boolean semiring acting on subsets |
/// | `boolean_semiring` | none | `+/2 */2` as or, and on `{0, 1}` |
/// | `random_magma` | `n, seed` | one `*/2` drawn from [`Lcg`] |
pub fn builtin_algebra(kind: &str, params: &[u64]) -> Result<FiniteAlgebra> {
    match kind {
        "zn_ring" => {
            let n = one_param(kind, params, 1, 64)?;
            FiniteAlgebra::from_fn(
                format!("Z{n} ring"),
                n,
                &[("+", 2), ("*", 2)],
                |op, a| match op {
                    0 => (a[0] + a[1]) % n,
                    _ => (a[0] * a[1]) % n,
                },
            )
        }
        "zn_group" => {
            let n = one_param(kind, params, 1, 64)?;
            FiniteAlgebra::from_fn(
                format!("Z{n} group"),
                n,
                &[("+", 2), ("zero", 0), ("neg", 1)],
                |op, a| match op {
                    0 => (a[0] + a[1]) % n,
                    1 => 0,
                    _ => (n - a[0]) % n,
                },
            )
        }
        "sym_group" => {
            let n = one_param(kind, params, 1, 4)?;
            let perms = permutations(n);
            let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
            let identity: Vec<usize> = (0..n).collect();
            FiniteAlgebra::from_fn(
                format!("S{n}"),
                perms.len(),
                &[("*", 2), ("e", 0), ("inv", 1)],
                |op, a| match op {
                    0 => {
                        let (p, q) = (&perms[a[0]], &perms[a[1]]);
                        index_of(&q.iter().map(|&i| p[i]).collect::<Vec<_>>())
                    }
                    1 => index_of(&identity),
                    _ => {
                        let p = &perms[a[0]];
                        let mut inv = vec![0; n];
                        for (i, &pi) in p.iter().enumerate() {
                            inv[pi] = i;
                        }
                        index_of(&inv)
                    }
                },
            )
        }
        "left_zero_semigroup" => {
            let n = one_param(kind, params, 1, 64)?;
            FiniteAlgebra::from_fn(format!("LZ{n}"), n, &[("*", 2)], |_, a| a[0])
        }
        "divisor_lattice" => {
            let n = one_param(kind, params, 1, 100_000)?;
            let divisors: Vec<u64> = (1..=n as u64).filter(|d| (n as u64).is_multiple_of(*d)).collect();
            if divisors.len() > 64 {
                return Err(invalid(kind, "more than 64 divisors"));
            }
            let pos = |v: u64| divisors.iter().position(|&d| d == v).unwrap();
            FiniteAlgebra::from_fn(
                format!("Div({n})"),
                divisors.len(),
                &[("join", 2), ("meet", 2)],
                |op, a| {
                    let (x, y) = (divisors[a[0]], divisors[a[1]]);
                    let g = gcd(x, y);
                    match op {
                        0 => pos(x / g * y),
                        _ => pos(g),
                    }
                },
            )
        }
        "boolean_algebra" => {
            let k = one_param(kind, params, 0, 4)?;
            let n = 1usize << k;
            let top = n - 1;
            FiniteAlgebra::from_fn(
                format!("B{k}"),
                n,
                &[("join", 2), ("meet", 2), ("neg", 1), ("bot", 0), ("top", 0)],
                |op, a| match op {
                    0 => a[0] | a[1],
                    1 => a[0] & a[1],
                    2 => top & !a[0],
                    3 => 0,
                    _ => top,
                },
            )
        }
        "boolean_semiring" => {
            if !params.is_empty() {
                return Err(invalid(kind, "takes no parameters".to_string()));
            }
            FiniteAlgebra::from_fn(
                "Boolean semiring",
                2,
                &[("+", 2), ("*", 2)],
                |op, a| match op {
                    0 => a[0] | a[1],
                    _ => a[0] & a[1],
                },
            )
        }
        "boolean_semimodule" => {
            let k = one_param(kind, params, 1, 4)?;
            let n = 1usize << k;
            FiniteAlgebra::from_fn(
                format!("Bool^{k} semimodule"),
                n,
                &[("+", 2), ("T0", 1), ("T1", 1)],
                |op, a| match op {
                    0 => a[0] | a[1],
                    1 => 0,
                    _ => a[0],
                },
            )
        }
        "random_magma" => match params {
            [n, seed] if (1..=8).contains(n) => {
                let a = random_algebra(*seed, *n as usize, &[2])?;
                let table = a.table(crate::algebra::SymbolId(0)).to_vec();
                FiniteAlgebra::from_fn(
                    format!("magma(n={n}, seed={seed})"),
                    *n as usize,
                    &[("*", 2)],
                    |_, t| table[crate::algebra::table_index(*n as usize, t)],
                )
            }
            [_, _] => Err(invalid(kind, "carrier must be in 1..=8")),
            _ => Err(invalid(kind, "expected carrier size and seed")),
        },
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// Parses `name:p1,p2,...` and builds the algebra.
pub fn parse_builtin_spec(spec: &str) -> Result<FiniteAlgebra> {
    let (kind, params) = match spec.split_once(':') {
        Some((k, p)) => (k, p),
        None => (spec, ""),
    };
    let params = params
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| invalid(kind, format!("`{p}` is not a natural number")))
        })
        .collect::<Result<Vec<_>>>()?;
    builtin_algebra(kind, &params)
}

/// A random algebra with symbols `o0, o1, ...` of the given arities; tables
/// are filled symbol by symbol, tuples in lexicographic order, each entry
/// `Lcg::below(carrier)`.
pub fn random_algebra(seed: u64, carrier: usize, arities: &[usize]) -> Result<FiniteAlgebra> {
    let names: Vec<String> = (0..arities.len()).map(|i| format!("o{i}")).collect();
    let symbols: Vec<(&str, usize)> = names
        .iter()
        .map(String::as_str)
        .zip(arities.iter().copied())
        .collect();
    let mut rng = Lcg::new(seed);
    let mut tables: Vec<Vec<Element>> = Vec::new();
    for &arity in arities {
        let len = crate::algebra::table_len(carrier, arity);
        tables.push((0..len).map(|_| rng.below(carrier)).collect());
    }
    FiniteAlgebra::from_fn(
        format!("random(seed={seed})"),
        carrier,
        &symbols,
        |op, t| tables[op][crate::algebra::table_index(carrier, t)],
    )
}

/// The unary algebra on `{0..n-1}` with `s(i) = i+1` for `i < n-1` and
/// `s(n-1) = m`: a tail of length `m` running into a cycle of length `n-m`.
pub fn successor_algebra(n: usize, m: usize) -> Result<FiniteAlgebra> {
    if n == 0 || m >= n {
        return Err(invalid(
            "successor",
            format!("need 0 <= m < n, got n={n}, m={m}"),
        ));
    }
    FiniteAlgebra::from_fn(format!("succ({n},{m})"), n, &[("s", 1)], |_, t| {
        if t[0] + 1 < n {
            t[0] + 1
        } else {
            m
        }
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}
