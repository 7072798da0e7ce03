//! Term shapes with the symbols and constants stripped out.
//!
//! A [`Skeleton`] is a tree whose inner nodes carry only their arity and
//! whose leaves are `x`, `*` (a carrier constant) or `0` (a nullary
//! symbol). A [`Params`] tree of the same shape supplies what was stripped:
//! a symbol at each node, an element at each `*`, a nullary symbol at each
//! `0`. The pair is in bijection with the original term.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{Element, FiniteAlgebra, Signature, SymbolId, MAX_ARITY};
use crate::error::{Error, Result};
use crate::term::Term;

/// Default cap on the number of skeletons a single enumeration may produce.
pub const DEFAULT_SKELETON_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Skeleton {
    Var,
    Star,
    Zero,
    /// A node whose arity is the number of children (always >= 1).
    Node(Vec<Skeleton>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Params {
    Var,
    Element(Element),
    Nullary(SymbolId),
    Node(SymbolId, Vec<Params>),
}

impl Skeleton {
    pub fn height(&self) -> usize {
        match self {
            Skeleton::Node(ch) => 1 + ch.iter().map(Skeleton::height).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Skeleton::Node(ch) => ch.iter().map(Skeleton::arity).fold(ch.len(), usize::max),
            _ => 0,
        }
    }

    pub fn x_count(&self) -> usize {
        match self {
            Skeleton::Var => 1,
            Skeleton::Node(ch) => ch.iter().map(Skeleton::x_count).sum(),
            _ => 0,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.x_count() == 1
    }

    /// Deterministic enumeration order: height, then arity, then the
    /// serialized form.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.height(), self.arity())
            .cmp(&(other.height(), other.arity()))
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skeleton::Var => f.write_str("x"),
            Skeleton::Star => f.write_str("*"),
            Skeleton::Zero => f.write_str("0"),
            Skeleton::Node(ch) => {
                write!(f, "({}", ch.len())?;
                for c in ch {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Skeleton {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn perr(offset: usize, message: &str) -> Error {
            Error::Parse {
                offset,
                message: message.to_string(),
            }
        }
        fn skip_ws(b: &[u8], i: &mut usize) {
            while *i < b.len() && b[*i].is_ascii_whitespace() {
                *i += 1;
            }
        }
        fn node(b: &[u8], i: &mut usize) -> Result<Skeleton> {
            skip_ws(b, i);
            let start = *i;
            match b.get(*i) {
                Some(b'x') => {
                    *i += 1;
                    Ok(Skeleton::Var)
                }
                Some(b'*') => {
                    *i += 1;
                    Ok(Skeleton::Star)
                }
                Some(b'0') => {
                    *i += 1;
                    Ok(Skeleton::Zero)
                }
                Some(b'(') => {
                    *i += 1;
                    skip_ws(b, i);
                    let digits_at = *i;
                    while *i < b.len() && b[*i].is_ascii_digit() {
                        *i += 1;
                    }
                    let n: usize = std::str::from_utf8(&b[digits_at..*i])
                        .unwrap()
                        .parse()
                        .map_err(|_| perr(digits_at, "expected a node arity"))?;
                    if n == 0 {
                        return Err(perr(digits_at, "node arity must be positive"));
                    }
                    let mut ch = Vec::with_capacity(n);
                    for _ in 0..n {
                        ch.push(node(b, i)?);
                    }
                    skip_ws(b, i);
                    if b.get(*i) != Some(&b')') {
                        return Err(perr(*i, "expected `)`"));
                    }
                    *i += 1;
                    Ok(Skeleton::Node(ch))
                }
                _ => Err(perr(start, "expected `x`, `*`, `0` or `(`")),
            }
        }
        let b = s.as_bytes();
        let mut i = 0;
        let sk = node(b, &mut i)?;
        skip_ws(b, &mut i);
        if i != b.len() {
            return Err(perr(i, "trailing input"));
        }
        Ok(sk)
    }
}

/// Splits a term into its skeleton and parameters.
pub fn skeletonize(t: &Term) -> (Skeleton, Params) {
    match t {
        Term::Var => (Skeleton::Var, Params::Var),
        Term::Const(c) => (Skeleton::Star, Params::Element(*c)),
        Term::Apply(s, ch) if ch.is_empty() => (Skeleton::Zero, Params::Nullary(*s)),
        Term::Apply(s, ch) => {
            let (sks, ps): (Vec<_>, Vec<_>) = ch.iter().map(skeletonize).unzip();
            (Skeleton::Node(sks), Params::Node(*s, ps))
        }
    }
}

/// Reassembles a term; fails unless `p` fits `sk` and the symbols'
/// arities match the nodes they sit on.
pub fn unskeletonize(sk: &Skeleton, p: &Params, sig: &Signature) -> Result<Term> {
    let known = |s: &SymbolId| -> Result<usize> {
        if s.0 < sig.len() {
            Ok(sig.arity(*s))
        } else {
            Err(Error::ShapeMismatch(format!(
                "unknown symbol index {}",
                s.0
            )))
        }
    };
    match (sk, p) {
        (Skeleton::Var, Params::Var) => Ok(Term::Var),
        (Skeleton::Star, Params::Element(e)) => Ok(Term::Const(*e)),
        (Skeleton::Zero, Params::Nullary(s)) => match known(s)? {
            0 => Ok(Term::Apply(*s, Vec::new())),
            n => Err(Error::ShapeMismatch(format!(
                "`{}` has arity {n} but sits on a 0-leaf",
                sig.name(*s)
            ))),
        },
        (Skeleton::Node(sks), Params::Node(s, ps)) => {
            let arity = known(s)?;
            if arity != sks.len() || ps.len() != sks.len() {
                return Err(Error::ShapeMismatch(format!(
                    "node of arity {} holds `{}`/{arity} with {} parameter children",
                    sks.len(),
                    sig.name(*s),
                    ps.len()
                )));
            }
            let ch = sks
                .iter()
                .zip(ps)
                .map(|(k, q)| unskeletonize(k, q, sig))
                .collect::<Result<_>>()?;
            Ok(Term::Apply(*s, ch))
        }
        _ => Err(Error::ShapeMismatch(format!(
            "parameters do not fit `{sk}`"
        ))),
    }
}

/// Which closed subtrees may appear beside the path to `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedSubtrees {
    /// Every closed skeleton of admissible height.
    All,
    /// Only the `*` leaf. Over a nonempty carrier `*` already realizes every
    /// value any closed subtree can take, so this yields the same set of
    /// induced maps with far fewer skeletons.
    StarOnly,
}

/// Parameters of a linear-skeleton enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonShape {
    pub max_height: usize,
    /// Node arities that may occur, each in `1..=MAX_ARITY`.
    pub arities: Vec<usize>,
    pub zero_leaves: bool,
    pub closed: ClosedSubtrees,
}

impl SkeletonShape {
    pub fn new(max_height: usize, max_arity: usize) -> Self {
        Self {
            max_height,
            arities: (1..=max_arity).collect(),
            zero_leaves: true,
            closed: ClosedSubtrees::All,
        }
    }

    /// The shapes whose parameter sets over `a` are nonempty: node arities
    /// present in the signature (capped at `max_arity`), `0` leaves only when
    /// nullary symbols exist.
    pub fn for_algebra(
        a: &FiniteAlgebra,
        max_height: usize,
        max_arity: usize,
        closed: ClosedSubtrees,
    ) -> Self {
        let sig = a.signature();
        let mut arities: Vec<usize> = sig
            .iter()
            .map(|(_, s)| s.arity)
            .filter(|&n| n >= 1 && n <= max_arity)
            .collect();
        arities.sort_unstable();
        arities.dedup();
        Self {
            max_height,
            arities,
            zero_leaves: !sig.of_arity(0).is_empty(),
            closed,
        }
    }

    fn closed_leaves(&self) -> u128 {
        match self.closed {
            ClosedSubtrees::StarOnly => 1,
            ClosedSubtrees::All => 1 + self.zero_leaves as u128,
        }
    }

    /// Number of linear skeletons of height `<= max_height`, saturating.
    pub fn count(&self) -> u128 {
        let mut closed = self.closed_leaves();
        let mut linear: u128 = 1;
        for _ in 0..self.max_height {
            let mut next_linear: u128 = 1;
            let mut next_closed = self.closed_leaves();
            for &n in &self.arities {
                let pow = closed.saturating_pow(n as u32 - 1);
                next_linear = next_linear
                    .saturating_add((n as u128).saturating_mul(linear).saturating_mul(pow));
                if self.closed == ClosedSubtrees::All {
                    next_closed = next_closed.saturating_add(pow.saturating_mul(closed));
                }
            }
            linear = next_linear;
            closed = next_closed;
        }
        linear
    }
}

fn product<T: Clone>(pools: &[&[T]]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for pool in pools {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |item| {
                    let mut v = prefix.clone();
                    v.push(item.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// All linear skeletons of the given shape, each exactly once, in canonical
/// order.
pub fn enumerate_linear(shape: &SkeletonShape, budget: u128) -> Result<Vec<Skeleton>> {
    if let Some(&bad) = shape.arities.iter().find(|&&n| n == 0 || n > MAX_ARITY) {
        return Err(Error::LimitExceeded(format!(
            "node arity {bad} outside 1..={MAX_ARITY}"
        )));
    }
    let needed = shape.count();
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "skeleton enumeration",
            needed,
            budget,
        });
    }
    let mut leaves = vec![Skeleton::Star];
    if shape.zero_leaves && shape.closed == ClosedSubtrees::All {
        leaves.push(Skeleton::Zero);
    }
    let mut closed = leaves.clone();
    let mut linear = vec![Skeleton::Var];
    for _ in 0..shape.max_height {
        let mut next_linear = vec![Skeleton::Var];
        let mut next_closed = leaves.clone();
        for &n in &shape.arities {
            let others = product(&vec![closed.as_slice(); n - 1]);
            for pos in 0..n {
                for child in &linear {
                    for rest in &others {
                        let mut ch = rest.clone();
                        ch.insert(pos, child.clone());
                        next_linear.push(Skeleton::Node(ch));
                    }
                }
            }
            if shape.closed == ClosedSubtrees::All {
                for ch in product(&vec![closed.as_slice(); n]) {
                    next_closed.push(Skeleton::Node(ch));
                }
            }
        }
        linear = next_linear;
        closed = next_closed;
    }
    let mut keyed: Vec<_> = linear
        .into_iter()
        .map(|s| ((s.height(), s.arity(), s.to_string()), s))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, s)| s).collect())
}

/// The linear skeletons of height `<= max_height` and arity
/// `<= max_arity`, over both kinds of closed leaf.
pub fn enumerate_skeletons(max_height: usize, max_arity: usize) -> Result<Vec<Skeleton>> {
    if max_arity > MAX_ARITY {
        return Err(Error::LimitExceeded(format!(
            "arity bound {max_arity} exceeds {MAX_ARITY}"
        )));
    }
    enumerate_linear(
        &SkeletonShape::new(max_height, max_arity),
        DEFAULT_SKELETON_BUDGET,
    )
}

/// Every parameter tuple for `sk` over `a`, in catalog order: symbols in
/// signature order at nodes and `0` leaves, elements ascending at `*`.
pub fn parameter_fillings(a: &FiniteAlgebra, sk: &Skeleton, budget: u128) -> Result<Vec<Params>> {
    let needed = parameter_count(a, sk);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "parameter enumeration",
            needed,
            budget,
        });
    }
    Ok(fillings(a, sk))
}

/// `|S(sk)|`, saturating.
pub fn parameter_count(a: &FiniteAlgebra, sk: &Skeleton) -> u128 {
    let sig = a.signature();
    match sk {
        Skeleton::Var => 1,
        Skeleton::Star => a.carrier() as u128,
        Skeleton::Zero => sig.of_arity(0).len() as u128,
        Skeleton::Node(ch) => ch
            .iter()
            .fold(sig.of_arity(ch.len()).len() as u128, |acc, c| {
                acc.saturating_mul(parameter_count(a, c))
            }),
    }
}

fn fillings(a: &FiniteAlgebra, sk: &Skeleton) -> Vec<Params> {
    let sig = a.signature();
    match sk {
        Skeleton::Var => vec![Params::Var],
        Skeleton::Star => a.elements().map(Params::Element).collect(),
        Skeleton::Zero => sig.of_arity(0).into_iter().map(Params::Nullary).collect(),
        Skeleton::Node(ch) => {
            let per_child: Vec<Vec<Params>> = ch.iter().map(|c| fillings(a, c)).collect();
            let pools: Vec<&[Params]> = per_child.iter().map(Vec::as_slice).collect();
            let combos = product(&pools);
            sig.of_arity(ch.len())
                .into_iter()
                .flat_map(|s| combos.iter().map(move |c| Params::Node(s, c.clone())))
                .collect()
        }
    }
}
