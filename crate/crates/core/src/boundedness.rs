//! Affine-boundedness decisions with certificates, minimal bounds, the Choe
//! bound formula and the commuting-decomposition check.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{ChoeOrder, Element, FiniteAlgebra, SymbolId};
use crate::error::{Error, Result};
use crate::laws::{check_choe_distributive, cyclic_monoid_of};
use crate::skeleton::{ClosedSubtrees, DEFAULT_SKELETON_BUDGET};
use crate::term::{format_term, parse_term};
use crate::translation::{
    brute_force_with, induced_map, translation_monoid, BruteForceOptions, TranslationMonoid,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub map: Vec<Element>,
    pub term: String,
}

/// One proper witness term of height and arity `<= m` per element of the
/// translation monoid, listed in the monoid's order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub m: usize,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Failure {
    pub m: usize,
    /// Monoid elements no term within the bounds induces, in monoid order.
    pub missing: Vec<Vec<Element>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum BoundCheck {
    Bounded(Certificate),
    NotBounded(Failure),
}

impl BoundCheck {
    pub fn is_bounded(&self) -> bool {
        matches!(self, BoundCheck::Bounded(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            BoundCheck::Bounded(c) => Some(c),
            BoundCheck::NotBounded(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match self {
            BoundCheck::Bounded(_) => None,
            BoundCheck::NotBounded(f) => Some(f),
        }
    }
}

impl Certificate {
    /// Re-checks every witness from its text: it parses, contains `x`
    /// exactly once, respects both bounds and induces its map; and the maps
    /// are exactly the translation monoid.
    pub fn verify(&self, a: &FiniteAlgebra) -> Result<()> {
        let monoid = translation_monoid(a)?;
        self.verify_against(a, &monoid)
    }

    pub fn verify_against(&self, a: &FiniteAlgebra, monoid: &TranslationMonoid) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCertificate(msg));
        let mut seen = HashSet::new();
        for w in &self.witnesses {
            let t = parse_term(&w.term, a.signature(), a.carrier())?;
            if t.x_count() != 1 {
                return bad(format!("`{}` is not proper", w.term));
            }
            if t.height() > self.m || t.arity() > self.m {
                return bad(format!("`{}` exceeds the bound {}", w.term, self.m));
            }
            if induced_map(a, &t)?.image() != w.map.as_slice() {
                return bad(format!("`{}` does not induce {:?}", w.term, w.map));
            }
            if !monoid.contains(&w.map) {
                return bad(format!("{:?} is not a translation-monoid element", w.map));
            }
            if !seen.insert(w.map.clone()) {
                return bad(format!("{:?} is listed twice", w.map));
            }
        }
        if seen.len() != monoid.len() {
            return bad(format!(
                "{} of {} monoid elements covered",
                seen.len(),
                monoid.len()
            ));
        }
        Ok(())
    }
}

/// How [`check_bounded_by_with`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// Enumerate proper terms with height and arity `<= m`.
    Full,
    /// Bound only the height. Requires every symbol arity `<= m`; then the
    /// least height of a proper term inducing `f` is the breadth-first depth
    /// of `f` in the translation monoid, so no enumeration is needed.
    HeightOnly,
}

pub fn check_bounded_by(a: &FiniteAlgebra, m: usize) -> Result<BoundCheck> {
    let monoid = translation_monoid(a)?;
    check_bounded_in(a, &monoid, m, BoundMode::Full, DEFAULT_SKELETON_BUDGET)
}

pub fn check_bounded_by_with(
    a: &FiniteAlgebra,
    m: usize,
    mode: BoundMode,
    budget: u128,
) -> Result<BoundCheck> {
    let monoid = translation_monoid(a)?;
    check_bounded_in(a, &monoid, m, mode, budget)
}

/// [`check_bounded_by`] against a precomputed monoid.
pub fn check_bounded_in(
    a: &FiniteAlgebra,
    monoid: &TranslationMonoid,
    m: usize,
    mode: BoundMode,
    budget: u128,
) -> Result<BoundCheck> {
    let sig = a.signature();
    match mode {
        BoundMode::Full => {
            let opts = BruteForceOptions::new(m, m.min(sig.max_arity()))
                .closed(ClosedSubtrees::StarOnly)
                .skeleton_budget(budget);
            let found = brute_force_with(a, &opts)?;
            let mut witnesses = Vec::with_capacity(monoid.len());
            let mut missing = Vec::new();
            let by_image: std::collections::HashMap<&[Element], usize> = found
                .maps
                .iter()
                .enumerate()
                .map(|(i, f)| (f.image(), i))
                .collect();
            for e in monoid.elements() {
                match by_image.get(e.image()) {
                    Some(&i) => witnesses.push(Witness {
                        map: e.image().to_vec(),
                        term: format_term(found.maps[i].provenance().expect("witness"), sig),
                    }),
                    None => missing.push(e.image().to_vec()),
                }
            }
            debug_assert!(found.maps.iter().all(|f| monoid.contains(f.image())));
            Ok(finish(m, witnesses, missing))
        }
        BoundMode::HeightOnly => {
            if sig.max_arity() > m {
                return Err(Error::InvalidParams {
                    kind: "height-only bound".into(),
                    reason: format!("symbol arity {} exceeds m = {m}", sig.max_arity()),
                });
            }
            let mut witnesses = Vec::new();
            let mut missing = Vec::new();
            for (i, e) in monoid.elements().iter().enumerate() {
                if monoid.depth(i) <= m {
                    witnesses.push(Witness {
                        map: e.image().to_vec(),
                        term: format_term(monoid.witness(i), sig),
                    });
                } else {
                    missing.push(e.image().to_vec());
                }
            }
            Ok(finish(m, witnesses, missing))
        }
    }
}

fn finish(m: usize, witnesses: Vec<Witness>, missing: Vec<Vec<Element>>) -> BoundCheck {
    if missing.is_empty() {
        BoundCheck::Bounded(Certificate { m, witnesses })
    } else {
        BoundCheck::NotBounded(Failure { m, missing })
    }
}

/// Least `m` with a certificate, searching upward from 0. At
/// `max(max depth, max arity)` the breadth-first witnesses already qualify,
/// so the search always ends there.
pub fn minimal_bound(a: &FiniteAlgebra) -> Result<(usize, Certificate)> {
    minimal_bound_with(a, DEFAULT_SKELETON_BUDGET)
}

pub fn minimal_bound_with(a: &FiniteAlgebra, budget: u128) -> Result<(usize, Certificate)> {
    let monoid = translation_monoid(a)?;
    let ceiling = monoid.max_depth().max(a.signature().max_arity());
    for m in 0..=ceiling {
        if let BoundCheck::Bounded(c) = check_bounded_in(a, &monoid, m, BoundMode::Full, budget)? {
            return Ok((m, c));
        }
    }
    unreachable!("breadth-first witnesses satisfy the bound at the ceiling")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnaryTerm {
    pub symbol: String,
    pub monoid_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChoeBound {
    pub bound: usize,
    /// Number of symbols of arity `>= 2`.
    pub higher_symbols: usize,
    pub unary: Vec<UnaryTerm>,
}

/// `2 * #{arity >= 2} + sum over unary w of |<w>| - #{unary}`, where `<w>`
/// is the cyclic monoid of `w` including the identity.
///
/// Fails with the violated laws unless the algebra is associative and
/// distributive with respect to `order`.
pub fn choe_bound(a: &FiniteAlgebra, order: &ChoeOrder) -> Result<ChoeBound> {
    let report = check_choe_distributive(a, order, true)?;
    if !report.holds {
        return Err(Error::Precondition(report.violations));
    }
    let sig = a.signature();
    let higher_symbols = sig.iter().filter(|(_, s)| s.arity >= 2).count();
    let unary: Vec<UnaryTerm> = sig
        .of_arity(1)
        .into_iter()
        .map(|w| UnaryTerm {
            symbol: sig.name(w).to_string(),
            monoid_size: cyclic_monoid_of(a.table(w)).size(),
        })
        .collect();
    let bound =
        2 * higher_symbols + unary.iter().map(|u| u.monoid_size).sum::<usize>() - unary.len();
    Ok(ChoeBound {
        bound,
        higher_symbols,
        unary,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub holds: bool,
    pub monoid_size: usize,
    pub part1_monoid_size: usize,
    pub part2_monoid_size: usize,
    pub composite_count: usize,
    /// First monoid element, in monoid order, that is not a composite.
    pub counterexample: Option<Witness>,
}

/// Whether the translation monoid equals `{ f ∘ g }` with `f` from the
/// reduct to `part1` and `g` from the reduct to `part2`.
pub fn commuting_decomposition_check(
    a: &FiniteAlgebra,
    part1: &[SymbolId],
    part2: &[SymbolId],
) -> Result<DecompositionReport> {
    let sig = a.signature();
    let mut covered = HashSet::new();
    for &s in part1.iter().chain(part2) {
        if s.0 >= sig.len() {
            return Err(Error::UnknownSymbol(format!("#{}", s.0)));
        }
        if sig.arity(s) == 0 || !covered.insert(s) {
            return Err(Error::InvalidParams {
                kind: "decomposition".into(),
                reason: format!("`{}` is nullary or listed twice", sig.name(s)),
            });
        }
    }
    if let Some((_, s)) = sig
        .iter()
        .find(|(id, s)| s.arity >= 1 && !covered.contains(id))
    {
        return Err(Error::InvalidParams {
            kind: "decomposition".into(),
            reason: format!("`{}` is in neither part", s.name),
        });
    }
    let monoid = translation_monoid(a)?;
    let m1 = translation_monoid(&a.reduct(part1)?)?;
    let m2 = translation_monoid(&a.reduct(part2)?)?;
    let mut composites: HashSet<Vec<Element>> = HashSet::new();
    for f in m1.elements() {
        for g in m2.elements() {
            composites.insert(f.compose(g).into_image());
        }
    }
    let counterexample = monoid
        .elements()
        .iter()
        .enumerate()
        .find(|(_, e)| !composites.contains(e.image()))
        .map(|(i, e)| Witness {
            map: e.image().to_vec(),
            term: format_term(monoid.witness(i), sig),
        });
    // composites of translations of reducts are always translations of `a`
    let holds = counterexample.is_none() && composites.len() == monoid.len();
    Ok(DecompositionReport {
        holds,
        monoid_size: monoid.len(),
        part1_monoid_size: m1.len(),
        part2_monoid_size: m2.len(),
        composite_count: composites.len(),
        counterexample,
    })
}

/// Resolves symbol names for [`commuting_decomposition_check`].
pub fn resolve_symbols<S: AsRef<str>>(a: &FiniteAlgebra, names: &[S]) -> Result<Vec<SymbolId>> {
    names
        .iter()
        .map(|n| a.signature().resolve(n.as_ref()))
        .collect()
}
