//! Associativity and distributivity predicates, checked exhaustively on the
//! operation tables.

use serde::Serialize;

use crate::algebra::{find_tuple, ChoeOrder, Element, FiniteAlgebra, SymbolId};
use crate::error::{Error, Result};

/// A concrete counterexample to an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    pub law: String,
    pub symbols: Vec<String>,
    pub witness: Vec<Element>,
    pub lhs: Element,
    pub rhs: Element,
}

impl std::fmt::Display for LawViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.symbols.is_empty() && self.witness.is_empty() {
            return f.write_str(&self.law);
        }
        write!(
            f,
            "{} [{}] fails at {:?}: {} != {}",
            self.law,
            self.symbols.join(", "),
            self.witness,
            self.lhs,
            self.rhs
        )
    }
}

/// Index and period of the cyclic monoid `{id, f, f^2, ...}` of a unary map:
/// the least `index >= 0`, `period >= 1` with `f^(index+period) = f^index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclicMonoid {
    pub index: usize,
    pub period: usize,
}

impl CyclicMonoid {
    /// Number of distinct powers, the identity included.
    pub fn size(&self) -> usize {
        self.index + self.period
    }
}

/// Computes index and period of the monoid generated by `f` (given by its image).
pub fn cyclic_monoid_of(f: &[Element]) -> CyclicMonoid {
    let mut powers: Vec<Vec<Element>> = vec![(0..f.len()).collect()];
    loop {
        let last = powers.last().unwrap();
        let next: Vec<Element> = last.iter().map(|&z| f[z]).collect();
        if let Some(index) = powers.iter().position(|p| *p == next) {
            return CyclicMonoid {
                index,
                period: powers.len() - index,
            };
        }
        powers.push(next);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    pub holds: bool,
    pub violation: Option<LawViolation>,
    /// Present for unary symbols, where the predicate holds on every finite carrier.
    pub cyclic: Option<CyclicMonoid>,
}

/// Generalized associativity of one operation.
///
/// For arity `n >= 2` all `n` bracketings of `f` applied twice to a
/// `(2n-1)`-tuple must agree. Unary maps are associative whenever they
/// generate a finite monoid, so the check records that monoid instead.
pub fn check_associative(a: &FiniteAlgebra, sym: SymbolId) -> Result<AssociativityReport> {
    let arity = a.signature().arity(sym);
    match arity {
        0 => Err(Error::InvalidParams {
            kind: "check_associative".into(),
            reason: format!("`{}` is nullary", a.signature().name(sym)),
        }),
        1 => Ok(AssociativityReport {
            holds: true,
            violation: None,
            cyclic: Some(cyclic_monoid_of(a.table(sym))),
        }),
        n => {
            let mut inner = vec![0; n];
            let mut outer = vec![0; n];
            let violation = find_tuple(a.carrier(), 2 * n - 1, |t| {
                let mut bracketed = |j: usize| {
                    inner.copy_from_slice(&t[j..j + n]);
                    let mid = a.value(sym, &inner);
                    outer[..j].copy_from_slice(&t[..j]);
                    outer[j] = mid;
                    outer[j + 1..].copy_from_slice(&t[j + n..]);
                    a.value(sym, &outer)
                };
                let first = bracketed(0);
                (1..n).find_map(|j| {
                    let other = bracketed(j);
                    (other != first).then(|| LawViolation {
                        law: format!("associativity (bracket 0 vs {j})"),
                        symbols: vec![a.signature().name(sym).to_string()],
                        witness: t.to_vec(),
                        lhs: first,
                        rhs: other,
                    })
                })
            });
            Ok(AssociativityReport {
                holds: violation.is_none(),
                violation,
                cyclic: None,
            })
        }
    }
}

/// Which form of distribution holds for a unary `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DistributionForm {
    /// `g(f(a..)) = f(g(a_1), ..., g(a_n))`
    Full,
    /// `g(f(a..)) = f(a_1, .., g(a_k), .., a_n)`, 0-based slot.
    Slot(usize),
    /// The `g` of arity `>= 2` form, required for every slot.
    EverySlot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributivityReport {
    pub holds: bool,
    pub form: Option<DistributionForm>,
    pub violation: Option<LawViolation>,
}

/// Whether `g` distributes over `f`.
///
/// A unary `g` distributes if the full form or one of the single-slot forms
/// holds identically; on failure the reported violation is the full form's.
/// A `g` of arity `m >= 2` must satisfy, for every slot `k`,
/// `g(b.., f(a_1..a_n), ..b) = f(g(b.., a_1, ..b), ..., g(b.., a_n, ..b))`.
pub fn check_distributes(
    a: &FiniteAlgebra,
    g: SymbolId,
    f: SymbolId,
) -> Result<DistributivityReport> {
    let sig = a.signature();
    let (m, n) = (sig.arity(g), sig.arity(f));
    if m == 0 || n == 0 {
        return Err(Error::InvalidParams {
            kind: "check_distributes".into(),
            reason: "both symbols need arity >= 1".into(),
        });
    }
    let names = vec![sig.name(g).to_string(), sig.name(f).to_string()];
    if m == 1 {
        let full = find_tuple(a.carrier(), n, |t| {
            let lhs = a.value(g, &[a.value(f, t)]);
            let mapped: Vec<Element> = t.iter().map(|&x| a.value(g, &[x])).collect();
            let rhs = a.value(f, &mapped);
            (lhs != rhs).then(|| LawViolation {
                law: "distributivity (full form)".into(),
                symbols: names.clone(),
                witness: t.to_vec(),
                lhs,
                rhs,
            })
        });
        if full.is_none() {
            return Ok(DistributivityReport {
                holds: true,
                form: Some(DistributionForm::Full),
                violation: None,
            });
        }
        for k in 0..n {
            let slot_fails = find_tuple(a.carrier(), n, |t| {
                let lhs = a.value(g, &[a.value(f, t)]);
                let mut moved = t.to_vec();
                moved[k] = a.value(g, &[t[k]]);
                (lhs != a.value(f, &moved)).then_some(())
            });
            if slot_fails.is_none() {
                return Ok(DistributivityReport {
                    holds: true,
                    form: Some(DistributionForm::Slot(k)),
                    violation: None,
                });
            }
        }
        return Ok(DistributivityReport {
            holds: false,
            form: None,
            violation: full,
        });
    }

    let mut g_args = vec![0; m];
    let mut f_args = vec![0; n];
    for k in 0..m {
        // tuple layout: the m-1 fixed arguments of g, then the n arguments of f
        let violation = find_tuple(a.carrier(), m - 1 + n, |t| {
            let (b, args) = t.split_at(m - 1);
            let fill = |g_args: &mut [Element], mid: Element| {
                g_args[..k].copy_from_slice(&b[..k]);
                g_args[k] = mid;
                g_args[k + 1..].copy_from_slice(&b[k..]);
            };
            fill(&mut g_args, a.value(f, args));
            let lhs = a.value(g, &g_args);
            for (i, &ai) in args.iter().enumerate() {
                fill(&mut g_args, ai);
                f_args[i] = a.value(g, &g_args);
            }
            let rhs = a.value(f, &f_args);
            (lhs != rhs).then(|| LawViolation {
                law: format!("distributivity (slot {k})"),
                symbols: names.clone(),
                witness: t.to_vec(),
                lhs,
                rhs,
            })
        });
        if violation.is_some() {
            return Ok(DistributivityReport {
                holds: false,
                form: None,
                violation,
            });
        }
    }
    Ok(DistributivityReport {
        holds: true,
        form: Some(DistributionForm::EverySlot),
        violation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChoeReport {
    pub holds: bool,
    pub violations: Vec<LawViolation>,
}

/// Distributivity with respect to a linear order on the symbols of arity
/// `>= 2`:
///
/// 1. if `s` comes before `p` in `order`, then `p` distributes over `s`;
/// 2. every unary symbol distributes over every symbol of arity `>= 1`.
///
/// With `require_associative`, every symbol of arity `>= 1` must also be
/// associative.
pub fn check_choe_distributive(
    a: &FiniteAlgebra,
    order: &ChoeOrder,
    require_associative: bool,
) -> Result<ChoeReport> {
    let sig = a.signature();
    let mut violations = Vec::new();
    for (lower, higher) in order.strict_pairs() {
        let r = check_distributes(a, higher, lower)?;
        violations.extend(r.violation);
    }
    let unary = sig.of_arity(1);
    for &w in &unary {
        for (s, sym) in sig.iter() {
            if sym.arity >= 1 {
                let r = check_distributes(a, w, s)?;
                violations.extend(r.violation);
            }
        }
    }
    if require_associative {
        for (s, sym) in sig.iter() {
            if sym.arity >= 1 {
                violations.extend(check_associative(a, s)?.violation);
            }
        }
    }
    Ok(ChoeReport {
        holds: violations.is_empty(),
        violations,
    })
}
