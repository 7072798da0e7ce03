//! Class membership checks and the class-specific bounds.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{find_tuple, Element, FiniteAlgebra, SymbolId};
use crate::boundedness::{check_bounded_in, BoundCheck, BoundMode};
use crate::error::{Error, Result};
use crate::laws::{check_associative, LawViolation};
use crate::skeleton::DEFAULT_SKELETON_BUDGET;
use crate::translation::translation_monoid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraClass {
    Semigroup,
    Group,
    Ring,
    Semiring,
    Boolean,
    Semimodule,
    Unary,
}

impl AlgebraClass {
    pub const ALL: [AlgebraClass; 7] = [
        AlgebraClass::Semigroup,
        AlgebraClass::Group,
        AlgebraClass::Ring,
        AlgebraClass::Semiring,
        AlgebraClass::Boolean,
        AlgebraClass::Semimodule,
        AlgebraClass::Unary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgebraClass::Semigroup => "semigroup",
            AlgebraClass::Group => "group",
            AlgebraClass::Ring => "ring",
            AlgebraClass::Semiring => "semiring",
            AlgebraClass::Boolean => "boolean",
            AlgebraClass::Semimodule => "semimodule",
            AlgebraClass::Unary => "unary",
        }
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgebraClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParams {
                kind: "class".into(),
                reason: format!("unknown class `{s}`"),
            })
    }
}

struct Laws<'a> {
    a: &'a FiniteAlgebra,
    out: Vec<LawViolation>,
}

impl<'a> Laws<'a> {
    fn name(&self, s: SymbolId) -> String {
        self.a.signature().name(s).to_string()
    }

    /// Records the first tuple where `lhs != rhs`.
    fn identity(
        &mut self,
        law: &str,
        syms: &[SymbolId],
        vars: usize,
        f: impl Fn(&[Element]) -> (Element, Element),
    ) {
        let hit = find_tuple(self.a.carrier(), vars, |t| {
            let (l, r) = f(t);
            (l != r).then(|| (t.to_vec(), l, r))
        });
        if let Some((witness, lhs, rhs)) = hit {
            self.out.push(LawViolation {
                law: law.into(),
                symbols: syms.iter().map(|&s| self.name(s)).collect(),
                witness,
                lhs,
                rhs,
            });
        }
    }

    fn structural(&mut self, law: &str, detail: String) {
        self.out.push(LawViolation {
            law: format!("{law}: {detail}"),
            symbols: Vec::new(),
            witness: Vec::new(),
            lhs: 0,
            rhs: 0,
        });
    }

    fn associative(&mut self, s: SymbolId) {
        if let Ok(r) = check_associative(self.a, s) {
            self.out.extend(r.violation);
        }
    }

    fn commutative(&mut self, s: SymbolId) {
        let a = self.a;
        self.identity("commutativity", &[s], 2, |t| {
            (a.value(s, &[t[0], t[1]]), a.value(s, &[t[1], t[0]]))
        });
    }

    fn idempotent(&mut self, s: SymbolId) {
        let a = self.a;
        self.identity("idempotence", &[s], 1, |t| {
            (a.value(s, &[t[0], t[0]]), t[0])
        });
    }

    /// `p` distributes over `s` from both sides.
    fn distributes(&mut self, p: SymbolId, s: SymbolId) {
        let a = self.a;
        self.identity("left distributivity", &[p, s], 3, |t| {
            (
                a.value(p, &[t[0], a.value(s, &[t[1], t[2]])]),
                a.value(s, &[a.value(p, &[t[0], t[1]]), a.value(p, &[t[0], t[2]])]),
            )
        });
        self.identity("right distributivity", &[p, s], 3, |t| {
            (
                a.value(p, &[a.value(s, &[t[0], t[1]]), t[2]]),
                a.value(s, &[a.value(p, &[t[0], t[2]]), a.value(p, &[t[1], t[2]])]),
            )
        });
    }

    /// Two-sided neutral element of a binary symbol, if any.
    fn neutral(&self, s: SymbolId) -> Option<Element> {
        let a = self.a;
        a.elements().find(|&e| {
            a.elements()
                .all(|x| a.value(s, &[e, x]) == x && a.value(s, &[x, e]) == x)
        })
    }
}

fn arity_counts(a: &FiniteAlgebra) -> [Vec<SymbolId>; 5] {
    let sig = a.signature();
    std::array::from_fn(|n| sig.of_arity(n))
}

/// Violations of the defining laws of `class`, symbols identified by arity.
/// Empty iff `a` belongs to the class.
pub fn class_violations(a: &FiniteAlgebra, class: AlgebraClass) -> Vec<LawViolation> {
    let by_arity = arity_counts(a);
    let (unary, binary) = (&by_arity[1], &by_arity[2]);
    let higher = by_arity[3].len() + by_arity[4].len();
    let mut laws = Laws { a, out: Vec::new() };
    let shape = |laws: &mut Laws, want_unary: Option<usize>, want_binary: usize| {
        let unary_ok = want_unary.is_none_or(|u| unary.len() == u);
        if !unary_ok || binary.len() != want_binary || higher > 0 {
            laws.structural(
                "signature",
                format!(
                    "expected {want_binary} binary{} and no higher symbols",
                    want_unary.map_or(String::new(), |u| format!(", {u} unary"))
                ),
            );
            return false;
        }
        true
    };
    match class {
        AlgebraClass::Semigroup => {
            if shape(&mut laws, Some(0), 1) {
                laws.associative(binary[0]);
            }
        }
        AlgebraClass::Group => {
            if unary.len() > 1 {
                laws.structural("signature", "at most one unary symbol".into());
            } else if shape(&mut laws, None, 1) {
                let m = binary[0];
                laws.associative(m);
                match laws.neutral(m) {
                    None => laws.structural(
                        "identity",
                        format!("`{}` has no neutral element", laws.name(m)),
                    ),
                    Some(e) => {
                        if let Some(&inv) = unary.first() {
                            laws.identity("inverse", &[m, inv], 1, |t| {
                                (a.value(m, &[a.value(inv, &[t[0]]), t[0]]), e)
                            });
                            laws.identity("inverse", &[m, inv], 1, |t| {
                                (a.value(m, &[t[0], a.value(inv, &[t[0]])]), e)
                            });
                        } else if let Some(x) = a.elements().find(|&x| {
                            !a.elements()
                                .any(|y| a.value(m, &[x, y]) == e && a.value(m, &[y, x]) == e)
                        }) {
                            laws.structural("inverse", format!("{x} has no inverse"));
                        }
                    }
                }
            }
        }
        AlgebraClass::Ring | AlgebraClass::Semiring => {
            if shape(&mut laws, Some(0), 2) {
                // the additive symbol is the one the other distributes over
                let (plus, times) = pick_additive(a, binary[0], binary[1]);
                laws.associative(plus);
                laws.associative(times);
                laws.commutative(plus);
                laws.distributes(times, plus);
                if class == AlgebraClass::Ring {
                    match laws.neutral(plus) {
                        None => laws.structural(
                            "zero",
                            format!("`{}` has no neutral element", laws.name(plus)),
                        ),
                        Some(z) => {
                            if let Some(x) = a
                                .elements()
                                .find(|&x| !a.elements().any(|y| a.value(plus, &[x, y]) == z))
                            {
                                laws.structural("negation", format!("{x} has no additive inverse"));
                            }
                        }
                    }
                }
            }
        }
        AlgebraClass::Boolean => {
            if shape(&mut laws, Some(1), 2) {
                let (j, m, n) = (binary[0], binary[1], unary[0]);
                for s in [j, m] {
                    laws.associative(s);
                    laws.commutative(s);
                    laws.idempotent(s);
                }
                laws.identity("absorption", &[j, m], 2, |t| {
                    (a.value(j, &[t[0], a.value(m, &[t[0], t[1]])]), t[0])
                });
                laws.identity("absorption", &[m, j], 2, |t| {
                    (a.value(m, &[t[0], a.value(j, &[t[0], t[1]])]), t[0])
                });
                laws.distributes(m, j);
                laws.identity("involution", &[n], 1, |t| {
                    (a.value(n, &[a.value(n, &[t[0]])]), t[0])
                });
                let (top, bot) = (
                    a.value(j, &[0, a.value(n, &[0])]),
                    a.value(m, &[0, a.value(n, &[0])]),
                );
                laws.identity("complement", &[j, n], 1, |t| {
                    (a.value(j, &[t[0], a.value(n, &[t[0]])]), top)
                });
                laws.identity("complement", &[m, n], 1, |t| {
                    (a.value(m, &[t[0], a.value(n, &[t[0]])]), bot)
                });
            }
        }
        AlgebraClass::Semimodule => {
            if shape(&mut laws, None, 1) {
                let p = binary[0];
                laws.associative(p);
                laws.commutative(p);
                for &w in unary {
                    laws.identity("endomorphism", &[w, p], 2, |t| {
                        (
                            a.value(w, &[a.value(p, &[t[0], t[1]])]),
                            a.value(p, &[a.value(w, &[t[0]]), a.value(w, &[t[1]])]),
                        )
                    });
                }
            }
        }
        AlgebraClass::Unary => {
            if !binary.is_empty() || higher > 0 {
                laws.structural("signature", "only unary and nullary symbols allowed".into());
            }
        }
    }
    laws.out
}

fn pick_additive(a: &FiniteAlgebra, s: SymbolId, t: SymbolId) -> (SymbolId, SymbolId) {
    let probe = |times: SymbolId, plus: SymbolId| {
        let mut l = Laws { a, out: Vec::new() };
        l.distributes(times, plus);
        l.out.is_empty()
    };
    if probe(t, s) || !probe(s, t) {
        (s, t)
    } else {
        (t, s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub class: AlgebraClass,
    pub bound: usize,
    pub monoid_size: usize,
    pub result: BoundCheck,
}

/// The bound the class guarantees; for unary algebras `|M(A)| - 1`.
pub fn class_bound(class: AlgebraClass, monoid_size: usize) -> usize {
    match class {
        AlgebraClass::Semigroup | AlgebraClass::Semimodule => 2,
        AlgebraClass::Group
        | AlgebraClass::Ring
        | AlgebraClass::Semiring
        | AlgebraClass::Boolean => 3,
        AlgebraClass::Unary => monoid_size.saturating_sub(1),
    }
}

/// Checks membership in `class`, then runs the bounded check at the class's
/// bound. Fails with the violated laws if `a` is not in the class.
pub fn verify_class(a: &FiniteAlgebra, class: AlgebraClass) -> Result<ClassReport> {
    verify_class_with(a, class, DEFAULT_SKELETON_BUDGET)
}

pub fn verify_class_with(
    a: &FiniteAlgebra,
    class: AlgebraClass,
    budget: u128,
) -> Result<ClassReport> {
    let violations = class_violations(a, class);
    if !violations.is_empty() {
        return Err(Error::Precondition(violations));
    }
    let monoid = translation_monoid(a)?;
    let bound = class_bound(class, monoid.len());
    let result = check_bounded_in(a, &monoid, bound, BoundMode::Full, budget)?;
    Ok(ClassReport {
        class,
        bound,
        monoid_size: monoid.len(),
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_algebra, random_algebra};

    fn member(kind: &str, params: &[u64], class: AlgebraClass) -> bool {
        class_violations(&builtin_algebra(kind, params).unwrap(), class).is_empty()
    }

    #[test]
    fn builtin_memberships() {
        use AlgebraClass::*;
        assert!(member("left_zero_semigroup", &[3], Semigroup));
        assert!(!member("left_zero_semigroup", &[3], Group));
        assert!(member("zn_group", &[5], Group));
        assert!(member("sym_group", &[3], Group));
        assert!(member("zn_ring", &[6], Ring));
        assert!(member("zn_ring", &[6], Semiring));
        assert!(member("boolean_semiring", &[], Semiring));
        assert!(!member("boolean_semiring", &[], Ring));
        assert!(member("divisor_lattice", &[6], Semiring));
        assert!(member("boolean_algebra", &[2], Boolean));
        assert!(!member("divisor_lattice", &[12], Boolean));
        assert!(member("boolean_semimodule", &[2], Semimodule));
        assert!(!member("zn_ring", &[6], Unary));
    }

    #[test]
    fn non_associative_magma_is_not_a_semigroup() {
        let a = FiniteAlgebra::from_fn("m", 3, &[("*", 2)], |_, t| (t[0] + 2 * t[1]) % 3).unwrap();
        let v = class_violations(&a, AlgebraClass::Semigroup);
        assert_eq!(v.len(), 1);
        assert!(v[0].law.starts_with("associativity"));
    }

    #[test]
    fn class_names_parse() {
        for c in AlgebraClass::ALL {
            assert_eq!(c.name().parse::<AlgebraClass>().unwrap(), c);
        }
        assert!("lattice".parse::<AlgebraClass>().is_err());
    }

    #[test]
    fn class_bounds_hold_on_small_instances() {
        let cases: &[(&str, &[u64], AlgebraClass)] = &[
            ("left_zero_semigroup", &[2], AlgebraClass::Semigroup),
            ("zn_group", &[4], AlgebraClass::Group),
            ("zn_ring", &[4], AlgebraClass::Ring),
            ("boolean_semiring", &[], AlgebraClass::Semiring),
            ("boolean_algebra", &[1], AlgebraClass::Boolean),
            ("boolean_semimodule", &[1], AlgebraClass::Semimodule),
        ];
        for (kind, params, class) in cases {
            let a = builtin_algebra(kind, params).unwrap();
            let r = verify_class(&a, *class).unwrap();
            let cert = r.result.certificate().unwrap_or_else(|| panic!("{kind}"));
            cert.verify(&a).unwrap();
        }
        for seed in 0..5 {
            let a = random_algebra(seed, 4, &[1, 1]).unwrap();
            let r = verify_class(&a, AlgebraClass::Unary).unwrap();
            assert_eq!(r.bound, r.monoid_size - 1);
            assert!(r.result.is_bounded());
        }
        assert!(matches!(
            verify_class(
                &builtin_algebra("zn_ring", &[3]).unwrap(),
                AlgebraClass::Boolean
            ),
            Err(Error::Precondition(_))
        ));
    }
}
