//! Finite algebras, affine terms, translation monoids, congruences and
//! affine-boundedness certificates.
//!
//! ```
//! use affbound::{builtin_algebra, check_bounded_by, minimal_bound};
//!
//! let z6 = builtin_algebra("zn_ring", &[6]).unwrap();
//! assert!(check_bounded_by(&z6, 3).unwrap().is_bounded());
//! assert_eq!(minimal_bound(&z6).unwrap().0, 2);
//! ```

pub mod algebra;
pub mod boundedness;
pub mod catalog;
pub mod classes;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod free_magma;
pub mod io;
pub mod laws;
pub mod skeleton;
pub mod term;
pub mod translation;

pub use algebra::{ChoeOrder, Element, FiniteAlgebra, Signature, Symbol, SymbolId};
pub use boundedness::{
    check_bounded_by, choe_bound, commuting_decomposition_check, minimal_bound, BoundCheck,
    Certificate, Failure,
};
pub use catalog::{builtin_algebra, parse_builtin_spec, random_algebra};
pub use congruence::{
    congruence_lattice, is_congruence, is_simple, largest_congruence_below, principal_congruence,
    quotient, Partition,
};
pub use error::{Error, Result};
pub use term::{parse_term, AffineTerm, Term};
pub use translation::{translation_monoid, translations, TranslationMonoid, UnaryMap};
