//! Exact computations for Zariski equisingularity: truncated power series,
//! Weierstrass preparation, generalized discriminants, equisingularity towers,
//! parametrized solution families and 1-forms of meromorphic plane germs.
//!
//! The algebra is generic over the coefficient [`Field`]; the aliases below
//! fix the two exact fields shipped with the crate.

pub mod deform;
pub mod det;
pub mod error;
pub mod expr;
pub mod field;
pub mod gcd;
pub mod jet;
pub mod mero;
pub mod poly;
pub mod pseudopoly;
pub mod scalar;
pub mod tower;
pub mod vars;
pub mod weierstrass;

pub use deform::{
    binomial_family, build_deformation, verify_family, verify_nested, Deformation, FamilyCheck, NestedShape,
    SolutionFamily, SolvedLevel, TowerSolution,
};
pub use error::{Error, Result};
pub use expr::Expr;
pub use field::{Field, Rational};
pub use jet::{Jet, Valuation, DEFAULT_ORDER};
pub use mero::{
    analyze, build_mero_deformation, divisor_constant, emit_system, theta, DivisorRecord, FactoredGerm, MeroAnalysis,
    MeroSlice, OneForm, SliceStatus, SystemS,
};
pub use poly::{Monomial, Poly};
pub use pseudopoly::{EntryStatus, GenDiscSequence, PseudoPoly};
pub use scalar::{NumberField, Scalar};
pub use tower::{
    build_tower, build_tower_system, check_family, verify_tower, FamilyReport, Termination, Tower, TowerLevel,
    TowerOptions, Verdict,
};
pub use vars::VarContext;
pub use weierstrass::{
    find_regular_change, regularity_order, weierstrass_divide, weierstrass_prepare, Division, LinearChange, PreparedForm,
};

/// Jets over the rationals.
pub type QJet = Jet<Rational>;
/// Polynomials over the rationals.
pub type QPoly = Poly<Rational>;
/// Pseudopolynomials over the rationals.
pub type QPseudoPoly = PseudoPoly<Rational>;
/// Jets over a simple algebraic extension of the rationals.
pub type AlgJet = Jet<Scalar>;
/// Polynomials over a simple algebraic extension of the rationals.
pub type AlgPoly = Poly<Scalar>;
