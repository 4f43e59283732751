//! Symbolic preference relations over constraint formulas.
//!
//! Preference relations between database tuples are represented finitely by
//! boolean combinations of equality constraints (over uninterpreted
//! constants) and order constraints (over the rationals), so the relations
//! themselves may be infinite. On top of that representation the crate
//! provides:
//!
//! - composition operators (union, prioritized composition, inverse,
//!   relational composition, difference) and a terminating transitive-closure
//!   fixpoint ([`algebra`]);
//! - decision procedures for satisfiability, entailment, and equivalence of
//!   constraint formulas ([`solver`]);
//! - order-axiom checking: irreflexivity, transitivity, negative
//!   transitivity, connectivity, and the derived SPO / weak order / total
//!   order classification ([`axioms`]);
//! - refinement and overriding revision with theorem-backed fast paths and
//!   explicit axiom checking as the fallback ([`revision`]);
//! - the winnow operator over finite instances, with generic, block-nested
//!   loop, and single-pass weak-order algorithms plus incremental iterated
//!   evaluation ([`winnow`]);
//! - a brute-force finite-universe oracle used to cross-check every symbolic
//!   result ([`oracle`]).
//!
//! The `parallel` feature (on by default) runs winnow dominance tests, grid
//! materialization, and axiom classification on rayon; disabling it yields a
//! fully sequential build with the same API.

pub mod algebra;
pub mod axioms;
pub mod csvio;
pub mod dnf;
pub mod error;
mod exec;
pub mod formula;
pub mod oracle;
pub mod parse;
pub mod rational;
pub mod revision;
pub mod schema;
pub mod solver;
pub mod winnow;

pub use error::{Error, Result};
pub use formula::{Atom, AtomKind, CompOp, Formula, PrefRelation, Term, TupleVar};
pub use rational::Rat;
pub use schema::{AttrDomain, Schema, TupleValue, Value};
pub use winnow::RelationInstance;
