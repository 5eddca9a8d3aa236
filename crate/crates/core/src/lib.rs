//! Finite semigroups given by Cayley tables, their term functions, identification
//! minors, and exact searches around the IMT property (every identification minor
//! is a term function).
//!
//! The crate is organized bottom-up:
//!
//! * [`semigroup`], [`partition`], [`construct`], [`profile`]: tables and constructions
//!   (free nilpotent semigroups, adjoined identity/zero, products, 0-direct unions,
//!   quotients, Rees quotients).
//! * [`term`], [`closure`], [`digraph`]: words, their evaluation, the set of all word
//!   functions of a given arity, and occurrence digraphs.
//! * [`function`], [`membership`], [`synth`], [`imt`]: finitary functions, minors,
//!   term-function membership, term synthesis from two-variable restrictions, and
//!   enumeration of IMT functions.
//! * [`gallery`]: named example objects and end-to-end checks.
//! * [`io`]: the `.sg.json`, `.sgfn` and `report.json` formats and the catalog.

pub mod closure;
pub mod construct;
pub mod digraph;
pub mod error;
pub mod function;
pub mod gallery;
pub mod imt;
pub mod io;
pub mod membership;
pub mod partition;
pub mod profile;
pub mod semigroup;
pub mod synth;
pub mod term;
pub mod tuples;

pub use error::{Error, Result};
pub use function::{FiniteFunction, MinorIndex};
pub use partition::Partition;
pub use profile::{nilpotency_profile, NilpotentProfile};
pub use semigroup::{ElementId, FiniteSemigroup, Limits};
pub use term::{Identity, Term};
