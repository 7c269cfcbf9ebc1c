//! Finite n-ary f-distributive structures: f-shelves, f-racks and
//! f-quandles with a twisting endomap, plus the machinery around them —
//! axiom checking, the named constructions, enumeration and isomorphism
//! classification at small orders, extensions by dynamical cocycles,
//! module structures, and cohomology over `Z_m`.
//!
//! Elements are 0-based integers `{0 .. q-1}`; published tables use 1-based
//! labels, which only the permutation-column renderer reinstates. Flat
//! tables index the first argument fastest.

pub mod cayley;
pub mod cohomology;
pub mod construct;
pub mod endomap;
pub mod enumerate;
pub mod error;
pub mod golden;
pub mod group;
pub mod io;
pub mod linalg;
pub mod modext;
pub mod morphism;
mod par;
pub mod perm;
pub mod permcol;
pub mod reproduce;
pub mod structure;

pub use cayley::CayleyOp;
pub use endomap::Endomap;
pub use error::{Error, Result};
pub use perm::Permutation;
pub use structure::{FStructure, Level};
