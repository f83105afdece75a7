//! Exact toolkit for the lattice width of integral simplices and the
//! d-lattices they correspond to.
//!
//! Everything here is integer or rational arithmetic; there is no floating
//! point anywhere. The main capabilities:
//!
//! * [`vector`] / [`normball`]: the width norm on integer covectors and
//!   enumeration of its balls, with the exact count `(k+1)^(d+1) - k^(d+1)`.
//! * [`freecheck`]: lattice-freeness predicates — the fast residue criterion
//!   for cyclic lattices, a coset-representative criterion for general
//!   d-lattices, and a direct integer-point oracle for simplices.
//! * [`width`]: exact lattice width via shortest dual vector in the width
//!   norm, plus an independent brute-force oracle over covector boxes.
//! * [`duality`]: the inside-out correspondence between integral simplices
//!   and d-lattices, with index and volume bookkeeping.
//! * [`census`]: exhaustive enumeration of cyclic lattices (lines of
//!   `(Z/pZ)^d`), exact counts against the proven bounds.
//! * [`planner`]: exact big-integer evaluation of the existence condition
//!   for wide lattice-free simplices and prime selection near a target.
//! * [`search`]: exhaustive and seeded-random searches for wide lattice-free
//!   cyclic lattices, with a self-verifying JSONL catalog.

pub mod census;
pub mod certificate;
pub mod duality;
pub mod error;
pub mod freecheck;
pub mod lattice;
pub mod limits;
pub mod matrixint;
pub mod normball;
pub mod numstr;
pub mod planner;
pub mod search;
pub mod simplex;
pub mod vector;
pub mod width;

pub use certificate::{FreenessCertificate, RationalPoint, Verdict, WidthCertificate, WidthScope};
pub use error::Error;
pub use lattice::{CyclicLattice, GeneralLattice, Lattice};
pub use limits::Limits;
pub use normball::{norm_ball, norm_ball_count};
pub use simplex::Simplex;
pub use vector::IntVector;

/// Tool version stamped into search records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
