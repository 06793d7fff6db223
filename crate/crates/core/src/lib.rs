//! Finite laboratory for set-universe experiments.
//!
//! The crate is organized around five layers:
//!
//! * [`hf`] — canonical hereditarily finite sets with Zermelo-style operations
//!   and the Ackermann coding.
//! * [`formula`] — a first-order language over `∈`/`=` with tier constants,
//!   hereditarily finite literals, bounded-quantifier sugar, relativization,
//!   and the builtin axiom library.
//! * [`model`] — satisfaction over finite structures, axiom audits with
//!   reproducible witnesses, Ehrenfeucht–Fraïssé elementarity checks, and a
//!   formula enumerator.
//! * [`hierarchy`] — materialized cumulative stages, tier configurations
//!   emulating the constants, and the stage-level audit battery.
//! * [`category`] — finite categories: the collection categories over stages,
//!   limits by brute-force universal-property search, and size/structure
//!   audits at the finite boundary.

pub mod category;
pub mod formula;
pub mod hf;
pub mod hierarchy;
pub mod model;
