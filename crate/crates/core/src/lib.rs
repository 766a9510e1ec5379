//! Critical-orbit statistics and parameter exclusion for one-parameter
//! families of interval maps.
//!
//! The crate evaluates how often parameters near a summable map satisfy the
//! Collet–Eckmann condition: it follows critical orbits with overflow-safe
//! derivative products, extracts return times and depths into shrinking
//! neighbourhoods of the critical set, classifies parameters by depth
//! budgets, and builds parameter boxes around pre-critical parameters. A
//! self-contained module handles special families of balls and the measure
//! of their deep sets.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balls;
pub mod boxes;
pub mod classify;
pub mod cli;
pub mod depth;
pub mod error;
pub mod family;
pub mod orbit;
pub mod poly;
pub mod returns;

pub use depth::Depth;
pub use error::{Error, Result};
pub use family::{make_logistic, make_poly_family, CriticalPointInfo, Jet, MapFamily};
pub use orbit::{critical_orbit, OrbitData, SignedLogReal};
