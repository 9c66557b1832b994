//! Combinatorics of tame inertial types for `GL_2` of an unramified p-adic
//! field, Serre-weight sets of generic mod-p Galois parameters, the gauge
//! calculus of integral lattices in tame types, a monomial-ring model of the
//! special fibres of the relevant deformation spaces, and an explicit
//! modular-representation engine cross-checking the combinatorics.

pub mod engine;
pub mod error;
pub mod galois;
pub mod gauge;
pub mod ideals;
pub mod params;
pub mod predictor;
pub mod types;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use gauge::{FiltrationReport, GaugeVector};
pub use ideals::{Monomial, MonomialIdeal, RingSpec};
pub use predictor::{DefSpaceData, Point, PredictedLattice};
pub use galois::{RhoBar, RhoShape, WeightInterval};
pub use params::{digits, undigits, JSet, Params};
pub use types::{CuspidalClass, TameType, TypeKind};
pub use weight::Weight;
