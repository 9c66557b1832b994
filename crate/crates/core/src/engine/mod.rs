//! Explicit modular-representation engine: exact modules over truncated
//! Witt rings of finite fields, integral induced lattices for principal
//! series types, socle/radical series, and gauge measurement.  Serves as
//! the independent oracle for the combinatorial predictions elsewhere in
//! the crate.

pub mod ff;
pub mod gmodule;
pub mod lattice;
pub mod linalg;
pub mod ring;

pub use ff::{FField, FMat};
pub use gmodule::GModule;
pub use lattice::LatticeModule;
pub use linalg::Mat;
pub use ring::{CoeffRing, El};
