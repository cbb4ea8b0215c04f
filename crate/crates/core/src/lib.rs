//! Orientation certificates for DP-colorings.
//!
//! A correspondence assignment `(L, C)` on a multigraph is classified as
//! good, signable, Z-signable or generalized signable. Assignments outside a
//! class are lifted to a multigraph by splitting matchings into in-class
//! parts. An orientation `D` with `d⁺(v) < |L(v)|` whose auxiliary digraph
//! has `EE - EO` nonzero in the field certifies colorability; the solver
//! provides ground truth.

pub mod aux_digraph;
pub mod caps;
pub mod certify;
pub mod correspondence;
pub mod crossval;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod nullstellensatz;
pub mod solver;

pub use caps::Caps;
pub use certify::{certify, Instance, Mode, Strategy, Verdict};
pub use correspondence::{CorrespondenceAssignment, PartialMatching};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec, Sign};
pub use graph::{Digraph, Multigraph, Orientation};
