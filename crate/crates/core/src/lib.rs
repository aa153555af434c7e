//! Order-theoretic operator machinery over two executable models.
//!
//! The main model is a finite-dimensional C*-algebra V = (+)_j M_{d_j}(C)
//! with its rectangular matrix levels M_{m,n}(V). On it the crate computes
//! absolute values, the orthogonality relations, the order-unit matrix norm,
//! order projections and partial isometries, and the comparison theory of
//! projections (~, sub-equivalence, unitary equivalence) with constructive,
//! re-certified witnesses. A second, symbolic model encodes projections of
//! B(l2) as (rank, corank) pairs over the extended naturals, where the
//! genuinely infinite phenomena are decidable and exhaustively checkable.

pub mod absolute;
pub mod cardinal;
pub mod compare;
pub mod element;
pub mod error;
pub mod finite;
pub mod isometry;
pub mod linalg;
pub mod matrix;
pub mod sample;

pub use cardinal::{CardProj, ExtNat};
pub use compare::{EquivalenceWitness, SubEquivalenceWitness};
pub use element::{Element, Model, SelfAdjoint};
pub use error::{Error, Result};
pub use isometry::{PartialIsometry, Projection};
pub use linalg::{CMat, EigDecomp, Svd, TolerancePolicy};
