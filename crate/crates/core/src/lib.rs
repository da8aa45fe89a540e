//! CHSH nonlocality, concurrence and tangle for multi-qubit pure states, with
//! summation- and product-form monogamy relations checked by seeded
//! sampling campaigns and probed by simplex search.
//!
//! Qubit `A` (index 0) is always the most significant bit of a basis index.

pub mod campaign;
pub mod correlations;
pub mod error;
pub mod inequalities;
pub mod qmath;
pub mod states;

pub use error::{Error, Result};
