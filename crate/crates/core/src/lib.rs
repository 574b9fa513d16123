//! Exact computation and verification toolkit for multilinear exponential
//! sums over prime fields.
//!
//! - [`field`]: prime-field context, discrete logarithms, characters
//! - [`sets`]: intervals, subgroups, GAPs, random sets, power images, sumsets
//! - [`counting`]: difference counts, `D_k^x`, energies, `N(X, Y, Z)`, incidences
//! - [`sums`]: multilinear, bilinear, Mordell and GAP Weyl sums; Fourier `l^1`
//! - [`bounds`]: explicit bound formulas with constants set to 1
//! - [`harness`]: sweeps, verification suites and CSV/JSON reporting

pub mod bounds;
pub mod counting;
pub mod error;
pub mod field;
pub mod harness;
pub mod rng;
pub mod sets;
pub mod sums;

pub use counting::{CountOptions, CountVector, DkValue, Engine, Method, ProductCounts, Variant};
pub use error::{Error, Result};
pub use field::{CharacterKind, FieldContext};
pub use sets::{GapSpec, ResidueSet, SetDescriptor, SparsePoly};
pub use sums::{SumResult, WeightOracle, Weights};
