//! Fixtures shared by the kernel benchmarks in `benches/`.

use expsum_core::sets::random_set;
use expsum_core::{FieldContext, ResidueSet};

/// A field and a seeded random set of size about `p^theta`.
pub fn fixture(p: u64, theta: f64, seed: u64, zero_free: bool) -> (FieldContext, ResidueSet) {
    let ctx = FieldContext::new(p).expect("benchmark moduli are prime");
    let size = (p as f64).powf(theta).ceil() as u64;
    let set = random_set(&ctx, size, seed, zero_free).expect("size fits the field");
    (ctx, set)
}
