//! Exact counting: difference counts, additive energy, the product-of-
//! differences counts behind `D_k^x`, `N(X, Y, Z)` and point-plane
//! incidences.
//!
//! `D_k^x` has two independent routes. The brute route enumerates all
//! `2k`-tuples. The convolution route takes per-set difference counts on
//! `F_p^*`, moves them to exponent space through the discrete-log table and
//! multiplies them by exact cyclic convolution of length `p - 1`.

pub mod convolution;
pub mod incidence;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::sets::ResidueSet;

pub use convolution::Engine;
pub use incidence::{incidence_count, IncidenceReport, Plane, Point3};

/// Default modulus limit for the convolution route.
pub const DEFAULT_CONVOLUTION_LIMIT: u64 = 100_000;
/// Default cap on tuples enumerated by the brute route.
pub const DEFAULT_BRUTE_BUDGET: u128 = 100_000_000;

/// Representation counts `r(lambda)` indexed by residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    modulus: u64,
    counts: Vec<BigUint>,
}

impl CountVector {
    pub fn from_u64(modulus: u64, counts: Vec<u64>) -> Self {
        assert_eq!(counts.len() as u64, modulus);
        CountVector {
            modulus,
            counts: counts.into_iter().map(BigUint::from).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, lambda: u64) -> &BigUint {
        &self.counts[lambda as usize]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn sum_of_squares(&self) -> BigUint {
        self.counts.iter().map(|c| c * c).sum()
    }
}

/// Counts of `prod (w_i - x_i)` split into the zero and nonzero parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCounts {
    /// Indexed by residue; entry 0 is always zero.
    pub nonzero: CountVector,
    pub zero_count: BigUint,
    sizes: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Full,
    Star,
    Tilde,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "star" => Ok(Variant::Star),
            "tilde" => Ok(Variant::Tilde),
            other => Err(Error::Unknown {
                kind: "D_k variant",
                name: other.into(),
                known: "full, star, tilde".into(),
            }),
        }
    }
}

/// A `D_k^x` value: integer for the full and star variants, rational for
/// tilde.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DkValue {
    Count(BigUint),
    Rational(BigRational),
}

impl DkValue {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            DkValue::Count(c) => c.to_f64().unwrap_or(f64::INFINITY),
            DkValue::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn as_rational(&self) -> BigRational {
        match self {
            DkValue::Count(c) => BigRational::from_integer(c.clone().into()),
            DkValue::Rational(r) => r.clone(),
        }
    }
}

impl std::fmt::Display for DkValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DkValue::Count(c) => write!(f, "{c}"),
            DkValue::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            DkValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl ProductCounts {
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// `prod |X_i|^2`.
    pub fn total_tuples(&self) -> BigUint {
        self.sizes.iter().map(|&x| BigUint::from(x) * x).product()
    }

    /// `prod |X_i| (|X_i| - 1)`, the number of tuples with nonzero product.
    pub fn off_diagonal_tuples(&self) -> BigUint {
        self.sizes
            .iter()
            .map(|&x| BigUint::from(x) * x.saturating_sub(1))
            .product()
    }

    pub fn full(&self) -> BigUint {
        &self.zero_count * &self.zero_count + self.star()
    }

    pub fn star(&self) -> BigUint {
        self.nonzero.sum_of_squares()
    }

    /// `star - (prod X_i (X_i - 1))^2 / (p - 1)`.
    pub fn tilde(&self) -> BigRational {
        let off = self.off_diagonal_tuples();
        let main = BigRational::new((&off * &off).into(), BigUint::from(self.nonzero.modulus - 1).into());
        BigRational::from_integer(self.star().into()) - main
    }

    pub fn dk(&self, variant: Variant) -> DkValue {
        match variant {
            Variant::Full => DkValue::Count(self.full()),
            Variant::Star => DkValue::Count(self.star()),
            Variant::Tilde => DkValue::Rational(self.tilde()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Brute,
    Convolution(Engine),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub method: Method,
    pub convolution_limit: u64,
    pub brute_budget: u128,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            method: Method::Convolution(Engine::Schoolbook),
            convolution_limit: DEFAULT_CONVOLUTION_LIMIT,
            brute_budget: DEFAULT_BRUTE_BUDGET,
        }
    }
}

impl CountOptions {
    pub fn brute() -> Self {
        CountOptions {
            method: Method::Brute,
            ..Default::default()
        }
    }

    pub fn with_engine(engine: Engine) -> Self {
        CountOptions {
            method: Method::Convolution(engine),
            ..Default::default()
        }
    }
}

fn difference_histogram(ctx: &FieldContext, set: &ResidueSet) -> Vec<u64> {
    let mut counts = vec![0u64; ctx.p() as usize];
    for &a in set.elements() {
        for &b in set.elements() {
            counts[ctx.sub(a, b) as usize] += 1;
        }
    }
    counts
}

/// `r(lambda) = #{(a, a') in A^2 : a - a' = lambda}`.
pub fn difference_counts(ctx: &FieldContext, set: &ResidueSet) -> Result<CountVector> {
    set.check_modulus(ctx)?;
    Ok(CountVector::from_u64(ctx.p(), difference_histogram(ctx, set)))
}

/// `#{(a, b, c, d) in A^4 : a + b = c + d}`.
pub fn additive_energy(ctx: &FieldContext, set: &ResidueSet) -> Result<BigUint> {
    set.check_modulus(ctx)?;
    let mut sums = vec![0u64; ctx.p() as usize];
    for &a in set.elements() {
        for &b in set.elements() {
            sums[ctx.add(a, b) as usize] += 1;
        }
    }
    Ok(sum_squares(&sums))
}

fn sum_squares(xs: &[u64]) -> BigUint {
    let mut acc = 0u128;
    let mut big = BigUint::zero();
    for &x in xs {
        let sq = x as u128 * x as u128;
        match acc.checked_add(sq) {
            Some(v) => acc = v,
            None => {
                big += acc;
                acc = sq;
            }
        }
    }
    big + acc
}

/// Counts of `prod_i (w_i - x_i)` over `w_i, x_i in X_i`.
pub fn product_difference_counts(
    ctx: &FieldContext,
    sets: &[ResidueSet],
    options: &CountOptions,
) -> Result<ProductCounts> {
    if sets.is_empty() {
        return Err(Error::InvalidArgument("product of differences needs at least one set".into()));
    }
    for s in sets {
        s.check_modulus(ctx)?;
    }
    let sizes: Vec<u64> = sets.iter().map(|s| s.len() as u64).collect();
    match options.method {
        Method::Brute => brute_product_counts(ctx, sets, sizes, options.brute_budget),
        Method::Convolution(engine) => {
            if ctx.p() > options.convolution_limit {
                return Err(Error::ConvolutionLimit {
                    p: ctx.p(),
                    limit: options.convolution_limit,
                });
            }
            convolution_product_counts(ctx, sets, sizes, engine)
        }
    }
}

fn brute_product_counts(
    ctx: &FieldContext,
    sets: &[ResidueSet],
    sizes: Vec<u64>,
    budget: u128,
) -> Result<ProductCounts> {
    let required = sizes
        .iter()
        .try_fold(1u128, |acc, &x| acc.checked_mul(x as u128 * x as u128))
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut counts = vec![0u64; ctx.p() as usize];
    fn walk(ctx: &FieldContext, sets: &[ResidueSet], product: u64, counts: &mut [u64]) {
        match sets.split_first() {
            None => counts[product as usize] += 1,
            Some((first, rest)) => {
                for &w in first.elements() {
                    for &x in first.elements() {
                        walk(ctx, rest, ctx.mul(product, ctx.sub(w, x)), counts);
                    }
                }
            }
        }
    }
    walk(ctx, sets, 1, &mut counts);
    let zero_count = BigUint::from(counts[0]);
    counts[0] = 0;
    Ok(ProductCounts {
        nonzero: CountVector::from_u64(ctx.p(), counts),
        zero_count,
        sizes,
    })
}

fn convolution_product_counts(
    ctx: &FieldContext,
    sets: &[ResidueSet],
    sizes: Vec<u64>,
    engine: Engine,
) -> Result<ProductCounts> {
    let order = ctx.order() as usize;
    let to_exponent_space = |set: &ResidueSet| -> Vec<BigUint> {
        let hist = difference_histogram(ctx, set);
        let mut v = vec![BigUint::zero(); order];
        for (lambda, &c) in hist.iter().enumerate().skip(1) {
            v[ctx.dlog_unchecked(lambda as u64)] = BigUint::from(c);
        }
        v
    };
    let mut acc = to_exponent_space(&sets[0]);
    for set in &sets[1..] {
        acc = convolution::cyclic_convolve(&acc, &to_exponent_space(set), engine);
    }
    let mut nonzero = vec![BigUint::zero(); ctx.p() as usize];
    for (a, c) in acc.into_iter().enumerate() {
        nonzero[ctx.power_of_generator(a as u64) as usize] = c;
    }
    let nonzero = CountVector {
        modulus: ctx.p(),
        counts: nonzero,
    };
    let total: BigUint = sizes.iter().map(|&x| BigUint::from(x) * x).product();
    let zero_count = total - nonzero.total();
    Ok(ProductCounts {
        nonzero,
        zero_count,
        sizes,
    })
}

/// `D_k^x(X_1, ..., X_k)` in the requested variant. For the single-set
/// quantity `D_k^x(A)` pass `k` copies of `A`.
pub fn dk_times(ctx: &FieldContext, sets: &[ResidueSet], variant: Variant, options: &CountOptions) -> Result<DkValue> {
    Ok(product_difference_counts(ctx, sets, options)?.dk(variant))
}

/// Character-sum side of the star and tilde identities:
/// `(1/(p-1)) sum_chi prod_i |sum_{w,x in X_i} chi(w - x)|^2`, over all
/// characters and over the non-principal ones. Evaluated directly from the
/// sets, independent of the counting routes.
pub fn dk_star_via_characters(ctx: &FieldContext, sets: &[ResidueSet]) -> Result<(f64, f64)> {
    for s in sets {
        s.check_modulus(ctx)?;
    }
    let order = ctx.order();
    let mut all = 0.0;
    let mut nonprincipal = 0.0;
    for j in 0..order {
        let mut term = 1.0;
        for set in sets {
            let mut s = Complex64::zero();
            for &w in set.elements() {
                for &x in set.elements() {
                    s += ctx.chi_or_zero(j, ctx.sub(w, x));
                }
            }
            term *= s.norm_sqr();
        }
        all += term;
        if j != 0 {
            nonprincipal += term;
        }
    }
    Ok((all / order as f64, nonprincipal / order as f64))
}

/// `N(X, Y, Z)`: solutions of `x_1 (y_1 - z_1) = x_2 (y_2 - z_2)`, by
/// squaring the multiplicities of the value multiset `{x (y - z)}`.
pub fn n_count(ctx: &FieldContext, x: &ResidueSet, y: &ResidueSet, z: &ResidueSet) -> Result<BigUint> {
    for s in [x, y, z] {
        s.check_modulus(ctx)?;
    }
    let mut values = vec![0u64; ctx.p() as usize];
    for &b in y.elements() {
        for &c in z.elements() {
            let d = ctx.sub(b, c);
            for &a in x.elements() {
                values[ctx.mul(a, d) as usize] += 1;
            }
        }
    }
    Ok(sum_squares(&values))
}

/// `prod` of a list of sizes as `BigUint`.
pub(crate) fn product_of(xs: impl IntoIterator<Item = u64>) -> BigUint {
    xs.into_iter().fold(BigUint::one(), |acc, x| acc * x)
}
