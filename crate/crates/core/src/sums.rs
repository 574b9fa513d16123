//! Exact evaluation of exponential sums by enumeration: weighted multilinear
//! sums, bilinear sums, Mordell sums of sparse polynomials, Weyl sums over
//! GAPs and the Fourier transform of a set indicator.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{product_difference_counts, CountOptions};
use crate::error::{parse_err, Error, Result};
use crate::field::FieldContext;
use crate::rng::{keyed_hash, SeededRng};
use crate::sets::{gap_elements, GapSpec, ResidueSet, SparsePoly};

/// Default cap on tuples evaluated by [`multilinear_sum`].
pub const DEFAULT_SUM_BUDGET: u128 = 100_000_000;

/// Slack allowed on `|omega_i| <= 1` for rounding in user weights.
const WEIGHT_SLACK: f64 = 1e-12;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let (sum, comp) = *acc;
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    *acc = (t, comp + c);
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    pub value: Complex64,
    pub modulus: f64,
    pub tuples_evaluated: u128,
}

impl SumResult {
    fn new(value: Complex64, tuples_evaluated: u128) -> Self {
        SumResult {
            value,
            modulus: value.norm(),
            tuples_evaluated,
        }
    }
}

type WeightFn = Box<dyn Fn(&[u64]) -> Complex64 + Send + Sync>;

/// Weights `omega_1, ..., omega_n`; `omega_i` receives the whole tuple and
/// must ignore coordinate `i`.
pub struct WeightOracle {
    evaluators: Vec<WeightFn>,
}

impl fmt::Debug for WeightOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightOracle").field("arity", &self.arity()).finish()
    }
}

impl WeightOracle {
    pub fn new(evaluators: Vec<WeightFn>) -> Self {
        WeightOracle { evaluators }
    }

    pub fn arity(&self) -> usize {
        self.evaluators.len()
    }

    /// `omega_i(x)`, rejecting values outside the unit disc.
    pub fn evaluate(&self, i: usize, x: &[u64]) -> Result<Complex64> {
        let w = (self.evaluators[i])(x);
        let modulus = w.norm();
        if !(modulus <= 1.0 + WEIGHT_SLACK) {
            return Err(Error::WeightOutOfRange { index: i, modulus });
        }
        Ok(w)
    }

    /// Product `omega_1(x) ... omega_n(x)`.
    pub fn product(&self, x: &[u64]) -> Result<Complex64> {
        (0..self.arity()).try_fold(Complex64::new(1.0, 0.0), |acc, i| Ok(acc * self.evaluate(i, x)?))
    }

    /// Samples random tuples from `sets`, changes coordinate `i` alone and
    /// checks that `omega_i` does not move. Returns false on the first change.
    pub fn spot_check_invariance(&self, i: usize, sets: &[ResidueSet], samples: usize, seed: u64) -> bool {
        let mut rng = SeededRng::new(seed);
        if sets.len() != self.arity() || sets.iter().any(|s| s.is_empty()) {
            return false;
        }
        for _ in 0..samples {
            let mut x: Vec<u64> = sets
                .iter()
                .map(|s| s.elements()[rng.below(s.len() as u64) as usize])
                .collect();
            let before = (self.evaluators[i])(&x);
            let s = sets[i].elements();
            x[i] = s[rng.below(s.len() as u64) as usize];
            if (self.evaluators[i])(&x) != before {
                return false;
            }
        }
        true
    }
}

/// Weight selection for [`multilinear_sum`].
#[derive(Debug)]
pub enum Weights {
    Unit,
    /// Unit-modulus phases `omega_i(x) = e(theta)` with `theta` drawn from a
    /// keyed hash of `(i, x_j for j != i)` under the seed.
    SeededRandom(u64),
    Oracle(WeightOracle),
}

/// The phase used by [`Weights::SeededRandom`] for `omega_i(x)`.
pub fn random_phase(seed: u64, i: usize, x: &[u64]) -> Complex64 {
    let words = std::iter::once(i as u64).chain(
        x.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &v)| v),
    );
    let h = keyed_hash(seed, words);
    let theta = (h >> 11) as f64 / (1u64 << 53) as f64;
    Complex64::from_polar(1.0, TAU * theta)
}

impl Weights {
    fn product(&self, x: &[u64]) -> Result<Complex64> {
        match self {
            Weights::Unit => Ok(Complex64::new(1.0, 0.0)),
            Weights::SeededRandom(seed) => Ok((0..x.len())
                .map(|i| random_phase(*seed, i, x))
                .fold(Complex64::new(1.0, 0.0), |a, b| a * b)),
            Weights::Oracle(o) => o.product(x),
        }
    }
}

fn required_tuples(sets: &[ResidueSet]) -> u128 {
    sets.iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX)
}

/// `S = sum_{x in X_1 x ... x X_n} omega_1(x) ... omega_n(x) e_p(x_1 ... x_n)`
/// by full enumeration. Every set must avoid 0.
pub fn multilinear_sum(ctx: &FieldContext, sets: &[ResidueSet], weights: &Weights, budget: u128) -> Result<SumResult> {
    if sets.is_empty() {
        return Err(Error::InvalidArgument("a multilinear sum needs at least one set".into()));
    }
    for s in sets {
        s.check_modulus(ctx)?;
        if !s.zero_free() {
            return Err(Error::InvalidSet("multilinear sums need sets inside F_p^*".into()));
        }
    }
    if let Weights::Oracle(o) = weights {
        if o.arity() != sets.len() {
            return Err(Error::InvalidArgument(format!(
                "weight oracle has arity {}, but {} sets were given",
                o.arity(),
                sets.len()
            )));
        }
    }
    let required = required_tuples(sets);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    if required == 0 {
        return Ok(SumResult::new(Complex64::new(0.0, 0.0), 0));
    }
    let n = sets.len();
    // One compensated partial per x_1, combined in order.
    let partials = sets[0]
        .elements()
        .par_iter()
        .map(|&x1| {
            let mut acc = CompensatedSum::default();
            let mut x = vec![0u64; n];
            x[0] = x1;
            let mut idx = vec![0usize; n];
            let mut prods = vec![x1; n];
            for j in 1..n {
                x[j] = sets[j].elements()[0];
                prods[j] = ctx.mul(prods[j - 1], x[j]);
            }
            loop {
                let w = weights.product(&x)?;
                acc.add(w * ctx.e_p(prods[n - 1]));
                // Advance the odometer over coordinates 2..n.
                let mut j = n - 1;
                loop {
                    if j == 0 {
                        return Ok(acc.value());
                    }
                    idx[j] += 1;
                    if idx[j] < sets[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j -= 1;
                }
                for m in j..n {
                    x[m] = sets[m].elements()[idx[m]];
                    prods[m] = ctx.mul(prods[m - 1], x[m]);
                }
            }
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let value = partials.into_iter().collect::<CompensatedSum>().value();
    Ok(SumResult::new(value, required))
}

/// `sum_{x, y} alpha_x beta_y e_p(xy)` with weights listed in set order.
pub fn bilinear_sum(
    ctx: &FieldContext,
    xs: &ResidueSet,
    ys: &ResidueSet,
    alpha: &[Complex64],
    beta: &[Complex64],
) -> Result<SumResult> {
    xs.check_modulus(ctx)?;
    ys.check_modulus(ctx)?;
    if alpha.len() != xs.len() || beta.len() != ys.len() {
        return Err(Error::InvalidArgument("weight vectors must match the set sizes".into()));
    }
    let value = xs
        .elements()
        .iter()
        .zip(alpha)
        .map(|(&x, &a)| {
            let inner: CompensatedSum = ys
                .elements()
                .iter()
                .zip(beta)
                .map(|(&y, &b)| b * ctx.e_p(ctx.mul(x, y)))
                .collect();
            a * inner.value()
        })
        .collect::<CompensatedSum>()
        .value();
    Ok(SumResult::new(value, xs.len() as u128 * ys.len() as u128))
}

/// Seeded weights with `|w| <= 1` for bilinear experiments.
pub fn random_disc_weights(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = SeededRng::new(seed);
    (0..len)
        .map(|_| Complex64::from_polar(rng.unit_f64(), TAU * rng.unit_f64()))
        .collect()
}

/// `A(z) = sum_{a in A} e_p(az)` for every `z`.
pub fn fourier_transform(ctx: &FieldContext, set: &ResidueSet) -> Result<Vec<Complex64>> {
    set.check_modulus(ctx)?;
    Ok((0..ctx.p())
        .into_par_iter()
        .map(|z| {
            set.elements()
                .iter()
                .map(|&a| ctx.e_p(ctx.mul(a, z)))
                .collect::<CompensatedSum>()
                .value()
        })
        .collect())
}

/// `(sum_z |A(z)|, sum_z |A(z)|^2)`.
pub fn fourier_l1(ctx: &FieldContext, set: &ResidueSet) -> Result<(f64, f64)> {
    let hat = fourier_transform(ctx, set)?;
    let mut l1 = (0.0, 0.0);
    let mut l2 = (0.0, 0.0);
    for z in &hat {
        neumaier(&mut l1, z.norm());
        neumaier(&mut l2, z.norm_sqr());
    }
    Ok((l1.0 + l1.1, l2.0 + l2.1))
}

/// The inner quantity of the multilinear reduction:
/// `sum_{x_i != y_i, i >= 2} |sum_{x_1 in X_1} e_p(x_1 prod (x_i - y_i))|`,
/// computed from the counts of `prod (x_i - y_i)` on `X_2, ..., X_n`.
pub fn reduction_inner_sum(ctx: &FieldContext, sets: &[ResidueSet], options: &CountOptions) -> Result<f64> {
    if sets.len() < 2 {
        return Err(Error::InvalidArgument("the reduction needs at least two sets".into()));
    }
    let counts = product_difference_counts(ctx, &sets[1..], options)?;
    let hat = fourier_transform(ctx, &sets[0])?;
    let terms = counts
        .nonzero
        .counts()
        .iter()
        .zip(&hat)
        .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
        .map(|(c, h)| Complex64::new(c.to_f64().unwrap_or(f64::INFINITY) * h.norm(), 0.0));
    Ok(terms.collect::<CompensatedSum>().value().re)
}

/// `T_chi(Psi) = sum_{x in F_p^*} chi_j(x) e_p(Psi(x))`.
pub fn mordell_sum(ctx: &FieldContext, poly: &SparsePoly, chi_index: u64) -> Result<SumResult> {
    poly.check_field(ctx)?;
    if chi_index >= ctx.order() {
        return Err(Error::InvalidArgument(format!(
            "character index {chi_index} is outside 0..{}",
            ctx.order()
        )));
    }
    let value = (1..ctx.p())
        .map(|x| ctx.chi_or_zero(chi_index, x) * ctx.e_p(poly.eval(ctx, x)))
        .collect::<CompensatedSum>()
        .value();
    Ok(SumResult::new(value, ctx.order() as u128))
}

/// Dense polynomial `b_0 + b_1 X + ... + b_d X^d`, literal `b0,b1,...,bd`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensePoly {
    coeffs: Vec<u64>,
}

impl DensePoly {
    pub fn new(coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("polynomial has no coefficients".into()));
        }
        Ok(DensePoly { coeffs })
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Formal degree: the index of the last coefficient given.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, ctx: &FieldContext, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &b| ctx.add(ctx.mul(acc, x), b % ctx.p()))
    }
}

impl FromStr for DensePoly {
    type Err = Error;
    fn from_str(input: &str) -> Result<Self> {
        let coeffs = input
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| parse_err("dense polynomial", input, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        DensePoly::new(coeffs)
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSum {
    pub sum: SumResult,
    pub proper: bool,
}

/// `sum_{a in A} e_p(F(a))` over the distinct elements of a GAP. An improper
/// GAP is still summed; `proper` reports which case applied.
pub fn weyl_gap_sum(ctx: &FieldContext, gap: &GapSpec, poly: &DensePoly) -> Result<GapSum> {
    if poly.degree() < 1 {
        return Err(Error::InvalidArgument("polynomial degree must be at least 1".into()));
    }
    let (set, proper) = gap_elements(ctx, gap)?;
    if !proper {
        log::warn!("GAP {gap:?} is not proper; summing over its distinct elements");
    }
    let value = set
        .elements()
        .iter()
        .map(|&a| ctx.e_p(poly.eval(ctx, a)))
        .collect::<CompensatedSum>()
        .value();
    Ok(GapSum {
        sum: SumResult::new(value, set.len() as u128),
        proper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::Engine;
    use crate::sets::{build_set, random_set, SetDescriptor};
    use approx::assert_relative_eq;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    fn set(c: &FieldContext, d: &str) -> ResidueSet {
        build_set(c, &d.parse::<SetDescriptor>().unwrap()).unwrap()
    }

    fn naive_e(p: u64, u: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * (u % p) as f64 / p as f64)
    }

    #[test]
    fn full_group_bilinear_is_minus_four() {
        let c = ctx(5);
        let x = set(&c, "interval:1..4");
        let s = multilinear_sum(&c, &[x.clone(), x], &Weights::Unit, DEFAULT_SUM_BUDGET).unwrap();
        assert_relative_eq!(s.value.re, -4.0, epsilon = 1e-12);
        assert!(s.value.im.abs() < 1e-12);
        assert_eq!(s.tuples_evaluated, 16);
    }

    #[test]
    fn triple_sum_matches_direct_loop() {
        let c = ctx(7);
        let x = set(&c, "explicit:1,2");
        let s = multilinear_sum(&c, &[x.clone(), x.clone(), x], &Weights::Unit, DEFAULT_SUM_BUDGET).unwrap();
        let mut expected = Complex64::new(0.0, 0.0);
        for a in [1u64, 2] {
            for b in [1u64, 2] {
                for d in [1u64, 2] {
                    expected += naive_e(7, a * b * d);
                }
            }
        }
        assert_relative_eq!(s.value.re, expected.re, epsilon = 1e-12);
        assert_relative_eq!(s.value.im, expected.im, epsilon = 1e-12);
    }

    #[test]
    fn zero_weight_gives_zero_and_bad_weight_is_rejected() {
        let c = ctx(11);
        let x = set(&c, "interval:1..5");
        let zero: Vec<WeightFn> = vec![Box::new(|_| Complex64::new(0.0, 0.0)), Box::new(|_| Complex64::new(1.0, 0.0))];
        let s = multilinear_sum(&c, &[x.clone(), x.clone()], &Weights::Oracle(WeightOracle::new(zero)), 1000).unwrap();
        assert_eq!(s.modulus, 0.0);
        let big: Vec<WeightFn> = vec![Box::new(|_| Complex64::new(2.0, 0.0)), Box::new(|_| Complex64::new(1.0, 0.0))];
        let err = multilinear_sum(&c, &[x.clone(), x], &Weights::Oracle(WeightOracle::new(big)), 1000).unwrap_err();
        assert!(matches!(err, Error::WeightOutOfRange { index: 0, .. }));
    }

    #[test]
    fn rejects_zero_and_budget() {
        let c = ctx(7);
        let with_zero = set(&c, "interval:0..3");
        let x = set(&c, "interval:1..3");
        assert!(matches!(
            multilinear_sum(&c, &[with_zero, x.clone()], &Weights::Unit, 100),
            Err(Error::InvalidSet(_))
        ));
        assert_eq!(
            multilinear_sum(&c, &[x.clone(), x.clone(), x], &Weights::Unit, 26).unwrap_err(),
            Error::BudgetExceeded { required: 27, budget: 26 }
        );
    }

    #[test]
    fn random_weights_ignore_own_coordinate_and_are_reproducible() {
        let c = ctx(13);
        let sets: Vec<ResidueSet> = (0..3).map(|i| random_set(&c, 5, i, true).unwrap()).collect();
        let evals: Vec<WeightFn> = (0..3)
            .map(|i| Box::new(move |x: &[u64]| random_phase(99, i, x)) as WeightFn)
            .collect();
        let oracle = WeightOracle::new(evals);
        for i in 0..3 {
            assert!(oracle.spot_check_invariance(i, &sets, 50, 5));
        }
        let a = multilinear_sum(&c, &sets, &Weights::SeededRandom(99), 1000).unwrap();
        let b = multilinear_sum(&c, &sets, &Weights::Oracle(oracle), 1000).unwrap();
        assert_eq!(a.value, b.value);
        assert!(a.modulus <= 125.0);
    }

    #[test]
    fn spot_check_catches_dependence() {
        let c = ctx(13);
        let sets: Vec<ResidueSet> = (0..2).map(|i| random_set(&c, 6, i, true).unwrap()).collect();
        let evals: Vec<WeightFn> = vec![
            Box::new(|x: &[u64]| Complex64::from_polar(1.0, x[0] as f64)),
            Box::new(|_| Complex64::new(1.0, 0.0)),
        ];
        assert!(!WeightOracle::new(evals).spot_check_invariance(0, &sets, 50, 1));
    }

    #[test]
    fn dilation_invariance() {
        let c = ctx(31);
        let x = random_set(&c, 7, 4, true).unwrap();
        let y = random_set(&c, 9, 5, true).unwrap();
        let base = multilinear_sum(&c, &[x.clone(), y.clone()], &Weights::Unit, 1000).unwrap();
        let k = 3;
        let moved = multilinear_sum(
            &c,
            &[x.dilate(&c, k).unwrap(), y.dilate(&c, c.inverse(k).unwrap()).unwrap()],
            &Weights::Unit,
            1000,
        )
        .unwrap();
        assert_relative_eq!(base.value.re, moved.value.re, epsilon = 1e-9);
        assert_relative_eq!(base.value.im, moved.value.im, epsilon = 1e-9);
    }

    #[test]
    fn mordell_examples() {
        let c = ctx(5);
        let lin = SparsePoly::monomial(3, 1).unwrap();
        assert_relative_eq!(mordell_sum(&c, &lin, 0).unwrap().value.re, -1.0, epsilon = 1e-12);
        let sq = SparsePoly::monomial(1, 2).unwrap();
        let s = mordell_sum(&c, &sq, 0).unwrap();
        assert_relative_eq!(s.value.re, 4.0 * (TAU / 5.0).cos(), epsilon = 1e-12);
        assert_relative_eq!(s.value.re, 1.2361, epsilon = 1e-4);

        let c = ctx(101);
        let t = mordell_sum(&c, &"1:3,1:5".parse().unwrap(), 1).unwrap();
        assert!(t.modulus <= 5.0 * 101f64.sqrt());
        // Independent loop on the same instance.
        let g = c.generator();
        let mut direct = Complex64::new(0.0, 0.0);
        let mut x = 1u64;
        for a in 0..100u64 {
            let chi = Complex64::from_polar(1.0, TAU * a as f64 / 100.0);
            direct += chi * naive_e(101, (x.pow(3) + x.pow(5) % 101) % 101);
            x = x * g % 101;
        }
        assert_relative_eq!(t.value.re, direct.re, epsilon = 1e-9);
        assert_relative_eq!(t.value.im, direct.im, epsilon = 1e-9);
    }

    #[test]
    fn exponent_collapse() {
        let c = ctx(13);
        let b = 4;
        let s = mordell_sum(&c, &SparsePoly::monomial(b, 12).unwrap(), 0).unwrap();
        let expected = c.e_p(b) * 12.0;
        assert_relative_eq!(s.value.re, expected.re, epsilon = 1e-9);
        assert_relative_eq!(s.value.im, expected.im, epsilon = 1e-9);
    }

    #[test]
    fn gap_weyl_sums() {
        let c = ctx(101);
        let gap = GapSpec::new(0, vec![1, 10], vec![3, 3]).unwrap();
        let f: DensePoly = "0,0,1".parse().unwrap();
        let got = weyl_gap_sum(&c, &gap, &f).unwrap();
        assert!(got.proper);
        let mut expected = Complex64::new(0.0, 0.0);
        for h1 in 1..=3u64 {
            for h2 in 1..=3u64 {
                let a = h1 + 10 * h2;
                expected += naive_e(101, a * a);
            }
        }
        assert_relative_eq!(got.sum.value.re, expected.re, epsilon = 1e-9);
        assert_relative_eq!(got.sum.value.im, expected.im, epsilon = 1e-9);

        let constant = weyl_gap_sum(&c, &gap, &"7,0".parse().unwrap()).unwrap();
        assert_relative_eq!(constant.sum.value.re, 9.0 * c.e_p(7).re, epsilon = 1e-9);
    }

    #[test]
    fn narrow_arc_is_sharp() {
        let c = ctx(10007);
        let len = ((10007f64).sqrt() / 10.0).floor() as u64;
        let gap = GapSpec::new(0, vec![1], vec![len]).unwrap();
        let got = weyl_gap_sum(&c, &gap, &"0,0,1".parse().unwrap()).unwrap();
        assert!(got.sum.modulus >= 0.9 * len as f64);
    }

    #[test]
    fn fourier_edge_cases_and_parseval() {
        let c = ctx(13);
        let (l1, l2) = fourier_l1(&c, &set(&c, "interval:0..12")).unwrap();
        assert_relative_eq!(l1, 13.0, epsilon = 1e-9);
        assert_relative_eq!(l2, 169.0, epsilon = 1e-9);
        let (l1, _) = fourier_l1(&c, &set(&c, "explicit:0")).unwrap();
        assert_relative_eq!(l1, 13.0, epsilon = 1e-9);
        for seed in 0..10 {
            let a = random_set(&c, 1 + seed % 12, seed, false).unwrap();
            let (_, l2) = fourier_l1(&c, &a).unwrap();
            assert_relative_eq!(l2, 13.0 * a.len() as f64, max_relative = 1e-9);
        }
    }

    #[test]
    fn vinogradov_on_random_weights() {
        let c = ctx(61);
        for seed in 0..20 {
            let x = random_set(&c, 5 + seed % 20, seed, false).unwrap();
            let y = random_set(&c, 3 + seed % 30, seed + 100, false).unwrap();
            let a = random_disc_weights(x.len(), seed);
            let b = random_disc_weights(y.len(), seed + 1);
            let s = bilinear_sum(&c, &x, &y, &a, &b).unwrap();
            let na: f64 = a.iter().map(|w| w.norm_sqr()).sum();
            let nb: f64 = b.iter().map(|w| w.norm_sqr()).sum();
            assert!(s.modulus <= (61.0 * na * nb).sqrt() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn reduction_inner_sum_matches_enumeration() {
        let c = ctx(11);
        let sets: Vec<ResidueSet> = (0..3).map(|i| random_set(&c, 4, 20 + i, false).unwrap()).collect();
        let fast = reduction_inner_sum(&c, &sets, &CountOptions::with_engine(Engine::Ntt)).unwrap();
        let mut slow = 0.0;
        for &x2 in sets[1].elements() {
            for &y2 in sets[1].elements() {
                for &x3 in sets[2].elements() {
                    for &y3 in sets[2].elements() {
                        if x2 == y2 || x3 == y3 {
                            continue;
                        }
                        let lambda = c.mul(c.sub(x2, y2), c.sub(x3, y3));
                        let inner: Complex64 = sets[0].elements().iter().map(|&x1| naive_e(11, x1 * lambda)).sum();
                        slow += inner.norm();
                    }
                }
            }
        }
        assert_relative_eq!(fast, slow, max_relative = 1e-9);
    }

    #[test]
    fn dense_poly_literal_round_trip() {
        let f: DensePoly = "1,2,3".parse().unwrap();
        assert_eq!(f.to_string(), "1,2,3");
        assert_eq!(f.degree(), 2);
        assert_eq!(f.eval(&ctx(7), 2), (1 + 4 + 12) % 7);
        assert!("1,x".parse::<DensePoly>().is_err());
    }
}
