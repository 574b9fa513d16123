//! Explicit bound formulas. Implied constants are 1, `o(1)` terms are 0 and
//! `log` is the natural logarithm throughout; every result says so in
//! `dropped_terms`.
//!
//! Sizes are reals so sweeps can evaluate at `p^theta` grid points. Exponent
//! algebra is done in exact rationals and converted to `f64` only at the
//! final `powf`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::sets::{gcd_parameters, SparsePoly};

pub const DROPPED_TERMS: &str = "implied constant = 1, o(1) = 0, log = natural";

/// Exponent quoted in the literature for the six-variable, equal-size,
/// smallest-case instance of the general multilinear bound. It disagrees
/// with [`thm_1_1_exponents`]; both are reported, neither is corrected.
pub const QUOTED_N6_X_EXPONENT: (i64, i64) = (3_110_399, 524_288);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub ok: bool,
}

/// Whether a value bounds `D_k^x - A^{4k}/p` or `D_k^x` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    Error,
    Total,
}

/// `p^a X^b` exponents of a bound's `p`-term at equal sizes `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub p_exponent: BigRational,
    pub x_exponent: BigRational,
    /// `n - x_exponent`: the saving over the trivial bound in `X`.
    pub deficit: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    pub case_label: String,
    pub hypotheses: Vec<Hypothesis>,
    pub dropped_terms: String,
    /// Named additive contributions to `value`.
    pub terms: Vec<(String, f64)>,
    /// `A^{4k}/p` for the energy regimes.
    pub main_term: Option<f64>,
    pub target: Target,
    pub exponents: Option<ExponentReport>,
    pub notes: Vec<String>,
}

impl BoundResult {
    fn new(case_label: impl Into<String>, terms: Vec<(String, f64)>) -> Self {
        BoundResult {
            value: terms.iter().map(|t| t.1).sum(),
            case_label: case_label.into(),
            hypotheses: Vec::new(),
            dropped_terms: DROPPED_TERMS.into(),
            terms,
            main_term: None,
            target: Target::Total,
            exponents: None,
            notes: Vec::new(),
        }
    }

    fn hypothesis(mut self, name: impl Into<String>, ok: bool) -> Self {
        self.hypotheses.push(Hypothesis { name: name.into(), ok });
        self
    }

    pub fn hypotheses_ok(&self) -> bool {
        self.hypotheses.iter().all(|h| h.ok)
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.0 == name).map(|t| t.1)
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(e: u32) -> i64 {
    1i64 << e
}

fn powq(x: f64, e: &BigRational) -> f64 {
    x.powf(e.to_f64().expect("finite exponent"))
}

/// `log x` with the guard `log x := 0` for `x < 2`.
pub fn guarded_ln(x: f64) -> f64 {
    if x < 2.0 {
        0.0
    } else {
        x.ln()
    }
}

fn check_sizes(sizes: &[f64]) -> Result<()> {
    if sizes.iter().any(|&x| !(x >= 1.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument("sizes must be finite and at least 1".into()));
    }
    Ok(())
}

fn check_sorted(sizes: &[f64]) -> Result<()> {
    check_sizes(sizes)?;
    if sizes.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("sizes must be sorted in non-increasing order".into()));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("modulus {p} must be at least 2")));
    }
    Ok(())
}

/// `sqrt(p X_1 X_2)`.
pub fn vinogradov_bound(p: f64, x1: f64, x2: f64) -> Result<BoundResult> {
    check_p(p)?;
    check_sizes(&[x1, x2])?;
    Ok(BoundResult::new("single", vec![("p-term".into(), (p * x1 * x2).sqrt())])
        .hypothesis("nontrivial: X_1 X_2 > p", x1 * x2 > p))
}

/// Threshold between the first and second case of the middle-variable
/// factor in the general multilinear bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CaseThreshold {
    /// `p^{217/433}`, the value in the theorem statement.
    #[default]
    Theorem,
    /// `p^{2846/4991}`, the range of the underlying energy estimate.
    Energy,
}

impl CaseThreshold {
    pub fn exponent(self) -> BigRational {
        match self {
            CaseThreshold::Theorem => q(217, 433),
            CaseThreshold::Energy => q(2846, 4991),
        }
    }
}

/// Cases of the middle-variable factor `B_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MiddleCase {
    Case1,
    Case2,
    Case3,
}

impl MiddleCase {
    pub fn label(self) -> &'static str {
        match self {
            MiddleCase::Case1 => "case1",
            MiddleCase::Case2 => "case2",
            MiddleCase::Case3 => "case3",
        }
    }
}

impl FromStr for MiddleCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "case1" => Ok(MiddleCase::Case1),
            "case2" => Ok(MiddleCase::Case2),
            "case3" => Ok(MiddleCase::Case3),
            other => Err(Error::Unknown {
                kind: "case",
                name: other.into(),
                known: "case1, case2, case3".into(),
            }),
        }
    }
}

const C1: (i64, i64) = (1, 434);
const C2: (i64, i64) = (1, 192);

/// `p^{1/2 + 1/(2^{n-1} + 2)}` exponent: the top of the first case.
fn middle_ceiling(n: u32) -> BigRational {
    q(1, 2) + q(1, pow2(n - 1) + 2)
}

/// `(p, X)` exponents of `B_n` in the given case.
fn middle_exponents(n: u32, case: MiddleCase) -> (BigRational, BigRational) {
    let den = pow2(2 * n - 3) * (n as i64 - 2);
    let base = BigRational::from_integer(BigInt::from(pow2(n - 2)));
    match case {
        MiddleCase::Case1 => (q(1, den), -(base + BigRational::one()) / BigInt::from(den)),
        MiddleCase::Case2 => (
            BigRational::zero(),
            -(base - BigRational::one() + q(2 * C1.0, C1.1)) / BigInt::from(den),
        ),
        MiddleCase::Case3 => (
            BigRational::zero(),
            -(base - BigRational::one() + q(2 * C2.0, C2.1)) / BigInt::from(den),
        ),
    }
}

fn middle_case(p: f64, x: f64, threshold: CaseThreshold) -> MiddleCase {
    if x >= powq(p, &threshold.exponent()) {
        MiddleCase::Case1
    } else if x >= powq(p, &q(48, 97)) {
        MiddleCase::Case2
    } else {
        MiddleCase::Case3
    }
}

/// Exact exponents of the `p`-term of the general multilinear bound at equal
/// sizes with every middle variable in `case`.
pub fn thm_1_1_exponents(n: u32, case: MiddleCase) -> Result<ExponentReport> {
    if n < 3 {
        return Err(Error::InvalidArgument("the middle-variable factor needs n >= 3".into()));
    }
    let (bp, bx) = middle_exponents(n, case);
    let middle = BigInt::from(n - 2);
    let p_exponent = q(1, pow2(n)) + bp * &middle;
    let n_q = BigRational::from_integer(BigInt::from(n));
    let x_exponent = &n_q - q(1, pow2(n)) - q(1, pow2(n + 1)) + bx * &middle;
    let deficit = n_q - &x_exponent;
    Ok(ExponentReport {
        p_exponent,
        x_exponent,
        deficit,
    })
}

/// The general multilinear bound for `n >= 4` sorted sizes.
pub fn thm_multlin2_bound(p: f64, sizes: &[f64], threshold: CaseThreshold) -> Result<BoundResult> {
    check_p(p)?;
    check_sorted(sizes)?;
    let n = sizes.len();
    if n < 3 {
        return Err(Error::InvalidArgument("the general multilinear bound needs n >= 3 sizes".into()));
    }
    let nu = n as u32;
    let prod: f64 = sizes.iter().product();
    let ceiling = powq(p, &middle_ceiling(nu));
    let mut cases = Vec::with_capacity(n - 2);
    let mut factor = 1.0;
    for &x in &sizes[1..n - 1] {
        let case = middle_case(p, x, threshold);
        let (bp, bx) = middle_exponents(nu, case);
        factor *= powq(p, &bp) * powq(x, &bx);
        cases.push(case);
    }
    let mut terms: Vec<(String, f64)> = sizes
        .iter()
        .enumerate()
        .map(|(i, &x)| (format!("X_{}-term", i + 1), prod * x.powf(-1.0 / pow2(i as u32 + 1) as f64)))
        .collect();
    let p_term = prod
        * p.powf(1.0 / pow2(nu) as f64)
        * sizes[0].powf(-1.0 / pow2(nu) as f64)
        * sizes[n - 1].powf(-1.0 / pow2(nu + 1) as f64)
        * factor;
    terms.push(("p-term".into(), p_term));
    let uniform = cases.windows(2).all(|w| w[0] == w[1]);
    let label = if uniform {
        cases[0].label().to_string()
    } else {
        let parts: Vec<&str> = cases.iter().map(|c| c.label()).collect();
        format!("mixed:{}", parts.join(","))
    };
    let mut result = BoundResult::new(label, terms)
        .hypothesis("n >= 4", n >= 4)
        .hypothesis("X_1 X_n^{1/2} <= p", sizes[0] * sizes[n - 1].sqrt() <= p)
        .hypothesis(
            "middle sizes at most p^{1/2 + 1/(2^{n-1} + 2)}",
            sizes[1..n - 1].iter().all(|&x| x <= ceiling),
        );
    if sizes.windows(2).all(|w| w[0] == w[1]) {
        result.exponents = Some(thm_1_1_exponents(nu, cases[0])?);
    }
    if threshold == CaseThreshold::Energy {
        result.notes.push("first case starts at p^{2846/4991}".into());
    }
    Ok(result)
}

/// The multilinear bound for sizes a little above `p^{1/2}`.
pub fn thm_multlin3_bound(p: f64, sizes: &[f64]) -> Result<BoundResult> {
    check_p(p)?;
    check_sorted(sizes)?;
    let n = sizes.len() as u32;
    if n < 2 {
        return Err(Error::InvalidArgument("the bound needs n >= 2 sizes".into()));
    }
    let prod: f64 = sizes.iter().product();
    let mut terms: Vec<(String, f64)> = sizes
        .iter()
        .enumerate()
        .map(|(i, &x)| (format!("X_{}-term", i + 1), prod * x.powf(-1.0 / pow2(i as u32 + 1) as f64)))
        .collect();
    let mean = prod.powf(1.0 / n as f64);
    terms.push(("p-term".into(), prod * (p.sqrt() / mean).powf(1.0 / pow2(n) as f64)));
    let floor = powq(p, &(q(1, 2) + q(1, pow2(n + 1) - 6)));
    Ok(BoundResult::new("single", terms)
        .hypothesis("X_i >= p^{1/2 + 1/(2^{n+1} - 6)}", sizes.iter().all(|&x| x >= floor)))
}

/// Size split for the subgroup formulas: `x >= p^{1/2} log p`.
fn large(p: f64, x: f64) -> bool {
    x >= p.sqrt() * p.ln()
}

/// The multinomial bound. Returns the bound on `|T_chi(Psi)|`.
pub fn multinomial_bound(p: u64, exponents: &[u64]) -> Result<BoundResult> {
    let t = exponents.len();
    if t < 2 {
        return Err(Error::InvalidArgument("the multinomial bound needs t >= 2 terms".into()));
    }
    if !is_prime(p) || p < 3 {
        return Err(Error::InvalidModulus { p, reason: "modulus is not an odd prime" });
    }
    let params = gcd_parameters(p, exponents)?;
    let order = params.beta_order();
    let betas: Vec<f64> = order.iter().map(|&i| params.betas[i] as f64).collect();
    let alpha = params.alpha_last() as f64;
    let pf = p as f64;
    let tu = t as u32;

    let mut terms = vec![("alpha-term".into(), pf * (alpha / (pf - 1.0)).sqrt())];
    for (i, &b) in betas.iter().enumerate() {
        terms.push((format!("beta_{}-term", i + 1), pf * b.powf(-1.0 / pow2(i as u32 + 2) as f64)));
    }
    let (c_value, c_label) = if large(pf, alpha) {
        let e = 3.0 / pow2(tu + 1) as f64;
        (alpha.powf(e) * pf.powf(-e), "C=large")
    } else {
        (alpha.powf(1.0 / pow2(tu + 1) as f64) * pf.powf(-1.0 / pow2(tu) as f64), "C=small")
    };
    let mut d_labels = Vec::new();
    let mut d_product = 1.0;
    for &b in &betas[..t - 2] {
        let tm2 = (t - 2) as f64;
        if large(pf, b) {
            d_product *= pf.powf(-1.0 / (pow2(tu) as f64 * tm2));
            d_labels.push("large");
        } else {
            d_product *= b.powf(-1.0 / (pow2(tu - 1) as f64 * tm2));
            d_labels.push("small");
        }
    }
    terms.push(("p-term".into(), pf * pf.powf(1.0 / pow2(tu) as f64) * c_value * d_product));
    let label = if d_labels.is_empty() {
        c_label.to_string()
    } else {
        format!("{c_label};D={}", d_labels.join(","))
    };
    let mut result = BoundResult::new(label, terms).hypothesis("t >= 2", true);
    result.notes.push(format!(
        "alpha = {:?}, beta = {:?}, beta order {:?}",
        params.alphas, params.betas, order
    ));
    Ok(result)
}

/// Regimes of the `D_k^x` estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DkRegime {
    /// Energy form with `log^4 A`, `E^+` measured or `A^3`.
    ShkredovEnergy,
    /// Small sets, `c = 1/434`, `A <= p^{2846/4991}`.
    ShkredovSmall1,
    /// Small sets, `c = 1/192`, `A <= p^{48/97}`.
    ShkredovSmall2,
    /// Collinear-triples estimate and its `k >= 3` corollary.
    Collinear,
    /// Recursion in `D_{k-1}^x` with `log^2 A`.
    Recursion,
    /// Recursion in the error `D_{k-1}^x - A^{4k-4}/p`.
    RecursionShkredov,
    /// Incidence form for `k = 2`.
    Incidence,
    /// Sets with `A >= p^{1/2}`.
    LargeSet,
    /// `A^{4k-2} log^4 A` above `p^{1/2 + 1/(2^{k+1} - 6)}`, `k >= 3`.
    Sharp,
    /// Multiplicative subgroups.
    Subgroup,
}

const DK_REGIMES: [(&str, DkRegime); 10] = [
    ("shkredov-energy", DkRegime::ShkredovEnergy),
    ("shkredov-small-1", DkRegime::ShkredovSmall1),
    ("shkredov-small-2", DkRegime::ShkredovSmall2),
    ("collinear", DkRegime::Collinear),
    ("recursion", DkRegime::Recursion),
    ("recursion-shkredov", DkRegime::RecursionShkredov),
    ("incidence", DkRegime::Incidence),
    ("large-set", DkRegime::LargeSet),
    ("sharp", DkRegime::Sharp),
    ("subgroup", DkRegime::Subgroup),
];

impl DkRegime {
    pub fn name(self) -> &'static str {
        DK_REGIMES.iter().find(|r| r.1 == self).expect("listed").0
    }

    /// Whether the formula carries a power of `log A`.
    pub fn uses_log(self) -> bool {
        !matches!(self, DkRegime::Collinear | DkRegime::Subgroup)
    }

    /// Whether the regime needs a measured `E^+(A)` to be exact (otherwise
    /// `A^3` is substituted).
    pub fn uses_energy(self) -> bool {
        matches!(self, DkRegime::ShkredovEnergy | DkRegime::Incidence | DkRegime::LargeSet)
    }

    pub fn needs_previous(self) -> bool {
        matches!(self, DkRegime::Recursion | DkRegime::RecursionShkredov)
    }
}

impl FromStr for DkRegime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DK_REGIMES
            .iter()
            .find(|r| r.0 == s)
            .map(|r| r.1)
            .ok_or_else(|| Error::Unknown {
                kind: "D_k regime",
                name: s.into(),
                known: DK_REGIMES.iter().map(|r| r.0).collect::<Vec<_>>().join(", "),
            })
    }
}

impl fmt::Display for DkRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Measured inputs some regimes consume.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DkInputs {
    /// `E^+(A)`; `A^3` when absent.
    pub energy: Option<f64>,
    /// `D_{k-1}^x(A)` for the recursion regimes.
    pub previous: Option<f64>,
}

/// Bound for `D_k^x(A)` in the selected regime. `target` says whether it
/// bounds the error `D_k^x - A^{4k}/p` or `D_k^x` itself.
pub fn dk_error_bound(p: f64, a: f64, k: u32, regime: DkRegime, inputs: DkInputs) -> Result<BoundResult> {
    check_p(p)?;
    check_sizes(&[a])?;
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let kf = k as f64;
    let ln = guarded_ln(a);
    let energy = inputs.energy.unwrap_or(a.powi(3));
    let neg = |e: i32| 2f64.powi(e);
    let k_at_least_2 = ("k >= 2", k >= 2);
    let (label, terms, hyps, target): (&str, Vec<(String, f64)>, Vec<(&str, bool)>, Target) = match regime {
        DkRegime::ShkredovEnergy => (
            "single",
            vec![("error".into(), ln.powi(4) * a.powf(4.0 * kf - 2.0 - neg(2 - k as i32)) * energy.powf(neg(1 - k as i32)))],
            vec![k_at_least_2],
            Target::Error,
        ),
        DkRegime::ShkredovSmall1 | DkRegime::ShkredovSmall2 => {
            let (c, ceiling, name) = if regime == DkRegime::ShkredovSmall1 {
                (1.0 / 434.0, powq(p, &q(2846, 4991)), "A <= p^{2846/4991}")
            } else {
                (1.0 / 192.0, powq(p, &q(48, 97)), "A <= p^{48/97}")
            };
            let e = 4.0 * kf - 2.0 + neg(1 - k as i32) - c * neg(2 - k as i32);
            (
                "single",
                vec![("error".into(), ln.powi(4) * a.powf(e))],
                vec![k_at_least_2, (name, a <= ceiling)],
                Target::Error,
            )
        }
        DkRegime::Collinear => {
            if k == 2 {
                ("k=2", vec![("error".into(), p.sqrt() * a.powf(5.5))], vec![k_at_least_2], Target::Error)
            } else {
                // The corollary carries log^4 A; it is zero below the guard.
                let lnk = guarded_ln(a);
                (
                    "k>=3",
                    vec![("error".into(), p.powf(neg(1 - k as i32)) * lnk.powi(4) * a.powf(4.0 * kf - 2.0 - neg(1 - k as i32)))],
                    vec![k_at_least_2],
                    Target::Error,
                )
            }
        }
        DkRegime::Recursion => {
            let prev = inputs
                .previous
                .ok_or_else(|| Error::InvalidArgument("the recursion regime needs a measured D_{k-1}".into()))?;
            let l2 = ln.powi(2);
            (
                "single",
                vec![
                    ("A^{4k-2}".into(), a.powf(4.0 * kf - 2.0) * l2),
                    ("p A^{4k-4}".into(), p * a.powf(4.0 * kf - 4.0) * l2),
                    ("p^{1/2} A^{2k} D_{k-1}^{1/2}".into(), p.sqrt() * a.powf(2.0 * kf) * prev.sqrt() * l2),
                ],
                vec![k_at_least_2],
                Target::Error,
            )
        }
        DkRegime::RecursionShkredov => {
            let prev = inputs
                .previous
                .ok_or_else(|| Error::InvalidArgument("the recursion regime needs a measured D_{k-1}".into()))?;
            let prev_error = (prev - a.powf(4.0 * (kf - 1.0)) / p).abs();
            (
                "single",
                vec![("error".into(), ln.powi(2) * a.powf(2.0 * kf + 1.0) * prev_error.sqrt())],
                vec![k_at_least_2],
                Target::Error,
            )
        }
        DkRegime::Incidence => {
            let l2 = ln.powi(2);
            (
                "k=2",
                vec![
                    ("A^6".into(), a.powi(6) * l2),
                    ("p^{1/2} A^4 E^{1/2}".into(), p.sqrt() * a.powi(4) * energy.sqrt() * l2),
                    ("p A^4".into(), p * a.powi(4) * l2),
                ],
                vec![("k = 2", k == 2)],
                Target::Error,
            )
        }
        DkRegime::LargeSet => {
            let l4 = ln.powi(4);
            let w = neg(1 - k as i32);
            (
                "single",
                vec![
                    ("A^{4k-2}".into(), a.powf(4.0 * kf - 2.0) * l4),
                    ("energy".into(), p.powf(1.0 - w) * a.powf(4.0 * kf - 4.0) * energy.powf(w) * l4),
                ],
                vec![("A >= p^{1/2}", a >= p.sqrt())],
                Target::Error,
            )
        }
        DkRegime::Sharp => {
            let floor = if k >= 2 {
                powq(p, &(q(1, 2) + q(1, pow2(k + 1) - 6)))
            } else {
                f64::INFINITY
            };
            (
                "single",
                vec![("error".into(), a.powf(4.0 * kf - 2.0) * ln.powi(4))],
                vec![("k >= 3", k >= 3), ("A >= p^{1/2 + 1/(2^{k+1} - 6)}", a >= floor)],
                Target::Error,
            )
        }
        DkRegime::Subgroup => {
            let divides = a.fract() == 0.0 && (p - 1.0) % a == 0.0;
            if k == 2 {
                let (label, value) = if a >= p.powf(2.0 / 3.0) {
                    ("G>=p^{2/3}", p.sqrt() * a.powf(5.5))
                } else if large(p, a) {
                    ("mid", a.powi(7) / p.sqrt())
                } else {
                    ("G<p^{1/2}log p", a.powi(6) * guarded_ln(a))
                };
                (label, vec![("error".into(), value)], vec![("G divides p - 1", divides)], Target::Error)
            } else {
                let (label, value) = if large(p, a) {
                    ("G>=p^{1/2}log p", a.powf(4.0 * kf) / p)
                } else {
                    ("G<p^{1/2}log p", a.powf(4.0 * kf - 2.0))
                };
                (
                    label,
                    vec![("total".into(), value)],
                    vec![("G divides p - 1", divides), k_at_least_2],
                    Target::Total,
                )
            }
        }
    };
    let mut result = BoundResult::new(label, terms);
    for (name, ok) in hyps {
        result = result.hypothesis(name, ok);
    }
    result.target = target;
    result.main_term = Some(a.powf(4.0 * kf) / p);
    if regime.uses_energy() && inputs.energy.is_none() {
        result.notes.push("E^+(A) = A^3".into());
    }
    if regime.uses_log() && a < 2.0 {
        result.notes.push("log A = 0 for A < 2".into());
    }
    Ok(result)
}

/// Bound for `N(X, Y, Z)`. In subgroup mode the sizes are `(H, G, G)`.
pub fn n_bound(p: f64, x: f64, y: f64, z: f64, subgroup_mode: bool) -> Result<BoundResult> {
    check_p(p)?;
    check_sizes(&[x, y, z])?;
    if subgroup_mode {
        let (h, g) = (x, y);
        let (label, value) = if large(p, g) {
            ("G>=p^{1/2}log p", h * h * g.powf(3.5) / p.sqrt())
        } else {
            ("G<p^{1/2}log p", h * h * g.powf(2.5))
        };
        return Ok(BoundResult::new(label, vec![("total".into(), value)])
            .hypothesis("Y = Z = G", y == z)
            .hypothesis("G >= H", g >= h));
    }
    let m = x.max(y).max(z);
    let xyz = x * y * z;
    Ok(BoundResult::new(
        "single",
        vec![
            ("X^2Y^2Z^2/p".into(), xyz * xyz / p),
            ("(XYZ)^{3/2}".into(), xyz.powf(1.5)),
            ("M XYZ".into(), m * xyz),
        ],
    )
    .hypothesis("sizes <= p - 1", m <= p - 1.0))
}

/// The multilinear bound over multiplicative subgroups.
pub fn subgroup_multilinear_bound(p: f64, sizes: &[f64]) -> Result<BoundResult> {
    check_p(p)?;
    check_sorted(sizes)?;
    let n = sizes.len();
    if n < 4 {
        return Err(Error::InvalidArgument("the subgroup multilinear bound needs n >= 4".into()));
    }
    let nu = n as u32;
    let prod: f64 = sizes.iter().product();
    let x1 = sizes[0];
    let (a_label, a_factor) = if large(p, x1) {
        let e = -1.0 / pow2(nu + 1) as f64;
        ("A=large", x1.powf(e) * p.powf(e))
    } else {
        ("A=small", x1.powf(-3.0 / pow2(nu + 1) as f64))
    };
    let mut b_labels = Vec::new();
    let mut b_product = 1.0;
    let nm2 = (n - 2) as f64;
    for &x in &sizes[1..n - 1] {
        if large(p, x) {
            b_product *= p.powf(-1.0 / (pow2(nu) as f64 * nm2));
            b_labels.push("large");
        } else {
            b_product *= x.powf(-1.0 / (pow2(nu - 1) as f64 * nm2));
            b_labels.push("small");
        }
    }
    let mut terms = vec![("p-term".into(), prod * p.powf(1.0 / pow2(nu) as f64) * a_factor * b_product)];
    for i in 1..=n {
        let x = sizes[n - i];
        terms.push((format!("X_{}-term", n + 1 - i), prod * x.powf(-1.0 / pow2(i as u32) as f64)));
    }
    Ok(BoundResult::new(format!("{a_label};B={}", b_labels.join(",")), terms).hypothesis("n >= 4", true))
}

/// The point-plane incidence bound `|P||Pi|/p + |P|^{1/2}|Pi| + k|P|`.
pub fn rudnev_bound(points: f64, planes: f64, max_collinear: f64, p: f64) -> Result<BoundResult> {
    check_p(p)?;
    Ok(BoundResult::new(
        "single",
        vec![
            ("|P||Pi|/p".into(), points * planes / p),
            ("|P|^{1/2}|Pi|".into(), points.sqrt() * planes),
            ("k|P|".into(), max_collinear * points),
        ],
    )
    .hypothesis("|P| <= |Pi|", points <= planes)
    .hypothesis("p odd", p % 2.0 == 1.0))
}

/// `p^{1/2} max k_i`.
pub fn weil_bound(p: f64, poly: &SparsePoly) -> Result<BoundResult> {
    check_p(p)?;
    let k = poly.max_exponent() as f64;
    Ok(BoundResult::new("single", vec![("total".into(), p.sqrt() * k)]).hypothesis("max k_i < p", k < p))
}

/// `p (log p)^r`, the scale of the Fourier `l^1` norm of a proper rank-`r`
/// GAP.
pub fn gap_l1_bound(p: f64, rank: u32, proper: bool) -> Result<BoundResult> {
    check_p(p)?;
    Ok(BoundResult::new("single", vec![("total".into(), p * p.ln().powi(rank as i32))])
        .hypothesis("rank >= 1", rank >= 1)
        .hypothesis("GAP is proper", proper))
}

/// Which reduction inequality [`reduction_rhs`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    /// Bounds `|S|^{2^{n-1}}` by the inner sum of `|sum_{x_1} e_p(...)|`;
    /// `measured` is that single inner sum.
    InnerSum,
    /// Bounds `|S|^{2^n}` through `D^{x,*}_{n-1}(X_i)`, `i < n`; `measured`
    /// lists those `n - 1` values.
    DStar,
    /// Bounds `|S|^{2^n}` through the tilde values `D~_n(X_i)` of all `n`
    /// sets.
    DTilde,
}

impl Reduction {
    /// The power of `|S|` that the right side bounds.
    pub fn power(self, n: usize) -> u32 {
        match self {
            Reduction::InnerSum => 1 << (n - 1),
            Reduction::DStar | Reduction::DTilde => 1 << n,
        }
    }
}

/// Right side of the chosen reduction inequality.
pub fn reduction_rhs(p: f64, sizes: &[f64], measured: &[f64], which: Reduction) -> Result<BoundResult> {
    check_p(p)?;
    check_sizes(sizes)?;
    let n = sizes.len();
    if n < 2 {
        return Err(Error::InvalidArgument("the reduction needs n >= 2".into()));
    }
    let expected = match which {
        Reduction::InnerSum => 1,
        Reduction::DStar => n - 1,
        Reduction::DTilde => n,
    };
    if measured.len() != expected {
        return Err(Error::InvalidArgument(format!(
            "expected {expected} measured values, got {}",
            measured.len()
        )));
    }
    if measured.iter().any(|m| !(*m >= 0.0)) {
        return Err(Error::InvalidArgument("measured values must be nonnegative".into()));
    }
    let prod: f64 = sizes.iter().product();
    let nu = n as u32;
    let (label, diag, off) = match which {
        Reduction::InnerSum => {
            let big = pow2(nu - 1) as f64;
            let diag: f64 = (2..=n).map(|j| sizes[j - 1].powf(-(pow2(j as u32 - 2) as f64))).sum();
            let rest: f64 = sizes[1..].iter().product();
            (
                "inner-sum",
                prod.powf(big) * diag,
                sizes[0].powf(big - 1.0) * rest.powf(big - 2.0) * measured[0],
            )
        }
        Reduction::DStar => {
            check_sorted(sizes)?;
            let big = pow2(nu) as f64;
            let diag: f64 = (1..n).map(|i| sizes[i - 1].powf(-(pow2(nu - i as u32) as f64))).sum();
            let head: f64 = sizes[..n - 1].iter().product();
            let mean = measured.iter().product::<f64>().powf(1.0 / (n - 1) as f64);
            (
                "d-star",
                prod.powf(big) * diag,
                p * sizes[n - 1].powf(big - 1.0) * head.powf(big - 4.0) * mean,
            )
        }
        Reduction::DTilde => {
            let big = pow2(nu) as f64;
            let diag: f64 = (1..=n).map(|i| sizes[i - 1].powf(-(pow2(nu - i as u32) as f64))).sum();
            let mean = measured.iter().product::<f64>().powf(1.0 / (2 * n) as f64);
            ("d-tilde", prod.powf(big) * diag, p.sqrt() * prod.powf(big - 2.0) * mean)
        }
    };
    let mut result = BoundResult::new(label, vec![("diagonal".into(), diag), ("off-diagonal".into(), off)]);
    if which == Reduction::DStar {
        result = result.hypothesis("sizes sorted", true);
    }
    Ok(result)
}

/// Registry of bound identifiers shared by the CLI and sweep configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundId {
    Vinogradov,
    Thm11,
    Thm12,
    Thm13,
    Lemma21,
    Lemma25,
    Lemma26,
    Dk(DkRegime),
    NCount,
    NCountSubgroup,
    Lemma34,
    Rudnev,
    Weil,
    GapL1,
}

const FIXED_IDS: [(&str, BoundId); 13] = [
    ("vinogradov", BoundId::Vinogradov),
    ("thm-1.1", BoundId::Thm11),
    ("thm-1.2", BoundId::Thm12),
    ("thm-1.3", BoundId::Thm13),
    ("lemma-2.1", BoundId::Lemma21),
    ("lemma-2.5", BoundId::Lemma25),
    ("lemma-2.6", BoundId::Lemma26),
    ("n-count", BoundId::NCount),
    ("n-count:subgroup", BoundId::NCountSubgroup),
    ("lemma-3.4", BoundId::Lemma34),
    ("rudnev", BoundId::Rudnev),
    ("weil", BoundId::Weil),
    ("gap-l1", BoundId::GapL1),
];

impl BoundId {
    /// Every identifier, with each `dk:<regime>` expanded.
    pub fn all() -> Vec<BoundId> {
        let mut ids: Vec<BoundId> = FIXED_IDS.iter().map(|e| e.1).collect();
        ids.extend(DK_REGIMES.iter().map(|r| BoundId::Dk(r.1)));
        ids
    }

    pub fn known_names() -> String {
        BoundId::all().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ")
    }
}

impl FromStr for BoundId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Some(regime) = s.strip_prefix("dk:") {
            return regime.parse().map(BoundId::Dk).map_err(|_| Error::Unknown {
                kind: "bound id",
                name: s.into(),
                known: BoundId::known_names(),
            });
        }
        FIXED_IDS
            .iter()
            .find(|e| e.0 == s)
            .map(|e| e.1)
            .ok_or_else(|| Error::Unknown {
                kind: "bound id",
                name: s.into(),
                known: BoundId::known_names(),
            })
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundId::Dk(r) => write!(f, "dk:{r}"),
            other => f.write_str(FIXED_IDS.iter().find(|e| e.1 == *other).expect("listed").0),
        }
    }
}

/// The exponent `theta` above which a bound's `p`-term beats the trivial
/// bound `prod X_i` when every `X_i = p^theta`.
///
/// `parameter` is `n` (the number of variables); `case` selects the middle
/// case for `thm-1.1`.
pub fn crossover_exponent(id: BoundId, parameter: u32, case: Option<MiddleCase>) -> Result<BigRational> {
    // The p-term is p^a X^{n - d}; it beats X^n iff theta > a / d.
    let (a, d) = match id {
        BoundId::Vinogradov => (q(1, 2), BigRational::one()),
        BoundId::Thm11 => {
            let case = case.ok_or_else(|| Error::InvalidArgument("thm-1.1 needs a case".into()))?;
            let report = thm_1_1_exponents(parameter, case)?;
            (report.p_exponent, report.deficit)
        }
        BoundId::Thm12 => {
            if parameter < 1 {
                return Err(Error::InvalidArgument("n must be positive".into()));
            }
            (q(1, pow2(parameter + 1)), q(1, pow2(parameter)))
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "no crossover rule for `{other}`; supported: vinogradov, thm-1.1, thm-1.2"
            )))
        }
    };
    if !d.is_positive() {
        return Err(Error::NoCrossover(format!("{id} has no saving in X (deficit {d})")));
    }
    Ok(a / d)
}
