//! Residue sets used as summation ranges: intervals, multiplicative
//! subgroups, generalized arithmetic progressions, seeded random sets,
//! power-map images and d-fold sumsets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::field::{gcd, FieldContext};
use crate::rng::SeededRng;

/// Upper limit on the number of tuples a GAP enumeration may materialize.
pub const MAX_GAP_TUPLES: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Interval { start: u64, end: u64 },
    Subgroup { order: u64 },
    Gap(GapSpec),
    Random { size: u64, seed: u64, zero_free: bool },
    Explicit,
    PowerImage { exponent: u64 },
    Sumset { folds: u64 },
}

/// A set of distinct residues modulo `p`, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSet {
    modulus: u64,
    elements: Vec<u64>,
    provenance: Provenance,
}

impl ResidueSet {
    /// Builds a set from residues in `[0, p)`, rejecting duplicates.
    pub fn from_elements(ctx: &FieldContext, elements: Vec<u64>, provenance: Provenance) -> Result<Self> {
        let p = ctx.p();
        let mut elements = elements;
        if let Some(&bad) = elements.iter().find(|&&x| x >= p) {
            return Err(Error::InvalidSet(format!("element {bad} is not reduced modulo {p}")));
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet(format!("duplicate element {}", w[0])));
        }
        Ok(ResidueSet {
            modulus: p,
            elements,
            provenance,
        })
    }

    fn from_mask(modulus: u64, mask: &[bool], provenance: Provenance) -> Self {
        let elements = mask
            .iter()
            .enumerate()
            .filter_map(|(x, &on)| on.then_some(x as u64))
            .collect();
        ResidueSet {
            modulus,
            elements,
            provenance,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn zero_free(&self) -> bool {
        self.elements.first() != Some(&0)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// `{c x : x in self}` for `c != 0`.
    pub fn dilate(&self, ctx: &FieldContext, c: u64) -> Result<Self> {
        if c.is_multiple_of(ctx.p()) {
            return Err(Error::ZeroResidue("dilation factor"));
        }
        let elements = self.elements.iter().map(|&x| ctx.mul(x, c % ctx.p())).collect();
        ResidueSet::from_elements(ctx, elements, Provenance::Explicit)
    }

    pub(crate) fn check_modulus(&self, ctx: &FieldContext) -> Result<()> {
        if self.modulus != ctx.p() {
            return Err(Error::InvalidSet(format!(
                "set was built modulo {} but the context is modulo {}",
                self.modulus,
                ctx.p()
            )));
        }
        Ok(())
    }
}

/// `{alpha_1 h_1 + ... + alpha_r h_r + beta : 1 <= h_i <= H_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSpec {
    pub beta: u64,
    pub alphas: Vec<u64>,
    pub lengths: Vec<u64>,
}

impl GapSpec {
    pub fn new(beta: u64, alphas: Vec<u64>, lengths: Vec<u64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidSet("a GAP needs rank at least 1".into()));
        }
        if alphas.len() != lengths.len() {
            return Err(Error::InvalidSet(format!(
                "GAP has {} steps but {} lengths",
                alphas.len(),
                lengths.len()
            )));
        }
        if lengths.contains(&0) {
            return Err(Error::InvalidSet("GAP lengths must be positive".into()));
        }
        Ok(GapSpec { beta, alphas, lengths })
    }

    pub fn rank(&self) -> usize {
        self.alphas.len()
    }

    /// `prod H_i`, saturating.
    pub fn volume(&self) -> u64 {
        self.lengths.iter().fold(1u64, |acc, &h| acc.saturating_mul(h))
    }

    fn validate(&self, ctx: &FieldContext) -> Result<()> {
        let volume = self.volume();
        if volume > ctx.p() {
            return Err(Error::InvalidSet(format!(
                "GAP volume {volume} exceeds the modulus {}",
                ctx.p()
            )));
        }
        if volume > MAX_GAP_TUPLES {
            return Err(Error::InvalidSet(format!(
                "GAP volume {volume} exceeds the enumeration guard {MAX_GAP_TUPLES}"
            )));
        }
        Ok(())
    }
}

/// Enumerates a GAP and reports whether it is proper (all `prod H_i` values
/// distinct).
pub fn gap_elements(ctx: &FieldContext, gap: &GapSpec) -> Result<(ResidueSet, bool)> {
    gap.validate(ctx)?;
    let p = ctx.p();
    let mut hits = vec![false; p as usize];
    let mut distinct = 0u64;
    let steps: Vec<u64> = gap.alphas.iter().map(|a| a % p).collect();
    let mut h = vec![1u64; gap.rank()];
    let mut value = (gap.beta % p + steps.iter().sum::<u64>() % p) % p;
    loop {
        if !hits[value as usize] {
            hits[value as usize] = true;
            distinct += 1;
        }
        // Odometer step over (h_1, ..., h_r).
        let mut i = 0;
        loop {
            if i == h.len() {
                let set = ResidueSet::from_mask(p, &hits, Provenance::Gap(gap.clone()));
                return Ok((set, distinct == gap.volume()));
            }
            if h[i] < gap.lengths[i] {
                h[i] += 1;
                value = (value + steps[i]) % p;
                break;
            }
            // Roll coordinate i back to 1.
            value = ctx.sub(value, (steps[i] * ((gap.lengths[i] - 1) % p)) % p);
            h[i] = 1;
            i += 1;
        }
    }
}

/// Draws random steps until the GAP with the given lengths is proper.
pub fn random_proper_gap(ctx: &FieldContext, lengths: &[u64], seed: u64) -> Result<(GapSpec, ResidueSet)> {
    let mut rng = SeededRng::new(seed);
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        let alphas = lengths.iter().map(|_| 1 + rng.below(ctx.p() - 1)).collect();
        let beta = rng.below(ctx.p());
        let gap = GapSpec::new(beta, alphas, lengths.to_vec())?;
        let (set, proper) = gap_elements(ctx, &gap)?;
        if proper {
            return Ok((gap, set));
        }
    }
    Err(Error::InvalidSet(format!(
        "no proper GAP with lengths {lengths:?} found in {ATTEMPTS} attempts"
    )))
}

/// Set descriptor mini-language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetDescriptor {
    /// `interval:a..b`, inclusive.
    Interval { start: u64, end: u64 },
    /// `subgroup:d`, the order-`d` subgroup of `F_p^*`.
    Subgroup { order: u64 },
    /// `random:size,seed[,zerofree]`.
    Random { size: u64, seed: u64, zero_free: bool },
    /// `gap:beta;a1,a2,...;H1,H2,...`.
    Gap(GapSpec),
    /// `explicit:x1,x2,...`.
    Explicit(Vec<u64>),
}

fn parse_u64(what: &'static str, input: &str, s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|e| parse_err(what, input, format!("`{}`: {e}", s.trim())))
}

fn parse_list(what: &'static str, input: &str, s: &str) -> Result<Vec<u64>> {
    s.split(',').map(|t| parse_u64(what, input, t)).collect()
}

impl FromStr for SetDescriptor {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        const WHAT: &str = "set descriptor";
        let s = input.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| parse_err(WHAT, input, "expected `kind:arguments`"))?;
        match kind.trim() {
            "interval" => {
                let (a, b) = body
                    .split_once("..")
                    .ok_or_else(|| parse_err(WHAT, input, "expected `interval:a..b`"))?;
                Ok(SetDescriptor::Interval {
                    start: parse_u64(WHAT, input, a)?,
                    end: parse_u64(WHAT, input, b)?,
                })
            }
            "subgroup" => Ok(SetDescriptor::Subgroup {
                order: parse_u64(WHAT, input, body)?,
            }),
            "random" => {
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                let zero_free = match parts.len() {
                    2 => false,
                    3 if parts[2] == "zerofree" => true,
                    _ => {
                        return Err(parse_err(WHAT, input, "expected `random:size,seed[,zerofree]`"));
                    }
                };
                Ok(SetDescriptor::Random {
                    size: parse_u64(WHAT, input, parts[0])?,
                    seed: parse_u64(WHAT, input, parts[1])?,
                    zero_free,
                })
            }
            "gap" => {
                let parts: Vec<&str> = body.split(';').collect();
                if parts.len() != 3 {
                    return Err(parse_err(WHAT, input, "expected `gap:beta;a1,...;H1,...`"));
                }
                let gap = GapSpec::new(
                    parse_u64(WHAT, input, parts[0])?,
                    parse_list(WHAT, input, parts[1])?,
                    parse_list(WHAT, input, parts[2])?,
                )?;
                Ok(SetDescriptor::Gap(gap))
            }
            "explicit" => Ok(SetDescriptor::Explicit(parse_list(WHAT, input, body)?)),
            other => Err(parse_err(WHAT, input, format!("unknown kind `{other}`"))),
        }
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetDescriptor::Interval { start, end } => write!(f, "interval:{start}..{end}"),
            SetDescriptor::Subgroup { order } => write!(f, "subgroup:{order}"),
            SetDescriptor::Random { size, seed, zero_free } => {
                write!(f, "random:{size},{seed}")?;
                if *zero_free {
                    write!(f, ",zerofree")?;
                }
                Ok(())
            }
            SetDescriptor::Gap(g) => write!(f, "gap:{};{};{}", g.beta, join(&g.alphas), join(&g.lengths)),
            SetDescriptor::Explicit(xs) => write!(f, "explicit:{}", join(xs)),
        }
    }
}

/// Materializes a descriptor over `ctx`.
pub fn build_set(ctx: &FieldContext, desc: &SetDescriptor) -> Result<ResidueSet> {
    let p = ctx.p();
    match desc {
        SetDescriptor::Interval { start, end } => {
            if start > end {
                return Err(Error::InvalidSet(format!("empty interval {start}..{end}")));
            }
            if end - start + 1 > p {
                return Err(Error::InvalidSet(format!(
                    "interval {start}..{end} is longer than the modulus {p}"
                )));
            }
            let elements = (*start..=*end).map(|x| x % p).collect();
            ResidueSet::from_elements(
                ctx,
                elements,
                Provenance::Interval {
                    start: *start,
                    end: *end,
                },
            )
        }
        SetDescriptor::Subgroup { order } => subgroup(ctx, *order),
        SetDescriptor::Random { size, seed, zero_free } => random_set(ctx, *size, *seed, *zero_free),
        SetDescriptor::Gap(gap) => gap_elements(ctx, gap).map(|(set, _)| set),
        SetDescriptor::Explicit(xs) => {
            let elements = xs.iter().map(|&x| x % p).collect();
            ResidueSet::from_elements(ctx, elements, Provenance::Explicit)
        }
    }
}

/// The unique subgroup of `F_p^*` of order `d`, `{g^(j (p-1)/d)}`.
pub fn subgroup(ctx: &FieldContext, d: u64) -> Result<ResidueSet> {
    if d == 0 || !ctx.order().is_multiple_of(d) {
        return Err(Error::InvalidSet(format!(
            "subgroup order {d} does not divide p - 1 = {}",
            ctx.order()
        )));
    }
    let step = ctx.order() / d;
    let elements = (0..d).map(|j| ctx.power_of_generator(j * step)).collect();
    ResidueSet::from_elements(ctx, elements, Provenance::Subgroup { order: d })
}

/// Seeded shuffle of `[0, p)` (or `[1, p)`), prefix of length `size`.
pub fn random_set(ctx: &FieldContext, size: u64, seed: u64, zero_free: bool) -> Result<ResidueSet> {
    let lo = u64::from(zero_free);
    let available = ctx.p() - lo;
    if size > available {
        return Err(Error::InvalidSet(format!(
            "cannot draw {size} distinct residues from {available} candidates"
        )));
    }
    let mut pool: Vec<u64> = (lo..ctx.p()).collect();
    SeededRng::new(seed).shuffle(&mut pool);
    pool.truncate(size as usize);
    ResidueSet::from_elements(ctx, pool, Provenance::Random { size, seed, zero_free })
}

/// `true` when `set` is a multiplicative subgroup of `F_p^*`.
pub fn is_subgroup(ctx: &FieldContext, set: &ResidueSet) -> bool {
    let d = set.len() as u64;
    // x^d = 1 has exactly d roots when d | p - 1, so d distinct roots form the subgroup.
    d > 0
        && set.zero_free()
        && ctx.order().is_multiple_of(d)
        && set.elements().iter().all(|&x| ctx.pow(x, d) == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerImage {
    pub image: ResidueSet,
    pub multiplicity: u64,
}

/// `{x^k : x in S}` for a multiplicative subgroup `S`, with the constant
/// fiber size.
pub fn power_image(ctx: &FieldContext, set: &ResidueSet, k: u64) -> Result<PowerImage> {
    set.check_modulus(ctx)?;
    if k == 0 {
        return Err(Error::InvalidArgument("power map exponent must be positive".into()));
    }
    if !is_subgroup(ctx, set) {
        return Err(Error::InvalidSet(
            "power image with multiplicity requires a multiplicative subgroup".into(),
        ));
    }
    let (image, fibers) = power_image_fibers(ctx, set, k)?;
    let multiplicity = fibers[0].1;
    if fibers.iter().any(|&(_, c)| c != multiplicity) {
        return Err(Error::InvalidSet("power map fibers are not of constant size".into()));
    }
    Ok(PowerImage { image, multiplicity })
}

/// Diagnostic form of [`power_image`] for arbitrary sets: the image together
/// with the fiber size of every image point.
pub fn power_image_fibers(ctx: &FieldContext, set: &ResidueSet, k: u64) -> Result<(ResidueSet, Vec<(u64, u64)>)> {
    set.check_modulus(ctx)?;
    let mut counts = vec![0u64; ctx.p() as usize];
    for &x in set.elements() {
        counts[ctx.pow(x, k) as usize] += 1;
    }
    let fibers: Vec<(u64, u64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(y, &c)| (y as u64, c))
        .collect();
    let elements = fibers.iter().map(|&(y, _)| y).collect();
    let image = ResidueSet::from_elements(ctx, elements, Provenance::PowerImage { exponent: k })?;
    Ok((image, fibers))
}

/// `dS = {s_1 + ... + s_d : s_i in S}`.
pub fn d_fold_sumset(ctx: &FieldContext, set: &ResidueSet, d: u64) -> Result<ResidueSet> {
    set.check_modulus(ctx)?;
    if d == 0 {
        return Err(Error::InvalidArgument("sumset fold count must be positive".into()));
    }
    let p = ctx.p() as usize;
    let mut current = vec![false; p];
    for &s in set.elements() {
        current[s as usize] = true;
    }
    for _ in 1..d {
        let mut next = vec![false; p];
        for (x, _) in current.iter().enumerate().filter(|(_, &on)| on) {
            for &s in set.elements() {
                next[(x + s as usize) % p] = true;
            }
        }
        if next == current {
            break;
        }
        current = next;
    }
    Ok(ResidueSet::from_mask(ctx.p(), &current, Provenance::Sumset { folds: d }))
}

/// A `t`-sparse polynomial `sum a_i X^(k_i)` with distinct exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsePoly {
    terms: Vec<(u64, u64)>,
}

impl SparsePoly {
    /// Builds a polynomial with `t >= 2` terms `(a_i, k_i)`.
    pub fn new(terms: Vec<(u64, u64)>) -> Result<Self> {
        if terms.len() < 2 {
            return Err(Error::InvalidArgument("a sparse polynomial needs at least two terms".into()));
        }
        Self::with_terms(terms)
    }

    /// A single term `a X^k`; convenient for degenerate checks.
    pub fn monomial(a: u64, k: u64) -> Result<Self> {
        Self::with_terms(vec![(a, k)])
    }

    fn with_terms(terms: Vec<(u64, u64)>) -> Result<Self> {
        if terms.iter().any(|&(a, k)| a == 0 || k == 0) {
            return Err(Error::InvalidArgument(
                "coefficients must be nonzero and exponents positive".into(),
            ));
        }
        let mut ks: Vec<u64> = terms.iter().map(|t| t.1).collect();
        ks.sort_unstable();
        if ks.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("exponents must be distinct".into()));
        }
        Ok(SparsePoly { terms })
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.1).collect()
    }

    pub fn max_exponent(&self) -> u64 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    /// Rejects coefficients divisible by `p`.
    pub fn check_field(&self, ctx: &FieldContext) -> Result<()> {
        if self.terms.iter().any(|&(a, _)| a % ctx.p() == 0) {
            return Err(Error::InvalidArgument(format!(
                "coefficient vanishes modulo {}",
                ctx.p()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, ctx: &FieldContext, x: u64) -> u64 {
        self.terms
            .iter()
            .fold(0, |acc, &(a, k)| ctx.add(acc, ctx.mul(a % ctx.p(), ctx.pow(x, k))))
    }
}

impl FromStr for SparsePoly {
    type Err = Error;

    /// `a1:k1,a2:k2,...`
    fn from_str(input: &str) -> Result<Self> {
        const WHAT: &str = "sparse polynomial";
        let terms = input
            .split(',')
            .map(|t| {
                let (a, k) = t
                    .split_once(':')
                    .ok_or_else(|| parse_err(WHAT, input, "expected `a:k` terms"))?;
                Ok((parse_u64(WHAT, input, a)?, parse_u64(WHAT, input, k)?))
            })
            .collect::<Result<Vec<_>>>()?;
        if terms.len() == 1 {
            SparsePoly::monomial(terms[0].0, terms[0].1)
        } else {
            SparsePoly::new(terms)
        }
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(a, k)| format!("{a}:{k}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// gcd data of a multinomial: `alpha_i = gcd(k_i, p - 1)` for every term and
/// `beta_i = alpha_i / gcd(alpha_i, alpha_t)` for `i < t`, where the last
/// exponent plays the role of `k_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdParameters {
    pub alphas: Vec<u64>,
    pub betas: Vec<u64>,
}

impl GcdParameters {
    pub fn alpha_last(&self) -> u64 {
        *self.alphas.last().expect("nonempty")
    }

    /// Indices of `betas` ordered so the betas are non-increasing (stable).
    pub fn beta_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.betas.len()).collect();
        idx.sort_by(|&a, &b| self.betas[b].cmp(&self.betas[a]));
        idx
    }
}

pub fn gcd_parameters(p: u64, exponents: &[u64]) -> Result<GcdParameters> {
    let (&last, rest) = exponents
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("exponent list is empty".into()))?;
    if exponents.contains(&0) {
        return Err(Error::InvalidArgument("exponents must be positive".into()));
    }
    let order = p - 1;
    let alpha_t = gcd(last, order);
    let mut alphas: Vec<u64> = rest.iter().map(|&k| gcd(k, order)).collect();
    let betas = alphas.iter().map(|&a| a / gcd(a, alpha_t)).collect();
    alphas.push(alpha_t);
    Ok(GcdParameters { alphas, betas })
}
