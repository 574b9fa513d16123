//! Prime-field context: primitive root, discrete-log table and character
//! evaluation for `F_p` with `p` an odd prime.
//!
//! The context is immutable once built. Additive characters `e_p(jx)` and
//! multiplicative characters `chi_j(g^a) = exp(2 pi i j a / (p - 1))` are read
//! from precomputed unit-circle tables, so every phase is reduced exactly
//! before any floating-point work happens.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest modulus for which the O(p) tables are built.
pub const MAX_MODULUS: u64 = 1 << 22;

/// Default relative tolerance for equality checks on complex quantities.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterKind {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u64,
    generator: u64,
    /// `dlog[x]` for `x` in `1..p`; slot 0 holds `u32::MAX`.
    dlog: Vec<u32>,
    /// `powers[a] = g^a` for `a` in `0..p-1`.
    powers: Vec<u64>,
    /// `additive[u] = e_p(u)`.
    additive: Vec<Complex64>,
    /// `roots[a] = exp(2 pi i a / (p-1))`.
    roots: Vec<Complex64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn unit_circle(numerator: u64, denominator: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * numerator as f64 / denominator as f64)
}

impl FieldContext {
    /// Builds the context for an odd prime `p`, choosing the smallest
    /// primitive root.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidModulus {
                p,
                reason: "modulus must be at least 3",
            });
        }
        if p.is_multiple_of(2) {
            return Err(Error::InvalidModulus {
                p,
                reason: "modulus is even",
            });
        }
        if !is_prime(p) {
            return Err(Error::InvalidModulus {
                p,
                reason: "modulus is not prime",
            });
        }
        if p > MAX_MODULUS {
            return Err(Error::InvalidModulus {
                p,
                reason: "modulus exceeds the table size limit",
            });
        }
        let order = p - 1;
        let factors = prime_factors(order);
        let generator = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
            .expect("every prime has a primitive root");

        let mut powers = Vec::with_capacity(order as usize);
        let mut dlog = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for a in 0..order {
            powers.push(x);
            dlog[x as usize] = a as u32;
            x = x * generator % p;
        }
        debug_assert_eq!(x, 1);

        let additive = (0..p).map(|u| unit_circle(u, p)).collect();
        let roots = (0..order).map(|a| unit_circle(a, order)).collect();
        Ok(FieldContext {
            p,
            generator,
            dlog,
            powers,
            additive,
            roots,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Order of the multiplicative group, `p - 1`.
    pub fn order(&self) -> u64 {
        self.p - 1
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, x: u64, e: u64) -> u64 {
        pow_mod(x, e, self.p)
    }

    /// `a` with `g^a = x`, for `x` in `F_p^*`.
    pub fn discrete_log(&self, x: u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::ZeroResidue("discrete_log argument"));
        }
        Ok(self.dlog[x as usize] as u64)
    }

    /// Table lookup without the zero check; `x` must be in `1..p`.
    #[inline]
    pub(crate) fn dlog_unchecked(&self, x: u64) -> usize {
        self.dlog[x as usize] as usize
    }

    /// `g^a`, with `a` reduced modulo `p - 1`.
    pub fn power_of_generator(&self, a: u64) -> u64 {
        self.powers[(a % self.order()) as usize]
    }

    pub fn inverse(&self, x: u64) -> Result<u64> {
        let a = self.discrete_log(x)?;
        Ok(self.power_of_generator(self.order() - a))
    }

    /// `e_p(u) = exp(2 pi i u / p)`.
    #[inline]
    pub fn e_p(&self, u: u64) -> Complex64 {
        self.additive[(u % self.p) as usize]
    }

    /// `exp(2 pi i a / (p - 1))`.
    #[inline]
    pub fn root_of_unity(&self, a: u64) -> Complex64 {
        self.roots[(a % self.order()) as usize]
    }

    /// `chi_j(x)`; `chi_0` is the principal character.
    pub fn chi(&self, j: u64, x: u64) -> Result<Complex64> {
        let a = self.discrete_log(x)?;
        let e = (j as u128 * a as u128 % self.order() as u128) as u64;
        Ok(self.roots[e as usize])
    }

    /// `chi_j(x)` extended by `chi_j(0) = 0`.
    pub fn chi_or_zero(&self, j: u64, x: u64) -> Complex64 {
        self.chi(j, x).unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Additive character `x -> e_p(jx)` or multiplicative character `chi_j`.
    pub fn character_value(&self, kind: CharacterKind, j: u64, x: u64) -> Result<Complex64> {
        match kind {
            CharacterKind::Additive => Ok(self.e_p((j % self.p) * (x % self.p))),
            CharacterKind::Multiplicative => self.chi(j, x),
        }
    }
}

/// Relative closeness test used throughout for complex and real values.
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_primitive_roots() {
        assert_eq!(FieldContext::new(7).unwrap().generator(), 3);
        assert_eq!(FieldContext::new(3).unwrap().generator(), 2);
        assert_eq!(FieldContext::new(13).unwrap().generator(), 2);
        assert_eq!(FieldContext::new(10007).unwrap().generator(), 5);
    }

    #[test]
    fn generator_of_seven_by_enumeration() {
        // 3^1..3^6 mod 7 = 3, 2, 6, 4, 5, 1, while 2 has order 3.
        let ctx = FieldContext::new(7).unwrap();
        let powers: Vec<u64> = (1..=6).map(|a| ctx.pow(3, a)).collect();
        assert_eq!(powers, vec![3, 2, 6, 4, 5, 1]);
        assert_eq!(ctx.pow(2, 3), 1);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(
            FieldContext::new(10),
            Err(Error::InvalidModulus { reason: "modulus is even", .. })
        ));
        assert!(matches!(
            FieldContext::new(15),
            Err(Error::InvalidModulus { reason: "modulus is not prime", .. })
        ));
        assert!(FieldContext::new(2).is_err());
        assert!(FieldContext::new(1).is_err());
    }

    #[test]
    fn discrete_log_examples() {
        let ctx = FieldContext::new(7).unwrap();
        assert_eq!(ctx.discrete_log(6).unwrap(), 3);
        assert_eq!(ctx.discrete_log(1).unwrap(), 0);
        assert_eq!(ctx.discrete_log(0), Err(Error::ZeroResidue("discrete_log argument")));
    }

    #[test]
    fn dlog_round_trip() {
        for p in [3u64, 5, 7, 11, 101, 1009] {
            let ctx = FieldContext::new(p).unwrap();
            let mut seen = vec![false; p as usize - 1];
            for x in 1..p {
                let a = ctx.discrete_log(x).unwrap();
                assert_eq!(ctx.pow(ctx.generator(), a), x);
                assert!(!seen[a as usize]);
                seen[a as usize] = true;
            }
        }
    }

    #[test]
    fn character_examples() {
        let ctx = FieldContext::new(5).unwrap();
        let one = ctx.character_value(CharacterKind::Additive, 1, 0).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        for x in 1..5 {
            let v = ctx.character_value(CharacterKind::Multiplicative, 0, x).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let z = ctx.character_value(CharacterKind::Additive, 1, 1).unwrap();
        assert!((z.re - 0.309_016_994_374_947_4).abs() < 1e-12);
        assert!((z.im - 0.951_056_516_295_153_5).abs() < 1e-12);
        assert!(ctx.character_value(CharacterKind::Multiplicative, 1, 0).is_err());
    }

    #[test]
    fn additive_orthogonality() {
        for p in [3u64, 7, 31, 101] {
            let ctx = FieldContext::new(p).unwrap();
            for a in 0..p {
                let s: Complex64 = (0..p).map(|x| ctx.e_p(a * x)).sum();
                let expected = if a == 0 { p as f64 } else { 0.0 };
                assert!((s - Complex64::new(expected, 0.0)).norm() < 1e-9 * p as f64);
            }
        }
    }

    #[test]
    fn multiplicativity_spot_check() {
        let ctx = FieldContext::new(101).unwrap();
        let mut rng = crate::rng::SeededRng::new(3);
        for _ in 0..500 {
            let j = rng.below(100);
            let x = 1 + rng.below(100);
            let y = 1 + rng.below(100);
            let lhs = ctx.chi(j, ctx.mul(x, y)).unwrap();
            let rhs = ctx.chi(j, x).unwrap() * ctx.chi(j, y).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_is_inverse() {
        let ctx = FieldContext::new(97).unwrap();
        for x in 1..97 {
            assert_eq!(ctx.mul(x, ctx.inverse(x).unwrap()), 1);
        }
    }
}
