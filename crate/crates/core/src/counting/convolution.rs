//! Exact cyclic convolution of nonnegative integer vectors.
//!
//! The schoolbook engine runs in `u128` whenever `sum(a) * sum(b)` fits,
//! which bounds every partial sum, and otherwise falls back to `BigUint`.
//! The NTT engine works modulo up to four 62-bit primes and reconstructs each
//! coefficient by CRT; the number of primes is chosen from the same
//! `sum(a) * sum(b)` bound, so the result is exact.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::pow_mod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Engine {
    #[default]
    Schoolbook,
    Ntt,
}

/// Primes `c * 2^40 + 1` below `2^62` with a primitive root each.
const NTT_PRIMES: [(u64, u64); 4] = [
    (4_611_615_649_683_210_241, 11),
    (4_611_613_450_659_954_689, 3),
    (4_611_549_678_985_543_681, 19),
    (4_611_546_380_450_660_353, 5),
];

const NTT_MAX_LOG_LEN: u32 = 40;

/// Cyclic convolution `out[c] = sum_{i + j = c mod n} a[i] b[j]`.
pub fn cyclic_convolve(a: &[BigUint], b: &[BigUint], engine: Engine) -> Vec<BigUint> {
    assert_eq!(a.len(), b.len(), "cyclic convolution needs equal lengths");
    if a.is_empty() {
        return Vec::new();
    }
    if let (Some(sa), Some(sb)) = (to_u128_vec(a), to_u128_vec(b)) {
        let out = match engine {
            Engine::Schoolbook => schoolbook_u128(&sa, &sb),
            Engine::Ntt => ntt_u128(&sa, &sb),
        };
        if let Some(out) = out {
            return out.into_iter().map(BigUint::from).collect();
        }
    }
    if engine == Engine::Ntt {
        if let Some(out) = ntt_big(a, b) {
            return out;
        }
    }
    schoolbook_big(a, b)
}

pub(crate) fn to_u128_vec(xs: &[BigUint]) -> Option<Vec<u128>> {
    xs.iter().map(ToPrimitive::to_u128).collect()
}

fn sum_u128(xs: &[u128]) -> Option<u128> {
    xs.iter().try_fold(0u128, |acc, &x| acc.checked_add(x))
}

fn nonzero_entries<T: Copy + PartialEq + Default>(xs: &[T]) -> Vec<(usize, T)> {
    xs.iter()
        .enumerate()
        .filter(|(_, &v)| v != T::default())
        .map(|(i, &v)| (i, v))
        .collect()
}

/// `None` when the result could overflow `u128`.
pub fn schoolbook_u128(a: &[u128], b: &[u128]) -> Option<Vec<u128>> {
    let n = a.len();
    assert_eq!(n, b.len());
    sum_u128(a)?.checked_mul(sum_u128(b)?)?;
    let (sparse, dense) = {
        let na = nonzero_entries(a);
        let nb = nonzero_entries(b);
        if na.len() <= nb.len() {
            (na, b)
        } else {
            (nb, a)
        }
    };
    let out = (0..n)
        .into_par_iter()
        .with_min_len(64)
        .map(|c| {
            let mut acc = 0u128;
            for &(i, v) in &sparse {
                let j = if c >= i { c - i } else { c + n - i };
                acc += v * dense[j];
            }
            acc
        })
        .collect();
    Some(out)
}

pub fn schoolbook_big(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len();
    assert_eq!(n, b.len());
    let sparse: Vec<(usize, &BigUint)> = a.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    (0..n)
        .into_par_iter()
        .map(|c| {
            let mut acc = BigUint::zero();
            for &(i, v) in &sparse {
                let j = if c >= i { c - i } else { c + n - i };
                if !b[j].is_zero() {
                    acc += v * &b[j];
                }
            }
            acc
        })
        .collect()
}

#[inline]
fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    (a as u128 * b as u128 % q as u128) as u64
}

fn ntt_in_place(data: &mut [u64], q: u64, root: u64, invert: bool) {
    let n = data.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(root, (q - 1) / len as u64, q);
        if invert {
            w_len = pow_mod(w_len, q - 2, q);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = mul_mod(w, w_len, q);
        }
        for chunk in data.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = mul_mod(hi[k], twiddles[k], q);
                lo[k] = if u + v >= q { u + v - q } else { u + v };
                hi[k] = if u >= v { u - v } else { u + q - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, q - 2, q);
        for x in data.iter_mut() {
            *x = mul_mod(*x, n_inv, q);
        }
    }
}

/// Cyclic convolution modulo `q`, via a zero-padded linear convolution.
fn cyclic_mod_prime(a: &[u64], b: &[u64], q: u64, root: u64) -> Vec<u64> {
    let n = a.len();
    let size = (2 * n).next_power_of_two().max(1);
    assert!(size.trailing_zeros() <= NTT_MAX_LOG_LEN, "NTT length too large");
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    fa[..n].copy_from_slice(a);
    fb[..n].copy_from_slice(b);
    ntt_in_place(&mut fa, q, root, false);
    ntt_in_place(&mut fb, q, root, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul_mod(*x, *y, q);
    }
    ntt_in_place(&mut fa, q, root, true);
    let mut out = fa[..n].to_vec();
    for (c, &v) in fa[n..2 * n - 1].iter().enumerate() {
        let s = out[c] + v;
        out[c] = if s >= q { s - q } else { s };
    }
    out
}

/// Number of primes whose product exceeds `bound`, if the table suffices.
fn primes_needed(bound: &BigUint) -> Option<usize> {
    let mut product = BigUint::from(1u32);
    for (m, &(q, _)) in NTT_PRIMES.iter().enumerate() {
        product *= q;
        if &product > bound {
            return Some(m + 1);
        }
    }
    None
}

/// Residues of `xs` modulo every prime, convolved; CRT by Garner's scheme.
fn ntt_residues(a: &[BigUint], b: &[BigUint], primes: usize) -> Vec<BigUint> {
    let n = a.len();
    let residues: Vec<Vec<u64>> = NTT_PRIMES[..primes]
        .par_iter()
        .map(|&(q, root)| {
            let qa: Vec<u64> = a.iter().map(|x| (x % q).to_u64().unwrap()).collect();
            let qb: Vec<u64> = b.iter().map(|x| (x % q).to_u64().unwrap()).collect();
            cyclic_mod_prime(&qa, &qb, q, root)
        })
        .collect();
    (0..n)
        .into_par_iter()
        .map(|c| {
            // x = v0 + q0 * (v1 + q1 * (v2 + ...)), digits via Garner.
            let mut digits: Vec<u64> = Vec::with_capacity(primes);
            for m in 0..primes {
                let q = NTT_PRIMES[m].0;
                let mut v = residues[m][c];
                for (l, &d) in digits.iter().enumerate() {
                    let ql = NTT_PRIMES[l].0;
                    let inv = pow_mod(ql % q, q - 2, q);
                    v = mul_mod((v + q - d % q) % q, inv, q);
                }
                digits.push(v);
            }
            let mut x = BigUint::zero();
            for m in (0..primes).rev() {
                x = x * NTT_PRIMES[m].0 + digits[m];
            }
            x
        })
        .collect()
}

fn ntt_u128(a: &[u128], b: &[u128]) -> Option<Vec<u128>> {
    let bound = sum_u128(a)?.checked_mul(sum_u128(b)?)?;
    let primes = primes_needed(&BigUint::from(bound))?;
    let big_a: Vec<BigUint> = a.iter().map(|&x| BigUint::from(x)).collect();
    let big_b: Vec<BigUint> = b.iter().map(|&x| BigUint::from(x)).collect();
    ntt_residues(&big_a, &big_b, primes)
        .iter()
        .map(ToPrimitive::to_u128)
        .collect()
}

fn ntt_big(a: &[BigUint], b: &[BigUint]) -> Option<Vec<BigUint>> {
    let sa: BigUint = a.iter().sum();
    let sb: BigUint = b.iter().sum();
    let primes = primes_needed(&(sa * sb))?;
    Some(ntt_residues(a, b, primes))
}
