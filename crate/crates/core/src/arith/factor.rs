//! Deterministic trial-division factorization with a process-wide bound.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_TRIAL_DIVISION_BOUND: u64 = 10_000_000;

static TRIAL_DIVISION_BOUND: AtomicU64 = AtomicU64::new(DEFAULT_TRIAL_DIVISION_BOUND);

pub fn trial_division_bound() -> u64 {
    TRIAL_DIVISION_BOUND.load(Ordering::Relaxed)
}

/// Sets the largest trial divisor. Values below 2 are clamped to 2.
pub fn set_trial_division_bound(bound: u64) {
    TRIAL_DIVISION_BOUND.store(bound.max(2), Ordering::Relaxed);
}

/// Prime factorization of `|n|` as `(prime, exponent)` pairs in ascending order.
///
/// A cofactor left after dividing out every prime up to the bound is accepted
/// as prime only when it is below the square of the bound.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut rest: BigUint = n.magnitude().clone();
    let mut out = Vec::new();
    if let Some(small) = rest.to_u64() {
        return factorize_u64(small).map(|fs| {
            fs.into_iter()
                .map(|(p, k)| (BigInt::from(p), k))
                .collect()
        });
    }
    let bound = trial_division_bound();
    let mut p: u64 = 2;
    loop {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        if p > bound {
            return Err(Error::FactorBoundExceeded {
                value: n.to_string(),
                bound,
            });
        }
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            out.push((BigInt::from(p), k));
        }
        if let Some(small) = rest.to_u64() {
            for (q, k) in factorize_u64_from(small, p + 1)? {
                out.push((BigInt::from(q), k));
            }
            return Ok(out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        out.push((BigInt::from(rest), 1));
    }
    Ok(out)
}

fn factorize_u64(n: u64) -> Result<Vec<(u64, u32)>> {
    factorize_u64_from(n, 2)
}

fn factorize_u64_from(mut n: u64, start: u64) -> Result<Vec<(u64, u32)>> {
    let bound = trial_division_bound();
    let mut out = Vec::new();
    let mut p = start.max(2);
    if p > 2 && p % 2 == 0 {
        p += 1;
    }
    while (p as u128) * (p as u128) <= n as u128 {
        if p > bound {
            return Err(Error::FactorBoundExceeded {
                value: n.to_string(),
                bound,
            });
        }
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Distinct prime divisors of `|n|`.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factorize(n)?.into_iter().map(|(p, _)| p).collect())
}

pub fn is_prime(n: &BigInt) -> Result<bool> {
    if !n.is_positive() || n.is_one() {
        return Ok(false);
    }
    let fs = factorize(n)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    Ok(factorize(n)?.iter().all(|(_, k)| *k == 1))
}
