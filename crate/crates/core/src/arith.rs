//! Exact integer arithmetic on `u64`: trial-division factorization, divisor
//! enumeration, valuations, square detection and square-free parts.
//!
//! Every public entry point accepts values in `1..=CEILING`. Intermediate
//! products that may exceed 64 bits are formed in 128 bits and checked.

use crate::error::{Error, Result};

/// Largest accepted input, `2^63 - 1`.
pub const CEILING: u64 = i64::MAX as u64;

pub(crate) fn check_range(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::TooSmall { min: 1, got: 0 });
    }
    if n > CEILING {
        return Err(Error::AboveCeiling(n as u128));
    }
    Ok(())
}

/// Narrows a 128-bit intermediate back to a value within the ceiling.
pub(crate) fn narrow(v: u128) -> Result<u64> {
    if v > CEILING as u128 {
        Err(Error::AboveCeiling(v))
    } else {
        Ok(v as u64)
    }
}

/// Prime-power decomposition of a natural number.
///
/// Primes are strictly increasing and every exponent is at least one; the
/// factor list is empty exactly when `n == 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_square(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e % 2 == 0)
    }

    /// Divisor count, the product of `e + 1` over all prime powers.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Product of the primes with odd exponent.
    pub fn squarefree_part(&self) -> u64 {
        self.factors
            .iter()
            .filter(|&&(_, e)| e % 2 == 1)
            .map(|&(p, _)| p)
            .product()
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = Vec::with_capacity(self.tau() as usize);
        divs.push(1u64);
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Every `alpha >= 1` with `alpha^2 | n`, ascending.
    pub fn square_divisor_roots(&self) -> Vec<u64> {
        let halves = Factorization {
            n: 0,
            factors: self
                .factors
                .iter()
                .filter(|&&(_, e)| e >= 2)
                .map(|&(p, e)| (p, e / 2))
                .collect(),
        };
        halves.divisors()
    }
}

/// Factorizes `n` by trial division with a 2-3 wheel.
pub fn factorize(n: u64) -> Result<Factorization> {
    check_range(n)?;
    let mut rest = n;
    let mut factors = Vec::new();
    let mut strip = |p: u64, rest: &mut u64| {
        if *rest % p == 0 {
            let mut e = 0;
            while *rest % p == 0 {
                *rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    };
    strip(2, &mut rest);
    strip(3, &mut rest);
    let mut p = 5u64;
    while p * p <= rest {
        strip(p, &mut rest);
        strip(p + 2, &mut rest);
        p += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn is_prime(n: u64) -> bool {
    match n {
        0 | 1 => false,
        2 | 3 => true,
        _ if n % 2 == 0 || n % 3 == 0 => false,
        _ => {
            let mut p = 5u64;
            while p * p <= n {
                if n % p == 0 || n % (p + 2) == 0 {
                    return false;
                }
                p += 6;
            }
            true
        }
    }
}

/// Ascending list of the positive divisors of `n`.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn tau(n: u64) -> Result<u64> {
    Ok(factorize(n)?.tau())
}

/// Largest `k` with `p^k | n`.
pub fn valuation(p: u64, n: u64) -> Result<u32> {
    check_range(n)?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut rest = n;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    Ok(k)
}

/// `Some(r)` with `r * r == n` when `n` is a perfect square.
pub fn perfect_square_root(n: u64) -> Option<u64> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

pub fn is_perfect_square(n: u64) -> bool {
    perfect_square_root(n).is_some()
}

pub fn squarefree_part(n: u64) -> Result<u64> {
    Ok(factorize(n)?.squarefree_part())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
