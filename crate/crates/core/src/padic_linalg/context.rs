use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Residues are kept below this bound so that a sum of two never overflows `u64`
/// and a product always fits in `u128`.
const MODULUS_BOUND: u64 = 1 << 62;

/// Default working precision when none is requested.
pub const DEFAULT_PRECISION: u32 = 20;
/// Default guard band.
pub const DEFAULT_GUARD: u32 = 4;
/// Default ceiling on the dimension of any expanded Zp-matrix.
pub const DEFAULT_MATRIX_CEILING: usize = 1024;

/// Large primes used for the Monte Carlo rank certificate.
pub(crate) const SHADOW_PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847];

/// The prime `p`, the capped absolute precision `N` and the escalation policy.
///
/// Every scalar handled under a context is a canonical residue in `[0, p^N)`.
/// Valuations at or above `N - guard` are treated as indeterminate.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicContext {
    p: u64,
    precision: u32,
    max_precision: u32,
    guard: u32,
    modulus: u64,
    matrix_ceiling: usize,
    // Set for the rank-certificate contexts, whose modulus is a large prime
    // unrelated to `p`. Valuations are meaningless there.
    shadow: bool,
}

impl fmt::Debug for PAdicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shadow {
            write!(f, "PAdicContext(shadow mod {})", self.modulus)
        } else {
            write!(
                f,
                "PAdicContext(p={}, N={}, guard={}, N_max={})",
                self.p, self.precision, self.guard, self.max_precision
            )
        }
    }
}

/// Largest `N` with `p^N < 2^62`.
pub fn precision_limit(p: u64) -> u32 {
    let mut n = 0;
    let mut acc: u128 = 1;
    while acc * (p as u128) < MODULUS_BOUND as u128 {
        acc *= p as u128;
        n += 1;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PAdicContext {
    /// Context with escalation ceiling at the largest precision the residue
    /// representation supports.
    pub fn new(p: u64, precision: u32, guard: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Self::with_max_precision(p, precision, guard, precision_limit(p))
    }

    pub fn with_max_precision(p: u64, precision: u32, guard: u32, max_precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let limit = precision_limit(p);
        if guard == 0 || guard >= precision {
            return Err(Error::InvalidPrecision(format!(
                "guard {guard} must satisfy 0 < guard < N = {precision}"
            )));
        }
        if precision > max_precision {
            return Err(Error::InvalidPrecision(format!(
                "N = {precision} exceeds N_max = {max_precision}"
            )));
        }
        if max_precision > limit {
            return Err(Error::InvalidPrecision(format!(
                "N_max = {max_precision} exceeds the representable limit {limit} for p = {p}"
            )));
        }
        Ok(PAdicContext {
            p,
            precision,
            max_precision,
            guard,
            modulus: p.pow(precision),
            matrix_ceiling: DEFAULT_MATRIX_CEILING,
            shadow: false,
        })
    }

    /// `p` with the default precision and guard.
    pub fn for_prime(p: u64) -> Result<Self> {
        let limit = if is_prime(p) { precision_limit(p) } else { 0 };
        let n = DEFAULT_PRECISION.min(limit);
        Self::new(p, n, DEFAULT_GUARD.min(n.saturating_sub(1)).max(1))
    }

    pub fn with_matrix_ceiling(mut self, ceiling: usize) -> Self {
        self.matrix_ceiling = ceiling.max(1);
        self
    }

    /// Same policy at a different working precision.
    pub fn at_precision(&self, precision: u32) -> Result<Self> {
        let mut ctx = Self::with_max_precision(self.p, precision, self.guard, self.max_precision)?;
        ctx.matrix_ceiling = self.matrix_ceiling;
        Ok(ctx)
    }

    /// Context computing modulo the large prime `q`; only ranks are meaningful.
    pub(crate) fn shadow(&self, q: u64) -> Self {
        PAdicContext {
            modulus: q,
            shadow: true,
            ..*self
        }
    }

    pub(crate) fn shadows(&self) -> impl Iterator<Item = PAdicContext> + '_ {
        SHADOW_PRIMES.iter().map(move |&q| self.shadow(q))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn max_precision(&self) -> u32 {
        self.max_precision
    }
    pub fn guard(&self) -> u32 {
        self.guard
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn matrix_ceiling(&self) -> usize {
        self.matrix_ceiling
    }
    pub fn is_shadow(&self) -> bool {
        self.shadow
    }
    /// The paper-style setting assumes an odd prime; `p = 2` is accepted but flagged here.
    pub fn is_even_prime(&self) -> bool {
        self.p == 2
    }

    /// Valuations at or above this bound are indeterminate.
    pub fn certified_bound(&self) -> u32 {
        self.precision - self.guard
    }

    pub fn check_dimension(&self, dim: usize) -> Result<()> {
        if dim > self.matrix_ceiling {
            Err(Error::TooLarge {
                dim,
                ceiling: self.matrix_ceiling,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        ((a as u128 + b as u128 * c as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.modulus as i128) as u64
    }

    pub fn from_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        x.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    /// Symmetric integer representative in `(-modulus/2, modulus/2]`.
    pub fn lift(&self, a: u64) -> i128 {
        if a > self.modulus / 2 {
            a as i128 - self.modulus as i128
        } else {
            a as i128
        }
    }

    pub fn lift_bigint(&self, a: u64) -> BigInt {
        BigInt::from(self.lift(a))
    }

    /// `p`-adic valuation of a residue; `None` for zero.
    pub fn valuation(&self, a: u64) -> Option<u32> {
        debug_assert!(!self.shadow, "valuations are undefined in a shadow context");
        if a == 0 {
            return None;
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        if self.shadow {
            a != 0
        } else {
            !a.is_multiple_of(self.p)
        }
    }

    /// Inverse of a unit residue.
    pub fn inverse(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let egcd = (a as i128).extended_gcd(&(self.modulus as i128));
        debug_assert_eq!(egcd.gcd, 1);
        Some(egcd.x.rem_euclid(self.modulus as i128) as u64)
    }

    /// `p^k` reduced modulo `p^N`.
    pub fn p_power(&self, k: u32) -> u64 {
        self.pow(self.p % self.modulus, k as u64)
    }

    /// Exact quotient `a / p^v` as a residue, for `a` divisible by `p^v`.
    #[inline]
    pub fn div_p_power(&self, a: u64, v: u32) -> u64 {
        a / self.p.pow(v)
    }

    /// Residue of the lift of `a` read modulo the (smaller) precision of `other`.
    pub fn reduce_into(&self, a: u64, other: &PAdicContext) -> u64 {
        if self.shadow || other.shadow || self.p != other.p {
            other.from_bigint(&self.lift_bigint(a))
        } else {
            a % other.modulus
        }
    }
}

/// Valuation of a nonzero big integer.
pub fn bigint_valuation(x: &BigInt, p: u64) -> Option<u32> {
    if !x.is_zero() {
        let p = BigInt::from(p);
        let mut v = 0;
        let mut y = x.clone();
        while (&y % &p).is_zero() {
            y /= &p;
            v += 1;
        }
        Some(v)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_bad_guard() {
        assert_eq!(PAdicContext::new(9, 10, 2), Err(Error::NotPrime(9)));
        assert!(PAdicContext::new(3, 10, 0).is_err());
        assert!(PAdicContext::new(3, 10, 10).is_err());
        assert!(PAdicContext::with_max_precision(3, 10, 2, 8).is_err());
        assert!(PAdicContext::new(3, 40, 2).is_err());
    }

    #[test]
    fn two_is_flagged() {
        let ctx = PAdicContext::new(2, 16, 2).unwrap();
        assert!(ctx.is_even_prime());
        assert!(!PAdicContext::for_prime(3).unwrap().is_even_prime());
    }

    #[test]
    fn residue_arithmetic() {
        let ctx = PAdicContext::new(3, 5, 1).unwrap();
        assert_eq!(ctx.modulus(), 243);
        assert_eq!(ctx.from_i64(-1), 242);
        assert_eq!(ctx.valuation(162), Some(4));
        assert_eq!(ctx.valuation(0), None);
        let inv = ctx.inverse(2).unwrap();
        assert_eq!(ctx.mul(inv, 2), 1);
        assert_eq!(ctx.inverse(6), None);
        assert_eq!(ctx.lift(242), -1);
        assert_eq!(ctx.pow(4, 3), 64);
    }

    #[test]
    fn limits() {
        assert_eq!(precision_limit(3), 39);
        assert_eq!(precision_limit(5), 26);
        for q in SHADOW_PRIMES {
            assert!(q < MODULUS_BOUND);
        }
    }
}
