//! Small exact-arithmetic helpers shared by the other modules.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `m (m - 1) ... (m - k + 1)`; zero when `k > m`.
pub fn falling_factorial(m: u64, k: u64) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (m - i))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    falling_factorial(n, k) / factorial(k)
}

/// `(2k - 1)!! = 1 * 3 * ... * (2k - 1)` for `n = 2k`; for odd `n` the
/// product runs over the odd numbers up to `n`.
pub fn double_factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Multinomial coefficient `(sum c)! / prod c!`.
pub fn multinomial(counts: &[u64]) -> BigUint {
    let total: u64 = counts.iter().sum();
    let mut acc = factorial(total);
    for &c in counts {
        acc /= factorial(c);
    }
    acc
}

/// Natural logarithm of a positive big integer, via its top 64 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return libm::log(x.to_u64().unwrap_or(u64::MAX) as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    libm::log(top as f64) + shift as f64 * core::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(q: &BigRational) -> f64 {
    match q.numer().sign() {
        Sign::Plus => {
            ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude())
        }
        _ => f64::NAN,
    }
}

/// `q^(1/k)` for a nonnegative rational, evaluated in log space.
pub fn rational_root(q: &BigRational, k: f64) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    libm::exp(ln_rational(q) / k)
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
    sign * libm::exp(ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude()))
}

pub fn big_to_rational(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Advances `perm` to the next permutation in lexicographic order.
/// Returns `false` (leaving `perm` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(perm: &mut [T]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Lengths of the runs of equal values in a sorted slice.
pub fn run_lengths<T: PartialEq>(sorted: &[T]) -> Vec<u64> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        runs.push((j - i) as u64);
        i = j;
    }
    runs
}
