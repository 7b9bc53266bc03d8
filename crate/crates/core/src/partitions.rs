//! The partition function, partitions into parts of size at least two, and
//! the leading-order asymptotics.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::math::ln_biguint;

pub const DEFAULT_MAX_N: usize = 10_000;

/// `nu[n]` for `0 <= n <= N`, built by Euler's pentagonal-number recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTable {
    nu: Vec<BigUint>,
}

impl PartitionTable {
    pub fn new(max_n: usize) -> Self {
        let mut nu: Vec<BigUint> = Vec::with_capacity(max_n + 1);
        nu.push(BigUint::one());
        for n in 1..=max_n {
            // signs follow + + - - over successive generalized pentagonals,
            // so the two halves are accumulated separately
            let mut plus = BigUint::zero();
            let mut minus = BigUint::zero();
            for k in 1.. {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > n {
                    break;
                }
                let g2 = k * (3 * k + 1) / 2;
                let acc = if k % 2 == 1 { &mut plus } else { &mut minus };
                *acc += &nu[n - g1];
                if g2 <= n {
                    *acc += &nu[n - g2];
                }
            }
            nu.push(plus - minus);
        }
        PartitionTable { nu }
    }

    pub fn max_n(&self) -> usize {
        self.nu.len() - 1
    }

    pub fn nu(&self, n: usize) -> Result<&BigUint> {
        self.nu
            .get(n)
            .ok_or(Error::limit("n", n as u64, self.max_n() as u64))
    }

    /// `nu(p) - nu(p - 1)`.
    pub fn difference(&self, p: usize) -> Result<BigUint> {
        if p == 0 {
            return Err(Error::invalid("p must be positive"));
        }
        Ok(self.nu(p)? - self.nu(p - 1)?)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.nu
    }
}

pub fn nu(n: usize) -> Result<BigUint> {
    nu_with_limit(n, DEFAULT_MAX_N)
}

pub fn nu_with_limit(n: usize, max_n: usize) -> Result<BigUint> {
    if n > max_n {
        return Err(Error::limit("n", n as u64, max_n as u64));
    }
    Ok(PartitionTable::new(n).nu[n].clone())
}

/// Partitions of `0..=max_p` into parts of size at least two, by the
/// coin-change recurrence over allowed part sizes.
pub fn partitions_min2_table(max_p: usize) -> Vec<BigUint> {
    let mut ways = vec![BigUint::zero(); max_p + 1];
    ways[0] = BigUint::one();
    for part in 2..=max_p {
        for total in part..=max_p {
            let add = ways[total - part].clone();
            ways[total] += add;
        }
    }
    ways
}

pub fn partitions_min2(p: usize) -> Result<BigUint> {
    if p < 2 {
        return Err(Error::invalid("p must be at least 2"));
    }
    Ok(partitions_min2_table(p).swap_remove(p))
}

pub fn ln_meinardus_asymptotic(n: f64) -> f64 {
    PI * libm::sqrt(2.0 * n / 3.0) - libm::log(4.0 * n * libm::sqrt(3.0))
}

/// `exp(pi sqrt(2n/3)) / (4 n sqrt 3)`.
pub fn meinardus_asymptotic(n: f64) -> f64 {
    libm::exp(PI * libm::sqrt(2.0 * n / 3.0)) / (4.0 * n * libm::sqrt(3.0))
}

/// `nu(n) / meinardus(n)` computed in log space.
pub fn meinardus_ratio(table: &PartitionTable, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    Ok(libm::exp(ln_biguint(table.nu(n)?) - ln_meinardus_asymptotic(n as f64)))
}

pub fn ln_theorem_p1_asymptotic(p: f64) -> f64 {
    libm::log(PI * libm::sqrt(2.0) / (12.0 * p * libm::sqrt(p))) + PI * libm::sqrt(2.0 * p / 3.0)
}

/// `pi sqrt 2 / (12 p sqrt p) * exp(pi sqrt(2p/3))`.
pub fn theorem_p1_asymptotic(p: f64) -> f64 {
    libm::exp(ln_theorem_p1_asymptotic(p))
}

/// `2 (nu(p) - nu(p-1))` over the asymptotic expression.
pub fn theorem_p1_ratio(table: &PartitionTable, p: usize) -> Result<f64> {
    let exact = table.difference(p)? * 2u32;
    Ok(libm::exp(ln_biguint(&exact) - ln_theorem_p1_asymptotic(p as f64)))
}
