//! Exact moments of Rademacher chaos sums `f = sum_A b_A w_A`.
//!
//! Two independent routes: averaging `f^p` over all sign vectors (Walsh
//! transforms over blocks of the hypercube), and summing `gamma * prod b`
//! over the multisets of support sets whose union is an even-covering.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::covering::Element;
use crate::error::{Error, Result};
use crate::math::{big_to_rational, binomial, double_factorial, factorial, falling_factorial, ln_biguint, ln_rational};

pub const DEFAULT_DIRECT_LIMIT: u64 = 1 << 24;
const WHT_BITS: u32 = 16;

/// Finitely supported coefficients `b_A` over `l`-element sets of positive
/// integers. Zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChaosCoefficients {
    l: usize,
    terms: BTreeMap<Vec<Element>, BigRational>,
}

impl ChaosCoefficients {
    pub fn new<I>(l: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Element>, BigRational)>,
    {
        if l < 2 {
            return Err(Error::invalid("l must be at least 2"));
        }
        let mut map = BTreeMap::new();
        for (mut set, value) in terms {
            set.sort_unstable();
            set.dedup();
            if set.len() != l {
                return Err(Error::invalid("every key needs exactly l distinct elements"));
            }
            if set[0] == 0 {
                return Err(Error::invalid("indices start at 1"));
            }
            if map.contains_key(&set) {
                return Err(Error::invalid("duplicate key"));
            }
            if !value.is_zero() {
                map.insert(set, value);
            }
        }
        Ok(ChaosCoefficients { l, terms: map })
    }

    /// `b_A = 1` for every `l`-subset `A` of `{1, ..., m}`.
    pub fn uniform(l: usize, m: u32) -> Result<Self> {
        let mut sets = Vec::new();
        let mut cur = Vec::with_capacity(l);
        subsets(1, m, l, &mut cur, &mut sets);
        Self::new(l, sets.into_iter().map(|s| (s, BigRational::one())))
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest `n` with every index in `{1, ..., n}`.
    pub fn n(&self) -> u32 {
        self.terms
            .keys()
            .filter_map(|s| s.last())
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Element>, &BigRational)> {
        self.terms.iter()
    }

    pub fn get(&self, set: &[Element]) -> Option<&BigRational> {
        self.terms.get(set)
    }

    pub fn norm_sq(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, v| acc + v * v)
    }

    pub fn scaled(&self, lambda: &BigRational) -> Self {
        let terms = if lambda.is_zero() {
            BTreeMap::new()
        } else {
            self.terms
                .iter()
                .map(|(k, v)| (k.clone(), v * lambda))
                .collect()
        };
        ChaosCoefficients { l: self.l, terms }
    }

    /// Common denominator and the integer numerators over it.
    fn integerized(&self) -> (BigInt, Vec<(&Vec<Element>, BigInt)>) {
        let denom = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums = self
            .terms
            .iter()
            .map(|(k, v)| (k, v.numer() * (&denom / v.denom())))
            .collect();
        (denom, nums)
    }
}

fn subsets(from: u32, m: u32, k: usize, cur: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for e in from..=m {
        if (m - e + 1) as usize + cur.len() < k {
            break;
        }
        cur.push(e);
        subsets(e + 1, m, k, cur, out);
        cur.pop();
    }
}

/// Value distribution of `D f` over sign vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: BTreeMap<i128, u64>,
}

impl Histogram {
    pub fn merge(&mut self, other: Histogram) {
        for (v, c) in other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i128, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Sign-vector enumeration split into independent blocks: the high
/// variables are fixed per block and the low ones are swept by one Walsh
/// transform.
#[derive(Clone, Debug)]
pub struct DirectPlan {
    n: u32,
    low_bits: u32,
    terms: Vec<(u64, i128)>,
    denom: BigInt,
}

impl DirectPlan {
    pub fn new(b: &ChaosCoefficients, limit: u64) -> Result<Self> {
        let n = b.n();
        if n >= 63 || (1u64 << n) > limit {
            let value = if n >= 63 { u64::MAX } else { 1u64 << n };
            return Err(Error::limit("sign vectors", value, limit));
        }
        let (denom, nums) = b.integerized();
        let mut terms = Vec::with_capacity(nums.len());
        let mut bound = BigInt::zero();
        for (set, num) in nums {
            bound += num.abs();
            let mask = set.iter().fold(0u64, |m, &e| m | (1u64 << (e - 1)));
            let num = num
                .to_i128()
                .ok_or(Error::invalid("coefficient numerators too large"))?;
            terms.push((mask, num));
        }
        if bound.bits() > 120 {
            return Err(Error::invalid("coefficient numerators too large"));
        }
        Ok(DirectPlan {
            n,
            low_bits: n.min(WHT_BITS),
            terms,
            denom,
        })
    }

    pub fn block_count(&self) -> u64 {
        1u64 << (self.n - self.low_bits)
    }

    pub fn block_histogram(&self, block: u64) -> Histogram {
        let size = 1usize << self.low_bits;
        let low_mask = (size as u64) - 1;
        let mut g = vec![0i128; size];
        for &(mask, num) in &self.terms {
            let hi = (mask >> self.low_bits) & block;
            let sign = if hi.count_ones() % 2 == 0 { num } else { -num };
            g[(mask & low_mask) as usize] += sign;
        }
        walsh_hadamard(&mut g);
        g.sort_unstable();
        let mut counts = BTreeMap::new();
        let mut i = 0;
        while i < g.len() {
            let mut j = i + 1;
            while j < g.len() && g[j] == g[i] {
                j += 1;
            }
            counts.insert(g[i], (j - i) as u64);
            i = j;
        }
        Histogram { counts }
    }

    pub fn histogram(&self) -> Histogram {
        let mut h = Histogram::default();
        for block in 0..self.block_count() {
            h.merge(self.block_histogram(block));
        }
        h
    }

    /// `E f^p` from a full histogram.
    pub fn moment(&self, h: &Histogram, p: u32) -> BigRational {
        self.reduce(h, p, false)
    }

    /// `E |f|^p` from a full histogram.
    pub fn abs_moment(&self, h: &Histogram, p: u32) -> BigRational {
        self.reduce(h, p, true)
    }

    fn reduce(&self, h: &Histogram, p: u32, abs: bool) -> BigRational {
        let mut sum = BigInt::zero();
        for (v, c) in h.iter() {
            let mut x = BigInt::from(v);
            if abs {
                x = x.abs();
            }
            sum += x.pow(p) * BigInt::from(c);
        }
        let den = self.denom.pow(p) * (BigInt::one() << self.n as usize);
        BigRational::new(sum, den)
    }

    /// `E |f|^p` for real `p > 0` in floating point.
    pub fn abs_moment_f64(&self, h: &Histogram, p: f64) -> f64 {
        let d = self.denom.to_f64().unwrap_or(f64::INFINITY);
        let total = libm::exp2(self.n as f64);
        h.iter()
            .filter(|(v, _)| *v != 0)
            .map(|(v, c)| c as f64 / total * libm::pow((v as f64).abs() / d, p))
            .sum()
    }
}

fn walsh_hadamard(a: &mut [i128]) {
    let mut h = 1;
    while h < a.len() {
        for start in (0..a.len()).step_by(2 * h) {
            for i in start..start + h {
                let (x, y) = (a[i], a[i + h]);
                a[i] = x + y;
                a[i + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// `2^{-n} sum over sign vectors of f^p`, exactly.
pub fn moment_direct(b: &ChaosCoefficients, p: u32) -> Result<BigRational> {
    moment_direct_with_limit(b, p, DEFAULT_DIRECT_LIMIT)
}

pub fn moment_direct_with_limit(b: &ChaosCoefficients, p: u32, limit: u64) -> Result<BigRational> {
    let plan = DirectPlan::new(b, limit)?;
    Ok(plan.moment(&plan.histogram(), p))
}

pub fn abs_moment_direct(b: &ChaosCoefficients, p: u32) -> Result<BigRational> {
    let plan = DirectPlan::new(b, DEFAULT_DIRECT_LIMIT)?;
    Ok(plan.abs_moment(&plan.histogram(), p))
}

/// Multiset enumeration for the even-covering formula, split by the
/// smallest support index of each multiset.
#[derive(Clone, Debug)]
pub struct CombinatorialPlan {
    p: usize,
    l: usize,
    masks: Vec<u128>,
    nums: Vec<BigInt>,
    index: BTreeMap<u128, usize>,
    denom: BigInt,
    factorials: Vec<BigInt>,
}

impl CombinatorialPlan {
    pub fn new(b: &ChaosCoefficients, p: u32) -> Result<Self> {
        if p == 0 || p % 2 == 1 {
            return Err(Error::OddExponent(p));
        }
        if p > 32 {
            return Err(Error::limit("p", p as u64, 32));
        }
        if b.n() > 128 {
            return Err(Error::limit("largest index", b.n() as u64, 128));
        }
        let (denom, terms) = b.integerized();
        let mut masks = Vec::with_capacity(terms.len());
        let mut nums = Vec::with_capacity(terms.len());
        let mut index = BTreeMap::new();
        for (k, (set, num)) in terms.into_iter().enumerate() {
            let mask = set.iter().fold(0u128, |m, &e| m | (1u128 << (e - 1)));
            index.insert(mask, k);
            masks.push(mask);
            nums.push(num);
        }
        let factorials = (0..=p as u64).map(|k| BigInt::from(factorial(k))).collect();
        Ok(CombinatorialPlan {
            p: p as usize,
            l: b.l(),
            masks,
            nums,
            index,
            denom,
            factorials,
        })
    }

    pub fn lead_count(&self) -> usize {
        self.masks.len()
    }

    /// Integer contribution of the multisets whose smallest index is `lead`.
    pub fn partial(&self, lead: usize) -> BigInt {
        let mut total = BigInt::zero();
        let mut seq = Vec::with_capacity(self.p);
        seq.push(lead);
        self.walk(&mut seq, self.masks[lead], self.nums[lead].clone(), &mut total);
        total
    }

    pub fn finish(&self, total: BigInt) -> BigRational {
        BigRational::new(total, self.denom.pow(self.p as u32))
    }

    fn gamma(&self, seq: &[usize]) -> BigInt {
        let mut g = self.factorials[self.p].clone();
        let mut i = 0;
        while i < seq.len() {
            let mut j = i + 1;
            while j < seq.len() && seq[j] == seq[i] {
                j += 1;
            }
            g /= &self.factorials[j - i];
            i = j;
        }
        g
    }

    fn walk(&self, seq: &mut Vec<usize>, acc: u128, prod: BigInt, total: &mut BigInt) {
        let last = *seq.last().expect("nonempty");
        if seq.len() + 1 == self.p {
            if let Some(&j) = self.index.get(&acc) {
                if j >= last {
                    seq.push(j);
                    *total += self.gamma(seq) * prod * &self.nums[j];
                    seq.pop();
                }
            }
            return;
        }
        let left = self.p - seq.len() - 1;
        for j in last..self.masks.len() {
            let next = acc ^ self.masks[j];
            if next.count_ones() as usize > left * self.l {
                continue;
            }
            seq.push(j);
            self.walk(seq, next, &prod * &self.nums[j], total);
            seq.pop();
        }
    }
}

/// `sum gamma(A_1..A_p) b_{A_1} ... b_{A_p}` over multisets of support sets
/// forming an even-covering.
pub fn moment_combinatorial(b: &ChaosCoefficients, p: u32) -> Result<BigRational> {
    let plan = CombinatorialPlan::new(b, p)?;
    let total = (0..plan.lead_count()).fold(BigInt::zero(), |acc, k| acc + plan.partial(k));
    Ok(plan.finish(total))
}

/// `||f||_p`. Even integer exponents use the exact moment, odd ones the
/// exact absolute moment; other real exponents are evaluated in floating
/// point over the exact value distribution.
pub fn norm_p(b: &ChaosCoefficients, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid("p must be a finite number >= 1"));
    }
    let plan = DirectPlan::new(b, DEFAULT_DIRECT_LIMIT)?;
    let h = plan.histogram();
    if libm::trunc(p) == p && p <= u32::MAX as f64 {
        let m = plan.abs_moment(&h, p as u32);
        if m.is_zero() {
            return Ok(0.0);
        }
        return Ok(libm::exp(ln_rational(&m) / p));
    }
    Ok(libm::pow(plan.abs_moment_f64(&h, p), 1.0 / p))
}

fn ratio_pow_half(q: &BigRational, half: u32) -> BigRational {
    num_traits::pow(q.clone(), half as usize)
}

/// Right-hand constant `sqrt(l!) (p! mu)^{1/p}`.
pub fn t1_upper_constant(l: u32, p: u32, mu_full: &BigUint) -> f64 {
    let lf = ln_biguint(&factorial(l as u64));
    let inner = ln_biguint(&(factorial(p as u64) * mu_full));
    libm::exp(lf / 2.0 + inner / p as f64)
}

/// Left-hand constant `(p! mu_standard)^{1/p} / (2 sqrt 3)`.
pub fn t1_lower_constant(p: u32, mu_standard: &BigUint) -> f64 {
    let inner = ln_biguint(&(factorial(p as u64) * mu_standard));
    libm::exp(inner / p as f64) / (2.0 * libm::sqrt(3.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct T1UpperCheck {
    pub moment: BigRational,
    /// `(l!)^{p/2} p! mu ||b||^p`
    pub bound: BigRational,
    pub holds: bool,
}

/// `E f^p <= (l!)^{p/2} p! mu_{l,p}(full) ||b||^p`, the `p`-th power of
/// the upper inequality, compared exactly.
pub fn t1_upper_check(b: &ChaosCoefficients, p: u32, mu_full: &BigUint) -> Result<T1UpperCheck> {
    if p == 0 || p % 2 == 1 {
        return Err(Error::OddExponent(p));
    }
    let moment = moment_direct(b, p)?;
    let lf = big_to_rational(factorial(b.l() as u64));
    let bound = ratio_pow_half(&lf, p / 2)
        * big_to_rational(factorial(p as u64) * mu_full)
        * ratio_pow_half(&b.norm_sq(), p / 2);
    Ok(T1UpperCheck {
        holds: moment <= bound,
        moment,
        bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformProbe {
    pub m: u32,
    pub moment: BigRational,
    /// `(||f||_p / ||b||)^p = E f^p / C(m,l)^{p/2}`
    pub ratio_pow: BigRational,
    pub ratio: f64,
}

/// `||f||_p / ||b||` for `b` uniform on the `l`-subsets of `{1, ..., m}`.
pub fn uniform_probe(l: u32, p: u32, m: u32) -> Result<UniformProbe> {
    if p == 0 || p % 2 == 1 {
        return Err(Error::OddExponent(p));
    }
    let b = ChaosCoefficients::uniform(l as usize, m)?;
    let moment = moment_direct(&b, p)?;
    let count = big_to_rational(binomial(m as u64, l as u64));
    let ratio_pow = &moment / ratio_pow_half(&count, p / 2);
    let ratio = if ratio_pow.is_zero() {
        0.0
    } else {
        libm::exp(ln_rational(&ratio_pow) / p as f64)
    };
    Ok(UniformProbe {
        m,
        moment,
        ratio_pow,
        ratio,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct T1Sandwich {
    pub l: u32,
    pub p: u32,
    pub upper: T1UpperCheck,
    pub upper_constant: f64,
    pub lower_limit_constant: f64,
    pub norm_ratio: f64,
    pub uniform: Vec<UniformProbe>,
    /// Uniform ratios never decrease along `m` (exact comparison).
    pub uniform_nondecreasing: bool,
}

/// Checks the upper inequality for `b` and reports the uniform-coefficient
/// ratios for `m` in `ms` as lower estimates of the supremum.
pub fn t1_sandwich(
    b: &ChaosCoefficients,
    p: u32,
    ms: &[u32],
    mu_full: &BigUint,
    mu_standard: &BigUint,
) -> Result<T1Sandwich> {
    let l = b.l() as u32;
    let upper = t1_upper_check(b, p, mu_full)?;
    let norm_ratio = if b.is_empty() {
        0.0
    } else {
        libm::exp((ln_rational(&upper.moment) - ln_rational(&b.norm_sq()) * p as f64 / 2.0) / p as f64)
    };
    let uniform = ms
        .iter()
        .map(|&m| uniform_probe(l, p, m))
        .collect::<Result<Vec<_>>>()?;
    let uniform_nondecreasing = uniform.windows(2).all(|w| w[0].ratio_pow <= w[1].ratio_pow);
    Ok(T1Sandwich {
        l,
        p,
        upper_constant: t1_upper_constant(l, p, mu_full),
        lower_limit_constant: t1_lower_constant(p, mu_standard),
        upper,
        norm_ratio,
        uniform,
        uniform_nondecreasing,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerChain {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

/// `E (sum_{A in Z_l(m)} w_A)^p >= p! mu A_m^{pl/2} / (2^p (3 l!)^{p/2})`
/// with `A_m^k = m (m-1) ... (m-k+1)`, both sides exact.
pub fn zlm_lower_chain(l: u32, p: u32, m: u32, mu_standard: &BigUint) -> Result<LowerChain> {
    if p == 0 || p % 2 == 1 {
        return Err(Error::OddExponent(p));
    }
    let half = (p * l / 2) as u64;
    if (m as u64) < half {
        return Err(Error::invalid("m must be at least pl/2"));
    }
    let b = ChaosCoefficients::uniform(l as usize, m)?;
    let lhs = moment_combinatorial(&b, p)?;
    let num = factorial(p as u64) * mu_standard * falling_factorial(m as u64, half);
    let base = BigUint::from(3u32) * factorial(l as u64);
    let den = (BigUint::one() << p as usize) * base.pow(p / 2);
    let rhs = BigRational::new(BigInt::from(num), BigInt::from(den));
    Ok(LowerChain {
        holds: lhs >= rhs,
        lhs,
        rhs,
    })
}

/// Variable sets `I_1..I_p` with one nonnegative sequence per set. Every
/// variable ranges over `0..range`; the sequence of `I_k` is indexed by
/// assignments to the sorted variables of `I_k` in mixed radix, last
/// variable fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableCovering {
    sets: Vec<Vec<u32>>,
    range: u32,
    sequences: Vec<Vec<BigRational>>,
}

impl VariableCovering {
    pub fn new(sets: Vec<Vec<u32>>, range: u32, sequences: Vec<Vec<BigRational>>) -> Result<Self> {
        if range == 0 || sets.len() != sequences.len() {
            return Err(Error::invalid("one sequence per set and a positive range"));
        }
        let mut norm_sets = Vec::with_capacity(sets.len());
        for (set, seq) in sets.into_iter().zip(&sequences) {
            let mut s = set;
            s.sort_unstable();
            s.dedup();
            let size = (range as u64)
                .checked_pow(s.len() as u32)
                .ok_or(Error::invalid("sequence too large"))?;
            if seq.len() as u64 != size {
                return Err(Error::invalid("sequence length must be range^|I_k|"));
            }
            if seq.iter().any(|v| v.is_negative()) {
                return Err(Error::invalid("sequences must be nonnegative"));
            }
            norm_sets.push(s);
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for s in &norm_sets {
            for &v in s {
                *counts.entry(v).or_insert(0) += 1;
            }
        }
        if counts.values().any(|c| c % 2 == 1) {
            return Err(Error::NotEvenCovering);
        }
        Ok(VariableCovering {
            sets: norm_sets,
            range,
            sequences,
        })
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn range(&self) -> u32 {
        self.range
    }

    pub fn sequences(&self) -> &[Vec<BigRational>] {
        &self.sequences
    }

    pub fn variables(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.sets.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchySchwarzCheck {
    /// Left side with every sequence scaled to integers.
    pub lhs: BigInt,
    /// Product of the scaled sums of squares.
    pub rhs_sq: BigInt,
    pub holds: bool,
}

/// `(sum_G prod_k a^(k))^2 <= prod_k sum_{I_k} (a^(k))^2`, exact. Each
/// sequence is scaled by its own common denominator first; both sides
/// scale by the same factor.
pub fn gen_cauchy_schwarz_check(v: &VariableCovering) -> Result<CauchySchwarzCheck> {
    let vars = v.variables();
    let total = (v.range as u64)
        .checked_pow(vars.len() as u32)
        .filter(|&t| t <= DEFAULT_DIRECT_LIMIT)
        .ok_or(Error::limit("assignments", u64::MAX, DEFAULT_DIRECT_LIMIT))?;
    let ints: Vec<Vec<BigInt>> = v
        .sequences
        .iter()
        .map(|seq| {
            let d = seq.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            seq.iter().map(|x| x.numer() * (&d / x.denom())).collect()
        })
        .collect();
    let positions: Vec<Vec<usize>> = v
        .sets
        .iter()
        .map(|s| s.iter().map(|x| vars.binary_search(x).expect("listed")).collect())
        .collect();
    let r = v.range as u64;
    let mut digits = vec![0u64; vars.len()];
    let mut lhs = BigInt::zero();
    for _ in 0..total {
        let mut prod = BigInt::one();
        for (k, pos) in positions.iter().enumerate() {
            let idx = pos.iter().fold(0u64, |acc, &i| acc * r + digits[i]);
            prod *= &ints[k][idx as usize];
            if prod.is_zero() {
                break;
            }
        }
        lhs += prod;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < r {
                break;
            }
            *d = 0;
        }
    }
    let rhs_sq = ints.iter().fold(BigInt::one(), |acc, seq| {
        acc * seq.iter().fold(BigInt::zero(), |s, x| s + x * x)
    });
    Ok(CauchySchwarzCheck {
        holds: &lhs * &lhs <= rhs_sq,
        lhs,
        rhs_sq,
    })
}

/// `E (r_1 + ... + r_n)^p = 2^{-n} sum_k C(n,k) (n - 2k)^p`.
pub fn rademacher_sum_moment(n: u64, p: u32) -> BigRational {
    let mut sum = BigInt::zero();
    for k in 0..=n {
        let term = BigInt::from(n as i128 - 2 * k as i128).pow(p);
        sum += BigInt::from(binomial(n, k)) * term;
    }
    BigRational::new(sum, BigInt::one() << n as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KhintchineReference {
    pub n: u64,
    pub p: u32,
    /// `E (S_n / sqrt n)^p`
    pub value: BigRational,
    /// `(p-1)!!`
    pub double_factorial: BigUint,
    pub within_double_factorial: bool,
    pub within_stechkin: bool,
    /// `value / (p-1)!!`
    pub relative_to_limit: f64,
}

pub fn khintchine_reference(p: u32, n: u64) -> Result<KhintchineReference> {
    if p == 0 || p % 2 == 1 {
        return Err(Error::OddExponent(p));
    }
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let scale = BigRational::from_integer(BigInt::from(n).pow(p / 2));
    let value = rademacher_sum_moment(n, p) / scale;
    let df = double_factorial(p as u64 - 1);
    let dfr = big_to_rational(df.clone());
    let stechkin = big_to_rational(BigUint::from(p / 2 + 1).pow(p / 2));
    let relative_to_limit = crate::math::rational_to_f64(&(&value / &dfr));
    Ok(KhintchineReference {
        n,
        p,
        within_double_factorial: value <= dfr,
        within_stechkin: value <= stechkin,
        value,
        double_factorial: df,
        relative_to_limit,
    })
}

/// One norm probe `||f||_p / ||b||` for `l`-homogeneous coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NormProbe {
    pub l: u32,
    pub p: u32,
    pub m: u32,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DlGlEstimates {
    pub l: u32,
    /// `max_p mu_{l,p}(full)^{1/p} / p^{l/2-1}`
    pub d_estimate: f64,
    /// `max ratio / p^{l/2}` over the probes
    pub g_estimate: f64,
}

pub fn dl_gl_estimates(l: u32, mu_full: &[(u32, BigUint)], probes: &[NormProbe]) -> DlGlEstimates {
    let e = l as f64 / 2.0 - 1.0;
    let d_estimate = mu_full
        .iter()
        .filter(|(_, mu)| !mu.is_zero())
        .map(|(p, mu)| libm::exp(ln_biguint(mu) / *p as f64 - e * libm::log(*p as f64)))
        .fold(0.0, f64::max);
    let g_estimate = probes
        .iter()
        .filter(|pr| pr.l == l)
        .map(|pr| pr.ratio / libm::pow(pr.p as f64, l as f64 / 2.0))
        .fold(0.0, f64::max);
    DlGlEstimates {
        l,
        d_estimate,
        g_estimate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn coeffs(l: usize, terms: &[(&[Element], i64)]) -> ChaosCoefficients {
        ChaosCoefficients::new(l, terms.iter().map(|(s, v)| (s.to_vec(), int(*v)))).unwrap()
    }

    #[test]
    fn worked_moments() {
        let single = coeffs(2, &[(&[1, 2], 1)]);
        assert_eq!(moment_direct(&single, 4).unwrap(), int(1));
        let two = coeffs(2, &[(&[1, 2], 1), (&[3, 4], 1)]);
        assert_eq!(moment_direct(&two, 2).unwrap(), int(2));
        let u = ChaosCoefficients::uniform(2, 3).unwrap();
        assert_eq!(moment_direct(&u, 4).unwrap(), int(21));
        assert_eq!(moment_combinatorial(&u, 4).unwrap(), int(21));
        assert_eq!(moment_combinatorial(&two, 2).unwrap(), int(2));
    }

    #[test]
    fn odd_exponent_rejected() {
        let u = ChaosCoefficients::uniform(2, 3).unwrap();
        assert_eq!(moment_combinatorial(&u, 3), Err(Error::OddExponent(3)));
    }

    #[test]
    fn malformed_keys_rejected() {
        assert!(ChaosCoefficients::new(2, [(vec![1, 1], int(1))]).is_err());
        assert!(ChaosCoefficients::new(2, [(vec![0, 1], int(1))]).is_err());
        assert!(ChaosCoefficients::new(2, [(vec![1, 2, 3], int(1))]).is_err());
    }

    #[test]
    fn direct_limit() {
        let b = coeffs(2, &[(&[1, 26], 1)]);
        assert!(matches!(
            moment_direct(&b, 2),
            Err(Error::SizeLimitExceeded { .. })
        ));
        assert_eq!(moment_direct_with_limit(&b, 2, 1 << 26).unwrap(), int(1));
    }

    #[test]
    fn classical_cauchy_schwarz() {
        let v = VariableCovering::new(
            vec![vec![1], vec![1]],
            2,
            vec![vec![int(1), int(2)], vec![int(2), int(1)]],
        )
        .unwrap();
        let c = gen_cauchy_schwarz_check(&v).unwrap();
        assert_eq!(c.lhs, BigInt::from(4));
        assert_eq!(&c.lhs * &c.lhs, BigInt::from(16));
        assert_eq!(c.rhs_sq, BigInt::from(25));
        assert!(c.holds);
    }

    #[test]
    fn khintchine_fourth() {
        for n in 1..=10u64 {
            let r = khintchine_reference(4, n).unwrap();
            let want = int(3) - BigRational::new(BigInt::from(2), BigInt::from(n));
            assert_eq!(r.value, want);
        }
    }

    #[test]
    fn lower_chain_values() {
        let c = zlm_lower_chain(2, 4, 6, &BigUint::one()).unwrap();
        assert_eq!(c.rhs, int(15));
        assert!(c.holds);
    }

    #[test]
    fn norm_of_single_term() {
        let single = coeffs(3, &[(&[1, 2, 5], 1)]);
        for p in [1.0, 2.0, 3.0, 4.5] {
            assert!((norm_p(&single, p).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
