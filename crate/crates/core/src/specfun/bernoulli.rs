//! Exact Bernoulli numbers.
//!
//! Even-index values come from the tangent numbers T_k (tan x = sum T_k
//! x^(2k-1)/(2k-1)!), which obey an all-integer recurrence:
//!
//!   B_2k = (-1)^(k-1) 2k T_k / (2^2k (2^2k - 1)).
//!
//! Results are cached process-wide; the cache only ever grows.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use spin::RwLock;

/// B_0, B_2, B_4, ... (index k holds B_2k).
static EVEN: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Tangent numbers T_1..=T_m.
fn tangent_numbers(m: usize) -> Vec<BigUint> {
    let mut t: Vec<BigUint> = vec![BigUint::zero(); m + 1];
    if m == 0 {
        return t;
    }
    t[1] = BigUint::one();
    for k in 2..=m {
        t[k] = &t[k - 1] * BigUint::from(k - 1);
    }
    for k in 2..=m {
        for j in k..=m {
            t[j] = &t[j - 1] * BigUint::from(j - k) + &t[j] * BigUint::from(j - k + 2);
        }
    }
    t
}

fn even_bernoulli_upto(m: usize) -> Vec<BigRational> {
    let t = tangent_numbers(m);
    let mut out = Vec::with_capacity(m + 1);
    out.push(BigRational::one());
    for (k, tk) in t.iter().enumerate().skip(1) {
        let pow = BigInt::one() << (2 * k);
        let num = BigInt::from(2 * k) * BigInt::from(tk.clone());
        let den = &pow * (&pow - BigInt::one());
        let b = BigRational::new(num, den);
        out.push(if k % 2 == 1 { b } else { -b });
    }
    out
}

/// Exact B_n.
pub fn bernoulli(n: usize) -> BigRational {
    if n == 1 {
        return BigRational::new(BigInt::from(-1), BigInt::from(2));
    }
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let k = n / 2;
    {
        let cache = EVEN.read();
        if let Some(b) = cache.get(k) {
            return b.clone();
        }
    }
    let mut cache = EVEN.write();
    if cache.len() <= k {
        // grow geometrically so repeated small extensions stay cheap
        let target = k.max(2 * cache.len()).max(32);
        *cache = even_bernoulli_upto(target);
    }
    cache[k].clone()
}

/// Snapshot of B_0 ..= B_2M.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn new(m: usize) -> Self {
        Self {
            values: (0..=2 * m).map(bernoulli).collect(),
        }
    }

    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.values.get(n)
    }

    /// Largest stored index 2M.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// Exact Bernoulli polynomial B_n(x) = sum_k C(n,k) B_k x^(n-k).
pub fn bernoulli_polynomial(n: usize, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
        }
        let b = bernoulli(k);
        if b.is_zero() {
            continue;
        }
        let mut p = BigRational::one();
        for _ in 0..(n - k) {
            p *= x;
        }
        acc += BigRational::from_integer(binom.clone()) * b * p;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn odd_indices_vanish() {
        for k in 1..40 {
            assert!(bernoulli(2 * k + 1).is_zero());
        }
    }

    #[test]
    fn table_snapshot() {
        let t = BernoulliTable::new(5);
        assert_eq!(t.max_index(), 10);
        assert_eq!(t.get(10), Some(&q(5, 66)));
        assert_eq!(t.get(11), None);
    }

    #[test]
    fn polynomial_values() {
        // B_2(x) = x^2 - x + 1/6
        assert_eq!(bernoulli_polynomial(2, &q(1, 5)), q(1, 150));
        // B_1(x) = x - 1/2
        assert_eq!(bernoulli_polynomial(1, &q(1, 5)), q(-3, 10));
        // symmetry B_n(1 - x) = (-1)^n B_n(x)
        for n in 0..9 {
            let a = bernoulli_polynomial(n, &q(2, 5));
            let b = bernoulli_polynomial(n, &q(3, 5));
            if n % 2 == 0 {
                assert_eq!(a, b);
            } else {
                assert_eq!(a, -b);
            }
        }
    }
}
