//! Binomial coefficients (machine, big-integer and log-space) and colex
//! ranking of k-subsets.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::kset::KSet;

/// `C(n, k)` if it fits in a `u64`.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `ln C(n, k)` for real `n ≥ k ≥ 0`.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// Falling factorial `(a)_b = a(a-1)...(a-b+1)` as a big integer.
pub fn falling_factorial_big(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::default();
    }
    (0..b).fold(BigUint::one(), |acc, i| acc * (a - i))
}

/// Pascal table used for colex rank/unrank of k-subsets of `[n]`.
///
/// The colex rank of `{c_1 < ... < c_k}` (0-based) is `Σ C(c_i, i)`.
#[derive(Debug, Clone)]
pub struct ColexTable {
    n: usize,
    k: usize,
    // table[c][i] = C(c, i) for c <= n, i <= k
    table: Vec<Vec<u64>>,
    total: u64,
}

impl ColexTable {
    /// Fails when `C(n, k)` does not fit in a `u64`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let total = binomial_u64(n as u64, k as u64).ok_or(Error::Resource {
            what: "C(n,k) exceeds u64 ranks",
            limit: u64::MAX,
            actual: u64::MAX,
        })?;
        let mut table = vec![vec![0u64; k + 1]; n + 1];
        for c in 0..=n {
            table[c][0] = 1;
            for i in 1..=k.min(c) {
                // every entry is at most C(n, k) once i <= k and c <= n
                table[c][i] = table[c - 1][i - 1].saturating_add(table[c - 1][i]);
            }
        }
        Ok(Self { n, k, table, total })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn rank(&self, set: &KSet) -> u64 {
        set.iter()
            .enumerate()
            .map(|(i, c)| self.table[c][i + 1])
            .sum()
    }

    pub fn unrank(&self, mut rank: u64) -> KSet {
        debug_assert!(rank < self.total);
        let mut set = KSet::empty();
        let mut hi = self.n;
        for i in (1..=self.k).rev() {
            // largest c < hi with C(c, i) <= rank
            let mut c = hi - 1;
            while self.table[c][i] > rank {
                c -= 1;
            }
            rank -= self.table[c][i];
            set.insert(c);
            hi = c;
        }
        set
    }

    /// All k-subsets of `[n]` in colex order.
    pub fn iter(&self) -> impl Iterator<Item = KSet> + '_ {
        (0..self.total).map(move |r| self.unrank(r))
    }
}
