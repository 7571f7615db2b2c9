//! Exact binomial and multinomial coefficients, Stirling numbers of both
//! kinds and the Stirling transform.
//!
//! Stirling numbers are served from a lazily grown, shared [`StirlingTable`].
//! Arguments outside the triangle (`k < 0` or `k > n`) give zero.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    // every prefix product is itself a binomial, so the division is exact
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `n! / (p_1! ... p_r!)` when the parts sum to `n`, zero otherwise.
pub fn multinomial(n: u64, parts: &[u64]) -> BigInt {
    let total: u128 = parts.iter().map(|&p| p as u128).sum();
    if total != n as u128 {
        return BigInt::zero();
    }
    let denominator = parts
        .iter()
        .fold(BigInt::one(), |acc, &p| acc * factorial(p));
    factorial(n) / denominator
}

/// Number of partitions of an `n`-set into `k` nonempty blocks.
pub fn stirling2(n: usize, k: i64) -> BigInt {
    StirlingTable::global().second(n, k)
}

/// Number of permutations of `n` elements with exactly `k` cycles.
pub fn stirling1_unsigned(n: usize, k: i64) -> BigInt {
    StirlingTable::global().first_unsigned(n, k)
}

/// `(-1)^(n-k) * stirling1_unsigned(n, k)`.
pub fn stirling1_signed(n: usize, k: i64) -> BigInt {
    let value = stirling1_unsigned(n, k);
    if (n as i64 - k).rem_euclid(2) == 1 {
        -value
    } else {
        value
    }
}

/// Number of partitions of an `n`-set.
pub fn bell(n: usize) -> BigInt {
    StirlingTable::global().row_second(n).into_iter().sum()
}

/// `b_l = sum_{i=1}^{l} S2(l, i) * a_i`, with both sequences indexed from 1.
pub fn stirling_transform(a: &[BigInt]) -> Vec<BigInt> {
    let table = StirlingTable::global();
    table.reserve(a.len());
    (1..=a.len())
        .map(|l| {
            a.iter()
                .take(l)
                .enumerate()
                .map(|(i, a_i)| table.second(l, i as i64 + 1) * a_i)
                .sum()
        })
        .collect()
}

#[derive(Debug, Default)]
struct Triangles {
    second: Vec<Vec<BigInt>>,
    first: Vec<Vec<BigInt>>,
}

impl Triangles {
    fn len(&self) -> usize {
        self.second.len()
    }

    fn grow_to(&mut self, rows: usize) {
        if self.second.is_empty() && rows > 0 {
            self.second.push(vec![BigInt::one()]);
            self.first.push(vec![BigInt::one()]);
        }
        while self.second.len() < rows {
            let n = self.second.len() - 1;
            let prev2 = &self.second[n];
            let prev1 = &self.first[n];
            let mut next2 = vec![BigInt::zero(); n + 2];
            let mut next1 = vec![BigInt::zero(); n + 2];
            for k in 1..=n + 1 {
                let stay2 = prev2.get(k).map_or_else(BigInt::zero, |v| v * k);
                next2[k] = stay2 + &prev2[k - 1];
                let stay1 = prev1.get(k).map_or_else(BigInt::zero, |v| v * n);
                next1[k] = stay1 + &prev1[k - 1];
            }
            self.second.push(next2);
            self.first.push(next1);
        }
    }
}

/// Memoized triangles of Stirling numbers of the second kind and unsigned
/// Stirling numbers of the first kind.
///
/// Rows are appended whole under a write lock, so readers only ever see
/// complete rows. Reading entry `(n, k)` materializes every row up to `n`.
#[derive(Debug, Default)]
pub struct StirlingTable {
    rows: RwLock<Triangles>,
}

impl StirlingTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// A table with rows `0..=max_n` already built.
    pub fn with_max_n(max_n: usize) -> Self {
        let table = Self::new();
        table.reserve(max_n);
        table
    }

    /// The process-wide table used by the free functions of this module.
    pub fn global() -> &'static StirlingTable {
        static TABLE: OnceLock<StirlingTable> = OnceLock::new();
        TABLE.get_or_init(StirlingTable::new)
    }

    /// Ensures rows `0..=max_n` exist.
    pub fn reserve(&self, max_n: usize) {
        if self.rows.read().expect("stirling table poisoned").len() > max_n {
            return;
        }
        self.rows
            .write()
            .expect("stirling table poisoned")
            .grow_to(max_n + 1);
    }

    /// Largest `n` with a materialized row, if any.
    pub fn max_n(&self) -> Option<usize> {
        self.rows
            .read()
            .expect("stirling table poisoned")
            .len()
            .checked_sub(1)
    }

    pub fn second(&self, n: usize, k: i64) -> BigInt {
        self.lookup(n, k, |t| &t.second)
    }

    pub fn first_unsigned(&self, n: usize, k: i64) -> BigInt {
        self.lookup(n, k, |t| &t.first)
    }

    pub fn row_second(&self, n: usize) -> Vec<BigInt> {
        self.reserve(n);
        self.rows.read().expect("stirling table poisoned").second[n].clone()
    }

    pub fn row_first_unsigned(&self, n: usize) -> Vec<BigInt> {
        self.reserve(n);
        self.rows.read().expect("stirling table poisoned").first[n].clone()
    }

    fn lookup(&self, n: usize, k: i64, pick: impl Fn(&Triangles) -> &Vec<Vec<BigInt>>) -> BigInt {
        if k < 0 || k as u64 > n as u64 {
            return BigInt::zero();
        }
        self.reserve(n);
        let rows = self.rows.read().expect("stirling table poisoned");
        pick(&rows)[n][k as usize].clone()
    }
}
