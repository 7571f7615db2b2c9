//! Closed-form expressions for expected degrees and the related identities.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, stirling1_unsigned, stirling2};
use crate::{Error, Rational, Result};

/// Sizes `(n_1, .., n_{t+1})` of the sets in a chain
/// `X_1 -> X_2 -> .. -> X_{t+1}` of `t` random functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ChainSpec(Vec<usize>);

impl ChainSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::InvalidChain);
        }
        Ok(ChainSpec(sizes))
    }

    /// `n` repeated `t + 1` times.
    pub fn iterate(n: usize, t: usize) -> Result<Self> {
        Self::new(vec![n; t + 1])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    /// Number of functions in the chain.
    pub fn links(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// `prod_s n_{s+1}^{n_s}`, the number of function tuples in the chain.
    pub fn tuple_count(&self) -> BigInt {
        self.0
            .windows(2)
            .map(|w| num_traits::pow(BigInt::from(w[1]), w[0]))
            .product()
    }
}

impl TryFrom<Vec<usize>> for ChainSpec {
    type Error = Error;
    fn try_from(sizes: Vec<usize>) -> Result<Self> {
        ChainSpec::new(sizes)
    }
}

impl From<ChainSpec> for Vec<usize> {
    fn from(spec: ChainSpec) -> Self {
        spec.0
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ChainSpec {
    type Err = Error;

    /// Comma-separated sizes, e.g. `2,2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut sizes = Vec::new();
        let mut column = 1;
        for part in s.split(',') {
            let value = part.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                column,
                message: format!("expected a positive integer, found `{}`", part.trim()),
            })?;
            sizes.push(value);
            column += part.len() + 1;
        }
        ChainSpec::new(sizes)
    }
}

/// Expected degree of `f_t ∘ .. ∘ f_1` over uniformly random functions
/// `f_s: X_s -> X_{s+1}`:
/// `(prod n_s - prod (n_s - 1)) / prod_{s >= 2} n_s`.
pub fn expected_degree_chain(spec: &ChainSpec) -> Rational {
    let sizes = spec.sizes();
    let all: BigInt = sizes.iter().map(|&n| BigInt::from(n)).product();
    let reduced: BigInt = sizes.iter().map(|&n| BigInt::from(n - 1)).product();
    let tail: BigInt = sizes[1..].iter().map(|&n| BigInt::from(n)).product();
    Rational::new(all - reduced, tail)
}

/// Expected degree of the composition of `t` random endofunctions of an
/// `n`-set: `(n^{t+1} - (n-1)^{t+1}) / n^t`.
pub fn expected_degree_iterate(n: usize, t: usize) -> Result<Rational> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidSize(format!(
            "need n >= 1 and t >= 1, got n={n}, t={t}"
        )));
    }
    let n_big = BigInt::from(n);
    let numerator =
        num_traits::pow(n_big.clone(), t + 1) - num_traits::pow(BigInt::from(n - 1), t + 1);
    Ok(Rational::new(numerator, num_traits::pow(n_big, t)))
}

/// Coefficients `(-1)^s C(t+1, s+1)` for `s = 0..=t`, so that
/// `sum_s c_s n^{t-s} = n^{t+1} - (n-1)^{t+1}`.
pub fn pascal_beheaded_coeffs(t: usize) -> Vec<BigInt> {
    (0..=t)
        .map(|s| {
            let c = binomial(t as u64 + 1, s as i64 + 1);
            if s % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `sum_{j=1}^{k} (-1)^{k-j} [k, j] n^{j-1}`.
fn signed_first_kind_poly(k: usize, n: usize) -> BigInt {
    let n = BigInt::from(n);
    (1..=k)
        .map(|j| {
            let term = stirling1_unsigned(k, j as i64) * num_traits::pow(n.clone(), j - 1);
            if (k - j) % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// `sum_{k=1}^{q} S2(q, k) * poly_k(n) * m^{q-k}`, the common core of the
/// power-sum formulas.
fn power_sum_core(n: usize, m: usize, q: u32) -> BigInt {
    let q = q as usize;
    let m = BigInt::from(m);
    (1..=q)
        .map(|k| {
            stirling2(q, k as i64)
                * signed_first_kind_poly(k, n)
                * num_traits::pow(m.clone(), q - k)
        })
        .sum()
}

fn check_sizes(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidSize(format!(
            "set sizes must be positive, got n={n}, m={m}"
        )));
    }
    Ok(())
}

/// Expected `deg(f, q)` over uniformly random `f: X -> Y`, `|X| = n`,
/// `|Y| = m`:
/// `m^{1-q} sum_{k=1}^{q} S2(q,k) (sum_{j=1}^{k} (-1)^{k-j} [k,j] n^{j-1}) m^{q-k}`.
pub fn expected_degree_q(n: usize, m: usize, q: u32) -> Result<Rational> {
    check_sizes(n, m)?;
    if q == 0 {
        return Err(Error::InvalidExponent(q));
    }
    let m_pow = num_traits::pow(BigInt::from(m), q as usize - 1);
    Ok(Rational::new(power_sum_core(n, m, q), m_pow))
}

/// Closed form of `sum_{k_1+..+k_m = n} C(n; k) * sum_i k_i^q`.
///
/// For `q >= 1` this is `n m^{n-(q-1)} * core`, where the power of `m` may be
/// negative; the product is evaluated in rationals and is always an integer.
/// For `q = 0` it is `m^{n+1}` (with `0^0 = 1`).
pub fn closed_multinomial_power_sum(n: usize, m: usize, q: u32) -> Result<BigInt> {
    check_sizes(n, m)?;
    if q == 0 {
        return Ok(num_traits::pow(BigInt::from(m), n + 1));
    }
    let exponent = n as i64 - (q as i64 - 1);
    let value = Rational::from_integer(n as i64)
        * Rational::from_integer(m as i64).pow(exponent as i32)
        * Rational::from_integer(power_sum_core(n, m, q));
    Ok(value
        .to_integer()
        .unwrap_or_else(|| panic!("power sum for n={n}, m={m}, q={q} is not an integer: {value}")))
}

/// `sum_{j=1}^{q-k} S2(q, k+j) [k+j, j]`.
fn corollary_inner(q: usize, k: usize) -> BigInt {
    (1..=q - k)
        .map(|j| stirling2(q, (k + j) as i64) * stirling1_unsigned(k + j, j as i64))
        .sum()
}

/// `sum_{k=0}^{q-1} (-1)^k sum_{j=1}^{q-k} S2(q, k+j) [k+j, j]`, which equals
/// 1 for every `q >= 1`.
pub fn corollary_identity_value(q: u32) -> Result<BigInt> {
    if q == 0 {
        return Err(Error::InvalidExponent(q));
    }
    let q = q as usize;
    Ok((0..q)
        .map(|k| {
            let inner = corollary_inner(q, k);
            if k % 2 == 1 {
                -inner
            } else {
                inner
            }
        })
        .sum())
}

/// `n^{n-(q-2)} sum_{k=0}^{q-1} (-1)^k (sum_{j=1}^{q-k} S2(q,k+j) [k+j,j]) n^{q-k-1}`,
/// the endofunction (`m = n`) case of [`closed_multinomial_power_sum`] in
/// Stirling-transform form.
pub fn corollary_main_rhs(n: usize, q: u32) -> Result<BigInt> {
    check_sizes(n, n)?;
    if q == 0 {
        return Err(Error::InvalidExponent(q));
    }
    let qs = q as usize;
    let n_big = BigInt::from(n);
    let sum: BigInt = (0..qs)
        .map(|k| {
            let term = corollary_inner(qs, k) * num_traits::pow(n_big.clone(), qs - k - 1);
            if k % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum();
    let exponent = n as i64 - (q as i64 - 2);
    let value = Rational::from_integer(n as i64).pow(exponent as i32) * Rational::from_integer(sum);
    Ok(value
        .to_integer()
        .unwrap_or_else(|| panic!("corollary value for n={n}, q={q} is not an integer: {value}")))
}

/// Evaluates `sum_s coeffs[s] * n^{len-1-s}`.
pub fn evaluate_descending(coeffs: &[BigInt], n: &BigInt) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, c| acc * n + c)
}

/// `t + 1`, the large-`n` limit of [`expected_degree_iterate`].
pub fn iterate_limit(t: usize) -> Rational {
    Rational::from_integer(t as i64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn chain(sizes: &[usize]) -> ChainSpec {
        ChainSpec::new(sizes.to_vec()).unwrap()
    }

    #[test]
    fn chain_spec_validation() {
        assert_eq!(ChainSpec::new(vec![3]), Err(Error::InvalidChain));
        assert_eq!(ChainSpec::new(vec![2, 0]), Err(Error::InvalidChain));
        assert_eq!("2, 2,2".parse::<ChainSpec>().unwrap(), chain(&[2, 2, 2]));
        assert!(matches!(
            "2,x".parse::<ChainSpec>(),
            Err(Error::Parse { column: 3, .. })
        ));
        assert_eq!(chain(&[2, 3, 4]).tuple_count(), BigInt::from(9 * 64));
        assert_eq!(chain(&[2, 3, 4]).to_string(), "2,3,4");
        assert!(serde_json::from_str::<ChainSpec>("[1]").is_err());
    }

    #[test]
    fn chain_values() {
        assert_eq!(expected_degree_chain(&chain(&[2, 2])), r(3, 2));
        assert_eq!(expected_degree_chain(&chain(&[1, 1, 1, 1])), r(1, 1));
        assert_eq!(expected_degree_chain(&chain(&[2, 2, 2])), r(7, 4));
        assert_eq!(expected_degree_chain(&chain(&[3, 1, 3])), r(3, 1));
        assert_eq!(expected_degree_chain(&chain(&[3, 3])), r(5, 3));
    }

    #[test]
    fn chain_range_and_singleton_collapse() {
        let mut sizes = vec![Vec::new()];
        for _ in 0..3 {
            sizes = sizes
                .into_iter()
                .flat_map(|s: Vec<usize>| {
                    (1..=6).map(move |n| {
                        let mut s = s.clone();
                        s.push(n);
                        s
                    })
                })
                .collect();
            for s in sizes.iter().filter(|s| s.len() >= 2) {
                let spec = chain(s);
                let value = expected_degree_chain(&spec);
                let n1 = Rational::from_integer(s[0] as i64);
                assert!(value >= Rational::one() && value <= n1, "{spec}");
                if s[1..].contains(&1) {
                    assert_eq!(value, n1, "{spec}");
                }
            }
        }
    }

    #[test]
    fn iterate_values() {
        for t in 1..6 {
            assert_eq!(expected_degree_iterate(1, t).unwrap(), Rational::one());
        }
        assert_eq!(expected_degree_iterate(2, 1).unwrap(), r(3, 2));
        assert_eq!(expected_degree_iterate(2, 2).unwrap(), r(7, 4));
        assert_eq!(expected_degree_iterate(10, 2).unwrap(), r(271, 100));
        assert!(expected_degree_iterate(0, 1).is_err());
        assert!(expected_degree_iterate(3, 0).is_err());
        for n in 1..8 {
            for t in 1..5 {
                assert_eq!(
                    expected_degree_iterate(n, t).unwrap(),
                    expected_degree_chain(&ChainSpec::iterate(n, t).unwrap())
                );
            }
        }
    }

    #[test]
    fn pascal_rows() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(pascal_beheaded_coeffs(1), ints(&[2, -1]));
        assert_eq!(pascal_beheaded_coeffs(2), ints(&[3, -3, 1]));
        assert_eq!(pascal_beheaded_coeffs(3), ints(&[4, -6, 4, -1]));
        for t in 1..=10usize {
            let coeffs = pascal_beheaded_coeffs(t);
            for n in 0..=10i64 {
                let n = BigInt::from(n);
                let expected = num_traits::pow(n.clone(), t + 1) - num_traits::pow(&n - 1, t + 1);
                assert_eq!(evaluate_descending(&coeffs, &n), expected);
            }
        }
    }

    #[test]
    fn limit_gap_bound() {
        let n = 1_000_000;
        for t in 1..=6 {
            let gap = (expected_degree_iterate(n, t).unwrap() - iterate_limit(t)).abs();
            let bound = Rational::new(binomial(t as u64 + 1, 2), n as i64);
            assert!(gap <= bound, "t={t}");
        }
    }

    #[test]
    fn degree_q_values() {
        for n in 1..6 {
            for m in 1..6 {
                assert_eq!(expected_degree_q(n, m, 1).unwrap(), Rational::one());
                assert_eq!(
                    expected_degree_q(n, m, 2).unwrap(),
                    r((n + m - 1) as i64, m as i64)
                );
            }
        }
        assert_eq!(expected_degree_q(2, 2, 3).unwrap(), r(5, 2));
        assert_eq!(expected_degree_q(2, 2, 0), Err(Error::InvalidExponent(0)));
        assert!(expected_degree_q(0, 2, 2).is_err());
        for n in 1..=50 {
            assert_eq!(
                expected_degree_q(n, n, 2).unwrap(),
                expected_degree_iterate(n, 1).unwrap()
            );
        }
    }

    #[test]
    fn power_sum_values() {
        assert_eq!(
            closed_multinomial_power_sum(2, 2, 2).unwrap(),
            BigInt::from(12)
        );
        for n in 1..5 {
            for m in 1..5 {
                assert_eq!(
                    closed_multinomial_power_sum(n, m, 0).unwrap(),
                    num_traits::pow(BigInt::from(m), n + 1)
                );
            }
        }
        assert_eq!(
            closed_multinomial_power_sum(1, 3, 5).unwrap(),
            BigInt::from(3)
        );
        // q > n + 1 makes the power of m negative
        assert_eq!(
            closed_multinomial_power_sum(1, 3, 9).unwrap(),
            BigInt::from(3)
        );
    }

    #[test]
    fn corollary_values() {
        for q in 1..=3 {
            assert_eq!(corollary_identity_value(q).unwrap(), BigInt::from(1));
        }
        assert_eq!(corollary_main_rhs(2, 2).unwrap(), BigInt::from(12));
        for q in 1..8 {
            assert_eq!(corollary_main_rhs(1, q).unwrap(), BigInt::from(1));
        }
        assert_eq!(corollary_main_rhs(3, 1).unwrap(), BigInt::from(81));
        for n in 1..=5 {
            for q in 1..=6 {
                assert_eq!(
                    corollary_main_rhs(n, q).unwrap(),
                    closed_multinomial_power_sum(n, n, q).unwrap()
                );
            }
        }
        assert!(corollary_identity_value(0).is_err());
    }
}
