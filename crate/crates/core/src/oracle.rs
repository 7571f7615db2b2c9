//! Independent computation paths used to check the closed forms: full
//! enumeration over function tuples, the nested multinomial expansion over
//! fiber-size profiles, and direct evaluation of both sides of identities.
//!
//! Nothing here calls into [`crate::closed_form`] except the `verify_*`
//! helpers, which pair an oracle value with its closed-form counterpart.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{
    closed_multinomial_power_sum, corollary_identity_value, corollary_main_rhs,
    expected_degree_chain, expected_degree_q,
};
use crate::combinatorics::multinomial;
use crate::compositions::WeakCompositions;
use crate::function::{fiber_sizes_of, sum_of_squares};
use crate::{ChainSpec, Error, FiniteFunction, Rational, Result};

/// Cap on the number of objects an oracle may enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    max_states: BigUint,
}

impl EnumerationBudget {
    pub const DEFAULT_MAX_STATES: u64 = 1_000_000;

    pub fn new(max_states: impl Into<BigUint>) -> Result<Self> {
        let max_states = max_states.into();
        if max_states.is_zero() {
            return Err(Error::InvalidSize("budget must be at least 1".into()));
        }
        Ok(EnumerationBudget { max_states })
    }

    pub fn max_states(&self) -> &BigUint {
        &self.max_states
    }

    pub fn check(&self, required: &BigUint) -> Result<()> {
        if required > &self.max_states {
            return Err(Error::BudgetExceeded {
                required: required.to_string(),
                budget: self.max_states.to_string(),
            });
        }
        Ok(())
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_states: BigUint::from(Self::DEFAULT_MAX_STATES),
        }
    }
}

/// One oracle-versus-closed-form comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: BTreeMap<String, i64>,
    pub oracle_value: Rational,
    pub closed_value: Rational,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        parameters: impl IntoIterator<Item = (String, i64)>,
        oracle_value: Rational,
        closed_value: Rational,
    ) -> Self {
        let matches = oracle_value == closed_value;
        VerificationReport {
            check: check.into(),
            parameters: parameters.into_iter().collect(),
            oracle_value,
            closed_value,
            matches,
        }
    }
}

/// Advances an image sequence as a base-`radix` odometer, last position
/// fastest. Returns `false` after the final sequence.
fn advance(images: &mut [usize], radix: usize) -> bool {
    for slot in images.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Every function `{0..n} -> {0..m}` exactly once, in lexicographic order of
/// the image sequence.
#[derive(Clone, Debug)]
pub struct FunctionEnumerator {
    codomain_size: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for FunctionEnumerator {
    type Item = FiniteFunction;

    fn next(&mut self) -> Option<FiniteFunction> {
        let images = self.next.take()?;
        let mut following = images.clone();
        if advance(&mut following, self.codomain_size) {
            self.next = Some(following);
        }
        Some(FiniteFunction::from_parts_unchecked(
            self.codomain_size,
            images,
        ))
    }
}

/// Streams all `m^n` functions. Empty when either size is zero.
pub fn enumerate_functions(domain_size: usize, codomain_size: usize) -> FunctionEnumerator {
    let next = (domain_size > 0 && codomain_size > 0).then(|| vec![0; domain_size]);
    FunctionEnumerator {
        codomain_size,
        next,
    }
}

pub fn function_count(domain_size: usize, codomain_size: usize) -> BigUint {
    Pow::pow(BigUint::from(codomain_size), domain_size)
}

/// Collects all functions after checking `m^n` against the budget.
pub fn collect_functions(
    domain_size: usize,
    codomain_size: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<FiniteFunction>> {
    if domain_size == 0 || codomain_size == 0 {
        return Err(Error::EmptySet);
    }
    budget.check(&function_count(domain_size, codomain_size))?;
    Ok(enumerate_functions(domain_size, codomain_size).collect())
}

/// Exact average of `deg(f_t ∘ .. ∘ f_1)` over all tuples of functions along
/// the chain, by enumeration.
pub fn brute_expected_degree_chain(
    spec: &ChainSpec,
    budget: &EnumerationBudget,
) -> Result<Rational> {
    brute_expected_degree_chain_threaded(spec, budget, 1)
}

/// As [`brute_expected_degree_chain`], splitting the work by the first image
/// of `f_1` across `threads` workers. The integer partial sums are merged
/// exactly, so the result does not depend on `threads`.
pub fn brute_expected_degree_chain_threaded(
    spec: &ChainSpec,
    budget: &EnumerationBudget,
    threads: usize,
) -> Result<Rational> {
    let tuples = spec.tuple_count();
    budget.check(&tuples.to_biguint().expect("counts are nonnegative"))?;
    let sizes = spec.sizes();
    let n1 = sizes[0];
    let branch = |first_image: usize| -> u128 {
        let mut first = vec![0usize; n1];
        first[0] = first_image;
        let mut total = 0u128;
        loop {
            total += chain_tail_sum(sizes, 1, &first);
            if !advance(&mut first[1..], sizes[1]) {
                break;
            }
        }
        total
    };
    let total: u128 = if threads <= 1 {
        (0..sizes[1]).map(branch).sum()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidSize(format!("thread pool: {e}")))?
            .install(|| (0..sizes[1]).into_par_iter().map(branch).sum())
    };
    Ok(Rational::new(total, BigInt::from(n1) * tuples))
}

/// Sum over all functions from `level` onwards of `sum_y |fiber|^2` of the
/// full composite, given the composite `X_1 -> X_{level+1}` so far.
fn chain_tail_sum(sizes: &[usize], level: usize, composite: &[usize]) -> u128 {
    let last = sizes.len() - 1;
    if level == last {
        return sum_of_squares(&fiber_sizes_of(composite, sizes[last]));
    }
    let (domain, codomain) = (sizes[level], sizes[level + 1]);
    let mut step = vec![0usize; domain];
    let mut next = vec![0usize; composite.len()];
    let mut total = 0u128;
    loop {
        for (slot, &x) in next.iter_mut().zip(composite) {
            *slot = step[x];
        }
        total += chain_tail_sum(sizes, level + 1, &next);
        if !advance(&mut step, codomain) {
            return total;
        }
    }
}

/// `prod_i base_i^{exp_i}` with `0^0 = 1`.
fn power_product(bases: &[usize], exponents: &[usize]) -> BigInt {
    let mut product = BigInt::one();
    for (&b, &e) in bases.iter().zip(exponents) {
        if e == 0 {
            continue;
        }
        if b == 0 {
            return BigInt::zero();
        }
        product *= Pow::pow(BigInt::from(b), e);
    }
    product
}

fn to_u64s(parts: &[usize]) -> Vec<u64> {
    parts.iter().map(|&p| p as u64).collect()
}

/// The expected chain degree from the nested sum over fiber-size profiles.
///
/// With `N = n_{t+1}`, level `s` ranges over weak compositions `k_s` of `n_s`
/// into `N` parts, where `k_{s,i}` is the size of the preimage in `X_s` of the
/// `i`-th element of `X_{t+1}`. A function `X_s -> X_{s+1}` realizes `k_s`
/// over a fixed `k_{s+1}` in `C(n_s; k_s) prod_i k_{s+1,i}^{k_{s,i}}` ways.
/// The innermost weight is `sum_i k_{1,i}^2`, and the total is divided by
/// `n_1 prod_s n_{s+1}^{n_s}`.
pub fn multinomial_expected_degree_chain(
    spec: &ChainSpec,
    budget: &EnumerationBudget,
) -> Result<Rational> {
    let sizes = spec.sizes();
    let t = spec.links();
    let parts = spec.last();
    for &n in &sizes[..t] {
        budget.check(&WeakCompositions::count(n, parts))?;
    }

    // weights for level t, then folded down to level 1
    let mut upper: Vec<(Vec<usize>, BigInt)> = WeakCompositions::new(sizes[t - 1], parts)
        .map(|k| {
            let w = multinomial(sizes[t - 1] as u64, &to_u64s(&k));
            (k, w)
        })
        .collect();
    for level in (0..t - 1).rev() {
        let n = sizes[level];
        upper = WeakCompositions::new(n, parts)
            .map(|k| {
                let inner: BigInt = upper
                    .iter()
                    .map(|(above, w)| w * power_product(above, &k))
                    .sum();
                let w = multinomial(n as u64, &to_u64s(&k)) * inner;
                (k, w)
            })
            .filter(|(_, w)| !w.is_zero())
            .collect();
    }
    let total: BigInt = upper
        .iter()
        .map(|(k, w)| w * BigInt::from(sum_of_squares(k)))
        .sum();
    Ok(Rational::new(
        total,
        BigInt::from(spec.first()) * spec.tuple_count(),
    ))
}

/// Exact average of `deg(f, q)` over all `m^n` functions, by enumeration.
pub fn brute_expected_degree_q(
    n: usize,
    m: usize,
    q: u32,
    budget: &EnumerationBudget,
) -> Result<Rational> {
    if q == 0 {
        return Err(Error::InvalidExponent(q));
    }
    if n == 0 || m == 0 {
        return Err(Error::EmptySet);
    }
    let count = function_count(n, m);
    budget.check(&count)?;
    let total: BigInt = enumerate_functions(n, m)
        .map(|f| {
            f.fiber_sizes()
                .into_iter()
                .map(|k| Pow::pow(BigInt::from(k), q))
                .sum::<BigInt>()
        })
        .sum();
    Ok(Rational::new(total, BigInt::from(n) * BigInt::from(count)))
}

/// `sum_{k_1+..+k_m = n} C(n; k) * sum_i k_i^q` by direct summation, with
/// `0^0 = 1`.
pub fn multinomial_power_sum(
    n: usize,
    m: usize,
    q: u32,
    budget: &EnumerationBudget,
) -> Result<BigInt> {
    budget.check(&WeakCompositions::count(n, m))?;
    Ok(WeakCompositions::new(n, m)
        .map(|k| {
            let power_sum: BigInt = k.iter().map(|&ki| Pow::pow(BigInt::from(ki), q)).sum();
            multinomial(n as u64, &to_u64s(&k)) * power_sum
        })
        .sum())
}

/// Both sides of
/// `sum_{l_1+..+l_n = m} C(m; l) prod_i k_i^{l_i} sum_i l_i^2
///  = m(m-1) r^{m-2} sum_i k_i^2 + m r^m`, `r = sum_i k_i`.
///
/// When `m(m-1) = 0` the first right-hand term is taken as zero without
/// evaluating `r^{m-2}`.
pub fn identity_en_check(m: usize, k_parts: &[usize]) -> Result<VerificationReport> {
    if m == 0 || k_parts.is_empty() {
        return Err(Error::InvalidSize(format!(
            "need m >= 1 and at least one part, got m={m}, {} parts",
            k_parts.len()
        )));
    }
    let lhs: BigInt = WeakCompositions::new(m, k_parts.len())
        .map(|l| {
            multinomial(m as u64, &to_u64s(&l))
                * power_product(k_parts, &l)
                * BigInt::from(sum_of_squares(&l))
        })
        .sum();

    let r = BigInt::from(k_parts.iter().sum::<usize>());
    let square_sum = BigInt::from(sum_of_squares(k_parts));
    let m_big = BigInt::from(m);
    let pair_factor = BigInt::from(m * (m - 1));
    let first = if pair_factor.is_zero() {
        BigInt::zero()
    } else {
        pair_factor * Pow::pow(r.clone(), m - 2) * square_sum
    };
    let rhs = first + &m_big * Pow::pow(r, m);

    let mut parameters = vec![("m".to_string(), m as i64)];
    parameters.extend(
        k_parts
            .iter()
            .enumerate()
            .map(|(i, &k)| (format!("k{}", i + 1), k as i64)),
    );
    Ok(VerificationReport::new(
        "identity-en",
        parameters,
        lhs.into(),
        rhs.into(),
    ))
}

/// Exact mean of the largest fiber over all `m^n` functions.
pub fn brute_expected_max_fiber(
    n: usize,
    m: usize,
    budget: &EnumerationBudget,
) -> Result<Rational> {
    if n == 0 || m == 0 {
        return Err(Error::EmptySet);
    }
    let count = function_count(n, m);
    budget.check(&count)?;
    let total: u128 = enumerate_functions(n, m)
        .map(|f| f.max_fiber() as u128)
        .sum();
    Ok(Rational::new(total, BigInt::from(count)))
}

/// Counts partitions of `{0..n}` into exactly `k` nonempty blocks by walking
/// all restricted growth strings.
pub fn count_set_partitions(n: usize, k: usize) -> u64 {
    fn walk(pos: usize, n: usize, blocks: usize, k: usize) -> u64 {
        if blocks > k {
            return 0;
        }
        if pos == n {
            return (blocks == k) as u64;
        }
        // element `pos` joins an existing block or opens a new one
        (0..=blocks)
            .map(|b| walk(pos + 1, n, blocks.max(b + 1), k))
            .sum()
    }
    walk(0, n, 0, k)
}

/// Counts permutations of `n` elements with exactly `k` cycles by listing all
/// `n!` permutations.
pub fn count_permutations_by_cycles(n: usize, k: usize) -> u64 {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        if cycle_count(&perm) == k {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            return count;
        }
    }
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
        }
    }
    cycles
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
        return false;
    };
    let j = (i..perm.len())
        .rev()
        .find(|&j| perm[j] > perm[i - 1])
        .unwrap();
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn chain_parameters(spec: &ChainSpec) -> Vec<(String, i64)> {
    spec.sizes()
        .iter()
        .enumerate()
        .map(|(i, &n)| (format!("n{}", i + 1), n as i64))
        .collect()
}

/// Checks both oracle paths for a chain against the closed form. The
/// enumeration path is skipped when it would exceed the budget.
pub fn verify_chain(
    spec: &ChainSpec,
    budget: &EnumerationBudget,
    threads: usize,
) -> Result<Vec<VerificationReport>> {
    let closed = expected_degree_chain(spec);
    let mut reports = Vec::new();
    match brute_expected_degree_chain_threaded(spec, budget, threads) {
        Ok(value) => reports.push(VerificationReport::new(
            "chain-enumeration",
            chain_parameters(spec),
            value,
            closed.clone(),
        )),
        Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    let nested = multinomial_expected_degree_chain(spec, budget)?;
    reports.push(VerificationReport::new(
        "chain-multinomial",
        chain_parameters(spec),
        nested,
        closed,
    ));
    Ok(reports)
}

/// For each `q` in `1..=q_max`: the enumerated average of `deg(f, q)` against
/// its closed form, and the direct power sum against `n m^n` times it.
pub fn verify_degree_q(
    n: usize,
    m: usize,
    q_max: u32,
    budget: &EnumerationBudget,
) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let scale = Rational::from_integer(BigInt::from(n) * BigInt::from(function_count(n, m)));
    for q in 1..=q_max {
        let params = || {
            vec![
                ("n".to_string(), n as i64),
                ("m".to_string(), m as i64),
                ("q".to_string(), q as i64),
            ]
        };
        let closed = expected_degree_q(n, m, q)?;
        let brute = brute_expected_degree_q(n, m, q, budget)?;
        reports.push(VerificationReport::new(
            "degq-enumeration",
            params(),
            brute,
            closed.clone(),
        ));
        let power_sum = multinomial_power_sum(n, m, q, budget)?;
        reports.push(VerificationReport::new(
            "degq-power-sum",
            params(),
            power_sum.clone().into(),
            &scale * &closed,
        ));
        reports.push(VerificationReport::new(
            "power-sum-closed",
            params(),
            power_sum.into(),
            closed_multinomial_power_sum(n, m, q)?.into(),
        ));
    }
    Ok(reports)
}

/// The Stirling-transform identity for `q` in `1..=q_max`, and the
/// endofunction power-sum identity for `n <= n_max`, `q <= main_q_max`.
pub fn verify_corollary(
    q_max: u32,
    n_max: usize,
    main_q_max: u32,
    budget: &EnumerationBudget,
) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for q in 1..=q_max {
        reports.push(VerificationReport::new(
            "corollary-identity",
            [("q".to_string(), q as i64)],
            corollary_identity_value(q)?.into(),
            Rational::one(),
        ));
    }
    for n in 1..=n_max {
        for q in 1..=main_q_max {
            reports.push(VerificationReport::new(
                "corollary-power-sum",
                [("n".to_string(), n as i64), ("q".to_string(), q as i64)],
                multinomial_power_sum(n, n, q, budget)?.into(),
                corollary_main_rhs(n, q)?.into(),
            ));
        }
    }
    Ok(reports)
}
