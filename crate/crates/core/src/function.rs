//! Explicit functions between finite indexed sets `{0, .., n-1} -> {0, .., m-1}`.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::{Error, Rational, Result};

/// A total function from a domain of `domain_size` elements to a codomain of
/// `codomain_size` elements, stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteFunction {
    #[serde(rename = "domain")]
    domain_size: usize,
    #[serde(rename = "codomain")]
    codomain_size: usize,
    images: Vec<usize>,
}

impl FiniteFunction {
    pub fn new(domain_size: usize, codomain_size: usize, images: Vec<usize>) -> Result<Self> {
        if domain_size == 0 || codomain_size == 0 {
            return Err(Error::EmptySet);
        }
        if images.len() != domain_size {
            return Err(Error::LengthMismatch {
                expected: domain_size,
                found: images.len(),
            });
        }
        if let Some((element, &image)) = images
            .iter()
            .enumerate()
            .find(|(_, &image)| image >= codomain_size)
        {
            return Err(Error::OutOfRangeImage {
                element,
                image,
                codomain: codomain_size,
            });
        }
        Ok(FiniteFunction {
            domain_size,
            codomain_size,
            images,
        })
    }

    /// Builds a function from an image sequence already known to be valid.
    pub(crate) fn from_parts_unchecked(codomain_size: usize, images: Vec<usize>) -> Self {
        debug_assert!(images.iter().all(|&y| y < codomain_size));
        FiniteFunction {
            domain_size: images.len(),
            codomain_size,
            images,
        }
    }

    pub fn identity(size: usize) -> Result<Self> {
        Self::new(size, size, (0..size).collect())
    }

    pub fn constant(domain_size: usize, codomain_size: usize, value: usize) -> Result<Self> {
        Self::new(domain_size, codomain_size, vec![value; domain_size])
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain_size
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `|f^-1(y)|` for every `y` in the codomain.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        fiber_sizes_of(&self.images, self.codomain_size)
    }

    /// `outer ∘ inner`, i.e. `x ↦ outer(inner(x))`.
    pub fn compose(outer: &FiniteFunction, inner: &FiniteFunction) -> Result<FiniteFunction> {
        if inner.codomain_size != outer.domain_size {
            return Err(Error::SizeMismatch {
                inner_codomain: inner.codomain_size,
                outer_domain: outer.domain_size,
            });
        }
        let images = inner.images.iter().map(|&y| outer.images[y]).collect();
        Ok(FiniteFunction::from_parts_unchecked(
            outer.codomain_size,
            images,
        ))
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &FiniteFunction) -> Result<FiniteFunction> {
        FiniteFunction::compose(self, inner)
    }

    /// Degree of noninvertibility, `(1/|X|) * sum_y |f^-1(y)|^2`.
    pub fn degree(&self) -> Rational {
        Rational::new(sum_of_squares(&self.fiber_sizes()), self.domain_size as u64)
    }

    /// The same degree computed pointwise as `(1/|X|) * sum_x |f^-1(f(x))|`.
    pub fn degree_pointwise(&self) -> Rational {
        let fibers = self.fiber_sizes();
        let total: u128 = self.images.iter().map(|&y| fibers[y] as u128).sum();
        Rational::new(total, self.domain_size as u64)
    }

    /// `deg(f, q) = (1/|X|) * sum_y |f^-1(y)|^q` for `q >= 1`.
    pub fn degree_q(&self, q: u32) -> Result<Rational> {
        if q == 0 {
            return Err(Error::InvalidExponent(q));
        }
        let total: BigInt = self
            .fiber_sizes()
            .into_iter()
            .filter(|&k| k > 0)
            .map(|k| BigInt::from(k).pow(q))
            .sum();
        Ok(Rational::new(total, self.domain_size as u64))
    }

    /// Largest fiber size.
    pub fn max_fiber(&self) -> usize {
        self.fiber_sizes().into_iter().max().unwrap_or(0)
    }

    pub fn is_injective(&self) -> bool {
        self.fiber_sizes().iter().all(|&k| k <= 1)
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(|&y| y == self.images[0])
    }
}

impl<'de> Deserialize<'de> for FiniteFunction {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            domain: usize,
            codomain: usize,
            images: Vec<usize>,
        }
        let raw = Raw::deserialize(deserializer)?;
        FiniteFunction::new(raw.domain, raw.codomain, raw.images).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn fiber_sizes_of(images: &[usize], codomain_size: usize) -> Vec<usize> {
    let mut counts = vec![0usize; codomain_size];
    for &y in images {
        counts[y] += 1;
    }
    counts
}

pub(crate) fn sum_of_squares(fibers: &[usize]) -> u128 {
    fibers.iter().map(|&k| (k as u128) * (k as u128)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(n: usize, m: usize, images: &[usize]) -> FiniteFunction {
        FiniteFunction::new(n, m, images.to_vec()).unwrap()
    }

    #[test]
    fn construction() {
        assert!(FiniteFunction::new(3, 3, vec![0, 0, 1]).is_ok());
        assert!(FiniteFunction::new(2, 3, vec![0, 2]).is_ok());
        assert_eq!(
            FiniteFunction::new(2, 2, vec![0, 2]),
            Err(Error::OutOfRangeImage {
                element: 1,
                image: 2,
                codomain: 2
            })
        );
        assert_eq!(
            FiniteFunction::new(3, 2, vec![0, 1]),
            Err(Error::LengthMismatch {
                expected: 3,
                found: 2
            })
        );
        assert_eq!(FiniteFunction::new(0, 2, vec![]), Err(Error::EmptySet));
        assert_eq!(FiniteFunction::new(1, 0, vec![0]), Err(Error::EmptySet));
    }

    #[test]
    fn fibers() {
        assert_eq!(f(3, 3, &[0, 0, 1]).fiber_sizes(), vec![2, 1, 0]);
        assert_eq!(
            FiniteFunction::identity(3).unwrap().fiber_sizes(),
            vec![1, 1, 1]
        );
        assert_eq!(
            FiniteFunction::constant(4, 2, 0).unwrap().fiber_sizes(),
            vec![4, 0]
        );
    }

    #[test]
    fn composition() {
        let g = f(3, 3, &[0, 0, 1]);
        let id = FiniteFunction::identity(3).unwrap();
        assert_eq!(FiniteFunction::compose(&id, &g).unwrap(), g);

        let c = FiniteFunction::constant(3, 4, 2).unwrap();
        assert_eq!(
            FiniteFunction::compose(&c, &g).unwrap(),
            FiniteFunction::constant(3, 4, 2).unwrap()
        );

        let swap = f(2, 2, &[1, 0]);
        assert_eq!(
            FiniteFunction::compose(&swap, &swap).unwrap(),
            FiniteFunction::identity(2).unwrap()
        );

        let mismatch = FiniteFunction::compose(&swap, &g);
        assert_eq!(
            mismatch,
            Err(Error::SizeMismatch {
                inner_codomain: 3,
                outer_domain: 2
            })
        );
    }

    #[test]
    fn degrees() {
        assert_eq!(
            FiniteFunction::identity(5).unwrap().degree(),
            Rational::one()
        );
        assert_eq!(
            FiniteFunction::constant(3, 3, 1).unwrap().degree(),
            Rational::from_integer(3)
        );
        assert_eq!(f(3, 3, &[0, 0, 1]).degree(), Rational::new(5, 3));
    }

    #[test]
    fn generalized_degrees() {
        let g = f(3, 3, &[0, 0, 1]);
        assert_eq!(g.degree_q(1).unwrap(), Rational::one());
        assert_eq!(g.degree_q(3).unwrap(), Rational::from_integer(3));
        assert_eq!(g.degree_q(0), Err(Error::InvalidExponent(0)));
        let c = FiniteFunction::constant(4, 1, 0).unwrap();
        for q in 1..8 {
            assert_eq!(
                c.degree_q(q).unwrap(),
                Rational::from_integer(4i64.pow(q - 1))
            );
        }
    }

    #[test]
    fn max_fibers() {
        assert_eq!(FiniteFunction::identity(4).unwrap().max_fiber(), 1);
        assert_eq!(FiniteFunction::constant(5, 5, 3).unwrap().max_fiber(), 5);
        assert_eq!(f(4, 2, &[0, 0, 0, 1]).max_fiber(), 3);
    }

    #[test]
    fn composition_is_associative_for_small_sizes() {
        let all = |n: usize, m: usize| crate::oracle::enumerate_functions(n, m).collect::<Vec<_>>();
        for a in 1..=3 {
            for b in 1..=3 {
                for c in 1..=3 {
                    for d in 1..=2 {
                        for h in all(a, b) {
                            for g in all(b, c) {
                                for k in all(c, d) {
                                    let left = k.after(&g.after(&h).unwrap()).unwrap();
                                    let right = k.after(&g).unwrap().after(&h).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn arb_function() -> impl Strategy<Value = FiniteFunction> {
        (1usize..12, 1usize..12).prop_flat_map(|(n, m)| {
            proptest::collection::vec(0..m, n)
                .prop_map(move |images| FiniteFunction::new(n, m, images).unwrap())
        })
    }

    proptest! {
        #[test]
        fn fibers_sum_to_domain(g in arb_function()) {
            prop_assert_eq!(g.fiber_sizes().iter().sum::<usize>(), g.domain_size());
        }

        #[test]
        fn both_degree_forms_agree(g in arb_function()) {
            prop_assert_eq!(g.degree(), g.degree_pointwise());
        }

        #[test]
        fn degree_range_and_extremes(g in arb_function()) {
            let d = g.degree();
            let n = Rational::from_integer(g.domain_size() as i64);
            prop_assert!(d >= Rational::one() && d <= n);
            prop_assert_eq!(d == Rational::one(), g.is_injective());
            prop_assert_eq!(d == n, g.is_constant());
        }

        #[test]
        fn degree_q_specializations(g in arb_function()) {
            prop_assert_eq!(g.degree_q(2).unwrap(), g.degree());
            prop_assert_eq!(g.degree_q(1).unwrap(), Rational::one());
        }

        #[test]
        fn max_fiber_at_least_pigeonhole(g in arb_function()) {
            let n = g.domain_size();
            let m = g.codomain_size();
            prop_assert!(g.max_fiber() >= n.div_ceil(m));
        }
    }
}
