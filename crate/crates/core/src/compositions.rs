//! Weak compositions: ordered tuples of nonnegative integers with a fixed sum.

use num_bigint::BigUint;

use crate::combinatorics::binomial;

/// Iterator over the weak compositions of `total` into `parts` parts, in
/// colexicographic order, starting at `(total, 0, .., 0)` and ending at
/// `(0, .., 0, total)`.
///
/// `parts == 0` yields the empty tuple when `total == 0` and nothing
/// otherwise.
#[derive(Clone, Debug)]
pub struct WeakCompositions {
    current: Option<Vec<usize>>,
}

impl WeakCompositions {
    pub fn new(total: usize, parts: usize) -> Self {
        let current = match parts {
            0 if total == 0 => Some(Vec::new()),
            0 => None,
            _ => {
                let mut first = vec![0; parts];
                first[0] = total;
                Some(first)
            }
        };
        WeakCompositions { current }
    }

    /// Number of weak compositions, `C(total + parts - 1, parts - 1)`.
    pub fn count(total: usize, parts: usize) -> BigUint {
        if parts == 0 {
            return BigUint::from((total == 0) as u8);
        }
        binomial((total + parts - 1) as u64, parts as i64 - 1)
            .to_biguint()
            .expect("binomials are nonnegative")
    }
}

impl Iterator for WeakCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        let mut next = current.clone();
        if let Some(i) = next.iter().position(|&v| v > 0) {
            if i + 1 < next.len() {
                let v = next[i];
                next[i] = 0;
                next[i + 1] += 1;
                next[0] = v - 1;
                self.current = Some(next);
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_orders() {
        let all: Vec<_> = WeakCompositions::new(2, 2).collect();
        assert_eq!(all, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(
            WeakCompositions::new(3, 1).collect::<Vec<_>>(),
            vec![vec![3]]
        );
        assert_eq!(
            WeakCompositions::new(0, 3).collect::<Vec<_>>(),
            vec![vec![0, 0, 0]]
        );
        assert_eq!(
            WeakCompositions::new(0, 0).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(WeakCompositions::new(2, 0).count(), 0);
    }

    #[test]
    fn counts_sums_and_distinctness() {
        for total in 0..8 {
            for parts in 0..6 {
                let all: Vec<_> = WeakCompositions::new(total, parts).collect();
                assert_eq!(
                    BigUint::from(all.len()),
                    WeakCompositions::count(total, parts)
                );
                assert!(all
                    .iter()
                    .all(|c| c.len() == parts && c.iter().sum::<usize>() == total));
                let distinct: HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
            }
        }
    }

    #[test]
    fn colexicographic() {
        for total in 0..6 {
            let all: Vec<Vec<usize>> = WeakCompositions::new(total, 4)
                .map(|mut c| {
                    c.reverse();
                    c
                })
                .collect();
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
