//! Composition bounds, checked exactly.
//!
//! Square roots never appear: `a <= sqrt(b)` with `a >= 0` is checked as
//! `a^2 <= b` in rationals.

use serde::{Deserialize, Serialize};

use crate::oracle::enumerate_functions;
use crate::{Error, FiniteFunction, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `deg(f ∘ g)`.
    pub deg_composition: Rational,
    /// `max_fiber(f) * deg(g)`.
    pub new_bound: Rational,
    /// `((max_fiber(f) deg(g))^2, n deg(f) deg(g)^2)`, present only for
    /// endofunctions on a common `n`-set.
    pub old_bound_squared_scaled: Option<(Rational, Rational)>,
    pub new_holds: bool,
    /// Both links of `deg(f∘g) <= max_fiber(f) deg(g) <= sqrt(n deg(f)) deg(g)`;
    /// present only for endofunctions.
    pub chain_holds: Option<bool>,
}

/// `deg(f ∘ g) <= max_fiber(f) * deg(g)` for `g: X -> Y`, `f: Y -> Z`.
pub fn check_composition_bound(f: &FiniteFunction, g: &FiniteFunction) -> Result<BoundReport> {
    let deg_composition = f.after(g)?.degree();
    let new_bound = Rational::from_integer(f.max_fiber() as i64) * g.degree();
    Ok(BoundReport {
        new_holds: deg_composition <= new_bound,
        deg_composition,
        new_bound,
        old_bound_squared_scaled: None,
        chain_holds: None,
    })
}

/// `max_fiber(f)^2 <= |X| * deg(f)`.
pub fn check_max_fiber_lemma(f: &FiniteFunction) -> bool {
    let max = Rational::from_integer(f.max_fiber() as i64);
    let n = Rational::from_integer(f.domain_size() as i64);
    &max * &max <= n * f.degree()
}

/// The strengthened bound together with the `sqrt(n) sqrt(deg f) deg g` bound
/// it refines. Only defined for endofunctions of one `n`-set.
pub fn compare_bounds(f: &FiniteFunction, g: &FiniteFunction) -> Result<BoundReport> {
    let n = g.domain_size();
    for h in [f, g] {
        if h.domain_size() != n || h.codomain_size() != n {
            return Err(Error::SizeMismatch {
                inner_codomain: h.codomain_size(),
                outer_domain: n,
            });
        }
    }
    let mut report = check_composition_bound(f, g)?;
    let deg_g = g.degree();
    let new_squared = &report.new_bound * &report.new_bound;
    let old_squared = Rational::from_integer(n as i64) * f.degree() * (&deg_g * &deg_g);
    report.chain_holds = Some(report.new_holds && new_squared <= old_squared);
    report.old_bound_squared_scaled = Some((new_squared, old_squared));
    Ok(report)
}

/// Tally of an exhaustive bound sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub checked: u64,
    pub violations: u64,
}

impl SweepSummary {
    fn record(&mut self, holds: bool) {
        self.checked += 1;
        self.violations += u64::from(!holds);
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.checked += other.checked;
        self.violations += other.violations;
        self
    }
}

/// Checks the composition bound on every pair `g: X -> Y`, `f: Y -> Z` with
/// the given sizes.
pub fn sweep_composition_bound(x: usize, y: usize, z: usize) -> Result<SweepSummary> {
    let mut summary = SweepSummary::default();
    for g in enumerate_functions(x, y) {
        for f in enumerate_functions(y, z) {
            summary.record(check_composition_bound(&f, &g)?.new_holds);
        }
    }
    Ok(summary)
}

/// Every size triple with all sizes in `1..=max_size`.
pub fn sweep_composition_bound_all(max_size: usize) -> Result<SweepSummary> {
    let mut summary = SweepSummary::default();
    for x in 1..=max_size {
        for y in 1..=max_size {
            for z in 1..=max_size {
                summary = summary.merge(sweep_composition_bound(x, y, z)?);
            }
        }
    }
    Ok(summary)
}

/// Checks the max-fiber lemma on every `f: X -> Y` with sizes in
/// `1..=max_size`.
pub fn sweep_max_fiber_lemma(max_size: usize) -> SweepSummary {
    let mut summary = SweepSummary::default();
    for n in 1..=max_size {
        for m in 1..=max_size {
            for f in enumerate_functions(n, m) {
                summary.record(check_max_fiber_lemma(&f));
            }
        }
    }
    summary
}

/// Runs [`compare_bounds`] on every pair of endofunctions of an `n`-set.
pub fn sweep_endofunction_chain(n: usize) -> Result<SweepSummary> {
    let mut summary = SweepSummary::default();
    for f in enumerate_functions(n, n) {
        for g in enumerate_functions(n, n) {
            let report = compare_bounds(&f, &g)?;
            summary.record(report.chain_holds == Some(true));
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, m: usize, images: &[usize]) -> FiniteFunction {
        FiniteFunction::new(n, m, images.to_vec()).unwrap()
    }

    #[test]
    fn constants() {
        let c = FiniteFunction::constant(3, 3, 0).unwrap();
        let report = check_composition_bound(&c, &c).unwrap();
        assert_eq!(report.deg_composition, Rational::from_integer(3));
        assert_eq!(report.new_bound, Rational::from_integer(9));
        assert!(report.new_holds);
    }

    #[test]
    fn bijection_inner() {
        let outer = f(4, 3, &[0, 0, 2, 1]);
        let perm = f(4, 4, &[2, 3, 1, 0]);
        let report = check_composition_bound(&outer, &perm).unwrap();
        assert_eq!(report.deg_composition, outer.degree());
        assert!(report.new_holds);
    }

    #[test]
    fn worked_pair() {
        // g = [0,1,1], f = [0,0,1]: f∘g = [0,0,0], degree 3; max fiber of f is 2,
        // deg(g) = (1 + 4) / 3
        let outer = f(3, 3, &[0, 0, 1]);
        let inner = f(3, 3, &[0, 1, 1]);
        let report = check_composition_bound(&outer, &inner).unwrap();
        assert_eq!(report.deg_composition, Rational::from_integer(3));
        assert_eq!(report.new_bound, Rational::new(10, 3));
        assert!(report.new_holds);
    }

    #[test]
    fn size_mismatch() {
        let a = f(2, 3, &[0, 2]);
        assert!(matches!(
            check_composition_bound(&a, &a),
            Err(Error::SizeMismatch { .. })
        ));
        let b = f(3, 2, &[0, 1, 1]);
        assert!(check_composition_bound(&b, &a).is_ok());
        assert!(matches!(
            compare_bounds(&b, &a),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn lemma_examples() {
        assert!(check_max_fiber_lemma(&FiniteFunction::identity(5).unwrap()));
        assert!(check_max_fiber_lemma(
            &FiniteFunction::constant(4, 4, 1).unwrap()
        ));
        // 9 <= 4 * (9 + 1) / 4
        assert!(check_max_fiber_lemma(&f(4, 2, &[0, 0, 0, 1])));
    }

    #[test]
    fn compare_examples() {
        let id = FiniteFunction::identity(3).unwrap();
        let report = compare_bounds(&id, &id).unwrap();
        assert_eq!(report.deg_composition, Rational::one());
        assert_eq!(
            report.old_bound_squared_scaled,
            Some((Rational::one(), Rational::from_integer(3)))
        );
        assert_eq!(report.chain_holds, Some(true));

        for n in 1..6 {
            let c = FiniteFunction::constant(n, n, 0).unwrap();
            let report = compare_bounds(&c, &c).unwrap();
            let nn = Rational::from_integer(n as i64);
            assert_eq!(report.deg_composition, nn.clone());
            assert_eq!(report.new_bound, &nn * &nn);
            let (lhs, rhs) = report.old_bound_squared_scaled.unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(report.chain_holds, Some(true));
        }
    }

    #[test]
    fn exhaustive_small() {
        let all = sweep_composition_bound_all(3).unwrap();
        assert_eq!(all.violations, 0);
        let lemma = sweep_max_fiber_lemma(4);
        assert_eq!(lemma.violations, 0);
        let endo = sweep_endofunction_chain(3).unwrap();
        assert_eq!(
            endo,
            SweepSummary {
                checked: 729,
                violations: 0
            }
        );
    }
}
