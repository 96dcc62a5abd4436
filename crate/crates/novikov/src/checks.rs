//! Checks relating computed generic dimensions to user-supplied geometric
//! data: Morse-type alternating bounds against critical-point counts, the
//! vanishing principle for missing indices, the lacunary (even-index-only)
//! principle, and the sheet-count scaling law for finite cyclic covers.
//!
//! Critical-point counts are always *input* — extracting them from a closed
//! 1-form is smooth Morse theory and out of scope. The checkers validate the
//! conclusions against the computed dimensions, reporting per-degree
//! left/right values so a failure pinpoints the first violated bound.

use serde::Serialize;

use crate::betti::{novikov_numbers, BettiReport};
use crate::complex::{cyclic_cover, Cocycle, DeltaComplex};
use crate::error::{Error, Result};
use crate::rank::Method;

/// Number of critical points per index, supplied by the user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalVector {
    /// `counts[i]` is the number of index-i critical points; length n+1.
    pub counts: Vec<u64>,
}

impl CriticalVector {
    pub fn new(counts: Vec<u64>) -> Self {
        CriticalVector { counts }
    }

    /// Top index n (the vector has n+1 entries).
    pub fn dimension(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }
}

/// Outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The rule's hypothesis is not met, so it asserts nothing.
    NotApplicable,
}

/// One compared pair of numbers. `pass` means the rule's relation between
/// `left` (the critical-point side) and `right` (the homological side) holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    /// Which relation this row instantiates (e.g. "alternating-sum").
    pub kind: &'static str,
    pub left: i64,
    pub right: i64,
    pub pass: bool,
}

/// Result of running one rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub rule: &'static str,
    pub verdict: Verdict,
    pub degrees: Vec<DegreeCheck>,
}

impl CheckReport {
    fn from_rows(rule: &'static str, degrees: Vec<DegreeCheck>) -> Self {
        let verdict = if degrees.iter().all(|d| d.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckReport {
            rule,
            verdict,
            degrees,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

fn require_covering(c: &CriticalVector, b: &BettiReport) -> Result<()> {
    let top = b.numbers.len().saturating_sub(1);
    if c.dimension() < top {
        return Err(Error::DimensionMismatch {
            critical: c.dimension(),
            top,
        });
    }
    Ok(())
}

fn number_at(b: &BettiReport, i: usize) -> i64 {
    b.numbers.get(i).copied().unwrap_or(0) as i64
}

/// Morse-type bounds: for every i, the alternating partial sum
/// `c_i − c_{i−1} + … ± c_0` dominates the same sum of the generic
/// dimensions, and each `c_i` dominates `b_i` on its own. The simple bounds
/// are implied by the alternating family (add consecutive sums), so they are
/// included as a consistency cross-check rather than extra strength.
pub fn novikov_shubin_check(c: &CriticalVector, b: &BettiReport) -> Result<CheckReport> {
    require_covering(c, b)?;
    let n = c.dimension();
    let mut rows = Vec::with_capacity(2 * (n + 1));
    let mut left_sum = 0i64;
    let mut right_sum = 0i64;
    for i in 0..=n {
        // prepend the new top term: S_i = c_i − S_{i−1}
        left_sum = c.counts[i] as i64 - left_sum;
        right_sum = number_at(b, i) - right_sum;
        rows.push(DegreeCheck {
            degree: i,
            kind: "alternating-sum",
            left: left_sum,
            right: right_sum,
            pass: left_sum >= right_sum,
        });
        rows.push(DegreeCheck {
            degree: i,
            kind: "simple-bound",
            left: c.counts[i] as i64,
            right: number_at(b, i),
            pass: c.counts[i] as i64 >= number_at(b, i),
        });
    }
    Ok(CheckReport::from_rows("alternating-bounds", rows))
}

/// Vanishing principle: wherever no critical points of index j exist, the
/// generic dimension in degree j must vanish. Vacuously passes when every
/// index has critical points.
pub fn vanishing_check(c: &CriticalVector, b: &BettiReport) -> Result<CheckReport> {
    require_covering(c, b)?;
    let mut rows = Vec::new();
    for (j, &count) in c.counts.iter().enumerate() {
        if count == 0 {
            rows.push(DegreeCheck {
                degree: j,
                kind: "vanishing",
                left: 0,
                right: number_at(b, j),
                pass: number_at(b, j) == 0,
            });
        }
    }
    Ok(CheckReport::from_rows("vanishing", rows))
}

/// Lacunary principle: when all critical points have even index, the odd
/// generic dimensions vanish and the even ones equal the critical counts
/// exactly. Reports not-applicable when some odd index has critical points.
pub fn lacunary_check(c: &CriticalVector, b: &BettiReport) -> Result<CheckReport> {
    require_covering(c, b)?;
    if c.counts.iter().skip(1).step_by(2).any(|&x| x != 0) {
        return Ok(CheckReport {
            rule: "lacunary",
            verdict: Verdict::NotApplicable,
            degrees: Vec::new(),
        });
    }
    let mut rows = Vec::new();
    for (i, &count) in c.counts.iter().enumerate() {
        if i % 2 == 1 {
            rows.push(DegreeCheck {
                degree: i,
                kind: "odd-vanishing",
                left: 0,
                right: number_at(b, i),
                pass: number_at(b, i) == 0,
            });
        } else {
            rows.push(DegreeCheck {
                degree: i,
                kind: "even-equality",
                left: count as i64,
                right: number_at(b, i),
                pass: count as i64 == number_at(b, i),
            });
        }
    }
    Ok(CheckReport::from_rows("lacunary", rows))
}

/// Scaling law for finite cyclic covers: the generic dimensions of the
/// m-sheeted cover built from a rank-1 integral cocycle are exactly m times
/// those of the base, degree by degree.
pub fn multiplicativity_check(
    c: &DeltaComplex,
    w: &Cocycle,
    m: u64,
    method: Method,
    trials: u32,
    seed: u64,
) -> Result<CheckReport> {
    if m < 2 {
        return Err(Error::InvalidSheetCount { m });
    }
    let base = novikov_numbers(c, w, method, trials, seed)?;
    let (cover, cover_w) = cyclic_cover(c, w, m)?;
    let covered = novikov_numbers(&cover, &cover_w, method, trials, seed)?;
    let rows = (0..base.numbers.len())
        .map(|k| {
            let left = number_at(&covered, k);
            let right = m as i64 * number_at(&base, k);
            DegreeCheck {
                degree: k,
                kind: "cover-scaling",
                left,
                right,
                pass: left == right,
            }
        })
        .collect();
    Ok(CheckReport::from_rows("multiplicativity", rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::{circle, figure_eight, torus};
    use std::time::Duration;

    fn report(numbers: Vec<usize>) -> BettiReport {
        let dim = numbers.len() - 1;
        BettiReport {
            ring_rank: 1,
            cell_counts: vec![0; dim + 1],
            boundary_ranks: vec![0; dim],
            numbers,
            euler: 0,
            method: "exact".into(),
            trials: 0,
            seed: 0,
            primes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn cv(counts: &[u64]) -> CriticalVector {
        CriticalVector::new(counts.to_vec())
    }

    #[test]
    fn all_zero_case_passes_with_equality() {
        let r = novikov_shubin_check(&cv(&[0, 0, 0]), &report(vec![0, 0, 0])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.degrees.iter().all(|d| d.left == d.right));
    }

    #[test]
    fn genus_two_counts_pass_with_equality() {
        // a surface of Euler characteristic −2 admits a 1-form with two
        // index-1 critical points; the generic dimensions match it exactly
        let r = novikov_shubin_check(&cv(&[0, 2, 0]), &report(vec![0, 2, 0])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let alt: Vec<_> = r
            .degrees
            .iter()
            .filter(|d| d.kind == "alternating-sum")
            .collect();
        assert_eq!((alt[1].left, alt[1].right), (2, 2));
        assert_eq!((alt[2].left, alt[2].right), (-2, -2));
    }

    #[test]
    fn missing_critical_points_fail_the_bounds() {
        let r = novikov_shubin_check(&cv(&[0, 0]), &report(vec![0, 1])).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let bad: Vec<_> = r.degrees.iter().filter(|d| !d.pass).collect();
        assert!(bad.iter().all(|d| d.degree == 1));
    }

    #[test]
    fn critical_side_shorter_than_degrees_is_an_error() {
        assert!(matches!(
            novikov_shubin_check(&cv(&[0, 0]), &report(vec![0, 0, 0])),
            Err(Error::DimensionMismatch { critical: 1, top: 2 })
        ));
    }

    #[test]
    fn longer_critical_vectors_extend_with_zero_dimensions() {
        // c may cover more indices than the complex has degrees; the padded
        // degrees still contribute real alternating constraints
        let r = novikov_shubin_check(&cv(&[1, 2, 1, 1]), &report(vec![1, 2])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let r = novikov_shubin_check(&cv(&[1, 2, 1, 0]), &report(vec![1, 2])).unwrap();
        assert_eq!(r.verdict, Verdict::Fail, "degree-3 alternating bound: 0 < 1");
    }

    #[test]
    fn vanishing_passes_on_the_model_cases() {
        let torus = vanishing_check(&cv(&[0, 0, 0]), &report(vec![0, 0, 0])).unwrap();
        assert_eq!(torus.verdict, Verdict::Pass);
        let circle = vanishing_check(&cv(&[0, 0]), &report(vec![0, 0])).unwrap();
        assert_eq!(circle.verdict, Verdict::Pass);
        assert_eq!(circle.degrees.len(), 2);
    }

    #[test]
    fn vanishing_fails_where_dimensions_survive() {
        let r = vanishing_check(&cv(&[0, 2, 0]), &report(vec![1, 0, 0])).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.degrees[0].pass);
        assert_eq!(r.degrees[0].degree, 0);
    }

    #[test]
    fn vanishing_is_vacuous_without_zero_counts() {
        let r = vanishing_check(&cv(&[1, 3]), &report(vec![1, 2])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.degrees.is_empty());
    }

    #[test]
    fn lacunary_passes_on_even_only_data() {
        let r = lacunary_check(&cv(&[0, 0, 2, 0, 0]), &report(vec![0, 0, 2, 0, 0])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn lacunary_demands_exact_equality_in_even_degrees() {
        let r = lacunary_check(&cv(&[1, 0, 1]), &report(vec![0, 0, 0])).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.degrees[0].pass, "count 1 vs dimension 0 in degree 0");
    }

    #[test]
    fn lacunary_is_not_applicable_with_odd_critical_points() {
        let r = lacunary_check(&cv(&[0, 2, 0]), &report(vec![0, 2, 0])).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert!(r.degrees.is_empty());
        assert!(r.passed(), "not-applicable is not a failure");
    }

    #[test]
    fn cover_scaling_on_the_figure_eight() {
        let w = Cocycle::from_integers(1, vec![vec![1], vec![1]]).unwrap();
        let r =
            multiplicativity_check(&figure_eight(), &w, 2, Method::Exact, 0, 0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.degrees[1].left, 2, "cover dimension in degree 1");
        assert_eq!(r.degrees[1].right, 2, "2 × base dimension 1");
    }

    #[test]
    fn cover_scaling_on_circle_and_torus() {
        let w = Cocycle::from_integers(1, vec![vec![1]]).unwrap();
        let r = multiplicativity_check(&circle(), &w, 3, Method::Exact, 0, 0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);

        let wt = Cocycle::from_integers(1, vec![vec![1], vec![0], vec![1]]).unwrap();
        let rt = multiplicativity_check(&torus(), &wt, 5, Method::Exact, 0, 0).unwrap();
        assert_eq!(rt.verdict, Verdict::Pass);
        assert!(rt.degrees.iter().all(|d| d.left == 0 && d.right == 0));
    }

    #[test]
    fn cover_scaling_requires_at_least_two_sheets() {
        let w = Cocycle::from_integers(1, vec![vec![1]]).unwrap();
        assert!(matches!(
            multiplicativity_check(&circle(), &w, 1, Method::Exact, 0, 0),
            Err(Error::InvalidSheetCount { m: 1 })
        ));
    }

    #[test]
    fn checker_is_sharp_not_vacuous() {
        // minimal passing critical vectors fail as soon as any entry drops
        // below the corresponding dimension
        let b = report(vec![0, 1]);
        assert_eq!(
            novikov_shubin_check(&cv(&[0, 1]), &b).unwrap().verdict,
            Verdict::Pass
        );
        assert_eq!(
            novikov_shubin_check(&cv(&[0, 0]), &b).unwrap().verdict,
            Verdict::Fail
        );
        let b2 = report(vec![0, 2, 0]);
        assert_eq!(
            novikov_shubin_check(&cv(&[0, 2, 0]), &b2).unwrap().verdict,
            Verdict::Pass
        );
        assert_eq!(
            novikov_shubin_check(&cv(&[0, 1, 0]), &b2).unwrap().verdict,
            Verdict::Fail
        );
    }

    #[test]
    fn alternating_family_implies_the_simple_bounds() {
        // c_i − b_i is the sum of two consecutive alternating margins, so
        // whenever every alternating row passes, every simple row must too
        let mut rng = 0u64;
        let mut next = move || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 33) % 5
        };
        for _ in 0..500 {
            let n = 1 + (next() as usize % 4);
            let c = cv(&(0..=n).map(|_| next()).collect::<Vec<_>>());
            let b = report((0..=n).map(|_| next() as usize).collect());
            let r = novikov_shubin_check(&c, &b).unwrap();
            let alternating_ok = r
                .degrees
                .iter()
                .filter(|d| d.kind == "alternating-sum")
                .all(|d| d.pass);
            let simple_ok = r
                .degrees
                .iter()
                .filter(|d| d.kind == "simple-bound")
                .all(|d| d.pass);
            if alternating_ok {
                assert!(simple_ok, "alternating rows passed but a simple row failed");
            }
        }
    }
}
