//! Approximation of a rational cocycle by an integral one at bounded
//! denominator, preserving cocycle structure.
//!
//! A rational cocycle w splits along a spanning forest as w = δθ + f, where
//! θ is the per-vertex potential and f is supported on non-tree edges and
//! carries the fundamental-cycle values of w. The approximation rounds both
//! parts at a common denominator q: the potential coordinatewise, the cycle
//! values inside the subspace of assignments that (1) annihilate every
//! 2-cell boundary relation — this is exactly what makes the result a
//! cocycle — and (2) vanish on every basis cycle where w vanishes. The best
//! q ≤ bound under the sup-norm over edges wins.
//!
//! When q·w is integral for some q ≤ bound, the result is exact: λ·ŵ = w and
//! every cycle on which w vanishes is preserved verbatim. For smaller bounds
//! full kernel preservation can be incompatible with closeness (the result
//! reports which one it achieved via `kernel_preserved`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complex::{forest_data, validate_cocycle, Cocycle, DeltaComplex};
use crate::error::{Error, Result};
use crate::linalg;

/// Result of approximating a rational cocycle.
#[derive(Clone, Debug)]
pub struct ApproxCocycle {
    /// The integral approximation ŵ.
    pub cocycle: Cocycle,
    /// The positive scale λ = 1/denominator with λ·ŵ ≈ w.
    pub lambda: BigRational,
    /// The common denominator q that was selected.
    pub denominator: i64,
    /// max over edges and coordinates of |λ·ŵ(e) − w(e)|.
    pub sup_error: BigRational,
    /// λ·ŵ = w exactly.
    pub exact: bool,
    /// Every integral cycle with w-value 0 has ŵ-value 0. Always true when
    /// `exact`; in the approximate regime it is checked and reported, since a
    /// tight denominator bound can force a choice between kernel preservation
    /// and closeness.
    pub kernel_preserved: bool,
}

/// Rounds half away from zero is not needed; round-half-up is deterministic
/// and symmetric enough for approximation purposes.
fn round_nearest(x: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    (x + half).floor().to_integer()
}

/// Approximates a rational cocycle by λ·ŵ with ŵ integral and the
/// denominator of λ at most `bound`.
pub fn rational_approximation(
    c: &DeltaComplex,
    w: &Cocycle,
    bound: i64,
) -> Result<ApproxCocycle> {
    if bound < 1 {
        return Err(Error::InvalidBound { bound });
    }
    validate_cocycle(c, w)?;

    // Exact branch: the least common denominator fits the bound.
    let q_star = w.denominator_lcm();
    if q_star <= BigInt::from(bound) {
        let q_rat = BigRational::from_integer(q_star.clone());
        let scaled = w.scale(&q_rat);
        debug_assert!(scaled.is_integral());
        let denominator = i64::try_from(&q_star).expect("bound fits i64");
        return Ok(ApproxCocycle {
            cocycle: scaled,
            lambda: q_rat.recip(),
            denominator,
            sup_error: BigRational::zero(),
            exact: true,
            kernel_preserved: true,
        });
    }

    let r = w.rank();
    let forest = forest_data(c, w);
    let s = forest.cycle_edges.len();

    // Cycle-value assignments must annihilate the boundary relation of every
    // 2-cell (that is what makes the reassembled cochain a cocycle), and are
    // additionally pinned to zero on basis cycles where w vanishes.
    let mut constraints: Vec<Vec<BigRational>> = Vec::new();
    let mut nontree_index = vec![usize::MAX; c.num_cells(1)];
    for (i, &e) in forest.cycle_edges.iter().enumerate() {
        nontree_index[e] = i;
    }
    for t in 0..c.num_cells(2) {
        let faces = c.faces(2, t);
        let mut rel = vec![BigRational::zero(); s];
        for (slot, &edge) in faces.iter().enumerate() {
            if nontree_index[edge] != usize::MAX {
                let sign = if slot % 2 == 0 {
                    BigRational::one()
                } else {
                    -BigRational::one()
                };
                rel[nontree_index[edge]] += sign;
            }
        }
        if rel.iter().any(|x| !x.is_zero()) {
            constraints.push(rel);
        }
    }
    for (i, value) in forest.cycle_values.iter().enumerate() {
        if value.iter().all(Zero::is_zero) {
            let mut pin = vec![BigRational::zero(); s];
            pin[i] = BigRational::one();
            constraints.push(pin);
        }
    }

    // Integer basis of the constraint kernel, keeping the free-column
    // structure of the rational kernel basis: vector f has entry alpha_f at
    // its free column and zeros at the other free columns, so the coordinate
    // of a target vector along it is target[f] / alpha_f.
    let rational_basis = linalg::kernel_basis(&constraints, s);
    let mut basis: Vec<(usize, BigInt, Vec<BigInt>)> = Vec::new();
    for (bi, v) in rational_basis.iter().enumerate() {
        // the free coordinate of v is 1 in v and 0 in every other basis
        // vector (a pivot coordinate can also be 1 in v, so check both)
        let free_col = (0..s)
            .find(|&f| {
                v[f].is_one()
                    && rational_basis
                        .iter()
                        .enumerate()
                        .all(|(bj, u)| bj == bi || u[f].is_zero())
            })
            .expect("kernel basis vector has a unit free coordinate");
        let mut denom_lcm = BigInt::one();
        for x in v {
            denom_lcm = num_integer::Integer::lcm(&denom_lcm, x.denom());
        }
        let scale = BigRational::from_integer(denom_lcm.clone());
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &scale).to_integer()).collect();
        basis.push((free_col, denom_lcm, ints));
    }

    let mut best: Option<ApproxCocycle> = None;
    for q in 1..=bound {
        let q_rat = BigRational::from_integer(BigInt::from(q));

        // rounded integral potential
        let g_hat: Vec<Vec<BigInt>> = forest
            .potentials
            .iter()
            .map(|theta| theta.iter().map(|x| round_nearest(&(x * &q_rat))).collect())
            .collect();

        // rounded cycle values, one constrained rounding per coordinate of ℚʳ
        let mut u_hat = vec![vec![BigInt::zero(); r]; s];
        for j in 0..r {
            let target: Vec<BigRational> = forest
                .cycle_values
                .iter()
                .map(|u| &u[j] * &q_rat)
                .collect();
            for (free_col, alpha, ints) in &basis {
                let coeff = round_nearest(
                    &(&target[*free_col] / BigRational::from_integer(alpha.clone())),
                );
                if coeff.is_zero() {
                    continue;
                }
                for (i, x) in ints.iter().enumerate() {
                    u_hat[i][j] += &coeff * x;
                }
            }
        }

        // reassemble edge values: ŵ = δĝ + (cycle part on non-tree edges)
        let mut values = Vec::with_capacity(c.num_cells(1));
        for e in 0..c.num_cells(1) {
            let head = c.edge_head(e);
            let tail = c.edge_tail(e);
            let mut val: Vec<BigRational> = (0..r)
                .map(|j| BigRational::from_integer(&g_hat[head][j] - &g_hat[tail][j]))
                .collect();
            if nontree_index[e] != usize::MAX {
                for (j, x) in val.iter_mut().enumerate() {
                    *x += BigRational::from_integer(u_hat[nontree_index[e]][j].clone());
                }
            }
            values.push(val);
        }
        let candidate = Cocycle::new(r, values)?;
        debug_assert!(validate_cocycle(c, &candidate).is_ok());

        let lambda = q_rat.recip();
        let mut sup = BigRational::zero();
        for e in 0..c.num_cells(1) {
            for (a, b) in candidate.value(e).iter().zip(w.value(e)) {
                let err = (a * &lambda - b).abs();
                if err > sup {
                    sup = err;
                }
            }
        }
        if best
            .as_ref()
            .map(|b| sup < b.sup_error)
            .unwrap_or(true)
        {
            let exact = sup.is_zero();
            best = Some(ApproxCocycle {
                cocycle: candidate,
                lambda,
                denominator: q,
                sup_error: sup,
                exact,
                kernel_preserved: false, // filled in below
            });
        }
    }

    let mut result = best.expect("bound ≥ 1 yields at least one candidate");

    // Report whether the full kernel of w (not just pinned basis cycles)
    // is preserved: check ŵ's cycle values against a basis of
    // {a : Σ aᵢ·u_i = 0}.
    let u_matrix: Vec<Vec<BigRational>> = (0..r)
        .map(|j| forest.cycle_values.iter().map(|u| u[j].clone()).collect())
        .collect();
    let kernel = linalg::kernel_basis(&u_matrix, s);
    let hat_forest = forest_data(c, &result.cocycle);
    debug_assert_eq!(hat_forest.cycle_edges, forest.cycle_edges);
    result.kernel_preserved = kernel.iter().all(|a| {
        (0..r).all(|j| {
            let dot: BigRational = a
                .iter()
                .zip(&hat_forest.cycle_values)
                .map(|(ai, u)| ai * &u[j])
                .sum();
            dot.is_zero()
        })
    });
    Ok(result)
}
