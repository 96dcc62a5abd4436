//! Shared support for the integration suites: an independent rational-Betti
//! oracle built on integer Smith-style reduction, plus deterministic RNG
//! helpers. Nothing here calls into the crate's own linear algebra — the
//! oracle reduces integer matrices from scratch so it can stand as a second
//! opinion on everything behind `ordinary_betti` and the zero-cocycle path.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use novikov::DeltaComplex;

#[allow(dead_code)]
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer boundary matrix of `c` in degree `k`, built directly from the
/// ordered face lists with alternating signs.
pub fn oracle_boundary(c: &DeltaComplex, k: usize) -> Vec<Vec<BigInt>> {
    let rows = c.num_cells(k - 1);
    let cols = c.num_cells(k);
    let mut m = vec![vec![BigInt::zero(); cols]; rows];
    for j in 0..cols {
        for (i, &f) in c.faces(k, j).iter().enumerate() {
            if i % 2 == 0 {
                m[f][j] += 1;
            } else {
                m[f][j] -= 1;
            }
        }
    }
    m
}

/// Rank of an integer matrix by Smith-style reduction: repeatedly move a
/// minimal-magnitude entry to the pivot position and clear its row and
/// column with integer row/column operations. Pivot magnitudes strictly
/// decrease whenever a remainder survives, so the inner loop terminates.
pub fn smith_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut t = 0;
    while t < rows && t < cols {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => a[i][j].magnitude() < a[pi][pj].magnitude(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..cols {
                        let sub = &q * &a[t][j];
                        a[i][j] -= sub;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in t..rows {
                        let sub = &q * &a[i][t];
                        a[i][j] -= sub;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        t += 1;
    }
    t
}

/// Rational Betti numbers of `c` through the Smith oracle: in each degree,
/// cells minus the ranks of the two adjacent boundary matrices. Torsion
/// cannot affect these ranks, so this matches homology with ℚ coefficients.
pub fn betti_oracle(c: &DeltaComplex) -> Vec<usize> {
    let dim = c.dimension();
    let mut ranks = vec![0usize; dim + 2];
    for (k, slot) in ranks.iter_mut().enumerate().take(dim + 1).skip(1) {
        *slot = smith_rank(oracle_boundary(c, k));
    }
    (0..=dim)
        .map(|k| c.num_cells(k) - ranks[k] - ranks[k + 1])
        .collect()
}

#[allow(dead_code)]
pub fn assert_oracle_sanity() {
    // Identity-style sanity checks for the oracle itself, callable from any
    // suite that wants to distrust its own referee.
    let two = || BigInt::from(2);
    assert_eq!(smith_rank(vec![]), 0);
    assert_eq!(smith_rank(vec![vec![BigInt::zero()]]), 0);
    assert_eq!(smith_rank(vec![vec![two()]]), 1);
    assert_eq!(
        smith_rank(vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)],
            vec![BigInt::from(-6), BigInt::from(6), BigInt::from(12)],
            vec![BigInt::from(10), BigInt::from(4), BigInt::from(16)],
        ]),
        3
    );
    // Rank-deficient: third row is the sum of the first two.
    assert_eq!(
        smith_rank(vec![
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(4), BigInt::from(5), BigInt::from(6)],
            vec![BigInt::from(5), BigInt::from(7), BigInt::from(9)],
        ]),
        2
    );
}
