//! Dense exact linear algebra over ℚ and over prime fields: rank, reduced row
//! echelon form, and kernel bases. Everything here is small and dense; the
//! Laurent-matrix engines layer their own elimination on top.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::modular;

pub type QMatrix = Vec<Vec<BigRational>>;

/// Rank over ℚ by Gauss–Jordan elimination.
pub fn rank_rational(mat: &[Vec<BigRational>]) -> usize {
    rref(mat.to_vec()).1.len()
}

/// Reduced row echelon form. Returns the reduced matrix and the pivot columns.
pub fn rref(mut m: QMatrix) -> (QMatrix, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..cols {
            let v = &m[row][c] * &inv;
            m[row][c] = v;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for c in col..cols {
                    let v = &m[i][c] - &factor * &m[row][c];
                    m[i][c] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Basis of the right kernel {x : M·x = 0} ⊂ ℚ^cols, one vector per free
/// column. `cols` must be passed explicitly so 0×n matrices work.
pub fn kernel_basis(mat: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    debug_assert!(mat.iter().all(|r| r.len() == cols));
    let (r, pivots) = rref(mat.to_vec());
    let mut basis = Vec::new();
    let mut pivot_iter = pivots.iter().copied().peekable();
    let mut pivot_of_col = vec![None; cols];
    for (i, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(i);
    }
    for free in 0..cols {
        if pivot_iter.peek() == Some(&free) {
            pivot_iter.next();
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::from_integer(BigInt::from(1));
        for (col, piv) in pivot_of_col.iter().enumerate() {
            if let Some(i) = piv {
                v[col] = -r[*i][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of a matrix over F_p by Gaussian elimination.
pub fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| m[i][col] % p != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = modular::inv_mod(m[rank][col] % p, p);
        for c in col..cols {
            m[rank][c] = modular::mul_mod(m[rank][c] % p, inv, p);
        }
        for i in 0..rows {
            if i != rank && m[i][col] % p != 0 {
                let f = m[i][col] % p;
                for c in col..cols {
                    let sub = modular::mul_mod(f, m[rank][c], p);
                    m[i][c] = modular::sub_mod(m[i][c] % p, sub, p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Scales a rational vector to a primitive integer vector (cleared
/// denominators, content 1, first nonzero entry positive). The zero vector
/// maps to zeros.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::from(1);
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = content.gcd(x);
    }
    if content.is_zero() {
        return ints;
    }
    let flip = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    if flip {
        content = -content;
    }
    for x in &mut ints {
        *x /= &content;
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qm(rows: &[&[i64]]) -> QMatrix {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank_rational(&qm(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_rational(&qm(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank_rational(&qm(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank_rational(&[]), 0);
    }

    #[test]
    fn kernel_dimensions() {
        // rank-nullity: 1×3 rank-1 matrix has 2-dimensional kernel
        let k = kernel_basis(&qm(&[&[1, 2, 3]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigRational = v
                .iter()
                .zip(&qm(&[&[1, 2, 3]])[0])
                .map(|(a, b)| a * b)
                .sum();
            assert!(dot.is_zero());
        }
        // empty matrix: kernel is everything
        assert_eq!(kernel_basis(&[], 4).len(), 4);
        // identity: kernel is zero
        assert_eq!(kernel_basis(&qm(&[&[1, 0], &[0, 1]]), 2).len(), 0);
    }

    #[test]
    fn kernel_vectors_really_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..6);
            let m: QMatrix = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3))))
                        .collect()
                })
                .collect();
            let kb = kernel_basis(&m, cols);
            assert_eq!(kb.len(), cols - rank_rational(&m));
            for v in &kb {
                for row in &m {
                    let dot: BigRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                    assert!(dot.is_zero());
                }
            }
        }
    }

    #[test]
    fn modular_rank_matches_rational_rank_generically() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = 1_073_741_827u64;
        for _ in 0..200 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let ints: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-4i64..=4)).collect())
                .collect();
            let q: QMatrix = ints
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect();
            let f: Vec<Vec<u64>> = ints
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| x.rem_euclid(p as i64) as u64)
                        .collect()
                })
                .collect();
            // entries are tiny versus p, so no accidental rank drop is possible
            assert_eq!(rank_mod(f, p), rank_rational(&q));
        }
    }

    #[test]
    fn primitive_vector_normalization() {
        let v = vec![
            BigRational::new(BigInt::from(3), BigInt::from(2)),
            BigRational::new(BigInt::from(-9), BigInt::from(4)),
        ];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(2), BigInt::from(-3)]
        );
        let z = vec![BigRational::zero(); 3];
        assert!(primitive_integer_vector(&z).iter().all(|x| x.is_zero()));
        let neg = vec![-BigRational::one()];
        assert_eq!(primitive_integer_vector(&neg), vec![BigInt::from(1)]);
    }
}
