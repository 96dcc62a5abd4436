//! A small corpus of model complexes with standard cocycles, plus
//! deterministic random generators for fuzzing.
//!
//! The models are one-vertex Δ-complexes: the circle (one loop), the wedge
//! of two circles, the torus (three loops, two triangles), and a genus-2
//! surface (an octagon fan-triangulated into six triangles, all eight rim
//! vertices identified). Each comes with a standard integral cocycle whose
//! generic dimensions are known in closed form.
//!
//! The random generators build ordered simplices from sorted vertex tuples
//! and memoize shared faces, which makes the simplicial identities hold by
//! construction; random cocycles are integer combinations of a basis of the
//! exact solution space of the edge-sum conditions, so they are valid on
//! every 2-cell by construction as well.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::complex::{validate_cocycle, Cocycle, DeltaComplex};
use crate::laurent::{ExponentVec, LaurentPoly};
use crate::linalg;
use crate::rank::LaurentMatrix;

/// Circle: one vertex, one loop.
pub fn circle() -> DeltaComplex {
    DeltaComplex::from_cells(1, vec![vec![vec![0, 0]]]).unwrap()
}

/// Degree-1 winding cocycle on the circle.
pub fn circle_cocycle() -> Cocycle {
    Cocycle::from_integers(1, vec![vec![1]]).unwrap()
}

/// Wedge of two circles: one vertex, two loops.
pub fn figure_eight() -> DeltaComplex {
    DeltaComplex::from_cells(1, vec![vec![vec![0, 0], vec![0, 0]]]).unwrap()
}

/// Weight (1, 1) on the two loops of the wedge.
pub fn figure_eight_cocycle() -> Cocycle {
    Cocycle::from_integers(1, vec![vec![1], vec![1]]).unwrap()
}

/// One-vertex torus: loops a, b and the diagonal c, glued by two triangles
/// with edge boundaries (b, c, a) and (a, c, b).
pub fn torus() -> DeltaComplex {
    DeltaComplex::from_cells(
        1,
        vec![
            vec![vec![0, 0], vec![0, 0], vec![0, 0]],
            vec![vec![1, 2, 0], vec![0, 2, 1]],
        ],
    )
    .unwrap()
}

/// Full rank-2 torus cocycle: a ↦ (1,0), b ↦ (0,1), c ↦ (1,1).
pub fn torus_cocycle_rank2() -> Cocycle {
    Cocycle::from_integers(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
}

/// Rank-1 torus cocycle supported on loop a (and forced on the diagonal).
pub fn torus_cocycle_horizontal() -> Cocycle {
    Cocycle::from_integers(1, vec![vec![1], vec![0], vec![1]]).unwrap()
}

/// Rank-1 torus cocycle supported on loop b (and forced on the diagonal).
pub fn torus_cocycle_vertical() -> Cocycle {
    Cocycle::from_integers(1, vec![vec![0], vec![1], vec![1]]).unwrap()
}

/// Genus-2 surface: a fan-triangulated octagon with one vertex, nine edges
/// (four handle loops and five diagonals) and six triangles. Euler
/// characteristic 1 − 9 + 6 = −2.
pub fn genus_two() -> DeltaComplex {
    DeltaComplex::from_cells(
        1,
        vec![
            vec![vec![0, 0]; 9],
            vec![
                vec![1, 4, 0],
                vec![4, 0, 5],
                vec![5, 6, 1],
                vec![7, 6, 2],
                vec![8, 3, 7],
                vec![2, 8, 3],
            ],
        ],
    )
    .unwrap()
}

/// Rank-1 cocycle on the genus-2 surface with weight 1 on edges 0 and 4 and
/// weight 0 elsewhere; the edge-sum condition holds on all six triangles.
pub fn genus_two_cocycle() -> Cocycle {
    Cocycle::from_integers(
        1,
        vec![
            vec![1],
            vec![0],
            vec![0],
            vec![0],
            vec![1],
            vec![0],
            vec![0],
            vec![0],
            vec![0],
        ],
    )
    .unwrap()
}

/// A named model case with its expected generic dimensions.
pub struct GoldenCase {
    pub name: &'static str,
    pub complex: DeltaComplex,
    pub cocycle: Cocycle,
    pub expected: Vec<usize>,
}

/// Every model complex paired with a standard cocycle and the generic
/// dimensions it must produce.
pub fn golden_corpus() -> Vec<GoldenCase> {
    vec![
        GoldenCase {
            name: "circle",
            complex: circle(),
            cocycle: circle_cocycle(),
            expected: vec![0, 0],
        },
        GoldenCase {
            name: "figure-eight",
            complex: figure_eight(),
            cocycle: figure_eight_cocycle(),
            expected: vec![0, 1],
        },
        GoldenCase {
            name: "torus-horizontal",
            complex: torus(),
            cocycle: torus_cocycle_horizontal(),
            expected: vec![0, 0, 0],
        },
        GoldenCase {
            name: "torus-vertical",
            complex: torus(),
            cocycle: torus_cocycle_vertical(),
            expected: vec![0, 0, 0],
        },
        GoldenCase {
            name: "torus-rank2",
            complex: torus(),
            cocycle: torus_cocycle_rank2(),
            expected: vec![0, 0, 0],
        },
        GoldenCase {
            name: "genus-two",
            complex: genus_two(),
            cocycle: genus_two_cocycle(),
            expected: vec![0, 2, 0],
        },
    ]
}

fn edge_for(
    edges: &mut Vec<Vec<usize>>,
    index: &mut BTreeMap<(usize, usize), usize>,
    tail: usize,
    head: usize,
) -> usize {
    debug_assert!(tail <= head, "edges are built from sorted vertex pairs");
    *index.entry((tail, head)).or_insert_with(|| {
        edges.push(vec![head, tail]);
        edges.len() - 1
    })
}

/// Generates a random Δ-complex of dimension ≤ 2 with at most 30 cells.
///
/// Simplices come from sorted vertex tuples (repeats allowed, so loops and
/// degenerate triangles occur), and faces are shared through memoization,
/// which guarantees the ordering identities that `from_cells` validates.
pub fn random_complex<R: Rng>(rng: &mut R) -> DeltaComplex {
    let num_vertices = rng.gen_range(1..=4);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut edge_index = BTreeMap::new();
    let mut triangles: Vec<Vec<usize>> = Vec::new();

    for _ in 0..rng.gen_range(0..=4) {
        let mut v = [0usize; 3];
        for slot in &mut v {
            *slot = rng.gen_range(0..num_vertices);
        }
        v.sort_unstable();
        let [a, b, c] = v;
        let e12 = edge_for(&mut edges, &mut edge_index, b, c);
        let e02 = edge_for(&mut edges, &mut edge_index, a, c);
        let e01 = edge_for(&mut edges, &mut edge_index, a, b);
        triangles.push(vec![e12, e02, e01]);
    }
    for _ in 0..rng.gen_range(0..=5) {
        let mut a = rng.gen_range(0..num_vertices);
        let mut b = rng.gen_range(0..num_vertices);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        edge_for(&mut edges, &mut edge_index, a, b);
    }

    let cells = if triangles.is_empty() {
        vec![edges]
    } else {
        vec![edges, triangles]
    };
    let complex = DeltaComplex::from_cells(num_vertices, cells)
        .expect("memoized construction satisfies the ordering identities");
    debug_assert!(complex.num_cells(0) + complex.num_cells(1) + complex.num_cells(2) <= 30);
    complex
}

/// Draws a random integral cocycle of the given rank on `c`.
///
/// The edge-sum conditions of the 2-cells form a linear system; an integer
/// basis of its solution space is combined with small random coefficients,
/// independently per deck coordinate.
pub fn random_cocycle<R: Rng>(rng: &mut R, c: &DeltaComplex, rank: usize) -> Cocycle {
    let num_edges = c.num_cells(1);
    let mut conditions: Vec<Vec<BigRational>> = Vec::new();
    for t in 0..c.num_cells(2) {
        let faces = c.faces(2, t);
        let mut row = vec![BigRational::zero(); num_edges];
        row[faces[0]] += BigRational::from_integer(BigInt::from(1));
        row[faces[1]] -= BigRational::from_integer(BigInt::from(1));
        row[faces[2]] += BigRational::from_integer(BigInt::from(1));
        conditions.push(row);
    }
    let basis: Vec<Vec<BigInt>> = linalg::kernel_basis(&conditions, num_edges)
        .iter()
        .map(|v| linalg::primitive_integer_vector(v))
        .collect();

    let mut values = vec![vec![BigRational::zero(); rank]; num_edges];
    for j in 0..rank {
        for b in &basis {
            let coeff = BigInt::from(rng.gen_range(-3i64..=3));
            if coeff.is_zero() {
                continue;
            }
            for (e, x) in b.iter().enumerate() {
                values[e][j] += BigRational::from_integer(&coeff * x);
            }
        }
    }
    let w = Cocycle::new(rank, values).expect("tuple lengths match by construction");
    debug_assert!(validate_cocycle(c, &w).is_ok());
    w
}

/// Generates a sparse random Laurent matrix: up to 12×12, ring rank 1..=3,
/// entry density about 0.3, each entry 1–3 terms with small coefficients and
/// exponents in [−2, 2].
pub fn random_laurent_matrix<R: Rng>(rng: &mut R) -> LaurentMatrix {
    let rows = rng.gen_range(1..=12);
    let cols = rng.gen_range(1..=12);
    let ring_rank = rng.gen_range(1..=3);
    let mut m = LaurentMatrix::new(rows, cols, ring_rank);
    for i in 0..rows {
        for j in 0..cols {
            if !rng.gen_bool(0.3) {
                continue;
            }
            let mut terms = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let mut coeff = rng.gen_range(-4i64..=4);
                if coeff == 0 {
                    coeff = 1;
                }
                let exps: Vec<i64> = (0..ring_rank).map(|_| rng.gen_range(-2..=2)).collect();
                terms.push((
                    ExponentVec::new(exps),
                    BigRational::from_integer(BigInt::from(coeff)),
                ));
            }
            let poly = LaurentPoly::from_terms(ring_rank, terms)
                .expect("terms share the generator count");
            m.set(i, j, poly);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti::{novikov_numbers, ordinary_betti};
    use crate::checks::{multiplicativity_check, Verdict};
    use crate::rank::Method;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn genus_two_is_a_closed_surface_homologically() {
        let g2 = genus_two();
        assert_eq!(g2.euler(), -2);
        assert_eq!(ordinary_betti(&g2), vec![1, 4, 1]);
    }

    #[test]
    fn genus_two_generic_dimensions() {
        let report =
            novikov_numbers(&genus_two(), &genus_two_cocycle(), Method::Exact, 0, 0).unwrap();
        assert_eq!(report.numbers, vec![0, 2, 0]);
    }

    #[test]
    fn golden_corpus_matches_the_exact_engine() {
        for case in golden_corpus() {
            let report =
                novikov_numbers(&case.complex, &case.cocycle, Method::Exact, 0, 0).unwrap();
            assert_eq!(report.numbers, case.expected, "case {}", case.name);
        }
    }

    #[test]
    fn golden_rank_one_cases_scale_under_covers() {
        for case in golden_corpus() {
            if case.cocycle.rank() != 1 || case.cocycle.is_zero() {
                continue;
            }
            for m in [2u64, 3, 5] {
                let r = multiplicativity_check(
                    &case.complex,
                    &case.cocycle,
                    m,
                    Method::Exact,
                    0,
                    0,
                )
                .unwrap();
                assert_eq!(r.verdict, Verdict::Pass, "case {} with m={m}", case.name);
            }
        }
    }

    #[test]
    fn random_complexes_are_valid_and_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..60 {
            let c = random_complex(&mut rng);
            assert!(c.validate().is_ok());
            assert!(c.dimension() <= 2);
            let total: usize = (0..=c.dimension()).map(|k| c.num_cells(k)).sum();
            assert!(total <= 30, "{total} cells");
        }
    }

    #[test]
    fn random_cocycles_satisfy_every_edge_sum_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let c = random_complex(&mut rng);
            let rank = rng.gen_range(1..=2);
            let w = random_cocycle(&mut rng, &c, rank);
            assert!(validate_cocycle(&c, &w).is_ok());
            assert!(w.is_integral());
            assert_eq!(w.rank(), rank);
        }
    }

    #[test]
    fn random_matrices_are_deterministic_per_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let ma = random_laurent_matrix(&mut a);
            let mb = random_laurent_matrix(&mut b);
            assert_eq!(ma.rows(), mb.rows());
            assert_eq!(ma.cols(), mb.cols());
            for (pos, poly) in ma.iter() {
                assert_eq!(mb.get(pos.0, pos.1), Some(poly));
            }
        }
    }
}
