//! Novikov numbers of a Δ-complex with an integral 1-cocycle, together with
//! their specializations: ordinary Betti numbers, dimensions at individual
//! points of the character torus, jump detection, and Monte Carlo estimates
//! of the torus average.
//!
//! The generic (Novikov) number in degree k is
//!   b_k = #k-cells − rank D_k − rank D_{k+1}
//! with ranks of the equivariant boundaries taken over the Laurent fraction
//! field. Specializing the deck variables to a point of (ℂ*)^r can only
//! enlarge kernels, so pointwise dimensions are ≥ the generic ones, with
//! equality off a proper algebraic subset — the jump locus. Averaging the
//! pointwise dimension against Haar measure on the unit torus therefore
//! recovers the generic value, which is what the sampler checks.

use std::time::{Duration, Instant};


use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{build_equivariant, Cocycle, DeltaComplex, EquivariantComplex};
use crate::error::{Error, Result};
use crate::laurent::SpecPoint;
use crate::linalg;
use crate::rank::{generic_rank, specialized_rank, EngineReport, Method};

/// Per-degree generic dimensions over the Laurent fraction field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    /// Number of deck-transformation variables.
    pub ring_rank: usize,
    /// Cells per degree, 0..=dim.
    pub cell_counts: Vec<usize>,
    /// `boundary_ranks[k]` is the rank of the boundary map leaving degree
    /// k+1, for k in 0..dim.
    pub boundary_ranks: Vec<usize>,
    /// Generic dimensions per degree, 0..=dim.
    pub numbers: Vec<usize>,
    /// Alternating sum of cell counts; always equals the alternating sum of
    /// `numbers` because the boundary ranks telescope.
    pub euler: i64,
    /// How the ranks were computed.
    pub method: String,
    /// Random trials per rank (0 when the method was exact).
    pub trials: u32,
    /// Seed the trials were derived from.
    pub seed: u64,
    /// Primes actually used by randomized trials, in the order visited.
    pub primes: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Dimensions of the specialized complex at one point of the deck torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointHomology {
    /// Human-readable description of the point.
    pub point: String,
    /// Specialized dimensions per degree, 0..=dim.
    pub dims: Vec<usize>,
    /// All ranks were computed in exact arithmetic (rational or modular).
    pub exact_arithmetic: bool,
    /// Some numerical rank had a singular value near the cut-off.
    pub ambiguous: bool,
}

/// One probed point compared against the generic dimensions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpProbe {
    pub point: String,
    pub dims: Vec<usize>,
    /// Degrees where the pointwise dimension exceeds the generic one.
    pub jumped: Vec<bool>,
    pub exact_arithmetic: bool,
    pub ambiguous: bool,
}

/// Jump-locus probe across a list of points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpReport {
    pub generic: Vec<usize>,
    pub probes: Vec<JumpProbe>,
    pub seed: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Monte Carlo estimate of the torus-averaged dimensions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub samples: u32,
    pub seed: u64,
    pub tolerance: f64,
    /// Generic dimensions the averages are compared against.
    pub generic: Vec<usize>,
    /// Sample mean of the pointwise dimension, per degree.
    pub means: Vec<f64>,
    /// Per degree, how many samples differed from the generic value.
    pub deviating: Vec<u32>,
    /// Samples with at least one ambiguous numerical rank.
    pub ambiguous_samples: u32,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn degree_dims(cell_counts: &[usize], ranks: &[usize]) -> Vec<usize> {
    let dim = cell_counts.len() - 1;
    (0..=dim)
        .map(|k| {
            let from_below = if k > 0 { ranks[k - 1] } else { 0 };
            let from_above = if k < dim { ranks[k] } else { 0 };
            cell_counts[k]
                .checked_sub(from_below + from_above)
                .expect("boundary ranks of a chain complex cannot overlap")
        })
        .collect()
}

fn collect_primes(engine: &EngineReport, into: &mut Vec<u64>) {
    match engine {
        EngineReport::Randomized { primes, .. } | EngineReport::CrossChecked { primes, .. } => {
            into.extend(primes.iter().copied());
        }
        _ => {}
    }
}

/// Computes the generic dimensions of the equivariant complex of `(c, w)`.
///
/// `w` must be integral; approximate rational cocycles first. `trials` and
/// `seed` only matter for the randomized methods.
pub fn novikov_numbers(
    c: &DeltaComplex,
    w: &Cocycle,
    method: Method,
    trials: u32,
    seed: u64,
) -> Result<BettiReport> {
    let start = Instant::now();
    let eq = build_equivariant(c, w)?;
    let dim = eq.dimension();
    let mut boundary_ranks = Vec::with_capacity(dim);
    let mut primes = Vec::new();
    for k in 1..=dim {
        let d = eq.boundary(k).expect("boundary exists for 1..=dim");
        let result = generic_rank(d, method, trials as usize, seed.wrapping_add(k as u64))?;
        collect_primes(&result.engine, &mut primes);
        boundary_ranks.push(result.rank);
    }
    let cell_counts = eq.cell_counts().to_vec();
    let numbers = degree_dims(&cell_counts, &boundary_ranks);
    Ok(BettiReport {
        ring_rank: eq.ring_rank(),
        cell_counts,
        boundary_ranks,
        numbers,
        euler: c.euler(),
        method: method.to_string(),
        trials: if method == Method::Exact { 0 } else { trials },
        seed,
        primes,
        elapsed: start.elapsed(),
    })
}

/// Betti numbers of the underlying complex with rational coefficients.
pub fn ordinary_betti(c: &DeltaComplex) -> Vec<usize> {
    let dim = c.dimension();
    let mut ranks = Vec::with_capacity(dim);
    for k in 1..=dim {
        ranks.push(linalg::rank_rational(&c.boundary_matrix_int(k)));
    }
    degree_dims(&c.cell_counts(), &ranks)
}

fn dims_at_point(
    eq: &EquivariantComplex,
    point: &SpecPoint,
    tolerance: f64,
) -> Result<(Vec<usize>, bool, bool)> {
    let dim = eq.dimension();
    let mut ranks = Vec::with_capacity(dim);
    let mut exact = true;
    let mut ambiguous = false;
    for k in 1..=dim {
        let d = eq.boundary(k).expect("boundary exists for 1..=dim");
        let result = specialized_rank(d, point, tolerance)?;
        match &result.engine {
            EngineReport::Numerical { ambiguous: a, .. } => {
                exact = false;
                ambiguous |= a;
            }
            EngineReport::SpecializedAt { .. } => {}
            other => unreachable!("specialized rank reported {other:?}"),
        }
        ranks.push(result.rank);
    }
    Ok((degree_dims(eq.cell_counts(), &ranks), exact, ambiguous))
}

/// Dimensions of the complex specialized at a single point.
pub fn homology_at_point(
    c: &DeltaComplex,
    w: &Cocycle,
    point: &SpecPoint,
    tolerance: f64,
) -> Result<PointHomology> {
    let eq = build_equivariant(c, w)?;
    let (dims, exact_arithmetic, ambiguous) = dims_at_point(&eq, point, tolerance)?;
    Ok(PointHomology {
        point: point.describe(),
        dims,
        exact_arithmetic,
        ambiguous,
    })
}

/// Probes the given points against the generic dimensions, flagging the
/// degrees where the dimension jumps.
///
/// Errors with [`Error::Semicontinuity`] if a point reports a dimension
/// *below* the generic value, which can only happen through an arithmetic
/// bug, a numerically misjudged rank, or unlucky randomized trials.
pub fn jump_probe(
    c: &DeltaComplex,
    w: &Cocycle,
    points: &[SpecPoint],
    trials: u32,
    seed: u64,
    tolerance: f64,
) -> Result<JumpReport> {
    let start = Instant::now();
    let generic = novikov_numbers(c, w, Method::Specialize, trials, seed)?.numbers;
    let eq = build_equivariant(c, w)?;
    let mut probes = Vec::with_capacity(points.len());
    for point in points {
        let (dims, exact_arithmetic, ambiguous) = dims_at_point(&eq, point, tolerance)?;
        let mut jumped = Vec::with_capacity(dims.len());
        for (k, (&d, &g)) in dims.iter().zip(&generic).enumerate() {
            if d < g {
                return Err(Error::Semicontinuity {
                    degree: k,
                    dim: d,
                    generic: g,
                });
            }
            jumped.push(d > g);
        }
        probes.push(JumpProbe {
            point: point.describe(),
            dims,
            jumped,
            exact_arithmetic,
            ambiguous,
        });
    }
    Ok(JumpReport {
        generic,
        probes,
        seed,
        elapsed: start.elapsed(),
    })
}

/// Samples uniform points on the unit torus and averages the pointwise
/// dimensions, which estimates the von Neumann dimensions of the associated
/// free abelian cover. Off the measure-zero jump locus the pointwise value
/// equals the generic one, so the means should track `generic` tightly.
pub fn montecarlo_l2(
    c: &DeltaComplex,
    w: &Cocycle,
    samples: u32,
    seed: u64,
    tolerance: f64,
) -> Result<MonteCarloReport> {
    if samples == 0 {
        return Err(Error::InvalidSamples);
    }
    let start = Instant::now();
    let generic = novikov_numbers(c, w, Method::Specialize, 3, seed)?.numbers;
    let eq = build_equivariant(c, w)?;
    let dim = eq.dimension();
    let mut sums = vec![0u64; dim + 1];
    let mut deviating = vec![0u32; dim + 1];
    let mut ambiguous_samples = 0u32;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(i).wrapping_add(0x746f_7275_7300)); // distinct from rank trials
        let point = SpecPoint::random_unit(&mut rng, eq.ring_rank());
        let (dims, _, ambiguous) = dims_at_point(&eq, &point, tolerance)?;
        if ambiguous {
            ambiguous_samples += 1;
        }
        for (k, &d) in dims.iter().enumerate() {
            sums[k] += d as u64;
            if d != generic[k] {
                deviating[k] += 1;
            }
        }
    }
    let means = sums
        .iter()
        .map(|&s| s as f64 / f64::from(samples))
        .collect();
    Ok(MonteCarloReport {
        samples,
        seed,
        tolerance,
        generic,
        means,
        deviating,
        ambiguous_samples,
        elapsed: start.elapsed(),
    })
}
