//! Exact and randomized computation of the generic homology dimensions of
//! free abelian covers of finite Δ-complexes.
//!
//! An integral 1-cocycle on a Δ-complex selects a free abelian cover with
//! deck group ℤʳ. Lifting the boundary maps turns the chain complex into a
//! complex of matrices over the Laurent ring ℚ[z₁^{±1}, …, z_r^{±1}]; the
//! generic dimension in degree k is
//!
//! ```text
//! b_k = #k-cells − rank D_k − rank D_{k+1}
//! ```
//!
//! with ranks over the Laurent fraction field. These numbers equal the von
//! Neumann dimensions of the reduced ℓ²-homology of the cover, and equal the
//! dimension of the homology twisted by a flat line bundle at every
//! monodromy point outside a proper subvariety (the jump locus).
//!
//! What the crate provides:
//!
//! * [`laurent`] — exact multivariate Laurent arithmetic and specialization
//!   points (finite-field, rational, unit-circle).
//! * [`complex`] — Δ-complexes with ordered faces, cocycle validation, the
//!   equivariant boundary builder, and finite cyclic covers.
//! * [`rank`] — three rank engines over the Laurent ring: fraction-free
//!   exact elimination, randomized finite-field specialization, and their
//!   cross-checked combination, plus numerical ranks at torus points.
//! * [`betti`] — generic dimensions, ordinary Betti numbers, pointwise
//!   dimensions, jump probing, and Monte Carlo averages over the unit torus.
//! * [`checks`] — Morse-type inequality checkers against user-supplied
//!   critical-point counts, and the cyclic-cover scaling law.
//! * [`approx`] — integral approximation of rational cocycles at bounded
//!   denominator.
//! * [`io`], [`report`], [`cli`] — the `.dcx` text format, deterministic
//!   JSON reports, and the command-line front end.
//!
//! Everything randomized is driven by explicit seeds; rerunning any
//! computation with the same inputs and seed reproduces the result
//! byte-for-byte.
//!
//! # Example
//!
//! ```
//! use novikov::{corpus, betti, rank::Method};
//!
//! let complex = corpus::torus();
//! let cocycle = corpus::torus_cocycle_rank2();
//! let report = betti::novikov_numbers(&complex, &cocycle, Method::Exact, 0, 0).unwrap();
//! assert_eq!(report.numbers, vec![0, 0, 0]);
//! assert_eq!(betti::ordinary_betti(&complex), vec![1, 2, 1]);
//! ```

pub mod approx;
pub mod betti;
pub mod checks;
pub mod cli;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod io;
pub mod laurent;
mod linalg;
mod modular;
pub mod rank;
pub mod report;

pub use approx::{rational_approximation, ApproxCocycle};
pub use betti::{
    homology_at_point, jump_probe, montecarlo_l2, novikov_numbers, ordinary_betti, BettiReport,
    JumpProbe, JumpReport, MonteCarloReport, PointHomology,
};
pub use checks::{
    lacunary_check, multiplicativity_check, novikov_shubin_check, vanishing_check, CheckReport,
    CriticalVector, DegreeCheck, Verdict,
};
pub use complex::{
    build_equivariant, cocycle_rank, cyclic_cover, validate_cocycle, Cocycle, DeltaComplex,
    EquivariantComplex,
};
pub use corpus::{
    circle, circle_cocycle, figure_eight, figure_eight_cocycle, genus_two, genus_two_cocycle,
    golden_corpus, random_cocycle, random_complex, random_laurent_matrix, torus,
    torus_cocycle_horizontal, torus_cocycle_rank2, torus_cocycle_vertical, GoldenCase,
};
pub use error::{Error, Result};
pub use laurent::{parse_poly, ExponentVec, LaurentPoly, SpecPoint};
pub use rank::{
    exact_rank, generic_rank, specialized_rank, EngineReport, LaurentMatrix, Method, RankResult,
};
