//! Probing the jump locus.
//!
//! The dimension of the specialized homology at a point of the deck torus
//! is at least the generic dimension, with equality away from a proper
//! subvariety (the jump locus). This example probes the torus with its
//! full rank-2 cocycle at the trivial point, at points with coordinates
//! ±1 (handled in exact rational arithmetic), and at an irrational-looking
//! random point (handled numerically), and flags every jump.

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use novikov::{jump_probe, torus, torus_cocycle_rank2, SpecPoint};

fn turns(list: &[(i64, i64)]) -> SpecPoint {
    SpecPoint::UnitComplex {
        turns: list
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect(),
    }
}

fn main() -> novikov::Result<()> {
    let c = torus();
    let w = torus_cocycle_rank2();

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let points = vec![
        SpecPoint::trivial(2),        // (1, 1): the ordinary homology
        turns(&[(1, 2), (1, 2)]),     // (−1, −1): still exact arithmetic
        turns(&[(1, 3), (1, 2)]),     // (e^{2πi/3}, −1): numerical
        SpecPoint::random_unit(&mut rng, 2),
    ];

    let report = jump_probe(&c, &w, &points, 5, 42, 1e-8)?;
    println!("generic dimensions: {:?}", report.generic);
    println!();
    for probe in &report.probes {
        let jumps: Vec<usize> = probe
            .jumped
            .iter()
            .enumerate()
            .filter_map(|(k, &j)| j.then_some(k))
            .collect();
        println!("  {}", probe.point);
        println!(
            "    dims {:?}  exact arithmetic: {}  jumps in degrees {:?}",
            probe.dims, probe.exact_arithmetic, jumps
        );
        // Semicontinuity: pointwise dimensions never fall below generic.
        for (k, &d) in probe.dims.iter().enumerate() {
            assert!(d >= report.generic[k]);
        }
    }
    Ok(())
}
