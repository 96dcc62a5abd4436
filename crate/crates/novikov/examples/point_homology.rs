//! Homology of the specialized complex at a single point.
//!
//! Evaluating the deck variables at a point of the torus (or of (F_p*)ʳ,
//! or of (ℚ*)ʳ) turns the equivariant complex into a complex of scalar
//! matrices; its homology dimensions depend on the point. At the trivial
//! point they are the ordinary Betti numbers of the base. Points whose
//! coordinates are ±1 or rational or finite-field units are handled in
//! exact arithmetic; other unit-torus points fall back to singular-value
//! ranks with an explicit tolerance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_rational::BigRational;

use novikov::{
    homology_at_point, novikov_numbers, ordinary_betti, torus, torus_cocycle_rank2, Method,
    SpecPoint,
};

fn main() -> novikov::Result<()> {
    let c = torus();
    let w = torus_cocycle_rank2();
    let generic = novikov_numbers(&c, &w, Method::Exact, 0, 0)?.numbers;
    println!("torus with the rank-2 cocycle; generic dimensions {generic:?}");
    println!("ordinary Betti numbers {:?}", ordinary_betti(&c));
    println!();

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let points = [
        SpecPoint::trivial(2),
        SpecPoint::UnitComplex {
            turns: vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())],
        },
        SpecPoint::Rational {
            coords: vec![BigRational::new(2.into(), 3.into()), BigRational::new(5.into(), 1.into())],
        },
        SpecPoint::random_finite_field(&mut rng, 2),
        SpecPoint::random_unit(&mut rng, 2),
    ];

    for point in &points {
        let h = homology_at_point(&c, &w, point, 1e-8)?;
        println!("  {}", h.point);
        println!(
            "    dims {:?}  exact arithmetic: {}  ambiguous: {}",
            h.dims, h.exact_arithmetic, h.ambiguous
        );
        for (k, &d) in h.dims.iter().enumerate() {
            assert!(d >= generic[k], "pointwise dimensions never drop below generic");
        }
    }

    let trivial = homology_at_point(&c, &w, &SpecPoint::trivial(2), 1e-8)?;
    assert_eq!(trivial.dims, ordinary_betti(&c));
    println!();
    println!("the trivial point recovered the ordinary Betti numbers exactly");
    Ok(())
}
