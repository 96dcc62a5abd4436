//! Approximating a rational cocycle by an integral one.
//!
//! The engines need integral cocycles, but natural inputs are often
//! rational. `rational_approximation` finds a scale λ = 1/q with q at most
//! a given bound and an integral cocycle ŵ with λ·ŵ ≈ w, preferring exact
//! rescalings when the bound allows the least common denominator. The
//! rounding happens inside the space of valid cocycles (the edge-sum
//! conditions keep holding) and tries to keep cycles on which w vanishes at
//! value zero — at tight bounds that can conflict with closeness, and the
//! result reports which was achieved.

use num_rational::BigRational;

use novikov::{figure_eight, rational_approximation, Cocycle, DeltaComplex};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn main() -> novikov::Result<()> {
    // Weight (1, 1/3) on the two loops of the figure eight.
    let c = figure_eight();
    let w = Cocycle::new(1, vec![vec![rat(1, 1)], vec![rat(1, 3)]])?;

    for bound in [2, 3] {
        let a = rational_approximation(&c, &w, bound)?;
        let values: Vec<String> = (0..a.cocycle.num_edges())
            .map(|e| a.cocycle.value(e)[0].to_string())
            .collect();
        println!(
            "bound {bound}: λ = {}, ŵ = ({}), sup error {}, exact: {}, kernel preserved: {}",
            a.lambda,
            values.join(", "),
            a.sup_error,
            a.exact,
            a.kernel_preserved
        );
    }

    // A loop with w-value 0 stays at 0: the approximation never invents
    // monodromy on cycles that had none.
    let wedge3 = DeltaComplex::from_cells(1, vec![vec![vec![0, 0], vec![0, 0], vec![0, 0]]])?;
    let w = Cocycle::new(1, vec![vec![rat(1, 3)], vec![rat(0, 1)], vec![rat(1, 2)]])?;
    let a = rational_approximation(&wedge3, &w, 2)?;
    println!();
    println!(
        "wedge of three loops, weights (1/3, 0, 1/2) at bound 2: ŵ = ({}, {}, {}), sup error {}",
        a.cocycle.value(0)[0],
        a.cocycle.value(1)[0],
        a.cocycle.value(2)[0],
        a.sup_error
    );
    assert!(a.cocycle.value(1)[0] == rat(0, 1));
    Ok(())
}
