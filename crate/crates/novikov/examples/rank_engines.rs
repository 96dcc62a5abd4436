//! The two rank engines and how they relate.
//!
//! `exact_rank` runs fraction-free elimination over the Laurent ring and is
//! unconditionally correct. `specialized_rank` evaluates the matrix at one
//! unit point and computes a scalar rank there, which can only undershoot
//! the generic rank (the bad points form a proper subvariety), so taking
//! the maximum over a few random finite-field points recovers the generic
//! rank with high probability. `generic_rank` with `Method::Both` runs both
//! engines and errors if they ever disagree.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use novikov::{
    exact_rank, generic_rank, parse_poly, random_laurent_matrix, specialized_rank, EngineReport,
    LaurentMatrix, Method, SpecPoint,
};

fn main() -> novikov::Result<()> {
    // A 2×2 matrix over ℤ[z±]: rows ((z−1, z−1), (2z−2, 2z−2)) — the second
    // row is twice the first, so the generic rank is 1.
    let rank = 1;
    let rows = vec![
        vec![parse_poly("(1)[1] + (-1)[0]", rank, 1)?, parse_poly("(1)[1] + (-1)[0]", rank, 1)?],
        vec![parse_poly("(2)[1] + (-2)[0]", rank, 1)?, parse_poly("(2)[1] + (-2)[0]", rank, 1)?],
    ];
    let m = LaurentMatrix::from_dense(rank, rows);

    let exact = exact_rank(&m);
    println!("exact rank: {}", exact.rank);

    // At the trivial point z = 1 every entry vanishes: the specialized rank
    // drops below the generic one. That is the jump phenomenon.
    let at_one = specialized_rank(&m, &SpecPoint::trivial(rank), 1e-8)?;
    println!("rank at z = 1: {} (a jump point)", at_one.rank);
    assert!(at_one.rank <= exact.rank);

    // A random finite-field point almost surely sees the generic rank.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = SpecPoint::random_finite_field(&mut rng, rank);
    let at_p = specialized_rank(&m, &p, 1e-8)?;
    println!("rank at {}: {}", p.describe(), at_p.rank);

    // Method::Both cross-checks the engines on every call.
    let both = generic_rank(&m, Method::Both, 5, 7)?;
    match &both.engine {
        EngineReport::CrossChecked { trials, primes } => {
            println!(
                "cross-checked rank {} over {} trials at primes {:?}",
                both.rank, trials, primes
            );
        }
        other => println!("engine report: {other:?}"),
    }

    // Fuzz: on random sparse matrices the randomized engine never exceeds
    // the exact rank, and almost always meets it.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut met = 0;
    for _ in 0..20 {
        let m = random_laurent_matrix(&mut rng);
        let e = exact_rank(&m).rank;
        let r = generic_rank(&m, Method::Specialize, 5, 3)?.rank;
        assert!(r <= e, "specialization can only undershoot");
        met += usize::from(r == e);
    }
    println!("randomized engine met the exact rank on {met}/20 random matrices");
    Ok(())
}
