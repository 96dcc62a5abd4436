//! Finite cyclic covers and the scaling law.
//!
//! A rank-1 integral cocycle classifies a map of the complex to the circle;
//! pulling back the m-fold self-cover of the circle yields the m-sheeted
//! cyclic cover, whose edges and cells are m shifted copies of the base
//! ones. The generic dimensions scale exactly: each degree is multiplied
//! by the sheet count.

use novikov::{
    cyclic_cover, figure_eight, figure_eight_cocycle, multiplicativity_check, novikov_numbers,
    Method, Verdict,
};

fn main() -> novikov::Result<()> {
    let base = figure_eight();
    let w = figure_eight_cocycle();
    let base_numbers = novikov_numbers(&base, &w, Method::Exact, 0, 0)?.numbers;
    println!("figure eight, weight (1, 1): base numbers {base_numbers:?}");
    println!();

    for m in [2u64, 3, 5] {
        let (cover, cover_w) = cyclic_cover(&base, &w, m)?;
        let cover_numbers = novikov_numbers(&cover, &cover_w, Method::Exact, 0, 0)?.numbers;
        println!(
            "  {m}-sheeted cover: {} vertices, {} edges, numbers {:?}",
            cover.num_cells(0),
            cover.num_cells(1),
            cover_numbers
        );

        let check = multiplicativity_check(&base, &w, m, Method::Exact, 0, 0)?;
        assert_eq!(check.verdict, Verdict::Pass);
        for row in &check.degrees {
            println!(
                "    degree {}: cover {} = {} × {}  [{}]",
                row.degree,
                row.left,
                m,
                row.right / m as i64,
                if row.pass { "ok" } else { "VIOLATED" }
            );
            assert_eq!(row.left, row.right);
        }
    }
    Ok(())
}
