//! Critical-point count inequalities.
//!
//! A vector c = (c₀, c₁, …) of critical-point counts is tested against the
//! computed generic dimensions b under three rules: the alternating-sum
//! (strong Morse-type) inequalities, the simple bound cᵢ ≥ bᵢ, and the
//! lacunary principle (if cᵢ = 0 in two consecutive degrees, bᵢ must vanish
//! there too). The genus-2 surface with its standard rank-1 cocycle has
//! b = (0, 2, 0), so c = (0, 2, 0) is sharp and c = (0, 1, 0) must fail.

use novikov::{
    genus_two, genus_two_cocycle, lacunary_check, novikov_numbers, novikov_shubin_check,
    vanishing_check, CheckReport, CriticalVector, Method, Verdict,
};

fn show(report: &CheckReport) {
    println!("  rule {:16} verdict {:?}", report.rule, report.verdict);
    for row in &report.degrees {
        println!(
            "    degree {}: {} {:>3} vs {:>3}  [{}]",
            row.degree,
            row.kind,
            row.left,
            row.right,
            if row.pass { "ok" } else { "violated" }
        );
    }
}

fn main() -> novikov::Result<()> {
    let numbers = novikov_numbers(&genus_two(), &genus_two_cocycle(), Method::Exact, 0, 0)?;
    println!("genus-2 surface: generic dimensions {:?}", numbers.numbers);

    for counts in [vec![0, 2, 0], vec![0, 1, 0]] {
        let c = CriticalVector::new(counts.clone());
        println!();
        println!("candidate counts {counts:?}:");
        let shubin = novikov_shubin_check(&c, &numbers)?;
        let simple = vanishing_check(&c, &numbers)?;
        let lacunary = lacunary_check(&c, &numbers)?;
        show(&shubin);
        show(&simple);
        show(&lacunary);
        let all = [&shubin, &simple, &lacunary];
        let passed = all.iter().all(|r| r.verdict != Verdict::Fail);
        println!("  => counts {counts:?} are {}", if passed { "admissible" } else { "ruled out" });
    }
    Ok(())
}
