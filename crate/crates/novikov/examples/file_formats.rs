//! The text formats: complexes, critical vectors, and torus points.
//!
//! A `.dcx` file carries a Δ-complex (one `[cells k]` section per
//! dimension, one line of face indices per cell) and optionally a
//! `[cocycle r]` section with one line of r rational values per edge.
//! Rendering and parsing round-trip exactly; parse errors carry the line
//! and column.

use novikov::io::{parse_complex, parse_critical_arg, parse_points, write_complex};
use novikov::{torus, torus_cocycle_rank2, Error};

fn main() -> novikov::Result<()> {
    let c = torus();
    let w = torus_cocycle_rank2();

    let text = write_complex(&c, Some(&w));
    println!("the one-vertex torus with its rank-2 cocycle:");
    println!();
    for line in text.lines() {
        println!("  {line}");
    }

    let parsed = parse_complex(&text)?;
    assert_eq!(parsed.complex, c);
    assert_eq!(parsed.cocycle, Some(w));
    println!();
    println!("round trip: parsed complex and cocycle are equal to the originals");

    // Parse errors point at the offending position.
    let broken = "vertices = 1\n[cells 1]\n0 zero\n";
    match parse_complex(broken) {
        Err(Error::Parse { line, col, msg }) => {
            println!();
            println!("broken input rejected at line {line}, column {col}: {msg}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }

    // The companion one-line formats used by the command-line interface.
    let critical = parse_critical_arg("0,2,0")?;
    println!();
    println!("critical vector `0,2,0` parses to counts {:?}", critical.counts);

    let points = parse_points("0,0; 1/3,1/2", 2)?;
    for p in &points {
        println!("torus point: {}", p.describe());
    }
    Ok(())
}
