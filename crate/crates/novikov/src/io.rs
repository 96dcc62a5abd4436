//! Line-oriented text formats: the `.dcx` complex file, critical-point
//! vectors, and torus-point lists.
//!
//! A `.dcx` file is human-auditable text. `#` starts a comment, blank lines
//! are skipped. The header `vertices = N` comes first, then one `[cells k]`
//! section per dimension in increasing order (each line lists the k+1 face
//! indices of one k-cell), and optionally a `[cocycle r]` section with one
//! line of r rational edge values per 1-cell:
//!
//! ```text
//! vertices = 1
//! [cells 1]
//! 0 0
//! 0 0
//! [cocycle 1]
//! 1
//! 3/2
//! ```
//!
//! Parsing reports the offending line and column; semantic validation
//! (face ranges, ordering identities, edge-sum conditions) then names the
//! offending cell.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;

use crate::checks::CriticalVector;
use crate::complex::{validate_cocycle, Cocycle, DeltaComplex};
use crate::error::{Error, Result};
use crate::laurent::{parse_turn_point, SpecPoint};

/// A parsed `.dcx` file: the complex and its optional embedded cocycle.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFile {
    pub complex: DeltaComplex,
    pub cocycle: Option<Cocycle>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Whitespace tokens of a line together with their 1-based start columns.
fn tokens_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_usize(token: &str, line: usize, col: usize, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::parse(line, col, format!("expected {what}, found `{token}`")))
}

fn parse_rational(token: &str, line: usize, col: usize) -> Result<BigRational> {
    BigRational::from_str(token).map_err(|_| {
        Error::parse(
            line,
            col,
            format!("expected a rational number like 3 or -1/2, found `{token}`"),
        )
    })
}

enum Section {
    Cells(usize),
    Cocycle(usize),
}

fn parse_section_header(line: &str, lineno: usize) -> Result<Section> {
    let inner = line
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::parse(lineno, 1, "malformed section header".to_string()))?;
    let tokens = tokens_with_cols(inner);
    match tokens.as_slice() {
        [(_, "cells"), (col, k)] => {
            let k = parse_usize(k, lineno, col + 1, "a cell dimension")?;
            if !(1..=8).contains(&k) {
                return Err(Error::parse(
                    lineno,
                    col + 1,
                    format!("cell dimension {k} out of the supported range 1..=8"),
                ));
            }
            Ok(Section::Cells(k))
        }
        [(_, "cocycle"), (col, r)] => {
            let r = parse_usize(r, lineno, col + 1, "a cocycle rank")?;
            if r == 0 {
                return Err(Error::parse(lineno, col + 1, "cocycle rank must be ≥ 1"));
            }
            Ok(Section::Cocycle(r))
        }
        _ => Err(Error::parse(
            lineno,
            1,
            "section header must be [cells k] or [cocycle r]".to_string(),
        )),
    }
}

/// Parses the `.dcx` text format.
pub fn parse_complex(text: &str) -> Result<ComplexFile> {
    let mut num_vertices: Option<usize> = None;
    let mut cells: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut cocycle_rank: Option<usize> = None;
    let mut cocycle_values: Vec<Vec<BigRational>> = Vec::new();
    let mut section: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }

        if num_vertices.is_none() {
            let tokens = tokens_with_cols(line);
            match tokens.as_slice() {
                [(_, "vertices"), (_, "="), (col, n)] => {
                    num_vertices = Some(parse_usize(n, lineno, *col, "a vertex count")?);
                    continue;
                }
                [(col, _), ..] => {
                    return Err(Error::parse(
                        lineno,
                        *col,
                        "file must start with `vertices = N`".to_string(),
                    ))
                }
                [] => unreachable!("blank lines are skipped"),
            }
        }

        if line.trim_start().starts_with('[') {
            let next = parse_section_header(line, lineno)?;
            match &next {
                Section::Cells(k) => {
                    if cocycle_rank.is_some() {
                        return Err(Error::parse(
                            lineno,
                            1,
                            "cell sections must precede the cocycle section".to_string(),
                        ));
                    }
                    if *k != cells.len() + 1 {
                        return Err(Error::parse(
                            lineno,
                            1,
                            format!(
                                "expected [cells {}] next; dimensions must increase by one",
                                cells.len() + 1
                            ),
                        ));
                    }
                    cells.push(Vec::new());
                }
                Section::Cocycle(r) => {
                    if cocycle_rank.is_some() {
                        return Err(Error::parse(
                            lineno,
                            1,
                            "duplicate cocycle section".to_string(),
                        ));
                    }
                    cocycle_rank = Some(*r);
                }
            }
            section = Some(next);
            continue;
        }

        let tokens = tokens_with_cols(line);
        match &section {
            None => {
                return Err(Error::parse(
                    lineno,
                    tokens[0].0,
                    "expected a [cells k] section header".to_string(),
                ))
            }
            Some(Section::Cells(k)) => {
                if tokens.len() != k + 1 {
                    return Err(Error::parse(
                        lineno,
                        tokens[0].0,
                        format!(
                            "a {k}-cell needs {} face indices, found {}",
                            k + 1,
                            tokens.len()
                        ),
                    ));
                }
                let mut faces = Vec::with_capacity(k + 1);
                for (col, tok) in tokens {
                    faces.push(parse_usize(tok, lineno, col, "a face index")?);
                }
                cells.last_mut().expect("inside a cells section").push(faces);
            }
            Some(Section::Cocycle(r)) => {
                cocycle_values.push(parse_value_line(line, *r, lineno)?);
            }
        }
    }

    let num_vertices =
        num_vertices.ok_or_else(|| Error::parse(1, 1, "empty file; expected `vertices = N`"))?;
    let complex = DeltaComplex::from_cells(num_vertices, cells)?;
    let cocycle = match cocycle_rank {
        None => None,
        Some(r) => {
            if cocycle_values.len() != complex.num_cells(1) {
                return Err(Error::CocycleLength {
                    values: cocycle_values.len(),
                    edges: complex.num_cells(1),
                });
            }
            let w = Cocycle::new(r, cocycle_values)?;
            validate_cocycle(&complex, &w)?;
            Some(w)
        }
    };
    Ok(ComplexFile { complex, cocycle })
}

fn parse_value_line(line: &str, rank: usize, lineno: usize) -> Result<Vec<BigRational>> {
    let tokens = tokens_with_cols(line);
    if tokens.len() != rank {
        return Err(Error::parse(
            lineno,
            tokens.first().map(|t| t.0).unwrap_or(1),
            format!(
                "a rank-{rank} cocycle line needs {rank} values, found {}",
                tokens.len()
            ),
        ));
    }
    let mut value = Vec::with_capacity(rank);
    for (col, tok) in tokens {
        value.push(parse_rational(tok, lineno, col)?);
    }
    Ok(value)
}

/// Parses a cocycle from text that is either a full `.dcx` file (whose
/// embedded cocycle is taken) or a bare `[cocycle r]` section with value
/// lines.
pub fn parse_cocycle_text(text: &str) -> Result<Cocycle> {
    let first = text
        .lines()
        .map(strip_comment)
        .map(str::trim)
        .find(|l| !l.is_empty());
    if matches!(first, Some(l) if l.starts_with("vertices")) {
        return parse_complex(text)?.cocycle.ok_or_else(|| {
            Error::Usage("the cocycle file has no [cocycle r] section".to_string())
        });
    }
    let mut rank: Option<usize> = None;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        if line.trim_start().starts_with('[') {
            match (parse_section_header(line, lineno)?, &rank) {
                (Section::Cocycle(r), None) => rank = Some(r),
                _ => {
                    return Err(Error::parse(
                        lineno,
                        1,
                        "expected exactly one [cocycle r] section".to_string(),
                    ))
                }
            }
            continue;
        }
        match rank {
            Some(r) => values.push(parse_value_line(line, r, lineno)?),
            None => {
                return Err(Error::parse(
                    lineno,
                    1,
                    "expected a [cocycle r] section header first".to_string(),
                ))
            }
        }
    }
    let rank = rank.ok_or_else(|| Error::parse(1, 1, "no [cocycle r] section found"))?;
    Cocycle::new(rank, values)
}

/// Reads and parses a `.dcx` file from disk.
pub fn read_complex(path: &Path) -> Result<ComplexFile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_complex(&text)
}

/// Renders a complex (and optional cocycle) in the `.dcx` format. The output
/// re-parses to an equal complex and cocycle.
pub fn write_complex(c: &DeltaComplex, w: Option<&Cocycle>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices = {}", c.num_cells(0));
    for k in 1..=c.dimension() {
        let _ = writeln!(out, "[cells {k}]");
        for cell in 0..c.num_cells(k) {
            let faces: Vec<String> = c.faces(k, cell).iter().map(|f| f.to_string()).collect();
            let _ = writeln!(out, "{}", faces.join(" "));
        }
    }
    if let Some(w) = w {
        let _ = writeln!(out, "[cocycle {}]", w.rank());
        for e in 0..w.num_edges() {
            let row: Vec<String> = w.value(e).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

/// Writes a `.dcx` file to disk.
pub fn write_complex_file(path: &Path, c: &DeltaComplex, w: Option<&Cocycle>) -> Result<()> {
    std::fs::write(path, write_complex(c, w)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses the one-line critical vector format `c = [n0, n1, ...]`.
pub fn parse_critical(text: &str) -> Result<CriticalVector> {
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let rest = line.strip_prefix('c').map(str::trim_start).ok_or_else(|| {
            Error::parse(lineno, 1, "critical vector line must look like `c = [0, 2, 0]`")
        })?;
        let rest = rest.strip_prefix('=').map(str::trim_start).ok_or_else(|| {
            Error::parse(lineno, 2, "expected `=` after `c`".to_string())
        })?;
        let inner = rest
            .strip_prefix('[')
            .and_then(|s| s.trim_end().strip_suffix(']'))
            .ok_or_else(|| Error::parse(lineno, 1, "expected a bracketed list".to_string()))?;
        return parse_critical_list(inner, lineno);
    }
    Err(Error::parse(1, 1, "empty critical vector file".to_string()))
}

fn parse_critical_list(list: &str, lineno: usize) -> Result<CriticalVector> {
    let mut counts = Vec::new();
    for piece in list.split(',') {
        let tok = piece.trim();
        if tok.is_empty() {
            return Err(Error::parse(lineno, 1, "empty entry in critical vector"));
        }
        let n = tok.parse::<u64>().map_err(|_| {
            Error::parse(
                lineno,
                1,
                format!("critical counts are non-negative integers, found `{tok}`"),
            )
        })?;
        counts.push(n);
    }
    Ok(CriticalVector::new(counts))
}

/// Parses the CLI form of a critical vector: `0,2,0`.
pub fn parse_critical_arg(s: &str) -> Result<CriticalVector> {
    parse_critical_list(s, 1)
}

/// Parses a semicolon-separated list of torus points, each a comma-separated
/// list of rational turns (the point is e^{2πi·turn} per coordinate):
/// `0,0; 1/3,1/2`.
pub fn parse_points(s: &str, rank: usize) -> Result<Vec<SpecPoint>> {
    let mut points = Vec::new();
    for piece in s.split(';') {
        if piece.trim().is_empty() {
            continue;
        }
        points.push(parse_turn_point(piece, rank, 1)?);
    }
    if points.is_empty() {
        return Err(Error::Usage("no points given; pass e.g. --points 0,0".to_string()));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_a_torus_file_with_cocycle() {
        let text = "\
# one-vertex torus
vertices = 1
[cells 1]
0 0
0 0
0 0
[cells 2]
1 2 0   # upper triangle
0 2 1   # lower triangle
[cocycle 2]
1 0
0 1
1 1
";
        let parsed = parse_complex(text).unwrap();
        assert_eq!(parsed.complex, corpus::torus());
        assert_eq!(parsed.cocycle, Some(corpus::torus_cocycle_rank2()));
    }

    #[test]
    fn round_trips_every_golden_case() {
        for case in corpus::golden_corpus() {
            let text = write_complex(&case.complex, Some(&case.cocycle));
            let parsed = parse_complex(&text).unwrap();
            assert_eq!(parsed.complex, case.complex, "case {}", case.name);
            assert_eq!(parsed.cocycle.as_ref(), Some(&case.cocycle), "case {}", case.name);
        }
    }

    #[test]
    fn round_trips_random_complexes() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(909);
        for _ in 0..40 {
            let c = corpus::random_complex(&mut rng);
            let w = corpus::random_cocycle(&mut rng, &c, 2);
            let parsed = parse_complex(&write_complex(&c, Some(&w))).unwrap();
            assert_eq!(parsed.complex, c);
            assert_eq!(parsed.cocycle, Some(w));
        }
    }

    #[test]
    fn rational_cocycle_values_survive_the_round_trip() {
        let c = corpus::circle();
        let w = Cocycle::new(1, vec![vec![rat(3, 2)]]).unwrap();
        let text = write_complex(&c, Some(&w));
        assert!(text.contains("3/2"));
        let parsed = parse_complex(&text).unwrap();
        assert_eq!(parsed.cocycle, Some(w));
    }

    #[test]
    fn missing_header_is_a_parse_error_with_position() {
        let err = parse_complex("[cells 1]\n0 0\n").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!((line, col), (1, 1));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_face_index_reports_line_and_column() {
        let err = parse_complex("vertices = 1\n[cells 1]\n0 x\n").unwrap_err();
        match err {
            Error::Parse { line, col, msg } => {
                assert_eq!((line, col), (3, 3));
                assert!(msg.contains('x'), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_face_count_is_rejected_at_parse_time() {
        let err = parse_complex("vertices = 1\n[cells 2]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_complex("vertices = 1\n[cells 1]\n0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn skipped_dimensions_are_rejected() {
        let err = parse_complex("vertices = 1\n[cells 2]\n0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn cocycle_length_must_match_the_edge_count() {
        let err = parse_complex("vertices = 1\n[cells 1]\n0 0\n0 0\n[cocycle 1]\n1\n").unwrap_err();
        assert!(matches!(err, Error::CocycleLength { values: 1, edges: 2 }), "{err:?}");
    }

    #[test]
    fn invalid_edge_sums_are_rejected_on_load() {
        let text = "\
vertices = 1
[cells 1]
0 0
0 0
0 0
[cells 2]
1 2 0
0 2 1
[cocycle 1]
1
1
1
";
        let err = parse_complex(text).unwrap_err();
        assert!(matches!(err, Error::CocycleViolation { .. }), "{err:?}");
    }

    #[test]
    fn bare_cocycle_files_parse() {
        let w = parse_cocycle_text("[cocycle 2]\n1 0\n0 1\n1 1\n").unwrap();
        assert_eq!(w, corpus::torus_cocycle_rank2());
        let full = write_complex(&corpus::torus(), Some(&corpus::torus_cocycle_rank2()));
        assert_eq!(parse_cocycle_text(&full).unwrap(), corpus::torus_cocycle_rank2());
        assert!(parse_cocycle_text("vertices = 1\n[cells 1]\n0 0\n").is_err());
        assert!(parse_cocycle_text("1 0\n").is_err(), "values before header");
    }

    #[test]
    fn critical_vector_formats() {
        let c = parse_critical("# counts\nc = [0, 2, 0]\n").unwrap();
        assert_eq!(c.counts, vec![0, 2, 0]);
        let c = parse_critical_arg("0,2,0").unwrap();
        assert_eq!(c.counts, vec![0, 2, 0]);
        assert!(parse_critical_arg("0,-1").is_err());
        assert!(parse_critical("b = [1]").is_err());
    }

    #[test]
    fn point_lists() {
        let pts = parse_points("0,0; 1/3,1/2", 2).unwrap();
        assert_eq!(pts.len(), 2);
        match &pts[0] {
            SpecPoint::UnitComplex { turns } => assert!(turns.iter().all(|t| t.numer().bits() == 0)),
            other => panic!("expected unit point, got {other:?}"),
        }
        assert!(parse_points("1/3", 2).is_err(), "rank mismatch");
        assert!(parse_points("  ", 1).is_err(), "no points");
    }

    #[test]
    fn file_io_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("torus.dcx");
        write_complex_file(&path, &corpus::torus(), Some(&corpus::torus_cocycle_rank2())).unwrap();
        let parsed = read_complex(&path).unwrap();
        assert_eq!(parsed.complex, corpus::torus());
        let missing = read_complex(&dir.path().join("nope.dcx"));
        assert!(matches!(missing, Err(Error::Io { .. })));
    }
}
