//! Bundled transcriptions of published tour figures, plus the `ndkt v1`
//! tour file format.
//!
//! File layout: line 1 is the magic header `ndkt v1`, line 2 is
//! `shape: <e0> <e1> ...`, then the grid numbers in flat order — values
//! across a row (axis 0), rows down a block (axis 1), higher axes as
//! successive blocks separated by one blank line per carried axis level.
//! Parsing is whitespace-lenient; serialization is canonical and bit-exact,
//! so a written file can be diffed against a printed figure directly.

use sha2::{Digest, Sha256};

use crate::error::{Error, ParseErrorKind, Result};
use crate::lattice::Shape;
use crate::magic::magic_report;
use crate::tour::{validate, Closure, Grid};

/// Parses an `ndkt v1` tour file.
pub fn parse_tour_file(text: &str) -> Result<Grid> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| bad_header(1, ""))?;
    if header.trim_end() != "ndkt v1" {
        return Err(bad_header(1, header));
    }
    let (_, shape_line) = lines.next().ok_or_else(|| {
        Error::parse(2, 1, ParseErrorKind::BadShapeLine { found: String::new() })
    })?;
    let shape = parse_shape_line(shape_line)?;
    let n = shape.cell_count();

    let mut numbers = vec![0u32; n];
    let mut first_seen: Vec<Option<usize>> = vec![None; n + 1];
    let mut filled = 0usize;
    for (line_index, line) in lines {
        let line_no = line_index + 1;
        for (column, token) in tokens_with_columns(line) {
            let value: u64 = token.parse().map_err(|_| {
                Error::parse(
                    line_no,
                    column,
                    ParseErrorKind::BadToken {
                        token: token.to_string(),
                    },
                )
            })?;
            if filled >= n {
                return Err(Error::parse(
                    line_no,
                    column,
                    ParseErrorKind::WrongCellCount {
                        expected: n,
                        found: filled + 1,
                    },
                ));
            }
            if value == 0 || value > n as u64 {
                return Err(Error::parse(
                    line_no,
                    column,
                    ParseErrorKind::OutOfRangeNumber { value, max: n },
                ));
            }
            let value = value as u32;
            if let Some(first) = first_seen[value as usize] {
                return Err(Error::parse(
                    line_no,
                    column,
                    ParseErrorKind::DuplicateNumber {
                        value,
                        first: shape.cell_of(first).to_string(),
                        second: shape.cell_of(filled).to_string(),
                    },
                ));
            }
            first_seen[value as usize] = Some(filled);
            numbers[filled] = value;
            filled += 1;
        }
    }
    if filled != n {
        let last_line = text.lines().count().max(1);
        return Err(Error::parse(
            last_line,
            1,
            ParseErrorKind::WrongCellCount {
                expected: n,
                found: filled,
            },
        ));
    }
    Grid::new(shape, numbers)
}

fn bad_header(line: usize, found: &str) -> Error {
    Error::parse(
        line,
        1,
        ParseErrorKind::BadHeader {
            found: found.to_string(),
        },
    )
}

fn parse_shape_line(line: &str) -> Result<Shape> {
    let bad = || {
        Error::parse(
            2,
            1,
            ParseErrorKind::BadShapeLine {
                found: line.to_string(),
            },
        )
    };
    let rest = line.trim().strip_prefix("shape:").ok_or_else(bad)?;
    let mut dims = Vec::new();
    for part in rest.split_whitespace() {
        dims.push(part.parse::<usize>().map_err(|_| bad())?);
    }
    if dims.is_empty() {
        return Err(bad());
    }
    Shape::new(dims).map_err(|_| bad())
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let bytes = line.as_bytes();
    let mut pos = 0;
    std::iter::from_fn(move || {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            return None;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        Some((start + 1, &line[start..pos]))
    })
}

/// Serializes a grid in canonical `ndkt v1` form: single-space separators,
/// rows of `dims[0]` values, `dims[1]` rows per block, and one blank line
/// per carried axis level between blocks.
pub fn write_tour_file(grid: &Grid) -> String {
    let shape = grid.shape();
    let dims = shape.dims();
    let mut out = String::from("ndkt v1\nshape:");
    for e in dims {
        out.push(' ');
        out.push_str(&e.to_string());
    }
    out.push('\n');
    let row_len = dims[0];
    let rows_per_slice = if dims.len() >= 2 { dims[1] } else { 1 };
    let slice_count: usize = dims.iter().skip(2).product();
    let mut index = 0;
    for slice in 0..slice_count.max(1) {
        if slice > 0 {
            let mut blanks = 1;
            let mut t = slice;
            for &e in &dims[2..] {
                if t % e == 0 {
                    blanks += 1;
                    t /= e;
                } else {
                    break;
                }
            }
            for _ in 0..blanks {
                out.push('\n');
            }
        }
        for _ in 0..rows_per_slice {
            for col in 0..row_len {
                if col > 0 {
                    out.push(' ');
                }
                out.push_str(&grid.numbers()[index + col].to_string());
            }
            out.push('\n');
            index += row_len;
        }
    }
    out
}

/// Properties a bundled tour is declared to have. Undeclared properties
/// are reported from computation, never asserted.
#[derive(Clone, Debug, Default)]
pub struct Expected {
    pub closure: Option<Closure>,
    /// Every axis line sums to this constant.
    pub magic_constant: Option<u64>,
    /// All space diagonals also attain the constant (or are known to miss).
    pub diagonally_magic: Option<bool>,
    /// Axis-0 lines all attain this constant while the grid is not magic.
    pub row_magic_only: Option<u64>,
}

/// One bundled tour with its transcription checksum and declared
/// properties.
pub struct CorpusEntry {
    pub id: &'static str,
    pub text: &'static str,
    /// SHA-256 of the file bytes, recorded at transcription time.
    pub digest: &'static str,
    pub expected: Expected,
    pub note: &'static str,
}

impl CorpusEntry {
    pub fn grid(&self) -> Result<Grid> {
        parse_tour_file(self.text)
    }

    pub fn shape(&self) -> Result<Shape> {
        Ok(self.grid()?.shape().clone())
    }
}

/// The eight bundled entries, in figure order.
pub fn entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            id: "fig1b",
            text: include_str!("../corpus/fig1b.ndkt"),
            digest: "0cd9b5fbc50847616ff3ab58bb2d4cf9ceb6774b1d65fac9ece393091ece3e16",
            expected: Expected {
                row_magic_only: Some(111),
                ..Expected::default()
            },
            note: "published 6x6 tour whose six rows all sum to 111; its columns do not",
        },
        CorpusEntry {
            id: "fig2",
            text: include_str!("../corpus/fig2.ndkt"),
            digest: "363360db2aba7f2b08cb71ea7a74e1d5db0eb19bc8b9edbf08849fbc51ec08a3",
            expected: Expected {
                closure: Some(Closure::Closed),
                magic_constant: Some(130),
                diagonally_magic: Some(true),
                ..Expected::default()
            },
            note: "published closed magic tour on the 4x4x4 cube, diagonally magic",
        },
        CorpusEntry {
            id: "fig3",
            text: include_str!("../corpus/fig3.ndkt"),
            digest: "2311fdd4f5b076acda118b7d144bcadb3b5382cdbfec2bc05dc794c594edd614",
            expected: Expected {
                closure: Some(Closure::Open),
                magic_constant: Some(130),
                diagonally_magic: Some(true),
                ..Expected::default()
            },
            note: "published open magic tour on the 4x4x4 cube, diagonally magic",
        },
        CorpusEntry {
            id: "fig6",
            text: include_str!("../corpus/fig6.ndkt"),
            digest: "5698b54b8efdb201494e76ba507770de588433c240dc1d60fd50da1b4a16443f",
            expected: Expected {
                closure: Some(Closure::Closed),
                ..Expected::default()
            },
            note: "published smallest closed tour in four dimensions (3x4x2x2, stored \
                   with the printed row orientation as 4x3x2x2)",
        },
        CorpusEntry {
            id: "fig7",
            text: include_str!("../corpus/fig7.ndkt"),
            digest: "6bbd03660417c74f77e6b7dca9a871388d081f86901ed53ca7be7a902aa61b85",
            expected: Expected {
                closure: Some(Closure::Open),
                ..Expected::default()
            },
            note: "published smallest open tour in four dimensions (3x4x2x2, stored \
                   with the printed row orientation as 4x3x2x2)",
        },
        CorpusEntry {
            id: "fig8",
            text: include_str!("../corpus/fig8.ndkt"),
            digest: "25a59c0074fc9364903f3c0b7e54647b0d3f9dab4f9073d741d352f6a5a9a003",
            expected: Expected {
                closure: Some(Closure::Closed),
                ..Expected::default()
            },
            note: "published smallest closed tour in five dimensions (3x4x2x2x2); the \
                   printed blocks map to the higher axes in Gray-code order, resolved \
                   by transcription-time validation",
        },
        CorpusEntry {
            id: "fig9",
            text: include_str!("../corpus/fig9.ndkt"),
            digest: "6eeefcbc5a465e7d57a1e65f398b1e718d115dbdef253c3a95a0e04a03380aba",
            expected: Expected {
                magic_constant: Some(514),
                diagonally_magic: Some(false),
                ..Expected::default()
            },
            note: "published magic tour on the 4x4x4x4 hypercube; its eight space \
                   diagonals are not magic; closure is reported, not declared",
        },
        CorpusEntry {
            id: "fig10",
            text: include_str!("../corpus/fig10.ndkt"),
            digest: "bee3a285d4ab17b814e0cc8fc4214e6066726d4f1c3bd5e918221d35aff060fd",
            expected: Expected {
                magic_constant: Some(2050),
                ..Expected::default()
            },
            note: "published magic tour on the 4x4x4x4x4 hypercube; closure and \
                   diagonal sums are reported, not declared",
        },
    ]
}

pub fn entry(id: &str) -> Option<CorpusEntry> {
    entries().into_iter().find(|e| e.id == id)
}

/// Outcome of checking one bundled entry against its declared properties.
#[derive(Clone, Debug)]
pub struct EntryVerification {
    pub id: &'static str,
    pub passed: bool,
    /// Each failure names the property and the first violating line or step.
    pub failures: Vec<String>,
}

/// Verifies every bundled entry: checksum, canonical round-trip, tour
/// validity, and each declared property. Failures are results, not errors.
pub fn corpus_verify_all() -> Vec<EntryVerification> {
    entries()
        .iter()
        .map(|entry| {
            let failures = verify_entry(entry);
            EntryVerification {
                id: entry.id,
                passed: failures.is_empty(),
                failures,
            }
        })
        .collect()
}

fn verify_entry(entry: &CorpusEntry) -> Vec<String> {
    let mut failures = Vec::new();
    let digest = hex_digest(entry.text.as_bytes());
    if digest != entry.digest {
        failures.push(format!(
            "checksum: expected {}, file hashes to {digest}",
            entry.digest
        ));
    }
    let grid = match entry.grid() {
        Ok(grid) => grid,
        Err(e) => {
            failures.push(format!("parse: {e}"));
            return failures;
        }
    };
    if write_tour_file(&grid) != entry.text {
        failures.push("canonical-form: file is not in canonical serialization".into());
    }
    let report = validate(&grid);
    if !report.valid {
        failures.push(format!(
            "validity: {}",
            report
                .first_violation
                .map(|v| v.to_string())
                .unwrap_or_else(|| "unknown violation".into())
        ));
        return failures;
    }
    if let Some(declared) = entry.expected.closure {
        if report.closure != declared {
            failures.push(format!(
                "closure: declared {declared}, computed {}",
                report.closure
            ));
        }
    }
    let wants_diagonals = entry.expected.diagonally_magic.is_some();
    let magic = match magic_report(&grid, wants_diagonals) {
        Ok(m) => m,
        Err(e) => {
            failures.push(format!("magic-report: {e}"));
            return failures;
        }
    };
    if let Some(constant) = entry.expected.magic_constant {
        if magic.magic_constant() != Some(constant) {
            failures.push(format!(
                "magic-constant: declared {constant}, computed {:?}",
                magic.magic_constant()
            ));
        }
        if magic.is_magic() != Some(true) {
            let detail = magic
                .first_off_line()
                .map(|l| {
                    format!(
                        "axis {} line at flat {} sums to {}",
                        l.axis, l.first_cell, l.sum
                    )
                })
                .unwrap_or_default();
            failures.push(format!("magic: not all lines attain {constant}; {detail}"));
        }
    }
    if let Some(declared) = entry.expected.diagonally_magic {
        if magic.is_diagonally_magic() != Some(declared) {
            failures.push(format!(
                "diagonally-magic: declared {declared}, computed {:?} (diagonal sums {:?})",
                magic.is_diagonally_magic(),
                magic.diagonal_sums()
            ));
        }
    }
    if let Some(constant) = entry.expected.row_magic_only {
        match magic.axis_magic_counts(0) {
            Some((attained, total)) if attained == total => {}
            other => failures.push(format!(
                "row-magic-only: axis-0 lines do not all attain {constant}: {other:?}"
            )),
        }
        if magic.magic_constant() != Some(constant) {
            failures.push(format!(
                "row-magic-only: constant mismatch, computed {:?}",
                magic.magic_constant()
            ));
        }
        if magic.is_magic() == Some(true) {
            failures.push("row-magic-only: grid is unexpectedly fully magic".into());
        }
    }
    failures
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{Error, ParseErrorKind};

    #[test]
    fn all_entries_verify() {
        for v in corpus_verify_all() {
            assert!(v.passed, "{}: {:?}", v.id, v.failures);
        }
    }

    #[test]
    fn exactly_eight_entries_are_bundled() {
        let ids: Vec<&str> = entries().iter().map(|e| e.id).collect();
        assert_eq!(
            ids,
            ["fig1b", "fig2", "fig3", "fig6", "fig7", "fig8", "fig9", "fig10"]
        );
    }

    #[test]
    fn round_trip_is_identity_on_every_entry() {
        for entry in entries() {
            let grid = entry.grid().unwrap();
            let written = write_tour_file(&grid);
            assert_eq!(written, entry.text, "{} canonical form drifted", entry.id);
            assert_eq!(parse_tour_file(&written).unwrap(), grid);
        }
    }

    #[test]
    fn parse_is_whitespace_lenient() {
        let squashed = "ndkt v1\nshape: 4 3\n1 4 7 10 12 9\n\n\n2 5 3 6 11 8\n";
        let grid = parse_tour_file(squashed).unwrap();
        assert_eq!(grid.shape().dims(), &[4, 3]);
        assert_eq!(grid.number_at(0), 1);
        assert_eq!(grid.number_at(11), 8);
    }

    #[test]
    fn header_mismatch_is_reported_at_line_one() {
        let err = parse_tour_file("nkdt v1\nshape: 2 2\n1 2\n3 4\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 1,
                kind: ParseErrorKind::BadHeader { .. },
                ..
            }
        ));
    }

    #[test]
    fn bad_shape_lines_are_rejected() {
        for text in [
            "ndkt v1\nsize: 2 2\n1 2\n3 4\n",
            "ndkt v1\nshape:\n",
            "ndkt v1\nshape: 0 4\n",
            "ndkt v1\nshape: -2 4\n",
        ] {
            assert!(matches!(
                parse_tour_file(text).unwrap_err(),
                Error::Parse {
                    kind: ParseErrorKind::BadShapeLine { .. },
                    ..
                }
            ));
        }
    }

    #[test]
    fn wrong_cell_counts_are_reported() {
        let too_few = parse_tour_file("ndkt v1\nshape: 2 2\n1 2 3\n").unwrap_err();
        assert!(matches!(
            too_few,
            Error::Parse {
                kind: ParseErrorKind::WrongCellCount {
                    expected: 4,
                    found: 3
                },
                ..
            }
        ));
        let too_many = parse_tour_file("ndkt v1\nshape: 2 2\n1 2 3 4 5\n").unwrap_err();
        assert!(matches!(
            too_many,
            Error::Parse {
                line: 3,
                column: 9,
                kind: ParseErrorKind::WrongCellCount { expected: 4, .. },
            }
        ));
    }

    #[test]
    fn out_of_range_and_bad_tokens_carry_positions() {
        let err = parse_tour_file("ndkt v1\nshape: 2 2\n1 2\n3 9\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 4,
                column: 3,
                kind: ParseErrorKind::OutOfRangeNumber { value: 9, max: 4 },
            }
        ));
        let err = parse_tour_file("ndkt v1\nshape: 2 2\n1 x\n3 4\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 3,
                column: 3,
                kind: ParseErrorKind::BadToken { .. },
            }
        ));
    }

    #[test]
    fn altered_digit_in_fig9_names_both_colliding_cells() {
        let entry = entry("fig9").unwrap();
        // turn the 80 in the first row into 180, colliding with the
        // existing 180 elsewhere
        let corrupted = entry.text.replacen("1 80 191 242", "1 180 191 242", 1);
        let err = parse_tour_file(&corrupted).unwrap_err();
        match err {
            Error::Parse {
                kind: ParseErrorKind::DuplicateNumber { value, first, second },
                ..
            } => {
                assert_eq!(value, 180);
                assert!(first.starts_with('(') && second.starts_with('('));
                assert_ne!(first, second);
            }
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn fig10_parses_to_the_five_dimensional_shape() {
        let entry = entry("fig10").unwrap();
        let grid = entry.grid().unwrap();
        assert_eq!(grid.shape().dims(), &[4, 4, 4, 4, 4]);
        assert_eq!(grid.shape().cell_count(), 1024);
    }

    #[test]
    fn unknown_id_is_none() {
        assert!(entry("fig99").is_none());
    }
}
