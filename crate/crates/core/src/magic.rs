//! Magic-constant arithmetic, line and diagonal sum verification, the magic
//! ratio, and the quartile-group balance check behind the construction
//! method for magic tours of order 4.
//!
//! Everything here is exact integer arithmetic; sums are never floated.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_lines, enumerate_space_diagonals, Line};
use crate::tour::Grid;

/// The required common line sum m·(m^d + 1)/2 for a 1..=m^d numbering of a
/// d-dimensional hypercube of order m.
///
/// Exact for every m ≤ 64, d ≤ 8; the division is always integral because
/// either m or m^d + 1 is even.
pub fn magic_constant(order: u64, dimension: u32) -> u64 {
    assert!(order >= 1 && dimension >= 1);
    let m = order as u128;
    let power = m.checked_pow(dimension).expect("order^dimension fits u128");
    let product = m.checked_mul(power + 1).expect("magic constant fits u128");
    u64::try_from(product / 2).expect("magic constant fits u64")
}

/// An exact fraction of attained lines, kept unreduced for display.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub attained: usize,
    pub total: usize,
}

impl Ratio {
    pub fn as_f64(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.attained as f64 / self.total as f64
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.attained, self.total)
    }
}

/// One axis line with its number sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSum {
    pub axis: usize,
    /// Flat index of the line's first cell, for reporting.
    pub first_cell: usize,
    pub sum: u64,
}

/// Line and diagonal sums of a numbered grid.
///
/// The magic predicate is defined only for cubic shapes; on cuboids the
/// report carries per-line sums and nothing else. Diagonal fields are
/// present only when requested.
#[derive(Clone, Debug)]
pub struct MagicReport {
    magic_constant: Option<u64>,
    line_sums: Vec<LineSum>,
    magic_line_count: usize,
    diagonal_sums: Option<Vec<u64>>,
    magic_diagonal_count: usize,
}

impl MagicReport {
    /// The required line sum, present only for cubic shapes.
    pub fn magic_constant(&self) -> Option<u64> {
        self.magic_constant
    }

    pub fn line_sums(&self) -> &[LineSum] {
        &self.line_sums
    }

    pub fn total_line_count(&self) -> usize {
        self.line_sums.len()
    }

    /// Lines attaining the magic constant. `None` off the cubic domain.
    pub fn magic_line_count(&self) -> Option<usize> {
        self.magic_constant.map(|_| self.magic_line_count)
    }

    /// True iff every axis line attains the magic constant.
    pub fn is_magic(&self) -> Option<bool> {
        self.magic_constant
            .map(|_| self.magic_line_count == self.line_sums.len())
    }

    pub fn diagonal_sums(&self) -> Option<&[u64]> {
        self.diagonal_sums.as_deref()
    }

    pub fn magic_diagonal_count(&self) -> Option<usize> {
        self.diagonal_sums.as_ref().map(|_| self.magic_diagonal_count)
    }

    /// True iff every space diagonal attains the magic constant; present
    /// only when diagonals were requested.
    pub fn is_diagonally_magic(&self) -> Option<bool> {
        self.diagonal_sums
            .as_ref()
            .map(|d| self.magic_diagonal_count == d.len())
    }

    /// Fraction of axis lines attaining the magic constant. Diagonals are
    /// excluded; see [`MagicReport::magic_ratio_with_diagonals`] for the
    /// variant that counts them.
    pub fn magic_ratio(&self) -> Option<Ratio> {
        self.magic_constant.map(|_| Ratio {
            attained: self.magic_line_count,
            total: self.line_sums.len(),
        })
    }

    /// Magic ratio with space diagonals included in both counts. Requires
    /// the report to have been built with diagonals.
    pub fn magic_ratio_with_diagonals(&self) -> Option<Ratio> {
        match (&self.magic_constant, &self.diagonal_sums) {
            (Some(_), Some(diag)) => Some(Ratio {
                attained: self.magic_line_count + self.magic_diagonal_count,
                total: self.line_sums.len() + diag.len(),
            }),
            _ => None,
        }
    }

    /// The first line that misses the magic constant, if any.
    pub fn first_off_line(&self) -> Option<&LineSum> {
        let constant = self.magic_constant?;
        self.line_sums.iter().find(|l| l.sum != constant)
    }

    /// Lines on one axis attaining the constant, as (attained, total).
    pub fn axis_magic_counts(&self, axis: usize) -> Option<(usize, usize)> {
        let constant = self.magic_constant?;
        let on_axis = self.line_sums.iter().filter(|l| l.axis == axis);
        let total = on_axis.clone().count();
        let attained = on_axis.filter(|l| l.sum == constant).count();
        Some((attained, total))
    }

    /// Stable machine-readable rendering, e.g.
    /// `magic=true lines=256/256 constant=514 diag=6/8`.
    pub fn to_kv(&self) -> String {
        match self.magic_constant {
            Some(constant) => {
                let mut out = format!(
                    "magic={} lines={}/{} constant={constant}",
                    self.is_magic().expect("cubic"),
                    self.magic_line_count,
                    self.line_sums.len()
                );
                if let Some(diag) = &self.diagonal_sums {
                    out.push_str(&format!(
                        " diag={}/{}",
                        self.magic_diagonal_count,
                        diag.len()
                    ));
                }
                out
            }
            None => format!("magic=undefined lines={}", self.line_sums.len()),
        }
    }
}

/// Sums every axis line of `grid` (and optionally its space diagonals)
/// and compares them against the magic constant when the shape is cubic.
///
/// The numbering must be a bijection onto 1..=N; it need not be a valid
/// tour. Requesting diagonals on a non-cubic shape is a domain error.
pub fn magic_report(grid: &Grid, include_diagonals: bool) -> Result<MagicReport> {
    let shape = grid.shape();
    require_bijection(grid)?;
    if include_diagonals && !shape.is_cubic() {
        return Err(Error::Domain(format!(
            "space diagonals are defined for cubic boards only, got {shape}"
        )));
    }
    let constant = shape
        .order()
        .map(|m| magic_constant(m as u64, shape.dimension() as u32));
    let line_sums: Vec<LineSum> = enumerate_lines(shape)
        .iter()
        .map(|line| LineSum {
            axis: line.axis,
            first_cell: line.cells[0],
            sum: sum_cells(grid, &line.cells),
        })
        .collect();
    let magic_line_count = match constant {
        Some(c) => line_sums.iter().filter(|l| l.sum == c).count(),
        None => 0,
    };
    let (diagonal_sums, magic_diagonal_count) = if include_diagonals {
        let sums: Vec<u64> = enumerate_space_diagonals(shape)?
            .iter()
            .map(|cells| sum_cells(grid, cells))
            .collect();
        let attained = match constant {
            Some(c) => sums.iter().filter(|&&s| s == c).count(),
            None => 0,
        };
        (Some(sums), attained)
    } else {
        (None, 0)
    };
    Ok(MagicReport {
        magic_constant: constant,
        line_sums,
        magic_line_count,
        diagonal_sums,
        magic_diagonal_count,
    })
}

fn sum_cells(grid: &Grid, cells: &[usize]) -> u64 {
    cells.iter().map(|&c| grid.number_at(c) as u64).sum()
}

fn require_bijection(grid: &Grid) -> Result<()> {
    let n = grid.shape().cell_count();
    let mut seen = vec![false; n + 1];
    for &v in grid.numbers() {
        if v == 0 || v as usize > n || seen[v as usize] {
            return Err(Error::InvalidInput(format!(
                "numbering is not a bijection onto 1..={n} (offending value {v})"
            )));
        }
        seen[v as usize] = true;
    }
    Ok(())
}

/// Balance of the four consecutive number groups across the length-4 axis
/// lines of an order-4 board: the construction discipline requires every
/// line to take exactly one number from each quarter of 1..=N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuartileReport {
    pub group_count: usize,
    pub balanced_line_count: usize,
    pub total_line_count: usize,
    pub balanced: bool,
    /// Axis and first cell of the first unbalanced line, if any.
    pub first_unbalanced: Option<(usize, usize)>,
}

impl QuartileReport {
    pub fn to_kv(&self) -> String {
        format!(
            "quartile_balanced={} quartile_lines={}/{}",
            self.balanced, self.balanced_line_count, self.total_line_count
        )
    }
}

/// Checks quartile balance on a cubic board of order 4.
pub fn quartile_report(grid: &Grid) -> Result<QuartileReport> {
    let shape = grid.shape();
    if shape.order() != Some(4) {
        return Err(Error::Domain(format!(
            "quartile balance is defined for order-4 cubic boards only, got {shape}"
        )));
    }
    require_bijection(grid)?;
    let group_size = shape.cell_count() / 4;
    let lines = enumerate_lines(shape);
    let mut balanced_line_count = 0;
    let mut first_unbalanced = None;
    for line in &lines {
        if line_is_balanced(grid, line, group_size) {
            balanced_line_count += 1;
        } else if first_unbalanced.is_none() {
            first_unbalanced = Some((line.axis, line.cells[0]));
        }
    }
    Ok(QuartileReport {
        group_count: 4,
        balanced_line_count,
        total_line_count: lines.len(),
        balanced: balanced_line_count == lines.len(),
        first_unbalanced,
    })
}

fn line_is_balanced(grid: &Grid, line: &Line, group_size: usize) -> bool {
    let mut mask = 0u8;
    for &c in &line.cells {
        mask |= 1 << ((grid.number_at(c) as usize - 1) / group_size);
    }
    mask == 0b1111
}
