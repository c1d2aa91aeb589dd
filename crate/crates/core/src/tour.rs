//! Tour representation and validation, plus conversion between the
//! visiting-sequence view and the numbered-grid view printed in figures.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{cell_color, knight_adjacent, Cell, Shape, Symmetry};

/// A visiting order over every cell of a board.
///
/// Construction enforces that the sequence is a permutation of the cells;
/// knight-adjacency of consecutive cells is checked by [`validate`], so a
/// structurally sound but geometrically broken tour can still be built and
/// then reported on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    shape: Shape,
    sequence: Vec<u32>,
}

impl Tour {
    pub fn new(shape: Shape, sequence: Vec<u32>) -> Result<Self> {
        let n = shape.cell_count();
        if sequence.len() != n {
            return Err(Error::InvalidInput(format!(
                "sequence length {} does not cover the {} cells of {shape}",
                sequence.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &flat in &sequence {
            let flat = flat as usize;
            if flat >= n {
                return Err(Error::InvalidInput(format!(
                    "flat index {flat} out of range for {shape}"
                )));
            }
            if seen[flat] {
                return Err(Error::InvalidInput(format!(
                    "cell {flat} visited twice"
                )));
            }
            seen[flat] = true;
        }
        Ok(Tour { shape, sequence })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Flat cell indices in visiting order.
    pub fn sequence(&self) -> &[u32] {
        &self.sequence
    }

    pub fn report(&self) -> TourReport {
        validate(&grid_from_tour(self))
    }

    /// Whether the first and last visited cells share a parity color.
    pub fn endpoints_same_color(&self) -> bool {
        let first = self.shape.cell_of(self.sequence[0] as usize);
        let last = self.shape.cell_of(self.sequence[self.sequence.len() - 1] as usize);
        cell_color(&first) == cell_color(&last)
    }

    /// Equality key: the lexicographically least sequence over all board
    /// symmetries of the forward and reversed tour. Two tours are the same
    /// up to relabeling and direction iff their keys match.
    pub fn canonical_key(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        let reversed: Vec<u32> = self.sequence.iter().rev().copied().collect();
        for sym in self.shape.symmetries() {
            for seq in [&self.sequence, &reversed] {
                let image: Vec<u32> = seq
                    .iter()
                    .map(|&flat| {
                        let coords = self.shape.coords_of(flat as usize);
                        self.shape
                            .flat_index(&sym.apply(&self.shape, &coords))
                            .expect("symmetry image stays in bounds") as u32
                    })
                    .collect();
                if best.as_ref().is_none_or(|b| image < *b) {
                    best = Some(image);
                }
            }
        }
        best.expect("at least the identity symmetry exists")
    }

    pub fn equivalent(&self, other: &Tour) -> bool {
        self.shape == other.shape && self.canonical_key() == other.canonical_key()
    }
}

/// The numbered-grid view: the visit step (1..=N) stored at each cell, in
/// flat-index order. This is the figure convention and the file format's
/// payload.
///
/// Only the array size is enforced here; duplicated, missing, or
/// out-of-range numbers are diagnosed by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    shape: Shape,
    numbers: Vec<u32>,
}

impl Grid {
    pub fn new(shape: Shape, numbers: Vec<u32>) -> Result<Self> {
        if numbers.len() != shape.cell_count() {
            return Err(Error::InvalidInput(format!(
                "{} values do not fill the {} cells of {shape}",
                numbers.len(),
                shape.cell_count()
            )));
        }
        Ok(Grid { shape, numbers })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn numbers(&self) -> &[u32] {
        &self.numbers
    }

    pub fn number_at(&self, flat: usize) -> u32 {
        self.numbers[flat]
    }

    /// Flat index of the cell holding `number`, if present.
    pub fn position_of(&self, number: u32) -> Option<usize> {
        self.numbers.iter().position(|&v| v == number)
    }

    /// Whether the cells numbered 1 and N share a parity color. For odd
    /// cell counts this is always true.
    pub fn endpoints_same_color(&self) -> Result<bool> {
        let n = self.shape.cell_count() as u32;
        let first = self.position_of(1).ok_or_else(|| {
            Error::InvalidInput("no cell is numbered 1".into())
        })?;
        let last = self.position_of(n).ok_or_else(|| {
            Error::InvalidInput(format!("no cell is numbered {n}"))
        })?;
        Ok(cell_color(&self.shape.cell_of(first)) == cell_color(&self.shape.cell_of(last)))
    }

    /// The grid with cells relabeled by a board symmetry.
    pub fn relabeled(&self, sym: &Symmetry) -> Grid {
        let mut numbers = vec![0u32; self.numbers.len()];
        for flat in 0..self.numbers.len() {
            let coords = self.shape.coords_of(flat);
            let image = self
                .shape
                .flat_index(&sym.apply(&self.shape, &coords))
                .expect("symmetry image stays in bounds");
            numbers[image] = self.numbers[flat];
        }
        Grid {
            shape: self.shape.clone(),
            numbers,
        }
    }
}

/// Whether a valid tour returns to its start.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    Closed,
    Open,
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Closure::Closed => write!(f, "closed"),
            Closure::Open => write!(f, "open"),
        }
    }
}

/// The first defect found in a numbered grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Cells numbered `step` and `step + 1` are not a knight move apart.
    NotAdjacent { step: u32, from: Cell, to: Cell },
    DuplicateNumber { value: u32, first: Cell, second: Cell },
    MissingNumber { value: u32 },
    OutOfRange { value: u32, at: Cell },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAdjacent { step, from, to } => write!(
                f,
                "step {step}: cells {from} and {to} (numbers {step} and {}) are not knight-adjacent",
                step + 1
            ),
            Violation::DuplicateNumber {
                value,
                first,
                second,
            } => write!(f, "number {value} appears at both {first} and {second}"),
            Violation::MissingNumber { value } => write!(f, "number {value} never appears"),
            Violation::OutOfRange { value, at } => {
                write!(f, "value {value} at {at} is outside the numbering range")
            }
        }
    }
}

/// Outcome of validating a numbered grid as a knight's tour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TourReport {
    pub valid: bool,
    pub closure: Closure,
    pub first_violation: Option<Violation>,
}

impl TourReport {
    pub fn is_closed(&self) -> bool {
        self.valid && self.closure == Closure::Closed
    }

    /// Stable machine-readable rendering.
    pub fn to_kv(&self) -> String {
        match &self.first_violation {
            None => format!("valid=true closure={}", self.closure),
            Some(v) => format!("valid=false closure={} violation=\"{v}\"", self.closure),
        }
    }
}

/// Checks that a grid's numbering is a bijection onto 1..=N and that every
/// consecutive pair of numbers sits a knight move apart. The smallest
/// failing step (or the first numbering defect in flat order) is reported.
pub fn validate(grid: &Grid) -> TourReport {
    let shape = grid.shape();
    let n = shape.cell_count();
    let mut position: Vec<Option<usize>> = vec![None; n + 1];
    let mut violation: Option<Violation> = None;
    for (flat, &value) in grid.numbers().iter().enumerate() {
        if value == 0 || value as usize > n {
            violation = Some(Violation::OutOfRange {
                value,
                at: shape.cell_of(flat),
            });
            break;
        }
        match position[value as usize] {
            Some(first) => {
                violation = Some(Violation::DuplicateNumber {
                    value,
                    first: shape.cell_of(first),
                    second: shape.cell_of(flat),
                });
                break;
            }
            None => position[value as usize] = Some(flat),
        }
    }
    if violation.is_none() {
        if let Some(missing) = (1..=n).find(|&v| position[v].is_none()) {
            violation = Some(Violation::MissingNumber {
                value: missing as u32,
            });
        }
    }
    if violation.is_none() {
        for step in 1..n {
            let from = position[step].expect("bijection checked");
            let to = position[step + 1].expect("bijection checked");
            if !knight_adjacent(&shape.coords_of(from), &shape.coords_of(to)) {
                violation = Some(Violation::NotAdjacent {
                    step: step as u32,
                    from: shape.cell_of(from),
                    to: shape.cell_of(to),
                });
                break;
            }
        }
    }
    let valid = violation.is_none();
    let closure = if valid && n >= 2 {
        let first = position[1].expect("bijection checked");
        let last = position[n].expect("bijection checked");
        if knight_adjacent(&shape.coords_of(first), &shape.coords_of(last)) {
            Closure::Closed
        } else {
            Closure::Open
        }
    } else {
        Closure::Open
    };
    TourReport {
        valid,
        closure,
        first_violation: violation,
    }
}

/// Numbers each cell with its visit step.
pub fn grid_from_tour(tour: &Tour) -> Grid {
    let mut numbers = vec![0u32; tour.shape().cell_count()];
    for (step, &flat) in tour.sequence().iter().enumerate() {
        numbers[flat as usize] = step as u32 + 1;
    }
    Grid {
        shape: tour.shape().clone(),
        numbers,
    }
}

/// Recovers the visiting sequence from a numbered grid. The numbering must
/// be a bijection onto 1..=N.
pub fn tour_from_grid(grid: &Grid) -> Result<Tour> {
    let n = grid.shape().cell_count();
    let mut sequence = vec![u32::MAX; n];
    for (flat, &value) in grid.numbers().iter().enumerate() {
        if value == 0 || value as usize > n {
            return Err(Error::InvalidInput(format!(
                "value {value} outside 1..={n}"
            )));
        }
        let slot = &mut sequence[value as usize - 1];
        if *slot != u32::MAX {
            return Err(Error::InvalidInput(format!(
                "number {value} appears more than once"
            )));
        }
        *slot = flat as u32;
    }
    Tour::new(grid.shape().clone(), sequence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Color;

    // An open 3-row by 4-column tour, stored with the column coordinate
    // varying fastest (shape 4x3):
    //   1  4  7 10
    //  12  9  2  5
    //   3  6 11  8
    const PLANE_TOUR: [u32; 12] = [1, 4, 7, 10, 12, 9, 2, 5, 3, 6, 11, 8];

    fn plane_grid() -> Grid {
        Grid::new(Shape::parse("4x3").unwrap(), PLANE_TOUR.to_vec()).unwrap()
    }

    #[test]
    fn hand_checked_plane_tour_is_valid_and_open() {
        let report = validate(&plane_grid());
        assert!(report.valid, "{:?}", report.first_violation);
        assert_eq!(report.closure, Closure::Open);
        assert_eq!(report.to_kv(), "valid=true closure=open");
    }

    #[test]
    fn single_cell_grid_is_a_valid_open_tour() {
        let grid = Grid::new(Shape::parse("1").unwrap(), vec![1]).unwrap();
        let report = validate(&grid);
        assert!(report.valid);
        assert_eq!(report.closure, Closure::Open);
    }

    #[test]
    fn degenerate_two_cell_tour_fails_adjacency() {
        let shape = Shape::parse("1x2").unwrap();
        let tour = Tour::new(shape, vec![0, 1]).unwrap();
        let report = validate(&grid_from_tour(&tour));
        assert!(!report.valid);
        assert!(matches!(
            report.first_violation,
            Some(Violation::NotAdjacent { step: 1, .. })
        ));
    }

    #[test]
    fn duplicate_number_names_both_cells() {
        let mut numbers = PLANE_TOUR.to_vec();
        numbers[5] = 1; // collides with the 1 at flat index 0
        let grid = Grid::new(Shape::parse("4x3").unwrap(), numbers).unwrap();
        let report = validate(&grid);
        assert!(!report.valid);
        match report.first_violation {
            Some(Violation::DuplicateNumber {
                value,
                first,
                second,
            }) => {
                assert_eq!(value, 1);
                assert_eq!(first.coords(), &[0, 0]);
                assert_eq!(second.coords(), &[1, 1]);
            }
            other => panic!("expected duplicate, got {other:?}"),
        }
    }

    #[test]
    fn missing_number_is_reported() {
        let shape = Shape::parse("2x2").unwrap();
        let grid = Grid::new(shape, vec![1, 2, 3, 3]).unwrap();
        let report = validate(&grid);
        assert!(matches!(
            report.first_violation,
            Some(Violation::DuplicateNumber { value: 3, .. })
        ));
        let shape = Shape::parse("2x2").unwrap();
        let grid = Grid::new(shape, vec![1, 2, 4, 4]).unwrap();
        assert!(matches!(
            validate(&grid).first_violation,
            Some(Violation::DuplicateNumber { value: 4, .. })
        ));
    }

    #[test]
    fn grid_and_tour_views_are_inverse() {
        let grid = plane_grid();
        let tour = tour_from_grid(&grid).unwrap();
        assert_eq!(grid_from_tour(&tour), grid);
        for (step, &flat) in tour.sequence().iter().enumerate() {
            assert_eq!(grid.number_at(flat as usize), step as u32 + 1);
        }
    }

    #[test]
    fn tour_from_grid_rejects_non_bijections() {
        let shape = Shape::parse("2x2").unwrap();
        let grid = Grid::new(shape, vec![1, 1, 2, 3]).unwrap();
        assert!(tour_from_grid(&grid).is_err());
    }

    #[test]
    fn color_alternates_along_a_valid_tour() {
        let tour = tour_from_grid(&plane_grid()).unwrap();
        let shape = tour.shape().clone();
        let colors: Vec<Color> = tour
            .sequence()
            .iter()
            .map(|&f| cell_color(&shape.cell_of(f as usize)))
            .collect();
        for pair in colors.windows(2) {
            assert_ne!(pair[0], pair[1]);
        }
    }

    #[test]
    fn endpoint_colors_follow_cell_count_parity() {
        // 12 cells: N-1 is odd, endpoints must differ in color.
        let tour = tour_from_grid(&plane_grid()).unwrap();
        assert!(!tour.endpoints_same_color());
        // Any odd-cell grid has same-colored endpoints; 1x1 is the
        // smallest case.
        let grid = Grid::new(Shape::parse("1").unwrap(), vec![1]).unwrap();
        assert!(grid.endpoints_same_color().unwrap());
    }

    #[test]
    fn canonical_key_identifies_mirrored_tours() {
        let tour = tour_from_grid(&plane_grid()).unwrap();
        let syms = tour.shape().symmetries();
        for sym in &syms {
            let relabeled = tour_from_grid(&grid_from_tour(&tour).relabeled(sym)).unwrap();
            assert!(tour.equivalent(&relabeled));
        }
        let reversed = Tour::new(
            tour.shape().clone(),
            tour.sequence().iter().rev().copied().collect(),
        )
        .unwrap();
        assert!(tour.equivalent(&reversed));
    }
}
