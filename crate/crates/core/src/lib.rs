//! Knight's tours on n-dimensional rectangular lattices: board geometry,
//! tour validation, magic-sum verification, feasibility theorems and
//! conjectures, backtracking search, and a bundled corpus of published
//! tours.
//!
//! The generalized knight changes exactly two coordinates per move, one by
//! ±1 and the other by ±2, in any of the d(d−1)/2 coordinate planes. All
//! arithmetic is exact; sums never pass through floating point.
//!
//! # Quick start
//!
//! ```
//! use ndkt_core::{find_tour, Shape, SearchConfig, SearchStatus};
//!
//! let shape = Shape::parse("3x4x2").unwrap();
//! let outcome = find_tour(&shape, &SearchConfig::closed()).unwrap();
//! assert_eq!(outcome.status, SearchStatus::Found);
//! ```

pub mod corpus;
pub mod error;
pub mod feasibility;
pub mod lattice;
pub mod magic;
pub mod search;
pub mod tour;

pub use error::{Error, ParseErrorKind, Result};
pub use feasibility::{
    closed_tour_feasible, magic_tour_feasible, verify_conjecture, Answer, ConjectureCheck,
    FeasibilityVerdict, Observation, Provenance,
};
pub use lattice::{
    build_move_table, cell_color, degree_profile, enumerate_lines, enumerate_space_diagonals,
    knight_neighbors, Cell, Color, DegreeProfile, Line, MoveTable, Shape,
};
pub use magic::{magic_constant, magic_report, quartile_report, MagicReport, QuartileReport, Ratio};
pub use search::{
    exhaustive_closed_count, find_magic_tour, find_tour, replay_magic_rules, Budget, CountOutcome,
    Heuristic, SearchConfig, SearchMode, SearchOutcome, SearchStatus,
};
pub use tour::{grid_from_tour, tour_from_grid, validate, Closure, Grid, Tour, TourReport};
