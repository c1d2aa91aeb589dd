//! Board geometry for n-dimensional rectangular lattices: coordinates,
//! parity coloring, generalized knight moves, axis lines, space diagonals,
//! and per-plane degree statistics.
//!
//! A knight move changes exactly two coordinates, one by ±1 and the other
//! by ±2. On a d-dimensional board the moves through a cell split across
//! the d(d−1)/2 coordinate planes, giving between 0 and 4d(d−1) moves.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard ceiling on cells for precomputed tables (move tables, profiles).
pub const MAX_TABLE_CELLS: usize = 1 << 28;

/// Extents of an n-dimensional rectangular board, one per axis.
///
/// Coordinate 0 varies fastest in flat-index order, so the flat order of a
/// board's cells matches the printed order of the tour file format: values
/// across a row, rows down a block, higher axes as successive blocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    dims: Vec<usize>,
    cell_count: usize,
}

impl Shape {
    /// Builds a shape from per-axis extents. Every extent must be ≥ 1.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("at least one extent required".into()));
        }
        let mut cell_count: usize = 1;
        for &e in &dims {
            if e == 0 {
                return Err(Error::InvalidShape(format!(
                    "extents must be positive, got {e}"
                )));
            }
            cell_count = cell_count.checked_mul(e).ok_or_else(|| {
                Error::InvalidShape("cell count does not fit in memory".into())
            })?;
        }
        Ok(Shape { dims, cell_count })
    }

    /// Parses the `"3x4x2x2"` text syntax. Rejects zero, negative, or
    /// malformed extents.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dims = Vec::new();
        for part in text.split('x') {
            let extent: usize = part.trim().parse().map_err(|_| {
                Error::InvalidShape(format!("bad extent {part:?} in {text:?}"))
            })?;
            dims.push(extent);
        }
        Shape::new(dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    /// True when all extents are equal (square, cube, hypercube).
    pub fn is_cubic(&self) -> bool {
        self.dims.iter().all(|&e| e == self.dims[0])
    }

    /// The common extent of a cubic shape.
    pub fn order(&self) -> Option<usize> {
        self.is_cubic().then(|| self.dims[0])
    }

    /// Flat index of a coordinate tuple (coordinate 0 fastest).
    pub fn flat_index(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.dims.len() {
            return Err(Error::OutOfBounds(format!(
                "coordinate tuple {coords:?} has wrong dimension for shape {self}"
            )));
        }
        let mut flat = 0usize;
        for (c, e) in coords.iter().zip(&self.dims).rev() {
            if c >= e {
                return Err(Error::OutOfBounds(format!(
                    "coordinates {coords:?} outside shape {self}"
                )));
            }
            flat = flat * e + c;
        }
        Ok(flat)
    }

    /// Coordinates of a flat index. Panics if out of range.
    pub fn coords_of(&self, flat: usize) -> Vec<usize> {
        assert!(flat < self.cell_count, "flat index {flat} out of range");
        let mut rest = flat;
        self.dims
            .iter()
            .map(|&e| {
                let c = rest % e;
                rest /= e;
                c
            })
            .collect()
    }

    pub fn cell_of(&self, flat: usize) -> Cell {
        Cell::new(self.coords_of(flat))
    }

    /// All cells in flat-index order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_count).map(|i| self.cell_of(i))
    }

    /// Extents sorted ascending; feasibility rules are stated this way.
    pub fn sorted_dims(&self) -> Vec<usize> {
        let mut d = self.dims.clone();
        d.sort_unstable();
        d
    }

    /// The hyperoctahedral symmetries of this shape: axis permutations that
    /// preserve extents, combined with per-axis reflections. A cube of
    /// dimension d has d!·2^d of them.
    pub fn symmetries(&self) -> Vec<Symmetry> {
        let d = self.dims.len();
        let mut perms = Vec::new();
        let mut current: Vec<usize> = Vec::with_capacity(d);
        let mut used = vec![false; d];
        gather_perms(&self.dims, &mut current, &mut used, &mut perms);
        let mut out = Vec::with_capacity(perms.len() << d);
        for perm in &perms {
            for mask in 0..(1usize << d) {
                out.push(Symmetry {
                    perm: perm.clone(),
                    flip: (0..d).map(|i| mask >> i & 1 == 1).collect(),
                });
            }
        }
        out
    }
}

fn gather_perms(
    dims: &[usize],
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let d = dims.len();
    if current.len() == d {
        out.push(current.clone());
        return;
    }
    let axis = current.len();
    for candidate in 0..d {
        if !used[candidate] && dims[candidate] == dims[axis] {
            used[candidate] = true;
            current.push(candidate);
            gather_perms(dims, current, used, out);
            current.pop();
            used[candidate] = false;
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Shape({self})")
    }
}

/// One axis relabeling: output axis `i` reads input axis `perm[i]`,
/// reflected when `flip[i]` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub perm: Vec<usize>,
    pub flip: Vec<bool>,
}

impl Symmetry {
    /// Image of `coords` under this symmetry on `shape`.
    pub fn apply(&self, shape: &Shape, coords: &[usize]) -> Vec<usize> {
        (0..coords.len())
            .map(|i| {
                let c = coords[self.perm[i]];
                if self.flip[i] {
                    shape.dims()[i] - 1 - c
                } else {
                    c
                }
            })
            .collect()
    }
}

/// A board cell as a coordinate tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    coords: Vec<usize>,
}

impl Cell {
    pub fn new(coords: Vec<usize>) -> Self {
        Cell { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cell{self}")
    }
}

impl From<Vec<usize>> for Cell {
    fn from(coords: Vec<usize>) -> Self {
        Cell::new(coords)
    }
}

/// Parity color of a cell; every knight move flips it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Color {
    Light,
    Dark,
}

/// Two-coloring by coordinate-sum parity: even sums are light.
pub fn cell_color(cell: &Cell) -> Color {
    if cell.coords().iter().sum::<usize>() % 2 == 0 {
        Color::Light
    } else {
        Color::Dark
    }
}

/// Parity color from a flat index.
pub fn flat_color(shape: &Shape, flat: usize) -> Color {
    cell_color(&shape.cell_of(flat))
}

const PLANE_DELTAS: [(usize, usize); 2] = [(1, 2), (2, 1)];

fn for_each_neighbor(shape: &Shape, coords: &[usize], mut visit: impl FnMut(usize)) {
    let d = shape.dimension();
    let dims = shape.dims();
    let mut scratch = coords.to_vec();
    for a in 0..d {
        for b in (a + 1)..d {
            for &(da, db) in &PLANE_DELTAS {
                for sa in [false, true] {
                    let Some(ca) = offset(coords[a], da, sa, dims[a]) else {
                        continue;
                    };
                    for sb in [false, true] {
                        let Some(cb) = offset(coords[b], db, sb, dims[b]) else {
                            continue;
                        };
                        scratch[a] = ca;
                        scratch[b] = cb;
                        let flat = shape
                            .flat_index(&scratch)
                            .expect("neighbor coordinates stay in bounds");
                        visit(flat);
                        scratch[a] = coords[a];
                        scratch[b] = coords[b];
                    }
                }
            }
        }
    }
}

fn offset(c: usize, delta: usize, negative: bool, extent: usize) -> Option<usize> {
    if negative {
        c.checked_sub(delta)
    } else {
        let n = c + delta;
        (n < extent).then_some(n)
    }
}

/// All cells a knight reaches from `cell`, sorted by flat index.
///
/// The count lies in `[0, 4d(d−1)]` for a d-dimensional board.
pub fn knight_neighbors(shape: &Shape, cell: &Cell) -> Result<Vec<Cell>> {
    shape.flat_index(cell.coords())?;
    let mut flats = Vec::new();
    for_each_neighbor(shape, cell.coords(), |f| flats.push(f));
    flats.sort_unstable();
    Ok(flats.into_iter().map(|f| shape.cell_of(f)).collect())
}

/// Precomputed knight adjacency for every cell of a board, in compressed
/// sparse row layout. Neighbor lists are sorted by flat index.
pub struct MoveTable {
    shape: Shape,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

/// Builds the full adjacency table. Boards above [`MAX_TABLE_CELLS`] are
/// rejected rather than thrashing memory.
pub fn build_move_table(shape: &Shape) -> Result<MoveTable> {
    let n = shape.cell_count();
    if n > MAX_TABLE_CELLS {
        return Err(Error::CapacityExceeded {
            cells: n,
            limit: MAX_TABLE_CELLS,
        });
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut neighbors = Vec::new();
    offsets.push(0);
    for flat in 0..n {
        let coords = shape.coords_of(flat);
        let start = neighbors.len();
        for_each_neighbor(shape, &coords, |f| neighbors.push(f as u32));
        neighbors[start..].sort_unstable();
        offsets.push(neighbors.len());
    }
    Ok(MoveTable {
        shape: shape.clone(),
        offsets,
        neighbors,
    })
}

impl MoveTable {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn neighbors(&self, flat: usize) -> &[u32] {
        &self.neighbors[self.offsets[flat]..self.offsets[flat + 1]]
    }

    pub fn degree(&self, flat: usize) -> usize {
        self.offsets[flat + 1] - self.offsets[flat]
    }

    /// Total directed edge count (twice the undirected count).
    pub fn directed_edge_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.shape.cell_count())
            .map(|i| self.degree(i))
            .min()
            .unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.shape.cell_count())
            .map(|i| self.degree(i))
            .max()
            .unwrap_or(0)
    }
}

/// Knight-adjacency of two coordinate tuples: exactly two coordinates
/// differ, by absolute amounts 1 and 2.
pub fn knight_adjacent(a: &[usize], b: &[usize]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut small = 0usize;
    let mut large = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        match x.abs_diff(y) {
            0 => {}
            1 => small += 1,
            2 => large += 1,
            _ => return false,
        }
    }
    small == 1 && large == 1
}

/// Moves available in one coordinate plane from a 2D position.
fn plane_move_count(extent_a: usize, extent_b: usize, a: usize, b: usize) -> u32 {
    let mut count = 0;
    for &(da, db) in &PLANE_DELTAS {
        for sa in [false, true] {
            if offset(a, da, sa, extent_a).is_none() {
                continue;
            }
            for sb in [false, true] {
                if offset(b, db, sb, extent_b).is_some() {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Per-cell knight-move counts broken down by coordinate plane.
///
/// Planes are indexed by axis pairs `(i, j)` with `i < j` in lexicographic
/// order. `distinct` holds each profile that occurs, with its cell count.
pub struct DegreeProfile {
    shape: Shape,
    planes: Vec<(usize, usize)>,
    min_total: u32,
    max_total: u32,
    distinct: Vec<(Vec<u32>, u32, usize)>,
}

/// Computes the degree profile of a board with dimension ≥ 2.
pub fn degree_profile(shape: &Shape) -> Result<DegreeProfile> {
    if shape.dimension() < 2 {
        return Err(Error::Domain(
            "degree profiles need dimension at least 2".into(),
        ));
    }
    if shape.cell_count() > MAX_TABLE_CELLS {
        return Err(Error::CapacityExceeded {
            cells: shape.cell_count(),
            limit: MAX_TABLE_CELLS,
        });
    }
    let d = shape.dimension();
    let planes: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    let mut by_profile: BTreeMap<(Vec<u32>, u32), usize> = BTreeMap::new();
    let mut min_total = u32::MAX;
    let mut max_total = 0;
    for flat in 0..shape.cell_count() {
        let coords = shape.coords_of(flat);
        let counts = profile_counts(shape, &planes, &coords);
        let total: u32 = counts.iter().sum();
        min_total = min_total.min(total);
        max_total = max_total.max(total);
        *by_profile.entry((counts, total)).or_insert(0) += 1;
    }
    Ok(DegreeProfile {
        shape: shape.clone(),
        planes,
        min_total,
        max_total,
        distinct: by_profile
            .into_iter()
            .map(|((counts, total), cells)| (counts, total, cells))
            .collect(),
    })
}

fn profile_counts(shape: &Shape, planes: &[(usize, usize)], coords: &[usize]) -> Vec<u32> {
    planes
        .iter()
        .map(|&(i, j)| {
            plane_move_count(shape.dims()[i], shape.dims()[j], coords[i], coords[j])
        })
        .collect()
}

impl DegreeProfile {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Axis pairs labelling the per-plane counts, lexicographic.
    pub fn planes(&self) -> &[(usize, usize)] {
        &self.planes
    }

    pub fn min_total(&self) -> u32 {
        self.min_total
    }

    pub fn max_total(&self) -> u32 {
        self.max_total
    }

    /// Per-plane counts and total for one cell.
    pub fn profile_of(&self, cell: &Cell) -> Result<(Vec<u32>, u32)> {
        self.shape.flat_index(cell.coords())?;
        let counts = profile_counts(&self.shape, &self.planes, cell.coords());
        let total = counts.iter().sum();
        Ok((counts, total))
    }

    /// Every distinct (per-plane counts, total) profile with the number of
    /// cells sharing it, sorted by profile.
    pub fn distinct_profiles(&self) -> &[(Vec<u32>, u32, usize)] {
        &self.distinct
    }

    /// Distinct profiles after identifying axis relabelings: each profile is
    /// replaced by its lexicographically least image under the shape's axis
    /// permutations.
    pub fn canonical_classes(&self) -> Vec<(Vec<u32>, u32, usize)> {
        let d = self.shape.dimension();
        let mut perms = Vec::new();
        let mut current = Vec::with_capacity(d);
        let mut used = vec![false; d];
        gather_perms(self.shape.dims(), &mut current, &mut used, &mut perms);
        let plane_index: BTreeMap<(usize, usize), usize> = self
            .planes
            .iter()
            .enumerate()
            .map(|(n, &p)| (p, n))
            .collect();
        let mut classes: BTreeMap<(Vec<u32>, u32), usize> = BTreeMap::new();
        for (counts, total, cells) in &self.distinct {
            let mut best = counts.clone();
            for perm in &perms {
                let mut image = vec![0u32; counts.len()];
                for (n, &(i, j)) in self.planes.iter().enumerate() {
                    let (a, b) = if perm[i] < perm[j] {
                        (perm[i], perm[j])
                    } else {
                        (perm[j], perm[i])
                    };
                    image[plane_index[&(a, b)]] = counts[n];
                }
                if image < best {
                    best = image;
                }
            }
            *classes.entry((best, *total)).or_insert(0) += cells;
        }
        classes
            .into_iter()
            .map(|((counts, total), cells)| (counts, total, cells))
            .collect()
    }
}

/// A maximal axis-aligned run of cells, in coordinate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub axis: usize,
    pub cells: Vec<usize>,
}

/// All axis lines of a board: for each axis, one line per assignment of the
/// remaining coordinates, iterated in flat order. Every cell appears in
/// exactly d lines.
pub fn enumerate_lines(shape: &Shape) -> Vec<Line> {
    let d = shape.dimension();
    let n = shape.cell_count();
    let mut out = Vec::new();
    for axis in 0..d {
        let extent = shape.dims()[axis];
        let stride = shape.dims()[..axis].iter().product::<usize>();
        let mut seen = vec![false; n];
        for base in 0..n {
            if seen[base] {
                continue;
            }
            let coords = shape.coords_of(base);
            if coords[axis] != 0 {
                continue;
            }
            let cells: Vec<usize> = (0..extent).map(|v| base + v * stride).collect();
            for &c in &cells {
                seen[c] = true;
            }
            out.push(Line { axis, cells });
        }
    }
    out
}

/// The 2^(d−1) corner-to-corner diagonals of a cubic board, each stepping
/// ±1 in every coordinate simultaneously. Axis 0 always steps +1, which
/// dedups reversals.
pub fn enumerate_space_diagonals(shape: &Shape) -> Result<Vec<Vec<usize>>> {
    let Some(m) = shape.order() else {
        return Err(Error::Domain(format!(
            "space diagonals are defined for cubic boards only, got {shape}"
        )));
    };
    let d = shape.dimension();
    let mut out = Vec::with_capacity(1 << (d - 1));
    for mask in 0..(1usize << (d - 1)) {
        let negative: Vec<bool> = (0..d)
            .map(|axis| axis > 0 && mask >> (axis - 1) & 1 == 1)
            .collect();
        let cells = (0..m)
            .map(|t| {
                let coords: Vec<usize> = negative
                    .iter()
                    .map(|&neg| if neg { m - 1 - t } else { t })
                    .collect();
                shape.flat_index(&coords).expect("diagonal stays in bounds")
            })
            .collect();
        out.push(cells);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(dims: &[usize]) -> Shape {
        Shape::new(dims.to_vec()).unwrap()
    }

    #[test]
    fn parse_accepts_standard_syntax() {
        assert_eq!(Shape::parse("3x4x2x2").unwrap().dims(), &[3, 4, 2, 2]);
        assert_eq!(Shape::parse("8").unwrap().dims(), &[8]);
        assert!(Shape::parse("3x0").is_err());
        assert!(Shape::parse("-3x4").is_err());
        assert!(Shape::parse("").is_err());
        assert!(Shape::parse("3xx4").is_err());
    }

    #[test]
    fn flat_index_round_trips() {
        let s = shape(&[3, 4, 2]);
        for flat in 0..s.cell_count() {
            let coords = s.coords_of(flat);
            assert_eq!(s.flat_index(&coords).unwrap(), flat);
        }
        // coordinate 0 varies fastest
        assert_eq!(s.flat_index(&[1, 0, 0]).unwrap(), 1);
        assert_eq!(s.flat_index(&[0, 1, 0]).unwrap(), 3);
        assert_eq!(s.flat_index(&[0, 0, 1]).unwrap(), 12);
    }

    #[test]
    fn corner_of_8x8_has_two_moves() {
        let s = shape(&[8, 8]);
        let n = knight_neighbors(&s, &Cell::new(vec![0, 0])).unwrap();
        let coords: Vec<&[usize]> = n.iter().map(|c| c.coords()).collect();
        assert_eq!(coords, vec![&[2, 1][..], &[1, 2][..]]);
    }

    #[test]
    fn center_of_3x3_is_stuck() {
        let s = shape(&[3, 3]);
        assert!(knight_neighbors(&s, &Cell::new(vec![1, 1]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn two_cube_is_frozen() {
        let s = shape(&[2, 2, 2]);
        for cell in s.cells() {
            assert!(knight_neighbors(&s, &cell).unwrap().is_empty());
        }
    }

    #[test]
    fn inner_cell_of_4_cube_has_twelve_moves() {
        let s = shape(&[4, 4, 4]);
        let n = knight_neighbors(&s, &Cell::new(vec![1, 1, 1])).unwrap();
        assert_eq!(n.len(), 12);
    }

    #[test]
    fn out_of_bounds_cell_is_an_input_error() {
        let s = shape(&[4, 4]);
        assert!(knight_neighbors(&s, &Cell::new(vec![4, 0])).is_err());
        assert!(knight_neighbors(&s, &Cell::new(vec![0])).is_err());
    }

    #[test]
    fn single_cell_table_is_empty() {
        let t = build_move_table(&shape(&[1])).unwrap();
        assert_eq!(t.shape().cell_count(), 1);
        assert_eq!(t.degree(0), 0);
    }

    #[test]
    fn table_matches_per_cell_neighbors_on_4_cube() {
        let s = shape(&[4, 4, 4]);
        let t = build_move_table(&s).unwrap();
        for flat in 0..s.cell_count() {
            let direct: Vec<u32> = knight_neighbors(&s, &s.cell_of(flat))
                .unwrap()
                .iter()
                .map(|c| s.flat_index(c.coords()).unwrap() as u32)
                .collect();
            assert_eq!(t.neighbors(flat), &direct[..]);
        }
        assert_eq!(t.min_degree(), 6);
    }

    #[test]
    fn table_is_symmetric_on_3x4() {
        let s = shape(&[3, 4]);
        let t = build_move_table(&s).unwrap();
        assert_eq!(s.cell_count(), 12);
        assert_eq!(t.directed_edge_count() % 2, 0);
        for i in 0..s.cell_count() {
            for &j in t.neighbors(i) {
                assert!(t.neighbors(j as usize).contains(&(i as u32)));
            }
        }
    }

    #[test]
    fn capacity_guard_rejects_huge_boards() {
        let s = shape(&[1 << 10, 1 << 10, 1 << 10]);
        assert!(matches!(
            build_move_table(&s),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn colors_follow_coordinate_parity() {
        assert_eq!(cell_color(&Cell::new(vec![0, 0, 0, 0])), Color::Light);
        assert_eq!(cell_color(&Cell::new(vec![1, 2])), Color::Dark);
    }

    #[test]
    fn moves_flip_color() {
        let s = shape(&[4, 4, 4]);
        for cell in s.cells() {
            for n in knight_neighbors(&s, &cell).unwrap() {
                assert_ne!(cell_color(&cell), cell_color(&n));
            }
        }
    }

    #[test]
    fn degree_profile_extremes_on_plane_board() {
        let p = degree_profile(&shape(&[8, 8])).unwrap();
        assert_eq!(p.min_total(), 2);
        assert_eq!(p.max_total(), 8);
    }

    #[test]
    fn degree_profile_extremes_on_4d_cube() {
        let p = degree_profile(&shape(&[4, 4, 4, 4])).unwrap();
        assert_eq!(p.min_total(), 12);
        assert_eq!(p.max_total(), 24);
        // every cell class has per-plane counts in {2,3,4}
        for (counts, total, _) in p.distinct_profiles() {
            assert_eq!(counts.iter().sum::<u32>(), *total);
            assert!(counts.iter().all(|&c| (2..=4).contains(&c)));
        }
    }

    #[test]
    fn degree_extremes_match_closed_form() {
        for d in 2..=4usize {
            // corner cells of an order-4 board give the d(d-1) minimum; the
            // per-plane maximum is 4 there, so the total tops out at 2d(d-1)
            let p = degree_profile(&shape(&vec![4; d])).unwrap();
            assert_eq!(p.min_total() as usize, d * (d - 1));
            assert_eq!(p.max_total() as usize, 2 * d * (d - 1));
        }
        for d in 2..=3usize {
            // the 4d(d-1) ceiling needs room for all 8 moves per plane,
            // which an order-5 board is the smallest to provide
            let p = degree_profile(&shape(&vec![5; d])).unwrap();
            assert_eq!(p.min_total() as usize, d * (d - 1));
            assert_eq!(p.max_total() as usize, 4 * d * (d - 1));
        }
    }

    #[test]
    fn line_partition_covers_every_cell_d_times() {
        for dims in [vec![3, 4], vec![4, 4, 4], vec![3, 4, 2, 2]] {
            let s = shape(&dims);
            let lines = enumerate_lines(&s);
            let expected: usize = (0..s.dimension())
                .map(|a| s.cell_count() / s.dims()[a])
                .sum();
            assert_eq!(lines.len(), expected);
            let mut appearances = vec![0usize; s.cell_count()];
            for line in &lines {
                assert_eq!(line.cells.len(), s.dims()[line.axis]);
                for &c in &line.cells {
                    appearances[c] += 1;
                }
            }
            assert!(appearances.iter().all(|&a| a == s.dimension()));
        }
    }

    #[test]
    fn line_counts_match_reported_totals() {
        assert_eq!(enumerate_lines(&shape(&[4, 4, 4])).len(), 48);
        assert_eq!(enumerate_lines(&shape(&[4, 4, 4, 4])).len(), 256);
        assert_eq!(enumerate_lines(&shape(&[3, 4])).len(), 7);
    }

    #[test]
    fn diagonal_counts() {
        assert_eq!(enumerate_space_diagonals(&shape(&[4, 4, 4])).unwrap().len(), 4);
        assert_eq!(
            enumerate_space_diagonals(&shape(&[4, 4, 4, 4])).unwrap().len(),
            8
        );
        assert_eq!(enumerate_space_diagonals(&shape(&[6, 6])).unwrap().len(), 2);
        assert!(enumerate_space_diagonals(&shape(&[3, 4])).is_err());
    }

    #[test]
    fn diagonals_step_every_axis() {
        let s = shape(&[4, 4, 4]);
        for diag in enumerate_space_diagonals(&s).unwrap() {
            assert_eq!(diag.len(), 4);
            for pair in diag.windows(2) {
                let a = s.coords_of(pair[0]);
                let b = s.coords_of(pair[1]);
                assert!(a.iter().zip(&b).all(|(x, y)| x.abs_diff(*y) == 1));
            }
        }
    }

    #[test]
    fn cube_has_48_symmetries() {
        assert_eq!(shape(&[4, 4, 4]).symmetries().len(), 48);
        assert_eq!(shape(&[3, 4]).symmetries().len(), 4);
    }
}
