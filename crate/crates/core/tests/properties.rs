//! Property tests pitting the lattice against brute-force oracles.

use proptest::prelude::*;

use ndkt_core::lattice::{
    build_move_table, cell_color, enumerate_lines, enumerate_space_diagonals, knight_neighbors,
    Shape,
};
use ndkt_core::{
    closed_tour_feasible, find_tour, grid_from_tour, validate, SearchConfig, SearchStatus,
};

/// Brute-force oracle: neighbors of `cell` are exactly the cells whose
/// absolute coordinate differences form the multiset {0, …, 0, 1, 2}.
fn oracle_neighbors(shape: &Shape, cell: &[usize]) -> Vec<usize> {
    if shape.dimension() < 2 {
        return Vec::new();
    }
    (0..shape.cell_count())
        .filter(|&flat| {
            let other = shape.coords_of(flat);
            let mut deltas: Vec<usize> = other
                .iter()
                .zip(cell)
                .map(|(a, b)| a.abs_diff(*b))
                .collect();
            deltas.sort_unstable();
            let d = deltas.len();
            deltas[..d - 2].iter().all(|&x| x == 0) && deltas[d - 2] == 1 && deltas[d - 1] == 2
        })
        .collect()
}

fn small_shapes() -> impl Strategy<Value = Shape> {
    prop::collection::vec(1usize..=6, 1..=5)
        .prop_filter("cell budget", |dims| {
            dims.iter().product::<usize>() <= 500
        })
        .prop_map(|dims| Shape::new(dims).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn neighbors_match_delta_multiset_oracle(shape in small_shapes()) {
        for cell in shape.cells() {
            let fast: Vec<usize> = knight_neighbors(&shape, &cell)
                .unwrap()
                .iter()
                .map(|c| shape.flat_index(c.coords()).unwrap())
                .collect();
            prop_assert_eq!(fast, oracle_neighbors(&shape, cell.coords()));
        }
    }

    #[test]
    fn move_tables_are_symmetric_and_bipartite(shape in small_shapes()) {
        let table = build_move_table(&shape).unwrap();
        for i in 0..shape.cell_count() {
            let color = cell_color(&shape.cell_of(i));
            for &j in table.neighbors(i) {
                prop_assert!(table.neighbors(j as usize).contains(&(i as u32)));
                prop_assert_ne!(color, cell_color(&shape.cell_of(j as usize)));
            }
        }
    }

    #[test]
    fn lines_partition_each_axis(shape in small_shapes()) {
        let lines = enumerate_lines(&shape);
        let total: usize = lines.iter().map(|l| l.cells.len()).sum();
        prop_assert_eq!(total, shape.dimension() * shape.cell_count());
        let mut hits = vec![0usize; shape.cell_count()];
        for line in &lines {
            for &c in &line.cells {
                hits[c] += 1;
            }
        }
        prop_assert!(hits.iter().all(|&h| h == shape.dimension()));
    }

    #[test]
    fn diagonal_count_is_two_to_the_d_minus_one(
        order in 2usize..=5,
        dimension in 2usize..=4,
    ) {
        let shape = Shape::new(vec![order; dimension]).unwrap();
        let diagonals = enumerate_space_diagonals(&shape).unwrap();
        prop_assert_eq!(diagonals.len(), 1 << (dimension - 1));
        for diag in &diagonals {
            prop_assert_eq!(diag.len(), order);
        }
    }

    #[test]
    fn feasibility_is_permutation_invariant(
        dims in prop::collection::vec(1usize..=5, 2..=5),
        swap_a in 0usize..5,
        swap_b in 0usize..5,
    ) {
        let mut permuted = dims.clone();
        let a = swap_a % dims.len();
        let b = swap_b % dims.len();
        permuted.swap(a, b);
        let lhs = closed_tour_feasible(&Shape::new(dims).unwrap());
        let rhs = closed_tour_feasible(&Shape::new(permuted).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn machine_generated_tours_validate(seed in 1u64..200) {
        // any tour the solver emits must survive its own validator
        let shape = Shape::parse("3x4x2").unwrap();
        let mut config = SearchConfig::closed();
        config.seed = seed;
        let outcome = find_tour(&shape, &config).unwrap();
        prop_assert_eq!(outcome.status, SearchStatus::Found);
        let report = validate(&grid_from_tour(outcome.tour.as_ref().unwrap()));
        prop_assert!(report.valid);
    }
}
