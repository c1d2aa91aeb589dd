//! Backtracking tour search: open, closed, exhaustive, and
//! magic-constrained, with Warnsdorff ordering and line-sum pruning.
//!
//! Searches walk the full tree (the heuristic only orders children, it
//! never cuts anything off), so a completed run without a budget
//! interruption is an exhaustion proof. Visited sets are flat-index
//! bitmasks; the magic solver additionally propagates per-line sum and
//! capacity constraints on every placement.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{build_move_table, enumerate_lines, MoveTable, Shape};
use crate::magic::{magic_constant, magic_report};
use crate::tour::{grid_from_tour, validate, Closure, Grid, Tour};

/// What kind of tour to look for.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Open,
    Closed,
    Magic,
}

/// Child-ordering policy at each expansion.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Heuristic {
    /// Fewest onward moves first, ties by ascending flat index (seed 0)
    /// or seeded shuffle (seed ≠ 0).
    Warnsdorff,
    /// Ascending flat index.
    Lexicographic,
}

/// Wall-clock and node ceilings; `None` means unlimited.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn seconds(s: u64) -> Self {
        Budget {
            node_limit: None,
            time_limit: Some(Duration::from_secs(s)),
        }
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            node_limit: Some(n),
            time_limit: None,
        }
    }

    fn is_unlimited(&self) -> bool {
        self.node_limit.is_none() && self.time_limit.is_none()
    }
}

/// Everything a search run needs beyond the shape.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub heuristic: Heuristic,
    pub budget: Budget,
    /// 0 is fully deterministic; anything else seeds the tie shuffle.
    pub seed: u64,
    /// Partial tour (flat indices) to extend.
    pub prefix: Option<Vec<u32>>,
    /// Magic mode only: forbid two numbers of one quartile group on a line.
    /// This is the published construction discipline, not a sound rule —
    /// it narrows the search to quartile-balanced tours.
    pub quartile_pruning: bool,
    pub exhaustive: bool,
    /// Worker threads; determinism is only promised at 1.
    pub jobs: usize,
    /// Emit a progress line to stderr at roughly this interval.
    pub progress: Option<Duration>,
}

impl SearchConfig {
    pub fn new(mode: SearchMode) -> Self {
        SearchConfig {
            mode,
            heuristic: Heuristic::Warnsdorff,
            budget: Budget::unlimited(),
            seed: 0,
            prefix: None,
            quartile_pruning: false,
            exhaustive: false,
            jobs: 1,
            progress: None,
        }
    }

    pub fn open() -> Self {
        SearchConfig::new(SearchMode::Open)
    }

    pub fn closed() -> Self {
        SearchConfig::new(SearchMode::Closed)
    }

    pub fn magic() -> Self {
        SearchConfig::new(SearchMode::Magic)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ExhaustedNoSolution,
    BudgetExceeded,
}

impl std::fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchStatus::Found => write!(f, "found"),
            SearchStatus::ExhaustedNoSolution => write!(f, "exhausted_no_solution"),
            SearchStatus::BudgetExceeded => write!(f, "budget_exceeded"),
        }
    }
}

/// Result of a tour search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub tour: Option<Tour>,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

impl SearchOutcome {
    pub fn to_kv(&self) -> String {
        format!(
            "status={} nodes={} elapsed={:.3}s",
            self.status,
            self.nodes_expanded,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Result of an exhaustive closed-tour count.
#[derive(Clone, Debug)]
pub struct CountOutcome {
    /// Closed tour sequences from the canonical start cell (flat index 0).
    /// Each undirected closed tour is counted once per direction.
    pub count: u64,
    /// False when a budget stopped the count; a partial count proves
    /// nothing about nonexistence.
    pub complete: bool,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

impl CountOutcome {
    pub fn to_kv(&self) -> String {
        format!(
            "count={} complete={} nodes={} elapsed={:.3}s",
            self.count,
            self.complete,
            self.nodes_expanded,
            self.elapsed.as_secs_f64()
        )
    }
}

// ---------------------------------------------------------------------------
// shared machinery
// ---------------------------------------------------------------------------

/// Visited bitmask plus incrementally maintained degree bookkeeping over the
/// unvisited subgraph. `isolated`/`degree_one` count unvisited cells whose
/// unvisited degree is 0/1, which drives the connectivity prunes.
struct Occupancy {
    visited: Vec<u64>,
    unvisited_degree: Vec<u32>,
    isolated: usize,
    degree_one: usize,
    remaining: usize,
}

impl Occupancy {
    fn new(table: &MoveTable) -> Self {
        let n = table.shape().cell_count();
        let unvisited_degree: Vec<u32> = (0..n).map(|i| table.degree(i) as u32).collect();
        let isolated = unvisited_degree.iter().filter(|&&d| d == 0).count();
        let degree_one = unvisited_degree.iter().filter(|&&d| d == 1).count();
        Occupancy {
            visited: vec![0u64; n.div_ceil(64)],
            unvisited_degree,
            isolated,
            degree_one,
            remaining: n,
        }
    }

    #[inline]
    fn is_visited(&self, cell: u32) -> bool {
        self.visited[cell as usize >> 6] >> (cell & 63) & 1 == 1
    }

    fn visit(&mut self, table: &MoveTable, cell: u32) {
        debug_assert!(!self.is_visited(cell));
        match self.unvisited_degree[cell as usize] {
            0 => self.isolated -= 1,
            1 => self.degree_one -= 1,
            _ => {}
        }
        self.visited[cell as usize >> 6] |= 1 << (cell & 63);
        self.remaining -= 1;
        for &u in table.neighbors(cell as usize) {
            self.unvisited_degree[u as usize] -= 1;
            if !self.is_visited(u) {
                match self.unvisited_degree[u as usize] {
                    0 => {
                        self.isolated += 1;
                        self.degree_one -= 1;
                    }
                    1 => self.degree_one += 1,
                    _ => {}
                }
            }
        }
    }

    fn unvisit(&mut self, table: &MoveTable, cell: u32) {
        for &u in table.neighbors(cell as usize) {
            self.unvisited_degree[u as usize] += 1;
            if !self.is_visited(u) {
                match self.unvisited_degree[u as usize] {
                    1 => {
                        self.isolated -= 1;
                        self.degree_one += 1;
                    }
                    2 => self.degree_one -= 1,
                    _ => {}
                }
            }
        }
        self.visited[cell as usize >> 6] &= !(1 << (cell & 63));
        self.remaining += 1;
        match self.unvisited_degree[cell as usize] {
            0 => self.isolated += 1,
            1 => self.degree_one += 1,
            _ => {}
        }
    }
}

struct Limiter<'a> {
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    cancel: Option<&'a AtomicBool>,
    exceeded: bool,
    cancelled: bool,
}

impl<'a> Limiter<'a> {
    fn new(budget: Budget, started: Instant, cancel: Option<&'a AtomicBool>) -> Self {
        Limiter {
            deadline: budget.time_limit.map(|t| started + t),
            node_limit: budget.node_limit,
            cancel,
            exceeded: false,
            cancelled: false,
        }
    }

    /// True when the search must stop. Called once per expansion.
    #[inline]
    fn should_stop(&mut self, nodes: u64) -> bool {
        if self.exceeded || self.cancelled {
            return true;
        }
        if let Some(cancel) = self.cancel {
            if cancel.load(Ordering::Relaxed) {
                self.cancelled = true;
                return true;
            }
        }
        if let Some(limit) = self.node_limit {
            if nodes >= limit {
                self.exceeded = true;
                return true;
            }
        }
        if nodes & 1023 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.exceeded = true;
                    return true;
                }
            }
        }
        false
    }
}

struct Progress {
    interval: Duration,
    started: Instant,
    last: Instant,
    depth_hits: Vec<u64>,
}

impl Progress {
    fn new(interval: Duration, n: usize, started: Instant) -> Self {
        Progress {
            interval,
            started,
            last: started,
            depth_hits: vec![0; n + 1],
        }
    }

    #[inline]
    fn record(&mut self, depth: usize, nodes: u64) {
        self.depth_hits[depth] += 1;
        if nodes & 0xffff == 0 {
            let now = Instant::now();
            if now.duration_since(self.last) >= self.interval {
                self.last = now;
                let rate = nodes as f64 / now.duration_since(self.started).as_secs_f64();
                let hist = summarize_depths(&self.depth_hits);
                eprintln!("progress nodes={nodes} nodes_per_sec={rate:.0} depth_hist={hist}");
            }
        }
    }
}

fn summarize_depths(hits: &[u64]) -> String {
    let buckets = 8.min(hits.len());
    let width = hits.len().div_ceil(buckets);
    let mut parts = Vec::new();
    for b in 0..buckets {
        let lo = b * width;
        let total: u64 = hits[lo..(lo + width).min(hits.len())].iter().sum();
        if total > 0 {
            parts.push(format!("{lo}..{}:{total}", (lo + width).min(hits.len()) - 1));
        }
    }
    format!("[{}]", parts.join(" "))
}

fn order_candidates(
    table: &MoveTable,
    occ: &Occupancy,
    head: u32,
    heuristic: Heuristic,
    rng: &mut Option<ChaCha8Rng>,
    out: &mut Vec<(u32, u32)>,
) {
    out.clear();
    for &c in table.neighbors(head as usize) {
        if !occ.is_visited(c) {
            out.push((occ.unvisited_degree[c as usize], c));
        }
    }
    // neighbor lists are sorted, so lexicographic order is already in place
    if heuristic == Heuristic::Warnsdorff {
        out.sort_unstable();
        if let Some(rng) = rng {
            let mut lo = 0;
            while lo < out.len() {
                let mut hi = lo + 1;
                while hi < out.len() && out[hi].0 == out[lo].0 {
                    hi += 1;
                }
                out[lo..hi].shuffle(rng);
                lo = hi;
            }
        }
    }
}

fn validate_prefix(table: &MoveTable, prefix: &[u32]) -> Result<()> {
    let n = table.shape().cell_count();
    if prefix.is_empty() {
        return Err(Error::InvalidInput("prefix must not be empty".into()));
    }
    if prefix.len() > n {
        return Err(Error::InvalidInput(format!(
            "prefix of {} cells overruns the {n}-cell board",
            prefix.len()
        )));
    }
    let mut seen = vec![false; n];
    for &c in prefix {
        if c as usize >= n {
            return Err(Error::InvalidInput(format!(
                "prefix cell {c} out of range"
            )));
        }
        if seen[c as usize] {
            return Err(Error::InvalidInput(format!(
                "prefix visits cell {c} twice"
            )));
        }
        seen[c as usize] = true;
    }
    for pair in prefix.windows(2) {
        if !table.neighbors(pair[0] as usize).contains(&pair[1]) {
            return Err(Error::InvalidInput(format!(
                "prefix cells {} and {} are not knight-adjacent",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// One branch of the search tree: a path to resume from.
type Unit = Vec<u32>;

struct UnitResult {
    nodes: u64,
    count: u64,
    solution: Option<Vec<u32>>,
    interrupted: bool,
}

/// Runs `solve` over units, either inline or fanned out over worker
/// threads. Existence searches cancel the remaining units on first success.
fn run_units<F>(units: Vec<Unit>, jobs: usize, stop_on_found: bool, solve: F) -> Vec<UnitResult>
where
    F: Fn(&Unit, Option<&AtomicBool>) -> UnitResult + Sync,
{
    if jobs <= 1 || units.len() <= 1 {
        let mut results = Vec::with_capacity(units.len());
        for unit in &units {
            let result = solve(unit, None);
            let found = result.solution.is_some();
            results.push(result);
            if stop_on_found && found {
                break;
            }
        }
        return results;
    }
    let queue: Mutex<VecDeque<Unit>> = Mutex::new(units.into());
    let results: Mutex<Vec<UnitResult>> = Mutex::new(Vec::new());
    let found = AtomicBool::new(false);
    let workers = jobs;
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if stop_on_found && found.load(Ordering::Relaxed) {
                    return;
                }
                let Some(unit) = queue.lock().unwrap().pop_front() else {
                    return;
                };
                let cancel = stop_on_found.then_some(&found);
                let result = solve(&unit, cancel);
                if result.solution.is_some() {
                    found.store(true, Ordering::Relaxed);
                }
                results.lock().unwrap().push(result);
            });
        }
    });
    results.into_inner().unwrap()
}

fn combine(results: Vec<UnitResult>, started: Instant) -> (Option<Vec<u32>>, u64, bool, u64) {
    let mut solution = None;
    let mut nodes = 0;
    let mut interrupted = false;
    let mut count = 0;
    for r in results {
        nodes += r.nodes;
        count += r.count;
        interrupted |= r.interrupted;
        if solution.is_none() {
            solution = r.solution;
        }
    }
    let _ = started;
    (solution, nodes, interrupted, count)
}

// ---------------------------------------------------------------------------
// plain tour search
// ---------------------------------------------------------------------------

struct TourSolver<'a> {
    table: &'a MoveTable,
    n: usize,
    closed: bool,
    heuristic: Heuristic,
    rng: Option<ChaCha8Rng>,
    occ: Occupancy,
    path: Vec<u32>,
    start: u32,
    nodes: u64,
    counting: bool,
    count: u64,
    solution: Option<Vec<u32>>,
    limiter: Limiter<'a>,
    progress: Option<Progress>,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> TourSolver<'a> {
    fn new(
        table: &'a MoveTable,
        closed: bool,
        counting: bool,
        config: &SearchConfig,
        started: Instant,
        cancel: Option<&'a AtomicBool>,
        unit_tag: u64,
    ) -> Self {
        let n = table.shape().cell_count();
        TourSolver {
            table,
            n,
            closed,
            heuristic: config.heuristic,
            rng: (config.seed != 0)
                .then(|| ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(unit_tag))),
            occ: Occupancy::new(table),
            path: Vec::with_capacity(n),
            start: 0,
            nodes: 0,
            counting,
            count: 0,
            solution: None,
            limiter: Limiter::new(config.budget, started, cancel),
            progress: config
                .progress
                .map(|interval| Progress::new(interval, n, started)),
        }
    }

    fn seed_path(&mut self, prefix: &[u32]) {
        self.start = prefix[0];
        for &c in prefix {
            self.occ.visit(self.table, c);
            self.path.push(c);
        }
    }

    fn run(&mut self) {
        if let Flow::Stop = self.dfs() {
            // solution recorded or budget tripped; state already captured
        }
    }

    fn dfs(&mut self) -> Flow {
        if self.path.len() == self.n {
            let head = *self.path.last().expect("nonempty path");
            let ok = if self.closed {
                self.table.neighbors(head as usize).contains(&self.start)
            } else {
                true
            };
            if ok {
                if self.counting {
                    self.count += 1;
                    return Flow::Continue;
                }
                self.solution = Some(self.path.clone());
                return Flow::Stop;
            }
            return Flow::Continue;
        }
        if self.pruned() {
            return Flow::Continue;
        }
        let head = *self.path.last().expect("nonempty path");
        let mut candidates = Vec::new();
        order_candidates(
            self.table,
            &self.occ,
            head,
            self.heuristic,
            &mut self.rng,
            &mut candidates,
        );
        for i in 0..candidates.len() {
            let cell = candidates[i].1;
            self.nodes += 1;
            if let Some(p) = &mut self.progress {
                p.record(self.path.len(), self.nodes);
            }
            if self.limiter.should_stop(self.nodes) {
                return Flow::Stop;
            }
            self.occ.visit(self.table, cell);
            self.path.push(cell);
            let flow = self.dfs();
            self.path.pop();
            self.occ.unvisit(self.table, cell);
            if let Flow::Stop = flow {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Connectivity prunes, all necessary conditions for a completion, so
    /// exhaustive counts stay exact. An isolated unvisited cell is only
    /// viable as the very last cell of the tour.
    fn pruned(&self) -> bool {
        if self.occ.isolated > 0 && self.occ.remaining > 1 {
            return true;
        }
        if self.closed {
            // cells needing two live connections, and the eventual last
            // cell must still reach the start
            self.occ.degree_one > 2 || self.occ.unvisited_degree[self.start as usize] == 0
        } else {
            self.occ.isolated >= 2 || self.occ.degree_one > 2
        }
    }
}

fn tour_units(
    table: &MoveTable,
    closed: bool,
    config: &SearchConfig,
    base: Option<Vec<u32>>,
) -> Vec<Unit> {
    let n = table.shape().cell_count();
    let bases: Vec<Unit> = match base {
        Some(prefix) => vec![prefix],
        None if closed => vec![vec![0]],
        None => (0..n as u32).map(|s| vec![s]).collect(),
    };
    if config.jobs <= 1 {
        return bases;
    }
    // split each base one level down so workers have branches to pull
    let mut units = Vec::new();
    for base in bases {
        if base.len() >= n {
            units.push(base);
            continue;
        }
        let mut occ = Occupancy::new(table);
        for &c in &base {
            occ.visit(table, c);
        }
        let head = *base.last().expect("nonempty unit");
        let mut rng = (config.seed != 0).then(|| ChaCha8Rng::seed_from_u64(config.seed));
        let mut candidates = Vec::new();
        order_candidates(table, &occ, head, config.heuristic, &mut rng, &mut candidates);
        if candidates.is_empty() {
            units.push(base);
        } else {
            for (_, c) in candidates {
                let mut unit = base.clone();
                unit.push(c);
                units.push(unit);
            }
        }
    }
    units
}

/// Searches for an open or closed tour.
///
/// Closed searches fix the start cell at flat index 0 (rotation symmetry
/// makes that lossless); open searches iterate every start cell. The full
/// tree is explored unless a budget interrupts, so a no-solution result is
/// an exhaustion proof. Deterministic for seed 0 at one job.
pub fn find_tour(shape: &Shape, config: &SearchConfig) -> Result<SearchOutcome> {
    if config.mode == SearchMode::Magic {
        return find_magic_tour(shape, config);
    }
    if config.quartile_pruning {
        return Err(Error::InvalidInput(
            "quartile pruning only applies to magic searches".into(),
        ));
    }
    if config.jobs == 0 {
        return Err(Error::InvalidInput("jobs must be at least 1".into()));
    }
    let started = Instant::now();
    let table = build_move_table(shape)?;
    if let Some(prefix) = &config.prefix {
        validate_prefix(&table, prefix)?;
    }
    let closed = config.mode == SearchMode::Closed;
    let units = tour_units(&table, closed, config, config.prefix.clone());
    let results = run_units(units, config.jobs, true, |unit, cancel| {
        let mut solver = TourSolver::new(
            &table,
            closed,
            false,
            config,
            started,
            cancel,
            unit.first().copied().unwrap_or(0) as u64,
        );
        solver.seed_path(unit);
        solver.run();
        UnitResult {
            nodes: solver.nodes,
            count: 0,
            solution: solver.solution,
            interrupted: solver.limiter.exceeded,
        }
    });
    let (solution, nodes, interrupted, _) = combine(results, started);
    finish_outcome(shape, config, solution, nodes, interrupted, started)
}

fn finish_outcome(
    shape: &Shape,
    config: &SearchConfig,
    solution: Option<Vec<u32>>,
    nodes_expanded: u64,
    interrupted: bool,
    started: Instant,
) -> Result<SearchOutcome> {
    let (status, tour) = match solution {
        Some(sequence) => {
            let tour = Tour::new(shape.clone(), sequence)?;
            assert_solution_sound(&tour, config);
            (SearchStatus::Found, Some(tour))
        }
        None if interrupted => (SearchStatus::BudgetExceeded, None),
        None => (SearchStatus::ExhaustedNoSolution, None),
    };
    Ok(SearchOutcome {
        status,
        tour,
        nodes_expanded,
        elapsed: started.elapsed(),
    })
}

/// Every search exit re-validates its answer; a violation here is a solver
/// bug, not an input problem.
fn assert_solution_sound(tour: &Tour, config: &SearchConfig) {
    let report = validate(&grid_from_tour(tour));
    assert!(report.valid, "solver emitted an invalid tour: {report:?}");
    match config.mode {
        SearchMode::Closed => assert_eq!(
            report.closure,
            Closure::Closed,
            "solver emitted an open tour in closed mode"
        ),
        SearchMode::Magic => {
            let magic = magic_report(&grid_from_tour(tour), false)
                .expect("cubic shape was checked on entry");
            assert_eq!(
                magic.is_magic(),
                Some(true),
                "solver emitted a non-magic tour in magic mode"
            );
        }
        SearchMode::Open => {}
    }
}

/// Counts every closed tour sequence starting from flat index 0.
///
/// A zero count with `complete` set proves no closed tour exists. The
/// count includes both directions of each undirected cycle.
pub fn exhaustive_closed_count(shape: &Shape, budget: Budget, jobs: usize) -> Result<CountOutcome> {
    if jobs == 0 {
        return Err(Error::InvalidInput("jobs must be at least 1".into()));
    }
    let started = Instant::now();
    let table = build_move_table(shape)?;
    let mut config = SearchConfig::closed();
    config.budget = budget;
    config.exhaustive = true;
    config.jobs = jobs;
    let units = tour_units(&table, true, &config, None);
    let results = run_units(units, jobs, false, |unit, _| {
        let mut solver = TourSolver::new(&table, true, true, &config, started, None, 0);
        solver.seed_path(unit);
        solver.run();
        UnitResult {
            nodes: solver.nodes,
            count: solver.count,
            solution: None,
            interrupted: solver.limiter.exceeded,
        }
    });
    let (_, nodes_expanded, interrupted, count) = combine(results, started);
    Ok(CountOutcome {
        count,
        complete: !interrupted,
        nodes_expanded,
        elapsed: started.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// magic search
// ---------------------------------------------------------------------------

/// Per-line constraint state for the magic solver.
struct LineState {
    /// Line ids through each cell, `dimension` entries per cell.
    cell_lines: Vec<u32>,
    stride: usize,
    line_len: u64,
    sums: Vec<u64>,
    filled: Vec<u64>,
    /// Quartile groups already present on each line, as a 4-bit mask.
    group_masks: Vec<u8>,
    magic: u64,
    n: u64,
    group_size: u64,
}

impl LineState {
    fn new(shape: &Shape) -> Self {
        let lines = enumerate_lines(shape);
        let d = shape.dimension();
        let n = shape.cell_count();
        let mut cell_lines = vec![u32::MAX; n * d];
        let mut slots = vec![0usize; n];
        for (id, line) in lines.iter().enumerate() {
            for &cell in &line.cells {
                cell_lines[cell * d + slots[cell]] = id as u32;
                slots[cell] += 1;
            }
        }
        debug_assert!(slots.iter().all(|&s| s == d));
        let m = shape.order().expect("cubic shape") as u64;
        LineState {
            cell_lines,
            stride: d,
            line_len: m,
            sums: vec![0; lines.len()],
            filled: vec![0; lines.len()],
            group_masks: vec![0; lines.len()],
            magic: magic_constant(m, d as u32),
            n: n as u64,
            group_size: (n as u64 / 4).max(1),
        }
    }

    #[inline]
    fn lines_of(&self, cell: u32) -> &[u32] {
        let base = cell as usize * self.stride;
        &self.cell_lines[base..base + self.stride]
    }

    fn place(&mut self, cell: u32, value: u64) {
        for i in 0..self.stride {
            let line = self.cell_lines[cell as usize * self.stride + i] as usize;
            self.sums[line] += value;
            self.filled[line] += 1;
        }
    }

    fn unplace(&mut self, cell: u32, value: u64) {
        for i in 0..self.stride {
            let line = self.cell_lines[cell as usize * self.stride + i] as usize;
            self.sums[line] -= value;
            self.filled[line] -= 1;
        }
    }

    /// Rule (a): a fully numbered line must hit the magic constant.
    /// Rule (b): a partial line's deficit must be attainable with distinct
    /// unused numbers, all of which exceed the last one placed.
    fn line_feasible(&self, line: usize, last_placed: u64) -> bool {
        let sum = self.sums[line];
        let open = self.line_len - self.filled[line];
        if open == 0 {
            return sum == self.magic;
        }
        if sum > self.magic {
            return false;
        }
        let deficit = self.magic - sum;
        let min_fill = open * last_placed + open * (open + 1) / 2;
        let max_fill = open * self.n - open * (open - 1) / 2;
        (min_fill..=max_fill).contains(&deficit)
    }

    fn sweep(&self, last_placed: u64) -> bool {
        (0..self.sums.len()).all(|line| self.line_feasible(line, last_placed))
    }

    #[inline]
    fn group_of(&self, value: u64) -> u8 {
        1 << ((value - 1) / self.group_size).min(3)
    }

    /// Rule (c), optional: no line may take two numbers from one quartile
    /// group. Returns false on conflict.
    fn mark_groups(&mut self, cell: u32, value: u64) -> bool {
        let bit = self.group_of(value);
        let mut ok = true;
        for i in 0..self.stride {
            let line = self.cell_lines[cell as usize * self.stride + i] as usize;
            if self.group_masks[line] & bit != 0 {
                ok = false;
            }
            self.group_masks[line] ^= bit & !self.group_masks[line];
        }
        ok
    }

    fn unmark_groups(&mut self, cell: u32, value: u64, others: &[u8]) {
        // restore saved masks
        for (i, &saved) in others.iter().enumerate() {
            let line = self.cell_lines[cell as usize * self.stride + i] as usize;
            self.group_masks[line] = saved;
        }
        let _ = value;
    }

    fn saved_masks(&self, cell: u32) -> Vec<u8> {
        self.lines_of(cell)
            .iter()
            .map(|&l| self.group_masks[l as usize])
            .collect()
    }
}

struct MagicSolver<'a> {
    table: &'a MoveTable,
    n: usize,
    heuristic: Heuristic,
    rng: Option<ChaCha8Rng>,
    occ: Occupancy,
    lines: LineState,
    quartile: bool,
    path: Vec<u32>,
    nodes: u64,
    solution: Option<Vec<u32>>,
    limiter: Limiter<'a>,
    progress: Option<Progress>,
}

impl<'a> MagicSolver<'a> {
    fn new(
        table: &'a MoveTable,
        config: &SearchConfig,
        started: Instant,
        cancel: Option<&'a AtomicBool>,
        unit_tag: u64,
    ) -> Self {
        let n = table.shape().cell_count();
        MagicSolver {
            table,
            n,
            heuristic: config.heuristic,
            rng: (config.seed != 0)
                .then(|| ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(unit_tag))),
            occ: Occupancy::new(table),
            lines: LineState::new(table.shape()),
            quartile: config.quartile_pruning,
            path: Vec::with_capacity(n),
            nodes: 0,
            solution: None,
            limiter: Limiter::new(config.budget, started, cancel),
            progress: config
                .progress
                .map(|interval| Progress::new(interval, n, started)),
        }
    }

    /// Replays a prefix through the same constraint updates the search
    /// uses. Returns false if a sound rule rejects it (no completion can
    /// exist); nothing is counted as an expansion.
    fn seed_path(&mut self, prefix: &[u32]) -> bool {
        for &cell in prefix {
            let value = self.path.len() as u64 + 1;
            self.occ.visit(self.table, cell);
            self.path.push(cell);
            self.lines.place(cell, value);
            if self.quartile && !self.lines.mark_groups(cell, value) {
                return false;
            }
            if !self.lines.sweep(value) {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self) -> Flow {
        if self.path.len() == self.n {
            self.solution = Some(self.path.clone());
            return Flow::Stop;
        }
        // magic tours are open-or-closed tours; open connectivity rules apply
        if self.occ.isolated >= 2
            || (self.occ.isolated == 1 && self.occ.remaining > 1)
            || self.occ.degree_one > 2
        {
            return Flow::Continue;
        }
        let head = *self.path.last().expect("nonempty path");
        let mut candidates = Vec::new();
        order_candidates(
            self.table,
            &self.occ,
            head,
            self.heuristic,
            &mut self.rng,
            &mut candidates,
        );
        let value = self.path.len() as u64 + 1;
        for i in 0..candidates.len() {
            let cell = candidates[i].1;
            self.nodes += 1;
            if let Some(p) = &mut self.progress {
                p.record(self.path.len(), self.nodes);
            }
            if self.limiter.should_stop(self.nodes) {
                return Flow::Stop;
            }
            self.lines.place(cell, value);
            let saved = self.quartile.then(|| self.lines.saved_masks(cell));
            let group_ok = match &saved {
                Some(_) => self.lines.mark_groups(cell, value),
                None => true,
            };
            if group_ok && self.lines.sweep(value) {
                self.occ.visit(self.table, cell);
                self.path.push(cell);
                let flow = self.dfs();
                self.path.pop();
                self.occ.unvisit(self.table, cell);
                if let Flow::Stop = flow {
                    return Flow::Stop;
                }
            }
            if let Some(saved) = saved {
                self.lines.unmark_groups(cell, value, &saved);
            }
            self.lines.unplace(cell, value);
        }
        Flow::Continue
    }
}

/// Searches for a magic tour on a cubic board, numbering cells 1..=N in
/// visit order and propagating line-sum constraints on every placement.
///
/// Orders that are proven magic-infeasible return `exhausted_no_solution`
/// immediately (the theorem is the exhaustion proof). Non-exhaustive runs
/// without any budget default to 60 seconds.
pub fn find_magic_tour(shape: &Shape, config: &SearchConfig) -> Result<SearchOutcome> {
    let Some(order) = shape.order() else {
        return Err(Error::Domain(format!(
            "magic tours are defined on cubic boards only, got {shape}"
        )));
    };
    if config.jobs == 0 {
        return Err(Error::InvalidInput("jobs must be at least 1".into()));
    }
    if config.quartile_pruning && order != 4 {
        return Err(Error::InvalidInput(
            "quartile pruning requires an order-4 board".into(),
        ));
    }
    let started = Instant::now();
    if shape.dimension() >= 2 {
        let verdict = crate::feasibility::magic_tour_feasible(
            order as u64,
            shape.dimension() as u32,
        )?;
        if verdict.is_proven_impossible() {
            return Ok(SearchOutcome {
                status: SearchStatus::ExhaustedNoSolution,
                tour: None,
                nodes_expanded: 0,
                elapsed: started.elapsed(),
            });
        }
    }
    let mut config = config.clone();
    config.mode = SearchMode::Magic;
    if !config.exhaustive && config.budget.is_unlimited() {
        config.budget = Budget::seconds(60);
    }
    let table = build_move_table(shape)?;
    if let Some(prefix) = &config.prefix {
        validate_prefix(&table, prefix)?;
    }
    let n = table.shape().cell_count();
    let units: Vec<Unit> = match &config.prefix {
        Some(prefix) => vec![prefix.clone()],
        None => (0..n as u32).map(|s| vec![s]).collect(),
    };
    let results = run_units(units, config.jobs, true, |unit, cancel| {
        let mut solver = MagicSolver::new(
            &table,
            &config,
            started,
            cancel,
            unit.first().copied().unwrap_or(0) as u64,
        );
        if !solver.seed_path(unit) {
            // a sound rule rejected the prefix: this branch is empty
            return UnitResult {
                nodes: solver.nodes,
                count: 0,
                solution: None,
                interrupted: false,
            };
        }
        solver.dfs();
        UnitResult {
            nodes: solver.nodes,
            count: 0,
            solution: solver.solution,
            interrupted: solver.limiter.exceeded,
        }
    });
    let (solution, nodes, interrupted, _) = combine(results, started);
    finish_outcome(shape, &config, solution, nodes, interrupted, started)
}

/// One pruning-rule firing observed while replaying a finished tour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneEvent {
    /// The 1-based number whose placement tripped the rule.
    pub step: u64,
    pub rule: &'static str,
}

/// Replays a complete tour through the magic pruning rules, recording every
/// firing instead of stopping. A sound rule never fires on a tour that is
/// actually magic, so replaying published magic tours must produce zero
/// events with quartile checking off.
pub fn replay_magic_rules(grid: &Grid, quartile_pruning: bool) -> Result<Vec<PruneEvent>> {
    let shape = grid.shape();
    if !shape.is_cubic() {
        return Err(Error::Domain(format!(
            "magic rules apply to cubic boards only, got {shape}"
        )));
    }
    let tour = crate::tour::tour_from_grid(grid)?;
    let mut lines = LineState::new(shape);
    let mut events = Vec::new();
    for (i, &cell) in tour.sequence().iter().enumerate() {
        let value = i as u64 + 1;
        lines.place(cell, value);
        if quartile_pruning && !lines.mark_groups(cell, value) {
            events.push(PruneEvent {
                step: value,
                rule: "quartile-group",
            });
        }
        for &line in lines.lines_of(cell) {
            if !lines.line_feasible(line as usize, value) {
                let open = lines.line_len - lines.filled[line as usize];
                events.push(PruneEvent {
                    step: value,
                    rule: if open == 0 {
                        "complete-line-sum"
                    } else {
                        "partial-line-bracket"
                    },
                });
            }
        }
        // the global sweep can only fire on lines whose bracket the growing
        // number pool has invalidated since they were last touched
        for line in 0..lines.sums.len() {
            if lines.filled[line] > 0
                && lines.filled[line] < lines.line_len
                && !lines.line_feasible(line, value)
                && !lines.lines_of(cell).contains(&(line as u32))
            {
                events.push(PruneEvent {
                    step: value,
                    rule: "global-bracket",
                });
            }
        }
    }
    Ok(events)
}
