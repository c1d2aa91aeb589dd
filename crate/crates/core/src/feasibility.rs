//! Existence predicates for closed knight's tours and magic knight's tours,
//! with provenance attached to every verdict: a proven theorem, a published
//! conjecture, a bundled example, or openly unknown.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Shape;

/// What a feasibility rule concludes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Impossible,
    Possible,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Impossible => write!(f, "impossible"),
            Answer::Possible => write!(f, "possible"),
            Answer::Unknown => write!(f, "unknown"),
        }
    }
}

/// How a verdict is backed. Impossibility is only ever claimed on the
/// strength of a proven theorem or an explicitly conjectured condition;
/// the two are never blurred.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Proven(&'static str),
    Conjectured(&'static str),
    EstablishedByExample(&'static str),
    Open,
}

impl Provenance {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Provenance::Proven(rule) => rule,
            Provenance::Conjectured(rule) => rule,
            Provenance::EstablishedByExample(id) => id,
            Provenance::Open => "open",
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Provenance::Proven(_) => "proven",
            Provenance::Conjectured(_) => "conjectured",
            Provenance::EstablishedByExample(_) => "established-by-example",
            Provenance::Open => "open",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Proven(rule) => write!(f, "proven({rule})"),
            Provenance::Conjectured(rule) => write!(f, "conjectured({rule})"),
            Provenance::EstablishedByExample(id) => write!(f, "established-by-example({id})"),
            Provenance::Open => write!(f, "open"),
        }
    }
}

/// A feasibility answer together with the rule it rests on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub answer: Answer,
    pub provenance: Provenance,
    pub rule_citation: &'static str,
}

impl FeasibilityVerdict {
    fn new(answer: Answer, provenance: Provenance, rule_citation: &'static str) -> Self {
        FeasibilityVerdict {
            answer,
            provenance,
            rule_citation,
        }
    }

    pub fn is_proven_impossible(&self) -> bool {
        self.answer == Answer::Impossible && matches!(self.provenance, Provenance::Proven(_))
    }

    pub fn to_kv(&self) -> String {
        format!(
            "answer={} provenance={} rule={}",
            self.answer,
            self.provenance.kind(),
            self.provenance.rule_name()
        )
    }
}

impl fmt::Display for FeasibilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] — {}",
            self.answer, self.provenance, self.rule_citation
        )
    }
}

const CITE_PARITY: &str = "a closed tour alternates colors, so it needs an even number of cells; \
     a board with all extents odd has an odd cell count";
const CITE_SCHWENK_A: &str =
    "Schwenk: an m x n board with m and n both odd has no closed knight's tour";
const CITE_SCHWENK_B: &str =
    "Schwenk: an m x n board with min side in {1, 2, 4} has no closed knight's tour";
const CITE_SCHWENK_C: &str =
    "Schwenk: a 3 x n board with n in {4, 6, 8} has no closed knight's tour";
const CITE_SCHWENK_YES: &str =
    "Schwenk: every rectangular board outside the three exceptional families has a closed knight's tour";
const CITE_DM_A: &str =
    "DeMaio-Mathew: an i x j x k box (sides >= 2) with all sides odd has no closed knight's tour";
const CITE_DM_B: &str =
    "DeMaio-Mathew: an i x j x k box (sides >= 2) whose two smallest sides are 2 has no closed knight's tour";
const CITE_DM_C: &str = "DeMaio-Mathew: the 2 x 3 x 3 box has no closed knight's tour";
const CITE_DM_YES: &str =
    "DeMaio-Mathew: every box with sides >= 2 outside the three exceptional families has a closed knight's tour";
const CITE_CONJ_B: &str =
    "conjectured: a box (sides >= 2) with all but its largest extent equal to 2 has no closed knight's tour";
const CITE_CONJ_C: &str =
    "conjectured: a box (sides >= 2) whose two largest extents are 3 and the rest 2 has no closed knight's tour";
const CITE_CONJ_YES: &str =
    "conjectured: a box with sides >= 2 outside the three exceptional families has a closed knight's tour";
const CITE_ODD_ORDER_MAGIC: &str =
    "an odd-order hypercube has no magic knight's tour: the magic sum is odd, yet neighboring \
     lines alternate between odd and even sums under the tour's two-coloring";
const CITE_SINGLY_EVEN: &str =
    "Jelliss: no magic knight's tour exists on a plane board with singly even sides";
const CITE_ORDER_ONE: &str = "a single cell numbered 1 meets every line sum trivially";
const CITE_MAGIC_OPEN: &str =
    "outside the proven impossibilities and the bundled examples, existence is open here";

fn conjecture_rule(dimension: usize, clause: &str) -> (&'static str, &'static str) {
    match (dimension, clause) {
        (4, "b") => ("closed-conjecture-4d(b)", CITE_CONJ_B),
        (4, "c") => ("closed-conjecture-4d(c)", CITE_CONJ_C),
        (4, _) => ("closed-conjecture-4d", CITE_CONJ_YES),
        (5, "b") => ("closed-conjecture-5d(b)", CITE_CONJ_B),
        (5, "c") => ("closed-conjecture-5d(c)", CITE_CONJ_C),
        (5, _) => ("closed-conjecture-5d", CITE_CONJ_YES),
        (_, "b") => ("closed-conjecture-nd(b)", CITE_CONJ_B),
        (_, "c") => ("closed-conjecture-nd(c)", CITE_CONJ_C),
        (_, _) => ("closed-conjecture-nd", CITE_CONJ_YES),
    }
}

/// Decides closed-tour existence for any shape.
///
/// Extents of 1 are inert and are stripped before the rules apply; the
/// verdict is invariant under reordering of extents. Dimensions 2 and 3
/// are fully characterized by proven theorems; from dimension 4 up the
/// conditions are conjectured, except that an odd cell count is proven
/// impossible outright.
pub fn closed_tour_feasible(shape: &Shape) -> FeasibilityVerdict {
    let mut dims: Vec<usize> = shape
        .sorted_dims()
        .into_iter()
        .filter(|&e| e > 1)
        .collect();
    match dims.len() {
        0 => dims = vec![1, 1],
        1 => dims.insert(0, 1),
        _ => {}
    }
    match dims.len() {
        2 => schwenk(dims[0], dims[1]),
        3 => demaio_mathew(dims[0], dims[1], dims[2]),
        _ => higher_dimensional(&dims),
    }
}

fn schwenk(m: usize, n: usize) -> FeasibilityVerdict {
    debug_assert!(m <= n);
    if m % 2 == 1 && n % 2 == 1 {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("schwenk(a)"),
            CITE_SCHWENK_A,
        )
    } else if matches!(m, 1 | 2 | 4) {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("schwenk(b)"),
            CITE_SCHWENK_B,
        )
    } else if m == 3 && matches!(n, 4 | 6 | 8) {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("schwenk(c)"),
            CITE_SCHWENK_C,
        )
    } else {
        FeasibilityVerdict::new(
            Answer::Possible,
            Provenance::Proven("schwenk"),
            CITE_SCHWENK_YES,
        )
    }
}

fn demaio_mathew(i: usize, j: usize, k: usize) -> FeasibilityVerdict {
    debug_assert!(2 <= i && i <= j && j <= k);
    if i % 2 == 1 && j % 2 == 1 && k % 2 == 1 {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("demaio-mathew(a)"),
            CITE_DM_A,
        )
    } else if i == 2 && j == 2 {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("demaio-mathew(b)"),
            CITE_DM_B,
        )
    } else if i == 2 && j == 3 && k == 3 {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("demaio-mathew(c)"),
            CITE_DM_C,
        )
    } else {
        FeasibilityVerdict::new(
            Answer::Possible,
            Provenance::Proven("demaio-mathew"),
            CITE_DM_YES,
        )
    }
}

fn higher_dimensional(dims: &[usize]) -> FeasibilityVerdict {
    let d = dims.len();
    if dims.iter().all(|&e| e % 2 == 1) {
        // Odd cell count: proven outright, independent of the conjecture.
        return FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("parity-odd-cells"),
            CITE_PARITY,
        );
    }
    if dims[..d - 1].iter().all(|&e| e == 2) {
        let (rule, cite) = conjecture_rule(d, "b");
        return FeasibilityVerdict::new(Answer::Impossible, Provenance::Conjectured(rule), cite);
    }
    if dims[..d - 2].iter().all(|&e| e == 2) && dims[d - 2] == 3 && dims[d - 1] == 3 {
        let (rule, cite) = conjecture_rule(d, "c");
        return FeasibilityVerdict::new(Answer::Impossible, Provenance::Conjectured(rule), cite);
    }
    let (rule, cite) = conjecture_rule(d, "yes");
    FeasibilityVerdict::new(Answer::Possible, Provenance::Conjectured(rule), cite)
}

/// Decides magic-tour existence for a d-dimensional hypercube of order m.
///
/// Odd orders are proven impossible (except the degenerate single cell),
/// singly even orders are proven impossible on plane boards, and order 4 in
/// dimensions 3..=5 is established by the bundled tours. Everything else is
/// open here.
pub fn magic_tour_feasible(order: u64, dimension: u32) -> Result<FeasibilityVerdict> {
    if order < 1 {
        return Err(Error::InvalidInput("order must be at least 1".into()));
    }
    if dimension < 2 {
        return Err(Error::InvalidInput(
            "magic tours need dimension at least 2".into(),
        ));
    }
    Ok(if order == 1 {
        FeasibilityVerdict::new(
            Answer::Possible,
            Provenance::Proven("order-one-trivial"),
            CITE_ORDER_ONE,
        )
    } else if order % 2 == 1 {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("odd-order-magic"),
            CITE_ODD_ORDER_MAGIC,
        )
    } else if order % 4 == 2 && dimension == 2 {
        FeasibilityVerdict::new(
            Answer::Impossible,
            Provenance::Proven("singly-even-planar"),
            CITE_SINGLY_EVEN,
        )
    } else if order == 4 && (3..=5).contains(&dimension) {
        let example = match dimension {
            3 => "fig2",
            4 => "fig9",
            _ => "fig10",
        };
        FeasibilityVerdict::new(
            Answer::Possible,
            Provenance::EstablishedByExample(example),
            "a bundled order-4 magic tour of this dimension verifies",
        )
    } else {
        FeasibilityVerdict::new(Answer::Unknown, Provenance::Open, CITE_MAGIC_OPEN)
    })
}

/// What an exhaustive search observed for one shape.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Observation {
    Exists,
    NotExists,
    /// Search skipped or interrupted; carries no evidence.
    Skipped,
}

/// One shape's predicted-versus-observed comparison.
#[derive(Clone, Debug)]
pub struct ConjectureCheck {
    pub shape: Shape,
    pub predicted: FeasibilityVerdict,
    pub observed: Observation,
}

impl ConjectureCheck {
    /// True when exhaustive evidence contradicts the prediction. A
    /// conjectured verdict contradicted by search is a finding, never
    /// silently overwritten; a proven one contradicted means a bug.
    pub fn disagrees(&self) -> bool {
        matches!(
            (self.predicted.answer, self.observed),
            (Answer::Impossible, Observation::Exists) | (Answer::Possible, Observation::NotExists)
        )
    }
}

/// Compares [`closed_tour_feasible`] predictions against an exhaustive
/// search over each shape. Shapes above `cell_budget` are skipped and
/// flagged. `search` returns `Some(true)` when a closed tour exists,
/// `Some(false)` when exhaustion proved none does, `None` when it gave up.
pub fn verify_conjecture<I, F>(shapes: I, cell_budget: usize, mut search: F) -> Vec<ConjectureCheck>
where
    I: IntoIterator<Item = Shape>,
    F: FnMut(&Shape) -> Option<bool>,
{
    shapes
        .into_iter()
        .map(|shape| {
            let predicted = closed_tour_feasible(&shape);
            let observed = if shape.cell_count() > cell_budget {
                Observation::Skipped
            } else {
                match search(&shape) {
                    Some(true) => Observation::Exists,
                    Some(false) => Observation::NotExists,
                    None => Observation::Skipped,
                }
            };
            ConjectureCheck {
                shape,
                predicted,
                observed,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(text: &str) -> FeasibilityVerdict {
        closed_tour_feasible(&Shape::parse(text).unwrap())
    }

    #[test]
    fn schwenk_families() {
        assert_eq!(verdict("3x3").answer, Answer::Impossible);
        assert_eq!(verdict("3x3").provenance, Provenance::Proven("schwenk(a)"));
        assert_eq!(verdict("3x4").provenance, Provenance::Proven("schwenk(c)"));
        assert_eq!(verdict("4x4").provenance, Provenance::Proven("schwenk(b)"));
        assert_eq!(verdict("2x9").provenance, Provenance::Proven("schwenk(b)"));
        assert_eq!(verdict("3x10").answer, Answer::Possible);
        assert_eq!(verdict("6x6").answer, Answer::Possible);
        assert_eq!(verdict("8x8").answer, Answer::Possible);
    }

    #[test]
    fn demaio_mathew_families() {
        assert_eq!(
            verdict("2x3x3").provenance,
            Provenance::Proven("demaio-mathew(c)")
        );
        assert_eq!(
            verdict("3x3x3").provenance,
            Provenance::Proven("demaio-mathew(a)")
        );
        assert_eq!(
            verdict("2x2x5").provenance,
            Provenance::Proven("demaio-mathew(b)")
        );
        let ok = verdict("3x4x2");
        assert_eq!(ok.answer, Answer::Possible);
        assert!(matches!(ok.provenance, Provenance::Proven(_)));
    }

    #[test]
    fn four_dimensional_conjecture() {
        let minimal = verdict("3x4x2x2");
        assert_eq!(minimal.answer, Answer::Possible);
        assert!(matches!(minimal.provenance, Provenance::Conjectured(_)));
        assert_eq!(
            verdict("2x2x2x5").provenance,
            Provenance::Conjectured("closed-conjecture-4d(b)")
        );
        assert_eq!(
            verdict("2x2x3x3").provenance,
            Provenance::Conjectured("closed-conjecture-4d(c)")
        );
        // odd cell count stays proven even in conjecture territory
        let odd = verdict("3x3x3x3");
        assert_eq!(odd.provenance, Provenance::Proven("parity-odd-cells"));
        assert!(odd.is_proven_impossible());
    }

    #[test]
    fn five_and_higher_dimensions() {
        assert_eq!(verdict("3x4x2x2x2").answer, Answer::Possible);
        assert_eq!(
            verdict("2x2x2x2x3").provenance,
            Provenance::Conjectured("closed-conjecture-5d(b)")
        );
        assert_eq!(
            verdict("2x2x2x3x3").provenance,
            Provenance::Conjectured("closed-conjecture-5d(c)")
        );
        assert_eq!(
            verdict("2x2x2x2x3x3").provenance,
            Provenance::Conjectured("closed-conjecture-nd(c)")
        );
    }

    #[test]
    fn verdicts_ignore_extent_order_and_ones() {
        assert_eq!(verdict("4x3x2x2"), verdict("2x2x3x4"));
        assert_eq!(verdict("1x8x8"), verdict("8x8"));
        assert_eq!(verdict("1x1x27"), verdict("1x27"));
        assert_eq!(verdict("5x1x1").answer, Answer::Impossible);
        assert!(verdict("1x1x1").is_proven_impossible());
    }

    #[test]
    fn magic_verdicts() {
        assert!(magic_tour_feasible(5, 4).unwrap().is_proven_impossible());
        assert_eq!(
            magic_tour_feasible(3, 3).unwrap().provenance,
            Provenance::Proven("odd-order-magic")
        );
        assert_eq!(
            magic_tour_feasible(6, 2).unwrap().provenance,
            Provenance::Proven("singly-even-planar")
        );
        assert_eq!(
            magic_tour_feasible(4, 4).unwrap().provenance,
            Provenance::EstablishedByExample("fig9")
        );
        assert_eq!(
            magic_tour_feasible(4, 3).unwrap().provenance,
            Provenance::EstablishedByExample("fig2")
        );
        assert_eq!(
            magic_tour_feasible(4, 5).unwrap().provenance,
            Provenance::EstablishedByExample("fig10")
        );
        assert_eq!(magic_tour_feasible(8, 2).unwrap().answer, Answer::Unknown);
        assert_eq!(magic_tour_feasible(6, 3).unwrap().answer, Answer::Unknown);
        assert_eq!(magic_tour_feasible(4, 2).unwrap().answer, Answer::Unknown);
        assert_eq!(magic_tour_feasible(1, 4).unwrap().answer, Answer::Possible);
        assert!(magic_tour_feasible(0, 4).is_err());
        assert!(magic_tour_feasible(4, 1).is_err());
    }

    #[test]
    fn conjecture_comparison_marks_disagreements() {
        let shapes = vec![
            Shape::parse("2x2x3x3").unwrap(),
            Shape::parse("2x2x3x4").unwrap(),
        ];
        let checks = verify_conjecture(shapes, 100, |shape| {
            // fake searcher: claims a tour exists everywhere
            Some(shape.cell_count() > 0)
        });
        assert!(checks[0].disagrees(), "impossible vs exists must flag");
        assert!(!checks[1].disagrees());
        let skipped = verify_conjecture(
            vec![Shape::parse("4x4x4x4").unwrap()],
            10,
            |_| panic!("must not search over budget"),
        );
        assert_eq!(skipped[0].observed, Observation::Skipped);
        assert!(!skipped[0].disagrees());
    }
}
