//! Constructive perfect matchings for every lattice point of the Newton polygon.
//!
//! The driver starts from the matching of all `y` edges, swaps vertical
//! columns to walk down the full diagonals, applies descent operations to
//! reach the left-most point of a partial diagonal, and finally walks along
//! the diagonal with traversal operations.
//!
//! Every operation is an explicit edge delta on a few labeled tiles and the
//! `z` pairs of the links between them. After each one the matching is
//! re-validated and its monomial recomputed from scratch; the lattice shift
//! must equal the operation's declared shift.
//!
//! In the labeled view a perfect matching is described by the set of links
//! whose `z` pair is used. A labeled tile with one used link takes the edge
//! opposite that link, a tile with two used links (straight through) takes
//! nothing, and a tile with none takes either both verticals or both
//! horizontals.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::matchings::{is_perfect, lattice_point, matching_monomial, Matching};
use crate::newton::{contains, LatticePoint};
use crate::poly::Exponents;
use crate::snake::{build_snake, Dir, EdgeKey, Side, SnakeGraph};
use crate::words::{word_data, ModLetter, ModifiedWord, RationalIndex, RunProfile};

/// A local rewrite of the matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewriteOp {
    /// Swap the `y` pair inside the given 1x3 column (1-based) for its `z` verticals.
    Swap(usize),
    /// First descent over a flat stretch.
    Add,
    /// First descent over a staircase of the given number of up-steps.
    InitialStep(usize),
    /// Later descent over a flat stretch.
    Extend,
    /// Later descent over a staircase.
    Step(usize),
    FirstBoxSwap,
    Twist,
    PullBack,
}

impl RewriteOp {
    /// Declared move on the `(i, j)` lattice.
    pub fn shift(&self) -> (i64, i64) {
        match *self {
            RewriteOp::Swap(_) => (0, -1),
            RewriteOp::Add => (1, -2),
            RewriteOp::InitialStep(r) => (r as i64 + 1, -(r as i64 + 2)),
            RewriteOp::Extend => (0, -1),
            RewriteOp::Step(r) => (r as i64, -(r as i64 + 1)),
            RewriteOp::FirstBoxSwap | RewriteOp::Twist | RewriteOp::PullBack => (1, -1),
        }
    }

    /// The descent operation over a staircase with `ups` up-steps.
    pub fn descent(first: bool, ups: usize) -> RewriteOp {
        match (first, ups) {
            (true, 0) => RewriteOp::Add,
            (true, r) => RewriteOp::InitialStep(r),
            (false, 0) => RewriteOp::Extend,
            (false, r) => RewriteOp::Step(r),
        }
    }

    pub fn is_descent(&self) -> bool {
        matches!(self, RewriteOp::Add | RewriteOp::InitialStep(_) | RewriteOp::Extend | RewriteOp::Step(_))
    }

    pub fn is_traversal(&self) -> bool {
        matches!(self, RewriteOp::FirstBoxSwap | RewriteOp::Twist | RewriteOp::PullBack)
    }
}

impl fmt::Display for RewriteOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteOp::Swap(q) => write!(f, "Swap({q})"),
            RewriteOp::Add => write!(f, "Add"),
            RewriteOp::InitialStep(r) => write!(f, "InitialStep({r})"),
            RewriteOp::Extend => write!(f, "Extend"),
            RewriteOp::Step(r) => write!(f, "Step({r})"),
            RewriteOp::FirstBoxSwap => write!(f, "FirstBoxSwap"),
            RewriteOp::Twist => write!(f, "Twist"),
            RewriteOp::PullBack => write!(f, "PullBack"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("column {0} is already swapped")]
    AlreadySwapped(usize),
    #[error("no column {region}; the snake has {columns}")]
    NoSuchRegion { region: usize, columns: usize },
    #[error("{op} is not allowed after {after}")]
    WrongPhase { op: &'static str, after: &'static str },
    #[error("descent needs all {needed} columns swapped, only {applied} are")]
    SwapsIncomplete { applied: usize, needed: usize },
    #[error("all descents are used up; the lowest diagonal is reached")]
    DescentExhausted,
    #[error("cannot move further along the diagonal from {0}")]
    EndOfDiagonal(LatticePoint),
    #[error("point {0} is outside the Newton polygon")]
    PointOutsidePolygon(LatticePoint),
    #[error("snake shape does not admit {op}: {detail}")]
    ShapeMismatch { op: String, detail: String },
    #[error("descent {descent} has {found} up-steps but the modified word says {expected}")]
    WordMismatch { descent: usize, expected: u64, found: usize },
    #[error("{op} produced an invalid matching: {detail}")]
    Validation { op: String, detail: String },
}

/// One entry of the operation log: the operation and where it landed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpRecord {
    /// `"IPM"` for the initial matching, otherwise the operation name.
    pub label: String,
    #[serde(skip)]
    pub op: Option<RewriteOp>,
    pub point: LatticePoint,
    /// Exponents of `x, y, z` in the matching monomial.
    pub exponents: Exponents,
}

/// Matching under construction, with the processed prefix of labeled tiles.
#[derive(Debug, Clone)]
pub struct ConstructionState<'g> {
    graph: &'g SnakeGraph,
    matching: Matching,
    /// Labeled tiles `0..processed` form the processed prefix.
    processed: usize,
    point: LatticePoint,
    word: ModifiedWord,
    runs: RunProfile,
    word_pos: usize,
    swapped: BTreeSet<usize>,
    descents: usize,
    traversals: usize,
    log: Vec<OpRecord>,
}

/// Edges a labeled tile takes for itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fill {
    /// Determined by which neighbouring links are used.
    Forced,
    /// Both verticals; only valid when no neighbouring link is used.
    Verticals,
}

impl<'g> ConstructionState<'g> {
    /// The matching of all `y` edges: both horizontals of every labeled tile.
    pub fn initial_matching(graph: &'g SnakeGraph) -> Self {
        let mut matching = Matching::new();
        for k in 0..graph.num_labeled() {
            matching.insert(graph.labeled_side(k, Side::Bottom));
            matching.insert(graph.labeled_side(k, Side::Top));
        }
        let rho = graph.rho();
        let (_, word, runs) = word_data(rho);
        let point = LatticePoint(0, rho.degree() as i64);
        let mut state = ConstructionState {
            graph,
            matching,
            processed: 0,
            point,
            word,
            runs,
            word_pos: 0,
            swapped: BTreeSet::new(),
            descents: 0,
            traversals: 0,
            log: Vec::new(),
        };
        let exponents = state.monomial_exponents().expect("initial matching is perfect");
        state.log.push(OpRecord { label: "IPM".into(), op: None, point, exponents });
        state
    }

    pub fn graph(&self) -> &'g SnakeGraph {
        self.graph
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn into_matching(self) -> Matching {
        self.matching
    }

    pub fn point(&self) -> LatticePoint {
        self.point
    }

    pub fn log(&self) -> &[OpRecord] {
        &self.log
    }

    /// Number of labeled tiles in the processed prefix.
    pub fn processed(&self) -> usize {
        self.processed
    }

    /// 1-based tile index of the last processed tile, if any.
    pub fn frontier_tile(&self) -> Option<usize> {
        self.processed.checked_sub(1).map(|k| 2 * k + 1)
    }

    /// Position in the modified word after the descents so far.
    pub fn word_pos(&self) -> usize {
        self.word_pos
    }

    pub fn swapped(&self) -> &BTreeSet<usize> {
        &self.swapped
    }

    pub fn descents(&self) -> usize {
        self.descents
    }

    fn monomial_exponents(&self) -> Result<Exponents, String> {
        matching_monomial(self.graph, &self.matching).map(|m| m.exponents()).map_err(|e| e.to_string())
    }

    fn n(&self) -> usize {
        self.graph.num_labeled()
    }

    fn link_in(&self, k: usize) -> bool {
        k >= 1 && k < self.n() && self.matching.contains(&self.graph.link_edges(k)[0])
    }

    fn own_sides(&self, k: usize) -> Vec<Side> {
        [Side::Bottom, Side::Top, Side::Left, Side::Right]
            .into_iter()
            .filter(|&s| self.matching.contains(&self.graph.labeled_side(k, s)))
            .collect()
    }

    fn is_free_horizontal(&self, k: usize) -> bool {
        !self.link_in(k) && !self.link_in(k + 1) && self.own_sides(k) == [Side::Bottom, Side::Top]
    }

    fn shape_error(op: impl fmt::Display, detail: impl Into<String>) -> ConstructError {
        ConstructError::ShapeMismatch { op: op.to_string(), detail: detail.into() }
    }

    /// Applies a rewrite: toggles the given links and refills the listed tiles,
    /// then validates the result against the declared shift.
    fn rewrite(
        &mut self,
        op: RewriteOp,
        add_links: &[usize],
        remove_links: &[usize],
        tiles: &[(usize, Fill)],
    ) -> Result<(), ConstructError> {
        let g = self.graph;
        let mut links: BTreeSet<usize> = (1..self.n()).filter(|&k| self.link_in(k)).collect();
        for k in remove_links {
            if !links.remove(k) {
                return Err(Self::shape_error(op, format!("link {k} is not in the matching")));
            }
        }
        for &k in add_links {
            if !links.insert(k) {
                return Err(Self::shape_error(op, format!("link {k} is already in the matching")));
            }
        }

        let mut removed: Vec<EdgeKey> = Vec::new();
        let mut added: Vec<EdgeKey> = Vec::new();
        for &k in remove_links {
            removed.extend(g.link_edges(k));
        }
        for &k in add_links {
            added.extend(g.link_edges(k));
        }
        for &(k, fill) in tiles {
            removed.extend(self.own_sides(k).into_iter().map(|s| g.labeled_side(k, s)));
            let used: Vec<Side> = [
                g.incoming_side(k).filter(|_| links.contains(&k)),
                g.outgoing_side(k).filter(|_| links.contains(&(k + 1))),
            ]
            .into_iter()
            .flatten()
            .collect();
            let sides = match (fill, used.as_slice()) {
                (Fill::Verticals, []) => vec![Side::Left, Side::Right],
                (Fill::Verticals, _) => {
                    return Err(Self::shape_error(op, format!("labeled tile {k} is not free")));
                }
                (Fill::Forced, [s]) => vec![s.opposite()],
                (Fill::Forced, [s, t]) if s.opposite() == *t => vec![],
                (Fill::Forced, [_, _]) => {
                    return Err(Self::shape_error(op, format!("both links at corner tile {k}")));
                }
                (Fill::Forced, _) => vec![Side::Bottom, Side::Top],
            };
            added.extend(sides.into_iter().map(|s| g.labeled_side(k, s)));
        }

        let before = self.matching.clone();
        for e in &removed {
            if !self.matching.remove(e) {
                self.matching = before;
                return Err(Self::shape_error(op, format!("edge {e} is not in the matching")));
            }
        }
        for e in &added {
            if !self.matching.insert(*e) {
                self.matching = before;
                return Err(Self::shape_error(op, format!("edge {e} added twice")));
            }
        }

        let validation = |detail: String| ConstructError::Validation { op: op.to_string(), detail };
        if !is_perfect(g, &self.matching).map_err(|e| validation(e.to_string()))? {
            return Err(validation("not a perfect matching".into()));
        }
        let mono = matching_monomial(g, &self.matching).map_err(|e| validation(e.to_string()))?;
        let got = lattice_point(&mono).map_err(|e| validation(e.to_string()))?;
        let expected = self.point.shifted(op.shift());
        if got != expected {
            return Err(validation(format!("landed on {got}, declared shift gives {expected}")));
        }
        self.point = got;
        self.log.push(OpRecord { label: op.to_string(), op: Some(op), point: got, exponents: mono.exponents() });
        Ok(())
    }

    /// Replaces the two middle horizontals of column `region` (1-based, left to
    /// right) by the `z` verticals between them.
    pub fn apply_swap(&mut self, region: usize) -> Result<(), ConstructError> {
        if self.processed > 0 || self.descents > 0 || self.traversals > 0 {
            return Err(ConstructError::WrongPhase { op: "swap", after: "descent or traversal" });
        }
        let columns = self.graph.column_links();
        if region == 0 || region > columns.len() {
            return Err(ConstructError::NoSuchRegion { region, columns: columns.len() });
        }
        if self.swapped.contains(&region) {
            return Err(ConstructError::AlreadySwapped(region));
        }
        let k = columns[region - 1];
        let op = RewriteOp::Swap(region);
        if !self.is_free_horizontal(k - 1) || !self.is_free_horizontal(k) {
            return Err(Self::shape_error(op, "column tiles do not hold their horizontals"));
        }
        self.rewrite(op, &[k], &[], &[(k - 1, Fill::Forced), (k, Fill::Forced)])?;
        self.swapped.insert(region);
        Ok(())
    }

    /// Moves to the left-most point of the next diagonal down. The operation is
    /// read off the snake: the alternating right/up stretch after the frontier.
    pub fn apply_descent(&mut self) -> Result<RewriteOp, ConstructError> {
        if self.traversals > 0 {
            return Err(ConstructError::WrongPhase { op: "descent", after: "traversal" });
        }
        let needed = self.graph.column_links().len();
        if self.swapped.len() != needed {
            return Err(ConstructError::SwapsIncomplete { applied: self.swapped.len(), needed });
        }
        let rho = self.graph.rho();
        if self.descents as u64 >= rho.b() - rho.a() {
            return Err(ConstructError::DescentExhausted);
        }
        let n = self.n();
        let first = self.processed == 0;
        let start = if first { 1 } else { self.processed };
        if start >= n || self.graph.link_dir(start) != Dir::Right {
            return Err(Self::shape_error("descent", "no flat link after the frontier"));
        }
        let mut end = start;
        let mut ups = Vec::new();
        while end + 2 < n && self.graph.link_dir(end + 1) == Dir::Up {
            ups.push(end + 1);
            end += 2;
        }
        let rights: Vec<usize> = (start..=end).step_by(2).collect();
        let op = RewriteOp::descent(first, ups.len());

        let expected = self.runs.runs()[self.descents];
        if expected != ups.len() as u64 {
            return Err(ConstructError::WordMismatch { descent: self.descents + 1, expected, found: ups.len() });
        }

        let tiles: Vec<(usize, Fill)> = (start - 1..=end).map(|k| (k, Fill::Forced)).collect();
        self.rewrite(op, &rights, &ups, &tiles)?;
        self.processed = end + 1;
        self.descents += 1;
        self.advance_word();
        Ok(op)
    }

    /// Skips one `A` and the `B`-run after it.
    fn advance_word(&mut self) {
        let l = self.word.letters();
        if self.word_pos < l.len() && l[self.word_pos] == ModLetter::A {
            self.word_pos += 1;
        }
        while self.word_pos < l.len() && l[self.word_pos] == ModLetter::B {
            self.word_pos += 1;
        }
    }

    /// Moves one step along the current diagonal, `(+1, -1)`.
    pub fn apply_traversal(&mut self) -> Result<RewriteOp, ConstructError> {
        let n = self.n();
        if self.point.j() < 1 || self.processed >= n {
            return Err(ConstructError::EndOfDiagonal(self.point));
        }
        let op = if self.processed == 0 {
            if !self.is_free_horizontal(0) {
                return Err(Self::shape_error(RewriteOp::FirstBoxSwap, "first tile is not free"));
            }
            self.rewrite(RewriteOp::FirstBoxSwap, &[], &[], &[(0, Fill::Verticals)])?;
            self.processed = 1;
            RewriteOp::FirstBoxSwap
        } else {
            let p = self.processed - 1;
            let q = self.processed;
            let column_ahead = self.graph.link_dir(q) == Dir::Right
                && q + 1 < n
                && self.graph.link_dir(q + 1) == Dir::Up
                && self.link_in(q + 1);
            if column_ahead {
                let tiles = [(p, Fill::Forced), (q, Fill::Forced), (q + 1, Fill::Verticals)];
                self.rewrite(RewriteOp::PullBack, &[q], &[q + 1], &tiles)?;
                self.processed = q + 2;
                RewriteOp::PullBack
            } else if self.is_free_horizontal(q) {
                self.rewrite(RewriteOp::Twist, &[], &[], &[(q, Fill::Verticals)])?;
                self.processed = q + 1;
                RewriteOp::Twist
            } else {
                return Err(Self::shape_error(
                    "traversal",
                    format!("labeled tile {q} is neither free nor a swapped column"),
                ));
            }
        };
        self.traversals += 1;
        Ok(op)
    }
}

/// Result of the driver for one lattice point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub rho: RationalIndex,
    pub target: LatticePoint,
    pub matching: Matching,
    pub log: Vec<OpRecord>,
}

impl Construction {
    pub fn op_labels(&self) -> Vec<String> {
        self.log.iter().map(|r| r.label.clone()).collect()
    }
}

/// Runs swaps and descents down to the left-most point of diagonal `c`.
fn to_leftmost(g: &SnakeGraph, c: i64) -> Result<ConstructionState<'_>, ConstructError> {
    let rho = g.rho();
    let (a, b) = (rho.a() as i64, rho.b() as i64);
    let mut state = ConstructionState::initial_matching(g);
    let swaps = (a + b - 1 - c).min(a - 1);
    for q in 1..=swaps {
        state.apply_swap(q as usize)?;
    }
    for _ in c..b {
        state.apply_descent()?;
    }
    Ok(state)
}

/// A perfect matching whose monomial maps to `target`, built by the driver on `g`.
pub fn match_for_point_in(g: &SnakeGraph, target: LatticePoint) -> Result<Construction, ConstructError> {
    let rho = g.rho();
    if !contains(rho, target) {
        return Err(ConstructError::PointOutsidePolygon(target));
    }
    let mut state = to_leftmost(g, target.diagonal())?;
    while state.point() != target {
        if state.point().i() > target.i() {
            return Err(ConstructError::EndOfDiagonal(state.point()));
        }
        state.apply_traversal()?;
    }
    Ok(Construction { rho, target, log: state.log.clone(), matching: state.into_matching() })
}

pub fn match_for_point(rho: RationalIndex, target: LatticePoint) -> Result<Construction, ConstructError> {
    match_for_point_in(&build_snake(rho), target)
}

/// Every point of diagonal `c`, left to right, from a single driver run.
/// Entry `n` is identical to `match_for_point_in` on that point.
pub fn walk_diagonal(g: &SnakeGraph, c: i64) -> Result<Vec<Construction>, ConstructError> {
    let rho = g.rho();
    if c < rho.a() as i64 || c > rho.degree() as i64 {
        return Err(ConstructError::PointOutsidePolygon(LatticePoint(0, c)));
    }
    let mut state = to_leftmost(g, c)?;
    let snapshot = |s: &ConstructionState<'_>| Construction {
        rho,
        target: s.point(),
        matching: s.matching().clone(),
        log: s.log().to_vec(),
    };
    let mut out = vec![snapshot(&state)];
    while state.point().j() > 0 {
        state.apply_traversal()?;
        out.push(snapshot(&state));
    }
    Ok(out)
}

/// JSON for `match --json`.
#[derive(Debug, Clone, Serialize)]
pub struct MatchJson {
    pub point: LatticePoint,
    pub monomial: MonomialJson,
    pub edges: Vec<MatchEdgeJson>,
    pub ops: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonomialJson {
    pub ex: i64,
    pub ey: i64,
    pub ez: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchEdgeJson {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub w: String,
}

pub fn match_json(g: &SnakeGraph, c: &Construction) -> MatchJson {
    let e = c.log.last().map(|r| r.exponents).unwrap_or_default();
    MatchJson {
        point: c.target,
        monomial: MonomialJson { ex: e[0], ey: e[1], ez: e[2] },
        edges: c
            .matching
            .edges()
            .iter()
            .map(|k| MatchEdgeJson {
                from: [k.from.0, k.from.1],
                to: [k.to.0, k.to.1],
                w: g.weight(k).map(|w| w.name()).unwrap_or("?").to_string(),
            })
            .collect(),
        ops: c.op_labels(),
    }
}
