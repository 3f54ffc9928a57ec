//! The weighted Markov snake graph.
//!
//! Tiles are unit squares on the integer grid, tile 1 at the origin. The
//! interior of the Christoffel word is doubled letter by letter (`a -> RR`,
//! `b -> UU`) to give the direction from each tile to the next, so every
//! even tile is straight and the odd tiles sit on the corners of the path.
//! Odd tiles carry the weights: verticals `x`, horizontals `y`. Everything
//! else is `z`.
//!
//! The constructor works on the coarser "labeled" view: labeled tile `k`
//! (0-based) is tile `2k + 1`, and link `k` (1-based) is the even tile `2k`
//! joining labeled tiles `k - 1` and `k`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::poly::Var;
use crate::words::{christoffel_word, Letter, RationalIndex};

/// Grid point `(x, y)`.
pub type Vertex = (i64, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnakeError {
    #[error("tile index {index} out of range 1..={tiles}")]
    IndexOutOfRange { index: usize, tiles: usize },
}

/// Unit edge keyed by its endpoints, smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub from: Vertex,
    pub to: Vertex,
}

impl EdgeKey {
    pub fn new(p: Vertex, q: Vertex) -> Self {
        if p <= q {
            EdgeKey { from: p, to: q }
        } else {
            EdgeKey { from: q, to: p }
        }
    }

    pub fn is_vertical(&self) -> bool {
        self.from.0 == self.to.0
    }

    pub fn endpoints(&self) -> [Vertex; 2] {
        [self.from, self.to]
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})-({},{})", self.from.0, self.from.1, self.to.0, self.to.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Right,
    Up,
}

impl Dir {
    pub fn code(self) -> char {
        match self {
            Dir::Right => 'R',
            Dir::Up => 'U',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    X,
    Y,
    Z,
}

impl Weight {
    pub fn var(self) -> Var {
        match self {
            Weight::X => Var::X,
            Weight::Y => Var::Y,
            Weight::Z => Var::Z,
        }
    }

    pub fn name(self) -> &'static str {
        self.var().name()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Bottom => Side::Top,
            Side::Top => Side::Bottom,
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileEdge {
    pub side: Side,
    pub key: EdgeKey,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnakeGraph {
    rho: RationalIndex,
    /// Lower-left corner of each tile.
    tiles: Vec<Vertex>,
    dirs: Vec<Dir>,
    edges: BTreeMap<EdgeKey, Weight>,
}

fn side_key(corner: Vertex, side: Side) -> EdgeKey {
    let (x, y) = corner;
    match side {
        Side::Bottom => EdgeKey::new((x, y), (x + 1, y)),
        Side::Top => EdgeKey::new((x, y + 1), (x + 1, y + 1)),
        Side::Left => EdgeKey::new((x, y), (x, y + 1)),
        Side::Right => EdgeKey::new((x + 1, y), (x + 1, y + 1)),
    }
}

const SIDES: [Side; 4] = [Side::Bottom, Side::Top, Side::Left, Side::Right];

pub fn build_snake(rho: RationalIndex) -> SnakeGraph {
    let word = christoffel_word(rho);
    let dirs: Vec<Dir> = word
        .interior()
        .iter()
        .flat_map(|l| {
            let d = match l {
                Letter::Alpha => Dir::Right,
                Letter::Beta => Dir::Up,
            };
            [d, d]
        })
        .collect();

    let mut tiles = Vec::with_capacity(dirs.len() + 1);
    let mut pos = (0i64, 0i64);
    tiles.push(pos);
    for d in &dirs {
        match d {
            Dir::Right => pos.0 += 1,
            Dir::Up => pos.1 += 1,
        }
        tiles.push(pos);
    }

    let mut edges = BTreeMap::new();
    for (idx, &corner) in tiles.iter().enumerate().step_by(2) {
        for side in SIDES {
            let w = match side {
                Side::Left | Side::Right => Weight::X,
                Side::Top | Side::Bottom => Weight::Y,
            };
            let prev = edges.insert(side_key(corner, side), w);
            assert!(prev.is_none(), "labeled tile {} shares an edge with another labeled tile", idx + 1);
        }
    }
    for &corner in tiles.iter().skip(1).step_by(2) {
        for side in SIDES {
            edges.entry(side_key(corner, side)).or_insert(Weight::Z);
        }
    }

    SnakeGraph { rho, tiles, dirs, edges }
}

impl SnakeGraph {
    pub fn rho(&self) -> RationalIndex {
        self.rho
    }

    pub fn num_tiles(&self) -> usize {
        self.tiles.len()
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn dirs_string(&self) -> String {
        self.dirs.iter().map(|d| d.code()).collect()
    }

    /// Lower-left corners, tile 1 first.
    pub fn tile_corners(&self) -> &[Vertex] {
        &self.tiles
    }

    pub fn edges(&self) -> &BTreeMap<EdgeKey, Weight> {
        &self.edges
    }

    pub fn weight(&self, e: &EdgeKey) -> Option<Weight> {
        self.edges.get(e).copied()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.edges.keys().flat_map(|e| e.endpoints()).collect()
    }

    /// Tiles are 1-indexed; the odd ones carry the `x`/`y` labels.
    pub fn is_labeled(&self, t: usize) -> bool {
        t % 2 == 1
    }

    pub fn labeled_tiles(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.num_tiles()).filter(|&t| self.is_labeled(t))
    }

    pub fn tile_edges(&self, t: usize) -> Result<[TileEdge; 4], SnakeError> {
        if t == 0 || t > self.num_tiles() {
            return Err(SnakeError::IndexOutOfRange { index: t, tiles: self.num_tiles() });
        }
        let corner = self.tiles[t - 1];
        Ok(SIDES.map(|side| {
            let key = side_key(corner, side);
            TileEdge { side, key, weight: self.edges[&key] }
        }))
    }

    /// Lengths of the maximal runs of `Up` in `dirs`.
    pub fn up_runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut cur = 0;
        for d in &self.dirs {
            if *d == Dir::Up {
                cur += 1;
            } else if cur > 0 {
                runs.push(cur);
                cur = 0;
            }
        }
        if cur > 0 {
            runs.push(cur);
        }
        runs
    }

    // ---- labeled view ----

    /// Number of labeled tiles, `a + b - 1`.
    pub fn num_labeled(&self) -> usize {
        self.num_tiles().div_ceil(2)
    }

    /// Edge on `side` of labeled tile `k` (0-based).
    pub fn labeled_side(&self, k: usize, side: Side) -> EdgeKey {
        side_key(self.tiles[2 * k], side)
    }

    /// Direction of link `k` (1-based), from labeled tile `k - 1` to `k`.
    pub fn link_dir(&self, k: usize) -> Dir {
        self.dirs[2 * k - 2]
    }

    /// The two `z` edges of link `k`.
    pub fn link_edges(&self, k: usize) -> [EdgeKey; 2] {
        let corner = self.tiles[2 * k - 1];
        match self.link_dir(k) {
            Dir::Right => [side_key(corner, Side::Bottom), side_key(corner, Side::Top)],
            Dir::Up => [side_key(corner, Side::Left), side_key(corner, Side::Right)],
        }
    }

    /// Side of labeled tile `k` facing link `k` (its predecessor).
    pub fn incoming_side(&self, k: usize) -> Option<Side> {
        (k >= 1).then(|| match self.link_dir(k) {
            Dir::Right => Side::Left,
            Dir::Up => Side::Bottom,
        })
    }

    /// Side of labeled tile `k` facing link `k + 1`.
    pub fn outgoing_side(&self, k: usize) -> Option<Side> {
        (k + 1 < self.num_labeled()).then(|| match self.link_dir(k + 1) {
            Dir::Right => Side::Right,
            Dir::Up => Side::Top,
        })
    }

    /// Links going up, left to right. These are the vertical 1x3 columns.
    pub fn column_links(&self) -> Vec<usize> {
        (1..self.num_labeled()).filter(|&k| self.link_dir(k) == Dir::Up).collect()
    }

    pub fn to_json(&self) -> SnakeJson {
        SnakeJson {
            tiles: self.num_tiles(),
            dirs: self.dirs_string(),
            edges: self
                .edges
                .iter()
                .map(|(k, w)| EdgeJson { from: [k.from.0, k.from.1], to: [k.to.0, k.to.1], w: w.name().to_string() })
                .collect(),
        }
    }
}

/// `{"T":int,"dirs":"RRUU..","edges":[{"from":[x,y],"to":[x,y],"w":"x|y|z"}]}`
#[derive(Debug, Clone, Serialize)]
pub struct SnakeJson {
    #[serde(rename = "T")]
    pub tiles: usize,
    pub dirs: String,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeJson {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub w: String,
}
