//! The Newton polygon `{i, j >= 0, b*i + a*j >= a*b, i + j <= a + b - 1}`.
//!
//! Integer arithmetic only. Diagonals are the lines `i + j = c`; a diagonal is
//! full when `(0, c)` is inside the polygon (`c >= b`), partial otherwise.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructor::RewriteOp;
use crate::words::{word_data, RationalIndex};

/// Lattice point `(i, j)`: the exponent of `u` and of `v` in the numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub i64, pub i64);

impl LatticePoint {
    pub fn i(&self) -> i64 {
        self.0
    }

    pub fn j(&self) -> i64 {
        self.1
    }

    pub fn diagonal(&self) -> i64 {
        self.0 + self.1
    }

    pub fn shifted(&self, (di, dj): (i64, i64)) -> LatticePoint {
        LatticePoint(self.0 + di, self.1 + dj)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [i, j] = <[i64; 2]>::deserialize(d)?;
        Ok(LatticePoint(i, j))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("no diagonal i + j = {c} in the polygon of {rho}")]
    NoSuchDiagonal { rho: RationalIndex, c: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub a: i64,
    pub b: i64,
    /// Corners `(a,0), (a+b-1,0), (0,a+b-1), (0,b)` with repeats removed.
    pub vertices: Vec<LatticePoint>,
}

impl NewtonPolygon {
    pub fn new(rho: RationalIndex) -> Self {
        let (a, b) = (rho.a() as i64, rho.b() as i64);
        let d = a + b - 1;
        let mut vertices: Vec<LatticePoint> = Vec::new();
        for p in [LatticePoint(a, 0), LatticePoint(d, 0), LatticePoint(0, d), LatticePoint(0, b)] {
            if !vertices.contains(&p) {
                vertices.push(p);
            }
        }
        NewtonPolygon { a, b, vertices }
    }
}

pub fn contains(rho: RationalIndex, p: LatticePoint) -> bool {
    let (a, b) = (rho.a() as i64, rho.b() as i64);
    let LatticePoint(i, j) = p;
    i >= 0 && j >= 0 && b * i + a * j >= a * b && i + j < a + b
}

pub fn lattice_points(rho: RationalIndex) -> BTreeSet<LatticePoint> {
    let d = rho.degree() as i64;
    (0..=d).flat_map(|i| (0..=d).map(move |j| LatticePoint(i, j))).filter(|&p| contains(rho, p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagonalKind {
    Full,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiagonalInfo {
    pub c: i64,
    pub kind: DiagonalKind,
    pub leftmost: LatticePoint,
}

fn check_diagonal(rho: RationalIndex, c: i64) -> Result<(), NewtonError> {
    if c < rho.a() as i64 || c > rho.degree() as i64 {
        return Err(NewtonError::NoSuchDiagonal { rho, c });
    }
    Ok(())
}

/// Kind of diagonal `c` and its left-most point, found by scanning `i` upward.
pub fn classify_diagonal(rho: RationalIndex, c: i64) -> Result<DiagonalInfo, NewtonError> {
    check_diagonal(rho, c)?;
    let kind = if c >= rho.b() as i64 { DiagonalKind::Full } else { DiagonalKind::Partial };
    let leftmost =
        (0..=c).map(|i| LatticePoint(i, c - i)).find(|&p| contains(rho, p)).expect("(c, 0) is inside for c >= a");
    Ok(DiagonalInfo { c, kind, leftmost })
}

/// Left-most point of diagonal `c` from the run profile, by composing the
/// lattice shifts of the descent operations starting at `(0, b)`.
pub fn leftmost_by_formula(rho: RationalIndex, c: i64) -> Result<LatticePoint, NewtonError> {
    check_diagonal(rho, c)?;
    let b = rho.b() as i64;
    if c >= b {
        return Ok(LatticePoint(0, c));
    }
    let (_, _, runs) = word_data(rho);
    let mut p = LatticePoint(0, b);
    for (n, &r) in runs.runs().iter().take((b - c) as usize).enumerate() {
        p = p.shifted(RewriteOp::descent(n == 0, r as usize).shift());
    }
    Ok(p)
}

/// The open region `i < a, j < b, i/a + j/b > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriticalTriangle {
    a: i64,
    b: i64,
}

impl CriticalTriangle {
    pub fn contains(&self, p: LatticePoint) -> bool {
        let LatticePoint(i, j) = p;
        i < self.a && j < self.b && self.b * i + self.a * j > self.a * self.b
    }
}

pub fn critical_triangle(rho: RationalIndex) -> CriticalTriangle {
    CriticalTriangle { a: rho.a() as i64, b: rho.b() as i64 }
}

/// Machine form for `newton --json`.
#[derive(Debug, Clone, Serialize)]
pub struct NewtonJson {
    pub rho: String,
    pub vertices: Vec<LatticePoint>,
    pub lattice_points: Vec<LatticePoint>,
    pub diagonals: Vec<DiagonalInfo>,
}

pub fn newton_json(rho: RationalIndex) -> NewtonJson {
    let poly = NewtonPolygon::new(rho);
    NewtonJson {
        rho: rho.to_string(),
        vertices: poly.vertices,
        lattice_points: lattice_points(rho).into_iter().collect(),
        diagonals: (rho.a() as i64..=rho.degree() as i64)
            .rev()
            .map(|c| classify_diagonal(rho, c).expect("in range"))
            .collect(),
    }
}
