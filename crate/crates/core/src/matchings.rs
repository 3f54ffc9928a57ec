//! Perfect matchings of a snake graph and the numerator polynomial.
//!
//! Two independent routes produce the numerator: exhaustive enumeration by
//! backtracking over uncovered vertices, and a tile-by-tile transfer DP whose
//! state is which vertices of the shared edge with the next tile are already
//! covered.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::newton::LatticePoint;
use crate::poly::{Monomial, TriPoly};
use crate::snake::{EdgeKey, SnakeGraph, Vertex};
use crate::words::RationalIndex;

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("edge {0} is not in the snake graph")]
    UnknownEdge(EdgeKey),
    #[error("edge set is not a perfect matching")]
    NotPerfect,
    #[error("enumeration cap exceeded after {0} matchings")]
    CapExceeded(usize),
    #[error("monomial {0} has an odd exponent")]
    OddExponent(Monomial),
}

/// A set of edges of one snake graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Matching {
    edges: BTreeSet<EdgeKey>,
}

impl Matching {
    pub fn new() -> Self {
        Matching::default()
    }

    pub fn from_edges<I: IntoIterator<Item = EdgeKey>>(edges: I) -> Self {
        Matching { edges: edges.into_iter().collect() }
    }

    pub fn edges(&self) -> &BTreeSet<EdgeKey> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &EdgeKey) -> bool {
        self.edges.contains(e)
    }

    pub fn insert(&mut self, e: EdgeKey) -> bool {
        self.edges.insert(e)
    }

    pub fn remove(&mut self, e: &EdgeKey) -> bool {
        self.edges.remove(e)
    }
}

pub fn is_perfect(g: &SnakeGraph, m: &Matching) -> Result<bool, MatchError> {
    let mut covered: BTreeSet<Vertex> = BTreeSet::new();
    let mut ok = true;
    for e in m.edges() {
        if g.weight(e).is_none() {
            return Err(MatchError::UnknownEdge(*e));
        }
        for v in e.endpoints() {
            ok &= covered.insert(v);
        }
    }
    Ok(ok && covered.len() == 2 * g.num_tiles() + 2)
}

/// Product of the edge weights, coefficient 1.
pub fn matching_monomial(g: &SnakeGraph, m: &Matching) -> Result<Monomial, MatchError> {
    if !is_perfect(g, m)? {
        return Err(MatchError::NotPerfect);
    }
    Ok(weight_monomial(g, m))
}

fn weight_monomial(g: &SnakeGraph, m: &Matching) -> Monomial {
    let mut e = [0i64; 3];
    for k in m.edges() {
        e[g.weight(k).expect("edge of g").var().index()] += 1;
    }
    Monomial::new(e, 1)
}

/// Halves the exponents `(2i, 2j, 2k)` of a matching monomial to `(i, j)`.
pub fn lattice_point(mono: &Monomial) -> Result<LatticePoint, MatchError> {
    if mono.exponents().iter().any(|e| e % 2 != 0) {
        return Err(MatchError::OddExponent(mono.clone()));
    }
    Ok(LatticePoint(mono.ex / 2, mono.ey / 2))
}

/// All perfect matchings in a deterministic order. Stops with
/// [`MatchError::CapExceeded`] as soon as more than `cap` exist.
pub fn enumerate_matchings(g: &SnakeGraph, cap: usize) -> Result<Vec<Matching>, MatchError> {
    // Vertex order: first appearance while sweeping tiles left to right.
    let mut order: Vec<Vertex> = Vec::new();
    let mut index: BTreeMap<Vertex, usize> = BTreeMap::new();
    for t in 1..=g.num_tiles() {
        for e in g.tile_edges(t).expect("tile in range") {
            for v in e.key.endpoints() {
                if let std::collections::btree_map::Entry::Vacant(slot) = index.entry(v) {
                    slot.insert(order.len());
                    order.push(v);
                }
            }
        }
    }
    let mut adj: Vec<Vec<(usize, EdgeKey)>> = vec![Vec::new(); order.len()];
    for e in g.edges().keys() {
        let (p, q) = (index[&e.from], index[&e.to]);
        adj[p].push((q, *e));
        adj[q].push((p, *e));
    }
    for list in &mut adj {
        list.sort();
    }

    struct Search<'a> {
        adj: &'a [Vec<(usize, EdgeKey)>],
        covered: Vec<bool>,
        stack: Vec<EdgeKey>,
        out: Vec<Matching>,
        cap: usize,
    }

    impl Search<'_> {
        fn run(&mut self, from: usize) -> Result<(), MatchError> {
            let Some(v) = (from..self.covered.len()).find(|&v| !self.covered[v]) else {
                if self.out.len() == self.cap {
                    return Err(MatchError::CapExceeded(self.out.len()));
                }
                self.out.push(Matching::from_edges(self.stack.iter().copied()));
                return Ok(());
            };
            self.covered[v] = true;
            for i in 0..self.adj[v].len() {
                let (w, e) = self.adj[v][i];
                if self.covered[w] {
                    continue;
                }
                self.covered[w] = true;
                self.stack.push(e);
                let r = self.run(v + 1);
                self.stack.pop();
                self.covered[w] = false;
                r?;
            }
            self.covered[v] = false;
            Ok(())
        }
    }

    let mut s = Search { adj: &adj, covered: vec![false; order.len()], stack: Vec::new(), out: Vec::new(), cap };
    s.run(0)?;
    Ok(s.out)
}

/// Sum of the weight monomials of `matchings`, in the original `x, y, z`.
pub fn sum_of_monomials(g: &SnakeGraph, matchings: &[Matching]) -> TriPoly {
    TriPoly::from_terms(matchings.iter().map(|m| (weight_monomial(g, m).exponents(), 1)))
}

/// Numerator `P(u, v, w)` with `u = x^2, v = y^2, w = z^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeratorPoly {
    rho: RationalIndex,
    poly: TriPoly,
}

impl NumeratorPoly {
    /// Converts a polynomial in `x, y, z` with even exponents to squared variables.
    pub fn from_weight_poly(rho: RationalIndex, p: &TriPoly) -> Result<Self, MatchError> {
        for m in p.monomials() {
            if m.exponents().iter().any(|e| e % 2 != 0) {
                return Err(MatchError::OddExponent(m));
            }
        }
        Ok(NumeratorPoly { rho, poly: p.map_exponents(|e| [e[0] / 2, e[1] / 2, e[2] / 2]) })
    }

    /// Wraps a polynomial already written in `u, v, w`.
    pub fn from_numerator(rho: RationalIndex, poly: TriPoly) -> Self {
        NumeratorPoly { rho, poly }
    }

    pub fn rho(&self) -> RationalIndex {
        self.rho
    }

    /// Terms in `(i, j, k)` exponents of `u, v, w`.
    pub fn poly(&self) -> &TriPoly {
        &self.poly
    }

    pub fn degree(&self) -> u64 {
        self.rho.degree()
    }

    /// `A_ij`, the coefficient of `u^i v^j w^(deg - i - j)`.
    pub fn coeff(&self, i: i64, j: i64) -> BigInt {
        self.poly.coeff([i, j, self.degree() as i64 - i - j])
    }

    pub fn support(&self) -> BTreeSet<LatticePoint> {
        self.poly.terms().map(|(e, _)| LatticePoint(e[0], e[1])).collect()
    }

    /// Value at `u = v = w = 1`, the number of perfect matchings.
    pub fn count(&self) -> BigInt {
        self.poly.terms().fold(BigInt::zero(), |acc, (_, c)| acc + c)
    }

    /// Back to `x, y, z` exponents.
    pub fn weight_poly(&self) -> TriPoly {
        self.poly.map_exponents(|e| [2 * e[0], 2 * e[1], 2 * e[2]])
    }

    pub fn to_json(&self) -> NumeratorJson {
        NumeratorJson {
            rho: self.rho.to_string(),
            deg: self.degree(),
            terms: self
                .poly
                .terms()
                .map(|(e, c)| NumeratorTerm { i: e[0], j: e[1], k: e[2], c: c.to_string() })
                .collect(),
        }
    }
}

/// `{"rho":"a/b","deg":a+b-1,"terms":[{"i":..,"j":..,"k":..,"c":".."}]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumeratorJson {
    pub rho: String,
    pub deg: u64,
    pub terms: Vec<NumeratorTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumeratorTerm {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub c: String,
}

/// Numerator from the enumerated matchings.
pub fn numerator_by_enumeration(g: &SnakeGraph, cap: usize) -> Result<NumeratorPoly, MatchError> {
    let ms = enumerate_matchings(g, cap)?;
    NumeratorPoly::from_weight_poly(g.rho(), &sum_of_monomials(g, &ms))
}

/// Numerator by the transfer DP over tiles.
pub fn numerator_dp(g: &SnakeGraph) -> NumeratorPoly {
    let p = weighted_matching_sum(g);
    NumeratorPoly::from_weight_poly(g.rho(), &p).expect("snake matchings have even exponents")
}

/// Sum over perfect matchings of the weight monomials, without enumeration.
pub fn weighted_matching_sum(g: &SnakeGraph) -> TriPoly {
    let t_count = g.num_tiles();
    let corners = |t: usize| -> BTreeSet<Vertex> {
        g.tile_edges(t).expect("tile in range").iter().flat_map(|e| e.key.endpoints()).collect()
    };

    let mut seen_edges: BTreeSet<EdgeKey> = BTreeSet::new();
    // Covered vertices of the frontier (shared edge with the next tile) -> weighted sum.
    let mut states: BTreeMap<Vec<Vertex>, TriPoly> = BTreeMap::from([(Vec::new(), TriPoly::one())]);
    let one = BigInt::one();

    for t in 1..=t_count {
        let verts = corners(t);
        let next: BTreeSet<Vertex> = if t < t_count { &verts & &corners(t + 1) } else { BTreeSet::new() };
        let owned: Vec<(EdgeKey, usize)> = g
            .tile_edges(t)
            .expect("tile in range")
            .iter()
            .filter(|e| seen_edges.insert(e.key))
            .map(|e| (e.key, e.weight.var().index()))
            .collect();

        let mut next_states: BTreeMap<Vec<Vertex>, TriPoly> = BTreeMap::new();
        for (covered, poly) in &states {
            'subsets: for mask in 0u32..(1 << owned.len()) {
                let mut cov: BTreeSet<Vertex> = covered.iter().copied().collect();
                let mut exps = [0i64; 3];
                for (bit, (e, var)) in owned.iter().enumerate() {
                    if mask & (1 << bit) == 0 {
                        continue;
                    }
                    for v in e.endpoints() {
                        if !cov.insert(v) {
                            continue 'subsets;
                        }
                    }
                    exps[*var] += 1;
                }
                // Vertices that never appear again must be covered now.
                if verts.iter().any(|v| !next.contains(v) && !cov.contains(v)) {
                    continue;
                }
                let key: Vec<Vertex> = cov.intersection(&next).copied().collect();
                let term = poly.mul_monomial(exps, &one);
                let slot = next_states.entry(key).or_default();
                *slot = &*slot + &term;
            }
        }
        states = next_states;
    }
    states.remove(&Vec::new()).unwrap_or_default()
}
