//! Markov polynomials by Vieta mutation along the Stern–Brocot tree.
//!
//! Seeds: `0/1 -> x`, `1/1 -> (x^2 + y^2)/z`, and `y` as the divisor for the
//! first mediant. The mediant of Farey neighbours `l`, `r` with divisor `o` is
//! `(P_l^2 + P_r^2) / P_o`. Going left the divisor becomes `P_r`, going right
//! it becomes `P_l`. Every division must be exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matchings::{numerator_dp, NumeratorPoly};
use crate::poly::{PolyError, TriPoly};
use crate::snake::build_snake;
use crate::words::RationalIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("cleared Laurent polynomial is not a numerator: {0}")]
    NotNumerator(String),
}

/// A pair of Farey neighbours with their polynomials and the divisor for
/// their mediant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyFrame {
    pub left: (u64, u64),
    pub right: (u64, u64),
    pub pleft: TriPoly,
    pub pright: TriPoly,
    pub pother: TriPoly,
}

/// `(x^2 + y^2) / z`.
pub fn seed_one() -> TriPoly {
    TriPoly::from_terms([([2, 0, -1], 1), ([0, 2, -1], 1)])
}

impl FareyFrame {
    pub fn root() -> Self {
        FareyFrame { left: (0, 1), right: (1, 1), pleft: TriPoly::x(), pright: seed_one(), pother: TriPoly::y() }
    }

    pub fn mediant(&self) -> (u64, u64) {
        (self.left.0 + self.right.0, self.left.1 + self.right.1)
    }

    pub fn is_farey_pair(&self) -> bool {
        let (p, q) = self.left;
        let (r, s) = self.right;
        (p * s).abs_diff(r * q) == 1
    }

    pub fn mediant_poly(&self) -> Result<TriPoly, PolyError> {
        (&self.pleft.square() + &self.pright.square()).exact_div(&self.pother)
    }

    /// Frames for `[left, mediant]` and `[mediant, right]`.
    pub fn children(&self, pm: &TriPoly) -> (FareyFrame, FareyFrame) {
        let m = self.mediant();
        let left = FareyFrame {
            left: self.left,
            right: m,
            pleft: self.pleft.clone(),
            pright: pm.clone(),
            pother: self.pright.clone(),
        };
        let right = FareyFrame {
            left: m,
            right: self.right,
            pleft: pm.clone(),
            pright: self.pright.clone(),
            pother: self.pleft.clone(),
        };
        (left, right)
    }
}

/// The frame whose mediant is `rho` together with the mediant polynomial;
/// `None` for `1/1`, which is a seed.
fn frame_of(rho: RationalIndex) -> Result<Option<(FareyFrame, TriPoly)>, PolyError> {
    let target = (rho.a(), rho.b());
    let mut frame = FareyFrame::root();
    if target == frame.right {
        return Ok(None);
    }
    loop {
        let m = frame.mediant();
        let pm = frame.mediant_poly()?;
        if m == target {
            return Ok(Some((frame, pm)));
        }
        let (l, r) = frame.children(&pm);
        // a/b < m.0/m.1
        frame = if (target.0 as u128) * (m.1 as u128) < (m.0 as u128) * (target.1 as u128) { l } else { r };
    }
}

/// `M_rho` as a Laurent polynomial, by descending the Stern–Brocot tree.
pub fn mutation_polynomial(rho: RationalIndex) -> Result<TriPoly, PolyError> {
    Ok(match frame_of(rho)? {
        Some((_, pm)) => pm,
        None => seed_one(),
    })
}

/// `(P_left, M_rho, P_right)`, the triple in which `M_rho` first appears.
/// For `1/1` this is `(x, M_1/1, y)`.
pub fn markov_triple(rho: RationalIndex) -> Result<[TriPoly; 3], PolyError> {
    Ok(match frame_of(rho)? {
        Some((f, pm)) => [f.pleft, pm, f.pright],
        None => [TriPoly::x(), seed_one(), TriPoly::y()],
    })
}

/// The numerator obtained from `M_rho` by clearing the denominator.
pub fn numerator_by_mutation(rho: RationalIndex) -> Result<NumeratorPoly, OracleError> {
    let m = mutation_polynomial(rho)?;
    Ok(NumeratorPoly::from_numerator(rho, laurent_to_numerator(rho, &m)?))
}

/// A Markov triple of polynomials and where it came from.
#[derive(Debug, Clone)]
pub struct PolyTriple {
    pub label: String,
    pub polys: [TriPoly; 3],
}

/// The base triple `(x, y, z)`, the root frame, and every
/// `(P_left, P_mediant, P_right)` whose mediant lies at depth `1..=depth`.
pub fn farey_triples(depth: usize) -> Result<Vec<PolyTriple>, PolyError> {
    let root = FareyFrame::root();
    let mut out = vec![
        PolyTriple { label: "base".into(), polys: [TriPoly::x(), TriPoly::y(), TriPoly::z()] },
        PolyTriple {
            label: "0/1,1/0,1/1".into(),
            polys: [root.pleft.clone(), root.pother.clone(), root.pright.clone()],
        },
    ];
    let mut level = vec![root];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for f in &level {
            let pm = f.mediant_poly()?;
            let m = f.mediant();
            out.push(PolyTriple {
                label: format!("{}/{},{}/{},{}/{}", f.left.0, f.left.1, m.0, m.1, f.right.0, f.right.1),
                polys: [f.pleft.clone(), pm.clone(), f.pright.clone()],
            });
            let (l, r) = f.children(&pm);
            next.push(l);
            next.push(r);
        }
        level = next;
    }
    Ok(out)
}

/// `xyz (X^2 + Y^2 + Z^2) == (x^2 + y^2 + z^2) X Y Z`.
pub fn verify_markov_identity(x: &TriPoly, y: &TriPoly, z: &TriPoly) -> bool {
    let xyz = TriPoly::monomial([1, 1, 1], 1);
    let k_num = TriPoly::from_terms([([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1)]);
    let lhs = &xyz * &(&(&x.square() + &y.square()) + &z.square());
    let rhs = &(&k_num * &(x * y)) * z;
    lhs == rhs
}

/// Number of perfect matchings of the snake, from the DP numerator.
pub fn markov_number(rho: RationalIndex) -> BigInt {
    numerator_dp(&build_snake(rho)).count()
}

/// The integer Vieta recurrence on Markov numbers, seeded `1, 2` with divisor `1`.
pub fn markov_number_vieta(rho: RationalIndex) -> BigInt {
    let target = (rho.a(), rho.b());
    let (mut l, mut r) = ((0u64, 1u64), (1u64, 1u64));
    let (mut ml, mut mr, mut mo) = (BigInt::one(), BigInt::from(2), BigInt::one());
    if target == r {
        return mr;
    }
    loop {
        let m = (l.0 + r.0, l.1 + r.1);
        let (q, rem) = (&ml * &ml + &mr * &mr).div_rem(&mo);
        assert!(rem.is_zero(), "Markov recurrence must divide exactly");
        if m == target {
            return q;
        }
        if (target.0 as u128) * (m.1 as u128) < (m.0 as u128) * (target.1 as u128) {
            mo = std::mem::replace(&mut mr, q);
            r = m;
        } else {
            mo = std::mem::replace(&mut ml, q);
            l = m;
        }
    }
}

/// `M * x^(a-1) y^(b-1) z^(a+b-1)` in squared variables.
pub fn laurent_to_numerator(rho: RationalIndex, m: &TriPoly) -> Result<TriPoly, OracleError> {
    let (a, b) = (rho.a() as i64, rho.b() as i64);
    let cleared = m.shift([a - 1, b - 1, a + b - 1]);
    for (e, _) in cleared.terms() {
        if e.iter().any(|&v| v < 0 || v % 2 != 0) {
            return Err(OracleError::NotNumerator(format!("term with exponents {e:?}")));
        }
    }
    Ok(cleared.map_exponents(|e| [e[0] / 2, e[1] / 2, e[2] / 2]))
}

/// `P(x^2, y^2, z^2) / (x^(a-1) y^(b-1) z^(a+b-1))`.
pub fn numerator_to_laurent(num: &NumeratorPoly) -> TriPoly {
    let rho = num.rho();
    let (a, b) = (rho.a() as i64, rho.b() as i64);
    num.weight_poly().shift([1 - a, 1 - b, 1 - a - b])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(a: u64, b: u64) -> RationalIndex {
        RationalIndex::new(a, b).unwrap()
    }

    #[test]
    fn seeds_and_first_mediant() {
        assert_eq!(mutation_polynomial(rho(1, 1)).unwrap(), seed_one());
        let expected = TriPoly::from_terms([([4, -1, -2], 1), ([2, 1, -2], 2), ([0, 3, -2], 1), ([2, -1, 0], 1)]);
        assert_eq!(mutation_polynomial(rho(1, 2)).unwrap(), expected);
    }

    #[test]
    fn two_thirds_counts_29() {
        let p = mutation_polynomial(rho(2, 3)).unwrap();
        assert_eq!(p.eval_ints(1, 1, 1).unwrap(), BigInt::from(29).into());
    }

    #[test]
    fn identity_examples() {
        assert!(verify_markov_identity(&TriPoly::x(), &TriPoly::y(), &TriPoly::z()));
        assert!(verify_markov_identity(&TriPoly::x(), &seed_one(), &TriPoly::y()));
        let z1 = &TriPoly::z() + &TriPoly::one();
        assert!(!verify_markov_identity(&TriPoly::x(), &TriPoly::y(), &z1));
    }

    #[test]
    fn markov_numbers() {
        for (a, b, m) in [(1, 1, 2), (1, 2, 5), (1, 3, 13), (2, 3, 29), (3, 5, 433), (1, 4, 34)] {
            assert_eq!(markov_number_vieta(rho(a, b)), BigInt::from(m));
            assert_eq!(markov_number(rho(a, b)), BigInt::from(m));
        }
    }

    #[test]
    fn frames_are_farey() {
        let mut level = vec![FareyFrame::root()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for f in &level {
                assert!(f.is_farey_pair());
                let (l, r) = f.children(&f.mediant_poly().unwrap());
                next.extend([l, r]);
            }
            level = next;
        }
    }

    #[test]
    fn triples_satisfy_identity() {
        for r in RationalIndex::all_up_to(9) {
            let [p, m, q] = markov_triple(r).unwrap();
            assert!(verify_markov_identity(&p, &m, &q), "{r}");
        }
    }

    #[test]
    fn clearing_denominator() {
        let r = rho(1, 2);
        let m = mutation_polynomial(r).unwrap();
        let num = laurent_to_numerator(r, &m).unwrap();
        assert_eq!(num, *numerator_dp(&build_snake(r)).poly());
        assert!(laurent_to_numerator(r, &TriPoly::x()).is_err());
        assert_eq!(numerator_by_mutation(rho(4, 7)).unwrap(), numerator_dp(&build_snake(rho(4, 7))));
    }
}
