//! Helpers shared by the integration tests and the acceptance harness.

#![allow(dead_code)]

use markov_snake::constructor::walk_diagonal;
use markov_snake::matchings::{is_perfect, lattice_point, matching_monomial, numerator_dp};
use markov_snake::newton::lattice_points;
use markov_snake::snake::build_snake;
use markov_snake::words::RationalIndex;
use num_traits::Signed;

/// Counts, degree and positivity of the numerator, and for every diagonal a
/// full driver walk in which each logged operation moves the lattice point by
/// its declared shift. Returns the number of operations checked.
pub fn check_structure(rho: RationalIndex) -> Result<usize, String> {
    let (a, b) = (rho.a() as i64, rho.b() as i64);
    let g = build_snake(rho);
    let expect = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{rho}: {what}")) };
    expect(g.num_tiles() as i64 == 2 * (a + b) - 3, "tile count")?;
    expect(g.num_labeled() as i64 == a + b - 1, "labeled tile count")?;
    expect(g.up_runs().len() as i64 == a - 1, "up-run count")?;

    let num = numerator_dp(&g);
    expect(num.poly().homogeneous_degree() == Some(a + b - 1), "numerator degree")?;
    expect(num.poly().terms().all(|(_, c)| c.is_positive()), "coefficient signs")?;

    let lattice = lattice_points(rho);
    let mut ops = 0;
    for c in a..=a + b - 1 {
        let walk = walk_diagonal(&g, c).map_err(|e| format!("{rho}, diagonal {c}: {e}"))?;
        let reached: Vec<_> = walk.iter().map(|w| w.target).collect();
        let on_diag: Vec<_> = lattice.iter().copied().filter(|p| p.diagonal() == c).collect();
        expect(reached == on_diag, &format!("diagonal {c} visits {reached:?}"))?;
        for w in &walk {
            let perfect = is_perfect(&g, &w.matching).map_err(|e| e.to_string())?;
            expect(perfect, &format!("matching at {} is not perfect", w.target))?;
            let m = matching_monomial(&g, &w.matching).map_err(|e| e.to_string())?;
            expect(lattice_point(&m).ok() == Some(w.target), &format!("monomial at {}", w.target))?;
        }
        let log = &walk.last().expect("diagonal is non-empty").log;
        for pair in log.windows(2) {
            let op = pair[1].op.ok_or_else(|| format!("{rho}: unlabelled operation"))?;
            let moved = pair[0].point.shifted(op.shift());
            expect(moved == pair[1].point, &format!("{op} moved to {} not {moved}", pair[1].point))?;
            let m = markov_snake::poly::Monomial::new(pair[1].exponents, 1);
            expect(lattice_point(&m).ok() == Some(pair[1].point), &format!("{op} monomial"))?;
            ops += 1;
        }
    }
    Ok(ops)
}
