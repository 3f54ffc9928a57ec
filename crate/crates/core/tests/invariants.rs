mod common;

use markov_snake::match_for_point;
use markov_snake::newton::{lattice_points, LatticePoint};
use markov_snake::snake::build_snake;
use markov_snake::words::{word_data, Letter, ModLetter, RationalIndex};
use num_integer::Integer;
use proptest::prelude::*;

fn coprime_index(max_sum: u64) -> impl Strategy<Value = RationalIndex> {
    (1..max_sum, 1..max_sum).prop_filter_map("coprime, a <= b, a + b <= max", move |(a, b)| {
        (a <= b && a + b <= max_sum && a.gcd(&b) == 1).then(|| RationalIndex::new(a, b).unwrap())
    })
}

proptest! {
    #[test]
    fn word_counts(r in coprime_index(200)) {
        let (w, m, runs) = word_data(r);
        prop_assert_eq!(w.count(Letter::Alpha) as u64, r.b());
        prop_assert_eq!(w.count(Letter::Beta) as u64, r.a());
        prop_assert_eq!(m.count(ModLetter::A) as u64, r.b() - r.a());
        prop_assert_eq!(m.count(ModLetter::B) as u64, r.a());
        prop_assert_eq!(runs.total(), r.a() - 1);
        let interior_betas = w.interior().iter().filter(|&&l| l == Letter::Beta).count() as u64;
        prop_assert_eq!(interior_betas, r.a() - 1);
    }

    #[test]
    fn snake_vertices_and_edges(r in coprime_index(80)) {
        let g = build_snake(r);
        let t = g.num_tiles();
        // A strip of t unit squares glued along t - 1 edges.
        prop_assert_eq!(g.vertices().len(), 2 * t + 2);
        prop_assert_eq!(g.edges().len(), 3 * t + 1);
    }

    #[test]
    fn driver_hits_random_points(r in coprime_index(24), pick in any::<prop::sample::Index>()) {
        let pts: Vec<LatticePoint> = lattice_points(r).into_iter().collect();
        let p = pts[pick.index(pts.len())];
        let c = match_for_point(r, p).unwrap();
        prop_assert_eq!(c.target, p);
        prop_assert_eq!(c.log.last().unwrap().point, p);
    }
}

#[test]
fn structure_up_to_24() {
    for r in RationalIndex::all_up_to(24) {
        common::check_structure(r).unwrap();
    }
}

#[test]
fn traversal_may_cross_unswapped_columns() {
    // On 2/3 the walk along i + j = 4 starts with no swaps applied and still
    // reaches (4, 0), twisting through the column it meets.
    let r = RationalIndex::new(2, 3).unwrap();
    let c = match_for_point(r, LatticePoint(4, 0)).unwrap();
    let labels = c.op_labels();
    assert!(!labels.iter().any(|l| l.starts_with("Swap")), "{labels:?}");
    assert_eq!(c.log.last().unwrap().point, LatticePoint(4, 0));
}
