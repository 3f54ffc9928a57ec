//! Byte-for-byte figure goldens. Regenerate with `UPDATE_GOLDENS=1`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use markov_snake::render::{render_newton, render_snake, RenderFormat, RenderSpec};
use markov_snake::snake::build_snake;
use markov_snake::words::RationalIndex;
use markov_snake::{match_for_point, LatticePoint};

fn rho(a: u64, b: u64) -> RationalIndex {
    RationalIndex::new(a, b).unwrap()
}

fn golden(name: &str, doc: &str) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, doc).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(want == doc, "{name} differs from its golden; rerun with UPDATE_GOLDENS=1 if intended");
}

fn attr(line: &str, name: &str) -> f64 {
    let key = format!(" {name}=\"");
    let start = line.find(&key).unwrap() + key.len();
    let end = start + line[start..].find('"').unwrap();
    line[start..end].parse().unwrap()
}

fn path_to_golden_point() -> Vec<LatticePoint> {
    let c = match_for_point(rho(4, 7), LatticePoint(4, 2)).unwrap();
    c.log.iter().map(|r| r.point).collect()
}

#[test]
fn single_square() {
    let doc = render_snake(&build_snake(rho(1, 1)), &RenderSpec::new(RenderFormat::Svg)).unwrap();
    assert_eq!(doc.matches(r#"class="tile""#).count(), 1);
    assert_eq!(doc.matches(r#"<line class="edge w-x""#).count(), 2);
    assert_eq!(doc.matches(r#"<line class="edge w-y""#).count(), 2);
    golden("snake_1_1.svg", &doc);
}

#[test]
fn three_fifths_row_column_pattern() {
    let doc = render_snake(&build_snake(rho(3, 5)), &RenderSpec::new(RenderFormat::Tikz)).unwrap();
    let corners: Vec<(i64, i64)> = doc
        .lines()
        .filter(|l| l.contains("rectangle"))
        .map(|l| {
            let inner = &l[l.find("] (").unwrap() + 3..l.find(") rectangle").unwrap()];
            let (x, y) = inner.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    assert_eq!(corners.len(), 13);
    // Lengths of straight stretches: the first counts its starting tile.
    let mut runs = vec![1];
    let mut last_dir = None;
    for w in corners.windows(2) {
        let dir = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        if Some(dir) == last_dir || last_dir.is_none() && dir == (1, 0) {
            *runs.last_mut().unwrap() += 1;
        } else {
            runs.push(1);
        }
        last_dir = Some(dir);
    }
    assert_eq!(runs, [3, 2, 4, 2, 2]);
    golden("snake_3_5.tex", &doc);
}

#[test]
fn four_sevenths_final_matching() {
    let c = match_for_point(rho(4, 7), LatticePoint(4, 2)).unwrap();
    let spec = RenderSpec::new(RenderFormat::Svg).with_highlight(c.matching.clone());
    let doc = render_snake(&build_snake(rho(4, 7)), &spec).unwrap();
    // Undo the pixel transform: 40 px per unit, 30 px margin, top row y = 7.
    let grid = |px: f64, py: f64| (((px - 30.0) / 40.0) as i64, 7 - ((py - 30.0) / 40.0) as i64);
    let lit: BTreeSet<[(i64, i64); 2]> = doc
        .lines()
        .filter(|l| l.contains("edge matched"))
        .map(|l| {
            let p = grid(attr(l, "x1"), attr(l, "y1"));
            let q = grid(attr(l, "x2"), attr(l, "y2"));
            [p.min(q), p.max(q)]
        })
        .collect();
    let figure: BTreeSet<[(i64, i64); 2]> = [
        [(0, 0), (0, 1)],
        [(1, 0), (2, 0)],
        [(1, 1), (2, 1)],
        [(3, 0), (3, 1)],
        [(2, 2), (2, 3)],
        [(3, 2), (4, 2)],
        [(3, 3), (4, 3)],
        [(5, 2), (6, 2)],
        [(5, 3), (6, 3)],
        [(7, 2), (7, 3)],
        [(6, 4), (6, 5)],
        [(7, 4), (7, 5)],
        [(8, 4), (8, 5)],
        [(9, 4), (9, 5)],
        [(10, 4), (11, 4)],
        [(10, 5), (10, 6)],
        [(11, 5), (11, 6)],
        [(10, 7), (11, 7)],
        [(12, 6), (13, 6)],
        [(12, 7), (13, 7)],
    ]
    .into_iter()
    .collect();
    assert_eq!(lit, figure);
    golden("match_4_7_at_4_2.svg", &doc);
}

#[test]
fn newton_figures() {
    let svg = RenderSpec::new(RenderFormat::Svg);
    let path = path_to_golden_point();
    let doc = render_newton(rho(4, 7), Some(&path), &svg).unwrap();
    assert_eq!(doc.matches("path-point").count(), 7);
    let last = doc.lines().rfind(|l| l.contains("path-point")).unwrap();
    // (4, 2) at 40 px per unit with a 40 px margin and j pointing up from 10.
    assert_eq!((attr(last, "cx"), attr(last, "cy")), (200.0, 360.0));
    golden("newton_4_7_path.svg", &doc);

    let doc = render_newton(rho(1, 1), None, &svg).unwrap();
    assert!(doc.contains(r#"<polyline class="newton" points="80,80 40,40""#));
    golden("newton_1_1.svg", &doc);

    let doc = render_newton(rho(3, 5), None, &RenderSpec::new(RenderFormat::Tikz)).unwrap();
    assert!(doc.contains(r"\draw[thick, fill=blue!8] (3,0) -- (7,0) -- (0,7) -- (0,5) -- cycle;"));
    golden("newton_3_5.tex", &doc);
}

#[test]
fn renders_are_deterministic() {
    let g = build_snake(rho(5, 8));
    for f in [RenderFormat::Svg, RenderFormat::Tikz, RenderFormat::Json] {
        let spec = RenderSpec::new(f);
        assert_eq!(render_snake(&g, &spec).unwrap(), render_snake(&g, &spec).unwrap());
        assert_eq!(render_newton(rho(5, 8), None, &spec).unwrap(), render_newton(rho(5, 8), None, &spec).unwrap());
    }
}
