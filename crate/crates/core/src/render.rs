//! SVG, TikZ and JSON figures for snake graphs and Newton polygons.
//!
//! Output is a pure function of the input and the [`RenderSpec`]: edges are
//! emitted in `EdgeKey` order and numbers are printed with a fixed precision,
//! so documents can be compared byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::matchings::Matching;
use crate::newton::{contains, lattice_points, LatticePoint, NewtonPolygon};
use crate::snake::{EdgeKey, SnakeGraph, SnakeJson, Weight};
use crate::words::RationalIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Tikz,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub format: RenderFormat,
    /// Pixels (SVG) or centimetres (TikZ) per grid unit.
    pub scale: f64,
    pub highlight: Option<Matching>,
    pub show_weights: bool,
}

impl RenderSpec {
    pub fn new(format: RenderFormat) -> Self {
        let scale = match format {
            RenderFormat::Svg => 40.0,
            RenderFormat::Tikz | RenderFormat::Json => 1.0,
        };
        RenderSpec { format, scale, highlight: None, show_weights: true }
    }

    pub fn with_highlight(mut self, m: Matching) -> Self {
        self.highlight = Some(m);
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn check(&self) -> Result<(), RenderError> {
        if self.scale.is_finite() && self.scale > 0.0 {
            Ok(())
        } else {
            Err(RenderError::BadScale(self.scale))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("highlighted edge {0} is not in the graph")]
    UnknownEdge(EdgeKey),
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error("path point {0} is outside the Newton polygon")]
    PointOutsidePolygon(LatticePoint),
}

/// Up to two decimals, trailing zeros dropped.
fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn svg_color(w: Weight) -> &'static str {
    match w {
        Weight::X => "red",
        Weight::Y => "blue",
        Weight::Z => "green",
    }
}

/// Maps grid coordinates to SVG pixels with `y` pointing up.
struct Frame {
    scale: f64,
    margin: f64,
    top: i64,
}

impl Frame {
    fn px(&self, x: f64) -> String {
        num(self.margin + x * self.scale)
    }

    fn py(&self, y: f64) -> String {
        num(self.margin + (self.top as f64 - y) * self.scale)
    }
}

fn svg_open(out: &mut String, w: f64, h: f64) {
    let (w, h) = (num(w), num(h));
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#)
        .unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
}

#[derive(Serialize)]
struct SnakeRenderJson {
    snake: SnakeJson,
    highlight: Vec<[[i64; 2]; 2]>,
}

pub fn render_snake(g: &SnakeGraph, spec: &RenderSpec) -> Result<String, RenderError> {
    spec.check()?;
    if let Some(m) = &spec.highlight {
        if let Some(e) = m.edges().iter().find(|e| g.weight(e).is_none()) {
            return Err(RenderError::UnknownEdge(*e));
        }
    }
    let lit = |e: &EdgeKey| spec.highlight.as_ref().map(|m| m.contains(e));

    // Boundary edges belong to a single tile; only those get weight labels.
    let mut owners: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for t in 1..=g.num_tiles() {
        for te in g.tile_edges(t).expect("tile in range") {
            owners.entry(te.key).or_default().push(t);
        }
    }
    let boundary = |e: &EdgeKey| owners.get(e).is_some_and(|ts| ts.len() == 1);
    // Labels sit outside the snake, on the side away from the tile.
    let label_offset = |e: &EdgeKey| -> (f64, f64) {
        let (tx, ty) = g.tile_corners()[owners[e][0] - 1];
        let [(x0, y0), (x1, y1)] = e.endpoints();
        let (mx, my) = ((x0 + x1) as f64 / 2.0, (y0 + y1) as f64 / 2.0);
        let (cx, cy) = (tx as f64 + 0.5, ty as f64 + 0.5);
        (mx + (mx - cx) * 0.4, my + (my - cy) * 0.4)
    };

    let mut out = String::new();
    match spec.format {
        RenderFormat::Json => {
            let doc = SnakeRenderJson {
                snake: g.to_json(),
                highlight: spec
                    .highlight
                    .iter()
                    .flat_map(|m| m.edges().iter())
                    .map(|e| [[e.from.0, e.from.1], [e.to.0, e.to.1]])
                    .collect(),
            };
            out = serde_json::to_string_pretty(&doc).expect("serializable");
            out.push('\n');
        }
        RenderFormat::Svg => {
            let (mx, my) = g.vertices().iter().fold((0, 0), |(a, b), &(x, y)| (a.max(x), b.max(y)));
            let f = Frame { scale: spec.scale, margin: spec.scale * 0.75, top: my };
            svg_open(&mut out, mx as f64 * spec.scale + 2.0 * f.margin, my as f64 * spec.scale + 2.0 * f.margin);
            writeln!(out, r#"<g class="tiles">"#).unwrap();
            for (t, &(x, y)) in g.tile_corners().iter().enumerate() {
                let fill = if g.is_labeled(t + 1) { "#f2f2f2" } else { "#ffffff" };
                writeln!(
                    out,
                    r#"<rect class="tile" x="{}" y="{}" width="{s}" height="{s}" fill="{fill}"/>"#,
                    f.px(x as f64),
                    f.py(y as f64 + 1.0),
                    s = num(spec.scale)
                )
                .unwrap();
            }
            writeln!(out, "</g>").unwrap();
            writeln!(out, r#"<g class="edges" stroke-linecap="round">"#).unwrap();
            for (e, &w) in g.edges() {
                let [(x0, y0), (x1, y1)] = e.endpoints();
                let (class, stroke, width) = match lit(e) {
                    Some(true) => ("edge matched", svg_color(w), num(spec.scale / 8.0)),
                    Some(false) => ("edge", "lightgray", num(spec.scale / 40.0)),
                    None => ("edge", svg_color(w), num(spec.scale / 20.0)),
                };
                writeln!(
                    out,
                    r#"<line class="{class} w-{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{width}"/>"#,
                    w.name(),
                    f.px(x0 as f64),
                    f.py(y0 as f64),
                    f.px(x1 as f64),
                    f.py(y1 as f64)
                )
                .unwrap();
            }
            writeln!(out, "</g>").unwrap();
            if spec.show_weights {
                writeln!(
                    out,
                    r#"<g class="weights" font-family="serif" font-style="italic" font-size="{}" text-anchor="middle" dominant-baseline="central">"#,
                    num(spec.scale * 0.35)
                )
                .unwrap();
                for (e, &w) in g.edges().iter().filter(|(e, _)| boundary(e)) {
                    let (lx, ly) = label_offset(e);
                    writeln!(
                        out,
                        r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
                        f.px(lx),
                        f.py(ly),
                        svg_color(w),
                        w.name()
                    )
                    .unwrap();
                }
                writeln!(out, "</g>").unwrap();
            }
            writeln!(out, "</svg>").unwrap();
        }
        RenderFormat::Tikz => {
            writeln!(out, r"\begin{{tikzpicture}}[scale={}]", num(spec.scale)).unwrap();
            for (t, &(x, y)) in g.tile_corners().iter().enumerate() {
                let fill = if g.is_labeled(t + 1) { "black!5" } else { "white" };
                writeln!(out, r"  \fill[{fill}] ({x},{y}) rectangle ({},{});", x + 1, y + 1).unwrap();
            }
            for (e, &w) in g.edges() {
                let [(x0, y0), (x1, y1)] = e.endpoints();
                let style = match lit(e) {
                    Some(true) => format!("{}, line width=2.5pt", svg_color(w)),
                    Some(false) => "black!20".to_string(),
                    None => format!("{}, thick", svg_color(w)),
                };
                writeln!(out, r"  \draw[{style}] ({x0},{y0}) -- ({x1},{y1});").unwrap();
            }
            if spec.show_weights {
                for (e, &w) in g.edges().iter().filter(|(e, _)| boundary(e)) {
                    let (lx, ly) = label_offset(e);
                    writeln!(
                        out,
                        r"  \node[{}, font=\scriptsize] at ({},{}) {{${}$}};",
                        svg_color(w),
                        num(lx),
                        num(ly),
                        w.name()
                    )
                    .unwrap();
                }
            }
            writeln!(out, r"\end{{tikzpicture}}").unwrap();
        }
    }
    Ok(out)
}

/// Axis label for a polygon vertex: its non-zero coordinate.
fn vertex_label(p: LatticePoint) -> i64 {
    if p.i() != 0 {
        p.i()
    } else {
        p.j()
    }
}

#[derive(Serialize)]
struct NewtonRenderJson {
    rho: String,
    vertices: Vec<LatticePoint>,
    lattice_points: Vec<LatticePoint>,
    path: Vec<LatticePoint>,
}

pub fn render_newton(
    rho: RationalIndex,
    path: Option<&[LatticePoint]>,
    spec: &RenderSpec,
) -> Result<String, RenderError> {
    spec.check()?;
    let path = path.unwrap_or(&[]);
    if let Some(&p) = path.iter().find(|&&p| !contains(rho, p)) {
        return Err(RenderError::PointOutsidePolygon(p));
    }
    let poly = NewtonPolygon::new(rho);
    let pts = lattice_points(rho);
    let d = rho.degree() as i64;

    let mut out = String::new();
    match spec.format {
        RenderFormat::Json => {
            let doc = NewtonRenderJson {
                rho: rho.to_string(),
                vertices: poly.vertices,
                lattice_points: pts.into_iter().collect(),
                path: path.to_vec(),
            };
            out = serde_json::to_string_pretty(&doc).expect("serializable");
            out.push('\n');
        }
        RenderFormat::Svg => {
            let f = Frame { scale: spec.scale, margin: spec.scale, top: d };
            let side = d as f64 * spec.scale + 2.0 * f.margin;
            svg_open(&mut out, side, side);
            writeln!(
                out,
                r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{}" y1="{}" x2="{}" y2="{}"/><line x1="{}" y1="{}" x2="{}" y2="{}"/></g>"#,
                f.px(0.0),
                f.py(0.0),
                f.px(d as f64 + 0.5),
                f.py(0.0),
                f.px(0.0),
                f.py(0.0),
                f.px(0.0),
                f.py(d as f64 + 0.5)
            )
            .unwrap();
            let coords: Vec<String> =
                poly.vertices.iter().map(|v| format!("{},{}", f.px(v.i() as f64), f.py(v.j() as f64))).collect();
            if coords.len() == 2 {
                writeln!(
                    out,
                    r#"<polyline class="newton" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
                    coords.join(" ")
                )
                .unwrap();
            } else {
                writeln!(
                    out,
                    r##"<polygon class="newton" points="{}" fill="#e8e8f8" stroke="black" stroke-width="2"/>"##,
                    coords.join(" ")
                )
                .unwrap();
            }
            for p in &pts {
                writeln!(
                    out,
                    r#"<circle class="lattice-point" cx="{}" cy="{}" r="{}" fill="black"/>"#,
                    f.px(p.i() as f64),
                    f.py(p.j() as f64),
                    num(spec.scale / 12.0)
                )
                .unwrap();
            }
            writeln!(
                out,
                r#"<g class="vertex-labels" font-family="serif" font-size="{}" text-anchor="middle">"#,
                num(spec.scale * 0.4)
            )
            .unwrap();
            for v in &poly.vertices {
                // Labels sit on the axis, just outside the polygon.
                let (lx, ly) = if v.j() == 0 { (v.i() as f64, -0.5) } else { (-0.5, v.j() as f64 - 0.15) };
                writeln!(
                    out,
                    r#"<text class="vertex-label" x="{}" y="{}">{}</text>"#,
                    f.px(lx),
                    f.py(ly),
                    vertex_label(*v)
                )
                .unwrap();
            }
            writeln!(out, "</g>").unwrap();
            if !path.is_empty() {
                let line: Vec<String> =
                    path.iter().map(|p| format!("{},{}", f.px(p.i() as f64), f.py(p.j() as f64))).collect();
                writeln!(
                    out,
                    r#"<polyline class="path" points="{}" fill="none" stroke="red" stroke-width="{}"/>"#,
                    line.join(" "),
                    num(spec.scale / 16.0)
                )
                .unwrap();
                for p in path {
                    writeln!(
                        out,
                        r#"<circle class="path-point" cx="{}" cy="{}" r="{}" fill="red"/>"#,
                        f.px(p.i() as f64),
                        f.py(p.j() as f64),
                        num(spec.scale / 6.0)
                    )
                    .unwrap();
                }
            }
            writeln!(out, "</svg>").unwrap();
        }
        RenderFormat::Tikz => {
            writeln!(out, r"\begin{{tikzpicture}}[scale={}]", num(spec.scale)).unwrap();
            writeln!(out, r"  \draw[->] (0,0) -- ({},0) node[right] {{$i$}};", d + 1).unwrap();
            writeln!(out, r"  \draw[->] (0,0) -- (0,{}) node[above] {{$j$}};", d + 1).unwrap();
            let coords: Vec<String> = poly.vertices.iter().map(|v| format!("({},{})", v.i(), v.j())).collect();
            if coords.len() == 2 {
                writeln!(out, r"  \draw[thick] {};", coords.join(" -- ")).unwrap();
            } else {
                writeln!(out, r"  \draw[thick, fill=blue!8] {} -- cycle;", coords.join(" -- ")).unwrap();
            }
            for p in &pts {
                writeln!(out, r"  \fill ({},{}) circle (1.5pt);", p.i(), p.j()).unwrap();
            }
            for v in &poly.vertices {
                let anchor = if v.j() == 0 { "below" } else { "left" };
                writeln!(out, r"  \node[{anchor}] at ({},{}) {{${}$}};", v.i(), v.j(), vertex_label(*v)).unwrap();
            }
            if !path.is_empty() {
                let line: Vec<String> = path.iter().map(|p| format!("({},{})", p.i(), p.j())).collect();
                writeln!(out, r"  \draw[red, thick] {};", line.join(" -- ")).unwrap();
                for p in path {
                    writeln!(out, r"  \fill[red] ({},{}) circle (3pt);", p.i(), p.j()).unwrap();
                }
            }
            writeln!(out, r"\end{{tikzpicture}}").unwrap();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snake::build_snake;

    fn rho(a: u64, b: u64) -> RationalIndex {
        RationalIndex::new(a, b).unwrap()
    }

    #[test]
    fn one_one_is_a_single_square() {
        let svg = render_snake(&build_snake(rho(1, 1)), &RenderSpec::new(RenderFormat::Svg)).unwrap();
        assert_eq!(svg.matches(r#"class="tile""#).count(), 1);
        assert_eq!(svg.matches(r#"stroke="red""#).count(), 2);
        assert_eq!(svg.matches(r#"stroke="blue""#).count(), 2);
        assert!(!svg.contains("green"));
    }

    #[test]
    fn rejects_bad_scale_and_foreign_edges() {
        let g = build_snake(rho(1, 2));
        let spec = RenderSpec::new(RenderFormat::Svg).with_scale(0.0);
        assert_eq!(render_snake(&g, &spec), Err(RenderError::BadScale(0.0)));
        let foreign = EdgeKey::new((10, 10), (11, 10));
        let spec = RenderSpec::new(RenderFormat::Tikz).with_highlight(Matching::from_edges([foreign]));
        assert_eq!(render_snake(&g, &spec), Err(RenderError::UnknownEdge(foreign)));
    }

    #[test]
    fn newton_checks_path() {
        let spec = RenderSpec::new(RenderFormat::Svg);
        let bad = [LatticePoint(0, 6)];
        assert_eq!(
            render_newton(rho(4, 7), Some(&bad), &spec),
            Err(RenderError::PointOutsidePolygon(LatticePoint(0, 6)))
        );
        let seg = render_newton(rho(1, 1), None, &spec).unwrap();
        assert!(seg.contains(r#"<polyline class="newton""#));
        assert_eq!(seg.matches("lattice-point").count(), 2);
    }

    #[test]
    fn number_format() {
        assert_eq!(num(40.0), "40");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(1.0 / 3.0), "0.33");
        assert_eq!(num(-0.001), "0");
    }
}
