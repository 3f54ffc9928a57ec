//! The `markov-snake` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails (or enumeration hits
//! its cap), 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::constructor::{match_for_point_in, match_json};
use crate::matchings::{numerator_by_enumeration, numerator_dp, MatchError, NumeratorPoly, DEFAULT_ENUMERATION_CAP};
use crate::newton::{classify_diagonal, contains, newton_json, DiagonalKind, LatticePoint, NewtonPolygon};
use crate::oracle::{markov_number_vieta, markov_triple, numerator_by_mutation, verify_markov_identity};
use crate::render::{render_newton, render_snake, RenderFormat, RenderSpec};
use crate::saturation::{results_dir, saturation_report, sweep, write_report, SaturationReport};
use crate::snake::build_snake;
use crate::words::{word_data, RationalIndex};

#[derive(Debug, Parser)]
#[command(name = "markov-snake", version, about = "Markov polynomials from snake graphs and their Newton polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Christoffel word, modified word and run profile.
    Word {
        rho: RationalIndex,
        #[arg(long)]
        json: bool,
    },
    /// The weighted snake graph.
    Snake {
        rho: RationalIndex,
        #[command(flatten)]
        output: Output,
    },
    /// Numerator polynomial of the Markov polynomial.
    Poly {
        rho: RationalIndex,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        /// Maximum number of matchings for `--method enumerate`.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Newton polygon, optionally with the driver path to a point.
    Newton {
        rho: RationalIndex,
        #[arg(long, value_parser = parse_point, value_name = "I,J")]
        point: Option<LatticePoint>,
        #[command(flatten)]
        output: Output,
    },
    /// An explicit perfect matching for a lattice point.
    Match {
        rho: RationalIndex,
        #[arg(long, value_parser = parse_point, value_name = "I,J")]
        point: LatticePoint,
        #[command(flatten)]
        output: Output,
    },
    /// Compare DP, enumeration and mutation, and check the Markov identity.
    Verify {
        rho: RationalIndex,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Saturation report for one index, or a sweep over `a + b <= N`.
    Saturate {
        #[arg(required_unless_present = "sweep", conflicts_with = "sweep")]
        rho: Option<RationalIndex>,
        #[arg(long, requires = "max_sum")]
        sweep: bool,
        #[arg(long, value_name = "N", requires = "sweep")]
        max_sum: Option<u64>,
        /// Results directory; sweeps default to $MARKOV_SNAKE_RESULTS or `results`.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Dp,
    Enumerate,
    Mutation,
}

#[derive(Debug, Args)]
#[group(id = "format", multiple = false)]
struct Format {
    #[arg(long)]
    json: bool,
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    tikz: bool,
}

#[derive(Debug, Args)]
struct Output {
    #[command(flatten)]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl Output {
    fn render_format(&self) -> Option<RenderFormat> {
        let f = &self.format;
        if f.json {
            Some(RenderFormat::Json)
        } else if f.svg {
            Some(RenderFormat::Svg)
        } else if f.tikz {
            Some(RenderFormat::Tikz)
        } else {
            None
        }
    }
}

fn parse_point(s: &str) -> Result<LatticePoint, String> {
    let (i, j) = s.split_once(',').ok_or_else(|| format!("expected I,J, got {s:?}"))?;
    let i = i.trim().parse::<i64>().map_err(|e| format!("bad i: {e}"))?;
    let j = j.trim().parse::<i64>().map_err(|e| format!("bad j: {e}"))?;
    Ok(LatticePoint(i, j))
}

/// Exit status plus a message for stderr.
struct Failure {
    code: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn failed(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

type CmdResult = Result<i32, Failure>;

/// Writes `doc` to `path`, or to `out` when no path is given.
fn emit(out: &mut dyn Write, path: Option<&Path>, doc: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, doc).map_err(|e| failed(format!("{}: {e}", p.display()))),
        None => out.write_all(doc.as_bytes()).map_err(|e| failed(e.to_string())),
    }
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn check_point(rho: RationalIndex, p: LatticePoint) -> Result<(), Failure> {
    if contains(rho, p) {
        Ok(())
    } else {
        Err(usage(format!("point {p} is outside the Newton polygon of {rho}")))
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Word { rho, json } => cmd_word(rho, json, out),
        Command::Snake { rho, output } => cmd_snake(rho, &output, out),
        Command::Poly { rho, method, cap, json, out: path } => cmd_poly(rho, method, cap, json, path.as_deref(), out),
        Command::Newton { rho, point, output } => cmd_newton(rho, point, &output, out),
        Command::Match { rho, point, output } => cmd_match(rho, point, &output, out),
        Command::Verify { rho, cap, json } => cmd_verify(rho, cap, json, out),
        Command::Saturate { rho, sweep: _, max_sum, out: dir, json } => match (rho, max_sum) {
            (Some(rho), _) => cmd_saturate_one(rho, dir.as_deref(), json, out),
            (None, Some(n)) => cmd_sweep(n, dir, json, out, err),
            (None, None) => Err(usage("saturate needs a/b or --sweep --max-sum N")),
        },
    }
}

fn io(e: std::io::Error) -> Failure {
    failed(e.to_string())
}

fn cmd_word(rho: RationalIndex, json: bool, out: &mut dyn Write) -> CmdResult {
    let (w, m, runs) = word_data(rho);
    if json {
        let doc = serde_json::json!({
            "word": w.to_string(),
            "modified": m.to_string(),
            "runs": runs,
        });
        out.write_all(json_line(&doc).as_bytes()).map_err(io)?;
    } else {
        writeln!(out, "{w} / {m}").map_err(io)?;
    }
    Ok(0)
}

fn cmd_snake(rho: RationalIndex, output: &Output, out: &mut dyn Write) -> CmdResult {
    let g = build_snake(rho);
    let doc = match output.render_format() {
        Some(RenderFormat::Json) => json_line(&g.to_json()),
        Some(f) => render_snake(&g, &RenderSpec::new(f)).map_err(|e| failed(e.to_string()))?,
        None => {
            let mut s = format!("snake graph of {rho}: {} tiles, {} edges\n", g.num_tiles(), g.edges().len());
            s += &format!("dirs: {}\n", g.dirs_string());
            s += &format!("labeled tiles: {}, columns: {}\n", g.num_labeled(), g.column_links().len());
            s
        }
    };
    emit(out, output.out.as_deref(), &doc)?;
    Ok(0)
}

fn numerator(rho: RationalIndex, method: Method, cap: usize) -> Result<NumeratorPoly, Failure> {
    match method {
        Method::Dp => Ok(numerator_dp(&build_snake(rho))),
        Method::Enumerate => numerator_by_enumeration(&build_snake(rho), cap).map_err(|e| failed(e.to_string())),
        Method::Mutation => numerator_by_mutation(rho).map_err(|e| failed(e.to_string())),
    }
}

fn numerator_text(num: &NumeratorPoly) -> String {
    let mut s = format!(
        "numerator of {} (u = x^2, v = y^2, w = z^2), degree {}, {} terms, value at 1: {}\n",
        num.rho(),
        num.degree(),
        num.poly().len(),
        num.count()
    );
    s += "   i    j    k  coefficient\n";
    for (e, c) in num.poly().terms() {
        s += &format!("{:>4} {:>4} {:>4}  {c}\n", e[0], e[1], e[2]);
    }
    s
}

fn cmd_poly(
    rho: RationalIndex,
    method: Method,
    cap: usize,
    json: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let num = numerator(rho, method, cap)?;
    let doc = if json { json_line(&num.to_json()) } else { numerator_text(&num) };
    emit(out, path, &doc)?;
    Ok(0)
}

fn cmd_newton(rho: RationalIndex, point: Option<LatticePoint>, output: &Output, out: &mut dyn Write) -> CmdResult {
    let path: Option<Vec<LatticePoint>> = match point {
        Some(p) => {
            check_point(rho, p)?;
            let c = match_for_point_in(&build_snake(rho), p).map_err(|e| failed(e.to_string()))?;
            Some(c.log.iter().map(|r| r.point).collect())
        }
        None => None,
    };
    let doc = match output.render_format() {
        Some(RenderFormat::Json) if path.is_none() => json_line(&newton_json(rho)),
        Some(f) => render_newton(rho, path.as_deref(), &RenderSpec::new(f)).map_err(|e| failed(e.to_string()))?,
        None => {
            let poly = NewtonPolygon::new(rho);
            let vs: Vec<String> = poly.vertices.iter().map(|v| v.to_string()).collect();
            let mut s = format!("Newton polygon of {rho}: vertices {}\n", vs.join(", "));
            for c in (rho.a() as i64..=rho.degree() as i64).rev() {
                let info = classify_diagonal(rho, c).expect("in range");
                let kind = match info.kind {
                    DiagonalKind::Full => "full",
                    DiagonalKind::Partial => "partial",
                };
                s += &format!("  i + j = {c:>3}: {kind:<7} left-most {}\n", info.leftmost);
            }
            if let Some(p) = &path {
                let ps: Vec<String> = p.iter().map(|q| q.to_string()).collect();
                s += &format!("path: {}\n", ps.join(" -> "));
            }
            s
        }
    };
    emit(out, output.out.as_deref(), &doc)?;
    Ok(0)
}

fn cmd_match(rho: RationalIndex, point: LatticePoint, output: &Output, out: &mut dyn Write) -> CmdResult {
    check_point(rho, point)?;
    let g = build_snake(rho);
    let c = match_for_point_in(&g, point).map_err(|e| failed(e.to_string()))?;
    let doc = match output.render_format() {
        Some(RenderFormat::Json) => json_line(&match_json(&g, &c)),
        Some(f) => render_snake(&g, &RenderSpec::new(f).with_highlight(c.matching.clone()))
            .map_err(|e| failed(e.to_string()))?,
        None => {
            let j = match_json(&g, &c);
            let m = &j.monomial;
            let mut s = format!("{rho} at {point}: x^{} y^{} z^{}\n", m.ex, m.ey, m.ez);
            for r in &c.log {
                let [ex, ey, ez] = r.exponents;
                s += &format!("  {:<16} {:<10} x^{ex} y^{ey} z^{ez}\n", r.label, r.point.to_string());
            }
            s += &format!("{} edges:\n", j.edges.len());
            for e in &j.edges {
                s += &format!("  ({},{})-({},{}) {}\n", e.from[0], e.from[1], e.to[0], e.to[1], e.w);
            }
            s
        }
    };
    emit(out, output.out.as_deref(), &doc)?;
    Ok(0)
}

#[derive(serde::Serialize)]
struct VerifyJson {
    rho: String,
    dp_count: String,
    vieta_count: String,
    enumeration: Option<bool>,
    mutation: bool,
    identity: bool,
    pass: bool,
}

fn cmd_verify(rho: RationalIndex, cap: usize, json: bool, out: &mut dyn Write) -> CmdResult {
    let g = build_snake(rho);
    let dp = numerator_dp(&g);
    let enumeration = match numerator_by_enumeration(&g, cap) {
        Ok(n) => Some(n == dp),
        Err(MatchError::CapExceeded(_)) => None,
        Err(e) => return Err(failed(e.to_string())),
    };
    let mutation = numerator_by_mutation(rho).map(|n| n == dp).unwrap_or(false);
    let identity = markov_triple(rho).map(|[p, m, q]| verify_markov_identity(&p, &m, &q)).unwrap_or(false);
    let vieta: BigInt = markov_number_vieta(rho);
    let count_ok = vieta == dp.count();
    let pass = enumeration != Some(false) && mutation && identity && count_ok;

    if json {
        let doc = VerifyJson {
            rho: rho.to_string(),
            dp_count: dp.count().to_string(),
            vieta_count: vieta.to_string(),
            enumeration,
            mutation,
            identity,
            pass,
        };
        out.write_all(json_line(&doc).as_bytes()).map_err(io)?;
    } else {
        let word = |ok: bool| if ok { "agree" } else { "DIFFER" };
        writeln!(out, "{rho}: {} terms, {} perfect matchings", dp.poly().len(), dp.count()).map_err(io)?;
        match enumeration {
            Some(ok) => writeln!(out, "  dp vs enumeration:  {}", word(ok)),
            None => writeln!(out, "  dp vs enumeration:  skipped (more than {cap} matchings)"),
        }
        .map_err(io)?;
        writeln!(out, "  dp vs mutation:     {}", word(mutation)).map_err(io)?;
        writeln!(out, "  count vs Vieta:     {} ({vieta})", word(count_ok)).map_err(io)?;
        writeln!(out, "  Markov identity:    {}", if identity { "holds" } else { "FAILS" }).map_err(io)?;
        writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).map_err(io)?;
    }
    Ok(if pass { 0 } else { 1 })
}

fn report_text(r: &SaturationReport) -> String {
    let bad: Vec<String> = r
        .points
        .iter()
        .filter(|p| !p.ok())
        .map(|p| format!("{}: {}", p.point, p.error.as_deref().unwrap_or("")))
        .collect();
    let mut s = format!(
        "{}: {} lattice points, {} support points, {} constructed: {}\n",
        r.rho,
        r.lattice_count,
        r.support_count,
        r.points.iter().filter(|p| p.ok()).count(),
        if r.pass { "PASS" } else { "FAIL" }
    );
    for p in &r.support_outside_polygon {
        s += &format!("  support point {p} outside the polygon\n");
    }
    for p in &r.polygon_outside_support {
        s += &format!("  polygon point {p} has coefficient 0\n");
    }
    for b in bad {
        s += &format!("  {b}\n");
    }
    s
}

fn cmd_saturate_one(rho: RationalIndex, dir: Option<&Path>, json: bool, out: &mut dyn Write) -> CmdResult {
    let r = saturation_report(rho);
    if let Some(d) = dir {
        fs::create_dir_all(d).map_err(|e| failed(format!("{}: {e}", d.display())))?;
        write_report(d, rho, &r).map_err(|e| failed(e.to_string()))?;
    }
    let doc = if json { json_line(&r) } else { report_text(&r) };
    out.write_all(doc.as_bytes()).map_err(io)?;
    Ok(if r.pass { 0 } else { 1 })
}

fn cmd_sweep(max_sum: u64, dir: Option<PathBuf>, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let dir = dir.unwrap_or_else(results_dir);
    let (summary, reports) = sweep(max_sum, Some(&dir)).map_err(|e| failed(e.to_string()))?;
    if json {
        out.write_all(json_line(&summary).as_bytes()).map_err(io)?;
    } else {
        writeln!(
            out,
            "a + b <= {max_sum}: {}/{} indices pass ({} reused) in {} ms, reports in {}",
            summary.passed,
            summary.total,
            summary.reused,
            summary.elapsed_ms,
            dir.display()
        )
        .map_err(io)?;
    }
    for r in reports.iter().filter(|r| !r.pass) {
        err.write_all(report_text(r).as_bytes()).map_err(io)?;
    }
    Ok(if summary.all_pass() { 0 } else { 1 })
}
