//! Per-index saturation reports and parallel sweeps.
//!
//! A report compares the support of the DP numerator with the lattice points
//! of the Newton polygon and runs the constructive driver on every point.
//! Sweeps store one `a_b.json` per index in a results directory and reuse
//! existing files, so an interrupted sweep can be resumed.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructor::match_for_point_in;
use crate::matchings::{is_perfect, lattice_point, matching_monomial, numerator_dp};
use crate::newton::{lattice_points, LatticePoint, NewtonPolygon};
use crate::snake::build_snake;
use crate::words::RationalIndex;

/// Environment variable overriding [`DEFAULT_RESULTS_DIR`].
pub const RESULTS_ENV: &str = "MARKOV_SNAKE_RESULTS";
pub const DEFAULT_RESULTS_DIR: &str = "results";

pub fn results_dir() -> PathBuf {
    std::env::var_os(RESULTS_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_RESULTS_DIR))
}

#[derive(Debug, Error)]
pub enum SaturationError {
    #[error("results directory {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: LatticePoint,
    /// `A_ij` as a decimal string.
    pub coefficient: String,
    /// Length of the operation log, initial matching included.
    pub ops: usize,
    /// `x, y, z` exponents of the constructed matching.
    pub exponents: Option<[i64; 3]>,
    pub error: Option<String>,
}

impl PointReport {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub rho: String,
    pub vertices: Vec<LatticePoint>,
    pub lattice_count: usize,
    pub support_count: usize,
    /// Support points outside the polygon.
    pub support_outside_polygon: Vec<LatticePoint>,
    /// Polygon points with a zero coefficient.
    pub polygon_outside_support: Vec<LatticePoint>,
    pub points: Vec<PointReport>,
    pub pass: bool,
}

pub fn saturation_report(rho: RationalIndex) -> SaturationReport {
    let g = build_snake(rho);
    let num = numerator_dp(&g);
    let support = num.support();
    let lattice = lattice_points(rho);

    let points: Vec<PointReport> = lattice
        .iter()
        .map(|&p| {
            let coefficient = num.coeff(p.i(), p.j());
            let mut report =
                PointReport { point: p, coefficient: coefficient.to_string(), ops: 0, exponents: None, error: None };
            match match_for_point_in(&g, p) {
                Ok(c) => {
                    report.ops = c.log.len();
                    let check = is_perfect(&g, &c.matching).map_err(|e| e.to_string()).and_then(|perfect| {
                        if !perfect {
                            return Err("constructed edge set is not perfect".to_string());
                        }
                        let m = matching_monomial(&g, &c.matching).map_err(|e| e.to_string())?;
                        let q = lattice_point(&m).map_err(|e| e.to_string())?;
                        report.exponents = Some(m.exponents());
                        if q != p {
                            return Err(format!("matching lands on {q}"));
                        }
                        Ok(())
                    });
                    if let Err(e) = check {
                        report.error = Some(e);
                    } else if coefficient < num_bigint::BigInt::one() {
                        report.error = Some("constructed a matching for a zero coefficient".into());
                    }
                }
                Err(e) => report.error = Some(e.to_string()),
            }
            report
        })
        .collect();

    let support_outside_polygon: Vec<LatticePoint> = support.difference(&lattice).copied().collect();
    let polygon_outside_support: Vec<LatticePoint> = lattice.difference(&support).copied().collect();
    let pass =
        support_outside_polygon.is_empty() && polygon_outside_support.is_empty() && points.iter().all(PointReport::ok);

    SaturationReport {
        rho: rho.to_string(),
        vertices: NewtonPolygon::new(rho).vertices,
        lattice_count: lattice.len(),
        support_count: support.len(),
        support_outside_polygon,
        polygon_outside_support,
        points,
        pass,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub max_sum: u64,
    pub total: usize,
    pub passed: usize,
    /// Indices whose report did not pass.
    pub failures: Vec<String>,
    /// Reports loaded from the results directory instead of recomputed.
    pub reused: usize,
    pub elapsed_ms: u128,
}

impl SweepSummary {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SaturationError + '_ {
    move |source| SaturationError::Io { path: path.to_path_buf(), source }
}

fn load_report(path: &Path, rho: RationalIndex) -> Option<SaturationReport> {
    let text = fs::read_to_string(path).ok()?;
    let r: SaturationReport = serde_json::from_str(&text).ok()?;
    (r.rho == rho.to_string()).then_some(r)
}

/// Writes `a_b.json` via a temporary file and a rename, so readers never see
/// partial JSON.
pub fn write_report(dir: &Path, rho: RationalIndex, r: &SaturationReport) -> Result<(), SaturationError> {
    let path = dir.join(format!("{}.json", rho.file_stem()));
    let tmp = dir.join(format!(".{}.json.{}.tmp", rho.file_stem(), std::process::id()));
    let text = serde_json::to_string_pretty(r).expect("serializable");
    fs::write(&tmp, text).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(io_err(&path))
}

/// Reports for every index with `a + b <= max_sum`, computed in parallel.
/// Failures are collected, never fatal.
pub fn sweep(max_sum: u64, out: Option<&Path>) -> Result<(SweepSummary, Vec<SaturationReport>), SaturationError> {
    let start = Instant::now();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let indices = RationalIndex::all_up_to(max_sum);
    let results: Vec<Result<(SaturationReport, bool), SaturationError>> = indices
        .par_iter()
        .map(|&rho| {
            if let Some(dir) = out {
                let path = dir.join(format!("{}.json", rho.file_stem()));
                if let Some(r) = load_report(&path, rho) {
                    return Ok((r, true));
                }
                let r = saturation_report(rho);
                write_report(dir, rho, &r)?;
                Ok((r, false))
            } else {
                Ok((saturation_report(rho), false))
            }
        })
        .collect();

    let mut reports = Vec::with_capacity(results.len());
    let mut reused = 0;
    for r in results {
        let (report, was_reused) = r?;
        reused += usize::from(was_reused);
        reports.push(report);
    }
    let failures: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.rho.clone()).collect();
    let summary = SweepSummary {
        max_sum,
        total: reports.len(),
        passed: reports.len() - failures.len(),
        failures,
        reused,
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok((summary, reports))
}
