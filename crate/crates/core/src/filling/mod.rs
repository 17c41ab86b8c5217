//! Dehn filling and slope sweeps.

mod slope;

pub use slope::{Slope, SlopeError};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certify::{krawczyk_certify, Certificate, CertifyError, Interval};
use crate::solver::{solve_with, ShapeAssignment, SolveError, SolveOptions};
use crate::triangulation::{gluing_system, validate, GluingSystem, IdealTriangulation, Problem, SystemError};
use crate::volume::{volume, VolumeError, VolumeResult};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FillError {
    #[error("triangulation is invalid: {}", .0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Problem>),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error("cusp {cusp} out of range for {cusps} cusps")]
    CuspOutOfRange { cusp: usize, cusps: usize },
    #[error("{given} fixed slopes given, expected one per other cusp ({expected})")]
    FixedCount { given: usize, expected: usize },
    #[error("slope family is empty")]
    EmptyFamily,
}

/// Everything computed for one filling.
#[derive(Clone, Debug)]
pub struct Filled {
    pub system: GluingSystem,
    pub shapes: ShapeAssignment<f64>,
    pub certificate: Certificate,
    pub volume: VolumeResult<f64>,
}

fn check(tri: &IdealTriangulation) -> Result<(), FillError> {
    let report = validate(tri);
    if report.passes() {
        Ok(())
    } else {
        Err(FillError::Invalid(report.problems))
    }
}

fn run(
    tri: &IdealTriangulation,
    slopes: Option<&[Slope]>,
    init: Option<&ShapeAssignment<f64>>,
    opts: &SolveOptions<f64>,
) -> Result<(GluingSystem, ShapeAssignment<f64>, Result<Certificate, CertifyError>), FillError> {
    let sys = gluing_system(tri, slopes)?;
    let (shapes, _) = solve_with(&sys, init, opts)?;
    let cert = krawczyk_certify(&sys, &shapes);
    Ok((sys, shapes, cert))
}

/// Solves and certifies the complete structure.
pub fn complete(tri: &IdealTriangulation, opts: &SolveOptions<f64>) -> Result<Filled, FillError> {
    check(tri)?;
    let (system, shapes, cert) = run(tri, None, None, opts)?;
    let certificate = cert?;
    let volume = volume(&shapes)?;
    Ok(Filled { system, shapes, certificate, volume })
}

/// Fills each cusp along its slope: solves the complete structure, uses it
/// to seed the filled system, then certifies and measures the result.
pub fn fill(tri: &IdealTriangulation, slopes: &[Slope]) -> Result<Filled, FillError> {
    fill_with(tri, slopes, &SolveOptions::default())
}

pub fn fill_with(tri: &IdealTriangulation, slopes: &[Slope], opts: &SolveOptions<f64>) -> Result<Filled, FillError> {
    check(tri)?;
    // the complete structure is usually close, but Newton can stall there
    // since the filled cusp's holonomy is degenerate; fall back to the
    // regular start
    let seed = run(tri, None, None, opts).ok().map(|(_, s, _)| s);
    let mut first = None;
    for init in [seed.as_ref(), None] {
        let attempt = run(tri, Some(slopes), init, opts);
        if let Ok((_, _, Ok(c))) = &attempt {
            if c.geometric && c.unique {
                first = Some(attempt);
                break;
            }
        }
        if first.as_ref().is_none_or(|f: &Result<_, _>| f.is_err()) {
            first = Some(attempt);
        }
    }
    let (system, shapes, cert) = first.expect("at least one attempt")?;
    let certificate = cert?;
    let volume = volume(&shapes)?;
    Ok(Filled { system, shapes, certificate, volume })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepStatus {
    CertifiedGeometric,
    SolvedUncertified,
    Failed,
}

impl SweepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepStatus::CertifiedGeometric => "certified-geometric",
            SweepStatus::SolvedUncertified => "solved-uncertified",
            SweepStatus::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub slope: Slope,
    pub status: SweepStatus,
    /// Floating volume; absent only for failed rows.
    pub volume: Option<f64>,
    /// Certified volume, for certified rows.
    pub enclosure: Option<Interval>,
    /// Why the row failed or was not certified.
    pub note: Option<String>,
}

impl SweepRow {
    pub fn enclosure_width(&self) -> Option<f64> {
        self.enclosure.map(Interval::width)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sweep {
    pub cusp: usize,
    /// Volume of the unfilled manifold, for comparison.
    pub cusped_volume: Option<f64>,
    pub cusped_enclosure: Option<Interval>,
    pub rows: Vec<SweepRow>,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Solve rows independently on the rayon pool, each seeded by the
    /// complete solution instead of the previous row.
    pub parallel: bool,
    pub solve: SolveOptions<f64>,
}

fn sweep_row(
    tri: &IdealTriangulation,
    slopes: &[Slope],
    seeds: &[Option<&ShapeAssignment<f64>>],
    opts: &SolveOptions<f64>,
) -> (SweepRow, Option<ShapeAssignment<f64>>) {
    let slope = slopes.iter().copied().find(|s| s.is_filled()).unwrap_or(Slope::Unfilled);
    let mut last_err = None;
    for seed in seeds {
        match run(tri, Some(slopes), *seed, opts) {
            Ok((_, shapes, cert)) => {
                let vol = volume(&shapes).ok().map(|v| v.value);
                let row = match cert {
                    Ok(c) if c.geometric && c.unique => SweepRow {
                        slope,
                        status: SweepStatus::CertifiedGeometric,
                        volume: vol,
                        enclosure: c.volume_enclosure,
                        note: None,
                    },
                    Ok(_) => SweepRow {
                        slope,
                        status: SweepStatus::SolvedUncertified,
                        volume: vol,
                        enclosure: None,
                        note: Some("solution is not geometric".into()),
                    },
                    Err(e) => SweepRow {
                        slope,
                        status: SweepStatus::SolvedUncertified,
                        volume: vol,
                        enclosure: None,
                        note: Some(e.to_string()),
                    },
                };
                if row.volume.is_some() {
                    return (row, Some(shapes));
                }
            }
            Err(e) => last_err = Some(e.to_string()),
        }
    }
    (SweepRow { slope, status: SweepStatus::Failed, volume: None, enclosure: None, note: last_err }, None)
}

/// Fills `cusp` along each slope of `family` in turn, holding the other
/// cusps at `fixed` (one entry per other cusp, in cusp order). Per-slope
/// failures become rows with status `Failed`.
pub fn sweep(
    tri: &IdealTriangulation,
    cusp: usize,
    family: &[Slope],
    fixed: &[Slope],
    opts: &SweepOptions,
) -> Result<Sweep, FillError> {
    check(tri)?;
    let cusps = tri.cusps().len();
    if cusp >= cusps {
        return Err(FillError::CuspOutOfRange { cusp, cusps });
    }
    if fixed.len() + 1 != cusps {
        return Err(FillError::FixedCount { given: fixed.len(), expected: cusps - 1 });
    }
    if family.is_empty() {
        return Err(FillError::EmptyFamily);
    }
    let slopes_for = |s: Slope| {
        let mut v = fixed.to_vec();
        v.insert(cusp, s);
        v
    };

    let cusped = run(tri, None, None, &opts.solve).ok();
    let complete_shapes = cusped.as_ref().map(|(_, s, _)| s.clone());
    let cusped_volume = complete_shapes.as_ref().and_then(|s| volume(s).ok()).map(|v| v.value);
    let cusped_enclosure = cusped.as_ref().and_then(|(_, _, c)| c.as_ref().ok()).and_then(|c| c.volume_enclosure);

    let with_slope = |row: SweepRow, s: Slope| SweepRow { slope: s, ..row };
    let rows = if opts.parallel {
        family
            .par_iter()
            .map(|&s| {
                let (row, _) = sweep_row(tri, &slopes_for(s), &[complete_shapes.as_ref(), None], &opts.solve);
                with_slope(row, s)
            })
            .collect()
    } else {
        let mut prev: Option<ShapeAssignment<f64>> = None;
        let mut rows = Vec::with_capacity(family.len());
        for &s in family {
            let seeds = [prev.as_ref(), complete_shapes.as_ref(), None];
            let (row, shapes) = sweep_row(tri, &slopes_for(s), &seeds, &opts.solve);
            if shapes.is_some() {
                prev = shapes;
            }
            rows.push(with_slope(row, s));
        }
        rows
    };
    Ok(Sweep { cusp, cusped_volume, cusped_enclosure, rows })
}

/// Formats `x` with `digits` significant digits in positional notation.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

impl Sweep {
    /// Columns: slope_p, slope_q, status, volume, enclosure_width,
    /// delta_to_cusped. Unfilled rows print `inf` for both slope columns.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["slope_p", "slope_q", "status", "volume", "enclosure_width", "delta_to_cusped"]).expect("in-memory write");
        for r in &self.rows {
            let (p, q) = r.slope.coefficients().map_or(("inf".into(), "inf".into()), |(p, q)| (p.to_string(), q.to_string()));
            let vol = r.volume.map_or(String::new(), |v| significant(v, 15));
            let width = r.enclosure_width().map_or(String::new(), |w| format!("{w:.3e}"));
            let delta = match (r.volume, self.cusped_volume) {
                (Some(v), Some(c)) => format!("{:.6e}", c - v),
                _ => String::new(),
            };
            w.write_record([p, q, r.status.as_str().to_string(), vol, width, delta]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
    }
}
