//! `hypercusp` command-line front end.
//!
//! Exit codes: 0 when the requested verification succeeded, 1 when it did
//! not, 2 for usage errors (clap), 3 for unreadable or malformed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use hypercusp::certify::{decorated, decorated_box, render_certificate, Interval};
use hypercusp::diagram::octahedral_triangulation;
use hypercusp::filling::{complete, fill_with, sweep, Filled, SweepOptions, SweepStatus};
use hypercusp::homology::meridian_zero_surgery_check;
use hypercusp::solver::solve_with;
use hypercusp::{
    gluing_system, hexfloat, parse_pd, parse_triangulation, serialize_triangulation, surgery_homology, validate,
    IdealTriangulation, LinkingMatrix, Slope, SolveOptions,
};

#[derive(Parser)]
#[command(name = "hypercusp", version, about = "Certified hyperbolic structures on cusped 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print floats as exact hexadecimal literals instead of 15 digits.
    #[arg(long, global = true)]
    hex_floats: bool,
    /// Seed for the solver's random restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include wall-clock stage timings (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the combinatorics of a triangulation file.
    Validate { file: PathBuf },
    /// Solve the complete-structure gluing equations.
    Solve { file: PathBuf },
    /// Solve and certify with the Krawczyk test.
    Certify { file: PathBuf },
    /// Certified volume of the complete structure.
    Volume { file: PathBuf },
    /// Dehn fill with one slope per cusp (`inf` leaves a cusp complete).
    Fill {
        file: PathBuf,
        #[arg(long)]
        slopes: String,
    },
    /// Fill one cusp along a family of slopes.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        cusp: usize,
        /// `p/a..p/b` or `a/q..b/q`.
        #[arg(long)]
        family: String,
        /// Slopes for the other cusps, in order; default all `inf`.
        #[arg(long)]
        fixed: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Solve rows concurrently, each from the complete structure.
        #[arg(long)]
        parallel: bool,
    },
    /// First homology of the surgery on a framed link.
    Homology {
        file: PathBuf,
        /// Also check that 0-surgery on this component's meridian gives Z.
        #[arg(long)]
        meridian: Option<usize>,
    },
    /// Triangulate a link complement from a PD code.
    Pd2tri {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Why a run did not succeed.
#[derive(Debug)]
enum Failure {
    Input(String),
    Verification(String),
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Vec<(String, f64)>>,
    result: Value,
    status: &'static str,
}

struct Run {
    hex: bool,
    seed: u64,
    inputs: Vec<InputDigest>,
    stages: Vec<(String, f64)>,
    clock: Instant,
    text: Vec<String>,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: hex(&Sha256::digest(&bytes)) });
        String::from_utf8(bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn stage(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push((name.to_string(), (now - self.clock).as_secs_f64()));
        self.clock = now;
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn num(&self, x: f64) -> Value {
        if self.hex {
            Value::String(hexfloat::format(x))
        } else {
            listing(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null)
        }
    }

    fn show(&self, x: f64) -> String {
        if self.hex {
            hexfloat::format(x)
        } else {
            listing(x)
        }
    }

    fn interval(&self, iv: Interval) -> Value {
        if self.hex {
            json!([hexfloat::format(iv.lo), hexfloat::format(iv.hi)])
        } else {
            json!([iv.lo, iv.hi])
        }
    }

    fn options(&self) -> SolveOptions {
        SolveOptions { seed: self.seed, ..SolveOptions::default() }
    }

    fn triangulation(&mut self, path: &Path) -> Result<IdealTriangulation, Failure> {
        let text = self.read(path)?;
        let tri = parse_triangulation(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.stage("parse");
        Ok(tri)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// 15 significant digits, truncated toward zero as in the interval
/// listings this output mirrors.
fn listing(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (14 - mag).max(0) as usize;
    // 17 significant digits are exact enough to cut without re-rounding
    let long = format!("{:.*}", decimals + 3, x);
    let cut = long.len() - 3;
    let mut s = long[..cut].to_string();
    if s.ends_with('.') {
        s.pop();
    }
    s
}

fn parse_slopes(text: &str) -> Result<Vec<Slope>, Failure> {
    // commas separate slopes except inside parentheses
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.iter().map(|s| s.trim().parse::<Slope>().map_err(|e| Failure::Input(format!("slope {s:?}: {e}")))).collect()
}

fn parse_family(text: &str) -> Result<Vec<Slope>, Failure> {
    let bad = || Failure::Input(format!("family {text:?}: expected p/a..p/b or a/q..b/q"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let frac = |s: &str| -> Result<(i64, i64), Failure> {
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
    };
    let ((p0, q0), (p1, q1)) = (frac(a)?, frac(b)?);
    let range = |lo: i64, hi: i64| -> Vec<i64> {
        if lo <= hi {
            (lo..=hi).collect()
        } else {
            (hi..=lo).rev().collect()
        }
    };
    let pairs: Vec<(i64, i64)> = if p0 == p1 {
        range(q0, q1).into_iter().map(|q| (p0, q)).collect()
    } else if q0 == q1 {
        range(p0, p1).into_iter().map(|p| (p, q0)).collect()
    } else {
        return Err(bad());
    };
    pairs.into_iter().map(|(p, q)| Slope::new(p, q).map_err(|e| Failure::Input(format!("slope {p}/{q}: {e}")))).collect()
}

fn shapes_value(run: &Run, f: &Filled) -> Value {
    Value::Array(f.shapes.shapes().iter().map(|z| json!([run.num(z.re), run.num(z.im)])).collect())
}

fn certificate_value(run: &Run, f: &Filled) -> Value {
    let c = &f.certificate;
    json!({
        "geometric": c.geometric,
        "unique": c.unique,
        "boxes": c.boxes.iter().map(|b| json!({"re": run.interval(b.re), "im": run.interval(b.im)})).collect::<Vec<_>>(),
        "system_hash": c.system_hash,
        "square_rows": c.square_rows,
    })
}

fn execute(cli: &Cli, run: &mut Run) -> Result<Value, Failure> {
    match &cli.command {
        Command::Validate { file } => {
            let tri = run.triangulation(file)?;
            let report = validate(&tri);
            run.stage("validate");
            run.line(format!("tetrahedra: {}", report.tetrahedra));
            run.line(format!("edge classes: {}", report.edge_classes));
            run.line(format!("cusps: {}", report.cusps));
            run.line(format!("link euler characteristics: {:?}", report.euler_characteristics));
            for p in &report.problems {
                run.line(format!("problem: {p}"));
            }
            let problems: Vec<String> = report.problems.iter().map(|p| p.to_string()).collect();
            let value = json!({
                "tetrahedra": report.tetrahedra,
                "edge_classes": report.edge_classes,
                "cusps": report.cusps,
                "euler_characteristics": report.euler_characteristics,
                "problems": problems,
            });
            if report.passes() {
                Ok(value)
            } else {
                Err(Failure::Verification(format!("{} problem(s)", problems.len())))
            }
        }
        Command::Solve { file } => {
            let tri = run.triangulation(file)?;
            let sys = gluing_system(&tri, None).map_err(|e| Failure::Input(e.to_string()))?;
            let (shapes, trace) = solve_with(&sys, None, &run.options()).map_err(|e| Failure::Verification(e.to_string()))?;
            run.stage("solve");
            for (j, z) in shapes.shapes().iter().enumerate() {
                let line = format!("z{j} = {} + {}*I", run.show(z.re), run.show(z.im));
                run.line(line);
            }
            run.line(format!("iterations: {}, attempts: {}", trace.iterations, trace.attempts));
            let values: Vec<Value> = shapes.shapes().iter().map(|z| json!([run.num(z.re), run.num(z.im)])).collect();
            Ok(json!({
                "shapes": values,
                "geometric": shapes.is_geometric(),
                "iterations": trace.iterations,
                "attempts": trace.attempts,
                "final_residual": trace.residuals.last().map(|&r| run.num(r)),
            }))
        }
        Command::Certify { file } => {
            let tri = run.triangulation(file)?;
            let f = complete(&tri, &run.options()).map_err(|e| Failure::Verification(e.to_string()))?;
            run.stage("solve+certify");
            run.line(render_certificate(&f.certificate));
            let value = json!({ "certificate": certificate_value(run, &f), "shapes": shapes_value(run, &f) });
            if f.certificate.geometric && f.certificate.unique {
                Ok(value)
            } else {
                Err(Failure::Verification("solution is not certified geometric".into()))
            }
        }
        Command::Volume { file } => {
            let tri = run.triangulation(file)?;
            let f = complete(&tri, &run.options()).map_err(|e| Failure::Verification(e.to_string()))?;
            run.stage("solve+certify");
            let enc = f.certificate.volume_enclosure.ok_or_else(|| Failure::Verification("solution is not certified geometric".into()))?;
            run.stage("volume");
            run.line(run.show(f.volume.value));
            run.line(format!("enclosure: {}", decorated(enc)));
            Ok(json!({ "volume": run.num(f.volume.value), "enclosure": run.interval(enc) }))
        }
        Command::Fill { file, slopes } => {
            let tri = run.triangulation(file)?;
            let slopes = parse_slopes(slopes)?;
            let f = fill_with(&tri, &slopes, &run.options()).map_err(|e| match e {
                hypercusp::filling::FillError::CuspOutOfRange { .. } | hypercusp::filling::FillError::System(_) => {
                    Failure::Input(e.to_string())
                }
                e => Failure::Verification(e.to_string()),
            })?;
            run.stage("fill");
            run.line(render_certificate(&f.certificate));
            for b in &f.certificate.boxes {
                run.line(decorated_box(*b));
            }
            run.line(format!("volume: {}", run.show(f.volume.value)));
            let value = json!({
                "slopes": slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "certificate": certificate_value(run, &f),
                "volume": run.num(f.volume.value),
                "enclosure": f.certificate.volume_enclosure.map(|e| run.interval(e)),
            });
            if f.certificate.geometric && f.certificate.unique {
                Ok(value)
            } else {
                Err(Failure::Verification("filled solution is not certified geometric".into()))
            }
        }
        Command::Sweep { file, cusp, family, fixed, out, parallel } => {
            let tri = run.triangulation(file)?;
            let family = parse_family(family)?;
            let fixed = match fixed {
                Some(s) => parse_slopes(s)?,
                None => vec![Slope::Unfilled; tri.cusps().len().saturating_sub(1)],
            };
            let opts = SweepOptions { parallel: *parallel, solve: run.options() };
            let s = sweep(&tri, *cusp, &family, &fixed, &opts).map_err(|e| Failure::Input(e.to_string()))?;
            run.stage("sweep");
            std::fs::write(out, s.to_csv()).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            let certified = s.rows.iter().filter(|r| r.status == SweepStatus::CertifiedGeometric).count();
            for r in &s.rows {
                let v = r.volume.map_or("-".to_string(), |v| run.show(v));
                run.line(format!("{:>8}  {:<20}  {v}", r.slope.to_string(), r.status.as_str()));
            }
            run.line(format!("{certified} of {} rows certified; table written to {}", s.rows.len(), out.display()));
            let rows: Vec<Value> = s
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "slope": r.slope.to_string(),
                        "status": r.status.as_str(),
                        "volume": r.volume.map(|v| run.num(v)),
                        "enclosure": r.enclosure.map(|e| run.interval(e)),
                        "note": r.note,
                    })
                })
                .collect();
            let value = json!({
                "cusp": s.cusp,
                "cusped_volume": s.cusped_volume.map(|v| run.num(v)),
                "rows": rows,
                "certified": certified,
                "csv": out.display().to_string(),
            });
            if certified == s.rows.len() {
                Ok(value)
            } else {
                Err(Failure::Verification(format!("{} row(s) not certified", s.rows.len() - certified)))
            }
        }
        Command::Homology { file, meridian } => {
            let text = run.read(file)?;
            let l = LinkingMatrix::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let h = surgery_homology(&l);
            run.stage("homology");
            run.line(format!("H1 = {h}"));
            run.line(format!("homology sphere: {}", h.is_trivial()));
            let mut value = json!({ "h1": h.to_string(), "group": h, "homology_sphere": h.is_trivial() });
            if let Some(c) = meridian {
                let ok = meridian_zero_surgery_check(&l, *c).map_err(|e| Failure::Input(e.to_string()))?;
                run.line(format!("meridian 0-surgery on component {c} gives Z: {ok}"));
                value["meridian"] = json!({ "component": c, "infinite_cyclic": ok });
                if !ok {
                    return Err(Failure::Verification("meridian 0-surgery does not give Z".into()));
                }
            }
            Ok(value)
        }
        Command::Pd2tri { file, out } => {
            let text = run.read(file)?;
            let pd = parse_pd(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let tri = octahedral_triangulation(&pd).map_err(|e| Failure::Verification(e.to_string()))?;
            run.stage("triangulate");
            let body = serialize_triangulation(&tri);
            std::fs::write(out, &body).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            run.line(format!("{} crossings, {} components -> {} tetrahedra, {} cusps", pd.crossings().len(), pd.components(), tri.tetrahedra(), tri.cusps().len()));
            run.line(format!("written to {}", out.display()));
            Ok(json!({
                "crossings": pd.crossings().len(),
                "components": pd.components(),
                "tetrahedra": tri.tetrahedra(),
                "cusps": tri.cusps().len(),
                "output": out.display().to_string(),
                "output_sha256": hex(&Sha256::digest(body.as_bytes())),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut run = Run {
        hex: cli.hex_floats,
        seed: cli.seed,
        inputs: Vec::new(),
        stages: Vec::new(),
        clock: Instant::now(),
        text: Vec::new(),
    };
    let outcome = execute(&cli, &mut run);
    let (status, code, result) = match outcome {
        Ok(v) => ("ok", 0, v),
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ("verification failed", 1, json!({ "error": msg }))
        }
        Err(Failure::Input(msg)) => {
            eprintln!("input error: {msg}");
            ("input error", 3, json!({ "error": msg }))
        }
    };
    match cli.format {
        Format::Json => {
            let report = RunReport {
                command: std::env::args().skip(1).collect(),
                inputs: run.inputs,
                timings: cli.timings.then_some(run.stages),
                result,
                status,
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Format::Text => {
            for line in &run.text {
                println!("{line}");
            }
            if cli.timings {
                for (name, secs) in &run.stages {
                    println!("time {name}: {secs:.6}s");
                }
            }
        }
    }
    ExitCode::from(code)
}
