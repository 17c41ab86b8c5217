//! Interval certification of approximate gluing-equation solutions.

mod interval;
mod render;

pub use interval::{ComplexBox, Interval, IntervalError};
pub use render::{decorated, decorated_box, render_certificate};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hexfloat;
use crate::linalg::complex_inverse;
use crate::solver::{residual, SolveError, ShapeAssignment};
use crate::triangulation::GluingSystem;
use crate::volume::interval_volume;

/// Largest floating residual accepted as a starting point.
pub const MAX_START_RESIDUAL: f64 = 1e-8;
/// Number of ×8 inflations after the first attempt.
pub const INFLATION_STEPS: usize = 6;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CertifyError {
    #[error("approximate solution has residual {0:e}, above the certification threshold")]
    ResidualTooLarge(f64),
    #[error("no square subsystem of full rank")]
    RankDeficient,
    #[error("Krawczyk containment failed after {0} attempts")]
    NotCertified(usize),
    #[error("interval residual of row {0} excludes zero")]
    ResidualExcludesZero(usize),
    #[error("{boxes} boxes for a system in {tetrahedra} tetrahedra")]
    WidthMismatch { boxes: usize, tetrahedra: usize },
    #[error("box {tet}: {source}")]
    Interval { tet: usize, source: IntervalError },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("malformed certificate document: {0}")]
    Malformed(String),
}

/// Outcome of a successful Krawczyk test.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub boxes: Vec<ComplexBox>,
    /// Every box lies strictly in the upper half plane.
    pub geometric: bool,
    /// Krawczyk containment held, so each box holds exactly one solution of
    /// the square subsystem.
    pub unique: bool,
    /// Interval volume, present when geometric.
    pub volume_enclosure: Option<Interval>,
    /// [`GluingSystem::digest`] of the certified system.
    pub system_hash: String,
    /// Rows forming the square subsystem.
    pub square_rows: Vec<usize>,
}

/// Logarithms of (z, z′, z″) over a box; slots not in `used` are left at
/// zero so that an unused z″ on its branch cut does no harm.
fn logs(tet: usize, z: ComplexBox, used: [bool; 3]) -> Result<[ComplexBox; 3], CertifyError> {
    let wrap = |source| CertifyError::Interval { tet, source };
    if z.contains(1.0, 0.0) {
        return Err(wrap(IntervalError::DivisionByZero));
    }
    let mut out = [ComplexBox::ZERO; 3];
    if used[0] {
        out[0] = z.ln().map_err(wrap)?;
    }
    if used[1] {
        out[1] = z.recip_one_minus().and_then(ComplexBox::ln).map_err(wrap)?;
    }
    if used[2] {
        out[2] = (ComplexBox::ONE - z.recip().map_err(wrap)?).ln().map_err(wrap)?;
    }
    Ok(out)
}

fn derivatives(tet: usize, z: ComplexBox) -> Result<[ComplexBox; 3], CertifyError> {
    let wrap = |source| CertifyError::Interval { tet, source };
    let inv = z.recip().map_err(wrap)?;
    let inv_one_minus = z.recip_one_minus().map_err(wrap)?;
    // 1/(z(z−1)) = −1/z · 1/(1−z)
    Ok([inv, inv_one_minus, -(inv * inv_one_minus)])
}

fn check_boxes(sys: &GluingSystem, boxes: &[ComplexBox]) -> Result<(), CertifyError> {
    if boxes.len() != sys.tetrahedra() {
        return Err(CertifyError::WidthMismatch { boxes: boxes.len(), tetrahedra: sys.tetrahedra() });
    }
    Ok(())
}

fn combine(coeffs: &[i64], terms: &[[ComplexBox; 3]]) -> ComplexBox {
    let mut acc = ComplexBox::ZERO;
    for (j, t) in terms.iter().enumerate() {
        for s in 0..3 {
            let c = coeffs[3 * j + s];
            if c != 0 {
                acc = acc + t[s].scale(Interval::point(c as f64));
            }
        }
    }
    acc
}

/// Enclosures of every row function over the boxes.
pub fn interval_residual(sys: &GluingSystem, boxes: &[ComplexBox]) -> Result<Vec<ComplexBox>, CertifyError> {
    check_boxes(sys, boxes)?;
    let used = |t: usize, s: usize| sys.rows().iter().any(|r| r.coefficients[3 * t + s] != 0);
    let l: Vec<[ComplexBox; 3]> = boxes
        .iter()
        .enumerate()
        .map(|(t, &b)| logs(t, b, [used(t, 0), used(t, 1), used(t, 2)]))
        .collect::<Result<_, _>>()?;
    let pi = Interval::pi();
    Ok(sys
        .rows()
        .iter()
        .map(|r| {
            let target = ComplexBox::new(Interval::ZERO, pi.scale(r.target as f64));
            combine(&r.coefficients, &l) - target
        })
        .collect())
}

fn interval_jacobian(sys: &GluingSystem, rows: &[usize], boxes: &[ComplexBox]) -> Result<Vec<Vec<ComplexBox>>, CertifyError> {
    let d: Vec<[ComplexBox; 3]> = boxes.iter().enumerate().map(|(t, &b)| derivatives(t, b)).collect::<Result<_, _>>()?;
    Ok(rows
        .iter()
        .map(|&i| {
            let c = &sys.rows()[i].coefficients;
            (0..boxes.len()).map(|j| combine(&c[3 * j..3 * j + 3], &d[j..j + 1])).collect()
        })
        .collect())
}

fn point_box(z: Complex64) -> ComplexBox {
    ComplexBox::point(z.re, z.im)
}

/// Krawczyk operator image of `x` about the centre `c`.
fn krawczyk_image(
    sys: &GluingSystem,
    rows: &[usize],
    y: &[Vec<ComplexBox>],
    f_centre: &[ComplexBox],
    centre: &[ComplexBox],
    x: &[ComplexBox],
) -> Result<Vec<ComplexBox>, CertifyError> {
    let n = x.len();
    let jx = interval_jacobian(sys, rows, x)?;
    let dx: Vec<ComplexBox> = x.iter().zip(centre).map(|(a, b)| *a - *b).collect();
    let mut k = Vec::with_capacity(n);
    for i in 0..n {
        let mut yf = ComplexBox::ZERO;
        for j in 0..n {
            yf = yf + y[i][j] * f_centre[j];
        }
        let mut acc = centre[i] - yf;
        for j in 0..n {
            // (I − Y J(X))_{ij}
            let mut m = if i == j { ComplexBox::ONE } else { ComplexBox::ZERO };
            for l in 0..n {
                m = m - y[i][l] * jx[l][j];
            }
            acc = acc + m * dx[j];
        }
        k.push(acc);
    }
    Ok(k)
}

/// Runs the Krawczyk test on a square subsystem around `approx`, with an
/// ε-inflation ladder, and checks the full system over the resulting boxes.
pub fn krawczyk_certify(sys: &GluingSystem, approx: &ShapeAssignment<f64>) -> Result<Certificate, CertifyError> {
    let n = sys.tetrahedra();
    check_boxes(sys, &vec![ComplexBox::ZERO; approx.len()])?;
    let res = residual(sys, approx)?;
    if !(res < MAX_START_RESIDUAL) {
        return Err(CertifyError::ResidualTooLarge(res));
    }
    let rows = sys.square_subsystem();
    if rows.len() < n {
        return Err(CertifyError::RankDeficient);
    }

    let centre: Vec<ComplexBox> = approx.shapes().iter().map(|&z| point_box(z)).collect();
    let jc = interval_jacobian(sys, &rows, &centre)?;
    let jmid: Vec<Vec<Complex64>> =
        jc.iter().map(|r| r.iter().map(|b| Complex64::new(b.re.mid(), b.im.mid())).collect()).collect();
    let y = complex_inverse(&jmid).ok_or(CertifyError::RankDeficient)?;
    let y: Vec<Vec<ComplexBox>> = y.iter().map(|r| r.iter().map(|&v| point_box(v)).collect()).collect();
    let full_centre = interval_residual(sys, &centre)?;
    let f_centre: Vec<ComplexBox> = rows.iter().map(|&i| full_centre[i]).collect();

    let mut radius = (10.0 * res).max(1e-14);
    let mut certified = None;
    for _ in 0..=INFLATION_STEPS {
        let x: Vec<ComplexBox> = approx.shapes().iter().map(|z| ComplexBox::centered(z.re, z.im, radius)).collect();
        if let Ok(k) = krawczyk_image(sys, &rows, &y, &f_centre, &centre, &x) {
            if k.iter().zip(&x).all(|(kb, xb)| xb.interior_contains(*kb)) {
                certified = Some(k);
                break;
            }
        }
        radius *= 8.0;
    }
    let boxes = certified.ok_or(CertifyError::NotCertified(INFLATION_STEPS + 1))?;

    for (i, r) in interval_residual(sys, &boxes)?.iter().enumerate() {
        if !r.contains_zero() {
            return Err(CertifyError::ResidualExcludesZero(i));
        }
    }
    let geometric = boxes.iter().all(|b| b.im.lo > 0.0);
    let volume_enclosure = if geometric { interval_volume(&boxes).ok().map(|v| v.value) } else { None };
    Ok(Certificate { boxes, geometric, unique: true, volume_enclosure, system_hash: sys.digest(), square_rows: rows })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDocument {
    re: [String; 2],
    im: [String; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDocument {
    system_hash: String,
    geometric: bool,
    unique: bool,
    square_rows: Vec<usize>,
    volume_enclosure: Option<[String; 2]>,
    boxes: Vec<BoxDocument>,
}

fn hex_pair(i: Interval) -> [String; 2] {
    [hexfloat::format(i.lo), hexfloat::format(i.hi)]
}

fn unhex_pair(p: &[String; 2]) -> Result<Interval, CertifyError> {
    let get = |s: &str| hexfloat::parse(s).ok_or_else(|| CertifyError::Malformed(format!("bad hex float {s:?}")));
    let (lo, hi) = (get(&p[0])?, get(&p[1])?);
    if !(lo <= hi) {
        return Err(CertifyError::Malformed(format!("inverted interval {lo} > {hi}")));
    }
    Ok(Interval::new(lo, hi))
}

impl Certificate {
    /// JSON with exact hexadecimal bounds.
    pub fn to_json(&self) -> String {
        let doc = CertificateDocument {
            system_hash: self.system_hash.clone(),
            geometric: self.geometric,
            unique: self.unique,
            square_rows: self.square_rows.clone(),
            volume_enclosure: self.volume_enclosure.map(hex_pair),
            boxes: self.boxes.iter().map(|b| BoxDocument { re: hex_pair(b.re), im: hex_pair(b.im) }).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertifyError> {
        let doc: CertificateDocument = serde_json::from_str(text).map_err(|e| CertifyError::Malformed(e.to_string()))?;
        let boxes = doc
            .boxes
            .iter()
            .map(|b| Ok(ComplexBox::new(unhex_pair(&b.re)?, unhex_pair(&b.im)?)))
            .collect::<Result<Vec<_>, CertifyError>>()?;
        Ok(Certificate {
            boxes,
            geometric: doc.geometric,
            unique: doc.unique,
            volume_enclosure: doc.volume_enclosure.as_ref().map(unhex_pair).transpose()?,
            system_hash: doc.system_hash,
            square_rows: doc.square_rows,
        })
    }
}
