//! Newton's method on the logarithmic gluing equations.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::complex_least_squares;
use crate::scalar::Real;
use crate::triangulation::GluingSystem;

/// Approximate shape parameters, one per tetrahedron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeAssignment<T> {
    shapes: Vec<Complex<T>>,
}

impl<T: Real> ShapeAssignment<T> {
    pub fn new(shapes: Vec<Complex<T>>) -> Self {
        ShapeAssignment { shapes }
    }

    /// Every tetrahedron at the regular shape exp(iπ/3).
    pub fn regular(n: usize) -> Self {
        let z = Complex::from_polar(T::one(), T::PI() / T::lit(3.0));
        ShapeAssignment { shapes: vec![z; n] }
    }

    pub fn shapes(&self) -> &[Complex<T>] {
        &self.shapes
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Principal logarithms of (z, z′, z″) per tetrahedron.
    pub fn log_branch_data(&self) -> Vec<[Complex<T>; 3]> {
        self.shapes.iter().map(|&z| shape_logs(z)).collect()
    }

    /// All shapes strictly in the upper half plane.
    pub fn is_geometric(&self) -> bool {
        self.shapes.iter().all(|z| z.im > T::zero())
    }

    pub fn cast<U: Real>(&self) -> ShapeAssignment<U> {
        let c = |x: T| U::lit(x.to_f64_lossy());
        ShapeAssignment { shapes: self.shapes.iter().map(|z| Complex::new(c(z.re), c(z.im))).collect() }
    }
}

pub(crate) fn shape_logs<T: Real>(z: Complex<T>) -> [Complex<T>; 3] {
    let one = Complex::new(T::one(), T::zero());
    let zp = one / (one - z);
    let zpp = one - one / z;
    [z.ln(), zp.ln(), zpp.ln()]
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SolveError {
    #[error("the system has no equations or no unknowns")]
    EmptySystem,
    #[error("{shapes} shapes given for a system in {tetrahedra} tetrahedra")]
    WidthMismatch { shapes: usize, tetrahedra: usize },
    #[error("shape of tetrahedron {tet} is at a logarithm pole")]
    Pole { tet: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("tetrahedron {tet} degenerated (shape within the exclusion disc of 0 or 1)")]
    Degenerate { tet: usize },
    #[error("Jacobian is numerically rank deficient")]
    RankDeficient,
}

#[derive(Clone, Debug)]
pub struct SolveOptions<T> {
    pub tolerance: T,
    pub max_iterations: usize,
    pub degeneracy_radius: T,
    /// Random restarts after the first attempt fails.
    pub retries: usize,
    pub seed: u64,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        SolveOptions {
            tolerance: T::NEWTON_TOLERANCE,
            max_iterations: 50,
            degeneracy_radius: T::DEGENERACY_RADIUS,
            retries: 8,
            seed: 0,
        }
    }
}

/// History of a successful solve.
#[derive(Clone, Debug)]
pub struct SolveTrace<T> {
    /// Residual before each Newton step and after the last one.
    pub residuals: Vec<T>,
    pub iterations: usize,
    /// 1 when the initial guess converged, more when restarts were needed.
    pub attempts: usize,
}

fn check_width<T: Real>(sys: &GluingSystem, shapes: &ShapeAssignment<T>) -> Result<(), SolveError> {
    if shapes.len() != sys.tetrahedra() {
        return Err(SolveError::WidthMismatch { shapes: shapes.len(), tetrahedra: sys.tetrahedra() });
    }
    Ok(())
}

/// Row functions Σ (a log z + b log z′ + c log z″) − νπi.
pub fn row_values<T: Real>(sys: &GluingSystem, shapes: &ShapeAssignment<T>) -> Result<Vec<Complex<T>>, SolveError> {
    check_width(sys, shapes)?;
    for (tet, z) in shapes.shapes().iter().enumerate() {
        if z.norm_sqr() == T::zero() || (*z - T::one()).norm_sqr() == T::zero() {
            return Err(SolveError::Pole { tet });
        }
    }
    let logs = shapes.log_branch_data();
    let pi = T::PI();
    Ok(sys
        .rows()
        .iter()
        .map(|r| {
            let mut acc = Complex::new(T::zero(), -T::lit(r.target as f64) * pi);
            for (j, l) in logs.iter().enumerate() {
                for s in 0..3 {
                    let c = r.coefficients[3 * j + s];
                    if c != 0 {
                        acc += l[s] * T::lit(c as f64);
                    }
                }
            }
            acc
        })
        .collect())
}

/// ∞-norm of the row functions.
pub fn residual<T: Real>(sys: &GluingSystem, shapes: &ShapeAssignment<T>) -> Result<T, SolveError> {
    Ok(row_values(sys, shapes)?.iter().map(|v| v.norm()).fold(T::zero(), |a, b| if b > a { b } else { a }))
}

fn jacobian<T: Real>(sys: &GluingSystem, z: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    let one = Complex::new(T::one(), T::zero());
    let derivs: Vec<[Complex<T>; 3]> = z.iter().map(|&z| [one / z, one / (one - z), one / (z * (z - one))]).collect();
    sys.rows()
        .iter()
        .map(|r| {
            derivs
                .iter()
                .enumerate()
                .map(|(j, d)| {
                    let c = &r.coefficients[3 * j..3 * j + 3];
                    d[0] * T::lit(c[0] as f64) + d[1] * T::lit(c[1] as f64) + d[2] * T::lit(c[2] as f64)
                })
                .collect()
        })
        .collect()
}

fn newton<T: Real>(
    sys: &GluingSystem,
    start: Vec<Complex<T>>,
    opts: &SolveOptions<T>,
) -> Result<(Vec<Complex<T>>, Vec<T>), SolveError> {
    let mut z = start;
    let mut history = Vec::new();
    let rank_tol = T::epsilon() * T::lit(1e4);
    for _ in 0..=opts.max_iterations {
        for (tet, w) in z.iter().enumerate() {
            if w.norm() < opts.degeneracy_radius || (*w - T::one()).norm() < opts.degeneracy_radius {
                return Err(SolveError::Degenerate { tet });
            }
        }
        let shapes = ShapeAssignment { shapes: z.clone() };
        let f = row_values(sys, &shapes)?;
        let res = f.iter().map(|v| v.norm()).fold(T::zero(), |a, b| if b > a { b } else { a });
        if !res.is_finite() {
            return Err(SolveError::NoConvergence { iterations: history.len(), residual: f64::NAN });
        }
        history.push(res);
        if res < opts.tolerance {
            // one more step while quadratic convergence still pays
            let rhs: Vec<Complex<T>> = f.iter().map(|v| -*v).collect();
            if let Some(step) = complex_least_squares(&jacobian(sys, &z), &rhs, rank_tol) {
                let polished: Vec<Complex<T>> = z.iter().zip(step.solution).map(|(w, d)| *w + d).collect();
                let p = residual(sys, &ShapeAssignment { shapes: polished.clone() });
                if let Ok(p) = p {
                    if p <= res {
                        history.push(p);
                        return Ok((polished, history));
                    }
                }
            }
            return Ok((z, history));
        }
        if history.len() > opts.max_iterations {
            break;
        }
        let rhs: Vec<Complex<T>> = f.iter().map(|v| -*v).collect();
        let step = complex_least_squares(&jacobian(sys, &z), &rhs, rank_tol).ok_or(SolveError::RankDeficient)?;
        for (w, d) in z.iter_mut().zip(step.solution) {
            *w += d;
        }
    }
    Err(SolveError::NoConvergence { iterations: opts.max_iterations, residual: history.last().map_or(f64::NAN, |r| r.to_f64_lossy()) })
}

/// Solves with default options.
pub fn solve<T: Real>(sys: &GluingSystem, init: Option<&ShapeAssignment<T>>) -> Result<ShapeAssignment<T>, SolveError> {
    solve_with(sys, init, &SolveOptions::default()).map(|(s, _)| s)
}

/// Newton from `init` (default exp(iπ/3) everywhere), then up to
/// `opts.retries` restarts from seeded random upper-half-plane
/// perturbations. The first attempt's error is returned if all fail.
pub fn solve_with<T: Real>(
    sys: &GluingSystem,
    init: Option<&ShapeAssignment<T>>,
    opts: &SolveOptions<T>,
) -> Result<(ShapeAssignment<T>, SolveTrace<T>), SolveError> {
    let n = sys.tetrahedra();
    if n == 0 || sys.is_empty() {
        return Err(SolveError::EmptySystem);
    }
    let base = match init {
        Some(s) => {
            check_width(sys, s)?;
            s.clone()
        }
        None => ShapeAssignment::regular(n),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut first_err = None;
    for attempt in 0..=opts.retries {
        let start: Vec<Complex<T>> = if attempt == 0 {
            base.shapes.clone()
        } else {
            let amp = 0.25 * attempt as f64;
            base.shapes
                .iter()
                .map(|z| {
                    let dx: f64 = rng.gen_range(-amp..amp);
                    let dy: f64 = rng.gen_range(-amp..amp);
                    let im = (z.im.to_f64_lossy() + dy).max(0.05);
                    Complex::new(z.re + T::lit(dx), T::lit(im))
                })
                .collect()
        };
        match newton(sys, start, opts) {
            Ok((z, residuals)) => {
                let iterations = residuals.len() - 1;
                return Ok((ShapeAssignment { shapes: z }, SolveTrace { residuals, iterations, attempts: attempt + 1 }));
            }
            Err(e @ (SolveError::WidthMismatch { .. } | SolveError::EmptySystem)) => return Err(e),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one attempt"))
}
