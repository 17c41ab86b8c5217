//! Hyperbolic volume via the Bloch–Wigner dilogarithm.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::certify::{Certificate, ComplexBox, Interval, IntervalError};
use crate::scalar::Real;
use crate::solver::ShapeAssignment;

/// Last Bernoulli index used by the series.
const SERIES_ORDER: usize = 60;

/// |Im z| at or below this is flagged as a nearly flat tetrahedron.
pub const LOW_PRECISION_IM: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum VolumeError {
    #[error("dilogarithm evaluated at 0 or 1")]
    Pole,
    #[error("certificate is not geometric and unique")]
    NotGeometric,
    #[error("series argument too large for a rigorous bound")]
    OutOfRange,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Bernoulli numbers B₀..B_N (with B₁ = −1/2), exact.
pub fn bernoulli_numbers(count: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(count);
    let mut binom_row: Vec<BigInt> = vec![BigInt::one()];
    for m in 0..count {
        // binom_row holds C(m+1, j) for j = 0..=m+1
        let mut next = vec![BigInt::one(); binom_row.len() + 1];
        for j in 1..binom_row.len() {
            next[j] = &binom_row[j - 1] + &binom_row[j];
        }
        binom_row = next;
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom_row[j].clone()) * bj;
        }
        b.push(-acc / BigRational::from_integer(binom_row[m].clone()));
    }
    b
}

/// Coefficients B_k / (k+1)! of Li₂(w) = Σ c_k u^{k+1}, u = −ln(1−w).
fn series_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut fact = BigInt::one();
        bernoulli_numbers(SERIES_ORDER + 1)
            .into_iter()
            .enumerate()
            .map(|(k, bk)| {
                fact *= BigInt::from(k + 1);
                (bk / BigRational::from_integer(fact.clone())).to_f64().expect("finite coefficient")
            })
            .collect()
    })
}

/// The six images of z under the symmetries of D, with the sign relating
/// D(w) to D(z).
fn orbit<T: Real>(z: Complex<T>) -> [(Complex<T>, T); 6] {
    let one = Complex::new(T::one(), T::zero());
    let (p, m) = (T::one(), -T::one());
    [(z, p), (one - one / z, p), (one / (one - z), p), (one / z, m), (one - z, m), (z / (z - one), m)]
}

/// Index into [`orbit`] minimizing |ln(1 − w)|.
fn best_transform<T: Real>(z: Complex<T>) -> usize {
    let one = Complex::new(T::one(), T::zero());
    let mut best = (0, T::infinity());
    for (i, (w, _)) in orbit(z).iter().enumerate() {
        let m = (one - *w).ln().norm();
        if m < best.1 {
            best = (i, m);
        }
    }
    best.0
}

/// D(z) = Im Li₂(z) + arg(1−z) ln|z|. Exactly 0 for real z.
pub fn bloch_wigner<T: Real>(z: Complex<T>) -> Result<T, VolumeError> {
    let one = Complex::new(T::one(), T::zero());
    if z == Complex::new(T::zero(), T::zero()) || z == one {
        return Err(VolumeError::Pole);
    }
    if z.im == T::zero() {
        return Ok(T::zero());
    }
    let (w, sign) = orbit(z)[best_transform(z)];
    let u = -(one - w).ln();
    let coeffs = series_coefficients();
    let mut power = u;
    let mut li2 = u * T::lit(coeffs[0]);
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        power *= u;
        if c == 0.0 {
            continue;
        }
        let term = power * T::lit(c);
        li2 += term;
        if k > 2 && term.norm() < T::SERIES_CUTOFF {
            break;
        }
    }
    // arg(1 − w) = −Im u
    Ok(sign * (li2.im - u.im * num_traits::Float::ln(w.norm())))
}

/// Rigorous enclosure of D over a box.
pub fn bloch_wigner_interval(z: ComplexBox) -> Result<Interval, VolumeError> {
    if z.contains_zero() || z.contains(1.0, 0.0) {
        return Err(VolumeError::Pole);
    }
    if z.im == Interval::ZERO {
        return Ok(Interval::ZERO);
    }
    let (mr, mi) = z.mid();
    let choice = best_transform(Complex::new(mr, mi));
    let one = ComplexBox::ONE;
    let (w, sign) = match choice {
        0 => (z, 1.0),
        1 => (one - z.recip()?, 1.0),
        2 => (z.recip_one_minus()?, 1.0),
        3 => (z.recip()?, -1.0),
        4 => (one - z, -1.0),
        _ => (z.div(z - one)?, -1.0),
    };
    let u = -(one - w).ln()?;
    let big_u = u.mag();
    let two_pi = Interval::pi().scale(2.0);
    let r = Interval::point(big_u).div(two_pi)?;
    if !(r.hi < 0.9) {
        return Err(VolumeError::OutOfRange);
    }

    let coeffs = series_coefficients();
    let coeff = |k: usize| Interval::point(coeffs[k]).inflate(0.0).inflate(coeffs[k].abs() * 4.0 * f64::EPSILON);
    let mut power = u;
    let mut li2 = u.scale(coeff(0));
    for k in 1..=SERIES_ORDER {
        power = power * u;
        if coeffs[k] != 0.0 {
            li2 = li2 + power.scale(coeff(k));
        }
    }
    // |B_2m| / (2m)! ≤ 2ζ(2m) / (2π)^{2m} ≤ 2ζ(2) / (2π)^{2m}, so the terms
    // past the last even index 2M are bounded by 2ζ(2)·U·r^{2m}, a
    // geometric series in r².
    let next = SERIES_ORDER / 2 + 1;
    let r2 = r.sqr();
    let mut rpow = Interval::ONE;
    for _ in 0..next {
        rpow = rpow * r2;
    }
    let two_zeta2 = Interval::point(3.289_868_133_696_453).inflate(1e-15);
    let tail = (two_zeta2 * Interval::point(big_u) * rpow).div(Interval::ONE - r2)?;
    let li2_im = li2.im + Interval::symmetric(tail.hi);

    let log_abs_w = w.norm_sqr().ln()?.scale(0.5);
    let d = li2_im - u.im * log_abs_w;
    Ok(d.scale(sign))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Contribution<V> {
    pub value: V,
    /// The shape was within 1e−6 of the real line.
    pub low_precision: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeResult<V> {
    pub value: V,
    pub per_tetrahedron: Vec<Contribution<V>>,
}

/// Σ D(zⱼ) with the per-tetrahedron breakdown.
pub fn volume<T: Real>(shapes: &ShapeAssignment<T>) -> Result<VolumeResult<T>, VolumeError> {
    let mut per = Vec::with_capacity(shapes.len());
    let mut total = T::zero();
    for &z in shapes.shapes() {
        let value = bloch_wigner(z)?;
        total += value;
        per.push(Contribution { value, low_precision: num_traits::Float::abs(z.im) <= T::lit(LOW_PRECISION_IM) });
    }
    Ok(VolumeResult { value: total, per_tetrahedron: per })
}

/// Interval sum of D over boxes, with no geometricity requirement.
pub fn interval_volume(boxes: &[ComplexBox]) -> Result<VolumeResult<Interval>, VolumeError> {
    let mut per = Vec::with_capacity(boxes.len());
    let mut total = Interval::ZERO;
    for &b in boxes {
        let value = bloch_wigner_interval(b)?;
        total = total + value;
        per.push(Contribution { value, low_precision: b.im.mig() <= LOW_PRECISION_IM });
    }
    Ok(VolumeResult { value: total, per_tetrahedron: per })
}

/// Certified volume of a geometric, unique certificate.
pub fn volume_enclosure(cert: &Certificate) -> Result<Interval, VolumeError> {
    if !(cert.unique && cert.geometric) {
        return Err(VolumeError::NotGeometric);
    }
    Ok(interval_volume(&cert.boxes)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    /// Lobachevsky function Л(θ) = −∫₀^θ ln|2 sin t| dt by composite
    /// Gauss–Legendre after removing the log singularity at 0.
    fn lobachevsky(theta: f64) -> f64 {
        // odd and π-periodic; keep θ in [0, π/2] so sin t / t stays smooth
        if theta < 0.0 {
            return -lobachevsky(-theta);
        }
        if theta > std::f64::consts::FRAC_PI_2 {
            return -lobachevsky(std::f64::consts::PI - theta);
        }
        if theta == 0.0 {
            return 0.0;
        }
        // ln|2 sin t| = ln(2t) + ln(sin t / t); the first part integrates
        // in closed form
        let closed = theta * ((2.0 * theta).ln() - 1.0);
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let panels = 400;
        let h = theta / panels as f64;
        let mut smooth = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in nodes {
                let t = mid + 0.5 * h * x;
                smooth += 0.5 * h * w * (t.sin() / t).ln();
            }
        }
        -(closed + smooth)
    }

    fn catalan() -> f64 {
        // alternating series, summed in pairs from the tail for accuracy
        let mut s = 0.0;
        for k in (0..2_000_000u64).rev() {
            let t = 1.0 / ((2 * k + 1) as f64).powi(2);
            s += if k % 2 == 0 { t } else { -t };
        }
        s
    }

    #[test]
    fn oracles_match_stated_values() {
        assert!((3.0 * lobachevsky(std::f64::consts::FRAC_PI_3) - 1.0149416064096536).abs() < 1e-14);
        assert!((catalan() - 0.915_965_594_177_219).abs() < 1e-13);
    }

    #[test]
    fn regular_and_square_shapes() {
        let z = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let oracle = 3.0 * lobachevsky(std::f64::consts::FRAC_PI_3);
        assert!((bloch_wigner(z).unwrap() - oracle).abs() < 1e-13);
        assert!((bloch_wigner(Complex64::new(0.0, 1.0)).unwrap() - catalan()).abs() < 1e-13);
        assert_eq!(bloch_wigner(Complex64::new(0.37, 0.0)).unwrap(), 0.0);
        assert_eq!(bloch_wigner(Complex64::new(1.0, 0.0)), Err(VolumeError::Pole));
        assert!((bloch_wigner(Complex::new(0.5f32, 0.866_025_4)).unwrap() - 1.014_941_6).abs() < 1e-5);
    }

    #[test]
    fn general_angles_match_lobachevsky() {
        // D of a shape with angles α, β, γ is Л(α) + Л(β) + Л(γ)
        for z in [Complex64::new(0.3, 0.4), Complex64::new(-2.0, 0.5), Complex64::new(1.7, 3.1), Complex64::new(0.5, 1e-3)] {
            let a = z.arg();
            let b = (1.0 / (1.0 - z)).arg();
            let c = std::f64::consts::PI - a - b;
            let oracle = lobachevsky(a) + lobachevsky(b) + lobachevsky(c);
            assert!((bloch_wigner(z).unwrap() - oracle).abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn interval_encloses_float() {
        for z in [Complex64::new(0.5, 0.866), Complex64::new(0.0, 1.0), Complex64::new(3.0, 0.01), Complex64::new(-0.7, 2.5)] {
            let b = ComplexBox::centered(z.re, z.im, 1e-12);
            let d = bloch_wigner_interval(b).unwrap();
            assert!(d.contains(bloch_wigner(z).unwrap()), "{z} {d:?}");
            assert!(d.width() < 1e-10);
        }
        assert_eq!(bloch_wigner_interval(ComplexBox::point(0.25, 0.0)).unwrap(), Interval::ZERO);
        assert_eq!(bloch_wigner_interval(ComplexBox::centered(1.0, 0.0, 1e-9)), Err(VolumeError::Pole));
    }

    #[test]
    fn bernoulli_small_values() {
        let b = bernoulli_numbers(9);
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[3], r(0, 1));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[8], r(-1, 30));
    }

    #[test]
    fn flat_shapes_are_flagged() {
        let s = ShapeAssignment::new(vec![Complex64::new(0.5, 1e-7), Complex64::new(0.5, 0.5)]);
        let v = volume(&s).unwrap();
        assert!(v.per_tetrahedron[0].low_precision);
        assert!(!v.per_tetrahedron[1].low_precision);
    }
}
