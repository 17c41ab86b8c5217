//! Decorated-decimal rendering: `1.1126478571421?` means the true value
//! lies within one unit of the last printed digit.

use super::{Certificate, ComplexBox, Interval};

fn positional(digits: &str, exp: i32, neg: bool) -> String {
    let d = digits.len() as i32;
    let body = if exp >= 0 && exp < d {
        let (a, b) = digits.split_at(exp as usize + 1);
        if b.is_empty() { a.to_string() } else { format!("{a}.{b}") }
    } else if exp < 0 && exp > -6 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let (a, b) = digits.split_at(1);
        let frac = if b.is_empty() { String::new() } else { format!(".{b}") };
        return format!("{}{a}{frac}?e{exp}", if neg { "-" } else { "" });
    };
    format!("{}{body}?", if neg { "-" } else { "" })
}

/// Shortest decimal whose last digit ±1 covers the interval.
pub fn decorated(iv: Interval) -> String {
    if iv.contains_zero() {
        let m = iv.mag();
        if m == 0.0 {
            return "0".into();
        }
        let e = m.log10().floor() as i32 + 1;
        return format!("0.?e{e}");
    }
    let mid = iv.mid();
    for sig in (1..=17usize).rev() {
        let s = format!("{:.*e}", sig - 1, mid.abs());
        let (mant, exp) = s.split_once('e').expect("scientific format");
        let exp: i32 = exp.parse().expect("integer exponent");
        let digits: String = mant.chars().filter(|c| *c != '.').collect();
        let m: f64 = digits.parse().expect("digits");
        let unit = 10f64.powi(exp - sig as i32 + 1);
        let (lo, hi) = if mid < 0.0 { (-iv.hi, -iv.lo) } else { (iv.lo, iv.hi) };
        if (m - 1.0) * unit <= lo && hi <= (m + 1.0) * unit {
            return positional(&digits, exp, mid < 0.0);
        }
    }
    format!("[{:e} .. {:e}]", iv.lo, iv.hi)
}

pub fn decorated_box(b: ComplexBox) -> String {
    let re = decorated(b.re);
    if b.im.mid() < 0.0 && !b.im.contains_zero() {
        format!("{re} - {}*I", decorated(-b.im))
    } else {
        format!("{re} + {}*I", decorated(b.im))
    }
}

/// `(True, [box, box, ...])`, with `True` exactly when the certificate is
/// unique and geometric.
pub fn render_certificate(cert: &Certificate) -> String {
    let flag = if cert.unique && cert.geometric { "True" } else { "False" };
    let boxes: Vec<String> = cert.boxes.iter().map(|b| decorated_box(*b)).collect();
    format!("({flag}, [{}])", boxes.join(", "))
}
