//! Canonical pretty-printer: descending total degree, then descending
//! first-variable exponent. Output re-parses to the same polynomial.

use std::fmt;

use super::{Basis, HbarPoly, PhasePoly};
use crate::C64;

fn fmt_f64(v: f64) -> String {
    // `{}` is shortest-round-trip for f64 and never uses exponent notation,
    // so the result stays inside the expression grammar.
    format!("{v}")
}

/// A single real factor with sign split off: (is_negative, magnitude text).
fn signed(v: f64) -> (bool, String) {
    if v < 0.0 {
        (true, fmt_f64(-v))
    } else {
        (false, fmt_f64(v))
    }
}

/// Render a complex scalar as grammar-compatible factors, sign split off.
/// `1` and `-1` render as an empty magnitude so callers can drop the factor.
fn complex_factor(c: C64) -> (bool, String) {
    if c.im == 0.0 {
        let (neg, s) = signed(c.re);
        if s == "1" {
            (neg, String::new())
        } else {
            (neg, s)
        }
    } else if c.re == 0.0 {
        let (neg, s) = signed(c.im);
        if s == "1" {
            (neg, "i".to_string())
        } else {
            (neg, format!("{s}*i"))
        }
    } else {
        // mixed real/imaginary part: parenthesized sum, always positive sign
        let (re_neg, re_s) = signed(c.re);
        let re_part = if re_neg { format!("-{re_s}") } else { re_s };
        let (im_neg, im_s) = signed(c.im);
        let im_mag = if im_s == "1" { "i".to_string() } else { format!("{im_s}*i") };
        let op = if im_neg { "-" } else { "+" };
        (false, format!("({re_part} {op} {im_mag})"))
    }
}

/// Render one ħ-monomial `c ħ^k` as factors.
fn hbar_term_factor(c: C64, k: i32) -> (bool, String) {
    let (neg, scalar) = complex_factor(c);
    let hbar = match k {
        0 => String::new(),
        1 => "hbar".to_string(),
        _ => format!("hbar^{k}"),
    };
    let body = match (scalar.is_empty(), hbar.is_empty()) {
        (true, true) => "1".to_string(),
        (true, false) => hbar,
        (false, true) => scalar,
        (false, false) => format!("{scalar}*{hbar}"),
    };
    (neg, body)
}

/// Render an [`HbarPoly`] coefficient as factors. Multi-term coefficients are
/// parenthesized so they bind correctly under `*`.
fn coeff_factor(h: &HbarPoly) -> (bool, String) {
    let terms: Vec<(i32, C64)> = h.iter().collect();
    match terms.len() {
        0 => (false, "0".to_string()),
        1 => hbar_term_factor(terms[0].1, terms[0].0),
        _ => {
            let mut out = String::from("(");
            for (idx, &(k, c)) in terms.iter().enumerate() {
                let (neg, body) = hbar_term_factor(c, k);
                if idx == 0 {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                out.push_str(&body);
            }
            out.push(')');
            (false, out)
        }
    }
}

fn var_names(basis: Basis) -> (&'static str, &'static str) {
    match basis {
        Basis::Canonical => ("q", "p"),
        Basis::Holomorphic => ("a", "abar"),
    }
}

fn power(name: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

/// Canonical text form of a polynomial.
pub fn pretty(poly: &PhasePoly) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let (n0, n1) = var_names(poly.basis());
    let mut terms: Vec<(&(u32, u32), &HbarPoly)> = poly.terms().collect();
    terms.sort_by(|(ea, _), (eb, _)| {
        let da = ea.0 + ea.1;
        let db = eb.0 + eb.1;
        db.cmp(&da).then(eb.0.cmp(&ea.0))
    });

    let mut out = String::new();
    for (idx, (&(e0, e1), h)) in terms.iter().enumerate() {
        let (neg, coeff) = coeff_factor(h);
        let mut factors: Vec<String> = Vec::new();
        if !(coeff.is_empty() || coeff == "1") || (e0 == 0 && e1 == 0) {
            factors.push(if coeff.is_empty() { "1".to_string() } else { coeff });
        }
        if let Some(f) = power(n0, e0) {
            factors.push(f);
        }
        if let Some(f) = power(n1, e1) {
            factors.push(f);
        }
        let body = factors.join("*");
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::parse_expr;

    #[test]
    fn canonical_ordering() {
        let f = parse_expr("hbar + q*p", Basis::Canonical).unwrap();
        assert_eq!(pretty(&f), "q*p + hbar");
    }

    #[test]
    fn negative_leading_coefficient() {
        let f = parse_expr("-2*q^2 + p", Basis::Canonical).unwrap();
        assert_eq!(pretty(&f), "-2*q^2 + p");
    }

    #[test]
    fn print_parse_round_trip() {
        for (src, basis) in [
            ("q*p + hbar", Basis::Canonical),
            ("0.5*i*hbar + q^3*p", Basis::Canonical),
            ("(1 - 2*i)*a*abar^2 - hbar^2*a", Basis::Holomorphic),
            ("3.25*p^4 - q - 1", Basis::Canonical),
        ] {
            let f = parse_expr(src, basis).unwrap();
            let printed = pretty(&f);
            let g = parse_expr(&printed, basis).unwrap();
            assert!(f.approx_eq(&g, 0.0), "round trip failed: {src} -> {printed}");
        }
    }

    #[test]
    fn zero_prints_as_zero() {
        let f = PhasePoly::zero(Basis::Canonical);
        assert_eq!(pretty(&f), "0");
    }
}
