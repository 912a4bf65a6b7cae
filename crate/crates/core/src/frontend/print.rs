use crate::arith::{Poly, Rat};
use crate::integrand::Integrand;

/// Ascending-power text such as `1 - x + 3*x^2`.
pub fn poly_text(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let power = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let body = if k == 0 {
            mag.to_string()
        } else if mag.is_one() {
            power
        } else {
            format!("{mag}*{power}")
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

/// `^k` for nonnegative integers, `^(p/q)` otherwise.
pub fn exponent_text(e: &Rat) -> String {
    if e.is_integer() && !e.is_negative() {
        format!("^{e}")
    } else {
        format!("^({e})")
    }
}

/// Canonical text: cofactor, transcendental factor, then power factors.
pub fn print_expr_var(i: &Integrand, var: &str) -> String {
    let mut parts = Vec::new();
    let bare = i.transc.is_none() && i.factors.is_empty();
    match i.cofactor.as_constant() {
        Some(c) if c.is_one() && !bare => {}
        Some(c) => parts.push(c.to_string()),
        None => parts.push(format!("({})", poly_text(&i.cofactor, var))),
    }
    if let Some(t) = &i.transc {
        parts.push(format!("{}({})", t.kind.name(), poly_text(&t.arg, var)));
    }
    for f in &i.factors {
        parts.push(format!("({}){}", poly_text(&f.base, var), exponent_text(&f.exponent)));
    }
    parts.join(" * ")
}

pub fn print_expr(i: &Integrand) -> String {
    print_expr_var(i, "x")
}
