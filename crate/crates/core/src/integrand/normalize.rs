use super::{Integrand, PowerFactor};
use crate::arith::Rat;
use crate::error::{Error, Result};

/// Canonical form: constant bases folded into the cofactor, proportional bases
/// merged onto the earliest base in `(degree, coefficients)` order, zero exponents
/// dropped, factors sorted.
pub fn normalize(raw: &Integrand) -> Result<Integrand> {
    normalize_with(raw, false)
}

/// As [`normalize`], but nonconstant factors with exponent zero are kept.
pub fn normalize_keeping_zero(raw: &Integrand) -> Result<Integrand> {
    normalize_with(raw, true)
}

fn normalize_with(raw: &Integrand, keep_zero: bool) -> Result<Integrand> {
    if raw.cofactor.is_zero() {
        return Err(Error::UnsupportedForm("zero integrand".into()));
    }
    if let Some(t) = &raw.transc {
        if t.arg.degree() != Some(1) {
            return Err(Error::UnsupportedForm(format!(
                "{} argument must be linear",
                t.kind.name()
            )));
        }
    }
    let mut cofactor = raw.cofactor.clone();
    let mut factors: Vec<PowerFactor> = Vec::new();
    for f in &raw.factors {
        if f.exponent.is_zero() && !(keep_zero && f.degree() > 0) {
            continue;
        }
        match f.base.degree() {
            None => return Err(Error::UnsupportedForm("zero base".into())),
            Some(0) => {
                let c = f.base.coeff(0);
                let s = scalar_power(&c, &f.exponent)?;
                cofactor = cofactor.scale(&s);
            }
            Some(_) => factors.push(f.clone()),
        }
    }
    factors.sort_by(|a, b| (a.degree(), &a.base).cmp(&(b.degree(), &b.base)));
    let mut kept: Vec<PowerFactor> = Vec::new();
    for f in factors {
        let merged = kept
            .iter_mut()
            .find_map(|k| k.base.proportional_ratio(&f.base).map(|r| (k, r)));
        match merged {
            Some((k, r)) => {
                let s = scalar_power(&r, &f.exponent)?;
                cofactor = cofactor.scale(&s);
                k.exponent += &f.exponent;
            }
            None => kept.push(f),
        }
    }
    kept.retain(|f| keep_zero || !f.exponent.is_zero());
    Ok(Integrand {
        cofactor,
        transc: raw.transc.clone(),
        factors: kept,
    })
}

/// `r^e` for a proportionality ratio; only branch-free rational values are accepted.
fn scalar_power(r: &Rat, e: &Rat) -> Result<Rat> {
    if !r.is_positive() && !e.is_integer() {
        return Err(Error::UnsupportedMerge(format!(
            "ratio {r} is not positive under exponent {e}"
        )));
    }
    r.rational_pow(e)
        .ok_or_else(|| Error::UnsupportedMerge(format!("{r}^({e}) is not rational")))
}
