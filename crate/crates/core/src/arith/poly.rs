//! Dense univariate polynomials over [`Rat`].

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::rat::{denominator_lcm, numerator_gcd, Rat};
use crate::error::Error;

/// Coefficients in ascending degree; the leading entry is never zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivRem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyOpResult {
    Poly(Poly),
    QuotRem(Poly, Poly),
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` encodes the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::int(k as i64))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x0: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x0 + c)
    }

    pub fn divrem(&self, q: &Poly) -> Result<(Poly, Poly), Error> {
        let dq = q.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lead = q.coeffs[dq].clone();
        let mut rem = self.coeffs.clone();
        let Some(dp) = self.degree().filter(|&d| d >= dq) else {
            return Ok((Poly::zero(), self.clone()));
        };
        let mut quot = vec![Rat::zero(); dp - dq + 1];
        for k in (0..=dp - dq).rev() {
            let c = &rem[k + dq] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, qc) in q.coeffs.iter().enumerate() {
                rem[k + j] -= &c * qc;
            }
            quot[k] = c;
        }
        rem.truncate(dq);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic gcd by the Euclidean remainder sequence.
    pub fn gcd(&self, q: &Poly) -> Result<Poly, Error> {
        if self.is_zero() && q.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), q.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Splits `self = c * p` with `p` an integer polynomial of unit content whose
    /// lowest nonzero coefficient is positive.
    pub fn primitive_part(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::zero(), Poly::zero());
        }
        let l = denominator_lcm(&self.coeffs);
        let scaled: Vec<Rat> = self.coeffs.iter().map(|c| c * Rat::int(l.clone())).collect();
        let mut g = numerator_gcd(&scaled);
        let low = scaled.iter().find(|c| !c.is_zero()).expect("nonzero polynomial");
        if low.is_negative() {
            g = -g;
        }
        let content = Rat::new(g.clone(), l);
        let gr = Rat::int(g);
        (content, Poly::new(scaled.iter().map(|c| c / &gr).collect()))
    }

    /// Coefficients of `self` in the basis `1, L, L^2, ...` for a linear `l`.
    pub fn taylor_in(&self, l: &Poly) -> Result<Vec<Rat>, Error> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (quot, rem) = cur.divrem(l)?;
            out.push(rem.as_constant().expect("remainder by a linear divisor is constant"));
            cur = quot;
        }
        Ok(out)
    }

    /// Content as an integer vector after clearing denominators.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = denominator_lcm(&self.coeffs);
        self.coeffs
            .iter()
            .map(|c| (c * Rat::int(l.clone())).numer().clone())
            .collect()
    }

    /// Ratio `r` with `other = r * self`, if the two are proportional.
    pub fn proportional_ratio(&self, other: &Poly) -> Option<Rat> {
        if self.degree() != other.degree() || self.is_zero() {
            return None;
        }
        let r = other.leading()? / self.leading()?;
        (self.scale(&r) == *other).then_some(r)
    }

    /// Polynomial with `x` replaced by `x + h`.
    pub fn shift_arg(&self, h: &Rat) -> Poly {
        let lin = Poly::new(vec![h.clone(), Rat::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * &lin) + &Poly::constant(c.clone()))
    }
}

/// Dispatches the four kernel operations.
pub fn poly_arith(op: PolyOp, p: &Poly, q: &Poly) -> Result<PolyOpResult, Error> {
    Ok(match op {
        PolyOp::Add => PolyOpResult::Poly(p + q),
        PolyOp::Sub => PolyOpResult::Poly(p - q),
        PolyOp::Mul => PolyOpResult::Poly(p * q),
        PolyOp::DivRem => {
            let (a, b) = p.divrem(q)?;
            PolyOpResult::QuotRem(a, b)
        }
    })
}

impl<'b> Add<&'b Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &'b Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'b> Sub<&'b Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &'b Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'b> Mul<&'b Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // Integer convolution over a common denominator; one reduction per coefficient.
        let da = denominator_lcm(&self.coeffs);
        let db = denominator_lcm(&rhs.coeffs);
        let ints = |cs: &[Rat], d: &BigInt| -> Vec<BigInt> { cs.iter().map(|c| c.numer() * (d / c.denom())).collect() };
        let a = ints(&self.coeffs, &da);
        let b = ints(&rhs.coeffs, &db);
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let den = da * db;
        Poly::new(out.into_iter().map(|c| Rat::new(c, den.clone())).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly[{}]", crate::frontend::print::poly_text(self, "x"))
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::frontend::print::poly_text(self, "x"))
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn trims_leading_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
    }

    #[test]
    fn exact_division() {
        let (q, r) = p(&[2, 3, 1]).divrem(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[1]).divrem(&Poly::zero()), Err(Error::DivisionByZeroPoly));
    }

    #[test]
    fn componentwise_add() {
        assert_eq!(&p(&[1, 2]) + &p(&[3, 4]), p(&[4, 6]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[1, 1, 1]).derivative(), p(&[1, 2]));
        assert!(p(&[5]).derivative().is_zero());
        assert_eq!(p(&[0, 0, 0, 0, 1]).derivative(), p(&[0, 0, 0, 4]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[1, 1, 1]).eval(&Rat::int(2)), Rat::int(7));
        assert_eq!(p(&[3, 5, 7]).eval(&Rat::zero()), Rat::int(3));
        assert!(p(&[1, -1]).eval(&Rat::one()).is_zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(
            p(&[2, 4]).gcd(&Poly::zero()).unwrap(),
            Poly::new(vec![Rat::new(1, 2), Rat::one()])
        );
        // Euclid: (1+x+x^2) - (1-x+x^2) = 2x, then 1-x+x^2 mod x = 1.
        assert_eq!(p(&[1, 1, 1]).gcd(&p(&[1, -1, 1])).unwrap(), Poly::one());
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Err(Error::BothZero));
    }

    #[test]
    fn primitive_part_sign_and_content() {
        let q = Poly::new(vec![Rat::new(-3, 2), Rat::new(1, 2)]);
        let (c, pp) = q.primitive_part();
        assert_eq!(c, Rat::new(-1, 2));
        assert_eq!(pp, p(&[3, -1]));
    }

    #[test]
    fn taylor_expansion_in_linear_factor() {
        // 3 + x = 2 + (1 + x)
        assert_eq!(
            p(&[3, 1]).taylor_in(&p(&[1, 1])).unwrap(),
            vec![Rat::int(2), Rat::one()]
        );
        // x^2 = 1 - 2(1+x) + (1+x)^2
        assert_eq!(
            p(&[0, 0, 1]).taylor_in(&p(&[1, 1])).unwrap(),
            vec![Rat::int(1), Rat::int(-2), Rat::int(1)]
        );
    }

    #[test]
    fn shifted_argument() {
        assert_eq!(p(&[0, 0, 1]).shift_arg(&Rat::one()), p(&[1, 2, 1]));
    }
}
