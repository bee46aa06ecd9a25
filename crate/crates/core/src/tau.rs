//! Exact arithmetic with the formal symbol `τ = 2π`.
//!
//! Kähler classes such as `2π c1(L) + ε c1(A)` have coefficients that are
//! polynomials in `τ` with rational coefficients. Keeping `τ` symbolic lets
//! ratios like the scalar-curvature average stay exact; floating point only
//! enters when a value is finally evaluated with [`TauPoly::to_f64`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if int.contains('/') || frac.contains('/') {
            return Err(Error::Parse(format!("bad rational `{s}`")));
        }
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num: BigInt = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    s.parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

/// Render as `p/q`, or `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Scalars the intersection engine can multiply-accumulate.
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = Self>
{
    fn from_rational(r: &BigRational) -> Self;
}

impl Coefficient for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

/// Polynomial in `τ` with rational coefficients; `coeffs[k]` multiplies `τ^k`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TauPoly {
    coeffs: Vec<BigRational>,
}

impl TauPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(r: BigRational) -> Self {
        Self::new(vec![r])
    }

    /// `c · τ^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn tau() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power of `τ` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Evaluate at `τ = 2π`.
    pub fn to_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * TAU + rational_to_f64(c))
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(<Self as One>::one(), |acc, _| acc * self.clone())
    }
}

impl Coefficient for TauPoly {
    fn from_rational(r: &BigRational) -> Self {
        Self::constant(r.clone())
    }
}

impl Zero for TauPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for TauPoly {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for TauPoly {
    type Output = TauPoly;
    fn add(self, rhs: TauPoly) -> TauPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TauPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for TauPoly {
    type Output = TauPoly;
    fn sub(self, rhs: TauPoly) -> TauPoly {
        self + (-rhs)
    }
}

impl Neg for TauPoly {
    type Output = TauPoly;
    fn neg(self) -> TauPoly {
        TauPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for TauPoly {
    type Output = TauPoly;
    fn mul(self, rhs: TauPoly) -> TauPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return TauPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TauPoly::new(out)
    }
}

impl fmt::Display for TauPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = format_rational(&c.abs());
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*tau")?,
                _ => write!(f, "{a}*tau^{k}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of two [`TauPoly`]s with a nonzero denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct TauRatio {
    pub num: TauPoly,
    pub den: TauPoly,
}

impl TauRatio {
    pub fn new(num: TauPoly, den: TauPoly) -> Result<Self> {
        if Zero::is_zero(&den) {
            return Err(Error::DegenerateClass);
        }
        Ok(Self { num, den })
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }

    /// The exact rational value when the quotient does not depend on `τ`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if Zero::is_zero(&self.num) {
            return Some(BigRational::zero());
        }
        let lead = self.num.coeffs.last()? / self.den.coeffs.last()?;
        if self.den.scale(&lead) == self.num {
            Some(lead)
        } else {
            None
        }
    }

    /// `self - r` as a new ratio.
    pub fn minus_rational(&self, r: &BigRational) -> TauRatio {
        TauRatio {
            num: self.num.clone() - self.den.scale(r),
            den: self.den.clone(),
        }
    }

    pub fn times_tau(&self) -> TauRatio {
        TauRatio {
            num: self.num.clone() * TauPoly::tau(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for TauRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", format_rational(&r)),
            None => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4, 1));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn poly_arithmetic() {
        let a = TauPoly::new(vec![rat(1, 1), rat(2, 1)]); // 1 + 2τ
        let sq = a.clone() * a.clone();
        assert_eq!(sq.coeffs(), &[rat(1, 1), rat(4, 1), rat(4, 1)]);
        assert!(Zero::is_zero(&(a.clone() - a.clone())));
        assert!((a.to_f64() - (1.0 + 2.0 * TAU)).abs() < 1e-12);
        assert_eq!(a.to_string(), "2*tau + 1");
    }

    #[test]
    fn ratio_detects_rational() {
        let a = TauPoly::new(vec![rat(1, 1), rat(2, 1)]);
        let r = TauRatio::new(a.scale(&rat(3, 1)), a.clone()).unwrap();
        assert_eq!(r.as_rational(), Some(rat(3, 1)));
        let s = TauRatio::new(TauPoly::tau(), a).unwrap();
        assert_eq!(s.as_rational(), None);
        assert!(TauRatio::new(TauPoly::tau(), TauPoly::default()).is_err());
    }
}
