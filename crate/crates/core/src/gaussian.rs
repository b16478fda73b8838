//! Exact complex numbers with rational real and imaginary parts.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::circuit::Algebra;
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Scalar};
use crate::poly::UnivariatePoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gaussian { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Gaussian::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Gaussian::real(BigRational::one())
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        Gaussian::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// Exact value of an `f64` pair.
    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        let conv = |v: f64| {
            BigRational::from_float(v).ok_or_else(|| Error::Convergence(format!("non-finite value {v}")))
        };
        Ok(Gaussian::new(conv(re)?, conv(im)?))
    }

    pub fn from_scalar(s: &Scalar) -> Result<Self> {
        match s.as_rational() {
            Some(r) => Ok(Gaussian::real(r.clone())),
            None => Err(Error::Invalid("complex arithmetic needs rational scalars".into())),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale(&self, s: &BigRational) -> Gaussian {
        Gaussian::new(&self.re * s, &self.im * s)
    }

    pub fn div(&self, o: &Gaussian) -> Result<Gaussian> {
        let n = o.norm_sq();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.mul(&o.conj());
        Ok(Gaussian::new(num.re / &n, num.im / n))
    }

    pub fn conj(&self) -> Gaussian {
        Gaussian::new(self.re.clone(), -&self.im)
    }

    /// `|z|²`, exact.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Both parts rounded down to multiples of `2^{-bits}`.
    pub fn round(&self, bits: u32) -> Gaussian {
        let scale = BigInt::one() << bits as usize;
        let r = |v: &BigRational| {
            let t = (v * BigRational::from_integer(scale.clone())).floor();
            t / BigRational::from_integer(scale.clone())
        };
        Gaussian::new(r(&self.re), r(&self.im))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Parses `"re im"` with rational parts.
    pub fn parse(s: &str) -> Result<Gaussian> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::MalformedCertificate(format!("expected `re im`, got `{s}`")));
        }
        let p = |t: &str| parse_rational(t).map_err(|e| Error::MalformedCertificate(e.to_string()));
        Ok(Gaussian::new(p(parts[0])?, p(parts[1])?))
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", format_rational(&self.re), format_rational(&self.im))
    }
}

/// `|s|` for a rational scalar.
pub fn abs_rational(s: &Scalar) -> Result<BigRational> {
    s.abs_rational()
        .ok_or_else(|| Error::Invalid("expected a rational coefficient".into()))
}

/// Horner evaluation of a rational univariate polynomial at a complex point.
pub fn eval_univariate(p: &UnivariatePoly, z: &Gaussian) -> Result<Gaussian> {
    let mut acc = Gaussian::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).add(&Gaussian::from_scalar(c)?);
    }
    Ok(acc)
}

/// Circuit evaluation over the Gaussian rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussianAlgebra;

impl Algebra for GaussianAlgebra {
    type Elem = Gaussian;
    fn constant(&self, c: &Scalar) -> Result<Gaussian> {
        Gaussian::from_scalar(c)
    }
    fn add(&self, a: &Gaussian, b: &Gaussian) -> Result<Gaussian> {
        Ok(a.add(b))
    }
    fn mul(&self, a: &Gaussian, b: &Gaussian) -> Result<Gaussian> {
        Ok(a.mul(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn arithmetic() {
        let i = Gaussian::from_i64(0, 1);
        assert_eq!(i.mul(&i), Gaussian::from_i64(-1, 0));
        let z = Gaussian::from_i64(3, 4);
        assert_eq!(z.norm_sq(), BigRational::from_integer(25.into()));
        assert_eq!(z.div(&z).unwrap(), Gaussian::one());
        assert!(z.div(&Gaussian::zero()).is_err());
    }

    #[test]
    fn rounding_and_parsing() {
        let z = Gaussian::parse("1/3 -1/3").unwrap();
        let r = z.round(4);
        assert_eq!(r.to_string(), "5/16 -3/8");
        assert!(Gaussian::parse("1").is_err());
    }

    #[test]
    fn univariate_at_i() {
        let p = UnivariatePoly::from_i64(Field::Rational, &[1, 0, 1]);
        assert!(eval_univariate(&p, &Gaussian::from_i64(0, 1)).unwrap().is_zero());
    }
}
