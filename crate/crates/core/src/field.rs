//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.
//!
//! A [`Scalar`] carries its own field tag. Binary operations between scalars
//! of different fields are rejected by the `checked_*` methods; the operator
//! impls panic on a mismatch, which is a programming error inside this crate
//! because every public entry point validates field agreement up front.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds `Z_p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for the infinite field.
    pub fn size(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }

    /// True if the field has strictly more than `n` elements.
    pub fn exceeds(&self, n: u64) -> bool {
        self.size().map_or(true, |p| p > n)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_i64(0, *self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_i64(1, *self)
    }

    pub fn int(&self, v: i64) -> Scalar {
        Scalar::from_i64(v, *self)
    }

    /// Uniform element of `{lo, ..., hi}` embedded in the field.
    pub fn sample_range<R: Rng + ?Sized>(&self, rng: &mut R, lo: u64, hi: u64) -> Scalar {
        let v = rng.gen_range(lo..=hi);
        Scalar::from_u64(v, *self)
    }

    /// Uniform element of the whole field; for `Q` falls back to a wide integer range.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Prime { value: rng.gen_range(0..*p), modulus: *p },
            Field::Rational => Scalar::from_i64(rng.gen_range(-(1 << 20)..=(1 << 20)), *self),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Z_{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

#[inline]
fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= p {
        s.wrapping_sub(p)
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(p)
    }
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    if t < 0 {
        t += p as i128;
    }
    Some(t as u64)
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    v.mod_floor(&m).to_u64().expect("residue fits in u64")
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn from_i64(v: i64, field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => {
                let r = (v as i128).rem_euclid(p as i128) as u64;
                Scalar::Prime { value: r, modulus: p }
            }
        }
    }

    pub fn from_u64(v: u64, field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::Prime { value: v % p, modulus: p },
        }
    }

    pub fn from_bigint(v: &BigInt, field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Prime { value: bigint_mod(v, p), modulus: p },
        }
    }

    /// Embeds a rational into `field`; fails if the denominator vanishes mod p.
    pub fn from_rational(v: &BigRational, field: Field) -> Result<Scalar> {
        match field {
            Field::Rational => Ok(Scalar::Rational(v.clone())),
            Field::Prime(p) => {
                let den = bigint_mod(v.denom(), p);
                let inv = invmod(den, p)
                    .ok_or_else(|| Error::NotInvertible(v.to_string(), field))?;
                let num = bigint_mod(v.numer(), p);
                Ok(Scalar::Prime { value: mulmod(num, inv, p), modulus: p })
            }
        }
    }

    /// Moves a scalar into `field`. Rationals map into any field with an
    /// invertible denominator; residues only stay in their own field.
    pub fn coerce(&self, field: Field) -> Result<Scalar> {
        match (self, field) {
            (Scalar::Rational(r), _) => Scalar::from_rational(r, field),
            (Scalar::Prime { modulus, .. }, Field::Prime(p)) if *modulus == p => Ok(self.clone()),
            _ => Err(Error::FieldMismatch(self.field(), field)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Prime { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: addmod(*a, *b, *p), modulus: *p }
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    fn sub_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: submod(*a, *b, *p), modulus: *p }
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: mulmod(*a, *b, *p), modulus: *p }
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Prime { value, modulus } => invmod(*value, *modulus)
                .map(|v| Scalar::Prime { value: v, modulus: *modulus })
                .ok_or(Error::DivisionByZero),
        }
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                let e: i32 = exp.try_into().expect("exponent fits in i32");
                Scalar::Rational(num_traits::pow::Pow::pow(r, e))
            }
            Scalar::Prime { value, modulus } => {
                Scalar::Prime { value: powmod(*value, exp, *modulus), modulus: *modulus }
            }
        }
    }

    /// Absolute value of a rational scalar.
    pub fn abs_rational(&self) -> Option<BigRational> {
        self.as_rational().map(|r| r.abs())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_unchecked(rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.sub_unchecked(rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime { value, modulus } => {
                Scalar::Prime { value: submod(0, *value, *modulus), modulus: *modulus }
            }
        }
    }
}

/// Parses `"a"` or `"a/b"` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Formats a rational as `a` or `a/b`.
pub fn format_rational(r: &BigRational) -> String {
    Scalar::Rational(r.clone()).to_string()
}

const MR_BASES: [u64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// Miller–Rabin with 40 rounds. With these prime bases the test is exact
/// for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in MR_BASES.iter() {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in MR_BASES.iter() {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniformly random prime with exactly `bits` bits (2 ≤ bits ≤ 64).
pub fn random_prime<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> u64 {
    assert!((2..=64).contains(&bits), "prime bit length must be in 2..=64");
    let lo: u64 = 1 << (bits - 1);
    let hi: u64 = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    loop {
        let c = rng.gen_range(lo..=hi);
        if is_prime(c) {
            return c;
        }
    }
}

/// Smallest prime `p > lower` with `p ≡ 1 (mod k)`.
pub fn prime_congruent_one(k: u64, lower: u64) -> u64 {
    let k = k.max(1);
    let mut p = (lower / k + 1) * k + 1;
    while !is_prime(p) {
        p += k;
    }
    p
}

/// Integer square root rounded down.
pub(crate) fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rational_parse_and_display() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = Scalar::from_i64(3, Field::Prime(7));
        let b = Scalar::from_i64(3, Field::Prime(11));
        let q = Scalar::from_i64(3, Field::Rational);
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
        assert!(a.checked_mul(&q).is_err());
        assert!(a.coerce(Field::Prime(11)).is_err());
        assert!(a.coerce(Field::Rational).is_err());
        assert_eq!(q.coerce(Field::Prime(7)).unwrap(), a);
    }

    #[test]
    fn residues_stay_reduced() {
        let f = Field::Prime(13);
        let a = f.int(-1);
        assert_eq!(a.as_residue(), Some(12));
        assert_eq!((&a * &a).as_residue(), Some(1));
        assert_eq!(a.inv().unwrap().as_residue(), Some(12));
        assert!(f.zero().inv().is_err());
        let half = Scalar::from_rational(&parse_rational("1/2").unwrap(), f).unwrap();
        assert_eq!((&half * &f.int(2)), f.one());
        assert!(Scalar::from_rational(&parse_rational("1/13").unwrap(), f).is_err());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(18446744073709551557 - 2));
        // Strong pseudoprime to many small bases.
        assert!(!is_prime(3825123056546413051));
        assert!(Field::prime(91).is_err());
    }

    #[test]
    fn random_primes_have_requested_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for bits in [32u32, 48, 64] {
            let p = random_prime(bits, &mut rng);
            assert!(is_prime(p));
            assert_eq!(64 - p.leading_zeros(), bits);
        }
        let p = prime_congruent_one(3, 1000);
        assert!(p > 1000 && p % 3 == 1 && is_prime(p));
    }

    #[test]
    fn distributivity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for field in [Field::Rational, Field::Prime(1_000_000_007), Field::Prime(18446744073709551557)] {
            for _ in 0..1000 {
                let a = field.sample(&mut rng);
                let b = field.sample(&mut rng);
                let c = if field == Field::Rational {
                    Scalar::from_rational(
                        &BigRational::new(rng.gen_range(-50..50).into(), rng.gen_range(1..50).into()),
                        field,
                    )
                    .unwrap()
                } else {
                    field.sample(&mut rng)
                };
                assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
                assert_eq!(&(&a - &b) + &b, a);
                if !c.is_zero() {
                    assert_eq!(&(&a * &c) * &c.inv().unwrap(), a);
                }
            }
        }
    }
}
