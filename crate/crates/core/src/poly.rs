//! Sparse multivariate and dense univariate polynomials over a [`Field`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// Multivariate polynomial stored as exponent vector → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePoly {
    pub fn zero(nvars: usize, field: Field) -> Self {
        SparsePoly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = SparsePoly::zero(nvars, c.field());
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        SparsePoly::constant(nvars, field.one())
    }

    /// The polynomial `x_i`.
    pub fn var(nvars: usize, i: usize, field: Field) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        SparsePoly::monomial(m, field.one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = SparsePoly::zero(m.len(), c.field());
        p.add_term(m, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        nvars: usize,
        field: Field,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = SparsePoly::zero(nvars, field);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(Error::Arity { expected: nvars, got: m.len() });
            }
            let c = c.coerce(field)?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    /// `[m]f`, the coefficient of monomial `m`.
    pub fn coeff(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// The constant term, if the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Adds `c·x^m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Variables with a nonzero exponent in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m[i] > 0)).collect()
    }

    fn check(&self, other: &SparsePoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.nvars != other.nvars {
            return Err(Error::Arity { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<SparsePoly> {
        let c = c.coerce(self.field)?;
        if c.is_zero() {
            return Ok(SparsePoly::zero(self.nvars, self.field));
        }
        Ok(SparsePoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * &c)).collect(),
        })
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.mul_capped(other, usize::MAX)
    }

    /// Product that fails as soon as the accumulated term count passes `cap`.
    pub fn mul_capped(&self, other: &SparsePoly, cap: usize) -> Result<SparsePoly> {
        self.check(other)?;
        let mut out = SparsePoly::zero(self.nvars, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
            if out.terms.len() > cap {
                return Err(Error::CapExceeded { cap, reached: out.terms.len() });
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<SparsePoly> {
        let mut acc = SparsePoly::one(self.nvars, self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: point.len() });
        }
        let point: Vec<Scalar> =
            point.iter().map(|p| p.coerce(self.field)).collect::<Result<_>>()?;
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = &t * &x.pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes `x_i ← values[i]` for each `Some` entry, keeping the
    /// remaining variables (renumbered in order).
    pub fn partial_eval(&self, values: &[Option<Scalar>]) -> Result<SparsePoly> {
        if values.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: values.len() });
        }
        let keep: Vec<usize> = (0..self.nvars).filter(|&i| values[i].is_none()).collect();
        let mut out = SparsePoly::zero(keep.len(), self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if m[i] > 0 {
                        t = &t * &v.coerce(self.field)?.pow(m[i] as u64);
                    }
                }
            }
            out.add_term(keep.iter().map(|&i| m[i]).collect(), t);
        }
        Ok(out)
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> SparsePoly {
        let mut out = SparsePoly::zero(nvars, self.field);
        for (m, c) in &self.terms {
            let mut nm = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                nm[map[i]] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Moves every coefficient into another field.
    pub fn coerce(&self, field: Field) -> Result<SparsePoly> {
        SparsePoly::from_terms(
            self.nvars,
            field,
            self.terms.iter().map(|(m, c)| Ok((m.clone(), c.coerce(field)?))).collect::<Result<Vec<_>>>()?,
        )
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Dense univariate polynomial `c_0 + c_1 x + … + c_d x^d` with `c_d ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UnivariatePoly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Result<Self> {
        let coeffs = coeffs.into_iter().map(|c| c.coerce(field)).collect::<Result<Vec<_>>>()?;
        let mut p = UnivariatePoly { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        let mut p = UnivariatePoly { field, coeffs: coeffs.iter().map(|&c| field.int(c)).collect() };
        p.trim();
        p
    }

    pub fn zero(field: Field) -> Self {
        UnivariatePoly { field, coeffs: Vec::new() }
    }

    /// `x^e`.
    pub fn x_pow(field: Field, e: usize) -> Self {
        let mut coeffs = vec![field.zero(); e + 1];
        coeffs[e] = field.one();
        UnivariatePoly { field, coeffs }
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots(field: Field, roots: &[Scalar]) -> Self {
        let mut p = UnivariatePoly::from_i64(field, &[1]);
        for r in roots {
            let lin = UnivariatePoly { field, coeffs: vec![-r, field.one()] };
            p = p.mul(&lin);
        }
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let x = x.coerce(self.field)?;
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &UnivariatePoly) -> UnivariatePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        let mut p = UnivariatePoly { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &UnivariatePoly) -> UnivariatePoly {
        self.add(&other.scale(&-&self.field.one()))
    }

    pub fn scale(&self, c: &Scalar) -> UnivariatePoly {
        let mut p =
            UnivariatePoly { field: self.field, coeffs: self.coeffs.iter().map(|v| v * c).collect() };
        p.trim();
        p
    }

    pub fn mul(&self, other: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut p = UnivariatePoly { field: self.field, coeffs };
        p.trim();
        p
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &UnivariatePoly) -> Result<(UnivariatePoly, UnivariatePoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Ok((UnivariatePoly::zero(self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); n - dd];
        for i in (dd..n).rev() {
            let c = &r[i] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = &r[idx] - &(&c * dc);
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        let mut q = UnivariatePoly { field: self.field, coeffs: q };
        let mut r = UnivariatePoly { field: self.field, coeffs: r };
        q.trim();
        r.trim();
        Ok((q, r))
    }

    pub fn derivative(&self) -> UnivariatePoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.int(i as i64))
            .collect();
        let mut p = UnivariatePoly { field: self.field, coeffs };
        p.trim();
        p
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UnivariatePoly) -> Result<UnivariatePoly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        match a.leading() {
            None => Ok(a),
            Some(l) => {
                let inv = l.inv()?;
                Ok(a.scale(&inv))
            }
        }
    }

    /// True if `gcd(p, p') = 1`.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn binomial_square() {
        let x = SparsePoly::var(2, 0, q());
        let y = SparsePoly::var(2, 1, q());
        let s = x.add(&y).unwrap().pow(2).unwrap();
        assert_eq!(s.num_terms(), 3);
        assert_eq!(s.coeff(&[1, 1]), q().int(2));
        assert_eq!(s.total_degree(), Some(2));
        assert_eq!(s.eval(&[q().int(2), q().int(3)]).unwrap(), q().int(25));
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = SparsePoly::var(1, 0, q());
        assert!(x.sub(&x).unwrap().is_zero());
        assert_eq!(x.sub(&x).unwrap().total_degree(), None);
    }

    #[test]
    fn mul_cap_is_enforced() {
        let x = SparsePoly::var(2, 0, q());
        let y = SparsePoly::var(2, 1, q());
        let s = x.add(&y).unwrap();
        assert!(matches!(s.mul_capped(&s, 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn partial_eval_renumbers() {
        // x0*x1 + x2 at x1 = 3 -> 3*y0 + y1
        let f = SparsePoly::from_terms(
            3,
            q(),
            vec![(vec![1, 1, 0], q().int(1)), (vec![0, 0, 1], q().int(1))],
        )
        .unwrap();
        let g = f.partial_eval(&[None, Some(q().int(3)), None]).unwrap();
        assert_eq!(g.nvars(), 2);
        assert_eq!(g.coeff(&[1, 0]), q().int(3));
        assert_eq!(g.coeff(&[0, 1]), q().int(1));
    }

    #[test]
    fn univariate_division_and_gcd() {
        let f = Field::Rational;
        let p = UnivariatePoly::from_i64(f, &[-1, 0, 1]); // x^2 - 1
        let a = UnivariatePoly::from_i64(f, &[1, 2, 3, 4]);
        let (qq, r) = a.div_rem(&p).unwrap();
        assert_eq!(qq.mul(&p).add(&r), a);
        assert!(r.degree().unwrap() < 2);
        assert!(p.is_squarefree().unwrap());
        let sq = UnivariatePoly::from_i64(f, &[1, -2, 1]);
        assert!(!sq.is_squarefree().unwrap());
        assert_eq!(p.eval(&f.int(1)).unwrap(), f.zero());
        let roots = UnivariatePoly::from_roots(f, &[f.int(1), f.int(-1)]);
        assert_eq!(roots, p);
    }
}
