//! Certificates of nonmembership for ideals whose generators have distinct
//! roots: an approximate common root `α̃` with `|f(α̃)|` provably bounded
//! away from zero.
//!
//! Write `f = Σ h_i p_i + R` with `R` reduced. For `α̃` within `eps` of a
//! root tuple `α`,
//! `|f(α̃)| ≤ eps·B2` when `R = 0`, and
//! `|f(α̃)| ≥ |R(α)| − eps·(B2 + B4)` otherwise.
//! If `R ≠ 0` some root tuple has `|R(α)| ≥ B3`. With `M = B3/3` and
//! `eps·(B2 + B4) ≤ M` the two cases land on opposite sides of `[M, 2M]`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::circuit::Circuit;
use crate::division::{divide_with_quotients, UnivariateIdeal};
use crate::error::{Error, Result};
use crate::field::{isqrt, Field, Scalar};
use crate::gaussian::{abs_rational, eval_univariate, Gaussian, GaussianAlgebra};
use crate::linalg::Matrix;
use crate::poly::{SparsePoly, UnivariatePoly};

/// Largest product of generator degrees [`search_nonmembership`] will enumerate.
pub const MAX_TUPLES: u64 = 100_000;

/// Bit length above which the lower bound on `|R(α)|` is refused.
const MAX_GAP_BITS: u64 = 1 << 20;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn coeff_abs(p: &UnivariatePoly) -> Result<Vec<BigRational>> {
    p.coeffs().iter().map(abs_rational).collect()
}

fn require_rational(field: Field) -> Result<()> {
    if field != Field::Rational {
        return Err(Error::FieldMismatch(field, Field::Rational));
    }
    Ok(())
}

/// `⌈log2 q⌉` for `q > 0`, clamped below at 0.
fn ceil_log2(q: &BigRational) -> u64 {
    if q <= &BigRational::one() {
        return 0;
    }
    let c = q.ceil().to_integer();
    let bits = c.bits();
    // Exact powers of two need one bit fewer.
    if c == BigInt::one() << (bits - 1) as usize {
        bits - 1
    } else {
        bits
    }
}

fn pow2_neg(bits: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// Rational `s` with `0 < s ≤ √q` (for `q > 0`), accurate to about 32 bits.
fn sqrt_lower(q: &BigRational) -> BigRational {
    let (num, den) = (q.numer().magnitude(), q.denom().magnitude());
    let k = ((den.bits() as i64 - num.bits() as i64).max(0) / 2 + 34) as usize;
    let scaled = (num << (2 * k)) / den;
    let root: BigUint = isqrt(&scaled);
    BigRational::new(BigInt::from(root), BigInt::one() << k)
}

/// Bounds `lo ≤ |α| ≤ hi` for every complex root `α` of `p`.
pub fn root_magnitude_bounds(p: &UnivariatePoly) -> Result<(BigRational, BigRational)> {
    require_rational(p.field())?;
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    let a = coeff_abs(p)?;
    let lead = &a[d];
    let max_low = a[..d].iter().cloned().max().unwrap_or_else(BigRational::zero);
    let hi = (rat(d as i64) * max_low / lead).max(BigRational::one());
    let upper: BigRational = a[1..].iter().cloned().sum();
    let lo = if a[0].is_zero() {
        BigRational::zero()
    } else if upper.is_zero() {
        BigRational::one()
    } else {
        (&a[0] / upper).min(BigRational::one())
    };
    Ok((lo, hi))
}

/// Resultant of two nonzero polynomials via the Sylvester determinant.
pub fn resultant(p: &UnivariatePoly, q: &UnivariatePoly) -> Result<Scalar> {
    let field = p.field();
    let m = p.degree().ok_or(Error::ZeroPolynomial)?;
    let n = q.degree().ok_or(Error::ZeroPolynomial)?;
    if m + n == 0 {
        return Ok(field.one());
    }
    let size = m + n;
    let mut s = Matrix::zeros(size, size, field);
    for r in 0..n {
        for (j, c) in p.coeffs().iter().rev().enumerate() {
            s.set(r, r + j, c.clone());
        }
    }
    for r in 0..m {
        for (j, c) in q.coeffs().iter().rev().enumerate() {
            s.set(n + r, r + j, c.clone());
        }
    }
    s.det()
}

/// `disc(p) = (−1)^{d(d−1)/2} · Res(p, p′) / a_d`.
pub fn discriminant(p: &UnivariatePoly) -> Result<Scalar> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d < 2 {
        return Ok(p.field().one());
    }
    let res = resultant(p, &p.derivative())?;
    let mut disc = res.checked_div(p.leading().unwrap())?;
    if (d * (d - 1) / 2) % 2 == 1 {
        disc = -&disc;
    }
    Ok(disc)
}

/// Lower bound on the distance between distinct roots of a squarefree `p`,
/// from Mahler's inequality `δ² ≥ 3|disc|·d^{−(d+2)}·‖p‖₂^{−2(d−1)}`.
/// Polynomials with fewer than two roots get `δ = 1`.
pub fn separation_bound(p: &UnivariatePoly) -> Result<BigRational> {
    require_rational(p.field())?;
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if !p.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    if d < 2 {
        return Ok(BigRational::one());
    }
    let disc = abs_rational(&discriminant(p)?)?;
    let norm_sq: BigRational = coeff_abs(p)?.iter().map(|a| a * a).sum();
    let mut denom = BigRational::from_integer(BigInt::from(d).pow(d as u32 + 2));
    for _ in 0..d - 1 {
        denom *= &norm_sq;
    }
    Ok(sqrt_lower(&(rat(3) * disc / denom)))
}

/// `L` with `2^{−L} ≤ |a_d|`, so that `|p(z)| < 2^{−L}·eps^d` forces `z`
/// within `eps` of a root.
fn leading_bits(p: &UnivariatePoly) -> Result<u64> {
    let lead = abs_rational(p.leading().ok_or(Error::ZeroPolynomial)?)?;
    Ok(ceil_log2(&(BigRational::one() / lead)))
}

/// Residual test: `|p(z)|² < 2^{−2·bits}`.
fn residual_passes(p: &UnivariatePoly, z: &Gaussian, bits: u64) -> Result<bool> {
    let v = eval_univariate(p, z)?;
    Ok(v.norm_sq() < pow2_neg(2 * bits))
}

fn f64_roots(p: &UnivariatePoly) -> Result<Vec<(f64, f64)>> {
    let d = p.degree().unwrap();
    let coeffs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.as_rational().and_then(|r| r.to_f64()).unwrap_or(0.0))
        .collect();
    let lead = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            (radius * t.cos(), radius * t.sin())
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let mut v = (0.0, 0.0);
            for c in monic.iter().rev() {
                v = cmul(v, z[i]);
                v.0 += c;
            }
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if j != i {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            if den == (0.0, 0.0) {
                den = (1e-12, 0.0);
            }
            let step = cdiv(v, den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            moved = moved.max(step.0.abs() + step.1.abs());
        }
        if moved < 1e-14 {
            break;
        }
    }
    if z.iter().any(|w| !w.0.is_finite() || !w.1.is_finite()) {
        return Err(Error::Convergence("floating point start diverged".into()));
    }
    Ok(z)
}

/// One exact Durand–Kerner sweep at `prec` bits; returns `max |Δ|²`.
fn dk_sweep(p: &UnivariatePoly, lead: &Gaussian, z: &mut [Gaussian], prec: u32) -> Result<BigRational> {
    let mut moved = BigRational::zero();
    for i in 0..z.len() {
        let v = eval_univariate(p, &z[i])?;
        let mut den = lead.clone();
        for j in 0..z.len() {
            if j != i {
                den = den.mul(&z[i].sub(&z[j]));
            }
        }
        if den.is_zero() {
            // Coincident iterates: nudge apart.
            z[i] = z[i].add(&Gaussian::real(pow2_neg(prec as u64 / 2)));
            moved = BigRational::one();
            continue;
        }
        let step = v.div(&den)?.round(prec);
        moved = moved.max(step.norm_sq());
        z[i] = z[i].sub(&step).round(prec);
    }
    Ok(moved)
}

/// Approximations, each within `2^{−eps_bits}` of a distinct root of the
/// squarefree `p`, accepted only once every point passes the residual test
/// and the points are pairwise more than `2·eps` apart.
pub fn approximate_roots(p: &UnivariatePoly, eps_bits: u64) -> Result<Vec<Gaussian>> {
    require_rational(p.field())?;
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if !p.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        let root = p.coeff(0).checked_div(&p.coeff(1))?;
        return Ok(vec![Gaussian::from_scalar(&-&root)?]);
    }
    let res_bits = leading_bits(p)? + eps_bits * d as u64;
    let target = (res_bits + 32).min(u32::MAX as u64 / 8) as u32;
    let lead = Gaussian::from_scalar(p.leading().unwrap())?;
    let mut z: Vec<Gaussian> = f64_roots(p)?
        .into_iter()
        .map(|(re, im)| Gaussian::from_f64(re, im).map(|g| g.round(52)))
        .collect::<Result<_>>()?;
    let sep = pow2_neg(2 * (eps_bits + 1));
    let mut prec = 64u32;
    loop {
        for _ in 0..200 {
            let moved = dk_sweep(p, &lead, &mut z, prec)?;
            if moved < pow2_neg(2 * (prec as u64 - 8)) {
                break;
            }
        }
        if prec >= target {
            let residual_ok = z
                .iter()
                .map(|w| residual_passes(p, w, res_bits))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|ok| ok);
            let separated = (0..d).all(|i| (i + 1..d).all(|j| z[i].sub(&z[j]).norm_sq() > sep));
            if residual_ok && separated {
                return Ok(z);
            }
            if prec >= 4 * target {
                return Err(Error::Convergence(format!("no certified roots at {prec} bits")));
            }
        }
        prec = prec.saturating_mul(2);
    }
}

/// Constants for the verifier. `eps = 2^{−eps_bits}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionBudget {
    pub n: usize,
    /// Largest generator degree.
    pub d: usize,
    /// Largest coefficient bit length among `f` and the generators.
    pub l_bits: u64,
    pub eps_bits: u64,
    pub m: BigRational,
    pub b2: BigRational,
    pub b3: BigRational,
    pub b4: BigRational,
    /// Per generator, in generator order: `|p_i(α̃_i)| < 2^{−bits}` is required.
    pub residual_bits: Vec<u64>,
}

impl PrecisionBudget {
    pub fn eps(&self) -> BigRational {
        pow2_neg(self.eps_bits)
    }

    /// `eps·(B2 + B4) ≤ M`.
    pub fn constraint_holds(&self) -> bool {
        self.eps() * (&self.b2 + &self.b4) <= self.m
    }

    /// Same budget with `eps` shrunk to `2^{−bits}`.
    pub fn with_eps_bits(&self, bits: u64, ideal: &UnivariateIdeal) -> Result<PrecisionBudget> {
        if bits < self.eps_bits {
            return Err(Error::Invalid("eps may only shrink".into()));
        }
        let mut out = self.clone();
        out.eps_bits = bits;
        out.residual_bits = residual_bits(ideal, bits)?;
        Ok(out)
    }
}

fn residual_bits(ideal: &UnivariateIdeal, eps_bits: u64) -> Result<Vec<u64>> {
    ideal
        .generators()
        .iter()
        .map(|(_, p)| Ok(leading_bits(p)? + eps_bits * p.degree().unwrap() as u64))
        .collect()
}

fn bit_len(r: &BigRational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

/// `Σ_m |c_m| · w(m) · ∏_j bound_j^{m_j}`.
fn weighted_norm(f: &SparsePoly, bound: &[BigRational], weight: impl Fn(&[u32]) -> u64) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (m, c) in f.terms() {
        let w = weight(m);
        if w == 0 {
            continue;
        }
        let mut t = abs_rational(c)? * rat(w as i64);
        for (j, &e) in m.iter().enumerate() {
            for _ in 0..e {
                t *= &bound[j];
            }
        }
        acc += t;
    }
    Ok(acc)
}

/// `(lcm of denominators) · q` as integer coefficients.
fn clear_denominators(p: &UnivariatePoly) -> Result<Vec<BigInt>> {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(abs_rational(c)?.denom());
    }
    Ok(p.coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * BigRational::from_integer(l.clone())).to_integer())
        .collect())
}

/// Lower bound `2^{−b}` on `|R(α)|` over root tuples with `R(α) ≠ 0`.
///
/// With `A_j` the leading coefficients after clearing denominators and `c`
/// the denominator of `R`, `γ(α) = c·∏A_j^{e_j}·R(α)` is an algebraic
/// integer. The nonzero values of `γ` over all root tuples form a
/// Galois-stable multiset, so their product is a nonzero rational integer.
/// Bounding every factor by `G` gives `|γ(α)| ≥ G^{−(N−1)}`.
fn remainder_gap_bits(r: &SparsePoly, ideal: &UnivariateIdeal, hi: &[BigRational]) -> Result<u64> {
    let support = r.support();
    let mut scale_bits = BigInt::one();
    for (_, c) in r.terms() {
        scale_bits = scale_bits.lcm(abs_rational(c)?.denom());
    }
    let mut tuples: u64 = 1;
    for &v in &support {
        let p = ideal.generator(v).ok_or(Error::MissingGenerator(v))?;
        let ints = clear_denominators(p)?;
        let a = ints.last().unwrap().abs();
        scale_bits *= a.pow(r.degree_in(v));
        tuples = tuples.saturating_mul(p.degree().unwrap() as u64);
    }
    let scale = BigRational::from_integer(scale_bits);
    let g = (&scale * weighted_norm(r, hi, |_| 1)?).max(BigRational::one());
    let bits = ceil_log2(&scale).saturating_add(tuples.saturating_sub(1).saturating_mul(ceil_log2(&g)));
    if bits > MAX_GAP_BITS {
        return Err(Error::SizeGuard(format!("remainder lower bound needs {bits} bits")));
    }
    Ok(bits)
}

/// Derives `M` and `eps` for `f` and `I` by dividing the expansion of `f`
/// with quotients and bounding each piece explicitly.
pub fn compute_threshold(f: &Circuit, ideal: &UnivariateIdeal, cap: usize) -> Result<PrecisionBudget> {
    require_rational(ideal.field())?;
    let n = f.nvars();
    for v in f.used_vars() {
        if ideal.generator(v).is_none() {
            return Err(Error::MissingGenerator(v));
        }
    }
    let mut deltas = Vec::new();
    for (_, p) in ideal.generators() {
        deltas.push(separation_bound(p)?);
    }
    let poly = f.expand(Field::Rational, cap)?;
    let (hs, r) = divide_with_quotients(&poly, ideal)?;

    // Root radii per variable; `tilde` allows for the eps displacement.
    let mut hi = vec![BigRational::one(); n];
    let mut l_bits = 0;
    for (v, p) in ideal.generators() {
        hi[*v] = root_magnitude_bounds(p)?.1;
        for c in p.coeffs() {
            l_bits = l_bits.max(bit_len(c.as_rational().unwrap()));
        }
    }
    for (_, c) in poly.terms() {
        l_bits = l_bits.max(bit_len(c.as_rational().unwrap()));
    }
    let tilde: Vec<BigRational> = hi.iter().map(|h| h + BigRational::one()).collect();

    let mut b2 = BigRational::zero();
    for ((_, p), h) in ideal.generators().iter().zip(&hs) {
        let (_, h_p) = root_magnitude_bounds(p)?;
        let d = p.degree().unwrap();
        let mut k = abs_rational(p.leading().unwrap())?;
        for _ in 1..d {
            k *= rat(2) * &h_p + BigRational::one();
        }
        b2 += weighted_norm(h, &tilde, |_| 1)? * k;
    }
    let b4 = weighted_norm(&r, &tilde, |m| m.iter().map(|&e| e as u64).sum())?;
    let gap_bits = if r.is_zero() { 0 } else { remainder_gap_bits(&r, ideal, &hi)? };
    let b3 = pow2_neg(gap_bits);
    let m = &b3 / rat(3);

    let mut eps_bits = 1 + ceil_log2(&((&b2 + &b4) / &m));
    for delta in &deltas {
        eps_bits = eps_bits.max(2 + ceil_log2(&(BigRational::one() / delta)));
    }
    while pow2_neg(eps_bits) * (&b2 + &b4) > m {
        eps_bits += 1;
    }
    let d = ideal.generators().iter().map(|(_, p)| p.degree().unwrap()).max().unwrap_or(0);
    Ok(PrecisionBudget {
        n,
        d,
        l_bits,
        eps_bits,
        m,
        b2,
        b3,
        b4,
        residual_bits: residual_bits(ideal, eps_bits)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    /// Clause (a): every coordinate passed its residual test.
    pub residual_ok: bool,
    /// Clause (b): `|f(α̃)| ≥ 2M`.
    pub gap_ok: bool,
}

fn eval_complex(f: &Circuit, point: &[Gaussian]) -> Result<Gaussian> {
    f.eval_in(&GaussianAlgebra, point)
}

/// Accepts iff every generator coordinate passes the residual test and
/// `|f(α̃)| ≥ 2M`; acceptance proves `f ∉ I`.
pub fn verify_certificate(
    f: &Circuit,
    ideal: &UnivariateIdeal,
    cert: &[Gaussian],
    budget: &PrecisionBudget,
) -> Result<Verdict> {
    if cert.len() != f.nvars() {
        return Err(Error::MalformedCertificate(format!(
            "expected {} coordinates, got {}",
            f.nvars(),
            cert.len()
        )));
    }
    if budget.residual_bits.len() != ideal.len() {
        return Err(Error::Invalid("budget computed for a different ideal".into()));
    }
    let mut residual_ok = true;
    for ((v, p), &bits) in ideal.generators().iter().zip(&budget.residual_bits) {
        if !residual_passes(p, &cert[*v], bits)? {
            residual_ok = false;
            break;
        }
    }
    let value = eval_complex(f, cert)?;
    let two_m = rat(2) * &budget.m;
    let gap_ok = value.norm_sq() >= &two_m * &two_m;
    Ok(Verdict { accepted: residual_ok && gap_ok, residual_ok, gap_ok })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Member,
    NonMember,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub decision: Decision,
    pub certificate: Option<Vec<Gaussian>>,
    pub budget: PrecisionBudget,
    pub tuples_checked: u64,
}

/// Tries every tuple of approximate roots.
pub fn search_nonmembership(f: &Circuit, ideal: &UnivariateIdeal, cap: usize) -> Result<SearchOutcome> {
    let tuples = ideal
        .generators()
        .iter()
        .fold(1u64, |acc, (_, p)| acc.saturating_mul(p.degree().unwrap() as u64));
    if tuples > MAX_TUPLES {
        return Err(Error::SizeGuard(format!("{tuples} root tuples exceed {MAX_TUPLES}")));
    }
    let budget = compute_threshold(f, ideal, cap)?;
    let roots: Vec<Vec<Gaussian>> = ideal
        .generators()
        .iter()
        .map(|(_, p)| approximate_roots(p, budget.eps_bits))
        .collect::<Result<_>>()?;
    let m_sq = &budget.m * &budget.m;
    let two_m_sq = rat(4) * &m_sq;
    let mut point = vec![Gaussian::zero(); f.nvars()];
    let mut idx = vec![0usize; roots.len()];
    let mut checked = 0u64;
    let mut in_gap = false;
    if roots.iter().any(|r| r.is_empty()) {
        // A constant generator: the ideal is the whole ring.
        return Ok(SearchOutcome { decision: Decision::Member, certificate: None, budget, tuples_checked: 0 });
    }
    loop {
        for (slot, ((v, _), r)) in ideal.generators().iter().zip(&roots).enumerate() {
            point[*v] = r[idx[slot]].clone();
        }
        let value = eval_complex(f, &point)?.norm_sq();
        checked += 1;
        if value >= two_m_sq {
            return Ok(SearchOutcome {
                decision: Decision::NonMember,
                certificate: Some(point),
                budget,
                tuples_checked: checked,
            });
        }
        if value > m_sq {
            in_gap = true;
        }
        // Odometer over root indices.
        let mut slot = 0;
        loop {
            if slot == idx.len() {
                let decision = if in_gap { Decision::Undecided } else { Decision::Member };
                return Ok(SearchOutcome { decision, certificate: None, budget, tuples_checked: checked });
            }
            idx[slot] += 1;
            if idx[slot] < roots[slot].len() {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::DEFAULT_MONOMIAL_CAP;

    const Q: Field = Field::Rational;

    fn up(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_i64(Q, c)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn magnitude_bounds() {
        let (lo, hi) = root_magnitude_bounds(&up(&[-2, 0, 1])).unwrap();
        assert_eq!(hi, r(4, 1));
        assert_eq!(lo, r(1, 1));
        let (lo, hi) = root_magnitude_bounds(&up(&[-1, 1])).unwrap();
        assert!(lo <= r(1, 1) && hi >= r(1, 1));
        assert_eq!(root_magnitude_bounds(&up(&[0, 1])).unwrap().0, r(0, 1));
        assert!(root_magnitude_bounds(&UnivariatePoly::zero(Q)).is_err());
    }

    #[test]
    fn separation_examples() {
        assert_eq!(abs_rational(&discriminant(&up(&[-1, 0, 1])).unwrap()).unwrap(), r(4, 1));
        let d = separation_bound(&up(&[-1, 0, 1])).unwrap();
        assert!(d > r(0, 1) && d <= r(2, 1));
        let d = separation_bound(&up(&[0, -1, 0, 1])).unwrap();
        assert!(d > r(0, 1) && d <= r(1, 1));
        assert_eq!(separation_bound(&up(&[1, -2, 1])), Err(Error::NotSquarefree));
    }

    #[test]
    fn roots_of_small_polynomials() {
        let eps = pow2_neg(60);
        let roots = approximate_roots(&up(&[-1, 0, 1]), 30).unwrap();
        assert_eq!(roots.len(), 2);
        for z in &roots {
            let near_one = z.sub(&Gaussian::one()).norm_sq() < eps.clone();
            let near_minus = z.add(&Gaussian::one()).norm_sq() < eps.clone();
            assert!(near_one || near_minus);
        }
        assert_eq!(approximate_roots(&up(&[0, 1]), 5).unwrap(), vec![Gaussian::zero()]);
        let i_roots = approximate_roots(&up(&[1, 0, 1]), 20).unwrap();
        assert!(i_roots.iter().all(|z| z.re.abs() < r(1, 1 << 20)));
    }

    fn circuit(terms: Vec<(Vec<u32>, i64)>, n: usize) -> Circuit {
        let p = SparsePoly::from_terms(n, Q, terms.into_iter().map(|(m, c)| (m, Q.int(c)))).unwrap();
        Circuit::from_sparse(&p)
    }

    #[test]
    fn threshold_and_verification() {
        let ideal = UnivariateIdeal::new(Q, vec![(0, up(&[-4, 0, 1]))]).unwrap();
        let f = circuit(vec![(vec![1], 1), (vec![0], -1)], 1);
        let b = compute_threshold(&f, &ideal, DEFAULT_MONOMIAL_CAP).unwrap();
        assert!(b.m <= r(1, 3));
        assert!(b.constraint_holds());
        let halved = b.with_eps_bits(b.eps_bits + 1, &ideal).unwrap();
        assert_eq!(halved.m, b.m);
        assert!(halved.constraint_holds());
        let cert = vec![Gaussian::from_i64(2, 0)];
        assert!(verify_certificate(&f, &ideal, &cert, &b).unwrap().accepted);
        let far = vec![Gaussian::from_i64(5, 0)];
        let v = verify_certificate(&f, &ideal, &far, &b).unwrap();
        assert!(!v.residual_ok && !v.accepted);
        let g = circuit(vec![(vec![2], 1), (vec![0], -4)], 1);
        let bg = compute_threshold(&g, &ideal, DEFAULT_MONOMIAL_CAP).unwrap();
        let v = verify_certificate(&g, &ideal, &cert, &bg).unwrap();
        assert!(v.residual_ok && !v.gap_ok);
    }

    #[test]
    fn search_examples() {
        let ideal = UnivariateIdeal::new(Q, vec![(0, up(&[-1, 0, 1])), (1, up(&[-1, 0, 1]))]).unwrap();
        let out = search_nonmembership(&circuit(vec![(vec![1, 1], 1)], 2), &ideal, 1000).unwrap();
        assert_eq!(out.decision, Decision::NonMember);
        let cert = out.certificate.unwrap();
        let f = circuit(vec![(vec![1, 1], 1)], 2);
        assert!(verify_certificate(&f, &ideal, &cert, &out.budget).unwrap().accepted);

        let member = circuit(vec![(vec![2, 1], 1), (vec![0, 1], -1)], 2);
        assert_eq!(search_nonmembership(&member, &ideal, 1000).unwrap().decision, Decision::Member);
        let one = circuit(vec![(vec![0, 0], 1)], 2);
        assert_eq!(search_nonmembership(&one, &ideal, 1000).unwrap().decision, Decision::NonMember);
    }
}
