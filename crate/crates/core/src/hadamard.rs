//! Membership in power ideals `⟨x_1^{e_1}, …, x_n^{e_n}⟩` through scaled
//! Hadamard products with diagonal circuits built by color coding.
//!
//! For a homogeneous form `λ`, `(f ∘ˢ λ^k)(b) = k!·f_k(λ ⊙ b)` where `f_k` is
//! the degree-`k` part of `f` and `⊙` the coordinatewise product, so a
//! diagonal circuit is applied one summand at a time.

use rand::Rng;

use crate::circuit::{homogeneous_part_eval, power_decompose_product, Circuit, DiagonalCircuit};
use crate::division::random_zero_test;
use crate::error::{Error, Result};
use crate::field::{random_prime, Field, Scalar};
use crate::linalg::LinearForm;
use crate::poly::SparsePoly;

/// Exponents `e_i ≥ 1` of a power ideal together with the degree parameter `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerIdealSpec {
    pub exponents: Vec<u32>,
    pub k: u32,
}

impl PowerIdealSpec {
    pub fn new(exponents: Vec<u32>, k: u32) -> Result<Self> {
        if exponents.iter().any(|&e| e == 0) {
            return Err(Error::Invalid("power ideal exponents must be at least 1".into()));
        }
        Ok(PowerIdealSpec { exponents, k })
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// `m = Σ (e_i − 1)`.
    pub fn m(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize - 1).sum()
    }

    /// Owner variable of each auxiliary variable `z_ℓ`.
    fn owners(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize - 1))
            .collect()
    }
}

/// Number of colors `⌈1.5k⌉`.
pub fn num_colors(k: u32) -> u32 {
    (3 * k).div_ceil(2)
}

/// Probability that a uniformly random coloring gives `k` fixed elements distinct colors.
pub fn cover_probability(k: u32) -> f64 {
    let c = num_colors(k) as f64;
    (0..k).map(|i| (c - i as f64) / c).product()
}

/// `⌈4·(e/√3)^k·k·ln 2⌉` colorings.
pub fn coverage_trials(k: u32) -> usize {
    if k == 0 {
        return 1;
    }
    let base = std::f64::consts::E / 3f64.sqrt();
    (4.0 * base.powi(k as i32) * k as f64 * std::f64::consts::LN_2).ceil() as usize
}

/// Colorings needed so that a fixed monomial stays uncovered with
/// probability at most `2^{-bits}`.
pub fn trials_for_budget(k: u32, bits: u32) -> usize {
    let q = cover_probability(k);
    if q >= 1.0 {
        return 1;
    }
    (bits as f64 * std::f64::consts::LN_2 / -(1.0 - q).ln()).ceil() as usize
}

/// Default number of colorings: the coverage formula, raised if needed to
/// push the miss probability below `2^{-20}`.
pub fn auto_trials(k: u32) -> usize {
    coverage_trials(k).max(trials_for_budget(k, 20))
}

/// Fan-in of [`build_detection_circuit`]: `trials · 2^{⌈1.5k⌉−1}` (one summand for `k = 0`).
pub fn detection_fan_in(k: u32, trials: usize) -> usize {
    if k == 0 {
        1
    } else {
        trials << (num_colors(k) - 1)
    }
}

/// `(f ∘ˢ D)(b)`, summand by summand.
pub fn scaled_hadamard_eval(c: &Circuit, d: &DiagonalCircuit, b: &[Scalar]) -> Result<Scalar> {
    if c.nvars() != d.nvars {
        return Err(Error::Arity { expected: d.nvars, got: c.nvars() });
    }
    if b.len() != d.nvars {
        return Err(Error::Arity { expected: d.nvars, got: b.len() });
    }
    let field = b.first().map_or(d.field, Scalar::field);
    let k = d.degree;
    let deg_c = c.effective_degree();
    let mut kfact = field.one();
    for i in 1..=k as i64 {
        kfact = &kfact * &field.int(i);
    }
    let mut acc = field.zero();
    for (coef, form) in &d.summands {
        let coef = coef.coerce(field)?;
        if coef.is_zero() {
            continue;
        }
        let point: Vec<Scalar> = form
            .coeffs
            .iter()
            .zip(b)
            .map(|(l, x)| Ok(&l.coerce(field)? * x))
            .collect::<Result<_>>()?;
        let h = homogeneous_part_eval(c, k, deg_c, &point)?;
        acc = &acc + &(&coef * &h);
    }
    Ok(&acc * &kfact)
}

/// Literal `f ∘ˢ g = Σ_m m!·[m]f·[m]g·x^m` on explicit polynomials.
pub fn scaled_hadamard_literal(f: &SparsePoly, g: &SparsePoly) -> Result<SparsePoly> {
    if f.nvars() != g.nvars() {
        return Err(Error::Arity { expected: f.nvars(), got: g.nvars() });
    }
    let field = f.field();
    let mut out = SparsePoly::zero(f.nvars(), field);
    for (m, a) in f.terms() {
        let b = g.coeff(m);
        if b.is_zero() {
            continue;
        }
        let mut mf = field.one();
        for &e in m {
            for i in 1..=e as i64 {
                mf = &mf * &field.int(i);
            }
        }
        out.add_term(m.clone(), &(&mf * a) * &b);
    }
    Ok(out)
}

/// Sum over `trials` random colorings of the degree-`k` part of
/// `∏_j (L_j + 1)`, `L_j = Σ_{ζ(ℓ)=j} z_ℓ`, with each `z_ℓ` replaced by its
/// owner variable. Coefficients are rationals.
pub fn build_detection_circuit<R: Rng + ?Sized>(
    spec: &PowerIdealSpec,
    trials: usize,
    rng: &mut R,
) -> Result<DiagonalCircuit> {
    let field = Field::Rational;
    let n = spec.n();
    let k = spec.k;
    let mut out = DiagonalCircuit::new(n, k, field);
    if k == 0 {
        out.push(field.one(), LinearForm::zero(n, field))?;
        return Ok(out);
    }
    if k as usize > spec.m() {
        return Err(Error::Invalid(format!("degree {k} exceeds m = {}", spec.m())));
    }
    let colors = num_colors(k) as usize;
    let owners = spec.owners();
    for _ in 0..trials {
        let mut counts = vec![vec![0i64; n]; colors];
        for &owner in &owners {
            counts[rng.gen_range(0..colors)][owner] += 1;
        }
        let forms: Vec<LinearForm> =
            counts.iter().map(|c| LinearForm::from_i64(field, c, 1)).collect();
        out.extend(power_decompose_product(n, &forms, k)?)?;
    }
    Ok(out)
}

/// Monomial criterion: `f ∉ ⟨x_i^{e_i}⟩` iff some monomial has every
/// exponent below its `e_i`.
pub fn in_power_ideal_brute(f: &SparsePoly, exponents: &[u32]) -> bool {
    f.terms().all(|(m, _)| m.iter().zip(exponents).any(|(&a, &e)| a >= e))
}

/// Tuning knobs of [`membership_powers`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowersConfig {
    /// Colorings per degree; `None` uses [`auto_trials`].
    pub trials: Option<usize>,
    /// Evaluation points per prime.
    pub zt_trials: usize,
    pub prime_bits: u32,
    /// Primes tried before declaring a zero.
    pub max_primes: usize,
}

impl Default for PowersConfig {
    fn default() -> Self {
        PowersConfig { trials: None, zt_trials: 2, prime_bits: 64, max_primes: 3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowersReport {
    pub not_in_ideal: bool,
    /// Degree whose detection circuit exposed a surviving monomial.
    pub witness_degree: Option<u32>,
    /// Colorings used for each tested degree.
    pub trials: Vec<usize>,
    pub fan_in: usize,
    /// Bound on the probability that an "in ideal" answer is wrong.
    pub error_bound: f64,
    pub primes: Vec<u64>,
}

/// Randomized test for `f ∉ ⟨x_i^{e_i}⟩` with one-sided error: "not in
/// ideal" is always correct. Every degree `j ≤ min(k, m)` is tested with
/// its own detection circuit, arithmetic runs modulo random primes.
pub fn membership_powers<R: Rng + ?Sized>(
    c: &Circuit,
    spec: &PowerIdealSpec,
    config: PowersConfig,
    rng: &mut R,
) -> Result<PowersReport> {
    if c.nvars() != spec.n() {
        return Err(Error::Arity { expected: spec.n(), got: c.nvars() });
    }
    let top = spec.k.min(spec.m() as u32);
    let mut report = PowersReport {
        not_in_ideal: false,
        witness_degree: None,
        trials: Vec::new(),
        fan_in: 0,
        error_bound: 0.0,
        primes: Vec::new(),
    };
    let mut worst_cover_miss: f64 = 0.0;
    for j in 0..=top {
        let trials = config.trials.unwrap_or_else(|| auto_trials(j));
        let sub = PowerIdealSpec { exponents: spec.exponents.clone(), k: j };
        let d = build_detection_circuit(&sub, trials, rng)?;
        report.trials.push(trials);
        report.fan_in += d.fan_in();
        worst_cover_miss = worst_cover_miss.max((1.0 - cover_probability(j)).powi(trials as i32));
        for _ in 0..config.max_primes.max(1) {
            let p = random_prime(config.prime_bits, rng);
            let field = Field::Prime(p);
            let Ok(dp) = d.coerce(field) else { continue };
            report.primes.push(p);
            let zt = random_zero_test(
                |b| scaled_hadamard_eval(c, &dp, b),
                spec.n(),
                j as u64,
                config.zt_trials,
                field,
                rng,
            );
            let zt = match zt {
                Ok(z) => z,
                // A circuit constant with a denominator divisible by p.
                Err(Error::NotInvertible(..)) => continue,
                Err(e) => return Err(e),
            };
            if zt.nonzero {
                report.not_in_ideal = true;
                report.witness_degree = Some(j);
                report.error_bound = 0.0;
                return Ok(report);
            }
        }
    }
    let zero_test_miss = 0.01f64.powi((config.zt_trials * config.max_primes.max(1)) as i32);
    report.error_bound = worst_cover_miss + zero_test_miss;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn monomial_circuit(exps: &[u32]) -> Circuit {
        Circuit::from_sparse(&SparsePoly::monomial(exps.to_vec(), Q.one()))
    }

    #[test]
    fn hadamard_examples() {
        let c = monomial_circuit(&[1, 1]);
        let mut d = DiagonalCircuit::new(2, 2, Q);
        d.push(Q.one(), LinearForm::from_i64(Q, &[1, 1], 0)).unwrap();
        assert_eq!(scaled_hadamard_eval(&c, &d, &[Q.one(), Q.one()]).unwrap(), Q.int(2));
        let mut disjoint = DiagonalCircuit::new(2, 2, Q);
        disjoint.push(Q.one(), LinearForm::from_i64(Q, &[1, 0], 0)).unwrap();
        assert_eq!(scaled_hadamard_eval(&c, &disjoint, &[Q.int(3), Q.int(5)]).unwrap(), Q.zero());
    }

    #[test]
    fn hadamard_with_all_ones_power_is_factorial_times_value() {
        // f = x0^2 x1 + 3 x1^3, homogeneous of degree 3; D = (x0 + x1)^3.
        let f = SparsePoly::from_terms(2, Q, vec![(vec![2, 1], Q.one()), (vec![0, 3], Q.int(3))]).unwrap();
        let c = Circuit::from_sparse(&f);
        let mut d = DiagonalCircuit::new(2, 3, Q);
        d.push(Q.one(), LinearForm::from_i64(Q, &[1, 1], 0)).unwrap();
        let b = [Q.int(2), Q.int(-5)];
        assert_eq!(scaled_hadamard_eval(&c, &d, &b).unwrap(), &Q.int(6) * &f.eval(&b).unwrap());
    }

    #[test]
    fn detection_circuit_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = PowerIdealSpec::new(vec![2, 2], 2).unwrap();
        let d = build_detection_circuit(&spec, 8, &mut rng).unwrap();
        assert_eq!(d.fan_in(), detection_fan_in(2, 8));
        let p = d.expand(1000).unwrap();
        assert!(p.terms().all(|(_, c)| c.as_rational().unwrap() >= &num_rational::BigRational::from_integer(0.into())));
        assert!(p.coeff(&[1, 1]).as_rational().unwrap() > &num_rational::BigRational::from_integer(0.into()));

        let spec = PowerIdealSpec::new(vec![3, 1], 2).unwrap();
        let d = build_detection_circuit(&spec, 8, &mut rng).unwrap();
        let p = d.expand(1000).unwrap();
        assert!(p.coeff(&[1, 1]).is_zero());

        let zero = PowerIdealSpec::new(vec![2, 2], 0).unwrap();
        let d = build_detection_circuit(&zero, 5, &mut rng).unwrap();
        assert_eq!(d.fan_in(), 1);
        assert_eq!(d.eval(&[Q.int(4), Q.int(9)]).unwrap(), Q.one());
    }

    #[test]
    fn trial_counts() {
        assert_eq!(num_colors(3), 5);
        assert_eq!(num_colors(4), 6);
        assert_eq!(cover_probability(1), 1.0);
        assert!((cover_probability(3) - 12.0 / 25.0).abs() < 1e-12);
        assert_eq!(coverage_trials(3), 33);
        assert!(auto_trials(3) >= coverage_trials(3));
    }

    #[test]
    fn membership_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = PowerIdealSpec::new(vec![2, 2], 2).unwrap();
        let cfg = PowersConfig::default();
        assert!(membership_powers(&monomial_circuit(&[1, 1]), &spec, cfg, &mut rng).unwrap().not_in_ideal);
        let r = membership_powers(&monomial_circuit(&[2, 0]), &spec, cfg, &mut rng).unwrap();
        assert!(!r.not_in_ideal);
        assert!(r.error_bound < 2f64.powi(-20));
    }
}
