//! Division modulo ideals generated by univariate polynomials.

use std::collections::BTreeMap;

use rand::Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::{Monomial, SparsePoly, UnivariatePoly};

/// Default term cap for explicit expansions.
pub const DEFAULT_MONOMIAL_CAP: usize = 1_000_000;

/// `⟨p_1(x_{v_1}), …⟩`, one nonconstant generator per variable, sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateIdeal {
    field: Field,
    gens: Vec<(usize, UnivariatePoly)>,
}

impl UnivariateIdeal {
    pub fn new(field: Field, gens: Vec<(usize, UnivariatePoly)>) -> Result<Self> {
        let mut out = Vec::with_capacity(gens.len());
        for (v, p) in gens {
            let p = UnivariatePoly::new(field, p.coeffs().to_vec())?;
            if p.degree().unwrap_or(0) == 0 {
                return Err(Error::Invalid(format!("generator for x{v} is constant")));
            }
            out.push((v, p));
        }
        out.sort_by_key(|(v, _)| *v);
        if out.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid("two generators for the same variable".into()));
        }
        Ok(UnivariateIdeal { field, gens: out })
    }

    /// `⟨x_i^{e_i}⟩` over the first `exps.len()` variables.
    pub fn powers(field: Field, exps: &[u32]) -> Result<Self> {
        UnivariateIdeal::new(
            field,
            exps.iter()
                .enumerate()
                .map(|(i, &e)| (i, UnivariatePoly::x_pow(field, e as usize)))
                .collect(),
        )
    }

    /// `⟨x_i² − x_i⟩` for `i < n`.
    pub fn boolean(field: Field, n: usize) -> Self {
        let p = UnivariatePoly::from_i64(field, &[0, -1, 1]);
        UnivariateIdeal { field, gens: (0..n).map(|i| (i, p.clone())).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[(usize, UnivariatePoly)] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generator(&self, var: usize) -> Option<&UnivariatePoly> {
        self.gens.binary_search_by_key(&var, |(v, _)| *v).ok().map(|i| &self.gens[i].1)
    }

    /// Largest variable index mentioned, plus one.
    pub fn var_span(&self) -> usize {
        self.gens.last().map_or(0, |(v, _)| v + 1)
    }

    /// The subideal generated by the listed variables' generators.
    pub fn restrict(&self, vars: &[usize]) -> UnivariateIdeal {
        UnivariateIdeal {
            field: self.field,
            gens: self.gens.iter().filter(|(v, _)| vars.contains(v)).cloned().collect(),
        }
    }

    /// Exponents `e_i` if every generator is a scalar multiple of `x_i^{e_i}`.
    pub fn power_exponents(&self) -> Option<Vec<(usize, u32)>> {
        self.gens
            .iter()
            .map(|(v, p)| {
                let d = p.degree()?;
                p.coeffs()[..d].iter().all(Scalar::is_zero).then_some((*v, d as u32))
            })
            .collect()
    }

    pub fn coerce(&self, field: Field) -> Result<UnivariateIdeal> {
        UnivariateIdeal::new(field, self.gens.clone())
    }
}

/// `x^e mod p` for `e = 0..=max_e`.
pub fn power_table(p: &UnivariatePoly, max_e: usize) -> Result<Vec<UnivariatePoly>> {
    let (table, _) = power_table_with_quotients(p, max_e)?;
    Ok(table)
}

/// Remainders and quotients: `x^e = q_e·p + r_e`.
fn power_table_with_quotients(
    p: &UnivariatePoly,
    max_e: usize,
) -> Result<(Vec<UnivariatePoly>, Vec<UnivariatePoly>)> {
    let field = p.field();
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::Invalid("power table of a constant".into()));
    }
    let lead_inv = p.leading().unwrap().inv()?;
    let x = UnivariatePoly::x_pow(field, 1);
    let mut rems = Vec::with_capacity(max_e + 1);
    let mut quots = Vec::with_capacity(max_e + 1);
    rems.push(UnivariatePoly::from_i64(field, &[1]));
    quots.push(UnivariatePoly::zero(field));
    for e in 0..max_e {
        let mut r = rems[e].mul(&x);
        let mut q = quots[e].mul(&x);
        if r.degree() == Some(d) {
            let c = &r.coeff(d) * &lead_inv;
            r = r.sub(&p.scale(&c));
            q = q.add(&UnivariatePoly::new(field, vec![c])?);
        }
        rems.push(r);
        quots.push(q);
    }
    Ok((rems, quots))
}

fn check_field(f: &SparsePoly, ideal: &UnivariateIdeal) -> Result<()> {
    if f.field() != ideal.field() {
        return Err(Error::FieldMismatch(f.field(), ideal.field()));
    }
    if ideal.var_span() > f.nvars() {
        return Err(Error::Arity { expected: ideal.var_span(), got: f.nvars() });
    }
    Ok(())
}

/// Reduces `f` in variable `var` modulo `p`, optionally collecting the quotient.
fn reduce_var(
    f: &SparsePoly,
    var: usize,
    p: &UnivariatePoly,
    mut quotient: Option<&mut SparsePoly>,
) -> Result<SparsePoly> {
    let d = p.degree().unwrap();
    let max_e = f.degree_in(var) as usize;
    if max_e < d {
        return Ok(f.clone());
    }
    let (rems, quots) = power_table_with_quotients(p, max_e)?;
    let mut out = SparsePoly::zero(f.nvars(), f.field());
    for (m, c) in f.terms() {
        let e = m[var] as usize;
        if e < d {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        let mut base: Monomial = m.clone();
        base[var] = 0;
        for (j, rc) in rems[e].coeffs().iter().enumerate() {
            if !rc.is_zero() {
                let mut nm = base.clone();
                nm[var] = j as u32;
                out.add_term(nm, c * rc);
            }
        }
        if let Some(q) = quotient.as_deref_mut() {
            for (j, qc) in quots[e].coeffs().iter().enumerate() {
                if !qc.is_zero() {
                    let mut nm = base.clone();
                    nm[var] = j as u32;
                    q.add_term(nm, c * qc);
                }
            }
        }
    }
    Ok(out)
}

/// The unique remainder of `f` modulo the ideal.
pub fn divide(f: &SparsePoly, ideal: &UnivariateIdeal) -> Result<SparsePoly> {
    check_field(f, ideal)?;
    let mut r = f.clone();
    for (v, p) in ideal.generators() {
        r = reduce_var(&r, *v, p, None)?;
    }
    Ok(r)
}

/// Division with quotients: `f = Σ h_i·p_i + R`, `h_i` listed in generator order.
pub fn divide_with_quotients(
    f: &SparsePoly,
    ideal: &UnivariateIdeal,
) -> Result<(Vec<SparsePoly>, SparsePoly)> {
    check_field(f, ideal)?;
    let mut r = f.clone();
    let mut hs = Vec::with_capacity(ideal.len());
    for (v, p) in ideal.generators() {
        let mut h = SparsePoly::zero(f.nvars(), f.field());
        r = reduce_var(&r, *v, p, Some(&mut h))?;
        hs.push(h);
    }
    Ok((hs, r))
}

/// Expand-then-divide membership test.
pub fn is_member_brute(c: &Circuit, ideal: &UnivariateIdeal, cap: usize) -> Result<bool> {
    Ok(remainder_brute(c, ideal, cap)?.is_zero())
}

/// `expand(C) mod I` over the ideal's field.
pub fn remainder_brute(c: &Circuit, ideal: &UnivariateIdeal, cap: usize) -> Result<SparsePoly> {
    let f = c.expand(ideal.field(), cap)?;
    divide(&f, ideal)
}

/// Outcome of a randomized zero test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroTest {
    pub nonzero: bool,
    /// Trials spent before deciding.
    pub trials_run: usize,
    /// Per-trial false-zero probability `deg_bound / |S|` as a fraction.
    pub per_trial_error: (u64, u64),
    pub witness: Option<Vec<Scalar>>,
}

/// Schwartz–Zippel test on the sample set `S = {1, …, 100·deg_bound}`.
pub fn random_zero_test<R, F>(
    mut eval: F,
    n: usize,
    deg_bound: u64,
    trials: usize,
    field: Field,
    rng: &mut R,
) -> Result<ZeroTest>
where
    R: Rng + ?Sized,
    F: FnMut(&[Scalar]) -> Result<Scalar>,
{
    let s = 100 * deg_bound.max(1);
    if !field.exceeds(s) {
        return Err(Error::FieldTooSmall { needed: s });
    }
    for t in 0..trials {
        let point: Vec<Scalar> = (0..n).map(|_| field.sample_range(rng, 1, s)).collect();
        if !eval(&point)?.is_zero() {
            return Ok(ZeroTest {
                nonzero: true,
                trials_run: t + 1,
                per_trial_error: (deg_bound, s),
                witness: Some(point),
            });
        }
    }
    Ok(ZeroTest { nonzero: false, trials_run: trials, per_trial_error: (deg_bound, s), witness: None })
}

/// Groups the terms of `f` by their exponent in `var`.
pub fn collect_by_var(f: &SparsePoly, var: usize) -> BTreeMap<u32, SparsePoly> {
    let mut out: BTreeMap<u32, SparsePoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        out.entry(m[var])
            .or_insert_with(|| SparsePoly::zero(f.nvars(), f.field()))
            .add_term(m.clone(), c.clone());
    }
    out
}
