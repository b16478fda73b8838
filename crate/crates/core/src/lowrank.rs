//! Remainder evaluation for polynomials of low rank.
//!
//! `f = outer(ℓ_1, …, ℓ_r)` for affine forms `ℓ_i`. Each level takes the `r`
//! lowest-indexed live variables as the head, rewrites the tail parts of the
//! forms in a basis of at most `r` new coordinates, expands `outer` over the
//! head plus those coordinates while reducing modulo the head generators,
//! substitutes the point on the head, and recurses on the tail.

use std::collections::BTreeMap;

use crate::circuit::{Algebra, Circuit};
use crate::division::UnivariateIdeal;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{complete_invertible, rank_and_row_basis, LinearForm, Matrix};
use crate::poly::{SparsePoly, UnivariatePoly};

/// `f = outer(forms)` with a degree bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowRankInput {
    pub outer: Circuit,
    pub forms: Vec<LinearForm>,
    pub degree: u32,
}

impl LowRankInput {
    pub fn new(outer: Circuit, forms: Vec<LinearForm>, degree: Option<u32>) -> Result<Self> {
        if outer.nvars() != forms.len() {
            return Err(Error::Arity { expected: outer.nvars(), got: forms.len() });
        }
        let n = forms.first().map_or(0, LinearForm::nvars);
        if let Some(f) = forms.iter().find(|f| f.nvars() != n) {
            return Err(Error::Arity { expected: n, got: f.nvars() });
        }
        let degree = degree.unwrap_or_else(|| outer.effective_degree());
        Ok(LowRankInput { outer, forms, degree })
    }

    pub fn rank(&self) -> usize {
        self.forms.len()
    }

    pub fn nvars(&self) -> usize {
        self.forms.first().map_or(0, LinearForm::nvars)
    }

    /// The composed circuit over `x_1..x_n`.
    pub fn to_circuit(&self) -> Result<Circuit> {
        self.outer.compose_linear(self.nvars(), &self.forms)
    }
}

/// Coordinate change of one level.
#[derive(Clone, Debug)]
pub struct Transform {
    /// Invertible matrix: rows are the new coordinates as forms in `x`.
    pub t: Matrix,
    pub r_prime: usize,
    /// Basis of the tail parts, supported on variables `≥ r`.
    pub residual_forms: Vec<LinearForm>,
    /// `coords[i][j]`: tail part of form `i` is `Σ_j coords[i][j]·residual_forms[j]`.
    pub coords: Matrix,
}

/// Splits each form into its part on `x_1..x_r` and the rest, and builds an
/// invertible `T` that fixes the first `r` variables and sends a basis of the
/// tail parts to `x_{r+1}..x_{r+r′}`.
pub fn build_transform(forms: &[LinearForm], n: usize) -> Result<Transform> {
    let field = forms.first().map_or(Field::Rational, LinearForm::field);
    let r = forms.len().min(n);
    let tails: Vec<Vec<Scalar>> = forms
        .iter()
        .map(|f| {
            if f.nvars() != n {
                return Err(Error::Arity { expected: n, got: f.nvars() });
            }
            Ok((0..n).map(|i| if i < r { field.zero() } else { f.coeffs[i].clone() }).collect())
        })
        .collect::<Result<_>>()?;
    let tail_matrix = if tails.is_empty() {
        Matrix::zeros(0, n, field)
    } else {
        Matrix::from_rows(field, tails)?
    };
    let rb = rank_and_row_basis(&tail_matrix);
    let mut rows: Vec<LinearForm> = (0..r).map(|i| LinearForm::var(n, i, field)).collect();
    rows.extend(rb.basis.iter().cloned());
    let t = complete_invertible(&rows, n, field)?;
    Ok(Transform { t, r_prime: rb.rank, residual_forms: rb.basis, coords: rb.coords })
}

/// How the head of each level is represented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Root grid when every head generator splits into distinct small roots, else fused.
    #[default]
    Auto,
    /// Always expand with reduction modulo the head generators.
    Fused,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemReport {
    pub value: Scalar,
    pub levels: usize,
    /// Largest local polynomial (in terms) seen at any level.
    pub max_terms: usize,
    /// Residual rank `r′` of each level.
    pub residual_ranks: Vec<usize>,
}

/// `(f mod I)(alpha)`.
pub fn rem_eval(input: &LowRankInput, ideal: &UnivariateIdeal, alpha: &[Scalar]) -> Result<Scalar> {
    Ok(rem_eval_report(input, ideal, alpha, Strategy::Auto)?.value)
}

enum Outer<'a> {
    Circuit(&'a Circuit),
    Poly(SparsePoly),
}

pub fn rem_eval_report(
    input: &LowRankInput,
    ideal: &UnivariateIdeal,
    alpha: &[Scalar],
    strategy: Strategy,
) -> Result<RemReport> {
    let field = ideal.field();
    let n = input.nvars();
    if alpha.len() != n {
        return Err(Error::Arity { expected: n, got: alpha.len() });
    }
    let alpha: Vec<Scalar> = alpha.iter().map(|a| a.coerce(field)).collect::<Result<_>>()?;
    let mut forms: Vec<LinearForm> =
        input.forms.iter().map(|f| f.coerce(field)).collect::<Result<_>>()?;
    for f in &forms {
        for v in f.support() {
            if ideal.generator(v).is_none() {
                return Err(Error::MissingGenerator(v));
            }
        }
    }
    let r = input.rank().max(1);
    // Intermediate gates can exceed the degree of f when terms cancel, and
    // head variables live below their generator degree. The input forms
    // themselves are degree one.
    let d = input.degree.max(input.outer.formal_degree()).max(1) as f64;
    let g = ideal.generators().iter().map(|(_, p)| p.degree().unwrap_or(0)).max().unwrap_or(0) as f64;
    let cap = ((d + 1.0).powi(r as i32) * (d + 1.0).max(g).powi(r as i32)).min(usize::MAX as f64 / 2.0) as usize;
    let roots: BTreeMap<usize, Option<Vec<Scalar>>> =
        ideal.generators().iter().map(|(v, p)| (*v, small_distinct_roots(p))).collect();

    let mut outer = Outer::Circuit(&input.outer);
    let mut start = 0usize;
    let mut report =
        RemReport { value: field.zero(), levels: 0, max_terms: 0, residual_ranks: Vec::new() };
    loop {
        report.levels += 1;
        let live_end = n;
        let head_end = (start + r).min(live_end);
        // Head variables that actually occur in some form.
        let head: Vec<usize> = (start..head_end)
            .filter(|&v| forms.iter().any(|f| !f.coeffs[v].is_zero()))
            .collect();
        let tails: Vec<Vec<Scalar>> = forms
            .iter()
            .map(|f| (0..n).map(|i| if i < head_end { field.zero() } else { f.coeffs[i].clone() }).collect())
            .collect();
        let rb = if tails.is_empty() {
            rank_and_row_basis(&Matrix::zeros(0, n, field))
        } else {
            rank_and_row_basis(&Matrix::from_rows(field, tails)?)
        };
        let rp = rb.rank;
        report.residual_ranks.push(rp);

        let split = strategy == Strategy::Auto
            && head.iter().all(|v| roots.get(v).is_some_and(Option::is_some));
        let g = if split {
            let head_roots: Vec<Vec<Scalar>> =
                head.iter().map(|v| roots[v].clone().unwrap()).collect();
            split_level(&outer, &forms, &head, &head_roots, &rb.coords, rp, &alpha, field, cap, input.degree, &mut report)?
        } else {
            fused_level(&outer, &forms, &head, ideal, &rb.coords, rp, &alpha, field, cap, &mut report)?
        };
        if rp == 0 || head_end == live_end {
            report.value = g.as_constant().ok_or_else(|| {
                Error::Invalid("non-constant remainder after the last level".into())
            })?;
            return Ok(report);
        }
        outer = Outer::Poly(g);
        forms = rb.basis;
        start = head_end;
    }
}

/// Local copy of each form: head part (with constant) over the head
/// variables followed by `coords` on the residual coordinates.
fn local_forms(
    forms: &[LinearForm],
    head: &[usize],
    coords: &Matrix,
    rp: usize,
    field: Field,
) -> Vec<LinearForm> {
    forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut c: Vec<Scalar> = head.iter().map(|&v| f.coeffs[v].clone()).collect();
            c.extend((0..rp).map(|j| coords.get(i, j).clone()));
            LinearForm::new(c, f.constant.coerce(field).unwrap())
        })
        .collect()
}

fn linear_poly(f: &LinearForm) -> SparsePoly {
    let n = f.nvars();
    let mut p = SparsePoly::constant(n, f.constant.clone());
    for (i, c) in f.coeffs.iter().enumerate() {
        let mut m = vec![0; n];
        m[i] = 1;
        p.add_term(m, c.clone());
    }
    p
}

fn eval_outer<A: Algebra>(outer: &Outer<'_>, alg: &A, inputs: &[A::Elem]) -> Result<A::Elem> {
    match outer {
        Outer::Circuit(c) => c.eval_in(alg, inputs),
        Outer::Poly(p) => eval_sparse_in(p, alg, inputs),
    }
}

/// Multivariate Horner evaluation of a sparse polynomial in an algebra.
pub fn eval_sparse_in<A: Algebra>(p: &SparsePoly, alg: &A, inputs: &[A::Elem]) -> Result<A::Elem> {
    if inputs.len() != p.nvars() {
        return Err(Error::Arity { expected: p.nvars(), got: inputs.len() });
    }
    let terms: Vec<(&[u32], &Scalar)> = p.terms().map(|(m, c)| (m.as_slice(), c)).collect();
    horner(&terms, 0, alg, inputs, p.field())
}

fn horner<A: Algebra>(
    terms: &[(&[u32], &Scalar)],
    var: usize,
    alg: &A,
    inputs: &[A::Elem],
    field: Field,
) -> Result<A::Elem> {
    if var == inputs.len() {
        let mut s = field.zero();
        for (_, c) in terms {
            s = &s + c;
        }
        return alg.constant(&s);
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Scalar)>> = BTreeMap::new();
    for t in terms {
        groups.entry(t.0[var]).or_default().push(*t);
    }
    let mut acc: Option<A::Elem> = None;
    let mut prev: Option<u32> = None;
    for (&e, group) in groups.iter().rev() {
        if let (Some(a), Some(pe)) = (acc.as_mut(), prev) {
            for _ in e..pe {
                *a = alg.mul(a, &inputs[var])?;
            }
        }
        let inner = horner(group, var + 1, alg, inputs, field)?;
        acc = Some(match acc {
            None => inner,
            Some(a) => alg.add(&a, &inner)?,
        });
        prev = Some(e);
    }
    let mut a = match acc {
        Some(a) => a,
        None => return alg.constant(&field.zero()),
    };
    for _ in 0..prev.unwrap_or(0) {
        a = alg.mul(&a, &inputs[var])?;
    }
    Ok(a)
}

/// Sparse polynomials over head plus residual coordinates, kept reduced
/// modulo the head generators after every operation.
struct FusedAlgebra {
    nvars: usize,
    field: Field,
    cap: usize,
    /// (local variable, generator degree, table of x^e mod p).
    head: Vec<(usize, usize, UnivariatePoly, Vec<UnivariatePoly>)>,
}

impl FusedAlgebra {
    fn reduce(&self, mut p: SparsePoly) -> Result<SparsePoly> {
        for (v, deg, gen, table) in &self.head {
            let max_e = p.degree_in(*v) as usize;
            if max_e < *deg {
                continue;
            }
            let extended;
            let table = if max_e < table.len() {
                table
            } else {
                extended = crate::division::power_table(gen, max_e)?;
                &extended
            };
            let mut out = SparsePoly::zero(p.nvars(), p.field());
            for (m, c) in p.into_terms() {
                let e = m[*v] as usize;
                if e < *deg {
                    out.add_term(m, c);
                    continue;
                }
                for (j, rc) in table[e].coeffs().iter().enumerate() {
                    if !rc.is_zero() {
                        let mut nm = m.clone();
                        nm[*v] = j as u32;
                        out.add_term(nm, &c * rc);
                    }
                }
            }
            p = out;
        }
        if p.num_terms() > self.cap {
            return Err(Error::CapExceeded { cap: self.cap, reached: p.num_terms() });
        }
        Ok(p)
    }
}

impl Algebra for FusedAlgebra {
    type Elem = SparsePoly;
    fn constant(&self, c: &Scalar) -> Result<SparsePoly> {
        Ok(SparsePoly::constant(self.nvars, c.coerce(self.field)?))
    }
    fn add(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        a.add(b)
    }
    fn mul(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        let prod = a.mul_capped(b, self.cap.saturating_mul(4))?;
        self.reduce(prod)
    }
}

#[allow(clippy::too_many_arguments)]
fn fused_level(
    outer: &Outer<'_>,
    forms: &[LinearForm],
    head: &[usize],
    ideal: &UnivariateIdeal,
    coords: &Matrix,
    rp: usize,
    alpha: &[Scalar],
    field: Field,
    cap: usize,
    report: &mut RemReport,
) -> Result<SparsePoly> {
    let h = head.len();
    let nloc = h + rp;
    let mut head_gens = Vec::with_capacity(h);
    for (j, &v) in head.iter().enumerate() {
        let p = ideal.generator(v).ok_or(Error::MissingGenerator(v))?;
        let deg = p.degree().unwrap();
        let table = crate::division::power_table(p, (2 * deg).saturating_sub(2).max(1))?;
        head_gens.push((j, deg, p.clone(), table));
    }
    let alg = FusedAlgebra { nvars: nloc, field, cap, head: head_gens };
    let inputs: Vec<SparsePoly> = local_forms(forms, head, coords, rp, field)
        .iter()
        .map(|f| alg.reduce(linear_poly(f)))
        .collect::<Result<_>>()?;
    let g = eval_outer(outer, &alg, &inputs)?;
    report.max_terms = report.max_terms.max(g.num_terms());
    let mut values: Vec<Option<Scalar>> = head.iter().map(|&v| Some(alpha[v].clone())).collect();
    values.extend((0..rp).map(|_| None));
    g.partial_eval(&values)
}

/// Polynomial in the residual coordinates, as stored per grid point.
trait YPoly: Clone + Sized {
    fn from_sparse(p: &SparsePoly) -> Self;
    fn to_sparse(&self) -> SparsePoly;
    fn add(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self, cap: usize) -> Result<Self>;
    fn num_terms(&self) -> usize;
}

impl YPoly for SparsePoly {
    fn from_sparse(p: &SparsePoly) -> Self {
        p.clone()
    }
    fn to_sparse(&self) -> SparsePoly {
        self.clone()
    }
    fn add(&self, other: &Self) -> Result<Self> {
        SparsePoly::add(self, other)
    }
    fn mul(&self, other: &Self, cap: usize) -> Result<Self> {
        self.mul_capped(other, cap)
    }
    fn num_terms(&self) -> usize {
        SparsePoly::num_terms(self)
    }
}

/// Dense coefficient array in mixed radix `base`; `deg` bounds every exponent.
#[derive(Clone, Debug)]
struct DenseY {
    nv: usize,
    field: Field,
    deg: usize,
    data: Vec<Scalar>,
}

impl DenseY {
    fn base(&self) -> usize {
        self.deg + 1
    }

    fn nonzeros(&self, out_base: usize) -> Vec<(usize, &Scalar)> {
        let base = self.base();
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mut i, c)| {
                let mut idx = 0;
                let mut w = 1;
                for _ in 0..self.nv {
                    idx += (i % base) * w;
                    i /= base;
                    w *= out_base;
                }
                (idx, c)
            })
            .collect()
    }

    fn zeros(nv: usize, field: Field, deg: usize) -> Self {
        DenseY { nv, field, deg, data: vec![field.zero(); (deg + 1).pow(nv as u32)] }
    }
}

impl YPoly for DenseY {
    fn from_sparse(p: &SparsePoly) -> Self {
        let deg = p.terms().flat_map(|(m, _)| m.iter().copied()).max().unwrap_or(0) as usize;
        let mut out = DenseY::zeros(p.nvars(), p.field(), deg);
        for (m, c) in p.terms() {
            let idx = m.iter().rev().fold(0, |acc, &e| acc * (deg + 1) + e as usize);
            out.data[idx] = c.clone();
        }
        out
    }

    fn to_sparse(&self) -> SparsePoly {
        let base = self.base();
        let mut p = SparsePoly::zero(self.nv, self.field);
        for (mut i, c) in self.data.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut m = vec![0u32; self.nv];
            for e in m.iter_mut() {
                *e = (i % base) as u32;
                i /= base;
            }
            p.add_term(m, c.clone());
        }
        p
    }

    fn add(&self, other: &Self) -> Result<Self> {
        let deg = self.deg.max(other.deg);
        let mut out = if self.deg == deg { self.clone() } else { DenseY::zeros(self.nv, self.field, deg) };
        if self.deg != deg {
            for (i, c) in self.nonzeros(deg + 1) {
                out.data[i] = c.clone();
            }
        }
        if other.deg == deg {
            for (o, c) in out.data.iter_mut().zip(&other.data) {
                if !c.is_zero() {
                    *o = &*o + c;
                }
            }
        } else {
            for (i, c) in other.nonzeros(deg + 1) {
                out.data[i] = &out.data[i] + c;
            }
        }
        Ok(out)
    }

    fn mul(&self, other: &Self, cap: usize) -> Result<Self> {
        let deg = self.deg + other.deg;
        let mut out = DenseY::zeros(self.nv, self.field, deg);
        let a = self.nonzeros(deg + 1);
        let b = other.nonzeros(deg + 1);
        for (i, x) in &a {
            for (j, y) in &b {
                let k = i + j;
                out.data[k] = &out.data[k] + &(*x * *y);
            }
        }
        let nnz = out.num_terms();
        if nnz > cap {
            return Err(Error::CapExceeded { cap, reached: nnz });
        }
        Ok(out)
    }

    fn num_terms(&self) -> usize {
        self.data.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Values on the grid of head roots, one polynomial in the residual
/// coordinates per grid point. Valid when each head generator has
/// `deg p` distinct roots in the field.
struct SplitAlgebra<Y> {
    ny: usize,
    field: Field,
    points: usize,
    cap: usize,
    _y: std::marker::PhantomData<Y>,
}

impl<Y: YPoly> SplitAlgebra<Y> {
    fn check(&self, v: Vec<Y>) -> Result<Vec<Y>> {
        let total: usize = v.iter().map(Y::num_terms).sum();
        if total > self.cap {
            return Err(Error::CapExceeded { cap: self.cap, reached: total });
        }
        Ok(v)
    }
}

impl<Y: YPoly> Algebra for SplitAlgebra<Y> {
    type Elem = Vec<Y>;
    fn constant(&self, c: &Scalar) -> Result<Vec<Y>> {
        let p = Y::from_sparse(&SparsePoly::constant(self.ny, c.coerce(self.field)?));
        Ok(vec![p; self.points])
    }
    fn add(&self, a: &Vec<Y>, b: &Vec<Y>) -> Result<Vec<Y>> {
        let v = a.iter().zip(b).map(|(x, y)| x.add(y)).collect::<Result<_>>()?;
        self.check(v)
    }
    fn mul(&self, a: &Vec<Y>, b: &Vec<Y>) -> Result<Vec<Y>> {
        let v = a.iter().zip(b).map(|(x, y)| x.mul(y, self.cap)).collect::<Result<_>>()?;
        self.check(v)
    }
}

/// Largest dense array (per grid point) used for the residual coordinates.
const DENSE_LIMIT: usize = 1 << 16;

#[allow(clippy::too_many_arguments)]
fn split_level(
    outer: &Outer<'_>,
    forms: &[LinearForm],
    head: &[usize],
    head_roots: &[Vec<Scalar>],
    coords: &Matrix,
    rp: usize,
    alpha: &[Scalar],
    field: Field,
    cap: usize,
    degree: u32,
    report: &mut RemReport,
) -> Result<SparsePoly> {
    let dense = (degree as usize + 1).checked_pow(rp as u32).is_some_and(|s| s <= DENSE_LIMIT);
    if dense {
        split_level_with::<DenseY>(outer, forms, head, head_roots, coords, rp, alpha, field, cap, report)
    } else {
        split_level_with::<SparsePoly>(outer, forms, head, head_roots, coords, rp, alpha, field, cap, report)
    }
}

#[allow(clippy::too_many_arguments)]
fn split_level_with<Y: YPoly>(
    outer: &Outer<'_>,
    forms: &[LinearForm],
    head: &[usize],
    head_roots: &[Vec<Scalar>],
    coords: &Matrix,
    rp: usize,
    alpha: &[Scalar],
    field: Field,
    cap: usize,
    report: &mut RemReport,
) -> Result<SparsePoly> {
    // Enumerate the grid in mixed radix.
    let sizes: Vec<usize> = head_roots.iter().map(Vec::len).collect();
    let points: usize = sizes.iter().product();
    let mut grid: Vec<Vec<usize>> = Vec::with_capacity(points);
    let mut idx = vec![0usize; head.len()];
    for _ in 0..points {
        grid.push(idx.clone());
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    let alg = SplitAlgebra::<Y> { ny: rp, field, points, cap, _y: std::marker::PhantomData };
    let inputs: Vec<Vec<Y>> = forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut ycoef = SparsePoly::zero(rp, field);
            for j in 0..rp {
                let mut m = vec![0; rp];
                m[j] = 1;
                ycoef.add_term(m, coords.get(i, j).clone());
            }
            grid.iter()
                .map(|g| {
                    let mut v = f.constant.clone();
                    for (k, &hv) in head.iter().enumerate() {
                        v = &v + &(&f.coeffs[hv] * &head_roots[k][g[k]]);
                    }
                    Ok(Y::from_sparse(&ycoef.add(&SparsePoly::constant(rp, v))?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let vals = eval_outer(outer, &alg, &inputs)?;
    report.max_terms = report.max_terms.max(vals.iter().map(Y::num_terms).sum());
    // Lagrange weights of the head point.
    let weights: Vec<Vec<Scalar>> = head
        .iter()
        .zip(head_roots)
        .map(|(&v, rs)| lagrange_weights(rs, &alpha[v]))
        .collect::<Result<_>>()?;
    let mut g = SparsePoly::zero(rp, field);
    for (gp, val) in grid.iter().zip(&vals) {
        let mut w = field.one();
        for (k, &i) in gp.iter().enumerate() {
            w = &w * &weights[k][i];
        }
        if !w.is_zero() {
            g = g.add(&val.to_sparse().scale(&w)?)?;
        }
    }
    Ok(g)
}

/// `L_j(a)` for the Lagrange basis on the given distinct nodes.
fn lagrange_weights(nodes: &[Scalar], a: &Scalar) -> Result<Vec<Scalar>> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, rj)| {
            let mut num = a.field().one();
            let mut den = a.field().one();
            for (k, rk) in nodes.iter().enumerate() {
                if k != j {
                    num = &num * &(a - rk);
                    den = &den * &(rj - rk);
                }
            }
            num.checked_div(&den)
        })
        .collect()
}

/// All roots if `p` has `deg p` distinct roots among small integers.
fn small_distinct_roots(p: &UnivariatePoly) -> Option<Vec<Scalar>> {
    let d = p.degree()?;
    let field = p.field();
    let mut roots: Vec<Scalar> = Vec::new();
    for c in -64i64..=64 {
        let x = field.int(c);
        if roots.contains(&x) {
            continue;
        }
        if p.eval(&x).ok()?.is_zero() {
            roots.push(x);
            if roots.len() == d {
                return Some(roots);
            }
        }
    }
    None
}
