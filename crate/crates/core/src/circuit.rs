//! Arithmetic circuits, generic evaluation, bounded expansion, homogeneous
//! components and diagonal (sum of powers of linear forms) circuits.

use num_bigint::BigInt;
use num_integer::binomial;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{random_prime, Field, Scalar};
use crate::linalg::LinearForm;
use crate::poly::SparsePoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Input(usize),
    Const(Scalar),
    Add(Vec<usize>),
    Mul(Vec<usize>),
    Linear(LinearForm),
}

/// A DAG of gates over `nvars` inputs; children always precede parents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    nvars: usize,
    nodes: Vec<Node>,
    output: usize,
    degree_bound: Option<u32>,
}

/// Ring in which a circuit can be evaluated.
pub trait Algebra {
    type Elem: Clone;
    fn constant(&self, c: &Scalar) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

/// Plain evaluation in a field.
#[derive(Clone, Copy, Debug)]
pub struct FieldAlgebra(pub Field);

impl Algebra for FieldAlgebra {
    type Elem = Scalar;
    fn constant(&self, c: &Scalar) -> Result<Scalar> {
        c.coerce(self.0)
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(a + b)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(a * b)
    }
}

/// Expansion into sparse polynomials, failing once a value exceeds `cap` terms.
#[derive(Clone, Copy, Debug)]
pub struct PolyAlgebra {
    pub nvars: usize,
    pub field: Field,
    pub cap: usize,
}

impl Algebra for PolyAlgebra {
    type Elem = SparsePoly;
    fn constant(&self, c: &Scalar) -> Result<SparsePoly> {
        Ok(SparsePoly::constant(self.nvars, c.coerce(self.field)?))
    }
    fn add(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        let s = a.add(b)?;
        if s.num_terms() > self.cap {
            return Err(Error::CapExceeded { cap: self.cap, reached: s.num_terms() });
        }
        Ok(s)
    }
    fn mul(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        a.mul_capped(b, self.cap)
    }
}

impl Circuit {
    pub fn new(nvars: usize) -> Self {
        Circuit { nvars, nodes: Vec::new(), output: 0, degree_bound: None }
    }

    fn push(&mut self, node: Node) -> Result<usize> {
        let id = self.nodes.len();
        match &node {
            Node::Input(i) if *i >= self.nvars => {
                return Err(Error::Invalid(format!("input x{i} out of range for {} vars", self.nvars)))
            }
            Node::Add(ch) | Node::Mul(ch) => {
                if ch.is_empty() {
                    return Err(Error::Invalid("gate without children".into()));
                }
                if let Some(&c) = ch.iter().find(|&&c| c >= id) {
                    return Err(Error::Invalid(format!("child {c} does not precede node {id}")));
                }
            }
            Node::Linear(f) if f.nvars() != self.nvars => {
                return Err(Error::Arity { expected: self.nvars, got: f.nvars() })
            }
            _ => {}
        }
        self.nodes.push(node);
        self.output = id;
        Ok(id)
    }

    /// Appends a node; the newest node is the output until [`set_output`](Self::set_output).
    pub fn add_node(&mut self, node: Node) -> Result<usize> {
        self.push(node)
    }

    pub fn input(&mut self, i: usize) -> usize {
        self.push(Node::Input(i)).expect("input index in range")
    }

    pub fn constant(&mut self, c: Scalar) -> usize {
        self.push(Node::Const(c)).unwrap()
    }

    pub fn sum(&mut self, children: Vec<usize>) -> usize {
        self.push(Node::Add(children)).expect("valid children")
    }

    pub fn product(&mut self, children: Vec<usize>) -> usize {
        self.push(Node::Mul(children)).expect("valid children")
    }

    pub fn linear(&mut self, form: LinearForm) -> usize {
        self.push(Node::Linear(form)).expect("form arity matches")
    }

    pub fn set_output(&mut self, id: usize) -> Result<()> {
        if id >= self.nodes.len() {
            return Err(Error::Invalid(format!("output {id} out of range")));
        }
        self.output = id;
        Ok(())
    }

    pub fn with_degree_bound(mut self, d: u32) -> Self {
        self.degree_bound = Some(d);
        self
    }

    pub fn degree_bound(&self) -> Option<u32> {
        self.degree_bound
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// Single-node circuit computing the constant `c`.
    pub fn from_constant(nvars: usize, c: Scalar) -> Self {
        let mut circ = Circuit::new(nvars);
        circ.constant(c);
        circ
    }

    /// Sum-of-monomials circuit for an explicit polynomial.
    pub fn from_sparse(p: &SparsePoly) -> Self {
        let mut c = Circuit::new(p.nvars());
        let inputs: Vec<usize> = (0..p.nvars()).map(|i| c.input(i)).collect();
        let mut terms = Vec::new();
        for (m, coef) in p.terms() {
            let mut factors = vec![c.constant(coef.clone())];
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    factors.push(inputs[i]);
                }
            }
            terms.push(c.product(factors));
        }
        if terms.is_empty() {
            c.constant(p.field().zero());
        } else {
            c.sum(terms);
        }
        c
    }

    /// `∏_i form_i` as a circuit.
    pub fn product_of_forms(nvars: usize, forms: &[LinearForm]) -> Result<Self> {
        let mut c = Circuit::new(nvars);
        if forms.is_empty() {
            c.constant(Field::Rational.one());
            return Ok(c);
        }
        let mut ids = Vec::with_capacity(forms.len());
        for f in forms {
            ids.push(c.push(Node::Linear(f.clone()))?);
        }
        c.product(ids);
        Ok(c)
    }

    /// Replaces every input `z_i` by the affine form `forms[i]` over `nvars` variables.
    pub fn compose_linear(&self, nvars: usize, forms: &[LinearForm]) -> Result<Circuit> {
        if forms.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: forms.len() });
        }
        let mut out = Circuit::new(nvars);
        for node in &self.nodes {
            let n = match node {
                Node::Input(i) => Node::Linear(forms[*i].clone()),
                Node::Linear(f) => {
                    // Σ c_i·forms_i + c_0, distributed into a single form.
                    let mut acc = LinearForm::zero(nvars, f.field());
                    acc.constant = f.constant.clone();
                    for (c, g) in f.coeffs.iter().zip(forms) {
                        if !c.is_zero() {
                            let g = g.coerce(f.field())?;
                            acc = acc.add(&g.scale(c));
                        }
                    }
                    Node::Linear(acc)
                }
                other => other.clone(),
            };
            out.push(n)?;
        }
        out.output = self.output;
        out.degree_bound = self.degree_bound;
        Ok(out)
    }

    /// Syntactic degree upper bound.
    pub fn formal_degree(&self) -> u32 {
        let mut deg: Vec<u32> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let d = match node {
                Node::Input(_) => 1,
                Node::Const(_) => 0,
                Node::Add(ch) => ch.iter().map(|&c| deg[c]).max().unwrap_or(0),
                Node::Mul(ch) => ch.iter().map(|&c| deg[c]).sum(),
                Node::Linear(f) => u32::from(f.coeffs.iter().any(|c| !c.is_zero())),
            };
            deg.push(d);
        }
        deg.get(self.output).copied().unwrap_or(0)
    }

    /// Degree bound used by algorithms: the declared bound when present.
    pub fn effective_degree(&self) -> u32 {
        self.degree_bound.unwrap_or_else(|| self.formal_degree())
    }

    /// Indices of the variables the circuit reads.
    pub fn used_vars(&self) -> Vec<usize> {
        let live = self.live_mask();
        let mut used = vec![false; self.nvars];
        for (node, &l) in self.nodes.iter().zip(&live) {
            if !l {
                continue;
            }
            match node {
                Node::Input(i) => used[*i] = true,
                Node::Linear(f) => {
                    for i in f.support() {
                        used[i] = true;
                    }
                }
                _ => {}
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    fn live_mask(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        if self.nodes.is_empty() {
            return live;
        }
        live[self.output] = true;
        for id in (0..=self.output).rev() {
            if !live[id] {
                continue;
            }
            if let Node::Add(ch) | Node::Mul(ch) = &self.nodes[id] {
                for &c in ch {
                    live[c] = true;
                }
            }
        }
        live
    }

    /// Evaluates the circuit in an arbitrary algebra with the given input values.
    pub fn eval_in<A: Algebra>(&self, alg: &A, inputs: &[A::Elem]) -> Result<A::Elem> {
        if inputs.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: inputs.len() });
        }
        if self.nodes.is_empty() {
            return Err(Error::Invalid("empty circuit".into()));
        }
        let live = self.live_mask();
        let mut vals: Vec<Option<A::Elem>> = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate().take(self.output + 1) {
            if !live[id] {
                continue;
            }
            let v = match node {
                Node::Input(i) => inputs[*i].clone(),
                Node::Const(c) => alg.constant(c)?,
                Node::Add(ch) => {
                    let mut acc = vals[ch[0]].clone().unwrap();
                    for &c in &ch[1..] {
                        acc = alg.add(&acc, vals[c].as_ref().unwrap())?;
                    }
                    acc
                }
                Node::Mul(ch) => {
                    let mut acc = vals[ch[0]].clone().unwrap();
                    for &c in &ch[1..] {
                        acc = alg.mul(&acc, vals[c].as_ref().unwrap())?;
                    }
                    acc
                }
                Node::Linear(f) => {
                    let mut acc = alg.constant(&f.constant)?;
                    for (c, x) in f.coeffs.iter().zip(inputs) {
                        if !c.is_zero() {
                            let term = if c.is_one() { x.clone() } else { alg.mul(&alg.constant(c)?, x)? };
                            acc = alg.add(&acc, &term)?;
                        }
                    }
                    acc
                }
            };
            vals[id] = Some(v);
        }
        Ok(vals[self.output].take().unwrap())
    }

    /// Value at `point`; every coordinate must lie in the same field.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        let field = point.first().map_or(Field::Rational, Scalar::field);
        self.eval_field(field, point)
    }

    /// Value in `field`, coercing coordinates and constants into it.
    pub fn eval_field(&self, field: Field, point: &[Scalar]) -> Result<Scalar> {
        let pt: Vec<Scalar> = point.iter().map(|p| p.coerce(field)).collect::<Result<_>>()?;
        if let Some(bad) = point.iter().find(|p| p.field() != field && !matches!(p, Scalar::Rational(_))) {
            return Err(Error::FieldMismatch(bad.field(), field));
        }
        self.eval_in(&FieldAlgebra(field), &pt)
    }

    /// Exact sparse expansion; fails with `CapExceeded` past `cap` terms.
    pub fn expand(&self, field: Field, cap: usize) -> Result<SparsePoly> {
        let alg = PolyAlgebra { nvars: self.nvars, field, cap };
        let inputs: Vec<SparsePoly> =
            (0..self.nvars).map(|i| SparsePoly::var(self.nvars, i, field)).collect();
        self.eval_in(&alg, &inputs)
    }
}

/// Evaluates an integer circuit at an integer point modulo a fresh random
/// prime of `bits` bits. Returns the residue and the prime.
pub fn eval_mod_random_prime<R: Rng + ?Sized>(
    c: &Circuit,
    point: &[BigInt],
    bits: u32,
    rng: &mut R,
) -> Result<(Scalar, u64)> {
    if !(2..=64).contains(&bits) {
        return Err(Error::Invalid(format!("prime bit length {bits} outside 2..=64")));
    }
    loop {
        let p = random_prime(bits, rng);
        let field = Field::Prime(p);
        let pt: Vec<Scalar> = point.iter().map(|v| Scalar::from_bigint(v, field)).collect();
        match c.eval_in(&FieldAlgebra(field), &pt) {
            Ok(v) => return Ok((v, p)),
            // A constant's denominator vanished mod p: draw another prime.
            Err(Error::NotInvertible(..)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Coefficients (low to high) of the degree `< nodes.len()` interpolant.
pub fn interpolate(nodes: &[Scalar], values: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = nodes.len();
    if values.len() != n {
        return Err(Error::Arity { expected: n, got: values.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let field = nodes[0].field();
    // Newton divided differences.
    let mut dd: Vec<Scalar> = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &nodes[i] - &nodes[i - j];
            dd[i] = num.checked_div(&den)?;
        }
    }
    // Horner back-substitution into monomial basis.
    let mut coeffs = vec![field.zero(); n];
    for i in (0..n).rev() {
        // coeffs ← coeffs·(t − nodes[i]) + dd[i]
        let mut next = vec![field.zero(); n];
        for k in 0..n - 1 {
            next[k + 1] = &next[k + 1] + &coeffs[k];
        }
        for k in 0..n {
            next[k] = &next[k] - &(&coeffs[k] * &nodes[i]);
        }
        next[0] = &next[0] + &dd[i];
        coeffs = next;
    }
    Ok(coeffs)
}

fn scaled_point(point: &[Scalar], t: &Scalar) -> Vec<Scalar> {
    point.iter().map(|x| x * t).collect()
}

/// Values `f_0(point), …, f_d(point)` of all homogeneous components of a
/// circuit of degree ≤ `d`, by interpolating `t ↦ f(t·point)` at `t = 1..d+1`.
pub fn homogeneous_parts_eval(c: &Circuit, d: u32, point: &[Scalar]) -> Result<Vec<Scalar>> {
    let field = point.first().map_or(Field::Rational, Scalar::field);
    if !field.exceeds(d as u64 + 1) {
        return Err(Error::FieldTooSmall { needed: d as u64 + 1 });
    }
    let pt: Vec<Scalar> = point.iter().map(|p| p.coerce(field)).collect::<Result<_>>()?;
    let alg = FieldAlgebra(field);
    let nodes: Vec<Scalar> = (1..=d as i64 + 1).map(|t| field.int(t)).collect();
    let values: Vec<Scalar> = nodes
        .iter()
        .map(|t| c.eval_in(&alg, &scaled_point(&pt, t)))
        .collect::<Result<_>>()?;
    interpolate(&nodes, &values)
}

/// `f_k(point)` for the degree-`k` homogeneous part of a degree-≤`d` circuit.
pub fn homogeneous_part_eval(c: &Circuit, k: u32, d: u32, point: &[Scalar]) -> Result<Scalar> {
    let field = point.first().map_or(Field::Rational, Scalar::field);
    if k > d {
        if !field.exceeds(d as u64 + 1) {
            return Err(Error::FieldTooSmall { needed: d as u64 + 1 });
        }
        return Ok(field.zero());
    }
    Ok(homogeneous_parts_eval(c, d, point)?.swap_remove(k as usize))
}

/// `Σ_j c_j · λ_j^k` with homogeneous linear forms `λ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalCircuit {
    pub nvars: usize,
    pub degree: u32,
    pub field: Field,
    pub summands: Vec<(Scalar, LinearForm)>,
}

impl DiagonalCircuit {
    pub fn new(nvars: usize, degree: u32, field: Field) -> Self {
        DiagonalCircuit { nvars, degree, field, summands: Vec::new() }
    }

    pub fn fan_in(&self) -> usize {
        self.summands.len()
    }

    pub fn push(&mut self, coeff: Scalar, form: LinearForm) -> Result<()> {
        if form.nvars() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: form.nvars() });
        }
        if !form.is_homogeneous() {
            return Err(Error::Invalid("diagonal circuit forms must be homogeneous".into()));
        }
        self.summands.push((coeff.coerce(self.field)?, form.coerce(self.field)?));
        Ok(())
    }

    pub fn extend(&mut self, other: DiagonalCircuit) -> Result<()> {
        if other.degree != self.degree {
            return Err(Error::Invalid("diagonal circuits of different degree".into()));
        }
        for (c, f) in other.summands {
            self.push(c, f)?;
        }
        Ok(())
    }

    pub fn coerce(&self, field: Field) -> Result<DiagonalCircuit> {
        let mut out = DiagonalCircuit::new(self.nvars, self.degree, field);
        for (c, f) in &self.summands {
            out.summands.push((c.coerce(field)?, f.coerce(field)?));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        let mut acc = self.field.zero();
        for (c, f) in &self.summands {
            let v = f.eval(point)?.pow(self.degree as u64);
            acc = acc.checked_add(&c.checked_mul(&v)?)?;
        }
        Ok(acc)
    }

    pub fn expand(&self, cap: usize) -> Result<SparsePoly> {
        let mut acc = SparsePoly::zero(self.nvars, self.field);
        for (c, f) in &self.summands {
            let mut lin = SparsePoly::zero(self.nvars, self.field);
            for (i, a) in f.coeffs.iter().enumerate() {
                let mut m = vec![0; self.nvars];
                m[i] = 1;
                lin.add_term(m, a.clone());
            }
            let mut p = SparsePoly::one(self.nvars, self.field);
            for _ in 0..self.degree {
                p = p.mul_capped(&lin, cap)?;
            }
            acc = acc.add(&p.scale(c)?)?;
            if acc.num_terms() > cap {
                return Err(Error::CapExceeded { cap, reached: acc.num_terms() });
            }
        }
        Ok(acc)
    }
}

/// Degree-`k` homogeneous part of `∏ forms` as a sum of `2^{m−1}` `k`-th powers,
/// via Fischer's identity `∏ℓ_j = (2^{m−1} m!)^{-1} Σ_ε (∏ε_i)(ℓ_1 + Σ ε_i ℓ_{i+1})^m`.
pub fn power_decompose_product(nvars: usize, forms: &[LinearForm], k: u32) -> Result<DiagonalCircuit> {
    let field = forms.first().map_or(Field::Rational, LinearForm::field);
    let m = forms.len();
    let mut out = DiagonalCircuit::new(nvars, k, field);
    if m == 0 {
        if k == 0 {
            out.push(field.one(), LinearForm::zero(nvars, field))?;
        }
        return Ok(out);
    }
    if k as usize > m {
        return Ok(out);
    }
    if m > 63 {
        return Err(Error::SizeGuard(format!("{m} factors in a Fischer decomposition")));
    }
    if !field.exceeds(m as u64) {
        return Err(Error::FieldTooSmall { needed: m as u64 });
    }
    let forms: Vec<LinearForm> = forms
        .iter()
        .map(|f| {
            if f.nvars() != nvars {
                Err(Error::Arity { expected: nvars, got: f.nvars() })
            } else {
                f.coerce(field)
            }
        })
        .collect::<Result<_>>()?;
    let mut denom = field.one();
    for i in 1..=m as i64 {
        denom = &denom * &field.int(i);
    }
    denom = &denom * &field.int(2).pow(m as u64 - 1);
    let binom = Scalar::from_bigint(&binomial(BigInt::from(m), BigInt::from(k)), field);
    let scale = binom.checked_div(&denom)?;
    for mask in 0u64..(1u64 << (m - 1)) {
        let mut lam = forms[0].clone();
        let mut negative = false;
        for (i, f) in forms[1..].iter().enumerate() {
            if mask >> i & 1 == 1 {
                lam = lam.add(&f.scale(&-&field.one()));
                negative = !negative;
            } else {
                lam = lam.add(f);
            }
        }
        let mu = std::mem::replace(&mut lam.constant, field.zero());
        let mut coeff = &scale * &mu.pow((m as u64) - k as u64);
        if negative {
            coeff = -&coeff;
        }
        out.summands.push((coeff, lam));
    }
    Ok(out)
}
