//! Instance generators: independent set, `k`-Lin-Eq, 1-in-3 positive SAT and
//! graph coloring, each turned into a membership question, with brute-force
//! solvers for the source problems.

use crate::applications::Graph;
use crate::circuit::Circuit;
use crate::division::UnivariateIdeal;
use crate::error::{Error, Result};
use crate::field::{prime_congruent_one, Field, Scalar};
use crate::linalg::LinearForm;
use crate::poly::UnivariatePoly;

const Q: Field = Field::Rational;

/// `∏_{j=1}^{n} (x − j)`.
fn grid_generator(n: usize) -> UnivariatePoly {
    let roots: Vec<Scalar> = (1..=n as i64).map(|j| Q.int(j)).collect();
    UnivariatePoly::from_roots(Q, &roots)
}

/// `x_i − c` over `nvars` variables.
fn shifted(nvars: usize, i: usize, c: i64) -> LinearForm {
    let mut f = LinearForm::var(nvars, i, Q);
    f.constant = Q.int(-c);
    f
}

/// `f·D` over `k` variables with `p_i = ∏_{j=1}^{n}(x_i − j)`, where
/// `f = ∏_{i<j} ∏_{(u,v)} ((x_i − u)² + (x_j − v)²)` runs over both
/// orientations of every edge (vertices numbered from 1) and
/// `D = ∏_{i≠j}(x_i − x_j)`. The product lies outside the ideal iff `G`
/// has an independent set of size `k`.
pub fn reduce_independent_set(g: &Graph, k: usize) -> Result<(Circuit, UnivariateIdeal)> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let mut c = Circuit::new(k);
    let mut factors = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for (u, v) in g.edges() {
                let (u, v) = (u as i64 + 1, v as i64 + 1);
                for (a, b) in [(u, v), (v, u)] {
                    let li = c.linear(shifted(k, i, a));
                    let sq_i = c.product(vec![li, li]);
                    let lj = c.linear(shifted(k, j, b));
                    let sq_j = c.product(vec![lj, lj]);
                    factors.push(c.sum(vec![sq_i, sq_j]));
                }
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut diff = LinearForm::var(k, i, Q);
                diff.coeffs[j] = Q.int(-1);
                factors.push(c.linear(diff));
            }
        }
    }
    if factors.is_empty() {
        c.constant(Q.one());
    } else {
        c.product(factors);
    }
    let gens = (0..k).map(|i| (i, grid_generator(n))).collect();
    Ok((c, UnivariateIdeal::new(Q, gens)?))
}

/// Degree of the circuit from [`reduce_independent_set`]: `2k(k−1)|E| + k(k−1)`.
pub fn independent_set_degree(g: &Graph, k: usize) -> usize {
    2 * k * (k - 1) * g.num_edges() + k * (k - 1)
}

/// Exhaustive independent-set check over vertex subsets.
pub fn has_independent_set(g: &Graph, k: usize) -> bool {
    let n = g.n();
    assert!(n <= 25, "exhaustive search limited to 25 vertices");
    (0u64..1 << n).any(|s| {
        s.count_ones() as usize == k && g.edges().all(|(u, v)| s >> u & 1 == 0 || s >> v & 1 == 0)
    })
}

/// Evaluates `c` on every point of `{1..=n}^k`; true iff it vanishes on all of them.
pub fn vanishes_on_grid(c: &Circuit, n: usize) -> Result<bool> {
    let k = c.nvars();
    let mut idx = vec![1i64; k];
    loop {
        let point: Vec<Scalar> = idx.iter().map(|&v| Q.int(v)).collect();
        if !c.eval(&point)?.is_zero() {
            return Ok(false);
        }
        let mut slot = 0;
        loop {
            if slot == k {
                return Ok(true);
            }
            idx[slot] += 1;
            if idx[slot] <= n as i64 {
                break;
            }
            idx[slot] = 1;
            slot += 1;
        }
    }
}

/// Does some `x ∈ {0,1}^n` satisfy `A x = b`? Entries are nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLinEqInstance {
    pub a: Vec<Vec<u64>>,
    pub b: Vec<u64>,
    cols: usize,
}

impl KLinEqInstance {
    /// Column count taken from the first row.
    pub fn new(a: Vec<Vec<u64>>, b: Vec<u64>) -> Result<Self> {
        let n = a.first().map_or(0, Vec::len);
        Self::with_columns(a, b, n)
    }

    /// Explicit column count, needed when `a` has no rows.
    pub fn with_columns(a: Vec<Vec<u64>>, b: Vec<u64>, n: usize) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Arity { expected: a.len(), got: b.len() });
        }
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        Ok(KLinEqInstance { a, b, cols: n })
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.cols
    }

    /// Row sums `μ_i`.
    pub fn mu(&self) -> Vec<u64> {
        self.a.iter().map(|r| r.iter().sum()).collect()
    }

    /// All 0/1 solutions as bit masks (`n ≤ 25`).
    pub fn solutions(&self) -> Vec<u64> {
        let n = self.n();
        assert!(n <= 25, "exhaustive search limited to 25 columns");
        (0u64..1 << n)
            .filter(|s| {
                self.a.iter().zip(&self.b).all(|(row, &t)| {
                    row.iter().enumerate().filter(|(j, _)| s >> j & 1 == 1).map(|(_, &v)| v).sum::<u64>() == t
                })
            })
            .collect()
    }

    pub fn is_solvable(&self) -> bool {
        !self.solutions().is_empty()
    }
}

/// `P_A = ∏_j (∏_i y_i^{a_ij} + ∏_i x_i^{a_ij})` over `x_0..x_{k−1}, y_0..y_{k−1}`
/// with the ideal `⟨x_i^{b_i+1}, y_i^{μ_i−b_i+1}⟩`. `P_A` lies outside the
/// ideal iff the instance has a 0/1 solution. If some `b_i > μ_i` the
/// instance is trivially unsolvable and the zero circuit is returned.
pub fn reduce_klineq(inst: &KLinEqInstance) -> Result<(Circuit, UnivariateIdeal)> {
    let k = inst.k();
    let nv = 2 * k;
    let mu = inst.mu();
    let exps: Vec<u32> = inst
        .b
        .iter()
        .map(|&b| b + 1)
        .chain(mu.iter().zip(&inst.b).map(|(&m, &b)| m.saturating_sub(b) + 1))
        .map(|e| u32::try_from(e).map_err(|_| Error::SizeGuard(format!("exponent {e}"))))
        .collect::<Result<_>>()?;
    let ideal = UnivariateIdeal::powers(Q, &exps)?;
    if inst.b.iter().zip(&mu).any(|(b, m)| b > m) {
        return Ok((Circuit::from_constant(nv, Q.zero()), ideal));
    }
    let mut c = Circuit::new(nv);
    let inputs: Vec<usize> = (0..nv).map(|i| c.input(i)).collect();
    let one = c.constant(Q.one());
    let mut factors = Vec::new();
    for j in 0..inst.n() {
        let mut xs = vec![one];
        let mut ys = vec![one];
        for i in 0..k {
            for _ in 0..inst.a[i][j] {
                xs.push(inputs[i]);
                ys.push(inputs[k + i]);
            }
        }
        let px = c.product(xs);
        let py = c.product(ys);
        factors.push(c.sum(vec![py, px]));
    }
    if factors.is_empty() {
        c.constant(Q.one());
    } else {
        c.product(factors);
    }
    Ok((c, ideal))
}

/// Positive 3-SAT where every clause needs exactly one true literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneInThreeInstance {
    pub vars: usize,
    pub clauses: Vec<[usize; 3]>,
}

impl OneInThreeInstance {
    pub fn new(vars: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        for c in &clauses {
            if c.iter().any(|&v| v >= vars) {
                return Err(Error::Invalid(format!("clause {c:?} mentions a variable ≥ {vars}")));
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::Invalid(format!("clause {c:?} repeats a literal")));
            }
        }
        Ok(OneInThreeInstance { vars, clauses })
    }

    /// Assignments (bit masks) with exactly one true literal per clause.
    pub fn solutions(&self) -> Vec<u64> {
        assert!(self.vars <= 25, "exhaustive search limited to 25 variables");
        (0u64..1 << self.vars)
            .filter(|s| self.clauses.iter().all(|c| c.iter().filter(|&&v| s >> v & 1 == 1).count() == 1))
            .collect()
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.solutions().is_empty()
    }
}

/// Clauses packed per row of the `k`-Lin-Eq matrix: `⌈log2 max(v, m, 2)⌉`.
pub fn clauses_per_row(inst: &OneInThreeInstance) -> usize {
    let n = inst.vars.max(inst.clauses.len()).max(2);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Incidence rows (clause × variable) with a zero row after each clause,
/// read in chunks of `w = 2·clauses_per_row` bits as binary numbers.
/// Each clause bit sits below a zero bit, so column sums of at most 3 never
/// carry into the next clause; the target has a 1 at every clause bit.
/// A partial last chunk is padded with zero rows and zero target bits.
pub fn reduce_one_in_three(inst: &OneInThreeInstance) -> Result<KLinEqInstance> {
    let per_row = clauses_per_row(inst);
    if 2 * per_row > 63 {
        return Err(Error::SizeGuard("packed entries exceed 64 bits".into()));
    }
    let rows = inst.clauses.len().div_ceil(per_row);
    let mut a = vec![vec![0u64; inst.vars]; rows];
    let mut b = vec![0u64; rows];
    for (ci, clause) in inst.clauses.iter().enumerate() {
        let (r, slot) = (ci / per_row, ci % per_row);
        let bit = 1u64 << (2 * slot);
        for &v in clause {
            a[r][v] |= bit;
        }
        b[r] |= bit;
    }
    KLinEqInstance::with_columns(a, b, inst.vars)
}

/// `f_G = ∏_{(i,j)∈E, i<j} (x_i − x_j)` and `⟨x_i^k − 1⟩`.
pub fn graph_coloring_instance(g: &Graph, k: usize) -> Result<(Circuit, UnivariateIdeal)> {
    if k == 0 {
        return Err(Error::Invalid("need at least one color".into()));
    }
    let n = g.n();
    let mut forms = Vec::new();
    for (u, v) in g.edges() {
        let (i, j) = (u.min(v), u.max(v));
        let mut f = LinearForm::var(n, i, Q);
        f.coeffs[j] = Q.int(-1);
        forms.push(f);
    }
    let c = Circuit::product_of_forms(n, &forms)?;
    let mut gen = vec![0i64; k + 1];
    gen[0] = -1;
    gen[k] = 1;
    let p = UnivariatePoly::from_i64(Q, &gen);
    let ideal = UnivariateIdeal::new(Q, (0..n).map(|i| (i, p.clone())).collect())?;
    Ok((c, ideal))
}

/// Exhaustive proper-coloring check.
pub fn is_k_colorable(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut colors = vec![0usize; n];
    loop {
        if g.edges().all(|(u, v)| colors[u] != colors[v]) {
            return true;
        }
        let mut slot = 0;
        loop {
            if slot == n {
                return false;
            }
            colors[slot] += 1;
            if colors[slot] < k {
                break;
            }
            colors[slot] = 0;
            slot += 1;
        }
    }
}

/// Evaluates `c` on all tuples of `k`-th roots of unity in `ℤ_p` with
/// `p ≡ 1 (mod k)`; true iff it vanishes on all of them.
pub fn vanishes_on_roots_of_unity(c: &Circuit, k: usize) -> Result<bool> {
    let p = prime_congruent_one(k as u64, 1 << 20);
    let field = Field::Prime(p);
    // Find a generator of the order-k subgroup.
    let exp = (p - 1) / k as u64;
    let mut omega = None;
    for g in 2..p {
        let w = Scalar::from_u64(g, field).pow(exp);
        if (1..k as u64).all(|d| k as u64 % d != 0 || !w.pow(d).is_one()) {
            omega = Some(w);
            break;
        }
    }
    let omega = omega.unwrap_or_else(|| field.one());
    let roots: Vec<Scalar> = (0..k as u64).map(|e| omega.pow(e)).collect();
    let n = c.nvars();
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<Scalar> = idx.iter().map(|&i| roots[i].clone()).collect();
        if !c.eval_field(field, &point)?.is_zero() {
            return Ok(false);
        }
        let mut slot = 0;
        loop {
            if slot == n {
                return Ok(true);
            }
            idx[slot] += 1;
            if idx[slot] < k {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
    }
}
