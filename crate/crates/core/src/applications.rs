//! Low-rank permanent and low-rank vertex cover on top of [`rem_eval`].

use std::collections::BTreeSet;

use rand::Rng;

use crate::circuit::{Circuit, Node};
use crate::division::{random_zero_test, UnivariateIdeal};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{congruence_diagonalize, rank_and_row_basis, LinearForm, Matrix};
use crate::lowrank::{rem_eval, LowRankInput};

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Rejects self-loops, out-of-range endpoints and duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Invalid(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: BTreeSet::new() }
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::new(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn adjacency(&self, field: Field) -> Matrix {
        let mut a = Matrix::zeros(self.n, self.n, field);
        for &(u, v) in &self.edges {
            a.set(u, v, field.one());
            a.set(v, u, field.one());
        }
        a
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(u, v)).collect()
    }

    /// The same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap()
    }

    fn edge_masks(&self) -> Vec<u64> {
        self.edges.iter().map(|&(u, v)| (1u64 << u) | (1u64 << v)).collect()
    }
}

/// Exhaustive check for a vertex cover with at most `k` vertices.
pub fn has_vertex_cover(g: &Graph, k: usize) -> bool {
    min_vertex_cover(g) <= k
}

/// Size of a minimum vertex cover by enumeration (`n ≤ 25`).
pub fn min_vertex_cover(g: &Graph) -> usize {
    assert!(g.n <= 25, "exhaustive vertex cover limited to 25 vertices");
    let masks = g.edge_masks();
    (0u64..1 << g.n)
        .filter(|s| masks.iter().all(|e| e & s != 0))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Permanent by Ryser's formula with Gray-code updates, `O(2^n·n)`.
pub fn ryser_permanent(a: &Matrix) -> Result<Scalar> {
    if !a.is_square() {
        return Err(Error::Arity { expected: a.rows(), got: a.cols() });
    }
    let n = a.rows();
    let field = a.field();
    if n > 20 {
        return Err(Error::SizeGuard(format!("Ryser permanent limited to n ≤ 20, got {n}")));
    }
    if n == 0 {
        return Ok(field.one());
    }
    let mut row_sums = vec![field.zero(); n];
    let mut total = field.zero();
    let mut gray: u64 = 0;
    for step in 1u64..(1 << n) {
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let adding = gray >> bit & 1 == 1;
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s = if adding { &*s + a.get(i, bit) } else { &*s - a.get(i, bit) };
        }
        let mut prod = field.one();
        for s in &row_sums {
            prod = &prod * s;
            if prod.is_zero() {
                break;
            }
        }
        if (n - gray.count_ones() as usize) % 2 == 1 {
            total = &total - &prod;
        } else {
            total = &total + &prod;
        }
    }
    Ok(total)
}

/// The row-product polynomial `∏_i Σ_j a_ij x_j` as a low-rank input.
pub fn permanent_input(a: &Matrix) -> Result<LowRankInput> {
    let field = a.field();
    let n = a.rows();
    let rb = rank_and_row_basis(a);
    let r = rb.rank;
    if r == 0 {
        // Zero matrix: a single zero form keeps the outer circuit well formed.
        let mut c = Circuit::new(1);
        c.constant(if n == 0 { field.one() } else { field.zero() });
        return LowRankInput::new(c, vec![LinearForm::zero(a.cols(), field)], Some(0));
    }
    let mut outer = Circuit::new(r);
    let mut factors = Vec::with_capacity(n);
    for i in 0..n {
        let coords = (0..r).map(|t| rb.coords.get(i, t).clone()).collect();
        factors.push(outer.add_node(Node::Linear(LinearForm::homogeneous(coords, field)))?);
    }
    outer.product(factors);
    LowRankInput::new(outer, rb.basis, Some(n as u32))
}

/// Permanent through `P_A mod ⟨x_1², …, x_n²⟩` evaluated at the all-ones
/// point. Fails with `CapExceeded` when the rank exceeds `declared_rank`.
pub fn permanent_lowrank(a: &Matrix, declared_rank: Option<usize>) -> Result<Scalar> {
    if !a.is_square() {
        return Err(Error::Arity { expected: a.rows(), got: a.cols() });
    }
    let field = a.field();
    let n = a.rows();
    if n == 0 {
        return Ok(field.one());
    }
    if let Some(r) = declared_rank {
        let rank = a.rank();
        if rank > r {
            return Err(Error::CapExceeded { cap: r, reached: rank });
        }
    }
    let input = permanent_input(a)?;
    let ideal = UnivariateIdeal::powers(field, &vec![2; n])?;
    rem_eval(&input, &ideal, &vec![field.one(); n])
}

/// Vertex-cover polynomial as a low-rank input plus its ideal.
#[derive(Clone, Debug)]
pub struct VcInstance {
    pub input: LowRankInput,
    pub ideal: UnivariateIdeal,
    pub deg_bound: u64,
    /// Variable `perm[v]` stands for vertex `v`.
    pub perm: Vec<usize>,
    /// Rank of the quadratic form.
    pub quad_rank: usize,
}

/// Orders vertices so that twin classes (equal neighbourhoods) are
/// contiguous, smallest class first.
pub fn twin_order(g: &Graph) -> Vec<usize> {
    let mut classes: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for v in 0..g.n {
        let nb = g.neighbors(v);
        match classes.iter_mut().find(|(k, _)| *k == nb) {
            Some((_, members)) => members.push(v),
            None => classes.push((nb, vec![v])),
        }
    }
    classes.sort_by_key(|(_, m)| m.len());
    let mut perm = vec![0; g.n];
    let mut next = 0;
    for (_, members) in classes {
        for v in members {
            perm[v] = next;
            next += 1;
        }
    }
    perm
}

/// `f = ∏_{s=1}^{S} (q(x) − s) · ∏_{t=0}^{n−k−1} (Σx_i − t)` with
/// `q = Σ_{edges} x_i x_j` diagonalized by congruence. `S = C(n,2)`, or `|E|`
/// when `tight`.
pub fn build_vc_instance(g: &Graph, k: usize, field: Field, tight: bool) -> Result<VcInstance> {
    let n = g.n;
    if k > n {
        return Err(Error::Invalid(format!("cover size {k} exceeds vertex count {n}")));
    }
    let perm = twin_order(g);
    let h = g.relabel(&perm);
    let half = field.int(2).inv()?;
    let mut b = h.adjacency(field);
    for i in 0..n {
        for j in 0..n {
            let v = b.get(i, j) * &half;
            b.set(i, j, v);
        }
    }
    let (q, d) = congruence_diagonalize(&b)?;
    let qinv = q.inverse()?;
    let mut forms = Vec::new();
    let mut dvals = Vec::new();
    for i in 0..n {
        if !d.get(i, i).is_zero() {
            forms.push(LinearForm::homogeneous((0..n).map(|v| qinv.get(v, i).clone()).collect(), field));
            dvals.push(d.get(i, i).clone());
        }
    }
    let r = forms.len();
    forms.push(LinearForm::homogeneous(vec![field.one(); n], field));

    let mut outer = Circuit::new(r + 1);
    let zs: Vec<usize> = (0..=r).map(|i| outer.input(i)).collect();
    let quad = if r == 0 {
        outer.constant(field.zero())
    } else {
        let squares: Vec<usize> = (0..r)
            .map(|i| {
                let c = outer.constant(dvals[i].clone());
                outer.product(vec![c, zs[i], zs[i]])
            })
            .collect();
        outer.sum(squares)
    };
    let s_max = if tight { h.num_edges() } else { n * n.saturating_sub(1) / 2 };
    let mut factors = Vec::new();
    for s in 1..=s_max {
        let c = outer.constant(field.int(-(s as i64)));
        factors.push(outer.sum(vec![quad, c]));
    }
    for t in 0..n - k {
        let mut coeffs = vec![field.zero(); r + 1];
        coeffs[r] = field.one();
        factors.push(outer.add_node(Node::Linear(LinearForm::new(coeffs, field.int(-(t as i64)))))?);
    }
    if factors.is_empty() {
        outer.constant(field.one());
    } else {
        outer.product(factors);
    }
    let deg_bound = 2 * s_max as u64 + (n - k) as u64;
    let input = LowRankInput::new(outer, forms, Some(deg_bound as u32))?;
    Ok(VcInstance { input, ideal: UnivariateIdeal::boolean(field, n), deg_bound, perm, quad_rank: r })
}

/// Result of the randomized vertex-cover test.
#[derive(Clone, Debug, PartialEq)]
pub struct VcReport {
    pub has_vc: bool,
    pub trials_run: usize,
    pub deg_bound: u64,
    pub sample_size: u64,
    /// Upper bound on the probability that a "no" answer is wrong.
    pub error_bound: f64,
    pub rank: usize,
}

/// One-sided randomized test for a vertex cover of size at most `k`:
/// "yes" is always correct.
pub fn vertex_cover_lowrank<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    trials: usize,
    field: Field,
    tight: bool,
    rng: &mut R,
) -> Result<VcReport> {
    let inst = build_vc_instance(g, k, field, tight)?;
    let zt = random_zero_test(
        |beta| rem_eval(&inst.input, &inst.ideal, beta),
        g.n,
        inst.deg_bound,
        trials,
        field,
        rng,
    )?;
    let (num, den) = zt.per_trial_error;
    let error_bound = if zt.nonzero { 0.0 } else { (num as f64 / den as f64).powi(trials as i32) };
    Ok(VcReport {
        has_vc: zt.nonzero,
        trials_run: zt.trials_run,
        deg_bound: inst.deg_bound,
        sample_size: den,
        error_bound,
        rank: inst.quad_rank + 1,
    })
}
