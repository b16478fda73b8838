//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use unideal::applications::Graph;
use unideal::circuit::{Circuit, DiagonalCircuit};
use unideal::division::UnivariateIdeal;
use unideal::linalg::{LinearForm, Matrix};
use unideal::lowrank::LowRankInput;
use unideal::poly::{SparsePoly, UnivariatePoly};
use unideal::{Field, Scalar};

pub fn small<R: Rng>(rng: &mut R, field: Field, lo: i64, hi: i64) -> Scalar {
    field.int(rng.gen_range(lo..=hi))
}

pub fn random_form<R: Rng>(rng: &mut R, n: usize, field: Field, affine: bool) -> LinearForm {
    let coeffs = (0..n).map(|_| small(rng, field, -3, 3)).collect();
    let c = if affine { small(rng, field, -3, 3) } else { field.zero() };
    LinearForm::new(coeffs, c)
}

/// Sum of a few products of affine forms and inputs, degree at most `deg`.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, deg: u32, field: Field) -> Circuit {
    let mut c = Circuit::new(n);
    let inputs: Vec<usize> = (0..n).map(|i| c.input(i)).collect();
    let terms = rng.gen_range(1..=3);
    let mut summands = Vec::new();
    for _ in 0..terms {
        let d = rng.gen_range(0..=deg);
        let mut factors = vec![c.constant(small(rng, field, -4, 4))];
        for _ in 0..d {
            let id = if n > 0 && rng.gen_bool(0.5) {
                inputs[rng.gen_range(0..n)]
            } else {
                c.linear(random_form(rng, n, field, true))
            };
            factors.push(id);
        }
        summands.push(c.product(factors));
    }
    c.sum(summands);
    c
}

/// Monomial-sum circuit with small integer coefficients.
pub fn random_sparse<R: Rng>(rng: &mut R, n: usize, deg: u32, terms: usize, field: Field) -> SparsePoly {
    let mut p = SparsePoly::zero(n, field);
    for _ in 0..terms {
        let budget = rng.gen_range(0..=deg);
        let mut m = vec![0u32; n];
        for _ in 0..budget {
            if n > 0 {
                m[rng.gen_range(0..n)] += 1;
            }
        }
        p.add_term(m, small(rng, field, -5, 5));
    }
    p
}

/// Nonconstant polynomial of degree `d` with coefficients in `[−c, c]`.
pub fn random_univariate<R: Rng>(rng: &mut R, d: usize, c: i64, field: Field) -> UnivariatePoly {
    let mut coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-c..=c)).collect();
    while coeffs[d] == 0 {
        coeffs[d] = rng.gen_range(-c..=c);
    }
    UnivariatePoly::from_i64(field, &coeffs)
}

pub fn random_squarefree<R: Rng>(rng: &mut R, d: usize, c: i64) -> UnivariatePoly {
    loop {
        let p = random_univariate(rng, d, c, Field::Rational);
        if p.is_squarefree().unwrap() {
            return p;
        }
    }
}

/// Generators of degree `1..=max_deg` on every variable.
pub fn random_ideal<R: Rng>(rng: &mut R, n: usize, max_deg: usize, field: Field) -> UnivariateIdeal {
    let gens = (0..n)
        .map(|v| {
            let d = rng.gen_range(1..=max_deg);
            (v, random_univariate(rng, d, 4, field))
        })
        .collect();
    UnivariateIdeal::new(field, gens).unwrap()
}

pub fn random_lowrank<R: Rng>(rng: &mut R, n: usize, r: usize, d: u32, field: Field) -> LowRankInput {
    let outer = random_circuit(rng, r, d, field);
    let forms = (0..r)
        .map(|_| {
            let affine = rng.gen_bool(0.5);
            random_form(rng, n, field, affine)
        })
        .collect();
    LowRankInput::new(outer, forms, None).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, field: Field) -> Vec<Scalar> {
    (0..n).map(|_| small(rng, field, -6, 6)).collect()
}

pub fn random_diagonal<R: Rng>(rng: &mut R, n: usize, k: u32, summands: usize) -> DiagonalCircuit {
    let field = Field::Rational;
    let mut d = DiagonalCircuit::new(n, k, field);
    for _ in 0..summands {
        d.push(small(rng, field, -3, 3), random_form(rng, n, field, false)).unwrap();
    }
    d
}

/// `U·V` with `U` of size `n × r`, entries in `[−2, 2]`.
pub fn random_lowrank_matrix<R: Rng>(rng: &mut R, n: usize, r: usize) -> Matrix {
    let u: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let v: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let u = Matrix::from_i64(Field::Rational, &u).unwrap();
    let v = Matrix::from_i64(Field::Rational, &v).unwrap();
    u.mul(&v).unwrap()
}

/// Blow-up of a pattern graph on at most three classes, plus isolated
/// vertices; adjacency rank at most 3.
pub fn random_blowup<R: Rng>(rng: &mut R, max_n: usize) -> Graph {
    let classes = rng.gen_range(1..=3);
    let mut pattern = [[false; 3]; 3];
    for i in 0..classes {
        for j in i + 1..classes {
            let e = rng.gen_bool(0.7);
            pattern[i][j] = e;
            pattern[j][i] = e;
        }
    }
    let n = rng.gen_range(2..=max_n);
    let label: Vec<Option<usize>> = (0..n)
        .map(|_| if rng.gen_bool(0.15) { None } else { Some(rng.gen_range(0..classes)) })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if let (Some(a), Some(b)) = (label[u], label[v]) {
                if pattern[a][b] {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// All graphs on `n` labelled vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            Graph::new(n, edges).unwrap()
        })
        .collect()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}
