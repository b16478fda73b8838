//! Randomized invariants. Each case draws a seed and builds its instance
//! from the shared generators.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unideal::circuit::{homogeneous_parts_eval, power_decompose_product, Circuit};
use unideal::division::{divide, divide_with_quotients, UnivariateIdeal};
use unideal::gaussian::{Gaussian, GaussianAlgebra};
use unideal::io;
use unideal::linalg::{congruence_diagonalize, rank_and_row_basis, LinearForm, Matrix};
use unideal::lowrank::{build_transform, rem_eval, rem_eval_report, Strategy};
use unideal::poly::{SparsePoly, UnivariatePoly};
use unideal::{Field, Scalar};

const Q: Field = Field::Rational;
const P: Field = Field::Prime(1_000_000_007);
const CAP: usize = 200_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_field(r: &mut ChaCha8Rng) -> Field {
    if r.gen_bool(0.5) {
        Q
    } else {
        P
    }
}

/// `p_v(x_v)` as a polynomial in all `n` variables.
fn lift(p: &UnivariatePoly, v: usize, n: usize) -> SparsePoly {
    let mut out = SparsePoly::zero(n, p.field());
    for (e, c) in p.coeffs().iter().enumerate() {
        let mut m = vec![0; n];
        m[v] = e as u32;
        out.add_term(m, c.clone());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_agrees_with_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = pick_field(&mut r);
        let n = r.gen_range(1..=4);
        let c = random_circuit(&mut r, n, 4, field);
        let f = c.expand(field, CAP).unwrap();
        for _ in 0..5 {
            let x = random_point(&mut r, n, field);
            prop_assert_eq!(f.eval(&x).unwrap(), c.eval(&x).unwrap());
        }
        prop_assert!(f.total_degree().unwrap_or(0) <= c.formal_degree());
    }

    #[test]
    fn homogeneous_parts_sum_to_value(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = pick_field(&mut r);
        let n = r.gen_range(1..=4);
        let c = random_circuit(&mut r, n, 4, field);
        let d = c.formal_degree();
        let x = random_point(&mut r, n, field);
        let parts = homogeneous_parts_eval(&c, d, &x).unwrap();
        let f = c.expand(field, CAP).unwrap();
        let mut total = field.zero();
        for (k, v) in parts.iter().enumerate() {
            prop_assert_eq!(v, &f.homogeneous_part(k as u32).eval(&x).unwrap());
            total = &total + v;
        }
        prop_assert_eq!(total, c.eval(&x).unwrap());
    }

    #[test]
    fn power_decomposition_matches_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=4);
        let forms: Vec<LinearForm> = (0..m).map(|_| random_form(&mut r, n, Q, true)).collect();
        let k = r.gen_range(0..=m as u32);
        let d = power_decompose_product(n, &forms, k).unwrap();
        let prod = Circuit::product_of_forms(n, &forms).unwrap().expand(Q, CAP).unwrap();
        prop_assert_eq!(d.expand(CAP).unwrap(), prod.homogeneous_part(k));
    }

    #[test]
    fn congruence_diagonalizes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = pick_field(&mut r);
        let n = r.gen_range(1..=5);
        let mut a = Matrix::zeros(n, n, field);
        for i in 0..n {
            for j in i..n {
                let v = small(&mut r, field, -2, 2);
                a.set(i, j, v.clone());
                a.set(j, i, v);
            }
        }
        let (q, d) = congruence_diagonalize(&a).unwrap();
        prop_assert!(d.is_diagonal());
        prop_assert!(!q.det().unwrap().is_zero());
        prop_assert_eq!(q.mul(&a).unwrap().mul(&q.transpose()).unwrap(), d.clone());
        let nonzero = (0..n).filter(|&i| !d.get(i, i).is_zero()).count();
        prop_assert_eq!(nonzero, a.rank());
    }

    #[test]
    fn row_basis_reconstructs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let rank = r.gen_range(1..=3);
        let m = random_lowrank_matrix(&mut r, n, rank);
        let rb = rank_and_row_basis(&m);
        prop_assert_eq!(rb.rank, m.rank());
        prop_assert!(rb.rank <= rank);
        for i in 0..n {
            for j in 0..n {
                let mut v = Q.zero();
                for (t, b) in rb.basis.iter().enumerate() {
                    v = &v + &(rb.coords.get(i, t) * &b.coeffs[j]);
                }
                prop_assert_eq!(&v, m.get(i, j));
            }
        }
    }

    #[test]
    fn transform_is_invertible_and_separates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=6);
        let k = r.gen_range(1..=3.min(n));
        let forms: Vec<LinearForm> = (0..k).map(|_| random_form(&mut r, n, Q, false)).collect();
        let t = build_transform(&forms, n).unwrap();
        prop_assert!(!t.t.det().unwrap().is_zero());
        prop_assert!(t.r_prime <= k);
        for i in 0..k {
            let e = LinearForm::var(n, i, Q);
            prop_assert_eq!(t.t.row(i), e.coeffs.as_slice());
        }
        for f in &t.residual_forms {
            prop_assert!(f.support().iter().all(|&v| v >= k));
        }
        for (j, f) in t.residual_forms.iter().enumerate() {
            prop_assert_eq!(t.t.row(k + j), f.coeffs.as_slice());
        }
        // Tail of each form in the residual basis.
        for (i, f) in forms.iter().enumerate() {
            for v in 0..n {
                let mut acc = Q.zero();
                for (j, b) in t.residual_forms.iter().enumerate() {
                    acc = &acc + &(t.coords.get(i, j) * &b.coeffs[v]);
                }
                let expect = if v < k { Q.zero() } else { f.coeffs[v].clone() };
                prop_assert_eq!(acc, expect);
            }
        }
    }

    #[test]
    fn division_contracts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = pick_field(&mut r);
        let n = r.gen_range(1..=4);
        let ideal = random_ideal(&mut r, n, 3, field);
        let f = random_sparse(&mut r, n, 6, 6, field);
        let (hs, rem) = divide_with_quotients(&f, &ideal).unwrap();
        let mut rebuilt = rem.clone();
        for (h, (v, p)) in hs.iter().zip(ideal.generators()) {
            rebuilt = rebuilt.add(&h.mul(&lift(p, *v, n)).unwrap()).unwrap();
        }
        prop_assert_eq!(&rebuilt, &f);
        prop_assert_eq!(divide(&rem, &ideal).unwrap(), rem.clone());
        for (v, p) in ideal.generators() {
            prop_assert!(rem.is_zero() || rem.degree_in(*v) < p.degree().unwrap() as u32);
        }
    }

    /// On the common zeros of split generators `f` and its remainder agree.
    #[test]
    fn remainder_agrees_on_root_grid(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = pick_field(&mut r);
        let n = r.gen_range(1..=4);
        let roots: Vec<Vec<Scalar>> = (0..n)
            .map(|_| {
                let d = r.gen_range(1..=3);
                let mut rs: Vec<i64> = Vec::new();
                while rs.len() < d {
                    let x = r.gen_range(-5..=5);
                    if !rs.contains(&x) {
                        rs.push(x);
                    }
                }
                rs.into_iter().map(|x| field.int(x)).collect()
            })
            .collect();
        let ideal = UnivariateIdeal::new(
            field,
            roots.iter().enumerate().map(|(v, rs)| (v, UnivariatePoly::from_roots(field, rs))).collect(),
        ).unwrap();
        let rank = r.gen_range(1..=3);
        let input = random_lowrank(&mut r, n, rank, 3, field);
        let c = input.to_circuit().unwrap();
        for _ in 0..4 {
            let alpha: Vec<Scalar> = roots.iter().map(|rs| rs[r.gen_range(0..rs.len())].clone()).collect();
            prop_assert_eq!(rem_eval(&input, &ideal, &alpha).unwrap(), c.eval(&alpha).unwrap());
        }
    }

    #[test]
    fn strategies_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = pick_field(&mut r);
        let n = r.gen_range(1..=6);
        let rank = r.gen_range(1..=3);
        let input = random_lowrank(&mut r, n, rank, 3, field);
        let ideal = UnivariateIdeal::boolean(field, n);
        let alpha = random_point(&mut r, n, field);
        let auto = rem_eval_report(&input, &ideal, &alpha, Strategy::Auto).unwrap();
        let fused = rem_eval_report(&input, &ideal, &alpha, Strategy::Fused).unwrap();
        prop_assert_eq!(auto.value, fused.value);
        prop_assert!(auto.levels <= n);
    }

    #[test]
    fn circuit_text_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = pick_field(&mut r);
        let n = r.gen_range(1..=4);
        let c = random_circuit(&mut r, n, 3, field);
        let back = io::parse_circuit(&io::write_circuit(&c), field).unwrap();
        let x = random_point(&mut r, n, field);
        prop_assert_eq!(back.eval(&x).unwrap(), c.eval(&x).unwrap());
        let input = random_lowrank(&mut r, n, 2, 3, field);
        let back = io::parse_lowrank(&io::write_lowrank(&input), field).unwrap();
        prop_assert_eq!(back.forms, input.forms);
        prop_assert_eq!(back.degree, input.degree);
    }

    #[test]
    fn gaussian_evaluation_extends_rational(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let c = random_circuit(&mut r, n, 4, Q);
        let x = random_point(&mut r, n, Q);
        let gx: Vec<Gaussian> = x.iter().map(|s| Gaussian::from_scalar(s).unwrap()).collect();
        let v = c.eval_in(&GaussianAlgebra, &gx).unwrap();
        prop_assert_eq!(v, Gaussian::from_scalar(&c.eval(&x).unwrap()).unwrap());
    }
}
