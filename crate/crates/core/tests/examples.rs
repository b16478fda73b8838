//! Small worked examples, one group per module, through the public API.

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unideal::applications::{permanent_lowrank, ryser_permanent, vertex_cover_lowrank, Graph};
use unideal::certifier::{approximate_roots, compute_threshold, search_nonmembership, verify_certificate, Decision};
use unideal::circuit::{homogeneous_part_eval, Circuit, DiagonalCircuit};
use unideal::division::{divide, is_member_brute, power_table, UnivariateIdeal};
use unideal::gaussian::Gaussian;
use unideal::hadamard::{cover_probability, membership_powers, scaled_hadamard_eval, PowerIdealSpec, PowersConfig};
use unideal::linalg::{LinearForm, Matrix};
use unideal::lowrank::{rem_eval, LowRankInput};
use unideal::poly::{SparsePoly, UnivariatePoly};
use unideal::reductions::{
    graph_coloring_instance, reduce_independent_set, reduce_klineq, reduce_one_in_three, vanishes_on_grid,
    vanishes_on_roots_of_unity, KLinEqInstance, OneInThreeInstance,
};
use unideal::{Error, Field, Scalar};

const Q: Field = Field::Rational;

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Q.int(x)).collect()
}

fn sum_of_vars(n: usize) -> LinearForm {
    LinearForm::from_i64(Q, &vec![1; n], 0)
}

/// `(z)^2` over one input.
fn square_outer() -> Circuit {
    let mut c = Circuit::new(1);
    let z = c.input(0);
    c.product(vec![z, z]);
    c
}

#[test]
fn circuit_evaluation_and_expansion() {
    let mut c = Circuit::new(2);
    let x1 = c.input(0);
    let x2 = c.input(1);
    let s = c.sum(vec![x1, x2]);
    c.product(vec![s, x1]);
    assert_eq!(c.eval(&ints(&[2, 3])).unwrap(), Q.int(10));
    assert_eq!(Circuit::from_constant(3, Q.int(5)).eval(&ints(&[7, 8, 9])).unwrap(), Q.int(5));

    let sq = square_outer().compose_linear(2, &[sum_of_vars(2)]).unwrap();
    let f = sq.expand(Q, 10).unwrap();
    assert_eq!(f.coeff(&[1, 1]), Q.int(2));
    assert_eq!(f.num_terms(), 3);
    assert!(matches!(sq.expand(Q, 1), Err(Error::CapExceeded { .. })));

    // 1 + x + x², degree-1 part at b is b.
    let mut p = SparsePoly::zero(1, Q);
    for e in 0..3 {
        p.add_term(vec![e], Q.one());
    }
    let c = Circuit::from_sparse(&p);
    assert_eq!(homogeneous_part_eval(&c, 1, 2, &ints(&[7])).unwrap(), Q.int(7));
    assert_eq!(homogeneous_part_eval(&c, 5, 2, &ints(&[7])).unwrap(), Q.zero());
}

#[test]
fn division_examples() {
    let boolean = UnivariatePoly::from_i64(Q, &[0, -1, 1]);
    assert_eq!(power_table(&boolean, 5).unwrap()[5], UnivariatePoly::x_pow(Q, 1));
    let square = UnivariatePoly::x_pow(Q, 2);
    assert!(power_table(&square, 3).unwrap()[3].is_zero());

    // x1²x2 + x2 mod ⟨x1² − x1, x2² − x2⟩ = x1x2 + x2.
    let mut f = SparsePoly::zero(2, Q);
    f.add_term(vec![2, 1], Q.one());
    f.add_term(vec![0, 1], Q.one());
    let ideal = UnivariateIdeal::boolean(Q, 2);
    let mut expect = SparsePoly::zero(2, Q);
    expect.add_term(vec![1, 1], Q.one());
    expect.add_term(vec![0, 1], Q.one());
    assert_eq!(divide(&f, &ideal).unwrap(), expect);

    // Triangle graph polynomial is not in ⟨x_i³ − 1⟩.
    let (c, ideal) = graph_coloring_instance(&Graph::complete(3), 3).unwrap();
    assert!(!is_member_brute(&c, &ideal, 10_000).unwrap());
}

#[test]
fn lowrank_remainder_examples() {
    let powers = UnivariateIdeal::powers(Q, &[2, 2]).unwrap();
    let input = LowRankInput::new(square_outer(), vec![sum_of_vars(2)], None).unwrap();
    assert_eq!(rem_eval(&input, &powers, &ints(&[1, 1])).unwrap(), Q.int(2));

    // Already reduced: x1·x2 against squares evaluates directly.
    let mut outer = Circuit::new(2);
    let a = outer.input(0);
    let b = outer.input(1);
    outer.product(vec![a, b]);
    let forms = vec![LinearForm::var(2, 0, Q), LinearForm::var(2, 1, Q)];
    let input = LowRankInput::new(outer, forms, None).unwrap();
    assert_eq!(rem_eval(&input, &powers, &ints(&[3, -4])).unwrap(), Q.int(-12));

    // Generator missing for a used variable.
    let half = UnivariateIdeal::powers(Q, &[2]).unwrap();
    let input = LowRankInput::new(square_outer(), vec![sum_of_vars(2)], None).unwrap();
    assert!(matches!(rem_eval(&input, &half, &ints(&[1, 1])), Err(Error::MissingGenerator(1))));
}

#[test]
fn permanent_and_vertex_cover() {
    let ones = Matrix::from_i64(Q, &[vec![1, 1], vec![1, 1]]).unwrap();
    assert_eq!(permanent_lowrank(&ones, Some(1)).unwrap(), Q.int(2));
    let a = Matrix::from_i64(Q, &[vec![1, 2, 0, 1], vec![2, 4, 0, 2], vec![0, 1, 1, 1], vec![1, 3, 1, 2]]).unwrap();
    assert_eq!(permanent_lowrank(&a, None).unwrap(), ryser_permanent(&a).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = Field::Prime(2_147_483_647);
    let c4 = Graph::cycle(4);
    assert!(!vertex_cover_lowrank(&c4, 1, 20, p, false, &mut rng).unwrap().has_vc);
    let yes = vertex_cover_lowrank(&c4, 2, 20, p, false, &mut rng).unwrap();
    assert!(yes.has_vc);
    assert_eq!(yes.error_bound, 0.0);
    assert!(vertex_cover_lowrank(&Graph::star(3), 1, 20, p, true, &mut rng).unwrap().has_vc);
    assert!(vertex_cover_lowrank(&Graph::complete(4), 4, 5, p, true, &mut rng).unwrap().has_vc);
}

#[test]
fn hadamard_examples() {
    let mut c = Circuit::new(2);
    let x1 = c.input(0);
    let x2 = c.input(1);
    c.product(vec![x1, x2]);
    let mut d = DiagonalCircuit::new(2, 2, Q);
    d.push(Q.one(), sum_of_vars(2)).unwrap();
    assert_eq!(scaled_hadamard_eval(&c, &d, &ints(&[1, 1])).unwrap(), Q.int(2));

    assert!((cover_probability(3) - 12.0 / 25.0).abs() < 1e-12);
    assert_eq!(cover_probability(1), 1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let spec = PowerIdealSpec::new(vec![2, 2], 2).unwrap();
    assert!(membership_powers(&c, &spec, PowersConfig::default(), &mut rng).unwrap().not_in_ideal);
    let mut sq = Circuit::new(2);
    let y = sq.input(0);
    sq.product(vec![y, y]);
    assert!(!membership_powers(&sq, &spec, PowersConfig::default(), &mut rng).unwrap().not_in_ideal);
}

#[test]
fn certifier_examples() {
    let p = UnivariatePoly::from_i64(Q, &[-1, 0, 1]);
    let roots = approximate_roots(&p, 30).unwrap();
    let eps = BigRational::new(1.into(), (1u64 << 30).into());
    for z in &roots {
        let near = [Gaussian::from_i64(1, 0), Gaussian::from_i64(-1, 0)]
            .iter()
            .any(|r| z.sub(r).norm_sq() <= &eps * &eps);
        assert!(near, "{z}");
    }

    // f = x − 1 against ⟨x² − 4⟩.
    let ideal = UnivariateIdeal::new(Q, vec![(0, UnivariatePoly::from_i64(Q, &[-4, 0, 1]))]).unwrap();
    let mut f = Circuit::new(1);
    f.linear(LinearForm::from_i64(Q, &[1], -1));
    let budget = compute_threshold(&f, &ideal, 1000).unwrap();
    assert!(budget.m <= BigRational::new(1.into(), 3.into()));
    let v = verify_certificate(&f, &ideal, &[Gaussian::from_i64(2, 0)], &budget).unwrap();
    assert!(v.accepted);
    let far = verify_certificate(&f, &ideal, &[Gaussian::from_i64(9, 0)], &budget).unwrap();
    assert!(!far.residual_ok);

    // x1·x2 against ⟨x1² − 1, x2² − 1⟩ is a nonmember; (x1² − 1)·x2 is a member.
    let sq1 = UnivariatePoly::from_i64(Q, &[-1, 0, 1]);
    let ideal = UnivariateIdeal::new(Q, vec![(0, sq1.clone()), (1, sq1)]).unwrap();
    let mut g = Circuit::new(2);
    let a = g.input(0);
    let b = g.input(1);
    g.product(vec![a, b]);
    let out = search_nonmembership(&g, &ideal, 1000).unwrap();
    assert_eq!(out.decision, Decision::NonMember);
    let mut h = Circuit::new(2);
    let a = h.input(0);
    let b = h.input(1);
    let m1 = h.constant(Q.int(-1));
    let a2 = h.product(vec![a, a]);
    let s = h.sum(vec![a2, m1]);
    h.product(vec![s, b]);
    assert_eq!(search_nonmembership(&h, &ideal, 1000).unwrap().decision, Decision::Member);
}

#[test]
fn reduction_examples() {
    let (c, _) = reduce_independent_set(&Graph::complete(3), 2).unwrap();
    assert!(vanishes_on_grid(&c, 3).unwrap());
    let (c, _) = reduce_independent_set(&Graph::path(3), 2).unwrap();
    assert!(!vanishes_on_grid(&c, 3).unwrap());
    assert!(!c.eval(&ints(&[1, 3])).unwrap().is_zero());

    let inst = KLinEqInstance::new(vec![vec![1, 1]], vec![1]).unwrap();
    let (c, ideal) = reduce_klineq(&inst).unwrap();
    assert!(!is_member_brute(&c, &ideal, 1000).unwrap());
    assert_eq!(inst.solutions(), vec![0b01, 0b10]);

    let single = OneInThreeInstance::new(3, vec![[0, 1, 2]]).unwrap();
    assert_eq!(single.solutions(), vec![0b001, 0b010, 0b100]);
    assert_eq!(reduce_one_in_three(&single).unwrap().solutions(), single.solutions());
    assert!(OneInThreeInstance::new(3, vec![[0, 0, 1]]).is_err());

    let (c, _) = graph_coloring_instance(&Graph::complete(3), 3).unwrap();
    assert!(!vanishes_on_roots_of_unity(&c, 3).unwrap());
    let (c, _) = graph_coloring_instance(&Graph::complete(3), 2).unwrap();
    assert!(vanishes_on_roots_of_unity(&c, 2).unwrap());
    let (c, _) = graph_coloring_instance(&Graph::empty(4), 1).unwrap();
    assert!(!vanishes_on_roots_of_unity(&c, 1).unwrap());
}
