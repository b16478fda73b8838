//! Small seeded oracle-equivalence suite behind `unideal selftest`.
//!
//! Every check compares a fast path against an independent slow one on
//! random instances; the sizes are kept small so the whole run takes a
//! few seconds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::applications::{has_vertex_cover, permanent_lowrank, ryser_permanent, vertex_cover_lowrank, Graph};
use crate::certifier::{search_nonmembership, verify_certificate, Decision};
use crate::circuit::{Circuit, DiagonalCircuit};
use crate::division::{divide, is_member_brute, UnivariateIdeal};
use crate::field::random_prime;
use crate::hadamard::{
    in_power_ideal_brute, membership_powers, scaled_hadamard_eval, scaled_hadamard_literal, PowerIdealSpec,
    PowersConfig,
};
use crate::linalg::{LinearForm, Matrix};
use crate::lowrank::{rem_eval, LowRankInput};
use crate::poly::{SparsePoly, UnivariatePoly};
use crate::reductions::{
    graph_coloring_instance, has_independent_set, is_k_colorable, reduce_independent_set, reduce_klineq,
    reduce_one_in_three, vanishes_on_grid, vanishes_on_roots_of_unity, KLinEqInstance, OneInThreeInstance,
};
use crate::{Field, Scalar};

const Q: Field = Field::Rational;
const CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = std::result::Result<String, String>;

/// Runs every check with randomness derived from `seed`.
pub fn run(seed: u64) -> Vec<Check> {
    let checks: [(&'static str, fn(&mut ChaCha8Rng) -> Outcome); 8] = [
        ("rem-eval", rem_eval_check),
        ("permanent", permanent_check),
        ("vertex-cover", vertex_cover_check),
        ("hadamard", hadamard_check),
        ("powers", powers_check),
        ("certifier", certifier_check),
        ("reductions", reductions_check),
        ("division", division_check),
    ];
    checks
        .iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let (passed, detail) = match f(&mut rng) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check { name, passed, detail }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small(rng: &mut ChaCha8Rng, field: Field, lo: i64, hi: i64) -> Scalar {
    field.int(rng.gen_range(lo..=hi))
}

fn form(rng: &mut ChaCha8Rng, n: usize, field: Field, affine: bool) -> LinearForm {
    let coeffs = (0..n).map(|_| small(rng, field, -3, 3)).collect();
    let c = if affine { small(rng, field, -3, 3) } else { field.zero() };
    LinearForm::new(coeffs, c)
}

fn circuit(rng: &mut ChaCha8Rng, n: usize, deg: u32, field: Field) -> Circuit {
    let mut c = Circuit::new(n);
    let inputs: Vec<usize> = (0..n).map(|i| c.input(i)).collect();
    let mut summands = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let d = rng.gen_range(0..=deg);
        let mut factors = vec![c.constant(small(rng, field, -4, 4))];
        for _ in 0..d {
            let id = if n > 0 && rng.gen_bool(0.5) {
                inputs[rng.gen_range(0..n)]
            } else {
                let f = form(rng, n, field, true);
                c.linear(f)
            };
            factors.push(id);
        }
        summands.push(c.product(factors));
    }
    c.sum(summands);
    c
}

fn sparse(rng: &mut ChaCha8Rng, n: usize, deg: u32, terms: usize, field: Field) -> SparsePoly {
    let mut p = SparsePoly::zero(n, field);
    for _ in 0..terms {
        let mut m = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=deg) {
            m[rng.gen_range(0..n)] += 1;
        }
        let c = small(rng, field, -5, 5);
        p.add_term(m, c);
    }
    p
}

fn univariate(rng: &mut ChaCha8Rng, d: usize, c: i64, field: Field) -> UnivariatePoly {
    let mut coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-c..=c)).collect();
    while coeffs[d] == 0 {
        coeffs[d] = rng.gen_range(-c..=c);
    }
    UnivariatePoly::from_i64(field, &coeffs)
}

fn ideal(rng: &mut ChaCha8Rng, n: usize, field: Field) -> UnivariateIdeal {
    let gens = (0..n)
        .map(|v| {
            let d = rng.gen_range(1..=3);
            (v, univariate(rng, d, 4, field))
        })
        .collect();
    UnivariateIdeal::new(field, gens).unwrap()
}

fn point(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Vec<Scalar> {
    (0..n).map(|_| small(rng, field, -6, 6)).collect()
}

fn rem_eval_check(rng: &mut ChaCha8Rng) -> Outcome {
    let fields = [Q, Field::Prime(random_prime(64, rng))];
    let mut count = 0;
    for &field in &fields {
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let r = rng.gen_range(1..=3);
            let d = rng.gen_range(1..=3);
            let outer = circuit(rng, r, d, field);
            let forms = (0..r)
                .map(|_| {
                    let affine = rng.gen_bool(0.5);
                    form(rng, n, field, affine)
                })
                .collect();
            let input = LowRankInput::new(outer, forms, None).map_err(|e| e.to_string())?;
            let id = ideal(rng, n, field);
            let alpha = point(rng, n, field);
            let fast = rem_eval(&input, &id, &alpha).map_err(|e| e.to_string())?;
            let expanded = input.to_circuit().and_then(|c| c.expand(field, CAP)).map_err(|e| e.to_string())?;
            let slow = divide(&expanded, &id).and_then(|r| r.eval(&alpha)).map_err(|e| e.to_string())?;
            ensure(fast == slow, || format!("{fast} vs {slow} over {field:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} instances match expand-divide-evaluate"))
}

fn permanent_check(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..30 {
        let n = rng.gen_range(1..=6);
        let r = rng.gen_range(1..=2);
        let u: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let v: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let a = Matrix::from_i64(Q, &u).and_then(|u| u.mul(&Matrix::from_i64(Q, &v)?)).map_err(|e| e.to_string())?;
        let fast = permanent_lowrank(&a, Some(r)).map_err(|e| e.to_string())?;
        let slow = ryser_permanent(&a).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("{fast} vs Ryser {slow}"))?;
    }
    Ok("30 low-rank matrices match Ryser".into())
}

fn vertex_cover_check(rng: &mut ChaCha8Rng) -> Outcome {
    let field = Field::Prime(random_prime(31, rng));
    let graphs = [Graph::cycle(4), Graph::complete_bipartite(2, 3), Graph::star(4), Graph::empty(3)];
    for g in &graphs {
        for k in 0..=g.n().min(3) {
            let rep = vertex_cover_lowrank(g, k, 10, field, true, rng).map_err(|e| e.to_string())?;
            ensure(rep.has_vc == has_vertex_cover(g, k), || format!("k = {k} on {g:?}"))?;
        }
    }
    Ok("named graphs agree with exhaustive search".into())
}

fn hadamard_check(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..30 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=3);
        let c = circuit(rng, n, k, Q);
        let mut d = DiagonalCircuit::new(n, k, Q);
        for _ in 0..rng.gen_range(1..=3) {
            let coef = small(rng, Q, -3, 3);
            let f = form(rng, n, Q, false);
            d.push(coef, f).map_err(|e| e.to_string())?;
        }
        let b = point(rng, n, Q);
        let fast = scaled_hadamard_eval(&c, &d, &b).map_err(|e| e.to_string())?;
        let f = c.expand(Q, CAP).map_err(|e| e.to_string())?;
        let g = d.expand(CAP).map_err(|e| e.to_string())?;
        let slow = scaled_hadamard_literal(&f, &g).and_then(|h| h.eval(&b)).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("{fast} vs literal {slow}"))?;
    }
    Ok("30 scaled products match the literal definition".into())
}

fn powers_check(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..40 {
        let n = rng.gen_range(1..=5);
        let k = rng.gen_range(1..=3);
        let exps: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let terms = rng.gen_range(1..=3);
        let c = Circuit::from_sparse(&sparse(rng, n, k, terms, Q));
        let f = c.expand(Q, CAP).map_err(|e| e.to_string())?;
        let truth = in_power_ideal_brute(&f, &exps);
        let spec = PowerIdealSpec::new(exps, k).map_err(|e| e.to_string())?;
        let rep = membership_powers(&c, &spec, PowersConfig::default(), rng).map_err(|e| e.to_string())?;
        ensure(rep.not_in_ideal != truth, || format!("disagreement on {f:?}"))?;
    }
    Ok("40 circuits match monomial brute force".into())
}

fn certifier_check(rng: &mut ChaCha8Rng) -> Outcome {
    let mut done = 0;
    while done < 15 {
        let n = rng.gen_range(1..=2);
        let gens: Vec<_> = (0..n)
            .map(|v| {
                let d = rng.gen_range(1..=3);
                (v, univariate(rng, d, 6, Q))
            })
            .collect();
        if !gens.iter().all(|(_, p)| p.is_squarefree().unwrap_or(false)) {
            continue;
        }
        let id = UnivariateIdeal::new(Q, gens).map_err(|e| e.to_string())?;
        let c = circuit(rng, n, 2, Q);
        let truth = is_member_brute(&c, &id, CAP).map_err(|e| e.to_string())?;
        let out = search_nonmembership(&c, &id, CAP).map_err(|e| e.to_string())?;
        match out.decision {
            Decision::Member => ensure(truth, || "member claimed for a nonmember".into())?,
            Decision::NonMember => {
                ensure(!truth, || "nonmember claimed for a member".into())?;
                let cert = out.certificate.as_ref().ok_or("missing certificate")?;
                let v = verify_certificate(&c, &id, cert, &out.budget).map_err(|e| e.to_string())?;
                ensure(v.accepted, || "certificate rejected on re-verification".into())?;
            }
            Decision::Undecided => return Err("undecided".into()),
        }
        done += 1;
    }
    Ok("15 squarefree instances agree with exact division".into())
}

fn reductions_check(rng: &mut ChaCha8Rng) -> Outcome {
    let graphs = [Graph::path(3), Graph::cycle(4), Graph::complete(3), Graph::star(3)];
    for g in &graphs {
        for k in 1..=g.n().min(3) {
            let (c, _) = reduce_independent_set(g, k).map_err(|e| e.to_string())?;
            let member = vanishes_on_grid(&c, g.n()).map_err(|e| e.to_string())?;
            ensure(member != has_independent_set(g, k), || format!("independent set k = {k} on {g:?}"))?;
        }
        for k in 1..=3 {
            let (c, _) = graph_coloring_instance(g, k).map_err(|e| e.to_string())?;
            let member = vanishes_on_roots_of_unity(&c, k).map_err(|e| e.to_string())?;
            ensure(member != is_k_colorable(g, k), || format!("coloring k = {k} on {g:?}"))?;
        }
    }
    for _ in 0..20 {
        let n = rng.gen_range(1..=6);
        let a: Vec<Vec<u64>> = (0..2).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
        let b: Vec<u64> = (0..2).map(|_| rng.gen_range(0..=n as u64 + 1)).collect();
        let inst = KLinEqInstance::new(a, b).map_err(|e| e.to_string())?;
        let (c, id) = reduce_klineq(&inst).map_err(|e| e.to_string())?;
        let member = is_member_brute(&c, &id, CAP).map_err(|e| e.to_string())?;
        ensure(member != inst.is_solvable(), || format!("k-Lin-Eq {inst:?}"))?;
    }
    for clauses in [vec![[0, 1, 2]], vec![[0, 1, 2], [1, 2, 3]], vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]] {
        let inst = OneInThreeInstance::new(4, clauses).map_err(|e| e.to_string())?;
        let lin = reduce_one_in_three(&inst).map_err(|e| e.to_string())?;
        ensure(lin.solutions() == inst.solutions(), || format!("1-in-3 {inst:?}"))?;
    }
    Ok("independent set, coloring, k-Lin-Eq and 1-in-3 agree with brute force".into())
}

fn division_check(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..100 {
        let field = if rng.gen_bool(0.5) { Q } else { Field::Prime(1_000_003) };
        let n = rng.gen_range(1..=3);
        let id = ideal(rng, n, field);
        let f = sparse(rng, n, 5, 5, field);
        let r = divide(&f, &id).map_err(|e| e.to_string())?;
        ensure(divide(&r, &id).map_err(|e| e.to_string())? == r, || "idempotence".into())?;
        for (v, p) in id.generators() {
            let d = p.degree().unwrap_or(0) as u32;
            ensure(r.is_zero() || r.degree_in(*v) < d, || format!("degree in x{v}"))?;
        }
        // Constants are already reduced, so shifting commutes with division.
        let shift = small(rng, field, 1, 5);
        let g = f.add(&SparsePoly::constant(n, shift.clone())).map_err(|e| e.to_string())?;
        let rg = divide(&g, &id).map_err(|e| e.to_string())?;
        let expect = r.add(&SparsePoly::constant(n, shift)).map_err(|e| e.to_string())?;
        ensure(rg == expect, || "linearity in the constant term".into())?;
    }
    Ok("100 random divisions are idempotent, reduced and linear".into())
}
