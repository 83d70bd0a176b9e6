use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use polyforge::algebra::{expand, pit_equal, Coeffs, SparsePoly};
use polyforge::circuit::{
    canonical_count, enumerate_circuits, evaluate, evaluate_in, formal_degree, parse_circuit, weight_report, Circuit,
    CircuitBuilder, EnumerationSpec,
};
use polyforge::families::{
    determinant_circuit, hc_eval, permanent_chain, permanent_circuit, permanent_eval, permanent_naive,
    projection_apply, valiant_build, vnp_sum, SquareMatrix, Target, TruthTable,
};
use polyforge::forge::{poscoef, realizable_vectors, Oracle, Sign};
use polyforge::protocols::{ama_simulate, direct_bit, permanent_verify, AmaConfig, ProverStrategy};
use polyforge::ring::{BaseRing, Integers, RingSpec, Value, Zp};
use polyforge::systems::{build_hardness_system, density_probe, solve_bruteforce, PolySystem};
use polyforge::universal::{build_universal, coefficient_degree_bound, embed, truncated_coefficient_map};
use polyforge::Budgets;

/// Node recipe: `(kind, a, b, constant)`; operands index earlier nodes modulo
/// the current length.
type Recipe = Vec<(u8, usize, usize, i64)>;

fn build(nvars: usize, nparams: usize, recipe: &Recipe) -> Circuit {
    let mut b = CircuitBuilder::new(nvars, nparams);
    let mut ids = vec![b.input(1)];
    for &(kind, x, y, k) in recipe {
        let (x, y) = (ids[x % ids.len()], ids[y % ids.len()]);
        let id = match kind % 6 {
            0 => b.input(1 + x % nvars),
            1 if nparams > 0 => b.param(1 + y % nparams),
            1 | 2 => b.constant(k),
            3 | 4 => b.add(x, y),
            _ => b.mul(x, y),
        };
        ids.push(id);
    }
    let out = *ids.last().expect("nonempty");
    b.finish(out).prune()
}

fn circuit_strategy(max_vars: usize, max_params: usize, max_len: usize, max_const: i64) -> impl Strategy<Value = Circuit> {
    (1..=max_vars, 0..=max_params, prop::collection::vec((0u8..6, 0usize..64, 0usize..64, -max_const..=max_const), 0..max_len))
        .prop_map(|(n, k, r)| build(n, k, &r))
}

fn poly_strategy(nvars: usize, max_terms: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..4, nvars), -6i64..=6), 0..=max_terms).prop_map(move |terms| {
        SparsePoly::from_terms(nvars, Coeffs::Integers, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).expect("sizes match")
    })
}

fn eval_int(c: &Circuit, vars: &[i64], params: &[i64]) -> BigInt {
    let v: Vec<BigInt> = vars.iter().map(|&x| x.into()).collect();
    let p: Vec<BigInt> = params.iter().map(|&x| x.into()).collect();
    evaluate_in(&Integers, c, &v, &p).expect("evaluates")
}

/// Circuit computing a sparse polynomial term by term.
fn circuit_of(p: &SparsePoly) -> Circuit {
    let n = p.nvars();
    let mut b = CircuitBuilder::new(n, 0);
    let mut terms = Vec::new();
    for (m, k) in p.terms() {
        let mut factors = vec![b.constant(k.clone())];
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                factors.push(b.input(i + 1));
            }
        }
        terms.push(b.product(&factors));
    }
    let out = if terms.is_empty() { b.constant(0) } else { b.sum(&terms) };
    b.finish(out)
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 101, 65_537];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn circuit_text_round_trip(c in circuit_strategy(3, 2, 14, 9)) {
        let back = parse_circuit(&c.to_text()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn degree_soundness(c in circuit_strategy(3, 0, 10, 3)) {
        let p = expand(&c, Coeffs::Integers, None, 1 << 20).unwrap();
        prop_assert!(u64::from(p.total_degree().unwrap_or(0)) <= formal_degree(&c));
    }

    #[test]
    fn weight_bound_holds(c in circuit_strategy(3, 0, 12, 5)) {
        prop_assert!(weight_report(&c, 1 << 20).unwrap().bound_holds);
    }

    #[test]
    fn truncated_evaluation_is_truncated_expansion(c in circuit_strategy(2, 0, 8, 3), cap in 0u32..6) {
        let n = c.num_vars();
        let spec = RingSpec::Truncated { base: BaseRing::Integers, var_count: n, degree_cap: cap };
        let vars: Vec<Value> = (0..n).map(|i| Value::Poly(SparsePoly::var(n, Coeffs::Integers, i))).collect();
        let Value::Poly(got) = evaluate(&c, &spec, &vars, &[]).unwrap() else { unreachable!() };
        let full = expand(&c, Coeffs::Integers, None, 1 << 20).unwrap();
        prop_assert_eq!(got, full.truncate(cap));
    }

    #[test]
    fn ring_axioms(f in poly_strategy(3, 12), g in poly_strategy(3, 12), h in poly_strategy(3, 12)) {
        prop_assert_eq!(f.add(&g).unwrap().add(&h).unwrap(), f.add(&g.add(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g.add(&h).unwrap()).unwrap(), f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap());
    }

    #[test]
    fn truncated_multiplication(f in poly_strategy(2, 50), g in poly_strategy(2, 50), cap in 0u32..8) {
        let t = f.mul_truncated(&g, Some(cap), 1 << 20).unwrap();
        prop_assert_eq!(t, f.mul(&g).unwrap().truncate(cap));
    }

    #[test]
    fn pit_identical_circuits(c in circuit_strategy(3, 2, 12, 5), seed in any::<u64>()) {
        let d = polyforge::circuit::degree_bound(&c);
        let p = [101u64, 65_537].into_iter().find(|&p| p > d).unwrap();
        prop_assert!(pit_equal(&c, &c.clone(), p, 5, seed).unwrap().is_equal());
    }

    #[test]
    fn ryser_matches_permutation_sum(n in 1usize..=6, entries in prop::collection::vec(-9i64..=9, 36)) {
        let m = SquareMatrix::from_fn(n, |i, j| BigInt::from(entries[i * 6 + j]));
        prop_assert_eq!(permanent_eval(&Integers, &m).unwrap(), permanent_naive(&Integers, &m).unwrap());
    }

    #[test]
    fn valiant_sampled(n in 3usize..=4, bits in prop::collection::vec(-3i64..=3, 16)) {
        let f = TruthTable::from_fn(n, |b| {
            let idx = b.iter().fold(0, |acc, &x| 2 * acc + usize::from(x));
            BigInt::from(bits[idx])
        }).unwrap();
        let p = valiant_build(&f);
        for idx in 0..1usize << n {
            let point: Vec<BigInt> = (0..n).map(|k| BigInt::from((idx >> (n - 1 - k)) & 1)).collect();
            let bitv: Vec<u8> = (0..n).map(|k| ((idx >> (n - 1 - k)) & 1) as u8).collect();
            prop_assert_eq!(&p.eval(&point).unwrap(), f.value(&bitv));
        }
    }

    #[test]
    fn vnp_sum_of_valiant_circuits(n in 2usize..=4, bits in prop::collection::vec(0i64..=1, 16), fixed in 0usize..=2, x in prop::collection::vec(-5i64..=5, 2)) {
        let f = TruthTable::from_fn(n, |b| {
            let idx = b.iter().fold(0, |acc, &x| 2 * acc + usize::from(x));
            BigInt::from(bits[idx])
        }).unwrap();
        let p = valiant_build(&f);
        let c = circuit_of(&p);
        let fixed = fixed.min(n);
        let xs: Vec<BigInt> = x[..fixed].iter().map(|&v| BigInt::from(v)).collect();
        let got = vnp_sum(&c, &RingSpec::Integers, &xs.iter().cloned().map(Value::Int).collect::<Vec<_>>(), 1 << 20).unwrap();
        let m = n - fixed;
        let mut want = BigInt::zero();
        for idx in 0..1usize << m {
            let mut point = xs.clone();
            point.extend((0..m).map(|k| BigInt::from((idx >> k) & 1)));
            want += p.eval(&point).unwrap();
        }
        prop_assert_eq!(got, Value::Int(want));
    }

    #[test]
    fn projection_commutes_with_evaluation(
        c in circuit_strategy(3, 0, 10, 4),
        picks in prop::collection::vec((any::<bool>(), 1usize..=2, -4i64..=4), 3),
        v in prop::collection::vec(-5i64..=5, 2),
    ) {
        let subst: Vec<Target> = picks[..c.num_vars()].iter().map(|&(var, j, k)| if var { Target::Var(j) } else { Target::Const(k.into()) }).collect();
        let projected = projection_apply(&c, &subst, 2).unwrap();
        let image: Vec<i64> = subst.iter().map(|t| match t {
            Target::Var(j) => v[j - 1],
            Target::Const(k) => i64::try_from(k.clone()).unwrap(),
        }).collect();
        prop_assert_eq!(eval_int(&projected, &v, &[]), eval_int(&c, &image, &[]));
    }

    #[test]
    fn universal_coefficient_map(s in 1usize..=3, d in 0u32..=8, seed in prop::collection::vec(0u64..101, 12)) {
        let t = build_universal(s).unwrap();
        let params: Vec<u64> = seed[..t.param_count()].to_vec();
        let v = truncated_coefficient_map(&t, d, 101, &params).unwrap();
        let bound = t.circuit().bind_params(&params.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap();
        let full = expand(&bound, Coeffs::Mod(101), None, 1 << 20).unwrap();
        let want: Vec<u64> = full.univariate_coefficients(d).unwrap().iter().map(|k| u64::try_from(k.clone()).unwrap()).collect();
        prop_assert_eq!(v.entries, want);
    }

    #[test]
    fn embedding_agrees_at_random_points(c in circuit_strategy(1, 0, 6, 2), r in prop::collection::vec(0u64..101, 50)) {
        let e = embed(&c, 101).unwrap();
        let u = build_universal(e.s).unwrap().circuit().bind_params(&e.params).unwrap();
        let f = Zp::new(101).unwrap();
        for x in r {
            prop_assert_eq!(evaluate_in(&f, &u, &[x], &[]).unwrap(), evaluate_in(&f, &c, &[x], &[]).unwrap());
        }
    }

    #[test]
    fn poscoef_matches_expansion(c in circuit_strategy(1, 0, 8, 1).prop_map(|c| {
        // Constant-free: every constant leaf becomes -1.
        let text = c.to_text().lines().map(|l| match l.find("= const") {
            Some(k) => format!("{}= const -1", &l[..k]),
            None => l.to_string(),
        }).collect::<Vec<_>>().join("\n");
        parse_circuit(&text).unwrap()
    })) {
        let p = expand(&c, Coeffs::Integers, None, 1 << 20).unwrap();
        let deg = p.total_degree().unwrap_or(0);
        let coefs = p.univariate_coefficients(deg + 1).unwrap();
        for (i, k) in coefs.iter().enumerate() {
            let want = if k.is_positive() { Sign::Positive } else if k.is_negative() { Sign::Negative } else { Sign::Zero };
            prop_assert_eq!(poscoef(&c, i as u32, 1 << 20).unwrap(), want);
        }
    }

    #[test]
    fn transcript_determinism(seed in any::<u64>(), y in prop::collection::vec(0u64..6, 4), i in 0u32..5) {
        let mut x = y.clone();
        x.extend([1, 2, 3, 4]);
        let cfg = AmaConfig::default();
        let prover = ProverStrategy::honest();
        let bit = direct_bit(&x, i).unwrap().unwrap();
        let a = ama_simulate(&x, i, bit, 1, &prover, &cfg, seed).unwrap();
        let b = ama_simulate(&x, i, bit, 1, &prover, &cfg, seed).unwrap();
        prop_assert_eq!(a.to_text(), b.to_text());
        prop_assert!(a.accepted);
        prop_assert_eq!(a.answer, Some(bit));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn evaluation_homomorphism(c in circuit_strategy(3, 2, 12, 20), vals in prop::collection::vec(-50i64..=50, 5), pi in 0usize..PRIMES.len()) {
        let p = PRIMES[pi];
        let vars: Vec<Value> = vals[..c.num_vars()].iter().map(|&v| Value::from(v)).collect();
        let params: Vec<Value> = vals[3..3 + c.num_params()].iter().map(|&v| Value::from(v)).collect();
        let Value::Int(z) = evaluate(&c, &RingSpec::Integers, &vars, &params).unwrap() else { unreachable!() };
        let Value::Fp(e) = evaluate(&c, &RingSpec::PrimeField(p), &vars, &params).unwrap() else { unreachable!() };
        let reduced = ((z % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
        prop_assert_eq!(reduced, BigInt::from(e.value()));
    }

    #[test]
    fn weight_is_a_norm(f in poly_strategy(2, 8), g in poly_strategy(2, 8)) {
        let w = |p: &SparsePoly| p.weight().unwrap();
        prop_assert!(w(&f.add(&g).unwrap()) <= w(&f) + w(&g));
        prop_assert!(w(&f.mul(&g).unwrap()) <= w(&f) * w(&g));
    }
}

/// All assignments in lexicographic order, checked by direct substitution.
fn oracle_solve(sys: &PolySystem, p: u64) -> Option<Vec<u64>> {
    let u = sys.unknowns();
    let f = Zp::new(p).unwrap();
    (0..p.pow(u as u32)).find_map(|idx| {
        let v: Vec<u64> = (0..u).map(|k| (idx / p.pow((u - 1 - k) as u32)) % p).collect();
        sys.equations().iter().all(|e| evaluate_in(&f, e, &[], &v).unwrap() == 0).then_some(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_sound_and_complete(u in 1usize..=2, eqs in prop::collection::vec(circuit_strategy(1, 2, 8, 4), 1..=3), pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let eqs: Vec<Circuit> = eqs.iter().map(|c| {
            // Inputs become parameters so the equation has only unknowns.
            let subst = vec![Target::Const(BigInt::from(2)); c.num_vars()];
            let c = projection_apply(c, &subst, 0).unwrap();
            let k = c.num_params().max(u);
            c.with_num_params(k).unwrap()
        }).collect();
        let u = eqs.iter().map(Circuit::num_params).max().unwrap();
        let sys = PolySystem::new(u, eqs, "random").unwrap();
        let got = solve_bruteforce(&sys, p, 1 << 20).unwrap();
        if let Some(v) = &got {
            prop_assert!(sys.is_satisfied(p, v).unwrap());
        }
        prop_assert_eq!(got, oracle_solve(&sys, p));
    }
}

#[test]
fn hc_of_complete_digraph() {
    let mut fact = BigInt::one();
    for n in 2..=8usize {
        if n > 2 {
            fact *= BigInt::from(n - 1);
        }
        let m = SquareMatrix::from_fn(n, |_, _| BigInt::one());
        assert_eq!(hc_eval(&Integers, &m, 1 << 20).unwrap(), fact, "n = {n}");
    }
}

#[test]
fn universal_parameter_counts() {
    for s in 1..=12 {
        assert_eq!(build_universal(s).unwrap().param_count(), s * (s + 1));
    }
}

#[test]
fn coefficient_degree_in_parameters() {
    for s in 1..=2 {
        let t = build_universal(s).unwrap();
        let p = expand(t.circuit(), Coeffs::Integers, None, 1 << 20).unwrap();
        for (m, _) in p.terms() {
            let e = m.exponents();
            let param_degree: u32 = e[1..].iter().sum();
            assert!(u64::from(param_degree) <= coefficient_degree_bound(e[0], s));
        }
    }
}

#[test]
fn canonical_count_matches_stream() {
    for s in 0..=5 {
        for nv in 1..=2 {
            for pool in [vec![], vec![BigInt::from(-1)], vec![BigInt::from(0), BigInt::from(1)]] {
                let spec = EnumerationSpec::new(s, nv, pool);
                let listed: Vec<Circuit> = enumerate_circuits(&spec).unwrap().collect();
                assert_eq!(listed.len() as u128, canonical_count(&spec));
                let distinct: BTreeSet<String> = listed.iter().map(Circuit::to_text).collect();
                assert_eq!(distinct.len(), listed.len());
            }
        }
    }
}

#[test]
fn density_is_monotone_and_bounded() {
    let sys = PolySystem::parse(include_str!("../data/xsq_plus_1.sys")).unwrap();
    let mut last = 0;
    for a in (0..=300).step_by(7) {
        let r = density_probe(&sys, a, 1 << 20).unwrap();
        assert!(r.pi_s_a >= last && r.pi_s_a <= r.pi_a);
        last = r.pi_s_a;
    }
}

#[test]
fn realizable_gamma_systems_are_solvable() {
    let budgets = Budgets::default();
    for (s, d, p) in [(1, 2, 5), (1, 3, 7), (2, 2, 5)] {
        let set = realizable_vectors(s, d, p, Oracle::ParameterSweep, &budgets).unwrap();
        for g in &set.vectors {
            let sys = build_hardness_system(s, d, g).unwrap();
            let w = solve_bruteforce(&sys, p, budgets.evaluations).unwrap();
            assert!(w.is_some(), "gamma {g:?} at ({s},{d},{p})");
        }
    }
}

#[test]
fn sweep_contains_freeform_circuits() {
    let budgets = Budgets::default();
    for (s, d, p) in [(1, 3, 5), (2, 3, 5), (3, 4, 5)] {
        if s == 3 {
            // 5^12 assignments exceed the sweep budget; compare small sizes only.
            continue;
        }
        let sweep = realizable_vectors(s, d, p, Oracle::ParameterSweep, &budgets).unwrap();
        let free = realizable_vectors(s, d, p, Oracle::FreeformEnumeration, &budgets).unwrap();
        assert!(free.vectors.is_subset(&sweep.vectors), "({s},{d},{p})");
    }
}

#[test]
fn corrupted_chains_meet_schwartz_zippel() {
    let p = 101;
    let trials = 2;
    let plus = |c: &Circuit, extra: &[usize]| {
        let n = c.num_vars();
        let mut b = CircuitBuilder::new(n, 0);
        let inputs: Vec<usize> = (1..=n).map(|j| b.input(j)).collect();
        let body = b.inline(c, &inputs, &[]);
        let factors: Vec<usize> = extra.iter().map(|&j| inputs[j - 1]).collect();
        let term = b.product(&factors);
        let out = b.add(body, term);
        b.finish(out)
    };
    // (chain, degree of the planted difference at the corrupted level)
    let mut corpus = Vec::new();
    let mut c = permanent_chain(2);
    c[1] = determinant_circuit(2);
    corpus.push((c, 2));
    let mut c = permanent_chain(3);
    c[2] = determinant_circuit(3);
    corpus.push((c, 3));
    let mut c = permanent_chain(2);
    c[1] = plus(&permanent_circuit(2), &[1]);
    corpus.push((c, 1));
    let mut c = permanent_chain(3);
    c[2] = plus(&permanent_circuit(3), &[1, 5, 9]);
    corpus.push((c, 3));
    for (k, (chain, deg)) in corpus.iter().enumerate() {
        let runs = 300;
        let rejected = (0..runs).filter(|&s| !permanent_verify(chain, p, trials, s).unwrap().accepted).count();
        let bound = 1.0 - (*deg as f64 / p as f64).powi(trials as i32);
        assert!(rejected as f64 / runs as f64 >= bound - 0.02, "chain {k}: {rejected}/{runs} vs {bound}");
    }
}

#[test]
fn truncated_ring_spec_matches_direct_ring() {
    let c = parse_circuit(include_str!("../data/square_minus_one.circ")).unwrap();
    let spec = RingSpec::Truncated { base: BaseRing::PrimeField(7), var_count: 1, degree_cap: 1 };
    let x = Value::Poly(SparsePoly::var(1, Coeffs::Mod(7), 0));
    let Value::Poly(got) = evaluate(&c, &spec, &[x], &[]).unwrap() else { unreachable!() };
    assert_eq!(got, SparsePoly::constant(1, Coeffs::Mod(7), -1));
}

#[test]
fn honest_protocol_matches_direct_permanent_on_small_inputs() {
    let cfg = AmaConfig::default();
    let prover = ProverStrategy::honest();
    for x in [vec![4u64, 4], vec![1, 0, 3], vec![2, 3, 5, 7, 1, 1, 1, 1]] {
        for i in 0..4 {
            let bit = direct_bit(&x, i).unwrap().unwrap();
            let t = ama_simulate(&x, i, bit, 1, &prover, &cfg, u64::from(i)).unwrap();
            assert!(t.accepted && t.answer == Some(bit), "{x:?} bit {i}:\n{t}");
        }
    }
}
