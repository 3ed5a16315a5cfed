mod common;

use causal_query::boolean::{deterministic_query_complexity, BooleanFunction, TruthTable};
use causal_query::lugano::{f6c, f6q};
use causal_query::sdp::{
    build_sdp, export_sdpa, parse_sdpa, render_sdpa, verify_solution, OracleMatrices, SdpInstance, Solution,
    DEFAULT_TOL,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn optimal_solution(f: &BooleanFunction) -> (usize, SdpInstance, Solution) {
    let (d, tree) = deterministic_query_complexity(f).unwrap();
    let t = d.max(1);
    let inst = build_sdp(f, t).unwrap();
    let sol = common::gram_solution_from_tree(f, &tree.pad_to_depth(t).unwrap(), t);
    (t, inst, sol)
}

#[test]
fn classical_algorithm_for_f6c_is_feasible_with_zero_error() {
    let (t, inst, sol) = optimal_solution(&f6c());
    assert_eq!(t, 4);
    let r = verify_solution(&inst, &sol, DEFAULT_TOL).unwrap();
    assert!(r.feasible, "{r:?}");
    assert!(r.max_residual <= 1e-12);
    assert!(r.min_eigenvalue >= -1e-9);
    assert_eq!(r.epsilon, 0.0);
}

#[test]
fn deutsch_algorithm_solves_two_bit_parity_in_one_query() {
    let f = BooleanFunction::xor(2).unwrap();
    let inst = build_sdp(&f, 1).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let init = [0.0, h, h];
    let plus = nalgebra::DVector::from_vec(init.to_vec());
    let accept = DMatrix::identity(3, 3) - &plus * plus.transpose();
    let sol = common::gram_solution_from_circuit(2, 1, &init, &[], &accept);
    let r = verify_solution(&inst, &sol, DEFAULT_TOL).unwrap();
    assert!(r.feasible, "{r:?}");
    assert!(r.max_residual <= 1e-12);
}

#[test]
fn two_query_circuit_with_workspace() {
    // Parity of four bits: x1⊕x2 is computed into the phase of a workspace
    // qubit, then x3⊕x4 on the same branch.
    let f = BooleanFunction::xor(4).unwrap();
    let inst = build_sdp(&f, 2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let work = 1;
    let mut init = vec![0.0; 5];
    init[1] = h;
    init[2] = h;
    // After query 1 the state is ±(|1⟩ ± |2⟩)/√2; map |1⟩+|2⟩ ↦ |3⟩+|4⟩
    // and |1⟩−|2⟩ ↦ |3⟩−|4⟩ up to the order of basis vectors 1..4.
    let mut u = DMatrix::<f64>::zeros(5, 5);
    u[(0, 0)] = 1.0;
    u[(3, 1)] = 1.0;
    u[(4, 2)] = 1.0;
    u[(1, 3)] = 1.0;
    u[(2, 4)] = 1.0;
    let plus = {
        let mut v = nalgebra::DVector::zeros(5);
        v[3] = h;
        v[4] = h;
        v
    };
    let accept = DMatrix::identity(5, 5) - &plus * plus.transpose();
    let sol = common::gram_solution_from_circuit(4, work, &init, &[u], &accept);
    let r = verify_solution(&inst, &sol, DEFAULT_TOL).unwrap();
    assert!(r.feasible, "{r:?}");
}

#[test]
fn perturbed_solutions_are_rejected() {
    let (_, inst, sol) = optimal_solution(&BooleanFunction::and(3).unwrap());
    let mut bad = sol.clone();
    bad.blocks.get_mut("M_1_0").unwrap()[0][1] += 1e-3;
    bad.blocks.get_mut("M_1_0").unwrap()[1][0] += 1e-3;
    let r = verify_solution(&inst, &bad, DEFAULT_TOL).unwrap();
    assert!(!r.feasible);
    assert!((r.max_residual - 1e-3).abs() < 1e-12);

    let mut asym = sol.clone();
    asym.blocks.get_mut("Gamma_0").unwrap()[0][1] += 1e-3;
    let r = verify_solution(&inst, &asym, DEFAULT_TOL).unwrap();
    assert!(!r.feasible);
    assert!(r.max_asymmetry > 0.0);

    // Moving mass between Γ blocks keeps every equality but breaks PSD.
    let mut neg = sol;
    neg.epsilon = 0.5;
    let r = verify_solution(&inst, &neg, DEFAULT_TOL).unwrap();
    assert!(!r.feasible);
}

#[test]
fn zero_assignment_residual_is_one() {
    let inst = build_sdp(&f6q(), 3).unwrap();
    let r = verify_solution(&inst, &Solution::zeros(&inst), DEFAULT_TOL).unwrap();
    assert_eq!(r.max_residual, 1.0);
    assert!(!r.feasible);
}

#[test]
fn f6q_instance_shape() {
    let inst = build_sdp(&f6q(), 3).unwrap();
    assert_eq!(inst.query_blocks(), 21);
    assert_eq!(inst.matrix_variables(), 23);
    assert!(inst.blocks[..23].iter().all(|b| b.size == 64));
    assert_eq!(inst.constraints.len(), 4 * 64 * 65 / 2 + 64);
    let o = OracleMatrices::new(&f6q()).unwrap();
    assert_eq!(o.e(1, 0b100000, 0), -1.0);
    assert_eq!(o.f_diag(false)[0], 1.0);
    let sum: Vec<f64> = o.f_diag(false).iter().zip(o.f_diag(true)).map(|(a, b)| a + b).collect();
    assert!(sum.iter().all(|&s| s == 1.0));
    let p = export_sdpa(&inst);
    assert!(p.block_sizes[..23].iter().all(|&s| s == 64));
    assert_eq!(*p.block_sizes.last().unwrap(), -1);
}

#[test]
fn round_trip_is_bit_exact_on_f6q() {
    let inst = build_sdp(&f6q(), 3).unwrap();
    let text = render_sdpa(&export_sdpa(&inst));
    let back = SdpInstance::from_sdpa(&parse_sdpa(&text).unwrap()).unwrap();
    assert_eq!(back.n, 6);
    assert_eq!(back.queries, 3);
    assert_eq!(back.blocks, inst.blocks);
    assert_eq!(back.objective, inst.objective);
    assert_eq!(back.constraints.len(), inst.constraints.len());
    for (a, b) in inst.constraints.iter().zip(&back.constraints) {
        let mut ta = a.terms.clone();
        ta.sort_by_key(|t| (t.block, t.row, t.col));
        let bits = |ts: &[causal_query::sdp::Term]| {
            ts.iter().map(|t| (t.block, t.row, t.col, t.coeff.to_bits())).collect::<Vec<_>>()
        };
        assert_eq!(bits(&ta), bits(&b.terms));
        assert_eq!(a.rhs.to_bits(), b.rhs.to_bits());
    }
    assert_eq!(render_sdpa(&export_sdpa(&back)), text);
}

#[test]
fn malformed_layouts_are_rejected() {
    let inst = build_sdp(&BooleanFunction::xor(2).unwrap(), 1).unwrap();
    let mut p = export_sdpa(&inst);
    p.block_sizes.pop();
    p.block_names.pop();
    assert!(SdpInstance::from_sdpa(&p).is_err());
    let mut p = export_sdpa(&inst);
    p.block_sizes[0] = 3;
    assert!(SdpInstance::from_sdpa(&p).is_err());
}

fn small_function() -> impl Strategy<Value = BooleanFunction> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |bits| BooleanFunction::from_table(TruthTable::from_bits(n, &bits).unwrap()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constraint_pattern_matches_dense_algebra(f in small_function(), t in 1usize..=3, seed in any::<u64>()) {
        let inst = build_sdp(&f, t).unwrap();
        let positions: Vec<_> = inst.constraints.iter().map(|c| (c.group, c.row, c.col)).collect();
        prop_assert_eq!(positions, common::expected_groups(f.arity(), t));
        let sol = common::random_solution(&inst, seed);
        let dense = common::dense_residuals(&inst, &f, &sol);
        let sparse = common::instance_residuals(&inst, &sol);
        for (a, b) in dense.iter().zip(&sparse) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn optimal_classical_algorithms_are_feasible(f in small_function()) {
        let (_, inst, sol) = optimal_solution(&f);
        let r = verify_solution(&inst, &sol, DEFAULT_TOL).unwrap();
        prop_assert!(r.feasible);
        prop_assert!(r.max_residual <= 1e-12);
    }

    #[test]
    fn verifier_rejects_any_single_violation(f in small_function(), pick in any::<prop::sample::Index>(), delta in 1e-5f64..1.0) {
        let (_, inst, sol) = optimal_solution(&f);
        let c = &inst.constraints[pick.index(inst.constraints.len())];
        let t = c.terms[0];
        let mut bad = sol.clone();
        if t.block == inst.epsilon_block() {
            bad.epsilon += delta;
        } else {
            let name = &inst.blocks[t.block].name;
            bad.blocks.get_mut(name).unwrap()[t.row][t.col] += delta;
            if t.row != t.col {
                bad.blocks.get_mut(name).unwrap()[t.col][t.row] += delta;
            }
        }
        let r = verify_solution(&inst, &bad, 1e-6).unwrap();
        prop_assert!(!r.feasible);
    }

    #[test]
    fn sdpa_round_trip_small(f in small_function(), t in 1usize..=3) {
        let inst = build_sdp(&f, t).unwrap();
        let p = export_sdpa(&inst);
        let back = parse_sdpa(&render_sdpa(&p)).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(SdpInstance::from_sdpa(&back).unwrap().constraints.len(), inst.constraints.len());
    }
}
