//! Independent oracles shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use causal_query::boolean::{BooleanFunction, DecisionTree};
use causal_query::lugano::lugano;
use causal_query::process::{FiniteSpace, Slot, TableProcess};
use causal_query::sdp::{m_name, ConstraintGroup, SdpInstance, Solution};
use nalgebra::DMatrix;

pub fn bit(x: usize, n: usize, i: usize) -> bool {
    (x >> (n - i)) & 1 == 1
}

fn sign(x: usize, y: usize, n: usize, i: usize) -> f64 {
    if i == 0 || bit(x, n, i) == bit(y, n, i) {
        1.0
    } else {
        -1.0
    }
}

/// Query steps of a complete tree on input `x`: the index asked and the
/// answers received so far.
type Path = (Vec<(usize, Vec<bool>)>, Vec<bool>, bool);

fn path(t: &DecisionTree, x: usize, n: usize) -> Path {
    let mut steps = Vec::new();
    let mut answers = Vec::new();
    let mut node = t;
    loop {
        match node {
            DecisionTree::Leaf(b) => return (steps, answers, *b),
            DecisionTree::Query { index, on0, on1 } => {
                steps.push((*index, answers.clone()));
                let a = bit(x, n, *index);
                answers.push(a);
                node = if a { on1 } else { on0 };
            }
        }
    }
}

/// An ε = 0 solution from the Gram matrices of a classical algorithm run
/// coherently: before step `j` the state is `(|0⟩ + |i_j⟩)/√2 ⊗ |h_j⟩`
/// with `h_j` the answers so far, and the output projectors split the final
/// states by the value at the leaf. `tree` must be complete of depth `T`.
pub fn gram_solution_from_tree(f: &BooleanFunction, tree: &DecisionTree, queries: usize) -> Solution {
    assert!(tree.is_complete(queries));
    let n = f.arity();
    let d = 1usize << n;
    let paths: Vec<_> = (0..d).map(|x| path(tree, x, n)).collect();
    let mut sol = Solution::default();
    for j in 0..queries {
        for i in 0..=n {
            let m = DMatrix::from_fn(d, d, |x, y| {
                let (ix, hx) = &paths[x].0[j];
                let (iy, hy) = &paths[y].0[j];
                if hx == hy && ix == iy && (i == 0 || i == *ix) {
                    0.5
                } else {
                    0.0
                }
            });
            sol.set(&m_name(i, j), &m);
        }
    }
    for z in [false, true] {
        let g = DMatrix::from_fn(d, d, |x, y| {
            let same = paths[x].1 == paths[y].1;
            if same && paths[x].2 == z && paths[y].2 == z {
                1.0
            } else {
                0.0
            }
        });
        sol.set(if z { "Gamma_1" } else { "Gamma_0" }, &g);
    }
    sol
}

/// Gram solution of a general real query algorithm on a register of
/// `n + 1` query values times `work` workspace values. `init` is the state
/// before the first query, `between[j]` the orthogonal map applied after
/// query `j`, and `accept` projects onto outcome 1 after the last query.
pub fn gram_solution_from_circuit(
    n: usize,
    work: usize,
    init: &[f64],
    between: &[DMatrix<f64>],
    accept: &DMatrix<f64>,
) -> Solution {
    let d = 1usize << n;
    let dim = (n + 1) * work;
    let query = |x: usize, v: &[f64]| -> Vec<f64> { (0..dim).map(|k| v[k] * sign(x, 0, n, k / work)).collect() };
    let mut states: Vec<Vec<f64>> = vec![init.to_vec(); d];
    let mut sol = Solution::default();
    let queries = between.len() + 1;
    for j in 0..queries {
        for i in 0..=n {
            let m =
                DMatrix::from_fn(d, d, |x, y| (i * work..(i + 1) * work).map(|k| states[x][k] * states[y][k]).sum());
            sol.set(&m_name(i, j), &m);
        }
        for (x, s) in states.iter_mut().enumerate() {
            *s = query(x, s);
        }
        if j < between.len() {
            for s in states.iter_mut() {
                let v = &between[j] * nalgebra::DVector::from_vec(s.clone());
                *s = v.iter().copied().collect();
            }
        }
    }
    let reject = DMatrix::<f64>::identity(dim, dim) - accept;
    for (name, p) in [("Gamma_0", &reject), ("Gamma_1", accept)] {
        let g = DMatrix::from_fn(d, d, |x, y| {
            let px = p * nalgebra::DVector::from_vec(states[y].clone());
            states[x].iter().zip(px.iter()).map(|(a, b)| a * b).sum()
        });
        sol.set(name, &g);
    }
    sol
}

fn block(sol: &Solution, name: &str) -> DMatrix<f64> {
    let rows = &sol.blocks[name];
    DMatrix::from_fn(rows.len(), rows.len(), |r, c| rows[r][c])
}

/// Every constraint's `lhs − rhs`, recomputed from dense matrices with
/// Hadamard products, in the instance's constraint order.
pub fn dense_residuals(inst: &SdpInstance, f: &BooleanFunction, sol: &Solution) -> Vec<f64> {
    let n = inst.n;
    let d = 1usize << n;
    let t = inst.queries;
    let e = |i: usize| DMatrix::from_fn(d, d, |x, y| sign(x, y, n, i));
    let sum_m = |j: usize| (0..=n).fold(DMatrix::zeros(d, d), |acc, i| acc + block(sol, &m_name(i, j)));
    let sum_em =
        |j: usize| (0..=n).fold(DMatrix::zeros(d, d), |acc, i| acc + e(i).component_mul(&block(sol, &m_name(i, j))));
    let mut per_group: Vec<DMatrix<f64>> = vec![sum_m(0) - e(0)];
    for j in 1..t {
        per_group.push(sum_m(j) - sum_em(j - 1));
    }
    per_group.push(block(sol, "Gamma_0") + block(sol, "Gamma_1") - sum_em(t - 1));
    let gammas = [block(sol, "Gamma_0"), block(sol, "Gamma_1")];
    let table = f.table().unwrap();
    let mut out = Vec::new();
    for c in &inst.constraints {
        let r = match c.group {
            ConstraintGroup::Initial => per_group[0][(c.row, c.col)],
            ConstraintGroup::Step(j) => per_group[j][(c.row, c.col)],
            ConstraintGroup::Final => per_group[t][(c.row, c.col)],
            ConstraintGroup::Output => {
                let fx = table.get(c.row as u64) as usize;
                gammas[fx][(c.row, c.row)] - (1.0 - sol.epsilon)
            }
            ConstraintGroup::Imported => panic!("groups are known for built instances"),
        };
        out.push(r);
    }
    out
}

/// `lhs − rhs` of every constraint as the instance states it.
pub fn instance_residuals(inst: &SdpInstance, sol: &Solution) -> Vec<f64> {
    let eps = inst.epsilon_block();
    inst.constraints
        .iter()
        .map(|c| {
            let lhs: f64 = c
                .terms
                .iter()
                .map(|t| {
                    let v =
                        if t.block == eps { sol.epsilon } else { sol.blocks[&inst.blocks[t.block].name][t.row][t.col] };
                    t.coeff * v
                })
                .sum();
            lhs - c.rhs
        })
        .collect()
}

/// Symmetric random blocks for every PSD variable and a random `ε`.
pub fn random_solution(inst: &SdpInstance, seed: u64) -> Solution {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sol = Solution { epsilon: rng.gen_range(-1.0..1.0), ..Solution::default() };
    for b in inst.blocks.iter().take(inst.epsilon_block()) {
        let a = DMatrix::from_fn(b.size, b.size, |_, _| rng.gen_range(-1.0..1.0));
        sol.set(&b.name, &(&a + a.transpose()));
    }
    sol
}

/// The dense set of constraint positions the pattern must cover: every
/// upper-triangle entry of each matrix equation plus one output entry per input.
pub fn expected_groups(n: usize, t: usize) -> Vec<(ConstraintGroup, usize, usize)> {
    let d = 1usize << n;
    let mut out = Vec::new();
    let mut groups = vec![ConstraintGroup::Initial];
    groups.extend((1..t).map(ConstraintGroup::Step));
    groups.push(ConstraintGroup::Final);
    for g in groups {
        for r in 0..d {
            for c in r..d {
                out.push((g, r, c));
            }
        }
    }
    out.extend((0..d).map(|x| (ConstraintGroup::Output, x, x)));
    out
}

/// Truth table as a plain vector, index `x` with `x_1` most significant.
pub fn values(f: &BooleanFunction) -> Vec<bool> {
    f.table().unwrap().iter().collect()
}

/// Degree from the Walsh spectrum: the largest `|S|` with `f̂(S) ≠ 0`.
pub fn fourier_degree(v: &[bool]) -> usize {
    (0..v.len())
        .filter(|&s| {
            let sum: i64 = (0..v.len()).map(|x| if v[x] ^ ((x & s).count_ones() % 2 == 1) { -1 } else { 1 }).sum();
            sum != 0
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// `C(f)` by trying every variable mask at every input.
pub fn brute_certificate_complexity(v: &[bool]) -> usize {
    let d = v.len();
    let n = d.trailing_zeros();
    (0..d)
        .map(|x| {
            (0..d)
                .filter(|&mask| (0..d).all(|y| (x ^ y) & mask != 0 || v[y] == v[x]))
                .map(|mask| mask.count_ones())
                .min()
                .unwrap_or(n) as usize
        })
        .max()
        .unwrap()
}

/// `D(f)` by plain minimax over subcubes, no memoisation.
pub fn minimax_depth(v: &[bool]) -> usize {
    let d = v.len();
    let n = d.trailing_zeros() as usize;
    fn go(v: &[bool], n: usize, fixed_mask: usize, fixed_val: usize) -> usize {
        let mut first = None;
        let mut constant = true;
        for (x, &vx) in v.iter().enumerate() {
            if x & fixed_mask == fixed_val {
                match first {
                    None => first = Some(vx),
                    Some(b) if b != vx => {
                        constant = false;
                        break;
                    }
                    _ => {}
                }
            }
        }
        if constant {
            return 0;
        }
        (0..n)
            .map(|i| 1usize << i)
            .filter(|bit| fixed_mask & bit == 0)
            .map(|bit| 1 + go(v, n, fixed_mask | bit, fixed_val).max(go(v, n, fixed_mask | bit, fixed_val | bit)))
            .min()
            .unwrap()
    }
    go(v, n, 0, 0)
}

/// Random decision tree of depth at most `depth` over `n` variables; each
/// node stops early with probability 1/4.
pub fn random_tree(rng: &mut impl rand::Rng, n: usize, depth: usize) -> DecisionTree {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return DecisionTree::Leaf(rng.gen());
    }
    let index = rng.gen_range(1..=n);
    DecisionTree::query(index, random_tree(rng, n, depth - 1), random_tree(rng, n, depth - 1))
}

/// Definiteness by the recursive definition, reducing by every local
/// operation rather than constants only.
pub fn definite_all_operations(w: &TableProcess) -> bool {
    use causal_query::process::{LocalOperation, Process};
    if w.num_slots() <= 1 {
        return true;
    }
    if w.past().size() > 1 {
        return (0..w.past().size()).all(|a| definite_all_operations(&w.reduce_by_past(a).unwrap()));
    }
    (1..=w.num_slots()).any(|k| {
        let slot = w.slots()[k - 1];
        w.constant_input(k).is_some() && {
            let count = (slot.output.size() as u128).pow(slot.input.size() as u32);
            (0..count).all(|m| {
                let op = LocalOperation::nth(slot.input.size(), slot.output.size(), m);
                definite_all_operations(&w.reduce_by_operation(k, &op).unwrap())
            })
        }
    })
}

/// Three binary slots, trivial past, binary future, arbitrary table.
pub fn random_three_slot(rng: &mut impl rand::Rng) -> TableProcess {
    TableProcess::from_fn(FiniteSpace::trivial(), FiniteSpace::binary(), vec![Slot::binary(); 3], |_, _| {
        ((0..3).map(|_| rng.gen_range(0..2)).collect(), rng.gen_range(0..2))
    })
    .unwrap()
}

/// Slot `π(j)` reads a random function of the outputs of `π(1..j)`; the
/// future is a random function of all outputs.
pub fn random_causal_rows(rng: &mut impl rand::Rng) -> Vec<(Vec<usize>, usize)> {
    let mut order = [0usize, 1, 2];
    for i in (1..3).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let tables: Vec<Vec<usize>> = (0..3).map(|j| (0..1 << j).map(|_| rng.gen_range(0..2)).collect()).collect();
    let future: Vec<usize> = (0..8).map(|_| rng.gen_range(0..2)).collect();
    (0..8)
        .map(|row| {
            let o = [(row >> 2) & 1, (row >> 1) & 1, row & 1];
            let mut ins = vec![0; 3];
            for (j, &slot) in order.iter().enumerate() {
                let seen = order[..j].iter().fold(0, |acc, &s| acc * 2 + o[s]);
                ins[slot] = tables[j][seen];
            }
            (ins, future[row])
        })
        .collect()
}

/// Lugano with permuted slots, relabelled inputs and outputs, and a random future.
pub fn random_lugano_variant(rng: &mut impl rand::Rng) -> Vec<(Vec<usize>, usize)> {
    let base = lugano();
    let mut perm = [0usize, 1, 2];
    for i in (1..3).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let s: Vec<usize> = (0..3).map(|_| rng.gen_range(0..2)).collect();
    let r: Vec<usize> = (0..3).map(|_| rng.gen_range(0..2)).collect();
    let future: Vec<usize> = (0..8).map(|_| rng.gen_range(0..2)).collect();
    (0..8)
        .map(|row| {
            let o = [(row >> 2) & 1, (row >> 1) & 1, row & 1];
            let mut shifted = [0; 3];
            for k in 0..3 {
                shifted[perm[k]] = o[k] ^ s[k];
            }
            let (ins, _) = base.lookup(0, &shifted);
            let out: Vec<usize> = (0..3).map(|k| ins[perm[k]] ^ r[k]).collect();
            (out, future[row])
        })
        .collect()
}

pub fn random_valid_candidate(rng: &mut impl rand::Rng) -> TableProcess {
    let past = rng.gen_range(1..=2);
    let rows: Vec<_> = (0..past)
        .flat_map(|_| if rng.gen_ratio(1, 3) { random_lugano_variant(rng) } else { random_causal_rows(rng) })
        .collect();
    TableProcess::new(FiniteSpace::new(past).unwrap(), FiniteSpace::binary(), vec![Slot::binary(); 3], rows).unwrap()
}
