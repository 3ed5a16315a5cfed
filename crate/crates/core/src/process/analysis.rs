//! Validity, causal definiteness, the decision-tree correspondence and
//! `computes`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{FiniteSpace, LocalOperation, Process, SelfSignalling, Slot, TableProcess};
use crate::boolean::{bits_from_index, BooleanFunction, DecisionTree};
use crate::{Error, Result};

/// Default cap on `|P| · ∏_k |O_k|^{|I_k|}` for [`validate_process`].
pub const DEFAULT_VALIDATION_BUDGET: u128 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityWitness {
    pub past: usize,
    pub operations: Vec<LocalOperation>,
    pub fixed_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    /// Every `(a, μ⃗)` has exactly one fixed point.
    pub valid: bool,
    pub operation_tuples: u128,
    pub checks: u128,
    pub witness: Option<ValidityWitness>,
    /// Reported separately; implied by validity.
    pub self_signalling: Option<SelfSignalling>,
}

/// Enumerates every past value and every tuple of local operations and
/// counts fixed points. The first failing tuple in enumeration order is
/// reported, independent of scheduling.
pub fn validate_process(w: &TableProcess, budget: u128) -> Result<ValidityReport> {
    let per_slot: Vec<u128> = w
        .slots()
        .iter()
        .map(|s| checked_pow(s.output.size() as u128, s.input.size()))
        .collect::<Option<_>>()
        .ok_or(over_budget("operation tuples", budget))?;
    let tuples =
        per_slot.iter().try_fold(1u128, |acc, &m| acc.checked_mul(m)).ok_or(over_budget("operation tuples", budget))?;
    let checks = tuples.checked_mul(w.past().size() as u128).ok_or(over_budget("operation tuples", budget))?;
    if checks > budget {
        return Err(Error::BudgetExceeded { what: "operation tuples", needed: checks, budget });
    }
    let slots = w.slots().to_vec();
    let decode = |mut t: u64| -> Vec<LocalOperation> {
        slots
            .iter()
            .zip(&per_slot)
            .map(|(s, &m)| {
                let op = LocalOperation::nth(s.input.size(), s.output.size(), (t % m as u64) as u128);
                t /= m as u64;
                op
            })
            .collect()
    };
    let past = w.past().size();
    let failure = (0..tuples as u64).into_par_iter().find_map_first(|t| {
        let ops = decode(t);
        (0..past).find_map(|a| {
            (w.count_fixed_points(a, &ops) != 1).then(|| ValidityWitness {
                past: a,
                fixed_points: w.fixed_points(a, &ops).len(),
                operations: ops.clone(),
            })
        })
    });
    Ok(ValidityReport {
        valid: failure.is_none(),
        operation_tuples: tuples,
        checks,
        witness: failure,
        self_signalling: w.self_signalling(),
    })
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

fn over_budget(what: &'static str, budget: u128) -> Error {
    Error::BudgetExceeded { what, needed: u128::MAX, budget }
}

/// Which branch of the definiteness recursion applied at the top level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefinitenessRegime {
    /// At most one slot: definite by definition.
    Trivial,
    /// `|P| = 1`: some `w_k` is constant and every constant-operation reduction is definite.
    SinglePast,
    /// `|P| > 1`: every `w^{|a}` is definite.
    MultiplePast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinitenessReport {
    pub definite: bool,
    pub regime: DefinitenessRegime,
    pub processes_visited: u64,
}

/// Recursive causal-definiteness check.
///
/// Reductions are taken with constant operations only. This is exact: if
/// `w_k` is constant with value `i`, then `w^{|μ_k}` depends on `μ_k` only
/// through `μ_k(i)`, so it equals the reduction by the constant `μ_k(i)`.
/// `budget` caps the number of (reduced) processes examined.
pub fn causal_definiteness(w: &TableProcess, budget: u64) -> Result<DefinitenessReport> {
    let regime = if w.num_slots() <= 1 {
        DefinitenessRegime::Trivial
    } else if w.past().size() > 1 {
        DefinitenessRegime::MultiplePast
    } else {
        DefinitenessRegime::SinglePast
    };
    let mut visited = 0;
    let definite = definite(w, budget, &mut visited)?;
    Ok(DefinitenessReport { definite, regime, processes_visited: visited })
}

pub fn is_causally_definite(w: &TableProcess, budget: u64) -> Result<bool> {
    Ok(causal_definiteness(w, budget)?.definite)
}

fn definite(w: &TableProcess, budget: u64, visited: &mut u64) -> Result<bool> {
    *visited += 1;
    if *visited > budget {
        return Err(Error::BudgetExceeded {
            what: "reduced processes",
            needed: *visited as u128,
            budget: budget as u128,
        });
    }
    if w.num_slots() <= 1 {
        return Ok(true);
    }
    if w.past().size() > 1 {
        for a in 0..w.past().size() {
            if !definite(&w.reduce_by_past(a)?, budget, visited)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    'slots: for k in 1..=w.num_slots() {
        if w.constant_input(k).is_none() {
            continue;
        }
        let slot = w.slots()[k - 1];
        for c in 0..slot.output.size() {
            let op = LocalOperation::constant(slot.input.size(), c);
            if !definite(&w.reduce_by_operation(k, &op)?, budget, visited)? {
                continue 'slots;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

/// Reads off the decision tree implemented by a causally definite process
/// with trivial past and binary slot outputs and future.
///
/// At each level the first slot whose input is fixed and whose constant
/// reductions are all definite becomes the next query.
pub fn extract_decision_tree(w: &TableProcess) -> Result<DecisionTree> {
    if w.past().size() != 1 {
        return Err(Error::Precondition("tree extraction needs |P| = 1".into()));
    }
    if w.future().size() != 2 || w.slots().iter().any(|s| s.output.size() != 2) {
        return Err(Error::Precondition("tree extraction needs binary outputs and future".into()));
    }
    extract(w)?.ok_or_else(|| Error::Precondition("process is not causally definite".into()))
}

fn extract(w: &TableProcess) -> Result<Option<DecisionTree>> {
    if w.num_slots() == 0 {
        return Ok(Some(DecisionTree::Leaf(w.lookup(0, &[]).1 == 1)));
    }
    for k in 1..=w.num_slots() {
        let Some(i) = w.constant_input(k) else { continue };
        let size = w.slots()[k - 1].input.size();
        let on0 = extract(&w.reduce_by_operation(k, &LocalOperation::constant(size, 0))?)?;
        let on1 = extract(&w.reduce_by_operation(k, &LocalOperation::constant(size, 1))?)?;
        if let (Some(on0), Some(on1)) = (on0, on1) {
            return Ok(Some(DecisionTree::query(i + 1, on0, on1)));
        }
    }
    Ok(None)
}

/// The sequential process running `t` on an `n`-bit oracle: slot `k` receives
/// the index queried at the node reached by the first `k-1` answers.
///
/// The tree is first padded to uniform depth (at least 1) with dummy queries.
pub fn process_from_tree(t: &DecisionTree, n: usize) -> Result<TableProcess> {
    if n == 0 {
        return Err(Error::Precondition("oracle size must be at least 1".into()));
    }
    if t.max_index() > n {
        return Err(Error::IndexOutOfRange { index: t.max_index(), max: n });
    }
    let depth = t.depth().max(1);
    let padded = t.pad_to_depth(depth)?;
    let slot = Slot::new(FiniteSpace::with_offset(n, 1)?, FiniteSpace::binary());
    TableProcess::from_fn(FiniteSpace::trivial(), FiniteSpace::binary(), vec![slot; depth], |_, o| {
        let mut node = &padded;
        let mut inputs = Vec::with_capacity(depth);
        for &ok in o {
            match node {
                DecisionTree::Query { index, on0, on1 } => {
                    inputs.push(index - 1);
                    node = if ok == 1 { on1 } else { on0 };
                }
                DecisionTree::Leaf(_) => unreachable!("padded tree is complete"),
            }
        }
        match node {
            DecisionTree::Leaf(b) => (inputs, *b as usize),
            DecisionTree::Query { .. } => unreachable!("padded tree is complete"),
        }
    })
}

/// Which inputs `computes` checks.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    /// Exhaust all inputs when `2^n` is at most this.
    pub exhaustive_budget: u64,
    pub samples: usize,
    pub seed: u64,
    /// Checked before the random samples.
    pub structured: Vec<Vec<bool>>,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { exhaustive_budget: 1 << 20, samples: 10_000, seed: 0, structured: Vec::new() }
    }
}

impl SampleSpec {
    /// The concrete list of inputs for arity `n`, or `None` when exhaustive.
    pub fn inputs(&self, n: usize) -> Option<Vec<Vec<bool>>> {
        if n < 64 && (1u64 << n) <= self.exhaustive_budget {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut xs = self.structured.clone();
        xs.extend((0..self.samples).map(|_| (0..n).map(|_| rng.gen::<bool>()).collect()));
        Some(xs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub x: Vec<bool>,
    pub expected: bool,
    /// `None` when the process had no unique fixed point on this oracle.
    pub got: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputesVerdict {
    pub holds: bool,
    pub exhaustive: bool,
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
}

/// Checks `w * (O_x, …, O_x) = f(x)`.
pub fn computes(w: &dyn Process, f: &BooleanFunction, spec: &SampleSpec) -> Result<ComputesVerdict> {
    let n = f.arity();
    if w.past().size() != 1 || w.future().size() != 2 {
        return Err(Error::Signature("computing a function needs |P| = 1 and |F| = 2".into()));
    }
    if let Some(bad) = w.slots().iter().position(|s| s.input.size() != n || s.output.size() != 2) {
        return Err(Error::Signature(format!("slot {} does not accept an {n}-bit oracle", bad + 1)));
    }
    let check = |x: &[bool]| -> Option<Counterexample> {
        let ops = vec![LocalOperation::oracle(x); w.num_slots()];
        let expected = f.eval_unchecked(x);
        let got = w.evaluate(0, &ops).ok().map(|e| e.future == 1);
        (got != Some(expected)).then(|| Counterexample { x: x.to_vec(), expected, got })
    };
    let (exhaustive, checked, counterexample) = match spec.inputs(n) {
        None => {
            let total = 1u64 << n;
            let cx = (0..total).into_par_iter().find_map_first(|i| check(&bits_from_index(i, n)));
            (true, total, cx)
        }
        Some(xs) => {
            let cx = xs.par_iter().find_map_first(|x| check(x));
            (false, xs.len() as u64, cx)
        }
    };
    Ok(ComputesVerdict { holds: counterexample.is_none(), exhaustive, checked, counterexample })
}
