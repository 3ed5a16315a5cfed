//! Recursive functions `f^(l)` and the matching composed processes.
//!
//! `f^(l+1)(x) = f(f^(l)(block_1), …, f^(l)(block_n))` with blocks of
//! `n^l` consecutive bits. The process side mirrors this: a depth-`l`
//! process is shifted so that past value `a` selects block `a`, and one
//! shifted copy is plugged into every slot of the outer process.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boolean::{deterministic_query_complexity, BooleanFunction, DEFAULT_TABLE_LIMIT};
use crate::lugano::{f6c, lugano_bar};
use crate::process::{Evaluation, FiniteSpace, LocalOperation, Process, Slot};
use crate::{Error, Result};

/// `f^(l)` over `n^l` bits.
#[derive(Clone, Debug)]
pub struct RecursiveFunction {
    base: BooleanFunction,
    depth: usize,
    function: BooleanFunction,
}

impl RecursiveFunction {
    pub fn base(&self) -> &BooleanFunction {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn arity(&self) -> usize {
        self.function.arity()
    }

    pub fn function(&self) -> &BooleanFunction {
        &self.function
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        self.function.eval(x)
    }
}

pub fn recurse_function(f: &BooleanFunction, l: usize) -> Result<RecursiveFunction> {
    if l == 0 {
        return Err(Error::Precondition("recursion depth must be at least 1".into()));
    }
    let n = f.arity();
    let arity = n
        .checked_pow(l as u32)
        .filter(|&a| a <= 1 << 24)
        .ok_or_else(|| Error::Precondition(format!("{n}^{l} input bits is too many")))?;
    let base = f.clone();
    let function =
        BooleanFunction::from_evaluator_with_limit(arity, DEFAULT_TABLE_LIMIT, move |x| eval_recursive(&base, x))?;
    Ok(RecursiveFunction { base: f.clone(), depth: l, function })
}

fn eval_recursive(f: &BooleanFunction, x: &[bool]) -> bool {
    let n = f.arity();
    if x.len() == n {
        return f.eval_unchecked(x);
    }
    let block = x.len() / n;
    let inner: Vec<bool> = x.chunks(block).map(|c| eval_recursive(f, c)).collect();
    f.eval_unchecked(&inner)
}

/// `w̃(a, o⃗)_k = (a−1)·m + w_k(o⃗)` (1-based labels) for an inner process
/// whose slots read an `m`-bit oracle. Past values select blocks.
pub struct ShiftedProcess {
    inner: Arc<dyn Process>,
    block: usize,
    past: FiniteSpace,
    slots: Vec<Slot>,
}

/// Shifts `inner` (trivial past, all slot inputs of equal size `m`) to read
/// block `a` of an oracle on `blocks · m` bits.
pub fn shift_process(inner: Arc<dyn Process>, blocks: usize) -> Result<ShiftedProcess> {
    if inner.past().size() != 1 {
        return Err(Error::Signature("only processes with trivial past can be shifted".into()));
    }
    let m = match inner.slots().first() {
        Some(s) => s.input.size(),
        None => return Err(Error::Signature("cannot shift a process without slots".into())),
    };
    if inner.slots().iter().any(|s| s.input.size() != m) {
        return Err(Error::Signature("slot inputs must share one size".into()));
    }
    let wide = FiniteSpace::with_offset(blocks * m, 1)?;
    let slots = inner.slots().iter().map(|s| Slot::new(wide, s.output)).collect();
    Ok(ShiftedProcess { inner, block: m, past: FiniteSpace::with_offset(blocks, 1)?, slots })
}

impl Process for ShiftedProcess {
    fn past(&self) -> FiniteSpace {
        self.past
    }

    fn future(&self) -> FiniteSpace {
        self.inner.future()
    }

    fn slots(&self) -> &[Slot] {
        &self.slots
    }

    fn evaluate(&self, a: usize, ops: &[LocalOperation]) -> Result<Evaluation> {
        crate::process::check_past(self.past, a)?;
        crate::process::check_operations(&self.slots, ops)?;
        let offset = a * self.block;
        let narrowed: Vec<LocalOperation> =
            ops.iter().map(|op| LocalOperation(op.0[offset..offset + self.block].to_vec())).collect();
        let mut e = self.inner.evaluate(0, &narrowed)?;
        for i in &mut e.inputs {
            *i += offset;
        }
        Ok(e)
    }
}

/// `w^(l+1) * μ⃗ = w * (w̃ * μ⃗_1, …, w̃ * μ⃗_T)`, evaluated without a table.
pub struct ComposedProcess {
    outer: Arc<dyn Process>,
    inner: Vec<Arc<dyn Process>>,
    slots: Vec<Slot>,
}

/// Plugs `inner[t]` into slot `t` of `outer`.
pub fn compose_process(outer: Arc<dyn Process>, inner: Vec<Arc<dyn Process>>) -> Result<ComposedProcess> {
    if inner.len() != outer.num_slots() {
        return Err(Error::Signature(format!("{} inner processes for {} outer slots", inner.len(), outer.num_slots())));
    }
    for (t, (slot, w)) in outer.slots().iter().zip(&inner).enumerate() {
        if slot.input.size() != w.past().size() || slot.output.size() != w.future().size() {
            return Err(Error::Signature(format!(
                "outer slot {} is {}→{}, inner process is {}→{}",
                t + 1,
                slot.input.size(),
                slot.output.size(),
                w.past().size(),
                w.future().size()
            )));
        }
    }
    let slots = inner.iter().flat_map(|w| w.slots().iter().copied()).collect();
    Ok(ComposedProcess { outer, inner, slots })
}

impl Process for ComposedProcess {
    fn past(&self) -> FiniteSpace {
        self.outer.past()
    }

    fn future(&self) -> FiniteSpace {
        self.outer.future()
    }

    fn slots(&self) -> &[Slot] {
        &self.slots
    }

    fn evaluate(&self, a: usize, ops: &[LocalOperation]) -> Result<Evaluation> {
        crate::process::check_operations(&self.slots, ops)?;
        let mut blocks = Vec::with_capacity(self.inner.len());
        let mut start = 0;
        for w in &self.inner {
            blocks.push(&ops[start..start + w.num_slots()]);
            start += w.num_slots();
        }
        // Each inner link `w̃_t * μ⃗_t` becomes a local operation of the outer process.
        let effective =
            self.inner.iter().zip(&blocks).map(|(w, b)| w.link(b).map(LocalOperation)).collect::<Result<Vec<_>>>()?;
        let top = self.outer.evaluate(a, &effective)?;
        let mut inputs = Vec::with_capacity(self.slots.len());
        let mut outputs = Vec::with_capacity(self.slots.len());
        for ((w, b), &i) in self.inner.iter().zip(&blocks).zip(&top.inputs) {
            let e = w.evaluate(i, b)?;
            inputs.extend(e.inputs);
            outputs.extend(e.outputs);
        }
        Ok(Evaluation { inputs, outputs, future: top.future })
    }
}

/// The `3^l`-slot process computing `f6c^(l)`.
pub fn lugano_composite(l: usize) -> Result<Arc<dyn Process>> {
    if l == 0 {
        return Err(Error::Precondition("composition depth must be at least 1".into()));
    }
    let base: Arc<dyn Process> = Arc::new(lugano_bar());
    let mut current = Arc::clone(&base);
    for _ in 1..l {
        let shifted: Arc<dyn Process> = Arc::new(shift_process(current, 6)?);
        current = Arc::new(compose_process(Arc::clone(&base), vec![Arc::clone(&shifted); base.num_slots()])?);
    }
    Ok(current)
}

/// Number of output tuples accepted as fixed points of `(a, μ⃗)`, using the
/// explicit entries `w(a, o⃗)` of a process that is never tabulated.
pub fn count_fixed_points(w: &dyn Process, a: usize, ops: &[LocalOperation]) -> Result<usize> {
    crate::process::check_operations(w.slots(), ops)?;
    let radices: Vec<usize> = w.slots().iter().map(|s| s.output.size()).collect();
    let mut count = 0;
    let mut failure = None;
    crate::process::for_each_tuple(&radices, |o| match w.entry(a, o) {
        Ok(e) => {
            if e.inputs.iter().zip(ops).zip(o).all(|((&i, op), &ok)| op.apply(i) == ok) {
                count += 1;
            }
            true
        }
        Err(err) => {
            failure = Some(err);
            false
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(count),
    }
}

/// Structured inputs for depth `l`: all-zeros, all-ones, and every input
/// that is constant on each top-level block.
pub fn structured_inputs(n: usize, l: usize) -> Vec<Vec<bool>> {
    let len = n.pow(l as u32);
    let block = len / n;
    let mut xs = vec![vec![false; len], vec![true; len]];
    for pattern in 0..1u64 << n {
        let bits = crate::boolean::bits_from_index(pattern, n);
        xs.push(bits.iter().flat_map(|&b| std::iter::repeat_n(b, block)).collect());
    }
    xs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub depth: usize,
    pub slots: usize,
    pub input_bits: usize,
    pub exhaustive: bool,
    pub structured: usize,
    pub random: usize,
    pub seed: u64,
    pub checked: usize,
    pub agreed: usize,
    /// First disagreeing input in check order, as a bit string.
    pub first_disagreement: Option<String>,
}

impl CompositionReport {
    pub fn passed(&self) -> bool {
        self.agreed == self.checked
    }
}

/// Compares the depth-`l` composite with `f6c^(l)`: exhaustively at `l = 1`,
/// else on the structured inputs plus `samples` seeded random ones.
pub fn verify_lugano_composition(l: usize, samples: usize, seed: u64) -> Result<CompositionReport> {
    let w = lugano_composite(l)?;
    let f = recurse_function(&f6c(), l)?;
    let n = f.arity();
    let (inputs, exhaustive, structured, random) = if l == 1 {
        ((0..64).map(|i| crate::boolean::bits_from_index(i, 6)).collect::<Vec<_>>(), true, 0, 0)
    } else {
        let mut xs = structured_inputs(6, l);
        let structured = xs.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        xs.extend((0..samples).map(|_| (0..n).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()));
        (xs, false, structured, samples)
    };
    let agree: Vec<bool> = inputs
        .par_iter()
        .map(|x| {
            let ops = vec![LocalOperation::oracle(x); w.num_slots()];
            match w.evaluate(0, &ops) {
                Ok(e) => (e.future == 1) == f.function().eval_unchecked(x),
                Err(_) => false,
            }
        })
        .collect();
    let first = agree.iter().position(|ok| !ok).map(|i| crate::boolean::format_bits(&inputs[i]));
    Ok(CompositionReport {
        depth: l,
        slots: w.num_slots(),
        input_bits: n,
        exhaustive,
        structured,
        random,
        seed,
        checked: agree.len(),
        agreed: agree.iter().filter(|&&ok| ok).count(),
        first_disagreement: first,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationRow {
    pub depth: usize,
    /// Slots of the constructed composite process.
    pub witnessed_slots: usize,
    /// `D(f6c^(l)) = 4^l`.
    pub decision_tree_depth: u64,
    /// `"computed"` when obtained by exact search, `"cited"` when taken from
    /// the composition theorem for decision trees.
    pub decision_tree_source: &'static str,
}

pub const MAX_REPORT_DEPTH: usize = 3;

pub fn separation_report(l_max: usize) -> Result<Vec<SeparationRow>> {
    if l_max == 0 || l_max > MAX_REPORT_DEPTH {
        return Err(Error::Precondition(format!("report depth must lie in 1..={MAX_REPORT_DEPTH}")));
    }
    let (d1, _) = deterministic_query_complexity(&f6c())?;
    (1..=l_max)
        .map(|l| {
            let w = lugano_composite(l)?;
            Ok(SeparationRow {
                depth: l,
                witnessed_slots: w.num_slots(),
                decision_tree_depth: (d1 as u64).pow(l as u32),
                decision_tree_source: if l == 1 { "computed" } else { "cited" },
            })
        })
        .collect()
}
