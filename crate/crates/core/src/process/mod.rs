//! Classical-deterministic process functions `w : P × ∏O_k → ∏I_k × F`.
//!
//! Every space is a [`FiniteSpace`] holding values `0..size`; the
//! `label_offset` only changes how values are displayed. A slot input value
//! `v` addresses oracle index `v + 1` when the slot is fed a
//! [`ClassicalOracle`](crate::boolean::ClassicalOracle).

mod analysis;
mod format;
mod table;

use serde::{Deserialize, Serialize};

pub use analysis::{
    causal_definiteness, computes, extract_decision_tree, is_causally_definite, process_from_tree, validate_process,
    ComputesVerdict, Counterexample, DefinitenessRegime, DefinitenessReport, SampleSpec, ValidityReport,
    ValidityWitness, DEFAULT_VALIDATION_BUDGET,
};
pub use format::ProcessFile;
pub use table::{InducedFunctions, SelfSignalling, TableProcess};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSpace {
    size: usize,
    label_offset: i64,
}

impl FiniteSpace {
    pub fn new(size: usize) -> Result<Self> {
        Self::with_offset(size, 0)
    }

    pub fn with_offset(size: usize, label_offset: i64) -> Result<Self> {
        if size == 0 {
            return Err(Error::MalformedProcess("spaces must be nonempty".into()));
        }
        Ok(FiniteSpace { size, label_offset })
    }

    pub const fn binary() -> Self {
        FiniteSpace { size: 2, label_offset: 0 }
    }

    pub const fn trivial() -> Self {
        FiniteSpace { size: 1, label_offset: 0 }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label_offset(&self) -> i64 {
        self.label_offset
    }

    pub fn label(&self, value: usize) -> i64 {
        value as i64 + self.label_offset
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub input: FiniteSpace,
    pub output: FiniteSpace,
}

impl Slot {
    pub fn new(input: FiniteSpace, output: FiniteSpace) -> Self {
        Slot { input, output }
    }

    pub fn binary() -> Self {
        Slot::new(FiniteSpace::binary(), FiniteSpace::binary())
    }
}

/// Total map `μ_k : I_k → O_k`, stored as a table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalOperation(pub Vec<usize>);

impl LocalOperation {
    pub fn constant(input_size: usize, value: usize) -> Self {
        LocalOperation(vec![value; input_size])
    }

    pub fn identity(size: usize) -> Self {
        LocalOperation((0..size).collect())
    }

    /// The oracle `O_x` seen as a slot operation: value `v` answers `x_{v+1}`.
    pub fn oracle(x: &[bool]) -> Self {
        LocalOperation(x.iter().map(|&b| b as usize).collect())
    }

    #[inline]
    pub fn apply(&self, input: usize) -> usize {
        self.0[input]
    }

    pub fn input_size(&self) -> usize {
        self.0.len()
    }

    /// `index`-th operation in the enumeration of all maps `0..input_size → 0..output_size`,
    /// reading `index` in base `output_size` with the value on input 0 least significant.
    pub fn nth(input_size: usize, output_size: usize, mut index: u128) -> Self {
        let mut map = Vec::with_capacity(input_size);
        for _ in 0..input_size {
            map.push((index % output_size as u128) as usize);
            index /= output_size as u128;
        }
        LocalOperation(map)
    }
}

/// Fixed-point data of one evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub future: usize,
}

/// Anything that can be linked with a tuple of local operations.
pub trait Process: Send + Sync {
    fn past(&self) -> FiniteSpace;
    fn future(&self) -> FiniteSpace;
    fn slots(&self) -> &[Slot];

    /// Unique fixed point and future value for past value `a`.
    fn evaluate(&self, a: usize, ops: &[LocalOperation]) -> Result<Evaluation>;

    fn num_slots(&self) -> usize {
        self.slots().len()
    }

    /// `w * μ⃗` as a table over `P`.
    fn link(&self, ops: &[LocalOperation]) -> Result<Vec<usize>> {
        (0..self.past().size()).map(|a| self.evaluate(a, ops).map(|e| e.future)).collect()
    }

    /// The table entry `w(a, o⃗)`, obtained by linking with the constant
    /// operations `μ_k(·) = o_k` whose only fixed point has outputs `o⃗`.
    fn entry(&self, a: usize, outputs: &[usize]) -> Result<Evaluation> {
        if outputs.len() != self.num_slots() {
            return Err(Error::Signature(format!("{} outputs for {} slots", outputs.len(), self.num_slots())));
        }
        let ops: Vec<LocalOperation> =
            self.slots().iter().zip(outputs).map(|(s, &o)| LocalOperation::constant(s.input.size(), o)).collect();
        self.evaluate(a, &ops)
    }
}

pub(crate) fn check_operations(slots: &[Slot], ops: &[LocalOperation]) -> Result<()> {
    if ops.len() != slots.len() {
        return Err(Error::Signature(format!("{} operations for {} slots", ops.len(), slots.len())));
    }
    for (k, (slot, op)) in slots.iter().zip(ops).enumerate() {
        if op.input_size() != slot.input.size() {
            return Err(Error::Signature(format!(
                "operation {} has domain {} but slot input has size {}",
                k + 1,
                op.input_size(),
                slot.input.size()
            )));
        }
        if op.0.iter().any(|&v| v >= slot.output.size()) {
            return Err(Error::Signature(format!(
                "operation {} leaves the slot output space of size {}",
                k + 1,
                slot.output.size()
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_past(space: FiniteSpace, a: usize) -> Result<()> {
    if a >= space.size() {
        return Err(Error::Signature(format!("past value {a} outside a space of size {}", space.size())));
    }
    Ok(())
}

/// Iterates over all tuples of `radices` in row-major order (last digit fastest).
pub(crate) fn for_each_tuple(radices: &[usize], mut f: impl FnMut(&[usize]) -> bool) {
    let mut digits = vec![0usize; radices.len()];
    loop {
        if !f(&digits) {
            return;
        }
        let mut pos = radices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < radices[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
}
