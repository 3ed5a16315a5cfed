use std::fmt;

use super::{check_operations, check_past, for_each_tuple, Evaluation, FiniteSpace, LocalOperation, Process, Slot};
use crate::{Error, Result};

/// Table-backed process function, indexed row-major by `(a, o_1, …, o_T)`.
///
/// Construction only checks totality and ranges. Validity (unique fixed
/// points) and no-self-signalling are separate checks so that invalid
/// candidates can be represented and rejected with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableProcess {
    past: FiniteSpace,
    future: FiniteSpace,
    slots: Vec<Slot>,
    /// `inputs[row * T + k]` is the `k`-th slot input of row `row`.
    inputs: Vec<usize>,
    futures: Vec<usize>,
}

/// Slot `k` reads its own output: `w_k(a, o⃗)` changes with `o_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSignalling {
    pub slot: usize,
    pub past: usize,
    pub outputs: Vec<usize>,
}

impl TableProcess {
    pub fn new(
        past: FiniteSpace,
        future: FiniteSpace,
        slots: Vec<Slot>,
        rows: Vec<(Vec<usize>, usize)>,
    ) -> Result<Self> {
        let expected = row_count(past, &slots)?;
        if rows.len() != expected {
            return Err(Error::MalformedProcess(format!("table has {} rows, expected {expected}", rows.len())));
        }
        let t = slots.len();
        let mut inputs = Vec::with_capacity(expected * t);
        let mut futures = Vec::with_capacity(expected);
        for (row, (ins, b)) in rows.into_iter().enumerate() {
            if ins.len() != t {
                return Err(Error::MalformedProcess(format!("row {row} has {} slot inputs, expected {t}", ins.len())));
            }
            for (k, (&i, slot)) in ins.iter().zip(&slots).enumerate() {
                if i >= slot.input.size() {
                    return Err(Error::MalformedProcess(format!(
                        "row {row}: input {i} of slot {} outside size {}",
                        k + 1,
                        slot.input.size()
                    )));
                }
            }
            if b >= future.size() {
                return Err(Error::MalformedProcess(format!(
                    "row {row}: future value {b} outside size {}",
                    future.size()
                )));
            }
            inputs.extend(ins);
            futures.push(b);
        }
        Ok(TableProcess { past, future, slots, inputs, futures })
    }

    /// Tabulates `f(a, o⃗) = (i⃗, b)`.
    pub fn from_fn(
        past: FiniteSpace,
        future: FiniteSpace,
        slots: Vec<Slot>,
        mut f: impl FnMut(usize, &[usize]) -> (Vec<usize>, usize),
    ) -> Result<Self> {
        let radices = radices(past, &slots);
        let mut rows = Vec::with_capacity(row_count(past, &slots)?);
        for_each_tuple(&radices, |digits| {
            rows.push(f(digits[0], &digits[1..]));
            true
        });
        Self::new(past, future, slots, rows)
    }

    fn row(&self, a: usize, outputs: &[usize]) -> usize {
        outputs.iter().zip(&self.slots).fold(a, |acc, (&o, s)| acc * s.output.size() + o)
    }

    /// `w(a, o⃗)` as (slot inputs, future).
    pub fn lookup(&self, a: usize, outputs: &[usize]) -> (&[usize], usize) {
        let row = self.row(a, outputs);
        let t = self.slots.len();
        (&self.inputs[row * t..(row + 1) * t], self.futures[row])
    }

    pub fn rows(&self) -> usize {
        self.futures.len()
    }

    /// Accepted output tuples for `(a, μ⃗)`: those with `μ⃗(w(a, o⃗)|_I) = o⃗`.
    pub fn fixed_points(&self, a: usize, ops: &[LocalOperation]) -> Vec<Vec<usize>> {
        let radices: Vec<usize> = self.slots.iter().map(|s| s.output.size()).collect();
        let mut accepted = Vec::new();
        for_each_tuple(&radices, |o| {
            let (ins, _) = self.lookup(a, o);
            if ins.iter().zip(ops).zip(o).all(|((&i, op), &ok)| op.apply(i) == ok) {
                accepted.push(o.to_vec());
            }
            true
        });
        accepted
    }

    pub(crate) fn count_fixed_points(&self, a: usize, ops: &[LocalOperation]) -> usize {
        let radices: Vec<usize> = self.slots.iter().map(|s| s.output.size()).collect();
        let mut count = 0;
        for_each_tuple(&radices, |o| {
            let (ins, _) = self.lookup(a, o);
            if ins.iter().zip(ops).zip(o).all(|((&i, op), &ok)| op.apply(i) == ok) {
                count += 1;
            }
            count < 2
        });
        count
    }

    /// The unique fixed point for `(a, μ⃗)`.
    pub fn fixed_point(&self, a: usize, ops: &[LocalOperation]) -> Result<Evaluation> {
        check_past(self.past, a)?;
        check_operations(&self.slots, ops)?;
        let mut accepted = self.fixed_points(a, ops);
        if accepted.len() != 1 {
            return Err(Error::FixedPoint { past: a, count: accepted.len() });
        }
        let outputs = accepted.pop().expect("exactly one");
        let (ins, future) = self.lookup(a, &outputs);
        Ok(Evaluation { inputs: ins.to_vec(), outputs, future })
    }

    /// First place where some `w_k` depends on `o_k`, if any.
    pub fn self_signalling(&self) -> Option<SelfSignalling> {
        let mut found = None;
        for_each_tuple(&radices(self.past, &self.slots), |digits| {
            let (a, o) = (digits[0], &digits[1..]);
            let (base, _) = self.lookup(a, o);
            for k in 0..self.slots.len() {
                let mut varied = o.to_vec();
                for alt in 0..self.slots[k].output.size() {
                    varied[k] = alt;
                    if self.lookup(a, &varied).0[k] != base[k] {
                        found = Some(SelfSignalling { slot: k + 1, past: a, outputs: o.to_vec() });
                        return false;
                    }
                }
            }
            true
        });
        found
    }

    pub fn no_self_signalling(&self) -> bool {
        self.self_signalling().is_none()
    }

    pub fn induced_functions(&self) -> InducedFunctions {
        let t = self.slots.len();
        let slots = (0..t).map(|k| (0..self.rows()).map(|r| self.inputs[r * t + k]).collect()).collect();
        InducedFunctions {
            past: self.past,
            future: self.future,
            signature: self.slots.clone(),
            slots,
            future_map: self.futures.clone(),
        }
    }

    /// `w^{|μ_k}` for the 1-based slot `k`.
    ///
    /// Uses `w_k(a, o⃗_∖k)`, which requires no-self-signalling.
    pub fn reduce_by_operation(&self, k: usize, op: &LocalOperation) -> Result<TableProcess> {
        if k == 0 || k > self.slots.len() {
            return Err(Error::IndexOutOfRange { index: k, max: self.slots.len() });
        }
        let idx = k - 1;
        let slot = self.slots[idx];
        check_operations(std::slice::from_ref(&slot), std::slice::from_ref(op))?;
        if let Some(w) = self.self_signalling() {
            return Err(Error::Precondition(format!("slot {} signals to itself; reduction is undefined", w.slot)));
        }
        let mut rest = self.slots.clone();
        rest.remove(idx);
        TableProcess::from_fn(self.past, self.future, rest, |a, o_rest| {
            let mut full = Vec::with_capacity(o_rest.len() + 1);
            full.extend_from_slice(&o_rest[..idx]);
            full.push(0);
            full.extend_from_slice(&o_rest[idx..]);
            let i_k = self.lookup(a, &full).0[idx];
            full[idx] = op.apply(i_k);
            let (ins, b) = self.lookup(a, &full);
            let mut ins = ins.to_vec();
            ins.remove(idx);
            (ins, b)
        })
    }

    /// `w^{|a}`: the process with past fixed to `a` and a trivial past space.
    pub fn reduce_by_past(&self, a: usize) -> Result<TableProcess> {
        check_past(self.past, a)?;
        TableProcess::from_fn(FiniteSpace::trivial(), self.future, self.slots.clone(), |_, o| {
            let (ins, b) = self.lookup(a, o);
            (ins.to_vec(), b)
        })
    }

    /// Whether `w_k` (1-based) takes one value on all of `P × ∏O`.
    pub fn constant_input(&self, k: usize) -> Option<usize> {
        let t = self.slots.len();
        let first = self.inputs[k - 1];
        (0..self.rows()).all(|r| self.inputs[r * t + k - 1] == first).then_some(first)
    }
}

impl Process for TableProcess {
    fn past(&self) -> FiniteSpace {
        self.past
    }

    fn future(&self) -> FiniteSpace {
        self.future
    }

    fn slots(&self) -> &[Slot] {
        &self.slots
    }

    fn evaluate(&self, a: usize, ops: &[LocalOperation]) -> Result<Evaluation> {
        self.fixed_point(a, ops)
    }

    fn entry(&self, a: usize, outputs: &[usize]) -> Result<Evaluation> {
        check_past(self.past, a)?;
        if outputs.len() != self.slots.len() || outputs.iter().zip(&self.slots).any(|(&o, s)| o >= s.output.size()) {
            return Err(Error::Signature("output tuple does not match the slots".into()));
        }
        let (ins, future) = self.lookup(a, outputs);
        Ok(Evaluation { inputs: ins.to_vec(), outputs: outputs.to_vec(), future })
    }
}

impl fmt::Display for TableProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut result = Ok(());
        for_each_tuple(&radices(self.past, &self.slots), |digits| {
            let (a, o) = (digits[0], &digits[1..]);
            let (ins, b) = self.lookup(a, o);
            let show = |vals: &[usize], spaces: &mut dyn Iterator<Item = FiniteSpace>| {
                vals.iter().zip(spaces).map(|(&v, s)| s.label(v).to_string()).collect::<Vec<_>>().join(" ")
            };
            result = writeln!(
                f,
                "{} | {} -> {} | {}",
                self.past.label(a),
                show(o, &mut self.slots.iter().map(|s| s.output)),
                show(ins, &mut self.slots.iter().map(|s| s.input)),
                self.future.label(b)
            );
            result.is_ok()
        });
        result
    }
}

/// The component maps `w_1, …, w_T, w_F`, each tabulated over `(a, o⃗)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedFunctions {
    past: FiniteSpace,
    future: FiniteSpace,
    signature: Vec<Slot>,
    slots: Vec<Vec<usize>>,
    future_map: Vec<usize>,
}

impl InducedFunctions {
    /// Table of `w_k` (1-based), row-major over `(a, o⃗)`.
    pub fn slot(&self, k: usize) -> &[usize] {
        &self.slots[k - 1]
    }

    pub fn future_map(&self) -> &[usize] {
        &self.future_map
    }

    pub fn reassemble(&self) -> Result<TableProcess> {
        let rows = (0..self.future_map.len())
            .map(|r| (self.slots.iter().map(|s| s[r]).collect(), self.future_map[r]))
            .collect();
        TableProcess::new(self.past, self.future, self.signature.clone(), rows)
    }
}

fn radices(past: FiniteSpace, slots: &[Slot]) -> Vec<usize> {
    std::iter::once(past.size()).chain(slots.iter().map(|s| s.output.size())).collect()
}

fn row_count(past: FiniteSpace, slots: &[Slot]) -> Result<usize> {
    slots.iter().try_fold(past.size(), |acc, s| acc.checked_mul(s.output.size())).ok_or(Error::BudgetExceeded {
        what: "process table rows",
        needed: u128::MAX,
        budget: usize::MAX as u128,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_loop() -> TableProcess {
        // w(o) = o: slot input copies its own output
        TableProcess::from_fn(FiniteSpace::trivial(), FiniteSpace::trivial(), vec![Slot::binary()], |_, o| {
            (vec![o[0]], 0)
        })
        .unwrap()
    }

    #[test]
    fn identity_loop_signals_to_itself() {
        let w = identity_loop();
        let s = w.self_signalling().unwrap();
        assert_eq!(s.slot, 1);
        assert!(w.reduce_by_operation(1, &LocalOperation::identity(2)).is_err());
        // Negation has no fixed point, the identity has two.
        assert_eq!(w.fixed_points(0, &[LocalOperation(vec![1, 0])]).len(), 0);
        assert_eq!(w.fixed_points(0, &[LocalOperation::identity(2)]).len(), 2);
        assert!(matches!(w.fixed_point(0, &[LocalOperation(vec![1, 0])]), Err(Error::FixedPoint { count: 0, .. })));
    }

    #[test]
    fn rejects_out_of_range_rows() {
        let r = TableProcess::new(
            FiniteSpace::trivial(),
            FiniteSpace::binary(),
            vec![Slot::binary()],
            vec![(vec![0], 0), (vec![2], 0)],
        );
        assert!(matches!(r, Err(Error::MalformedProcess(_))));
        let short = TableProcess::new(FiniteSpace::trivial(), FiniteSpace::binary(), vec![Slot::binary()], vec![]);
        assert!(short.is_err());
    }

    #[test]
    fn sequential_wire_links_to_identity() {
        // P -> I_1, O_1 -> F
        let w = TableProcess::from_fn(FiniteSpace::binary(), FiniteSpace::binary(), vec![Slot::binary()], |a, o| {
            (vec![a], o[0])
        })
        .unwrap();
        assert_eq!(w.link(&[LocalOperation::identity(2)]).unwrap(), vec![0, 1]);
        assert_eq!(w.link(&[LocalOperation(vec![1, 0])]).unwrap(), vec![1, 0]);
        let reduced = w.reduce_by_operation(1, &LocalOperation::identity(2)).unwrap();
        assert_eq!(reduced.num_slots(), 0);
        assert_eq!(reduced.link(&[]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn display_uses_offsets() {
        let w = TableProcess::from_fn(
            FiniteSpace::trivial(),
            FiniteSpace::trivial(),
            vec![Slot::new(FiniteSpace::with_offset(3, 1).unwrap(), FiniteSpace::binary())],
            |_, _| (vec![2], 0),
        )
        .unwrap();
        assert!(w.to_string().starts_with("0 | 0 -> 3 | 0"));
    }
}
