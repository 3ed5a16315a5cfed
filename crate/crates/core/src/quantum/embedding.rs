//! Classical-deterministic process functions as diagonal process matrices.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{link_product, ChoiMatrix, LabeledSpace};
use crate::process::{LocalOperation, Process, TableProcess};
use crate::{Error, Result};

/// Which spaces of a process matrix belong to one slot.
///
/// `input` is sent by the process into the slot, `output` returned by the
/// slot. A missing side is a trivial space: the past is modelled as a slot
/// with output `P` only and the future as a slot with input `F` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedSlot {
    pub input: Option<LabeledSpace>,
    pub output: Option<LabeledSpace>,
}

impl EmbeddedSlot {
    pub fn new(input: Option<LabeledSpace>, output: Option<LabeledSpace>) -> Self {
        EmbeddedSlot { input, output }
    }

    fn input_dim(&self) -> usize {
        self.input.as_ref().map_or(1, |s| s.dim)
    }

    fn output_dim(&self) -> usize {
        self.output.as_ref().map_or(1, |s| s.dim)
    }

    /// Choi matrix `Σ_i |i⟩⟨i| ⊗ |μ(i)⟩⟨μ(i)|` of the deterministic channel `μ`.
    fn channel(&self, op: &LocalOperation) -> Result<ChoiMatrix> {
        let spaces: Vec<LabeledSpace> = self.input.iter().chain(&self.output).cloned().collect();
        let mut m = ChoiMatrix::zeros(spaces)?;
        for i in 0..self.input_dim() {
            let mut digits = Vec::with_capacity(2);
            if self.input.is_some() {
                digits.push(i);
            }
            if self.output.is_some() {
                digits.push(op.apply(i));
            }
            let idx = m.join_index(&digits);
            m.add(idx, idx, Complex64::new(1.0, 0.0));
        }
        Ok(m)
    }
}

/// Diagonal process matrix with 0/1 diagonal and its slot structure.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalProcessMatrix {
    matrix: ChoiMatrix,
    slots: Vec<EmbeddedSlot>,
}

impl DiagonalProcessMatrix {
    pub fn new(matrix: ChoiMatrix, slots: Vec<EmbeddedSlot>) -> Result<Self> {
        for ((r, c), v) in matrix.entries() {
            if r != c {
                return Err(Error::Shape(format!("entry ({r}, {c}) is off the diagonal")));
            }
            if (v - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(Error::Shape(format!("diagonal entry {r} is {v}, not 0 or 1")));
            }
        }
        for s in &slots {
            for space in s.input.iter().chain(&s.output) {
                match matrix.position(&space.label) {
                    Some(p) if matrix.spaces()[p].dim == space.dim => {}
                    _ => return Err(Error::Shape(format!("slot space `{}` is not in the matrix", space.label))),
                }
            }
        }
        Ok(DiagonalProcessMatrix { matrix, slots })
    }

    pub fn matrix(&self) -> &ChoiMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ChoiMatrix {
        self.matrix
    }

    pub fn slots(&self) -> &[EmbeddedSlot] {
        &self.slots
    }

    /// `W * (M_1 ⊗ … ⊗ M_T)` for deterministic channels, by direct
    /// contraction of the diagonals.
    pub fn deterministic_link(&self, ops: &[LocalOperation]) -> Result<f64> {
        self.check_ops(ops)?;
        let positions: Vec<(Option<usize>, Option<usize>)> = self
            .slots
            .iter()
            .map(|s| {
                (
                    s.input.as_ref().and_then(|l| self.matrix.position(&l.label)),
                    s.output.as_ref().and_then(|l| self.matrix.position(&l.label)),
                )
            })
            .collect();
        let mut total = 0.0;
        for ((r, _), v) in self.matrix.entries() {
            let d = self.matrix.split_index(r);
            let consistent = positions.iter().zip(ops).all(|(&(pi, po), op)| {
                let i = pi.map_or(0, |p| d[p]);
                po.is_none_or(|p| op.apply(i) == d[p])
            });
            if consistent {
                total += v.re;
            }
        }
        Ok(total)
    }

    /// The same value through the generic labelled link product.
    pub fn linked_with_channels(&self, ops: &[LocalOperation]) -> Result<Complex64> {
        self.check_ops(ops)?;
        let mut acc = self.matrix.clone();
        for (slot, op) in self.slots.iter().zip(ops) {
            acc = link_product(&acc, &slot.channel(op)?)?;
        }
        if acc.dim() != 1 {
            return Err(Error::Shape(format!("spaces {:?} were not contracted", acc.labels())));
        }
        Ok(acc.get(0, 0))
    }

    fn check_ops(&self, ops: &[LocalOperation]) -> Result<()> {
        if ops.len() != self.slots.len() {
            return Err(Error::Signature(format!("{} channels for {} slots", ops.len(), self.slots.len())));
        }
        for (s, op) in self.slots.iter().zip(ops) {
            if op.input_size() != s.input_dim() || op.0.iter().any(|&o| o >= s.output_dim()) {
                return Err(Error::Signature("channel does not match its slot".into()));
            }
        }
        Ok(())
    }
}

/// `Σ_{a,o⃗} |a⟩⟨a|_P ⊗ |o⃗⟩⟨o⃗|_O ⊗ |i⃗⟩⟨i⃗|_I ⊗ |b⟩⟨b|_F` with `(i⃗, b) = w(a, o⃗)`.
///
/// Labels are `P`, `O1…OT`, `I1…IT`, `F`; `P` and `F` are omitted when trivial
/// and otherwise folded in as the extra slots described on [`EmbeddedSlot`].
pub fn embed_process_function(w: &TableProcess) -> Result<DiagonalProcessMatrix> {
    let t = w.num_slots();
    let with_past = w.past().size() > 1;
    let with_future = w.future().size() > 1;
    let mut spaces = Vec::new();
    let mut slots = Vec::new();
    if with_past {
        let p = LabeledSpace::new("P", w.past().size());
        spaces.push(p.clone());
        slots.push(EmbeddedSlot::new(None, Some(p)));
    }
    let outs: Vec<LabeledSpace> =
        w.slots().iter().enumerate().map(|(k, s)| LabeledSpace::new(format!("O{}", k + 1), s.output.size())).collect();
    let ins: Vec<LabeledSpace> =
        w.slots().iter().enumerate().map(|(k, s)| LabeledSpace::new(format!("I{}", k + 1), s.input.size())).collect();
    spaces.extend(outs.iter().cloned());
    spaces.extend(ins.iter().cloned());
    for (i, o) in ins.iter().zip(&outs) {
        slots.push(EmbeddedSlot::new(Some(i.clone()), Some(o.clone())));
    }
    if with_future {
        let f = LabeledSpace::new("F", w.future().size());
        spaces.push(f.clone());
        slots.push(EmbeddedSlot::new(Some(f), None));
    }
    let mut m = ChoiMatrix::zeros(spaces)?;
    let radices: Vec<usize> =
        std::iter::once(w.past().size()).chain(w.slots().iter().map(|s| s.output.size())).collect();
    let mut rows = Vec::with_capacity(w.rows());
    crate::process::for_each_tuple(&radices, |d| {
        rows.push(d.to_vec());
        true
    });
    for d in rows {
        let (ins, b) = w.lookup(d[0], &d[1..]);
        let mut digits = Vec::with_capacity(2 * t + 2);
        if with_past {
            digits.push(d[0]);
        }
        digits.extend_from_slice(&d[1..]);
        digits.extend_from_slice(ins);
        if with_future {
            digits.push(b);
        }
        let idx = m.join_index(&digits);
        m.add(idx, idx, Complex64::new(1.0, 0.0));
    }
    DiagonalProcessMatrix::new(m, slots)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationReport {
    pub normalized: bool,
    pub channel_tuples: u128,
    /// First channel tuple (as operation tables) whose link differs from 1.
    pub witness: Option<(Vec<Vec<usize>>, f64)>,
}

/// Checks `W * (M_1 ⊗ … ⊗ M_T) = 1` for every tuple of deterministic channels.
pub fn check_classical_normalization(w: &DiagonalProcessMatrix, budget: u128) -> Result<NormalizationReport> {
    let per_slot: Vec<u128> = w
        .slots()
        .iter()
        .map(|s| (0..s.input_dim()).try_fold(1u128, |acc, _| acc.checked_mul(s.output_dim() as u128)))
        .collect::<Option<_>>()
        .ok_or(Error::BudgetExceeded { what: "channel tuples", needed: u128::MAX, budget })?;
    let tuples = per_slot.iter().try_fold(1u128, |acc, &m| acc.checked_mul(m)).ok_or(Error::BudgetExceeded {
        what: "channel tuples",
        needed: u128::MAX,
        budget,
    })?;
    if tuples > budget {
        return Err(Error::BudgetExceeded { what: "channel tuples", needed: tuples, budget });
    }
    let decode = |mut t: u64| -> Vec<LocalOperation> {
        w.slots()
            .iter()
            .zip(&per_slot)
            .map(|(s, &m)| {
                let op = LocalOperation::nth(s.input_dim(), s.output_dim(), (t % m as u64) as u128);
                t /= m as u64;
                op
            })
            .collect()
    };
    let failure = (0..tuples as u64).into_par_iter().find_map_first(|t| {
        let ops = decode(t);
        match w.deterministic_link(&ops) {
            Ok(v) if (v - 1.0).abs() <= 1e-9 => None,
            Ok(v) => Some((ops.into_iter().map(|o| o.0).collect(), v)),
            Err(_) => Some((Vec::new(), f64::NAN)),
        }
    });
    Ok(NormalizationReport { normalized: failure.is_none(), channel_tuples: tuples, witness: failure })
}
