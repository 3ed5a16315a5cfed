//! JSON process files.
//!
//! ```json
//! {"past": 1, "future": 2,
//!  "slots": [{"in": 2, "out": 2}],
//!  "table": [[0, 0], [1, 1]]}
//! ```
//!
//! `table` lists `(i_1, …, i_T, b)` for every `(a, o⃗)` in row-major order
//! (`a` slowest, `o_T` fastest). Values are 0-based; the optional `*_offset`
//! fields only affect display.

use serde::{Deserialize, Serialize};

use super::{FiniteSpace, Process, Slot, TableProcess};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessFile {
    pub past: usize,
    pub future: usize,
    pub slots: Vec<SlotFile>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub past_offset: i64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub future_offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotFile {
    #[serde(rename = "in")]
    pub input: usize,
    #[serde(rename = "out")]
    pub output: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub in_offset: i64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub out_offset: i64,
}

fn is_zero(v: &i64) -> bool {
    *v == 0
}

impl ProcessFile {
    pub fn from_process(w: &TableProcess) -> Self {
        let t = w.num_slots();
        let mut table = Vec::with_capacity(w.rows());
        super::for_each_tuple(
            &std::iter::once(w.past().size()).chain(w.slots().iter().map(|s| s.output.size())).collect::<Vec<_>>(),
            |digits| {
                let (ins, b) = w.lookup(digits[0], &digits[1..]);
                let mut row = Vec::with_capacity(t + 1);
                row.extend_from_slice(ins);
                row.push(b);
                table.push(row);
                true
            },
        );
        ProcessFile {
            past: w.past().size(),
            future: w.future().size(),
            slots: w
                .slots()
                .iter()
                .map(|s| SlotFile {
                    input: s.input.size(),
                    output: s.output.size(),
                    in_offset: s.input.label_offset(),
                    out_offset: s.output.label_offset(),
                })
                .collect(),
            table,
            past_offset: w.past().label_offset(),
            future_offset: w.future().label_offset(),
        }
    }

    pub fn into_process(self) -> Result<TableProcess> {
        let slots = self
            .slots
            .iter()
            .map(|s| {
                Ok(Slot::new(
                    FiniteSpace::with_offset(s.input, s.in_offset)?,
                    FiniteSpace::with_offset(s.output, s.out_offset)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = slots.len();
        let rows = self
            .table
            .into_iter()
            .enumerate()
            .map(|(r, mut row)| {
                if row.len() != t + 1 {
                    return Err(Error::MalformedProcess(format!(
                        "table row {r} has {} entries, expected {}",
                        row.len(),
                        t + 1
                    )));
                }
                let b = row.pop().expect("nonempty");
                Ok((row, b))
            })
            .collect::<Result<Vec<_>>>()?;
        TableProcess::new(
            FiniteSpace::with_offset(self.past, self.past_offset)?,
            FiniteSpace::with_offset(self.future, self.future_offset)?,
            slots,
            rows,
        )
    }

    pub fn parse(text: &str) -> Result<TableProcess> {
        serde_json::from_str::<ProcessFile>(text)?.into_process()
    }

    pub fn render(w: &TableProcess) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ProcessFile::from_process(w))?)
    }
}
