//! The Lugano process, its six-input extension `w̄`, the functions `f6c` and
//! `f6q`, and golden reference tables for them.

use std::fmt;

use serde::Serialize;

use crate::boolean::{bits_from_index, BooleanFunction};
use crate::process::{FiniteSpace, LocalOperation, Process, Slot, TableProcess};
use crate::Result;

/// `k ⊕₃ l = [(k + l − 1) mod 3] + 1` on slot labels `1..=3`.
pub fn oplus3(k: usize, l: usize) -> usize {
    (k + l - 1) % 3 + 1
}

/// Induced function `w_k(o⃗) = (1 ⊕ o_{k⊕₃1}) o_{k⊕₃2}` for `k` in `1..=3`.
pub fn lugano_induced(k: usize, o: [bool; 3]) -> bool {
    !o[oplus3(k, 1) - 1] && o[oplus3(k, 2) - 1]
}

/// Three binary slots, trivial past and future.
pub fn lugano() -> TableProcess {
    TableProcess::from_fn(FiniteSpace::trivial(), FiniteSpace::trivial(), vec![Slot::binary(); 3], |_, o| {
        let o = as_bits(o);
        ((1..=3).map(|k| lugano_induced(k, o) as usize).collect(), 0)
    })
    .expect("static construction")
}

/// `w̄_k = k + 3·w_k` (slot inputs labelled `1..=6`) with the output map
/// `w̄_F = o1(1⊕o2)o3 ⊕ o2(1⊕o3)o1 ⊕ o3(1⊕o1)o2 ⊕ o1o2o3`.
pub fn lugano_bar() -> TableProcess {
    let input = FiniteSpace::with_offset(6, 1).expect("nonempty");
    TableProcess::from_fn(
        FiniteSpace::trivial(),
        FiniteSpace::binary(),
        vec![Slot::new(input, FiniteSpace::binary()); 3],
        |_, o| {
            let o = as_bits(o);
            let inputs = (1..=3).map(|k| k - 1 + 3 * lugano_induced(k, o) as usize).collect();
            (inputs, lugano_bar_future(o) as usize)
        },
    )
    .expect("static construction")
}

pub fn lugano_bar_future([o1, o2, o3]: [bool; 3]) -> bool {
    (o1 & !o2 & o3) ^ (o2 & !o3 & o1) ^ (o3 & !o1 & o2) ^ (o1 & o2 & o3)
}

fn as_bits(o: &[usize]) -> [bool; 3] {
    [o[0] == 1, o[1] == 1, o[2] == 1]
}

/// `f6c(x) = x4(1⊕x2)x3 ⊕ x5(1⊕x3)x1 ⊕ x6(1⊕x1)x2 ⊕ x1x2x3`.
pub fn f6c_eval(x: &[bool]) -> bool {
    (x[3] & !x[1] & x[2]) ^ (x[4] & !x[2] & x[0]) ^ (x[5] & !x[0] & x[1]) ^ (x[0] & x[1] & x[2])
}

/// `f6q(x) = f6c(x1⊕x4, x2⊕x5, x3⊕x6, x4, x5, x6)`.
pub fn f6q_eval(x: &[bool]) -> bool {
    f6c_eval(&[x[0] ^ x[3], x[1] ^ x[4], x[2] ^ x[5], x[3], x[4], x[5]])
}

pub fn f6c() -> BooleanFunction {
    BooleanFunction::from_evaluator(6, f6c_eval).expect("arity 6")
}

pub fn f6q() -> BooleanFunction {
    BooleanFunction::from_evaluator(6, f6q_eval).expect("arity 6")
}

/// Symbolic table cell: a constant or an input bit (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sym {
    Zero,
    One,
    X(usize),
}

impl Sym {
    pub fn eval(self, x: &[bool]) -> bool {
        match self {
            Sym::Zero => false,
            Sym::One => true,
            Sym::X(i) => x[i - 1],
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Zero => f.write_str("0"),
            Sym::One => f.write_str("1"),
            Sym::X(i) => write!(f, "x{i}"),
        }
    }
}

use Sym::{One, Zero, X};

/// `f6c` by `(x1, x2, x3)`.
pub const F6C_TABLE: [([u8; 3], Sym); 8] = [
    ([0, 0, 0], Zero),
    ([1, 0, 0], X(5)),
    ([0, 1, 0], X(6)),
    ([0, 0, 1], X(4)),
    ([1, 1, 0], X(5)),
    ([1, 0, 1], X(4)),
    ([0, 1, 1], X(6)),
    ([1, 1, 1], One),
];

/// `f6q` by `(x1⊕x4, x2⊕x5, x3⊕x6)`.
pub const F6Q_TABLE: [([u8; 3], Sym); 8] = F6C_TABLE;

/// Fixed point of `w̄` on three copies of `O_x`, by `(x1, x2, x3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointRow {
    pub key: [u8; 3],
    /// Slot-input labels `j_k` in `1..=6`.
    pub j: [usize; 3],
    pub o: [Sym; 3],
    pub output: Sym,
}

const fn fp(key: [u8; 3], j: [usize; 3], o: [Sym; 3], output: Sym) -> FixedPointRow {
    FixedPointRow { key, j, o, output }
}

pub const LUGANO_BAR_FIXED_POINTS: [FixedPointRow; 8] = [
    fp([0, 0, 0], [1, 2, 3], [Zero, Zero, Zero], Zero),
    fp([1, 0, 0], [1, 5, 3], [One, X(5), Zero], X(5)),
    fp([0, 1, 0], [1, 2, 6], [Zero, One, X(6)], X(6)),
    fp([0, 0, 1], [4, 2, 3], [X(4), Zero, One], X(4)),
    fp([1, 1, 0], [1, 5, 3], [One, X(5), Zero], X(5)),
    fp([1, 0, 1], [4, 2, 3], [X(4), Zero, One], X(4)),
    fp([0, 1, 1], [1, 2, 6], [Zero, One, X(6)], X(6)),
    fp([1, 1, 1], [1, 2, 3], [One, One, One], One),
];

/// Registers produced by the quantum supermap, by `(x1⊕x4, x2⊕x5, x3⊕x6)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegisterRow {
    pub key: [u8; 3],
    pub f: [Sym; 3],
    pub alpha: [u8; 3],
    pub value: Sym,
}

const fn reg(key: [u8; 3], f: [Sym; 3], alpha: [u8; 3], value: Sym) -> RegisterRow {
    RegisterRow { key, f, alpha, value }
}

pub const F6Q_REGISTERS: [RegisterRow; 8] = [
    reg([0, 0, 0], [Zero, Zero, Zero], [0, 0, 0], Zero),
    reg([1, 0, 0], [One, X(5), Zero], [0, 1, 0], X(5)),
    reg([0, 1, 0], [Zero, One, X(6)], [0, 0, 1], X(6)),
    reg([0, 0, 1], [X(4), Zero, One], [1, 0, 0], X(4)),
    reg([1, 1, 0], [One, X(5), Zero], [0, 1, 0], X(5)),
    reg([1, 0, 1], [X(4), Zero, One], [1, 0, 0], X(4)),
    reg([0, 1, 1], [Zero, One, X(6)], [0, 0, 1], X(6)),
    reg([1, 1, 1], [One, One, One], [0, 0, 0], One),
];

/// Parity key `(x1⊕x4, x2⊕x5, x3⊕x6)`.
pub fn parity_key(x: &[bool]) -> [u8; 3] {
    [(x[0] ^ x[3]) as u8, (x[1] ^ x[4]) as u8, (x[2] ^ x[5]) as u8]
}

/// Prefix key `(x1, x2, x3)`.
pub fn prefix_key(x: &[bool]) -> [u8; 3] {
    [x[0] as u8, x[1] as u8, x[2] as u8]
}

/// Outcome of checking a function or process against a golden table on all 64 inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reproduction {
    pub checked: usize,
    pub matched: usize,
    /// Inputs (as 6-bit strings) that disagreed, in increasing order.
    pub mismatches: Vec<String>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.matched == self.checked
    }

    pub fn from_checks(results: impl Iterator<Item = (Vec<bool>, bool)>) -> Self {
        let mut rep = Reproduction { checked: 0, matched: 0, mismatches: Vec::new() };
        for (x, ok) in results {
            rep.checked += 1;
            if ok {
                rep.matched += 1;
            } else {
                rep.mismatches.push(crate::boolean::format_bits(&x));
            }
        }
        rep
    }
}

pub fn all_inputs() -> impl Iterator<Item = Vec<bool>> {
    (0..64).map(|i| bits_from_index(i, 6))
}

/// Checks `f` on all 64 inputs against a table keyed by `key(x)`.
pub fn reproduce_truth_table(
    f: &BooleanFunction,
    golden: &[([u8; 3], Sym)],
    key: fn(&[bool]) -> [u8; 3],
) -> Result<Reproduction> {
    let mut results = Vec::with_capacity(64);
    for x in all_inputs() {
        let expected = golden.iter().find(|(k, _)| *k == key(&x)).map(|(_, s)| s.eval(&x));
        let ok = expected == Some(f.eval(&x)?);
        results.push((x, ok));
    }
    Ok(Reproduction::from_checks(results.into_iter()))
}

/// Runs `w` on three copies of `O_x` for every `x` and compares fixed-point
/// labels, slot outputs and the future value with `golden`.
pub fn reproduce_fixed_points(w: &TableProcess, golden: &[FixedPointRow]) -> Result<Reproduction> {
    let mut results = Vec::with_capacity(64);
    for x in all_inputs() {
        let ops = vec![LocalOperation::oracle(&x); w.num_slots()];
        let ok = match (w.evaluate(0, &ops), golden.iter().find(|r| r.key == prefix_key(&x))) {
            (Ok(e), Some(row)) => {
                let labels: Vec<usize> = e.inputs.iter().map(|i| i + 1).collect();
                let outs: Vec<usize> = row.o.iter().map(|s| s.eval(&x) as usize).collect();
                labels == row.j && e.outputs == outs && (e.future == 1) == row.output.eval(&x)
            }
            _ => false,
        };
        results.push((x, ok));
    }
    Ok(Reproduction::from_checks(results.into_iter()))
}
