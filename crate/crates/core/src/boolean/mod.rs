//! Boolean functions, classical query oracles and decision trees.

mod io;
mod measures;
mod table;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use io::{parse_truth_table, write_truth_table};
pub use measures::{
    certificate, certificate_complexity, degree, deterministic_query_complexity, evaluate_multilinear,
    multilinear_coefficients, QueryComplexitySolver,
};
pub use table::TruthTable;
pub use tree::DecisionTree;

use crate::{Error, Result};

/// Largest arity for which a truth table is materialised.
pub const DEFAULT_TABLE_LIMIT: usize = 24;

type Evaluator = dyn Fn(&[bool]) -> bool + Send + Sync;

/// Total function `{0,1}^n -> {0,1}`.
///
/// Always carries an evaluator; carries a truth table as well when the arity
/// is within the table limit. Operations that need the whole table
/// (degree, certificates, `D(f)`) refuse evaluator-only functions.
#[derive(Clone)]
pub struct BooleanFunction {
    arity: usize,
    table: Option<Arc<TruthTable>>,
    evaluator: Arc<Evaluator>,
}

impl BooleanFunction {
    pub fn from_table(table: TruthTable) -> Result<Self> {
        if table.arity() == 0 {
            return Err(Error::Precondition("a Boolean function needs arity >= 1".into()));
        }
        let arity = table.arity();
        let table = Arc::new(table);
        let lookup = Arc::clone(&table);
        Ok(BooleanFunction {
            arity,
            table: Some(table),
            evaluator: Arc::new(move |x: &[bool]| lookup.get(index_from_bits(x))),
        })
    }

    /// Wraps an evaluator, materialising the table when `arity <= DEFAULT_TABLE_LIMIT`.
    pub fn from_evaluator<F>(arity: usize, f: F) -> Result<Self>
    where
        F: Fn(&[bool]) -> bool + Send + Sync + 'static,
    {
        Self::from_evaluator_with_limit(arity, DEFAULT_TABLE_LIMIT, f)
    }

    pub fn from_evaluator_with_limit<F>(arity: usize, table_limit: usize, f: F) -> Result<Self>
    where
        F: Fn(&[bool]) -> bool + Send + Sync + 'static,
    {
        if arity == 0 {
            return Err(Error::Precondition("a Boolean function needs arity >= 1".into()));
        }
        let table = (arity <= table_limit).then(|| {
            let mut x = vec![false; arity];
            Arc::new(TruthTable::from_fn(arity, |i| {
                fill_bits(i, &mut x);
                f(&x)
            }))
        });
        Ok(BooleanFunction { arity, table, evaluator: Arc::new(f) })
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_evaluator(arity, move |_| value)
    }

    pub fn and(arity: usize) -> Result<Self> {
        Self::from_evaluator(arity, |x| x.iter().all(|&b| b))
    }

    pub fn or(arity: usize) -> Result<Self> {
        Self::from_evaluator(arity, |x| x.iter().any(|&b| b))
    }

    pub fn xor(arity: usize) -> Result<Self> {
        Self::from_evaluator(arity, |x| x.iter().fold(false, |acc, &b| acc ^ b))
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn table(&self) -> Result<&TruthTable> {
        self.table.as_deref().ok_or(Error::ArityOverBudget { arity: self.arity, limit: DEFAULT_TABLE_LIMIT })
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: x.len() });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the arity check, for hot loops that already know it.
    #[inline]
    pub fn eval_unchecked(&self, x: &[bool]) -> bool {
        match &self.table {
            Some(t) => t.get(index_from_bits(x)),
            None => (self.evaluator)(x),
        }
    }

    /// Runs the wrapped evaluator, bypassing the table.
    pub fn eval_with_evaluator(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: x.len() });
        }
        Ok((self.evaluator)(x))
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.table {
            Some(t) => write!(f, "BooleanFunction({t:?})"),
            None => write!(f, "BooleanFunction(n={}, evaluator only)", self.arity),
        }
    }
}

/// Classical query oracle `O_x : {1..n} -> {0,1}`, `O_x(i) = x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalOracle {
    source: Vec<bool>,
}

impl ClassicalOracle {
    pub fn new(source: Vec<bool>) -> Self {
        ClassicalOracle { source }
    }

    pub fn arity(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self) -> &[bool] {
        &self.source
    }

    /// Queries the 1-based index `i`.
    pub fn query(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.source.len() {
            return Err(Error::IndexOutOfRange { index: i, max: self.source.len() });
        }
        Ok(self.source[i - 1])
    }
}

/// A Boolean function with some inputs fixed.
#[derive(Clone, Debug)]
pub struct Restriction {
    base: BooleanFunction,
    /// 1-based index -> fixed bit
    assignments: BTreeMap<usize, bool>,
}

impl Restriction {
    pub fn new(base: BooleanFunction, assignments: BTreeMap<usize, bool>) -> Result<Self> {
        for &i in assignments.keys() {
            if i == 0 || i > base.arity() {
                return Err(Error::IndexOutOfRange { index: i, max: base.arity() });
            }
        }
        Ok(Restriction { base, assignments })
    }

    pub fn base(&self) -> &BooleanFunction {
        &self.base
    }

    pub fn assignments(&self) -> &BTreeMap<usize, bool> {
        &self.assignments
    }

    /// Unassigned 1-based indices, increasing.
    pub fn free_indices(&self) -> Vec<usize> {
        (1..=self.base.arity()).filter(|i| !self.assignments.contains_key(i)).collect()
    }

    /// Evaluates on values for the free indices (in increasing index order).
    pub fn eval(&self, free: &[bool]) -> Result<bool> {
        let n_free = self.base.arity() - self.assignments.len();
        if free.len() != n_free {
            return Err(Error::ArityMismatch { expected: n_free, got: free.len() });
        }
        let mut x = Vec::with_capacity(self.base.arity());
        let mut rest = free.iter();
        for i in 1..=self.base.arity() {
            match self.assignments.get(&i) {
                Some(&b) => x.push(b),
                None => x.push(*rest.next().expect("length checked above")),
            }
        }
        Ok(self.base.eval_unchecked(&x))
    }

    /// Canonical truth table of the restricted function over its free variables.
    pub fn table(&self) -> Result<TruthTable> {
        let mut table = self.base.table()?.clone();
        // Restrict from the highest index down so lower positions stay valid.
        for (&i, &b) in self.assignments.iter().rev() {
            table = table.restrict(i - 1, b);
        }
        Ok(table)
    }
}

/// `x` as a table index, `x_1` most significant.
#[inline]
pub fn index_from_bits(x: &[bool]) -> u64 {
    x.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

pub fn bits_from_index(index: u64, arity: usize) -> Vec<bool> {
    let mut x = vec![false; arity];
    fill_bits(index, &mut x);
    x
}

#[inline]
pub(crate) fn fill_bits(index: u64, x: &mut [bool]) {
    let n = x.len();
    for (i, bit) in x.iter_mut().enumerate() {
        *bit = (index >> (n - 1 - i)) & 1 == 1;
    }
}

/// Parses a string of `0`/`1` characters; `x_1` comes first.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::parse(1, format!("unexpected character {other:?} in bit string"))),
        })
        .collect()
}

pub fn format_bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
