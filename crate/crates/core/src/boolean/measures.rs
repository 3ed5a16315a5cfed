//! Degree, certificate complexity and deterministic query complexity.

use std::collections::HashMap;

use super::{index_from_bits, BooleanFunction, DecisionTree, TruthTable};
use crate::{Error, Result};

/// Coefficients of the unique multilinear polynomial of `f`.
///
/// Entry `mask` is the coefficient of the monomial over the variables whose
/// bits are set in `mask` (same bit convention as the truth table).
pub fn multilinear_coefficients(f: &BooleanFunction) -> Result<Vec<i64>> {
    let table = f.table()?;
    let mut c: Vec<i64> = table.iter().map(i64::from).collect();
    // Möbius transform over the subset lattice: c(S) = sum_{T ⊆ S} (-1)^{|S|-|T|} f(1_T).
    for bit in 0..f.arity() {
        let step = 1usize << bit;
        for mask in 0..c.len() {
            if mask & step != 0 {
                c[mask] -= c[mask ^ step];
            }
        }
    }
    Ok(c)
}

pub fn degree(f: &BooleanFunction) -> Result<usize> {
    let c = multilinear_coefficients(f)?;
    Ok(c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(mask, _)| mask.count_ones() as usize).max().unwrap_or(0))
}

/// Evaluates the multilinear polynomial with coefficients `coeffs` at `x`.
pub fn evaluate_multilinear(coeffs: &[i64], x: &[bool]) -> Result<i64> {
    if coeffs.len() != 1usize << x.len() {
        return Err(Error::ArityMismatch { expected: coeffs.len().trailing_zeros() as usize, got: x.len() });
    }
    let point = index_from_bits(x) as usize;
    // A monomial evaluates to 1 exactly when its variables are a subset of the ones in x.
    Ok(coeffs.iter().enumerate().filter(|&(mask, _)| mask & !point == 0).map(|(_, &v)| v).sum())
}

/// Minimum certificate of `f` at `x` as sorted 1-based indices.
///
/// Subsets are tried by increasing size and lexicographically within a size,
/// so the first hit is the lexicographically smallest minimum certificate.
pub fn certificate(f: &BooleanFunction, x: &[bool]) -> Result<Vec<usize>> {
    let table = f.table()?;
    let n = f.arity();
    if x.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: x.len() });
    }
    let point = index_from_bits(x);
    for size in 0..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u64, |m, &v| m | (1 << (n - 1 - v)));
            if subcube_constant(table, mask, point) {
                return Ok(combo.iter().map(|v| v + 1).collect());
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    unreachable!("the full index set is always a certificate")
}

/// `C(f) = max_x C(f, x)`.
pub fn certificate_complexity(f: &BooleanFunction) -> Result<usize> {
    let table = f.table()?;
    let n = f.arity();
    if n <= SUBCUBE_DP_LIMIT {
        return Ok(certificate_complexity_dp(table));
    }
    let mut worst = 0;
    let mut x = vec![false; n];
    for index in 0..table.len() as u64 {
        super::fill_bits(index, &mut x);
        worst = worst.max(certificate(f, &x)?.len());
    }
    Ok(worst)
}

const SUBCUBE_DP_LIMIT: usize = 10;

const MIXED: u8 = 2;

/// Subcube labels: `state[mask << n | val]` is 0/1 when `f` is constant on the
/// subcube fixing the bits in `mask` to `val`, else `MIXED`. Only entries with
/// `val ⊆ mask` are meaningful.
fn certificate_complexity_dp(table: &TruthTable) -> usize {
    let n = table.arity();
    let size = 1usize << n;
    let full = size - 1;
    let mut state = vec![MIXED; size * size];
    for val in 0..size {
        state[(full << n) | val] = table.get(val as u64) as u8;
    }
    // Supersets of a mask are numerically larger, so a descending sweep sees them first.
    for mask in (0..full).rev() {
        let free = !mask & full;
        let bit = free & free.wrapping_neg();
        let wider = mask | bit;
        let mut val = mask;
        loop {
            let lo = state[(wider << n) | val];
            let hi = state[(wider << n) | val | bit];
            state[(mask << n) | val] = if lo == hi { lo } else { MIXED };
            if val == 0 {
                break;
            }
            val = (val - 1) & mask;
        }
    }
    (0..size)
        .map(|x| {
            (0..size)
                .filter(|&mask| state[(mask << n) | (x & mask)] != MIXED)
                .map(|mask| mask.count_ones() as usize)
                .min()
                .expect("the full mask is always constant")
        })
        .max()
        .unwrap_or(0)
}

fn subcube_constant(table: &TruthTable, mask: u64, point: u64) -> bool {
    let n = table.arity();
    let target = table.get(point);
    let free = !mask & ((1u64 << n) - 1);
    let base = point & mask;
    // Walk every assignment of the free bits.
    let mut sub = free;
    loop {
        if table.get(base | sub) != target {
            return false;
        }
        if sub == 0 {
            return true;
        }
        sub = (sub - 1) & free;
    }
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for pos in (0..k).rev() {
        if combo[pos] < n - k + pos {
            combo[pos] += 1;
            for later in pos + 1..k {
                combo[later] = combo[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact `D(f)` with an optimal decision tree.
pub fn deterministic_query_complexity(f: &BooleanFunction) -> Result<(usize, DecisionTree)> {
    let mut solver = QueryComplexitySolver::new();
    let table = f.table()?;
    let depth = solver.depth(table);
    Ok((depth, solver.tree(table)))
}

/// Memoised `D` recursion keyed on canonical restricted truth tables.
///
/// A solver may be reused across functions; the memo only ever holds exact
/// values, so sharing it never changes a result.
#[derive(Default)]
pub struct QueryComplexitySolver {
    memo: HashMap<TruthTable, usize>,
}

impl QueryComplexitySolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `D(g) = 0` for constant `g`, else `1 + min_i max_b D(g|x_i=b)`.
    pub fn depth(&mut self, table: &TruthTable) -> usize {
        if table.constant_value().is_some() {
            return 0;
        }
        if let Some(&d) = self.memo.get(table) {
            return d;
        }
        let mut best = usize::MAX;
        for var in 0..table.arity() {
            let lo = table.restrict(var, false);
            let hi = table.restrict(var, true);
            // Cheap bound: neither branch can beat what we already have.
            let d0 = self.depth(&lo);
            if d0 + 1 >= best {
                continue;
            }
            let d1 = self.depth(&hi);
            best = best.min(1 + d0.max(d1));
            if best == 1 {
                break;
            }
        }
        self.memo.insert(table.clone(), best);
        best
    }

    /// Optimal tree; at each node queries the smallest index achieving `D`.
    pub fn tree(&mut self, table: &TruthTable) -> DecisionTree {
        let vars: Vec<usize> = (1..=table.arity()).collect();
        self.tree_over(table, &vars)
    }

    fn tree_over(&mut self, table: &TruthTable, vars: &[usize]) -> DecisionTree {
        if let Some(b) = table.constant_value() {
            return DecisionTree::Leaf(b);
        }
        let target = self.depth(table);
        for var in 0..table.arity() {
            let lo = table.restrict(var, false);
            let hi = table.restrict(var, true);
            if 1 + self.depth(&lo).max(self.depth(&hi)) == target {
                let mut rest = vars.to_vec();
                let index = rest.remove(var);
                return DecisionTree::query(index, self.tree_over(&lo, &rest), self.tree_over(&hi, &rest));
            }
        }
        unreachable!("memoised depth is attained by some variable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{bits_from_index, parse_bits};

    #[test]
    fn xor_and_constants() {
        let xor = BooleanFunction::xor(2).unwrap();
        assert_eq!(multilinear_coefficients(&xor).unwrap(), vec![0, 1, 1, -2]);
        assert_eq!(degree(&xor).unwrap(), 2);
        let zero = BooleanFunction::constant(4, false).unwrap();
        assert_eq!(degree(&zero).unwrap(), 0);
        assert_eq!(certificate_complexity(&zero).unwrap(), 0);
        assert_eq!(deterministic_query_complexity(&zero).unwrap().0, 0);
    }

    #[test]
    fn and_certificates() {
        let and = BooleanFunction::and(2).unwrap();
        assert_eq!(certificate(&and, &parse_bits("11").unwrap()).unwrap(), vec![1, 2]);
        assert_eq!(certificate(&and, &parse_bits("01").unwrap()).unwrap(), vec![1]);
        assert_eq!(certificate(&and, &parse_bits("10").unwrap()).unwrap(), vec![2]);
        let and3 = BooleanFunction::and(3).unwrap();
        assert_eq!(deterministic_query_complexity(&and3).unwrap().0, 3);
    }

    #[test]
    fn dp_matches_subset_search() {
        // A dictator-or-majority mix so certificates vary by input.
        let f =
            BooleanFunction::from_evaluator(
                5,
                |x| {
                    if x[0] {
                        x[1]
                    } else {
                        (x[2] as u8 + x[3] as u8 + x[4] as u8) >= 2
                    }
                },
            )
            .unwrap();
        let by_search = (0..32).map(|i| certificate(&f, &bits_from_index(i, 5)).unwrap().len()).max().unwrap();
        assert_eq!(certificate_complexity(&f).unwrap(), by_search);
        assert_eq!(by_search, 3);
    }

    #[test]
    fn witness_tree_is_optimal_and_correct() {
        let f = BooleanFunction::from_evaluator(4, |x| (x[0] && x[1]) || (x[2] ^ x[3])).unwrap();
        let (d, tree) = deterministic_query_complexity(&f).unwrap();
        assert_eq!(tree.depth(), d);
        for i in 0..16 {
            let x = bits_from_index(i, 4);
            assert_eq!(tree.eval_bits(&x).unwrap(), f.eval(&x).unwrap());
        }
    }

    #[test]
    fn next_combination_is_lexicographic() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
