//! The sequential quantum query SDP for a Boolean function and `T` queries.
//!
//! Variables are real symmetric PSD blocks `M_i^(j)` (`i = 0..=n` oracle
//! index, `j = 0..T` query step), `Γ_0`, `Γ_1`, all of size `2^n`, and a
//! scalar `ε`. Constraints, each imposed entrywise on the upper triangle:
//!
//! * `Σ_i M_i^(0) = E_0`
//! * `Σ_i M_i^(j) = Σ_i E_i ∘ M_i^(j−1)` for `1 ≤ j < T`
//! * `Γ_0 + Γ_1 = Σ_i E_i ∘ M_i^(T−1)`
//! * `Γ_{f(x)}[x,x] + ε = 1` for every `x` (the only nontrivial entries of
//!   `F_z ∘ Γ_z = (1−ε) F_z`)
//!
//! The objective is to minimise `ε`.

mod sdpa;
mod solution;

use nalgebra::DMatrix;
use serde::Serialize;

pub use sdpa::{export_sdpa, parse_sdpa, render_sdpa, SdpaProblem};
pub use solution::{verify_solution, Solution, VerificationReport, DEFAULT_TOL};

use crate::boolean::BooleanFunction;
use crate::{Error, Result};

/// Largest supported input size (blocks of dimension 256).
pub const MAX_SDP_ARITY: usize = 8;

/// `E_0` (all ones), `E_i[x,y] = (−1)^{x_i + y_i}`, and the diagonal indicators `F_z`.
#[derive(Clone, Debug)]
pub struct OracleMatrices {
    n: usize,
    values: Vec<bool>,
}

impl OracleMatrices {
    pub fn new(f: &BooleanFunction) -> Result<Self> {
        let table = f.table()?;
        Ok(OracleMatrices { n: f.arity(), values: table.iter().collect() })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `E_i[x,y]`; `i = 0` is the all-ones matrix, bit `x_i` uses the
    /// `x_1`-most-significant convention.
    #[inline]
    pub fn e(&self, i: usize, x: usize, y: usize) -> f64 {
        if i == 0 {
            return 1.0;
        }
        let shift = self.n - i;
        if ((x ^ y) >> shift) & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn e_matrix(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |x, y| self.e(i, x, y))
    }

    /// Diagonal of `F_z`.
    pub fn f_diag(&self, z: bool) -> Vec<f64> {
        self.values.iter().map(|&v| if v == z { 1.0 } else { 0.0 }).collect()
    }

    pub fn value(&self, x: usize) -> bool {
        self.values[x]
    }

    /// `E_i ∘ E_i = E_0` for every `i`.
    pub fn hadamard_squares_are_all_ones(&self) -> bool {
        let d = self.dim();
        (0..=self.n).all(|i| (0..d).all(|x| (0..d).all(|y| self.e(i, x, y) * self.e(i, x, y) == 1.0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    Psd,
    /// Diagonal (LP) block; used for `ε`.
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub name: String,
    pub size: usize,
    pub kind: BlockKind,
}

/// Coefficient on entry `(row, col)` of a block, `row ≤ col`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Term {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub coeff: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstraintGroup {
    /// `Σ_i M_i^(0) = E_0`
    Initial,
    /// `Σ_i M_i^(j) = Σ_i E_i ∘ M_i^(j−1)`
    Step(usize),
    /// `Γ_0 + Γ_1 = Σ_i E_i ∘ M_i^(T−1)`
    Final,
    /// `Γ_{f(x)}[x,x] + ε = 1`
    Output,
    /// Read back from SDPA text, where groups are not recorded.
    Imported,
}

/// `Σ_terms coeff · Y_block[row, col] = rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub group: ConstraintGroup,
    pub row: usize,
    pub col: usize,
    pub terms: Vec<Term>,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdpInstance {
    pub n: usize,
    pub queries: usize,
    pub blocks: Vec<Block>,
    pub constraints: Vec<Constraint>,
    /// Minimise `Σ coeff · Y_block[row, col]`.
    pub objective: Vec<Term>,
}

impl SdpInstance {
    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.name == name)
    }

    /// PSD blocks, `Γ_0` and `Γ_1` included.
    pub fn matrix_variables(&self) -> usize {
        self.blocks.iter().filter(|b| b.kind == BlockKind::Psd).count()
    }

    /// The `(n+1)·T` blocks `M_i^(j)`.
    pub fn query_blocks(&self) -> usize {
        (self.n + 1) * self.queries
    }

    /// Index of the `ε` block (the last block).
    pub fn epsilon_block(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Rebuilds an instance from SDPA data in the layout written by
    /// [`export_sdpa`]: `(n+1)·T + 2` PSD blocks of equal size `2^n`
    /// followed by a single 1×1 diagonal block for `ε`.
    pub fn from_sdpa(p: &SdpaProblem) -> Result<Self> {
        let shape = |msg: &str| Error::Shape(format!("SDPA layout: {msg}"));
        let (&last, psd) = p.block_sizes.split_last().ok_or_else(|| shape("no blocks"))?;
        if last != -1 {
            return Err(shape("the last block must be the 1x1 diagonal epsilon block"));
        }
        let d = *psd.first().ok_or_else(|| shape("no matrix blocks"))?;
        if d <= 0 || !(d as u64).is_power_of_two() || psd.iter().any(|&s| s != d) {
            return Err(shape("matrix blocks must share one power-of-two size"));
        }
        let n = (d as u64).trailing_zeros() as usize;
        if psd.len() <= 2 || (psd.len() - 2) % (n + 1) != 0 {
            return Err(shape("block count does not match (n+1)T + 2"));
        }
        let queries = (psd.len() - 2) / (n + 1);
        let blocks = p
            .block_names
            .iter()
            .zip(&p.block_sizes)
            .map(|(name, &s)| Block {
                name: name.clone(),
                size: s.unsigned_abs() as usize,
                kind: if s < 0 { BlockKind::Diagonal } else { BlockKind::Psd },
            })
            .collect();
        let constraints = p
            .constraints()
            .into_iter()
            .map(|(terms, rhs)| {
                let (row, col) = terms.first().map_or((0, 0), |t| (t.row, t.col));
                Constraint { group: ConstraintGroup::Imported, row, col, terms, rhs }
            })
            .collect();
        Ok(SdpInstance { n, queries, blocks, constraints, objective: p.objective() })
    }
}

/// Name of the block holding `M_i^(j)`.
pub fn m_name(i: usize, j: usize) -> String {
    format!("M_{i}_{j}")
}

pub fn build_sdp(f: &BooleanFunction, queries: usize) -> Result<SdpInstance> {
    let n = f.arity();
    if n > MAX_SDP_ARITY {
        return Err(Error::ArityOverBudget { arity: n, limit: MAX_SDP_ARITY });
    }
    if queries == 0 {
        return Err(Error::Precondition("the program needs at least one query".into()));
    }
    let oracle = OracleMatrices::new(f)?;
    assert!(oracle.hadamard_squares_are_all_ones(), "E_i ∘ E_i must equal E_0");
    let d = oracle.dim();

    let mut blocks = Vec::new();
    for j in 0..queries {
        for i in 0..=n {
            blocks.push(Block { name: m_name(i, j), size: d, kind: BlockKind::Psd });
        }
    }
    let gamma = blocks.len();
    blocks.push(Block { name: "Gamma_0".into(), size: d, kind: BlockKind::Psd });
    blocks.push(Block { name: "Gamma_1".into(), size: d, kind: BlockKind::Psd });
    let eps = blocks.len();
    blocks.push(Block { name: "epsilon".into(), size: 1, kind: BlockKind::Diagonal });
    let m_block = |i: usize, j: usize| j * (n + 1) + i;

    let mut constraints = Vec::new();
    for r in 0..d {
        for c in r..d {
            let terms = (0..=n).map(|i| Term { block: m_block(i, 0), row: r, col: c, coeff: 1.0 }).collect();
            constraints.push(Constraint {
                group: ConstraintGroup::Initial,
                row: r,
                col: c,
                terms,
                rhs: oracle.e(0, r, c),
            });
        }
    }
    for j in 1..=queries {
        let group = if j < queries { ConstraintGroup::Step(j) } else { ConstraintGroup::Final };
        for r in 0..d {
            for c in r..d {
                let mut terms: Vec<Term> = if j < queries {
                    (0..=n).map(|i| Term { block: m_block(i, j), row: r, col: c, coeff: 1.0 }).collect()
                } else {
                    (0..2).map(|z| Term { block: gamma + z, row: r, col: c, coeff: 1.0 }).collect()
                };
                terms.extend((0..=n).map(|i| Term {
                    block: m_block(i, j - 1),
                    row: r,
                    col: c,
                    coeff: -oracle.e(i, r, c),
                }));
                constraints.push(Constraint { group, row: r, col: c, terms, rhs: 0.0 });
            }
        }
    }
    for x in 0..d {
        let z = oracle.value(x) as usize;
        constraints.push(Constraint {
            group: ConstraintGroup::Output,
            row: x,
            col: x,
            terms: vec![
                Term { block: gamma + z, row: x, col: x, coeff: 1.0 },
                Term { block: eps, row: 0, col: 0, coeff: 1.0 },
            ],
            rhs: 1.0,
        });
    }
    Ok(SdpInstance {
        n,
        queries,
        blocks,
        constraints,
        objective: vec![Term { block: eps, row: 0, col: 0, coeff: 1.0 }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::BooleanFunction;

    #[test]
    fn e_matrix_signs() {
        let f = BooleanFunction::xor(6).unwrap();
        let o = OracleMatrices::new(&f).unwrap();
        // x = 100000 is index 32
        assert_eq!(o.e(1, 32, 0), -1.0);
        assert_eq!(o.e(2, 32, 0), 1.0);
        assert_eq!(o.e(6, 1, 0), -1.0);
        assert_eq!(o.e(0, 5, 9), 1.0);
        assert!(o.e_matrix(3).transpose() == o.e_matrix(3));
    }

    #[test]
    fn sizes_for_two_bits() {
        let f = BooleanFunction::xor(2).unwrap();
        let inst = build_sdp(&f, 2).unwrap();
        assert_eq!(inst.matrix_variables(), 3 * 2 + 2);
        // (T+1)·N(N+1)/2 + N with N = 4
        assert_eq!(inst.constraints.len(), 3 * 10 + 4);
        assert!(build_sdp(&f, 0).is_err());
        assert!(build_sdp(&BooleanFunction::xor(9).unwrap(), 1).is_err());
    }
}
