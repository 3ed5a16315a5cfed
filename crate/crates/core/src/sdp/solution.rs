use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BlockKind, SdpInstance};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;

/// A candidate assignment: `ε` plus one dense row-major matrix per named block.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub epsilon: f64,
    pub blocks: BTreeMap<String, Vec<Vec<f64>>>,
}

impl Solution {
    /// All PSD blocks of the instance set to zero.
    pub fn zeros(inst: &SdpInstance) -> Self {
        let blocks = inst
            .blocks
            .iter()
            .filter(|b| b.kind == BlockKind::Psd)
            .map(|b| (b.name.clone(), vec![vec![0.0; b.size]; b.size]))
            .collect();
        Solution { epsilon: 0.0, blocks }
    }

    pub fn set(&mut self, name: &str, m: &DMatrix<f64>) {
        let rows = (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect();
        self.blocks.insert(name.to_string(), rows);
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Largest constraint violation, or block asymmetry if larger.
    pub max_residual: f64,
    /// Index of the worst constraint, `None` when asymmetry dominates.
    pub worst_constraint: Option<usize>,
    pub max_asymmetry: f64,
    /// Smallest eigenvalue over all PSD blocks (symmetrised).
    pub min_eigenvalue: f64,
    pub epsilon: f64,
    pub tol: f64,
    pub feasible: bool,
}

pub fn verify_solution(inst: &SdpInstance, sol: &Solution, tol: f64) -> Result<VerificationReport> {
    let eps_block = inst.epsilon_block();
    let mut mats: Vec<Option<DMatrix<f64>>> = Vec::with_capacity(inst.blocks.len());
    for (k, b) in inst.blocks.iter().enumerate() {
        if k == eps_block {
            mats.push(None);
            continue;
        }
        let rows =
            sol.blocks.get(&b.name).ok_or_else(|| Error::Shape(format!("solution is missing block {}", b.name)))?;
        if rows.len() != b.size || rows.iter().any(|r| r.len() != b.size) {
            return Err(Error::Shape(format!("block {} must be {}x{}", b.name, b.size, b.size)));
        }
        mats.push(Some(DMatrix::from_fn(b.size, b.size, |r, c| rows[r][c])));
    }
    if let Some(extra) = sol.blocks.keys().find(|k| inst.block_index(k).is_none()) {
        return Err(Error::Shape(format!("solution has unknown block {extra}")));
    }
    let value = |block: usize, r: usize, c: usize| -> f64 {
        match &mats[block] {
            Some(m) => m[(r, c)],
            None => sol.epsilon,
        }
    };

    let (worst_constraint, residual) = inst
        .constraints
        .par_iter()
        .enumerate()
        .map(|(k, con)| {
            let lhs: f64 = con.terms.iter().map(|t| t.coeff * value(t.block, t.row, t.col)).sum();
            (k, (lhs - con.rhs).abs())
        })
        .reduce(|| (usize::MAX, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let residual = residual.max(0.0);

    let spectra: Vec<(f64, f64)> = mats
        .par_iter()
        .flatten()
        .map(|m| {
            let asym = (m - m.transpose()).amax();
            let sym = (m + m.transpose()) * 0.5;
            let min = SymmetricEigen::new(sym).eigenvalues.min();
            (asym, min)
        })
        .collect();
    let max_asymmetry = spectra.iter().map(|s| s.0).fold(0.0, f64::max);
    let min_eigenvalue = spectra.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);

    let (max_residual, worst_constraint) = if max_asymmetry > residual {
        (max_asymmetry, None)
    } else {
        (residual, (worst_constraint != usize::MAX).then_some(worst_constraint))
    };
    let feasible = max_residual <= tol && min_eigenvalue >= -tol;
    Ok(VerificationReport {
        max_residual,
        worst_constraint,
        max_asymmetry,
        min_eigenvalue,
        epsilon: sol.epsilon,
        tol,
        feasible,
    })
}
