use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Entries smaller than this in modulus are dropped.
pub const PRUNE: f64 = 1e-14;

/// Largest dimension converted to a dense matrix for spectral checks.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledSpace {
    pub label: String,
    pub dim: usize,
}

impl LabeledSpace {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        LabeledSpace { label: label.into(), dim }
    }
}

/// Sparse complex matrix on a tensor product of labelled spaces.
///
/// Basis index of a tensor product is row-major in `spaces` (first space
/// most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    spaces: Vec<LabeledSpace>,
    dim: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl ChoiMatrix {
    pub fn zeros(spaces: Vec<LabeledSpace>) -> Result<Self> {
        for (i, s) in spaces.iter().enumerate() {
            if s.dim == 0 {
                return Err(Error::Shape(format!("space `{}` has dimension 0", s.label)));
            }
            if spaces[..i].iter().any(|t| t.label == s.label) {
                return Err(Error::Shape(format!("label `{}` appears twice", s.label)));
            }
        }
        let dim = spaces
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.dim))
            .ok_or_else(|| Error::Shape("total dimension overflows".into()))?;
        Ok(ChoiMatrix { spaces, dim, entries: BTreeMap::new() })
    }

    /// `|v⟩⟨v|`.
    pub fn from_ket(spaces: Vec<LabeledSpace>, ket: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(spaces)?;
        if ket.len() != m.dim {
            return Err(Error::Shape(format!("ket of length {} for dimension {}", ket.len(), m.dim)));
        }
        let support: Vec<(usize, Complex64)> =
            ket.iter().copied().enumerate().filter(|(_, v)| v.norm() >= PRUNE).collect();
        for &(r, a) in &support {
            for &(c, b) in &support {
                m.add(r, c, a * b.conj());
            }
        }
        Ok(m)
    }

    pub fn from_dense(spaces: Vec<LabeledSpace>, data: &DMatrix<Complex64>) -> Result<Self> {
        let mut m = Self::zeros(spaces)?;
        if data.nrows() != m.dim || data.ncols() != m.dim {
            return Err(Error::Shape(format!("{}×{} matrix for dimension {}", data.nrows(), data.ncols(), m.dim)));
        }
        for r in 0..m.dim {
            for c in 0..m.dim {
                m.add(r, c, data[(r, c)]);
            }
        }
        Ok(m)
    }

    /// The 1×1 matrix `[v]` on no spaces.
    pub fn scalar(v: Complex64) -> Self {
        let mut m = ChoiMatrix { spaces: Vec::new(), dim: 1, entries: BTreeMap::new() };
        m.add(0, 0, v);
        m
    }

    pub fn spaces(&self) -> &[LabeledSpace] {
        &self.spaces
    }

    pub fn labels(&self) -> Vec<&str> {
        self.spaces.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries.get(&(r, c)).copied().unwrap_or_default()
    }

    pub fn add(&mut self, r: usize, c: usize, v: Complex64) {
        debug_assert!(r < self.dim && c < self.dim);
        let slot = self.entries.entry((r, c)).or_default();
        *slot += v;
        if slot.norm() < PRUNE {
            self.entries.remove(&(r, c));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.spaces.iter().position(|s| s.label == label)
    }

    /// Digits of a basis index, one per space.
    pub fn split_index(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.spaces.len()];
        for (d, s) in digits.iter_mut().zip(&self.spaces).rev() {
            *d = index % s.dim;
            index /= s.dim;
        }
        digits
    }

    pub fn join_index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.spaces).fold(0, |acc, (&d, s)| acc * s.dim + d)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.iter().filter(|((r, c), _)| r == c).map(|(_, v)| *v).sum()
    }

    /// `Tr(ρ²)` for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.entries.values().map(|v| v.norm_sqr()).sum()
    }

    /// Sum of moduli of the off-diagonal entries.
    pub fn off_diagonal_mass(&self) -> f64 {
        self.entries.iter().filter(|((r, c), _)| r != c).map(|(_, v)| v.norm()).sum()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.off_diagonal_mass() <= tol
    }

    pub fn max_abs_diff(&self, other: &ChoiMatrix) -> f64 {
        let mut keys: Vec<&(usize, usize)> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter().map(|&(r, c)| (self.get(r, c) - other.get(r, c)).norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.entries.iter().map(|(&(r, c), v)| (v - self.get(c, r).conj()).norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.dim > DENSE_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "dense matrix dimension",
                needed: self.dim as u128,
                budget: DENSE_LIMIT as u128,
            });
        }
        let mut d = DMatrix::zeros(self.dim, self.dim);
        for (&(r, c), &v) in &self.entries {
            d[(r, c)] = v;
        }
        Ok(d)
    }

    /// Indices of rows or columns holding a nonzero entry.
    fn support(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.entries.keys().flat_map(|&(r, c)| [r, c]).collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }

    /// Eigenvalues of the Hermitian part restricted to the support. Padding
    /// zeros are omitted; they are eigenvalues whenever the support is proper.
    pub fn support_eigenvalues(&self) -> Result<Vec<f64>> {
        let support = self.support();
        if support.len() > DENSE_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "dense support dimension",
                needed: support.len() as u128,
                budget: DENSE_LIMIT as u128,
            });
        }
        let d = DMatrix::from_fn(support.len(), support.len(), |i, j| {
            let a = self.get(support[i], support[j]);
            let b = self.get(support[j], support[i]).conj();
            (a + b) * 0.5
        });
        Ok(d.symmetric_eigenvalues().iter().copied().collect())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = self.support_eigenvalues()?;
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let padded = self.support().len() < self.dim;
        Ok(if padded { min.min(0.0) } else { min })
    }

    /// Partial trace over the named spaces.
    pub fn partial_trace(&self, traced: &[&str]) -> Result<ChoiMatrix> {
        for l in traced {
            if self.position(l).is_none() {
                return Err(Error::Shape(format!("no space labelled `{l}`")));
            }
        }
        let keep: Vec<usize> =
            (0..self.spaces.len()).filter(|&p| !traced.contains(&self.spaces[p].label.as_str())).collect();
        let mut out = ChoiMatrix::zeros(keep.iter().map(|&p| self.spaces[p].clone()).collect())?;
        for (&(r, c), &v) in &self.entries {
            let (rd, cd) = (self.split_index(r), self.split_index(c));
            let traced_match = (0..self.spaces.len()).filter(|p| !keep.contains(p)).all(|p| rd[p] == cd[p]);
            if traced_match {
                let rk: Vec<usize> = keep.iter().map(|&p| rd[p]).collect();
                let ck: Vec<usize> = keep.iter().map(|&p| cd[p]).collect();
                let (ri, ci) = (out.join_index(&rk), out.join_index(&ck));
                out.add(ri, ci, v);
            }
        }
        Ok(out)
    }

    /// Same operator with its spaces listed in `order`.
    pub fn permuted(&self, order: &[&str]) -> Result<ChoiMatrix> {
        let perm: Vec<usize> = order
            .iter()
            .map(|l| self.position(l).ok_or_else(|| Error::Shape(format!("no space labelled `{l}`"))))
            .collect::<Result<_>>()?;
        if perm.len() != self.spaces.len() {
            return Err(Error::Shape("permutation must list every space once".into()));
        }
        let mut out = ChoiMatrix::zeros(perm.iter().map(|&p| self.spaces[p].clone()).collect())?;
        for (&(r, c), &v) in &self.entries {
            let (rd, cd) = (self.split_index(r), self.split_index(c));
            let rp: Vec<usize> = perm.iter().map(|&p| rd[p]).collect();
            let cp: Vec<usize> = perm.iter().map(|&p| cd[p]).collect();
            let (ri, ci) = (out.join_index(&rp), out.join_index(&cp));
            out.add(ri, ci, v);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> ChoiMatrix {
        let mut out = ChoiMatrix { spaces: self.spaces.clone(), dim: self.dim, entries: BTreeMap::new() };
        for (&(r, c), &v) in &self.entries {
            out.add(r, c, v * s);
        }
        out
    }

    pub fn sub(&self, other: &ChoiMatrix) -> Result<ChoiMatrix> {
        if self.spaces != other.spaces {
            return Err(Error::Shape("operands live on different spaces".into()));
        }
        let mut out = self.clone();
        for (&(r, c), &v) in &other.entries {
            out.add(r, c, -v);
        }
        Ok(out)
    }
}

/// Trace distance `½‖ρ − σ‖₁` of operators on the same spaces.
pub fn trace_distance(rho: &ChoiMatrix, sigma: &ChoiMatrix) -> Result<f64> {
    let diff = rho.sub(sigma)?;
    if diff.nnz() == 0 {
        return Ok(0.0);
    }
    Ok(0.5 * diff.support_eigenvalues()?.iter().map(|e| e.abs()).sum::<f64>())
}

/// Free row index, free column index and value of one entry.
type FreeEntry = (usize, usize, Complex64);

/// Link product over the labels shared by `a` and `b`:
/// `(a * b)[xz, x'z'] = Σ_{y,y'} a[x y, x' y'] · b[y z, y' z']`,
/// i.e. `Tr_Y[(a^{T_Y} ⊗ 1)(1 ⊗ b)]`. The result lists the unshared spaces
/// of `a` followed by those of `b`.
pub fn link_product(a: &ChoiMatrix, b: &ChoiMatrix) -> Result<ChoiMatrix> {
    let mut shared_a = Vec::new();
    let mut shared_b = Vec::new();
    for (pa, sa) in a.spaces.iter().enumerate() {
        if let Some(pb) = b.position(&sa.label) {
            let db = b.spaces[pb].dim;
            if db != sa.dim {
                return Err(Error::LabelDimension { label: sa.label.clone(), left: sa.dim, right: db });
            }
            shared_a.push(pa);
            shared_b.push(pb);
        }
    }
    let free_a: Vec<usize> = (0..a.spaces.len()).filter(|p| !shared_a.contains(p)).collect();
    let free_b: Vec<usize> = (0..b.spaces.len()).filter(|p| !shared_b.contains(p)).collect();
    let spaces =
        free_a.iter().map(|&p| a.spaces[p].clone()).chain(free_b.iter().map(|&p| b.spaces[p].clone())).collect();
    let mut out = ChoiMatrix::zeros(spaces)?;
    let project = |m: &ChoiMatrix, idx: usize, positions: &[usize]| -> usize {
        let digits = m.split_index(idx);
        positions.iter().fold(0, |acc, &p| acc * m.spaces[p].dim + digits[p])
    };
    // b grouped by its shared (row, column) digits, in the order of `a`'s spaces.
    let mut by_shared: HashMap<(usize, usize), Vec<FreeEntry>> = HashMap::new();
    for (&(r, c), &v) in &b.entries {
        let key = (project(b, r, &shared_b), project(b, c, &shared_b));
        by_shared.entry(key).or_default().push((project(b, r, &free_b), project(b, c, &free_b), v));
    }
    let free_b_dim: usize = free_b.iter().map(|&p| b.spaces[p].dim).product();
    for (&(r, c), &v) in &a.entries {
        let key = (project(a, r, &shared_a), project(a, c, &shared_a));
        if let Some(terms) = by_shared.get(&key) {
            let (xr, xc) = (project(a, r, &free_a), project(a, c, &free_a));
            for &(zr, zc, w) in terms {
                out.add(xr * free_b_dim + zr, xc * free_b_dim + zc, v * w);
            }
        }
    }
    Ok(out)
}
