use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChoiMatrix, LabeledSpace};
use crate::{Error, Result};

/// Query register dimension for 6-bit inputs: `|0⟩` plus one state per bit.
pub const QUERY_DIM: usize = 7;

/// `Õ_x|0⟩ = |0⟩`, `Õ_x|i⟩ = (−1)^{x_i}|i⟩` for `i = 1..=n`.
pub fn phase_oracle(x: &[bool]) -> DMatrix<Complex64> {
    let mut diag = vec![Complex64::new(1.0, 0.0)];
    diag.extend(x.iter().map(|&b| Complex64::new(if b { -1.0 } else { 1.0 }, 0.0)));
    DMatrix::from_diagonal(&DVector::from_vec(diag))
}

/// How `H_{i,j}` is extended beyond its first two columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Completion {
    /// Gram–Schmidt over `e_0, …, e_{d−1}` in index order.
    #[default]
    GramSchmidt,
    /// Gram–Schmidt over seeded random complex vectors.
    Random(u64),
}

/// Unitary with `H|0⟩ = (|i⟩+|j⟩)/√2` and `H|1⟩ = (|i⟩−|j⟩)/√2`.
pub fn h_ij(i: usize, j: usize, dim: usize, completion: Completion) -> Result<DMatrix<Complex64>> {
    if i == j {
        return Err(Error::Precondition(format!("H_{{i,j}} needs i ≠ j, got {i} twice")));
    }
    if i >= dim || j >= dim || dim < 2 {
        return Err(Error::IndexOutOfRange { index: i.max(j), max: dim.saturating_sub(1) });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = DVector::zeros(dim);
    plus[i] = Complex64::new(s, 0.0);
    plus[j] = Complex64::new(s, 0.0);
    let mut minus = DVector::zeros(dim);
    minus[i] = Complex64::new(s, 0.0);
    minus[j] = Complex64::new(-s, 0.0);
    let mut columns = vec![plus, minus];
    let mut rng = match completion {
        Completion::GramSchmidt => None,
        Completion::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut next_basis = 0;
    while columns.len() < dim {
        let candidate = match rng.as_mut() {
            None => {
                let mut e = DVector::zeros(dim);
                e[next_basis] = Complex64::new(1.0, 0.0);
                next_basis += 1;
                e
            }
            Some(rng) => DVector::from_fn(dim, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)),
        };
        let mut w = candidate;
        // Two passes keep the columns orthonormal to machine precision.
        for _ in 0..2 {
            for v in &columns {
                let overlap = v.dotc(&w);
                w -= v * overlap;
            }
        }
        let norm = w.norm();
        if norm > 1e-6 {
            columns.push(w / Complex64::new(norm, 0.0));
        }
    }
    Ok(DMatrix::from_columns(&columns))
}

/// `‖U†U − 1‖_max`.
pub fn unitarity_error(u: &DMatrix<Complex64>) -> f64 {
    let p = u.adjoint() * u;
    let id = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
    (p - id).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `H† Õ_x H |0⟩` with `H = H_{i,j}`: equals `(−1)^{x_i}|x_i ⊕ x_j⟩` for any completion.
pub fn parity_query(i: usize, j: usize, x: &[bool], completion: Completion) -> Result<DVector<Complex64>> {
    let h = h_ij(i, j, x.len() + 1, completion)?;
    let mut e0 = DVector::zeros(x.len() + 1);
    e0[0] = Complex64::new(1.0, 0.0);
    Ok(h.adjoint() * phase_oracle(x) * &h * e0)
}

/// Choi matrix `Σ_{i,i'} |i⟩⟨i'| ⊗ V|i⟩⟨i'|V†` of a linear map `V : input → output`.
pub fn choi_of_operator(input: LabeledSpace, output: LabeledSpace, v: &DMatrix<Complex64>) -> Result<ChoiMatrix> {
    if v.ncols() != input.dim || v.nrows() != output.dim {
        return Err(Error::Shape(format!(
            "{}×{} operator from {} to {} dimensions",
            v.nrows(),
            v.ncols(),
            input.dim,
            output.dim
        )));
    }
    let d_out = output.dim;
    let mut ket = vec![Complex64::default(); input.dim * d_out];
    for i in 0..input.dim {
        for o in 0..d_out {
            ket[i * d_out + o] = v[(o, i)];
        }
    }
    ChoiMatrix::from_ket(vec![input, output], &ket)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_signs() {
        let o = phase_oracle(&[true, false, false, false, false, false]);
        assert_eq!(o[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(o[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(o[(2, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(phase_oracle(&[false; 6]), DMatrix::identity(7, 7));
    }

    #[test]
    fn both_completions_are_unitary() {
        for c in [Completion::GramSchmidt, Completion::Random(3)] {
            let h = h_ij(1, 4, QUERY_DIM, c).unwrap();
            assert!(unitarity_error(&h) < 1e-12);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            assert!((h[(1, 0)].re - s).abs() < 1e-15 && (h[(4, 1)].re + s).abs() < 1e-15);
        }
        assert!(h_ij(2, 2, QUERY_DIM, Completion::GramSchmidt).is_err());
    }

    #[test]
    fn applying_h_twice_does_not_uncompute() {
        // H·Õ·H|0⟩ is not (−1)^{x_i}|x_i ⊕ x_j⟩ in general; the adjoint is required.
        let x = [false, false, false, true, false, false];
        let h = h_ij(1, 4, QUERY_DIM, Completion::GramSchmidt).unwrap();
        let mut e0 = DVector::zeros(QUERY_DIM);
        e0[0] = Complex64::new(1.0, 0.0);
        let literal = &h * phase_oracle(&x) * &h * &e0;
        let mut expected = DVector::zeros(QUERY_DIM);
        expected[1] = Complex64::new(1.0, 0.0);
        assert!((literal - &expected).norm() > 0.5);
        let uncomputed = parity_query(1, 4, &x, Completion::GramSchmidt).unwrap();
        assert!((uncomputed - expected).norm() < 1e-12);
    }
}
