//! Small linear-algebra helpers: hermitian eigendecomposition, unitary
//! exponentials and 2×2 Pauli utilities.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use crate::fockspace::C64;

/// Eigendecomposition `H = V diag(E) V†` of a hermitian matrix, eigenvalues
/// ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn new(h: &DMatrix<C64>) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let vectors = DMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        Self { values, vectors }
    }

    /// `e^{-i H t} v`.
    pub fn evolve(&self, v: &DVector<C64>, t: f64) -> DVector<C64> {
        let mut coeffs = self.vectors.ad_mul(v);
        for (c, &e) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        &self.vectors * coeffs
    }

    /// `e^{-i H t}` as a dense matrix.
    pub fn unitary(&self, t: f64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (mut col, &e) in scaled.column_iter_mut().zip(self.values.iter()) {
            col *= C64::from_polar(1.0, -e * t);
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn sigma_x() -> Matrix2<C64> {
    Matrix2::new(C64::ZERO, C64::ONE, C64::ONE, C64::ZERO)
}

pub fn sigma_y() -> Matrix2<C64> {
    Matrix2::new(C64::ZERO, -C64::I, C64::I, C64::ZERO)
}

pub fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE)
}

/// Largest singular value of a 2×2 matrix.
pub fn spectral_norm2(a: &Matrix2<C64>) -> f64 {
    let b = a.adjoint() * a;
    let half_trace = 0.5 * (b[(0, 0)].re + b[(1, 1)].re);
    let det = (b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)]).re;
    let disc = (half_trace * half_trace - det).max(0.0);
    (half_trace + disc.sqrt()).max(0.0).sqrt()
}

/// `‖U†U − 1‖₂` for a 2×2 matrix.
pub fn unitarity_defect2(u: &Matrix2<C64>) -> f64 {
    spectral_norm2(&(u.adjoint() * u - Matrix2::identity()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_of_diagonal() {
        let a = Matrix2::new(C64::new(3.0, 0.0), C64::ZERO, C64::ZERO, C64::new(0.0, -5.0));
        assert!((spectral_norm2(&a) - 5.0).abs() < 1e-14);
        assert!((spectral_norm2(&sigma_y()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_reconstructs_hermitian() {
        let h = DMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.5, 0.2),
                C64::new(0.0, -1.0),
                C64::new(0.5, -0.2),
                C64::new(-2.0, 0.0),
                C64::new(0.3, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.3, 0.0),
                C64::new(0.7, 0.0),
            ],
        );
        let eig = HermitianEigen::new(&h);
        let rebuilt = &eig.vectors
            * DMatrix::from_diagonal(&eig.values.map(C64::from))
            * eig.vectors.adjoint();
        assert!((rebuilt - &h).norm() < 1e-13);
        assert!(eig.values[0] <= eig.values[1] && eig.values[1] <= eig.values[2]);
        let u = eig.unitary(0.37);
        assert!((u.adjoint() * &u - DMatrix::identity(3, 3)).norm() < 1e-13);
    }
}
