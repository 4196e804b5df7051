//! Small shared wrappers around nalgebra decompositions.

use crate::error::{Error, Result};
use crate::hilbert::OperatorSum;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Columns of the returned matrix are the matching eigenvectors.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    sort_eigenpairs(eig.eigenvalues.as_slice(), &eig.eigenvectors)
}

/// Same for a real symmetric matrix; eigenvectors are promoted to complex.
pub(crate) fn symmetric_eigen_real(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let complex = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    sort_eigenpairs(eig.eigenvalues.as_slice(), &complex)
}

fn sort_eigenpairs(
    values: &[f64],
    vectors: &DMatrix<Complex64>,
) -> (Vec<f64>, DMatrix<Complex64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = DMatrix::from_columns(
        &order.iter().map(|&i| vectors.column(i)).collect::<Vec<_>>(),
    );
    (sorted_values, sorted_vectors)
}

/// Spectral norm (largest |eigenvalue|) of a Hermitian operator, computed
/// on its dense support materialization with the offset included.
pub(crate) fn spectral_norm(h: &OperatorSum) -> Result<f64> {
    if h.terms().is_empty() {
        return Ok(h.offset().abs());
    }
    let (_, m) = h.to_dense_on_support()?;
    let (values, _) = hermitian_eigen(&m);
    values
        .iter()
        .map(|v| v.abs())
        .max_by(f64::total_cmp)
        .ok_or_else(|| Error::Structural("empty spectrum".into()))
}
