use nalgebra::DMatrix;

/// `exp(C)`. Skew 2×2 matrices use the rotation closed form; everything
/// else goes through Padé scaling and squaring.
pub fn matrix_exponential(c: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(c.is_square(), "matrix exponential of a non-square matrix");
    if c.nrows() == 2 && c[(0, 0)] == 0.0 && c[(1, 1)] == 0.0 && c[(0, 1)] == -c[(1, 0)] {
        let (s, co) = c[(0, 1)].sin_cos();
        return DMatrix::from_row_slice(2, 2, &[co, s, -s, co]);
    }
    c.clone().exp()
}

/// `exp(C)` for a row-major `d × d` matrix.
pub fn matrix_exponential_flat(d: usize, c: &[f64]) -> DMatrix<f64> {
    matrix_exponential(&DMatrix::from_row_slice(d, d, c))
}
