//! Small dense vector helpers. Points in this crate are plain `Vec<f64>` /
//! `&[f64]`; nalgebra is only pulled in where a factorization is needed.

use nalgebra::DMatrix;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > 1e-300).then(|| scale(a, 1.0 / n))
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

pub fn rows_to_matrix(rows: &[Vec<f64>], ncols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

/// Orthonormal basis of the null space of the matrix whose rows are `rows`,
/// computed from the SVD. Singular values below `tol * max(1, σ_max)` count
/// as zero.
pub fn null_space(rows: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return (0..dim).map(|i| unit(dim, i)).collect();
    }
    // Pad to a square-or-taller matrix so the SVD yields the full V.
    let m = rows.len().max(dim);
    let a = DMatrix::from_fn(m, dim, |i, j| if i < rows.len() { rows[i][j] } else { 0.0 });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    (0..dim)
        .filter(|&k| svd.singular_values[k] <= cut)
        .map(|k| v_t.row(k).iter().cloned().collect())
        .collect()
}

/// Numerical rank of the row set.
pub fn rank(rows: &[Vec<f64>], dim: usize, tol: f64) -> usize {
    dim - null_space(rows, dim, tol).len()
}

/// Completes an orthonormal family `basis` (possibly empty) to an
/// orthonormal basis of its orthogonal complement in `R^dim`.
pub fn orthogonal_complement(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    null_space(basis, dim, 1e-10)
}

/// Gram–Schmidt on `vectors`, dropping near-dependent entries.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                let c = dot(&w, b);
                axpy(&mut w, -c, b);
            }
        }
        let n = norm(&w);
        if n > tol {
            out.push(scale(&w, 1.0 / n));
        }
    }
    out
}
