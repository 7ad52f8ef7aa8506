//! Dense eigenvalue helpers on top of nalgebra.
//!
//! The general complex eigensolve is nalgebra's Schur decomposition; the
//! eigenvector of a selected eigenvalue comes from inverse iteration, which
//! is cheaper than accumulating the Schur vectors and back-substituting.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};

use crate::{Error, Result, C64};

const SCHUR_MAX_SWEEPS: usize = 10_000;
const INVERSE_ITERATIONS: usize = 3;

/// All eigenvalues of a square complex matrix, in no particular order.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    check_square_finite(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Already triangular (this includes the zero matrix, on which the Schur
    // iteration's convergence test never fires).
    if (0..n).all(|j| (j + 1..n).all(|i| m[(i, j)] == C64::new(0.0, 0.0))) {
        return Ok((0..n).map(|i| m[(i, i)]).collect());
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_SWEEPS)
        .ok_or_else(|| Error::Eigen(format!("Schur iteration did not converge for a {n}×{n} matrix")))?;
    let (_, t) = schur.unpack();
    // The complex Schur form is triangular up to deflation residue; a
    // surviving subdiagonal entry is resolved as a 2×2 block.
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != C64::new(0.0, 0.0) {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = (a + d) * 0.5;
            let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            out.push(half_tr + disc);
            out.push(half_tr - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    Ok(out)
}

/// Eigenvalue of smallest magnitude.
pub fn smallest_eigenvalue(m: &DMatrix<C64>) -> Result<C64> {
    eigenvalues(m)?
        .into_iter()
        .min_by(|a, b| a.norm().total_cmp(&b.norm()))
        .ok_or_else(|| Error::Eigen("empty matrix has no eigenvalues".into()))
}

/// Unit eigenvector (Euclidean norm) for an eigenvalue `lambda` of `m`, by
/// inverse iteration with a slightly shifted `lambda` so the LU stays finite.
pub fn eigenvector(m: &DMatrix<C64>, lambda: C64) -> Result<DVector<C64>> {
    check_square_finite(m)?;
    let n = m.nrows();
    let scale = m.norm().max(lambda.norm()).max(f64::MIN_POSITIVE);
    let shift = lambda + C64::new(1e-13 * scale, 1e-13 * scale);
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let lu = a.lu();
    let mut v = DVector::from_fn(n, |i, _| C64::new(1.0, 0.01 * (i as f64 + 1.0).sqrt()));
    v /= C64::new(v.norm(), 0.0);
    for _ in 0..INVERSE_ITERATIONS {
        let w = lu
            .solve(&v)
            .ok_or_else(|| Error::Eigen("inverse iteration hit a singular factorization".into()))?;
        let norm = w.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Eigen(format!("inverse iteration diverged near λ = {lambda}")));
        }
        v = w / C64::new(norm, 0.0);
    }
    Ok(v)
}

/// Eigenpairs of a real symmetric matrix, eigenvalues in decreasing order;
/// column `j` of the returned matrix belongs to value `j`.
pub fn symmetric_eigen_desc(m: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::Invalid(format!("matrix is {}×{}, not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("symmetric eigensolve input has non-finite entries".into()));
    }
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, SCHUR_MAX_SWEEPS)
        .ok_or_else(|| Error::Eigen(format!("symmetric eigensolve did not converge for n = {n}")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

fn check_square_finite(m: &DMatrix<C64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Invalid(format!("matrix is {}×{}, not square", m.nrows(), m.ncols())));
    }
    if let Some((idx, v)) = m.iter().enumerate().find(|(_, v)| !(v.re.is_finite() && v.im.is_finite())) {
        let (i, j) = (idx % m.nrows(), idx / m.nrows());
        return Err(Error::NonFinite(format!("matrix entry ({i}, {j}) = {v}")));
    }
    Ok(())
}
