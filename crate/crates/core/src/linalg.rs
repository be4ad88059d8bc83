//! Dense real and complex helpers on top of nalgebra: numerical rank,
//! kernels, and complex null spaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Singular-value threshold `sigma_max * max(rows, cols) * rel`.
fn rank_threshold(singular_values: &DVector<f64>, rows: usize, cols: usize, rel: f64) -> f64 {
    let smax = singular_values.iter().cloned().fold(0.0, f64::max);
    smax * rows.max(cols) as f64 * rel
}

/// Pads a wide matrix with zero rows so its SVD exposes a full right basis.
fn padded(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() >= m.ncols() {
        m.clone()
    } else {
        let mut p = DMatrix::zeros(m.ncols(), m.ncols());
        p.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
        p
    }
}

pub fn numerical_rank(m: &DMatrix<f64>, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let thr = rank_threshold(&sv, m.nrows(), m.ncols(), rel);
    if thr == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > thr).count()
}

/// Number of singular values strictly above an absolute threshold.
pub fn rank_above(m: &DMatrix<f64>, thr: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    m.singular_values().iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis of the kernel of `m`, one column per basis vector.
///
/// Each vector is sign-normalized so its first entry of magnitude above
/// `1e-10` is positive, which keeps the output deterministic.
pub fn kernel(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let p = padded(m);
    let svd = p.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let thr = rank_threshold(&svd.singular_values, m.nrows(), m.ncols(), rel);
    let null: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= thr)
        .collect();
    let mut out = DMatrix::zeros(n, null.len());
    for (c, &i) in null.iter().enumerate() {
        let mut v: DVector<f64> = v_t.row(i).transpose();
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-10) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
        out.set_column(c, &v);
    }
    out
}

/// Right singular vectors of `m` whose singular value is at most `thr`,
/// ordered by increasing singular value. At least one vector is returned.
pub fn complex_near_null(m: &DMatrix<Complex64>, thr: f64) -> Vec<DVector<Complex64>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut out = Vec::new();
    for (rank, &i) in idx.iter().enumerate() {
        if rank > 0 && svd.singular_values[i] > thr {
            break;
        }
        let row = v_t.row(i);
        out.push(DVector::from_iterator(
            row.len(),
            row.iter().map(|z| z.conj()),
        ));
    }
    out
}

/// Eigenvalues of a Hermitian complex matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut v: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    v.sort_by(f64::total_cmp);
    v
}
