//! Small dense helpers on top of nalgebra.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Eigen-decomposition of the symmetric part of `m`, eigenvalues ascending.
pub fn sym_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Mat::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn symmetry_defect(m: &Mat) -> f64 {
    max_abs(&(m - m.transpose()))
}

fn spectral_map(values: &[f64], vectors: &Mat, f: impl Fn(f64) -> f64) -> Mat {
    let d = Mat::from_diagonal(&Vector::from_iterator(values.len(), values.iter().map(|&v| f(v))));
    vectors * d * vectors.transpose()
}

/// Moore-Penrose inverse of a symmetric positive semidefinite matrix.
///
/// Eigenvalues below `rel_cutoff` times the largest one are treated as zero.
pub fn pinv_psd(m: &Mat, rel_cutoff: f64) -> Result<Mat> {
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let (values, vectors) = sym_eigen(m);
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Ok(Mat::zeros(m.nrows(), m.ncols()));
    }
    if values[0] < -1e-9 * scale.max(1.0) {
        return Err(Error::NumericalDegeneracy(format!("pseudoinverse of an indefinite block (eigenvalue {:.3e})", values[0])));
    }
    let cut = rel_cutoff * scale;
    Ok(spectral_map(&values, &vectors, |v| if v > cut { 1.0 / v } else { 0.0 }))
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(m: &Mat) -> Mat {
    let (values, vectors) = sym_eigen(m);
    spectral_map(&values, &vectors, |v| v.max(0.0).sqrt())
}

pub fn direct_sum(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn block_diag(blocks: &[Mat]) -> Mat {
    blocks.iter().fold(Mat::zeros(0, 0), |acc, b| direct_sum(&acc, b))
}

pub fn mat2(a: f64, b: f64, c: f64, d: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[a, b, c, d])
}

pub fn det2(m: &Mat) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `det(P + Q) = det P + det Q + Tr(P J Q Jᵀ)` for 2x2 matrices.
pub fn det_sum_2x2(p: &Mat, q: &Mat) -> f64 {
    let j = mat2(0.0, 1.0, -1.0, 0.0);
    det2(p) + det2(q) + (p * &j * q * j.transpose()).trace()
}

/// `det(X + c rᵀ) = (1 + rᵀ X⁻¹ c) det X`.
pub fn det_rank_one_update(x: &Mat, c: &Vector, r: &Vector) -> Result<f64> {
    let lu = x.clone().lu();
    let solved = lu.solve(c).ok_or_else(|| Error::NumericalDegeneracy("rank-one update of a singular matrix".into()))?;
    Ok((1.0 + r.dot(&solved)) * lu.determinant())
}
