//! Minimal Gaussian purification `γ_π = [[γ_AB, γ_ABE], [γ_ABEᵀ, γ_E]]`.
//!
//! Each symplectic eigenvalue `ν > 1` of `γ_AB` gets one purifying mode of
//! Eve, built as a two-mode squeezed vacuum on the Williamson normal form and
//! mapped back with `S⁻¹`.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, mat2, Mat};
use crate::symplectic::{symplectic_eigenvalues, williamson_with};

#[derive(Debug, Clone)]
pub struct Purification {
    pub gamma_ab: Mat,
    /// `4 x 2R` correlations between Alice/Bob and Eve's modes.
    pub gamma_abe: Mat,
    /// `2R x 2R` covariance matrix of Eve's modes.
    pub gamma_e: Mat,
    /// Symplectic eigenvalues of `γ_AB`, descending.
    pub nu: Vec<f64>,
}

impl Purification {
    /// Number of Eve's modes.
    pub fn r_count(&self) -> usize {
        self.gamma_e.nrows() / 2
    }

    pub fn full(&self) -> Mat {
        let n = 4 + self.gamma_e.nrows();
        let mut m = Mat::zeros(n, n);
        m.view_mut((0, 0), (4, 4)).copy_from(&self.gamma_ab);
        m.view_mut((0, 4), self.gamma_abe.shape()).copy_from(&self.gamma_abe);
        m.view_mut((4, 0), (self.gamma_abe.ncols(), 4)).copy_from(&self.gamma_abe.transpose());
        m.view_mut((4, 4), self.gamma_e.shape()).copy_from(&self.gamma_e);
        m
    }

    /// Largest deviation of a symplectic eigenvalue of `γ_π` from 1.
    pub fn purity_residual(&self) -> Result<f64> {
        Ok(symplectic_eigenvalues(&self.full())?.iter().fold(0.0f64, |acc, v| acc.max((v - 1.0).abs())))
    }

    /// `γ_AE`: the rows of `γ_ABE` belonging to mode `side` (0 = Alice, 1 = Bob).
    pub fn gamma_side_e(&self, side: usize) -> Mat {
        self.gamma_abe.rows(2 * side, 2).into_owned()
    }
}

pub fn purify(gamma_ab: &Mat) -> Result<Purification> {
    purify_with(gamma_ab, &Config::default())
}

pub fn purify_with(gamma_ab: &Mat, cfg: &Config) -> Result<Purification> {
    if gamma_ab.shape() != (4, 4) {
        return Err(Error::ShapeMismatch(format!("purification expects a two-mode matrix, got {}x{}", gamma_ab.nrows(), gamma_ab.ncols())));
    }
    let w = williamson_with(gamma_ab, cfg)?;
    if w.nu[1] < 1.0 - cfg.physical_tol {
        return Err(Error::Unphysical(format!("smallest symplectic eigenvalue {:.12}", w.nu[1])));
    }
    let mixed: Vec<f64> = w.nu.iter().copied().filter(|&v| v > 1.0 + cfg.purification_cutoff).collect();
    let r = mixed.len();
    let sz = mat2(1.0, 0.0, 0.0, -1.0);
    let mut seed = Mat::zeros(4, 2 * r);
    for (i, &v) in mixed.iter().enumerate() {
        seed.view_mut((2 * i, 2 * i), (2, 2)).copy_from(&(&sz * (v * v - 1.0).sqrt()));
    }
    let gamma_abe = w.s_inverse() * seed;
    let gamma_e = block_diag(&mixed.iter().map(|&v| Mat::identity(2, 2) * v).collect::<Vec<_>>());
    Ok(Purification { gamma_ab: gamma_ab.clone(), gamma_abe, gamma_e, nu: w.nu })
}

/// Closed-form purification of the asymmetric family with one unit
/// symplectic eigenvalue (`kx = kp`, `a ≠ b`).
pub fn purify_asym_glems(a: f64, b: f64) -> Result<Purification> {
    if !(a.is_finite() && b.is_finite()) || a < 1.0 || b < 1.0 {
        return Err(Error::InvalidInput(format!("asym-glems needs a, b ≥ 1, got a={a}, b={b}")));
    }
    if a == b {
        return Err(Error::WrongFamily("a = b is the pure state; it has no purifying mode".into()));
    }
    let k = crate::states::asym_glems_coupling(a, b);
    let gamma_ab = crate::states::StdForm { a, b, kx: k, kp: k }.covariance();
    let sz = mat2(1.0, 0.0, 0.0, -1.0);
    let eye = Mat::identity(2, 2);
    let gap = (a - b).abs();
    let (top, bottom) = if a > b {
        (&sz * (gap * (a + 1.0)).sqrt(), &eye * (gap * (b - 1.0)).sqrt())
    } else {
        (&eye * (gap * (a - 1.0)).sqrt(), &sz * (gap * (b + 1.0)).sqrt())
    };
    let mut gamma_abe = Mat::zeros(4, 2);
    gamma_abe.view_mut((0, 0), (2, 2)).copy_from(&top);
    gamma_abe.view_mut((2, 0), (2, 2)).copy_from(&bottom);
    Ok(Purification { gamma_ab, gamma_abe, gamma_e: eye * (1.0 + gap), nu: vec![1.0 + gap, 1.0] })
}
