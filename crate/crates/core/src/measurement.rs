//! Gaussian measurements, classical covariance matrices and conditioning on
//! Eve's outcomes.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{direct_sum, max_abs, pinv_psd, symmetry_defect, Mat};
use crate::purification::Purification;
use crate::symplectic::{rotation, schur_complement_with, symplectic_eigenvalues};
use std::f64::consts::FRAC_PI_2;

/// A Gaussian measurement on one or more modes.
#[derive(Debug, Clone, PartialEq)]
pub enum GaussianMeasurement {
    /// Seed covariance matrix `Γ` of the POVM.
    Finite(Mat),
    /// Exact homodyne detection; one angle per mode, measuring `cos θ x + sin θ p`.
    Homodyne(Vec<f64>),
}

/// Single-mode seed `P(φ) diag(τ e^{2t}, τ e^{-2t}) Pᵀ(φ)`.
///
/// As `t → ∞` it tends to homodyne detection at angle `φ + π/2`.
pub fn general_single_mode(phi: f64, tau: f64, t: f64) -> Result<Mat> {
    if !(phi.is_finite() && tau.is_finite() && t.is_finite()) || tau < 1.0 || t < 0.0 {
        return Err(Error::InvalidInput(format!("seed needs τ ≥ 1, t ≥ 0, got φ={phi}, τ={tau}, t={t}")));
    }
    let p = rotation(phi);
    let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![tau * (2.0 * t).exp(), tau * (-2.0 * t).exp()]));
    Ok(&p * d * p.transpose())
}

/// Finite seed approaching homodyne detection at angle `theta` as `t → ∞`.
pub fn homodyne_approximant(theta: f64, t: f64) -> Result<Mat> {
    general_single_mode(theta - FRAC_PI_2, 1.0, t)
}

impl GaussianMeasurement {
    pub fn heterodyne(modes: usize) -> GaussianMeasurement {
        GaussianMeasurement::Finite(Mat::identity(2 * modes, 2 * modes))
    }

    pub fn homodyne_x(modes: usize) -> GaussianMeasurement {
        GaussianMeasurement::Homodyne(vec![0.0; modes])
    }

    pub fn homodyne_p(modes: usize) -> GaussianMeasurement {
        GaussianMeasurement::Homodyne(vec![FRAC_PI_2; modes])
    }

    /// Single-mode seed with an exact homodyne limit at `t = ∞`.
    pub fn single_mode(phi: f64, tau: f64, t: f64) -> Result<GaussianMeasurement> {
        if t == f64::INFINITY {
            if !phi.is_finite() {
                return Err(Error::InvalidInput("homodyne angle must be finite".into()));
            }
            Ok(GaussianMeasurement::Homodyne(vec![phi + FRAC_PI_2]))
        } else {
            Ok(GaussianMeasurement::Finite(general_single_mode(phi, tau, t)?))
        }
    }

    pub fn modes(&self) -> usize {
        match self {
            GaussianMeasurement::Finite(m) => m.nrows() / 2,
            GaussianMeasurement::Homodyne(angles) => angles.len(),
        }
    }

    /// Checks shape and the uncertainty relation of a finite seed.
    pub fn validate(&self) -> Result<()> {
        match self {
            GaussianMeasurement::Finite(m) => {
                if m.nrows() != m.ncols() || m.nrows() % 2 != 0 {
                    return Err(Error::ShapeMismatch(format!("seed is {}x{}", m.nrows(), m.ncols())));
                }
                if m.nrows() == 0 {
                    return Ok(());
                }
                if m.iter().any(|v| !v.is_finite()) || symmetry_defect(m) > 1e-9 * max_abs(m).max(1.0) {
                    return Err(Error::InvalidInput("seed must be finite and symmetric".into()));
                }
                let nus = symplectic_eigenvalues(m)?;
                if nus.last().copied().unwrap_or(1.0) < 1.0 - 1e-7 {
                    return Err(Error::Unphysical("seed violates the uncertainty relation".into()));
                }
                Ok(())
            }
            GaussianMeasurement::Homodyne(angles) => {
                if angles.iter().all(|a| a.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidInput("homodyne angles must be finite".into()))
                }
            }
        }
    }

    /// Short human-readable description, with `mode_names` naming each mode.
    pub fn describe(&self, mode_names: &[&str]) -> String {
        match self {
            GaussianMeasurement::Finite(m) => {
                if max_abs(&(m - Mat::identity(m.nrows(), m.ncols()))) < 1e-12 {
                    format!("heterodyne {}", mode_names.join(", "))
                } else {
                    let entries: Vec<String> = m.iter().map(|v| format!("{v:.6}")).collect();
                    format!("seed [{}] on {}", entries.join(" "), mode_names.join(", "))
                }
            }
            GaussianMeasurement::Homodyne(angles) => {
                let parts: Vec<String> =
                    angles.iter().zip(mode_names).map(|(&t, name)| format!("{}_{}", quadrature_name(t), name)).collect();
                format!("homodyne {}", parts.join(", "))
            }
        }
    }

    /// Row vectors of the measured quadratures of a homodyne measurement.
    fn projector(angles: &[f64]) -> Mat {
        let mut p = Mat::zeros(angles.len(), 2 * angles.len());
        for (i, &t) in angles.iter().enumerate() {
            p[(i, 2 * i)] = t.cos();
            p[(i, 2 * i + 1)] = t.sin();
        }
        p
    }
}

fn quadrature_name(theta: f64) -> String {
    let t = theta.rem_euclid(std::f64::consts::PI);
    if t.abs() < 1e-9 || (t - std::f64::consts::PI).abs() < 1e-9 {
        "x".into()
    } else if (t - FRAC_PI_2).abs() < 1e-9 {
        "p".into()
    } else {
        format!("q({t:.6})")
    }
}

/// Classical covariance matrix of Alice, Bob and Eve's outcomes, with the
/// Alice/Bob block first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccm {
    pub matrix: Mat,
    pub ab_dim: usize,
}

impl Ccm {
    pub fn e_dim(&self) -> usize {
        self.matrix.nrows() - self.ab_dim
    }

    pub fn alpha(&self) -> Mat {
        self.matrix.view((0, 0), (self.ab_dim, self.ab_dim)).into_owned()
    }

    pub fn beta(&self) -> Mat {
        self.matrix.view((0, self.ab_dim), (self.ab_dim, self.e_dim())).into_owned()
    }

    pub fn delta(&self) -> Mat {
        let e = self.e_dim();
        self.matrix.view((self.ab_dim, self.ab_dim), (e, e)).into_owned()
    }

    /// CCM of Alice and Bob conditioned on Eve's outcome.
    pub fn conditional_ab(&self) -> Result<Mat> {
        let keep: Vec<usize> = (0..self.ab_dim).collect();
        schur_complement_with(&self.matrix, &keep, true, Config::default().pinv_cutoff)
    }
}

fn finite_seed<'a>(m: &'a GaussianMeasurement, who: &str, modes: usize) -> Result<&'a Mat> {
    match m {
        GaussianMeasurement::Finite(g) if g.nrows() == 2 * modes && g.ncols() == 2 * modes => Ok(g),
        GaussianMeasurement::Finite(g) => {
            Err(Error::ShapeMismatch(format!("{who} seed is {}x{}, expected {}x{}", g.nrows(), g.ncols(), 2 * modes, 2 * modes)))
        }
        GaussianMeasurement::Homodyne(_) => Err(Error::InvalidInput(format!("{who} measurement must be a finite seed"))),
    }
}

/// `Σ = [[γ_AB + Γ_A ⊕ Γ_B, γ_ABE], [γ_ABEᵀ, γ_E + Γ_E]]`.
///
/// For a pure state (no Eve modes) `Γ_E` is ignored.
pub fn assemble_ccm(pi: &Purification, ga: &GaussianMeasurement, gb: &GaussianMeasurement, ge: &GaussianMeasurement) -> Result<Ccm> {
    let ga = finite_seed(ga, "Alice", 1)?;
    let gb = finite_seed(gb, "Bob", 1)?;
    let r = pi.r_count();
    let alpha = &pi.gamma_ab + direct_sum(ga, gb);
    if r == 0 {
        return Ok(Ccm { matrix: alpha, ab_dim: 4 });
    }
    let ge = finite_seed(ge, "Eve", r)?;
    let mut m = Mat::zeros(4 + 2 * r, 4 + 2 * r);
    m.view_mut((0, 0), (4, 4)).copy_from(&alpha);
    m.view_mut((0, 4), (4, 2 * r)).copy_from(&pi.gamma_abe);
    m.view_mut((4, 0), (2 * r, 4)).copy_from(&pi.gamma_abe.transpose());
    m.view_mut((4, 4), (2 * r, 2 * r)).copy_from(&(&pi.gamma_e + ge));
    Ok(Ccm { matrix: m, ab_dim: 4 })
}

/// Covariance matrix of Alice and Bob conditioned on Eve's measurement.
///
/// Homodyne measurements use the exact limit: only the measured quadratures
/// of `γ_E` enter, through a pseudoinverse.
pub fn condition_on_e(pi: &Purification, ge: &GaussianMeasurement) -> Result<Mat> {
    let r = pi.r_count();
    if r == 0 {
        return Ok(pi.gamma_ab.clone());
    }
    if ge.modes() != r {
        return Err(Error::ShapeMismatch(format!("Eve holds {r} mode(s), measurement acts on {}", ge.modes())));
    }
    let cutoff = Config::default().pinv_cutoff;
    match ge {
        GaussianMeasurement::Finite(g) => {
            let delta = &pi.gamma_e + g;
            Ok(&pi.gamma_ab - &pi.gamma_abe * pinv_psd(&delta, cutoff)? * pi.gamma_abe.transpose())
        }
        GaussianMeasurement::Homodyne(angles) => {
            ge.validate()?;
            let p = GaussianMeasurement::projector(angles);
            let beta = &pi.gamma_abe * p.transpose();
            let delta = &p * &pi.gamma_e * p.transpose();
            Ok(&pi.gamma_ab - &beta * pinv_psd(&delta, cutoff)? * beta.transpose())
        }
    }
}

/// Classical channel `X`, `Y` on Eve's outcomes, mapping `Σ` to
/// `[[α, β Xᵀ], [X β ᵀ, X δ Xᵀ + Y]]`.
///
/// Conditioning the result gives `α - β Xᵀ (X δ Xᵀ + Y)⁺ X βᵀ`.
pub fn apply_classical_channel(ccm: &Ccm, x: &Mat, y: &Mat) -> Result<Ccm> {
    let e = ccm.e_dim();
    let l = x.nrows();
    if x.ncols() != e || y.shape() != (l, l) {
        return Err(Error::ShapeMismatch(format!(
            "channel X is {}x{}, Y is {}x{}, Eve block has size {e}",
            x.nrows(),
            x.ncols(),
            y.nrows(),
            y.ncols()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) || symmetry_defect(y) > 1e-12 * max_abs(y).max(1.0) {
        return Err(Error::InvalidInput("channel noise Y must be symmetric".into()));
    }
    if crate::linalg::sym_eigen(y).0.first().copied().unwrap_or(0.0) < -1e-12 * max_abs(y).max(1.0) {
        return Err(Error::InvalidInput("channel noise Y must be positive semidefinite".into()));
    }
    let ab = ccm.ab_dim;
    let beta = ccm.beta() * x.transpose();
    let delta = x * ccm.delta() * x.transpose() + y;
    let mut m = Mat::zeros(ab + l, ab + l);
    m.view_mut((0, 0), (ab, ab)).copy_from(&ccm.alpha());
    m.view_mut((0, ab), (ab, l)).copy_from(&beta);
    m.view_mut((ab, 0), (l, ab)).copy_from(&beta.transpose());
    m.view_mut((ab, ab), (l, l)).copy_from(&delta);
    Ok(Ccm { matrix: m, ab_dim: ab })
}
