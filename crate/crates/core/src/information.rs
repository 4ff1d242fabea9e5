//! Gaussian mutual information of measurement outcomes and the
//! conditional mutual information bound.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{det_sum_2x2, direct_sum, Mat};
use crate::measurement::{condition_on_e, GaussianMeasurement};
use crate::optimize::{minimize, Axis};
use crate::purification::Purification;
use crate::states::StdForm;

/// Outcome covariance of one party: the seed is added, or the homodyne
/// quadrature is projected out.
fn outcome_map(m: &GaussianMeasurement, who: &str) -> Result<(Mat, Mat)> {
    match m {
        GaussianMeasurement::Finite(g) if g.shape() == (2, 2) => Ok((Mat::identity(2, 2), g.clone())),
        GaussianMeasurement::Homodyne(angles) if angles.len() == 1 => {
            m.validate()?;
            let (s, c) = angles[0].sin_cos();
            Ok((Mat::from_row_slice(1, 2, &[c, s]), Mat::zeros(2, 2)))
        }
        _ => Err(Error::ShapeMismatch(format!("{who} measurement must act on one mode"))),
    }
}

/// `½ ln(det σ_A det σ_B / det σ_AB)` for the outcomes of `ga`, `gb` on a
/// two-mode covariance matrix.
pub fn mutual_information_conditional(cond: &Mat, ga: &GaussianMeasurement, gb: &GaussianMeasurement) -> Result<f64> {
    if cond.shape() != (4, 4) {
        return Err(Error::ShapeMismatch("conditional covariance matrix must be 4x4".into()));
    }
    let (la, na) = outcome_map(ga, "Alice")?;
    let (lb, nb) = outcome_map(gb, "Bob")?;
    let sigma = direct_sum(&la, &lb) * (cond + direct_sum(&na, &nb)) * direct_sum(&la, &lb).transpose();
    let da = la.nrows();
    let det_a = sigma.view((0, 0), (da, da)).determinant();
    let det_b = sigma.view((da, da), (lb.nrows(), lb.nrows())).determinant();
    let det_ab = sigma.determinant();
    if !(det_ab > 0.0 && det_a > 0.0 && det_b > 0.0) {
        return Err(Error::NumericalDegeneracy(format!("outcome covariance has determinant {det_ab:.3e}")));
    }
    Ok(0.5 * (det_a * det_b / det_ab).ln())
}

/// Mutual information `f(γ_π, Γ_A, Γ_B, Γ_E)` of Alice's and Bob's outcomes
/// conditioned on Eve's.
pub fn mutual_information_f(
    pi: &Purification,
    ga: &GaussianMeasurement,
    gb: &GaussianMeasurement,
    ge: &GaussianMeasurement,
) -> Result<f64> {
    let cond = condition_on_e(pi, ge)?;
    mutual_information_conditional(&cond, ga, gb)
}

/// `½ ln(ab / (ab - kx²))`: mutual information of `x` homodyne on both modes.
pub fn f_homodyne_ab(cond: &StdForm) -> f64 {
    let ab = cond.a * cond.b;
    0.5 * (ab / (ab - cond.kx * cond.kx)).ln()
}

/// `G = √(a/b) + √(b/a) + 1/√(ab) - √(ab - kx²)`. The closed form of the
/// conditional mutual information holds when `G ≥ 0`.
pub fn gcmi_condition_g(cond: &StdForm) -> f64 {
    let StdForm { a, b, kx, .. } = *cond;
    (a / b).sqrt() + (b / a).sqrt() + 1.0 / (a * b).sqrt() - (a * b - kx * kx).sqrt()
}

/// `u(r_A, r_B) = [1 - kx²/(a₋ b₋)] [1 - kp²/(a₊ b₊)]`, `a± = a + e^{±2r_A}`,
/// `b± = b + e^{±2r_B}`. Infinite `r` is the homodyne limit.
pub fn gcmi_objective(cond: &StdForm, r_a: f64, r_b: f64) -> f64 {
    let StdForm { a, b, kx, kp } = *cond;
    let am = a + (-2.0 * r_a).exp();
    let ap = a + (2.0 * r_a).exp();
    let bm = b + (-2.0 * r_b).exp();
    let bp = b + (2.0 * r_b).exp();
    (1.0 - kx * kx / (am * bm)) * (1.0 - kp * kp / (ap * bp))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gcmi {
    /// Supremum over Alice's and Bob's Gaussian measurements, from the search.
    pub value: f64,
    /// `½ ln(ab/(ab - kx²))`.
    pub closed_form: f64,
    /// `G ≥ 0`, so `closed_form` is exact.
    pub closed_form_valid: bool,
    pub r_a: f64,
    pub r_b: f64,
}

/// Gaussian conditional mutual information `sup f` of a conditional
/// standard form, over squeezed seeds `diag(e^{-2r}, e^{2r})` with
/// `r ∈ [0, r_max] ∪ {∞}`.
pub fn gcmi(cond: &StdForm, cfg: &Config) -> Result<Gcmi> {
    if !cond.is_physical(cfg.conditional_tol) {
        return Err(Error::Unphysical(format!("conditional state {cond:?} is not physical")));
    }
    let axis = Axis::linear(0.0, cfg.r_max, cfg.grid).with_extra(f64::INFINITY);
    let best = minimize(
        &[axis.clone(), axis],
        &[("homodyne x".to_string(), vec![f64::INFINITY, f64::INFINITY])],
        |p| Some(gcmi_objective(cond, p[0], p[1])),
        cfg,
    )?;
    if !(best.value > 0.0) {
        return Err(Error::NumericalDegeneracy("conditional mutual information diverges".into()));
    }
    Ok(Gcmi {
        value: -0.5 * best.value.ln(),
        closed_form: f_homodyne_ab(cond),
        closed_form_valid: gcmi_condition_g(cond) >= 0.0,
        r_a: best.params[0],
        r_b: best.params[1],
    })
}

fn require_finite_single(m: &GaussianMeasurement, who: &str) -> Result<Mat> {
    match m {
        GaussianMeasurement::Finite(g) if g.shape() == (2, 2) => Ok(g.clone()),
        _ => Err(Error::InvalidInput(format!("{who} measurement must be a finite single-mode seed"))),
    }
}

/// `f = I(A;B) + K(E|A;B)`: Alice/Bob mutual information without Eve, plus
/// the correction from conditioning on Eve's outcome.
pub fn f_decomposed(pi: &Purification, ga: &GaussianMeasurement, gb: &GaussianMeasurement, ge: &GaussianMeasurement) -> Result<(f64, f64)> {
    let ga = require_finite_single(ga, "Alice")?;
    let gb = require_finite_single(gb, "Bob")?;
    let g = &pi.gamma_ab;
    let g_a = g.view((0, 0), (2, 2)).into_owned();
    let g_b = g.view((2, 2), (2, 2)).into_owned();
    let sigma_a = &ga + &g_a;
    let sigma_b = &gb + &g_b;
    let sigma_ab = g + direct_sum(&ga, &gb);
    let det_ab = sigma_ab.determinant();
    let i_ab = 0.5 * (det_sum_2x2(&ga, &g_a) * det_sum_2x2(&gb, &g_b) / det_ab).ln();
    if pi.r_count() == 0 {
        return Ok((i_ab, 0.0));
    }
    let inverse = |m: &Mat| m.clone().try_inverse().ok_or_else(|| Error::NumericalDegeneracy("singular outcome covariance".into()));
    let g_ae = pi.gamma_side_e(0);
    let g_be = pi.gamma_side_e(1);
    let x_a = &pi.gamma_e - g_ae.transpose() * inverse(&sigma_a)? * &g_ae;
    let x_b = &pi.gamma_e - g_be.transpose() * inverse(&sigma_b)? * &g_be;
    let x_ab = &pi.gamma_e - pi.gamma_abe.transpose() * inverse(&sigma_ab)? * &pi.gamma_abe;
    let ratio = eve_det(&x_a, ge)? * eve_det(&x_b, ge)? / (eve_det(&x_ab, ge)? * eve_det(&pi.gamma_e, ge)?);
    if !(ratio > 0.0) {
        return Err(Error::NumericalDegeneracy("non-positive determinant ratio".into()));
    }
    Ok((i_ab, 0.5 * ratio.ln()))
}

/// `det(Γ_E + X)`, or for homodyne `det(P X Pᵀ)` (the divergent factor of
/// the limit cancels in the ratio).
fn eve_det(x: &Mat, ge: &GaussianMeasurement) -> Result<f64> {
    match ge {
        GaussianMeasurement::Finite(g) if g.shape() == x.shape() => Ok((g + x).determinant()),
        GaussianMeasurement::Homodyne(angles) if 2 * angles.len() == x.nrows() => {
            let mut p = Mat::zeros(angles.len(), x.nrows());
            for (i, &t) in angles.iter().enumerate() {
                p[(i, 2 * i)] = t.cos();
                p[(i, 2 * i + 1)] = t.sin();
            }
            Ok((&p * x * p.transpose()).determinant())
        }
        _ => Err(Error::ShapeMismatch("Eve's measurement does not match her modes".into())),
    }
}
