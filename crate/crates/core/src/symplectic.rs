//! Symplectic form, symplectic spectra, Williamson decompositions and
//! Schur complements.
//!
//! Quadratures are ordered `(x₁, p₁, x₂, p₂, …)` and the vacuum has
//! covariance matrix `I`.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, direct_sum, mat2, max_abs, pinv_psd, sqrt_psd, sym_eigen, symmetry_defect, Mat};

/// `Ω = ⊕ J` with `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> Mat {
    let mut om = Mat::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        om[(2 * i, 2 * i + 1)] = 1.0;
        om[(2 * i + 1, 2 * i)] = -1.0;
    }
    om
}

fn modes_of(m: &Mat) -> Result<usize> {
    if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() == 0 {
        return Err(Error::ShapeMismatch(format!("expected a non-empty 2n x 2n matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(m.nrows() / 2)
}

/// Max entry of `S Ω Sᵀ - Ω`.
pub fn symplectic_residual(s: &Mat) -> Result<f64> {
    let om = symplectic_form(modes_of(s)?);
    Ok(max_abs(&(s * &om * s.transpose() - om)))
}

/// `S⁻¹ = Ω Sᵀ Ωᵀ` for symplectic `S`.
pub fn symplectic_inverse(s: &Mat) -> Result<Mat> {
    let om = symplectic_form(modes_of(s)?);
    Ok(&om * s.transpose() * om.transpose())
}

/// Permutation taking `(x₁, p₁, …, xₙ, pₙ)` to `(x₁, …, xₙ, p₁, …, pₙ)`.
pub fn quadrature_reorder(modes: usize) -> Mat {
    let mut lam = Mat::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        lam[(i, 2 * i)] = 1.0;
        lam[(modes + i, 2 * i + 1)] = 1.0;
    }
    lam
}

/// Phase rotation `P(φ) = [[cos φ, -sin φ], [sin φ, cos φ]]`.
pub fn rotation(phi: f64) -> Mat {
    let (s, c) = phi.sin_cos();
    mat2(c, -s, s, c)
}

fn check_cm(gamma: &Mat) -> Result<usize> {
    let n = modes_of(gamma)?;
    if gamma.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("covariance matrix has non-finite entries".into()));
    }
    if symmetry_defect(gamma) > 1e-9 * max_abs(gamma).max(1.0) {
        return Err(Error::InvalidInput("covariance matrix is not symmetric".into()));
    }
    Ok(n)
}

/// Symplectic eigenvalues in descending order.
///
/// They are the square roots of the (doubly degenerate) eigenvalues of
/// `-(Ωγ)²`. That spectrum is computed from the similar symmetric matrix
/// `Mᵀ M`, `M = γ^{1/2} Ω γ^{1/2}`.
pub fn symplectic_eigenvalues(gamma: &Mat) -> Result<Vec<f64>> {
    let n = check_cm(gamma)?;
    let (values, _) = sym_eigen(gamma);
    if values[0] < -1e-9 * values[2 * n - 1].abs().max(1.0) {
        return Err(Error::Unphysical(format!("covariance matrix has eigenvalue {:.3e}", values[0])));
    }
    let root = sqrt_psd(gamma);
    let m = &root * symplectic_form(n) * &root;
    let (sq, _) = sym_eigen(&(m.transpose() * &m));
    let mut nus: Vec<f64> = (0..n)
        .map(|i| {
            let hi = sq[2 * n - 1 - 2 * i];
            let lo = sq[2 * n - 2 - 2 * i];
            (0.5 * (hi + lo)).max(0.0).sqrt()
        })
        .collect();
    nus.sort_by(|a, b| b.total_cmp(a));
    Ok(nus)
}

/// Closed-form symplectic eigenvalues `(ν₁, ν₂)` of the two-mode standard form.
pub fn standard_form_symplectic_eigenvalues(a: f64, b: f64, kx: f64, kp: f64) -> (f64, f64) {
    let delta = a * a + b * b - 2.0 * kx * kp;
    let disc = (a * a - b * b).powi(2) + 4.0 * (a * kx - b * kp) * (b * kx - a * kp);
    let root = disc.max(0.0).sqrt();
    (((delta + root) / 2.0).max(0.0).sqrt(), ((delta - root) / 2.0).max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilliamsonRoute {
    /// Symmetric standard form: local squeezers after a balanced beam splitter.
    SymmetricStandardForm,
    /// Standard form with `kx = kp`: a two-mode squeezer, preceded by a swap when `a < b`.
    TwoModeSqueezer,
    /// Orthogonal reduction of `γ^{1/2} Ω γ^{1/2}`.
    Generic,
}

#[derive(Debug, Clone)]
pub struct Williamson {
    /// Symplectic `S` with `S γ Sᵀ = ⊕ νᵢ I`.
    pub s: Mat,
    /// Symplectic eigenvalues, descending, in the mode order of the normal form.
    pub nu: Vec<f64>,
    pub route: WilliamsonRoute,
}

impl Williamson {
    pub fn normal_form(&self) -> Mat {
        block_diag(&self.nu.iter().map(|&v| Mat::identity(2, 2) * v).collect::<Vec<_>>())
    }

    pub fn s_inverse(&self) -> Mat {
        symplectic_inverse(&self.s).expect("williamson matrix has a valid shape")
    }

    /// Max entry of `S γ Sᵀ - ⊕ νᵢ I`.
    pub fn residual(&self, gamma: &Mat) -> f64 {
        max_abs(&(&self.s * gamma * self.s.transpose() - self.normal_form()))
    }
}

/// Entries `(a, b, kx, kp)` when `gamma` has the two-mode standard-form pattern.
fn standard_form_entries(gamma: &Mat) -> Option<(f64, f64, f64, f64)> {
    if gamma.nrows() != 4 {
        return None;
    }
    let (a, b, kx, kp) = (gamma[(0, 0)], gamma[(2, 2)], gamma[(0, 2)], -gamma[(1, 3)]);
    let mut expected = Mat::zeros(4, 4);
    expected[(0, 0)] = a;
    expected[(1, 1)] = a;
    expected[(2, 2)] = b;
    expected[(3, 3)] = b;
    expected[(0, 2)] = kx;
    expected[(2, 0)] = kx;
    expected[(1, 3)] = -kp;
    expected[(3, 1)] = -kp;
    if max_abs(&(gamma - expected)) <= 1e-13 * max_abs(gamma).max(1.0) {
        Some((a, b, kx, kp))
    } else {
        None
    }
}

/// Williamson decomposition with the default tolerances.
pub fn williamson(gamma: &Mat) -> Result<Williamson> {
    williamson_with(gamma, &Config::default())
}

pub fn williamson_with(gamma: &Mat, cfg: &Config) -> Result<Williamson> {
    check_cm(gamma)?;
    let accept = |w: &Williamson| {
        let scale = max_abs(gamma).max(1.0);
        symplectic_residual(&w.s).map(|r| r <= cfg.symplectic_tol * scale).unwrap_or(false)
            && w.residual(gamma) <= cfg.williamson_tol * scale
    };
    if let Some(w) = williamson_analytic(gamma) {
        if accept(&w) {
            return Ok(w);
        }
    }
    let w = williamson_generic(gamma)?;
    if !accept(&w) {
        return Err(Error::NoConvergence(format!("Williamson residual {:.3e} exceeds {:.1e}", w.residual(gamma), cfg.williamson_tol)));
    }
    Ok(w)
}

fn williamson_analytic(gamma: &Mat) -> Option<Williamson> {
    let (a, b, kx, kp) = standard_form_entries(gamma)?;
    let scale = a.abs().max(b.abs()).max(1.0);
    if (a - b).abs() <= 1e-12 * scale && kx >= kp.abs() && a > kx {
        let s = build_symplectic(&SymplecticKind::SymmetricStandardForm { a, kx, kp }).ok()?;
        let nu1 = ((a + kx) * (a - kp)).sqrt();
        let nu2 = ((a - kx) * (a + kp)).sqrt();
        return Some(Williamson { s, nu: vec![nu1, nu2], route: WilliamsonRoute::SymmetricStandardForm });
    }
    if (kx - kp).abs() <= 1e-12 * scale && (a - b).abs() > 1e-12 * scale {
        let k = 0.5 * (kx + kp);
        let root = ((a + b).powi(2) - 4.0 * k * k).sqrt();
        if !(root > 0.0) {
            return None;
        }
        let s = two_mode_squeezer_for(a, b, k).ok()?;
        let gap = (a - b).abs();
        return Some(Williamson { s, nu: vec![(root + gap) / 2.0, (root - gap) / 2.0], route: WilliamsonRoute::TwoModeSqueezer });
    }
    None
}

/// The two-mode squeezer diagonalising the standard form `(a, b, k, k)`,
/// with the larger symplectic eigenvalue placed on the first mode.
pub fn two_mode_squeezer_for(a: f64, b: f64, k: f64) -> Result<Mat> {
    let root = ((a + b).powi(2) - 4.0 * k * k).sqrt();
    if !(root > 0.0) {
        return Err(Error::InvalidInput("two-mode squeezer needs (a+b)² > 4k²".into()));
    }
    let x = ((a + b + root) / (2.0 * root)).sqrt();
    let y = ((a + b - root) / (2.0 * root)).max(0.0).sqrt();
    let s = build_symplectic(&SymplecticKind::TwoModeSqueezer { x, y })?;
    if a >= b {
        Ok(s)
    } else {
        Ok(build_symplectic(&SymplecticKind::ModeSwap)? * s)
    }
}

fn williamson_generic(gamma: &Mat) -> Result<Williamson> {
    let n = gamma.nrows() / 2;
    let (values, vectors) = sym_eigen(gamma);
    if values[0] <= 0.0 {
        return Err(Error::Unphysical("covariance matrix is not positive definite".into()));
    }
    let root = sqrt_psd(gamma);
    let inv_root = &vectors
        * Mat::from_diagonal(&nalgebra::DVector::from_iterator(2 * n, values.iter().map(|v| 1.0 / v.sqrt())))
        * vectors.transpose();
    let m = &root * symplectic_form(n) * &root;
    let mtm = m.transpose() * &m;
    let (sq, sq_vecs) = sym_eigen(&mtm);

    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(2 * n);
    let mut nus = Vec::with_capacity(n);
    let orthogonalize = |u: &mut nalgebra::DVector<f64>, basis: &[nalgebra::DVector<f64>]| {
        for _ in 0..2 {
            for e in basis {
                let proj = e.dot(u);
                *u -= e * proj;
            }
        }
    };
    for idx in (0..2 * n).rev() {
        if nus.len() == n {
            break;
        }
        let mut e = sq_vecs.column(idx).into_owned();
        orthogonalize(&mut e, &basis);
        let norm = e.norm();
        if norm < 0.5 {
            continue;
        }
        e /= norm;
        let nu = e.dot(&(&mtm * &e)).max(0.0).sqrt();
        if !(nu > 0.0) || !sq[idx].is_finite() {
            return Err(Error::NumericalDegeneracy("vanishing symplectic eigenvalue".into()));
        }
        let mut f = -(&m * &e) / nu;
        orthogonalize(&mut f, &basis);
        f /= f.norm();
        basis.push(e);
        basis.push(f);
        nus.push(nu);
    }
    if nus.len() != n {
        return Err(Error::NoConvergence("could not build a symplectic basis".into()));
    }
    let o = Mat::from_columns(&basis);
    let d_half = block_diag(&nus.iter().map(|&v| Mat::identity(2, 2) * v.sqrt()).collect::<Vec<_>>());
    let s = d_half * o.transpose() * inv_root;
    Ok(Williamson { s, nu: nus, route: WilliamsonRoute::Generic })
}

/// Symplectic matrices used by the decompositions.
#[derive(Debug, Clone, PartialEq)]
pub enum SymplecticKind {
    /// `(1/√2) [[I, I], [-I, I]]`.
    BalancedBeamSplitter,
    /// `diag(s_a, 1/s_a) ⊕ diag(s_b, 1/s_b)`.
    LocalSqueezers { s_a: f64, s_b: f64 },
    /// `P(φ_a) ⊕ P(φ_b)`.
    LocalRotations { phi_a: f64, phi_b: f64 },
    /// Exchange of the two modes.
    ModeSwap,
    /// `[[x I, -y σz], [-y σz, x I]]` with `x² - y² = 1`.
    TwoModeSqueezer { x: f64, y: f64 },
    /// Squeezers after a balanced beam splitter, bringing the symmetric
    /// standard form `(a, a, kx, kp)` to Williamson normal form.
    SymmetricStandardForm { a: f64, kx: f64, kp: f64 },
}

pub fn build_symplectic(kind: &SymplecticKind) -> Result<Mat> {
    let eye = Mat::identity(2, 2);
    let sz = mat2(1.0, 0.0, 0.0, -1.0);
    let s = match *kind {
        SymplecticKind::BalancedBeamSplitter => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let mut s = Mat::zeros(4, 4);
            s.view_mut((0, 0), (2, 2)).copy_from(&(&eye * h));
            s.view_mut((0, 2), (2, 2)).copy_from(&(&eye * h));
            s.view_mut((2, 0), (2, 2)).copy_from(&(&eye * -h));
            s.view_mut((2, 2), (2, 2)).copy_from(&(&eye * h));
            s
        }
        SymplecticKind::LocalSqueezers { s_a, s_b } => {
            if !(s_a > 0.0 && s_b > 0.0) {
                return Err(Error::InvalidInput("squeezing factors must be positive".into()));
            }
            direct_sum(&mat2(s_a, 0.0, 0.0, 1.0 / s_a), &mat2(s_b, 0.0, 0.0, 1.0 / s_b))
        }
        SymplecticKind::LocalRotations { phi_a, phi_b } => direct_sum(&rotation(phi_a), &rotation(phi_b)),
        SymplecticKind::ModeSwap => {
            let mut s = Mat::zeros(4, 4);
            s.view_mut((0, 2), (2, 2)).copy_from(&eye);
            s.view_mut((2, 0), (2, 2)).copy_from(&eye);
            s
        }
        SymplecticKind::TwoModeSqueezer { x, y } => {
            let mut s = Mat::zeros(4, 4);
            s.view_mut((0, 0), (2, 2)).copy_from(&(&eye * x));
            s.view_mut((0, 2), (2, 2)).copy_from(&(&sz * -y));
            s.view_mut((2, 0), (2, 2)).copy_from(&(&sz * -y));
            s.view_mut((2, 2), (2, 2)).copy_from(&(&eye * x));
            s
        }
        SymplecticKind::SymmetricStandardForm { a, kx, kp } => {
            if !(a > kx && a > kp && a + kx > 0.0 && a + kp > 0.0) {
                return Err(Error::InvalidInput("symmetric standard form needs a > |kx|, |kp|".into()));
            }
            let z_a = ((a + kx) / (a - kp)).powf(0.25);
            let z_b = ((a + kp) / (a - kx)).powf(0.25);
            build_symplectic(&SymplecticKind::LocalSqueezers { s_a: 1.0 / z_a, s_b: z_b })?
                * build_symplectic(&SymplecticKind::BalancedBeamSplitter)?
        }
    };
    let residual = symplectic_residual(&s)?;
    if residual > Config::default().symplectic_tol * max_abs(&s).max(1.0).powi(2) {
        return Err(Error::NotSymplectic { residual });
    }
    Ok(s)
}

/// Schur complement `α - β δ⁻¹ βᵀ` of the rows/columns outside `keep`.
///
/// With `pseudo` the inverse is the Moore-Penrose inverse, which also covers
/// the singular blocks produced by homodyne limits.
pub fn schur_complement(m: &Mat, keep: &[usize], pseudo: bool) -> Result<Mat> {
    schur_complement_with(m, keep, pseudo, Config::default().pinv_cutoff)
}

pub fn schur_complement_with(m: &Mat, keep: &[usize], pseudo: bool, pinv_cutoff: f64) -> Result<Mat> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::ShapeMismatch("Schur complement of a non-square matrix".into()));
    }
    let mut seen = vec![false; n];
    for &k in keep {
        if k >= n || seen[k] {
            return Err(Error::ShapeMismatch(format!("bad block selector index {k}")));
        }
        seen[k] = true;
    }
    let drop: Vec<usize> = (0..n).filter(|&i| !seen[i]).collect();
    let alpha = m.select_rows(keep).select_columns(keep);
    if drop.is_empty() {
        return Ok(alpha);
    }
    let beta = m.select_rows(keep).select_columns(&drop);
    let delta = m.select_rows(&drop).select_columns(&drop);
    let inv = if pseudo {
        pinv_psd(&delta, pinv_cutoff)?
    } else {
        delta.clone().try_inverse().ok_or_else(|| Error::NumericalDegeneracy("singular block in Schur complement".into()))?
    };
    Ok(alpha - &beta * inv * beta.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use proptest::prelude::*;

    fn std_cm(a: f64, b: f64, kx: f64, kp: f64) -> Mat {
        Mat::from_row_slice(4, 4, &[a, 0., kx, 0., 0., a, 0., -kp, kx, 0., b, 0., 0., -kp, 0., b])
    }

    #[test]
    fn symplectic_form_is_antisymmetric_and_squares_to_minus_identity() {
        let om = symplectic_form(3);
        assert_eq!(&om + om.transpose(), Mat::zeros(6, 6));
        assert_eq!(&om * &om, -Mat::identity(6, 6));
    }

    #[test]
    fn vacuum_and_thermal_spectra() {
        let nu = symplectic_eigenvalues(&Mat::identity(4, 4)).unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-12 && (nu[1] - 1.0).abs() < 1e-12);
        let thermal = direct_sum(&(Mat::identity(2, 2) * 3.0), &(Mat::identity(2, 2) * 2.0));
        let nu = symplectic_eigenvalues(&thermal).unwrap();
        assert!((nu[0] - 3.0).abs() < 1e-12 && (nu[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_rejects_bad_shapes() {
        assert!(matches!(symplectic_eigenvalues(&Mat::identity(3, 3)), Err(Error::ShapeMismatch(_))));
        assert!(matches!(symplectic_eigenvalues(&Mat::zeros(2, 4)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn symmetric_route_is_used_and_exact() {
        let (a, kp) = (1.5, 0.5);
        let kx = a - 1.0 / (a + kp);
        let g = std_cm(a, a, kx, kp);
        let w = williamson(&g).unwrap();
        assert_eq!(w.route, WilliamsonRoute::SymmetricStandardForm);
        assert!(w.residual(&g) < 1e-12);
        assert!((w.nu[0] - 2.5f64.sqrt()).abs() < 1e-12);
        assert!((w.nu[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_mode_squeezer_route_orders_modes() {
        for (a, b) in [(2.0f64, 1.5f64), (1.5, 2.0)] {
            let k = if a >= b { ((a + 1.0) * (b - 1.0)).sqrt() } else { ((a - 1.0) * (b + 1.0)).sqrt() };
            let g = std_cm(a, b, k, k);
            let w = williamson(&g).unwrap();
            assert_eq!(w.route, WilliamsonRoute::TwoModeSqueezer);
            assert!(w.residual(&g) < 1e-12);
            assert!((w.nu[0] - 1.5).abs() < 1e-12 && (w.nu[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generic_route_handles_degenerate_spectrum() {
        let s = build_symplectic(&SymplecticKind::TwoModeSqueezer { x: 2f64.sqrt(), y: 1.0 }).unwrap();
        let rot = build_symplectic(&SymplecticKind::LocalRotations { phi_a: 0.3, phi_b: -1.1 }).unwrap();
        let g = &rot * &s * (Mat::identity(4, 4) * 1.7) * s.transpose() * rot.transpose();
        let w = williamson(&g).unwrap();
        assert_eq!(w.route, WilliamsonRoute::Generic);
        assert!(w.residual(&g) < 1e-10);
        assert!(symplectic_residual(&w.s).unwrap() < 1e-10);
    }

    #[test]
    fn schur_complement_of_block_diagonal_is_the_kept_block() {
        let m = direct_sum(&mat2(2.0, 0.5, 0.5, 1.0), &mat2(3.0, 0.0, 0.0, 0.0));
        let s = schur_complement(&m, &[0, 1], true).unwrap();
        assert!(max_abs(&(s - mat2(2.0, 0.5, 0.5, 1.0))) < 1e-15);
        assert!(schur_complement(&m, &[0, 1], false).is_err());
        assert!(schur_complement(&m, &[0, 7], true).is_err());
    }

    #[test]
    fn schur_complement_matches_gaussian_conditioning() {
        let m = Mat::from_row_slice(3, 3, &[4.0, 1.0, 2.0, 1.0, 3.0, 0.5, 2.0, 0.5, 2.0]);
        let s = schur_complement(&m, &[0, 1], false).unwrap();
        let expected = Mat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 2.875]);
        assert!(max_abs(&(s - expected)) < 1e-14);
    }

    fn random_symplectic(params: &[f64]) -> Mat {
        let r1 = build_symplectic(&SymplecticKind::LocalRotations { phi_a: params[0], phi_b: params[1] }).unwrap();
        let sq = build_symplectic(&SymplecticKind::LocalSqueezers { s_a: params[2].exp(), s_b: params[3].exp() }).unwrap();
        let bs = build_symplectic(&SymplecticKind::BalancedBeamSplitter).unwrap();
        let r2 = build_symplectic(&SymplecticKind::LocalRotations { phi_a: params[4], phi_b: params[5] }).unwrap();
        r2 * bs * sq * r1
    }

    proptest! {
        #[test]
        fn spectrum_invariant_under_symplectic_congruence(
            nu1 in 1.0..4.0f64, nu2 in 1.0..4.0f64,
            params in proptest::collection::vec(-1.0..1.0f64, 6),
        ) {
            let d = Mat::from_diagonal(&Vector::from_vec(vec![nu1, nu1, nu2, nu2]));
            let s = random_symplectic(&params);
            let g = &s * d * s.transpose();
            let nus = symplectic_eigenvalues(&g).unwrap();
            prop_assert!((nus[0] - nu1.max(nu2)).abs() < 1e-8);
            prop_assert!((nus[1] - nu1.min(nu2)).abs() < 1e-8);
            let w = williamson(&g).unwrap();
            prop_assert!(w.residual(&g) < 1e-8);
            prop_assert!(symplectic_residual(&w.s).unwrap() < 1e-9 * max_abs(&w.s).powi(2).max(1.0));
        }

        #[test]
        fn closed_form_spectrum_matches_numeric(a in 1.0..3.0f64, b in 1.0..3.0f64, fx in 0.0..1.0f64, fp in -1.0..1.0f64) {
            let kx = fx * ((a * a - 1.0) * (b * b - 1.0)).sqrt().min(a.min(b));
            let kp = fp * kx;
            let g = std_cm(a, b, kx, kp);
            prop_assume!(sym_eigen(&g).0[0] > 1e-6);
            let num = symplectic_eigenvalues(&g).unwrap();
            let (n1, n2) = standard_form_symplectic_eigenvalues(a, b, kx, kp);
            prop_assert!((num[0] - n1).abs() < 1e-8 && (num[1] - n2).abs() < 1e-8);
        }

        #[test]
        fn inverse_is_inverse(params in proptest::collection::vec(-1.0..1.0f64, 6)) {
            let s = random_symplectic(&params);
            let prod = &s * symplectic_inverse(&s).unwrap();
            prop_assert!(max_abs(&(prod - Mat::identity(4, 4))) < 1e-10);
        }
    }
}
