//! Gaussian intrinsic entanglement (GIE): closed forms for the covered
//! families and independent numerical evaluation over Eve's measurements.
//!
//! The numerical value fixes `x` homodyne detection on Alice and Bob and
//! minimizes the mutual information `f` over Eve's Gaussian measurements. At
//! Eve's optimum the conditional mutual information (the supremum over Alice
//! and Bob) is also reported; when both agree the value is certified from
//! below and above.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::information::{gcmi, mutual_information_conditional, mutual_information_f};
use crate::linalg::{det_rank_one_update, direct_sum, mat2, Mat, Vector};
use crate::measurement::{condition_on_e, GaussianMeasurement};
use crate::optimize::{minimize, Axis, Minimum, TracePoint};
use crate::purification::{purify_with, Purification};
use crate::states::{ghz_variances, make_family, std_form_invariants, FamilyTag, StateFamily, StdForm};
use crate::symplectic::{quadrature_reorder, rotation};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForm {
    /// `None` when no closed form is available for the state.
    pub value: Option<f64>,
    /// The value is proven for this state.
    pub verified: bool,
    /// Why the value is not proven, if it is not.
    pub note: Option<String>,
}

/// GIE in nats, or `DomainNotCovered` (carrying the unproven value) outside
/// the proven domains.
pub fn gie_closed_form(fam: &StateFamily) -> Result<f64> {
    let c = evaluate_closed_form(fam)?;
    match (c.value, c.verified) {
        (Some(v), true) => Ok(v),
        (value, _) => Err(Error::DomainNotCovered { value, reason: c.note.unwrap_or_else(|| "no closed form".into()) }),
    }
}

pub fn evaluate_closed_form(fam: &StateFamily) -> Result<ClosedForm> {
    evaluate_closed_form_with(fam, &Config::default())
}

pub fn evaluate_closed_form_with(fam: &StateFamily, cfg: &Config) -> Result<ClosedForm> {
    let p = make_family(fam)?;
    let proven = |v: f64| ClosedForm { value: Some(v), verified: true, note: None };
    if p.is_separable() {
        return Ok(proven(0.0));
    }
    let limit = cfg.validity_threshold;
    Ok(match *fam {
        StateFamily::Pure { a } => proven(a.ln()),
        StateFamily::SymGlems { a, kp } => proven((a / (a * a - kp * kp).sqrt()).ln()),
        StateFamily::CvGhz { r } => {
            let (plus, minus) = ghz_variances(r);
            proven((minus / (r.exp() * plus.sqrt())).ln())
        }
        StateFamily::SymSqThermal { a, k } => {
            let d = a - k;
            let value = ((d * d + 1.0) / (2.0 * d)).ln();
            if a <= limit {
                proven(value)
            } else {
                ClosedForm { value: Some(value), verified: false, note: Some(format!("a = {a} exceeds {limit}")) }
            }
        }
        StateFamily::AsymGlems { a, b } => {
            if a == b {
                proven(a.ln())
            } else {
                let value = ((a + b) / ((a - b).abs() + 2.0)).ln();
                if (a * b).sqrt() <= limit {
                    proven(value)
                } else {
                    ClosedForm { value: Some(value), verified: false, note: Some(format!("√(ab) = {} exceeds {limit}", (a * b).sqrt())) }
                }
            }
        }
        StateFamily::Generic(p) => {
            if p.is_symmetric() {
                let nu = p.ppt_nu_min();
                ClosedForm {
                    value: Some(((nu + 1.0 / nu) / 2.0).ln()),
                    verified: false,
                    note: Some("generic symmetric state: value conjectured equal to GR2".into()),
                }
            } else {
                ClosedForm { value: None, verified: false, note: Some("generic entangled asymmetric state".into()) }
            }
        }
    })
}

/// Eve's optimal measurement where it is known analytically.
pub fn analytic_eve_optimum(fam: &StateFamily) -> Option<&'static str> {
    let p = make_family(fam).ok()?;
    if p.is_separable() && !matches!(fam, StateFamily::Pure { .. }) {
        return None;
    }
    match *fam {
        StateFamily::Pure { .. } => Some("heterodyne E"),
        StateFamily::SymGlems { .. } | StateFamily::CvGhz { .. } => Some("homodyne x_E"),
        StateFamily::SymSqThermal { .. } => Some("homodyne x_EA, p_EB"),
        StateFamily::AsymGlems { .. } => Some("heterodyne E"),
        StateFamily::Generic(_) => None,
    }
}

/// `(U₁, U₂, U₃)` for the symmetric family with one unit symplectic
/// eigenvalue: Eve homodynes `p`, heterodynes, or homodynes `x`.
pub fn sym_glems_candidates(a: f64, kp: f64) -> Result<[f64; 3]> {
    let p = make_family(&StateFamily::SymGlems { a, kp })?;
    let kx = p.kx;
    if a - kx <= 0.0 {
        return Err(Error::InvalidInput("candidates need a > kx".into()));
    }
    let z_a = ((a + kx) / (a - kp)).powf(0.25);
    let z_b = ((a + kp) / (a - kx)).powf(0.25);
    let z = z_a * z_b;
    Ok([(a / (a * a - kx * kx).sqrt()).ln(), ((z + 1.0 / z) / 2.0).ln(), (a / (a * a - kp * kp).sqrt()).ln()])
}

/// Eigen-parametrization `Q(φ, λ₁, λ₂) = P(φ) diag(λ₁, λ₂) Pᵀ(φ)` of the
/// `x` block of Eve's two-mode seed, whose `p` block is `Q⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedSpectrum {
    pub phi: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl SeedSpectrum {
    fn check(&self) -> Result<()> {
        let SeedSpectrum { phi, lambda1, lambda2 } = *self;
        if !phi.is_finite() || lambda2.is_nan() || lambda1.is_nan() || lambda2 < 0.0 || lambda1 < lambda2 || lambda2 == f64::INFINITY {
            return Err(Error::InvalidInput(format!("need λ₁ ≥ λ₂ ≥ 0, got λ₁={lambda1}, λ₂={lambda2}, φ={phi}")));
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<Mat> {
        self.check()?;
        if !self.lambda1.is_finite() {
            return Err(Error::InvalidInput("Q has no finite matrix at λ₁ = ∞".into()));
        }
        let lp = (self.lambda1 + self.lambda2) / 2.0;
        let lm = (self.lambda1 - self.lambda2) / 2.0;
        let (s, c) = (2.0 * self.phi).sin_cos();
        Ok(mat2(lp + lm * c, lm * s, lm * s, lp - lm * c))
    }

    /// Eve's seed `Λᵀ (Q ⊕ Q⁻¹) Λ` in `(x, p)` mode ordering.
    pub fn seed(&self) -> Result<Mat> {
        let q = self.matrix()?;
        if !(self.lambda2 > 0.0) {
            return Err(Error::InvalidInput("seed needs λ₂ > 0".into()));
        }
        let qinv = q.clone().try_inverse().ok_or_else(|| Error::NumericalDegeneracy("singular Q".into()))?;
        let lam = quadrature_reorder(2);
        Ok(lam.transpose() * direct_sum(&q, &qinv) * lam)
    }
}

fn check_thermal(a: f64, k: f64) -> Result<f64> {
    if !(a.is_finite() && k.is_finite()) || k < 0.0 || a * a - k * k < 1.0 - 1e-12 {
        return Err(Error::InvalidInput(format!("need k ≥ 0 and a² - k² ≥ 1, got a={a}, k={k}")));
    }
    Ok((a * a - k * k).max(1.0).sqrt())
}

/// Reduced form of the Eve-dependent factor for the symmetric squeezed
/// thermal state with `x` homodyne on Alice and Bob:
/// `K = (a²-k²)/a² + [(k/a) E + F cos 2φ]² / (E² - F²)`.
///
/// `λ₁ = ∞` is evaluated as a limit.
pub fn k_h(q: &SeedSpectrum, a: f64, k: f64) -> Result<f64> {
    q.check()?;
    let nu = check_thermal(a, k)?;
    let ch = (nu + 1.0 / nu) / 2.0;
    let sh = (nu - 1.0 / nu) / 2.0;
    let h = |l: f64| 1.0 + 2.0 * ch * l + l * l;
    let (l1, l2) = (q.lambda1, q.lambda2);
    let (e, f, den) = if l1.is_infinite() {
        (l2 + ch, sh, h(l2))
    } else {
        let s = l1.max(1.0);
        ((1.0 + l1 * l2 + ch * (l1 + l2)) / s, sh * (l1 - l2) / s, (h(l1) / (s * s)) * h(l2))
    };
    if !(den > 0.0) || e * e <= f * f * (1.0 - 1e-15) {
        return Err(Error::InvalidInput("E² ≤ F²".into()));
    }
    let num = (k / a) * e + f * (2.0 * q.phi).cos();
    Ok(nu * nu / (a * a) + num * num / den)
}

fn thermal_blocks(a: f64, k: f64) -> Result<(f64, f64, Mat, Mat, Mat)> {
    let nu = check_thermal(a, k)?;
    let z2 = ((a + k) / (a - k)).sqrt();
    let c = (nu * nu - 1.0) / (2.0 * a);
    let mut x_a = Mat::from_diagonal(&Vector::from_vec(vec![nu - c * z2, nu, nu - c / z2, nu]));
    x_a[(0, 2)] = c;
    x_a[(2, 0)] = c;
    let mut x_b = x_a.clone();
    x_b[(0, 2)] = -c;
    x_b[(2, 0)] = -c;
    let x_ab = Mat::from_diagonal(&Vector::from_vec(vec![1.0 / nu, nu, 1.0 / nu, nu]));
    Ok((nu, z2, x_a, x_b, x_ab))
}

/// The same factor from the unreduced determinant ratio
/// `det(Γ+X_A) det(Γ+X_B) / (det(Γ+X_AB) det(Γ+γ_E))` with explicit `4x4`
/// blocks. Needs finite `λ₁` and `λ₂ > 0`.
pub fn k_h_determinant(q: &SeedSpectrum, a: f64, k: f64) -> Result<f64> {
    let (nu, _, x_a, x_b, x_ab) = thermal_blocks(a, k)?;
    let g = q.seed()?;
    let gamma_e = Mat::identity(4, 4) * nu;
    Ok((&g + x_a).determinant() * (&g + x_b).determinant() / ((&g + x_ab).determinant() * (&g + gamma_e).determinant()))
}

/// The same factor as a product of two rank-one determinant updates of
/// `Q + ν I` and `Q + I/ν`. Needs finite `λ₁`.
pub fn k_h_rank_one(q: &SeedSpectrum, a: f64, k: f64) -> Result<f64> {
    let nu = check_thermal(a, k)?;
    let qm = q.matrix()?;
    let z2 = ((a + k) / (a - k)).sqrt();
    let norm = (z2 * z2 + 1.0).sqrt();
    let scale = (nu - 1.0 / nu).sqrt();
    let chi_a = Vector::from_vec(vec![z2 / norm, -1.0 / norm]) * scale;
    let chi_b = Vector::from_vec(vec![-1.0 / norm, z2 / norm]) * scale;
    let m1 = &qm + Mat::identity(2, 2) * nu;
    let m2 = &qm + Mat::identity(2, 2) / nu;
    let f1 = det_rank_one_update(&m1, &(-&chi_a), &chi_a)? / m1.determinant();
    let f2 = det_rank_one_update(&m2, &chi_b, &chi_b)? / m2.determinant();
    Ok(f1 * f2)
}

/// `R_max = 1/(1 + 2/(a² - k² - 1))`, the supremum of `F/E`.
pub fn r_max(a: f64, k: f64) -> f64 {
    1.0 / (1.0 + 2.0 / (a * a - k * k - 1.0))
}

/// `K_min = (a² - k²)/a² [((a-k)² + 1)/(2(a-k))]²`.
pub fn k_min(a: f64, k: f64) -> f64 {
    let d = a - k;
    (a * a - k * k) / (a * a) * ((d * d + 1.0) / (2.0 * d)).powi(2)
}

#[derive(Debug, Clone, Serialize)]
pub struct GieResult {
    pub family: FamilyTag,
    pub params: StdForm,
    pub closed_form: Option<f64>,
    pub verified: bool,
    /// Minimum over Eve's measurements of `f` with `x` homodyne on Alice and Bob.
    pub numeric: f64,
    /// `|numeric - closed_form|`.
    pub discrepancy: Option<f64>,
    pub eve_optimum: String,
    /// Conditional mutual information of the state conditioned at Eve's optimum.
    pub upper_bound: Option<f64>,
    /// Named side quantities, e.g. the smallest gate value seen along the trace.
    pub diagnostics: Vec<(String, f64)>,
    pub trace: Vec<TracePoint>,
    pub evaluations: usize,
    /// False when the local refinement hit its sweep limit.
    pub converged: bool,
}

impl GieResult {
    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

fn x_homodyne() -> GaussianMeasurement {
    GaussianMeasurement::homodyne_x(1)
}

/// Numerical GIE of a family member.
pub fn gie_numeric(fam: &StateFamily, cfg: &Config) -> Result<GieResult> {
    let p = make_family(fam)?;
    let closed = evaluate_closed_form_with(fam, cfg)?;
    let mut result = if p.is_separable() {
        numeric_separable(&p, cfg)?
    } else {
        match *fam {
            StateFamily::Pure { .. } => numeric_pure(&p, cfg)?,
            StateFamily::SymGlems { .. } | StateFamily::CvGhz { .. } => numeric_single_eve(&p, cfg, true)?,
            StateFamily::AsymGlems { a, b } => {
                if a == b {
                    numeric_pure(&p, cfg)?
                } else {
                    let mut r = numeric_single_eve(&p, cfg, false)?;
                    let (h, h_closed) = asym_glems_h_scan(a, b, cfg)?;
                    r.diagnostics.push(("h_min".into(), h));
                    r.diagnostics.push(("h_min_closed".into(), h_closed));
                    r
                }
            }
            StateFamily::SymSqThermal { a, k } => numeric_sym_sq_thermal(a, k, cfg)?,
            StateFamily::Generic(_) => {
                return Err(Error::DomainNotCovered { value: closed.value, reason: "numerical GIE of a generic entangled state".into() })
            }
        }
    };
    result.family = fam.tag();
    result.params = p;
    result.closed_form = closed.value;
    result.verified = closed.verified;
    result.discrepancy = closed.value.map(|c| (c - result.numeric).abs());
    Ok(result)
}

fn empty_result(p: &StdForm, numeric: f64, eve_optimum: String) -> GieResult {
    GieResult {
        family: FamilyTag::Generic,
        params: *p,
        closed_form: None,
        verified: false,
        numeric,
        discrepancy: None,
        eve_optimum,
        upper_bound: None,
        diagnostics: Vec::new(),
        trace: Vec::new(),
        evaluations: 1,
        converged: true,
    }
}

fn upper_bound_at(pi: &Purification, ge: &GaussianMeasurement, cfg: &Config) -> Result<f64> {
    let cond = std_form_invariants(&condition_on_e(pi, ge)?);
    Ok(gcmi(&cond, cfg)?.value)
}

fn numeric_pure(p: &StdForm, cfg: &Config) -> Result<GieResult> {
    let pi = purify_with(&p.covariance(), cfg)?;
    let none = GaussianMeasurement::heterodyne(0);
    let f = mutual_information_f(&pi, &x_homodyne(), &x_homodyne(), &none)?;
    // every Eve measurement ties; report the first candidate
    let mut r = empty_result(p, f, "heterodyne E".into());
    r.upper_bound = Some(upper_bound_at(&pi, &none, cfg)?);
    Ok(r)
}

/// Eve's single-mode seed from `(φ, ln τ, t)`; `t = ∞` is homodyne at `φ + π/2`.
pub fn single_mode_seed(params: &[f64]) -> Result<GaussianMeasurement> {
    GaussianMeasurement::single_mode(params[0], params[1].exp(), params[2])
}

fn single_eve_candidates() -> Vec<(String, Vec<f64>)> {
    vec![
        ("heterodyne E".to_string(), vec![0.0, 0.0, 0.0]),
        ("homodyne x_E".to_string(), vec![FRAC_PI_2, 0.0, f64::INFINITY]),
        ("homodyne p_E".to_string(), vec![0.0, 0.0, f64::INFINITY]),
    ]
}

fn describe_single(params: &[f64]) -> String {
    match single_mode_seed(params) {
        Ok(m @ GaussianMeasurement::Homodyne(_)) => m.describe(&["E"]),
        _ => format!("seed φ={:.9} τ={:.9} t={:.9} on E", params[0], params[1].exp(), params[2]),
    }
}

fn rotated_diag(phi: f64, d1: f64, d2: f64) -> Mat {
    let rot = rotation(phi);
    &rot * Mat::from_diagonal(&Vector::from_vec(vec![d1, d2])) * rot.transpose()
}

fn isotropic_e(pi: &Purification) -> Option<f64> {
    let nu = pi.gamma_e[(0, 0)];
    let n = pi.gamma_e.nrows();
    (n > 0 && crate::linalg::max_abs(&(&pi.gamma_e - Mat::identity(n, n) * nu)) < 1e-12).then_some(nu)
}

/// Alice and Bob conditioned on Eve's single-mode seed `(φ, ln τ, t)`.
///
/// With `γ_E = ν I` the inverse `(γ_E + Γ_E)⁻¹` comes straight from the
/// seed's spectrum, so large `t` does not lose the squeezed eigenvalue.
pub fn single_mode_conditional(pi: &Purification, params: &[f64]) -> Result<Mat> {
    let ge = single_mode_seed(params)?;
    match (isotropic_e(pi), &ge) {
        (Some(nu), GaussianMeasurement::Finite(_)) if pi.r_count() == 1 => {
            let tau = params[1].exp();
            let (d1, d2) = (tau * (2.0 * params[2]).exp(), tau * (-2.0 * params[2]).exp());
            let inv = rotated_diag(params[0], 1.0 / (nu + d1), 1.0 / (nu + d2));
            let cond = &pi.gamma_ab - &pi.gamma_abe * inv * pi.gamma_abe.transpose();
            Ok((&cond + cond.transpose()) * 0.5)
        }
        _ => condition_on_e(pi, &ge),
    }
}

/// Minimizes `f(x_A, x_B | E)` over Eve's single-mode measurements.
fn numeric_single_eve(p: &StdForm, cfg: &Config, gate: bool) -> Result<GieResult> {
    let pi = purify_with(&p.covariance(), cfg)?;
    if pi.r_count() != 1 {
        return Err(Error::WrongFamily(format!("expected one purifying mode, found {}", pi.r_count())));
    }
    let axes = [
        Axis::periodic(0.0, PI, cfg.grid),
        Axis::linear(0.0, cfg.ln_tau_max, cfg.grid),
        Axis::linear(0.0, cfg.t_max, cfg.grid).with_extra(f64::INFINITY),
    ];
    let objective = |q: &[f64]| {
        let cond = single_mode_conditional(&pi, q).ok()?;
        mutual_information_conditional(&cond, &x_homodyne(), &x_homodyne()).ok()
    };
    let best: Minimum = minimize(&axes, &single_eve_candidates(), objective, cfg)?;
    let ge = single_mode_seed(&best.params)?;
    let mut r = empty_result(p, best.value, best.label.clone().unwrap_or_else(|| describe_single(&best.params)));
    r.upper_bound = Some(upper_bound_at(&pi, &ge, cfg)?);
    if gate {
        let mut min_gate = f64::INFINITY;
        for t in &best.trace {
            let cond = std_form_invariants(&single_mode_conditional(&pi, &t.params)?);
            min_gate = min_gate.min(sym_glems_gate(&cond));
        }
        r.diagnostics.push(("min_gate".into(), min_gate));
    }
    r.trace = best.trace;
    r.evaluations = best.evaluations;
    r.converged = best.converged;
    Ok(r)
}

/// `2 + 1/ã - √(ã² - k̃x²)` of a symmetric conditional state.
pub fn sym_glems_gate(cond: &StdForm) -> f64 {
    let a = (cond.a * cond.b).sqrt();
    2.0 + 1.0 / a - (a * a - cond.kx * cond.kx).max(0.0).sqrt()
}

/// Eve's measurement on the symmetric squeezed thermal purification for a
/// point `(φ, ln λ₁, ln λ₂)` of the seed-spectrum search.
pub fn thermal_seed_measurement(params: &[f64]) -> Result<GaussianMeasurement> {
    let q = SeedSpectrum { phi: params[0], lambda1: params[1].exp(), lambda2: params[2].exp() };
    if q.lambda1.is_infinite() && q.lambda2 == 0.0 {
        let t = q.phi.rem_euclid(PI);
        if (t - FRAC_PI_2).abs() < 1e-12 {
            return Ok(GaussianMeasurement::Homodyne(vec![0.0, FRAC_PI_2]));
        }
        if t.abs() < 1e-12 {
            return Ok(GaussianMeasurement::Homodyne(vec![FRAC_PI_2, 0.0]));
        }
        return Err(Error::InvalidInput("joint homodyne limit only at φ = 0 or π/2".into()));
    }
    Ok(GaussianMeasurement::Finite(q.seed()?))
}

/// Alice and Bob conditioned on the seed-spectrum point `(φ, ln λ₁, ln λ₂)`.
///
/// When Eve's modes are both thermal with the same `ν`, `(γ_E + Γ_E)⁻¹` is
/// assembled from the spectrum directly, which stays accurate when `Q` has
/// eigenvalues near `e^±24`.
pub fn thermal_conditional(pi: &Purification, params: &[f64]) -> Result<Mat> {
    let (l1, l2) = (params[1].exp(), params[2].exp());
    let nu = match isotropic_e(pi) {
        Some(nu) if pi.r_count() == 2 && l1.is_finite() && l2 > 0.0 => nu,
        _ => return condition_on_e(pi, &thermal_seed_measurement(params)?),
    };
    let x_inv = rotated_diag(params[0], 1.0 / (nu + l1), 1.0 / (nu + l2));
    let p_inv = rotated_diag(params[0], l1 / (nu * l1 + 1.0), l2 / (nu * l2 + 1.0));
    let lam = quadrature_reorder(2);
    let inv = lam.transpose() * direct_sum(&x_inv, &p_inv) * lam;
    let cond = &pi.gamma_ab - &pi.gamma_abe * inv * pi.gamma_abe.transpose();
    Ok((&cond + cond.transpose()) * 0.5)
}

fn numeric_sym_sq_thermal(a: f64, k: f64, cfg: &Config) -> Result<GieResult> {
    let p = make_family(&StateFamily::SymSqThermal { a, k })?;
    let pi = purify_with(&p.covariance(), cfg)?;
    let l = cfg.ln_lambda_max;
    let axes = [Axis::periodic(0.0, PI, cfg.grid), Axis::linear(-l, l, cfg.grid), Axis::linear(-l, l, cfg.grid)];
    let candidates = vec![
        ("heterodyne E_A, E_B".to_string(), vec![0.0, 0.0, 0.0]),
        ("homodyne x_EA, p_EB".to_string(), vec![FRAC_PI_2, f64::INFINITY, f64::NEG_INFINITY]),
    ];
    let objective = |q: &[f64]| {
        if q[2] > q[1] {
            return None;
        }
        k_h(&SeedSpectrum { phi: q[0], lambda1: q[1].exp(), lambda2: q[2].exp() }, a, k).ok()
    };
    let best = minimize(&axes, &candidates, objective, cfg)?;
    let i_h = 0.5 * (a * a / (a * a - k * k)).ln();
    let numeric = i_h + 0.5 * best.value.ln();
    let label = best.label.clone().unwrap_or_else(|| {
        format!("two-mode seed φ={:.9} ln λ₁={:.9} ln λ₂={:.9} on E_A, E_B", best.params[0], best.params[1], best.params[2])
    });
    let mut r = empty_result(&p, numeric, label);
    let cond = thermal_conditional(&pi, &best.params)?;
    r.diagnostics.push(("pipeline_at_optimum".into(), mutual_information_conditional(&cond, &x_homodyne(), &x_homodyne())?));
    r.upper_bound = Some(gcmi(&std_form_invariants(&cond), cfg)?.value);
    let mut max_excess = f64::NEG_INFINITY;
    for t in &best.trace {
        let cond = std_form_invariants(&thermal_conditional(&pi, &t.params)?);
        max_excess = max_excess.max((cond.a * cond.b).sqrt() - a);
    }
    r.diagnostics.push(("max_conditional_excess".into(), max_excess));
    r.trace = best.trace;
    r.evaluations = best.evaluations;
    r.converged = best.converged;
    Ok(r)
}

/// `h(Ṽx)` of the asymmetric family, scanned over `Ṽx ∈ [1, 1 + |a-b|]`.
/// Returns the scanned minimum and `1 - (|a-b| + 2)²/(a+b)²`.
pub fn asym_glems_h_scan(a: f64, b: f64, cfg: &Config) -> Result<(f64, f64)> {
    make_family(&StateFamily::AsymGlems { a, b })?;
    let gap = (a - b).abs();
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let xy2 = (hi + 1.0) * (lo - 1.0) / (gap + 2.0).powi(2);
    let h = |v: f64| 1.0 / (1.0 + v / (xy2 * (v + 1.0).powi(2)));
    let best = minimize(&[Axis::linear(1.0, 1.0 + gap, cfg.grid)], &[], |q| Some(h(q[0])), cfg)?;
    Ok((best.value, 1.0 - (gap + 2.0).powi(2) / (a + b).powi(2)))
}

/// Eve's measurement that leaves a separable state in a product state.
///
/// A separable standard form lies above a product of pure squeezed states
/// `diag(s_A, 1/s_A) ⊕ diag(s_B, 1/s_B)`. With two purifying modes the
/// matching seed is `Γ_E = γ_ABEᵀ N⁻¹ γ_ABE - γ_E`, `N = γ_AB - γ_product`.
pub fn separable_witness(p: &StdForm, cfg: &Config) -> Result<(Purification, GaussianMeasurement)> {
    if !p.is_separable() {
        return Err(Error::WrongFamily("state is entangled".into()));
    }
    let pi = purify_with(&p.covariance(), cfg)?;
    if pi.r_count() < 2 {
        return Err(Error::WrongFamily("witness needs two purifying modes".into()));
    }
    let StdForm { a, b, kx, kp } = *p;
    // for fixed s_A the admissible s_B form the interval [1/hi_p, hi_x]
    let bounds = |sa: f64| {
        let (dx, dp) = (a - sa, a - 1.0 / sa);
        if dx <= 0.0 || dp <= 0.0 {
            return None;
        }
        let (hi_x, hi_p) = (b - kx * kx / dx, b - kp * kp / dp);
        (hi_x > 0.0 && hi_p > 0.0).then_some((1.0 / hi_p, hi_x))
    };
    let ln_a = a.ln();
    let best =
        minimize(&[Axis::linear(-ln_a, ln_a, cfg.grid.max(1025))], &[], |q| bounds(q[0].exp()).map(|(lo, hi)| -(hi / lo).ln()), cfg)?;
    if -best.value <= 1e-12 {
        return Err(Error::NumericalDegeneracy("separable state on the boundary; no interior product state".into()));
    }
    let sa = best.params[0].exp();
    let (lo, hi) = bounds(sa).ok_or_else(|| Error::NumericalDegeneracy("witness search left the feasible set".into()))?;
    let sb = (lo * hi).sqrt();
    let product = Mat::from_diagonal(&Vector::from_vec(vec![sa, 1.0 / sa, sb, 1.0 / sb]));
    let n = &pi.gamma_ab - product;
    let n_inv = n.try_inverse().ok_or_else(|| Error::NumericalDegeneracy("singular noise block".into()))?;
    let seed = pi.gamma_abe.transpose() * n_inv * &pi.gamma_abe - &pi.gamma_e;
    let seed = (&seed + seed.transpose()) * 0.5;
    // the seed is pure; its symplectic eigenvalues are only as accurate as
    // its condition number allows
    let eig = crate::linalg::sym_eigen(&seed).0;
    let kappa = eig[eig.len() - 1] / eig[0];
    let nu_min = crate::symplectic::symplectic_eigenvalues(&seed)?.last().copied().unwrap_or(1.0);
    if !(eig[0] > 0.0) || nu_min < 1.0 - cfg.conditional_tol * kappa.max(1.0) {
        return Err(Error::Unphysical(format!("witness seed has symplectic eigenvalue {nu_min}")));
    }
    Ok((pi, GaussianMeasurement::Finite(seed)))
}

fn numeric_separable(p: &StdForm, cfg: &Config) -> Result<GieResult> {
    let pi = purify_with(&p.covariance(), cfg)?;
    match pi.r_count() {
        0 => numeric_pure(p, cfg),
        1 => numeric_single_eve(p, cfg, false),
        _ => {
            let (pi, ge) = separable_witness(p, cfg)?;
            let f = mutual_information_f(&pi, &x_homodyne(), &x_homodyne(), &ge)?;
            let mut r = empty_result(p, f, "seed projecting onto a product state".into());
            r.upper_bound = Some(upper_bound_at(&pi, &ge, cfg)?);
            Ok(r)
        }
    }
}
