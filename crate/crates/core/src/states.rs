//! Two-mode standard forms and the state families with closed-form results.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, sym_eigen, symmetry_defect, Mat};
use crate::symplectic::{standard_form_symplectic_eigenvalues, symplectic_eigenvalues};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Standard form `γ = [[a I, diag(kx, -kp)], [diag(kx, -kp), b I]]`.
///
/// Entangled standard forms have `kx ≥ kp > 0`. A negative `kp` means the
/// off-diagonal block has a positive determinant, which is always separable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdForm {
    pub a: f64,
    pub b: f64,
    pub kx: f64,
    pub kp: f64,
}

impl StdForm {
    /// Checked constructor: the parameters must describe a physical state.
    pub fn new(a: f64, b: f64, kx: f64, kp: f64) -> Result<StdForm> {
        let p = StdForm { a, b, kx, kp };
        if ![a, b, kx, kp].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("standard-form parameters must be finite".into()));
        }
        if !p.is_physical(Config::default().physical_tol) {
            let (_, nu2) = p.symplectic_eigenvalues();
            return Err(Error::Unphysical(format!("a={a}, b={b}, kx={kx}, kp={kp} has smallest symplectic eigenvalue {nu2:.12}")));
        }
        Ok(p)
    }

    pub fn covariance(&self) -> Mat {
        let StdForm { a, b, kx, kp } = *self;
        Mat::from_row_slice(4, 4, &[a, 0., kx, 0., 0., a, 0., -kp, kx, 0., b, 0., 0., -kp, 0., b])
    }

    /// `(ν₁, ν₂)`, descending.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        standard_form_symplectic_eigenvalues(self.a, self.b, self.kx, self.kp)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        let StdForm { a, b, kx, kp } = *self;
        a > 0.0 && b > 0.0 && a * b - kx * kx > 0.0 && a * b - kp * kp > 0.0 && self.symplectic_eigenvalues().1 >= 1.0 - tol
    }

    pub fn is_symmetric(&self) -> bool {
        (self.a - self.b).abs() <= 1e-12 * self.a.abs().max(self.b.abs()).max(1.0)
    }

    /// Smallest symplectic eigenvalue of the partially transposed state.
    pub fn ppt_nu_min(&self) -> f64 {
        standard_form_symplectic_eigenvalues(self.a, self.b, self.kx, -self.kp).1
    }

    pub fn is_separable(&self) -> bool {
        is_separable(self)
    }

    pub fn det_gamma(&self) -> f64 {
        let ab = self.a * self.b;
        (ab - self.kx * self.kx) * (ab - self.kp * self.kp)
    }
}

/// PPT test: separable iff the partially transposed `ν₋ ≥ 1 - 1e-10`.
pub fn is_separable(p: &StdForm) -> bool {
    p.kx * p.kp <= 0.0 || p.ppt_nu_min() >= 1.0 - Config::default().separable_tol
}

/// Smallest symplectic eigenvalue of `Θ γ Θ`, `Θ = diag(1, 1, 1, -1)`.
pub fn ppt_nu_min(gamma: &Mat) -> Result<f64> {
    if gamma.shape() != (4, 4) {
        return Err(Error::ShapeMismatch("partial transpose needs a two-mode matrix".into()));
    }
    let mut pt = gamma.clone();
    for i in 0..4 {
        if i != 3 {
            pt[(i, 3)] = -pt[(i, 3)];
            pt[(3, i)] = -pt[(3, i)];
        }
    }
    Ok(symplectic_eigenvalues(&pt)?[1])
}

/// Standard form of a two-mode covariance matrix from its local symplectic
/// invariants `det A`, `det B`, `det C` and `det γ`.
pub fn to_std_form(gamma: &Mat) -> Result<StdForm> {
    if gamma.shape() != (4, 4) {
        return Err(Error::ShapeMismatch(format!("expected 4x4, got {}x{}", gamma.nrows(), gamma.ncols())));
    }
    if gamma.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("covariance matrix has non-finite entries".into()));
    }
    if symmetry_defect(gamma) > 1e-9 * max_abs(gamma).max(1.0) {
        return Err(Error::InvalidInput("covariance matrix is not symmetric".into()));
    }
    if sym_eigen(gamma).0[0] <= 0.0 {
        return Err(Error::Unphysical("covariance matrix is not positive definite".into()));
    }
    let nus = symplectic_eigenvalues(gamma)?;
    if nus[1] < 1.0 - Config::default().physical_tol {
        return Err(Error::Unphysical(format!("smallest symplectic eigenvalue {:.12}", nus[1])));
    }
    Ok(std_form_invariants(gamma))
}

/// Standard-form parameters from the invariants alone, without the shape or
/// physicality checks of [`to_std_form`]. Used on conditional states whose
/// purity is only accurate to the conditioning of Eve's seed.
pub fn std_form_invariants(gamma: &Mat) -> StdForm {
    let block = |r: usize, c: usize| gamma[(r, c)] * gamma[(r + 1, c + 1)] - gamma[(r, c + 1)] * gamma[(r + 1, c)];
    let det_a = block(0, 0);
    let det_b = block(2, 2);
    let det_c = block(0, 2);
    let det_g = gamma.determinant();
    let a = det_a.max(0.0).sqrt();
    let b = det_b.max(0.0).sqrt();
    let prod = -det_c;
    let ab = a * b;
    let sum_sq = (ab * ab + prod * prod - det_g) / ab;
    let disc = (sum_sq * sum_sq - 4.0 * prod * prod).max(0.0);
    let kx_sq = (0.5 * (sum_sq + disc.sqrt())).max(0.0);
    let kx = kx_sq.sqrt();
    let kp = if kx > 0.0 { prod / kx } else { 0.0 };
    StdForm { a, b, kx, kp }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    Pure,
    SymGlems,
    SymSqThermal,
    AsymGlems,
    CvGhz,
    Generic,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 6] =
        [FamilyTag::Pure, FamilyTag::SymGlems, FamilyTag::SymSqThermal, FamilyTag::AsymGlems, FamilyTag::CvGhz, FamilyTag::Generic];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Pure => "pure",
            FamilyTag::SymGlems => "sym-glems",
            FamilyTag::SymSqThermal => "sym-sq-thermal",
            FamilyTag::AsymGlems => "asym-glems",
            FamilyTag::CvGhz => "cv-ghz",
            FamilyTag::Generic => "generic",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<FamilyTag> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        FamilyTag::ALL.into_iter().find(|t| t.name() == norm).ok_or_else(|| Error::InvalidInput(format!("unknown family `{s}`")))
    }
}

/// A two-mode Gaussian state described by its family parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateFamily {
    /// Two-mode squeezed vacuum with local determinant `a²`.
    Pure {
        a: f64,
    },
    /// Symmetric state with one unit symplectic eigenvalue: `kx = a - 1/(a + kp)`.
    SymGlems {
        a: f64,
        kp: f64,
    },
    /// Symmetric squeezed thermal state, `kx = kp = k`.
    SymSqThermal {
        a: f64,
        k: f64,
    },
    /// Asymmetric state with one unit symplectic eigenvalue and `kx = kp`.
    AsymGlems {
        a: f64,
        b: f64,
    },
    /// Two-mode reduction of the three-mode continuous-variable GHZ state.
    CvGhz {
        r: f64,
    },
    Generic(StdForm),
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("family parameters must be finite".into()))
    }
}

/// `x₊`, `x₋` of the GHZ reduction.
pub fn ghz_variances(r: f64) -> (f64, f64) {
    let plus = ((2.0 * r).exp() + 2.0 * (-2.0 * r).exp()) / 3.0;
    let minus = ((-2.0 * r).exp() + 2.0 * (2.0 * r).exp()) / 3.0;
    (plus, minus)
}

/// `k` of the asymmetric family, chosen so that one symplectic eigenvalue is 1.
pub fn asym_glems_coupling(a: f64, b: f64) -> f64 {
    if a >= b {
        ((a + 1.0) * (b - 1.0)).max(0.0).sqrt()
    } else {
        ((a - 1.0) * (b + 1.0)).max(0.0).sqrt()
    }
}

impl StateFamily {
    pub fn tag(&self) -> FamilyTag {
        match self {
            StateFamily::Pure { .. } => FamilyTag::Pure,
            StateFamily::SymGlems { .. } => FamilyTag::SymGlems,
            StateFamily::SymSqThermal { .. } => FamilyTag::SymSqThermal,
            StateFamily::AsymGlems { .. } => FamilyTag::AsymGlems,
            StateFamily::CvGhz { .. } => FamilyTag::CvGhz,
            StateFamily::Generic(_) => FamilyTag::Generic,
        }
    }

    /// Checks the family preconditions and returns the standard form.
    pub fn std_form(&self) -> Result<StdForm> {
        make_family(self)
    }

    /// The GHZ reduction as the symmetric family it belongs to; other families unchanged.
    pub fn canonical(&self) -> Result<StateFamily> {
        match *self {
            StateFamily::CvGhz { .. } => {
                let p = self.std_form()?;
                Ok(StateFamily::SymGlems { a: p.a, kp: p.kp })
            }
            other => {
                other.std_form()?;
                Ok(other)
            }
        }
    }
}

/// Standard form of a family member, after checking its preconditions.
pub fn make_family(fam: &StateFamily) -> Result<StdForm> {
    let slack = 1e-12;
    match *fam {
        StateFamily::Pure { a } => {
            finite(&[a])?;
            if a < 1.0 {
                return Err(Error::InvalidInput(format!("pure family needs a ≥ 1, got {a}")));
            }
            let k = (a * a - 1.0).sqrt();
            Ok(StdForm { a, b: a, kx: k, kp: k })
        }
        StateFamily::SymGlems { a, kp } => {
            finite(&[a, kp])?;
            if a < 1.0 || kp < 0.0 {
                return Err(Error::InvalidInput(format!("sym-glems needs a ≥ 1 and kp ≥ 0, got a={a}, kp={kp}")));
            }
            if kp * kp > a * a - 1.0 + slack {
                return Err(Error::Unphysical(format!("sym-glems needs kp ≤ √(a²-1), got a={a}, kp={kp}")));
            }
            let kp = kp.min((a * a - 1.0).sqrt());
            Ok(StdForm { a, b: a, kx: a - 1.0 / (a + kp), kp })
        }
        StateFamily::SymSqThermal { a, k } => {
            finite(&[a, k])?;
            if k < 0.0 {
                return Err(Error::InvalidInput(format!("sym-sq-thermal needs k ≥ 0, got {k}")));
            }
            if a * a - k * k < 1.0 - slack {
                return Err(Error::Unphysical(format!("sym-sq-thermal needs a² - k² ≥ 1, got a={a}, k={k}")));
            }
            Ok(StdForm { a, b: a, kx: k, kp: k })
        }
        StateFamily::AsymGlems { a, b } => {
            finite(&[a, b])?;
            if a < 1.0 || b < 1.0 {
                return Err(Error::InvalidInput(format!("asym-glems needs a, b ≥ 1, got a={a}, b={b}")));
            }
            let k = asym_glems_coupling(a, b);
            Ok(StdForm { a, b, kx: k, kp: k })
        }
        StateFamily::CvGhz { r } => {
            finite(&[r])?;
            if !(0.0..=50.0).contains(&r) {
                return Err(Error::InvalidInput(format!("cv-ghz needs 0 ≤ r ≤ 50, got {r}")));
            }
            let (plus, minus) = ghz_variances(r);
            let a = (plus * minus).sqrt();
            let kx = (minus / plus).sqrt() * (minus - plus);
            let kp = (plus / minus).sqrt() * (minus - plus);
            Ok(StdForm { a, b: a, kx, kp })
        }
        StateFamily::Generic(p) => StdForm::new(p.a, p.b, p.kx, p.kp),
    }
}
