//! Gaussian Rényi-2 entanglement of two-mode reductions of pure three-mode
//! states, and of symmetric two-mode states.

use crate::error::{Error, Result};
use crate::gie::evaluate_closed_form;
use crate::linalg::Mat;
use crate::states::{make_family, StateFamily, StdForm};
use serde::{Deserialize, Serialize};

/// Local parameters `a₁, a₂, a₃` of a pure three-mode standard form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeModeParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl ThreeModeParams {
    /// Checks `|aⱼ - aₖ| + 1 ≤ aᵢ ≤ aⱼ + aₖ - 1` for every mode.
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<ThreeModeParams> {
        let p = ThreeModeParams { a1, a2, a3 };
        let slack = 1e-12 * a1.max(a2).max(a3).max(1.0);
        for i in 0..3 {
            let (ai, aj, ak) = p.ordered(i);
            if !(ai.is_finite() && ai >= 1.0 - slack) {
                return Err(Error::InvalidInput(format!("local parameters must be ≥ 1, got {a1}, {a2}, {a3}")));
            }
            if ai < (aj - ak).abs() + 1.0 - slack || ai > aj + ak - 1.0 + slack {
                return Err(Error::Unphysical(format!("({a1}, {a2}, {a3}) is not a pure three-mode state")));
            }
        }
        Ok(p)
    }

    pub fn get(&self, i: usize) -> f64 {
        [self.a1, self.a2, self.a3][i]
    }

    /// `(aᵢ, aⱼ, aₖ)` with `i` first and the others in increasing order.
    fn ordered(&self, i: usize) -> (f64, f64, f64) {
        let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
        (self.get(i), self.get(others[0]), self.get(others[1]))
    }
}

/// Couplings `(c⁺ᵢ, c⁻ᵢ)` between the two modes other than `i`, for `i = 0, 1, 2`.
pub fn three_mode_couplings(p: &ThreeModeParams) -> [(f64, f64); 3] {
    let coupling = |i: usize| {
        let (ai, aj, ak) = p.ordered(i);
        let mm = ((ai - 1.0).powi(2) - (aj - ak).powi(2)).max(0.0);
        let pm = ((ai + 1.0).powi(2) - (aj - ak).powi(2)).max(0.0);
        let mp = (ai - 1.0).powi(2) - (aj + ak).powi(2);
        let pp = (ai + 1.0).powi(2) - (aj + ak).powi(2);
        let first = (mm * pm).sqrt();
        let second = (mp * pp).max(0.0).sqrt();
        let norm = 4.0 * (aj * ak).sqrt();
        ((first + second) / norm, (first - second) / norm)
    };
    [coupling(0), coupling(1), coupling(2)]
}

/// Covariance matrix of the pure three-mode standard form; `c⁺` couples the
/// `x` quadratures and `c⁻` the `p` quadratures.
pub fn three_mode_pure_cm(p: &ThreeModeParams) -> Mat {
    let c = three_mode_couplings(p);
    let mut g = Mat::zeros(6, 6);
    for i in 0..3 {
        g[(2 * i, 2 * i)] = p.get(i);
        g[(2 * i + 1, 2 * i + 1)] = p.get(i);
    }
    let mut put = |i: usize, j: usize, (cp, cm): (f64, f64)| {
        g[(2 * i, 2 * j)] = cp;
        g[(2 * j, 2 * i)] = cp;
        g[(2 * i + 1, 2 * j + 1)] = cm;
        g[(2 * j + 1, 2 * i + 1)] = cm;
    };
    put(0, 1, c[2]);
    put(0, 2, c[1]);
    put(1, 2, c[0]);
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gr2Branch {
    /// `aₖ ≥ √(aᵢ² + aⱼ² - 1)`: separable reduction.
    Separable,
    /// `αₖ < aₖ < √(aᵢ² + aⱼ² - 1)`.
    Intermediate,
    /// `aₖ ≤ αₖ`.
    Balanced,
    /// `aₖ = 1`: the reduction is pure.
    PureReduction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gr2 {
    pub value: f64,
    pub branch: Gr2Branch,
}

/// Threshold `αₖ` between the last two branches.
pub fn gr2_alpha(ai: f64, aj: f64) -> f64 {
    let s = ai * ai + aj * aj;
    let d = (ai * ai - aj * aj).abs();
    ((2.0 * s + d * d + d * (d * d + 8.0 * s).sqrt()) / (2.0 * s)).sqrt()
}

pub fn gr2_delta(p: &ThreeModeParams) -> f64 {
    let ThreeModeParams { a1, a2, a3 } = *p;
    (-1.0 + a1 - a2 - a3)
        * (1.0 + a1 - a2 - a3)
        * (-1.0 + a1 + a2 - a3)
        * (1.0 + a1 + a2 - a3)
        * (-1.0 + a1 - a2 + a3)
        * (1.0 + a1 - a2 + a3)
        * (-1.0 + a1 + a2 + a3)
        * (1.0 + a1 + a2 + a3)
}

pub fn gr2_zeta(p: &ThreeModeParams) -> f64 {
    let ThreeModeParams { a1, a2, a3 } = *p;
    let (s1, s2, s3) = (a1 * a1, a2 * a2, a3 * a3);
    -1.0 + 2.0 * (s1 + s2 + s3) + 2.0 * (s1 * s2 + s1 * s3 + s2 * s3) - (s1 * s1 + s2 * s2 + s3 * s3) - gr2_delta(p).max(0.0).sqrt()
}

/// GR2 of the two-mode reduction obtained by tracing out mode `traced`
/// (0-based).
///
/// Branch boundaries are compared with a `1e-9` slack that resolves ties
/// toward the first and last branches, where the values coincide.
pub fn gr2_two_mode_reduction(p: &ThreeModeParams, traced: usize) -> Result<Gr2> {
    if traced > 2 {
        return Err(Error::InvalidInput(format!("traced mode index {traced} out of range")));
    }
    let p = ThreeModeParams::new(p.a1, p.a2, p.a3)?;
    let (ak, ai, aj) = p.ordered(traced);
    let tie = 1e-9;
    if ak - 1.0 <= tie * ak {
        return Ok(Gr2 { value: ai.ln(), branch: Gr2Branch::PureReduction });
    }
    let upper = (ai * ai + aj * aj - 1.0).sqrt();
    let (g, branch) = if ak >= upper - tie {
        (1.0, Gr2Branch::Separable)
    } else if ak <= gr2_alpha(ai, aj) + tie {
        (((ai * ai - aj * aj) / (ak * ak - 1.0)).powi(2), Gr2Branch::Balanced)
    } else {
        (gr2_zeta(&p) / (8.0 * ak * ak), Gr2Branch::Intermediate)
    };
    if !(g > 0.0) {
        return Err(Error::NumericalDegeneracy(format!("GR2 argument {g:.3e} is not positive")));
    }
    Ok(Gr2 { value: 0.5 * g.ln().max(0.0), branch })
}

/// `ln[(ν₋ + 1/ν₋)/2]` with `ν₋` the partially transposed symplectic
/// eigenvalue; zero for separable states.
pub fn gr2_symmetric(p: &StdForm) -> Result<f64> {
    if !p.is_symmetric() {
        return Err(Error::WrongFamily(format!("a = {} and b = {} differ", p.a, p.b)));
    }
    if p.is_separable() {
        return Ok(0.0);
    }
    let nu = p.ppt_nu_min();
    Ok(((nu + 1.0 / nu) / 2.0).ln())
}

/// Three-mode parameters of the purification of the asymmetric family,
/// with Eve as mode 2.
pub fn asym_glems_three_mode(a: f64, b: f64) -> Result<ThreeModeParams> {
    ThreeModeParams::new(a, b, 1.0 + (a - b).abs())
}

/// GR2 of a family member: the three-mode route for the asymmetric family,
/// the symmetric formula otherwise.
pub fn gr2_family(fam: &StateFamily) -> Result<f64> {
    let p = make_family(fam)?;
    match *fam {
        StateFamily::AsymGlems { a, b } => Ok(gr2_two_mode_reduction(&asym_glems_three_mode(a, b)?, 2)?.value),
        StateFamily::Generic(_) if !p.is_symmetric() => {
            if p.is_separable() {
                Ok(0.0)
            } else {
                Err(Error::DomainNotCovered { value: None, reason: "GR2 of an asymmetric generic state".into() })
            }
        }
        _ => gr2_symmetric(&p),
    }
}

/// `|GIE - GR2|` from the closed forms, whether or not the GIE closed form is
/// proven at this point.
pub fn conjecture_gap(fam: &StateFamily) -> Result<f64> {
    let gie = evaluate_closed_form(fam)?;
    let value = gie.value.ok_or_else(|| Error::DomainNotCovered { value: None, reason: "no closed form for this state".into() })?;
    Ok((value - gr2_family(fam)?).abs())
}
