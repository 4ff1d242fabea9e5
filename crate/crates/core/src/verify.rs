//! Self-check suites behind `gielab verify`.
//!
//! `fast` checks closed forms against frozen constants and runs small
//! optimizer grids. `full` runs the optimizer cross-checks at the default
//! resolution over sampled family points.

use crate::config::Config;
use crate::error::Result;
use crate::gie::{
    evaluate_closed_form, gie_closed_form, gie_numeric, k_h, k_h_determinant, k_h_rank_one, k_min, single_mode_conditional,
    sym_glems_candidates, GieResult, SeedSpectrum,
};
use crate::information::{gcmi, mutual_information_f};
use crate::measurement::{condition_on_e, homodyne_approximant, GaussianMeasurement};
use crate::purification::purify_with;
use crate::renyi2::{asym_glems_three_mode, conjecture_gap, gr2_two_mode_reduction, Gr2Branch};
use crate::states::{make_family, StateFamily, StdForm};
use crate::symplectic::{symplectic_residual, williamson_with};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

impl FromStr for Suite {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            other => Err(crate::error::Error::InvalidInput(format!("unknown suite `{other}` (fast, full)"))),
        }
    }
}

/// Outcome of one named check; `worst` is the largest error seen.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl Check {
    fn new(name: &str, tolerance: f64) -> Check {
        Check { name: name.into(), cases: 0, worst: 0.0, tolerance, failures: Vec::new(), elapsed: Duration::ZERO }
    }

    /// Records `error` for one case; fails it when above tolerance or NaN.
    fn error(&mut self, error: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        if error > self.worst || error.is_nan() {
            self.worst = error;
        }
        if !(error <= self.tolerance) {
            self.failures.push(format!("{} (error {error:.3e})", case()));
        }
    }

    fn holds(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(case());
        }
    }

    fn fail(&mut self, case: String) {
        self.cases += 1;
        self.failures.push(case);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<34} cases={:<5} worst={:.3e} tol={:.0e} ({:.2}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Failing cases, at most `limit` per check.
    pub fn failure_dump(&self, limit: usize) -> String {
        let mut out = String::new();
        for c in self.checks.iter().filter(|c| !c.passed()) {
            out.push_str(&format!("{}:\n", c.name));
            if c.cases == 0 {
                out.push_str("  no cases ran\n");
            }
            for f in c.failures.iter().take(limit) {
                out.push_str(&format!("  {f}\n"));
            }
            if c.failures.len() > limit {
                out.push_str(&format!("  ... {} more\n", c.failures.len() - limit));
            }
        }
        out
    }
}

pub fn run_suite(suite: Suite, cfg: &Config) -> Report {
    let start = Instant::now();
    let checks: Vec<fn(&Config, Suite) -> Check> = vec![
        closed_form_identities,
        candidate_ordering,
        k_h_machinery,
        min_max_agreement,
        gcmi_optimality,
        conjecture_equality,
        faithfulness,
        structural,
    ];
    let checks = checks
        .into_iter()
        .map(|f| {
            let t = Instant::now();
            let mut c = f(cfg, suite);
            c.elapsed = t.elapsed();
            c
        })
        .collect();
    Report { suite, checks, elapsed: start.elapsed() }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x6e1e)
}

fn samples(suite: Suite, fast: usize, full: usize) -> usize {
    match suite {
        Suite::Fast => fast,
        Suite::Full => full,
    }
}

fn closed_form_identities(_: &Config, _: Suite) -> Check {
    let mut c = Check::new("closed-form identities", 1e-9);
    let frozen = [
        (StateFamily::SymGlems { a: 1.5, kp: 0.5 }, 0.05889151782819164),
        (StateFamily::SymGlems { a: 1.1, kp: 0.2 }, 0.016808305399492785),
        (StateFamily::SymSqThermal { a: 1.2, k: 0.5 }, 0.06230388333615484),
        (StateFamily::SymSqThermal { a: 1.05, k: 0.3 }, 0.0408219945202552),
        (StateFamily::AsymGlems { a: 2.0, b: 1.5 }, 0.3364722366212129),
        (StateFamily::AsymGlems { a: 1.5, b: 2.0 }, 0.3364722366212129),
        (StateFamily::CvGhz { r: 0.5 }, 0.08954514823451633),
        (StateFamily::Pure { a: 1.8 }, 0.5877866649021191),
        (StateFamily::Pure { a: 1.0 }, 0.0),
        (StateFamily::SymSqThermal { a: 3.0, k: 1.0 }, 0.0),
    ];
    for (fam, want) in frozen {
        match gie_closed_form(&fam) {
            Ok(v) => c.error((v - want).abs(), || format!("{fam:?}: got {v}, want {want}")),
            Err(e) => c.fail(format!("{fam:?}: {e}")),
        }
    }
    match sym_glems_candidates(1.5, 0.5) {
        Ok(u) => {
            for (got, want) in u.iter().zip([0.29389333245105953, 0.15726898509691148, 0.05889151782819164]) {
                c.error((got - want).abs(), || format!("candidates(1.5, 0.5): got {got}, want {want}"));
            }
        }
        Err(e) => c.fail(format!("candidates(1.5, 0.5): {e}")),
    }
    c.error((k_min(1.2, 0.5) - 0.9360540674603175).abs(), || "K_min(1.2, 0.5)".into());
    c
}

fn random_sym_glems(r: &mut ChaCha8Rng) -> (f64, f64) {
    let a = r.gen_range(1.0001..4.0f64);
    let kp = r.gen_range(1e-3..1.0) * (a * a - 1.0).sqrt();
    (a, kp)
}

fn candidate_ordering(_: &Config, suite: Suite) -> Check {
    let mut c = Check::new("candidate ordering", 1e-12);
    let mut r = rng();
    for _ in 0..samples(suite, 100, 1000) {
        let (a, kp) = random_sym_glems(&mut r);
        match sym_glems_candidates(a, kp) {
            Ok([u1, u2, u3]) => {
                c.error((u3 - u1).max(u3 - u2).max(0.0), || format!("a={a}, kp={kp}: U=({u1}, {u2}, {u3})"));
            }
            Err(e) => c.fail(format!("a={a}, kp={kp}: {e}")),
        }
    }
    c
}

fn random_thermal(r: &mut ChaCha8Rng, a_max: f64) -> (f64, f64) {
    let a = r.gen_range(1.01..a_max);
    let lo = a - 1.0;
    let hi = (a * a - 1.0).sqrt();
    (a, lo + r.gen_range(0.02..1.0) * (hi - lo))
}

fn k_h_machinery(cfg: &Config, suite: Suite) -> Check {
    let mut c = Check::new("K_h routes and minimum", 1e-9);
    let mut r = rng();
    for _ in 0..samples(suite, 100, 1000) {
        let (a, k) = random_thermal(&mut r, 2.41);
        let l1 = r.gen_range(-5.0..5.0f64);
        let q = SeedSpectrum { phi: r.gen_range(0.0..PI), lambda1: l1.exp(), lambda2: (l1 - r.gen_range(0.0..8.0)).exp() };
        match (k_h(&q, a, k), k_h_determinant(&q, a, k), k_h_rank_one(&q, a, k)) {
            (Ok(x), Ok(y), Ok(z)) => c.error((x - y).abs().max((x - z).abs()) / x.abs().max(1.0), || format!("{q:?}, a={a}, k={k}")),
            other => c.fail(format!("{q:?}, a={a}, k={k}: {other:?}")),
        }
        let iso = SeedSpectrum { phi: q.phi, lambda1: q.lambda1, lambda2: q.lambda1 };
        if let Ok(v) = k_h(&iso, a, k) {
            c.error((v - 1.0).abs() * 1e3, || format!("K_h(λ₁ = λ₂) at {iso:?}, a={a}, k={k}: {v}"));
        }
    }
    let grid = cfg.clone().with_grid(samples(suite, 9, cfg.grid)).unwrap_or_else(|_| cfg.clone());
    let points: &[(f64, f64)] = &[(1.2, 0.5), (1.05, 0.3), (2.0, 1.5), (2.41, 2.0)];
    for &(a, k) in points {
        let l = grid.ln_lambda_max;
        let axes = [
            crate::optimize::Axis::periodic(0.0, PI, grid.grid),
            crate::optimize::Axis::linear(-l, l, grid.grid),
            crate::optimize::Axis::linear(-l, l, grid.grid),
        ];
        let best = crate::optimize::minimize(
            &axes,
            &[],
            |p| (p[2] <= p[1]).then(|| k_h(&SeedSpectrum { phi: p[0], lambda1: p[1].exp(), lambda2: p[2].exp() }, a, k).ok()).flatten(),
            &grid,
        );
        match best {
            Ok(m) => c.error((m.value - k_min(a, k)).abs() * 1e-3, || format!("finite-grid K minimum at a={a}, k={k}: {}", m.value)),
            Err(e) => c.fail(format!("K minimum at a={a}, k={k}: {e}")),
        }
    }
    c
}

/// Family points inside the proven domains, evenly spread.
pub fn family_grid(per_family: usize) -> Vec<StateFamily> {
    let mut out = Vec::new();
    let n = per_family.max(1);
    let frac = |i: usize| (i as f64 + 0.5) / n as f64;
    for i in 0..n {
        let a = 1.02 + 1.98 * ((i * 7) % n) as f64 / n as f64;
        out.push(StateFamily::SymGlems { a, kp: (0.02 + 0.97 * frac(i)) * (a * a - 1.0).sqrt() });
    }
    for i in 0..n {
        let a = 1.03 + 1.38 * ((i * 7) % n) as f64 / n as f64;
        let (lo, hi) = (a - 1.0, (a * a - 1.0).sqrt());
        out.push(StateFamily::SymSqThermal { a, k: lo + (0.02 + 0.98 * frac(i)) * (hi - lo) });
    }
    for i in 0..n {
        let g = 1.05 + 1.36 * ((i * 7) % n) as f64 / n as f64;
        let ratio = 1.0 + 0.9 * frac(i);
        let (a, b) = (g * ratio.sqrt(), g / ratio.sqrt());
        if b > 1.0 + 1e-6 {
            out.push(if i % 2 == 0 { StateFamily::AsymGlems { a, b } } else { StateFamily::AsymGlems { a: b, b: a } });
        } else {
            out.push(StateFamily::AsymGlems { a: g + 0.3, b: g + 0.1 });
        }
    }
    for i in 0..n {
        out.push(StateFamily::CvGhz { r: 0.02 + 1.48 * frac(i) });
    }
    out
}

/// Eve's optimum expected for each family.
pub fn expected_eve_optimum(fam: &StateFamily) -> &'static str {
    match fam {
        StateFamily::SymSqThermal { .. } => "homodyne x_EA, p_EB",
        StateFamily::AsymGlems { .. } | StateFamily::Pure { .. } => "heterodyne E",
        _ => "homodyne x_E",
    }
}

/// Trace checks: the gate on symmetric one-unit-eigenvalue states and the
/// conditional bound on squeezed thermal states.
pub fn trace_violation(fam: &StateFamily, r: &GieResult) -> Option<String> {
    match fam {
        StateFamily::SymGlems { .. } | StateFamily::CvGhz { .. } => {
            let gate = r.diagnostic("min_gate")?;
            (gate <= 2.0 - 2f64.sqrt()).then(|| format!("gate {gate} ≤ 2 - √2"))
        }
        StateFamily::SymSqThermal { .. } => {
            let excess = r.diagnostic("max_conditional_excess")?;
            (excess > 1e-9).then(|| format!("√(ãb̃) exceeds a by {excess}"))
        }
        _ => None,
    }
}

fn min_max_agreement(cfg: &Config, suite: Suite) -> Check {
    use rayon::prelude::*;
    let mut c = Check::new("min-max agreement", 2e-5);
    let cfg = match suite {
        Suite::Fast => cfg.clone().with_grid(9).unwrap_or_else(|_| cfg.clone()),
        Suite::Full => cfg.clone(),
    };
    let fams = family_grid(samples(suite, 3, 50));
    let results: Vec<_> = fams.par_iter().map(|f| gie_numeric(f, &cfg)).collect();
    for (fam, res) in fams.iter().zip(results) {
        match res {
            Ok(r) => {
                c.error(r.discrepancy.unwrap_or(f64::NAN), || format!("{fam:?}: numeric {} closed {:?}", r.numeric, r.closed_form));
                let want = expected_eve_optimum(fam);
                c.holds(r.eve_optimum == want, || format!("{fam:?}: Eve optimum `{}`, want `{want}`", r.eve_optimum));
                let v = trace_violation(fam, &r);
                c.holds(v.is_none(), || format!("{fam:?}: {}", v.clone().unwrap_or_default()));
                if let Some(u) = r.upper_bound {
                    c.error((u - r.numeric).abs(), || format!("{fam:?}: upper bound {u} vs numeric {}", r.numeric));
                }
            }
            Err(e) => c.fail(format!("{fam:?}: {e}")),
        }
    }
    c
}

fn gcmi_optimality(cfg: &Config, suite: Suite) -> Check {
    let mut c = Check::new("GCMI optimality", 1e-6);
    let mut r = rng();
    let mut taken = 0;
    let want = samples(suite, 100, 1000);
    while taken < want {
        let a = r.gen_range(1.0..3.0f64);
        let b = r.gen_range(1.0..3.0f64);
        if (a * b).sqrt() > 2.41 {
            continue;
        }
        let kx = r.gen_range(0.0..(a * b - 1.0).max(0.0).sqrt() + 1e-9);
        let kp = kx * r.gen_range(-1.0..1.0);
        let p = StdForm { a, b, kx, kp };
        if !p.is_physical(0.0) || crate::information::gcmi_condition_g(&p) < 0.0 {
            continue;
        }
        taken += 1;
        match gcmi(&p, cfg) {
            Ok(g) => c.error((g.value - g.closed_form).abs(), || format!("{p:?}: search {} closed {}", g.value, g.closed_form)),
            Err(e) => c.fail(format!("{p:?}: {e}")),
        }
    }
    c
}

fn conjecture_equality(_: &Config, suite: Suite) -> Check {
    let mut c = Check::new("GIE = GR2 on proven families", 1e-12);
    for fam in family_grid(samples(suite, 20, 200)) {
        match conjecture_gap(&fam) {
            Ok(g) => c.error(g, || format!("{fam:?}")),
            Err(e) => c.fail(format!("{fam:?}: {e}")),
        }
        if let StateFamily::AsymGlems { a, b } = fam {
            match asym_glems_three_mode(a, b).and_then(|p| gr2_two_mode_reduction(&p, 2)) {
                Ok(g) => c.holds(g.branch != Gr2Branch::Intermediate, || format!("{fam:?}: intermediate GR2 branch")),
                Err(e) => c.fail(format!("{fam:?}: {e}")),
            }
        }
    }
    c
}

/// A random standard form with symplectic eigenvalues at least 1.
pub fn random_std_form(r: &mut ChaCha8Rng) -> StdForm {
    loop {
        let a = r.gen_range(1.0..3.0f64);
        let b = r.gen_range(1.0..3.0f64);
        let kmax = (a * b).sqrt();
        let kx = r.gen_range(0.0..kmax);
        let kp = r.gen_range(-kmax..kmax);
        let p = StdForm { a, b, kx, kp };
        if p.is_physical(0.0) && (p.symplectic_eigenvalues().1 - 1.0).abs() > 1e-9 {
            return p;
        }
    }
}

fn faithfulness(cfg: &Config, suite: Suite) -> Check {
    let mut c = Check::new("faithfulness", 1e-6);
    let mut r = rng();
    let want = samples(suite, 50, 1000);
    let cfg = cfg.clone().with_grid(9).unwrap_or_else(|_| cfg.clone());
    let mut sep = 0;
    while sep < want {
        let p = random_std_form(&mut r);
        if !p.is_separable() || p.ppt_nu_min() < 1.0 + 1e-6 {
            continue;
        }
        sep += 1;
        let fam = StateFamily::Generic(p);
        match (evaluate_closed_form(&fam), gie_numeric(&fam, &cfg)) {
            (Ok(cf), Ok(n)) => {
                c.holds(cf.value == Some(0.0), || format!("{p:?}: closed form {:?}", cf.value));
                c.error(n.numeric.abs(), || format!("{p:?}: numeric {}", n.numeric));
            }
            (a, b) => c.fail(format!("{p:?}: {a:?} / {b:?}")),
        }
    }
    for i in 0..want {
        let fam = if i % 2 == 0 {
            let (a, kp) = random_sym_glems(&mut r);
            StateFamily::SymGlems { a, kp }
        } else {
            let (a, k) = random_thermal(&mut r, 2.41);
            StateFamily::SymSqThermal { a, k }
        };
        match gie_closed_form(&fam) {
            Ok(v) => c.holds(v > 0.0, || format!("{fam:?}: closed form {v}")),
            Err(e) => c.fail(format!("{fam:?}: {e}")),
        }
    }
    c
}

fn structural(cfg: &Config, suite: Suite) -> Check {
    let mut c = Check::new("structural residuals", 1.0);
    let mut r = rng();
    for _ in 0..samples(suite, 30, 300) {
        let p = random_std_form(&mut r);
        let g = p.covariance();
        let case = || format!("{p:?}");
        match williamson_with(&g, cfg) {
            Ok(w) => {
                c.error(symplectic_residual(&w.s).unwrap_or(f64::NAN) / 1e-9, case);
                c.error(w.residual(&g) / 1e-8, case);
            }
            Err(e) => c.fail(format!("{p:?}: {e}")),
        }
        let pi = match purify_with(&g, cfg) {
            Ok(pi) => pi,
            Err(e) => {
                c.fail(format!("{p:?}: {e}"));
                continue;
            }
        };
        c.error(pi.purity_residual().unwrap_or(f64::NAN) / 1e-7, case);
        if pi.r_count() == 0 {
            continue;
        }
        let angles = vec![0.0; pi.r_count()];
        let exact = condition_on_e(&pi, &GaussianMeasurement::Homodyne(angles.clone()));
        let blocks: Vec<_> = angles.iter().map(|&t| homodyne_approximant(t, 8.0)).collect::<Result<_>>().unwrap_or_default();
        let approx = condition_on_e(&pi, &GaussianMeasurement::Finite(crate::linalg::block_diag(&blocks)));
        match (exact, approx) {
            (Ok(e), Ok(a)) => c.error(crate::linalg::max_abs(&(e - a)) / 1e-5, case),
            other => c.fail(format!("{p:?}: {other:?}")),
        }
        let het = GaussianMeasurement::heterodyne(pi.r_count());
        let a_seed = GaussianMeasurement::Finite(crate::measurement::general_single_mode(0.3, 1.5, 0.4).unwrap_or_default());
        match (crate::information::f_decomposed(&pi, &a_seed, &a_seed, &het), mutual_information_f(&pi, &a_seed, &a_seed, &het)) {
            (Ok((i, k)), Ok(f)) => c.error((i + k - f).abs() / 1e-9, case),
            other => c.fail(format!("{p:?}: {other:?}")),
        }
    }
    if let Ok(pi) = make_family(&StateFamily::SymGlems { a: 1.5, kp: 0.5 }).and_then(|p| purify_with(&p.covariance(), cfg)) {
        let q = [FRAC_PI_2, 0.0, 8.0];
        match (single_mode_conditional(&pi, &q), condition_on_e(&pi, &GaussianMeasurement::Homodyne(vec![0.0]))) {
            (Ok(a), Ok(e)) => c.error(crate::linalg::max_abs(&(a - e)) / 1e-5, || "structured finite-t conditioning".into()),
            other => c.fail(format!("structured conditioning: {other:?}")),
        }
    }
    c
}
