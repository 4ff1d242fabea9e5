//! Test-only reference formulas and matrix routines, written apart from the
//! library so acceptance checks compare two independent code paths.

#![allow(dead_code)]

use nalgebra::DMatrix;

pub type M = DMatrix<f64>;

pub fn gie_pure(a: f64) -> f64 {
    a.ln()
}

pub fn gie_sym_glems(a: f64, kp: f64) -> f64 {
    (a / (a * a - kp * kp).sqrt()).ln()
}

pub fn gie_sym_sq_thermal(a: f64, k: f64) -> f64 {
    if a - k >= 1.0 {
        return 0.0;
    }
    let d = a - k;
    ((d * d + 1.0) / (2.0 * d)).ln()
}

pub fn gie_asym_glems(a: f64, b: f64) -> f64 {
    ((a + b) / ((a - b).abs() + 2.0)).ln()
}

pub fn ghz_x(r: f64) -> (f64, f64) {
    let e2 = (2.0 * r).exp();
    ((e2 + 2.0 / e2) / 3.0, (1.0 / e2 + 2.0 * e2) / 3.0)
}

pub fn gie_cv_ghz(r: f64) -> f64 {
    let (xp, xm) = ghz_x(r);
    (xm / (r.exp() * xp.sqrt())).ln()
}

/// Standard form `(a, kx, kp)` of the GHZ two-mode reduction.
pub fn cv_ghz_std(r: f64) -> (f64, f64, f64) {
    let (xp, xm) = ghz_x(r);
    ((xp * xm).sqrt(), (xm / xp).sqrt() * (xm - xp), (xp / xm).sqrt() * (xm - xp))
}

pub fn sym_glems_kx(a: f64, kp: f64) -> f64 {
    a - 1.0 / (a + kp)
}

pub fn asym_glems_k(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    ((hi + 1.0) * (lo - 1.0)).sqrt()
}

/// `(U₁, U₂, U₃)`.
pub fn candidates(a: f64, kp: f64) -> (f64, f64, f64) {
    let kx = sym_glems_kx(a, kp);
    let za = ((a + kx) / (a - kp)).powf(0.25);
    let zb = ((a + kp) / (a - kx)).powf(0.25);
    let z = za * zb;
    ((a / (a * a - kx * kx).sqrt()).ln(), ((z + 1.0 / z) / 2.0).ln(), (a / (a * a - kp * kp).sqrt()).ln())
}

/// Smallest symplectic eigenvalue of the partial transpose of a standard form.
pub fn ppt_nu(a: f64, b: f64, kx: f64, kp: f64) -> f64 {
    let delta = a * a + b * b + 2.0 * kx * kp;
    let det = (a * b - kx * kx) * (a * b - kp * kp);
    ((delta - (delta * delta - 4.0 * det).max(0.0).sqrt()) / 2.0).sqrt()
}

pub fn nu_pair(a: f64, b: f64, kx: f64, kp: f64) -> (f64, f64) {
    let delta = a * a + b * b - 2.0 * kx * kp;
    let det = (a * b - kx * kx) * (a * b - kp * kp);
    let root = (delta * delta - 4.0 * det).max(0.0).sqrt();
    (((delta + root) / 2.0).sqrt(), ((delta - root) / 2.0).max(0.0).sqrt())
}

pub fn gr2_symmetric(a: f64, kx: f64, kp: f64) -> f64 {
    let nu = ppt_nu(a, a, kx, kp);
    if nu >= 1.0 {
        0.0
    } else {
        ((nu + 1.0 / nu) / 2.0).ln()
    }
}

pub fn gcmi_closed(a: f64, b: f64, kx: f64) -> f64 {
    0.5 * (a * b / (a * b - kx * kx)).ln()
}

pub fn gcmi_g(a: f64, b: f64, kx: f64) -> f64 {
    (a / b).sqrt() + (b / a).sqrt() + 1.0 / (a * b).sqrt() - (a * b - kx * kx).sqrt()
}

pub fn k_min(a: f64, k: f64) -> f64 {
    let d = a - k;
    (a * a - k * k) / (a * a) * ((d * d + 1.0) / (2.0 * d)).powi(2)
}

pub fn q_matrix(phi: f64, l1: f64, l2: f64) -> M {
    let (lp, lm) = ((l1 + l2) / 2.0, (l1 - l2) / 2.0);
    let (s, c) = (2.0 * phi).sin_cos();
    M::from_row_slice(2, 2, &[lp + lm * c, lm * s, lm * s, lp - lm * c])
}

/// Eve's seed in `(x, p)` mode ordering: `Γ[x_i, x_j] = Q_ij`, `Γ[p_i, p_j] = (Q⁻¹)_ij`.
pub fn seed_from_q(q: &M) -> M {
    let qi = q.clone().try_inverse().expect("Q invertible");
    let mut g = M::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            g[(2 * i, 2 * j)] = q[(i, j)];
            g[(2 * i + 1, 2 * j + 1)] = qi[(i, j)];
        }
    }
    g
}

/// `det(Γ+X_A) det(Γ+X_B) / (det(Γ+X_AB) det(Γ+γ_E))` with the explicit
/// homodyne blocks.
pub fn k_h_explicit(phi: f64, l1: f64, l2: f64, a: f64, k: f64) -> f64 {
    let nu = (a * a - k * k).sqrt();
    let z2 = ((a + k) / (a - k)).sqrt();
    let c = (nu * nu - 1.0) / (2.0 * a);
    let block = |sign: f64| {
        M::from_row_slice(4, 4, &[nu - c * z2, 0.0, sign * c, 0.0, 0.0, nu, 0.0, 0.0, sign * c, 0.0, nu - c / z2, 0.0, 0.0, 0.0, 0.0, nu])
    };
    let x_ab = M::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0 / nu, nu, 1.0 / nu, nu]));
    let g = seed_from_q(&q_matrix(phi, l1, l2));
    let e = M::identity(4, 4) * nu;
    (&g + block(1.0)).determinant() * (&g + block(-1.0)).determinant() / ((&g + x_ab).determinant() * (&g + e).determinant())
}

/// Product form of the same quantity, before multiplying out.
pub fn k_h_product(phi: f64, l1: f64, l2: f64, a: f64, k: f64) -> f64 {
    let nu = (a * a - k * k).sqrt();
    let ch = (nu + 1.0 / nu) / 2.0;
    let sh = (nu - 1.0 / nu) / 2.0;
    let e = 1.0 + l1 * l2 + ch * (l1 + l2);
    let f = sh / a * (l1 - l2);
    let h = |l: f64| 1.0 + 2.0 * ch * l + l * l;
    let (s, c) = (2.0 * phi).sin_cos();
    (e + f * (k * c - nu * s)) / h(l1) * (e + f * (k * c + nu * s)) / h(l2)
}

pub fn omega(n: usize) -> M {
    let mut o = M::zeros(2 * n, 2 * n);
    for i in 0..n {
        o[(2 * i, 2 * i + 1)] = 1.0;
        o[(2 * i + 1, 2 * i)] = -1.0;
    }
    o
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

pub fn symplectic_residual(s: &M) -> f64 {
    let o = omega(s.nrows() / 2);
    max_abs(&(s * &o * s.transpose() - o))
}

/// `max |(Ωγ)² + I|`, zero exactly for pure states.
pub fn purity_residual(g: &M) -> f64 {
    let o = omega(g.nrows() / 2);
    let w = &o * g;
    max_abs(&(&w * &w + M::identity(g.nrows(), g.nrows())))
}

/// Conditional covariance of the first `k` coordinates given a finite seed
/// on the remaining ones.
pub fn condition_finite(full: &M, k: usize, seed: &M) -> M {
    let n = full.nrows();
    let a = full.view((0, 0), (k, k)).into_owned();
    let c = full.view((0, k), (k, n - k)).into_owned();
    let d = full.view((k, k), (n - k, n - k)).into_owned() + seed;
    a - &c * d.try_inverse().expect("invertible") * c.transpose()
}

/// Conditional covariance after homodyne of `cos θ x + sin θ p` on each
/// remaining mode.
pub fn condition_homodyne(full: &M, k: usize, angles: &[f64]) -> M {
    let n = full.nrows();
    let mut p = M::zeros(angles.len(), n - k);
    for (i, t) in angles.iter().enumerate() {
        p[(i, 2 * i)] = t.cos();
        p[(i, 2 * i + 1)] = t.sin();
    }
    let a = full.view((0, 0), (k, k)).into_owned();
    let c = full.view((0, k), (k, n - k)).into_owned() * p.transpose();
    let d = &p * full.view((k, k), (n - k, n - k)).into_owned() * p.transpose();
    a - &c * d.try_inverse().expect("invertible") * c.transpose()
}

/// Mutual information of `x` homodyne on both modes of a two-mode CM.
pub fn f_xx(g: &M) -> f64 {
    let (va, vb, c) = (g[(0, 0)], g[(2, 2)], g[(0, 2)]);
    0.5 * (va * vb / (va * vb - c * c)).ln()
}

/// Standard-form parameters `(a, b, kx, kp)` of a two-mode CM from its invariants.
pub fn std_form(g: &M) -> (f64, f64, f64, f64) {
    let det2 = |r: usize, c: usize| g[(r, c)] * g[(r + 1, c + 1)] - g[(r, c + 1)] * g[(r + 1, c)];
    let a = det2(0, 0).sqrt();
    let b = det2(2, 2).sqrt();
    let prod = -det2(0, 2);
    let ab = a * b;
    let sum_sq = (ab * ab + prod * prod - g.determinant()) / ab;
    let kx = ((sum_sq + (sum_sq * sum_sq - 4.0 * prod * prod).max(0.0).sqrt()) / 2.0).max(0.0).sqrt();
    let kp = if kx > 0.0 { prod / kx } else { 0.0 };
    (a, b, kx, kp)
}

pub fn std_cm(a: f64, b: f64, kx: f64, kp: f64) -> M {
    M::from_row_slice(4, 4, &[a, 0.0, kx, 0.0, 0.0, a, 0.0, -kp, kx, 0.0, b, 0.0, 0.0, -kp, 0.0, b])
}

/// `(γ_E + Γ_E)⁻¹` for `γ_E = ν I` and `Γ_E = Λᵀ(Q ⊕ Q⁻¹)Λ`, from the 2x2
/// inverses `(νI + Q)⁻¹ = (νI + JQJᵀ)/d` and `(νI + Q⁻¹)⁻¹ = (Q/ν + λ₁λ₂ I)/(ν d̃)`.
pub fn thermal_inverse(nu: f64, phi: f64, l1: f64, l2: f64) -> M {
    let (lp, lm) = ((l1 + l2) / 2.0, (l1 - l2) / 2.0);
    let (s, c) = (2.0 * phi).sin_cos();
    let d = (nu + l1) * (nu + l2);
    let dt = (1.0 / nu + l1) * (1.0 / nu + l2);
    let x = [[(nu + lp - lm * c) / d, (-lm * s) / d], [(-lm * s) / d, (nu + lp + lm * c) / d]];
    let p = [
        [((lp + lm * c) / nu + l1 * l2) / (nu * dt), (lm * s / nu) / (nu * dt)],
        [(lm * s / nu) / (nu * dt), ((lp - lm * c) / nu + l1 * l2) / (nu * dt)],
    ];
    let mut m = M::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m[(2 * i, 2 * j)] = x[i][j];
            m[(2 * i + 1, 2 * j + 1)] = p[i][j];
        }
    }
    m
}
