//! Position-dependent-mass models whose bound states close on X₁
//! exceptional orthogonal polynomials, plus the hyperbolic-coordinate
//! oscillator solved by classical Hermite polynomials.

use super::{require, EnergyFn, ModelCard, SolveStrategy, UnitConvention, WaveFn};
use crate::grid::MassProfile;
use crate::specfn::{gamma_ln_real, hermite_h, x1_jacobi_coeffs, x1_laguerre_coeffs};
use crate::{RealFn, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Levels beyond this index return NaN from the packaged wave functions;
/// every consumer in the workbench stays far below it.
const N_CACHE: usize = 24;

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |s, &a| s * x + a)
}

fn dcoeffs(c: &[f64]) -> Vec<f64> {
    (1..c.len()).map(|k| c[k] * k as f64).collect()
}

/// Exponentially decaying mass M = e^{−bx} with an X₁-Laguerre bound
/// tower E_m = b²m, m = 0, 1, 2, …
pub fn pdm_x1_laguerre(b: f64, alpha: f64) -> Result<ModelCard> {
    require(b > 0.0, format!("mass decay rate must satisfy b > 0 (got {b})"))?;
    require(
        alpha > 0.0,
        format!("polynomial parameter must satisfy alpha > 0 (got {alpha})"),
    )?;
    let domain = (-3.2 / b, 14.0 / b);

    let mass = MassProfile::new(
        Arc::new(move |x| (-b * x).exp()),
        Arc::new(move |x| -b * (-b * x).exp()),
        Arc::new(move |x| b * b * (-b * x).exp()),
        domain,
    );

    let vr = x1_laguerre_minus_potential(b, alpha);
    let vr2 = vr.clone();
    let potential = Arc::new(move |x: f64| Complex64::new(vr2(x), 0.0));

    let energy: EnergyFn = Arc::new(move |m| b * b * m as f64);

    // Polynomial part L̂_{m+1}^{(α)} and its derivative, cached per level.
    let mut polys = Vec::with_capacity(N_CACHE);
    for m in 0..N_CACHE {
        let c = x1_laguerre_coeffs(m + 1, alpha)?
            .real_coeffs()
            .expect("X1 Laguerre coefficients are real");
        let d = dcoeffs(&c);
        polys.push((c, d));
    }
    let polys = Arc::new(polys);
    let norms: Vec<f64> = (0..N_CACHE)
        .map(|m| {
            let mf = m as f64;
            0.5 * (b.ln() + gamma_ln_real(mf + 1.0)
                - (mf + alpha + 1.0).ln()
                - gamma_ln_real(mf + alpha))
        })
        .map(f64::exp)
        .collect();

    let envelope = move |m: usize, x: f64, norms: &[f64]| -> (f64, f64, f64) {
        // Returns (prefactor, t, N_m) with ψ = N·pref·L̂(t)/(α+t).
        let t = (-b * x).exp();
        let pref = (-0.5 * ((alpha + 1.0) * b * x + t)).exp();
        (pref, t, norms[m])
    };

    let polys_w = polys.clone();
    let norms_w = norms.clone();
    let wavefunction: WaveFn = Arc::new(move |m, x| {
        if m >= N_CACHE {
            return Complex64::new(f64::NAN, 0.0);
        }
        let (pref, t, nm) = envelope(m, x, &norms_w);
        let lhat = horner(&polys_w[m].0, t);
        Complex64::new(nm * pref * lhat / (alpha + t), 0.0)
    });

    let polys_d = polys.clone();
    let norms_d = norms.clone();
    let wavefunction_d1: WaveFn = Arc::new(move |m, x| {
        if m >= N_CACHE {
            return Complex64::new(f64::NAN, 0.0);
        }
        let (pref, t, nm) = envelope(m, x, &norms_d);
        let lhat = horner(&polys_d[m].0, t);
        let lhat_d = horner(&polys_d[m].1, t);
        let bracket = (-0.5 * (alpha + 1.0) * b + 0.5 * b * t + b * t / (alpha + t)) * lhat
            - b * t * lhat_d;
        Complex64::new(nm * pref * bracket / (alpha + t), 0.0)
    });

    let superpotential: RealFn = Arc::new(move |x| {
        let e = (b * x).exp();
        let eh = (0.5 * b * x).exp();
        0.5 * b * ((alpha + 1.0) * eh - 1.0 / eh)
            - b * eh.powi(3) / (alpha * (alpha + 1.0) * e * e + (2.0 * alpha + 1.0) * e + 1.0)
    });

    Ok(ModelCard {
        name: "pdm_x1_laguerre".into(),
        params: vec![("b".into(), b), ("alpha".into(), alpha)],
        mass,
        potential,
        energy,
        wavefunction,
        wavefunction_d1: Some(wavefunction_d1),
        superpotential: Some(superpotential),
        hermitian_equivalent: None,
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        strategy: SolveStrategy::DirectBdd,
        recommended_domain: domain,
    })
}

/// The base potential of [`pdm_x1_laguerre`], ground energy pinned to 0.
pub fn x1_laguerre_minus_potential(b: f64, alpha: f64) -> RealFn {
    Arc::new(move |x| {
        let e = (b * x).exp();
        let d = 1.0 + alpha * e;
        0.25 * b * b * ((alpha * alpha - 1.0) * e + 1.0 / e + 4.0 / (alpha * d) + 8.0 * e / (d * d))
            - b * b * (0.5 * (alpha + 1.0) + 1.0 / alpha)
    })
}

/// Closed-form supersymmetric partner of [`pdm_x1_laguerre`]'s potential.
/// Shape invariance: it equals the base potential at α+1 shifted by b².
pub fn x1_laguerre_plus_potential(b: f64, alpha: f64) -> RealFn {
    Arc::new(move |x| {
        let e = (b * x).exp();
        let d = 1.0 + (alpha + 1.0) * e;
        0.25 * b * b
            * (alpha * (alpha + 2.0) * e
                + 1.0 / e
                + 4.0 / ((alpha + 1.0) * d)
                + 8.0 * e / (d * d))
            - 0.5 * b * b * (alpha * alpha + alpha + 2.0) / (alpha + 1.0)
    })
}

/// Solitonic mass M = sech²(ax) with an X₁-Jacobi bound tower
/// E_m = a²m(m+α+β+1).
pub fn pdm_x1_jacobi(a: f64, alpha: f64, beta: f64) -> Result<ModelCard> {
    require(a > 0.0, format!("mass width must satisfy a > 0 (got {a})"))?;
    require(
        alpha > -0.5,
        format!("polynomial parameter must satisfy alpha > -1/2 (got {alpha})"),
    )?;
    require(
        beta > -0.5,
        format!("polynomial parameter must satisfy beta > -1/2 (got {beta})"),
    )?;
    require(
        alpha != beta,
        format!("the X1 Jacobi family degenerates at alpha = beta (got {alpha})"),
    )?;
    let domain = (-9.0 / a, 9.0 / a);

    let mass = MassProfile::new(
        Arc::new(move |x| {
            let s = 1.0 / (a * x).cosh();
            s * s
        }),
        Arc::new(move |x| {
            let s = 1.0 / (a * x).cosh();
            -2.0 * a * s * s * (a * x).tanh()
        }),
        Arc::new(move |x| {
            let s = 1.0 / (a * x).cosh();
            let t = (a * x).tanh();
            4.0 * a * a * s * s * t * t - 2.0 * a * a * s.powi(4)
        }),
        domain,
    );

    let vr = x1_jacobi_minus_potential(a, alpha, beta);
    let vr2 = vr.clone();
    let potential = Arc::new(move |x: f64| Complex64::new(vr2(x), 0.0));

    let energy: EnergyFn = Arc::new(move |m| a * a * m as f64 * (m as f64 + alpha + beta + 1.0));

    let mut polys = Vec::with_capacity(N_CACHE);
    for m in 0..N_CACHE {
        let c = x1_jacobi_coeffs(m + 1, alpha, beta)?
            .real_coeffs()
            .expect("X1 Jacobi coefficients are real");
        let d = dcoeffs(&c);
        polys.push((c, d));
    }
    let polys = Arc::new(polys);
    let norms: Vec<f64> = (0..N_CACHE)
        .map(|m| {
            let mf = m as f64;
            0.5 * (a.ln()
                + 2.0 * (alpha - beta).abs().ln()
                + gamma_ln_real(mf + 1.0)
                + (2.0 * mf + alpha + beta + 1.0).ln()
                + gamma_ln_real(mf + alpha + beta + 1.0)
                - (alpha + beta - 1.0) * std::f64::consts::LN_2
                - (mf + alpha + 1.0).ln()
                - (mf + beta + 1.0).ln()
                - gamma_ln_real(mf + alpha)
                - gamma_ln_real(mf + beta))
        })
        .map(f64::exp)
        .collect();

    let polys_w = polys.clone();
    let norms_w = norms.clone();
    let wavefunction: WaveFn = Arc::new(move |m, x| {
        if m >= N_CACHE {
            return Complex64::new(f64::NAN, 0.0);
        }
        let t = (a * x).tanh();
        let den = alpha + beta + (alpha - beta) * t;
        let env = (1.0 - t).powf(0.5 * (alpha + 1.0)) * (1.0 + t).powf(0.5 * (beta + 1.0));
        let p = horner(&polys_w[m].0, t);
        Complex64::new(norms_w[m] * env * p / den, 0.0)
    });

    let polys_d = polys;
    let norms_d = norms;
    let wavefunction_d1: WaveFn = Arc::new(move |m, x| {
        if m >= N_CACHE {
            return Complex64::new(f64::NAN, 0.0);
        }
        let t = (a * x).tanh();
        let den = alpha + beta + (alpha - beta) * t;
        let env = (1.0 - t).powf(0.5 * (alpha + 1.0)) * (1.0 + t).powf(0.5 * (beta + 1.0));
        let p = horner(&polys_d[m].0, t);
        let pp = horner(&polys_d[m].1, t);
        let one_m_t2 = 1.0 - t * t;
        let bracket = -0.5 * (alpha + 1.0) * (1.0 + t) * p + 0.5 * (beta + 1.0) * (1.0 - t) * p
            + one_m_t2 * pp
            - (alpha - beta) * one_m_t2 * p / den;
        Complex64::new(a * norms_d[m] * env * bracket / den, 0.0)
    });

    let superpotential: RealFn = Arc::new(move |x| {
        let c = (a * x).cosh();
        let s = (a * x).sinh();
        let d1 = (alpha + beta) * c + (alpha - beta) * s;
        let d2 = (alpha + beta + 2.0) * c + (alpha - beta) * s;
        0.5 * a * ((alpha - beta) * c + (alpha + beta + 2.0) * s)
            + 2.0 * a * (alpha - beta) / (d1 * d2)
    });

    Ok(ModelCard {
        name: "pdm_x1_jacobi".into(),
        params: vec![
            ("a".into(), a),
            ("alpha".into(), alpha),
            ("beta".into(), beta),
        ],
        mass,
        potential,
        energy,
        wavefunction,
        wavefunction_d1: Some(wavefunction_d1),
        superpotential: Some(superpotential),
        hermitian_equivalent: None,
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        strategy: SolveStrategy::DirectBdd,
        recommended_domain: domain,
    })
}

/// The base potential of [`pdm_x1_jacobi`], ground energy pinned to 0.
pub fn x1_jacobi_minus_potential(a: f64, alpha: f64, beta: f64) -> RealFn {
    Arc::new(move |x| {
        let e = (2.0 * a * x).exp();
        let d = beta + alpha * e;
        0.25 * a * a
            * ((alpha * alpha - 1.0) * e
                + (beta * beta - 1.0) / e
                + 4.0 * (alpha - beta) * (alpha - 3.0 * beta) / (alpha * d)
                - 8.0 * beta * (alpha - beta) * (alpha - beta) / (alpha * d * d))
            - 0.25
                * a
                * a
                * (2.0 * alpha * beta + 2.0 * alpha + 2.0 * beta + 2.0 + 4.0 * beta / alpha)
    })
}

/// Closed-form supersymmetric partner of [`pdm_x1_jacobi`]'s potential.
/// Shape invariance: it equals the base potential at (α+1, β+1) shifted
/// by a²(α+β+2).
pub fn x1_jacobi_plus_potential(a: f64, alpha: f64, beta: f64) -> RealFn {
    Arc::new(move |x| {
        let e = (2.0 * a * x).exp();
        let d = (alpha + 1.0) * e + beta + 1.0;
        0.25 * a * a
            * (alpha * (alpha + 2.0) * e
                + beta * (beta + 2.0) / e
                + 4.0 * (alpha - beta) * (alpha - 3.0 * beta - 2.0) / ((alpha + 1.0) * d))
            - 0.25
                * a
                * a
                * (8.0 * (beta + 1.0) * (alpha - beta) * (alpha - beta)
                    / ((alpha + 1.0) * d * d)
                    + 2.0 * alpha * beta
                    + 4.0 * (beta + 1.0) / (alpha + 1.0))
    })
}

/// Mass M = 1/(1+α²x²): an oscillator in the stretched coordinate
/// y = asinh(αx)/α with the familiar odd-integer tower E_k = 2k+1.
pub fn pdm_sinh_osc(alpha: f64) -> Result<ModelCard> {
    require(
        alpha > 0.0,
        format!("deformation must satisfy alpha > 0 (got {alpha})"),
    )?;
    let half = (4.4 * alpha).sinh() / alpha;
    let domain = (-half, half);

    let mass = MassProfile::new(
        Arc::new(move |x| 1.0 / (1.0 + alpha * alpha * x * x)),
        Arc::new(move |x| {
            let u = 1.0 + alpha * alpha * x * x;
            -2.0 * alpha * alpha * x / (u * u)
        }),
        Arc::new(move |x| {
            let u = 1.0 + alpha * alpha * x * x;
            -2.0 * alpha * alpha / (u * u) + 8.0 * alpha.powi(4) * x * x / (u * u * u)
        }),
        domain,
    );

    let y_of = move |x: f64| (alpha * x).asinh() / alpha;
    let potential = Arc::new(move |x: f64| {
        let y = y_of(x);
        let u = 1.0 + alpha * alpha * x * x;
        Complex64::new(y * y - 0.25 * alpha * alpha * (2.0 + alpha * alpha * x * x) / u, 0.0)
    });

    let energy: EnergyFn = Arc::new(|k| 2.0 * k as f64 + 1.0);

    let cnorm = |k: usize| -> f64 {
        (-0.5 * (k as f64 * std::f64::consts::LN_2 + gamma_ln_real(k as f64 + 1.0))
            - 0.25 * std::f64::consts::PI.ln())
        .exp()
    };
    let wavefunction: WaveFn = Arc::new(move |k, x| {
        let y = y_of(x);
        let u = 1.0 + alpha * alpha * x * x;
        let v = cnorm(k) * (-0.5 * y * y).exp() * u.powf(-0.25) * hermite_h(k, y);
        Complex64::new(v, 0.0)
    });
    let wavefunction_d1: WaveFn = Arc::new(move |k, x| {
        let y = y_of(x);
        let u = 1.0 + alpha * alpha * x * x;
        let yp = 1.0 / u.sqrt();
        let h = hermite_h(k, y);
        let hp = if k == 0 { 0.0 } else { 2.0 * k as f64 * hermite_h(k - 1, y) };
        let g = (-0.5 * y * y).exp();
        let v = cnorm(k)
            * ((-y * h + hp) * yp * g * u.powf(-0.25)
                + g * h * (-0.5 * alpha * alpha * x) * u.powf(-1.25));
        Complex64::new(v, 0.0)
    });

    let superpotential: RealFn = Arc::new(move |x| {
        let u = 1.0 + alpha * alpha * x * x;
        y_of(x) + 0.5 * alpha * alpha * x / u.sqrt()
    });

    Ok(ModelCard {
        name: "pdm_sinh_osc".into(),
        params: vec![("alpha".into(), alpha)],
        mass,
        potential,
        energy,
        wavefunction,
        wavefunction_d1: Some(wavefunction_d1),
        superpotential: Some(superpotential),
        hermitian_equivalent: None,
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        strategy: SolveStrategy::DirectBdd,
        recommended_domain: domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{solve_model, SolveConfig};
    use crate::models::testutil::bdd_residual_max;
    use crate::numeric::{integrate, linspace};

    fn rel_err(have: f64, want: f64) -> f64 {
        (have - want).abs() / want.abs().max(1.0)
    }

    #[test]
    fn laguerre_grid_matches_energy_formula() {
        let card = pdm_x1_laguerre(1.0, 2.0).unwrap();
        let got = solve_model(&card, &SolveConfig::default()).unwrap();
        for m in 0..4 {
            assert!(
                rel_err(got.energies[m], (card.energy)(m)) < 1e-4,
                "level {m}: {} vs {}",
                got.energies[m],
                (card.energy)(m)
            );
        }
    }

    #[test]
    fn laguerre_states_are_normalized_and_satisfy_the_equation() {
        let card = pdm_x1_laguerre(1.0, 2.0).unwrap();
        for m in [0usize, 2] {
            let wf = card.wavefunction.clone();
            let f = move |x: f64| wf(m, x).re.powi(2);
            let n = integrate(&f, -3.2, 14.0, 1e-12);
            assert!((n - 1.0).abs() < 1e-8, "norm of level {m}: {n}");
        }
        let xs = linspace(-2.5, 11.0, 301);
        for m in 0..4 {
            let r = bdd_residual_max(&card, m, &xs);
            assert!(r < 1e-6, "residual at level {m}: {r}");
        }
    }

    #[test]
    fn laguerre_derivative_closure_matches_stencil() {
        let card = pdm_x1_laguerre(1.0, 2.0).unwrap();
        let wf = card.wavefunction.clone();
        let d1 = card.wavefunction_d1.clone().unwrap();
        for &x in &[-1.3, 0.4, 2.7, 6.0] {
            for m in 0..3 {
                let num = crate::numeric::deriv1(|t| wf(m, t).re, x, 1e-3);
                assert!((num - d1(m, x).re).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn laguerre_superpotential_matches_ground_state() {
        let card = pdm_x1_laguerre(1.0, 2.0).unwrap();
        let wf = card.wavefunction.clone();
        let d1 = card.wavefunction_d1.clone().unwrap();
        let w = card.superpotential.clone().unwrap();
        for &x in &[-1.5, -0.2, 1.0, 3.3, 7.9] {
            let numeric = -d1(0, x).re / (card.mass.m(x).sqrt() * wf(0, x).re);
            assert!((numeric - w(x)).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn laguerre_partner_is_shape_invariant() {
        let (b, alpha) = (1.0, 2.0);
        let plus = x1_laguerre_plus_potential(b, alpha);
        let minus_up = x1_laguerre_minus_potential(b, alpha + 1.0);
        let xs = linspace(-3.0, 12.0, 400);
        let diffs: Vec<f64> = xs.iter().map(|&x| plus(x) - minus_up(x)).collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64)
            .sqrt();
        assert!((mean - b * b).abs() < 1e-10, "R = {mean}");
        assert!(sd < 1e-10, "stddev = {sd}");
    }

    #[test]
    fn laguerre_rejects_bad_parameters() {
        assert!(pdm_x1_laguerre(0.0, 2.0).is_err());
        assert!(pdm_x1_laguerre(1.0, -1.0).is_err());
    }

    #[test]
    fn jacobi_grid_matches_energy_formula() {
        let card = pdm_x1_jacobi(0.2, 2.0, 2.5).unwrap();
        let got = solve_model(&card, &SolveConfig::default()).unwrap();
        for m in 0..4 {
            assert!(
                rel_err(got.energies[m], (card.energy)(m)) < 1e-4,
                "level {m}: {} vs {}",
                got.energies[m],
                (card.energy)(m)
            );
        }
    }

    #[test]
    fn jacobi_states_are_normalized_and_satisfy_the_equation() {
        let card = pdm_x1_jacobi(0.2, 2.0, 2.5).unwrap();
        for m in [0usize, 1] {
            let wf = card.wavefunction.clone();
            let f = move |x: f64| wf(m, x).re.powi(2);
            let n = integrate(&f, -45.0, 45.0, 1e-12);
            assert!((n - 1.0).abs() < 1e-7, "norm of level {m}: {n}");
        }
        let xs = linspace(-30.0, 30.0, 301);
        for m in 0..4 {
            let r = bdd_residual_max(&card, m, &xs);
            assert!(r < 1e-6, "residual at level {m}: {r}");
        }
    }

    #[test]
    fn jacobi_superpotential_matches_ground_state() {
        let card = pdm_x1_jacobi(0.2, 2.0, 2.5).unwrap();
        let wf = card.wavefunction.clone();
        let d1 = card.wavefunction_d1.clone().unwrap();
        let w = card.superpotential.clone().unwrap();
        for &x in &[-12.0, -3.0, 0.7, 5.0, 15.0] {
            let numeric = -d1(0, x).re / (card.mass.m(x).sqrt() * wf(0, x).re);
            assert!((numeric - w(x)).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn jacobi_partner_is_shape_invariant() {
        let (a, alpha, beta) = (0.2, 2.0, 2.5);
        let plus = x1_jacobi_plus_potential(a, alpha, beta);
        let minus_up = x1_jacobi_minus_potential(a, alpha + 1.0, beta + 1.0);
        let xs = linspace(-40.0, 40.0, 400);
        let diffs: Vec<f64> = xs.iter().map(|&x| plus(x) - minus_up(x)).collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64)
            .sqrt();
        let r_expected = a * a * (alpha + beta + 2.0);
        assert!((mean - r_expected).abs() < 1e-10, "R = {mean}");
        assert!(sd < 1e-10, "stddev = {sd}");
    }

    #[test]
    fn jacobi_rejects_bad_parameters() {
        assert!(pdm_x1_jacobi(-0.2, 2.0, 2.5).is_err());
        assert!(pdm_x1_jacobi(0.2, -0.6, 2.5).is_err());
        assert!(pdm_x1_jacobi(0.2, 2.0, 2.0).is_err());
    }

    #[test]
    fn sinh_osc_grid_matches_odd_integers() {
        let card = pdm_sinh_osc(1.0).unwrap();
        let got = solve_model(&card, &SolveConfig::default()).unwrap();
        for k in 0..4 {
            assert!(
                rel_err(got.energies[k], 2.0 * k as f64 + 1.0) < 1e-4,
                "level {k}: {}",
                got.energies[k]
            );
        }
    }

    #[test]
    fn sinh_osc_states_satisfy_the_equation() {
        let card = pdm_sinh_osc(1.0).unwrap();
        for k in [0usize, 3] {
            let wf = card.wavefunction.clone();
            let f = move |x: f64| wf(k, x).re.powi(2);
            let n = integrate(&f, -40.0, 40.0, 1e-12);
            assert!((n - 1.0).abs() < 1e-8, "norm of level {k}: {n}");
        }
        let xs = linspace(-20.0, 20.0, 301);
        for k in 0..4 {
            let r = bdd_residual_max(&card, k, &xs);
            assert!(r < 1e-6, "residual at level {k}: {r}");
        }
    }

    #[test]
    fn sinh_osc_superpotential_matches_ground_state() {
        let card = pdm_sinh_osc(1.0).unwrap();
        let wf = card.wavefunction.clone();
        let d1 = card.wavefunction_d1.clone().unwrap();
        let w = card.superpotential.clone().unwrap();
        for &x in &[-7.0, -1.1, 0.3, 2.2, 9.0] {
            let numeric = -d1(0, x).re / (card.mass.m(x).sqrt() * wf(0, x).re);
            assert!((numeric - w(x)).abs() < 1e-8, "x = {x}");
        }
    }
}
