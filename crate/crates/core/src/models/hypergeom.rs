//! Solvable soliton-mass model with a Gauss-hypergeometric solution
//! family: M = ¼sech²(x/2) under an asymmetric Morse-like potential
//! V = A·eˣ + B·e⁻ˣ.  Besides the bound-state card, this module exposes
//! the general solution of the stationary equation at arbitrary (even
//! complex) energy, which is the raw material for every Darboux-type
//! construction in the workbench.

use super::{l2_norms, require, EnergyFn, ModelCard, SolveStrategy, UnitConvention, WaveFn};
use crate::grid::MassProfile;
use crate::specfn::{hyp2f1, jacobi_coeffs};
use crate::transforms::SeedSolution;
use crate::{ComplexFn, RealFn, Result};
use num_complex::Complex64;
use std::sync::Arc;

const N_CACHE: usize = 12;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// ln(1 + eˣ) without overflow for large x.
fn ln1pexp(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Logistic map u(x) = eˣ/(1+eˣ), the natural argument of the series.
fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn horner(cs: &[f64], x: f64) -> f64 {
    cs.iter().rev().fold(0.0, |s, &a| s * x + a)
}

fn is_nonpos_int(z: Complex64) -> bool {
    z.im.abs() < 1e-12 && z.re <= 1e-9 && (z.re - z.re.round()).abs() < 1e-9
}

/// Solvable-window half-width: wide enough that every bound state in use
/// has decayed below working precision, narrow enough that the general
/// solutions never overflow.
fn half_width(ab_sum: f64, c: f64) -> f64 {
    let rate_left = 0.5 * c;
    let rate_right = 0.5 * (ab_sum + 1.0 - c);
    (21.0 / rate_left.min(rate_right)).clamp(8.0, 60.0)
}

fn mass_profile(domain: (f64, f64)) -> MassProfile {
    MassProfile::new(
        Arc::new(|x| {
            let s = 1.0 / (0.5 * x).cosh();
            0.25 * s * s
        }),
        Arc::new(|x| {
            let s = 1.0 / (0.5 * x).cosh();
            -0.25 * s * s * (0.5 * x).tanh()
        }),
        Arc::new(|x| {
            let s = 1.0 / (0.5 * x).cosh();
            let t = (0.5 * x).tanh();
            0.25 * s * s * t * t - 0.125 * s.powi(4)
        }),
        domain,
    )
}

/// The model potential V = ((s−c)²−1)/4·eˣ + c(c−2)/4·e⁻ˣ with s = a+b.
pub fn base_potential(a: f64, b: f64, c: f64) -> RealFn {
    let s = a + b;
    Arc::new(move |x: f64| {
        0.25 * (((s - c) * (s - c) - 1.0) * x.exp() + c * (c - 2.0) * (-x).exp())
    })
}

/// Bound energies E_n = n² + n(a+b) + c(a+b−c+1)/2.
pub fn energy_level(a: f64, b: f64, c: f64, n: usize) -> f64 {
    let s = a + b;
    let nf = n as f64;
    nf * nf + nf * s + 0.5 * c * (s - c + 1.0)
}

/// Characteristic energy of the general solution pair at parameters
/// (a, b, c): μ = −ab + (a+b+1)c/2 − c²/2.
pub fn mu_of(a: Complex64, b: Complex64, c: f64) -> Complex64 {
    -a * b + (a + b + 1.0) * (0.5 * c) - c64(0.5 * c * c)
}

/// Soliton-mass model card.  The bound tower closes on classical Jacobi
/// polynomials of argument −tanh(x/2).
pub fn pdm_sech_hypergeometric(a: f64, b: f64, c: f64) -> Result<ModelCard> {
    require(c > 0.5, format!("parameter must satisfy c > 1/2 (got {c})"))?;
    require(
        a + b - c + 0.5 > 0.0,
        format!("parameters must satisfy a + b - c + 1/2 > 0 (got {})", a + b - c + 0.5),
    )?;
    let s = a + b;
    let half = half_width(s, c);
    let domain = (-half, half);
    let mass = mass_profile(domain);

    let vr = base_potential(a, b, c);
    let vr2 = vr.clone();
    let potential = Arc::new(move |x: f64| Complex64::new(vr2(x), 0.0));

    let energy: EnergyFn = Arc::new(move |n| energy_level(a, b, c, n));

    // ψ_n ∝ e^{cx/2}(1+eˣ)^{−(a+b+1)/2} P_n^{(c−1, a+b−c)}(−tanh(x/2)),
    // normalized numerically level by level.
    let aj = c - 1.0;
    let bj = s - c;
    let mut polys = Vec::with_capacity(N_CACHE);
    for n in 0..N_CACHE {
        let cs = jacobi_coeffs(n, aj.into(), bj.into())
            .real_coeffs()
            .expect("Jacobi coefficients are real");
        let ds: Vec<f64> = (1..cs.len()).map(|k| cs[k] * k as f64).collect();
        polys.push((cs, ds));
    }
    let polys = Arc::new(polys);

    let envelope = move |x: f64| (0.5 * c * x - 0.5 * (s + 1.0) * ln1pexp(x)).exp();

    let polys_raw = polys.clone();
    let raw = move |n: usize, x: f64| -> Complex64 {
        if n >= N_CACHE {
            return Complex64::new(f64::NAN, 0.0);
        }
        let t = -(0.5 * x).tanh();
        c64(envelope(x) * horner(&polys_raw[n].0, t))
    };
    let raw_for_norm = raw.clone();
    let norms = Arc::new(l2_norms(raw_for_norm, |_| 1.0, domain, N_CACHE));

    let norms_w = norms.clone();
    let raw_w = raw.clone();
    let wavefunction: WaveFn = Arc::new(move |n, x| raw_w(n, x) / norms_w[n.min(N_CACHE - 1)]);

    let polys_d = polys;
    let norms_d = norms;
    let wavefunction_d1: WaveFn = Arc::new(move |n, x| {
        if n >= N_CACHE {
            return Complex64::new(f64::NAN, 0.0);
        }
        let t = -(0.5 * x).tanh();
        let u = logistic(x);
        let p = horner(&polys_d[n].0, t);
        let pp = horner(&polys_d[n].1, t);
        let bracket = (0.5 * c - 0.5 * (s + 1.0) * u) * p - 0.5 * (1.0 - t * t) * pp;
        c64(envelope(x) * bracket / norms_d[n])
    });

    let superpotential: RealFn = Arc::new(move |x| {
        let u = logistic(x);
        (0.5 * x).cosh() * ((s + 1.0) * u - c)
    });

    Ok(ModelCard {
        name: "pdm_sech_hypergeometric".into(),
        params: vec![("a".into(), a), ("b".into(), b), ("c".into(), c)],
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

/// General solution of the stationary equation at energy μ = `mu_of`(a,b,c),
/// assembled as w₁·s₁ + w₂·s₂ from the left-recessive branch s₁ (series in
/// u = eˣ/(1+eˣ)) and the right-recessive branch s₂ (series in 1−u).
/// Complex a, b are allowed as long as a+b stays real, which keeps the
/// base potential real while μ roams the complex plane.
pub fn seed_solution(
    a: Complex64,
    b: Complex64,
    c: f64,
    w1: Complex64,
    w2: Complex64,
) -> Result<SeedSolution> {
    require(c > 0.5, format!("seed parameters must satisfy c > 1/2 (got {c})"))?;
    require(
        (a + b).im.abs() < 1e-9,
        format!("Im(a+b) must vanish so the base potential stays real (got {})", (a + b).im),
    )?;
    require(
        w1.norm() + w2.norm() > 0.0,
        "at least one branch weight must be nonzero".into(),
    )?;
    let s = (a + b).re;
    require(
        s - c + 0.5 > 0.0,
        format!("seed parameters must satisfy a + b - c + 1/2 > 0 (got {})", s - c + 0.5),
    )?;
    let half = half_width(s, c);
    let domain = (-half, half);
    let mu = mu_of(a, b, c);

    let cbar = a + b + 1.0 - c;
    let envelope = move |x: f64| (0.5 * c * x - 0.5 * (s + 1.0) * ln1pexp(x)).exp();

    let branch_values = move |x: f64| -> Option<(Complex64, Complex64, Complex64, Complex64)> {
        let u = logistic(x);
        let um1 = 1.0 / (1.0 + x.exp());
        let mut f1 = Complex64::default();
        let mut d1 = Complex64::default();
        let mut f2 = Complex64::default();
        let mut d2 = Complex64::default();
        if w1.norm() > 0.0 {
            f1 = hyp2f1(a, b, c64(c), u).ok()?.value;
            d1 = a * b / c * hyp2f1(a + 1.0, b + 1.0, c64(c + 1.0), u).ok()?.value
                * (u * (1.0 - u));
        }
        if w2.norm() > 0.0 {
            f2 = hyp2f1(a, b, cbar, um1).ok()?.value;
            d2 = -(a * b / cbar) * hyp2f1(a + 1.0, b + 1.0, cbar + 1.0, um1).ok()?.value
                * (u * (1.0 - u));
        }
        Some((f1, d1, f2, d2))
    };

    // Fail construction, not evaluation: probe the branches across the
    // window once so the packaged closures cannot error later.
    for &x in &[domain.0, -1.0, 0.0, 1.3, domain.1] {
        require(
            branch_values(x).is_some(),
            format!("hypergeometric branch evaluation failed near x = {x}"),
        )?;
    }

    let u_fn: ComplexFn = {
        let bv = branch_values;
        Arc::new(move |x| match bv(x) {
            Some((f1, _, f2, _)) => c64(envelope(x)) * (w1 * f1 + w2 * f2),
            None => Complex64::new(f64::NAN, f64::NAN),
        })
    };
    let u_prime: ComplexFn = {
        let bv = branch_values;
        Arc::new(move |x| match bv(x) {
            Some((f1, d1, f2, d2)) => {
                let log_env = 0.5 * c - 0.5 * (s + 1.0) * logistic(x);
                c64(envelope(x)) * (log_env * (w1 * f1 + w2 * f2) + w1 * d1 + w2 * d2)
            }
            None => Complex64::new(f64::NAN, f64::NAN),
        })
    };

    // Asymptotics: s₁ ~ e^{cx/2} on the left and picks up the growing
    // right exponent κ₂ = (a+b−c−1)/2 unless the series terminates (then
    // the growing coefficient vanishes); s₂ decays on the right by
    // construction and carries the e^{(1−c/2)x} branch on the left, which
    // outruns the envelope exactly when c > 2.
    let sig = |w: Complex64| w.norm() > 1e-12 * (w1.norm() + w2.norm());
    let terminating = is_nonpos_int(a) || is_nonpos_int(b);
    let kappa2 = 0.5 * (s - c - 1.0);
    let unbounded_right = sig(w1) && kappa2 > 0.0 && !terminating;
    let unbounded_left = sig(w2) && c > 2.0 && !terminating;

    let nodeless_interior = scan_nodeless(&u_fn, domain);

    Ok(SeedSolution {
        mu,
        u: u_fn,
        u_prime,
        nodeless_interior,
        unbounded_left,
        unbounded_right,
        domain,
    })
}

/// True when the sampled solution never passes through zero strictly
/// inside `domain` (real solutions: sign changes; complex ones: collapse
/// of |u| relative to its neighbors).
pub(crate) fn scan_nodeless(u: &ComplexFn, domain: (f64, f64)) -> bool {
    let n = 2001;
    let pad = 1e-6 * (domain.1 - domain.0);
    let xs = crate::numeric::linspace(domain.0 + pad, domain.1 - pad, n);
    let vals: Vec<Complex64> = xs.iter().map(|&x| u(x)).collect();
    let max_im = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let max_abs = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max_abs == 0.0 || !max_abs.is_finite() {
        return false;
    }
    if max_im < 1e-10 * max_abs {
        let mut prev = 0.0f64;
        for v in &vals {
            let s = v.re.signum();
            if v.re != 0.0 {
                if prev != 0.0 && s != prev {
                    return false;
                }
                prev = s;
            }
        }
        true
    } else {
        (1..n - 1).all(|i| {
            vals[i].norm() > 1e-8 * 0.5 * (vals[i - 1].norm() + vals[i + 1].norm())
        })
    }
}

/// Closed form of the partner potential after deleting the ground state:
/// same family with (a+b, c) → (a+b+2, c+1), offset so the old spectrum
/// minus its lowest level is reproduced exactly.
pub fn deleted_ground_potential(a: f64, b: f64, c: f64) -> RealFn {
    let s = a + b;
    Arc::new(move |x: f64| {
        0.25 * ((c * c - 1.0) * (-x).exp() + (s - c) * (2.0 + s - c) * x.exp()) + 0.5 * s
    })
}

/// Closed form after deleting the two lowest states: family parameters
/// (a+b, c) → (a+b+4, c+2) plus the matching offset.
pub fn two_level_deleted_potential(a: f64, b: f64, c: f64) -> RealFn {
    let s = a + b;
    Arc::new(move |x: f64| {
        0.25 * ((c * c - 2.0 * c * (s + 2.0) + (s + 1.0) * (s + 3.0)) * x.exp()
            + c * (c + 2.0) * (-x).exp()
            + 4.0 * (s + 1.0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{solve_model, SolveConfig};
    use crate::models::testutil::bdd_residual_max;
    use crate::numeric::{deriv1_c, deriv2_c, integrate, linspace};

    #[test]
    fn grid_matches_energy_formula() {
        let card = pdm_sech_hypergeometric(5.0, 0.0, 3.0).unwrap();
        let got = solve_model(&card, &SolveConfig::default()).unwrap();
        for n in 0..4 {
            let want = energy_level(5.0, 0.0, 3.0, n);
            assert!(
                (got.energies[n] - want).abs() / want.abs().max(1.0) < 1e-4,
                "level {n}: {} vs {want}",
                got.energies[n]
            );
        }
    }

    #[test]
    fn states_are_orthonormal_and_satisfy_the_equation() {
        let card = pdm_sech_hypergeometric(5.0, 0.0, 3.0).unwrap();
        let wf = card.wavefunction.clone();
        let f = |x: f64| wf(3, x).re.powi(2);
        let dom = card.recommended_domain;
        assert!((integrate(&f, dom.0, dom.1, 1e-12) - 1.0).abs() < 1e-8);
        let wf2 = card.wavefunction.clone();
        let g = |x: f64| wf2(0, x).re * wf2(2, x).re;
        assert!(integrate(&g, dom.0, dom.1, 1e-12).abs() < 1e-8);
        let xs = linspace(-10.0, 10.0, 301);
        for n in 0..5 {
            let r = bdd_residual_max(&card, n, &xs);
            assert!(r < 1e-6, "residual at level {n}: {r}");
        }
    }

    #[test]
    fn superpotential_matches_ground_state() {
        let card = pdm_sech_hypergeometric(5.0, 0.0, 3.0).unwrap();
        let wf = card.wavefunction.clone();
        let d1 = card.wavefunction_d1.clone().unwrap();
        let w = card.superpotential.clone().unwrap();
        for &x in &[-6.0, -1.0, 0.4, 2.2, 7.0] {
            let numeric = -d1(0, x).re / (card.mass.m(x).sqrt() * wf(0, x).re);
            assert!((numeric - w(x)).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn characteristic_energies() {
        assert!((mu_of(c64(5.0), c64(0.0), 3.0) - c64(4.5)).norm() < 1e-12);
        assert!((mu_of(c64(3.0), c64(5.0), 4.0) - c64(-5.0)).norm() < 1e-12);
        assert!((mu_of(c64(12.8), c64(10.0), 4.4) - c64(-85.32)).norm() < 1e-10);
        let mu = mu_of(Complex64::new(6.1, -5.0), Complex64::new(8.0, 5.0), 4.1);
        assert!((mu - Complex64::new(-51.25, 9.5)).norm() < 1e-10);
    }

    fn seed_residual(seed: &SeedSolution, a_sum: f64, c: f64, xs: &[f64]) -> f64 {
        let mass = mass_profile(seed.domain);
        let v = base_potential(a_sum, 0.0, c);
        let mut worst: f64 = 0.0;
        for &x in xs {
            let h = 1e-3;
            let f = |t: f64| (seed.u)(t);
            let val = (seed.u)(x);
            let d1 = deriv1_c(&f, x, h);
            let d2 = deriv2_c(&f, x, h);
            let m = mass.m(x);
            let m1 = mass.m1(x);
            let r = -d2 / m + m1 / (m * m) * d1 + (c64(v(x)) - seed.mu) * val;
            worst = worst.max(r.norm() / ((1.0 + seed.mu.norm()) * val.norm().max(1e-280)));
        }
        worst
    }

    #[test]
    fn seeds_solve_the_stationary_equation() {
        // Left-recessive branch at real parameters.
        let s1 = seed_solution(c64(3.0), c64(5.0), 4.0, c64(1.0), c64(0.0)).unwrap();
        let xs = [-7.0, -3.0, -0.8, 0.6, 2.5, 6.5];
        assert!(seed_residual(&s1, 8.0, 4.0, &xs) < 1e-5);

        // Right-recessive branch, same parameters.
        let s2 = seed_solution(c64(3.0), c64(5.0), 4.0, c64(0.0), c64(1.0)).unwrap();
        assert!(seed_residual(&s2, 8.0, 4.0, &xs) < 1e-5);

        // Mixed weights at non-integer c.
        let s3 = seed_solution(c64(2.8), c64(20.0), 4.4, c64(1.0), c64(1.0)).unwrap();
        assert!(seed_residual(&s3, 22.8, 4.4, &[-4.0, -1.0, 0.5, 2.0, 4.5]) < 1e-5);

        // Complex parameters with a real sum.
        let s4 = seed_solution(
            Complex64::new(6.1, -5.0),
            Complex64::new(8.0, 5.0),
            4.1,
            c64(1.0),
            c64(0.0),
        )
        .unwrap();
        assert!(seed_residual(&s4, 14.1, 4.1, &[-5.0, -1.5, 0.2, 1.8, 4.0]) < 1e-5);
    }

    #[test]
    fn seed_derivative_closure_matches_stencil() {
        let s = seed_solution(c64(2.8), c64(20.0), 4.4, c64(1.0), c64(1.0)).unwrap();
        for &x in &[-3.0, -0.5, 1.1, 3.2] {
            let f = |t: f64| (s.u)(t);
            let num = deriv1_c(&f, x, 1e-3);
            let rel = (num - (s.u_prime)(x)).norm() / (s.u)(x).norm();
            assert!(rel < 1e-8, "x = {x}: {rel}");
        }
    }

    #[test]
    fn seed_asymptotic_flags() {
        // Terminating ground-state seed: bounded both sides, nodeless.
        let g = seed_solution(c64(5.0), c64(0.0), 3.0, c64(1.0), c64(0.0)).unwrap();
        assert!(!g.unbounded_left && !g.unbounded_right && g.nodeless_interior);

        // Left-recessive branch below the ground state: grows to the right.
        let s1 = seed_solution(c64(3.0), c64(5.0), 4.0, c64(1.0), c64(0.0)).unwrap();
        assert!(!s1.unbounded_left && s1.unbounded_right && s1.nodeless_interior);

        // Right-recessive branch at c > 2: grows to the left.
        let s2 = seed_solution(c64(3.0), c64(5.0), 4.0, c64(0.0), c64(1.0)).unwrap();
        assert!(s2.unbounded_left && !s2.unbounded_right);

        // Mixed weights: unbounded on both sides (level-creation material).
        let s3 = seed_solution(c64(2.8), c64(20.0), 4.4, c64(1.0), c64(1.0)).unwrap();
        assert!(s3.unbounded_left && s3.unbounded_right && s3.nodeless_interior);

        // Complex seed of the strictly isospectral pair.
        let s4 = seed_solution(
            Complex64::new(6.1, -5.0),
            Complex64::new(8.0, 5.0),
            4.1,
            c64(1.0),
            c64(0.0),
        )
        .unwrap();
        assert!(!s4.unbounded_left && s4.unbounded_right && s4.nodeless_interior);
    }

    #[test]
    fn ground_seed_is_proportional_to_the_ground_state() {
        let card = pdm_sech_hypergeometric(5.0, 0.0, 3.0).unwrap();
        let seed = seed_solution(c64(5.0), c64(0.0), 3.0, c64(1.0), c64(0.0)).unwrap();
        assert!((seed.mu - c64((card.energy)(0))).norm() < 1e-12);
        let wf = card.wavefunction.clone();
        let ratio0 = wf(0, 0.7).re / (seed.u)(0.7).re;
        for &x in &[-4.0, -1.0, 0.2, 3.0] {
            let r = wf(0, x).re / (seed.u)(x).re;
            assert!((r - ratio0).abs() < 1e-9 * ratio0.abs(), "x = {x}");
        }
    }

    #[test]
    fn deletion_potentials_stay_in_family() {
        let (a, b, c) = (5.0, 0.0, 3.0);
        let one = deleted_ground_potential(a, b, c);
        let fam1 = base_potential(a + 2.0, b, c + 1.0);
        let two = two_level_deleted_potential(a, b, c);
        let fam2 = base_potential(a + 4.0, b, c + 2.0);
        // Offsets re-anchor the surviving tower onto the original energies.
        let off1 = energy_level(a, b, c, 1) - energy_level(a + 2.0, b, c + 1.0, 0);
        let off2 = energy_level(a, b, c, 2) - energy_level(a + 4.0, b, c + 2.0, 0);
        for &x in &[-3.0, -0.7, 0.0, 1.1, 2.9] {
            assert!((one(x) - fam1(x) - off1).abs() < 1e-12);
            assert!((two(x) - fam2(x) - off2).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(pdm_sech_hypergeometric(1.0, 0.0, 0.3).is_err());
        assert!(pdm_sech_hypergeometric(1.0, 0.0, 2.0).is_err());
        assert!(seed_solution(c64(3.0), c64(5.0), 0.2, c64(1.0), c64(0.0)).is_err());
        assert!(seed_solution(
            Complex64::new(3.0, 1.0),
            c64(5.0),
            4.0,
            c64(1.0),
            c64(0.0)
        )
        .is_err());
    }
}
