//! Rationally extended oscillators with complex-shifted partners.
//!
//! Both families are constant-mass models whose potentials carry a
//! rational one-pole extension on top of a classical shape (radial
//! oscillator, trigonometric well).  The catalog cards are the
//! complex-shifted versions x → x + iε/k; each one carries its Hermitian
//! representative plus the imaginary-shift similarity map, so the grid
//! oracle solves the representative and the shift is checked pointwise.

use crate::grid::MassProfile;
use crate::models::{
    l2_norms, require, EnergyFn, HermitianEquivalent, HolomorphicFn, ModelCard, SimilarityMap,
    SolveStrategy, UnitConvention, WaveFn,
};
use crate::specfn::{gamma_ln_real, x1_jacobi_coeffs, x1_laguerre_coeffs};
use crate::{ComplexFn, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2};
use std::sync::Arc;

/// Levels cached per card; higher indices return NaN.
const N_CACHE: usize = 16;

fn horner_c(c: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        acc = acc * z + ck;
    }
    acc
}

/// Radial-oscillator family with a rational one-pole extension, shifted
/// off the real axis by ε/k.  The Hermitian representative lives on the
/// half line x > 0; the shifted model is PT-symmetric on the whole line.
pub fn quasi_x1_laguerre(a: f64, k: f64, eps: f64) -> Result<ModelCard> {
    require(a > 0.0, format!("the barrier parameter must satisfy a > 0 (got {a})"))?;
    require(k != 0.0, format!("the frequency parameter k must be non-zero (got {k})"))?;
    let kk = k.abs();
    let rep_domain = (0.0, 16.0 / kk);
    let pt_domain = (-16.0 / kk, 16.0 / kk);
    let shift = eps / k;

    let continued: HolomorphicFn = Arc::new(move |z: Complex64| {
        let z2 = z * z;
        let den = k * k * z2 + 4.0 * a;
        k.powi(4) / 16.0 * z2 + (a * a - 0.25) / z2 + 4.0 * k * k / den
            - 32.0 * a * k * k / (den * den)
    });

    let energy: EnergyFn = Arc::new(move |m| 0.5 * k * k * (2.0 * m as f64 + a + 1.0));

    let mut polys = Vec::with_capacity(N_CACHE);
    for m in 0..N_CACHE {
        polys.push(
            x1_laguerre_coeffs(m + 1, a)?
                .real_coeffs()
                .expect("X1 Laguerre coefficients are real"),
        );
    }
    let polys = Arc::new(polys);
    // Closed-form norms for the extended radial oscillator in n = m + 1.
    let norms: Vec<f64> = (0..N_CACHE)
        .map(|m| {
            let n = m as f64 + 1.0;
            0.5 * (gamma_ln_real(n) + (2.0 * a + 2.0) * kk.ln() - (2.0 * a - 3.0) * LN_2
                - (a + n).ln()
                - gamma_ln_real(a + n - 1.0))
        })
        .map(f64::exp)
        .collect();

    let psi_c = {
        let polys = polys.clone();
        move |m: usize, z: Complex64| -> Complex64 {
            if m >= N_CACHE {
                return Complex64::new(f64::NAN, 0.0);
            }
            let t = 0.25 * k * k * z * z;
            let den = k * k * z * z + 4.0 * a;
            norms[m] * z.powc(Complex64::new(a + 0.5, 0.0)) * (-0.5 * t).exp()
                * horner_c(&polys[m], t)
                / den
        }
    };

    let psi_rep = psi_c.clone();
    let rep_wavefunction: WaveFn = Arc::new(move |m, x| psi_rep(m, Complex64::new(x, 0.0)));
    let pt_wavefunction: WaveFn = Arc::new(move |m, x| psi_c(m, Complex64::new(x, shift)));

    let rep_potential: ComplexFn = {
        let continued = continued.clone();
        Arc::new(move |x| continued(Complex64::new(x, 0.0)))
    };
    let rep = ModelCard {
        name: "quasi_x1_laguerre_rep".into(),
        params: vec![("a".into(), a), ("k".into(), k)],
        mass: MassProfile::constant(rep_domain),
        potential: rep_potential,
        energy: energy.clone(),
        wavefunction: rep_wavefunction,
        wavefunction_d1: None,
        superpotential: None,
        hermitian_equivalent: None,
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        strategy: SolveStrategy::DirectBdd,
        recommended_domain: rep_domain,
    };

    let pt_potential: ComplexFn = {
        let continued = continued.clone();
        Arc::new(move |x| continued(Complex64::new(x, shift)))
    };
    Ok(ModelCard {
        name: "quasi_x1_laguerre".into(),
        params: vec![("a".into(), a), ("k".into(), k), ("eps".into(), eps)],
        mass: MassProfile::constant(pt_domain),
        potential: pt_potential,
        energy,
        wavefunction: pt_wavefunction,
        wavefunction_d1: None,
        superpotential: None,
        hermitian_equivalent: Some(HermitianEquivalent {
            card: Arc::new(rep),
            map: SimilarityMap::ImaginaryShift { shift, continued },
        }),
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        strategy: SolveStrategy::HermitianEquivalent,
        recommended_domain: pt_domain,
    })
}

/// Trigonometric well with a rational one-pole extension, complex-shifted
/// by ε/k.  For a ≠ b the shifted potential is quasi-Hermitian but not
/// PT-symmetric; the spectrum is still that of the Hermitian
/// representative on |x| < π/(2k).
pub fn quasi_x1_jacobi(a: f64, b: f64, k: f64, eps: f64) -> Result<ModelCard> {
    require(
        a > -0.5 && b > -0.5,
        format!("the well parameters must satisfy a, b > -1/2 (got a = {a}, b = {b})"),
    )?;
    require(
        (a - b).abs() > 1e-12,
        format!("the rational extension degenerates for a = b (got {a})"),
    )?;
    require(k > 0.0, format!("the frequency parameter must satisfy k > 0 (got {k})"))?;
    // Keep a thin buffer off the sec² walls for quadrature and the grid.
    let wall = (FRAC_PI_2 - 1e-3) / k;
    let domain = (-wall, wall);
    let shift = eps / k;

    let continued: HolomorphicFn = Arc::new(move |z: Complex64| {
        let s = (k * z).sin();
        let c = (k * z).cos();
        let sec2 = 1.0 / (c * c);
        let d = (a + b) - (b - a) * s;
        k * k * (2.0 * a * a + 2.0 * b * b - 1.0) / 4.0 * sec2
            - k * k * (b * b - a * a) / 2.0 * s * sec2
            + 2.0 * k * k * (a + b) / d
            - 8.0 * k * k * a * b / (d * d)
    });

    let energy: EnergyFn =
        Arc::new(move |m| 0.25 * k * k * (2.0 * m as f64 + a + b + 1.0).powi(2));

    let mut polys = Vec::with_capacity(N_CACHE);
    for m in 0..N_CACHE {
        polys.push(
            x1_jacobi_coeffs(m + 1, a, b)?
                .real_coeffs()
                .expect("X1 Jacobi coefficients are real"),
        );
    }
    let polys = Arc::new(polys);

    // Printed only up to a constant: normalize numerically on the
    // representative domain.
    let raw_c = {
        let polys = polys.clone();
        move |m: usize, z: Complex64| -> Complex64 {
            if m >= N_CACHE {
                return Complex64::new(f64::NAN, 0.0);
            }
            let s = (k * z).sin();
            let d = (a + b) - (b - a) * s;
            let one = Complex64::new(1.0, 0.0);
            (one - s).powc(Complex64::new(0.5 * a + 0.25, 0.0))
                * (one + s).powc(Complex64::new(0.5 * b + 0.25, 0.0))
                * horner_c(&polys[m], s)
                / d
        }
    };
    let raw_r = raw_c.clone();
    let norms: Arc<Vec<f64>> = Arc::new(l2_norms(
        |m, x| raw_r(m, Complex64::new(x, 0.0)),
        |_| 1.0,
        domain,
        N_CACHE,
    ));

    let rep_wavefunction: WaveFn = {
        let (raw, norms) = (raw_c.clone(), norms.clone());
        Arc::new(move |m, x| {
            if m >= N_CACHE {
                return Complex64::new(f64::NAN, 0.0);
            }
            raw(m, Complex64::new(x, 0.0)) / norms[m]
        })
    };
    let pt_wavefunction: WaveFn = {
        let (raw, norms) = (raw_c, norms);
        Arc::new(move |m, x| {
            if m >= N_CACHE {
                return Complex64::new(f64::NAN, 0.0);
            }
            raw(m, Complex64::new(x, shift)) / norms[m]
        })
    };

    let rep_potential: ComplexFn = {
        let continued = continued.clone();
        Arc::new(move |x| continued(Complex64::new(x, 0.0)))
    };
    let rep = ModelCard {
        name: "quasi_x1_jacobi_rep".into(),
        params: vec![("a".into(), a), ("b".into(), b), ("k".into(), k)],
        mass: MassProfile::constant(domain),
        potential: rep_potential,
        energy: energy.clone(),
        wavefunction: rep_wavefunction,
        wavefunction_d1: None,
        superpotential: None,
        hermitian_equivalent: None,
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        strategy: SolveStrategy::DirectBdd,
        recommended_domain: domain,
    };

    let pt_potential: ComplexFn = {
        let continued = continued.clone();
        Arc::new(move |x| continued(Complex64::new(x, shift)))
    };
    Ok(ModelCard {
        name: "quasi_x1_jacobi".into(),
        params: vec![
            ("a".into(), a),
            ("b".into(), b),
            ("k".into(), k),
            ("eps".into(), eps),
        ],
        mass: MassProfile::constant(domain),
        potential: pt_potential,
        energy,
        wavefunction: pt_wavefunction,
        wavefunction_d1: None,
        superpotential: None,
        hermitian_equivalent: Some(HermitianEquivalent {
            card: Arc::new(rep),
            map: SimilarityMap::ImaginaryShift { shift, continued },
        }),
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        strategy: SolveStrategy::HermitianEquivalent,
        recommended_domain: domain,
    })
}
