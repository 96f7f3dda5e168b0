//! Generalized Swanson oscillators with a position-dependent mass.
//!
//! Each card is the Hermitian representative of a quadratic non-Hermitian
//! oscillator built from first-order ladder operators with coefficient
//! A(x) = M(x)^{−1/2}: the similarity-transformed Hamiltonian is
//! −d/dx (1/M) d/dx + V_eff with
//!
//! V_eff(x) = w̃² z(x)² − (A A″/2 + A′²/4),   z(x) = ∫ √M dx,
//!
//! and effective frequency w̃ = √(1 + 2(α + β) + (α − β)²)/2.  Under
//! ψ = M^{1/4} φ(z) the eigenproblem becomes the constant-mass oscillator
//! −φ″ + w̃² z² φ = E φ on the z-image of the line, so the spectrum is
//! decided entirely by whether the ends of that image are finite:
//!
//! * both ends infinite — the full tower E_n = 2w̃(n + ½), isospectral to
//!   the constant-mass oscillator regardless of the mass profile;
//! * exactly one end finite — a Dirichlet wall there keeps the odd half
//!   of the tower, E_n = 2w̃(2n + 3/2);
//! * both ends finite — a box of half-width ℓ whose levels approach the
//!   Dirichlet estimate E_k ≈ (πk/(2ℓ))², k = 1, 2, …, with the w̃²z²
//!   term adding an O(w̃²ℓ²) upward shift.
//!
//! [`swanson_effective`] builds eight reference mass profiles (three of
//! each unbounded kind and three boxes); [`isospectrality_verdict`]
//! re-derives the classification numerically from the mass profile alone.

use crate::grid::{to_constant_mass, MassProfile};
use crate::models::{require, EnergyFn, ModelCard, SolveStrategy, UnitConvention, WaveFn};
use crate::numeric::bisect;
use crate::specfn::{erf, gamma_ln_real, hermite_h};
use crate::{ComplexFn, RealFn, Result};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

/// Which part of the oscillator tower the z-image keeps.
#[derive(Clone, Copy)]
enum Tower {
    /// z covers the whole line: E_n = 2w̃(n + ½).
    Full,
    /// z covers a half line: the Dirichlet wall keeps E_n = 2w̃(2n + 3/2).
    OddHalfLine,
    /// z covers a box of the stored half-width ℓ: E_n ≈ (π(n+1)/(2ℓ))².
    Box(f64),
}

/// Effective oscillator frequency w̃ = √(1 + 2(α + β) + (α − β)²)/2 of the
/// quadratic model with couplings α, β (and w − α − β = 1).
pub fn effective_frequency(alpha: f64, beta: f64) -> Result<f64> {
    require(
        alpha.is_finite() && beta.is_finite(),
        format!("couplings must be finite (got alpha = {alpha}, beta = {beta})"),
    )?;
    let disc = 1.0 + 2.0 * (alpha + beta) + (alpha - beta) * (alpha - beta);
    require(
        disc > 0.0,
        format!(
            "the effective frequency needs 1 + 2(alpha+beta) + (alpha-beta)^2 > 0 (got {disc})"
        ),
    )?;
    Ok(0.5 * disc.sqrt())
}

/// Monotone-increasing inverse of `z_of_x` by bisection; `pad(z)` must
/// return a bracket half-width around z that always contains the preimage.
fn invert_monotone(z_of_x: &RealFn, pad: f64) -> RealFn {
    let zf = z_of_x.clone();
    Arc::new(move |z: f64| {
        let (lo, hi) = (z - pad, z + pad);
        match bisect(|x| zf(x) - z, lo, hi, 1e-12 * (1.0 + pad + z.abs())) {
            Some(x) => x,
            None => f64::NAN,
        }
    })
}

/// One of eight reference Swanson mass profiles in its Hermitian effective
/// form.  `row` selects the profile:
///
/// 1. M = 1/(1 + x²)            — z = asinh x, full tower (catalog entry);
/// 2. M = cosh²x                — z = sinh x, full tower;
/// 3. M = ((γ + x²)/(1 + x²))²  — z = x + (γ−1)·atan x, full tower; the
///    shape parameter γ > 0 is required for this row only;
/// 4. M = e^{2x} sech²x         — z = ln(1 + e^{2x}) ∈ (0, ∞), odd tower;
/// 5. M = e^{−x}                — z = −2e^{−x/2} ∈ (−∞, 0), odd tower;
/// 6. M = sech²x                — z = atan(sinh x), box of half-width π/2;
/// 7. M = e^{−2x²}              — z = (√π/2)·erf x, box of half-width √π/2;
/// 8. M = 1/(1 + x²)²           — z = atan x, box of half-width π/2.
///
/// All cards share the closed z-image potential w̃²z², so the oracle solves
/// the exact constant-mass problem rather than re-sampling V_eff.  Box
/// energies are the leading Dirichlet estimate; the quadratic term shifts
/// them upward by O(w̃²ℓ²), so treat them as asymptotics in n.
pub fn swanson_effective(
    row: usize,
    alpha: f64,
    beta: f64,
    gamma: Option<f64>,
) -> Result<ModelCard> {
    require(
        (1..=8).contains(&row),
        format!("the mass-profile row must lie in 1..=8 (got {row})"),
    )?;
    let wt = effective_frequency(alpha, beta)?;
    if row == 3 {
        let g = gamma.unwrap_or(f64::NAN);
        require(
            g.is_finite() && g > 0.0,
            format!("row 3 needs a shape parameter gamma > 0 (got {gamma:?})"),
        )?;
    } else {
        require(
            gamma.is_none(),
            format!("only row 3 takes the shape parameter gamma (got {gamma:?} for row {row})"),
        )?;
    }
    let unbounded = (f64::NEG_INFINITY, f64::INFINITY);
    let wt2 = wt * wt;

    // Per-row closed forms: mass with two derivatives, the map z(x) and its
    // inverse, the effective potential, a truncation window wide enough for
    // the tower being checked, and the tower kind.
    let (mass, z_of_x, x_of_z, v_x, domain, tower): (
        MassProfile,
        RealFn,
        RealFn,
        RealFn,
        (f64, f64),
        Tower,
    ) = match row {
        1 => {
            let mass = MassProfile::new(
                Arc::new(|x: f64| 1.0 / (1.0 + x * x)),
                Arc::new(|x: f64| {
                    let d = 1.0 + x * x;
                    -2.0 * x / (d * d)
                }),
                Arc::new(|x: f64| {
                    let d = 1.0 + x * x;
                    (6.0 * x * x - 2.0) / (d * d * d)
                }),
                unbounded,
            );
            let z: RealFn = Arc::new(|x: f64| x.asinh());
            let xz: RealFn = Arc::new(|z: f64| z.sinh());
            let v: RealFn = Arc::new(move |x: f64| {
                let d = 1.0 + x * x;
                let z = x.asinh();
                -(2.0 + x * x) / (4.0 * d) + wt2 * z * z
            });
            let xr = (8.0_f64).sinh();
            (mass, z, xz, v, (-xr, xr), Tower::Full)
        }
        2 => {
            let mass = MassProfile::new(
                Arc::new(|x: f64| x.cosh() * x.cosh()),
                Arc::new(|x: f64| (2.0 * x).sinh()),
                Arc::new(|x: f64| 2.0 * (2.0 * x).cosh()),
                unbounded,
            );
            let z: RealFn = Arc::new(|x: f64| x.sinh());
            let xz: RealFn = Arc::new(|z: f64| z.asinh());
            let v: RealFn = Arc::new(move |x: f64| {
                let sech = 1.0 / x.cosh();
                let s4 = sech.powi(4);
                let z = x.sinh();
                0.125 * (7.0 - 3.0 * (2.0 * x).cosh()) * s4 + wt2 * z * z
            });
            (mass, z, xz, v, (-3.0, 3.0), Tower::Full)
        }
        3 => {
            let g = gamma.unwrap();
            let mass = MassProfile::new(
                Arc::new(move |x: f64| {
                    let r = (g + x * x) / (1.0 + x * x);
                    r * r
                }),
                Arc::new(move |x: f64| {
                    let d = 1.0 + x * x;
                    4.0 * x * (1.0 - g) * (g + x * x) / (d * d * d)
                }),
                Arc::new(move |x: f64| {
                    let d = 1.0 + x * x;
                    4.0 * (1.0 - g) * (g + (3.0 - 5.0 * g) * x * x - 3.0 * x.powi(4))
                        / (d * d * d * d)
                }),
                unbounded,
            );
            let z: RealFn = Arc::new(move |x: f64| x + (g - 1.0) * x.atan());
            let xz = invert_monotone(&z, (g - 1.0).abs() * (PI / 2.0) + 1.0);
            let v: RealFn = Arc::new(move |x: f64| {
                let num = (g - 1.0) * (3.0 * x.powi(4) - 2.0 * (g - 2.0) * x * x - g);
                let z = x + (g - 1.0) * x.atan();
                num / (x * x + g).powi(4) + wt2 * z * z
            });
            (mass, z.clone(), xz, v, (-14.0, 14.0), Tower::Full)
        }
        4 => {
            // M = e^{2x} sech²x = 4/(1 + e^{−2x})², written overflow-free.
            let mass = MassProfile::new(
                Arc::new(|x: f64| {
                    let u = 1.0 + (-2.0 * x).exp();
                    4.0 / (u * u)
                }),
                Arc::new(|x: f64| {
                    let e = (-2.0 * x).exp();
                    let u = 1.0 + e;
                    16.0 * e / (u * u * u)
                }),
                Arc::new(|x: f64| {
                    let e = (-2.0 * x).exp();
                    let u = 1.0 + e;
                    (-32.0 * e + 96.0 * e * e / u) / (u * u * u)
                }),
                unbounded,
            );
            let z: RealFn = Arc::new(|x: f64| (2.0 * x).exp().ln_1p());
            let xz: RealFn = Arc::new(|z: f64| 0.5 * z.exp_m1().ln());
            let v: RealFn = Arc::new(move |x: f64| {
                let z = (2.0 * x).exp().ln_1p();
                -0.75 * (-4.0 * x).exp() - 0.5 * (-2.0 * x).exp() + wt2 * z * z
            });
            (mass, z, xz, v, (-15.0, 12.0), Tower::OddHalfLine)
        }
        5 => {
            let mass = MassProfile::new(
                Arc::new(|x: f64| (-x).exp()),
                Arc::new(|x: f64| -(-x).exp()),
                Arc::new(|x: f64| (-x).exp()),
                unbounded,
            );
            let z: RealFn = Arc::new(|x: f64| -2.0 * (-0.5 * x).exp());
            let xz: RealFn = Arc::new(|z: f64| -2.0 * (-0.5 * z).ln());
            let v: RealFn = Arc::new(move |x: f64| {
                -(3.0 / 16.0) * x.exp() + 4.0 * wt2 * (-x).exp()
            });
            (mass, z, xz, v, (-3.6, 30.0), Tower::OddHalfLine)
        }
        6 => {
            let mass = MassProfile::new(
                Arc::new(|x: f64| {
                    let s = 1.0 / x.cosh();
                    s * s
                }),
                Arc::new(|x: f64| {
                    let s = 1.0 / x.cosh();
                    -2.0 * s * s * x.tanh()
                }),
                Arc::new(|x: f64| {
                    let s2 = 1.0 / (x.cosh() * x.cosh());
                    let t = x.tanh();
                    4.0 * s2 * t * t - 2.0 * s2 * s2
                }),
                unbounded,
            );
            let z: RealFn = Arc::new(|x: f64| x.sinh().atan());
            let xz: RealFn = Arc::new(|z: f64| z.tan().asinh());
            let v: RealFn = Arc::new(move |x: f64| {
                let z = x.sinh().atan();
                0.25 - 0.75 * x.cosh() * x.cosh() + wt2 * z * z
            });
            (mass, z, xz, v, (-20.0, 20.0), Tower::Box(PI / 2.0))
        }
        7 => {
            let mass = MassProfile::new(
                Arc::new(|x: f64| (-2.0 * x * x).exp()),
                Arc::new(|x: f64| -4.0 * x * (-2.0 * x * x).exp()),
                Arc::new(|x: f64| (16.0 * x * x - 4.0) * (-2.0 * x * x).exp()),
                unbounded,
            );
            let half = 0.5 * PI.sqrt();
            let z: RealFn = Arc::new(move |x: f64| half * erf(x));
            let xz = invert_monotone(&z, 9.0);
            let v: RealFn = Arc::new(move |x: f64| {
                let e = erf(x);
                -(1.0 + 3.0 * x * x) * (2.0 * x * x).exp() + wt2 * half * half * e * e
            });
            (mass, z.clone(), xz, v, (-6.0, 6.0), Tower::Box(half))
        }
        _ => {
            let mass = MassProfile::new(
                Arc::new(|x: f64| {
                    let d = 1.0 + x * x;
                    1.0 / (d * d)
                }),
                Arc::new(|x: f64| {
                    let d = 1.0 + x * x;
                    -4.0 * x / (d * d * d)
                }),
                Arc::new(|x: f64| {
                    let d = 1.0 + x * x;
                    (20.0 * x * x - 4.0) / (d * d * d * d)
                }),
                unbounded,
            );
            let z: RealFn = Arc::new(|x: f64| x.atan());
            let xz: RealFn = Arc::new(|z: f64| z.tan());
            let v: RealFn = Arc::new(move |x: f64| {
                let z = x.atan();
                -(1.0 + 2.0 * x * x) + wt2 * z * z
            });
            (mass, z, xz, v, (-500.0, 500.0), Tower::Box(PI / 2.0))
        }
    };

    let energy: EnergyFn = match tower {
        Tower::Full => Arc::new(move |n| wt * (2.0 * n as f64 + 1.0)),
        Tower::OddHalfLine => Arc::new(move |n| wt * (4.0 * n as f64 + 3.0)),
        Tower::Box(half) => Arc::new(move |n| {
            let f = PI * (n as f64 + 1.0) / (2.0 * half);
            f * f
        }),
    };

    // ψ_n = M^{1/4} φ_k(z) with Hermite functions φ_k; a half-line image
    // keeps the odd k = 2n + 1 members, renormalized by √2.  Box rows have
    // no closed eigenfunctions, so they answer NaN.
    let wavefunction: WaveFn = match tower {
        Tower::Box(_) => Arc::new(|_, _| Complex64::new(f64::NAN, 0.0)),
        _ => {
            let zf = z_of_x.clone();
            let m = mass.eval.clone();
            let odd = matches!(tower, Tower::OddHalfLine);
            Arc::new(move |n, x| {
                let k = if odd { 2 * n + 1 } else { n };
                let y = wt.sqrt() * zf(x);
                let mut ln_norm = 0.25 * (wt / PI).ln()
                    - 0.5 * (k as f64 * LN_2 + gamma_ln_real(k as f64 + 1.0));
                if odd {
                    ln_norm += 0.5 * LN_2;
                }
                let amp =
                    m(x).powf(0.25) * ln_norm.exp() * hermite_h(k, y) * (-0.5 * y * y).exp();
                Complex64::new(amp, 0.0)
            })
        }
    };

    let mut params = vec![
        ("row".into(), row as f64),
        ("alpha".into(), alpha),
        ("beta".into(), beta),
    ];
    if let Some(g) = gamma {
        params.push(("gamma".into(), g));
    }
    let v = v_x.clone();
    let potential: ComplexFn = Arc::new(move |x| Complex64::new(v(x), 0.0));

    Ok(ModelCard {
        name: if row == 1 {
            "swanson_effective".into()
        } else {
            format!("swanson_row{row}")
        },
        params,
        mass,
        potential,
        energy,
        wavefunction,
        wavefunction_d1: None,
        superpotential: None,
        hermitian_equivalent: None,
        units: UnitConvention::HBar2M1,
        max_bound_state: None,
        // −d/dx (1/M) d/dx + V_eff is unitarily equivalent to
        // −d²/dz² + w̃²z² under ψ = M^{1/4}φ(z), so the oracle always gets
        // the closed z-potential instead of a re-sampled V_eff.
        strategy: SolveStrategy::ConstantMassInZ {
            z_of_x,
            x_of_z,
            potential_z: Some(Arc::new(move |z: f64| wt2 * z * z)),
        },
        recommended_domain: domain,
    })
}

/// Numerical classification of a mass profile: whether each end of the
/// z-image ∫ √M dx is finite, and hence whether the model keeps the full
/// oscillator tower (isospectral ⇔ both ends infinite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsospectralityVerdict {
    pub isospectral: bool,
    pub finite_ends: (bool, bool),
    pub z_range: (f64, f64),
}

/// Re-derives the isospectrality verdict for a card from its mass profile
/// alone, by probing the convergence of z = ∫ dx/A with A = M^{−1/2}.
pub fn isospectrality_verdict(card: &ModelCard) -> Result<IsospectralityVerdict> {
    let m = card.mass.eval.clone();
    let a: RealFn = Arc::new(move |x| 1.0 / m(x).sqrt());
    let zmap = to_constant_mass(a, card.mass.domain)?;
    Ok(IsospectralityVerdict {
        isospectral: zmap.finite_ends == (false, false),
        finite_ends: zmap.finite_ends,
        z_range: zmap.z_range,
    })
}
