//! Quasi-exactly solvable sextic family on the nonlinear-oscillator mass.
//!
//! With M(x) = 1/(1 + λx²), λ > 0, the change of variable
//! z = asinh(√λ x)/√λ turns the √-factorized half-kinetic operator into
//! −½ d²/dz², so a sextic polynomial well in z,
//!
//! V = ½z⁶ + c₅z⁵ + c₄z⁴ + c₃z³ + c₂z² + c₁z,
//!
//! pulled back through z(x) is quasi-exactly solvable whenever the ansatz
//! ψ = f(z)·e^{−P(z)}, P = b₁z + b₂z² + b₃z³ + ¼z⁴, closes.  Each closure
//! pattern fixes the cᵢ in terms of the bᵢ and hands over one or two
//! levels in closed form; the rest of the spectrum stays unknown and the
//! cards answer NaN for it.
//!
//! * [`QesCase::One`] — f = 1: a real well whose nodeless member sits at
//!   E = b₂ − ½b₁², necessarily the ground state;
//! * [`QesCase::TwoA`] — f = z + a₀ with b₁ = b₃ = 0 and a₀ = ±i√(2b₂):
//!   a conjugate pair of PT-symmetric wells sharing the real level E = b₂;
//! * [`QesCase::TwoB`] — f = z + a₀ with b₁ = 0 and b₃ purely imaginary:
//!   two distinct PT-symmetric wells (one per root of the node condition)
//!   again sharing E = b₂;
//! * [`QesCase::Three`] — f = z² + 2b₃z + a₀ with real coefficients: one
//!   real well carrying both roots at once, the nodeless member as the
//!   ground state and the two-node member as the second excited state.

use crate::models::qnlo::nlo_mass;
use crate::models::{require, EnergyFn, ModelCard, SolveStrategy, UnitConvention, WaveFn};
use crate::numeric::integrate;
use crate::{ComplexFn, RealFn, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Half-width of the z-window used for truncation and normalization; the
/// e^{−z⁴/4} tail leaves < 1e−11 of any member's mass outside it.
const Z_HALF_WIDTH: f64 = 3.2;

/// Which closure pattern of the sextic ansatz to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QesCase {
    /// f = 1 with real b₁, b₂, b₃: the single level E = b₂ − ½b₁².
    One { b1: f64, b2: f64, b3: f64 },
    /// f = z + sign·i√(2b₂), b₁ = b₃ = 0: PT-symmetric conjugate pair
    /// (one member per sign) sharing E = b₂ > 0.
    TwoA { b2: f64, sign: i8 },
    /// f = z + a₀ with b₁ = 0 and b₃ = i·b3: `sign` picks the root
    /// a₀ = i(3·b3 + sign·√(9·b3² + 8·b2))/2 of the node condition; the
    /// two wells differ but share E = b₂.
    TwoB { b2: f64, b3: f64, sign: i8 },
    /// f = z² + 2b₃z + a₀ with real b₂, b₃ and b₁ = 2b₃(b₂ − b₃²): both
    /// roots a₀ = ½(2b₂ − b₃² ± √((2b₂ − 3b₃²)² + 2)) live in the same
    /// well, the `+` root nodeless at E₋ and the `−` root two-noded at E₊,
    /// where E_∓ = −2b₃²(b₂ − b₃²)² + 3b₂ − b₃² ∓ √((2b₂ − 3b₃²)² + 2).
    Three { b2: f64, b3: f64 },
}

fn ci(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Evaluates Σ c[k−1]·zᵏ + ½z⁶ by Horner's rule.
fn sextic(c: &[Complex64; 5], z: f64) -> Complex64 {
    let mut acc = Complex64::new(0.5, 0.0);
    for k in (0..5).rev() {
        acc = acc * z + c[k];
    }
    acc * z
}

struct Member {
    /// Level index this member occupies in the full spectrum, when the
    /// node count decides one (real wells); complex wells keep slot 0.
    level: usize,
    energy: f64,
    /// Polynomial factor f(z).
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

/// Builds a sextic card for the given closure pattern and deformation
/// λ > 0.  Real-coefficient patterns carry a grid oracle through the z
/// window; PT patterns have none and reject grid requests.
pub fn qes_sextic(case: QesCase, lam: f64) -> Result<ModelCard> {
    require(
        lam.is_finite() && lam > 0.0,
        format!("the sextic map needs lambda > 0 (got {lam})"),
    )?;
    let finite = |v: f64| v.is_finite();

    // Exponent coefficients (b₁, b₃ may be imaginary), the well, and the
    // known members.
    let (name, b1, b2c, b3, c, members): (
        &str,
        Complex64,
        f64,
        Complex64,
        [Complex64; 5],
        Vec<Member>,
    ) = match case {
        QesCase::One { b1, b2, b3 } => {
            require(
                finite(b1) && finite(b2) && finite(b3),
                format!("case 1 needs finite b1, b2, b3 (got {b1}, {b2}, {b3})"),
            )?;
            let c = [
                (-3.0 * b3 + 2.0 * b1 * b2).into(),
                (-1.5 + 3.0 * b1 * b3 + 2.0 * b2 * b2).into(),
                (b1 + 6.0 * b2 * b3).into(),
                (2.0 * b2 + 4.5 * b3 * b3).into(),
                (3.0 * b3).into(),
            ];
            let members = vec![Member {
                level: 0,
                energy: b2 - 0.5 * b1 * b1,
                f: Arc::new(|_| Complex64::new(1.0, 0.0)),
            }];
            ("qes_sextic_case1", b1.into(), b2, b3.into(), c, members)
        }
        QesCase::TwoA { b2, sign } => {
            require(
                finite(b2) && b2 > 0.0,
                format!("case 2(a) needs b2 > 0 (got {b2})"),
            )?;
            require(
                sign == 1 || sign == -1,
                format!("the branch sign must be +1 or -1 (got {sign})"),
            )?;
            let a0 = ci(sign as f64 * (2.0 * b2).sqrt());
            let c = [
                a0,
                (2.0 * b2 * b2 - 2.5).into(),
                0.0.into(),
                (2.0 * b2).into(),
                0.0.into(),
            ];
            let members = vec![Member {
                level: 0,
                energy: b2,
                f: Arc::new(move |z| z + a0),
            }];
            ("qes_sextic", 0.0.into(), b2, 0.0.into(), c, members)
        }
        QesCase::TwoB { b2, b3, sign } => {
            require(
                finite(b2) && finite(b3) && b3 != 0.0,
                format!("case 2(b) needs finite b2 and b3 != 0 (got {b2}, {b3})"),
            )?;
            require(
                sign == 1 || sign == -1,
                format!("the branch sign must be +1 or -1 (got {sign})"),
            )?;
            let disc = 9.0 * b3 * b3 + 8.0 * b2;
            require(
                disc > 0.0,
                format!("case 2(b) needs 9 b3^2 + 8 b2 > 0 for an imaginary node (got {disc})"),
            )?;
            let a0 = ci(0.5 * (3.0 * b3 + sign as f64 * disc.sqrt()));
            let b3c = ci(b3);
            let c = [
                -6.0 * b3c + a0,
                (2.0 * b2 * b2 - 2.5).into(),
                6.0 * b2 * b3c,
                Complex64::from(2.0 * b2) + 4.5 * b3c * b3c,
                3.0 * b3c,
            ];
            let members = vec![Member {
                level: 0,
                energy: b2,
                f: Arc::new(move |z| z + a0),
            }];
            ("qes_sextic_case2b", 0.0.into(), b2, b3c, c, members)
        }
        QesCase::Three { b2, b3 } => {
            require(
                finite(b2) && finite(b3),
                format!("case 3 needs finite b2 and b3 (got {b2}, {b3})"),
            )?;
            let b1 = 2.0 * b3 * (b2 - b3 * b3);
            let s = ((2.0 * b2 - 3.0 * b3 * b3).powi(2) + 2.0).sqrt();
            let base = -2.0 * b3 * b3 * (b2 - b3 * b3).powi(2) + 3.0 * b2 - b3 * b3;
            let c = [
                (b3 * (4.0 * b2 * b2 - 4.0 * b2 * b3 * b3 - 7.0)).into(),
                (2.0 * (b2 * b2 + 3.0 * b2 * b3 * b3 - 3.0 * b3.powi(4)) - 3.5).into(),
                (2.0 * b3 * (4.0 * b2 - b3 * b3)).into(),
                (2.0 * b2 + 4.5 * b3 * b3).into(),
                (3.0 * b3).into(),
            ];
            // The + root keeps f > 0 (nodeless ⇒ ground state); the − root
            // crosses zero twice (⇒ second excited state); their energies
            // pair the opposite way.
            let member = |root_sign: f64, level: usize| {
                let a0 = 0.5 * (2.0 * b2 - b3 * b3 + root_sign * s);
                Member {
                    level,
                    energy: base - root_sign * s,
                    f: Arc::new(move |z| (z * z + 2.0 * b3 * z + a0).into()),
                }
            };
            let members = vec![member(1.0, 0), member(-1.0, 2)];
            ("qes_sextic_case3", b1.into(), b2, b3.into(), c, members)
        }
    };

    let p = move |z: f64| b1 * z + b2c * z * z + b3 * (z * z * z) + 0.25 * z.powi(4);
    let raw = {
        let fs: Vec<_> = members.iter().map(|m| (m.level, m.f.clone())).collect();
        move |level: usize, z: f64| -> Complex64 {
            match fs.iter().find(|(l, _)| *l == level) {
                Some((_, f)) => f(z) * (-p(z)).exp(),
                None => Complex64::new(f64::NAN, 0.0),
            }
        }
    };
    let norms: Vec<(usize, f64)> = members
        .iter()
        .map(|m| {
            let n2 = integrate(
                &|z| raw(m.level, z).norm_sqr(),
                -Z_HALF_WIDTH,
                Z_HALF_WIDTH,
                1e-12,
            );
            (m.level, n2.sqrt())
        })
        .collect();

    let sq = lam.sqrt();
    let z_of_x: RealFn = Arc::new(move |x: f64| (sq * x).asinh() / sq);
    let x_of_z: RealFn = Arc::new(move |z: f64| (sq * z).sinh() / sq);
    let x_max = (Z_HALF_WIDTH * sq).sinh() / sq;

    let potential: ComplexFn = {
        let zf = z_of_x.clone();
        let c = c;
        Arc::new(move |x| sextic(&c, zf(x)))
    };
    let potential_z: RealFn = Arc::new(move |z| sextic(&c, z).re);
    let energy: EnergyFn = {
        let table: Vec<(usize, f64)> = members.iter().map(|m| (m.level, m.energy)).collect();
        Arc::new(move |n| {
            table
                .iter()
                .find(|(l, _)| *l == n)
                .map_or(f64::NAN, |(_, e)| *e)
        })
    };
    let wavefunction: WaveFn = {
        let zf = z_of_x.clone();
        let norms = norms;
        let raw = raw;
        Arc::new(move |n, x| {
            let z = zf(x);
            match norms.iter().find(|(l, _)| *l == n) {
                Some((_, nn)) => raw(n, z) / *nn,
                None => Complex64::new(f64::NAN, 0.0),
            }
        })
    };
    let real_well = matches!(case, QesCase::One { .. } | QesCase::Three { .. });

    Ok(ModelCard {
        name: name.into(),
        params: qes_params(&case, lam),
        mass: nlo_mass(lam, (f64::NEG_INFINITY, f64::INFINITY)),
        potential,
        energy,
        wavefunction,
        wavefunction_d1: None,
        superpotential: None,
        hermitian_equivalent: None,
        units: UnitConvention::HalfKinetic,
        max_bound_state: None,
        strategy: if real_well {
            SolveStrategy::ConstantMassInZ {
                z_of_x,
                x_of_z,
                potential_z: Some(potential_z),
            }
        } else {
            SolveStrategy::NoOracle
        },
        recommended_domain: (-x_max, x_max),
    })
}

fn qes_params(case: &QesCase, lam: f64) -> Vec<(String, f64)> {
    let mut p: Vec<(String, f64)> = match *case {
        QesCase::One { b1, b2, b3 } => vec![
            ("b1".into(), b1),
            ("b2".into(), b2),
            ("b3".into(), b3),
        ],
        QesCase::TwoA { b2, sign } => vec![("b2".into(), b2), ("sign".into(), sign as f64)],
        QesCase::TwoB { b2, b3, sign } => vec![
            ("b2".into(), b2),
            ("b3_im".into(), b3),
            ("sign".into(), sign as f64),
        ],
        QesCase::Three { b2, b3 } => vec![("b2".into(), b2), ("b3".into(), b3)],
    };
    p.push(("lambda".into(), lam));
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{solve_model, SolveConfig};
    use crate::models::testutil::factored_residual_max;
    use crate::models::pt_symmetry_deviation;
    use crate::numeric::linspace;
    use crate::Error;

    fn xs_in_window(card: &ModelCard, zmax: f64) -> Vec<f64> {
        let SolveStrategy::ConstantMassInZ { x_of_z, .. } = &card.strategy else {
            // PT cards drop the map; rebuild it from λ.
            let lam = card.params.iter().find(|(k, _)| k == "lambda").unwrap().1;
            let sq = lam.sqrt();
            return linspace(-zmax, zmax, 41)
                .into_iter()
                .map(|z| (sq * z).sinh() / sq)
                .collect();
        };
        linspace(-zmax, zmax, 41).iter().map(|&z| x_of_z(z)).collect()
    }

    #[test]
    fn nodeless_real_member_is_the_grid_ground_state() {
        let card = qes_sextic(
            QesCase::One {
                b1: 0.4,
                b2: 1.1,
                b3: -0.2,
            },
            1.0,
        )
        .unwrap();
        assert!(((card.energy)(0) - (1.1 - 0.5 * 0.4 * 0.4)).abs() < 1e-14);
        assert!((card.energy)(1).is_nan());
        let xs = xs_in_window(&card, 2.2);
        let r = factored_residual_max(&card, 0, &xs);
        assert!(r < 1e-8, "residual {r:.2e}");
        let res = solve_model(&card, &SolveConfig::default()).unwrap();
        assert!(
            (res.energies[0] - (card.energy)(0)).abs() < 1e-3,
            "grid {} vs closed {}",
            res.energies[0],
            (card.energy)(0)
        );
    }

    #[test]
    fn conjugate_pair_shares_its_real_level() {
        let plus = qes_sextic(QesCase::TwoA { b2: 2.0, sign: 1 }, 1.0).unwrap();
        let minus = qes_sextic(QesCase::TwoA { b2: 2.0, sign: -1 }, 1.0).unwrap();
        assert_eq!(plus.name, "qes_sextic");
        for card in [&plus, &minus] {
            assert!(((card.energy)(0) - 2.0).abs() < 1e-14);
            assert!((card.energy)(1).is_nan());
            let xs = xs_in_window(card, 2.2);
            let r = factored_residual_max(card, 0, &xs);
            assert!(r < 1e-7, "residual {r:.2e}");
            let (dv, dm) = pt_symmetry_deviation(card, &xs);
            assert!(dv < 1e-12 && dm < 1e-12, "PT deviation {dv:.2e}, {dm:.2e}");
            assert!(matches!(
                solve_model(card, &SolveConfig::default()),
                Err(Error::NoOracle(_))
            ));
        }
        // The two wells are complex conjugates of each other pointwise.
        for x in linspace(-2.0, 2.0, 21) {
            let d = ((plus.potential)(x) - (minus.potential)(x).conj()).norm();
            assert!(d < 1e-12, "x = {x}: {d:.2e}");
        }
    }

    #[test]
    fn imaginary_cubic_pair_shares_its_level_across_two_wells() {
        let up = qes_sextic(
            QesCase::TwoB {
                b2: 1.5,
                b3: 0.7,
                sign: 1,
            },
            1.0,
        )
        .unwrap();
        let down = qes_sextic(
            QesCase::TwoB {
                b2: 1.5,
                b3: 0.7,
                sign: -1,
            },
            1.0,
        )
        .unwrap();
        for card in [&up, &down] {
            assert!(((card.energy)(0) - 1.5).abs() < 1e-14);
            let xs = xs_in_window(card, 2.0);
            let r = factored_residual_max(card, 0, &xs);
            assert!(r < 1e-7, "residual {r:.2e}");
            let (dv, dm) = pt_symmetry_deviation(card, &xs);
            assert!(dv < 1e-12 && dm < 1e-12);
        }
        // Unlike case 2(a), the two members live in genuinely different
        // wells: the linear coefficients differ.
        let d = ((up.potential)(1.0) - (down.potential)(1.0)).norm();
        assert!(d > 1e-3, "wells should differ, got {d:.2e}");
    }

    #[test]
    fn real_quadratic_block_pins_levels_zero_and_two() {
        let card = qes_sextic(QesCase::Three { b2: 1.2, b3: 0.4 }, 1.0).unwrap();
        let s = ((2.0 * 1.2 - 3.0 * 0.16_f64).powi(2) + 2.0).sqrt();
        let base = -2.0 * 0.16 * (1.2 - 0.16_f64).powi(2) + 3.0 * 1.2 - 0.16;
        assert!(((card.energy)(0) - (base - s)).abs() < 1e-12);
        assert!(((card.energy)(2) - (base + s)).abs() < 1e-12);
        assert!((card.energy)(1).is_nan());
        let xs = xs_in_window(&card, 2.4);
        for n in [0, 2] {
            let r = factored_residual_max(&card, n, &xs);
            assert!(r < 1e-7, "n = {n}: residual {r:.2e}");
        }
        let res = solve_model(&card, &SolveConfig::default()).unwrap();
        assert!((res.energies[0] - (card.energy)(0)).abs() < 1e-3);
        assert!((res.energies[2] - (card.energy)(2)).abs() < 1e-3);
        // The middle level is real and strictly between the known pair,
        // but the closed form does not cover it.
        assert!(res.energies[1] > res.energies[0] && res.energies[1] < res.energies[2]);
    }

    #[test]
    fn deformation_only_moves_the_profile_not_the_levels() {
        for lam in [0.5, 1.0, 2.5] {
            let card = qes_sextic(QesCase::Three { b2: 1.2, b3: 0.4 }, lam).unwrap();
            let res = solve_model(&card, &SolveConfig::default()).unwrap();
            assert!(
                (res.energies[0] - (card.energy)(0)).abs() < 1e-3,
                "lambda = {lam}"
            );
        }
    }

    #[test]
    fn constructors_name_their_violated_constraints() {
        let msg = |c: QesCase, lam: f64| qes_sextic(c, lam).unwrap_err().to_string();
        assert!(msg(QesCase::TwoA { b2: 2.0, sign: 1 }, 0.0).contains("lambda > 0"));
        assert!(msg(QesCase::TwoA { b2: -1.0, sign: 1 }, 1.0).contains("b2 > 0"));
        assert!(msg(QesCase::TwoA { b2: 2.0, sign: 0 }, 1.0).contains("sign"));
        assert!(msg(
            QesCase::TwoB {
                b2: 1.0,
                b3: 0.0,
                sign: 1
            },
            1.0
        )
        .contains("b3 != 0"));
        assert!(msg(
            QesCase::TwoB {
                b2: -2.0,
                b3: 1.0,
                sign: 1
            },
            1.0
        )
        .contains("9 b3^2 + 8 b2 > 0"));
        assert!(msg(
            QesCase::One {
                b1: f64::NAN,
                b2: 1.0,
                b3: 0.0
            },
            1.0
        )
        .contains("finite"));
    }
}
