//! Analytic model catalog.
//!
//! Each [`ModelCard`] packages one exactly solvable Hamiltonian: its mass
//! profile, (possibly complex) potential, bound-state energies and wave
//! functions, optional superpotential and Hermitian representative, and
//! the strategy by which the finite-difference oracle in [`crate::grid`]
//! should cross-check the analytic claims.

pub mod hypergeom;
pub mod pdm_exceptional;
pub mod qes;
pub mod qnlo;
pub mod quasi;
pub mod swanson;

use crate::grid::MassProfile;
use crate::numeric::integrate;
use crate::{ComplexFn, Error, RealFn, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// Bound-state energy as a function of the level index.
pub type EnergyFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// Bound-state wave function ψ_n(x); real models carry a zero imaginary
/// part.  Levels outside the solvable range return NaN.
pub type WaveFn = Arc<dyn Fn(usize, f64) -> Complex64 + Send + Sync>;

/// A potential continued off the real axis.
pub type HolomorphicFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// How the kinetic term is scaled: `HBar2M1` means ħ = 2m₀ = 1 so the
/// constant-mass operator is −d²/dx² + V; `HalfKinetic` means ħ = m₀ = 1
/// so it is −½ d²/dx² + V.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitConvention {
    HBar2M1,
    HalfKinetic,
}

/// The map that conjugates a non-Hermitian model onto its Hermitian
/// representative.
#[derive(Clone)]
pub enum SimilarityMap {
    /// ρ = e^{(shift)·p} translates x → x + i·shift; `continued` is the
    /// Hermitian potential continued off the real axis, so the model's
    /// potential must equal `continued(x + i·shift)` pointwise.
    ImaginaryShift { shift: f64, continued: HolomorphicFn },
    /// Multiplication operator ψ ↦ factor·ψ (kept for gauge-equivalent
    /// pairs whose identification happens at the wave-function level).
    GaugeFactor { factor: RealFn },
}

/// A Hermitian model that shares the spectrum of a non-Hermitian one,
/// together with the similarity map connecting them.
#[derive(Clone)]
pub struct HermitianEquivalent {
    pub card: Arc<ModelCard>,
    pub map: SimilarityMap,
}

/// How the finite-difference oracle should realize the model.
#[derive(Clone)]
pub enum SolveStrategy {
    /// Discretize −d/dx (1/M) d/dx + Re V directly.
    DirectBdd,
    /// Solve the attached Hermitian representative instead.
    HermitianEquivalent,
    /// Change variables to z with z′ = √M, where the √-factorized kinetic
    /// ordering becomes constant-mass; `potential_z`, when present, is the
    /// exact transformed potential U(z).
    ConstantMassInZ {
        z_of_x: RealFn,
        x_of_z: RealFn,
        potential_z: Option<RealFn>,
    },
    /// No Hermitian representative exists; grid requests must fail loudly.
    NoOracle,
}

/// One catalog entry.  See the module docs for the field semantics.
#[derive(Clone)]
pub struct ModelCard {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub mass: MassProfile,
    pub potential: ComplexFn,
    pub energy: EnergyFn,
    pub wavefunction: WaveFn,
    /// Analytic ∂ψ_n/∂x where the family admits one in closed form; used
    /// by the intertwining transforms to avoid stencil noise.
    pub wavefunction_d1: Option<WaveFn>,
    /// Ground-state superpotential W₀ in closed form, when printed.
    pub superpotential: Option<RealFn>,
    pub hermitian_equivalent: Option<HermitianEquivalent>,
    pub units: UnitConvention,
    /// Highest bound level for models with a finite discrete spectrum.
    pub max_bound_state: Option<usize>,
    pub strategy: SolveStrategy,
    pub recommended_domain: (f64, f64),
}

impl std::fmt::Debug for ModelCard {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelCard")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("units", &self.units)
            .field("domain", &self.recommended_domain)
            .finish_non_exhaustive()
    }
}

/// Serializable one-line description of a card, for `list-models`.
#[derive(Debug, Clone, Serialize)]
pub struct CardSummary {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub domain: (f64, f64),
    pub convention: String,
    pub oracle: String,
}

pub fn summarize(card: &ModelCard) -> CardSummary {
    CardSummary {
        name: card.name.clone(),
        params: card.params.clone(),
        domain: card.recommended_domain,
        convention: match card.units {
            UnitConvention::HBar2M1 => "two-mass".into(),
            UnitConvention::HalfKinetic => "half-kinetic".into(),
        },
        oracle: match card.strategy {
            SolveStrategy::DirectBdd => "direct-bdd".into(),
            SolveStrategy::HermitianEquivalent => "hermitian-equivalent".into(),
            SolveStrategy::ConstantMassInZ { .. } => "constant-mass-z".into(),
            SolveStrategy::NoOracle => "none".into(),
        },
    }
}

/// The eleven catalog entries with their reference parameter sets.
pub fn catalog() -> Result<Vec<ModelCard>> {
    Ok(vec![
        pdm_exceptional::pdm_x1_laguerre(1.0, 2.0)?,
        pdm_exceptional::pdm_x1_jacobi(0.2, 2.0, 2.5)?,
        pdm_exceptional::pdm_sinh_osc(1.0)?,
        hypergeom::pdm_sech_hypergeometric(5.0, 0.0, 3.0)?,
        quasi::quasi_x1_laguerre(2.0, 1.75, 1.2)?,
        quasi::quasi_x1_jacobi(1.75, 3.0, 1.25, 1.0)?,
        qnlo::qnlo(-0.1)?,
        qnlo::qnlo_scarf2(4.5, 1.5, 1.0)?,
        qnlo::qnlo_broken_susy(2.5, -0.5, -1.0)?,
        swanson::swanson_effective(1, 0.3, 0.1, None)?,
        qes::qes_sextic(qes::QesCase::TwoA { b2: 2.0, sign: 1 }, 1.0)?,
    ])
}

/// Looks a card up by its catalog name.
pub fn by_name(name: &str) -> Result<ModelCard> {
    catalog()?
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::Domain(format!("unknown model `{name}`; run list-models")))
}

/// Largest pointwise defect |V_model(x) − V_herm(x + i·shift)| over `xs`
/// for a card carrying an imaginary-shift similarity map.
pub fn verify_similarity(card: &ModelCard, xs: &[f64]) -> Result<f64> {
    let he = card
        .hermitian_equivalent
        .as_ref()
        .ok_or_else(|| Error::Domain(format!("model `{}` has no similarity map", card.name)))?;
    match &he.map {
        SimilarityMap::ImaginaryShift { shift, continued } => {
            let mut worst: f64 = 0.0;
            for &x in xs {
                let lhs = (card.potential)(x);
                let rhs = continued(Complex64::new(x, *shift));
                worst = worst.max((lhs - rhs).norm());
            }
            Ok(worst)
        }
        SimilarityMap::GaugeFactor { .. } => Err(Error::Domain(format!(
            "model `{}` is gauge-related to its representative; compare effective potentials instead",
            card.name
        ))),
    }
}

/// PT-symmetry defect of the potential, max |V(−x) − conj V(x)| over `xs`
/// (the mass profile must be even for the question to make sense; its
/// defect is returned alongside).
pub fn pt_symmetry_deviation(card: &ModelCard, xs: &[f64]) -> (f64, f64) {
    let mut dv: f64 = 0.0;
    let mut dm: f64 = 0.0;
    for &x in xs {
        let v = (card.potential)(x);
        let vm = (card.potential)(-x);
        dv = dv.max((vm - v.conj()).norm());
        dm = dm.max((card.mass.m(-x) - card.mass.m(x)).abs());
    }
    (dv, dm)
}

pub(crate) fn require(cond: bool, msg: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg))
    }
}

/// L² norms ∫ w(x) |ψ_n(x)|² dx for levels 0..count, used to normalize
/// families whose closed forms are printed only up to a constant.
pub(crate) fn l2_norms<F, W>(psi: F, weight: W, domain: (f64, f64), count: usize) -> Vec<f64>
where
    F: Fn(usize, f64) -> Complex64,
    W: Fn(f64) -> f64,
{
    (0..count)
        .map(|n| {
            let f = |x: f64| psi(n, x).norm_sqr() * weight(x);
            // Pin the quadrature target to the density's magnitude; an
            // absolute target far below peak * eps would stall the
            // refinement on steep profiles.  Densities that overflow on
            // the window are reported as infinite norms.
            let peak = crate::numeric::linspace(domain.0, domain.1, 129)
                .into_iter()
                .fold(0.0f64, |m, x| m.max(f(x)));
            if !peak.is_finite() {
                return f64::INFINITY;
            }
            let tol = 1e-12 * peak.max(1.0) * (domain.1 - domain.0).abs().max(1.0);
            integrate(&f, domain.0, domain.1, tol).sqrt()
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod testutil {
    //! Continuum residual gauges shared by the model unit tests.

    use super::{ModelCard, UnitConvention};
    use crate::numeric::{deriv1_c, deriv2_c};

    /// Max relative defect of −(1/M)ψ″ + (M′/M²)ψ′ + (V−E)ψ over `xs`.
    pub fn bdd_residual_max(card: &ModelCard, n: usize, xs: &[f64]) -> f64 {
        assert_eq!(card.units, UnitConvention::HBar2M1);
        residual_max(card, n, xs, 1.0, 1.0)
    }

    /// Max relative defect of the exactly factored kinetic ordering,
    /// −(1/M)ψ″ + (M′/(2M²))ψ′, with the half-kinetic convention folded
    /// in when the card uses it.
    pub fn factored_residual_max(card: &ModelCard, n: usize, xs: &[f64]) -> f64 {
        match card.units {
            UnitConvention::HBar2M1 => residual_max(card, n, xs, 1.0, 0.5),
            UnitConvention::HalfKinetic => residual_max(card, n, xs, 0.5, 0.25),
        }
    }

    fn residual_max(card: &ModelCard, n: usize, xs: &[f64], kin: f64, drift: f64) -> f64 {
        let wf = card.wavefunction.clone();
        let e = (card.energy)(n);
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for &x in xs {
            let h = 1e-3 * (1.0 + 1e-2 * x.abs());
            let f = |t: f64| wf(n, t);
            let psi = wf(n, x);
            let d1 = deriv1_c(&f, x, h);
            let d2 = deriv2_c(&f, x, h);
            let m = card.mass.m(x);
            let m1 = card.mass.m1(x);
            let v = (card.potential)(x);
            let r = -kin / m * d2 + drift * m1 / (m * m) * d1 + (v - e) * psi;
            worst = worst.max(r.norm());
            scale = scale.max(psi.norm());
        }
        worst / ((1.0 + e.abs()) * scale.max(1e-300))
    }
}
