//! Finite-difference oracle for position-dependent-mass Hamiltonians
//!
//! Discretizes H = −d/dx (1/M) d/dx + V on a uniform grid with Dirichlet
//! boundaries, keeping the operator symmetric by sampling 1/M at half-grid
//! points.  A change of independent variable z(x) with z′ = 1/A maps the
//! √-factorized kinetic ordering onto a constant-mass problem, which the
//! same tridiagonal machinery then solves on the z-grid.

pub mod tridiag;

use crate::models::{ModelCard, SolveStrategy, UnitConvention};
use crate::numeric::integrate;
use crate::{Error, RealFn, Result};

/// Uniform grid with `n_points` nodes including both endpoints.  The
/// discretized operators act on the `n_points − 2` interior nodes.
#[derive(Debug, Clone)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Domain(format!(
                "grid interval [{x_min}, {x_max}] is not a finite increasing range"
            )));
        }
        if n_points < 3 {
            return Err(Error::Domain(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        Ok(Grid {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Interior nodes x_1 … x_{n−2} (endpoints carry the Dirichlet zeros).
    pub fn interior(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..self.n_points - 1)
            .map(|i| self.x_min + i as f64 * h)
            .collect()
    }

    pub fn interior_len(&self) -> usize {
        self.n_points - 2
    }
}

/// Mass profile M(x) with its first two derivatives and the open interval
/// on which the model lives.
#[derive(Clone)]
pub struct MassProfile {
    pub eval: RealFn,
    pub eval_d1: RealFn,
    pub eval_d2: RealFn,
    pub domain: (f64, f64),
}

impl MassProfile {
    pub fn new(eval: RealFn, eval_d1: RealFn, eval_d2: RealFn, domain: (f64, f64)) -> Self {
        MassProfile {
            eval,
            eval_d1,
            eval_d2,
            domain,
        }
    }

    pub fn constant(domain: (f64, f64)) -> Self {
        MassProfile {
            eval: std::sync::Arc::new(|_| 1.0),
            eval_d1: std::sync::Arc::new(|_| 0.0),
            eval_d2: std::sync::Arc::new(|_| 0.0),
            domain,
        }
    }

    pub fn m(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn m1(&self, x: f64) -> f64 {
        (self.eval_d1)(x)
    }

    pub fn m2(&self, x: f64) -> f64 {
        (self.eval_d2)(x)
    }
}

impl std::fmt::Debug for MassProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MassProfile")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// Which operator ordering the matrix realizes: the symmetrized
/// −d/dx (1/M) d/dx form, or the −(1/m) d²/dx² + (m′/2m²) d/dx form
/// reduced to a constant-mass problem on the z-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticOrdering {
    BenDanielDuke,
    SqrtFactorized,
}

/// Symmetric tridiagonal matrix acting on the interior nodes of `grid`.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub grid: Grid,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub ordering: KineticOrdering,
}

/// Eigen-pairs from the finite-difference oracle.  States are sampled on
/// `nodes` and normalized so that Σ ψ² Δx = 1; `residuals` holds
/// ‖Hψ − Eψ‖₂ for the Euclidean-unit eigenvector.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub energies: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub nodes: Vec<f64>,
}

/// Builds the symmetric BenDaniel–Duke discretization of
/// −d/dx (1/M) d/dx + V with Dirichlet boundaries.
pub fn build_bdd(
    mass: &MassProfile,
    potential: &dyn Fn(f64) -> f64,
    grid: &Grid,
) -> Result<DiscretizedOperator> {
    let h = grid.spacing();
    let xs = grid.interior();
    let n = xs.len();
    let inv_m_half = |x: f64| -> Result<f64> {
        let m = mass.m(x);
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::Domain(format!(
                "mass profile is not positive and finite at x = {x}: M = {m}"
            )));
        }
        Ok(1.0 / m)
    };
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n - 1);
    for (i, &x) in xs.iter().enumerate() {
        let wl = inv_m_half(x - 0.5 * h)?;
        let wr = inv_m_half(x + 0.5 * h)?;
        let v = potential(x);
        if !v.is_finite() {
            return Err(Error::Domain(format!(
                "potential is not finite at x = {x}: V = {v}"
            )));
        }
        diag.push((wl + wr) / (h * h) + v);
        if i + 1 < n {
            offdiag.push(-wr / (h * h));
        }
    }
    Ok(DiscretizedOperator {
        grid: grid.clone(),
        diag,
        offdiag,
        ordering: KineticOrdering::BenDanielDuke,
    })
}

/// Lowest `k` eigenpairs of a discretized operator.
pub fn eig_lowest(op: &DiscretizedOperator, k: usize) -> Result<SpectrumResult> {
    let n = op.diag.len();
    if k == 0 || k > n {
        return Err(Error::Domain(format!(
            "requested {k} eigenpairs from a grid with {n} interior nodes"
        )));
    }
    let energies = tridiag::lowest_eigenvalues(&op.diag, &op.offdiag, k)?;
    let h = op.grid.spacing();
    let mut states: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut unit_vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, &lambda) in energies.iter().enumerate() {
        let neighbors: Vec<(f64, &[f64])> = energies[..j]
            .iter()
            .cloned()
            .zip(unit_vecs.iter().map(|v| v.as_slice()))
            .collect();
        let v = tridiag::eigenvector(&op.diag, &op.offdiag, lambda, &neighbors)?;
        let res = tridiag::residual_norm(&op.diag, &op.offdiag, lambda, &v);
        let scale = op
            .diag
            .iter()
            .chain(op.offdiag.iter())
            .fold(0.0f64, |m, x| m.max(x.abs()));
        if res > 1e-8 * scale.max(1.0) {
            return Err(Error::Numerical(format!(
                "eigenpair {j} residual {res:.3e} exceeds tolerance"
            )));
        }
        residuals.push(res);
        states.push(v.iter().map(|x| x / h.sqrt()).collect());
        unit_vecs.push(v);
    }
    Ok(SpectrumResult {
        energies,
        states,
        residuals,
        nodes: op.grid.interior(),
    })
}

/// Change of variable z(x) = ∫ dx′ / A(x′) that maps the √-factorized
/// kinetic term onto −d²/dz².  `z_range` carries ±∞ for ends where the
/// integral diverges; `finite_ends` records which ends converge.
pub struct ZMap {
    a_fn: RealFn,
    x_ref: f64,
    pub z_range: (f64, f64),
    pub finite_ends: (bool, bool),
}

impl ZMap {
    pub fn z(&self, x: f64) -> f64 {
        let f = self.a_fn.clone();
        integrate(&|t| 1.0 / f(t), self.x_ref, x, 1e-11)
    }
}

impl std::fmt::Debug for ZMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ZMap")
            .field("z_range", &self.z_range)
            .field("finite_ends", &self.finite_ends)
            .finish_non_exhaustive()
    }
}

/// Analyzes the map z = ∫ dx/A over `domain`, detecting whether each end
/// of the z-interval is finite by letting the cutoff approach the end
/// until the image converges.
pub fn to_constant_mass(a_fn: RealFn, domain: (f64, f64)) -> Result<ZMap> {
    let (a, b) = domain;
    if a >= b {
        return Err(Error::Domain(format!(
            "domain ({a}, {b}) is not an increasing interval"
        )));
    }
    let x_ref = match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (false, false) => 0.0,
        (true, false) => a + 1.0,
        (false, true) => b - 1.0,
    };
    let probe = |toward_right: bool| -> (bool, f64) {
        let f = a_fn.clone();
        let end = if toward_right { b } else { a };
        let mut prev = f64::NAN;
        if end.is_finite() {
            // Approach a finite end geometrically.
            let span = (b - a).min(1e6);
            let mut eps = 1e-3 * span;
            for _ in 0..45 {
                let x = if toward_right { end - eps } else { end + eps };
                let val = integrate(&|t| 1.0 / f(t), x_ref, x, 1e-11);
                if prev.is_finite() && (val - prev).abs() < 1e-8 {
                    return (true, val);
                }
                if !val.is_finite() || val.abs() > 1e10 {
                    return (false, if toward_right { f64::INFINITY } else { f64::NEG_INFINITY });
                }
                prev = val;
                eps *= 0.5;
            }
            (false, if toward_right { f64::INFINITY } else { f64::NEG_INFINITY })
        } else {
            // Double the cutoff toward an infinite end.
            let mut r = x_ref.abs().max(1.0) * 2.0;
            for _ in 0..60 {
                let x = if toward_right { r } else { -r };
                let val = integrate(&|t| 1.0 / f(t), x_ref, x, 1e-11);
                if prev.is_finite() && (val - prev).abs() < 1e-8 {
                    return (true, val);
                }
                if !val.is_finite() || val.abs() > 1e10 {
                    break;
                }
                prev = val;
                r *= 2.0;
            }
            (false, if toward_right { f64::INFINITY } else { f64::NEG_INFINITY })
        }
    };
    let (left_finite, z_lo) = probe(false);
    let (right_finite, z_hi) = probe(true);
    Ok(ZMap {
        a_fn,
        x_ref,
        z_range: (z_lo, z_hi),
        finite_ends: (left_finite, right_finite),
    })
}

/// Grid configuration for [`solve_model`].
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub n_points: usize,
    /// Truncation window; defaults to the card's recommended domain.
    pub domain: Option<(f64, f64)>,
    pub k: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            n_points: 4000,
            domain: None,
            k: 6,
        }
    }
}

/// Runs the finite-difference oracle for an analytic model card, picking
/// the representation its solve strategy prescribes.  Models without a
/// Hermitian representative are rejected rather than silently mis-solved.
pub fn solve_model(card: &ModelCard, cfg: &SolveConfig) -> Result<SpectrumResult> {
    // With ħ = 1 and a ½-kinetic term, −½∂(1/M)∂ + V is realized as the
    // scaled operator ½(−∂(1/M)∂ + 2V): double the sampled potential here
    // and halve the resulting energies.
    let halve = card.units == UnitConvention::HalfKinetic;
    let vscale = if halve { 2.0 } else { 1.0 };
    match &card.strategy {
        SolveStrategy::DirectBdd => {
            let (lo, hi) = cfg.domain.unwrap_or(card.recommended_domain);
            let grid = Grid::new(lo, hi, cfg.n_points)?;
            let vr = card.potential.clone();
            let op = build_bdd(&card.mass, &move |x| vscale * vr(x).re, &grid)?;
            finish_eig(&op, cfg.k, halve)
        }
        SolveStrategy::HermitianEquivalent => {
            let he = card.hermitian_equivalent.as_ref().ok_or_else(|| {
                Error::Domain(format!(
                    "model `{}` declares a Hermitian-equivalent strategy but carries none",
                    card.name
                ))
            })?;
            solve_model(&he.card, cfg)
        }
        SolveStrategy::ConstantMassInZ {
            z_of_x,
            x_of_z,
            potential_z,
        } => {
            let (lo, hi) = cfg.domain.unwrap_or(card.recommended_domain);
            let (zlo, zhi) = (z_of_x(lo), z_of_x(hi));
            if !(zlo.is_finite() && zhi.is_finite() && zlo < zhi) {
                return Err(Error::Domain(format!(
                    "z-image of ({lo}, {hi}) is not a finite interval: ({zlo}, {zhi})"
                )));
            }
            let grid = Grid::new(zlo, zhi, cfg.n_points)?;
            let mass = MassProfile::constant((zlo, zhi));
            let vz: RealFn = match potential_z {
                Some(f) => f.clone(),
                None => {
                    let vx = card.potential.clone();
                    let back = x_of_z.clone();
                    std::sync::Arc::new(move |z| vx(back(z)).re)
                }
            };
            let mut op = build_bdd(&mass, &move |z| vscale * vz(z), &grid)?;
            op.ordering = KineticOrdering::SqrtFactorized;
            finish_eig(&op, cfg.k, halve)
        }
        SolveStrategy::NoOracle => Err(Error::NoOracle(card.name.clone())),
    }
}

fn finish_eig(op: &DiscretizedOperator, k: usize, halve: bool) -> Result<SpectrumResult> {
    let mut res = eig_lowest(op, k)?;
    if halve {
        for e in res.energies.iter_mut() {
            *e *= 0.5;
        }
    }
    Ok(res)
}
