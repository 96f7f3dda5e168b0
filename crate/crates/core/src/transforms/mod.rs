//! Darboux-type constructions over the model catalog: ground-state
//! factorization, modified excited-state factorization (with and without
//! an energy offset), and first/second-order intertwining, including the
//! complex-conjugate-pair variant that keeps the partner potential real.
//!
//! Conventions: H = −(d/dx)(1/M)(d/dx) + V throughout, and a first-order
//! intertwiner ℒ = (1/√M)d/dx + A(x) with ℒH₀ = H₁ℒ.

use crate::grid::MassProfile;
use crate::models::ModelCard;
use crate::numeric::{cumulative_integral, deriv1_c, linspace, trapezoid};
use crate::{ComplexFn, Error, RealFn, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Tolerance for declaring a factorization energy real.
const IM_TOL: f64 = 1e-9;
/// Fractional domain extension used by the normalizability probe.
const NORM_EXTENSION: f64 = 0.2;
/// Maximum relative norm growth an L²-function may show under extension.
const NORM_DRIFT_TOL: f64 = 0.01;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A solution of the stationary equation at factorization energy `mu`,
/// together with the qualitative facts every spectral-design rule needs.
pub struct SeedSolution {
    pub mu: Complex64,
    pub u: ComplexFn,
    pub u_prime: ComplexFn,
    /// No zeros strictly inside `domain`.
    pub nodeless_interior: bool,
    /// Diverges as x approaches the left end of the physical domain.
    pub unbounded_left: bool,
    /// Diverges as x approaches the right end.
    pub unbounded_right: bool,
    pub domain: (f64, f64),
}

impl SeedSolution {
    /// Bounded at both ends, hence square-integrable for the exponential
    /// asymptotics this workbench deals in.
    pub fn normalizable(&self) -> bool {
        !self.unbounded_left && !self.unbounded_right
    }

    /// Wraps an analytic bound state of `card` as a seed at its own energy.
    pub fn from_bound_state(card: &ModelCard, n: usize) -> Self {
        let wf = card.wavefunction.clone();
        let u: ComplexFn = Arc::new(move |x| wf(n, x));
        let u_prime: ComplexFn = match &card.wavefunction_d1 {
            Some(d1) => {
                let d1 = d1.clone();
                Arc::new(move |x| d1(n, x))
            }
            None => {
                let wf = card.wavefunction.clone();
                Arc::new(move |x| deriv1_c(|t| wf(n, t), x, 1e-4))
            }
        };
        SeedSolution {
            mu: c64((card.energy)(n)),
            nodeless_interior: n == 0,
            unbounded_left: false,
            unbounded_right: false,
            domain: card.recommended_domain,
            u,
            u_prime,
        }
    }
}

/// How the partner spectrum differs from the original one.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralChange {
    /// Levels removed from the spectrum.
    DeletedLevels(Vec<f64>),
    /// Levels added below (or inside) the original tower.
    InsertedLevels(Vec<f64>),
    /// Strictly isospectral.
    Unchanged,
    /// Every level moves by the same offset; a construction-specific
    /// zero-energy state may replace the factorization slot.
    Shifted(f64),
}

/// A generated partner Hamiltonian: its potential (the mass profile is
/// inherited from the parent card), the designed spectral change, the
/// images of the parent bound states, and any genuinely new states.
pub struct PartnerResult {
    pub potential: ComplexFn,
    pub expected_spectrum: SpectralChange,
    pub mapped_states: Vec<ComplexFn>,
    pub new_states: Vec<ComplexFn>,
}

impl std::fmt::Debug for PartnerResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PartnerResult")
            .field("expected_spectrum", &self.expected_spectrum)
            .field("mapped_states", &self.mapped_states.len())
            .field("new_states", &self.new_states.len())
            .finish_non_exhaustive()
    }
}

/// W = −ψ′/(√M ψ) together with the pole locations inherited from the
/// state's nodes.
pub struct Superpotential {
    pub w: RealFn,
    pub poles: Vec<f64>,
}

/// Numerically extracts the superpotential of a given (real) state.
pub fn superpotential(state: &ComplexFn, mass: &MassProfile) -> Result<Superpotential> {
    let (lo, hi) = mass.domain;
    let xs = linspace(lo, hi, 2001);
    let vals: Vec<f64> = xs.iter().map(|&x| state(x).re).collect();
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(peak.is_finite() && peak > 1e-150) {
        return Err(Error::Domain(
            "state vanishes (or blows up) on the whole domain; no superpotential exists".into(),
        ));
    }
    let mut poles = Vec::new();
    for i in 1..xs.len() {
        if vals[i - 1] != 0.0 && vals[i] != 0.0 && vals[i - 1].signum() != vals[i].signum() {
            poles.push(0.5 * (xs[i - 1] + xs[i]));
        }
    }
    let st = state.clone();
    let mass_eval = mass.eval.clone();
    let w: RealFn = Arc::new(move |x| {
        let d = deriv1_c(|t| st(t), x, 1e-4);
        (-d / (c64(mass_eval(x).sqrt()) * st(x))).re
    });
    Ok(Superpotential { w, poles })
}

/// Location of the first interior zero, if any: real data must keep one
/// sign, complex data must keep |f| away from a local collapse.
fn first_zero(f: &ComplexFn, domain: (f64, f64)) -> Option<f64> {
    let n = 2001;
    let pad = 1e-6 * (domain.1 - domain.0);
    let xs = linspace(domain.0 + pad, domain.1 - pad, n);
    let vals: Vec<Complex64> = xs.iter().map(|&x| f(x)).collect();
    let max_im = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let max_abs = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max_abs == 0.0 || !max_abs.is_finite() {
        return Some(0.5 * (domain.0 + domain.1));
    }
    if max_im < 1e-10 * max_abs {
        let mut prev: (f64, f64) = (xs[0], vals[0].re);
        for (&x, v) in xs.iter().zip(&vals).skip(1) {
            if v.re != 0.0 {
                if prev.1 != 0.0 && v.re.signum() != prev.1.signum() {
                    return Some(0.5 * (prev.0 + x));
                }
                prev = (x, v.re);
            }
        }
        None
    } else {
        for i in 1..n - 1 {
            if vals[i].norm() <= 1e-8 * 0.5 * (vals[i - 1].norm() + vals[i + 1].norm()) {
                return Some(xs[i]);
            }
        }
        None
    }
}

/// L² norm over `domain` by a dense trapezoid scan.
fn state_norm(f: &ComplexFn, domain: (f64, f64)) -> f64 {
    let n = 8001;
    let xs = linspace(domain.0, domain.1, n);
    let y: Vec<f64> = xs.iter().map(|&x| f(x).norm_sqr()).collect();
    trapezoid(&y, xs[1] - xs[0]).sqrt()
}

/// Does the norm survive a domain extension essentially unchanged?
pub fn normalizable_on(f: &ComplexFn, domain: (f64, f64)) -> bool {
    let base = state_norm(f, domain);
    if !(base.is_finite() && base > 0.0) {
        return false;
    }
    let pad = NORM_EXTENSION * (domain.1 - domain.0) * 0.5;
    let wide = state_norm(f, (domain.0 - pad, domain.1 + pad));
    wide.is_finite() && (wide - base) / base < NORM_DRIFT_TOL
}

fn normalized(f: ComplexFn, domain: (f64, f64)) -> ComplexFn {
    let n = state_norm(&f, domain);
    Arc::new(move |x| f(x) / n)
}

fn require_real_mu(mu: Complex64, what: &str) -> Result<f64> {
    if mu.im.abs() > IM_TOL * (1.0 + mu.re.abs()) {
        return Err(Error::Domain(format!(
            "{what} needs a real factorization energy; mu = {mu} is complex \
             (use the conjugate-pair second-order construction instead)"
        )));
    }
    Ok(mu.re)
}

/// First-order intertwining partner of `card` built on `seed`.
///
/// The seed's qualitative shape decides the design: a normalizable seed
/// deletes its level (ground-state deletion), a seed diverging at exactly
/// one end leaves the spectrum untouched, and a seed diverging at both
/// ends inserts the factorization energy when the candidate state
/// √M/u is square-integrable.
pub fn first_order_partner(card: &ModelCard, seed: &SeedSolution) -> Result<PartnerResult> {
    let mu = require_real_mu(seed.mu, "first-order intertwining")?;
    if !seed.nodeless_interior {
        let at = first_zero(&seed.u, seed.domain)
            .map(|x| format!(" near x = {x:.6}"))
            .unwrap_or_default();
        return Err(Error::Domain(format!(
            "seed solution vanishes inside the domain{at}; the partner potential would be singular"
        )));
    }

    let mass = &card.mass;
    let v0 = card.potential.clone();
    let u = seed.u.clone();
    let up = seed.u_prime.clone();

    // A = −u′/(√M u); its derivative follows from the stationary equation,
    // so no stencils touch the packaged potential.
    let a_fn: ComplexFn = {
        let (u, up, me) = (u.clone(), up.clone(), mass.eval.clone());
        Arc::new(move |x| -up(x) / (c64(me(x).sqrt()) * u(x)))
    };
    let a_prime: ComplexFn = {
        let (u, up, v0) = (u.clone(), up.clone(), v0.clone());
        let (me, m1e) = (mass.eval.clone(), mass.eval_d1.clone());
        Arc::new(move |x| {
            let m = me(x);
            let sm = m.sqrt();
            let uu = u(x);
            let du = up(x);
            -c64(sm) * (v0(x) - c64(mu)) - c64(m1e(x) / (2.0 * m * sm)) * du / uu
                + du * du / (c64(sm) * uu * uu)
        })
    };

    let potential: ComplexFn = {
        let (me, m1e, m2e) = (mass.eval.clone(), mass.eval_d1.clone(), mass.eval_d2.clone());
        let (v0, ap) = (v0.clone(), a_prime);
        Arc::new(move |x| {
            let m = me(x);
            let m1 = m1e(x);
            let m2 = m2e(x);
            v0(x) + 2.0 * ap(x) / m.sqrt() - c64(0.75 * m1 * m1 / (m * m * m))
                + c64(0.5 * m2 / (m * m))
        })
    };

    // Images ℒψ_k of the analytic bound states (skipping a deleted slot).
    let mut mapped_states = Vec::new();
    for k in 0..8usize {
        let ek = (card.energy)(k);
        if !ek.is_finite() || (ek - mu).abs() < 1e-8 * (1.0 + ek.abs()) {
            continue;
        }
        if let Some(limit) = card.max_bound_state {
            if k > limit {
                break;
            }
        }
        let wf = card.wavefunction.clone();
        let d1 = card.wavefunction_d1.clone();
        let me = mass.eval.clone();
        let af = a_fn.clone();
        let raw: ComplexFn = Arc::new(move |x| {
            let dpsi = match &d1 {
                Some(d) => d(k, x),
                None => deriv1_c(|t| wf(k, t), x, 1e-4),
            };
            dpsi / c64(me(x).sqrt()) + af(x) * wf(k, x)
        });
        mapped_states.push(normalized(raw, seed.domain));
    }

    let (expected_spectrum, new_states) = if seed.normalizable() {
        (SpectralChange::DeletedLevels(vec![mu]), Vec::new())
    } else if seed.unbounded_left && seed.unbounded_right {
        let me = mass.eval.clone();
        let u2 = u.clone();
        let candidate: ComplexFn = Arc::new(move |x| c64(me(x).sqrt()) / u2(x));
        if normalizable_on(&candidate, seed.domain) {
            (
                SpectralChange::InsertedLevels(vec![mu]),
                vec![normalized(candidate, seed.domain)],
            )
        } else {
            (SpectralChange::Unchanged, Vec::new())
        }
    } else {
        (SpectralChange::Unchanged, Vec::new())
    };

    Ok(PartnerResult {
        potential,
        expected_spectrum,
        mapped_states,
        new_states,
    })
}

/// Ground-state factorization partner: first-order intertwining seeded by
/// the card's own ground state.
pub fn ground_partner(card: &ModelCard) -> Result<PartnerResult> {
    let seed = SeedSolution::from_bound_state(card, 0);
    first_order_partner(card, &seed)
}

/// Cumulative probability helper for the modified factorization: a dense
/// cached antiderivative of ψₙ² with Hermite-corrected lookups.
struct CumulativeDensity {
    lo: f64,
    h: f64,
    values: Vec<f64>,
    density: Vec<f64>,
}

impl CumulativeDensity {
    fn build(psi_sq: &dyn Fn(f64) -> f64, domain: (f64, f64)) -> Self {
        let span = domain.1 - domain.0;
        let n = ((span / 2.5e-4).ceil() as usize + 1).clamp(2_001, 400_001);
        let xs = linspace(domain.0, domain.1, n);
        let h = xs[1] - xs[0];
        let density: Vec<f64> = xs.iter().map(|&x| psi_sq(x)).collect();
        let values = cumulative_integral(&density, h);
        CumulativeDensity { lo: domain.0, h, values, density }
    }

    /// ∫_{lo}^{x} ψₙ² dx′, clamped to the cached window.
    fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let t = (x - self.lo) / self.h;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= (n - 1) as f64 {
            return self.values[n - 1];
        }
        let i = t.floor() as usize;
        let s = t - i as f64;
        let (h00, h10, h01, h11) = (
            (2.0 * s - 3.0) * s * s + 1.0,
            ((s - 2.0) * s + 1.0) * s,
            (3.0 - 2.0 * s) * s * s,
            (s - 1.0) * s * s,
        );
        h00 * self.values[i]
            + h01 * self.values[i + 1]
            + self.h * (h10 * self.density[i] + h11 * self.density[i + 1])
    }
}

/// Modified factorization on the n-th excited state without an energy
/// offset.  The deformation f = ψₙ²/(√M(λ+I)) regularizes the otherwise
/// singular excited-state superpotential; the partner spectrum is the
/// original one rigidly shifted down by Eₙ, with a zero-energy state
/// ψₙ/(λ+I) in the n-th slot.
pub fn modified_excited_partner(card: &ModelCard, n: usize, lambda: f64) -> Result<PartnerResult> {
    let domain = card.recommended_domain;
    let wf = card.wavefunction.clone();
    if !wf(n, 0.5 * (domain.0 + domain.1)).re.is_finite() {
        return Err(Error::Domain(format!(
            "model `{}` has no usable level n = {n}",
            card.name
        )));
    }
    // The states are unit-normalized, so I(x) sweeps (−1/2, 1/2) once
    // centered; any |λ| ≤ 1/2 therefore puts a zero into λ + I.
    if lambda.abs() <= 0.5 + 1e-12 {
        return Err(Error::Domain(format!(
            "lambda = {lambda} is inadmissible: λ + I(x) vanishes somewhere because the \
             centered antiderivative I sweeps (−1/2, 1/2); choose |lambda| > 1/2"
        )));
    }
    let en = (card.energy)(n);
    let wf_sq = card.wavefunction.clone();
    let cum = Arc::new(CumulativeDensity::build(
        &|x| wf_sq(n, x).norm_sqr(),
        domain,
    ));
    let total = cum.eval(domain.1);

    let mass = &card.mass;
    let lam_i = {
        let cum = cum.clone();
        move |x: f64| lambda + cum.eval(x) - 0.5 * total
    };

    let d1 = card.wavefunction_d1.clone();
    let wfd = card.wavefunction.clone();
    let psi_d = move |x: f64| -> f64 {
        match &d1 {
            Some(d) => d(n, x).re,
            None => deriv1_c(|t| wfd(n, t), x, 1e-4).re,
        }
    };

    let potential: ComplexFn = {
        let (me, m1e) = (mass.eval.clone(), mass.eval_d1.clone());
        let v0 = card.potential.clone();
        let wf = card.wavefunction.clone();
        let li = lam_i.clone();
        Arc::new(move |x| {
            let m = me(x);
            let psi = wf(n, x).re;
            let dpsi = psi_d(x);
            let den = li(x);
            let fp = (2.0 * psi * dpsi * den
                - 0.5 * m1e(x) / m * psi * psi * den
                - psi.powi(4))
                / (m.sqrt() * den * den);
            v0(x) - c64(en) + c64(-2.0 * fp / m.sqrt())
        })
    };

    let special: ComplexFn = {
        let wf = card.wavefunction.clone();
        let li = lam_i;
        Arc::new(move |x| wf(n, x) / li(x))
    };

    Ok(PartnerResult {
        potential,
        expected_spectrum: SpectralChange::Shifted(-en),
        mapped_states: vec![normalized(special, domain)],
        new_states: Vec::new(),
    })
}

/// Modified factorization on level n with a non-zero offset β, seeded by a
/// general solution at μ = Eₙ − β.  The partner spectrum is the original
/// one shifted by β − Eₙ; when the seed carries the left-growing branch,
/// the state ψₙ/χ is square-integrable and fills the n-th slot at zero
/// energy (it is packaged in `mapped_states` exactly when that happens).
pub fn modified_excited_partner_shifted(
    card: &ModelCard,
    n: usize,
    beta: f64,
    seed: &SeedSolution,
) -> Result<PartnerResult> {
    if beta == 0.0 {
        return Err(Error::Domain(
            "beta = 0 reduces to the λ-deformed construction; call modified_excited_partner".into(),
        ));
    }
    let en = (card.energy)(n);
    let mu = require_real_mu(seed.mu, "the offset modified factorization")?;
    if (mu - (en - beta)).abs() > 1e-8 * (1.0 + en.abs()) {
        return Err(Error::Domain(format!(
            "seed energy mu = {mu} does not equal E_n − β = {} for n = {n}, β = {beta}",
            en - beta
        )));
    }

    let mass = &card.mass;
    let wf = card.wavefunction.clone();
    let d1 = card.wavefunction_d1.clone();
    let wfd = card.wavefunction.clone();
    let psi_d = Arc::new(move |x: f64| -> Complex64 {
        match &d1 {
            Some(d) => d(n, x),
            None => deriv1_c(|t| wfd(n, t), x, 1e-4),
        }
    });

    // W = ψₙu′ − ψₙ′u obeys W′ = βMψₙu + (M′/M)W, so everything below is
    // closed-form once ψₙ′ and u′ are.
    let wron: ComplexFn = {
        let (wf, psi_d) = (wf.clone(), psi_d.clone());
        let (u, up) = (seed.u.clone(), seed.u_prime.clone());
        Arc::new(move |x| wf(n, x) * up(x) - psi_d(x) * u(x))
    };
    if let Some(x0) = first_zero(&wron, seed.domain) {
        return Err(Error::Domain(format!(
            "the factorization denominator W = ψₙu′ − ψₙ′u vanishes near x = {x0:.6}; \
             try different seed branch weights"
        )));
    }

    let potential: ComplexFn = {
        let (me, m1e) = (mass.eval.clone(), mass.eval_d1.clone());
        let v0 = card.potential.clone();
        let (wf, psi_d, wron) = (wf.clone(), psi_d.clone(), wron.clone());
        let (u, up) = (seed.u.clone(), seed.u_prime.clone());
        Arc::new(move |x| {
            let m = me(x);
            let m1 = m1e(x);
            let sm = m.sqrt();
            let psi = wf(n, x);
            let dpsi = psi_d(x);
            let uu = u(x);
            let du = up(x);
            let w = wron(x);
            let wp = c64(beta * m) * psi * uu + c64(m1 / m) * w;
            // f = β√M ψₙ u / W by the quotient rule.
            let fp = c64(beta)
                * (c64(m1 / (2.0 * m) * sm) * psi * uu * w
                    + c64(sm) * (dpsi * uu + psi * du) * w
                    - c64(sm) * psi * uu * wp)
                / (w * w);
            v0(x) - c64(en) - 2.0 * fp / sm + c64(beta)
        })
    };

    // χ = W/M; the candidate zero-energy state is ψₙ/χ.
    let candidate: ComplexFn = {
        let me = mass.eval.clone();
        let (wf, wron) = (wf, wron);
        Arc::new(move |x| wf(n, x) * c64(me(x)) / wron(x))
    };
    let mapped_states = if normalizable_on(&candidate, seed.domain) {
        vec![normalized(candidate, seed.domain)]
    } else {
        Vec::new()
    };

    Ok(PartnerResult {
        potential,
        expected_spectrum: SpectralChange::Shifted(beta - en),
        mapped_states,
        new_states: Vec::new(),
    })
}

/// Shared second-order assembly once η, η′ and the seed bookkeeping are
/// known.  γ completes the second-order intertwiner ℒ₂ = (1/M)d² + ηd + γ.
struct SecondOrderCore {
    eta: RealFn,
    eta_prime: RealFn,
    mu_sum_half: f64,
}

fn second_order_result(
    card: &ModelCard,
    core: SecondOrderCore,
    domain: (f64, f64),
    expected_spectrum: SpectralChange,
    new_states: Vec<ComplexFn>,
    skip: &[f64],
) -> PartnerResult {
    let mass = &card.mass;
    let potential: ComplexFn = {
        let (me, m1e, m2e) = (mass.eval.clone(), mass.eval_d1.clone(), mass.eval_d2.clone());
        let v0 = card.potential.clone();
        let (eta, etap) = (core.eta.clone(), core.eta_prime.clone());
        Arc::new(move |x| {
            let m = me(x);
            let m1 = m1e(x);
            let m2 = m2e(x);
            v0(x)
                + c64(
                    2.0 * etap(x) + m1 / m * eta(x) - 3.0 * m1 * m1 / (m * m * m)
                        + 2.0 * m2 / (m * m),
                )
        })
    };

    let gamma: RealFn = {
        let (me, m1e, m2e) = (mass.eval.clone(), mass.eval_d1.clone(), mass.eval_d2.clone());
        let v0 = card.potential.clone();
        let (eta, etap) = (core.eta.clone(), core.eta_prime.clone());
        let half_sum = core.mu_sum_half;
        Arc::new(move |x| {
            let m = me(x);
            let m1 = m1e(x);
            let m2 = m2e(x);
            let e = eta(x);
            0.5 * m * e * e + 0.5 * m1 / m * e - 0.5 * etap(x) - v0(x).re
                + m1 * m1 / (m * m * m)
                - 0.5 * m2 / (m * m)
                + half_sum
        })
    };

    let mut mapped_states = Vec::new();
    for k in 0..8usize {
        let ek = (card.energy)(k);
        if !ek.is_finite() || skip.iter().any(|&s| (ek - s).abs() < 1e-8 * (1.0 + ek.abs())) {
            continue;
        }
        if let Some(limit) = card.max_bound_state {
            if k > limit {
                break;
            }
        }
        let wf = card.wavefunction.clone();
        let d1 = card.wavefunction_d1.clone();
        let v0 = card.potential.clone();
        let (me, m1e) = (mass.eval.clone(), mass.eval_d1.clone());
        let eta = core.eta.clone();
        let gam = gamma.clone();
        let raw: ComplexFn = Arc::new(move |x| {
            let dpsi = match &d1 {
                Some(d) => d(k, x),
                None => deriv1_c(|t| wf(k, t), x, 1e-4),
            };
            let m = me(x);
            (v0(x) - c64(ek)) * wf(k, x)
                + c64(m1e(x) / (m * m) + eta(x)) * dpsi
                + c64(gam(x)) * wf(k, x)
        });
        mapped_states.push(normalized(raw, domain));
    }

    PartnerResult {
        potential,
        expected_spectrum,
        mapped_states,
        new_states,
    }
}

/// Second-order intertwining from two real-energy seeds.  Deletes both
/// factorization energies when both seeds are bound states, inserts both
/// when both seeds diverge at both ends (and the candidate states are
/// square-integrable), and is strictly isospectral otherwise.
pub fn second_order_partner(
    card: &ModelCard,
    seed1: &SeedSolution,
    seed2: &SeedSolution,
) -> Result<PartnerResult> {
    let mu1 = require_real_mu(seed1.mu, "second-order intertwining")?;
    let mu2 = require_real_mu(seed2.mu, "second-order intertwining")?;
    if (mu1 - mu2).abs() < 1e-10 * (1.0 + mu1.abs()) {
        return Err(Error::Domain(
            "second-order intertwining needs two distinct factorization energies".into(),
        ));
    }
    let domain = seed1.domain;
    let mass = &card.mass;

    let wron: ComplexFn = {
        let (u1, u1p) = (seed1.u.clone(), seed1.u_prime.clone());
        let (u2, u2p) = (seed2.u.clone(), seed2.u_prime.clone());
        Arc::new(move |x| u1(x) * u2p(x) - u2(x) * u1p(x))
    };
    if let Some(x0) = first_zero(&wron, domain) {
        return Err(Error::Domain(format!(
            "the seed Wronskian vanishes near x = {x0:.6}; this seed pair gives a singular partner"
        )));
    }

    let dmu = mu1 - mu2;
    let eta: RealFn = {
        let (me, m1e) = (mass.eval.clone(), mass.eval_d1.clone());
        let (u1, u2, w) = (seed1.u.clone(), seed2.u.clone(), wron.clone());
        Arc::new(move |x| {
            let m = me(x);
            (-c64(m1e(x) / (m * m)) - c64(dmu) * u1(x) * u2(x) / w(x)).re
        })
    };
    // η′ uses W′ = (M′/M)W + M(μ₁−μ₂)u₁u₂, keeping the whole potential
    // stencil-free.
    let eta_prime: RealFn = {
        let (me, m1e, m2e) = (mass.eval.clone(), mass.eval_d1.clone(), mass.eval_d2.clone());
        let (u1, u1p) = (seed1.u.clone(), seed1.u_prime.clone());
        let (u2, u2p) = (seed2.u.clone(), seed2.u_prime.clone());
        let w = wron.clone();
        Arc::new(move |x| {
            let m = me(x);
            let m1 = m1e(x);
            let m2 = m2e(x);
            let a = u1(x);
            let b = u2(x);
            let wv = w(x);
            let wp = c64(m1 / m) * wv + c64(m * dmu) * a * b;
            let quot = ((u1p(x) * b + a * u2p(x)) * wv - a * b * wp) / (wv * wv);
            -(m2 / (m * m) - 2.0 * m1 * m1 / (m * m * m)) - dmu * quot.re
        })
    };

    let both_bound = seed1.normalizable() && seed2.normalizable();
    let both_wild = seed1.unbounded_left
        && seed1.unbounded_right
        && seed2.unbounded_left
        && seed2.unbounded_right;

    let (expected, new_states) = if both_bound {
        (SpectralChange::DeletedLevels(vec![mu1, mu2]), Vec::new())
    } else if both_wild {
        let me = mass.eval.clone();
        let (u2c, wc) = (seed2.u.clone(), wron.clone());
        let cand1: ComplexFn = Arc::new(move |x| c64(me(x)) * u2c(x) / wc(x));
        let me = mass.eval.clone();
        let (u1c, wc) = (seed1.u.clone(), wron.clone());
        let cand2: ComplexFn = Arc::new(move |x| c64(me(x)) * u1c(x) / wc(x));
        if normalizable_on(&cand1, domain) && normalizable_on(&cand2, domain) {
            let mut levels = vec![mu1, mu2];
            levels.sort_by(f64::total_cmp);
            (
                SpectralChange::InsertedLevels(levels),
                vec![normalized(cand1, domain), normalized(cand2, domain)],
            )
        } else {
            (SpectralChange::Unchanged, Vec::new())
        }
    } else {
        (SpectralChange::Unchanged, Vec::new())
    };

    let skip: Vec<f64> = match &expected {
        SpectralChange::DeletedLevels(v) => v.clone(),
        _ => Vec::new(),
    };
    let core = SecondOrderCore {
        eta,
        eta_prime,
        mu_sum_half: 0.5 * (mu1 + mu2),
    };
    Ok(second_order_result(card, core, domain, expected, new_states, &skip))
}

/// Second-order intertwining from a single complex seed paired with its
/// conjugate.  The auxiliary w = −Im(ū u′)/(M·Im μ) obeys w′ = |u|², so
/// η = −|u|²/(Mw) − M′/M² stays real and the partner potential is real by
/// construction; the transformation is strictly isospectral.
pub fn second_order_partner_complex(
    card: &ModelCard,
    seed: &SeedSolution,
) -> Result<PartnerResult> {
    if seed.mu.im.abs() < IM_TOL {
        return Err(Error::Domain(format!(
            "conjugate-pair construction needs a genuinely complex energy (got mu = {})",
            seed.mu
        )));
    }
    if seed.unbounded_left && seed.unbounded_right {
        return Err(Error::Domain(
            "the complex seed must vanish at one end of the domain for w to stay nodeless".into(),
        ));
    }
    let domain = seed.domain;
    let mass = &card.mass;
    let im_mu = seed.mu.im;

    let w_aux: RealFn = {
        let (u, up, me) = (seed.u.clone(), seed.u_prime.clone(), mass.eval.clone());
        Arc::new(move |x| -(u(x).conj() * up(x)).im / (me(x) * im_mu))
    };
    {
        let wa = w_aux.clone();
        let probe: ComplexFn = Arc::new(move |x| c64(wa(x)));
        if let Some(x0) = first_zero(&probe, domain) {
            return Err(Error::Domain(format!(
                "the auxiliary function w vanishes near x = {x0:.6}; this complex seed is unusable"
            )));
        }
    }

    let eta: RealFn = {
        let (u, me, m1e) = (seed.u.clone(), mass.eval.clone(), mass.eval_d1.clone());
        let wa = w_aux.clone();
        Arc::new(move |x| {
            let m = me(x);
            -u(x).norm_sqr() / (m * wa(x)) - m1e(x) / (m * m)
        })
    };
    let eta_prime: RealFn = {
        let (u, up) = (seed.u.clone(), seed.u_prime.clone());
        let (me, m1e, m2e) = (mass.eval.clone(), mass.eval_d1.clone(), mass.eval_d2.clone());
        let wa = w_aux;
        Arc::new(move |x| {
            let m = me(x);
            let m1 = m1e(x);
            let w = wa(x);
            let usq = u(x).norm_sqr();
            let dusq = 2.0 * (u(x).conj() * up(x)).re;
            // (Mw)′ = M′w + M|u|² because w′ = |u|².
            -(dusq * m * w - usq * (m1 * w + m * usq)) / (m * w).powi(2)
                - m2e(x) / (m * m)
                + 2.0 * m1 * m1 / (m * m * m)
        })
    };

    let core = SecondOrderCore {
        eta,
        eta_prime,
        mu_sum_half: seed.mu.re,
    };
    Ok(second_order_result(
        card,
        core,
        domain,
        SpectralChange::Unchanged,
        Vec::new(),
        &[],
    ))
}

/// Compares a claimed partner potential against a parameter-shifted base
/// potential on `xs`.  Returns (flat-difference?, mean offset); the first
/// component demands the pointwise difference be constant to one part in
/// 10⁹ of its own size.
pub fn shape_invariance_check(v_plus: &RealFn, v_minus_shifted: &RealFn, xs: &[f64]) -> (bool, f64) {
    let diffs: Vec<f64> = xs.iter().map(|&x| v_plus(x) - v_minus_shifted(x)).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64;
    (var.sqrt() < 1e-9 * (1.0 + mean.abs()), mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::hypergeom;
    use crate::models::pdm_exceptional::pdm_sinh_osc;
    use crate::numeric::deriv1;
    use crate::specfn::erf;

    #[test]
    fn ground_deletion_matches_the_closed_form() {
        let card = hypergeom::pdm_sech_hypergeometric(5.0, 0.0, 3.0).unwrap();
        let closed = hypergeom::deleted_ground_potential(5.0, 0.0, 3.0);

        // Via the generic bound-state path…
        let via_state = ground_partner(&card).unwrap();
        // …and via the terminating analytic seed.
        let seed = hypergeom::seed_solution(c64(5.0), c64(0.0), 3.0, c64(1.0), c64(0.0)).unwrap();
        let via_seed = first_order_partner(&card, &seed).unwrap();

        assert_eq!(
            via_seed.expected_spectrum,
            SpectralChange::DeletedLevels(vec![4.5])
        );
        for &x in &[-4.0, -1.2, 0.0, 0.9, 2.5, 5.0] {
            assert!(((via_seed.potential)(x).re - closed(x)).abs() < 1e-8, "x = {x}");
            assert!(((via_state.potential)(x).re - closed(x)).abs() < 1e-7, "x = {x}");
            assert!((via_seed.potential)(x).im.abs() < 1e-12);
        }
        assert_eq!(via_seed.mapped_states.len(), 7);
    }

    #[test]
    fn isospectral_first_order_matches_the_closed_form() {
        let card = hypergeom::pdm_sech_hypergeometric(3.0, 5.0, 4.0).unwrap();
        let seed = hypergeom::seed_solution(c64(3.0), c64(5.0), 4.0, c64(1.0), c64(0.0)).unwrap();
        let got = first_order_partner(&card, &seed).unwrap();
        assert_eq!(got.expected_spectrum, SpectralChange::Unchanged);
        let closed = |x: f64| {
            3.75 * (-x).exp()
                + 2.0 * x.exp()
                + (4.0 + x.exp() - 3.0 * (2.0 * x).exp()) / (4.0 + 3.0 * x.exp()).powi(2)
        };
        for &x in &[-5.0, -2.0, -0.4, 0.8, 2.2, 4.5] {
            assert!(
                ((got.potential)(x).re - closed(x)).abs() < 1e-8,
                "x = {x}: {} vs {}",
                (got.potential)(x).re,
                closed(x)
            );
        }
    }

    #[test]
    fn first_order_rejects_bad_seeds() {
        let card = hypergeom::pdm_sech_hypergeometric(3.0, 5.0, 4.0).unwrap();
        // An excited bound state has a node.
        let noded = SeedSolution::from_bound_state(&card, 1);
        let err = first_order_partner(&card, &noded).unwrap_err();
        assert!(err.to_string().contains("vanishes inside the domain"));
        // A complex energy must be routed to the conjugate-pair builder.
        let complex = hypergeom::seed_solution(
            Complex64::new(6.1, -5.0),
            Complex64::new(8.0, 5.0),
            4.1,
            c64(1.0),
            c64(0.0),
        )
        .unwrap();
        let err = first_order_partner(&card, &complex).unwrap_err();
        assert!(err.to_string().contains("real factorization energy"));
    }

    #[test]
    fn deformed_oscillator_matches_the_error_function_form() {
        let card = pdm_sinh_osc(1.0).unwrap();
        let lambda = 1.0;
        let got = modified_excited_partner(&card, 1, lambda).unwrap();
        assert_eq!(got.expected_spectrum, SpectralChange::Shifted(-3.0));
        assert_eq!(got.mapped_states.len(), 1);

        let f_closed = move |x: f64| {
            let y = x.asinh();
            4.0 * y * y
                / (std::f64::consts::PI.sqrt() * (y * y).exp() * (2.0 * lambda + erf(y))
                    - 2.0 * y)
        };
        let v_closed = move |x: f64| {
            let y = x.asinh();
            let v1 = y * y - 0.25 * (2.0 + x * x) / (1.0 + x * x) - 3.0;
            v1 - 2.0 * (1.0 + x * x).sqrt() * deriv1(f_closed, x, 1e-4)
        };
        for &x in &[-3.0, -1.1, -0.3, 0.6, 1.8, 4.0] {
            assert!(
                ((got.potential)(x).re - v_closed(x)).abs() < 1e-6,
                "x = {x}: {} vs {}",
                (got.potential)(x).re,
                v_closed(x)
            );
        }
    }

    #[test]
    fn deformed_oscillator_rejects_inadmissible_lambda() {
        let card = pdm_sinh_osc(1.0).unwrap();
        let err = modified_excited_partner(&card, 1, 0.4).unwrap_err();
        assert!(err.to_string().contains("|lambda| > 1/2"));
    }

    #[test]
    fn offset_modified_factorization_runs_on_the_solvable_family() {
        let card = hypergeom::pdm_sech_hypergeometric(1.0, 5.0, 4.0).unwrap();
        // E₁ = 13, β = 1 ⇒ seed energy 12 on both branches.
        let nu = 2.0 + 15.0f64.sqrt();
        let seed = hypergeom::seed_solution(
            c64(1.0 + nu),
            c64(5.0 - nu),
            4.0,
            c64(1.0),
            c64(1.0),
        )
        .unwrap();
        assert!((seed.mu - c64(12.0)).norm() < 1e-10);
        let got = modified_excited_partner_shifted(&card, 1, 1.0, &seed).unwrap();
        assert_eq!(got.expected_spectrum, SpectralChange::Shifted(-12.0));
        // The left-growing branch is present, so the zero-energy slot state
        // is square-integrable.
        assert_eq!(got.mapped_states.len(), 1);
        for &x in &[-4.0, -1.0, 0.3, 1.7, 4.2] {
            let v = (got.potential)(x);
            assert!(v.re.is_finite() && v.im.abs() < 1e-9, "x = {x}: {v}");
        }

        // The pure left-recessive seed keeps the construction regular but
        // loses the zero-energy state.
        let pure = hypergeom::seed_solution(
            c64(1.0 + nu),
            c64(5.0 - nu),
            4.0,
            c64(1.0),
            c64(0.0),
        )
        .unwrap();
        let got2 = modified_excited_partner_shifted(&card, 1, 1.0, &pure).unwrap();
        assert!(got2.mapped_states.is_empty());
    }

    #[test]
    fn second_order_two_level_deletion_matches_the_closed_form() {
        let card = hypergeom::pdm_sech_hypergeometric(5.0, 0.0, 3.0).unwrap();
        let s1 = SeedSolution::from_bound_state(&card, 0);
        let s2 = SeedSolution::from_bound_state(&card, 1);
        let got = second_order_partner(&card, &s1, &s2).unwrap();
        assert_eq!(
            got.expected_spectrum,
            SpectralChange::DeletedLevels(vec![4.5, 10.5])
        );
        let closed = hypergeom::two_level_deleted_potential(5.0, 0.0, 3.0);
        for &x in &[-3.5, -1.0, 0.0, 1.3, 3.0] {
            assert!(
                ((got.potential)(x).re - closed(x)).abs() < 1e-8,
                "x = {x}: {} vs {}",
                (got.potential)(x).re,
                closed(x)
            );
        }
    }

    #[test]
    fn second_order_isospectral_pair_matches_the_closed_form() {
        let card = hypergeom::pdm_sech_hypergeometric(3.0, 5.0, 4.0).unwrap();
        let s1 = hypergeom::seed_solution(c64(3.0), c64(5.0), 4.0, c64(1.0), c64(0.0)).unwrap();
        let s2 = hypergeom::seed_solution(c64(4.0), c64(4.0), 4.0, c64(1.0), c64(0.0)).unwrap();
        assert!((s2.mu - c64(-6.0)).norm() < 1e-12);
        let got = second_order_partner(&card, &s1, &s2).unwrap();
        assert_eq!(got.expected_spectrum, SpectralChange::Unchanged);
        let closed = |x: f64| 1.0 + 0.75 * (9.0 * x.cosh() - 7.0 * x.sinh());
        for &x in &[-4.0, -1.5, 0.0, 1.2, 3.5] {
            assert!(
                ((got.potential)(x).re - closed(x)).abs() < 1e-8,
                "x = {x}: {} vs {}",
                (got.potential)(x).re,
                closed(x)
            );
        }
    }

    #[test]
    fn second_order_creation_inserts_both_levels() {
        let card = hypergeom::pdm_sech_hypergeometric(2.8, 20.0, 4.4).unwrap();
        let s1 = hypergeom::seed_solution(c64(2.8), c64(20.0), 4.4, c64(1.0), c64(1.0)).unwrap();
        let s2 = hypergeom::seed_solution(c64(12.8), c64(10.0), 4.4, c64(1.0), c64(1.0)).unwrap();
        let got = second_order_partner(&card, &s1, &s2).unwrap();
        assert_eq!(
            got.expected_spectrum,
            SpectralChange::InsertedLevels(vec![-85.32, -13.32])
        );
        assert_eq!(got.new_states.len(), 2);
        for &x in &[-3.0, -0.8, 0.5, 2.0] {
            assert!((got.potential)(x).re.is_finite());
        }
    }

    #[test]
    fn conjugate_pair_partner_is_real_and_matches_the_general_formula() {
        let card = hypergeom::pdm_sech_hypergeometric(6.1, 8.0, 4.1).unwrap();
        let seed = hypergeom::seed_solution(
            Complex64::new(6.1, -5.0),
            Complex64::new(8.0, 5.0),
            4.1,
            c64(1.0),
            c64(0.0),
        )
        .unwrap();
        let got = second_order_partner_complex(&card, &seed).unwrap();
        assert_eq!(got.expected_spectrum, SpectralChange::Unchanged);

        // Realness and agreement with the general two-seed η assembled by
        // complex arithmetic.
        let dmu = seed.mu - seed.mu.conj();
        for &x in &[-4.0, -1.3, 0.2, 1.6, 3.8] {
            let v = (got.potential)(x);
            assert!(v.im.abs() < 1e-9, "x = {x}: {v}");
            let u = (seed.u)(x);
            let up = (seed.u_prime)(x);
            // η from the generic two-seed formula with u₂ = ū, μ₂ = μ̄:
            // η = −M′/M² − (μ−μ̄)uū/W(u,ū) with W(u,ū) = uū′ − ūu′.
            let w = u * up.conj() - u.conj() * up;
            let m = card.mass.m(x);
            let eta_direct = -card.mass.m1(x) / (m * m) - (dmu * u * u.conj() / w).re;
            let usq = u.norm_sqr();
            let w_aux = -(u.conj() * up).im / (m * seed.mu.im);
            let eta_real = -usq / (m * w_aux) - card.mass.m1(x) / (m * m);
            assert!(
                (eta_direct - eta_real).abs() < 1e-9 * (1.0 + eta_real.abs()),
                "x = {x}"
            );
        }
    }

    #[test]
    fn superpotential_matches_the_card_closure() {
        let card = pdm_sinh_osc(1.0).unwrap();
        let wf = card.wavefunction.clone();
        let psi0: ComplexFn = Arc::new(move |x| wf(0, x));
        let got = superpotential(&psi0, &card.mass).unwrap();
        assert!(got.poles.is_empty());
        let closed = card.superpotential.clone().unwrap();
        for &x in &[-5.0, -1.0, 0.4, 2.0, 6.0] {
            assert!(((got.w)(x) - closed(x)).abs() < 1e-7, "x = {x}");
        }
        // An excited state hands back its node as a pole.
        let wf = card.wavefunction.clone();
        let psi1: ComplexFn = Arc::new(move |x| wf(1, x));
        let got = superpotential(&psi1, &card.mass).unwrap();
        assert_eq!(got.poles.len(), 1);
        assert!(got.poles[0].abs() < 0.05);
    }
}
