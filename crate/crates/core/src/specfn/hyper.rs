//! Gauss and confluent hypergeometric functions with complex parameters.
//!
//! ₂F₁ dispatches over five evaluation strategies: terminating series,
//! raw Gauss series for x ≤ 0.8, Euler reflection when it terminates the
//! series, the standard 1−x linear transformation, and the logarithmic
//! (digamma) expansion when c−a−b is an integer and the standard transform
//! would hit gamma poles.

use super::gamma::{digamma, gamma_ln};
use crate::{Error, Result};
use num_complex::Complex64;

/// A series evaluation together with honest convergence bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: Complex64,
    pub converged: bool,
    pub terms_used: usize,
}

const DEFAULT_TOL: f64 = 1e-13;
const MAX_TERMS: usize = 10_000;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Index of the first non-positive integer hit by `z, z+1, z+2, …`, i.e.
/// `Some(m)` if z ≈ −m for a non-negative integer m.
fn non_positive_int(z: Complex64) -> Option<usize> {
    if z.im.abs() > 1e-12 {
        return None;
    }
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() < 1e-9 {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Gauss hypergeometric ₂F₁(a,b;c;x) on the real interval 0 ≤ x < 1
/// (mildly negative x is accepted too; the series still converges there).
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<SpecialValue> {
    hyp2f1_with(a, b, c, x, DEFAULT_TOL, MAX_TERMS)
}

/// [`hyp2f1`] with explicit series tolerance and term cap.
pub fn hyp2f1_with(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<SpecialValue> {
    if !(-1.0..1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "hyp2f1 argument must lie in [-1, 1) (got {x})"
        )));
    }
    let term_a = non_positive_int(a);
    let term_b = non_positive_int(b);
    let terminates = term_a.or(term_b).is_some();
    if let Some(mc) = non_positive_int(c) {
        // A pole of the c-Pochhammer is only tolerable if the numerator
        // terminates strictly earlier.
        let earliest = term_a.unwrap_or(usize::MAX).min(term_b.unwrap_or(usize::MAX));
        if earliest > mc {
            return Err(Error::Domain(
                "hyp2f1 parameter c must not be a non-positive integer".into(),
            ));
        }
    }
    if x == 0.0 {
        return Ok(SpecialValue { value: c64(1.0), converged: true, terms_used: 0 });
    }
    if terminates || x.abs() <= 0.8 {
        return Ok(gauss_series(a, b, c, x, tol, max_terms));
    }
    // x close to 1: transform in w = 1−x.
    let s = c - a - b;
    match nearly_integer(s) {
        // Negative integer excess: Euler reflection flips its sign (and may
        // terminate the reflected series outright).
        Some(m) if m < 0 => {
            let inner = hyp2f1_with(c - a, c - b, c, x, tol, max_terms)?;
            let pref = c64(1.0 - x).powc(s);
            Ok(SpecialValue { value: pref * inner.value, ..inner })
        }
        Some(m) => degenerate_transform(a, b, m, x, tol, max_terms),
        None => standard_transform(a, b, c, x, tol, max_terms),
    }
}

fn nearly_integer(z: Complex64) -> Option<i64> {
    if z.im.abs() < 1e-9 && (z.re - z.re.round()).abs() < 1e-9 {
        Some(z.re.round() as i64)
    } else {
        None
    }
}

/// Plain Gauss series Σ (a)_n(b)_n/((c)_n n!) xⁿ.
fn gauss_series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> SpecialValue {
    let mut term = c64(1.0);
    let mut sum = term;
    for n in 0..max_terms {
        let nf = n as f64;
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.norm() < tol * sum.norm().max(1.0) {
            return SpecialValue { value: sum, converged: true, terms_used: n + 1 };
        }
    }
    SpecialValue { value: sum, converged: false, terms_used: max_terms }
}

/// Linear 1−x transformation, valid when c−a−b is not an integer.
fn standard_transform(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<SpecialValue> {
    let w = 1.0 - x;
    let s = c - a - b;
    let f1 = gauss_series(a, b, -s + 1.0, w, tol, max_terms);
    let f2 = gauss_series(c - a, c - b, s + 1.0, w, tol, max_terms);
    let g1 = (gamma_ln(c) + gamma_ln(s) - gamma_ln(c - a) - gamma_ln(c - b)).exp();
    let g2 = (gamma_ln(c) + gamma_ln(-s) - gamma_ln(a) - gamma_ln(b)).exp();
    let value = g1 * f1.value + c64(w).powc(s) * g2 * f2.value;
    Ok(SpecialValue {
        value,
        converged: f1.converged && f2.converged,
        terms_used: f1.terms_used + f2.terms_used,
    })
}

/// Logarithmic expansion at x→1 for c = a+b+m with integer m ≥ 0.
fn degenerate_transform(
    a: Complex64,
    b: Complex64,
    m: i64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<SpecialValue> {
    debug_assert!(m >= 0);
    let m = m as usize;
    let w = 1.0 - x;
    let lnw = c64(w.ln());
    let mut terms_used = 0usize;
    let mut converged = true;

    let mut finite = Complex64::new(0.0, 0.0);
    if m >= 1 {
        // Σ_{n<m} (a)_n (b)_n / (n! (1−m)_n) wⁿ
        let mut t = c64(1.0);
        for n in 0..m {
            finite += t;
            let nf = n as f64;
            if n + 1 < m {
                t = t * (a + nf) * (b + nf) / (c64(nf + 1.0) * (1.0 - m as f64 + nf)) * w;
            }
            terms_used += 1;
        }
    }

    // Infinite logarithmic series; its leading term carries 1/(0!·m!).
    let mut series = Complex64::new(0.0, 0.0);
    let mf = m as f64;
    let mut t = c64(1.0 / (1..=m).map(|k| k as f64).product::<f64>());
    let mut ok = false;
    for n in 0..max_terms {
        let nf = n as f64;
        let bracket = if m == 0 {
            2.0 * digamma(c64(nf + 1.0)) - digamma(a + nf) - digamma(b + nf) - lnw
        } else {
            lnw - digamma(c64(nf + 1.0)) - digamma(c64(nf + mf + 1.0))
                + digamma(a + nf + mf)
                + digamma(b + nf + mf)
        };
        let contrib = t * bracket;
        series += contrib;
        terms_used += 1;
        if n > 2 && contrib.norm() < tol * series.norm().max(1.0) {
            ok = true;
            break;
        }
        t = if m == 0 {
            t * (a + nf) * (b + nf) / (c64(nf + 1.0) * (nf + 1.0)) * w
        } else {
            t * (a + mf + nf) * (b + mf + nf) / (c64(nf + 1.0) * (nf + mf + 1.0)) * w
        };
    }
    converged &= ok;

    let value = if m == 0 {
        let pref = (gamma_ln(a + b) - gamma_ln(a) - gamma_ln(b)).exp();
        pref * series
    } else {
        let pref1 =
            (gamma_ln(c64(mf)) + gamma_ln(a + b + mf) - gamma_ln(a + mf) - gamma_ln(b + mf)).exp();
        let pref2 = (gamma_ln(a + b + mf) - gamma_ln(a) - gamma_ln(b)).exp();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        pref1 * finite - sign * pref2 * c64(w).powu(m as u32) * series
    };
    Ok(SpecialValue { value, converged, terms_used })
}

/// Confluent (Kummer) hypergeometric ₁F₁(a;b;x).
pub fn hyp1f1(a: Complex64, b: Complex64, x: Complex64) -> Result<SpecialValue> {
    let term_a = non_positive_int(a);
    if let Some(mb) = non_positive_int(b) {
        if term_a.unwrap_or(usize::MAX) > mb {
            return Err(Error::Domain(
                "hyp1f1 parameter b must not be a non-positive integer".into(),
            ));
        }
    }
    // Kummer's transformation keeps the series terms single-signed for
    // decaying arguments, avoiding the cancellation of the raw series.
    if x.re < 0.0 && term_a.is_none() {
        let inner = kummer_series(b - a, b, -x, DEFAULT_TOL, MAX_TERMS);
        return Ok(SpecialValue { value: x.exp() * inner.value, ..inner });
    }
    Ok(kummer_series(a, b, x, DEFAULT_TOL, MAX_TERMS))
}

fn kummer_series(
    a: Complex64,
    b: Complex64,
    x: Complex64,
    tol: f64,
    max_terms: usize,
) -> SpecialValue {
    let mut term = c64(1.0);
    let mut sum = term;
    for n in 0..max_terms {
        let nf = n as f64;
        term = term * (a + nf) / ((b + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.norm() < tol * sum.norm().max(1.0) {
            return SpecialValue { value: sum, converged: true, terms_used: n + 1 };
        }
    }
    SpecialValue { value: sum, converged: false, terms_used: max_terms }
}
