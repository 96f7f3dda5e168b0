//! Orthogonal-polynomial families: classical Jacobi (complex parameters and
//! argument), Hermite, the exceptional X₁ Laguerre/Jacobi families, and the
//! deformed Hermite polynomials tied to the nonlinear-oscillator spectrum.
//!
//! The X₁ families start at degree 1 and satisfy Sturm–Liouville equations
//! with rational coefficients; no closed form or recurrence is available for
//! general degree, so they are generated directly from their differential
//! equations (an exact backward recurrence for the Laguerre family, a
//! polynomial-ansatz linear solve for the Jacobi one).

use crate::{Error, Result};
use num_complex::Complex64;

/// Dense polynomial in one variable, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    pub degree: usize,
    pub coeffs: Vec<Complex64>,
}

impl PolyCoeffs {
    /// Wraps a coefficient list (ascending powers). Trailing zeros are kept
    /// out by the constructors in this module; an all-zero list represents
    /// the zero polynomial.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "coefficient list must be non-empty");
        PolyCoeffs { degree: coeffs.len() - 1, coeffs }
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Real parts of the coefficients, if all imaginary parts are negligible.
    pub fn real_coeffs(&self) -> Option<Vec<f64>> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if self.coeffs.iter().all(|c| c.im.abs() <= 1e-10 * scale) {
            Some(self.coeffs.iter().map(|c| c.re).collect())
        } else {
            None
        }
    }
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Jacobi polynomial P_n^{(a,b)}(x) for complex parameters and argument.
///
/// Uses the three-term recurrence; when a recurrence pivot 2k(k+a+b)(2k+a+b−2)
/// degenerates (possible for the negative or complex parameter combinations
/// appearing in the deformed-oscillator families) it falls back to the exact
/// terminating-sum representation, which has no poles.
pub fn jacobi_p(n: usize, a: Complex64, b: Complex64, x: Complex64) -> Complex64 {
    if n == 0 {
        return c64(1.0);
    }
    let ab = a + b;
    let degenerate = (1..=n).any(|k| {
        let kf = k as f64;
        let p1 = kf + ab;
        let p2 = 2.0 * kf + ab - 2.0;
        p1.norm() < 1e-6 * (kf + ab.norm() + 1.0) || p2.norm() < 1e-6 * (2.0 * kf + ab.norm() + 2.0)
    });
    if degenerate {
        return jacobi_sum(n, a, b, x);
    }
    let mut pm1 = c64(1.0);
    let mut p = (a + 1.0) + (ab + 2.0) * (x - 1.0) * 0.5;
    for k in 2..=n {
        let kf = k as f64;
        let c1 = 2.0 * kf * (kf + ab) * (2.0 * kf + ab - 2.0);
        let c2 = (2.0 * kf + ab - 1.0)
            * ((2.0 * kf + ab) * (2.0 * kf + ab - 2.0) * x + a * a - b * b);
        let c3 = -2.0 * (kf + a - 1.0) * (kf + b - 1.0) * (2.0 * kf + ab);
        let next = (c2 * p + c3 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    p
}

/// Terminating-sum form of P_n^{(a,b)}: pole-free products only, so it is
/// valid for every parameter combination.
fn jacobi_sum(n: usize, a: Complex64, b: Complex64, x: Complex64) -> Complex64 {
    let half = (x - 1.0) * 0.5;
    let mut total = Complex64::new(0.0, 0.0);
    for m in 0..=n {
        let mut term = c64(binomial(n, m));
        for j in (m + 1)..=n {
            term *= a + j as f64;
        }
        for j in 0..m {
            term *= a + b + (n + 1 + j) as f64;
        }
        term *= half.powu(m as u32);
        total += term;
    }
    total / c64(factorial(n))
}

/// Jacobi polynomial as an explicit coefficient vector (ascending powers).
pub fn jacobi_coeffs(n: usize, a: Complex64, b: Complex64) -> PolyCoeffs {
    // Expand the terminating sum in the monomial basis.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for m in 0..=n {
        let mut pref = c64(binomial(n, m) / factorial(n));
        for j in (m + 1)..=n {
            pref *= a + j as f64;
        }
        for j in 0..m {
            pref *= a + b + (n + 1 + j) as f64;
        }
        // ((x−1)/2)^m = 2^{−m} Σ_k C(m,k) x^k (−1)^{m−k}
        let scale = 0.5f64.powi(m as i32);
        for k in 0..=m {
            let sign = if (m - k) % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[k] += pref * c64(scale * binomial(m, k) * sign);
        }
    }
    PolyCoeffs::new(coeffs)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|j| (n - j) as f64 / (k - j) as f64).product()
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite_h(n: usize, x: f64) -> f64 {
    let mut hm1 = 1.0;
    let mut h = 2.0 * x;
    match n {
        0 => 1.0,
        1 => h,
        _ => {
            for k in 1..n {
                let next = 2.0 * x * h - 2.0 * k as f64 * hm1;
                hm1 = h;
                h = next;
            }
            h
        }
    }
}

/// Exceptional X₁ Laguerre polynomial L̂_n^{(a)} as coefficients.
///
/// Generated by an exact backward recurrence obtained from the family's
/// differential equation with polynomial coefficients,
/// x(x+a)·y″ − (x−a)(x+a+1)·y′ + [n·x + a(n−2)]·y = 0,
/// descending from the fixed leading coefficient (−1)ⁿ/(n−1)!.
pub fn x1_laguerre_coeffs(n: usize, a: f64) -> Result<PolyCoeffs> {
    if n == 0 {
        return Err(Error::Domain(
            "X1 Laguerre family starts at degree 1".into(),
        ));
    }
    if a <= 0.0 {
        return Err(Error::Domain(format!(
            "X1 Laguerre parameter must satisfy a > 0 (got {a})"
        )));
    }
    let mut c = vec![0.0f64; n + 1];
    c[n] = if n % 2 == 0 { 1.0 } else { -1.0 } / factorial(n - 1);
    for j in (1..=n).rev() {
        let jf = j as f64;
        let diag = jf * jf - 2.0 * jf + a * (n as f64 - 2.0);
        let upper = if j < n {
            a * (jf + 1.0) * (jf + a + 1.0) * c[j + 1]
        } else {
            0.0
        };
        c[j - 1] = -(diag * c[j] + upper) / (n as f64 - jf + 1.0);
    }
    Ok(PolyCoeffs::new(c.into_iter().map(c64).collect()))
}

/// Evaluates L̂_n^{(a)} at a complex point.
pub fn x1_laguerre(n: usize, a: f64, x: Complex64) -> Result<Complex64> {
    Ok(x1_laguerre_coeffs(n, a)?.eval(x))
}

/// Exceptional X₁ Jacobi polynomial P̂_n^{(a,b)} as coefficients.
///
/// The defining equation has rational coefficients with denominators
/// (1−x²) and (b−a)x−(b+a); clearing them leaves polynomial coefficients and
/// the polynomial ansatz becomes an (overdetermined, consistent) linear
/// system, solved in a least-squares sense with the leading coefficient
/// pinned to −(n+a+b)_{n−1}/(2ⁿ(n−1)!), the normalization matching the
/// family's first two printed members.
pub fn x1_jacobi_coeffs(n: usize, a: f64, b: f64) -> Result<PolyCoeffs> {
    if n == 0 {
        return Err(Error::Domain("X1 Jacobi family starts at degree 1".into()));
    }
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::Domain(format!(
            "X1 Jacobi parameters must satisfy a, b > -1 (got a={a}, b={b})"
        )));
    }
    if a == b {
        return Err(Error::Domain(
            "X1 Jacobi family requires a != b".into(),
        ));
    }
    // Cleared-denominator coefficient polynomials of y″, y′, y.
    let u = b - a;
    let v = b + a;
    let dpol = vec![-v, u]; // (b−a)x − (b+a)
    let ppol = vec![1.0, 0.0, -1.0]; // 1 − x²
    let apol = poly_mul(&ppol, &dpol);
    let q_num = vec![-(-u), -(v + 2.0)]; // −[(a+b+2)x − (b−a)]
    let bpol = poly_add(&poly_mul(&q_num, &dpol), &poly_scale(&ppol, -2.0 * u));
    let nf = n as f64;
    let r_num = vec![(nf - 1.0) * (nf + a + b), -u]; // −[(b−a)x − (n−1)(n+a+b)]
    let cpol = poly_add(&poly_mul(&r_num, &dpol), &poly_scale(&ppol, -u * u));

    // Leading coefficient −(n+a+b)_{n−1}/(2ⁿ (n−1)!).
    let mut lead = -1.0 / (2.0f64.powi(n as i32) * factorial(n - 1));
    for j in 0..(n - 1) {
        lead *= nf + a + b + j as f64;
    }

    // Residual rows T[k][j] for powers k = 0..n+1 of A y″ + B y′ + C y.
    let rows = n + 2;
    let mut t = vec![vec![0.0f64; n + 1]; rows];
    for j in 0..=n {
        let jf = j as f64;
        for (m, &am) in apol.iter().enumerate() {
            if j >= 2 && j - 2 + m < rows {
                t[j - 2 + m][j] += am * jf * (jf - 1.0);
            }
        }
        for (m, &bm) in bpol.iter().enumerate() {
            if j >= 1 && j - 1 + m < rows {
                t[j - 1 + m][j] += bm * jf;
            }
        }
        for (m, &cm) in cpol.iter().enumerate() {
            if j + m < rows {
                t[j + m][j] += cm;
            }
        }
    }
    if n == 1 {
        // Single unknown c₀; take the k=0 residual row directly.
        let c0 = -t[0][1] * lead / t[0][0];
        return Ok(PolyCoeffs::new(vec![c64(c0), c64(lead)]));
    }
    let mat = nalgebra::DMatrix::from_fn(rows, n, |k, j| t[k][j]);
    let rhs = nalgebra::DVector::from_fn(rows, |k, _| -t[k][n] * lead);
    let svd = mat.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Numerical(format!("X1 Jacobi ansatz solve failed: {e}")))?;
    let residual = (&mat * &sol - &rhs).norm() / (1.0 + rhs.norm());
    if residual > 1e-8 {
        return Err(Error::Numerical(format!(
            "X1 Jacobi ansatz system inconsistent (residual {residual:.2e})"
        )));
    }
    let mut coeffs: Vec<Complex64> = sol.iter().map(|&x| c64(x)).collect();
    coeffs.push(c64(lead));
    Ok(PolyCoeffs::new(coeffs))
}

/// Evaluates P̂_n^{(a,b)} at a complex point.
pub fn x1_jacobi(n: usize, a: f64, b: f64, x: Complex64) -> Result<Complex64> {
    Ok(x1_jacobi_coeffs(n, a, b)?.eval(x))
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

fn poly_add(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len().max(q.len())];
    for (i, &pi) in p.iter().enumerate() {
        out[i] += pi;
    }
    for (j, &qj) in q.iter().enumerate() {
        out[j] += qj;
    }
    out
}

fn poly_scale(p: &[f64], s: f64) -> Vec<f64> {
    p.iter().map(|&x| x * s).collect()
}

/// Deformed Hermite polynomial 𝓗_n(y,Λ), evaluated through its Jacobi
/// representation 𝓗_n = n!(2i√Λ)ⁿ P_n^{(−1/2−1/Λ, −1/2−1/Λ)}(iy√Λ).
/// The identity guarantees a real value; a residual imaginary part beyond
/// tolerance signals recurrence trouble and is reported as an error.
pub fn deformed_hermite(n: usize, y: f64, lam: f64) -> Result<f64> {
    if lam == 0.0 {
        return Err(Error::Domain(
            "deformation parameter must be nonzero (use the classical Hermite for lam = 0)".into(),
        ));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let sqrt_lam = Complex64::new(lam, 0.0).sqrt();
    let aa = c64(-0.5 - 1.0 / lam);
    let arg = Complex64::new(0.0, 1.0) * sqrt_lam * y;
    let p = jacobi_p(n, aa, aa, arg);
    let pref = (Complex64::new(0.0, 2.0) * sqrt_lam).powu(n as u32) * factorial(n);
    let val = pref * p;
    if val.im.abs() > 1e-9 * val.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "deformed Hermite evaluation lost reality: imaginary part {:.3e}",
            val.im
        )));
    }
    Ok(val.re)
}
