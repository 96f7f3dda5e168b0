//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the k
//! lowest eigenvalues, then inverse iteration (LU with partial pivoting)
//! for the eigenvectors.  Dense O(n³) routines are avoided on purpose —
//! the finite-difference oracles run at n of a few thousand.

use crate::{Error, Result};
use rand::{RngExt, SeedableRng};

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly
/// below `x`, by counting negative Sturm-sequence pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0usize;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let denom = if d.abs() < f64::MIN_POSITIVE.sqrt() {
            f64::MIN_POSITIVE.sqrt().copysign(if d < 0.0 { -1.0 } else { 1.0 })
        } else {
            d
        };
        d = (diag[i] - x) - off[i - 1] * off[i - 1] / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues by bisection on the Sturm count.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if k == 0 || k > n {
        return Err(Error::Domain(format!(
            "requested {k} eigenvalues of a {n}x{n} matrix"
        )));
    }
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = hi.abs().max(lo.abs()).max(1.0);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (lo, hi);
        // Invariant: count(a) ≤ j < count(b).
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if sturm_count(diag, off, m) > j {
                b = m;
            } else {
                a = m;
            }
            if b - a <= 1e-15 * scale {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Solves (T − σ)x = b for tridiagonal T by LU with partial pivoting
/// (fill-in limited to a second superdiagonal).
fn solve_shifted(diag: &[f64], off: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let tiny = 1e-300;
    let mut u0 = vec![0.0f64; n];
    let mut u1 = vec![0.0f64; n];
    let mut u2 = vec![0.0f64; n];
    let mut rhs = b.to_vec();
    // Current row entries at columns (i, i+1, i+2).
    let mut pr = (
        diag[0] - sigma,
        if n > 1 { off[0] } else { 0.0 },
        0.0f64,
    );
    for i in 0..n - 1 {
        let nr = (
            off[i],
            diag[i + 1] - sigma,
            if i + 1 < n - 1 { off[i + 1] } else { 0.0 },
        );
        if pr.0.abs() >= nr.0.abs() {
            let p = if pr.0 == 0.0 { tiny } else { pr.0 };
            let m = nr.0 / p;
            u0[i] = p;
            u1[i] = pr.1;
            u2[i] = pr.2;
            pr = (nr.1 - m * pr.1, nr.2 - m * pr.2, 0.0);
            rhs[i + 1] -= m * rhs[i];
        } else {
            let m = pr.0 / nr.0;
            u0[i] = nr.0;
            u1[i] = nr.1;
            u2[i] = nr.2;
            pr = (pr.1 - m * nr.1, pr.2 - m * nr.2, 0.0);
            let bi = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = bi - m * rhs[i];
        }
    }
    u0[n - 1] = if pr.0 == 0.0 { tiny } else { pr.0 };
    let mut x = vec![0.0f64; n];
    x[n - 1] = rhs[n - 1] / u0[n - 1];
    if n >= 2 {
        x[n - 2] = (rhs[n - 2] - u1[n - 2] * x[n - 1]) / u0[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (rhs[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / u0[i];
    }
    x
}

/// Inverse-iteration eigenvector for an already-converged eigenvalue.
/// Previously found vectors of a near-degenerate cluster are projected out
/// between iterations.
pub fn eigenvector(
    diag: &[f64],
    off: &[f64],
    lambda: f64,
    neighbors: &[(f64, &[f64])],
) -> Result<Vec<f64>> {
    let n = diag.len();
    let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()))
        + 2.0 * off.iter().fold(0.0f64, |m, o| m.max(o.abs()));
    let sigma = lambda + 1e-13 * scale.max(1.0);
    let cluster_tol = 1e-7 * scale.max(1.0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    normalize(&mut v);
    let mut res = f64::INFINITY;
    for _ in 0..12 {
        let mut w = solve_shifted(diag, off, sigma, &v);
        for (mu, u) in neighbors {
            if (mu - lambda).abs() < cluster_tol {
                let dot: f64 = w.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
                for (wi, ui) in w.iter_mut().zip(u.iter()) {
                    *wi -= dot * ui;
                }
            }
        }
        normalize(&mut w);
        res = residual_norm(diag, off, lambda, &w);
        v = w;
        if res <= 1e-10 * scale.max(1.0) {
            break;
        }
    }
    if res > 1e-8 * scale.max(1.0) {
        return Err(Error::Numerical(format!(
            "inverse iteration stalled at residual {res:.3e} for eigenvalue {lambda:.6e}"
        )));
    }
    // Deterministic sign: make the largest-magnitude component positive.
    if let Some(m) = v
        .iter()
        .cloned()
        .reduce(|a, b| if a.abs() >= b.abs() { a } else { b })
    {
        if m < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
    }
    Ok(v)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// ‖Tv − λv‖₂ for unit v.
pub fn residual_norm(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut s = 0.0;
    for i in 0..n {
        let mut r = (diag[i] - lambda) * v[i];
        if i > 0 {
            r += off[i - 1] * v[i - 1];
        }
        if i < n - 1 {
            r += off[i] * v[i + 1];
        }
        s += r * r;
    }
    s.sqrt()
}
