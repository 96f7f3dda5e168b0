//! Shared numerical toolbox: finite-difference differentiation, adaptive
//! quadrature, cumulative integrals on uniform grids, and a bisection root
//! finder.  Everything here is pure and allocation-light; the heavier
//! machinery (eigensolvers, series) lives in the modules that need it.

use num_complex::Complex64;

/// `n` evenly spaced points covering `[a, b]` inclusive.
///
/// Panics if `n < 2`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// First derivative by the five-point central stencil, O(h⁴).
pub fn deriv1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Second derivative by the five-point central stencil, O(h⁴).
pub fn deriv2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

/// Complex-valued counterpart of [`deriv1`] (derivative along the real axis).
pub fn deriv1_c<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> Complex64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Complex-valued counterpart of [`deriv2`].
pub fn deriv2_c<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> Complex64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Trapezoid rule for samples on a uniform grid with spacing `h`.
pub fn trapezoid(y: &[f64], h: f64) -> f64 {
    if y.len() < 2 {
        return 0.0;
    }
    let interior: f64 = y[1..y.len() - 1].iter().sum();
    h * (0.5 * (y[0] + y[y.len() - 1]) + interior)
}

/// Cumulative integral I(x_i) = ∫_{x_0}^{x_i} y dx of uniform samples,
/// fourth-order accurate (Adams–Moulton three-step body with matching
/// Newton–Cotes starting formulas).
pub fn cumulative_integral(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        // Too short for the cubic formulas; fall back to trapezoids.
        for i in 1..n {
            out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
        }
        return out;
    }
    out[1] = h / 24.0 * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]);
    out[2] = out[1] + h / 24.0 * (-y[0] + 13.0 * y[1] + 13.0 * y[2] - y[3]);
    for i in 2..n - 1 {
        out[i + 1] = out[i] + h / 24.0 * (y[i - 2] - 5.0 * y[i - 1] + 19.0 * y[i] + 9.0 * y[i + 1]);
    }
    out
}

/// Bisection on a bracketing interval: `f(a)` and `f(b)` must have opposite
/// signs.  Returns the midpoint of the final bracket of width ≤ `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linspace_endpoints_and_spacing() {
        let xs = linspace(-1.0, 2.0, 7);
        assert_eq!(xs.len(), 7);
        assert_abs_diff_eq!(xs[0], -1.0);
        assert_abs_diff_eq!(xs[6], 2.0);
        assert_abs_diff_eq!(xs[1] - xs[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn five_point_first_derivative_of_sin() {
        let d = deriv1(f64::sin, 1.0, 2e-3);
        assert_abs_diff_eq!(d, 1.0f64.cos(), epsilon = 1e-11);
    }

    #[test]
    fn five_point_second_derivative_of_exp() {
        let d = deriv2(f64::exp, 0.3, 2e-3);
        assert_abs_diff_eq!(d, 0.3f64.exp(), epsilon = 1e-9);
    }

    #[test]
    fn simpson_gaussian_integral() {
        let v = integrate(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert_abs_diff_eq!(v, std::f64::consts::PI.sqrt(), epsilon = 1e-11);
    }

    #[test]
    fn cumulative_integral_of_cos_is_sin() {
        let n = 201;
        let h = 2.0 / (n - 1) as f64;
        let y: Vec<f64> = (0..n).map(|i| (h * i as f64).cos()).collect();
        let acc = cumulative_integral(&y, h);
        for (i, v) in acc.iter().enumerate() {
            let exact = (h * i as f64).sin();
            assert_abs_diff_eq!(*v, exact, epsilon = 1e-9);
        }
    }

    #[test]
    fn bisect_finds_pi_half() {
        let root = bisect(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert_abs_diff_eq!(root, std::f64::consts::FRAC_PI_2, epsilon = 1e-11);
    }

    #[test]
    fn bisect_rejects_non_bracketing() {
        assert!(bisect(f64::cos, 0.1, 0.2, 1e-12).is_none());
    }
}
