//! Special functions and orthogonal-polynomial families (classical and
//! exceptional) used by every other module.

pub mod bessel;
pub mod gamma;
pub mod hyper;
pub mod poly;

pub use bessel::{bessel_i, bessel_i_ln, bessel_k, bessel_k_ln};
pub use gamma::{digamma, erf, gamma, gamma_ln, gamma_ln_real};
pub use hyper::{hyp1f1, hyp2f1, hyp2f1_with, SpecialValue};
pub use poly::{
    deformed_hermite, hermite_h, jacobi_coeffs, jacobi_p, x1_jacobi, x1_jacobi_coeffs,
    x1_laguerre, x1_laguerre_coeffs, PolyCoeffs,
};
