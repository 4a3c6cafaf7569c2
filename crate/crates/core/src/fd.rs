//! Central finite differences for holomorphic maps of complex parameters.
//!
//! Real steps suffice: for a holomorphic map the derivative along a real
//! direction is the complex derivative. The five-point stencil is exact
//! for polynomials of degree at most four, which covers every cone
//! parametrization here, so the only error is rounding.

use crate::linalg::{c, CMat, CVec, C64};

pub fn directional<F: Fn(&CVec) -> CVec>(f: &F, z: &CVec, dir: &CVec, h: f64) -> CVec {
    let at = |s: f64| f(&(z + dir * c(s * h)));
    (at(-2.0) - at(-1.0) * c(8.0) + at(1.0) * c(8.0) - at(2.0)) / c(12.0 * h)
}

/// Complex Jacobian, one column per parameter.
pub fn jacobian<F: Fn(&CVec) -> CVec>(f: &F, z: &CVec, h: f64) -> CMat {
    let n = f(z).len();
    let mut j = CMat::zeros(n, z.len());
    for k in 0..z.len() {
        let mut dir = CVec::zeros(z.len());
        dir[k] = c(1.0);
        j.set_column(k, &directional(f, z, &dir, h));
    }
    j
}

/// Jacobian over real and imaginary parameter directions: `2p` columns,
/// the real-direction columns first.
pub fn jacobian_re_im<F: Fn(&CVec) -> CVec>(f: &F, z: &CVec, h: f64) -> CMat {
    let p = z.len();
    let n = f(z).len();
    let mut j = CMat::zeros(n, 2 * p);
    for k in 0..p {
        for (slot, unit) in [(k, c(1.0)), (p + k, C64::i())] {
            let mut dir = CVec::zeros(p);
            dir[k] = unit;
            j.set_column(slot, &directional(f, z, &dir, h));
        }
    }
    j
}

/// Gradient of a holomorphic scalar function.
pub fn gradient<G: Fn(&CVec) -> C64>(g: &G, z: &CVec, h: f64) -> CVec {
    let wrapped = |x: &CVec| CVec::from_element(1, g(x));
    jacobian(&wrapped, z, h).row(0).transpose()
}
