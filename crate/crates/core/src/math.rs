//! Float math that resolves to the std intrinsics when available and to
//! libm (through `num_traits::Float`) under `no_std`.

#![allow(dead_code)]

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    num_traits::Float::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    num_traits::Float::cos(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    num_traits::Float::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    num_traits::Float::ln(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    num_traits::Float::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    num_traits::Float::abs(x)
}

#[inline]
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    num_traits::Float::powi(x, n)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    num_traits::Float::hypot(x, y)
}

#[inline]
pub(crate) fn fract(x: f64) -> f64 {
    num_traits::Float::fract(x)
}
