//! Scalar abstraction.

use nalgebra as na;

use crate::Complex;

/// Real scalar the simulation is generic over.
pub trait Real: na::RealField + Copy + std::fmt::LowerExp {
    /// Relative machine epsilon.
    fn eps() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        na::convert(x)
    }

    fn from_count(n: usize) -> Self {
        na::convert(n as f64)
    }

    fn as_f64(self) -> f64 {
        self.to_subset().unwrap_or(f64::NAN)
    }

    fn frac_1_sqrt_2() -> Self {
        Self::lit(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// `(sin x, cos x)` with bit-identical results in every build profile.
    fn sin_cos_portable(self) -> (Self, Self);

    fn sin_portable(self) -> Self {
        self.sin_cos_portable().0
    }

    fn cos_portable(self) -> Self {
        self.sin_cos_portable().1
    }
}

impl Real for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }

    fn sin_cos_portable(self) -> (Self, Self) {
        (libm::sinf(self), libm::cosf(self))
    }
}

impl Real for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }

    fn sin_cos_portable(self) -> (Self, Self) {
        (libm::sin(self), libm::cos(self))
    }
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos_portable();
    Complex::new(c, s)
}

/// `x + 0i`.
#[inline]
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// The imaginary unit.
#[inline]
pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `|z|`.
#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}

/// `arg z` in `(−π, π]`.
#[inline]
pub fn phase<T: Real>(z: Complex<T>) -> T {
    z.im.atan2(z.re)
}

/// `sin(s·t/2)/s`, continuous through `s = 0` where it tends to `t/2`.
#[inline]
pub fn half_sinc<T: Real>(s: T, t: T) -> T {
    let two = T::lit(2.0);
    if s == T::zero() {
        t / two
    } else {
        (s * t / two).sin_portable() / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_sinc_is_continuous_at_zero() {
        let t = 0.7_f64;
        assert_eq!(half_sinc(0.0, t), 0.35);
        assert!((half_sinc(1e-9, t) - 0.35).abs() < 1e-15);
    }

    #[test]
    fn cis_is_unit_modulus() {
        for k in 0..20 {
            let z = cis(0.37_f64 * k as f64);
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn f32_literals() {
        assert_eq!(<f32 as Real>::lit(0.5), 0.5_f32);
        assert_eq!(<f32 as Real>::from_count(3), 3.0_f32);
    }
}
