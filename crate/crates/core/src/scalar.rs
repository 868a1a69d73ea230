//! Scalar fields shared by the exact and floating-point code paths.
//!
//! Every operator in the Fock model and the form algebra has Gaussian-integer
//! or Gaussian-rational entries, so the same generic code runs over
//! [`CRational`] (exact) and [`C64`] (floating point).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex;
use num::traits::{One, Zero};
use num::{BigInt, BigRational};

pub type C64 = Complex<f64>;
pub type CRational = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and residuals are either zero or a genuine failure.
    const EXACT: bool;

    fn from_int(n: i64) -> Self;
    fn from_frac(num: i64, den: i64) -> Self;
    fn imag_unit() -> Self;
    fn conj(&self) -> Self;
    fn abs_f64(&self) -> f64;
    fn to_c64(&self) -> C64;

    fn i_times(&self) -> Self {
        Self::imag_unit() * self.clone()
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }
    fn imag_unit() -> Self {
        Complex::i()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}

impl Scalar for CRational {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        Complex::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> C64 {
        use num::ToPrimitive;
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Exact rational as a Gaussian rational with zero imaginary part.
pub fn rational(q: &BigRational) -> CRational {
    Complex::new(q.clone(), BigRational::zero())
}

/// Binomial coefficient with the convention C(n, k) = 0 for k < 0 or k > n.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_boundaries() {
        assert_eq!(binomial(5, -1), 0);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(0, 0), 1);
        let row: Vec<u64> = (0..=6).map(|k| binomial(6, k)).collect();
        assert_eq!(row, vec![1, 6, 15, 20, 15, 6, 1]);
    }

    #[test]
    fn exact_field_division() {
        let a = CRational::from_int(3) + CRational::imag_unit();
        let b = CRational::from_frac(1, 2) - CRational::imag_unit();
        assert_eq!((a.clone() / b.clone()) * b, a);
        assert_eq!(CRational::imag_unit().i_times(), -CRational::one());
    }
}
