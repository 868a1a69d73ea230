//! Fock model of the spinor fiber `Λ^{0,*} ℂ^m` of a Kähler spin^c manifold.
//!
//! Basis spinors are subsets of `{0, .., m-1}` stored as bitmasks; the grading
//! of a basis spinor is its cardinality. With the real orthonormal frame
//! `e_{2j}, e_{2j+1} = J e_{2j}` (0-based) and creation/annihilation operators
//! `a_j^†, a_j` (Jordan-Wigner signs), Clifford multiplication is
//!
//! ```text
//! e_{2j}   ↦ a_j^† - a_j
//! e_{2j+1} ↦ i (a_j^† + a_j)
//! ```
//!
//! so that `X^+ = ½(X - iJX)` acts by creation and `X^- = ½(X + iJX)` by
//! minus annihilation. In particular `X^+` raises the grading by one, `X^-`
//! lowers it, and the Kähler form acts on grading `r` by `i(2r - m)`.

use num::traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{binomial, Scalar};

pub const MIN_M: usize = 1;
pub const MAX_M: usize = 12;

/// The `2^m`-dimensional spinor module with its `Σ_r` grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorModule {
    m: usize,
}

/// A vector of `ℝ^{2m} ≅ ℂ^m`, or its complexification, in the real frame.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordVector<T> {
    components: Vec<T>,
}

/// Dense operator on the spinor module with an optional grading shift.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorEndomorphism<T> {
    pub matrix: Matrix<T>,
    pub shift: Option<i8>,
}

impl<T: Scalar> CliffordVector<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        if components.is_empty() || !components.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: 2 * (components.len() / 2).max(1),
                found: components.len(),
            });
        }
        Ok(Self { components })
    }

    /// Real frame vector `e_k`, `0 <= k < 2m`.
    pub fn basis(m: usize, k: usize) -> Self {
        let mut components = vec![T::zero(); 2 * m];
        components[k] = T::one();
        Self { components }
    }

    pub fn zero(m: usize) -> Self {
        Self {
            components: vec![T::zero(); 2 * m],
        }
    }

    pub fn components(&self) -> &[T] {
        &self.components
    }

    /// Complex dimension of the ambient space.
    pub fn m(&self) -> usize {
        self.components.len() / 2
    }

    /// Standard complex structure, `J e_{2j} = e_{2j+1}`, `J e_{2j+1} = -e_{2j}`.
    pub fn j_action(&self) -> Self {
        let mut out = vec![T::zero(); self.components.len()];
        for j in 0..self.m() {
            out[2 * j + 1] = self.components[2 * j].clone();
            out[2 * j] = -self.components[2 * j + 1].clone();
        }
        Self { components: out }
    }

    /// `X^+ = ½(X - iJX)`, the `T_{1,0}` component.
    pub fn plus(&self) -> Self {
        self.split_with(-T::imag_unit())
    }

    /// `X^- = ½(X + iJX)`, the `T_{0,1}` component.
    pub fn minus(&self) -> Self {
        self.split_with(T::imag_unit())
    }

    fn split_with(&self, coeff: T) -> Self {
        let half = T::from_frac(1, 2);
        let jx = self.j_action();
        let components = self
            .components
            .iter()
            .zip(&jx.components)
            .map(|(x, y)| half.clone() * (x.clone() + coeff.clone() * y.clone()))
            .collect();
        Self { components }
    }

    pub fn scaled(&self, s: &T) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|x| s.clone() * x.clone())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    /// Complex-bilinear extension of the Euclidean metric.
    pub fn bilinear(&self, other: &Self) -> T {
        self.components
            .iter()
            .zip(&other.components)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn is_real(&self) -> bool {
        self.components.iter().all(|c| c.conj() == *c)
    }
}

impl<T: Scalar> SpinorEndomorphism<T> {
    pub fn new(matrix: Matrix<T>) -> Self {
        Self {
            matrix,
            shift: None,
        }
    }

    pub fn with_shift(matrix: Matrix<T>, shift: i8) -> Self {
        Self {
            matrix,
            shift: Some(shift),
        }
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        let shift = match (self.shift, rhs.shift) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Self {
            matrix: self.matrix.matmul(&rhs.matrix),
            shift,
        }
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.matrix.apply(v)
    }
}

impl SpinorModule {
    pub fn new(m: usize) -> Result<Self> {
        if !(MIN_M..=MAX_M).contains(&m) {
            return Err(Error::DimensionOutOfRange {
                m,
                min: MIN_M,
                max: MAX_M,
            });
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// Grading `r` of a basis spinor.
    pub fn grading(&self, index: usize) -> usize {
        index.count_ones() as usize
    }

    /// Basis indices spanning `Σ_r`.
    pub fn basis_of_grading(&self, r: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.grading(i) == r).collect()
    }

    /// Dimension of each `Σ_r`, `r = 0..=m`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = vec![0; self.m + 1];
        for i in 0..self.dim() {
            out[self.grading(i)] += 1;
        }
        out
    }

    pub fn check_grading(&self, r: i64) -> Result<usize> {
        if r < 0 || r as usize > self.m {
            return Err(Error::GradingOutOfRange { r, m: self.m });
        }
        Ok(r as usize)
    }

    fn jw_sign(index: usize, j: usize) -> bool {
        (index & ((1 << j) - 1)).count_ones() % 2 == 1
    }

    /// Creation operator `a_j^†` (wedge with the j-th antiholomorphic covector).
    pub fn creation<T: Scalar>(&self, j: usize) -> Matrix<T> {
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for s in 0..self.dim() {
            if s & (1 << j) == 0 {
                let v = if Self::jw_sign(s, j) {
                    -T::one()
                } else {
                    T::one()
                };
                out.set(s | (1 << j), s, v);
            }
        }
        out
    }

    /// Annihilation operator `a_j` (contraction), the adjoint of [`Self::creation`].
    pub fn annihilation<T: Scalar>(&self, j: usize) -> Matrix<T> {
        self.creation::<T>(j).adjoint()
    }

    /// Clifford multiplication by the real frame vector `e_k`.
    pub fn clifford_basis<T: Scalar>(&self, k: usize) -> Matrix<T> {
        let j = k / 2;
        let up = self.creation::<T>(j);
        let down = self.annihilation::<T>(j);
        if k.is_multiple_of(2) {
            &up - &down
        } else {
            (&up + &down).scale(&T::imag_unit())
        }
    }

    pub fn clifford<T: Scalar>(&self, v: &CliffordVector<T>) -> Result<SpinorEndomorphism<T>> {
        if v.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.m,
                found: v.components.len(),
            });
        }
        let mut matrix = Matrix::zeros(self.dim(), self.dim());
        for (k, c) in v.components().iter().enumerate() {
            if !c.is_zero() {
                matrix = &matrix + &self.clifford_basis::<T>(k).scale(c);
            }
        }
        let shift = if v.is_zero() {
            None
        } else if v.minus().is_zero() {
            Some(1)
        } else if v.plus().is_zero() {
            Some(-1)
        } else {
            None
        };
        Ok(SpinorEndomorphism { matrix, shift })
    }

    /// Clifford multiplication by `e_k^+`.
    pub fn clifford_plus<T: Scalar>(&self, k: usize) -> Matrix<T> {
        self.clifford(&CliffordVector::<T>::basis(self.m, k).plus())
            .expect("frame vector has module dimension")
            .matrix
    }

    /// Clifford multiplication by `e_k^-`.
    pub fn clifford_minus<T: Scalar>(&self, k: usize) -> Matrix<T> {
        self.clifford(&CliffordVector::<T>::basis(self.m, k).minus())
            .expect("frame vector has module dimension")
            .matrix
    }

    /// Kähler form action `½ Σ_k e_k · J e_k`, assembled from Clifford products.
    pub fn omega_action<T: Scalar>(&self) -> SpinorEndomorphism<T> {
        let mut acc = Matrix::zeros(self.dim(), self.dim());
        for k in 0..2 * self.m {
            let e = CliffordVector::<T>::basis(self.m, k);
            let ce = self.clifford(&e).expect("dimension").matrix;
            let cje = self.clifford(&e.j_action()).expect("dimension").matrix;
            acc = &acc + &ce.matmul(&cje);
        }
        SpinorEndomorphism::with_shift(acc.scale(&T::from_frac(1, 2)), 0)
    }

    /// Orthogonal projector onto `Σ_r`.
    pub fn sigma_projector<T: Scalar>(&self, r: i64) -> Result<SpinorEndomorphism<T>> {
        let r = self.check_grading(r)?;
        let matrix = Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j && self.grading(i) == r {
                T::one()
            } else {
                T::zero()
            }
        });
        Ok(SpinorEndomorphism::with_shift(matrix, 0))
    }

    /// Complex volume element `i^m e_1 ⋯ e_{2m}`.
    pub fn volume_element<T: Scalar>(&self) -> SpinorEndomorphism<T> {
        let mut acc = Matrix::identity(self.dim());
        for k in 0..2 * self.m {
            acc = acc.matmul(&self.clifford_basis::<T>(k));
        }
        let mut phase = T::one();
        for _ in 0..self.m {
            phase = phase.i_times();
        }
        SpinorEndomorphism::with_shift(acc.scale(&phase), 0)
    }

    /// Residuals of the Kähler-Einstein contraction identities on `Σ_r`, with
    /// `Ric = (S/2m) id` and `ρ = (S/2m) Ω`.
    pub fn contraction_identities<T: Scalar>(
        &self,
        r: i64,
        scalar_curvature: &T,
    ) -> Result<ContractionReport> {
        let r = self.check_grading(r)?;
        let n = self.dim();
        let proj = self.sigma_projector::<T>(r as i64)?.matrix;
        let ric_factor = scalar_curvature.clone() / T::from_int(2 * self.m as i64);
        let rho = self.omega_action::<T>().matrix.scale(&ric_factor);
        let ricci = |v: &CliffordVector<T>| v.scaled(&ric_factor);

        let mut plus_minus = Matrix::zeros(n, n);
        let mut minus_plus = Matrix::zeros(n, n);
        let mut e_ric = Matrix::zeros(n, n);
        let mut minus_ric_plus = Matrix::zeros(n, n);
        let mut plus_ric_minus = Matrix::zeros(n, n);
        for k in 0..2 * self.m {
            let e = CliffordVector::<T>::basis(self.m, k);
            let cl = |v: &CliffordVector<T>| self.clifford(v).expect("dimension").matrix;
            let (ep, em) = (cl(&e.plus()), cl(&e.minus()));
            plus_minus = &plus_minus + &ep.matmul(&em);
            minus_plus = &minus_plus + &em.matmul(&ep);
            e_ric = &e_ric + &cl(&e).matmul(&cl(&ricci(&e)));
            minus_ric_plus = &minus_ric_plus + &em.matmul(&cl(&ricci(&e.plus())));
            plus_ric_minus = &plus_ric_minus + &ep.matmul(&cl(&ricci(&e.minus())));
        }

        let id = Matrix::<T>::identity(n);
        let minus_half_s = id.scale(&(scalar_curvature.clone() * T::from_frac(-1, 2)));
        let i_rho = rho.scale(&T::imag_unit());
        let expected = [
            id.scale(&T::from_int(-2 * r as i64)),
            id.scale(&T::from_int(-2 * (self.m - r) as i64)),
            id.scale(&-scalar_curvature.clone()),
            &minus_half_s - &i_rho,
            &minus_half_s + &i_rho,
        ];
        let actual = [
            plus_minus,
            minus_plus,
            e_ric,
            minus_ric_plus,
            plus_ric_minus,
        ];
        let residuals: Vec<f64> = actual
            .iter()
            .zip(&expected)
            .map(|(a, e)| (&a.matmul(&proj) - &e.matmul(&proj)).max_abs())
            .collect();
        Ok(ContractionReport { r, residuals })
    }
}

/// Residuals of the five contraction identities on one `Σ_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionReport {
    pub r: usize,
    /// `Σ e⁺e⁻`, `Σ e⁻e⁺`, `Σ e·Ric(e)`, `Σ e⁻·Ric(e⁺)`, `Σ e⁺·Ric(e⁻)`.
    pub residuals: Vec<f64>,
}

impl ContractionReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Expected dimension of `Σ_r`.
pub fn sigma_rank(m: usize, r: i64) -> u64 {
    binomial(m as i64, r)
}
