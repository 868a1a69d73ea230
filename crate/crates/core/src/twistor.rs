//! Fiberwise model of `TM ⊗ Σ_r ≅ Σ_{r-1} ⊕ Σ_{r+1} ⊕ Ker_r`.
//!
//! An element `ξ = Σ_k e_k ⊗ ξ_k` is stored as its `2m` spinor components.
//! The symbols of `D^±` are `σ^±(ξ) = Σ_k e_k^± · ξ_k`, and the projection onto
//! `Ker_r` is the pointwise Kählerian twistor projector.

use crate::error::{Error, Result};
use crate::fock::SpinorModule;
use crate::linalg::{self, Matrix};
use crate::scalar::{binomial, Scalar, C64};

/// Clifford matrices `e_k^±` and grading projectors, cached per module.
#[derive(Clone, Debug)]
pub struct TwistorContext<T> {
    module: SpinorModule,
    plus: Vec<Matrix<T>>,
    minus: Vec<Matrix<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistorElement<T> {
    r: usize,
    components: Vec<Vec<T>>,
}

impl<T: Scalar> TwistorElement<T> {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn components(&self) -> &[Vec<T>] {
        &self.components
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| linalg::norm_sqr(c)).sum()
    }
}

impl<T: Scalar> TwistorContext<T> {
    pub fn new(module: SpinorModule) -> Self {
        let n = 2 * module.m();
        let plus = (0..n).map(|k| module.clifford_plus::<T>(k)).collect();
        let minus = (0..n).map(|k| module.clifford_minus::<T>(k)).collect();
        Self {
            module,
            plus,
            minus,
        }
    }

    pub fn module(&self) -> &SpinorModule {
        &self.module
    }

    fn m(&self) -> usize {
        self.module.m()
    }

    /// Residual of `v` against `Σ_r`: the largest coefficient outside grading `r`.
    fn grading_residual(&self, v: &[T], r: usize) -> f64 {
        v.iter()
            .enumerate()
            .filter(|(i, _)| self.module.grading(*i) != r)
            .map(|(_, c)| c.abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn element(&self, r: usize, components: Vec<Vec<T>>) -> Result<TwistorElement<T>> {
        self.module.check_grading(r as i64)?;
        if components.len() != 2 * self.m() {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.m(),
                found: components.len(),
            });
        }
        let tol = if T::EXACT { 0.0 } else { 1e-12 };
        for (index, c) in components.iter().enumerate() {
            if c.len() != self.module.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.module.dim(),
                    found: c.len(),
                });
            }
            let residual = self.grading_residual(c, r);
            if residual > tol {
                return Err(Error::GradingMismatch { index, r, residual });
            }
        }
        Ok(TwistorElement { r, components })
    }

    /// `ξ = Σ_k e_k ⊗ c(e_k^∓) ψ`, the image of a spinor under the adjoint of `σ^±`
    /// (up to scale).
    pub fn lift_minus(&self, psi: &[T], r: usize) -> Result<TwistorElement<T>> {
        let comps = self.minus.iter().map(|m| m.apply(psi)).collect();
        self.element(r, comps)
    }

    pub fn lift_plus(&self, psi: &[T], r: usize) -> Result<TwistorElement<T>> {
        let comps = self.plus.iter().map(|m| m.apply(psi)).collect();
        self.element(r, comps)
    }

    fn contract(&self, ops: &[Matrix<T>], xi: &TwistorElement<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.module.dim()];
        for (op, c) in ops.iter().zip(&xi.components) {
            linalg::axpy(&T::one(), &op.apply(c), &mut out);
        }
        out
    }

    /// `σ^+(ξ) = Σ_k e_k^+ · ξ_k ∈ Σ_{r+1}`.
    pub fn sigma_plus(&self, xi: &TwistorElement<T>) -> Vec<T> {
        self.contract(&self.plus, xi)
    }

    /// `σ^-(ξ) = Σ_k e_k^- · ξ_k ∈ Σ_{r-1}`.
    pub fn sigma_minus(&self, xi: &TwistorElement<T>) -> Vec<T> {
        self.contract(&self.minus, xi)
    }

    fn coefficients(&self, r: usize) -> (T, T) {
        let m = self.m() as i64;
        let r = r as i64;
        (
            T::from_frac(1, 2 * (m - r + 1)),
            T::from_frac(1, 2 * (r + 1)),
        )
    }

    /// `P(ξ)_k = ξ_k + e_k^+·σ^-(ξ) / (2(m-r+1)) + e_k^-·σ^+(ξ) / (2(r+1))`.
    pub fn ker_projector(&self, xi: &TwistorElement<T>) -> TwistorElement<T> {
        let (c_minus, c_plus) = self.coefficients(xi.r);
        let sm = self.sigma_minus(xi);
        let sp = self.sigma_plus(xi);
        let components = xi
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut out = c.clone();
                linalg::axpy(&c_minus, &self.plus[k].apply(&sm), &mut out);
                linalg::axpy(&c_plus, &self.minus[k].apply(&sp), &mut out);
                out
            })
            .collect();
        TwistorElement {
            r: xi.r,
            components,
        }
    }

    /// `|ξ|² - |σ⁺ξ|²/(2(r+1)) - |σ⁻ξ|²/(2(m-r+1)) - |Pξ|²`.
    pub fn norm_identity_residual(&self, xi: &TwistorElement<T>) -> f64 {
        let m = self.m() as f64;
        let r = xi.r as f64;
        let lhs = xi.norm_sqr();
        let rhs = linalg::norm_sqr(&self.sigma_plus(xi)) / (2.0 * (r + 1.0))
            + linalg::norm_sqr(&self.sigma_minus(xi)) / (2.0 * (m - r + 1.0))
            + self.ker_projector(xi).norm_sqr();
        (lhs - rhs).abs()
    }

    /// Matrix of the kernel projector on `TM ⊗ Σ_r`, in the basis
    /// `(k, b)` ↦ `k * dim Σ_r + b` with `b` running over [`SpinorModule::basis_of_grading`].
    pub fn ker_projector_matrix(&self, r: usize) -> Result<Matrix<T>> {
        self.module.check_grading(r as i64)?;
        let basis = self.module.basis_of_grading(r);
        let block = basis.len();
        let n = 2 * self.m();
        let mut out = Matrix::zeros(n * block, n * block);
        for k in 0..n {
            for (bi, &b) in basis.iter().enumerate() {
                let mut comps = vec![vec![T::zero(); self.module.dim()]; n];
                comps[k][b] = T::one();
                let image = self.ker_projector(&TwistorElement {
                    r,
                    components: comps,
                });
                for (kk, c) in image.components.iter().enumerate() {
                    for (bj, &bb) in basis.iter().enumerate() {
                        if !c[bb].is_zero() {
                            out.set(kk * block + bj, k * block + bi, c[bb].clone());
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rank of `Ker_r` read off as the trace of the (idempotent) kernel projector.
    pub fn ker_rank_by_trace(&self, r: usize) -> Result<T> {
        Ok(self.ker_projector_matrix(r)?.trace())
    }
}

impl TwistorContext<C64> {
    /// Numeric rank of the kernel projector from its singular values.
    pub fn ker_rank_numeric(&self, r: usize, tol: f64) -> Result<usize> {
        let sv = linalg::singular_values(&self.ker_projector_matrix(r)?);
        Ok(sv.iter().filter(|&&s| s > tol).count())
    }
}

/// `2m·C(m,r) - C(m,r-1) - C(m,r+1)`.
pub fn expected_ker_rank(m: usize, r: usize) -> i64 {
    let (m, r) = (m as i64, r as i64);
    2 * m * binomial(m, r) as i64 - binomial(m, r - 1) as i64 - binomial(m, r + 1) as i64
}
