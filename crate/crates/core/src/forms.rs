//! Bigraded exterior forms on `ℂ^m` with the Lefschetz operators.
//!
//! A form is stored in the unitary coframe `θ_j = (e^{2j} + i e^{2j+1})/√2`
//! (type (1,0)) and `θ̄_j` (type (0,1)). Coefficients are indexed by a `2m`-bit
//! mask whose low `m` bits select `θ_A` and whose high `m` bits select `θ̄_B`;
//! the monomial is `θ_{a_1} ∧ … ∧ θ_{a_k} ∧ θ̄_{b_1} ∧ … ∧ θ̄_{b_k'}` with
//! increasing indices, and monomials are orthonormal.
//!
//! In this coframe `Ω = i Σ_j θ_j ∧ θ̄_j`, and `Λ = L^*` is
//! `-i Σ_j ι(θ̄_j) ι(θ_j)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_1_SQRT_2;

use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{CliffordVector, SpinorEndomorphism, SpinorModule};
use crate::linalg::{self, Matrix};
use crate::scalar::{binomial, CRational, Scalar, C64};

pub const MAX_FORM_M: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct FormElement<T> {
    m: usize,
    coeffs: Vec<T>,
}

fn check_form_dimension(m: usize) -> Result<()> {
    if !(1..=MAX_FORM_M).contains(&m) {
        return Err(Error::DimensionOutOfRange {
            m,
            min: 1,
            max: MAX_FORM_M,
        });
    }
    Ok(())
}

/// Parity of the number of generators in `mask` preceding generator `g`.
fn passes_odd(mask: usize, g: usize) -> bool {
    (mask & ((1 << g) - 1)).count_ones() % 2 == 1
}

/// Bidegree `(k, k')` of a monomial mask.
pub fn mask_bidegree(m: usize, mask: usize) -> (usize, usize) {
    let low = (1 << m) - 1;
    (
        (mask & low).count_ones() as usize,
        (mask >> m).count_ones() as usize,
    )
}

/// Masks of bidegree `(k, k')`, ascending.
pub fn masks_of_bidegree(m: usize, k: usize, kp: usize) -> Vec<usize> {
    (0..1usize << (2 * m))
        .filter(|&mask| mask_bidegree(m, mask) == (k, kp))
        .collect()
}

impl<T: Scalar> FormElement<T> {
    pub fn zero(m: usize) -> Self {
        assert!(
            (1..=MAX_FORM_M).contains(&m),
            "form dimension {m} unsupported"
        );
        Self {
            m,
            coeffs: vec![T::zero(); 1 << (2 * m)],
        }
    }

    /// The constant function `c`.
    pub fn scalar(m: usize, c: T) -> Self {
        let mut out = Self::zero(m);
        out.coeffs[0] = c;
        out
    }

    /// `c · θ_A ∧ θ̄_B` for index lists `A`, `B` (any order; sign applied).
    pub fn monomial(m: usize, holo: &[usize], antiholo: &[usize], c: T) -> Self {
        let mut out = Self::scalar(m, c);
        for &b in antiholo.iter().rev() {
            out = out.wedge_generator(m + b);
        }
        for &a in holo.iter().rev() {
            out = out.wedge_generator(a);
        }
        out
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<T>) -> Result<Self> {
        check_form_dimension(m)?;
        if coeffs.len() != 1 << (2 * m) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (2 * m),
                found: coeffs.len(),
            });
        }
        Ok(Self { m, coeffs })
    }

    /// Kähler form `Ω = i Σ θ_j ∧ θ̄_j`.
    pub fn kahler_form(m: usize) -> Self {
        Self::scalar(m, T::one()).lefschetz_l()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> &T {
        &self.coeffs[mask]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Bidegree when the form is nonzero and homogeneous.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut found = None;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let bd = mask_bidegree(self.m, mask);
            match found {
                None => found = Some(bd),
                Some(prev) if prev != bd => return None,
                _ => {}
            }
        }
        found
    }

    /// Part of total degree `t`.
    pub fn degree_part(&self, t: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| {
                if mask.count_ones() as usize == t {
                    c.clone()
                } else {
                    T::zero()
                }
            })
            .collect();
        Self { m: self.m, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Self { m: self.m, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Self { m: self.m, coeffs }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| s.clone() * c.clone()).collect(),
        }
    }

    /// Hermitian inner product with orthonormal monomials.
    pub fn inner(&self, other: &Self) -> T {
        linalg::inner(&self.coeffs, &other.coeffs)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Left wedge with the coframe generator `g` (`θ_g` for `g < m`, `θ̄_{g-m}` otherwise).
    pub fn wedge_generator(&self, g: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() || mask & (1 << g) != 0 {
                continue;
            }
            let v = if passes_odd(mask, g) {
                -c.clone()
            } else {
                c.clone()
            };
            out.coeffs[mask | (1 << g)] = v;
        }
        out
    }

    /// Interior derivative removing generator `g`; the adjoint of [`Self::wedge_generator`].
    pub fn interior_generator(&self, g: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() || mask & (1 << g) == 0 {
                continue;
            }
            let v = if passes_odd(mask, g) {
                -c.clone()
            } else {
                c.clone()
            };
            out.coeffs[mask & !(1 << g)] = v;
        }
        out
    }

    /// `L(ω) = ω ∧ Ω`.
    pub fn lefschetz_l(&self) -> Self {
        let mut out = Self::zero(self.m);
        for j in 0..self.m {
            out = out.add(&self.wedge_generator(self.m + j).wedge_generator(j));
        }
        out.scale(&T::imag_unit())
    }

    /// `Λ = L^*`.
    pub fn lefschetz_lambda(&self) -> Self {
        let mut out = Self::zero(self.m);
        for j in 0..self.m {
            out = out.add(&self.interior_generator(j).interior_generator(self.m + j));
        }
        out.scale(&-T::imag_unit())
    }
}

type Sparse<T> = BTreeMap<usize, T>;

/// Wedge (`insert`) or interior product with generator `g` on a sparse form,
/// with the same signs as the dense operators.
fn sparse_step<T: Scalar>(src: &Sparse<T>, g: usize, insert: bool) -> Sparse<T> {
    src.iter()
        .filter(|(&mask, _)| (mask & (1 << g) == 0) == insert)
        .map(|(&mask, c)| {
            (
                mask ^ (1 << g),
                if passes_odd(mask, g) {
                    -c.clone()
                } else {
                    c.clone()
                },
            )
        })
        .collect()
}

fn sparse_accumulate<T: Scalar>(acc: &mut Sparse<T>, src: Sparse<T>, s: &T) {
    for (mask, c) in src {
        let e = acc.entry(mask).or_insert_with(T::zero);
        *e = e.clone() + c * s.clone();
    }
}

fn sparse_l<T: Scalar>(src: &Sparse<T>, m: usize) -> Sparse<T> {
    let mut out = Sparse::new();
    for j in 0..m {
        sparse_accumulate(
            &mut out,
            sparse_step(&sparse_step(src, m + j, true), j, true),
            &T::imag_unit(),
        );
    }
    out
}

fn sparse_lambda<T: Scalar>(src: &Sparse<T>, m: usize) -> Sparse<T> {
    let mut out = Sparse::new();
    for j in 0..m {
        sparse_accumulate(
            &mut out,
            sparse_step(&sparse_step(src, j, false), m + j, false),
            &-T::imag_unit(),
        );
    }
    out
}

/// Max residual of `(ΛL - LΛ) ω = (m - t) ω` over all monomials of degree `t`.
pub fn sl2_commutator_residual<T: Scalar>(m: usize, t: usize) -> Result<f64> {
    check_form_dimension(m)?;
    if t > 2 * m {
        return Err(Error::OutOfDomain(format!(
            "degree t = {t} exceeds 2m = {}",
            2 * m
        )));
    }
    let mut worst: f64 = 0.0;
    for mask in (0..1usize << (2 * m)).filter(|mask| mask.count_ones() as usize == t) {
        let e: Sparse<T> = BTreeMap::from([(mask, T::one())]);
        let mut commutator = sparse_lambda(&sparse_l(&e, m), m);
        sparse_accumulate(
            &mut commutator,
            sparse_l(&sparse_lambda(&e, m), m),
            &-T::one(),
        );
        sparse_accumulate(&mut commutator, e, &-T::from_int(m as i64 - t as i64));
        worst = commutator
            .values()
            .map(Scalar::abs_f64)
            .fold(worst, f64::max);
    }
    Ok(worst)
}

/// Matrix of `Λ` from bidegree `(k, k')` to `(k-1, k'-1)` with the masks indexing
/// its columns and rows.
pub fn lambda_matrix<T: Scalar>(
    m: usize,
    k: usize,
    kp: usize,
) -> (Matrix<T>, Vec<usize>, Vec<usize>) {
    let cols = masks_of_bidegree(m, k, kp);
    let rows = if k == 0 || kp == 0 {
        Vec::new()
    } else {
        masks_of_bidegree(m, k - 1, kp - 1)
    };
    let mut mat = Matrix::zeros(rows.len(), cols.len());
    for (ci, &cm) in cols.iter().enumerate() {
        let mut e = FormElement::<T>::zero(m);
        e.coeffs[cm] = T::one();
        let image = e.lefschetz_lambda();
        for (ri, &rm) in rows.iter().enumerate() {
            if !image.coeffs[rm].is_zero() {
                mat.set(ri, ci, image.coeffs[rm].clone());
            }
        }
    }
    (mat, cols, rows)
}

fn check_primitive_range(m: usize, k: usize, kp: usize) -> Result<()> {
    check_form_dimension(m)?;
    if k + kp > m {
        return Err(Error::OutOfDomain(format!(
            "bidegree ({k},{kp}) outside primitive range k + k' <= {m}"
        )));
    }
    Ok(())
}

/// Exact basis of effective `(k, k')`-forms by rational null-space extraction.
pub fn effective_basis_exact(m: usize, k: usize, kp: usize) -> Result<Vec<FormElement<CRational>>> {
    check_primitive_range(m, k, kp)?;
    let (mat, cols, _) = lambda_matrix::<CRational>(m, k, kp);
    Ok(vectors_to_forms(m, &cols, linalg::null_space(&mat)))
}

/// Basis of effective `(k, k')`-forms: exact for `m <= 4`, SVD-based above.
pub fn effective_basis(m: usize, k: usize, kp: usize) -> Result<Vec<FormElement<C64>>> {
    if m <= 4 {
        return Ok(effective_basis_exact(m, k, kp)?
            .into_iter()
            .map(|f| FormElement {
                m,
                coeffs: f.coeffs.iter().map(Scalar::to_c64).collect(),
            })
            .collect());
    }
    check_primitive_range(m, k, kp)?;
    let (mat, cols, _) = lambda_matrix::<C64>(m, k, kp);
    Ok(vectors_to_forms(
        m,
        &cols,
        linalg::numeric_null_space(&mat, 1e-10),
    ))
}

fn vectors_to_forms<T: Scalar>(
    m: usize,
    cols: &[usize],
    vectors: Vec<Vec<T>>,
) -> Vec<FormElement<T>> {
    vectors
        .into_iter()
        .map(|v| {
            let mut f = FormElement::zero(m);
            for (&mask, c) in cols.iter().zip(v) {
                f.coeffs[mask] = c;
            }
            f
        })
        .collect()
}

/// `C(m,k)C(m,k') - C(m,k-1)C(m,k'-1)`, the dimension of effective `(k,k')`-forms.
pub fn expected_effective_dimension(m: usize, k: usize, kp: usize) -> u64 {
    let (m, k, kp) = (m as i64, k as i64, kp as i64);
    binomial(m, k) * binomial(m, kp) - binomial(m, k - 1) * binomial(m, kp - 1)
}

impl FormElement<C64> {
    /// Coefficients of the metric-dual covector of `v` along the coframe generators.
    fn covector_coeffs(v: &CliffordVector<C64>) -> Vec<C64> {
        let m = v.m();
        let c = v.components();
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let i = C64::i();
        let mut out = vec![C64::zero(); 2 * m];
        for j in 0..m {
            out[j] = s * (c[2 * j] - i * c[2 * j + 1]);
            out[m + j] = s * (c[2 * j] + i * c[2 * j + 1]);
        }
        out
    }

    /// Values `θ_g(v)` of the coframe on the vector `v`.
    fn coframe_values(v: &CliffordVector<C64>) -> Vec<C64> {
        let m = v.m();
        let c = v.components();
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let i = C64::i();
        let mut out = vec![C64::zero(); 2 * m];
        for j in 0..m {
            out[j] = s * (c[2 * j] + i * c[2 * j + 1]);
            out[m + j] = s * (c[2 * j] - i * c[2 * j + 1]);
        }
        out
    }

    /// The 1-form metric-dual (complex-bilinearly) to `v`.
    pub fn covector(v: &CliffordVector<C64>) -> Self {
        Self::scalar(v.m(), C64::one()).wedge_covector(v)
    }

    /// `v^♭ ∧ ω`.
    pub fn wedge_covector(&self, v: &CliffordVector<C64>) -> Self {
        let mut out = Self::zero(self.m);
        for (g, c) in Self::covector_coeffs(v).into_iter().enumerate() {
            if c != C64::zero() {
                out = out.add(&self.wedge_generator(g).scale(&c));
            }
        }
        out
    }

    /// Complex-bilinear interior product `v ⌟ ω`.
    pub fn contract(&self, v: &CliffordVector<C64>) -> Self {
        let mut out = Self::zero(self.m);
        for (g, c) in Self::coframe_values(v).into_iter().enumerate() {
            if c != C64::zero() {
                out = out.add(&self.interior_generator(g).scale(&c));
            }
        }
        out
    }

    /// Clifford action on spinors, extended from vectors by
    /// `(v ∧ ω)· = v·(ω·) + (v ⌟ ω)·`.
    pub fn form_clifford(&self, module: &SpinorModule) -> Result<SpinorEndomorphism<C64>> {
        FormClifford::new(module, self.m)?.action(self)
    }
}

/// Memoized Clifford action of coframe monomials.
pub struct FormClifford<'a> {
    module: &'a SpinorModule,
    m: usize,
    duals: Vec<CliffordVector<C64>>,
    generators: Vec<Matrix<C64>>,
    memo: HashMap<usize, Matrix<C64>>,
}

impl<'a> FormClifford<'a> {
    pub fn new(module: &'a SpinorModule, m: usize) -> Result<Self> {
        if module.m() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: module.m(),
            });
        }
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let mut duals = Vec::with_capacity(2 * m);
        for sign in [1.0, -1.0] {
            for j in 0..m {
                let mut c = vec![C64::zero(); 2 * m];
                c[2 * j] = s;
                c[2 * j + 1] = s * C64::new(0.0, sign);
                duals.push(CliffordVector::new(c)?);
            }
        }
        let generators = duals
            .iter()
            .map(|v| module.clifford(v).map(|e| e.matrix))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            module,
            m,
            duals,
            generators,
            memo: HashMap::new(),
        })
    }

    fn monomial(&mut self, mask: usize) -> Matrix<C64> {
        if let Some(hit) = self.memo.get(&mask) {
            return hit.clone();
        }
        let out = if mask == 0 {
            Matrix::identity(self.module.dim())
        } else {
            let g = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << g);
            let rest_action = self.monomial(rest);
            let mut acc = self.generators[g].matmul(&rest_action);
            let mut tail = FormElement::<C64>::zero(self.m);
            tail.coeffs[rest] = C64::one();
            let contracted = tail.contract(&self.duals[g]);
            for (mm, c) in contracted.coeffs.iter().enumerate() {
                if *c != C64::zero() {
                    acc = &acc + &self.monomial(mm).scale(c);
                }
            }
            acc
        };
        self.memo.insert(mask, out.clone());
        out
    }

    pub fn action(&mut self, form: &FormElement<C64>) -> Result<SpinorEndomorphism<C64>> {
        if form.m != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: form.m,
            });
        }
        let n = self.module.dim();
        let mut acc = Matrix::zeros(n, n);
        for (mask, c) in form.coeffs.iter().enumerate() {
            if *c != C64::zero() {
                acc = &acc + &self.monomial(mask).scale(c);
            }
        }
        Ok(SpinorEndomorphism::new(acc))
    }
}

/// Residual of the pointwise identity for an effective `(k,k')`-form:
///
/// ```text
/// Σ_j (e_j^- ⌟ ω)·e_j^+·φ = (-1)^{k+k'-1} (Σ_j e_j^+ ∧ (e_j^- ⌟ ω) + Σ_j e_j^+ ⌟ e_j^- ⌟ ω)·φ
/// ```
pub fn effective_pointwise_lemma_check(
    omega: &FormElement<C64>,
    phi: &[C64],
    module: &SpinorModule,
) -> Result<f64> {
    effective_pointwise_lemma_check_with(omega, phi, &mut FormClifford::new(module, omega.m)?)
}

/// [`effective_pointwise_lemma_check`] reusing the monomial cache of `clifford`.
pub fn effective_pointwise_lemma_check_with(
    omega: &FormElement<C64>,
    phi: &[C64],
    clifford: &mut FormClifford<'_>,
) -> Result<f64> {
    let module = clifford.module;
    let m = omega.m;
    if m != clifford.m {
        return Err(Error::DimensionMismatch {
            expected: clifford.m,
            found: m,
        });
    }
    if phi.len() != module.dim() {
        return Err(Error::DimensionMismatch {
            expected: module.dim(),
            found: phi.len(),
        });
    }
    let lambda_residual = omega.lefschetz_lambda().max_abs();
    if lambda_residual > 1e-10 * omega.max_abs().max(1.0) {
        return Err(Error::NotEffective {
            residual: lambda_residual,
        });
    }
    let Some((k, kp)) = omega.bidegree() else {
        return if omega.is_zero() {
            Ok(0.0)
        } else {
            Err(Error::NotHomogeneous)
        };
    };
    let mut lhs = vec![C64::zero(); module.dim()];
    let mut wedge_part = FormElement::<C64>::zero(m);
    let mut double_contraction = FormElement::<C64>::zero(m);
    for j in 0..2 * m {
        let e = CliffordVector::<C64>::basis(m, j);
        let (ep, em) = (e.plus(), e.minus());
        let inner_form = omega.contract(&em);
        let after_plus = module.clifford(&ep)?.apply(phi);
        linalg::axpy(
            &C64::one(),
            &clifford.action(&inner_form)?.apply(&after_plus),
            &mut lhs,
        );
        wedge_part = wedge_part.add(&inner_form.wedge_covector(&ep));
        double_contraction = double_contraction.add(&inner_form.contract(&ep));
    }
    let sign = if (k + kp) % 2 == 1 { 1.0 } else { -1.0 };
    let rhs_form = wedge_part
        .add(&double_contraction)
        .scale(&C64::new(sign, 0.0));
    let rhs = clifford.action(&rhs_form)?.apply(phi);
    Ok(linalg::max_abs_diff(&lhs, &rhs))
}

/// A tuple `(m, k, k', r)` violating the degree inequality.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub m: i64,
    pub k: i64,
    pub kp: i64,
    pub r: i64,
    pub value: i64,
}

/// Checks, for all `m <= m_max`, `(k,k') ∈ [0,m]² \ {(0,0)}` and `r ∈ [0, m+1]`, that
/// `4(r-k)(m-r+1-k') <= 0` or `4(r-k)(m-r+1-k') < 4r(m-r+1)`.
pub fn eff_inequality_bruteforce(m_max: i64) -> Vec<Violation> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for k in 0..=m {
            for kp in 0..=m {
                if k == 0 && kp == 0 {
                    continue;
                }
                for r in 0..=m + 1 {
                    let value = 4 * (r - k) * (m - r + 1 - kp);
                    if !(value <= 0 || value < 4 * r * (m - r + 1)) {
                        out.push(Violation { m, k, kp, r, value });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn l_of_one_is_kahler_form() {
        let omega = FormElement::<CRational>::kahler_form(2);
        let expected = FormElement::monomial(2, &[0], &[0], CRational::imag_unit()).add(
            &FormElement::monomial(2, &[1], &[1], CRational::imag_unit()),
        );
        assert_eq!(omega, expected);
        assert_eq!(omega.bidegree(), Some((1, 1)));
    }

    #[test]
    fn omega_squared_is_top_form() {
        let sq = FormElement::<CRational>::kahler_form(2).lefschetz_l();
        assert_eq!(sq.bidegree(), Some((2, 2)));
        assert!(!sq.is_zero());
    }

    #[test]
    fn l_vanishes_past_top_degree() {
        let top = FormElement::monomial(2, &[0, 1], &[0], CRational::one());
        assert!(top.lefschetz_l().is_zero());
    }

    #[test]
    fn lambda_of_kahler_form_is_m() {
        for m in 1..=4 {
            let l = FormElement::<CRational>::kahler_form(m).lefschetz_lambda();
            assert_eq!(l, FormElement::scalar(m, CRational::from_int(m as i64)));
        }
        assert!(FormElement::scalar(3, CRational::one())
            .lefschetz_lambda()
            .is_zero());
    }

    #[test]
    fn lambda_is_adjoint_of_l() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut random = || {
            let coeffs = (0..64)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            FormElement::from_coeffs(3, coeffs).unwrap()
        };
        let (a, b) = (random(), random());
        let lhs = a.lefschetz_lambda().inner(&b);
        let rhs = a.inner(&b.lefschetz_l());
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn frame_sum_formula_is_a_multiple_of_lambda() {
        // -2 Σ_k e_k^+ ⌟ e_k^- ⌟ has the same kernel as Λ; here it equals 2i Λ.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let coeffs = (0..256).map(|_| C64::new(rng.gen(), rng.gen())).collect();
        let w = FormElement::from_coeffs(4, coeffs).unwrap();
        let mut frame = FormElement::<C64>::zero(4);
        for k in 0..8 {
            let e = CliffordVector::<C64>::basis(4, k);
            frame = frame.add(&w.contract(&e.minus()).contract(&e.plus()));
        }
        let frame = frame.scale(&C64::new(-2.0, 0.0));
        let expected = w.lefschetz_lambda().scale(&C64::new(0.0, 2.0));
        assert!(frame.sub(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn sl2_commutator_examples() {
        assert_eq!(sl2_commutator_residual::<CRational>(2, 0).unwrap(), 0.0);
        assert_eq!(sl2_commutator_residual::<CRational>(3, 3).unwrap(), 0.0);
        assert!(sl2_commutator_residual::<CRational>(2, 5).is_err());
    }

    #[test]
    fn effective_dimensions() {
        assert_eq!(effective_basis_exact(2, 0, 0).unwrap().len(), 1);
        assert_eq!(effective_basis_exact(2, 1, 1).unwrap().len(), 3);
        assert_eq!(effective_basis_exact(3, 1, 0).unwrap().len(), 3);
        assert!(effective_basis_exact(2, 2, 1).is_err());
        for m in 1..=4 {
            for k in 0..=m {
                for kp in 0..=m - k {
                    let basis = effective_basis_exact(m, k, kp).unwrap();
                    assert_eq!(basis.len() as u64, expected_effective_dimension(m, k, kp));
                    for f in &basis {
                        assert!(f.lefschetz_lambda().is_zero());
                        assert_eq!(f.bidegree(), Some((k, kp)));
                    }
                }
            }
        }
    }

    #[test]
    fn numeric_effective_basis_above_exact_range() {
        let basis = effective_basis(5, 2, 1).unwrap();
        assert_eq!(basis.len() as u64, expected_effective_dimension(5, 2, 1));
        for f in &basis {
            assert!(f.lefschetz_lambda().max_abs() < 1e-10);
        }
    }

    #[test]
    fn degree_one_clifford_agrees_with_vectors() {
        let md = SpinorModule::new(3).unwrap();
        for k in 0..6 {
            let e = CliffordVector::<C64>::basis(3, k);
            let via_form = FormElement::covector(&e).form_clifford(&md).unwrap().matrix;
            let direct = md.clifford(&e).unwrap().matrix;
            assert!((&via_form - &direct).max_abs() < 1e-14);
        }
    }

    #[test]
    fn kahler_form_clifford_matches_omega_action() {
        for m in 1..=4 {
            let md = SpinorModule::new(m).unwrap();
            let via_form = FormElement::<C64>::kahler_form(m)
                .form_clifford(&md)
                .unwrap()
                .matrix;
            let omega = md.omega_action::<C64>().matrix;
            assert!((&via_form - &omega).max_abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn orthonormal_pair_acts_as_product() {
        let md = SpinorModule::new(2).unwrap();
        let e0 = CliffordVector::<C64>::basis(2, 0);
        let e1 = CliffordVector::<C64>::basis(2, 1);
        let two_form = FormElement::covector(&e1).wedge_covector(&e0);
        let action = two_form.form_clifford(&md).unwrap().matrix;
        let product = md
            .clifford(&e0)
            .unwrap()
            .matrix
            .matmul(&md.clifford(&e1).unwrap().matrix);
        assert!((&action - &product).max_abs() < 1e-14);
    }

    #[test]
    fn pointwise_lemma_constant_and_errors() {
        let md = SpinorModule::new(2).unwrap();
        let phi = vec![C64::one(); 4];
        let constant = FormElement::scalar(2, C64::new(2.0, 0.0));
        assert!(effective_pointwise_lemma_check(&constant, &phi, &md).unwrap() < 1e-15);
        let omega = FormElement::<C64>::kahler_form(2);
        assert!(matches!(
            effective_pointwise_lemma_check(&omega, &phi, &md),
            Err(Error::NotEffective { .. })
        ));
    }

    #[test]
    fn pointwise_lemma_on_random_effective_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (m, k, kp) in [(2, 1, 1), (4, 2, 1)] {
            let md = SpinorModule::new(m).unwrap();
            let basis = effective_basis(m, k, kp).unwrap();
            let mut omega = FormElement::<C64>::zero(m);
            for f in &basis {
                omega = omega.add(&f.scale(&C64::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )));
            }
            let phi: Vec<C64> = (0..md.dim())
                .map(|_| C64::new(rng.gen(), rng.gen()))
                .collect();
            let res = effective_pointwise_lemma_check(&omega, &phi, &md).unwrap();
            assert!(res < 1e-10, "({m},{k},{kp}): {res}");
        }
    }

    #[test]
    fn inequality_small_and_excluded_cases() {
        for m in 1..=12 {
            assert!(eff_inequality_bruteforce(m).is_empty(), "m = {m}");
        }
    }
}
