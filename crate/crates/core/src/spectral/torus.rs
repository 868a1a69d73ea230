//! Flat torus `ℝ²/ℤ²` with the trivial spin structure. Fields are
//! trigonometric polynomials `Σ c_ξ e^{2πi⟨ξ,x⟩}`; derivatives are Fourier
//! multipliers and products are exact convolutions, so nothing is truncated as
//! long as total degrees stay within the cutoff.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num::traits::{One, Zero};
use rand::Rng;

use super::{aggregate, EigenReport, Residual, SpectralLine};
use crate::error::{Error, Result};
use crate::fock::{CliffordVector, SpinorModule};
use crate::forms::{FormClifford, FormElement};
use crate::linalg::{hermitian_eigenvalues, Matrix};
use crate::scalar::C64;

pub const DEFAULT_CUTOFF: i32 = 8;

/// Sparse Fourier coefficients indexed by the frequency `ξ ∈ ℤ²`.
pub type TrigPoly = BTreeMap<(i32, i32), C64>;

/// Sup-norm degree `max |ξ_k|` over nonzero coefficients.
pub fn poly_degree(p: &TrigPoly) -> i32 {
    p.iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&(a, b), _)| a.abs().max(b.abs()))
        .max()
        .unwrap_or(0)
}

fn poly_add_scaled(acc: &mut TrigPoly, p: &TrigPoly, s: C64) {
    if s.is_zero() {
        return;
    }
    for (&k, &c) in p {
        *acc.entry(k).or_insert_with(C64::zero) += c * s;
    }
}

fn poly_mul(a: &TrigPoly, b: &TrigPoly) -> TrigPoly {
    let mut out = TrigPoly::new();
    for (&(a1, a2), &x) in a {
        for (&(b1, b2), &y) in b {
            *out.entry((a1 + b1, a2 + b2)).or_insert_with(C64::zero) += x * y;
        }
    }
    out
}

/// `∂/∂x_k`, the multiplier `2πi ξ_k`.
pub fn derivative(p: &TrigPoly, k: usize) -> TrigPoly {
    p.iter()
        .map(|(&xi, &c)| {
            let f = if k == 0 { xi.0 } else { xi.1 };
            (xi, c * C64::new(0.0, 2.0 * PI * f64::from(f)))
        })
        .collect()
}

fn random_poly<R: Rng>(rng: &mut R, band: i32) -> TrigPoly {
    let mut p = TrigPoly::new();
    for a in -band..=band {
        for b in -band..=band {
            p.insert(
                (a, b),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
    }
    p
}

fn apply(op: &Matrix<C64>, v: &[TrigPoly]) -> Vec<TrigPoly> {
    (0..op.rows())
        .map(|i| {
            let mut acc = TrigPoly::new();
            for (j, p) in v.iter().enumerate() {
                poly_add_scaled(&mut acc, p, *op.get(i, j));
            }
            acc
        })
        .collect()
}

fn add_fields(a: &[TrigPoly], b: &[TrigPoly], s: C64) -> Vec<TrigPoly> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut acc = x.clone();
            poly_add_scaled(&mut acc, y, s);
            acc
        })
        .collect()
}

fn fields_degree(v: &[TrigPoly]) -> i32 {
    v.iter().map(poly_degree).max().unwrap_or(0)
}

/// Spinor field in the Fock basis of `ℂ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    pub components: Vec<TrigPoly>,
}

impl SpinorField {
    pub fn zero() -> Self {
        Self {
            components: vec![TrigPoly::new(); 2],
        }
    }

    pub fn random<R: Rng>(rng: &mut R, band: i32) -> Self {
        Self {
            components: (0..2).map(|_| random_poly(rng, band)).collect(),
        }
    }

    pub fn degree(&self) -> i32 {
        fields_degree(&self.components)
    }
}

/// Form field with one polynomial per coframe monomial (`θ`, `θ̄` bitmask).
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    pub components: Vec<TrigPoly>,
}

impl FormField {
    pub fn zero() -> Self {
        Self {
            components: vec![TrigPoly::new(); 4],
        }
    }

    /// The constant form `form`.
    pub fn constant(form: &FormElement<C64>) -> Self {
        let components = form
            .coeffs()
            .iter()
            .map(|&c| {
                if c.is_zero() {
                    TrigPoly::new()
                } else {
                    TrigPoly::from([((0, 0), c)])
                }
            })
            .collect();
        Self { components }
    }

    /// Random form of pure degree `form_degree` with all modes up to `band`.
    pub fn random<R: Rng>(rng: &mut R, form_degree: u32, band: i32) -> Self {
        let components = (0..4usize)
            .map(|mask| {
                if mask.count_ones() == form_degree {
                    random_poly(rng, band)
                } else {
                    TrigPoly::new()
                }
            })
            .collect();
        Self { components }
    }

    pub fn degree(&self) -> i32 {
        fields_degree(&self.components)
    }

    /// Form degree, when all nonzero components share it.
    pub fn form_degree(&self) -> Option<u32> {
        let mut degrees = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, p)| p.values().any(|c| !c.is_zero()))
            .map(|(mask, _)| mask.count_ones());
        let first = degrees.next().unwrap_or(0);
        degrees.all(|d| d == first).then_some(first)
    }
}

#[derive(Clone, Debug)]
pub struct TorusModel {
    cutoff: i32,
    module: SpinorModule,
    clifford: Vec<Matrix<C64>>,
    form_action: Vec<Matrix<C64>>,
    wedge: Vec<Matrix<C64>>,
    interior: Vec<Matrix<C64>>,
}

impl TorusModel {
    pub fn new(cutoff: i32) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidParams(format!(
                "cutoff must be >= 1 (cutoff = {cutoff})"
            )));
        }
        let module = SpinorModule::new(1)?;
        let clifford = (0..2).map(|k| module.clifford_basis::<C64>(k)).collect();
        let units: Vec<FormElement<C64>> = (0..4)
            .map(|mask| {
                let coeffs = (0..4)
                    .map(|i| if i == mask { C64::one() } else { C64::zero() })
                    .collect();
                FormElement::from_coeffs(1, coeffs)
            })
            .collect::<Result<_>>()?;
        let mut fc = FormClifford::new(&module, 1)?;
        let form_action = units
            .iter()
            .map(|u| fc.action(u).map(|e| e.matrix))
            .collect::<Result<_>>()?;
        let column_op = |f: &dyn Fn(&FormElement<C64>) -> FormElement<C64>| {
            let cols: Vec<FormElement<C64>> = units.iter().map(f).collect();
            Matrix::from_fn(4, 4, |i, j| *cols[j].coeff(i))
        };
        let wedge = (0..2)
            .map(|k| column_op(&|u| u.wedge_covector(&CliffordVector::basis(1, k))))
            .collect();
        let interior = (0..2)
            .map(|k| column_op(&|u| u.contract(&CliffordVector::basis(1, k))))
            .collect();
        Ok(Self {
            cutoff,
            module,
            clifford,
            form_action,
            wedge,
            interior,
        })
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn module(&self) -> &SpinorModule {
        &self.module
    }

    pub fn dirac(&self, phi: &SpinorField) -> SpinorField {
        let mut out = SpinorField::zero().components;
        for k in 0..2 {
            let dphi: Vec<TrigPoly> = phi.components.iter().map(|p| derivative(p, k)).collect();
            out = add_fields(&out, &apply(&self.clifford[k], &dphi), C64::one());
        }
        SpinorField { components: out }
    }

    /// `∇_{e_k} φ`; the connection is flat.
    pub fn covariant(&self, phi: &SpinorField, k: usize) -> SpinorField {
        SpinorField {
            components: phi.components.iter().map(|p| derivative(p, k)).collect(),
        }
    }

    /// `dω = Σ e^k ∧ ∂_k ω`.
    pub fn d(&self, omega: &FormField) -> FormField {
        self.first_order(omega, &self.wedge, C64::one())
    }

    /// `δω = -Σ e_k ⌟ ∂_k ω`.
    pub fn delta(&self, omega: &FormField) -> FormField {
        self.first_order(omega, &self.interior, -C64::one())
    }

    fn first_order(&self, omega: &FormField, ops: &[Matrix<C64>], sign: C64) -> FormField {
        let mut out = FormField::zero().components;
        for (k, op) in ops.iter().enumerate() {
            let dw: Vec<TrigPoly> = omega.components.iter().map(|p| derivative(p, k)).collect();
            out = add_fields(&out, &apply(op, &dw), sign);
        }
        FormField { components: out }
    }

    pub fn contract(&self, omega: &FormField, k: usize) -> FormField {
        FormField {
            components: apply(&self.interior[k], &omega.components),
        }
    }

    /// Pointwise Clifford action `ω·φ`.
    pub fn act(&self, omega: &FormField, phi: &SpinorField) -> Result<SpinorField> {
        let degree = omega.degree() + phi.degree();
        if degree > self.cutoff {
            return Err(Error::CutoffExceeded {
                degree,
                cutoff: self.cutoff,
            });
        }
        let mut out = SpinorField::zero().components;
        for (mask, w) in omega.components.iter().enumerate() {
            if w.is_empty() {
                continue;
            }
            let products: Vec<TrigPoly> = phi.components.iter().map(|p| poly_mul(w, p)).collect();
            out = add_fields(&out, &apply(&self.form_action[mask], &products), C64::one());
        }
        Ok(SpinorField { components: out })
    }

    /// Spectrum of `D²` on all modes with `|ξ_k| <= cutoff`, compared with `4π²|ξ|²`.
    pub fn spectrum(&self) -> EigenReport {
        let n = self.cutoff;
        let mut lines: BTreeMap<(i32, usize), (f64, usize)> = BTreeMap::new();
        let mut residual = 0.0f64;
        for a in -n..=n {
            for b in -n..=n {
                let symbol = &self.clifford[0].scale(&C64::new(0.0, 2.0 * PI * f64::from(a)))
                    + &self.clifford[1].scale(&C64::new(0.0, 2.0 * PI * f64::from(b)));
                let sq = symbol.matmul(&symbol);
                let norm = a * a + b * b;
                let expected = 4.0 * PI * PI * f64::from(norm);
                for r in 0..2 {
                    let idx = self.module.basis_of_grading(r);
                    let value = hermitian_eigenvalues(&sq.select(&idx, &idx))[0];
                    residual = residual.max((value - expected).abs() / expected.max(1.0));
                    let entry = lines.entry((norm, r)).or_insert((expected, 0));
                    entry.1 += 1;
                }
            }
        }
        let lines: Vec<SpectralLine> = lines
            .into_iter()
            .map(|((norm, r), (eigenvalue, multiplicity))| SpectralLine {
                l: f64::from(norm),
                eigenvalue,
                multiplicity,
                grading: Some(r),
            })
            .collect();
        let spectrum = aggregate(lines.iter().map(|l| (l.eigenvalue, l.multiplicity)));
        let side = (2 * n + 1) as usize;
        EigenReport {
            model: "torus",
            q: 0,
            l_max: n as u32,
            lines,
            spectrum,
            basis_dimension: 2 * side * side,
            bound: None,
            residuals: vec![Residual::new("flat_laplacian", residual, 1e-12)],
            kk_dimension: None,
            singular_gap: None,
        }
    }
}

fn max_abs(v: &[TrigPoly]) -> f64 {
    v.iter()
        .flat_map(|p| p.values())
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Relative residual of
/// `D(ω·φ) = (dω + δω)·φ + (-1)^{deg ω} ω·Dφ - 2Σ_j (e_j ⌟ ω)·∇_{e_j}φ`.
pub fn torus_leibniz_check(
    model: &TorusModel,
    omega: &FormField,
    phi: &SpinorField,
) -> Result<f64> {
    let deg = omega.form_degree().ok_or(Error::NotHomogeneous)?;
    let lhs = model.dirac(&model.act(omega, phi)?);

    let dd = model.d(omega);
    let dd = FormField {
        components: add_fields(&dd.components, &model.delta(omega).components, C64::one()),
    };
    let sign = if deg % 2 == 0 {
        C64::one()
    } else {
        -C64::one()
    };
    let mut rhs = model.act(&dd, phi)?.components;
    rhs = add_fields(&rhs, &model.act(omega, &model.dirac(phi))?.components, sign);
    for j in 0..2 {
        let term = model.act(&model.contract(omega, j), &model.covariant(phi, j))?;
        rhs = add_fields(&rhs, &term.components, C64::new(-2.0, 0.0));
    }
    let diff = add_fields(&lhs.components, &rhs, -C64::one());
    Ok(max_abs(&diff) / max_abs(&lhs.components).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_spectrum() {
        let model = TorusModel::new(4).unwrap();
        let rep = model.spectrum();
        assert!(rep.all_passed(), "{:?}", rep.residuals);
        assert_eq!(rep.spectrum[0], (0.0, 2));
        // |ξ|² = 1: four frequencies, two spinor components each.
        assert!((rep.spectrum[1].0 - 4.0 * PI * PI).abs() < 1e-12);
        assert_eq!(rep.spectrum[1].1, 8);
        assert_eq!(rep.total_multiplicity(), rep.basis_dimension);
    }

    #[test]
    fn constant_form_commutes() {
        let model = TorusModel::new(DEFAULT_CUTOFF).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = SpinorField::random(&mut rng, 3);
        let c = FormField::constant(&FormElement::scalar(1, C64::new(0.5, -2.0)));
        assert!(torus_leibniz_check(&model, &c, &phi).unwrap() < 1e-12);
    }

    #[test]
    fn parallel_one_form() {
        // D(dx·φ) = -dx·Dφ - 2∇_{∂x}φ.
        let model = TorusModel::new(DEFAULT_CUTOFF).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let phi = SpinorField::random(&mut rng, 3);
        let dx = FormField::constant(&FormElement::covector(&CliffordVector::basis(1, 0)));
        assert_eq!(max_abs(&model.d(&dx).components), 0.0);
        assert_eq!(max_abs(&model.delta(&dx).components), 0.0);
        let lhs = model.dirac(&model.act(&dx, &phi).unwrap());
        let mut rhs = model.act(&dx, &model.dirac(&phi)).unwrap().components;
        rhs = add_fields(
            &rhs,
            &model.covariant(&phi, 0).components,
            C64::new(2.0, 0.0),
        );
        let diff = add_fields(&lhs.components, &rhs, C64::one());
        assert!(max_abs(&diff) < 1e-9, "{}", max_abs(&diff));
    }

    #[test]
    fn random_forms() {
        let model = TorusModel::new(DEFAULT_CUTOFF).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for deg in [1, 2] {
            let omega = FormField::random(&mut rng, deg, 3);
            let phi = SpinorField::random(&mut rng, 4);
            assert!(torus_leibniz_check(&model, &omega, &phi).unwrap() < 1e-12);
        }
    }

    #[test]
    fn wrong_codifferential_sign_is_detected() {
        let model = TorusModel::new(DEFAULT_CUTOFF).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let omega = FormField::random(&mut rng, 1, 2);
        let phi = SpinorField::random(&mut rng, 2);
        let lhs = model.dirac(&model.act(&omega, &phi).unwrap());
        // Same right side but with +Σ e_k ⌟ ∂_k ω.
        let bad = FormField {
            components: add_fields(
                &model.d(&omega).components,
                &model.delta(&omega).components,
                -C64::one(),
            ),
        };
        let mut rhs = model.act(&bad, &phi).unwrap().components;
        rhs = add_fields(
            &rhs,
            &model.act(&omega, &model.dirac(&phi)).unwrap().components,
            -C64::one(),
        );
        for j in 0..2 {
            let t = model
                .act(&model.contract(&omega, j), &model.covariant(&phi, j))
                .unwrap();
            rhs = add_fields(&rhs, &t.components, C64::new(-2.0, 0.0));
        }
        assert!(max_abs(&add_fields(&lhs.components, &rhs, -C64::one())) > 1.0);
    }

    #[test]
    fn errors() {
        let model = TorusModel::new(DEFAULT_CUTOFF).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let omega = FormField::random(&mut rng, 1, 5);
        let phi = SpinorField::random(&mut rng, 5);
        assert!(matches!(
            torus_leibniz_check(&model, &omega, &phi),
            Err(Error::CutoffExceeded {
                degree: 10,
                cutoff: 8
            })
        ));
        let mut mixed = FormField::random(&mut rng, 1, 1);
        mixed.components[3] = random_poly(&mut rng, 1);
        assert!(matches!(
            torus_leibniz_check(&model, &mixed, &phi),
            Err(Error::NotHomogeneous)
        ));
        assert!(TorusModel::new(0).is_err());
    }
}
