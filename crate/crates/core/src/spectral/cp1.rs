//! ℂP¹ = S² of radius 1/2 (so `S = 8 = 4m(m+1)`) with the spin^c structures
//! attached to `𝓛^q`, `q ∈ {-2, 0, 2}`.
//!
//! `Σ_0` and `Σ_1` are line bundles of degrees `-1 - q/2` and `1 - q/2`. A
//! section of a degree-`n` bundle is a function of spin weight `-n/2`, expanded
//! in spin-weighted harmonics `Y_{s,l,μ}`. Every operator here commutes with
//! rotations, so each `(l, μ)` sector is an exact block of dimension at most 2.
//!
//! `∇^{1,0}` and `∇^{0,1}` act on coefficients by the ladder factors
//! `√((l-s)(l+s+1))` and `-√((l+s)(l-s+1))`, scaled by `1/(R√2)`; they raise
//! and lower the weight. `D` is then `c(θ)∇_θ + c(θ̄)∇_θ̄` with the Fock model's
//! Clifford matrices.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use num::rational::Rational64;
use num::traits::{One, ToPrimitive, Zero};

use super::{aggregate, EigenReport, Residual, SpectralLine};
use crate::bounds::{kk_eigenvalue, SpincParams};
use crate::error::{Error, Result};
use crate::fock::SpinorModule;
use crate::forms::FormElement;
use crate::linalg::{hermitian_eigenvalues, numeric_null_space, singular_values, Matrix};
use crate::scalar::C64;

pub const RADIUS: f64 = 0.5;
pub const MIN_L_MAX: u32 = 4;
pub const DEFAULT_L_MAX: u32 = 20;
/// Singular values below this count towards the KK solution space.
pub const KK_THRESHOLD: f64 = 1e-6;

const P: i64 = 2;

#[derive(Clone, Debug)]
pub struct Cp1Block {
    pub two_l: i32,
    pub two_mu: i32,
    /// Gradings present in this block, in basis order.
    pub gradings: Vec<usize>,
    pub d: Matrix<C64>,
    pub d_plus: Matrix<C64>,
    pub d_minus: Matrix<C64>,
    /// Coefficient of `θ ⊗ ·` in `∇^{1,0}`, component by component.
    pub nabla10: Matrix<C64>,
    /// Coefficient of `θ̄ ⊗ ·` in `∇^{0,1}`.
    pub nabla01: Matrix<C64>,
    /// Fock basis index of each component.
    indices: Vec<usize>,
}

impl Cp1Block {
    pub fn l(&self) -> f64 {
        f64::from(self.two_l) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.gradings.len()
    }

    /// Orthogonal projector onto `Σ_r` inside the block.
    pub fn projector(&self, r: usize) -> Matrix<C64> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            if i == j && self.gradings[i] == r {
                C64::one()
            } else {
                C64::zero()
            }
        })
    }

    /// Restriction of a Fock-space operator to the components of this block.
    fn restrict(&self, op: &Matrix<C64>) -> Matrix<C64> {
        op.select(&self.indices, &self.indices)
    }
}

#[derive(Clone, Debug)]
pub struct Cp1Model {
    q: i64,
    l_max: u32,
    params: SpincParams,
    module: SpinorModule,
    blocks: Vec<Cp1Block>,
}

impl Cp1Model {
    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn params(&self) -> &SpincParams {
        &self.params
    }

    pub fn blocks(&self) -> &[Cp1Block] {
        &self.blocks
    }

    pub fn basis_dimension(&self) -> usize {
        self.blocks.iter().map(Cp1Block::dim).sum()
    }

    /// Twice the spin weight of `Σ_r`.
    pub fn two_spin_weight(&self, r: usize) -> i32 {
        two_spin_weight(self.q, r)
    }

    fn scalar_curvature(&self) -> f64 {
        self.params
            .scalar_curvature()
            .to_f64()
            .expect("small rational")
    }

    fn ratio(&self) -> f64 {
        self.params.ratio().to_f64().expect("small rational")
    }
}

fn two_spin_weight(q: i64, r: usize) -> i32 {
    (2 + q as i32) / 2 - 2 * r as i32
}

fn harmonic_exists(two_l: i32, two_s: i32) -> bool {
    two_l >= two_s.abs() && (two_l - two_s) % 2 == 0
}

fn raise(two_l: i32, two_s: i32) -> f64 {
    let prod = f64::from((two_l - two_s) * (two_l + two_s + 2)) / 4.0;
    prod.sqrt() / (RADIUS * SQRT_2)
}

fn lower(two_l: i32, two_s: i32) -> f64 {
    let prod = f64::from((two_l + two_s) * (two_l - two_s + 2)) / 4.0;
    -prod.sqrt() / (RADIUS * SQRT_2)
}

fn diag(values: &[f64]) -> Matrix<C64> {
    Matrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            C64::new(values[i], 0.0)
        } else {
            C64::zero()
        }
    })
}

fn frobenius(m: &Matrix<C64>) -> f64 {
    let mut s = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            s += m.get(i, j).norm_sqr();
        }
    }
    s.sqrt()
}

/// Builds all `(l, μ)` blocks with `l <= l_max`.
pub fn build_cp1(q: i64, l_max: u32) -> Result<Cp1Model> {
    if !matches!(q, -2 | 0 | 2) {
        return Err(Error::InvalidParams(format!(
            "q must satisfy |q| <= p = 2 and p + q even, i.e. q ∈ {{-2, 0, 2}} (q = {q})"
        )));
    }
    if l_max < MIN_L_MAX {
        return Err(Error::InvalidParams(format!(
            "l_max must be >= {MIN_L_MAX} (l_max = {l_max})"
        )));
    }
    let params = SpincParams::new(1, P, q)?;
    let module = SpinorModule::new(1)?;
    let c_theta = FormElement::monomial(1, &[0], &[], C64::one())
        .form_clifford(&module)?
        .matrix;
    let c_theta_bar = FormElement::monomial(1, &[], &[0], C64::one())
        .form_clifford(&module)?
        .matrix;
    let two_weights = [two_spin_weight(q, 0), two_spin_weight(q, 1)];

    let mut blocks = Vec::new();
    for two_l in 0..=(2 * l_max as i32) {
        let gradings: Vec<usize> = (0..2)
            .filter(|&r| harmonic_exists(two_l, two_weights[r]))
            .collect();
        if gradings.is_empty() {
            continue;
        }
        let indices: Vec<usize> = gradings
            .iter()
            .map(|&r| module.basis_of_grading(r)[0])
            .collect();
        let up: Vec<f64> = gradings
            .iter()
            .map(|&r| raise(two_l, two_weights[r]))
            .collect();
        let down: Vec<f64> = gradings
            .iter()
            .map(|&r| lower(two_l, two_weights[r]))
            .collect();
        let nabla10 = diag(&up);
        let nabla01 = diag(&down);
        let ct = c_theta.select(&indices, &indices);
        let ctb = c_theta_bar.select(&indices, &indices);
        let d_minus = ct.matmul(&nabla10);
        let d_plus = ctb.matmul(&nabla01);
        let d = &d_plus + &d_minus;
        for two_mu in (-two_l..=two_l).step_by(2) {
            blocks.push(Cp1Block {
                two_l,
                two_mu,
                gradings: gradings.clone(),
                d: d.clone(),
                d_plus: d_plus.clone(),
                d_minus: d_minus.clone(),
                nabla10: nabla10.clone(),
                nabla01: nabla01.clone(),
                indices: indices.clone(),
            });
        }
    }
    Ok(Cp1Model {
        q,
        l_max,
        params,
        module,
        blocks,
    })
}

/// Spectrum of `D²` with structural checks.
pub fn spectrum(model: &Cp1Model) -> EigenReport {
    let mut lines: BTreeMap<(i32, usize), (f64, usize)> = BTreeMap::new();
    let mut d_eigen = Vec::new();
    let (mut adj, mut nil, mut decomp, mut shift, mut line_spread) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);

    for b in &model.blocks {
        adj = adj.max((&b.d - &b.d.adjoint()).max_abs());
        nil = nil
            .max(b.d_plus.matmul(&b.d_plus).max_abs())
            .max(b.d_minus.matmul(&b.d_minus).max_abs());
        decomp = decomp.max((&b.d - &(&b.d_plus + &b.d_minus)).max_abs());
        let (p0, p1) = (b.projector(0), b.projector(1));
        shift = shift
            .max(p0.matmul(&b.d_plus).max_abs())
            .max(b.d_plus.matmul(&p1).max_abs())
            .max(p1.matmul(&b.d_minus).max_abs())
            .max(b.d_minus.matmul(&p0).max_abs());

        let d2 = b.d.matmul(&b.d);
        for (pos, &r) in b.gradings.iter().enumerate() {
            let value = hermitian_eigenvalues(&d2.select(&[pos], &[pos]))[0];
            let entry = lines.entry((b.two_l, r)).or_insert((value, 0));
            line_spread = line_spread.max((entry.0 - value).abs());
            entry.1 += 1;
        }
        d_eigen.extend(hermitian_eigenvalues(&b.d));
    }

    let lines: Vec<SpectralLine> = lines
        .into_iter()
        .map(|((two_l, r), (eigenvalue, multiplicity))| SpectralLine {
            l: f64::from(two_l) / 2.0,
            eigenvalue,
            multiplicity,
            grading: Some(r),
        })
        .collect();
    let spectrum = aggregate(lines.iter().map(|l| (l.eigenvalue, l.multiplicity)));
    let basis_dimension = model.basis_dimension();
    let bound = model.params.global_bound();
    let min = spectrum.first().map_or(f64::NAN, |&(v, _)| v);
    let total: usize = spectrum.iter().map(|&(_, k)| k).sum();

    let mut residuals = vec![
        Residual::new("self_adjoint", adj, 1e-13),
        Residual::new("d_plus_minus_nilpotent", nil, 1e-13),
        Residual::new("d_splitting", decomp, 1e-13),
        Residual::new("grading_shift", shift, 1e-13),
        Residual::new("sector_uniformity", line_spread, 1e-12),
        Residual::new(
            "multiplicity_sum",
            total.abs_diff(basis_dimension) as f64,
            0.0,
        ),
        Residual::new(
            "bound_saturation",
            (min - bound.to_f64().unwrap_or(f64::NAN)).abs(),
            1e-8,
        ),
    ];
    if model.q == 0 {
        d_eigen.sort_by(f64::total_cmp);
        let n = d_eigen.len();
        let asym = (0..n)
            .map(|i| (d_eigen[i] + d_eigen[n - 1 - i]).abs())
            .fold(0.0, f64::max);
        residuals.push(Residual::new("spectrum_symmetry", asym, 1e-12));
    }

    EigenReport {
        model: "cp1",
        q: model.q,
        l_max: model.l_max,
        lines,
        spectrum,
        basis_dimension,
        bound: Some(bound),
        residuals,
        kk_dimension: None,
        singular_gap: None,
    }
}

/// `true` when the `D²` table up to `l_max` is bitwise unchanged after adding
/// `extra` further angular momenta.
pub fn truncation_stable(q: i64, l_max: u32, extra: u32) -> Result<bool> {
    let small = spectrum(&build_cp1(q, l_max)?);
    let large = spectrum(&build_cp1(q, l_max + extra)?);
    let cut: Vec<&SpectralLine> = large
        .lines
        .iter()
        .filter(|l| l.l <= f64::from(l_max))
        .collect();
    Ok(cut.len() == small.lines.len() && cut.into_iter().zip(&small.lines).all(|(a, b)| a == b))
}

/// Solution space of `∇_X φ_0 = α X⁻·φ_1`, `∇_X φ_1 = α X⁺·φ_0` on the spin
/// structure `q = 0`, where Kählerian Killing spinors live in `Σ_0 ⊕ Σ_1`.
///
/// Writing `αX^± = θ(X) K_θ + θ̄(X) K_θ̄`, the system splits into
/// `∇_θ = α K_θ` and `∇_θ̄ = α K_θ̄`; the stacked residual operator is solved
/// block by block by SVD.
pub fn kk_solve(model: &Cp1Model, alpha: Rational64) -> Result<EigenReport> {
    if model.q != 0 {
        return Err(Error::InvalidParams(format!(
            "Kählerian Killing spinors in Σ_0 ⊕ Σ_1 require q = 0 (q = {})",
            model.q
        )));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidParams(
            "Killing constant must be nonzero".into(),
        ));
    }
    let a = alpha.to_f64().expect("finite rational");
    let module = &model.module;
    // Projector-weighted X^±: X⁺ acts on φ_0, X⁻ on φ_1.
    let k_of = |k: usize| -> Matrix<C64> {
        let p0 = module.sigma_projector::<C64>(0).expect("grading 0").matrix;
        let p1 = module.sigma_projector::<C64>(1).expect("grading 1").matrix;
        &module.clifford_plus::<C64>(k).matmul(&p0) + &module.clifford_minus::<C64>(k).matmul(&p1)
    };
    let (k1, k2) = (k_of(0), k_of(1));
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = C64::i();
    let k_theta = (&k1 - &k2.scale(&i)).scale(&s);
    let k_theta_bar = (&k1 + &k2.scale(&i)).scale(&s);
    let alpha_c = C64::new(a, 0.0);

    let mut sv_all = Vec::new();
    let mut solutions: Vec<(usize, Vec<C64>)> = Vec::new();
    for (bi, b) in model.blocks.iter().enumerate() {
        let top = &b.nabla10 - &b.restrict(&k_theta).scale(&alpha_c);
        let bottom = &b.nabla01 - &b.restrict(&k_theta_bar).scale(&alpha_c);
        let n = b.dim();
        let stacked = Matrix::from_fn(2 * n, n, |row, col| {
            if row < n {
                *top.get(row, col)
            } else {
                *bottom.get(row - n, col)
            }
        });
        sv_all.extend(singular_values(&stacked));
        for v in numeric_null_space(&stacked, KK_THRESHOLD) {
            solutions.push((bi, v));
        }
    }
    sv_all.sort_by(f64::total_cmp);
    let dimension = sv_all.iter().filter(|&&s| s < KK_THRESHOLD).count();
    let sigma_max = sv_all.last().copied().unwrap_or(0.0);
    let singular_gap = (dimension > 0 && dimension < sv_all.len())
        .then(|| sv_all[dimension] / sv_all[dimension - 1].max(f64::EPSILON * sigma_max));

    // Dφ_0 = -2(r+1)αφ_1 and Dφ_1 = -2(m-r)αφ_0 with m = 1, r = 0.
    let expected = kk_eigenvalue(1, 0, alpha)?
        .to_f64()
        .expect("finite rational");
    let (mut rel, mut eig_res) = (0.0f64, 0.0f64);
    let mut values = BTreeMap::new();
    for (bi, v) in &solutions {
        let b = &model.blocks[*bi];
        let phi0 = b.projector(0).apply(v);
        let phi1 = b.projector(1).apply(v);
        let lhs0 = b.d.apply(&phi0);
        let lhs1 = b.d.apply(&phi1);
        for k in 0..v.len() {
            rel = rel.max((lhs0[k] + phi1[k] * (2.0 * a)).norm());
            rel = rel.max((lhs1[k] + phi0[k] * (2.0 * a)).norm());
        }
        let d2v = b.d.matmul(&b.d).apply(v);
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let rayleigh: C64 = v.iter().zip(&d2v).map(|(x, y)| x.conj() * y).sum::<C64>() / norm;
        eig_res = eig_res.max((rayleigh.re - expected).abs());
        *values.entry(b.two_l).or_insert(0usize) += 1;
    }
    let lines: Vec<SpectralLine> = values
        .into_iter()
        .map(|(two_l, multiplicity)| SpectralLine {
            l: f64::from(two_l) / 2.0,
            eigenvalue: expected,
            multiplicity,
            grading: None,
        })
        .collect();
    let spectrum = aggregate(lines.iter().map(|l| (l.eigenvalue, l.multiplicity)));

    Ok(EigenReport {
        model: "cp1",
        q: model.q,
        l_max: model.l_max,
        lines,
        spectrum,
        basis_dimension: model.basis_dimension(),
        bound: Some(kk_eigenvalue(1, 0, alpha)?),
        residuals: vec![
            Residual::new("kk_dirac_relations", rel, 1e-8),
            Residual::new("kk_eigenvalue", eig_res, 1e-8),
        ],
        kk_dimension: Some(dimension),
        singular_gap,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LichnerowiczReport {
    pub r: usize,
    /// `2∇^{1,0*}∇^{1,0} = D² - S/4 - iρ/2 - ((m-r)/2m)(q/p)S` on `Σ_r`.
    pub sl1: f64,
    /// `2∇^{0,1*}∇^{0,1} = D² - S/4 + iρ/2 + (r/2m)(q/p)S` on `Σ_r`.
    pub sl2: f64,
    /// `D² = ∇*∇ + S/4 + F_A/2` on `Σ_r`.
    pub sl: f64,
}

impl LichnerowiczReport {
    pub fn max_residual(&self) -> f64 {
        self.sl1.max(self.sl2).max(self.sl)
    }
}

/// Frobenius-norm residuals (bounding the operator norm) of the refined and
/// plain Schrödinger–Lichnerowicz formulas, maximized over all blocks.
pub fn verify_refined_lichnerowicz(model: &Cp1Model, r: i64) -> Result<LichnerowiczReport> {
    let r = model.module.check_grading(r)?;
    let s = model.scalar_curvature();
    let m = 1.0;
    let ratio = model.ratio();
    // iρ/2 = (S/4m) iΩ and F_A/2 = (q/p)(S/4m) iΩ.
    let i_omega = model.module.omega_action::<C64>().matrix.scale(&C64::i());
    let half_rho = i_omega.scale(&C64::new(s / (4.0 * m), 0.0));
    let half_fa = i_omega.scale(&C64::new(ratio * s / (4.0 * m), 0.0));
    let rf = r as f64;
    let c1 = s / 4.0 + (m - rf) / (2.0 * m) * ratio * s;
    let c2 = s / 4.0 - rf / (2.0 * m) * ratio * s;

    let mut report = LichnerowiczReport {
        r,
        sl1: 0.0,
        sl2: 0.0,
        sl: 0.0,
    };
    let two = C64::new(2.0, 0.0);
    for b in &model.blocks {
        let p = b.projector(r);
        let compress = |x: &Matrix<C64>| p.matmul(x).matmul(&p);
        let id = Matrix::<C64>::identity(b.dim());
        let d2 = b.d.matmul(&b.d);
        let rho = b.restrict(&half_rho);
        let fa = b.restrict(&half_fa);
        let rough10 = b.nabla10.adjoint().matmul(&b.nabla10);
        let rough01 = b.nabla01.adjoint().matmul(&b.nabla01);

        let rhs1 = &(&d2 - &id.scale(&C64::new(c1, 0.0))) - &rho;
        let rhs2 = &(&d2 - &id.scale(&C64::new(c2, 0.0))) + &rho;
        let plain = &(&(&rough10 + &rough01) + &id.scale(&C64::new(s / 4.0, 0.0))) + &fa;
        report.sl1 = report
            .sl1
            .max(frobenius(&compress(&(&rough10.scale(&two) - &rhs1))));
        report.sl2 = report
            .sl2
            .max(frobenius(&compress(&(&rough01.scale(&two) - &rhs2))));
        report.sl = report.sl.max(frobenius(&compress(&(&d2 - &plain))));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_cp1(1, 8).is_err());
        assert!(build_cp1(4, 8).is_err());
        assert!(build_cp1(0, 3).is_err());
    }

    #[test]
    fn line_bundle_degrees() {
        // Degree n <-> weight -n/2: Σ_0 has degree -1 - q/2, Σ_1 degree 1 - q/2.
        for q in [-2i64, 0, 2] {
            let model = build_cp1(q, 4).unwrap();
            assert_eq!(model.two_spin_weight(0), (1 + q / 2) as i32);
            assert_eq!(model.two_spin_weight(1), (q / 2 - 1) as i32);
        }
        assert_eq!(build_cp1(-2, 4).unwrap().two_spin_weight(0), 0);
        assert_eq!(build_cp1(2, 4).unwrap().two_spin_weight(1), 0);
    }

    #[test]
    fn minimal_eigenvalues() {
        let rep = spectrum(&build_cp1(0, 8).unwrap());
        assert!((rep.min_eigenvalue().unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(rep.spectrum[0].1, 4);
        assert!(rep.all_passed(), "{:?}", rep.residuals);

        let rep = spectrum(&build_cp1(-2, 8).unwrap());
        assert!(rep.min_eigenvalue().unwrap().abs() < 1e-12);
        assert_eq!(rep.spectrum[0].1, 1);
        assert_eq!(rep.lines[0].grading, Some(0));
        assert!(rep.all_passed(), "{:?}", rep.residuals);

        let rep = spectrum(&build_cp1(2, 8).unwrap());
        assert_eq!(rep.spectrum[0].1, 1);
        assert_eq!(rep.lines[0].grading, Some(1));
        assert!(rep.all_passed(), "{:?}", rep.residuals);
    }

    #[test]
    fn spin_spectrum_is_odd_squares() {
        // q = 0: the round sphere, D² = (2l+1)² with multiplicity 2(2l+1).
        let rep = spectrum(&build_cp1(0, 6).unwrap());
        for (k, &(v, mult)) in rep.spectrum.iter().enumerate() {
            let two_l_plus_1 = 2 * k + 2;
            assert!((v - (two_l_plus_1 * two_l_plus_1) as f64).abs() < 1e-9);
            assert_eq!(mult, 2 * two_l_plus_1);
        }
    }

    #[test]
    fn truncation_does_not_move_eigenvalues() {
        for q in [-2, 0, 2] {
            assert!(truncation_stable(q, 6, 5).unwrap());
        }
    }

    #[test]
    fn kk_dimensions() {
        let model = build_cp1(0, 6).unwrap();
        let rep = kk_solve(&model, Rational64::from_integer(-1)).unwrap();
        assert_eq!(rep.kk_dimension, Some(2));
        assert!(rep.singular_gap.unwrap() >= 1e3);
        assert!(rep.all_passed(), "{:?}", rep.residuals);
        assert_eq!(
            kk_solve(&model, Rational64::from_integer(1))
                .unwrap()
                .kk_dimension,
            Some(2)
        );
        assert_eq!(
            kk_solve(&model, Rational64::new(1, 2))
                .unwrap()
                .kk_dimension,
            Some(0)
        );
        assert!(kk_solve(&build_cp1(2, 6).unwrap(), Rational64::one()).is_err());
    }

    #[test]
    fn lichnerowicz_formulas() {
        for q in [-2, 0, 2] {
            let model = build_cp1(q, 8).unwrap();
            for r in 0..=1 {
                let rep = verify_refined_lichnerowicz(&model, r).unwrap();
                assert!(rep.max_residual() < 1e-10, "q={q} r={r} {rep:?}");
            }
        }
        assert!(verify_refined_lichnerowicz(&build_cp1(0, 4).unwrap(), 2).is_err());
    }

    #[test]
    fn wrong_ladder_sign_breaks_lichnerowicz() {
        // Rescaling ∇^{0,1} without rebuilding D must break the identities.
        let mut model = build_cp1(0, 4).unwrap();
        for b in &mut model.blocks {
            b.nabla01 = b.nabla01.scale(&C64::new(2.0, 0.0));
        }
        let rep = verify_refined_lichnerowicz(&model, 0).unwrap();
        assert!(rep.max_residual() > 1.0);
    }
}
