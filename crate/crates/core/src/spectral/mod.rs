//! Concrete spin^c Dirac operators: ℂP¹ in a spin-weighted ladder basis and
//! the flat torus in a Fourier basis.

use num::rational::Rational64;

use crate::error::{Error, Result};

pub mod cp1;
pub mod torus;

pub use cp1::{
    build_cp1, kk_solve, spectrum, verify_refined_lichnerowicz, Cp1Block, Cp1Model,
    LichnerowiczReport,
};
pub use torus::{torus_leibniz_check, FormField, SpinorField, TorusModel, TrigPoly};

/// One row of an eigenvalue table: eigenvalue of `D²` on the part of a
/// harmonic sector of grading `grading`.
///
/// `l` is the angular momentum on ℂP¹ and `|ξ|²` on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralLine {
    pub l: f64,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub grading: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Residual {
    pub fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.value <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    pub model: &'static str,
    pub q: i64,
    pub l_max: u32,
    pub lines: Vec<SpectralLine>,
    /// Distinct eigenvalues of `D²`, ascending, with multiplicities.
    pub spectrum: Vec<(f64, usize)>,
    pub basis_dimension: usize,
    pub bound: Option<Rational64>,
    pub residuals: Vec<Residual>,
    pub kk_dimension: Option<usize>,
    /// Ratio of the first singular value above the threshold to the largest below it.
    pub singular_gap: Option<f64>,
}

impl EigenReport {
    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.spectrum.first().map(|&(v, _)| v)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.spectrum.iter().map(|&(_, k)| k).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.residuals.iter().all(Residual::passed)
    }

    pub fn residual(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }
}

/// Merge eigenvalues that agree to `1e-9` relative.
pub(crate) fn aggregate(values: impl IntoIterator<Item = (f64, usize)>) -> Vec<(f64, usize)> {
    let mut v: Vec<(f64, usize)> = values.into_iter().collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::new();
    for (x, k) in v {
        match out.last_mut() {
            Some((y, n)) if (x - *y).abs() <= 1e-9 * y.abs().max(1.0) => *n += k,
            _ => out.push((x, k)),
        }
    }
    out
}

/// Factors by which `D` maps `ω·ψ_r` and `ω·ψ_{r-1}` for a harmonic effective
/// `(k, k')`-form `ω` and a Kählerian Killing pair `(ψ_{r-1}, ψ_r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomegFactors {
    /// `D(ω·ψ_r) = first · ω·ψ_{r-1}`.
    pub first: i64,
    /// `D(ω·ψ_{r-1}) = second · ω·ψ_r`.
    pub second: i64,
    /// `first · second = 4(r-k)(m-r+1-k')`.
    pub product: i64,
}

pub fn domeg_consistency(m: i64, r: i64, k: i64, kp: i64) -> Result<DomegFactors> {
    if !(0..=m).contains(&k) || !(0..=m).contains(&kp) {
        return Err(Error::OutOfDomain(format!(
            "bidegree ({k}, {kp}) outside 0..={m}"
        )));
    }
    if !(0..=m + 1).contains(&r) {
        return Err(Error::GradingOutOfRange {
            r,
            m: m.max(0) as usize,
        });
    }
    let sign = if (k + kp) % 2 == 0 { 1 } else { -1 };
    let first = 2 * sign * (m - r + 1 - kp);
    let second = 2 * sign * (r - k);
    Ok(DomegFactors {
        first,
        second,
        product: first * second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domeg_examples() {
        for m in 1..=5 {
            for r in 0..=m + 1 {
                let f = domeg_consistency(m, r, 0, 0).unwrap();
                assert_eq!((f.first, f.second), (2 * (m - r + 1), 2 * r));
                assert_eq!(f.product, 4 * r * (m - r + 1));
                for k in 0..=m {
                    for kp in 0..=m {
                        let f = domeg_consistency(m, r, k, kp).unwrap();
                        assert_eq!(f.product, 4 * (r - k) * (m - r + 1 - kp));
                    }
                }
            }
        }
        let f = domeg_consistency(3, 2, 1, 1).unwrap();
        assert_eq!((f.first, f.second, f.product), (2, 2, 4));
        assert!(f.product < 4 * 2 * 2);
        assert_eq!(domeg_consistency(3, 2, 2, 2).unwrap().product, 0);
        assert!(domeg_consistency(3, 5, 0, 0).is_err());
        assert!(domeg_consistency(3, 1, 4, 0).is_err());
    }

    #[test]
    fn aggregate_merges_close_values() {
        let a = aggregate(vec![(4.0, 2), (0.0, 1), (4.0 + 1e-12, 2), (9.0, 1)]);
        assert_eq!(a, vec![(0.0, 1), (4.0, 4), (9.0, 1)]);
    }
}
