//! Exact eigenvalue bounds for the spin^c Dirac operator on Kähler-Einstein
//! manifolds of index `p` with auxiliary bundle `𝓛^q`, scalar curvature
//! normalized to `S = 4m(m+1)`.
//!
//! All quantities are identities of rational functions and are computed in
//! `Ratio<i64>`; no floating point is involved.

use num::rational::Rational64;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::binomial;

fn q64(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// `(m, p, q, S)` with `p + q` even, `|q| <= p` and `S = 4m(m+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpincParams {
    m: i64,
    p: i64,
    q: i64,
}

impl SpincParams {
    pub fn new(m: i64, p: i64, q: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParams(format!(
                "complex dimension m must be >= 1 (m = {m})"
            )));
        }
        if p < 1 {
            return Err(Error::InvalidParams(format!(
                "index p must be >= 1 (p = {p})"
            )));
        }
        if q.abs() > p {
            return Err(Error::InvalidParams(format!(
                "|q| <= p violated (p = {p}, q = {q})"
            )));
        }
        if (p + q) % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "p + q must be even (p = {p}, q = {q})"
            )));
        }
        Ok(Self { m, p, q })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Normalized scalar curvature `4m(m+1)`.
    pub fn scalar_curvature(&self) -> Rational64 {
        q64(4 * self.m * (self.m + 1))
    }

    pub fn half_s(&self) -> Rational64 {
        self.scalar_curvature() / 2
    }

    /// `q / p`.
    pub fn ratio(&self) -> Rational64 {
        Rational64::new(self.q, self.p)
    }

    /// Scalar by which `F_A = (q/p)(S/2m) iΩ` acts on `Σ_r`.
    pub fn curvature_action(&self, r: i64) -> Rational64 {
        // iΩ = i · i(2r - m) = -(2r - m)
        -self.ratio() * self.scalar_curvature() / (2 * self.m) * (2 * r - self.m)
    }

    fn check_r(&self, r: i64) -> Result<()> {
        if r < 0 || r > self.m {
            return Err(Error::GradingOutOfRange {
                r,
                m: self.m as usize,
            });
        }
        Ok(())
    }

    /// `c_r = 1 - (q/p)(2r - m)/m`, so that `(S + 2F_A)φ_r = c_r S φ_r`.
    pub fn c_r(&self, r: i64) -> Result<Rational64> {
        self.check_r(r)?;
        Ok(self.c_unchecked(r))
    }

    fn c_unchecked(&self, r: i64) -> Rational64 {
        Rational64::one() - self.ratio() * Rational64::new(2 * r - self.m, self.m)
    }

    /// `a_1(r) = (r+1)/(2r+1) c_r`.
    pub fn a1(&self, r: i64) -> Result<Rational64> {
        self.check_r(r)?;
        Ok(Rational64::new(r + 1, 2 * r + 1) * self.c_unchecked(r))
    }

    /// `a_2(r) = (m-r+1)/(2m-2r+1) c_r`.
    pub fn a2(&self, r: i64) -> Result<Rational64> {
        self.check_r(r)?;
        let m = self.m;
        Ok(Rational64::new(m - r + 1, 2 * m - 2 * r + 1) * self.c_unchecked(r))
    }

    /// Lower bound for `D²` on `Σ_r` from the twistor-type estimate,
    /// `max(min(a_1(r), a_1(r-1)), min(a_2(r), a_2(r+1))) · S/2`.
    ///
    /// At `r = 0` the `a_1(r-1)` branch is vacuous (`D^-` vanishes on `Σ_0`), and
    /// at `r = m` so is `a_2(r+1)`; those branches are dropped and flagged.
    pub fn prop_bound(&self, r: i64) -> Result<PropBound> {
        self.check_r(r)?;
        let mut dropped = Vec::new();
        let lower = if r == 0 {
            dropped.push(DroppedBranch::A1Below);
            self.a1(r)?
        } else {
            self.a1(r)?.min(self.a1(r - 1)?)
        };
        let upper = if r == self.m {
            dropped.push(DroppedBranch::A2Above);
            self.a2(r)?
        } else {
            self.a2(r)?.min(self.a2(r + 1)?)
        };
        let factor = lower.max(upper);
        Ok(PropBound {
            r,
            factor,
            value: factor * self.half_s(),
            dropped,
        })
    }

    /// Crossing point `(1 + q/p) m / 2` of the two branches of `e`.
    pub fn crossing(&self) -> Rational64 {
        (Rational64::one() + self.ratio()) * self.m / 2
    }

    /// `e_1(x) = (m - x)/m (1 + q/p)`.
    pub fn e1(&self, x: Rational64) -> Rational64 {
        (q64(self.m) - x) / self.m * (Rational64::one() + self.ratio())
    }

    /// `e_2(x) = x/m (1 - q/p)`.
    pub fn e2(&self, x: Rational64) -> Rational64 {
        x / self.m * (Rational64::one() - self.ratio())
    }

    /// Piecewise profile `e(x)` on `[0, m]`: `e_1` up to the crossing, `e_2` after.
    pub fn e_profile(&self, x: Rational64) -> Result<Rational64> {
        if x.is_negative() || x > q64(self.m) {
            return Err(Error::OutOfDomain(format!(
                "x = {x} outside [0, {}]",
                self.m
            )));
        }
        Ok(if x <= self.crossing() {
            self.e1(x)
        } else {
            self.e2(x)
        })
    }

    /// `b = (q/p)(m+1)/2 + (m-1)/2`.
    pub fn b_index(&self) -> Rational64 {
        self.ratio() * Rational64::new(self.m + 1, 2) + Rational64::new(self.m - 1, 2)
    }

    /// `b` when it is an integer.
    pub fn b_integral(&self) -> Option<i64> {
        let b = self.b_index();
        b.is_integer().then(|| b.to_integer())
    }

    /// Global lower bound `(1 - q²/p²)(m+1)²` for the eigenvalues of `D²`.
    pub fn global_bound(&self) -> Rational64 {
        let ratio = self.ratio();
        (Rational64::one() - ratio * ratio) * q64((self.m + 1) * (self.m + 1))
    }

    /// `e(r) - a_1(r)` (for `r <= b`) and `e(r) - a_2(r)` (for `r >= b+1`), each
    /// paired with its closed form. The two are mirror images under
    /// `(r, q) -> (m - r, -q)`, which is why the first carries the factor `r`
    /// exactly as the second carries `m - r`.
    pub fn comparison_identities(&self, r: i64) -> Result<Comparison> {
        self.check_r(r)?;
        let b = self.b_index();
        let b_next = b + 1;
        let rr = q64(r);
        let m = self.m;
        let e = self.e_profile(rr)?;
        let first = (rr <= b).then(|| {
            let closed = (b - rr) * (2 * r) / (m * (2 * r + 1));
            (e - self.a1(r).expect("r checked"), closed)
        });
        let second = (rr >= b_next).then(|| {
            let closed = (rr - b - 1) * (2 * (m - r)) / (m * (2 * m - 2 * r + 1));
            (e - self.a2(r).expect("r checked"), closed)
        });
        if first.is_none() && second.is_none() {
            return Err(Error::OutOfDomain(format!(
                "r = {r} lies strictly between b = {b} and b + 1"
            )));
        }
        Ok(Comparison {
            r,
            e_minus_a1: first,
            e_minus_a2: second,
        })
    }

    /// Full table over `r = 0..=m`.
    pub fn profile(&self) -> BoundProfile {
        let rows = (0..=self.m)
            .map(|r| ProfileRow {
                r,
                c_r: self.c_unchecked(r),
                a1: self.a1(r).expect("in range"),
                a2: self.a2(r).expect("in range"),
                e: self.e_profile(q64(r)).expect("in range"),
                e_bound: self.e_profile(q64(r)).expect("in range") * self.half_s(),
                prop_bound: self.prop_bound(r).expect("in range"),
            })
            .collect();
        BoundProfile {
            params: *self,
            rows,
            b: self.b_index(),
            crossing: self.crossing(),
            global: self.global_bound(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DroppedBranch {
    /// `a_1(r-1)` at `r = 0`.
    A1Below,
    /// `a_2(r+1)` at `r = m`.
    A2Above,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropBound {
    pub r: i64,
    pub factor: Rational64,
    pub value: Rational64,
    pub dropped: Vec<DroppedBranch>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub r: i64,
    /// `(e(r) - a_1(r), 2r(b-r)/(m(2r+1)))`.
    pub e_minus_a1: Option<(Rational64, Rational64)>,
    /// `(e(r) - a_2(r), 2(m-r)(r-b-1)/(m(2m-2r+1)))`.
    pub e_minus_a2: Option<(Rational64, Rational64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    pub r: i64,
    pub c_r: Rational64,
    pub a1: Rational64,
    pub a2: Rational64,
    pub e: Rational64,
    pub e_bound: Rational64,
    pub prop_bound: PropBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundProfile {
    pub params: SpincParams,
    pub rows: Vec<ProfileRow>,
    pub b: Rational64,
    pub crossing: Rational64,
    pub global: Rational64,
}

/// Eigenvalue `4(m-r)(r+1)α²` of `D²` on a Kählerian Killing spinor in `Σ_r ⊕ Σ_{r+1}`.
pub fn kk_eigenvalue(m: i64, r: i64, alpha: Rational64) -> Result<Rational64> {
    if r < 0 || r > m {
        return Err(Error::GradingOutOfRange {
            r,
            m: m.max(0) as usize,
        });
    }
    if alpha.is_zero() {
        return Err(Error::OutOfDomain(
            "Killing constant must be nonzero".into(),
        ));
    }
    Ok(q64(4 * (m - r) * (r + 1)) * alpha * alpha)
}

/// Spin^c structure carrying a Kählerian Killing spinor in `Σ_{r-1} ⊕ Σ_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct HmuStructure {
    pub params: SpincParams,
    pub r: i64,
    /// Gradings `(r-1, r)` carrying the spinor; `r-1 = b`.
    pub gradings: (i64, i64),
    /// `C(m+1, r)` when `p = m + 1` (complex projective space).
    pub projective_kk_dimension: Option<u64>,
    /// `1` when `m = 2ℓ+1` and `p = ℓ+1` (complex contact structure).
    pub contact_kk_dimension: Option<u64>,
    /// `r ∈ {0, m+1}`: the spinor degenerates to a parallel spinor.
    pub parallel: bool,
}

/// `q = p(2r - m - 1)/(m + 1)` when integral and admissible.
pub fn hmu_structure(m: i64, p: i64, r: i64) -> Option<HmuStructure> {
    if m < 1 || p < 1 || r < 0 || r > m + 1 {
        return None;
    }
    let num = p * (2 * r - m - 1);
    if num % (m + 1) != 0 {
        return None;
    }
    let params = SpincParams::new(m, p, num / (m + 1)).ok()?;
    let contact = m % 2 == 1 && p == (m + 1) / 2;
    Some(HmuStructure {
        params,
        r,
        gradings: (r - 1, r),
        projective_kk_dimension: (p == m + 1).then(|| binomial(m + 1, r)),
        contact_kk_dimension: contact.then_some(1),
        parallel: r == 0 || r == m + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: i64, p: i64, q: i64) -> SpincParams {
        SpincParams::new(m, p, q).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn rejects_invalid_parameters() {
        let err = SpincParams::new(2, 3, 2).unwrap_err();
        assert!(err.to_string().contains("p + q must be even"));
        assert!(SpincParams::new(2, 2, 4)
            .unwrap_err()
            .to_string()
            .contains("|q| <= p"));
        assert!(SpincParams::new(0, 2, 0).is_err());
        assert!(SpincParams::new(1, 0, 0).is_err());
    }

    #[test]
    fn c_r_examples() {
        let p = params(3, 2, 0);
        assert!((0..=3).all(|k| p.c_r(k).unwrap() == q64(1)));
        assert_eq!(params(2, 3, 1).c_r(2).unwrap(), r(2, 3));
        assert_eq!(params(3, 3, -3).c_r(0).unwrap(), q64(0));
        assert!(p.c_r(4).is_err());
    }

    #[test]
    fn a1_a2_examples() {
        assert_eq!(params(1, 2, 0).a1(0).unwrap(), q64(1));
        assert_eq!(params(3, 2, 0).a1(1).unwrap(), r(2, 3));
        let p = params(3, 4, 2);
        assert_eq!(p.c_r(2).unwrap(), r(5, 6));
        assert_eq!(p.a2(2).unwrap(), r(5, 9));
    }

    #[test]
    fn prop_bound_boundary_branches() {
        let pb = params(1, 2, 0).prop_bound(0).unwrap();
        assert_eq!(pb.value, q64(4));
        assert_eq!(pb.dropped, vec![DroppedBranch::A1Below]);
        let pb = params(2, 2, 0).prop_bound(1).unwrap();
        assert!(pb.value > q64(0));
        assert!(pb.dropped.is_empty());
        assert_eq!(
            params(2, 2, 0).prop_bound(2).unwrap().dropped,
            vec![DroppedBranch::A2Above]
        );
    }

    #[test]
    fn prop_bound_middle_spin_value() {
        // q = 0, m odd: at r = (m-1)/2 the estimate coincides with e(r)·S/2.
        for m in [1i64, 3, 5, 7] {
            let p = params(m, 2, 0);
            let rr = (m - 1) / 2;
            assert_eq!(
                p.prop_bound(rr).unwrap().value,
                p.e_profile(q64(rr)).unwrap() * p.half_s()
            );
            assert_eq!(p.prop_bound(rr).unwrap().value, q64((m + 1) * (m + 1)));
        }
    }

    #[test]
    fn e_profile_examples() {
        let p = params(1, 2, 0);
        assert_eq!(p.e_profile(q64(1)).unwrap(), q64(1));
        assert_eq!(p.e_profile(q64(1)).unwrap() * p.half_s(), q64(4));
        assert_eq!(params(2, 2, -2).e_profile(q64(0)).unwrap(), q64(0));
        assert_eq!(params(2, 3, 1).e_profile(q64(2)).unwrap(), r(2, 3));
        assert!(p.e_profile(q64(2)).is_err());
    }

    #[test]
    fn global_bound_examples() {
        let p = params(1, 2, 0);
        assert_eq!((p.b_index(), p.global_bound()), (q64(0), q64(4)));
        assert_eq!(params(1, 2, 2).global_bound(), q64(0));
        assert_eq!(params(1, 2, -2).global_bound(), q64(0));
        let p = params(3, 4, 2);
        assert_eq!(p.b_integral(), Some(2));
        assert_eq!(p.global_bound(), q64(12));
        assert_eq!(p.e1(q64(2)) * p.half_s(), q64(12));
        assert_eq!(p.e2(q64(3)) * p.half_s(), q64(12));
    }

    #[test]
    fn comparison_examples() {
        let p = params(3, 4, 2);
        let c = p.comparison_identities(1).unwrap();
        let (diff, closed) = c.e_minus_a1.unwrap();
        assert_eq!((diff, closed), (r(2, 9), r(2, 9)));
        // r = 0 always gives equality.
        assert_eq!(
            p.comparison_identities(0).unwrap().e_minus_a1.unwrap(),
            (q64(0), q64(0))
        );
        let at_b = p.comparison_identities(2).unwrap().e_minus_a1.unwrap();
        assert_eq!(at_b, (q64(0), q64(0)));
        let at_b1 = p.comparison_identities(3).unwrap().e_minus_a2.unwrap();
        assert_eq!(at_b1, (q64(0), q64(0)));
        // m even, q = 0: b = m/2 - 1/2, so r = m/2 is strictly between b and b+1.
        assert!(params(2, 2, 0).comparison_identities(1).is_err());
    }

    #[test]
    fn kk_eigenvalue_examples() {
        assert_eq!(kk_eigenvalue(1, 0, q64(-1)).unwrap(), q64(4));
        assert_eq!(kk_eigenvalue(4, 4, q64(1)).unwrap(), q64(0));
        assert_eq!(kk_eigenvalue(3, 1, q64(1)).unwrap(), q64(16));
        assert!(kk_eigenvalue(3, 1, q64(0)).is_err());
    }

    #[test]
    fn hmu_examples() {
        for m in 1..=6 {
            for rr in 0..=m + 1 {
                let h = hmu_structure(m, m + 1, rr).unwrap();
                assert_eq!(h.params.q(), 2 * rr - m - 1);
                assert_eq!(h.projective_kk_dimension, Some(binomial(m + 1, rr)));
                assert_eq!(h.params.b_integral(), Some(rr - 1));
            }
        }
        let h = hmu_structure(1, 2, 1).unwrap();
        assert_eq!((h.params.q(), h.projective_kk_dimension), (0, Some(2)));
        let h = hmu_structure(3, 4, 0).unwrap();
        assert!(h.parallel);
        assert_eq!(h.params.q(), -4);
        // Contact: m = 3 (ℓ = 1), p = 2, q = r - 2; parity forces r even.
        let h = hmu_structure(3, 2, 2).unwrap();
        assert_eq!((h.params.q(), h.contact_kk_dimension), (0, Some(1)));
        assert!(hmu_structure(3, 2, 1).is_none());
        assert!(hmu_structure(2, 2, 1).is_none());
    }

    mod properties {
        use super::super::*;
        use proptest::prelude::*;

        fn q64(n: i64) -> Rational64 {
            Rational64::from_integer(n)
        }

        fn admissible() -> impl Strategy<Value = SpincParams> {
            (1i64..=12, 1i64..=20)
                .prop_flat_map(|(m, p)| {
                    (
                        Just(m),
                        Just(p),
                        (-p..=p).prop_filter("parity", move |q| (p + q) % 2 == 0),
                    )
                })
                .prop_map(|(m, p, q)| SpincParams::new(m, p, q).unwrap())
        }

        proptest! {
            #[test]
            fn global_bound_closed_form(sp in admissible()) {
                let (m, ratio) = (sp.m(), sp.ratio());
                let expected = Rational64::new(m + 1, 2 * m) * (q64(1) - ratio * ratio) * sp.half_s();
                prop_assert_eq!(sp.global_bound(), expected);
                if let Some(b) = sp.b_integral() {
                    prop_assert_eq!(sp.e1(q64(b)) * sp.half_s(), expected);
                    prop_assert_eq!(sp.e2(q64(b + 1)) * sp.half_s(), expected);
                }
            }

            #[test]
            fn e_dominates_a1_a2(sp in admissible()) {
                let b = sp.b_index();
                let b_next = b + 1;
                for r in 0..=sp.m() {
                    let e = sp.e_profile(q64(r)).unwrap();
                    let rr = q64(r);
                    if rr <= b {
                        let a1 = sp.a1(r).unwrap();
                        prop_assert!(e >= a1);
                        // Both closed forms also vanish at the ends of the range.
                        prop_assert_eq!(e == a1, rr == b || r == 0);
                    }
                    if rr >= b_next {
                        let a2 = sp.a2(r).unwrap();
                        prop_assert!(e >= a2);
                        prop_assert_eq!(e == a2, rr == b + 1 || r == sp.m());
                    }
                    if rr <= b || rr >= b_next {
                        let c = sp.comparison_identities(r).unwrap();
                        for (diff, closed) in c.e_minus_a1.into_iter().chain(c.e_minus_a2) {
                            prop_assert_eq!(diff, closed);
                        }
                    }
                }
            }

            #[test]
            fn e_is_v_shaped(sp in admissible()) {
                let m = sp.m();
                let xs: Vec<Rational64> = (0..=4 * m).map(|k| Rational64::new(k, 4)).collect();
                let c = sp.crossing();
                for w in xs.windows(2) {
                    let (e0, e1) = (sp.e_profile(w[0]).unwrap(), sp.e_profile(w[1]).unwrap());
                    if w[1] <= c {
                        prop_assert!(e1 <= e0);
                    } else if w[0] >= c {
                        prop_assert!(e1 >= e0);
                    }
                }
                if sp.b_integral().is_some() {
                    for r in 0..=m {
                        prop_assert!(sp.e_profile(q64(r)).unwrap() * sp.half_s() >= sp.global_bound());
                    }
                }
            }

            #[test]
            fn prop_bound_between_zero_and_e(sp in admissible(), r_frac in 0.0f64..1.0) {
                let r = ((sp.m() as f64) * r_frac).round() as i64;
                let pb = sp.prop_bound(r).unwrap();
                prop_assert!(pb.value >= q64(0));
                prop_assert_eq!(pb.value, pb.factor * sp.half_s());
            }
        }

        #[test]
        fn equality_cases_of_global_bound() {
            for m in 1..=12i64 {
                let sp = SpincParams::new(m, 2, 0).unwrap();
                if m % 2 == 1 {
                    assert_eq!(sp.global_bound(), q64((m + 1) * (m + 1)));
                    assert_eq!(sp.b_integral(), Some((m - 1) / 2));
                } else {
                    assert_eq!(sp.b_integral(), None);
                    let expected = Rational64::new(m + 2, 2 * m);
                    assert_eq!(sp.e1(q64(m / 2 - 1)), expected);
                    assert_eq!(sp.e2(q64(m / 2 + 1)), expected);
                }
            }
        }

        #[test]
        fn hmu_parity_and_integrality() {
            for m in 1..=12i64 {
                for p in 1..=20i64 {
                    for r in 0..=m + 1 {
                        let num = p * (2 * r - m - 1);
                        let valid = num % (m + 1) == 0 && (p + num / (m + 1)) % 2 == 0;
                        let h = hmu_structure(m, p, r);
                        assert_eq!(h.is_some(), valid, "m={m} p={p} r={r}");
                        if let Some(h) = h {
                            assert_eq!(h.params.b_integral(), Some(r - 1));
                        }
                    }
                }
            }
        }
    }
}
