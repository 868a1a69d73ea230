//! Seeded random inputs for the identity suites.

use num::traits::Zero;
use rand::Rng;

use crate::error::Result;
use crate::fock::{CliffordVector, SpinorModule};
use crate::forms::{effective_basis, FormElement};
use crate::scalar::C64;
use crate::twistor::{TwistorContext, TwistorElement};

pub fn complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Uniform vector in `[-1, 1]^{2m}`.
pub fn real_vector<R: Rng>(rng: &mut R, m: usize) -> CliffordVector<C64> {
    let comps = (0..2 * m)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0))
        .collect();
    CliffordVector::new(comps).expect("even length")
}

pub fn spinor<R: Rng>(rng: &mut R, module: &SpinorModule) -> Vec<C64> {
    (0..module.dim()).map(|_| complex(rng)).collect()
}

pub fn graded_spinor<R: Rng>(rng: &mut R, module: &SpinorModule, r: usize) -> Vec<C64> {
    let mut v = vec![C64::zero(); module.dim()];
    for b in module.basis_of_grading(r) {
        v[b] = complex(rng);
    }
    v
}

pub fn twistor<R: Rng>(
    rng: &mut R,
    ctx: &TwistorContext<C64>,
    r: usize,
) -> Result<TwistorElement<C64>> {
    let module = ctx.module();
    let comps = (0..2 * module.m())
        .map(|_| graded_spinor(rng, module, r))
        .collect();
    ctx.element(r, comps)
}

/// Random combination of an effective `(k, k')` basis, or `None` when the space is trivial.
pub fn effective_form<R: Rng>(rng: &mut R, basis: &[FormElement<C64>]) -> Option<FormElement<C64>> {
    let first = basis.first()?;
    let mut out = FormElement::zero(first.m());
    for b in basis {
        out = out.add(&b.scale(&complex(rng)));
    }
    Some(out)
}

/// Convenience wrapper building the basis first.
pub fn effective_form_of<R: Rng>(
    rng: &mut R,
    m: usize,
    k: usize,
    kp: usize,
) -> Result<Option<FormElement<C64>>> {
    Ok(effective_form(rng, &effective_basis(m, k, kp)?))
}
