use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Ideal, RElem, RingSpec, Value};
use crate::error::{Error, Result};

/// An enumerated finite quotient `R/I` with its projection.
#[derive(Clone, Debug)]
pub struct FiniteRingQuotient {
    source: RingSpec,
    ideal: Ideal,
    target: RingSpec,
    elements: Vec<RElem>,
}

fn target_ring(ideal: &Ideal) -> Result<RingSpec> {
    if ideal.is_zero() {
        return Err(Error::InfiniteQuotient);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let g = ideal.generator();
    match ideal.ring() {
        RingSpec::Integers | RingSpec::IntegersInverted(_) | RingSpec::Modular(_) | RingSpec::PrimeField(_) => {
            let m = g
                .to_bigint()
                .and_then(|m| m.to_u64())
                .ok_or_else(|| Error::Unsupported(format!("modulus {g} too large")))?;
            RingSpec::modular(m)
        }
        RingSpec::Gaussian | RingSpec::GaussianMod(..) => {
            let (re, im) = g.gauss_parts().unwrap();
            let (re, im) = (
                re.to_i64().ok_or_else(|| Error::Unsupported(format!("modulus {g} too large")))?,
                im.to_i64().ok_or_else(|| Error::Unsupported(format!("modulus {g} too large")))?,
            );
            RingSpec::gaussian_mod(re, im)
        }
    }
}

/// Enumerates `R/I`; the zero ideal is refused and the unit ideal is flagged.
pub fn quotient_ring(ideal: &Ideal) -> Result<FiniteRingQuotient> {
    let target = target_ring(ideal)?;
    Ok(FiniteRingQuotient {
        source: ideal.ring(),
        ideal: ideal.clone(),
        target,
        elements: target.elements()?,
    })
}

impl FiniteRingQuotient {
    pub fn source(&self) -> RingSpec {
        self.source
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn target(&self) -> RingSpec {
        self.target
    }

    pub fn elements(&self) -> &[RElem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The residue of `x`.
    pub fn project(&self, x: &RElem) -> Result<RElem> {
        project_to(self.target, x)
    }

    /// Index of the residue of `x` in [`FiniteRingQuotient::elements`].
    pub fn project_index(&self, x: &RElem) -> Result<usize> {
        let r = self.project(x)?;
        self.target
            .residue_index(&r)
            .ok_or_else(|| Error::Internal(format!("residue {r} has no index")))
    }
}

/// Reduces `x` into the finite ring `target`, which must be a quotient of
/// the ring of `x`.
pub(crate) fn project_to(target: RingSpec, x: &RElem) -> Result<RElem> {
    let mismatch = || Error::RingMismatch(x.ring().to_string(), target.to_string());
    match (x.value(), target) {
        (Value::Int(a), RingSpec::Modular(_) | RingSpec::PrimeField(_)) => Ok(target.from_bigint(a)),
        (Value::Frac(q), RingSpec::Modular(m) | RingSpec::PrimeField(m)) => {
            let den = q.denom().mod_floor(&BigInt::from(m)).to_u64().unwrap();
            let inv = super::mod_inverse_u64(den, m).ok_or_else(mismatch)?;
            Ok(target.from_bigint(q.numer()).mul_unchecked(&target.from_i64(inv as i64)))
        }
        (Value::Residue(r), RingSpec::Modular(m) | RingSpec::PrimeField(m)) => {
            let src = x.ring().size().unwrap();
            if !src.is_multiple_of(m) {
                return Err(mismatch());
            }
            Ok(target.from_i64((r % m) as i64))
        }
        (Value::Gauss(a, b), RingSpec::GaussianMod(..)) => target.gaussian_big(a, b),
        (Value::Int(a), RingSpec::GaussianMod(..)) => Ok(target.from_bigint(a)),
        (Value::GaussResidue(u, v), RingSpec::GaussianMod(..)) => target.gaussian(*u, *v),
        _ => Err(mismatch()),
    }
}
