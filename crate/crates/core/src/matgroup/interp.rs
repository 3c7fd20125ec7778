use super::{epsilon, PSLElem, SLMat};
use crate::error::{Error, Result};
use crate::rings::RingSpec;

/// Involutions realising the ring structure on `E_{1,d}` by commutators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTauPair {
    pub d: usize,
    pub sigma: PSLElem,
    pub tau: PSLElem,
}

/// Signed permutation matrix swapping `i` and `j` (zero-based) with
/// `-1` on the swap and on `extra`'s diagonal, so that it squares to `I`.
fn signed_swap(ring: RingSpec, d: usize, i: usize, j: usize, extra: usize) -> SLMat {
    let mut entries = vec![ring.zero(); d * d];
    for k in 0..d {
        if k != i && k != j {
            entries[k * d + k] = if k == extra { ring.from_i64(-1) } else { ring.one() };
        }
    }
    entries[i * d + j] = ring.from_i64(-1);
    entries[j * d + i] = ring.from_i64(-1);
    SLMat::new_unchecked(ring, d, entries)
}

pub fn sigma_tau(ring: RingSpec, d: usize) -> Result<SigmaTauPair> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("sigma/tau need d >= 3, got {d}")));
    }
    let sigma = PSLElem::new(signed_swap(ring, d, 1, d - 1, 0));
    let tau = PSLElem::new(signed_swap(ring, d, 0, 1, d - 1));
    let pair = SigmaTauPair { d, sigma, tau };
    self_check(ring, &pair)?;
    Ok(pair)
}

fn self_check(ring: RingSpec, pair: &SigmaTauPair) -> Result<()> {
    let d = pair.d;
    let fail = |what: &str| Error::Internal(format!("sigma/tau self-check failed: {what}"));
    if !pair.sigma.mul(&pair.sigma)?.is_identity() || !pair.tau.mul(&pair.tau)?.is_identity() {
        return Err(fail("not an involution"));
    }
    for a in -3..=3 {
        let a = ring.from_i64(a);
        let eps = epsilon(ring, d, &a)?;
        let s = pair.sigma.mul(&eps)?.mul(&pair.sigma)?;
        let t = pair.tau.mul(&eps)?.mul(&pair.tau)?;
        if s != super::elem_mat(ring, d, 1, 2, &a)? || t != super::elem_mat(ring, d, 2, d, &a)? {
            return Err(fail("conjugation identity"));
        }
    }
    Ok(())
}

fn check_upsilon(x: &PSLElem) -> Result<()> {
    x.epsilon_coordinate().map(|_| ()).ok_or(Error::NotInUpsilon)
}

pub fn upsilon_add(x: &PSLElem, y: &PSLElem) -> Result<PSLElem> {
    check_upsilon(x)?;
    check_upsilon(y)?;
    x.mul(y)
}

/// `[σ x σ, τ y τ]`.
pub fn upsilon_mul(pair: &SigmaTauPair, x: &PSLElem, y: &PSLElem) -> Result<PSLElem> {
    check_upsilon(x)?;
    check_upsilon(y)?;
    let sx = pair.sigma.mul(x)?.mul(&pair.sigma)?;
    let ty = pair.tau.mul(y)?.mul(&pair.tau)?;
    sx.commutator(&ty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::elem_mat;

    #[test]
    fn sigma_tau_examples() {
        let z = RingSpec::Integers;
        let p3 = sigma_tau(z, 3).unwrap();
        let e2 = epsilon(z, 3, &z.from_i64(2)).unwrap();
        let conj = p3.sigma.mul(&e2).unwrap().mul(&p3.sigma).unwrap();
        assert_eq!(conj, elem_mat(z, 3, 1, 2, &z.from_i64(2)).unwrap());
        assert!(p3.sigma.mul(&p3.sigma).unwrap().is_identity());
        let p4 = sigma_tau(z, 4).unwrap();
        let em = epsilon(z, 4, &z.from_i64(-1)).unwrap();
        let conj = p4.tau.mul(&em).unwrap().mul(&p4.tau).unwrap();
        assert_eq!(conj, elem_mat(z, 4, 2, 4, &z.from_i64(-1)).unwrap());
        assert!(sigma_tau(z, 2).is_err());
        for ring in [RingSpec::Gaussian, RingSpec::IntegersInverted(6), RingSpec::Modular(7)] {
            for d in 3..=5 {
                let p = sigma_tau(ring, d).unwrap();
                assert_eq!(p.sigma.lift().det(), ring.one());
            }
        }
    }

    #[test]
    fn upsilon_examples() {
        let z = RingSpec::Integers;
        let p = sigma_tau(z, 3).unwrap();
        let eps = |a: i64| epsilon(z, 3, &z.from_i64(a)).unwrap();
        assert_eq!(upsilon_add(&eps(1), &eps(1)).unwrap(), eps(2));
        assert_eq!(upsilon_mul(&p, &eps(0), &eps(7)).unwrap(), eps(0));
        assert_eq!(upsilon_mul(&p, &eps(2), &eps(3)).unwrap(), eps(6));
        let off = elem_mat(z, 3, 1, 2, &z.one()).unwrap();
        assert!(matches!(upsilon_add(&off, &eps(1)), Err(Error::NotInUpsilon)));
        assert!(matches!(upsilon_mul(&p, &eps(1), &off), Err(Error::NotInUpsilon)));
    }

    #[test]
    fn upsilon_is_a_copy_of_the_ring() {
        let cases: Vec<(RingSpec, Vec<_>)> = vec![
            (RingSpec::Integers, (-4..=4).map(|a| RingSpec::Integers.from_i64(a)).collect()),
            (
                RingSpec::Gaussian,
                [(1, 1), (0, 1), (2, -1), (-1, 0), (0, 0)]
                    .iter()
                    .map(|&(a, b)| RingSpec::Gaussian.gaussian(a, b).unwrap())
                    .collect(),
            ),
            (
                RingSpec::IntegersInverted(6),
                [(1, 2), (-3, 4), (5, 1), (1, 6)]
                    .iter()
                    .map(|&(a, b)| RingSpec::IntegersInverted(6).fraction(a, b).unwrap())
                    .collect(),
            ),
        ];
        for (ring, window) in cases {
            for d in [3, 4] {
                let p = sigma_tau(ring, d).unwrap();
                for a in &window {
                    for b in &window {
                        let (ea, eb) = (epsilon(ring, d, a).unwrap(), epsilon(ring, d, b).unwrap());
                        let sum = upsilon_add(&ea, &eb).unwrap();
                        let prod = upsilon_mul(&p, &ea, &eb).unwrap();
                        assert_eq!(sum.epsilon_coordinate(), Some(a.add(b).unwrap()));
                        assert_eq!(prod.epsilon_coordinate(), Some(a.mul(b).unwrap()), "{ring} d={d} {a}*{b}");
                    }
                }
            }
        }
    }
}
