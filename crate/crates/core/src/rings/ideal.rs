use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{is_prime_u64, quotient_ring, RElem, RingSpec, Value};
use crate::error::{Error, Result};

/// A two-generator ideal `(g1, g2)` together with its canonical single
/// generator.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: RingSpec,
    g1: RElem,
    g2: RElem,
    generator: RElem,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.generator == other.generator
    }
}

impl Eq for Ideal {}

fn canonical_generator(ring: RingSpec, g1: &RElem, g2: &RElem) -> Result<RElem> {
    match ring {
        RingSpec::Integers | RingSpec::IntegersInverted(_) | RingSpec::Gaussian => g1.gcd(g2),
        RingSpec::Modular(m) | RingSpec::PrimeField(m) => {
            let (Value::Residue(a), Value::Residue(b)) = (g1.value(), g2.value()) else {
                unreachable!()
            };
            let d = a.gcd(b).gcd(&m);
            Ok(ring.from_i64((d % m) as i64))
        }
        RingSpec::GaussianMod(ga, gb) => {
            let gauss = RingSpec::Gaussian;
            let lift = |x: &RElem| {
                let (re, im) = x.gauss_parts().unwrap();
                gauss.gaussian_big(&re, &im).unwrap()
            };
            let g = gauss.gaussian(ga, gb)?;
            let d = lift(g1).gcd(&lift(g2))?.gcd(&g)?;
            let (re, im) = d.gauss_parts().unwrap();
            ring.gaussian_big(&re, &im)
        }
    }
}

impl Ideal {
    pub fn new(g1: RElem, g2: RElem) -> Result<Self> {
        if g1.ring() != g2.ring() {
            return Err(Error::RingMismatch(g1.ring().to_string(), g2.ring().to_string()));
        }
        let ring = g1.ring();
        let generator = canonical_generator(ring, &g1, &g2)?;
        Ok(Ideal { ring, g1, g2, generator })
    }

    pub fn principal(g: RElem) -> Result<Self> {
        let zero = g.ring().zero();
        Ideal::new(g, zero)
    }

    pub fn zero(ring: RingSpec) -> Self {
        Ideal::principal(ring.zero()).expect("zero ideal")
    }

    /// Parses `(g)` or `(g1, g2)` over `ring`.
    pub fn parse(ring: RingSpec, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse {
                what: "ideal",
                input: s.to_string(),
                reason: "expected (g) or (g1, g2)".into(),
            })?;
        let parts: Vec<&str> = inner.split(',').collect();
        match parts.as_slice() {
            [g] => Ideal::principal(ring.parse_elem(g)?),
            [g1, g2] => Ideal::new(ring.parse_elem(g1)?, ring.parse_elem(g2)?),
            _ => Err(Error::Parse {
                what: "ideal",
                input: s.to_string(),
                reason: "at most two generators".into(),
            }),
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn generators(&self) -> (&RElem, &RElem) {
        (&self.g1, &self.g2)
    }

    pub fn generator(&self) -> &RElem {
        &self.generator
    }

    pub fn is_zero(&self) -> bool {
        self.generator.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.generator.is_unit()
    }

    pub fn contains(&self, x: &RElem) -> Result<bool> {
        ideal_membership(self, x)
    }

    /// Equality as sets, decided by mutual membership of the given generators.
    pub fn same_as(&self, other: &Ideal) -> Result<bool> {
        Ok(other.contains(&self.g1)?
            && other.contains(&self.g2)?
            && self.contains(&other.g1)?
            && self.contains(&other.g2)?)
    }

    /// Size of `R/I` without enumerating it; `None` for the zero ideal of an
    /// infinite ring.
    pub fn quotient_size(&self) -> Option<BigInt> {
        if self.is_zero() {
            return self.ring.size().map(BigInt::from);
        }
        Some(match self.ring {
            RingSpec::Gaussian => self.generator.euclid_norm().ok()?,
            RingSpec::GaussianMod(..) => {
                let (re, im) = self.generator.gauss_parts()?;
                let d = RingSpec::Gaussian.gaussian_big(&re, &im).ok()?;
                d.euclid_norm().ok()?
            }
            _ => self.generator.to_bigint()?.abs(),
        })
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.generator)
    }
}

/// `x ∈ R g1 + R g2`, decided exactly through the canonical generator.
pub fn ideal_membership(ideal: &Ideal, x: &RElem) -> Result<bool> {
    if x.ring() != ideal.ring {
        return Err(Error::RingMismatch(x.ring().to_string(), ideal.ring.to_string()));
    }
    let g = &ideal.generator;
    match ideal.ring {
        RingSpec::Modular(_) | RingSpec::PrimeField(_) => {
            let (Value::Residue(d), Value::Residue(v)) = (g.value(), x.value()) else {
                unreachable!()
            };
            Ok(if *d == 0 { *v == 0 } else { v % d == 0 })
        }
        RingSpec::GaussianMod(ga, gb) => {
            let gauss = RingSpec::Gaussian;
            let (gr, gi) = g.gauss_parts().unwrap();
            let (xr, xi) = x.gauss_parts().unwrap();
            let d = gauss.gaussian_big(&gr, &gi)?.gcd(&gauss.gaussian(ga, gb)?)?;
            Ok(gauss.gaussian_big(&xr, &xi)?.div_exact(&d)?.is_some())
        }
        _ => Ok(x.div_exact(g)?.is_some()),
    }
}

/// True iff `R/I` is a field, decided by scanning the enumerated quotient.
pub fn is_maximal(ideal: &Ideal) -> Result<bool> {
    if ideal.is_zero() || ideal.is_unit() {
        return Err(Error::NotProperNonzero);
    }
    let q = quotient_ring(ideal)?;
    let elems = q.elements();
    let one = q.target().one();
    Ok(elems
        .iter()
        .filter(|a| !a.is_zero())
        .all(|a| elems.iter().any(|b| a.mul_unchecked(b) == one)))
}

fn two_squares(p: u64) -> (i64, i64) {
    let mut a = 1u64;
    while a * a < p {
        let rest = p - a * a;
        let b = (rest as f64).sqrt().round() as u64;
        for b in b.saturating_sub(1)..=b + 1 {
            if b * b == rest {
                return (a.max(b) as i64, a.min(b) as i64);
            }
        }
        a += 1;
    }
    unreachable!("p = 1 mod 4 is a sum of two squares")
}

/// All maximal ideals with residue field of size `<= norm_bound`, sorted
/// by quotient size and then by the printed generator.
pub fn enumerate_maximal_ideals(ring: RingSpec, norm_bound: u64) -> Result<Vec<Ideal>> {
    let primes = (2..=norm_bound).filter(|&p| is_prime_u64(p));
    let mut out: Vec<(u64, Ideal)> = Vec::new();
    match ring {
        RingSpec::Integers => {
            for p in primes {
                out.push((p, Ideal::principal(ring.from_i64(p as i64))?));
            }
        }
        RingSpec::IntegersInverted(n) => {
            for p in primes.filter(|p| n % p != 0) {
                out.push((p, Ideal::principal(ring.from_i64(p as i64))?));
            }
        }
        RingSpec::Gaussian => {
            for p in primes {
                if p == 2 {
                    out.push((2, Ideal::principal(ring.gaussian(1, 1)?)?));
                } else if p % 4 == 1 {
                    let (a, b) = two_squares(p);
                    out.push((p, Ideal::principal(ring.gaussian(a, b)?)?));
                    out.push((p, Ideal::principal(ring.gaussian(a, -b)?)?));
                }
            }
            let mut p = 3u64;
            while p * p <= norm_bound {
                if is_prime_u64(p) && p % 4 == 3 {
                    out.push((p * p, Ideal::principal(ring.from_i64(p as i64))?));
                }
                p += 1;
            }
        }
        _ => return Err(Error::FiniteRing("enumerate_maximal_ideals")),
    }
    out.sort_by(|(na, a), (nb, b)| na.cmp(nb).then_with(|| a.to_string().cmp(&b.to_string())));
    Ok(out.into_iter().map(|(_, i)| i).collect())
}
