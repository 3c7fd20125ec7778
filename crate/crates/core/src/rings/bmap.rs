//! The bijection `b: Z -> O` with `b(0) = 0` and `b(1) = 1`.
//!
//! Every variant is `b = swap ∘ enum ∘ zigzag`, where `enum: N -> O` is a
//! fixed enumeration with `enum(0) = 0` and `swap` exchanges `1` with
//! `enum(2)` (the value zigzag sends `1` to).
//!
//! * `Z`: the identity.
//! * `Z[i]`: square rings `max(|re|, |im|) = r`, each walked
//!   counterclockwise from `(r, 0)`; ring `r` occupies indices
//!   `(2r-1)^2 .. (2r+1)^2`.
//! * `Z[1/N]`: `x` is written `a / N^k` with `k` minimal (so `N ∤ a` when
//!   `k > 0`); index `pair(k, j)` with `j = zigzag(a)` for `k = 0` and
//!   `j = zigzag(a div N) * (N-1) + (a mod N) - 1` otherwise.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{RElem, RingSpec, Value};
use crate::error::{Error, Result};
use crate::pairing::{pair, unpair, unzigzag, zigzag};

#[derive(Clone, Debug)]
pub struct BMap {
    ring: RingSpec,
    swap: Option<RElem>,
}

impl BMap {
    pub fn new(ring: RingSpec) -> Result<Self> {
        if ring.is_finite() {
            return Err(Error::FiniteRing("b_map"));
        }
        let mut map = BMap { ring, swap: None };
        let image_of_one = map.enumerate(&BigUint::from(2u32));
        if !image_of_one.is_one() {
            map.swap = Some(image_of_one);
        }
        Ok(map)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    fn transpose(&self, x: RElem) -> RElem {
        match &self.swap {
            Some(u) if x.is_one() => u.clone(),
            Some(u) if x == *u => self.ring.one(),
            _ => x,
        }
    }

    pub fn apply(&self, k: &BigInt) -> RElem {
        self.transpose(self.enumerate(&zigzag(k)))
    }

    pub fn apply_i64(&self, k: i64) -> RElem {
        self.apply(&BigInt::from(k))
    }

    pub fn invert(&self, x: &RElem) -> Result<BigInt> {
        if x.ring() != self.ring {
            return Err(Error::RingMismatch(x.ring().to_string(), self.ring.to_string()));
        }
        Ok(unzigzag(&self.index(&self.transpose(x.clone()))))
    }

    fn enumerate(&self, n: &BigUint) -> RElem {
        match self.ring {
            RingSpec::Integers => self.ring.from_bigint(&unzigzag(n)),
            RingSpec::Gaussian => {
                let (re, im) = spiral_point(n);
                self.ring.gaussian_big(&re, &im).unwrap()
            }
            RingSpec::IntegersInverted(base) => {
                let (k, j) = unpair(n);
                let a = if k.is_zero() {
                    unzigzag(&j)
                } else {
                    let (t, r) = j.div_rem(&BigUint::from(base - 1));
                    unzigzag(&t) * base + BigInt::from(r) + 1
                };
                let den = BigInt::from(base).pow(u32::try_from(&k).expect("exponent fits u32"));
                let ring = self.ring;
                RElem { ring, value: Value::Frac(BigRational::new(a, den)) }
            }
            _ => unreachable!("finite rings are rejected in BMap::new"),
        }
    }

    fn index(&self, x: &RElem) -> BigUint {
        match (self.ring, x.value()) {
            (RingSpec::Integers, Value::Int(a)) => zigzag(a),
            (RingSpec::Gaussian, Value::Gauss(re, im)) => spiral_index(re, im),
            (RingSpec::IntegersInverted(base), Value::Frac(q)) => {
                let n = BigInt::from(base);
                let mut k = 0u32;
                let mut scaled = q.clone();
                while !scaled.is_integer() {
                    scaled *= BigRational::from_integer(n.clone());
                    k += 1;
                }
                let a = scaled.to_integer();
                let j = if k == 0 {
                    zigzag(&a)
                } else {
                    let (t, r) = a.div_mod_floor(&n);
                    let r: BigUint = (r - BigInt::one()).try_into().expect("N does not divide a");
                    zigzag(&t) * (base - 1) + r
                };
                pair(&BigUint::from(k), &j)
            }
            _ => unreachable!("element ring checked by caller"),
        }
    }
}

fn spiral_index(re: &BigInt, im: &BigInt) -> BigUint {
    let r: BigInt = re.abs().max(im.abs());
    if r.is_zero() {
        return BigUint::zero();
    }
    let offset = (&r * 2i32 - 1i32).pow(2u32);
    let pos = if *re == r && !im.is_negative() && *im < r {
        im.clone()
    } else if *im == r {
        &r + (&r - re)
    } else if *re == -&r {
        &r * 3 + (&r - im)
    } else if *im == -&r {
        &r * 5 + (re + &r)
    } else {
        &r * 7 + (im + &r)
    };
    (offset + pos).try_into().unwrap()
}

fn spiral_point(n: &BigUint) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let n = BigInt::from(n.clone());
    // smallest r with (2r+1)^2 > n
    let mut r: BigInt = (n.sqrt() + 1i32) / 2i32;
    while (&r * 2i32 + 1i32).pow(2u32) <= n {
        r += 1;
    }
    while r > BigInt::one() && (&r * 2i32 - 1i32).pow(2u32) > n {
        r -= 1;
    }
    let pos = n - (&r * 2i32 - 1i32).pow(2u32);
    let seg = |k: i32| &r * k;
    if pos < seg(1) {
        (r.clone(), pos)
    } else if pos < seg(3) {
        (&r - (pos - &r), r.clone())
    } else if pos < seg(5) {
        (-&r, &r - (pos - seg(3)))
    } else if pos < seg(7) {
        (pos - seg(5) - &r, -&r)
    } else {
        (r.clone(), pos - seg(7) - &r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn fixes_zero_and_one() {
        for ring in [RingSpec::Integers, RingSpec::Gaussian, RingSpec::IntegersInverted(6), RingSpec::IntegersInverted(2)] {
            let b = BMap::new(ring).unwrap();
            assert!(b.apply_i64(0).is_zero(), "{ring}");
            assert!(b.apply_i64(1).is_one(), "{ring}");
        }
        assert!(BMap::new(RingSpec::PrimeField(5)).is_err());
    }

    #[test]
    fn integers_use_the_identity() {
        let b = BMap::new(RingSpec::Integers).unwrap();
        assert_eq!(b.apply_i64(-3), RingSpec::Integers.from_i64(-3));
    }

    #[test]
    fn spiral_walks_rings_in_order() {
        let pts: Vec<_> = (0u32..9).map(|n| spiral_point(&n.into())).collect();
        let expected = [(0, 0), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
        for ((re, im), (er, ei)) in pts.iter().zip(expected) {
            assert_eq!((re, im), (&BigInt::from(er), &BigInt::from(ei)));
        }
    }

    #[test]
    fn window_is_injective_and_round_trips() {
        for ring in [RingSpec::Gaussian, RingSpec::IntegersInverted(6), RingSpec::Integers] {
            let b = BMap::new(ring).unwrap();
            let mut seen = HashSet::new();
            for k in -10_000i64..=10_000 {
                let x = b.apply_i64(k);
                assert_eq!(b.invert(&x).unwrap(), BigInt::from(k), "{ring} at {k}");
                assert!(seen.insert(x), "{ring}: repeated value at {k}");
            }
        }
    }

    #[test]
    fn inverse_covers_small_elements() {
        let b = BMap::new(RingSpec::Gaussian).unwrap();
        for re in -20..=20 {
            for im in -20..=20 {
                let x = RingSpec::Gaussian.gaussian(re, im).unwrap();
                assert_eq!(b.apply(&b.invert(&x).unwrap()), x);
            }
        }
        let z6 = RingSpec::IntegersInverted(6);
        let b = BMap::new(z6).unwrap();
        for num in -40..=40 {
            for den in [1, 2, 3, 4, 6, 9, 36, 216] {
                let x = z6.fraction(num, den).unwrap();
                assert_eq!(b.apply(&b.invert(&x).unwrap()), x);
            }
        }
    }
}
