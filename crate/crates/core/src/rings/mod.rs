//! Exact arithmetic in the desk rings `Z`, `Z[1/N]`, `Z[i]` and their
//! finite quotients.

mod bmap;
mod ideal;
mod quotient;

pub use bmap::BMap;
pub use ideal::{enumerate_maximal_ideals, ideal_membership, is_maximal, Ideal};
pub use quotient::{quotient_ring, FiniteRingQuotient};

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The supported rings.
///
/// `GaussianMod(a, b)` is the finite quotient `Z[i]/(a+bi)`; it appears as
/// the target of reductions of `Z[i]` and is not one of the S-integer rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Integers,
    IntegersInverted(u64),
    Gaussian,
    Modular(u64),
    PrimeField(u64),
    GaussianMod(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(BigInt),
    Frac(BigRational),
    Gauss(BigInt, BigInt),
    Residue(u64),
    GaussResidue(i64, i64),
}

/// A ring element in canonical reduced form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RElem {
    ring: RingSpec,
    value: Value,
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Removes from `a` every prime factor it shares with `n`.
fn strip_factors(a: &BigInt, n: u64) -> BigInt {
    let n = BigInt::from(n);
    let mut a = a.clone();
    if a.is_zero() {
        return a;
    }
    loop {
        let g = a.gcd(&n);
        if g.is_one() {
            return a;
        }
        a /= g;
    }
}

fn denominator_ok(den: &BigInt, n: u64) -> bool {
    strip_factors(den, n).abs().is_one()
}

pub fn mod_inverse_u64(x: u64, m: u64) -> Option<u64> {
    let e = (x as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Hermite basis `{(c, h12), (0, h22)}` of the lattice `(a+bi)` in `Z^2`.
fn gauss_hnf(a: i64, b: i64) -> (i64, i64, i64) {
    let (a, b) = (a as i128, b as i128);
    let norm = a * a + b * b;
    let e = a.extended_gcd(&(-b));
    let (mut c, mut u, mut v) = (e.gcd, e.x, e.y);
    if c < 0 {
        c = -c;
        u = -u;
        v = -v;
    }
    let h22 = norm / c;
    let h12 = (u * b + v * a).rem_euclid(h22);
    (c as i64, h12 as i64, h22 as i64)
}

fn gauss_reduce(a: i64, b: i64, x: &BigInt, y: &BigInt) -> (i64, i64) {
    let norm = BigInt::from(a) * a + BigInt::from(b) * b;
    let x = x.mod_floor(&norm).to_i128().unwrap();
    let y = y.mod_floor(&norm).to_i128().unwrap();
    let (c, h12, h22) = gauss_hnf(a, b);
    let q = Integer::div_floor(&x, &(c as i128));
    let xr = x - q * c as i128;
    let yr = (y - q * h12 as i128).rem_euclid(h22 as i128);
    (xr as i64, yr as i64)
}

/// Unit-normalised associate of a Gaussian integer: `re > 0` and
/// `-re < im <= re`, or zero.
pub(crate) fn gauss_normalize(re: &BigInt, im: &BigInt) -> (BigInt, BigInt) {
    let mut cur = (re.clone(), im.clone());
    if cur.0.is_zero() && cur.1.is_zero() {
        return cur;
    }
    for _ in 0..4 {
        let (r, i) = &cur;
        if r.is_positive() && -r < *i && i <= r {
            return cur;
        }
        // multiply by i: (r + i*im) * i = -im + r i
        cur = (-cur.1.clone(), cur.0.clone());
    }
    unreachable!("every nonzero Gaussian integer has a normalised associate")
}

pub(crate) fn fmt_gauss(f: &mut fmt::Formatter<'_>, re: &BigInt, im: &BigInt) -> fmt::Result {
    if im.is_zero() {
        return write!(f, "{re}");
    }
    let imag = |f: &mut fmt::Formatter<'_>, m: &BigInt| {
        if m.is_one() {
            write!(f, "i")
        } else {
            write!(f, "{m}i")
        }
    };
    if re.is_zero() {
        if im.is_negative() {
            write!(f, "-")?;
        }
        return imag(f, &im.abs());
    }
    write!(f, "{re}{}", if im.is_negative() { "-" } else { "+" })?;
    imag(f, &im.abs())
}

fn parse_bigint(s: &str) -> Option<BigInt> {
    BigInt::from_str(s.trim()).ok()
}

fn parse_gauss_literal(s: &str) -> Option<(BigInt, BigInt)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    if !s.ends_with('i') {
        return Some((parse_bigint(&s)?, BigInt::zero()));
    }
    let body = &s[..s.len() - 1];
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
        .map(|(k, _)| k)
        .next_back();
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        BigInt::zero()
    } else {
        parse_bigint(re_part)?
    };
    let im = match im_part {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        t => parse_bigint(t.strip_prefix('+').unwrap_or(t))?,
    };
    Some((re, im))
}

impl RingSpec {
    pub fn integers_inverted(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("Z[1/N] needs N >= 2, got {n}")));
        }
        Ok(RingSpec::IntegersInverted(n))
    }

    pub fn modular(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("Z/m needs m >= 2, got {m}")));
        }
        Ok(RingSpec::Modular(m))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!("F_p needs p prime, got {p}")));
        }
        Ok(RingSpec::PrimeField(p))
    }

    pub fn gaussian_mod(re: i64, im: i64) -> Result<Self> {
        let (r, i) = gauss_normalize(&re.into(), &im.into());
        let (r, i) = (r.to_i64().unwrap(), i.to_i64().unwrap());
        let norm = r as i128 * r as i128 + i as i128 * i as i128;
        if !(2..=(1 << 40)).contains(&norm) {
            return Err(Error::InvalidArgument(format!(
                "Z[i]/(g) needs 2 <= N(g) <= 2^40, got {norm}"
            )));
        }
        Ok(RingSpec::GaussianMod(r, i))
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            RingSpec::Modular(_) | RingSpec::PrimeField(_) | RingSpec::GaussianMod(..)
        )
    }

    /// Number of elements of a finite ring.
    pub fn size(&self) -> Option<u64> {
        match *self {
            RingSpec::Modular(m) | RingSpec::PrimeField(m) => Some(m),
            RingSpec::GaussianMod(a, b) => Some((a * a + b * b) as u64),
            _ => None,
        }
    }

    pub fn zero(&self) -> RElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> RElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, k: i64) -> RElem {
        self.from_bigint(&BigInt::from(k))
    }

    pub fn from_bigint(&self, k: &BigInt) -> RElem {
        let value = match *self {
            RingSpec::Integers => Value::Int(k.clone()),
            RingSpec::IntegersInverted(_) => Value::Frac(BigRational::from_integer(k.clone())),
            RingSpec::Gaussian => Value::Gauss(k.clone(), BigInt::zero()),
            RingSpec::Modular(m) | RingSpec::PrimeField(m) => {
                Value::Residue(k.mod_floor(&BigInt::from(m)).to_u64().unwrap())
            }
            RingSpec::GaussianMod(a, b) => {
                let (x, y) = gauss_reduce(a, b, k, &BigInt::zero());
                Value::GaussResidue(x, y)
            }
        };
        RElem { ring: *self, value }
    }

    /// `a/b` in `Z[1/N]`; fails when `b` has a prime factor not dividing `N`.
    pub fn fraction(&self, num: i64, den: i64) -> Result<RElem> {
        let RingSpec::IntegersInverted(n) = *self else {
            return Err(Error::InvalidArgument(format!("fractions live in Z[1/N], not {self}")));
        };
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let q = BigRational::new(num.into(), den.into());
        if !denominator_ok(q.denom(), n) {
            return Err(Error::InvalidArgument(format!("{num}/{den} is not in {self}")));
        }
        Ok(RElem { ring: *self, value: Value::Frac(q) })
    }

    pub fn gaussian(&self, re: i64, im: i64) -> Result<RElem> {
        self.gaussian_big(&re.into(), &im.into())
    }

    pub fn gaussian_big(&self, re: &BigInt, im: &BigInt) -> Result<RElem> {
        match *self {
            RingSpec::Gaussian => Ok(RElem {
                ring: *self,
                value: Value::Gauss(re.clone(), im.clone()),
            }),
            RingSpec::GaussianMod(a, b) => {
                let (x, y) = gauss_reduce(a, b, re, im);
                Ok(RElem { ring: *self, value: Value::GaussResidue(x, y) })
            }
            _ if im.is_zero() => Ok(self.from_bigint(re)),
            _ => Err(Error::InvalidArgument(format!("{self} has no imaginary unit"))),
        }
    }

    /// Enumerates a finite ring in its canonical residue order.
    pub fn elements(&self) -> Result<Vec<RElem>> {
        match *self {
            RingSpec::Modular(m) | RingSpec::PrimeField(m) => Ok((0..m)
                .map(|r| RElem { ring: *self, value: Value::Residue(r) })
                .collect()),
            RingSpec::GaussianMod(a, b) => {
                let (c, _, h22) = gauss_hnf(a, b);
                let mut out = Vec::with_capacity((c * h22) as usize);
                for x in 0..c {
                    for y in 0..h22 {
                        out.push(RElem { ring: *self, value: Value::GaussResidue(x, y) });
                    }
                }
                Ok(out)
            }
            _ => Err(Error::InfiniteQuotient),
        }
    }

    /// Position of a residue in [`RingSpec::elements`].
    pub(crate) fn residue_index(&self, x: &RElem) -> Option<usize> {
        match (&x.value, *self) {
            (Value::Residue(r), _) => Some(*r as usize),
            (Value::GaussResidue(u, v), RingSpec::GaussianMod(a, b)) => {
                let (_, _, h22) = gauss_hnf(a, b);
                Some((*u * h22 + *v) as usize)
            }
            _ => None,
        }
    }

    /// Elements `z` of the ring with `z^d = 1`, in increasing order.
    pub fn roots_of_unity(&self, d: usize) -> Vec<RElem> {
        thread_local! {
            static CACHE: RefCell<HashMap<(RingSpec, usize), Vec<RElem>>> = RefCell::new(HashMap::new());
        }
        if let Some(hit) = CACHE.with(|c| c.borrow().get(&(*self, d)).cloned()) {
            return hit;
        }
        let one = self.one();
        let mut roots: Vec<RElem> = match *self {
            RingSpec::Integers | RingSpec::IntegersInverted(_) => {
                let mut v = vec![one.clone()];
                if d.is_multiple_of(2) {
                    v.push(-&one);
                }
                v
            }
            RingSpec::Gaussian => {
                let i = self.gaussian(0, 1).unwrap();
                [one.clone(), -&one, i.clone(), -&i]
                    .into_iter()
                    .filter(|z| z.pow(d) == one)
                    .collect()
            }
            _ => self
                .elements()
                .unwrap()
                .into_iter()
                .filter(|z| z.pow(d) == one)
                .collect(),
        };
        roots.sort();
        roots.dedup();
        CACHE.with(|c| c.borrow_mut().insert((*self, d), roots.clone()));
        roots
    }

    pub fn parse_elem(&self, s: &str) -> Result<RElem> {
        let err = |reason: &str| Error::Parse {
            what: "ring element",
            input: s.to_string(),
            reason: format!("{reason} (ring {self})"),
        };
        let t = s.trim();
        match *self {
            RingSpec::Integers | RingSpec::Modular(_) | RingSpec::PrimeField(_) => {
                parse_bigint(t).map(|k| self.from_bigint(&k)).ok_or_else(|| err("expected an integer"))
            }
            RingSpec::IntegersInverted(n) => {
                let q = match t.split_once('/') {
                    Some((a, b)) => {
                        let (a, b) = (
                            parse_bigint(a).ok_or_else(|| err("bad numerator"))?,
                            parse_bigint(b).ok_or_else(|| err("bad denominator"))?,
                        );
                        if b.is_zero() {
                            return Err(err("zero denominator"));
                        }
                        BigRational::new(a, b)
                    }
                    None => BigRational::from_integer(parse_bigint(t).ok_or_else(|| err("expected a/b"))?),
                };
                if !denominator_ok(q.denom(), n) {
                    return Err(err("denominator is not a divisor of a power of N"));
                }
                Ok(RElem { ring: *self, value: Value::Frac(q) })
            }
            RingSpec::Gaussian | RingSpec::GaussianMod(..) => {
                let (re, im) = parse_gauss_literal(t).ok_or_else(|| err("expected a+bi"))?;
                self.gaussian_big(&re, &im)
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::IntegersInverted(n) => write!(f, "Z[1/{n}]"),
            RingSpec::Gaussian => write!(f, "Z[i]"),
            RingSpec::Modular(m) => write!(f, "Z/{m}"),
            RingSpec::PrimeField(p) => write!(f, "F_{p}"),
            RingSpec::GaussianMod(a, b) => {
                write!(f, "Z[i]/(")?;
                fmt_gauss(f, &a.into(), &b.into())?;
                write!(f, ")")
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Grammar: `Z`, `Z[1/N]`, `Z[i]`, `Z/m`, `F_p`, `Z[i]/(a+bi)`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            what: "ring",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let num = |t: &str| t.parse::<u64>().map_err(|_| err("expected a positive integer"));
        let t = s.trim();
        if t == "Z" {
            Ok(RingSpec::Integers)
        } else if t == "Z[i]" {
            Ok(RingSpec::Gaussian)
        } else if let Some(rest) = t.strip_prefix("Z[i]/(").and_then(|r| r.strip_suffix(')')) {
            let (re, im) = parse_gauss_literal(rest).ok_or_else(|| err("bad Gaussian modulus"))?;
            let (re, im) = (
                re.to_i64().ok_or_else(|| err("modulus too large"))?,
                im.to_i64().ok_or_else(|| err("modulus too large"))?,
            );
            RingSpec::gaussian_mod(re, im)
        } else if let Some(rest) = t.strip_prefix("Z[1/").and_then(|r| r.strip_suffix(']')) {
            RingSpec::integers_inverted(num(rest)?)
        } else if let Some(rest) = t.strip_prefix("Z/") {
            RingSpec::modular(num(rest)?)
        } else if let Some(rest) = t.strip_prefix("F_") {
            RingSpec::prime_field(num(rest)?)
        } else {
            Err(err("unknown ring"))
        }
    }
}

impl RElem {
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(a) => a.is_zero(),
            Value::Frac(q) => q.is_zero(),
            Value::Gauss(a, b) => a.is_zero() && b.is_zero(),
            Value::Residue(r) => *r == 0,
            Value::GaussResidue(u, v) => *u == 0 && *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn check_same(&self, other: &RElem) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    /// Integer value of an element of `Z` (or an integral element of `Z[1/N]`).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.value {
            Value::Int(a) => Some(a.clone()),
            Value::Frac(q) if q.is_integer() => Some(q.to_integer()),
            Value::Gauss(a, b) if b.is_zero() => Some(a.clone()),
            Value::Residue(r) => Some(BigInt::from(*r)),
            _ => None,
        }
    }

    /// The element as an exact rational, for rings embedded in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.value {
            Value::Int(a) => Some(BigRational::from_integer(a.clone())),
            Value::Frac(q) => Some(q.clone()),
            Value::Gauss(a, b) if b.is_zero() => Some(BigRational::from_integer(a.clone())),
            _ => None,
        }
    }

    /// Real and imaginary parts of a Gaussian integer (or a lift of a residue).
    pub fn gauss_parts(&self) -> Option<(BigInt, BigInt)> {
        match &self.value {
            Value::Gauss(a, b) => Some((a.clone(), b.clone())),
            Value::GaussResidue(u, v) => Some(((*u).into(), (*v).into())),
            Value::Int(a) => Some((a.clone(), BigInt::zero())),
            _ => None,
        }
    }

    pub fn add(&self, other: &RElem) -> Result<RElem> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn mul(&self, other: &RElem) -> Result<RElem> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn sub(&self, other: &RElem) -> Result<RElem> {
        self.check_same(other)?;
        Ok(self.add_unchecked(&-other))
    }

    pub(crate) fn add_unchecked(&self, other: &RElem) -> RElem {
        let value = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
            (Value::Frac(a), Value::Frac(b)) => Value::Frac(a + b),
            (Value::Gauss(a, b), Value::Gauss(c, d)) => Value::Gauss(a + c, b + d),
            (Value::Residue(a), Value::Residue(b)) => {
                let m = self.ring.size().unwrap();
                Value::Residue(((*a as u128 + *b as u128) % m as u128) as u64)
            }
            (Value::GaussResidue(a, b), Value::GaussResidue(c, d)) => {
                return self
                    .ring
                    .gaussian_big(&BigInt::from(a + c), &BigInt::from(b + d))
                    .unwrap()
            }
            _ => panic!("ring mismatch in add"),
        };
        RElem { ring: self.ring, value }
    }

    pub(crate) fn mul_unchecked(&self, other: &RElem) -> RElem {
        let value = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
            (Value::Frac(a), Value::Frac(b)) => Value::Frac(a * b),
            (Value::Gauss(a, b), Value::Gauss(c, d)) => Value::Gauss(a * c - b * d, a * d + b * c),
            (Value::Residue(a), Value::Residue(b)) => {
                let m = self.ring.size().unwrap();
                Value::Residue(((*a as u128 * *b as u128) % m as u128) as u64)
            }
            (Value::GaussResidue(a, b), Value::GaussResidue(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                return self
                    .ring
                    .gaussian_big(&BigInt::from(a * c - b * d), &BigInt::from(a * d + b * c))
                    .unwrap();
            }
            _ => panic!("ring mismatch in mul"),
        };
        RElem { ring: self.ring, value }
    }

    pub fn pow(&self, mut e: usize) -> RElem {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    pub fn inverse(&self) -> Option<RElem> {
        if self.is_zero() {
            return None;
        }
        let ring = self.ring;
        match &self.value {
            Value::Int(a) => (a.abs().is_one()).then(|| self.clone()),
            Value::Frac(q) => {
                let RingSpec::IntegersInverted(n) = ring else { unreachable!() };
                denominator_ok(q.numer(), n).then(|| RElem { ring, value: Value::Frac(q.recip()) })
            }
            Value::Gauss(a, b) => {
                let norm = a * a + b * b;
                norm.is_one().then(|| RElem { ring, value: Value::Gauss(a.clone(), -b) })
            }
            Value::Residue(r) => {
                mod_inverse_u64(*r, ring.size().unwrap()).map(|v| RElem { ring, value: Value::Residue(v) })
            }
            Value::GaussResidue(..) => {
                let RingSpec::GaussianMod(ga, gb) = ring else { unreachable!() };
                let (x, y) = self.gauss_parts().unwrap();
                let (g, s, _) = gauss_ext_gcd(&(x, y), &(ga.into(), gb.into()));
                // s*x + t*g = unit * gcd; invertible iff the gcd is a unit
                let norm = &g.0 * &g.0 + &g.1 * &g.1;
                if !norm.is_one() {
                    return None;
                }
                // g is a unit; inverse of x is s * g^{-1} = s * conj(g)
                let gi = (g.0.clone(), -g.1.clone());
                let re = &s.0 * &gi.0 - &s.1 * &gi.1;
                let im = &s.0 * &gi.1 + &s.1 * &gi.0;
                Some(ring.gaussian_big(&re, &im).unwrap())
            }
        }
    }

    /// The unique `q` in the ring with `q * other = self`, when it exists.
    ///
    /// For finite rings with a non-unit divisor some solution is returned.
    pub fn div_exact(&self, other: &RElem) -> Result<Option<RElem>> {
        self.check_same(other)?;
        let ring = self.ring;
        Ok(match (&self.value, &other.value) {
            (_, _) if other.is_zero() => self.is_zero().then(|| ring.zero()),
            (Value::Int(a), Value::Int(b)) => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(RElem { ring, value: Value::Int(q) })
            }
            (Value::Frac(a), Value::Frac(b)) => {
                let RingSpec::IntegersInverted(n) = ring else { unreachable!() };
                let q = a / b;
                denominator_ok(q.denom(), n).then_some(RElem { ring, value: Value::Frac(q) })
            }
            (Value::Gauss(a, b), Value::Gauss(c, d)) => {
                let norm = c * c + d * d;
                let re = a * c + b * d;
                let im = b * c - a * d;
                (re.is_multiple_of(&norm) && im.is_multiple_of(&norm))
                    .then(|| RElem { ring, value: Value::Gauss(re / &norm, im / &norm) })
            }
            _ => match other.inverse() {
                Some(inv) => Some(self.mul_unchecked(&inv)),
                None => ring.elements()?.into_iter().find(|q| q.mul_unchecked(other) == *self),
            },
        })
    }

    /// Euclidean size: `|a|` on `Z`, the N-free part of the numerator on
    /// `Z[1/N]`, the norm on `Z[i]`.
    pub fn euclid_norm(&self) -> Result<BigInt> {
        match &self.value {
            Value::Int(a) => Ok(a.abs()),
            Value::Frac(q) => {
                let RingSpec::IntegersInverted(n) = self.ring else { unreachable!() };
                Ok(strip_factors(q.numer(), n).abs())
            }
            Value::Gauss(a, b) => Ok(a * a + b * b),
            _ => Err(Error::FiniteRing("euclid_norm")),
        }
    }

    /// Euclidean division `self = q * other + r` with `N(r) < N(other)`.
    pub fn div_rem(&self, other: &RElem) -> Result<(RElem, RElem)> {
        self.check_same(other)?;
        if other.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        let ring = self.ring;
        let q = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => RElem { ring, value: Value::Int(a.div_floor(b)) },
            (Value::Frac(x), Value::Frac(y)) => {
                let RingSpec::IntegersInverted(n) = ring else { unreachable!() };
                // x = ux * ax, y = uy * ay with ax, ay integers free of N's primes
                let ax = strip_factors(x.numer(), n);
                let ay = strip_factors(y.numer(), n);
                if ax.is_zero() {
                    RElem { ring, value: Value::Frac(BigRational::zero()) }
                } else {
                    let ux = x / BigRational::from_integer(ax.clone());
                    let uy = y / BigRational::from_integer(ay.clone());
                    let q0 = ax.div_floor(&ay);
                    RElem { ring, value: Value::Frac(ux / uy * BigRational::from_integer(q0)) }
                }
            }
            (Value::Gauss(a, b), Value::Gauss(c, d)) => {
                let norm = c * c + d * d;
                let re = a * c + b * d;
                let im = b * c - a * d;
                let round = |t: BigInt| (t * 2i32 + &norm).div_floor(&(&norm * 2i32));
                RElem { ring, value: Value::Gauss(round(re), round(im)) }
            }
            _ => return Err(Error::FiniteRing("div_rem")),
        };
        let r = self.add_unchecked(&-&q.mul_unchecked(other));
        debug_assert!(r.euclid_norm()? < other.euclid_norm()?);
        Ok((q, r))
    }

    /// Unit-normalised associate (canonical ideal generator).
    pub fn normalize_associate(&self) -> RElem {
        let ring = self.ring;
        match &self.value {
            Value::Int(a) => RElem { ring, value: Value::Int(a.abs()) },
            Value::Frac(q) => {
                let RingSpec::IntegersInverted(n) = ring else { unreachable!() };
                RElem {
                    ring,
                    value: Value::Frac(BigRational::from_integer(strip_factors(q.numer(), n).abs())),
                }
            }
            Value::Gauss(a, b) => {
                let (x, y) = gauss_normalize(a, b);
                RElem { ring, value: Value::Gauss(x, y) }
            }
            _ => self.clone(),
        }
    }

    /// Normalised gcd in the Euclidean rings.
    pub fn gcd(&self, other: &RElem) -> Result<RElem> {
        self.check_same(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.normalize_associate())
    }
}

type GaussPair = (BigInt, BigInt);

fn gauss_mul(x: &GaussPair, y: &GaussPair) -> GaussPair {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

fn gauss_sub(x: &GaussPair, y: &GaussPair) -> GaussPair {
    (&x.0 - &y.0, &x.1 - &y.1)
}

/// Extended Euclid in `Z[i]`: returns `(g, s, t)` with `s x + t y = g`.
fn gauss_ext_gcd(x: &GaussPair, y: &GaussPair) -> (GaussPair, GaussPair, GaussPair) {
    let ring = RingSpec::Gaussian;
    let zero = (BigInt::zero(), BigInt::zero());
    let one = (BigInt::one(), BigInt::zero());
    let (mut r0, mut r1) = (x.clone(), y.clone());
    let (mut s0, mut s1) = (one.clone(), zero.clone());
    let (mut t0, mut t1) = (zero, one);
    while !(r1.0.is_zero() && r1.1.is_zero()) {
        let a = ring.gaussian_big(&r0.0, &r0.1).unwrap();
        let b = ring.gaussian_big(&r1.0, &r1.1).unwrap();
        let (q, _) = a.div_rem(&b).unwrap();
        let q = q.gauss_parts().unwrap();
        let r2 = gauss_sub(&r0, &gauss_mul(&q, &r1));
        let s2 = gauss_sub(&s0, &gauss_mul(&q, &s1));
        let t2 = gauss_sub(&t0, &gauss_mul(&q, &t1));
        (r0, r1) = (r1, r2);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    (r0, s0, t0)
}

impl std::ops::Neg for &RElem {
    type Output = RElem;

    fn neg(self) -> RElem {
        let ring = self.ring;
        match &self.value {
            Value::Int(a) => RElem { ring, value: Value::Int(-a) },
            Value::Frac(q) => RElem { ring, value: Value::Frac(-q) },
            Value::Gauss(a, b) => RElem { ring, value: Value::Gauss(-a, -b) },
            Value::Residue(r) => {
                let m = ring.size().unwrap();
                RElem { ring, value: Value::Residue((m - r) % m) }
            }
            Value::GaussResidue(u, v) => ring.gaussian_big(&BigInt::from(-u), &BigInt::from(-v)).unwrap(),
        }
    }
}

impl std::ops::Neg for RElem {
    type Output = RElem;

    fn neg(self) -> RElem {
        -&self
    }
}

impl fmt::Display for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Int(a) => write!(f, "{a}"),
            Value::Frac(q) => write!(f, "{q}"),
            Value::Gauss(a, b) => fmt_gauss(f, a, b),
            Value::Residue(r) => write!(f, "{r}"),
            Value::GaussResidue(u, v) => fmt_gauss(f, &(*u).into(), &(*v).into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_strings_round_trip() {
        for s in ["Z", "Z[1/6]", "Z[i]", "Z/7", "F_7", "Z[i]/(2+i)", "Z[i]/(3)"] {
            let r: RingSpec = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("F_8".parse::<RingSpec>().is_err());
        assert!("Z/1".parse::<RingSpec>().is_err());
        assert!("Z[1/1]".parse::<RingSpec>().is_err());
        assert!("Q".parse::<RingSpec>().is_err());
    }

    #[test]
    fn gaussian_literals() {
        let r = RingSpec::Gaussian;
        for (s, re, im) in [("2+i", 2, 1), ("2-i", 2, -1), ("-i", 0, -1), ("3i", 0, 3), ("-2-3i", -2, -3), ("7", 7, 0)] {
            let x = r.parse_elem(s).unwrap();
            assert_eq!(x, r.gaussian(re, im).unwrap());
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn fractions_are_reduced_and_checked() {
        let r = RingSpec::integers_inverted(6).unwrap();
        assert_eq!(r.parse_elem("3/6").unwrap(), r.fraction(1, 2).unwrap());
        assert!(r.parse_elem("1/5").is_err());
        assert!(r.fraction(2, 1).unwrap().is_unit());
        assert!(!r.from_i64(10).is_unit());
        assert_eq!(r.fraction(1, 6).unwrap().inverse().unwrap(), r.from_i64(6));
    }

    #[test]
    fn gaussian_mod_residues() {
        let r = RingSpec::gaussian_mod(2, 1).unwrap();
        let elems = r.elements().unwrap();
        assert_eq!(elems.len(), 5);
        // i = -2 mod (2+i)
        let i = r.gaussian(0, 1).unwrap();
        assert_eq!(i, r.from_i64(-2));
        for (k, e) in elems.iter().enumerate() {
            assert_eq!(r.residue_index(e), Some(k));
        }
        let r3 = RingSpec::gaussian_mod(3, 0).unwrap();
        assert_eq!(r3.elements().unwrap().len(), 9);
        for x in r3.elements().unwrap() {
            if !x.is_zero() {
                assert_eq!(x.mul(&x.inverse().unwrap()).unwrap(), r3.one());
            }
        }
    }

    #[test]
    fn euclidean_division_shrinks_norm() {
        let g = RingSpec::Gaussian;
        let a = g.gaussian(27, -13).unwrap();
        let b = g.gaussian(4, 7).unwrap();
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        assert!(r.euclid_norm().unwrap() < b.euclid_norm().unwrap());

        let z6 = RingSpec::integers_inverted(6).unwrap();
        let a = z6.fraction(35, 4).unwrap();
        let b = z6.fraction(10, 3).unwrap();
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        assert!(r.euclid_norm().unwrap() < b.euclid_norm().unwrap());
    }

    #[test]
    fn roots_of_unity_per_ring() {
        assert_eq!(RingSpec::Integers.roots_of_unity(3).len(), 1);
        assert_eq!(RingSpec::Integers.roots_of_unity(4).len(), 2);
        assert_eq!(RingSpec::Gaussian.roots_of_unity(4).len(), 4);
        assert_eq!(RingSpec::Gaussian.roots_of_unity(6).len(), 2);
        assert_eq!(RingSpec::PrimeField(7).roots_of_unity(3).len(), 3);
        assert_eq!(RingSpec::PrimeField(5).roots_of_unity(3).len(), 1);
    }
}
