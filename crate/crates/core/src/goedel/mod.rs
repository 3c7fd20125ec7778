//! Integer codes for finitely supported perturbations of the infinite
//! identity matrix `κ`, and the group law they inherit from `PSL_d(O)`.
//!
//! # Format (version 1)
//!
//! `ρ: Z -> M` is `z ↦ seq(zigzag(z))`, read as follows.
//!
//! * `seq` is the sequence decoding of [`crate::pairing::decode_seq`].
//! * Each sequence item `t` unpairs to `(gap, vcode)`.
//! * Positions are `P(i, j) = pair(i − 1, j − 1)`; the first entry sits at
//!   `P = gap`, each later one at `P = previous + 1 + gap`, so entries
//!   appear in strictly increasing position order.
//! * The stored value is `v = unzigzag(vcode + 1)` off the diagonal and
//!   `v = 1 + unzigzag(vcode + 1)` on it, so `v ≠ κ(i, j)` always.
//!
//! Every step is a bijection, hence so is `ρ`, and `ρ(0) = κ`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matgroup::{in_principal_congruence, epsilon, PSLElem, SLMat};
use crate::pairing::{decode_seq, encode_seq, pair, unpair, unzigzag, zigzag};
use crate::rings::{BMap, Ideal, RElem, RingSpec};

/// Integer code of a sparse matrix.
pub type Code = BigInt;

/// Normative format version of the codec.
pub const FORMAT_VERSION: u32 = 1;

/// `M` with `M − κ` finitely supported. Keys are one-based `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseZMat {
    support: BTreeMap<(BigUint, BigUint), BigInt>,
}

fn kappa(i: &BigUint, j: &BigUint) -> BigInt {
    if i == j {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

fn position(i: &BigUint, j: &BigUint) -> BigUint {
    pair(&(i - 1u32), &(j - 1u32))
}

fn from_position(p: &BigUint) -> (BigUint, BigUint) {
    let (a, b) = unpair(p);
    (a + 1u32, b + 1u32)
}

impl SparseZMat {
    pub fn identity() -> Self {
        SparseZMat::default()
    }

    /// Builds from `(i, j, v)` triples; entries equal to `κ(i, j)` are dropped.
    pub fn from_entries<I, V>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64, V)>,
        V: Into<BigInt>,
    {
        let mut m = SparseZMat::default();
        for (i, j, v) in entries {
            m.set(BigUint::from(i), BigUint::from(j), v.into())?;
        }
        Ok(m)
    }

    pub fn set(&mut self, i: BigUint, j: BigUint, v: BigInt) -> Result<()> {
        if i.is_zero() || j.is_zero() {
            return Err(Error::InvalidArgument("matrix indices start at 1".into()));
        }
        if v == kappa(&i, &j) {
            self.support.remove(&(i, j));
        } else {
            self.support.insert((i, j), v);
        }
        Ok(())
    }

    pub fn get(&self, i: u64, j: u64) -> BigInt {
        let (i, j) = (BigUint::from(i), BigUint::from(j));
        self.support.get(&(i.clone(), j.clone())).cloned().unwrap_or_else(|| kappa(&i, &j))
    }

    pub fn support(&self) -> impl Iterator<Item = (&(BigUint, BigUint), &BigInt)> {
        self.support.iter()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Largest row or column index in the support (0 when empty).
    pub fn max_index(&self) -> BigUint {
        self.support.keys().map(|(i, j)| i.max(j).clone()).max().unwrap_or_default()
    }

    /// The `m × m` top-left block as raw integers.
    pub fn block(&self, m: usize) -> Vec<Vec<BigInt>> {
        (1..=m as u64).map(|i| (1..=m as u64).map(|j| self.get(i, j)).collect()).collect()
    }
}

impl fmt::Display for SparseZMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.support.iter().map(|((i, j), v)| format!("({i},{j},{v})")).collect();
        write!(f, "{}", items.join(";"))
    }
}

impl FromStr for SparseZMat {
    type Err = Error;

    /// Parses `"(i,j,v);(i,j,v)"`; the empty string is `κ`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { what: "sparse matrix", input: s.to_string(), reason: reason.to_string() };
        let mut m = SparseZMat::default();
        for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let inner = item.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(|| err("expected (i,j,v)"))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            let [i, j, v] = parts[..] else { return Err(err("expected three fields")) };
            let i: BigUint = i.parse().map_err(|_| err("bad row index"))?;
            let j: BigUint = j.parse().map_err(|_| err("bad column index"))?;
            let v: BigInt = v.parse().map_err(|_| err("bad value"))?;
            if m.support.contains_key(&(i.clone(), j.clone())) {
                return Err(err("duplicate position"));
            }
            m.set(i, j, v).map_err(|_| err("indices start at 1"))?;
        }
        Ok(m)
    }
}

/// Lazily decoded entries `(i, j, v)` in increasing position order.
struct Entries {
    items: std::vec::IntoIter<BigUint>,
    next_pos: BigUint,
}

impl Entries {
    fn new(z: &Code) -> Self {
        Entries { items: decode_seq(&zigzag(z)).into_iter(), next_pos: BigUint::zero() }
    }
}

impl Iterator for Entries {
    type Item = (BigUint, BigUint, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let t = self.items.next()?;
        let (gap, vcode) = unpair(&t);
        let p = &self.next_pos + gap;
        self.next_pos = &p + 1u32;
        let (i, j) = from_position(&p);
        let v = kappa(&i, &j) + unzigzag(&(vcode + 1u32));
        Some((i, j, v))
    }
}

pub fn rho(z: &Code) -> SparseZMat {
    let mut m = SparseZMat::default();
    for (i, j, v) in Entries::new(z) {
        m.support.insert((i, j), v);
    }
    m
}

pub fn rho_inv(m: &SparseZMat) -> Code {
    let mut entries: Vec<(BigUint, BigInt)> = m
        .support
        .iter()
        .map(|((i, j), v)| (position(i, j), v - kappa(i, j)))
        .collect();
    entries.sort();
    let mut prev: Option<BigUint> = None;
    let items: Vec<BigUint> = entries
        .into_iter()
        .map(|(p, delta)| {
            let gap = match &prev {
                None => p.clone(),
                Some(q) => &p - q - 1u32,
            };
            prev = Some(p);
            pair(&gap, &(zigzag(&delta) - 1u32))
        })
        .collect();
    unzigzag(&encode_seq(&items))
}

/// `ρ(z)(i, j)`, decoding only up to the requested position.
pub fn r_access(z: &Code, i: u64, j: u64) -> Result<BigInt> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidArgument("matrix indices start at 1".into()));
    }
    let (i, j) = (BigUint::from(i), BigUint::from(j));
    let target = position(&i, &j);
    for (a, b, v) in Entries::new(z) {
        let p = position(&a, &b);
        if p == target {
            return Ok(v);
        }
        if p > target {
            break;
        }
    }
    Ok(kappa(&i, &j))
}

/// Fraction-free determinant (Bareiss).
pub(crate) fn int_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant of every large enough top-left block. Rows and columns
/// outside the support are those of `κ`, so the determinant is that of the
/// support's index set.
pub fn det_stable(m: &SparseZMat) -> BigInt {
    let mut idx: Vec<&BigUint> = m.support.keys().flat_map(|(i, j)| [i, j]).collect();
    idx.sort();
    idx.dedup();
    let rows: Vec<Vec<BigInt>> = idx
        .iter()
        .map(|&i| {
            idx.iter()
                .map(|&j| m.support.get(&(i.clone(), j.clone())).cloned().unwrap_or_else(|| kappa(i, j)))
                .collect()
        })
        .collect();
    int_det(&rows)
}

fn check_ring(ring: RingSpec, d: usize) -> Result<BMap> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("codec needs d >= 3, got {d}")));
    }
    BMap::new(ring)
}

/// The `d × d` block of `ρ(z)` pushed through `b`, when `z ∈ G̃`.
fn decode_lift(z: &Code, d: usize, b: &BMap) -> Option<SLMat> {
    let m = rho(z);
    if m.max_index() > BigUint::from(d) {
        return None;
    }
    let entries: Vec<RElem> = m.block(d).iter().flatten().map(|v| b.apply(v)).collect();
    SLMat::new(b.ring(), d, entries).ok()
}

pub fn code_in_gtilde(z: &Code, d: usize, ring: RingSpec) -> Result<bool> {
    let b = check_ring(ring, d)?;
    Ok(decode_lift(z, d, &b).is_some())
}

pub fn decode_group(z: &Code, d: usize, ring: RingSpec) -> Result<PSLElem> {
    let b = check_ring(ring, d)?;
    decode_lift(z, d, &b).map(PSLElem::new).ok_or(Error::NotInGTilde(d))
}

fn code_of_lift(lift: &SLMat, b: &BMap) -> Result<Code> {
    let d = lift.dim() as u64;
    let mut m = SparseZMat::default();
    for i in 0..d {
        for j in 0..d {
            let v = b.invert(lift.get(i as usize, j as usize))?;
            m.set(BigUint::from(i + 1), BigUint::from(j + 1), v)?;
        }
    }
    Ok(rho_inv(&m))
}

/// Least integer code among the central lifts of `γ`.
pub fn canonical_code(g: &PSLElem, d: usize, ring: RingSpec) -> Result<Code> {
    let b = check_ring(ring, d)?;
    if g.ring() != ring {
        return Err(Error::RingMismatch(g.ring().to_string(), ring.to_string()));
    }
    if g.dim() != d {
        return Err(Error::DimensionMismatch(g.dim(), d));
    }
    g.lifts().iter().map(|l| code_of_lift(l, &b)).collect::<Result<Vec<_>>>()?.into_iter().min().ok_or_else(|| Error::Internal("no lifts".into()))
}

pub fn is_canonical(z: &Code, d: usize, ring: RingSpec) -> Result<bool> {
    let g = decode_group(z, d, ring)?;
    Ok(canonical_code(&g, d, ring)? == *z)
}

/// `z ·_d w`: the canonical code of `decode(z) · decode(w)`.
pub fn transported_mul(z: &Code, w: &Code, d: usize, ring: RingSpec) -> Result<Code> {
    let g = decode_group(z, d, ring)?;
    let h = decode_group(w, d, ring)?;
    canonical_code(&g.mul(&h)?, d, ring)
}

/// Decoding predicate for `ε(a)`: unit diagonal throughout the support, the
/// `(1, d)` entry decodes to `a`, and no other off-diagonal support.
pub fn upsilon_code_predicate(c: &Code, a: &RElem, d: usize, ring: RingSpec) -> Result<bool> {
    let b = check_ring(ring, d)?;
    if a.ring() != ring {
        return Err(Error::RingMismatch(a.ring().to_string(), ring.to_string()));
    }
    let m = rho(c);
    let corner = (BigUint::one(), BigUint::from(d));
    let shape_ok = m.support.keys().all(|key| *key == corner);
    Ok(shape_ok && b.apply(&m.get(1, d as u64)) == *a)
}

/// Whether two ideals cut the same congruence data on `E_{1,d}`: the
/// generator of each, placed in the corner, dies modulo the other.
pub fn compatible(i: &Ideal, j: &Ideal, d: usize) -> Result<bool> {
    if i.is_zero() || j.is_zero() {
        return Err(Error::NotProperNonzero);
    }
    if i.ring() != j.ring() {
        return Err(Error::RingMismatch(i.ring().to_string(), j.ring().to_string()));
    }
    if i.is_unit() || j.is_unit() {
        return Ok(i.is_unit() && j.is_unit());
    }
    let ring = i.ring();
    let kills = |x: &Ideal, y: &Ideal| -> Result<bool> { in_principal_congruence(&epsilon(ring, d, x.generator())?, y) };
    Ok(kills(i, j)? && kills(j, i)?)
}

pub fn parse_code(s: &str) -> Result<Code> {
    s.trim().parse().map_err(|_| Error::Parse { what: "code", input: s.to_string(), reason: "not a decimal integer".into() })
}
