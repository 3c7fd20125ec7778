//! Ratio sets `δS = {x y⁻¹}` and `δ²S = δ(δS)` of finite subsets of an
//! abelian group, the extremal count `f(n)`, and recovery of `S` from `δS`.
//!
//! Generic elements are modelled as integer exponent vectors of free
//! generators, so multiplicative independence becomes exact integer
//! arithmetic. The same routines run on nonzero rationals and on `F_p^×`.

use std::collections::BTreeSet;
use std::fmt::{self, Debug};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rings::mod_inverse_u64;

/// Multiplicatively written abelian group element.
pub trait AbelianElem: Clone + Ord + Hash + Debug + Send + Sync {
    fn op(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_identity(&self) -> bool;

    fn div(&self, other: &Self) -> Self {
        self.op(&other.inv())
    }
}

impl AbelianElem for BigRational {
    fn op(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn is_identity(&self) -> bool {
        self.is_one()
    }
}

/// `t_1^{k_1} ⋯ t_r^{k_r}` as `(k_1, …, k_r)`.
impl AbelianElem for Vec<i64> {
    fn op(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a + b).collect()
    }
    fn inv(&self) -> Self {
        self.iter().map(|a| -a).collect()
    }
    fn is_identity(&self) -> bool {
        self.iter().all(|&a| a == 0)
    }
}

impl AbelianElem for i64 {
    fn op(&self, other: &Self) -> Self {
        self + other
    }
    fn inv(&self) -> Self {
        -self
    }
    fn is_identity(&self) -> bool {
        *self == 0
    }
}

/// A unit of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpUnit {
    pub p: u64,
    pub v: u64,
}

impl FpUnit {
    pub fn new(p: u64, v: u64) -> Result<Self> {
        let v = v % p;
        if v == 0 {
            return Err(Error::InvalidArgument("0 is not a unit".into()));
        }
        Ok(FpUnit { p, v })
    }
}

impl AbelianElem for FpUnit {
    fn op(&self, other: &Self) -> Self {
        FpUnit { p: self.p, v: ((self.v as u128 * other.v as u128) % self.p as u128) as u64 }
    }
    fn inv(&self) -> Self {
        FpUnit { p: self.p, v: mod_inverse_u64(self.v, self.p).expect("nonzero residue mod a prime") }
    }
    fn is_identity(&self) -> bool {
        self.v == 1
    }
}

/// `f(n) = n(n−1)(n−2)(n−3)/4 + n(n−1)(n−2) + 2n(n−1) + 1`.
pub fn f_count(n: u64) -> Result<BigInt> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("f(n) needs n >= 3, got {n}")));
    }
    let n = BigInt::from(n);
    let one = BigInt::one();
    let (n1, n2, n3) = (&n - 1u32, &n - 2u32, &n - 3u32);
    Ok(&n * &n1 * &n2 * &n3 / 4u32 + &n * &n1 * &n2 + BigInt::from(2u32) * &n * &n1 + one)
}

pub fn f_count_u64(n: u64) -> Result<u64> {
    let f = f_count(n)?;
    u64::try_from(f).map_err(|_| Error::InvalidArgument(format!("f({n}) overflows u64")))
}

pub fn delta<T: AbelianElem>(s: &BTreeSet<T>) -> Result<BTreeSet<T>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(s.iter().flat_map(|x| s.iter().map(move |y| x.div(y))).collect())
}

pub fn delta2<T: AbelianElem>(s: &BTreeSet<T>) -> Result<BTreeSet<T>> {
    delta(&delta(s)?)
}

/// `true` iff `|δ²S| = f(|S|)`.
pub fn is_very_regular_set<T: AbelianElem>(s: &BTreeSet<T>) -> Result<bool> {
    let n = s.len() as u64;
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need |S| >= 3, got {n}")));
    }
    Ok(delta2(s)?.len() as u64 == f_count_u64(n)?)
}

/// `S · m⁻¹` with `m` the least element, so that the identity is present.
pub fn normalize<T: AbelianElem>(s: &BTreeSet<T>) -> BTreeSet<T> {
    match s.iter().next() {
        None => BTreeSet::new(),
        Some(m) => s.iter().map(|x| x.div(m)).collect(),
    }
}

/// Orientation-free representative: `δS = δ(S⁻¹)`, so `S` is recoverable
/// only up to scalar and inversion; the lexicographically smaller of the
/// two normalizations is chosen.
pub fn canonical_orientation<T: AbelianElem>(s: &BTreeSet<T>) -> BTreeSet<T> {
    let a = normalize(s);
    let b = normalize(&s.iter().map(AbelianElem::inv).collect());
    if a.iter().cmp(b.iter()).is_le() {
        a
    } else {
        b
    }
}

/// Recovers an `n`-element set `S` with `δS = D` and `|δ²S| = f(n)`, up to
/// scalar multiplication and inversion.
///
/// Related pairs `z₁ E z₂` (`z₁ z₂ ∈ D`, `z₂ ≠ z₁⁻¹`) are taken in
/// lexicographic order. For `z₁ = x_a/x_b`, `z₂ = x_c/x_a` the elements
/// related to `z₁⁻¹` but not to `z₂` are exactly `x_i/x_b` for
/// `i ∉ {a, b}`; adding `z₁` and `1` gives `S/x_b`. For the mirrored pair
/// shape the same recipe lands on `S⁻¹` after dropping `z₂⁻¹`. Each candidate
/// is accepted only if its ratio set is `D` and it is extremal.
pub fn reconstruct<T: AbelianElem>(d: &BTreeSet<T>, n: usize) -> Result<BTreeSet<T>> {
    if d.is_empty() {
        return Err(Error::EmptySet);
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
    }
    let one = {
        let x = d.iter().next().unwrap();
        x.div(x)
    };
    if !d.contains(&one) {
        return Err(Error::NotExtremal);
    }
    let target = f_count_u64(n as u64)? as usize;
    let rest: Vec<&T> = d.iter().filter(|z| !z.is_identity()).collect();
    let related = |a: &T, b: &T| d.contains(&a.op(b));
    for &z1 in &rest {
        let z1_inv = z1.inv();
        for &z2 in &rest {
            if *z2 == z1_inv || z2 == z1 || !related(z1, z2) {
                continue;
            }
            let raw: BTreeSet<T> = rest
                .iter()
                .filter(|z| related(z, &z1_inv) && !related(z, z2))
                .map(|&z| z.clone())
                .collect();
            let mut plain = raw.clone();
            plain.insert(z1.clone());
            plain.insert(one.clone());
            let mut mirrored = plain.clone();
            mirrored.remove(&z2.inv());
            for cand in [plain, mirrored] {
                if cand.len() == n && delta(&cand)? == *d && delta2(&cand)?.len() == target {
                    return Ok(canonical_orientation(&cand));
                }
            }
        }
    }
    Err(Error::NotExtremal)
}

/// Result of an exhaustive `|δ²S|` scan over a box of integer exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta2Search {
    pub n: usize,
    pub lo: i64,
    pub hi: i64,
    pub max: usize,
    pub witness: Vec<i64>,
    pub bound: u64,
    pub subsets: u64,
}

impl Delta2Search {
    pub fn bound_holds(&self) -> bool {
        self.max as u64 <= self.bound
    }
}

fn combinations(lo: i64, hi: i64, n: usize) -> Vec<Vec<i64>> {
    fn rec(start: i64, hi: i64, n: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let need = (n - cur.len()) as i64;
        for x in start..=hi - need + 1 {
            cur.push(x);
            rec(x + 1, hi, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lo, hi, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Scans every `n`-subset of `[lo, hi]`; the witness is the lexicographically
/// least maximiser.
pub fn max_delta2_search(n: usize, lo: i64, hi: i64) -> Result<Delta2Search> {
    let bound = f_count_u64(n as u64)?;
    if hi < lo || ((hi - lo + 1) as u128) < n as u128 {
        return Err(Error::InvalidArgument(format!("box [{lo}, {hi}] has fewer than {n} exponents")));
    }
    let subsets = combinations(lo, hi, n);
    let (max, witness) = subsets
        .par_iter()
        .map(|s| {
            let set: BTreeSet<i64> = s.iter().copied().collect();
            (delta2(&set).map(|d| d.len()).unwrap_or(0), s.clone())
        })
        .reduce(
            || (0, Vec::new()),
            |a, b| match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Equal if a.1.is_empty() || (!b.1.is_empty() && b.1 < a.1) => b,
                std::cmp::Ordering::Equal => a,
            },
        );
    Ok(Delta2Search { n, lo, hi, max, witness, bound, subsets: subsets.len() as u64 })
}

/// A finite subset of `ℚ^×` or of a free abelian group of fixed rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecSet {
    Rational(BTreeSet<BigRational>),
    Exponent { rank: usize, elems: BTreeSet<Vec<i64>> },
}

/// One element offered to [`SpecSet::from_elems`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecElem {
    Rational(BigRational),
    Exponent(Vec<i64>),
}

impl SpecSet {
    pub fn from_rationals(xs: impl IntoIterator<Item = BigRational>) -> Result<Self> {
        let elems: BTreeSet<BigRational> = xs.into_iter().collect();
        if elems.iter().any(Zero::is_zero) {
            return Err(Error::InvalidArgument("0 is not in the multiplicative group".into()));
        }
        Ok(SpecSet::Rational(elems))
    }

    /// Rank-one exponents `t^k`.
    pub fn from_exponents(ks: impl IntoIterator<Item = i64>) -> Self {
        SpecSet::Exponent { rank: 1, elems: ks.into_iter().map(|k| vec![k]).collect() }
    }

    pub fn from_exponent_vectors(rank: usize, vs: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        let elems: BTreeSet<Vec<i64>> = vs.into_iter().collect();
        if let Some(bad) = elems.iter().find(|v| v.len() != rank) {
            return Err(Error::DimensionMismatch(bad.len(), rank));
        }
        Ok(SpecSet::Exponent { rank, elems })
    }

    /// Mixed representations are rejected rather than coerced.
    pub fn from_elems(xs: Vec<SpecElem>) -> Result<Self> {
        let rats: Vec<_> = xs.iter().filter_map(|x| if let SpecElem::Rational(r) = x { Some(r.clone()) } else { None }).collect();
        let exps: Vec<_> = xs.iter().filter_map(|x| if let SpecElem::Exponent(v) = x { Some(v.clone()) } else { None }).collect();
        match (rats.is_empty(), exps.is_empty()) {
            (false, false) => Err(Error::InvalidArgument("mixed rational and exponent elements".into())),
            (_, true) => SpecSet::from_rationals(rats),
            (true, false) => SpecSet::from_exponent_vectors(exps[0].len(), exps),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SpecSet::Rational(s) => s.len(),
            SpecSet::Exponent { elems, .. } => elems.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn map_set(
        &self,
        rat: impl FnOnce(&BTreeSet<BigRational>) -> Result<BTreeSet<BigRational>>,
        exp: impl FnOnce(&BTreeSet<Vec<i64>>) -> Result<BTreeSet<Vec<i64>>>,
    ) -> Result<SpecSet> {
        Ok(match self {
            SpecSet::Rational(s) => SpecSet::Rational(rat(s)?),
            SpecSet::Exponent { rank, elems } => SpecSet::Exponent { rank: *rank, elems: exp(elems)? },
        })
    }

    /// `S · c` for an exponent shift or rational scalar given as a one-element set.
    pub fn scale(&self, c: &SpecElem) -> Result<SpecSet> {
        match (self, c) {
            (SpecSet::Rational(s), SpecElem::Rational(c)) if !c.is_zero() => {
                Ok(SpecSet::Rational(s.iter().map(|x| x * c).collect()))
            }
            (SpecSet::Exponent { rank, elems }, SpecElem::Exponent(c)) if c.len() == *rank => {
                Ok(SpecSet::Exponent { rank: *rank, elems: elems.iter().map(|x| x.op(c)).collect() })
            }
            _ => Err(Error::InvalidArgument("scalar does not match the set's representation".into())),
        }
    }

    pub fn normalized(&self) -> SpecSet {
        self.map_set(|s| Ok(normalize(s)), |s| Ok(normalize(s))).expect("normalize is total")
    }

    /// See [`canonical_orientation`].
    pub fn oriented(&self) -> SpecSet {
        self.map_set(|s| Ok(canonical_orientation(s)), |s| Ok(canonical_orientation(s))).expect("orientation is total")
    }

    pub fn sorted_strings(&self) -> Vec<String> {
        match self {
            SpecSet::Rational(s) => s.iter().map(ToString::to_string).collect(),
            SpecSet::Exponent { rank: 1, elems } => elems.iter().map(|v| v[0].to_string()).collect(),
            SpecSet::Exponent { elems, .. } => elems
                .iter()
                .map(|v| format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
                .collect(),
        }
    }
}

impl fmt::Display for SpecSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.sorted_strings().join(", "))
    }
}

pub fn delta_set(s: &SpecSet) -> Result<SpecSet> {
    s.map_set(delta, delta)
}

pub fn delta2_set(s: &SpecSet) -> Result<SpecSet> {
    s.map_set(delta2, delta2)
}

pub fn is_very_regular(s: &SpecSet) -> Result<bool> {
    match s {
        SpecSet::Rational(x) => is_very_regular_set(x),
        SpecSet::Exponent { elems, .. } => is_very_regular_set(elems),
    }
}

/// See [`reconstruct`]; the result is normalized to contain the identity.
pub fn reconstruct_from_delta(d: &SpecSet, n: usize) -> Result<SpecSet> {
    d.map_set(|s| reconstruct(s, n), |s| reconstruct(s, n))
}
