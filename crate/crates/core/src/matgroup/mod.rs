//! `SL_d` and `PSL_d` over the desk rings.
//!
//! A [`PSLElem`] stores one lift chosen canonically among the central
//! multiples `ζ·g` (`ζ^d = 1`): the lift whose row-major entry sequence is
//! least. Equality of group elements is equality of canonical lifts.

mod dedekind;
mod interp;
mod spectrum;
mod torus;
mod trace;

pub use dedekind::{dedekind_basis, DedekindBasis};
pub use interp::{sigma_tau, upsilon_add, upsilon_mul, SigmaTauPair};
pub use spectrum::{distinguish_spec, SpecDistinction};
pub use torus::{torus_span_rank, torus_span_report, TorusSpanReport};
pub use trace::{trace_class, trace_class_eq, TraceClass};

use std::fmt;

use crate::error::{Error, Result};
use crate::rings::{quotient_ring, Ideal, RElem, RingSpec};

/// A `d × d` matrix of determinant 1, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SLMat {
    ring: RingSpec,
    d: usize,
    entries: Vec<RElem>,
}

pub(crate) fn det_of(ring: RingSpec, d: usize, entries: &[RElem]) -> RElem {
    match d {
        0 => ring.one(),
        1 => entries[0].clone(),
        2 => entries[0]
            .mul_unchecked(&entries[3])
            .add_unchecked(&-&entries[1].mul_unchecked(&entries[2])),
        _ => {
            let mut acc = ring.zero();
            for j in 0..d {
                if entries[j].is_zero() {
                    continue;
                }
                let minor = minor_of(d, entries, 0, j);
                let term = entries[j].mul_unchecked(&det_of(ring, d - 1, &minor));
                acc = if j % 2 == 0 { acc.add_unchecked(&term) } else { acc.add_unchecked(&-&term) };
            }
            acc
        }
    }
}

fn minor_of(d: usize, entries: &[RElem], row: usize, col: usize) -> Vec<RElem> {
    let mut out = Vec::with_capacity((d - 1) * (d - 1));
    for i in (0..d).filter(|&i| i != row) {
        for j in (0..d).filter(|&j| j != col) {
            out.push(entries[i * d + j].clone());
        }
    }
    out
}

impl SLMat {
    pub fn new(ring: RingSpec, d: usize, entries: Vec<RElem>) -> Result<Self> {
        if d < 1 || entries.len() != d * d {
            return Err(Error::InvalidArgument(format!("{} entries for a {d}x{d} matrix", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| e.ring() != ring) {
            return Err(Error::RingMismatch(bad.ring().to_string(), ring.to_string()));
        }
        let det = det_of(ring, d, &entries);
        if !det.is_one() {
            return Err(Error::InvalidArgument(format!("determinant is {det}, not 1")));
        }
        Ok(SLMat { ring, d, entries })
    }

    pub(crate) fn new_unchecked(ring: RingSpec, d: usize, entries: Vec<RElem>) -> Self {
        debug_assert!(det_of(ring, d, &entries).is_one());
        SLMat { ring, d, entries }
    }

    pub fn from_i64_rows(ring: RingSpec, rows: &[&[i64]]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| ring.from_i64(v))).collect();
        SLMat::new(ring, d, entries)
    }

    /// Parses rows of ring-element strings, e.g. `[["2","0"],["0","1/2"]]`
    /// given as nested slices.
    pub fn from_str_rows(ring: RingSpec, rows: &[Vec<String>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|s| ring.parse_elem(s)))
            .collect::<Result<Vec<_>>>()?;
        SLMat::new(ring, d, entries)
    }

    pub fn identity(ring: RingSpec, d: usize) -> Self {
        let mut entries = vec![ring.zero(); d * d];
        for i in 0..d {
            entries[i * d + i] = ring.one();
        }
        SLMat { ring, d, entries }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[RElem] {
        &self.entries
    }

    /// Entry at zero-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &RElem {
        &self.entries[i * self.d + j]
    }

    fn check_compatible(&self, other: &SLMat) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        Ok(())
    }

    pub fn mul(&self, other: &SLMat) -> Result<SLMat> {
        self.check_compatible(other)?;
        let d = self.d;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = self.ring.zero();
                for k in 0..d {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_unchecked(&a.mul_unchecked(b));
                    }
                }
                entries.push(acc);
            }
        }
        Ok(SLMat { ring: self.ring, d, entries })
    }

    /// Inverse by the adjugate (the determinant is 1).
    pub fn inverse(&self) -> SLMat {
        let d = self.d;
        if d == 1 {
            return self.clone();
        }
        let mut entries = vec![self.ring.zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let c = det_of(self.ring, d - 1, &minor_of(d, &self.entries, i, j));
                entries[j * d + i] = if (i + j) % 2 == 0 { c } else { -&c };
            }
        }
        SLMat { ring: self.ring, d, entries }
    }

    pub fn scale(&self, z: &RElem) -> SLMat {
        SLMat {
            ring: self.ring,
            d: self.d,
            entries: self.entries.iter().map(|e| e.mul_unchecked(z)).collect(),
        }
    }

    pub fn trace(&self) -> RElem {
        (0..self.d).fold(self.ring.zero(), |acc, i| acc.add_unchecked(self.get(i, i)))
    }

    pub fn det(&self) -> RElem {
        det_of(self.ring, self.d, &self.entries)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.d).all(|i| (0..self.d).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        self.entries.chunks(self.d).map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }
}

impl fmt::Display for SLMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.d).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// An element of `PSL_d(R)`, stored through its canonical lift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PSLElem {
    lift: SLMat,
}

impl PSLElem {
    pub fn new(lift: SLMat) -> Self {
        let canonical = lift
            .ring
            .roots_of_unity(lift.d)
            .iter()
            .map(|z| lift.scale(z))
            .min()
            .expect("1 is always a root of unity");
        PSLElem { lift: canonical }
    }

    pub fn identity(ring: RingSpec, d: usize) -> Self {
        PSLElem::new(SLMat::identity(ring, d))
    }

    pub fn lift(&self) -> &SLMat {
        &self.lift
    }

    /// All lifts `ζ·g` with `ζ^d = 1`.
    pub fn lifts(&self) -> Vec<SLMat> {
        self.lift.ring.roots_of_unity(self.lift.d).iter().map(|z| self.lift.scale(z)).collect()
    }

    pub fn ring(&self) -> RingSpec {
        self.lift.ring
    }

    pub fn dim(&self) -> usize {
        self.lift.d
    }

    pub fn mul(&self, other: &PSLElem) -> Result<PSLElem> {
        Ok(PSLElem::new(self.lift.mul(&other.lift)?))
    }

    pub fn inv(&self) -> PSLElem {
        PSLElem::new(self.lift.inverse())
    }

    pub fn is_identity(&self) -> bool {
        *self == PSLElem::identity(self.ring(), self.dim())
    }

    /// Commutator `[g, h] = g h g^{-1} h^{-1}`.
    pub fn commutator(&self, other: &PSLElem) -> Result<PSLElem> {
        let gh = self.lift.mul(&other.lift)?;
        let ghg = gh.mul(&self.lift.inverse())?;
        Ok(PSLElem::new(ghg.mul(&other.lift.inverse())?))
    }

    /// `x^{-1} g x`.
    pub fn conjugate_by(&self, x: &PSLElem) -> Result<PSLElem> {
        Ok(PSLElem::new(x.lift.inverse().mul(&self.lift)?.mul(&x.lift)?))
    }

    /// The coordinate `a` with `self = e_{1,d}(a)`, if `self ∈ E_{1,d}`.
    pub fn epsilon_coordinate(&self) -> Option<RElem> {
        let d = self.dim();
        self.lifts().into_iter().find_map(|l| {
            let shape_ok = (0..d).all(|i| {
                (0..d).all(|j| {
                    let e = l.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        (i, j) == (0, d - 1) || e.is_zero()
                    }
                })
            });
            shape_ok.then(|| l.get(0, d - 1).clone())
        })
    }
}

impl fmt::Display for PSLElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.lift.fmt(f)
    }
}

/// Elementary matrix `e_{i,j}(a)` with one-based `1 <= i != j <= d`.
pub fn elem_mat(ring: RingSpec, d: usize, i: usize, j: usize, a: &RElem) -> Result<PSLElem> {
    Ok(PSLElem::new(elem_sl(ring, d, i, j, a)?))
}

pub fn elem_sl(ring: RingSpec, d: usize, i: usize, j: usize, a: &RElem) -> Result<SLMat> {
    if i == j || i == 0 || j == 0 || i > d || j > d {
        return Err(Error::InvalidArgument(format!("elementary matrix needs 1 <= i != j <= {d}, got ({i}, {j})")));
    }
    if a.ring() != ring {
        return Err(Error::RingMismatch(a.ring().to_string(), ring.to_string()));
    }
    let mut m = SLMat::identity(ring, d);
    m.entries[(i - 1) * d + (j - 1)] = a.clone();
    Ok(m)
}

/// `ε(a) = e_{1,d}(a)`.
pub fn epsilon(ring: RingSpec, d: usize, a: &RElem) -> Result<PSLElem> {
    elem_mat(ring, d, 1, d, a)
}

/// Entrywise reduction modulo a nonzero proper ideal.
pub fn reduce_mod(g: &PSLElem, ideal: &Ideal) -> Result<PSLElem> {
    if g.ring() != ideal.ring() {
        return Err(Error::RingMismatch(g.ring().to_string(), ideal.ring().to_string()));
    }
    let q = quotient_ring(ideal)?;
    let entries = g.lift.entries.iter().map(|e| q.project(e)).collect::<Result<Vec<_>>>()?;
    Ok(PSLElem::new(SLMat::new_unchecked(q.target(), g.dim(), entries)))
}

/// Membership in the principal congruence kernel `PSL_d(O; I)`.
pub fn in_principal_congruence(g: &PSLElem, ideal: &Ideal) -> Result<bool> {
    Ok(reduce_mod(g, ideal)?.is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_psl;
    use rand::{Rng, SeedableRng};

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn e(d: usize, i: usize, j: usize, a: i64) -> PSLElem {
        elem_mat(z(), d, i, j, &z().from_i64(a)).unwrap()
    }

    #[test]
    fn elementary_matrix_examples() {
        assert!(e(3, 1, 3, 0).is_identity());
        assert_eq!(e(3, 1, 3, 2).mul(&e(3, 1, 3, 5)).unwrap(), e(3, 1, 3, 7));
        assert_eq!(e(3, 1, 2, 2).commutator(&e(3, 2, 3, 3)).unwrap(), e(3, 1, 3, 6));
        assert!(elem_mat(z(), 3, 2, 2, &z().one()).is_err());
        assert!(elem_mat(z(), 3, 1, 4, &z().one()).is_err());
    }

    #[test]
    fn group_operations() {
        let g = e(3, 1, 3, 7);
        assert_eq!(g.mul(&PSLElem::identity(z(), 3)).unwrap(), g);
        assert_eq!(e(3, 1, 3, 5).inv(), e(3, 1, 3, -5));
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let x = random_psl(z(), 3, 6, &mut rng);
            let y = random_psl(z(), 3, 6, &mut rng);
            let w = random_psl(z(), 3, 6, &mut rng);
            assert_eq!(x.mul(&y).unwrap().inv(), y.inv().mul(&x.inv()).unwrap());
            assert_eq!(x.mul(&y).unwrap().mul(&w).unwrap(), x.mul(&y.mul(&w).unwrap()).unwrap());
            assert!(x.mul(&x.inv()).unwrap().is_identity());
        }
        let other = elem_mat(RingSpec::Gaussian, 3, 1, 2, &RingSpec::Gaussian.one()).unwrap();
        assert!(g.mul(&other).is_err());
        assert!(matches!(e(3, 1, 2, 1).mul(&e(4, 1, 2, 1)), Err(Error::DimensionMismatch(3, 4))));
    }

    #[test]
    fn central_twists_share_a_canonical_form() {
        let g = RingSpec::Gaussian;
        let i = g.gaussian(0, 1).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        for _ in 0..30 {
            let x = random_psl(g, 4, 8, &mut rng);
            for zeta in g.roots_of_unity(4) {
                assert_eq!(PSLElem::new(x.lift().scale(&zeta)), x);
            }
            assert_eq!(PSLElem::new(x.lift().scale(&i)), x);
        }
        // over Z with d even, -g and g agree
        let m = e(4, 2, 3, 9);
        assert_eq!(PSLElem::new(m.lift().scale(&z().from_i64(-1))), m);
    }

    #[test]
    fn reduction_examples() {
        let five = Ideal::principal(z().from_i64(5)).unwrap();
        assert!(reduce_mod(&e(3, 1, 3, 5), &five).unwrap().is_identity());
        let target = RingSpec::Modular(5);
        let expected = elem_mat(target, 3, 1, 3, &target.from_i64(2)).unwrap();
        assert_eq!(reduce_mod(&e(3, 1, 3, 7), &five).unwrap(), expected);
        assert!(in_principal_congruence(&e(3, 1, 3, 10), &five).unwrap());
        assert!(!in_principal_congruence(&e(3, 1, 3, 1), &five).unwrap());
        assert!(reduce_mod(&e(3, 1, 3, 1), &Ideal::zero(z())).is_err());
    }

    #[test]
    fn reduction_is_a_homomorphism_and_kernel_is_closed() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let five = Ideal::principal(z().from_i64(5)).unwrap();
        for _ in 0..100 {
            let g = random_psl(z(), 3, 6, &mut rng);
            let h = random_psl(z(), 3, 6, &mut rng);
            let lhs = reduce_mod(&g.mul(&h).unwrap(), &five).unwrap();
            let rhs = reduce_mod(&g, &five).unwrap().mul(&reduce_mod(&h, &five).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        // kernel elements: conjugates of e_{1,3}(5 k)
        for _ in 0..100 {
            let x = random_psl(z(), 3, 4, &mut rng);
            let y = random_psl(z(), 3, 4, &mut rng);
            let a = e(3, 1, 3, 5 * rng.gen_range(-3..=3)).conjugate_by(&x).unwrap();
            let b = e(3, 2, 1, 5 * rng.gen_range(-3..=3)).conjugate_by(&y).unwrap();
            assert!(in_principal_congruence(&a, &five).unwrap());
            assert!(in_principal_congruence(&a.mul(&b).unwrap(), &five).unwrap());
        }
    }

    #[test]
    fn reduction_maps_e1d_onto_quotient_e1d() {
        for (ring, ideal) in [(z(), "(7)"), (RingSpec::Gaussian, "(2+i)"), (RingSpec::Gaussian, "(3)")] {
            let ideal = Ideal::parse(ring, ideal).unwrap();
            let q = quotient_ring(&ideal).unwrap();
            let mut hit = std::collections::BTreeSet::new();
            for a in -12..=12 {
                for b in if ring == z() { 0..=0 } else { -3..=3 } {
                    let x = ring.gaussian(a, b).unwrap();
                    let r = reduce_mod(&epsilon(ring, 3, &x).unwrap(), &ideal).unwrap();
                    hit.insert(r.epsilon_coordinate().expect("image stays in E_{1,3}"));
                }
            }
            assert_eq!(hit.len(), q.len(), "{ideal}");
        }
    }

    #[test]
    fn epsilon_coordinate_detects_e1d() {
        assert_eq!(e(3, 1, 3, 4).epsilon_coordinate(), Some(z().from_i64(4)));
        assert_eq!(e(4, 1, 4, -2).epsilon_coordinate(), Some(z().from_i64(-2)));
        assert_eq!(e(3, 1, 2, 4).epsilon_coordinate(), None);
    }
}
