use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::sigma::{reduce_lift_mod_p, sigma_for_prime, SigmaRoute};
use crate::error::{Error, Result};
use crate::linalg::{QMat, Q};
use crate::matgroup::{PSLElem, SLMat};
use crate::rings::RingSpec;

/// Characteristic polynomial of `X ↦ gXg⁻¹` on trace-zero matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdPoly {
    pub n: usize,
    /// Coefficients, constant term first; monic of degree `n² − 1`.
    pub coeffs: Vec<Q>,
}

impl fmt::Display for AdPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            terms.push(match (c.is_one(), mono.is_empty()) {
                (true, false) => mono,
                (_, true) => format!("{c}"),
                _ => format!("({c})*{mono}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

pub(crate) fn rational_matrix(m: &SLMat) -> Result<QMat> {
    let n = m.dim();
    let mut out = QMat::zero(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j).to_rational().ok_or_else(|| Error::Unsupported(format!("rational entries needed, ring is {}", m.ring())))?;
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `Ad(g)` on the basis `E_ij (i ≠ j)` then `E_ii − E_nn (i < n)`.
pub fn ad_matrix(g: &PSLElem) -> Result<QMat> {
    let a = rational_matrix(g.lift())?;
    let n = a.n;
    let ainv = a.inverse().ok_or_else(|| Error::Internal("lift is singular".into()))?;
    let mut basis: Vec<QMat> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = QMat::zero(n);
                e.set(i, j, Q::one());
                basis.push(e);
            }
        }
    }
    for i in 0..n - 1 {
        let mut e = QMat::zero(n);
        e.set(i, i, Q::one());
        e.set(n - 1, n - 1, -Q::one());
        basis.push(e);
    }
    let dim = basis.len();
    let mut ad = QMat::zero(dim);
    for (col, b) in basis.iter().enumerate() {
        let img = a.mul(b).mul(&ainv);
        let mut coords: Vec<Q> = Vec::with_capacity(dim);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    coords.push(img.get(i, j).clone());
                }
            }
        }
        for i in 0..n - 1 {
            coords.push(img.get(i, i).clone());
        }
        for (row, c) in coords.into_iter().enumerate() {
            ad.set(row, col, c);
        }
    }
    Ok(ad)
}

pub fn ad_char_poly(g: &PSLElem) -> Result<AdPoly> {
    Ok(AdPoly { n: g.dim(), coeffs: ad_matrix(g)?.charpoly() })
}

/// Primes `≤ bound` not dividing any entry denominator of the given elements.
pub fn default_primes(elems: &[&PSLElem], bound: u64) -> Vec<u64> {
    let dens: Vec<BigInt> = elems
        .iter()
        .flat_map(|g| g.lift().entries().iter().filter_map(|e| e.to_rational().map(|r| r.denom().clone())))
        .collect();
    (2..=bound)
        .filter(|&p| crate::rings::is_prime_u64(p))
        .filter(|&p| dens.iter().all(|d| !d.is_multiple_of(&BigInt::from(p))))
        .collect()
}

fn check_pair(g: &PSLElem, h: &PSLElem, primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::InvalidArgument("no primes to sample".into()));
    }
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch(g.dim(), h.dim()));
    }
    Ok(())
}

/// First prime where `Σ_{g,p} ≠ Σ_{h,p}`, if any.
pub fn ad_separating_prime(g: &PSLElem, h: &PSLElem, primes: &[u64], route: SigmaRoute) -> Result<Option<u64>> {
    check_pair(g, h, primes)?;
    for &p in primes {
        if sigma_for_prime(g, p, route)? != sigma_for_prime(h, p, route)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Sampled `g ~ h`: `Σ_{g,p} = Σ_{h,p}` at every sampled prime.
pub fn ad_equiv_sample(g: &PSLElem, h: &PSLElem, primes: &[u64]) -> Result<bool> {
    Ok(ad_separating_prime(g, h, primes, SigmaRoute::default())?.is_none())
}

fn trace_class_mod_p(g: &PSLElem, p: u64) -> Result<Option<u64>> {
    let n = g.dim();
    let m = reduce_lift_mod_p(g, p)?;
    let t = (0..n).map(|i| m[i * n + i]).sum::<u64>() % p;
    if t == 0 {
        return Ok(None);
    }
    let ring = RingSpec::PrimeField(p);
    Ok(ring.roots_of_unity(n).iter().map(|z| z.to_bigint().unwrap().to_u64().unwrap() * t % p).min())
}

/// First prime where the reduced trace classes differ, if any.
pub fn trace_separating_prime(g: &PSLElem, h: &PSLElem, primes: &[u64]) -> Result<Option<u64>> {
    check_pair(g, h, primes)?;
    for &p in primes {
        if trace_class_mod_p(g, p)? != trace_class_mod_p(h, p)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

pub fn trace_match_sample(g: &PSLElem, h: &PSLElem, primes: &[u64]) -> Result<bool> {
    Ok(trace_separating_prime(g, h, primes)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOutcome {
    pub index: usize,
    pub equal: bool,
    /// Prime separating `t1` from `t2`, if found.
    pub sep: Option<u64>,
    /// Prime separating `t1σ` from `t2σ`, if found.
    pub sep_shifted: Option<u64>,
}

impl PairOutcome {
    /// `t1 ≠ t2` yet both sampled relations hold.
    pub fn is_violation(&self) -> bool {
        !self.equal && self.sep.is_none() && self.sep_shifted.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub primes: Vec<u64>,
    pub pairs: Vec<PairOutcome>,
}

impl SeparationReport {
    pub fn violations(&self) -> Vec<usize> {
        self.pairs.iter().filter(|p| p.is_violation()).map(|p| p.index).collect()
    }
}

/// Checks `t1 ~ t2 ∧ t1σ ~ t2σ ⇒ t1 = t2` on each pair.
pub fn joint_separation_test(sigma: &PSLElem, pairs: &[(PSLElem, PSLElem)], primes: &[u64]) -> Result<SeparationReport> {
    let route = SigmaRoute::default();
    let mut out = Vec::with_capacity(pairs.len());
    for (index, (t1, t2)) in pairs.iter().enumerate() {
        let equal = t1 == t2;
        let sep = ad_separating_prime(t1, t2, primes, route)?;
        let sep_shifted = ad_separating_prime(&t1.mul(sigma)?, &t2.mul(sigma)?, primes, route)?;
        out.push(PairOutcome { index, equal, sep, sep_shifted });
    }
    Ok(SeparationReport { primes: primes.to_vec(), pairs: out })
}

/// `∏_{i≠j}(x − λ_i/λ_j) · (x − 1)^{n−1}` for a diagonal matrix.
pub fn ad_char_poly_diagonal_oracle(eigs: &[Q]) -> Vec<Q> {
    let n = eigs.len();
    let mut poly = vec![Q::one()];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                poly = crate::linalg::poly_mul(&poly, &[-(&eigs[i] / &eigs[j]), Q::one()]);
            }
        }
    }
    for _ in 0..n - 1 {
        poly = crate::linalg::poly_mul(&poly, &[-Q::one(), Q::one()]);
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, q_frac};
    use crate::matgroup::elem_mat;
    use crate::testutil::random_psl;
    use rand::SeedableRng;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn from_rows(rows: &[&[i64]]) -> PSLElem {
        PSLElem::new(SLMat::from_i64_rows(z(), rows).unwrap())
    }

    fn x_minus_one_pow(k: usize) -> Vec<Q> {
        (0..k).fold(vec![Q::one()], |acc, _| crate::linalg::poly_mul(&acc, &[-Q::one(), Q::one()]))
    }

    #[test]
    fn unipotent_examples() {
        assert_eq!(ad_char_poly(&PSLElem::identity(z(), 3)).unwrap().coeffs, x_minus_one_pow(8));
        let e = elem_mat(z(), 3, 1, 2, &z().one()).unwrap();
        let p = ad_char_poly(&e).unwrap();
        assert_eq!(p.coeffs, x_minus_one_pow(8));
        assert_eq!(p.coeffs.len(), 9);
    }

    #[test]
    fn diagonal_example() {
        let r = RingSpec::IntegersInverted(6);
        let mut entries = vec![r.zero(); 9];
        entries[0] = r.from_i64(2);
        entries[4] = r.from_i64(3);
        entries[8] = r.fraction(1, 6).unwrap();
        let g = PSLElem::new(SLMat::new(r, 3, entries).unwrap());
        let poly = ad_char_poly(&g).unwrap();
        assert_eq!(poly.coeffs, ad_char_poly_diagonal_oracle(&[q(2), q(3), q_frac(1, 6)]));
        assert!(!poly.coeffs[0].is_zero());
    }

    #[test]
    fn conjugation_and_central_lifts_preserve_the_polynomial() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let g = from_rows(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let base = ad_char_poly(&g).unwrap();
        for _ in 0..100 {
            let x = random_psl(z(), 3, 5, &mut rng);
            assert_eq!(ad_char_poly(&g.conjugate_by(&x).unwrap()).unwrap(), base);
        }
        let h = from_rows(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let minus = PSLElem::new(h.lift().scale(&z().from_i64(-1)));
        assert_eq!(ad_char_poly(&h).unwrap(), ad_char_poly(&minus).unwrap());
    }

    #[test]
    fn sampled_relation_examples() {
        let primes = default_primes(&[], 50);
        assert_eq!(primes.len(), 15);
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        let g = random_psl(z(), 3, 4, &mut rng);
        let x = random_psl(z(), 3, 4, &mut rng);
        assert!(ad_equiv_sample(&g, &g, &primes).unwrap());
        assert!(ad_equiv_sample(&g, &g.conjugate_by(&x).unwrap(), &primes).unwrap());
        let u = elem_mat(z(), 3, 1, 2, &z().one()).unwrap();
        let h = from_rows(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert!(ad_separating_prime(&u, &h, &primes, SigmaRoute::default()).unwrap().is_some());
        assert!(ad_equiv_sample(&u, &h, &[]).is_err());
    }

    #[test]
    fn trace_examples() {
        let three = PSLElem::identity(z(), 3);
        let four = from_rows(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert!(!trace_match_sample(&three, &four, &[7]).unwrap());
        let g = from_rows(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let minus = PSLElem::new(g.lift().scale(&z().from_i64(-1)));
        let primes = default_primes(&[], 50);
        assert!(trace_match_sample(&g, &minus, &primes).unwrap());
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        let x = random_psl(z(), 4, 5, &mut rng);
        assert!(trace_match_sample(&g, &g.conjugate_by(&x).unwrap(), &primes).unwrap());
    }

    #[test]
    fn separation_examples() {
        let r = RingSpec::IntegersInverted(6);
        let diag = |a: (i64, i64), b: (i64, i64)| {
            let mut e = vec![r.zero(); 9];
            e[0] = r.fraction(a.0, a.1).unwrap();
            e[4] = r.fraction(b.0, b.1).unwrap();
            e[8] = r.fraction(a.1 * b.1, a.0 * b.0).unwrap();
            PSLElem::new(SLMat::new(r, 3, e).unwrap())
        };
        let sigma = diag((2, 1), (3, 1));
        let t = diag((4, 1), (1, 6));
        let primes = default_primes(&[&sigma], 50);
        assert!(!primes.contains(&2) && !primes.contains(&3));
        let report = joint_separation_test(&sigma, &[(t.clone(), t.clone())], &primes).unwrap();
        assert!(report.violations().is_empty());
        // a permuted diagonal is conjugate, so only the shifted pair separates
        let swapped = diag((1, 6), (4, 1));
        let other = diag((2, 1), (1, 2));
        let report = joint_separation_test(&sigma, &[(t.clone(), swapped), (t.clone(), other)], &primes).unwrap();
        assert!(report.pairs[0].sep.is_none() && report.pairs[0].sep_shifted.is_some());
        assert!(report.pairs[1].sep.is_some());
        assert!(report.violations().is_empty());
    }
}
