use super::det_of;
use crate::error::{Error, Result};
use crate::rings::{RElem, RingSpec};

/// A basis `a_1, …, a_n` of `O^n` with `a = c_1 a_1 + c_2 a_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DedekindBasis {
    pub rows: Vec<Vec<RElem>>,
    pub coeffs: (RElem, RElem),
    pub det: RElem,
}

/// Completes `a` to a basis in which it lies in the span of the first two
/// rows, by Euclidean row reduction of `a` while tracking the inverse of the
/// accumulated unimodular transform.
pub fn dedekind_basis(ring: RingSpec, a: &[RElem], n: usize) -> Result<DedekindBasis> {
    if !matches!(ring, RingSpec::Integers | RingSpec::Gaussian | RingSpec::IntegersInverted(_)) {
        return Err(Error::Unsupported(format!("basis completion over {ring}")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if a.len() != n {
        return Err(Error::DimensionMismatch(a.len(), n));
    }
    if let Some(bad) = a.iter().find(|x| x.ring() != ring) {
        return Err(Error::RingMismatch(bad.ring().to_string(), ring.to_string()));
    }

    let mut v: Vec<RElem> = a.to_vec();
    // inverse transform, column-major: basis[c] is column c
    let mut basis: Vec<Vec<RElem>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { ring.one() } else { ring.zero() }).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&k| !v[k].is_zero()).collect();
        if nonzero.len() <= 1 {
            if let Some(&p) = nonzero.first() {
                v.swap(0, p);
                basis.swap(0, p);
            }
            break;
        }
        let mut p = nonzero[0];
        let mut best = v[p].euclid_norm()?;
        for &k in &nonzero[1..] {
            let nk = v[k].euclid_norm()?;
            if nk < best {
                best = nk;
                p = k;
            }
        }
        for &k in nonzero.iter().filter(|&&k| k != p) {
            let (q, r) = v[k].div_rem(&v[p])?;
            v[k] = r;
            // row_k -= q row_p on the transform means col_p += q col_k on its inverse
            let col_k = basis[k].clone();
            for (dst, src) in basis[p].iter_mut().zip(&col_k) {
                *dst = dst.add_unchecked(&q.mul_unchecked(src));
            }
        }
    }

    let flat: Vec<RElem> = basis.iter().flatten().cloned().collect();
    let det = det_of(ring, n, &flat);
    let out = DedekindBasis { rows: basis, coeffs: (v[0].clone(), ring.zero()), det };
    verify(a, &out)?;
    Ok(out)
}

fn verify(a: &[RElem], b: &DedekindBasis) -> Result<()> {
    if !b.det.is_unit() {
        return Err(Error::Internal(format!("basis determinant {} is not a unit", b.det)));
    }
    for (k, x) in a.iter().enumerate() {
        let rebuilt = b.coeffs.0.mul_unchecked(&b.rows[0][k]).add_unchecked(&b.coeffs.1.mul_unchecked(&b.rows[1][k]));
        if rebuilt != *x {
            return Err(Error::Internal("membership witness does not reproduce the vector".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn ints(ring: RingSpec, xs: &[i64]) -> Vec<RElem> {
        xs.iter().map(|&x| ring.from_i64(x)).collect()
    }

    /// Integer determinant by fraction-free elimination (Bareiss).
    fn int_det(rows: &[Vec<BigInt>]) -> BigInt {
        let n = rows.len();
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

    /// Oracle for the integer case: `a ∈ Z a_1 + Z a_2` iff the 2×n system is
    /// solvable, checked through Cramer on some nonsingular 2×2 minor.
    fn in_span(a: &[BigInt], r1: &[BigInt], r2: &[BigInt]) -> bool {
        let n = a.len();
        for i in 0..n {
            for j in i + 1..n {
                let det = &r1[i] * &r2[j] - &r1[j] * &r2[i];
                if det.is_zero() {
                    continue;
                }
                let c1n = &a[i] * &r2[j] - &a[j] * &r2[i];
                let c2n = &r1[i] * &a[j] - &r1[j] * &a[i];
                if !c1n.is_multiple_of(&det) || !c2n.is_multiple_of(&det) {
                    return false;
                }
                let (c1, c2) = (c1n / &det, c2n / &det);
                return (0..n).all(|k| &c1 * &r1[k] + &c2 * &r2[k] == a[k]);
            }
        }
        // rank <= 1: a must be a multiple of a nonzero row
        for r in [r1, r2] {
            if let Some(k) = (0..n).find(|&k| !r[k].is_zero()) {
                if a[k].is_multiple_of(&r[k]) {
                    let c = &a[k] / &r[k];
                    if (0..n).all(|t| &c * &r[t] == a[t]) {
                        return true;
                    }
                }
            }
        }
        a.iter().all(Zero::is_zero)
    }

    #[test]
    fn trivial_vectors_give_the_standard_basis() {
        let z = RingSpec::Integers;
        for (a, c) in [([0, 0, 0], 0), ([1, 0, 0], 1)] {
            let b = dedekind_basis(z, &ints(z, &a), 3).unwrap();
            assert_eq!(b.rows, (0..3).map(|i| ints(z, &[0, 1, 2].map(|j| (i == j) as i64))).collect::<Vec<_>>());
            assert_eq!(b.coeffs, (z.from_i64(c), z.zero()));
        }
    }

    #[test]
    fn six_ten_fifteen() {
        let z = RingSpec::Integers;
        let a = ints(z, &[6, 10, 15]);
        let b = dedekind_basis(z, &a, 3).unwrap();
        let rows: Vec<Vec<BigInt>> = b.rows.iter().map(|r| r.iter().map(|x| x.to_bigint().unwrap()).collect()).collect();
        assert_eq!(int_det(&rows).abs(), BigInt::one());
        let av: Vec<BigInt> = a.iter().map(|x| x.to_bigint().unwrap()).collect();
        assert!(in_span(&av, &rows[0], &rows[1]));
    }

    #[test]
    fn other_rings() {
        let g = RingSpec::Gaussian;
        let a = vec![g.gaussian(3, 1).unwrap(), g.gaussian(2, -5).unwrap(), g.gaussian(0, 7).unwrap()];
        let b = dedekind_basis(g, &a, 3).unwrap();
        assert!(b.det.is_unit());
        let r = RingSpec::IntegersInverted(6);
        let a = vec![r.fraction(5, 2).unwrap(), r.fraction(7, 3).unwrap(), r.from_i64(35), r.from_i64(0)];
        assert!(dedekind_basis(r, &a, 4).unwrap().det.is_unit());
        assert!(matches!(dedekind_basis(RingSpec::Modular(5), &ints(RingSpec::Modular(5), &[1, 2]), 2), Err(Error::Unsupported(_))));
        assert!(dedekind_basis(RingSpec::Integers, &ints(RingSpec::Integers, &[1, 2]), 3).is_err());
    }

    proptest! {
        #[test]
        fn integer_vectors_always_complete(a in prop::collection::vec(-500i64..500, 2..6)) {
            let z = RingSpec::Integers;
            let n = a.len();
            let b = dedekind_basis(z, &ints(z, &a), n).unwrap();
            let rows: Vec<Vec<BigInt>> = b.rows.iter().map(|r| r.iter().map(|x| x.to_bigint().unwrap()).collect()).collect();
            prop_assert_eq!(int_det(&rows).abs(), BigInt::one());
            let av: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
            prop_assert!(in_span(&av, &rows[0], &rows[1]));
        }

        #[test]
        fn gaussian_vectors_always_complete(a in prop::collection::vec((-30i64..30, -30i64..30), 2..5)) {
            let g = RingSpec::Gaussian;
            let v: Vec<RElem> = a.iter().map(|&(x, y)| g.gaussian(x, y).unwrap()).collect();
            let b = dedekind_basis(g, &v, v.len()).unwrap();
            prop_assert!(b.det.is_unit());
        }
    }
}
