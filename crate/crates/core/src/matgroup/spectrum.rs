use super::SLMat;
use crate::error::{Error, Result};
use crate::linalg::{q, QMat, Q};

/// Outcome of the witness search for two diagonal matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecDistinction {
    /// `t1 = t2`, so no witness can exist.
    Equal,
    /// `charpoly(t1 x) != charpoly(t2 x)`; `factors` are one-based `(i, j)`
    /// of the elementary matrices `e_{i,j}(1)` whose product is `x`.
    Witness { factors: Vec<(usize, usize)>, x: QMat },
    /// Every pool element gave equal characteristic polynomials.
    Exhausted,
}

/// Identity, then each `e_{i,j}(1)` in lexicographic order, then all
/// ordered products of two of them.
pub fn witness_pool(n: usize) -> Vec<Vec<(usize, usize)>> {
    let singles: Vec<(usize, usize)> =
        (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut pool = vec![vec![]];
    pool.extend(singles.iter().map(|&s| vec![s]));
    for &a in &singles {
        for &b in &singles {
            pool.push(vec![a, b]);
        }
    }
    pool
}

fn pool_matrix(n: usize, factors: &[(usize, usize)]) -> QMat {
    factors.iter().fold(QMat::identity(n), |acc, &(i, j)| {
        let mut e = QMat::identity(n);
        e.set(i - 1, j - 1, q(1));
        acc.mul(&e)
    })
}

fn to_qmat(m: &SLMat) -> Result<QMat> {
    let n = m.dim();
    let mut out = QMat::zero(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j).to_rational().ok_or_else(|| {
                Error::Unsupported(format!("spectrum comparison needs rational entries, ring is {}", m.ring()))
            })?;
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Searches the fixed pool for `x` separating the spectra of `t1 x` and
/// `t2 x`.
pub fn distinguish_spec(t1: &SLMat, t2: &SLMat) -> Result<SpecDistinction> {
    if !t1.is_diagonal() || !t2.is_diagonal() {
        return Err(Error::InvalidArgument("distinguish_spec needs diagonal matrices".into()));
    }
    if t1.dim() != t2.dim() {
        return Err(Error::DimensionMismatch(t1.dim(), t2.dim()));
    }
    distinguish_spec_q(&to_qmat(t1)?, &to_qmat(t2)?)
}

pub fn distinguish_spec_q(t1: &QMat, t2: &QMat) -> Result<SpecDistinction> {
    let n = t1.n;
    let is_diag = |m: &QMat| (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j) == &Q::from_integer(0.into())));
    if !is_diag(t1) || !is_diag(t2) {
        return Err(Error::InvalidArgument("distinguish_spec needs diagonal matrices".into()));
    }
    if t1 == t2 {
        return Ok(SpecDistinction::Equal);
    }
    for factors in witness_pool(n) {
        let x = pool_matrix(n, &factors);
        if t1.mul(&x).charpoly() != t2.mul(&x).charpoly() {
            return Ok(SpecDistinction::Witness { factors, x });
        }
    }
    Ok(SpecDistinction::Exhausted)
}
