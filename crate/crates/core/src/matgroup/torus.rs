use crate::error::{Error, Result};
use crate::linalg::{q, q_frac, rank, QMat, Q};

/// Exact ranks of the spans built from the diagonal torus and its two
/// unipotent conjugates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSpanReport {
    pub n: usize,
    pub rank_torus: usize,
    pub rank_t_alpha1: usize,
    pub rank_t_alpha2: usize,
    pub rank_total: usize,
}

/// `I` and `diag(…, 2 at k, …, 1/2 at n)` for `k < n`.
fn torus_generators(n: usize) -> Vec<QMat> {
    let mut gens = vec![QMat::identity(n)];
    for k in 0..n - 1 {
        let mut d = vec![q(1); n];
        d[k] = q(2);
        d[n - 1] = q_frac(1, 2);
        gens.push(QMat::diag(&d));
    }
    gens
}

/// Unipotent with ones on the right column (`column = true`) or bottom row.
fn alpha(n: usize, column: bool) -> QMat {
    let mut m = QMat::identity(n);
    for k in 0..n - 1 {
        if column {
            m.set(k, n - 1, q(1));
        } else {
            m.set(n - 1, k, q(1));
        }
    }
    m
}

fn conjugates(gens: &[QMat], a: &QMat) -> Vec<QMat> {
    let inv = a.inverse().expect("unipotent matrices are invertible");
    gens.iter().map(|t| a.mul(t).mul(&inv)).collect()
}

fn flat(ms: &[QMat]) -> Vec<Vec<Q>> {
    ms.iter().map(|m| m.a.clone()).collect()
}

pub fn torus_span_report(n: usize) -> Result<TorusSpanReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let t = torus_generators(n);
    let rank_torus = rank(&flat(&t));
    if rank_torus != n {
        return Err(Error::Internal(format!("torus generators span rank {rank_torus}, expected {n}")));
    }
    let t1 = conjugates(&t, &alpha(n, true));
    let t2 = conjugates(&t, &alpha(n, false));
    let union = |other: &[QMat]| rank(&flat(&t.iter().chain(other).cloned().collect::<Vec<_>>()));
    let mut products = Vec::with_capacity(t.len().pow(3));
    for a in &t {
        for b in &t1 {
            let ab = a.mul(b);
            for c in &t2 {
                products.push(ab.mul(c));
            }
        }
    }
    Ok(TorusSpanReport {
        n,
        rank_torus,
        rank_t_alpha1: union(&t1),
        rank_t_alpha2: union(&t2),
        rank_total: rank(&flat(&products)),
    })
}

/// `(rank_total, rank_T_alpha1, rank_T_alpha2)`.
pub fn torus_span_rank(n: usize) -> Result<(usize, usize, usize)> {
    let r = torus_span_report(n)?;
    Ok((r.rank_total, r.rank_t_alpha1, r.rank_t_alpha2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(torus_span_rank(3).unwrap(), (9, 5, 5));
        assert_eq!(torus_span_rank(4).unwrap().0, 16);
        for n in 2..=5 {
            let (total, a1, a2) = torus_span_rank(n).unwrap();
            assert_eq!((total, a1, a2), (n * n, 2 * n - 1, 2 * n - 1), "n = {n}");
        }
        assert!(torus_span_rank(1).is_err());
    }
}
