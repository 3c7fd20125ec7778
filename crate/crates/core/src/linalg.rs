//! Exact linear algebra over `Q` and over prime fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Dense square matrix over `Q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub n: usize,
    pub a: Vec<Q>,
}

impl QMat {
    pub fn zero(n: usize) -> Self {
        QMat { n, a: vec![Q::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.a[i * n + i] = Q::one();
        }
        m
    }

    pub fn diag(entries: &[Q]) -> Self {
        let mut m = Self::zero(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.a[i * entries.len() + i] = e.clone();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        let n = self.n;
        let mut out = QMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = other.get(k, j);
                    if !y.is_zero() {
                        out.a[i * n + j] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !m.get(r, col).is_zero())?;
            for j in 0..n {
                m.a.swap(col * n + j, piv * n + j);
                inv.a.swap(col * n + j, piv * n + j);
            }
            let p = m.get(col, col).clone();
            for j in 0..n {
                m.a[col * n + j] = &m.a[col * n + j] / &p;
                inv.a[col * n + j] = &inv.a[col * n + j] / &p;
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in 0..n {
                    let (mv, iv) = (&m.a[col * n + j] * &f, &inv.a[col * n + j] * &f);
                    m.a[r * n + j] -= mv;
                    inv.a[r * n + j] -= iv;
                }
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients from the
    /// constant term up (monic), by the Faddeev-LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<Q> {
        let n = self.n;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = QMat::zero(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next.a[i * n + i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self.mul(&m);
            coeffs[n - k] = -am.trace() / q(k as i64);
        }
        coeffs
    }
}

/// Rank of a list of vectors over `Q`.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut rows: Vec<Vec<Q>> = rows.to_vec();
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let p = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &p;
            for j in col..width {
                let t = &rows[rank][j] * &f;
                rows[r][j] -= t;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Polynomial division by `(x - 1)`; `None` if 1 is not a root.
pub fn divide_by_x_minus_one(coeffs: &[Q]) -> Option<Vec<Q>> {
    let n = coeffs.len() - 1;
    let mut out = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for k in (1..=n).rev() {
        carry = &coeffs[k] + carry;
        out[k - 1] = carry.clone();
    }
    (&coeffs[0] + carry).is_zero().then_some(out)
}

/// Multiplies monic-or-not polynomials given low-to-high.
pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub mod modp {
    //! Small dense matrices over `F_p` with `u64` entries.

    pub fn inv(x: u64, p: u64) -> u64 {
        crate::rings::mod_inverse_u64(x % p, p).expect("nonzero element of F_p")
    }

    /// Row-reduces `m` (rows × cols) in place and returns the pivot columns.
    pub fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows).find(|&k| !m[k][c].is_multiple_of(p)) else {
                continue;
            };
            m.swap(r, piv);
            let f = inv(m[r][c], p);
            for x in m[r].iter_mut() {
                *x = *x * f % p;
            }
            for k in 0..rows {
                if k != r && m[k][c] != 0 {
                    let g = m[k][c];
                    for j in 0..cols {
                        m[k][j] = (m[k][j] + p - g * m[r][j] % p) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        pivots
    }

    /// Basis of the right kernel `{v : m v = 0}`.
    pub fn kernel(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let mut a = m.to_vec();
        let cols = a.first().map_or(0, Vec::len);
        let pivots = rref(&mut a, p);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - a[r][fc] % p) % p;
                }
                v
            })
            .collect()
    }

    pub fn det(m: &[Vec<u64>], p: u64) -> u64 {
        let n = m.len();
        let mut a = m.to_vec();
        let mut det = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&k| !a[k][c].is_multiple_of(p)) else {
                return 0;
            };
            if piv != c {
                a.swap(piv, c);
                det = (p - det) % p;
            }
            det = det * a[c][c] % p;
            let f = inv(a[c][c], p);
            for k in c + 1..n {
                if a[k][c] != 0 {
                    let g = a[k][c] * f % p;
                    for j in c..n {
                        a[k][j] = (a[k][j] + p - g * a[c][j] % p) % p;
                    }
                }
            }
        }
        det
    }
}
