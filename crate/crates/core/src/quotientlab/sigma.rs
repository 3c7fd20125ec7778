use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{psl_order, FinGroup, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::linalg::modp;
use crate::matgroup::PSLElem;
use crate::spectra::{delta, f_count_u64, FpUnit};

fn e1n_coordinates(g: &FinGroup) -> Result<HashMap<u32, u64>> {
    (0..g.q()).map(|b| Ok((g.elem(1, g.n(), b)?, b))).collect()
}

/// `Σ = {a ∈ F_q : ∃x, [x⁻¹θx, ε] = e_{1,n}(a − 1)}` with `ε = e_{1,n}(1)`.
///
/// `x⁻¹θx` runs over the conjugacy class of `θ`, which is scanned once.
pub fn sigma_set(g: &FinGroup, theta: u32) -> Result<BTreeSet<u64>> {
    let eps = g.elem(1, g.n(), 1)?;
    let coords = e1n_coordinates(g)?;
    Ok(g.class_of(theta)
        .iter()
        .filter_map(|&c| coords.get(&g.commutator(c, eps)).map(|b| (b + 1) % g.q()))
        .collect())
}

/// The same set by the literal scan over every `x ∈ G`.
pub fn sigma_set_exhaustive(g: &FinGroup, theta: u32) -> Result<BTreeSet<u64>> {
    let eps = g.elem(1, g.n(), 1)?;
    let coords = e1n_coordinates(g)?;
    Ok((0..g.order() as u32)
        .filter_map(|x| {
            let c = g.mul(g.mul(g.inv(x), theta), x);
            coords.get(&g.commutator(c, eps)).map(|b| (b + 1) % g.q())
        })
        .collect())
}

fn eigen_data(m: &[u64], n: usize, p: u64) -> Vec<(u64, Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    let shifted = |lambda: u64, transpose: bool| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = if transpose { m[j * n + i] } else { m[i * n + j] } % p;
                        if i == j {
                            (x + p - lambda) % p
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect()
    };
    (1..p)
        .filter_map(|lambda| {
            let right = modp::kernel(&shifted(lambda, false), p);
            (!right.is_empty()).then(|| (lambda, right, modp::kernel(&shifted(lambda, true), p)))
        })
        .collect()
}

/// `Σ` from the `F_p`-eigenvalues of a lift `m` of `θ`: `a ∈ Σ` iff
/// `a = μ/λ` for a right `μ`-eigenvector `v` and a left `λ`-eigenvector `ℓ`
/// with `ℓᵀv = 0`. Distinct eigenvalues always qualify; equal ones qualify
/// when either eigenspace has dimension ≥ 2 or the two lines pair to 0.
pub fn sigma_set_eigen(m: &[u64], n: usize, p: u64) -> BTreeSet<u64> {
    let data = eigen_data(m, n, p);
    let mut out = BTreeSet::new();
    for (mu, right, _) in &data {
        for (lambda, _, left) in &data {
            let qualifies = mu != lambda
                || right.len() >= 2
                || left.len() >= 2
                || right[0].iter().zip(&left[0]).map(|(a, b)| a * b % p).sum::<u64>() % p == 0;
            if qualifies {
                out.insert(mu * modp::inv(*lambda, p) % p);
            }
        }
    }
    out
}

/// `F_p`-eigenvalues of `m` (roots of the characteristic polynomial in `F_p^×`).
pub fn eigenvalues_mod_p(m: &[u64], n: usize, p: u64) -> Vec<u64> {
    eigen_data(m, n, p).into_iter().map(|(l, _, _)| l).collect()
}

/// `Δ = δ(Σ ∖ {0})` inside `F_q^×`.
pub fn delta_sigma(sigma: &BTreeSet<u64>, q: u64) -> BTreeSet<u64> {
    let units: BTreeSet<FpUnit> = sigma.iter().filter_map(|&a| FpUnit::new(q, a).ok()).collect();
    if units.is_empty() {
        return BTreeSet::new();
    }
    delta(&units).expect("nonempty").into_iter().map(|u| u.v).collect()
}

/// `|Δ_θ| = f(d)`.
pub fn vr_in_quotient(g: &FinGroup, theta: u32, d: usize) -> Result<bool> {
    let sigma = sigma_set(g, theta)?;
    Ok(delta_sigma(&sigma, g.q()).len() as u64 == f_count_u64(d as u64)?)
}

/// Per-class `|Δ|` over a whole group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VrScan {
    pub n: usize,
    pub q: u64,
    pub f: u64,
    pub max_delta: usize,
    /// Class representatives with `|Δ| = f(n)`.
    pub extremal: Vec<u32>,
    /// Class representatives with `|Δ| > f(n)`.
    pub violations: Vec<u32>,
}

pub fn vr_scan(g: &FinGroup) -> Result<VrScan> {
    let f = f_count_u64(g.n() as u64)?;
    let mut scan = VrScan { n: g.n(), q: g.q(), f, max_delta: 0, extremal: vec![], violations: vec![] };
    for class in &g.classes().classes {
        let size = delta_sigma(&sigma_set(g, class[0])?, g.q()).len();
        scan.max_delta = scan.max_delta.max(size);
        if size as u64 == f {
            scan.extremal.push(class[0]);
        }
        if size as u64 > f {
            scan.violations.push(class[0]);
        }
    }
    Ok(scan)
}

/// Entries of a lift reduced into `F_p`; entries must be rational with
/// denominators prime to `p`.
pub fn reduce_lift_mod_p(g: &PSLElem, p: u64) -> Result<Vec<u64>> {
    let pb = BigInt::from(p);
    g.lift()
        .entries()
        .iter()
        .map(|e| {
            let r = e.to_rational().ok_or_else(|| Error::Unsupported(format!("reduction of {} entries mod {p}", e.ring())))?;
            let num = r.numer().mod_floor(&pb).to_u64().unwrap();
            let den = r.denom().mod_floor(&pb).to_u64().unwrap();
            if den == 0 {
                return Err(Error::InvalidArgument(format!("{p} divides a denominator of {e}")));
            }
            Ok(num * modp::inv(den, p) % p)
        })
        .collect()
}

/// How `Σ_{θ,p}` is evaluated for elements over `Z` or `Z[1/N]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaRoute {
    /// Enumerate `PSL_n(F_p)` when its order is at most this; otherwise use
    /// the eigenvector description.
    pub brute_cap: u64,
}

impl Default for SigmaRoute {
    fn default() -> Self {
        SigmaRoute { brute_cap: 6000 }
    }
}

/// Shared, build-once groups.
pub fn shared_group(n: usize, q: u64) -> Result<Arc<FinGroup>> {
    static GROUPS: OnceLock<Mutex<HashMap<(usize, u64), Arc<FinGroup>>>> = OnceLock::new();
    let map = GROUPS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = map.lock().unwrap().get(&(n, q)) {
        return Ok(g.clone());
    }
    let g = Arc::new(super::enumerate_psl(n, q)?);
    Ok(map.lock().unwrap().entry((n, q)).or_insert(g).clone())
}

pub fn sigma_for_prime(g: &PSLElem, p: u64, route: SigmaRoute) -> Result<BTreeSet<u64>> {
    let n = g.dim();
    let m = reduce_lift_mod_p(g, p)?;
    if psl_order(n, p) <= route.brute_cap.min(DEFAULT_CAP) as u128 {
        let group = shared_group(n, p)?;
        let signed: Vec<i64> = m.iter().map(|&x| x as i64).collect();
        let idx = group.index_of_matrix(&signed).ok_or_else(|| Error::Internal("reduction left SL".into()))?;
        sigma_set(&group, idx)
    } else {
        Ok(sigma_set_eigen(&m, n, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotientlab::FinGroup;
    use rand::{Rng, SeedableRng};

    fn psl(n: usize, q: u64) -> FinGroup {
        FinGroup::build(n, q, DEFAULT_CAP, None).unwrap()
    }

    fn lift(g: &FinGroup, i: u32) -> Vec<u64> {
        g.matrix(i).iter().map(|&x| x as u64).collect()
    }

    #[test]
    fn sigma_examples() {
        let g = psl(3, 2);
        assert_eq!(sigma_set(&g, 0).unwrap(), BTreeSet::from([1]));
        assert_eq!(sigma_set_exhaustive(&g, 0).unwrap(), BTreeSet::from([1]));
        let g = psl(3, 5);
        let diag = g.index_of_matrix(&[2, 0, 0, 0, 3, 0, 0, 0, 1]).unwrap();
        let sigma = sigma_set(&g, diag).unwrap();
        let eig = [2u64, 3, 1];
        let ratios: BTreeSet<u64> =
            eig.iter().flat_map(|&a| eig.iter().map(move |&b| a * modp::inv(b, 5) % 5)).collect();
        assert!(sigma.is_subset(&ratios));
    }

    #[test]
    fn sigma_is_a_class_function() {
        let g = psl(3, 2);
        for class in &g.classes().classes {
            let base = sigma_set_exhaustive(&g, class[0]).unwrap();
            for &x in class {
                assert_eq!(sigma_set_exhaustive(&g, x).unwrap(), base);
            }
            assert_eq!(sigma_set(&g, class[0]).unwrap(), base);
        }
    }

    #[test]
    fn eigen_description_matches_enumeration() {
        for (n, q) in [(3, 2), (3, 3), (4, 2), (2, 5), (2, 7), (2, 11), (2, 13)] {
            let g = psl(n, q);
            for class in &g.classes().classes {
                assert_eq!(
                    sigma_set_eigen(&lift(&g, class[0]), n, q),
                    sigma_set(&g, class[0]).unwrap(),
                    "PSL_{n}(F_{q}) class of {:?}",
                    g.matrix(class[0])
                );
            }
        }
    }

    #[test]
    fn eigen_description_matches_enumeration_mod_5() {
        let g = psl(3, 5);
        for class in &g.classes().classes {
            assert_eq!(sigma_set_eigen(&lift(&g, class[0]), 3, 5), sigma_set(&g, class[0]).unwrap());
        }
    }

    #[test]
    fn delta_is_bounded_by_the_adjoint_spectrum() {
        let g = psl(3, 5);
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let t = rng.gen_range(0..g.order() as u32);
            let d = delta_sigma(&sigma_set(&g, t).unwrap(), 5);
            let eig = eigenvalues_mod_p(&lift(&g, t), 3, 5);
            let ad: BTreeSet<FpUnit> = eig
                .iter()
                .flat_map(|&a| eig.iter().map(move |&b| FpUnit::new(5, a * modp::inv(b, 5)).unwrap()))
                .collect();
            let bound = if ad.is_empty() { 0 } else { crate::spectra::delta2(&ad).unwrap().len() };
            assert!(d.len() <= bound);
        }
    }

    #[test]
    fn vr_examples() {
        let g = psl(3, 2);
        assert!(!vr_in_quotient(&g, 0, 3).unwrap());
        let scan = vr_scan(&g).unwrap();
        assert!(scan.violations.is_empty());
        assert!(scan.max_delta as u64 <= scan.f);
    }
}
