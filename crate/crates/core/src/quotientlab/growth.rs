use super::{ElementSet, FinGroup};
use crate::error::{Error, Result};

/// `class(γ) ∪ class(γ⁻¹)`.
pub fn gcl(g: &FinGroup, gamma: u32) -> ElementSet {
    let mut s = ElementSet::from_indices(g, g.class_of(gamma).iter().copied());
    s.union_with(&ElementSet::from_indices(g, g.class_of(g.inv(gamma)).iter().copied()));
    s
}

/// `A · B`.
pub fn product_set(g: &FinGroup, a: &ElementSet, b: &ElementSet) -> ElementSet {
    let right: Vec<u32> = b.iter().collect();
    let mut out = ElementSet::empty(g);
    for x in a.iter() {
        for &y in &right {
            out.insert(g.mul(x, y));
        }
    }
    out
}

/// `[S, S², …, S^k]`. Once `S^{i+1} = S^i` every later power repeats.
pub fn product_growth(g: &FinGroup, s: &ElementSet, k: usize) -> Result<Vec<ElementSet>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if k == 0 {
        return Err(Error::InvalidArgument("need k >= 1".into()));
    }
    let mut powers = vec![s.clone()];
    while powers.len() < k {
        let last = powers.last().unwrap();
        let next = product_set(g, last, s);
        if next == *last {
            while powers.len() < k {
                powers.push(next.clone());
            }
            break;
        }
        powers.push(next);
    }
    Ok(powers)
}

/// `E_{1,n}(F_q) · E_{1,n−1}(F_q)`.
pub fn ebar(g: &FinGroup) -> Result<ElementSet> {
    let n = g.n();
    let mut out = ElementSet::empty(g);
    for a in 0..g.q() {
        for b in 0..g.q() {
            out.insert(g.mul(g.elem(1, n, a)?, g.elem(1, n - 1, b)?));
        }
    }
    Ok(out)
}

/// Per-class outcome of the finite congruence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGrowth {
    pub representative: u32,
    pub class_size: usize,
    /// Least `k ≤ kmax` with `gcl^k` meeting `Ē ∖ {1}`.
    pub min_k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongDefReport {
    pub n: usize,
    pub q: u64,
    pub kmax: usize,
    pub classes: Vec<ClassGrowth>,
}

impl CongDefReport {
    pub fn all_pass(&self) -> bool {
        self.classes.iter().all(|c| c.min_k.is_some())
    }

    pub fn max_min_k(&self) -> Option<usize> {
        self.classes.iter().filter_map(|c| c.min_k).max()
    }
}

/// For every nontrivial class, the least `k` with `gcl(γ)^k ∩ Ē ⊋ {1}`.
pub fn check_cong_def(g: &FinGroup, kmax: usize) -> Result<CongDefReport> {
    if g.n() < 3 {
        return Err(Error::InvalidArgument("the congruence check needs n >= 3".into()));
    }
    let mut target = ebar(g)?;
    let mut without_identity = ElementSet::empty(g);
    for x in target.iter().filter(|&x| x != g.identity()) {
        without_identity.insert(x);
    }
    target = without_identity;
    let mut classes = Vec::new();
    for class in &g.classes().classes {
        let rep = class[0];
        if rep == g.identity() {
            continue;
        }
        let s = gcl(g, rep);
        let mut power = s.clone();
        let mut min_k = None;
        for k in 1..=kmax {
            if power.intersects(&target) {
                min_k = Some(k);
                break;
            }
            let next = product_set(g, &power, &s);
            if next == power {
                break;
            }
            power = next;
        }
        classes.push(ClassGrowth { representative: rep, class_size: class.len(), min_k });
    }
    Ok(CongDefReport { n: g.n(), q: g.q(), kmax, classes })
}

pub fn centralizer(g: &FinGroup, x: u32) -> ElementSet {
    ElementSet::from_indices(g, (0..g.order() as u32).filter(|&y| g.mul(x, y) == g.mul(y, x)))
}

/// `Z(C_G(ε))`.
pub fn zcent(g: &FinGroup, eps: u32) -> ElementSet {
    let c: Vec<u32> = centralizer(g, eps).iter().collect();
    ElementSet::from_indices(g, c.iter().copied().filter(|&z| c.iter().all(|&y| g.mul(z, y) == g.mul(y, z))))
}

/// `E_{1,n}(F_q)`.
pub fn e1n(g: &FinGroup) -> Result<ElementSet> {
    let n = g.n();
    let mut out = ElementSet::empty(g);
    for a in 0..g.q() {
        out.insert(g.elem(1, n, a)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotientlab::{FinGroup, DEFAULT_CAP};
    use rand::{Rng, SeedableRng};

    fn psl(n: usize, q: u64) -> FinGroup {
        FinGroup::build(n, q, DEFAULT_CAP, None).unwrap()
    }

    /// Orbit of `x` under conjugation by every group element.
    fn orbit(g: &FinGroup, x: u32) -> std::collections::BTreeSet<u32> {
        (0..g.order() as u32).map(|y| g.conj(y, x)).collect()
    }

    #[test]
    fn gcl_examples() {
        let g = psl(3, 2);
        assert_eq!(gcl(&g, 0).iter().collect::<Vec<_>>(), vec![0]);
        let e = g.elem(1, 3, 1).unwrap();
        let s = gcl(&g, e);
        let mut oracle = orbit(&g, e);
        oracle.extend(orbit(&g, g.inv(e)));
        assert_eq!(s.iter().collect::<std::collections::BTreeSet<_>>(), oracle);
        assert_eq!(s.len(), 21);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let x = rng.gen_range(0..g.order() as u32);
            let moved = ElementSet::from_indices(&g, s.iter().map(|y| g.conj(x, y)));
            assert_eq!(moved, s);
        }
        // order-7 elements: class and inverse class differ
        let seven = (0..168u32).find(|&x| gcl(&g, x).len() == 48).expect("two classes of size 24");
        assert_ne!(g.class_of(seven), g.class_of(g.inv(seven)));
    }

    #[test]
    fn growth_examples() {
        let g = psl(3, 2);
        let one = ElementSet::from_indices(&g, [0]);
        assert!(product_growth(&g, &one, 5).unwrap().iter().all(|p| *p == one));
        let e = g.elem(1, 3, 1).unwrap();
        let mut s = gcl(&g, e);
        s.insert(0);
        let powers = product_growth(&g, &s, 32).unwrap();
        for w in powers.windows(2) {
            assert!(w[0].is_subset(&w[1]));
        }
        let top = powers.last().unwrap();
        assert_eq!(top.len(), g.order());
        let s = gcl(&g, e);
        let powers = product_growth(&g, &s, 32).unwrap();
        assert!(powers.iter().any(|p| p.len() == g.order()));
        assert!(product_growth(&g, &ElementSet::empty(&g), 3).is_err());
    }

    #[test]
    fn fixed_points_are_closed() {
        let g = psl(3, 2);
        for class in &g.classes().classes {
            let mut s = gcl(&g, class[0]);
            s.insert(0);
            let last = product_growth(&g, &s, 32).unwrap().pop().unwrap();
            assert_eq!(product_set(&g, &last, &last), last);
        }
    }

    #[test]
    fn congruence_check_small() {
        let g = psl(3, 2);
        let r = check_cong_def(&g, 32).unwrap();
        assert_eq!(r.classes.len(), 5);
        assert!(r.all_pass());
        assert_eq!(ebar(&g).unwrap().len(), 4);
    }

    #[test]
    fn zcent_small() {
        let g = psl(3, 2);
        let e = g.elem(1, 3, 1).unwrap();
        let z = zcent(&g, e);
        assert!(z.contains(e));
        for a in z.iter() {
            for b in z.iter() {
                assert_eq!(g.mul(a, b), g.mul(b, a));
            }
        }
        assert_eq!(z, e1n(&g).unwrap());
    }
}
