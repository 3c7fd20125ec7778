use rand::Rng;

use crate::matgroup::{elem_mat, PSLElem};
use crate::rings::RingSpec;

/// Random product of `steps` elementary matrices with small coefficients.
pub fn random_psl(ring: RingSpec, d: usize, steps: usize, rng: &mut impl Rng) -> PSLElem {
    let mut g = PSLElem::identity(ring, d);
    for _ in 0..steps {
        let i = rng.gen_range(1..=d);
        let mut j = rng.gen_range(1..=d);
        while j == i {
            j = rng.gen_range(1..=d);
        }
        let a = match ring {
            RingSpec::Gaussian => ring.gaussian(rng.gen_range(-1..=1), rng.gen_range(-1..=1)).unwrap(),
            _ => ring.from_i64(rng.gen_range(-2..=2)),
        };
        g = g.mul(&elem_mat(ring, d, i, j, &a).unwrap()).unwrap();
    }
    g
}
