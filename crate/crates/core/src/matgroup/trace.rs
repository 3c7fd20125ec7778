use std::fmt;

use super::PSLElem;
use crate::rings::{RElem, RingSpec};

/// Trace of a `PSL_d` element up to multiplication by `d`-th roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceClass {
    pub ring: RingSpec,
    pub d: usize,
    /// `None` for the zero class, otherwise the least orbit representative.
    pub value: Option<RElem>,
}

impl fmt::Display for TraceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            None => write!(f, "ZERO"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

fn class_of(ring: RingSpec, d: usize, t: &RElem) -> TraceClass {
    let value = if t.is_zero() {
        None
    } else {
        ring.roots_of_unity(d).iter().map(|z| t.mul_unchecked(z)).min()
    };
    TraceClass { ring, d, value }
}

pub fn trace_class(g: &PSLElem) -> TraceClass {
    class_of(g.ring(), g.dim(), &g.lift().trace())
}

pub fn trace_class_eq(t1: &TraceClass, t2: &TraceClass) -> bool {
    t1 == t2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{elem_mat, SLMat};

    #[test]
    fn trace_class_examples() {
        let z = RingSpec::Integers;
        let id = PSLElem::identity(z, 3);
        assert_eq!(trace_class(&id).value, Some(z.from_i64(3)));
        let four = PSLElem::new(SLMat::from_i64_rows(z, &[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]).unwrap());
        assert_eq!(four.lift().trace(), z.from_i64(4));
        assert!(!trace_class_eq(&trace_class(&id), &trace_class(&four)));
    }

    #[test]
    fn central_twists_do_not_change_the_class() {
        let g = RingSpec::Gaussian;
        let x = elem_mat(g, 4, 1, 2, &g.gaussian(2, 1).unwrap()).unwrap();
        let base = class_of(g, 4, &x.lift().trace());
        for z in g.roots_of_unity(4) {
            assert_eq!(class_of(g, 4, &x.lift().scale(&z).trace()), base);
        }
        let z = RingSpec::Integers;
        let t = z.from_i64(-5);
        assert_eq!(class_of(z, 2, &t), class_of(z, 2, &z.from_i64(5)));
        assert_ne!(class_of(z, 3, &t), class_of(z, 3, &z.from_i64(5)));
        assert_eq!(class_of(z, 3, &z.zero()).value, None);
    }
}
