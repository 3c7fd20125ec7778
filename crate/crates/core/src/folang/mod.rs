//! First-order formulas in the language of groups, evaluated by enumeration
//! over a finite group.
//!
//! Surface syntax:
//!
//! ```text
//! formula := "all" var formula | "exists" var formula | "not" formula
//!          | formula ("and" | "or" | "->") formula | "(" formula ")"
//!          | term "=" term
//! term    := var | Param | "E" | term "*" term | term "^-1" | "(" term ")"
//! ```
//!
//! Variables start with a lowercase letter, parameters with an uppercase
//! one; `E` is the identity. Quantifiers and `not` bind tighter than `and`,
//! which binds tighter than `or`, which binds tighter than `->`
//! (right-associative).

mod eval;
mod library;
mod parser;

use std::fmt;

pub use eval::{define_set, eval, eval_with, Assignment, Evaluator, GroupStructure};
pub use library::{formula_library, phi_cong, phi_sim, phi_upsilon, LibraryFormula, CONG_DEPTH};
pub use parser::{parse, parse_formula_file, parse_open, parse_with_free, NamedFormula};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Param(String),
    Identity,
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    All(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match self {
            Term::Param(p) if !out.contains(p) => out.push(p.clone()),
            Term::Mul(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            Term::Inv(a) => a.collect_params(out),
            _ => {}
        }
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Term::Var(v) if !bound.contains(v) && !out.contains(v) => out.push(v.clone()),
            Term::Mul(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Inv(a) => a.collect_free(bound, out),
            _ => {}
        }
    }
}

impl Formula {
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn all(v: &str, a: Formula) -> Formula {
        Formula::All(v.to_string(), Box::new(a))
    }

    pub fn exists(v: &str, a: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(a))
    }

    /// Parameters in order of first occurrence.
    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk_terms(&mut |t| t.collect_params(&mut out));
        out
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Eq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::All(v, a) | Formula::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn walk_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(a) | Formula::All(_, a) | Formula::Exists(_, a) => a.walk_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.walk_terms(f);
                b.walk_terms(f);
            }
        }
    }

    /// Number of nodes of the formula tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) => 1,
            Formula::Not(a) | Formula::All(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Longest chain of nested quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Eq(..) => 0,
            Formula::Not(a) => a.quantifier_depth(),
            Formula::All(_, a) | Formula::Exists(_, a) => 1 + a.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
        }
    }

    /// Number of quantifiers in the formula tree.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Eq(..) => 0,
            Formula::Not(a) => a.quantifier_count(),
            Formula::All(_, a) | Formula::Exists(_, a) => 1 + a.quantifier_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_count() + b.quantifier_count()
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Param(v) => write!(f, "{v}"),
            Term::Identity => write!(f, "E"),
            Term::Mul(a, b) => match **b {
                Term::Mul(..) => write!(f, "{a} * ({b})"),
                _ => write!(f, "{a} * {b}"),
            },
            Term::Inv(a) => match **a {
                Term::Mul(..) => write!(f, "({a})^-1"),
                _ => write!(f, "{a}^-1"),
            },
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(a) => write!(f, "not {a}"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::All(v, a) => write!(f, "all {v} {a}"),
            Formula::Exists(v, a) => write!(f, "exists {v} {a}"),
        }
    }
}

#[cfg(test)]
mod tests;
