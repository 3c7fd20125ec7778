use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{Formula, Term};
use crate::error::{Error, Result};
use crate::quotientlab::{ElementSet, FinGroup};

/// A finite group presented by element indices `0..order`.
pub trait GroupStructure: Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;
}

impl GroupStructure for FinGroup {
    fn order(&self) -> usize {
        FinGroup::order(self)
    }

    fn identity(&self) -> u32 {
        FinGroup::identity(self)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        FinGroup::mul(self, a, b)
    }

    fn inv(&self, a: u32) -> u32 {
        FinGroup::inv(self, a)
    }
}

/// Values for parameters and free variables, by name.
pub type Assignment = HashMap<String, u32>;

const UNSET: u32 = u32::MAX;
const MEMO_WIDTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum TNode {
    Var(usize),
    Param(usize),
    Identity,
    Mul(usize, usize),
    Inv(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum FNode {
    Eq(usize, usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    All(usize, usize),
    Exists(usize, usize),
    /// `body` with the variable fixed to the value of a term: the
    /// one-point forms `exists z (z = t and body)` and
    /// `all z (z = t -> body)`.
    Let(usize, usize, usize),
}

/// Hash-consed formula DAG; identical subformulas share one node, so
/// quantifier results can be memoized per node and free-variable values.
#[derive(Debug, Default)]
struct Compiled {
    vars: Vec<String>,
    params: Vec<String>,
    terms: Vec<TNode>,
    term_ids: HashMap<TNode, usize>,
    term_free: Vec<Vec<usize>>,
    nodes: Vec<FNode>,
    node_ids: HashMap<FNode, usize>,
    node_free: Vec<Vec<usize>>,
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl Compiled {
    fn slot(names: &mut Vec<String>, name: &str) -> usize {
        names.iter().position(|v| v == name).unwrap_or_else(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    }

    fn term(&mut self, t: &Term) -> usize {
        let (node, free) = match t {
            Term::Var(v) => {
                let s = Self::slot(&mut self.vars, v);
                (TNode::Var(s), vec![s])
            }
            Term::Param(p) => (TNode::Param(Self::slot(&mut self.params, p)), vec![]),
            Term::Identity => (TNode::Identity, vec![]),
            Term::Mul(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                (TNode::Mul(a, b), union(&self.term_free[a], &self.term_free[b]))
            }
            Term::Inv(a) => {
                let a = self.term(a);
                (TNode::Inv(a), self.term_free[a].clone())
            }
        };
        if let Some(&id) = self.term_ids.get(&node) {
            return id;
        }
        self.terms.push(node);
        self.term_free.push(free);
        self.term_ids.insert(node, self.terms.len() - 1);
        self.terms.len() - 1
    }

    fn add(&mut self, node: FNode, free: Vec<usize>) -> usize {
        if let Some(&id) = self.node_ids.get(&node) {
            return id;
        }
        self.nodes.push(node);
        self.node_free.push(free);
        self.node_ids.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// Recognizes `z = t` (either side) with `z` not occurring in `t`.
    fn one_point(&mut self, z: &str, eq: &Formula) -> Option<usize> {
        let Formula::Eq(a, b) = eq else {
            return None;
        };
        let other = match (a, b) {
            (Term::Var(v), t) if v == z => t,
            (t, Term::Var(v)) if v == z => t,
            _ => return None,
        };
        let mut free = Vec::new();
        other.collect_free(&mut Vec::new(), &mut free);
        if free.iter().any(|v| v == z) {
            return None;
        }
        Some(self.term(other))
    }

    fn formula(&mut self, f: &Formula) -> usize {
        match f {
            Formula::Eq(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let free = union(&self.term_free[a], &self.term_free[b]);
                self.add(FNode::Eq(a, b), free)
            }
            Formula::Not(a) => {
                let a = self.formula(a);
                let free = self.node_free[a].clone();
                self.add(FNode::Not(a), free)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let (x, y) = (self.formula(a), self.formula(b));
                let free = union(&self.node_free[x], &self.node_free[y]);
                let node = match f {
                    Formula::And(..) => FNode::And(x, y),
                    Formula::Or(..) => FNode::Or(x, y),
                    _ => FNode::Implies(x, y),
                };
                self.add(node, free)
            }
            Formula::All(v, body) | Formula::Exists(v, body) => {
                let slot = Self::slot(&mut self.vars, v);
                let shaped = match (f, &**body) {
                    (Formula::Exists(..), Formula::And(eq, rest)) => Some((eq, rest)),
                    (Formula::All(..), Formula::Implies(eq, rest)) => Some((eq, rest)),
                    _ => None,
                };
                if let Some((eq, rest)) = shaped {
                    if let Some(t) = self.one_point(v, eq) {
                        let b = self.formula(rest);
                        let mut free: Vec<usize> = self.node_free[b].iter().copied().filter(|&s| s != slot).collect();
                        free = union(&free, &self.term_free[t]);
                        return self.add(FNode::Let(slot, t, b), free);
                    }
                }
                let b = self.formula(body);
                let free = self.node_free[b].iter().copied().filter(|&s| s != slot).collect();
                let node = if matches!(f, Formula::All(..)) { FNode::All(slot, b) } else { FNode::Exists(slot, b) };
                self.add(node, free)
            }
        }
    }
}

/// Evaluates one formula against a structure under a fixed assignment.
/// Quantifier nodes are memoized on the values of their free variables.
pub struct Evaluator<'a, S: GroupStructure> {
    s: &'a S,
    c: Arc<Compiled>,
    root: usize,
    params: Vec<u32>,
    env: Vec<u32>,
    memo: HashMap<(usize, [u32; MEMO_WIDTH]), bool>,
}

impl<'a, S: GroupStructure> Evaluator<'a, S> {
    /// Fails with `Unassigned` unless every parameter and free variable of
    /// `f` has a value in `assignment`.
    pub fn new(s: &'a S, f: &Formula, assignment: &Assignment) -> Result<Self> {
        let mut c = Compiled::default();
        let root = c.formula(f);
        let lookup = |name: &String| -> Result<u32> {
            let v = *assignment.get(name).ok_or_else(|| Error::Unassigned(name.clone()))?;
            if v as usize >= s.order() {
                return Err(Error::InvalidArgument(format!("value {v} for `{name}` is not an element")));
            }
            Ok(v)
        };
        let params = c.params.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let mut env = vec![UNSET; c.vars.len()];
        for &slot in &c.node_free[root] {
            env[slot] = lookup(&c.vars[slot])?;
        }
        Ok(Evaluator { s, c: Arc::new(c), root, params, env, memo: HashMap::new() })
    }

    fn fork(&self) -> Self {
        Evaluator {
            s: self.s,
            c: Arc::clone(&self.c),
            root: self.root,
            params: self.params.clone(),
            env: self.env.clone(),
            memo: HashMap::new(),
        }
    }

    fn slot_of(&self, var: &str) -> Option<usize> {
        self.c.vars.iter().position(|v| v == var)
    }

    /// Truth value under the current assignment.
    pub fn holds(&mut self) -> bool {
        self.node(self.root)
    }

    /// Truth value with the free variable `var` set to `value`.
    pub fn holds_at(&mut self, var: &str, value: u32) -> bool {
        match self.slot_of(var) {
            Some(slot) => {
                let old = std::mem::replace(&mut self.env[slot], value);
                let r = self.holds();
                self.env[slot] = old;
                r
            }
            None => self.holds(),
        }
    }

    fn term(&self, t: usize) -> u32 {
        match self.c.terms[t] {
            TNode::Var(s) => self.env[s],
            TNode::Param(p) => self.params[p],
            TNode::Identity => self.s.identity(),
            TNode::Mul(a, b) => self.s.mul(self.term(a), self.term(b)),
            TNode::Inv(a) => self.s.inv(self.term(a)),
        }
    }

    fn memo_key(&self, f: usize) -> Option<(usize, [u32; MEMO_WIDTH])> {
        let free = &self.c.node_free[f];
        if free.len() > MEMO_WIDTH {
            return None;
        }
        let mut key = [UNSET; MEMO_WIDTH];
        for (k, &s) in key.iter_mut().zip(free) {
            *k = self.env[s];
        }
        Some((f, key))
    }

    fn scan(&mut self, slot: usize, body: usize, want: bool) -> bool {
        let old = self.env[slot];
        let mut found = false;
        for v in 0..self.s.order() as u32 {
            self.env[slot] = v;
            if self.node(body) == want {
                found = true;
                break;
            }
        }
        self.env[slot] = old;
        found
    }

    fn node(&mut self, f: usize) -> bool {
        match self.c.nodes[f] {
            FNode::Eq(a, b) => self.term(a) == self.term(b),
            FNode::Not(a) => !self.node(a),
            FNode::And(a, b) => self.node(a) && self.node(b),
            FNode::Or(a, b) => self.node(a) || self.node(b),
            FNode::Implies(a, b) => !self.node(a) || self.node(b),
            FNode::Let(slot, t, body) => {
                let v = self.term(t);
                let old = std::mem::replace(&mut self.env[slot], v);
                let r = self.node(body);
                self.env[slot] = old;
                r
            }
            FNode::All(slot, body) | FNode::Exists(slot, body) => {
                let key = self.memo_key(f);
                if let Some(&r) = key.as_ref().and_then(|k| self.memo.get(k)) {
                    return r;
                }
                let r = match self.c.nodes[f] {
                    FNode::All(..) => !self.scan(slot, body, false),
                    _ => self.scan(slot, body, true),
                };
                if let Some(k) = key {
                    self.memo.insert(k, r);
                }
                r
            }
        }
    }

    /// Evaluates the root, scanning an outermost quantifier in parallel.
    fn holds_parallel(&mut self) -> bool
    where
        S: Sync,
    {
        let (slot, body, universal) = match self.c.nodes[self.root] {
            FNode::All(s, b) => (s, b, true),
            FNode::Exists(s, b) => (s, b, false),
            _ => return self.holds(),
        };
        let base = &*self;
        let test = |ev: &mut Evaluator<'a, S>, v: u32| {
            ev.env[slot] = v;
            ev.node(body)
        };
        let range = (0..self.s.order() as u32).into_par_iter();
        if universal {
            range.map_init(|| base.fork(), test).all(|b| b)
        } else {
            range.map_init(|| base.fork(), test).any(|b| b)
        }
    }
}

/// Truth value of `f` in `s`; `assignment` must cover its parameters and
/// free variables.
pub fn eval_with<S: GroupStructure>(s: &S, f: &Formula, assignment: &Assignment) -> Result<bool> {
    Ok(Evaluator::new(s, f, assignment)?.holds_parallel())
}

/// Truth value of a sentence in `s` under parameter values `params`.
pub fn eval<S: GroupStructure>(s: &S, sentence: &Formula, params: &Assignment) -> Result<bool> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(Error::Arity { expected: 0, found: free.len() });
    }
    eval_with(s, sentence, params)
}

/// The set `{a : f(a)}` for a formula with exactly one free variable.
pub fn define_set(g: &FinGroup, f: &Formula, params: &Assignment) -> Result<ElementSet> {
    let free = f.free_vars();
    if free.len() != 1 {
        return Err(Error::Arity { expected: 1, found: free.len() });
    }
    let var = &free[0];
    let mut assignment = params.clone();
    assignment.insert(var.clone(), g.identity());
    let base = Evaluator::new(g, f, &assignment)?;
    let members: Vec<u32> = (0..g.order() as u32)
        .into_par_iter()
        .map_init(|| base.fork(), |ev, v| ev.holds_at(var, v).then_some(v))
        .flatten()
        .collect();
    Ok(ElementSet::from_indices(g, members))
}
