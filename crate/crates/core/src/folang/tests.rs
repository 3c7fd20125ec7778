use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use super::*;
use crate::error::Error;
use crate::quotientlab::{sigma_set, zcent, FinGroup, DEFAULT_CAP};

fn psl3(q: u64) -> FinGroup {
    FinGroup::build(3, q, DEFAULT_CAP, None).unwrap()
}

fn no_params() -> Assignment {
    Assignment::new()
}

#[test]
fn parses_examples() {
    let f = parse("all x (x * E = x)").unwrap();
    assert_eq!(f, Formula::all("x", Formula::Eq(Term::mul(Term::var("x"), Term::Identity), Term::var("x"))));
    let g = parse("exists x (not (x = E))").unwrap();
    assert!(matches!(g, Formula::Exists(ref v, _) if v == "x"));
    assert!(g.is_sentence());
}

#[test]
fn syntax_error_points_at_dangling_operator() {
    match parse("all x (x * = x)") {
        Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 11),
        other => panic!("expected syntax error, got {other:?}"),
    }
    assert!(matches!(parse("all x (x = x"), Err(Error::Syntax { pos: 12, .. })));
    assert!(matches!(parse("x = E %"), Err(Error::Syntax { pos: 6, .. })));
}

#[test]
fn unbound_variables_are_reported() {
    match parse("all x (x = y)") {
        Err(Error::UnboundVariable { name, pos }) => assert_eq!((name.as_str(), pos), ("y", 11)),
        other => panic!("expected unbound variable, got {other:?}"),
    }
    assert!(parse_with_free("all x (x = y)", &["y"]).is_ok());
    assert_eq!(parse_open("x * y = Eps").unwrap().free_vars(), vec!["x", "y"]);
    assert_eq!(parse_open("x * y = Eps").unwrap().params(), vec!["Eps"]);
}

#[test]
fn precedence_and_associativity() {
    let f = parse_open("a = E -> b = E -> c = E").unwrap();
    let eq = |v: &str| Formula::Eq(Term::var(v), Term::Identity);
    assert_eq!(f, Formula::implies(eq("a"), Formula::implies(eq("b"), eq("c"))));
    let g = parse_open("a = E or b = E and c = E").unwrap();
    assert_eq!(g, Formula::or(eq("a"), Formula::and(eq("b"), eq("c"))));
    let h = parse_open("not a = E and b = E").unwrap();
    assert_eq!(h, Formula::and(Formula::not(eq("a")), eq("b")));
    let t = parse_open("(x * y)^-1 = y^-1 * x^-1").unwrap();
    let Formula::Eq(lhs, _) = t else { panic!() };
    assert_eq!(lhs, Term::inv(Term::mul(Term::var("x"), Term::var("y"))));
    let p = parse_open("x * y * z = E").unwrap();
    let Formula::Eq(lhs, _) = p else { panic!() };
    assert_eq!(lhs, Term::mul(Term::mul(Term::var("x"), Term::var("y")), Term::var("z")));
}

#[test]
fn print_then_parse_is_identity_on_library() {
    for lf in formula_library().unwrap() {
        let printed = lf.formula.to_string();
        assert_eq!(parse_open(&printed).unwrap(), lf.formula, "{}", lf.name);
    }
}

#[test]
fn library_shapes() {
    let up = phi_upsilon().unwrap();
    assert_eq!((up.params.len(), up.free.len()), (1, 1));
    let cong = phi_cong().unwrap();
    assert_eq!(cong.free, vec!["x"]);
    assert_eq!(cong.params, vec!["Eps", "Eps2"]);
    // one conjugation witness per leaf of the doubling tree
    assert_eq!(1 << CONG_DEPTH, 32);
    assert_eq!(cong.text.matches("exists y ").count(), 32);
    assert!(cong.formula.quantifier_count() >= 32);
    let sim = phi_sim().unwrap();
    assert_eq!(sim.free, vec!["g", "h"]);
    assert_eq!(sim.params, vec!["Eps"]);
}

#[test]
fn eval_examples_in_psl3_f2() {
    let g = psl3(2);
    assert!(!eval(&g, &parse("all x all y (x*y = y*x)").unwrap(), &no_params()).unwrap());
    assert!(eval(&g, &parse("exists x (not (x = E))").unwrap(), &no_params()).unwrap());
    let center = define_set(&g, &parse_open("all y (x*y = y*x)").unwrap(), &no_params()).unwrap();
    let direct: Vec<u32> = (0..g.order() as u32)
        .filter(|&x| (0..g.order() as u32).all(|y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    assert_eq!(center.iter().collect::<Vec<_>>(), direct);
    assert_eq!(direct, vec![g.identity()]);
    let all = define_set(&g, &parse_open("x = x").unwrap(), &no_params()).unwrap();
    assert_eq!(all.len(), g.order());
}

#[test]
fn eval_errors() {
    let g = psl3(2);
    let f = parse("all x (x * Eps = Eps * x)").unwrap();
    assert!(matches!(eval(&g, &f, &no_params()), Err(Error::Unassigned(p)) if p == "Eps"));
    let open = parse_open("x * y = E").unwrap();
    assert!(matches!(define_set(&g, &open, &no_params()), Err(Error::Arity { expected: 1, found: 2 })));
    assert!(matches!(eval(&g, &open, &no_params()), Err(Error::Arity { expected: 0, found: 2 })));
    let mut a = no_params();
    a.insert("x".into(), 1);
    a.insert("y".into(), g.inv(1));
    assert!(eval_with(&g, &open, &a).unwrap());
}

fn random_term(rng: &mut StdRng, vars: &[String], depth: usize) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        let k = rng.gen_range(0..vars.len() + 2);
        return match k {
            0 => Term::Identity,
            1 => Term::Param("A".into()),
            _ => Term::Var(vars[k - 2].clone()),
        };
    }
    if rng.gen_bool(0.3) {
        Term::inv(random_term(rng, vars, depth - 1))
    } else {
        Term::mul(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1))
    }
}

fn random_formula(rng: &mut StdRng, vars: &mut Vec<String>, depth: usize, quants: usize) -> Formula {
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..7) };
    match choice {
        0 if !vars.is_empty() => Formula::Eq(random_term(rng, vars, 2), random_term(rng, vars, 2)),
        1 => Formula::not(random_formula(rng, vars, depth - 1, quants)),
        2..=4 => {
            let a = random_formula(rng, vars, depth - 1, quants);
            let b = random_formula(rng, vars, depth - 1, quants);
            match choice {
                2 => Formula::and(a, b),
                3 => Formula::or(a, b),
                _ => Formula::implies(a, b),
            }
        }
        _ if quants > 0 || vars.is_empty() => {
            let v = format!("v{}", vars.len());
            vars.push(v.clone());
            let body = random_formula(rng, vars, depth.saturating_sub(1), quants.saturating_sub(1));
            vars.pop();
            if rng.gen_bool(0.5) {
                Formula::all(&v, body)
            } else {
                Formula::exists(&v, body)
            }
        }
        _ => Formula::Eq(random_term(rng, vars, 2), random_term(rng, vars, 2)),
    }
}

/// Negation normal form: implications expanded, negations pushed to atoms
/// through de Morgan and quantifier duality.
fn nnf(f: &Formula, negate: bool) -> Formula {
    match (f, negate) {
        (Formula::Eq(..), false) => f.clone(),
        (Formula::Eq(..), true) => Formula::not(f.clone()),
        (Formula::Not(a), n) => nnf(a, !n),
        (Formula::And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (Formula::And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Formula::Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Formula::Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (Formula::Implies(a, b), false) => Formula::or(nnf(a, true), nnf(b, false)),
        (Formula::Implies(a, b), true) => Formula::and(nnf(a, false), nnf(b, true)),
        (Formula::All(v, a), false) => Formula::all(v, nnf(a, false)),
        (Formula::All(v, a), true) => Formula::exists(v, nnf(a, true)),
        (Formula::Exists(v, a), false) => Formula::exists(v, nnf(a, false)),
        (Formula::Exists(v, a), true) => Formula::all(v, nnf(a, true)),
    }
}

#[test]
fn de_morgan_rewrites_preserve_truth() {
    let g = psl3(2);
    let mut rng = StdRng::seed_from_u64(11);
    let mut counts = [0usize; 2];
    for _ in 0..100 {
        let f = random_formula(&mut rng, &mut Vec::new(), 5, 2);
        let rewritten = nnf(&Formula::not(f.clone()), false);
        let mut params = no_params();
        params.insert("A".into(), rng.gen_range(0..g.order() as u32));
        let a = eval(&g, &f, &params).unwrap();
        let b = eval(&g, &rewritten, &params).unwrap();
        assert_eq!(a, !b, "{f}");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        counts[a as usize] += 1;
    }
    assert!(counts[0] > 0 && counts[1] > 0, "{counts:?}");
}

struct Relabeled<'a> {
    g: &'a FinGroup,
    fwd: Vec<u32>,
    back: Vec<u32>,
}

impl GroupStructure for Relabeled<'_> {
    fn order(&self) -> usize {
        self.g.order()
    }

    fn identity(&self) -> u32 {
        self.fwd[self.g.identity() as usize]
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.fwd[self.g.mul(self.back[a as usize], self.back[b as usize]) as usize]
    }

    fn inv(&self, a: u32) -> u32 {
        self.fwd[self.g.inv(self.back[a as usize]) as usize]
    }
}

#[test]
fn truth_is_invariant_under_relabeling() {
    let g = psl3(2);
    let mut rng = StdRng::seed_from_u64(5);
    let mut fwd: Vec<u32> = (0..g.order() as u32).collect();
    fwd.shuffle(&mut rng);
    let mut back = vec![0; fwd.len()];
    for (i, &f) in fwd.iter().enumerate() {
        back[f as usize] = i as u32;
    }
    let r = Relabeled { g: &g, fwd, back };
    for _ in 0..30 {
        let f = random_formula(&mut rng, &mut Vec::new(), 4, 2);
        let a = rng.gen_range(0..g.order() as u32);
        let p: Assignment = HashMap::from([("A".to_string(), a)]);
        let q: Assignment = HashMap::from([("A".to_string(), r.fwd[a as usize])]);
        assert_eq!(eval(&g, &f, &p).unwrap(), eval(&r, &f, &q).unwrap(), "{f}");
    }
    let up = phi_upsilon().unwrap();
    let params = up.standard_params(&g).unwrap();
    let moved: Assignment = params.iter().map(|(k, &v)| (k.clone(), r.fwd[v as usize])).collect();
    for x in 0..g.order() as u32 {
        let mut a = params.clone();
        a.insert("x".into(), x);
        let mut b = moved.clone();
        b.insert("x".into(), r.fwd[x as usize]);
        assert_eq!(eval_with(&g, &up.formula, &a).unwrap(), eval_with(&r, &up.formula, &b).unwrap());
    }
}

#[test]
fn phi_upsilon_defines_zcent() {
    for q in [2, 3] {
        let g = psl3(q);
        let up = phi_upsilon().unwrap();
        let params = up.standard_params(&g).unwrap();
        let set = define_set(&g, &up.formula, &params).unwrap();
        let oracle = zcent(&g, params["Eps"]);
        assert_eq!(set.iter().collect::<Vec<_>>(), oracle.iter().collect::<Vec<_>>(), "q = {q}");
    }
}

#[test]
fn phi_cong_defines_trivial_subgroup() {
    let g = psl3(2);
    let cong = phi_cong().unwrap();
    let params = cong.standard_params(&g).unwrap();
    let set = define_set(&g, &cong.formula, &params).unwrap();
    assert_eq!(set.iter().collect::<Vec<_>>(), vec![g.identity()]);
}

#[test]
fn phi_sim_matches_sigma_sets() {
    let g = psl3(2);
    let sim = phi_sim().unwrap();
    let params = sim.standard_params(&g).unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    let sample: Vec<u32> = (0..20).map(|_| rng.gen_range(0..g.order() as u32)).collect();
    let sigmas: Vec<_> = sample.iter().map(|&x| sigma_set(&g, x).unwrap()).collect();
    let mut agree_true = 0;
    for (i, &a) in sample.iter().enumerate() {
        for (j, &b) in sample.iter().enumerate() {
            let mut asg = params.clone();
            asg.insert("g".into(), a);
            asg.insert("h".into(), b);
            let holds = eval_with(&g, &sim.formula, &asg).unwrap();
            assert_eq!(holds, sigmas[i] == sigmas[j], "pair {a} {b}");
            agree_true += holds as usize;
        }
    }
    assert!(agree_true > 20);
}

#[test]
fn formula_files() {
    let text = "# library\ncomm: all y (x * y = y * x)\n\ntriv:\n  x = E\n  or x = x^-1\n";
    let fs = parse_formula_file(text).unwrap();
    assert_eq!(fs.len(), 2);
    assert_eq!(fs[0].name, "comm");
    assert_eq!(fs[1].formula, parse_open("x = E or x = x^-1").unwrap());
    let bad = "ok: x = E\nbad: x * = E\n";
    let pos = bad.find("= E\n").unwrap();
    let pos = bad[pos + 1..].find('=').unwrap() + pos + 1;
    assert!(matches!(parse_formula_file(bad), Err(Error::Syntax { pos: p, .. }) if p == pos));
    assert!(parse_formula_file("x = E\n").is_err());
}
