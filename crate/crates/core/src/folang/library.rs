use super::{parse_open, Assignment, Formula};
use crate::error::Result;
use crate::quotientlab::FinGroup;

/// Levels of the doubling tree in [`phi_cong`]; it multiplies
/// `2^CONG_DEPTH = 32` conjugates.
pub const CONG_DEPTH: usize = 5;

#[derive(Clone, Debug)]
pub struct LibraryFormula {
    pub name: &'static str,
    pub text: String,
    pub formula: Formula,
    pub free: Vec<String>,
    pub params: Vec<String>,
    /// What the parameters must be bound to.
    pub slots: &'static str,
}

impl LibraryFormula {
    fn new(name: &'static str, text: String, slots: &'static str) -> Result<Self> {
        let formula = parse_open(&text)?;
        Ok(LibraryFormula {
            name,
            free: formula.free_vars(),
            params: formula.params(),
            text,
            formula,
            slots,
        })
    }

    /// Standard parameter values in `PSL_n(F_q)`: `Eps = e_{1,n}(1)` and
    /// `Eps2 = e_{1,n-1}(1)`, restricted to the parameters used.
    pub fn standard_params(&self, g: &FinGroup) -> Result<Assignment> {
        let mut a = Assignment::new();
        for p in &self.params {
            let v = match p.as_str() {
                "Eps" => g.elem(1, g.n(), 1)?,
                "Eps2" => g.elem(1, g.n() - 1, 1)?,
                _ => continue,
            };
            a.insert(p.clone(), v);
        }
        Ok(a)
    }
}

/// `var` lies in the center of the centralizer of `param`.
fn in_zcent(var: &str, param: &str, aux: &str) -> String {
    format!(
        "({var} * {param} = {param} * {var} and all {aux} ({aux} * {param} = {param} * {aux} -> {var} * {aux} = {aux} * {var}))"
    )
}

/// `x` in `Z(C(Eps))`.
pub fn phi_upsilon() -> Result<LibraryFormula> {
    LibraryFormula::new("phi_upsilon", in_zcent("x", "Eps", "v"), "Eps = e_{1,n}(1)")
}

/// `z{m}` is a product of `2^m` conjugates of `x` or `x^-1`.
fn conj_product(m: usize) -> String {
    if m == 0 {
        return "exists y (z0 = y * x * y^-1 or z0 = y * x^-1 * y^-1)".into();
    }
    let inner = conj_product(m - 1);
    let (a, z, w) = (format!("a{m}"), format!("z{m}"), format!("z{}", m - 1));
    format!("exists {a} (exists {w} ({w} = {a} and {inner}) and exists {w} ({w} = {a}^-1 * {z} and {inner}))")
}

/// Finite analogue of congruence-kernel membership: every element of
/// `gcl(x)^32` lying in `E_{1,n} E_{1,n-1}` is trivial. The two factors
/// are defined as `Z(C(Eps))` and `Z(C(Eps2))`.
pub fn phi_cong() -> Result<LibraryFormula> {
    let z = format!("z{CONG_DEPTH}");
    let ebar = format!(
        "exists b1 ({} and exists b2 (b2 = b1^-1 * {z} and {}))",
        in_zcent("b1", "Eps", "v"),
        in_zcent("b2", "Eps2", "v")
    );
    let text = format!("all {z} (({ebar} and {}) -> {z} = E)", conj_product(CONG_DEPTH));
    LibraryFormula::new("phi_cong", text, "Eps = e_{1,n}(1), Eps2 = e_{1,n-1}(1)")
}

/// Finite analogue of the `~` relation: the conjugates of `g` and of `h`
/// produce the same commutators with `Eps` inside `Z(C(Eps))`.
pub fn phi_sim() -> Result<LibraryFormula> {
    let comm = |t: &str| format!("exists y ((y^-1 * {t} * y) * Eps * (y^-1 * {t} * y)^-1 * Eps^-1 = w)");
    let text = format!(
        "all w ({} -> (({} -> {}) and ({} -> {})))",
        in_zcent("w", "Eps", "v"),
        comm("g"),
        comm("h"),
        comm("h"),
        comm("g")
    );
    LibraryFormula::new("phi_sim", text, "Eps = e_{1,n}(1)")
}

pub fn formula_library() -> Result<Vec<LibraryFormula>> {
    Ok(vec![phi_upsilon()?, phi_cong()?, phi_sim()?])
}
