//! One job = one operation with typed flags. The same definitions back the
//! subcommands and the manifest lines.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use serde_json::{json, Value};

use psllab::error::{Error, Result};
use psllab::folang::{self, Formula};
use psllab::goedel;
use psllab::linalg::Q;
use psllab::matgroup::{self, PSLElem, SLMat};
use psllab::quotientlab::{self, enumerate_psl, FinGroup, SigmaRoute};
use psllab::rings::RingSpec;
use psllab::spectra::{self, SpecSet};

#[derive(Subcommand, Debug, Clone)]
pub enum Op {
    /// Evaluate f(n) = |δ²S| bound.
    #[command(name = "spectra-f", alias = "f_count")]
    SpectraF {
        #[arg(long)]
        n: u64,
    },
    /// Very-regularity of a finite set, optionally reconstructing it from δS.
    #[command(name = "spectra-vr", alias = "very_regular")]
    SpectraVr {
        /// Comma-separated rationals (`1/2,3`) or exponents (`0,1,3`).
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, value_enum, default_value_t = SetKind::Rational)]
        kind: SetKind,
        #[arg(long)]
        reconstruct: bool,
    },
    /// Exhaustive maximum of |δ²S| over n-subsets of exponents in [lo, hi].
    #[command(name = "delta2-max", alias = "max_delta2")]
    Delta2Max {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, allow_hyphen_values = true)]
        hi: i64,
    },
    /// Basis completion of a vector over a Euclidean ring.
    #[command(name = "dedekind-basis", alias = "dedekind_basis")]
    DedekindBasis {
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Comma-separated ring elements.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Ranks of the torus and its translates under the Ad action.
    #[command(name = "torus-span", alias = "torus_span")]
    TorusSpan {
        #[arg(long)]
        n: usize,
    },
    /// Least k with gcl^k meeting E_{1,n}E_{1,n-1} nontrivially, per class.
    #[command(name = "cong-def", alias = "cong_def")]
    CongDef {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 32)]
        kmax: usize,
    },
    /// Σ_{g,p} of a matrix over Z or Z[1/N].
    #[command(name = "sigma-set", alias = "sigma_set")]
    SigmaSet {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        p: u64,
    },
    /// Sampled ~ relation: equal Σ sets at every listed prime.
    #[command(name = "ad-equiv", alias = "ad_equiv")]
    AdEquiv {
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Prime bound used when no primes are listed.
        #[arg(long, default_value_t = 50)]
        bound: u64,
    },
    /// Canonical code of a group element.
    #[command(name = "godel-encode", alias = "godel_encode")]
    GodelEncode {
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Group element (canonical lift) of a code.
    #[command(name = "godel-decode", alias = "godel_decode")]
    GodelDecode {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Transported product of two codes.
    #[command(name = "godel-mul", alias = "godel_mul")]
    GodelMul {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Truth value of a formula in PSL_n(F_q).
    #[command(name = "fo-eval", alias = "fo_eval")]
    FoEval {
        #[command(flatten)]
        fo: FoArgs,
    },
    /// The set defined by a formula with one free variable in PSL_n(F_q).
    #[command(name = "fo-define", alias = "fo_define")]
    FoDefine {
        #[command(flatten)]
        fo: FoArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Rational,
    Exponent,
}

#[derive(clap::Args, Debug, Clone)]
pub struct FoArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    /// Formula text.
    #[arg(long, conflicts_with_all = ["library", "file"])]
    pub formula: Option<String>,
    /// Library formula: phi_upsilon, phi_cong or phi_sim.
    #[arg(long, conflicts_with = "file")]
    pub library: Option<String>,
    /// Formula file of `name: formula` blocks; pick one with --name.
    #[arg(long, requires = "name")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub name: Option<String>,
    /// `NAME=MATRIX` with rows separated by `;`, repeatable.
    #[arg(long = "param", allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// Bind Eps = e_{1,n}(1) and Eps2 = e_{1,n-1}(1) when used.
    #[arg(long)]
    pub standard: bool,
}

/// Result of one operation before it is judged against an expectation.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Scalar summary compared against `expect=<value>`.
    pub value: String,
    /// Built-in verification verdict, if the operation has one.
    pub check: Option<bool>,
    /// Finite analogues and sampled heuristics never fail a suite.
    pub exploratory: bool,
    pub note: Option<String>,
    pub detail: Value,
    /// Human-readable rendering.
    pub text: String,
    pub cache_hits: u32,
}

impl Outcome {
    fn value(value: impl ToString, detail: Value) -> Self {
        let value = value.to_string();
        Outcome { text: value.clone(), value, check: None, exploratory: false, note: None, detail, cache_hits: 0 }
    }

    fn checked(mut self, ok: bool) -> Self {
        self.check = Some(ok);
        self
    }

    fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }

    fn note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

fn ring(s: &str) -> Result<RingSpec> {
    s.parse()
}

/// `1,0,0;0,1,0;0,0,1`
fn matrix_rows(s: &str) -> Vec<Vec<String>> {
    s.split(';').map(|r| r.split(',').map(|e| e.trim().to_string()).collect()).collect()
}

fn psl(s: &str, ring: RingSpec) -> Result<PSLElem> {
    Ok(PSLElem::new(SLMat::from_str_rows(ring, &matrix_rows(s))?))
}

fn matrix_json(m: &SLMat) -> Value {
    json!(m.rows_as_strings())
}

fn fin_matrix_json(g: &FinGroup, i: u32) -> Value {
    json!(g.matrix(i).chunks(g.n()).collect::<Vec<_>>())
}

fn fin_matrix_text(g: &FinGroup, i: u32) -> String {
    g.matrix(i)
        .chunks(g.n())
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn spec_set(s: &str, kind: SetKind) -> Result<SpecSet> {
    let items = s.split(',').map(str::trim).filter(|t| !t.is_empty());
    match kind {
        SetKind::Rational => SpecSet::from_rationals(
            items
                .map(|t| {
                    t.parse::<Q>().map_err(|e| Error::Parse { what: "rational", input: t.into(), reason: e.to_string() })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        SetKind::Exponent => Ok(SpecSet::from_exponents(
            items
                .map(|t| t.parse::<i64>().map_err(|e| Error::Parse { what: "exponent", input: t.into(), reason: e.to_string() }))
                .collect::<Result<Vec<_>>>()?,
        )),
    }
}

pub fn run(op: &Op) -> Result<Outcome> {
    match op {
        Op::SpectraF { n } => {
            let f = spectra::f_count(*n)?;
            Ok(Outcome::value(&f, json!({ "n": n, "f": f.to_string() })))
        }
        Op::SpectraVr { set, kind, reconstruct } => {
            let s = spec_set(set, *kind)?;
            let vr = spectra::is_very_regular(&s)?;
            let d = spectra::delta_set(&s)?;
            let d2 = spectra::delta2_set(&s)?;
            let f = spectra::f_count(s.len() as u64)?;
            let mut detail = json!({
                "set": s.sorted_strings(),
                "very_regular": vr,
                "delta_size": d.len(),
                "delta2_size": d2.len(),
                "f": f.to_string(),
            });
            let mut text = format!("very regular: {vr}\n|δS| = {}\n|δ²S| = {} (f = {f})", d.len(), d2.len());
            if *reconstruct && !vr {
                text.push_str("\nreconstruction skipped: δS is only invertible for very regular sets");
            } else if *reconstruct {
                let r = spectra::reconstruct_from_delta(&d, s.len())?;
                let exact = r.normalized() == s.normalized();
                let oriented = r.oriented() == s.oriented();
                detail["reconstructed"] = json!(r.sorted_strings());
                detail["matches_up_to_scalar"] = json!(exact);
                detail["matches_up_to_scalar_and_inversion"] = json!(oriented);
                text.push_str(&format!(
                    "\nreconstructed: {r}\nmatches up to scalar: {exact}\nmatches up to scalar and inversion: {oriented}"
                ));
            }
            Ok(Outcome::value(vr, detail).text(text))
        }
        Op::Delta2Max { n, lo, hi } => {
            let r = spectra::max_delta2_search(*n, *lo, *hi)?;
            let detail = json!({
                "n": r.n, "lo": r.lo, "hi": r.hi, "max": r.max, "witness": r.witness,
                "bound": r.bound, "subsets": r.subsets, "bound_holds": r.bound_holds(),
            });
            let text = format!(
                "max |δ²S| = {} over {} subsets (bound f({}) = {}), witness {:?}",
                r.max, r.subsets, r.n, r.bound, r.witness
            );
            Ok(Outcome::value(r.max, detail).text(text).checked(r.bound_holds()))
        }
        Op::DedekindBasis { ring: rs, a } => {
            let r = ring(rs)?;
            let v = a.split(',').map(|t| r.parse_elem(t.trim())).collect::<Result<Vec<_>>>()?;
            let b = matgroup::dedekind_basis(r, &v, v.len())?;
            let rows: Vec<Vec<String>> = b.rows.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
            let detail = json!({
                "rows": rows,
                "coeffs": [b.coeffs.0.to_string(), b.coeffs.1.to_string()],
                "det": b.det.to_string(),
            });
            let mut text: String = rows.iter().map(|r| format!("{}\n", r.join(" "))).collect();
            text.push_str(&format!("a = ({})·a_1 + ({})·a_2, det = {}", b.coeffs.0, b.coeffs.1, b.det));
            Ok(Outcome::value(&b.det, detail).text(text).checked(b.det.is_unit()))
        }
        Op::TorusSpan { n } => {
            let r = matgroup::torus_span_report(*n)?;
            let want = (n * n, 2 * n - 1, 2 * n - 1);
            let got = (r.rank_total, r.rank_t_alpha1, r.rank_t_alpha2);
            let detail = json!({
                "n": n, "rank_torus": r.rank_torus, "rank_t_alpha1": r.rank_t_alpha1,
                "rank_t_alpha2": r.rank_t_alpha2, "rank_total": r.rank_total,
            });
            let text = format!(
                "rank T = {}, rank T+αT (α₁) = {}, (α₂) = {}, total = {}",
                r.rank_torus, r.rank_t_alpha1, r.rank_t_alpha2, r.rank_total
            );
            Ok(Outcome::value(format!("{},{},{}", got.0, got.1, got.2), detail).text(text).checked(got == want))
        }
        Op::CongDef { n, q, kmax } => {
            let g = enumerate_psl(*n, *q)?;
            let r = quotientlab::check_cong_def(&g, *kmax)?;
            let rows: Vec<Value> = r
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "representative": fin_matrix_text(&g, c.representative),
                        "class_size": c.class_size,
                        "min_k": c.min_k,
                    })
                })
                .collect();
            let mut text = format!("PSL_{n}(F_{q}), kmax = {kmax}\nrepresentative  size  min_k  status\n");
            for c in &r.classes {
                let k = c.min_k.map_or("-".to_string(), |k| k.to_string());
                let st = if c.min_k.is_some() { "pass" } else { "FAIL" };
                text.push_str(&format!("{}  {}  {}  {}\n", fin_matrix_text(&g, c.representative), c.class_size, k, st));
            }
            text.push_str(&format!("all pass: {}", r.all_pass()));
            let detail = json!({ "n": n, "q": q, "kmax": kmax, "order": g.order(), "classes": rows, "all_pass": r.all_pass() });
            let mut out = Outcome::value(r.all_pass(), detail).text(text).checked(r.all_pass()).note("finite analogue");
            out.exploratory = true;
            out.cache_hits = g.cache_hit() as u32;
            Ok(out)
        }
        Op::SigmaSet { g, ring: rs, p } => {
            let e = psl(g, ring(rs)?)?;
            let s = quotientlab::sigma_for_prime(&e, *p, SigmaRoute::default())?;
            let items: Vec<u64> = s.into_iter().collect();
            let value = items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            let text = format!("{{{value}}}");
            Ok(Outcome::value(value, json!({ "p": p, "sigma": items })).text(text).note("finite quotient"))
        }
        Op::AdEquiv { g, h, ring: rs, primes, bound } => {
            let r = ring(rs)?;
            let (g, h) = (psl(g, r)?, psl(h, r)?);
            let primes = if primes.is_empty() { quotientlab::default_primes(&[&g, &h], *bound) } else { primes.clone() };
            let sep = quotientlab::ad_separating_prime(&g, &h, &primes, SigmaRoute::default())?;
            let equiv = sep.is_none();
            let detail = json!({ "primes": primes, "equivalent": equiv, "separating_prime": sep });
            let text = match sep {
                Some(p) => format!("separated at p = {p}"),
                None => format!("equal Σ at all {} primes", primes.len()),
            };
            Ok(Outcome::value(equiv, detail).text(text).note("sampled over finitely many primes"))
        }
        Op::GodelEncode { g, ring: rs } => {
            let r = ring(rs)?;
            let e = psl(g, r)?;
            let code = goedel::canonical_code(&e, e.dim(), r)?;
            Ok(Outcome::value(&code, json!({ "code": code.to_string(), "d": e.dim(), "ring": r.to_string() })))
        }
        Op::GodelDecode { z, d, ring: rs } => {
            let r = ring(rs)?;
            let code = goedel::parse_code(z)?;
            let e = goedel::decode_group(&code, *d, r)?;
            let m = e.lift();
            let rows = m.rows_as_strings();
            let value = rows.iter().map(|r| r.join(",")).collect::<Vec<_>>().join(";");
            let text = rows.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("\n");
            Ok(Outcome::value(value, json!({ "matrix": matrix_json(m), "canonical": goedel::is_canonical(&code, *d, r)? })).text(text))
        }
        Op::GodelMul { z, w, d, ring: rs } => {
            let r = ring(rs)?;
            let c = goedel::transported_mul(&goedel::parse_code(z)?, &goedel::parse_code(w)?, *d, r)?;
            Ok(Outcome::value(&c, json!({ "code": c.to_string() })))
        }
        Op::FoEval { fo } => {
            let (g, f, asg) = fo_setup(fo)?;
            let holds = folang::eval_with(&g, &f, &asg)?;
            let mut out = Outcome::value(holds, json!({ "n": fo.n, "q": fo.q, "formula": f.to_string(), "holds": holds }))
                .note("evaluated in a finite quotient");
            out.cache_hits = g.cache_hit() as u32;
            Ok(out)
        }
        Op::FoDefine { fo } => {
            let (g, f, asg) = fo_setup(fo)?;
            let set = folang::define_set(&g, &f, &asg)?;
            let elems: Vec<Value> = set.iter().map(|i| fin_matrix_json(&g, i)).collect();
            let text = set.iter().map(|i| fin_matrix_text(&g, i)).collect::<Vec<_>>().join("\n");
            let text = format!("{} of {} elements\n{text}", set.len(), g.order());
            let mut out = Outcome::value(set.len(), json!({ "n": fo.n, "q": fo.q, "order": g.order(), "elements": elems }))
                .text(text)
                .note("evaluated in a finite quotient");
            out.cache_hits = g.cache_hit() as u32;
            Ok(out)
        }
    }
}

fn fo_setup(fo: &FoArgs) -> Result<(FinGroup, Formula, HashMap<String, u32>)> {
    let g = enumerate_psl(fo.n, fo.q)?;
    let formula = if let Some(text) = &fo.formula {
        folang::parse_open(text)?
    } else if let Some(name) = &fo.library {
        folang::formula_library()?
            .into_iter()
            .find(|lf| lf.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no library formula `{name}`")))?
            .formula
    } else if let Some(path) = &fo.file {
        let name = fo.name.as_deref().unwrap_or_default();
        folang::parse_formula_file(&std::fs::read_to_string(path)?)?
            .into_iter()
            .find(|nf| nf.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no formula `{name}` in {}", path.display())))?
            .formula
    } else {
        return Err(Error::InvalidArgument("one of --formula, --library, --file is required".into()));
    };
    let mut asg = HashMap::new();
    if fo.standard {
        for (name, j) in [("Eps", fo.n), ("Eps2", fo.n - 1)] {
            asg.insert(name.to_string(), g.elem(1, j, 1)?);
        }
    }
    for p in &fo.params {
        let (name, m) = p
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected NAME=MATRIX, got `{p}`")))?;
        let entries = matrix_rows(m)
            .into_iter()
            .flatten()
            .map(|e| e.parse::<i64>().map_err(|err| Error::Parse { what: "matrix entry", input: e.clone(), reason: err.to_string() }))
            .collect::<Result<Vec<_>>>()?;
        let i = g
            .index_of_matrix(&entries)
            .ok_or_else(|| Error::InvalidArgument(format!("`{m}` is not an element of PSL_{}(F_{})", fo.n, fo.q)))?;
        asg.insert(name.to_string(), i);
    }
    Ok((g, formula, asg))
}
