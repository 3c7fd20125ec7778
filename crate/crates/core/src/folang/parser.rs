use super::{Formula, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Param(String),
    Identity,
    All,
    Exists,
    Not,
    And,
    Or,
    Arrow,
    Star,
    InvMark,
    Eq,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Var(v) | Tok::Param(v) => format!("`{v}`"),
        Tok::Identity => "`E`".into(),
        Tok::All => "`all`".into(),
        Tok::Exists => "`exists`".into(),
        Tok::Not => "`not`".into(),
        Tok::And => "`and`".into(),
        Tok::Or => "`or`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Star => "`*`".into(),
        Tok::InvMark => "`^-1`".into(),
        Tok::Eq => "`=`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'*' => Tok::Star,
            b'=' => Tok::Eq,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'^' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'1') => {
                i += 2;
                Tok::InvMark
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                let word = &text[start..=i];
                match word {
                    "all" => Tok::All,
                    "exists" => Tok::Exists,
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "E" => Tok::Identity,
                    w if c.is_ascii_uppercase() => Tok::Param(w.to_string()),
                    w => Tok::Var(w.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character {ch:?}") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

type PResult<T> = std::result::Result<T, Error>;

fn err_pos(e: &Error) -> usize {
    match e {
        Error::Syntax { pos, .. } | Error::UnboundVariable { pos, .. } => *pos,
        _ => 0,
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    bound: Vec<String>,
    /// `None` admits any free variable.
    allowed_free: Option<&'a [&'a str]>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {}, found {}", describe(&t), describe(self.peek())))
        }
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            q @ (Tok::All | Tok::Exists) => {
                self.bump();
                let Tok::Var(v) = self.peek().clone() else {
                    return self.fail(format!("expected a variable after quantifier, found {}", describe(self.peek())));
                };
                self.bump();
                self.bound.push(v.clone());
                let body = self.unary();
                self.bound.pop();
                let body = body?;
                Ok(if q == Tok::All { Formula::all(&v, body) } else { Formula::exists(&v, body) })
            }
            Tok::LParen => {
                // A parenthesis opens either a formula or a term; try the
                // formula reading first and fall back.
                let save = self.at;
                self.bump();
                let first = self.implication().and_then(|f| self.expect(Tok::RParen).map(|_| f));
                match first {
                    Ok(f) => Ok(f),
                    Err(e1) => {
                        self.at = save;
                        match self.equation() {
                            Ok(f) => Ok(f),
                            Err(e2) => Err(if err_pos(&e1) > err_pos(&e2) { e1 } else { e2 }),
                        }
                    }
                }
            }
            _ => self.equation(),
        }
    }

    fn equation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        self.expect(Tok::Eq)?;
        let rhs = self.term()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            t = Term::mul(t, self.factor()?);
        }
        Ok(t)
    }

    fn factor(&mut self) -> PResult<Term> {
        let mut t = self.primary()?;
        while *self.peek() == Tok::InvMark {
            self.bump();
            t = Term::inv(t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Var(v) => {
                let ok = self.bound.contains(&v)
                    || self.allowed_free.is_none_or(|a| a.contains(&v.as_str()));
                if !ok {
                    return Err(Error::UnboundVariable { name: v, pos });
                }
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Param(p) => {
                self.bump();
                Ok(Term::Param(p))
            }
            Tok::Identity => {
                self.bump();
                Ok(Term::Identity)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            t => self.fail(format!("expected a term, found {}", describe(&t))),
        }
    }
}

fn run(text: &str, allowed_free: Option<&[&str]>) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, at: 0, bound: Vec::new(), allowed_free };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return p.fail(format!("unexpected {}", describe(p.peek())));
    }
    Ok(f)
}

/// Parses a sentence: every variable must be bound.
pub fn parse(text: &str) -> Result<Formula> {
    run(text, Some(&[]))
}

/// Parses a formula whose free variables are among `free`.
pub fn parse_with_free(text: &str, free: &[&str]) -> Result<Formula> {
    run(text, Some(free))
}

/// Parses a formula with any free variables; see [`Formula::free_vars`].
pub fn parse_open(text: &str) -> Result<Formula> {
    run(text, None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Formula,
}

/// Reads `name: formula` blocks. A block runs until the next line that
/// starts a new `name:` header; blank lines and `#` comments are skipped.
/// Syntax positions are byte offsets into the whole file.
pub fn parse_formula_file(text: &str) -> Result<Vec<NamedFormula>> {
    let mut blocks: Vec<(String, usize, String)> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        let header = (!line.starts_with(char::is_whitespace))
            .then(|| line.split_once(':'))
            .flatten()
            .filter(|(name, _)| {
                let name = name.trim();
                !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            });
        if trimmed.is_empty() || trimmed.starts_with('#') {
            // keep byte offsets aligned inside the current block
            if let Some(last) = blocks.last_mut() {
                last.2.extend(line.bytes().map(|b| if b == b'\n' { '\n' } else { ' ' }));
            }
        } else if let Some((name, body)) = header {
            let body_start = offset + name.len() + 1;
            blocks.push((name.trim().to_string(), body_start, body.to_string()));
        } else if let Some(last) = blocks.last_mut() {
            last.2.push_str(line);
        } else {
            return Err(Error::Syntax { pos: offset, msg: "expected `name: formula`".into() });
        }
        offset += line.len();
    }
    blocks
        .into_iter()
        .map(|(name, start, body)| {
            let formula = parse_open(&body).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax { pos: pos + start, msg },
                e => e,
            })?;
            Ok(NamedFormula { name, formula })
        })
        .collect()
}
