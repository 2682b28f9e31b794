//! First-order formulas in the group language (multiplication, inversion,
//! identity), with an s-expression serialization.
//!
//! Terms and formulas are kept lightly normalized: products are flattened,
//! identity factors dropped, and `pow` with exponent 0 or 1 simplified, so
//! that emission and parsing round-trip structurally.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Identity,
    Var(String),
    Prod(Vec<Term>),
    Inv(Box<Term>),
    Pow(Box<Term>, u64),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    /// Flattening product constructor; drops identity factors.
    pub fn prod(factors: Vec<Term>) -> Term {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Term::Identity => {}
                Term::Prod(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Term::Identity,
            1 => flat.pop().unwrap(),
            _ => Term::Prod(flat),
        }
    }

    pub fn inv(t: Term) -> Term {
        match t {
            Term::Identity => Term::Identity,
            other => Term::Inv(Box::new(other)),
        }
    }

    /// Power with a nonnegative exponent after normalization; negative
    /// exponents fold into an inversion.
    pub fn pow_signed(t: Term, e: i64) -> Term {
        if e < 0 {
            Term::pow(Term::inv(t), e.unsigned_abs())
        } else {
            Term::pow(t, e as u64)
        }
    }

    pub fn pow(t: Term, e: u64) -> Term {
        match e {
            0 => Term::Identity,
            1 => t,
            _ => Term::Pow(Box::new(t), e),
        }
    }

    /// A conjugate `g^-1 t g`, flattened.
    pub fn conjugate(t: Term, g: Term) -> Term {
        Term::prod(vec![Term::inv(g.clone()), t, g])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn neq(lhs: Term, rhs: Term) -> Formula {
        Formula::Not(Box::new(Formula::Eq(lhs, rhs)))
    }

    /// Conjunction; a single conjunct collapses to itself.
    pub fn and(mut fs: Vec<Formula>) -> Formula {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::And(fs)
        }
    }

    pub fn or(mut fs: Vec<Formula>) -> Formula {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::Or(fs)
        }
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }
}

fn emit_term(t: &Term, out: &mut String) {
    match t {
        Term::Identity => out.push('1'),
        Term::Var(v) => out.push_str(v),
        Term::Prod(fs) => {
            out.push_str("(*");
            for f in fs {
                out.push(' ');
                emit_term(f, out);
            }
            out.push(')');
        }
        Term::Inv(t) => {
            out.push_str("(inv ");
            emit_term(t, out);
            out.push(')');
        }
        Term::Pow(t, e) => {
            out.push_str("(pow ");
            emit_term(t, out);
            let _ = write!(out, " {e}");
            out.push(')');
        }
    }
}

/// Serialize to the normative s-expression grammar.
pub fn emit_sexpr(f: &Formula) -> String {
    let mut out = String::new();
    emit_formula(f, &mut out);
    out
}

fn emit_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Eq(a, b) => {
            out.push_str("(= ");
            emit_term(a, out);
            out.push(' ');
            emit_term(b, out);
            out.push(')');
        }
        Formula::Not(inner) => {
            out.push_str("(not ");
            emit_formula(inner, out);
            out.push(')');
        }
        Formula::And(fs) | Formula::Or(fs) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for inner in fs {
                out.push(' ');
                emit_formula(inner, out);
            }
            out.push(')');
        }
        Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
            out.push_str(if matches!(f, Formula::Exists(..)) { "(exists (" } else { "(forall (" });
            out.push_str(&vars.join(" "));
            out.push_str(") ");
            emit_formula(body, out);
            out.push(')');
        }
    }
}

/// Human-readable rendering; not parsed back.
pub fn emit_pretty(f: &Formula) -> String {
    fn term(t: &Term) -> String {
        match t {
            Term::Identity => "1".into(),
            Term::Var(v) => v.clone(),
            Term::Prod(fs) => fs.iter().map(term).collect::<Vec<_>>().join(" "),
            Term::Inv(t) => format!("({})^-1", term(t)),
            Term::Pow(t, e) => match &**t {
                Term::Var(v) => format!("{v}^{e}"),
                other => format!("({})^{e}", term(other)),
            },
        }
    }
    fn go(f: &Formula, out: &mut String) {
        match f {
            Formula::Eq(a, b) => {
                let _ = write!(out, "{} = {}", term(a), term(b));
            }
            Formula::Not(inner) => {
                if let Formula::Eq(a, b) = &**inner {
                    let _ = write!(out, "{} != {}", term(a), term(b));
                } else {
                    out.push_str("not (");
                    go(inner, out);
                    out.push(')');
                }
            }
            Formula::And(fs) => {
                for (i, inner) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push_str("\n  and ");
                    }
                    go(inner, out);
                }
            }
            Formula::Or(fs) => {
                for (i, inner) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" or ");
                    }
                    go(inner, out);
                }
            }
            Formula::Exists(vars, body) => {
                let _ = write!(out, "exists {}.\n", vars.join(" "));
                go(body, out);
            }
            Formula::Forall(vars, body) => {
                let _ = write!(out, "forall {}.\n", vars.join(" "));
                go(body, out);
            }
        }
    }
    let mut out = String::new();
    go(f, &mut out);
    out
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    LParen,
    RParen,
    Atom(&'a str),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<(usize, Token<'a>)> {
        let saved = self.pos;
        let t = self.next_token();
        self.pos = saved;
        t
    }

    fn next_token(&mut self) -> Option<(usize, Token<'a>)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let mut chars = rest.chars();
        match chars.next()? {
            '(' => {
                self.pos += 1;
                Some((start, Token::LParen))
            }
            ')' => {
                self.pos += 1;
                Some((start, Token::RParen))
            }
            _ => {
                let end = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                self.pos = start + end;
                Some((start, Token::Atom(&rest[..end])))
            }
        }
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse { offset, message: message.into() }
    }

    fn expect(&mut self, want: Token<'_>) -> Result<usize> {
        match self.next_token() {
            Some((off, got)) if got == want => Ok(off),
            Some((off, got)) => Err(self.err(off, format!("expected {want:?}, found {got:?}"))),
            None => Err(self.err(self.text.len(), "unexpected end of input")),
        }
    }
}

fn is_valid_var(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse the s-expression formula grammar; inverse of `emit_sexpr`.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut lex = Lexer::new(text);
    let f = parse_formula_inner(&mut lex)?;
    lex.skip_ws();
    if lex.pos != text.len() {
        return Err(Error::Parse { offset: lex.pos, message: "trailing input".into() });
    }
    Ok(f)
}

fn parse_formula_inner(lex: &mut Lexer<'_>) -> Result<Formula> {
    lex.expect(Token::LParen)?;
    let (off, head) = lex
        .next_token()
        .ok_or_else(|| lex.err(lex.text.len(), "unexpected end of input"))?;
    let head = match head {
        Token::Atom(a) => a,
        other => return Err(lex.err(off, format!("expected operator, found {other:?}"))),
    };
    let f = match head {
        "=" => {
            let lhs = parse_term(lex)?;
            let rhs = parse_term(lex)?;
            Formula::Eq(lhs, rhs)
        }
        "not" => Formula::Not(Box::new(parse_formula_inner(lex)?)),
        "and" | "or" => {
            let mut fs = vec![parse_formula_inner(lex)?];
            while matches!(lex.peek(), Some((_, Token::LParen))) {
                fs.push(parse_formula_inner(lex)?);
            }
            if head == "and" {
                Formula::and(fs)
            } else {
                Formula::or(fs)
            }
        }
        "exists" | "forall" => {
            lex.expect(Token::LParen)?;
            let mut vars = Vec::new();
            loop {
                match lex.next_token() {
                    Some((_, Token::RParen)) => break,
                    Some((off, Token::Atom(v))) => {
                        if !is_valid_var(v) {
                            return Err(lex.err(off, format!("invalid variable `{v}`")));
                        }
                        vars.push(v.to_string());
                    }
                    Some((off, t)) => {
                        return Err(lex.err(off, format!("expected variable, found {t:?}")))
                    }
                    None => return Err(lex.err(lex.text.len(), "unexpected end of input")),
                }
            }
            if vars.is_empty() {
                return Err(lex.err(off, "quantifier with no variables"));
            }
            let body = parse_formula_inner(lex)?;
            if head == "exists" {
                Formula::Exists(vars, Box::new(body))
            } else {
                Formula::Forall(vars, Box::new(body))
            }
        }
        other => return Err(lex.err(off, format!("unknown operator `{other}`"))),
    };
    lex.expect(Token::RParen)?;
    Ok(f)
}

fn parse_term(lex: &mut Lexer<'_>) -> Result<Term> {
    match lex.next_token() {
        Some((_, Token::Atom("1"))) => Ok(Term::Identity),
        Some((off, Token::Atom(a))) => {
            if is_valid_var(a) {
                Ok(Term::var(a))
            } else {
                Err(lex.err(off, format!("invalid term `{a}`")))
            }
        }
        Some((off, Token::LParen)) => {
            let (hoff, head) = lex
                .next_token()
                .ok_or_else(|| lex.err(lex.text.len(), "unexpected end of input"))?;
            let head = match head {
                Token::Atom(a) => a,
                other => return Err(lex.err(hoff, format!("expected operator, found {other:?}"))),
            };
            let t = match head {
                "*" => {
                    let mut factors = vec![parse_term(lex)?, parse_term(lex)?];
                    while !matches!(lex.peek(), Some((_, Token::RParen))) {
                        factors.push(parse_term(lex)?);
                    }
                    Term::prod(factors)
                }
                "inv" => Term::inv(parse_term(lex)?),
                "pow" => {
                    let base = parse_term(lex)?;
                    match lex.next_token() {
                        Some((eoff, Token::Atom(a))) => {
                            let e: i64 = a
                                .parse()
                                .map_err(|_| lex.err(eoff, format!("invalid exponent `{a}`")))?;
                            Term::pow_signed(base, e)
                        }
                        Some((eoff, t)) => {
                            return Err(lex.err(eoff, format!("expected exponent, found {t:?}")))
                        }
                        None => return Err(lex.err(lex.text.len(), "unexpected end of input")),
                    }
                }
                other => return Err(lex.err(off, format!("unknown term operator `{other}`"))),
            };
            lex.expect(Token::RParen)?;
            Ok(t)
        }
        Some((off, Token::RParen)) => Err(lex.err(off, "unexpected `)`")),
        None => Err(lex.err(lex.text.len(), "unexpected end of input")),
    }
}
