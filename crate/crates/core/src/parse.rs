//! Text front end: ring presentations, polynomials and module declarations.
//!
//! ```text
//! ring   := "ring" "F" <prime> "[" ident ("," ident)* "]" "/" "(" [poly ("," poly)*] ")" ["cap" <int>]
//! poly   := ["-"] term (("+"|"-") term)*
//! term   := <int> | [<int> "*"] factor ("*" factor)*
//! factor := ident ["^" <int>]
//! module := "module" ident "=" ("k" | "free" <int> | "coker" "[" row ("," row)* "]")
//! row    := "[" poly ("," poly)* "]"
//! ```
//! `#` starts a comment that runs to the end of the line.

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::poly::{Monomial, Poly};
use crate::ring::RingPresentation;

pub const DEFAULT_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<u64>().map_err(|_| Error::Syntax {
                    line: li + 1,
                    col,
                    msg: format!("integer `{s}` out of range"),
                })?;
                out.push(Token { tok: Tok::Int(v), line: li + 1, col });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: li + 1, col });
            } else if "[](),/+-*^=".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line: li + 1, col });
                i += 1;
            } else {
                return Err(Error::Syntax { line: li + 1, col, msg: format!("unexpected character `{c}`") });
            }
        }
    }
    Ok(out)
}

/// How a module is declared in an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    /// The residue field k = R/m.
    Residue,
    /// A free module of the given rank.
    Free(usize),
    /// Cokernel of a matrix; rows index generators.
    Coker(Vec<Vec<Poly>>),
}

/// A parsed input file: one ring and any number of named modules.
#[derive(Debug, Clone)]
pub struct InputFile {
    pub ring: RingPresentation,
    pub modules: Vec<(String, ModuleSpec)>,
}

impl InputFile {
    pub fn module(&self, name: &str) -> Option<&ModuleSpec> {
        self.modules.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token]) -> Self {
        let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
        Parser { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end);
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.at_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.at_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn expect_int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn ring(&mut self) -> Result<RingPresentation> {
        self.expect_keyword("ring")?;
        self.expect_keyword("F")?;
        let p = self.expect_int()?;
        let field = Fp::new(p).ok_or(Error::NotPrime(p))?;
        self.expect_sym('[')?;
        let mut vars: Vec<String> = Vec::new();
        loop {
            let name = self.expect_ident()?;
            if vars.contains(&name) {
                return Err(Error::DuplicateVariable(name));
            }
            vars.push(name);
            if self.at_sym(',') {
                self.pos += 1;
                continue;
            }
            self.expect_sym(']')?;
            break;
        }
        self.expect_sym('/')?;
        self.expect_sym('(')?;
        let mut relations = Vec::new();
        if !self.at_sym(')') {
            loop {
                relations.push(self.poly(&field, &vars)?);
                if self.at_sym(',') {
                    self.pos += 1;
                    continue;
                }
                break;
            }
        }
        self.expect_sym(')')?;
        let cap = if self.at_keyword("cap") {
            self.pos += 1;
            let c = self.expect_int()?;
            Some(u32::try_from(c).map_err(|_| Error::CapTooSmall { cap: u32::MAX, reason: "cap out of range".into() })?)
        } else {
            None
        };
        RingPresentation::new(p as u32, vars, relations, cap)
    }

    fn poly(&mut self, f: &Fp, vars: &[String]) -> Result<Poly> {
        let mut out = Poly::zero();
        let mut negate = false;
        if self.at_sym('-') {
            self.pos += 1;
            negate = true;
        } else if self.at_sym('+') {
            self.pos += 1;
        }
        loop {
            let (m, c) = self.term(f, vars)?;
            out.add_term(f, m, if negate { f.neg(c) } else { c });
            if self.at_sym('+') {
                self.pos += 1;
                negate = false;
            } else if self.at_sym('-') {
                self.pos += 1;
                negate = true;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self, f: &Fp, vars: &[String]) -> Result<(Monomial, u32)> {
        let mut coeff = 1u32;
        let mut mono = Monomial::one(vars.len());
        if let Some(Tok::Int(v)) = self.peek() {
            coeff = (*v % f.p() as u64) as u32;
            self.pos += 1;
            if !self.at_sym('*') {
                return Ok((mono, coeff));
            }
            self.pos += 1;
        }
        loop {
            let name = self.expect_ident()?;
            let idx = vars.iter().position(|v| *v == name).ok_or(Error::UnknownVariable(name))?;
            let mut e = 1u32;
            if self.at_sym('^') {
                self.pos += 1;
                e = self.expect_int()? as u32;
            }
            mono.0[idx] += e;
            if self.at_sym('*') {
                self.pos += 1;
                // allow a trailing numeric factor such as x*2
                if let Some(Tok::Int(v)) = self.peek() {
                    coeff = f.mul(coeff, (*v % f.p() as u64) as u32);
                    self.pos += 1;
                    if self.at_sym('*') {
                        self.pos += 1;
                        continue;
                    }
                    break;
                }
                continue;
            }
            break;
        }
        Ok((mono, coeff))
    }

    fn module_body(&mut self, f: &Fp, vars: &[String]) -> Result<ModuleSpec> {
        if self.at_keyword("k") {
            self.pos += 1;
            return Ok(ModuleSpec::Residue);
        }
        if self.at_keyword("free") {
            self.pos += 1;
            return Ok(ModuleSpec::Free(self.expect_int()? as usize));
        }
        self.expect_keyword("coker")?;
        self.expect_sym('[')?;
        let mut rows = Vec::new();
        loop {
            self.expect_sym('[')?;
            let mut row = Vec::new();
            loop {
                row.push(self.poly(f, vars)?);
                if self.at_sym(',') {
                    self.pos += 1;
                    continue;
                }
                break;
            }
            self.expect_sym(']')?;
            rows.push(row);
            if self.at_sym(',') {
                self.pos += 1;
                continue;
            }
            break;
        }
        self.expect_sym(']')?;
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Shape("coker rows have different lengths".into()));
        }
        Ok(ModuleSpec::Coker(rows))
    }
}

/// Parses a ring presentation.
pub fn parse_presentation(text: &str) -> Result<RingPresentation> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks);
    let ring = p.ring()?;
    if p.peek().is_some() {
        return p.err("trailing input after ring presentation");
    }
    Ok(ring)
}

/// Parses a single polynomial in the variables of `ring`.
pub fn parse_poly(ring: &RingPresentation, text: &str) -> Result<Poly> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks);
    let f = ring.field();
    let poly = p.poly(&f, &ring.vars)?;
    if p.peek().is_some() {
        return p.err("trailing input after polynomial");
    }
    Ok(poly)
}

/// Parses a module body such as `k`, `free 2` or `coker [[x, y]]`.
pub fn parse_module_spec(ring: &RingPresentation, text: &str) -> Result<ModuleSpec> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks);
    let m = p.module_body(&ring.field(), &ring.vars)?;
    if p.peek().is_some() {
        return p.err("trailing input after module");
    }
    Ok(m)
}

/// Parses a whole input file: a ring followed by `module` declarations.
pub fn parse_input(text: &str) -> Result<InputFile> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks);
    let ring = p.ring()?;
    let f = ring.field();
    let mut modules: Vec<(String, ModuleSpec)> = Vec::new();
    while p.peek().is_some() {
        p.expect_keyword("module")?;
        let name = p.expect_ident()?;
        p.expect_sym('=')?;
        let body = p.module_body(&f, &ring.vars)?;
        if modules.iter().any(|(n, _)| *n == name) {
            return p.err(format!("module `{name}` declared twice"));
        }
        modules.push((name, body));
    }
    let _ = p.next();
    Ok(InputFile { ring, modules })
}
