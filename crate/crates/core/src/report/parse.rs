use serde::Serialize;

use crate::error::{Error, Result};
use crate::foliation::FoliationGerm;
use crate::numeric::{BiPoly, FieldElement};

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldTag {
    Rational,
    Gaussian,
}

/// A parsed input: the vector field `P d/dx + Q d/dy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    pub p: BiPoly,
    pub q: BiPoly,
    pub field: FieldTag,
}

impl InputSpec {
    pub fn new(p: BiPoly, q: BiPoly) -> Self {
        let real = p.conj() == p && q.conj() == q;
        InputSpec {
            p,
            q,
            field: if real { FieldTag::Rational } else { FieldTag::Gaussian },
        }
    }

    /// Text in the input syntax.
    pub fn to_text(&self) -> String {
        format!("P = {}; Q = {};", self.p, self.q)
    }

    /// The germ, with a unit common factor removed; a common factor through
    /// the origin is rejected.
    pub fn germ(&self) -> Result<FoliationGerm> {
        FoliationGerm::new(self.p.clone(), self.q.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(char),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<(Vec<Token>, (usize, usize))> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&d| d != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while let Some(&d) = chars.peek() {
                let Some(dv) = d.to_digit(10) else { break };
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(dv as u64))
                    .ok_or_else(|| syntax(l, k, "integer literal too large"))?;
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Num(v), line: l, col: k });
            continue;
        }
        chars.next();
        col += 1;
        let tok = match c {
            'x' | 'y' | 'i' | 'P' | 'Q' => Tok::Ident(c),
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | '=' | ';' => Tok::Sym(c),
            '\u{2212}' => Tok::Sym('-'),
            _ => return Err(syntax(l, k, format!("unexpected character '{c}'"))),
        };
        out.push(Token { tok, line: l, col: k });
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let inv = constant_of(&d)
                        .and_then(|c| c.inv())
                        .ok_or_else(|| syntax(at.0, at.1, "division by a non-constant or zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Sym('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Sym('^')) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Num(e)) if *e <= MAX_EXPONENT as u64 => {
                let e = *e as usize;
                self.pos += 1;
                Ok(base.pow(e))
            }
            Some(Tok::Num(_)) => Err(self.error(format!("exponent above {MAX_EXPONENT}"))),
            _ => Err(self.error("expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<BiPoly> {
        let t = self.peek().cloned();
        match t {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let n = i64::try_from(v).map_err(|_| self.error("integer literal too large"))?;
                Ok(BiPoly::constant(FieldElement::from_int(n)))
            }
            Some(Tok::Ident('x')) => {
                self.pos += 1;
                Ok(BiPoly::x())
            }
            Some(Tok::Ident('y')) => {
                self.pos += 1;
                Ok(BiPoly::y())
            }
            Some(Tok::Ident('i')) => {
                self.pos += 1;
                Ok(BiPoly::constant(FieldElement::i()))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => Err(self.error("expected a number, x, y, i or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn constant_of(p: &BiPoly) -> Option<FieldElement> {
    if p.is_zero() {
        return Some(FieldElement::from_int(0));
    }
    p.is_constant().then(|| p.value_at_origin())
}

/// Parses `P = <expr>; Q = <expr>;` (either order, each exactly once).
pub fn parse_input(text: &str) -> Result<InputSpec> {
    let (toks, end) = lex(text)?;
    let mut ps = Parser { toks, pos: 0, end };
    let (mut p, mut q) = (None, None);
    while ps.peek().is_some() {
        let name = match ps.peek() {
            Some(Tok::Ident(c @ ('P' | 'Q'))) => *c,
            _ => return Err(ps.error("expected 'P' or 'Q'")),
        };
        let slot = if name == 'P' { &mut p } else { &mut q };
        if slot.is_some() {
            return Err(ps.error(format!("{name} given twice")));
        }
        ps.pos += 1;
        ps.expect('=')?;
        let e = ps.expr()?;
        ps.expect(';')?;
        *(if name == 'P' { &mut p } else { &mut q }) = Some(e);
    }
    match (p, q) {
        (Some(p), Some(q)) => Ok(InputSpec::new(p, q)),
        (None, _) => Err(syntax(end.0, end.1, "missing 'P = ...;'")),
        (_, None) => Err(syntax(end.0, end.1, "missing 'Q = ...;'")),
    }
}
