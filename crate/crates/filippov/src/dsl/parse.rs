//! Grammar for piecewise field descriptions.
//!
//! ```text
//! file   := stmt (";" stmt)* [";"]
//! stmt   := "on" interval ":" expr
//!         | "at" NUMBER ":" NUMBER
//!         | "dense" "on" interval ":" "{" NUMBER "," NUMBER "}" "measure" name
//! interval := ("[" | "(") bound "," bound (")" | "]")
//! bound  := ["-"] NUMBER | "-inf" | "inf"
//! ```
//!
//! Expressions use `+ - * / ^`, the functions `abs sign log exp sqrt` and the
//! two-argument `min max`, the variable `x`, and parentheses. `^` is
//! right-associative and binds tighter than unary minus.

use super::expr::Expr;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl RawInterval {
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn overlaps(&self, o: &RawInterval) -> bool {
        let (a, b) = if self.lo <= o.lo { (self, o) } else { (o, self) };
        if a.hi > b.lo {
            return true;
        }
        a.hi == b.lo && a.hi_closed && b.lo_closed
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

impl fmt::Display for RawInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.lo_closed { '[' } else { '(' })?;
        write_bound(f, self.lo)?;
        write!(f, ", ")?;
        write_bound(f, self.hi)?;
        write!(f, "{}", if self.hi_closed { ']' } else { ')' })
    }
}

fn write_bound(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v == f64::NEG_INFINITY {
        write!(f, "-inf")
    } else if v == f64::INFINITY {
        write!(f, "inf")
    } else {
        write!(f, "{v}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub interval: RawInterval,
    pub expr: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointOverride {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleName {
    BuiltinFatCantor,
    Named(String),
}

impl fmt::Display for OracleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleName::BuiltinFatCantor => write!(f, "builtin-fat-cantor"),
            OracleName::Named(n) => write!(f, "{n}"),
        }
    }
}

/// A region where the field takes two values split along a measurable set
/// that is dense together with its complement; the split is resolved by a
/// named measure oracle at analysis time.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub interval: RawInterval,
    pub values: (f64, f64),
    pub oracle: OracleName,
}

/// Parsed field description: analytic pieces, single-point value overrides,
/// and dense two-valued segments. Intervals of pieces and dense segments are
/// pairwise disjoint (checked at parse time).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FieldSpec {
    pub pieces: Vec<Piece>,
    pub overrides: Vec<PointOverride>,
    pub dense: Vec<DenseSegment>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::LBrace => write!(f, "'{{'"),
            Tok::RBrace => write!(f, "'}}'"),
            Tok::Comma => write!(f, "','"),
            Tok::Semi => write!(f, "';'"),
            Tok::Colon => write!(f, "':'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
    /// byte range in the source, used to join hyphenated oracle names
    start: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let (tline, tcol, start) = (line, col, i);
        let mut push = |tok: Tok, end: usize| {
            out.push(Token { tok, line: tline, col: tcol, start, end });
        };
        match c {
            ' ' | '\t' => {
                i += 1;
                col += 1;
            }
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            '\r' => {
                i += 1;
            }
            '(' => { push(Tok::LParen, i + 1); i += 1; col += 1; }
            ')' => { push(Tok::RParen, i + 1); i += 1; col += 1; }
            '[' => { push(Tok::LBracket, i + 1); i += 1; col += 1; }
            ']' => { push(Tok::RBracket, i + 1); i += 1; col += 1; }
            '{' => { push(Tok::LBrace, i + 1); i += 1; col += 1; }
            '}' => { push(Tok::RBrace, i + 1); i += 1; col += 1; }
            ',' => { push(Tok::Comma, i + 1); i += 1; col += 1; }
            ';' => { push(Tok::Semi, i + 1); i += 1; col += 1; }
            ':' => { push(Tok::Colon, i + 1); i += 1; col += 1; }
            '+' => { push(Tok::Plus, i + 1); i += 1; col += 1; }
            '-' => { push(Tok::Minus, i + 1); i += 1; col += 1; }
            '*' => { push(Tok::Star, i + 1); i += 1; col += 1; }
            '/' => { push(Tok::Slash, i + 1); i += 1; col += 1; }
            '^' => { push(Tok::Caret, i + 1); i += 1; col += 1; }
            '0'..='9' | '.' => {
                let mut j = i;
                while j < bytes.len() && matches!(bytes[j] as char, '0'..='9' | '.') {
                    j += 1;
                }
                if j < bytes.len() && matches!(bytes[j] as char, 'e' | 'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && matches!(bytes[k] as char, '+' | '-') {
                        k += 1;
                    }
                    let digits = k;
                    while k < bytes.len() && (bytes[k] as char).is_ascii_digit() {
                        k += 1;
                    }
                    if k > digits {
                        j = k;
                    }
                }
                let text = &src[i..j];
                let v: f64 = text.parse().map_err(|_| ParseError {
                    line: tline,
                    col: tcol,
                    msg: format!("bad number literal '{text}'"),
                })?;
                if !v.is_finite() {
                    return Err(ParseError {
                        line: tline,
                        col: tcol,
                        msg: format!("number literal '{text}' overflows"),
                    });
                }
                push(Tok::Num(v), j);
                col += (j - i) as u32;
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && matches!(bytes[j] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    j += 1;
                }
                push(Tok::Ident(src[i..j].to_string()), j);
                col += (j - i) as u32;
                i = j;
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end_line: u32,
    end_col: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Token, ParseError> {
        match self.next() {
            Some(t) if t.tok == want => Ok(t),
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected {want}, found {}", t.tok),
            }),
            None => {
                self.pos = self.toks.len();
                self.err(format!("expected {want}, found end of input"))
            }
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Ident(s), .. }) if s == kw => Ok(()),
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected '{kw}', found {}", t.tok),
            }),
            None => self.err(format!("expected '{kw}', found end of input")),
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let neg = matches!(self.peek(), Some(Tok::Minus));
        if neg {
            self.next();
        }
        match self.next() {
            Some(Token { tok: Tok::Num(v), .. }) => Ok(if neg { -v } else { v }),
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected a number, found {}", t.tok),
            }),
            None => self.err("expected a number, found end of input"),
        }
    }

    fn bound(&mut self) -> Result<f64, ParseError> {
        let neg = matches!(self.peek(), Some(Tok::Minus));
        if neg {
            self.next();
        }
        match self.next() {
            Some(Token { tok: Tok::Num(v), .. }) => Ok(if neg { -v } else { v }),
            Some(Token { tok: Tok::Ident(s), .. }) if s == "inf" => {
                Ok(if neg { f64::NEG_INFINITY } else { f64::INFINITY })
            }
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected a number or inf, found {}", t.tok),
            }),
            None => self.err("expected an interval bound, found end of input"),
        }
    }

    fn interval(&mut self) -> Result<RawInterval, ParseError> {
        let (line, col) = self.here();
        let lo_closed = match self.next() {
            Some(Token { tok: Tok::LParen, .. }) => false,
            Some(Token { tok: Tok::LBracket, .. }) => true,
            Some(t) => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected '(' or '[', found {}", t.tok),
                })
            }
            None => return self.err("expected an interval, found end of input"),
        };
        let lo = self.bound()?;
        self.expect(Tok::Comma)?;
        let hi = self.bound()?;
        let hi_closed = match self.next() {
            Some(Token { tok: Tok::RParen, .. }) => false,
            Some(Token { tok: Tok::RBracket, .. }) => true,
            Some(t) => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected ')' or ']', found {}", t.tok),
                })
            }
            None => return self.err("expected ')' or ']', found end of input"),
        };
        let iv = RawInterval { lo, hi, lo_closed, hi_closed };
        if !(lo < hi) {
            return Err(ParseError { line, col, msg: format!("empty interval {iv}") });
        }
        if (lo.is_infinite() && lo_closed) || (hi.is_infinite() && hi_closed) {
            return Err(ParseError {
                line,
                col,
                msg: format!("infinite endpoint must be open in {iv}"),
            });
        }
        Ok(iv)
    }

    /// Oracle names may contain hyphens (`builtin-fat-cantor`); the lexer
    /// splits those into separate tokens, so rejoin maximal runs of
    /// ident/number tokens glued by '-' with no intervening whitespace.
    fn oracle_name(&mut self) -> Result<OracleName, ParseError> {
        let first = match self.next() {
            Some(Token { tok: Tok::Ident(s), end, .. }) => (s, end),
            Some(t) => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected an oracle name, found {}", t.tok),
                })
            }
            None => return self.err("expected an oracle name, found end of input"),
        };
        let mut name = first.0;
        let mut end = first.1;
        loop {
            let dash_adjacent = matches!(
                self.toks.get(self.pos),
                Some(Token { tok: Tok::Minus, start, .. }) if *start == end
            );
            if !dash_adjacent {
                break;
            }
            let dash_end = self.toks[self.pos].end;
            let part = match self.toks.get(self.pos + 1) {
                Some(Token { tok: Tok::Ident(s), start, end, .. }) if *start == dash_end => {
                    (s.clone(), *end)
                }
                _ => break,
            };
            self.pos += 2;
            name.push('-');
            name.push_str(&part.0);
            end = part.1;
        }
        if name == "builtin-fat-cantor" {
            Ok(OracleName::BuiltinFatCantor)
        } else {
            Ok(OracleName::Named(name))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            let inner = self.unary()?;
            // negated literals become negative constants so that rendering
            // and reparsing agree structurally
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Num(v), .. }) => Ok(Expr::Const(v)),
            Some(Token { tok: Tok::LParen, .. }) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Token { tok: Tok::Ident(name), line, col, .. }) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "abs" | "sign" | "log" | "exp" | "sqrt" => {
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    self.expect(Tok::RParen)?;
                    let a = Box::new(a);
                    Ok(match name.as_str() {
                        "abs" => Expr::Abs(a),
                        "sign" => Expr::Sign(a),
                        "log" => Expr::Log(a),
                        "exp" => Expr::Exp(a),
                        _ => Expr::Sqrt(a),
                    })
                }
                "min" | "max" => {
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    let (a, b) = (Box::new(a), Box::new(b));
                    Ok(if name == "min" { Expr::Min(a, b) } else { Expr::Max(a, b) })
                }
                other => Err(ParseError {
                    line,
                    col,
                    msg: format!("unknown identifier '{other}' in expression"),
                }),
            },
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected an expression, found {}", t.tok),
            }),
            None => self.err("expected an expression, found end of input"),
        }
    }

    fn stmt(&mut self, spec: &mut FieldSpec) -> Result<(), ParseError> {
        let (line, col) = self.here();
        match self.peek() {
            Some(Tok::Ident(s)) if s == "on" => {
                self.next();
                let interval = self.interval()?;
                self.expect(Tok::Colon)?;
                let expr = self.expr()?;
                spec.pieces.push(Piece { interval, expr });
                Ok(())
            }
            Some(Tok::Ident(s)) if s == "at" => {
                self.next();
                let x = self.signed_number()?;
                self.expect(Tok::Colon)?;
                let value = self.signed_number()?;
                spec.overrides.push(PointOverride { x, value });
                Ok(())
            }
            Some(Tok::Ident(s)) if s == "dense" => {
                self.next();
                self.expect_keyword("on")?;
                let interval = self.interval()?;
                if !interval.is_bounded() {
                    return Err(ParseError {
                        line,
                        col,
                        msg: format!("dense segment {interval} must have finite endpoints"),
                    });
                }
                self.expect(Tok::Colon)?;
                self.expect(Tok::LBrace)?;
                let v1 = self.signed_number()?;
                self.expect(Tok::Comma)?;
                let v2 = self.signed_number()?;
                self.expect(Tok::RBrace)?;
                if v1 == v2 {
                    return Err(ParseError {
                        line,
                        col,
                        msg: format!("dense segment values must be distinct, both are {v1}"),
                    });
                }
                self.expect_keyword("measure")?;
                let oracle = self.oracle_name()?;
                spec.dense.push(DenseSegment { interval, values: (v1, v2), oracle });
                Ok(())
            }
            Some(_) => self.err("expected a statement starting with 'on', 'at' or 'dense'"),
            None => self.err("expected a statement, found end of input"),
        }
    }
}

/// Parse a field description. Besides syntax, this checks that piece and
/// dense-segment intervals are pairwise disjoint, that dense segments are
/// bounded with two distinct values, and that override points are unique.
pub fn parse_field(src: &str) -> Result<FieldSpec, ParseError> {
    let toks = lex(src)?;
    let (end_line, end_col) = toks
        .last()
        .map(|t| (t.line, t.col + (t.end - t.start) as u32))
        .unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, end_line, end_col };
    let mut spec = FieldSpec::default();
    if p.peek().is_none() {
        return p.err("empty field description");
    }
    loop {
        p.stmt(&mut spec)?;
        match p.peek() {
            Some(Tok::Semi) => {
                p.next();
                if p.peek().is_none() {
                    break;
                }
            }
            None => break,
            Some(_) => return p.err("expected ';' between statements"),
        }
    }
    validate(&spec).map_err(|msg| ParseError { line: end_line, col: end_col, msg })?;
    Ok(spec)
}

pub(crate) fn validate(spec: &FieldSpec) -> Result<(), String> {
    let mut regions: Vec<(RawInterval, String)> = Vec::new();
    for piece in &spec.pieces {
        regions.push((piece.interval, format!("piece on {}", piece.interval)));
    }
    for d in &spec.dense {
        regions.push((d.interval, format!("dense segment on {}", d.interval)));
    }
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            if regions[i].0.overlaps(&regions[j].0) {
                return Err(format!("{} overlaps {}", regions[i].1, regions[j].1));
            }
        }
    }
    for (i, a) in spec.overrides.iter().enumerate() {
        if !a.x.is_finite() {
            return Err(format!("override point {} is not finite", a.x));
        }
        for b in &spec.overrides[i + 1..] {
            if a.x == b.x {
                return Err(format!("duplicate override at x = {}", a.x));
            }
        }
    }
    Ok(())
}

/// Canonical printer. `parse_field(&render(spec))` reproduces `spec`
/// structurally; statement order is normalized to pieces, overrides, dense.
pub fn render(spec: &FieldSpec) -> String {
    let mut parts: Vec<String> = Vec::new();
    for piece in &spec.pieces {
        parts.push(format!("on {}: {}", piece.interval, piece.expr));
    }
    for o in &spec.overrides {
        parts.push(format!("at {}: {}", o.x, o.value));
    }
    for d in &spec.dense {
        parts.push(format!(
            "dense on {}: {{{}, {}}} measure {}",
            d.interval, d.values.0, d.values.1, d.oracle
        ));
    }
    parts.join("; ")
}
