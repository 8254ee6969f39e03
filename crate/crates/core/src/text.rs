//! Text forms: element expressions and the operator, tensor and Ω file
//! formats.
//!
//! ```text
//! element   := [sign] term { sign term } | "0"
//! term      := [ rational ["*"] ] generator
//! generator := ("L" | "Y" | "M") "[" rational "]"
//! rational  := integer [ "/" positive-integer ]
//! integer   := [sign] digits
//! sign      := "+" | "-"
//! ```
//!
//! Whitespace is insignificant. A lone `0` is the zero element (the printed
//! form of zero); any other bare rational is an error.
//!
//! Files are line based, `#` starts a comment:
//!
//! ```text
//! L[1] -> 2*M[1]              operator line
//! (L[1], L[2]) -> -1*L[3]     tensor line
//! mu[3] = 2017                Ω line
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{AlgebraConfig, AlgebraError, Element, Family, GeneratorId, Grade};
use crate::biderivations::{BilinearMap, OmegaSet};
use crate::derivations::LinearOperator;
use crate::linalg::Rational;
use crate::window::Window;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("zero denominator at {position}")]
    ZeroDenominator { position: usize },
    #[error("index out of range at {position}")]
    IndexOverflow { position: usize },
    #[error("{source} (at {position})")]
    Domain {
        position: usize,
        #[source]
        source: AlgebraError,
    },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::ZeroDenominator { position }
            | ParseError::IndexOverflow { position }
            | ParseError::Domain { position, .. } => *position,
        }
    }
}

/// A parse error tied to a line of a file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.char_indices().collect(),
            pos: 0,
            text,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    /// Character offset of the next non-space token.
    fn offset(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error(&mut self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(format!("expected `{c}`, found `{d}`"))),
            None => Err(self.error(format!("expected `{c}`, found end of input"))),
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let (a, _) = self.chars[start];
        let b = self.chars.get(self.pos).map_or(self.text.len(), |(i, _)| *i);
        Ok(self.text[a..b].parse().expect("ascii digits"))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let num = self.digits()?;
        let num = if negative { -num } else { num };
        if self.peek() != Some('/') {
            return Ok(Rational::from_integer(num));
        }
        self.pos += 1;
        let at = self.offset();
        let den = self.digits()?;
        if den.is_zero() {
            return Err(ParseError::ZeroDenominator { position: at });
        }
        Ok(Rational::new(num, den))
    }

    fn generator(&mut self, cfg: &AlgebraConfig) -> Result<GeneratorId, ParseError> {
        let at = self.offset();
        let family = match self.bump() {
            Some('L') => Family::L,
            Some('Y') => Family::Y,
            Some('M') => Family::M,
            _ => {
                self.pos = at;
                return Err(self.error("expected a generator L[..], Y[..] or M[..]"));
            }
        };
        self.expect('[')?;
        let idx_at = self.offset();
        let q = self.rational()?;
        self.expect(']')?;
        let index = to_grade(&q).ok_or(ParseError::IndexOverflow { position: idx_at })?;
        cfg.validate(GeneratorId::new(family, index))
            .map_err(|source| ParseError::Domain { position: at, source })
    }

    fn term(&mut self, cfg: &AlgebraConfig) -> Result<(Rational, GeneratorId), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let q = self.rational()?;
                if self.peek() == Some('*') {
                    self.pos += 1;
                }
                Ok((q, self.generator(cfg)?))
            }
            _ => Ok((Rational::from_integer(1.into()), self.generator(cfg)?)),
        }
    }
}

fn to_grade(q: &Rational) -> Option<Grade> {
    let n: i64 = q.numer().try_into().ok()?;
    let d: i64 = q.denom().try_into().ok()?;
    Some(Grade::new(n, d))
}

/// Parses an element expression, validating `Y` indices against `cfg`.
pub fn parse_element(text: &str, cfg: &AlgebraConfig) -> Result<Element, ParseError> {
    let mut cur = Cursor::new(text);
    let e = element(&mut cur, cfg)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(e)
}

fn element(cur: &mut Cursor<'_>, cfg: &AlgebraConfig) -> Result<Element, ParseError> {
    if cur.at_end() {
        return Err(cur.error("empty expression"));
    }
    // the printed zero element
    let save = cur.pos;
    if cur.peek() == Some('0') {
        cur.pos += 1;
        let next = cur.peek();
        if next.is_none() || next == Some(',') || next == Some(')') {
            return Ok(Element::zero());
        }
        cur.pos = save;
    }
    let mut out = Element::zero();
    let mut first = true;
    loop {
        let negative = match cur.peek() {
            Some('+') => {
                cur.pos += 1;
                false
            }
            Some('-') => {
                cur.pos += 1;
                true
            }
            _ if first => false,
            _ => break,
        };
        let (q, g) = cur.term(cfg)?;
        out.add_term(if negative { -q } else { q }, g);
        first = false;
    }
    Ok(out)
}

/// Parses a bare generator such as `Y[-3/2]`.
pub fn parse_generator(text: &str, cfg: &AlgebraConfig) -> Result<GeneratorId, ParseError> {
    let mut cur = Cursor::new(text);
    let g = cur.generator(cfg)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(g)
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let mut cur = Cursor::new(text);
    let q = cur.rational()?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(q)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn split_arrow(line: &str, lineno: usize) -> Result<(&str, &str), FileError> {
    line.split_once("->").ok_or_else(|| FileError::Invalid {
        line: lineno,
        message: "expected `->`".into(),
    })
}

fn in_window(g: GeneratorId, w: Window, line: usize) -> Result<GeneratorId, FileError> {
    if w.contains(g) {
        Ok(g)
    } else {
        Err(FileError::Invalid {
            line,
            message: format!("{g} lies outside the window of radius {}", w.radius),
        })
    }
}

/// Reads `GEN -> expr` lines; omitted window generators map to zero.
pub fn parse_operator(text: &str, label: &str, w: Window, cfg: &AlgebraConfig) -> Result<LinearOperator, FileError> {
    let mut op = LinearOperator::zero_on(label, w, cfg);
    let mut seen = BTreeSet::new();
    for (line, content) in content_lines(text) {
        let (lhs, rhs) = split_arrow(content, line)?;
        let g = parse_generator(lhs, cfg).map_err(|source| FileError::Parse { line, source })?;
        let g = in_window(g, w, line)?;
        if !seen.insert(g) {
            return Err(FileError::Invalid {
                line,
                message: format!("{g} is defined twice"),
            });
        }
        let e = parse_element(rhs, cfg).map_err(|source| FileError::Parse { line, source })?;
        op.set(g, e);
    }
    Ok(op)
}

/// Nonzero images in canonical generator order.
pub fn format_operator(op: &LinearOperator) -> String {
    op.images()
        .filter(|(_, e)| !e.is_zero())
        .map(|(g, e)| format!("{g} -> {e}\n"))
        .collect()
}

/// Reads `(GEN, GEN) -> expr` lines; omitted window pairs map to zero.
pub fn parse_tensor(text: &str, w: Window, cfg: &AlgebraConfig) -> Result<BilinearMap, FileError> {
    let mut f = BilinearMap::zero_on(w, cfg);
    let mut seen = BTreeSet::new();
    for (line, content) in content_lines(text) {
        let (lhs, rhs) = split_arrow(content, line)?;
        let inner = lhs
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| FileError::Invalid {
                line,
                message: "expected `(GEN, GEN)`".into(),
            })?;
        let (a, b) = inner.split_once(',').ok_or_else(|| FileError::Invalid {
            line,
            message: "expected `(GEN, GEN)`".into(),
        })?;
        let parse = |s: &str| parse_generator(s, cfg).map_err(|source| FileError::Parse { line, source });
        let (a, b) = (in_window(parse(a)?, w, line)?, in_window(parse(b)?, w, line)?);
        if !seen.insert((a, b)) {
            return Err(FileError::Invalid {
                line,
                message: format!("({a}, {b}) is defined twice"),
            });
        }
        let e = parse_element(rhs, cfg).map_err(|source| FileError::Parse { line, source })?;
        f.set(a, b, e);
    }
    Ok(f)
}

/// Nonzero values in canonical pair order.
pub fn format_tensor(f: &BilinearMap) -> String {
    f.entries()
        .filter(|(_, e)| !e.is_zero())
        .map(|((a, b), e)| format!("({a}, {b}) -> {e}\n"))
        .collect()
}

/// Reads `mu[k] = q` lines; repeated shifts are an error.
pub fn parse_omega(text: &str) -> Result<OmegaSet, FileError> {
    let mut out = OmegaSet::new();
    let mut seen = BTreeSet::new();
    for (line, content) in content_lines(text) {
        let (k, q) = parse_mu(content).map_err(|message| FileError::Invalid { line, message })?;
        if !seen.insert(k) {
            return Err(FileError::Invalid {
                line,
                message: format!("mu[{k}] is defined twice"),
            });
        }
        out.set(k, q);
    }
    Ok(out)
}

/// `mu[k] = q`.
fn parse_mu(content: &str) -> Result<(i64, Rational), String> {
    let (lhs, rhs) = content.split_once('=').ok_or("expected `mu[k] = q`")?;
    let k = lhs
        .trim()
        .strip_prefix("mu[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or("expected `mu[k]`")?;
    let k: i64 = k.trim().parse().map_err(|_| format!("invalid shift `{}`", k.trim()))?;
    let q = parse_rational(rhs).map_err(|e| e.to_string())?;
    Ok((k, q))
}

pub fn format_omega(o: &OmegaSet) -> String {
    o.iter().map(|(k, q)| format!("mu[{k}] = {q}\n")).collect()
}

/// `k=q` as used on the command line.
pub fn parse_spike(text: &str) -> Result<(i64, Rational), String> {
    let (k, q) = text
        .split_once('=')
        .ok_or_else(|| format!("expected k=q, got `{text}`"))?;
    let k: i64 = k.trim().parse().map_err(|_| format!("invalid shift `{}`", k.trim()))?;
    let q = parse_rational(q).map_err(|e| e.to_string())?;
    Ok((k, q))
}
