//! Interval temporal logic formulas: syntax, parsing, and structural
//! measures.
//!
//! Atoms are regular expressions in braces and constrain the label word of
//! the current trace. Modal operators quantify over related traces: `<B>`
//! proper prefixes, `<E>` proper suffixes, `<~B>` right extensions, `<~E>`
//! left extensions, `<A>` traces starting where the current one ends, `<~A>`
//! traces ending where the current one starts. `[X]` is the universal dual
//! of `<X>`. Connectives are `~`, `&`, `|`, and `->`; prefix operators bind
//! tightest, then `&`, then `|`, then `->` (right associative). `a -> b`
//! abbreviates `~a | b` and is expanded during parsing.

use std::fmt;

use thiserror::Error;

use crate::relang::{parse_regex, RegExpr, RegexError};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Modality {
    /// Traces starting at the last state of the current one.
    A,
    /// Traces ending at the first state of the current one.
    ABar,
    /// Proper prefixes.
    B,
    /// Proper right extensions.
    BBar,
    /// Proper suffixes.
    E,
    /// Proper left extensions.
    EBar,
}

impl Modality {
    fn letter(self) -> &'static str {
        match self {
            Modality::A => "A",
            Modality::ABar => "~A",
            Modality::B => "B",
            Modality::BBar => "~B",
            Modality::E => "E",
            Modality::EBar => "~E",
        }
    }

    /// The modality playing this one's role after trace reversal.
    pub fn mirrored(self) -> Modality {
        match self {
            Modality::A => Modality::ABar,
            Modality::ABar => Modality::A,
            Modality::B => Modality::E,
            Modality::E => Modality::B,
            Modality::BBar => Modality::EBar,
            Modality::EBar => Modality::BBar,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Atom(RegExpr),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Diamond(Modality, Box<Formula>),
    Box(Modality, Box<Formula>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("atom starting at byte {pos}: {source}")]
    Atom { pos: usize, source: RegexError },
}

impl Formula {
    pub fn atom(text: &str) -> Formula {
        Formula::Atom(parse_regex(text).expect("atom text parses"))
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn diamond(m: Modality, f: Formula) -> Formula {
        Formula::Diamond(m, Box::new(f))
    }

    pub fn boxed(m: Modality, f: Formula) -> Formula {
        Formula::Box(m, Box::new(f))
    }

    /// Number of formula nodes; atoms count one each.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Diamond(_, a) | Formula::Box(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Maximum nesting depth of prefix modalities (`<B>`/`[B]`).
    pub fn depth_b(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(a) => a.depth_b(),
            Formula::And(a, b) | Formula::Or(a, b) => a.depth_b().max(b.depth_b()),
            Formula::Diamond(Modality::B, a) | Formula::Box(Modality::B, a) => 1 + a.depth_b(),
            Formula::Diamond(_, a) | Formula::Box(_, a) => a.depth_b(),
        }
    }

    /// Maximum number of quantifier alternations along any syntax path,
    /// counted over extension modalities (`<~B>`, `[~B]`, `<~E>`, `[~E]`)
    /// with negations taken into account.
    pub fn upsilon(&self) -> usize {
        #[derive(Clone, Copy, PartialEq)]
        enum Quant {
            Exists,
            ForAll,
        }
        fn walk(f: &Formula, negated: bool, last: Option<Quant>) -> usize {
            match f {
                Formula::Atom(_) => 0,
                Formula::Not(a) => walk(a, !negated, last),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    walk(a, negated, last).max(walk(b, negated, last))
                }
                Formula::Diamond(m, a) | Formula::Box(m, a)
                    if matches!(m, Modality::BBar | Modality::EBar) =>
                {
                    let is_diamond = matches!(f, Formula::Diamond(..));
                    let quant = if is_diamond != negated { Quant::Exists } else { Quant::ForAll };
                    let step = usize::from(last.is_some_and(|l| l != quant));
                    step + walk(a, negated, Some(quant))
                }
                Formula::Diamond(_, a) | Formula::Box(_, a) => walk(a, negated, last),
            }
        }
        walk(self, false, None)
    }

    /// Whether the given modality occurs anywhere in the formula.
    pub fn mentions(&self, m: Modality) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Not(a) => a.mentions(m),
            Formula::And(a, b) | Formula::Or(a, b) => a.mentions(m) || b.mentions(m),
            Formula::Diamond(x, a) | Formula::Box(x, a) => *x == m || a.mentions(m),
        }
    }

    /// The distinct atom expressions, in first-occurrence order.
    pub fn atoms(&self) -> Vec<&RegExpr> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a RegExpr>) {
            match f {
                Formula::Atom(r) => {
                    if !out.contains(&r) {
                        out.push(r);
                    }
                }
                Formula::Not(a) | Formula::Diamond(_, a) | Formula::Box(_, a) => walk(a, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Total size of the distinct atom expressions.
    pub fn spec_size(&self) -> usize {
        self.atoms().iter().map(|r| r.size()).sum()
    }

    /// The formula equivalent to this one over reversed traces: every
    /// modality is mirrored and every atom expression reversed. Applying it
    /// twice yields the original formula.
    pub fn mirrored(&self) -> Formula {
        match self {
            Formula::Atom(r) => Formula::Atom(r.reverse()),
            Formula::Not(a) => Formula::negate(a.mirrored()),
            Formula::And(a, b) => Formula::and(a.mirrored(), b.mirrored()),
            Formula::Or(a, b) => Formula::or(a.mirrored(), b.mirrored()),
            Formula::Diamond(m, a) => Formula::diamond(m.mirrored(), a.mirrored()),
            Formula::Box(m, a) => Formula::boxed(m.mirrored(), a.mirrored()),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = match self {
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        };
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Formula::Atom(r) => write!(f, "{{{r}}}")?,
            Formula::Not(a) => {
                write!(f, "~")?;
                a.fmt_prec(f, 4)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Diamond(m, a) => {
                write!(f, "<{}>", m.letter())?;
                a.fmt_prec(f, 4)?;
            }
            Formula::Box(m, a) => {
                write!(f, "[{}]", m.letter())?;
                a.fmt_prec(f, 4)?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Parses the formula grammar described in the module docs.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = FormulaParser { bytes: text.as_bytes(), pos: 0 };
    let f = p.implies()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct FormulaParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> FormulaParser<'a> {
    fn err(&self, msg: &str) -> FormulaError {
        FormulaError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implies(&mut self) -> Result<Formula, FormulaError> {
        let left = self.or()?;
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(b"->") {
            self.pos += 2;
            let right = self.implies()?;
            return Ok(Formula::or(Formula::negate(left), right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.and()?;
        while self.eat(b'|') {
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.unary()?;
        while self.eat(b'&') {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(Formula::negate(self.unary()?))
            }
            Some(b'<') => {
                let m = self.modality(b'<', b'>')?;
                Ok(Formula::diamond(m, self.unary()?))
            }
            Some(b'[') => {
                let m = self.modality(b'[', b']')?;
                Ok(Formula::boxed(m, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn modality(&mut self, open: u8, close: u8) -> Result<Modality, FormulaError> {
        let start = self.pos;
        if !self.eat(open) {
            return Err(self.err("expected a modality"));
        }
        let bar = self.eat(b'~');
        let letter = self.bytes.get(self.pos).copied();
        self.pos += usize::from(letter.is_some());
        let m = match (letter, bar) {
            (Some(b'A'), false) => Modality::A,
            (Some(b'A'), true) => Modality::ABar,
            (Some(b'B'), false) => Modality::B,
            (Some(b'B'), true) => Modality::BBar,
            (Some(b'E'), false) => Modality::E,
            (Some(b'E'), true) => Modality::EBar,
            _ => {
                self.pos = start;
                return Err(FormulaError::Syntax {
                    pos: start,
                    msg: "unknown modality (expected A, B, or E, optionally after ~)".into(),
                });
            }
        };
        if self.bytes.get(self.pos) != Some(&close) {
            self.pos = start;
            return Err(FormulaError::Syntax {
                pos: start,
                msg: format!("modality is not closed by `{}`", close as char),
            });
        }
        self.pos += 1;
        Ok(m)
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(b'{') => {
                let start = self.pos;
                self.pos += 1;
                let end = self.bytes[self.pos..]
                    .iter()
                    .position(|&c| c == b'}')
                    .map(|i| self.pos + i)
                    .ok_or_else(|| FormulaError::Syntax {
                        pos: start,
                        msg: "atom is not closed by `}`".into(),
                    })?;
                let inner = std::str::from_utf8(&self.bytes[self.pos..end]).map_err(|_| {
                    FormulaError::Syntax { pos: start, msg: "atom is not valid UTF-8".into() }
                })?;
                let expr = parse_regex(inner)
                    .map_err(|source| FormulaError::Atom { pos: start, source })?;
                self.pos = end + 1;
                Ok(Formula::Atom(expr))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.implies()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(f)
            }
            _ => Err(self.err("expected a formula")),
        }
    }
}
