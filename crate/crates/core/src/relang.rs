//! Propositional regular expressions and their finite automata.
//!
//! Expressions denote languages of finite words over label sets: `eps`
//! matches the empty word, a propositional formula matches any single letter
//! satisfying it, and `+` (union), `.` (concatenation), and postfix `*`
//! combine languages. Propositional connectives (`!`, `&`, `|`) bind tighter
//! than `*`, which binds tighter than `.`, which binds tighter than `+`.

use std::fmt;

use thiserror::Error;

use crate::bits::BitMatrix;
use crate::kripke::LabelSet;

/// Words reserved by the expression grammar; they cannot name propositions.
pub const RESERVED_WORDS: [&str; 3] = ["eps", "true", "false"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegexError {
    #[error("byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown proposition `{name}`")]
    UnknownProp { name: String },
}

/// A propositional formula over named propositions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PropFormula {
    True,
    False,
    Atom(String),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(name: &str) -> PropFormula {
        PropFormula::Atom(name.to_string())
    }

    /// Evaluates over a label set, resolving atom names through `props`.
    /// Atoms not present in `props` are false.
    pub fn eval(&self, props: &[String], labels: LabelSet) -> bool {
        match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Atom(name) => props
                .iter()
                .position(|p| p == name)
                .is_some_and(|i| labels.contains(i)),
            PropFormula::Not(a) => !a.eval(props, labels),
            PropFormula::And(a, b) => a.eval(props, labels) && b.eval(props, labels),
            PropFormula::Or(a, b) => a.eval(props, labels) || b.eval(props, labels),
        }
    }

    /// Resolves atom names to indices in `props`.
    fn compile(&self, props: &[String]) -> Result<Guard, RegexError> {
        Ok(match self {
            PropFormula::True => Guard::True,
            PropFormula::False => Guard::False,
            PropFormula::Atom(name) => {
                let idx = props
                    .iter()
                    .position(|p| p == name)
                    .ok_or_else(|| RegexError::UnknownProp { name: name.clone() })?;
                Guard::Prop(idx)
            }
            PropFormula::Not(a) => Guard::Not(Box::new(a.compile(props)?)),
            PropFormula::And(a, b) => {
                Guard::And(Box::new(a.compile(props)?), Box::new(b.compile(props)?))
            }
            PropFormula::Or(a, b) => {
                Guard::Or(Box::new(a.compile(props)?), Box::new(b.compile(props)?))
            }
        })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = match self {
            PropFormula::Or(..) => 1,
            PropFormula::And(..) => 2,
            PropFormula::Not(..) => 3,
            _ => 4,
        };
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            PropFormula::True => write!(f, "true")?,
            PropFormula::False => write!(f, "false")?,
            PropFormula::Atom(name) => write!(f, "{name}")?,
            PropFormula::Not(a) => {
                write!(f, "!")?;
                a.fmt_prec(f, 3)?;
            }
            PropFormula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 3)?;
            }
            PropFormula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 2)?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A regular expression over propositional tests.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RegExpr {
    /// Matches only the empty word.
    Empty,
    /// Matches any single letter satisfying the formula.
    Test(PropFormula),
    Union(Box<RegExpr>, Box<RegExpr>),
    Concat(Box<RegExpr>, Box<RegExpr>),
    Star(Box<RegExpr>),
}

impl RegExpr {
    pub fn test(name: &str) -> RegExpr {
        RegExpr::Test(PropFormula::atom(name))
    }

    pub fn concat(a: RegExpr, b: RegExpr) -> RegExpr {
        RegExpr::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: RegExpr, b: RegExpr) -> RegExpr {
        RegExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: RegExpr) -> RegExpr {
        RegExpr::Star(Box::new(a))
    }

    /// Number of expression nodes; tests count as one node regardless of the
    /// formula inside.
    pub fn size(&self) -> usize {
        match self {
            RegExpr::Empty | RegExpr::Test(_) => 1,
            RegExpr::Union(a, b) | RegExpr::Concat(a, b) => 1 + a.size() + b.size(),
            RegExpr::Star(a) => 1 + a.size(),
        }
    }

    /// The expression matching exactly the reversals of this one's words.
    /// Node count is preserved.
    pub fn reverse(&self) -> RegExpr {
        match self {
            RegExpr::Empty => RegExpr::Empty,
            RegExpr::Test(p) => RegExpr::Test(p.clone()),
            RegExpr::Union(a, b) => RegExpr::union(a.reverse(), b.reverse()),
            RegExpr::Concat(a, b) => RegExpr::concat(b.reverse(), a.reverse()),
            RegExpr::Star(a) => RegExpr::star(a.reverse()),
        }
    }

    /// Names of the atoms appearing in tests, in first-occurrence order.
    pub fn atom_names(&self, out: &mut Vec<String>) {
        fn prop_atoms(p: &PropFormula, out: &mut Vec<String>) {
            match p {
                PropFormula::True | PropFormula::False => {}
                PropFormula::Atom(name) => {
                    if !out.iter().any(|n| n == name) {
                        out.push(name.clone());
                    }
                }
                PropFormula::Not(a) => prop_atoms(a, out),
                PropFormula::And(a, b) | PropFormula::Or(a, b) => {
                    prop_atoms(a, out);
                    prop_atoms(b, out);
                }
            }
        }
        match self {
            RegExpr::Empty => {}
            RegExpr::Test(p) => prop_atoms(p, out),
            RegExpr::Union(a, b) | RegExpr::Concat(a, b) => {
                a.atom_names(out);
                b.atom_names(out);
            }
            RegExpr::Star(a) => a.atom_names(out),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = match self {
            RegExpr::Union(..) => 1,
            RegExpr::Concat(..) => 2,
            RegExpr::Star(..) => 3,
            RegExpr::Empty | RegExpr::Test(_) => 4,
        };
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            RegExpr::Empty => write!(f, "eps")?,
            RegExpr::Test(p) => write!(f, "{p}")?,
            RegExpr::Union(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            RegExpr::Concat(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " . ")?;
                b.fmt_prec(f, 3)?;
            }
            RegExpr::Star(a) => {
                a.fmt_prec(f, 3)?;
                write!(f, "*")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for RegExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Parses the expression grammar described in the module docs.
pub fn parse_regex(text: &str) -> Result<RegExpr, RegexError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let r = p.regex_union()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(r)
}

/// Parses a standalone propositional formula.
pub fn parse_prop(text: &str) -> Result<PropFormula, RegexError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let r = p.prop_or()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> RegexError {
        RegexError::Syntax { pos: self.pos, msg: msg.to_string() }
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

    fn expect(&mut self, c: u8) -> Result<(), RegexError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        match self.bytes.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            _ => return None,
        }
        while let Some(c) = self.bytes.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == b'_' || *c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Some(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn regex_union(&mut self) -> Result<RegExpr, RegexError> {
        let mut left = self.regex_concat()?;
        while self.eat(b'+') {
            let right = self.regex_concat()?;
            left = RegExpr::union(left, right);
        }
        Ok(left)
    }

    fn regex_concat(&mut self) -> Result<RegExpr, RegexError> {
        let mut left = self.regex_star()?;
        while self.eat(b'.') {
            let right = self.regex_star()?;
            left = RegExpr::concat(left, right);
        }
        Ok(left)
    }

    fn regex_star(&mut self) -> Result<RegExpr, RegexError> {
        let mut e = self.regex_primary()?;
        while self.eat(b'*') {
            e = RegExpr::star(e);
        }
        Ok(e)
    }

    fn regex_primary(&mut self) -> Result<RegExpr, RegexError> {
        match self.peek() {
            Some(b'(') => {
                // A formula starting with a parenthesis is a single test
                // when its contents parse propositionally; otherwise the
                // parentheses group a subexpression.
                let saved = self.pos;
                match self.prop_or() {
                    Ok(p) => Ok(RegExpr::Test(p)),
                    Err(_) => {
                        self.pos = saved;
                        self.expect(b'(')?;
                        let e = self.regex_union()?;
                        self.expect(b')')?;
                        Ok(e)
                    }
                }
            }
            Some(b'!') => Ok(RegExpr::Test(self.prop_or()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let saved = self.pos;
                let word = self.ident().expect("peeked an identifier start");
                if word == "eps" {
                    return Ok(RegExpr::Empty);
                }
                self.pos = saved;
                Ok(RegExpr::Test(self.prop_or()?))
            }
            _ => Err(self.err("expected an expression")),
        }
    }

    fn paren_prop(&mut self) -> Result<PropFormula, RegexError> {
        self.expect(b'(')?;
        let p = self.prop_or()?;
        self.expect(b')')?;
        Ok(p)
    }

    fn prop_or(&mut self) -> Result<PropFormula, RegexError> {
        let mut left = self.prop_and()?;
        while self.eat(b'|') {
            let right = self.prop_and()?;
            left = PropFormula::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn prop_and(&mut self) -> Result<PropFormula, RegexError> {
        let mut left = self.prop_not()?;
        while self.eat(b'&') {
            let right = self.prop_not()?;
            left = PropFormula::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn prop_not(&mut self) -> Result<PropFormula, RegexError> {
        if self.eat(b'!') {
            Ok(PropFormula::Not(Box::new(self.prop_not()?)))
        } else {
            self.prop_atom()
        }
    }

    fn prop_atom(&mut self) -> Result<PropFormula, RegexError> {
        match self.peek() {
            Some(b'(') => self.paren_prop(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let word = self.ident().expect("peeked an identifier start");
                match word.as_str() {
                    "true" => Ok(PropFormula::True),
                    "false" => Ok(PropFormula::False),
                    "eps" => Err(self.err("`eps` is not a propositional formula")),
                    _ => Ok(PropFormula::Atom(word)),
                }
            }
            _ => Err(self.err("expected a propositional formula")),
        }
    }
}

/// A propositional test with atoms resolved to proposition indices.
#[derive(Clone, PartialEq, Eq, Debug)]
enum Guard {
    True,
    False,
    Prop(usize),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    fn eval(&self, labels: LabelSet) -> bool {
        match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Prop(i) => labels.contains(*i),
            Guard::Not(a) => !a.eval(labels),
            Guard::And(a, b) => a.eval(labels) && b.eval(labels),
            Guard::Or(a, b) => a.eval(labels) || b.eval(labels),
        }
    }
}

#[derive(Debug)]
enum ThompsonEdge {
    Eps(usize),
    Step(Guard, usize),
}

/// A complete nondeterministic finite automaton over label-set letters.
///
/// Built from an expression by the standard construction with silent moves,
/// silent-move elimination keeping every state, and a trap-state completion,
/// so the state count is at most twice the expression size plus one. Every
/// state has at least one transition enabled on every letter.
#[derive(Debug)]
pub struct Nfa {
    n_states: usize,
    start: usize,
    accepting: Vec<bool>,
    transitions: Vec<Vec<(Guard, usize)>>,
    sink: usize,
}

impl Nfa {
    /// Compiles `expr`, resolving atom names through `props`.
    pub fn compile(expr: &RegExpr, props: &[String]) -> Result<Nfa, RegexError> {
        let mut edges: Vec<Vec<ThompsonEdge>> = Vec::new();
        let (start, accept) = build_thompson(expr, props, &mut edges)?;
        let n = edges.len();

        let mut closures: Vec<Vec<usize>> = Vec::with_capacity(n);
        for q in 0..n {
            let mut seen = vec![false; n];
            let mut stack = vec![q];
            seen[q] = true;
            let mut closure = Vec::new();
            while let Some(s) = stack.pop() {
                closure.push(s);
                for e in &edges[s] {
                    if let ThompsonEdge::Eps(t) = e {
                        if !seen[*t] {
                            seen[*t] = true;
                            stack.push(*t);
                        }
                    }
                }
            }
            closure.sort_unstable();
            closures.push(closure);
        }

        let mut accepting = vec![false; n + 1];
        let mut transitions: Vec<Vec<(Guard, usize)>> = vec![Vec::new(); n + 1];
        for q in 0..n {
            accepting[q] = closures[q].contains(&accept);
            for &c in &closures[q] {
                for e in &edges[c] {
                    if let ThompsonEdge::Step(g, t) = e {
                        let pair = (g.clone(), *t);
                        if !transitions[q].contains(&pair) {
                            transitions[q].push(pair);
                        }
                    }
                }
            }
        }

        let sink = n;
        for row in &mut transitions {
            let uncovered = row
                .iter()
                .map(|(g, _)| g.clone())
                .reduce(|a, b| Guard::Or(Box::new(a), Box::new(b)))
                .map_or(Guard::True, |d| Guard::Not(Box::new(d)));
            row.push((uncovered, sink));
        }

        Ok(Nfa {
            n_states: n + 1,
            start,
            accepting,
            transitions,
            sink,
        })
    }

    pub fn state_count(&self) -> usize {
        self.n_states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    /// Accepting state indices, ascending.
    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.n_states).filter(|&q| self.accepting[q]).collect()
    }

    /// Successors of `q` on `letter`, in transition order with duplicates
    /// removed.
    pub fn step(&self, q: usize, letter: LabelSet) -> Vec<usize> {
        let mut out = Vec::new();
        for (g, t) in &self.transitions[q] {
            if g.eval(letter) && !out.contains(t) {
                out.push(*t);
            }
        }
        out
    }

    /// The one-letter transition relation as a boolean matrix.
    pub(crate) fn step_matrix(&self, letter: LabelSet) -> BitMatrix {
        let mut m = BitMatrix::zero(self.n_states);
        for (q, row) in self.transitions.iter().enumerate() {
            for (g, t) in row {
                if g.eval(letter) {
                    m.set(q, *t);
                }
            }
        }
        m
    }

    /// Whether the automaton accepts the word.
    pub fn accepts(&self, word: &[LabelSet]) -> bool {
        let mut current = vec![false; self.n_states];
        current[self.start] = true;
        for &letter in word {
            let mut next = vec![false; self.n_states];
            for (q, &live) in current.iter().enumerate() {
                if live {
                    for (g, t) in &self.transitions[q] {
                        if g.eval(letter) {
                            next[*t] = true;
                        }
                    }
                }
            }
            current = next;
        }
        current
            .iter()
            .zip(&self.accepting)
            .any(|(&live, &acc)| live && acc)
    }
}

fn build_thompson(
    expr: &RegExpr,
    props: &[String],
    edges: &mut Vec<Vec<ThompsonEdge>>,
) -> Result<(usize, usize), RegexError> {
    let new_state = |edges: &mut Vec<Vec<ThompsonEdge>>| {
        edges.push(Vec::new());
        edges.len() - 1
    };
    match expr {
        RegExpr::Empty => {
            let s = new_state(edges);
            let a = new_state(edges);
            edges[s].push(ThompsonEdge::Eps(a));
            Ok((s, a))
        }
        RegExpr::Test(p) => {
            let g = p.compile(props)?;
            let s = new_state(edges);
            let a = new_state(edges);
            edges[s].push(ThompsonEdge::Step(g, a));
            Ok((s, a))
        }
        RegExpr::Union(l, r) => {
            let (sl, al) = build_thompson(l, props, edges)?;
            let (sr, ar) = build_thompson(r, props, edges)?;
            let s = new_state(edges);
            let a = new_state(edges);
            edges[s].push(ThompsonEdge::Eps(sl));
            edges[s].push(ThompsonEdge::Eps(sr));
            edges[al].push(ThompsonEdge::Eps(a));
            edges[ar].push(ThompsonEdge::Eps(a));
            Ok((s, a))
        }
        RegExpr::Concat(l, r) => {
            let (sl, al) = build_thompson(l, props, edges)?;
            let (sr, ar) = build_thompson(r, props, edges)?;
            edges[al].push(ThompsonEdge::Eps(sr));
            Ok((sl, ar))
        }
        RegExpr::Star(c) => {
            let (sc, ac) = build_thompson(c, props, edges)?;
            let s = new_state(edges);
            let a = new_state(edges);
            edges[s].push(ThompsonEdge::Eps(sc));
            edges[s].push(ThompsonEdge::Eps(a));
            edges[ac].push(ThompsonEdge::Eps(sc));
            edges[ac].push(ThompsonEdge::Eps(a));
            Ok((s, a))
        }
    }
}
