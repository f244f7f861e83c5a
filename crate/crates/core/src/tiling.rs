//! Hardness-instance generator and word-encoding validators.
//!
//! An alternating multi-tiling instance describes grids of side `2^n`
//! whose cells carry domino types constrained by horizontal, vertical,
//! and cross-component matching relations. The instance induces a Kripke
//! structure whose states are the encoding alphabet itself: every domino,
//! the four counter bits `r_0 r_1 c_0 c_1`, the delimiter `bot`, and the
//! final marker `end`, each labeled with its own name, with an edge from
//! every non-`end` state to every state. Traces of that structure spell
//! arbitrary words over the alphabet in which `end` appears only as the
//! last letter, so the word-level validators below classify trace
//! labelings directly.
//!
//! The validators decode the layered encodings: fixed-width multi-cell
//! codes carrying an `n`-domino column of contents plus row and column
//! counters, grid-wide multi-tiling codes, per-component initialization
//! codes, and the `bot`-delimited assembly that ties a grid to its `n`
//! initialization codes. Each validator reports the first violated
//! requirement by name.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::kripke::{KripkeStructure, LabelSet};
use crate::relang::RESERVED_WORDS;

/// Largest supported grid exponent; keeps `2^n` counters inside `u64`.
pub const MAX_N: usize = 32;

/// State names reserved for the encoding alphabet.
const ALPHABET_TAIL: [&str; 6] = ["r_0", "r_1", "c_0", "c_1", "bot", "end"];

/// Reasons an instance cannot be built or parsed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TilingError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("the grid exponent must be even, positive, and at most {MAX_N}, got {0}")]
    BadExponent(usize),
    #[error("no domino types declared")]
    NoDominoes,
    #[error("domino name `{0}` is reserved or not an identifier")]
    BadDominoName(String),
    #[error("duplicate domino `{0}`")]
    DuplicateDomino(String),
    #[error("unknown domino `{0}`")]
    UnknownDomino(String),
    #[error("too many dominoes for the proposition space ({0})")]
    TooManyDominoes(usize),
}

/// An alternating multi-tiling instance.
#[derive(Clone, Debug)]
pub struct TilingInstance {
    n: usize,
    dominoes: Vec<String>,
    initial: HashSet<usize>,
    horizontal: HashSet<(usize, usize)>,
    vertical: HashSet<(usize, usize)>,
    multi: HashSet<(usize, usize)>,
    accepting: HashSet<usize>,
}

/// One letter of the encoding alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    /// A domino type, by index into the instance's domino list.
    Domino(usize),
    /// One row-counter bit.
    Row(bool),
    /// One column-counter bit.
    Col(bool),
    /// The block delimiter.
    Bot,
    /// The final marker.
    End,
}

/// Verdict of a word validator: the decoded value or the name of the
/// first violated requirement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classified<T> {
    Valid(T),
    Invalid(&'static str),
}

impl<T> Classified<T> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Classified::Valid(_))
    }

    /// The violated requirement, if any.
    pub fn defect(&self) -> Option<&'static str> {
        match self {
            Classified::Valid(_) => None,
            Classified::Invalid(reason) => Some(reason),
        }
    }
}

/// A decoded multi-cell code: one grid position with the contents of all
/// `n` components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCell {
    pub row: u64,
    pub col: u64,
    /// Domino indices `d_1 .. d_n`, one per component.
    pub content: Vec<usize>,
}

/// A decoded initial cell code: one column of the first row of a single
/// component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialCell {
    pub col: u64,
    pub content: usize,
}

impl TilingInstance {
    pub fn new(
        n: usize,
        dominoes: &[&str],
        initial: &[&str],
        horizontal: &[(&str, &str)],
        vertical: &[(&str, &str)],
        multi: &[(&str, &str)],
        accepting: &[&str],
    ) -> Result<TilingInstance, TilingError> {
        if n == 0 || !n.is_multiple_of(2) || n > MAX_N {
            return Err(TilingError::BadExponent(n));
        }
        if dominoes.is_empty() {
            return Err(TilingError::NoDominoes);
        }
        if dominoes.len() + ALPHABET_TAIL.len() > 64 {
            return Err(TilingError::TooManyDominoes(dominoes.len()));
        }
        let mut names = Vec::with_capacity(dominoes.len());
        for name in dominoes {
            if !is_usable_name(name) {
                return Err(TilingError::BadDominoName((*name).into()));
            }
            if names.iter().any(|known: &String| known == name) {
                return Err(TilingError::DuplicateDomino((*name).into()));
            }
            names.push((*name).to_string());
        }
        let index = |name: &str| -> Result<usize, TilingError> {
            names
                .iter()
                .position(|known| known == name)
                .ok_or_else(|| TilingError::UnknownDomino(name.into()))
        };
        let set = |items: &[&str]| -> Result<HashSet<usize>, TilingError> {
            items.iter().map(|name| index(name)).collect()
        };
        let pairs = |items: &[(&str, &str)]| -> Result<HashSet<(usize, usize)>, TilingError> {
            items
                .iter()
                .map(|(a, b)| Ok((index(a)?, index(b)?)))
                .collect()
        };
        Ok(TilingInstance {
            n,
            initial: set(initial)?,
            horizontal: pairs(horizontal)?,
            vertical: pairs(vertical)?,
            multi: pairs(multi)?,
            accepting: set(accepting)?,
            dominoes: names,
        })
    }

    /// Grid exponent: rows and columns range over `[0, 2^n - 1]`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length of the grid.
    pub fn side(&self) -> u64 {
        1u64 << self.n
    }

    pub fn domino_count(&self) -> usize {
        self.dominoes.len()
    }

    pub fn domino_name(&self, d: usize) -> &str {
        &self.dominoes[d]
    }

    pub fn domino_index(&self, name: &str) -> Option<usize> {
        self.dominoes.iter().position(|known| known == name)
    }

    pub fn is_initial(&self, d: usize) -> bool {
        self.initial.contains(&d)
    }

    pub fn is_accepting(&self, d: usize) -> bool {
        self.accepting.contains(&d)
    }

    pub fn horizontal_ok(&self, a: usize, b: usize) -> bool {
        self.horizontal.contains(&(a, b))
    }

    pub fn vertical_ok(&self, a: usize, b: usize) -> bool {
        self.vertical.contains(&(a, b))
    }

    pub fn multi_ok(&self, a: usize, b: usize) -> bool {
        self.multi.contains(&(a, b))
    }
}

fn is_usable_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    head_ok
        && tail_ok
        && !ALPHABET_TAIL.contains(&name)
        && !RESERVED_WORDS.contains(&name)
}

/// Parses the line-based instance format:
///
/// ```text
/// n: 2
/// dominoes: a b
/// initial: a
/// H: a b / b a
/// V: a a
/// M: a b
/// accepting: b
/// ```
///
/// Relation lines list pairs separated by `/`; `#` starts a comment.
pub fn parse_instance(text: &str) -> Result<TilingInstance, TilingError> {
    type PairLines<'a> = HashMap<&'a str, (usize, Vec<(String, String)>)>;
    let mut n = None;
    let mut dominoes: Option<Vec<String>> = None;
    let mut singles: HashMap<&str, (usize, Vec<String>)> = HashMap::new();
    let mut relations: PairLines = HashMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(':').ok_or_else(|| TilingError::Syntax {
            line,
            msg: "expected `key: values`".into(),
        })?;
        let key = key.trim();
        let rest = rest.trim();
        let words = |text: &str| -> Vec<String> {
            text.split_whitespace().map(str::to_string).collect()
        };
        match key {
            "n" => {
                let value = rest.parse::<usize>().map_err(|_| TilingError::Syntax {
                    line,
                    msg: format!("bad grid exponent `{rest}`"),
                })?;
                n = Some(value);
            }
            "dominoes" => dominoes = Some(words(rest)),
            "initial" | "accepting" => {
                singles.insert(key, (line, words(rest)));
            }
            "H" | "V" | "M" => {
                let mut pairs = Vec::new();
                for chunk in rest.split('/') {
                    let chunk = chunk.trim();
                    if chunk.is_empty() {
                        continue;
                    }
                    let mut parts = chunk.split_whitespace();
                    match (parts.next(), parts.next(), parts.next()) {
                        (Some(a), Some(b), None) => pairs.push((a.to_string(), b.to_string())),
                        _ => {
                            return Err(TilingError::Syntax {
                                line,
                                msg: format!("expected `a b` pairs separated by `/`, got `{chunk}`"),
                            })
                        }
                    }
                }
                relations.insert(key, (line, pairs));
            }
            other => {
                return Err(TilingError::Syntax {
                    line,
                    msg: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let n = n.ok_or_else(|| TilingError::Syntax {
        line: 0,
        msg: "missing `n:` directive".into(),
    })?;
    let dominoes = dominoes.ok_or_else(|| TilingError::Syntax {
        line: 0,
        msg: "missing `dominoes:` directive".into(),
    })?;
    let domino_refs: Vec<&str> = dominoes.iter().map(String::as_str).collect();
    let single = |key: &str| -> Vec<String> {
        singles.get(key).map(|(_, v)| v.clone()).unwrap_or_default()
    };
    let relation = |key: &str| -> Vec<(String, String)> {
        relations.get(key).map(|(_, v)| v.clone()).unwrap_or_default()
    };
    let initial = single("initial");
    let accepting = single("accepting");
    let horizontal = relation("H");
    let vertical = relation("V");
    let multi = relation("M");
    fn as_refs(items: &[String]) -> Vec<&str> {
        items.iter().map(String::as_str).collect()
    }
    fn as_pair_refs(items: &[(String, String)]) -> Vec<(&str, &str)> {
        items.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
    }
    TilingInstance::new(
        n,
        &domino_refs,
        &as_refs(&initial),
        &as_pair_refs(&horizontal),
        &as_pair_refs(&vertical),
        &as_pair_refs(&multi),
        &as_refs(&accepting),
    )
}

/// Builds the Kripke structure induced by an instance: one state per
/// alphabet letter labeled with its own name, initial state `end` with no
/// successors, and every other state connected to everything.
pub fn gen_kripke(inst: &TilingInstance) -> KripkeStructure {
    let mut names: Vec<String> = inst.dominoes.clone();
    names.extend(ALPHABET_TAIL.iter().map(|s| s.to_string()));
    let count = names.len();
    let labels: Vec<LabelSet> = (0..count).map(|i| LabelSet::EMPTY.with(i)).collect();
    let end = count - 1;
    let mut edges = Vec::with_capacity((count - 1) * count);
    for s in 0..count {
        if s == end {
            continue;
        }
        for t in 0..count {
            edges.push((s, t));
        }
    }
    KripkeStructure::new(names.clone(), names, labels, edges, end)
        .expect("the alphabet structure is valid by construction")
}

fn decode_bits(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
}

/// Classifies a single multi-cell code: `n` dominoes, `n` row bits, `n`
/// column bits, with consecutive contents related by the cross-component
/// matching relation. Counters read the first bit as most significant.
pub fn validate_multicell(inst: &TilingInstance, word: &[Letter]) -> Classified<MultiCell> {
    let n = inst.n;
    if word.len() != 3 * n {
        return Classified::Invalid("length");
    }
    let mut content = Vec::with_capacity(n);
    for letter in &word[..n] {
        match letter {
            Letter::Domino(d) if *d < inst.domino_count() => content.push(*d),
            _ => return Classified::Invalid("shape"),
        }
    }
    let mut row_bits = Vec::with_capacity(n);
    for letter in &word[n..2 * n] {
        match letter {
            Letter::Row(b) => row_bits.push(*b),
            _ => return Classified::Invalid("shape"),
        }
    }
    let mut col_bits = Vec::with_capacity(n);
    for letter in &word[2 * n..] {
        match letter {
            Letter::Col(b) => col_bits.push(*b),
            _ => return Classified::Invalid("shape"),
        }
    }
    for pair in content.windows(2) {
        if !inst.multi_ok(pair[0], pair[1]) {
            return Classified::Invalid("multi-cell M-coherence");
        }
    }
    Classified::Valid(MultiCell {
        row: decode_bits(&row_bits),
        col: decode_bits(&col_bits),
        content,
    })
}

/// Classifies a full-grid encoding: a concatenation of well-formed
/// multi-cell codes that covers every grid position, assigns positions
/// unique contents, respects the horizontal relation along rows and the
/// vertical relation along columns, and places an accepting domino in the
/// last component somewhere on the last row.
pub fn validate_multitiling_code(
    inst: &TilingInstance,
    word: &[Letter],
) -> Classified<Vec<MultiCell>> {
    let block = 3 * inst.n;
    if word.is_empty() || !word.len().is_multiple_of(block) {
        return Classified::Invalid("length");
    }
    let mut cells = Vec::with_capacity(word.len() / block);
    for chunk in word.chunks(block) {
        match validate_multicell(inst, chunk) {
            Classified::Valid(cell) => cells.push(cell),
            Classified::Invalid(reason) => return Classified::Invalid(reason),
        }
    }
    let side = inst.side();
    let positions: HashSet<(u64, u64)> = cells.iter().map(|c| (c.row, c.col)).collect();
    if positions.len() as u128 != u128::from(side) * u128::from(side) {
        return Classified::Invalid("completeness requirement");
    }
    let mut grid: HashMap<(u64, u64), &[usize]> = HashMap::new();
    for cell in &cells {
        match grid.entry((cell.row, cell.col)) {
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(&cell.content);
            }
            std::collections::hash_map::Entry::Occupied(slot) => {
                if *slot.get() != cell.content.as_slice() {
                    return Classified::Invalid("uniqueness requirement");
                }
            }
        }
    }
    for (&(row, col), &content) in &grid {
        if col + 1 < side {
            let right = grid[&(row, col + 1)];
            for (a, b) in content.iter().zip(right) {
                if !inst.horizontal_ok(*a, *b) {
                    return Classified::Invalid("row-adjacency requirement");
                }
            }
        }
    }
    for (&(row, col), &content) in &grid {
        if row + 1 < side {
            let below = grid[&(row + 1, col)];
            for (a, b) in content.iter().zip(below) {
                if !inst.vertical_ok(*a, *b) {
                    return Classified::Invalid("column-adjacency requirement");
                }
            }
        }
    }
    let accepted = cells.iter().any(|cell| {
        cell.row == side - 1 && cell.content.last().is_some_and(|&d| inst.is_accepting(d))
    });
    if !accepted {
        return Classified::Invalid("acceptance requirement");
    }
    Classified::Valid(cells)
}

/// Classifies one component's first-row encoding: a concatenation of
/// initial cell codes, one initial-domino content plus a column counter
/// each, covering every column with a unique content per column.
pub fn validate_initialization_code(
    inst: &TilingInstance,
    word: &[Letter],
) -> Classified<Vec<InitialCell>> {
    let n = inst.n;
    let block = n + 1;
    if word.is_empty() || !word.len().is_multiple_of(block) {
        return Classified::Invalid("length");
    }
    let mut cells = Vec::with_capacity(word.len() / block);
    for chunk in word.chunks(block) {
        let content = match chunk[0] {
            Letter::Domino(d) if d < inst.domino_count() => d,
            _ => return Classified::Invalid("shape"),
        };
        if !inst.is_initial(content) {
            return Classified::Invalid("initial domino");
        }
        let mut bits = Vec::with_capacity(n);
        for letter in &chunk[1..] {
            match letter {
                Letter::Col(b) => bits.push(*b),
                _ => return Classified::Invalid("shape"),
            }
        }
        cells.push(InitialCell {
            col: decode_bits(&bits),
            content,
        });
    }
    let columns: HashSet<u64> = cells.iter().map(|c| c.col).collect();
    if columns.len() as u128 != u128::from(inst.side()) {
        return Classified::Invalid("column completeness");
    }
    let mut seen: HashMap<u64, usize> = HashMap::new();
    for cell in &cells {
        if *seen.entry(cell.col).or_insert(cell.content) != cell.content {
            return Classified::Invalid("column uniqueness");
        }
    }
    Classified::Valid(cells)
}

/// Classifies the complete assembly: a delimiter, the multi-tiling code,
/// then one delimited initialization code per component from the last
/// down to the first, closed by the final marker. Every first-row cell of
/// the grid must agree, component by component, with the initialization
/// codes.
pub fn validate_initialized_code(inst: &TilingInstance, word: &[Letter]) -> Classified<()> {
    let n = inst.n;
    if word.first() != Some(&Letter::Bot) || word.last() != Some(&Letter::End) {
        return Classified::Invalid("shape");
    }
    let body = &word[..word.len() - 1];
    if body.contains(&Letter::End) {
        return Classified::Invalid("shape");
    }
    let delimiters: Vec<usize> = body
        .iter()
        .enumerate()
        .filter_map(|(i, l)| (*l == Letter::Bot).then_some(i))
        .collect();
    if delimiters.len() != n + 1 {
        return Classified::Invalid("shape");
    }
    let mut bounds = delimiters;
    bounds.push(body.len());
    let segments: Vec<&[Letter]> = bounds
        .windows(2)
        .map(|pair| &body[pair[0] + 1..pair[1]])
        .collect();
    let grid_cells = match validate_multitiling_code(inst, segments[0]) {
        Classified::Valid(cells) => cells,
        Classified::Invalid(reason) => return Classified::Invalid(reason),
    };
    let mut components: Vec<Vec<InitialCell>> = Vec::with_capacity(n);
    for segment in &segments[1..] {
        match validate_initialization_code(inst, segment) {
            Classified::Valid(cells) => components.push(cells),
            Classified::Invalid(reason) => return Classified::Invalid(reason),
        }
    }
    components.reverse();
    for cell in grid_cells.iter().filter(|cell| cell.row == 0) {
        for (component, &content) in components.iter().zip(&cell.content) {
            let matched = component
                .iter()
                .any(|init| init.col == cell.col && init.content == content);
            if !matched {
                return Classified::Invalid("initialization coherence requirement");
            }
        }
    }
    Classified::Valid(())
}

/// Encodes one multi-cell code with the given position and contents.
pub fn encode_multicell(inst: &TilingInstance, row: u64, col: u64, content: &[usize]) -> Vec<Letter> {
    let n = inst.n;
    debug_assert_eq!(content.len(), n);
    debug_assert!(row < inst.side() && col < inst.side());
    let mut word: Vec<Letter> = content.iter().map(|&d| Letter::Domino(d)).collect();
    word.extend((0..n).rev().map(|k| Letter::Row(row >> k & 1 == 1)));
    word.extend((0..n).rev().map(|k| Letter::Col(col >> k & 1 == 1)));
    word
}

/// Encodes one initial cell code for the given column and content.
pub fn encode_initial_cell(inst: &TilingInstance, col: u64, content: usize) -> Vec<Letter> {
    let n = inst.n;
    debug_assert!(col < inst.side());
    let mut word = vec![Letter::Domino(content)];
    word.extend((0..n).rev().map(|k| Letter::Col(col >> k & 1 == 1)));
    word
}
