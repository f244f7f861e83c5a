//! Finite Kripke structures, their traces, and the line-based model file format.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index into a structure's state table.
pub type StateId = usize;

/// Maximum number of propositions a structure may declare.
///
/// Label sets are stored as 64-bit masks, so the proposition table is capped.
pub const MAX_PROPS: usize = 64;

/// A set of propositions, stored as a bit mask relative to the owning
/// structure's proposition table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn with(self, prop: usize) -> LabelSet {
        debug_assert!(prop < MAX_PROPS);
        LabelSet(self.0 | 1 << prop)
    }

    pub fn contains(self, prop: usize) -> bool {
        prop < MAX_PROPS && self.0 >> prop & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Indices of the propositions in the set, ascending.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_PROPS).filter(move |&p| self.contains(p))
    }

    pub fn from_props(props: impl IntoIterator<Item = usize>) -> LabelSet {
        props.into_iter().fold(LabelSet::EMPTY, LabelSet::with)
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelSet{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// The word of state labels read along a trace.
pub type LabelWord = Vec<LabelSet>;

/// Errors arising from model files, structure construction, or trace validation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: undeclared state `{name}`")]
    UndeclaredState { line: usize, name: String },
    #[error("line {line}: undeclared proposition `{name}`")]
    UndeclaredProp { line: usize, name: String },
    #[error("line {line}: duplicate declaration of `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("missing initial state (no `init:` line)")]
    MissingInit,
    #[error("more than {MAX_PROPS} propositions declared")]
    TooManyProps,
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("trace error: {0}")]
    Trace(String),
}

/// A finite Kripke structure with a single designated initial state.
///
/// States and propositions are referred to by index; names are kept for
/// parsing and display. Iteration orders follow declaration order, so all
/// derived computations are deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KripkeStructure {
    props: Vec<String>,
    states: Vec<String>,
    labels: Vec<LabelSet>,
    edges: Vec<(StateId, StateId)>,
    successors: Vec<Vec<StateId>>,
    predecessors: Vec<Vec<StateId>>,
    initial: StateId,
}

impl KripkeStructure {
    /// Builds a structure from index-based parts, validating every invariant.
    pub fn new(
        props: Vec<String>,
        states: Vec<String>,
        labels: Vec<LabelSet>,
        edges: Vec<(StateId, StateId)>,
        initial: StateId,
    ) -> Result<KripkeStructure, ModelError> {
        if props.len() > MAX_PROPS {
            return Err(ModelError::TooManyProps);
        }
        if states.is_empty() {
            return Err(ModelError::Invalid("no states declared".into()));
        }
        if labels.len() != states.len() {
            return Err(ModelError::Invalid(format!(
                "{} states but {} label sets",
                states.len(),
                labels.len()
            )));
        }
        if initial >= states.len() {
            return Err(ModelError::Invalid(format!(
                "initial state index {initial} out of range"
            )));
        }
        for name in &props {
            if !is_identifier(name) {
                return Err(ModelError::Invalid(format!("bad proposition name `{name}`")));
            }
        }
        for name in &states {
            if !is_identifier(name) {
                return Err(ModelError::Invalid(format!("bad state name `{name}`")));
            }
        }
        let mut seen_props = std::collections::HashSet::new();
        for name in &props {
            if !seen_props.insert(name.as_str()) {
                return Err(ModelError::Invalid(format!("duplicate proposition `{name}`")));
            }
        }
        let mut seen_states = std::collections::HashSet::new();
        for name in &states {
            if !seen_states.insert(name.as_str()) {
                return Err(ModelError::Invalid(format!("duplicate state `{name}`")));
            }
        }
        let n = states.len();
        let mut dedup = Vec::new();
        let mut edge_seen = std::collections::HashSet::new();
        for &(s, t) in &edges {
            if s >= n || t >= n {
                return Err(ModelError::Invalid(format!("edge ({s},{t}) out of range")));
            }
            if edge_seen.insert((s, t)) {
                dedup.push((s, t));
            }
        }
        let mut successors = vec![Vec::new(); n];
        let mut predecessors = vec![Vec::new(); n];
        for &(s, t) in &dedup {
            successors[s].push(t);
            predecessors[t].push(s);
        }
        for list in successors.iter_mut().chain(predecessors.iter_mut()) {
            list.sort_unstable();
        }
        Ok(KripkeStructure {
            props,
            states,
            labels,
            edges: dedup,
            successors,
            predecessors,
            initial,
        })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn label(&self, s: StateId) -> LabelSet {
        self.labels[s]
    }

    pub fn edges(&self) -> &[(StateId, StateId)] {
        &self.edges
    }

    pub fn has_edge(&self, s: StateId, t: StateId) -> bool {
        self.successors[s].binary_search(&t).is_ok()
    }

    /// Successors of `s`, ascending by state index.
    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.successors[s]
    }

    /// Predecessors of `s`, ascending by state index.
    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        &self.predecessors[s]
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// The structure with every edge reversed; states, labels, and the
    /// initial state are unchanged.
    pub fn reverse(&self) -> KripkeStructure {
        let edges = self.edges.iter().map(|&(s, t)| (t, s)).collect();
        KripkeStructure::new(
            self.props.clone(),
            self.states.clone(),
            self.labels.clone(),
            edges,
            self.initial,
        )
        .expect("reversing a valid structure yields a valid structure")
    }

    /// Serializes to the model file format; `parse_model` inverts this.
    pub fn to_model_text(&self) -> String {
        let mut out = String::new();
        out.push_str("props:");
        for p in &self.props {
            out.push(' ');
            out.push_str(p);
        }
        out.push('\n');
        out.push_str("states:");
        for s in &self.states {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        out.push_str(&format!("init: {}\n", self.states[self.initial]));
        for &(s, t) in &self.edges {
            out.push_str(&format!("edge: {} {}\n", self.states[s], self.states[t]));
        }
        for (s, name) in self.states.iter().enumerate() {
            out.push_str(&format!("label {name}:"));
            for p in self.labels[s].iter() {
                out.push(' ');
                out.push_str(&self.props[p]);
            }
            out.push('\n');
        }
        out
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses the line-based model format.
///
/// Lines: `props: p q`, `states: s0 s1`, `init: s0`, `edge: s t`,
/// `label s: p q` (nothing after the colon assigns the empty set).
/// `#` starts a comment; blank lines are ignored. States without a label
/// line get the empty set.
pub fn parse_model(text: &str) -> Result<KripkeStructure, ModelError> {
    let mut props: Vec<String> = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut prop_idx: HashMap<String, usize> = HashMap::new();
    let mut state_idx: HashMap<String, usize> = HashMap::new();
    let mut init: Option<(usize, String)> = None;
    let mut edges: Vec<(StateId, StateId)> = Vec::new();
    let mut labels: HashMap<StateId, LabelSet> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = content.split_once(':').ok_or_else(|| ModelError::Syntax {
            line,
            msg: "expected a `<directive>:` line".into(),
        })?;
        let head = head.trim();
        let rest = rest.trim();
        match head {
            "props" => {
                for name in rest.split_whitespace() {
                    if !is_identifier(name) {
                        return Err(ModelError::Syntax {
                            line,
                            msg: format!("bad proposition name `{name}`"),
                        });
                    }
                    if prop_idx.contains_key(name) {
                        return Err(ModelError::Duplicate { line, name: name.into() });
                    }
                    prop_idx.insert(name.to_string(), props.len());
                    props.push(name.to_string());
                }
                if props.len() > MAX_PROPS {
                    return Err(ModelError::TooManyProps);
                }
            }
            "states" => {
                for name in rest.split_whitespace() {
                    if !is_identifier(name) {
                        return Err(ModelError::Syntax {
                            line,
                            msg: format!("bad state name `{name}`"),
                        });
                    }
                    if state_idx.contains_key(name) {
                        return Err(ModelError::Duplicate { line, name: name.into() });
                    }
                    state_idx.insert(name.to_string(), states.len());
                    states.push(name.to_string());
                }
            }
            "init" => {
                if init.is_some() {
                    return Err(ModelError::Syntax {
                        line,
                        msg: "repeated `init:` line".into(),
                    });
                }
                if rest.split_whitespace().count() != 1 {
                    return Err(ModelError::Syntax {
                        line,
                        msg: "`init:` takes exactly one state".into(),
                    });
                }
                init = Some((line, rest.to_string()));
            }
            "edge" => {
                let mut it = rest.split_whitespace();
                let (a, b) = match (it.next(), it.next(), it.next()) {
                    (Some(a), Some(b), None) => (a, b),
                    _ => {
                        return Err(ModelError::Syntax {
                            line,
                            msg: "`edge:` takes exactly two states".into(),
                        })
                    }
                };
                let s = *state_idx
                    .get(a)
                    .ok_or_else(|| ModelError::UndeclaredState { line, name: a.into() })?;
                let t = *state_idx
                    .get(b)
                    .ok_or_else(|| ModelError::UndeclaredState { line, name: b.into() })?;
                edges.push((s, t));
            }
            _ if head.starts_with("label") => {
                let name = head["label".len()..].trim();
                if name.is_empty() {
                    return Err(ModelError::Syntax {
                        line,
                        msg: "`label` needs a state name before the colon".into(),
                    });
                }
                let s = *state_idx
                    .get(name)
                    .ok_or_else(|| ModelError::UndeclaredState { line, name: name.into() })?;
                if labels.contains_key(&s) {
                    return Err(ModelError::Duplicate { line, name: name.into() });
                }
                let mut set = LabelSet::EMPTY;
                for p in rest.split_whitespace() {
                    let idx = *prop_idx
                        .get(p)
                        .ok_or_else(|| ModelError::UndeclaredProp { line, name: p.into() })?;
                    set = set.with(idx);
                }
                labels.insert(s, set);
            }
            _ => {
                return Err(ModelError::Syntax {
                    line,
                    msg: format!("unknown directive `{head}`"),
                })
            }
        }
    }

    let (init_line, init_name) = init.ok_or(ModelError::MissingInit)?;
    let initial = *state_idx.get(&init_name).ok_or(ModelError::UndeclaredState {
        line: init_line,
        name: init_name.clone(),
    })?;
    let label_vec = (0..states.len())
        .map(|s| labels.get(&s).copied().unwrap_or(LabelSet::EMPTY))
        .collect();
    KripkeStructure::new(props, states, label_vec, edges, initial)
}

/// A non-empty finite path through a structure, stored as state indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    steps: Vec<StateId>,
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trace{:?}", self.steps)
    }
}

impl Trace {
    /// Validates that `steps` is a non-empty path of `k` (consecutive states
    /// connected by edges).
    pub fn new(k: &KripkeStructure, steps: Vec<StateId>) -> Result<Trace, ModelError> {
        if steps.is_empty() {
            return Err(ModelError::Trace("a trace must be non-empty".into()));
        }
        for &s in &steps {
            if s >= k.state_count() {
                return Err(ModelError::Trace(format!("state index {s} out of range")));
            }
        }
        for w in steps.windows(2) {
            if !k.has_edge(w[0], w[1]) {
                return Err(ModelError::Trace(format!(
                    "no edge from {} to {}",
                    k.state_name(w[0]),
                    k.state_name(w[1])
                )));
            }
        }
        Ok(Trace { steps })
    }

    /// Builds a trace without validating it against a structure.
    pub(crate) fn from_steps(steps: Vec<StateId>) -> Trace {
        debug_assert!(!steps.is_empty());
        Trace { steps }
    }

    /// Parses a space-separated list of state names.
    pub fn parse(k: &KripkeStructure, text: &str) -> Result<Trace, ModelError> {
        let mut steps = Vec::new();
        for name in text.split_whitespace() {
            let s = k
                .state_index(name)
                .ok_or_else(|| ModelError::Trace(format!("unknown state `{name}`")))?;
            steps.push(s);
        }
        Trace::new(k, steps)
    }

    pub fn steps(&self) -> &[StateId] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> StateId {
        self.steps[0]
    }

    pub fn last(&self) -> StateId {
        *self.steps.last().expect("traces are non-empty")
    }

    /// The prefix keeping the first `len` states (1 <= len <= |trace|).
    pub fn prefix(&self, len: usize) -> Trace {
        debug_assert!(len >= 1 && len <= self.len());
        Trace::from_steps(self.steps[..len].to_vec())
    }

    /// The suffix keeping the last `len` states.
    pub fn suffix(&self, len: usize) -> Trace {
        debug_assert!(len >= 1 && len <= self.len());
        Trace::from_steps(self.steps[self.len() - len..].to_vec())
    }

    /// Proper prefixes, shortest first. Empty for length-1 traces.
    pub fn proper_prefixes(&self) -> impl Iterator<Item = Trace> + '_ {
        (1..self.len()).map(|n| self.prefix(n))
    }

    /// Proper suffixes, shortest first. Empty for length-1 traces.
    pub fn proper_suffixes(&self) -> impl Iterator<Item = Trace> + '_ {
        (1..self.len()).map(|n| self.suffix(n))
    }

    /// Concatenation gluing the shared endpoint: the last state of `self`
    /// must equal the first state of `other` and appears once in the result.
    pub fn star_concat(&self, other: &Trace) -> Result<Trace, ModelError> {
        if self.last() != other.first() {
            return Err(ModelError::Trace(format!(
                "star concatenation endpoint mismatch: {} vs {}",
                self.last(),
                other.first()
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps[1..]);
        Ok(Trace { steps })
    }

    /// The same steps in reverse order (a trace of the reversed structure).
    pub fn reversed(&self) -> Trace {
        let mut steps = self.steps.clone();
        steps.reverse();
        Trace { steps }
    }

    /// Space-separated state names.
    pub fn display(&self, k: &KripkeStructure) -> String {
        self.steps
            .iter()
            .map(|&s| k.state_name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The word of labels along `trace`, validated against `k`.
pub fn label_word(k: &KripkeStructure, trace: &Trace) -> Result<LabelWord, ModelError> {
    for &s in trace.steps() {
        if s >= k.state_count() {
            return Err(ModelError::Trace(format!("state index {s} out of range")));
        }
    }
    for w in trace.steps().windows(2) {
        if !k.has_edge(w[0], w[1]) {
            return Err(ModelError::Trace(format!(
                "no edge from {} to {}",
                k.state_name(w[0]),
                k.state_name(w[1])
            )));
        }
    }
    Ok(trace.steps().iter().map(|&s| k.label(s)).collect())
}

/// The label word without validation; callers must pass a trace of `k`.
pub(crate) fn label_word_unchecked(k: &KripkeStructure, trace: &Trace) -> LabelWord {
    trace.steps().iter().map(|&s| k.label(s)).collect()
}

#[cfg(test)]
pub(crate) fn k0() -> KripkeStructure {
    parse_model(
        "props: p q\nstates: s0 s1\ninit: s0\nedge: s0 s1\nedge: s1 s0\nedge: s1 s1\nlabel s0: p\nlabel s1: q\n",
    )
    .expect("K0 parses")
}
