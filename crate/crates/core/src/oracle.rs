//! A direct bounded evaluator for the full six-modality logic.
//!
//! Every clause of the trace semantics is implemented literally: prefix and
//! suffix modalities range over the trace's own parts, extension and anchor
//! modalities range over all traces of the structure up to a fixed length
//! bound. Nothing is summarized or contracted, so this evaluator serves as
//! the reference the certificate-based checker is validated against. A
//! structure satisfies a formula when every trace starting at the initial
//! state (up to the bound) does.

use std::collections::HashMap;
use std::rc::Rc;

use crate::hsformula::{Formula, Modality};
use crate::kripke::{label_word_unchecked, KripkeStructure, StateId, Trace};
use crate::relang::{Nfa, RegExpr, RegexError};

/// Identifier of a formula registered with an oracle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FormulaId(u32);

/// Verdict of a structure-level oracle check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OracleOutcome {
    pub satisfied: bool,
    /// The shortest failing initial trace (first in state order among those
    /// of its length) when unsatisfied.
    pub counterexample: Option<Trace>,
}

#[derive(Clone, Copy)]
enum Node {
    Atom(usize),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Diamond(Modality, u32),
    Box(Modality, u32),
}

/// Bounded-depth evaluator over one structure, sharing work across formulas.
pub struct BoundedOracle<'k> {
    k: &'k KripkeStructure,
    max_len: usize,
    nodes: Vec<Node>,
    formula_ids: HashMap<Formula, u32>,
    nfas: Vec<Nfa>,
    atom_ids: HashMap<RegExpr, usize>,
    traces: Vec<Trace>,
    trace_ids: HashMap<Vec<StateId>, u32>,
    memo: Vec<Vec<u8>>,
    right_ext: HashMap<u32, Rc<Vec<u32>>>,
    left_ext: HashMap<u32, Rc<Vec<u32>>>,
    from_state: HashMap<StateId, Rc<Vec<u32>>>,
    to_state: HashMap<StateId, Rc<Vec<u32>>>,
}

impl<'k> BoundedOracle<'k> {
    /// Creates an evaluator considering traces of at most `max_len` states.
    pub fn new(k: &'k KripkeStructure, max_len: usize) -> BoundedOracle<'k> {
        assert!(max_len >= 1, "the trace bound must allow one-state traces");
        BoundedOracle {
            k,
            max_len,
            nodes: Vec::new(),
            formula_ids: HashMap::new(),
            nfas: Vec::new(),
            atom_ids: HashMap::new(),
            traces: Vec::new(),
            trace_ids: HashMap::new(),
            memo: Vec::new(),
            right_ext: HashMap::new(),
            left_ext: HashMap::new(),
            from_state: HashMap::new(),
            to_state: HashMap::new(),
        }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Registers a formula, compiling any atoms not seen before. Structurally
    /// equal subformulas share evaluations.
    pub fn add_formula(&mut self, f: &Formula) -> Result<FormulaId, RegexError> {
        let id = self.intern_formula(f)?;
        Ok(FormulaId(id))
    }

    fn intern_formula(&mut self, f: &Formula) -> Result<u32, RegexError> {
        if let Some(&id) = self.formula_ids.get(f) {
            return Ok(id);
        }
        let node = match f {
            Formula::Atom(r) => {
                let idx = match self.atom_ids.get(r) {
                    Some(&idx) => idx,
                    None => {
                        let nfa = Nfa::compile(r, self.k.props())?;
                        self.nfas.push(nfa);
                        let idx = self.nfas.len() - 1;
                        self.atom_ids.insert(r.clone(), idx);
                        idx
                    }
                };
                Node::Atom(idx)
            }
            Formula::Not(a) => Node::Not(self.intern_formula(a)?),
            Formula::And(a, b) => {
                Node::And(self.intern_formula(a)?, self.intern_formula(b)?)
            }
            Formula::Or(a, b) => Node::Or(self.intern_formula(a)?, self.intern_formula(b)?),
            Formula::Diamond(m, a) => Node::Diamond(*m, self.intern_formula(a)?),
            Formula::Box(m, a) => Node::Box(*m, self.intern_formula(a)?),
        };
        let id = u32::try_from(self.nodes.len()).expect("formula table fits in u32");
        self.nodes.push(node);
        self.memo.push(Vec::new());
        self.formula_ids.insert(f.clone(), id);
        Ok(id)
    }

    fn intern_trace(&mut self, steps: Vec<StateId>) -> u32 {
        if let Some(&id) = self.trace_ids.get(&steps) {
            return id;
        }
        let id = u32::try_from(self.traces.len()).expect("trace table fits in u32");
        self.trace_ids.insert(steps.clone(), id);
        self.traces.push(Trace::new(self.k, steps).expect("oracle traces follow edges"));
        id
    }

    /// Whether `trace` satisfies the registered formula.
    pub fn holds_on(&mut self, id: FormulaId, trace: &Trace) -> bool {
        let tid = self.intern_trace(trace.steps().to_vec());
        self.eval(id.0, tid)
    }

    /// Whether every initial trace up to the bound satisfies the formula.
    pub fn check(&mut self, id: FormulaId) -> OracleOutcome {
        let initials = self.traces_from(self.k.initial());
        for tid in initials.iter().copied() {
            if !self.eval(id.0, tid) {
                return OracleOutcome {
                    satisfied: false,
                    counterexample: Some(self.traces[tid as usize].clone()),
                };
            }
        }
        OracleOutcome { satisfied: true, counterexample: None }
    }

    fn eval(&mut self, fid: u32, tid: u32) -> bool {
        {
            let row = &mut self.memo[fid as usize];
            if row.len() <= tid as usize {
                row.resize(self.traces.len().max(tid as usize + 1), 0);
            }
            match row[tid as usize] {
                1 => return false,
                2 => return true,
                _ => {}
            }
        }
        let value = match self.nodes[fid as usize] {
            Node::Atom(idx) => {
                let word = label_word_unchecked(self.k, &self.traces[tid as usize]);
                self.nfas[idx].accepts(&word)
            }
            Node::Not(a) => !self.eval(a, tid),
            Node::And(a, b) => self.eval(a, tid) && self.eval(b, tid),
            Node::Or(a, b) => self.eval(a, tid) || self.eval(b, tid),
            Node::Diamond(m, a) => {
                let mut found = false;
                for cand in self.candidates(m, tid) {
                    if self.eval(a, cand) {
                        found = true;
                        break;
                    }
                }
                found
            }
            Node::Box(m, a) => {
                let mut all = true;
                for cand in self.candidates(m, tid) {
                    if !self.eval(a, cand) {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        let row = &mut self.memo[fid as usize];
        if row.len() <= tid as usize {
            row.resize(tid as usize + 1, 0);
        }
        row[tid as usize] = if value { 2 } else { 1 };
        value
    }

    /// The traces the modality relates `tid` to, as interned identifiers.
    fn candidates(&mut self, m: Modality, tid: u32) -> Vec<u32> {
        let steps = self.traces[tid as usize].steps().to_vec();
        match m {
            Modality::B => (1..steps.len())
                .map(|len| self.intern_trace(steps[..len].to_vec()))
                .collect(),
            Modality::E => (1..steps.len())
                .map(|len| self.intern_trace(steps[steps.len() - len..].to_vec()))
                .collect(),
            Modality::BBar => self.right_extensions(tid).to_vec(),
            Modality::EBar => self.left_extensions(tid).to_vec(),
            Modality::A => self.traces_from(*steps.last().expect("non-empty")).to_vec(),
            Modality::ABar => self.traces_to(steps[0]).to_vec(),
        }
    }

    fn right_extensions(&mut self, tid: u32) -> Rc<Vec<u32>> {
        if let Some(list) = self.right_ext.get(&tid) {
            return Rc::clone(list);
        }
        let base = self.traces[tid as usize].steps().to_vec();
        let mut out = Vec::new();
        let mut layer = vec![base];
        while layer.first().is_some_and(|steps| steps.len() < self.max_len) {
            let mut next = Vec::new();
            for steps in &layer {
                for &succ in self.k.successors(*steps.last().expect("non-empty")) {
                    let mut longer = steps.clone();
                    longer.push(succ);
                    next.push(longer);
                }
            }
            for steps in &next {
                out.push(self.intern_trace(steps.clone()));
            }
            layer = next;
        }
        let list = Rc::new(out);
        self.right_ext.insert(tid, Rc::clone(&list));
        list
    }

    fn left_extensions(&mut self, tid: u32) -> Rc<Vec<u32>> {
        if let Some(list) = self.left_ext.get(&tid) {
            return Rc::clone(list);
        }
        let base = self.traces[tid as usize].steps().to_vec();
        let mut out = Vec::new();
        let mut layer = vec![base];
        while layer.first().is_some_and(|steps| steps.len() < self.max_len) {
            let mut next = Vec::new();
            for steps in &layer {
                for &pred in self.k.predecessors(steps[0]) {
                    let mut longer = Vec::with_capacity(steps.len() + 1);
                    longer.push(pred);
                    longer.extend_from_slice(steps);
                    next.push(longer);
                }
            }
            for steps in &next {
                out.push(self.intern_trace(steps.clone()));
            }
            layer = next;
        }
        let list = Rc::new(out);
        self.left_ext.insert(tid, Rc::clone(&list));
        list
    }

    /// All traces starting at `s`, shortest first and in state order within
    /// a length.
    fn traces_from(&mut self, s: StateId) -> Rc<Vec<u32>> {
        if let Some(list) = self.from_state.get(&s) {
            return Rc::clone(list);
        }
        let mut out = Vec::new();
        let mut layer = vec![vec![s]];
        loop {
            for steps in &layer {
                out.push(self.intern_trace(steps.clone()));
            }
            if layer.first().is_none_or(|steps| steps.len() >= self.max_len) {
                break;
            }
            let mut next = Vec::new();
            for steps in &layer {
                for &succ in self.k.successors(*steps.last().expect("non-empty")) {
                    let mut longer = steps.clone();
                    longer.push(succ);
                    next.push(longer);
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        let list = Rc::new(out);
        self.from_state.insert(s, Rc::clone(&list));
        list
    }

    /// All traces ending at `s`, shortest first.
    fn traces_to(&mut self, s: StateId) -> Rc<Vec<u32>> {
        if let Some(list) = self.to_state.get(&s) {
            return Rc::clone(list);
        }
        let mut out = Vec::new();
        let mut layer = vec![vec![s]];
        loop {
            for steps in &layer {
                out.push(self.intern_trace(steps.clone()));
            }
            if layer.first().is_none_or(|steps| steps.len() >= self.max_len) {
                break;
            }
            let mut next = Vec::new();
            for steps in &layer {
                for &pred in self.k.predecessors(steps[0]) {
                    let mut longer = Vec::with_capacity(steps.len() + 1);
                    longer.push(pred);
                    longer.extend_from_slice(steps);
                    next.push(longer);
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        let list = Rc::new(out);
        self.to_state.insert(s, Rc::clone(&list));
        list
    }
}

/// One-shot bounded check of a formula against a structure.
pub fn oracle_check(
    k: &KripkeStructure,
    formula: &Formula,
    max_len: usize,
) -> Result<OracleOutcome, RegexError> {
    let mut oracle = BoundedOracle::new(k, max_len);
    let id = oracle.add_formula(formula)?;
    Ok(oracle.check(id))
}
