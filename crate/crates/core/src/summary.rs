//! Trace summaries: the data a set of expression automata can observe about
//! a trace without seeing the trace itself.
//!
//! The summary of a trace records its first and last states together with,
//! for every automaton of the active expression set, the relation "state `q`
//! reaches state `q'` reading the labels of the trace with its first one
//! dropped". Dropping the first letter makes summaries compose under the
//! endpoint-gluing concatenation of traces: the relation of a concatenation
//! is the product of the relations of its parts. Whether the full label word
//! is accepted is still determined, because the first state is part of the
//! summary.
//!
//! Summaries are interned per context, so equality and hashing are constant
//! time and the identifier order is the order of first appearance.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::bits::BitMatrix;
use crate::kripke::{KripkeStructure, LabelSet, StateId, Trace};
use crate::relang::{Nfa, RegExpr, RegexError};

/// The compiled automata for the distinct atom expressions of a formula.
pub struct SpecSet {
    exprs: Vec<RegExpr>,
    nfas: Vec<Nfa>,
    offsets: Vec<usize>,
    accepting: Vec<Vec<usize>>,
    total_states: usize,
}

impl SpecSet {
    /// Compiles every expression against the proposition table.
    pub fn new(props: &[String], exprs: Vec<RegExpr>) -> Result<SpecSet, RegexError> {
        let mut nfas = Vec::with_capacity(exprs.len());
        let mut offsets = Vec::with_capacity(exprs.len());
        let mut accepting = Vec::with_capacity(exprs.len());
        let mut total = 0;
        for expr in &exprs {
            let nfa = Nfa::compile(expr, props)?;
            offsets.push(total);
            total += nfa.state_count();
            accepting.push(nfa.accepting_states());
            nfas.push(nfa);
        }
        Ok(SpecSet { exprs, nfas, offsets, accepting, total_states: total })
    }

    /// Number of expressions in the set.
    pub fn len(&self) -> usize {
        self.exprs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exprs.is_empty()
    }

    pub fn expr(&self, i: usize) -> &RegExpr {
        &self.exprs[i]
    }

    pub fn index_of(&self, expr: &RegExpr) -> Option<usize> {
        self.exprs.iter().position(|e| e == expr)
    }

    /// Combined size of the expressions.
    pub fn total_size(&self) -> usize {
        self.exprs.iter().map(|e| e.size()).sum()
    }

    /// One-letter transition relation of all automata side by side.
    fn step_matrix(&self, letter: LabelSet) -> BitMatrix {
        let mut m = BitMatrix::zero(self.total_states);
        for (nfa, &offset) in self.nfas.iter().zip(&self.offsets) {
            let local = nfa.step_matrix(letter);
            for q in 0..nfa.state_count() {
                for t in 0..nfa.state_count() {
                    if local.get(q, t) {
                        m.set(offset + q, offset + t);
                    }
                }
            }
        }
        m
    }
}

/// Interned summary identifier. Identifiers are only meaningful within the
/// context that produced them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Summary(u32);

#[derive(Clone, PartialEq, Eq, Hash)]
struct SummaryData {
    first: StateId,
    last: StateId,
    pi: BitMatrix,
}

struct Interner {
    step_cache: HashMap<LabelSet, Rc<BitMatrix>>,
    by_data: HashMap<SummaryData, Summary>,
    data: Vec<SummaryData>,
}

/// A summary-computation session for one structure and one expression set.
pub struct SummaryCtx<'k> {
    k: &'k KripkeStructure,
    spec: SpecSet,
    inner: RefCell<Interner>,
}

impl<'k> SummaryCtx<'k> {
    pub fn new(k: &'k KripkeStructure, spec: SpecSet) -> SummaryCtx<'k> {
        SummaryCtx {
            k,
            spec,
            inner: RefCell::new(Interner {
                step_cache: HashMap::new(),
                by_data: HashMap::new(),
                data: Vec::new(),
            }),
        }
    }

    pub fn structure(&self) -> &'k KripkeStructure {
        self.k
    }

    pub fn spec(&self) -> &SpecSet {
        &self.spec
    }

    /// Number of distinct summaries interned so far.
    pub fn summary_count(&self) -> usize {
        self.inner.borrow().data.len()
    }

    fn intern(&self, data: SummaryData) -> Summary {
        let mut inner = self.inner.borrow_mut();
        if let Some(&id) = inner.by_data.get(&data) {
            return id;
        }
        let id = Summary(u32::try_from(inner.data.len()).expect("summary table fits in u32"));
        inner.by_data.insert(data.clone(), id);
        inner.data.push(data);
        id
    }

    fn step_for(&self, letter: LabelSet) -> Rc<BitMatrix> {
        let mut inner = self.inner.borrow_mut();
        if let Some(m) = inner.step_cache.get(&letter) {
            return Rc::clone(m);
        }
        let m = Rc::new(self.spec.step_matrix(letter));
        inner.step_cache.insert(letter, Rc::clone(&m));
        m
    }

    /// Summary of the one-state trace at `s`.
    pub fn singleton(&self, s: StateId) -> Summary {
        self.intern(SummaryData {
            first: s,
            last: s,
            pi: BitMatrix::identity(self.spec.total_states),
        })
    }

    /// Summary of the trace extended on the right by `next`.
    pub fn extend(&self, sum: Summary, next: StateId) -> Summary {
        let step = self.step_for(self.k.label(next));
        let (first, pi) = {
            let inner = self.inner.borrow();
            let data = &inner.data[sum.0 as usize];
            (data.first, data.pi.mul(&step))
        };
        self.intern(SummaryData { first, last: next, pi })
    }

    /// Summary of the trace extended on the left by `prev`.
    pub fn extend_left(&self, sum: Summary, prev: StateId) -> Summary {
        let (old_first, last) = {
            let inner = self.inner.borrow();
            let data = &inner.data[sum.0 as usize];
            (data.first, data.last)
        };
        let step = self.step_for(self.k.label(old_first));
        let pi = {
            let inner = self.inner.borrow();
            step.mul(&inner.data[sum.0 as usize].pi)
        };
        self.intern(SummaryData { first: prev, last, pi })
    }

    /// Summary of the endpoint-gluing concatenation of two summarized
    /// traces; the last state of `a` must equal the first state of `b`.
    pub fn compose(&self, a: Summary, b: Summary) -> Summary {
        let data = {
            let inner = self.inner.borrow();
            let da = &inner.data[a.0 as usize];
            let db = &inner.data[b.0 as usize];
            assert_eq!(
                da.last, db.first,
                "composition requires matching endpoints"
            );
            SummaryData { first: da.first, last: db.last, pi: da.pi.mul(&db.pi) }
        };
        self.intern(data)
    }

    /// Summary of a whole trace.
    pub fn summary_of(&self, trace: &Trace) -> Summary {
        let mut sum = self.singleton(trace.first());
        for &s in &trace.steps()[1..] {
            sum = self.extend(sum, s);
        }
        sum
    }

    /// Summaries of all prefixes, shortest first; entry `i` summarizes the
    /// prefix of length `i + 1`.
    pub fn prefix_summaries(&self, trace: &Trace) -> Vec<Summary> {
        let mut out = Vec::with_capacity(trace.len());
        let mut sum = self.singleton(trace.first());
        out.push(sum);
        for &s in &trace.steps()[1..] {
            sum = self.extend(sum, s);
            out.push(sum);
        }
        out
    }

    pub fn first_state(&self, sum: Summary) -> StateId {
        self.inner.borrow().data[sum.0 as usize].first
    }

    pub fn last_state(&self, sum: Summary) -> StateId {
        self.inner.borrow().data[sum.0 as usize].last
    }

    /// Whether the label word of any trace with this summary is accepted by
    /// automaton `index` of the expression set.
    pub fn atom_true(&self, sum: Summary, index: usize) -> bool {
        let nfa = &self.spec.nfas[index];
        let offset = self.spec.offsets[index];
        let inner = self.inner.borrow();
        let data = &inner.data[sum.0 as usize];
        let first_label = self.k.label(data.first);
        let accepting = &self.spec.accepting[index];
        nfa.step(nfa.start(), first_label).iter().any(|&q1| {
            accepting
                .iter()
                .any(|&qf| data.pi.get(offset + q1, offset + qf))
        })
    }
}
