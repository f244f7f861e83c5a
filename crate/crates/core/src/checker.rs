//! Structure-level decision procedure built on certificate enumeration.
//!
//! A structure satisfies a formula when every trace starting at the initial
//! state does. The checker enumerates candidate traces from the initial
//! state and evaluates the formula on each, resolving modal obligations
//! through three kinds of searches: prefix walks within a stored trace,
//! extension streams that grow a trace to the right or to the left, and
//! anchored streams that enumerate traces starting or ending at a given
//! state.
//!
//! Two modes are available. With a length bound the enumeration is raw and
//! exhaustive up to the bound, and the verdict is marked incomplete unless
//! the bound already covers the worst-case certificate length. Without a
//! bound every newly grown candidate is contracted to its depth-`h`
//! sampling fixpoint and deduplicated, which keeps the candidate space
//! finite while preserving the truth of every subformula, so the verdict
//! is exact.
//!
//! Formulas using the suffix modality are decided on the reversed
//! structure: reversing every trace swaps prefixes with suffixes and right
//! extensions with left ones, so the mirrored formula over reversed atoms
//! has the same truth value. Formulas mixing prefix and suffix modalities
//! fall outside both supported fragments and are rejected.

use std::borrow::Cow;
use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::bisim::{certificate_bound, contract_counted};
use crate::hsformula::{Formula, Modality};
use crate::kripke::{KripkeStructure, StateId, Trace};
use crate::relang::{RegExpr, RegexError};
use crate::summary::{SpecSet, Summary, SummaryCtx};

/// Reasons a check cannot run.
#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Regex(#[from] RegexError),
    #[error("formulas mixing prefix and suffix modalities are not supported")]
    MixedFragment,
    #[error("the trace length bound must be at least 1")]
    InvalidBound,
    #[error("atom `{{{0}}}` is not in the session's expression pool")]
    AtomOutsidePool(String),
    #[error("suffix modalities need a one-shot check on the reversed structure")]
    SuffixInSession,
}

/// Counters describing the work one check performed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    /// Candidate traces produced by the certificate enumerators.
    pub certificates_explored: u64,
    /// Block removals performed while shrinking candidates.
    pub contractions: u64,
    /// Deepest nesting of extension searches that ran against the polarity
    /// of the question they answer.
    pub mode_switches: u64,
}

/// Outcome of a structure-level check.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub satisfied: bool,
    /// An initial trace falsifying the formula, when one was found.
    pub counterexample: Option<Trace>,
    /// Whether the verdict is exact rather than bounded.
    pub complete: bool,
    pub stats: CheckStats,
}

/// Decides whether every initial trace of `k` satisfies `formula`.
///
/// `max_trace_len = Some(l)` bounds the enumeration to raw traces of at
/// most `l` states; the verdict is then exact only when `l` reaches the
/// worst-case certificate length, and `complete` says which case holds.
/// `None` runs the contracted enumeration and always returns an exact
/// verdict.
pub fn model_check(
    k: &KripkeStructure,
    formula: &Formula,
    max_trace_len: Option<usize>,
) -> Result<Verdict, CheckError> {
    if max_trace_len == Some(0) {
        return Err(CheckError::InvalidBound);
    }
    let wants_suffixes = formula.mentions(Modality::E);
    if wants_suffixes && formula.mentions(Modality::B) {
        return Err(CheckError::MixedFragment);
    }
    let (structure, goal, dir): (Cow<'_, KripkeStructure>, Formula, Dir) = if wants_suffixes {
        (Cow::Owned(k.reverse()), formula.mirrored(), Dir::Backward)
    } else {
        (Cow::Borrowed(k), formula.clone(), Dir::Forward)
    };
    let atoms: Vec<RegExpr> = goal.atoms().into_iter().cloned().collect();
    let spec = SpecSet::new(structure.props(), atoms)?;
    let h = goal.depth_b();
    let exhaustive_len = certificate_bound(structure.state_count(), spec.total_size(), h);
    let (cap, complete) = match max_trace_len {
        None => (None, true),
        Some(l) if BigUint::from(l) >= exhaustive_len => (None, true),
        Some(l) => (Some(l), false),
    };
    let ctx = SummaryCtx::new(structure.as_ref(), spec);
    let mut engine = Engine::new(ctx, h, cap);
    let root = engine.intern_formula(&goal)?;
    let (satisfied, failing) = engine.check_root(root, structure.initial(), dir);
    let counterexample = failing.map(|tid| {
        let found = engine.traces[tid as usize].clone();
        if wants_suffixes {
            found.reversed()
        } else {
            found
        }
    });
    Ok(Verdict {
        satisfied,
        counterexample,
        complete,
        stats: engine.stats,
    })
}

/// A reusable bounded checker that shares memoized subformula results,
/// interned traces, and enumeration streams across many formulas over one
/// structure and one pool of interval expressions.
pub struct CheckSession<'k> {
    engine: Engine<'k>,
}

impl<'k> CheckSession<'k> {
    /// Builds a session over `k`; every formula checked later must draw
    /// its atoms from `pool`. Enumeration explores raw traces of at most
    /// `max_trace_len` states.
    pub fn new(
        k: &'k KripkeStructure,
        pool: &[RegExpr],
        max_trace_len: usize,
    ) -> Result<CheckSession<'k>, CheckError> {
        if max_trace_len == 0 {
            return Err(CheckError::InvalidBound);
        }
        let mut exprs: Vec<RegExpr> = Vec::new();
        for expr in pool {
            if !exprs.contains(expr) {
                exprs.push(expr.clone());
            }
        }
        let spec = SpecSet::new(k.props(), exprs)?;
        let ctx = SummaryCtx::new(k, spec);
        Ok(CheckSession {
            engine: Engine::new(ctx, 0, Some(max_trace_len)),
        })
    }

    /// Bounded verdict and first failing initial trace for one formula.
    pub fn check(&mut self, formula: &Formula) -> Result<(bool, Option<Trace>), CheckError> {
        if formula.mentions(Modality::E) {
            return Err(CheckError::SuffixInSession);
        }
        let root = self.engine.intern_formula(formula)?;
        let initial = self.engine.ctx.structure().initial();
        let (satisfied, failing) = self.engine.check_root(root, initial, Dir::Forward);
        let counterexample = failing.map(|tid| self.engine.traces[tid as usize].clone());
        Ok((satisfied, counterexample))
    }

    /// Work counters accumulated over every check run so far.
    pub fn stats(&self) -> &CheckStats {
        &self.engine.stats
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Dir {
    Forward,
    Backward,
}

#[derive(Clone, Copy)]
enum FNode {
    Atom(usize),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Diamond(Modality, u32),
    Box(Modality, u32),
}

/// One lazily grown breadth-first enumeration of candidate traces. The
/// frontier holds traces still to be extended; `yielded` records every
/// candidate in discovery order so that any number of consumers can scan
/// the same stream by index.
struct CertStream {
    frontier: VecDeque<u32>,
    seen: HashSet<u32>,
    yielded: Vec<u32>,
}

struct Engine<'k> {
    ctx: SummaryCtx<'k>,
    h: usize,
    cap: Option<usize>,
    nodes: Vec<FNode>,
    formula_ids: HashMap<Formula, u32>,
    traces: Vec<Trace>,
    sums: Vec<Summary>,
    trace_ids: HashMap<Vec<StateId>, u32>,
    memo: Vec<Vec<u8>>,
    lab_memo: HashMap<(u32, StateId, Dir, bool), bool>,
    anchors: HashMap<(StateId, Dir), Rc<RefCell<CertStream>>>,
    extensions: HashMap<(u32, Dir), Rc<RefCell<CertStream>>>,
    stats: CheckStats,
}

impl<'k> Engine<'k> {
    fn new(ctx: SummaryCtx<'k>, h: usize, cap: Option<usize>) -> Engine<'k> {
        Engine {
            ctx,
            h,
            cap,
            nodes: Vec::new(),
            formula_ids: HashMap::new(),
            traces: Vec::new(),
            sums: Vec::new(),
            trace_ids: HashMap::new(),
            memo: Vec::new(),
            lab_memo: HashMap::new(),
            anchors: HashMap::new(),
            extensions: HashMap::new(),
            stats: CheckStats::default(),
        }
    }

    fn intern_formula(&mut self, formula: &Formula) -> Result<u32, CheckError> {
        if let Some(&id) = self.formula_ids.get(formula) {
            return Ok(id);
        }
        let node = match formula {
            Formula::Atom(r) => {
                let index = self
                    .ctx
                    .spec()
                    .index_of(r)
                    .ok_or_else(|| CheckError::AtomOutsidePool(r.to_string()))?;
                FNode::Atom(index)
            }
            Formula::Not(a) => FNode::Not(self.intern_formula(a)?),
            Formula::And(a, b) => FNode::And(self.intern_formula(a)?, self.intern_formula(b)?),
            Formula::Or(a, b) => FNode::Or(self.intern_formula(a)?, self.intern_formula(b)?),
            Formula::Diamond(m, a) => FNode::Diamond(*m, self.intern_formula(a)?),
            Formula::Box(m, a) => FNode::Box(*m, self.intern_formula(a)?),
        };
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.memo.push(Vec::new());
        self.formula_ids.insert(formula.clone(), id);
        Ok(id)
    }

    fn intern_trace(&mut self, trace: Trace, sum: Summary) -> u32 {
        if let Some(&id) = self.trace_ids.get(trace.steps()) {
            return id;
        }
        let id = self.traces.len() as u32;
        self.trace_ids.insert(trace.steps().to_vec(), id);
        self.traces.push(trace);
        self.sums.push(sum);
        id
    }

    /// Scans initial candidates anchored at `start` until one falsifies
    /// the root formula or the enumeration is exhausted.
    fn check_root(&mut self, root: u32, start: StateId, dir: Dir) -> (bool, Option<u32>) {
        let stream = self.anchor_stream(start, dir);
        let mut index = 0;
        while let Some(tid) = self.pull(&stream, dir, index) {
            if !self.eval(root, tid, true, 0) {
                return (false, Some(tid));
            }
            index += 1;
        }
        (true, None)
    }

    fn eval(&mut self, fid: u32, tid: u32, truth_mode: bool, depth: u64) -> bool {
        let slot = tid as usize;
        {
            let row = &mut self.memo[fid as usize];
            if row.len() <= slot {
                row.resize(slot + 1, 0);
            }
            match row[slot] {
                1 => return false,
                2 => return true,
                _ => {}
            }
        }
        if depth > self.stats.mode_switches {
            self.stats.mode_switches = depth;
        }
        let value = match self.nodes[fid as usize] {
            FNode::Atom(index) => self.ctx.atom_true(self.sums[slot], index),
            FNode::Not(a) => !self.eval(a, tid, !truth_mode, depth),
            FNode::And(a, b) => {
                self.eval(a, tid, truth_mode, depth) && self.eval(b, tid, truth_mode, depth)
            }
            FNode::Or(a, b) => {
                self.eval(a, tid, truth_mode, depth) || self.eval(b, tid, truth_mode, depth)
            }
            FNode::Diamond(Modality::B, a) => {
                let prefixes = self.prefix_tids(tid);
                let mut found = false;
                for p in prefixes {
                    if self.eval(a, p, truth_mode, depth) {
                        found = true;
                        break;
                    }
                }
                found
            }
            FNode::Box(Modality::B, a) => {
                let prefixes = self.prefix_tids(tid);
                let mut all = true;
                for p in prefixes {
                    if !self.eval(a, p, truth_mode, depth) {
                        all = false;
                        break;
                    }
                }
                all
            }
            FNode::Diamond(m @ (Modality::BBar | Modality::EBar), a) => {
                let dir = extension_dir(m);
                let child_depth = depth + u64::from(!truth_mode);
                self.scan_extensions(tid, dir, a, true, child_depth)
            }
            FNode::Box(m @ (Modality::BBar | Modality::EBar), a) => {
                let dir = extension_dir(m);
                let child_depth = depth + u64::from(truth_mode);
                !self.scan_extensions(tid, dir, a, false, child_depth)
            }
            FNode::Diamond(Modality::A, a) => {
                let anchor = self.traces[slot].last();
                self.lab(a, anchor, Dir::Forward, true)
            }
            FNode::Box(Modality::A, a) => {
                let anchor = self.traces[slot].last();
                !self.lab(a, anchor, Dir::Forward, false)
            }
            FNode::Diamond(Modality::ABar, a) => {
                let anchor = self.traces[slot].first();
                self.lab(a, anchor, Dir::Backward, true)
            }
            FNode::Box(Modality::ABar, a) => {
                let anchor = self.traces[slot].first();
                !self.lab(a, anchor, Dir::Backward, false)
            }
            FNode::Diamond(Modality::E, _) | FNode::Box(Modality::E, _) => {
                unreachable!("suffix modalities are mirrored away before evaluation")
            }
        };
        let row = &mut self.memo[fid as usize];
        if row.len() <= slot {
            row.resize(slot + 1, 0);
        }
        row[slot] = if value { 2 } else { 1 };
        value
    }

    /// Whether some proper extension of `tid` in direction `dir` evaluates
    /// the child to `want`.
    fn scan_extensions(&mut self, tid: u32, dir: Dir, child: u32, want: bool, depth: u64) -> bool {
        let stream = self.extension_stream(tid, dir);
        let mut index = 0;
        while let Some(candidate) = self.pull(&stream, dir, index) {
            if self.eval(child, candidate, want, depth) == want {
                return true;
            }
            index += 1;
        }
        false
    }

    /// Whether some trace anchored at `state` evaluates the child to
    /// `want`. Forward anchoring enumerates traces starting there,
    /// backward anchoring traces ending there. Each anchored search is
    /// its own obligation, so its switch chain starts from zero.
    fn lab(&mut self, child: u32, state: StateId, dir: Dir, want: bool) -> bool {
        let key = (child, state, dir, want);
        if let Some(&known) = self.lab_memo.get(&key) {
            return known;
        }
        let stream = self.anchor_stream(state, dir);
        let mut found = false;
        let mut index = 0;
        while let Some(candidate) = self.pull(&stream, dir, index) {
            if self.eval(child, candidate, want, 0) == want {
                found = true;
                break;
            }
            index += 1;
        }
        self.lab_memo.insert(key, found);
        found
    }

    fn prefix_tids(&mut self, tid: u32) -> Vec<u32> {
        let trace = self.traces[tid as usize].clone();
        let sums = self.ctx.prefix_summaries(&trace);
        (1..trace.len())
            .map(|len| self.intern_trace(trace.prefix(len), sums[len - 1]))
            .collect()
    }

    /// The shared stream of traces anchored at `state`. Its seed, the
    /// one-state trace, is itself a candidate.
    fn anchor_stream(&mut self, state: StateId, dir: Dir) -> Rc<RefCell<CertStream>> {
        if let Some(stream) = self.anchors.get(&(state, dir)) {
            return Rc::clone(stream);
        }
        let sum = self.ctx.singleton(state);
        let seed_trace = Trace::new(self.ctx.structure(), vec![state])
            .expect("a one-state trace is always valid");
        let seed = self.intern_trace(seed_trace, sum);
        self.stats.certificates_explored += 1;
        let stream = Rc::new(RefCell::new(CertStream {
            frontier: VecDeque::from([seed]),
            seen: HashSet::from([seed]),
            yielded: vec![seed],
        }));
        self.anchors.insert((state, dir), Rc::clone(&stream));
        stream
    }

    /// The shared stream of proper extensions of `tid`. The seed is only
    /// a growth point, never a candidate, so `seen` starts empty: a grown
    /// candidate that contracts back onto the seed still represents a
    /// proper extension and must be yielded.
    fn extension_stream(&mut self, tid: u32, dir: Dir) -> Rc<RefCell<CertStream>> {
        if let Some(stream) = self.extensions.get(&(tid, dir)) {
            return Rc::clone(stream);
        }
        let stream = Rc::new(RefCell::new(CertStream {
            frontier: VecDeque::from([tid]),
            seen: HashSet::new(),
            yielded: Vec::new(),
        }));
        self.extensions.insert((tid, dir), Rc::clone(&stream));
        stream
    }

    /// Returns the candidate at position `index` of the stream, growing
    /// the enumeration on demand; `None` once the stream is exhausted.
    fn pull(&mut self, stream: &Rc<RefCell<CertStream>>, dir: Dir, index: usize) -> Option<u32> {
        loop {
            {
                let state = stream.borrow();
                if index < state.yielded.len() {
                    return Some(state.yielded[index]);
                }
                if state.frontier.is_empty() {
                    return None;
                }
            }
            self.grow(stream, dir);
        }
    }

    /// Extends one frontier trace by a single state in direction `dir`,
    /// contracting the results in complete mode, and records the newly
    /// discovered candidates.
    fn grow(&mut self, stream: &Rc<RefCell<CertStream>>, dir: Dir) {
        let popped = stream.borrow_mut().frontier.pop_front();
        let Some(tid) = popped else {
            return;
        };
        let trace = self.traces[tid as usize].clone();
        if self.cap.is_some_and(|cap| trace.len() >= cap) {
            return;
        }
        let sum = self.sums[tid as usize];
        let neighbors: Vec<StateId> = match dir {
            Dir::Forward => self.ctx.structure().successors(trace.last()).to_vec(),
            Dir::Backward => self.ctx.structure().predecessors(trace.first()).to_vec(),
        };
        let mut produced = Vec::with_capacity(neighbors.len());
        for state in neighbors {
            let (steps, grown_sum) = match dir {
                Dir::Forward => {
                    let mut steps = trace.steps().to_vec();
                    steps.push(state);
                    (steps, self.ctx.extend(sum, state))
                }
                Dir::Backward => {
                    let mut steps = vec![state];
                    steps.extend_from_slice(trace.steps());
                    (steps, self.ctx.extend_left(sum, state))
                }
            };
            let grown = Trace::new(self.ctx.structure(), steps)
                .expect("growing along an edge keeps a valid trace");
            let candidate = if self.cap.is_none() {
                let (contracted, removals) = contract_counted(&self.ctx, &grown, self.h);
                self.stats.contractions += removals as u64;
                debug_assert_eq!(self.ctx.summary_of(&contracted), grown_sum);
                contracted
            } else {
                grown
            };
            produced.push(self.intern_trace(candidate, grown_sum));
        }
        let mut fresh = 0;
        {
            let mut state = stream.borrow_mut();
            for candidate in produced {
                if state.seen.insert(candidate) {
                    state.yielded.push(candidate);
                    state.frontier.push_back(candidate);
                    fresh += 1;
                }
            }
        }
        self.stats.certificates_explored += fresh;
    }
}

fn extension_dir(m: Modality) -> Dir {
    match m {
        Modality::BBar => Dir::Forward,
        Modality::EBar => Dir::Backward,
        _ => unreachable!("only extension modalities have a growth direction"),
    }
}
