//! Helpers shared by the integration suites: a reference regex matcher that
//! works directly on the grammar, exhaustive enumerators for expressions,
//! words, formulas, and small structures, and seeded random generators.

use hs_mc::hsformula::{Formula, Modality};
use hs_mc::kripke::{label_word, KripkeStructure, LabelSet, StateId, Trace};
use hs_mc::relang::{PropFormula, RegExpr};
use rand::Rng;

/// Letters are subsets of `{p, q}` packed into two bits: bit 0 for `p`,
/// bit 1 for `q`.
pub const LETTER_COUNT: u8 = 4;

/// A regular expression mirror evaluated by direct recursion on the
/// grammar. Leaves carry the set of letters they accept as a four-bit mask.
#[derive(Clone)]
pub enum Reference {
    Empty,
    Letter(u8),
    Union(Box<Reference>, Box<Reference>),
    Concat(Box<Reference>, Box<Reference>),
    Star(Box<Reference>),
}

/// Language membership by structural recursion: concatenations try every
/// split and stars peel a nonempty prefix, so no automaton is involved.
pub fn reference_matches(re: &Reference, word: &[u8]) -> bool {
    match re {
        Reference::Empty => word.is_empty(),
        Reference::Letter(mask) => word.len() == 1 && mask >> word[0] & 1 == 1,
        Reference::Union(a, b) => reference_matches(a, word) || reference_matches(b, word),
        Reference::Concat(a, b) => (0..=word.len())
            .any(|i| reference_matches(a, &word[..i]) && reference_matches(b, &word[i..])),
        Reference::Star(a) => {
            word.is_empty()
                || (1..=word.len())
                    .any(|i| reference_matches(a, &word[..i]) && reference_matches(re, &word[i..]))
        }
    }
}

/// Every expression of at most `max_size` nodes paired with its reference
/// mirror, built over the leaves eps, `p`, `q`, `true`, `false`, and `!p`.
pub fn regex_pairs(max_size: usize) -> Vec<(RegExpr, Reference)> {
    let not_p = PropFormula::Not(Box::new(PropFormula::atom("p")));
    let leaves: Vec<(RegExpr, Reference)> = vec![
        (RegExpr::Empty, Reference::Empty),
        (RegExpr::test("p"), Reference::Letter(0b1010)),
        (RegExpr::test("q"), Reference::Letter(0b1100)),
        (RegExpr::Test(PropFormula::True), Reference::Letter(0b1111)),
        (RegExpr::Test(PropFormula::False), Reference::Letter(0b0000)),
        (RegExpr::Test(not_p), Reference::Letter(0b0101)),
    ];
    let mut by_size: Vec<Vec<(RegExpr, Reference)>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = leaves;
    }
    for size in 2..=max_size {
        let mut level = Vec::new();
        for (expr, reference) in &by_size[size - 1] {
            level.push((
                RegExpr::star(expr.clone()),
                Reference::Star(Box::new(reference.clone())),
            ));
        }
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for (le, lr) in &by_size[left] {
                for (re, rr) in &by_size[right] {
                    level.push((
                        RegExpr::union(le.clone(), re.clone()),
                        Reference::Union(Box::new(lr.clone()), Box::new(rr.clone())),
                    ));
                    level.push((
                        RegExpr::concat(le.clone(), re.clone()),
                        Reference::Concat(Box::new(lr.clone()), Box::new(rr.clone())),
                    ));
                }
            }
        }
        by_size[size] = level;
    }
    by_size.into_iter().flatten().collect()
}

/// All words over the four letters up to the given length, shortest first,
/// starting with the empty word.
pub fn all_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &frontier {
            for letter in 0..LETTER_COUNT {
                let mut grown = word.clone();
                grown.push(letter);
                next.push(grown);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn letter_to_labels(letter: u8) -> LabelSet {
    LabelSet::from_props((0..2).filter(move |i| letter >> i & 1 == 1))
}

pub fn word_to_labels(word: &[u8]) -> Vec<LabelSet> {
    word.iter().map(|&l| letter_to_labels(l)).collect()
}

/// The label word of a trace, packed back into two-bit letters.
pub fn trace_letters(k: &KripkeStructure, trace: &Trace) -> Vec<u8> {
    label_word(k, trace)
        .expect("traces fit their structure")
        .into_iter()
        .map(|labels| (0..2).filter(|&i| labels.contains(i)).fold(0, |acc, i| acc | 1 << i))
        .collect()
}

/// Builds a structure over propositions `p` and `q` from two-bit label
/// masks and index pairs, with state 0 initial.
pub fn build_structure(label_masks: &[u8], edges: &[(usize, usize)]) -> KripkeStructure {
    let n = label_masks.len();
    KripkeStructure::new(
        vec!["p".to_string(), "q".to_string()],
        (0..n).map(|i| format!("s{i}")).collect(),
        label_masks.iter().map(|&m| letter_to_labels(m)).collect(),
        edges.to_vec(),
        0,
    )
    .expect("generated structures satisfy the model invariants")
}

/// The two-state running example: `s0` labeled `p` steps to `s1` labeled
/// `q`, which loops on itself or returns.
pub fn k0() -> KripkeStructure {
    build_structure(&[0b01, 0b10], &[(0, 1), (1, 0), (1, 1)])
}

/// Every structure with one or two states over `p` and `q`, every edge
/// relation, one labeling per orbit of the proposition swap.
pub fn small_structures() -> Vec<KripkeStructure> {
    fn swap(mask: u8) -> u8 {
        (mask & 1) << 1 | mask >> 1 & 1
    }
    let mut out = Vec::new();
    for l0 in 0..4u8 {
        if l0 > swap(l0) {
            continue;
        }
        out.push(build_structure(&[l0], &[]));
        out.push(build_structure(&[l0], &[(0, 0)]));
    }
    let candidates = [(0, 0), (0, 1), (1, 0), (1, 1)];
    for l0 in 0..4u8 {
        for l1 in 0..4u8 {
            if (l0, l1) > (swap(l0), swap(l1)) {
                continue;
            }
            for mask in 0..16u32 {
                let edges: Vec<(usize, usize)> = candidates
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                out.push(build_structure(&[l0, l1], &edges));
            }
        }
    }
    out
}

/// A random structure over `p` and `q` where every state keeps at least
/// one successor.
pub fn random_structure(rng: &mut impl Rng, states: usize) -> KripkeStructure {
    let labels: Vec<u8> = (0..states).map(|_| rng.random_range(0..4)).collect();
    let mut edges = Vec::new();
    for s in 0..states {
        let before = edges.len();
        for t in 0..states {
            if rng.random_bool(0.5) {
                edges.push((s, t));
            }
        }
        if edges.len() == before {
            edges.push((s, rng.random_range(0..states)));
        }
    }
    build_structure(&labels, &edges)
}

/// A random walk of at most `max_len` states from a random start.
pub fn random_trace(rng: &mut impl Rng, k: &KripkeStructure, max_len: usize) -> Trace {
    let start = rng.random_range(0..k.state_count());
    random_trace_from(rng, k, start, max_len)
}

/// A random walk of at most `max_len` states from a fixed start.
pub fn random_trace_from(
    rng: &mut impl Rng,
    k: &KripkeStructure,
    start: StateId,
    max_len: usize,
) -> Trace {
    let target = rng.random_range(1..=max_len);
    let mut steps = vec![start];
    while steps.len() < target {
        let succ = k.successors(*steps.last().expect("walks are nonempty"));
        if succ.is_empty() {
            break;
        }
        steps.push(succ[rng.random_range(0..succ.len())]);
    }
    Trace::new(k, steps).expect("walks follow edges")
}

/// A random walk of at most `max_len` states arriving at a fixed end,
/// grown backwards along predecessors.
pub fn random_trace_to(
    rng: &mut impl Rng,
    k: &KripkeStructure,
    end: StateId,
    max_len: usize,
) -> Trace {
    let target = rng.random_range(1..=max_len);
    let mut steps = vec![end];
    while steps.len() < target {
        let pred = k.predecessors(*steps.last().expect("walks are nonempty"));
        if pred.is_empty() {
            break;
        }
        steps.push(pred[rng.random_range(0..pred.len())]);
    }
    steps.reverse();
    Trace::new(k, steps).expect("walks follow edges")
}

/// All traces of at most `max_len` states, from every start, shortest
/// first.
pub fn enumerate_traces(k: &KripkeStructure, max_len: usize) -> Vec<Trace> {
    let mut out = Vec::new();
    for start in 0..k.state_count() {
        out.extend(enumerate_traces_from(k, start, max_len));
    }
    out.sort_by_key(|t| t.len());
    out
}

/// All traces of at most `max_len` states from the given start, shortest
/// first.
pub fn enumerate_traces_from(k: &KripkeStructure, start: StateId, max_len: usize) -> Vec<Trace> {
    let mut out = Vec::new();
    let mut frontier = vec![vec![start]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for steps in &frontier {
            out.push(Trace::new(k, steps.clone()).expect("enumerated walks follow edges"));
            for &succ in k.successors(*steps.last().expect("walks are nonempty")) {
                let mut grown = steps.clone();
                grown.push(succ);
                next.push(grown);
            }
        }
        frontier = next;
    }
    out
}

/// Every negation-normal formula of at most `max_size` nodes over the atom
/// pool and the modalities A, its inverse, B, and both extension
/// directions, in size order. Negation appears only on atoms.
pub fn formula_grid(pool: &[RegExpr], max_size: usize) -> Vec<Formula> {
    const MODALITIES: [Modality; 5] = [
        Modality::A,
        Modality::ABar,
        Modality::B,
        Modality::BBar,
        Modality::EBar,
    ];
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = pool.iter().cloned().map(Formula::Atom).collect();
    }
    for size in 2..=max_size {
        let mut level = Vec::new();
        if size == 2 {
            for atom in pool {
                level.push(Formula::negate(Formula::Atom(atom.clone())));
            }
        }
        for child in &by_size[size - 1] {
            for m in MODALITIES {
                level.push(Formula::diamond(m, child.clone()));
                level.push(Formula::boxed(m, child.clone()));
            }
        }
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    level.push(Formula::and(a.clone(), b.clone()));
                    level.push(Formula::or(a.clone(), b.clone()));
                }
            }
        }
        by_size[size] = level;
    }
    by_size.into_iter().flatten().collect()
}

/// A random formula over atoms, Boolean connectives, and the prefix
/// modality only, with prefix nesting at most `depth` and at most
/// `size_budget` nodes.
pub fn random_prefix_formula(
    rng: &mut impl Rng,
    pool: &[RegExpr],
    depth: usize,
    size_budget: usize,
) -> Formula {
    let atom = Formula::Atom(pool[rng.random_range(0..pool.len())].clone());
    if size_budget <= 1 {
        return atom;
    }
    let mut options = vec![0u8, 1];
    if size_budget >= 3 {
        options.push(2);
    }
    if depth > 0 {
        options.push(3);
    }
    match options[rng.random_range(0..options.len())] {
        0 => atom,
        1 => Formula::negate(random_prefix_formula(rng, pool, depth, size_budget - 1)),
        2 => {
            let left_budget = rng.random_range(1..=size_budget - 2);
            let left = random_prefix_formula(rng, pool, depth, left_budget);
            let right = random_prefix_formula(rng, pool, depth, size_budget - 1 - left_budget);
            if rng.random_bool(0.5) {
                Formula::and(left, right)
            } else {
                Formula::or(left, right)
            }
        }
        _ => {
            let child = random_prefix_formula(rng, pool, depth - 1, size_budget - 1);
            if rng.random_bool(0.5) {
                Formula::diamond(Modality::B, child)
            } else {
                Formula::boxed(Modality::B, child)
            }
        }
    }
}

/// Prints the suite's verdict line and fails the test if any violation was
/// recorded.
pub fn report(name: &str, cases: usize, failures: &[String]) {
    if failures.is_empty() {
        println!("ACCEPTANCE {name}: pass ({cases} cases)");
    } else {
        println!("ACCEPTANCE {name}: fail ({} of {cases} cases)", failures.len());
        let shown = failures.len().min(25);
        let tail = if failures.len() > shown {
            format!("\n(and {} more)", failures.len() - shown)
        } else {
            String::new()
        };
        panic!(
            "{name}: {} violations out of {cases} cases:\n{}{tail}",
            failures.len(),
            failures[..shown].join("\n")
        );
    }
}
