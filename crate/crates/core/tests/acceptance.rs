//! End-to-end suites checking every component against an independent
//! reference. Each suite prints a single `ACCEPTANCE <name>: pass|fail`
//! line; run with `--nocapture` to see them.

mod common;

use std::collections::HashMap;

use common::*;
use hs_mc::bisim::{certificate_bound, contract, is_h_prefix_bisimilar, sampling_word};
use hs_mc::checker::{model_check, CheckSession};
use hs_mc::hsformula::{Formula, Modality};
use hs_mc::kripke::Trace;
use hs_mc::oracle::BoundedOracle;
use hs_mc::relang::{parse_regex, Nfa, RegExpr};
use hs_mc::summary::{SpecSet, SummaryCtx};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn standard_pool() -> Vec<RegExpr> {
    ["p", "q", "p . q*", "p . q"]
        .iter()
        .map(|text| parse_regex(text).expect("pool regexes parse"))
        .collect()
}

#[test]
fn compiled_automata_agree_with_the_reference_matcher() {
    let props = vec!["p".to_string(), "q".to_string()];
    let words = all_words(4);
    let labeled: Vec<_> = words.iter().map(|w| word_to_labels(w)).collect();
    let pairs = regex_pairs(6);
    let mut failures = Vec::new();
    'expressions: for (expr, reference) in &pairs {
        let nfa = Nfa::compile(expr, &props).expect("enumerated expressions compile");
        for (word, labels) in words.iter().zip(&labeled) {
            let direct = reference_matches(reference, word);
            if nfa.accepts(labels) != direct {
                failures.push(format!(
                    "{expr:?} on {word:?}: automaton says {}, reference says {direct}",
                    !direct
                ));
                if failures.len() >= 10 {
                    break 'expressions;
                }
            }
        }
    }
    report(
        "regex automata against the reference matcher",
        pairs.len() * words.len(),
        &failures,
    );
}

#[test]
fn equal_summaries_determine_membership_and_survive_extensions() {
    let k = k0();
    let traces = enumerate_traces(&k, 4);
    let extensions = enumerate_traces(&k, 3);
    let p = || Box::new(Reference::Letter(0b1010));
    let q = || Box::new(Reference::Letter(0b1100));
    let specs = [
        ("p", Reference::Letter(0b1010)),
        ("p . q", Reference::Concat(p(), q())),
        ("p . q*", Reference::Concat(p(), Box::new(Reference::Star(q())))),
    ];
    let mut failures = Vec::new();
    let mut distinct_pairs = 0usize;
    let mut checked = 0usize;
    for (text, reference) in &specs {
        let expr = parse_regex(text).expect("spec regexes parse");
        let spec = SpecSet::new(k.props(), vec![expr]).expect("spec atoms resolve");
        let ctx = SummaryCtx::new(&k, spec);
        let summaries: Vec<_> = traces.iter().map(|t| ctx.summary_of(t)).collect();
        let letters: Vec<_> = traces.iter().map(|t| trace_letters(&k, t)).collect();
        for i in 0..traces.len() {
            for j in 0..traces.len() {
                if summaries[i] != summaries[j] {
                    continue;
                }
                checked += 1;
                if i != j {
                    distinct_pairs += 1;
                }
                if reference_matches(reference, &letters[i])
                    != reference_matches(reference, &letters[j])
                {
                    failures.push(format!(
                        "membership under {text} differs between {} and {}",
                        traces[i].display(&k),
                        traces[j].display(&k)
                    ));
                }
                for ext in &extensions {
                    if traces[i].last() == ext.first() {
                        let a = traces[i].star_concat(ext).expect("endpoints match");
                        let b = traces[j].star_concat(ext).expect("endpoints match");
                        if ctx.summary_of(&a) != ctx.summary_of(&b) {
                            failures.push(format!(
                                "right extension by {} splits equal summaries under {text}",
                                ext.display(&k)
                            ));
                        }
                    }
                    if ext.last() == traces[i].first() {
                        let a = ext.star_concat(&traces[i]).expect("endpoints match");
                        let b = ext.star_concat(&traces[j]).expect("endpoints match");
                        if ctx.summary_of(&a) != ctx.summary_of(&b) {
                            failures.push(format!(
                                "left extension by {} splits equal summaries under {text}",
                                ext.display(&k)
                            ));
                        }
                    }
                }
            }
        }
    }
    assert!(distinct_pairs > 0, "some distinct traces should share a summary");
    report(
        "summaries as congruent membership abstractions",
        checked,
        &failures,
    );
}

#[test]
fn prefix_bisimilarity_laws_hold_on_sampled_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB151);
    let mut structures = vec![k0()];
    for _ in 0..3 {
        structures.push(random_structure(&mut rng, 3));
    }
    let mut failures = Vec::new();
    let mut samples = 0usize;
    let mut word_matches = 0usize;
    let mut transitive_premises = 0usize;
    for k in &structures {
        let exprs = vec![
            parse_regex("p").expect("spec regexes parse"),
            parse_regex("p . q*").expect("spec regexes parse"),
        ];
        let spec = SpecSet::new(k.props(), exprs).expect("spec atoms resolve");
        let ctx = SummaryCtx::new(k, spec);
        for h in 0..=2usize {
            let mut by_word: HashMap<Vec<_>, Trace> = HashMap::new();
            for _ in 0..90 {
                samples += 1;
                let t1 = random_trace(&mut rng, k, 8);
                let t2 = random_trace(&mut rng, k, 8);
                if !is_h_prefix_bisimilar(&ctx, &t1, &t1, h) {
                    failures.push(format!("reflexivity fails at depth {h} on {}", t1.display(k)));
                }
                let forward = is_h_prefix_bisimilar(&ctx, &t1, &t2, h);
                if forward != is_h_prefix_bisimilar(&ctx, &t2, &t1, h) {
                    failures.push(format!(
                        "symmetry fails at depth {h} between {} and {}",
                        t1.display(k),
                        t2.display(k)
                    ));
                }
                if sampling_word(&ctx, &t1, h) == sampling_word(&ctx, &t2, h) && !forward {
                    failures.push(format!(
                        "equal sampling words without bisimilarity at depth {h}: {} and {}",
                        t1.display(k),
                        t2.display(k)
                    ));
                }
                let c1 = contract(&ctx, &t1, h);
                if !is_h_prefix_bisimilar(&ctx, &t1, &c1, h) {
                    failures.push(format!(
                        "contraction loses bisimilarity at depth {h} on {}",
                        t1.display(k)
                    ));
                }
                match by_word.entry(sampling_word(&ctx, &t1, h)) {
                    std::collections::hash_map::Entry::Occupied(slot) => {
                        word_matches += 1;
                        let prev = slot.get();
                        if !is_h_prefix_bisimilar(&ctx, prev, &t1, h) {
                            failures.push(format!(
                                "equal sampling words without bisimilarity at depth {h}: {} and {}",
                                prev.display(k),
                                t1.display(k)
                            ));
                        } else {
                            transitive_premises += 1;
                            if !is_h_prefix_bisimilar(&ctx, prev, &c1, h) {
                                failures.push(format!(
                                    "transitivity fails at depth {h}: {} to {} to {}",
                                    prev.display(k),
                                    t1.display(k),
                                    c1.display(k)
                                ));
                            }
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(t1.clone());
                    }
                }
                let right = random_trace_from(&mut rng, k, t1.last(), 3);
                let e1 = t1.star_concat(&right).expect("extension starts at the endpoint");
                let e2 = c1.star_concat(&right).expect("contraction keeps the endpoint");
                if !is_h_prefix_bisimilar(&ctx, &e1, &e2, h) {
                    failures.push(format!(
                        "right extension by {} breaks bisimilarity at depth {h}",
                        right.display(k)
                    ));
                }
                let left = random_trace_to(&mut rng, k, t1.first(), 3);
                let f1 = left.star_concat(&t1).expect("extension ends at the start");
                let f2 = left.star_concat(&c1).expect("contraction keeps the start");
                if !is_h_prefix_bisimilar(&ctx, &f1, &f2, h) {
                    failures.push(format!(
                        "left extension by {} breaks bisimilarity at depth {h}",
                        left.display(k)
                    ));
                }
            }
        }
    }
    assert!(samples >= 1000, "the law suite should draw at least 1000 samples");
    assert!(word_matches > 0, "sampling should produce equal-word pairs");
    assert!(transitive_premises > 0, "sampling should produce transitive premises");
    report("prefix bisimilarity laws", samples, &failures);
}

#[test]
fn contraction_preserves_prefix_formula_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC047);
    let mut structures = vec![k0()];
    for _ in 0..3 {
        structures.push(random_structure(&mut rng, 3));
    }
    let pool = standard_pool();
    let mut failures = Vec::new();
    let mut samples = 0usize;
    for k in &structures {
        let mut oracle = BoundedOracle::new(k, 12);
        for _ in 0..130 {
            samples += 1;
            let h = rng.random_range(0..=2usize);
            let formula = random_prefix_formula(&mut rng, &pool, h, 7);
            let mut exprs: Vec<RegExpr> = Vec::new();
            for atom in formula.atoms() {
                if !exprs.contains(atom) {
                    exprs.push(atom.clone());
                }
            }
            let spec = SpecSet::new(k.props(), exprs).expect("pool atoms resolve");
            let ctx = SummaryCtx::new(k, spec);
            let trace = random_trace(&mut rng, k, 10);
            let contracted = contract(&ctx, &trace, h);
            if !is_h_prefix_bisimilar(&ctx, &trace, &contracted, h) {
                failures.push(format!(
                    "contraction at depth {h} loses bisimilarity on {}",
                    trace.display(k)
                ));
            }
            let id = oracle.add_formula(&formula).expect("pool atoms compile");
            if oracle.holds_on(id, &trace) != oracle.holds_on(id, &contracted) {
                failures.push(format!(
                    "verdict changes under contraction at depth {h} on {} for {formula:?}",
                    trace.display(k)
                ));
            }
            let bound = certificate_bound(k.state_count(), ctx.spec().total_size(), h);
            if BigUint::from(contracted.len()) > bound {
                failures.push(format!(
                    "contracted length {} exceeds the certificate bound at depth {h}",
                    contracted.len()
                ));
            }
            if contract(&ctx, &contracted, h) != contracted {
                failures.push(format!(
                    "contraction is not idempotent at depth {h} on {}",
                    trace.display(k)
                ));
            }
        }
    }
    assert!(samples >= 500, "the contraction suite should draw at least 500 samples");
    report("contraction preserving prefix formulas", samples, &failures);
}

#[test]
fn capped_verdicts_match_the_bounded_reference() {
    let pool = standard_pool();
    let formulas = formula_grid(&pool, 5);
    let structures = small_structures();
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).min(structures.len());
    let chunk = structures.len().div_ceil(workers);
    let pool_ref = &pool;
    let formulas_ref = &formulas;
    let results: Vec<(u64, Vec<String>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = structures
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut runs = 0u64;
                    let mut failures = Vec::new();
                    for k in part {
                        for cap in [3usize, 4, 5] {
                            let mut session = CheckSession::new(k, pool_ref, cap)
                                .expect("the pool builds a session");
                            let mut oracle = BoundedOracle::new(k, cap);
                            for (i, formula) in formulas_ref.iter().enumerate() {
                                runs += 1;
                                let (sat, cex) =
                                    session.check(formula).expect("grid formulas check");
                                let id = oracle
                                    .add_formula(formula)
                                    .expect("pool atoms compile");
                                let outcome = oracle.check(id);
                                if sat != outcome.satisfied || cex != outcome.counterexample {
                                    failures.push(format!(
                                        "bound {cap} on {}: checker {sat}/{cex:?}, \
                                         reference {}/{:?} for {formula:?}",
                                        k.to_model_text().replace('\n', "; "),
                                        outcome.satisfied,
                                        outcome.counterexample
                                    ));
                                }
                                if i % 9973 == 0 {
                                    let v = model_check(k, formula, Some(cap))
                                        .expect("grid formulas check");
                                    if v.satisfied != sat || v.counterexample != cex {
                                        failures.push(format!(
                                            "one-shot and session disagree at bound {cap} \
                                             for {formula:?}"
                                        ));
                                    }
                                }
                                if failures.len() >= 10 {
                                    return (runs, failures);
                                }
                            }
                        }
                    }
                    (runs, failures)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("workers finish")).collect()
    });
    let mut runs = 0u64;
    let mut failures = Vec::new();
    for (r, f) in results {
        runs += r;
        failures.extend(f);
    }

    let single_pool = vec![parse_regex("p").expect("pool regexes parse")];
    let single_formulas: Vec<Formula> = formula_grid(&single_pool, 5)
        .into_iter()
        .filter(|f| !f.mentions(Modality::B))
        .collect();
    for k in structures.iter().filter(|k| k.state_count() == 1) {
        let mut oracle = BoundedOracle::new(k, 256);
        for formula in &single_formulas {
            runs += 1;
            let verdict = model_check(k, formula, None).expect("single-atom formulas check");
            if !verdict.complete {
                failures.push(format!("full run reported incomplete for {formula:?}"));
            }
            let id = oracle.add_formula(formula).expect("single atom compiles");
            let outcome = oracle.check(id);
            if verdict.satisfied != outcome.satisfied {
                failures.push(format!(
                    "saturated-oracle comparison: full run says {}, length-256 enumeration \
                     says {} for {formula:?} on {}",
                    verdict.satisfied,
                    outcome.satisfied,
                    k.to_model_text().replace('\n', "; ")
                ));
            }
            if let Some(cex) = &verdict.counterexample {
                if oracle.holds_on(id, cex) {
                    failures.push(format!(
                        "saturated-oracle comparison: the length-256 enumeration accepts \
                         the counterexample reported for {formula:?}"
                    ));
                }
            }
        }
    }
    report(
        "capped checker against bounded enumeration",
        usize::try_from(runs).expect("run count fits"),
        &failures,
    );
}

#[test]
fn homogeneous_atom_checks_match_per_state_inspection() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4053);
    let formula = Formula::atom("p . p*");
    let mut failures = Vec::new();
    let mut runs = 0usize;
    for _ in 0..3 {
        let k = random_structure(&mut rng, 3);
        let p = k.prop_index("p").expect("p is declared");
        for cap in 1..=5usize {
            runs += 1;
            let verdict = model_check(&k, &formula, Some(cap)).expect("the atom checks");
            let direct = enumerate_traces_from(&k, k.initial(), cap)
                .iter()
                .all(|t| t.steps().iter().all(|&s| k.label(s).contains(p)));
            if verdict.satisfied != direct {
                failures.push(format!(
                    "bound {cap} on {}: checker {}, per-state inspection {direct}",
                    k.to_model_text().replace('\n', "; "),
                    verdict.satisfied
                ));
            }
        }
    }
    report("homogeneous atoms as per-state conditions", runs, &failures);
}

#[test]
fn mode_switch_depth_stays_within_the_alternation_bound() {
    let pool = standard_pool();
    let formulas = formula_grid(&pool, 5);
    let structures = small_structures();
    let mut failures = Vec::new();
    let mut runs = 0usize;
    let mut max_seen = 0u64;
    for (offset, k) in structures.iter().enumerate() {
        for formula in formulas.iter().skip(offset % 101).step_by(101) {
            runs += 1;
            let verdict = model_check(k, formula, Some(3)).expect("grid formulas check");
            let bound = formula.upsilon() as u64 + 1;
            max_seen = max_seen.max(verdict.stats.mode_switches);
            if verdict.stats.mode_switches > bound {
                failures.push(format!(
                    "{} switches exceed the bound {bound} for {formula:?}",
                    verdict.stats.mode_switches
                ));
            }
        }
    }
    let single_pool = vec![parse_regex("p").expect("pool regexes parse")];
    for k in structures.iter().filter(|k| k.state_count() == 1) {
        for formula in formula_grid(&single_pool, 4) {
            runs += 1;
            let verdict = model_check(k, &formula, None).expect("single-atom formulas check");
            let bound = formula.upsilon() as u64 + 1;
            max_seen = max_seen.max(verdict.stats.mode_switches);
            if verdict.stats.mode_switches > bound {
                failures.push(format!(
                    "{} switches exceed the bound {bound} for {formula:?} on a full run",
                    verdict.stats.mode_switches
                ));
            }
        }
    }
    assert!(max_seen >= 2, "sampling should reach alternating formulas");
    report("mode switches within the alternation bound", runs, &failures);
}

#[test]
fn tiling_structures_and_code_validators_classify_correctly() {
    use hs_mc::tiling::{
        encode_initial_cell, encode_multicell, gen_kripke, validate_initialization_code,
        validate_initialized_code, validate_multitiling_code, Letter, TilingInstance,
    };

    fn check_defect(
        failures: &mut Vec<String>,
        cases: &mut usize,
        what: &str,
        expected: &str,
        got: Option<&str>,
    ) {
        *cases += 1;
        if got != Some(expected) {
            failures.push(format!("{what}: expected defect `{expected}`, got {got:?}"));
        }
    }

    fn full_grid(inst: &TilingInstance, content: &[usize]) -> Vec<Letter> {
        let mut grid = Vec::new();
        for row in 0..inst.side() {
            for col in 0..inst.side() {
                grid.extend(encode_multicell(inst, row, col, content));
            }
        }
        grid
    }

    fn full_row(inst: &TilingInstance, content: usize) -> Vec<Letter> {
        let mut row = Vec::new();
        for col in 0..inst.side() {
            row.extend(encode_initial_cell(inst, col, content));
        }
        row
    }

    fn assemble(grid: &[Letter], rows: &[&[Letter]]) -> Vec<Letter> {
        let mut out = vec![Letter::Bot];
        out.extend_from_slice(grid);
        for row in rows {
            out.push(Letter::Bot);
            out.extend_from_slice(row);
        }
        out.push(Letter::End);
        out
    }

    let mut failures = Vec::new();
    let mut cases = 0usize;

    let pair = ("d", "d");
    let single = TilingInstance::new(2, &["d"], &["d"], &[pair], &[pair], &[pair], &["d"])
        .expect("the one-domino instance is well formed");
    let k = gen_kripke(&single);
    cases += 1;
    let end = k.state_index("end").expect("the end marker is a state");
    if k.initial() != end {
        failures.push("the end marker should be the initial state".to_string());
    }
    if !k.successors(end).is_empty() {
        failures.push("the end marker should have no successors".to_string());
    }
    for s in 0..k.state_count() {
        if k.label(s).iter().collect::<Vec<_>>() != vec![s] {
            failures.push(format!("state {s} should carry exactly its own proposition"));
        }
        if s != end && k.successors(s).len() != k.state_count() {
            failures.push(format!("state {s} should step to every state"));
        }
    }

    let grid = full_grid(&single, &[0, 0]);
    cases += 1;
    if !validate_multitiling_code(&single, &grid).is_valid() {
        failures.push("the full one-domino grid should validate".to_string());
    }

    check_defect(
        &mut failures,
        &mut cases,
        "truncated grid",
        "length",
        validate_multitiling_code(&single, &grid[..grid.len() - 1]).defect(),
    );
    let mut misshapen = grid.clone();
    misshapen[2] = Letter::Bot;
    check_defect(
        &mut failures,
        &mut cases,
        "marker inside a cell",
        "shape",
        validate_multitiling_code(&single, &misshapen).defect(),
    );
    check_defect(
        &mut failures,
        &mut cases,
        "missing cell",
        "completeness requirement",
        validate_multitiling_code(&single, &grid[..grid.len() - 6]).defect(),
    );

    let all: &[(&str, &str)] = &[("d", "d"), ("d", "e"), ("e", "d"), ("e", "e")];
    let both: &[&str] = &["d", "e"];
    let duo_all = TilingInstance::new(2, both, both, all, all, all, both)
        .expect("the permissive two-domino instance is well formed");
    let mut duplicated = full_grid(&duo_all, &[0, 0]);
    duplicated.extend(encode_multicell(&duo_all, 0, 0, &[1, 1]));
    check_defect(
        &mut failures,
        &mut cases,
        "conflicting duplicate cell",
        "uniqueness requirement",
        validate_multitiling_code(&duo_all, &duplicated).defect(),
    );

    let duo_m = TilingInstance::new(2, both, both, all, all, &[("d", "d"), ("e", "e")], both)
        .expect("the restricted-stack instance is well formed");
    let mut mixed = encode_multicell(&duo_m, 0, 0, &[0, 1]);
    mixed.extend_from_slice(&full_grid(&duo_m, &[0, 0])[6..]);
    check_defect(
        &mut failures,
        &mut cases,
        "cell stacking unrelated dominoes",
        "multi-cell M-coherence",
        validate_multitiling_code(&duo_m, &mixed).defect(),
    );

    let duo_h = TilingInstance::new(2, both, both, &[("d", "d"), ("e", "e")], all, all, both)
        .expect("the restricted-row instance is well formed");
    let mut row_break = encode_multicell(&duo_h, 0, 0, &[1, 1]);
    row_break.extend_from_slice(&full_grid(&duo_h, &[0, 0])[6..]);
    check_defect(
        &mut failures,
        &mut cases,
        "horizontally unrelated neighbors",
        "row-adjacency requirement",
        validate_multitiling_code(&duo_h, &row_break).defect(),
    );

    let duo_v = TilingInstance::new(2, both, both, all, &[("d", "d"), ("e", "e")], all, both)
        .expect("the restricted-column instance is well formed");
    let mut column_break = encode_multicell(&duo_v, 0, 0, &[1, 1]);
    column_break.extend_from_slice(&full_grid(&duo_v, &[0, 0])[6..]);
    check_defect(
        &mut failures,
        &mut cases,
        "vertically unrelated neighbors",
        "column-adjacency requirement",
        validate_multitiling_code(&duo_v, &column_break).defect(),
    );

    let duo_acc = TilingInstance::new(2, both, both, all, all, all, &["e"])
        .expect("the accepting-e instance is well formed");
    check_defect(
        &mut failures,
        &mut cases,
        "no accepting domino on the last row",
        "acceptance requirement",
        validate_multitiling_code(&duo_acc, &full_grid(&duo_acc, &[0, 0])).defect(),
    );

    let row = full_row(&single, 0);
    cases += 1;
    if !validate_initialization_code(&single, &row).is_valid() {
        failures.push("the one-domino first row should validate".to_string());
    }

    let duo_init = TilingInstance::new(2, both, &["d"], all, all, all, both)
        .expect("the d-initial instance is well formed");
    let mut not_initial = full_row(&duo_init, 0);
    not_initial.splice(0..3, encode_initial_cell(&duo_init, 0, 1));
    check_defect(
        &mut failures,
        &mut cases,
        "non-initial domino in the first row",
        "initial domino",
        validate_initialization_code(&duo_init, &not_initial).defect(),
    );

    let mut column_gap = full_row(&single, 0);
    let repeated = encode_initial_cell(&single, 2, 0);
    let last = column_gap.len() - 3;
    column_gap.splice(last.., repeated.iter().copied());
    check_defect(
        &mut failures,
        &mut cases,
        "column left uncovered",
        "column completeness",
        validate_initialization_code(&single, &column_gap).defect(),
    );

    let mut column_clash = full_row(&duo_all, 0);
    column_clash.extend(encode_initial_cell(&duo_all, 3, 1));
    check_defect(
        &mut failures,
        &mut cases,
        "conflicting contents in one column",
        "column uniqueness",
        validate_initialization_code(&duo_all, &column_clash).defect(),
    );

    let assembled = assemble(&grid, &[&row, &row]);
    cases += 1;
    if !validate_initialized_code(&single, &assembled).is_valid() {
        failures.push("the assembled one-domino witness should validate".to_string());
    }

    let mut missing_marker = assembled.clone();
    let second_marker = grid.len() + 1;
    missing_marker.remove(second_marker);
    check_defect(
        &mut failures,
        &mut cases,
        "missing delimiter",
        "shape",
        validate_initialized_code(&single, &missing_marker).defect(),
    );

    let duo_de = TilingInstance::new(2, both, both, all, all, all, both)
        .expect("the permissive two-domino instance is well formed");
    let grid_d = full_grid(&duo_de, &[0, 0]);
    let row_d = full_row(&duo_de, 0);
    let mut row_mixed = full_row(&duo_de, 0);
    row_mixed.splice(0..3, encode_initial_cell(&duo_de, 0, 1));
    cases += 2;
    if !validate_initialization_code(&duo_de, &row_mixed).is_valid() {
        failures.push("the mixed first row should validate on its own".to_string());
    }
    if !validate_initialized_code(&duo_de, &assemble(&grid_d, &[&row_d, &row_d])).is_valid() {
        failures.push("the two-domino witness should validate".to_string());
    }
    check_defect(
        &mut failures,
        &mut cases,
        "first row contradicting the grid",
        "initialization coherence requirement",
        validate_initialized_code(&duo_de, &assemble(&grid_d, &[&row_d, &row_mixed])).defect(),
    );

    report("tiling structures and code validators", cases, &failures);
}
