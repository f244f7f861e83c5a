//! Prefix samplings, bounded prefix bisimilarity, and trace contraction.
//!
//! Two traces are `h`-prefix bisimilar when they have the same summary and,
//! down to depth `h`, every proper prefix of one is matched by a proper
//! prefix of the other. Such traces satisfy the same formulas up to prefix
//! modal depth `h`, so a long trace can be replaced by a shorter bisimilar
//! one. The replacement is found through prefix samplings: position sets
//! that record where new prefix summaries first appear, refined `h` times.
//! Removing a block between two sampled positions whose boundary prefixes
//! share a summary preserves `h`-prefix bisimilarity, and repeating this
//! until no such block remains bounds the trace length by a function of the
//! structure and expression sizes alone.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::kripke::Trace;
use crate::summary::{Summary, SummaryCtx};

/// Positions recording where distinct prefix summaries first occur strictly
/// between `i` and `j` (inclusive bounds, 0-based), plus the bounds.
pub fn prefix_skeleton(
    ctx: &SummaryCtx<'_>,
    trace: &Trace,
    i: usize,
    j: usize,
) -> Vec<usize> {
    assert!(i <= j && j < trace.len(), "skeleton bounds must lie in the trace");
    let sums = ctx.prefix_summaries(trace);
    let mut out = vec![i];
    let mut seen: HashMap<Summary, usize> = HashMap::new();
    for (pos, &sum) in sums.iter().enumerate().take(j).skip(i + 1) {
        seen.entry(sum).or_insert(pos);
    }
    let mut firsts: Vec<usize> = seen.into_values().collect();
    firsts.sort_unstable();
    out.extend(firsts);
    if j > i {
        out.push(j);
    }
    out
}

/// The depth-`h` prefix sampling of a trace: 0-based positions, sorted,
/// always containing the first and last position. Depth 0 is just the two
/// endpoints; each further depth inserts the skeleton positions between
/// every pair of consecutive positions.
pub fn h_prefix_sampling(ctx: &SummaryCtx<'_>, trace: &Trace, h: usize) -> Vec<usize> {
    let mut positions = if trace.len() == 1 { vec![0] } else { vec![0, trace.len() - 1] };
    for _ in 0..h {
        let mut refined = Vec::new();
        for w in positions.windows(2) {
            let skel = prefix_skeleton(ctx, trace, w[0], w[1]);
            for &p in &skel[..skel.len() - 1] {
                refined.push(p);
            }
        }
        refined.push(*positions.last().expect("sampling is non-empty"));
        positions = refined;
    }
    positions
}

/// The prefix summaries at the depth-`h` sampling positions, in order.
/// Traces with equal sampling words are `h`-prefix bisimilar.
pub fn sampling_word(ctx: &SummaryCtx<'_>, trace: &Trace, h: usize) -> Vec<Summary> {
    let sums = ctx.prefix_summaries(trace);
    h_prefix_sampling(ctx, trace, h)
        .into_iter()
        .map(|p| sums[p])
        .collect()
}

/// Whether two traces are `h`-prefix bisimilar.
pub fn is_h_prefix_bisimilar(
    ctx: &SummaryCtx<'_>,
    t1: &Trace,
    t2: &Trace,
    h: usize,
) -> bool {
    let sums1 = ctx.prefix_summaries(t1);
    let sums2 = ctx.prefix_summaries(t2);
    let n1 = sums1.len();
    let n2 = sums2.len();
    // related[l1][l2] holds when the prefixes of lengths l1+1 and l2+1 are
    // bisimilar at the current depth, starting from depth 0.
    let mut related: Vec<Vec<bool>> = (0..n1)
        .map(|l1| (0..n2).map(|l2| sums1[l1] == sums2[l2]).collect())
        .collect();
    for _ in 0..h {
        let next: Vec<Vec<bool>> = (0..n1)
            .map(|l1| {
                (0..n2)
                    .map(|l2| {
                        sums1[l1] == sums2[l2]
                            && (0..l1).all(|a| (0..l2).any(|b| related[a][b]))
                            && (0..l2).all(|b| (0..l1).any(|a| related[a][b]))
                    })
                    .collect()
            })
            .collect();
        related = next;
    }
    related[n1 - 1][n2 - 1]
}

/// One contraction step: the leftmost pair of positions, strictly between
/// consecutive sampled positions, whose prefixes share a summary. Leftmost
/// means smallest first position, then smallest second position.
fn eligible_pair(ctx: &SummaryCtx<'_>, trace: &Trace, h: usize) -> Option<(usize, usize)> {
    let sums = ctx.prefix_summaries(trace);
    let sampling = h_prefix_sampling(ctx, trace, h);
    for w in sampling.windows(2) {
        for l in w[0] + 1..w[1] {
            for lp in l + 1..w[1] {
                if sums[l] == sums[lp] {
                    return Some((l, lp));
                }
            }
        }
    }
    None
}

/// Contracts a trace until no block between consecutive depth-`h` sampling
/// positions contains two positions with equal prefix summaries. The result
/// is `h`-prefix bisimilar to the input and keeps its endpoints; the
/// sampling is recomputed after every removal.
pub fn contract(ctx: &SummaryCtx<'_>, trace: &Trace, h: usize) -> Trace {
    contract_counted(ctx, trace, h).0
}

/// Like [`contract`], also reporting how many blocks were removed.
pub fn contract_counted(ctx: &SummaryCtx<'_>, trace: &Trace, h: usize) -> (Trace, usize) {
    let mut current = trace.clone();
    let mut removals = 0;
    while let Some((l, lp)) = eligible_pair(ctx, &current, h) {
        let mut steps = current.steps()[..=l].to_vec();
        steps.extend_from_slice(&current.steps()[lp + 1..]);
        current = Trace::new(ctx.structure(), steps)
            .expect("removing a block between equal prefix summaries keeps a valid trace");
        removals += 1;
    }
    (current, removals)
}

/// Upper bound on the certificate length sufficient for a complete search:
/// `(n * 2^((2*s)^2))^(h+2)` for a structure with `n` states, total
/// expression size `s`, and prefix depth `h`.
pub fn certificate_bound(state_count: usize, spec_size: usize, h: usize) -> BigUint {
    let relation_count = BigUint::from(1u8) << ((2 * spec_size) * (2 * spec_size));
    let base = BigUint::from(state_count) * relation_count;
    base.pow(h as u32 + 2)
}
