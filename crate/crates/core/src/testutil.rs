//! Helpers shared by the unit tests.

use crate::kripke::{KripkeStructure, StateId, Trace};

/// All traces of `k` with at most `max_len` states, ordered by length and
/// then by the state sequence.
pub(crate) fn traces_up_to(k: &KripkeStructure, max_len: usize) -> Vec<Trace> {
    let mut out: Vec<Vec<StateId>> = Vec::new();
    let mut layer: Vec<Vec<StateId>> = (0..k.state_count()).map(|s| vec![s]).collect();
    for _ in 0..max_len {
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for steps in &layer {
            for &succ in k.successors(*steps.last().expect("non-empty")) {
                let mut longer = steps.clone();
                longer.push(succ);
                next.push(longer);
            }
        }
        layer = next;
    }
    out.into_iter()
        .map(|steps| Trace::new(k, steps).expect("constructed along edges"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::k0;

    #[test]
    fn enumeration_is_complete_and_ordered() {
        let k = k0();
        let traces = traces_up_to(&k, 3);
        let lens: Vec<usize> = traces.iter().map(Trace::len).collect();
        assert!(lens.windows(2).all(|w| w[0] <= w[1]), "sorted by length");
        assert_eq!(lens.iter().filter(|&&l| l == 1).count(), 2);
        assert_eq!(lens.iter().filter(|&&l| l == 2).count(), 3, "three edges");
        assert_eq!(
            lens.iter().filter(|&&l| l == 3).count(),
            5,
            "s0s1s0, s0s1s1, s1s0s1, s1s1s0, s1s1s1"
        );
        let mut dedup = traces.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), traces.len(), "no duplicates");
    }
}
