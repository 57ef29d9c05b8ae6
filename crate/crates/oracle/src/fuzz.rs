//! Randomized cross-checks of stabilization against the classical oracle,
//! reproducible from a seed.

use std::sync::Arc;

use twistab_core::curve::canonical_form;
use twistab_core::groups::FiniteGroup;
use twistab_core::stabilization::{stabilize, stabilize_with, ContractionOrder, StabilizationError, StableMapRecord};

use crate::gen::{self, CurveShape, Instance};
use crate::hassett::{stabilize_greedy, Shape};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<String>,
}

/// Case `i` uses the trivial group when even and `S3` when odd. Trivial cases are
/// compared with the classical stabilization; every case is checked for
/// independence of contraction order and for idempotence.
pub fn run(seed: u64, cases: usize) -> FuzzReport {
    let mut rng = gen::rng(seed);
    let groups = [Arc::new(FiniteGroup::trivial()), Arc::new(FiniteGroup::symmetric(3).expect("S3"))];
    let shape = CurveShape::default();
    let mut failures = Vec::new();
    for i in 0..cases {
        let Instance { graph, weights, mono } = gen::instance(&mut rng, &shape, &groups[i % 2], 12);
        let base = stabilize(&graph, &weights, &mono);
        if i % 2 == 0 {
            let ours = base.as_ref().ok().map(|r| Shape::of(&r.graph));
            if ours != stabilize_greedy(&graph, weights.entries()) {
                failures.push(format!("case {i}: differs from classical stabilization"));
            }
        }
        let canon = |r: &Result<StableMapRecord, StabilizationError>| {
            r.as_ref().ok().map(|r| canonical_form(&r.graph, &r.mono))
        };
        let other = stabilize_with(&graph, &weights, &mono, ContractionOrder::Shuffled(seed ^ i as u64));
        if canon(&base) != canon(&other) {
            failures.push(format!("case {i}: contraction order matters"));
        }
        match &base {
            Ok(rec) => match stabilize(&rec.graph, &weights, &rec.mono) {
                Ok(again) if again.trace.is_empty() => {}
                _ => failures.push(format!("case {i}: not idempotent")),
            },
            Err(StabilizationError::NothingLeft) => {}
            Err(e) => failures.push(format!("case {i}: {e}")),
        }
    }
    FuzzReport { seed, cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let a = run(3, 40);
        assert!(a.failures.is_empty(), "{:?}", a.failures);
        assert_eq!(a, run(3, 40));
    }
}
