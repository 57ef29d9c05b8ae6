//! The stabilization algorithm for maps to `BG`, reduction between weight
//! vectors, and comparison of chambers.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::curve::{
    contract_bridge, contract_tail, validate, CurveError, CurveGraph, MonodromyAssignment, Violation, WeightVector,
};
use crate::rational::Rational;
use crate::stability::{classify_branch, has_abelian_contraction, is_prestable, is_stable, marking_weight, Branch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizationError {
    #[error("the curve has no stable model: every component would be contracted")]
    NothingLeft,
    #[error("invalid input: {}", .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidInput(Vec<Violation>),
    #[error("input is not prestable for these weights")]
    NotPrestable,
    #[error("weights are not dominated: a_{0} > b_{0}")]
    NotDominated(usize),
    #[error("expected {expected} weights, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Tail,
    Bridge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub vertex: String,
}

/// Order in which the components of one round are contracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ContractionOrder {
    #[default]
    Ascending,
    Descending,
    Shuffled(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableMapRecord {
    pub graph: CurveGraph,
    pub weights: WeightVector,
    pub mono: MonodromyAssignment,
    pub trace: Vec<TraceStep>,
}

impl Serialize for StableMapRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("curve", &self.graph)?;
        m.serialize_entry("monodromy", &crate::json::MonodromyDoc::from_assignment(&self.mono))?;
        m.serialize_entry("trace", &self.trace)?;
        m.serialize_entry("weights", &self.weights)?;
        m.end()
    }
}

fn is_unstable_tail(graph: &CurveGraph, weights: &WeightVector, mono: &MonodromyAssignment, v: &str) -> bool {
    classify_branch(graph, v) == Branch::ExtremalBranch
        && has_abelian_contraction(graph, mono, v)
        && marking_weight(graph, weights, v) <= Rational::from_integer(1)
}

fn is_unstable_bridge(graph: &CurveGraph, v: &str) -> bool {
    if classify_branch(graph, v) != Branch::InteriorBranch {
        return false;
    }
    let hes = graph.half_edges(v);
    // a lone vertex with a self-loop is the whole curve, not a bridge
    hes[0].0 != hes[1].0 && graph.vertex(v).is_some_and(|x| x.clusters.is_empty())
}

/// Unstable rational tails and unmarked rational bridges.
pub fn unstable_components(
    graph: &CurveGraph,
    weights: &WeightVector,
    mono: &MonodromyAssignment,
) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut tails = BTreeSet::new();
    let mut bridges = BTreeSet::new();
    for v in &graph.vertices {
        if is_unstable_tail(graph, weights, mono, &v.id) {
            tails.insert(v.id.clone());
        } else if is_unstable_bridge(graph, &v.id) {
            bridges.insert(v.id.clone());
        }
    }
    (tails, bridges)
}

fn ordered(set: BTreeSet<String>, order: ContractionOrder, round: u64) -> Vec<String> {
    let mut v: Vec<String> = set.into_iter().collect();
    match order {
        ContractionOrder::Ascending => {}
        ContractionOrder::Descending => v.reverse(),
        ContractionOrder::Shuffled(seed) => v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(round))),
    }
    v
}

pub fn stabilize(
    graph: &CurveGraph,
    weights: &WeightVector,
    mono: &MonodromyAssignment,
) -> Result<StableMapRecord, StabilizationError> {
    stabilize_with(graph, weights, mono, ContractionOrder::Ascending)
}

pub fn stabilize_with(
    graph: &CurveGraph,
    weights: &WeightVector,
    mono: &MonodromyAssignment,
    order: ContractionOrder,
) -> Result<StableMapRecord, StabilizationError> {
    if weights.len() != graph.n {
        return Err(StabilizationError::LengthMismatch { expected: graph.n, got: weights.len() });
    }
    let violations = validate(graph, Some(weights), Some(mono));
    if !violations.is_empty() {
        return Err(StabilizationError::InvalidInput(violations));
    }
    if !is_prestable(graph, weights)? {
        return Err(StabilizationError::NotPrestable);
    }
    let total: Rational = weights.entries().iter().sum();
    let euler = Rational::from_integer(2 * graph.declared_genus as i64 - 2) + total;
    if graph.declared_genus == 0 && graph.total_degree() == 0 && euler <= Rational::from_integer(0) {
        return Err(StabilizationError::NothingLeft);
    }

    let mut g = graph.clone();
    let mut m = mono.clone();
    let mut trace = Vec::new();
    let cap = graph.vertices.len() as u64 + 1;
    for round in 0..cap {
        let (tails, _) = unstable_components(&g, weights, &m);
        if tails.is_empty() {
            break;
        }
        for t in ordered(tails, order, round) {
            if is_unstable_tail(&g, weights, &m, &t) {
                (g, m) = contract_tail(&g, &m, &t)?;
                trace.push(TraceStep { kind: StepKind::Tail, vertex: t });
            }
        }
    }
    for round in 0..cap {
        let (_, bridges) = unstable_components(&g, weights, &m);
        if bridges.is_empty() {
            break;
        }
        for b in ordered(bridges, order, round) {
            if is_unstable_bridge(&g, &b) {
                (g, m) = contract_bridge(&g, &m, &b)?;
                trace.push(TraceStep { kind: StepKind::Bridge, vertex: b });
            }
        }
    }
    if !is_stable(&g, weights, &m)?.stable {
        return Err(StabilizationError::NothingLeft);
    }
    Ok(StableMapRecord { graph: g, weights: weights.clone(), mono: m, trace })
}

/// Re-stabilizes a record for smaller weights `a ≤ rec.weights`.
pub fn reduce_weights(rec: &StableMapRecord, a: &WeightVector) -> Result<StableMapRecord, StabilizationError> {
    let b = &rec.weights;
    if a.len() != b.len() {
        return Err(StabilizationError::LengthMismatch { expected: b.len(), got: a.len() });
    }
    if let Some(i) = a.entries().iter().zip(b.entries()).position(|(x, y)| x > y) {
        return Err(StabilizationError::NotDominated(i + 1));
    }
    let mut out = stabilize(&rec.graph, a, &rec.mono)?;
    let mut trace = rec.trace.clone();
    trace.append(&mut out.trace);
    out.trace = trace;
    Ok(out)
}

/// Whether `Σ_I a ≤ 1 ⇔ Σ_I b ≤ 1` for every `I` with `|I| ≥ 2`.
pub fn same_chamber(a: &WeightVector, b: &WeightVector) -> Result<bool, StabilizationError> {
    if a.len() != b.len() {
        return Err(StabilizationError::LengthMismatch { expected: a.len(), got: b.len() });
    }
    Ok(wall_pattern(a.entries()) == wall_pattern(b.entries()))
}

/// Bitmask-indexed truth values of `Σ_I x ≤ 1` over subsets with `|I| ≥ 2`.
pub fn wall_pattern(x: &[Rational]) -> Vec<bool> {
    let n = x.len();
    assert!(n < 26, "too many coordinates for subset enumeration");
    let one = Rational::from_integer(1);
    let mut sums = vec![Rational::from_integer(0); 1 << n];
    let mut out = Vec::new();
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + x[low];
        if mask.count_ones() >= 2 {
            out.push(sums[mask] <= one);
        }
    }
    out
}
