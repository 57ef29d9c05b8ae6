//! Prestability, stability and the abelian-contraction test.

use serde::Serialize;

use crate::curve::{validate, CurveError, CurveGraph, MonodromyAssignment, ViolationKind, WeightVector};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Offense {
    pub vertex: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub prestable: bool,
    pub representable: bool,
    pub finite_autos: bool,
    pub weighted_ok: bool,
    pub offending_vertices: Vec<Offense>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    InteriorBranch,
    ExtremalBranch,
    NotABranch,
}

fn check_length(graph: &CurveGraph, weights: &WeightVector) -> Result<(), CurveError> {
    if weights.len() != graph.n {
        return Err(CurveError::LengthMismatch { expected: graph.n, got: weights.len() });
    }
    Ok(())
}

/// Clusters whose weights sum past 1, as offenses.
pub fn prestability_offenses(graph: &CurveGraph, weights: &WeightVector) -> Result<Vec<Offense>, CurveError> {
    check_length(graph, weights)?;
    let mut out = Vec::new();
    for v in &graph.vertices {
        for (ci, c) in v.clusters.iter().enumerate() {
            let s = weights.sum_over(&c.markings);
            if s > Rational::from_integer(1) {
                out.push(Offense { vertex: v.id.clone(), reason: format!("cluster {ci} has total weight {s} > 1") });
            }
        }
    }
    Ok(out)
}

pub fn is_prestable(graph: &CurveGraph, weights: &WeightVector) -> Result<bool, CurveError> {
    Ok(prestability_offenses(graph, weights)?.is_empty())
}

/// `d_v = 0` and the local monodromy at `v` generates an abelian group.
pub fn has_abelian_contraction(graph: &CurveGraph, mono: &MonodromyAssignment, v: &str) -> bool {
    let Some(vx) = graph.vertex(v) else { return false };
    if vx.degree != 0 {
        return false;
    }
    match mono.local_subgroup(v, None) {
        Ok(s) => mono.group().is_abelian(&s),
        Err(_) => false,
    }
}

pub fn classify_branch(graph: &CurveGraph, v: &str) -> Branch {
    let Some(vx) = graph.vertex(v) else { return Branch::NotABranch };
    if vx.genus != 0 || vx.degree != 0 {
        return Branch::NotABranch;
    }
    match graph.valence(v) {
        1 => Branch::ExtremalBranch,
        2 => Branch::InteriorBranch,
        _ => Branch::NotABranch,
    }
}

/// Total weight of the markings on `v`.
pub fn marking_weight(graph: &CurveGraph, weights: &WeightVector, v: &str) -> Rational {
    graph.vertex(v).map(|vx| weights.sum_over(&vx.markings())).unwrap_or_default()
}

pub fn is_stable(
    graph: &CurveGraph,
    weights: &WeightVector,
    mono: &MonodromyAssignment,
) -> Result<StabilityReport, CurveError> {
    check_length(graph, weights)?;
    let structural: Vec<_> = validate(graph, Some(weights), Some(mono))
        .into_iter()
        .filter(|v| v.kind != ViolationKind::Representability)
        .collect();
    if !structural.is_empty() {
        return Err(CurveError::Invalid(structural));
    }
    let pre = prestability_offenses(graph, weights)?;
    if !pre.is_empty() {
        return Ok(StabilityReport {
            stable: false,
            prestable: false,
            representable: mono.is_representable(graph),
            finite_autos: false,
            weighted_ok: false,
            offending_vertices: pre,
        });
    }
    let mut offending = Vec::new();
    let representable = mono.is_representable(graph);
    if !representable {
        for v in mono.violations(graph) {
            if v.kind == ViolationKind::Representability {
                offending.push(Offense { vertex: v.location.clone(), reason: v.message });
            }
        }
    }
    let mut finite_autos = true;
    let mut weighted_ok = true;
    for v in &graph.vertices {
        let special = graph.special_points(&v.id).len();
        if v.degree == 0 {
            let need = match v.genus {
                0 => 3,
                1 => 1,
                _ => 0,
            };
            if special < need {
                finite_autos = false;
                offending.push(Offense {
                    vertex: v.id.clone(),
                    reason: format!(
                        "genus {} component with {special} special points has infinite automorphisms",
                        v.genus
                    ),
                });
            }
        }
        if v.genus == 0 && has_abelian_contraction(graph, mono, &v.id) {
            let count = Rational::from_integer(graph.valence(&v.id) as i64) + marking_weight(graph, weights, &v.id);
            if count <= Rational::from_integer(2) {
                weighted_ok = false;
                offending.push(Offense {
                    vertex: v.id.clone(),
                    reason: format!("rational component with abelian contraction has nodes plus weight {count} ≤ 2"),
                });
            }
        }
    }
    Ok(StabilityReport {
        stable: representable && finite_autos && weighted_ok,
        prestable: true,
        representable,
        finite_autos,
        weighted_ok,
        offending_vertices: offending,
    })
}
