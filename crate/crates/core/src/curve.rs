//! Dual graphs of marked nodal curves with weights, coincident-marking clusters,
//! node orders and finite-group monodromy.
//!
//! Markings are numbered `1..=n`. A half-edge is addressed as `(edge id, end)`
//! where `end` indexes the edge's `ends` pair; the second entry of each end is
//! the slot of that half-edge at its vertex, used only to order special points.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::groups::{FiniteAbelianGroup, FiniteGroup, GroupElement, Subgroup};
use crate::rational::{parse_rational_list, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("vertex {0:?} is not a contractible rational tail")]
    NotATail(String),
    #[error("descent along tail {0:?} is obstructed: the local monodromy generates a non-abelian group")]
    NonAbelianDescent(String),
    #[error("vertex {0:?} is not a contractible rational bridge")]
    NotABridge(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("no monodromy data for vertex {0:?}")]
    MissingMonodromy(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("expected {expected} weights, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid input: {}", .0.first().map(|v| v.message.as_str()).unwrap_or(""))]
    Invalid(Vec<Violation>),
}

/// Weights `aᵢ ∈ (0, 1]`, indexed by marking `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self, CurveError> {
        for (i, a) in entries.iter().enumerate() {
            if *a <= Rational::zero() || *a > Rational::one() {
                return Err(CurveError::InvalidWeights(format!("weight {} = {a} is not in (0,1]", i + 1)));
            }
        }
        Ok(WeightVector(entries))
    }

    pub fn ones(n: usize) -> Self {
        WeightVector(vec![Rational::one(); n])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight of marking `i` (1-based).
    pub fn weight(&self, i: usize) -> Rational {
        self.0[i - 1]
    }

    pub fn sum_over<'a>(&self, markings: impl IntoIterator<Item = &'a usize>) -> Rational {
        markings.into_iter().map(|&i| self.weight(i)).sum()
    }

    /// `self ≤ other` coordinatewise.
    pub fn dominated_by(&self, other: &WeightVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl FromStr for WeightVector {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, CurveError> {
        WeightVector::new(parse_rational_list(s).map_err(CurveError::InvalidWeights)?)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        let joined = parts.join(",");
        joined.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkingCluster {
    pub markings: BTreeSet<usize>,
    pub root_order: u64,
    /// Stabilizer type at the cluster; `None` means cyclic of order `root_order`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_group: Option<FiniteAbelianGroup>,
}

impl MarkingCluster {
    /// An untwisted cluster.
    pub fn new(markings: impl IntoIterator<Item = usize>) -> Self {
        MarkingCluster { markings: markings.into_iter().collect(), root_order: 1, local_group: None }
    }

    pub fn twisted(markings: impl IntoIterator<Item = usize>, root_order: u64) -> Self {
        MarkingCluster { markings: markings.into_iter().collect(), root_order, local_group: None }
    }

    pub fn local_group(&self) -> FiniteAbelianGroup {
        self.local_group.clone().unwrap_or_else(|| FiniteAbelianGroup::cyclic(self.root_order))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    /// `(vertex id, slot at that vertex)` for both ends.
    pub ends: [(String, usize); 2],
    pub order: u64,
}

impl Edge {
    pub fn new(id: &str, a: (&str, usize), b: (&str, usize), order: u64) -> Self {
        Edge { id: id.into(), ends: [(a.0.into(), a.1), (b.0.into(), b.1)], order }
    }

    pub fn is_self_loop(&self) -> bool {
        self.ends[0].0 == self.ends[1].0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub degree: u32,
    #[serde(default)]
    pub clusters: Vec<MarkingCluster>,
}

impl Vertex {
    pub fn new(id: &str, genus: u32, degree: u32) -> Self {
        Vertex { id: id.into(), genus, degree, clusters: Vec::new() }
    }

    pub fn with_cluster(mut self, c: MarkingCluster) -> Self {
        self.clusters.push(c);
        self
    }

    pub fn markings(&self) -> BTreeSet<usize> {
        self.clusters.iter().flat_map(|c| c.markings.iter().copied()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveGraph {
    #[serde(default)]
    pub n: usize,
    #[serde(rename = "genus", default)]
    pub declared_genus: u32,
    #[serde(default)]
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

/// A point of a vertex that is special: a half-edge or a marking cluster.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointRef {
    HalfEdge { edge: String, end: usize },
    Cluster(usize),
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::HalfEdge { edge, end } => write!(f, "edge:{edge}:{end}"),
            PointRef::Cluster(i) => write!(f, "cluster:{i}"),
        }
    }
}

impl FromStr for PointRef {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad point reference {s:?} (expected edge:ID:END or cluster:IDX)");
        if let Some(rest) = s.strip_prefix("cluster:") {
            return rest.parse().map(PointRef::Cluster).map_err(|_| bad());
        }
        let rest = s.strip_prefix("edge:").ok_or_else(bad)?;
        let (edge, end) = rest.rsplit_once(':').ok_or_else(bad)?;
        let end: usize = end.parse().map_err(|_| bad())?;
        if end > 1 || edge.is_empty() {
            return Err(bad());
        }
        Ok(PointRef::HalfEdge { edge: edge.into(), end })
    }
}

impl Serialize for PointRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PointRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Structure,
    Genus,
    Markings,
    Weights,
    Monodromy,
    Representability,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, location: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { kind, location: location.into(), message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl CurveGraph {
    pub fn new(n: usize, declared_genus: u32, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        CurveGraph { n, declared_genus, vertices, edges }
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn vertex_mut(&mut self, id: &str) -> Option<&mut Vertex> {
        self.vertices.iter_mut().find(|v| v.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn vertex_ids(&self) -> BTreeSet<String> {
        self.vertices.iter().map(|v| v.id.clone()).collect()
    }

    /// Half-edges at `v`, ordered by slot (then edge id and end).
    pub fn half_edges(&self, v: &str) -> Vec<(String, usize)> {
        let mut out: Vec<(usize, String, usize)> = Vec::new();
        for e in &self.edges {
            for (k, (w, slot)) in e.ends.iter().enumerate() {
                if w == v {
                    out.push((*slot, e.id.clone(), k));
                }
            }
        }
        out.sort();
        out.into_iter().map(|(_, e, k)| (e, k)).collect()
    }

    pub fn valence(&self, v: &str) -> usize {
        self.half_edges(v).len()
    }

    /// Incident half-edges followed by clusters: the default order of special points.
    pub fn special_points(&self, v: &str) -> Vec<PointRef> {
        let mut pts: Vec<PointRef> =
            self.half_edges(v).into_iter().map(|(edge, end)| PointRef::HalfEdge { edge, end }).collect();
        if let Some(vx) = self.vertex(v) {
            pts.extend((0..vx.clusters.len()).map(PointRef::Cluster));
        }
        pts
    }

    /// Vertex at the far side of a half-edge, with the far end index.
    pub fn opposite(&self, edge: &str, end: usize) -> Option<(String, usize)> {
        let e = self.edge(edge)?;
        Some((e.ends[1 - end].0.clone(), 1 - end))
    }

    pub fn is_connected(&self) -> bool {
        let Some(first) = self.vertices.first() else { return false };
        let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
        for e in &self.edges {
            adj.entry(&e.ends[0].0).or_default().push(&e.ends[1].0);
            adj.entry(&e.ends[1].0).or_default().push(&e.ends[0].0);
        }
        let mut seen: BTreeSet<&str> = BTreeSet::from([first.id.as_str()]);
        let mut queue = VecDeque::from([first.id.as_str()]);
        while let Some(v) = queue.pop_front() {
            for &w in adj.get(v).map(|x| x.as_slice()).unwrap_or(&[]) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        self.vertices.iter().all(|v| seen.contains(v.id.as_str()))
    }

    /// First Betti number of a connected graph.
    pub fn betti_number(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn genus_sum(&self) -> u32 {
        self.vertices.iter().map(|v| v.genus).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.vertices.iter().map(|v| v.degree).sum()
    }

    pub fn all_markings(&self) -> BTreeSet<usize> {
        self.vertices.iter().flat_map(|v| v.markings()).collect()
    }

    /// Structural violations of the graph alone, and of `weights` if given.
    pub fn violations(&self, weights: Option<&WeightVector>) -> Vec<Violation> {
        use ViolationKind::*;
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push(Violation::new(Structure, "curve", "curve must be connected and nonempty"));
            return out;
        }
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.as_str()) {
                out.push(Violation::new(Structure, format!("vertex {}", v.id), "duplicate vertex id"));
            }
        }
        let mut eids = BTreeSet::new();
        let mut slots: BTreeSet<(&str, usize)> = BTreeSet::new();
        for e in &self.edges {
            let loc = format!("edge {}", e.id);
            if !eids.insert(e.id.as_str()) {
                out.push(Violation::new(Structure, &loc, "duplicate edge id"));
            }
            if e.order == 0 {
                out.push(Violation::new(Structure, &loc, "node order must be positive"));
            }
            for (w, slot) in &e.ends {
                if !ids.contains(w.as_str()) {
                    out.push(Violation::new(Structure, &loc, format!("unknown endpoint {w:?}")));
                } else if !slots.insert((w.as_str(), *slot)) {
                    out.push(Violation::new(Structure, &loc, format!("slot {slot} at {w} is used twice")));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        if !self.is_connected() {
            out.push(Violation::new(Structure, "curve", "curve must be connected and nonempty"));
            return out;
        }
        let b1 = self.betti_number();
        let gs = self.genus_sum();
        if self.declared_genus as i64 != gs as i64 + b1 {
            out.push(Violation::new(Genus, "curve", format!("genus formula: {} ≠ {}+{}", self.declared_genus, gs, b1)));
        }
        let mut seen: BTreeMap<usize, &str> = BTreeMap::new();
        for v in &self.vertices {
            for (ci, c) in v.clusters.iter().enumerate() {
                let loc = format!("vertex {} cluster {ci}", v.id);
                if c.markings.is_empty() {
                    out.push(Violation::new(Markings, &loc, "cluster has no markings"));
                }
                if c.root_order == 0 {
                    out.push(Violation::new(Markings, &loc, "root order must be positive"));
                }
                for &i in &c.markings {
                    if i == 0 || i > self.n {
                        out.push(Violation::new(Markings, &loc, format!("marking {i} is outside 1..{}", self.n)));
                    } else if let Some(prev) = seen.insert(i, &v.id) {
                        out.push(Violation::new(
                            Markings,
                            &loc,
                            format!("marking {i} already appears at vertex {prev}"),
                        ));
                    }
                }
            }
        }
        for i in 1..=self.n {
            if !seen.contains_key(&i) {
                out.push(Violation::new(Markings, "curve", format!("marking {i} appears in no cluster")));
            }
        }
        if let Some(w) = weights {
            if w.len() != self.n {
                out.push(Violation::new(Weights, "weights", format!("expected {} weights, got {}", self.n, w.len())));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialPointDatum {
    pub point: PointRef,
    pub loop_elem: GroupElement,
    /// For clusters the image of the stabilizer, for half-edges `⟨loop⟩`.
    pub image: Subgroup,
}

/// Local monodromy: per vertex an ordered tuple of loops, one per special point.
#[derive(Clone, Debug)]
pub struct MonodromyAssignment {
    group: Arc<FiniteGroup>,
    data: BTreeMap<String, Vec<SpecialPointDatum>>,
}

impl PartialEq for MonodromyAssignment {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.data == other.data
    }
}

impl Eq for MonodromyAssignment {}

impl MonodromyAssignment {
    pub fn new(group: Arc<FiniteGroup>, data: BTreeMap<String, Vec<SpecialPointDatum>>) -> Self {
        MonodromyAssignment { group, data }
    }

    /// All loops trivial, in the default special-point order.
    pub fn identity_on(graph: &CurveGraph, group: Arc<FiniteGroup>) -> Self {
        let e = group.identity();
        let triv = group.generated_subgroup(&[]).expect("identity");
        let data = graph
            .vertices
            .iter()
            .map(|v| {
                let pts = graph
                    .special_points(&v.id)
                    .into_iter()
                    .map(|point| SpecialPointDatum { point, loop_elem: e, image: triv.clone() })
                    .collect();
                (v.id.clone(), pts)
            })
            .collect();
        MonodromyAssignment { group, data }
    }

    /// The trivial group with trivial loops.
    pub fn trivial(graph: &CurveGraph) -> Self {
        Self::identity_on(graph, Arc::new(FiniteGroup::trivial()))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn at(&self, v: &str) -> Option<&[SpecialPointDatum]> {
        self.data.get(v).map(|x| x.as_slice())
    }

    pub fn data(&self) -> &BTreeMap<String, Vec<SpecialPointDatum>> {
        &self.data
    }

    pub fn datum(&self, v: &str, p: &PointRef) -> Option<&SpecialPointDatum> {
        self.at(v)?.iter().find(|d| &d.point == p)
    }

    /// Subgroup generated by the images of all special points of `v` (optionally skipping one).
    pub fn local_subgroup(&self, v: &str, skip: Option<&PointRef>) -> Result<Subgroup, CurveError> {
        let pts = self.at(v).ok_or_else(|| CurveError::MissingMonodromy(v.into()))?;
        let images = pts.iter().filter(|d| Some(&d.point) != skip).map(|d| &d.image);
        self.group.join(images).map_err(|_| CurveError::MissingMonodromy(v.into()))
    }

    /// Simultaneous conjugation of every loop and image by `k`.
    pub fn conjugated(&self, k: GroupElement) -> Self {
        let g = &self.group;
        let data = self
            .data
            .iter()
            .map(|(v, pts)| {
                let pts = pts
                    .iter()
                    .map(|d| {
                        let imgs: Vec<GroupElement> = d.image.elements(g).map(|x| g.conjugate(x, k)).collect();
                        SpecialPointDatum {
                            point: d.point.clone(),
                            loop_elem: g.conjugate(d.loop_elem, k),
                            image: g.subgroup_from_elements(&imgs).expect("conjugate of a subgroup"),
                        }
                    })
                    .collect();
                (v.clone(), pts)
            })
            .collect();
        MonodromyAssignment { group: self.group.clone(), data }
    }

    /// Violations of the product, pairing and cluster invariants, and (separately tagged)
    /// of representability.
    pub fn violations(&self, graph: &CurveGraph) -> Vec<Violation> {
        use ViolationKind::*;
        let g = &*self.group;
        let mut out = Vec::new();
        for v in &graph.vertices {
            let loc = format!("vertex {}", v.id);
            let Some(pts) = self.data.get(&v.id) else {
                out.push(Violation::new(Monodromy, &loc, "no monodromy data"));
                continue;
            };
            let expected: BTreeSet<PointRef> = graph.special_points(&v.id).into_iter().collect();
            let given: Vec<PointRef> = pts.iter().map(|d| d.point.clone()).collect();
            let given_set: BTreeSet<PointRef> = given.iter().cloned().collect();
            if given_set != expected || given.len() != expected.len() {
                out.push(Violation::new(Monodromy, &loc, "loop tuple does not list each special point exactly once"));
                continue;
            }
            if pts.iter().any(|d| !g.owns(d.loop_elem) || d.image.group() != g.id()) {
                out.push(Violation::new(Monodromy, &loc, "element of a different group"));
                continue;
            }
            let prod = g.product(pts.iter().map(|d| d.loop_elem));
            if v.genus == 0 && v.degree == 0 && prod != g.identity() {
                out.push(Violation::new(
                    Monodromy,
                    &loc,
                    format!("product-one fails: product of loops is {}", g.format_element(prod)),
                ));
            }
            if v.genus >= 1 && !g.commutator_subgroup().contains(prod) {
                out.push(Violation::new(Monodromy, &loc, "product of loops is not in the commutator subgroup"));
            }
            for d in pts {
                let ploc = format!("{loc} {}", d.point);
                match &d.point {
                    PointRef::HalfEdge { edge, end } => {
                        let cyc = g.generated_subgroup(&[d.loop_elem]).expect("own element");
                        if d.image != cyc {
                            out.push(Violation::new(
                                Monodromy,
                                &ploc,
                                "half-edge image must be the cyclic group of its loop",
                            ));
                        }
                        let (w, k) = graph.opposite(edge, *end).expect("listed edge exists");
                        match self.datum(&w, &PointRef::HalfEdge { edge: edge.clone(), end: k }) {
                            Some(o) if g.mul(o.loop_elem, d.loop_elem) == g.identity() => {}
                            _ => out.push(Violation::new(
                                Monodromy,
                                &ploc,
                                "loops at the two ends of a node are not inverse",
                            )),
                        }
                        let order = graph.edge(edge).expect("edge").order;
                        if g.element_order(d.loop_elem) as u64 != order {
                            out.push(Violation::new(
                                Representability,
                                &ploc,
                                format!(
                                    "loop has order {} but the node has order {order}",
                                    g.element_order(d.loop_elem)
                                ),
                            ));
                        }
                    }
                    PointRef::Cluster(ci) => {
                        let c = &v.clusters[*ci];
                        if !d.image.contains(d.loop_elem) {
                            out.push(Violation::new(Monodromy, &ploc, "cluster loop is not in its image subgroup"));
                        }
                        if !g.is_abelian(&d.image) {
                            out.push(Violation::new(Monodromy, &ploc, "cluster image subgroup is not abelian"));
                        }
                        if d.image.order() as u64 != c.local_group().order() {
                            out.push(Violation::new(
                                Representability,
                                &ploc,
                                format!(
                                    "image subgroup has order {} but the local group has order {}",
                                    d.image.order(),
                                    c.local_group().order()
                                ),
                            ));
                        }
                        if g.element_order(d.loop_elem) as u64 != c.root_order {
                            out.push(Violation::new(
                                Representability,
                                &ploc,
                                format!(
                                    "loop has order {} but the root order is {}",
                                    g.element_order(d.loop_elem),
                                    c.root_order
                                ),
                            ));
                        }
                    }
                }
            }
        }
        for id in self.data.keys() {
            if graph.vertex(id).is_none() {
                out.push(Violation::new(Monodromy, format!("vertex {id}"), "monodromy given for an unknown vertex"));
            }
        }
        out
    }

    pub fn is_representable(&self, graph: &CurveGraph) -> bool {
        !self.violations(graph).iter().any(|v| v.kind == ViolationKind::Representability)
    }
}

/// All violated invariants; empty iff the input is valid.
pub fn validate(
    graph: &CurveGraph,
    weights: Option<&WeightVector>,
    mono: Option<&MonodromyAssignment>,
) -> Vec<Violation> {
    let mut out = graph.violations(weights);
    if out.iter().any(|v| v.kind == ViolationKind::Structure) {
        return out;
    }
    if let Some(m) = mono {
        out.extend(m.violations(graph));
    }
    out
}

/// Contracts the rational tail `v` into a new marking cluster on its neighbour.
pub fn contract_tail(
    graph: &CurveGraph,
    mono: &MonodromyAssignment,
    v: &str,
) -> Result<(CurveGraph, MonodromyAssignment), CurveError> {
    let vx = graph.vertex(v).ok_or_else(|| CurveError::UnknownVertex(v.into()))?;
    let hes = graph.half_edges(v);
    if vx.genus != 0 || vx.degree != 0 || hes.len() != 1 {
        return Err(CurveError::NotATail(v.into()));
    }
    let (edge, end) = hes[0].clone();
    let node = PointRef::HalfEdge { edge: edge.clone(), end };
    let sub = mono.local_subgroup(v, Some(&node))?;
    let g = mono.group();
    let Some(local_group) = g.abelian_invariants(&sub) else {
        return Err(CurveError::NonAbelianDescent(v.into()));
    };
    let (w, wend) = graph.opposite(&edge, end).expect("edge exists");
    let wpoint = PointRef::HalfEdge { edge: edge.clone(), end: wend };
    let wloop = mono.datum(&w, &wpoint).ok_or_else(|| CurveError::MissingMonodromy(w.clone()))?.loop_elem;
    let markings = vx.markings();

    let mut out = graph.clone();
    out.vertices.retain(|x| x.id != v);
    out.edges.retain(|e| e.id != edge);
    let mut data = mono.data.clone();
    data.remove(v);
    let wdata = data.get_mut(&w).ok_or_else(|| CurveError::MissingMonodromy(w.clone()))?;
    let pos = wdata.iter().position(|d| d.point == wpoint).expect("datum exists");
    if markings.is_empty() {
        wdata.remove(pos);
    } else {
        let wv = out.vertex_mut(&w).expect("neighbour exists");
        wv.clusters.push(MarkingCluster {
            markings,
            root_order: g.element_order(wloop) as u64,
            local_group: Some(local_group),
        });
        wdata[pos] =
            SpecialPointDatum { point: PointRef::Cluster(wv.clusters.len() - 1), loop_elem: wloop, image: sub };
    }
    Ok((out, MonodromyAssignment { group: mono.group.clone(), data }))
}

/// Contracts the rational bridge `v`, merging its two edges into one.
pub fn contract_bridge(
    graph: &CurveGraph,
    mono: &MonodromyAssignment,
    v: &str,
) -> Result<(CurveGraph, MonodromyAssignment), CurveError> {
    let vx = graph.vertex(v).ok_or_else(|| CurveError::UnknownVertex(v.into()))?;
    let hes = graph.half_edges(v);
    let not = || CurveError::NotABridge(v.into());
    if vx.genus != 0 || vx.degree != 0 || !vx.clusters.is_empty() || hes.len() != 2 || hes[0].0 == hes[1].0 {
        return Err(not());
    }
    let g = mono.group();
    let loops: Vec<GroupElement> = hes
        .iter()
        .map(|(e, k)| mono.datum(v, &PointRef::HalfEdge { edge: e.clone(), end: *k }).map(|d| d.loop_elem))
        .collect::<Option<_>>()
        .ok_or_else(|| CurveError::MissingMonodromy(v.into()))?;
    if g.mul(loops[0], loops[1]) != g.identity() {
        return Err(not());
    }
    let mut sorted = hes.clone();
    sorted.sort();
    let (e1, k1) = &sorted[0];
    let (e2, k2) = &sorted[1];
    let far1 = graph.edge(e1).expect("edge").ends[1 - k1].clone();
    let far2 = graph.edge(e2).expect("edge").ends[1 - k2].clone();
    let merged = Edge { id: e1.clone(), ends: [far1.clone(), far2.clone()], order: g.element_order(loops[0]) as u64 };
    let remap: HashMap<PointRef, PointRef> = HashMap::from([
        (PointRef::HalfEdge { edge: e1.clone(), end: 1 - k1 }, PointRef::HalfEdge { edge: e1.clone(), end: 0 }),
        (PointRef::HalfEdge { edge: e2.clone(), end: 1 - k2 }, PointRef::HalfEdge { edge: e1.clone(), end: 1 }),
    ]);

    let mut out = graph.clone();
    out.vertices.retain(|x| x.id != v);
    out.edges.retain(|e| e.id != *e1 && e.id != *e2);
    out.edges.push(merged);
    out.edges.sort_by(|a, b| a.id.cmp(&b.id));
    let mut data = mono.data.clone();
    data.remove(v);
    let targets: BTreeSet<&String> = [&far1.0, &far2.0].into_iter().collect();
    for x in targets {
        if let Some(pts) = data.get_mut(x) {
            for d in pts.iter_mut() {
                if let Some(p) = remap.get(&d.point) {
                    d.point = p.clone();
                }
            }
        }
    }
    Ok((out, MonodromyAssignment { group: mono.group.clone(), data }))
}

/// `(edge id, sorted [(vertex, slot)], order)`
pub type CanonicalEdge = (String, [(String, usize); 2], u64);

/// `(point key, loop index, image indices, root order, local group)`
pub type CanonicalPoint = (String, usize, Vec<usize>, u64, Vec<u64>);

/// A relabeling-independent description of a curve with monodromy, for comparing
/// outputs of different contraction orders.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalForm {
    pub genus: u32,
    pub vertices: Vec<CanonicalVertex>,
    pub edges: Vec<CanonicalEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalVertex {
    pub id: String,
    pub genus: u32,
    pub degree: u32,
    /// In tuple order.
    pub points: Vec<CanonicalPoint>,
}

pub fn canonical_form(graph: &CurveGraph, mono: &MonodromyAssignment) -> CanonicalForm {
    let g = mono.group();
    let mut vertices: Vec<CanonicalVertex> = graph
        .vertices
        .iter()
        .map(|v| {
            let pts = mono.at(&v.id).unwrap_or(&[]);
            let points = pts
                .iter()
                .map(|d| {
                    let (key, ro, lg) = match &d.point {
                        PointRef::HalfEdge { edge, end } => {
                            let slot = graph.edge(edge).map(|e| e.ends[*end].1).unwrap_or(usize::MAX);
                            (format!("edge {edge} slot {slot}"), 0, Vec::new())
                        }
                        PointRef::Cluster(ci) => {
                            let c = &v.clusters[*ci];
                            let ms: Vec<String> = c.markings.iter().map(|m| m.to_string()).collect();
                            (
                                format!("cluster {}", ms.join(",")),
                                c.root_order,
                                c.local_group().invariant_factors().to_vec(),
                            )
                        }
                    };
                    (key, d.loop_elem.index(), d.image.elements(g).map(|x| x.index()).collect(), ro, lg)
                })
                .collect();
            CanonicalVertex { id: v.id.clone(), genus: v.genus, degree: v.degree, points }
        })
        .collect();
    vertices.sort();
    let mut edges: Vec<_> = graph
        .edges
        .iter()
        .map(|e| {
            let mut ends = e.ends.clone();
            ends.sort();
            (e.id.clone(), ends, e.order)
        })
        .collect();
    edges.sort();
    CanonicalForm { genus: graph.declared_genus, vertices, edges }
}

/// The coarse shape only: vertex ids with genus, degree and marking clusters, and the
/// multiset of edges as unordered vertex pairs. Ignores ids of edges, slots and monodromy.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoarseShape {
    pub vertices: Vec<(String, u32, u32, Vec<Vec<usize>>)>,
    pub edges: Vec<(String, String, u64)>,
}

pub fn coarse_shape(graph: &CurveGraph) -> CoarseShape {
    let mut vertices: Vec<_> = graph
        .vertices
        .iter()
        .map(|v| {
            let mut cl: Vec<Vec<usize>> = v.clusters.iter().map(|c| c.markings.iter().copied().collect()).collect();
            cl.sort();
            (v.id.clone(), v.genus, v.degree, cl)
        })
        .collect();
    vertices.sort();
    let mut edges: Vec<_> = graph
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (e.ends[0].0.clone(), e.ends[1].0.clone());
            if a <= b {
                (a, b, e.order)
            } else {
                (b, a, e.order)
            }
        })
        .collect();
    edges.sort();
    CoarseShape { vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3).unwrap())
    }

    fn el(g: &FiniteGroup, s: &str) -> GroupElement {
        g.parse_element(s).unwrap()
    }

    fn datum(g: &FiniteGroup, point: &str, l: &str) -> SpecialPointDatum {
        let x = el(g, l);
        SpecialPointDatum { point: point.parse().unwrap(), loop_elem: x, image: g.generated_subgroup(&[x]).unwrap() }
    }

    /// genus-1 `a` joined to genus-0 tail `t` carrying clusters {1}, {2}.
    fn tail_curve() -> CurveGraph {
        CurveGraph::new(
            2,
            1,
            vec![
                Vertex::new("a", 1, 0),
                Vertex::new("t", 0, 0).with_cluster(MarkingCluster::new([1])).with_cluster(MarkingCluster::new([2])),
            ],
            vec![Edge::new("e", ("a", 0), ("t", 0), 1)],
        )
    }

    #[test]
    fn genus_one_vertex_is_valid() {
        let c = CurveGraph::new(0, 1, vec![Vertex::new("v", 1, 0)], vec![]);
        assert!(validate(&c, None, None).is_empty());
    }

    #[test]
    fn genus_formula_violation() {
        let c = CurveGraph::new(
            0,
            0,
            vec![Vertex::new("a", 0, 0), Vertex::new("b", 0, 0)],
            vec![Edge::new("e1", ("a", 0), ("b", 0), 1), Edge::new("e2", ("a", 1), ("b", 1), 1)],
        );
        let v = validate(&c, None, None);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "genus formula: 0 ≠ 0+1");
    }

    #[test]
    fn empty_curve() {
        let c = CurveGraph::new(0, 0, vec![], vec![]);
        assert_eq!(validate(&c, None, None)[0].message, "curve must be connected and nonempty");
    }

    #[test]
    fn product_one_fails() {
        let g = s3();
        let c = CurveGraph::new(
            2,
            0,
            vec![Vertex::new("v", 0, 0)
                .with_cluster(MarkingCluster::twisted([1], 2))
                .with_cluster(MarkingCluster::twisted([2], 2))],
            vec![],
        );
        let data =
            BTreeMap::from([("v".to_string(), vec![datum(&g, "cluster:0", "(1 2)"), datum(&g, "cluster:1", "(1 3)")])]);
        let m = MonodromyAssignment::new(g, data);
        let v = validate(&c, None, Some(&m));
        assert!(v.iter().any(|x| x.message.starts_with("product-one fails")), "{v:?}");
    }

    #[test]
    fn special_point_counts() {
        let c = CurveGraph::new(
            1,
            1,
            vec![Vertex::new("v", 0, 0).with_cluster(MarkingCluster::new([1]))],
            vec![Edge::new("e", ("v", 0), ("v", 1), 1)],
        );
        assert_eq!(c.special_points("v").len(), 3);
        let lonely = CurveGraph::new(0, 0, vec![Vertex::new("v", 0, 0)], vec![]);
        assert_eq!(lonely.special_points("v").len(), 0);
        let four = CurveGraph::new(
            2,
            0,
            vec![
                Vertex::new("v", 0, 0).with_cluster(MarkingCluster::new([1])).with_cluster(MarkingCluster::new([2])),
                Vertex::new("a", 1, 0),
                Vertex::new("b", 1, 0),
            ],
            vec![Edge::new("x", ("v", 0), ("a", 0), 1), Edge::new("y", ("v", 1), ("b", 0), 1)],
        );
        assert_eq!(four.special_points("v").len(), 4);
    }

    #[test]
    fn contract_trivial_tail() {
        let c = tail_curve();
        let m = MonodromyAssignment::trivial(&c);
        assert!(validate(&c, None, Some(&m)).is_empty());
        let (c2, m2) = contract_tail(&c, &m, "t").unwrap();
        assert_eq!(c2.vertices.len(), 1);
        assert!(c2.edges.is_empty());
        let a = &c2.vertices[0];
        assert_eq!(a.genus, 1);
        assert_eq!(
            a.clusters,
            vec![MarkingCluster {
                markings: BTreeSet::from([1, 2]),
                root_order: 1,
                local_group: Some(FiniteAbelianGroup::trivial())
            }]
        );
        assert_eq!(m2.at("a").unwrap()[0].image.order(), 1);
        assert!(validate(&c2, None, Some(&m2)).is_empty());
    }

    fn s3_tail(l1: &str, l2: &str, node: &str) -> (CurveGraph, MonodromyAssignment) {
        let g = s3();
        let node_loop = el(&g, node);
        let order = g.element_order(node_loop) as u64;
        let c = CurveGraph::new(
            2,
            1,
            vec![
                Vertex::new("a", 1, 0),
                Vertex::new("t", 0, 0)
                    .with_cluster(MarkingCluster::twisted([1], 2))
                    .with_cluster(MarkingCluster::twisted([2], 2)),
            ],
            vec![Edge::new("e", ("a", 0), ("t", 0), order)],
        );
        let inv = g.format_element(g.inv(node_loop));
        let data = BTreeMap::from([
            ("a".to_string(), vec![datum(&g, "edge:e:0", &inv)]),
            (
                "t".to_string(),
                vec![datum(&g, "edge:e:1", node), datum(&g, "cluster:0", l1), datum(&g, "cluster:1", l2)],
            ),
        ]);
        (c, MonodromyAssignment::new(g, data))
    }

    #[test]
    fn contract_s3_tail_abelian() {
        let (c, m) = s3_tail("(1 2)", "(1 2)", "()");
        assert!(validate(&c, None, Some(&m)).is_empty(), "{:?}", validate(&c, None, Some(&m)));
        let (c2, m2) = contract_tail(&c, &m, "t").unwrap();
        let d = &m2.at("a").unwrap()[0];
        let g = m2.group();
        assert_eq!(d.point, PointRef::Cluster(0));
        assert_eq!(d.loop_elem, g.identity());
        assert_eq!(d.image.order(), 2);
        assert!(d.image.contains(el(g, "(1 2)")));
        assert_eq!(c2.vertices[0].clusters[0].root_order, 1);
    }

    #[test]
    fn contract_s3_tail_nonabelian() {
        // (1 2)(1 3) = (1 2 3) under left-to-right composition; close the relation with its inverse
        let g = s3();
        let p = g.mul(el(&g, "(1 2)"), el(&g, "(1 3)"));
        let node = g.format_element(g.inv(p));
        let (c, m) = s3_tail("(1 2)", "(1 3)", &node);
        assert!(validate(&c, None, Some(&m)).iter().all(|v| v.kind != ViolationKind::Monodromy));
        assert_eq!(contract_tail(&c, &m, "t"), Err(CurveError::NonAbelianDescent("t".into())));
    }

    #[test]
    fn whole_curve_is_not_a_tail() {
        let c = CurveGraph::new(0, 0, vec![Vertex::new("v", 0, 0)], vec![]);
        let m = MonodromyAssignment::trivial(&c);
        assert!(matches!(contract_tail(&c, &m, "v"), Err(CurveError::NotATail(_))));
    }

    fn chain(h: &str) -> (CurveGraph, MonodromyAssignment) {
        let g = s3();
        let hx = el(&g, h);
        let hi = g.format_element(g.inv(hx));
        let o = g.element_order(hx) as u64;
        let c = CurveGraph::new(
            0,
            2,
            vec![Vertex::new("v1", 1, 0), Vertex::new("b", 0, 0), Vertex::new("v2", 1, 0)],
            vec![Edge::new("e1", ("v1", 0), ("b", 0), o), Edge::new("e2", ("b", 1), ("v2", 0), o)],
        );
        let data = BTreeMap::from([
            ("v1".to_string(), vec![datum(&g, "edge:e1:0", &hi)]),
            ("b".to_string(), vec![datum(&g, "edge:e1:1", h), datum(&g, "edge:e2:0", &hi)]),
            ("v2".to_string(), vec![datum(&g, "edge:e2:1", h)]),
        ]);
        (c, MonodromyAssignment::new(g, data))
    }

    #[test]
    fn bridge_with_three_cycle() {
        let (c, m) = chain("(1 2 3)");
        assert!(validate(&c, None, Some(&m)).is_empty(), "{:?}", validate(&c, None, Some(&m)));
        let (c2, m2) = contract_bridge(&c, &m, "b").unwrap();
        assert_eq!(c2.edges.len(), 1);
        assert_eq!(c2.edges[0].order, 3);
        assert_eq!(c2.edges[0].id, "e1");
        assert_eq!(m2.at("v1").unwrap()[0].loop_elem, m.at("v1").unwrap()[0].loop_elem);
        assert_eq!(m2.at("v2").unwrap()[0].loop_elem, m.at("v2").unwrap()[0].loop_elem);
        assert!(validate(&c2, None, Some(&m2)).is_empty(), "{:?}", validate(&c2, None, Some(&m2)));
    }

    #[test]
    fn trivial_bridge_and_marked_bridge() {
        let (c, m) = chain("()");
        let (c2, _) = contract_bridge(&c, &m, "b").unwrap();
        assert_eq!(c2.edges[0].order, 1);
        let mut marked = c.clone();
        marked.n = 1;
        marked.vertices[1].clusters.push(MarkingCluster::new([1]));
        assert!(matches!(contract_bridge(&marked, &m, "b"), Err(CurveError::NotABridge(_))));
    }

    #[test]
    fn bridge_to_self_becomes_self_loop() {
        let c = CurveGraph::new(
            0,
            2,
            vec![Vertex::new("v", 1, 0), Vertex::new("b", 0, 0)],
            vec![Edge::new("e1", ("v", 0), ("b", 0), 1), Edge::new("e2", ("b", 1), ("v", 1), 1)],
        );
        let m = MonodromyAssignment::trivial(&c);
        assert!(validate(&c, None, Some(&m)).is_empty());
        let (c2, m2) = contract_bridge(&c, &m, "b").unwrap();
        assert!(c2.edges[0].is_self_loop());
        assert_eq!(c2.declared_genus, c2.genus_sum() + c2.betti_number() as u32);
        assert!(validate(&c2, None, Some(&m2)).is_empty(), "{:?}", validate(&c2, None, Some(&m2)));
    }

    #[test]
    fn bridge_to_self_reversed_ends() {
        // the bridge sits at end 0 of the smaller edge, so that edge's far end is end 1
        let c = CurveGraph::new(
            0,
            2,
            vec![Vertex::new("b", 0, 0), Vertex::new("v", 1, 0)],
            vec![Edge::new("e1", ("b", 0), ("v", 0), 1), Edge::new("e2", ("v", 1), ("b", 1), 1)],
        );
        let m = MonodromyAssignment::trivial(&c);
        let (c2, m2) = contract_bridge(&c, &m, "b").unwrap();
        assert_eq!(c2.edges[0].ends, [("v".to_string(), 0), ("v".to_string(), 1)]);
        let points: Vec<String> = m2.at("v").unwrap().iter().map(|d| d.point.to_string()).collect();
        assert_eq!(points, ["edge:e1:0", "edge:e1:1"]);
        assert!(validate(&c2, None, Some(&m2)).is_empty(), "{:?}", validate(&c2, None, Some(&m2)));
    }

    #[test]
    fn bridge_conjugation_equivariance() {
        let (c, m) = chain("(1 2 3)");
        let g = m.group().clone();
        for k in g.elements() {
            let (c_a, m_a) = contract_bridge(&c, &m.conjugated(k), "b").unwrap();
            let (c_b, m_b) = contract_bridge(&c, &m, "b").unwrap();
            assert_eq!(c_a, c_b);
            assert_eq!(m_a, m_b.conjugated(k));
        }
    }

    #[test]
    fn point_refs_round_trip() {
        for s in ["edge:e1:0", "edge:a:b:1", "cluster:3"] {
            assert_eq!(s.parse::<PointRef>().unwrap().to_string(), s);
        }
        assert!("edge:e:2".parse::<PointRef>().is_err());
        assert!("node:1".parse::<PointRef>().is_err());
    }

    #[test]
    fn weights() {
        let w: WeightVector = "1/2, 1".parse().unwrap();
        assert_eq!(w.to_string(), "1/2,1");
        assert!("0,1".parse::<WeightVector>().is_err());
        assert!("3/2".parse::<WeightVector>().is_err());
        let j = serde_json::to_string(&w).unwrap();
        assert_eq!(j, r#"["1/2","1"]"#);
        assert_eq!(serde_json::from_str::<WeightVector>(&j).unwrap(), w);
    }
}
