//! Seeded random inputs: curves, weights, monodromy and monoids.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use twistab_core::curve::{
    validate, CurveGraph, Edge, MarkingCluster, MonodromyAssignment, PointRef, SpecialPointDatum, Vertex, WeightVector,
};
use twistab_core::groups::{FiniteGroup, GroupElement};
use twistab_core::monoid::AdmissibleMonoid;
use twistab_core::rational::Rational;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Seed from `TWISTAB_SEED`, or the given default.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("TWISTAB_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

#[derive(Clone, Debug)]
pub struct CurveShape {
    pub max_vertices: usize,
    pub max_markings: usize,
    /// Probability that a vertex has genus 0.
    pub rational: f64,
    /// Probability that a vertex has positive degree.
    pub positive_degree: f64,
    /// Expected number of edges beyond a spanning tree.
    pub extra_edges: f64,
    /// Probability that a marking joins an existing cluster on its vertex.
    pub coincide: f64,
}

impl Default for CurveShape {
    fn default() -> Self {
        CurveShape {
            max_vertices: 8,
            max_markings: 6,
            rational: 0.7,
            positive_degree: 0.1,
            extra_edges: 0.5,
            coincide: 0.25,
        }
    }
}

/// Random fraction `p/q` with `1 ≤ p ≤ q ≤ max_den`.
pub fn fraction(rng: &mut Rng64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    Rational::new(rng.gen_range(1..=q), q)
}

pub fn weights(rng: &mut Rng64, n: usize, max_den: i64) -> WeightVector {
    WeightVector::new((0..n).map(|_| fraction(rng, max_den)).collect()).expect("in (0,1]")
}

/// Weights making every cluster of `graph` sum to at most 1.
pub fn prestable_weights(rng: &mut Rng64, graph: &CurveGraph, max_den: i64) -> WeightVector {
    let mut a = vec![Rational::from_integer(1); graph.n];
    for v in &graph.vertices {
        for c in &v.clusters {
            loop {
                let draw: Vec<Rational> = c.markings.iter().map(|_| fraction(rng, max_den)).collect();
                if draw.iter().sum::<Rational>() <= Rational::from_integer(1) {
                    for (&i, x) in c.markings.iter().zip(draw) {
                        a[i - 1] = x;
                    }
                    break;
                }
            }
        }
    }
    WeightVector::new(a).expect("in (0,1]")
}

/// A connected graph with untwisted clusters and node orders 1.
pub fn curve(rng: &mut Rng64, shape: &CurveShape) -> CurveGraph {
    let k = rng.gen_range(1..=shape.max_vertices);
    let ids: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let mut vertices: Vec<Vertex> = ids
        .iter()
        .map(|id| {
            let genus = if rng.gen_bool(shape.rational) { 0 } else { rng.gen_range(1..=2) };
            let degree = if rng.gen_bool(shape.positive_degree) { rng.gen_range(1..=2) } else { 0 };
            Vertex::new(id, genus, degree)
        })
        .collect();
    let mut slots = vec![0usize; k];
    let mut edges = Vec::new();
    let mut add_edge = |a: usize, b: usize, edges: &mut Vec<Edge>| {
        let sa = slots[a];
        slots[a] += 1;
        let sb = slots[b];
        slots[b] += 1;
        let id = format!("e{}", edges.len());
        edges.push(Edge::new(&id, (&ids[a], sa), (&ids[b], sb), 1));
    };
    for i in 1..k {
        let j = rng.gen_range(0..i);
        add_edge(j, i, &mut edges);
    }
    let extra = (0..3).filter(|_| rng.gen_bool(shape.extra_edges / 3.0)).count();
    for _ in 0..extra {
        let a = rng.gen_range(0..k);
        let b = rng.gen_range(0..k);
        add_edge(a.min(b), a.max(b), &mut edges);
    }
    let n = rng.gen_range(0..=shape.max_markings);
    for i in 1..=n {
        let v = &mut vertices[rng.gen_range(0..k)];
        if !v.clusters.is_empty() && rng.gen_bool(shape.coincide) {
            let c = rng.gen_range(0..v.clusters.len());
            v.clusters[c].markings.insert(i);
        } else {
            v.clusters.push(MarkingCluster::new([i]));
        }
    }
    let mut g = CurveGraph::new(n, 0, vertices, edges);
    g.declared_genus = (g.genus_sum() as i64 + g.betti_number()) as u32;
    g
}

fn random_element(rng: &mut Rng64, g: &FiniteGroup) -> GroupElement {
    g.element(rng.gen_range(0..g.order()))
}

/// Assigns random monodromy satisfying every invariant, adjusting node orders and
/// cluster data of `graph` to match. `None` when the random choices cannot be completed.
pub fn monodromy(rng: &mut Rng64, graph: &mut CurveGraph, group: Arc<FiniteGroup>) -> Option<MonodromyAssignment> {
    let g = &*group;
    let commutator = g.commutator_subgroup();
    let comm: Vec<GroupElement> = commutator.elements(g).collect();
    // spanning tree by BFS from a root that carries a cluster when possible
    let root_ix = graph.vertices.iter().position(|v| !v.clusters.is_empty()).unwrap_or(0);
    let root = graph.vertices[root_ix].id.clone();
    let mut parent: BTreeMap<String, (String, usize)> = BTreeMap::new();
    let mut order = vec![root.clone()];
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(v) = queue.pop_front() {
        for (e, end) in graph.half_edges(&v) {
            let (w, wend) = graph.opposite(&e, end).expect("edge");
            if w != root && !parent.contains_key(&w) && w != v {
                parent.insert(w.clone(), (e.clone(), wend));
                order.push(w.clone());
                queue.push_back(w);
            }
        }
    }
    let tree_edges: Vec<&String> = parent.values().map(|(e, _)| e).collect();
    let mut loops: BTreeMap<(String, usize), GroupElement> = BTreeMap::new();
    for e in &graph.edges {
        if !tree_edges.contains(&&e.id) {
            let h = random_element(rng, g);
            loops.insert((e.id.clone(), 0), h);
            loops.insert((e.id.clone(), 1), g.inv(h));
        }
    }
    let mut cluster_loops: BTreeMap<(String, usize), GroupElement> = BTreeMap::new();
    let root_free = !graph.vertices[root_ix].clusters.is_empty();
    for v in &graph.vertices {
        for ci in 0..v.clusters.len() {
            if !(root_free && v.id == root && ci == 0) {
                cluster_loops.insert((v.id.clone(), ci), random_element(rng, g));
            }
        }
    }
    // per-vertex tuple order: default order, sometimes shuffled
    let mut tuples: BTreeMap<String, Vec<PointRef>> = BTreeMap::new();
    for v in &graph.vertices {
        let mut pts = graph.special_points(&v.id);
        if rng.gen_bool(0.3) {
            pts.shuffle(rng);
        }
        tuples.insert(v.id.clone(), pts);
    }
    let target = |rng: &mut Rng64, v: &Vertex| -> GroupElement {
        if v.genus >= 1 {
            *comm.choose(rng).expect("nonempty")
        } else if v.degree > 0 {
            random_element(rng, g)
        } else {
            g.identity()
        }
    };
    let value = |p: &PointRef,
                 v: &str,
                 loops: &BTreeMap<(String, usize), GroupElement>,
                 cl: &BTreeMap<(String, usize), GroupElement>| {
        match p {
            PointRef::HalfEdge { edge, end } => loops.get(&(edge.clone(), *end)).copied(),
            PointRef::Cluster(ci) => cl.get(&(v.to_string(), *ci)).copied(),
        }
    };
    for v in order.iter().rev() {
        let vx = graph.vertex(v).expect("vertex").clone();
        let free = match parent.get(v) {
            Some((e, end)) => PointRef::HalfEdge { edge: e.clone(), end: *end },
            None if root_free => PointRef::Cluster(0),
            None => {
                let prod = g.product(tuples[v].iter().map(|p| value(p, v, &loops, &cluster_loops).expect("known")));
                let ok = if vx.genus >= 1 { commutator.contains(prod) } else { vx.degree > 0 || prod == g.identity() };
                if !ok {
                    return None;
                }
                continue;
            }
        };
        let t = target(rng, &vx);
        let pts = &tuples[v];
        let pos = pts.iter().position(|p| *p == free).expect("free point listed");
        let prefix = g.product(pts[..pos].iter().map(|p| value(p, v, &loops, &cluster_loops).expect("known")));
        let suffix = g.product(pts[pos + 1..].iter().map(|p| value(p, v, &loops, &cluster_loops).expect("known")));
        let x = g.product([g.inv(prefix), t, g.inv(suffix)]);
        match free {
            PointRef::HalfEdge { edge, end } => {
                loops.insert((edge.clone(), end), x);
                loops.insert((edge, 1 - end), g.inv(x));
            }
            PointRef::Cluster(ci) => {
                cluster_loops.insert((v.clone(), ci), x);
            }
        }
    }
    // node orders and cluster data follow the loops
    for e in graph.edges.iter_mut() {
        e.order = g.element_order(loops[&(e.id.clone(), 0)]) as u64;
    }
    let mut data = BTreeMap::new();
    for v in graph.vertices.iter_mut() {
        let mut list = Vec::new();
        for p in &tuples[&v.id] {
            let x = value(p, &v.id, &loops, &cluster_loops).expect("assigned");
            let mut image = g.generated_subgroup(&[x]).expect("own");
            if let PointRef::Cluster(ci) = p {
                if rng.gen_bool(0.2) {
                    let y = random_element(rng, g);
                    let bigger = g.generated_subgroup(&[x, y]).expect("own");
                    if g.is_abelian(&bigger) {
                        image = bigger;
                    }
                }
                let c = &mut v.clusters[*ci];
                c.root_order = g.element_order(x) as u64;
                c.local_group = Some(g.abelian_invariants(&image).expect("abelian"));
            }
            list.push(SpecialPointDatum { point: p.clone(), loop_elem: x, image });
        }
        data.insert(v.id.clone(), list);
    }
    let m = MonodromyAssignment::new(group, data);
    debug_assert!(validate(graph, None, Some(&m)).is_empty(), "{:?}", validate(graph, None, Some(&m)));
    Some(m)
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: CurveGraph,
    pub weights: WeightVector,
    pub mono: MonodromyAssignment,
}

/// A valid prestable instance with monodromy in `group`.
pub fn instance(rng: &mut Rng64, shape: &CurveShape, group: &Arc<FiniteGroup>, max_den: i64) -> Instance {
    loop {
        let mut graph = curve(rng, shape);
        let Some(mono) = monodromy(rng, &mut graph, group.clone()) else { continue };
        let weights = prestable_weights(rng, &graph, max_den);
        return Instance { graph, weights, mono };
    }
}

/// Up to `max_gens` random generators in `[0,1)^dim` with denominators up to `max_den`.
pub fn monoid(rng: &mut Rng64, dim: usize, max_gens: usize, max_den: i64) -> AdmissibleMonoid {
    let k = rng.gen_range(1..=max_gens);
    let gens = (0..k)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let q = rng.gen_range(1..=max_den);
                    Rational::new(rng.gen_range(0..q), q)
                })
                .collect()
        })
        .collect();
    AdmissibleMonoid::new(dim, gens).expect("nonnegative")
}
