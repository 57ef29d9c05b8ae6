//! Weighted stabilization with trivial monodromy, done the classical way:
//! contract any rational component with `#nodes + Σ weights ≤ 2`, in every order.

use std::collections::{BTreeMap, BTreeSet};

use twistab_core::curve::CurveGraph;
use twistab_core::rational::Rational;

/// Vertex id → (genus, degree, clusters); edges as sorted vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    pub vertices: BTreeMap<String, (u32, u32, BTreeSet<BTreeSet<usize>>)>,
    pub edges: Vec<(String, String)>,
}

impl Shape {
    pub fn of(graph: &CurveGraph) -> Self {
        let vertices = graph
            .vertices
            .iter()
            .map(|v| (v.id.clone(), (v.genus, v.degree, v.clusters.iter().map(|c| c.markings.clone()).collect())))
            .collect();
        let mut edges: Vec<(String, String)> = graph
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (e.ends[0].0.clone(), e.ends[1].0.clone());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort();
        Shape { vertices, edges }
    }

    fn valence(&self, v: &str) -> usize {
        self.edges.iter().map(|(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    fn weight(&self, v: &str, a: &[Rational]) -> Rational {
        self.vertices[v].2.iter().flatten().map(|&i| a[i - 1]).sum()
    }

    fn contractible(&self, v: &str, a: &[Rational]) -> bool {
        let (g, d, _) = &self.vertices[v];
        let val = self.valence(v);
        if *g != 0 || *d != 0 || val == 0 {
            return false;
        }
        if val == 2 && self.edges.iter().any(|(x, y)| x == v && y == v) {
            return false;
        }
        Rational::from_integer(val as i64) + self.weight(v, a) <= Rational::from_integer(2)
    }

    fn candidates(&self, a: &[Rational]) -> Vec<String> {
        self.vertices.keys().filter(|v| self.contractible(v, a)).cloned().collect()
    }

    fn contract(&self, v: &str) -> Shape {
        let mut s = self.clone();
        let (_, _, clusters) = s.vertices.remove(v).expect("vertex");
        let marks: BTreeSet<usize> = clusters.into_iter().flatten().collect();
        let mut nbrs = Vec::new();
        s.edges.retain(|(x, y)| {
            if x == v {
                nbrs.push(y.clone());
                false
            } else if y == v {
                nbrs.push(x.clone());
                false
            } else {
                true
            }
        });
        match nbrs.as_slice() {
            [w] => {
                if !marks.is_empty() {
                    s.vertices.get_mut(w).expect("neighbour").2.insert(marks);
                }
            }
            [w1, w2] => {
                let e = if w1 <= w2 { (w1.clone(), w2.clone()) } else { (w2.clone(), w1.clone()) };
                s.edges.push(e);
                s.edges.sort();
            }
            _ => unreachable!("only tails and bridges are contracted"),
        }
        s
    }

    /// Classical weighted stability of every component.
    pub fn is_stable(&self, a: &[Rational]) -> bool {
        self.vertices.iter().all(|(v, (g, d, clusters))| {
            if *d > 0 {
                return true;
            }
            let val = self.valence(v);
            let count = Rational::from_integer(val as i64) + self.weight(v, a);
            match g {
                0 => count > Rational::from_integer(2),
                1 => val + clusters.len() >= 1,
                _ => true,
            }
        })
    }
}

/// Follows one contraction order (smallest id first). `None` if no stable model exists.
pub fn stabilize_greedy(graph: &CurveGraph, a: &[Rational]) -> Option<Shape> {
    let mut s = Shape::of(graph);
    while let Some(v) = s.candidates(a).into_iter().next() {
        s = s.contract(&v);
    }
    s.is_stable(a).then_some(s)
}

/// All terminal shapes over every contraction order (memoized by state).
pub fn all_outcomes(graph: &CurveGraph, a: &[Rational]) -> BTreeSet<Option<Shape>> {
    let mut seen: BTreeSet<Shape> = BTreeSet::new();
    let mut out = BTreeSet::new();
    let mut stack = vec![Shape::of(graph)];
    while let Some(s) = stack.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        let c = s.candidates(a);
        if c.is_empty() {
            let ok = s.is_stable(a);
            out.insert(ok.then_some(s));
        } else {
            for v in c {
                stack.push(s.contract(&v));
            }
        }
    }
    out
}

/// Coarse Deligne–Mumford stability (weights all 1, distinct markings).
pub fn dm_stable(graph: &CurveGraph) -> bool {
    let s = Shape::of(graph);
    s.vertices.iter().all(|(v, (g, d, clusters))| {
        let special = s.valence(v) + clusters.iter().map(|c| c.len()).sum::<usize>();
        *d > 0
            || match g {
                0 => special >= 3,
                1 => special >= 1,
                _ => true,
            }
    })
}

/// Component-wise weighted inequality `2g − 2 + #nodes + Σ aᵢ > 0` on contracted components.
pub fn classical_weighted_stable(graph: &CurveGraph, a: &[Rational]) -> bool {
    let s = Shape::of(graph);
    s.vertices.iter().all(|(v, (g, d, _))| {
        *d > 0
            || Rational::from_integer(2 * *g as i64 - 2 + s.valence(v) as i64) + s.weight(v, a)
                > Rational::from_integer(0)
    })
}
