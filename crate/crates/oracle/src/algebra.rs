//! Oracles for the abelian-group side: determinantal divisors, torsor tuples,
//! and X_m by closure in (Q/Z)^n. None of these use Smith normal form.

use std::collections::{BTreeSet, HashSet, VecDeque};

use twistab_core::groups::{FiniteGroup, GroupElement};
use twistab_core::monoid::AdmissibleMonoid;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors (≥ 2) of `Z^rows / (columns)` via gcds of minors, or `None` if infinite.
pub fn cokernel_by_minors(a: &[Vec<i64>]) -> Option<Vec<u64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = 1i64;
    let mut out = Vec::new();
    for k in 1..=rows {
        let mut dk = 0i64;
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                dk = gcd(dk, det(&sub));
            }
        }
        if dk == 0 {
            return None;
        }
        let f = dk / prev;
        if f > 1 {
            out.push(f as u64);
        }
        prev = dk;
    }
    Some(out)
}

/// Abelianized orbifold fundamental group of P¹ with cone points `r₁..r_k, m`.
pub fn orbifold_abelianization_by_minors(r: &[u64], m: u64) -> Vec<u64> {
    let k = r.len();
    let mut a = vec![vec![0i64; k + 2]; k + 1];
    for (i, &ri) in r.iter().enumerate() {
        a[i][i] = ri as i64;
    }
    a[k][k] = m as i64;
    for row in a.iter_mut() {
        row[k + 1] = 1;
    }
    cokernel_by_minors(&a).expect("finite")
}

fn element_order(g: &FiniteGroup, x: GroupElement) -> u64 {
    let mut y = x;
    let mut k = 1;
    while y != g.identity() {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

fn canonical(g: &FiniteGroup, t: &[GroupElement]) -> Vec<usize> {
    g.elements()
        .map(|h| t.iter().map(|&x| g.mul(g.mul(h, x), g.inv(h)).index()).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Tuples `(g₁..g_k, h)` with `gᵢ^{rᵢ} = e`, `h^m = e`, `g₁⋯g_k·h = e`, pairwise commuting,
/// counted up to simultaneous conjugation.
pub fn torsor_count_brute(r: &[u64], m: u64, g: &FiniteGroup) -> usize {
    let cands: Vec<Vec<GroupElement>> =
        r.iter().map(|&ri| g.elements().filter(|&x| ri % element_order(g, x) == 0).collect()).collect();
    let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut tuple: Vec<GroupElement> = Vec::new();
    fn go(
        k: usize,
        cands: &[Vec<GroupElement>],
        m: u64,
        g: &FiniteGroup,
        tuple: &mut Vec<GroupElement>,
        classes: &mut BTreeSet<Vec<usize>>,
    ) {
        if k == cands.len() {
            let p = tuple.iter().fold(g.identity(), |acc, &x| g.mul(acc, x));
            let h = g.inv(p);
            if !m.is_multiple_of(element_order(g, h)) || !tuple.iter().all(|&x| g.mul(x, h) == g.mul(h, x)) {
                return;
            }
            let mut full = tuple.clone();
            full.push(h);
            classes.insert(canonical(g, &full));
            return;
        }
        for &x in &cands[k] {
            if tuple.iter().all(|&y| g.mul(x, y) == g.mul(y, x)) {
                tuple.push(x);
                go(k + 1, cands, m, g, tuple, classes);
                tuple.pop();
            }
        }
    }
    go(0, &cands, m, g, &mut tuple, &mut classes);
    classes.len()
}

/// `|Hom(Z/a, Z/b)|` by listing images of the generator.
pub fn cyclic_hom_count(a: u64, b: u64) -> usize {
    (0..b).filter(|x| (a * x).is_multiple_of(b)).count()
}

/// `|X|` and `|X_m|` by closing the generator classes in `(1/D)Z^n / Z^n`.
pub fn xm_count_brute(n: &AdmissibleMonoid, m: u64) -> (usize, usize) {
    let d = n.generators().iter().flatten().fold(1i64, |acc, x| acc / gcd(acc, *x.denom()) * x.denom());
    let gens: Vec<Vec<i64>> =
        n.generators().iter().map(|v| v.iter().map(|x| (x * d).to_integer().rem_euclid(d)).collect()).collect();
    let zero = vec![0i64; n.dim()];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for gv in &gens {
            let y: Vec<i64> = x.iter().zip(gv).map(|(a, b)| (a + b) % d).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let in_xm = seen.iter().filter(|x| (m as i64 * x.iter().sum::<i64>()) % d == 0).count();
    (seen.len(), in_xm)
}
