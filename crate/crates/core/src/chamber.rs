//! Chambers of weight space `(0,1]^n` cut out by the walls `Σ_I aᵢ = 1`, `|I| ≥ 2`.

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lp::{q, LinearProgram, LpOutcome, Relation, Q};
use crate::rational::Rational;

pub const MAX_CHAMBER_DIM: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChamberError {
    #[error("chamber enumeration supports 1 ≤ n ≤ {MAX_CHAMBER_DIM}, got {0}")]
    TooLarge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chamber {
    pub n: usize,
    /// Subsets (1-based, sorted) with `Σ_I aᵢ ≤ 1` throughout the chamber, sorted.
    pub family: Vec<Vec<usize>>,
    pub witness: Vec<Rational>,
}

impl Serialize for Chamber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("family", &self.family)?;
        m.serialize_entry("n", &self.n)?;
        let w: Vec<String> = self.witness.iter().map(|x| x.to_string()).collect();
        m.serialize_entry("witness", &w)?;
        m.end()
    }
}

impl Chamber {
    /// Whether `x` has this chamber's sign pattern.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.n && family_of(x) == self.family
    }
}

fn subsets_of_size_at_least_two(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0usize..1 << n).filter(|m| m.count_ones() >= 2).collect();
    v.sort_by_key(|m| (m.count_ones(), *m));
    v
}

fn mask_to_set(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

/// The family `{I : |I| ≥ 2, Σ_I xᵢ ≤ 1}` of a point.
pub fn family_of(x: &[Rational]) -> Vec<Vec<usize>> {
    let one = Rational::from_integer(1);
    let mut fam: Vec<Vec<usize>> = subsets_of_size_at_least_two(x.len())
        .into_iter()
        .filter(|&m| mask_to_set(m).iter().map(|&i| x[i - 1]).sum::<Rational>() <= one)
        .map(mask_to_set)
        .collect();
    fam.sort();
    fam
}

/// All downward-closed families of subsets of size ≥ 2, as membership masks over `subsets`.
fn downward_closed(n: usize, subsets: &[usize]) -> Vec<Vec<bool>> {
    let index: std::collections::HashMap<usize, usize> = subsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut out = Vec::new();
    let mut chosen = vec![false; subsets.len()];
    fn rec(
        k: usize,
        n: usize,
        subsets: &[usize],
        index: &std::collections::HashMap<usize, usize>,
        chosen: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if k == subsets.len() {
            out.push(chosen.clone());
            return;
        }
        chosen[k] = false;
        rec(k + 1, n, subsets, index, chosen, out);
        let m = subsets[k];
        let allowed =
            m.count_ones() == 2 || (0..n).filter(|i| m >> i & 1 == 1).all(|i| chosen[index[&(m & !(1 << i))]]);
        if allowed {
            chosen[k] = true;
            rec(k + 1, n, subsets, index, chosen, out);
            chosen[k] = false;
        }
    }
    rec(0, n, subsets, &index, &mut chosen, &mut out);
    out
}

/// `I ∈ F`, `J ∉ F` with `I = K ∪ {i}`, `J = K ∪ {j}` forces `aᵢ < aⱼ`; a cycle of such
/// strict inequalities rules the family out without solving an LP.
fn has_exchange_cycle(n: usize, subsets: &[usize], member: &[bool]) -> bool {
    let inside: std::collections::HashSet<usize> =
        subsets.iter().zip(member).filter(|(_, &b)| b).map(|(&m, _)| m).collect();
    let mut less = vec![vec![false; n]; n];
    for &a in &inside {
        for i in (0..n).filter(|i| a >> i & 1 == 1) {
            for j in (0..n).filter(|j| a >> j & 1 == 0) {
                let b = a & !(1 << i) | 1 << j;
                if !inside.contains(&b) {
                    less[i][j] = true;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if less[i][k] && less[k][j] {
                    less[i][j] = true;
                }
            }
        }
    }
    (0..n).any(|i| less[i][i])
}

/// Maximizes the slack `t` for a family; returns a witness if the optimum is positive.
fn realize(n: usize, subsets: &[usize], member: &[bool]) -> Option<Vec<Rational>> {
    if has_exchange_cycle(n, subsets, member) {
        return None;
    }
    let inside: Vec<usize> = subsets.iter().zip(member).filter(|(_, &b)| b).map(|(&m, _)| m).collect();
    let outside: Vec<usize> = subsets.iter().zip(member).filter(|(_, &b)| !b).map(|(&m, _)| m).collect();
    // maximal members and minimal non-members imply the rest since x ≥ 0
    let maximal = inside.iter().filter(|&&a| !inside.iter().any(|&b| b != a && b & a == a));
    let minimal = outside.iter().filter(|&&a| !outside.iter().any(|&b| b != a && b & a == b));
    let vars = n + 1; // x₁..x_n, t
    let mut obj = vec![q(0); vars];
    obj[n] = q(1);
    let mut lp = LinearProgram::new(vars, obj);
    let indicator = |m: usize| -> Vec<Q> { (0..vars).map(|i| q(i64::from(i < n && m >> i & 1 == 1))).collect() };
    for &m in maximal {
        lp.add(indicator(m), Relation::Le, q(1));
    }
    for &m in minimal {
        let mut row = indicator(m);
        row[n] = q(-1);
        lp.add(row, Relation::Ge, q(1));
    }
    for i in 0..n {
        let mut row = vec![q(0); vars];
        row[n] = q(1);
        row[i] = q(-1);
        lp.add(row, Relation::Le, q(0));
        lp.add(indicator(1 << i), Relation::Le, q(1));
    }
    match lp.solve() {
        LpOutcome::Optimal { value, point } if value > Q::zero() => Some(point[..n].iter().map(to_small).collect()),
        _ => None,
    }
}

fn to_small(x: &Q) -> Rational {
    Rational::new(x.numer().to_i64().expect("small witness"), x.denom().to_i64().expect("small witness"))
}

/// Every realizable chamber for `n` markings, sorted by family.
pub fn chambers(n: usize) -> Result<Vec<Chamber>, ChamberError> {
    if n == 0 || n > MAX_CHAMBER_DIM {
        return Err(ChamberError::TooLarge(n));
    }
    let subsets = subsets_of_size_at_least_two(n);
    let candidates = downward_closed(n, &subsets);
    let mut out: Vec<Chamber> = candidates
        .par_iter()
        .filter_map(|member| {
            let witness = realize(n, &subsets, member)?;
            let mut family: Vec<Vec<usize>> =
                subsets.iter().zip(member).filter(|(_, &b)| b).map(|(&m, _)| mask_to_set(m)).collect();
            family.sort();
            Some(Chamber { n, family, witness })
        })
        .collect();
    out.sort();
    Ok(out)
}
