//! Exact two-phase simplex over the rationals with Bland's pivoting rule.
//!
//! Solves `maximize c·x` subject to linear constraints and `x ≥ 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize, objective: Vec<Q>) -> Self {
        assert_eq!(objective.len(), num_vars);
        LinearProgram { num_vars, objective, constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    /// `rows[i]` has `cols` coefficients followed by the right-hand side.
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    cols: usize,
    num_vars: usize,
    artificial_from: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.constraints.len();
        let n = lp.num_vars;
        // normalize to rhs ≥ 0
        let norm: Vec<(Vec<Q>, Relation, Q)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|x| -x).collect(), rel, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let slacks = norm.iter().filter(|c| c.1 != Relation::Eq).count();
        let artificials = norm.iter().filter(|c| c.1 != Relation::Le).count();
        let cols = n + slacks + artificials;
        let artificial_from = n + slacks;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (n, artificial_from);
        for (coeffs, rel, rhs) in norm {
            let mut row = vec![Q::zero(); cols + 1];
            row[..n].clone_from_slice(&coeffs);
            row[cols] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Q::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Q::one();
                    s += 1;
                    row[a] = Q::one();
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Q::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        Tableau { rows, basis, cols, num_vars: n, artificial_from }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Q]) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        self.basis[r] = c;
    }

    /// Objective row `obj[j] = reduced cost` (entering when negative) over columns `< limit`.
    fn optimize(&mut self, obj: &mut [Q], limit: usize) -> bool {
        loop {
            let Some(c) = (0..limit).find(|&j| obj[j].is_negative()) else { return true };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c, obj);
        }
    }

    fn objective_row(&self, costs: &[Q]) -> Vec<Q> {
        // obj[j] = c_B·B⁻¹A_j − c_j, last entry the current value
        let mut obj = vec![Q::zero(); self.cols + 1];
        for (j, c) in costs.iter().enumerate() {
            obj[j] = -c.clone();
        }
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = costs.get(b).cloned().unwrap_or_else(Q::zero);
            if !cb.is_zero() {
                for (x, y) in obj.iter_mut().zip(&self.rows[i]) {
                    *x += &cb * y;
                }
            }
        }
        obj
    }

    fn solve(mut self, objective: &[Q]) -> LpOutcome {
        if self.artificial_from < self.cols {
            let mut costs = vec![Q::zero(); self.cols];
            for c in costs.iter_mut().skip(self.artificial_from) {
                *c = -Q::one();
            }
            let mut obj = self.objective_row(&costs);
            self.optimize(&mut obj, self.cols);
            if obj[self.cols].is_negative() {
                return LpOutcome::Infeasible;
            }
            // drive artificials out of the basis
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.artificial_from {
                    match (0..self.artificial_from).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => self.pivot(i, j, &mut obj),
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut costs = vec![Q::zero(); self.cols];
        costs[..self.num_vars].clone_from_slice(objective);
        let mut obj = self.objective_row(&costs);
        if !self.optimize(&mut obj, self.artificial_from) {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![Q::zero(); self.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                point[b] = self.rows[i][self.cols].clone();
            }
        }
        LpOutcome::Optimal { value: obj[self.cols].clone(), point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn textbook() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let mut lp = LinearProgram::new(2, qs(&[3, 5]));
        lp.add(qs(&[1, 0]), Relation::Le, q(4));
        lp.add(qs(&[0, 2]), Relation::Le, q(12));
        lp.add(qs(&[3, 2]), Relation::Le, q(18));
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: q(36), point: qs(&[2, 6]) });
    }

    #[test]
    fn needs_phase_one() {
        // max −x − y, x + y ≥ 2, x − y = 1/2
        let mut lp = LinearProgram::new(2, qs(&[-1, -1]));
        lp.add(qs(&[1, 1]), Relation::Ge, q(2));
        lp.add(qs(&[1, -1]), Relation::Eq, Q::new(1.into(), 2.into()));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q(-2));
                assert_eq!(&point[0] - &point[1], Q::new(1.into(), 2.into()));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, qs(&[1]));
        lp.add(qs(&[1]), Relation::Le, q(1));
        lp.add(qs(&[1]), Relation::Ge, q(2));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(2, qs(&[1, 0]));
        lp.add(qs(&[-1, 1]), Relation::Le, q(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
        let mut lp = LinearProgram::new(1, qs(&[1]));
        lp.add(qs(&[-1]), Relation::Ge, q(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook rule; Bland's rule terminates at 1/20
        let f = |a: i64, b: i64| Q::new(a.into(), b.into());
        let mut lp = LinearProgram::new(4, vec![f(3, 4), q(-150), f(1, 50), q(-6)]);
        lp.add(vec![f(1, 4), q(-60), f(-1, 25), q(9)], Relation::Le, q(0));
        lp.add(vec![f(1, 2), q(-90), f(-1, 50), q(3)], Relation::Le, q(0));
        lp.add(vec![q(0), q(0), q(1), q(0)], Relation::Le, q(1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, f(1, 20)),
            o => panic!("{o:?}"),
        }
    }
}
