//! Smith normal form over the integers, with the unimodular transforms.
//!
//! Matrices are dense `Vec<Vec<i64>>` in row-major order. Entries stay small at
//! the sizes this crate works with; arithmetic overflow panics in debug builds.

use num_integer::Integer;

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Builds a matrix whose columns are the given vectors (all of length `rows`).
pub fn from_columns(cols: &[Vec<i64>], rows: usize) -> IntMatrix {
    let mut m = vec![vec![0; cols.len()]; rows];
    for (j, c) in cols.iter().enumerate() {
        assert_eq!(c.len(), rows, "column length mismatch");
        for i in 0..rows {
            m[i][j] = c[i];
        }
    }
    m
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[t][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `left * input * right = diag`, with `left`, `right` unimodular and the
/// nonzero diagonal entries positive and successively dividing.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<i64>,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| **d != 0).count()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    uinv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn row_axpy(&mut self, dst: usize, src: usize, q: i64) {
        // row_dst += q * row_src
        if q == 0 {
            return;
        }
        for j in 0..self.a[0].len() {
            self.a[dst][j] += q * self.a[src][j];
        }
        for j in 0..self.u[0].len() {
            self.u[dst][j] += q * self.u[src][j];
        }
        for row in self.uinv.iter_mut() {
            row[src] -= q * row[dst];
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: i64) {
        if q == 0 {
            return;
        }
        for row in self.a.iter_mut() {
            row[dst] += q * row[src];
        }
        for row in self.v.iter_mut() {
            row[dst] += q * row[src];
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.uinv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -*x;
        }
        for row in self.uinv.iter_mut() {
            row[i] = -row[i];
        }
    }
}

pub fn smith(input: &IntMatrix, cols: usize) -> SmithForm {
    let rows = input.len();
    if let Some(r) = input.first() {
        assert_eq!(r.len(), cols);
    }
    let mut w = Work { a: input.clone(), u: identity(rows), uinv: identity(rows), v: identity(cols) };
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = w.a[i][j];
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            if w.a[t][t] < 0 {
                w.negate_row(t);
            }
            let p = w.a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = Integer::div_floor(&w.a[i][t], &p);
                w.row_axpy(i, t, -q);
                dirty |= w.a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = Integer::div_floor(&w.a[t][j], &p);
                w.col_axpy(j, t, -q);
                dirty |= w.a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut bad_row = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if w.a[i][j] % p != 0 {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => w.row_axpy(t, i, 1),
                None => break,
            }
        }
    }
    let diag = (0..steps).map(|i| w.a[i][i]).collect();
    SmithForm { diag, left: w.u, left_inv: w.uinv, right: w.v, rows, cols }
}

/// Structure of the cokernel `Z^rows / A Z^cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    /// Torsion invariant factors, each at least 2, successively dividing.
    pub torsion: Vec<i64>,
    pub free_rank: usize,
}

pub fn cokernel(a: &IntMatrix, cols: usize) -> Cokernel {
    let sf = smith(a, cols);
    let rank = sf.rank();
    let torsion = sf.diag.iter().copied().filter(|d| *d > 1).collect();
    Cokernel { torsion, free_rank: sf.rows - rank }
}

/// Integer kernel basis of `A` (as column vectors of length `cols`).
pub fn kernel_basis(a: &IntMatrix, cols: usize) -> Vec<Vec<i64>> {
    let sf = smith(a, cols);
    let rank = sf.rank();
    (rank..cols).map(|j| sf.right.iter().map(|row| row[j]).collect()).collect()
}

/// Invariant factors (each `>= 2`) of `L / M`, where `L` is the full-rank
/// lattice in `Z^dim` spanned by `big` and `M ⊆ L` is spanned by `small`.
/// Returns `None` if `L` is not full rank, `M` is not contained in `L`,
/// or `M` has lower rank (infinite quotient).
pub fn lattice_quotient(big: &[Vec<i64>], small: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    let a = from_columns(big, dim);
    let sf = smith(&a, big.len());
    if sf.rank() < dim {
        return None;
    }
    // L = left_inv * diag(e) Z^dim; coordinates of x in that basis are diag(e)^-1 * left * x
    let mut coords = Vec::with_capacity(small.len());
    for m in small {
        let y = mat_vec(&sf.left, m);
        let mut c = Vec::with_capacity(dim);
        for (&yi, &e) in y.iter().zip(&sf.diag).take(dim) {
            if yi % e != 0 {
                return None;
            }
            c.push(yi / e);
        }
        coords.push(c);
    }
    let cm = from_columns(&coords, dim);
    let ck = cokernel(&cm, small.len());
    if ck.free_rank != 0 {
        return None;
    }
    Some(ck.torsion)
}

/// Normalizes an arbitrary list of cyclic orders `Z/c_1 ⊕ ... ⊕ Z/c_k` to invariant factors.
pub fn normalize_cyclic_orders(orders: &[i64]) -> Vec<i64> {
    let k = orders.len();
    let mut m = vec![vec![0; k]; k];
    for (i, c) in orders.iter().enumerate() {
        m[i][i] = *c;
    }
    cokernel(&m, k).torsion
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntMatrix, cols: usize) -> SmithForm {
        let sf = smith(a, cols);
        let d = mat_mul(&mat_mul(&sf.left, a), &sf.right);
        for i in 0..sf.rows {
            for j in 0..cols {
                let want = if i == j { sf.diag[i] } else { 0 };
                assert_eq!(d[i][j], want, "not diagonal: {d:?}");
            }
        }
        assert_eq!(mat_mul(&sf.left, &sf.left_inv), identity(sf.rows));
        let nz: Vec<_> = sf.diag.iter().filter(|x| **x != 0).collect();
        for w in nz.windows(2) {
            assert!(*w[0] > 0 && w[1] % w[0] == 0);
        }
        sf
    }

    #[test]
    fn half_generator() {
        // N = <1/2> in Q^1 scaled by 2: lattice generated by 1 and 2, mod 2Z
        assert_eq!(lattice_quotient(&[vec![1], vec![2]], &[vec![2]], 1), Some(vec![2]));
    }

    #[test]
    fn known_forms() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(check(&a, 3).diag, vec![2, 6, 12]);
        assert_eq!(normalize_cyclic_orders(&[2, 3]), vec![6]);
        assert_eq!(normalize_cyclic_orders(&[4, 6]), vec![2, 12]);
        assert_eq!(normalize_cyclic_orders(&[1, 1]), Vec::<i64>::new());
    }

    #[test]
    fn kernel_of_row() {
        let k = kernel_basis(&vec![vec![2, 3, -6]], 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!(2 * v[0] + 3 * v[1] - 6 * v[2], 0);
        }
    }

    fn brute_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        let mut s = 0;
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            s += sign * m[0][j] * brute_det(&minor);
        }
        s
    }

    proptest! {
        #[test]
        fn smith_is_valid(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
            let a: IntMatrix = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let sf = check(&a, cols);
            if rows == cols {
                let prod: i64 = sf.diag.iter().product();
                prop_assert_eq!(prod.abs(), brute_det(&a).abs());
            }
        }
    }
}
