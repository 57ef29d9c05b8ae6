//! Chamber sign patterns sampled on the rational grid `{1/N, …, N/N}^n`.

use std::collections::BTreeSet;

/// Subsets `I` (1-based, `|I| ≥ 2`) with `Σ_I kᵢ ≤ N`, sorted.
pub fn pattern(k: &[u64], denom: u64) -> Vec<Vec<usize>> {
    let n = k.len();
    let mut fam = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() < 2 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if idx.iter().map(|&i| k[i]).sum::<u64>() <= denom {
            fam.push(idx.iter().map(|i| i + 1).collect());
        }
    }
    fam.sort();
    fam
}

/// Visits every grid point as numerators over `denom`.
pub fn for_each_point(n: usize, denom: u64, mut f: impl FnMut(&[u64])) {
    let mut k = vec![1u64; n];
    loop {
        f(&k);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if k[i] < denom {
                k[i] += 1;
                break;
            }
            k[i] = 1;
            i += 1;
        }
    }
}

/// Distinct sign patterns met by the grid.
pub fn grid_chambers(n: usize, denom: u64) -> BTreeSet<Vec<Vec<usize>>> {
    let mut out = BTreeSet::new();
    for_each_point(n, denom, |k| {
        out.insert(pattern(k, denom));
    });
    out
}
