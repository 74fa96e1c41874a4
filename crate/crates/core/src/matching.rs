//! Minimum-cost matching of eigenvalues between neighbouring samples.

use num_complex::Complex64;

const PERMS2: [[usize; 2]; 2] = [[0, 1], [1, 0]];
const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Returns `a` with `a[i]` the index in `next` assigned to `prev[i]`,
/// minimising `Σ_i |next[a[i]] − prev[i]|`.
pub fn assign(prev: &[Complex64], next: &[Complex64]) -> Vec<usize> {
    debug_assert_eq!(prev.len(), next.len());
    let cost = |i: usize, j: usize| (next[j] - prev[i]).norm();
    match prev.len() {
        0 => Vec::new(),
        1 => vec![0],
        2 => best_of(&PERMS2, cost),
        3 => best_of(&PERMS3, cost),
        n => hungarian(n, cost),
    }
}

fn best_of<const N: usize>(perms: &[[usize; N]], cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut best = (f64::INFINITY, &perms[0]);
    for p in perms {
        let total: f64 = p.iter().enumerate().map(|(i, &j)| cost(i, j)).sum();
        if total < best.0 {
            best = (total, p);
        }
    }
    best.1.to_vec()
}

/// O(n³) Hungarian algorithm with potentials (rows = prev, columns = next).
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    // col_owner[j] = row matched to column j (1-based, 0 = none)
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=n {
        out[col_owner[j] - 1] = j - 1;
    }
    out
}
