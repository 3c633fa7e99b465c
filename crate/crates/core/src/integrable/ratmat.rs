use crate::symkernel::{Chart, RatFunc};

/// Solves `Σ_j x_j cols[j] = rhs` over rational functions by elimination.
/// Returns one solution (free unknowns set to zero) or `None`.
pub fn solve(chart: &Chart, cols: &[Vec<RatFunc>], rhs: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let m = rhs.len();
    let n = cols.len();
    let mut a: Vec<Vec<RatFunc>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).chain([rhs[i].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip().expect("nonzero pivot");
        a[row] = a[row].iter().map(|x| x * &inv).collect();
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[row].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![RatFunc::zero(chart); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][n].clone();
    }
    Some(x)
}

/// Inverse of a square matrix of rational functions.
pub fn inverse(chart: &Chart, z: &[Vec<RatFunc>]) -> Option<Vec<Vec<RatFunc>>> {
    let k = z.len();
    let cols: Vec<Vec<RatFunc>> = (0..k).map(|j| (0..k).map(|i| z[i][j].clone()).collect()).collect();
    let mut inv_cols = Vec::with_capacity(k);
    for e in 0..k {
        let rhs: Vec<RatFunc> = (0..k).map(|i| if i == e { RatFunc::one(chart) } else { RatFunc::zero(chart) }).collect();
        let x = solve(chart, &cols, &rhs)?;
        // a singular matrix leaves some unit vector unreachable or the solution non-unique
        let check: Vec<RatFunc> = (0..k).map(|i| (0..k).fold(RatFunc::zero(chart), |acc, j| &acc + &(&z[i][j] * &x[j]))).collect();
        if check != rhs {
            return None;
        }
        inv_cols.push(x);
    }
    Some((0..k).map(|i| (0..k).map(|j| inv_cols[j][i].clone()).collect()).collect())
}
