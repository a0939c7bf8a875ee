//! Small dense matrices over cyclotomic numbers.

use super::CycNum;

pub type CycMatrix = Vec<Vec<CycNum>>;

pub fn identity(n: usize) -> CycMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { CycNum::one() } else { CycNum::zero() })
                .collect()
        })
        .collect()
}

pub fn mul(a: &CycMatrix, b: &CycMatrix) -> CycMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = CycNum::zero();
                    for l in 0..inner {
                        if a[i][l].is_zero() || b[l][j].is_zero() {
                            continue;
                        }
                        acc = acc + &a[i][l] * &b[l][j];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn scale(a: &CycMatrix, c: &CycNum) -> CycMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| x * c).collect())
        .collect()
}

pub fn trace(a: &CycMatrix) -> CycNum {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// Row echelon reduction in place; returns pivot columns.
fn rref(a: &mut CycMatrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                if a[r][j].is_zero() {
                    continue;
                }
                let t = &f * &a[r][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn inverse(a: &CycMatrix) -> Option<CycMatrix> {
    let n = a.len();
    let mut aug: CycMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { CycNum::one() } else { CycNum::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(a: &CycMatrix) -> CycNum {
    let n = a.len();
    let mut m = a.clone();
    let mut det = CycNum::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return CycNum::zero();
        };
        if pr != c {
            m.swap(pr, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                if m[c][j].is_zero() {
                    continue;
                }
                let t = &f * &m[c][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    det
}

/// Basis of `{x : a x = 0}`.
pub fn right_nullspace(a: &CycMatrix, cols: usize) -> Vec<Vec<CycNum>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![CycNum::zero(); cols];
            x[free] = CycNum::one();
            for (i, &c) in pivots.iter().enumerate() {
                x[c] = -&m[i][free];
            }
            x
        })
        .collect()
}
