//! Dense matrices over a [`GaloisField`], row-vector convention.

use crate::field::{Fq, GaloisField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fq>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fq>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, k: &GaloisField) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = i * other.cols;
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let src = other.row(l);
                for (j, &b) in src.iter().enumerate() {
                    if b != 0 {
                        out.data[dst + j] = k.add(out.data[dst + j], k.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat, k: &GaloisField) -> Mat {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| k.add(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: Fq, k: &GaloisField) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| k.mul(a, c)).collect(),
        }
    }

    /// `v · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Fq], k: &GaloisField) -> Vec<Fq> {
        let mut out = vec![0; self.cols];
        for (l, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in self.row(l).iter().enumerate() {
                if b != 0 {
                    out[j] = k.add(out[j], k.mul(a, b));
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, k: &GaloisField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = self.get(r, j);
                self.set(r, j, k.mul(v, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                let nf = k.neg(f);
                for j in c..self.cols {
                    let v = self.get(r, j);
                    if v != 0 {
                        let cur = self.get(i, j);
                        self.set(i, j, k.add(cur, k.mul(nf, v)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, k: &GaloisField) -> usize {
        self.clone().rref(k).len()
    }

    /// Basis of `{x : self · x = 0}` (column vectors, returned as rows).
    pub fn right_nullspace(&self, k: &GaloisField) -> Vec<Vec<Fq>> {
        let mut a = self.clone();
        let pivots = a.rref(k);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0; self.cols];
            x[free] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                x[c] = k.neg(a.get(i, free));
            }
            out.push(x);
        }
        out
    }

    /// Basis of `{v : v · self = 0}`.
    pub fn left_nullspace(&self, k: &GaloisField) -> Vec<Vec<Fq>> {
        self.transpose().right_nullspace(k)
    }

    pub fn inverse(&self, k: &GaloisField) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref(k);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial (constant term first, monic) via
    /// reduction to Hessenberg form.
    pub fn charpoly(&self, k: &GaloisField) -> Vec<Fq> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut h = self.clone();
        // similarity transforms to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(piv) = (c + 1..n).find(|&i| h.get(i, c) != 0) else {
                continue;
            };
            if piv != c + 1 {
                for j in 0..n {
                    h.data.swap(piv * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + c + 1);
                }
            }
            let inv = k.inv(h.get(c + 1, c)).unwrap();
            for i in c + 2..n {
                let f = k.mul(h.get(i, c), inv);
                if f == 0 {
                    continue;
                }
                // row_i -= f row_{c+1}; col_{c+1} += f col_i
                for j in 0..n {
                    let v = h.get(c + 1, j);
                    if v != 0 {
                        let cur = h.get(i, j);
                        h.set(i, j, k.sub(cur, k.mul(f, v)));
                    }
                }
                for r in 0..n {
                    let v = h.get(r, i);
                    if v != 0 {
                        let cur = h.get(r, c + 1);
                        h.set(r, c + 1, k.add(cur, k.mul(f, v)));
                    }
                }
            }
        }
        // p_0 = 1, p_m(x) = (x - h_mm) p_{m-1} - Σ h_{i,m} Π h_{j,j-1} p_{i-1}
        let mut polys: Vec<Vec<Fq>> = vec![vec![1]];
        for m in 0..n {
            let prev = &polys[m];
            let mut next = vec![0; m + 2];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] = k.add(next[i + 1], c);
                next[i] = k.sub(next[i], k.mul(c, h.get(m, m)));
            }
            let mut prod = 1;
            for i in (0..m).rev() {
                prod = k.mul(prod, h.get(i + 1, i));
                if prod == 0 {
                    break;
                }
                let coef = k.mul(h.get(i, m), prod);
                if coef == 0 {
                    continue;
                }
                for (j, &c) in polys[i].iter().enumerate() {
                    next[j] = k.sub(next[j], k.mul(coef, c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

/// A subspace held as a reduced echelon basis, supporting incremental
/// insertion (used for spinning).
#[derive(Debug, Clone)]
pub struct Echelon {
    pub dim: usize,
    basis: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, v: &mut [Fq], k: &GaloisField) {
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p];
            if c == 0 {
                continue;
            }
            let nc = k.neg(c);
            for (x, &y) in v.iter_mut().zip(b) {
                if y != 0 {
                    *x = k.add(*x, k.mul(nc, y));
                }
            }
        }
    }

    /// Adds `v` if it is new; returns whether it was.
    pub fn insert(&mut self, mut v: Vec<Fq>, k: &GaloisField) -> bool {
        self.reduce(&mut v, k);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = k.inv(v[p]).unwrap();
        for x in v.iter_mut() {
            *x = k.mul(*x, inv);
        }
        // keep the basis fully reduced
        for b in self.basis.iter_mut() {
            let c = b[p];
            if c != 0 {
                let nc = k.neg(c);
                for (x, &y) in b.iter_mut().zip(&v) {
                    if y != 0 {
                        *x = k.add(*x, k.mul(nc, y));
                    }
                }
            }
        }
        self.basis.push(v);
        self.pivots.push(p);
        true
    }

    /// Coordinates of `v` (assumed in the span) in the echelon basis.
    pub fn coords(&self, v: &[Fq]) -> Vec<Fq> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }
}

/// Spin `seeds` under the matrices `gens`: the smallest invariant
/// subspace containing them.
pub fn spin(seeds: &[Vec<Fq>], gens: &[Mat], k: &GaloisField) -> Echelon {
    let dim = gens.first().map_or(seeds.first().map_or(0, |s| s.len()), |g| g.rows);
    let mut space = Echelon::new(dim);
    let mut queue: Vec<Vec<Fq>> = Vec::new();
    for s in seeds {
        if space.insert(s.clone(), k) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = g.vec_mul(&v, k);
            if space.insert(w.clone(), k) {
                queue.push(w);
            }
        }
        if space.len() == dim {
            break;
        }
    }
    space
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_nullspace() {
        let k = GaloisField::get(7, 1);
        let a = Mat::from_rows(&[vec![1, 2], vec![3, 4]], 2);
        let inv = a.inverse(&k).unwrap();
        assert_eq!(a.mul(&inv, &k), Mat::identity(2));
        let s = Mat::from_rows(&[vec![1, 2], vec![2, 4]], 2);
        let ns = s.right_nullspace(&k);
        assert_eq!(ns.len(), 1);
        let x = &ns[0];
        assert_eq!(k.add(x[0], k.mul(2, x[1])), 0);
    }

    #[test]
    fn charpoly_matches_trace_and_det() {
        let k = GaloisField::get(11, 1);
        let a = Mat::from_rows(&[vec![2, 1, 0], vec![3, 5, 7], vec![1, 0, 4]], 3);
        let cp = a.charpoly(&k);
        assert_eq!(cp.len(), 4);
        assert_eq!(cp[3], 1);
        // -trace
        assert_eq!(cp[2], k.neg(k.from_int(11)));
        // det = 2*(20) - 1*(12-7) = 35 ≡ 2; constant term = -det
        assert_eq!(cp[0], k.neg(k.from_int(35)));
    }

    #[test]
    fn spinning_finds_invariant_subspace() {
        let k = GaloisField::get(2, 1);
        // permutation of 3 coordinates; the all-ones vector spans a fixed line
        let g = Mat::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]], 3);
        assert_eq!(spin(&[vec![1, 1, 1]], std::slice::from_ref(&g), &k).len(), 1);
        assert_eq!(spin(&[vec![1, 0, 0]], &[g], &k).len(), 3);
    }
}
