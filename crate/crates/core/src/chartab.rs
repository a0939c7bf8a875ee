//! Ordinary character tables by the Dixon–Schneider method.
//!
//! The central characters `ω_χ` are the common eigenvectors of the class
//! multiplication matrices. They are computed over a prime field `F_q`
//! with `q ≡ 1 (mod exp G)`, after which each character value is recovered
//! from its eigenvalue multiplicities on the cyclic group generated by the
//! class representative.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::groups::{ConjClass, Elem, FiniteGroup, Quotient, SubgroupView, DEFAULT_ORDER_CAP};
use crate::linalg::Mat;
use crate::util::{is_prime, isqrt};

#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    exponent: u32,
    dixon_prime: u32,
    chars: Vec<Vec<CycNum>>,
}

/// Smallest prime `q ≡ 1 (mod e)` with `q > 2√n`.
fn dixon_prime(e: u32, n: usize) -> u32 {
    let bound = 2 * isqrt(n as u64) + 2;
    let mut q = e as u64 + 1;
    while q <= bound || !is_prime(q) {
        q += e as u64;
    }
    q as u32
}

/// Joint eigenvectors of commuting diagonalizable matrices (acting on
/// column vectors), splitting the full space one matrix at a time.
fn common_eigenvectors(
    r: usize,
    k: &GaloisField,
    mut matrix: impl FnMut(usize) -> Mat,
) -> Result<Vec<Vec<u32>>> {
    let mut spaces: Vec<Mat> = vec![Mat::identity(r)];
    for j in 1..r {
        if spaces.iter().all(|s| s.rows == 1) {
            break;
        }
        let a = matrix(j);
        let mut next = Vec::new();
        for space in spaces {
            if space.rows == 1 {
                next.push(space);
                continue;
            }
            let mut basis = space;
            let pivots = basis.rref(k);
            let d = basis.rows;
            // restricted action: A b_i = Σ_c (A_V)_{c,i} b_c
            let mut av = Mat::zeros(d, d);
            for i in 0..d {
                let image = a.vec_mul_transposed(basis.row(i), k);
                for (c, &p) in pivots.iter().enumerate() {
                    av.set(c, i, image[p]);
                }
            }
            let mut eigenvalues = k.roots(&av.charpoly(k));
            eigenvalues.dedup();
            if eigenvalues.len() == 1 {
                next.push(basis);
                continue;
            }
            for lambda in eigenvalues {
                let mut shifted = av.clone();
                for i in 0..d {
                    let v = shifted.get(i, i);
                    shifted.set(i, i, k.sub(v, lambda));
                }
                let kernel = shifted.right_nullspace(k);
                let vecs: Vec<Vec<u32>> = kernel
                    .iter()
                    .map(|c| {
                        let mut v = vec![0; r];
                        for (i, &ci) in c.iter().enumerate() {
                            if ci == 0 {
                                continue;
                            }
                            for (x, &b) in v.iter_mut().zip(basis.row(i)) {
                                *x = k.add(*x, k.mul(ci, b));
                            }
                        }
                        v
                    })
                    .collect();
                next.push(Mat::from_rows(&vecs, r));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.rows != 1) || spaces.len() != r {
        return Err(Error::Internal(
            "class matrices failed to separate the central characters".into(),
        ));
    }
    Ok(spaces.into_iter().map(|s| s.row(0).to_vec()).collect())
}

impl Mat {
    /// `self · v` for a column vector `v`.
    fn vec_mul_transposed(&self, v: &[u32], k: &GaloisField) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
            })
            .collect()
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl CharacterTable {
    pub fn compute(group: Arc<FiniteGroup>) -> Result<Self> {
        Self::compute_with_cap(group, DEFAULT_ORDER_CAP)
    }

    pub fn compute_with_cap(group: Arc<FiniteGroup>, cap: usize) -> Result<Self> {
        let n = group.order();
        if n > cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        let classes = group.conjugacy_classes();
        let r = classes.len();
        let exponent = group.exponent() as u32;
        let q = dixon_prime(exponent, n);
        let k = GaloisField::get(q, 1);

        let class_of: Vec<usize> = (0..n).map(|x| group.class_of(x)).collect();
        let class_matrix = |j: usize| {
            let mut a = Mat::zeros(r, r);
            for (m, cm) in classes.iter().enumerate() {
                let x = cm.representative;
                for &y in &classes[j].members {
                    let l = class_of[group.mul(group.inv(y), x)];
                    a.set(l, m, a.get(l, m) + 1);
                }
            }
            for v in a.data.iter_mut() {
                *v %= q;
            }
            a
        };
        let vectors = common_eigenvectors(r, &k, class_matrix)?;

        let zeta = k.pow(k.generator(), ((q - 1) / exponent) as i64);
        let mut chars = Vec::with_capacity(r);
        for w in vectors {
            let w0 = k.inv(w[0]).ok_or_else(|| Error::Internal("ω(1) vanished".into()))?;
            let omega: Vec<u32> = w.iter().map(|&x| k.mul(x, w0)).collect();
            let mut s = 0;
            for (l, cl) in classes.iter().enumerate() {
                let li = group.inverse_class(l);
                let term = k.mul(k.mul(omega[l], omega[li]), k.inv(k.from_int(cl.size as i64)).unwrap());
                s = k.add(s, term);
            }
            let deg_sq = k.mul(k.from_int(n as i64), k.inv(s).ok_or_else(|| {
                Error::Internal("degenerate degree equation".into())
            })?);
            let degree = (1..=isqrt(n as u64))
                .find(|&d| (n as u64).is_multiple_of(d) && k.from_int((d * d) as i64) == deg_sq)
                .ok_or_else(|| Error::Internal("no admissible degree".into()))?;
            let values: Vec<u32> = classes
                .iter()
                .enumerate()
                .map(|(l, cl)| {
                    let size_inv = k.inv(k.from_int(cl.size as i64)).unwrap();
                    k.mul(k.mul(omega[l], k.from_int(degree as i64)), size_inv)
                })
                .collect();
            let mut row = Vec::with_capacity(r);
            for (l, cl) in classes.iter().enumerate() {
                let e = group.element_order(cl.representative) as u32;
                let ze = k.pow(zeta, (exponent / e) as i64);
                let e_inv = k.inv(k.from_int(e as i64)).unwrap();
                let mut mult = vec![0i64; exponent as usize];
                for kk in 0..e {
                    let mut acc = 0;
                    for j in 0..e {
                        let v = values[group.power_class(l, j as i64)];
                        let tw = k.pow(ze, -((j * kk) as i64));
                        acc = k.add(acc, k.mul(v, tw));
                    }
                    let m = k.mul(acc, e_inv) as u64;
                    if m > degree {
                        return Err(Error::Internal(format!(
                            "eigenvalue multiplicity {m} exceeds degree {degree}"
                        )));
                    }
                    mult[(kk * (exponent / e)) as usize] = m as i64;
                }
                row.push(CycNum::from_multiplicities(exponent, &mult));
            }
            chars.push(row);
        }
        chars.sort_by(|a, b| row_order(a, b));
        Ok(CharacterTable {
            group,
            exponent,
            dixon_prime: q,
            chars,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &[ConjClass] {
        self.group.conjugacy_classes()
    }

    pub fn num_classes(&self) -> usize {
        self.chars.len()
    }

    pub fn chars(&self) -> &[Vec<CycNum>] {
        &self.chars
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.chars[i]
    }

    /// Exponent of the group; every value lies in `Q(ζ_exponent)`.
    pub fn conductor(&self) -> u32 {
        self.exponent
    }

    /// The prime used for the modular eigenvector computation.
    pub fn dixon_prime(&self) -> u32 {
        self.dixon_prime
    }

    pub fn value(&self, row: usize, class: usize) -> &CycNum {
        &self.chars[row][class]
    }

    pub fn value_at(&self, row: usize, g: Elem) -> &CycNum {
        &self.chars[row][self.group.class_of(g)]
    }

    pub fn degree(&self, row: usize) -> u64 {
        self.chars[row][0].as_i64().expect("degrees are integers") as u64
    }

    pub fn degrees(&self) -> Vec<u64> {
        (0..self.chars.len()).map(|i| self.degree(i)).collect()
    }

    /// `ω_χ(K̂) = |K| χ(x_K) / χ(1)` on every class.
    pub fn central_character(&self, row: usize) -> Vec<CycNum> {
        let d = int(self.degree(row) as i64).recip();
        self.classes()
            .iter()
            .zip(&self.chars[row])
            .map(|(cl, v)| v.scale(&(&d * int(cl.size as i64))))
            .collect()
    }

    /// `(1/|G|) Σ_K |K| a(x_K) conj(b(x_K))`.
    pub fn inner_product(&self, a: &[CycNum], b: &[CycNum]) -> CycNum {
        let mut acc = CycNum::zero();
        for ((cl, x), y) in self.classes().iter().zip(a).zip(b) {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            acc = acc + (x * &y.conj()).scale_int(cl.size as i64);
        }
        acc.scale(&int(self.group.order() as i64).recip())
    }

    /// Multiplicities of each irreducible in a class function.
    pub fn decompose(&self, f: &[CycNum]) -> Vec<CycNum> {
        self.chars.iter().map(|row| self.inner_product(f, row)).collect()
    }

    /// Row whose values coincide with `f`, if any.
    pub fn find_row(&self, f: &[CycNum]) -> Option<usize> {
        self.chars.iter().position(|row| row.as_slice() == f)
    }

    /// Pointwise product of two class functions.
    pub fn product(a: &[CycNum], b: &[CycNum]) -> Vec<CycNum> {
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    }

    /// Both orthogonality relations, exactly.
    pub fn check_orthogonality(&self) -> Result<()> {
        let r = self.chars.len();
        let n = self.group.order() as i64;
        for i in 0..r {
            for j in i..r {
                let ip = self.inner_product(&self.chars[i], &self.chars[j]);
                let want = CycNum::from_int(i64::from(i == j));
                if ip != want {
                    return Err(Error::Internal(format!(
                        "rows {i} and {j} have inner product {ip}"
                    )));
                }
            }
        }
        let classes = self.classes();
        for a in 0..r {
            for b in a..r {
                let s: CycNum = (0..r)
                    .map(|i| &self.chars[i][a] * &self.chars[i][b].conj())
                    .sum();
                let want = if a == b {
                    CycNum::from_int(n / classes[a].size as i64)
                } else {
                    CycNum::zero()
                };
                if s != want {
                    return Err(Error::Internal(format!(
                        "columns {a} and {b} have product sum {s}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Values of a class function of this group on the classes of a
    /// subgroup.
    pub fn restrict(&self, f: &[CycNum], h: &SubgroupView) -> Vec<CycNum> {
        h.group
            .conjugacy_classes()
            .iter()
            .map(|cl| f[self.group.class_of(h.embed[cl.representative])].clone())
            .collect()
    }

    /// Restriction of an irreducible character to a subgroup.
    pub fn restrict_character(&self, row: usize, h: &SubgroupView) -> Vec<CycNum> {
        self.restrict(&self.chars[row], h)
    }

    /// Rows `χ` with `⟨χ_N, θ⟩ ≠ 0`; `theta` is a class function on the
    /// classes of `n_table`'s group, which must be the view `n`.
    pub fn irr_over(
        &self,
        n: &SubgroupView,
        n_table: &CharacterTable,
        theta: &[CycNum],
    ) -> Result<Vec<usize>> {
        if !self.group.is_normal(&n.as_subgroup()) {
            return Err(Error::NotNormal);
        }
        Ok((0..self.chars.len())
            .filter(|&i| {
                !n_table
                    .inner_product(&self.restrict_character(i, n), theta)
                    .is_zero()
            })
            .collect())
    }

    /// Map from the rows of a quotient's table to the rows of this table
    /// that are their inflations.
    pub fn inflation(&self, q: &Quotient, q_table: &CharacterTable) -> Result<Vec<usize>> {
        let classes = self.classes();
        (0..q_table.num_classes())
            .map(|b| {
                let f: Vec<CycNum> = classes
                    .iter()
                    .map(|cl| q_table.value_at(b, q.projection[cl.representative]).clone())
                    .collect();
                self.find_row(&f)
                    .ok_or_else(|| Error::Internal(format!("quotient row {b} does not inflate")))
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .classes()
            .iter()
            .map(|cl| {
                serde_json::json!({
                    "rep": cl.representative,
                    "size": cl.size,
                    "order": self.group.element_order(cl.representative),
                })
            })
            .collect();
        let chars: Vec<Value> = self
            .chars
            .iter()
            .map(|row| Value::Array(row.iter().map(|v| v.to_json()).collect()))
            .collect();
        serde_json::json!({
            "group": self.group.name(),
            "classes": classes,
            "chars": chars,
        })
    }
}

/// Degree first, then class by class: values equal to the degree come
/// first, otherwise compare coordinates.
fn row_order(a: &[CycNum], b: &[CycNum]) -> Ordering {
    let da = &a[0];
    let db = &b[0];
    da.cmp_canonical(db).then_with(|| {
        for (x, y) in a.iter().zip(b).skip(1) {
            let kx = x != da;
            let ky = y != db;
            let o = kx.cmp(&ky).then_with(|| x.cmp_canonical(y));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// `θ(x^g) = θ(x)` for all `x ∈ N`, `g ∈ G`; `theta` is given on the
/// classes of the view's group.
pub fn is_invariant(g: &FiniteGroup, n: &SubgroupView, theta: &[CycNum]) -> bool {
    let ng = &n.group;
    let gens = g.generators();
    (0..ng.order()).all(|x| {
        let px = n.embed[x];
        gens.iter().all(|&t| match n.local(g.conj(px, t)) {
            Some(y) => theta[ng.class_of(y)] == theta[ng.class_of(x)],
            None => false,
        })
    })
}

/// Class function of a character given on elements (indexed by element).
pub fn values_on_elements(t: &CharacterTable, row: usize) -> Vec<CycNum> {
    (0..t.group().order())
        .map(|x| t.value_at(row, x).clone())
        .collect()
}

/// `true` iff every value of the class function is a rational integer
/// and the function is a nonnegative combination of irreducibles.
pub fn is_character(t: &CharacterTable, f: &[CycNum]) -> bool {
    t.decompose(f).iter().all(|m| match m.as_rational() {
        Some(r) => r.is_integer() && r >= BigRational::zero(),
        None => false,
    }) && !f.iter().all(|v| v.is_zero())
}

/// The trivial class function with value 1.
pub fn trivial_values(num_classes: usize) -> Vec<CycNum> {
    vec![CycNum::from_rational(BigRational::one()); num_classes]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{builtin_group, Subgroup};

    fn table(name: &str) -> CharacterTable {
        CharacterTable::compute(Arc::new(builtin_group(name).unwrap())).unwrap()
    }

    fn ints(row: &[CycNum]) -> Vec<i64> {
        row.iter().map(|v| v.as_i64().unwrap()).collect()
    }

    #[test]
    fn c2() {
        let t = table("C2");
        assert_eq!(ints(t.row(0)), vec![1, 1]);
        assert_eq!(ints(t.row(1)), vec![1, -1]);
    }

    #[test]
    fn s3_degree_two_row() {
        let t = table("S3");
        assert_eq!(t.degrees(), vec![1, 1, 2]);
        // classes ordered by minimal member: identity, then by index
        let sizes: Vec<usize> = t.classes().iter().map(|c| c.size).collect();
        let row = ints(t.row(2));
        for (size, v) in sizes.iter().zip(&row) {
            let expect = match size {
                1 => 2,
                3 => 0,
                2 => -1,
                _ => unreachable!(),
            };
            assert_eq!(*v, expect);
        }
    }

    #[test]
    fn a4_linear_rows_take_cube_roots() {
        let t = table("A4");
        assert_eq!(t.degrees(), vec![1, 1, 1, 3]);
        let w = CycNum::root_of_unity(3, 1);
        let w2 = CycNum::root_of_unity(3, 2);
        for i in 1..3 {
            let vals: Vec<&CycNum> = t
                .classes()
                .iter()
                .zip(t.row(i))
                .filter(|(c, _)| c.size == 4)
                .map(|(_, v)| v)
                .collect();
            assert!(vals.iter().all(|v| **v == w || **v == w2));
            assert_ne!(vals[0], vals[1]);
        }
    }

    #[test]
    fn orthogonality_on_builtins() {
        for name in ["C4", "V4", "D8", "Q8", "D10", "A4", "S4", "SL23"] {
            let t = table(name);
            t.check_orthogonality().unwrap();
            let sum: u64 = t.degrees().iter().map(|d| d * d).sum();
            assert_eq!(sum as usize, t.group().order(), "{name}");
            assert!(t.row(0).iter().all(|v| v.is_one()));
        }
    }

    #[test]
    fn central_character_of_trivial_is_class_sizes() {
        let t = table("S3");
        let om = t.central_character(0);
        for (cl, v) in t.classes().iter().zip(om) {
            assert_eq!(v, CycNum::from_int(cl.size as i64));
        }
        let om2 = t.central_character(2);
        // |K| χ(x)/χ(1) = 3*0/2, 2*(-1)/2
        for (cl, v) in t.classes().iter().zip(om2) {
            let expect = match cl.size {
                1 => 1,
                3 => 0,
                _ => -1,
            };
            assert_eq!(v, CycNum::from_int(expect));
            assert!(v.is_integral());
        }
    }

    #[test]
    fn restriction_and_irr_over() {
        let s4 = Arc::new(builtin_group("S4").unwrap());
        let t = CharacterTable::compute(s4.clone()).unwrap();
        let a4 = s4.derived_subgroup();
        let view = s4.subgroup_view(&a4);
        let ta4 = CharacterTable::compute(view.group.clone()).unwrap();
        for row in 0..t.num_classes() {
            if t.degree(row) == 3 {
                let r = t.restrict_character(row, &view);
                assert_eq!(ta4.inner_product(&r, &r), CycNum::one());
                assert_eq!(ta4.find_row(&r), Some(3));
            }
        }
        let chi3 = ta4.row(3).to_vec();
        assert!(is_invariant(&s4, &view, &chi3));
        let over = t.irr_over(&view, &ta4, &chi3).unwrap();
        assert_eq!(over.len(), 2);
        assert!(over.iter().all(|&i| t.degree(i) == 3));
        let trivial = t.restrict_character(0, &s4.subgroup_view(&Subgroup::trivial()));
        assert_eq!(trivial, vec![CycNum::one()]);
    }

    #[test]
    fn a4_on_klein_subgroup() {
        let a4 = Arc::new(builtin_group("A4").unwrap());
        let t = CharacterTable::compute(a4.clone()).unwrap();
        let v4 = a4.derived_subgroup();
        let view = a4.subgroup_view(&v4);
        let tv = CharacterTable::compute(view.group.clone()).unwrap();
        let r = t.restrict_character(3, &view);
        let m = tv.decompose(&r);
        assert_eq!(m[0], CycNum::zero());
        assert!(m[1..].iter().all(|x| x.is_one()));
        let theta = tv.row(1).to_vec();
        assert!(!is_invariant(&a4, &view, &theta));
        assert_eq!(t.irr_over(&view, &tv, &theta).unwrap(), vec![3]);
        assert_eq!(t.irr_over(&view, &tv, tv.row(0)).unwrap(), vec![0, 1, 2]);
    }
}
