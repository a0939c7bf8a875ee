//! Exact arithmetic in cyclotomic fields.
//!
//! A [`CycNum`] with conductor `n` stores its coordinates in the power basis
//! `1, ζ_n, …, ζ_n^{φ(n)-1}` of `Q(ζ_n)`, fully reduced modulo the
//! cyclotomic polynomial `Φ_n`. Values of different conductors are lifted
//! to the least common multiple before any binary operation, so the stored
//! conductor need not be minimal; [`CycNum::minimize`] computes the
//! smallest field containing a value and is used for display and JSON.

mod json;
pub mod matrix;
mod reduction;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::util::{euler_phi, prime_factors};

pub use reduction::{IdealChoice, IdealReduction};

pub type Rat = BigRational;

#[derive(Clone)]
pub struct CycNum {
    n: u32,
    c: Vec<Rat>,
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            poly = poly_div_exact(&poly, &div);
        }
    }
    let arc = Arc::new(poly);
    phi_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quo = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quo
}

/// Folds exponents modulo `n` and reduces modulo `Φ_n`.
fn reduce_poly(n: u32, mut poly: Vec<Rat>) -> Vec<Rat> {
    let n_us = n as usize;
    if poly.len() > n_us {
        for i in n_us..poly.len() {
            if !poly[i].is_zero() {
                let v = std::mem::replace(&mut poly[i], Rat::zero());
                poly[i % n_us] += v;
            }
        }
        poly.truncate(n_us);
    }
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if poly.len() < deg {
        poly.resize(deg, Rat::zero());
        return poly;
    }
    for i in (deg..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[i], Rat::zero());
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                poly[i - deg + j] -= &c * Rat::from_integer(BigInt::from(pj));
            }
        }
    }
    poly.truncate(deg);
    poly
}

fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Solves `m x = rhs` over Q where `m` is given by columns. Returns `None`
/// if the system is inconsistent. Free variables are set to zero.
pub(crate) fn solve_rational(columns: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    Some(x)
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum {
            n: 1,
            c: vec![Rat::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        CycNum { n: 1, c: vec![int(v)] }
    }

    pub fn from_rational(v: Rat) -> Self {
        CycNum { n: 1, c: vec![v] }
    }

    /// `Σ coeff · ζ_n^e` for arbitrary (folded) exponents.
    pub fn from_exponent_coeffs(n: u32, terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        assert!(n >= 1);
        let mut poly = vec![Rat::zero(); n as usize];
        for (e, c) in terms {
            poly[e.rem_euclid(n as i64) as usize] += c;
        }
        CycNum {
            n,
            c: reduce_poly(n, poly),
        }
    }

    /// `Σ m_k ζ_n^k` from a multiplicity vector of length `n`.
    pub fn from_multiplicities(n: u32, mult: &[i64]) -> Self {
        Self::from_exponent_coeffs(
            n,
            mult.iter()
                .enumerate()
                .filter(|(_, &m)| m != 0)
                .map(|(k, &m)| (k as i64, int(m))),
        )
    }

    /// Power-basis coordinates in `Q(ζ_n)` (length `φ(n)`).
    pub fn from_power_basis(n: u32, coeffs: Vec<Rat>) -> Self {
        let deg = euler_phi(n as u64) as usize;
        assert!(coeffs.len() <= deg, "too many coordinates for conductor {n}");
        let mut c = coeffs;
        c.resize(deg, Rat::zero());
        CycNum { n, c }
    }

    /// `ζ_n^e`, with conductor minimized.
    pub fn root_of_unity(n: u32, e: i64) -> Self {
        assert!(n >= 1);
        let e = e.rem_euclid(n as i64) as u32;
        let g = e.gcd(&n);
        let (n, e) = if e == 0 { (1, 0) } else { (n / g, e / g) };
        if n % 4 == 2 {
            // ζ_{2m} = -ζ_m^{(m+1)/2} for odd m
            let m = n / 2;
            let half = m.div_ceil(2) as i64;
            return Self::from_exponent_coeffs(m, [(e as i64 * half, int(-1))]);
        }
        Self::from_exponent_coeffs(n, [(e as i64, Rat::one())])
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            return Some(self.c[0].clone());
        }
        let m = self.minimize();
        (m.n == 1).then(|| m.c[0].clone())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|v| v.to_i64())
    }

    /// Algebraic integer test: the power basis is an integral basis of
    /// `Z[ζ_n]`, so integrality of every coordinate is the criterion.
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    /// Coordinates after embedding into `Q(ζ_m)`, `n | m`.
    pub fn lift_coeffs(&self, m: u32) -> Vec<Rat> {
        assert!(m.is_multiple_of(self.n), "conductor {} does not divide {m}", self.n);
        if m == self.n {
            return self.c.clone();
        }
        let step = (m / self.n) as usize;
        let mut poly = vec![Rat::zero(); (self.c.len() - 1) * step + 1];
        for (i, v) in self.c.iter().enumerate() {
            if !v.is_zero() {
                poly[i * step] = v.clone();
            }
        }
        reduce_poly(m, poly)
    }

    pub fn lift(&self, m: u32) -> CycNum {
        CycNum {
            n: m,
            c: self.lift_coeffs(m),
        }
    }

    fn common(&self, other: &CycNum) -> (u32, Vec<Rat>, Vec<Rat>) {
        if self.n == other.n {
            return (self.n, self.c.clone(), other.c.clone());
        }
        let m = self.n.lcm(&other.n);
        (m, self.lift_coeffs(m), other.lift_coeffs(m))
    }

    pub fn scale(&self, r: &Rat) -> CycNum {
        CycNum {
            n: self.n,
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> CycNum {
        self.scale(&int(k))
    }

    /// Galois automorphism `ζ_n ↦ ζ_n^k`, `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> CycNum {
        let n = self.n as i64;
        CycNum::from_exponent_coeffs(
            self.n,
            self.c
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| ((i as i64 * k).rem_euclid(n), v.clone())),
        )
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycNum {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.n == 1 {
            return Ok(CycNum::from_rational(self.c[0].recip()));
        }
        // columns: self · ζ^j
        let deg = self.c.len();
        let columns: Vec<Vec<Rat>> = (0..deg)
            .map(|j| {
                let mut poly = vec![Rat::zero(); deg + j];
                for (i, v) in self.c.iter().enumerate() {
                    poly[i + j] = v.clone();
                }
                reduce_poly(self.n, poly)
            })
            .collect();
        let mut rhs = vec![Rat::zero(); deg];
        rhs[0] = Rat::one();
        let x = solve_rational(&columns, &rhs).ok_or(Error::DivisionByZero)?;
        Ok(CycNum { n: self.n, c: x })
    }

    pub fn div(&self, other: &CycNum) -> Result<CycNum> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> CycNum {
        let mut base = self.clone();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Tries to express the value in `Q(ζ_m)` for `m | n`.
    fn descend(&self, m: u32) -> Option<CycNum> {
        let step = self.n / m;
        let dm = euler_phi(m as u64) as usize;
        let columns: Vec<Vec<Rat>> = (0..dm)
            .map(|j| {
                CycNum::from_exponent_coeffs(self.n, [((j as u32 * step) as i64, Rat::one())]).c
            })
            .collect();
        solve_rational(&columns, &self.c).map(|x| CycNum { n: m, c: x })
    }

    /// The same value in the smallest cyclotomic field containing it.
    pub fn minimize(&self) -> CycNum {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            return CycNum::from_rational(self.c[0].clone());
        }
        let mut cur = self.clone();
        'outer: loop {
            if cur.n % 4 == 2 {
                cur = cur.descend(cur.n / 2).expect("Q(ζ_2m) = Q(ζ_m) for odd m");
                continue;
            }
            for q in prime_factors(cur.n as u64) {
                let m = cur.n / q as u32;
                if let Some(d) = cur.descend(m) {
                    cur = d;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// `Some((order, e))` with the value equal to `ζ_order^e`,
    /// `gcd(e, order) = 1`.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        let l = if self.n % 2 == 1 { 2 * self.n } else { self.n };
        let target = self.lift_coeffs(l);
        for j in 0..l {
            let z = CycNum::from_exponent_coeffs(l, [(j as i64, Rat::one())]);
            if z.c == target {
                let g = j.gcd(&l);
                return Some((l / g, j / g));
            }
        }
        None
    }

    /// Canonical total order used for deterministic sorting: compare the
    /// coordinates after lifting to a common conductor.
    pub fn cmp_canonical(&self, other: &CycNum) -> Ordering {
        let (_, a, b) = self.common(other);
        a.cmp(&b)
    }

    /// Floating-point approximation `(re, im)`; display only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let x = v.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }

    /// A square root of a rational number, built from Gauss sums.
    /// `None` if numerator or denominator does not fit in `u64`.
    pub fn sqrt_rational(r: &Rat) -> Option<CycNum> {
        if r.is_zero() {
            return Some(CycNum::zero());
        }
        let m = (r.numer() * r.denom()).abs().to_u64()?;
        let den = r.denom().to_u64()?;
        let mut square = 1u64;
        let mut free = Vec::new();
        for q in prime_factors(m) {
            let mut e = 0;
            let mut t = m;
            while t % q == 0 {
                t /= q;
                e += 1;
            }
            square *= q.pow(e / 2);
            if e % 2 == 1 {
                free.push(q);
            }
        }
        let mut out = CycNum::from_rational(Rat::new(BigInt::from(square), BigInt::from(den)));
        for q in free {
            out = &out * &sqrt_prime(q as u32);
        }
        if r.is_negative() {
            out = &out * &CycNum::root_of_unity(4, 1);
        }
        Some(out)
    }

    /// The positive rational `d`-th root of a positive rational, if it is
    /// itself rational.
    pub fn rational_root(r: &Rat, d: u32) -> Option<Rat> {
        if !r.is_positive() {
            return None;
        }
        let root = |x: &BigInt| -> Option<BigInt> {
            let y = x.nth_root(d);
            (y.pow(d) == *x).then_some(y)
        };
        Some(Rat::new(root(r.numer())?, root(r.denom())?))
    }

    /// `|a|^2 = a · conj(a)`.
    pub fn norm_sq(&self) -> CycNum {
        self * &self.conj()
    }
}

/// `√q` for a prime `q`: `ζ_8 + ζ_8^{-1}` for 2, otherwise the quadratic
/// Gauss sum, multiplied by `-i` when `q ≡ 3 (mod 4)`.
fn sqrt_prime(q: u32) -> CycNum {
    if q == 2 {
        return &CycNum::root_of_unity(8, 1) + &CycNum::root_of_unity(8, -1);
    }
    let g = CycNum::from_exponent_coeffs(
        q,
        (1..q).map(|k| {
            let leg = crate::util::mod_pow(k as u64, (q as u64 - 1) / 2, q as u64);
            let s = if leg == 1 { 1 } else { -1 };
            (k as i64, Rat::from_integer(BigInt::from(s)))
        }),
    );
    if q % 4 == 1 {
        g
    } else {
        &g * &CycNum::root_of_unity(4, -1)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({self})")
    }
}

impl fmt::Display for CycNum {
    /// GAP-style rendering, e.g. `-1 - 2*E(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minimize();
        let mut terms = Vec::new();
        for (i, v) in m.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mag = v.abs();
            let neg = v.is_negative();
            let body = if i == 0 {
                mag.to_string()
            } else {
                let z = if i == 1 {
                    format!("E({})", m.n)
                } else {
                    format!("E({})^{}", m.n, i)
                };
                if mag.is_one() {
                    z
                } else {
                    format!("{mag}*{z}")
                }
            };
            terms.push((neg, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, body)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if self.n == rhs.n {
            return CycNum {
                n: self.n,
                c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
            };
        }
        let (n, a, b) = self.common(rhs);
        CycNum {
            n,
            c: a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            n: self.n,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.n == 1 {
            return rhs.scale(&self.c[0]);
        }
        if rhs.n == 1 {
            return self.scale(&rhs.c[0]);
        }
        let (n, a, b) = self.common(rhs);
        let mut poly = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CycNum {
            n,
            c: reduce_poly(n, poly),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl std::iter::Sum for CycNum {
    fn sum<I: Iterator<Item = CycNum>>(iter: I) -> CycNum {
        iter.fold(CycNum::zero(), |a, b| a + b)
    }
}

impl From<i64> for CycNum {
    fn from(v: i64) -> Self {
        CycNum::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_square_roots() {
        for (a, b) in [(2, 1), (3, 1), (5, 1), (7, 1), (-1, 1), (-3, 4), (12, 5), (-30, 7)] {
            let r = Rat::new(BigInt::from(a), BigInt::from(b));
            let s = CycNum::sqrt_rational(&r).unwrap();
            assert_eq!(&s * &s, CycNum::from_rational(r), "{a}/{b}");
        }
        let r = Rat::new(BigInt::from(27), BigInt::from(8));
        assert_eq!(CycNum::rational_root(&r, 3), Some(Rat::new(BigInt::from(3), BigInt::from(2))));
        assert_eq!(CycNum::rational_root(&Rat::from_integer(BigInt::from(2)), 3), None);
    }
    use crate::util::mobius;

    fn z(n: u32, e: i64) -> CycNum {
        CycNum::root_of_unity(n, e)
    }

    #[test]
    fn cube_roots_sum_to_minus_one() {
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(-1));
    }

    #[test]
    fn i_squared() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycNum::from_int(-1));
    }

    #[test]
    fn small_roots() {
        assert_eq!(z(1, 0), CycNum::one());
        assert_eq!(z(2, 1), CycNum::from_int(-1));
        let z6 = z(6, 1);
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6, -z(3, 2));
    }

    #[test]
    fn inverse_in_q_zeta5() {
        let a = &(&CycNum::one() + &z(5, 1)) + &z(5, 4);
        let v = a.inv().unwrap();
        assert!((&v * &a).is_one());
        assert_eq!(CycNum::zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn primitive_root_sums_are_mobius() {
        for n in 1..=60u32 {
            let s: CycNum = (0..n)
                .filter(|e| e.gcd(&n) == 1)
                .map(|e| CycNum::from_exponent_coeffs(n, [(e as i64, Rat::one())]))
                .sum();
            assert_eq!(s, CycNum::from_int(mobius(n as u64)), "n = {n}");
        }
    }

    #[test]
    fn minimize_finds_subfield() {
        // sqrt(2) = ζ8 + ζ8^7 has conductor 8; ζ12^3 = i has conductor 4
        let s2 = &z(8, 1) + &z(8, 7);
        assert_eq!(s2.minimize().conductor(), 8);
        assert_eq!(z(12, 3).lift(12).minimize().conductor(), 4);
        assert_eq!((&s2 * &s2).minimize().conductor(), 1);
    }

    #[test]
    fn root_of_unity_detection() {
        assert_eq!(z(12, 5).as_root_of_unity(), Some((12, 5)));
        assert_eq!(CycNum::from_int(-1).as_root_of_unity(), Some((2, 1)));
        assert_eq!(CycNum::from_int(2).as_root_of_unity(), None);
    }

    #[test]
    fn display_is_gap_like() {
        assert_eq!(z(3, 1).to_string(), "E(3)");
        assert_eq!(CycNum::from_int(-3).to_string(), "-3");
    }
}
