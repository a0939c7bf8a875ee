//! Finite fields `F_{p^f}` with table-driven arithmetic.
//!
//! Elements are `u32` codes `Σ c_i p^i`, the digits being the coefficients
//! of a polynomial in `y` reduced modulo a fixed monic irreducible `g(y)`:
//! the irreducible of degree `f` with the smallest code among its lower
//! coefficients. Code `0` is zero and code `1` is one.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::util::is_prime;

pub type Fq = u32;

#[derive(Debug)]
pub struct GaloisField {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus, constant term first, length `f + 1`.
    modulus: Vec<u32>,
    exp: Vec<Fq>,
    log: Vec<u32>,
    add_table: Option<Vec<Fq>>,
    neg: Vec<Fq>,
}

fn digits(mut x: u32, p: u32, f: u32) -> Vec<u32> {
    (0..f)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two digit vectors modulo the monic `modulus`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += x as u64 * y as u64;
        }
    }
    let p64 = p as u64;
    for c in prod.iter_mut() {
        *c %= p64;
    }
    for i in (f..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..f {
            let m = modulus[j] as u64;
            prod[i - f + j] = (prod[i - f + j] + p64 - c * m % p64) % p64;
        }
    }
    prod.truncate(f);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `a` modulo monic `b` over `F_p` (coefficient vectors,
/// constant first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - c * bj % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = digits(low, p, d as u32);
            cand.push(1);
            if poly_rem(poly, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Arc<GaloisField>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<GaloisField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl GaloisField {
    /// The shared instance of `F_{p^f}`.
    pub fn get(p: u32, f: u32) -> Arc<GaloisField> {
        if let Some(k) = cache().lock().unwrap().get(&(p, f)) {
            return k.clone();
        }
        let k = Arc::new(GaloisField::build(p, f));
        cache().lock().unwrap().insert((p, f), k.clone());
        k
    }

    fn build(p: u32, f: u32) -> GaloisField {
        assert!(is_prime(p as u64) && f >= 1);
        let q = p.checked_pow(f).expect("field too large");
        assert!(q <= 1 << 22, "field too large");
        let modulus = if f == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut m = digits(low, p, f);
                    m.push(1);
                    m
                })
                .find(|m| m[0] != 0 && is_irreducible(m, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let mul_poly = |a: u32, b: u32| -> u32 {
            if f == 1 {
                return ((a as u64 * b as u64) % p as u64) as u32;
            }
            undigits(
                &poly_mulmod(&digits(a, p, f), &digits(b, p, f), &modulus, p),
                p,
            )
        };
        // smallest generator of the multiplicative group
        let order = q - 1;
        let prime_divs = crate::util::prime_factors(order as u64);
        let gen = (1..q)
            .find(|&g| {
                prime_divs.iter().all(|&r| {
                    let e = order / r as u32;
                    let mut acc = 1;
                    let mut base = g;
                    let mut k = e;
                    while k > 0 {
                        if k & 1 == 1 {
                            acc = mul_poly(acc, base);
                        }
                        base = mul_poly(base, base);
                        k >>= 1;
                    }
                    acc != 1
                })
            })
            .unwrap_or(1);
        let mut exp = vec![0; 2 * order as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1;
        for i in 0..order as usize {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = mul_poly(x, gen);
        }
        for i in 0..order as usize {
            exp[i + order as usize] = exp[i];
        }
        let add_digits = |a: u32, b: u32| -> u32 {
            if f == 1 {
                return (a + b) % p;
            }
            let da = digits(a, p, f);
            let db = digits(b, p, f);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&s, p)
        };
        let neg: Vec<Fq> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, f).iter().map(|&x| (p - x) % p).collect();
                undigits(&d, p)
            })
            .collect();
        let add_table = if q <= 1024 && p != 2 && f > 1 {
            let mut t = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        GaloisField {
            p,
            f,
            q,
            modulus,
            exp,
            log,
            add_table,
            neg,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.f == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if self.p == 2 {
            return a ^ b;
        }
        if let Some(t) = &self.add_table {
            return t[(a * self.q + b) as usize];
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.f {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: Fq, e: i64) -> Fq {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let ord = (self.q - 1) as i64;
        let l = (self.log[a as usize] as i64 * e.rem_euclid(ord)).rem_euclid(ord);
        self.exp[l as usize]
    }

    /// Image of an integer under `Z → F_p ⊆ F_q`.
    pub fn from_int(&self, v: i64) -> Fq {
        v.rem_euclid(self.p as i64) as u32
    }

    /// The fixed generator of the multiplicative group.
    pub fn generator(&self) -> Fq {
        self.exp[1 % (self.q - 1).max(1) as usize]
    }

    /// Discrete logarithm to the base [`Self::generator`].
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> u32 {
        let l = self.log[a as usize];
        let n = self.q - 1;
        n / num_integer::gcd(l, n)
    }

    /// Coefficients (constant first) of an element as a polynomial in `y`.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        digits(a, self.p, self.f)
    }

    /// Frobenius `a ↦ a^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p as i64)
    }

    /// Whether the element lies in the prime field.
    pub fn is_prime_field(&self, a: Fq) -> bool {
        a < self.p
    }

    /// Roots in this field of a polynomial with coefficients in it
    /// (constant first), with multiplicity.
    pub fn roots(&self, poly: &[Fq]) -> Vec<Fq> {
        let mut out = Vec::new();
        let mut cur = poly.to_vec();
        while cur.len() > 1 && *cur.last().unwrap() == 0 {
            cur.pop();
        }
        for r in 0..self.q {
            loop {
                if cur.len() <= 1 {
                    return out;
                }
                // synthetic division by (x - r)
                let n = cur.len() - 1;
                let mut quo = vec![0; n];
                let mut acc = 0;
                for i in (0..=n).rev() {
                    acc = self.add(self.mul(acc, r), cur[i]);
                    if i > 0 {
                        quo[i - 1] = acc;
                    }
                }
                if acc != 0 {
                    break;
                }
                out.push(r);
                cur = quo;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f4_structure() {
        let k = GaloisField::get(2, 2);
        assert_eq!(k.modulus(), &[1, 1, 1]);
        let w = k.generator();
        assert_eq!(k.order(w), 3);
        // w^2 + w + 1 = 0
        assert_eq!(k.add(k.add(k.mul(w, w), w), 1), 0);
    }

    #[test]
    fn roots_with_multiplicity() {
        let k = GaloisField::get(5, 1);
        // (x - 1)^2 (x - 3) = x^3 - 5x^2 + 7x - 3
        let poly = [k.from_int(-3), k.from_int(7), k.from_int(-5), 1];
        assert_eq!(k.roots(&poly), vec![1, 1, 3]);
    }

    fn fields() -> impl Strategy<Value = (u32, u32)> {
        prop_oneof![
            Just((2, 1)),
            Just((2, 3)),
            Just((3, 2)),
            Just((5, 2)),
            Just((7, 1)),
            Just((3, 4)),
        ]
    }

    proptest! {
        #[test]
        fn field_axioms((p, f) in fields(), a in 0u32..10_000, b in 0u32..10_000, c in 0u32..10_000) {
            let k = GaloisField::get(p, f);
            let q = k.size();
            let (a, b, c) = (a % q, b % q, c % q);
            prop_assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
            prop_assert_eq!(k.add(a, k.add(b, c)), k.add(k.add(a, b), c));
            prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
            prop_assert_eq!(k.add(a, k.neg(a)), 0);
            if a != 0 {
                prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            }
        }
    }
}
