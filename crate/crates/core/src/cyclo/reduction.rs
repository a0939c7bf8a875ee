//! Reduction `Z[ζ_n] → F_{p^f}` modulo a maximal ideal above `p`.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{CycNum, Rat};
use crate::error::{Error, Result};
use crate::field::{Fq, GaloisField};
use crate::util::{mod_inverse, multiplicative_order, p_part};

/// Which irreducible factor of `Φ_m mod p`, and which of its roots, the
/// primitive root of unity `ζ_m` is sent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IdealChoice {
    pub factor: usize,
    pub root: usize,
}

impl std::str::FromStr for IdealChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedInput(format!("ideal choice {s:?} is not of the form i,j"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(IdealChoice {
            factor: a.trim().parse().map_err(|_| bad())?,
            root: b.trim().parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct IdealReduction {
    p: u32,
    conductor: u32,
    m: u32,
    field: Arc<GaloisField>,
    choice: IdealChoice,
    factors: Vec<Vec<u32>>,
    /// `root^k` for `0 ≤ k < m`.
    root_powers: Vec<Fq>,
}

/// The irreducible factors of `Φ_m` over `F_p` (as coefficient vectors,
/// constant first, sorted) with their roots in `field` sorted by code.
fn factor_data(field: &GaloisField, m: u32) -> Vec<(Vec<u32>, Vec<Fq>)> {
    let q = field.size();
    let w = field.pow(field.generator(), ((q - 1) / m) as i64);
    let mut roots: Vec<Fq> = (1..=m)
        .filter(|k| k.gcd(&m) == 1)
        .map(|k| field.pow(w, k as i64))
        .collect();
    roots.sort_unstable();
    let mut out: Vec<(Vec<u32>, Vec<Fq>)> = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut orbit = vec![roots[i]];
        let mut r = field.frobenius(roots[i]);
        while r != roots[i] {
            orbit.push(r);
            r = field.frobenius(r);
        }
        // Π (x - r) over the Frobenius orbit
        let mut poly: Vec<Fq> = vec![1];
        for &r in &orbit {
            let mut next = vec![0; poly.len() + 1];
            for (j, &c) in poly.iter().enumerate() {
                next[j + 1] = field.add(next[j + 1], c);
                next[j] = field.sub(next[j], field.mul(c, r));
            }
            poly = next;
        }
        debug_assert!(poly.iter().all(|&c| field.is_prime_field(c)));
        for (j, x) in roots.iter().enumerate() {
            if orbit.contains(x) {
                used[j] = true;
            }
        }
        orbit.sort_unstable();
        out.push((poly, orbit));
    }
    out.sort();
    out
}

impl IdealReduction {
    pub fn new(p: u32, conductor: u32, choice: IdealChoice) -> Result<Self> {
        if !crate::util::is_prime(p as u64) || conductor == 0 {
            return Err(Error::MalformedInput(format!(
                "reduction needs a prime and a positive conductor, got p={p}, n={conductor}"
            )));
        }
        let pa = p_part(conductor as u64, p as u64) as u32;
        let m = conductor / pa;
        let f = multiplicative_order(p as u64 % m.max(1) as u64, m as u64) as u32;
        let field = GaloisField::get(p, f);
        let data = factor_data(&field, m);
        let (_, roots) = data.get(choice.factor).ok_or(Error::InvalidIdealChoice {
            factor: choice.factor,
            root: choice.root,
        })?;
        let root = *roots.get(choice.root).ok_or(Error::InvalidIdealChoice {
            factor: choice.factor,
            root: choice.root,
        })?;
        let root_powers = (0..m).map(|k| field.pow(root, k as i64)).collect();
        Ok(IdealReduction {
            p,
            conductor,
            m,
            field,
            choice,
            factors: data.into_iter().map(|(f, _)| f).collect(),
            root_powers,
        })
    }

    /// Every admissible choice for the given prime and conductor.
    pub fn all_choices(p: u32, conductor: u32) -> Result<Vec<IdealChoice>> {
        let base = IdealReduction::new(p, conductor, IdealChoice::default())?;
        let data = factor_data(&base.field, base.m);
        Ok(data
            .iter()
            .enumerate()
            .flat_map(|(i, (_, roots))| {
                (0..roots.len()).map(move |j| IdealChoice { factor: i, root: j })
            })
            .collect())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// The p'-part `m` of the conductor.
    pub fn p_prime_conductor(&self) -> u32 {
        self.m
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn choice(&self) -> IdealChoice {
        self.choice
    }

    /// Irreducible factors of `Φ_m mod p`, coefficients constant first.
    pub fn factors(&self) -> &[Vec<u32>] {
        &self.factors
    }

    /// The chosen primitive m-th root of unity.
    pub fn root(&self) -> Fq {
        self.root_powers.get(1).copied().unwrap_or(1)
    }

    /// Image of `ζ_m^k`.
    pub fn root_power(&self, k: i64) -> Fq {
        self.root_powers[k.rem_euclid(self.m as i64) as usize]
    }

    /// Exponent `k` (mod m) with `root^k = x`, if `x` is an m-th root of
    /// unity.
    pub fn root_exponent(&self, x: Fq) -> Option<u32> {
        self.root_powers.iter().position(|&r| r == x).map(|k| k as u32)
    }

    /// The characteristic-zero lift `ζ_m^k` of `root^k`; the inverse of
    /// the reduction on m-th roots of unity.
    pub fn lift_root_power(&self, k: i64) -> CycNum {
        CycNum::root_of_unity(self.m, k)
    }

    fn rat_mod_p(&self, r: &Rat, strict: bool) -> Result<Fq> {
        let p = self.p as i64;
        if strict && !r.is_integer() {
            return Err(Error::NotAlgebraicInteger);
        }
        let num = (r.numer() % p).to_i64().unwrap();
        let den = (r.denom() % p).to_i64().unwrap();
        if den == 0 {
            return Err(Error::NotAlgebraicInteger);
        }
        let inv = mod_inverse(den.rem_euclid(p) as u64, p as u64).unwrap() as i64;
        Ok(self.field.from_int(num * inv))
    }

    fn embed(&self, a: &CycNum) -> Result<CycNum> {
        if self.conductor.is_multiple_of(a.conductor()) {
            return Ok(a.clone());
        }
        let m = a.minimize();
        if !self.conductor.is_multiple_of(m.conductor()) {
            return Err(Error::ConductorMismatch {
                value: m.conductor(),
                reduction: self.conductor,
            });
        }
        Ok(m)
    }

    fn reduce_impl(&self, a: &CycNum, strict: bool) -> Result<Fq> {
        let a = self.embed(a)?;
        let n = a.conductor();
        let pa = p_part(n as u64, self.p as u64) as u32;
        let mn = n / pa;
        let step = self.m / mn;
        // ζ_n = ζ_{p^a'} ζ_{mn}^u' under CRT; only the p'-part survives
        let unit = mod_inverse(pa as u64 % mn as u64, mn as u64).unwrap_or(0) as i64;
        let mut acc = 0;
        for (e, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cm = self.rat_mod_p(c, strict)?;
            if cm == 0 {
                continue;
            }
            let k = (e as i64 * unit).rem_euclid(mn.max(1) as i64) * step as i64;
            acc = self.field.add(acc, self.field.mul(cm, self.root_power(k)));
        }
        Ok(acc)
    }

    /// Image of an algebraic integer in `Z[ζ_n]`.
    pub fn reduce(&self, a: &CycNum) -> Result<Fq> {
        self.reduce_impl(a, true)
    }

    /// Image of an element of `Z_(p)[ζ_n]`: denominators prime to `p` are
    /// inverted modulo `p`.
    pub fn reduce_local(&self, a: &CycNum) -> Result<Fq> {
        self.reduce_impl(a, false)
    }

    /// JSON form `{"p": p, "f": f, "poly": [c0, .., c_{f-1}]}` of a field
    /// element.
    pub fn element_json(&self, x: Fq) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "f": self.field.degree(),
            "poly": self.field.coords(x),
        })
    }

    /// Description of the choice made, for reports.
    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "conductor": self.conductor,
            "field_degree": self.field.degree(),
            "field_modulus": self.field.modulus(),
            "factor_index": self.choice.factor,
            "factor": self.factors[self.choice.factor],
            "root_index": self.choice.root,
            "root": self.field.coords(self.root()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn red(p: u32, n: u32) -> IdealReduction {
        IdealReduction::new(p, n, IdealChoice::default()).unwrap()
    }

    #[test]
    fn integers_reduce_mod_p() {
        let r = red(5, 20);
        assert_eq!(r.reduce(&CycNum::from_int(17)).unwrap(), 2);
        assert_eq!(r.reduce(&CycNum::from_int(-1)).unwrap(), 4);
    }

    #[test]
    fn p_power_roots_collapse() {
        for p in [2u32, 3, 5] {
            let r = red(p, p * 4);
            assert_eq!(r.reduce(&CycNum::root_of_unity(p, 1)).unwrap(), 1);
        }
    }

    #[test]
    fn cube_roots_in_f4() {
        let r = red(2, 3);
        assert_eq!(r.field().size(), 4);
        let w = r.reduce(&CycNum::root_of_unity(3, 1)).unwrap();
        assert_eq!(w, r.root());
        assert_eq!(r.field().order(w), 3);
        let s = &CycNum::root_of_unity(3, 1) + &CycNum::root_of_unity(3, 2);
        assert_eq!(r.reduce(&s).unwrap(), 1);
        assert_eq!(r.reduce(&s).unwrap(), r.reduce(&CycNum::from_int(-1)).unwrap());
    }

    #[test]
    fn non_integers_rejected() {
        let r = red(3, 3);
        let half = CycNum::from_rational(Rat::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(r.reduce(&half).unwrap_err(), Error::NotAlgebraicInteger);
        assert_eq!(r.reduce_local(&half).unwrap(), 2);
        let third = CycNum::from_rational(Rat::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(r.reduce_local(&third).unwrap_err(), Error::NotAlgebraicInteger);
    }

    #[test]
    fn conductor_mismatch() {
        let r = red(2, 3);
        let z5 = CycNum::root_of_unity(5, 1);
        assert!(matches!(r.reduce(&z5), Err(Error::ConductorMismatch { .. })));
    }

    #[test]
    fn choices_enumerated() {
        // Φ_7 splits mod 2 into two cubics, each with three roots
        let all = IdealReduction::all_choices(2, 7).unwrap();
        assert_eq!(all.len(), 6);
        let r = red(2, 7);
        assert_eq!(r.factors().len(), 2);
        assert!(IdealReduction::new(2, 7, IdealChoice { factor: 2, root: 0 }).is_err());
    }

    fn sample(n: u32, coeffs: &[i64]) -> CycNum {
        CycNum::from_exponent_coeffs(
            n,
            coeffs
                .iter()
                .enumerate()
                .map(|(e, &c)| (e as i64, Rat::from_integer(BigInt::from(c)))),
        )
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_homomorphism(
            (p, n) in prop_oneof![Just((2u32, 12u32)), Just((3, 12)), Just((5, 20)), Just((2, 15)), Just((7, 21))],
            a in proptest::collection::vec(-6i64..6, 1..24),
            b in proptest::collection::vec(-6i64..6, 1..24),
            choice in 0usize..8,
        ) {
            let choices = IdealReduction::all_choices(p, n).unwrap();
            let r = IdealReduction::new(p, n, choices[choice % choices.len()]).unwrap();
            let x = sample(n, &a);
            let y = sample(n, &b);
            let k = r.field();
            prop_assert_eq!(r.reduce(&(&x + &y)).unwrap(), k.add(r.reduce(&x).unwrap(), r.reduce(&y).unwrap()));
            prop_assert_eq!(r.reduce(&(&x * &y)).unwrap(), k.mul(r.reduce(&x).unwrap(), r.reduce(&y).unwrap()));
        }

        #[test]
        fn field_axioms_in_cyclotomics(
            n in prop_oneof![Just(5u32), Just(8), Just(9), Just(12)],
            a in proptest::collection::vec(-5i64..5, 1..12),
            b in proptest::collection::vec(-5i64..5, 1..12),
            c in proptest::collection::vec(-5i64..5, 1..12),
        ) {
            let (x, y, z) = (sample(n, &a), sample(n, &b), sample(n, &c));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
    }
}
