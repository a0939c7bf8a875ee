//! Character triples, projective representations associated with an
//! invariant character, the representation group `Ĝ`, the standard
//! bijection and θ-blocks.
//!
//! Elements of `Ĝ = G × Z` are encoded as `g·k + a`, where `Z` is the cyclic
//! group of `k`-th roots of unity and `a` is the exponent of `ζ_k`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blocks::{p_blocks, reduction_for, BlockPartition};
use crate::chartab::{is_invariant, CharacterTable};
use crate::cyclo::matrix::{self, CycMatrix};
use crate::cyclo::{CycNum, IdealChoice};
use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup, GroupSpec, Origin, Quotient, Subgroup, SubgroupView};

/// Default cap on `|Ĝ|`.
pub const DEFAULT_REP_GROUP_CAP: usize = 4000;

/// `(G, N, θ)` with `N ⊴ G` and `θ ∈ Irr(N)` invariant in `G`.
#[derive(Debug, Clone)]
pub struct CharacterTriple {
    pub group: Arc<FiniteGroup>,
    pub table: Arc<CharacterTable>,
    pub normal: Subgroup,
    pub n_view: SubgroupView,
    pub n_table: Arc<CharacterTable>,
    pub theta_row: usize,
    /// `G/N`, cosets numbered by smallest element.
    pub quotient: Quotient,
    irr_over: Vec<usize>,
}

impl CharacterTriple {
    pub fn new(group: Arc<FiniteGroup>, normal: Subgroup, theta_row: usize) -> Result<Self> {
        let table = Arc::new(CharacterTable::compute(group.clone())?);
        Self::with_table(table, normal, theta_row)
    }

    /// Like [`CharacterTriple::new`] but reuses a computed table of `G`.
    pub fn with_table(table: Arc<CharacterTable>, normal: Subgroup, theta_row: usize) -> Result<Self> {
        let group = table.group().clone();
        if !group.is_normal(&normal) {
            return Err(Error::NotNormal);
        }
        let n_view = group.subgroup_view(&normal);
        let n_table = Arc::new(CharacterTable::compute(n_view.group.clone())?);
        if theta_row >= n_table.num_classes() {
            return Err(Error::InvalidTriple(format!(
                "theta row {theta_row} out of range (N has {} characters)",
                n_table.num_classes()
            )));
        }
        if !is_invariant(&group, &n_view, n_table.row(theta_row)) {
            return Err(Error::InvalidTriple("theta is not G-invariant".into()));
        }
        let quotient = group.quotient(&normal)?;
        let irr_over = table.irr_over(&n_view, &n_table, n_table.row(theta_row))?;
        Ok(CharacterTriple {
            group,
            table,
            normal,
            n_view,
            n_table,
            theta_row,
            quotient,
            irr_over,
        })
    }

    pub fn theta(&self) -> &[CycNum] {
        self.n_table.row(self.theta_row)
    }

    pub fn theta_degree(&self) -> u64 {
        self.n_table.degree(self.theta_row)
    }

    /// `θ(n)` for an element of `N` given by its index in `G`.
    pub fn theta_at(&self, n: Elem) -> &CycNum {
        let local = self.n_view.local(n).expect("element of N");
        self.n_table.value_at(self.theta_row, local)
    }

    /// Rows of `G`'s table lying over `θ`.
    pub fn irr_over(&self) -> &[usize] {
        &self.irr_over
    }

    pub fn is_central(&self) -> bool {
        self.normal.is_subset_of(&self.group.center())
    }

    /// `true` iff `G/N` is a p-group.
    pub fn quotient_is_p_group(&self, p: u32) -> bool {
        self.quotient.group.is_p_group(p as u64)
    }

    pub fn describe(&self) -> Value {
        json!({
            "group": self.group.name(),
            "order": self.group.order(),
            "normal": self.normal.members(),
            "theta": self.theta_row,
            "theta_degree": self.theta_degree(),
        })
    }
}

/// How the subgroup `N` of a triple is specified in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormalSpec {
    Elements(Vec<Elem>),
    /// `auto:trivial`, `auto:center`, `auto:derived` or `auto:whole`.
    Auto(String),
}

impl NormalSpec {
    pub fn resolve(&self, g: &FiniteGroup) -> Result<Subgroup> {
        match self {
            NormalSpec::Elements(m) => Subgroup::from_members(g, m),
            NormalSpec::Auto(name) => match name.strip_prefix("auto:").unwrap_or(name) {
                "trivial" => Ok(Subgroup::trivial()),
                "center" => Ok(g.center()),
                "derived" => Ok(g.derived_subgroup()),
                "whole" => Ok(Subgroup::whole(g)),
                other => Err(Error::MalformedInput(format!("unknown normal subgroup spec {other:?}"))),
            },
        }
    }
}

/// `{"group": ..., "normal": ..., "theta": row}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleSpec {
    pub group: GroupSpec,
    pub normal: NormalSpec,
    pub theta: usize,
}

impl TripleSpec {
    pub fn build(&self, cap: usize) -> Result<CharacterTriple> {
        let g = Arc::new(self.group.build(cap)?);
        let n = self.normal.resolve(&g)?;
        CharacterTriple::new(g, n, self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransversalChoice {
    /// Smallest element of every coset.
    #[default]
    Smallest,
    /// Largest element of every coset other than `N` itself.
    Largest,
}

#[derive(Debug, Clone, Default)]
pub struct ProjRepOptions {
    pub transversal: TransversalChoice,
    /// A representation of `N` affording `θ`, indexed by the elements of
    /// the view `N` (local indices).
    pub matrices: Option<Vec<CycMatrix>>,
}

/// A projective representation of `G` associated with `θ`.
#[derive(Debug, Clone)]
pub struct ProjRep {
    pub degree: usize,
    /// Coset representatives, indexed by coset; the identity comes first.
    pub transversal: Vec<Elem>,
    coset_of: Vec<usize>,
    n_view: SubgroupView,
    group: Arc<FiniteGroup>,
    /// `D(n)` on local indices of `N`.
    pub n_matrices: Vec<CycMatrix>,
    /// `P(t)` for every transversal element.
    pub t_matrices: Vec<CycMatrix>,
    /// `α(t_i, t_j)`, roots of unity.
    pub alpha: Vec<Vec<CycNum>>,
    pub construction: String,
    pub normalization: String,
    /// Set once a twist has been applied; the order bound on `α` is then
    /// no longer guaranteed.
    pub twisted: bool,
}

impl ProjRep {
    pub fn coset_of(&self, g: Elem) -> usize {
        self.coset_of[g]
    }

    /// `P(g) = D(n)P(t)` where `g = nt`.
    pub fn matrix(&self, g: Elem) -> CycMatrix {
        let c = self.coset_of[g];
        let t = self.transversal[c];
        let n = self.group.mul(g, self.group.inv(t));
        let local = self.n_view.local(n).expect("g t^-1 lies in N");
        matrix::mul(&self.n_matrices[local], &self.t_matrices[c])
    }

    pub fn trace(&self, g: Elem) -> CycNum {
        matrix::trace(&self.matrix(g))
    }

    /// `α(x, y)` for arbitrary elements.
    pub fn alpha_at(&self, x: Elem, y: Elem) -> &CycNum {
        &self.alpha[self.coset_of[x]][self.coset_of[y]]
    }

    /// Checks `P_N` affords `θ`, `P(x)P(y) = α(x,y)P(xy)` for all pairs,
    /// `α(g,n) = α(n,g) = 1`, and `α^{|G|θ(1)} = 1` unless twisted.
    pub fn check_laws(&self, triple: &CharacterTriple) -> Result<()> {
        let g = &self.group;
        for &n in triple.normal.members() {
            if &self.trace(n) != triple.theta_at(n) {
                return Err(Error::Internal(format!("P_N does not afford theta at {n}")));
            }
        }
        let mats: Vec<CycMatrix> = (0..g.order()).map(|x| self.matrix(x)).collect();
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = matrix::mul(&mats[x], &mats[y]);
                let rhs = matrix::scale(&mats[g.mul(x, y)], self.alpha_at(x, y));
                if lhs != rhs {
                    return Err(Error::Internal(format!("factor set fails at ({x}, {y})")));
                }
            }
        }
        let bound = (g.order() * self.degree) as u32;
        for (i, row) in self.alpha.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if (i == 0 || j == 0) && !a.is_one() {
                    return Err(Error::Internal("alpha is not 1 on N".into()));
                }
                if a.as_root_of_unity().is_none() || (!self.twisted && !a.pow(bound).is_one()) {
                    return Err(Error::Internal(format!("alpha({i},{j}) has unbounded order")));
                }
            }
        }
        Ok(())
    }

    /// `ξ·P` for a function `ξ` on `G` that is constant on cosets of `N`
    /// with root-of-unity values and `ξ(1) = 1`.
    pub fn twist(&self, xi: &[CycNum]) -> Result<ProjRep> {
        let g = &self.group;
        if xi.len() != g.order() {
            return Err(Error::ShapeViolation(format!(
                "twist has {} values for a group of order {}",
                xi.len(),
                g.order()
            )));
        }
        for x in 0..g.order() {
            if xi[x] != xi[self.transversal[self.coset_of[x]]] {
                return Err(Error::NotCosetConstant);
            }
        }
        if !xi[0].is_one() {
            return Err(Error::MalformedInput("twist must be 1 on N".into()));
        }
        let per_coset: Vec<&CycNum> = self.transversal.iter().map(|&t| &xi[t]).collect();
        if per_coset.iter().any(|v| v.as_root_of_unity().is_none()) {
            return Err(Error::MalformedInput("twist values must be roots of unity".into()));
        }
        let m = self.transversal.len();
        let t_matrices = (0..m)
            .map(|c| matrix::scale(&self.t_matrices[c], per_coset[c]))
            .collect();
        let mut alpha = self.alpha.clone();
        for i in 0..m {
            for j in 0..m {
                let k = self.coset_of[g.mul(self.transversal[i], self.transversal[j])];
                let num = &(&self.alpha[i][j] * per_coset[i]) * per_coset[j];
                alpha[i][j] = num.div(per_coset[k])?.minimize();
            }
        }
        Ok(ProjRep {
            t_matrices,
            alpha,
            normalization: format!("{}; twisted", self.normalization),
            twisted: true,
            ..self.clone()
        })
    }

    /// A seeded coset-constant function with values among the 4th roots of
    /// unity, equal to 1 on `N`.
    pub fn random_twist(&self, seed: u64) -> Vec<CycNum> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let per_coset: Vec<CycNum> = (0..self.transversal.len())
            .map(|c| {
                if c == 0 {
                    CycNum::one()
                } else {
                    CycNum::root_of_unity(4, rng.gen_range(0..4))
                }
            })
            .collect();
        (0..self.group.order())
            .map(|x| per_coset[self.coset_of[x]].clone())
            .collect()
    }

    pub fn describe(&self) -> Value {
        json!({
            "degree": self.degree,
            "transversal": self.transversal,
            "construction": self.construction,
            "normalization": self.normalization,
        })
    }
}

/// A matrix representation of `N` affording `θ`, indexed by local elements.
fn theta_representation(
    triple: &CharacterTriple,
    supplied: Option<&Vec<CycMatrix>>,
) -> Result<(Vec<CycMatrix>, String)> {
    let ng = &triple.n_view.group;
    let d = triple.theta_degree() as usize;
    let theta_local = |x: Elem| triple.n_table.value_at(triple.theta_row, x).clone();
    if d == 1 {
        let mats = (0..ng.order()).map(|x| vec![vec![theta_local(x)]]).collect();
        return Ok((mats, "linear".into()));
    }
    if let Some(mats) = supplied {
        if mats.len() != ng.order() || mats.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(Error::ShapeViolation("supplied matrices have the wrong shape".into()));
        }
        for x in 0..ng.order() {
            if matrix::trace(&mats[x]) != theta_local(x) {
                return Err(Error::MalformedInput(format!("supplied matrix {x} does not afford theta")));
            }
            for y in 0..ng.order() {
                if matrix::mul(&mats[x], &mats[y]) != mats[ng.mul(x, y)] {
                    return Err(Error::MalformedInput("supplied matrices are not a representation".into()));
                }
            }
        }
        return Ok((mats.clone(), "supplied".into()));
    }
    monomial_representation(triple, d)
        .ok_or_else(|| Error::NotRealizable("theta is not monomial and no matrices were supplied".into()))?
}

/// Searches `U ≤ N` of index `θ(1)` (largest first) and a linear `λ` of
/// `U` with `⟨θ_U, λ⟩ ≠ 0`; then `λ^N = θ` and the induced matrices are
/// monomial.
fn monomial_representation(triple: &CharacterTriple, d: usize) -> Option<Result<(Vec<CycMatrix>, String)>> {
    let ng = &triple.n_view.group;
    let mut subs: Vec<Subgroup> = ng
        .all_subgroups()
        .into_iter()
        .filter(|u| u.order() * d == ng.order())
        .collect();
    subs.sort();
    for u in subs {
        let uv = ng.subgroup_view(&u);
        let ut = match CharacterTable::compute(uv.group.clone()) {
            Ok(t) => t,
            Err(e) => return Some(Err(e)),
        };
        let theta_u = triple.n_table.restrict_character(triple.theta_row, &uv);
        let Some(lrow) = (0..ut.num_classes())
            .find(|&r| ut.degree(r) == 1 && !ut.inner_product(&theta_u, ut.row(r)).is_zero())
        else {
            continue;
        };
        // Right coset representatives: N = ⊔ U t_i.
        let mut reps: Vec<Elem> = Vec::new();
        for x in 0..ng.order() {
            if reps.iter().all(|&t| !u.contains(ng.mul(x, ng.inv(t)))) {
                reps.push(x);
            }
        }
        let lam = |x: Elem| -> CycNum {
            match uv.local(x) {
                Some(l) => ut.value_at(lrow, l).clone(),
                None => CycNum::zero(),
            }
        };
        let mats: Vec<CycMatrix> = (0..ng.order())
            .map(|n| {
                reps.iter()
                    .map(|&ti| {
                        reps.iter()
                            .map(|&tj| lam(ng.mul(ng.mul(ti, n), ng.inv(tj))))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let label = format!("monomial from a subgroup of order {} (character {lrow})", u.order());
        return Some(Ok((mats, label)));
    }
    None
}

/// Scalar `c` with `c^d · δ = 1`, if one exists among cyclotomic numbers we
/// can build.
fn det_normalizer(delta: &CycNum, d: u32) -> Result<CycNum> {
    if let Some((o, e)) = delta.as_root_of_unity() {
        return Ok(CycNum::root_of_unity(o * d, -(e as i64)));
    }
    let abs_sq = delta
        .norm_sq()
        .as_rational()
        .ok_or_else(|| Error::NotRealizable("determinant has irrational absolute value".into()))?;
    let r = CycNum::rational_root(&abs_sq, 2)
        .ok_or_else(|| Error::NotRealizable("determinant has irrational absolute value".into()))?;
    let unit = delta.div(&CycNum::from_rational(r.clone()))?;
    let (o, e) = unit
        .as_root_of_unity()
        .ok_or_else(|| Error::NotRealizable("determinant is not a rational times a root of unity".into()))?;
    let inv_r = r.recip();
    let radical = match CycNum::rational_root(&inv_r, d) {
        Some(x) => CycNum::from_rational(x),
        None if d == 2 => CycNum::sqrt_rational(&inv_r)
            .ok_or_else(|| Error::NotRealizable("determinant too large".into()))?,
        None => return Err(Error::NotRealizable(format!("no rational {d}-th root of the determinant"))),
    };
    Ok(&radical * &CycNum::root_of_unity(o * d, -(e as i64)))
}

/// The unique-up-to-scalar `X` with `X D(n^t) = D(n) X` on generators of
/// `N`, scaled to determinant 1.
fn intertwiner(triple: &CharacterTriple, d_mats: &[CycMatrix], t: Elem) -> Result<CycMatrix> {
    let d = d_mats[0].len();
    let g = &triple.group;
    let nv = &triple.n_view;
    let mut system: CycMatrix = Vec::new();
    for gen in nv.group.generators() {
        let n = nv.embed[gen];
        let m = nv.local(g.conj(n, t)).expect("N is normal");
        let dn = &d_mats[gen];
        let dm = &d_mats[m];
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![CycNum::zero(); d * d];
                for l in 0..d {
                    row[i * d + l] = &row[i * d + l] + &dm[l][j];
                    row[l * d + j] = &row[l * d + j] - &dn[i][l];
                }
                system.push(row);
            }
        }
    }
    let ns = matrix::right_nullspace(&system, d * d);
    if ns.len() != 1 {
        return Err(Error::IntertwinerRankError(ns.len()));
    }
    let v = &ns[0];
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero basis vector").clone();
    let lead_inv = lead.inv()?;
    let x: CycMatrix = (0..d)
        .map(|i| (0..d).map(|j| (&v[i * d + j] * &lead_inv).minimize()).collect())
        .collect();
    let c = det_normalizer(&matrix::determinant(&x), d as u32)?;
    Ok(matrix::scale(&x, &c)
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.minimize()).collect())
        .collect())
}

/// A projective representation associated with `θ`.
pub fn build_projective_rep(triple: &CharacterTriple, options: &ProjRepOptions) -> Result<ProjRep> {
    let g = &triple.group;
    let q = &triple.quotient;
    let transversal: Vec<Elem> = match options.transversal {
        TransversalChoice::Smallest => q.representatives.clone(),
        TransversalChoice::Largest => {
            let mut reps = vec![0; q.representatives.len()];
            for x in 0..g.order() {
                let c = q.projection[x];
                if c != 0 {
                    reps[c] = reps[c].max(x);
                }
            }
            reps
        }
    };
    let (n_matrices, construction) = theta_representation(triple, options.matrices.as_ref())?;
    let d = triple.theta_degree() as usize;
    let t_matrices: Vec<CycMatrix> = if d == 1 {
        vec![matrix::identity(1); transversal.len()]
    } else {
        transversal
            .iter()
            .map(|&t| {
                if t == 0 {
                    Ok(matrix::identity(d))
                } else {
                    intertwiner(triple, &n_matrices, t)
                }
            })
            .collect::<Result<_>>()?
    };
    let normalization = if d == 1 { "trivial on transversal" } else { "determinant one" };
    let mut rep = ProjRep {
        degree: d,
        transversal,
        coset_of: q.projection.clone(),
        n_view: triple.n_view.clone(),
        group: g.clone(),
        n_matrices,
        t_matrices,
        alpha: Vec::new(),
        construction,
        normalization: normalization.into(),
        twisted: false,
    };
    let m = rep.transversal.len();
    let mut alpha = vec![vec![CycNum::one(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let prod = g.mul(rep.transversal[i], rep.transversal[j]);
            let lhs = matrix::mul(&rep.t_matrices[i], &rep.t_matrices[j]);
            let rhs = rep.matrix(prod);
            let (r, c) = (0..d)
                .flat_map(|r| (0..d).map(move |c| (r, c)))
                .find(|&(r, c)| !rhs[r][c].is_zero())
                .expect("invertible matrix");
            let a = lhs[r][c].div(&rhs[r][c])?.minimize();
            if matrix::scale(&rhs, &a) != lhs {
                return Err(Error::Internal("transversal product is not a scalar multiple".into()));
            }
            if a.as_root_of_unity().is_none() {
                return Err(Error::Internal(format!("factor set value {a} is not a root of unity")));
            }
            alpha[i][j] = a;
        }
    }
    rep.alpha = alpha;
    Ok(rep)
}

/// `ξ·P`; see [`ProjRep::twist`].
pub fn twist_projective_rep(p: &ProjRep, xi: &[CycNum]) -> Result<ProjRep> {
    p.twist(xi)
}

/// The representation group `Ĝ` of a projective representation.
#[derive(Debug, Clone)]
pub struct RepGroup {
    pub ghat: Arc<FiniteGroup>,
    /// `|Z|`.
    pub k: u32,
    pub base_order: usize,
    /// `N × Z`.
    pub nhat: Subgroup,
    /// `N × 1`.
    pub n_in_ghat: Subgroup,
    /// `1 × Z`.
    pub z_subgroup: Subgroup,
    /// `τ` on the classes of `Ĝ`.
    pub tau: Vec<CycNum>,
}

impl RepGroup {
    pub fn new(triple: &CharacterTriple, p: &ProjRep, cap: usize) -> Result<Self> {
        let g = &triple.group;
        let orders: Vec<(u32, u32)> = p
            .alpha
            .iter()
            .flatten()
            .map(|a| a.as_root_of_unity().expect("checked at construction"))
            .collect();
        let k = orders.iter().fold(1u32, |acc, &(o, _)| num_integer::lcm(acc, o));
        let n = g.order();
        let ku = k as usize;
        if n * ku > cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        let m = p.transversal.len();
        let exps: Vec<usize> = orders.iter().map(|&(o, e)| (e * (k / o)) as usize).collect();
        let alpha_exp = |x: Elem, y: Elem| exps[p.coset_of(x) * m + p.coset_of(y)];
        let size = n * ku;
        let mut mul = vec![0u32; size * size];
        for x in 0..n {
            for y in 0..n {
                let xy = g.mul(x, y);
                let c = alpha_exp(x, y);
                for a in 0..ku {
                    for b in 0..ku {
                        mul[(x * ku + a) * size + y * ku + b] = (xy * ku + (a + b + c) % ku) as u32;
                    }
                }
            }
        }
        let ghat = FiniteGroup::from_table_unchecked(
            &format!("{}^", g.name()),
            size,
            mul,
            Origin::TwistedExtension {
                base: g.name().to_string(),
                cyclic_order: ku,
            },
        );
        if let Some(v) = ghat.associativity_violation(false) {
            return Err(Error::Internal(format!("representation group is not associative at {v:?}")));
        }
        let ghat = Arc::new(ghat);
        let collect = |it: &mut dyn Iterator<Item = Elem>| {
            let mut v: Vec<Elem> = it.collect();
            v.sort_unstable();
            Subgroup::from_members(&ghat, &v)
        };
        let nm = triple.normal.members();
        let nhat = collect(&mut nm.iter().flat_map(|&x| (0..ku).map(move |a| x * ku + a)))?;
        let n_in_ghat = collect(&mut nm.iter().map(|&x| x * ku))?;
        let z_subgroup = collect(&mut (0..ku))?;
        let tau: Vec<CycNum> = ghat
            .conjugacy_classes()
            .iter()
            .map(|cl| {
                let (x, a) = (cl.representative / ku, cl.representative % ku);
                (&CycNum::root_of_unity(k, a as i64) * &p.trace(x)).minimize()
            })
            .collect();
        let rep = RepGroup {
            ghat,
            k,
            base_order: n,
            nhat,
            n_in_ghat,
            z_subgroup,
            tau,
        };
        rep.check(triple)?;
        Ok(rep)
    }

    pub fn pi(&self, x: Elem) -> Elem {
        x / self.k as usize
    }

    pub fn elem(&self, g: Elem, a: u32) -> Elem {
        g * self.k as usize + (a % self.k) as usize
    }

    /// `λ̂(n, z) = z^{-1}`.
    pub fn lambda_hat(&self, x: Elem) -> CycNum {
        CycNum::root_of_unity(self.k, -((x % self.k as usize) as i64))
    }

    pub fn tau_at(&self, x: Elem) -> &CycNum {
        &self.tau[self.ghat.class_of(x)]
    }

    fn check(&self, triple: &CharacterTriple) -> Result<()> {
        let gh = &self.ghat;
        let total: CycNum = gh
            .conjugacy_classes()
            .iter()
            .zip(&self.tau)
            .map(|(cl, t)| t.norm_sq().scale_int(cl.size as i64))
            .sum();
        if total != CycNum::from_int(gh.order() as i64) {
            return Err(Error::Internal("tau is not irreducible".into()));
        }
        for &n in triple.normal.members() {
            if self.tau_at(self.elem(n, 0)) != triple.theta_at(n) {
                return Err(Error::Internal("tau does not restrict to theta".into()));
            }
        }
        if !gh.is_normal(&self.n_in_ghat) {
            return Err(Error::Internal("N x 1 is not normal in the representation group".into()));
        }
        let gens = gh.generators();
        for &z in self.z_subgroup.members() {
            if gens.iter().any(|&s| gh.mul(z, s) != gh.mul(s, z)) {
                return Err(Error::Internal("Z is not central".into()));
            }
        }
        for &x in self.nhat.members() {
            for &s in &gens {
                let y = gh.conj(x, s);
                if !self.nhat.contains(y) || self.lambda_hat(y) != self.lambda_hat(x) {
                    return Err(Error::Internal("lambda-hat is not invariant".into()));
                }
            }
        }
        let kernel: Vec<Elem> = self
            .nhat
            .members()
            .iter()
            .copied()
            .filter(|&x| self.lambda_hat(x).is_one())
            .collect();
        if kernel != self.n_in_ghat.members() {
            return Err(Error::Internal("kernel of lambda-hat is not N".into()));
        }
        if triple.is_central() {
            let center = gh.center();
            if !self.nhat.is_subset_of(&center) {
                return Err(Error::Internal("N-hat is not central although N is".into()));
            }
        }
        Ok(())
    }
}

/// The standard bijection `χ ↦ χ*` with `χ^π = χ*·τ`.
#[derive(Debug, Clone)]
pub struct StandardBijection {
    /// `Ĝ → Ĝ/N`.
    pub quotient: Quotient,
    pub table: Arc<CharacterTable>,
    /// `(row of G, row of Ĝ/N)`, ordered by the row of `G`.
    pub map: Vec<(usize, usize)>,
    /// Rows of `Ĝ/N` lying over `λ̂`.
    pub over: Vec<usize>,
}

impl StandardBijection {
    pub fn image(&self, row: usize) -> Option<usize> {
        self.map.iter().find(|&&(c, _)| c == row).map(|&(_, b)| b)
    }

    pub fn preimage(&self, qrow: usize) -> Option<usize> {
        self.map.iter().find(|&&(_, b)| b == qrow).map(|&(c, _)| c)
    }
}

pub fn standard_bijection(triple: &CharacterTriple, rep: &RepGroup) -> Result<StandardBijection> {
    let gh = &rep.ghat;
    let quotient = gh.quotient(&rep.n_in_ghat)?;
    let table = Arc::new(CharacterTable::compute(Arc::new(quotient.group.clone()))?);
    let qt = &table;
    let over: Vec<usize> = if rep.k == 1 {
        (0..qt.num_classes()).collect()
    } else {
        let z = quotient.projection[rep.elem(0, 1)];
        let target = CycNum::root_of_unity(rep.k, -1);
        (0..qt.num_classes())
            .filter(|&b| qt.value_at(b, z) == &target.scale_int(qt.degree(b) as i64))
            .collect()
    };
    let reps: Vec<Elem> = gh.conjugacy_classes().iter().map(|c| c.representative).collect();
    let mut map = Vec::new();
    for &chi in triple.irr_over() {
        let hits: Vec<usize> = (0..qt.num_classes())
            .filter(|&b| {
                reps.iter().all(|&x| {
                    let lhs = triple.table.value_at(chi, rep.pi(x));
                    let rhs = qt.value_at(b, quotient.projection[x]) * rep.tau_at(x);
                    *lhs == rhs
                })
            })
            .collect();
        let [b] = hits[..] else {
            return Err(Error::BijectionFailure(format!(
                "character {chi} has {} candidate images",
                hits.len()
            )));
        };
        if !over.contains(&b) {
            return Err(Error::BijectionFailure(format!("image of {chi} does not lie over lambda-hat")));
        }
        if qt.degree(b) * triple.theta_degree() != triple.table.degree(chi) {
            return Err(Error::BijectionFailure(format!("degree ratio fails for {chi}")));
        }
        map.push((chi, b));
    }
    let images: BTreeSet<usize> = map.iter().map(|&(_, b)| b).collect();
    if images.len() != map.len() || images.iter().copied().collect::<Vec<_>>() != over {
        return Err(Error::BijectionFailure("map is not a bijection onto Irr(Q | lambda-hat)".into()));
    }
    Ok(StandardBijection {
        quotient,
        table,
        map,
        over,
    })
}

/// One θ-block with its defect witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaBlock {
    /// Rows of `G`'s table.
    pub rows: Vec<usize>,
    /// Index of the block `B̂` of `Ĝ/N` it comes from.
    pub source_block: usize,
    /// `D_θ = π(D̂)`, a subgroup of `G` containing `N`.
    pub defect_group: Subgroup,
    /// `D_θ/N` inside `G/N`.
    pub defect_quotient: Subgroup,
}

#[derive(Debug, Clone)]
pub struct ThetaBlockReport {
    pub p: u32,
    pub triple: Value,
    pub projective: Value,
    pub rep: RepGroup,
    pub bijection: StandardBijection,
    pub source_blocks: BlockPartition,
    pub blocks: Vec<ThetaBlock>,
}

impl ThetaBlockReport {
    pub fn partition(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.rows.clone()).collect()
    }

    pub fn block_of(&self, row: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.rows.contains(&row))
    }

    pub fn to_json(&self) -> Value {
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "rows": b.rows,
                    "defect_group": b.defect_group.members(),
                    "defect_quotient_order": b.defect_quotient.order(),
                })
            })
            .collect();
        json!({
            "p": self.p,
            "triple": self.triple,
            "projective_representation": self.projective,
            "z_order": self.rep.k,
            "rep_group_order": self.rep.ghat.order(),
            "standard_bijection": self.bijection.map,
            "reduction": self.source_blocks.reduction().describe(),
            "theta_blocks": blocks,
        })
    }
}

/// θ-blocks through the default projective representation.
pub fn theta_blocks(triple: &CharacterTriple, p: u32, choice: IdealChoice) -> Result<ThetaBlockReport> {
    let proj = build_projective_rep(triple, &ProjRepOptions::default())?;
    theta_blocks_with(triple, &proj, p, choice, DEFAULT_REP_GROUP_CAP)
}

/// θ-blocks through a given projective representation. The ideal choice
/// applies to the reduction at the conductor of `Ĝ/N`.
pub fn theta_blocks_with(
    triple: &CharacterTriple,
    proj: &ProjRep,
    p: u32,
    choice: IdealChoice,
    cap: usize,
) -> Result<ThetaBlockReport> {
    let rep = RepGroup::new(triple, proj, cap)?;
    let bij = standard_bijection(triple, &rep)?;
    let (part, blocks) = pull_back_blocks(triple, &rep, &bij, p, choice)?;
    Ok(ThetaBlockReport {
        p,
        triple: triple.describe(),
        projective: proj.describe(),
        rep,
        bijection: bij,
        source_blocks: part,
        blocks,
    })
}

/// The p-blocks of `Ĝ/N` under the given ideal choice, and the θ-blocks
/// obtained from them through the standard bijection, sorted by their
/// smallest row.
pub fn pull_back_blocks(
    triple: &CharacterTriple,
    rep: &RepGroup,
    bij: &StandardBijection,
    p: u32,
    choice: IdealChoice,
) -> Result<(BlockPartition, Vec<ThetaBlock>)> {
    let red = reduction_for(&bij.table, p, choice)?;
    let part = p_blocks(&bij.table, p, &red)?;
    let k = rep.k as usize;
    let mut blocks = Vec::new();
    for (bi, b) in part.blocks.iter().enumerate() {
        let mut rows: Vec<usize> = b.rows.iter().filter_map(|&r| bij.preimage(r)).collect();
        if rows.is_empty() {
            continue;
        }
        rows.sort_unstable();
        let dhat = bij.quotient.preimage(&b.defect_group);
        let mut d: Vec<Elem> = dhat.members().iter().map(|&x| x / k).collect();
        d.dedup();
        let defect_group = Subgroup::from_members(&triple.group, &d)?;
        let defect_quotient = triple.quotient.image(&defect_group);
        blocks.push(ThetaBlock {
            rows,
            source_block: bi,
            defect_group,
            defect_quotient,
        });
    }
    blocks.sort_by_key(|b| b.rows[0]);
    Ok((part, blocks))
}

/// Rows of `H`'s table extending `θ`, for `N ≤ H ≤ G`. Empty iff `θ`
/// does not extend.
pub fn theta_extends_to(triple: &CharacterTriple, h: &Subgroup) -> Result<(SubgroupView, Arc<CharacterTable>, Vec<usize>)> {
    if !triple.normal.is_subset_of(h) {
        return Err(Error::MalformedInput("H does not contain N".into()));
    }
    let hv = triple.group.subgroup_view(h);
    let ht = Arc::new(CharacterTable::compute(hv.group.clone())?);
    let rows = (0..ht.num_classes())
        .filter(|&r| {
            ht.degree(r) == triple.theta_degree()
                && triple.normal.members().iter().all(|&n| {
                    ht.value_at(r, hv.local(n).expect("N ≤ H")) == triple.theta_at(n)
                })
        })
        .collect();
    Ok((hv, ht, rows))
}

/// `xN` is θ-good if `θ` has a `D`-invariant extension to `N⟨x⟩`, where
/// `D/N = C_{G/N}(xN)`.
pub fn is_theta_good(triple: &CharacterTriple, x: Elem) -> Result<bool> {
    let g = &triple.group;
    let h = g.join(&triple.normal, &[x]);
    let (hv, ht, exts) = theta_extends_to(triple, &h)?;
    if exts.is_empty() {
        return Ok(false);
    }
    let q = &triple.quotient;
    let d = q.preimage(&q.group.centralizer(q.projection[x]));
    let dv = g.subgroup_view(&d);
    let gens: Vec<Elem> = dv.group.generators().iter().map(|&s| dv.embed[s]).collect();
    Ok(exts.iter().any(|&r| {
        gens.iter().all(|&s| {
            h.members().iter().all(|&y| {
                let ys = hv.local(g.conj(y, s)).expect("D normalizes N<x>");
                ht.value_at(r, ys) == ht.value_at(r, hv.local(y).unwrap())
            })
        })
    }))
}

/// Number of classes of `G/N` consisting of θ-good cosets.
pub fn theta_good_class_count(triple: &CharacterTriple) -> Result<usize> {
    let q = &triple.quotient;
    let mut count = 0;
    for cl in q.group.conjugacy_classes() {
        if is_theta_good(triple, q.representatives[cl.representative])? {
            count += 1;
        }
    }
    Ok(count)
}

/// `λ(x) = ζ^{e·x}` inflated from a linear character of `G/N`, as a
/// coset-constant function on `G`; used as a homomorphism twist.
pub fn inflate_linear(triple: &CharacterTriple, q_table: &CharacterTable, row: usize) -> Vec<CycNum> {
    (0..triple.group.order())
        .map(|x| q_table.value_at(row, triple.quotient.projection[x]).clone())
        .collect()
}

/// `ζ_k` exponent of a root of unity lifted to `k`, if its order divides `k`.
pub fn root_exponent(v: &CycNum, k: u32) -> Option<u32> {
    let (o, e) = v.as_root_of_unity()?;
    k.is_multiple_of(o).then_some(e * (k / o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin_group;

    fn triple(name: &str, normal: NormalSpec, theta: usize) -> CharacterTriple {
        let g = Arc::new(builtin_group(name).unwrap());
        let n = normal.resolve(&g).unwrap();
        CharacterTriple::new(g, n, theta).unwrap()
    }

    fn faithful_central(name: &str) -> CharacterTriple {
        let g = Arc::new(builtin_group(name).unwrap());
        let z = g.center();
        let probe = CharacterTriple::new(g.clone(), z.clone(), 0).unwrap();
        let row = (0..probe.n_table.num_classes())
            .find(|&r| {
                let nt = &probe.n_table;
                (1..nt.group().order()).all(|x| !nt.value_at(r, x).is_one())
            })
            .unwrap();
        CharacterTriple::new(g, z, row).unwrap()
    }

    fn degree3_row(t: &CharacterTriple) -> usize {
        (0..t.n_table.num_classes()).find(|&r| t.n_table.degree(r) == 3).unwrap()
    }

    #[test]
    fn invalid_triples_are_rejected() {
        let g = Arc::new(builtin_group("A4").unwrap());
        let v4 = NormalSpec::Auto("auto:derived".into()).resolve(&g).unwrap();
        // The three nontrivial characters of V4 are permuted by A4.
        assert!(matches!(CharacterTriple::new(g.clone(), v4, 1), Err(Error::InvalidTriple(_))));
        let c3 = g.generate(&[g.conjugacy_classes()[1].representative]);
        let c3 = if c3.order() == 3 { c3 } else { g.sylow_subgroup(3) };
        assert!(matches!(CharacterTriple::new(g, c3, 0), Err(Error::NotNormal)));
    }

    #[test]
    fn trivial_normal_subgroup_gives_identity_bijection() {
        let t = triple("S4", NormalSpec::Auto("auto:trivial".into()), 0);
        let p = build_projective_rep(&t, &ProjRepOptions::default()).unwrap();
        p.check_laws(&t).unwrap();
        let rep = RepGroup::new(&t, &p, DEFAULT_REP_GROUP_CAP).unwrap();
        assert_eq!(rep.k, 1);
        let sb = standard_bijection(&t, &rep).unwrap();
        assert_eq!(sb.map.len(), 5);
        for &(c, b) in &sb.map {
            let f: Vec<CycNum> = t.table.classes().iter().map(|cl| {
                sb.table.value_at(b, sb.quotient.projection[rep.elem(cl.representative, 0)]).clone()
            }).collect();
            assert_eq!(f, t.table.row(c));
        }
        let report = theta_blocks(&t, 2, IdealChoice::default()).unwrap();
        let ordinary = crate::blocks::p_blocks_default(&t.table, 2).unwrap();
        assert_eq!(report.partition(), ordinary.row_sets());
    }

    #[test]
    fn s4_over_v4_trivial_theta_has_trivial_factor_set() {
        let g = Arc::new(builtin_group("S4").unwrap());
        let v4 = g
            .all_subgroups()
            .into_iter()
            .find(|h| h.order() == 4 && g.is_normal(h))
            .unwrap();
        let t = CharacterTriple::new(g, v4, 0).unwrap();
        let p = build_projective_rep(&t, &ProjRepOptions::default()).unwrap();
        assert!(p.alpha.iter().flatten().all(|a| a.is_one()));
    }

    #[test]
    fn central_faithful_d8_needs_a_cover_of_order_16() {
        let t = faithful_central("D8");
        let p = build_projective_rep(&t, &ProjRepOptions::default()).unwrap();
        p.check_laws(&t).unwrap();
        let minus = CycNum::from_int(-1);
        assert!(p.alpha.iter().flatten().all(|a| a.is_one() || *a == minus));
        assert!(p.alpha.iter().flatten().any(|a| *a == minus));
        let rep = RepGroup::new(&t, &p, DEFAULT_REP_GROUP_CAP).unwrap();
        assert_eq!(rep.ghat.order(), 16);
        let report = theta_blocks(&t, 2, IdealChoice::default()).unwrap();
        assert_eq!(report.partition(), vec![t.irr_over().to_vec()]);
        assert_eq!(report.blocks[0].defect_quotient.order(), 4);
        assert_eq!(report.blocks[0].defect_group.order(), 8);
    }

    #[test]
    fn s4_over_a4_degree_three() {
        let g = Arc::new(builtin_group("S4").unwrap());
        let a4 = g.derived_subgroup();
        let probe = CharacterTriple::new(g.clone(), a4.clone(), 0).unwrap();
        let row = degree3_row(&probe);
        let t = CharacterTriple::new(g, a4, row).unwrap();
        assert_eq!(t.irr_over().len(), 2);
        let p = build_projective_rep(&t, &ProjRepOptions::default()).unwrap();
        assert!(p.construction.starts_with("monomial"));
        p.check_laws(&t).unwrap();
        let rep = RepGroup::new(&t, &p, DEFAULT_REP_GROUP_CAP).unwrap();
        let sb = standard_bijection(&t, &rep).unwrap();
        assert!(sb.map.iter().all(|&(_, b)| sb.table.degree(b) == 1));
        let report = theta_blocks(&t, 2, IdealChoice::default()).unwrap();
        assert_eq!(report.partition(), vec![t.irr_over().to_vec()]);
        assert_eq!(report.blocks[0].defect_quotient.order(), 2);
        let h = Subgroup::whole(&t.group);
        assert_eq!(theta_extends_to(&t, &h).unwrap().2.len(), 2);
        assert_eq!(theta_good_class_count(&t).unwrap(), t.irr_over().len());
    }

    #[test]
    fn alternate_witnesses_agree() {
        let t = faithful_central("SL23");
        let default = build_projective_rep(&t, &ProjRepOptions::default()).unwrap();
        let largest = build_projective_rep(
            &t,
            &ProjRepOptions {
                transversal: TransversalChoice::Largest,
                matrices: None,
            },
        )
        .unwrap();
        let twisted = default.twist(&default.random_twist(7)).unwrap();
        for p in [&default, &largest, &twisted] {
            p.check_laws(&t).unwrap();
        }
        for prime in [2, 3] {
            let parts: Vec<_> = [&default, &largest, &twisted]
                .iter()
                .map(|p| {
                    theta_blocks_with(&t, p, prime, IdealChoice::default(), DEFAULT_REP_GROUP_CAP)
                        .unwrap()
                        .partition()
                })
                .collect();
            assert_eq!(parts[0], parts[1]);
            assert_eq!(parts[0], parts[2]);
        }
    }

    #[test]
    fn twist_must_be_coset_constant() {
        let t = faithful_central("Q8");
        let p = build_projective_rep(&t, &ProjRepOptions::default()).unwrap();
        let mut xi = vec![CycNum::one(); 8];
        xi[t.quotient.representatives[1]] = CycNum::from_int(-1);
        assert!(matches!(p.twist(&xi), Err(Error::NotCosetConstant)));
        let same = p.twist(&vec![CycNum::one(); 8]).unwrap();
        assert_eq!(same.alpha, p.alpha);
        assert_eq!(same.t_matrices, p.t_matrices);
    }

    #[test]
    fn q8_faithful_theta_does_not_extend() {
        let t = faithful_central("Q8");
        let h = Subgroup::whole(&t.group);
        assert!(theta_extends_to(&t, &h).unwrap().2.is_empty());
        let n = t.normal.clone();
        assert_eq!(theta_extends_to(&t, &n).unwrap().2, vec![t.theta_row]);
    }

    #[test]
    fn nonlinear_theta_on_quaternion_normal_subgroup() {
        let g = Arc::new(builtin_group("SL23").unwrap());
        let q8 = g.derived_subgroup();
        assert_eq!(q8.order(), 8);
        let probe = CharacterTriple::new(g.clone(), q8.clone(), 0).unwrap();
        let row = (0..probe.n_table.num_classes()).find(|&r| probe.n_table.degree(r) == 2).unwrap();
        let t = CharacterTriple::new(g, q8, row).unwrap();
        let p = build_projective_rep(&t, &ProjRepOptions::default()).unwrap();
        p.check_laws(&t).unwrap();
        let report = theta_blocks(&t, 3, IdealChoice::default()).unwrap();
        let covered: usize = report.blocks.iter().map(|b| b.rows.len()).sum();
        assert_eq!(covered, t.irr_over().len());
    }
}
