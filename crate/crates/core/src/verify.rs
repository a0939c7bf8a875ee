//! Executable checks of the block-theoretic statements about θ-blocks,
//! run over a corpus of character triples and primes.
//!
//! Every check yields an [`Outcome`]. A check whose hypothesis does not
//! hold is reported as `NotApplicable`; one whose conclusion holds only
//! because nothing needed testing is `Vacuous`. Neither counts as a pass.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blocks::{p_blocks, reduction_for, BlockPartition};
use crate::chartab::CharacterTable;
use crate::cyclo::{CycNum, IdealChoice, IdealReduction};
use crate::error::{Error, Result};
use crate::groups::{GroupSpec, Subgroup};
use crate::modrep::{
    brauer_characters, brauer_columns, cartan, decomposition_matrix, is_block_diagonal_splittable,
    modular_irreducibles, submatrix_over, BrauerTable, DecompositionMatrix, DEFAULT_MODULAR_CAP,
    DEFAULT_SEED,
};
use crate::triples::{
    build_projective_rep, is_theta_good, pull_back_blocks, standard_bijection, theta_blocks_with,
    theta_extends_to, theta_good_class_count, CharacterTriple, NormalSpec, ProjRepOptions,
    RepGroup, ThetaBlock, ThetaBlockReport, TransversalChoice, TripleSpec, DEFAULT_REP_GROUP_CAP,
};
use crate::util::p_part;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Each θ-block lies in one ordinary block `B`, and `D_θ` is contained
    /// in `DN` up to conjugacy for a defect group `D` of `B`.
    Containment,
    /// Central `N`: `B_θ = Irr(B|θ)` and `D_θ` is conjugate to `DN`.
    CentralEquality,
    /// `θ` extends to `χ`: the θ-blocks are `{γχ : γ ∈ B̄}` for blocks
    /// `B̄` of `G/N`, with matching defect groups.
    ExtensionProduct,
    /// `p ∤ |G:N|` and `θ` extends: every θ-block is a singleton.
    CoprimeSingletons,
    /// `G/N` a p-group: one θ-block, `D_θ = G`.
    PQuotient,
    /// `χ(g) = 0` when `(gN)_p` is not conjugate into `D_θ/N`.
    Vanishing,
    /// Orthogonality over `Irr(G|θ)` for central `N`.
    Orthogonality,
    /// Central `N`: no `D_{B,θ}` splits into two diagonal blocks.
    DecompositionConnectivity,
    /// If `θ` extends to `D_θ`: all `(χ(1)/θ(1))_p = |G:D_θ|_p` iff
    /// `D_θ/N` is abelian.
    HeightAbelian,
    /// `|B_θ| ≤ |D_θ/N|`.
    BlockSizeBound,
    /// `p ∤ χ(1)/θ(1)` for all `χ ∈ Irr(G|θ)` forces abelian Sylow
    /// p-subgroups of `G/N`.
    AbelianSylow,
    /// Three independent projective representations give the same
    /// θ-blocks and conjugate defect groups.
    WellDefinedness,
    /// Ordinary blocks and θ-blocks do not depend on the maximal ideal.
    IdealInvariance,
    /// `|Irr(G|θ)|` equals the number of θ-good classes of `G/N`.
    GoodClassCount,
    /// Row and column orthogonality of the tables of `G` and `N`.
    TableOrthogonality,
    /// Decomposition equations, `C = DᵗD` and per-block Cartan
    /// connectivity.
    ModularConsistency,
    /// θ-blocks agree with golden data from the corpus file.
    Golden,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::Containment,
        Check::CentralEquality,
        Check::ExtensionProduct,
        Check::CoprimeSingletons,
        Check::PQuotient,
        Check::Vanishing,
        Check::Orthogonality,
        Check::DecompositionConnectivity,
        Check::HeightAbelian,
        Check::BlockSizeBound,
        Check::AbelianSylow,
        Check::WellDefinedness,
        Check::IdealInvariance,
        Check::GoodClassCount,
        Check::TableOrthogonality,
        Check::ModularConsistency,
        Check::Golden,
    ];

    /// Checks that do not depend on a prime.
    pub fn prime_independent(self) -> bool {
        matches!(
            self,
            Check::Orthogonality | Check::GoodClassCount | Check::TableOrthogonality
        )
    }

    pub fn id(self) -> &'static str {
        match self {
            Check::Containment => "containment",
            Check::CentralEquality => "central-equality",
            Check::ExtensionProduct => "extension-product",
            Check::CoprimeSingletons => "coprime-singletons",
            Check::PQuotient => "p-quotient",
            Check::Vanishing => "vanishing",
            Check::Orthogonality => "orthogonality",
            Check::DecompositionConnectivity => "decomposition-connectivity",
            Check::HeightAbelian => "height-abelian",
            Check::BlockSizeBound => "block-size-bound",
            Check::AbelianSylow => "abelian-sylow",
            Check::WellDefinedness => "well-definedness",
            Check::IdealInvariance => "ideal-invariance",
            Check::GoodClassCount => "good-class-count",
            Check::TableOrthogonality => "table-orthogonality",
            Check::ModularConsistency => "modular-consistency",
            Check::Golden => "golden",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .iter()
            .copied()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::MalformedInput(format!("unknown check {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Vacuous => "vacuous",
            Status::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub check: Check,
    pub instance: String,
    pub p: Option<u32>,
    pub status: Status,
    pub detail: Value,
    /// Enough to rerun the instance alone; present on failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repro: Option<Value>,
}

impl Outcome {
    fn key(&self) -> (String, u32, Check) {
        (self.instance.clone(), self.p.unwrap_or(0), self.check)
    }
}

/// Modular data of `G` at one prime.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub blocks: BlockPartition,
    pub brauer: BrauerTable,
    pub decomposition: DecompositionMatrix,
}

/// A triple at a prime, with lazily computed shared data.
pub struct Instance {
    pub name: String,
    pub triple: CharacterTriple,
    pub spec: TripleSpec,
    pub p: u32,
    pub choice: IdealChoice,
    pub seed: u64,
    report: OnceLock<Result<ThetaBlockReport>>,
    blocks: OnceLock<Result<BlockPartition>>,
    modular: OnceLock<Result<ModularData>>,
}

/// A Cayley-table spec reproducing a triple exactly.
pub fn spec_of(triple: &CharacterTriple) -> TripleSpec {
    TripleSpec {
        group: GroupSpec::Cayley {
            name: triple.group.name().to_string(),
            cayley: triple.group.cayley_rows(),
        },
        normal: NormalSpec::Elements(triple.normal.members().to_vec()),
        theta: triple.theta_row,
    }
}

impl Instance {
    pub fn new(name: &str, triple: CharacterTriple, p: u32) -> Self {
        let spec = spec_of(&triple);
        Self::with_spec(name, triple, spec, p, IdealChoice::default(), DEFAULT_SEED)
    }

    pub fn with_spec(
        name: &str,
        triple: CharacterTriple,
        spec: TripleSpec,
        p: u32,
        choice: IdealChoice,
        seed: u64,
    ) -> Self {
        Instance {
            name: name.to_string(),
            triple,
            spec,
            p,
            choice,
            seed,
            report: OnceLock::new(),
            blocks: OnceLock::new(),
            modular: OnceLock::new(),
        }
    }

    pub fn report(&self) -> Result<&ThetaBlockReport> {
        self.report
            .get_or_init(|| {
                let proj = build_projective_rep(&self.triple, &ProjRepOptions::default())?;
                theta_blocks_with(&self.triple, &proj, self.p, self.choice, DEFAULT_REP_GROUP_CAP)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Ordinary p-blocks of `G`.
    pub fn blocks(&self) -> Result<&BlockPartition> {
        self.blocks
            .get_or_init(|| {
                let t = &self.triple.table;
                p_blocks(t, self.p, &reduction_for(t, self.p, self.choice)?)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn modular(&self) -> Result<&ModularData> {
        self.modular
            .get_or_init(|| {
                let t = &self.triple.table;
                let red = reduction_for(t, self.p, self.choice)?;
                let blocks = p_blocks(t, self.p, &red)?;
                let mods = modular_irreducibles(&self.triple.group, self.p, self.seed, DEFAULT_MODULAR_CAP)?;
                let brauer = brauer_characters(&mods, &red)?;
                let decomposition = decomposition_matrix(t, &brauer, &blocks)?;
                Ok(ModularData {
                    blocks,
                    brauer,
                    decomposition,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn repro(&self) -> Value {
        json!({
            "name": self.name,
            "triple": self.spec,
            "p": self.p,
            "ideal_choice": format!("{},{}", self.choice.factor, self.choice.root),
            "seed": self.seed,
        })
    }

    fn outcome(&self, check: Check, status: Status, detail: Value) -> Outcome {
        Outcome {
            check,
            instance: self.name.clone(),
            p: (!check.prime_independent()).then_some(self.p),
            status,
            repro: (status == Status::Fail).then(|| self.repro()),
            detail,
        }
    }

    fn verdict(&self, check: Check, ok: bool, detail: Value) -> Outcome {
        self.outcome(check, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    /// Runs one check; computation errors become failures.
    pub fn run(&self, check: Check) -> Outcome {
        let res = match check {
            Check::Containment => check_containment(self),
            Check::CentralEquality => check_central_equality(self),
            Check::ExtensionProduct => check_extension_product(self),
            Check::CoprimeSingletons => check_coprime_singletons(self),
            Check::PQuotient => check_p_quotient(self),
            Check::Vanishing => check_vanishing(self),
            Check::Orthogonality => check_orthogonality(self),
            Check::DecompositionConnectivity => check_decomposition_connectivity(self),
            Check::HeightAbelian => check_height_abelian(self),
            Check::BlockSizeBound => check_block_size_bound(self),
            Check::AbelianSylow => check_abelian_sylow(self),
            Check::WellDefinedness => check_well_definedness(self),
            Check::IdealInvariance => check_ideal_invariance(self),
            Check::GoodClassCount => check_good_class_count(self),
            Check::TableOrthogonality => check_table_orthogonality(self),
            Check::ModularConsistency => check_modular_consistency(self),
            Check::Golden => Ok(self.outcome(check, Status::NotApplicable, json!("no golden data"))),
        };
        res.unwrap_or_else(|e| self.outcome(check, Status::Fail, json!({ "error": e.to_string() })))
    }
}

fn ordinary_block_of(inst: &Instance, row: usize) -> Result<usize> {
    Ok(inst.blocks()?.block_of(row))
}

/// `DN` for the defect group `D` of an ordinary block.
fn defect_times_normal(inst: &Instance, block: usize) -> Result<Subgroup> {
    let d = &inst.blocks()?.blocks[block].defect_group;
    Ok(inst.triple.group.join(&inst.triple.normal, d.members()))
}

pub fn check_containment(inst: &Instance) -> Result<Outcome> {
    let g = &inst.triple.group;
    let mut bad = Vec::new();
    for tb in &inst.report()?.blocks {
        let b = ordinary_block_of(inst, tb.rows[0])?;
        let same = tb
            .rows
            .iter()
            .map(|&r| ordinary_block_of(inst, r))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|&x| x == b);
        let dn = defect_times_normal(inst, b)?;
        if !same || !g.conjugate_into(&tb.defect_group, &dn) {
            bad.push(tb.rows.clone());
        }
    }
    let n = inst.report()?.blocks.len();
    Ok(inst.verdict(Check::Containment, bad.is_empty(), json!({ "theta_blocks": n, "violations": bad })))
}

pub fn check_central_equality(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    if !t.is_central() {
        return Ok(inst.outcome(Check::CentralEquality, Status::NotApplicable, json!("N is not central")));
    }
    let mut bad = Vec::new();
    for tb in &inst.report()?.blocks {
        let b = ordinary_block_of(inst, tb.rows[0])?;
        let over: Vec<usize> = inst.blocks()?.blocks[b]
            .rows
            .iter()
            .copied()
            .filter(|r| t.irr_over().contains(r))
            .collect();
        let dn = defect_times_normal(inst, b)?;
        if over != tb.rows || !t.group.subgroups_conjugate(&tb.defect_group, &dn) {
            bad.push(tb.rows.clone());
        }
    }
    Ok(inst.verdict(Check::CentralEquality, bad.is_empty(), json!({ "violations": bad })))
}

/// The table of `G/N` and its p-blocks under the instance's ideal choice.
fn quotient_blocks(inst: &Instance) -> Result<(CharacterTable, BlockPartition)> {
    let q = Arc::new(inst.triple.quotient.group.clone());
    let qt = CharacterTable::compute(q)?;
    let red = reduction_for(&qt, inst.p, inst.choice)?;
    let part = p_blocks(&qt, inst.p, &red)?;
    Ok((qt, part))
}

/// A row of `G`'s table restricting to `θ`.
fn theta_extension(inst: &Instance) -> Result<Option<usize>> {
    let t = &inst.triple;
    Ok((0..t.table.num_classes()).find(|&r| {
        t.table.degree(r) == t.theta_degree()
            && t.normal.members().iter().all(|&n| t.table.value_at(r, n) == t.theta_at(n))
    }))
}

pub fn check_extension_product(inst: &Instance) -> Result<Outcome> {
    let Some(chi0) = theta_extension(inst)? else {
        return Ok(inst.outcome(Check::ExtensionProduct, Status::NotApplicable, json!("theta does not extend")));
    };
    let t = &inst.triple;
    let (qt, qpart) = quotient_blocks(inst)?;
    let classes = t.table.classes();
    let mut expected: Vec<(Vec<usize>, Subgroup)> = Vec::new();
    for b in &qpart.blocks {
        let mut rows = Vec::new();
        for &gamma in &b.rows {
            let f: Vec<CycNum> = classes
                .iter()
                .map(|cl| {
                    let x = cl.representative;
                    qt.value_at(gamma, t.quotient.projection[x]) * t.table.value_at(chi0, x)
                })
                .collect();
            let r = t
                .table
                .find_row(&f)
                .ok_or_else(|| Error::Internal("Gallagher product is not irreducible".into()))?;
            rows.push(r);
        }
        rows.sort_unstable();
        expected.push((rows, b.defect_group.clone()));
    }
    expected.sort();
    let report = inst.report()?;
    let got = report.partition();
    let mut sorted = got.clone();
    sorted.sort();
    let same = sorted == expected.iter().map(|(r, _)| r.clone()).collect::<Vec<_>>();
    let defects = same
        && report.blocks.iter().all(|tb| {
            let (_, d) = expected.iter().find(|(r, _)| *r == tb.rows).expect("same partition");
            t.quotient.group.subgroups_conjugate(&tb.defect_quotient, d)
        });
    Ok(inst.verdict(
        Check::ExtensionProduct,
        same && defects,
        json!({ "extension": chi0, "partition": got, "expected": expected.iter().map(|(r, _)| r).collect::<Vec<_>>() }),
    ))
}

pub fn check_coprime_singletons(inst: &Instance) -> Result<Outcome> {
    let index = inst.triple.quotient.group.order() as u64;
    if index.is_multiple_of(inst.p as u64) {
        return Ok(inst.outcome(Check::CoprimeSingletons, Status::NotApplicable, json!("p divides |G:N|")));
    }
    if theta_extension(inst)?.is_none() {
        return Ok(inst.outcome(Check::CoprimeSingletons, Status::NotApplicable, json!("theta does not extend")));
    }
    let part = inst.report()?.partition();
    let ok = part.iter().all(|b| b.len() == 1);
    Ok(inst.verdict(Check::CoprimeSingletons, ok, json!({ "partition": part })))
}

pub fn check_p_quotient(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    if !t.quotient_is_p_group(inst.p) {
        return Ok(inst.outcome(Check::PQuotient, Status::NotApplicable, json!("G/N is not a p-group")));
    }
    let report = inst.report()?;
    let ok = report.partition() == vec![t.irr_over().to_vec()]
        && report.blocks[0].defect_group.order() == t.group.order();
    Ok(inst.verdict(Check::PQuotient, ok, json!({ "partition": report.partition() })))
}

pub fn check_vanishing(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    let q = &t.quotient;
    let mut tested = 0usize;
    let mut bad = Vec::new();
    for tb in &inst.report()?.blocks {
        for cl in t.table.classes() {
            let x = cl.representative;
            let e = q.p_part_of_coset(x, inst.p as u64);
            if q.group.element_conjugate_into(e, &tb.defect_quotient) {
                continue;
            }
            for &r in &tb.rows {
                tested += 1;
                if !t.table.value_at(r, x).is_zero() {
                    bad.push((r, x));
                }
            }
        }
    }
    let detail = json!({ "values_tested": tested, "violations": bad });
    if tested == 0 {
        return Ok(inst.outcome(Check::Vanishing, Status::Vacuous, detail));
    }
    Ok(inst.verdict(Check::Vanishing, bad.is_empty(), detail))
}

pub fn check_orthogonality(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    if !t.is_central() {
        return Ok(inst.outcome(Check::Orthogonality, Status::NotApplicable, json!("N is not central")));
    }
    let q = &t.quotient;
    let reps: Vec<usize> = t.table.classes().iter().map(|c| c.representative).collect();
    let rows = t.irr_over();
    let mut zero_sums = 0usize;
    let mut norm_sums = 0usize;
    let mut bad = Vec::new();
    for &x in &reps {
        for &y in &reps {
            if q.group.class_of(q.projection[x]) == q.group.class_of(q.projection[y]) {
                continue;
            }
            zero_sums += 1;
            let s: CycNum = rows
                .iter()
                .map(|&r| t.table.value_at(r, x) * &t.table.value_at(r, y).conj())
                .sum();
            if !s.is_zero() {
                bad.push(json!({ "g": x, "h": y }));
            }
        }
        if is_theta_good(t, x)? {
            norm_sums += 1;
            let s: CycNum = rows.iter().map(|&r| t.table.value_at(r, x).norm_sq()).sum();
            let c = q.group.centralizer(q.projection[x]).order() as i64;
            if s != CycNum::from_int(c) {
                bad.push(json!({ "g": x, "centralizer": c }));
            }
        }
    }
    Ok(inst.verdict(
        Check::Orthogonality,
        bad.is_empty(),
        json!({ "zero_sums": zero_sums, "norm_sums": norm_sums, "violations": bad }),
    ))
}

/// `D_{B,θ}` for every block `B` of `G` with `Irr(B|θ)` nonempty:
/// `(block, rows, matrix)`.
pub fn decomposition_submatrices(inst: &Instance) -> Result<Vec<(usize, Vec<usize>, Vec<Vec<i64>>)>> {
    let m = inst.modular()?;
    let over = inst.triple.irr_over();
    let mut out = Vec::new();
    for (bi, b) in m.blocks.blocks.iter().enumerate() {
        let rows: Vec<usize> = b.rows.iter().copied().filter(|r| over.contains(r)).collect();
        if rows.is_empty() {
            continue;
        }
        let sub = submatrix_over(&m.decomposition, bi, &rows)?;
        out.push((bi, rows, sub));
    }
    Ok(out)
}

pub fn check_decomposition_connectivity(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    if !t.is_central() {
        return Ok(inst.outcome(
            Check::DecompositionConnectivity,
            Status::NotApplicable,
            json!("N is not central"),
        ));
    }
    if t.group.order() > DEFAULT_MODULAR_CAP {
        return Ok(inst.outcome(
            Check::DecompositionConnectivity,
            Status::NotApplicable,
            json!("group above the modular cap"),
        ));
    }
    let subs = decomposition_submatrices(inst)?;
    let split: Vec<usize> = subs
        .iter()
        .filter(|(_, _, m)| is_block_diagonal_splittable(m))
        .map(|(b, _, _)| *b)
        .collect();
    let matrices: Vec<Value> = subs
        .iter()
        .map(|(b, rows, m)| json!({ "block": b, "rows": rows, "matrix": m }))
        .collect();
    Ok(inst.verdict(
        Check::DecompositionConnectivity,
        split.is_empty(),
        json!({ "matrices": matrices, "splittable_blocks": split }),
    ))
}

pub fn check_height_abelian(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    let p = inst.p as u64;
    let g_order = t.group.order() as u64;
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for tb in &inst.report()?.blocks {
        if theta_extends_to(t, &tb.defect_group)?.2.is_empty() {
            continue;
        }
        checked += 1;
        let index_p = p_part(g_order / tb.defect_group.order() as u64, p);
        let heights_zero = tb
            .rows
            .iter()
            .all(|&r| p_part(t.table.degree(r) / t.theta_degree(), p) == index_p);
        let abelian = t.quotient.group.is_abelian_subgroup(&tb.defect_quotient);
        if heights_zero != abelian {
            bad.push(json!({ "rows": tb.rows, "heights_zero": heights_zero, "abelian": abelian }));
        }
    }
    let detail = json!({ "blocks_checked": checked, "violations": bad });
    if checked == 0 {
        return Ok(inst.outcome(Check::HeightAbelian, Status::NotApplicable, detail));
    }
    Ok(inst.verdict(Check::HeightAbelian, bad.is_empty(), detail))
}

pub fn check_block_size_bound(inst: &Instance) -> Result<Outcome> {
    let sizes: Vec<(usize, usize)> = inst
        .report()?
        .blocks
        .iter()
        .map(|tb| (tb.rows.len(), tb.defect_quotient.order()))
        .collect();
    let ok = sizes.iter().all(|&(k, d)| k <= d);
    Ok(inst.verdict(Check::BlockSizeBound, ok, json!({ "sizes_and_bounds": sizes })))
}

pub fn check_abelian_sylow(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    let p = inst.p as u64;
    let antecedent = t
        .irr_over()
        .iter()
        .all(|&r| !(t.table.degree(r) / t.theta_degree()).is_multiple_of(p));
    if !antecedent {
        return Ok(inst.outcome(
            Check::AbelianSylow,
            Status::Vacuous,
            json!("some degree ratio is divisible by p"),
        ));
    }
    let qg = &t.quotient.group;
    let abelian = qg.is_abelian_subgroup(&qg.sylow_subgroup(p));
    Ok(inst.verdict(Check::AbelianSylow, abelian, json!({ "sylow_abelian": abelian })))
}

fn witnesses_agree(inst: &Instance, a: &[ThetaBlock], b: &[ThetaBlock]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.rows == y.rows
                && inst
                    .triple
                    .quotient
                    .group
                    .subgroups_conjugate(&x.defect_quotient, &y.defect_quotient)
        })
}

pub fn check_well_definedness(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    let default = build_projective_rep(t, &ProjRepOptions::default())?;
    let twisted = default.twist(&default.random_twist(inst.seed))?;
    let alternate = build_projective_rep(
        t,
        &ProjRepOptions {
            transversal: TransversalChoice::Largest,
            matrices: None,
        },
    )?;
    let mut parts = Vec::new();
    let mut z_orders = Vec::new();
    for proj in [&default, &twisted, &alternate] {
        proj.check_laws(t)?;
        let r = theta_blocks_with(t, proj, inst.p, inst.choice, DEFAULT_REP_GROUP_CAP)?;
        z_orders.push(r.rep.k);
        parts.push(r.blocks);
    }
    let ok = witnesses_agree(inst, &parts[0], &parts[1]) && witnesses_agree(inst, &parts[0], &parts[2]);
    let partitions: Vec<Vec<Vec<usize>>> = parts
        .iter()
        .map(|p| p.iter().map(|b| b.rows.clone()).collect())
        .collect();
    Ok(inst.verdict(
        Check::WellDefinedness,
        ok,
        json!({ "partitions": partitions, "z_orders": z_orders }),
    ))
}

pub fn check_ideal_invariance(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    let p = inst.p;
    let base = inst.blocks()?.row_sets();
    let mut ordinary = 0usize;
    let mut ok = true;
    for c in IdealReduction::all_choices(p, t.table.conductor())? {
        let red = reduction_for(&t.table, p, c)?;
        ordinary += 1;
        if p_blocks(&t.table, p, &red)?.row_sets() != base {
            ok = false;
        }
    }
    let proj = build_projective_rep(t, &ProjRepOptions::default())?;
    let rep = RepGroup::new(t, &proj, DEFAULT_REP_GROUP_CAP)?;
    let bij = standard_bijection(t, &rep)?;
    let (_, reference) = pull_back_blocks(t, &rep, &bij, p, IdealChoice::default())?;
    let mut relative = 0usize;
    for c in IdealReduction::all_choices(p, bij.table.conductor())? {
        relative += 1;
        let (_, blocks) = pull_back_blocks(t, &rep, &bij, p, c)?;
        if !witnesses_agree(inst, &reference, &blocks) {
            ok = false;
        }
    }
    Ok(inst.verdict(
        Check::IdealInvariance,
        ok,
        json!({ "ordinary_choices": ordinary, "theta_choices": relative }),
    ))
}

pub fn check_good_class_count(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    let good = theta_good_class_count(t)?;
    let n = t.irr_over().len();
    Ok(inst.verdict(Check::GoodClassCount, good == n, json!({ "irr_over": n, "good_classes": good })))
}

pub fn check_table_orthogonality(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    let ok = t.table.check_orthogonality().is_ok() && t.n_table.check_orthogonality().is_ok();
    Ok(inst.verdict(
        Check::TableOrthogonality,
        ok,
        json!({ "classes": t.table.num_classes(), "normal_classes": t.n_table.num_classes() }),
    ))
}

pub fn check_modular_consistency(inst: &Instance) -> Result<Outcome> {
    let t = &inst.triple;
    if t.group.order() > DEFAULT_MODULAR_CAP {
        return Ok(inst.outcome(
            Check::ModularConsistency,
            Status::NotApplicable,
            json!("group above the modular cap"),
        ));
    }
    let m = inst.modular()?;
    let dm = &m.decomposition;
    let ibr = m.brauer.ibr();
    let classes = m.brauer.pregular_classes();
    let mut problems = Vec::new();
    for (r, row) in dm.d.iter().enumerate() {
        for (ci, &c) in classes.iter().enumerate() {
            let s: CycNum = row
                .iter()
                .zip(ibr)
                .filter(|(d, _)| **d != 0)
                .map(|(&d, phi)| phi[ci].scale_int(d))
                .sum();
            if &s != t.table.value(r, c) {
                problems.push(format!("decomposition equation fails for row {r} at class {c}"));
            }
        }
    }
    let c = cartan(dm);
    let l = c.len();
    for a in 0..l {
        if c[a][a] <= 0 {
            problems.push(format!("Cartan diagonal {a} is not positive"));
        }
        for b in 0..l {
            if c[a][b] != c[b][a] {
                problems.push("Cartan matrix is not symmetric".into());
            }
        }
    }
    for bi in 0..m.blocks.blocks.len() {
        let cols = brauer_columns(dm, bi);
        let sub: Vec<Vec<i64>> = cols.iter().map(|&a| cols.iter().map(|&b| c[a][b]).collect()).collect();
        if is_block_diagonal_splittable(&sub) {
            problems.push(format!("Cartan matrix of block {bi} splits"));
        }
    }
    Ok(inst.verdict(
        Check::ModularConsistency,
        problems.is_empty(),
        json!({ "brauer_characters": l, "problems": problems }),
    ))
}

/// One corpus entry: a triple, the primes to test and optional golden
/// θ-block partitions keyed by prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub triple: TripleSpec,
    pub primes: Vec<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<String, Vec<Vec<usize>>>,
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::MalformedInput(format!("corpus: {e}")))
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Restrict to these checks; all when `None`.
    pub checks: Option<Vec<Check>>,
    pub seed: u64,
    pub choice: IdealChoice,
    pub cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            checks: None,
            seed: DEFAULT_SEED,
            choice: IdealChoice::default(),
            cap: crate::groups::DEFAULT_ORDER_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn count(&self, s: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == s).count()
    }

    pub fn failures(&self) -> Vec<&Outcome> {
        self.outcomes.iter().filter(|o| o.status == Status::Fail).collect()
    }

    pub fn ok(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "vacuous": self.count(Status::Vacuous),
                "not_applicable": self.count(Status::NotApplicable),
            },
            "outcomes": self.outcomes,
        })
    }

    pub fn to_text(&self) -> String {
        let w_inst = self.outcomes.iter().map(|o| o.instance.len()).max().unwrap_or(8).max(8);
        let w_check = self.outcomes.iter().map(|o| o.check.id().len()).max().unwrap_or(5).max(5);
        let mut s = format!("{:<w_inst$}  {:>2}  {:<w_check$}  status\n", "instance", "p", "check");
        for o in &self.outcomes {
            let p = o.p.map_or("-".to_string(), |p| p.to_string());
            s.push_str(&format!("{:<w_inst$}  {:>2}  {:<w_check$}  {}\n", o.instance, p, o.check.id(), o.status));
        }
        s.push_str(&format!(
            "\n{} pass, {} fail, {} vacuous, {} not applicable\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Vacuous),
            self.count(Status::NotApplicable)
        ));
        s
    }
}

fn canonical(mut part: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in part.iter_mut() {
        b.sort_unstable();
    }
    part.sort();
    part
}

fn golden(inst: &Instance, expected: &[Vec<usize>]) -> Outcome {
    match inst.report() {
        Ok(r) => {
            let got = canonical(r.partition());
            let want = canonical(expected.to_vec());
            inst.verdict(Check::Golden, got == want, json!({ "partition": got, "expected": want }))
        }
        Err(e) => inst.outcome(Check::Golden, Status::Fail, json!({ "error": e.to_string() })),
    }
}

/// Runs the selected checks over every entry and prime. Building a triple
/// that fails validation is an input error.
pub fn run_corpus(entries: &[CorpusEntry], opts: &RunOptions) -> Result<Report> {
    let checks: Vec<Check> = opts.checks.clone().unwrap_or_else(|| Check::ALL.to_vec());
    let triples: Vec<CharacterTriple> = entries
        .par_iter()
        .map(|e| {
            e.triple
                .build(opts.cap)
                .map_err(|err| Error::MalformedInput(format!("corpus entry {}: {err}", e.name)))
        })
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, u32, bool)> = entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| {
            let first = e.primes.first().copied().unwrap_or(2);
            std::iter::once((i, first, true)).chain(e.primes.iter().map(move |&p| (i, p, false)))
        })
        .collect();
    let mut outcomes: Vec<Outcome> = jobs
        .par_iter()
        .flat_map_iter(|&(i, p, independent)| {
            let e = &entries[i];
            let inst = Instance::with_spec(&e.name, triples[i].clone(), e.triple.clone(), p, opts.choice, opts.seed);
            let mut out: Vec<Outcome> = checks
                .iter()
                .filter(|c| c.prime_independent() == independent && **c != Check::Golden)
                .map(|&c| inst.run(c))
                .collect();
            if !independent && checks.contains(&Check::Golden) {
                if let Some(exp) = e.expected.get(&p.to_string()) {
                    out.push(golden(&inst, exp));
                }
            }
            out
        })
        .collect();
    outcomes.sort_by_key(Outcome::key);
    Ok(Report { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin_group;

    fn central_faithful(name: &str) -> CharacterTriple {
        let g = Arc::new(builtin_group(name).unwrap());
        let z = g.center();
        let probe = CharacterTriple::new(g.clone(), z.clone(), 0).unwrap();
        let nt = &probe.n_table;
        let row = (0..nt.num_classes())
            .find(|&r| (1..nt.group().order()).all(|x| !nt.value_at(r, x).is_one()))
            .unwrap();
        CharacterTriple::new(g, z, row).unwrap()
    }

    #[test]
    fn check_ids_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.id().parse::<Check>().unwrap(), c);
        }
        assert!("nonsense".parse::<Check>().is_err());
    }

    #[test]
    fn q8_central_faithful_passes_everything_applicable() {
        let inst = Instance::new("Q8/Z", central_faithful("Q8"), 2);
        for c in Check::ALL {
            let o = inst.run(c);
            assert_ne!(o.status, Status::Fail, "{c}: {}", o.detail);
        }
        let m = decomposition_submatrices(&inst).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].2, vec![vec![2]]);
    }

    #[test]
    fn vacuity_is_reported_separately() {
        let g = Arc::new(builtin_group("S4").unwrap());
        let a4 = g.derived_subgroup();
        let probe = CharacterTriple::new(g.clone(), a4.clone(), 0).unwrap();
        let row = (0..probe.n_table.num_classes()).find(|&r| probe.n_table.degree(r) == 3).unwrap();
        let t = CharacterTriple::new(g, a4, row).unwrap();
        let inst = Instance::new("S4/A4", t, 3);
        assert_eq!(inst.run(Check::Vanishing).status, Status::Vacuous);
        let s4 = Arc::new(builtin_group("S4").unwrap());
        let trivial = CharacterTriple::new(s4, Subgroup::trivial(), 0).unwrap();
        let inst = Instance::new("S4/1", trivial, 2);
        assert_eq!(inst.run(Check::AbelianSylow).status, Status::Vacuous);
    }

    #[test]
    fn failures_carry_a_repro_payload() {
        let inst = Instance::new("A4", CharacterTriple::new(Arc::new(builtin_group("A4").unwrap()), Subgroup::trivial(), 0).unwrap(), 2);
        let o = inst.verdict(Check::Vanishing, false, json!(null));
        let r = o.repro.unwrap();
        let spec: TripleSpec = serde_json::from_value(r["triple"].clone()).unwrap();
        let rebuilt = spec.build(100).unwrap();
        assert_eq!(rebuilt.group.order(), 12);
    }
}
