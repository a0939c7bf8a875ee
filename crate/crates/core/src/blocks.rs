//! Brauer p-blocks from central-character congruences, with defects,
//! defect classes and defect groups.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use crate::chartab::CharacterTable;
use crate::cyclo::{CycNum, IdealChoice, IdealReduction};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::groups::{FiniteGroup, Subgroup};
use crate::util::{is_prime, p_part, p_valuation};

#[derive(Debug, Clone)]
pub struct Block {
    pub rows: Vec<usize>,
    pub p: u32,
    pub defect: u32,
    pub defect_class: usize,
    pub defect_group: Subgroup,
    /// `λ_B(K̂)` for every class `K`.
    pub lambda: Vec<Fq>,
}

#[derive(Debug, Clone)]
pub struct BlockPartition {
    pub p: u32,
    pub blocks: Vec<Block>,
    /// Index of the block containing the trivial character.
    pub principal: usize,
    block_of: Vec<usize>,
    reduction: IdealReduction,
}

impl BlockPartition {
    /// Block index of a row.
    pub fn block_of(&self, row: usize) -> usize {
        self.block_of[row]
    }

    pub fn reduction(&self) -> &IdealReduction {
        &self.reduction
    }

    /// The partition as sorted row sets, for comparisons.
    pub fn row_sets(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.rows.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                serde_json::json!({
                    "rows": b.rows,
                    "defect": b.defect,
                    "defect_class": b.defect_class,
                    "defect_group": b.defect_group.members(),
                })
            })
            .collect();
        serde_json::json!({
            "p": self.p,
            "principal": self.principal,
            "reduction": self.reduction.describe(),
            "blocks": blocks,
        })
    }
}

/// The reduction used for a table: conductor equal to the table's.
pub fn reduction_for(t: &CharacterTable, p: u32, choice: IdealChoice) -> Result<IdealReduction> {
    IdealReduction::new(p, t.conductor(), choice)
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::MalformedInput(format!("{p} is not prime")))
    }
}

/// Coefficient of `K̂` in the block idempotent,
/// `(1/|G|) Σ_{χ ∈ B} χ(1) χ(x_K^{-1})`, reduced; zero if it is not
/// p-integral.
fn idempotent_coefficient(
    t: &CharacterTable,
    rows: &[usize],
    class: usize,
    red: &IdealReduction,
) -> Result<Fq> {
    let inv_class = t.group().inverse_class(class);
    let sum: CycNum = rows
        .iter()
        .map(|&r| t.value(r, inv_class).scale_int(t.degree(r) as i64))
        .sum();
    let n = BigRational::from_integer(BigInt::from(t.group().order()));
    match red.reduce_local(&sum.scale(&n.recip())) {
        Ok(v) => Ok(v),
        Err(Error::NotAlgebraicInteger) => Ok(0),
        Err(e) => Err(e),
    }
}

/// The p-blocks of `G`. `red` must be a reduction at `p` whose conductor
/// is a multiple of the table's.
pub fn p_blocks(t: &CharacterTable, p: u32, red: &IdealReduction) -> Result<BlockPartition> {
    check_prime(p)?;
    if red.p() != p {
        return Err(Error::MalformedInput(format!(
            "reduction is at {} but blocks were requested at {p}",
            red.p()
        )));
    }
    if !red.conductor().is_multiple_of(t.conductor()) {
        return Err(Error::ConductorMismatch {
            value: t.conductor(),
            reduction: red.conductor(),
        });
    }
    let r = t.num_classes();
    let mut lambdas: Vec<Vec<Fq>> = Vec::with_capacity(r);
    for row in 0..r {
        let om = t.central_character(row);
        lambdas.push(om.iter().map(|v| red.reduce(v)).collect::<Result<_>>()?);
    }
    let mut groups: Vec<(Vec<Fq>, Vec<usize>)> = Vec::new();
    for (row, lam) in lambdas.into_iter().enumerate() {
        match groups.iter_mut().find(|(l, _)| *l == lam) {
            Some((_, rows)) => rows.push(row),
            None => groups.push((lam, vec![row])),
        }
    }
    let g = t.group();
    let order = g.order() as u64;
    let mut blocks = Vec::with_capacity(groups.len());
    let mut block_of = vec![0; r];
    for (bi, (lambda, rows)) in groups.into_iter().enumerate() {
        for &row in &rows {
            block_of[row] = bi;
        }
        let defect = rows
            .iter()
            .map(|&row| p_valuation(order / t.degree(row), p as u64))
            .max()
            .unwrap();
        let mut found = None;
        for k in 0..r {
            if lambda[k] != 0 && idempotent_coefficient(t, &rows, k, red)? != 0 {
                found = Some(k);
                break;
            }
        }
        let defect_class = found.ok_or(Error::NoDefectClass)?;
        let rep = t.classes()[defect_class].representative;
        let defect_group = g.sylow_within(&g.centralizer(rep), p as u64);
        let expected = (p as usize).pow(defect);
        if defect_group.order() != expected {
            return Err(Error::DefectMismatch {
                expected,
                found: defect_group.order(),
            });
        }
        blocks.push(Block {
            rows,
            p,
            defect,
            defect_class,
            defect_group,
            lambda,
        });
    }
    Ok(BlockPartition {
        p,
        principal: block_of[0],
        blocks,
        block_of,
        reduction: red.clone(),
    })
}

/// Blocks with the default (smallest) maximal-ideal choice.
pub fn p_blocks_default(t: &CharacterTable, p: u32) -> Result<BlockPartition> {
    let red = reduction_for(t, p, IdealChoice::default())?;
    p_blocks(t, p, &red)
}

/// The defect group recorded for a block.
pub fn defect_group(b: &Block) -> &Subgroup {
    &b.defect_group
}

/// The block `μB = {μχ : χ ∈ B}` for a linear character `μ`, returned as
/// an index into the partition. Checks that it is a whole block with a
/// defect group conjugate to that of `B`.
pub fn mu_twist_block(
    t: &CharacterTable,
    part: &BlockPartition,
    block: usize,
    mu_row: usize,
) -> Result<usize> {
    if t.degree(mu_row) != 1 {
        return Err(Error::NotLinear);
    }
    let mu = t.row(mu_row);
    let mut image = Vec::new();
    for &row in &part.blocks[block].rows {
        let prod = CharacterTable::product(mu, t.row(row));
        let found = t
            .find_row(&prod)
            .ok_or_else(|| Error::Internal("product with a linear character is not irreducible".into()))?;
        image.push(found);
    }
    image.sort_unstable();
    let target = part.block_of(image[0]);
    if part.blocks[target].rows != image {
        return Err(Error::Internal(format!(
            "twist of block {block} is not a block"
        )));
    }
    let g = t.group();
    if !g.subgroups_conjugate(
        &part.blocks[block].defect_group,
        &part.blocks[target].defect_group,
    ) {
        return Err(Error::Internal(format!(
            "twist of block {block} changed the defect group"
        )));
    }
    Ok(target)
}

/// Comparison between the blocks of `G` and of `G/Z` on characters with
/// `Z` in their kernel.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DominationRecord {
    pub z_order: usize,
    pub z_p_order: usize,
    pub k_order: usize,
    pub pairs_checked: usize,
    /// `bl(α) = bl(β)` iff `bl(ᾱ) = bl(β̄)` on every pair.
    pub partitions_agree: bool,
    /// Every defect group of `bl(ᾱ)` is conjugate to `PZ/Z` for a defect
    /// group `P` of `bl(α)`.
    pub defect_groups_agree: bool,
}

/// Checks `Z = Z_p × K` with `Z_p` a central p-subgroup and `K` a normal
/// p'-subgroup, returning `(Z_p, K)`.
fn split_shape(g: &FiniteGroup, z: &Subgroup, p: u64) -> Result<(Subgroup, Subgroup)> {
    if !g.is_normal(z) {
        return Err(Error::ShapeViolation("Z is not normal".into()));
    }
    let zp = g.sylow_within(z, p);
    let center = g.center();
    if !zp.is_subset_of(&center) {
        return Err(Error::ShapeViolation("Sylow p-subgroup of Z is not central".into()));
    }
    let kmem: Vec<usize> = z
        .members()
        .iter()
        .copied()
        .filter(|&x| !(g.element_order(x) as u64).is_multiple_of(p))
        .collect();
    let k = Subgroup::from_members(g, &kmem)
        .map_err(|_| Error::ShapeViolation("p'-elements of Z do not form a subgroup".into()))?;
    if !g.is_normal(&k) || zp.order() * k.order() != z.order() {
        return Err(Error::ShapeViolation("Z is not Z_p × K".into()));
    }
    Ok((zp, k))
}

/// Instance check relating blocks of `G` containing `Z` in their kernel
/// to blocks of `G/Z`.
pub fn dominated_block_data(
    t: &CharacterTable,
    z: &Subgroup,
    p: u32,
) -> Result<DominationRecord> {
    check_prime(p)?;
    let g = t.group();
    let (zp, k) = split_shape(g, z, p as u64)?;
    let q = g.quotient(z)?;
    let qt = CharacterTable::compute(std::sync::Arc::new(q.group.clone()))?;
    let lift = t.inflation(&q, &qt)?;
    let bg = p_blocks_default(t, p)?;
    let bq = p_blocks_default(&qt, p)?;
    let mut pairs = 0;
    let mut agree = true;
    for a in 0..lift.len() {
        for b in a + 1..lift.len() {
            pairs += 1;
            let same_q = bq.block_of(a) == bq.block_of(b);
            let same_g = bg.block_of(lift[a]) == bg.block_of(lift[b]);
            agree &= same_q == same_g;
        }
    }
    let mut defects_agree = true;
    for (bi, blk) in bq.blocks.iter().enumerate() {
        let row = blk.rows[0];
        debug_assert_eq!(bq.block_of(row), bi);
        let pg = &bg.blocks[bg.block_of(lift[row])].defect_group;
        let image = q.image(pg);
        defects_agree &= q.group.subgroups_conjugate(&image, &blk.defect_group);
    }
    Ok(DominationRecord {
        z_order: z.order(),
        z_p_order: zp.order(),
        k_order: k.order(),
        pairs_checked: pairs,
        partitions_agree: agree,
        defect_groups_agree: defects_agree,
    })
}

/// Height of `χ` in `B`: `χ(1)_p = p^h |G|_p / p^{d(B)}`.
pub fn height(t: &CharacterTable, b: &Block, row: usize) -> u32 {
    let g = t.group().order() as u64;
    let full = p_valuation(g, b.p as u64);
    p_valuation(t.degree(row), b.p as u64) + b.defect - full
}

/// `|G|_p`.
pub fn sylow_order(g: &FiniteGroup, p: u32) -> u64 {
    p_part(g.order() as u64, p as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin_group;
    use std::sync::Arc;

    fn table(name: &str) -> CharacterTable {
        CharacterTable::compute(Arc::new(builtin_group(name).unwrap())).unwrap()
    }

    #[test]
    fn coprime_prime_gives_defect_zero_singletons() {
        let t = table("A4");
        let b = p_blocks_default(&t, 5).unwrap();
        assert_eq!(b.blocks.len(), 4);
        assert!(b.blocks.iter().all(|x| x.defect == 0 && x.defect_group.order() == 1));
    }

    #[test]
    fn a4_blocks() {
        let t = table("A4");
        let b2 = p_blocks_default(&t, 2).unwrap();
        assert_eq!(b2.blocks.len(), 1);
        assert_eq!(b2.blocks[0].defect, 2);
        let v4 = t.group().derived_subgroup();
        assert_eq!(b2.blocks[0].defect_group, v4);

        let b3 = p_blocks_default(&t, 3).unwrap();
        assert_eq!(b3.row_sets(), vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(b3.blocks[0].defect, 1);
        assert_eq!(b3.blocks[1].defect, 0);
        assert_eq!(b3.principal, 0);
    }

    #[test]
    fn principal_block_has_full_defect() {
        for name in ["S3", "D8", "Q8", "A4", "S4", "SL23", "D10"] {
            let t = table(name);
            for p in t.group().prime_divisors() {
                let b = p_blocks_default(&t, p as u32).unwrap();
                let pb = &b.blocks[b.principal];
                assert_eq!(pb.defect_group.order() as u64, sylow_order(t.group(), p as u32));
            }
        }
    }

    #[test]
    fn twisting_by_linear_characters() {
        let t = table("A4");
        let b3 = p_blocks_default(&t, 3).unwrap();
        assert_eq!(mu_twist_block(&t, &b3, 0, 0).unwrap(), 0);
        assert_eq!(mu_twist_block(&t, &b3, 0, 1).unwrap(), 0);
        assert_eq!(mu_twist_block(&t, &b3, 0, 3).unwrap_err(), Error::NotLinear);

        let t = table("SL23");
        let b = p_blocks_default(&t, 3).unwrap();
        for (bi, blk) in b.blocks.iter().enumerate() {
            if blk.defect != 0 {
                continue;
            }
            for mu in (0..t.num_classes()).filter(|&r| t.degree(r) == 1) {
                let img = mu_twist_block(&t, &b, bi, mu).unwrap();
                assert_eq!(b.blocks[img].defect, 0);
            }
        }
    }

    #[test]
    fn domination_for_central_subgroups() {
        for name in ["Q8", "SL23"] {
            let t = table(name);
            let z = t.group().center();
            let rec = dominated_block_data(&t, &z, 2).unwrap();
            assert!(rec.partitions_agree && rec.defect_groups_agree, "{name}");
        }
        let t = table("A4");
        let rec = dominated_block_data(&t, &Subgroup::trivial(), 2).unwrap();
        assert!(rec.partitions_agree && rec.defect_groups_agree);
        // V4 in A4 is a normal 2-group but not central
        let v4 = t.group().derived_subgroup();
        assert!(matches!(
            dominated_block_data(&t, &v4, 2),
            Err(Error::ShapeViolation(_))
        ));
    }
}
