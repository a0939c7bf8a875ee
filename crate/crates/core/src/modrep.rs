//! Irreducible modular representations by chopping the regular module,
//! Brauer characters, and decomposition and Cartan matrices.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::blocks::BlockPartition;
use crate::chartab::CharacterTable;
use crate::cyclo::matrix::{self, CycMatrix};
use crate::cyclo::{CycNum, IdealReduction};
use crate::error::{Error, Result};
use crate::field::{Fq, GaloisField};
use crate::groups::{Elem, FiniteGroup};
use crate::linalg::{spin, Echelon, Mat};
use crate::util::{multiplicative_order, p_part};

pub const DEFAULT_MODULAR_CAP: usize = 300;
pub const DEFAULT_SEED: u64 = 0x5eed;
const MAX_ATTEMPTS: usize = 300;

/// A module given by the matrices of the group generators.
#[derive(Debug, Clone)]
pub struct ModularModule {
    pub dim: usize,
    pub gens: Vec<Mat>,
}

/// A complete set of irreducible modules over `F_{p^f}`.
#[derive(Debug, Clone)]
pub struct ModularIrreducibles {
    group: Arc<FiniteGroup>,
    p: u32,
    field: Arc<GaloisField>,
    generators: Vec<Elem>,
    pregular_classes: Vec<usize>,
    modules: Vec<ModularModule>,
    /// Eigenvalues (sorted, with multiplicity) of each module on each
    /// p-regular class.
    eigenvalues: Vec<Vec<Vec<Fq>>>,
    /// Breadth-first words: `(parent, generator index)` per element.
    tree: Vec<Option<(Elem, usize)>>,
}

fn word_tree(g: &FiniteGroup, gens: &[Elem]) -> Vec<Option<(Elem, usize)>> {
    let mut tree = vec![None; g.order()];
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (i, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                tree[y] = Some((x, i));
                queue.push_back(y);
            }
        }
    }
    tree
}

fn element_matrix(
    m: &ModularModule,
    tree: &[Option<(Elem, usize)>],
    x: Elem,
    k: &GaloisField,
) -> Mat {
    let mut word = Vec::new();
    let mut cur = x;
    while let Some((parent, s)) = tree[cur] {
        word.push(s);
        cur = parent;
    }
    word.reverse();
    let mut acc = Mat::identity(m.dim);
    for s in word {
        acc = acc.mul(&m.gens[s], k);
    }
    acc
}

fn eigenvalue_signature(
    m: &ModularModule,
    reps: &[Elem],
    tree: &[Option<(Elem, usize)>],
    k: &GaloisField,
) -> Result<Vec<Vec<Fq>>> {
    reps.iter()
        .map(|&x| {
            let a = element_matrix(m, tree, x, k);
            let mut roots = k.roots(&a.charpoly(k));
            if roots.len() != m.dim {
                return Err(Error::EigenvalueOutsideField);
            }
            roots.sort_unstable();
            Ok(roots)
        })
        .collect()
}

/// Actions on a submodule (echelon basis) and on the quotient by it.
fn split_module(m: &ModularModule, s: &Echelon, k: &GaloisField) -> (ModularModule, ModularModule) {
    let pivots = s.pivots();
    let mut is_pivot = vec![false; m.dim];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..m.dim).filter(|&c| !is_pivot[c]).collect();
    let mut sub_gens = Vec::new();
    let mut quo_gens = Vec::new();
    for g in &m.gens {
        let rows: Vec<Vec<Fq>> = s
            .basis()
            .iter()
            .map(|b| s.coords(&g.vec_mul(b, k)))
            .collect();
        sub_gens.push(Mat::from_rows(&rows, s.len()));
        let rows: Vec<Vec<Fq>> = free
            .iter()
            .map(|&j| {
                let mut w = g.row(j).to_vec();
                s.reduce(&mut w, k);
                free.iter().map(|&c| w[c]).collect()
            })
            .collect();
        quo_gens.push(Mat::from_rows(&rows, free.len()));
    }
    (
        ModularModule {
            dim: s.len(),
            gens: sub_gens,
        },
        ModularModule {
            dim: free.len(),
            gens: quo_gens,
        },
    )
}

enum Step {
    Split(Echelon),
    Irreducible,
}

/// One MeatAxe decision: find a proper submodule, or prove
/// irreducibility with the Holt–Rees criterion (a linear factor of the
/// characteristic polynomial whose eigenspace is one-dimensional).
fn meataxe_step(m: &ModularModule, k: &GaloisField, rng: &mut ChaCha8Rng) -> Result<Step> {
    let d = m.dim;
    let transposed: Vec<Mat> = m.gens.iter().map(|g| g.transpose()).collect();
    let mut pool: Vec<Mat> = m.gens.clone();
    let q = k.size();
    for _ in 0..MAX_ATTEMPTS {
        if pool.len() < 16 {
            let a = rng.gen_range(0..pool.len());
            let b = rng.gen_range(0..pool.len());
            let prod = pool[a].mul(&pool[b], k);
            pool.push(prod);
        }
        let mut elt = Mat::zeros(d, d);
        let terms = rng.gen_range(2..=4usize);
        for _ in 0..terms {
            let i = rng.gen_range(0..pool.len());
            let c = rng.gen_range(1..q);
            elt = elt.add(&pool[i].scale(c, k), k);
        }
        let mut roots = k.roots(&elt.charpoly(k));
        roots.dedup();
        for lambda in roots {
            let mut shifted = elt.clone();
            for i in 0..d {
                let v = shifted.get(i, i);
                shifted.set(i, i, k.sub(v, lambda));
            }
            let kernel = shifted.left_nullspace(k);
            let sub = spin(&kernel[..1], &m.gens, k);
            if sub.len() < d {
                return Ok(Step::Split(sub));
            }
            let dual_kernel = shifted.right_nullspace(k);
            let dual = spin(&dual_kernel[..1], &transposed, k);
            if dual.len() < d {
                let umat = Mat::from_rows(dual.basis(), d);
                let mut ann = Echelon::new(d);
                for v in umat.right_nullspace(k) {
                    ann.insert(v, k);
                }
                return Ok(Step::Split(ann));
            }
            if kernel.len() == 1 {
                return Ok(Step::Irreducible);
            }
        }
    }
    Err(Error::SplitFailure {
        attempts: MAX_ATTEMPTS,
    })
}

/// `f` with `F_{p^f}` containing the `e_{p'}`-th roots of unity.
fn splitting_degree(g: &FiniteGroup, p: u32) -> u32 {
    let e = g.exponent() as u64;
    let m = e / p_part(e, p as u64);
    multiplicative_order(p as u64 % m.max(1), m) as u32
}

/// The p-regular classes of a group, by index.
pub fn pregular_classes(g: &FiniteGroup, p: u32) -> Vec<usize> {
    g.conjugacy_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| !(g.element_order(c.representative) as u64).is_multiple_of(p as u64))
        .map(|(i, _)| i)
        .collect()
}

/// Irreducible `F_{p^f} G`-modules, obtained by chopping the regular
/// module until as many non-isomorphic composition factors as p-regular
/// classes have been found. Modules are distinguished by their
/// eigenvalues on p-regular classes, which is equality of Brauer
/// characters.
pub fn modular_irreducibles(
    group: &Arc<FiniteGroup>,
    p: u32,
    seed: u64,
    cap: usize,
) -> Result<ModularIrreducibles> {
    let n = group.order();
    if n > cap {
        return Err(Error::OrderCapExceeded { cap });
    }
    if !crate::util::is_prime(p as u64) {
        return Err(Error::MalformedInput(format!("{p} is not prime")));
    }
    let field = GaloisField::get(p, splitting_degree(group, p));
    let k = field.as_ref();
    let generators = group.generators();
    let tree = word_tree(group, &generators);
    let classes = pregular_classes(group, p);
    let reps: Vec<Elem> = classes
        .iter()
        .map(|&c| group.conjugacy_classes()[c].representative)
        .collect();
    let target = classes.len();

    let regular = ModularModule {
        dim: n,
        gens: generators
            .iter()
            .map(|&s| {
                let mut m = Mat::zeros(n, n);
                for h in 0..n {
                    m.set(h, group.mul(h, s), 1);
                }
                m
            })
            .collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<(ModularModule, Vec<Vec<Fq>>)> = Vec::new();
    let mut queue = vec![regular];
    let max_found_dim = |found: &Vec<(ModularModule, Vec<Vec<Fq>>)>| {
        found.iter().map(|(m, _)| m.dim).max().unwrap_or(0)
    };
    while found.len() < target {
        // smallest module first
        queue.sort_by(|a, b| b.dim.cmp(&a.dim));
        let Some(m) = queue.pop() else {
            return Err(Error::Internal(format!(
                "found {} irreducible modules, expected {target}",
                found.len()
            )));
        };
        if m.dim <= max_found_dim(&found) {
            let sig = eigenvalue_signature(&m, &reps, &tree, k)?;
            if found.iter().any(|(_, s)| *s == sig) {
                continue;
            }
        }
        let step = if m.dim == 1 {
            Step::Irreducible
        } else {
            meataxe_step(&m, k, &mut rng)?
        };
        match step {
            Step::Split(sub) => {
                let (a, b) = split_module(&m, &sub, k);
                queue.push(a);
                queue.push(b);
            }
            Step::Irreducible => {
                let sig = eigenvalue_signature(&m, &reps, &tree, k)?;
                if !found.iter().any(|(_, s)| *s == sig) {
                    found.push((m, sig));
                }
            }
        }
    }
    // canonical order: dimension, then eigenvalues with the trivial module
    // first
    found.sort_by(|(ma, sa), (mb, sb)| {
        let key = |s: &Vec<Vec<Fq>>| -> Vec<(bool, Vec<Fq>)> {
            s.iter().map(|e| (e.iter().any(|&x| x != 1), e.clone())).collect()
        };
        ma.dim.cmp(&mb.dim).then_with(|| key(sa).cmp(&key(sb)))
    });
    let (modules, eigenvalues) = found.into_iter().unzip();
    Ok(ModularIrreducibles {
        group: group.clone(),
        p,
        field,
        generators,
        pregular_classes: classes,
        modules,
        eigenvalues,
        tree,
    })
}

impl ModularIrreducibles {
    pub fn modules(&self) -> &[ModularModule] {
        &self.modules
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn pregular_classes(&self) -> &[usize] {
        &self.pregular_classes
    }

    /// Matrix of an arbitrary group element on module `i`.
    pub fn matrix_of(&self, i: usize, x: Elem) -> Mat {
        element_matrix(&self.modules[i], &self.tree, x, &self.field)
    }

    /// Checks that every module is a homomorphism on all pairs of
    /// elements; used by tests.
    pub fn check_homomorphism(&self, i: usize) -> bool {
        let g = &self.group;
        let k = self.field.as_ref();
        let mats: Vec<Mat> = (0..g.order()).map(|x| self.matrix_of(i, x)).collect();
        (0..g.order()).all(|x| {
            (0..g.order()).all(|y| mats[x].mul(&mats[y], k) == mats[g.mul(x, y)])
        })
    }
}

#[derive(Debug, Clone)]
pub struct BrauerTable {
    group: Arc<FiniteGroup>,
    p: u32,
    pregular_classes: Vec<usize>,
    ibr: Vec<Vec<CycNum>>,
}

/// Brauer characters: eigenvalues `root^k` lift to `ζ_m^k`, the inverse
/// of `red` on m-th roots of unity.
pub fn brauer_characters(mods: &ModularIrreducibles, red: &IdealReduction) -> Result<BrauerTable> {
    if red.p() != mods.p || red.field().size() != mods.field.size() {
        return Err(Error::MalformedInput(
            "reduction does not match the modular field".into(),
        ));
    }
    let ibr = mods
        .eigenvalues
        .iter()
        .map(|per_class| {
            per_class
                .iter()
                .map(|eig| {
                    let mut acc = CycNum::zero();
                    for &x in eig {
                        let k = red.root_exponent(x).ok_or(Error::EigenvalueOutsideField)?;
                        acc = acc + red.lift_root_power(k as i64);
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BrauerTable {
        group: mods.group.clone(),
        p: mods.p,
        pregular_classes: mods.pregular_classes.clone(),
        ibr,
    })
}

impl BrauerTable {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn pregular_classes(&self) -> &[usize] {
        &self.pregular_classes
    }

    pub fn ibr(&self) -> &[Vec<CycNum>] {
        &self.ibr
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.ibr[i][0].as_i64().expect("integer degree") as u64
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .pregular_classes
            .iter()
            .map(|&c| {
                let cl = &self.group.conjugacy_classes()[c];
                serde_json::json!({"class": c, "rep": cl.representative, "size": cl.size})
            })
            .collect();
        serde_json::json!({
            "group": self.group.name(),
            "p": self.p,
            "classes": classes,
            "ibr": self.ibr.iter().map(|r| r.iter().map(|v| v.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionMatrix {
    /// `d[χ][φ]`.
    pub d: Vec<Vec<i64>>,
    /// Block index of each ordinary row.
    pub block_labels: Vec<usize>,
    /// Block index of each Brauer character.
    pub brauer_blocks: Vec<usize>,
}

/// Solves `χ^{p'} = Σ_φ d_{χφ} φ` for every ordinary character.
pub fn decomposition_matrix(
    t: &CharacterTable,
    bt: &BrauerTable,
    blocks: &BlockPartition,
) -> Result<DecompositionMatrix> {
    if blocks.p != bt.p {
        return Err(Error::MalformedInput("blocks and Brauer table at different primes".into()));
    }
    let phi: CycMatrix = bt.ibr.clone();
    let inv = matrix::inverse(&phi)
        .ok_or_else(|| Error::Internal("Brauer table is singular".into()))?;
    let restricted: CycMatrix = (0..t.num_classes())
        .map(|r| {
            bt.pregular_classes
                .iter()
                .map(|&c| t.value(r, c).clone())
                .collect()
        })
        .collect();
    let sol = matrix::mul(&restricted, &inv);
    let mut d = Vec::with_capacity(sol.len());
    for row in &sol {
        let mut out = Vec::with_capacity(row.len());
        for v in row {
            match v.as_i64() {
                Some(x) if x >= 0 => out.push(x),
                _ => return Err(Error::NonIntegralSolution),
            }
        }
        d.push(out);
    }
    let l = bt.ibr.len();
    let block_labels: Vec<usize> = (0..t.num_classes()).map(|r| blocks.block_of(r)).collect();
    let mut brauer_blocks = vec![usize::MAX; l];
    for (r, row) in d.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if brauer_blocks[j] == usize::MAX {
                brauer_blocks[j] = block_labels[r];
            } else if brauer_blocks[j] != block_labels[r] {
                return Err(Error::Internal(format!(
                    "Brauer character {j} meets two blocks"
                )));
            }
        }
    }
    if brauer_blocks.contains(&usize::MAX) {
        return Err(Error::Internal("Brauer character with zero column".into()));
    }
    Ok(DecompositionMatrix {
        d,
        block_labels,
        brauer_blocks,
    })
}

/// `C = Dᵗ D`.
pub fn cartan(dm: &DecompositionMatrix) -> Vec<Vec<i64>> {
    let l = dm.d.first().map_or(0, |r| r.len());
    (0..l)
        .map(|a| {
            (0..l)
                .map(|b| dm.d.iter().map(|row| row[a] * row[b]).sum())
                .collect()
        })
        .collect()
}

/// Rows of `D` restricted to `rows_filter` and columns to the Brauer
/// characters of `block`.
pub fn submatrix_over(
    dm: &DecompositionMatrix,
    block: usize,
    rows_filter: &[usize],
) -> Result<Vec<Vec<i64>>> {
    if let Some(&bad) = rows_filter.iter().find(|&&r| dm.block_labels[r] != block) {
        return Err(Error::RowOutsideBlock(bad));
    }
    let cols: Vec<usize> = (0..dm.brauer_blocks.len())
        .filter(|&j| dm.brauer_blocks[j] == block)
        .collect();
    Ok(rows_filter
        .iter()
        .map(|&r| cols.iter().map(|&j| dm.d[r][j]).collect())
        .collect())
}

/// Columns of `D` lying in `block`.
pub fn brauer_columns(dm: &DecompositionMatrix, block: usize) -> Vec<usize> {
    (0..dm.brauer_blocks.len())
        .filter(|&j| dm.brauer_blocks[j] == block)
        .collect()
}

/// Whether rows and columns can be permuted into at least two nonempty
/// diagonal blocks: connectivity of the bipartite graph of nonzero
/// entries after dropping zero rows and columns.
pub fn is_block_diagonal_splittable(m: &[Vec<i64>]) -> bool {
    let rows: Vec<usize> = (0..m.len()).filter(|&i| m[i].iter().any(|&x| x != 0)).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let cols: Vec<usize> = (0..ncols).filter(|&j| m.iter().any(|r| r[j] != 0)).collect();
    if rows.is_empty() {
        return false;
    }
    // union-find over rows then columns
    let mut parent: Vec<usize> = (0..rows.len() + cols.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (ri, &r) in rows.iter().enumerate() {
        for (ci, &c) in cols.iter().enumerate() {
            if m[r][c] != 0 {
                let a = find(&mut parent, ri);
                let b = find(&mut parent, rows.len() + ci);
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = (0..parent.len()).map(|x| find(&mut parent, x)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() >= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{p_blocks, reduction_for};
    use crate::cyclo::IdealChoice;
    use crate::groups::builtin_group;

    struct Data {
        t: CharacterTable,
        bt: BrauerTable,
        blocks: BlockPartition,
        dm: DecompositionMatrix,
        mods: ModularIrreducibles,
    }

    fn compute(name: &str, p: u32) -> Data {
        let g = Arc::new(builtin_group(name).unwrap());
        let t = CharacterTable::compute(g.clone()).unwrap();
        let red = reduction_for(&t, p, IdealChoice::default()).unwrap();
        let blocks = p_blocks(&t, p, &red).unwrap();
        let mods = modular_irreducibles(&g, p, DEFAULT_SEED, DEFAULT_MODULAR_CAP).unwrap();
        let bt = brauer_characters(&mods, &red).unwrap();
        let dm = decomposition_matrix(&t, &bt, &blocks).unwrap();
        Data {
            t,
            bt,
            blocks,
            dm,
            mods,
        }
    }

    #[test]
    fn p_group_has_only_trivial_module() {
        let d = compute("D8", 2);
        assert_eq!(d.mods.modules().len(), 1);
        assert_eq!(d.mods.modules()[0].dim, 1);
        assert_eq!(d.dm.d, vec![vec![1], vec![1], vec![1], vec![1], vec![2]]);
    }

    #[test]
    fn a4_mod_2() {
        let d = compute("A4", 2);
        assert_eq!(d.mods.field().size(), 4);
        assert!(d.mods.modules().iter().all(|m| m.dim == 1));
        assert!(d.bt.ibr()[0].iter().all(|v| v.is_one()));
        let w = CycNum::root_of_unity(3, 1);
        let w2 = CycNum::root_of_unity(3, 2);
        for i in 1..3 {
            let vals = &d.bt.ibr()[i];
            assert!(vals[1..].iter().all(|v| *v == w || *v == w2));
        }
        // three unit rows for the linear characters; (1,1,1) for degree 3
        let mut unit_rows: Vec<Vec<i64>> = d.dm.d[..3].to_vec();
        unit_rows.sort();
        assert_eq!(unit_rows, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(d.dm.d[3], vec![1, 1, 1]);
        assert!(!is_block_diagonal_splittable(&d.dm.d));
        assert_eq!(d.blocks.blocks.len(), 1);
    }

    #[test]
    fn s3_mod_3() {
        let d = compute("S3", 3);
        assert_eq!(d.mods.modules().len(), 2);
        assert!(d.mods.modules().iter().all(|m| m.dim == 1));
        assert_eq!(d.dm.d, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        for i in 0..2 {
            assert!(d.mods.check_homomorphism(i));
        }
    }

    #[test]
    fn coprime_prime_gives_identity() {
        let d = compute("S3", 5);
        assert_eq!(d.dm.d, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn cartan_is_symmetric_and_indecomposable_per_block() {
        for (name, p) in [("S4", 2), ("S4", 3), ("SL23", 2), ("SL23", 3), ("A4", 3)] {
            let d = compute(name, p);
            let c = cartan(&d.dm);
            for a in 0..c.len() {
                assert!(c[a][a] > 0);
                for b in 0..c.len() {
                    assert_eq!(c[a][b], c[b][a]);
                }
            }
            for (bi, blk) in d.blocks.blocks.iter().enumerate() {
                let cols = brauer_columns(&d.dm, bi);
                let sub: Vec<Vec<i64>> =
                    cols.iter().map(|&a| cols.iter().map(|&b| c[a][b]).collect()).collect();
                assert!(!is_block_diagonal_splittable(&sub), "{name} p={p} block {bi}");
                let full = submatrix_over(&d.dm, bi, &blk.rows).unwrap();
                assert!(!is_block_diagonal_splittable(&full));
            }
            assert_eq!(d.bt.ibr().len(), pregular_classes(d.t.group(), p).len());
        }
    }

    #[test]
    fn splittability() {
        assert!(!is_block_diagonal_splittable(&[vec![2]]));
        assert!(is_block_diagonal_splittable(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1]
        ]));
        assert!(!is_block_diagonal_splittable(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1]
        ]));
    }

    #[test]
    fn rows_outside_block_rejected() {
        let d = compute("A4", 3);
        let b = d.blocks.block_of(3);
        assert_eq!(
            submatrix_over(&d.dm, b, &[0]).unwrap_err(),
            Error::RowOutsideBlock(0)
        );
    }
}
