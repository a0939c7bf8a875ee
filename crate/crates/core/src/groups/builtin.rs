//! Named groups shipped as permutation generators.

use super::{FiniteGroup, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};

/// Names accepted by [`builtin_group`], in increasing order.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "C1", "C2", "C3", "C4", "V4", "S3", "D8", "Q8", "D10", "A4", "S4", "SL23", "GL23", "A5",
        "S5",
    ]
}

/// The permutation action of 2x2 matrices over F_3 on the eight nonzero
/// row vectors.
fn f3_matrix_perm(m: [[u32; 2]; 2]) -> Vec<u32> {
    let points: Vec<(u32, u32)> = (0..9)
        .map(|i| (i / 3, i % 3))
        .filter(|&(a, b)| (a, b) != (0, 0))
        .collect();
    points
        .iter()
        .map(|&(a, b)| {
            let img = ((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3);
            points.iter().position(|&q| q == img).unwrap() as u32
        })
        .collect()
}

fn generators(name: &str) -> Option<Vec<Vec<u32>>> {
    let gens = match name {
        "C1" => vec![vec![0]],
        "C2" => vec![vec![1, 0]],
        "C3" => vec![vec![1, 2, 0]],
        "C4" => vec![vec![1, 2, 3, 0]],
        "V4" => vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
        "S3" => vec![vec![1, 2, 0], vec![1, 0, 2]],
        "D8" => vec![vec![1, 2, 3, 0], vec![3, 2, 1, 0]],
        "Q8" => vec![
            f3_matrix_perm([[0, 1], [2, 0]]),
            f3_matrix_perm([[1, 1], [1, 2]]),
        ],
        "D10" => vec![vec![1, 2, 3, 4, 0], vec![0, 4, 3, 2, 1]],
        "A4" => vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]],
        "S4" => vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]],
        "SL23" => vec![
            f3_matrix_perm([[1, 1], [0, 1]]),
            f3_matrix_perm([[1, 0], [1, 1]]),
        ],
        "GL23" => vec![
            f3_matrix_perm([[1, 1], [0, 1]]),
            f3_matrix_perm([[1, 0], [1, 1]]),
            f3_matrix_perm([[2, 0], [0, 1]]),
        ],
        "A5" => vec![vec![1, 2, 3, 4, 0], vec![1, 2, 0, 3, 4]],
        "S5" => vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]],
        _ => return None,
    };
    Some(gens)
}

/// A named group, accepting either `"S4"` or `"auto:S4"`.
pub fn builtin_group(name: &str) -> Result<FiniteGroup> {
    let bare = name.strip_prefix("auto:").unwrap_or(name);
    let gens = generators(bare)
        .ok_or_else(|| Error::MalformedInput(format!("unknown built-in group {name:?}")))?;
    FiniteGroup::from_permutations(bare, &gens, DEFAULT_ORDER_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let expected = [1, 2, 3, 4, 4, 6, 8, 8, 10, 12, 24, 24, 48, 60, 120];
        for (name, &n) in builtin_names().iter().zip(expected.iter()) {
            assert_eq!(builtin_group(name).unwrap().order(), n, "{name}");
        }
    }

    #[test]
    fn quaternion_has_unique_involution() {
        let q8 = builtin_group("auto:Q8").unwrap();
        let invols = (0..8).filter(|&x| q8.element_order(x) == 2).count();
        assert_eq!(invols, 1);
        assert!(!q8.is_abelian());
    }

    #[test]
    fn sl23_center_has_order_two() {
        let g = builtin_group("SL23").unwrap();
        assert_eq!(g.center().order(), 2);
        assert_eq!(g.sylow_subgroup(2).order(), 8);
    }
}
