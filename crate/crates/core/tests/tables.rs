//! Computed character tables against hand-copied textbook tables in
//! `testdata/tables`. Classes are matched by (size, element order); ties
//! are resolved by trying every relabelling.

use std::path::PathBuf;
use std::sync::Arc;

use serde::Deserialize;
use thetablocks::chartab::CharacterTable;
use thetablocks::cyclo::CycNum;
use thetablocks::groups::builtin_group;

#[derive(Deserialize)]
struct Golden {
    group: String,
    classes: Vec<(usize, u64)>,
    chars: Vec<Vec<String>>,
}

/// Whitespace-separated terms, each `[-]int` or `[-]E(n)[^k]`.
fn parse_value(s: &str) -> CycNum {
    s.split_whitespace().fold(CycNum::zero(), |acc, term| {
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term),
        };
        let v = if let Some(rest) = body.strip_prefix("E(") {
            let (n, tail) = rest.split_once(')').expect("E(n)");
            let k = tail.strip_prefix('^').map_or(1, |k| k.parse().expect("exponent"));
            CycNum::root_of_unity(n.parse().expect("conductor"), k)
        } else {
            CycNum::from_int(body.parse().expect("integer"))
        };
        if neg {
            acc + &(-v)
        } else {
            acc + &v
        }
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every bijection from golden columns to computed classes that preserves
/// (size, order).
fn column_maps(golden: &[(usize, u64)], computed: &[(usize, u64)]) -> Vec<Vec<usize>> {
    let mut maps = vec![vec![usize::MAX; golden.len()]];
    let mut keys: Vec<(usize, u64)> = golden.to_vec();
    keys.sort();
    keys.dedup();
    for key in keys {
        let g: Vec<usize> = (0..golden.len()).filter(|&i| golden[i] == key).collect();
        let c: Vec<usize> = (0..computed.len()).filter(|&i| computed[i] == key).collect();
        assert_eq!(g.len(), c.len(), "class count for {key:?}");
        let mut next = Vec::new();
        for m in &maps {
            for perm in permutations(c.len()) {
                let mut m = m.clone();
                for (gi, &pi) in g.iter().zip(&perm) {
                    m[*gi] = c[pi];
                }
                next.push(m);
            }
        }
        maps = next;
    }
    maps
}

fn check(file: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata/tables").join(file);
    let golden: Golden = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let g = Arc::new(builtin_group(&golden.group).unwrap());
    let t = CharacterTable::compute(g.clone()).unwrap();
    let computed: Vec<(usize, u64)> = t
        .classes()
        .iter()
        .map(|c| (c.size, g.element_order(c.representative) as u64))
        .collect();
    assert_eq!(computed.len(), golden.classes.len());
    let want: Vec<Vec<CycNum>> = golden
        .chars
        .iter()
        .map(|r| r.iter().map(|s| parse_value(s)).collect())
        .collect();
    let found = column_maps(&golden.classes, &computed).into_iter().any(|m| {
        let mut used = vec![false; t.chars().len()];
        want.iter().all(|row| {
            let hit = (0..t.chars().len())
                .find(|&i| !used[i] && row.iter().zip(&m).all(|(v, &c)| t.value(i, c) == v));
            hit.map(|i| used[i] = true).is_some()
        })
    });
    assert!(found, "{} table differs from {file}", golden.group);
}

#[test]
fn s3_table() {
    check("s3.json");
}

#[test]
fn d8_table() {
    check("d8.json");
}

#[test]
fn q8_table() {
    check("q8.json");
}

#[test]
fn a4_table() {
    check("a4.json");
}

#[test]
fn sl23_table() {
    check("sl23.json");
}

#[test]
fn a5_table() {
    check("a5.json");
}
