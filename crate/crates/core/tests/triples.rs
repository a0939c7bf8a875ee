use std::sync::Arc;

use proptest::prelude::*;
use thetablocks::cyclo::IdealChoice;
use thetablocks::groups::builtin_group;
use thetablocks::triples::{
    build_projective_rep, theta_blocks, theta_blocks_with, CharacterTriple, NormalSpec,
    ProjRepOptions, TransversalChoice, DEFAULT_REP_GROUP_CAP,
};

fn triple(group: &str, normal: &str, theta: usize) -> CharacterTriple {
    let g = Arc::new(builtin_group(group).unwrap());
    let n = NormalSpec::Auto(normal.to_string()).resolve(&g).unwrap();
    CharacterTriple::new(g, n, theta).unwrap()
}

fn sorted(mut part: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    part.iter_mut().for_each(|b| b.sort_unstable());
    part.sort();
    part
}

fn cases() -> Vec<CharacterTriple> {
    vec![
        triple("auto:D8", "auto:center", 1),
        triple("auto:Q8", "auto:center", 1),
        triple("auto:S4", "auto:derived", 3),
        triple("auto:SL23", "auto:derived", 4),
        triple("auto:A4", "auto:derived", 0),
    ]
}

#[test]
fn theta_blocks_cover_irr_over_theta() {
    for t in cases() {
        for p in [2, 3] {
            let r = theta_blocks(&t, p, IdealChoice::default()).unwrap();
            let mut rows: Vec<usize> = r.partition().concat();
            rows.sort_unstable();
            let mut over = t.irr_over().to_vec();
            over.sort_unstable();
            assert_eq!(rows, over, "{} p={p}", t.describe());
        }
    }
}

#[test]
fn largest_transversal_gives_same_blocks() {
    let opts = ProjRepOptions { transversal: TransversalChoice::Largest, matrices: None };
    for t in cases() {
        let base = theta_blocks(&t, 2, IdealChoice::default()).unwrap();
        let proj = build_projective_rep(&t, &opts).unwrap();
        proj.check_laws(&t).unwrap();
        let other = theta_blocks_with(&t, &proj, 2, IdealChoice::default(), DEFAULT_REP_GROUP_CAP).unwrap();
        assert_eq!(sorted(base.partition()), sorted(other.partition()), "{}", t.describe());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn twisted_reps_give_same_blocks(seed in any::<u64>(), which in 0usize..5, p in prop::sample::select(vec![2u32, 3])) {
        let t = &cases()[which];
        let proj = build_projective_rep(t, &ProjRepOptions::default()).unwrap();
        let base = theta_blocks_with(t, &proj, p, IdealChoice::default(), DEFAULT_REP_GROUP_CAP).unwrap();
        let twisted = proj.twist(&proj.random_twist(seed)).unwrap();
        twisted.check_laws(t).unwrap();
        let other = theta_blocks_with(t, &twisted, p, IdealChoice::default(), DEFAULT_REP_GROUP_CAP).unwrap();
        prop_assert_eq!(sorted(base.partition()), sorted(other.partition()));
    }
}
