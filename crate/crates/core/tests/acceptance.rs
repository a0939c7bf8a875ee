//! Acceptance criteria. Prints one line per criterion with its wall time
//! against a pinned limit and exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thetablocks::groups::{builtin_group, builtin_names};
use thetablocks::triples::{CharacterTriple, NormalSpec};
use thetablocks::verify::{
    decomposition_submatrices, load_corpus, run_corpus, Check, CorpusEntry, Instance, Report,
    RunOptions, Status,
};

type Verdict = Result<String, String>;

fn corpus() -> Vec<CorpusEntry> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata/corpus.json");
    load_corpus(&path).expect("corpus loads")
}

fn run(checks: &[Check], primes: Option<&[u32]>) -> Result<Report, String> {
    let mut entries = corpus();
    if let Some(ps) = primes {
        for e in entries.iter_mut() {
            e.primes.retain(|p| ps.contains(p));
        }
        entries.retain(|e| !e.primes.is_empty());
    }
    let opts = RunOptions { checks: Some(checks.to_vec()), ..RunOptions::default() };
    run_corpus(&entries, &opts).map_err(|e| e.to_string())
}

fn no_failures(r: &Report) -> Result<(), String> {
    match r.failures().first() {
        None => Ok(()),
        Some(f) => Err(format!(
            "{} failures, first: {} p={:?} {}",
            r.failures().len(),
            f.instance,
            f.p,
            f.check
        )),
    }
}

fn tally(r: &Report, c: Check) -> (usize, usize) {
    let of = |s| r.outcomes.iter().filter(|o| o.check == c && o.status == s).count();
    (of(Status::Pass), of(Status::Vacuous))
}

fn triple(group: &str, normal: &str, theta: usize) -> Result<CharacterTriple, String> {
    let g = Arc::new(builtin_group(group).map_err(|e| e.to_string())?);
    let n = NormalSpec::Auto(normal.to_string()).resolve(&g).map_err(|e| e.to_string())?;
    CharacterTriple::new(g, n, theta).map_err(|e| e.to_string())
}

/// A4 over V4 with trivial θ at p = 2: a single 2-block whose submatrix
/// over θ is the 3x3 identity, so it splits.
fn a4_splitting_example() -> Verdict {
    let t = triple("auto:A4", "auto:derived", 0)?;
    let inst = Instance::new("A4/V4/trivial", t, 2);
    let blocks = inst.blocks().map_err(|e| e.to_string())?;
    if blocks.blocks.len() != 1 {
        return Err(format!("expected one 2-block, got {}", blocks.blocks.len()));
    }
    let subs = decomposition_submatrices(&inst).map_err(|e| e.to_string())?;
    let [(_, rows, m)] = subs.as_slice() else {
        return Err(format!("expected one submatrix, got {}", subs.len()));
    };
    let id: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| (i == j) as i64).collect()).collect();
    if *m != id {
        return Err(format!("submatrix over rows {rows:?} is {m:?}"));
    }
    Ok(format!("rows {rows:?}, D = I3"))
}

fn central_connectivity() -> Verdict {
    let cases = [("auto:Q8", 2), ("auto:SL23", 2), ("auto:SL23", 3), ("auto:D8", 2)];
    for (g, p) in cases {
        let t = triple(g, "auto:center", 1)?;
        let inst = Instance::new(g, t, p);
        let o = inst.run(Check::DecompositionConnectivity);
        if o.status != Status::Pass {
            return Err(format!("{g} p={p}: {} {}", o.status, o.detail));
        }
    }
    Ok(format!("{} instances connected", cases.len()))
}

fn well_definedness() -> Verdict {
    let r = run(&[Check::WellDefinedness], Some(&[2, 3]))?;
    no_failures(&r)?;
    let (pass, vac) = tally(&r, Check::WellDefinedness);
    Ok(format!("{pass} pass, {vac} vacuous"))
}

fn block_structure() -> Verdict {
    let checks = [
        Check::Containment,
        Check::CentralEquality,
        Check::ExtensionProduct,
        Check::CoprimeSingletons,
        Check::PQuotient,
        Check::Golden,
    ];
    let r = run(&checks, None)?;
    no_failures(&r)?;
    let (golden, _) = tally(&r, Check::Golden);
    if golden == 0 {
        return Err("no golden partitions ran".into());
    }
    Ok(format!("{} pass, {golden} golden partitions", r.count(Status::Pass)))
}

fn vanishing_orthogonality() -> Verdict {
    let r = run(&[Check::Vanishing, Check::Orthogonality], None)?;
    no_failures(&r)?;
    let (v, _) = tally(&r, Check::Vanishing);
    let (o, _) = tally(&r, Check::Orthogonality);
    if v < 3 || o < 3 {
        return Err(format!("too few non-vacuous instances: vanishing {v}, orthogonality {o}"));
    }
    Ok(format!("vanishing {v} pass, orthogonality {o} pass"))
}

fn height_and_size() -> Verdict {
    let entries = corpus();
    let missing: Vec<&str> = builtin_names()
        .iter()
        .copied()
        .filter(|n| {
            !entries.iter().any(|e| {
                e.name == format!("{n}/1") && [2, 3, 5].iter().all(|p| e.primes.contains(p))
            })
        })
        .collect();
    if !missing.is_empty() {
        return Err(format!("corpus lacks trivial-N entries for {missing:?}"));
    }
    let r = run(&[Check::HeightAbelian, Check::BlockSizeBound], None)?;
    no_failures(&r)?;
    Ok(format!("{} pass", r.count(Status::Pass)))
}

fn infrastructure() -> Verdict {
    let r = run(&Check::ALL, None)?;
    no_failures(&r)?;
    for c in [Check::TableOrthogonality, Check::IdealInvariance, Check::ModularConsistency] {
        if tally(&r, c).0 == 0 {
            return Err(format!("{c} never passed"));
        }
    }
    Ok(format!(
        "{} pass, {} vacuous, {} n/a",
        r.count(Status::Pass),
        r.count(Status::Vacuous),
        r.count(Status::NotApplicable)
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Verdict); 7] = [
        ("A4 over V4 at p=2 splits", 5, a4_splitting_example),
        ("central decomposition connectivity", 60, central_connectivity),
        ("theta-block well-definedness", 300, well_definedness),
        ("theta-block structure and goldens", 300, block_structure),
        ("vanishing and orthogonality", 300, vanishing_orthogonality),
        ("height and block size bounds", 300, height_and_size),
        ("full suite with infrastructure checks", 600, infrastructure),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*limit);
        let (status, detail) = match (&verdict, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {}: {status}  {name}  ({:.2}s / {limit}s)  {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
