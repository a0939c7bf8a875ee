use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use thetablocks::blocks::{p_blocks, reduction_for};
use thetablocks::chartab::CharacterTable;
use thetablocks::cyclo::{CycNum, IdealChoice};
use thetablocks::groups::{builtin_group, load_group, FiniteGroup, DEFAULT_ORDER_CAP};
use thetablocks::modrep::{
    brauer_characters, cartan, decomposition_matrix, modular_irreducibles, BrauerTable,
    DEFAULT_MODULAR_CAP, DEFAULT_SEED,
};
use thetablocks::triples::{build_projective_rep, theta_blocks_with, CharacterTriple, NormalSpec, ProjRepOptions, DEFAULT_REP_GROUP_CAP};
use thetablocks::verify::{load_corpus, run_corpus, Check, RunOptions};
use thetablocks::Error;

#[derive(Parser)]
#[command(name = "thetablocks", version, about = "Character tables, p-blocks and theta-blocks of small finite groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Maximal ideal above p, as "factor,root".
    #[arg(long, global = true, default_value = "0,0")]
    ideal_choice: IdealChoice,
    /// Largest group order accepted when reading a group.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    cap: usize,
    /// Add decimal approximations to text output.
    #[arg(long, global = true)]
    approx: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ordinary character table.
    Table { group: String },
    /// p-blocks with defect groups.
    Blocks {
        #[arg(short)]
        p: u32,
        group: String,
    },
    /// Brauer character table.
    Modtable {
        #[arg(short)]
        p: u32,
        group: String,
    },
    /// Decomposition and Cartan matrices.
    Decomp {
        #[arg(short)]
        p: u32,
        group: String,
    },
    /// Theta-blocks of a character triple.
    Theta {
        #[arg(short)]
        p: u32,
        /// "auto:trivial|center|derived|whole" or comma-separated elements.
        #[arg(long)]
        normal: String,
        /// Row of theta in the table of the normal subgroup.
        #[arg(long)]
        theta: usize,
        group: String,
    },
    /// Run checks over a corpus file.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        /// Restrict to one check (repeatable).
        #[arg(long = "theorem")]
        theorem: Vec<String>,
    },
}

enum Failure {
    Input(String),
    Compute(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedInput(_)
            | Error::MalformedPermutation { .. }
            | Error::InvalidCayleyTable { .. }
            | Error::OrderCapExceeded { .. }
            | Error::NotNormal
            | Error::InvalidTriple(_)
            | Error::InvalidIdealChoice { .. }
            | Error::NotRealizable(_)
            | Error::ShapeViolation(_) => Failure::Input(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
    }
}

fn read_group(arg: &str, cap: usize) -> Result<Arc<FiniteGroup>, Failure> {
    let g = if arg.starts_with("auto:") {
        let g = builtin_group(arg)?;
        if g.order() > cap {
            return Err(Error::OrderCapExceeded { cap }.into());
        }
        g
    } else {
        load_group(Path::new(arg), cap)?
    };
    Ok(Arc::new(g))
}

fn parse_normal(s: &str) -> Result<NormalSpec, Failure> {
    if s.starts_with("auto:") {
        return Ok(NormalSpec::Auto(s.to_string()));
    }
    let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
    let elems = trimmed
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("bad --normal {s:?}: {e}")))?;
    Ok(NormalSpec::Elements(elems))
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cell(v: &CycNum, approx: bool) -> String {
    if approx {
        let (re, im) = v.approx();
        let im = if im.abs() < 1e-9 { 0.0 } else { im };
        let re = if re.abs() < 1e-9 { 0.0 } else { re };
        if im == 0.0 {
            format!("{v} ({re:.3})")
        } else {
            format!("{v} ({re:.3}{im:+.3}i)")
        }
    } else {
        v.to_string()
    }
}

/// Left-aligned columns separated by two spaces.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{s}{}", " ".repeat(widths[i] - s.chars().count())))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn table_text(t: &CharacterTable, approx: bool) -> String {
    let g = t.group();
    let mut rows = vec![
        std::iter::once("class".to_string())
            .chain((0..t.num_classes()).map(|c| c.to_string()))
            .collect(),
        std::iter::once("size".to_string())
            .chain(t.classes().iter().map(|c| c.size.to_string()))
            .collect(),
        std::iter::once("order".to_string())
            .chain(t.classes().iter().map(|c| g.element_order(c.representative).to_string()))
            .collect::<Vec<_>>(),
    ];
    for (i, row) in t.chars().iter().enumerate() {
        rows.push(
            std::iter::once(format!("X.{i}"))
                .chain(row.iter().map(|v| cell(v, approx)))
                .collect(),
        );
    }
    format!("{} (order {})\n{}", g.name(), g.order(), aligned(&rows))
}

fn brauer_text(bt: &BrauerTable, t: &CharacterTable, approx: bool) -> String {
    let mut rows: Vec<Vec<String>> = vec![std::iter::once("class".to_string())
        .chain(bt.pregular_classes().iter().map(|c| c.to_string()))
        .collect()];
    rows.push(
        std::iter::once("size".to_string())
            .chain(bt.pregular_classes().iter().map(|&c| t.classes()[c].size.to_string()))
            .collect(),
    );
    for (i, row) in bt.ibr().iter().enumerate() {
        rows.push(
            std::iter::once(format!("phi.{i}"))
                .chain(row.iter().map(|v| cell(v, approx)))
                .collect(),
        );
    }
    format!("{} mod {}\n{}", t.group().name(), bt.p(), aligned(&rows))
}

fn int_matrix_text(label: &str, m: &[Vec<i64>], row_names: &[String]) -> String {
    let rows: Vec<Vec<String>> = m
        .iter()
        .zip(row_names)
        .map(|(r, name)| std::iter::once(name.clone()).chain(r.iter().map(|x| x.to_string())).collect())
        .collect();
    format!("{label}\n{}", aligned(&rows))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Table { group } => {
            let g = read_group(group, c.cap)?;
            let t = CharacterTable::compute(g)?;
            Ok(if c.json { render(&t.to_json()) } else { table_text(&t, c.approx) })
        }
        Command::Blocks { p, group } => {
            let g = read_group(group, c.cap)?;
            let t = CharacterTable::compute(g)?;
            let red = reduction_for(&t, *p, c.ideal_choice)?;
            let part = p_blocks(&t, *p, &red)?;
            if c.json {
                return Ok(render(&part.to_json()));
            }
            let rows: Vec<Vec<String>> = std::iter::once(vec![
                "block".to_string(),
                "defect".to_string(),
                "|D|".to_string(),
                "characters".to_string(),
            ])
            .chain(part.blocks.iter().enumerate().map(|(i, b)| {
                vec![
                    i.to_string(),
                    b.defect.to_string(),
                    b.defect_group.order().to_string(),
                    format!("{:?}", b.rows),
                ]
            }))
            .collect();
            Ok(format!("{} at p = {p}\n{}", t.group().name(), aligned(&rows)))
        }
        Command::Modtable { p, group } => {
            let g = read_group(group, c.cap)?;
            let t = CharacterTable::compute(g.clone())?;
            let red = reduction_for(&t, *p, c.ideal_choice)?;
            let mods = modular_irreducibles(&g, *p, c.seed, DEFAULT_MODULAR_CAP)?;
            let bt = brauer_characters(&mods, &red)?;
            Ok(if c.json { render(&bt.to_json()) } else { brauer_text(&bt, &t, c.approx) })
        }
        Command::Decomp { p, group } => {
            let g = read_group(group, c.cap)?;
            let t = CharacterTable::compute(g.clone())?;
            let red = reduction_for(&t, *p, c.ideal_choice)?;
            let part = p_blocks(&t, *p, &red)?;
            let mods = modular_irreducibles(&g, *p, c.seed, DEFAULT_MODULAR_CAP)?;
            let bt = brauer_characters(&mods, &red)?;
            let dm = decomposition_matrix(&t, &bt, &part)?;
            let cm = cartan(&dm);
            if c.json {
                return Ok(render(&json!({
                    "group": g.name(),
                    "p": p,
                    "decomposition": dm.d,
                    "block_labels": dm.block_labels,
                    "brauer_blocks": dm.brauer_blocks,
                    "cartan": cm,
                })));
            }
            let names: Vec<String> = (0..dm.d.len())
                .map(|i| format!("X.{i} [B{}]", dm.block_labels[i]))
                .collect();
            let bnames: Vec<String> = (0..cm.len())
                .map(|i| format!("phi.{i} [B{}]", dm.brauer_blocks[i]))
                .collect();
            Ok(format!(
                "{}\n{}",
                int_matrix_text(&format!("decomposition matrix of {} at p = {p}", g.name()), &dm.d, &names),
                int_matrix_text("Cartan matrix", &cm, &bnames)
            ))
        }
        Command::Theta { p, normal, theta, group } => {
            let g = read_group(group, c.cap)?;
            let n = parse_normal(normal)?.resolve(&g)?;
            let triple = CharacterTriple::new(g, n, *theta)?;
            let proj = build_projective_rep(&triple, &ProjRepOptions::default())?;
            let report = theta_blocks_with(&triple, &proj, *p, c.ideal_choice, DEFAULT_REP_GROUP_CAP)?;
            if c.json {
                return Ok(render(&report.to_json()));
            }
            let rows: Vec<Vec<String>> = std::iter::once(vec![
                "theta-block".to_string(),
                "characters".to_string(),
                "|D_theta/N|".to_string(),
            ])
            .chain(report.blocks.iter().enumerate().map(|(i, b)| {
                vec![i.to_string(), format!("{:?}", b.rows), b.defect_quotient.order().to_string()]
            }))
            .collect();
            Ok(format!(
                "{} over N of order {} (theta = {}, degree {}), p = {p}\n|Z| = {}, |G^| = {}, {}\n{}",
                triple.group.name(),
                triple.normal.order(),
                triple.theta_row,
                triple.theta_degree(),
                report.rep.k,
                report.rep.ghat.order(),
                proj.construction,
                aligned(&rows)
            ))
        }
        Command::Verify { corpus, theorem } => {
            let entries = load_corpus(corpus)?;
            let checks = if theorem.is_empty() {
                None
            } else {
                Some(theorem.iter().map(|s| s.parse::<Check>()).collect::<Result<Vec<_>, _>>()?)
            };
            let opts = RunOptions {
                checks,
                seed: c.seed,
                choice: c.ideal_choice,
                cap: c.cap,
            };
            let report = run_corpus(&entries, &opts)?;
            let out = if c.json { render(&report.to_json()) } else { report.to_text() };
            if report.ok() {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
    }
}
