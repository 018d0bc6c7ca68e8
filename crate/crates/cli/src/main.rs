mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use vkampen::colimits::{fingerprint, vertex_group};
use vkampen::complex::BaseSet;
use vkampen::golden;
use vkampen::pi1::{pi1, random_path};
use vkampen::vkcheck::{crosscheck, run_vk, Tally, VkOptions};
use vkampen::Error;

use document::{Instance, InstanceDocument};

/// Fundamental groupoids of finite 2-complexes, computed through covers.
#[derive(Parser)]
#[command(name = "vkampen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Node budget for homomorphism counting.
    #[arg(long, global = true, env = "VKAMPEN_BUDGET", default_value_t = vkampen::colimits::DEFAULT_HOM_BUDGET)]
    budget: u64,
    /// Largest group order used in fingerprints.
    #[arg(long, global = true, default_value_t = 8)]
    fingerprint_order: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Presents π1(B, S) directly from the base complex.
    Pi1 {
        file: PathBuf,
        /// Comma-separated vertex names, overriding the document.
        #[arg(long)]
        base_set: Option<String>,
    },
    /// Coequalizes the fork of the cover and compares with π1(B, S).
    Vk {
        file: PathBuf,
        #[arg(long)]
        base_set: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Set)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random paths in the total complex on which to check `εγ = δ`.
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
    /// Runs the cover, the coproduct of its pieces, and their pullback.
    Crosscheck {
        file: PathBuf,
        #[arg(long)]
        base_set: Option<String>,
    },
    /// Prints a built-in example as a document.
    Golden {
        /// Omit to list the names.
        name: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// The base set of the document.
    Set,
    /// Every vertex.
    All,
    /// The first vertex of the base set only.
    Point,
}

/// Exit statuses other than success and plain errors.
const HYPOTHESIS: u8 = 2;
const MISMATCH: u8 = 3;

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::Hypothesis { .. }) => HYPOTHESIS,
            _ => 1,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn goldens() -> Vec<golden::Golden> {
    let mut all = vec![golden::point()];
    all.extend(golden::corpus());
    all
}

fn load(file: &PathBuf, base_set: Option<&str>) -> Result<(InstanceDocument, Instance)> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let doc = document::parse(&text)?;
    let mut inst = doc.build()?;
    if let Some(list) = base_set {
        let b = &inst.cover.base;
        inst.base_set = list
            .split(',')
            .map(|v| b.vertex_by_name(v.trim()).context("--base-set"))
            .collect::<Result<_>>()?;
    }
    Ok((doc, inst))
}

fn names(inst: &Instance, s: &BaseSet) -> Vec<String> {
    s.iter().map(|&v| inst.cover.base.vertex_name(v).to_string()).collect()
}

fn summary(value: serde_json::Value) {
    println!("--- summary ---");
    println!("{value}");
}

fn tally_json(t: &Tally) -> serde_json::Value {
    json!({"equal": t.equal, "distinct": t.distinct, "unknown": t.unknown})
}

fn cmd_pi1(cli: &Cli, file: &PathBuf, base_set: Option<&str>) -> Result<(), Failure> {
    let (doc, inst) = load(file, base_set)?;
    let b = &inst.cover.base;
    let p = pi1(b, &inst.base_set)?;
    let g = &p.presentation;
    println!("instance {}", doc.name.as_deref().unwrap_or("-"));
    println!("objects {}", g.objects().join(" "));
    println!("generators {}", g.arrow_count());
    for a in g.arrow_ids() {
        let arr = g.arrow(a);
        println!(
            "  {}: {} -> {}  via {}",
            arr.name,
            g.object_name(arr.source),
            g.object_name(arr.target),
            b.display_path(&p.witness[a.0])
        );
    }
    println!("relators {}", g.relators().len());
    for (u, v) in g.relators() {
        println!("  {} = {}", g.display_word(u), g.display_word(v));
    }
    let mut groups = Vec::new();
    for o in g.object_ids() {
        let vg = vertex_group(g, o)?;
        let f = fingerprint(&vg.presentation, cli.fingerprint_order, cli.budget)?;
        println!("vertex {}: {}", g.object_name(o), f);
        groups.push(json!({"vertex": g.object_name(o), "abelian": f.abelian.to_string()}));
    }
    summary(json!({
        "command": "pi1",
        "objects": g.object_count(),
        "generators": g.arrow_count(),
        "relators": g.relators().len(),
        "components": b.component_count(),
        "vertex_groups": groups,
    }));
    Ok(())
}

fn cmd_vk(cli: &Cli, file: &PathBuf, base_set: Option<&str>, mode: Mode, seed: u64, trials: usize) -> Result<(), Failure> {
    let (doc, mut inst) = load(file, base_set)?;
    match mode {
        Mode::Set => {}
        Mode::All => inst.base_set = inst.cover.base.vertex_ids().collect(),
        Mode::Point => {
            let first = *inst.base_set.iter().next().ok_or_else(|| anyhow!("empty base set"))?;
            inst.base_set = [first].into();
        }
    }
    let opts = VkOptions { fingerprint_order: cli.fingerprint_order, hom_budget: cli.budget, ..VkOptions::default() };
    println!("instance {}", doc.name.as_deref().unwrap_or("-"));
    println!("base set {}", names(&inst, &inst.base_set).join(" "));
    let run = run_vk(&inst.cover, &inst.base_set, &opts)?;
    let d = &run.diagram;
    let s = d.sizes();
    let sizes = |(o, a, r): (usize, usize, usize)| format!("{o} objects, {a} generators, {r} relators");
    println!("lower {}", sizes(s.lower));
    println!("middle {}", sizes(s.middle));
    println!("target {}", sizes(s.target));
    let r = &run.report;
    println!("fork commutes {}", r.fork_commutes);
    println!("objects bijective {}", r.objects_bijective);
    for v in &r.vertices {
        let mark = if v.agrees() { "=" } else { "!=" };
        println!("vertex {}: {} {mark} {}", v.vertex, v.coequalizer, v.direct);
    }
    println!("phi psi {}", tally_line(&r.forward_round_trips));
    println!("psi phi {}", tally_line(&r.backward_round_trips));
    println!("relators {}", tally_line(&r.relators));

    let mut sampled = Tally::default();
    if trials > 0 {
        let q = &run.coequalizer;
        let battery = vkampen::vkcheck::Battery::new(&q.presentation, &opts.battery)?;
        let e = &d.cover.total;
        let flags = d.total_fiber();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let path = random_path(e, &flags, 12, &mut rng).ok_or_else(|| anyhow!("no vertex over the base set"))?;
            let lhs = run.inverse.apply(&d.target.path_word(&d.cover.base, &d.cover.map.map_path(&path))?)?;
            let rhs = q.quotient_map.apply(&d.middle.path_word(e, &path)?)?;
            let v = battery.decide(&lhs, &rhs)?;
            if v.is_distinct() {
                println!("trial {} differs: {v}", e.display_path(&path));
            }
            sampled.record(&v);
        }
        println!("eps gamma = delta {}", tally_line(&sampled));
    }
    for f in &r.failures {
        println!("failure {f}");
    }
    let passed = r.passed() && sampled.distinct == 0;
    println!("{}", if passed { "PASS" } else { "FAIL" });
    let mut all = r.verdicts();
    all.add(&sampled);
    summary(json!({
        "command": "vk",
        "passed": passed,
        "base_set": names(&inst, &inst.base_set),
        "fingerprints_agree": r.fingerprints_agree(),
        "verdicts": tally_json(&all),
    }));
    if passed {
        Ok(())
    } else {
        Err(Failure { code: MISMATCH, error: anyhow!("coequalizer and direct computation disagree") })
    }
}

fn tally_line(t: &Tally) -> String {
    format!("equal {} distinct {} unknown {}", t.equal, t.distinct, t.unknown)
}

fn cmd_crosscheck(cli: &Cli, file: &PathBuf, base_set: Option<&str>) -> Result<(), Failure> {
    let (doc, inst) = load(file, base_set)?;
    let opts = VkOptions { fingerprint_order: cli.fingerprint_order, hom_budget: cli.budget, ..VkOptions::default() };
    println!("instance {}", doc.name.as_deref().unwrap_or("-"));
    let r = crosscheck(&inst.cover, &inst.base_set, &opts)?;
    for c in &r.columns {
        let widened = if c.widened { " (all vertices)" } else { "" };
        println!("column {}{widened}: {}", c.name, if c.passed { "pass" } else { "fail" });
        for (v, f) in &c.fingerprints {
            println!("  {v}: {f}");
        }
    }
    println!("{}", r.verdict());
    let mut all = Tally::default();
    for c in &r.columns {
        all.add(&c.verdicts);
    }
    summary(json!({
        "command": "crosscheck",
        "verdict": r.verdict(),
        "widened": r.columns.iter().filter(|c| c.widened).map(|c| c.name.clone()).collect::<Vec<_>>(),
        "verdicts": tally_json(&all),
    }));
    if r.agree() {
        Ok(())
    } else {
        Err(Failure { code: MISMATCH, error: anyhow!("columns disagree") })
    }
}

fn cmd_golden(name: Option<&str>) -> Result<(), Failure> {
    let all = goldens();
    let Some(name) = name else {
        for g in &all {
            println!("{}", g.name);
        }
        return Ok(());
    };
    let g = all.iter().find(|g| g.name == name).ok_or_else(|| anyhow!("no built-in example `{name}`"))?;
    let doc = InstanceDocument::describe(Some(g.name.to_string()), &g.cover, &g.base_set);
    print!("{}", document::to_json(&doc));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pi1 { file, base_set } => cmd_pi1(&cli, file, base_set.as_deref()),
        Command::Vk { file, base_set, mode, seed, trials } => {
            cmd_vk(&cli, file, base_set.as_deref(), *mode, *seed, *trials)
        }
        Command::Crosscheck { file, base_set } => cmd_crosscheck(&cli, file, base_set.as_deref()),
        Command::Golden { name } => cmd_golden(name.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match f.error.downcast_ref::<Error>() {
                Some(Error::Hypothesis { components }) if components.len() > 8 => eprintln!(
                    "error: base set misses {} path-components, including {}",
                    components.len(),
                    components[..8].join(", ")
                ),
                _ => eprintln!("error: {:#}", f.error),
            }
            ExitCode::from(f.code)
        }
    }
}
