//! The acceptance suite: one line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vkampen::colimits::{
    coequalize, factor_through_quotient, fingerprint, random_coequalizing_valuation, small_groups, vertex_group,
    AbelianInvariants, CoequalizerResult, Fingerprint,
};
use vkampen::complex::{check_hypothesis, BaseSet};
use vkampen::golden::{self, Golden};
use vkampen::pi1::{
    associated_sequence, composite, elementary_homotopies, induced_functors, pi1, random_path, random_weight,
    Epsilon, VkDiagram,
};
use vkampen::vkcheck::{crosscheck, random_instance, run_vk, Battery, Bounds, Tally, VkOptions};
use vkampen::Error;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn cyclic_counts_ok(f: &Fingerprint) -> bool {
    (2..=6).all(|n| f.hom_counts.iter().any(|(g, c)| *g == format!("Z{n}") && *c == n as u64))
}

fn direct_fingerprints(g: &Golden, opts: &VkOptions) -> Result<Vec<Fingerprint>, String> {
    let p = pi1(&g.cover.base, &g.base_set).map_err(err)?;
    p.presentation
        .object_ids()
        .map(|o| {
            let vg = vertex_group(&p.presentation, o).map_err(err)?;
            fingerprint(&vg.presentation, opts.fingerprint_order, opts.hom_budget).map_err(err)
        })
        .collect()
}

fn circle_like(g: &Golden, opts: &VkOptions) -> Outcome {
    let run = run_vk(&g.cover, &g.base_set, opts).map_err(err)?;
    let r = &run.report;
    check(r.passed(), format!("comparison failed: {:?}", r.failures))?;
    let direct = direct_fingerprints(g, opts)?;
    let rank_one = AbelianInvariants { free_rank: 1, torsion: vec![] };
    for (v, d) in r.vertices.iter().zip(&direct) {
        check(v.coequalizer.abelian == rank_one, format!("{}: {}", v.vertex, v.coequalizer.abelian))?;
        check(cyclic_counts_ok(&v.coequalizer), format!("{}: {}", v.vertex, v.coequalizer))?;
        check(&v.coequalizer == d, format!("{}: direct {d}", v.vertex))?;
    }
    Ok(format!("{} at {}", r.vertices[0].coequalizer.abelian, r.vertices.len()))
}

fn criterion1(opts: &VkOptions) -> Outcome {
    let g = golden::circle_two_arcs();
    circle_like(&g, opts).map(|s| format!("fingerprint {s} vertices"))
}

fn criterion2(opts: &VkOptions) -> Outcome {
    let g = golden::circle_double_cover();
    check(!g.cover.has_global_section(), "double cover should not split")?;
    circle_like(&g, opts).map(|s| format!("fingerprint {s} vertex"))
}

fn criterion3(opts: &VkOptions) -> Outcome {
    let g = golden::circle_two_arcs();
    let v0 = g.cover.base.vertex_by_name("v0").map_err(err)?;
    let s: BaseSet = [v0].into();
    let report = check_hypothesis(&g.cover, &s).map_err(err)?;
    check(!report.passed(), "hypothesis unexpectedly holds")?;
    check(report.missing.iter().all(|m| m.contains("(over v1)")), format!("{:?}", report.missing))?;
    match run_vk(&g.cover, &s, opts) {
        Err(Error::Hypothesis { components }) => {
            check(components.iter().any(|c| c.contains("v1")), format!("{components:?}"))?;
            Ok(format!("rejected: {}", components.join(", ")))
        }
        Err(e) => Err(format!("wrong error: {e}")),
        Ok(_) => Err("run_vk accepted S = {v0}".into()),
    }
}

fn criterion4(opts: &VkOptions) -> Outcome {
    let mut seen = Vec::new();
    for g in [golden::torus(), golden::rp2(), golden::klein(), golden::wedge()] {
        let run = run_vk(&g.cover, &g.base_set, opts).map_err(err)?;
        check(run.report.passed(), format!("{}: {:?}", g.name, run.report.failures))?;
        let direct = direct_fingerprints(&g, opts)?;
        for (v, d) in run.report.vertices.iter().zip(&direct) {
            check(v.coequalizer.abelian == g.invariants, format!("{} {}: {}", g.name, v.vertex, v.coequalizer.abelian))?;
            check(&v.coequalizer == d, format!("{} {}: coequalizer {} direct {d}", g.name, v.vertex, v.coequalizer))?;
        }
        seen.push(format!("{} {}", g.name, g.invariants));
    }
    Ok(seen.join(", "))
}

fn diagrams() -> Result<Vec<(Golden, VkDiagram)>, String> {
    golden::corpus()
        .into_iter()
        .map(|g| {
            let d = induced_functors(&g.cover, &g.base_set).map_err(err)?;
            Ok((g, d))
        })
        .collect()
}

fn base_flags(d: &VkDiagram) -> Vec<bool> {
    let mut f = vec![false; d.cover.base.vertex_count()];
    for v in &d.base_set {
        f[v.0] = true;
    }
    f
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for (g, d) in diagrams()? {
        let b = &d.cover.base;
        let flags = base_flags(&d);
        for _ in 0..200 {
            let f = random_path(b, &flags, 12, &mut rng).ok_or("no base-set vertex")?;
            let w = random_weight(&d, &f, &mut rng).map_err(err)?;
            let seq = associated_sequence(&d, &w).map_err(err)?;
            let lhs = composite(&d.gamma, &seq).map_err(err)?;
            let rhs = d.target.path_word(b, &f).map_err(err)?;
            check(lhs == rhs, format!("{}: path {}", g.name, b.display_path(&f)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} paths, exact"))
}

struct Quotient {
    d: VkDiagram,
    q: CoequalizerResult,
    battery: Battery,
}

fn quotients(opts: &VkOptions) -> Result<Vec<(Golden, Quotient)>, String> {
    diagrams()?
        .into_iter()
        .map(|(g, d)| {
            let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.beta).map_err(err)?;
            let battery = Battery::new(&q.presentation, &opts.battery).map_err(err)?;
            Ok((g, Quotient { d, q, battery }))
        })
        .collect()
}

fn tally_line(t: &Tally) -> String {
    let rate = if t.total() == 0 { 0.0 } else { 100.0 * t.unknown as f64 / t.total() as f64 };
    format!("{} checks, {} distinct, {} unknown ({rate:.1}%)", t.total(), t.distinct, t.unknown)
}

fn criterion6(opts: &VkOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut tally = Tally::default();
    for (g, qt) in quotients(opts)? {
        let d = &qt.d;
        let eps = Epsilon::new(d, &qt.q.quotient_map, &qt.q.presentation, &qt.battery).map_err(err)?;
        let b = &d.cover.base;
        let flags = base_flags(d);
        for _ in 0..100 {
            let f = random_path(b, &flags, 12, &mut rng).ok_or("no base-set vertex")?;
            let w = random_weight(d, &f, &mut rng).map_err(err)?;
            let w2 = w.rechoose_connectors(d, &mut rng).map_err(err)?;
            let v = qt.battery.decide(&eps.evaluate(&w).map_err(err)?, &eps.evaluate(&w2).map_err(err)?).map_err(err)?;
            check(!v.is_distinct(), format!("{}: connectors of {}: {v}", g.name, b.display_path(&f)))?;
            tally.record(&v);
        }
        let mut done = 0;
        while done < 100 {
            let f = random_path(b, &flags, 12, &mut rng).ok_or("no base-set vertex")?;
            let Some(f2) = elementary_homotopies(b, &f).choose(&mut rng).cloned() else { continue };
            let v = qt.battery.decide(&eps.evaluate_path(&f).map_err(err)?, &eps.evaluate_path(&f2).map_err(err)?).map_err(err)?;
            check(
                !v.is_distinct(),
                format!("{}: {} vs {}: {v}", g.name, b.display_path(&f), b.display_path(&f2)),
            )?;
            tally.record(&v);
            done += 1;
        }
    }
    check(tally.unknown * 20 <= tally.total(), format!("unknown rate too high: {}", tally_line(&tally)))?;
    Ok(tally_line(&tally))
}

fn criterion7(opts: &VkOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tally = Tally::default();
    for (g, qt) in quotients(opts)? {
        let d = &qt.d;
        let eps = Epsilon::new(d, &qt.q.quotient_map, &qt.q.presentation, &qt.battery).map_err(err)?;
        let e = &d.cover.total;
        let flags = d.total_fiber();
        for _ in 0..100 {
            let path = random_path(e, &flags, 12, &mut rng).ok_or("no vertex over the base set")?;
            let lhs = eps.evaluate_path(&d.cover.map.map_path(&path)).map_err(err)?;
            let rhs = qt.q.quotient_map.apply(&d.middle.path_word(e, &path).map_err(err)?).map_err(err)?;
            let v = qt.battery.decide(&lhs, &rhs).map_err(err)?;
            check(!v.is_distinct(), format!("{}: {}: {v}", g.name, e.display_path(&path)))?;
            tally.record(&v);
        }
    }
    Ok(tally_line(&tally))
}

fn criterion8(opts: &VkOptions) -> Outcome {
    let mut tally = Tally::default();
    for seed in 0..100 {
        let i = random_instance(seed, &Bounds::default()).map_err(err)?;
        let run = run_vk(&i.cover, &i.base_set, opts).map_err(|e| format!("seed {seed}: {e}"))?;
        check(run.report.passed(), format!("seed {seed}: {:?}", run.report.failures))?;
        tally.add(&run.report.verdicts());
    }
    check(tally.distinct == 0, tally_line(&tally))?;
    Ok(format!("100 instances, {}", tally_line(&tally)))
}

fn criterion9(opts: &VkOptions) -> Outcome {
    let mut distinct = 0;
    let mut widened = 0;
    let mut runs = 0;
    let mut one = |name: String, r: vkampen::vkcheck::CrosscheckReport| -> Result<(), String> {
        check(r.agree(), format!("{name}: {} {:?}", r.verdict(), r.columns))?;
        distinct += r.distinct();
        widened += r.columns.iter().filter(|c| c.widened).count();
        runs += 1;
        Ok(())
    };
    for g in golden::corpus() {
        one(g.name.to_string(), crosscheck(&g.cover, &g.base_set, opts).map_err(err)?)?;
    }
    for seed in 0..25 {
        let i = random_instance(1000 + seed, &Bounds::default()).map_err(err)?;
        one(format!("seed {}", 1000 + seed), crosscheck(&i.cover, &i.base_set, opts).map_err(err)?)?;
    }
    check(distinct == 0, format!("{distinct} distinct"))?;
    Ok(format!("{runs} cross-checks agree, 0 distinct, {widened} derived columns run on all vertices"))
}

fn criterion10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let groups = small_groups(6);
    let mut factored = 0;
    for (g, d) in diagrams()? {
        let (lower, mid) = (&d.lower.presentation, &d.middle.presentation);
        let q = coequalize(lower, mid, &d.alpha, &d.beta).map_err(err)?;
        for _ in 0..20 {
            let t = groups.choose(&mut rng).expect("groups");
            let dv = random_coequalizing_valuation(&mut rng, lower, mid, &d.alpha, &d.beta, t, 100_000)
                .ok_or(format!("{}: no coequalizing morphism into {}", g.name, t.name()))?;
            for a in lower.arrow_ids() {
                check(
                    dv.eval(t, d.alpha.image(a)) == dv.eval(t, d.beta.image(a)),
                    format!("{}: sampled morphism does not coequalize", g.name),
                )?;
            }
            let f = factor_through_quotient(&q, mid, t, &dv).ok_or(format!("{}: no factoring into {}", g.name, t.name()))?;
            for _ in 0..20 {
                let w = common::random_word(mid, 10, &mut rng);
                let via = f.eval(t, &q.quotient_map.apply(&w).map_err(err)?);
                check(via == dv.eval(t, &w), format!("{}: factoring differs on a word", g.name))?;
            }
            factored += 1;
        }
    }
    Ok(format!("{factored} morphisms factored"))
}

fn main() -> ExitCode {
    let opts = VkOptions::default();
    let criteria: Vec<(usize, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Duration::from_secs(1), Box::new(move || criterion1(&opts))),
        (2, Duration::from_secs(1), Box::new(move || criterion2(&opts))),
        (3, Duration::from_secs(1), Box::new(move || criterion3(&opts))),
        (4, Duration::from_secs(5), Box::new(move || criterion4(&opts))),
        (5, Duration::from_secs(10), Box::new(criterion5)),
        (6, Duration::from_secs(60), Box::new(move || criterion6(&opts))),
        (7, Duration::from_secs(60), Box::new(move || criterion7(&opts))),
        (8, Duration::from_secs(300), Box::new(move || criterion8(&opts))),
        (9, Duration::from_secs(300), Box::new(move || criterion9(&opts))),
        (10, Duration::from_secs(60), Box::new(criterion10)),
    ];
    let mut failed = 0;
    for (n, limit, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let line = match outcome {
            Ok(detail) if elapsed <= limit => format!("PASS criterion {n:>2} ({elapsed:.2?} of {limit:?}): {detail}"),
            Ok(detail) => format!("FAIL criterion {n:>2} (too slow: {elapsed:.2?} of {limit:?}): {detail}"),
            Err(why) => format!("FAIL criterion {n:>2} ({elapsed:.2?}): {why}"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
