use proptest::prelude::*;

use vkampen::colimits::{abelian_invariants, coequalize, vertex_group};
use vkampen::complex::{BaseSet, Subcomplex};
use vkampen::golden;
use vkampen::pi1::{induced_functors, pi1};
use vkampen::presentation::{GroupoidPresentation, ObjectId, Word};
use vkampen::vkcheck::{
    crosscheck, decide_equal, random_instance, run_vk, Battery, BatteryConfig, Bounds, EqualReason, Verdict,
    VkOptions,
};
use vkampen::Error;

fn one_object(gens: &[&str], rels: &[&str]) -> GroupoidPresentation {
    let mut p = GroupoidPresentation::trivial("*");
    let o = ObjectId(0);
    for g in gens {
        p.add_arrow(*g, o, o).unwrap();
    }
    for r in rels {
        let w = p.parse_word("*", r).unwrap();
        p.add_relator(w, Word::identity(o)).unwrap();
    }
    p
}

#[test]
fn decide_equal_examples() {
    let cfg = BatteryConfig::default();
    let free = one_object(&["a"], &[]);
    let a = free.parse_word("*", "a").unwrap();
    let one = free.parse_word("*", "").unwrap();
    assert!(matches!(decide_equal(&free, &a, &a, &cfg).unwrap(), Verdict::Equal(EqualReason::Syntactic)));
    assert!(decide_equal(&free, &a, &one, &cfg).unwrap().is_distinct());
    let z2 = one_object(&["a"], &["a a"]);
    let aa = z2.parse_word("*", "a a").unwrap();
    let one = z2.parse_word("*", "").unwrap();
    assert!(matches!(decide_equal(&z2, &aa, &one, &cfg).unwrap(), Verdict::Equal(EqualReason::Rewriting { .. })));
}

#[test]
fn distinct_witnesses_replay() {
    let cfg = BatteryConfig::default();
    let s3 = one_object(&["a", "b"], &["a a", "b b b", "a b a b"]);
    let battery = Battery::new(&s3, &cfg).unwrap();
    let u = s3.parse_word("*", "a b").unwrap();
    let v = s3.parse_word("*", "b a").unwrap();
    let Verdict::Distinct(sep) = battery.decide(&u, &v).unwrap() else { panic!("S3 is not abelian") };
    assert!(battery.verify_separation(&u, &v, &sep).unwrap());
}

#[test]
fn two_arcs_need_both_base_points() {
    let g = golden::circle_two_arcs();
    let v0 = g.cover.base.vertex_by_name("v0").unwrap();
    match run_vk(&g.cover, &BaseSet::from([v0]), &VkOptions::default()) {
        Err(Error::Hypothesis { components }) => assert!(components.iter().all(|c| c.contains("(over v1)"))),
        other => panic!("expected a hypothesis failure, got {:?}", other.map(|r| r.report)),
    }
}

#[test]
fn one_piece_cover_agrees_absolutely() {
    for g in golden::corpus() {
        let b = &g.cover.base;
        let c = vkampen::complex::cover_to_map(b, vec![Subcomplex::whole(b, "B")]).unwrap();
        let r = crosscheck(&c, &g.base_set, &VkOptions::default()).unwrap();
        assert_eq!(r.verdict(), "AGREE (absolute)", "{}", g.name);
    }
}

/// Coequalizing a map with itself forgets the gluing, which the
/// comparison must notice.
#[test]
fn dropping_the_gluing_is_detected() {
    let g = golden::circle_two_arcs();
    let d = induced_functors(&g.cover, &g.base_set).unwrap();
    let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.alpha).unwrap();
    for o in q.presentation.object_ids() {
        let vg = vertex_group(&q.presentation, o).unwrap();
        assert_ne!(abelian_invariants(&vg.presentation).unwrap(), g.invariants);
    }
    // the hexagon is itself a circle, but the two sheets stay apart
    let g = golden::circle_double_cover();
    let d = induced_functors(&g.cover, &g.base_set).unwrap();
    let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.alpha).unwrap();
    assert_eq!((q.presentation.object_count(), d.target.presentation.object_count()), (2, 1));
}

#[test]
fn direct_and_coequalizer_fingerprints_match_on_golden_examples() {
    for g in golden::corpus() {
        let run = run_vk(&g.cover, &g.base_set, &VkOptions::default()).unwrap();
        assert!(run.report.passed(), "{}", g.name);
        assert_eq!(run.report.vertices.len(), pi1(&g.cover.base, &g.base_set).unwrap().presentation.object_count());
        for v in &run.report.vertices {
            assert_eq!(v.coequalizer.abelian, g.invariants, "{} {}", g.name, v.vertex);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fork_commutes_on_random_instances(seed in 0u64..10_000) {
        let i = random_instance(seed, &Bounds::default()).unwrap();
        let d = induced_functors(&i.cover, &i.base_set).unwrap();
        prop_assert!(d.fork_commutes().unwrap());
    }

    #[test]
    fn split_covers_round_trip_by_proof(seed in 0u64..10_000) {
        let i = random_instance(seed, &Bounds::default()).unwrap();
        let run = run_vk(&i.cover, &i.base_set, &VkOptions::default()).unwrap();
        prop_assert!(run.report.passed());
        if i.cover.has_global_section() {
            let t = run.report.verdicts();
            prop_assert_eq!(t.equal, t.total());
        }
    }
}
