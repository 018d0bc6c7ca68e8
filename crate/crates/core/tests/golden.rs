use std::time::Instant;

use vkampen::colimits::{abelian_invariants, vertex_group};
use vkampen::golden;
use vkampen::pi1::pi1;
use vkampen::vkcheck::{run_vk, VkOptions};

#[test]
fn golden_examples_pass_run_vk() {
    let opts = VkOptions::default();
    for g in golden::corpus() {
        let t = Instant::now();
        let run = run_vk(&g.cover, &g.base_set, &opts).unwrap();
        let r = &run.report;
        println!("{}: {:?} {:?} {:?}", g.name, t.elapsed(), r.verdicts(), r.failures);
        assert!(r.passed(), "{}: {r:?}", g.name);
        for v in &r.vertices {
            assert_eq!(v.direct.abelian, g.invariants, "{}", g.name);
        }
    }
}

#[test]
fn golden_direct_invariants() {
    for g in golden::corpus() {
        let p = pi1(&g.cover.base, &g.base_set).unwrap();
        for o in p.presentation.object_ids() {
            let vg = vertex_group(&p.presentation, o).unwrap();
            assert_eq!(abelian_invariants(&vg.presentation).unwrap(), g.invariants, "{}", g.name);
        }
    }
}
