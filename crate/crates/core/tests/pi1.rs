use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vkampen::colimits::coequalize;
use vkampen::golden;
use vkampen::pi1::{
    associated_sequence, composite, elementary_homotopies, induced_functors, random_path, random_weight, weigh_path,
    Epsilon,
};
use vkampen::vkcheck::{random_instance, Battery, BatteryConfig, Bounds};

#[test]
fn loop_around_the_circle_evaluates_to_a_generator() {
    let g = golden::circle_two_arcs();
    let d = induced_functors(&g.cover, &g.base_set).unwrap();
    let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.beta).unwrap();
    let battery = Battery::new(&q.presentation, &BatteryConfig::default()).unwrap();
    let eps = Epsilon::new(&d, &q.quotient_map, &q.presentation, &battery).unwrap();
    let b = &d.cover.base;
    let lp = b.parse_path("v0", "a b").unwrap();
    let w = weigh_path(&d, &lp).unwrap();
    assert_eq!(w.n(), 2);
    let img = eps.evaluate(&w).unwrap();
    assert!(img.is_loop());
    let one = vkampen::presentation::Word::identity(img.source());
    assert!(battery.decide(&img, &one).unwrap().is_distinct());
    let twice = vkampen::presentation::compose(&img, &img).unwrap();
    assert!(battery.decide(&twice, &img).unwrap().is_distinct());
    let back = eps.evaluate_path(&b.parse_path("v0", "a a^-1").unwrap()).unwrap();
    assert!(back.is_identity());
}

#[test]
fn non_homotopic_paths_are_separated() {
    let g = golden::torus();
    let d = induced_functors(&g.cover, &g.base_set).unwrap();
    let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.beta).unwrap();
    let battery = Battery::new(&q.presentation, &BatteryConfig::default()).unwrap();
    let eps = Epsilon::new(&d, &q.quotient_map, &q.presentation, &battery).unwrap();
    let b = &d.cover.base;
    let h = eps.evaluate_path(&b.parse_path("v0", "h0 h1 h2").unwrap()).unwrap();
    let c = eps.evaluate_path(&b.parse_path("v0", "c0").unwrap()).unwrap();
    let hc = vkampen::presentation::compose(&h, &c).unwrap();
    let ch = vkampen::presentation::compose(&c, &h).unwrap();
    assert!(battery.decide(&hc, &ch).unwrap().is_equal());
    assert!(battery.decide(&h, &c).unwrap().is_distinct());
}

#[test]
fn homotopy_moves_keep_endpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in golden::corpus() {
        let b = &g.cover.base;
        let flags: Vec<bool> = b.vertex_ids().map(|v| g.base_set.contains(&v)).collect();
        for _ in 0..20 {
            let f = random_path(b, &flags, 8, &mut rng).unwrap();
            for h in elementary_homotopies(b, &f) {
                assert_ne!(h, f);
                b.check_path(&h).unwrap();
                assert_eq!((h.start, h.end(b)), (f.start, f.end(b)), "{}", g.name);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn associated_sequences_compose_and_recover_the_path(seed in 0u64..10_000) {
        let i = random_instance(seed, &Bounds::default()).unwrap();
        let d = induced_functors(&i.cover, &i.base_set).unwrap();
        let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.beta).unwrap();
        let b = &d.cover.base;
        let flags: Vec<bool> = b.vertex_ids().map(|v| i.base_set.contains(&v)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let f = random_path(b, &flags, 10, &mut rng).unwrap();
            let w = random_weight(&d, &f, &mut rng).unwrap();
            w.validate(&d).unwrap();
            let seq = associated_sequence(&d, &w).unwrap();
            prop_assert_eq!(seq.words.len(), w.n());
            // composable for the quotient map, which coequalizes the fork
            composite(&q.quotient_map, &seq).unwrap();
            prop_assert_eq!(composite(&d.gamma, &seq).unwrap(), d.target.path_word(b, &f).unwrap());
        }
    }
}
