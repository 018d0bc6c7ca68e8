use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vkampen::colimits::{
    abelian_invariants, coequalize, coproduct, hom_count, small_groups, vertex_group, AbelianInvariants,
    FiniteGroup, LoopPresentation, TietzeMove, DEFAULT_HOM_BUDGET,
};
use vkampen::golden::{self, Golden};
use vkampen::pi1::{induced_functors, pi1};
use vkampen::presentation::{GroupoidPresentation, ObjectId, PresentationMorphism, Word};
use vkampen::vkcheck::{random_instance, Battery, BatteryConfig, Bounds};

fn interval() -> GroupoidPresentation {
    let mut p = GroupoidPresentation::new();
    let a = p.add_object("0").unwrap();
    let b = p.add_object("1").unwrap();
    p.add_arrow("i", a, b).unwrap();
    p
}

#[test]
fn coproduct_counts() {
    let (empty, inj) = coproduct(&[]);
    assert_eq!((empty.object_count(), empty.arrow_count(), inj.len()), (0, 0, 0));
    let (two, inj) = coproduct(&[interval(), interval()]);
    assert_eq!((two.object_count(), two.arrow_count(), two.relators().len()), (4, 2, 0));
    assert_eq!(inj.len(), 2);
}

#[test]
fn interval_coequalizes_to_the_integers() {
    let mut src = GroupoidPresentation::new();
    src.add_object("p").unwrap();
    src.add_object("q").unwrap();
    let mid = interval();
    let alpha = PresentationMorphism::new(&src, &mid, vec![ObjectId(0), ObjectId(0)], vec![]).unwrap();
    let beta = PresentationMorphism::new(&src, &mid, vec![ObjectId(1), ObjectId(1)], vec![]).unwrap();
    let q = coequalize(&src, &mid, &alpha, &beta).unwrap();
    assert_eq!((q.presentation.object_count(), q.presentation.arrow_count()), (1, 1));
    assert!(q.presentation.relators().is_empty());
    let inv = abelian_invariants(&q.presentation).unwrap();
    assert_eq!(inv, AbelianInvariants { free_rank: 1, torsion: vec![] });
}

#[test]
fn hom_count_examples() {
    let mut p = GroupoidPresentation::trivial("*");
    let a = p.add_arrow("a", ObjectId(0), ObjectId(0)).unwrap();
    assert_eq!(hom_count(&p, &FiniteGroup::cyclic(5), DEFAULT_HOM_BUDGET).unwrap(), 5);
    let aa = p.word(ObjectId(0), &[vkampen::presentation::Letter::new(a); 2]).unwrap();
    p.add_relator(aa, Word::identity(ObjectId(0))).unwrap();
    assert_eq!(hom_count(&p, &FiniteGroup::cyclic(3), DEFAULT_HOM_BUDGET).unwrap(), 1);
    // identity and the three transpositions
    assert_eq!(hom_count(&p, &FiniteGroup::symmetric3(), DEFAULT_HOM_BUDGET).unwrap(), 4);
}

fn quotient_coequalizes(g: &Golden) {
    let d = induced_functors(&g.cover, &g.base_set).unwrap();
    let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.beta).unwrap();
    let battery = Battery::new(&q.presentation, &BatteryConfig::default()).unwrap();
    for a in d.lower.presentation.arrow_ids() {
        let u = q.quotient_map.apply(d.alpha.image(a)).unwrap();
        let v = q.quotient_map.apply(d.beta.image(a)).unwrap();
        assert!(battery.decide(&u, &v).unwrap().is_equal(), "{}", g.name);
    }
}

#[test]
fn quotient_map_coequalizes_on_golden_examples() {
    for g in golden::corpus() {
        quotient_coequalizes(&g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn quotient_map_coequalizes_on_random_instances(seed in 0u64..10_000) {
        let i = random_instance(seed, &Bounds::default()).unwrap();
        let g = Golden {
            name: "random",
            cover: i.cover,
            base_set: i.base_set,
            invariants: AbelianInvariants { free_rank: 0, torsion: vec![] },
        };
        quotient_coequalizes(&g);
    }
}

/// Vertex group of the base at its first object, as a loop presentation.
fn base_group(g: &Golden) -> LoopPresentation {
    let p = pi1(&g.cover.base, &g.base_set).unwrap();
    let vg = vertex_group(&p.presentation, ObjectId(0)).unwrap();
    LoopPresentation::from_presentation(&vg.presentation).unwrap()
}

#[test]
fn invariants_survive_random_tietze_moves() {
    let groups = small_groups(6);
    for g in golden::corpus() {
        let start = base_group(&g);
        let p0 = start.to_presentation("*");
        let inv = abelian_invariants(&p0).unwrap();
        assert_eq!(inv, g.invariants, "{}", g.name);
        let counts: Vec<u64> = groups.iter().map(|t| hom_count(&p0, t, DEFAULT_HOM_BUDGET).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..30 {
            let mut p = start.clone();
            for _ in 0..4 {
                p = TietzeMove::random(&mut rng, &p).apply(&p);
            }
            let q = p.to_presentation("*");
            assert_eq!(abelian_invariants(&q).unwrap(), inv, "{} trial {trial}", g.name);
            let moved: Vec<u64> = groups.iter().map(|t| hom_count(&q, t, DEFAULT_HOM_BUDGET).unwrap()).collect();
            assert_eq!(moved, counts, "{} trial {trial}", g.name);
        }
    }
}
