use proptest::prelude::*;

use vkampen::complex::{
    check_hypothesis, cover_to_map, fiber_product, path_to_base, triple_product, verify_locally_sectionable,
    BaseSet, CellMap, Complex2, Subcomplex,
};
use vkampen::golden;
use vkampen::vkcheck::{random_instance, Bounds};

fn counts(c: &Complex2) -> (usize, usize, usize, usize) {
    (c.vertex_count(), c.edge_count(), c.face_count(), c.component_count())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn projections_agree_over_the_base(seed in 0u64..10_000) {
        let i = random_instance(seed, &Bounds::default()).unwrap();
        let c = &i.cover;
        let fp = fiber_product(&c.total, &c.map, &c.total, &c.map, &c.base).unwrap();
        prop_assert_eq!(c.map.after(&fp.pr1), c.map.after(&fp.pr2));
        prop_assert_eq!(c.map.after(&fp.pr1), fp.to_base.clone());
        fp.pr1.validate(&fp.complex, &c.total).unwrap();
        fp.pr2.validate(&fp.complex, &c.total).unwrap();
    }

    #[test]
    fn triple_product_is_symmetric(seed in 0u64..10_000) {
        let i = random_instance(seed, &Bounds::default()).unwrap();
        let c = &i.cover;
        let double = fiber_product(&c.total, &c.map, &c.total, &c.map, &c.base).unwrap();
        let left = triple_product(c, &double).unwrap();
        // E ×_B (E ×_B E), pairing on the other side
        let right = fiber_product(&c.total, &c.map, &double.complex, &double.to_base, &c.base).unwrap();
        prop_assert_eq!(counts(&left.complex), counts(&right.complex));
    }

    #[test]
    fn all_vertices_meet_every_component(seed in 0u64..10_000) {
        let i = random_instance(seed, &Bounds::default()).unwrap();
        let all: BaseSet = i.cover.base.vertex_ids().collect();
        prop_assert!(check_hypothesis(&i.cover, &all).unwrap().passed());
        prop_assert!(verify_locally_sectionable(&i.cover).passed());
    }
}

#[test]
fn one_piece_cover_pulls_back_to_the_base() {
    for g in golden::corpus() {
        let b = &g.cover.base;
        let c = cover_to_map(b, vec![Subcomplex::whole(b, "B")]).unwrap();
        let fp = fiber_product(&c.total, &c.map, &c.total, &c.map, b).unwrap();
        assert_eq!(counts(&fp.complex), counts(b), "{}", g.name);
        assert!(c.has_global_section());
        let id = CellMap::identity(b);
        let diag = fiber_product(b, &id, b, &id, b).unwrap();
        assert_eq!(counts(&diag.complex), counts(b));
    }
}

#[test]
fn double_cover_pair_space_has_two_components() {
    let g = golden::circle_double_cover();
    let c = &g.cover;
    assert_eq!((c.total.vertex_count(), c.base.vertex_count()), (6, 3));
    let fp = fiber_product(&c.total, &c.map, &c.total, &c.map, &c.base).unwrap();
    assert_eq!(fp.complex.component_count(), 2);
    assert!(verify_locally_sectionable(c).passed());
    assert!(check_hypothesis(c, &g.base_set).unwrap().passed());
}

#[test]
fn path_to_base_examples() {
    let g = golden::circle_two_arcs();
    let c = &g.cover;
    let fp = fiber_product(&c.total, &c.map, &c.total, &c.map, &c.base).unwrap();
    let x = &fp.complex;
    // in the U1 ∩ U2 pieces every vertex is already over S
    let flags: Vec<bool> = (0..x.vertex_count()).map(|_| true).collect();
    for v in x.vertex_ids() {
        assert!(path_to_base(x, v, &flags).unwrap().is_empty());
    }
    let b = &c.base;
    let p = path_to_base(b, b.vertex_by_name("v0").unwrap(), &[false, true]).unwrap();
    assert_eq!(b.display_path(&p), "a");
}
