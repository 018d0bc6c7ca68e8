//! Seeded random complexes with covers and admissible base sets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{
    check_hypothesis, cover_to_map, path_to_base, star_cover, BaseSet, Complex2, EdgeId, EdgePath, FaceId,
    SectionedCover, Subcomplex, VertexId,
};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { vertices: 8, edges: 16, faces: 6 }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub cover: SectionedCover,
    pub base_set: BaseSet,
}

fn random_complex(rng: &mut ChaCha8Rng, bounds: &Bounds) -> Result<Complex2> {
    let mut b = Complex2::new();
    let nv = rng.gen_range(1..=bounds.vertices.max(1));
    for i in 0..nv {
        b.add_vertex(format!("v{i}"))?;
    }
    let ne = rng.gen_range(0..=bounds.edges);
    for i in 0..ne {
        let (s, t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        b.add_edge(format!("e{i}"), VertexId(s), VertexId(t))?;
    }
    let nf = if ne == 0 { 0 } else { rng.gen_range(0..=bounds.faces) };
    let mut made = 0;
    for _ in 0..4 * nf {
        if made == nf {
            break;
        }
        let start = VertexId(rng.gen_range(0..nv));
        if b.steps_from(start).is_empty() {
            continue;
        }
        let mut walk = EdgePath::constant(start);
        let mut at = start;
        for _ in 0..rng.gen_range(1..=4) {
            let s = *b.steps_from(at).choose(rng).expect("walks stay in the component");
            walk.steps.push(s);
            at = b.step_endpoints(s).1;
        }
        let mut home = vec![false; nv];
        home[start.0] = true;
        let back = path_to_base(&b, at, &home)?;
        let closed = walk.then(&b, &back)?;
        // powers of a loop give torsion
        let mut boundary = closed.clone();
        for _ in 1..[1, 1, 2, 3][rng.gen_range(0..4)] {
            boundary = boundary.then(&b, &closed)?;
        }
        b.add_face(format!("f{made}"), boundary)?;
        made += 1;
    }
    Ok(b)
}

fn random_pieces(rng: &mut ChaCha8Rng, b: &Complex2) -> Vec<Subcomplex> {
    let k = rng.gen_range(2..=4);
    let mut chosen: Vec<(Vec<VertexId>, Vec<EdgeId>, Vec<FaceId>)> = vec![Default::default(); k];
    for v in b.vertex_ids() {
        if rng.gen_bool(0.3) {
            chosen[rng.gen_range(0..k)].0.push(v);
        }
    }
    // every cell lands in one random piece, and sometimes a second
    for e in b.edge_ids() {
        chosen[rng.gen_range(0..k)].1.push(e);
        if rng.gen_bool(0.3) {
            chosen[rng.gen_range(0..k)].1.push(e);
        }
    }
    for f in b.face_ids() {
        chosen[rng.gen_range(0..k)].2.push(f);
        if rng.gen_bool(0.3) {
            chosen[rng.gen_range(0..k)].2.push(f);
        }
    }
    for v in b.vertex_ids() {
        if b.steps_from(v).is_empty() {
            chosen[rng.gen_range(0..k)].0.push(v);
        }
    }
    chosen
        .into_iter()
        .enumerate()
        .map(|(i, (v, e, f))| Subcomplex::closure_of(b, format!("U{}", i + 1), &v, &e, &f))
        .collect()
}

/// A random complex within `bounds`, covered by vertex stars or by two to
/// four random subcomplexes, with a random base set enlarged until the
/// hypothesis holds.
pub fn random_instance(seed: u64, bounds: &Bounds) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_complex(&mut rng, bounds)?;
    let pieces = if rng.gen_bool(0.5) { star_cover(&b) } else { random_pieces(&mut rng, &b) };
    let cover = cover_to_map(&b, pieces)?;
    let mut base_set: BaseSet = b.vertex_ids().filter(|_| rng.gen_bool(0.3)).collect();
    if base_set.is_empty() {
        base_set.insert(VertexId(rng.gen_range(0..b.vertex_count())));
    }
    loop {
        let report = check_hypothesis(&cover, &base_set)?;
        match report.missing_over.first() {
            None => break,
            Some(&v) => {
                base_set.insert(v);
            }
        }
    }
    Ok(Instance { seed, cover, base_set })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        for seed in 0..20 {
            let a = random_instance(seed, &Bounds::default()).unwrap();
            let b = random_instance(seed, &Bounds::default()).unwrap();
            assert_eq!(a.cover.base.to_string(), b.cover.base.to_string());
            assert_eq!(a.cover.pieces, b.cover.pieces);
            assert_eq!(a.base_set, b.base_set);
        }
    }

    #[test]
    fn single_point_bounds() {
        let i = random_instance(7, &Bounds { vertices: 1, edges: 0, faces: 0 }).unwrap();
        assert_eq!(i.cover.base.vertex_count(), 1);
        assert_eq!(i.base_set.len(), 1);
    }

    #[test]
    fn instances_respect_bounds_and_hypothesis() {
        let bounds = Bounds::default();
        for seed in 0..40 {
            let i = random_instance(seed, &bounds).unwrap();
            let b = &i.cover.base;
            assert!(b.vertex_count() <= 8 && b.edge_count() <= 16 && b.face_count() <= 6);
            assert!(check_hypothesis(&i.cover, &i.base_set).unwrap().passed());
        }
    }
}
