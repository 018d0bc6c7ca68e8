//! Small reference complexes with covers, base sets and their known
//! abelianized fundamental groups.

use crate::colimits::AbelianInvariants;
use crate::complex::{
    cover_to_map, find_section, star_cover, BaseSet, CellMap, Complex2, EdgeId, EdgePath, Section, SectionedCover,
    Step, Subcomplex, VertexId,
};

#[derive(Debug, Clone)]
pub struct Golden {
    pub name: &'static str,
    pub cover: SectionedCover,
    pub base_set: BaseSet,
    /// Abelian invariants of every vertex group of the base.
    pub invariants: AbelianInvariants,
}

fn inv(free_rank: usize, torsion: &[i64]) -> AbelianInvariants {
    AbelianInvariants { free_rank, torsion: torsion.to_vec() }
}

fn all(b: &Complex2) -> BaseSet {
    b.vertex_ids().collect()
}

fn stars(name: &'static str, b: Complex2, invariants: AbelianInvariants) -> Golden {
    let cover = cover_to_map(&b, star_cover(&b)).expect("stars cover");
    let base_set = all(&b);
    Golden { name, cover, base_set, invariants }
}

fn path(c: &Complex2, start: usize, steps: &[(usize, bool)]) -> EdgePath {
    let p = EdgePath {
        start: VertexId(start),
        steps: steps.iter().map(|&(e, reversed)| Step { edge: EdgeId(e), reversed }).collect(),
    };
    c.check_path(&p).expect("golden paths are well formed");
    p
}

pub fn point() -> Golden {
    let mut b = Complex2::new();
    b.add_vertex("x").unwrap();
    let whole = Subcomplex::whole(&b, "B");
    let cover = cover_to_map(&b, vec![whole]).unwrap();
    Golden { name: "point", base_set: all(&b), cover, invariants: inv(0, &[]) }
}

/// Two vertices `v0`, `v1` joined by arcs `a: v0 → v1` and `b: v1 → v0`.
pub fn circle() -> Complex2 {
    let mut b = Complex2::new();
    let v0 = b.add_vertex("v0").unwrap();
    let v1 = b.add_vertex("v1").unwrap();
    b.add_edge("a", v0, v1).unwrap();
    b.add_edge("b", v1, v0).unwrap();
    b
}

/// The circle covered by its two arcs.
pub fn circle_two_arcs() -> Golden {
    let b = circle();
    let u1 = Subcomplex::closure_of(&b, "U1", &[], &[EdgeId(0)], &[]);
    let u2 = Subcomplex::closure_of(&b, "U2", &[], &[EdgeId(1)], &[]);
    let cover = cover_to_map(&b, vec![u1, u2]).unwrap();
    Golden { name: "circle-two-arcs", base_set: all(&b), cover, invariants: inv(1, &[]) }
}

/// The hexagon wrapping twice around the triangle, with vertex stars as
/// pieces and one branch chosen over each, based at `x`.
pub fn circle_double_cover() -> Golden {
    let mut b = Complex2::new();
    let names = ["x", "y", "z"];
    let xs: Vec<VertexId> = names.iter().map(|n| b.add_vertex(*n).unwrap()).collect();
    for (i, e) in ["a", "b", "c"].iter().enumerate() {
        b.add_edge(*e, xs[i], xs[(i + 1) % 3]).unwrap();
    }
    let mut e = Complex2::new();
    let ys: Vec<VertexId> = (0..6).map(|j| e.add_vertex(format!("{}{}", names[j % 3], j / 3)).unwrap()).collect();
    for j in 0..6 {
        e.add_edge(format!("{}{}", ["a", "b", "c"][j % 3], j / 3), ys[j], ys[(j + 1) % 6]).unwrap();
    }
    let p = CellMap::new(
        &e,
        &b,
        (0..6).map(|j| VertexId(j % 3)).collect(),
        (0..6).map(|j| EdgeId(j % 3)).collect(),
        vec![],
    )
    .unwrap();
    let pieces = star_cover(&b);
    let sections: Vec<Section> =
        pieces.iter().map(|u| find_section(&e, &b, &p, u).expect("stars are sectionable")).collect();
    let cover = SectionedCover { base: b, total: e, map: p, pieces, sections };
    Golden { name: "circle-double-cover", base_set: [xs[0]].into(), cover, invariants: inv(1, &[]) }
}

/// Three vertices around a circle, each carrying a loop `c_i`, with square
/// faces between consecutive loops. The last face is glued reversed when
/// `twisted`.
fn ring_of_squares(twisted: bool) -> Complex2 {
    let mut b = Complex2::new();
    let v: Vec<VertexId> = (0..3).map(|i| b.add_vertex(format!("v{i}")).unwrap()).collect();
    for i in 0..3 {
        b.add_edge(format!("h{i}"), v[i], v[(i + 1) % 3]).unwrap();
    }
    for i in 0..3 {
        b.add_edge(format!("c{i}"), v[i], v[i]).unwrap();
    }
    for i in 0..3 {
        let next = 3 + (i + 1) % 3;
        let flip = twisted && i == 2;
        let boundary = path(&b, i, &[(i, false), (next, flip), (i, true), (3 + i, true)]);
        b.add_face(format!("f{i}"), boundary).unwrap();
    }
    b
}

pub fn torus() -> Golden {
    stars("torus", ring_of_squares(false), inv(2, &[]))
}

pub fn klein() -> Golden {
    stars("klein", ring_of_squares(true), inv(1, &[2]))
}

/// The six-vertex triangulation of the projective plane.
pub fn rp2() -> Golden {
    const TRIANGLES: [[usize; 3]; 10] = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    let mut b = Complex2::new();
    for i in 0..6 {
        b.add_vertex(format!("p{i}")).unwrap();
    }
    let mut edges = std::collections::BTreeSet::new();
    for t in TRIANGLES {
        for k in 0..3 {
            let (u, w) = (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]));
            edges.insert((u, w));
        }
    }
    let mut id = std::collections::HashMap::new();
    for &(u, w) in &edges {
        let e = b.add_edge(format!("e{u}{w}"), VertexId(u), VertexId(w)).unwrap();
        id.insert((u, w), e.0);
    }
    for (n, t) in TRIANGLES.iter().enumerate() {
        let steps: Vec<(usize, bool)> = (0..3)
            .map(|k| {
                let (u, w) = (t[k], t[(k + 1) % 3]);
                (id[&(u.min(w), u.max(w))], u > w)
            })
            .collect();
        let boundary = path(&b, t[0], &steps);
        b.add_face(format!("t{n}"), boundary).unwrap();
    }
    stars("rp2", b, inv(0, &[2]))
}

/// Two circles through `x`, each subdivided once.
fn figure_eight_complex() -> Complex2 {
    let mut b = Complex2::new();
    let x = b.add_vertex("x").unwrap();
    let p = b.add_vertex("p").unwrap();
    let q = b.add_vertex("q").unwrap();
    b.add_edge("a", x, p).unwrap();
    b.add_edge("b", p, x).unwrap();
    b.add_edge("c", x, q).unwrap();
    b.add_edge("d", q, x).unwrap();
    b
}

pub fn wedge() -> Golden {
    stars("wedge", figure_eight_complex(), inv(2, &[]))
}

/// The figure eight covered by the arc `a c` through `x` and the two
/// returning arcs.
pub fn figure_eight() -> Golden {
    let b = figure_eight_complex();
    let u1 = Subcomplex::closure_of(&b, "U1", &[], &[EdgeId(0), EdgeId(2)], &[]);
    let u2 = Subcomplex::closure_of(&b, "U2", &[], &[EdgeId(1)], &[]);
    let u3 = Subcomplex::closure_of(&b, "U3", &[], &[EdgeId(3)], &[]);
    let cover = cover_to_map(&b, vec![u1, u2, u3]).unwrap();
    Golden { name: "figure-eight", base_set: all(&b), cover, invariants: inv(2, &[]) }
}

/// Every example except the point.
pub fn corpus() -> Vec<Golden> {
    vec![circle_two_arcs(), circle_double_cover(), torus(), rp2(), klein(), wedge(), figure_eight()]
}
