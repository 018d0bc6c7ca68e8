//! Covers by subcomplexes, sections, fiber products and the base-set
//! hypothesis.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{CellMap, Complex2, EdgeId, EdgePath, FaceId, Step, VertexId};
use crate::error::{Error, Result};

pub type BaseSet = BTreeSet<VertexId>;

/// A closed subcomplex, as membership flags over the cells of its complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subcomplex {
    pub name: String,
    pub vertices: Vec<bool>,
    pub edges: Vec<bool>,
    pub faces: Vec<bool>,
}

impl Subcomplex {
    pub fn empty(c: &Complex2, name: impl Into<String>) -> Self {
        Subcomplex {
            name: name.into(),
            vertices: vec![false; c.vertex_count()],
            edges: vec![false; c.edge_count()],
            faces: vec![false; c.face_count()],
        }
    }

    pub fn whole(c: &Complex2, name: impl Into<String>) -> Self {
        Subcomplex {
            name: name.into(),
            vertices: vec![true; c.vertex_count()],
            edges: vec![true; c.edge_count()],
            faces: vec![true; c.face_count()],
        }
    }

    /// The smallest subcomplex containing the named cells.
    pub fn closure_of(
        c: &Complex2,
        name: impl Into<String>,
        vertices: &[VertexId],
        edges: &[EdgeId],
        faces: &[FaceId],
    ) -> Self {
        let mut s = Subcomplex::empty(c, name);
        for v in vertices {
            s.vertices[v.0] = true;
        }
        for e in edges {
            s.edges[e.0] = true;
        }
        for f in faces {
            s.faces[f.0] = true;
        }
        s.close(c);
        s
    }

    fn close(&mut self, c: &Complex2) {
        for f in c.face_ids() {
            if self.faces[f.0] {
                for s in &c.face(f).boundary.steps {
                    self.edges[s.edge.0] = true;
                }
            }
        }
        for e in c.edge_ids() {
            if self.edges[e.0] {
                let edge = c.edge(e);
                self.vertices[edge.src.0] = true;
                self.vertices[edge.dst.0] = true;
            }
        }
    }

    pub fn contains_path(&self, p: &EdgePath) -> bool {
        self.vertices[p.start.0] && p.steps.iter().all(|s| self.edges[s.edge.0])
    }

    pub fn is_everything(&self) -> bool {
        self.vertices.iter().chain(&self.edges).chain(&self.faces).all(|&b| b)
    }
}

/// A section over one piece: base cells of the piece to cells of the total
/// complex. Cells outside the piece map to `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub vertex: Vec<Option<VertexId>>,
    pub edge: Vec<Option<EdgeId>>,
    pub face: Vec<Option<FaceId>>,
}

impl Section {
    pub fn map_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.vertex[v.0]
    }

    pub fn map_path(&self, p: &EdgePath) -> Option<EdgePath> {
        let start = self.vertex[p.start.0]?;
        let steps = p
            .steps
            .iter()
            .map(|s| self.edge[s.edge.0].map(|edge| Step { edge, reversed: s.reversed }))
            .collect::<Option<Vec<_>>>()?;
        Some(EdgePath { start, steps })
    }
}

/// A cell map `p: total → base` with a family of base pieces and a chosen
/// section over each piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionedCover {
    pub base: Complex2,
    pub total: Complex2,
    pub map: CellMap,
    pub pieces: Vec<Subcomplex>,
    pub sections: Vec<Section>,
}

impl SectionedCover {
    /// Index of the first piece containing edge `e`.
    pub fn first_piece_with_edge(&self, e: EdgeId) -> Option<usize> {
        self.pieces.iter().position(|u| u.edges[e.0])
    }

    pub fn first_piece_with_vertex(&self, v: VertexId) -> Option<usize> {
        self.pieces.iter().position(|u| u.vertices[v.0])
    }

    /// Whether some piece is the whole base, i.e. `p` has a global section.
    pub fn has_global_section(&self) -> bool {
        self.pieces.iter().any(Subcomplex::is_everything)
    }

    /// Vertices of `X` lying over `S` under `to_base`.
    pub fn fiber_flags(&self, to_base: &CellMap, s: &BaseSet) -> Vec<bool> {
        to_base.vertex_map.iter().map(|v| s.contains(v)).collect()
    }
}

fn uncovered(base: &Complex2, pieces: &[Subcomplex]) -> Vec<String> {
    let mut out = Vec::new();
    for v in base.vertex_ids() {
        if !pieces.iter().any(|u| u.vertices[v.0]) {
            out.push(base.vertex_name(v).to_string());
        }
    }
    for e in base.edge_ids() {
        if !pieces.iter().any(|u| u.edges[e.0]) {
            out.push(base.edge(e).name.clone());
        }
    }
    for f in base.face_ids() {
        if !pieces.iter().any(|u| u.faces[f.0]) {
            out.push(base.face(f).name.clone());
        }
    }
    out
}

/// `E` is the disjoint union of the pieces, `p` the inclusions, and the
/// sections the coproduct injections. Cells of `E` are named `cell@piece`.
pub fn cover_to_map(base: &Complex2, pieces: Vec<Subcomplex>) -> Result<SectionedCover> {
    let missing = uncovered(base, &pieces);
    if !missing.is_empty() {
        return Err(Error::Coverage(missing));
    }
    let mut total = Complex2::new();
    let mut map = CellMap { vertex_map: vec![], edge_map: vec![], face_map: vec![] };
    let mut sections = Vec::with_capacity(pieces.len());
    for u in &pieces {
        let mut s = Section {
            vertex: vec![None; base.vertex_count()],
            edge: vec![None; base.edge_count()],
            face: vec![None; base.face_count()],
        };
        for v in base.vertex_ids().filter(|v| u.vertices[v.0]) {
            s.vertex[v.0] = Some(total.add_vertex(format!("{}@{}", base.vertex_name(v), u.name))?);
            map.vertex_map.push(v);
        }
        for e in base.edge_ids().filter(|e| u.edges[e.0]) {
            let edge = base.edge(e);
            let (a, b) = (s.vertex[edge.src.0], s.vertex[edge.dst.0]);
            let (a, b) = a.zip(b).ok_or_else(|| Error::Structural(format!("piece `{}` is not closed", u.name)))?;
            s.edge[e.0] = Some(total.add_edge(format!("{}@{}", edge.name, u.name), a, b)?);
            map.edge_map.push(e);
        }
        for f in base.face_ids().filter(|f| u.faces[f.0]) {
            let face = base.face(f);
            let boundary = s
                .map_path(&face.boundary)
                .ok_or_else(|| Error::Structural(format!("piece `{}` is not closed", u.name)))?;
            s.face[f.0] = Some(total.add_face(format!("{}@{}", face.name, u.name), boundary)?);
            map.face_map.push(f);
        }
        sections.push(s);
    }
    Ok(SectionedCover { base: base.clone(), total, map, pieces, sections })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    /// Description of the first failing cell, if any.
    pub failure: Option<String>,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that `p` is a cell map, that the pieces cover the base, and that
/// every section is a cell map over its piece with `p∘s = id`.
pub fn verify_locally_sectionable(c: &SectionedCover) -> SectionReport {
    SectionReport { failure: first_section_failure(c).err() }
}

fn first_section_failure(c: &SectionedCover) -> std::result::Result<(), String> {
    let (b, e) = (&c.base, &c.total);
    c.map.validate(e, b).map_err(|err| err.to_string())?;
    let missing = uncovered(b, &c.pieces);
    if !missing.is_empty() {
        return Err(format!("not covered: {}", missing.join(", ")));
    }
    if c.sections.len() != c.pieces.len() {
        return Err("number of sections differs from number of pieces".into());
    }
    for (u, s) in c.pieces.iter().zip(&c.sections) {
        let shape_ok = s.vertex.len() == b.vertex_count()
            && s.edge.len() == b.edge_count()
            && s.face.len() == b.face_count();
        if !shape_ok {
            return Err(format!("section over `{}` has the wrong shape", u.name));
        }
        for v in b.vertex_ids() {
            let name = b.vertex_name(v);
            match (u.vertices[v.0], s.vertex[v.0]) {
                (true, Some(x)) if x.0 < e.vertex_count() && c.map.vertex_map[x.0] == v => {}
                (false, None) => {}
                _ => return Err(format!("section over `{}`: vertex `{name}`", u.name)),
            }
        }
        for id in b.edge_ids() {
            let edge = b.edge(id);
            let ok = match (u.edges[id.0], s.edge[id.0]) {
                (true, Some(x)) => {
                    x.0 < e.edge_count()
                        && c.map.edge_map[x.0] == id
                        && Some(e.edge(x).src) == s.vertex[edge.src.0]
                        && Some(e.edge(x).dst) == s.vertex[edge.dst.0]
                }
                (false, None) => true,
                _ => false,
            };
            if !ok {
                return Err(format!("section over `{}`: edge `{}`", u.name, edge.name));
            }
        }
        for id in b.face_ids() {
            let face = b.face(id);
            let ok = match (u.faces[id.0], s.face[id.0]) {
                (true, Some(x)) => {
                    x.0 < e.face_count()
                        && c.map.face_map[x.0] == id
                        && s.map_path(&face.boundary).as_ref() == Some(&e.face(x).boundary)
                }
                (false, None) => true,
                _ => false,
            };
            if !ok {
                return Err(format!("section over `{}`: face `{}`", u.name, face.name));
            }
        }
    }
    Ok(())
}

/// `X ×_B Y` with its projections, plus the composite map to the base.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub complex: Complex2,
    pub pr1: CellMap,
    pub pr2: CellMap,
    pub to_base: CellMap,
    vertex_index: HashMap<(VertexId, VertexId), VertexId>,
    edge_index: HashMap<(EdgeId, EdgeId), EdgeId>,
    face_index: HashMap<(FaceId, FaceId), FaceId>,
}

impl FiberProduct {
    pub fn pair_vertex(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        self.vertex_index.get(&(a, b)).copied()
    }

    pub fn pair_edge(&self, a: EdgeId, b: EdgeId) -> Option<EdgeId> {
        self.edge_index.get(&(a, b)).copied()
    }

    pub fn pair_face(&self, a: FaceId, b: FaceId) -> Option<FaceId> {
        self.face_index.get(&(a, b)).copied()
    }

    /// The path `(f, g)` for two paths with equal images step by step.
    pub fn pair_path(&self, f: &EdgePath, g: &EdgePath) -> Option<EdgePath> {
        if f.len() != g.len() {
            return None;
        }
        let start = self.pair_vertex(f.start, g.start)?;
        let steps = f
            .steps
            .iter()
            .zip(&g.steps)
            .map(|(s, t)| {
                (s.reversed == t.reversed)
                    .then(|| self.pair_edge(s.edge, t.edge).map(|edge| Step { edge, reversed: s.reversed }))
                    .flatten()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(EdgePath { start, steps })
    }
}

/// Cellwise pullback of `p: X → B` and `q: Y → B`. Cells are pairs with
/// equal image; pair cells are named `(a,b)`.
pub fn fiber_product(
    x: &Complex2,
    p: &CellMap,
    y: &Complex2,
    q: &CellMap,
    base: &Complex2,
) -> Result<FiberProduct> {
    p.validate(x, base)?;
    q.validate(y, base)?;
    let mut complex = Complex2::new();
    let (mut pr1, mut pr2, mut to_base) = (
        CellMap { vertex_map: vec![], edge_map: vec![], face_map: vec![] },
        CellMap { vertex_map: vec![], edge_map: vec![], face_map: vec![] },
        CellMap { vertex_map: vec![], edge_map: vec![], face_map: vec![] },
    );
    let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, v) in q.vertex_map.iter().enumerate() {
        over.entry(v.0).or_default().push(i);
    }
    let mut vertex_index = HashMap::new();
    for a in x.vertex_ids() {
        let img = p.vertex_map[a.0];
        for &b in over.get(&img.0).map_or(&[][..], |v| v) {
            let b = VertexId(b);
            let id = complex.add_vertex(format!("({},{})", x.vertex_name(a), y.vertex_name(b)))?;
            vertex_index.insert((a, b), id);
            pr1.vertex_map.push(a);
            pr2.vertex_map.push(b);
            to_base.vertex_map.push(img);
        }
    }
    let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in q.edge_map.iter().enumerate() {
        over.entry(e.0).or_default().push(i);
    }
    let mut edge_index = HashMap::new();
    for a in x.edge_ids() {
        let img = p.edge_map[a.0];
        for &b in over.get(&img.0).map_or(&[][..], |v| v) {
            let b = EdgeId(b);
            let (ea, eb) = (x.edge(a), y.edge(b));
            let src = vertex_index[&(ea.src, eb.src)];
            let dst = vertex_index[&(ea.dst, eb.dst)];
            let id = complex.add_edge(format!("({},{})", ea.name, eb.name), src, dst)?;
            edge_index.insert((a, b), id);
            pr1.edge_map.push(a);
            pr2.edge_map.push(b);
            to_base.edge_map.push(img);
        }
    }
    let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, f) in q.face_map.iter().enumerate() {
        over.entry(f.0).or_default().push(i);
    }
    let mut product =
        FiberProduct { complex, pr1, pr2, to_base, vertex_index, edge_index, face_index: HashMap::new() };
    for a in x.face_ids() {
        let img = p.face_map[a.0];
        for &b in over.get(&img.0).map_or(&[][..], |v| v) {
            let b = FaceId(b);
            let (fa, fb) = (x.face(a), y.face(b));
            let boundary = product
                .pair_path(&fa.boundary, &fb.boundary)
                .ok_or_else(|| Error::Structural(format!("faces `{}` and `{}` do not match", fa.name, fb.name)))?;
            let id = product.complex.add_face(format!("({},{})", fa.name, fb.name), boundary)?;
            product.face_index.insert((a, b), id);
            product.pr1.face_map.push(a);
            product.pr2.face_map.push(b);
            product.to_base.face_map.push(img);
        }
    }
    Ok(product)
}

/// `E ×_B E ×_B E` as `(E ×_B E) ×_B E`, with its three projections.
#[derive(Debug, Clone)]
pub struct TripleProduct {
    pub complex: Complex2,
    pub q1: CellMap,
    pub q2: CellMap,
    pub q3: CellMap,
    pub to_base: CellMap,
}

pub fn triple_product(c: &SectionedCover, double: &FiberProduct) -> Result<TripleProduct> {
    let t = fiber_product(&double.complex, &double.to_base, &c.total, &c.map, &c.base)?;
    Ok(TripleProduct {
        q1: double.pr1.after(&t.pr1),
        q2: double.pr2.after(&t.pr1),
        q3: t.pr2,
        to_base: t.to_base,
        complex: t.complex,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub components: usize,
    /// Components of the triple product with no vertex over the base set,
    /// each as `representative (over base vertex)`.
    pub missing: Vec<String>,
    /// Base vertex under each representative in `missing`.
    pub missing_over: Vec<VertexId>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::Hypothesis { components: self.missing })
        }
    }
}

/// Whether `S` meets every path-component of `E ×_B E ×_B E`.
pub fn check_hypothesis(c: &SectionedCover, s: &BaseSet) -> Result<HypothesisReport> {
    let double = fiber_product(&c.total, &c.map, &c.total, &c.map, &c.base)?;
    let triple = triple_product(c, &double)?;
    Ok(hypothesis_on(&triple.complex, &triple.to_base, &c.base, s))
}

pub(crate) fn hypothesis_on(x: &Complex2, to_base: &CellMap, base: &Complex2, s: &BaseSet) -> HypothesisReport {
    let comp = x.components();
    let mut hit = vec![false; x.vertex_count()];
    for v in x.vertex_ids() {
        if s.contains(&to_base.vertex_map[v.0]) {
            hit[comp[v.0]] = true;
        }
    }
    let roots: Vec<usize> = (0..x.vertex_count()).filter(|&i| comp[i] == i).collect();
    let bad: Vec<usize> = roots.iter().copied().filter(|&r| !hit[r]).collect();
    let missing = bad
        .iter()
        .map(|&r| format!("{} (over {})", x.vertex_name(VertexId(r)), base.vertex_name(to_base.vertex_map[r])))
        .collect();
    let missing_over = bad.iter().map(|&r| to_base.vertex_map[r]).collect();
    HypothesisReport { components: roots.len(), missing, missing_over }
}

/// Shortest edge path from `start` to a vertex flagged in `target`,
/// exploring steps in edge-id order.
pub fn path_to_base(x: &Complex2, start: VertexId, target: &[bool]) -> Result<EdgePath> {
    let mut prev: Vec<Option<Step>> = vec![None; x.vertex_count()];
    let mut seen = vec![false; x.vertex_count()];
    seen[start.0] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if target[v.0] {
            let mut steps = Vec::new();
            let mut at = v;
            while at != start {
                let s = prev[at.0].expect("visited vertices have a parent");
                steps.push(s);
                at = x.step_endpoints(s).0;
            }
            steps.reverse();
            return Ok(EdgePath { start, steps });
        }
        for &s in x.steps_from(v) {
            let w = x.step_endpoints(s).1;
            if !seen[w.0] {
                seen[w.0] = true;
                prev[w.0] = Some(s);
                queue.push_back(w);
            }
        }
    }
    Err(Error::Hypothesis { components: vec![x.vertex_name(start).to_string()] })
}

/// Closed star of every vertex, named `st(v)`.
pub fn star_cover(b: &Complex2) -> Vec<Subcomplex> {
    b.vertex_ids()
        .map(|v| {
            let edges: Vec<EdgeId> = b.steps_from(v).iter().map(|s| s.edge).collect();
            let faces: Vec<FaceId> = b
                .face_ids()
                .filter(|&f| b.face(f).boundary.vertices(b).contains(&v))
                .collect();
            Subcomplex::closure_of(b, format!("st({})", b.vertex_name(v)), &[v], &edges, &faces)
        })
        .collect()
}

/// Backtracking search for a section of `p` over the piece `u`.
pub fn find_section(e: &Complex2, b: &Complex2, p: &CellMap, u: &Subcomplex) -> Option<Section> {
    let mut fibers_v: Vec<Vec<VertexId>> = vec![Vec::new(); b.vertex_count()];
    for x in e.vertex_ids() {
        fibers_v[p.vertex_map[x.0].0].push(x);
    }
    let mut fibers_e: Vec<Vec<EdgeId>> = vec![Vec::new(); b.edge_count()];
    for x in e.edge_ids() {
        fibers_e[p.edge_map[x.0].0].push(x);
    }
    let mut fibers_f: Vec<Vec<FaceId>> = vec![Vec::new(); b.face_count()];
    for x in e.face_ids() {
        fibers_f[p.face_map[x.0].0].push(x);
    }
    // cells in search order: each vertex, then edges whose endpoints are done
    let mut order: Vec<(u8, usize)> = Vec::new();
    let mut placed = vec![false; b.edge_count()];
    let mut done = vec![false; b.vertex_count()];
    for v in b.vertex_ids().filter(|v| u.vertices[v.0]) {
        order.push((0, v.0));
        done[v.0] = true;
        for ed in b.edge_ids() {
            let edge = b.edge(ed);
            if u.edges[ed.0] && !placed[ed.0] && done[edge.src.0] && done[edge.dst.0] {
                placed[ed.0] = true;
                order.push((1, ed.0));
            }
        }
    }
    order.extend(b.face_ids().filter(|f| u.faces[f.0]).map(|f| (2, f.0)));
    let mut s = Section {
        vertex: vec![None; b.vertex_count()],
        edge: vec![None; b.edge_count()],
        face: vec![None; b.face_count()],
    };
    fn go(
        k: usize,
        order: &[(u8, usize)],
        s: &mut Section,
        cx: (&Complex2, &Complex2),
        fibers: (&[Vec<VertexId>], &[Vec<EdgeId>], &[Vec<FaceId>]),
    ) -> bool {
        let (e, b) = cx;
        let Some(&(kind, i)) = order.get(k) else { return true };
        match kind {
            0 => {
                for &x in &fibers.0[i] {
                    s.vertex[i] = Some(x);
                    if go(k + 1, order, s, cx, fibers) {
                        return true;
                    }
                }
                s.vertex[i] = None;
            }
            1 => {
                let edge = b.edge(EdgeId(i));
                for &x in &fibers.1[i] {
                    let ex = e.edge(x);
                    if Some(ex.src) == s.vertex[edge.src.0] && Some(ex.dst) == s.vertex[edge.dst.0] {
                        s.edge[i] = Some(x);
                        if go(k + 1, order, s, cx, fibers) {
                            return true;
                        }
                    }
                }
                s.edge[i] = None;
            }
            _ => {
                let want = s.map_path(&b.face(FaceId(i)).boundary);
                for &x in &fibers.2[i] {
                    if want.as_ref() == Some(&e.face(x).boundary) {
                        s.face[i] = Some(x);
                        if go(k + 1, order, s, cx, fibers) {
                            return true;
                        }
                    }
                }
                s.face[i] = None;
            }
        }
        false
    }
    go(0, &order, &mut s, (e, b), (&fibers_v, &fibers_e, &fibers_f)).then_some(s)
}
