//! Finite combinatorial 2-complexes, edge paths, and cell maps.

mod cover;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use cover::{
    check_hypothesis, cover_to_map, fiber_product, find_section, path_to_base, star_cover,
    triple_product, verify_locally_sectionable, BaseSet, FiberProduct, HypothesisReport, Section,
    SectionReport, SectionedCover, Subcomplex, TripleProduct,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FaceId(pub usize);

/// An edge traversed forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Step {
    pub edge: EdgeId,
    pub reversed: bool,
}

impl Step {
    pub fn forward(edge: EdgeId) -> Self {
        Step { edge, reversed: false }
    }

    pub fn inv(self) -> Self {
        Step { edge: self.edge, reversed: !self.reversed }
    }
}

/// An edge path. Not reduced: backtracks are kept as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EdgePath {
    pub start: VertexId,
    pub steps: Vec<Step>,
}

impl EdgePath {
    pub fn constant(v: VertexId) -> Self {
        EdgePath { start: v, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn inverse(&self, c: &Complex2) -> EdgePath {
        EdgePath { start: self.end(c), steps: self.steps.iter().rev().map(|s| s.inv()).collect() }
    }

    pub fn end(&self, c: &Complex2) -> VertexId {
        self.steps.last().map_or(self.start, |&s| c.step_endpoints(s).1)
    }

    /// `self` followed by `next`.
    pub fn then(&self, c: &Complex2, next: &EdgePath) -> Result<EdgePath> {
        if self.end(c) != next.start {
            return Err(Error::Composition(format!(
                "path ends at `{}` but the next starts at `{}`",
                c.vertex_name(self.end(c)),
                c.vertex_name(next.start)
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&next.steps);
        Ok(EdgePath { start: self.start, steps })
    }

    /// Subpath of steps `from..to`.
    pub fn slice(&self, c: &Complex2, from: usize, to: usize) -> EdgePath {
        let start = if from == 0 { self.start } else { c.step_endpoints(self.steps[from - 1]).1 };
        EdgePath { start, steps: self.steps[from..to].to_vec() }
    }

    /// Vertices visited, `len() + 1` of them.
    pub fn vertices(&self, c: &Complex2) -> Vec<VertexId> {
        let mut out = vec![self.start];
        for &s in &self.steps {
            out.push(c.step_endpoints(s).1);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub name: String,
    /// Closed path; its start is the face's base vertex.
    pub boundary: EdgePath,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Complex2 {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    #[serde(skip)]
    names: HashMap<(u8, String), usize>,
    /// Per vertex: incident edges as `(edge, leaves_backwards)`, sorted.
    #[serde(skip)]
    incidence: Vec<Vec<Step>>,
}

impl Complex2 {
    pub fn new() -> Self {
        Self::default()
    }

    fn claim(&mut self, kind: u8, name: &str, id: usize) -> Result<()> {
        if self.names.insert((kind, name.to_string()), id).is_some() {
            return Err(Error::Structural(format!("duplicate cell name `{name}`")));
        }
        Ok(())
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        self.claim(0, &name, self.vertices.len())?;
        self.vertices.push(name);
        self.incidence.push(Vec::new());
        Ok(VertexId(self.vertices.len() - 1))
    }

    pub fn add_edge(&mut self, name: impl Into<String>, src: VertexId, dst: VertexId) -> Result<EdgeId> {
        let name = name.into();
        for v in [src, dst] {
            if v.0 >= self.vertices.len() {
                return Err(Error::lookup("vertex", v.0));
            }
        }
        self.claim(1, &name, self.edges.len())?;
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge { name, src, dst });
        self.incidence[src.0].push(Step { edge: id, reversed: false });
        self.incidence[dst.0].push(Step { edge: id, reversed: true });
        Ok(id)
    }

    pub fn add_face(&mut self, name: impl Into<String>, boundary: EdgePath) -> Result<FaceId> {
        let name = name.into();
        self.check_path(&boundary)?;
        if boundary.end(self) != boundary.start {
            return Err(Error::Structural(format!("boundary of face `{name}` is not closed")));
        }
        self.claim(2, &name, self.faces.len())?;
        self.faces.push(Face { name, boundary });
        Ok(FaceId(self.faces.len() - 1))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId> {
        self.names.get(&(0, name.to_string())).map(|&i| VertexId(i)).ok_or_else(|| Error::lookup("vertex", name))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.names.get(&(1, name.to_string())).map(|&i| EdgeId(i)).ok_or_else(|| Error::lookup("edge", name))
    }

    pub fn face_by_name(&self, name: &str) -> Result<FaceId> {
        self.names.get(&(2, name.to_string())).map(|&i| FaceId(i)).ok_or_else(|| Error::lookup("face", name))
    }

    pub fn step_endpoints(&self, s: Step) -> (VertexId, VertexId) {
        let e = &self.edges[s.edge.0];
        if s.reversed {
            (e.dst, e.src)
        } else {
            (e.src, e.dst)
        }
    }

    /// Steps leaving `v`, ordered by edge id then direction.
    pub fn steps_from(&self, v: VertexId) -> &[Step] {
        &self.incidence[v.0]
    }

    pub fn check_path(&self, p: &EdgePath) -> Result<()> {
        if p.start.0 >= self.vertices.len() {
            return Err(Error::lookup("vertex", p.start.0));
        }
        let mut at = p.start;
        for &s in &p.steps {
            if s.edge.0 >= self.edges.len() {
                return Err(Error::lookup("edge", s.edge.0));
            }
            let (a, b) = self.step_endpoints(s);
            if a != at {
                return Err(Error::MalformedWord(format!(
                    "step {} does not start at `{}`",
                    self.display_step(s),
                    self.vertices[at.0]
                )));
            }
            at = b;
        }
        Ok(())
    }

    /// Parses `"a b^-1 c"` starting at vertex `start`.
    pub fn parse_path(&self, start: &str, text: &str) -> Result<EdgePath> {
        let start = self.vertex_by_name(start)?;
        let steps = text
            .split_whitespace()
            .map(|tok| self.parse_step(tok))
            .collect::<Result<Vec<_>>>()?;
        let p = EdgePath { start, steps };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn parse_step(&self, tok: &str) -> Result<Step> {
        let (name, reversed) = match tok.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (tok, false),
        };
        Ok(Step { edge: self.edge_by_name(name)?, reversed })
    }

    /// Closed path from the first step list; start vertex is the source of
    /// the first step.
    pub fn closed_path(&self, steps: Vec<Step>) -> Result<EdgePath> {
        let first = steps.first().ok_or_else(|| Error::Structural("empty face boundary".into()))?;
        let p = EdgePath { start: self.step_endpoints(*first).0, steps };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn display_step(&self, s: Step) -> String {
        let n = &self.edges[s.edge.0].name;
        if s.reversed {
            format!("{n}^-1")
        } else {
            n.clone()
        }
    }

    pub fn display_path(&self, p: &EdgePath) -> String {
        if p.steps.is_empty() {
            return format!("1_{}", self.vertices[p.start.0]);
        }
        p.steps.iter().map(|&s| self.display_step(s)).collect::<Vec<_>>().join(" ")
    }

    /// Component label (least vertex index) of every vertex in the
    /// 1-skeleton.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.src.0), find(&mut parent, e.dst.0));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.vertices.len()).map(|i| find(&mut parent, i)).collect()
    }

    pub fn component_count(&self) -> usize {
        let c = self.components();
        c.iter().enumerate().filter(|(i, r)| *i == **r).count()
    }
}

impl fmt::Display for Complex2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices.join(", "))?;
        for e in &self.edges {
            writeln!(f, "  {}: {} -> {}", e.name, self.vertices[e.src.0], self.vertices[e.dst.0])?;
        }
        for face in &self.faces {
            writeln!(f, "  [{}] {}", face.name, self.display_path(&face.boundary))?;
        }
        Ok(())
    }
}

/// A dimension-preserving cell map. Face boundaries map letterwise onto the
/// boundary of the image face, base vertex included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellMap {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
    pub face_map: Vec<FaceId>,
}

impl CellMap {
    pub fn new(
        domain: &Complex2,
        codomain: &Complex2,
        vertex_map: Vec<VertexId>,
        edge_map: Vec<EdgeId>,
        face_map: Vec<FaceId>,
    ) -> Result<Self> {
        let m = CellMap { vertex_map, edge_map, face_map };
        m.validate(domain, codomain)?;
        Ok(m)
    }

    pub fn identity(c: &Complex2) -> Self {
        CellMap {
            vertex_map: c.vertex_ids().collect(),
            edge_map: c.edge_ids().collect(),
            face_map: c.face_ids().collect(),
        }
    }

    pub fn validate(&self, domain: &Complex2, codomain: &Complex2) -> Result<()> {
        if self.vertex_map.len() != domain.vertex_count()
            || self.edge_map.len() != domain.edge_count()
            || self.face_map.len() != domain.face_count()
        {
            return Err(Error::Structural("cell map arity does not match its domain".into()));
        }
        if self.vertex_map.iter().any(|v| v.0 >= codomain.vertex_count())
            || self.edge_map.iter().any(|e| e.0 >= codomain.edge_count())
            || self.face_map.iter().any(|f| f.0 >= codomain.face_count())
        {
            return Err(Error::Structural("cell map points outside its codomain".into()));
        }
        for (i, e) in domain.edges().iter().enumerate() {
            let img = codomain.edge(self.edge_map[i]);
            if self.vertex_map[e.src.0] != img.src || self.vertex_map[e.dst.0] != img.dst {
                return Err(Error::Structural(format!(
                    "edge `{}` is not sent compatibly with its endpoints",
                    e.name
                )));
            }
        }
        for (i, f) in domain.faces().iter().enumerate() {
            if self.map_path(&f.boundary) != codomain.face(self.face_map[i]).boundary {
                return Err(Error::Structural(format!(
                    "boundary of face `{}` does not map onto its image face",
                    f.name
                )));
            }
        }
        Ok(())
    }

    pub fn map_path(&self, p: &EdgePath) -> EdgePath {
        EdgePath {
            start: self.vertex_map[p.start.0],
            steps: p.steps.iter().map(|s| Step { edge: self.edge_map[s.edge.0], reversed: s.reversed }).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &CellMap) -> CellMap {
        CellMap {
            vertex_map: first.vertex_map.iter().map(|v| self.vertex_map[v.0]).collect(),
            edge_map: first.edge_map.iter().map(|e| self.edge_map[e.0]).collect(),
            face_map: first.face_map.iter().map(|f| self.face_map[f.0]).collect(),
        }
    }
}
