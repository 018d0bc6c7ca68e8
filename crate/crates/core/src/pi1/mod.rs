//! Fundamental groupoids on a base set, the induced fork, and the
//! weighted-path machinery that evaluates the comparison functor.

mod fork;
mod homotopy;
mod weighted;

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::complex::{path_to_base, BaseSet, Complex2, EdgePath, Step, VertexId};
use crate::error::{Error, Result};
use crate::presentation::{ArrowId, GroupoidPresentation, Letter, ObjectId, Word};

pub use fork::{induced_functors, VkDiagram};
pub use homotopy::elementary_homotopies;
pub use weighted::{
    associated_sequence, composite, random_weight, weigh_path, weigh_path_with, AssociatedSequence, Epsilon,
    WeightedPath,
};

/// An edge-path presentation of `π1(X, S)`.
#[derive(Debug, Clone, Serialize)]
pub struct Pi1Presentation {
    pub presentation: GroupoidPresentation,
    /// Edge path underlying each generator, between base-set vertices.
    pub witness: Vec<EdgePath>,
    /// Forest step entering each vertex; `None` at the roots (the vertices
    /// of `S`).
    pub forest: Vec<Option<Step>>,
    /// Generator for each edge; `None` for forest edges.
    pub edge_generator: Vec<Option<ArrowId>>,
    /// Object of each base-set vertex.
    pub object_of: Vec<Option<ObjectId>>,
    pub vertex_of_object: Vec<VertexId>,
    /// Root of the forest tree containing each vertex.
    pub root: Vec<VertexId>,
}

impl Pi1Presentation {
    pub fn vertex_of(&self, o: ObjectId) -> VertexId {
        self.vertex_of_object[o.0]
    }

    /// Forest path from the root of `v`'s tree to `v`.
    pub fn tree_path(&self, x: &Complex2, v: VertexId) -> EdgePath {
        let mut steps = Vec::new();
        let mut at = v;
        while let Some(s) = self.forest[at.0] {
            steps.push(s);
            at = x.step_endpoints(s).0;
        }
        steps.reverse();
        EdgePath { start: at, steps }
    }

    /// The word of an edge path whose endpoints may lie anywhere: it is read
    /// as a morphism between the roots of the endpoints' trees.
    pub fn anchored_word(&self, path: &EdgePath) -> Result<Word> {
        let start = self.object_of[self.root[path.start.0].0].expect("roots are objects");
        let letters: Vec<Letter> = path
            .steps
            .iter()
            .filter_map(|s| self.edge_generator[s.edge.0].map(|arrow| Letter { arrow, inverse: s.reversed }))
            .collect();
        self.presentation.word(start, &letters)
    }

    /// `[path]` for a path with both endpoints in `S`.
    pub fn path_word(&self, x: &Complex2, path: &EdgePath) -> Result<Word> {
        for v in [path.start, path.end(x)] {
            if self.object_of[v.0].is_none() {
                return Err(Error::Contract(format!("path endpoint `{}` is not in the base set", x.vertex_name(v))));
            }
        }
        self.anchored_word(path)
    }
}

/// A random walk of up to `max_walk` steps from a random flagged vertex,
/// closed off by a shortest path back to a flagged vertex. `None` when
/// nothing is flagged.
pub fn random_path<R: Rng>(x: &Complex2, flagged: &[bool], max_walk: usize, rng: &mut R) -> Option<EdgePath> {
    let starts: Vec<usize> = (0..x.vertex_count()).filter(|&v| flagged[v]).collect();
    let mut walk = EdgePath::constant(VertexId(*starts.choose(rng)?));
    let mut at = walk.start;
    for _ in 0..rng.gen_range(0..=max_walk) {
        let Some(&s) = x.steps_from(at).choose(rng) else { break };
        walk.steps.push(s);
        at = x.step_endpoints(s).1;
    }
    let back = path_to_base(x, at, flagged).ok()?;
    walk.then(x, &back).ok()
}

/// `π1(X, S)` by a breadth-first spanning forest rooted at the vertices of
/// `S`. Non-forest edges become generators, face boundaries relators.
pub fn pi1(x: &Complex2, s: &BaseSet) -> Result<Pi1Presentation> {
    let mut p = GroupoidPresentation::new();
    let mut object_of = vec![None; x.vertex_count()];
    let mut root: Vec<Option<VertexId>> = vec![None; x.vertex_count()];
    let mut forest = vec![None; x.vertex_count()];
    let mut in_forest = vec![false; x.edge_count()];
    let mut queue = VecDeque::new();
    for &v in s {
        if v.0 >= x.vertex_count() {
            return Err(Error::lookup("vertex", v.0));
        }
        object_of[v.0] = Some(p.add_object(x.vertex_name(v))?);
        root[v.0] = Some(v);
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for &st in x.steps_from(v) {
            let w = x.step_endpoints(st).1;
            if root[w.0].is_none() {
                root[w.0] = root[v.0];
                forest[w.0] = Some(st);
                in_forest[st.edge.0] = true;
                queue.push_back(w);
            }
        }
    }
    let missing: Vec<String> = {
        let comp = x.components();
        let mut reported = vec![false; x.vertex_count()];
        x.vertex_ids()
            .filter(|v| root[v.0].is_none())
            .filter_map(|v| (!std::mem::replace(&mut reported[comp[v.0]], true)).then(|| x.vertex_name(v).to_string()))
            .collect()
    };
    if !missing.is_empty() {
        return Err(Error::Hypothesis { components: missing });
    }
    let root: Vec<VertexId> = root.into_iter().map(|r| r.expect("all vertices reached")).collect();
    let mut result = Pi1Presentation {
        presentation: p,
        witness: Vec::new(),
        forest,
        edge_generator: vec![None; x.edge_count()],
        object_of,
        vertex_of_object: s.iter().copied().collect(),
        root,
    };
    for e in x.edge_ids() {
        if in_forest[e.0] {
            continue;
        }
        let edge = x.edge(e);
        let (a, b) = (result.root[edge.src.0], result.root[edge.dst.0]);
        let (oa, ob) = (result.object_of[a.0].unwrap(), result.object_of[b.0].unwrap());
        let id = result.presentation.add_arrow(edge.name.clone(), oa, ob)?;
        result.edge_generator[e.0] = Some(id);
        let witness = result
            .tree_path(x, edge.src)
            .then(x, &EdgePath { start: edge.src, steps: vec![Step::forward(e)] })?
            .then(x, &result.tree_path(x, edge.dst).inverse(x))?;
        result.witness.push(witness);
    }
    for f in x.face_ids() {
        let w = result.anchored_word(&x.face(f).boundary)?;
        if !w.is_empty() {
            let id = Word::identity(w.source());
            result.presentation.add_relator(w, id)?;
        }
    }
    Ok(result)
}
