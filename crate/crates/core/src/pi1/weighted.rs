use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::VkDiagram;
use crate::complex::{path_to_base, Complex2, EdgePath, VertexId};
use crate::error::{Error, Result};
use crate::presentation::{compose, GroupoidPresentation, PresentationMorphism, Word};
use crate::vkcheck::{Battery, Verdict};

/// A path `f` in the base with endpoints in `S`, cut at `breakpoints`
/// into segments, each inside a cover piece, and connectors in `E ×_B E`
/// from the pair of lifts at each interior breakpoint to the fiber over
/// `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedPath {
    pub f: EdgePath,
    /// `0 = t_0 ≤ … ≤ t_n = len(f)`, as step indices.
    pub breakpoints: Vec<usize>,
    /// Piece index per segment.
    pub pieces: Vec<usize>,
    /// `n − 1` paths in the double fiber product.
    pub connectors: Vec<EdgePath>,
}

impl WeightedPath {
    pub fn n(&self) -> usize {
        self.pieces.len()
    }

    pub fn segment(&self, b: &Complex2, i: usize) -> EdgePath {
        self.f.slice(b, self.breakpoints[i], self.breakpoints[i + 1])
    }

    /// Where connector `i` (between segments `i` and `i + 1`) must start.
    pub fn connector_start(&self, d: &VkDiagram, i: usize) -> Result<VertexId> {
        let v = self.f.vertices(&d.cover.base)[self.breakpoints[i + 1]];
        let lift = |k: usize| {
            d.cover.sections[self.pieces[k]]
                .map_vertex(v)
                .ok_or_else(|| Error::Precondition(format!("breakpoint `{}` outside its piece", d.cover.base.vertex_name(v))))
        };
        let (a, b) = (lift(i)?, lift(i + 1)?);
        d.double
            .pair_vertex(a, b)
            .ok_or_else(|| Error::Structural("lifts of one vertex do not pair".into()))
    }

    /// Checks every invariant of a weighted path against `d`.
    pub fn validate(&self, d: &VkDiagram) -> Result<()> {
        self.validate_segments(d)?;
        if self.connectors.len() != self.n() - 1 {
            return Err(Error::Contract("need one connector per interior breakpoint".into()));
        }
        let e2 = &d.double.complex;
        let fiber = d.double_fiber();
        for (i, g) in self.connectors.iter().enumerate() {
            e2.check_path(g)?;
            if g.start != self.connector_start(d, i)? {
                return Err(Error::Contract(format!("connector {} starts at the wrong pair", i + 1)));
            }
            if !fiber[g.end(e2).0] {
                return Err(Error::Contract(format!("connector {} does not end over the base set", i + 1)));
            }
        }
        Ok(())
    }

    fn validate_segments(&self, d: &VkDiagram) -> Result<()> {
        let b = &d.cover.base;
        b.check_path(&self.f)?;
        for v in [self.f.start, self.f.end(b)] {
            if !d.base_set.contains(&v) {
                return Err(Error::Contract(format!("endpoint `{}` is not in the base set", b.vertex_name(v))));
            }
        }
        let n = self.n();
        let t = &self.breakpoints;
        if n == 0 || t.len() != n + 1 || t[0] != 0 || t[n] != self.f.len() || t.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Contract("malformed breakpoints".into()));
        }
        for i in 0..n {
            let u = d
                .cover
                .pieces
                .get(self.pieces[i])
                .ok_or_else(|| Error::lookup("piece", self.pieces[i]))?;
            let seg = self.segment(b, i);
            if !u.vertices[seg.start.0] {
                return Err(Error::Precondition(format!("vertex `{}` leaves piece `{}`", b.vertex_name(seg.start), u.name)));
            }
            if let Some(s) = seg.steps.iter().find(|s| !u.edges[s.edge.0]) {
                return Err(Error::Precondition(format!("edge `{}` leaves piece `{}`", b.edge(s.edge).name, u.name)));
            }
        }
        Ok(())
    }

    /// Same subdivision and pieces with random connectors: a random walk
    /// followed by a shortest path to a random reachable vertex over `S`.
    pub fn rechoose_connectors<R: Rng>(&self, d: &VkDiagram, rng: &mut R) -> Result<WeightedPath> {
        let mut out = self.clone();
        for i in 0..out.connectors.len() {
            out.connectors[i] = random_connector(d, out.connector_start(d, i)?, rng)?;
        }
        Ok(out)
    }
}

fn random_connector<R: Rng>(d: &VkDiagram, start: VertexId, rng: &mut R) -> Result<EdgePath> {
    let e2 = &d.double.complex;
    let mut walk = EdgePath::constant(start);
    for _ in 0..rng.gen_range(0..5) {
        let at = walk.end(e2);
        if let Some(&s) = e2.steps_from(at).choose(rng) {
            walk.steps.push(s);
        }
    }
    let comp = e2.components();
    let fiber = d.double_fiber();
    let here = comp[walk.end(e2).0];
    let targets: Vec<usize> = (0..e2.vertex_count()).filter(|&v| fiber[v] && comp[v] == here).collect();
    let &goal = targets
        .choose(rng)
        .ok_or_else(|| Error::Hypothesis { components: vec![e2.vertex_name(start).to_string()] })?;
    let mut flags = vec![false; e2.vertex_count()];
    flags[goal] = true;
    walk.then(e2, &path_to_base(e2, walk.end(e2), &flags)?)
}

fn default_connectors(d: &VkDiagram, mut w: WeightedPath) -> Result<WeightedPath> {
    let fiber = d.double_fiber();
    w.connectors = (0..w.n().saturating_sub(1))
        .map(|i| path_to_base(&d.double.complex, w.connector_start(d, i)?, &fiber))
        .collect::<Result<_>>()?;
    Ok(w)
}

/// The finest weight: one segment per edge, each in the first piece that
/// contains it, connectors by shortest path. A constant path gets one
/// degenerate segment.
pub fn weigh_path(d: &VkDiagram, f: &EdgePath) -> Result<WeightedPath> {
    let c = &d.cover;
    let pieces = if f.is_empty() {
        vec![c.first_piece_with_vertex(f.start).ok_or_else(|| Error::Coverage(vec![c.base.vertex_name(f.start).into()]))?]
    } else {
        f.steps
            .iter()
            .map(|s| c.first_piece_with_edge(s.edge).ok_or_else(|| Error::Coverage(vec![c.base.edge(s.edge).name.clone()])))
            .collect::<Result<_>>()?
    };
    let breakpoints = if f.is_empty() { vec![0, 0] } else { (0..=f.len()).collect() };
    weigh_path_with(d, f, breakpoints, pieces)
}

/// A weight with prescribed subdivision and pieces; fails naming the first
/// cell that leaves its piece.
pub fn weigh_path_with(d: &VkDiagram, f: &EdgePath, breakpoints: Vec<usize>, pieces: Vec<usize>) -> Result<WeightedPath> {
    let w = WeightedPath { f: f.clone(), breakpoints, pieces, connectors: Vec::new() };
    w.validate_segments(d)?;
    let w = default_connectors(d, w)?;
    w.validate(d)?;
    Ok(w)
}

/// A random weight: random coarsening of the finest subdivision and a
/// random admissible piece per segment, with random connectors.
pub fn random_weight<R: Rng>(d: &VkDiagram, f: &EdgePath, rng: &mut R) -> Result<WeightedPath> {
    let c = &d.cover;
    let all: Vec<usize> = (0..c.pieces.len()).collect();
    if f.is_empty() {
        let ok: Vec<usize> = all.iter().copied().filter(|&u| c.pieces[u].vertices[f.start.0]).collect();
        let u = *ok.choose(rng).ok_or_else(|| Error::Coverage(vec![c.base.vertex_name(f.start).into()]))?;
        let w = WeightedPath { f: f.clone(), breakpoints: vec![0, 0], pieces: vec![u], connectors: vec![] };
        return Ok(w);
    }
    let mut breakpoints = vec![0];
    let mut pieces = Vec::new();
    let mut live: Vec<usize> = Vec::new();
    for (k, s) in f.steps.iter().enumerate() {
        let with_edge: Vec<usize> = all.iter().copied().filter(|&u| c.pieces[u].edges[s.edge.0]).collect();
        let joined: Vec<usize> = live.iter().copied().filter(|u| with_edge.contains(u)).collect();
        if k > 0 && !joined.is_empty() && rng.gen_bool(0.5) {
            live = joined;
        } else {
            if k > 0 {
                pieces.push(*live.choose(rng).expect("segments keep a piece"));
                breakpoints.push(k);
            }
            if with_edge.is_empty() {
                return Err(Error::Coverage(vec![c.base.edge(s.edge).name.clone()]));
            }
            live = with_edge;
        }
    }
    pieces.push(*live.choose(rng).expect("segments keep a piece"));
    breakpoints.push(f.len());
    let n = pieces.len();
    let w = WeightedPath { f: f.clone(), breakpoints, pieces, connectors: vec![EdgePath::constant(VertexId(0)); n - 1] };
    let w = w.rechoose_connectors(d, rng)?;
    w.validate(d)?;
    Ok(w)
}

/// `h_1, …, h_n` in `π1(E, S)`, with the edge path behind each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociatedSequence {
    pub paths: Vec<EdgePath>,
    pub words: Vec<Word>,
}

/// `h_1 = [p1 g_1][s f_1]`, `h_i = [p1 g_i][s f_i][p2 g_{i−1}]⁻¹`,
/// `h_n = [s f_n][p2 g_{n−1}]⁻¹`, read right to left.
pub fn associated_sequence(d: &VkDiagram, w: &WeightedPath) -> Result<AssociatedSequence> {
    let (b, e) = (&d.cover.base, &d.cover.total);
    let n = w.n();
    let mut paths = Vec::with_capacity(n);
    for i in 0..n {
        let seg = w.segment(b, i);
        let lifted = d.cover.sections[w.pieces[i]]
            .map_path(&seg)
            .ok_or_else(|| Error::Precondition(format!("segment {} leaves its piece", i + 1)))?;
        let mut path = if i > 0 { d.double.pr2.map_path(&w.connectors[i - 1]).inverse(e) } else { EdgePath::constant(lifted.start) };
        path = path.then(e, &lifted)?;
        if i + 1 < n {
            path = path.then(e, &d.double.pr1.map_path(&w.connectors[i]))?;
        }
        paths.push(path);
    }
    let words = paths.iter().map(|p| d.middle.path_word(e, p)).collect::<Result<_>>()?;
    Ok(AssociatedSequence { paths, words })
}

/// `m(h_n) ⋯ m(h_1)`, failing if consecutive images do not compose.
pub fn composite(m: &PresentationMorphism, seq: &AssociatedSequence) -> Result<Word> {
    let mut acc: Option<Word> = None;
    for (i, h) in seq.words.iter().enumerate() {
        let img = m.apply(h)?;
        acc = Some(match acc {
            None => img,
            Some(prev) => compose(&img, &prev).map_err(|_| {
                Error::Contract(format!("images of h_{} and h_{} do not compose", i, i + 1))
            })?,
        });
    }
    acc.ok_or_else(|| Error::Contract("empty associated sequence".into()))
}

/// The functor `ε: π1(B, S) → G` determined by a functor `δ: π1(E, S) → G`
/// with `δα = δβ`.
pub struct Epsilon<'a> {
    diagram: &'a VkDiagram,
    delta: &'a PresentationMorphism,
    target: &'a GroupoidPresentation,
}

impl<'a> Epsilon<'a> {
    /// Checks `δα = δβ` on objects and, through `battery`, on generators.
    /// Unknown verdicts are refused.
    pub fn new(
        diagram: &'a VkDiagram,
        delta: &'a PresentationMorphism,
        target: &'a GroupoidPresentation,
        battery: &Battery,
    ) -> Result<Self> {
        let lower = &diagram.lower.presentation;
        for o in lower.object_ids() {
            let (a, b) = (diagram.alpha.map_object(o), diagram.beta.map_object(o));
            if delta.map_object(a) != delta.map_object(b) {
                return Err(Error::NotCoequalizing {
                    generator: lower.object_name(o).to_string(),
                    reason: "objects are not identified".into(),
                });
            }
        }
        for g in lower.arrow_ids() {
            let u = delta.apply(diagram.alpha.image(g))?;
            let v = delta.apply(diagram.beta.image(g))?;
            let reason = match battery.decide(&u, &v)? {
                Verdict::Equal(_) => continue,
                Verdict::Distinct(w) => format!("separated: {w}"),
                Verdict::Unknown(r) => format!("undecided: {r}"),
            };
            return Err(Error::NotCoequalizing { generator: lower.arrow(g).name.clone(), reason });
        }
        Ok(Epsilon { diagram, delta, target })
    }

    pub fn target(&self) -> &GroupoidPresentation {
        self.target
    }

    pub fn evaluate(&self, w: &WeightedPath) -> Result<Word> {
        composite(self.delta, &associated_sequence(self.diagram, w)?)
    }

    pub fn evaluate_path(&self, f: &EdgePath) -> Result<Word> {
        self.evaluate(&weigh_path(self.diagram, f)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cover_to_map, EdgeId, Subcomplex};
    use crate::pi1::induced_functors;

    fn two_arcs() -> VkDiagram {
        let mut b = Complex2::new();
        let v0 = b.add_vertex("v0").unwrap();
        let v1 = b.add_vertex("v1").unwrap();
        b.add_edge("a", v0, v1).unwrap();
        b.add_edge("b", v1, v0).unwrap();
        let u1 = Subcomplex::closure_of(&b, "U1", &[], &[EdgeId(0)], &[]);
        let u2 = Subcomplex::closure_of(&b, "U2", &[], &[EdgeId(1)], &[]);
        let c = cover_to_map(&b, vec![u1, u2]).unwrap();
        induced_functors(&c, &[v0, v1].into()).unwrap()
    }

    #[test]
    fn single_edge_has_no_connectors() {
        let d = two_arcs();
        let f = d.cover.base.parse_path("v0", "a").unwrap();
        let w = weigh_path(&d, &f).unwrap();
        assert_eq!((w.n(), w.connectors.len()), (1, 0));
        let seq = associated_sequence(&d, &w).unwrap();
        assert_eq!(d.cover.total.display_path(&seq.paths[0]), "a@U1");
    }

    #[test]
    fn loop_crosses_pieces() {
        let d = two_arcs();
        let b = &d.cover.base;
        let f = b.parse_path("v0", "a b").unwrap();
        let w = weigh_path(&d, &f).unwrap();
        assert_eq!((w.n(), w.pieces.clone()), (2, vec![0, 1]));
        let start = d.double.complex.vertex_name(w.connectors[0].start).to_string();
        assert_eq!(start, "(v1@U1,v1@U2)");
        let seq = associated_sequence(&d, &w).unwrap();
        let gamma = composite(&d.gamma, &seq).unwrap();
        assert_eq!(gamma, d.target.path_word(b, &f).unwrap());
    }

    #[test]
    fn prescribed_piece_must_contain_segment() {
        let d = two_arcs();
        let f = d.cover.base.parse_path("v0", "a b").unwrap();
        let err = weigh_path_with(&d, &f, vec![0, 1, 2], vec![0, 0]).unwrap_err();
        assert_eq!(err, Error::Precondition("edge `b` leaves piece `U1`".into()));
    }
}
