//! The end-to-end comparison of the computed coequalizer with `π1(B, S)`,
//! and the cross-check through the coproduct of the cover pieces.

use std::collections::HashMap;

use serde::Serialize;

use super::battery::{Battery, BatteryConfig, Verdict};
use crate::colimits::{coequalize, fingerprint, vertex_group, CoequalizerResult, Fingerprint, DEFAULT_HOM_BUDGET};
use crate::complex::{cover_to_map, fiber_product, BaseSet, Section, SectionedCover};
use crate::error::{Error, Result};
use crate::pi1::{induced_functors, Epsilon, VkDiagram};
use crate::presentation::{ObjectId, PresentationMorphism, Word};

#[derive(Debug, Clone, Copy)]
pub struct VkOptions {
    pub battery: BatteryConfig,
    /// Largest order of the groups used in fingerprints.
    pub fingerprint_order: usize,
    pub hom_budget: u64,
}

impl Default for VkOptions {
    fn default() -> Self {
        VkOptions { battery: BatteryConfig::default(), fingerprint_order: 8, hom_budget: DEFAULT_HOM_BUDGET }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub equal: usize,
    pub distinct: usize,
    pub unknown: usize,
}

impl Tally {
    pub fn record(&mut self, v: &Verdict) {
        match v {
            Verdict::Equal(_) => self.equal += 1,
            Verdict::Distinct(_) => self.distinct += 1,
            Verdict::Unknown(_) => self.unknown += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.equal + self.distinct + self.unknown
    }

    pub fn add(&mut self, other: &Tally) {
        self.equal += other.equal;
        self.distinct += other.distinct;
        self.unknown += other.unknown;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexComparison {
    pub vertex: String,
    pub coequalizer: Fingerprint,
    pub direct: Fingerprint,
}

impl VertexComparison {
    pub fn agrees(&self) -> bool {
        self.coequalizer == self.direct
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VkReport {
    /// `γα = γβ` letter for letter.
    pub fork_commutes: bool,
    /// The comparison functor `Q → π1(B, S)` is bijective on objects.
    pub objects_bijective: bool,
    pub vertices: Vec<VertexComparison>,
    /// `φψ(b) = b` over generators of `π1(B, S)`.
    pub forward_round_trips: Tally,
    /// `ψφ(q) = q` over generators of the coequalizer.
    pub backward_round_trips: Tally,
    /// `ψ` sends relators of `π1(B, S)` to equal pairs.
    pub relators: Tally,
    /// Human-readable description of each Distinct verdict.
    pub failures: Vec<String>,
}

impl VkReport {
    pub fn fingerprints_agree(&self) -> bool {
        self.vertices.iter().all(VertexComparison::agrees)
    }

    pub fn verdicts(&self) -> Tally {
        let mut t = self.forward_round_trips.clone();
        t.add(&self.backward_round_trips);
        t.add(&self.relators);
        t
    }

    pub fn passed(&self) -> bool {
        self.fork_commutes && self.objects_bijective && self.fingerprints_agree() && self.verdicts().distinct == 0
    }
}

pub struct VkRun {
    pub diagram: VkDiagram,
    pub coequalizer: CoequalizerResult,
    /// `φ: Q → π1(B, S)`, induced by `γ`.
    pub comparison: PresentationMorphism,
    /// `ψ: π1(B, S) → Q`, the functor `ε` for `δ` the quotient map.
    pub inverse: PresentationMorphism,
    pub report: VkReport,
}

/// The functor `Q → π1(B, S)` that `γ` induces on the coequalizer.
fn comparison_morphism(d: &VkDiagram, q: &CoequalizerResult) -> Result<PresentationMorphism> {
    let qp = &q.presentation;
    let mut object_map = vec![None; qp.object_count()];
    for o in d.middle.presentation.object_ids() {
        let class = q.quotient_map.map_object(o);
        let image = d.gamma.map_object(o);
        match object_map[class.0] {
            Some(x) if x != image => {
                return Err(Error::Structural("gamma does not factor through the object quotient".into()));
            }
            _ => object_map[class.0] = Some(image),
        }
    }
    let object_map: Vec<ObjectId> = object_map.into_iter().map(|o| o.expect("quotient is onto")).collect();
    // generators of Q are those of the middle groupoid, in order
    let arrow_map: Vec<Word> = d.gamma.arrow_map().to_vec();
    PresentationMorphism::new(qp, &d.target.presentation, object_map, arrow_map)
}

/// Fingerprint of the vertex group at `o`, cached per component.
struct FingerprintCache<'a> {
    presentation: &'a crate::presentation::GroupoidPresentation,
    components: Vec<usize>,
    cache: HashMap<usize, Fingerprint>,
    order: usize,
    budget: u64,
}

impl<'a> FingerprintCache<'a> {
    fn new(presentation: &'a crate::presentation::GroupoidPresentation, order: usize, budget: u64) -> Self {
        FingerprintCache { presentation, components: presentation.components(), cache: HashMap::new(), order, budget }
    }

    fn get(&mut self, o: ObjectId) -> Result<Fingerprint> {
        let root = self.components[o.0];
        if let Some(f) = self.cache.get(&root) {
            return Ok(f.clone());
        }
        let vg = vertex_group(self.presentation, o)?;
        let f = fingerprint(&vg.presentation, self.order, self.budget)?;
        self.cache.insert(root, f.clone());
        Ok(f)
    }
}

/// Builds the fork, coequalizes it, and compares the result with
/// `π1(B, S)` computed directly.
pub fn run_vk(c: &SectionedCover, s: &BaseSet, opts: &VkOptions) -> Result<VkRun> {
    let d = induced_functors(c, s)?;
    let q = coequalize(&d.lower.presentation, &d.middle.presentation, &d.alpha, &d.beta)?;
    let phi = comparison_morphism(&d, &q)?;
    let qp = &q.presentation;
    let bp = &d.target.presentation;

    let mut hit = vec![0usize; bp.object_count()];
    for o in phi.object_map() {
        hit[o.0] += 1;
    }
    let objects_bijective = qp.object_count() == bp.object_count() && hit.iter().all(|&h| h == 1);

    let mut failures = Vec::new();
    let q_battery = Battery::new(qp, &opts.battery)?;
    let eps = Epsilon::new(&d, &q.quotient_map, qp, &q_battery)?;

    let mut object_map = Vec::with_capacity(bp.object_count());
    for o in bp.object_ids() {
        let v = d.target.vertex_of(o);
        let id = eps.evaluate_path(&crate::complex::EdgePath::constant(v))?;
        object_map.push(id.source());
    }
    let arrow_map = d
        .target
        .witness
        .iter()
        .map(|w| eps.evaluate_path(w))
        .collect::<Result<Vec<_>>>()?;
    let psi = PresentationMorphism::new(bp, qp, object_map, arrow_map)?;

    let b_battery = Battery::new(bp, &opts.battery)?;
    let mut forward = Tally::default();
    for a in bp.arrow_ids() {
        let g = bp.generator(a);
        let v = b_battery.decide(&phi.apply(psi.image(a))?, &g)?;
        if v.is_distinct() {
            failures.push(format!("phi psi({}) differs: {v}", bp.arrow(a).name));
        }
        forward.record(&v);
    }
    let mut backward = Tally::default();
    for a in qp.arrow_ids() {
        let g = qp.generator(a);
        let v = q_battery.decide(&psi.apply(phi.image(a))?, &g)?;
        if v.is_distinct() {
            failures.push(format!("psi phi({}) differs: {v}", qp.arrow(a).name));
        }
        backward.record(&v);
    }
    let mut relators = Tally::default();
    for (u, w) in bp.relators() {
        let v = q_battery.decide(&psi.apply(u)?, &psi.apply(w)?)?;
        if v.is_distinct() {
            failures.push(format!("relator {} = {} not preserved: {v}", bp.display_word(u), bp.display_word(w)));
        }
        relators.record(&v);
    }

    let mut qf = FingerprintCache::new(qp, opts.fingerprint_order, opts.hom_budget);
    let mut bf = FingerprintCache::new(bp, opts.fingerprint_order, opts.hom_budget);
    let mut vertices = Vec::new();
    for o in bp.object_ids() {
        vertices.push(VertexComparison {
            vertex: bp.object_name(o).to_string(),
            coequalizer: qf.get(psi.map_object(o))?,
            direct: bf.get(o)?,
        });
    }

    let report = VkReport {
        fork_commutes: d.fork_commutes()?,
        objects_bijective,
        vertices,
        forward_round_trips: forward,
        backward_round_trips: backward,
        relators,
        failures,
    };
    Ok(VkRun { diagram: d, coequalizer: q, comparison: phi, inverse: psi, report })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnReport {
    pub name: String,
    /// True when the column did not satisfy the hypothesis on `S` and was
    /// run with every vertex as base point instead.
    pub widened: bool,
    pub passed: bool,
    pub fingerprints: Vec<(String, Fingerprint)>,
    pub verdicts: Tally,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub columns: Vec<ColumnReport>,
    pub absolute: bool,
}

impl CrosscheckReport {
    pub fn agree(&self) -> bool {
        self.columns.iter().all(|c| c.passed)
            && self.columns.windows(2).all(|w| w[0].fingerprints == w[1].fingerprints)
    }

    pub fn distinct(&self) -> usize {
        self.columns.iter().map(|c| c.verdicts.distinct).sum()
    }

    pub fn verdict(&self) -> &'static str {
        match (self.agree(), self.absolute) {
            (true, true) => "AGREE (absolute)",
            (true, false) => "AGREE",
            (false, _) => "DISAGREE",
        }
    }
}

/// `E ×_B E'` for `E'` the coproduct of the pieces, with sections
/// `v ↦ (s_U v, v@U)`.
pub fn pullback_cover(c: &SectionedCover, coproduct: &SectionedCover) -> Result<SectionedCover> {
    let fp = fiber_product(&c.total, &c.map, &coproduct.total, &coproduct.map, &c.base)?;
    let b = &c.base;
    let mut sections = Vec::with_capacity(c.pieces.len());
    for (s, t) in c.sections.iter().zip(&coproduct.sections) {
        let vertex = b
            .vertex_ids()
            .map(|v| s.vertex[v.0].zip(t.vertex[v.0]).and_then(|(x, y)| fp.pair_vertex(x, y)))
            .collect();
        let edge = b
            .edge_ids()
            .map(|e| s.edge[e.0].zip(t.edge[e.0]).and_then(|(x, y)| fp.pair_edge(x, y)))
            .collect();
        let face = b
            .face_ids()
            .map(|f| s.face[f.0].zip(t.face[f.0]).and_then(|(x, y)| fp.pair_face(x, y)))
            .collect();
        sections.push(Section { vertex, edge, face });
    }
    Ok(SectionedCover {
        base: b.clone(),
        total: fp.complex,
        map: fp.to_base,
        pieces: c.pieces.clone(),
        sections,
    })
}

fn column(name: &str, c: &SectionedCover, s: &BaseSet, opts: &VkOptions) -> Result<ColumnReport> {
    let (run, widened) = match run_vk(c, s, opts) {
        Ok(r) => (r, false),
        Err(Error::Hypothesis { .. }) => (run_vk(c, &c.base.vertex_ids().collect(), opts)?, true),
        Err(e) => return Err(e),
    };
    let fingerprints = run
        .report
        .vertices
        .iter()
        .filter(|v| s.iter().any(|x| c.base.vertex_name(*x) == v.vertex))
        .map(|v| (v.vertex.clone(), v.coequalizer.clone()))
        .collect();
    Ok(ColumnReport {
        name: name.to_string(),
        widened,
        passed: run.report.passed(),
        fingerprints,
        verdicts: run.report.verdicts(),
    })
}

/// Runs the pipeline on `c`, on the coproduct of its pieces, and on their
/// pullback, and compares the coequalizer fingerprints at the vertices of
/// `S`. A derived column that misses the hypothesis on `S` is run on all
/// vertices, which leaves its vertex groups at `S` unchanged.
pub fn crosscheck(c: &SectionedCover, s: &BaseSet, opts: &VkOptions) -> Result<CrosscheckReport> {
    let given = column("E", c, s, opts)?;
    if given.widened {
        return Err(Error::Hypothesis { components: crate::complex::check_hypothesis(c, s)?.missing });
    }
    let coproduct = cover_to_map(&c.base, c.pieces.clone())?;
    let pullback = pullback_cover(c, &coproduct)?;
    let columns = vec![given, column("E'", &coproduct, s, opts)?, column("E x_B E'", &pullback, s, opts)?];
    Ok(CrosscheckReport { columns, absolute: c.has_global_section() })
}
