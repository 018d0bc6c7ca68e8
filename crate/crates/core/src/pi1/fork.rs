use serde::Serialize;

use super::{pi1, Pi1Presentation};
use crate::complex::{
    check_hypothesis, fiber_product, verify_locally_sectionable, BaseSet, CellMap, Complex2, FiberProduct,
    SectionedCover,
};
use crate::error::{Error, Result};
use crate::presentation::{ObjectId, PresentationMorphism};

/// The fork `π1(E×_B E, S) ⇉ π1(E, S) → π1(B, S)` of a sectioned cover.
#[derive(Debug, Clone)]
pub struct VkDiagram {
    pub cover: SectionedCover,
    pub base_set: BaseSet,
    pub double: FiberProduct,
    pub lower: Pi1Presentation,
    pub middle: Pi1Presentation,
    pub target: Pi1Presentation,
    pub alpha: PresentationMorphism,
    pub beta: PresentationMorphism,
    pub gamma: PresentationMorphism,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForkSizes {
    pub lower: (usize, usize, usize),
    pub middle: (usize, usize, usize),
    pub target: (usize, usize, usize),
}

fn lift(to_base: &CellMap, s: &BaseSet) -> BaseSet {
    to_base.vertex_map.iter().enumerate().filter(|(_, v)| s.contains(v)).map(|(i, _)| crate::complex::VertexId(i)).collect()
}

/// Pushes every generator witness of `from` through `map` and reads it in
/// `to`.
fn induced(
    from: &Pi1Presentation,
    map: &CellMap,
    to: &Pi1Presentation,
    to_complex: &Complex2,
) -> Result<PresentationMorphism> {
    let object_map: Vec<ObjectId> = from
        .vertex_of_object
        .iter()
        .map(|v| to.object_of[map.vertex_map[v.0].0].expect("fibers over S map into S"))
        .collect();
    let arrow_map = from
        .witness
        .iter()
        .map(|w| to.path_word(to_complex, &map.map_path(w)))
        .collect::<Result<Vec<_>>>()?;
    PresentationMorphism::new(&from.presentation, &to.presentation, object_map, arrow_map)
}

/// Builds the fork of `c` on `S` after checking sections and the
/// hypothesis on the triple product.
pub fn induced_functors(c: &SectionedCover, s: &BaseSet) -> Result<VkDiagram> {
    if let Some(f) = verify_locally_sectionable(c).failure {
        return Err(Error::Precondition(f));
    }
    if s.is_empty() {
        return Err(Error::Precondition("empty base set".into()));
    }
    if let Some(v) = s.iter().find(|v| v.0 >= c.base.vertex_count()) {
        return Err(Error::lookup("vertex", v.0));
    }
    check_hypothesis(c, s)?.into_result()?;
    let double = fiber_product(&c.total, &c.map, &c.total, &c.map, &c.base)?;
    let target = pi1(&c.base, s)?;
    let middle = pi1(&c.total, &lift(&c.map, s))?;
    let lower = pi1(&double.complex, &lift(&double.to_base, s))?;
    let alpha = induced(&lower, &double.pr1, &middle, &c.total)?;
    let beta = induced(&lower, &double.pr2, &middle, &c.total)?;
    let gamma = induced(&middle, &c.map, &target, &c.base)?;
    Ok(VkDiagram { cover: c.clone(), base_set: s.clone(), double, lower, middle, target, alpha, beta, gamma })
}

impl VkDiagram {
    pub fn sizes(&self) -> ForkSizes {
        let count = |p: &Pi1Presentation| {
            let g = &p.presentation;
            (g.object_count(), g.arrow_count(), g.relators().len())
        };
        ForkSizes { lower: count(&self.lower), middle: count(&self.middle), target: count(&self.target) }
    }

    /// Vertices of `E` over `S`.
    pub fn total_fiber(&self) -> Vec<bool> {
        self.cover.fiber_flags(&self.cover.map, &self.base_set)
    }

    /// Vertices of `E ×_B E` over `S`.
    pub fn double_fiber(&self) -> Vec<bool> {
        self.cover.fiber_flags(&self.double.to_base, &self.base_set)
    }

    /// `γ∘α` and `γ∘β` agree letter for letter on every generator.
    pub fn fork_commutes(&self) -> Result<bool> {
        let ga = self.gamma.after(&self.alpha)?;
        let gb = self.gamma.after(&self.beta)?;
        Ok(ga == gb)
    }
}
