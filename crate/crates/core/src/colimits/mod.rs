//! Colimits of presented groupoids, vertex groups, and the invariants used
//! to compare them.

pub mod finite;
pub mod snf;
pub mod tietze;

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{
    ArrowId, GroupoidPresentation, Letter, ObjectId, PresentationMorphism, Word,
};

pub use finite::{
    enumerate_homs, hom_count, random_coequalizing_valuation, small_groups, FiniteGroup,
    GroupValuation, DEFAULT_HOM_BUDGET,
};
pub use snf::{smith_normal_form, SmithForm};
pub use tietze::{simplify, LoopPresentation, Simplified, TietzeMove};

/// Disjoint union. With more than one summand, names get a `#i` suffix.
pub fn coproduct(ps: &[GroupoidPresentation]) -> (GroupoidPresentation, Vec<PresentationMorphism>) {
    let mut out = GroupoidPresentation::new();
    let mut injections = Vec::with_capacity(ps.len());
    let rename = |name: &str, i: usize| {
        if ps.len() == 1 {
            name.to_string()
        } else {
            format!("{name}#{i}")
        }
    };
    for (i, p) in ps.iter().enumerate() {
        let objects: Vec<ObjectId> = p
            .objects()
            .iter()
            .map(|n| out.add_object(rename(n, i)).expect("suffixed names are distinct"))
            .collect();
        let arrows: Vec<Word> = p
            .arrows()
            .iter()
            .map(|a| {
                let id = out
                    .add_arrow(rename(&a.name, i), objects[a.source.0], objects[a.target.0])
                    .expect("suffixed names are distinct");
                out.generator(id)
            })
            .collect();
        let inj = PresentationMorphism::from_parts(objects, arrows);
        for (u, v) in p.relators() {
            let (u, v) = (inj.apply(u).expect("injection"), inj.apply(v).expect("injection"));
            out.add_relator(u, v).expect("parallel relator stays parallel");
        }
        injections.push(inj);
    }
    (out, injections)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoequalizerResult {
    pub presentation: GroupoidPresentation,
    /// From the middle groupoid of the fork onto `presentation`.
    pub quotient_map: PresentationMorphism,
}

/// Coequalizer of `alpha, beta: src ⇉ mid`. Objects of `mid` are identified
/// along `alpha(x) ~ beta(x)`; each class is named after its least member.
pub fn coequalize(
    src: &GroupoidPresentation,
    mid: &GroupoidPresentation,
    alpha: &PresentationMorphism,
    beta: &PresentationMorphism,
) -> Result<CoequalizerResult> {
    for m in [alpha, beta] {
        if m.object_map().len() != src.object_count() || m.arrow_map().len() != src.arrow_count() {
            return Err(Error::Structural("fork morphism arity does not match its source".into()));
        }
    }
    let mut parent: Vec<usize> = (0..mid.object_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for o in src.object_ids() {
        let (a, b) = (find(&mut parent, alpha.map_object(o).0), find(&mut parent, beta.map_object(o).0));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut q = GroupoidPresentation::new();
    let mut class_object = vec![None; mid.object_count()];
    let mut object_map = Vec::with_capacity(mid.object_count());
    for o in mid.object_ids() {
        let r = find(&mut parent, o.0);
        let id = match class_object[r] {
            Some(id) => id,
            None => {
                let id = q.add_object(mid.object_name(ObjectId(r)))?;
                class_object[r] = Some(id);
                id
            }
        };
        object_map.push(id);
    }
    let mut arrow_map = Vec::with_capacity(mid.arrow_count());
    for a in mid.arrows() {
        let id = q.add_arrow(a.name.clone(), object_map[a.source.0], object_map[a.target.0])?;
        arrow_map.push(q.generator(id));
    }
    let quotient_map = PresentationMorphism::from_parts(object_map, arrow_map);
    let mut seen = std::collections::HashSet::new();
    let mut push = |q: &mut GroupoidPresentation, u: Word, v: Word| -> Result<()> {
        if u != v && seen.insert((u.clone(), v.clone())) {
            q.add_relator(u, v)?;
        }
        Ok(())
    };
    for (u, v) in mid.relators() {
        push(&mut q, quotient_map.apply(u)?, quotient_map.apply(v)?)?;
    }
    for a in src.arrow_ids() {
        let u = quotient_map.apply(alpha.image(a))?;
        let v = quotient_map.apply(beta.image(a))?;
        push(&mut q, u, v)?;
    }
    Ok(CoequalizerResult { presentation: q, quotient_map })
}

/// Searches for `d'` on the coequalizer with `d'∘quotient = d`, solving for
/// generator images from their preimages. Returns `None` if the values
/// forced by `d` do not respect the coequalizer relators or do not reproduce
/// `d`.
pub fn factor_through_quotient(
    q: &CoequalizerResult,
    mid: &GroupoidPresentation,
    group: &FiniteGroup,
    d: &GroupValuation,
) -> Option<GroupValuation> {
    let n = q.presentation.arrow_count();
    let mut values: Vec<Option<usize>> = vec![None; n];
    for a in mid.arrow_ids() {
        let img = q.quotient_map.image(a);
        if let [l] = img.letters() {
            let x = d.values[a.0];
            let x = if l.inverse { group.inv(x) } else { x };
            match values[l.arrow.0] {
                Some(y) if y != x => return None,
                _ => values[l.arrow.0] = Some(x),
            }
        }
    }
    let candidate = GroupValuation { values: values.into_iter().map(|v| v.unwrap_or(0)).collect() };
    if !candidate.respects(group, &q.presentation) {
        return None;
    }
    let reproduces = mid
        .arrow_ids()
        .all(|a| candidate.eval(group, q.quotient_map.image(a)) == d.values[a.0]);
    reproduces.then_some(candidate)
}

/// The vertex group at `root` together with the anchoring data that maps
/// words of the ambient groupoid into it.
#[derive(Debug, Clone)]
pub struct VertexGroup {
    pub presentation: GroupoidPresentation,
    pub root: ObjectId,
    /// Generator of the vertex group for each ambient arrow; `None` for
    /// spanning-tree arrows and arrows outside the component.
    pub arrow_to_generator: Vec<Option<ArrowId>>,
    /// Ambient objects lying in the component of `root`.
    pub component: Vec<bool>,
}

impl VertexGroup {
    /// Sends a word `u: y → z` of the component to the loop `T(y)·u·T(z)⁻¹`
    /// at the root, where `T` are the tree paths from the root.
    pub fn anchor(&self, w: &Word) -> Result<Word> {
        if !self.component[w.source().0] {
            return Err(Error::Contract("word lies outside the vertex group's component".into()));
        }
        let o = ObjectId(0);
        let letters: Vec<Letter> = w
            .letters()
            .iter()
            .filter_map(|l| {
                self.arrow_to_generator[l.arrow.0].map(|g| Letter { arrow: g, inverse: l.inverse })
            })
            .collect();
        self.presentation.word(o, &letters)
    }
}

/// One-object presentation of the vertex group at `x`: breadth-first
/// spanning tree from `x` (ties broken by arrow id), tree arrows contracted,
/// the remaining arrows and relators of the component re-anchored at `x`.
pub fn vertex_group(p: &GroupoidPresentation, x: ObjectId) -> Result<VertexGroup> {
    if x.0 >= p.object_count() {
        return Err(Error::lookup("object", x.0));
    }
    let mut incident: Vec<Vec<ArrowId>> = vec![Vec::new(); p.object_count()];
    for a in p.arrow_ids() {
        let arr = p.arrow(a);
        incident[arr.source.0].push(a);
        if arr.target != arr.source {
            incident[arr.target.0].push(a);
        }
    }
    let mut component = vec![false; p.object_count()];
    let mut tree = vec![false; p.arrow_count()];
    component[x.0] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for &a in &incident[y.0] {
            let arr = p.arrow(a);
            let other = if arr.source == y { arr.target } else { arr.source };
            if !component[other.0] {
                component[other.0] = true;
                tree[a.0] = true;
                queue.push_back(other);
            }
        }
    }
    let mut g = GroupoidPresentation::trivial(p.object_name(x));
    let o = ObjectId(0);
    let mut arrow_to_generator = vec![None; p.arrow_count()];
    for a in p.arrow_ids() {
        let arr = p.arrow(a);
        if component[arr.source.0] && !tree[a.0] {
            arrow_to_generator[a.0] = Some(g.add_arrow(arr.name.clone(), o, o)?);
        }
    }
    let mut vg = VertexGroup { presentation: g, root: x, arrow_to_generator, component };
    let mut relators = Vec::new();
    for (u, v) in p.relators() {
        if vg.component[u.source().0] {
            relators.push((vg.anchor(u)?, vg.anchor(v)?));
        }
    }
    for (u, v) in relators {
        if u != v {
            vg.presentation.add_relator(u, v)?;
        }
    }
    Ok(vg)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Invariant factors ≥ 2, each dividing the next.
    pub torsion: Vec<i64>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        write!(f, "({}, [{}])", self.free_rank, t.join(", "))
    }
}

/// Integer exponent-sum matrix of `u·v⁻¹` over all relators.
pub fn relator_matrix(g: &GroupoidPresentation) -> Vec<Vec<i64>> {
    let n = g.arrow_count();
    g.relators()
        .iter()
        .map(|(u, v)| {
            let (a, b) = (u.exponent_sums(n), v.exponent_sums(n));
            a.iter().zip(&b).map(|(x, y)| x - y).collect()
        })
        .collect()
}

pub fn abelian_invariants(g: &GroupoidPresentation) -> Result<AbelianInvariants> {
    if g.object_count() != 1 {
        return Err(Error::Contract(format!(
            "abelian invariants need a one-object presentation, got {} objects",
            g.object_count()
        )));
    }
    let s = smith_normal_form(&relator_matrix(g), g.arrow_count())?;
    Ok(AbelianInvariants { free_rank: s.free_rank(), torsion: s.torsion() })
}

/// Abelian invariants and homomorphism counts into every group of order at
/// most `max_order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    pub abelian: AbelianInvariants,
    pub hom_counts: Vec<(String, u64)>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.abelian)?;
        for (name, n) in &self.hom_counts {
            write!(f, " {name}:{n}")?;
        }
        Ok(())
    }
}

/// Fingerprint of a one-object presentation, computed on its Tietze
/// simplification.
pub fn fingerprint(g: &GroupoidPresentation, max_order: usize, budget: u64) -> Result<Fingerprint> {
    let abelian = abelian_invariants(g)?;
    let simple = simplify(&LoopPresentation::from_presentation(g)?).presentation.to_presentation("*");
    let hom_counts = small_groups(max_order)
        .iter()
        .map(|t| Ok((t.name().to_string(), hom_count(&simple, t, budget)?)))
        .collect::<Result<_>>()?;
    Ok(Fingerprint { abelian, hom_counts })
}
