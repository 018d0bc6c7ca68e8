//! Word equality in a presented groupoid: free reduction, rewriting,
//! abelianization and finite quotients, in that order.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::rewriting::{knuth_bendix, KbLimits, RewritingSystem};
use crate::colimits::finite::{codes, random_solution};
use crate::colimits::tietze::invert as invert_codes;
use crate::colimits::{
    enumerate_homs, simplify, small_groups, smith_normal_form, vertex_group, FiniteGroup, LoopPresentation,
    Simplified, SmithForm, VertexGroup,
};
use crate::error::{Error, Result};
use crate::presentation::{GroupoidPresentation, ObjectId, Word};

#[derive(Debug, Clone, Copy)]
pub struct BatteryConfig {
    pub kb: KbLimits,
    /// Generator orderings tried by completion.
    pub orderings: usize,
    pub hom_max_order: usize,
    /// Homomorphisms enumerated per target group.
    pub hom_limit: usize,
    /// Additional randomly sampled homomorphisms per target group.
    pub random_homs: usize,
    pub hom_budget: u64,
    pub seed: u64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            kb: KbLimits::default(),
            orderings: 3,
            hom_max_order: 8,
            hom_limit: 2048,
            random_homs: 128,
            hom_budget: 2_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EqualReason {
    Syntactic,
    /// The words agree after free reduction and re-anchoring.
    Free,
    /// Both sides rewrite to the same normal form.
    Rewriting { confluent: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Separation {
    /// Different normal forms under a confluent system.
    NormalForms { left: Vec<u32>, right: Vec<u32> },
    /// Exponent vector of `u v⁻¹` outside the relator lattice.
    Abelianization { exponents: Vec<i64> },
    /// Generator values (of the vertex group) in a finite group that
    /// respect all relators and separate the words.
    Hom { group: String, values: Vec<usize> },
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separation::NormalForms { .. } => write!(f, "distinct normal forms"),
            Separation::Abelianization { exponents } => write!(f, "abelianization {exponents:?}"),
            Separation::Hom { group, values } => write!(f, "homomorphism to {group} {values:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnknownReport {
    pub rules: usize,
    pub homs_checked: usize,
}

impl fmt::Display for UnknownReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no proof from {} rules, no separation by {} homomorphisms", self.rules, self.homs_checked)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equal(EqualReason),
    Distinct(Separation),
    Unknown(UnknownReport),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, Verdict::Distinct(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal(r) => write!(f, "equal ({r:?})"),
            Verdict::Distinct(s) => write!(f, "distinct ({s})"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

struct Component {
    anchor: VertexGroup,
    simple: Simplified,
    systems: Vec<RewritingSystem>,
    snf: SmithForm,
    homs: Vec<(FiniteGroup, Vec<Vec<usize>>)>,
}

impl Component {
    fn new(p: &GroupoidPresentation, root: ObjectId, cfg: &BatteryConfig, rng: &mut ChaCha8Rng) -> Result<Self> {
        let anchor = vertex_group(p, root)?;
        let simple = simplify(&LoopPresentation::from_presentation(&anchor.presentation)?);
        let g = &simple.presentation;
        let n = g.generator_count();
        let mut orders: Vec<Vec<usize>> = vec![(0..n).collect(), (0..n).rev().collect()];
        while orders.len() < cfg.orderings {
            let mut o: Vec<usize> = (0..n).collect();
            o.shuffle(rng);
            orders.push(o);
        }
        orders.truncate(cfg.orderings.max(1));
        let mut systems = Vec::new();
        for o in &orders {
            let s = knuth_bendix(n, &g.relators, o, &cfg.kb);
            if s.is_confluent() {
                systems = vec![s];
                break;
            }
            systems.push(s);
        }
        let matrix: Vec<Vec<i64>> = g.relators.iter().map(|r| exponents(r, n)).collect();
        let snf = smith_normal_form(&matrix, n)?;
        let mut homs = Vec::new();
        let tp = g.to_presentation("*");
        for t in small_groups(cfg.hom_max_order) {
            let mut found = match enumerate_homs(&tp, &t, cfg.hom_limit, cfg.hom_budget) {
                Ok(h) => h,
                Err(Error::Budget(_)) => Vec::new(),
                Err(e) => return Err(e),
            };
            for _ in 0..cfg.random_homs {
                match random_solution(rng, n, g.relators.clone(), &t, 2_000) {
                    Some(v) => found.push(v),
                    None => break,
                }
            }
            found.sort();
            found.dedup();
            // the trivial homomorphism separates nothing
            found.retain(|v| v.iter().any(|&x| x != 0));
            homs.push((t, found));
        }
        Ok(Component { anchor, simple, systems, snf, homs })
    }

    fn confluent(&self) -> Option<&RewritingSystem> {
        self.systems.iter().find(|s| s.is_confluent())
    }
}

fn exponents(codes: &[u32], n: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    for &c in codes {
        v[(c >> 1) as usize] += if c & 1 == 1 { -1 } else { 1 };
    }
    v
}

/// Equality oracle for one presentation. Built once; every component gets
/// its vertex group, Tietze simplification, rewriting systems, Smith form
/// and a bank of finite-group homomorphisms.
pub struct Battery {
    presentation: GroupoidPresentation,
    component_of: Vec<usize>,
    components: Vec<Option<Component>>,
}

impl Battery {
    pub fn new(p: &GroupoidPresentation, cfg: &BatteryConfig) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let component_of = p.components();
        let mut components = Vec::with_capacity(p.object_count());
        for o in p.object_ids() {
            components.push(if component_of[o.0] == o.0 { Some(Component::new(p, o, cfg, &mut rng)?) } else { None });
        }
        Ok(Battery { presentation: p.clone(), component_of, components })
    }

    pub fn presentation(&self) -> &GroupoidPresentation {
        &self.presentation
    }

    fn component(&self, o: ObjectId) -> &Component {
        self.components[self.component_of[o.0]].as_ref().expect("roots carry data")
    }

    /// Whether every rewriting backend finished with a confluent system.
    pub fn is_complete(&self) -> bool {
        self.components.iter().flatten().all(|c| c.confluent().is_some())
    }

    /// The loop `u v⁻¹` re-anchored and carried to the simplified group.
    fn difference(&self, u: &Word, v: &Word) -> Result<Vec<u32>> {
        let c = self.component(u.source());
        let mut w = codes(&c.anchor.anchor(u)?);
        w.extend(invert_codes(&codes(&c.anchor.anchor(v)?)));
        Ok(c.simple.map_codes(&w))
    }

    pub fn decide(&self, u: &Word, v: &Word) -> Result<Verdict> {
        self.presentation.check_word(u)?;
        self.presentation.check_word(v)?;
        if u.source() != v.source() || u.target() != v.target() {
            return Err(Error::Contract("words are not parallel".into()));
        }
        if u == v {
            return Ok(Verdict::Equal(EqualReason::Syntactic));
        }
        let w = self.difference(u, v)?;
        if w.is_empty() {
            return Ok(Verdict::Equal(EqualReason::Free));
        }
        let c = self.component(u.source());
        for s in &c.systems {
            if s.reduce(&w).is_empty() {
                return Ok(Verdict::Equal(EqualReason::Rewriting { confluent: s.is_confluent() }));
            }
        }
        if let Some(s) = c.confluent() {
            let left = s.reduce(&c.simple.map_codes(&codes(&c.anchor.anchor(u)?)));
            let right = s.reduce(&c.simple.map_codes(&codes(&c.anchor.anchor(v)?)));
            return Ok(Verdict::Distinct(Separation::NormalForms { left, right }));
        }
        let e = exponents(&w, c.simple.presentation.generator_count());
        if !c.snf.row_lattice_contains(&e)? {
            return Ok(Verdict::Distinct(Separation::Abelianization { exponents: e }));
        }
        let mut checked = 0;
        for (t, homs) in &c.homs {
            for h in homs {
                checked += 1;
                if t.eval_codes(h, &w) != 0 {
                    // express the witness on the vertex-group generators
                    let values = c.simple.images.iter().map(|img| t.eval_codes(h, img)).collect();
                    return Ok(Verdict::Distinct(Separation::Hom { group: t.name().to_string(), values }));
                }
            }
        }
        let rules = c.systems.iter().map(RewritingSystem::rule_count).max().unwrap_or(0);
        Ok(Verdict::Unknown(UnknownReport { rules, homs_checked: checked }))
    }

    /// Re-checks a finite-quotient witness directly on the vertex group:
    /// the values must respect its relators and separate the two anchored
    /// words.
    pub fn verify_separation(&self, u: &Word, v: &Word, s: &Separation) -> Result<bool> {
        let c = self.component(u.source());
        let g = &c.anchor.presentation;
        match s {
            Separation::Hom { group, values } => {
                let Some(t) = small_groups(8).into_iter().find(|t| t.name() == group) else {
                    return Ok(false);
                };
                let respects = g.relators().iter().all(|(a, b)| t.eval_word(values, a) == t.eval_word(values, b));
                let (a, b) = (c.anchor.anchor(u)?, c.anchor.anchor(v)?);
                Ok(respects && t.eval_word(values, &a) != t.eval_word(values, &b))
            }
            Separation::Abelianization { .. } => {
                let n = g.arrow_count();
                let matrix = crate::colimits::relator_matrix(g);
                let snf = smith_normal_form(&matrix, n)?;
                let (a, b) = (c.anchor.anchor(u)?, c.anchor.anchor(v)?);
                let e: Vec<i64> = a.exponent_sums(n).iter().zip(b.exponent_sums(n)).map(|(x, y)| x - y).collect();
                Ok(!snf.row_lattice_contains(&e)?)
            }
            Separation::NormalForms { left, right } => Ok(left != right && c.confluent().is_some()),
        }
    }
}

/// One-shot equality check; builds a battery for `g`.
pub fn decide_equal(g: &GroupoidPresentation, u: &Word, v: &Word, cfg: &BatteryConfig) -> Result<Verdict> {
    Battery::new(g, cfg)?.decide(u, v)
}
