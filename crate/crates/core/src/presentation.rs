//! Finitely presented groupoids.
//!
//! A [`GroupoidPresentation`] has named objects, generating arrows with
//! endpoints, and relators given as pairs of parallel words. Words are kept
//! freely reduced from construction onwards, so `==` on [`Word`] is equality
//! in the free groupoid.
//!
//! Composition follows the categorical convention: `compose(g, f)` is "`f`
//! then `g`" and requires `target(f) == source(g)`. Letters inside a word are
//! stored in path order (first letter is traversed first).

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ObjectId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArrowId(pub usize);

/// A generating arrow or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub arrow: ArrowId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(arrow: ArrowId) -> Self {
        Letter { arrow, inverse: false }
    }

    pub fn inv(self) -> Self {
        Letter { arrow: self.arrow, inverse: !self.inverse }
    }

    /// Dense encoding `2 * arrow + inverse`, used by the rewriting and
    /// enumeration backends.
    pub fn code(self) -> u32 {
        (self.arrow.0 as u32) << 1 | self.inverse as u32
    }

    pub fn from_code(code: u32) -> Self {
        Letter { arrow: ArrowId((code >> 1) as usize), inverse: code & 1 == 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: ObjectId,
    pub target: ObjectId,
}

/// A freely reduced composable word with explicit endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word {
    source: ObjectId,
    target: ObjectId,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(object: ObjectId) -> Self {
        Word { source: object, target: object, letters: Vec::new() }
    }

    pub fn source(&self) -> ObjectId {
        self.source
    }

    pub fn target(&self) -> ObjectId {
        self.target
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.source == self.target
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    pub fn inverse(&self) -> Word {
        invert(self)
    }

    /// Exponent sum of every generator, indexed by arrow id.
    pub fn exponent_sums(&self, arrows: usize) -> Vec<i64> {
        let mut out = vec![0i64; arrows];
        for l in &self.letters {
            out[l.arrow.0] += if l.inverse { -1 } else { 1 };
        }
        out
    }
}

/// Cancels adjacent letter/inverse pairs with a stack; the result is the
/// unique freely reduced representative.
pub fn reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GroupoidPresentation {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    relators: Vec<(Word, Word)>,
    #[serde(skip)]
    object_index: HashMap<String, ObjectId>,
    #[serde(skip)]
    arrow_index: HashMap<String, ArrowId>,
}

impl GroupoidPresentation {
    pub fn new() -> Self {
        Self::default()
    }

    /// One object, no arrows.
    pub fn trivial(object: &str) -> Self {
        let mut p = Self::new();
        p.add_object(object).expect("fresh presentation");
        p
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Result<ObjectId> {
        let name = name.into();
        if self.object_index.contains_key(&name) {
            return Err(Error::Structural(format!("duplicate object `{name}`")));
        }
        let id = ObjectId(self.objects.len());
        self.object_index.insert(name.clone(), id);
        self.objects.push(name);
        Ok(id)
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        source: ObjectId,
        target: ObjectId,
    ) -> Result<ArrowId> {
        let name = name.into();
        if self.arrow_index.contains_key(&name) {
            return Err(Error::Structural(format!("duplicate arrow `{name}`")));
        }
        for o in [source, target] {
            if o.0 >= self.objects.len() {
                return Err(Error::lookup("object", o.0));
            }
        }
        let id = ArrowId(self.arrows.len());
        self.arrow_index.insert(name.clone(), id);
        self.arrows.push(Arrow { name, source, target });
        Ok(id)
    }

    /// Declares `u = v`. Both words must belong to this presentation and be
    /// parallel.
    pub fn add_relator(&mut self, u: Word, v: Word) -> Result<()> {
        self.check_word(&u)?;
        self.check_word(&v)?;
        if u.source != v.source || u.target != v.target {
            return Err(Error::Structural(format!(
                "relator sides are not parallel: {} vs {}",
                self.display_word(&u),
                self.display_word(&v)
            )));
        }
        self.relators.push((u, v));
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.objects.len()).map(ObjectId)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn relators(&self) -> &[(Word, Word)] {
        &self.relators
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o.0]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn object_by_name(&self, name: &str) -> Result<ObjectId> {
        self.object_index.get(name).copied().ok_or_else(|| Error::lookup("object", name))
    }

    pub fn arrow_by_name(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index.get(name).copied().ok_or_else(|| Error::lookup("arrow", name))
    }

    /// `(source, target)` of a letter, accounting for inversion.
    pub fn letter_endpoints(&self, l: Letter) -> (ObjectId, ObjectId) {
        let a = &self.arrows[l.arrow.0];
        if l.inverse {
            (a.target, a.source)
        } else {
            (a.source, a.target)
        }
    }

    /// Validates composability starting at `source` and reduces.
    pub fn word(&self, source: ObjectId, letters: &[Letter]) -> Result<Word> {
        free_reduce(self, source, letters)
    }

    pub fn generator(&self, a: ArrowId) -> Word {
        let arrow = &self.arrows[a.0];
        Word { source: arrow.source, target: arrow.target, letters: vec![Letter::new(a)] }
    }

    /// Parses whitespace-separated arrow names, `x^-1` for inverses.
    /// An empty string is the identity at `source`.
    pub fn parse_word(&self, source: &str, text: &str) -> Result<Word> {
        let src = self.object_by_name(source)?;
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            letters.push(Letter { arrow: self.arrow_by_name(name)?, inverse });
        }
        self.word(src, &letters)
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        let mut at = w.source;
        if at.0 >= self.objects.len() {
            return Err(Error::lookup("object", at.0));
        }
        for &l in &w.letters {
            if l.arrow.0 >= self.arrows.len() {
                return Err(Error::lookup("arrow", l.arrow.0));
            }
            let (s, t) = self.letter_endpoints(l);
            if s != at {
                return Err(Error::MalformedWord(format!(
                    "letter {} starts at `{}`, expected `{}`",
                    self.display_letter(l),
                    self.objects[s.0],
                    self.objects[at.0]
                )));
            }
            at = t;
        }
        if at != w.target {
            return Err(Error::MalformedWord("word ends at the wrong object".into()));
        }
        Ok(())
    }

    pub fn display_letter(&self, l: Letter) -> String {
        let name = &self.arrows[l.arrow.0].name;
        if l.inverse {
            format!("{name}^-1")
        } else {
            name.clone()
        }
    }

    pub fn display_word(&self, w: &Word) -> String {
        if w.letters.is_empty() {
            return format!("1_{}", self.objects[w.source.0]);
        }
        w.letters.iter().map(|&l| self.display_letter(l)).collect::<Vec<_>>().join(" ")
    }

    /// Number of connected components of the generator graph.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.objects.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let n = p[x];
                p[x] = r;
                x = n;
            }
            r
        }
        for a in &self.arrows {
            let (x, y) = (find(&mut parent, a.source.0), find(&mut parent, a.target.0));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        (0..self.objects.len()).map(|i| find(&mut parent, i)).collect()
    }
}

impl fmt::Display for GroupoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objects: {}", self.objects.join(", "))?;
        for a in &self.arrows {
            writeln!(
                f,
                "  {}: {} -> {}",
                a.name, self.objects[a.source.0], self.objects[a.target.0]
            )?;
        }
        for (u, v) in &self.relators {
            writeln!(f, "  {} = {}", self.display_word(u), self.display_word(v))?;
        }
        Ok(())
    }
}

/// Validates `letters` as a composable word from `source` in `p` and returns
/// its free normal form.
pub fn free_reduce(p: &GroupoidPresentation, source: ObjectId, letters: &[Letter]) -> Result<Word> {
    let mut at = source;
    if at.0 >= p.objects.len() {
        return Err(Error::lookup("object", at.0));
    }
    for &l in letters {
        if l.arrow.0 >= p.arrows.len() {
            return Err(Error::lookup("arrow", l.arrow.0));
        }
        let (s, t) = p.letter_endpoints(l);
        if s != at {
            return Err(Error::MalformedWord(format!(
                "letter {} does not compose after `{}`",
                p.display_letter(l),
                p.objects[at.0]
            )));
        }
        at = t;
    }
    Ok(Word { source, target: at, letters: reduce_letters(letters.iter().copied()) })
}

/// `compose(g, f)` is `f` followed by `g`.
pub fn compose(g: &Word, f: &Word) -> Result<Word> {
    if f.target != g.source {
        return Err(Error::Composition(format!(
            "target {:?} of the first morphism differs from source {:?} of the second",
            f.target, g.source
        )));
    }
    let letters = reduce_letters(f.letters.iter().chain(&g.letters).copied());
    Ok(Word { source: f.source, target: g.target, letters })
}

pub fn invert(w: &Word) -> Word {
    Word {
        source: w.target,
        target: w.source,
        letters: w.letters.iter().rev().map(|l| l.inv()).collect(),
    }
}

/// A functor between presented groupoids, given on generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationMorphism {
    object_map: Vec<ObjectId>,
    arrow_map: Vec<Word>,
}

impl PresentationMorphism {
    /// Checks endpoint compatibility of every generator image against the
    /// two presentations. Relator preservation is not checked here.
    pub fn new(
        source: &GroupoidPresentation,
        target: &GroupoidPresentation,
        object_map: Vec<ObjectId>,
        arrow_map: Vec<Word>,
    ) -> Result<Self> {
        if object_map.len() != source.object_count() || arrow_map.len() != source.arrow_count() {
            return Err(Error::Structural("morphism arity does not match its source".into()));
        }
        if let Some(o) = object_map.iter().find(|o| o.0 >= target.object_count()) {
            return Err(Error::lookup("object", o.0));
        }
        for (a, img) in source.arrows.iter().zip(&arrow_map) {
            target.check_word(img)?;
            if img.source != object_map[a.source.0] || img.target != object_map[a.target.0] {
                return Err(Error::Structural(format!(
                    "image of `{}` has the wrong endpoints",
                    a.name
                )));
            }
        }
        Ok(PresentationMorphism { object_map, arrow_map })
    }

    pub(crate) fn from_parts(object_map: Vec<ObjectId>, arrow_map: Vec<Word>) -> Self {
        PresentationMorphism { object_map, arrow_map }
    }

    pub fn identity(p: &GroupoidPresentation) -> Self {
        PresentationMorphism {
            object_map: p.object_ids().collect(),
            arrow_map: p.arrow_ids().map(|a| p.generator(a)).collect(),
        }
    }

    pub fn object_map(&self) -> &[ObjectId] {
        &self.object_map
    }

    pub fn arrow_map(&self) -> &[Word] {
        &self.arrow_map
    }

    pub fn map_object(&self, o: ObjectId) -> ObjectId {
        self.object_map[o.0]
    }

    pub fn image(&self, a: ArrowId) -> &Word {
        &self.arrow_map[a.0]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        apply_morphism(self, w)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &PresentationMorphism) -> Result<PresentationMorphism> {
        let object_map = first.object_map.iter().map(|o| self.map_object(*o)).collect();
        let arrow_map = first.arrow_map.iter().map(|w| self.apply(w)).collect::<Result<_>>()?;
        Ok(PresentationMorphism { object_map, arrow_map })
    }
}

/// Letterwise substitution followed by free reduction.
pub fn apply_morphism(m: &PresentationMorphism, w: &Word) -> Result<Word> {
    let source = *m
        .object_map
        .get(w.source.0)
        .ok_or_else(|| Error::lookup("object", w.source.0))?;
    let mut at = source;
    let mut letters = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        let img = m.arrow_map.get(l.arrow.0).ok_or_else(|| Error::lookup("arrow", l.arrow.0))?;
        let (s, t) = if l.inverse { (img.target, img.source) } else { (img.source, img.target) };
        if s != at {
            return Err(Error::Composition("generator images do not chain".into()));
        }
        at = t;
        if l.inverse {
            letters.extend(img.letters.iter().rev().map(|x| x.inv()));
        } else {
            letters.extend_from_slice(&img.letters);
        }
    }
    Ok(Word { source, target: at, letters: reduce_letters(letters) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> GroupoidPresentation {
        // x -a-> y -b-> z -c-> w
        let mut p = GroupoidPresentation::new();
        let x = p.add_object("x").unwrap();
        let y = p.add_object("y").unwrap();
        let z = p.add_object("z").unwrap();
        let w = p.add_object("w").unwrap();
        p.add_arrow("a", x, y).unwrap();
        p.add_arrow("b", y, z).unwrap();
        p.add_arrow("c", z, w).unwrap();
        p
    }

    #[test]
    fn cancellation() {
        let p = path3();
        let w = p.parse_word("x", "a a^-1").unwrap();
        assert!(w.is_identity());
        assert_eq!(w.source(), p.object_by_name("x").unwrap());
    }

    #[test]
    fn inner_cancellation() {
        let p = path3();
        let w = p.parse_word("x", "a b b^-1 b").unwrap();
        assert_eq!(p.display_word(&w), "a b");
        let d = p.parse_word("x", "a b b^-1 a^-1 a b c").unwrap();
        assert_eq!(p.display_word(&d), "a b c");
    }

    #[test]
    fn reduced_word_is_fixed() {
        let p = path3();
        let w = p.parse_word("x", "a b").unwrap();
        let again = free_reduce(&p, w.source(), w.letters()).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn malformed_word_rejected() {
        let p = path3();
        assert!(matches!(p.parse_word("x", "b"), Err(Error::MalformedWord(_))));
        assert!(matches!(p.parse_word("x", "a c"), Err(Error::MalformedWord(_))));
    }

    #[test]
    fn compose_examples() {
        let p = path3();
        let x = p.object_by_name("x").unwrap();
        let e = Word::identity(x);
        assert_eq!(compose(&e, &e).unwrap(), e);
        let a = p.parse_word("x", "a").unwrap();
        let b = p.parse_word("y", "b").unwrap();
        let ba = compose(&b, &a).unwrap();
        assert_eq!(p.display_word(&ba), "a b");
        assert_eq!(ba.source(), x);
        assert_eq!(ba.target(), p.object_by_name("z").unwrap());
        let back = compose(&invert(&a), &a).unwrap();
        assert!(back.is_identity() && back.source() == x);
        assert!(matches!(compose(&a, &b), Err(Error::Composition(_))));
    }

    #[test]
    fn morphism_inverts_images() {
        // m(a) = c d, so m(a^-1) = d^-1 c^-1.
        let mut src = GroupoidPresentation::new();
        let s0 = src.add_object("s0").unwrap();
        let s1 = src.add_object("s1").unwrap();
        src.add_arrow("a", s0, s1).unwrap();
        let mut tgt = GroupoidPresentation::new();
        let t0 = tgt.add_object("t0").unwrap();
        let t1 = tgt.add_object("t1").unwrap();
        let t2 = tgt.add_object("t2").unwrap();
        tgt.add_arrow("c", t0, t1).unwrap();
        tgt.add_arrow("d", t1, t2).unwrap();
        let m = PresentationMorphism::new(
            &src,
            &tgt,
            vec![t0, t2],
            vec![tgt.parse_word("t0", "c d").unwrap()],
        )
        .unwrap();
        let w = src.parse_word("s1", "a^-1").unwrap();
        assert_eq!(tgt.display_word(&m.apply(&w).unwrap()), "d^-1 c^-1");

        let id = PresentationMorphism::identity(&src);
        let w = src.parse_word("s0", "a").unwrap();
        assert_eq!(id.apply(&w).unwrap(), w);
    }

    #[test]
    fn interval_collapses_to_loop() {
        let mut interval = GroupoidPresentation::new();
        let o0 = interval.add_object("0").unwrap();
        let o1 = interval.add_object("1").unwrap();
        interval.add_arrow("iota", o0, o1).unwrap();
        let mut z = GroupoidPresentation::new();
        let pt = z.add_object("*").unwrap();
        z.add_arrow("z", pt, pt).unwrap();
        let m = PresentationMorphism::new(
            &interval,
            &z,
            vec![pt, pt],
            vec![z.parse_word("*", "z").unwrap()],
        )
        .unwrap();
        let img = m.apply(&interval.parse_word("0", "iota").unwrap()).unwrap();
        assert_eq!(z.display_word(&img), "z");
    }

    #[test]
    fn morphism_endpoint_check() {
        let src = path3();
        let tgt = path3();
        let ids: Vec<_> = src.object_ids().collect();
        let mut images: Vec<_> = src.arrow_ids().map(|a| tgt.generator(a)).collect();
        images[0] = tgt.parse_word("y", "b").unwrap();
        assert!(PresentationMorphism::new(&src, &tgt, ids, images).is_err());
    }

    #[test]
    fn relators_must_be_parallel() {
        let mut p = path3();
        let a = p.parse_word("x", "a").unwrap();
        let ab = p.parse_word("x", "a b").unwrap();
        assert!(p.add_relator(a.clone(), ab).is_err());
        assert!(p.add_relator(a.clone(), a).is_ok());
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut p = path3();
        assert!(p.add_object("x").is_err());
        let x = p.object_by_name("x").unwrap();
        assert!(p.add_arrow("a", x, x).is_err());
    }
}
