#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use vkampen::presentation::{GroupoidPresentation, Letter, ObjectId, Word};

/// A random reduced word of at most `len` letters starting at a random
/// object, built by walking the generator graph.
pub fn random_word<R: Rng>(p: &GroupoidPresentation, len: usize, rng: &mut R) -> Word {
    let start = ObjectId(rng.gen_range(0..p.object_count()));
    random_word_at(p, start, len, rng)
}

pub fn random_word_at<R: Rng>(p: &GroupoidPresentation, start: ObjectId, len: usize, rng: &mut R) -> Word {
    let mut letters = Vec::new();
    let mut at = start;
    for _ in 0..len {
        let options: Vec<Letter> = p
            .arrow_ids()
            .flat_map(|a| [Letter::new(a), Letter::new(a).inv()])
            .filter(|&l| p.letter_endpoints(l).0 == at)
            .collect();
        let Some(&l) = options.choose(rng) else { break };
        letters.push(l);
        at = p.letter_endpoints(l).1;
    }
    p.word(start, &letters).expect("walks compose")
}
