#![allow(dead_code)]

use permajones::knotio::BraidWord;
use permajones::ring::LaurentPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn braid(s: &str) -> BraidWord {
    s.parse().unwrap()
}

pub fn poly(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random word on 1..=max_strands strands with at most max_letters letters.
pub fn random_braid(rng: &mut impl Rng, max_strands: usize, max_letters: usize) -> BraidWord {
    let strands = rng.gen_range(1..=max_strands);
    let letters: Vec<i64> = if strands == 1 {
        Vec::new()
    } else {
        let len = rng.gen_range(0..=max_letters);
        (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands) as i64;
                if rng.gen() {
                    i
                } else {
                    -i
                }
            })
            .collect()
    };
    BraidWord::from_signed(strands, &letters).unwrap()
}

/// Random word with at least one letter.
pub fn random_nonempty_braid(rng: &mut impl Rng, max_strands: usize, max_letters: usize) -> BraidWord {
    loop {
        let b = random_braid(rng, max_strands, max_letters);
        if !b.is_empty() {
            return b;
        }
    }
}

pub const SUITE: [&str; 8] = [
    "1:",
    "2: 1",
    "2: -1",
    "2: 1 1",
    "2: -1 -1",
    "2: 1 1 1",
    "2: -1 -1 -1",
    "3: 1 -2 1 -2",
];
