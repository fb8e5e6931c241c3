//! Jones polynomial of a braid closure by recursive Kauffman-bracket
//! resolution.
//!
//! Each crossing is resolved into the identity smoothing and the cup-cap
//! smoothing `e_i`, recursing on words over the mixed alphabet until only
//! smoothings remain; those are evaluated by counting closed loops. The
//! bracket lives in `Z[A, A^-1]` and is converted to `q` through
//! `A^2 = -q`, which makes the unknot `q + q^-1` and gives the skein relation
//! `q^2 J(L+) - q^-2 J(L-) = (q - q^-1) J(L0)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::knotio::{BraidWord, Sign};
use crate::ring::{rational, LaurentPoly};

pub const DEFAULT_SKEIN_BUDGET: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Letter {
    Crossing(usize, Sign),
    Smoothing(usize),
}

struct Bracket {
    strands: usize,
    memo: HashMap<String, LaurentPoly>,
}

impl Bracket {
    fn key(&self, word: &[Letter]) -> String {
        let mut s = format!("{}:", self.strands);
        for l in word {
            let _ = match l {
                Letter::Crossing(i, Sign::Positive) => write!(s, " {i}"),
                Letter::Crossing(i, Sign::Negative) => write!(s, " -{i}"),
                Letter::Smoothing(i) => write!(s, " e{i}"),
            };
        }
        s
    }

    /// Bracket of the closure of `word`, as a polynomial in `A`.
    fn eval(&mut self, word: &[Letter]) -> LaurentPoly {
        let Some(pos) = word.iter().position(|l| matches!(l, Letter::Crossing(..))) else {
            let delta = -(&LaurentPoly::q_pow(2) + &LaurentPoly::q_pow(-2));
            return delta.pow(self.loops(word) as u32);
        };
        let key = self.key(word);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let Letter::Crossing(i, sign) = word[pos] else {
            unreachable!()
        };
        let mut identity = word.to_vec();
        identity.remove(pos);
        let mut cupcap = word.to_vec();
        cupcap[pos] = Letter::Smoothing(i);
        let a = sign.value();
        let v = &self.eval(&identity).shift(a) + &self.eval(&cupcap).shift(-a);
        self.memo.insert(key, v.clone());
        v
    }

    /// Closed loops in the closure of a word of smoothings.
    fn loops(&self, word: &[Letter]) -> usize {
        let k = self.strands;
        let levels = word.len() + 1;
        let node = |p: usize, t: usize| p * levels + t;
        let mut parent: Vec<usize> = (0..k * levels).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut join = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        };
        for (t, l) in word.iter().enumerate() {
            let Letter::Smoothing(i) = *l else { unreachable!() };
            for p in 0..k {
                if p + 1 != i && p != i {
                    join(node(p, t), node(p, t + 1));
                }
            }
            join(node(i - 1, t), node(i, t));
            join(node(i - 1, t + 1), node(i, t + 1));
        }
        for p in 0..k {
            join(node(p, 0), node(p, levels - 1));
        }
        (0..k * levels).filter(|&x| find(&mut parent, x) == x).count()
    }
}

/// Jones polynomial of the closure of `b`, with the default letter budget.
pub fn skein_jones(b: &BraidWord) -> Result<LaurentPoly> {
    skein_jones_with_budget(b, DEFAULT_SKEIN_BUDGET)
}

pub fn skein_jones_with_budget(b: &BraidWord, budget: usize) -> Result<LaurentPoly> {
    if b.len() > budget {
        return Err(Error::RecursionBudget {
            letters: b.len(),
            budget,
        });
    }
    let word: Vec<Letter> = b.letters().iter().map(|g| Letter::Crossing(g.index, g.sign)).collect();
    let mut bracket = Bracket {
        strands: b.strands(),
        memo: HashMap::new(),
    };
    let raw = bracket.eval(&word);
    // writhe normalization (-A^3)^-w
    let w = b.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = raw.shift(-3 * w).scale(&rational(sign, 1));
    Ok(a_to_q(&normalized))
}

/// Substitutes `A^2 = -q`; every exponent is even after normalization.
fn a_to_q(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(e, c)| {
        assert!(e % 2 == 0, "odd power of A in a normalized bracket");
        let k = e / 2;
        let c = if k % 2 == 0 { c.clone() } else { -c.clone() };
        (k, c)
    }))
}
