//! Local weights of the `U_q(sl_2)` vertex model at a crossing.
//!
//! A crossing sees four arc colors: two incoming (left, right) and two
//! outgoing (left, right). The six color patterns with as many 1-colored
//! incoming as outgoing arcs are the allowed local states `A1..A6`.
//!
//! | state | in (l,r) | out (l,r) | R+        | R-        |
//! |-------|----------|-----------|-----------|-----------|
//! | A1    | 0 0      | 0 0       | q         | q^-1      |
//! | A2    | 0 1      | 0 1       | q - q^-1  | 0         |
//! | A3    | 0 1      | 1 0       | 1         | 1         |
//! | A4    | 1 0      | 0 1       | 1         | 1         |
//! | A5    | 1 0      | 1 0       | 0         | q^-1 - q  |
//! | A6    | 1 1      | 1 1       | q         | q^-1      |
//!
//! The outgoing left arc is `e1` and the outgoing right arc is `e2` in the
//! rotation-absorbing B weights: a 0-colored outgoing arc with rotation `r`
//! contributes `q^r`, a 1-colored one `q^-r`.

use std::fmt;

use crate::knotio::Sign;
use crate::ring::LaurentPoly;

/// Colors of the four arcs at a crossing; `true` is color 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPattern {
    pub in_left: bool,
    pub in_right: bool,
    pub out_left: bool,
    pub out_right: bool,
}

impl BoundaryPattern {
    pub const fn new(in_left: bool, in_right: bool, out_left: bool, out_right: bool) -> Self {
        Self {
            in_left,
            in_right,
            out_left,
            out_right,
        }
    }

    /// All 16 patterns; bit 3..0 of the index are in_left, in_right,
    /// out_left, out_right.
    pub fn all() -> impl Iterator<Item = BoundaryPattern> {
        (0u8..16).map(|bits| Self::new(bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0))
    }

    pub fn ones_in(&self) -> usize {
        self.in_left as usize + self.in_right as usize
    }

    pub fn ones_out(&self) -> usize {
        self.out_left as usize + self.out_right as usize
    }

    pub fn is_conserving(&self) -> bool {
        self.ones_in() == self.ones_out()
    }

    pub fn local_state(&self) -> Option<LocalState> {
        LocalState::ALL.into_iter().find(|s| s.pattern() == *self)
    }
}

impl fmt::Display for BoundaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |x: bool| if x { '1' } else { '0' };
        write!(
            f,
            "in {}{} -> out {}{}",
            b(self.in_left),
            b(self.in_right),
            b(self.out_left),
            b(self.out_right)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalState {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
}

impl LocalState {
    pub const ALL: [LocalState; 6] = [
        LocalState::A1,
        LocalState::A2,
        LocalState::A3,
        LocalState::A4,
        LocalState::A5,
        LocalState::A6,
    ];

    pub fn pattern(self) -> BoundaryPattern {
        let (a, b, c, d) = match self {
            LocalState::A1 => (false, false, false, false),
            LocalState::A2 => (false, true, false, true),
            LocalState::A3 => (false, true, true, false),
            LocalState::A4 => (true, false, false, true),
            LocalState::A5 => (true, false, true, false),
            LocalState::A6 => (true, true, true, true),
        };
        BoundaryPattern::new(a, b, c, d)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The R weight of a local state at a crossing of the given sign.
pub fn r_weight(sign: Sign, state: LocalState) -> LaurentPoly {
    use LocalState::*;
    let q = LaurentPoly::q;
    let qbar = || LaurentPoly::q_pow(-1);
    match (sign, state) {
        (Sign::Positive, A1 | A6) => q(),
        (Sign::Positive, A2) => &q() - &qbar(),
        (Sign::Positive, A3 | A4) => LaurentPoly::one(),
        (Sign::Positive, A5) => LaurentPoly::zero(),
        (Sign::Negative, A1 | A6) => qbar(),
        (Sign::Negative, A2) => LaurentPoly::zero(),
        (Sign::Negative, A3 | A4) => LaurentPoly::one(),
        (Sign::Negative, A5) => &qbar() - &q(),
    }
}

/// The six R weights of a sign, in state order `A1..A6`.
pub fn r_row(sign: Sign) -> [LaurentPoly; 6] {
    LocalState::ALL.map(|s| r_weight(sign, s))
}

/// R weight of an arbitrary boundary pattern; zero off the six local states.
pub fn pattern_r_weight(sign: Sign, pattern: BoundaryPattern) -> LaurentPoly {
    pattern
        .local_state()
        .map_or_else(LaurentPoly::zero, |s| r_weight(sign, s))
}

/// The B weight: the R weight times the rotation phase of the two outgoing
/// arcs, whose rotation numbers are `r_left` and `r_right`.
pub fn b_weight(sign: Sign, state: LocalState, r_left: i64, r_right: i64) -> LaurentPoly {
    let p = state.pattern();
    let phase = |colored: bool, r: i64| if colored { -r } else { r };
    r_weight(sign, state).shift(phase(p.out_left, r_left) + phase(p.out_right, r_right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn six_conserving_patterns() {
        let conserving: Vec<_> = BoundaryPattern::all().filter(|p| p.is_conserving()).collect();
        assert_eq!(conserving.len(), 6);
        let mut counts: Vec<usize> = conserving.iter().map(|p| p.ones_in()).collect();
        counts.sort();
        assert_eq!(counts, vec![0, 1, 1, 1, 1, 2]);
        for p in conserving {
            assert!(p.local_state().is_some());
        }
        assert_eq!(BoundaryPattern::all().filter_map(|p| p.local_state()).count(), 6);
    }

    #[test]
    fn r_rows() {
        assert_eq!(
            r_row(Sign::Positive),
            [p("q"), p("q - q^-1"), p("1"), p("1"), p("0"), p("q")]
        );
        assert_eq!(
            r_row(Sign::Negative),
            [p("q^-1"), p("0"), p("1"), p("1"), p("q^-1 - q"), p("q^-1")]
        );
    }

    #[test]
    fn b_rows_follow_outgoing_colors() {
        let (r1, r2) = (2, -3);
        let b: Vec<_> = LocalState::ALL
            .iter()
            .map(|&s| b_weight(Sign::Positive, s, r1, r2))
            .collect();
        assert_eq!(b[0], p("q").shift(r1 + r2));
        assert_eq!(b[1], p("q - q^-1").shift(r1 - r2));
        assert_eq!(b[2], p("1").shift(-r1 + r2));
        assert_eq!(b[3], p("1").shift(r1 - r2));
        assert!(b[4].is_zero());
        assert_eq!(b[5], p("q").shift(-r1 - r2));
        let bn: Vec<_> = LocalState::ALL
            .iter()
            .map(|&s| b_weight(Sign::Negative, s, r1, r2))
            .collect();
        assert_eq!(bn[0], p("q^-1").shift(r1 + r2));
        assert_eq!(bn[4], p("q^-1 - q").shift(-r1 + r2));
        assert_eq!(bn[5], p("q^-1").shift(-r1 - r2));
    }

    #[test]
    fn skein_difference_is_scalar() {
        // R+ - R- = (q - q^-1) on every state that keeps colors in place
        let diff = p("q - q^-1");
        for s in LocalState::ALL {
            let d = &r_weight(Sign::Positive, s) - &r_weight(Sign::Negative, s);
            let keeps = matches!(s, LocalState::A1 | LocalState::A2 | LocalState::A5 | LocalState::A6);
            assert_eq!(d, if keeps { diff.clone() } else { LaurentPoly::zero() }, "{s:?}");
        }
    }
}
