//! Seven-vertex crossing gadgets and their behavioral contract.
//!
//! A gadget replaces one crossing of a diagram. Its four ports are the
//! vertices where the incoming left/right and outgoing left/right arcs attach.
//! For a boundary pattern (which of those four arcs are used by a cycle
//! cover), the gadget contributes the sum over internal configurations:
//! every internal vertex gets exactly one chosen in-edge and one chosen
//! out-edge, except that a 1-colored in-port already has its in-edge (the
//! external arc) and a 1-colored out-port already has its out-edge.
//!
//! A gadget is correct when these sums reproduce the R weights of its
//! crossing sign on the six allowed local states and vanish on the other ten
//! patterns. [`verify_gadget`] checks exactly that; [`find_gadget`] searches
//! a small family of layered topologies for a gadget that passes it.
//!
//! The shipped gadgets in `data/` are the ones [`find_gadget`] returns for the
//! two R rows, frozen so that loading them needs no search.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::knotio::Sign;
use crate::ring::{rational, LaurentPoly, Rational};
use crate::vertex::{pattern_r_weight, r_row, BoundaryPattern, LocalState};

pub const GADGET_VERTICES: usize = 7;

const POSITIVE_DATA: &str = include_str!("../data/gadget_positive.txt");
const NEGATIVE_DATA: &str = include_str!("../data/gadget_negative.txt");

/// Named edge weights. `A..E` belong to positive gadgets, `V..Z` to
/// negative ones; `One` is the undecorated weight 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightName {
    One,
    A,
    B,
    C,
    D,
    E,
    V,
    W,
    X,
    Y,
    Z,
}

impl WeightName {
    pub fn value(self) -> LaurentPoly {
        let q = LaurentPoly::q;
        let qbar = || LaurentPoly::q_pow(-1);
        let half = |p: LaurentPoly| p.scale(&rational(1, 2));
        match self {
            WeightName::One => LaurentPoly::one(),
            WeightName::A => &q() - &qbar(),
            WeightName::B => half(&q() + &qbar()),
            WeightName::C => half(-q()),
            WeightName::D => q(),
            WeightName::E => LaurentPoly::constant(rational(1, 2)),
            WeightName::V => LaurentPoly::constant(rational(1, 2)),
            WeightName::W => &qbar() - &q(),
            WeightName::X => half(&q() + &qbar()),
            WeightName::Y => half(-qbar()),
            WeightName::Z => qbar(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            WeightName::One => '1',
            WeightName::A => 'a',
            WeightName::B => 'b',
            WeightName::C => 'c',
            WeightName::D => 'd',
            WeightName::E => 'e',
            WeightName::V => 'v',
            WeightName::W => 'w',
            WeightName::X => 'x',
            WeightName::Y => 'y',
            WeightName::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<WeightName> {
        Self::ALL.into_iter().find(|w| w.symbol() == c)
    }

    const ALL: [WeightName; 11] = [
        WeightName::One,
        WeightName::A,
        WeightName::B,
        WeightName::C,
        WeightName::D,
        WeightName::E,
        WeightName::V,
        WeightName::W,
        WeightName::X,
        WeightName::Y,
        WeightName::Z,
    ];

    /// The weights a gadget of the given sign may use.
    pub fn alphabet(sign: Sign) -> [WeightName; 6] {
        match sign {
            Sign::Positive => [
                WeightName::One,
                WeightName::A,
                WeightName::B,
                WeightName::C,
                WeightName::D,
                WeightName::E,
            ],
            Sign::Negative => [
                WeightName::One,
                WeightName::V,
                WeightName::W,
                WeightName::X,
                WeightName::Y,
                WeightName::Z,
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    InLeft,
    InRight,
    OutLeft,
    OutRight,
}

impl Port {
    pub const ALL: [Port; 4] = [Port::InLeft, Port::InRight, Port::OutLeft, Port::OutRight];

    fn key(self) -> &'static str {
        match self {
            Port::InLeft => "in_left",
            Port::InRight => "in_right",
            Port::OutLeft => "out_left",
            Port::OutRight => "out_right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GadgetEdge {
    pub tail: usize,
    pub head: usize,
    pub weight: WeightName,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    sign: Sign,
    ports: [usize; 4],
    edges: Vec<GadgetEdge>,
}

impl Gadget {
    pub fn new(sign: Sign, ports: [usize; 4], edges: Vec<GadgetEdge>) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidGadget(m));
        for (i, &p) in ports.iter().enumerate() {
            if p >= GADGET_VERTICES {
                return invalid(format!("port vertex {p} out of range"));
            }
            if ports[..i].contains(&p) {
                return invalid(format!("vertex {p} is used by two ports"));
            }
        }
        let alphabet = WeightName::alphabet(sign);
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            if e.tail >= GADGET_VERTICES || e.head >= GADGET_VERTICES {
                return invalid(format!("edge {} -> {} leaves the gadget", e.tail, e.head));
            }
            if !alphabet.contains(&e.weight) {
                return invalid(format!(
                    "weight '{}' is not allowed at a {sign} crossing",
                    e.weight.symbol()
                ));
            }
            if !seen.insert((e.tail, e.head)) {
                return invalid(format!("duplicate edge {} -> {}", e.tail, e.head));
            }
        }
        Ok(Self { sign, ports, edges })
    }

    /// The certified gadget for a crossing sign.
    pub fn shipped(sign: Sign) -> &'static Gadget {
        static POSITIVE: OnceLock<Gadget> = OnceLock::new();
        static NEGATIVE: OnceLock<Gadget> = OnceLock::new();
        match sign {
            Sign::Positive => POSITIVE.get_or_init(|| POSITIVE_DATA.parse().expect("shipped positive gadget parses")),
            Sign::Negative => NEGATIVE.get_or_init(|| NEGATIVE_DATA.parse().expect("shipped negative gadget parses")),
        }
    }

    pub fn positive() -> &'static Gadget {
        Self::shipped(Sign::Positive)
    }

    pub fn negative() -> &'static Gadget {
        Self::shipped(Sign::Negative)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn port(&self, port: Port) -> usize {
        self.ports[port as usize]
    }

    pub fn edges(&self) -> &[GadgetEdge] {
        &self.edges
    }

    /// Weighted adjacency matrix of the internal edges.
    pub fn weight_matrix(&self) -> Vec<Vec<Option<LaurentPoly>>> {
        let mut m = vec![vec![None; GADGET_VERTICES]; GADGET_VERTICES];
        for e in &self.edges {
            m[e.tail][e.head] = Some(e.weight.value());
        }
        m
    }
}

impl fmt::Display for Gadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sign {}", self.sign)?;
        write!(f, "ports")?;
        for p in Port::ALL {
            write!(f, " {}={}", p.key(), self.port(p))?;
        }
        writeln!(f)?;
        for e in &self.edges {
            writeln!(f, "{} {} {}", e.tail, e.head, e.weight.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Gadget {
    type Err = Error;

    /// Reads the edge-list form written by `Display`; `#` lines are comments.
    fn from_str(s: &str) -> Result<Self> {
        let mut sign = None;
        let mut ports: Option<[usize; 4]> = None;
        let mut edges = Vec::new();
        let mut offset = 0;
        for line in s.split_inclusive('\n') {
            let at = offset;
            offset += line.len();
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let syntax = |message: &str| Error::Syntax {
                position: at,
                message: message.to_string(),
            };
            let fields: Vec<&str> = text.split_whitespace().collect();
            match fields[0] {
                "sign" => {
                    sign = Some(match fields.get(1) {
                        Some(&"+") => Sign::Positive,
                        Some(&"-") => Sign::Negative,
                        _ => return Err(syntax("expected 'sign +' or 'sign -'")),
                    });
                }
                "ports" => {
                    let mut out = [usize::MAX; 4];
                    for field in &fields[1..] {
                        let (key, value) = field.split_once('=').ok_or_else(|| syntax("expected port=vertex"))?;
                        let port = Port::ALL
                            .into_iter()
                            .find(|p| p.key() == key)
                            .ok_or_else(|| syntax("unknown port name"))?;
                        out[port as usize] = value.parse().map_err(|_| syntax("bad port vertex"))?;
                    }
                    if out.contains(&usize::MAX) {
                        return Err(syntax("all four ports must be given"));
                    }
                    ports = Some(out);
                }
                _ => {
                    let [tail, head, weight] = fields[..] else {
                        return Err(syntax("expected 'tail head weight'"));
                    };
                    let mut chars = weight.chars();
                    let weight = match (chars.next(), chars.next()) {
                        (Some(c), None) => WeightName::from_symbol(c),
                        _ => None,
                    }
                    .ok_or_else(|| syntax("unknown weight name"))?;
                    edges.push(GadgetEdge {
                        tail: tail.parse().map_err(|_| syntax("bad tail vertex"))?,
                        head: head.parse().map_err(|_| syntax("bad head vertex"))?,
                        weight,
                    });
                }
            }
        }
        let missing = |what: &str| Error::InvalidGadget(format!("missing {what} line"));
        Gadget::new(
            sign.ok_or_else(|| missing("sign"))?,
            ports.ok_or_else(|| missing("ports"))?,
            edges,
        )
    }
}

/// Sum over internal configurations compatible with `pattern` of the product
/// of edge weights, by direct enumeration of the partial permutations.
pub fn pattern_weight_sum(g: &Gadget, pattern: BoundaryPattern) -> LaurentPoly {
    let exits: Vec<usize> = [(pattern.out_left, Port::OutLeft), (pattern.out_right, Port::OutRight)]
        .into_iter()
        .filter(|(c, _)| *c)
        .map(|(_, p)| g.port(p))
        .collect();
    let entries: Vec<usize> = [(pattern.in_left, Port::InLeft), (pattern.in_right, Port::InRight)]
        .into_iter()
        .filter(|(c, _)| *c)
        .map(|(_, p)| g.port(p))
        .collect();
    let tails: Vec<usize> = (0..GADGET_VERTICES).filter(|v| !exits.contains(v)).collect();
    let heads: Vec<usize> = (0..GADGET_VERTICES).filter(|v| !entries.contains(v)).collect();
    if tails.len() != heads.len() {
        return LaurentPoly::zero();
    }
    let m = g.weight_matrix();

    fn walk(
        m: &[Vec<Option<LaurentPoly>>],
        tails: &[usize],
        heads: &[usize],
        used: &mut [bool],
        acc: &LaurentPoly,
        out: &mut LaurentPoly,
    ) {
        let Some((&t, rest)) = tails.split_first() else {
            *out += acc;
            return;
        };
        for (k, &h) in heads.iter().enumerate() {
            if used[k] {
                continue;
            }
            if let Some(w) = &m[t][h] {
                used[k] = true;
                walk(m, rest, heads, used, &(acc * w), out);
                used[k] = false;
            }
        }
    }

    let mut out = LaurentPoly::zero();
    walk(
        &m,
        &tails,
        &heads,
        &mut vec![false; heads.len()],
        &LaurentPoly::one(),
        &mut out,
    );
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternCheck {
    pub pattern: BoundaryPattern,
    pub state: Option<LocalState>,
    pub expected: LaurentPoly,
    pub actual: LaurentPoly,
}

impl PatternCheck {
    pub fn residual(&self) -> LaurentPoly {
        &self.actual - &self.expected
    }

    pub fn passed(&self) -> bool {
        self.actual == self.expected
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetReport {
    pub sign: Sign,
    pub checks: Vec<PatternCheck>,
}

impl GadgetReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(PatternCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PatternCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for GadgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let label = c.state.map_or_else(|| "--".to_string(), |s| format!("{s:?}"));
            let verdict = if c.passed() { "ok" } else { "FAIL" };
            writeln!(
                f,
                "{} [{label}] expected {} got {} {verdict}",
                c.pattern, c.expected, c.actual
            )?;
        }
        Ok(())
    }
}

/// Checks all 16 boundary patterns against the R row of the gadget's sign.
pub fn verify_gadget(g: &Gadget) -> GadgetReport {
    let checks = BoundaryPattern::all()
        .map(|pattern| PatternCheck {
            pattern,
            state: pattern.local_state(),
            expected: pattern_r_weight(g.sign, pattern),
            actual: pattern_weight_sum(g, pattern),
        })
        .collect();
    GadgetReport { sign: g.sign, checks }
}

/// The six polynomial identities satisfied by the positive weights, in the
/// order `q = ae+b`, `1 = 1`, `1 = bd+ac`, `q = d`, `q-q^-1 = a`, `0 = de+c`.
pub fn appendix_identities() -> [bool; 6] {
    use WeightName::*;
    let w = |n: WeightName| n.value();
    let q = LaurentPoly::q();
    [
        q == &(&w(A) * &w(E)) + &w(B),
        LaurentPoly::one() == w(One),
        LaurentPoly::one() == &(&w(B) * &w(D)) + &(&w(A) * &w(C)),
        q == w(D),
        &q - &LaurentPoly::q_pow(-1) == w(A),
        (&(&w(D) * &w(E)) + &w(C)).is_zero(),
    ]
}

/// Searches a layered gadget family for one whose pattern sums equal `target`
/// (an R row in state order `A1..A6`).
///
/// The family has an input layer (in-ports `A`, `B`) and an output layer
/// (out-ports `C`, `D`) joined by the strand edges `A -> C` and `B -> D`.
/// Each layer may carry loops on its two vertices and edges in both
/// directions between them. Every slot holds either no edge or a weight from
/// the sign's alphabet, and the output layer is solved for from the other
/// slots: mixed-color patterns compose as 2x2 transfer matrices
/// `out_layer * strands * in_layer`. The first candidate that passes the full
/// exact check is padded to seven vertices by subdividing edges and returned.
pub fn find_gadget(sign: Sign, target: &[LaurentPoly; 6]) -> Result<Gadget> {
    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;

    // generic evaluation point for solving the output layer
    let x0 = rational(11, 7);
    let slots: Vec<Option<WeightName>> = std::iter::once(None)
        .chain(WeightName::alphabet(sign).into_iter().map(Some))
        .collect();
    let value_at = |w: Option<WeightName>| -> Rational {
        w.map_or_else(Rational::zero, |w| w.value().eval_rational(&x0).expect("nonzero point"))
    };
    let mut by_value: HashMap<Rational, Option<WeightName>> = HashMap::new();
    for &s in &slots {
        by_value.entry(value_at(s)).or_insert(s);
    }
    let t: Vec<Rational> = target
        .iter()
        .map(|p| p.eval_rational(&x0).expect("nonzero point"))
        .collect();
    // mixed block, rows out (01, 10), cols in (01, 10)
    let (t11, t12, t21, t22) = (&t[1], &t[3], &t[2], &t[4]);

    let lookup = |v: Rational| by_value.get(&v).copied();
    let mut candidates = 0;
    for &left in &slots {
        for &right in &slots {
            let strands = match (left, right) {
                (Some(l), Some(r)) => &l.value() * &r.value(),
                _ => LaurentPoly::zero(),
            };
            if strands != target[5] {
                continue;
            }
            let (l, r) = (value_at(left), value_at(right));
            for &loop_a in &slots {
                for &loop_b in &slots {
                    for &a_to_b in &slots {
                        for &b_to_a in &slots {
                            candidates += 1;
                            // strands * in_layer
                            let m11 = &r * value_at(loop_a);
                            let m12 = &r * value_at(a_to_b);
                            let m21 = &l * value_at(b_to_a);
                            let m22 = &l * value_at(loop_b);
                            let det = &m11 * &m22 - &m12 * &m21;
                            if det.is_zero() {
                                continue;
                            }
                            let n11 = (t11 * &m22 - t12 * &m21) / &det;
                            let n12 = (t12 * &m11 - t11 * &m12) / &det;
                            let n21 = (t21 * &m22 - t22 * &m21) / &det;
                            let n22 = (t22 * &m11 - t21 * &m12) / &det;
                            let (Some(loop_c), Some(d_to_c), Some(c_to_d), Some(loop_d)) =
                                (lookup(n11), lookup(n21), lookup(n12), lookup(n22))
                            else {
                                continue;
                            };
                            let core = [
                                (A, C, left),
                                (B, D, right),
                                (D, C, d_to_c),
                                (C, D, c_to_d),
                                (A, B, a_to_b),
                                (B, A, b_to_a),
                                (A, A, loop_a),
                                (B, B, loop_b),
                                (C, C, loop_c),
                                (D, D, loop_d),
                            ];
                            let g = pad_core(sign, &core)?;
                            let report = verify_gadget(&g);
                            let hits_target = LocalState::ALL.iter().all(|s| {
                                report
                                    .checks
                                    .iter()
                                    .any(|c| c.state == Some(*s) && c.actual == target[s.index()])
                            });
                            let others_vanish = report
                                .checks
                                .iter()
                                .filter(|c| c.state.is_none())
                                .all(|c| c.actual.is_zero());
                            if hits_target && others_vanish {
                                return Ok(g);
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::Exhaustion { candidates })
}

/// Finds the gadget for a sign's own R row.
pub fn find_gadget_for(sign: Sign) -> Result<Gadget> {
    find_gadget(sign, &r_row(sign))
}

/// Lays a 4-vertex core out on seven vertices. Non-loop edges are subdivided
/// in core order through a fresh vertex carrying a weight-1 loop, which
/// leaves every pattern sum unchanged; leftover vertices get a lone loop.
fn pad_core(sign: Sign, core: &[(usize, usize, Option<WeightName>)]) -> Result<Gadget> {
    let mut edges = Vec::new();
    let mut next = 4;
    for &(tail, head, w) in core {
        let Some(weight) = w else { continue };
        if tail != head && next < GADGET_VERTICES {
            let mid = next;
            next += 1;
            edges.push(GadgetEdge {
                tail,
                head: mid,
                weight,
            });
            edges.push(GadgetEdge {
                tail: mid,
                head,
                weight: WeightName::One,
            });
            edges.push(GadgetEdge {
                tail: mid,
                head: mid,
                weight: WeightName::One,
            });
        } else {
            edges.push(GadgetEdge { tail, head, weight });
        }
    }
    for v in next..GADGET_VERTICES {
        edges.push(GadgetEdge {
            tail: v,
            head: v,
            weight: WeightName::One,
        });
    }
    Gadget::new(sign, [0, 1, 2, 3], edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::LocalState;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn state_sum(g: &Gadget, s: LocalState) -> LaurentPoly {
        pattern_weight_sum(g, s.pattern())
    }

    #[test]
    fn weight_values() {
        assert_eq!(WeightName::A.value(), p("-q^-1 + q"));
        assert_eq!(WeightName::B.value(), p("1/2*q^-1 + 1/2*q"));
        assert_eq!(WeightName::C.value(), p("-1/2*q"));
        assert_eq!(WeightName::D.value(), p("q"));
        assert_eq!(WeightName::E.value(), p("1/2"));
        assert_eq!(WeightName::V.value(), p("1/2"));
        assert_eq!(WeightName::W.value(), p("q^-1 - q"));
        assert_eq!(WeightName::X.value(), p("1/2*q^-1 + 1/2*q"));
        assert_eq!(WeightName::Y.value(), p("-1/2*q^-1"));
        assert_eq!(WeightName::Z.value(), p("q^-1"));
    }

    #[test]
    fn weight_identities_hold() {
        assert_eq!(appendix_identities(), [true; 6]);
    }

    #[test]
    fn shipped_positive_gadget_meets_contract() {
        let g = Gadget::positive();
        let report = verify_gadget(g);
        assert!(report.passed(), "{report}");
        assert_eq!(state_sum(g, LocalState::A2), WeightName::A.value());
        assert_eq!(state_sum(g, LocalState::A1), p("q"));
        assert_eq!(state_sum(g, LocalState::A5), LaurentPoly::zero());
    }

    #[test]
    fn shipped_negative_gadget_meets_contract() {
        let report = verify_gadget(Gadget::negative());
        assert!(report.passed(), "{report}");
        assert_eq!(state_sum(Gadget::negative(), LocalState::A1), p("q^-1"));
    }

    #[test]
    fn non_conserving_patterns_vanish() {
        for g in [Gadget::positive(), Gadget::negative()] {
            for pat in BoundaryPattern::all().filter(|p| !p.is_conserving()) {
                assert!(pattern_weight_sum(g, pat).is_zero());
            }
        }
    }

    #[test]
    fn removing_weight_a_breaks_the_straight_pattern() {
        let g = Gadget::positive();
        let edges = g
            .edges()
            .iter()
            .copied()
            .filter(|e| e.weight != WeightName::A)
            .collect();
        let broken = Gadget::new(Sign::Positive, g.ports, edges).unwrap();
        let report = verify_gadget(&broken);
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.state == Some(LocalState::A2)));
    }

    #[test]
    fn search_reproduces_shipped_gadgets() {
        assert_eq!(&find_gadget_for(Sign::Positive).unwrap(), Gadget::positive());
        assert_eq!(&find_gadget_for(Sign::Negative).unwrap(), Gadget::negative());
    }

    #[test]
    fn search_exhausts_on_unrealizable_row() {
        let mut row = r_row(Sign::Positive);
        row[4] = LaurentPoly::one();
        assert!(matches!(
            find_gadget(Sign::Positive, &row),
            Err(Error::Exhaustion { .. })
        ));
    }

    #[test]
    fn every_vertex_has_in_and_out_edges() {
        for g in [Gadget::positive(), Gadget::negative()] {
            for v in 0..GADGET_VERTICES {
                assert!(g.edges().iter().any(|e| e.tail == v), "vertex {v} has no out-edge");
                assert!(g.edges().iter().any(|e| e.head == v), "vertex {v} has no in-edge");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for g in [Gadget::positive(), Gadget::negative()] {
            let text = g.to_string();
            let back: Gadget = text.parse().unwrap();
            assert_eq!(&back, g);
            assert_eq!(back.to_string(), text);
        }
    }

    #[test]
    fn rejects_malformed_gadgets() {
        assert!(matches!(
            "sign +\n0 0 a\n".parse::<Gadget>(),
            Err(Error::InvalidGadget(_))
        ));
        let bad_weight = "sign +\nports in_left=0 in_right=1 out_left=2 out_right=3\n0 0 v\n";
        assert!(matches!(bad_weight.parse::<Gadget>(), Err(Error::InvalidGadget(_))));
        let shared_port = "sign -\nports in_left=0 in_right=0 out_left=2 out_right=3\n";
        assert!(matches!(shared_port.parse::<Gadget>(), Err(Error::InvalidGadget(_))));
        let garbage = "sign +\nports in_left=0 in_right=1 out_left=2 out_right=3\n0 q a\n";
        assert!(matches!(garbage.parse::<Gadget>(), Err(Error::Syntax { .. })));
    }
}
