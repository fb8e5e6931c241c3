//! The three routes to the Jones polynomial and their cross-check.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::assembly::{blow_up_with, BlownUpGraph};
use crate::error::{Error, Result};
use crate::gadget::Gadget;
use crate::knotio::{closure_diagram, stabilize_if_needed, BraidWord, Diagram, Side};
use crate::permanent::permanent_cycle_covers;
use crate::ring::LaurentPoly;
use crate::skein::skein_jones_with_budget;
use crate::vertex::{b_weight, r_weight, BoundaryPattern};

pub use crate::skein::DEFAULT_SKEIN_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Permanent,
    StateSum,
    Skein,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Permanent, Route::StateSum, Route::Skein];

    pub fn name(self) -> &'static str {
        match self {
            Route::Permanent => "permanent",
            Route::StateSum => "statesum",
            Route::Skein => "skein",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown route '{s}'")))
    }
}

/// A Jones value together with the diagram the route evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct JonesResult {
    pub value: LaurentPoly,
    pub route: Route,
    pub crossings: usize,
    pub writhe: i64,
    pub rot_total: i64,
}

impl JonesResult {
    fn on(d: &Diagram, route: Route, value: LaurentPoly) -> Self {
        Self {
            value,
            route,
            crossings: d.crossing_count(),
            writhe: d.writhe,
            rot_total: d.rot_total,
        }
    }
}

/// Arc colors, indexed by arc id; `true` is color 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    pub colors: Vec<bool>,
}

/// Arc ids at a crossing: incoming left/right, outgoing left/right.
fn port_arcs(d: &Diagram) -> Vec<[usize; 4]> {
    (0..d.crossing_count())
        .map(|c| {
            let get = |arc: Option<&crate::knotio::Arc>| arc.expect("every port has an arc").id;
            [
                get(d.incoming(c, Side::Left)),
                get(d.incoming(c, Side::Right)),
                get(d.outgoing(c, Side::Left)),
                get(d.outgoing(c, Side::Right)),
            ]
        })
        .collect()
}

fn pattern_at(ports: &[usize; 4], colors: &[bool]) -> BoundaryPattern {
    BoundaryPattern::new(colors[ports[0]], colors[ports[1]], colors[ports[2]], colors[ports[3]])
}

/// All arc colorings whose pattern at every crossing is an allowed local
/// state, in lexicographic order of the color vector.
pub fn enumerate_states(d: &Diagram) -> Vec<State> {
    let ports = port_arcs(d);
    let n = d.arcs.len();
    // crossings whose four arcs are all colored once arc `k` is
    let mut complete_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, p) in ports.iter().enumerate() {
        let last = *p.iter().max().expect("four ports");
        complete_at[last].push(c);
    }

    fn walk(k: usize, colors: &mut Vec<bool>, ports: &[[usize; 4]], complete_at: &[Vec<usize>], out: &mut Vec<State>) {
        if k == complete_at.len() {
            out.push(State { colors: colors.clone() });
            return;
        }
        for color in [false, true] {
            colors.push(color);
            if complete_at[k]
                .iter()
                .all(|&c| pattern_at(&ports[c], colors).is_conserving())
            {
                walk(k + 1, colors, ports, complete_at, out);
            }
            colors.pop();
        }
    }

    let mut out = Vec::new();
    walk(0, &mut Vec::with_capacity(n), &ports, &complete_at, &mut out);
    out
}

/// Both forms of the vertex-model state sum, before the writhe factor:
/// `sum_s q^(rot0 - rot1) prod_v R_v(s)` and `sum_s prod_v B_v(s)`.
pub fn state_sum_forms(d: &Diagram) -> Result<(LaurentPoly, LaurentPoly)> {
    if d.free_loops > 0 {
        return Err(Error::FreeLoops(d.free_loops));
    }
    let ports = port_arcs(d);
    let mut r_form = LaurentPoly::zero();
    let mut b_form = LaurentPoly::zero();
    for s in enumerate_states(d) {
        let rot: i64 = d.arcs.iter().map(|a| if s.colors[a.id] { -a.rot } else { a.rot }).sum();
        let mut r = LaurentPoly::q_pow(rot);
        let mut b = LaurentPoly::one();
        for (c, p) in ports.iter().enumerate() {
            let state = pattern_at(p, &s.colors)
                .local_state()
                .expect("enumerated states conserve");
            let sign = d.crossings[c].sign;
            r *= &r_weight(sign, state);
            b *= &b_weight(sign, state, d.arcs[p[2]].rot, d.arcs[p[3]].rot);
        }
        r_form += &r;
        b_form += &b;
    }
    Ok((r_form, b_form))
}

pub fn jones_statesum(d: &Diagram) -> Result<JonesResult> {
    let (r_form, b_form) = state_sum_forms(d)?;
    if r_form != b_form {
        return Err(Error::StateSumMismatch {
            r_form: r_form.to_string(),
            b_form: b_form.to_string(),
        });
    }
    Ok(JonesResult::on(d, Route::StateSum, r_form.shift(-2 * d.writhe)))
}

pub fn jones_via_permanent(d: &Diagram) -> Result<JonesResult> {
    jones_via_permanent_with(d, Gadget::positive(), Gadget::negative())
}

/// The permanent route with caller-supplied gadgets.
pub fn jones_via_permanent_with(d: &Diagram, positive: &Gadget, negative: &Gadget) -> Result<JonesResult> {
    let graph: BlownUpGraph = blow_up_with(d, positive, negative)?;
    let per = permanent_cycle_covers(&graph.to_matrix()?);
    Ok(JonesResult::on(
        d,
        Route::Permanent,
        per.shift(d.rot_total - 2 * d.writhe),
    ))
}

/// The permanent route carried out in floating point: entries of the
/// blown-up matrix are evaluated at `q0` before the cycle-cover sum.
pub fn jones_numeric(d: &Diagram, q0: Complex64) -> Result<Complex64> {
    if q0.norm() == 0.0 {
        return Err(Error::ZeroEvaluation);
    }
    let graph = blow_up_with(d, Gadget::positive(), Gadget::negative())?;
    let m = graph.to_matrix()?.try_map(|p| p.eval(q0))?;
    Ok(permanent_cycle_covers(&m) * q0.powi((d.rot_total - 2 * d.writhe) as i32))
}

pub fn jones_skein(b: &BraidWord, budget: usize) -> Result<JonesResult> {
    let value = skein_jones_with_budget(b, budget)?;
    Ok(JonesResult::on(&closure_diagram(b), Route::Skein, value))
}

/// The diagram the permanent and state-sum routes evaluate for `b`.
pub fn braid_diagram(b: &BraidWord) -> Diagram {
    stabilize_if_needed(&closure_diagram(b))
}

pub fn jones(b: &BraidWord, route: Route) -> Result<JonesResult> {
    jones_with_budget(b, route, DEFAULT_SKEIN_BUDGET)
}

/// Like [`jones`], with the skein route limited to `budget` letters.
pub fn jones_with_budget(b: &BraidWord, route: Route, budget: usize) -> Result<JonesResult> {
    match route {
        Route::Permanent => jones_via_permanent(&braid_diagram(b)),
        Route::StateSum => jones_statesum(&braid_diagram(b)),
        Route::Skein => jones_skein(b, budget),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub braid: String,
    pub permanent: LaurentPoly,
    pub statesum: LaurentPoly,
    pub skein: LaurentPoly,
}

impl TheoremReport {
    pub fn agree(&self) -> bool {
        self.permanent == self.statesum && self.statesum == self.skein
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.agree() {
            return write!(f, "{}: all routes agree: {}", self.braid, self.permanent);
        }
        writeln!(f, "{}: routes disagree", self.braid)?;
        writeln!(f, "  permanent {}", self.permanent)?;
        writeln!(f, "  statesum  {}", self.statesum)?;
        write!(f, "  skein     {}", self.skein)
    }
}

/// Runs all three routes on `b`.
pub fn verify_theorem(b: &BraidWord) -> Result<TheoremReport> {
    verify_theorem_with_budget(b, DEFAULT_SKEIN_BUDGET)
}

pub fn verify_theorem_with_budget(b: &BraidWord, budget: usize) -> Result<TheoremReport> {
    Ok(TheoremReport {
        braid: b.to_string(),
        permanent: jones(b, Route::Permanent)?.value,
        statesum: jones(b, Route::StateSum)?.value,
        skein: jones_with_budget(b, Route::Skein, budget)?.value,
    })
}

/// The machine-readable form of one `jones` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JonesRecord {
    pub braid: String,
    pub crossings: usize,
    pub writhe: i64,
    pub rot_total: i64,
    pub route: Route,
    pub jones: String,
    pub wall_time_ms: f64,
}

/// Evaluates `b` by `route` and records the wall time.
pub fn timed_record(b: &BraidWord, route: Route, budget: usize) -> Result<JonesRecord> {
    let start = Instant::now();
    let r = jones_with_budget(b, route, budget)?;
    Ok(JonesRecord {
        braid: b.to_string(),
        crossings: r.crossings,
        writhe: r.writhe,
        rot_total: r.rot_total,
        route,
        jones: r.value.to_string(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
