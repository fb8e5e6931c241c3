//! Rotation numbers checked against the turning of an explicit plane drawing
//! of the braid closure.

mod common;

use common::{random_braid, rng};
use permajones::knotio::{closure_diagram, BraidWord};

/// Closed polylines, one per strand cycle, of the closure of `b` drawn with
/// strands going up and return loops nested on the right.
fn polylines(b: &BraidWord) -> Vec<Vec<(f64, f64)>> {
    let k = b.strands();
    let m = b.len();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut pts = Vec::new();
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            pts.push((p as f64, 0.0));
            for (t, g) in b.letters().iter().enumerate() {
                if p == g.index - 1 {
                    p += 1;
                } else if p == g.index {
                    p -= 1;
                }
                pts.push((p as f64, (t + 1) as f64));
            }
            let depth = (k - p) as f64;
            let (x, top) = (p as f64, m as f64);
            pts.push((x, top + depth));
            pts.push((k as f64 + depth, top + depth));
            pts.push((k as f64 + depth, -depth));
            pts.push((x, -depth));
        }
        pts.dedup();
        out.push(pts);
    }
    out
}

/// Total signed turning of a closed polyline in full turns.
fn turning_number(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let mut total = 0.0;
    for i in 0..n {
        let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        let (ux, uy) = (b.0 - a.0, b.1 - a.1);
        let (vx, vy) = (c.0 - b.0, c.1 - b.1);
        total += (ux * vy - uy * vx).atan2(ux * vx + uy * vy);
    }
    total / (2.0 * std::f64::consts::PI)
}

fn check(b: &BraidWord) {
    let d = closure_diagram(b);
    let turns: Vec<i64> = polylines(b).iter().map(|p| turning_number(p).round() as i64).collect();
    assert_eq!(turns.iter().sum::<i64>(), d.rot_total, "{b}");

    let mut per_component: Vec<i64> = d
        .component_arcs()
        .iter()
        .map(|arcs| arcs.iter().map(|&a| d.arcs[a].rot).sum())
        .collect();
    per_component.extend(std::iter::repeat_n(-1, d.free_loops));
    per_component.sort();
    let mut expected = turns;
    expected.sort();
    assert_eq!(per_component, expected, "{b}");
}

#[test]
fn named_closures() {
    for s in ["1:", "2: 1", "2: 1 1", "3: 1 -2 1 -2", "3: 1", "4: 1 2 3 -1"] {
        check(&s.parse().unwrap());
    }
}

#[test]
fn random_closures() {
    let mut r = rng(31);
    for _ in 0..50 {
        check(&random_braid(&mut r, 5, 8));
    }
}
