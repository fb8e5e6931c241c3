//! Blowing a diagram up into a weighted digraph and its adjacency matrix.
//!
//! Crossing `c` owns vertices `7c .. 7c+6`, laid out as in its gadget. Each
//! diagram arc becomes one edge from the tail crossing's outgoing port to the
//! head crossing's incoming port, weighted `q^(-2 rot)`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gadget::{Gadget, Port, GADGET_VERTICES};
use crate::knotio::{Diagram, Side, Sign};
use crate::ring::{LaurentPoly, RingElement};

/// Row-major sparse square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    dim: usize,
    rows: Vec<BTreeMap<usize, T>>,
}

impl<T: Clone> SparseMatrix<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![BTreeMap::new(); dim],
        }
    }

    /// Builds a matrix from `(row, col, value)` triples; a repeated position
    /// is a [`Error::DuplicateEdge`].
    pub fn from_entries<I: IntoIterator<Item = (usize, usize, T)>>(dim: usize, entries: I) -> Result<Self> {
        let mut m = Self::new(dim);
        for (i, j, v) in entries {
            if i >= dim || j >= dim {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i}, {j}) outside a {dim}x{dim} matrix"
                )));
            }
            if m.rows[i].insert(j, v).is_some() {
                return Err(Error::DuplicateEdge { tail: i, head: j });
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        self.rows[i].get(&j)
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.rows[i].iter().map(|(&j, v)| (j, v))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(&j, v)| (j, f(v))).collect())
                .collect(),
        }
    }

    pub fn try_map<U: Clone>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<SparseMatrix<U>> {
        let mut rows = Vec::with_capacity(self.dim);
        for r in &self.rows {
            let mut out = BTreeMap::new();
            for (&j, v) in r {
                out.insert(j, f(v)?);
            }
            rows.push(out);
        }
        Ok(SparseMatrix { dim: self.dim, rows })
    }

    /// Applies the same permutation to rows and columns: entry `(i, j)` moves
    /// to `(perm[i], perm[j])`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let entries = self.entries().map(|(i, j, v)| (perm[i], perm[j], v.clone()));
        Self::from_entries(self.dim, entries).expect("a permutation keeps positions distinct")
    }
}

impl<T: RingElement + Clone> SparseMatrix<T> {
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.dim]; self.dim];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        let entries = rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(j, v)| (i, j, v.clone()))
        });
        Self::from_entries(dim, entries).expect("dense positions are distinct")
    }
}

/// Where an edge of the blown-up graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    Gadget { crossing: usize },
    Arc { arc: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlownUpEdge {
    pub tail: usize,
    pub head: usize,
    pub weight: LaurentPoly,
    pub origin: EdgeOrigin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlownUpGraph {
    pub dim: usize,
    pub edges: Vec<BlownUpEdge>,
    pub writhe: i64,
    pub rot_total: i64,
}

pub fn blow_up(d: &Diagram) -> Result<BlownUpGraph> {
    blow_up_with(d, Gadget::positive(), Gadget::negative())
}

/// Blows `d` up using the given gadgets instead of the shipped ones.
pub fn blow_up_with(d: &Diagram, positive: &Gadget, negative: &Gadget) -> Result<BlownUpGraph> {
    if d.free_loops > 0 {
        return Err(Error::FreeLoops(d.free_loops));
    }
    let gadget = |c: usize| match d.crossings[c].sign {
        Sign::Positive => positive,
        Sign::Negative => negative,
    };
    let base = |c: usize| GADGET_VERTICES * c;
    let mut edges = Vec::new();
    for c in &d.crossings {
        for e in gadget(c.id).edges() {
            edges.push(BlownUpEdge {
                tail: base(c.id) + e.tail,
                head: base(c.id) + e.head,
                weight: e.weight.value(),
                origin: EdgeOrigin::Gadget { crossing: c.id },
            });
        }
    }
    for a in &d.arcs {
        let out_port = match a.tail.side {
            Side::Left => Port::OutLeft,
            Side::Right => Port::OutRight,
        };
        let in_port = match a.head.side {
            Side::Left => Port::InLeft,
            Side::Right => Port::InRight,
        };
        edges.push(BlownUpEdge {
            tail: base(a.tail.crossing) + gadget(a.tail.crossing).port(out_port),
            head: base(a.head.crossing) + gadget(a.head.crossing).port(in_port),
            weight: LaurentPoly::q_pow(-2 * a.rot),
            origin: EdgeOrigin::Arc { arc: a.id },
        });
    }
    Ok(BlownUpGraph {
        dim: GADGET_VERTICES * d.crossing_count(),
        edges,
        writhe: d.writhe,
        rot_total: d.rot_total,
    })
}

impl BlownUpGraph {
    pub fn crossings(&self) -> usize {
        self.dim / GADGET_VERTICES
    }

    pub fn to_matrix(&self) -> Result<SparseMatrix<LaurentPoly>> {
        SparseMatrix::from_entries(self.dim, self.edges.iter().map(|e| (e.tail, e.head, e.weight.clone())))
    }

    pub fn header(&self) -> MatrixHeader {
        MatrixHeader {
            crossings: self.crossings(),
            dim: self.dim,
            writhe: self.writhe,
            rot_total: self.rot_total,
        }
    }
}

/// The metadata line of an exported matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixHeader {
    pub crossings: usize,
    pub dim: usize,
    pub writhe: i64,
    pub rot_total: i64,
}

impl fmt::Display for MatrixHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "# n={} dim={} writhe={} rot={}",
            self.crossings, self.dim, self.writhe, self.rot_total
        )
    }
}

impl MatrixHeader {
    fn parse(line: &str) -> Option<Self> {
        let mut fields = BTreeMap::new();
        for tok in line.trim_start_matches('#').split_whitespace() {
            let (k, v) = tok.split_once('=')?;
            fields.insert(k, v.parse::<i64>().ok()?);
        }
        Some(Self {
            crossings: usize::try_from(*fields.get("n")?).ok()?,
            dim: usize::try_from(*fields.get("dim")?).ok()?,
            writhe: *fields.get("writhe")?,
            rot_total: *fields.get("rot")?,
        })
    }
}

/// Header line followed by one `row col polynomial` line per nonzero entry.
pub fn export_coordinates(header: &MatrixHeader, m: &SparseMatrix<LaurentPoly>) -> String {
    let mut out = format!("{header}\n");
    for (i, j, v) in m.entries() {
        let _ = writeln!(out, "{i} {j} {v}");
    }
    out
}

/// Like [`export_coordinates`] with every entry evaluated at `q0`, written as
/// `row col re im`.
pub fn export_numeric(header: &MatrixHeader, m: &SparseMatrix<LaurentPoly>, q0: Complex64) -> Result<String> {
    let mut out = format!("{header}\n");
    for (i, j, v) in m.entries() {
        let z = v.eval(q0)?;
        let _ = writeln!(out, "{i} {j} {:e} {:e}", z.re, z.im);
    }
    Ok(out)
}

/// Reads the polynomial coordinate format back.
pub fn parse_coordinates(text: &str) -> Result<(MatrixHeader, SparseMatrix<LaurentPoly>)> {
    let (header, lines) = split_header(text)?;
    let mut entries = Vec::new();
    for (at, line) in lines {
        let (i, j, rest) = split_position(at, line)?;
        let poly: LaurentPoly = rest
            .parse()
            .map_err(|e| shift_position(e, at + line.len() - rest.len()))?;
        entries.push((i, j, poly));
    }
    Ok((header, SparseMatrix::from_entries(header.dim, entries)?))
}

/// Reads either exported format as a complex matrix, evaluating polynomial
/// entries at `q0`.
pub fn read_numeric_matrix(text: &str, q0: Complex64) -> Result<(MatrixHeader, SparseMatrix<Complex64>)> {
    let (header, lines) = split_header(text)?;
    let mut entries = Vec::new();
    for (at, line) in lines {
        let (i, j, rest) = split_position(at, line)?;
        let parts: Vec<&str> = rest.split_whitespace().collect();
        let numeric = match parts[..] {
            [re, im] => re.parse::<f64>().ok().zip(im.parse::<f64>().ok()),
            _ => None,
        };
        let z = match numeric {
            Some((re, im)) => Complex64::new(re, im),
            None => {
                let poly: LaurentPoly = rest
                    .parse()
                    .map_err(|e| shift_position(e, at + line.len() - rest.len()))?;
                poly.eval(q0)?
            }
        };
        entries.push((i, j, z));
    }
    Ok((header, SparseMatrix::from_entries(header.dim, entries)?))
}

type Lines<'a> = Vec<(usize, &'a str)>;

fn split_header(text: &str) -> Result<(MatrixHeader, Lines<'_>)> {
    let mut header = None;
    let mut lines = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let at = offset;
        offset += raw.len();
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() {
                header = MatrixHeader::parse(line);
            }
            continue;
        }
        lines.push((at, line));
    }
    let header = header.ok_or_else(|| Error::Syntax {
        position: 0,
        message: "missing '# n=.. dim=.. writhe=.. rot=..' header".into(),
    })?;
    Ok((header, lines))
}

fn split_position(at: usize, line: &str) -> Result<(usize, usize, &str)> {
    let syntax = |message: &str| Error::Syntax {
        position: at,
        message: message.into(),
    };
    let mut it = line.splitn(3, char::is_whitespace);
    let i = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| syntax("bad row index"))?;
    let j = it
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| syntax("bad column index"))?;
    let rest = it
        .next()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| syntax("missing entry"))?;
    Ok((i, j, rest))
}

fn shift_position(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { position, message } => Error::Syntax {
            position: position + by,
            message,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::{closure_diagram, stabilize_if_needed, BraidWord};

    fn diagram(s: &str) -> Diagram {
        stabilize_if_needed(&closure_diagram(&s.parse::<BraidWord>().unwrap()))
    }

    #[test]
    fn trefoil_dimensions() {
        let g = blow_up(&diagram("2: 1 1 1")).unwrap();
        assert_eq!(g.dim, 21);
        let m = g.to_matrix().unwrap();
        let gadget_edges = Gadget::positive().edges().len();
        assert_eq!(m.nnz(), 3 * gadget_edges + 6);
    }

    #[test]
    fn arcs_join_ports() {
        let d = diagram("3: 1 -2 1 -2");
        let g = blow_up(&d).unwrap();
        for e in g.edges.iter().filter(|e| matches!(e.origin, EdgeOrigin::Arc { .. })) {
            let EdgeOrigin::Arc { arc } = e.origin else {
                unreachable!()
            };
            let a = &d.arcs[arc];
            assert_eq!(e.tail / GADGET_VERTICES, a.tail.crossing);
            assert_eq!(e.head / GADGET_VERTICES, a.head.crossing);
            assert_eq!(e.weight, LaurentPoly::q_pow(-2 * a.rot));
        }
    }

    #[test]
    fn free_loops_are_rejected() {
        let d = closure_diagram(&"3: 1".parse().unwrap());
        assert_eq!(blow_up(&d), Err(Error::FreeLoops(1)));
    }

    #[test]
    fn duplicate_positions_are_rejected() {
        let r = SparseMatrix::from_entries(2, [(0, 1, 1i64), (0, 1, 2)]);
        assert_eq!(r, Err(Error::DuplicateEdge { tail: 0, head: 1 }));
    }

    #[test]
    fn coordinate_round_trip() {
        let g = blow_up(&diagram("2: 1 1 1")).unwrap();
        let m = g.to_matrix().unwrap();
        let text = export_coordinates(&g.header(), &m);
        assert!(text.starts_with("# n=3 dim=21 writhe=3 rot=-2\n"));
        let (h, back) = parse_coordinates(&text).unwrap();
        assert_eq!(h, g.header());
        assert_eq!(back, m);
    }

    #[test]
    fn numeric_export_reads_back() {
        let g = blow_up(&diagram("2: 1 -1")).unwrap();
        let m = g.to_matrix().unwrap();
        let q0 = Complex64::from_polar(1.0, 0.7);
        let (_, from_numeric) = read_numeric_matrix(&export_numeric(&g.header(), &m, q0).unwrap(), q0).unwrap();
        let (_, from_poly) = read_numeric_matrix(&export_coordinates(&g.header(), &m), q0).unwrap();
        for (i, j, z) in from_poly.entries() {
            assert!((from_numeric.get(i, j).unwrap() - z).norm() < 1e-12);
        }
        assert_eq!(from_numeric.nnz(), from_poly.nnz());
    }

    #[test]
    fn relabel_moves_entries() {
        let m = SparseMatrix::from_entries(3, [(0, 1, 5i64), (2, 2, 7)]).unwrap();
        let r = m.relabel(&[2, 0, 1]);
        assert_eq!(r.get(2, 0), Some(&5));
        assert_eq!(r.get(1, 1), Some(&7));
    }

    #[test]
    fn bad_coordinate_lines() {
        assert!(matches!(parse_coordinates("0 0 q\n"), Err(Error::Syntax { .. })));
        let text = "# n=1 dim=7 writhe=1 rot=-2\n0 x q\n";
        assert!(matches!(
            parse_coordinates(text),
            Err(Error::Syntax { position: 28, .. })
        ));
    }
}
