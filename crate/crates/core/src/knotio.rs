//! Braid words and the oriented diagrams of their plane closures.
//!
//! Strands run upward through the braid and return along closure arcs on the
//! right, so every component of a closure turns clockwise. At each crossing
//! the strands are parallel (vertical), which makes every per-arc rotation
//! number an integer: 0 for arcs inside the braid and -1 for each closure arc.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

/// `σ_index` or its inverse; `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator {
    pub index: usize,
    pub sign: Sign,
}

impl Generator {
    pub fn new(index: usize, sign: Sign) -> Self {
        Self { index, sign }
    }

    pub fn inverse(self) -> Self {
        Self::new(self.index, self.sign.flipped())
    }

    fn signed(self) -> i64 {
        self.index as i64 * self.sign.value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Generator>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Generator>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidArgument("a braid needs at least one strand".into()));
        }
        for g in &letters {
            if g.index == 0 || g.index >= strands {
                return Err(Error::IndexOutOfRange {
                    index: g.signed(),
                    strands,
                });
            }
        }
        Ok(Self { strands, letters })
    }

    /// Builds a word from signed indices (`-2` is `σ_2^{-1}`).
    pub fn from_signed(strands: usize, letters: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 {
                return Err(Error::IndexOutOfRange { index: 0, strands });
            }
            let sign = if l > 0 { Sign::Positive } else { Sign::Negative };
            out.push(Generator::new(l.unsigned_abs() as usize, sign));
        }
        Self::new(strands, out)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|g| g.sign.value()).sum()
    }

    /// All letter signs flipped: the closure of the result is the mirror image.
    pub fn mirror(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().map(|g| g.inverse()).collect(),
        }
    }

    /// `g · self · g^{-1}`.
    pub fn conjugate(&self, g: Generator) -> Result<Self> {
        let mut letters = Vec::with_capacity(self.letters.len() + 2);
        letters.push(g);
        letters.extend_from_slice(&self.letters);
        letters.push(g.inverse());
        Self::new(self.strands, letters)
    }

    /// Markov stabilization: append `σ_k^{±1}` on a new strand `k + 1`.
    pub fn stabilize(&self, sign: Sign) -> Self {
        let mut letters = self.letters.clone();
        letters.push(Generator::new(self.strands, sign));
        Self {
            strands: self.strands + 1,
            letters,
        }
    }

    /// Replaces the letter at `pos`; `None` deletes it.
    pub fn with_letter(&self, pos: usize, letter: Option<Generator>) -> Self {
        let mut letters = self.letters.clone();
        match letter {
            Some(g) => letters[pos] = g,
            None => {
                letters.remove(pos);
            }
        }
        Self {
            strands: self.strands,
            letters,
        }
    }

    /// Where each bottom position ends up at the top (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        // track which starting strand sits at each position
        let mut at: Vec<usize> = (0..self.strands).collect();
        for g in &self.letters {
            at.swap(g.index - 1, g.index);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &start) in at.iter().enumerate() {
            perm[start] = pos;
        }
        perm
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for g in &self.letters {
            write!(f, " {}", g.signed())?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_braid(s)
    }
}

/// Parses `"<k>: <i1> <i2> ..."`. Lines starting with `#` are comments and the
/// letters may continue across lines.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.trim_start().starts_with('#') {
            let mut start = None;
            for (i, ch) in line.char_indices() {
                match (ch.is_whitespace() || ch == ':', start) {
                    (true, Some(s)) => {
                        tokens.push((offset + s, &line[s..i]));
                        start = None;
                    }
                    (false, None) => start = Some(i),
                    _ => {}
                }
                if ch == ':' {
                    tokens.push((offset + i, ":"));
                }
            }
            if let Some(s) = start {
                tokens.push((offset + s, &line[s..]));
            }
        }
        offset += line.len();
    }

    let syntax = |position: usize, message: &str| Error::Syntax {
        position,
        message: message.to_string(),
    };
    let mut it = tokens.into_iter();
    let (pos, k) = it.next().ok_or_else(|| syntax(offset, "expected strand count"))?;
    let strands: usize = k
        .parse()
        .map_err(|_| syntax(pos, "strand count must be a positive integer"))?;
    if strands == 0 {
        return Err(syntax(pos, "strand count must be a positive integer"));
    }
    match it.next() {
        Some((_, ":")) => {}
        Some((p, _)) => return Err(syntax(p, "expected ':' after strand count")),
        None => return Err(syntax(offset, "expected ':' after strand count")),
    }
    let mut letters = Vec::new();
    for (p, tok) in it {
        let v: i64 = tok.parse().map_err(|_| syntax(p, "expected a nonzero integer"))?;
        if v == 0 {
            return Err(syntax(p, "generator index must be nonzero"));
        }
        letters.push(v);
    }
    BraidWord::from_signed(strands, &letters)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// One end of an arc: a crossing and which of its two ports on that end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ArcEnd {
    pub crossing: usize,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub id: usize,
    pub sign: Sign,
}

/// A directed edge of the diagram: it leaves `tail` through an outgoing port
/// and enters `head` through an incoming port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub id: usize,
    pub tail: ArcEnd,
    pub head: ArcEnd,
    pub rot: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub arcs: Vec<Arc>,
    pub writhe: i64,
    /// Sum of arc rotation numbers, plus -1 for each free loop.
    pub rot_total: i64,
    pub components: usize,
    pub free_loops: usize,
}

impl Diagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Arc leaving `crossing` through the outgoing port on `side`.
    pub fn outgoing(&self, crossing: usize, side: Side) -> Option<&Arc> {
        self.arcs
            .iter()
            .find(|a| a.tail.crossing == crossing && a.tail.side == side)
    }

    /// Arc entering `crossing` through the incoming port on `side`.
    pub fn incoming(&self, crossing: usize, side: Side) -> Option<&Arc> {
        self.arcs
            .iter()
            .find(|a| a.head.crossing == crossing && a.head.side == side)
    }

    /// Arc ids grouped by link component, each list in traversal order.
    /// Free loops have no arcs and are not listed.
    pub fn component_arcs(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.arcs.len()];
        let mut out = Vec::new();
        for start in 0..self.arcs.len() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                comp.push(cur);
                let head = self.arcs[cur].head;
                // a strand entering on one side leaves on the other
                cur = self
                    .outgoing(head.crossing, head.side.opposite())
                    .expect("every crossing has two outgoing arcs")
                    .id;
            }
            out.push(comp);
        }
        out
    }

    /// Checks the port-degree invariant: each crossing has exactly one
    /// incoming and one outgoing arc on each side.
    pub fn check_ports(&self) -> Result<()> {
        let n = self.crossings.len();
        let mut ins = vec![[0usize; 2]; n];
        let mut outs = vec![[0usize; 2]; n];
        for a in &self.arcs {
            if a.tail.crossing >= n || a.head.crossing >= n {
                return Err(Error::InvalidArgument(format!(
                    "arc {} references a missing crossing",
                    a.id
                )));
            }
            outs[a.tail.crossing][a.tail.side as usize] += 1;
            ins[a.head.crossing][a.head.side as usize] += 1;
        }
        for c in 0..n {
            if ins[c] != [1, 1] || outs[c] != [1, 1] {
                return Err(Error::InvalidArgument(format!(
                    "crossing {c} does not have 2 in / 2 out ports"
                )));
            }
        }
        Ok(())
    }
}

/// The plane closure of `b`, closing on the right.
pub fn closure_diagram(b: &BraidWord) -> Diagram {
    let k = b.strands();
    let crossings: Vec<Crossing> = b
        .letters()
        .iter()
        .enumerate()
        .map(|(id, g)| Crossing { id, sign: g.sign })
        .collect();

    // crossings met by each position, bottom to top
    let mut touches: Vec<Vec<ArcEnd>> = vec![Vec::new(); k];
    for (id, g) in b.letters().iter().enumerate() {
        touches[g.index - 1].push(ArcEnd {
            crossing: id,
            side: Side::Left,
        });
        touches[g.index].push(ArcEnd {
            crossing: id,
            side: Side::Right,
        });
    }

    let mut arcs = Vec::with_capacity(2 * crossings.len());
    let mut free_loops = 0;
    for column in &touches {
        if column.is_empty() {
            free_loops += 1;
            continue;
        }
        for (t, &tail) in column.iter().enumerate() {
            let closing = t + 1 == column.len();
            let head = column[(t + 1) % column.len()];
            arcs.push(Arc {
                id: arcs.len(),
                tail,
                head,
                rot: if closing { -1 } else { 0 },
            });
        }
    }

    let perm = b.permutation();
    let mut visited = vec![false; k];
    let mut components = 0;
    for s in 0..k {
        if !visited[s] {
            components += 1;
            let mut c = s;
            while !visited[c] {
                visited[c] = true;
                c = perm[c];
            }
        }
    }

    let rot_total = arcs.iter().map(|a| a.rot).sum::<i64>() - free_loops as i64;
    Diagram {
        writhe: b.writhe(),
        crossings,
        arcs,
        rot_total,
        components,
        free_loops,
    }
}

/// Replaces every free loop by a one-crossing positive kink (the closure of
/// `σ_1` on two strands), adjusting writhe and rotation so the Jones value of
/// the diagram is unchanged.
pub fn stabilize_if_needed(d: &Diagram) -> Diagram {
    if d.free_loops == 0 {
        return d.clone();
    }
    let mut out = d.clone();
    for _ in 0..d.free_loops {
        let id = out.crossings.len();
        out.crossings.push(Crossing {
            id,
            sign: Sign::Positive,
        });
        for side in [Side::Left, Side::Right] {
            let end = ArcEnd { crossing: id, side };
            out.arcs.push(Arc {
                id: out.arcs.len(),
                tail: end,
                head: end,
                rot: -1,
            });
        }
        out.writhe += 1;
        // the loop's -1 becomes two closure arcs of -1
        out.rot_total -= 1;
    }
    out.free_loops = 0;
    out
}
