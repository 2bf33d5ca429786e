//! Oriented link diagrams in PD notation.
//!
//! A crossing `X(a,b,c,d)` lists its four arcs counterclockwise, starting from the incoming
//! under-strand. The under-strand therefore runs from position 0 to position 2, and the
//! over-strand joins positions 1 and 3 in a direction recovered by tracing components.

mod reidemeister;

pub use reidemeister::{
    apply_move, find_move_sites, insertion_sites, random_move_sequence, ArcImage, Correspondence, Direction, MoveKind,
    MoveSite, PlannedMove, Strand,
};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A position on a crossing: `(crossing, slot)` with slot in `0..4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Dart {
    pub crossing: usize,
    pub pos: usize,
}

impl Dart {
    pub fn new(crossing: usize, pos: usize) -> Self {
        Dart { crossing, pos }
    }

    /// The dart on the other side of the crossing along the same strand.
    pub fn through(self) -> Dart {
        Dart::new(self.crossing, (self.pos + 2) % 4)
    }
}

/// Validated oriented link diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    overrides: Vec<Option<i8>>,
    signs: Vec<i8>,
    free_circles: usize,
    labels: Vec<u32>,
    slots: Vec<[usize; 4]>,
    tails: Vec<Dart>,
    heads: Vec<Dart>,
    strand_components: usize,
}

impl LinkDiagram {
    /// Builds and validates a diagram from PD quadruples, optional sign overrides and a
    /// number of crossingless circles.
    pub fn new(crossings: Vec<[u32; 4]>, overrides: Vec<Option<i8>>, free_circles: usize) -> Result<Self> {
        let n = crossings.len();
        if overrides.len() != n {
            return Err(Error::InvalidDiagram("override list length mismatch".into()));
        }
        let mut occurrences: BTreeMap<u32, Vec<Dart>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (p, &a) in x.iter().enumerate() {
                occurrences.entry(a).or_default().push(Dart::new(c, p));
            }
        }
        for (a, occ) in &occurrences {
            if occ.len() != 2 {
                return Err(Error::InvalidDiagram(format!("arc {a} appears {} times", occ.len())));
            }
        }
        let labels: Vec<u32> = occurrences.keys().copied().collect();
        let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let slots: Vec<[usize; 4]> = crossings.iter().map(|x| x.map(|a| index[&a])).collect();
        let partner = |d: Dart| -> Dart {
            let occ = &occurrences[&crossings[d.crossing][d.pos]];
            if occ[0] == d {
                occ[1]
            } else {
                occ[0]
            }
        };

        // trace each strand cycle once, choosing the direction from the constraints it meets
        let mut visited = vec![[false; 4]; n];
        let mut entry_of = vec![[false; 4]; n];
        let mut strand_components = 0;
        for c0 in 0..n {
            for p0 in 0..4 {
                if visited[c0][p0] {
                    continue;
                }
                strand_components += 1;
                let mut entries = Vec::new();
                let mut d = Dart::new(c0, p0);
                loop {
                    visited[d.crossing][d.pos] = true;
                    let out = d.through();
                    visited[out.crossing][out.pos] = true;
                    entries.push(d);
                    d = partner(out);
                    if d == Dart::new(c0, p0) {
                        break;
                    }
                }
                let mut forward: Option<bool> = None;
                let mut vote = |want: bool, what: &str| -> Result<()> {
                    match forward {
                        Some(f) if f != want => {
                            Err(Error::InvalidDiagram(format!("inconsistent orientation at {what}")))
                        }
                        _ => {
                            forward = Some(want);
                            Ok(())
                        }
                    }
                };
                for e in &entries {
                    let what = format!("crossing {}", e.crossing + 1);
                    match e.pos {
                        0 => vote(true, &what)?,
                        2 => vote(false, &what)?,
                        p => {
                            if let Some(sg) = overrides[e.crossing] {
                                // positive crossings have the over-strand entering at slot 3
                                vote((p == 3) == (sg > 0), &what)?;
                            }
                        }
                    }
                }
                let forward = forward.unwrap_or_else(|| {
                    let e = entries[0];
                    let x = crossings[e.crossing];
                    let (j, l) = (x[1] as i64, x[3] as i64);
                    let enters_at_3 = j - l == 1 || l - j > 1;
                    (e.pos == 3) == enters_at_3
                });
                for e in entries {
                    let e = if forward { e } else { e.through() };
                    entry_of[e.crossing][e.pos] = true;
                }
            }
        }

        let mut tails = vec![Dart::new(0, 0); labels.len()];
        let mut heads = vec![Dart::new(0, 0); labels.len()];
        for c in 0..n {
            for p in 0..4 {
                let a = slots[c][p];
                if entry_of[c][p] {
                    heads[a] = Dart::new(c, p);
                } else {
                    tails[a] = Dart::new(c, p);
                }
            }
        }
        for a in 0..labels.len() {
            let (t, h) = (tails[a], heads[a]);
            if entry_of[t.crossing][t.pos] || !entry_of[h.crossing][h.pos] || t == h {
                return Err(Error::InvalidDiagram(format!("arc {} has no consistent orientation", labels[a])));
            }
        }
        let signs: Vec<i8> = (0..n).map(|c| if entry_of[c][3] { 1 } else { -1 }).collect();
        for c in 0..n {
            if let Some(sg) = overrides[c] {
                if sg != signs[c] {
                    return Err(Error::InvalidDiagram(format!(
                        "sign override at crossing {} contradicts orientation",
                        c + 1
                    )));
                }
            }
        }

        let d =
            LinkDiagram { crossings, overrides, signs, free_circles, labels, slots, tails, heads, strand_components };
        d.check_planar()?;
        Ok(d)
    }

    /// Genus-zero check on the rotation system given by the counterclockwise slot order.
    fn check_planar(&self) -> Result<()> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let mut seen = vec![[false; 4]; n];
        let mut faces = 0;
        for c in 0..n {
            for p in 0..4 {
                if seen[c][p] {
                    continue;
                }
                faces += 1;
                let mut d = Dart::new(c, p);
                while !seen[d.crossing][d.pos] {
                    seen[d.crossing][d.pos] = true;
                    d = self.next_in_face(d);
                }
            }
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for a in 0..self.labels.len() {
            let (x, y) = (find(&mut parent, self.tails[a].crossing), find(&mut parent, self.heads[a].crossing));
            parent[x] = y;
        }
        let pieces = (0..n).filter(|&c| find(&mut parent, c) == c).count();
        if faces != n + 2 * pieces {
            return Err(Error::InvalidDiagram(format!(
                "not planar: {faces} faces for {n} crossings in {pieces} connected piece(s)"
            )));
        }
        Ok(())
    }

    /// Face traversal: cross the arc at `d`, then turn to the next slot counterclockwise.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        let o = self.other_end(d);
        Dart::new(o.crossing, (o.pos + 1) % 4)
    }

    /// The dart at the other end of the arc attached at `d`.
    pub fn other_end(&self, d: Dart) -> Dart {
        let a = self.slots[d.crossing][d.pos];
        if self.tails[a] == d {
            self.heads[a]
        } else {
            self.tails[a]
        }
    }

    /// Faces of the diagram as cyclic lists of darts.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let n = self.crossings.len();
        let mut seen = vec![[false; 4]; n];
        let mut out = Vec::new();
        for c in 0..n {
            for p in 0..4 {
                if seen[c][p] {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = Dart::new(c, p);
                while !seen[d.crossing][d.pos] {
                    seen[d.crossing][d.pos] = true;
                    face.push(d);
                    d = self.next_in_face(d);
                }
                out.push(face);
            }
        }
        out
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn overrides(&self) -> &[Option<i8>] {
        &self.overrides
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    /// Number of arcs between crossings (crossingless circles are not counted).
    pub fn arc_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_label(&self, arc: usize) -> u32 {
        self.labels[arc]
    }

    /// Index of the arc attached at a slot.
    pub fn arc_at(&self, crossing: usize, pos: usize) -> usize {
        self.slots[crossing][pos]
    }

    pub fn slots(&self, crossing: usize) -> [usize; 4] {
        self.slots[crossing]
    }

    /// Where the arc starts (the crossing slot it leaves).
    pub fn tail(&self, arc: usize) -> Dart {
        self.tails[arc]
    }

    /// Where the arc ends (the crossing slot it enters).
    pub fn head(&self, arc: usize) -> Dart {
        self.heads[arc]
    }

    /// True when the strand enters the crossing at this slot.
    pub fn is_incoming(&self, d: Dart) -> bool {
        self.heads[self.slots[d.crossing][d.pos]] == d
    }

    pub fn sign(&self, crossing: usize) -> i8 {
        self.signs[crossing]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    /// Number of link components, counting crossingless circles.
    pub fn component_count(&self) -> usize {
        self.strand_components + self.free_circles
    }

    /// Canonical PD text.
    pub fn to_pd_string(&self) -> String {
        let mut toks: Vec<String> = self
            .crossings
            .iter()
            .zip(&self.overrides)
            .map(|(x, o)| {
                let mark = match o {
                    Some(s) if *s > 0 => "+",
                    Some(_) => "-",
                    None => "",
                };
                format!("X{mark}({},{},{},{})", x[0], x[1], x[2], x[3])
            })
            .collect();
        toks.extend(std::iter::repeat_n("O".to_string(), self.free_circles));
        toks.join(" ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pd": self.to_pd_string(),
            "crossings": self.crossings,
            "signs": self.signs,
            "n_plus": self.n_plus(),
            "n_minus": self.n_minus(),
            "writhe": self.writhe(),
            "arc_count": self.arc_count(),
            "free_circles": self.free_circles,
            "components": self.component_count(),
        })
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pd_string())
    }
}

/// Parses PD text: `X(a,b,c,d)` tokens, optional `X+(...)` / `X-(...)` sign overrides,
/// `O` for a crossingless circle, and `#` comments running to the end of the line.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let mut crossings = Vec::new();
    let mut overrides = Vec::new();
    let mut free = 0;
    let err = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
    let at = |i: usize| bytes.get(i).map(|x| x.0).unwrap_or(text.len());
    while i < bytes.len() {
        let (pos, ch) = bytes[i];
        match ch {
            c if c.is_whitespace() || c == ',' => i += 1,
            '#' => {
                while i < bytes.len() && bytes[i].1 != '\n' {
                    i += 1;
                }
            }
            'O' => {
                free += 1;
                i += 1;
            }
            'X' => {
                i += 1;
                let mut ov = None;
                match bytes.get(i).map(|x| x.1) {
                    Some('+') => {
                        ov = Some(1);
                        i += 1;
                    }
                    Some('-') | Some('−') => {
                        ov = Some(-1);
                        i += 1;
                    }
                    _ => {}
                }
                if bytes.get(i).map(|x| x.1) != Some('(') {
                    return Err(err(at(i), "expected '('"));
                }
                i += 1;
                let mut quad = [0u32; 4];
                for (k, slot) in quad.iter_mut().enumerate() {
                    while i < bytes.len() && bytes[i].1 == ' ' {
                        i += 1;
                    }
                    let start = i;
                    while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                        i += 1;
                    }
                    if start == i {
                        return Err(err(at(start), "expected arc number"));
                    }
                    let s: String = bytes[start..i].iter().map(|x| x.1).collect();
                    *slot = s.parse().map_err(|_| err(at(start), "arc number out of range"))?;
                    while i < bytes.len() && bytes[i].1 == ' ' {
                        i += 1;
                    }
                    let want = if k == 3 { ')' } else { ',' };
                    if bytes.get(i).map(|x| x.1) != Some(want) {
                        return Err(err(at(i), &format!("expected '{want}'")));
                    }
                    i += 1;
                }
                crossings.push(quad);
                overrides.push(ov);
            }
            _ => return Err(err(pos, &format!("unexpected character {ch:?}"))),
        }
    }
    LinkDiagram::new(crossings, overrides, free)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoils_and_hopf() {
        let right = parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        assert_eq!(right.writhe(), 3);
        let left = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(left.writhe(), -3);
        assert_eq!(parse_pd("X(4,1,3,2) X(2,3,1,4)").unwrap().writhe(), -2);
        let hopf = parse_pd("X(4,2,3,1) X(2,4,1,3)").unwrap();
        assert_eq!(hopf.writhe(), 2);
        assert_eq!(hopf.component_count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_pd("X(1,4,2,3) X(1,4,2,3)"), Err(Error::InvalidDiagram(_))));
        assert!(matches!(parse_pd("X(1,2,3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_pd("Y"), Err(Error::Syntax { pos: 0, .. })));
        // every arc used twice, but the three crossings cannot be drawn in the plane
        assert!(parse_pd("X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)").is_err());
    }

    #[test]
    fn circles_and_comments() {
        let d = parse_pd("# two circles\nO O").unwrap();
        assert_eq!(d.n_crossings(), 0);
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn overrides() {
        assert!(parse_pd("X+(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").is_ok());
        assert!(parse_pd("X-(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").is_err());
        let text = "X-(2,1,1,2)";
        assert_eq!(parse_pd(text).unwrap().to_pd_string(), text);
    }
}
