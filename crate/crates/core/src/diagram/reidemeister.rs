//! Reidemeister moves on PD diagrams.
//!
//! Moves are carried out on a mutable working graph whose edges know their tail and head
//! slots. The result is relabeled canonically and validated from scratch, so an ill-posed
//! move surfaces as an error rather than a corrupt diagram.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dart, LinkDiagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum MoveKind {
    R1,
    R2,
    R3,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveKind::R1 => "R1",
            MoveKind::R2 => "R2",
            MoveKind::R3 => "R3",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Direction {
    Insert,
    Remove,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Direction::Insert { "insert" } else { "remove" })
    }
}

/// A strand used by an insertion: an arc (by label) or a crossingless circle (by index).
/// `forward` says whether the move travels along the orientation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Strand {
    Arc { label: u32, forward: bool },
    Circle { index: usize, forward: bool },
}

impl Strand {
    fn forward(&self) -> bool {
        match self {
            Strand::Arc { forward, .. } | Strand::Circle { forward, .. } => *forward,
        }
    }
}

/// Where a move happens.
///
/// Removal and slide sites name their crossings. Insertion sites name strands; for R1 the
/// new crossing has sign `sign` and `first_over` says whether the strand passes over first,
/// for R2 `first_over` says whether the first strand is pushed over the second.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MoveSite {
    pub kind: MoveKind,
    pub crossings: Vec<usize>,
    pub strands: Vec<Strand>,
    pub sign: i8,
    pub first_over: bool,
    pub variant: String,
}

impl MoveSite {
    fn removal(kind: MoveKind, crossings: Vec<usize>, variant: String) -> Self {
        MoveSite { kind, crossings, strands: Vec::new(), sign: 0, first_over: false, variant }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strands: Vec<serde_json::Value> = self
            .strands
            .iter()
            .map(|s| match s {
                Strand::Arc { label, forward } => serde_json::json!({"arc": label, "forward": forward}),
                Strand::Circle { index, forward } => serde_json::json!({"circle": index, "forward": forward}),
            })
            .collect();
        serde_json::json!({
            "kind": self.kind.to_string(),
            "crossings": self.crossings.iter().map(|c| c + 1).collect::<Vec<_>>(),
            "strands": strands,
            "variant": self.variant,
        })
    }
}

/// Image of an old arc or circle in the new diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArcImage {
    Arc(u32),
    Circle(usize),
}

/// How the untouched parts of a diagram reappear after a move.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Correspondence {
    /// Old crossing index to new crossing index, `None` for removed crossings.
    pub crossings: Vec<Option<usize>>,
    /// Old arc label to its image (arcs cut by an insertion map to the piece at their tail).
    pub arcs: BTreeMap<u32, ArcImage>,
    /// Old crossingless circles to their images.
    pub circles: Vec<ArcImage>,
    /// Indices of crossings created by the move.
    pub new_crossings: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Origin {
    Arc(u32),
    Circle(usize),
}

#[derive(Clone, Debug)]
struct WEdge {
    tail: Dart,
    head: Dart,
    origins: Vec<Origin>,
    alive: bool,
}

#[derive(Clone, Debug)]
struct Work {
    xs: Vec<Option<[usize; 4]>>,
    overrides: Vec<Option<i8>>,
    edges: Vec<WEdge>,
    loops: Vec<Vec<Origin>>,
    old_n: usize,
}

impl Work {
    fn from_diagram(d: &LinkDiagram) -> Self {
        let edges = (0..d.arc_count())
            .map(|a| WEdge {
                tail: d.tail(a),
                head: d.head(a),
                origins: vec![Origin::Arc(d.arc_label(a))],
                alive: true,
            })
            .collect();
        Work {
            xs: (0..d.n_crossings()).map(|c| Some(d.slots(c))).collect(),
            overrides: d.overrides().to_vec(),
            edges,
            loops: (0..d.free_circles()).map(|i| vec![Origin::Circle(i)]).collect(),
            old_n: d.n_crossings(),
        }
    }

    fn slot(&self, d: Dart) -> usize {
        self.xs[d.crossing].expect("removed crossing")[d.pos]
    }

    fn set_slot(&mut self, d: Dart, e: usize) {
        self.xs[d.crossing].as_mut().expect("removed crossing")[d.pos] = e;
    }

    fn new_edge(&mut self, tail: Dart, head: Dart, origins: Vec<Origin>) -> usize {
        self.edges.push(WEdge { tail, head, origins, alive: true });
        self.edges.len() - 1
    }

    fn new_crossing(&mut self) -> usize {
        self.xs.push(Some([usize::MAX; 4]));
        self.overrides.push(None);
        self.xs.len() - 1
    }

    fn edge_of_label(&self, label: u32) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.alive && e.origins.first() == Some(&Origin::Arc(label)))
            .ok_or_else(|| Error::Move(format!("no arc {label}")))
    }

    /// Removes crossings whose strands pass straight through, joining the pieces.
    fn splice(&mut self, removed: &[usize]) {
        let rset: HashSet<usize> = removed.iter().copied().collect();
        let entering: Vec<usize> = (0..self.edges.len())
            .filter(|&e| {
                let w = &self.edges[e];
                w.alive && !rset.contains(&w.tail.crossing) && rset.contains(&w.head.crossing)
            })
            .collect();
        let mut consumed = BTreeSet::new();
        let mut rewires = Vec::new();
        for e in entering {
            let mut cur = self.edges[e].head;
            let mut origins = self.edges[e].origins.clone();
            loop {
                let next = self.slot(cur.through());
                consumed.insert(next);
                origins.extend(self.edges[next].origins.iter().copied());
                let h = self.edges[next].head;
                if !rset.contains(&h.crossing) {
                    origins.sort();
                    rewires.push((e, h, origins));
                    break;
                }
                cur = h;
            }
        }
        for e in &consumed {
            self.edges[*e].alive = false;
        }
        for (e, h, origins) in rewires {
            self.edges[e].head = h;
            self.edges[e].origins = origins;
            self.set_slot(h, e);
        }
        // cycles lying entirely inside the removed crossings become free circles
        let mut trapped: BTreeSet<usize> = (0..self.edges.len())
            .filter(|&e| self.edges[e].alive && rset.contains(&self.edges[e].tail.crossing))
            .collect();
        while let Some(&start) = trapped.iter().next() {
            let mut origins = Vec::new();
            let mut e = start;
            loop {
                trapped.remove(&e);
                self.edges[e].alive = false;
                origins.extend(self.edges[e].origins.iter().copied());
                e = self.slot(self.edges[e].head.through());
                if e == start {
                    break;
                }
            }
            origins.sort();
            self.loops.push(origins);
        }
        for c in removed {
            self.xs[*c] = None;
        }
    }

    /// Relabels arcs canonically and validates the result.
    fn finish(self) -> Result<(LinkDiagram, Correspondence)> {
        let mut new_index = vec![None; self.xs.len()];
        let mut k = 0;
        for (c, x) in self.xs.iter().enumerate() {
            if x.is_some() {
                new_index[c] = Some(k);
                k += 1;
            }
        }
        let alive: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edges[e].alive).collect();
        let mut seen = HashSet::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for &e0 in &alive {
            if seen.contains(&e0) {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = e0;
            loop {
                seen.insert(e);
                comp.push(e);
                e = self.slot(self.edges[e].head.through());
                if e == e0 {
                    break;
                }
            }
            comps.push(comp);
        }
        let key = |e: usize| -> (u8, u64) {
            let w = &self.edges[e];
            match w.origins.first() {
                Some(Origin::Arc(l)) => (0, *l as u64),
                Some(Origin::Circle(i)) => (1, *i as u64),
                None => (2, (new_index[w.tail.crossing].unwrap() * 4 + w.tail.pos) as u64),
            }
        };
        for comp in &mut comps {
            let start = (0..comp.len()).min_by_key(|&i| key(comp[i])).unwrap();
            comp.rotate_left(start);
        }
        comps.sort_by_key(|c| key(c[0]));
        let mut label = vec![0u32; self.edges.len()];
        let mut next = 1;
        for comp in &comps {
            for &e in comp {
                label[e] = next;
                next += 1;
            }
        }
        let mut crossings = Vec::new();
        let mut overrides = Vec::new();
        for (c, x) in self.xs.iter().enumerate() {
            if let Some(slots) = x {
                crossings.push(slots.map(|e| label[e]));
                overrides.push(self.overrides[c]);
            }
        }
        let mut corr = Correspondence {
            crossings: new_index[..self.old_n].to_vec(),
            new_crossings: (self.old_n..self.xs.len()).filter_map(|c| new_index[c]).collect(),
            ..Default::default()
        };
        let mut circle_images: BTreeMap<usize, ArcImage> = BTreeMap::new();
        let mut record = |o: &Origin, img: ArcImage, corr: &mut Correspondence| match o {
            Origin::Arc(l) => {
                corr.arcs.insert(*l, img);
            }
            Origin::Circle(i) => {
                circle_images.insert(*i, img);
            }
        };
        for &e in &alive {
            for o in &self.edges[e].origins {
                record(o, ArcImage::Arc(label[e]), &mut corr);
            }
        }
        for (i, origins) in self.loops.iter().enumerate() {
            for o in origins {
                record(o, ArcImage::Circle(i), &mut corr);
            }
        }
        corr.circles = circle_images.into_values().collect();
        let d = LinkDiagram::new(crossings, overrides, self.loops.len())
            .map_err(|e| Error::Move(format!("move produced an invalid diagram: {e}")))?;
        Ok((d, corr))
    }
}

/// Removal sites for R1/R2 and slide sites for R3, in a deterministic order.
pub fn find_move_sites(d: &LinkDiagram, kind: MoveKind) -> Vec<MoveSite> {
    match kind {
        MoveKind::R1 => (0..d.n_crossings())
            .filter(|&c| kink_loop(d, c).is_some())
            .map(|c| {
                let v = if d.sign(c) > 0 { "positive kink" } else { "negative kink" };
                MoveSite::removal(MoveKind::R1, vec![c], v.to_string())
            })
            .collect(),
        MoveKind::R2 => {
            let mut out = Vec::new();
            for face in d.faces() {
                if face.len() != 2 || face[0].crossing == face[1].crossing || face[0].pos % 2 == face[1].pos % 2 {
                    continue;
                }
                let e1 = d.arc_at(face[0].crossing, face[0].pos);
                let e2 = d.arc_at(face[1].crossing, face[1].pos);
                let opposed = d.tail(e1).crossing == d.head(e2).crossing;
                let v = if opposed { "antiparallel" } else { "parallel" };
                let mut cs = vec![face[0].crossing, face[1].crossing];
                cs.sort();
                out.push(MoveSite::removal(MoveKind::R2, cs, v.to_string()));
            }
            out.sort_by(|a, b| a.crossings.cmp(&b.crossings));
            out
        }
        MoveKind::R3 => {
            let mut out = Vec::new();
            for face in d.faces() {
                if face.len() != 3 {
                    continue;
                }
                let cs: BTreeSet<usize> = face.iter().map(|x| x.crossing).collect();
                if cs.len() != 3 {
                    continue;
                }
                let a_joins = face.iter().filter(|x| x.pos % 2 == 1).count();
                if a_joins == 0 || a_joins == 3 {
                    continue;
                }
                let v = if a_joins == 2 { "AAB" } else { "ABB" };
                out.push(MoveSite::removal(MoveKind::R3, face.iter().map(|x| x.crossing).collect(), v.to_string()));
            }
            out.sort_by(|a, b| a.crossings.cmp(&b.crossings));
            out
        }
    }
}

/// An arc at crossing `c` whose two ends sit in adjacent slots of `c`.
fn kink_loop(d: &LinkDiagram, c: usize) -> Option<usize> {
    (0..d.arc_count()).find(|&a| {
        let (t, h) = (d.tail(a), d.head(a));
        t.crossing == c && h.crossing == c && (t.pos + 4 - h.pos) % 2 == 1
    })
}

/// Places where a crossing-increasing move can be made.
pub fn insertion_sites(d: &LinkDiagram, kind: MoveKind) -> Vec<MoveSite> {
    let strands: Vec<Strand> = (0..d.arc_count())
        .map(|a| Strand::Arc { label: d.arc_label(a), forward: true })
        .chain((0..d.free_circles()).map(|i| Strand::Circle { index: i, forward: true }))
        .collect();
    match kind {
        MoveKind::R1 => {
            let mut out = Vec::new();
            for s in &strands {
                for (sign, first_over) in [(1, false), (-1, false), (1, true), (-1, true)] {
                    out.push(MoveSite {
                        kind: MoveKind::R1,
                        crossings: Vec::new(),
                        strands: vec![*s],
                        sign,
                        first_over,
                        variant: format!(
                            "{} kink, {} first",
                            if sign > 0 { "positive" } else { "negative" },
                            if first_over { "over" } else { "under" }
                        ),
                    });
                }
            }
            out
        }
        MoveKind::R2 => {
            let mut pairs: Vec<(Strand, Strand)> = Vec::new();
            for face in d.faces() {
                let walk: Vec<Strand> = face
                    .iter()
                    .map(|x| {
                        let a = d.arc_at(x.crossing, x.pos);
                        Strand::Arc { label: d.arc_label(a), forward: d.tail(a) == *x }
                    })
                    .collect();
                for i in 0..walk.len() {
                    for j in i + 1..walk.len() {
                        if let (Strand::Arc { label: l1, .. }, Strand::Arc { label: l2, .. }) = (walk[i], walk[j]) {
                            if l1 != l2 {
                                pairs.push((walk[i], walk[j]));
                            }
                        }
                    }
                }
            }
            for i in 0..d.free_circles() {
                for fwd in [true, false] {
                    let o = Strand::Circle { index: i, forward: fwd };
                    for a in 0..d.arc_count() {
                        for af in [true, false] {
                            pairs.push((o, Strand::Arc { label: d.arc_label(a), forward: af }));
                        }
                    }
                    for j in i + 1..d.free_circles() {
                        pairs.push((Strand::Circle { index: j, forward: true }, o));
                    }
                    pairs.push((o, o));
                }
            }
            let mut out = Vec::new();
            for (e, f) in pairs {
                for first_over in [true, false] {
                    out.push(MoveSite {
                        kind: MoveKind::R2,
                        crossings: Vec::new(),
                        strands: vec![e, f],
                        sign: 0,
                        first_over,
                        variant: if e == f { "self".into() } else { "pair".into() },
                    });
                }
            }
            out
        }
        MoveKind::R3 => find_move_sites(d, MoveKind::R3),
    }
}

/// Applies a move. R3 slides ignore `direction`.
pub fn apply_move(d: &LinkDiagram, site: &MoveSite, direction: Direction) -> Result<(LinkDiagram, Correspondence)> {
    let mut w = Work::from_diagram(d);
    match (site.kind, direction) {
        (MoveKind::R1, Direction::Remove) => {
            let [c] = site.crossings[..] else { return Err(Error::Move("R1 removal needs one crossing".into())) };
            if c >= d.n_crossings() || kink_loop(d, c).is_none() {
                return Err(Error::Move(format!("crossing {} is not a kink", c + 1)));
            }
            w.splice(&[c]);
        }
        (MoveKind::R2, Direction::Remove) => {
            let ok = find_move_sites(d, MoveKind::R2).iter().any(|s| {
                let mut want = site.crossings.clone();
                want.sort();
                s.crossings == want
            });
            if !ok {
                return Err(Error::Move("crossings do not bound a removable bigon".into()));
            }
            w.splice(&site.crossings);
        }
        (MoveKind::R3, _) => r3_slide(d, &mut w, site)?,
        (MoveKind::R1, Direction::Insert) => r1_insert(&mut w, site)?,
        (MoveKind::R2, Direction::Insert) => r2_insert(&mut w, site)?,
    }
    w.finish()
}

/// Handle on a strand that is about to be cut.
enum Cut {
    Edge { id: usize, tail: Dart, head: Dart },
    Loop { origins: Vec<Origin> },
}

fn take_strand(w: &mut Work, s: &Strand) -> Result<Cut> {
    match s {
        Strand::Arc { label, .. } => {
            let id = w.edge_of_label(*label)?;
            let e = &w.edges[id];
            Ok(Cut::Edge { id, tail: e.tail, head: e.head })
        }
        Strand::Circle { index, .. } => {
            if *index >= w.loops.len() {
                return Err(Error::Move(format!("no circle {index}")));
            }
            Ok(Cut::Loop { origins: w.loops[*index].clone() })
        }
    }
}

fn r1_insert(w: &mut Work, site: &MoveSite) -> Result<()> {
    let [s] = site.strands[..] else { return Err(Error::Move("R1 insertion needs one strand".into())) };
    let cut = take_strand(w, &s)?;
    let x = w.new_crossing();
    // slots of the incoming piece, the outgoing piece and the loop (loop tail, loop head)
    let (pin, pout, lt, lh) = match (site.sign > 0, site.first_over) {
        (true, false) => (0, 1, 2, 3),
        (false, false) => (0, 3, 2, 1),
        (true, true) => (3, 2, 1, 0),
        (false, true) => (1, 2, 3, 0),
    };
    let at = |p| Dart::new(x, p);
    let lp = w.new_edge(at(lt), at(lh), Vec::new());
    w.set_slot(at(lt), lp);
    w.set_slot(at(lh), lp);
    match cut {
        Cut::Edge { id, head, .. } => {
            w.edges[id].head = at(pin);
            w.set_slot(at(pin), id);
            let out = w.new_edge(at(pout), head, Vec::new());
            w.set_slot(at(pout), out);
            w.set_slot(head, out);
        }
        Cut::Loop { origins } => {
            let Strand::Circle { index, .. } = s else { unreachable!() };
            w.loops.remove(index);
            let e = w.new_edge(at(pout), at(pin), origins);
            w.set_slot(at(pout), e);
            w.set_slot(at(pin), e);
        }
    }
    Ok(())
}

/// Names of the pieces created by pushing strand e across strand f, in travel order:
/// e runs `EIn -> C1 -> EMid -> C2 -> EOut`, f runs `FIn -> C2 -> FMid -> C1 -> FOut`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Piece {
    EIn,
    EMid,
    EOut,
    FIn,
    FMid,
    FOut,
}

fn r2_insert(w: &mut Work, site: &MoveSite) -> Result<()> {
    use Piece::*;
    let [e, f] = site.strands[..] else { return Err(Error::Move("R2 insertion needs two strands".into())) };
    let same = e == f;
    if let (Strand::Arc { label: a, .. }, Strand::Arc { label: b, .. }) = (e, f) {
        if a == b {
            return Err(Error::Move("R2 insertion on a single arc is not supported".into()));
        }
    }
    if !same {
        if let (Strand::Circle { index: i, .. }, Strand::Circle { index: j, .. }) = (e, f) {
            if i == j {
                return Err(Error::Move("inconsistent circle directions".into()));
            }
        }
    }
    let ecut = take_strand(w, &e)?;
    let fcut = if same { None } else { Some(take_strand(w, &f)?) };
    let c1 = w.new_crossing();
    let c2 = w.new_crossing();
    // counterclockwise piece order at each new crossing
    let ccw1 = [FMid, EIn, FOut, EMid];
    let ccw2 = [FIn, EOut, FMid, EMid];
    let e_under = !site.first_over;
    let is_e = |p: Piece| matches!(p, EIn | EMid | EOut);
    let fwd = |p: Piece| if is_e(p) { e.forward() } else { f.forward() };
    // the piece arriving at the crossing along the orientation
    let incoming_at = |c: usize, p: Piece| -> bool {
        let travel_in = matches!((c == c1, p), (true, EIn) | (true, FMid) | (false, EMid) | (false, FIn));
        travel_in == fwd(p)
    };
    let mut slot_of = BTreeMap::new();
    for (c, ccw) in [(c1, ccw1), (c2, ccw2)] {
        let start =
            (0..4).find(|&k| is_e(ccw[k]) == e_under && incoming_at(c, ccw[k])).expect("one incoming under piece");
        for k in 0..4 {
            let p = ccw[(start + k) % 4];
            slot_of.insert((c, p), Dart::new(c, k));
        }
    }
    let at = |c: usize, p: Piece| slot_of[&(c, p)];
    // (piece, travel start, travel end); None stands for the strand's original end
    let mut pieces: Vec<(Vec<Piece>, Option<Dart>, Option<Dart>)> =
        vec![(vec![EMid], Some(at(c1, EMid)), Some(at(c2, EMid)))];
    pieces.push((vec![FMid], Some(at(c2, FMid)), Some(at(c1, FMid))));
    if same {
        pieces.push((vec![FOut, EIn], Some(at(c1, FOut)), Some(at(c1, EIn))));
        pieces.push((vec![EOut, FIn], Some(at(c2, EOut)), Some(at(c2, FIn))));
    } else {
        for (cut, pin, pout, cin, cout) in [(Some(&ecut), EIn, EOut, c1, c2), (fcut.as_ref(), FIn, FOut, c2, c1)] {
            match cut.unwrap() {
                Cut::Loop { .. } => pieces.push((vec![pout, pin], Some(at(cout, pout)), Some(at(cin, pin)))),
                Cut::Edge { .. } => {
                    pieces.push((vec![pin], None, Some(at(cin, pin))));
                    pieces.push((vec![pout], Some(at(cout, pout)), None));
                }
            }
        }
    }
    let mut loops_to_drop = Vec::new();
    for (names, start, end) in pieces {
        let p = names[0];
        let forward = fwd(p);
        let (cut, strand) = if is_e(p) { (&ecut, e) } else { (fcut.as_ref().unwrap_or(&ecut), f) };
        let (tail, head) = if forward { (start, end) } else { (end, start) };
        match cut {
            Cut::Edge { id, tail: t0, head: h0, .. } => {
                match (tail, head) {
                    // the piece that still starts at the original tail keeps the edge
                    (None, Some(h)) => {
                        w.edges[*id].head = h;
                        w.set_slot(h, *id);
                    }
                    (Some(t), None) => {
                        let ne = w.new_edge(t, *h0, Vec::new());
                        w.set_slot(t, ne);
                        w.set_slot(*h0, ne);
                    }
                    (Some(t), Some(h)) => {
                        let ne = w.new_edge(t, h, Vec::new());
                        w.set_slot(t, ne);
                        w.set_slot(h, ne);
                    }
                    (None, None) => unreachable!(),
                }
                let _ = t0;
            }
            Cut::Loop { origins } => {
                let keep = names.len() == 2 && names.contains(if is_e(p) { &EIn } else { &FIn });
                let origins = if keep { origins.clone() } else { Vec::new() };
                let ne = w.new_edge(tail.unwrap(), head.unwrap(), origins);
                w.set_slot(tail.unwrap(), ne);
                w.set_slot(head.unwrap(), ne);
                if let Strand::Circle { index, .. } = strand {
                    if !loops_to_drop.contains(&index) {
                        loops_to_drop.push(index);
                    }
                }
            }
        }
    }
    loops_to_drop.sort();
    for i in loops_to_drop.into_iter().rev() {
        w.loops.remove(i);
    }
    Ok(())
}

fn r3_slide(d: &LinkDiagram, w: &mut Work, site: &MoveSite) -> Result<()> {
    let face = d
        .faces()
        .into_iter()
        .find(|f| f.len() == 3 && f.iter().map(|x| x.crossing).collect::<Vec<_>>() == site.crossings)
        .ok_or_else(|| Error::Move("crossings do not bound a triangle".into()))?;
    let a_joins = face.iter().filter(|x| x.pos % 2 == 1).count();
    if a_joins == 0 || a_joins == 3 {
        return Err(Error::Move("alternating triangle cannot be slid".into()));
    }
    let tri: Vec<usize> = face.iter().map(|x| d.arc_at(x.crossing, x.pos)).collect();
    let mut tails = BTreeMap::new();
    let mut heads = BTreeMap::new();
    let set = |m: &mut BTreeMap<usize, Dart>, e: usize, x: Dart| -> Result<()> {
        if m.insert(e, x).is_some_and(|old| old != x) {
            return Err(Error::Move("triangle too degenerate to slide".into()));
        }
        Ok(())
    };
    for &e in &tri {
        let (t, h) = (d.tail(e), d.head(e));
        let before = d.arc_at(t.crossing, t.through().pos);
        let after = d.arc_at(h.crossing, h.through().pos);
        if tri.contains(&before) || tri.contains(&after) {
            return Err(Error::Move("triangle too degenerate to slide".into()));
        }
        set(&mut tails, e, h.through())?;
        set(&mut heads, e, t.through())?;
        set(&mut heads, before, h)?;
        set(&mut tails, after, t)?;
    }
    for (e, x) in tails {
        w.edges[e].tail = x;
        w.set_slot(x, e);
    }
    for (e, x) in heads {
        w.edges[e].head = x;
        w.set_slot(x, e);
    }
    Ok(())
}

/// One step of a random move sequence.
#[derive(Clone, Debug)]
pub struct PlannedMove {
    pub site: MoveSite,
    pub direction: Direction,
    pub result: LinkDiagram,
}

/// A seeded random walk through Reidemeister moves, keeping at most `max_crossings`.
/// Moves that fail validation are skipped and another is drawn.
pub fn random_move_sequence(d: &LinkDiagram, steps: usize, seed: u64, max_crossings: usize) -> Vec<PlannedMove> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < steps && attempts < steps * 50 {
        attempts += 1;
        let n = cur.n_crossings();
        let mut options: Vec<(MoveKind, Direction)> = Vec::new();
        if n < max_crossings {
            options.push((MoveKind::R1, Direction::Insert));
        }
        if n + 2 <= max_crossings {
            options.push((MoveKind::R2, Direction::Insert));
        }
        options.push((MoveKind::R1, Direction::Remove));
        options.push((MoveKind::R2, Direction::Remove));
        options.push((MoveKind::R3, Direction::Remove));
        let &(kind, dir) = options.choose(&mut rng).unwrap();
        let sites = match dir {
            Direction::Insert => insertion_sites(&cur, kind),
            Direction::Remove => find_move_sites(&cur, kind),
        };
        if sites.is_empty() {
            continue;
        }
        let site = &sites[rng.gen_range(0..sites.len())];
        if let Ok((next, _)) = apply_move(&cur, site, dir) {
            out.push(PlannedMove { site: site.clone(), direction: dir, result: next.clone() });
            cur = next;
        }
    }
    out
}
