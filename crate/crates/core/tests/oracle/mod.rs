//! Brute-force Khovanov homology straight from a PD code. Shares nothing with the
//! engine: its own circle finding, the textbook 0/1-smoothing cube with the usual
//! `(−1)^{#1s before k}` edge signs, and a dense Smith normal form per bigrading.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

/// `(i, j, rank, torsion)` for every nonzero group.
pub type Table = Vec<(i64, i64, usize, Vec<i64>)>;

fn parse(pd: &str) -> (Vec<[u32; 4]>, usize) {
    let mut xs = Vec::new();
    let mut free = 0;
    for tok in pd.split_whitespace() {
        if tok == "O" {
            free += 1;
            continue;
        }
        let inner = tok.trim_start_matches("X(").trim_end_matches(')');
        let v: Vec<u32> = inner.split(',').map(|s| s.parse().unwrap()).collect();
        xs.push([v[0], v[1], v[2], v[3]]);
    }
    (xs, free)
}

struct Uf(Vec<usize>);

impl Uf {
    fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

fn labels(xs: &[[u32; 4]]) -> Vec<u32> {
    let mut l: Vec<u32> = xs.iter().flatten().copied().collect();
    l.sort();
    l.dedup();
    l
}

/// Circle index of every edge label in smoothing `r` (bit set = 1-smoothing), numbered by
/// first appearance in label order.
fn circles(xs: &[[u32; 4]], ls: &[u32], r: u64) -> (Vec<usize>, usize) {
    let idx = |l: u32| ls.binary_search(&l).unwrap();
    let mut uf = Uf::new(ls.len());
    for (c, x) in xs.iter().enumerate() {
        let pairs = if r >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
        for (a, b) in pairs {
            uf.join(idx(x[a]), idx(x[b]));
        }
    }
    let mut id = BTreeMap::new();
    let of: Vec<usize> = (0..ls.len())
        .map(|e| {
            let root = uf.find(e);
            let next = id.len();
            *id.entry(root).or_insert(next)
        })
        .collect();
    (of, id.len())
}

/// Crossing signs by propagating orientation: the under strand runs `i → k`, the two ends of
/// an edge have opposite directions and so do the over ends `j`, `l`. Positive when the over
/// strand leaves through `j`.
fn signs(xs: &[[u32; 4]]) -> Vec<i64> {
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, x) in xs.iter().enumerate() {
        for (p, &l) in x.iter().enumerate() {
            ends.entry(l).or_default().push((c, p));
        }
    }
    let mut incoming: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for c in 0..xs.len() {
        incoming.insert((c, 0), true);
        incoming.insert((c, 2), false);
    }
    loop {
        let before = incoming.len();
        for e in ends.values() {
            for (u, v) in [(e[0], e[1]), (e[1], e[0])] {
                if let Some(&d) = incoming.get(&u) {
                    incoming.entry(v).or_insert(!d);
                }
            }
        }
        for c in 0..xs.len() {
            for (u, v) in [((c, 1), (c, 3)), ((c, 3), (c, 1))] {
                if let Some(&d) = incoming.get(&u) {
                    incoming.entry(v).or_insert(!d);
                }
            }
        }
        if incoming.len() == before {
            match (0..xs.len()).find(|&c| !incoming.contains_key(&(c, 1))) {
                Some(c) => {
                    incoming.insert((c, 1), true);
                }
                None => break,
            }
        }
    }
    (0..xs.len()).map(|c| if incoming[&(c, 1)] { -1 } else { 1 }).collect()
}

pub fn components(pd: &str) -> usize {
    let (xs, free) = parse(pd);
    let ls = labels(&xs);
    let idx = |l: u32| ls.binary_search(&l).unwrap();
    let mut uf = Uf::new(ls.len());
    for x in &xs {
        uf.join(idx(x[0]), idx(x[2]));
        uf.join(idx(x[1]), idx(x[3]));
    }
    (0..ls.len()).filter(|&e| uf.find(e) == e).count() + free
}

/// Nonzero invariant factors of a dense integer matrix.
pub fn invariant_factors(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].abs());
        let Some((pr, pc)) = pivot else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let p = m[t][t];
        let mut clean = true;
        for r in t + 1..rows {
            let q = m[r][t] / p;
            if q != 0 {
                for c in t..cols {
                    m[r][c] -= q * m[t][c];
                }
            }
            clean &= m[r][t] == 0;
        }
        for c in t + 1..cols {
            let q = m[t][c] / p;
            if q != 0 {
                for r in t..rows {
                    m[r][c] -= q * m[r][t];
                }
            }
            clean &= m[t][c] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the matrix
        if let Some(r) = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % p != 0)) {
            for c in t..cols {
                m[t][c] += m[r][c];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Khovanov homology over ℤ, bigraded. `+` labels `1` (degree +1), `x` has degree −1.
pub fn khovanov(pd: &str) -> Table {
    let (xs, free) = parse(pd);
    let n = xs.len();
    let ls = labels(&xs);
    let sg = signs(&xs);
    let np = sg.iter().filter(|&&s| s > 0).count() as i64;
    let nm = n as i64 - np;
    let states: Vec<(Vec<usize>, usize)> = (0..1u64 << n).map(|r| circles(&xs, &ls, r)).collect();
    let idx = |l: u32| ls.binary_search(&l).unwrap();

    // generator: (state, mask of x-labelled circles); free circles are the top bits
    let grade = |r: u64, mask: u64| {
        let k = states[r as usize].1 + free;
        let xcount = mask.count_ones() as i64;
        let i = r.count_ones() as i64 - nm;
        (i, (k as i64 - 2 * xcount) + r.count_ones() as i64 + np - 2 * nm)
    };
    let mut blocks: BTreeMap<(i64, i64), Vec<(u64, u64)>> = BTreeMap::new();
    for r in 0..1u64 << n {
        let k = states[r as usize].1 + free;
        for mask in 0..1u64 << k {
            blocks.entry(grade(r, mask)).or_default().push((r, mask));
        }
    }

    let image = |r: u64, mask: u64, c: usize| -> Vec<(u64, i128)> {
        let r2 = r | 1 << c;
        let (of1, k1) = &states[r as usize];
        let (of2, k2) = &states[r2 as usize];
        let sign: i128 = if (r & ((1 << c) - 1)).count_ones().is_multiple_of(2) { 1 } else { -1 };
        let at = xs[c].map(idx);
        let mut src: Vec<usize> = at.iter().map(|&e| of1[e]).collect();
        src.sort();
        src.dedup();
        let mut dst: Vec<usize> = at.iter().map(|&e| of2[e]).collect();
        dst.sort();
        dst.dedup();
        // uninvolved circles carry their label across
        let mut base = 0u64;
        for e in 0..ls.len() {
            if !src.contains(&of1[e]) && mask >> of1[e] & 1 == 1 {
                base |= 1 << of2[e];
            }
        }
        base |= (mask >> k1) << k2;
        let bit = |m: u64, j: usize| m >> j & 1 == 1;
        match (src.len(), dst.len()) {
            (2, 1) => {
                let xs_in = bit(mask, src[0]) as u32 + bit(mask, src[1]) as u32;
                match xs_in {
                    0 => vec![(base, sign)],
                    1 => vec![(base | 1 << dst[0], sign)],
                    _ => vec![],
                }
            }
            (1, 2) => {
                let (a, b) = (1u64 << dst[0], 1u64 << dst[1]);
                if bit(mask, src[0]) {
                    vec![(base | a | b, sign)]
                } else {
                    vec![(base | a, sign), (base | b, sign)]
                }
            }
            _ => unreachable!("a saddle merges or splits"),
        }
    };

    let matrix = |from: &[(u64, u64)], to: &[(u64, u64)]| -> Vec<Vec<i128>> {
        let pos: BTreeMap<(u64, u64), usize> = to.iter().enumerate().map(|(p, &g)| (g, p)).collect();
        let mut m = vec![vec![0i128; from.len()]; to.len()];
        for (col, &(r, mask)) in from.iter().enumerate() {
            for c in (0..n).filter(|&c| r >> c & 1 == 0) {
                for (tm, v) in image(r, mask, c) {
                    m[pos[&(r | 1 << c, tm)]][col] += v;
                }
            }
        }
        m
    };

    let empty = Vec::new();
    let mut out = Table::new();
    for (&(i, j), gens) in &blocks {
        let next = blocks.get(&(i + 1, j)).unwrap_or(&empty);
        let prev = blocks.get(&(i - 1, j)).unwrap_or(&empty);
        let out_rank = invariant_factors(matrix(gens, next)).len();
        let incoming = invariant_factors(matrix(prev, gens));
        let rank = gens.len() - out_rank - incoming.len();
        let torsion: Vec<i64> = incoming.iter().filter(|&&d| d > 1).map(|&d| d as i64).collect();
        if rank > 0 || !torsion.is_empty() {
            out.push((i, j, rank, torsion));
        }
    }
    out
}

#[test]
fn oracle_smoke() {
    assert_eq!(khovanov("O"), vec![(0, -1, 1, vec![]), (0, 1, 1, vec![])]);
    assert_eq!(invariant_factors(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
    assert_eq!(invariant_factors(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    assert_eq!(components("X(4,2,3,1) X(2,4,1,3)"), 2);
}
