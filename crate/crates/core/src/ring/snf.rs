//! Smith normal form over a Euclidean ring.
//!
//! Unit pivots are eliminated sparsely first; whatever is left (typically a small block with
//! no unit entries) goes through a dense Euclidean reduction.

use std::collections::{BTreeMap, BTreeSet};

use super::EuclideanRing;

/// Matrix given by its nonzero entries.
#[derive(Clone, Debug)]
pub struct SparseMatrix<R> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, R)>,
}

impl<R: EuclideanRing> SparseMatrix<R> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn from_dense(a: &[Vec<R>]) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let entries = a
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(j, x)| (i, j, x.clone())))
            .collect();
        SparseMatrix { rows, cols, entries }
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut a = vec![vec![R::zero(); self.cols]; self.rows];
        for (i, j, x) in &self.entries {
            a[*i][*j] = a[*i][*j].add_r(x);
        }
        a
    }
}

/// Result of a Smith normal form computation.
pub type Rows<R> = Vec<Vec<R>>;

#[derive(Clone, Debug)]
pub struct SmithForm<R> {
    /// Nonzero diagonal entries in canonical form, each dividing the next.
    pub invariants: Vec<R>,
    /// `(P, Q)` with `P * A * Q` diagonal, when requested.
    pub transforms: Option<(Rows<R>, Rows<R>)>,
}

impl<R: EuclideanRing> SmithForm<R> {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Invariant factors that are not units.
    pub fn torsion(&self) -> Vec<R> {
        self.invariants.iter().filter(|x| !x.is_unit()).cloned().collect()
    }
}

pub fn smith_normal_form<R: EuclideanRing>(m: &SparseMatrix<R>, with_transforms: bool) -> SmithForm<R> {
    if with_transforms {
        let (diag, p, q) = dense_snf(m.to_dense(), true);
        return SmithForm { invariants: diag, transforms: Some((p.unwrap(), q.unwrap())) };
    }
    let (units, rest) = eliminate_units(m);
    let (mut diag, _, _) = dense_snf(rest, false);
    let mut invariants = vec![R::one(); units];
    invariants.append(&mut diag);
    SmithForm { invariants: divisibility_chain(invariants), transforms: None }
}

fn unit_inverse<R: EuclideanRing>(u: &R) -> R {
    R::one().div_rem_r(u).0
}

/// Sparse elimination of unit pivots. Returns the number of pivots removed and the
/// remaining block as a dense matrix.
fn eliminate_units<R: EuclideanRing>(m: &SparseMatrix<R>) -> (usize, Vec<Vec<R>>) {
    let mut rows: Vec<BTreeMap<usize, R>> = vec![BTreeMap::new(); m.rows];
    for (i, j, x) in &m.entries {
        let e = rows[*i].entry(*j).or_insert_with(R::zero);
        *e = e.add_r(x);
        if e.is_zero() {
            rows[*i].remove(j);
        }
    }
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, r) in rows.iter().enumerate() {
        for j in r.keys() {
            cols[*j].insert(i);
        }
    }
    let mut row_alive = vec![true; m.rows];
    let mut col_alive = vec![true; m.cols];
    let mut pivots = 0;
    loop {
        let mut progress = false;
        for c in 0..m.cols {
            if !col_alive[c] || cols[c].is_empty() {
                continue;
            }
            let pivot_row = cols[c].iter().copied().filter(|&r| rows[r][&c].is_unit()).min_by_key(|&r| rows[r].len());
            let Some(p) = pivot_row else { continue };
            let inv = unit_inverse(&rows[p][&c]);
            let prow = std::mem::take(&mut rows[p]);
            let targets: Vec<usize> = cols[c].iter().copied().filter(|&r| r != p).collect();
            for r in targets {
                let f = rows[r][&c].mul_r(&inv);
                for (j, x) in &prow {
                    let e = rows[r].entry(*j).or_insert_with(R::zero);
                    let was_zero = e.is_zero();
                    *e = e.sub_r(&f.mul_r(x));
                    if e.is_zero() {
                        rows[r].remove(j);
                        cols[*j].remove(&r);
                    } else if was_zero {
                        cols[*j].insert(r);
                    }
                }
            }
            for j in prow.keys() {
                cols[*j].remove(&p);
            }
            row_alive[p] = false;
            col_alive[c] = false;
            pivots += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| col_alive[c] && !cols[c].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let dense = rows
        .iter()
        .enumerate()
        .filter(|(i, r)| row_alive[*i] && !r.is_empty())
        .map(|(_, r)| {
            let mut v = vec![R::zero(); live_cols.len()];
            for (j, x) in r {
                v[col_pos[j]] = x.clone();
            }
            v
        })
        .collect();
    (pivots, dense)
}

struct Dense<R> {
    a: Vec<Vec<R>>,
    p: Option<Vec<Vec<R>>>,
    q: Option<Vec<Vec<R>>>,
}

fn identity<R: EuclideanRing>(n: usize) -> Vec<Vec<R>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect()).collect()
}

impl<R: EuclideanRing> Dense<R> {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        if let Some(p) = &mut self.p {
            p.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        for r in &mut self.a {
            r.swap(j, k);
        }
        if let Some(q) = &mut self.q {
            for r in q {
                r.swap(j, k);
            }
        }
    }

    /// row[i] += f * row[k]
    fn add_row(&mut self, i: usize, k: usize, f: &R) {
        fn go<R: EuclideanRing>(m: &mut [Vec<R>], i: usize, k: usize, f: &R) {
            let src = m[k].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                if !y.is_zero() {
                    *x = x.add_r(&f.mul_r(y));
                }
            }
        }
        go(&mut self.a, i, k, f);
        if let Some(p) = &mut self.p {
            go(p, i, k, f);
        }
    }

    /// col[j] += f * col[k]
    fn add_col(&mut self, j: usize, k: usize, f: &R) {
        fn go<R: EuclideanRing>(m: &mut [Vec<R>], j: usize, k: usize, f: &R) {
            for r in m {
                if !r[k].is_zero() {
                    r[j] = r[j].add_r(&f.mul_r(&r[k]));
                }
            }
        }
        go(&mut self.a, j, k, f);
        if let Some(q) = &mut self.q {
            go(q, j, k, f);
        }
    }

    fn scale_row(&mut self, i: usize, u: &R) {
        for x in &mut self.a[i] {
            *x = x.mul_r(u);
        }
        if let Some(p) = &mut self.p {
            for x in &mut p[i] {
                *x = x.mul_r(u);
            }
        }
    }
}

type DenseSnf<R> = (Vec<R>, Option<Vec<Vec<R>>>, Option<Vec<Vec<R>>>);

fn dense_snf<R: EuclideanRing>(a: Vec<Vec<R>>, track: bool) -> DenseSnf<R> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut d = Dense { a, p: track.then(|| identity(m)), q: track.then(|| identity(n)) };
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let best = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !d.a[i][j].is_zero())
            .min_by_key(|&(i, j)| d.a[i][j].norm());
        let Some((i0, j0)) = best else { break };
        d.swap_rows(t, i0);
        d.swap_cols(t, j0);
        loop {
            if let Some(i) = (t + 1..m).find(|&i| !d.a[i][t].is_zero()) {
                let (q, r) = d.a[i][t].div_rem_r(&d.a[t][t]);
                d.add_row(i, t, &q.neg_r());
                if !r.is_zero() {
                    d.swap_rows(t, i);
                }
                continue;
            }
            if let Some(j) = (t + 1..n).find(|&j| !d.a[t][j].is_zero()) {
                let (q, r) = d.a[t][j].div_rem_r(&d.a[t][t]);
                d.add_col(j, t, &q.neg_r());
                if !r.is_zero() {
                    d.swap_cols(t, j);
                }
                continue;
            }
            let piv = d.a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !piv.divides(&d.a[i][j])));
            if let Some(i) = bad {
                d.add_row(t, i, &R::one());
                continue;
            }
            break;
        }
        let u = d.a[t][t].normalizing_unit();
        d.scale_row(t, &u);
        diag.push(d.a[t][t].clone());
    }
    (diag, d.p, d.q)
}

/// Rearranges nonzero diagonal entries into a divisibility chain using
/// `diag(a, b) ~ diag(gcd, lcm)`.
fn divisibility_chain<R: EuclideanRing>(mut d: Vec<R>) -> Vec<R> {
    for x in &mut d {
        *x = x.canonical();
    }
    let k = d.len();
    for i in 0..k {
        if d[i].is_unit() {
            continue;
        }
        for j in i + 1..k {
            if d[i].divides(&d[j]) {
                continue;
            }
            let g = d[i].gcd_r(&d[j]);
            let l = d[i].mul_r(&d[j]).div_rem_r(&g).0.canonical();
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Invariant factors of a direct sum of cyclic modules `R/(x_k)`, as a divisibility chain.
pub fn combine_torsion<R: EuclideanRing>(factors: Vec<R>) -> Vec<R> {
    divisibility_chain(factors).into_iter().filter(|x| !x.is_unit()).collect()
}
