//! Homology of the cube complex after specializing to a principal ideal domain.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::ComplexRepr;
use crate::error::{Error, Result};
use crate::polyring::{BivariatePoly, Specialization};
use crate::ring::{combine_torsion, smith_normal_form, EuclideanRing, Gf2, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Group {
    pub i: i64,
    pub j: Option<i64>,
    pub rank: usize,
    /// Invariant factors that are not units, in divisibility order.
    pub torsion: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub spec: String,
    pub bigraded: bool,
    /// Nonzero groups only, ordered by `(i, j)`.
    pub groups: Vec<Group>,
}

impl HomologyResult {
    pub fn total_rank(&self) -> usize {
        self.groups.iter().map(|g| g.rank).sum()
    }

    pub fn group(&self, i: i64, j: Option<i64>) -> Option<&Group> {
        self.groups.iter().find(|g| g.i == i && g.j == j)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "spec": self.spec,
            "groups": self.groups.iter().map(|g| json!({"i": g.i, "j": g.j, "rank": g.rank, "torsion": g.torsion})).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:", self.spec)?;
        for g in &self.groups {
            match g.j {
                Some(j) => write!(f, " H({},{})", g.i, j)?,
                None => write!(f, " H({})", g.i)?,
            }
            write!(f, "=rank {}", g.rank)?;
            if !g.torsion.is_empty() {
                write!(f, "+tors[{}]", g.torsion.join(","))?;
            }
        }
        Ok(())
    }
}

struct Block<R> {
    rank: usize,
    torsion: Vec<R>,
}

/// Homology at a specialization. Bigraded output requires s and t to vanish.
pub fn homology_at(cx: &ComplexRepr, sp: &Specialization, bigraded: bool) -> Result<HomologyResult> {
    if bigraded && !sp.kills_st() {
        return Err(Error::Unsupported(format!("bigraded homology needs s = t = 0, got {}", sp.label())));
    }
    let groups = match sp {
        Specialization::Integers { s, t } => compute(cx, bigraded, |p: &BivariatePoly| p.eval_int(s, t)),
        Specialization::Mod2 { s, t } => compute(cx, bigraded, |p: &BivariatePoly| p.eval_gf2(Gf2(*s), Gf2(*t))),
        Specialization::Mod2Poly => compute(cx, bigraded, |p: &BivariatePoly| p.to_gf2_poly()),
    }?;
    Ok(HomologyResult { spec: sp.label(), bigraded, groups })
}

/// Bar-Natan homology over ℤ/2[s] with t = 0.
pub fn mod2_bar_natan(cx: &ComplexRepr) -> HomologyResult {
    homology_at(cx, &Specialization::Mod2Poly, false).expect("ungraded")
}

fn compute<R, F>(cx: &ComplexRepr, bigraded: bool, conv: F) -> Result<Vec<Group>>
where
    R: EuclideanRing,
    F: Fn(&BivariatePoly) -> R + Sync,
{
    let n = cx.d.len();
    let spec: Vec<Vec<(usize, usize, R)>> =
        cx.d.par_iter()
            .map(|m| m.triplets().filter_map(|(r, c, p)| Some((r, c, conv(p))).filter(|e| !e.2.is_zero())).collect())
            .collect();

    // the complex splits by j modulo the gcd of the quantum shifts that survive
    let jof: Vec<Vec<i64>> =
        cx.degrees.iter().map(|d| d.gens.iter().map(|g| cx.cube.gradings(g).j).collect()).collect();
    let mut modulus = 0i64;
    for (r, es) in spec.iter().enumerate() {
        for (row, col, _) in es {
            modulus = modulus.gcd(&(jof[r + 1][*row] - jof[r][*col]));
        }
    }
    if bigraded && modulus != 0 {
        return Err(Error::Unsupported("the differential does not preserve the quantum grading".into()));
    }
    let class = |j: i64| if modulus == 0 { j } else { j.rem_euclid(modulus) };

    // generator positions inside each (degree, class) block
    let mut local: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
    let mut sizes: Vec<BTreeMap<i64, usize>> = Vec::with_capacity(n + 1);
    for js in &jof {
        let mut count: BTreeMap<i64, usize> = BTreeMap::new();
        let mut pos = Vec::with_capacity(js.len());
        for &j in js {
            let e = count.entry(class(j)).or_insert(0);
            pos.push(*e);
            *e += 1;
        }
        local.push(pos);
        sizes.push(count);
    }

    // Smith form of each differential block, keyed by (source degree, class)
    let jobs: Vec<(usize, i64)> =
        sizes.iter().take(n).enumerate().flat_map(|(r, m)| m.keys().map(move |&k| (r, k))).collect();
    let snfs: BTreeMap<(usize, i64), Block<R>> = jobs
        .par_iter()
        .map(|&(r, k)| {
            let rows = sizes[r + 1].get(&k).copied().unwrap_or(0);
            let mut m = SparseMatrix::new(rows, sizes[r][&k]);
            for (row, col, v) in &spec[r] {
                if class(jof[r][*col]) == k {
                    m.entries.push((local[r + 1][*row], local[r][*col], v.clone()));
                }
            }
            let sf = smith_normal_form(&m, false);
            ((r, k), Block { rank: sf.rank(), torsion: sf.torsion() })
        })
        .collect();

    let mut per_i: BTreeMap<(i64, Option<i64>), Block<R>> = BTreeMap::new();
    for (r, deg) in cx.degrees.iter().enumerate() {
        for (&k, &dim) in &sizes[r] {
            let out_rank = snfs.get(&(r, k)).map_or(0, |b| b.rank);
            let incoming = if r > 0 { snfs.get(&(r - 1, k)) } else { None };
            let in_rank = incoming.map_or(0, |b| b.rank);
            let torsion = incoming.map_or_else(Vec::new, |b| b.torsion.clone());
            let rank = dim - out_rank - in_rank;
            let key = (deg.i, if bigraded { Some(k) } else { None });
            let e = per_i.entry(key).or_insert(Block { rank: 0, torsion: Vec::new() });
            e.rank += rank;
            e.torsion.extend(torsion);
        }
    }
    Ok(per_i
        .into_iter()
        .map(|((i, j), b)| Group {
            i,
            j,
            rank: b.rank,
            torsion: combine_torsion(b.torsion).iter().map(|t| t.to_string()).collect(),
        })
        .filter(|g| g.rank > 0 || !g.torsion.is_empty())
        .collect())
}
