//! Smoothings, enhanced states and their gradings.
//!
//! A marker mask has bit `c` set when crossing `c` carries a negative marker. The positive
//! marker joins slots (0,1) and (2,3); the negative marker joins (0,3) and (1,2).

use rayon::prelude::*;
use serde_json::json;

use crate::diagram::LinkDiagram;

/// Circles of one smoothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSet {
    /// Circle id of every arc.
    pub arc_circle: Vec<usize>,
    /// Circles through crossings come first (ordered by lowest arc), then free circles.
    pub count: usize,
}

impl CircleSet {
    pub fn circle_of_slot(&self, d: &LinkDiagram, crossing: usize, pos: usize) -> usize {
        self.arc_circle[d.arc_at(crossing, pos)]
    }
}

/// Marker assignment plus circle signs; bit `k` of `signs` set means circle `k` is negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    pub markers: u64,
    pub signs: u64,
}

impl EnhancedState {
    pub fn new(markers: u64, signs: u64) -> Self {
        EnhancedState { markers, signs }
    }

    pub fn is_negative(&self, crossing: usize) -> bool {
        self.markers >> crossing & 1 == 1
    }

    pub fn circle_negative(&self, circle: usize) -> bool {
        self.signs >> circle & 1 == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gradings {
    pub sigma: i64,
    pub tau: i64,
    pub i: i64,
    pub j: i64,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Circles obtained by smoothing every crossing according to `markers`.
pub fn smooth(d: &LinkDiagram, markers: u64) -> CircleSet {
    let arcs = d.arc_count();
    let mut parent: Vec<usize> = (0..arcs).collect();
    for c in 0..d.n_crossings() {
        let x = d.slots(c);
        let pairs = if markers >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
        for (u, v) in pairs {
            let (ru, rv) = (find(&mut parent, x[u]), find(&mut parent, x[v]));
            // keep the smaller arc as root so ids follow the lowest arc
            if ru < rv {
                parent[rv] = ru;
            } else if rv < ru {
                parent[ru] = rv;
            }
        }
    }
    let mut id = vec![usize::MAX; arcs];
    let mut count = 0;
    let arc_circle: Vec<usize> = (0..arcs)
        .map(|a| {
            let r = find(&mut parent, a);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            id[r]
        })
        .collect();
    CircleSet { arc_circle, count: count + d.free_circles() }
}

/// All smoothings of a diagram, indexed by marker mask.
#[derive(Clone, Debug)]
pub struct Smoothings {
    sets: Vec<CircleSet>,
}

impl Smoothings {
    pub fn new(d: &LinkDiagram) -> Self {
        let n = d.n_crossings();
        let sets = (0..1u64 << n).into_par_iter().map(|m| smooth(d, m)).collect();
        Smoothings { sets }
    }

    pub fn get(&self, markers: u64) -> &CircleSet {
        &self.sets[markers as usize]
    }

    pub fn circle_count(&self, markers: u64) -> usize {
        self.sets[markers as usize].count
    }
}

/// Marker masks ordered by number of negative markers, then numerically.
pub fn marker_order(n: usize) -> Vec<Vec<u64>> {
    let mut groups = vec![Vec::new(); n + 1];
    for m in 0..1u64 << n {
        groups[m.count_ones() as usize].push(m);
    }
    groups
}

/// Enhanced states grouped by the number of negative markers; within a group markers come
/// in numeric mask order and, for each marker mask, signs in numeric mask order.
pub fn enhanced_states(d: &LinkDiagram, sm: &Smoothings) -> Vec<Vec<EnhancedState>> {
    marker_order(d.n_crossings())
        .into_iter()
        .map(|ms| {
            ms.into_iter()
                .flat_map(|m| (0..1u64 << sm.circle_count(m)).map(move |s| EnhancedState::new(m, s)))
                .collect()
        })
        .collect()
}

/// Homological and quantum degree. `i = r − n₋` and `j = r + n₊ − 2n₋ − τ`, where `r` counts
/// negative markers and `τ` is (#positive − #negative) circles; a positive circle sits in
/// quantum degree −1.
pub fn gradings(d: &LinkDiagram, s: &EnhancedState, circles: usize) -> Gradings {
    let n = d.n_crossings() as i64;
    let r = s.markers.count_ones() as i64;
    let neg = s.signs.count_ones() as i64;
    let tau = circles as i64 - 2 * neg;
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    Gradings { sigma: n - 2 * r, tau, i: r - nm, j: r + np - 2 * nm - tau }
}

pub fn state_json(d: &LinkDiagram, s: &EnhancedState, circles: usize) -> serde_json::Value {
    let g = gradings(d, s, circles);
    let markers: String = (0..d.n_crossings()).map(|c| if s.is_negative(c) { '-' } else { '+' }).collect();
    let signs: String = (0..circles).map(|k| if s.circle_negative(k) { '-' } else { '+' }).collect();
    json!({"markers": markers, "signs": signs, "i": g.i, "j": g.j})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn kink_smoothings() {
        let d = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(smooth(&d, 0).count, 2);
        assert_eq!(smooth(&d, 1).count, 1);
        let sm = Smoothings::new(&d);
        let total: usize = enhanced_states(&d, &sm).iter().map(Vec::len).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn free_circles_count() {
        let d = parse_pd("O O").unwrap();
        let sm = Smoothings::new(&d);
        assert_eq!(enhanced_states(&d, &sm)[0].len(), 4);
        let g = gradings(&d, &EnhancedState::new(0, 0), 2);
        assert_eq!((g.i, g.j), (0, -2));
    }

    #[test]
    fn trefoil_all_positive() {
        let d = parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        // hand trace: the A-smoothing of this diagram gives two circles
        assert_eq!(smooth(&d, 0).count, 2);
        assert_eq!(smooth(&d, 0b111).count, 3);
        assert_eq!(gradings(&d, &EnhancedState::new(0, 0), 2).i, 0);
    }
}
