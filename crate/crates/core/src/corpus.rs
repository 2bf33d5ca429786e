//! Built-in diagrams.

use crate::diagram::{parse_pd, LinkDiagram};

pub struct Entry {
    pub name: &'static str,
    pub pd: &'static str,
}

pub const CORPUS: &[Entry] = &[
    Entry { name: "unknot", pd: "O" },
    Entry { name: "unlink2", pd: "O O" },
    Entry { name: "unlink3", pd: "O O O" },
    Entry { name: "kink+", pd: "X(1,1,2,2)" },
    Entry { name: "kink-", pd: "X(1,2,2,1)" },
    Entry { name: "hopf+", pd: "X(4,2,3,1) X(2,4,1,3)" },
    Entry { name: "hopf-", pd: "X(4,1,3,2) X(2,3,1,4)" },
    Entry { name: "trefoil-right", pd: "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)" },
    Entry { name: "trefoil-left", pd: "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)" },
    Entry { name: "figure8", pd: "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)" },
    Entry { name: "5_1", pd: "X(1,6,2,7) X(3,8,4,9) X(5,10,6,1) X(7,2,8,3) X(9,4,10,5)" },
    Entry { name: "5_2", pd: "X(1,4,2,5) X(3,8,4,9) X(5,10,6,1) X(9,6,10,7) X(7,2,8,3)" },
    Entry { name: "r3-ready", pd: "X(12,6,9,5) X(8,10,1,9) X(4,12,5,11) X(1,10,2,11) X(3,6,4,7) X(2,8,3,7)" },
];

pub fn get(name: &str) -> Option<LinkDiagram> {
    CORPUS.iter().find(|e| e.name == name).map(|e| parse_pd(e.pd).expect("corpus diagram"))
}

pub fn all() -> Vec<(&'static str, LinkDiagram)> {
    CORPUS.iter().map(|e| (e.name, parse_pd(e.pd).expect("corpus diagram"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses() {
        let want = [
            ("unknot", 0, 1, 0),
            ("unlink3", 0, 3, 0),
            ("kink+", 1, 1, 1),
            ("kink-", 1, 1, -1),
            ("hopf+", 2, 2, 2),
            ("hopf-", 2, 2, -2),
            ("trefoil-right", 3, 1, 3),
            ("trefoil-left", 3, 1, -3),
            ("figure8", 4, 1, 0),
            ("5_1", 5, 1, -5),
            ("5_2", 5, 1, -5),
        ];
        for (name, n, comps, w) in want {
            let d = get(name).unwrap();
            assert_eq!((d.n_crossings(), d.component_count(), d.writhe()), (n, comps, w), "{name}");
        }
        assert_eq!(all().len(), CORPUS.len());
    }
}
