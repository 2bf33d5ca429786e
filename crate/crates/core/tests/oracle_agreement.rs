mod oracle;

use khoveq::complex::build_complex;
use khoveq::corpus;
use khoveq::frobenius::FrobeniusCalculus;
use khoveq::homology::homology_at;
use khoveq::polyring::Specialization;

fn engine(name: &str) -> oracle::Table {
    let d = corpus::get(name).unwrap();
    let cx = build_complex(&d, &FrobeniusCalculus::universal()).unwrap();
    let h = homology_at(&cx, &Specialization::khovanov(), true).unwrap();
    h.groups
        .iter()
        .map(|g| (g.i, g.j.unwrap(), g.rank, g.torsion.iter().map(|t| t.parse().unwrap()).collect()))
        .collect()
}

#[test]
fn bigraded_homology_matches_brute_force() {
    for e in corpus::CORPUS {
        assert_eq!(engine(e.name), oracle::khovanov(e.pd), "{}", e.name);
    }
}

#[test]
fn right_trefoil_table() {
    let want: oracle::Table =
        vec![(0, 1, 1, vec![]), (0, 3, 1, vec![]), (2, 5, 1, vec![]), (3, 7, 0, vec![2]), (3, 9, 1, vec![])];
    let pd = corpus::CORPUS.iter().find(|e| e.name == "trefoil-right").unwrap().pd;
    println!("{:?}", oracle::khovanov(pd));
    assert_eq!(oracle::khovanov(pd), want);
}
