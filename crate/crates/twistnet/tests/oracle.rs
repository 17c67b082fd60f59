//! Brute-force state vectors compared against the transfer contraction.

mod common;

use common::*;
use twistnet::pauli::PauliTerm;
use twistnet::peps::{expectation, state_vector, Bond, PepsNetwork};
use twistnet::stabilizers::standard_registry;

fn compare(net: &PepsNetwork, ins: &Inserts, terms: &[PauliTerm]) {
    let psi = oracle_state(ins);
    let engine = state_vector(net).unwrap();
    let diff: f64 = psi.iter().zip(&engine).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-9, "state vectors differ by {diff}");
    for t in terms {
        let want = oracle_expectation(&psi, t);
        let got = expectation(net, t).unwrap();
        assert!((want - got).norm() < 1e-9, "{t}: oracle {want} engine {got}");
    }
}

#[test]
fn vacuum_matches_oracle() {
    let net = torus();
    let mut terms: Vec<PauliTerm> = standard_registry(&net).ops();
    terms.extend(random_terms(7, 40));
    compare(&net, &Inserts::default(), &terms);
    let psi = oracle_state(&Inserts::default());
    for t in standard_registry(&net).ops() {
        assert!((oracle_expectation(&psi, &t) - 1.0).norm() < 1e-12, "{t}");
    }
}

#[test]
fn e_pair_matches_oracle() {
    // X on the low-side legs of H(0,0) and H(0,1): site (0,y) leg r
    let net = torus().insert_e(&[Bond::H(0, 0), Bond::H(0, 1)], None).unwrap();
    let ins = Inserts { flip: vec![(site_index(0, 0), 2), (site_index(0, 1), 2)], sign: vec![] };
    let mut terms: Vec<PauliTerm> = standard_registry(&net).ops();
    terms.extend(random_terms(11, 30));
    compare(&net, &ins, &terms);
    let psi = oracle_state(&ins);
    let star = standard_registry(&net).terms.into_iter().find(|t| t.name == "starH(0, 0)").unwrap();
    assert!((oracle_expectation(&psi, &star.op) + 1.0).norm() < 1e-12);
}

#[test]
fn m_pair_matches_oracle() {
    let net = torus().insert_m(&[(Bond::V(0, 0), 1), (Bond::V(1, 0), 1)], None).unwrap();
    let ins = Inserts { flip: vec![], sign: vec![(site_index(0, 0), 1), (site_index(1, 0), 1)] };
    compare(&net, &ins, &random_terms(13, 30));
}

#[test]
fn single_e_on_closed_torus_vanishes() {
    // every site tensor is parity-even on its legs, so one flipped bond
    // has no consistent configuration
    let ins = Inserts { flip: vec![(site_index(1, 1), 1)], sign: vec![] };
    assert!(oracle_state(&ins).iter().all(|a| a.norm() == 0.0));
    let net = torus().insert_e(&[Bond::V(1, 1)], None).unwrap();
    assert!(state_vector(&net).unwrap().iter().all(|a| a.norm() < 1e-12));
    assert!(matches!(twistnet::peps::norm_sqr(&net), Ok(v) if v.abs() < 1e-12));
}
