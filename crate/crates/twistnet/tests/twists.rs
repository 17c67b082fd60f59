use twistnet::harness::Outcome;
use twistnet::twists::*;

fn show(name: &str, o: &Outcome) {
    println!("{name}: {:?}", o.values);
    assert!(o.passed(), "{name}: {:?}", o.failures);
}

#[test]
fn charge_definite_ends() {
    show("charge", &twist_charge_check(1e-9).unwrap());
}

#[test]
fn anyon_absorption() {
    show("absorption", &absorption_check(1e-9).unwrap());
}

#[test]
fn twist_fusion() {
    show("fusion", &fusion_check(1e-9).unwrap());
}

#[test]
fn zn_species() {
    show("z3", &zn_twist_check(3, 1e-9).unwrap());
}

#[test]
fn layered_ends_match_toric() {
    let toric = find_end_vectors(TwistWall::Duality, 2).unwrap();
    let lifted = find_end_vectors(TwistWall::W5, 2).unwrap();
    for (a, b) in toric.iter().zip(&lifted) {
        assert_eq!(a.species, b.species);
        let ov: twistnet::C64 = a.vector.iter().zip(&b.vector).map(|(x, y)| x.conj() * y).sum();
        assert!((ov.norm() - 1.0).abs() < 1e-9);
    }
}
