use twistnet::harness::Outcome;
use twistnet::walls::*;

fn show(name: &str, o: &Outcome) {
    println!("{name}: {:?}", o.values);
    assert!(o.passed(), "{name}: {:?}", o.failures);
}

#[test]
fn merge_identity() {
    show("merge", &merge_identity_check(1e-10).unwrap());
}

#[test]
fn bubble_deformation() {
    show("bubble", &bubble_deformation_check(1e-9).unwrap());
}

#[test]
fn spt_structure() {
    show("spt", &spt_structure_check(1e-10).unwrap());
}

#[test]
fn duality_transport() {
    show("transport", &duality_transport_check(1e-9).unwrap());
}

#[test]
fn swap_transport() {
    show("w2", &swap_transport_check(1e-9).unwrap());
}

#[test]
fn zn_walls() {
    show("zn", &zn_wall_check(1e-9).unwrap());
}

#[test]
fn catalog_permutations() {
    show("catalog", &catalog_permutation_check(1e-9).unwrap());
}
