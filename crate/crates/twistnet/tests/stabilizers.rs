use twistnet::harness::Outcome;
use twistnet::pauli::PauliTerm;
use twistnet::peps::{expectation, toric_site_tensor, PepsNetwork};
use twistnet::stabilizers::*;
use twistnet::twists::TwistWall;

fn show(name: &str, o: &Outcome) {
    println!("{name}: {:?}", o.values);
    assert!(o.passed(), "{name}: {:?}", o.failures);
}

#[test]
fn duality_twist_registry() {
    let o = registry_check(TwistWall::Duality, 1e-9).unwrap();
    assert_eq!(o.values["at_twist"], 2.0);
    show("D", &o);
}

#[test]
fn cx_twist_registry() {
    show("W1", &registry_check(TwistWall::W1Tilde, 1e-9).unwrap());
}

#[test]
fn swap_twist_registry() {
    let o = registry_check(TwistWall::W2, 1e-9).unwrap();
    assert_eq!(o.values["at_twist"], 1.0);
    show("W2", &o);
}

#[test]
fn layered_duality_twist_registry() {
    show("W5", &registry_check(TwistWall::W5, 1e-9).unwrap());
}

#[test]
fn layered_registry_is_toric_on_bottom() {
    show("W5 vs toric", &layered_registry_check().unwrap());
}

#[test]
fn altered_swap_twist_term_anticommutes() {
    show("negative control", &swap_negative_control().unwrap());
}

#[test]
fn at_twist_terms_are_mixed_and_signed() {
    let reg = build_registry(&TwistConfig::standard(TwistWall::Duality).unwrap()).unwrap();
    for t in reg.by_region(Region::AtTwist) {
        let (xs, zs) = t.op.sites().values().fold((0, 0), |(a, b), &(x, z)| (a + (x != 0) as u32, b + (z != 0) as u32));
        assert!(xs > 0 && zs > 0, "{} is not mixed", t.op);
        assert!(t.op.is_hermitian());
    }
    let text = reg.export();
    assert_eq!(text.lines().filter(|l| l.starts_with("at-twist")).count(), 2);
}

#[test]
fn vacuum_registry_on_torus() {
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3).unwrap();
    let reg = standard_registry(&net);
    assert!(verify_commuting(&reg).is_empty());
    let rep = verify_eigenstate(&net, &reg).unwrap();
    assert!(rep.passes(1e-9), "{}", rep.max_dev);
    assert_eq!(count_logical(&reg).unwrap(), 2);
}

#[test]
fn flipped_term_has_eigenvalue_minus_one() {
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3).unwrap();
    let reg = standard_registry(&net);
    let t = &reg.terms[0].op;
    let e = expectation(&net, &t.clone().rephase(4)).unwrap();
    assert!((e.re + 1.0).abs() < 1e-9 && e.im.abs() < 1e-9);
    assert!(PauliTerm::parse(2, &t.to_string()).unwrap() == *t);
}

#[test]
fn color_code_decouples() {
    for l in [2, 4] {
        show(&format!("color {l}"), &color_toric_correspondence(l).unwrap());
    }
    assert!(color_toric_correspondence(3).is_err());
}
