use twistnet::linalg::Mat;
use twistnet::pauli::PauliTerm;
use twistnet::peps::*;
use twistnet::stabilizers::{standard_registry, verify_eigenstate};

fn all_ones(net: &PepsNetwork) {
    let reg = standard_registry(net);
    let rep = verify_eigenstate(net, &reg).unwrap();
    assert!(rep.passes(1e-9), "{:?} {}x{}: max deviation {}", net.site.kind, net.lx, net.ly, rep.max_dev);
}

#[test]
fn vacuum_stabilizers_toric_and_z3() {
    for l in [2, 3] {
        all_ones(&PepsNetwork::torus(toric_site_tensor(), l, l).unwrap());
        all_ones(&PepsNetwork::torus(zn_site_tensor(3).unwrap(), l, l).unwrap());
    }
    all_ones(&PepsNetwork::assemble(toric_site_tensor(), 3, 2, Boundary::Open).unwrap());
}

#[test]
fn vacuum_stabilizers_color() {
    for l in [2, 3] {
        all_ones(&PepsNetwork::torus(color_site_tensor(), l, l).unwrap());
    }
}

#[test]
fn identity_observable() {
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3).unwrap();
    let e = expectation(&net, &PauliTerm::identity(2)).unwrap();
    assert!((e - 1.0).norm() < 1e-12);
}

#[test]
fn e_pair_flags_its_endpoints() {
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3).unwrap();
    let vac = net.clone();
    let net = net.insert_e(&[Bond::H(0, 0), Bond::V(2, 1)], None).unwrap();
    let reg = standard_registry(&net);
    for t in &reg.terms {
        let e = expectation(&net, &t.op).unwrap();
        let want = if t.name == "starH(0, 0)" || t.name == "starV(2, 1)" { -1.0 } else { 1.0 };
        assert!((e - want).norm() < 1e-9, "{}: {e}", t.name);
    }
    assert!(normalized_overlap(&vac, &net).unwrap().norm() < 1e-12);
}

#[test]
fn m_strings_are_homotopy_invariant() {
    for n in [2u32, 3] {
        let base = PepsNetwork::torus(zn_site_tensor(n).unwrap(), 3, 3).unwrap();
        // two ways around site (1,1)
        let a = base.clone().insert_m(&[(Bond::H(0, 1), -1), (Bond::V(1, 1), 1)], None).unwrap();
        let b = base.clone().insert_m(&[(Bond::H(1, 1), -1), (Bond::V(1, 0), 1)], None).unwrap();
        let c = normalized_overlap(&a, &b).unwrap();
        assert!((c - 1.0).norm() < 1e-9, "N={n}: {c}");
        // longer detour around sites (1,1) and (2,1)
        let d = base
            .clone()
            .insert_m(&[(Bond::H(0, 1), -1), (Bond::V(1, 1), 1), (Bond::V(2, 1), 1), (Bond::H(2, 1), 1)], None)
            .unwrap();
        let e = base
            .clone()
            .insert_m(&[(Bond::V(1, 0), 1), (Bond::V(2, 0), 1)], None)
            .unwrap();
        let de = normalized_overlap(&d, &e).unwrap();
        assert!((de - 1.0).norm() < 1e-9, "N={n} detour: {de}");
        let vac = normalized_overlap(&a, &base).unwrap();
        assert!(vac.norm() < 1e-9);
    }
}

#[test]
fn contractible_z_loop_is_removable() {
    let base = PepsNetwork::torus(toric_site_tensor(), 2, 2).unwrap();
    let looped = base
        .clone()
        .insert_m(&[(Bond::H(0, 1), 1), (Bond::V(1, 1), 1), (Bond::H(1, 1), 1), (Bond::V(1, 0), 1)], None)
        .unwrap();
    let sv = state_vector(&looped).unwrap();
    let s0 = state_vector(&base).unwrap();
    let diff: f64 = sv.iter().zip(&s0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-12);
}

#[test]
fn single_e_lives_on_an_absorbing_patch() {
    let net = PepsNetwork::assemble(toric_site_tensor(), 3, 2, Boundary::Absorbing).unwrap();
    let one = net.clone().insert_e(&[Bond::H(0, 0)], None).unwrap();
    assert!(norm_sqr(&one).unwrap() > 0.5);
    let star = standard_registry(&one).terms.into_iter().find(|t| t.name == "starH(0, 0)").unwrap();
    assert!((expectation(&one, &star.op).unwrap() + 1.0).norm() < 1e-9);
}

fn loop_states(n: u32, l: usize) -> Vec<PepsNetwork> {
    let base = PepsNetwork::torus(zn_site_tensor(n).unwrap(), l, l).unwrap();
    let mut out = vec![];
    for a in 0..n as i32 {
        for b in 0..n as i32 {
            let mut path: Vec<(Bond, i32)> = (0..l).map(|x| (Bond::V(x, 0), a)).collect();
            path.extend((0..l).map(|y| (Bond::H(0, y), b)));
            out.push(base.clone().insert_m(&path, None).unwrap());
        }
    }
    out
}

#[test]
fn loop_states_span_the_ground_space() {
    for (n, l) in [(2u32, 3usize), (3, 2)] {
        let states = loop_states(n, l);
        let k = states.len();
        let mut g = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g.set(i, j, normalized_overlap(&states[i], &states[j]).unwrap());
            }
        }
        assert_eq!(g.rank(1e-8), k, "N={n}");
        let reg = standard_registry(&states[k - 1]);
        assert!(verify_eigenstate(&states[k - 1], &reg).unwrap().passes(1e-9));
    }
}
