//! The exact stabilizer group must agree with the contraction engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistnet::peps::*;
use twistnet::stabilizers::standard_registry;
use twistnet::tableau::{network_group, SPauli};
use twistnet::walls::{catalog_wall, duality_wall, rect_loop, CatalogWall};
use twistnet::C64;

fn agree(net: &PepsNetwork, seed: u64) {
    let g = network_group(net).unwrap();
    for t in standard_registry(net).terms {
        let s = g.sign_of(&t.op).unwrap();
        let e = expectation(net, &t.op).unwrap();
        let want = s.map_or(0.0, |v| v as f64);
        assert!((e - want).norm() < 1e-9, "{}: group {s:?} engine {e}", t.name);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..12 {
        // random element of the group, sometimes spoiled by one extra Pauli
        let mut p = SPauli::identity(g.qubits.len());
        for gen in &g.gens {
            if rng.gen_bool(0.5) {
                p = p.mul(gen);
            }
        }
        if rng.gen_bool(0.3) {
            let q = rng.gen_range(0..g.qubits.len());
            p.z[q] ^= true;
        }
        let term = p.to_term(&g.qubits);
        let s = g.sign_of(&term).unwrap();
        let e = expectation(net, &term).unwrap();
        let want = s.map_or(C64::new(0.0, 0.0), |v| C64::new(v as f64, 0.0));
        assert!((e - want).norm() < 1e-9, "{term}: group {s:?} engine {e}");
    }
}

#[test]
fn vacuum_groups_match_contraction() {
    agree(&PepsNetwork::torus(toric_site_tensor(), 3, 3).unwrap(), 1);
    agree(&PepsNetwork::assemble(toric_site_tensor(), 4, 2, Boundary::Absorbing).unwrap(), 2);
    agree(&PepsNetwork::torus(color_site_tensor(), 2, 2).unwrap(), 3);
}

#[test]
fn wall_groups_match_contraction() {
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3).unwrap();
    let path = rect_loop(3, 3, 0, 0, 2, 2);
    let d = duality_wall(path.len(), Closure::Periodic).unwrap();
    agree(&d.apply(net.clone().insert_e(&[Bond::H(0, 0), Bond::V(1, 0)], None).unwrap(), &path).unwrap(), 4);
    let color = PepsNetwork::torus(color_site_tensor(), 2, 2).unwrap();
    let path = rect_loop(2, 2, 0, 0, 1, 1);
    let w = catalog_wall(&CatalogWall::W2, path.len(), Closure::Periodic).unwrap();
    agree(&w.apply(color, &path).unwrap(), 5);
}

#[test]
fn twisted_group_matches_contraction() {
    let s = 1.0 / 2f64.sqrt();
    let plus_i = vec![C64::new(s, 0.0), C64::new(0.0, s)];
    let net = PepsNetwork::assemble(toric_site_tensor(), 4, 2, Boundary::Absorbing).unwrap();
    let path = vec![(Bond::V(1, 0), true), (Bond::V(2, 0), true)];
    let d = duality_wall(2, Closure::Ends(plus_i.clone(), plus_i)).unwrap();
    agree(&d.apply(net, &path).unwrap(), 6);
}
