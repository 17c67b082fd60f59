//! Toric-code PEPS on a torus: stabilizers, an e pair and an m string.
use twistnet::pauli::PauliTerm;
use twistnet::peps::{expectation, qubit, toric_site_tensor, Bond, PepsNetwork};
use twistnet::stabilizers::{standard_registry, verify_eigenstate};

fn main() -> twistnet::Result<()> {
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3)?;
    let reg = standard_registry(&net);
    let rep = verify_eigenstate(&net, &reg)?;
    println!("{} standard terms, largest deviation from +1: {:.2e}", reg.terms.len(), rep.max_dev);

    let pair = net.clone().insert_e(&[Bond::H(0, 1), Bond::H(1, 1)], None)?;
    let rep = verify_eigenstate(&pair, &reg)?;
    for (name, re, _) in rep.values.iter().filter(|v| v.1 < 0.5) {
        println!("e pair flips {name}: {re:+.3}");
    }
    let z = PauliTerm::zs(2, &[qubit(1, 1, 0), qubit(1, 1, 1)]);
    println!("<Z Z> on the vacuum: {:.3}", expectation(&net, &z)?.re);
    Ok(())
}
