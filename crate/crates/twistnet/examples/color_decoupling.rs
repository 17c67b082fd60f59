//! The 4.8.8 color code decouples into two toric codes under a local
//! circuit on each green square.
use twistnet::pauli::{conjugate_by_circuit, decoupling_circuit, PauliTerm};
use twistnet::stabilizers::color_toric_correspondence;

fn main() -> twistnet::Result<()> {
    let q = ["a", "b", "c", "d"];
    let c = decoupling_circuit(q);
    for (name, p) in [
        ("X on the square", PauliTerm::xs(2, &q)),
        ("Z on the square", PauliTerm::zs(2, &q)),
        ("red X pair", PauliTerm::xs(2, &["a", "b"])),
        ("blue Z pair", PauliTerm::zs(2, &["b", "c"])),
    ] {
        println!("{name:<16} {p} -> {}", conjugate_by_circuit(&c, &p)?);
    }
    let o = color_toric_correspondence(4)?;
    println!("4x4 torus: {:?}", o.values);
    Ok(())
}
