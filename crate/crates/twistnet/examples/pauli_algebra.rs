//! Z_N Pauli products in the text grammar, and Clifford conjugation.
use twistnet::pauli::{conjugate_by_circuit, duality_circuit, PauliTerm};

fn main() -> twistnet::Result<()> {
    let a = PauliTerm::parse(3, "X1@q0 Z2@q1")?;
    let b = PauliTerm::parse(3, "Z1@q0")?;
    println!("a = {a}\nb = {b}\na·b = {}\nb·a = {}", a.mul(&b)?, b.mul(&a)?);
    println!("a and b commute: {}", a.commutes(&b));

    let q: Vec<String> = (1..=4).map(|k| format!("q{k}")).collect();
    let c = duality_circuit(&q);
    for t in ["X1@q3", "Z1@q2"] {
        let p = PauliTerm::parse(2, t)?;
        println!("duality circuit: {p} -> {}", conjugate_by_circuit(&c, &p)?);
    }
    Ok(())
}
