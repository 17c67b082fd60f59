//! Build a network from a description file and measure on it.
use twistnet::netfile::NetworkDescription;
use twistnet::pauli::PauliTerm;
use twistnet::peps::{expectation, qubit};

const TEXT: &str = "
model toric
size 3 3
boundary torus
insert H(0,1) X1   # e pair ends
insert H(1,1) X1
";

fn main() -> twistnet::Result<()> {
    let desc = NetworkDescription::parse(TEXT)?;
    let net = desc.build()?;
    print!("{}", desc.to_text());
    let star = PauliTerm::zs(2, &[qubit(1, 1, 0), qubit(1, 1, 3), qubit(0, 1, 1), qubit(0, 1, 2)]);
    println!("{star}: {:+.3}", expectation(&net, &star)?.re);
    Ok(())
}
