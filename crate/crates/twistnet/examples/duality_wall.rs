//! The Kramers-Wannier duality wall as an MPO: circuit form and the
//! parity projector.
use twistnet::linalg::Mat;
use twistnet::pauli::{duality_circuit, z_mat};
use twistnet::peps::Closure;
use twistnet::walls::{duality_wall, open_ends};

fn main() -> twistnet::Result<()> {
    for n in 2..=6 {
        let d = duality_wall(n, open_ends(2))?.operator()?;
        let sites: Vec<String> = (1..=n).map(|k| format!("q{k}")).collect();
        let c = duality_circuit(&sites).matrix_on(&sites)?;
        let p = duality_wall(n, Closure::Periodic)?.operator()?;
        let zs = (1..n).fold(z_mat(2), |a, _| a.kron(&z_mat(2)));
        let proj = (&p.dag() * &p).max_abs_diff(&(&Mat::eye(1 << n) + &zs));
        println!("n={n}: |D_open - circuit| = {:.1e}, |D†D - (1 + Z..Z)| = {proj:.1e}", d.max_abs_diff(&c));
    }
    Ok(())
}
