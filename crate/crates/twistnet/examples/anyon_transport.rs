//! Anyons pushed through domain walls: e becomes m across the duality
//! wall, e_T becomes e_B across W2.
use twistnet::walls::{duality_transport_check, swap_transport_check};

fn main() -> twistnet::Result<()> {
    for (name, o) in [("duality", duality_transport_check(1e-9)?), ("swap", swap_transport_check(1e-9)?)] {
        println!("{name}: {}", if o.passed() { "ok" } else { "FAILED" });
        for (k, v) in &o.values {
            println!("  {k:<34} {v:.6}");
        }
    }
    Ok(())
}
