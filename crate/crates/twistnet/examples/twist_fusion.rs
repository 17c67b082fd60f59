//! Fusion channels of duality twists, for qubits and Z_3.
use twistnet::twists::{find_end_vectors, fuse_twists, twist_dimension, TwistWall};

fn main() -> twistnet::Result<()> {
    let ends = find_end_vectors(TwistWall::Duality, 2)?;
    for b in &ends {
        let w = fuse_twists(2, &ends[0], b, 3, true, false)?;
        let ch: Vec<String> = w.channels.iter().map(|(n, p)| format!("{n} ({p:.3})")).collect();
        println!("{} × {} = {}   d = {:.4}", ends[0].species, b.species, ch.join(" + "), twist_dimension(&w));
        let (link, ends, _) = w.bell_form()?;
        print!("  link in the Bell basis:\n{link}");
        for e in ends {
            print!("  end operator:\n{e}");
        }
    }
    let z3 = find_end_vectors(TwistWall::Duality, 3)?;
    let w = fuse_twists(3, &z3[0], &z3[0], 2, true, false)?;
    let ch: Vec<&str> = w.channels.iter().map(|c| c.0.as_str()).collect();
    println!("Z_3: {} × {} = {}", z3[0].species, z3[0].species, ch.join(" + "));
    Ok(())
}
