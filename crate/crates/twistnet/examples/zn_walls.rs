//! Z_N generalization: charge conjugation and multiplier walls, and the
//! Z_3 duality twists.
use twistnet::linalg::fmt_vec;
use twistnet::anyons::build_zn_double;
use twistnet::walls::{charge_conjugation, multiplier, onsite_permutation};
use twistnet::twists::{find_end_vectors, TwistWall};

fn main() -> twistnet::Result<()> {
    let m = build_zn_double(5)?;
    println!("C on Z_5: {}", m.cycles(&onsite_permutation(&m, &charge_conjugation(5))?));
    println!("Q2 on Z_5: {}", m.cycles(&onsite_permutation(&m, &multiplier(5, 2)?)?));
    for t in find_end_vectors(TwistWall::Duality, 3)? {
        println!("Z_3 twist {}: {}", t.species, fmt_vec(&t.vector));
    }
    Ok(())
}
