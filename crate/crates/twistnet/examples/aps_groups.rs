//! Anyon-permuting symmetry groups of the toric code, the color code and
//! Z_p quantum doubles.
use twistnet::anyons::{build_color_code, build_toric, build_zn_double, Generator};

fn main() -> twistnet::Result<()> {
    let toric = build_toric();
    for p in toric.enumerate_aps()? {
        println!("toric: {}", toric.cycles(&p));
    }
    let color = build_color_code();
    println!("color code: {} symmetries", color.enumerate_aps()?.len());
    for g in ["W1", "W1t", "W2", "W5"] {
        println!("  {g}: {}", color.cycles(&Generator::parse(g)?.permutation(&color)?));
    }
    for p in [3, 5, 7] {
        println!("Z_{p}: {} symmetries", build_zn_double(p)?.enumerate_aps()?.len());
    }
    Ok(())
}
