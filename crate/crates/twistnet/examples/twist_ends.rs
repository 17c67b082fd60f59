//! Ends of an open duality wall: the measured end algebra, the two
//! charge-definite species and their charge-loop eigenvalues.
use twistnet::linalg::{fmt_c, fmt_vec};
use twistnet::twists::{charge_loop, corner_block, double_braid_check, end_algebra, end_setup, find_end_vectors, TwistWall};

fn main() -> twistnet::Result<()> {
    let alg = end_algebra(TwistWall::Duality, 2)?;
    println!("e on the end:\n{}m on the end:\n{}", alg.e_op, alg.m_op);
    let ends = find_end_vectors(TwistWall::Duality, 2)?;
    for t in &ends {
        println!("{}: {}", t.species, fmt_vec(&t.vector));
    }
    let (net, line) = end_setup(TwistWall::Duality, 2)?;
    let (p, m) = (&ends[0].vector, &ends[1].vector);
    let plus = line.insert(&net, TwistWall::Duality, p, p)?;
    let minus = line.insert(&net, TwistWall::Duality, m, p)?;
    let lp = charge_loop(&plus, &minus, &corner_block(&net, line.corners[0]))?;
    println!("charge loop: {lp}");
    println!("λ(σ+) = {}, λ(σ−) = {}", fmt_c(double_braid_check(&plus, &lp)?), fmt_c(double_braid_check(&minus, &lp)?));
    Ok(())
}
