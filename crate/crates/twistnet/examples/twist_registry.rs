//! Stabilizer registry of a twisted toric-code patch, its export, and the
//! sign flip on the mismatched species.
use twistnet::peps::expectations;
use twistnet::stabilizers::{build_registry, verify_commuting, verify_eigenstate, Region, TwistConfig};
use twistnet::twists::TwistWall;

fn main() -> twistnet::Result<()> {
    let cfg = TwistConfig::standard(TwistWall::Duality)?;
    let reg = build_registry(&cfg)?;
    let net = cfg.network()?;
    println!("{} terms, {} anticommuting pairs", reg.terms.len(), verify_commuting(&reg).len());
    println!("max deviation from +1: {:.1e}", verify_eigenstate(&net, &reg)?.max_dev);
    for line in reg.export().lines().filter(|l| !l.starts_with("bulk")) {
        println!("  {line}");
    }
    let at: Vec<_> = reg.by_region(Region::AtTwist).map(|t| t.op.clone()).collect();
    let other = cfg.clone().with_species("σ−", "σ−");
    for (t, v) in at.iter().zip(expectations(&other.network()?, &at)?) {
        println!("on σ−σ−: {t} -> {:+.3}", v.re);
    }
    Ok(())
}
