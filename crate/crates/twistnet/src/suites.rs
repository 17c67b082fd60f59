//! Named checks, suites and the report written by the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

use crate::anyons::{build_color_code, build_toric, build_zn_double, compose, modular_inverse, order, Generator};
use crate::error::{Error, Result};
use crate::harness::Outcome;
use crate::linalg::Mat;
use crate::pauli::{conjugate_by_circuit, duality_circuit, z_mat, PauliTerm};
use crate::peps::{color_site_tensor, toric_site_tensor, zn_site_tensor, Closure, PepsNetwork};
use crate::stabilizers::{
    color_toric_correspondence, count_logical, layered_registry_check, registry_check, standard_registry,
    swap_negative_control, verify_commuting, verify_eigenstate,
};
use crate::tensor::Tensor;
use crate::twists::{absorption_check, fusion_pair_check, twist_charge_check, zn_twist_check, TwistWall};
use crate::walls::{
    bubble_deformation_check, catalog_permutation_check, duality_transport_check, duality_wall, merge_identity_check,
    open_ends, spt_structure_check, swap_transport_check, zn_wall_check,
};
use crate::C64;

pub const SUITES: [&str; 8] = ["anyons", "peps", "walls", "twists", "stabilizers", "zn", "colorcode", "all"];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: String,
    pub tol: f64,
    pub seed: u64,
    /// chain length for the wall identities; defaults cover 2..=8
    pub n: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { suite: "all".into(), tol: 1e-9, seed: 7, n: None }
    }
}

pub struct Check {
    pub name: &'static str,
    pub suites: &'static [&'static str],
    /// the statement being checked
    pub claim: &'static str,
    pub sizes: &'static str,
    pub run: fn(&SuiteConfig) -> Result<Outcome>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub values: BTreeMap<String, f64>,
    pub failures: Vec<String>,
    pub skip_reason: Option<String>,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub tol: f64,
    pub seed: u64,
    pub checks: Vec<Record>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.checks {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            s += &format!("{tag} {:<28} {:>7} ms", r.name, r.runtime_ms);
            if let Some(why) = &r.skip_reason {
                s += &format!("  ({why})");
            }
            s += "\n";
            for f in &r.failures {
                s += &format!("     {f}\n");
            }
        }
        s += &format!("{}: {} passed, {} failed, {} skipped\n", self.suite, self.passed, self.failed, self.skipped);
        s
    }
}

fn aps_orders(_: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    o.close("toric", build_toric().enumerate_aps()?.len() as f64, 2.0, 0.0);
    o.close("color", build_color_code().enumerate_aps()?.len() as f64, 72.0, 0.0);
    for p in [3u32, 5, 7] {
        let g = build_zn_double(p)?.enumerate_aps()?;
        o.close(&format!("z{p}"), g.len() as f64, 2.0 * (p - 1) as f64, 0.0);
        o.require(g.iter().all(|a| g.iter().all(|b| g.contains(&compose(a, b)))), &format!("Z_{p} group is closed"));
    }
    Ok(o)
}

fn aps_catalog(_: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    let c = build_color_code();
    for g in ["W1", "W1t", "W2", "W5"] {
        o.require(c.is_aps(&Generator::parse(g)?.permutation(&c)?), &format!("{g} preserves S and T"));
    }
    let w1 = Generator::W1.permutation(&c)?;
    let w1t = Generator::W1Tilde.permutation(&c)?;
    let w2 = Generator::W2.permutation(&c)?;
    o.close("order.W1", order(&w1) as f64, 3.0, 0.0);
    o.close("order.W1t", order(&w1t) as f64, 2.0, 0.0);
    o.require(compose(&w2, &w1) == w1t, "W2 W1 = W1t");
    for p in [3u32, 5, 7] {
        let m = build_zn_double(p)?;
        let d = Generator::D.permutation(&m)?;
        for n in 1..p {
            let q = Generator::Qn(n).permutation(&m)?;
            let qi = Generator::Qn(modular_inverse(n, p).unwrap_or(0)).permutation(&m)?;
            o.require(compose(&d, &compose(&q, &d)) == qi, &format!("D Q{n} D = Q{n}^-1 for p = {p}"));
        }
    }
    Ok(o)
}

fn site_invariants(_: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    for (key, s, rank) in [("toric", toric_site_tensor(), 8.0), ("z3", zn_site_tensor(3)?, 27.0), ("color", color_site_tensor(), 64.0)] {
        let mut dev: f64 = 0.0;
        for g in s.symmetry_generators() {
            dev = dev.max(s.act_virtual(&g)?.sub(&s.tensor)?.norm());
        }
        o.close(&format!("{key}.symmetry_dev"), dev, 0.0, 1e-12);
        o.close(&format!("{key}.injectivity_rank"), s.injectivity_rank()? as f64, rank, 0.0);
    }
    Ok(o)
}

fn vacuum_stabilizers(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    for l in [2, 3] {
        for (key, s) in [("toric", toric_site_tensor()), ("z3", zn_site_tensor(3)?), ("color", color_site_tensor())] {
            let net = PepsNetwork::torus(s, l, l)?;
            let rep = verify_eigenstate(&net, &standard_registry(&net))?;
            o.close(&format!("{key}.{l}x{l}.max_dev"), rep.max_dev, 0.0, cfg.tol);
        }
    }
    Ok(o)
}

fn random_tensor(rng: &mut ChaCha8Rng, labels: Vec<&str>, shape: Vec<usize>) -> Result<Tensor> {
    let len: usize = shape.iter().product();
    let data: Vec<C64> = (0..len).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Tensor::new(labels, shape, data)
}

fn contraction_associativity(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (i, j, k, l) = (rng.gen_range(1..5), rng.gen_range(1..5), rng.gen_range(1..5), rng.gen_range(1..5));
        let a = random_tensor(&mut rng, vec!["i", "j"], vec![i, j])?;
        let b = random_tensor(&mut rng, vec!["j", "k"], vec![j, k])?;
        let c = random_tensor(&mut rng, vec!["k", "l"], vec![k, l])?;
        let left = a.contract(&b, &[("j", "j")])?.contract(&c, &[("k", "k")])?;
        let right = a.contract(&b.contract(&c, &[("k", "k")])?, &[("j", "j")])?;
        worst = worst.max(left.sub(&right.permute(&["i", "l"])?)?.norm());
    }
    o.close("max_dev", worst, 0.0, cfg.tol);
    Ok(o)
}

fn lengths(cfg: &SuiteConfig, lo: usize, hi: usize) -> Vec<usize> {
    match cfg.n {
        Some(n) => vec![n],
        None => (lo..=hi).collect(),
    }
}

fn duality_circuit_check(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    for n in lengths(cfg, 2, 6) {
        let d = duality_wall(n, open_ends(2))?.operator()?;
        let sites: Vec<String> = (1..=n).map(|k| format!("q{k}")).collect();
        let c = duality_circuit(&sites).matrix_on(&sites)?;
        o.close(&format!("n{n}.dev"), d.max_abs_diff(&c), 0.0, cfg.tol.min(1e-10));
    }
    let q: Vec<String> = (1..=3).map(|k| format!("q{k}")).collect();
    let c = duality_circuit(&q);
    o.require(conjugate_by_circuit(&c, &PauliTerm::x(2, "q2"))? == PauliTerm::zs(2, &["q1", "q2"]), "X2 -> Z1 Z2");
    o.require(conjugate_by_circuit(&c, &PauliTerm::z(2, "q2"))? == PauliTerm::xs(2, &["q2", "q3"]), "Z2 -> X2 X3");
    Ok(o)
}

fn projector_identity(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    for n in lengths(cfg, 2, 8) {
        let d = duality_wall(n, Closure::Periodic)?.operator()?;
        let zs = (1..n).fold(z_mat(2), |a, _| a.kron(&z_mat(2)));
        let want = &Mat::eye(1 << n) + &zs;
        o.close(&format!("n{n}.dev"), (&d.dag() * &d).max_abs_diff(&want), 0.0, cfg.tol.min(1e-10));
    }
    Ok(o)
}

fn zn_logical(_: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    let net = PepsNetwork::torus(zn_site_tensor(3)?, 2, 2)?;
    o.close("z3.2x2.logical", count_logical(&standard_registry(&net))? as f64, 2.0, 0.0);
    Ok(o)
}

fn vacuum_registry(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::new();
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3)?;
    let reg = standard_registry(&net);
    o.close("anticommuting_pairs", verify_commuting(&reg).len() as f64, 0.0, 0.0);
    o.close("max_dev", verify_eigenstate(&net, &reg)?.max_dev, 0.0, cfg.tol);
    o.close("logical", count_logical(&reg)? as f64, 2.0, 0.0);
    let fewer = reg.without("site(0,0)").without("starH(0, 0)").without("site(1,1)");
    o.close("logical_after_removal", count_logical(&fewer)? as f64, 3.0, 0.0);
    Ok(o)
}

pub static CHECKS: &[Check] = &[
    Check {
        name: "aps-orders",
        suites: &["anyons", "zn", "colorcode"],
        claim: "The only APS of the toric code is a Z2 symmetry; the color-code symmetry group has 72 elements; for prime p the Z_p double has APS group Dih_{p-1}.",
        sizes: "toric, color code, Z_p doubles for p = 3, 5, 7",
        run: aps_orders,
    },
    Check {
        name: "aps-catalog",
        suites: &["anyons", "zn", "colorcode"],
        claim: "The catalogued walls are anyon-permuting symmetries: W1 has order 3, W1t order 2, W2 W1 = W1t, and D Q_n D = Q_{n^-1}.",
        sizes: "color code; Z_p for p = 3, 5, 7",
        run: aps_catalog,
    },
    Check {
        name: "site-invariants",
        suites: &["peps", "zn", "colorcode"],
        claim: "Site tensors are invariant under the virtual symmetry and G-injective: ranks 8, N^3 and 64.",
        sizes: "toric, Z_3, color-code site tensors",
        run: site_invariants,
    },
    Check {
        name: "vacuum-stabilizers",
        suites: &["peps", "zn", "colorcode"],
        claim: "The vacuum PEPS is a +1 eigenstate of every star and plaquette term.",
        sizes: "2x2 and 3x3 tori; toric, Z_3, color code",
        run: vacuum_stabilizers,
    },
    Check {
        name: "contraction-associativity",
        suites: &["peps"],
        claim: "Pairwise contraction is associative: (AB)C = A(BC).",
        sizes: "20 random chains of three tensors, extents 1..4, seeded",
        run: contraction_associativity,
    },
    Check {
        name: "duality-circuit",
        suites: &["walls"],
        claim: "The open duality MPO is the circuit of a CX ladder followed by Hadamards; it maps X_j to a Z string ending at j and Z_j to X_j X_{j+1}.",
        sizes: "open chains n = 2..6 (or --n)",
        run: duality_circuit_check,
    },
    Check {
        name: "projector-identity",
        suites: &["walls"],
        claim: "On a closed chain D†D is (twice) the projector onto the even parity subspace: 1 + Z^n.",
        sizes: "periodic chains n = 2..8 (or --n)",
        run: projector_identity,
    },
    Check {
        name: "merge-identity",
        suites: &["walls"],
        claim: "A D piece joined to a D† piece equals a network of XOR tensors up to a scalar.",
        sizes: "single join and chains of joins",
        run: |c| merge_identity_check(c.tol.min(1e-10)),
    },
    Check {
        name: "bubble-deformation",
        suites: &["walls"],
        claim: "Wall bubbles can be removed unless they enclose a defect.",
        sizes: "3x3 torus, one-site bubbles",
        run: |c| bubble_deformation_check(c.tol),
    },
    Check {
        name: "spt-structure",
        suites: &["walls", "colorcode"],
        claim: "The W1t wall is a controlled-phase-in-X-basis circuit commuting with the virtual Z2 x Z2 symmetry; its output obeys the cluster stabilizers.",
        sizes: "rings of 4 and 6 wires",
        run: |c| spt_structure_check(c.tol),
    },
    Check {
        name: "duality-transport",
        suites: &["walls"],
        claim: "An e pair pushed through a duality wall becomes an m pair.",
        sizes: "3x3 torus, D loop around a 2x2 block; Z_3 single-site loop",
        run: |c| duality_transport_check(c.tol),
    },
    Check {
        name: "swap-transport",
        suites: &["walls", "colorcode"],
        claim: "The W2 wall maps e_T to e_B.",
        sizes: "color code 3x3 torus",
        run: |c| swap_transport_check(c.tol),
    },
    Check {
        name: "catalog-permutations",
        suites: &["walls", "zn", "colorcode"],
        claim: "C = H^2 and Q_n induce the catalogued permutations; W1t, W2 and W5 act on the color-code anyons as tabulated.",
        sizes: "Z_p for p = 3, 5, 7; color code; W5 on 3 sites",
        run: |c| catalog_permutation_check(c.tol),
    },
    Check {
        name: "zn-walls",
        suites: &["zn", "walls"],
        claim: "The Z_N duality wall reduces to the qubit wall at N = 2, and D†D projects onto the symmetric subspace.",
        sizes: "N = 2, 3; short chains",
        run: |c| zn_wall_check(c.tol),
    },
    Check {
        name: "zn-twists",
        suites: &["zn", "twists"],
        claim: "Z_N duality twists come in N species connected by e absorption; matching operator Z†X; N equal fusion channels.",
        sizes: "N = 3, 5x2 patch",
        run: |c| zn_twist_check(3, c.tol),
    },
    Check {
        name: "zn-logical-count",
        suites: &["zn", "stabilizers"],
        claim: "The Z_3 toric code on a torus encodes 2 qutrits.",
        sizes: "Z_3, 2x2 torus",
        run: zn_logical,
    },
    Check {
        name: "twist-charge",
        suites: &["twists"],
        claim: "Twist ends of definite charge are |±i>, eigenvectors of XZ; double braiding returns the state up to a phase.",
        sizes: "toric 5x2 patch, wall over two bonds",
        run: |c| twist_charge_check(c.tol),
    },
    Check {
        name: "twist-absorption",
        suites: &["twists"],
        claim: "σ± × e = σ∓ with phase ±i; σ± × m = σ∓.",
        sizes: "toric 5x2 patch",
        run: |c| absorption_check(c.tol),
    },
    Check {
        name: "fusion-pp",
        suites: &["twists"],
        claim: "σ± × σ± = 1 + em, with twist dimension √2 and the displayed fusion witness.",
        sizes: "toric chain of 3 sites, opposite orientation",
        run: |c| fusion_pair_check(true, c.tol),
    },
    Check {
        name: "fusion-pm",
        suites: &["twists"],
        claim: "σ± × σ∓ = e + m, with twist dimension √2 and the displayed fusion witness.",
        sizes: "toric chain of 3 sites, opposite orientation",
        run: |c| fusion_pair_check(false, c.tol),
    },
    Check {
        name: "registry-vacuum",
        suites: &["stabilizers"],
        claim: "Star and plaquette terms are commuting stabilizers of the PEPS; the toric code on a torus encodes 2 qubits.",
        sizes: "toric 3x3 torus",
        run: vacuum_registry,
    },
    Check {
        name: "registry-duality",
        suites: &["stabilizers", "twists"],
        claim: "With twists inserted, the PEPS is a +1 eigenstate of commuting stabilizers; the final two terms carry ∓ at the twists.",
        sizes: "toric 6x2 patch, wall over three bonds",
        run: |c| registry_check(TwistWall::Duality, c.tol),
    },
    Check {
        name: "registry-w1",
        suites: &["stabilizers", "colorcode"],
        claim: "W1t twists: commuting stabilizers with the X-type term at the twist removed.",
        sizes: "color 6x2 patch, wall over three bonds",
        run: |c| registry_check(TwistWall::W1Tilde, c.tol),
    },
    Check {
        name: "registry-w2",
        suites: &["stabilizers", "colorcode"],
        claim: "W2 twists: commuting stabilizers with a single term at the twist location.",
        sizes: "color 6x2 patch, wall over three bonds",
        run: |c| registry_check(TwistWall::W2, c.tol),
    },
    Check {
        name: "registry-w5",
        suites: &["stabilizers", "colorcode"],
        claim: "W5 twists: commuting stabilizers with ±-signed terms at the twists.",
        sizes: "color 6x2 patch, wall over three bonds",
        run: |c| registry_check(TwistWall::W5, c.tol),
    },
    Check {
        name: "registry-layered",
        suites: &["stabilizers", "colorcode"],
        claim: "The W5 registry is the toric twist registry on the bottom layer along with all stabilizers of the top toric code, which remain unchanged.",
        sizes: "color vs toric 6x2 patches",
        run: |_| layered_registry_check(),
    },
    Check {
        name: "registry-negative-control",
        suites: &["stabilizers", "colorcode"],
        claim: "Altering the W2 twist term's Pauli type breaks commutation.",
        sizes: "color 6x2 patch",
        run: |_| swap_negative_control(),
    },
    Check {
        name: "color-decoupling",
        suites: &["colorcode", "stabilizers"],
        claim: "The color code is locally equivalent to two copies of the toric code: X_G -> Z_L1, Z_G -> Z_L2, and red and blue plaquettes map to two independent toric codes.",
        sizes: "4.8.8 tori of 2x2 and 4x4 green squares",
        run: |_| {
            let mut o = color_toric_correspondence(2)?;
            o.merge("4x4", color_toric_correspondence(4)?);
            Ok(o)
        },
    },
];

pub fn find_check(name: &str) -> Result<&'static Check> {
    CHECKS.iter().find(|c| c.name == name).ok_or_else(|| Error::Unknown(format!("check {name}")))
}

/// Text for `explain`.
pub fn explain(name: &str) -> Result<String> {
    let c = find_check(name)?;
    Ok(format!("{}\n  claim:  {}\n  sizes:  {}\n  suites: {}\n", c.name, c.claim, c.sizes, c.suites.join(", ")))
}

pub fn run_check(c: &Check, cfg: &SuiteConfig) -> Record {
    let t = Instant::now();
    let res = (c.run)(cfg);
    let runtime_ms = t.elapsed().as_millis();
    let (status, values, failures, skip_reason) = match res {
        Ok(o) => (if o.passed() { Status::Pass } else { Status::Fail }, o.values, o.failures, None),
        Err(Error::Cap(why)) => (Status::Skip, BTreeMap::new(), vec![], Some(why)),
        Err(e) => (Status::Fail, BTreeMap::new(), vec![e.to_string()], None),
    };
    Record { name: c.name.into(), anchor: c.claim.into(), status, values, failures, skip_reason, runtime_ms }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    if !SUITES.contains(&cfg.suite.as_str()) {
        return Err(Error::Unknown(format!("suite {} (expected one of {})", cfg.suite, SUITES.join(", "))));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let mut checks: Vec<Record> = CHECKS
        .iter()
        .filter(|c| cfg.suite == "all" || c.suites.contains(&cfg.suite.as_str()))
        .map(|c| run_check(c, cfg))
        .collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let count = |s: Status| checks.iter().filter(|r| r.status == s).count();
    let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
    Ok(Report { suite: cfg.suite.clone(), tol: cfg.tol, seed: cfg.seed, checks, passed, failed, skipped })
}

/// `aps enumerate`: one permutation per line in cycle notation, then the
/// group order.
pub fn aps_table(model: &str) -> Result<(String, usize)> {
    let m = crate::anyons::model_by_name(model)?;
    let perms = m.enumerate_aps()?;
    let mut s = String::new();
    for (k, p) in perms.iter().enumerate() {
        s += &format!("{k:>3}  order {}  {}\n", order(p), m.cycles(p));
    }
    s += &format!("{model}: group order {}\n", perms.len());
    Ok((s, perms.len()))
}

/// `walls verify`: the identities that apply to one wall at one length.
pub fn verify_wall(kind: &str, n: usize, periodic: bool, modulus: u32, tol: f64) -> Result<Outcome> {
    use crate::walls::{catalog_wall, onsite_permutation, CatalogWall};
    let mut o = Outcome::new();
    if n == 0 {
        return Err(Error::Precondition("a wall needs at least one site".into()));
    }
    if kind == "D" {
        let cfg = SuiteConfig { n: Some(n), tol, ..Default::default() };
        return if periodic { projector_identity(&cfg) } else { duality_circuit_check(&cfg) };
    }
    let wall = CatalogWall::parse(kind, modulus)?;
    let closure = if periodic { Closure::Periodic } else { Closure::Ends(vec![C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0)]) };
    match wall.bond_matrix()? {
        Some(v) => {
            let mpo = catalog_wall(&wall, n, closure)?;
            o.value("bond_dim", mpo.bond_dim() as f64);
            let u = mpo.operator()?;
            o.close("unitarity_dev", (&u.dag() * &u).max_abs_diff(&Mat::eye(u.rows())), 0.0, tol);
            let (model, generator) = match &wall {
                CatalogWall::C(_) => (build_zn_double(modulus)?, Generator::C),
                CatalogWall::Qn { n: k, .. } => (build_zn_double(modulus)?, Generator::Qn(*k)),
                CatalogWall::W1Tilde => (build_color_code(), Generator::W1Tilde),
                _ => (build_color_code(), Generator::W2),
            };
            let got = onsite_permutation(&model, &v)?;
            let want = generator.permutation(&model)?;
            o.require(got == want, &format!("induced {} vs catalogued {}", model.cycles(&got), model.cycles(&want)));
        }
        None => {
            // the layered duality wall, checked on both layers
            let mpo = catalog_wall(&wall, n, if periodic { Closure::Periodic } else { open_ends(2) })?;
            o.value("bond_dim", mpo.bond_dim() as f64);
            let m = mpo.operator()?;
            let xt = crate::pauli::x_mat(2).kron(&Mat::eye(2));
            let mut top: f64 = 0.0;
            for j in 0..n {
                let x = crate::walls::embed(&xt, j, n, 4);
                top = top.max((&m * &x).max_abs_diff(&(&x * &m)));
            }
            o.close("top_layer_dev", top, 0.0, tol);
            if periodic {
                let zb = Mat::eye(2).kron(&z_mat(2));
                let zz = (1..n).fold(zb.clone(), |a, _| a.kron(&zb));
                let want = &Mat::eye(m.rows()) + &zz;
                o.close("projector_dev", (&m.dag() * &m).max_abs_diff(&want), 0.0, tol);
            }
        }
    }
    Ok(o)
}

/// `twists fuse`: the channel table of a twist pair on a duality wall.
pub fn fusion_table(model: &str, like: bool) -> Result<String> {
    let n = match crate::netfile::parse_model(model)? {
        crate::peps::SiteKind::Toric => 2,
        crate::peps::SiteKind::Zn(n) => n,
        crate::peps::SiteKind::Color => return Err(Error::Precondition("fusion tables are for toric and Z_N duality twists".into())),
    };
    let ends = crate::twists::find_end_vectors(TwistWall::Duality, n)?;
    let b = if like { &ends[0] } else { &ends[1] };
    let w = crate::twists::fuse_twists(n, &ends[0], b, if n == 2 { 3 } else { 2 }, true, false)?;
    let mut s = format!("{} x {} on {model}\n", ends[0].species, b.species);
    for (name, weight) in &w.channels {
        s += &format!("  {name:<6} {weight:.12}\n");
    }
    s += &format!("  twist dimension {:.12}\n  residual {:.3e}\n", crate::twists::twist_dimension(&w), w.residual);
    Ok(s)
}

/// `stabilizers verify`: build the registry of a twist configuration file
/// and check it against the twisted PEPS.
pub fn verify_registry_file(text: &str, tol: f64) -> Result<(Outcome, crate::stabilizers::TermRegistry)> {
    use crate::stabilizers::{build_registry, Region};
    let desc = crate::netfile::NetworkDescription::parse(text)?;
    let cfg = desc.twist_config()?;
    let reg = build_registry(&cfg)?;
    let net = desc.build()?;
    let mut o = Outcome::new();
    o.value("terms", reg.terms.len() as f64);
    o.value("at_twist", reg.by_region(Region::AtTwist).count() as f64);
    o.close("anticommuting_pairs", verify_commuting(&reg).len() as f64, 0.0, 0.0);
    o.close("max_dev", verify_eigenstate(&net, &reg)?.max_dev, 0.0, tol);
    Ok((o, reg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_unique_and_in_known_suites() {
        for (i, c) in CHECKS.iter().enumerate() {
            assert!(CHECKS[i + 1..].iter().all(|d| d.name != c.name), "{}", c.name);
            assert!(c.suites.iter().all(|s| SUITES.contains(s)), "{}", c.name);
        }
    }

    #[test]
    fn explain_cites_the_claim() {
        assert!(explain("fusion-pp").unwrap().contains("σ± × σ± = 1 + em"));
        assert!(explain("projector-identity").unwrap().contains("even parity"));
        assert!(explain("unknown").is_err());
    }

    #[test]
    fn unknown_suite_and_bad_tolerance() {
        assert!(run_suite(&SuiteConfig { suite: "nope".into(), ..Default::default() }).is_err());
        assert!(run_suite(&SuiteConfig { suite: "walls".into(), tol: 0.0, ..Default::default() }).is_err());
    }
}
