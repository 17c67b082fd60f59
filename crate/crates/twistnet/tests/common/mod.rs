//! Brute-force state vectors on the 2x2 toric torus, built straight from the
//! tensor's defining rule.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistnet::pauli::PauliTerm;
use twistnet::peps::{toric_site_tensor, Bond, PepsNetwork};

pub const L: usize = 2;
pub const NQ: usize = 16;

pub fn site_index(x: usize, y: usize) -> usize {
    x * L + y
}

pub fn bond_index(b: Bond) -> usize {
    match b {
        Bond::H(x, y) => 2 * site_index(x, y),
        Bond::V(x, y) => 2 * site_index(x, y) + 1,
    }
}

/// Flip and sign markers on (site, leg) with legs ordered l, u, r, d.
#[derive(Default, Clone)]
pub struct Inserts {
    pub flip: Vec<(usize, usize)>,
    pub sign: Vec<(usize, usize)>,
}

pub fn oracle_state(ins: &Inserts) -> Vec<C64> {
    let mut psi = vec![C64::new(0.0, 0.0); 1 << NQ];
    for (idx, amp) in psi.iter_mut().enumerate() {
        let spin = |s: usize, k: usize| (idx >> (NQ - 1 - (4 * s + k))) & 1;
        let mut total = 0.0;
        for bonds in 0..(1usize << 8) {
            let bv = |i: usize| (bonds >> i) & 1;
            let mut w = 1.0;
            'sites: for x in 0..L {
                for y in 0..L {
                    let s = site_index(x, y);
                    let p: Vec<usize> = (0..4).map(|k| spin(s, k)).collect();
                    let want = [(p[3] + p[0]) % 2, (p[0] + p[1]) % 2, (p[1] + p[2]) % 2, (p[2] + p[3]) % 2];
                    let legs = [
                        bv(bond_index(Bond::H((x + L - 1) % L, y))),
                        bv(bond_index(Bond::V(x, y))),
                        bv(bond_index(Bond::H(x, y))),
                        bv(bond_index(Bond::V(x, (y + L - 1) % L))),
                    ];
                    for leg in 0..4 {
                        let mut seen = legs[leg];
                        if ins.flip.contains(&(s, leg)) {
                            seen ^= 1;
                        }
                        if ins.sign.contains(&(s, leg)) && legs[leg] == 1 {
                            w = -w;
                        }
                        if seen != want[leg] {
                            w = 0.0;
                            break 'sites;
                        }
                    }
                }
            }
            total += w;
        }
        *amp = C64::new(total, 0.0);
    }
    psi
}

pub fn position(name: &str) -> usize {
    let body = name.strip_prefix('q').unwrap();
    let v: Vec<usize> = body.split('.').map(|s| s.parse().unwrap()).collect();
    4 * site_index(v[0], v[1]) + v[2]
}

pub fn oracle_expectation(psi: &[C64], t: &PauliTerm) -> C64 {
    let zeta = C64::from_polar(1.0, std::f64::consts::PI / 4.0);
    let phase = zeta.powu(t.phase_exponent());
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    for (b, &a) in psi.iter().enumerate() {
        den += a.norm_sqr();
        if a == C64::new(0.0, 0.0) {
            continue;
        }
        let mut out = b;
        let mut sign = 1.0;
        for (site, &(x, z)) in t.sites() {
            let bit = NQ - 1 - position(site);
            if z % 2 == 1 && (b >> bit) & 1 == 1 {
                sign = -sign;
            }
            if x % 2 == 1 {
                out ^= 1 << bit;
            }
        }
        num += psi[out].conj() * a * sign;
    }
    num * phase / den
}

pub fn torus() -> PepsNetwork {
    PepsNetwork::torus(toric_site_tensor(), L, L).unwrap()
}

pub fn random_terms(seed: u64, count: usize) -> Vec<PauliTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = torus().qubits();
    (0..count)
        .map(|_| {
            let mut t = PauliTerm::identity(2);
            for q in &names {
                if rng.gen_bool(0.3) {
                    t = t.with(q, rng.gen_range(0..2), rng.gen_range(0..2));
                }
            }
            t
        })
        .collect()
}

