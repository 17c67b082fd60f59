//! Abelian anyon models and their anyon-permuting symmetries.
//!
//! A model is a finite abelian group `∏ Z_{m_i}` of labels with a topological
//! spin `θ(a)` stored as an integer exponent over a common denominator:
//! `T_a = exp(2πi θ(a)/L)`. Mutual braiding is derived from the spins,
//! `S_ab = exp(-2πi (θ(a+b) - θ(a) - θ(b))/L) / D` with `D = sqrt(#labels)`.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AnyonModel {
    pub name: String,
    /// cyclic factors of the label group
    pub moduli: Vec<u32>,
    /// common denominator for spin exponents
    pub denom: u32,
    theta: Vec<u32>,
    names: Vec<String>,
}

/// A bijection on label indices. `perm[a]` is the image of label `a`.
pub type ApsPermutation = Vec<usize>;

pub const ENUMERATION_CAP: u64 = 20_000_000;

impl AnyonModel {
    fn build(name: &str, moduli: Vec<u32>, denom: u32, spin: impl Fn(&[u32]) -> u32, label: impl Fn(&[u32]) -> String) -> Self {
        let mut m = AnyonModel { name: name.into(), moduli, denom, theta: vec![], names: vec![] };
        for a in 0..m.len() {
            let v = m.coords(a);
            m.theta.push(spin(&v) % denom);
            m.names.push(label(&v));
        }
        m
    }

    pub fn len(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vacuum(&self) -> usize {
        0
    }

    pub fn coords(&self, mut a: usize) -> Vec<u32> {
        let mut v = vec![0; self.moduli.len()];
        for k in (0..self.moduli.len()).rev() {
            v[k] = (a % self.moduli[k] as usize) as u32;
            a /= self.moduli[k] as usize;
        }
        v
    }

    pub fn index(&self, v: &[u32]) -> usize {
        v.iter().zip(&self.moduli).fold(0, |acc, (&x, &m)| acc * m as usize + (x % m) as usize)
    }

    pub fn fuse(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.coords(a), self.coords(b));
        let s: Vec<u32> = va.iter().zip(&vb).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect();
        self.index(&s)
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn label(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::Unknown(format!("anyon {name}")))
    }

    pub fn spin_exponent(&self, a: usize) -> u32 {
        self.theta[a]
    }

    pub fn t(&self, a: usize) -> C64 {
        C64::from_polar(1.0, 2.0 * PI * self.theta[a] as f64 / self.denom as f64)
    }

    /// Exponent of the braiding phase between `a` and `b`.
    pub fn braid_exponent(&self, a: usize, b: usize) -> u32 {
        let l = self.denom as i64;
        let e = self.theta[self.fuse(a, b)] as i64 - self.theta[a] as i64 - self.theta[b] as i64;
        e.rem_euclid(l) as u32
    }

    pub fn total_dim(&self) -> f64 {
        (self.len() as f64).sqrt()
    }

    pub fn dims(&self) -> Vec<f64> {
        vec![1.0; self.len()]
    }

    pub fn s(&self, a: usize, b: usize) -> C64 {
        C64::from_polar(1.0 / self.total_dim(), -2.0 * PI * self.braid_exponent(a, b) as f64 / self.denom as f64)
    }

    pub fn s_matrix(&self) -> Vec<Vec<C64>> {
        (0..self.len()).map(|a| (0..self.len()).map(|b| self.s(a, b)).collect()).collect()
    }

    pub fn is_aps(&self, p: &[usize]) -> bool {
        let n = self.len();
        if p.len() != n || p[self.vacuum()] != self.vacuum() {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in p {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        for a in 0..n {
            if self.theta[p[a]] != self.theta[a] {
                return false;
            }
            for b in 0..n {
                if p[self.fuse(a, b)] != self.fuse(p[a], p[b]) {
                    return false;
                }
                if (self.s(p[a], p[b]) - self.s(a, b)).norm() > 1e-9 {
                    return false;
                }
            }
        }
        true
    }

    /// Every S,T-preserving fusion automorphism, found by trying all images
    /// of the cyclic generators. Sorted lexicographically.
    pub fn enumerate_aps(&self) -> Result<Vec<ApsPermutation>> {
        let n = self.len();
        let k = self.moduli.len();
        let candidates = (n as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
        if candidates > ENUMERATION_CAP {
            return Err(Error::Cap(format!("{candidates} generator-image candidates")));
        }
        // images of a generator must have order dividing its modulus
        let options: Vec<Vec<usize>> = self
            .moduli
            .iter()
            .map(|&m| (0..n).filter(|&a| self.coords(a).iter().zip(&self.moduli).all(|(&x, &q)| (x as u64 * m as u64) % q as u64 == 0)).collect())
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        'outer: loop {
            let imgs: Vec<usize> = choice.iter().zip(&options).map(|(&c, o)| o[c]).collect();
            let perm: Vec<usize> = (0..n)
                .map(|a| {
                    let v = self.coords(a);
                    let mut acc = self.vacuum();
                    for (i, &x) in v.iter().enumerate() {
                        for _ in 0..x {
                            acc = self.fuse(acc, imgs[i]);
                        }
                    }
                    acc
                })
                .collect();
            if perm.iter().enumerate().all(|(a, &pa)| self.theta[pa] == self.theta[a]) && self.is_aps(&perm) {
                out.push(perm);
            }
            for i in (0..k).rev() {
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    continue 'outer;
                }
                choice[i] = 0;
            }
            break;
        }
        out.sort();
        Ok(out)
    }

    /// Cycle notation on label names, e.g. `(e m)`; identity prints `()`.
    pub fn cycles(&self, p: &[usize]) -> String {
        let mut seen = vec![false; p.len()];
        let mut parts = Vec::new();
        for s in 0..p.len() {
            if seen[s] || p[s] == s {
                continue;
            }
            let mut cyc = vec![];
            let mut a = s;
            while !seen[a] {
                seen[a] = true;
                cyc.push(self.names[a].clone());
                a = p[a];
            }
            parts.push(format!("({})", cyc.join(" ")));
        }
        if parts.is_empty() {
            "()".into()
        } else {
            parts.join("")
        }
    }
}

fn zn_name(n: u32, g: u32, a: u32) -> String {
    let part = |s: &str, k: u32| match k {
        0 => String::new(),
        1 if n == 2 => s.to_string(),
        k => format!("{s}{k}"),
    };
    let s = format!("{}{}", part("e", g), part("m", a));
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Z_N quantum double: labels `e^g m^α`, `T = ω^{αg}`.
pub fn build_zn_double(n: u32) -> Result<AnyonModel> {
    if n < 2 {
        return Err(Error::Precondition("N must be >= 2".into()));
    }
    Ok(AnyonModel::build(
        &format!("zn:{n}"),
        vec![n, n],
        n,
        |v| v[0] * v[1],
        |v| zn_name(n, v[0], v[1]),
    ))
}

pub fn build_toric() -> AnyonModel {
    let mut m = build_zn_double(2).unwrap();
    m.name = "toric".into();
    m
}

/// Two stacked toric codes; coordinates `(e_T, m_T, e_B, m_B)`.
pub fn build_color_code() -> AnyonModel {
    AnyonModel::build(
        "color",
        vec![2, 2, 2, 2],
        2,
        |v| v[0] * v[1] + v[2] * v[3],
        |v| {
            let mut parts = vec![];
            for (k, s) in ["eT", "mT", "eB", "mB"].iter().enumerate() {
                if v[k] == 1 {
                    parts.push(*s);
                }
            }
            if parts.is_empty() {
                "1".into()
            } else {
                parts.join(".")
            }
        },
    )
}

pub fn model_by_name(name: &str) -> Result<AnyonModel> {
    match name {
        "toric" => Ok(build_toric()),
        "color" => Ok(build_color_code()),
        s => match s.strip_prefix("zn:").map(|n| n.parse::<u32>()) {
            Some(Ok(n)) => build_zn_double(n),
            _ => Err(Error::Unknown(format!("model {s}"))),
        },
    }
}

pub fn modular_inverse(n: u32, p: u32) -> Option<u32> {
    (1..p).find(|&i| (i as u64 * n as u64) % p as u64 == 1)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Named symmetry generators.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// e ↔ m on a Z_N double (`e^g m^α ↦ e^α m^g`)
    D,
    /// charge conjugation `e^g m^α ↦ e^{-g} m^{-α}`
    C,
    /// `e^g m^α ↦ e^{ng} m^{α i_n}`
    Qn(u32),
    W1,
    W1Tilde,
    W2,
    W5,
}

impl Generator {
    pub fn parse(s: &str) -> Result<Generator> {
        Ok(match s {
            "D" => Generator::D,
            "C" => Generator::C,
            "W1" => Generator::W1,
            "W1t" | "W~1" | "W̃1" => Generator::W1Tilde,
            "W2" => Generator::W2,
            "W5" => Generator::W5,
            s => match s.strip_prefix('Q').map(|n| n.parse::<u32>()) {
                Some(Ok(n)) => Generator::Qn(n),
                _ => return Err(Error::Unknown(format!("generator {s}"))),
            },
        })
    }

    /// Image of a coordinate vector.
    pub fn act(&self, model: &AnyonModel, v: &[u32]) -> Result<Vec<u32>> {
        let color = model.moduli.len() == 4;
        match (self, color) {
            (Generator::D, false) => Ok(vec![v[1], v[0]]),
            (Generator::C, false) => {
                let n = model.moduli[0];
                Ok(vec![(n - v[0]) % n, (n - v[1]) % n])
            }
            (Generator::Qn(k), false) => {
                let p = model.moduli[0];
                if gcd(*k % p, p) != 1 {
                    return Err(Error::Precondition(format!("{k} not invertible mod {p}")));
                }
                let inv = modular_inverse(*k % p, p).unwrap();
                Ok(vec![(k * v[0]) % p, (v[1] * inv) % p])
            }
            // coordinates (eT, mT, eB, mB)
            (Generator::W1, true) => Ok(vec![(v[0] + v[2]) % 2, v[3], v[0], (v[1] + v[3]) % 2]),
            (Generator::W1Tilde, true) => Ok(vec![v[0], (v[1] + v[3]) % 2, (v[0] + v[2]) % 2, v[3]]),
            (Generator::W2, true) => Ok(vec![v[2], v[3], v[0], v[1]]),
            (Generator::W5, true) => Ok(vec![v[0], v[1], v[3], v[2]]),
            (g, _) => Err(Error::Unsupported(format!("{g:?} on model {}", model.name))),
        }
    }

    pub fn permutation(&self, model: &AnyonModel) -> Result<ApsPermutation> {
        (0..model.len()).map(|a| Ok(model.index(&self.act(model, &model.coords(a))?))).collect()
    }
}

/// Image of a named label under a named generator.
pub fn catalog_action(model: &AnyonModel, generator: &str, label: &str) -> Result<String> {
    let g = Generator::parse(generator)?;
    let a = model.label(label)?;
    let b = model.index(&g.act(model, &model.coords(a))?);
    Ok(model.name(b).to_string())
}

pub fn compose(p: &[usize], q: &[usize]) -> ApsPermutation {
    // apply q first, then p
    q.iter().map(|&a| p[a]).collect()
}

pub fn order(p: &[usize]) -> usize {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut cur = p.to_vec();
    let mut k = 1;
    while cur != id {
        cur = compose(p, &cur);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_data() {
        let m = build_toric();
        let (e, mm, em) = (m.label("e").unwrap(), m.label("m").unwrap(), m.label("em").unwrap());
        assert!((m.s(e, mm) - C64::new(-0.5, 0.0)).norm() < 1e-12);
        assert!((m.t(em) - C64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((m.t(e) - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn z3_spin() {
        let m = build_zn_double(3).unwrap();
        let a = m.label("e1m1").unwrap();
        assert!((m.t(a) - crate::pauli::omega(3)).norm() < 1e-12);
    }

    #[test]
    fn color_entries() {
        let m = build_color_code();
        assert_eq!(m.len(), 16);
        let (et, mt, mb) = (m.label("eT").unwrap(), m.label("mT").unwrap(), m.label("mB").unwrap());
        assert!((m.s(et, mt) - C64::new(-0.25, 0.0)).norm() < 1e-12);
        assert!((m.t(m.fuse(et, mb)) - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn aps_membership() {
        let m = build_toric();
        let (e, mm, em) = (m.label("e").unwrap(), m.label("m").unwrap(), m.label("em").unwrap());
        let mut swap: Vec<usize> = (0..4).collect();
        swap.swap(e, mm);
        assert!(m.is_aps(&swap));
        assert!(m.is_aps(&[0, 1, 2, 3]));
        let mut bad: Vec<usize> = (0..4).collect();
        bad.swap(e, em);
        assert!(!m.is_aps(&bad));
    }

    #[test]
    fn catalog_entries() {
        let c = build_color_code();
        assert_eq!(catalog_action(&c, "W5", "eB").unwrap(), "mB");
        assert_eq!(catalog_action(&c, "W2", "mT").unwrap(), "mB");
        let z5 = build_zn_double(5).unwrap();
        assert_eq!(catalog_action(&z5, "Q2", "e1").unwrap(), "e2");
        assert_eq!(catalog_action(&z5, "Q2", "m1").unwrap(), "m3");
        assert!(catalog_action(&z5, "Q5", "e1").is_err());
        assert!(catalog_action(&z5, "W9", "e1").is_err());
    }

    #[test]
    fn w1_table() {
        let c = build_color_code();
        let w1 = |l: &str| catalog_action(&c, "W1", l).unwrap();
        assert_eq!(w1("eB"), "eT");
        assert_eq!(w1("mT"), "mB");
        assert_eq!(w1("eT"), "eT.eB");
        assert_eq!(w1("mB"), "mT.mB");
    }

    fn is_group(ps: &[ApsPermutation]) -> bool {
        ps.iter().all(|p| {
            let inv = {
                let mut v = vec![0; p.len()];
                for (a, &b) in p.iter().enumerate() {
                    v[b] = a;
                }
                v
            };
            ps.contains(&inv) && ps.iter().all(|q| ps.contains(&compose(p, q)))
        })
    }

    #[test]
    fn group_orders() {
        let t = build_toric().enumerate_aps().unwrap();
        assert_eq!(t.len(), 2);
        assert!(is_group(&t));
        for p in [3u32, 5, 7] {
            let g = build_zn_double(p).unwrap().enumerate_aps().unwrap();
            assert_eq!(g.len() as u32, 2 * (p - 1), "p = {p}");
            assert!(is_group(&g));
        }
        let c = build_color_code().enumerate_aps().unwrap();
        assert_eq!(c.len(), 72);
        assert!(is_group(&c));
    }

    #[test]
    fn catalog_members_are_aps() {
        let c = build_color_code();
        for g in ["W1", "W1t", "W2", "W5"] {
            let p = Generator::parse(g).unwrap().permutation(&c).unwrap();
            assert!(c.is_aps(&p), "{g}");
        }
        let w1 = Generator::W1.permutation(&c).unwrap();
        let w1t = Generator::W1Tilde.permutation(&c).unwrap();
        let w2 = Generator::W2.permutation(&c).unwrap();
        assert_eq!(order(&w1), 3);
        assert_eq!(order(&w1t), 2);
        assert_eq!(compose(&w2, &w1), w1t);
        for p in [3u32, 5, 7] {
            let m = build_zn_double(p).unwrap();
            let d = Generator::D.permutation(&m).unwrap();
            assert!(m.is_aps(&Generator::C.permutation(&m).unwrap()));
            for n in 1..p {
                let q = Generator::Qn(n).permutation(&m).unwrap();
                assert!(m.is_aps(&q));
                let qi = Generator::Qn(modular_inverse(n, p).unwrap()).permutation(&m).unwrap();
                assert_eq!(compose(&d, &compose(&q, &d)), qi);
            }
        }
    }
}
