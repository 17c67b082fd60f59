//! Generalized Pauli operators over Z_N and their Clifford conjugation.
//!
//! Conventions: `X|j> = |j-1>`, `Z|j> = ω^j |j>` with `ω = exp(2πi/N)`.
//! A [`PauliTerm`] is `ζ^k ∏_s X_s^{x_s} Z_s^{z_s}` with `ζ = exp(2πi/4N)`,
//! X placed left of Z on every site. With this X the reordering rule is
//! `Z X = ω^{-1} X Z`.
//!
//! Text grammar (round-trips through [`PauliTerm::parse`] and `Display`):
//!
//! ```text
//! term  := phase? token*
//! phase := "w^" INT            exponent of ζ, reduced mod 4N
//! token := ("X" | "Z") INT? "@" SITE
//! ```
//!
//! Tokens are multiplied left to right, so `Z1@a X1@a` parses to
//! `w^{-4} X1@a Z1@a`.

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::tensor::Tensor;

pub const MATRIX_SITE_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    n: u32,
    sites: BTreeMap<String, (u32, u32)>,
    phase: u32,
}

fn rem(a: i64, m: u32) -> u32 {
    a.rem_euclid(m as i64) as u32
}

impl PauliTerm {
    pub fn identity(n: u32) -> PauliTerm {
        PauliTerm { n, sites: BTreeMap::new(), phase: 0 }
    }

    /// `X^x Z^z` on a single site.
    pub fn single(n: u32, site: &str, x: i64, z: i64) -> PauliTerm {
        PauliTerm::identity(n).with(site, x, z)
    }

    pub fn x(n: u32, site: &str) -> PauliTerm {
        Self::single(n, site, 1, 0)
    }

    pub fn z(n: u32, site: &str) -> PauliTerm {
        Self::single(n, site, 0, 1)
    }

    /// Right-multiply by `X^x Z^z` on `site`.
    pub fn with(self, site: &str, x: i64, z: i64) -> PauliTerm {
        let n = self.n;
        let mut f = PauliTerm { n, sites: BTreeMap::new(), phase: 0 };
        let (x, z) = (rem(x, n), rem(z, n));
        if x != 0 || z != 0 {
            f.sites.insert(site.to_string(), (x, z));
        }
        self.mul(&f).expect("same modulus")
    }

    /// Product of X^x on every listed site.
    pub fn xs<S: AsRef<str>>(n: u32, sites: &[S]) -> PauliTerm {
        sites.iter().fold(Self::identity(n), |t, s| t.with(s.as_ref(), 1, 0))
    }

    pub fn zs<S: AsRef<str>>(n: u32, sites: &[S]) -> PauliTerm {
        sites.iter().fold(Self::identity(n), |t, s| t.with(s.as_ref(), 0, 1))
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }
    pub fn phase_exponent(&self) -> u32 {
        self.phase
    }
    pub fn sites(&self) -> &BTreeMap<String, (u32, u32)> {
        &self.sites
    }
    pub fn power(&self, site: &str) -> (u32, u32) {
        self.sites.get(site).copied().unwrap_or((0, 0))
    }
    pub fn weight(&self) -> usize {
        self.sites.len()
    }
    pub fn is_identity(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn phase(&self) -> C64 {
        C64::from_polar(1.0, 2.0 * PI * self.phase as f64 / (4 * self.n) as f64)
    }

    /// Multiply by `ζ^k`.
    pub fn rephase(mut self, k: i64) -> PauliTerm {
        self.phase = rem(self.phase as i64 + k, 4 * self.n);
        self
    }

    /// The same operator with unit phase.
    pub fn unphased(&self) -> PauliTerm {
        PauliTerm { phase: 0, ..self.clone() }
    }

    pub fn mul(&self, o: &PauliTerm) -> Result<PauliTerm> {
        if self.n != o.n {
            return Err(Error::Modulus(self.n as usize, o.n as usize));
        }
        let n = self.n;
        let mut sites = self.sites.clone();
        let mut ph = self.phase as i64 + o.phase as i64;
        for (s, &(x2, z2)) in &o.sites {
            let (x1, z1) = sites.get(s).copied().unwrap_or((0, 0));
            // X^x1 Z^z1 X^x2 Z^z2 = ω^{-z1 x2} X^{x1+x2} Z^{z1+z2}
            ph -= 4 * (z1 as i64) * (x2 as i64);
            let (x, z) = ((x1 + x2) % n, (z1 + z2) % n);
            if x == 0 && z == 0 {
                sites.remove(s);
            } else {
                sites.insert(s.clone(), (x, z));
            }
        }
        Ok(PauliTerm { n, sites, phase: rem(ph, 4 * n) })
    }

    pub fn dagger(&self) -> PauliTerm {
        // (ζ^k X^x Z^z)† = ζ^{-k} Z^{-z} X^{-x} = ζ^{-k} ω^{-zx} X^{-x} Z^{-z}
        let n = self.n;
        let mut ph = -(self.phase as i64);
        let mut sites = BTreeMap::new();
        for (s, &(x, z)) in &self.sites {
            ph -= 4 * (x as i64) * (z as i64);
            sites.insert(s.clone(), ((n - x) % n, (n - z) % n));
        }
        PauliTerm { n, sites, phase: rem(ph, 4 * n) }
    }

    pub fn pow(&self, k: u32) -> PauliTerm {
        (0..k).fold(PauliTerm::identity(self.n), |a, _| a.mul(self).unwrap())
    }

    pub fn is_hermitian(&self) -> bool {
        self.dagger() == *self
    }

    /// Exponent c (mod N) with `self · o = ω^c · o · self`.
    pub fn commutation(&self, o: &PauliTerm) -> u32 {
        let mut c: i64 = 0;
        for (s, &(x1, z1)) in &self.sites {
            if let Some(&(x2, z2)) = o.sites.get(s) {
                c += (z2 as i64) * (x1 as i64) - (z1 as i64) * (x2 as i64);
            }
        }
        rem(c, self.n)
    }

    pub fn commutes(&self, o: &PauliTerm) -> bool {
        self.commutation(o) == 0
    }

    /// Rename sites through `f`.
    pub fn map_sites(&self, f: impl Fn(&str) -> String) -> PauliTerm {
        let mut t = PauliTerm::identity(self.n).rephase(self.phase as i64);
        for (s, &(x, z)) in &self.sites {
            t = t.with(&f(s), x as i64, z as i64);
        }
        t
    }

    /// Restrict to the listed sites (phase kept).
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> PauliTerm {
        PauliTerm {
            n: self.n,
            phase: self.phase,
            sites: self.sites.iter().filter(|(s, _)| keep(s)).map(|(s, v)| (s.clone(), *v)).collect(),
        }
    }

    pub fn parse(n: u32, text: &str) -> Result<PauliTerm> {
        let mut t = PauliTerm::identity(n);
        for (i, tok) in text.split_whitespace().enumerate() {
            if let Some(k) = tok.strip_prefix("w^") {
                if i != 0 {
                    return Err(Error::Parse(format!("phase must come first: {tok}")));
                }
                let k: i64 = k.parse().map_err(|_| Error::Parse(format!("bad phase {tok}")))?;
                t = t.rephase(k);
                continue;
            }
            let (op, rest) = tok.split_at(1);
            let (pow, site) =
                rest.split_once('@').ok_or_else(|| Error::Parse(format!("missing @site in {tok}")))?;
            if site.is_empty() {
                return Err(Error::Parse(format!("empty site in {tok}")));
            }
            let p: i64 = if pow.is_empty() {
                1
            } else {
                pow.parse().map_err(|_| Error::Parse(format!("bad power in {tok}")))?
            };
            t = match op {
                "X" => t.with(site, p, 0),
                "Z" => t.with(site, 0, p),
                _ => return Err(Error::Parse(format!("unknown operator {op}"))),
            };
        }
        Ok(t)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{}", self.phase)?;
        for (s, &(x, z)) in &self.sites {
            if x != 0 {
                write!(f, " X{x}@{s}")?;
            }
            if z != 0 {
                write!(f, " Z{z}@{s}")?;
            }
        }
        Ok(())
    }
}

pub fn omega(n: u32) -> C64 {
    C64::from_polar(1.0, 2.0 * PI / n as f64)
}

pub fn x_mat(n: u32) -> Mat {
    let n = n as usize;
    Mat::from_fn(n, n, |r, c| if (r + 1) % n == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn z_mat(n: u32) -> Mat {
    let w = omega(n);
    let n = n as usize;
    Mat::from_fn(n, n, |r, c| if r == c { w.powu(r as u32) } else { C64::new(0.0, 0.0) })
}

pub fn hadamard_mat(n: u32) -> Mat {
    let w = omega(n);
    let s = 1.0 / (n as f64).sqrt();
    let n = n as usize;
    Mat::from_fn(n, n, |r, c| w.powu(((r * c) % n) as u32) * s)
}

/// Generalized Hadamard `ω^{jk}/√N` as a tensor with labels `out`, `in`.
pub fn hadamard(n: u32) -> Tensor {
    Tensor::from_matrix(&hadamard_mat(n), &[("out", n as usize)], &[("in", n as usize)]).unwrap()
}

/// Matrix of the term on `order` (first site most significant).
pub fn pauli_matrix_on(term: &PauliTerm, order: &[String]) -> Result<Mat> {
    if order.len() > MATRIX_SITE_CAP {
        return Err(Error::Cap(format!("{} sites exceeds matrix cap {MATRIX_SITE_CAP}", order.len())));
    }
    for s in term.sites.keys() {
        if !order.contains(s) {
            return Err(Error::Label(format!("site {s} missing from order")));
        }
    }
    let (xm, zm) = (x_mat(term.n), z_mat(term.n));
    let mut m = Mat::eye(1);
    for s in order {
        let (x, z) = term.power(s);
        m = m.kron(&(xm.pow(x as usize) * zm.pow(z as usize)));
    }
    Ok(m.scale(term.phase()))
}

/// Matrix over the term's own sites in label order, as a tensor with labels
/// `out:<site>` ... then `in:<site>` ....
pub fn pauli_matrix(term: &PauliTerm) -> Result<Tensor> {
    let order: Vec<String> = term.sites.keys().cloned().collect();
    let m = pauli_matrix_on(term, &order)?;
    let d = term.n as usize;
    let outs: Vec<(String, usize)> = order.iter().map(|s| (format!("out:{s}"), d)).collect();
    let ins: Vec<(String, usize)> = order.iter().map(|s| (format!("in:{s}"), d)).collect();
    let o: Vec<(&str, usize)> = outs.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    let i: Vec<(&str, usize)> = ins.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    Tensor::from_matrix(&m, &o, &i)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(String),
    Hdag(String),
    /// `|a,b> -> |a, a+b>`
    Cx(String, String),
    /// `|a,b> -> ω^{ab} |a,b>`
    Cz(String, String),
    /// controlled phase in the X basis: `(H⊗H) CZ (H⊗H)†`
    Czx(String, String),
    Swap(String, String),
    Pauli(PauliTerm),
}

impl Gate {
    pub fn sites(&self) -> Vec<&str> {
        match self {
            Gate::H(a) | Gate::Hdag(a) => vec![a],
            Gate::Cx(a, b) | Gate::Cz(a, b) | Gate::Czx(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::Pauli(p) => p.sites.keys().map(|s| s.as_str()).collect(),
        }
    }
}

/// Ordered gate list; the first gate is applied first, so the unitary is
/// `U = g_k ⋯ g_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordCircuit {
    pub n: u32,
    pub gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n: u32) -> Self {
        CliffordCircuit { n, gates: vec![] }
    }

    pub fn push(mut self, g: Gate) -> Self {
        self.gates.push(g);
        self
    }

    pub fn sites(&self) -> Vec<String> {
        let mut v: Vec<String> = Vec::new();
        for g in &self.gates {
            for s in g.sites() {
                if !v.iter().any(|x| x == s) {
                    v.push(s.to_string());
                }
            }
        }
        v.sort();
        v
    }

    /// The inverse circuit (gates reversed and inverted).
    pub fn inverse(&self) -> CliffordCircuit {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| match g {
                Gate::H(a) => Gate::Hdag(a.clone()),
                Gate::Hdag(a) => Gate::H(a.clone()),
                Gate::Cx(a, b) if self.n == 2 => Gate::Cx(a.clone(), b.clone()),
                Gate::Cz(a, b) if self.n == 2 => Gate::Cz(a.clone(), b.clone()),
                Gate::Czx(a, b) if self.n == 2 => Gate::Czx(a.clone(), b.clone()),
                Gate::Swap(a, b) => Gate::Swap(a.clone(), b.clone()),
                Gate::Pauli(p) => Gate::Pauli(p.dagger()),
                other => panic!("inverse of {other:?} only available for N = 2"),
            })
            .collect();
        CliffordCircuit { n: self.n, gates }
    }

    /// Dense unitary on `order` (first site most significant).
    pub fn matrix_on(&self, order: &[String]) -> Result<Mat> {
        if order.len() > MATRIX_SITE_CAP {
            return Err(Error::Cap("circuit matrix too large".into()));
        }
        let d = self.n as usize;
        let dim = d.pow(order.len() as u32);
        let pos = |s: &str| -> Result<usize> {
            order.iter().position(|x| x == s).ok_or_else(|| Error::Label(format!("site {s} not in order")))
        };
        let digits = |mut i: usize| -> Vec<usize> {
            let mut v = vec![0; order.len()];
            for k in (0..order.len()).rev() {
                v[k] = i % d;
                i /= d;
            }
            v
        };
        let undigits = |v: &[usize]| v.iter().fold(0, |a, &x| a * d + x);
        let mut u = Mat::eye(dim);
        for g in &self.gates {
            let gm = match g {
                Gate::H(a) | Gate::Hdag(a) => {
                    let h = if matches!(g, Gate::H(_)) { hadamard_mat(self.n) } else { hadamard_mat(self.n).dag() };
                    let p = pos(a)?;
                    Mat::from_fn(dim, dim, |r, c| {
                        let (vr, vc) = (digits(r), digits(c));
                        if (0..order.len()).all(|k| k == p || vr[k] == vc[k]) {
                            h.get(vr[p], vc[p])
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                }
                Gate::Cx(a, b) | Gate::Swap(a, b) => {
                    let (pa, pb) = (pos(a)?, pos(b)?);
                    let swap = matches!(g, Gate::Swap(..));
                    let mut m = Mat::zeros(dim, dim);
                    for c in 0..dim {
                        let mut v = digits(c);
                        if swap {
                            v.swap(pa, pb);
                        } else {
                            v[pb] = (v[pb] + v[pa]) % d;
                        }
                        m.set(undigits(&v), c, C64::new(1.0, 0.0));
                    }
                    m
                }
                Gate::Cz(a, b) => {
                    let (pa, pb) = (pos(a)?, pos(b)?);
                    let w = omega(self.n);
                    Mat::from_fn(dim, dim, |r, c| {
                        if r == c {
                            let v = digits(c);
                            w.powu(((v[pa] * v[pb]) % d) as u32)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                }
                Gate::Czx(a, b) => {
                    let sub = expand_czx(self.n, a, b);
                    sub.matrix_on(order)?
                }
                Gate::Pauli(p) => pauli_matrix_on(p, order)?,
            };
            u = &gm * &u;
        }
        Ok(u)
    }
}

fn expand_czx(n: u32, a: &str, b: &str) -> CliffordCircuit {
    CliffordCircuit::new(n)
        .push(Gate::Hdag(a.into()))
        .push(Gate::Hdag(b.into()))
        .push(Gate::Cz(a.into(), b.into()))
        .push(Gate::H(a.into()))
        .push(Gate::H(b.into()))
}

/// Images of X_s and Z_s under `P -> g† P g` for each site the gate touches.
fn gate_images(n: u32, g: &Gate) -> Vec<(String, PauliTerm, PauliTerm)> {
    let ni = n as i64;
    match g {
        Gate::H(a) => vec![(a.clone(), PauliTerm::z(n, a), PauliTerm::single(n, a, ni - 1, 0))],
        Gate::Hdag(a) => vec![(a.clone(), PauliTerm::single(n, a, 0, ni - 1), PauliTerm::x(n, a))],
        Gate::Cx(c, t) => vec![
            (c.clone(), PauliTerm::x(n, c).with(t, -1, 0), PauliTerm::z(n, c)),
            (t.clone(), PauliTerm::x(n, t), PauliTerm::z(n, c).with(t, 0, 1)),
        ],
        Gate::Cz(a, b) => vec![
            (a.clone(), PauliTerm::x(n, a).with(b, 0, 1), PauliTerm::z(n, a)),
            (b.clone(), PauliTerm::z(n, a).with(b, 1, 0), PauliTerm::z(n, b)),
        ],
        Gate::Swap(a, b) => vec![
            (a.clone(), PauliTerm::x(n, b), PauliTerm::z(n, b)),
            (b.clone(), PauliTerm::x(n, a), PauliTerm::z(n, a)),
        ],
        Gate::Czx(..) | Gate::Pauli(_) => unreachable!("handled by expansion"),
    }
}

fn conjugate_gate(g: &Gate, term: &PauliTerm) -> PauliTerm {
    let n = term.n;
    match g {
        Gate::Pauli(q) => q.dagger().mul(term).unwrap().mul(q).unwrap(),
        Gate::Czx(a, b) => {
            let sub = expand_czx(n, a, b);
            conjugate_by_circuit(&sub, term).unwrap()
        }
        _ => {
            let imgs = gate_images(n, g);
            let mut out = PauliTerm::identity(n).rephase(term.phase as i64);
            for (s, &(x, z)) in &term.sites {
                match imgs.iter().find(|(site, _, _)| site == s) {
                    Some((_, ix, iz)) => {
                        out = out.mul(&ix.pow(x)).unwrap().mul(&iz.pow(z)).unwrap();
                    }
                    None => out = out.with(s, x as i64, z as i64),
                }
            }
            out
        }
    }
}

/// Heisenberg image `U† P U` of `term` under the circuit (first gate applied
/// first).
pub fn conjugate_by_circuit(circuit: &CliffordCircuit, term: &PauliTerm) -> Result<PauliTerm> {
    if circuit.n != term.n {
        return Err(Error::Modulus(circuit.n as usize, term.n as usize));
    }
    let mut t = term.clone();
    for g in circuit.gates.iter().rev() {
        t = conjugate_gate(g, &t);
    }
    Ok(t)
}

/// `D^(o)` on sites `q1..qn`: CX(q1→q2), ..., CX(q_{n-1}→q_n), then H on
/// every site.
pub fn duality_circuit(sites: &[String]) -> CliffordCircuit {
    let mut c = CliffordCircuit::new(2);
    for w in sites.windows(2) {
        c = c.push(Gate::Cx(w[0].clone(), w[1].clone()));
    }
    for s in sites {
        c = c.push(Gate::H(s.clone()));
    }
    c
}

/// Decoupling circuit of one green square of the 4.8.8 color code, qubits
/// `[a, b, c, d]` in cyclic order with `a, b` on a red octagon. Forward
/// gates CX(a→b), CX(b→c), CX(c→a), CX(c→d), H(c); stored in reverse so
/// that `conjugate_by_circuit` returns the forward image `V P V†`.
/// Outputs: `a` top, `b` bottom, `c` = L1, `d` = L2.
pub fn decoupling_circuit(q: [&str; 4]) -> CliffordCircuit {
    let [a, b, c, d] = q.map(String::from);
    CliffordCircuit::new(2)
        .push(Gate::H(c.clone()))
        .push(Gate::Cx(c.clone(), d))
        .push(Gate::Cx(c.clone(), a.clone()))
        .push(Gate::Cx(b.clone(), c))
        .push(Gate::Cx(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn z3_is_diag_omega() {
        let m = pauli_matrix_on(&PauliTerm::z(3, "a"), &names(&["a"])).unwrap();
        let w = omega(3);
        assert!((m.get(1, 1) - w).norm() < 1e-12);
        assert!((m.get(2, 2) - w * w).norm() < 1e-12);
    }

    #[test]
    fn xz_matrix() {
        let t = PauliTerm::x(2, "a").with("a", 0, 1);
        let m = pauli_matrix_on(&t, &names(&["a"])).unwrap();
        assert!(m.approx_eq(&Mat::real(2, 2, &[0.0, -1.0, 1.0, 0.0]), 1e-12));
    }

    #[test]
    fn zx_vs_xz_phase() {
        for n in [2u32, 3] {
            let zx = PauliTerm::z(n, "a").mul(&PauliTerm::x(n, "a")).unwrap();
            let xz = PauliTerm::x(n, "a").mul(&PauliTerm::z(n, "a")).unwrap();
            let o = names(&["a"]);
            let mzx = pauli_matrix_on(&zx, &o).unwrap();
            let mxz = pauli_matrix_on(&xz, &o).unwrap();
            // Z X = ω^{-1} X Z for X|j> = |j-1>
            let expect = mxz.scale(omega(n).inv());
            assert!(mzx.approx_eq(&expect, 1e-12));
            assert!(mzx.approx_eq(&(z_mat(n) * x_mat(n)), 1e-12));
        }
    }

    #[test]
    fn hadamard_relations() {
        for n in 2..=5u32 {
            let h = hadamard_mat(n);
            assert!(h.is_unitary(1e-12));
            assert!((&h * &x_mat(n) * h.dag()).approx_eq(&z_mat(n).dag(), 1e-12));
            assert!((&h * &z_mat(n) * h.dag()).approx_eq(&x_mat(n), 1e-12));
            let h2 = &h * &h;
            let nn = n as usize;
            let expect = Mat::from_fn(nn, nn, |r, c| C64::new(if (r + c) % nn == 0 { 1.0 } else { 0.0 }, 0.0));
            assert!(h2.approx_eq(&expect, 1e-12));
            assert!(h2.pow(2).approx_eq(&Mat::eye(nn), 1e-12));
        }
    }

    #[test]
    fn duality_images() {
        let q = names(&["q1", "q2", "q3"]);
        let c = duality_circuit(&q);
        let img = conjugate_by_circuit(&c, &PauliTerm::x(2, "q2")).unwrap();
        assert_eq!(img, PauliTerm::zs(2, &["q1", "q2"]));
        let img = conjugate_by_circuit(&c, &PauliTerm::z(2, "q2")).unwrap();
        assert_eq!(img, PauliTerm::xs(2, &["q2", "q3"]));
    }

    #[test]
    fn green_square_images() {
        let c = decoupling_circuit(["a", "b", "c", "d"]);
        let all = ["a", "b", "c", "d"];
        assert_eq!(conjugate_by_circuit(&c, &PauliTerm::xs(2, &all)).unwrap(), PauliTerm::z(2, "c"));
        assert_eq!(conjugate_by_circuit(&c, &PauliTerm::zs(2, &all)).unwrap(), PauliTerm::z(2, "d"));
        assert_eq!(conjugate_by_circuit(&c, &PauliTerm::xs(2, &["a", "b"])).unwrap(), PauliTerm::x(2, "a"));
        assert_eq!(conjugate_by_circuit(&c, &PauliTerm::zs(2, &["b", "c"])).unwrap(), PauliTerm::z(2, "a"));
        assert_eq!(conjugate_by_circuit(&c, &PauliTerm::zs(2, &["a", "b"])).unwrap(), PauliTerm::z(2, "b"));
        assert_eq!(conjugate_by_circuit(&c, &PauliTerm::xs(2, &["b", "c"])).unwrap(), PauliTerm::x(2, "b"));
        let u = c.matrix_on(&names(&all)).unwrap();
        assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn symbolic_matches_dense() {
        let q = names(&["a", "b", "c"]);
        for n in [2u32, 3] {
            let circ = CliffordCircuit::new(n)
                .push(Gate::Cx("a".into(), "b".into()))
                .push(Gate::H("c".into()))
                .push(Gate::Cz("b".into(), "c".into()))
                .push(Gate::Czx("a".into(), "c".into()))
                .push(Gate::Hdag("a".into()))
                .push(Gate::Swap("a".into(), "b".into()))
                .push(Gate::Pauli(PauliTerm::single(n, "b", 1, 1)));
            let u = circ.matrix_on(&q).unwrap();
            assert!(u.is_unitary(1e-10));
            for (s, x, z) in [("a", 1, 0), ("a", 0, 1), ("b", 1, 1), ("c", 2, 1), ("c", 1, 0)] {
                let p = PauliTerm::single(n, s, x, z).with("b", 0, 1);
                let img = conjugate_by_circuit(&circ, &p).unwrap();
                let lhs = pauli_matrix_on(&img, &q).unwrap();
                let rhs = u.dag() * pauli_matrix_on(&p, &q).unwrap() * &u;
                assert!(lhs.approx_eq(&rhs, 1e-10), "n={n} {p} -> {img}");
            }
        }
    }

    #[test]
    fn grammar_round_trip() {
        let t = PauliTerm::parse(3, "w^5 X2@q3 Z1@q5").unwrap();
        assert_eq!(t.power("q3"), (2, 0));
        assert_eq!(t.phase_exponent(), 5);
        assert_eq!(PauliTerm::parse(3, &t.to_string()).unwrap(), t);
        let u = PauliTerm::parse(2, "Z@a X@a").unwrap();
        assert_eq!(u.to_string(), "w^4 X1@a Z1@a");
        assert!(PauliTerm::parse(2, "Q1@a").is_err());
        assert!(PauliTerm::parse(2, "X1").is_err());
    }

    #[test]
    fn dagger_and_hermitian() {
        let y = PauliTerm::single(2, "a", 1, 1).rephase(2);
        assert!(y.is_hermitian());
        let m = pauli_matrix_on(&y, &names(&["a"])).unwrap();
        assert!(m.approx_eq(&m.dag(), 1e-12));
        let t = PauliTerm::single(3, "a", 1, 2).rephase(3);
        let md = pauli_matrix_on(&t.dagger(), &names(&["a"])).unwrap();
        assert!(md.approx_eq(&pauli_matrix_on(&t, &names(&["a"])).unwrap().dag(), 1e-12));
    }
}
