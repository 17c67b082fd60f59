//! Domain-wall MPOs: the duality wall and its Z_N version, on-site catalog
//! walls, dense realizations, and insertion into PEPS networks.
//!
//! Every wall tensor carries labels `a_in, a_out` (wall-virtual) and
//! `in, out` (bond). As an operator the wall maps `in` to `out`.

use crate::error::{Error, Result};
use crate::harness::Outcome;
use crate::linalg::Mat;
use crate::pauli::{hadamard_mat, omega, x_mat};
use crate::peps::{Bond, Closure, Leg, PepsNetwork, WallInsertion, WallPiece};
use crate::tensor::Tensor;
use crate::C64;

/// Largest dense operator realized, as a Hilbert-space dimension.
pub const DENSE_CAP: usize = 4096;

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct WallMpo {
    pub name: String,
    pub tensors: Vec<Tensor>,
    pub closure: Closure,
    /// factor per tensor that turns the MPO into the normalized operator
    pub site_norm: f64,
}

/// `δ(a_out = a_in + x) ω^{s·z·a_out}` with `z = out`, `x = in`; `s = ±1`.
/// At N = 2 this is the duality wall tensor with H̃ = √2 H absorbed.
pub fn duality_tensor(n: u32, sign: i64) -> Tensor {
    let d = n as usize;
    let w = omega(n);
    Tensor::from_fn(vec!["a_in", "a_out", "in", "out"], vec![d; 4], |i| {
        let (a, b, x, z) = (i[0], i[1], i[2], i[3]);
        if b == (a + x) % d {
            w.powi((sign * (z * b) as i64).rem_euclid(d as i64) as i32)
        } else {
            ZERO
        }
    })
    .expect("valid shape")
}

/// Mirror image: the wall-virtual index runs the other way, so the chain
/// realizes `Z_j -> X_{j-1} X_j`.
pub fn reflected_duality_tensor() -> Tensor {
    Tensor::from_fn(vec!["a_in", "a_out", "in", "out"], vec![2; 4], |i| {
        let (a, b, x, z) = (i[0], i[1], i[2], i[3]);
        if a == (b + x) % 2 {
            C64::new(if z * a % 2 == 1 { -1.0 } else { 1.0 }, 0.0)
        } else {
            ZERO
        }
    })
    .expect("valid shape")
}

/// Conjugate the wall-virtual legs by `g`: `g · W · g^{-1}`.
pub fn gauge(t: &Tensor, g: &Mat, g_inv: &Mat) -> Result<Tensor> {
    let d = g.rows();
    let gl = Tensor::from_matrix(g, &[("a_in", d)], &[("__x", d)])?;
    let gr = Tensor::from_matrix(g_inv, &[("__y", d)], &[("a_out", d)])?;
    let t = gl.contract(&t.clone().relabel("a_in", "__x")?, &[("__x", "__x")])?;
    let t = t.relabel("a_out", "__y")?.contract(&gr, &[("__y", "__y")])?;
    t.permute(&["a_in", "a_out", "in", "out"])
}

/// Default open ends for the duality wall: `|0>` on the left and the
/// unnormalized `Σ|a>` on the right, which reproduces the open circuit.
pub fn open_ends(d: usize) -> Closure {
    let mut l = vec![ZERO; d];
    l[0] = ONE;
    Closure::Ends(l, vec![ONE; d])
}

impl WallMpo {
    pub fn uniform(name: &str, t: Tensor, n_sites: usize, closure: Closure, site_norm: f64) -> WallMpo {
        WallMpo { name: name.into(), tensors: vec![t; n_sites], closure, site_norm }
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn phys_dim(&self) -> usize {
        self.tensors[0].extent("in").expect("wall tensor has `in`")
    }

    pub fn bond_dim(&self) -> usize {
        self.tensors[0].extent("a_in").expect("wall tensor has `a_in`")
    }

    /// Conjugate transpose as an operator; the wall-virtual direction is kept.
    pub fn dagger(&self) -> WallMpo {
        let tensors = self
            .tensors
            .iter()
            .map(|t| {
                t.conj()
                    .relabel("in", "__t")
                    .and_then(|t| t.relabel("out", "in"))
                    .and_then(|t| t.relabel("__t", "out"))
                    .and_then(|t| t.permute(&["a_in", "a_out", "in", "out"]))
                    .expect("wall labels")
            })
            .collect();
        let closure = match &self.closure {
            Closure::Periodic => Closure::Periodic,
            Closure::Ends(l, r) => Closure::Ends(l.iter().map(|c| c.conj()).collect(), r.iter().map(|c| c.conj()).collect()),
        };
        WallMpo { name: format!("{}†", self.name), tensors, closure, site_norm: self.site_norm }
    }

    pub fn with_closure(mut self, closure: Closure) -> WallMpo {
        self.closure = closure;
        self
    }

    /// Contract the chain, leaving `out{j}` and `in{j}` legs.
    pub fn chain(&self) -> Result<Tensor> {
        let n = self.len();
        let d = self.phys_dim();
        if d.checked_pow(n as u32).map_or(true, |v| v > DENSE_CAP) {
            return Err(Error::Cap(format!("dense wall on {n} sites of dimension {d}")));
        }
        let mut acc: Option<Tensor> = None;
        for (j, t) in self.tensors.iter().enumerate() {
            let t = t
                .clone()
                .relabel("in", &format!("in{j}"))?
                .relabel("out", &format!("out{j}"))?
                .relabel("a_in", &format!("v{j}"))?
                .relabel("a_out", &format!("v{}", j + 1))?;
            acc = Some(match acc {
                None => t,
                Some(a) => {
                    let l = format!("v{j}");
                    a.contract(&t, &[(l.as_str(), l.as_str())])?
                }
            });
        }
        let mut a = acc.ok_or_else(|| Error::Precondition("empty wall".into()))?;
        let (first, last) = ("v0".to_string(), format!("v{n}"));
        a = match &self.closure {
            Closure::Periodic => a.trace(&first, &last)?,
            Closure::Ends(l, r) => {
                let lv = Tensor::new(vec![first.as_str()], vec![l.len()], l.clone())?;
                let rv = Tensor::new(vec![last.as_str()], vec![r.len()], r.clone())?;
                a.contract(&lv, &[(first.as_str(), first.as_str())])?.contract(&rv, &[(last.as_str(), last.as_str())])?
            }
        };
        Ok(a.scale(C64::new(self.site_norm.powi(n as i32), 0.0)))
    }

    /// Dense operator; rows are outputs, site 0 most significant.
    pub fn operator(&self) -> Result<Mat> {
        let n = self.len();
        let outs: Vec<String> = (0..n).map(|j| format!("out{j}")).collect();
        let ins: Vec<String> = (0..n).map(|j| format!("in{j}")).collect();
        let o: Vec<&str> = outs.iter().map(|s| s.as_str()).collect();
        let i: Vec<&str> = ins.iter().map(|s| s.as_str()).collect();
        self.chain()?.to_matrix(&o, &i)
    }

    /// Attach the wall to a network along `path`; each entry is a bond and
    /// whether the wall's inner side is the bond's low site.
    pub fn insertion(&self, path: &[(Bond, bool)]) -> Result<WallInsertion> {
        if path.len() != self.len() {
            return Err(Error::Precondition(format!("wall of length {} on a path of {}", self.len(), path.len())));
        }
        let pieces = path
            .iter()
            .zip(&self.tensors)
            .map(|(&(bond, inner_low), t)| WallPiece { bond, inner_low, tensor: t.scale(C64::new(self.site_norm, 0.0)) })
            .collect();
        Ok(WallInsertion { pieces, closure: self.closure.clone() })
    }

    pub fn apply(&self, net: PepsNetwork, path: &[(Bond, bool)]) -> Result<PepsNetwork> {
        if matches!(self.closure, Closure::Periodic) && !is_closed(net.lx, net.ly, path) {
            return Err(Error::Precondition("periodic wall needs a closed path".into()));
        }
        net.with_wall(self.insertion(path)?)
    }
}

/// Consecutive inner sites must coincide or neighbour, including the wrap.
fn is_closed(lx: usize, ly: usize, path: &[(Bond, bool)]) -> bool {
    let inner = |&(b, low): &(Bond, bool)| -> (usize, usize) {
        match (b, low) {
            (Bond::H(x, y), true) | (Bond::V(x, y), true) => (x, y),
            (Bond::H(x, y), false) => ((x + 1) % lx, y),
            (Bond::V(x, y), false) => (x, (y + 1) % ly),
        }
    };
    let near = |a: (usize, usize), b: (usize, usize)| {
        let dx = (a.0 + lx - b.0) % lx;
        let dy = (a.1 + ly - b.1) % ly;
        (dx == 0 || dx == 1 || dx + 1 == lx) && (dy == 0 || dy == 1 || dy + 1 == ly) && (dx == 0 || dy == 0)
    };
    !path.is_empty() && (0..path.len()).all(|k| near(inner(&path[k]), inner(&path[(k + 1) % path.len()])))
}

/// The toric-code duality wall on `n` bonds.
pub fn duality_wall(n: usize, closure: Closure) -> Result<WallMpo> {
    if n < 2 {
        return Err(Error::Precondition("wall needs at least 2 sites".into()));
    }
    Ok(WallMpo::uniform("D", duality_tensor(2, 1), n, closure, 1.0 / 2f64.sqrt()))
}

pub fn reflected_duality_wall(n: usize, closure: Closure) -> Result<WallMpo> {
    let mut w = duality_wall(n, closure)?;
    w.tensors = vec![reflected_duality_tensor(); n];
    w.name = "D-reflected".into();
    Ok(w)
}

/// Same wall with the Hadamard moved across the virtual bond.
pub fn gauge_duality_wall(n: usize, closure: Closure) -> Result<WallMpo> {
    let mut w = duality_wall(n, closure)?;
    let h = hadamard_mat(2);
    w.tensors = vec![gauge(&duality_tensor(2, 1), &h, &h.dag())?; n];
    w.name = "D-gauged".into();
    Ok(w)
}

/// Z_N duality wall: tensors alternate between H̃ and H̃† dressing.
pub fn zn_duality_wall(n_mod: u32, n: usize, closure: Closure) -> Result<WallMpo> {
    if n_mod < 2 {
        return Err(Error::Precondition("N must be >= 2".into()));
    }
    if n < 2 || n % 2 == 1 {
        return Err(Error::Precondition("Z_N wall needs an even number of sites".into()));
    }
    let tensors = (0..n).map(|j| duality_tensor(n_mod, if j % 2 == 0 { 1 } else { -1 })).collect();
    Ok(WallMpo { name: format!("D(Z{n_mod})"), tensors, closure, site_norm: 1.0 / (n_mod as f64).sqrt() })
}

/// A bond-dimension-1 wall: the same matrix on every bond.
pub fn onsite_wall(name: &str, v: &Mat, n: usize) -> Result<WallMpo> {
    let d = v.rows();
    let t = Tensor::from_fn(vec!["a_in", "a_out", "in", "out"], vec![1, 1, d, d], |i| v.get(i[3], i[2]))?;
    Ok(WallMpo::uniform(name, t, n, Closure::Periodic, 1.0))
}

/// Charge conjugation `H² = Σ|−j><j|`.
pub fn charge_conjugation(n: u32) -> Mat {
    let d = n as usize;
    Mat::from_fn(d, d, |r, c| if r == (d - c) % d { ONE } else { ZERO })
}

/// `Σ |nj><j|` over Z_p.
pub fn multiplier(p: u32, k: u32) -> Result<Mat> {
    if crate::anyons::modular_inverse(k, p).is_none() {
        return Err(Error::Precondition(format!("{k} is not invertible mod {p}")));
    }
    let d = p as usize;
    Ok(Mat::from_fn(d, d, |r, c| if r == (k as usize * c) % d { ONE } else { ZERO }))
}

/// Controlled X on a doubled bond (index `2·top + bottom`), controlled on top.
pub fn doubled_cx() -> Mat {
    Mat::from_fn(4, 4, |r, c| {
        let (t, b) = (c / 2, c % 2);
        if r == 2 * t + (b + t) % 2 {
            ONE
        } else {
            ZERO
        }
    })
}

pub fn doubled_swap() -> Mat {
    Mat::from_fn(4, 4, |r, c| if r == 2 * (c % 2) + c / 2 { ONE } else { ZERO })
}

/// The duality wall on the bottom layer of a doubled bond, identity on top.
pub fn w5_tensor() -> Result<Tensor> {
    let d = duality_tensor(2, 1);
    Tensor::from_fn(vec!["a_in", "a_out", "in", "out"], vec![2, 2, 4, 4], |i| {
        let (ti, bi, to, bo) = (i[2] / 2, i[2] % 2, i[3] / 2, i[3] % 2);
        if ti == to {
            d.get(&[i[0], i[1], bi, bo])
        } else {
            ZERO
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogWall {
    C(u32),
    Qn { p: u32, n: u32 },
    W1Tilde,
    W2,
    W5,
}

impl CatalogWall {
    pub fn parse(s: &str, modulus: u32) -> Result<CatalogWall> {
        match s {
            "C" => Ok(CatalogWall::C(modulus)),
            "W1" | "W1t" => Ok(CatalogWall::W1Tilde),
            "W2" => Ok(CatalogWall::W2),
            "W5" => Ok(CatalogWall::W5),
            _ => {
                let k = s
                    .strip_prefix('Q')
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Unknown(format!("wall {s}")))?;
                Ok(CatalogWall::Qn { p: modulus, n: k })
            }
        }
    }

    /// Per-bond matrix for the bond-dimension-1 walls.
    pub fn bond_matrix(&self) -> Result<Option<Mat>> {
        Ok(match self {
            CatalogWall::C(n) => Some(charge_conjugation(*n)),
            CatalogWall::Qn { p, n } => Some(multiplier(*p, *n)?),
            CatalogWall::W1Tilde => Some(doubled_cx()),
            CatalogWall::W2 => Some(doubled_swap()),
            CatalogWall::W5 => None,
        })
    }
}

pub fn catalog_wall(kind: &CatalogWall, n: usize, closure: Closure) -> Result<WallMpo> {
    match kind.bond_matrix()? {
        Some(v) => {
            let name = format!("{kind:?}");
            Ok(onsite_wall(&name, &v, n)?.with_closure(match closure {
                Closure::Periodic => Closure::Periodic,
                Closure::Ends(..) => Closure::Ends(vec![ONE], vec![ONE]),
            }))
        }
        None => Ok(WallMpo::uniform("W5", w5_tensor()?, n, closure, 1.0 / 2f64.sqrt())),
    }
}

/// Generalized X on the bottom layer of a doubled bond, for tests and
/// examples that move anyons across color-code walls.
pub fn bottom_x() -> Mat {
    Mat::eye(2).kron(&x_mat(2))
}

/// `op` on site `j` of `n` sites of dimension `d`.
pub fn embed(op: &Mat, j: usize, n: usize, d: usize) -> Mat {
    let mut m = Mat::eye(1);
    for k in 0..n {
        m = m.kron(&if k == j { op.clone() } else { Mat::eye(d) });
    }
    m
}

/// Product of single-site operators, `ops[j]` on site `j`.
pub fn product(ops: &[Mat]) -> Mat {
    ops.iter().fold(Mat::eye(1), |m, o| m.kron(o))
}

fn mul_all(ops: &[Mat]) -> Mat {
    ops.iter().skip(1).fold(ops[0].clone(), |m, o| &m * o)
}

/// Two wall tensors on one bond, the first acting first. Virtual legs of
/// the first become `a, a2`, of the second `b, b2`.
pub fn stacked(first: &Tensor, second: &Tensor) -> Result<Tensor> {
    let f = first.clone().relabel("a_in", "a")?.relabel("a_out", "a2")?.relabel("out", "__m")?;
    let s = second.clone().relabel("a_in", "b")?.relabel("a_out", "b2")?.relabel("in", "__m")?;
    f.contract(&s, &[("__m", "__m")])?.permute(&["a", "a2", "b", "b2", "in", "out"])
}

/// Mod-2 network: `XOR(a, in, a2) · XOR(b, out, b2) · δ(a2, b2)`.
pub fn xor_network() -> Result<Tensor> {
    use crate::tensor::{delta_tensor, xor_tensor};
    let x1 = xor_tensor(2)?.relabel("i", "a")?.relabel("j", "in")?.relabel("k", "k1")?;
    let x2 = xor_tensor(2)?.relabel("i", "b")?.relabel("j", "out")?.relabel("k", "k2")?;
    let d = delta_tensor(2, 4)?.relabel("i0", "k1")?.relabel("i1", "k2")?.relabel("i2", "a2")?.relabel("i3", "b2")?;
    let t = x1.contract(&d, &[("k1", "k1")])?.contract(&x2, &[("k2", "k2")])?;
    t.permute(&["a", "a2", "b", "b2", "in", "out"])
}

/// Chain `k` copies of a stacked tensor along the join.
pub fn join_chain(t: &Tensor, k: usize) -> Result<Tensor> {
    let mut acc = t.clone().relabel("in", "in0")?.relabel("out", "out0")?;
    for j in 1..k {
        let mut nxt = t.clone().relabel("in", &format!("in{j}"))?.relabel("out", &format!("out{j}"))?;
        nxt = nxt.relabel("a", "__a")?.relabel("b", "__b")?;
        acc = acc.relabel("a2", "__a")?.relabel("b2", "__b")?;
        acc = acc.contract(&nxt, &[("__a", "__a"), ("__b", "__b")])?;
    }
    Ok(acc)
}

fn relative_residual(a: &Tensor, b: &Tensor) -> Result<f64> {
    // distance of a from the best multiple of b
    let bb: f64 = b.data().iter().map(|x| x.norm_sqr()).sum();
    let ab: C64 = b.data().iter().zip(a.data()).map(|(y, x)| y.conj() * x).sum();
    let c = ab / bb;
    let r = a.sub(&b.scale(c))?;
    Ok(r.norm() / a.norm().max(1e-300))
}

/// D followed by D† on the bonds of a join equals the mod-2 network,
/// column by column and over a join of length two; D followed by D does not.
pub fn merge_identity_check(tol: f64) -> Result<Outcome> {
    use crate::tensor::equal_up_to_scalar;
    let mut out = Outcome::new();
    let d = duality_tensor(2, 1);
    let dd = duality_wall(2, Closure::Periodic)?.dagger().tensors[0].clone();
    let net = xor_network()?;
    for k in [1usize, 2] {
        let lhs = join_chain(&stacked(&d, &dd)?, k)?;
        let rhs = join_chain(&net, k)?;
        let rhs = rhs.permute(&lhs.labels().iter().map(|s| s.as_str()).collect::<Vec<_>>())?;
        match equal_up_to_scalar(&lhs, &rhs, tol)? {
            Some(c) => {
                out.value(&format!("join{k}.scalar.re"), c.re).value(&format!("join{k}.scalar.im"), c.im);
                out.require((c - C64::new(2f64.powi(k as i32), 0.0)).norm() < tol, "join scalar is 2 per column");
            }
            None => {
                out.require(false, &format!("join of length {k} differs from the mod-2 network"));
            }
        }
    }
    let n = 4;
    let w = duality_wall(n, Closure::Periodic)?.operator()?;
    let zs = product(&vec![crate::pauli::z_mat(2); n]);
    let dev = (&w.dag() * &w).max_abs_diff(&(&Mat::eye(1 << n) + &zs));
    out.close("periodic.projector_dev", dev, 0.0, tol);
    let same = stacked(&d, &d)?;
    let res = relative_residual(&same, &net)?;
    out.value("dd.residual", res);
    out.require(res > 0.1, "D merged with D should not give the mod-2 network");
    Ok(out)
}

/// `D†D` around a single site acts on its legs as `1 + Z^{⊗4}`, which is
/// twice the identity on the symmetric tensor.
pub fn bubble_site_scalar(site: &crate::peps::SiteTensor) -> Result<Option<C64>> {
    let legs = ["l", "u", "r", "d"];
    let phys: Vec<String> = (0..site.spins).map(|k| format!("p{k}")).collect();
    let pr: Vec<&str> = phys.iter().map(|s| s.as_str()).collect();
    let m = site.tensor.to_matrix(&legs, &pr)?;
    let w = duality_wall(4, Closure::Periodic)?.operator()?;
    let bubble = &w.dag() * &w;
    // the loop acts on the legs: A'[w] = Σ_v A[v] O[v, w]
    let moved = &bubble.transpose() * &m;
    Ok(moved.scalar_multiple_of(&m, 1e-10))
}

/// Closed path around the rectangle `[x0, x0+w) × [y0, y0+h)`, counter-
/// clockwise, as `(bond, inner side is low)`.
pub fn rect_loop(lx: usize, ly: usize, x0: usize, y0: usize, w: usize, h: usize) -> Vec<(Bond, bool)> {
    let xm = |d: isize| ((x0 as isize + d).rem_euclid(lx as isize)) as usize;
    let ym = |d: isize| ((y0 as isize + d).rem_euclid(ly as isize)) as usize;
    let mut p = vec![];
    for i in 0..w as isize {
        p.push((Bond::V(xm(i), ym(-1)), false));
    }
    for j in 0..h as isize {
        p.push((Bond::H(xm(w as isize - 1), ym(j)), true));
    }
    for i in (0..w as isize).rev() {
        p.push((Bond::V(xm(i), ym(h as isize - 1)), true));
    }
    for j in (0..h as isize).rev() {
        p.push((Bond::H(xm(-1), ym(j)), false));
    }
    p
}

/// Insert a `D` loop and then a `D†` loop on the same closed path.
pub fn with_bubble(net: PepsNetwork, path: &[(Bond, bool)]) -> Result<PepsNetwork> {
    let d = duality_wall(path.len(), Closure::Periodic)?;
    let net = d.apply(net, path)?;
    d.dagger().apply(net, path)
}

pub fn bubble_deformation_check(tol: f64) -> Result<Outcome> {
    use crate::peps::{overlap, toric_site_tensor};
    let mut out = Outcome::new();
    match bubble_site_scalar(&toric_site_tensor())? {
        Some(c) => {
            out.value("site.scalar", c.re);
            out.require((c - C64::new(2.0, 0.0)).norm() < tol, "single-site bubble scalar is 2");
        }
        None => {
            out.require(false, "single-site bubble is not proportional to the site");
        }
    }
    let base = PepsNetwork::torus(toric_site_tensor(), 3, 3)?.insert_e(&[Bond::H(0, 0), Bond::H(0, 1)], None)?;
    let nn = overlap(&base, &base, None)?;
    for (name, w, h) in [("site", 1, 1), ("pair", 2, 1)] {
        let b = with_bubble(base.clone(), &rect_loop(3, 3, 1, 2, w, h))?;
        let c = overlap(&base, &b, None)? / nn;
        let bb = overlap(&b, &b, None)? / nn;
        out.value(&format!("{name}.scalar"), c.re);
        out.require((c - C64::new(2.0, 0.0)).norm() < tol, &format!("{name} bubble gives twice the state"));
        out.require((bb - C64::new(4.0, 0.0)).norm() < tol, &format!("{name} bubble norm ratio 4"));
    }
    // a bubble around the e endpoint annihilates it: the wall must detour
    let hit = with_bubble(base.clone(), &rect_loop(3, 3, 0, 0, 1, 1))?;
    let z = overlap(&hit, &hit, None)? / nn;
    out.value("through_excitation.norm", z.re);
    out.require(z.norm() < tol, "bubble enclosing an e endpoint vanishes");
    let same = overlap(&base, &base, None)? / nn;
    out.close("zero_detour", same.re, 1.0, tol);
    Ok(out)
}

/// The X-basis controlled phase on `(a, b)` is the top-controlled X
/// dressed by a Hadamard on the control; ring circuits of it commute with
/// X on every other wire and prepare the cluster state from `|0…0>`.
pub fn spt_structure_check(tol: f64) -> Result<Outcome> {
    use crate::pauli::{CliffordCircuit, Gate, PauliTerm};
    let mut out = Outcome::new();
    let h = hadamard_mat(2);
    let cx = doubled_cx();
    let dressed = &(&h.kron(&Mat::eye(2)) * &cx) * &h.kron(&Mat::eye(2));
    let names = |k: usize| -> Vec<String> { (0..k).map(|j| format!("w{j}")).collect() };
    let two = names(2);
    let czx = CliffordCircuit::new(2).push(Gate::Czx(two[0].clone(), two[1].clone())).matrix_on(&two)?;
    out.close("gate.dev", dressed.max_abs_diff(&czx), 0.0, tol);

    for ring in [4usize, 6] {
        let w = names(ring);
        let mut c = CliffordCircuit::new(2);
        for j in 0..ring {
            c = c.push(Gate::Czx(w[j].clone(), w[(j + 1) % ring].clone()));
        }
        let u = c.matrix_on(&w)?;
        for parity in 0..2 {
            let g = pauli_dense(&PauliTerm::xs(2, &w.iter().skip(parity).step_by(2).collect::<Vec<_>>()), &w)?;
            let dev = (&u * &g).max_abs_diff(&(&g * &u));
            out.close(&format!("ring{ring}.commute{parity}"), dev, 0.0, tol);
        }
        let mut zero = vec![C64::new(0.0, 0.0); 1 << ring];
        zero[0] = C64::new(1.0, 0.0);
        let psi = u.apply(&zero);
        let mut worst: f64 = 0.0;
        for j in 0..ring {
            let t = PauliTerm::x(2, &w[(j + ring - 1) % ring]).with(&w[j], 0, 1).with(&w[(j + 1) % ring], 1, 0);
            let s = pauli_dense(&t, &w)?;
            let e = crate::linalg::inner(&psi, &s.apply(&psi));
            worst = worst.max((e - C64::new(1.0, 0.0)).norm());
        }
        out.close(&format!("ring{ring}.cluster_dev"), worst, 0.0, tol);
    }

    // top-layer content of the controlled X: only 1 and Z
    let paulis = [("I", Mat::eye(2)), ("X", x_mat(2)), ("Y", &x_mat(2) * &crate::pauli::z_mat(2)), ("Z", crate::pauli::z_mat(2))];
    let mut weight_xy = 0.0;
    for (name, p) in &paulis {
        for (_, q) in &paulis {
            let coeff = (&p.kron(q).dag() * &cx).trace().norm() / 4.0;
            if *name == "X" || *name == "Y" {
                weight_xy += coeff;
            }
        }
    }
    out.close("top_layer.xy_weight", weight_xy, 0.0, tol);
    Ok(out)
}

fn pauli_dense(t: &crate::pauli::PauliTerm, order: &[String]) -> Result<Mat> {
    let mut m = Mat::eye(1);
    for s in order {
        let (x, z) = t.power(s);
        let n = t.modulus();
        m = m.kron(&(&x_mat(n).pow(x as usize) * &crate::pauli::z_mat(n).pow(z as usize)));
    }
    Ok(m.scale(t.phase()))
}

/// Anyon image of `e^x m^z` per layer under an on-site wall `v`, read off
/// from `v P v^{-1}` for the generator Paulis. Coordinates are
/// `(e, m)` per layer.
pub fn onsite_images(v: &Mat, n: u32, layers: usize) -> Result<Vec<Vec<u32>>> {
    let single = |x: u32, z: u32| &x_mat(n).pow(x as usize) * &crate::pauli::z_mat(n).pow(z as usize);
    let all: Vec<Vec<u32>> = (0..(n as usize).pow(2 * layers as u32))
        .map(|mut k| {
            let mut c = vec![0u32; 2 * layers];
            for slot in c.iter_mut().rev() {
                *slot = (k % n as usize) as u32;
                k /= n as usize;
            }
            c
        })
        .collect();
    let dense = |c: &[u32]| -> Mat { (0..layers).fold(Mat::eye(1), |m, l| m.kron(&single(c[2 * l], c[2 * l + 1]))) };
    let inv = v.dag();
    let mut images = vec![];
    for g in 0..2 * layers {
        let mut c = vec![0u32; 2 * layers];
        c[g] = 1;
        let q = &(v * &dense(&c)) * &inv;
        let img = all
            .iter()
            .find(|cand| q.scalar_multiple_of(&dense(cand), 1e-9).is_some())
            .ok_or_else(|| Error::Precondition("wall does not map Paulis to Paulis".into()))?;
        images.push(img.clone());
    }
    Ok(images)
}

/// Label permutation induced by an on-site wall.
pub fn onsite_permutation(model: &crate::anyons::AnyonModel, v: &Mat) -> Result<Vec<usize>> {
    let n = model.moduli[0];
    let layers = model.moduli.len() / 2;
    let images = onsite_images(v, n, layers)?;
    (0..model.len())
        .map(|a| {
            let c = model.coords(a);
            let mut out = vec![0u32; c.len()];
            for (g, img) in images.iter().enumerate() {
                for k in 0..out.len() {
                    out[k] = (out[k] + c[g] * img[k]) % n;
                }
            }
            Ok(model.index(&out))
        })
        .collect()
}

/// Z_N duality tensor with independent signs for the accumulation and the
/// Fourier dressing: `δ(a_out = a_in + s_acc·x) ω^{s_f·z·a_out}`.
pub fn zn_duality_tensor(n: u32, s_acc: i64, s_f: i64) -> Tensor {
    let d = n as i64;
    let w = omega(n);
    Tensor::from_fn(vec!["a_in", "a_out", "in", "out"], vec![n as usize; 4], |i| {
        let (a, b, x, z) = (i[0] as i64, i[1] as i64, i[2] as i64, i[3] as i64);
        if b == (a + s_acc * x).rem_euclid(d) {
            w.powi((s_f * z * b).rem_euclid(d) as i32)
        } else {
            ZERO
        }
    })
    .expect("valid shape")
}

/// Inner and outer (site, leg) of a wall piece.
pub fn piece_legs(net: &PepsNetwork, piece: (Bond, bool)) -> (((usize, usize), Leg), ((usize, usize), Leg)) {
    let (lo, ll, hi, hl) = net.bond_ends(piece.0);
    if piece.1 {
        ((lo, ll), (hi, hl))
    } else {
        ((hi, hl), (lo, ll))
    }
}

/// +1 when the symmetry acts as Z on the inner leg (u, r), −1 for Z† (l, d).
pub fn inner_orientation(net: &PepsNetwork, piece: (Bond, bool)) -> i64 {
    match piece_legs(net, piece).0 .1 {
        Leg::U | Leg::R => 1,
        Leg::L | Leg::D => -1,
    }
}

/// Z_N duality wall fitted to a path: each piece follows the orientation
/// of the leg it meets, so the closed wall respects the Z_N Gauss law.
pub fn zn_wall_on_path(net: &PepsNetwork, path: &[(Bond, bool)], closure: Closure) -> WallMpo {
    let n = net.n();
    let tensors = path.iter().map(|&p| {
        let s = inner_orientation(net, p);
        zn_duality_tensor(n, s, s)
    });
    WallMpo { name: format!("D(Z{n})"), tensors: tensors.collect(), closure, site_norm: 1.0 / (n as f64).sqrt() }
}

/// Overlap of `wall · (inner operators)` with `(outer operators) · wall`,
/// normalized. Operators act on the bond space of the given piece.
pub fn transport_overlap(
    net: &PepsNetwork,
    wall: &WallMpo,
    path: &[(Bond, bool)],
    inner: &[(usize, Mat)],
    outer: &[(usize, Mat)],
) -> Result<C64> {
    let mut a = net.clone();
    for (k, op) in inner {
        let ((site, leg), _) = piece_legs(net, path[*k]);
        // a leg operator V acts on the leg vector as V^T
        a = a.with_leg_op(site, leg, op.transpose(), "in");
    }
    let a = wall.apply(a, path)?;
    let mut b = wall.apply(net.clone(), path)?;
    for (k, op) in outer {
        let (_, (site, leg)) = piece_legs(net, path[*k]);
        b = b.with_leg_op(site, leg, op.clone(), "out");
    }
    crate::peps::normalized_overlap(&a, &b)
}

/// e-pair inside a duality loop equals an m-string outside it.
pub fn duality_transport_check(tol: f64) -> Result<Outcome> {
    use crate::pauli::z_mat;
    use crate::peps::{normalized_overlap, toric_site_tensor, zn_site_tensor};
    let mut out = Outcome::new();
    let net = PepsNetwork::torus(toric_site_tensor(), 3, 3)?;
    let path = rect_loop(3, 3, 0, 0, 2, 2);
    let d = duality_wall(path.len(), Closure::Periodic)?;
    let x = x_mat(2);
    let z = z_mat(2);
    let c = transport_overlap(&net, &d, &path, &[(1, x.clone()), (4, x.clone())], &[(1, z.clone()), (2, z.clone()), (3, z.clone())])?;
    out.close("toric.e_to_m", c.norm(), 1.0, tol);
    // and the pushed state is a genuine excitation
    let mut e = net.clone();
    for k in [1usize, 4] {
        let ((site, leg), _) = piece_legs(&net, path[k]);
        e = e.with_leg_op(site, leg, x.clone(), "X");
    }
    let v = normalized_overlap(&d.apply(e, &path)?, &d.apply(net.clone(), &path)?)?;
    out.close("toric.orthogonal_to_wall_vacuum", v.norm(), 0.0, tol);
    // m-string inside becomes an e-pair outside
    let c = transport_overlap(&net, &d, &path, &[(2, z.clone()), (3, z.clone())], &[(1, x.clone()), (3, x.clone())])?;
    out.close("toric.m_to_e", c.norm(), 1.0, tol);

    // Z_3 on a single-site loop
    let n3 = PepsNetwork::torus(zn_site_tensor(3)?, 3, 3)?;
    let path = rect_loop(3, 3, 1, 1, 1, 1);
    let w = zn_wall_on_path(&n3, &path, Closure::Periodic);
    let s: Vec<i64> = path.iter().map(|&p| inner_orientation(&n3, p)).collect();
    let xp = |k: i64| x_mat(3).pow(k.rem_euclid(3) as usize);
    let zp = |k: i64| z_mat(3).pow(k.rem_euclid(3) as usize);
    let (j, k) = (0usize, 2usize);
    let inner = vec![(j, xp(s[j])), (k, xp(-s[k]))];
    let outer: Vec<(usize, Mat)> = (j..k).map(|i| (i, zp(-s[i]))).collect();
    let c = transport_overlap(&n3, &w, &path, &inner, &outer)?;
    out.close("z3.e_to_m", c.norm(), 1.0, tol);
    let c = transport_overlap(&n3, &w, &path, &inner, &[])?;
    out.close("z3.without_string", c.norm(), 0.0, tol);
    Ok(out)
}

/// A W2 loop turns a top-layer e-pair into a bottom-layer e-pair.
pub fn swap_transport_check(tol: f64) -> Result<Outcome> {
    use crate::peps::color_site_tensor;
    let mut out = Outcome::new();
    let net = PepsNetwork::torus(color_site_tensor(), 3, 3)?;
    let path = rect_loop(3, 3, 0, 0, 2, 2);
    let w = catalog_wall(&CatalogWall::W2, path.len(), Closure::Periodic)?;
    let xt = x_mat(2).kron(&Mat::eye(2));
    let xb = bottom_x();
    let c = transport_overlap(&net, &w, &path, &[(1, xt.clone()), (4, xt.clone())], &[(1, xb.clone()), (4, xb.clone())])?;
    out.close("eT_to_eB", c.norm(), 1.0, tol);
    let c = transport_overlap(&net, &w, &path, &[(1, xt.clone()), (4, xt.clone())], &[(1, xt.clone()), (4, xt)])?;
    out.close("eT_stays_eT", c.norm(), 0.0, tol);
    Ok(out)
}

/// Dense Z_N wall checks: reduction to N=2, the closed-wall projector and
/// the charge-to-string relation.
pub fn zn_wall_check(tol: f64) -> Result<Outcome> {
    use crate::pauli::z_mat;
    let mut out = Outcome::new();
    let a = zn_duality_wall(2, 4, Closure::Periodic)?.operator()?;
    let b = duality_wall(4, Closure::Periodic)?.operator()?;
    let r = a.scalar_multiple_of(&b, tol);
    out.require(r.is_some(), "Z_2 wall differs from D");
    out.value("n2.ratio", r.map_or(f64::NAN, |c| c.norm()));

    let (p, n) = (3u32, 4usize);
    let w = zn_duality_wall(p, n, Closure::Periodic)?;
    let m = w.operator()?;
    let dd = &m.dag() * &m;
    let sym = (0..p as usize).fold(Mat::zeros(81, 81), |acc, g| {
        let zg = z_mat(p).pow(g);
        &acc + &(0..n).fold(Mat::eye(1), |t, _| t.kron(&zg))
    });
    let r = dd.scalar_multiple_of(&sym, tol);
    out.require(r.is_some(), "D†D is not proportional to the symmetry sum");
    out.value("z3.projector_scale", r.map_or(f64::NAN, |c| c.norm()));

    let x = x_mat(p);
    let z = z_mat(p);
    for (j, k) in [(0usize, 2usize), (1, 3), (0, 3)] {
        let lhs = &m * &mul_all(&[embed(&x, j, n, 3), embed(&x.pow(2), k, n, 3)]);
        let string: Vec<Mat> = (j..k)
            .map(|i| {
                // the Fourier sign alternates, so the string alternates Z and Z†
                let e = if i % 2 == 0 { 2 } else { 1 };
                embed(&z.pow(e), i, n, 3)
            })
            .collect();
        let rhs = &mul_all(&string) * &m;
        out.close(&format!("z3.e{j}{k}_to_m"), lhs.max_abs_diff(&rhs), 0.0, tol);
    }
    Ok(out)
}

/// Induced label permutations of the catalog walls against the catalog.
pub fn catalog_permutation_check(tol: f64) -> Result<Outcome> {
    use crate::anyons::{build_color_code, build_zn_double, Generator};
    let mut out = Outcome::new();
    let mut cmp = |key: &str, model: &crate::anyons::AnyonModel, v: &Mat, g: Generator| -> Result<()> {
        let got = onsite_permutation(model, v)?;
        let want = g.permutation(model)?;
        out.require(got == want, &format!("{key}: induced {got:?}, catalog {want:?}"));
        out.value(key, if got == want { 1.0 } else { 0.0 });
        Ok(())
    };
    for p in [3u32, 5, 7] {
        let model = build_zn_double(p)?;
        cmp(&format!("C.z{p}"), &model, &charge_conjugation(p), Generator::C)?;
        for k in 2..p {
            cmp(&format!("Q{k}.z{p}"), &model, &multiplier(p, k)?, Generator::Qn(k))?;
        }
    }
    let color = build_color_code();
    cmp("W1t", &color, &doubled_cx(), Generator::W1Tilde)?;
    cmp("W2", &color, &doubled_swap(), Generator::W2)?;

    // W5 is an MPO: check its action on bottom charges and top Paulis densely
    let n = 3;
    let m = catalog_wall(&CatalogWall::W5, n, Closure::Periodic)?.operator()?;
    let xb = bottom_x();
    let zb = Mat::eye(2).kron(&crate::pauli::z_mat(2));
    let xt = x_mat(2).kron(&Mat::eye(2));
    let lhs = &m * &mul_all(&[embed(&xb, 0, n, 4), embed(&xb, 2, n, 4)]);
    let rhs = &mul_all(&[embed(&zb, 0, n, 4), embed(&zb, 1, n, 4)]) * &m;
    out.close("W5.eB_to_mB", lhs.max_abs_diff(&rhs), 0.0, tol);
    let lhs = &m * &embed(&xt, 1, n, 4);
    let rhs = &embed(&xt, 1, n, 4) * &m;
    out.close("W5.top_untouched", lhs.max_abs_diff(&rhs), 0.0, tol);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{duality_circuit, z_mat};

    #[test]
    fn open_wall_is_the_circuit() {
        for n in 2..=6 {
            let d = duality_wall(n, open_ends(2)).unwrap().operator().unwrap();
            let sites: Vec<String> = (1..=n).map(|k| format!("q{k}")).collect();
            let c = duality_circuit(&sites).matrix_on(&sites).unwrap();
            assert!(d.max_abs_diff(&c) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn periodic_projector() {
        for n in 2..=8 {
            let d = duality_wall(n, Closure::Periodic).unwrap().operator().unwrap();
            let zs = (1..n).fold(z_mat(2), |a, _| a.kron(&z_mat(2)));
            let want = &Mat::eye(1 << n) + &zs;
            assert!((&d.dag() * &d).max_abs_diff(&want) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn gauge_and_reflection() {
        let d = duality_wall(4, Closure::Periodic).unwrap().operator().unwrap();
        let g = gauge_duality_wall(4, Closure::Periodic).unwrap().operator().unwrap();
        assert!(d.max_abs_diff(&g) < 1e-10);
        let r = reflected_duality_wall(4, Closure::Periodic).unwrap().operator().unwrap();
        assert!(d.max_abs_diff(&r) > 0.1);
    }
}
