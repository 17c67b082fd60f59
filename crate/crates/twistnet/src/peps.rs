//! Fixed-point PEPS on a square grid of plaquette-blocked sites.
//!
//! Site `(x, y)` has virtual legs `l, u, r, d` (u points towards y+1) and
//! physical spins `p0..p3` sitting between consecutive legs: `p0` between
//! l and u, `p1` between u and r, `p2` between r and d, `p3` between d and l.
//! The toric tensor is 1 iff
//!
//! ```text
//! l = p3 + p0,  u = p0 + p1,  r = p1 + p2,  d = p2 + p3   (mod 2)
//! ```
//!
//! and the Z_N tensor (l, d incoming, u, r outgoing) is 1 iff
//!
//! ```text
//! l = p3 + p0,  u = p0 - p1,  r = p1 + p2,  d = p2 - p3   (mod N)
//! ```
//!
//! The color-code tensor stacks two toric tensors, top spins `p0..p3`,
//! bottom spins `p4..p7`, virtual index `2·top + bottom`.
//!
//! Bonds: `H(x, y)` joins `(x, y).r` to `(x+1, y).l`; `V(x, y)` joins
//! `(x, y).u` to `(x, y+1).d`. The left/lower site is the bond's low side.
//!
//! Physical spins are named `q{x}.{y}.{k}` in Pauli terms.

use num_complex::Complex64 as C64;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::pauli::{pauli_matrix_on, x_mat, z_mat, PauliTerm};
use crate::tensor::Tensor;

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Largest boundary map the transfer contraction will hold.
pub const TRANSFER_CAP: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Leg {
    L,
    U,
    R,
    D,
}

impl Leg {
    pub const ALL: [Leg; 4] = [Leg::L, Leg::U, Leg::R, Leg::D];
    pub fn name(self) -> &'static str {
        match self {
            Leg::L => "l",
            Leg::U => "u",
            Leg::R => "r",
            Leg::D => "d",
        }
    }
    pub fn index(self) -> usize {
        match self {
            Leg::L => 0,
            Leg::U => 1,
            Leg::R => 2,
            Leg::D => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bond {
    H(usize, usize),
    V(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteKind {
    Toric,
    Zn(u32),
    Color,
}

#[derive(Clone, Debug)]
pub struct SiteTensor {
    pub kind: SiteKind,
    /// local dimension of each physical spin
    pub n: u32,
    pub virt_dim: usize,
    pub spins: usize,
    /// labels `l u r d p0 .. p{spins-1}`
    pub tensor: Tensor,
}

fn site_labels(spins: usize) -> Vec<String> {
    let mut v: Vec<String> = ["l", "u", "r", "d"].iter().map(|s| s.to_string()).collect();
    v.extend((0..spins).map(|k| format!("p{k}")));
    v
}

fn zn_legs(n: usize, p: &[usize]) -> [usize; 4] {
    [
        (p[3] + p[0]) % n,
        (p[0] + n - p[1]) % n,
        (p[1] + p[2]) % n,
        (p[2] + n - p[3]) % n,
    ]
}

pub fn zn_site_tensor(n: u32) -> Result<SiteTensor> {
    if n < 2 {
        return Err(Error::Precondition("N must be >= 2".into()));
    }
    let nn = n as usize;
    let t = Tensor::from_fn(site_labels(4), vec![nn; 8], |i| {
        if zn_legs(nn, &i[4..8]) == [i[0], i[1], i[2], i[3]] {
            ONE
        } else {
            ZERO
        }
    })?;
    Ok(SiteTensor { kind: if n == 2 { SiteKind::Toric } else { SiteKind::Zn(n) }, n, virt_dim: nn, spins: 4, tensor: t })
}

pub fn toric_site_tensor() -> SiteTensor {
    let t = Tensor::from_fn(site_labels(4), vec![2; 8], |i| {
        let p = &i[4..8];
        let legs = [(p[3] + p[0]) % 2, (p[0] + p[1]) % 2, (p[1] + p[2]) % 2, (p[2] + p[3]) % 2];
        if legs == [i[0], i[1], i[2], i[3]] {
            ONE
        } else {
            ZERO
        }
    })
    .unwrap();
    SiteTensor { kind: SiteKind::Toric, n: 2, virt_dim: 2, spins: 4, tensor: t }
}

pub fn color_site_tensor() -> SiteTensor {
    let t = Tensor::from_fn(site_labels(8), [vec![4; 4], vec![2; 8]].concat(), |i| {
        let top = zn_legs(2, &i[4..8]);
        let bot = zn_legs(2, &i[8..12]);
        if (0..4).all(|k| i[k] == 2 * top[k] + bot[k]) {
            ONE
        } else {
            ZERO
        }
    })
    .unwrap();
    SiteTensor { kind: SiteKind::Color, n: 2, virt_dim: 4, spins: 8, tensor: t }
}

impl SiteTensor {
    /// Virtual Z generators of the symmetry, one per layer: Z on outgoing
    /// legs (u, r) and Z† on incoming legs (l, d).
    pub fn symmetry_generators(&self) -> Vec<[Mat; 4]> {
        let n = self.n;
        let z = z_mat(n);
        match self.kind {
            SiteKind::Color => {
                let i2 = Mat::eye(2);
                let zt = z.kron(&i2);
                let zb = i2.kron(&z);
                vec![[zt.clone(), zt.clone(), zt.clone(), zt], [zb.clone(), zb.clone(), zb.clone(), zb]]
            }
            _ => vec![[z.dag(), z.clone(), z.clone(), z.dag()]],
        }
    }

    /// Apply one matrix per virtual leg: `A ↦ A ∘ (V_l ⊗ V_u ⊗ V_r ⊗ V_d)`.
    pub fn act_virtual(&self, ops: &[Mat; 4]) -> Result<Tensor> {
        let mut t = self.tensor.clone();
        for (leg, op) in Leg::ALL.iter().zip(ops) {
            t = leg_apply(&t, leg.name(), op)?;
        }
        Ok(t)
    }

    /// The virtual → physical map as a matrix (rows physical).
    pub fn as_map(&self) -> Result<Mat> {
        let phys: Vec<String> = (0..self.spins).map(|k| format!("p{k}")).collect();
        let rows: Vec<&str> = phys.iter().map(|s| s.as_str()).collect();
        self.tensor.to_matrix(&rows, &["l", "u", "r", "d"])
    }

    pub fn injectivity_rank(&self) -> Result<usize> {
        Ok(self.as_map()?.rank(1e-9))
    }
}

/// `A'[.., w, ..] = Σ_v A[.., v, ..] V[v, w]` on the labelled leg.
pub fn leg_apply(t: &Tensor, label: &str, v: &Mat) -> Result<Tensor> {
    let d = t.extent(label)?;
    if v.rows() != d || v.cols() != d {
        return Err(Error::Shape(format!("operator of size {} on leg of extent {d}", v.rows())));
    }
    let vt = Tensor::from_matrix(v, &[("__v", d)], &[("__w", d)])?;
    let out = t.contract(&vt, &[(label, "__v")])?.relabel("__w", label)?;
    let order: Vec<&str> = t.labels().iter().map(|s| s.as_str()).collect();
    out.permute(&order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Torus,
    /// every boundary leg projected onto |0>
    Open,
    /// boundary legs summed over; e charges can end there
    Absorbing,
}

/// One piece of a wall: a four-leg tensor with labels `a_in, a_out`
/// (wall-virtual) and `in, out` (bond). `in` meets the inner site's leg,
/// `out` faces the outer site.
#[derive(Clone, Debug)]
pub struct WallPiece {
    pub bond: Bond,
    /// true when the inner side of the wall is the bond's low (left/lower) site
    pub inner_low: bool,
    pub tensor: Tensor,
}

#[derive(Clone, Debug)]
pub enum Closure {
    Periodic,
    Ends(Vec<C64>, Vec<C64>),
}

#[derive(Clone, Debug)]
pub struct WallInsertion {
    pub pieces: Vec<WallPiece>,
    pub closure: Closure,
}

#[derive(Clone, Debug)]
pub struct LegOp {
    pub site: (usize, usize),
    pub leg: Leg,
    pub op: Mat,
    pub name: String,
}

#[derive(Clone, Debug)]
pub struct PepsNetwork {
    pub lx: usize,
    pub ly: usize,
    pub boundary: Boundary,
    pub site: SiteTensor,
    pub legs: Vec<LegOp>,
    pub walls: Vec<WallInsertion>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    Top,
    Bottom,
}

pub fn qubit(x: usize, y: usize, k: usize) -> String {
    format!("q{x}.{y}.{k}")
}

impl PepsNetwork {
    pub fn assemble(site: SiteTensor, lx: usize, ly: usize, boundary: Boundary) -> Result<PepsNetwork> {
        if lx < 2 || ly < 2 {
            return Err(Error::Precondition("lattice must be at least 2x2".into()));
        }
        Ok(PepsNetwork { lx, ly, boundary, site, legs: vec![], walls: vec![] })
    }

    pub fn torus(site: SiteTensor, lx: usize, ly: usize) -> Result<PepsNetwork> {
        Self::assemble(site, lx, ly, Boundary::Torus)
    }

    pub fn n(&self) -> u32 {
        self.site.n
    }

    pub fn bond_exists(&self, b: Bond) -> bool {
        match (b, self.boundary) {
            (Bond::H(x, y), Boundary::Torus) | (Bond::V(x, y), Boundary::Torus) => x < self.lx && y < self.ly,
            (Bond::H(x, y), _) => x + 1 < self.lx && y < self.ly,
            (Bond::V(x, y), _) => x < self.lx && y + 1 < self.ly,
        }
    }

    pub fn bonds(&self) -> Vec<Bond> {
        let mut v = vec![];
        for x in 0..self.lx {
            for y in 0..self.ly {
                for b in [Bond::H(x, y), Bond::V(x, y)] {
                    if self.bond_exists(b) {
                        v.push(b);
                    }
                }
            }
        }
        v
    }

    /// (low site, low leg, high site, high leg)
    pub fn bond_ends(&self, b: Bond) -> ((usize, usize), Leg, (usize, usize), Leg) {
        match b {
            Bond::H(x, y) => ((x, y), Leg::R, ((x + 1) % self.lx, y), Leg::L),
            Bond::V(x, y) => ((x, y), Leg::U, (x, (y + 1) % self.ly), Leg::D),
        }
    }

    pub fn bond_at(&self, site: (usize, usize), leg: Leg) -> Option<Bond> {
        let (x, y) = site;
        let b = match leg {
            Leg::R => Bond::H(x, y),
            Leg::U => Bond::V(x, y),
            Leg::L => Bond::H((x + self.lx - 1) % self.lx, y),
            Leg::D => Bond::V(x, (y + self.ly - 1) % self.ly),
        };
        let edge = match (leg, self.boundary) {
            (_, Boundary::Torus) => false,
            (Leg::L, _) => x == 0,
            (Leg::R, _) => x + 1 == self.lx,
            (Leg::D, _) => y == 0,
            (Leg::U, _) => y + 1 == self.ly,
        };
        (!edge).then_some(b)
    }

    pub fn spins(&self) -> usize {
        self.lx * self.ly * self.site.spins
    }

    pub fn qubits(&self) -> Vec<String> {
        let mut v = vec![];
        for x in 0..self.lx {
            for y in 0..self.ly {
                for k in 0..self.site.spins {
                    v.push(qubit(x, y, k));
                }
            }
        }
        v
    }

    pub fn with_leg_op(mut self, site: (usize, usize), leg: Leg, op: Mat, name: &str) -> Self {
        self.legs.push(LegOp { site, leg, op, name: name.into() });
        self
    }

    /// Leg operator on the low-side leg of a bond.
    pub fn with_bond_op(self, b: Bond, op: Mat, name: &str) -> Result<Self> {
        if !self.bond_exists(b) {
            return Err(Error::Precondition(format!("bond {b:?} does not exist")));
        }
        let (lo, leg, _, _) = self.bond_ends(b);
        Ok(self.with_leg_op(lo, leg, op, name))
    }

    pub fn with_wall(mut self, w: WallInsertion) -> Result<Self> {
        for p in &w.pieces {
            if !self.bond_exists(p.bond) {
                return Err(Error::Precondition(format!("wall crosses missing bond {:?}", p.bond)));
            }
        }
        self.walls.push(w);
        Ok(self)
    }

    /// Generalized X on one layer of a bond (virtual), e.g. an e endpoint.
    pub fn layer_op(&self, base: &Mat, layer: Option<Layer>) -> Mat {
        match (self.site.kind, layer) {
            (SiteKind::Color, Some(Layer::Top)) | (SiteKind::Color, None) => base.kron(&Mat::eye(2)),
            (SiteKind::Color, Some(Layer::Bottom)) => Mat::eye(2).kron(base),
            _ => base.clone(),
        }
    }

    /// e-pair (or single e): X on each listed bond.
    pub fn insert_e(self, bonds: &[Bond], layer: Option<Layer>) -> Result<Self> {
        let x = self.layer_op(&x_mat(self.n()), layer);
        bonds.iter().try_fold(self, |net, &b| net.with_bond_op(b, x.clone(), "X"))
    }

    /// m-pair: Z on every bond of a dual path. For N > 2 a bond's power
    /// follows the path direction given by the sign.
    pub fn insert_m(self, path: &[(Bond, i32)], layer: Option<Layer>) -> Result<Self> {
        let z = z_mat(self.n());
        let n = self.n() as i32;
        path.iter().try_fold(self, |net, &(b, s)| {
            let op = net.layer_op(&z.pow(s.rem_euclid(n) as usize), layer);
            net.with_bond_op(b, op, "Z")
        })
    }

    pub(crate) fn site_ket(&self, x: usize, y: usize) -> Result<Tensor> {
        let mut t = self.site.tensor.clone();
        for op in self.legs.iter().filter(|o| o.site == (x, y)) {
            t = leg_apply(&t, op.leg.name(), &op.op)?;
        }
        Ok(t)
    }

    /// Per-site ket tensors with all insertions absorbed, fused to a sparse
    /// form whose virtual dims agree across every bond.
    pub fn effective(&self) -> Result<Vec<Vec<Effective>>> {
        let mut t: Vec<Vec<Tensor>> = (0..self.lx)
            .map(|x| (0..self.ly).map(|y| self.site_ket(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        // link label -> sites carrying it
        let mut hosts: HashMap<String, Vec<(usize, usize)>> = HashMap::new();
        for (wi, w) in self.walls.iter().enumerate() {
            let k = w.pieces.len();
            for (pi, p) in w.pieces.iter().enumerate() {
                let (lo, lleg, hi, hleg) = self.bond_ends(p.bond);
                let (site, leg) = if p.inner_low { (lo, lleg) } else { (hi, hleg) };
                let a_in = format!("w{wi}:{pi}");
                let a_out = match w.closure {
                    Closure::Periodic => format!("w{wi}:{}", (pi + 1) % k),
                    Closure::Ends(..) => format!("w{wi}:{}", pi + 1),
                };
                let mut piece = p.tensor.clone().relabel("a_in", &a_in)?.relabel("a_out", &a_out)?;
                if let Closure::Ends(left, right) = &w.closure {
                    if pi == 0 {
                        let v = Tensor::new(vec![a_in.as_str()], vec![left.len()], left.clone())?;
                        piece = piece.contract(&v, &[(a_in.as_str(), a_in.as_str())])?;
                    }
                    if pi + 1 == k {
                        let v = Tensor::new(vec![a_out.as_str()], vec![right.len()], right.clone())?;
                        piece = piece.contract(&v, &[(a_out.as_str(), a_out.as_str())])?;
                    }
                }
                let cur = &t[site.0][site.1];
                let mut pairs: Vec<(String, String)> = vec![(leg.name().into(), "in".into())];
                for l in piece.labels() {
                    if l.starts_with('w') && cur.labels().contains(l) {
                        pairs.push((l.clone(), l.clone()));
                    }
                }
                let pr: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                let merged = cur.contract(&piece, &pr)?.relabel("out", leg.name())?;
                t[site.0][site.1] = merged;
                for l in [&a_in, &a_out] {
                    let closed_end = matches!(w.closure, Closure::Ends(..))
                        && ((l == &a_in && pi == 0) || (l == &a_out && pi + 1 == k));
                    if !closed_end {
                        hosts.entry(l.clone()).or_default().push(site);
                    }
                }
            }
        }
        // route links: trace within a site or fuse onto a shared bond
        let mut extra: HashMap<((usize, usize), Leg), Vec<String>> = HashMap::new();
        let mut names: Vec<&String> = hosts.keys().collect();
        names.sort();
        for name in names {
            let h = &hosts[name];
            if h.len() != 2 {
                return Err(Error::Precondition(format!("wall link {name} has {} ends", h.len())));
            }
            let (a, b) = (h[0], h[1]);
            if a == b {
                // both pieces sit on this site and were traced while merging
                continue;
            }
            let leg = Leg::ALL
                .iter()
                .copied()
                .find(|&lg| self.bond_at(a, lg).map(|bd| self.bond_ends(bd)).map_or(false, |(lo, _, hi, _)| {
                    (lo == a && hi == b && matches!(lg, Leg::R | Leg::U)) || (hi == a && lo == b && matches!(lg, Leg::L | Leg::D))
                }))
                .ok_or_else(|| Error::Precondition(format!("wall link {name} joins non-adjacent sites")))?;
            let other = match leg {
                Leg::L => Leg::R,
                Leg::R => Leg::L,
                Leg::U => Leg::D,
                Leg::D => Leg::U,
            };
            let (la, lb) = (format!("{name}@a"), format!("{name}@b"));
            t[a.0][a.1] = t[a.0][a.1].clone().relabel(name, &la)?;
            t[b.0][b.1] = t[b.0][b.1].clone().relabel(name, &lb)?;
            extra.entry((a, leg)).or_default().push(la);
            extra.entry((b, other)).or_default().push(lb);
        }
        let mut out = Vec::with_capacity(self.lx);
        for x in 0..self.lx {
            let mut col = Vec::with_capacity(self.ly);
            for y in 0..self.ly {
                let mut tt = t[x][y].clone();
                for leg in Leg::ALL {
                    if self.bond_at((x, y), leg).is_none() {
                        let d = tt.extent(leg.name())?;
                        let e0 = match self.boundary {
                            Boundary::Absorbing => vec![ONE; d],
                            _ => (0..d).map(|i| if i == 0 { ONE } else { ZERO }).collect(),
                        };
                        let v = Tensor::new(vec!["__b"], vec![d], e0)?;
                        tt = tt.contract(&v, &[(leg.name(), "__b")])?;
                        tt = tt.contract(&Tensor::new(vec![leg.name()], vec![1], vec![ONE])?, &[])?;
                    }
                }
                let mut order: Vec<String> = vec![];
                let mut dims = [1usize; 4];
                for leg in Leg::ALL {
                    let mut group = vec![leg.name().to_string()];
                    if let Some(ex) = extra.get(&((x, y), leg)) {
                        let mut ex = ex.clone();
                        ex.sort_by_key(|s| s.trim_end_matches("@a").trim_end_matches("@b").to_string());
                        group.extend(ex);
                    }
                    for g in &group {
                        dims[leg.index()] *= tt.extent(g)?;
                    }
                    order.extend(group);
                }
                let phys: Vec<String> = (0..self.site.spins).map(|k| format!("p{k}")).collect();
                order.extend(phys.iter().cloned());
                if let Some(l) = tt.labels().iter().find(|l| !order.contains(l)) {
                    return Err(Error::Precondition(format!("unrouted label {l}")));
                }
                let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
                let dense = tt.permute(&refs)?;
                let p: usize = (self.site.n as usize).pow(self.site.spins as u32);
                col.push(Effective::from_dense(dims, p, dense.data()));
            }
            out.push(col);
        }
        Ok(out)
    }
}

/// Sparse ket tensor of one site: virtual dims `[l, u, r, d]` and a fused
/// physical index.
#[derive(Clone, Debug)]
pub struct Effective {
    pub dims: [usize; 4],
    pub phys: usize,
    pub entries: Vec<([u32; 4], u32, C64)>,
}

impl Effective {
    fn from_dense(dims: [usize; 4], phys: usize, data: &[C64]) -> Effective {
        let mut entries = vec![];
        let mut flat = 0;
        for l in 0..dims[0] {
            for u in 0..dims[1] {
                for r in 0..dims[2] {
                    for d in 0..dims[3] {
                        for p in 0..phys {
                            let v = data[flat];
                            flat += 1;
                            if v.norm() > 1e-14 {
                                entries.push(([l as u32, u as u32, r as u32, d as u32], p as u32, v));
                            }
                        }
                    }
                }
            }
        }
        Effective { dims, phys, entries }
    }

    /// Apply a physical operator to the ket.
    pub fn apply(&self, op: &Mat) -> Effective {
        let mut acc: HashMap<([u32; 4], u32), C64> = HashMap::new();
        for &(v, q, val) in &self.entries {
            for p in 0..self.phys {
                let o = op.get(p, q as usize);
                if o != ZERO {
                    *acc.entry((v, p as u32)).or_insert(ZERO) += o * val;
                }
            }
        }
        let mut entries: Vec<_> = acc.into_iter().filter(|(_, v)| v.norm() > 1e-14).map(|((v, p), x)| (v, p, x)).collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Effective { dims: self.dims, phys: self.phys, entries }
    }
}

/// Double-layer site tensor, fused index `ket·D_bra + bra` per leg.
struct DoubleSite {
    by_l: HashMap<u32, Vec<(u32, u32, u32, C64)>>,
    by_ld: HashMap<(u32, u32), Vec<(u32, u32, C64)>>,
}

fn double_site(bra: &Effective, ket: &Effective) -> Result<DoubleSite> {
    if bra.phys != ket.phys {
        return Err(Error::Shape("physical dimension mismatch".into()));
    }
    let mut bra_by_p: HashMap<u32, Vec<([u32; 4], C64)>> = HashMap::new();
    for &(v, p, x) in &bra.entries {
        bra_by_p.entry(p).or_default().push((v, x.conj()));
    }
    let mut acc: HashMap<[u32; 4], C64> = HashMap::new();
    for &(vk, p, xk) in &ket.entries {
        if let Some(list) = bra_by_p.get(&p) {
            for &(vb, xb) in list {
                let mut f = [0u32; 4];
                for k in 0..4 {
                    f[k] = vk[k] * bra.dims[k] as u32 + vb[k];
                }
                *acc.entry(f).or_insert(ZERO) += xk * xb;
            }
        }
    }
    let mut keys: Vec<_> = acc.into_iter().filter(|(_, v)| v.norm() > 1e-15).collect();
    keys.sort_by_key(|(k, _)| *k);
    let mut by_l: HashMap<u32, Vec<(u32, u32, u32, C64)>> = HashMap::new();
    let mut by_ld: HashMap<(u32, u32), Vec<(u32, u32, C64)>> = HashMap::new();
    for (f, v) in keys {
        by_l.entry(f[0]).or_default().push((f[3], f[1], f[2], v));
        by_ld.entry((f[0], f[3])).or_default().push((f[1], f[2], v));
    }
    Ok(DoubleSite { by_l, by_ld })
}

type Key = (Vec<u32>, Vec<u32>);

/// `<bra|obs|ket>` by exact column-by-column transfer contraction.
pub fn overlap(bra: &PepsNetwork, ket: &PepsNetwork, obs: Option<&PauliTerm>) -> Result<C64> {
    if (bra.lx, bra.ly) != (ket.lx, ket.ly) || bra.boundary != ket.boundary {
        return Err(Error::Shape("networks differ in geometry".into()));
    }
    let eb = bra.effective()?;
    let ek = ket.effective()?;
    let sites = double_sites(&eb, &ek)?;
    match obs {
        None => transfer(&eb, &ek, &sites),
        Some(o) => observed(ket, &eb, &ek, &sites, o),
    }
}

fn double_sites(eb: &[Vec<Effective>], ek: &[Vec<Effective>]) -> Result<Vec<Vec<DoubleSite>>> {
    eb.iter().zip(ek).map(|(cb, ck)| cb.iter().zip(ck).map(|(b, k)| double_site(b, k)).collect()).collect()
}

/// Overlap with `obs` applied to the ket, rebuilding only the touched sites.
fn observed(
    ket: &PepsNetwork,
    eb: &[Vec<Effective>],
    ek: &[Vec<Effective>],
    base: &[Vec<DoubleSite>],
    o: &PauliTerm,
) -> Result<C64> {
    for s in o.sites().keys() {
        if !ket.qubits().contains(s) {
            return Err(Error::Label(format!("observable site {s} not in network")));
        }
    }
    let mut touched: HashMap<(usize, usize), DoubleSite> = HashMap::new();
    for x in 0..ket.lx {
        for y in 0..ket.ly {
            let names: Vec<String> = (0..ket.site.spins).map(|k| qubit(x, y, k)).collect();
            let local = o.restrict(|s| names.iter().any(|n| n == s));
            if !local.unphased().is_identity() {
                let m = pauli_matrix_on(&local.unphased(), &names)?;
                touched.insert((x, y), double_site(&eb[x][y], &ek[x][y].apply(&m))?);
            }
        }
    }
    let sites: Vec<Vec<&DoubleSite>> = (0..ket.lx)
        .map(|x| (0..ket.ly).map(|y| touched.get(&(x, y)).unwrap_or(&base[x][y])).collect())
        .collect();
    transfer_refs(eb, ek, &sites)
}

fn transfer(eb: &[Vec<Effective>], ek: &[Vec<Effective>], sites: &[Vec<DoubleSite>]) -> Result<C64> {
    let refs: Vec<Vec<&DoubleSite>> = sites.iter().map(|c| c.iter().collect()).collect();
    transfer_refs(eb, ek, &refs)
}

fn transfer_refs(eb: &[Vec<Effective>], ek: &[Vec<Effective>], sites: &[Vec<&DoubleSite>]) -> Result<C64> {
    let (lx, ly) = (ek.len(), ek[0].len());
    // double dims on the left legs of each column
    let ldim = |x: usize| -> Vec<usize> { (0..ly).map(|y| eb[x][y].dims[0] * ek[x][y].dims[0]).collect() };
    let start = (0..lx).min_by_key(|&x| ldim(x).iter().product::<usize>()).unwrap();
    let sd = ldim(start);
    let total: usize = sd.iter().product();
    let mut state: HashMap<Key, C64> = HashMap::with_capacity(total);
    let mut idx = vec![0u32; ly];
    for flat in 0..total {
        let mut f = flat;
        for y in (0..ly).rev() {
            idx[y] = (f % sd[y]) as u32;
            f /= sd[y];
        }
        state.insert((idx.clone(), idx.clone()), ONE);
    }
    for step in 0..lx {
        let x = (start + step) % lx;
        let col = &sites[x];
        let mut cache: HashMap<Vec<u32>, Vec<(Vec<u32>, C64)>> = HashMap::new();
        let mut next: HashMap<Key, C64> = HashMap::new();
        for ((s, cur), amp) in state {
            let row = cache.entry(cur.clone()).or_insert_with(|| column_row(col, &cur));
            for (r, v) in row.iter() {
                *next.entry((s.clone(), r.clone())).or_insert(ZERO) += amp * v;
            }
            if next.len() > TRANSFER_CAP {
                return Err(Error::Cap(format!("transfer map exceeds {TRANSFER_CAP} entries")));
            }
        }
        state = next;
    }
    Ok(state.into_iter().filter(|((s, c), _)| s == c).map(|(_, v)| v).sum())
}

fn column_row(col: &[&DoubleSite], left: &[u32]) -> Vec<(Vec<u32>, C64)> {
    let ly = col.len();
    // (d of first site, u of previous site, right legs so far)
    let mut states: HashMap<(u32, u32, Vec<u32>), C64> = HashMap::new();
    if let Some(list) = col[0].by_l.get(&left[0]) {
        for &(d, u, r, v) in list {
            *states.entry((d, u, vec![r])).or_insert(ZERO) += v;
        }
    }
    for y in 1..ly {
        let mut nxt: HashMap<(u32, u32, Vec<u32>), C64> = HashMap::new();
        for ((d0, up, rs), amp) in states {
            if let Some(list) = col[y].by_ld.get(&(left[y], up)) {
                for &(u, r, v) in list {
                    let mut rr = rs.clone();
                    rr.push(r);
                    *nxt.entry((d0, u, rr)).or_insert(ZERO) += amp * v;
                }
            }
        }
        states = nxt;
    }
    let mut out: HashMap<Vec<u32>, C64> = HashMap::new();
    for ((d0, up, rs), amp) in states {
        if d0 == up {
            *out.entry(rs).or_insert(ZERO) += amp;
        }
    }
    let mut v: Vec<_> = out.into_iter().filter(|(_, a)| a.norm() > 1e-15).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

pub fn norm_sqr(net: &PepsNetwork) -> Result<f64> {
    let n = overlap(net, net, None)?;
    Ok(n.re)
}

/// `<ψ|obs|ψ> / <ψ|ψ>`.
pub fn expectation(net: &PepsNetwork, obs: &PauliTerm) -> Result<C64> {
    let nrm = overlap(net, net, None)?;
    if nrm.norm() < 1e-12 {
        return Err(Error::ZeroNorm);
    }
    Ok(overlap(net, net, Some(obs))? * obs.phase() / nrm)
}

/// Expectations of many terms, sharing one contraction setup.
pub fn expectations(net: &PepsNetwork, obs: &[PauliTerm]) -> Result<Vec<C64>> {
    let e = net.effective()?;
    let sites = double_sites(&e, &e)?;
    let nrm = transfer(&e, &e, &sites)?;
    if nrm.norm() < 1e-12 {
        return Err(Error::ZeroNorm);
    }
    obs.iter().map(|o| Ok(observed(net, &e, &e, &sites, o)? * o.phase() / nrm)).collect()
}

/// `<a|b> / sqrt(<a|a><b|b>)`.
pub fn normalized_overlap(a: &PepsNetwork, b: &PepsNetwork) -> Result<C64> {
    let na = overlap(a, a, None)?.re;
    let nb = overlap(b, b, None)?.re;
    if na < 1e-12 || nb < 1e-12 {
        return Err(Error::ZeroNorm);
    }
    Ok(overlap(a, b, None)? / (na * nb).sqrt())
}

/// Dense state vector over spins ordered site by site (x major, then y,
/// then spin index), for small networks.
pub fn state_vector(net: &PepsNetwork) -> Result<Vec<C64>> {
    let eff = net.effective()?;
    let p = eff[0][0].phys;
    let nsites = net.lx * net.ly;
    let dim = (p as f64).powi(nsites as i32);
    if dim > (1u64 << 22) as f64 {
        return Err(Error::Cap("state vector too large".into()));
    }
    let mut acc: Option<Tensor> = None;
    for x in 0..net.lx {
        for y in 0..net.ly {
            let e = &eff[x][y];
            let mut labels = vec![];
            for leg in Leg::ALL {
                labels.push(match net.bond_at((x, y), leg) {
                    Some(b) => {
                        let (lo, _, _, _) = net.bond_ends(b);
                        let side = if lo == (x, y) && matches!(leg, Leg::R | Leg::U) { "lo" } else { "hi" };
                        // a bond whose both ends are this site (width 1) is not supported
                        format!("{b:?}:{side}")
                    }
                    None => format!("edge{x}.{y}.{}", leg.name()),
                });
            }
            labels.push(format!("s{x}.{y}"));
            let mut shape: Vec<usize> = e.dims.to_vec();
            shape.push(e.phys);
            let mut t = Tensor::zeros(labels.clone(), shape)?;
            for &(v, ph, val) in &e.entries {
                t.set(&[v[0] as usize, v[1] as usize, v[2] as usize, v[3] as usize, ph as usize], val);
            }
            acc = Some(match acc {
                None => t,
                Some(a) => {
                    let mut pairs = vec![];
                    for l in a.labels() {
                        if let Some(stem) = l.strip_suffix(":lo") {
                            let partner = format!("{stem}:hi");
                            if t.labels().contains(&partner) {
                                pairs.push((l.clone(), partner));
                            }
                        } else if let Some(stem) = l.strip_suffix(":hi") {
                            let partner = format!("{stem}:lo");
                            if t.labels().contains(&partner) {
                                pairs.push((l.clone(), partner));
                            }
                        }
                    }
                    let pr: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                    a.contract(&t, &pr)?
                }
            });
        }
    }
    let mut a = acc.unwrap();
    // edge legs have extent 1
    let edges: Vec<String> = a.labels().iter().filter(|l| l.starts_with("edge")).cloned().collect();
    for l in edges {
        a = a.contract(&Tensor::new(vec![l.as_str()], vec![1], vec![ONE])?, &[(l.as_str(), l.as_str())])?;
    }
    let order: Vec<String> = (0..net.lx).flat_map(|x| (0..net.ly).map(move |y| format!("s{x}.{y}"))).collect();
    let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    Ok(a.permute(&refs)?.data().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn same(a: &Tensor, b: &Tensor) -> bool {
        a.sub(b).unwrap().norm() < 1e-12
    }

    #[test]
    fn toric_tensor_invariants() {
        let s = toric_site_tensor();
        assert_eq!(s.tensor.get(&[0; 8]), ONE);
        let g = &s.symmetry_generators()[0];
        assert!(same(&s.act_virtual(g).unwrap(), &s.tensor));
        assert_eq!(s.injectivity_rank().unwrap(), 8);
        let z2 = zn_site_tensor(2).unwrap();
        assert_eq!(z2.tensor, s.tensor);
    }

    #[test]
    fn zn_and_color_ranks() {
        let z3 = zn_site_tensor(3).unwrap();
        assert!(same(&z3.act_virtual(&z3.symmetry_generators()[0]).unwrap(), &z3.tensor));
        assert_eq!(z3.injectivity_rank().unwrap(), 27);
        let c = color_site_tensor();
        for g in c.symmetry_generators() {
            assert!(same(&c.act_virtual(&g).unwrap(), &c.tensor));
        }
        assert_eq!(c.injectivity_rank().unwrap(), 64);
    }

    #[test]
    fn torus_norm_positive() {
        let net = PepsNetwork::torus(toric_site_tensor(), 2, 2).unwrap();
        assert!(norm_sqr(&net).unwrap() > 0.0);
    }
}
