//! Twist defects: open walls whose ends carry a definite generalized charge.

use crate::error::{Error, Result};
use crate::harness::Outcome;
use crate::linalg::{cyclic_eigenvectors, inner, Mat};
use crate::pauli::{x_mat, z_mat, PauliTerm};
use crate::peps::{
    color_site_tensor, expectation, normalized_overlap, overlap, qubit, toric_site_tensor, zn_site_tensor, Boundary, Bond, Closure, Layer,
    PepsNetwork, SiteTensor,
};
use crate::stabilizers::standard_registry;
use crate::tableau::{network_group, SPauli};
use crate::walls::{
    catalog_wall, duality_wall, piece_legs, transport_overlap, zn_wall_on_path, CatalogWall, WallMpo,
};
use crate::C64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Walls that can end in twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistWall {
    Duality,
    W1Tilde,
    W2,
    W5,
}

impl TwistWall {
    pub fn parse(s: &str) -> Result<TwistWall> {
        match s {
            "D" => Ok(TwistWall::Duality),
            "W1" | "W1t" => Ok(TwistWall::W1Tilde),
            "W2" => Ok(TwistWall::W2),
            "W5" => Ok(TwistWall::W5),
            _ => Err(Error::Unknown(format!("twist wall {s}"))),
        }
    }

    /// Dimension of the end vectors; 1 for walls of bond dimension 1.
    pub fn end_dim(&self, n: u32) -> usize {
        match self {
            TwistWall::Duality => n as usize,
            TwistWall::W5 => 2,
            _ => 1,
        }
    }

    pub fn site(&self, n: u32) -> Result<SiteTensor> {
        match (self, n) {
            (TwistWall::Duality, 2) => Ok(toric_site_tensor()),
            (TwistWall::Duality, _) => zn_site_tensor(n),
            (_, 2) => Ok(color_site_tensor()),
            _ => Err(Error::Precondition("color-code walls are qubit walls".into())),
        }
    }
}

/// An open wall along row `y` crossing `V(x0, y) .. V(x0 + len - 1, y)`,
/// inner side below. Corner `(x, y)` is the top-right corner of site
/// `(x, y)`; the first end vector sits at `corners[0]`.
#[derive(Clone, Debug)]
pub struct TwistLine {
    pub path: Vec<(Bond, bool)>,
    pub corners: [(usize, usize); 2],
}

impl TwistLine {
    pub fn horizontal(x0: usize, y: usize, len: usize) -> Result<TwistLine> {
        if x0 == 0 || len == 0 {
            return Err(Error::Precondition("the left twist needs a corner left of the first piece".into()));
        }
        Ok(TwistLine { path: (0..len).map(|k| (Bond::V(x0 + k, y), true)).collect(), corners: [(x0 - 1, y), (x0 + len - 1, y)] })
    }

    pub fn wall(&self, net: &PepsNetwork, kind: TwistWall, low: &[C64], high: &[C64]) -> Result<WallMpo> {
        let len = self.path.len();
        let closure = Closure::Ends(low.to_vec(), high.to_vec());
        match kind {
            TwistWall::Duality if net.n() == 2 => duality_wall(len, closure),
            TwistWall::Duality => Ok(zn_wall_on_path(net, &self.path, closure)),
            TwistWall::W1Tilde => catalog_wall(&CatalogWall::W1Tilde, len, closure),
            TwistWall::W2 => catalog_wall(&CatalogWall::W2, len, closure),
            TwistWall::W5 => catalog_wall(&CatalogWall::W5, len, closure),
        }
    }

    pub fn insert(&self, net: &PepsNetwork, kind: TwistWall, low: &[C64], high: &[C64]) -> Result<PepsNetwork> {
        self.wall(net, kind, low, high)?.apply(net.clone(), &self.path)
    }

    /// Sites on the outer side of the pieces.
    pub fn outer_sites(&self, net: &PepsNetwork) -> Vec<(usize, usize)> {
        self.path.iter().map(|&p| piece_legs(net, p).1 .0).collect()
    }
}

/// The `lx × 2` patch with summed boundary legs used for twist checks.
pub fn twist_patch(site: SiteTensor, lx: usize) -> Result<PepsNetwork> {
    PepsNetwork::assemble(site, lx, 2, Boundary::Absorbing)
}

/// Spins meeting at a corner, all layers.
pub fn corner_spins(net: &PepsNetwork, corner: (usize, usize)) -> Vec<String> {
    let (x, y) = corner;
    let (x1, y1) = ((x + 1) % net.lx, (y + 1) % net.ly);
    let mut out = vec![];
    for l in 0..net.site.spins / 4 {
        for (s, k) in [((x, y), 1), ((x1, y), 0), ((x, y1), 2), ((x1, y1), 3)] {
            out.push(qubit(s.0, s.1, k + 4 * l));
        }
    }
    out
}

/// e-loop (the face term) and m-loop (the four stars on the bonds meeting
/// there) around a corner of a single-layer model.
pub fn corner_loops(net: &PepsNetwork, corner: (usize, usize)) -> Result<(PauliTerm, PauliTerm)> {
    let (x, y) = corner;
    let reg = standard_registry(net);
    let find = |name: String| -> Result<PauliTerm> {
        reg.terms
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.op.clone())
            .ok_or_else(|| Error::Precondition(format!("no term {name} on this network")))
    };
    let e = find(format!("face({x},{y})"))?;
    let (x1, y1) = ((x + 1) % net.lx, (y + 1) % net.ly);
    let mut m = PauliTerm::identity(net.n());
    for b in [Bond::H(x, y), Bond::H(x, y1), Bond::V(x, y), Bond::V(x1, y)] {
        m = m.mul(&find(format!("star{b:?}"))?)?;
    }
    Ok((e, m))
}

pub fn basis(d: usize, j: usize) -> Vec<C64> {
    (0..d).map(|i| if i == j { ONE } else { ZERO }).collect()
}

/// Operator `E` with `act(ψ_j) = Σ_i ψ_i E_ij` on a family of states,
/// from Gram matrices. The residual is the largest relative weight of
/// `act(ψ_j)` outside the family.
pub fn induced_operator<F>(states: &[PepsNetwork], act: F) -> Result<(Mat, f64)>
where
    F: Fn(&PepsNetwork) -> Result<PepsNetwork>,
{
    let d = states.len();
    let moved: Vec<PepsNetwork> = states.iter().map(&act).collect::<Result<_>>()?;
    let mut g = Mat::zeros(d, d);
    let mut h = Mat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g.set(i, j, overlap(&states[i], &states[j], None)?);
            h.set(i, j, overlap(&states[i], &moved[j], None)?);
        }
    }
    let e = g.solve(&h, 1e-9 * g.norm()).ok_or(Error::ZeroNorm)?;
    let captured = &(&e.dag() * &g) * &e;
    let mut residual: f64 = 0.0;
    for (j, m) in moved.iter().enumerate() {
        let full = overlap(m, m, None)?.re;
        residual = residual.max((full - captured.get(j, j).re).abs() / full.max(f64::MIN_POSITIVE));
    }
    Ok((e, residual))
}

/// Split `m ≈ a ⊗ b` (dimensions `d × d` each). `a` is scaled to a unitary
/// norm with its first sizeable entry real positive; the scalar goes to `b`.
/// Returns `(a, b, residual)`.
pub fn split_kron(m: &Mat, d: usize) -> (Mat, Mat, f64) {
    let (mut best, mut at) = (0.0, (0, 0));
    for r in 0..d * d {
        for c in 0..d * d {
            if m.get(r, c).norm() > best {
                best = m.get(r, c).norm();
                at = (r, c);
            }
        }
    }
    let (j0, l0) = (at.0 % d, at.1 % d);
    let mut a = Mat::from_fn(d, d, |i, k| m.get(i * d + j0, k * d + l0));
    let scale = ((&a.dag() * &a).trace().re / d as f64).sqrt();
    let lead = a.data().iter().copied().find(|v| v.norm() > 1e-9 * scale).unwrap_or(ONE);
    a = a.scale(lead.conj() / (lead.norm() * scale));
    let (i0, k0) = (at.0 / d, at.1 / d);
    let b = Mat::from_fn(d, d, |j, l| m.get(i0 * d + j, k0 * d + l) / a.get(i0, k0));
    let residual = m.max_abs_diff(&a.kron(&b)) / best;
    (a, b, residual)
}

/// End-level action of anyons on a wall with nontrivial ends, measured on
/// a network.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub kind: TwistWall,
    pub n: u32,
    /// e absorbed into the left end from the inner side
    pub e_op: Mat,
    /// left and right factors of an m carried along the wall between the ends
    pub m_op: Mat,
    pub m_far: Mat,
    pub residual: f64,
}

impl EndAlgebra {
    /// The double braid seen by the left end vector: the e crosses the wall
    /// and comes back as an m.
    pub fn matching(&self) -> Mat {
        &self.m_op * &self.e_op
    }
}

/// The patch and line used for end-vector measurements: 5 × 2, wall across
/// `V(1,0), V(2,0)`, twists at corners `(0,0)` and `(2,0)`.
pub fn end_setup(kind: TwistWall, n: u32) -> Result<(PepsNetwork, TwistLine)> {
    Ok((twist_patch(kind.site(n)?, 5)?, TwistLine::horizontal(1, 0, 2)?))
}

fn charge_layer(kind: TwistWall) -> Option<Layer> {
    (kind == TwistWall::W5).then_some(Layer::Bottom)
}

/// Measure the e and m absorption operators of a twist-carrying wall.
pub fn end_algebra(kind: TwistWall, n: u32) -> Result<EndAlgebra> {
    let d = kind.end_dim(n);
    if d < 2 {
        return Err(Error::Precondition(format!("{kind:?} has one-dimensional ends")));
    }
    let (net, line) = end_setup(kind, n)?;
    let far = basis(d, 0);
    let left: Vec<PepsNetwork> = (0..d).map(|j| line.insert(&net, kind, &basis(d, j), &far)).collect::<Result<_>>()?;
    let ((site, leg), _) = piece_legs(&net, line.path[0]);
    let layer = charge_layer(kind);
    // a leg operator V acts on the leg vector as V^T
    let xt = net.layer_op(&x_mat(n).transpose(), layer);
    let (e_op, r1) = induced_operator(&left, |s| Ok(s.clone().with_leg_op(site, leg, xt.clone(), "e")))?;

    let mut pair = vec![];
    for i in 0..d {
        for j in 0..d {
            pair.push(line.insert(&net, kind, &basis(d, i), &basis(d, j))?);
        }
    }
    let (m_pair, r2) = induced_operator(&pair, |s| Ok(m_along(&net, &line, kind, s.clone())))?;
    let (m_op, m_far, r3) = split_kron(&m_pair, d);
    Ok(EndAlgebra { kind, n, e_op, m_op, m_far, residual: r1.max(r2).max(r3) })
}

/// Z on the inner leg of every piece: an m dragged from one end to the other.
fn m_along(net: &PepsNetwork, line: &TwistLine, kind: TwistWall, s: PepsNetwork) -> PepsNetwork {
    let z = net.layer_op(&z_mat(net.n()), charge_layer(kind));
    line.path.iter().fold(s, |acc, &p| {
        let (site, leg) = piece_legs(net, p).0;
        acc.with_leg_op(site, leg, z.clone(), "m")
    })
}

/// A charge-definite twist end.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistEnd {
    pub vector: Vec<C64>,
    pub species: String,
    /// eigenvalue of the end-matching operator
    pub lambda: C64,
    pub bond: Option<Bond>,
}

/// Every charge-definite end of a wall: eigenvectors of the end-matching
/// operator, labelled along the chain of e absorptions. For qubit walls the
/// labels are `σ+` (XZ eigenvalue −i) and `σ−`.
pub fn find_end_vectors(kind: TwistWall, n: u32) -> Result<Vec<TwistEnd>> {
    static CACHE: OnceLock<Mutex<HashMap<(TwistWall, u32), Vec<TwistEnd>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache").get(&(kind, n)) {
        return Ok(v.clone());
    }
    let v = compute_end_vectors(kind, n)?;
    cache.lock().expect("cache").insert((kind, n), v.clone());
    Ok(v)
}

fn compute_end_vectors(kind: TwistWall, n: u32) -> Result<Vec<TwistEnd>> {
    if kind.end_dim(n) == 1 {
        return Ok(vec![TwistEnd { vector: vec![ONE], species: "σ".into(), lambda: ONE, bond: None }]);
    }
    let alg = end_algebra(kind, n)?;
    let (_, line) = end_setup(kind, n)?;
    let eig = cyclic_eigenvectors(&alg.matching(), n as usize);
    if eig.len() != n as usize {
        return Err(Error::Precondition("end-matching operator has a degenerate spectrum".into()));
    }
    let xz = &x_mat(n) * &z_mat(n);
    let start = if n == 2 {
        eig.iter().position(|(_, v)| (inner(v, &xz.apply(v)) - C64::new(0.0, -1.0)).norm() < 1e-9).unwrap_or(0)
    } else {
        0
    };
    let mut out: Vec<TwistEnd> = vec![];
    let mut cur = start;
    for j in 0..n as usize {
        let species = match (n, j) {
            (2, 0) => "σ+".to_string(),
            (2, _) => "σ−".to_string(),
            _ => format!("σ{j}"),
        };
        let (lambda, v) = eig[cur].clone();
        let next = alg.e_op.apply(&v);
        out.push(TwistEnd { vector: v, species, lambda, bond: Some(line.path[0].0) });
        cur = eig.iter().position(|(_, w)| inner(w, &next).norm() > 1.0 - 1e-9).ok_or(Error::Precondition(
            "e absorption leaves the set of charge-definite ends".into(),
        ))?;
    }
    if cur != start {
        return Err(Error::Precondition("e absorption does not cycle the species".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Absorbed {
    E,
    M,
}

/// Fuse an anyon into an end: the new species and the phase picked up.
pub fn fuse_twist_anyon(alg: &EndAlgebra, ends: &[TwistEnd], end: &TwistEnd, anyon: Absorbed) -> Result<(TwistEnd, C64)> {
    let op = match anyon {
        Absorbed::E => &alg.e_op,
        Absorbed::M => &alg.m_op,
    };
    let w = op.apply(&end.vector);
    for t in ends {
        let ph = inner(&t.vector, &w);
        if (ph.norm() - 1.0).abs() < 1e-9 {
            return Ok((t.clone(), ph));
        }
    }
    Err(Error::Precondition("absorption leaves the set of charge-definite ends".into()))
}

/// All spins of the four sites around a corner.
pub fn corner_block(net: &PepsNetwork, corner: (usize, usize)) -> Vec<String> {
    let (x, y) = corner;
    let mut out = vec![];
    for (sx, sy) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
        if sx < net.lx && sy < net.ly {
            out.extend((0..net.site.spins).map(|k| qubit(sx, sy, k)));
        }
    }
    out
}

/// Lightest Pauli on `region` that stabilizes `state` and has sign −1 on
/// `flipped`: the loop that reads out the charge distinguishing the two.
pub fn charge_loop(state: &PepsNetwork, flipped: &PepsNetwork, region: &[String]) -> Result<PauliTerm> {
    let g = network_group(state)?;
    let h = network_group(flipped)?;
    let idx: Vec<usize> = region.iter().filter_map(|q| g.index(q)).collect();
    let gens = g.local(&idx);
    if gens.len() > 20 {
        return Err(Error::Precondition("region too large for exhaustive search".into()));
    }
    let mut best: Option<SPauli> = None;
    for mask in 1u32..(1 << gens.len()) {
        let p = (0..gens.len())
            .filter(|k| mask >> k & 1 == 1)
            .fold(SPauli::identity(g.qubits.len()), |acc, k| acc.mul(&gens[k]));
        if best.as_ref().is_some_and(|b| b.weight() <= p.weight()) {
            continue;
        }
        if h.sign_of(&p.to_term(&g.qubits))? == Some(-1) {
            best = Some(p);
        }
    }
    best.map(|p| p.to_term(&g.qubits)).ok_or_else(|| Error::Precondition("no local operator tells the two apart".into()))
}

/// λ with `loop ψ = λ ψ` when it holds; `|λ| < 1` otherwise.
pub fn double_braid_check(net: &PepsNetwork, braid: &PauliTerm) -> Result<C64> {
    expectation(net, braid)
}

/// Residual operator left when a twist ending a D wall meets one ending a
/// D† wall laid over the same bonds. The fused ends sit on the first site,
/// the merged wall bonds `(α, β)` continue past the last one. The residual
/// is `R_{αβ} = Σ_g link[(α,β), g] · ends[g] ⊗ bulk[g]^{⊗(len-1)}`.
#[derive(Clone, Debug)]
pub struct FusionWitness {
    pub n: u32,
    pub bulk: Vec<Mat>,
    /// rows `(α, β)` with α major, one column per residual bond value
    pub link: Mat,
    pub ends: Vec<Mat>,
    /// anyon name and weight, in residual-bond order
    pub channels: Vec<(String, f64)>,
    /// largest entrywise misfit of the factorized form
    pub residual: f64,
}

impl FusionWitness {
    /// The link in the Bell basis of the merged bond, `(1 ⊗ H) · CX(β → α)`,
    /// which is the basis where it is a 4 × 2 selection of unit vectors.
    /// Qubit walls only.
    pub fn bell_link(&self) -> Result<Mat> {
        if self.n != 2 {
            return Err(Error::Precondition("Bell-basis link is for qubit walls".into()));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let cx = Mat::real(4, 4, &[1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0.]);
        let h = Mat::real(2, 2, &[s, s, s, -s]);
        Ok(&(&Mat::eye(2).kron(&h) * &cx) * &self.link)
    }

    /// Bell-basis link with unit entries, the phases moved into the ends,
    /// and the overall scalar that was divided out.
    pub fn bell_form(&self) -> Result<(Mat, Vec<Mat>, C64)> {
        let mut link = self.bell_link()?;
        let mut ends = self.ends.clone();
        for (g, end) in ends.iter_mut().enumerate() {
            let r = (0..4).max_by(|&i, &j| link.get(i, g).norm().partial_cmp(&link.get(j, g).norm()).unwrap()).unwrap();
            let c = link.get(r, g);
            if c.norm() < 1e-12 {
                continue;
            }
            *end = end.scale(c);
            for i in 0..4 {
                link.set(i, g, link.get(i, g) / c);
            }
        }
        let lead = ends[0].data().iter().copied().find(|c| c.norm() > 1e-9).unwrap_or(ONE);
        let s = lead / lead.norm();
        Ok((link, ends.iter().map(|e| e.scale(s.inv())).collect(), s))
    }
}

/// Name of `e^a m^g`.
pub fn anyon_name(a: usize, g: usize) -> String {
    let part = |s: &str, k: usize| match k {
        0 => String::new(),
        1 => s.to_string(),
        _ => format!("{s}^{k}"),
    };
    let name = part("e", a) + &part("m", g);
    if name.is_empty() {
        "1".into()
    } else {
        name
    }
}

fn line_wall(n: u32, len: usize, closure: Closure) -> WallMpo {
    WallMpo::uniform("D", crate::walls::zn_duality_tensor(n, 1, 1), len, closure, 1.0 / (n as f64).sqrt())
}

/// Fuse a twist ending a D wall (`a`) with one ending a D† wall (`b`) on
/// `len` sites and read off the anyon channels. Two D walls fuse only with
/// `allow_translation`, since their product carries a lattice translation.
pub fn fuse_twists(n: u32, a: &TwistEnd, b: &TwistEnd, len: usize, opposite: bool, allow_translation: bool) -> Result<FusionWitness> {
    if !opposite && !allow_translation {
        return Err(Error::Precondition(
            "fusing two D twists hides a translation; pass the translation flag to proceed".into(),
        ));
    }
    let d = n as usize;
    let sites = d.pow(len as u32);
    let (x, z) = (x_mat(n), z_mat(n));
    let r: Vec<Mat> = (0..d * d)
        .map(|ab| {
            let w = line_wall(n, len, Closure::Ends(a.vector.clone(), basis(d, ab / d))).operator()?;
            let v = line_wall(n, len, Closure::Ends(b.vector.clone(), basis(d, ab % d)));
            let v = if opposite { v.dagger() } else { v.with_closure(Closure::Ends(b.vector.clone(), basis(d, ab % d))) };
            Ok(&v.operator()? * &w)
        })
        .collect::<Result<_>>()?;
    // site-0 operator of each residual-bond sector, per (α, β)
    let strings: Vec<Mat> = (0..d).map(|g| (1..len).fold(Mat::eye(1), |acc, _| acc.kron(&z.pow(g)))).collect();
    let mut sector = vec![vec![Mat::zeros(d, d); d * d]; d];
    for (ab, rm) in r.iter().enumerate() {
        for (g, s) in strings.iter().enumerate() {
            let mut op = Mat::zeros(d, d);
            for xa in 0..d {
                for zb in 0..d {
                    let p = &x.pow(xa) * &z.pow(zb);
                    let c = (&p.kron(s).dag() * rm).trace() / sites as f64;
                    op = &op + &p.scale(c);
                }
            }
            sector[g][ab] = op;
        }
    }
    let mut link = Mat::zeros(d * d, d);
    let mut ends = vec![];
    for (g, ops) in sector.iter().enumerate() {
        let k = (0..d * d).max_by(|&i, &j| ops[i].norm().partial_cmp(&ops[j].norm()).unwrap()).unwrap();
        let mut e = ops[k].scale(C64::new(1.0 / ops[k].norm().max(f64::MIN_POSITIVE), 0.0));
        let lead = e.data().iter().copied().find(|c| c.norm() > 1e-9).unwrap_or(ONE);
        e = e.scale(lead.conj() / lead.norm());
        for ab in 0..d * d {
            link.set(ab, g, (&e.dag() * &ops[ab]).trace());
        }
        ends.push(e);
    }
    // one overall scalar: ends scaled to Σ_g ‖E_g‖²/d = 1 over the nonzero sectors
    let live: Vec<usize> = (0..d).filter(|&g| sector[g].iter().any(|o| o.norm() > 1e-9)).collect();
    let unit = (live.len() as f64 / d as f64).sqrt() / (live.len().max(1) as f64).sqrt();
    for g in 0..d {
        ends[g] = ends[g].scale(C64::new((d as f64).sqrt() * unit, 0.0));
        for ab in 0..d * d {
            link.set(ab, g, link.get(ab, g) / ((d as f64).sqrt() * unit));
        }
    }
    let mut residual: f64 = 0.0;
    for (ab, rm) in r.iter().enumerate() {
        let fit = (0..d).fold(Mat::zeros(sites, sites), |acc, g| &acc + &ends[g].kron(&strings[g]).scale(link.get(ab, g)));
        residual = residual.max(rm.max_abs_diff(&fit));
    }
    let mut channels = vec![];
    for g in 0..d {
        // the end operator is X^a Z^g: the string continues onto the end site
        let w: f64 = (0..d * d).map(|ab| link.get(ab, g).norm_sqr()).sum::<f64>() * ends[g].norm().powi(2);
        if w < 1e-18 {
            continue;
        }
        let mut found = None;
        for xa in 0..d {
            let p = &x.pow(xa) * &z.pow(g);
            let c = (&p.dag() * &ends[g]).trace() / d as f64;
            if (c.norm_sqr() * d as f64 - ends[g].norm().powi(2)).abs() < 1e-9 {
                found = Some(xa);
            }
        }
        let xa = found.ok_or_else(|| Error::Precondition(format!("sector {g} is not a single anyon")))?;
        channels.push((anyon_name(xa, g), w));
    }
    let total: f64 = channels.iter().map(|c| c.1).sum();
    for c in &mut channels {
        c.1 /= total;
    }
    Ok(FusionWitness { n, bulk: (0..d).map(|g| z.pow(g)).collect(), link, ends, channels, residual })
}

/// Quantum dimension implied by the channels: `d_σ² = Σ d_c` over channels
/// of abelian anyons.
pub fn twist_dimension(w: &FusionWitness) -> f64 {
    (w.channels.len() as f64).sqrt()
}

fn close_up_to_phase(a: &[C64], b: &[C64]) -> f64 {
    1.0 - inner(a, b).norm()
}

/// Charge-definite ends of the toric duality wall, the charge loop around
/// a twist, and the single-braid e → m conversion next to a twist.
pub fn twist_charge_check(tol: f64) -> Result<Outcome> {
    let mut o = Outcome::new();
    let alg = end_algebra(TwistWall::Duality, 2)?;
    o.close("absorption_residual", alg.residual, 0.0, tol);
    let ends = find_end_vectors(TwistWall::Duality, 2)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = vec![C64::new(s, 0.0), C64::new(0.0, s)];
    let minus = vec![C64::new(s, 0.0), C64::new(0.0, -s)];
    o.close("species", ends.len() as f64, 2.0, 0.0);
    o.close("sigma_plus_vs_plus_i", close_up_to_phase(&ends[0].vector, &plus), 0.0, tol);
    o.close("sigma_minus_vs_minus_i", close_up_to_phase(&ends[1].vector, &minus), 0.0, tol);
    let xz = &x_mat(2) * &z_mat(2);
    for (t, want) in ends.iter().zip([-1.0, 1.0]) {
        let ev = inner(&t.vector, &xz.apply(&t.vector));
        o.close(&format!("xz_eigenvalue_im.{}", t.species), ev.im, want, tol);
    }

    let (net, line) = end_setup(TwistWall::Duality, 2)?;
    let (p, m) = (&ends[0].vector, &ends[1].vector);
    let twisted = line.insert(&net, TwistWall::Duality, p, p)?;
    let flipped = line.insert(&net, TwistWall::Duality, m, p)?;
    let braid = charge_loop(&twisted, &flipped, &corner_block(&net, line.corners[0]))?;
    o.value("charge_loop_weight", braid.weight() as f64);
    let mixed = braid.sites().values().any(|&(x, z)| x > 0 && z > 0);
    o.require(mixed, "charge loop has a Y-type factor");
    let lam_p = double_braid_check(&twisted, &braid)?;
    let lam_m = double_braid_check(&flipped, &braid)?;
    o.close("lambda_abs.sigma_plus", lam_p.norm(), 1.0, tol);
    o.close("lambda_abs.sigma_minus", lam_m.norm(), 1.0, tol);
    o.close("lambda_product", (lam_p * lam_m).re, -1.0, tol);
    let sup: Vec<C64> = p.iter().zip(m).map(|(a, b)| (a + b) * s).collect();
    let lam_s = double_braid_check(&line.insert(&net, TwistWall::Duality, &sup, p)?, &braid)?;
    o.value("lambda_abs.superposition", lam_s.norm());
    o.require(lam_s.norm() < 1.0 - 1e-3, "superposition end is not charge-definite");

    let free = (3, 0);
    let (e, mm) = corner_loops(&net, free)?;
    let lam_free = double_braid_check(&twisted, &e.mul(&mm)?)?;
    o.close("lambda_off_wall.re", lam_free.re, 1.0, tol);
    o.close("lambda_off_wall.im", lam_free.im, 0.0, tol);

    // an e pair on the inner side, its string dragged over the wall, reads
    // as an m on the outer side
    let wall = line.wall(&net, TwistWall::Duality, p, p)?;
    let single = transport_overlap(&net, &wall, &line.path, &[(0, x_mat(2)), (1, x_mat(2))], &[(0, z_mat(2))])?;
    o.close("single_braid_e_to_m", single.norm(), 1.0, tol);
    Ok(o)
}

/// Anyon absorption into twist ends, checked against the end algebra and
/// on the network.
pub fn absorption_check(tol: f64) -> Result<Outcome> {
    let mut o = Outcome::new();
    let alg = end_algebra(TwistWall::Duality, 2)?;
    let ends = find_end_vectors(TwistWall::Duality, 2)?;
    let (net, line) = end_setup(TwistWall::Duality, 2)?;
    let far = ends[0].vector.clone();
    let ((site, leg), _) = piece_legs(&net, line.path[0]);
    for t in &ends {
        let (to, ph) = fuse_twist_anyon(&alg, &ends, t, Absorbed::E)?;
        o.require(to.species != t.species, &format!("{} × e changes species", t.species));
        let want = if t.species == "σ+" { 1.0 } else { -1.0 };
        o.close(&format!("e_phase_im.{}", t.species), ph.im, want, tol);
        let absorbed = line.insert(&net, TwistWall::Duality, &t.vector, &far)?.with_leg_op(site, leg, x_mat(2), "e");
        let target = line.insert(&net, TwistWall::Duality, &to.vector, &far)?;
        let ov = normalized_overlap(&target, &absorbed)?;
        o.close(&format!("e_network_phase_err.{}", t.species), (ov - ph).norm(), 0.0, tol);

        let (back, ph2) = fuse_twist_anyon(&alg, &ends, &to, Absorbed::E)?;
        o.require(back.species == t.species, "e twice restores the species");
        // the second absorption starts from the other species: (±i)(∓i) = 1
        o.close(&format!("e_twice_phase.{}", t.species), (ph * ph2).re, 1.0, tol);

        let (tm, phm) = fuse_twist_anyon(&alg, &ends, t, Absorbed::M)?;
        o.require(tm.species != t.species, &format!("{} × m changes species", t.species));
        o.close(&format!("m_phase.{}", t.species), phm.re, 1.0, tol);
        let moved = m_along(&net, &line, TwistWall::Duality, line.insert(&net, TwistWall::Duality, &t.vector, &far)?);
        let far_m = alg.m_far.apply(&far);
        let target = line.insert(&net, TwistWall::Duality, &tm.vector, &far_m)?;
        o.close(&format!("m_network_overlap.{}", t.species), normalized_overlap(&target, &moved)?.norm(), 1.0, tol);
        // m absorption commutes with the e-induced species flip
        let (em, _) = fuse_twist_anyon(&alg, &ends, &fuse_twist_anyon(&alg, &ends, t, Absorbed::E)?.0, Absorbed::M)?;
        let (me, _) = fuse_twist_anyon(&alg, &ends, &tm, Absorbed::E)?;
        o.require(em.species == me.species, "e then m agrees with m then e");
    }
    Ok(o)
}

/// Twist fusion on qubit walls: channels and the witness matrices.
pub fn fusion_check(tol: f64) -> Result<Outcome> {
    let mut o = fusion_pair_check(true, tol)?;
    o.merge("unlike", fusion_pair_check(false, tol)?);
    Ok(o)
}

/// Fusion of like (`σ±σ±`) or unlike (`σ±σ∓`) qubit twists.
pub fn fusion_pair_check(like: bool, tol: f64) -> Result<Outcome> {
    let mut o = Outcome::new();
    let ends = find_end_vectors(TwistWall::Duality, 2)?;
    let (x, z) = (x_mat(2), z_mat(2));
    let zx = &z * &x;
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut unit_link = Mat::zeros(4, 2);
    unit_link.set(0, 0, ONE);
    unit_link.set(1, 1, ONE);
    for a in &ends {
        for b in ends.iter().filter(|b| (b.species == a.species) == like) {
            let key = format!("{}{}", a.species, b.species);
            let w = fuse_twists(2, a, b, 3, true, false)?;
            o.close(&format!("factor_residual.{key}"), w.residual, 0.0, tol);
            let names: Vec<&str> = w.channels.iter().map(|c| c.0.as_str()).collect();
            let want: &[&str] = if a.species == b.species { &["1", "em"] } else { &["e", "m"] };
            o.require(names == want, &format!("{key} channels {names:?}"));
            o.close(&format!("weight_gap.{key}"), (w.channels[0].1 - w.channels[1].1).abs(), 0.0, tol);
            o.close(&format!("d_sigma.{key}"), twist_dimension(&w), 2f64.sqrt(), tol);
            o.require(w.bulk[0].approx_eq(&Mat::eye(2), tol) && w.bulk[1].approx_eq(&z, tol), "bulk is diag(1, Z)");
            let (link, e, _) = w.bell_form()?;
            o.close(&format!("link_err.{key}"), link.max_abs_diff(&unit_link), 0.0, tol);
            let (first, second) = if a.species == b.species { (Mat::eye(2), zx.clone()) } else { (x.clone(), z.clone()) };
            let err0 = e[0].max_abs_diff(&first.scale(s));
            let err1 = e[1].max_abs_diff(&second.scale(i * s)).min(e[1].max_abs_diff(&second.scale(-i * s)));
            o.close(&format!("end_err.{key}"), err0.max(err1), 0.0, tol);
        }
    }
    if like {
        o.require(fuse_twists(2, &ends[0], &ends[0], 3, false, false).is_err(), "like-orientation fusion needs the flag");
    }
    Ok(o)
}

/// Z_N duality twists: N species cycled by e, end-matching operator with
/// the eigenvectors of Z†X, N equal fusion channels.
pub fn zn_twist_check(n: u32, tol: f64) -> Result<Outcome> {
    let mut o = Outcome::new();
    let alg = end_algebra(TwistWall::Duality, n)?;
    o.close("absorption_residual", alg.residual, 0.0, tol);
    let ends = find_end_vectors(TwistWall::Duality, n)?;
    o.close("species", ends.len() as f64, n as f64, 0.0);
    let zdx = &z_mat(n).dag() * &x_mat(n);
    for t in &ends {
        let w = zdx.apply(&t.vector);
        o.close(&format!("zdag_x_eigen.{}", t.species), close_up_to_phase(&t.vector, &w), 0.0, tol);
    }
    let mut seen = vec![0usize];
    let mut cur = ends[0].clone();
    for _ in 1..n {
        cur = fuse_twist_anyon(&alg, &ends, &cur, Absorbed::E)?.0;
        seen.push(ends.iter().position(|t| t.species == cur.species).unwrap_or(0));
    }
    seen.sort_unstable();
    seen.dedup();
    o.close("reached_by_e", seen.len() as f64, n as f64, 0.0);
    let w = fuse_twists(n, &ends[0], &ends[0], 2, true, false)?;
    o.close("fusion_channels", w.channels.len() as f64, n as f64, 0.0);
    let spread = w.channels.iter().map(|c| (c.1 - 1.0 / n as f64).abs()).fold(0.0, f64::max);
    o.close("fusion_weight_spread", spread, 0.0, tol);
    Ok(o)
}
