//! Exact stabilizer groups of qubit networks whose tensors are all
//! stabilizer states. Used to read off the local stabilizers of walls and
//! twists, which the contraction engine then checks independently.

use crate::error::{Error, Result};
use crate::pauli::PauliTerm;
use crate::peps::{Boundary, Closure, Leg, PepsNetwork};
use crate::tensor::Tensor;
use crate::C64;
use std::collections::HashMap;

/// `i^phase · Π X^x Z^z`, X before Z on every qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPauli {
    pub phase: u8,
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl SPauli {
    pub fn identity(n: usize) -> SPauli {
        SPauli { phase: 0, x: vec![false; n], z: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn mul(&self, o: &SPauli) -> SPauli {
        // Z^z1 X^x2 = (-1)^{z1·x2} X^x2 Z^z1
        let flips = self.z.iter().zip(&o.x).filter(|(a, b)| **a && **b).count();
        SPauli {
            phase: ((self.phase as usize + o.phase as usize + 2 * flips) % 4) as u8,
            x: self.x.iter().zip(&o.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&o.z).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(a, b)| **a || **b).count()
    }

    fn bit(&self, c: usize) -> bool {
        let n = self.len();
        if c < n {
            self.x[c]
        } else {
            self.z[c - n]
        }
    }

    fn symplectic_zero(&self) -> bool {
        !self.x.iter().any(|&b| b) && !self.z.iter().any(|&b| b)
    }

    fn restrict(&self, keep: &[usize]) -> SPauli {
        SPauli { phase: self.phase, x: keep.iter().map(|&q| self.x[q]).collect(), z: keep.iter().map(|&q| self.z[q]).collect() }
    }

    pub fn to_term(&self, names: &[String]) -> PauliTerm {
        let mut t = PauliTerm::identity(2);
        for (q, name) in names.iter().enumerate() {
            if self.x[q] || self.z[q] {
                t = t.with(name, self.x[q] as i64, self.z[q] as i64);
            }
        }
        // i = ζ² for qubits
        t.rephase(2 * self.phase as i64)
    }

    pub fn from_term(t: &PauliTerm, names: &[String]) -> Result<SPauli> {
        if t.modulus() != 2 || t.phase_exponent() % 2 == 1 {
            return Err(Error::Precondition(format!("{t} is not a qubit Pauli with phase in {{±1, ±i}}")));
        }
        let mut p = SPauli::identity(names.len());
        for (s, &(x, z)) in t.sites() {
            let q = names.iter().position(|n| n == s).ok_or_else(|| Error::Label(format!("no qubit {s}")))?;
            p.x[q] = x == 1;
            p.z[q] = z == 1;
        }
        p.phase = (t.phase_exponent() / 2) as u8;
        Ok(p)
    }
}

/// Row-reduce `rows` on the columns in `cols` (indices into the 2n bit
/// vector) and return the reduced rows plus the number of pivots found.
/// Rows are multiplied as group elements, so phases stay exact.
fn eliminate(rows: &mut [SPauli], cols: &[usize]) -> usize {
    let mut r = 0;
    for &c in cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].bit(c)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.bit(c) {
                *row = row.mul(&pivot);
            }
        }
        r += 1;
    }
    r
}

/// Stabilizer generators of a dense tensor over its labels in order. Each
/// label must have extent 1, 2 or 4; extent 4 counts as two qubits, major
/// first.
pub fn tensor_stabilizers(t: &Tensor, order: &[&str]) -> Result<Vec<SPauli>> {
    let t = t.permute(order)?;
    let mut n = 0;
    for &d in t.shape() {
        n += match d {
            1 => 0,
            2 => 1,
            4 => 2,
            _ => return Err(Error::Precondition(format!("extent {d} is not a qubit register"))),
        };
    }
    let data = t.data();
    let scale = data.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let tol = 1e-9 * scale;
    let bits = |v: usize| -> Vec<bool> { (0..n).map(|q| (v >> (n - 1 - q)) & 1 == 1).collect() };
    let support: Vec<usize> = (0..data.len()).filter(|&i| data[i].norm() > tol).collect();
    let x0 = support[0];
    // span of the support shifts, fully reduced: distinct top bits, and no
    // element has another's top bit set
    let mut basis: Vec<usize> = vec![];
    for &sp in &support {
        let mut v = sp ^ x0;
        for &b in &basis {
            if v & top_bit(b) != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            let t = top_bit(v);
            for b in basis.iter_mut() {
                if *b & t != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    if support.len() != 1usize << basis.len() {
        return Err(Error::Precondition("support is not an affine subspace".into()));
    }
    let amp = |v: usize| data[v];
    let mag = amp(x0).norm();
    if support.iter().any(|&s| (amp(s).norm() - mag).abs() > tol) {
        return Err(Error::Precondition("amplitudes are not flat on the support".into()));
    }
    let pivots: Vec<usize> = basis.iter().map(|&b| top_bit(b)).collect();
    let mut gens = vec![];
    // Z-type: vectors orthogonal to the span
    for f in 0..n {
        let col = 1usize << (n - 1 - f);
        if pivots.contains(&col) {
            continue;
        }
        let mut v = col;
        for (&b, &p) in basis.iter().zip(&pivots) {
            if b & col != 0 {
                v |= p;
            }
        }
        let mut g = SPauli::identity(n);
        g.z = bits(v);
        if (v & x0).count_ones() % 2 == 1 {
            g.phase = 2;
        }
        gens.push(g);
    }
    // X-type: one per span vector, Z part fitted from amplitude ratios
    for &b in &basis {
        let r = |x: usize| amp(x ^ b) / amp(x);
        let r0 = r(x0);
        let mut w = 0usize;
        for (&b2, &p) in basis.iter().zip(&pivots) {
            if (r(x0 ^ b2) / r0 - C64::new(-1.0, 0.0)).norm() < 1e-6 {
                w |= p;
            }
        }
        let sign = |v: usize| if (v.count_ones()) % 2 == 1 { -1.0 } else { 1.0 };
        for &s in &support {
            let want = r0 * sign(w & s) * sign(w & x0);
            if (r(s) - want).norm() > 1e-6 * r0.norm() {
                return Err(Error::Precondition("amplitude ratios are not a linear sign".into()));
            }
        }
        // X^b Z^w ψ = (-1)^{w·b} c ψ with c = r(x0)(-1)^{w·x0}
        let c = r0 * sign(w & x0) * sign(w & b);
        let k = phase_index(c)?;
        let mut g = SPauli::identity(n);
        g.x = bits(b);
        g.z = bits(w);
        g.phase = ((4 - k) % 4) as u8;
        gens.push(g);
    }
    Ok(gens)
}

fn top_bit(v: usize) -> usize {
    1usize << (usize::BITS - 1 - v.leading_zeros())
}

fn phase_index(c: C64) -> Result<usize> {
    let opts = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
    opts.iter()
        .position(|o| (c - o).norm() < 1e-6)
        .ok_or_else(|| Error::Precondition(format!("ratio {c} is not a power of i")))
}

/// Stabilizer group of a pure qubit state, in reduced form.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    pub qubits: Vec<String>,
    pub gens: Vec<SPauli>,
}

impl StabilizerGroup {
    fn columns(&self) -> Vec<usize> {
        (0..2 * self.qubits.len()).collect()
    }

    /// `Some(±1)` when `±p` is in the group, `None` when `p` has zero
    /// expectation.
    pub fn sign_of(&self, p: &PauliTerm) -> Result<Option<i8>> {
        let target = SPauli::from_term(p, &self.qubits)?;
        let mut acc = SPauli::identity(self.qubits.len());
        let mut rest = target.clone();
        let mut basis = self.gens.clone();
        let piv = eliminate(&mut basis, &self.columns());
        let pivot_col: Vec<usize> =
            basis[..piv].iter().map(|g| self.columns().into_iter().find(|&c| g.bit(c)).unwrap()).collect();
        for (g, &c) in basis[..piv].iter().zip(&pivot_col) {
            if rest.bit(c) {
                rest = rest.mul(g);
                acc = acc.mul(g);
            }
        }
        if !rest.symplectic_zero() {
            return Ok(None);
        }
        // target = i^{t} XZ, acc = i^{a} XZ
        let d = (4 + target.phase as i32 - acc.phase as i32) % 4;
        match d {
            0 => Ok(Some(1)),
            2 => Ok(Some(-1)),
            _ => Err(Error::Precondition(format!("{p} is not Hermitian against the state"))),
        }
    }

    /// Generators of the subgroup supported on `region`.
    pub fn local(&self, region: &[usize]) -> Vec<SPauli> {
        let n = self.qubits.len();
        let inside: std::collections::HashSet<usize> = region.iter().copied().collect();
        let mut cols: Vec<usize> = (0..n).filter(|q| !inside.contains(q)).flat_map(|q| [q, q + n]).collect();
        let outside_cols = cols.len();
        cols.extend(region.iter().flat_map(|&q| [q, q + n]));
        let mut rows = self.gens.clone();
        eliminate(&mut rows, &cols[..outside_cols]);
        rows.into_iter()
            .filter(|r| !r.symplectic_zero() && cols[..outside_cols].iter().all(|&c| !r.bit(c)))
            .collect()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.qubits.iter().position(|q| q == name)
    }
}

/// Symplectic rank of a list of Paulis.
pub fn rank(rows: &[SPauli]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut r = rows.to_vec();
    let cols: Vec<usize> = (0..2 * rows[0].len()).collect();
    eliminate(&mut r, &cols)
}

struct Builder {
    nphys: usize,
    next: usize,
    gens: Vec<(Vec<usize>, Vec<SPauli>)>,
    pairs: Vec<(usize, usize)>,
}

impl Builder {
    fn fresh(&mut self, k: usize) -> Vec<usize> {
        let v = (self.next..self.next + k).collect();
        self.next += k;
        v
    }

    fn qubits_of(d: usize) -> usize {
        match d {
            1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    /// Add a tensor; `slots` gives the qubits for each label in `order`.
    fn add(&mut self, t: &Tensor, order: &[&str], slots: Vec<usize>) -> Result<()> {
        let g = tensor_stabilizers(t, order)?;
        self.gens.push((slots, g));
        Ok(())
    }

    fn join(&mut self, a: &[usize], b: &[usize]) -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::Shape("joined registers differ in size".into()));
        }
        self.pairs.extend(a.iter().copied().zip(b.iter().copied()));
        Ok(())
    }
}

/// Exact stabilizer group of a qubit PEPS network, walls and leg operators
/// included. Fails when a tensor is not a stabilizer state or the network
/// state vanishes.
pub fn network_group(net: &PepsNetwork) -> Result<StabilizerGroup> {
    if net.n() != 2 {
        return Err(Error::Precondition("stabilizer contraction is implemented for qubits".into()));
    }
    let names = net.qubits();
    let spins = net.site.spins;
    let mut b = Builder { nphys: names.len(), next: names.len(), gens: vec![], pairs: vec![] };
    let vq = Builder::qubits_of(net.site.virt_dim);
    // open end of each (site, leg), advanced as wall pieces attach
    let mut ends: HashMap<((usize, usize), Leg), Vec<usize>> = HashMap::new();
    for x in 0..net.lx {
        for y in 0..net.ly {
            let t = net.site_ket(x, y)?;
            let mut order: Vec<String> = Leg::ALL.iter().map(|l| l.name().to_string()).collect();
            order.extend((0..spins).map(|k| format!("p{k}")));
            let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
            let mut slots = vec![];
            for leg in Leg::ALL {
                let q = b.fresh(vq);
                slots.extend(q.iter().copied());
                ends.insert(((x, y), leg), q);
            }
            let site_index = (x * net.ly + y) * spins;
            slots.extend(site_index..site_index + spins);
            b.add(&t, &refs, slots)?;
        }
    }
    for w in &net.walls {
        let k = w.pieces.len();
        let mut ins: Vec<Vec<usize>> = vec![];
        let mut outs: Vec<Vec<usize>> = vec![];
        for p in &w.pieces {
            let (lo, lleg, hi, hleg) = net.bond_ends(p.bond);
            let key = if p.inner_low { (lo, lleg) } else { (hi, hleg) };
            let a_in = b.fresh(Builder::qubits_of(p.tensor.extent("a_in")?));
            let a_out = b.fresh(Builder::qubits_of(p.tensor.extent("a_out")?));
            let i_q = b.fresh(Builder::qubits_of(p.tensor.extent("in")?));
            let o_q = b.fresh(Builder::qubits_of(p.tensor.extent("out")?));
            let slots: Vec<usize> = [&a_in, &a_out, &i_q, &o_q].into_iter().flatten().copied().collect();
            b.add(&p.tensor, &["a_in", "a_out", "in", "out"], slots)?;
            let cur = ends.get(&key).cloned().unwrap();
            b.join(&cur, &i_q)?;
            ends.insert(key, o_q);
            ins.push(a_in);
            outs.push(a_out);
        }
        for pi in 0..k.saturating_sub(1) {
            b.join(&outs[pi], &ins[pi + 1])?;
        }
        match &w.closure {
            Closure::Periodic => b.join(&outs[k - 1], &ins[0])?,
            Closure::Ends(left, right) => {
                for (vec, link) in [(left, &ins[0]), (right, &outs[k - 1])] {
                    let t = Tensor::new(vec!["v"], vec![vec.len()], vec.clone())?;
                    let q = b.fresh(link.len());
                    b.add(&t, &["v"], q.clone())?;
                    b.join(link, &q)?;
                }
            }
        }
    }
    for x in 0..net.lx {
        for y in 0..net.ly {
            for leg in Leg::ALL {
                let here = ends[&((x, y), leg)].clone();
                match net.bond_at((x, y), leg) {
                    Some(bond) => {
                        let (lo, lleg, hi, hleg) = net.bond_ends(bond);
                        if lo == (x, y) && lleg == leg {
                            let there = ends[&(hi, hleg)].clone();
                            b.join(&here, &there)?;
                        }
                    }
                    None => {
                        let d = net.site.virt_dim;
                        let v: Vec<C64> = match net.boundary {
                            Boundary::Absorbing => vec![C64::new(1.0, 0.0); d],
                            _ => (0..d).map(|i| C64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)).collect(),
                        };
                        let q = b.fresh(here.len());
                        b.add(&Tensor::new(vec!["v"], vec![d], v)?, &["v"], q.clone())?;
                        b.join(&here, &q)?;
                    }
                }
            }
        }
    }
    contract(b, names)
}

fn contract(b: Builder, names: Vec<String>) -> Result<StabilizerGroup> {
    let total = b.next;
    let mut seen = vec![0; total];
    for &(a, c) in &b.pairs {
        seen[a] += 1;
        seen[c] += 1;
    }
    if let Some(q) = (b.nphys..total).find(|&q| seen[q] != 1) {
        return Err(Error::Precondition(format!("virtual qubit {q} joined {} times", seen[q])));
    }
    let mut rows = vec![];
    for (slots, gens) in &b.gens {
        for g in gens {
            let mut p = SPauli::identity(total);
            p.phase = g.phase;
            for (i, &q) in slots.iter().enumerate() {
                p.x[q] = g.x[i];
                p.z[q] = g.z[i];
            }
            rows.push(p);
        }
    }
    // fold each Bell pair onto its first qubit: the constraint is that the
    // two halves agree, so eliminate on the xor of the pair
    let mut xrows: Vec<(SPauli, Vec<bool>)> = rows
        .into_iter()
        .map(|p| {
            let c: Vec<bool> =
                b.pairs.iter().flat_map(|&(a, c)| [p.x[a] ^ p.x[c], p.z[a] ^ p.z[c]]).collect();
            (p, c)
        })
        .collect();
    let m = 2 * b.pairs.len();
    let mut r = 0;
    for col in 0..m {
        let Some(piv) = (r..xrows.len()).find(|&i| xrows[i].1[col]) else { continue };
        xrows.swap(r, piv);
        let (pp, pc) = xrows[r].clone();
        for (i, row) in xrows.iter_mut().enumerate() {
            if i != r && row.1[col] {
                row.0 = row.0.mul(&pp);
                for (a, bb) in row.1.iter_mut().zip(&pc) {
                    *a ^= *bb;
                }
            }
        }
        r += 1;
    }
    let phys: Vec<usize> = (0..b.nphys).collect();
    let mut kept: Vec<SPauli> = xrows[r..].iter().map(|(p, _)| p.restrict(&phys)).collect();
    let cols: Vec<usize> = (0..2 * b.nphys).collect();
    let rank = eliminate(&mut kept, &cols);
    if kept[rank..].iter().any(|p| p.phase != 0) {
        return Err(Error::ZeroNorm);
    }
    kept.truncate(rank);
    if rank != b.nphys {
        return Err(Error::Precondition(format!("network state is mixed: {rank} generators on {} qubits", b.nphys)));
    }
    Ok(StabilizerGroup { qubits: names, gens: kept })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state() {
        let h = 1.0;
        let t = Tensor::new(vec!["a", "b"], vec![2, 2], vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)]).unwrap();
        let g = tensor_stabilizers(&t, &["a", "b"]).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|p| p.phase == 0));
    }

    #[test]
    fn y_eigenstate() {
        let s = 1.0 / 2f64.sqrt();
        let t = Tensor::new(vec!["a"], vec![2], vec![C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let g = tensor_stabilizers(&t, &["a"]).unwrap();
        // X Z with phase: Y = i X Z
        assert_eq!(g, vec![SPauli { phase: 1, x: vec![true], z: vec![true] }]);
    }
}

#[cfg(test)]
mod dense_checks {
    use super::*;

    fn apply(p: &SPauli, v: &[C64]) -> Vec<C64> {
        let n = p.len();
        let ph = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][p.phase as usize];
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (i, &a) in v.iter().enumerate() {
            // X^x Z^z |i> = (-1)^{z·i} |i ^ x>
            let mut xm = 0usize;
            let mut s = 1.0;
            for q in 0..n {
                let bit = 1usize << (n - 1 - q);
                if p.z[q] && i & bit != 0 {
                    s = -s;
                }
                if p.x[q] {
                    xm |= bit;
                }
            }
            out[i ^ xm] += a * s * ph;
        }
        out
    }

    #[test]
    fn site_generators_stabilize() {
        for site in [crate::peps::toric_site_tensor(), crate::peps::color_site_tensor()] {
            let mut order: Vec<String> = Leg::ALL.iter().map(|l| l.name().to_string()).collect();
            order.extend((0..site.spins).map(|k| format!("p{k}")));
            let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
            let t = site.tensor.permute(&refs).unwrap();
            let g = tensor_stabilizers(&t, &refs).unwrap();
            let n = g[0].len();
            assert_eq!(g.len(), n, "{:?}", site.kind);
            for p in &g {
                let w = apply(p, t.data());
                let d: f64 = w.iter().zip(t.data()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(d < 1e-9, "{:?} {p:?}", site.kind);
            }
            assert_eq!(rank(&g), n);
        }
    }
}

/// Incremental row echelon form for membership tests.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SPauli>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// What is left of `p` after clearing every pivot column.
    pub fn reduce(&self, p: &SPauli) -> SPauli {
        let mut r = p.clone();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if r.bit(c) {
                r = r.mul(row);
            }
        }
        r
    }

    /// Add `p`; false when it is already in the span.
    pub fn insert(&mut self, p: &SPauli) -> bool {
        let r = self.reduce(p);
        let Some(c) = (0..2 * r.len()).find(|&c| r.bit(c)) else { return false };
        for (row, &pc) in self.rows.iter_mut().zip(&self.pivots) {
            let _ = pc;
            if row.bit(c) {
                *row = row.mul(&r);
            }
        }
        self.rows.push(r);
        self.pivots.push(c);
        true
    }
}

/// Elements of `a` that also lie in `b` with the same sign, as a group
/// over the qubits of `a` (both groups must share the qubit order).
pub fn intersection(a: &StabilizerGroup, b: &StabilizerGroup) -> Result<StabilizerGroup> {
    if a.qubits != b.qubits {
        return Err(Error::Precondition("groups over different qubits".into()));
    }
    let mut eb = Echelon::new();
    for g in &b.gens {
        eb.insert(g);
    }
    // (part outside span(b), element of a)
    let mut rows: Vec<(SPauli, SPauli)> = a.gens.iter().map(|g| (eb.reduce(g), g.clone())).collect();
    let n2 = 2 * a.qubits.len();
    let mut r = 0;
    for c in 0..n2 {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0.bit(c)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0.bit(c) {
                *row = (row.0.mul(&pivot.0), row.1.mul(&pivot.1));
            }
        }
        r += 1;
    }
    let common: Vec<SPauli> = rows.into_iter().skip(r).map(|(_, g)| g).collect();
    let mut gens = vec![];
    let mut odd: Option<SPauli> = None;
    for g in common {
        match b.sign_of(&g.to_term(&a.qubits))? {
            Some(1) => gens.push(g),
            Some(_) => match &odd {
                None => odd = Some(g),
                Some(o) => gens.push(g.mul(o)),
            },
            None => return Err(Error::Precondition("element expected in both groups".into())),
        }
    }
    Ok(StabilizerGroup { qubits: a.qubits.clone(), gens })
}
