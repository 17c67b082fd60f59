//! Dense complex tensors with named indices.
//!
//! Entries are stored row-major over the label order: the last label varies
//! fastest. That linearization is also the order used by [`Tensor::dump`].

use num_complex::Complex64 as C64;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    labels: Vec<String>,
    shape: Vec<usize>,
    data: Vec<C64>,
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

/// Decode a flat offset into a multi-index for `shape`.
pub fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
}

impl Tensor {
    pub fn new<S: Into<String>>(labels: Vec<S>, shape: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != shape.len() {
            return Err(Error::Shape(format!("{} labels for {} extents", labels.len(), shape.len())));
        }
        if shape.iter().any(|&d| d == 0) {
            return Err(Error::Shape("zero extent".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Label(format!("duplicate label {l}")));
            }
        }
        let n: usize = shape.iter().product();
        if n != data.len() {
            return Err(Error::Shape(format!("{} entries for {} slots", data.len(), n)));
        }
        Ok(Tensor { labels, shape, data })
    }

    pub fn zeros<S: Into<String>>(labels: Vec<S>, shape: Vec<usize>) -> Result<Self> {
        let n = shape.iter().product();
        Self::new(labels, shape, vec![C64::new(0.0, 0.0); n])
    }

    /// Build a tensor by evaluating `f` on every multi-index.
    pub fn from_fn<S: Into<String>>(
        labels: Vec<S>,
        shape: Vec<usize>,
        mut f: impl FnMut(&[usize]) -> C64,
    ) -> Result<Self> {
        let n: usize = shape.iter().product();
        let mut idx = vec![0; shape.len()];
        let mut data = Vec::with_capacity(n);
        for flat in 0..n {
            unravel(flat, &shape, &mut idx);
            data.push(f(&idx));
        }
        Self::new(labels, shape, data)
    }

    pub fn scalar(c: C64) -> Self {
        Tensor { labels: vec![], shape: vec![], data: vec![c] }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn data(&self) -> &[C64] {
        &self.data
    }
    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn axis(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Label(format!("label {label} not found")))
    }

    pub fn extent(&self, label: &str) -> Result<usize> {
        Ok(self.shape[self.axis(label)?])
    }

    fn offset(&self, idx: &[usize]) -> usize {
        let mut off = 0;
        for (k, &i) in idx.iter().enumerate() {
            off = off * self.shape[k] + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: C64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn scale(&self, c: C64) -> Tensor {
        Tensor { data: self.data.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn conj(&self) -> Tensor {
        Tensor { data: self.data.iter().map(|x| x.conj()).collect(), ..self.clone() }
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn nnz(&self, tol: f64) -> usize {
        self.data.iter().filter(|x| x.norm() > tol).count()
    }

    pub fn relabel(mut self, from: &str, to: &str) -> Result<Tensor> {
        let a = self.axis(from)?;
        if from != to && self.labels.iter().any(|l| l == to) {
            return Err(Error::Label(format!("label {to} already present")));
        }
        self.labels[a] = to.to_string();
        Ok(self)
    }

    /// Reorder axes so that labels appear in `order`.
    pub fn permute(&self, order: &[&str]) -> Result<Tensor> {
        if order.len() != self.labels.len() {
            return Err(Error::Label("permutation must name every label".into()));
        }
        let perm: Vec<usize> = order.iter().map(|l| self.axis(l)).collect::<Result<_>>()?;
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let old = strides(&self.shape);
        let mut idx = vec![0; shape.len()];
        let n = self.data.len();
        let mut data = Vec::with_capacity(n);
        for flat in 0..n {
            unravel(flat, &shape, &mut idx);
            let off: usize = idx.iter().zip(&perm).map(|(&i, &p)| i * old[p]).sum();
            data.push(self.data[off]);
        }
        Tensor::new(order.to_vec(), shape, data)
    }

    /// Sum over paired labels. The result carries the surviving labels of
    /// `self` followed by those of `other`.
    pub fn contract(&self, other: &Tensor, pairs: &[(&str, &str)]) -> Result<Tensor> {
        let mut ax_a = Vec::new();
        let mut ax_b = Vec::new();
        for &(la, lb) in pairs {
            let i = self.axis(la)?;
            let j = other.axis(lb)?;
            if self.shape[i] != other.shape[j] {
                return Err(Error::Shape(format!(
                    "extent mismatch {la}={} vs {lb}={}",
                    self.shape[i], other.shape[j]
                )));
            }
            ax_a.push(i);
            ax_b.push(j);
        }
        let free_a: Vec<usize> = (0..self.rank()).filter(|k| !ax_a.contains(k)).collect();
        let free_b: Vec<usize> = (0..other.rank()).filter(|k| !ax_b.contains(k)).collect();
        let mut labels: Vec<String> = free_a.iter().map(|&k| self.labels[k].clone()).collect();
        labels.extend(free_b.iter().map(|&k| other.labels[k].clone()));
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Label(format!("label {l} would appear twice")));
            }
        }
        let sa = strides(&self.shape);
        let sb = strides(&other.shape);
        let m: usize = free_a.iter().map(|&k| self.shape[k]).product();
        let n: usize = free_b.iter().map(|&k| other.shape[k]).product();
        let kdims: Vec<usize> = ax_a.iter().map(|&k| self.shape[k]).collect();
        let kk: usize = kdims.iter().product();
        let fa_dims: Vec<usize> = free_a.iter().map(|&k| self.shape[k]).collect();
        let fb_dims: Vec<usize> = free_b.iter().map(|&k| other.shape[k]).collect();

        // Gather both operands into matrices, then multiply.
        let mut ma = vec![C64::new(0.0, 0.0); m * kk];
        let mut mb = vec![C64::new(0.0, 0.0); kk * n];
        let mut fi = vec![0; fa_dims.len()];
        let mut ki = vec![0; kdims.len()];
        for r in 0..m {
            unravel(r, &fa_dims, &mut fi);
            let base: usize = fi.iter().zip(&free_a).map(|(&i, &a)| i * sa[a]).sum();
            for c in 0..kk {
                unravel(c, &kdims, &mut ki);
                let off: usize = base + ki.iter().zip(&ax_a).map(|(&i, &a)| i * sa[a]).sum::<usize>();
                ma[r * kk + c] = self.data[off];
            }
        }
        let mut fj = vec![0; fb_dims.len()];
        for c in 0..n {
            unravel(c, &fb_dims, &mut fj);
            let base: usize = fj.iter().zip(&free_b).map(|(&i, &b)| i * sb[b]).sum();
            for r in 0..kk {
                unravel(r, &kdims, &mut ki);
                let off: usize = base + ki.iter().zip(&ax_b).map(|(&i, &b)| i * sb[b]).sum::<usize>();
                mb[r * n + c] = other.data[off];
            }
        }
        let mut out = vec![C64::new(0.0, 0.0); m * n];
        for r in 0..m {
            for t in 0..kk {
                let a = ma[r * kk + t];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &mb[t * n..(t + 1) * n];
                for (o, b) in out[r * n..(r + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        let mut shape = fa_dims;
        shape.extend(fb_dims);
        Tensor::new(labels, shape, out)
    }

    /// Sum over the diagonal of two labels of the same tensor.
    pub fn trace(&self, a: &str, b: &str) -> Result<Tensor> {
        let (ia, ib) = (self.axis(a)?, self.axis(b)?);
        if self.shape[ia] != self.shape[ib] || ia == ib {
            return Err(Error::Shape(format!("cannot trace {a} with {b}")));
        }
        let d = self.shape[ia];
        let id = identity_tensor("__ta", "__tb", d)?;
        // contracting with the identity pairs the two legs
        let t = self.contract(&id, &[(a, "__ta"), (b, "__tb")])?;
        Ok(t)
    }

    /// Contract every label the two tensors share.
    pub fn contract_shared(&self, other: &Tensor) -> Result<Tensor> {
        let shared: Vec<String> =
            self.labels.iter().filter(|l| other.labels.contains(l)).cloned().collect();
        let pairs: Vec<(&str, &str)> = shared.iter().map(|l| (l.as_str(), l.as_str())).collect();
        self.contract(other, &pairs)
    }

    /// Entrywise `self - other` after aligning `other` to this label order.
    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        let order: Vec<&str> = self.labels.iter().map(|s| s.as_str()).collect();
        let b = other.permute(&order)?;
        if b.shape != self.shape {
            return Err(Error::Shape("shape mismatch".into()));
        }
        let data = self.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
        Tensor::new(self.labels.clone(), self.shape.clone(), data)
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.sub(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Flatten into a matrix with the given row labels (in order) and the
    /// remaining labels (in order) as columns.
    pub fn to_matrix(&self, rows: &[&str], cols: &[&str]) -> Result<crate::linalg::Mat> {
        let mut order: Vec<&str> = rows.to_vec();
        order.extend_from_slice(cols);
        let t = self.permute(&order)?;
        let r: usize = rows.iter().map(|l| self.extent(l)).collect::<Result<Vec<_>>>()?.iter().product();
        let c = t.data.len() / r;
        Ok(crate::linalg::Mat::from_vec(r, c, t.data))
    }

    pub fn from_matrix(m: &crate::linalg::Mat, rows: &[(&str, usize)], cols: &[(&str, usize)]) -> Result<Tensor> {
        let mut labels = Vec::new();
        let mut shape = Vec::new();
        for &(l, d) in rows.iter().chain(cols) {
            labels.push(l.to_string());
            shape.push(d);
        }
        Tensor::new(labels, shape, m.data().to_vec())
    }

    /// Text dump: `labels`, `shape`, then one `re im` pair per entry in
    /// row-major order, 17 significant digits.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "labels {}", self.labels.join(" ")).unwrap();
        let sh: Vec<String> = self.shape.iter().map(|d| d.to_string()).collect();
        writeln!(s, "shape {}", sh.join(" ")).unwrap();
        writeln!(s, "entries {}", self.data.len()).unwrap();
        for z in &self.data {
            writeln!(s, "{:.16e} {:.16e}", z.re, z.im).unwrap();
        }
        s
    }

    pub fn parse_dump(text: &str) -> Result<Tensor> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |m: &str| Error::Parse(format!("tensor dump: {m}"));
        let labels: Vec<String> = lines
            .next()
            .and_then(|l| l.strip_prefix("labels"))
            .ok_or_else(|| bad("missing labels"))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let shape: Vec<usize> = lines
            .next()
            .and_then(|l| l.strip_prefix("shape"))
            .ok_or_else(|| bad("missing shape"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("shape entry")))
            .collect::<Result<_>>()?;
        let n: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("entries"))
            .ok_or_else(|| bad("missing entries"))?
            .trim()
            .parse()
            .map_err(|_| bad("entry count"))?;
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            let l = lines.next().ok_or_else(|| bad("truncated"))?;
            let mut it = l.split_whitespace().map(|t| t.parse::<f64>());
            match (it.next(), it.next()) {
                (Some(Ok(re)), Some(Ok(im))) => data.push(C64::new(re, im)),
                _ => return Err(bad("entry")),
            }
        }
        Tensor::new(labels, shape, data)
    }
}

/// Returns `c` with `a = c·b` entrywise within `tol`, after aligning `b` to
/// the label order of `a`. `Some(0)` only when both vanish.
pub fn equal_up_to_scalar(a: &Tensor, b: &Tensor, tol: f64) -> Result<Option<C64>> {
    let order: Vec<&str> = a.labels.iter().map(|s| s.as_str()).collect();
    let b = b.permute(&order)?;
    if b.shape != a.shape {
        return Err(Error::Shape("shape mismatch".into()));
    }
    Ok(scalar_ratio(&a.data, &b.data, tol))
}

/// Slice version of [`equal_up_to_scalar`].
pub fn scalar_ratio(a: &[C64], b: &[C64], tol: f64) -> Option<C64> {
    let na = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if na <= tol && nb <= tol {
        return Some(C64::new(0.0, 0.0));
    }
    if na <= tol || nb <= tol {
        return None;
    }
    let k = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())
        .map(|(k, _)| k)
        .unwrap();
    let c = a[k] / b[k];
    let ok = a.iter().zip(b).all(|(x, y)| (x - c * y).norm() <= tol * (1.0 + x.norm()));
    ok.then_some(c)
}

/// Entries 1 iff all `arity` indices agree.
pub fn delta_tensor(extent: usize, arity: usize) -> Result<Tensor> {
    if extent < 2 || arity < 2 {
        return Err(Error::Precondition("delta needs extent >= 2 and arity >= 2".into()));
    }
    let labels: Vec<String> = (0..arity).map(|k| format!("i{k}")).collect();
    Tensor::from_fn(labels, vec![extent; arity], |idx| {
        if idx.iter().all(|&i| i == idx[0]) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Three-index tensor with entry 1 iff `i + j = k (mod N)`.
pub fn xor_tensor(modulus: usize) -> Result<Tensor> {
    if modulus < 2 {
        return Err(Error::Precondition("modulus must be >= 2".into()));
    }
    Tensor::from_fn(vec!["i", "j", "k"], vec![modulus; 3], |idx| {
        if (idx[0] + idx[1]) % modulus == idx[2] {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn identity_tensor(a: &str, b: &str, d: usize) -> Result<Tensor> {
    Tensor::from_fn(vec![a, b], vec![d, d], |i| C64::new(if i[0] == i[1] { 1.0 } else { 0.0 }, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_times_vector() {
        let id = identity_tensor("a", "b", 2).unwrap();
        let v = Tensor::new(vec!["b"], vec![2], vec![c(1.0), c(2.0)]).unwrap();
        let r = id.contract(&v, &[("b", "b")]).unwrap();
        assert_eq!(r.labels(), ["a"]);
        assert_eq!(r.data(), &[c(1.0), c(2.0)]);
    }

    #[test]
    fn delta_chain_is_four_index_delta() {
        let d = delta_tensor(2, 3).unwrap();
        let e = d.clone().relabel("i0", "j0").unwrap().relabel("i1", "j1").unwrap().relabel("i2", "j2").unwrap();
        let r = d.contract(&e, &[("i2", "j0")]).unwrap();
        assert_eq!(r.rank(), 4);
        assert_eq!(r.nnz(0.0), 2);
        assert_eq!(r.get(&[1, 1, 1, 1]), c(1.0));
        assert_eq!(r.get(&[0, 0, 0, 0]), c(1.0));
    }

    #[test]
    fn delta_and_xor_counts() {
        assert_eq!(delta_tensor(2, 3).unwrap().nnz(0.0), 2);
        let x2 = xor_tensor(2).unwrap();
        assert_eq!(x2.get(&[1, 1, 0]), c(1.0));
        let x3 = xor_tensor(3).unwrap();
        let mut count = 0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    if x3.get(&[i, j, k]) != c(0.0) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 9);
    }

    #[test]
    fn errors_reported() {
        let a = delta_tensor(2, 2).unwrap();
        let b = delta_tensor(3, 2).unwrap();
        assert!(matches!(a.contract(&b, &[("i0", "i0")]), Err(Error::Shape(_))));
        assert!(matches!(a.contract(&b, &[("zz", "i0")]), Err(Error::Label(_))));
        assert!(Tensor::new(vec!["a", "a"], vec![1, 1], vec![c(1.0)]).is_err());
    }

    #[test]
    fn scalar_detection() {
        let a = xor_tensor(2).unwrap();
        assert_eq!(equal_up_to_scalar(&a, &a, DEFAULT_TOL).unwrap(), Some(c(1.0)));
        assert_eq!(equal_up_to_scalar(&a.scale(c(2.0)), &a, DEFAULT_TOL).unwrap(), Some(c(2.0)));
        let mut p = a.clone();
        p.set(&[0, 1, 0], c(1e-3));
        assert_eq!(equal_up_to_scalar(&p, &a, DEFAULT_TOL).unwrap(), None);
        let z = Tensor::zeros(vec!["i", "j", "k"], vec![2, 2, 2]).unwrap();
        assert_eq!(equal_up_to_scalar(&z, &z, DEFAULT_TOL).unwrap(), Some(c(0.0)));
        assert_eq!(equal_up_to_scalar(&z, &a, DEFAULT_TOL).unwrap(), None);
    }

    #[test]
    fn permute_aligns_labels() {
        let t = Tensor::from_fn(vec!["a", "b"], vec![2, 3], |i| c((i[0] * 3 + i[1]) as f64)).unwrap();
        let p = t.permute(&["b", "a"]).unwrap();
        assert_eq!(p.get(&[2, 1]), c(5.0));
        assert_eq!(equal_up_to_scalar(&t, &p, DEFAULT_TOL).unwrap(), Some(c(1.0)));
    }

    #[test]
    fn dump_round_trip() {
        let t = Tensor::from_fn(vec!["x", "y"], vec![2, 2], |i| C64::new(i[0] as f64 / 3.0, -(i[1] as f64) * 0.1)).unwrap();
        let back = Tensor::parse_dump(&t.dump()).unwrap();
        assert_eq!(t, back);
    }
}
