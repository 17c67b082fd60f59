//! Network description files.
//!
//! Line-oriented text, `#` starts a comment:
//!
//! ```text
//! model toric              # toric | color | zn:N
//! size 6 2                 # lx ly
//! boundary absorbing       # torus | open | absorbing
//! insert V(2,1) X1         # virtual operator on the low-side leg of a bond
//! insert H(0,1) Z1:B       # color code: :T or :B picks the layer
//! twist D 1 0 3 s+ s+      # wall kind, x0, y, length, end species
//! ```
//!
//! Boundary closure: `torus` wraps both directions; `open` pins every
//! boundary leg to |0>; `absorbing` sums boundary legs, which is the
//! symmetric-subspace closure used for twist patches (charges may leave
//! through the edge).
//!
//! Operators are `X<k>` or `Z<k>` powers as in the Pauli grammar. A `twist`
//! line runs a wall of the given kind (`D`, `W1`, `W2`, `W5`) across
//! `V(x0, y) .. V(x0 + len - 1, y)`, with end species `s+`/`s-` (qubit
//! duality walls), `s<j>` (Z_N) or `s` (on-site walls).

use crate::error::{Error, Result};
use crate::pauli::{x_mat, z_mat};
use crate::peps::{color_site_tensor, toric_site_tensor, zn_site_tensor, Bond, Boundary, Layer, PepsNetwork, SiteKind, SiteTensor};
use crate::stabilizers::TwistConfig;
use crate::twists::{find_end_vectors, twist_patch, TwistLine, TwistWall};

#[derive(Clone, Debug, PartialEq)]
pub struct Insert {
    pub bond: Bond,
    /// `'X'` or `'Z'`
    pub op: char,
    pub power: u32,
    pub layer: Option<Layer>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Twist {
    pub kind: TwistWall,
    pub x0: usize,
    pub y: usize,
    pub len: usize,
    pub species: [String; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkDescription {
    pub model: SiteKind,
    pub lx: usize,
    pub ly: usize,
    pub boundary: Boundary,
    pub inserts: Vec<Insert>,
    pub twist: Option<Twist>,
}

fn parse_bond(s: &str) -> Result<Bond> {
    let bad = || Error::Parse(format!("bond id {s}"));
    let (kind, rest) = s.split_at(1);
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let (x, y) = inner.split_once(',').ok_or_else(bad)?;
    let x: usize = x.trim().parse().map_err(|_| bad())?;
    let y: usize = y.trim().parse().map_err(|_| bad())?;
    match kind {
        "H" => Ok(Bond::H(x, y)),
        "V" => Ok(Bond::V(x, y)),
        _ => Err(bad()),
    }
}

fn bond_id(b: Bond) -> String {
    match b {
        Bond::H(x, y) => format!("H({x},{y})"),
        Bond::V(x, y) => format!("V({x},{y})"),
    }
}

pub fn parse_model(s: &str) -> Result<SiteKind> {
    match s {
        "toric" => Ok(SiteKind::Toric),
        "color" => Ok(SiteKind::Color),
        _ => {
            let n = s.strip_prefix("zn:").ok_or_else(|| Error::Unknown(format!("model {s}")))?;
            let n: u32 = n.parse().map_err(|_| Error::Parse(format!("model {s}")))?;
            if n < 2 {
                return Err(Error::Precondition("Z_N needs N >= 2".into()));
            }
            Ok(if n == 2 { SiteKind::Toric } else { SiteKind::Zn(n) })
        }
    }
}

fn model_name(k: SiteKind) -> String {
    match k {
        SiteKind::Toric => "toric".into(),
        SiteKind::Color => "color".into(),
        SiteKind::Zn(n) => format!("zn:{n}"),
    }
}

pub fn site_tensor(k: SiteKind) -> Result<SiteTensor> {
    match k {
        SiteKind::Toric => Ok(toric_site_tensor()),
        SiteKind::Color => Ok(color_site_tensor()),
        SiteKind::Zn(n) => zn_site_tensor(n),
    }
}

/// Accepts ASCII spellings of the end species.
pub fn species_name(s: &str) -> String {
    let s = s.replace("sigma", "σ").replace('−', "-");
    let s = if let Some(r) = s.strip_prefix('s') { format!("σ{r}") } else { s };
    s.replace('-', "−")
}

fn ascii_species(s: &str) -> String {
    s.replace('σ', "s").replace('−', "-")
}

impl NetworkDescription {
    pub fn parse(text: &str) -> Result<NetworkDescription> {
        let (mut model, mut size, mut boundary) = (None, None, None);
        let mut inserts = vec![];
        let mut twist = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = |m: &str| Error::Parse(format!("line {}: {m}", no + 1));
            match (f[0], f.len()) {
                ("model", 2) => model = Some(parse_model(f[1])?),
                ("size", 3) => {
                    let lx = f[1].parse().map_err(|_| bad("size"))?;
                    let ly = f[2].parse().map_err(|_| bad("size"))?;
                    size = Some((lx, ly));
                }
                ("boundary", 2) => {
                    boundary = Some(match f[1] {
                        "torus" | "periodic" => Boundary::Torus,
                        "open" => Boundary::Open,
                        "absorbing" => Boundary::Absorbing,
                        _ => return Err(bad("boundary must be torus, open or absorbing")),
                    })
                }
                ("insert", 3) => {
                    let bond = parse_bond(f[1])?;
                    let (op, layer) = match f[2].split_once(':') {
                        Some((o, "T")) => (o, Some(Layer::Top)),
                        Some((o, "B")) => (o, Some(Layer::Bottom)),
                        Some(_) => return Err(bad("layer must be T or B")),
                        None => (f[2], None),
                    };
                    let (c, p) = op.split_at(1);
                    let c = match c {
                        "X" => 'X',
                        "Z" => 'Z',
                        _ => return Err(bad("operator must be X<k> or Z<k>")),
                    };
                    let power = if p.is_empty() { 1 } else { p.parse().map_err(|_| bad("operator power"))? };
                    inserts.push(Insert { bond, op: c, power, layer });
                }
                ("twist", 7) => {
                    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("twist position"));
                    twist = Some(Twist {
                        kind: TwistWall::parse(f[1])?,
                        x0: num(f[2])?,
                        y: num(f[3])?,
                        len: num(f[4])?,
                        species: [species_name(f[5]), species_name(f[6])],
                    });
                }
                _ => return Err(bad(&format!("cannot read `{line}`"))),
            }
        }
        let (lx, ly) = size.ok_or_else(|| Error::Parse("missing size".into()))?;
        Ok(NetworkDescription {
            model: model.ok_or_else(|| Error::Parse("missing model".into()))?,
            lx,
            ly,
            boundary: boundary.unwrap_or(Boundary::Torus),
            inserts,
            twist,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("model {}\nsize {} {}\nboundary {}\n", model_name(self.model), self.lx, self.ly, match self.boundary {
            Boundary::Torus => "torus",
            Boundary::Open => "open",
            Boundary::Absorbing => "absorbing",
        });
        for i in &self.inserts {
            let layer = match i.layer {
                Some(Layer::Top) => ":T",
                Some(Layer::Bottom) => ":B",
                None => "",
            };
            s += &format!("insert {} {}{}{}\n", bond_id(i.bond), i.op, i.power, layer);
        }
        if let Some(t) = &self.twist {
            let kind = match t.kind {
                TwistWall::Duality => "D",
                TwistWall::W1Tilde => "W1",
                TwistWall::W2 => "W2",
                TwistWall::W5 => "W5",
            };
            s += &format!("twist {kind} {} {} {} {} {}\n", t.x0, t.y, t.len, ascii_species(&t.species[0]), ascii_species(&t.species[1]));
        }
        s
    }

    fn modulus(&self) -> u32 {
        match self.model {
            SiteKind::Zn(n) => n,
            _ => 2,
        }
    }

    /// Twist configuration for registry building; needs an absorbing
    /// `lx × 2` patch, no other insertions, and a model matching the wall.
    pub fn twist_config(&self) -> Result<TwistConfig> {
        let t = self.twist.as_ref().ok_or_else(|| Error::Precondition("no twist line".into()))?;
        if self.boundary != Boundary::Absorbing || self.ly != 2 || !self.inserts.is_empty() {
            return Err(Error::Precondition("registries are built on absorbing lx × 2 patches without other insertions".into()));
        }
        if t.kind.site(2)?.kind != self.model {
            return Err(Error::Precondition(format!("{:?} twists do not live on the {} model", t.kind, model_name(self.model))));
        }
        let cfg = TwistConfig::standard(t.kind)?;
        Ok(TwistConfig { lx: self.lx, line: TwistLine::horizontal(t.x0, t.y, t.len)?, ..cfg }.with_species(&t.species[0], &t.species[1]))
    }

    pub fn build(&self) -> Result<PepsNetwork> {
        let site = site_tensor(self.model)?;
        let mut net = match self.boundary {
            Boundary::Absorbing if self.ly == 2 => twist_patch(site, self.lx)?,
            b => PepsNetwork::assemble(site, self.lx, self.ly, b)?,
        };
        let n = self.modulus();
        for i in &self.inserts {
            let base = if i.op == 'X' { x_mat(n) } else { z_mat(n) }.pow(i.power as usize % n as usize);
            let op = net.layer_op(&base, i.layer);
            net = net.with_bond_op(i.bond, op, &format!("{}{}", i.op, i.power))?;
        }
        if let Some(t) = &self.twist {
            let ends = find_end_vectors(t.kind, n)?;
            let end = |s: &str| {
                ends.iter()
                    .find(|e| e.species == s)
                    .map(|e| e.vector.clone())
                    .ok_or_else(|| Error::Unknown(format!("species {s}")))
            };
            let line = TwistLine::horizontal(t.x0, t.y, t.len)?;
            net = line.insert(&net, t.kind, &end(&t.species[0])?, &end(&t.species[1])?)?;
        }
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "model color\nsize 6 2\nboundary absorbing\ntwist W2 1 0 3 s s\n";

    #[test]
    fn round_trip() {
        let d = NetworkDescription::parse(SAMPLE).unwrap();
        assert_eq!(NetworkDescription::parse(&d.to_text()).unwrap(), d);
        let e = NetworkDescription::parse("model zn:3\nsize 2 2\ninsert V(0,0) X2 # e\ninsert H(1,1) Z1\n").unwrap();
        assert_eq!(e.inserts.len(), 2);
        assert_eq!(NetworkDescription::parse(&e.to_text()).unwrap(), e);
    }

    #[test]
    fn species_spellings() {
        assert_eq!(species_name("s+"), "σ+");
        assert_eq!(species_name("sigma-"), "σ−");
        assert_eq!(species_name("σ−"), "σ−");
        assert_eq!(species_name("s1"), "σ1");
        assert_eq!(ascii_species("σ−"), "s-");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(NetworkDescription::parse("model toric\nsize 2\n").is_err());
        assert!(NetworkDescription::parse("model klein\nsize 2 2\n").is_err());
        assert!(NetworkDescription::parse("model toric\nsize 2 2\ninsert Q(0,0) X1\n").is_err());
        assert!(NetworkDescription::parse("model toric\nsize 2 2\ninsert V(0,0) Y1\n").is_err());
    }
}
