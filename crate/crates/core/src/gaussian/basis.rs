//! Basis definitions and the line-oriented basis file format.
//!
//! ```text
//! # comment
//! center <z|A|B|mid> group <A|B|U> exp <value>
//! eventempered center <z|A|B|mid> group <A|B|U> alpha0 <v> beta <v> n <int>
//! ```
//!
//! Numeric centers are in Bohr. The symbolic centers `A`, `B` and `mid`
//! follow the nuclei (-R/2, +R/2) and the bond midpoint, so one file serves
//! a whole scan.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::integrals::{Group, Primitive};
use crate::coords::Geometry;
use crate::error::{Error, Result};

/// Exponents alpha0 * beta^k, k = 0..n, ascending.
pub fn even_tempered(alpha0: f64, beta: f64, n: usize) -> Result<Vec<f64>> {
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::Domain(format!("alpha0 must be > 0, got {alpha0}")));
    }
    if !(beta > 1.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be > 1, got {beta}")));
    }
    if n == 0 {
        return Err(Error::Domain("even-tempered count must be >= 1".into()));
    }
    Ok((0..n).map(|k| alpha0 * beta.powi(k as i32)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Center {
    NucleusA,
    NucleusB,
    Midpoint,
    Fixed(f64),
}

impl Center {
    pub fn resolve(self, g: &Geometry) -> f64 {
        match self {
            Center::NucleusA => g.z_a(),
            Center::NucleusB => g.z_b(),
            Center::Midpoint => 0.0,
            Center::Fixed(z) => z,
        }
    }

    fn is_origin(self) -> bool {
        matches!(self, Center::Midpoint | Center::Fixed(0.0))
    }
}

impl std::fmt::Display for Center {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Center::NucleusA => write!(f, "A"),
            Center::NucleusB => write!(f, "B"),
            Center::Midpoint => write!(f, "mid"),
            Center::Fixed(z) => write!(f, "{z}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub center: Center,
    pub exponent: f64,
    pub group: Group,
}

/// Geometry-independent basis description.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BasisSpec {
    pub entries: Vec<BasisEntry>,
}

impl BasisSpec {
    pub fn new(entries: Vec<BasisEntry>) -> Result<Self> {
        let b = Self { entries };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::Domain("basis has no primitives".into()));
        }
        for e in &self.entries {
            if !(e.exponent > 0.0 && e.exponent.is_finite()) {
                return Err(Error::Domain(format!("exponent must be > 0, got {}", e.exponent)));
            }
            if e.group == Group::U && !e.center.is_origin() {
                return Err(Error::Domain(format!("group U primitive must sit at z = 0, got {}", e.center)));
            }
        }
        Ok(())
    }

    pub fn push_even_tempered(&mut self, center: Center, group: Group, alpha0: f64, beta: f64, n: usize) -> Result<()> {
        for exponent in even_tempered(alpha0, beta, n)? {
            self.entries.push(BasisEntry { center, exponent, group });
        }
        Ok(())
    }

    /// Even-tempered sets on both nuclei plus an optional mid-bond set.
    pub fn three_center(nuclear: (f64, f64, usize), midbond: Option<(f64, f64, usize)>) -> Result<Self> {
        let mut b = Self::default();
        let (a0, beta, n) = nuclear;
        b.push_even_tempered(Center::NucleusA, Group::A, a0, beta, n)?;
        b.push_even_tempered(Center::NucleusB, Group::B, a0, beta, n)?;
        if let Some((a0, beta, n)) = midbond {
            b.push_even_tempered(Center::Midpoint, Group::U, a0, beta, n)?;
        }
        b.validate()?;
        Ok(b)
    }

    /// Reference basis: 12 s per nucleus (alpha0 0.02, beta 2.6) and
    /// 6 mid-bond s (alpha0 0.05, beta 3.0).
    pub fn reference() -> Self {
        Self::three_center((0.02, 2.6, 12), Some((0.05, 3.0, 6))).expect("reference basis is valid")
    }

    /// Copy without the primitives of one group.
    pub fn without_group(&self, group: Group) -> Result<Self> {
        Self::new(self.entries.iter().copied().filter(|e| e.group != group).collect())
    }

    pub fn primitives(&self, g: &Geometry) -> Vec<Primitive> {
        self.entries
            .iter()
            .map(|e| Primitive::new(e.center.resolve(g), e.exponent, e.group))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "center {} group {} exp {:e}", e.center, e.group.label(), e.exponent);
        }
        s
    }
}

fn parse_center(tok: &str) -> std::result::Result<Center, String> {
    match tok {
        "A" => Ok(Center::NucleusA),
        "B" => Ok(Center::NucleusB),
        "mid" | "U" => Ok(Center::Midpoint),
        other => other.parse::<f64>().map(Center::Fixed).map_err(|_| format!("bad center '{other}'")),
    }
}

fn parse_group(tok: &str) -> std::result::Result<Group, String> {
    match tok {
        "A" => Ok(Group::A),
        "B" => Ok(Group::B),
        "U" => Ok(Group::U),
        other => Err(format!("bad group '{other}'")),
    }
}

/// Reads `key value` pairs in the fixed order given by `keys`.
fn keyed<'a>(toks: &[&'a str], keys: &[&str]) -> std::result::Result<Vec<&'a str>, String> {
    if toks.len() != 2 * keys.len() {
        return Err(format!("expected {} tokens, found {}", 2 * keys.len(), toks.len()));
    }
    keys.iter()
        .enumerate()
        .map(|(i, k)| {
            if toks[2 * i] == *k {
                Ok(toks[2 * i + 1])
            } else {
                Err(format!("expected '{k}', found '{}'", toks[2 * i]))
            }
        })
        .collect()
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
    s.parse::<T>().map_err(|_| format!("bad {what} '{s}'"))
}

impl FromStr for BasisSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut spec = BasisSpec::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::BasisParse { line: lineno + 1, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "eventempered" {
                let v = keyed(&toks[1..], &["center", "group", "alpha0", "beta", "n"]).map_err(err)?;
                let center = parse_center(v[0]).map_err(err)?;
                let group = parse_group(v[1]).map_err(err)?;
                let alpha0: f64 = parse_num(v[2], "alpha0").map_err(err)?;
                let beta: f64 = parse_num(v[3], "beta").map_err(err)?;
                let n: usize = parse_num(v[4], "n").map_err(err)?;
                spec.push_even_tempered(center, group, alpha0, beta, n)
                    .map_err(|e| Error::BasisParse { line: lineno + 1, msg: e.to_string() })?;
            } else {
                let v = keyed(&toks, &["center", "group", "exp"]).map_err(err)?;
                let center = parse_center(v[0]).map_err(err)?;
                let group = parse_group(v[1]).map_err(err)?;
                let exponent: f64 = parse_num(v[2], "exponent").map_err(err)?;
                spec.entries.push(BasisEntry { center, exponent, group });
            }
            if let Some(last) = spec.entries.last() {
                if !(last.exponent > 0.0) || (last.group == Group::U && !last.center.is_origin()) {
                    return Err(Error::BasisParse {
                        line: lineno + 1,
                        msg: "exponent must be > 0 and group U must sit at z = 0".into(),
                    });
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}
