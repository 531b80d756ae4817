//! Kodaira fiber types and the residue-characteristic-zero valuation table.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::RootLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaType {
    /// `I_n`, `n >= 1`.
    I(u32),
    II,
    III,
    IV,
    /// `I_n^*`, `n >= 0`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Euler number of the singular fiber.
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components `m_v`.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IStar(n) => n + 5,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// Root lattice spanned by the components missing the zero section.
    pub fn root_lattice(self) -> Option<RootLattice> {
        match self {
            KodairaType::I(n) if n >= 2 => Some(RootLattice::A(n - 1)),
            KodairaType::I(_) | KodairaType::II => None,
            KodairaType::III => Some(RootLattice::A(1)),
            KodairaType::IV => Some(RootLattice::A(2)),
            KodairaType::IStar(n) => Some(RootLattice::D(n + 4)),
            KodairaType::IVStar => Some(RootLattice::E(6)),
            KodairaType::IIIStar => Some(RootLattice::E(7)),
            KodairaType::IIStar => Some(RootLattice::E(8)),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown Kodaira type `{s}`"));
        Ok(match s {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            _ => {
                let rest = s.strip_prefix('I').ok_or_else(bad)?;
                if let Some(n) = rest.strip_suffix('*') {
                    KodairaType::IStar(n.parse().map_err(|_| bad())?)
                } else {
                    let n: u32 = rest.parse().map_err(|_| bad())?;
                    if n == 0 {
                        return Err(bad());
                    }
                    KodairaType::I(n)
                }
            }
        })
    }
}

/// `(v(c4), v(c6), v(Δ))`; `None` is the valuation of the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Valuations {
    pub c4: Option<i64>,
    pub c6: Option<i64>,
    pub disc: i64,
}

fn at_least(v: Option<i64>, k: i64) -> bool {
    v.is_none_or(|v| v >= k)
}

impl Valuations {
    /// Strips `(4, 6, 12)` while all three allow it. Returns the count.
    pub fn minimalize(self) -> (Valuations, u32) {
        let mut v = self;
        let mut k = 0;
        while at_least(v.c4, 4) && at_least(v.c6, 6) && v.disc >= 12 {
            v = Valuations {
                c4: v.c4.map(|x| x - 4),
                c6: v.c6.map(|x| x - 6),
                disc: v.disc - 12,
            };
            k += 1;
        }
        (v, k)
    }

    pub fn is_nonnegative(&self) -> bool {
        at_least(self.c4, 0) && at_least(self.c6, 0) && self.disc >= 0
    }

    pub fn display(&self) -> (String, String, String) {
        let s = |v: Option<i64>| v.map_or("inf".to_string(), |x| x.to_string());
        (s(self.c4), s(self.c6), self.disc.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Smooth,
    Singular(KodairaType),
}

/// Kodaira type of minimal valuations in residue characteristic 0.
/// `None` when no fiber type has these valuations.
pub fn classify(v: &Valuations) -> Option<Reduction> {
    use KodairaType::*;
    if !v.is_nonnegative() {
        return None;
    }
    let (c4, c6, d) = (v.c4, v.c6, v.disc);
    let eq = |x: Option<i64>, k: i64| x == Some(k);
    let t = match d {
        0 => return Some(Reduction::Smooth),
        _ if eq(c4, 0) && eq(c6, 0) => I(d as u32),
        2 if at_least(c4, 1) && eq(c6, 1) => II,
        3 if eq(c4, 1) && at_least(c6, 2) => III,
        4 if at_least(c4, 2) && eq(c6, 2) => IV,
        6 if at_least(c4, 2) && at_least(c6, 3) => IStar(0),
        _ if d > 6 && eq(c4, 2) && eq(c6, 3) => IStar((d - 6) as u32),
        8 if at_least(c4, 3) && eq(c6, 4) => IVStar,
        9 if eq(c4, 3) && at_least(c6, 5) => IIIStar,
        10 if at_least(c4, 4) && eq(c6, 5) => IIStar,
        _ => return None,
    };
    Some(Reduction::Singular(t))
}
