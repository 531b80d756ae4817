//! The lattice-expression exchange format.
//!
//! ```text
//! expr ::= term ("+" term)*
//! term ::= ("U" | "A"k | "D"k | "E"k) ["(" scale ")"]
//! ```
//!
//! Root lattices are negative definite: the Gram matrix of `A_k`, `D_k` and
//! `E_k` is minus the Cartan matrix. A scale `(m)` multiplies the whole Gram
//! block by `m`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::GramLattice;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A negative definite ADE root lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootLattice {
    A(u32),
    D(u32),
    E(u32),
}

impl RootLattice {
    pub fn new_a(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidLattice("A_k needs k >= 1".into()));
        }
        Ok(RootLattice::A(k))
    }

    pub fn new_d(k: u32) -> Result<Self> {
        if k < 4 {
            return Err(Error::InvalidLattice(format!("D_{k} needs k >= 4")));
        }
        Ok(RootLattice::D(k))
    }

    pub fn new_e(k: u32) -> Result<Self> {
        if !(6..=8).contains(&k) {
            return Err(Error::InvalidLattice(format!("E_{k} needs k in {{6,7,8}}")));
        }
        Ok(RootLattice::E(k))
    }

    pub fn rank(self) -> u32 {
        match self {
            RootLattice::A(k) | RootLattice::D(k) | RootLattice::E(k) => k,
        }
    }

    /// Edges of the Dynkin diagram on nodes `0..rank`.
    fn edges(self) -> Vec<(usize, usize)> {
        let n = self.rank() as usize;
        match self {
            RootLattice::A(_) => (1..n).map(|i| (i - 1, i)).collect(),
            RootLattice::D(_) => {
                // chain 0..n-2, node n-1 hangs off node n-3
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            RootLattice::E(_) => {
                // chain 0..n-2, node n-1 hangs off node 2
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((2, n - 1));
                e
            }
        }
    }

    pub fn gram(self) -> IntMatrix {
        let n = self.rank() as usize;
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = BigInt::from(-2);
        }
        for (a, b) in self.edges() {
            g[(a, b)] = BigInt::from(1);
            g[(b, a)] = BigInt::from(1);
        }
        g
    }
}

impl fmt::Display for RootLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLattice::A(k) => write!(f, "A{k}"),
            RootLattice::D(k) => write!(f, "D{k}"),
            RootLattice::E(k) => write!(f, "E{k}"),
        }
    }
}

impl FromStr for RootLattice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let e: LatticeExpr = s.parse()?;
        match e.terms.as_slice() {
            [LatticeTerm {
                block: Block::Root(r),
                scale: 1,
            }] => Ok(*r),
            _ => Err(Error::Parse {
                expr: s.into(),
                reason: "expected a single untwisted root lattice".into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Hyperbolic,
    Root(RootLattice),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeTerm {
    pub block: Block,
    pub scale: u64,
}

impl LatticeTerm {
    pub fn gram(&self) -> IntMatrix {
        let base = match self.block {
            Block::Hyperbolic => IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]),
            Block::Root(r) => r.gram(),
        };
        let s = BigInt::from(self.scale);
        base.map(|x| x * &s)
    }
}

impl fmt::Display for LatticeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.block {
            Block::Hyperbolic => write!(f, "U")?,
            Block::Root(r) => write!(f, "{r}")?,
        }
        if self.scale != 1 {
            write!(f, "({})", self.scale)?;
        }
        Ok(())
    }
}

/// A direct sum of scaled `U` and ADE blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeExpr {
    pub terms: Vec<LatticeTerm>,
}

impl LatticeExpr {
    pub fn rank(&self) -> usize {
        self.terms
            .iter()
            .map(|t| match t.block {
                Block::Hyperbolic => 2,
                Block::Root(r) => r.rank() as usize,
            })
            .sum()
    }

    pub fn gram(&self) -> IntMatrix {
        self.terms
            .iter()
            .map(LatticeTerm::gram)
            .reduce(|a, b| a.direct_sum(&b))
            .unwrap_or_else(|| IntMatrix::zeros(0, 0))
    }

    pub fn build(&self) -> Result<GramLattice> {
        GramLattice::new(self.gram(), Some(self.to_string()))
    }

    /// The untwisted ADE summands, sorted.
    pub fn root_summands(&self) -> Vec<RootLattice> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .filter_map(|t| match (t.block, t.scale) {
                (Block::Root(r), 1) => Some(r),
                _ => None,
            })
            .collect();
        v.sort();
        v
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for LatticeExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: String| Error::Parse {
            expr: s.to_string(),
            reason,
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty expression".into()));
        }
        let mut terms = Vec::new();
        for raw in compact.split('+') {
            if raw.is_empty() {
                return Err(fail("empty term".into()));
            }
            terms.push(parse_term(raw).map_err(|e| match e {
                Error::InvalidLattice(m) => Error::InvalidLattice(m),
                _ => fail(format!("bad term `{raw}`")),
            })?);
        }
        Ok(LatticeExpr { terms })
    }
}

fn parse_term(raw: &str) -> Result<LatticeTerm> {
    let bad = || Error::InvalidInput(raw.to_string());
    let (head, scale) = match raw.find('(') {
        Some(open) => {
            let inner = raw[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            let scale: i64 = inner.parse().map_err(|_| bad())?;
            if scale <= 0 {
                return Err(Error::InvalidLattice(format!(
                    "scale must be positive, got {scale}"
                )));
            }
            (&raw[..open], scale as u64)
        }
        None => (raw, 1),
    };
    let mut chars = head.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let digits = chars.as_str();
    let index = || -> Result<u32> {
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        digits.parse().map_err(|_| bad())
    };
    let block = match kind {
        'U' if digits.is_empty() => Block::Hyperbolic,
        'A' => Block::Root(RootLattice::new_a(index()?)?),
        'D' => Block::Root(RootLattice::new_d(index()?)?),
        'E' => Block::Root(RootLattice::new_e(index()?)?),
        _ => return Err(bad()),
    };
    Ok(LatticeTerm { block, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram_of(s: &str) -> IntMatrix {
        s.parse::<LatticeExpr>().unwrap().gram()
    }

    #[test]
    fn hyperbolic_planes() {
        assert_eq!(gram_of("U"), IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(
            gram_of("U(2)"),
            IntMatrix::from_i64(&[vec![0, 2], vec![2, 0]])
        );
    }

    #[test]
    fn root_lattice_determinants() {
        // |det| of A_k, D_k, E_6, E_7, E_8 is k+1, 4, 3, 2, 1
        for k in 1..=8 {
            assert_eq!(
                RootLattice::A(k).gram().determinant().magnitude().clone(),
                (k + 1).into()
            );
        }
        for k in 4..=10 {
            assert_eq!(
                RootLattice::D(k).gram().determinant().magnitude().clone(),
                4u32.into()
            );
        }
        for (k, d) in [(6, 3u32), (7, 2), (8, 1)] {
            assert_eq!(
                RootLattice::E(k).gram().determinant().magnitude().clone(),
                d.into()
            );
        }
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        if m.is_empty() {
            return 1;
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| [&r[..j], &r[j + 1..]].concat())
                    .collect();
                (if j % 2 == 0 { 1 } else { -1 }) * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn u_plus_d4_determinant() {
        let g = gram_of("U+D4");
        assert_eq!(g.rows(), 6);
        let rows: Vec<Vec<i64>> = g
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        // det U = -1, det D4 = 4
        assert_eq!(cofactor_det(&rows), -4);
        assert_eq!(g.determinant(), BigInt::from(-4));
    }

    #[test]
    fn whitespace_and_display_roundtrip() {
        let e: LatticeExpr = " U(2) + E8(2) ".parse().unwrap();
        assert_eq!(e.to_string(), "U(2)+E8(2)");
        assert_eq!(e.rank(), 10);
    }

    #[test]
    fn rejects_bad_expressions() {
        for bad in [
            "", "U+", "E9", "E5", "D3", "A0", "U(0)", "U(-2)", "X4", "U2", "D4(", "A",
        ] {
            assert!(bad.parse::<LatticeExpr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn root_summands_skip_twisted_blocks() {
        let e: LatticeExpr = "U+E8+D4+E8(2)".parse().unwrap();
        assert_eq!(
            e.root_summands(),
            vec![RootLattice::D(4), RootLattice::E(8)]
        );
    }
}
