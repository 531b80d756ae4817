//! Even integral lattices given by Gram matrices and their Nikulin
//! invariants.

mod discriminant;
mod expr;

pub use discriminant::{DiscriminantGroup, DELTA_ENUMERATION_CAP};
pub use expr::{Block, LatticeExpr, LatticeTerm, RootLattice};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rational::Rational;

/// An even, non-degenerate integral lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    name: Option<String>,
}

impl GramLattice {
    pub fn new(gram: IntMatrix, name: Option<String>) -> Result<Self> {
        if gram.rows() == 0 {
            return Err(Error::InvalidLattice("rank must be positive".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
        }
        if (0..gram.rows()).any(|i| gram[(i, i)].is_odd()) {
            return Err(Error::InvalidLattice("lattice is not even".into()));
        }
        if gram.determinant().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(GramLattice { gram, name })
    }

    /// Builds a lattice from the expression grammar, e.g. `"U+D4"`.
    pub fn from_expr(expr: &str) -> Result<Self> {
        expr.parse::<LatticeExpr>()?.build()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        GramLattice {
            gram: self.gram.direct_sum(&other.gram),
            name,
        }
    }

    /// `L(m)`: the form multiplied by `m`.
    pub fn scaled(&self, m: u64) -> Result<GramLattice> {
        if m == 0 {
            return Err(Error::InvalidLattice("scale must be positive".into()));
        }
        let s = BigInt::from(m);
        Ok(GramLattice {
            gram: self.gram.map(|x| x * &s),
            name: self.name.as_ref().map(|n| format!("({n})({m})")),
        })
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let n = self.rank();
        let mut acc = Rational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[j].is_zero() && !self.gram[(i, j)].is_zero() {
                    acc += &x[i] * Rational::from_integer(self.gram[(i, j)].clone()) * &y[j];
                }
            }
        }
        acc
    }

    /// Inertia of the form, by congruence diagonalization over the rationals.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a = self.gram.to_rational();
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                    a.swap_rows(k, j);
                    a.swap_cols(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                    // e_k <- e_k + e_j gives diagonal entry 2 a_kj
                    for c in 0..n {
                        let v = a[(j, c)].clone();
                        a[(k, c)] += v;
                    }
                    for r in 0..n {
                        let v = a[(r, j)].clone();
                        a[(r, k)] += v;
                    }
                } else {
                    // row k is zero; impossible for a non-degenerate form
                    continue;
                }
            }
            let p = a[(k, k)].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &p;
                for c in k..n {
                    let d = &f * &a[(k, c)];
                    a[(i, c)] -= d;
                }
                for r in k..n {
                    let d = &f * &a[(r, k)];
                    a[(r, i)] -= d;
                }
            }
        }
        Signature {
            t_plus: pos,
            t_minus: neg,
        }
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        DiscriminantGroup::of(self)
    }

    /// `delta = 0` iff every dual vector has integral norm.
    pub fn delta(&self) -> Result<u8> {
        self.discriminant_group().delta()
    }

    pub fn nikulin_invariants(&self) -> Result<LatticeInvariants> {
        let sig = self.signature();
        let disc = self.discriminant_group();
        let factors = disc.invariant_factors().to_vec();
        let a = factors.len();
        let p = match factors.first() {
            Some(first) if factors.iter().all(|d| d == first) && is_prime(first) => first.to_u64(),
            _ => None,
        };
        let two_elementary = a == 0 || p == Some(2);
        let delta = if two_elementary {
            Some(disc.delta()?)
        } else {
            None
        };
        Ok(LatticeInvariants {
            rank: self.rank(),
            t_plus: sig.t_plus,
            t_minus: sig.t_minus,
            a,
            p,
            delta,
            invariant_factors: factors,
        })
    }
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GramLattice")
            .field("name", &self.name)
            .field("gram", &self.gram)
            .finish()
    }
}

fn is_prime(n: &BigInt) -> bool {
    let Some(n) = n.to_u64() else { return false };
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub t_plus: usize,
    pub t_minus: usize,
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature {
            t_plus: self.t_plus + o.t_plus,
            t_minus: self.t_minus + o.t_minus,
        }
    }
}

/// The tuple `(t+, t-, a, p, delta)` plus the invariant factors it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub t_plus: usize,
    pub t_minus: usize,
    pub a: usize,
    /// The prime `p` when the discriminant group is a nontrivial `(Z/p)^a`.
    pub p: Option<u64>,
    /// Defined only for 2-elementary (including unimodular) lattices.
    pub delta: Option<u8>,
    pub invariant_factors: Vec<BigInt>,
}

impl LatticeInvariants {
    /// Unimodular lattices count as p-elementary for every p.
    pub fn is_p_elementary(&self, p: u64) -> bool {
        self.a == 0 || self.p == Some(p)
    }

    pub fn signature(&self) -> Signature {
        Signature {
            t_plus: self.t_plus,
            t_minus: self.t_minus,
        }
    }

    pub fn key(&self) -> NikulinKey {
        NikulinKey {
            delta: self.delta,
            t_plus: self.t_plus,
            t_minus: self.t_minus,
            a: self.a,
            p: self.p,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rank": self.rank,
            "signature": [self.t_plus, self.t_minus],
            "a": self.a,
            "p": self.p,
            "delta": self.delta,
            "invariant_factors": self
                .invariant_factors
                .iter()
                .map(|d| d.to_u64().map_or_else(|| serde_json::json!(d.to_string()), serde_json::Value::from))
                .collect::<Vec<_>>(),
        })
    }
}

/// Canonical comparison key for even indefinite p-elementary lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NikulinKey {
    pub delta: Option<u8>,
    pub t_plus: usize,
    pub t_minus: usize,
    pub a: usize,
    pub p: Option<u64>,
}

/// JSON lattice object: `{"expr": "U+D4"}` or `{"name": ..., "gram": [[...]]}`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Expr {
        expr: String,
    },
    Gram {
        #[serde(default)]
        name: Option<String>,
        gram: Vec<Vec<i64>>,
    },
}

impl LatticeSpec {
    pub fn build(&self) -> Result<GramLattice> {
        match self {
            LatticeSpec::Expr { expr } => GramLattice::from_expr(expr),
            LatticeSpec::Gram { name, gram } => {
                let n = gram.len();
                if gram.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidLattice("Gram matrix must be square".into()));
                }
                GramLattice::new(IntMatrix::from_i64(gram), name.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(expr: &str) -> LatticeInvariants {
        GramLattice::from_expr(expr)
            .unwrap()
            .nikulin_invariants()
            .unwrap()
    }

    #[test]
    fn signatures() {
        let sig = |e: &str| GramLattice::from_expr(e).unwrap().signature();
        assert_eq!(
            sig("U"),
            Signature {
                t_plus: 1,
                t_minus: 1
            }
        );
        assert_eq!(
            sig("E8"),
            Signature {
                t_plus: 0,
                t_minus: 8
            }
        );
        assert_eq!(
            sig("U+D4"),
            Signature {
                t_plus: 1,
                t_minus: 5
            }
        );
        assert_eq!(
            sig("U+U(2)+E8+E8"),
            Signature {
                t_plus: 2,
                t_minus: 18
            }
        );
    }

    #[test]
    fn signature_with_zero_diagonal_block() {
        // [[0,1,0],[1,0,0],[0,0,2]] needs the e_k + e_j trick
        let g = IntMatrix::from_i64(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 2]]);
        let l = GramLattice::new(g, None).unwrap();
        assert_eq!(
            l.signature(),
            Signature {
                t_plus: 2,
                t_minus: 1
            }
        );
    }

    #[test]
    fn invariants_of_known_lattices() {
        let i = inv("U+D4");
        assert_eq!(
            (i.t_plus, i.t_minus, i.a, i.delta, i.p),
            (1, 5, 2, Some(0), Some(2))
        );
        let i = inv("U(2)+E8(2)");
        assert_eq!((i.a, i.delta), (10, Some(0)));
        let i = inv("A1");
        assert_eq!((i.a, i.delta), (1, Some(1)));
        let i = inv("U+E8");
        assert_eq!((i.a, i.p, i.delta), (0, None, Some(0)));
        let i = inv("U+A2");
        assert_eq!((i.a, i.p, i.delta), (1, Some(3), None));
        let i = inv("A3");
        assert_eq!((i.a, i.p, i.delta), (1, None, None));
        assert!(GramLattice::from_expr("A3").unwrap().delta().is_err());
    }

    #[test]
    fn rejects_invalid_gram() {
        let odd = IntMatrix::from_i64(&[vec![1, 0], vec![0, 2]]);
        assert!(GramLattice::new(odd, None).is_err());
        let asym = IntMatrix::from_i64(&[vec![2, 1], vec![0, 2]]);
        assert!(GramLattice::new(asym, None).is_err());
        let degenerate = IntMatrix::from_i64(&[vec![2, 2], vec![2, 2]]);
        assert_eq!(GramLattice::new(degenerate, None), Err(Error::Degenerate));
    }

    #[test]
    fn json_specs() {
        let s: LatticeSpec = serde_json::from_str(r#"{"expr": "U+D4"}"#).unwrap();
        assert_eq!(s.build().unwrap().rank(), 6);
        let s: LatticeSpec = serde_json::from_str(r#"{"name": "A1", "gram": [[-2]]}"#).unwrap();
        let l = s.build().unwrap();
        assert_eq!(l.name(), Some("A1"));
        let s: LatticeSpec = serde_json::from_str(r#"{"gram": [[-2, 1]]}"#).unwrap();
        assert!(s.build().is_err());
    }
}
