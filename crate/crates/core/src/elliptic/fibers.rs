use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::kodaira::{classify, KodairaType, Reduction, Valuations};
use super::{invariants_c4c6delta, WeierstrassModel};
use crate::error::{Error, Result};
use crate::lattice::{LatticeExpr, RootLattice};
use crate::poly::Poly;

/// Irreducible factor of `Δ` over `Q` (monic) or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// Number of geometric points in the place.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub place: Place,
    /// Valuations before minimalisation.
    pub raw: Valuations,
    pub minimal: Valuations,
    pub kodaira: KodairaType,
}

impl Fiber {
    pub fn degree(&self) -> usize {
        self.place.degree()
    }

    /// Euler contribution of all geometric fibers in the place.
    pub fn euler(&self) -> u32 {
        self.degree() as u32 * self.kodaira.euler()
    }

    pub fn to_json(&self) -> Value {
        let (c4, c6, d) = self.minimal.display();
        json!({
            "place": self.place.to_string(),
            "degree": self.degree(),
            "kodaira": self.kodaira.to_string(),
            "euler": self.kodaira.euler(),
            "components": self.kodaira.components(),
            "root_lattice": self.kodaira.root_lattice().map(|r| r.to_string()),
            "valuations": [c4, c6, d],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    DegreeBound {
        coefficient: String,
        degree: usize,
        bound: usize,
    },
    /// Minimal valuations at infinity with a negative entry; no fiber type.
    NegativeAtInfinity(Valuations),
    EulerMismatch {
        total: u32,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DegreeBound {
                coefficient,
                degree,
                bound,
            } => {
                write!(
                    f,
                    "deg {coefficient} = {degree} exceeds the K3 bound {bound}"
                )
            }
            Diagnostic::NegativeAtInfinity(v) => {
                let (c4, c6, d) = v.display();
                write!(
                    f,
                    "negative valuation at infinity: (v(c4), v(c6), v(disc)) = ({c4}, {c6}, {d})"
                )
            }
            Diagnostic::EulerMismatch { total } => write!(f, "total Euler number {total} != 24"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberConfiguration {
    pub fibers: Vec<Fiber>,
    pub diagnostics: Vec<Diagnostic>,
    pub disc_degree: usize,
}

impl FiberConfiguration {
    pub fn total_euler(&self) -> u32 {
        self.fibers.iter().map(Fiber::euler).sum()
    }

    pub fn is_valid_k3(&self) -> bool {
        self.diagnostics.is_empty()
    }

    /// Root lattices of all geometric fibers, sorted, with multiplicity.
    pub fn root_lattices(&self) -> Vec<RootLattice> {
        let mut out: Vec<RootLattice> = self
            .fibers
            .iter()
            .filter_map(|f| f.kodaira.root_lattice().map(|r| (r, f.degree())))
            .flat_map(|(r, d)| std::iter::repeat_n(r, d))
            .collect();
        out.sort();
        out
    }

    /// `Σ (m_v - 1)` over geometric fibers.
    pub fn fiber_rank(&self) -> usize {
        self.fibers
            .iter()
            .map(|f| f.degree() * (f.kodaira.components() as usize - 1))
            .sum()
    }

    /// Geometric fiber counts per Kodaira type.
    pub fn type_counts(&self) -> BTreeMap<KodairaType, usize> {
        let mut m = BTreeMap::new();
        for f in &self.fibers {
            *m.entry(f.kodaira).or_insert(0) += f.degree();
        }
        m
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .type_counts()
            .iter()
            .rev()
            .map(|(t, n)| {
                if *n == 1 {
                    t.to_string()
                } else {
                    format!("{n}x{t}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "fibers": self.fibers.iter().map(Fiber::to_json).collect::<Vec<_>>(),
            "total_euler": self.total_euler(),
            "disc_degree": self.disc_degree,
            "valid_k3": self.is_valid_k3(),
            "diagnostics": self.diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "summary": self.summary(),
        })
    }
}

fn unclassifiable(place: &Place, v: &Valuations) -> Error {
    let (c4, c6, disc) = v.display();
    Error::Unclassifiable {
        place: place.to_string(),
        c4,
        c6,
        disc,
    }
}

/// Valuation at infinity of a coefficient of weight `w`: `w - deg`, which is
/// negative when the coefficient exceeds its K3 degree.
fn valuation_at_infinity(p: &Poly, weight: i64) -> Option<i64> {
    p.degree().map(|d| weight - d as i64)
}

pub fn analyze_fibers(model: &WeierstrassModel) -> Result<FiberConfiguration> {
    let inv = invariants_c4c6delta(model)?;
    let mut diagnostics: Vec<Diagnostic> = model
        .degree_violations()
        .into_iter()
        .map(|(coefficient, degree, bound)| Diagnostic::DegreeBound {
            coefficient,
            degree,
            bound,
        })
        .collect();

    let mut fibers = Vec::new();
    for (factor, _) in inv.disc.factor().factors {
        let raw = Valuations {
            c4: inv.c4.valuation(&factor).map(|v| v as i64),
            c6: inv.c6.valuation(&factor).map(|v| v as i64),
            disc: inv.disc.valuation(&factor).unwrap() as i64,
        };
        let (minimal, _) = raw.minimalize();
        let place = Place::Finite(factor);
        match classify(&minimal) {
            Some(Reduction::Singular(kodaira)) => fibers.push(Fiber {
                place,
                raw,
                minimal,
                kodaira,
            }),
            Some(Reduction::Smooth) => {}
            None => return Err(unclassifiable(&place, &minimal)),
        }
    }

    let raw = Valuations {
        c4: valuation_at_infinity(&inv.c4, 8),
        c6: valuation_at_infinity(&inv.c6, 12),
        disc: valuation_at_infinity(&inv.disc, 24).expect("Δ is nonzero"),
    };
    let (minimal, _) = raw.minimalize();
    if !minimal.is_nonnegative() {
        diagnostics.push(Diagnostic::NegativeAtInfinity(minimal));
    } else {
        match classify(&minimal) {
            Some(Reduction::Singular(kodaira)) => fibers.push(Fiber {
                place: Place::Infinity,
                raw,
                minimal,
                kodaira,
            }),
            Some(Reduction::Smooth) => {}
            None => return Err(unclassifiable(&Place::Infinity, &minimal)),
        }
    }

    let config = FiberConfiguration {
        fibers,
        diagnostics,
        disc_degree: inv.disc.degree().unwrap(),
    };
    let total = config.total_euler();
    let mut config = config;
    if total != 24 {
        config.diagnostics.push(Diagnostic::EulerMismatch { total });
    }
    Ok(config)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiodaTateReport {
    pub claimed: String,
    pub claimed_rank: usize,
    pub fiber_rank: usize,
    /// `rank S - 2 - Σ (m_v - 1)`.
    pub mw_rank: i64,
    pub required: Vec<RootLattice>,
    pub found: Vec<RootLattice>,
    /// Fiber root lattices equal the ADE summands of the claim.
    pub exact: bool,
}

impl ShiodaTateReport {
    pub fn to_json(&self) -> Value {
        let names = |v: &[RootLattice]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>();
        json!({
            "claimed_S": self.claimed,
            "rank": self.claimed_rank,
            "fiber_rank": self.fiber_rank,
            "mw": self.mw_rank,
            "required": names(&self.required),
            "found": names(&self.found),
            "exact": self.exact,
        })
    }
}

/// Checks a claimed Néron-Severi lattice against the fibers.
pub fn shioda_tate_check(
    config: &FiberConfiguration,
    claimed: &LatticeExpr,
) -> Result<ShiodaTateReport> {
    if !config.is_valid_k3() {
        let reasons: Vec<String> = config.diagnostics.iter().map(|d| d.to_string()).collect();
        return Err(Error::InvalidConfiguration(reasons.join("; ")));
    }
    let rank = claimed.rank();
    let fiber_rank = config.fiber_rank();
    let mw = rank as i64 - 2 - fiber_rank as i64;
    if mw < 0 {
        return Err(Error::NegativeMordellWeil {
            rank,
            needed: 2 + fiber_rank as i64,
            mw,
        });
    }
    let required = claimed.root_summands();
    let found = config.root_lattices();
    let mut pool = found.clone();
    for r in &required {
        match pool.iter().position(|x| x == r) {
            Some(i) => {
                pool.remove(i);
            }
            None => return Err(Error::MissingSummand(r.to_string())),
        }
    }
    Ok(ShiodaTateReport {
        claimed: claimed.to_string(),
        claimed_rank: rank,
        fiber_rank,
        mw_rank: mw,
        exact: pool.is_empty() && found.len() == required.len(),
        required,
        found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use KodairaType::*;

    fn mono(k: usize) -> Vec<i64> {
        let mut v = vec![0; k + 1];
        v[k] = 1;
        v
    }

    fn counts(c: &FiberConfiguration) -> Vec<(String, usize)> {
        c.type_counts()
            .into_iter()
            .map(|(t, n)| (t.to_string(), n))
            .collect()
    }

    #[test]
    fn u_e8_d4_model() {
        let m = WeierstrassModel::from_ints(&[], &mono(2), &mono(7));
        let c = analyze_fibers(&m).unwrap();
        assert_eq!(c.total_euler(), 24);
        assert!(c.is_valid_k3());
        assert_eq!(
            counts(&c),
            vec![("I1".into(), 8), ("I0*".into(), 1), ("II*".into(), 1)]
        );
        let at_inf = c
            .fibers
            .iter()
            .find(|f| f.place == Place::Infinity)
            .unwrap();
        assert_eq!(at_inf.kodaira, IIStar);
        let r = shioda_tate_check(&c, &"U+E8+D4".parse().unwrap()).unwrap();
        assert_eq!((r.mw_rank, r.fiber_rank, r.claimed_rank), (0, 12, 14));
        assert!(r.exact);
        assert_eq!(
            shioda_tate_check(&c, &"U+E8+E8".parse().unwrap()),
            Err(Error::MissingSummand("E8".into()))
        );
        assert!(matches!(
            shioda_tate_check(&c, &"U+E8".parse().unwrap()),
            Err(Error::NegativeMordellWeil { mw: -4, .. })
        ));
    }

    #[test]
    fn u_d4_model() {
        let m = WeierstrassModel::from_ints(&[], &mono(2), &mono(11));
        let c = analyze_fibers(&m).unwrap();
        assert_eq!(
            counts(&c),
            vec![("I1".into(), 16), ("II".into(), 1), ("I0*".into(), 1)]
        );
        let zero = c
            .fibers
            .iter()
            .find(|f| f.place == Place::Finite(Poly::x()))
            .unwrap();
        assert_eq!(zero.raw.disc, 6);
        let inf = c
            .fibers
            .iter()
            .find(|f| f.place == Place::Infinity)
            .unwrap();
        assert_eq!(inf.raw.disc, 2);
    }

    #[test]
    fn u_e8_e8_model() {
        let m = WeierstrassModel::from_ints(&[], &[], &[0, 0, 0, 0, 0, 1, 0, -1]);
        let c = analyze_fibers(&m).unwrap();
        assert_eq!(c.total_euler(), 24);
        let mut disc: Vec<(String, i64)> = c
            .fibers
            .iter()
            .map(|f| (f.place.to_string(), f.raw.disc))
            .collect();
        disc.sort();
        assert_eq!(
            disc,
            vec![
                ("infinity".into(), 10),
                ("t".into(), 10),
                ("t + 1".into(), 2),
                ("t - 1".into(), 2)
            ]
        );
        assert_eq!(
            c.root_lattices(),
            vec![RootLattice::E(8), RootLattice::E(8)]
        );
    }

    #[test]
    fn non_minimal_model_is_reduced() {
        // y² = x³ + t^12: the (4, 6, 12) twist of a smooth fiber at 0.
        let m = WeierstrassModel::from_ints(&[], &[], &mono(12));
        let c = analyze_fibers(&m).unwrap();
        assert!(c.fibers.iter().all(|f| f.place != Place::Finite(Poly::x())));
        assert!(!c.is_valid_k3());
    }

    #[test]
    fn flagged_model_diagnostics() {
        let g = [0, -1, 0, 0, 0, 0, 0, 1];
        let m = WeierstrassModel::from_ints(&g, &[], &g);
        let c = analyze_fibers(&m).unwrap();
        assert_eq!(c.disc_degree, 28);
        assert!(c.diagnostics.contains(&Diagnostic::DegreeBound {
            coefficient: "a2".into(),
            degree: 7,
            bound: 4
        }));
        assert!(c
            .diagnostics
            .iter()
            .any(|d| matches!(d, Diagnostic::NegativeAtInfinity(v) if v.disc == -4)));
        assert!(matches!(
            shioda_tate_check(&c, &"U+D8".parse().unwrap()),
            Err(Error::InvalidConfiguration(_))
        ));
    }
}
