//! Classification data for non-symplectic automorphisms acting trivially on
//! the Néron-Severi lattice: order constraints, existence and fixed loci.
//!
//! Lattices are identified by their Nikulin key, never by Gram matrix.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::cyclotomic::euler_phi;
use crate::error::{Error, Result};
use crate::lattice::{GramLattice, LatticeInvariants, NikulinKey};
use crate::rational::{self, Rational};

/// Orders a non-symplectic automorphism acting trivially on a
/// non-unimodular `S_X` can have.
pub const PRIME_POWER_ORDERS: [u32; 14] = [2, 4, 8, 16, 3, 9, 27, 5, 25, 7, 11, 13, 17, 19];

pub const PRIME_ORDERS: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Even hyperbolic 2-elementary lattices with `δ = 0` that are Néron-Severi
/// lattices of K3 surfaces with an involution: `(rank, a, S_X, T_X)`.
pub const TABLE1: [(usize, usize, &str, &str); 16] = [
    (2, 0, "U", "U+U+E8+E8"),
    (2, 2, "U(2)", "U+U(2)+E8+E8"),
    (6, 2, "U+D4", "U+U+E8+D4"),
    (6, 4, "U(2)+D4", "U(2)+U(2)+E8+D4"),
    (10, 0, "U+E8", "U+U+E8"),
    (10, 2, "U+D8", "U+U+D8"),
    (10, 4, "U+D4+D4", "U+U+D4+D4"),
    (10, 6, "U(2)+D4+D4", "U+U(2)+D4+D4"),
    (10, 8, "U+E8(2)", "U+U+E8(2)"),
    (10, 10, "U(2)+E8(2)", "U+U(2)+E8(2)"),
    (14, 2, "U+E8+D4", "U+U+D4"),
    (14, 4, "U+D8+D4", "U+U(2)+D4"),
    (14, 6, "U+D4+D4+D4", "U(2)+U(2)+D4"),
    (18, 0, "U+E8+E8", "U+U"),
    (18, 2, "U+E8+D8", "U+U(2)"),
    (18, 4, "U+D8+D8", "U(2)+U(2)"),
];

/// Table entries without an order-4 automorphism.
pub const ORDER4_EXCLUDED: [&str; 4] = ["U+E8(2)", "U(2)+E8(2)", "U+D4+D4+D4", "U+D8+D8"];
pub const ORDER8_LATTICES: [&str; 3] = ["U+D4", "U(2)+D4", "U+E8+D4"];
pub const ORDER16_LATTICES: [&str; 2] = ["U+D4", "U+E8+D4"];

/// `(rank, M, N)` for orders 4, 8 and 16; all fixed curves are rational.
pub const ORDER4_PROFILES: [(usize, u64, u64); 5] =
    [(2, 4, 0), (6, 6, 1), (10, 8, 2), (14, 10, 3), (18, 12, 4)];
pub const ORDER8_PROFILES: [(usize, u64, u64); 2] = [(6, 6, 1), (14, 12, 2)];

/// `(S_X, M, N)` for 3-power orders.
pub const ORDER9_PROFILES: [(&str, u64, u64); 4] = [
    ("U+A2", 6, 0),
    ("U+E8", 10, 1),
    ("U+E6+A2", 10, 1),
    ("U+E8+E6", 14, 2),
];
pub const ORDER27_PROFILES: [(&str, u64, u64); 1] = [("U+A2", 6, 0)];

/// Unimodular `S_X` and the orders every automorphism order must divide one of.
pub const UNIMODULAR_ORDERS: [(&str, [u32; 3]); 3] = [
    ("U", [66, 44, 12]),
    ("U+E8", [42, 36, 28]),
    ("U+E8+E8", [12, 12, 12]),
];

fn key_of(expr: &str) -> NikulinKey {
    GramLattice::from_expr(expr)
        .and_then(|l| l.nikulin_invariants())
        .expect("table expressions are valid")
        .key()
}

fn keyed(names: &[&'static str]) -> Vec<(NikulinKey, &'static str)> {
    names.iter().map(|n| (key_of(n), *n)).collect()
}

fn lookup(table: &[(NikulinKey, &'static str)], key: &NikulinKey) -> Option<&'static str> {
    table.iter().find(|(k, _)| k == key).map(|(_, n)| *n)
}

fn table1_keys() -> &'static [(NikulinKey, &'static str)] {
    static K: OnceLock<Vec<(NikulinKey, &'static str)>> = OnceLock::new();
    K.get_or_init(|| keyed(&TABLE1.map(|r| r.2)))
}

fn three_power_keys() -> &'static [(NikulinKey, &'static str)] {
    static K: OnceLock<Vec<(NikulinKey, &'static str)>> = OnceLock::new();
    K.get_or_init(|| keyed(&ORDER9_PROFILES.map(|r| r.0)))
}

fn unimodular_keys() -> &'static [(NikulinKey, &'static str)] {
    static K: OnceLock<Vec<(NikulinKey, &'static str)>> = OnceLock::new();
    K.get_or_init(|| keyed(&UNIMODULAR_ORDERS.map(|r| r.0)))
}

fn special_keys() -> &'static [(NikulinKey, &'static str)] {
    static K: OnceLock<Vec<(NikulinKey, &'static str)>> = OnceLock::new();
    K.get_or_init(|| keyed(&["U(2)+E8(2)", "U+E8(2)"]))
}

/// Name of the tabulated 2-elementary lattice with these invariants.
pub fn identify_two_elementary(inv: &LatticeInvariants) -> Option<&'static str> {
    lookup(table1_keys(), &inv.key())
}

fn invariants_checked(l: &GramLattice) -> Result<LatticeInvariants> {
    if l.rank() > 20 {
        return Err(Error::RankTooLarge(l.rank()));
    }
    l.nikulin_invariants()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularRule {
    pub lattice: &'static str,
    pub allowed: Vec<u32>,
    pub divides: bool,
}

/// Necessary conditions on the order `I` given `S_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderConstraints {
    pub order: u32,
    pub rank: usize,
    pub prime_power: bool,
    pub unimodular: bool,
    pub phi: u64,
    /// `Φ(I)` divides `rk T_X = 22 - r`.
    pub phi_divides_transcendental_rank: bool,
    pub unimodular_rule: Option<UnimodularRule>,
}

impl OrderConstraints {
    /// All checks pass. Non-prime-power orders need unimodular `S_X`.
    pub fn allowed(&self) -> bool {
        self.phi_divides_transcendental_rank
            && (self.prime_power || self.unimodular)
            && self.unimodular_rule.as_ref().is_none_or(|u| u.divides)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "rank": self.rank,
            "prime_power": self.prime_power,
            "unimodular": self.unimodular,
            "phi": self.phi,
            "phi_divides_rank_T": self.phi_divides_transcendental_rank,
            "unimodular_rule": self.unimodular_rule.as_ref().map(|u| json!({
                "lattice": u.lattice,
                "allowed": u.allowed,
                "divides": u.divides,
            })),
            "allowed": self.allowed(),
        })
    }
}

pub fn order_constraints(order: u32, l: &GramLattice) -> Result<OrderConstraints> {
    if order < 2 {
        return Err(Error::InvalidInput(format!(
            "order {order} must be at least 2"
        )));
    }
    let inv = invariants_checked(l)?;
    let phi = euler_phi(order as u64);
    let unimodular = inv.a == 0;
    let unimodular_rule = if unimodular {
        lookup(unimodular_keys(), &inv.key()).map(|name| {
            let allowed = UNIMODULAR_ORDERS.iter().find(|u| u.0 == name).unwrap().1;
            let mut allowed = allowed.to_vec();
            allowed.dedup();
            UnimodularRule {
                lattice: name,
                divides: allowed.iter().any(|m| m % order == 0),
                allowed,
            }
        })
    } else {
        None
    };
    Ok(OrderConstraints {
        order,
        rank: inv.rank,
        prime_power: PRIME_POWER_ORDERS.contains(&order),
        unimodular,
        phi,
        phi_divides_transcendental_rank: (22 - inv.rank as u64).is_multiple_of(phi),
        unimodular_rule,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialLocus {
    None,
    EmptyLocus,
    TwoEllipticCurves,
}

impl SpecialLocus {
    pub fn tag(&self) -> &'static str {
        match self {
            SpecialLocus::None => "none",
            SpecialLocus::EmptyLocus => "empty_locus",
            SpecialLocus::TwoEllipticCurves => "two_elliptic_curves",
        }
    }
}

/// `X^φ = {P_1..P_M} ⊔ C^(g) ⊔ E_1 ⊔ … ⊔ E_N`. For orders 4, 8, 16 and the
/// 3-power orders there is no `C^(g)`: `genus` is `None` and all `N` curves are
/// rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocusProfile {
    pub order: u32,
    pub rank: usize,
    pub exists: bool,
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub genus: Option<u64>,
    pub special: SpecialLocus,
    /// Classified lattice the input was identified with.
    pub lattice: Option<&'static str>,
}

impl FixedLocusProfile {
    fn absent(order: u32, rank: usize, lattice: Option<&'static str>) -> Self {
        FixedLocusProfile {
            order,
            rank,
            exists: false,
            m: None,
            n: None,
            genus: None,
            special: SpecialLocus::None,
            lattice,
        }
    }

    fn counts(order: u32, rank: usize, lattice: Option<&'static str>, m: u64, n: u64) -> Self {
        FixedLocusProfile {
            exists: true,
            m: Some(m),
            n: Some(n),
            ..Self::absent(order, rank, lattice)
        }
    }

    /// Topological Euler characteristic of the fixed locus.
    pub fn euler(&self) -> Option<i64> {
        if !self.exists {
            return None;
        }
        Some(match self.special {
            SpecialLocus::EmptyLocus | SpecialLocus::TwoEllipticCurves => 0,
            SpecialLocus::None => {
                let curve = self.genus.map_or(0, |g| 2 - 2 * g as i64);
                self.m? as i64 + curve + 2 * self.n? as i64
            }
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "rank": self.rank,
            "exists": self.exists,
            "M": self.m,
            "N": self.n,
            "genus_of_distinguished_curve": self.genus,
            "special": self.special.tag(),
            "lattice": self.lattice,
        })
    }
}

/// `(M, N)` by the prime-order case split, exact; may be non-integral or
/// negative outside the realised invariants.
pub fn prime_order_counts(p: i64, r: i64, a: i64) -> (Rational, Rational) {
    let f = rational::frac;
    match p {
        2 => (f(0, 1), f(r - a, 2)),
        17 | 19 => (f((p - 2) * r + 22, p - 1), f(0, 1)),
        _ => (
            f((p - 2) * r - 2, p - 1),
            f(2 + r - (p - 1) * a, 2 * (p - 1)),
        ),
    }
}

fn prime_profile(p: u32, inv: &LatticeInvariants) -> Result<FixedLocusProfile> {
    if !inv.is_p_elementary(p as u64) {
        return Err(Error::ElementarityMismatch(format!(
            "order {p} needs a {p}-elementary lattice, invariant factors are {:?}",
            inv.invariant_factors
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
        )));
    }
    let (r, a, p64) = (inv.rank as i64, inv.a as i64, p as i64);
    let k = 22 - r - (p64 - 1) * a;
    if k < 0 || k % (2 * (p64 - 1)) != 0 {
        return Ok(FixedLocusProfile::absent(p, inv.rank, None));
    }
    if p == 2 {
        if let Some(name) = lookup(special_keys(), &inv.key()) {
            let special = if name == "U(2)+E8(2)" {
                SpecialLocus::EmptyLocus
            } else {
                SpecialLocus::TwoEllipticCurves
            };
            return Ok(FixedLocusProfile {
                m: Some(0),
                n: Some(0),
                genus: (special == SpecialLocus::TwoEllipticCurves).then_some(1),
                special,
                ..FixedLocusProfile::counts(p, inv.rank, Some(name), 0, 0)
            });
        }
    }
    let g = k / (2 * (p64 - 1));
    let (m, n) = prime_order_counts(p64, r, a);
    let as_count = |q: &Rational| rational::to_i64(q).filter(|v| *v >= 0);
    match (as_count(&m), as_count(&n)) {
        (Some(m), Some(n)) => Ok(FixedLocusProfile {
            genus: Some(g as u64),
            ..FixedLocusProfile::counts(p, inv.rank, None, m as u64, n as u64)
        }),
        _ => Err(Error::OutsideClassification(format!(
            "fixed-locus formulas give M = {m}, N = {n} for order {p}, r = {r}, a = {a}"
        ))),
    }
}

fn two_power_profile(order: u32, inv: &LatticeInvariants) -> Result<FixedLocusProfile> {
    if !inv.is_p_elementary(2) {
        return Err(Error::ElementarityMismatch(format!(
            "order {order} needs a 2-elementary lattice"
        )));
    }
    if inv.delta == Some(1) {
        return Ok(FixedLocusProfile::absent(order, inv.rank, None));
    }
    let name = identify_two_elementary(inv).ok_or_else(|| {
        Error::OutsideClassification(format!(
            "no 2-elementary entry with rank {}, a = {}, delta = 0 and signature (1, {})",
            inv.rank,
            inv.a,
            inv.rank.saturating_sub(1)
        ))
    })?;
    let admissible = match order {
        4 => !ORDER4_EXCLUDED.contains(&name),
        8 => ORDER8_LATTICES.contains(&name),
        _ => ORDER16_LATTICES.contains(&name),
    };
    if !admissible {
        return Ok(FixedLocusProfile::absent(order, inv.rank, Some(name)));
    }
    let table: &[(usize, u64, u64)] = if order == 4 {
        &ORDER4_PROFILES
    } else {
        &ORDER8_PROFILES
    };
    let &(_, m, n) = table
        .iter()
        .find(|row| row.0 == inv.rank)
        .expect("admissible ranks have profiles");
    Ok(FixedLocusProfile::counts(order, inv.rank, Some(name), m, n))
}

fn three_power_profile(order: u32, inv: &LatticeInvariants) -> Result<FixedLocusProfile> {
    if !inv.is_p_elementary(3) {
        return Err(Error::ElementarityMismatch(format!(
            "order {order} needs a 3-elementary lattice"
        )));
    }
    let Some(name) = lookup(three_power_keys(), &inv.key()) else {
        return Ok(FixedLocusProfile::absent(order, inv.rank, None));
    };
    let table: &[(&str, u64, u64)] = if order == 9 {
        &ORDER9_PROFILES
    } else {
        &ORDER27_PROFILES
    };
    Ok(match table.iter().find(|row| row.0 == name) {
        Some(&(_, m, n)) => FixedLocusProfile::counts(order, inv.rank, Some(name), m, n),
        None => FixedLocusProfile::absent(order, inv.rank, Some(name)),
    })
}

pub fn fixed_locus_profile(order: u32, l: &GramLattice) -> Result<FixedLocusProfile> {
    let inv = invariants_checked(l)?;
    match order {
        p if PRIME_ORDERS.contains(&p) => prime_profile(p, &inv),
        4 | 8 | 16 => two_power_profile(order, &inv),
        9 | 27 => three_power_profile(order, &inv),
        _ => Err(Error::UnsupportedOrder(order)),
    }
}

pub fn exists_automorphism(order: u32, l: &GramLattice) -> Result<bool> {
    Ok(fixed_locus_profile(order, l)?.exists)
}

/// One recomputed row of [`TABLE1`].
#[derive(Clone, Debug)]
pub struct Table1Row {
    pub rank: usize,
    pub a: usize,
    pub s_expr: &'static str,
    pub t_expr: &'static str,
    pub s_invariants: LatticeInvariants,
    pub t_invariants: LatticeInvariants,
    /// Recomputed `(rank, a)` of `S_X` match and `δ = 0`.
    pub s_matches: bool,
    /// `T_X` has rank `22 - r`, signature `(2, 20 - r)` and `a(T) = a(S)`.
    pub consistent: bool,
    pub issues: Vec<String>,
}

impl Table1Row {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "a": self.a,
            "S": self.s_expr,
            "T": self.t_expr,
            "delta_S": self.s_invariants.delta,
            "a_S": self.s_invariants.a,
            "a_T": self.t_invariants.a,
            "signature_T": [self.t_invariants.t_plus, self.t_invariants.t_minus],
            "s_matches": self.s_matches,
            "consistent": self.consistent,
            "issues": self.issues,
        })
    }
}

pub fn verify_table1() -> Result<Vec<Table1Row>> {
    TABLE1
        .iter()
        .map(|&(rank, a, s_expr, t_expr)| {
            let s = GramLattice::from_expr(s_expr)?.nikulin_invariants()?;
            let t = GramLattice::from_expr(t_expr)?.nikulin_invariants()?;
            let mut issues = Vec::new();
            if s.rank != rank || s.a != a {
                issues.push(format!(
                    "S has (rank, a) = ({}, {}), expected ({rank}, {a})",
                    s.rank, s.a
                ));
            }
            if s.delta != Some(0) {
                issues.push(format!("S has delta = {:?}", s.delta));
            }
            let s_matches = issues.is_empty();
            let mut consistent = true;
            if t.rank + rank != 22 {
                issues.push(format!(
                    "rank T = {} but 22 - rank S = {}",
                    t.rank,
                    22 - rank
                ));
                consistent = false;
            }
            if (t.t_plus, t.t_minus) != (2, 20 - rank.min(20)) {
                issues.push(format!("signature T = ({}, {})", t.t_plus, t.t_minus));
                consistent = false;
            }
            if t.a != s.a || !t.is_p_elementary(2) {
                issues.push(format!("a(T) = {} but a(S) = {}", t.a, s.a));
                consistent = false;
            }
            Ok(Table1Row {
                rank,
                a,
                s_expr,
                t_expr,
                s_invariants: s,
                t_invariants: t,
                s_matches,
                consistent,
                issues,
            })
        })
        .collect()
}

/// Summary counts for reporting.
pub fn table1_summary(rows: &[Table1Row]) -> BTreeMap<&'static str, usize> {
    BTreeMap::from([
        ("rows", rows.len()),
        ("s_matches", rows.iter().filter(|r| r.s_matches).count()),
        ("consistent", rows.iter().filter(|r| r.consistent).count()),
    ])
}
