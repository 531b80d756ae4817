//! Holomorphic and topological Lefschetz counting for non-symplectic
//! automorphisms of order 4, 8 and 16.
//!
//! Unknowns are the numbers `m_{i,j}` of isolated fixed points of each local
//! type and the total Euler characteristic `c = Σ (2 - 2g)` of the fixed
//! curves. Fixed curves satisfy `C² = 2g - 2`, so they enter the holomorphic
//! formula through the single coefficient [`curve_term_coefficient`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::cyclotomic::{euler_phi, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{self, Rational};

pub const SUPPORTED_ORDERS: [u32; 3] = [4, 8, 16];

fn check_order(n: u32) -> Result<()> {
    if SUPPORTED_ORDERS.contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(n))
    }
}

/// Local action `diag(ζ^i, ζ^j)` at an isolated fixed point, with
/// `i + j ≡ 1 (mod n)` and canonical `2 <= i <= n/2 < j < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalType {
    i: u32,
    j: u32,
    n: u32,
}

impl LocalType {
    pub fn new(i: i64, j: i64, n: u32) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidLocalType {
            i,
            j,
            n,
            reason: reason.into(),
        };
        if n < 3 {
            return Err(bad("order must be at least 3"));
        }
        let m = n as i64;
        let (ri, rj) = (i.rem_euclid(m), j.rem_euclid(m));
        if (ri + rj) % m != 1 {
            return Err(bad("exponents must satisfy i + j = 1 mod n"));
        }
        if ri == 0 || rj == 0 {
            return Err(bad("a zero exponent describes a point on a fixed curve"));
        }
        let (lo, hi) = if ri <= rj { (ri, rj) } else { (rj, ri) };
        Ok(LocalType {
            i: lo as u32,
            j: hi as u32,
            n,
        })
    }

    /// All isolated types for order `n`, ordered by `i`.
    pub fn all(n: u32) -> Vec<LocalType> {
        (2..=n / 2)
            .map(|i| LocalType { i, j: n + 1 - i, n })
            .collect()
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// `"i,j"`, the JSON key.
    pub fn key(&self) -> String {
        format!("{},{}", self.i, self.j)
    }

    /// Type of the same point under `φ²`, an automorphism of order `n/2`.
    /// `None` when the point lies on a fixed curve of `φ²`.
    pub fn square(&self) -> Option<LocalType> {
        let h = self.n / 2;
        LocalType::new(self.i as i64, self.j as i64, h)
            .ok()
            .filter(|_| h >= 3)
    }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{{{},{}}}", self.i, self.j)
    }
}

/// `1 / ((1 - ζ^i)(1 - ζ^j))`.
pub fn isolated_point_term(t: &LocalType) -> CyclotomicNumber {
    let n = t.n;
    let one = CyclotomicNumber::one(n).unwrap();
    let d = &(&one - &CyclotomicNumber::zeta(n, t.i as i64).unwrap())
        * &(&one - &CyclotomicNumber::zeta(n, t.j as i64).unwrap());
    d.inv().expect("exponents are nonzero mod n")
}

/// `(1 + ζ) / (2 (1 - ζ)²)`, the coefficient of `c` in the holomorphic formula.
pub fn curve_term_coefficient(n: u32) -> Result<CyclotomicNumber> {
    if n < 2 {
        return Err(Error::UnsupportedOrder(n));
    }
    let one = CyclotomicNumber::one(n)?;
    let z = CyclotomicNumber::zeta(n, 1)?;
    let d = &one - &z;
    let num = (&one + &z).scale(&rational::frac(1, 2));
    num.checked_mul(&(&d * &d).inv()?)
}

/// Holomorphic Lefschetz number `1 + ζ^{n-1}` of an order-`n` automorphism
/// acting on the 2-form by `ζ`.
pub fn lefschetz_target(n: u32) -> Result<CyclotomicNumber> {
    CyclotomicNumber::one(n)?.checked_add(&CyclotomicNumber::zeta(n, n as i64 - 1)?)
}

/// Certifies `q (ζ + ζ³ + … + ζ^{n-1}) = 0`, the trace on `T_X ⊗ C` when the
/// primitive eigenvalues occur with equal multiplicity `q`.
pub fn verify_transcendental_trace(n: u32, q: u32) -> Result<bool> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::UnsupportedOrder(n));
    }
    if q == 0 {
        return Err(Error::InvalidInput("multiplicity must be positive".into()));
    }
    let mut s = CyclotomicNumber::zero(n)?;
    for j in (1..n as i64).step_by(2) {
        s = &s + &CyclotomicNumber::zeta(n, j)?;
    }
    Ok(s.scale(&rational::int(q as i64)).is_zero())
}

/// Rank of `T_X` forced by the trace certificate.
pub fn transcendental_rank(n: u32, q: u32) -> u64 {
    q as u64 * euler_phi(n as u64)
}

/// The linear system for `(n, r)`. Unknowns: one `m_t` per [`LocalType`]
/// followed by `c`.
#[derive(Clone, Debug)]
pub struct FixedPointSystem {
    n: u32,
    r: u32,
    heredity: bool,
}

/// One assembled equation `Σ coeffs[k] x_k = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub label: String,
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Equation {
    pub fn residual(&self, x: &[Rational]) -> Rational {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        lhs - &self.rhs
    }
}

impl FixedPointSystem {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        check_order(n)?;
        if !r.is_multiple_of(2) || !(2..=20).contains(&r) {
            return Err(Error::InvalidRank {
                order: n,
                rank: r,
                reason: "Picard number must be even and between 2 and 20".into(),
            });
        }
        Ok(FixedPointSystem {
            n,
            r,
            heredity: true,
        })
    }

    /// Drops the constraints inherited from `φ²`.
    pub fn without_heredity(mut self) -> Self {
        self.heredity = false;
        self
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> u32 {
        self.r
    }

    pub fn types(&self) -> Vec<LocalType> {
        LocalType::all(self.n)
    }

    pub fn unknowns(&self) -> Vec<String> {
        let mut v: Vec<String> = self.types().iter().map(LocalType::key).collect();
        v.push("c".into());
        v
    }

    /// The `φ(n)` coordinate equations of the holomorphic formula.
    pub fn component_equations(&self) -> Vec<Equation> {
        let n = self.n;
        let cols: Vec<CyclotomicNumber> = self
            .types()
            .iter()
            .map(isolated_point_term)
            .chain(std::iter::once(curve_term_coefficient(n).unwrap()))
            .collect();
        let target = lefschetz_target(n).unwrap();
        (0..euler_phi(n as u64) as usize)
            .map(|k| Equation {
                label: format!("holomorphic[ζ^{k}]"),
                coeffs: cols
                    .iter()
                    .map(|z| z.rational_coordinates()[k].clone())
                    .collect(),
                rhs: target.rational_coordinates()[k].clone(),
            })
            .collect()
    }

    /// `M + c = r + 2`.
    pub fn topological_equation(&self) -> Equation {
        Equation {
            label: "euler".into(),
            coeffs: vec![Rational::one(); self.types().len() + 1],
            rhs: rational::int(self.r as i64 + 2),
        }
    }

    /// For each isolated type `s` of `φ²`, the points of `φ` reducing to `s`
    /// account for all `m_s` isolated points of `φ²`.
    pub fn heredity_equations(&self) -> Result<Vec<Equation>> {
        if !self.heredity || self.n == 4 {
            return Ok(vec![]);
        }
        let half = FixedPointSystem::new(self.n / 2, self.r)?.solve()?;
        if !half.unique {
            return Err(Error::InconsistentSystem {
                order: self.n / 2,
                rank: self.r,
            });
        }
        let types = self.types();
        let mut out = Vec::new();
        for s in LocalType::all(self.n / 2) {
            let mut coeffs = vec![Rational::zero(); types.len() + 1];
            for (k, t) in types.iter().enumerate() {
                if t.square() == Some(s) {
                    coeffs[k] = Rational::one();
                }
            }
            out.push(Equation {
                label: format!("heredity[{}]", s.key()),
                coeffs,
                rhs: half.m[&s].clone(),
            });
        }
        Ok(out)
    }

    pub fn equations(&self) -> Result<Vec<Equation>> {
        let mut eqs = self.component_equations();
        eqs.push(self.topological_equation());
        eqs.extend(self.heredity_equations()?);
        Ok(eqs)
    }

    /// Residual of each assembled equation at `x`.
    pub fn residuals(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.equations()?.iter().map(|e| e.residual(x)).collect())
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.residuals(x)?.iter().all(Zero::is_zero))
    }

    pub fn solve(&self) -> Result<CountSolution> {
        let eqs = self.equations()?;
        let a = RatMatrix::from_rows(eqs.iter().map(|e| e.coeffs.clone()).collect())?;
        let b: Vec<Rational> = eqs.iter().map(|e| e.rhs.clone()).collect();
        let comp = self.component_equations();
        let component_rank =
            RatMatrix::from_rows(comp.iter().map(|e| e.coeffs.clone()).collect())?.rank();
        let sol = a.solve(&b).ok_or(Error::InconsistentSystem {
            order: self.n,
            rank: self.r,
        })?;
        let types = self.types();
        let m: BTreeMap<LocalType, Rational> = types
            .iter()
            .copied()
            .zip(sol.particular.iter().cloned())
            .collect();
        let c = sol.particular[types.len()].clone();
        let unique = sol.kernel.is_empty();
        let mut obstructions = Vec::new();
        if unique {
            let names = self.unknowns();
            for (name, v) in names.iter().zip(&sol.particular) {
                if !rational::is_integer(v) {
                    obstructions.push(Obstruction::NonIntegral {
                        unknown: name.clone(),
                        value: v.clone(),
                    });
                } else if v.is_negative() && name != "c" {
                    obstructions.push(Obstruction::Negative {
                        unknown: name.clone(),
                        value: v.clone(),
                    });
                }
            }
            if rational::is_integer(&c) && !rational::is_integer(&(&c / rational::int(2))) {
                obstructions.push(Obstruction::OddCurveEuler { c: c.clone() });
            }
        }
        Ok(CountSolution {
            order: self.n,
            rank: self.r,
            m,
            c,
            kernel: sol.kernel,
            unique,
            equation_rank: sol.rank,
            component_rank,
            heredity: self.heredity,
            obstructions,
        })
    }
}

/// Why a unique rational solution is not a valid fixed-point configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    Negative {
        unknown: String,
        value: Rational,
    },
    NonIntegral {
        unknown: String,
        value: Rational,
    },
    /// The fixed curves have even total Euler characteristic.
    OddCurveEuler {
        c: Rational,
    },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Negative { unknown, value } => {
                write!(f, "{unknown} = {value} is negative")
            }
            Obstruction::NonIntegral { unknown, value } => {
                write!(f, "{unknown} = {value} is not an integer")
            }
            Obstruction::OddCurveEuler { c } => {
                write!(
                    f,
                    "c = {c} is odd but the fixed curves have even Euler characteristic"
                )
            }
        }
    }
}

/// Solution of a [`FixedPointSystem`]. When `unique` is false, `m` and `c`
/// form a particular solution and `kernel` spans the homogeneous solutions.
#[derive(Clone, Debug)]
pub struct CountSolution {
    pub order: u32,
    pub rank: u32,
    pub m: BTreeMap<LocalType, Rational>,
    pub c: Rational,
    pub kernel: Vec<Vec<Rational>>,
    pub unique: bool,
    pub equation_rank: usize,
    /// Rank of the holomorphic coordinate equations alone.
    pub component_rank: usize,
    pub heredity: bool,
    pub obstructions: Vec<Obstruction>,
}

impl CountSolution {
    /// `M = Σ m_t`.
    pub fn total_isolated(&self) -> Rational {
        self.m.values().sum()
    }

    pub fn m_value(&self, i: u32, j: u32) -> Option<&Rational> {
        LocalType::new(i as i64, j as i64, self.order)
            .ok()
            .and_then(|t| self.m.get(&t))
    }

    pub fn solution_space_dim(&self) -> usize {
        self.kernel.len()
    }

    /// Unknowns in system order: `m_t` then `c`.
    pub fn as_vector(&self) -> Vec<Rational> {
        self.m
            .values()
            .cloned()
            .chain(std::iter::once(self.c.clone()))
            .collect()
    }

    /// Unique, non-negative, integral and with even `c`.
    pub fn is_admissible(&self) -> bool {
        self.unique && self.obstructions.is_empty()
    }

    /// Number of fixed curves if all are rational, `c / 2`.
    pub fn n_rational(&self) -> Option<i64> {
        if !self.is_admissible() {
            return None;
        }
        rational::to_i64(&self.c).map(|c| c / 2)
    }

    /// Whether `x` (system order) lies in the solution set.
    pub fn contains(&self, x: &[Rational]) -> bool {
        let p = self.as_vector();
        if x.len() != p.len() {
            return false;
        }
        let diff: Vec<Rational> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        if self.kernel.is_empty() {
            return diff.iter().all(Zero::is_zero);
        }
        let k = RatMatrix::from_rows(self.kernel.clone())
            .unwrap()
            .transpose();
        k.solve(&diff).is_some()
    }

    pub fn to_json(&self) -> Value {
        let num = |q: &Rational| match rational::to_i64(q) {
            Some(v) => json!(v),
            None => json!(rational::format_rational(q)),
        };
        let m: Map<String, Value> = self.m.iter().map(|(t, v)| (t.key(), num(v))).collect();
        json!({
            "order": self.order,
            "rank": self.rank,
            "M": num(&self.total_isolated()),
            "c": num(&self.c),
            "m": m,
            "unique": self.unique,
            "solution_space_dim": self.solution_space_dim(),
            "equation_rank": self.equation_rank,
            "component_rank": self.component_rank,
            "admissible": self.is_admissible(),
            "N_rational": self.n_rational(),
            "obstructions": self.obstructions.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn solve_fixed_point_counts(n: u32, r: u32) -> Result<CountSolution> {
    FixedPointSystem::new(n, r)?.solve()
}

/// Published closed forms for `(m_t, c)` in system order; `None` for orders
/// without one. Values may be non-integral for ranks the forms do not cover.
pub fn closed_form_counts(n: u32, r: u32) -> Option<Vec<Rational>> {
    let r = r as i64;
    let f = |p: i64, q: i64| rational::frac(p, q);
    let m: Vec<Rational> = match n {
        4 => vec![f(r + 6, 2)],
        8 => vec![f(r + 14, 4), f(r - 2, 4), f(r - 6, 4)],
        16 => vec![
            f(r + 10, 4),
            f(r + 2, 8),
            f(r - 6, 8),
            f(r - 6, 8),
            f(r - 6, 8),
            f(1, 1),
            f(0, 1),
        ],
        _ => return None,
    };
    let total: Rational = m.iter().sum();
    let c = rational::int(r + 2) - total;
    Some(m.into_iter().chain(std::iter::once(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn local_type_validation() {
        assert_eq!(
            LocalType::new(3, 2, 4).unwrap(),
            LocalType::new(2, 3, 4).unwrap()
        );
        assert_eq!(LocalType::new(-6, 7, 8).unwrap().key(), "2,7");
        assert!(LocalType::new(2, 2, 4).is_err());
        assert!(LocalType::new(0, 1, 8).is_err());
        assert!(LocalType::new(8, 9, 8).is_err());
        let keys: Vec<String> = LocalType::all(16).iter().map(LocalType::key).collect();
        assert_eq!(
            keys,
            ["2,15", "3,14", "4,13", "5,12", "6,11", "7,10", "8,9"]
        );
    }

    #[test]
    fn squares_reduce_mod_half() {
        let t = |i, j, n| LocalType::new(i, j, n).unwrap();
        assert_eq!(t(7, 10, 16).square(), Some(t(2, 7, 8)));
        assert_eq!(t(8, 9, 16).square(), None);
        assert_eq!(t(3, 6, 8).square(), Some(t(2, 3, 4)));
        assert_eq!(t(4, 5, 8).square(), None);
        assert_eq!(t(2, 3, 4).square(), None);
    }

    #[test]
    fn isolated_terms_clear_denominators() {
        for (i, j, n) in [(2, 3, 4), (4, 5, 8), (8, 9, 16), (3, 14, 16)] {
            let t = LocalType::new(i, j, n).unwrap();
            let one = CyclotomicNumber::one(n).unwrap();
            let d = &(&one - &CyclotomicNumber::zeta(n, i).unwrap())
                * &(&one - &CyclotomicNumber::zeta(n, j).unwrap());
            assert_eq!(&isolated_point_term(&t) * &d, one);
        }
        let a = isolated_point_term(&LocalType::new(2, 3, 4).unwrap());
        assert_eq!(a.rational_coordinates(), &[frac(1, 4), frac(-1, 4)]);
    }

    #[test]
    fn curve_coefficient_at_four() {
        let c = curve_term_coefficient(4).unwrap();
        assert_eq!(c.rational_coordinates(), &[frac(-1, 4), frac(1, 4)]);
        for n in SUPPORTED_ORDERS {
            let one = CyclotomicNumber::one(n).unwrap();
            let z = CyclotomicNumber::zeta(n, 1).unwrap();
            let d = &one - &z;
            let lhs = &(&curve_term_coefficient(n).unwrap() * &d) * &d;
            assert_eq!(lhs.scale(&int(2)), &one + &z);
        }
    }

    #[test]
    fn order_four_is_m_equals_four_plus_c() {
        // a M + b c = rhs holds for all M = 4 + c iff 4a = rhs and a + b = 0.
        let sys = FixedPointSystem::new(4, 2).unwrap();
        for e in sys.component_equations() {
            let (a, b) = (&e.coeffs[0], &e.coeffs[1]);
            assert_eq!(a * int(4), e.rhs);
            assert!((a + b).is_zero());
        }
        let s = solve_fixed_point_counts(4, 10).unwrap();
        assert_eq!(s.total_isolated(), int(8));
        assert_eq!(s.c, int(4));
        assert_eq!(s.n_rational(), Some(2));
        for r in [2u32, 6, 10, 14, 18] {
            let s = solve_fixed_point_counts(4, r).unwrap();
            assert!(s.is_admissible());
            assert_eq!(s.total_isolated(), int(r as i64 + 6) / int(2));
            assert_eq!(s.c, int(r as i64 - 2) / int(2));
            assert_eq!(s.total_isolated(), int(4) + &s.c);
        }
    }

    #[test]
    fn order_eight_counts() {
        let s = solve_fixed_point_counts(8, 14).unwrap();
        assert!(s.unique && s.is_admissible());
        assert_eq!(s.as_vector(), ints(&[7, 3, 2, 4]));
        assert_eq!(s.total_isolated(), int(12));
        let s = solve_fixed_point_counts(8, 6).unwrap();
        assert_eq!(s.as_vector(), ints(&[5, 1, 0, 2]));
    }

    #[test]
    fn order_eight_displayed_system_holds() {
        for r in [6u32, 14] {
            let s = solve_fixed_point_counts(8, r).unwrap();
            let v = s.as_vector();
            let (m27, m36, m45, c) = (&v[0], &v[1], &v[2], &v[3]);
            assert!((int(2) * m36 - m45 - c).is_zero());
            assert_eq!(m27 - m36 + m45 - c, int(2));
        }
    }

    #[test]
    fn order_eight_parity_obstruction() {
        for r in [2u32, 10, 18] {
            let s = solve_fixed_point_counts(8, r).unwrap();
            assert!(!s.is_admissible(), "r = {r}");
            assert!(!s.obstructions.is_empty());
        }
        let s = solve_fixed_point_counts(8, 10).unwrap();
        assert_eq!(s.as_vector(), ints(&[6, 2, 1, 3]));
        assert_eq!(
            s.obstructions,
            vec![Obstruction::OddCurveEuler { c: int(3) }]
        );
    }

    #[test]
    fn order_sixteen_rank_six() {
        let s = solve_fixed_point_counts(16, 6).unwrap();
        assert!(s.is_admissible());
        assert_eq!(s.as_vector(), ints(&[4, 1, 0, 0, 0, 1, 0, 2]));
        assert_eq!(closed_form_counts(16, 6).unwrap(), s.as_vector());
    }

    #[test]
    fn without_heredity_is_underdetermined() {
        let s = FixedPointSystem::new(8, 14)
            .unwrap()
            .without_heredity()
            .solve()
            .unwrap();
        assert!(!s.unique);
        assert_eq!(s.solution_space_dim(), 1);
        assert!(s.contains(&closed_form_counts(8, 14).unwrap()));
        assert!(s.obstructions.is_empty());
    }

    #[test]
    fn resubstitution() {
        for n in SUPPORTED_ORDERS {
            for r in (2..=20).step_by(2) {
                let sys = FixedPointSystem::new(n, r).unwrap();
                let s = sys.solve().unwrap();
                assert!(sys.is_satisfied_by(&s.as_vector()).unwrap(), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn trace_certificate() {
        assert!(verify_transcendental_trace(4, 1).unwrap());
        assert!(verify_transcendental_trace(16, 5).unwrap());
        assert_eq!(transcendental_rank(8, 2), 8);
        assert!(verify_transcendental_trace(6, 1).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(
            FixedPointSystem::new(6, 2).unwrap_err(),
            Error::UnsupportedOrder(6)
        );
        assert!(matches!(
            FixedPointSystem::new(8, 7),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!(
            FixedPointSystem::new(8, 22),
            Err(Error::InvalidRank { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let v = solve_fixed_point_counts(8, 14).unwrap().to_json();
        assert_eq!(v["M"], json!(12));
        assert_eq!(v["c"], json!(4));
        assert_eq!(v["m"]["2,7"], json!(7));
        assert_eq!(v["unique"], json!(true));
    }
}
