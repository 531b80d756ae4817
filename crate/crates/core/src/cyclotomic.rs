//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`, power basis modulo `Φ_n`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{self, Rational};

/// Largest conductor accepted; keeps `x^n - 1` expansions small.
pub const MAX_CONDUCTOR: u32 = 1 << 12;

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn compute_cyclotomic(n: u32) -> Poly {
    let mut xn1 = vec![Rational::zero(); n as usize + 1];
    xn1[0] = rational::int(-1);
    xn1[n as usize] = Rational::one();
    let mut p = Poly::new(xn1);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        p = p
            .exact_div(&cyclotomic_polynomial(d))
            .expect("Φ_d divides x^n - 1");
    }
    p
}

/// `Φ_n`, via `x^n - 1 = prod_{d | n} Φ_d`. Results are memoised.
pub fn cyclotomic_polynomial(n: u32) -> Poly {
    assert!((1..=MAX_CONDUCTOR).contains(&n), "conductor out of range");
    static CACHE: OnceLock<Mutex<HashMap<u32, Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = compute_cyclotomic(n);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// An element of `Q(ζ_n)`. `coeffs.len() == φ(n)` always.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    n: u32,
    coeffs: Vec<Rational>,
}

fn check_conductor(n: u32) -> Result<()> {
    if n == 0 || n > MAX_CONDUCTOR {
        return Err(Error::InvalidConductor(n));
    }
    Ok(())
}

impl CyclotomicNumber {
    fn from_poly(n: u32, p: &Poly) -> Self {
        let phi = cyclotomic_polynomial(n);
        let r = p.rem(&phi);
        let d = phi.degree().unwrap();
        CyclotomicNumber {
            n,
            coeffs: (0..d).map(|k| r.coeff(k)).collect(),
        }
    }

    /// Reduces an arbitrary coefficient vector in `1, ζ, ζ², …` modulo `Φ_n`.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        check_conductor(n)?;
        Ok(Self::from_poly(n, &Poly::new(coeffs)))
    }

    pub fn from_rational(n: u32, q: Rational) -> Result<Self> {
        Self::from_coeffs(n, vec![q])
    }

    pub fn zero(n: u32) -> Result<Self> {
        Self::from_coeffs(n, vec![])
    }

    pub fn one(n: u32) -> Result<Self> {
        Self::from_rational(n, Rational::one())
    }

    /// `ζ_n^k`, any integer `k`.
    pub fn zeta(n: u32, k: i64) -> Result<Self> {
        check_conductor(n)?;
        let e = k.rem_euclid(n as i64) as usize;
        Ok(Self::from_poly(n, &Poly::monomial(Rational::one(), e)))
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates, length `φ(n)`.
    pub fn rational_coordinates(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs
            .iter()
            .skip(1)
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn same(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::ConductorMismatch {
                left: self.n,
                right: o.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicNumber { n: self.n, coeffs })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CyclotomicNumber { n: self.n, coeffs })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(Self::from_poly(self.n, &(&self.to_poly() * &o.to_poly())))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.checked_mul(&o.inv()?)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicNumber {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    /// Inverse via the extended Euclidean algorithm against `Φ_n`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.to_poly().ext_gcd(&cyclotomic_polynomial(self.n));
        debug_assert!(g.is_constant(), "Φ_n is irreducible");
        Ok(Self::from_poly(self.n, &s))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.n)?;
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Galois action `ζ ↦ ζ^k`; requires `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        if (k.rem_euclid(self.n as i64)).gcd(&(self.n as i64)) != 1 {
            return Err(Error::InvalidInput(format!(
                "galois exponent {k} is not a unit mod {}",
                self.n
            )));
        }
        let n = self.n as i64;
        let mut v = vec![Rational::zero(); self.n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            v[(j as i64 * k).rem_euclid(n) as usize] += c;
        }
        Ok(Self::from_poly(self.n, &Poly::new(v)))
    }

    /// Complex conjugation, `ζ ↦ ζ^{n-1}`.
    pub fn conj(&self) -> Self {
        self.galois(self.n as i64 - 1).expect("n - 1 is a unit")
    }

    /// Trace to `Q`: sum of all Galois conjugates.
    pub fn trace(&self) -> Rational {
        let n = self.n as i64;
        let mut acc = Self::zero(self.n).unwrap();
        for k in (1..=n).filter(|k| k.gcd(&n) == 1) {
            acc = &acc + &self.galois(k).unwrap();
        }
        acc.as_rational().expect("trace is rational")
    }
}

macro_rules! panicking_op {
    ($tr:ident $m:ident $checked:ident) => {
        /// Panics on mismatched conductors; use the `checked_` form otherwise.
        impl $tr for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, o: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(o)
                    .expect("cyclotomic operands share a conductor")
            }
        }
    };
}
panicking_op!(Add add checked_add);
panicking_op!(Sub sub checked_sub);
panicking_op!(Mul mul checked_mul);

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.scale(&rational::int(-1))
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly().display_in(&format!("ζ{}", self.n)))
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({self})", self.n)
    }
}

#[derive(Serialize)]
struct CoeffsOut<'a> {
    n: u32,
    #[serde(with = "rational::serde_rational_vec")]
    coeffs: &'a [Rational],
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CycloIn {
    Power {
        n: u32,
        k: i64,
    },
    Coeffs {
        n: u32,
        #[serde(with = "rational::serde_rational_vec")]
        coeffs: Vec<Rational>,
    },
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsOut {
            n: self.n,
            coeffs: &self.coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = match CycloIn::deserialize(d)? {
            CycloIn::Power { n, k } => CyclotomicNumber::zeta(n, k),
            CycloIn::Coeffs { n, coeffs } => CyclotomicNumber::from_coeffs(n, coeffs),
        };
        r.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn z(n: u32, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::zeta(n, k).unwrap()
    }
    fn q(n: u32, v: Rational) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(n, v).unwrap()
    }

    #[test]
    fn two_power_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), Poly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), Poly::from_ints(&[1, 1]));
        for k in 2..=4u32 {
            let n = 1 << k;
            let half = (n / 2) as usize;
            assert_eq!(
                cyclotomic_polynomial(n),
                &Poly::monomial(int(1), half) + &Poly::one()
            );
        }
        assert_eq!(cyclotomic_polynomial(3), Poly::from_ints(&[1, 1, 1]));
        assert_eq!(
            cyclotomic_polynomial(12),
            Poly::from_ints(&[1, 0, -1, 0, 1])
        );
        assert_eq!(cyclotomic_polynomial(9).degree(), Some(6));
    }

    #[test]
    fn euler_phi_values() {
        let got: Vec<u64> = [1, 2, 4, 8, 16, 9, 27, 12, 66, 25].map(euler_phi).to_vec();
        assert_eq!(got, vec![1, 1, 2, 4, 8, 6, 18, 4, 20, 20]);
    }

    #[test]
    fn inverse_of_one_minus_zeta_at_four() {
        let one = q(4, int(1));
        let inv = (&one - &z(4, 1)).inv().unwrap();
        let expected = (&one + &z(4, 1)).scale(&frac(1, 2));
        assert_eq!(inv, expected);
        // oracle: (1 - ζ)(1 + ζ)/2 = (1 - ζ²)/2 and ζ² = -1
        assert_eq!(&(&one - &z(4, 1)) * &expected, one);
    }

    #[test]
    fn odd_powers_vanish_at_sixteen() {
        let mut s = CyclotomicNumber::zero(16).unwrap();
        for j in (1..16).step_by(2) {
            s = &s + &z(16, j);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn conjugation_swaps_zeta_and_zeta_cubed() {
        let a = &q(4, int(1)) + &z(4, 3);
        assert_eq!(a.conj(), &q(4, int(1)) + &z(4, 1));
    }

    #[test]
    fn coordinates() {
        let a = &q(4, int(1)) + &z(4, 3);
        assert_eq!(a.rational_coordinates(), &[int(1), int(-1)]);
        assert_eq!(
            z(8, 84).rational_coordinates(),
            &[int(-1), int(0), int(0), int(0)]
        );
        let b = (&q(4, int(1)) - &z(4, 1)).scale(&frac(1, 4));
        assert_eq!(b.rational_coordinates(), &[frac(1, 4), frac(-1, 4)]);
    }

    #[test]
    fn errors() {
        assert_eq!(
            z(4, 1).checked_add(&z(8, 1)),
            Err(Error::ConductorMismatch { left: 4, right: 8 })
        );
        assert_eq!(
            CyclotomicNumber::zero(8).unwrap().inv(),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            CyclotomicNumber::zeta(0, 1),
            Err(Error::InvalidConductor(0))
        );
    }

    #[test]
    fn pow_and_trace() {
        assert_eq!(z(8, 1).pow(8).unwrap(), q(8, int(1)));
        assert_eq!(z(8, 3).pow(-1).unwrap(), z(8, 5));
        assert_eq!(z(16, 8).trace(), int(-8));
        assert_eq!(q(16, int(3)).trace(), int(24));
        assert_eq!(z(3, 1).trace(), int(-1));
    }

    #[test]
    fn json_forms() {
        let a: CyclotomicNumber = serde_json::from_str(r#"{"n":8,"k":4}"#).unwrap();
        assert_eq!(a, q(8, int(-1)));
        let b: CyclotomicNumber =
            serde_json::from_str(r#"{"n":4,"coeffs":["1/4","-1/4"]}"#).unwrap();
        let back = serde_json::to_string(&b).unwrap();
        assert_eq!(back, r#"{"n":4,"coeffs":["1/4","-1/4"]}"#);
        assert_eq!(serde_json::from_str::<CyclotomicNumber>(&back).unwrap(), b);
    }

    fn element(n: u32) -> impl Strategy<Value = CyclotomicNumber> {
        let d = euler_phi(n as u64) as usize;
        prop::collection::vec((-9i64..=9, 1i64..=5), d).prop_map(move |v| {
            CyclotomicNumber::from_coeffs(n, v.into_iter().map(|(a, b)| frac(a, b)).collect())
                .unwrap()
        })
    }

    fn field_laws(
        a: &CyclotomicNumber,
        b: &CyclotomicNumber,
    ) -> std::result::Result<(), TestCaseError> {
        let n = a.conductor();
        prop_assert_eq!(a.rational_coordinates().len() as u64, euler_phi(n as u64));
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((a * b).conj(), &a.conj() * &b.conj());
        if !a.is_zero() {
            prop_assert_eq!(a * &a.inv().unwrap(), q(n, int(1)));
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn field_laws_eight(a in element(8), b in element(8)) {
            field_laws(&a, &b)?;
        }

        #[test]
        fn field_laws_sixteen(a in element(16), b in element(16)) {
            field_laws(&a, &b)?;
        }
    }

    proptest! {
        #[test]
        fn zeta_reduction_is_multiplicative(n in prop::sample::select(vec![1u32, 2, 4, 8, 16, 9, 12]),
                                            j in -40i64..40, k in -40i64..40) {
            prop_assert_eq!(&z(n, j) * &z(n, k), z(n, j + k));
        }

        // ζ^{n/2} = -1 has trace -φ(n); all other non-trivial powers trace to 0.
        #[test]
        fn two_power_traces(e in 1u32..=4, j in -64i64..64) {
            let n = 1u32 << e;
            let t = z(n, j).trace();
            let phi = euler_phi(n as u64) as i64;
            let expected = if j.rem_euclid(n as i64) == 0 {
                phi
            } else if n > 1 && j.rem_euclid(n as i64 / 2) == 0 {
                -phi
            } else {
                0
            };
            prop_assert_eq!(t, int(expected));
        }
    }
}
