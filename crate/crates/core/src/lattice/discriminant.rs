use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::GramLattice;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SmithForm};
use crate::rational::{self, Rational};

/// Largest `a` for which delta is decided by enumerating `(Z/2)^a`.
pub const DELTA_ENUMERATION_CAP: usize = 22;

/// `A_L = L*/L` computed from the Smith normal form of the Gram matrix.
///
/// Generator lifts are vectors of `L* ⊂ L ⊗ Q` written in the basis of `L`,
/// with coordinates reduced into `[0, 1)`.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    gram: IntMatrix,
    smith: SmithForm,
    invariant_factors: Vec<BigInt>,
    generator_lifts: Vec<Vec<Rational>>,
}

impl DiscriminantGroup {
    pub(super) fn of(lattice: &GramLattice) -> Self {
        let gram = lattice.gram().clone();
        let smith = gram.smith_normal_form();
        let mut invariant_factors = Vec::new();
        let mut generator_lifts = Vec::new();
        for (i, d) in smith.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            // column i of V divided by d_i: G^{-1} U^{-1} e_i = V D^{-1} e_i
            let lift = smith
                .right
                .column(i)
                .into_iter()
                .map(|v| {
                    let q = Rational::new(v, d.clone());
                    rational::rem_euclid(&q, &Rational::one())
                })
                .collect();
            invariant_factors.push(d.clone());
            generator_lifts.push(lift);
        }
        DiscriminantGroup {
            gram,
            smith,
            invariant_factors,
            generator_lifts,
        }
    }

    pub fn smith_form(&self) -> &SmithForm {
        &self.smith
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn generator_lifts(&self) -> &[Vec<Rational>] {
        &self.generator_lifts
    }

    /// Minimal number of generators.
    pub fn a(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    fn pairing(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let n = self.gram.rows();
        let mut acc = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                let g = &self.gram[(i, j)];
                if !g.is_zero() {
                    acc += &x[i] * Rational::from_integer(g.clone()) * &y[j];
                }
            }
        }
        acc
    }

    /// True when `G v` is integral, i.e. `v` lies in the dual lattice.
    pub fn is_dual_vector(&self, v: &[Rational]) -> bool {
        let n = self.gram.rows();
        (0..n).all(|i| {
            let s: Rational = (0..n)
                .map(|j| Rational::from_integer(self.gram[(i, j)].clone()) * &v[j])
                .sum();
            rational::is_integer(&s)
        })
    }

    /// `q(sum c_i x_i)` reduced into `[0, 2)`.
    pub fn quadratic_value(&self, coeffs: &[BigInt]) -> Rational {
        assert_eq!(coeffs.len(), self.a());
        let n = self.gram.rows();
        let mut x = vec![Rational::zero(); n];
        for (c, lift) in coeffs.iter().zip(&self.generator_lifts) {
            let c = Rational::from_integer(c.clone());
            for (xi, li) in x.iter_mut().zip(lift) {
                *xi += &c * li;
            }
        }
        rational::rem_euclid(&self.pairing(&x, &x), &rational::int(2))
    }

    /// Norms of the generator lifts, reduced into `[0, 2)`.
    pub fn generator_norms(&self) -> Vec<Rational> {
        let two = rational::int(2);
        self.generator_lifts
            .iter()
            .map(|x| rational::rem_euclid(&self.pairing(x, x), &two))
            .collect()
    }

    pub fn is_two_elementary(&self) -> bool {
        self.invariant_factors.iter().all(|d| *d == BigInt::from(2))
    }

    /// Cheap sufficient test for `delta = 1`: some generator has a
    /// non-integral norm.
    pub fn generators_force_delta_one(&self) -> bool {
        self.generator_norms()
            .iter()
            .any(|q| !rational::is_integer(q))
    }

    /// Decides delta by visiting every class of `(Z/2)^a` in Gray-code order.
    pub fn delta(&self) -> Result<u8> {
        if !self.is_two_elementary() {
            return Err(Error::NotTwoElementary {
                factors: self
                    .invariant_factors
                    .iter()
                    .map(|d| d.to_string())
                    .collect(),
            });
        }
        let a = self.a();
        if a > DELTA_ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                exponent: a,
                cap: DELTA_ENUMERATION_CAP,
            });
        }
        // twice the pairings are integers for a 2-elementary group
        let doubled = |x: &[Rational], y: &[Rational]| -> i64 {
            let v = self.pairing(x, y) * rational::int(2);
            debug_assert!(rational::is_integer(&v));
            v.to_integer().to_i64().expect("pairing fits in i64")
        };
        let lifts = &self.generator_lifts;
        let b: Vec<Vec<i64>> = lifts
            .iter()
            .map(|x| lifts.iter().map(|y| doubled(x, y)).collect())
            .collect();

        // running state: twice the norm of x, and w_j = 2 b(x, x_j)
        let mut twice_norm: i64 = 0;
        let mut w = vec![0i64; a];
        let mut present = vec![false; a];
        for step in 1u64..(1u64 << a) {
            let i = step.trailing_zeros() as usize;
            if present[i] {
                twice_norm += -2 * w[i] + b[i][i];
                for j in 0..a {
                    w[j] -= b[i][j];
                }
            } else {
                twice_norm += 2 * w[i] + b[i][i];
                for j in 0..a {
                    w[j] += b[i][j];
                }
            }
            present[i] = !present[i];
            if twice_norm.rem_euclid(2) != 0 {
                return Ok(1);
            }
        }
        Ok(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(expr: &str) -> DiscriminantGroup {
        GramLattice::from_expr(expr).unwrap().discriminant_group()
    }

    fn factors(expr: &str) -> Vec<u64> {
        group(expr)
            .invariant_factors()
            .iter()
            .map(|d| d.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn invariant_factors_of_small_lattices() {
        assert!(factors("U").is_empty());
        assert_eq!(factors("D4"), vec![2, 2]);
        assert_eq!(factors("E8(2)"), vec![2; 8]);
        assert_eq!(factors("A3"), vec![4]);
        assert_eq!(factors("A2+A2"), vec![3, 3]);
        assert_eq!(factors("A1+A3"), vec![2, 4]);
        assert_eq!(group("E8(2)").order(), BigInt::from(256));
    }

    #[test]
    fn lifts_are_dual_vectors() {
        for e in ["D4", "A1+A1", "U(2)+D4", "A3", "E7", "U+E6"] {
            let g = group(e);
            for lift in g.generator_lifts() {
                assert!(g.is_dual_vector(lift), "{e}: {lift:?}");
            }
        }
    }

    #[test]
    fn a1_generator_norm() {
        // e/2 has norm -1/2, i.e. 3/2 mod 2
        let g = group("A1");
        assert_eq!(g.generator_norms(), vec![rational::frac(3, 2)]);
        assert!(g.generators_force_delta_one());
        assert_eq!(g.delta().unwrap(), 1);
    }

    #[test]
    fn delta_values() {
        assert_eq!(group("D4").delta().unwrap(), 0);
        assert_eq!(group("E7").delta().unwrap(), 1);
        assert_eq!(group("D8").delta().unwrap(), 0);
        assert_eq!(group("U").delta().unwrap(), 0);
        assert_eq!(group("U(2)+A1").delta().unwrap(), 1);
        assert!(matches!(
            group("A2").delta(),
            Err(Error::NotTwoElementary { .. })
        ));
    }

    #[test]
    fn delta_enumeration_cap() {
        let big = vec!["A1"; DELTA_ENUMERATION_CAP + 1].join("+");
        assert!(matches!(
            group(&big).delta(),
            Err(Error::EnumerationCap { exponent: 23, .. })
        ));
    }

    #[test]
    fn quadratic_values_are_canonical() {
        let g = group("D4");
        for c in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            let q = g.quadratic_value(&c.map(BigInt::from));
            assert!(q >= Rational::zero() && q < rational::int(2));
            assert!(rational::is_integer(&q));
        }
    }
}
