//! Elliptic K3 surfaces `y² = x³ + a2(t) x² + a4(t) x + a6(t)`.

mod automorphism;
mod fibers;
mod kodaira;
pub mod registry;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{self, Rational};

pub use automorphism::{automorphism_multiplier, MonomialAutomorphism, Multiplier, RootOfUnity};
pub use fibers::{
    analyze_fibers, shioda_tate_check, Diagnostic, Fiber, FiberConfiguration, Place,
    ShiodaTateReport,
};
pub use kodaira::{classify, KodairaType, Reduction, Valuations};
pub use registry::{
    registry, registry_notes, verify_registry, Expectation, RegistryEntry, RegistryReport,
    RegistryStatus,
};

/// Maximal degrees of `a2, a4, a6` for a K3 surface.
pub const K3_DEGREE_BOUNDS: [(usize, usize); 3] = [(2, 4), (4, 8), (6, 12)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub a2: Poly,
    pub a4: Poly,
    pub a6: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub c4: Poly,
    pub c6: Poly,
    pub disc: Poly,
}

impl Invariants {
    /// `j = c4³ / Δ` as (numerator, denominator).
    pub fn j_invariant(&self) -> (Poly, Poly) {
        (self.c4.pow(3), self.disc.clone())
    }
}

impl WeierstrassModel {
    pub fn new(a2: Poly, a4: Poly, a6: Poly) -> Self {
        WeierstrassModel { a2, a4, a6 }
    }

    pub fn from_ints(a2: &[i64], a4: &[i64], a6: &[i64]) -> Self {
        Self::new(
            Poly::from_ints(a2),
            Poly::from_ints(a4),
            Poly::from_ints(a6),
        )
    }

    /// `(index, coefficient)` for `i = 2, 4, 6`.
    pub fn coefficients(&self) -> [(usize, &Poly); 3] {
        [(2, &self.a2), (4, &self.a4), (6, &self.a6)]
    }

    /// `(name, degree, bound)` for each coefficient over its K3 bound.
    pub fn degree_violations(&self) -> Vec<(String, usize, usize)> {
        self.coefficients()
            .iter()
            .zip(K3_DEGREE_BOUNDS)
            .filter_map(|((i, a), (_, bound))| {
                let d = a.degree()?;
                (d > bound).then(|| (format!("a{i}"), d, bound))
            })
            .collect()
    }

    pub fn invariants(&self) -> Result<Invariants> {
        invariants_c4c6delta(self)
    }

    pub fn equation(&self) -> String {
        let mut s = "y^2 = x^3".to_string();
        for (term, a) in [("x^2", &self.a2), ("x", &self.a4), ("", &self.a6)] {
            if a.is_zero() {
                continue;
            }
            let body = a.to_string();
            let wrapped = if a
                .coeffs()
                .iter()
                .filter(|c| !num_traits::Zero::is_zero(*c))
                .count()
                > 1
            {
                format!("({body})")
            } else {
                body
            };
            if term.is_empty() {
                s.push_str(&format!(" + {wrapped}"));
            } else if a.is_constant() && a.leading() == rational::int(1) {
                s.push_str(&format!(" + {term}"));
            } else {
                s.push_str(&format!(" + {wrapped}{term}"));
            }
        }
        s
    }
}

/// `c4`, `c6` and `Δ` with `a1 = a3 = 0`; `1728 Δ = c4³ - c6²`.
pub fn invariants_c4c6delta(model: &WeierstrassModel) -> Result<Invariants> {
    let k = |n: i64| Poly::constant(rational::int(n));
    let b2 = &k(4) * &model.a2;
    let b4 = &k(2) * &model.a4;
    let b6 = &k(4) * &model.a6;
    let c4 = &(&b2 * &b2) - &(&k(24) * &b4);
    let c6 = &(&(&k(36) * &(&b2 * &b4)) - &b2.pow(3)) - &(&k(216) * &b6);
    let disc = (&c4.pow(3) - &c6.pow(2)).scale(&Rational::new(1.into(), 1728.into()));
    if disc.is_zero() {
        return Err(Error::VanishingDiscriminant);
    }
    Ok(Invariants { c4, c6, disc })
}

/// JSON model file. Coefficients are ascending in `t`, as strings or integers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(default, with = "rational::serde_rational_vec")]
    pub a2: Vec<Rational>,
    #[serde(default, with = "rational::serde_rational_vec")]
    pub a4: Vec<Rational>,
    #[serde(default, with = "rational::serde_rational_vec")]
    pub a6: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<MonomialAutomorphism>,
    #[serde(default, rename = "claimed_S", skip_serializing_if = "Option::is_none")]
    pub claimed_s: Option<String>,
}

impl ModelSpec {
    pub fn model(&self) -> WeierstrassModel {
        WeierstrassModel::new(
            Poly::new(self.a2.clone()),
            Poly::new(self.a4.clone()),
            Poly::new(self.a6.clone()),
        )
    }

    pub fn from_model(model: &WeierstrassModel) -> Self {
        ModelSpec {
            a2: model.a2.coeffs().to_vec(),
            a4: model.a4.coeffs().to_vec(),
            a6: model.a6.coeffs().to_vec(),
            automorphism: None,
            claimed_s: None,
        }
    }
}
