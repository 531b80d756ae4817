//! Monomial automorphisms `(x, y, t) ↦ (αx, βy, γt)` and their action on
//! the 2-form `ω = dx ∧ dt / y`, which is multiplied by `αγ/β`.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::WeierstrassModel;
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `ζ_n^k`, stored as `k/n mod 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRoot", into = "RawRoot")]
pub struct RootOfUnity {
    n: u32,
    k: u32,
}

#[derive(Serialize, Deserialize)]
struct RawRoot {
    n: u32,
    k: i64,
}

impl TryFrom<RawRoot> for RootOfUnity {
    type Error = Error;
    fn try_from(r: RawRoot) -> Result<Self> {
        RootOfUnity::new(r.n, r.k)
    }
}

impl From<RootOfUnity> for RawRoot {
    fn from(r: RootOfUnity) -> Self {
        RawRoot {
            n: r.n,
            k: r.k as i64,
        }
    }
}

impl RootOfUnity {
    pub fn new(n: u32, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConductor(0));
        }
        Ok(RootOfUnity {
            n,
            k: k.rem_euclid(n as i64) as u32,
        })
    }

    pub fn one() -> Self {
        RootOfUnity { n: 1, k: 0 }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// `k/n` in `[0, 1)`.
    pub fn angle(&self) -> Rational {
        rational::frac(self.k as i64, self.n as i64)
    }

    fn from_angle(q: &Rational) -> Self {
        let q = rational::rem_euclid(q, &rational::int(1));
        let n = q
            .denom()
            .to_string()
            .parse::<u32>()
            .expect("small conductor");
        let k = q
            .numer()
            .to_string()
            .parse::<u32>()
            .expect("small exponent");
        RootOfUnity { n, k }
    }

    /// Multiplicative order.
    pub fn order(&self) -> u32 {
        if self.k == 0 {
            1
        } else {
            self.n / self.n.gcd(&self.k)
        }
    }

    /// As an element of `Q(ζ_m)`; `m` must be a multiple of the conductor.
    pub fn to_cyclotomic(&self, m: u32) -> Result<CyclotomicNumber> {
        if !m.is_multiple_of(self.n) {
            return Err(Error::ConductorMismatch {
                left: self.n,
                right: m,
            });
        }
        CyclotomicNumber::zeta(m, (self.k * (m / self.n)) as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n, self.k) {
            (_, 0) => f.write_str("1"),
            (2, 1) => f.write_str("-1"),
            (n, 1) => write!(f, "ζ{n}"),
            (n, k) => write!(f, "ζ{n}^{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialAutomorphism {
    pub alpha: RootOfUnity,
    pub beta: RootOfUnity,
    pub gamma: RootOfUnity,
}

impl MonomialAutomorphism {
    pub fn new(alpha: RootOfUnity, beta: RootOfUnity, gamma: RootOfUnity) -> Self {
        MonomialAutomorphism { alpha, beta, gamma }
    }

    pub fn identity() -> Self {
        let one = RootOfUnity::one();
        Self::new(one, one, one)
    }

    /// All three in `μ_n`, given as exponents.
    pub fn from_exponents(n: u32, a: i64, b: i64, g: i64) -> Result<Self> {
        Ok(Self::new(
            RootOfUnity::new(n, a)?,
            RootOfUnity::new(n, b)?,
            RootOfUnity::new(n, g)?,
        ))
    }

    fn lcm_conductor(&self) -> u32 {
        self.alpha.n.lcm(&self.beta.n).lcm(&self.gamma.n)
    }
}

impl fmt::Display for MonomialAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x, y, t) -> ({} x, {} y, {} t)",
            self.alpha, self.beta, self.gamma
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplier {
    pub root: RootOfUnity,
    /// `root` in `Q(ζ_m)` with `m` the lcm of the conductors of `α, β, γ`.
    pub value: CyclotomicNumber,
    pub order: u32,
}

/// Checks that every monomial of the equation scales like `y²` and returns
/// the 2-form multiplier `αγ/β`.
pub fn automorphism_multiplier(
    model: &WeierstrassModel,
    phi: &MonomialAutomorphism,
) -> Result<Multiplier> {
    let (a, b, g) = (phi.alpha.angle(), phi.beta.angle(), phi.gamma.angle());
    let two = rational::int(2);
    let expected = RootOfUnity::from_angle(&(&two * &b));
    let check = |name: String, angle: Rational| -> Result<()> {
        let found = RootOfUnity::from_angle(&angle);
        if found != expected {
            return Err(Error::NotInvariant {
                monomial: name,
                found: found.to_string(),
                expected: expected.to_string(),
            });
        }
        Ok(())
    };
    check("x^3".into(), rational::int(3) * &a)?;
    for (coeff, xpow) in [(&model.a2, 2i64), (&model.a4, 1), (&model.a6, 0)] {
        for (k, c) in coeff.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = match xpow {
                0 => format!("t^{k}"),
                1 => format!("t^{k} x"),
                _ => format!("t^{k} x^2"),
            };
            check(
                name,
                rational::int(xpow) * &a + rational::int(k as i64) * &g,
            )?;
        }
    }
    let root = RootOfUnity::from_angle(&(&a + &g - &b));
    let m = phi.lcm_conductor();
    Ok(Multiplier {
        root,
        value: root.to_cyclotomic(m)?,
        order: root.order(),
    })
}
