//! Factorisation over `Q`: square-free decomposition, then Zassenhaus
//! (modular factorisation, Hensel lifting, subset recombination) on each
//! square-free part.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{Field, Fp};
use super::Poly;
use crate::rational::Rational;

/// Odd primes tried for the modular image.
const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

/// Good primes examined before committing to the one with fewest factors.
const PRIME_SAMPLES: usize = 8;

const RNG_SEED: u64 = 0x6b33_6175_7430;

/// `self = unit * prod f_i^{e_i}` with monic irreducible `f_i`, sorted by
/// degree then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, e)| {
                &acc * &f.pow(*e as u32)
            })
    }
}

type ZPoly = Vec<BigInt>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

/// Exact division in `Z[t]`; `None` if `b` does not divide `a`.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    if r.len() < b.len() {
        return r.iter().all(Zero::is_zero).then(Vec::new);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    r.iter().all(Zero::is_zero).then(|| ztrim(q))
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive with positive leading coefficient.
fn primitive(a: &ZPoly) -> ZPoly {
    let mut g = content(a);
    if a.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn to_fp(a: &ZPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    Field::trim(
        a.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn from_fp(a: &Fp) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut r = zmod(a, m);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * y).mod_floor(m);
        }
        q[k] = c;
    }
    r.truncate(db);
    (ztrim(q), zmod(&r, m))
}

/// One quadratic Hensel step: from `f ≡ g h`, `s g + t h ≡ 1 (mod m)` to the
/// same relations mod `m²`. `f`, `g`, `h` are monic.
fn hensel_step(
    m: &BigInt,
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zmod(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, &m2);
    let g2 = zmod(&zadd(g, &zadd(&zmul(t, &e), &zmul(&q, g))), &m2);
    let h2 = zmod(&zadd(h, &r), &m2);
    let b = zmod(
        &zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &vec![BigInt::one()]),
        &m2,
    );
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, &m2);
    let s2 = zmod(&zsub(s, &d), &m2);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts monic `factors` of the monic `f` mod `p` to a factorisation mod
/// some `p^(2^k) >= bound`; returns the lifted factors and that modulus.
fn multifactor_lift(f: &ZPoly, factors: &[Fp], fld: Field, bound: &BigInt) -> (Vec<ZPoly>, BigInt) {
    let p = BigInt::from(fld.p);
    let mut modulus = p.clone();
    while &modulus < bound {
        modulus = &modulus * &modulus;
    }
    fn go(
        f: &ZPoly,
        factors: &[Fp],
        fld: Field,
        p: &BigInt,
        target: &BigInt,
        out: &mut Vec<ZPoly>,
    ) {
        if factors.len() == 1 {
            out.push(zmod(f, target));
            return;
        }
        let (left, right) = factors.split_at(factors.len() / 2);
        let prod = |fs: &[Fp]| fs.iter().fold(vec![1u64], |acc, g| fld.mul(&acc, g));
        let (g0, h0) = (prod(left), prod(right));
        let (one, s0, t0) = fld.ext_gcd(&g0, &h0);
        debug_assert_eq!(one, vec![1]);
        let (mut g, mut h, mut s, mut t) = (from_fp(&g0), from_fp(&h0), from_fp(&s0), from_fp(&t0));
        let mut m = p.clone();
        while &m < target {
            (g, h, s, t) = hensel_step(&m, f, &g, &h, &s, &t);
            m = &m * &m;
        }
        go(&g, left, fld, p, target, out);
        go(&h, right, fld, p, target, out);
    }
    let mut out = Vec::new();
    go(f, factors, fld, &p, &modulus, &mut out);
    (out, modulus)
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Degrees `1..n` reachable as sums of a sub-multiset of `degs`.
fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Irreducible factors of a primitive square-free `f` of degree >= 1.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.clone()];
    }
    let lead = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);

    // Pick the good prime with the fewest modular factors; intersect the
    // attainable factor degrees across primes as an irreducibility test.
    let mut best: Option<(Field, Vec<(Fp, usize)>, usize)> = None;
    let mut possible = vec![true; n + 1];
    let mut samples = 0;
    for &p in &PRIMES {
        if (&lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let fld = Field::new(p);
        let fp = fld.monic(&to_fp(f, p));
        if fld.gcd(&fp, &fld.derivative(&fp)).len() != 1 {
            continue;
        }
        let ddf = fld.distinct_degree(&fp);
        let degs: Vec<usize> = ddf
            .iter()
            .flat_map(|(g, d)| std::iter::repeat_n(*d, (g.len() - 1) / d))
            .collect();
        if degs.len() == 1 {
            return vec![f.clone()];
        }
        let reach = subset_sums(&degs, n);
        for k in 1..n {
            possible[k] &= reach[k];
        }
        if (1..n).all(|k| !possible[k]) {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|b| degs.len() < b.2) {
            best = Some((fld, ddf, degs.len()));
        }
        samples += 1;
        if samples >= PRIME_SAMPLES {
            break;
        }
    }
    let (fld, ddf, _) = best.expect("some prime is good for a square-free polynomial");
    let mut modular: Vec<Fp> = Vec::new();
    for (g, d) in &ddf {
        modular.extend(fld.equal_degree(g, *d, &mut rng));
    }
    modular.sort();

    // Coefficients of lead * g for any factor g of f are bounded by
    // |lead| 2^n ||f||_2.
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = BigInt::from(2) * lead.abs() * (BigInt::one() << n) * isqrt_ceil(&norm2) + 1;
    let p = BigInt::from(fld.p);
    let lead_inv_p = BigInt::from(fld.inv((&lead % &p).mod_floor(&p).to_u64().unwrap()));
    // Monic image lead^{-1} f, lifted with the modulus below.
    let mut modulus = p.clone();
    while modulus < bound {
        modulus = &modulus * &modulus;
    }
    let lead_inv = lead_inverse(&lead, &p, &lead_inv_p, &modulus);
    let monic_f = zmod(&f.iter().map(|c| c * &lead_inv).collect(), &modulus);
    let (mut lifted, modulus) = multifactor_lift(&monic_f, &modular, fld, &bound);

    let mut out = Vec::new();
    let mut cur = f.clone();
    let mut k = 1;
    while 2 * k <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), k) {
            let lc = cur.last().unwrap().clone();
            let mut g: ZPoly = vec![lc.clone()];
            for &i in &subset {
                g = zmul(&g, &lifted[i]);
            }
            let g: ZPoly = ztrim(g.iter().map(|c| symmetric(c, &modulus)).collect());
            let g = primitive(&g);
            if let Some(q) = zdiv_exact(&cur, &g) {
                out.push(g);
                cur = q;
                let mut idx = subset;
                idx.sort_unstable_by(|a, b| b.cmp(a));
                for i in idx {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            k += 1;
        }
    }
    out.push(primitive(&cur));
    out
}

/// `lead^{-1} mod modulus` by Newton iteration from the inverse mod `p`.
fn lead_inverse(lead: &BigInt, p: &BigInt, inv_p: &BigInt, modulus: &BigInt) -> BigInt {
    let mut inv = inv_p.clone();
    let mut m = p.clone();
    while &m < modulus {
        m = &m * &m;
        inv = (&inv * (BigInt::from(2) - lead * &inv)).mod_floor(&m);
    }
    inv.mod_floor(modulus)
}

fn monic_from_int(a: &ZPoly) -> Poly {
    Poly::from_big(a).monic()
}

/// Full factorisation of a nonzero polynomial over `Q`.
pub fn factor(f: &Poly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let unit = f.leading();
    let mut factors = Vec::new();
    for (part, e) in f.squarefree_decomposition() {
        let (_, prim) = part.primitive_part();
        // Strip powers of t first; they never reach the modular stage.
        let shift = prim.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            factors.push((Poly::x(), e));
        }
        let rest: ZPoly = prim[shift..].to_vec();
        if rest.len() > 1 {
            for g in zassenhaus(&rest) {
                factors.push((monic_from_int(&g), e));
            }
        }
    }
    factors
        .sort_by(|a, b| (a.0.degree(), a.0.coeffs(), a.1).cmp(&(b.0.degree(), b.0.coeffs(), b.1)));
    Factorization { unit, factors }
}

impl Poly {
    pub fn factor(&self) -> Factorization {
        factor(self)
    }
}
