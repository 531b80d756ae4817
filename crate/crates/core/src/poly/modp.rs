//! Dense polynomials over `F_p` for word-sized odd primes.

use num_bigint::BigUint;
use rand::Rng;

/// Ascending coefficients in `[0, p)`, no trailing zeros.
pub(crate) type Fp = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 31));
        Field { p }
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        let mut r = 1;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        assert!(b != 0, "inverse of zero mod p");
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        r
    }

    pub fn trim(mut a: Fp) -> Fp {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &Fp) -> Option<usize> {
        a.len().checked_sub(1)
    }

    #[cfg(test)]
    pub fn add(&self, a: &Fp, b: &Fp) -> Fp {
        let n = a.len().max(b.len());
        Self::trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        let n = a.len().max(b.len());
        Self::trim(
            (0..n)
                .map(|i| {
                    (a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0))
                        % self.p
                })
                .collect(),
        )
    }

    pub fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        Self::trim(out)
    }

    pub fn scale(&self, a: &Fp, c: u64) -> Fp {
        Self::trim(a.iter().map(|&x| self.mulm(x, c)).collect())
    }

    pub fn monic(&self, a: &Fp) -> Fp {
        match a.last() {
            None => vec![],
            Some(&l) => self.scale(a, self.inv(l)),
        }
    }

    pub fn divrem(&self, a: &Fp, b: &Fp) -> (Fp, Fp) {
        let db = Self::deg(b).expect("division by zero polynomial");
        let linv = self.inv(b[db]);
        let mut r = a.clone();
        if r.len() <= db {
            return (vec![], r);
        }
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mulm(r[k + db], linv);
            if c == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - self.mulm(c, y)) % self.p;
            }
            q[k] = c;
        }
        r.truncate(db);
        (Self::trim(q), Self::trim(r))
    }

    pub fn rem(&self, a: &Fp, b: &Fp) -> Fp {
        self.divrem(a, b).1
    }

    pub fn gcd(&self, a: &Fp, b: &Fp) -> Fp {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(&self, a: &Fp, b: &Fp) -> (Fp, Fp, Fp) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], vec![]);
        let (mut t0, mut t1) = (vec![], vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = self.inv(*r0.last().expect("nonzero gcd"));
        (self.scale(&r0, l), self.scale(&s0, l), self.scale(&t0, l))
    }

    pub fn derivative(&self, a: &Fp) -> Fp {
        Self::trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| self.mulm(c, k as u64 % self.p))
                .collect(),
        )
    }

    pub fn powmod(&self, a: &Fp, e: &BigUint, m: &Fp) -> Fp {
        let mut acc = vec![1u64];
        let base = self.rem(a, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
        }
        self.rem(&acc, m)
    }

    /// Distinct-degree factorisation of a monic square-free `f`:
    /// `(product of all degree-d irreducible factors, d)`.
    pub fn distinct_degree(&self, f: &Fp) -> Vec<(Fp, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x: Fp = vec![0, 1];
        let pb = BigUint::from(self.p);
        let mut h = x.clone();
        let mut d = 0;
        while Self::deg(&f).unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = self.powmod(&h, &pb, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if Self::deg(&g).unwrap_or(0) > 0 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        if let Some(df) = Self::deg(&f) {
            if df > 0 {
                out.push((f, df));
            }
        }
        out
    }

    /// Equal-degree splitting of a monic product of degree-`d` irreducibles.
    pub fn equal_degree(&self, g: &Fp, d: usize, rng: &mut impl Rng) -> Vec<Fp> {
        let n = Self::deg(g).unwrap();
        if n == d {
            return vec![g.clone()];
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Fp = Self::trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if Self::deg(&a).unwrap_or(0) == 0 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, g), &vec![1]);
            let h = self.gcd(&b, g);
            let dh = Self::deg(&h).unwrap_or(0);
            if dh > 0 && dh < n {
                let rest = self.divrem(g, &h).0;
                let mut out = self.equal_degree(&h, d, rng);
                out.extend(self.equal_degree(&rest, d, rng));
                return out;
            }
        }
    }

    #[cfg(test)]
    pub fn factor_squarefree(&self, f: &Fp, rng: &mut impl Rng) -> Vec<Fp> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out.sort();
        out
    }
}
