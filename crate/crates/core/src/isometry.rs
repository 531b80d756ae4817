//! Bounded search for finite-order isometries of small lattices.
//!
//! Columns of `f` are the images of the basis vectors. Every result is
//! certified only up to the entry bound of the search box.

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::rational::{self, Rational};

type Mat = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConstraints {
    pub order: u32,
    pub entry_bound: i64,
    pub require_f2_eq_minus_i: bool,
    pub require_trivial_discriminant_action: bool,
    pub max_rank: usize,
    pub max_bound: i64,
    /// Order in which columns are assigned; identity when `None`.
    pub column_order: Option<Vec<usize>>,
}

impl SearchConstraints {
    pub fn new(order: u32, entry_bound: i64) -> Self {
        SearchConstraints {
            order,
            entry_bound,
            require_f2_eq_minus_i: false,
            require_trivial_discriminant_action: false,
            max_rank: 6,
            max_bound: 3,
            column_order: None,
        }
    }

    pub fn f2_minus_i(mut self, yes: bool) -> Self {
        self.require_f2_eq_minus_i = yes;
        self
    }

    pub fn trivial_action(mut self, yes: bool) -> Self {
        self.require_trivial_discriminant_action = yes;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IsometryCandidate {
    /// Row-major.
    pub matrix: Mat,
    pub order: u32,
    pub discriminant_action_trivial: bool,
}

impl IsometryCandidate {
    pub fn to_json(&self) -> Value {
        json!({
            "matrix": self.matrix,
            "order": self.order,
            "discriminant_action_trivial": self.discriminant_action_trivial,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantAction {
    /// Images of the generator lifts, coordinates reduced into `[0, 1)`.
    pub images: Vec<Vec<Rational>>,
    pub fixed: Vec<bool>,
    pub trivial: bool,
}

fn gram_i64(l: &GramLattice) -> Result<Mat> {
    let g = l.gram();
    (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .map(|j| {
                    g[(i, j)]
                        .to_i64()
                        .ok_or_else(|| Error::InvalidInput("Gram entry too large".into()))
                })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = out[i][j].checked_add(a[i][k].checked_mul(b[k][j])?)?;
            }
        }
    }
    Some(out)
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn is_isometry(f: &Mat, gram: &Mat) -> bool {
    let n = gram.len();
    (0..n).all(|i| (0..n).all(|j| pair(gram, &column(f, i), &column(f, j)) == gram[i][j]))
}

fn column(f: &Mat, j: usize) -> Vec<i64> {
    f.iter().map(|r| r[j]).collect()
}

fn pair(gram: &Mat, x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            s += xi * gram[i][j] * yj;
        }
    }
    s
}

/// Exact multiplicative order, if it is at most `cap`.
pub fn matrix_order(f: &Mat, cap: u32) -> Option<u32> {
    let id = identity(f.len());
    let mut p = f.clone();
    for k in 1..=cap {
        if p == id {
            return Some(k);
        }
        p = mat_mul(&p, f)?;
    }
    None
}

/// Induced map on `A_L`; trivial when every generator lift is fixed mod `L`.
pub fn discriminant_action(f: &Mat, lattice: &GramLattice) -> Result<DiscriminantAction> {
    let gram = gram_i64(lattice)?;
    let n = gram.len();
    if f.len() != n || f.iter().any(|r| r.len() != n) || !is_isometry(f, &gram) {
        return Err(Error::NotAnIsometry);
    }
    let one = Rational::from_integer(1.into());
    let disc = lattice.discriminant_group();
    let mut images = Vec::new();
    let mut fixed = Vec::new();
    for g in disc.generator_lifts() {
        let image: Vec<Rational> = (0..n)
            .map(|i| {
                let s = (0..n).fold(Rational::zero(), |acc, k| {
                    acc + rational::int(f[i][k]) * &g[k]
                });
                rational::rem_euclid(&s, &one)
            })
            .collect();
        fixed.push(&image == g);
        images.push(image);
    }
    let trivial = fixed.iter().all(|b| *b);
    Ok(DiscriminantAction {
        images,
        fixed,
        trivial,
    })
}

/// All isometries in the box `[-B, B]^{n×n}` meeting the constraints,
/// sorted lexicographically by row-major entries.
pub fn search_isometries(
    lattice: &GramLattice,
    c: &SearchConstraints,
) -> Result<Vec<IsometryCandidate>> {
    let n = lattice.rank();
    if n > c.max_rank {
        return Err(Error::GuardExceeded(format!(
            "rank {n} exceeds {}",
            c.max_rank
        )));
    }
    if c.entry_bound < 0 || c.entry_bound > c.max_bound {
        return Err(Error::GuardExceeded(format!(
            "entry bound {} outside 0..={}",
            c.entry_bound, c.max_bound
        )));
    }
    if c.order == 0 {
        return Err(Error::InvalidInput("order must be positive".into()));
    }
    let perm = match &c.column_order {
        Some(p) => {
            let mut s = p.clone();
            s.sort_unstable();
            if s != (0..n).collect::<Vec<_>>() {
                return Err(Error::InvalidInput(
                    "column order is not a permutation".into(),
                ));
            }
            p.clone()
        }
        None => (0..n).collect(),
    };
    if c.require_f2_eq_minus_i {
        let sig = lattice.signature();
        if c.order != 4 || sig.t_plus % 2 == 1 || sig.t_minus % 2 == 1 {
            return Ok(Vec::new());
        }
    }
    let gram = gram_i64(lattice)?;
    let pool = box_vectors(n, c.entry_bound, &gram);
    let first = perm[0];
    let mut out: Vec<IsometryCandidate> = pool
        .par_iter()
        .filter(|(_, norm)| *norm == gram[first][first])
        .flat_map_iter(|(v, _)| {
            let mut cols: Vec<Option<Vec<i64>>> = vec![None; n];
            cols[first] = Some(v.clone());
            let mut found = Vec::new();
            if f2_consistent(&cols, c.require_f2_eq_minus_i) {
                dfs(
                    &gram,
                    &pool,
                    &perm,
                    1,
                    &mut cols,
                    c.require_f2_eq_minus_i,
                    &mut found,
                );
            }
            found
        })
        .filter_map(|f| finish(f, lattice, c).transpose())
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

fn box_vectors(n: usize, b: i64, gram: &Mat) -> Vec<(Vec<i64>, i64)> {
    let width = (2 * b + 1) as usize;
    let total = width.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (code % width) as i64 - b;
                    code /= width;
                    d
                })
                .collect();
            let norm = pair(gram, &v, &v);
            (v, norm)
        })
        .collect()
}

/// With `f² = -I`: for every assigned column `f e_i = v` whose support is
/// assigned, `f v = -e_i`.
fn f2_consistent(cols: &[Option<Vec<i64>>], required: bool) -> bool {
    if !required {
        return true;
    }
    let n = cols.len();
    for (i, ci) in cols.iter().enumerate() {
        let Some(v) = ci else { continue };
        if v.iter()
            .enumerate()
            .any(|(k, x)| *x != 0 && cols[k].is_none())
        {
            continue;
        }
        for r in 0..n {
            let s: i64 = (0..n)
                .filter(|&k| v[k] != 0)
                .map(|k| v[k] * cols[k].as_ref().unwrap()[r])
                .sum();
            if s != -i64::from(r == i) {
                return false;
            }
        }
    }
    true
}

fn dfs(
    gram: &Mat,
    pool: &[(Vec<i64>, i64)],
    perm: &[usize],
    depth: usize,
    cols: &mut Vec<Option<Vec<i64>>>,
    f2: bool,
    found: &mut Vec<Mat>,
) {
    let n = perm.len();
    if depth == n {
        let m = (0..n)
            .map(|i| (0..n).map(|j| cols[j].as_ref().unwrap()[i]).collect())
            .collect();
        found.push(m);
        return;
    }
    let j = perm[depth];
    for (v, norm) in pool {
        if *norm != gram[j][j] {
            continue;
        }
        let ok = perm[..depth]
            .iter()
            .all(|&i| pair(gram, cols[i].as_ref().unwrap(), v) == gram[i][j]);
        if !ok {
            continue;
        }
        cols[j] = Some(v.clone());
        if f2_consistent(cols, f2) {
            dfs(gram, pool, perm, depth + 1, cols, f2, found);
        }
        cols[j] = None;
    }
}

fn finish(
    f: Mat,
    lattice: &GramLattice,
    c: &SearchConstraints,
) -> Result<Option<IsometryCandidate>> {
    if matrix_order(&f, c.order) != Some(c.order) {
        return Ok(None);
    }
    if c.require_f2_eq_minus_i {
        let sq = mat_mul(&f, &f);
        let minus: Mat = identity(f.len())
            .into_iter()
            .map(|r| r.into_iter().map(|x| -x).collect())
            .collect();
        if sq.as_ref() != Some(&minus) {
            return Ok(None);
        }
    }
    let trivial = discriminant_action(&f, lattice)?.trivial;
    if c.require_trivial_discriminant_action && !trivial {
        return Ok(None);
    }
    Ok(Some(IsometryCandidate {
        matrix: f,
        order: c.order,
        discriminant_action_trivial: trivial,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lat(e: &str) -> GramLattice {
        GramLattice::from_expr(e).unwrap()
    }

    /// Plain enumeration of the whole box, no pruning.
    fn brute_force(l: &GramLattice, c: &SearchConstraints) -> Vec<Mat> {
        let gram = gram_i64(l).unwrap();
        let n = gram.len();
        let b = c.entry_bound;
        let width = (2 * b + 1) as u64;
        let mut out = Vec::new();
        for mut code in 0..width.pow((n * n) as u32) {
            let f: Mat = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let d = (code % width) as i64 - b;
                            code /= width;
                            d
                        })
                        .collect()
                })
                .collect();
            if !is_isometry(&f, &gram) || matrix_order(&f, c.order) != Some(c.order) {
                continue;
            }
            if c.require_f2_eq_minus_i {
                let sq = mat_mul(&f, &f).unwrap();
                if sq
                    .iter()
                    .enumerate()
                    .any(|(i, r)| r.iter().enumerate().any(|(j, x)| *x != -i64::from(i == j)))
                {
                    continue;
                }
            }
            if c.require_trivial_discriminant_action && !discriminant_action(&f, l).unwrap().trivial
            {
                continue;
            }
            out.push(f);
        }
        out.sort();
        out
    }

    fn matrices(v: &[IsometryCandidate]) -> Vec<Mat> {
        v.iter().map(|c| c.matrix.clone()).collect()
    }

    #[test]
    fn a1_squared_with_trivial_action_is_empty() {
        let l = lat("A1+A1");
        let c = SearchConstraints::new(4, 1)
            .f2_minus_i(true)
            .trivial_action(true);
        assert!(search_isometries(&l, &c).unwrap().is_empty());
        assert!(brute_force(&l, &c).is_empty());
    }

    #[test]
    fn a1_squared_contains_rotation() {
        let l = lat("A1+A1");
        let c = SearchConstraints::new(4, 1).f2_minus_i(true);
        let found = search_isometries(&l, &c).unwrap();
        assert!(found
            .iter()
            .any(|f| f.matrix == vec![vec![0, -1], vec![1, 0]]));
        assert_eq!(matrices(&found), brute_force(&l, &c));
        assert!(found.iter().all(|f| !f.discriminant_action_trivial));
    }

    #[test]
    fn hyperbolic_plane_has_no_square_root_of_minus_one() {
        let c = SearchConstraints::new(4, 2).f2_minus_i(true);
        assert!(search_isometries(&lat("U"), &c).unwrap().is_empty());
        let c = SearchConstraints::new(4, 2);
        assert!(brute_force(&lat("U"), &c).is_empty());
    }

    #[test]
    fn guard() {
        let c = SearchConstraints::new(4, 4);
        assert!(matches!(
            search_isometries(&lat("A1"), &c),
            Err(Error::GuardExceeded(_))
        ));
        let c = SearchConstraints::new(4, 1);
        assert!(matches!(
            search_isometries(&lat("U+D4+A1"), &c),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn discriminant_actions() {
        let d4 = lat("D4");
        let id = identity(4);
        assert!(discriminant_action(&id, &d4).unwrap().trivial);
        let minus: Mat = id.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        assert!(discriminant_action(&minus, &d4).unwrap().trivial);
        let rot = vec![vec![0, -1], vec![1, 0]];
        let act = discriminant_action(&rot, &lat("A1+A1")).unwrap();
        assert!(!act.trivial);
        assert_eq!(act.images[0], vec![rational::int(0), rational::frac(1, 2)]);
        assert_eq!(
            discriminant_action(&vec![vec![1, 1], vec![0, 1]], &lat("A1+A1")),
            Err(Error::NotAnIsometry)
        );
    }

    #[test]
    fn delta_one_obstruction_for_a1_powers() {
        for e in ["A1", "A1+A1", "A1+A1+A1", "A1+A1+A1+A1"] {
            let c = SearchConstraints::new(4, 2)
                .f2_minus_i(true)
                .trivial_action(true);
            assert!(search_isometries(&lat(e), &c).unwrap().is_empty(), "{e}");
        }
    }

    #[test]
    fn d4_order_four_square_roots_exist() {
        let c = SearchConstraints::new(4, 2).f2_minus_i(true);
        let found = search_isometries(&lat("D4"), &c).unwrap();
        assert!(!found.is_empty());
        let gram = gram_i64(&lat("D4")).unwrap();
        for f in &found {
            assert!(is_isometry(&f.matrix, &gram));
            assert_eq!(matrix_order(&f.matrix, 8), Some(4));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn column_order_does_not_change_results(
            idx in 0usize..4,
            perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
            order in prop::sample::select(vec![2u32, 3, 4, 6]),
        ) {
            let e = ["A2+A1", "A1+A1+A1", "A3", "U+A1"][idx];
            let l = lat(e);
            let base = SearchConstraints::new(order, 1);
            let mut permuted = base.clone();
            permuted.column_order = Some(perm);
            prop_assert_eq!(search_isometries(&l, &base).unwrap(), search_isometries(&l, &permuted).unwrap());
        }

        #[test]
        fn results_are_certified_isometries(
            idx in 0usize..4,
            order in prop::sample::select(vec![2u32, 4]),
            f2 in any::<bool>(),
        ) {
            let e = ["A1+A1", "A2", "U", "A1+A1+A1+A1"][idx];
            let l = lat(e);
            let c = SearchConstraints::new(order, 1).f2_minus_i(f2);
            let found = search_isometries(&l, &c).unwrap();
            let gram = gram_i64(&l).unwrap();
            let sig = l.signature();
            for f in &found {
                prop_assert!(is_isometry(&f.matrix, &gram));
                prop_assert_eq!(matrix_order(&f.matrix, order), Some(order));
                if f2 {
                    prop_assert!(sig.t_plus.is_multiple_of(2) && sig.t_minus.is_multiple_of(2));
                }
            }
            if l.rank() <= 2 {
                prop_assert_eq!(matrices(&found), brute_force(&l, &c));
            }
        }
    }
}
