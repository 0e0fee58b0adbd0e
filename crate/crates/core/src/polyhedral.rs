//! Exact polyhedral primitives: Fourier–Motzkin feasibility with a witness
//! point, and the double description method for the extreme rays of a
//! pointed cone `{x : A x ≥ 0}`.
//!
//! Dimensions here are tiny (n ≤ 8 variables), so neither routine tries to
//! be clever about redundancy beyond keeping the tightest bound per
//! direction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::Rational;

/// Largest dimension the polyhedral routines are documented for.
pub const MAX_DIMENSION: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedralError {
    #[error("cone is not pointed (constraint matrix has rank {rank} < {dim})")]
    NotPointed { rank: usize, dim: usize },
    #[error("integer overflow converting a ray to machine words")]
    Overflow,
}

/// A linear constraint `⟨a, y⟩ ≥ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub a: Vec<Rational>,
    pub b: Rational,
}

impl Inequality {
    pub fn new(a: Vec<Rational>, b: Rational) -> Self {
        Inequality { a, b }
    }

    pub fn from_ints(a: &[i64], b: i64) -> Self {
        Inequality {
            a: a.iter().map(|&v| Rational::from_integer(v.into())).collect(),
            b: Rational::from_integer(b.into()),
        }
    }

    fn satisfied_by(&self, y: &[Rational]) -> bool {
        dot_q(&self.a, y) >= self.b
    }
}

fn dot_q(a: &[Rational], y: &[Rational]) -> Rational {
    a.iter()
        .zip(y)
        .filter(|(p, q)| !p.is_zero() && !q.is_zero())
        .fold(Rational::zero(), |acc, (p, q)| acc + p * q)
}

/// Adds a constraint keeping only the tightest right-hand side per direction.
/// Returns false when the constraint is a contradiction `0 ≥ b > 0`.
fn push_tightest(set: &mut BTreeMap<Vec<Rational>, Rational>, ineq: Inequality) -> bool {
    let Some(lead) = ineq.a.iter().find(|c| !c.is_zero()).map(|c| c.abs()) else {
        return ineq.b <= Rational::zero();
    };
    let a: Vec<Rational> = ineq.a.iter().map(|c| c / &lead).collect();
    let b = ineq.b / &lead;
    set.entry(a)
        .and_modify(|old| {
            if b > *old {
                *old = b.clone();
            }
        })
        .or_insert(b);
    true
}

/// Decides feasibility of `{y : ⟨a_k, y⟩ ≥ b_k}` by Fourier–Motzkin
/// elimination and returns a witness point when one exists.
///
/// The witness is built by back substitution, taking in each coordinate the
/// smallest integer above its lower bound when that fits, so results tend to
/// be small integer vectors.
pub fn fourier_motzkin_feasible(n: usize, constraints: &[Inequality]) -> Option<Vec<Rational>> {
    // levels[k] holds constraints involving only y_0..=y_k.
    let mut levels: Vec<Vec<Inequality>> = vec![Vec::new(); n];
    let mut current = BTreeMap::new();
    for c in constraints {
        debug_assert_eq!(c.a.len(), n);
        if !push_tightest(&mut current, c.clone()) {
            return None;
        }
    }
    if n == 0 {
        return Some(Vec::new());
    }
    for k in (0..n).rev() {
        let cs: Vec<Inequality> = current
            .iter()
            .map(|(a, b)| Inequality::new(a.clone(), b.clone()))
            .collect();
        levels[k] = cs.clone();
        if k == 0 {
            break;
        }
        let mut next = BTreeMap::new();
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for c in cs {
            let s = &c.a[k];
            if s.is_zero() {
                if !push_tightest(&mut next, c) {
                    return None;
                }
            } else if s.is_positive() {
                lower.push(c);
            } else {
                upper.push(c);
            }
        }
        for lo in &lower {
            for up in &upper {
                let fl = up.a[k].abs();
                let fu = lo.a[k].abs();
                let a: Vec<Rational> = lo.a.iter().zip(&up.a).map(|(p, q)| p * &fl + q * &fu).collect();
                let b = &lo.b * &fl + &up.b * &fu;
                if !push_tightest(&mut next, Inequality::new(a, b)) {
                    return None;
                }
            }
        }
        current = next;
    }
    let mut y: Vec<Rational> = vec![Rational::zero(); n];
    for k in 0..n {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for c in &levels[k] {
            let s = &c.a[k];
            let rest: Rational = (0..k).fold(Rational::zero(), |acc, j| acc + &c.a[j] * &y[j]);
            if s.is_zero() {
                if rest < c.b {
                    return None;
                }
                continue;
            }
            let bound = (&c.b - rest) / s;
            if s.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        y[k] = match (lo, hi) {
            (Some(l), Some(h)) => {
                if l > h {
                    return None;
                }
                let c = l.ceil();
                if c <= h {
                    c
                } else {
                    l
                }
            }
            (Some(l), None) => l.ceil(),
            (None, Some(h)) => h.floor(),
            (None, None) => Rational::zero(),
        };
    }
    debug_assert!(constraints.iter().all(|c| c.satisfied_by(&y)));
    Some(y)
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    primitive(&ints)
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>, PolyhedralError> {
    v.iter().map(|x| x.to_i64().ok_or(PolyhedralError::Overflow)).collect()
}

fn dot_z(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank_of(rows: &[Vec<BigInt>], n: usize) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (e, q) in row.iter_mut().zip(&pivot) {
                *e -= &f * q;
            }
        }
        rank += 1;
    }
    rank
}

/// Extreme rays of the pointed cone `{x ∈ ℝⁿ : ⟨a, x⟩ ≥ 0 for every row a}`
/// by the double description method, as primitive integer vectors in a
/// canonical (sorted) order.
pub fn extreme_rays(rows: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>, PolyhedralError> {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rank = rank_of(&rows, n);
    if rank < n {
        return Err(PolyhedralError::NotPointed { rank, dim: n });
    }
    // Greedily pick n independent rows for the initial simplicial cone.
    let mut basis: Vec<usize> = Vec::new();
    for (i, _) in rows.iter().enumerate() {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&b| rows[b].clone()).collect();
        trial.push(rows[i].clone());
        if rank_of(&trial, n) == trial.len() {
            basis.push(i);
            if basis.len() == n {
                break;
            }
        }
    }
    // Rays of {x : B x ≥ 0} are the columns of B⁻¹.
    let b_mat: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let b = crate::linalg::RationalMatrix::from_rows(b_mat).expect("square basis");
    let mut rays: Vec<(Vec<BigInt>, Vec<usize>)> = Vec::new();
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        let col = crate::linalg::solve_linear(&b, &e).expect("independent rows");
        let ray = primitive_integer(&col);
        rays.push((ray, Vec::new()));
    }
    let mut processed: Vec<usize> = Vec::new();
    let refresh = |rays: &mut Vec<(Vec<BigInt>, Vec<usize>)>, processed: &[usize]| {
        for (r, z) in rays.iter_mut() {
            *z = processed
                .iter()
                .copied()
                .filter(|&i| dot_z(&rows[i], r).is_zero())
                .collect();
        }
    };
    processed.extend(basis.iter().copied());
    refresh(&mut rays, &processed);
    for (i, row) in rows.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| dot_z(row, r)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<(Vec<BigInt>, Vec<usize>)> = rays
            .iter()
            .zip(&vals)
            .filter(|(_, v)| !v.is_negative())
            .map(|(r, _)| r.clone())
            .collect();
        for &p in &plus {
            for &m in &minus {
                let common: Vec<usize> = rays[p].1.iter().copied().filter(|c| rays[m].1.contains(c)).collect();
                if common.len() + 2 < n {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, (_, z))| k == p || k == m || !common.iter().all(|c| z.contains(c)));
                if !adjacent {
                    continue;
                }
                let (rp, rm) = (&rays[p].0, &rays[m].0);
                let combo: Vec<BigInt> = rp.iter().zip(rm).map(|(x, y)| &vals[p] * y - &vals[m] * x).collect();
                next.push((primitive(&combo), Vec::new()));
            }
        }
        processed.push(i);
        rays = next;
        refresh(&mut rays, &processed);
    }
    let mut out: Vec<Vec<i64>> = rays.iter().map(|(r, _)| to_i64(r)).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Whether `v` lies in the cone positively spanned by `generators`, decided
/// through Farkas' lemma: `v ∉ pos(G)` iff some `y` has `⟨y, g⟩ ≥ 0` for all
/// `g ∈ G` and `⟨y, v⟩ < 0`.
pub fn in_cone(v: &[i64], generators: &[Vec<i64>]) -> bool {
    let n = v.len();
    let mut cs: Vec<Inequality> = generators.iter().map(|g| Inequality::from_ints(g, 0)).collect();
    cs.push(Inequality::from_ints(&v.iter().map(|x| -x).collect::<Vec<_>>(), 1));
    fourier_motzkin_feasible(n, &cs).is_none()
}

/// Primitive integer normalization of an integer vector (gcd divided out).
pub fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Reduces a generating set of a cone to its extreme generators (primitive,
/// deduplicated, sorted). Zero vectors are dropped.
pub fn extreme_generators(generators: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut gens: Vec<Vec<i64>> = generators
        .iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .map(|g| primitive_i64(g))
        .collect();
    gens.sort();
    gens.dedup();
    let mut keep: Vec<Vec<i64>> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let others: Vec<Vec<i64>> = gens
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, x)| x.clone())
            .collect();
        if !in_cone(g, &others) {
            keep.push(g.clone());
        }
    }
    keep
}
