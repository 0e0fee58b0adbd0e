//! Exact dense linear algebra over the rationals.
//!
//! Scalars are `num` big integers and normalized big rationals. The
//! characteristic polynomial is computed with Berkowitz's division-free
//! recurrence, so rank and signature of a symmetric matrix come straight out
//! of its coefficients without pivoting.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type BigInteger = BigInt;

/// Normalized arbitrary-precision rational (gcd-reduced, positive denominator).
pub type Rational = BigRational;

/// Builds the rational `n / 1`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    fn require_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Monic characteristic polynomial `det(λI − m)`, coefficients in
/// degree-descending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coefficients: Vec<Rational>,
}

impl CharPoly {
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Multiplicity of the root 0, i.e. the number of trailing zero coefficients.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coefficients.iter().rev().take_while(|c| c.is_zero()).count()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients.iter().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Sign variations of `p(λ)`, zeros skipped.
    pub fn sign_variations(&self) -> usize {
        sign_variations(self.coefficients.iter().cloned())
    }

    /// Sign variations of `p(−λ)`, zeros skipped.
    pub fn sign_variations_negated(&self) -> usize {
        let deg = self.degree();
        sign_variations(self.coefficients.iter().enumerate().map(|(k, c)| {
            // coefficient of λ^(deg-k)
            if (deg - k) % 2 == 1 {
                -c
            } else {
                c.clone()
            }
        }))
    }
}

fn sign_variations(coeffs: impl Iterator<Item = Rational>) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let pos = c.is_positive();
        if let Some(prev) = last {
            if prev != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Characteristic polynomial by the Berkowitz recurrence (no divisions).
pub fn char_poly(m: &RationalMatrix) -> Result<CharPoly, LinalgError> {
    let n = m.require_square()?;
    let mut poly = vec![Rational::one()];
    for k in 0..n {
        // Leading (k+1)x(k+1) block split as [[M, C], [R, a]].
        let a = m.get(k, k);
        // Toeplitz column t = [1, -a, -R C, -R M C, ..., -R M^{k-1} C]
        let mut t = Vec::with_capacity(k + 2);
        t.push(Rational::one());
        t.push(-a);
        let mut v: Vec<Rational> = (0..k).map(|i| m.get(i, k).clone()).collect();
        for step in 0..k {
            let rv = (0..k).fold(Rational::zero(), |acc, j| {
                let r = m.get(k, j);
                if r.is_zero() || v[j].is_zero() {
                    acc
                } else {
                    acc + r * &v[j]
                }
            });
            t.push(-rv);
            if step + 1 < k {
                v = (0..k)
                    .map(|i| {
                        (0..k).fold(Rational::zero(), |acc, j| {
                            let e = m.get(i, j);
                            if e.is_zero() || v[j].is_zero() {
                                acc
                            } else {
                                acc + e * &v[j]
                            }
                        })
                    })
                    .collect();
            }
        }
        let mut next = vec![Rational::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, p) in poly.iter().enumerate().take(i + 1) {
                let tij = &t[i - j];
                if !tij.is_zero() && !p.is_zero() {
                    *slot += tij * p;
                }
            }
        }
        poly = next;
    }
    Ok(CharPoly { coefficients: poly })
}

/// Rank and signature of a symmetric matrix, read off its characteristic
/// polynomial.
///
/// Every eigenvalue of a real symmetric matrix is real, so Descartes' rule is
/// exact: sign variations of `p(λ)` count positive eigenvalues and those of
/// `p(−λ)` count negative ones.
pub fn rank_and_signature(m: &RationalMatrix) -> Result<(usize, i64), LinalgError> {
    let n = m.require_square()?;
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let p = char_poly(m)?;
    Ok(rank_and_signature_of(&p, n))
}

pub(crate) fn rank_and_signature_of(p: &CharPoly, n: usize) -> (usize, i64) {
    let rank = n - p.zero_root_multiplicity();
    let pos = p.sign_variations() as i64;
    let neg = p.sign_variations_negated() as i64;
    (rank, pos - neg)
}

/// Eigenvalue sign counts `(positive, negative, zero)` of a symmetric matrix.
pub fn inertia(m: &RationalMatrix) -> Result<(usize, usize, usize), LinalgError> {
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let p = char_poly(m)?;
    Ok((
        p.sign_variations(),
        p.sign_variations_negated(),
        p.zero_root_multiplicity(),
    ))
}

/// Solves `m · x = rhs` exactly by Gauss–Jordan elimination.
pub fn solve_linear(m: &RationalMatrix, rhs: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let n = m.require_square()?;
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LinalgError::Singular)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for e in a[col].iter_mut().skip(col) {
            *e *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (e, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *e -= &f * p;
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Determinant by Bareiss fraction-free elimination on a common-denominator
/// integer copy of the matrix.
pub fn determinant(m: &RationalMatrix) -> Result<Rational, LinalgError> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(Rational::one());
    }
    // Clear denominators row by row: det(m) = det(scaled) / prod(row scales).
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
        scale *= &l;
        a.push(m.row(i).iter().map(|q| q.numer() * (&l / q.denom())).collect());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows).unwrap()
    }

    fn coeffs(p: &CharPoly) -> Vec<Rational> {
        p.coefficients().to_vec()
    }

    #[test]
    fn char_poly_identity_and_swap() {
        let p = char_poly(&RationalMatrix::identity(2)).unwrap();
        assert_eq!(coeffs(&p), vec![rat(1), rat(-2), rat(1)]);
        let p = char_poly(&m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(coeffs(&p), vec![rat(1), rat(0), rat(-1)]);
    }

    #[test]
    fn char_poly_three_by_three() {
        // det(λI - A) for a hand-checked matrix
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let p = char_poly(&a).unwrap();
        // trace 9, principal 2-minors 5+8+11=24, det 2*11 - 1*4 = 18
        assert_eq!(coeffs(&p), vec![rat(1), rat(-9), rat(24), rat(-18)]);
    }

    #[test]
    fn char_poly_rejects_non_square() {
        let a = RationalMatrix::zeros(2, 3);
        assert_eq!(char_poly(&a).unwrap_err(), LinalgError::NotSquare { rows: 2, cols: 3 });
    }

    #[test]
    fn rank_signature_diagonals() {
        assert_eq!(rank_and_signature(&m(&[&[1, 0], &[0, -1]])).unwrap(), (2, 0));
        assert_eq!(rank_and_signature(&m(&[&[2, 0], &[0, 3]])).unwrap(), (2, 2));
        assert_eq!(rank_and_signature(&m(&[&[0, 0], &[0, -5]])).unwrap(), (1, -1));
        assert_eq!(rank_and_signature(&RationalMatrix::zeros(3, 3)).unwrap(), (0, 0));
    }

    #[test]
    fn rank_signature_rejects_asymmetric() {
        assert_eq!(
            rank_and_signature(&m(&[&[1, 2], &[0, 1]])).unwrap_err(),
            LinalgError::NotSymmetric
        );
    }

    #[test]
    fn solve_small_systems() {
        let v = vec![rat(3), ratio(-1, 2)];
        assert_eq!(solve_linear(&RationalMatrix::identity(2), &v).unwrap(), v);
        let x = solve_linear(&m(&[&[0, 1], &[1, 0]]), &v).unwrap();
        assert_eq!(x, vec![ratio(-1, 2), rat(3)]);
    }

    #[test]
    fn solve_reports_singular_and_shape_distinctly() {
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve_linear(&s, &[rat(1), rat(2)]).unwrap_err(), LinalgError::Singular);
        assert_eq!(
            solve_linear(&s, &[rat(1)]).unwrap_err(),
            LinalgError::DimensionMismatch { expected: 2, found: 1 }
        );
        assert!(matches!(
            solve_linear(&RationalMatrix::zeros(1, 2), &[rat(1)]),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn determinant_with_fractions() {
        let a = RationalMatrix::from_rows(vec![vec![ratio(1, 2), rat(1)], vec![rat(3), ratio(2, 3)]]).unwrap();
        assert_eq!(determinant(&a).unwrap(), ratio(1, 3) - rat(3));
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["0", "-7", "3/2", "-258756707658424020014953731203"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
    }
}
