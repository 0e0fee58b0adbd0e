use std::cmp::Ordering;
use std::fmt;

/// Signed exponent vector of a (Laurent) monomial.
///
/// Ordered graded-lexicographically: total degree first, then the entries
/// left to right.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize, k: i64) -> Self {
        let mut e = vec![0; n];
        e[i] = k;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `⟨w, self⟩` for an integer weight.
    pub fn dot(&self, w: &[i64]) -> i64 {
        debug_assert_eq!(w.len(), self.0.len());
        self.0
            .iter()
            .zip(w)
            .try_fold(0i64, |acc, (&a, &b)| a.checked_mul(b).and_then(|p| acc.checked_add(p)))
            .expect("weighted degree overflow")
    }

    /// Componentwise `self ≤ other`.
    pub fn le_componentwise(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn sub(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_sub(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn neg(&self) -> ExponentVector {
        ExponentVector(
            self.0
                .iter()
                .map(|a| a.checked_neg().expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise maximum (the lcm of two monomials).
    pub fn max(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn with(&self, i: usize, value: i64) -> ExponentVector {
        let mut e = self.0.clone();
        e[i] = value;
        ExponentVector(e)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        ExponentVector(v.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for ExponentVector {
    fn from(v: [i64; N]) -> Self {
        ExponentVector(v.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = ExponentVector::from([2, 0]);
        let b = ExponentVector::from([0, 3]);
        let c = ExponentVector::from([1, 1]);
        assert!(b > a, "higher total degree wins");
        assert!(a > c, "lex breaks ties");
        assert!(ExponentVector::from([-1, 0]) < ExponentVector::zeros(2));
    }

    #[test]
    fn arithmetic() {
        let a = ExponentVector::from([4, 1, 2]);
        let b = ExponentVector::from([1, -1, 0]);
        assert_eq!(a.add(&b), ExponentVector::from([5, 0, 2]));
        assert_eq!(a.sub(&b), ExponentVector::from([3, 2, 2]));
        assert_eq!(a.dot(&[3, 4, 7]), 30);
        assert!(ExponentVector::from([1, 1, 2]).le_componentwise(&a));
        assert!(!b.is_nonnegative());
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn overflow_is_checked() {
        let a = ExponentVector::from([i64::MAX]);
        let _ = a.add(&ExponentVector::from([1]));
    }
}
