//! Multivariate formal power series truncated at a total degree, with the
//! formal logarithm and exponential computed degree by degree.
//!
//! Both use the Euler operator `D = Σ u_i ∂/∂u_i`, which multiplies the
//! degree-`k` part by `k`: from `D exp(L) = D(L) · exp(L)` one gets
//! `k E_k = Σ_{j=1..k} j L_j E_{k−j}`, and the logarithm inverts it.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::Rational;
use crate::poly::{ExponentVector, Polynomial, Variables};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("logarithm needs constant term 1, found {0}")]
    LogConstant(String),
    #[error("exponential needs constant term 0, found {0}")]
    ExpConstant(String),
    #[error("series has negative exponents")]
    NotPowerSeries,
}

/// A power series known through total degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMultiSeries {
    degree: usize,
    poly: Polynomial,
}

impl TruncatedMultiSeries {
    /// Truncates `p` to total degree `degree`.
    pub fn new(p: &Polynomial, degree: usize) -> Result<Self, SeriesError> {
        if !p.is_polynomial() {
            return Err(SeriesError::NotPowerSeries);
        }
        let poly = Polynomial::from_terms(
            p.variables(),
            p.terms()
                .filter(|(e, _)| e.total_degree() as usize <= degree)
                .map(|(e, c)| (e.clone(), c.clone())),
        );
        Ok(TruncatedMultiSeries { degree, poly })
    }

    pub fn zero(vars: &Variables, degree: usize) -> Self {
        TruncatedMultiSeries {
            degree,
            poly: Polynomial::zero(vars),
        }
    }

    pub fn one(vars: &Variables, degree: usize) -> Self {
        TruncatedMultiSeries {
            degree,
            poly: Polynomial::one(vars),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variables(&self) -> &Variables {
        self.poly.variables()
    }

    pub fn as_polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn constant_term(&self) -> Rational {
        self.poly.coefficient_of(&ExponentVector::zeros(self.poly.nvars()))
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.poly.coefficient_of(e)
    }

    /// Homogeneous parts of degree `0..=degree`.
    pub fn graded_parts(&self) -> Vec<Polynomial> {
        let mut parts = vec![Polynomial::zero(self.variables()); self.degree + 1];
        for (e, c) in self.poly.terms() {
            parts[e.total_degree() as usize].add_term(e.clone(), c.clone());
        }
        parts
    }

    fn from_parts(vars: &Variables, degree: usize, parts: Vec<Polynomial>) -> Self {
        let mut poly = Polynomial::zero(vars);
        for p in parts {
            for (e, c) in p.into_terms() {
                poly.add_term(e, c);
            }
        }
        TruncatedMultiSeries { degree, poly }
    }

    /// Product truncated at the smaller of the two degrees.
    pub fn mul(&self, other: &TruncatedMultiSeries) -> TruncatedMultiSeries {
        let degree = self.degree.min(other.degree);
        let a = self.graded_parts();
        let b = other.graded_parts();
        let parts = (0..=degree)
            .map(|k| (0..=k).fold(Polynomial::zero(self.variables()), |acc, j| acc + &a[j] * &b[k - j]))
            .collect();
        Self::from_parts(self.variables(), degree, parts)
    }
}

impl fmt::Display for TruncatedMultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self.poly, self.degree + 1)
    }
}

/// Formal logarithm of a series with constant term 1.
pub fn series_log(s: &TruncatedMultiSeries) -> Result<TruncatedMultiSeries, SeriesError> {
    let c = s.constant_term();
    if !c.is_one() {
        return Err(SeriesError::LogConstant(crate::linalg::format_rational(&c)));
    }
    let r = s.graded_parts();
    let vars = s.variables();
    let mut l: Vec<Polynomial> = vec![Polynomial::zero(vars)];
    for k in 1..=s.degree {
        let mut acc = r[k].scale(&Rational::from_integer(k.into()));
        for j in 1..k {
            if l[j].is_zero() || r[k - j].is_zero() {
                continue;
            }
            acc = acc - (&l[j] * &r[k - j]).scale(&Rational::from_integer(j.into()));
        }
        l.push(acc.scale(&Rational::new(1.into(), k.into())));
    }
    Ok(TruncatedMultiSeries::from_parts(vars, s.degree, l))
}

/// Formal exponential of a series with constant term 0.
pub fn series_exp(s: &TruncatedMultiSeries) -> Result<TruncatedMultiSeries, SeriesError> {
    let c = s.constant_term();
    if !c.is_zero() {
        return Err(SeriesError::ExpConstant(crate::linalg::format_rational(&c)));
    }
    let l = s.graded_parts();
    let vars = s.variables();
    let mut e: Vec<Polynomial> = vec![Polynomial::one(vars)];
    for k in 1..=s.degree {
        let mut acc = Polynomial::zero(vars);
        for j in 1..=k {
            if l[j].is_zero() || e[k - j].is_zero() {
                continue;
            }
            acc = acc + (&l[j] * &e[k - j]).scale(&Rational::from_integer(j.into()));
        }
        e.push(acc.scale(&Rational::new(1.into(), k.into())));
    }
    Ok(TruncatedMultiSeries::from_parts(vars, s.degree, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, variables};

    fn series(text: &str, names: &[&str], d: usize) -> TruncatedMultiSeries {
        let vars = variables(names);
        TruncatedMultiSeries::new(&parse_polynomial(text, &vars).unwrap(), d).unwrap()
    }

    #[test]
    fn log_of_one_plus_u() {
        let s = series("1 + u", &["u"], 3);
        assert_eq!(series_log(&s).unwrap(), series("u - 1/2*u^2 + 1/3*u^3", &["u"], 3));
    }

    #[test]
    fn exp_of_zero_and_linear() {
        let z = TruncatedMultiSeries::zero(&variables(&["u", "v"]), 4);
        assert_eq!(
            series_exp(&z).unwrap(),
            TruncatedMultiSeries::one(&variables(&["u", "v"]), 4)
        );
        let s = series("u", &["u"], 3);
        assert_eq!(series_exp(&s).unwrap(), series("1 + u + 1/2*u^2 + 1/6*u^3", &["u"], 3));
    }

    #[test]
    fn constant_term_errors() {
        assert!(series_log(&series("2 + u", &["u"], 2)).is_err());
        assert!(series_exp(&series("1 + u", &["u"], 2)).is_err());
    }

    #[test]
    fn truncation_drops_high_terms() {
        let s = series("1 + u*v + u^3", &["u", "v"], 2);
        assert_eq!(s.as_polynomial().num_terms(), 2);
        let p = s.mul(&s);
        assert_eq!(p, series("1 + 2*u*v", &["u", "v"], 2));
    }

    #[test]
    fn exp_log_roundtrip() {
        let s = series("1 + 5*u2 - 5*u3 + 3*u1*u2 - u3^2 + 7/2*u1^3", &["u1", "u2", "u3"], 4);
        assert_eq!(series_exp(&series_log(&s).unwrap()).unwrap(), s);
    }
}
