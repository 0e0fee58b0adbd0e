use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{ExponentVector, PolyError};
use crate::linalg::Rational;

/// Ordered list of variable names shared by every polynomial of a context.
pub type Variables = Arc<[String]>;

/// Builds a variable context from names.
pub fn variables<S: AsRef<str>>(names: &[S]) -> Variables {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Sparse multivariate Laurent polynomial with rational coefficients.
///
/// Terms are kept in a map keyed by exponent vector (graded-lex order), and
/// zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Variables,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Variables) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Variables, c: Rational) -> Self {
        Self::monomial(vars, ExponentVector::zeros(vars.len()), c)
    }

    pub fn one(vars: &Variables) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn monomial(vars: &Variables, exponent: ExponentVector, c: Rational) -> Self {
        assert_eq!(
            exponent.len(),
            vars.len(),
            "exponent length must match the variable count"
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    /// The variable `x_i`.
    pub fn var(vars: &Variables, i: usize) -> Self {
        Self::monomial(vars, ExponentVector::unit(vars.len(), i, 1), Rational::one())
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(vars: &Variables, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn variables(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<ExponentVector, Rational> {
        self.terms
    }

    pub fn exponents(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    pub fn coefficient_of(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(ExponentVector::is_nonnegative)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ExponentVector::is_zero)
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    /// Adds `c · x^e` in place.
    pub fn add_term(&mut self, e: ExponentVector, c: Rational) {
        debug_assert_eq!(e.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_context(&self, other: &Polynomial) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_context(other)?;
        let mut out = Polynomial::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// `c · x^e · self`.
    pub fn mul_term(&self, e: &ExponentVector, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(a, k)| (a.add(e), k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial, PolyError> {
        if !self.is_polynomial() {
            return Err(PolyError::LaurentInput);
        }
        if i >= self.vars.len() {
            return Err(PolyError::VariableIndex {
                index: i,
                nvars: self.vars.len(),
            });
        }
        let mut out = Polynomial::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e.get(i);
            if k > 0 {
                out.add_term(e.with(i, k - 1), c * Rational::from_integer(k.into()));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.as_slice()) {
                if k >= 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                } else {
                    t /= num_traits::pow(x.clone(), (-k) as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Same terms, reinterpreted in another context of equal arity.
    pub fn with_variables(&self, vars: &Variables) -> Polynomial {
        assert_eq!(vars.len(), self.vars.len());
        Polynomial {
            vars: vars.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Term maximizing `key`, ties broken by graded-lex.
    pub fn leading_term_by<K: Ord, F: Fn(&ExponentVector) -> K>(&self, key: F) -> Option<(&ExponentVector, &Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| key(a.0).cmp(&key(b.0)).then_with(|| a.0.cmp(b.0)))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self.check_context(&rhs).expect("polynomial addition");
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self.check_context(&rhs).expect("polynomial subtraction");
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (name, &k) in vars.iter().zip(e.as_slice()) {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(name)?;
        if k != 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    /// Descending graded-lex; integer coefficients bare, others as `a/b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if e.is_zero() {
                f.write_str(&crate::linalg::format_rational(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", crate::linalg::format_rational(&a))?;
                }
                write_monomial(f, &self.vars, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars.join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn ctx(n: usize) -> Variables {
        variables(&(1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>())
    }

    #[test]
    fn difference_of_squares() {
        let v = ctx(1);
        let x = Polynomial::var(&v, 0);
        let one = Polynomial::one(&v);
        let p = &(&x - &one) * &(&x + &one);
        assert_eq!(p.to_string(), "x1^2 - 1");
        assert_eq!(p.coefficient_of(&[2].into()), rat(1));
        assert_eq!(p.coefficient_of(&[1].into()), rat(0));
    }

    #[test]
    fn zero_is_identity_and_no_zero_terms_stored() {
        let v = ctx(2);
        let p = Polynomial::from_terms(&v, [([1, 1].into(), ratio(3, 2)), ([1, 0].into(), rat(-1))]);
        assert_eq!(&p + &Polynomial::zero(&v), p);
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!(q.num_terms(), 0);
        assert_eq!(q.to_string(), "0");
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = Polynomial::one(&ctx(2));
        let b = Polynomial::one(&variables(&["y1", "y2"]));
        assert!(matches!(a.try_add(&b), Err(PolyError::ContextMismatch { .. })));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn derivatives() {
        let v = ctx(2);
        let x5 = Polynomial::monomial(&v, [5, 0].into(), rat(1));
        assert_eq!(x5.partial_derivative(0).unwrap().to_string(), "5*x1^4");
        let y3 = Polynomial::monomial(&v, [0, 3].into(), rat(1));
        assert!(y3.partial_derivative(0).unwrap().is_zero());
        let laurent = Polynomial::monomial(&v, [-1, 0].into(), rat(1));
        assert_eq!(laurent.partial_derivative(0).unwrap_err(), PolyError::LaurentInput);
    }

    #[test]
    fn display_forms() {
        let v = ctx(3);
        let p = Polynomial::from_terms(
            &v,
            [
                ([-10, -4, 0].into(), rat(1)),
                ([0, 2, 0].into(), rat(-1)),
                ([0, 0, 0].into(), ratio(-3, 4)),
            ],
        );
        assert_eq!(p.to_string(), "-x2^2 - 3/4 + x1^-10*x2^-4");
    }

    #[test]
    fn evaluation() {
        let v = ctx(2);
        let p = Polynomial::from_terms(&v, [([2, 1].into(), rat(3)), ([0, -1].into(), rat(1))]);
        assert_eq!(p.eval(&[rat(2), ratio(1, 2)]), rat(6) + rat(2));
    }
}
