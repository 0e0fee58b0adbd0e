//! Sparse Laurent polynomials over the rationals, square systems, and
//! Jacobians.

mod exponent;
mod parse;
mod polynomial;

pub use exponent::ExponentVector;
pub use parse::parse_polynomial;
pub use polynomial::{variables, Polynomial, Variables};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at offset {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("variable contexts differ: {left:?} vs {right:?}")]
    ContextMismatch { left: Vec<String>, right: Vec<String> },
    #[error("operation requires nonnegative exponents")]
    LaurentInput,
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("system has {generators} generators for {variables} variables")]
    NotSquare { generators: usize, variables: usize },
}

/// A square polynomial system `(g_1, …, g_n)` in `n` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct PolySystem {
    vars: Variables,
    generators: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(vars: Variables, generators: Vec<Polynomial>) -> Result<Self, PolyError> {
        if generators.len() != vars.len() {
            return Err(PolyError::NotSquare {
                generators: generators.len(),
                variables: vars.len(),
            });
        }
        for g in &generators {
            if g.variables() != &vars {
                return Err(PolyError::ContextMismatch {
                    left: vars.to_vec(),
                    right: g.variables().to_vec(),
                });
            }
            if !g.is_polynomial() {
                return Err(PolyError::LaurentInput);
            }
        }
        Ok(PolySystem { vars, generators })
    }

    /// Parses one generator per string.
    pub fn parse<S: AsRef<str>, T: AsRef<str>>(names: &[S], generators: &[T]) -> Result<Self, PolyError> {
        let vars = variables(names);
        let gens = generators
            .iter()
            .map(|g| parse_polynomial(g.as_ref(), &vars))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(vars, gens)
    }

    pub fn variables(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Polynomial {
        &self.generators[i]
    }

    /// Product `g_1 ⋯ g_n`.
    pub fn product(&self) -> Polynomial {
        self.generators
            .iter()
            .fold(Polynomial::one(&self.vars), |acc, g| &acc * g)
    }

    /// Matrix of partial derivatives `∂g_i/∂x_j`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<Polynomial>> {
        self.generators
            .iter()
            .map(|g| {
                (0..self.nvars())
                    .map(|j| g.partial_derivative(j).expect("generators are polynomials"))
                    .collect()
            })
            .collect()
    }

    /// `J_g = det(∂g_i/∂x_j)`, expanded.
    pub fn jacobian_determinant(&self) -> Polynomial {
        polynomial_determinant(&self.jacobian_matrix(), &self.vars)
    }
}

impl std::fmt::Debug for PolySystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolySystem")
            .field("vars", &self.vars)
            .field(
                "generators",
                &self.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first row. Intended for the small sizes of this crate (n ≤ 8).
pub fn polynomial_determinant(m: &[Vec<Polynomial>], vars: &Variables) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(vars);
    }
    let cols: Vec<usize> = (0..n).collect();
    det_minor(m, 0, &cols, vars)
}

fn det_minor(m: &[Vec<Polynomial>], row: usize, cols: &[usize], vars: &Variables) -> Polynomial {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = Polynomial::zero(vars);
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_minor(m, row + 1, &rest, vars);
        let term = entry * &minor;
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn jacobian_of_coordinates_is_one() {
        let sys = PolySystem::parse(&["x1", "x2"], &["x1", "x2"]).unwrap();
        assert_eq!(sys.jacobian_determinant(), Polynomial::one(sys.variables()));
    }

    #[test]
    fn jacobian_univariate_square() {
        let sys = PolySystem::parse(&["x"], &["x^2"]).unwrap();
        assert_eq!(sys.jacobian_determinant().to_string(), "2*x");
    }

    #[test]
    fn swapped_coordinates_have_negative_jacobian() {
        let sys = PolySystem::parse(&["x1", "x2"], &["x2", "x1"]).unwrap();
        assert_eq!(
            sys.jacobian_determinant(),
            Polynomial::constant(sys.variables(), rat(-1))
        );
    }

    #[test]
    fn arity_is_checked() {
        let err = PolySystem::parse(&["x1", "x2", "x3"], &["x1", "x2"]).unwrap_err();
        assert_eq!(
            err,
            PolyError::NotSquare {
                generators: 2,
                variables: 3
            }
        );
    }
}
