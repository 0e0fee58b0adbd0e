//! Reduction of an arbitrary zero-dimensional square system to one with
//! pure-power initial forms: Buchberger completion that records every new
//! polynomial as a combination of the inputs, followed by the transformation
//! law `Res_g(h) = Res_f(h · det A)` for `f = A g`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::Rational;
use crate::normal_form::Reducer;
use crate::poly::{polynomial_determinant, ExponentVector, PolySystem, Polynomial};
use crate::weight::{discover_weight, pure_power, verify_basis, BasisError, BasisProfile, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("basis grew past {limit} elements; zero-dimensionality not certified")]
    IterationCap { limit: usize },
    #[error("completed basis has no pure power in every variable; the ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("cofactor identity failed after step {step}")]
    CofactorMismatch { step: usize },
    #[error("weight has length {found}, expected {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("transformed system is not a pure-power basis: {0}")]
    Basis(#[from] BasisError),
}

/// Limits and checks for [`extended_buchberger`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuchbergerOptions {
    /// Largest basis size before giving up.
    pub max_basis: usize,
    /// Re-expand `Σ A_ij g_j` after every step and compare.
    pub check_cofactors: bool,
}

impl Default for BuchbergerOptions {
    fn default() -> Self {
        BuchbergerOptions {
            max_basis: 10_000,
            check_cofactors: false,
        }
    }
}

/// `f = A · g` with `f` having pure-power leading terms, one per variable.
#[derive(Clone, Debug)]
pub struct CofactorBasis {
    original: PolySystem,
    f: PolySystem,
    a: Vec<Vec<Polynomial>>,
    det_a: Polynomial,
    steps: usize,
    basis_size: usize,
}

impl CofactorBasis {
    pub fn original(&self) -> &PolySystem {
        &self.original
    }

    pub fn f(&self) -> &PolySystem {
        &self.f
    }

    /// Row `i` holds the cofactors with `f_i = Σ_j A_ij g_j`.
    pub fn matrix(&self) -> &[Vec<Polynomial>] {
        &self.a
    }

    pub fn det_a(&self) -> &Polynomial {
        &self.det_a
    }

    /// S-polynomials processed.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Size of the partial Gröbner basis when completion stopped.
    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    /// Whether `f_i = Σ_j A_ij g_j` holds exactly for every `i`.
    pub fn identity_holds(&self) -> bool {
        self.f
            .generators()
            .iter()
            .zip(&self.a)
            .all(|(f, row)| combine(row, self.original.generators()) == *f)
    }
}

fn combine(row: &[Polynomial], gens: &[Polynomial]) -> Polynomial {
    row.iter()
        .zip(gens)
        .fold(Polynomial::zero(gens[0].variables()), |acc, (a, g)| acc + a * g)
}

/// A polynomial together with its cofactor row.
#[derive(Clone, Debug)]
struct Tracked {
    p: Polynomial,
    row: Vec<Polynomial>,
    lead: ExponentVector,
    lc: Rational,
}

struct Order<'a>(&'a [i64]);

impl Order<'_> {
    fn key(&self, e: &ExponentVector) -> (i64, ExponentVector) {
        (e.dot(self.0), e.clone())
    }

    fn lead(&self, p: &Polynomial) -> Option<(ExponentVector, Rational)> {
        p.leading_term_by(|e| e.dot(self.0))
            .map(|(e, c)| (e.clone(), c.clone()))
    }
}

fn make_tracked(order: &Order, p: Polynomial, row: Vec<Polynomial>, monic: bool) -> Option<Tracked> {
    let (lead, lc) = order.lead(&p)?;
    if !monic {
        return Some(Tracked { p, row, lead, lc });
    }
    let inv = Rational::one() / &lc;
    Some(Tracked {
        p: p.scale(&inv),
        row: row.iter().map(|a| a.scale(&inv)).collect(),
        lead,
        lc: Rational::one(),
    })
}

/// Full reduction of `p` (with its row) by the current basis.
fn reduce(
    order: &Order,
    basis: &[Tracked],
    mut p: Polynomial,
    mut row: Vec<Polynomial>,
) -> (Polynomial, Vec<Polynomial>) {
    let vars = p.variables().clone();
    let mut rem = Polynomial::zero(&vars);
    while let Some((e, c)) = order.lead(&p) {
        match basis.iter().find(|g| g.lead.le_componentwise(&e)) {
            Some(g) => {
                let m = e.sub(&g.lead);
                let q = &c / &g.lc;
                p = p - g.p.mul_term(&m, &q);
                for (r, gr) in row.iter_mut().zip(&g.row) {
                    *r = &*r - &gr.mul_term(&m, &q);
                }
            }
            None => {
                p = p - Polynomial::monomial(&vars, e.clone(), c.clone());
                rem.add_term(e, c);
            }
        }
    }
    (rem, row)
}

fn lcm(a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
    a.max(b)
}

fn coprime(a: &ExponentVector, b: &ExponentVector) -> bool {
    a.as_slice().iter().zip(b.as_slice()).all(|(&x, &y)| x == 0 || y == 0)
}

/// Picks, for each variable, the basis element with the lowest pure-power
/// leading term in that variable.
fn pure_power_choice(basis: &[Tracked], n: usize) -> Option<Vec<usize>> {
    let mut best: Vec<Option<(i64, usize)>> = vec![None; n];
    for (k, g) in basis.iter().enumerate() {
        if let Some((i, deg)) = pure_power(&g.lead) {
            if best[i].is_none_or(|(d, _)| deg < d) {
                best[i] = Some((deg, k));
            }
        }
    }
    best.into_iter().map(|b| b.map(|(_, k)| k)).collect()
}

/// Buchberger completion under the weight order (ties broken by graded-lex)
/// with cofactor tracking, stopped once every variable has a pure-power
/// leading term. Pairs are processed lowest weighted degree of the lcm
/// first.
pub fn extended_buchberger(
    sys: &PolySystem,
    w: &WeightVector,
    options: BuchbergerOptions,
) -> Result<CofactorBasis, TransformError> {
    let n = sys.nvars();
    if w.len() != n {
        return Err(TransformError::WeightLength {
            expected: n,
            found: w.len(),
        });
    }
    let order = Order(w.as_slice());
    let vars = sys.variables().clone();
    let identity_row = |i: usize| -> Vec<Polynomial> {
        (0..n)
            .map(|j| {
                if i == j {
                    Polynomial::one(&vars)
                } else {
                    Polynomial::zero(&vars)
                }
            })
            .collect()
    };
    let mut basis: Vec<Tracked> = Vec::new();
    for (i, g) in sys.generators().iter().enumerate() {
        if let Some(t) = make_tracked(&order, g.clone(), identity_row(i), false) {
            basis.push(t);
        }
    }
    // Inputs are kept unreduced so that an already-good system maps to itself.
    let mut pairs: BTreeSet<((i64, ExponentVector), usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            if !coprime(&basis[i].lead, &basis[j].lead) {
                pairs.insert((order.key(&lcm(&basis[i].lead, &basis[j].lead)), i, j));
            }
        }
    }
    let mut steps = 0;
    let choice = loop {
        if let Some(choice) = pure_power_choice(&basis, n) {
            break choice;
        }
        let Some(pair) = pairs.pop_first() else {
            // A completed basis without a pure power in some variable: the
            // ideal is not zero-dimensional.
            return Err(TransformError::NotZeroDimensional);
        };
        let (_, i, j) = pair;
        steps += 1;
        let l = lcm(&basis[i].lead, &basis[j].lead);
        let (mi, mj) = (l.sub(&basis[i].lead), l.sub(&basis[j].lead));
        let one = Rational::one();
        let s = basis[i].p.mul_term(&mi, &one) - basis[j].p.mul_term(&mj, &one);
        let row: Vec<Polynomial> = basis[i]
            .row
            .iter()
            .zip(&basis[j].row)
            .map(|(a, b)| a.mul_term(&mi, &one) - b.mul_term(&mj, &one))
            .collect();
        let (rem, row) = reduce(&order, &basis, s, row);
        if options.check_cofactors && combine(&row, sys.generators()) != rem {
            return Err(TransformError::CofactorMismatch { step: steps });
        }
        if let Some(t) = make_tracked(&order, rem, row, true) {
            let k = basis.len();
            for (i, b) in basis.iter().enumerate() {
                if !coprime(&b.lead, &t.lead) {
                    pairs.insert((order.key(&lcm(&b.lead, &t.lead)), i, k));
                }
            }
            basis.push(t);
            if basis.len() > options.max_basis {
                return Err(TransformError::IterationCap {
                    limit: options.max_basis,
                });
            }
        }
    };
    let f: Vec<Polynomial> = choice.iter().map(|&k| basis[k].p.clone()).collect();
    let a: Vec<Vec<Polynomial>> = choice.iter().map(|&k| basis[k].row.clone()).collect();
    let det_a = polynomial_determinant(&a, &vars);
    let f = PolySystem::new(vars, f).expect("same context");
    let out = CofactorBasis {
        original: sys.clone(),
        f,
        a,
        det_a,
        steps,
        basis_size: basis.len(),
    };
    if options.check_cofactors && !out.identity_holds() {
        return Err(TransformError::CofactorMismatch { step: steps });
    }
    Ok(out)
}

/// Verified profile of the transformed system `f`. The leading terms are
/// pure powers under the tie-broken order, so a strictly separating weight
/// is searched for afresh.
pub fn transformed_profile(cb: &CofactorBasis, w: &WeightVector) -> Result<BasisProfile, TransformError> {
    if let Ok(p) = verify_basis(cb.f(), w) {
        return Ok(p);
    }
    let w2 = discover_weight(cb.f())?;
    Ok(verify_basis(cb.f(), &w2)?)
}

/// Weight used when none is supplied: one found by [`discover_weight`] on
/// the input, else all ones.
pub fn default_weight(sys: &PolySystem) -> WeightVector {
    discover_weight(sys).unwrap_or_else(|_| WeightVector::new(vec![1; sys.nvars()]).expect("positive"))
}

/// `Res_g(h)` for an arbitrary zero-dimensional square system `g`.
pub fn residue_general(
    sys: &PolySystem,
    h: &Polynomial,
    w: Option<&WeightVector>,
    options: BuchbergerOptions,
) -> Result<Rational, TransformError> {
    let w = w.cloned().unwrap_or_else(|| default_weight(sys));
    let cb = extended_buchberger(sys, &w, options)?;
    let profile = transformed_profile(&cb, &w)?;
    let hd = h * cb.det_a();
    let v = Reducer::new(&profile).residue(&hd);
    Ok(if v.is_zero() { Rational::zero() } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn sys(vars: &[&str], gens: &[&str]) -> PolySystem {
        PolySystem::parse(vars, gens).unwrap()
    }

    fn checked() -> BuchbergerOptions {
        BuchbergerOptions {
            check_cofactors: true,
            ..Default::default()
        }
    }

    #[test]
    fn already_good_input_is_unchanged() {
        let s = sys(&["x1", "x2"], &["x1^2 + x2", "x2^3 - 1"]);
        let w = WeightVector::new(vec![1, 1]).unwrap();
        let cb = extended_buchberger(&s, &w, checked()).unwrap();
        assert_eq!(cb.f().generators(), s.generators());
        assert!(cb.det_a().is_constant());
        assert_eq!(cb.det_a().coefficient_of(&[0, 0].into()), rat(1));
    }

    #[test]
    fn swapped_variables() {
        let s = sys(&["x1", "x2"], &["x2", "x1"]);
        let w = WeightVector::new(vec![1, 1]).unwrap();
        let cb = extended_buchberger(&s, &w, checked()).unwrap();
        assert_eq!(cb.f().generator(0).to_string(), "x1");
        assert_eq!(cb.det_a().to_string(), "-1");
        let one = Polynomial::one(s.variables());
        assert_eq!(residue_general(&s, &one, None, checked()).unwrap(), rat(-1));
    }

    #[test]
    fn linear_change_of_coordinates() {
        let s = sys(&["x1", "x2"], &["x1 + x2", "x1 - x2"]);
        let w = WeightVector::new(vec![1, 1]).unwrap();
        let cb = extended_buchberger(&s, &w, checked()).unwrap();
        assert!(cb.identity_holds());
        let one = Polynomial::one(s.variables());
        assert_eq!(residue_general(&s, &one, Some(&w), checked()).unwrap(), ratio(-1, 2));
    }

    #[test]
    fn non_zero_dimensional_is_reported() {
        let s = sys(&["x1", "x2"], &["x1*x2", "x1*x2^2"]);
        let w = WeightVector::new(vec![1, 1]).unwrap();
        let opts = BuchbergerOptions {
            max_basis: 20,
            check_cofactors: true,
        };
        assert!(matches!(
            extended_buchberger(&s, &w, opts),
            Err(TransformError::IterationCap { .. } | TransformError::NotZeroDimensional)
        ));
    }
}
