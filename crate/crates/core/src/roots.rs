//! Applications of traces: the trace form and its `h`-weighted variant, real
//! and complex root counts from its rank and signature, the mapping degree
//! as the signature of the residue pairing, power sums, and the Chow form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{char_poly, rank_and_signature_of, CharPoly, LinalgError, Rational, RationalMatrix};
use crate::multiseries::{series_exp, SeriesError, TruncatedMultiSeries};
use crate::normal_form::{Reducer, ResidueMethod};
use crate::poly::{variables, ExponentVector, Polynomial, Variables};
use crate::weight::BasisProfile;

/// `T^h_{ij} = tr(x^{i+j} · h)` on the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceForm {
    matrix: RationalMatrix,
    h: Polynomial,
}

impl TraceForm {
    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn h(&self) -> &Polynomial {
        &self.h
    }
}

/// Aggregate root data read off the trace form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCountReport {
    pub dim_v: usize,
    pub rank: usize,
    pub signature: i64,
    pub distinct_complex: usize,
    pub distinct_real: usize,
    /// Positive and negative roots of the characteristic polynomial of `T`,
    /// counted by Descartes' rule (exact for a real symmetric matrix).
    pub positive_eigenvalues: usize,
    pub negative_eigenvalues: usize,
    pub char_poly: CharPoly,
}

/// The trace form weighted by `h` (the plain trace form for `h = 1`).
pub fn trace_form(profile: &BasisProfile, h: Option<&Polynomial>) -> TraceForm {
    trace_form_with(&Reducer::new(profile), h)
}

/// [`trace_form`] reusing the normal-form memo of `reducer`.
pub fn trace_form_with(reducer: &Reducer, h: Option<&Polynomial>) -> TraceForm {
    let vars = reducer.profile().system().variables().clone();
    let h = h.cloned().unwrap_or_else(|| Polynomial::one(&vars));
    let hj = &h.with_variables(&vars) * &reducer.jacobian_nf();
    let exps = reducer.basis().exponents();
    let n = exps.len();
    let top = reducer.basis().top_index();
    let mut by_sum: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let s = exps[i].add(&exps[j]);
            let v = by_sum
                .entry(s.clone())
                .or_insert_with(|| {
                    hj.terms().fold(Rational::zero(), |acc, (e, c)| {
                        let x = &reducer.monomial_nf(&s.add(e))[top];
                        if x.is_zero() {
                            acc
                        } else {
                            acc + c * x
                        }
                    })
                })
                .clone();
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    TraceForm { matrix: m, h }
}

/// Root counts from the rank and signature of the trace form.
pub fn count_roots(profile: &BasisProfile) -> Result<RootCountReport, LinalgError> {
    count_roots_with(&Reducer::new(profile))
}

pub fn count_roots_with(reducer: &Reducer) -> Result<RootCountReport, LinalgError> {
    let t = trace_form_with(reducer, None);
    let n = t.matrix.rows();
    let p = char_poly(&t.matrix)?;
    let (rank, signature) = rank_and_signature_of(&p, n);
    Ok(RootCountReport {
        dim_v: n,
        rank,
        signature,
        distinct_complex: rank,
        distinct_real: signature.max(0) as usize,
        positive_eigenvalues: p.sign_variations(),
        negative_eigenvalues: p.sign_variations_negated(),
        char_poly: p,
    })
}

/// Number of distinct real roots with `h > 0` minus those with `h < 0`.
pub fn count_roots_weighted(profile: &BasisProfile, h: &Polynomial) -> Result<i64, LinalgError> {
    let t = trace_form(profile, Some(h));
    let p = char_poly(&t.matrix)?;
    Ok(rank_and_signature_of(&p, t.matrix.rows()).1)
}

/// Degree of the map `g` (over the reals), the signature of the residue
/// pairing.
pub fn mapping_degree(profile: &BasisProfile) -> Result<i64, LinalgError> {
    let m = Reducer::new(profile).dual_matrix(ResidueMethod::NormalForm);
    let p = char_poly(&m)?;
    Ok(rank_and_signature_of(&p, m.rows()).1)
}

/// All exponents `j` with `1 ≤ |j| ≤ d` in graded-lex order.
fn exponents_up_to(n: usize, d: usize) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(k: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<ExponentVector>) {
        if k == cur.len() {
            out.push(ExponentVector::new(cur.clone()));
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            rec(k + 1, left - v, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, d as i64, &mut cur, &mut out);
    out.retain(|e| !e.is_zero());
    out.sort();
    out
}

/// Power sums `tr(x^j)` for `1 ≤ |j| ≤ d`.
pub fn power_sums(profile: &BasisProfile, d: usize) -> BTreeMap<ExponentVector, Rational> {
    power_sums_with(&Reducer::new(profile), d)
}

pub fn power_sums_with(reducer: &Reducer, d: usize) -> BTreeMap<ExponentVector, Rational> {
    exponents_up_to(reducer.profile().nvars(), d)
        .into_iter()
        .map(|j| {
            let v = reducer.trace_monomial(&j);
            (j, v)
        })
        .collect()
}

fn factorial(k: i64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

fn multinomial(j: &ExponentVector) -> BigInt {
    let top = factorial(j.total_degree());
    j.as_slice().iter().fold(top, |acc, &k| acc / factorial(k))
}

/// Variables `u1, …, un` of the Chow form.
pub fn chow_variables(n: usize) -> Variables {
    let names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    variables(&names)
}

/// `log R(u) = Σ_d (−1)^{d−1}/d Σ_{|j|=d} binom(d; j) tr(x^j) u^j` through
/// degree `d`.
pub fn chow_log(profile: &BasisProfile, d: usize) -> TruncatedMultiSeries {
    chow_log_with(&Reducer::new(profile), d)
}

pub fn chow_log_with(reducer: &Reducer, d: usize) -> TruncatedMultiSeries {
    let vars = chow_variables(reducer.profile().nvars());
    let mut p = Polynomial::zero(&vars);
    for (j, tr) in power_sums_with(reducer, d) {
        if tr.is_zero() {
            continue;
        }
        let k = j.total_degree();
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = Rational::new(BigInt::from(sign) * multinomial(&j), BigInt::from(k)) * tr;
        p.add_term(j, c);
    }
    TruncatedMultiSeries::new(&p, d).expect("polynomial input")
}

/// The Chow form `R(u) = Π_p (1 + ⟨u, p⟩)^{µ(p)}` through degree `d`. With
/// `d = dim V` it is the whole polynomial.
pub fn chow_form(profile: &BasisProfile, d: usize) -> Result<TruncatedMultiSeries, SeriesError> {
    chow_form_with(&Reducer::new(profile), d)
}

pub fn chow_form_with(reducer: &Reducer, d: usize) -> Result<TruncatedMultiSeries, SeriesError> {
    series_exp(&chow_log_with(reducer, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::poly::{parse_polynomial, PolySystem};
    use crate::weight::{verify_basis, WeightVector};

    fn profile(vars: &[&str], gens: &[&str], w: &[i64]) -> BasisProfile {
        let sys = PolySystem::parse(vars, gens).unwrap();
        verify_basis(&sys, &WeightVector::new(w.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn univariate_trace_forms() {
        let p = profile(&["x"], &["x^2 - 1"], &[1]);
        let t = trace_form(&p, None);
        assert_eq!(t.matrix(), &RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]).unwrap());
        let c = count_roots(&p).unwrap();
        assert_eq!((c.distinct_complex, c.distinct_real), (2, 2));
        let q = profile(&["x"], &["x^2 + 1"], &[1]);
        assert_eq!(
            trace_form(&q, None).matrix(),
            &RationalMatrix::from_i64_rows(&[&[2, 0], &[0, -2]]).unwrap()
        );
        let c = count_roots(&q).unwrap();
        assert_eq!((c.distinct_complex, c.distinct_real), (2, 0));
    }

    #[test]
    fn weighted_counts() {
        let p = profile(&["x"], &["x^2 - 1"], &[1]);
        let vars = p.system().variables().clone();
        assert_eq!(
            count_roots_weighted(&p, &parse_polynomial("x", &vars).unwrap()).unwrap(),
            0
        );
        assert_eq!(
            count_roots_weighted(&p, &parse_polynomial("x + 2", &vars).unwrap()).unwrap(),
            2
        );
        assert_eq!(count_roots_weighted(&p, &Polynomial::one(&vars)).unwrap(), 2);
    }

    #[test]
    fn mapping_degrees() {
        assert_eq!(mapping_degree(&profile(&["x"], &["x"], &[1])).unwrap(), 1);
        assert_eq!(mapping_degree(&profile(&["x"], &["x^2 - 1"], &[1])).unwrap(), 0);
        assert_eq!(mapping_degree(&profile(&["x"], &["x^3 - x"], &[1])).unwrap(), 1);
    }

    #[test]
    fn univariate_chow_and_power_sums() {
        let p = profile(&["x"], &["x^2 - 1"], &[1]);
        let ps = power_sums(&p, 2);
        assert_eq!(ps[&ExponentVector::from([1])], rat(0));
        assert_eq!(ps[&ExponentVector::from([2])], rat(2));
        let r = chow_form(&p, 2).unwrap();
        assert_eq!(r.as_polynomial().to_string(), "-u1^2 + 1");
    }

    #[test]
    fn pure_power_chow_is_one() {
        let p = profile(&["x1", "x2"], &["x1^2", "x2^3"], &[1, 1]);
        assert!(power_sums(&p, 4).values().all(Zero::is_zero));
        assert_eq!(
            chow_form(&p, 6).unwrap().as_polynomial(),
            &Polynomial::one(&chow_variables(2))
        );
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[2, 1, 0].into()), BigInt::from(3));
        assert_eq!(multinomial(&[1, 1, 1].into()), BigInt::from(6));
        assert_eq!(exponents_up_to(3, 2).len(), 9);
    }
}
