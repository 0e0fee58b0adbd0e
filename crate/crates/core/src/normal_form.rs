//! Normal forms modulo a pure-power basis and everything read off them:
//! residues (top coefficient), traces, the residue pairing matrix `M`, normal
//! forms recovered from residues, and the Bezoutian projection.
//!
//! Reduction rewrites `x_i^{r_i+1}` by the tail of the i-th normalized
//! generator. Each rewrite strictly lowers the weighted degree, so normal
//! forms of monomials are memoized and built bottom-up; the memo is behind a
//! mutex, so a [`Reducer`] may be shared between threads (lookups serialize).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::linalg::{solve_linear, LinalgError, Rational, RationalMatrix};
use crate::poly::{polynomial_determinant, variables, ExponentVector, Polynomial, Variables};
use crate::weight::BasisProfile;

/// Total order used to index the monomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisOrder {
    /// Weighted degree, ties broken by ascending lex. In this order the
    /// residue pairing is anti-triangular with unit anti-diagonal.
    #[default]
    TermOrder,
    /// Ascending lex, first variable most significant.
    Lex,
}

/// The monomial basis `{x^i : 0 ≤ i ≤ r}` of the quotient ring. Under either
/// order, position `k` and position `N − 1 − k` hold complementary
/// exponents `i` and `r − i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    r: ExponentVector,
    order: BasisOrder,
    strides: Vec<usize>,
    exponents: Vec<ExponentVector>,
    // radix index -> position in `exponents`
    position: Vec<usize>,
}

impl MonomialBasis {
    pub fn new(r: &ExponentVector, order: BasisOrder, w: &[i64]) -> Self {
        let n = r.len();
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * (r.get(k + 1) as usize + 1);
        }
        let size: usize = r.as_slice().iter().map(|&k| k as usize + 1).product();
        let mut exponents: Vec<ExponentVector> = (0..size)
            .map(|idx| {
                ExponentVector::new(
                    (0..n)
                        .map(|k| ((idx / strides[k]) % (r.get(k) as usize + 1)) as i64)
                        .collect(),
                )
            })
            .collect();
        if order == BasisOrder::TermOrder {
            exponents.sort_by(|a, b| (a.dot(w), a.as_slice()).cmp(&(b.dot(w), b.as_slice())));
        }
        let mut position = vec![0; size];
        for (pos, e) in exponents.iter().enumerate() {
            let idx: usize = e.as_slice().iter().zip(&strides).map(|(&a, s)| a as usize * s).sum();
            position[idx] = pos;
        }
        MonomialBasis {
            r: r.clone(),
            order,
            strides,
            exponents,
            position,
        }
    }

    pub fn order(&self) -> BasisOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[ExponentVector] {
        &self.exponents
    }

    pub fn r(&self) -> &ExponentVector {
        &self.r
    }

    pub fn contains(&self, e: &ExponentVector) -> bool {
        e.as_slice()
            .iter()
            .zip(self.r.as_slice())
            .all(|(&a, &r)| 0 <= a && a <= r)
    }

    pub fn index_of(&self, e: &ExponentVector) -> Option<usize> {
        if !self.contains(e) {
            return None;
        }
        let idx: usize = e
            .as_slice()
            .iter()
            .zip(&self.strides)
            .map(|(&a, s)| a as usize * s)
            .sum();
        Some(self.position[idx])
    }

    /// Position of `x^r`, the last basis element.
    pub fn top_index(&self) -> usize {
        self.exponents.len() - 1
    }
}

/// Whether `m` vanishes above the anti-diagonal (`i + j < N − 1`) and has
/// ones on it.
pub fn is_unit_anti_triangular(m: &RationalMatrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| {
        (0..n).all(|j| match (i + j + 1).cmp(&n) {
            std::cmp::Ordering::Less => m.get(i, j).is_zero(),
            std::cmp::Ordering::Equal => m.get(i, j).is_one(),
            std::cmp::Ordering::Greater => true,
        })
    })
}

/// Coefficients of a normal form on the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    basis: Arc<MonomialBasis>,
    coefficients: Vec<Rational>,
}

impl NormalForm {
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.basis
            .index_of(e)
            .map_or_else(Rational::zero, |i| self.coefficients[i].clone())
    }

    /// Coefficient of `x^r`.
    pub fn top_coefficient(&self) -> &Rational {
        &self.coefficients[self.basis.top_index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn to_polynomial(&self, vars: &Variables) -> Polynomial {
        Polynomial::from_terms(
            vars,
            self.basis
                .exponents()
                .iter()
                .cloned()
                .zip(self.coefficients.iter().cloned()),
        )
    }
}

/// How residues are evaluated when a routine needs many of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidueMethod {
    /// Top coefficient of the normal form.
    #[default]
    NormalForm,
    /// Coefficient extraction from the deformation series.
    Series,
}

/// Normal-form engine for one verified profile, with a memo of monomial
/// normal forms.
pub struct Reducer {
    profile: BasisProfile,
    basis: Arc<MonomialBasis>,
    tails: Vec<Vec<(ExponentVector, Rational)>>,
    memo: Mutex<HashMap<ExponentVector, Arc<Vec<Rational>>>>,
    jacobian_nf: Mutex<Option<Polynomial>>,
}

impl Reducer {
    pub fn new(profile: &BasisProfile) -> Self {
        Self::with_order(profile, BasisOrder::default())
    }

    pub fn with_order(profile: &BasisProfile, order: BasisOrder) -> Self {
        let tails = (0..profile.nvars())
            .map(|i| {
                profile
                    .rewrite_rule(i)
                    .terms()
                    .map(|(e, c)| (e.clone(), c.clone()))
                    .collect()
            })
            .collect();
        Reducer {
            profile: profile.clone(),
            basis: Arc::new(MonomialBasis::new(profile.r(), order, profile.weight().as_slice())),
            tails,
            memo: Mutex::new(HashMap::new()),
            jacobian_nf: Mutex::new(None),
        }
    }

    pub fn profile(&self) -> &BasisProfile {
        &self.profile
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Number of monomial normal forms currently memoized.
    pub fn memo_size(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    fn unit(&self, idx: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.basis.len()];
        v[idx] = Rational::one();
        v
    }

    /// First variable whose exponent exceeds the box, and the exponent left
    /// after dividing out `x_i^{r_i+1}`.
    fn reduction_step(&self, e: &ExponentVector) -> Option<(usize, ExponentVector)> {
        let r = self.profile.r();
        (0..e.len())
            .find(|&i| e.get(i) > r.get(i))
            .map(|i| (i, e.with(i, e.get(i) - r.get(i) - 1)))
    }

    /// Normal form of the monomial `x^a` as a dense coefficient vector.
    pub fn monomial_nf(&self, a: &ExponentVector) -> Arc<Vec<Rational>> {
        assert!(a.is_nonnegative(), "normal forms are defined for polynomials");
        let mut memo = self.memo.lock().expect("memo lock");
        if let Some(v) = memo.get(a) {
            return v.clone();
        }
        let mut stack: Vec<(ExponentVector, bool)> = vec![(a.clone(), false)];
        while let Some((e, expanded)) = stack.pop() {
            if memo.contains_key(&e) {
                continue;
            }
            if let Some(idx) = self.basis.index_of(&e) {
                memo.insert(e, Arc::new(self.unit(idx)));
                continue;
            }
            let (i, base) = self.reduction_step(&e).expect("outside the box");
            if !expanded {
                stack.push((e, true));
                for (b, _) in &self.tails[i] {
                    let child = base.add(b);
                    if !memo.contains_key(&child) {
                        stack.push((child, false));
                    }
                }
            } else {
                let mut acc = vec![Rational::zero(); self.basis.len()];
                for (b, c) in &self.tails[i] {
                    let child = &memo[&base.add(b)];
                    for (slot, v) in acc.iter_mut().zip(child.iter()) {
                        if !v.is_zero() {
                            *slot += c * v;
                        }
                    }
                }
                memo.insert(e, Arc::new(acc));
            }
        }
        memo[a].clone()
    }

    /// Normal form of a polynomial.
    pub fn normal_form(&self, h: &Polynomial) -> NormalForm {
        let mut acc = vec![Rational::zero(); self.basis.len()];
        for (e, c) in h.terms() {
            let v = self.monomial_nf(e);
            for (slot, x) in acc.iter_mut().zip(v.iter()) {
                if !x.is_zero() {
                    *slot += c * x;
                }
            }
        }
        NormalForm {
            basis: self.basis.clone(),
            coefficients: acc,
        }
    }

    /// Coefficient of `x^r` in the normal form of `h`, without building the
    /// rest of the vector.
    pub fn top_coefficient(&self, h: &Polynomial) -> Rational {
        let top = self.basis.top_index();
        h.terms().fold(Rational::zero(), |acc, (e, c)| {
            let v = &self.monomial_nf(e)[top];
            if v.is_zero() {
                acc
            } else {
                acc + c * v
            }
        })
    }

    /// Global residue of `h` for the system as originally given.
    pub fn residue(&self, h: &Polynomial) -> Rational {
        self.top_coefficient(h) * self.profile.residue_scale()
    }

    /// Global residue of the monomial `x^a` for the original system.
    pub fn residue_monomial(&self, a: &ExponentVector) -> Rational {
        &self.monomial_nf(a)[self.basis.top_index()] * self.profile.residue_scale()
    }

    /// Normal form of the Jacobian of the normalized system, cached.
    pub fn jacobian_nf(&self) -> Polynomial {
        let mut slot = self.jacobian_nf.lock().expect("jacobian lock");
        if let Some(p) = slot.as_ref() {
            return p.clone();
        }
        let j = self.profile.system().jacobian_determinant();
        let nf = self.normal_form(&j).to_polynomial(self.profile.system().variables());
        *slot = Some(nf.clone());
        nf
    }

    /// Trace of multiplication by `h` on the quotient ring: the top
    /// coefficient of `NF(h · NF(J))`.
    pub fn trace(&self, h: &Polynomial) -> Rational {
        let j = self.jacobian_nf();
        self.top_coefficient(&(h * &j))
    }

    /// Trace of multiplication by `x^a`.
    pub fn trace_monomial(&self, a: &ExponentVector) -> Rational {
        let j = self.jacobian_nf();
        let top = self.basis.top_index();
        j.terms().fold(Rational::zero(), |acc, (e, c)| {
            let v = &self.monomial_nf(&a.add(e))[top];
            if v.is_zero() {
                acc
            } else {
                acc + c * v
            }
        })
    }

    /// The residue pairing `M_{ij} = Res(x^{i+j})` on the monomial basis.
    pub fn dual_matrix(&self, method: ResidueMethod) -> RationalMatrix {
        let exps = self.basis.exponents();
        let n = exps.len();
        let values: HashMap<ExponentVector, Rational> = match method {
            ResidueMethod::NormalForm => HashMap::new(),
            ResidueMethod::Series => {
                let bound = self.profile.weight().degree_of(&self.profile.r().add(self.profile.r()));
                crate::residue::residue_batch(&self.profile, bound).into_entries()
            }
        };
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let e = exps[i].add(&exps[j]);
                let v = match method {
                    ResidueMethod::NormalForm => self.residue_monomial(&e),
                    ResidueMethod::Series => values.get(&e).cloned().unwrap_or_else(Rational::zero),
                };
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        m
    }

    /// Recovers the normal form of `h` from residues alone by solving
    /// `M · c = (Res(h · x^j))_j`.
    pub fn nf_via_residues(&self, h: &Polynomial, method: ResidueMethod) -> Result<NormalForm, LinalgError> {
        let m = self.dual_matrix(method);
        let vars = self.profile.system().variables();
        let rhs: Vec<Rational> = match method {
            ResidueMethod::NormalForm => self
                .basis
                .exponents()
                .iter()
                .map(|j| self.residue(&h.mul_term(j, &Rational::one())))
                .collect(),
            ResidueMethod::Series => {
                let products: Vec<Polynomial> = self
                    .basis
                    .exponents()
                    .iter()
                    .map(|j| h.mul_term(j, &Rational::one()))
                    .collect();
                let bound = products
                    .iter()
                    .filter_map(|p| crate::weight::weighted_degree(p, self.profile.weight()))
                    .max()
                    .unwrap_or(0);
                let table = crate::residue::residue_batch(&self.profile, bound.max(0));
                products.iter().map(|p| table.residue_polynomial(p)).collect()
            }
        };
        let c = solve_linear(&m, &rhs)?;
        let _ = vars;
        Ok(NormalForm {
            basis: self.basis.clone(),
            coefficients: c,
        })
    }

    /// `Res_y(h(y) · Δ(y, x))`, a polynomial in `x` congruent to `h`.
    pub fn bezoutian_project(&self, h: &Polynomial) -> Polynomial {
        let bz = bezoutian(&self.profile);
        let n = self.profile.nvars();
        let vars = self.profile.original().variables().clone();
        let lifted = h.with_variables(&vars);
        // Group h(y)Δ(y,x) by x-exponent.
        let mut by_x: BTreeMap<ExponentVector, Polynomial> = BTreeMap::new();
        for (e, c) in bz.terms() {
            let (ey, ex) = e.as_slice().split_at(n);
            by_x.entry(ExponentVector::from(ex))
                .or_insert_with(|| Polynomial::zero(&vars))
                .add_term(ExponentVector::from(ey), c.clone());
        }
        let mut out = Polynomial::zero(&vars);
        for (ex, py) in by_x {
            let v = self.residue(&(&py * &lifted));
            out.add_term(ex, v);
        }
        out
    }
}

/// Normal form of `h` for a verified profile.
pub fn normal_form(profile: &BasisProfile, h: &Polynomial) -> NormalForm {
    Reducer::new(profile).normal_form(h)
}

/// Global residue as the top coefficient of the normal form.
pub fn residue_via_nf(profile: &BasisProfile, h: &Polynomial) -> Rational {
    Reducer::new(profile).residue(h)
}

/// Trace of multiplication by `h`.
pub fn trace(profile: &BasisProfile, h: &Polynomial) -> Rational {
    Reducer::new(profile).trace(h)
}

/// The residue pairing matrix on the basis in the given order.
pub fn dual_matrix(profile: &BasisProfile, order: BasisOrder, method: ResidueMethod) -> RationalMatrix {
    Reducer::with_order(profile, order).dual_matrix(method)
}

/// Normal form recovered from residues.
pub fn nf_via_residues(
    profile: &BasisProfile,
    h: &Polynomial,
    method: ResidueMethod,
) -> Result<NormalForm, LinalgError> {
    Reducer::new(profile).nf_via_residues(h, method)
}

/// Bezoutian projection of `h`.
pub fn bezoutian_project(profile: &BasisProfile, h: &Polynomial) -> Polynomial {
    Reducer::new(profile).bezoutian_project(h)
}

/// Variable context `(y_1, …, y_n, x_1, …, x_n)` for the Bezoutian.
pub fn bezoutian_variables(vars: &Variables) -> Variables {
    let mut names: Vec<String> = vars.iter().map(|v| format!("y_{v}")).collect();
    names.extend(vars.iter().cloned());
    variables(&names)
}

/// The Bezoutian `Δ(y, x) = det(g_ij)` of the original system, where
/// `g_i(y) − g_i(x) = Σ_j g_ij (y_j − x_j)` is split by substituting one
/// variable at a time.
pub fn bezoutian(profile: &BasisProfile) -> Polynomial {
    let sys = profile.original();
    let n = sys.nvars();
    let vars2 = bezoutian_variables(sys.variables());
    let mut entries: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    for g in sys.generators() {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut gij = Polynomial::zero(&vars2);
            for (e, c) in g.terms() {
                let k = e.get(j);
                if k == 0 {
                    continue;
                }
                let mut base = vec![0i64; 2 * n];
                for v in 0..n {
                    if v < j {
                        base[v] = e.get(v);
                    } else if v > j {
                        base[n + v] = e.get(v);
                    }
                }
                for l in 0..k {
                    let mut ex = base.clone();
                    ex[j] = l;
                    ex[n + j] = k - 1 - l;
                    gij.add_term(ExponentVector::new(ex), c.clone());
                }
            }
            row.push(gij);
        }
        entries.push(row);
    }
    polynomial_determinant(&entries, &vars2)
}
