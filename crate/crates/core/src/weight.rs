//! Weight vectors, initial forms, and certification that a system has
//! pure-power initial forms `in_w(g_i) = α_i · x_i^{r_i+1}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::Rational;
use crate::poly::{ExponentVector, PolySystem, Polynomial};
use crate::polyhedral::{fourier_motzkin_feasible, Inequality, MAX_DIMENSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("weight must be positive in every coordinate, got {0:?}")]
    NonPositiveWeight(Vec<i64>),
    #[error("weight has {found} entries for {expected} variables")]
    WeightLength { expected: usize, found: usize },
    #[error("generator {generator} is zero")]
    ZeroGenerator { generator: usize },
    #[error("initial form of generator {generator} is not a single term: {initial_form}")]
    TiedInitialForm { generator: usize, initial_form: String },
    #[error("initial form of generator {generator} is not a pure power: {initial_form}")]
    NotPurePower { generator: usize, initial_form: String },
    #[error("generators {first} and {second} both lead in variable {variable}")]
    VariableCollision {
        variable: String,
        first: usize,
        second: usize,
    },
    #[error("not a pure-power Gröbner system for any weight")]
    NoCompatibleWeight,
    #[error("weight search is limited to {max} variables, system has {found}")]
    TooManyVariables { max: usize, found: usize },
}

/// Positive integer weight `w`, giving monomial `x^a` the degree `⟨w, a⟩`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(w: Vec<i64>) -> Result<Self, BasisError> {
        if w.iter().any(|&x| x < 1) {
            return Err(BasisError::NonPositiveWeight(w));
        }
        Ok(WeightVector(w))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn degree_of(&self, e: &ExponentVector) -> i64 {
        e.dot(&self.0)
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.0)
    }
}

/// `max ⟨w, a⟩` over the terms of `p`, or `None` for the zero polynomial.
pub fn weighted_degree(p: &Polynomial, w: &WeightVector) -> Option<i64> {
    p.exponents().map(|e| w.degree_of(e)).max()
}

/// Sum of the terms of `p` of highest weighted degree.
pub fn initial_form(p: &Polynomial, w: &WeightVector) -> Option<Polynomial> {
    let d = weighted_degree(p, w)?;
    Some(Polynomial::from_terms(
        p.variables(),
        p.terms()
            .filter(|(e, _)| w.degree_of(e) == d)
            .map(|(e, c)| (e.clone(), c.clone())),
    ))
}

/// Variable index and power when `e` is a pure power `x_v^k`, `k ≥ 1`.
pub(crate) fn pure_power(e: &ExponentVector) -> Option<(usize, i64)> {
    let mut found = None;
    for (i, &k) in e.as_slice().iter().enumerate() {
        if k != 0 {
            if found.is_some() || k < 0 {
                return None;
            }
            found = Some((i, k));
        }
    }
    found
}

/// A system certified to satisfy the pure-power hypothesis for a weight.
///
/// `system` is the normalized copy: generators reordered so that the i-th one
/// leads in `x_i`, and divided by their leading scalars. Residues of the
/// system as given equal `residue_scale` times residues of the normalized one.
#[derive(Clone, Debug)]
pub struct BasisProfile {
    original: PolySystem,
    system: PolySystem,
    weight: WeightVector,
    r: ExponentVector,
    degrees: Vec<i64>,
    d_w: i64,
    leading_scalars: Vec<Rational>,
    permutation: Vec<usize>,
    permutation_sign: i64,
    residue_scale: Rational,
}

impl BasisProfile {
    /// The system exactly as supplied.
    pub fn original(&self) -> &PolySystem {
        &self.original
    }

    /// The normalized system (standard position, monic initial forms).
    pub fn system(&self) -> &PolySystem {
        &self.system
    }

    pub fn weight(&self) -> &WeightVector {
        &self.weight
    }

    pub fn r(&self) -> &ExponentVector {
        &self.r
    }

    /// `r + 1`, the exponent of `x_1^{r_1+1} ⋯ x_n^{r_n+1}`.
    pub fn r_plus_one(&self) -> ExponentVector {
        ExponentVector::new(self.r.as_slice().iter().map(|k| k + 1).collect())
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn d_w(&self) -> i64 {
        self.d_w
    }

    /// Leading scalars `α_i` in standard position, before normalization.
    pub fn leading_scalars(&self) -> &[Rational] {
        &self.leading_scalars
    }

    /// `permutation[i]` is the index of the original generator that leads in `x_i`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn permutation_sign(&self) -> i64 {
        self.permutation_sign
    }

    /// `sign(permutation) / ∏ α_i`.
    pub fn residue_scale(&self) -> &Rational {
        &self.residue_scale
    }

    pub fn nvars(&self) -> usize {
        self.system.nvars()
    }

    /// `dim V = ∏ (r_i + 1)`.
    pub fn dimension(&self) -> usize {
        self.r.as_slice().iter().map(|&k| (k + 1) as usize).product()
    }

    /// `s(a) = ⟨w, a − r⟩`.
    pub fn s_of_a(&self, a: &ExponentVector) -> i64 {
        s_of_a(a, self)
    }

    /// The tail `x_i^{r_i+1} − g_i` of the i-th normalized generator, i.e. the
    /// replacement for `x_i^{r_i+1}` when reducing modulo the ideal.
    pub fn rewrite_rule(&self, i: usize) -> Polynomial {
        let g = self.system.generator(i);
        let lead = Polynomial::monomial(
            g.variables(),
            ExponentVector::unit(self.nvars(), i, self.r.get(i) + 1),
            Rational::one(),
        );
        &lead - g
    }
}

/// Checks the pure-power hypothesis for `sys` under `w`, relabelling
/// generators so that the i-th leads in `x_i` and making them monic.
pub fn verify_basis(sys: &PolySystem, w: &WeightVector) -> Result<BasisProfile, BasisError> {
    let n = sys.nvars();
    if w.len() != n {
        return Err(BasisError::WeightLength {
            expected: n,
            found: w.len(),
        });
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut powers = vec![0i64; n];
    let mut scalars: Vec<Rational> = vec![Rational::zero(); n];
    for (gi, g) in sys.generators().iter().enumerate() {
        let init = initial_form(g, w).ok_or(BasisError::ZeroGenerator { generator: gi })?;
        if init.num_terms() != 1 {
            return Err(BasisError::TiedInitialForm {
                generator: gi,
                initial_form: init.to_string(),
            });
        }
        let (e, c) = init.terms().next().expect("one term");
        let (v, k) = pure_power(e).ok_or_else(|| BasisError::NotPurePower {
            generator: gi,
            initial_form: init.to_string(),
        })?;
        if let Some(prev) = owner[v] {
            return Err(BasisError::VariableCollision {
                variable: sys.variables()[v].clone(),
                first: prev,
                second: gi,
            });
        }
        owner[v] = Some(gi);
        powers[v] = k;
        scalars[v] = c.clone();
    }
    let permutation: Vec<usize> = owner
        .into_iter()
        .map(|o| o.expect("n generators fill n slots"))
        .collect();
    let sign = permutation_sign(&permutation);
    let generators: Vec<Polynomial> = permutation
        .iter()
        .enumerate()
        .map(|(i, &gi)| sys.generator(gi).scale(&scalars[i].recip()))
        .collect();
    let system = PolySystem::new(sys.variables().clone(), generators).expect("same shape as input");
    let r = ExponentVector::new(powers.iter().map(|k| k - 1).collect());
    let degrees: Vec<i64> = powers.iter().zip(w.as_slice()).map(|(k, wi)| k * wi).collect();
    let d_w = degrees.iter().sum();
    let prod = scalars.iter().fold(Rational::one(), |acc, a| acc * a);
    let residue_scale = Rational::from_integer(sign.into()) / prod;
    Ok(BasisProfile {
        original: sys.clone(),
        system,
        weight: w.clone(),
        r,
        degrees,
        d_w,
        leading_scalars: scalars,
        permutation,
        permutation_sign: sign,
        residue_scale,
    })
}

pub(crate) fn permutation_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Searches for a weight under which every generator has a strictly dominant
/// pure-power term, one per variable.
///
/// Each assignment of a pure-power term `x_{σ(i)}^{e_i}` to generator `i`
/// (σ a permutation) gives the exact LP
/// `w ≥ 1, ⟨w, e_i u_{σ(i)} − b⟩ ≥ 1` for every other exponent `b` of `g_i`,
/// decided by Fourier–Motzkin elimination. The first feasible point is scaled
/// to a primitive integer vector.
pub fn discover_weight(sys: &PolySystem) -> Result<WeightVector, BasisError> {
    let n = sys.nvars();
    if n > MAX_DIMENSION {
        return Err(BasisError::TooManyVariables {
            max: MAX_DIMENSION,
            found: n,
        });
    }
    // Candidates per generator, highest power first.
    let candidates: Vec<Vec<(usize, ExponentVector)>> = sys
        .generators()
        .iter()
        .map(|g| {
            let mut c: Vec<(usize, ExponentVector)> = g
                .exponents()
                .filter_map(|e| pure_power(e).map(|(v, _)| (v, e.clone())))
                .collect();
            c.sort_by(|a, b| b.1.cmp(&a.1));
            c
        })
        .collect();
    let mut chosen: Vec<Option<(usize, ExponentVector)>> = vec![None; n];
    let mut used = vec![false; n];
    search(sys, &candidates, 0, &mut chosen, &mut used).ok_or(BasisError::NoCompatibleWeight)
}

fn search(
    sys: &PolySystem,
    candidates: &[Vec<(usize, ExponentVector)>],
    gi: usize,
    chosen: &mut Vec<Option<(usize, ExponentVector)>>,
    used: &mut Vec<bool>,
) -> Option<WeightVector> {
    let n = sys.nvars();
    if gi == n {
        return solve_assignment(sys, chosen);
    }
    for (v, e) in &candidates[gi] {
        if used[*v] {
            continue;
        }
        used[*v] = true;
        chosen[gi] = Some((*v, e.clone()));
        if let Some(w) = search(sys, candidates, gi + 1, chosen, used) {
            return Some(w);
        }
        used[*v] = false;
        chosen[gi] = None;
    }
    None
}

fn solve_assignment(sys: &PolySystem, chosen: &[Option<(usize, ExponentVector)>]) -> Option<WeightVector> {
    let n = sys.nvars();
    let mut cs = Vec::new();
    for k in 0..n {
        cs.push(Inequality::from_ints(&ExponentVector::unit(n, k, 1).into_vec(), 1));
    }
    for (g, pick) in sys.generators().iter().zip(chosen) {
        let (_, lead) = pick.as_ref().expect("complete assignment");
        for b in g.exponents().filter(|b| *b != lead) {
            cs.push(Inequality::from_ints(lead.sub(b).as_slice(), 1));
        }
    }
    let y = fourier_motzkin_feasible(n, &cs)?;
    let l = y.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = y.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let w: Vec<i64> = ints.iter().map(|x| (x / &g).to_i64()).collect::<Option<_>>()?;
    WeightVector::new(w).ok()
}

/// `s(a) = ⟨w, a − r⟩`; may be negative.
pub fn s_of_a(a: &ExponentVector, profile: &BasisProfile) -> i64 {
    profile.weight.degree_of(&a.sub(&profile.r))
}

/// True when `deg_w(h) < d_w − Σ w_i`, which forces the residue of `h` to vanish.
pub fn euler_jacobi_vanishes(h: &Polynomial, profile: &BasisProfile) -> bool {
    match weighted_degree(h, &profile.weight) {
        Some(d) => d < profile.d_w - profile.weight.sum(),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::poly::parse_polynomial;

    fn reference_system() -> PolySystem {
        PolySystem::parse(
            &["x1", "x2", "x3"],
            &[
                "x1^5 + x2^3 + x3^2 - 1",
                "x1^2 + x2^2 + x3 - 1",
                "x1^6 + x2^5 + x3^3 - 1",
            ],
        )
        .unwrap()
    }

    fn w(v: &[i64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn weighted_degrees() {
        let sys = reference_system();
        let vars = sys.variables();
        let w = w(&[3, 4, 7]);
        assert_eq!(weighted_degree(&parse_polynomial("x1^5", vars).unwrap(), &w), Some(15));
        assert_eq!(weighted_degree(&Polynomial::one(vars), &w), Some(0));
        assert_eq!(weighted_degree(sys.generator(2), &w), Some(21));
        assert_eq!(weighted_degree(&Polynomial::zero(vars), &w), None);
    }

    #[test]
    fn initial_forms() {
        let sys = reference_system();
        let w = w(&[3, 4, 7]);
        assert_eq!(initial_form(sys.generator(0), &w).unwrap().to_string(), "x1^5");
        assert_eq!(initial_form(sys.generator(1), &w).unwrap().to_string(), "x2^2");
        let h = parse_polynomial("x1^4 + x2^3", sys.variables()).unwrap();
        assert_eq!(initial_form(&h, &WeightVector::new(vec![3, 4, 1]).unwrap()).unwrap(), h);
    }

    #[test]
    fn verify_reference_system() {
        let p = verify_basis(&reference_system(), &w(&[3, 4, 7])).unwrap();
        assert_eq!(p.r(), &ExponentVector::from([4, 1, 2]));
        assert_eq!(p.degrees(), &[15, 8, 21]);
        assert_eq!(p.d_w(), 44);
        assert_eq!(p.dimension(), 30);
        assert_eq!(p.residue_scale(), &rat(1));
    }

    #[test]
    fn verify_pure_powers_and_collisions() {
        let sys = PolySystem::parse(&["x1", "x2"], &["x1^2", "x2^3"]).unwrap();
        assert_eq!(
            verify_basis(&sys, &w(&[1, 1])).unwrap().r(),
            &ExponentVector::from([1, 2])
        );
        let err = verify_basis(&reference_system(), &w(&[5, 1, 1])).unwrap_err();
        assert!(
            matches!(err, BasisError::VariableCollision { ref variable, .. } if variable == "x1"),
            "{err}"
        );
    }

    #[test]
    fn verify_rejects_ties_and_mixed_terms() {
        let sys = PolySystem::parse(&["x1", "x2"], &["x1 + x2", "x2^2"]).unwrap();
        assert!(matches!(
            verify_basis(&sys, &w(&[1, 1])),
            Err(BasisError::TiedInitialForm { .. })
        ));
        let sys = PolySystem::parse(&["x1", "x2"], &["x1*x2 + 1", "x2^2"]).unwrap();
        assert!(matches!(
            verify_basis(&sys, &w(&[1, 1])),
            Err(BasisError::NotPurePower { .. })
        ));
    }

    #[test]
    fn permutation_and_scalars_are_recorded() {
        let sys = PolySystem::parse(&["x1", "x2"], &["2*x2 - 1", "3*x1^2 + x2"]).unwrap();
        let p = verify_basis(&sys, &w(&[1, 1])).unwrap();
        assert_eq!(p.permutation(), &[1, 0]);
        assert_eq!(p.permutation_sign(), -1);
        assert_eq!(p.leading_scalars(), &[rat(3), rat(2)]);
        assert_eq!(p.residue_scale(), &crate::linalg::ratio(-1, 6));
        assert_eq!(p.system().generator(0).to_string(), "x1^2 + 1/3*x2");
    }

    #[test]
    fn discover_reference_weight() {
        let sys = reference_system();
        let found = discover_weight(&sys).unwrap();
        let p = verify_basis(&sys, &found).unwrap();
        assert_eq!(p.r(), &ExponentVector::from([4, 1, 2]));
    }

    #[test]
    fn discover_trivial_and_impossible() {
        let sys = PolySystem::parse(&["x1", "x2"], &["x1 - 1", "x2 - 1"]).unwrap();
        assert!(verify_basis(&sys, &discover_weight(&sys).unwrap()).is_ok());
        let sys = PolySystem::parse(&["x1", "x2"], &["x1 + x2", "x1 - x2"]).unwrap();
        assert_eq!(discover_weight(&sys).unwrap_err(), BasisError::NoCompatibleWeight);
    }

    #[test]
    fn s_of_a_values() {
        let p = verify_basis(&reference_system(), &w(&[3, 4, 7])).unwrap();
        assert_eq!(p.s_of_a(&[4, 1, 2].into()), 0);
        assert_eq!(p.s_of_a(&[15, 15, 15].into()), 180);
        assert_eq!(p.s_of_a(&[6, 1, 1].into()), -1);
    }

    #[test]
    fn euler_jacobi() {
        let p = verify_basis(&reference_system(), &w(&[3, 4, 7])).unwrap();
        let vars = p.system().variables().clone();
        assert!(euler_jacobi_vanishes(&Polynomial::one(&vars), &p));
        assert!(!euler_jacobi_vanishes(
            &parse_polynomial("x1^4*x2*x3^2", &vars).unwrap(),
            &p
        ));
        let uni = PolySystem::parse(&["x"], &["x^2 - 1"]).unwrap();
        let pu = verify_basis(&uni, &w(&[1])).unwrap();
        assert!(euler_jacobi_vanishes(&Polynomial::one(uni.variables()), &pu));
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(matches!(
            WeightVector::new(vec![1, 0]),
            Err(BasisError::NonPositiveWeight(_))
        ));
    }
}
