//! The cone `W` of weights compatible with the pure-power initial forms, its
//! polar dual `W*`, the vanishing test for residues, and degree bounds for
//! residues and traces as functions of the non-leading coefficients.

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::Rational;
use crate::poly::{ExponentVector, Polynomial};
use crate::polyhedral::{extreme_generators, extreme_rays, primitive_i64, PolyhedralError};
use crate::weight::BasisProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("weight cone has empty interior")]
    EmptyInterior,
    #[error("weight {0:?} is not in the interior of the weight cone")]
    NotInterior(Vec<i64>),
    #[error("exponent {0} is not a non-leading exponent of generator {1}")]
    NotATerm(ExponentVector, usize),
    #[error(transparent)]
    Polyhedral(#[from] PolyhedralError),
}

/// `W = {w : ⟨w, ρ⟩ ≥ 0}` for all `ρ_ij = (r_i+1)e_i − a_ij`, and
/// `W* = pos{(r+1) − b}` over the exponents `b` of `g_1 ⋯ g_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePair {
    w_inequalities: Vec<Vec<i64>>,
    w_rays: Vec<Vec<i64>>,
    wstar_rays: Vec<Vec<i64>>,
    interior_point: Vec<i64>,
    orthant_added: bool,
}

impl ConePair {
    /// Primitive normals `ρ_ij` (deduplicated, sorted).
    pub fn w_inequalities(&self) -> &[Vec<i64>] {
        &self.w_inequalities
    }

    pub fn w_rays(&self) -> &[Vec<i64>] {
        &self.w_rays
    }

    pub fn wstar_rays(&self) -> &[Vec<i64>] {
        &self.wstar_rays
    }

    /// Facet normals of `W*`: the extreme rays of `W`.
    pub fn wstar_inequalities(&self) -> &[Vec<i64>] {
        &self.w_rays
    }

    /// `w₀`, the sum of the primitive extreme rays of `W`.
    pub fn interior_point(&self) -> &[i64] {
        &self.interior_point
    }

    /// Whether the constraints `w ≥ 0` were added because the `ρ_ij` alone
    /// do not cut out a pointed cone. The rays then span a subcone of `W`,
    /// which keeps the vanishing test and degree bounds valid.
    pub fn orthant_added(&self) -> bool {
        self.orthant_added
    }

    /// Whether `w` satisfies every inequality of `W` strictly.
    pub fn is_interior(&self, w: &[i64]) -> bool {
        self.w_inequalities.iter().all(|rho| dot(rho, w) > 0)
    }

    /// Whether `v ∈ W*`, decided against the extreme rays of `W`.
    pub fn in_dual(&self, v: &[i64]) -> bool {
        self.w_rays.iter().all(|u| dot(u, v) >= 0)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rho(profile: &BasisProfile, i: usize, a: &ExponentVector) -> Vec<i64> {
    let r1 = profile.r_plus_one();
    (0..profile.nvars())
        .map(|k| if k == i { r1.get(k) - a.get(k) } else { -a.get(k) })
        .collect()
}

/// Builds `W` and `W*` for a verified profile.
pub fn build_cones(profile: &BasisProfile) -> Result<ConePair, ConeError> {
    let n = profile.nvars();
    let sys = profile.system();
    let r1 = profile.r_plus_one();
    let mut ineqs: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        for (e, _) in sys.generator(i).terms() {
            if e != &ExponentVector::unit(n, i, r1.get(i)) {
                ineqs.push(primitive_i64(&rho(profile, i, e)));
            }
        }
    }
    ineqs.sort();
    ineqs.dedup();
    let (w_rays, orthant_added) = match extreme_rays(&ineqs, n) {
        Ok(rays) => (rays, false),
        Err(PolyhedralError::NotPointed { .. }) => {
            let mut rows = ineqs.clone();
            rows.extend((0..n).map(|k| ExponentVector::unit(n, k, 1).into_vec()));
            (extreme_rays(&rows, n)?, true)
        }
        Err(e) => return Err(e.into()),
    };
    let mut interior_point = vec![0i64; n];
    for u in &w_rays {
        for (s, x) in interior_point.iter_mut().zip(u) {
            *s += x;
        }
    }
    let mut w_inequalities = ineqs;
    if orthant_added {
        w_inequalities.extend((0..n).map(|k| ExponentVector::unit(n, k, 1).into_vec()));
        w_inequalities.sort();
        w_inequalities.dedup();
    }
    if !w_inequalities.iter().all(|rho| dot(rho, &interior_point) > 0) {
        return Err(ConeError::EmptyInterior);
    }
    let product = sys.product();
    let gens: Vec<Vec<i64>> = product.terms().map(|(b, _)| r1.sub(b).into_vec()).collect();
    let wstar_rays = extreme_generators(&gens);
    Ok(ConePair {
        w_inequalities,
        w_rays,
        wstar_rays,
        interior_point,
        orthant_added,
    })
}

/// True when `a − r ∉ W*`, which forces `Res(x^a) = 0`.
pub fn vanishing_by_cone(cones: &ConePair, a: &ExponentVector, r: &ExponentVector) -> bool {
    let d = a.sub(r);
    cones.w_rays.iter().any(|u| d.dot(u) < 0)
}

/// Upper bound on the degree of `Res(x^a)` in the coefficient of `x^{a_ij}`
/// in the generator with initial form `x_i^{r_i+1}`: the minimum over the
/// rays of `W` of `⟨u, a−r⟩ / ⟨u, ρ_ij⟩`. `None` when every ray has a zero
/// denominator.
pub fn degree_bound_single(
    cones: &ConePair,
    profile: &BasisProfile,
    a: &ExponentVector,
    i: usize,
    a_ij: &ExponentVector,
) -> Result<Option<Rational>, ConeError> {
    let n = profile.nvars();
    let is_tail = i < n
        && a_ij != &ExponentVector::unit(n, i, profile.r_plus_one().get(i))
        && !profile.system().generator(i).coefficient_of(a_ij).is_zero();
    if !is_tail {
        return Err(ConeError::NotATerm(a_ij.clone(), i));
    }
    let num = a.sub(profile.r());
    let rho = rho(profile, i, a_ij);
    Ok(cones
        .w_rays
        .iter()
        .filter_map(|u| {
            let den = dot(u, &rho);
            (den != 0).then(|| Rational::new(num.dot(u).into(), den.into()))
        })
        .min())
}

/// Bounds from [`degree_bound_single`] for every constant term `a_ij = 0`,
/// indexed by `i`; `None` for generators without a constant term.
pub fn constant_term_bounds(cones: &ConePair, profile: &BasisProfile, a: &ExponentVector) -> Vec<Option<Rational>> {
    let n = profile.nvars();
    let zero = ExponentVector::zeros(n);
    (0..n)
        .map(|i| degree_bound_single(cones, profile, a, i, &zero).ok().flatten())
        .collect()
}

fn sample_points(cones: &ConePair, user: Option<&[i64]>) -> Result<Vec<Vec<i64>>, ConeError> {
    let mut points = vec![cones.interior_point.clone()];
    if let Some(w) = user {
        if w.len() != cones.interior_point.len() || !cones.is_interior(w) {
            return Err(ConeError::NotInterior(w.to_vec()));
        }
        points.push(w.to_vec());
    }
    Ok(points)
}

/// Upper bound on the total degree of `Res(x^a)` in all non-leading
/// coefficients: `min ⟨w, a−r⟩` over `w₀` and an optional user-supplied
/// interior integer weight. Valid but possibly not the smallest such bound.
pub fn degree_bound_total(
    cones: &ConePair,
    profile: &BasisProfile,
    a: &ExponentVector,
    user: Option<&[i64]>,
) -> Result<i64, ConeError> {
    let d = a.sub(profile.r());
    Ok(sample_points(cones, user)?
        .iter()
        .map(|w| d.dot(w))
        .min()
        .expect("at least one sample point"))
}

/// Upper bound on the total degree of `tr(h)` in the non-leading
/// coefficients: the weighted degree of `h` at the sampled interior points.
pub fn trace_degree_bound(cones: &ConePair, h: &Polynomial, user: Option<&[i64]>) -> Result<i64, ConeError> {
    let points = sample_points(cones, user)?;
    Ok(points
        .iter()
        .map(|w| h.exponents().map(|e| e.dot(w)).max().unwrap_or(0))
        .min()
        .expect("at least one sample point"))
}
