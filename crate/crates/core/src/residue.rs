//! Global residues read off the deformation series: `Res(x^a)` is the
//! coefficient of `x^{−(a+1)}` in `B_{s(a)}` with `s(a) = ⟨w, a − r⟩`.
//!
//! Single queries invert the series keeping only terms that can still reach
//! the target monomial (the increments `Â_j` all lie in `−W*`). Batches share
//! one full series, cached per system and weight.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::cones::{build_cones, vanishing_by_cone};
use crate::linalg::Rational;
use crate::poly::{ExponentVector, Polynomial};
use crate::series::{homogenize, invert_series, invert_series_filtered, DeformationSeries, Halfspace};
use crate::weight::BasisProfile;

type CacheKey = (String, Vec<i64>);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<DeformationSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<DeformationSeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_key(profile: &BasisProfile) -> CacheKey {
    let sys = profile.system();
    let text = sys
        .variables()
        .iter()
        .cloned()
        .chain(sys.generators().iter().map(ToString::to_string))
        .collect::<Vec<_>>()
        .join(";");
    (text, profile.weight().as_slice().to_vec())
}

/// The deformation series through order `d`, shared between calls. A cached
/// series of larger truncation is reused as is.
pub fn cached_series(profile: &BasisProfile, d: usize) -> Arc<DeformationSeries> {
    let key = cache_key(profile);
    if let Some(s) = cache().lock().expect("series cache").get(&key) {
        if s.truncation() >= d {
            return s.clone();
        }
    }
    let s = Arc::new(invert_series(&homogenize(profile), d));
    let mut guard = cache().lock().expect("series cache");
    match guard.get(&key) {
        Some(old) if old.truncation() >= d => old.clone(),
        _ => {
            guard.insert(key, s.clone());
            s
        }
    }
}

/// Number of series held in the process-wide cache.
pub fn cached_series_count() -> usize {
    cache().lock().expect("series cache").len()
}

fn one(n: usize) -> ExponentVector {
    ExponentVector::new(vec![1; n])
}

/// `Res(x^a)` for the original system.
pub fn residue_monomial(profile: &BasisProfile, a: &ExponentVector) -> Rational {
    assert!(a.is_nonnegative(), "residues are taken of polynomials");
    let s = profile.s_of_a(a);
    if a == profile.r() {
        return profile.residue_scale().clone();
    }
    if s <= 0 {
        return Rational::zero();
    }
    let target = a.add(&one(a.len())).neg();
    let Ok(cones) = build_cones(profile) else {
        let series = invert_series(&homogenize(profile), s as usize);
        return series.coefficient(s as usize, &target) * profile.residue_scale();
    };
    if vanishing_by_cone(&cones, a, profile.r()) {
        return Rational::zero();
    }
    // Keep β with β − target ∈ W*.
    let region: Vec<Halfspace> = cones
        .w_rays()
        .iter()
        .map(|u| Halfspace {
            normal: u.clone(),
            bound: target.dot(u),
        })
        .collect();
    let series = invert_series_filtered(&homogenize(profile), s as usize, &region);
    series.coefficient(s as usize, &target) * profile.residue_scale()
}

/// All residues `Res(x^a)` with `⟨w, a⟩ ≤ d`, from one shared series.
#[derive(Clone, Debug)]
pub struct ResidueTable {
    bound: i64,
    weight: Vec<i64>,
    entries: HashMap<ExponentVector, Rational>,
}

impl ResidueTable {
    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Whether `x^a` is within the weighted-degree bound of the table.
    pub fn covers(&self, a: &ExponentVector) -> bool {
        a.is_nonnegative() && a.dot(&self.weight) <= self.bound
    }

    /// `Res(x^a)` for the original system; `None` outside the bound.
    pub fn get(&self, a: &ExponentVector) -> Option<Rational> {
        self.covers(a)
            .then(|| self.entries.get(a).cloned().unwrap_or_else(Rational::zero))
    }

    /// The nonzero entries.
    pub fn entries(&self) -> &HashMap<ExponentVector, Rational> {
        &self.entries
    }

    pub fn into_entries(self) -> HashMap<ExponentVector, Rational> {
        self.entries
    }

    /// `Σ c_a Res(x^a)`; panics if a term lies outside the bound.
    pub fn residue_polynomial(&self, h: &Polynomial) -> Rational {
        h.terms().fold(Rational::zero(), |acc, (e, c)| {
            let v = self.get(e).expect("term within the table bound");
            if v.is_zero() {
                acc
            } else {
                acc + c * v
            }
        })
    }
}

/// Residue table for all monomials of weighted degree at most `d`.
pub fn residue_batch(profile: &BasisProfile, d: i64) -> ResidueTable {
    let wr = profile.weight().degree_of(profile.r());
    let scale = profile.residue_scale().clone();
    let mut entries = HashMap::new();
    if d >= wr {
        let series = cached_series(profile, (d - wr) as usize);
        let n = profile.nvars();
        for m in 0..=(d - wr) as usize {
            for (beta, c) in series.b()[m].terms() {
                let a = beta.neg().sub(&one(n));
                if a.is_nonnegative() {
                    entries.insert(a, c * &scale);
                }
            }
        }
    }
    ResidueTable {
        bound: d,
        weight: profile.weight().as_slice().to_vec(),
        entries,
    }
}

/// `Res(h)` for a polynomial `h`, by linearity over its terms. Terms with
/// `s(a) ≤ 0` are settled without the series.
pub fn residue_polynomial(profile: &BasisProfile, h: &Polynomial) -> Rational {
    let top = h
        .exponents()
        .filter(|e| e.as_slice() != profile.r().as_slice())
        .map(|e| profile.weight().degree_of(e))
        .max();
    let wr = profile.weight().degree_of(profile.r());
    match top {
        Some(d) if d > wr => residue_batch(profile, d).residue_polynomial(h),
        _ => h.coefficient_of(profile.r()) * profile.residue_scale(),
    }
}
