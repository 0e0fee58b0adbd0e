//! Weighted homogenization in an auxiliary parameter `t` and inversion of the
//! homogenized product as a power series in `t` with Laurent polynomial
//! coefficients.
//!
//! With `g̃_i(t; x) = t^{d_i} g_i(t^{-w_1} x_1, …, t^{-w_n} x_n)` and
//! `∏ g̃_i = Σ_j A_j(x) t^j`, the inverse `Σ_m B_m(x) t^m` satisfies
//! `A_0 B_0 = 1` and `Σ_{j=0..m} A_j B_{m-j} = 0` for `m ≥ 1`. Since
//! `A_0 = x^{r+1}` is a monomial the recursion only ever divides by it.

use std::collections::hash_map::Entry;
use std::collections::BTreeMap;
use std::hash::Hash;
use std::ops::{AddAssign, Mul};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::linalg::Rational;
use crate::poly::{ExponentVector, Polynomial, Variables};
use crate::weight::BasisProfile;

/// The homogenized generators, each as a map from `t`-power to its
/// coefficient polynomial in `x`.
#[derive(Clone, Debug)]
pub struct HomogenizedSystem {
    profile: BasisProfile,
    gt: Vec<BTreeMap<i64, Polynomial>>,
}

impl HomogenizedSystem {
    pub fn profile(&self) -> &BasisProfile {
        &self.profile
    }

    /// `t`-graded pieces of `g̃_i`.
    pub fn generator(&self, i: usize) -> &BTreeMap<i64, Polynomial> {
        &self.gt[i]
    }

    /// Renders `g̃_i` as text with `t` written in front of each `x`-part.
    pub fn display_generator(&self, i: usize) -> String {
        let mut parts = Vec::new();
        for (k, p) in &self.gt[i] {
            for (e, c) in p.terms().rev() {
                let term = Polynomial::monomial(p.variables(), e.clone(), c.clone()).to_string();
                let (sign, body) = match term.strip_prefix('-') {
                    Some(rest) => ("-", rest.to_string()),
                    None => ("+", term),
                };
                let t = match *k {
                    0 => String::new(),
                    1 => "t".to_string(),
                    k => format!("t^{k}"),
                };
                let body = match (t.is_empty(), body.as_str()) {
                    (true, _) => body,
                    (false, "1") => t,
                    (false, _) => format!("{t}*{body}"),
                };
                parts.push((sign, body));
            }
        }
        let mut out = String::new();
        for (idx, (sign, body)) in parts.into_iter().enumerate() {
            match (idx, sign) {
                (0, "-") => out.push('-'),
                (0, _) => {}
                (_, s) => {
                    out.push(' ');
                    out.push_str(s);
                    out.push(' ');
                }
            }
            out.push_str(&body);
        }
        out
    }
}

/// Weighted homogenization of the normalized generators.
pub fn homogenize(profile: &BasisProfile) -> HomogenizedSystem {
    let w = profile.weight();
    let gt = profile
        .system()
        .generators()
        .iter()
        .zip(profile.degrees())
        .map(|(g, &d)| {
            let mut by_t: BTreeMap<i64, Polynomial> = BTreeMap::new();
            for (e, c) in g.terms() {
                let k = d - w.degree_of(e);
                debug_assert!(k >= 0, "d_i is the weighted degree of g_i");
                by_t.entry(k)
                    .or_insert_with(|| Polynomial::zero(g.variables()))
                    .add_term(e.clone(), c.clone());
            }
            by_t
        })
        .collect();
    HomogenizedSystem {
        profile: profile.clone(),
        gt,
    }
}

/// Coefficients `A_0, …, A_{d_w}` of `∏ g̃_i` as a polynomial in `t`.
pub fn expand_product(hs: &HomogenizedSystem) -> Vec<Polynomial> {
    let vars = hs.profile.system().variables();
    let d_w = hs.profile.d_w() as usize;
    let mut acc: Vec<Polynomial> = vec![Polynomial::zero(vars); d_w + 1];
    acc[0] = Polynomial::one(vars);
    let mut top = 0usize;
    for g in &hs.gt {
        let mut next = vec![Polynomial::zero(vars); d_w + 1];
        for (j, a) in acc.iter().enumerate().take(top + 1) {
            if a.is_zero() {
                continue;
            }
            for (&k, p) in g {
                let idx = j + k as usize;
                next[idx] = &next[idx] + &(a * p);
            }
        }
        top += *g.keys().last().unwrap_or(&0) as usize;
        acc = next;
    }
    acc
}

/// The Laurent coefficients `B_0, …, B_d` of `(∏ g̃_i)^{-1}`.
#[derive(Clone, Debug)]
pub struct DeformationSeries {
    profile: BasisProfile,
    a: Vec<Polynomial>,
    b: Vec<Polynomial>,
    elapsed: Vec<Duration>,
}

impl DeformationSeries {
    pub fn profile(&self) -> &BasisProfile {
        &self.profile
    }

    /// `A_0, …, A_{d_w}`.
    pub fn a(&self) -> &[Polynomial] {
        &self.a
    }

    /// `B_0, …, B_d`.
    pub fn b(&self) -> &[Polynomial] {
        &self.b
    }

    pub fn truncation(&self) -> usize {
        self.b.len() - 1
    }

    /// Wall time from the start of the recursion until `B_m` was complete.
    pub fn elapsed(&self) -> &[Duration] {
        &self.elapsed
    }

    pub fn term_counts(&self) -> Vec<usize> {
        self.b.iter().map(Polynomial::num_terms).collect()
    }

    /// Coefficient of `x^e` in `B_m` (zero beyond the truncation).
    pub fn coefficient(&self, m: usize, e: &ExponentVector) -> Rational {
        self.b.get(m).map_or_else(Rational::zero, |p| p.coefficient_of(e))
    }

    /// `Σ_{j=0..m} A_j · B_{m−j}` (should be 1 for `m = 0` and 0 otherwise).
    pub fn recursion_residual(&self, m: usize) -> Polynomial {
        let vars = self.b[0].variables();
        let mut acc = Polynomial::zero(vars);
        for j in 0..=m.min(self.a.len() - 1) {
            acc = acc + &self.a[j] * &self.b[m - j];
        }
        acc
    }
}

/// Inverts the homogenized product through order `d` in `t`.
pub fn invert_series(hs: &HomogenizedSystem, d: usize) -> DeformationSeries {
    invert_series_filtered(hs, d, &[])
}

/// A half-space `⟨normal, β⟩ ≥ bound` of Laurent exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub bound: i64,
}

impl Halfspace {
    fn contains(&self, e: &[i64]) -> bool {
        self.normal.iter().zip(e).map(|(a, b)| a * b).sum::<i64>() >= self.bound
    }
}

/// Inverts the series keeping only the terms `x^β` that lie in every given
/// half-space. Dropping terms is sound as long as no dropped term can feed
/// into a term the caller later reads.
pub fn invert_series_filtered(hs: &HomogenizedSystem, d: usize, region: &[Halfspace]) -> DeformationSeries {
    let profile = hs.profile.clone();
    let vars: Variables = profile.system().variables().clone();
    let a = expand_product(hs);
    let shift = profile.r_plus_one().neg();
    // Â_j = −x^{−(r+1)} · A_j, so that B_m = Σ_{j≥1} Â_j · B_{m−j}.
    let a_hat: Vec<Vec<(ExponentVector, Rational)>> = a
        .iter()
        .map(|p| p.terms().map(|(e, c)| (e.add(&shift), -c)).collect())
        .collect();
    let integral = a_hat.iter().flatten().all(|(_, c)| c.is_integer());
    let (b, elapsed) = match (Packing::new(&a_hat, &shift, d), integral) {
        (Some(pk), true) => run(
            &pk,
            &a_hat,
            &shift,
            d,
            region,
            |c| c.to_integer(),
            Rational::from_integer,
        ),
        (Some(pk), false) => run(&pk, &a_hat, &shift, d, region, Clone::clone, |c| c),
        (None, true) => run(
            &Unpacked,
            &a_hat,
            &shift,
            d,
            region,
            |c| c.to_integer(),
            Rational::from_integer,
        ),
        (None, false) => run(&Unpacked, &a_hat, &shift, d, region, Clone::clone, |c| c),
    };
    let b = b
        .into_iter()
        .map(|terms| Polynomial::from_terms(&vars, terms))
        .collect();
    DeformationSeries { profile, a, b, elapsed }
}

/// Encoding of exponent vectors as hash keys closed under addition.
trait KeyCodec: Sync {
    type Key: Clone + Eq + Hash + Send + Sync;
    fn encode(&self, e: &ExponentVector) -> Self::Key;
    /// Encoding of an increment, added to a key with [`KeyCodec::shift`].
    fn encode_delta(&self, e: &ExponentVector) -> Self::Key;
    fn shift(&self, key: &Self::Key, delta: &Self::Key) -> Self::Key;
    fn decode(&self, key: &Self::Key, out: &mut [i64]);
}

struct Unpacked;

impl KeyCodec for Unpacked {
    type Key = ExponentVector;
    fn encode(&self, e: &ExponentVector) -> ExponentVector {
        e.clone()
    }
    fn encode_delta(&self, e: &ExponentVector) -> ExponentVector {
        e.clone()
    }
    fn shift(&self, key: &ExponentVector, delta: &ExponentVector) -> ExponentVector {
        key.add(delta)
    }
    fn decode(&self, key: &ExponentVector, out: &mut [i64]) {
        out.copy_from_slice(key.as_slice());
    }
}

/// Biased fixed-width fields in one `i128`. Adding a delta adds field-wise
/// as long as no field leaves its range, which the width guarantees for
/// every exponent reachable within the truncation.
struct Packing {
    n: usize,
    bits: u32,
    bias: i64,
}

impl Packing {
    fn new(a_hat: &[Vec<(ExponentVector, Rational)>], shift: &ExponentVector, d: usize) -> Option<Self> {
        let n = shift.len();
        let step = a_hat
            .iter()
            .flatten()
            .flat_map(|(e, _)| e.as_slice().iter().map(|x| x.unsigned_abs()))
            .max()
            .unwrap_or(0);
        let reach = step
            .checked_mul(d as u64)?
            .checked_add(shift.as_slice().iter().map(|x| x.unsigned_abs()).max()?)?;
        let bits = 64 - reach.leading_zeros() + 2;
        if n == 0 || bits as usize * n > 126 || bits > 62 {
            return None;
        }
        Some(Packing {
            n,
            bits,
            bias: 1i64 << (bits - 1),
        })
    }
}

impl KeyCodec for Packing {
    type Key = i128;
    fn encode(&self, e: &ExponentVector) -> i128 {
        e.as_slice()
            .iter()
            .enumerate()
            .map(|(k, &x)| ((x + self.bias) as i128) << (k as u32 * self.bits))
            .sum()
    }
    fn encode_delta(&self, e: &ExponentVector) -> i128 {
        e.as_slice()
            .iter()
            .enumerate()
            .map(|(k, &x)| (x as i128) << (k as u32 * self.bits))
            .sum()
    }
    fn shift(&self, key: &i128, delta: &i128) -> i128 {
        key + delta
    }
    fn decode(&self, key: &i128, out: &mut [i64]) {
        let mask = (1i128 << self.bits) - 1;
        for (k, slot) in out.iter_mut().enumerate().take(self.n) {
            *slot = ((key >> (k as u32 * self.bits)) & mask) as i64 - self.bias;
        }
    }
}

fn run<C, T>(
    codec: &C,
    a_hat: &[Vec<(ExponentVector, Rational)>],
    shift: &ExponentVector,
    d: usize,
    region: &[Halfspace],
    to_t: impl Fn(&Rational) -> T,
    from_t: impl Fn(T) -> Rational,
) -> (Vec<Vec<(ExponentVector, Rational)>>, Vec<Duration>)
where
    C: KeyCodec,
    T: Clone + Send + Sync + Zero + One + for<'x> AddAssign<&'x T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let n = shift.len();
    let a_keys: Vec<Vec<(C::Key, T)>> = a_hat
        .iter()
        .map(|t| t.iter().map(|(e, c)| (codec.encode_delta(e), to_t(c))).collect())
        .collect();
    let keep = |key: &C::Key| {
        if region.is_empty() {
            return true;
        }
        let mut buf = [0i64; 16];
        let e = if n <= buf.len() {
            codec.decode(key, &mut buf[..n]);
            &buf[..n]
        } else {
            return true;
        };
        region.iter().all(|h| h.contains(e))
    };
    let clock = Instant::now();
    let mut elapsed = vec![Duration::ZERO];
    let mut b: Vec<Vec<(C::Key, T)>> = Vec::with_capacity(d + 1);
    let start = codec.encode(shift);
    b.push(if keep(&start) {
        vec![(start, T::one())]
    } else {
        Vec::new()
    });
    for m in 1..=d {
        let jmax = m.min(a_keys.len() - 1);
        let partials: Vec<FxHashMap<C::Key, T>> = (1..=jmax)
            .into_par_iter()
            .filter(|&j| !a_keys[j].is_empty() && !b[m - j].is_empty())
            .map(|j| {
                let mut acc: FxHashMap<C::Key, T> = FxHashMap::default();
                for (kb, cb) in &b[m - j] {
                    for (ka, ca) in &a_keys[j] {
                        let key = codec.shift(kb, ka);
                        if !keep(&key) {
                            continue;
                        }
                        let v = ca * cb;
                        match acc.entry(key) {
                            Entry::Occupied(mut o) => *o.get_mut() += &v,
                            Entry::Vacant(slot) => {
                                slot.insert(v);
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        let mut parts = partials.into_iter();
        let mut total = parts.next().unwrap_or_default();
        for part in parts {
            for (key, c) in part {
                match total.entry(key) {
                    Entry::Occupied(mut o) => *o.get_mut() += &c,
                    Entry::Vacant(slot) => {
                        slot.insert(c);
                    }
                }
            }
        }
        b.push(total.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        elapsed.push(clock.elapsed());
    }
    let mut buf = vec![0i64; n];
    let b = b
        .into_iter()
        .map(|terms| {
            terms
                .into_iter()
                .map(|(key, c)| {
                    codec.decode(&key, &mut buf);
                    (ExponentVector::from(buf.as_slice()), from_t(c))
                })
                .collect()
        })
        .collect();
    (b, elapsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::poly::{parse_polynomial, PolySystem};
    use crate::weight::{verify_basis, WeightVector};

    fn reference_profile() -> BasisProfile {
        let sys = PolySystem::parse(
            &["x1", "x2", "x3"],
            &[
                "x1^5 + x2^3 + x3^2 - 1",
                "x1^2 + x2^2 + x3 - 1",
                "x1^6 + x2^5 + x3^3 - 1",
            ],
        )
        .unwrap();
        verify_basis(&sys, &WeightVector::new(vec![3, 4, 7]).unwrap()).unwrap()
    }

    #[test]
    fn homogenized_generators() {
        let hs = homogenize(&reference_profile());
        assert_eq!(hs.display_generator(0), "x1^5 + t*x3^2 + t^3*x2^3 - t^15");
        assert_eq!(hs.display_generator(1), "x2^2 + t*x3 + t^2*x1^2 - t^8");
        assert_eq!(hs.display_generator(2), "x3^3 + t*x2^5 + t^3*x1^6 - t^21");
    }

    #[test]
    fn homogeneity_of_pieces() {
        let p = reference_profile();
        let hs = homogenize(&p);
        for i in 0..3 {
            for (k, poly) in hs.generator(i) {
                for (e, _) in poly.terms() {
                    assert_eq!(k + p.weight().degree_of(e), p.degrees()[i]);
                }
            }
        }
    }

    #[test]
    fn product_coefficients() {
        let p = reference_profile();
        let a = expand_product(&homogenize(&p));
        assert_eq!(a.len(), 45);
        assert_eq!(a[0].to_string(), "x1^5*x2^2*x3^3");
        for (j, aj) in a.iter().enumerate() {
            for (e, _) in aj.terms() {
                assert_eq!(p.weight().degree_of(e), 44 - j as i64);
            }
        }
        assert_eq!(a[44], Polynomial::constant(p.system().variables(), rat(-1)));
    }

    #[test]
    fn second_coefficient_matches_display() {
        let p = reference_profile();
        let s = invert_series(&homogenize(&p), 2);
        let expected = parse_polynomial(
            "x1^-10*x2^-4 - x1^-3*x2^-4*x3^-3 + x1^-5*x2*x3^-5 + x1^-10*x2^3*x3^-4 \
             + x1^-15*x2^-2*x3 + x1^-5*x2^8*x3^-9 + x1^-5*x2^-6*x3^-1",
            p.system().variables(),
        )
        .unwrap();
        assert_eq!(s.b()[2], expected);
        assert_eq!(s.term_counts(), vec![1, 3, 7]);
    }

    #[test]
    fn pure_powers_invert_to_a_monomial() {
        let sys = PolySystem::parse(&["x1", "x2"], &["x1^2", "x2^3"]).unwrap();
        let p = verify_basis(&sys, &WeightVector::new(vec![1, 1]).unwrap()).unwrap();
        let s = invert_series(&homogenize(&p), 4);
        assert_eq!(s.b()[0].to_string(), "x1^-2*x2^-3");
        assert!(s.b()[1..].iter().all(Polynomial::is_zero));
        assert!(s.a()[1..].iter().all(Polynomial::is_zero));
    }
}
