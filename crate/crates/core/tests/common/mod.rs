//! Shared fixtures and independent oracles for the integration suites.
#![allow(dead_code)]

use globres::linalg::{rat, Rational};
use globres::poly::{parse_polynomial, variables, PolySystem, Polynomial, Variables};
use globres::weight::{verify_basis, BasisProfile, WeightVector};
use num_traits::{One, Zero};
use proptest::prelude::*;

pub const REFERENCE_GENERATORS: [&str; 3] = [
    "x1^5 + x2^3 + x3^2 - 1",
    "x1^2 + x2^2 + x3 - 1",
    "x1^6 + x2^5 + x3^3 - 1",
];

pub fn reference_system() -> PolySystem {
    PolySystem::parse(&["x1", "x2", "x3"], &REFERENCE_GENERATORS).unwrap()
}

pub fn reference_profile() -> BasisProfile {
    verify_basis(&reference_system(), &WeightVector::new(vec![3, 4, 7]).unwrap()).unwrap()
}

pub fn poly(text: &str, vars: &Variables) -> Polynomial {
    parse_polynomial(text, vars).unwrap()
}

/// `g_i = α_i Π_k (x_i − c_ik)`: every root is a grid point and simple when
/// the `c_ik` are distinct.
#[derive(Clone, Debug)]
pub struct ProductSystem {
    pub scalars: Vec<Rational>,
    pub roots: Vec<Vec<Rational>>,
    pub system: PolySystem,
}

impl ProductSystem {
    pub fn new(scalars: Vec<Rational>, roots: Vec<Vec<Rational>>) -> Self {
        let n = roots.len();
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let vars = variables(&names);
        let gens = roots
            .iter()
            .zip(&scalars)
            .enumerate()
            .map(|(i, (cs, a))| {
                cs.iter().fold(Polynomial::constant(&vars, a.clone()), |acc, c| {
                    &acc * &(Polynomial::var(&vars, i) - Polynomial::constant(&vars, c.clone()))
                })
            })
            .collect();
        ProductSystem {
            scalars,
            roots,
            system: PolySystem::new(vars, gens).unwrap(),
        }
    }

    pub fn profile(&self, w: &[i64]) -> BasisProfile {
        verify_basis(&self.system, &WeightVector::new(w.to_vec()).unwrap()).unwrap()
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.roots.iter().fold(vec![Vec::new()], |acc, cs| {
            acc.iter()
                .flat_map(|p| {
                    cs.iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(c.clone());
                        q
                    })
                })
                .collect()
        })
    }

    /// Jacobian at a root, `Π_i α_i Π_{c ≠ p_i} (p_i − c)`, without
    /// differentiating anything.
    pub fn jacobian_at(&self, p: &[Rational]) -> Rational {
        p.iter()
            .zip(&self.roots)
            .zip(&self.scalars)
            .fold(Rational::one(), |acc, ((x, cs), a)| {
                cs.iter().filter(|c| *c != x).fold(acc * a, |acc, c| acc * (x - c))
            })
    }

    /// `Σ_p h(p) / J(p)` over the simple roots.
    pub fn residue_oracle(&self, h: &Polynomial) -> Rational {
        self.points()
            .iter()
            .fold(Rational::zero(), |acc, p| acc + h.eval(p) / self.jacobian_at(p))
    }

    /// `Σ_p h(p)`.
    pub fn trace_oracle(&self, h: &Polynomial) -> Rational {
        self.points().iter().fold(Rational::zero(), |acc, p| acc + h.eval(p))
    }

    /// `Π_p (1 + ⟨u, p⟩)` truncated at total degree `d`.
    pub fn chow_oracle(&self, d: i64) -> Polynomial {
        let n = self.roots.len();
        let names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
        let u = variables(&names);
        let mut acc = Polynomial::one(&u);
        for p in self.points() {
            let mut lin = Polynomial::one(&u);
            for (i, x) in p.iter().enumerate() {
                lin = lin + Polynomial::var(&u, i).scale(x);
            }
            let prod = &acc * &lin;
            acc = Polynomial::from_terms(
                &u,
                prod.terms()
                    .filter(|(e, _)| e.total_degree() <= d)
                    .map(|(e, c)| (e.clone(), c.clone())),
            );
        }
        acc
    }
}

/// Small nonzero rational.
pub fn small_scalar() -> impl Strategy<Value = Rational> {
    (prop_oneof![-3i64..=-1, 1i64..=3], 1i64..=2).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

/// Product systems in 1 to 3 variables, 1 to 3 distinct rational roots per
/// variable, random leading scalars.
pub fn product_system() -> impl Strategy<Value = ProductSystem> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(small_scalar(), n),
                prop::collection::vec(prop::collection::btree_set(-6i64..=6, 1..=3), n),
            )
        })
        .prop_map(|(scalars, roots)| {
            let roots = roots
                .into_iter()
                .map(|s| s.into_iter().map(|k| Rational::new(k.into(), 2.into())).collect())
                .collect();
            ProductSystem::new(scalars, roots)
        })
}

/// Polynomial with up to `terms` terms, exponents below `max_exp`.
pub fn random_polynomial(vars: Variables, terms: usize, max_exp: i64) -> impl Strategy<Value = Polynomial> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -5i64..=5), 1..=terms)
        .prop_map(move |ts| Polynomial::from_terms(&vars, ts.into_iter().map(|(e, c)| (e.into(), rat(c)))))
}

/// Polynomial over the reference variables whose terms all have weighted
/// degree at most `bound` under (3, 4, 7).
pub fn reference_polynomial(terms: usize, bound: i64) -> impl Strategy<Value = Polynomial> {
    let vars = reference_system().variables().clone();
    prop::collection::vec(((0i64..=20, 0i64..=15, 0i64..=8), -5i64..=5), 1..=terms).prop_map(move |ts| {
        Polynomial::from_terms(
            &vars,
            ts.into_iter()
                .filter(|((a, b, c), _)| 3 * a + 4 * b + 7 * c <= bound)
                .map(|((a, b, c), k)| (vec![a, b, c].into(), rat(k))),
        )
    })
}

/// A system `x_i^{k_i} + (terms of lower w-degree)` together with its weight,
/// so that the pure powers are initial by construction.
#[derive(Clone, Debug)]
pub struct WeightedSystem {
    pub weight: Vec<i64>,
    pub system: PolySystem,
}

impl WeightedSystem {
    pub fn profile(&self) -> BasisProfile {
        verify_basis(&self.system, &WeightVector::new(self.weight.clone()).unwrap()).unwrap()
    }
}

pub fn weighted_system() -> impl Strategy<Value = WeightedSystem> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(1i64..=4, n),
                prop::collection::vec(1i64..=3, n),
                prop::collection::vec(
                    prop::collection::vec((prop::collection::vec(0i64..=4, n), -3i64..=3), 0..=3),
                    n,
                ),
                prop::collection::vec(small_scalar(), n),
                0..n,
            )
        })
        .prop_map(|(w, k, tails, lead, rotate)| {
            let n = w.len();
            let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let vars = variables(&names);
            let mut gens: Vec<Polynomial> = (0..n)
                .map(|i| {
                    let top = w[i] * k[i];
                    let mut g =
                        Polynomial::monomial(&vars, globres::poly::ExponentVector::unit(n, i, k[i]), lead[i].clone());
                    for (b, c) in &tails[i] {
                        let deg: i64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
                        if deg < top {
                            g.add_term(b.clone().into(), rat(*c));
                        }
                    }
                    g
                })
                .collect();
            // Generator order is not tied to variable order.
            gens.rotate_left(rotate);
            WeightedSystem {
                weight: w,
                system: PolySystem::new(vars, gens).unwrap(),
            }
        })
}
