//! Built-in reference system and the values it must reproduce.

use std::time::Instant;

use globres::cones::{build_cones, vanishing_by_cone};
use globres::linalg::{determinant, format_rational, rank_and_signature, Rational};
use globres::normal_form::{is_unit_anti_triangular, Reducer, ResidueMethod};
use globres::poly::parse_polynomial;
use globres::polyhedral::primitive_i64;
use globres::residue::residue_monomial;
use globres::roots::{chow_form_with, chow_log_with, chow_variables, count_roots_with};
use globres::series::{homogenize, invert_series};
use globres::weight::verify_basis;
use globres::{BasisProfile, ExponentVector, Polynomial};
use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::system_file::{parse_system_text, SystemFile};

pub const REFERENCE_SYSTEM: &str = "\
vars: x1 x2 x3
weight: 3 4 7
g: x1^5 + x2^3 + x3^2 - 1
g: x1^2 + x2^2 + x3 - 1
g: x1^6 + x2^5 + x3^3 - 1
";

const B2: &str = "x1^-10*x2^-4 - x1^-3*x2^-4*x3^-3 + x1^-5*x2*x3^-5 + x1^-10*x2^3*x3^-4 \
    + x1^-15*x2^-2*x3 + x1^-5*x2^8*x3^-9 + x1^-5*x2^-6*x3^-1";
const TERM_COUNTS: [(usize, usize); 9] = [
    (2, 7),
    (5, 41),
    (10, 216),
    (15, 569),
    (20, 1102),
    (25, 1803),
    (30, 2682),
    (35, 3744),
    (40, 4964),
];
const RES_15: &str = "-258756707658424020014953731203";
const NF_J: &str = "30*x1^4*x2*x3^2 - 25*x1^4*x3^2 - 152*x1^4*x2 + 146*x1^4*x3 \
    - 251*x1^3*x2*x3 + 83*x1^3*x3^2 + 16*x1^4 + 229*x1^3*x2 + 8*x1^3*x3 \
    - 196*x1^2*x2*x3 + 226*x1^2*x3^2 - 114*x1*x2*x3^2 - 73*x1^3 + 240*x1^2*x2 \
    + 34*x1^2*x3 + 254*x1*x2*x3 - 62*x1*x3^2 + 69*x2*x3^2 - 260*x1^2 \
    - 140*x1*x2 - 78*x1*x3 + 108*x2*x3 - 49*x3^2 + 140*x1 - 177*x2 - 128*x3 + 177";
const LOG3: &str = "5*u2 - 5*u3 + 37*u1*u2 - 121*u1*u3 - 35/2*u2^2 + 106*u2*u3 - 485/2*u3^2 \
    + 17*u1^3 - 74*u1^2*u2 + 177*u1^2*u3 - 172*u1*u2^2 + 536*u1*u2*u3 - 686*u1*u3^2 \
    + 185/3*u2^3 - 667*u2^2*u3 + 1084*u2*u3^2";
const CHOW3: &str = "1 + 5*u2 - 5*u3 + 37*u1*u2 - 121*u1*u3 - 5*u2^2 + 81*u2*u3 - 230*u3^2 \
    + 17*u1^3 - 74*u1^2*u2 + 177*u1^2*u3 + 13*u1*u2^2 - 254*u1*u2*u3 - 81*u1*u3^2 \
    - 5*u2^3 - 112*u2^2*u3 - 596*u2*u3^2";
const W_RAYS: [[i64; 3]; 4] = [[4, 5, 10], [1, 1, 2], [5, 6, 10], [2, 3, 5]];
const WSTAR_RAYS: [[i64; 3]; 4] = [[5, 0, -2], [0, 2, -1], [-2, 0, 1], [0, -5, 3]];

pub fn reference_file() -> SystemFile {
    parse_system_text(REFERENCE_SYSTEM).expect("built-in system parses")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ev(v: [i64; 3]) -> ExponentVector {
    v.into()
}

/// Every coefficient of `want` appears in `got`, and every other term of
/// `got` is one of `extra`.
fn matches_display(got: &Polynomial, want: &Polynomial, extra: &[ExponentVector]) -> bool {
    want.terms().all(|(e, c)| &got.coefficient_of(e) == c)
        && got
            .terms()
            .all(|(e, c)| extra.contains(e) || &want.coefficient_of(e) == c)
}

fn sorted_primitive(rays: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = rays.iter().map(|r| primitive_i64(r)).collect();
    v.sort();
    v
}

type Check = fn(&Checks) -> Result<String, String>;

struct Checks {
    profile: BasisProfile,
    reducer: Reducer,
}

impl Checks {
    fn basis(&self) -> Result<String, String> {
        let p = &self.profile;
        ensure(
            p.r().as_slice() == [4, 1, 2] && p.d_w() == 44 && p.dimension() == 30,
            || format!("r={} d_w={} dim={}", p.r(), p.d_w(), p.dimension()),
        )?;
        let tr1 = self.reducer.trace(&Polynomial::one(p.system().variables()));
        ensure(tr1 == Rational::from_integer(30.into()), || format!("tr(1)={tr1}"))?;
        Ok("r=(4,1,2) d_w=44 dim V=30 tr(1)=30".into())
    }

    fn series(&self) -> Result<String, String> {
        let s = invert_series(&homogenize(&self.profile), 40);
        let b2 = parse_polynomial(B2, self.profile.system().variables()).expect("valid");
        ensure(s.b()[2] == b2, || "B_2 differs".into())?;
        let counts = s.term_counts();
        for (j, n) in TERM_COUNTS {
            ensure(counts[j] == n, || format!("B_{j} has {} terms, want {n}", counts[j]))?;
        }
        Ok("B_2 exact; term counts at j=2..40 match".into())
    }

    fn residues(&self) -> Result<String, String> {
        let want: Rational = RES_15.parse().expect("integer");
        let a = ev([15, 15, 15]);
        let nf = self.reducer.residue_monomial(&a);
        let series = residue_monomial(&self.profile, &a);
        ensure(nf == want && series == want, || format!("nf {nf}, series {series}"))?;
        let cones = build_cones(&self.profile).map_err(|e| e.to_string())?;
        let b = ev([6, 1, 1]);
        ensure(vanishing_by_cone(&cones, &b, self.profile.r()), || "cone test".into())?;
        ensure(self.reducer.residue_monomial(&b) == Rational::default(), || {
            "Res(x^(6,1,1))".into()
        })?;
        ensure(residue_monomial(&self.profile, &b) == Rational::default(), || {
            "Res(x^(6,1,1))".into()
        })?;
        let one = self.reducer.residue_monomial(self.profile.r());
        ensure(one == Rational::from_integer(1.into()), || format!("Res(x^r)={one}"))?;
        Ok(format!("Res(x^(15,15,15))={RES_15} by both methods"))
    }

    fn normal_form(&self) -> Result<String, String> {
        let vars = self.profile.system().variables();
        let nf = self
            .reducer
            .normal_form(&self.profile.system().jacobian_determinant())
            .to_polynomial(vars);
        ensure(nf == parse_polynomial(NF_J, vars).expect("valid"), || {
            format!("NF(J) = {nf}")
        })?;
        Ok(format!("NF(J) matches ({} terms)", nf.num_terms()))
    }

    fn trace_form(&self) -> Result<String, String> {
        let vars = self.profile.system().variables();
        let x = Polynomial::monomial(vars, ev([8, 2, 4]), Rational::from_integer(1.into()));
        let tr = self.reducer.trace(&x);
        ensure(tr == Rational::from_integer(16049138278i64.into()), || {
            format!("tr = {tr}")
        })?;
        let r = count_roots_with(&self.reducer).map_err(|e| e.to_string())?;
        ensure(
            (r.rank, r.signature, r.positive_eigenvalues, r.negative_eigenvalues) == (20, 6, 13, 7),
            || format!("{r:?}"),
        )?;
        Ok("rank 20, signature 6, 13 positive / 7 negative eigenvalues".into())
    }

    fn dual_matrix(&self) -> Result<String, String> {
        let m = self.reducer.dual_matrix(ResidueMethod::NormalForm);
        let det = determinant(&m).map_err(|e| e.to_string())?;
        let (_, sig) = rank_and_signature(&m).map_err(|e| e.to_string())?;
        ensure(is_unit_anti_triangular(&m), || "not anti-triangular".into())?;
        ensure(det.abs() == Rational::from_integer(1.into()) && sig == 0, || {
            format!("det {det}, signature {sig}")
        })?;
        Ok(format!(
            "unit anti-triangular, det {}, signature 0",
            format_rational(&det)
        ))
    }

    fn chow(&self) -> Result<String, String> {
        let u = chow_variables(3);
        let extra = [ev([0, 0, 3])];
        let log = chow_log_with(&self.reducer, 3);
        ensure(
            matches_display(log.as_polynomial(), &parse_polynomial(LOG3, &u).expect("valid"), &extra),
            || format!("log = {}", log.as_polynomial()),
        )?;
        let chow = chow_form_with(&self.reducer, 3).map_err(|e| e.to_string())?;
        ensure(
            matches_display(
                chow.as_polynomial(),
                &parse_polynomial(CHOW3, &u).expect("valid"),
                &extra,
            ),
            || format!("Chow = {}", chow.as_polynomial()),
        )?;
        Ok("log and Chow coefficients through degree 3 match".into())
    }

    fn cones(&self) -> Result<String, String> {
        let c = build_cones(&self.profile).map_err(|e| e.to_string())?;
        let w: Vec<Vec<i64>> = W_RAYS.iter().map(|r| r.to_vec()).collect();
        let ws: Vec<Vec<i64>> = WSTAR_RAYS.iter().map(|r| r.to_vec()).collect();
        ensure(sorted_primitive(c.w_rays()) == sorted_primitive(&w), || {
            format!("W rays {:?}", c.w_rays())
        })?;
        ensure(sorted_primitive(c.wstar_rays()) == sorted_primitive(&ws), || {
            format!("W* rays {:?}", c.wstar_rays())
        })?;
        Ok("W and W* rays match".into())
    }
}

/// Runs every reference check; the result lists one entry per check.
pub fn reproduce() -> (Value, Map<String, Value>, bool) {
    let file = reference_file();
    let profile = verify_basis(&file.system, file.weight.as_ref().expect("weight given")).expect("reference basis");
    let checks = Checks {
        reducer: Reducer::new(&profile),
        profile,
    };
    let list: [(&str, Check); 8] = [
        ("basis", Checks::basis),
        ("series", Checks::series),
        ("residues", Checks::residues),
        ("normal_form", Checks::normal_form),
        ("trace_form", Checks::trace_form),
        ("dual_matrix", Checks::dual_matrix),
        ("chow", Checks::chow),
        ("cones", Checks::cones),
    ];
    let mut rows = Vec::new();
    let mut timing = Map::new();
    let mut all = true;
    for (name, f) in list {
        let start = Instant::now();
        let outcome = f(&checks);
        timing.insert(
            format!("{name}_ms"),
            Value::String(start.elapsed().as_millis().to_string()),
        );
        all &= outcome.is_ok();
        let (status, detail) = match outcome {
            Ok(d) => ("pass", d),
            Err(e) => ("fail", e),
        };
        rows.push(json!({ "check": name, "status": status, "detail": detail }));
    }
    (json!({ "checks": rows, "all_passed": all }), timing, all)
}
