use std::cell::OnceCell;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Subcommand, ValueEnum};
use globres::cones::{build_cones, constant_term_bounds, degree_bound_total, trace_degree_bound, vanishing_by_cone};
use globres::linalg::{determinant, format_rational, rank_and_signature, Rational, RationalMatrix};
use globres::normal_form::{is_unit_anti_triangular, BasisOrder, Reducer, ResidueMethod};
use globres::poly::parse_polynomial;
use globres::residue::{cached_series_count, residue_batch, residue_monomial, residue_polynomial};
use globres::roots::{chow_form_with, chow_log_with, count_roots_with, trace_form_with};
use globres::series::{homogenize, invert_series};
use globres::transform::{extended_buchberger, residue_general, transformed_profile, BuchbergerOptions};
use globres::weight::{discover_weight, verify_basis};
use globres::{BasisProfile, ExponentVector, Polynomial, WeightVector};
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::system_file::SystemFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Nf,
    Series,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    /// Weighted degree, ties by lex.
    Term,
    Lex,
}

impl From<Order> for BasisOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Term => BasisOrder::TermOrder,
            Order::Lex => BasisOrder::Lex,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the pure-power hypothesis and print the basis profile.
    Check {
        /// System file.
        system: PathBuf,
    },
    /// Search for a weight making one pure power initial in each generator.
    DiscoverWeight {
        /// System file.
        system: PathBuf,
    },
    /// Global residue of a monomial, a polynomial, or all monomials up to a weighted degree.
    Residue {
        /// System file.
        system: PathBuf,
        /// Exponent vector, comma separated.
        #[arg(long, group = "target")]
        monomial: Option<String>,
        #[arg(long, group = "target")]
        poly: Option<String>,
        /// Weighted degree bound for a residue table.
        #[arg(long, group = "target")]
        batch: Option<i64>,
        #[arg(long, value_enum, default_value = "nf")]
        method: Method,
        /// Fall back to the Buchberger transformation when the system is not a pure-power basis.
        #[arg(long)]
        general: bool,
    },
    /// Normal form modulo the pure-power basis.
    NormalForm {
        /// System file.
        system: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Trace of multiplication by a polynomial.
    Trace {
        /// System file.
        system: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Residue pairing matrix on the monomial basis.
    DualMatrix {
        /// System file.
        system: PathBuf,
        #[arg(long, value_enum, default_value = "term")]
        order: Order,
        #[arg(long, value_enum, default_value = "nf")]
        method: Method,
    },
    /// Trace form, optionally weighted by a polynomial.
    TraceForm {
        /// System file.
        system: PathBuf,
        #[arg(long)]
        weight_poly: Option<String>,
    },
    /// Distinct complex and real roots from the trace form.
    CountRoots {
        /// System file.
        system: PathBuf,
    },
    /// Degree of the map over the reals.
    Degree {
        /// System file.
        system: PathBuf,
    },
    /// Chow form (or its logarithm) through a total degree.
    Chow {
        /// System file.
        system: PathBuf,
        /// Truncation degree; defaults to the dimension of the quotient.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        log: bool,
    },
    /// Weight cone and its dual.
    Cones {
        /// System file.
        system: PathBuf,
    },
    /// Degree bounds for the residue of a monomial.
    Bounds {
        /// System file.
        system: PathBuf,
        #[arg(long)]
        monomial: String,
        /// Extra interior weight, comma separated.
        #[arg(long)]
        weight: Option<String>,
    },
    /// Residue for an arbitrary zero-dimensional system via a cofactor basis.
    TransformResidue {
        /// System file.
        system: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        weight: Option<String>,
        /// Re-expand the cofactor identity after every step.
        #[arg(long)]
        check_cofactors: bool,
    },
    /// Term counts and timings of the deformation series.
    BenchSeries {
        /// System file.
        system: PathBuf,
        #[arg(long, default_value_t = 40)]
        jmax: usize,
    },
}

pub struct Output {
    pub result: Value,
    pub timing: Map<String, Value>,
}

impl From<Value> for Output {
    fn from(result: Value) -> Self {
        Output {
            result,
            timing: Map::new(),
        }
    }
}

pub fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn exponent_string(e: &ExponentVector) -> String {
    e.as_slice().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn int_list(text: &str, n: usize, what: &str) -> Result<Vec<i64>, CliError> {
    let v: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("{what} '{text}' is not a comma-separated integer list")))?;
    if v.len() != n {
        return Err(CliError::Input(format!("{what} has {} entries, expected {n}", v.len())));
    }
    Ok(v)
}

fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(q).collect()))
            .collect(),
    )
}

/// One loaded system with its lazily built profile and normal-form memo.
pub struct Session {
    file: SystemFile,
    profile: OnceCell<BasisProfile>,
    reducer: OnceCell<Reducer>,
}

impl Session {
    pub fn new(file: SystemFile) -> Self {
        Session {
            file,
            profile: OnceCell::new(),
            reducer: OnceCell::new(),
        }
    }

    pub fn digest(&self) -> String {
        self.file.digest()
    }

    fn weight(&self) -> Result<WeightVector, CliError> {
        match &self.file.weight {
            Some(w) => Ok(w.clone()),
            None => Ok(discover_weight(&self.file.system)?),
        }
    }

    fn profile(&self) -> Result<&BasisProfile, CliError> {
        if let Some(p) = self.profile.get() {
            return Ok(p);
        }
        let p = verify_basis(&self.file.system, &self.weight()?)?;
        Ok(self.profile.get_or_init(|| p))
    }

    fn reducer(&self) -> Result<&Reducer, CliError> {
        let p = self.profile()?;
        Ok(self.reducer.get_or_init(|| Reducer::new(p)))
    }

    fn poly(&self, text: &str) -> Result<Polynomial, CliError> {
        let p = parse_polynomial(text, self.file.system.variables())?;
        if !p.is_polynomial() {
            return Err(CliError::Input(format!("'{text}' has negative exponents")));
        }
        Ok(p)
    }

    fn exponent(&self, text: &str) -> Result<ExponentVector, CliError> {
        let v = int_list(text, self.file.system.nvars(), "exponent")?;
        if v.iter().any(|&x| x < 0) {
            return Err(CliError::Input(format!("exponent '{text}' has negative entries")));
        }
        Ok(v.into())
    }

    pub fn cache(&self) -> Value {
        json!({
            "series_cached": num(cached_series_count()),
            "nf_memo_entries": num(self.reducer.get().map_or(0, Reducer::memo_size)),
        })
    }

    pub fn execute(&self, cmd: &Command) -> Result<Output, CliError> {
        match cmd {
            Command::Check { .. } => self.check(),
            Command::DiscoverWeight { .. } => {
                let w = discover_weight(&self.file.system)?;
                Ok(json!({ "weight": w.as_slice().iter().map(num).collect::<Vec<_>>() }).into())
            }
            Command::Residue {
                monomial,
                poly,
                batch,
                method,
                general,
                ..
            } => self.residue(monomial.as_deref(), poly.as_deref(), *batch, *method, *general),
            Command::NormalForm { poly, .. } => {
                let h = self.poly(poly)?;
                let nf = self.reducer()?.normal_form(&h);
                let vars = self.file.system.variables();
                Ok(json!({
                    "normal_form": nf.to_polynomial(vars).to_string(),
                    "top_coefficient": q(nf.top_coefficient()),
                })
                .into())
            }
            Command::Trace { poly, .. } => {
                let h = self.poly(poly)?;
                Ok(json!({ "trace": q(&self.reducer()?.trace(&h)) }).into())
            }
            Command::DualMatrix { order, method, .. } => self.dual_matrix(*order, *method),
            Command::TraceForm { weight_poly, .. } => {
                let h = weight_poly.as_deref().map(|t| self.poly(t)).transpose()?;
                let t = trace_form_with(self.reducer()?, h.as_ref());
                let (rank, signature) = rank_and_signature(t.matrix())?;
                Ok(json!({
                    "h": t.h().to_string(),
                    "matrix": matrix_json(t.matrix()),
                    "rank": num(rank),
                    "signature": num(signature),
                })
                .into())
            }
            Command::CountRoots { .. } => {
                let r = count_roots_with(self.reducer()?)?;
                Ok(json!({
                    "dim_v": num(r.dim_v),
                    "distinct_complex": num(r.distinct_complex),
                    "distinct_real": num(r.distinct_real),
                    "rank": num(r.rank),
                    "signature": num(r.signature),
                    "positive_eigenvalues": num(r.positive_eigenvalues),
                    "negative_eigenvalues": num(r.negative_eigenvalues),
                    "char_poly": r.char_poly.coefficients().iter().map(q).collect::<Vec<_>>(),
                })
                .into())
            }
            Command::Degree { .. } => {
                let m = self.reducer()?.dual_matrix(ResidueMethod::NormalForm);
                let (_, sig) = rank_and_signature(&m)?;
                Ok(json!({ "degree": num(sig) }).into())
            }
            Command::Chow { degree, log, .. } => self.chow(*degree, *log),
            Command::Cones { .. } => self.cones(),
            Command::Bounds { monomial, weight, .. } => self.bounds(monomial, weight.as_deref()),
            Command::TransformResidue {
                poly,
                weight,
                check_cofactors,
                ..
            } => self.transform_residue(poly, weight.as_deref(), *check_cofactors),
            Command::BenchSeries { jmax, .. } => self.bench_series(*jmax),
        }
    }

    fn check(&self) -> Result<Output, CliError> {
        let p = self.profile()?;
        let list = |v: &[i64]| v.iter().map(num).collect::<Vec<_>>();
        Ok(json!({
            "weight": list(p.weight().as_slice()),
            "r": list(p.r().as_slice()),
            "degrees": list(p.degrees()),
            "d_w": num(p.d_w()),
            "dim_v": num(p.dimension()),
            "leading_scalars": p.leading_scalars().iter().map(q).collect::<Vec<_>>(),
            "permutation": p.permutation().iter().map(num).collect::<Vec<_>>(),
            "residue_scale": q(p.residue_scale()),
        })
        .into())
    }

    fn residue(
        &self,
        monomial: Option<&str>,
        poly: Option<&str>,
        batch: Option<i64>,
        method: Method,
        general: bool,
    ) -> Result<Output, CliError> {
        if let Some(d) = batch {
            return self.residue_table(d, method);
        }
        let (h, label) = match (monomial, poly) {
            (Some(m), _) => {
                let e = self.exponent(m)?;
                let vars = self.file.system.variables();
                (
                    Polynomial::monomial(vars, e, Rational::from_integer(1.into())),
                    m.to_owned(),
                )
            }
            (None, Some(p)) => (self.poly(p)?, p.to_owned()),
            (None, None) => return Err(CliError::Input("one of --monomial, --poly, --batch is required".into())),
        };
        let profile = match self.profile() {
            Ok(p) => p,
            Err(CliError::Basis(msg)) if general => {
                let v = residue_general(
                    &self.file.system,
                    &h,
                    self.file.weight.as_ref(),
                    BuchbergerOptions::default(),
                )
                .map_err(|e| CliError::Basis(format!("{msg}; transformation failed: {e}")))?;
                return Ok(json!({ "input": label, "method": "transform", "residue": q(&v) }).into());
            }
            Err(e) => return Err(e),
        };
        let by_nf = || -> Result<Rational, CliError> { Ok(self.reducer()?.residue(&h)) };
        let by_series = || match monomial {
            Some(_) => residue_monomial(profile, h.exponents().next().expect("one term")),
            None => residue_polynomial(profile, &h),
        };
        let mut timing = Map::new();
        let value = match method {
            Method::Nf => by_nf()?,
            Method::Series => by_series(),
            Method::Both => {
                let t = Instant::now();
                let a = by_nf()?;
                timing.insert("nf_ms".into(), num(t.elapsed().as_millis()));
                let t = Instant::now();
                let b = by_series();
                timing.insert("series_ms".into(), num(t.elapsed().as_millis()));
                if a != b {
                    return Err(CliError::Invariant(format!(
                        "residue methods disagree: normal form {}, series {}",
                        format_rational(&a),
                        format_rational(&b)
                    )));
                }
                a
            }
        };
        let method = match method {
            Method::Nf => "nf",
            Method::Series => "series",
            Method::Both => "both",
        };
        Ok(Output {
            result: json!({ "input": label, "method": method, "residue": q(&value) }),
            timing,
        })
    }

    fn residue_table(&self, d: i64, method: Method) -> Result<Output, CliError> {
        let p = self.profile()?;
        let w = p.weight().as_slice().to_vec();
        let mut exps = Vec::new();
        monomials_up_to(&w, d, &mut Vec::new(), &mut exps);
        let table = (method != Method::Nf).then(|| residue_batch(p, d));
        let reducer = if method != Method::Series {
            Some(self.reducer()?)
        } else {
            None
        };
        let mut rows = Vec::new();
        for e in exps {
            let e: ExponentVector = e.into();
            let value = match (&table, reducer) {
                (Some(t), Some(r)) => {
                    let a = t.get(&e).expect("within bound");
                    let b = r.residue_monomial(&e);
                    if a != b {
                        return Err(CliError::Invariant(format!(
                            "residue methods disagree at {}: series {}, normal form {}",
                            exponent_string(&e),
                            format_rational(&a),
                            format_rational(&b)
                        )));
                    }
                    a
                }
                (Some(t), None) => t.get(&e).expect("within bound"),
                (None, Some(r)) => r.residue_monomial(&e),
                (None, None) => unreachable!("some method is selected"),
            };
            if !value.is_zero() {
                rows.push(json!({ "exponent": exponent_string(&e), "residue": q(&value) }));
            }
        }
        Ok(json!({ "bound": num(d), "nonzero": num(rows.len()), "entries": rows }).into())
    }

    fn dual_matrix(&self, order: Order, method: Method) -> Result<Output, CliError> {
        let p = self.profile()?;
        let reducer = Reducer::with_order(p, order.into());
        let m = match method {
            Method::Nf => reducer.dual_matrix(ResidueMethod::NormalForm),
            Method::Series => reducer.dual_matrix(ResidueMethod::Series),
            Method::Both => {
                let a = reducer.dual_matrix(ResidueMethod::NormalForm);
                if a != reducer.dual_matrix(ResidueMethod::Series) {
                    return Err(CliError::Invariant("dual matrix differs between methods".into()));
                }
                a
            }
        };
        let (rank, signature) = rank_and_signature(&m)?;
        Ok(json!({
            "basis": reducer.basis().exponents().iter().map(exponent_string).collect::<Vec<_>>(),
            "matrix": matrix_json(&m),
            "determinant": q(&determinant(&m)?),
            "rank": num(rank),
            "signature": num(signature),
            "unit_anti_triangular": is_unit_anti_triangular(&m),
        })
        .into())
    }

    fn chow(&self, degree: Option<usize>, log: bool) -> Result<Output, CliError> {
        let reducer = self.reducer()?;
        let d = degree.unwrap_or(reducer.profile().dimension());
        let s = if log {
            chow_log_with(reducer, d)
        } else {
            chow_form_with(reducer, d)?
        };
        let p = s.as_polynomial();
        Ok(json!({
            "degree": num(d),
            "series": if log { "log" } else { "chow" },
            "terms": num(p.num_terms()),
            "integral": p.terms().all(|(_, c)| c.is_integer()),
            "polynomial": p.to_string(),
        })
        .into())
    }

    fn cones(&self) -> Result<Output, CliError> {
        let c = build_cones(self.profile()?)?;
        let rays =
            |v: &[Vec<i64>]| -> Vec<Value> { v.iter().map(|r| Value::Array(r.iter().map(num).collect())).collect() };
        Ok(json!({
            "w_inequalities": rays(c.w_inequalities()),
            "w_rays": rays(c.w_rays()),
            "wstar_rays": rays(c.wstar_rays()),
            "wstar_inequalities": rays(c.wstar_inequalities()),
            "interior_point": c.interior_point().iter().map(num).collect::<Vec<_>>(),
            "orthant_added": c.orthant_added(),
        })
        .into())
    }

    fn bounds(&self, monomial: &str, weight: Option<&str>) -> Result<Output, CliError> {
        let p = self.profile()?;
        let a = self.exponent(monomial)?;
        let user = weight.map(|w| int_list(w, p.nvars(), "weight")).transpose()?;
        let c = build_cones(p)?;
        let total = degree_bound_total(&c, p, &a, user.as_deref())?;
        let constants: Vec<Value> = constant_term_bounds(&c, p, &a)
            .iter()
            .map(|b| b.as_ref().map_or(Value::Null, q))
            .collect();
        let vars = self.file.system.variables();
        let xa = Polynomial::monomial(vars, a.clone(), Rational::from_integer(1.into()));
        Ok(json!({
            "monomial": exponent_string(&a),
            "s": num(p.s_of_a(&a)),
            "vanishes_by_cone": vanishing_by_cone(&c, &a, p.r()),
            "total_degree_bound": num(total),
            "constant_term_bounds": constants,
            "trace_degree_bound": num(trace_degree_bound(&c, &xa, user.as_deref())?),
            "note": "valid upper bounds from sampled interior weights, possibly not minimal",
        })
        .into())
    }

    fn transform_residue(&self, poly: &str, weight: Option<&str>, check: bool) -> Result<Output, CliError> {
        let sys = &self.file.system;
        let h = self.poly(poly)?;
        let w = match weight {
            Some(t) => WeightVector::new(int_list(t, sys.nvars(), "weight")?)?,
            None => self
                .file
                .weight
                .clone()
                .unwrap_or_else(|| globres::transform::default_weight(sys)),
        };
        let options = BuchbergerOptions {
            check_cofactors: check,
            ..Default::default()
        };
        let cb = extended_buchberger(sys, &w, options)?;
        let profile = transformed_profile(&cb, &w)?;
        let value = residue_general(sys, &h, Some(&w), options)?;
        Ok(json!({
            "input": poly,
            "residue": q(&value),
            "basis_size": num(cb.basis_size()),
            "steps": num(cb.steps()),
            "det_a": cb.det_a().to_string(),
            "transformed": cb.f().generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "transformed_weight": profile.weight().as_slice().iter().map(num).collect::<Vec<_>>(),
            "cofactor_identity": cb.identity_holds(),
        })
        .into())
    }

    fn bench_series(&self, jmax: usize) -> Result<Output, CliError> {
        let p = self.profile()?;
        let start = Instant::now();
        let s = invert_series(&homogenize(p), jmax);
        let total = start.elapsed();
        let rows: Vec<Value> = s
            .term_counts()
            .iter()
            .enumerate()
            .map(|(j, n)| json!({ "j": num(j), "terms": num(n) }))
            .collect();
        let mut timing = Map::new();
        timing.insert("series_ms".into(), num(total.as_millis()));
        timing.insert(
            "cumulative_ms".into(),
            Value::Array(s.elapsed().iter().map(|t| num(t.as_millis())).collect()),
        );
        Ok(Output {
            result: json!({ "jmax": num(jmax), "rows": rows }),
            timing,
        })
    }
}

/// All `a ≥ 0` with `⟨w, a⟩ ≤ d`, in lexicographic order.
fn monomials_up_to(w: &[i64], d: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == w.len() {
        out.push(prefix.clone());
        return;
    }
    let wi = w[prefix.len()];
    let mut k = 0;
    while k * wi <= d {
        prefix.push(k);
        monomials_up_to(w, d - k * wi, prefix, out);
        prefix.pop();
        k += 1;
    }
}

impl Command {
    pub fn system(&self) -> &PathBuf {
        match self {
            Command::Check { system }
            | Command::DiscoverWeight { system }
            | Command::Residue { system, .. }
            | Command::NormalForm { system, .. }
            | Command::Trace { system, .. }
            | Command::DualMatrix { system, .. }
            | Command::TraceForm { system, .. }
            | Command::CountRoots { system }
            | Command::Degree { system }
            | Command::Chow { system, .. }
            | Command::Cones { system }
            | Command::Bounds { system, .. }
            | Command::TransformResidue { system, .. }
            | Command::BenchSeries { system, .. } => system,
        }
    }
}
