//! Job files, command dispatch and report documents.
//!
//! A job file is TOML:
//!
//! ```toml
//! [ring]
//! characteristic = 5          # 0 for the rationals
//! variables = ["x", "y"]
//! relations = ["y^2 - x^3"]
//!
//! [map]                       # one image per variable
//! x = "x^5"
//! y = "y^5"
//!
//! [ideal]                     # only read by `phi`
//! generators = ["x^2", "y"]
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, FieldSpec, PolyRing, Polynomial};
use crate::dynamics::{
    entropy_report, hk_estimate, kunz_test, lambda_ladder, nagata_sample_test, phi_cyclic, significant_digits,
    DynamicsError, EntropyRate, KunzVerdict, LambdaSequence,
};
use crate::endomorphism::{ContractingVerdict, Endomorphism, EndomorphismError};
use crate::groebner::GroebnerError;
use crate::local::{LocalRingError, LocalRingPresentation, RegularityVerdict, DEFAULT_N_CAP};
use crate::parse::{parse_polynomial, ParseError};

pub const SCHEMA_VERSION: u32 = 1;

pub fn version_string() -> String {
    format!("entrolab {}", env!("CARGO_PKG_VERSION"))
}

/// The mathematical content of a job file, kept as source text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputSpec {
    pub characteristic: u64,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    /// Images in variable order; `None` when the file has no `[map]`.
    pub map: Option<Vec<String>>,
    pub ideal: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    ring: RawRing,
    map: Option<BTreeMap<String, String>>,
    ideal: Option<RawIdeal>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    characteristic: u64,
    variables: Vec<String>,
    #[serde(default)]
    relations: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    generators: Vec<String>,
}

impl InputSpec {
    pub fn from_toml(src: &str) -> Result<Self, JobError> {
        let raw: RawInput = toml::from_str(src).map_err(|e| JobError::Input(e.message().to_string()))?;
        let map = match raw.map {
            None => None,
            Some(mut entries) => {
                let mut images = Vec::with_capacity(raw.ring.variables.len());
                for v in &raw.ring.variables {
                    let img = entries
                        .remove(v)
                        .ok_or_else(|| JobError::Input(format!("[map] has no image for variable `{v}`")))?;
                    images.push(img);
                }
                if let Some(extra) = entries.keys().next() {
                    return Err(JobError::Input(format!("[map] names `{extra}`, which is not a ring variable")));
                }
                Some(images)
            }
        };
        Ok(InputSpec {
            characteristic: raw.ring.characteristic,
            variables: raw.ring.variables,
            relations: raw.ring.relations,
            map,
            ideal: raw.ideal.map(|i| i.generators),
        })
    }

    /// Renders back to the TOML job format.
    pub fn to_toml(&self) -> String {
        let quote = |s: &str| toml::Value::String(s.to_string()).to_string();
        let list = |xs: &[String]| xs.iter().map(|s| quote(s)).collect::<Vec<_>>().join(", ");
        let mut out = format!(
            "[ring]\ncharacteristic = {}\nvariables = [{}]\nrelations = [{}]\n",
            self.characteristic,
            list(&self.variables),
            list(&self.relations)
        );
        if let Some(map) = &self.map {
            out.push_str("\n[map]\n");
            for (v, img) in self.variables.iter().zip(map) {
                let _ = writeln!(out, "{v} = {}", quote(img));
            }
        }
        if let Some(ideal) = &self.ideal {
            let _ = write!(out, "\n[ideal]\ngenerators = [{}]\n", list(ideal));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Contracting,
    Lambda,
    Entropy,
    Kunz,
    Hk,
    Nagata,
    Phi,
    HilbertSamuel,
    Regularity,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Check,
        Command::Contracting,
        Command::Lambda,
        Command::Entropy,
        Command::Kunz,
        Command::Hk,
        Command::Nagata,
        Command::Phi,
        Command::HilbertSamuel,
        Command::Regularity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Contracting => "contracting",
            Command::Lambda => "lambda",
            Command::Entropy => "entropy",
            Command::Kunz => "kunz",
            Command::Hk => "hk",
            Command::Nagata => "nagata",
            Command::Phi => "phi",
            Command::HilbertSamuel => "hilbert-samuel",
            Command::Regularity => "regularity",
        }
    }

    fn needs_map(self) -> bool {
        !matches!(self, Command::HilbertSamuel | Command::Regularity)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = JobError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| JobError::Input(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    /// Iterate for `lambda`, `nagata` and `phi`.
    pub n: u32,
    /// Longest lambda sequence for `entropy`, `kunz` and `hk`.
    pub max_n: u32,
    /// Largest `N` for `hilbert-samuel`, `regularity` and the Kunz cross-check.
    #[serde(rename = "max_N")]
    pub max_big_n: u32,
    /// Base of the Hilbert-Kunz ratios, as typed: an integer, `a/b` or a decimal.
    pub q: Option<String>,
    pub samples: usize,
    pub seed: u64,
    /// Truncation cap for length ladders.
    pub cap: u32,
}

impl Default for Params {
    fn default() -> Self {
        Params { n: 1, max_n: 3, max_big_n: 6, q: None, samples: 16, seed: 0, cap: DEFAULT_N_CAP }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputMode {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub input: InputSpec,
    pub command: Command,
    pub params: Params,
    pub output: OutputMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JobError {
    #[error("input error: {0}")]
    Input(String),
    #[error("cannot parse {context} `{src}`: {source}")]
    Parse { context: String, src: String, source: ParseError },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ring(#[from] LocalRingError),
    #[error(transparent)]
    Endomorphism(#[from] EndomorphismError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Parses a positive rational given as `7`, `7/2` or `3.5`.
pub fn parse_rational(s: &str) -> Result<BigRational, JobError> {
    let bad = || JobError::Input(format!("`{s}` is not a rational number"));
    let t = s.trim();
    let value = if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = if whole.is_empty() { BigInt::zero() } else { whole.parse().map_err(|_| bad())? };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let sign = if t.starts_with('-') { -BigInt::one() } else { BigInt::one() };
        BigRational::from_integer(whole) + BigRational::new(sign * frac_num, den)
    } else {
        BigRational::from_str(t).map_err(|_| bad())?
    };
    Ok(value)
}

struct Prepared {
    ring: Arc<PolyRing>,
    local: LocalRingPresentation,
}

fn parse_all(ring: &Arc<PolyRing>, srcs: &[String], context: impl Fn(usize) -> String) -> Result<Vec<Polynomial>, JobError> {
    srcs.iter()
        .enumerate()
        .map(|(i, src)| {
            parse_polynomial(src, ring).map_err(|source| JobError::Parse { context: context(i), src: src.clone(), source })
        })
        .collect()
}

fn prepare(input: &InputSpec) -> Result<Prepared, JobError> {
    let field = FieldSpec::new(input.characteristic)?;
    let ring = PolyRing::new(field, input.variables.clone())?;
    let relations = parse_all(&ring, &input.relations, |i| format!("relation {}", i + 1))?;
    let local = LocalRingPresentation::new(&ring, relations)?;
    Ok(Prepared { ring, local })
}

fn endomorphism(input: &InputSpec, prepared: &Prepared) -> Result<Endomorphism, JobError> {
    let srcs = input.map.as_ref().ok_or_else(|| JobError::Input("this command needs a [map] section".into()))?;
    let images = parse_all(&prepared.ring, srcs, |i| format!("image of `{}`", input.variables[i]))?;
    Ok(Endomorphism::validate(prepared.local.clone(), images)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Refused,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorPayload {
    pub kind: String,
    pub message: String,
    pub details: Value,
}

/// Output of [`run`]. Serializes to the JSON report; `text` is the human
/// rendering of the same content.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub version: String,
    pub job: Value,
    pub status: Status,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorPayload>,
    #[serde(skip)]
    pub text: String,
}

impl ReportDocument {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Refused => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable message for standard error, when the job failed.
    pub fn diagnostic(&self) -> Option<String> {
        self.error.as_ref().map(|e| {
            let message = e.message.strip_prefix(&format!("{}: ", e.kind)).unwrap_or(&e.message);
            format!("error[{}]: {message}", e.kind)
        })
    }
}

struct Rendered {
    result: Value,
    labels: Vec<String>,
    text: String,
}

pub fn run(job: &JobSpec) -> ReportDocument {
    let echo = json!({
        "command": job.command,
        "input": job.input,
        "params": job.params,
    });
    let (status, labels, result, error, text) = match execute(job) {
        Ok(r) => (Status::Ok, r.labels, Some(r.result), None, r.text),
        Err(e) => {
            let (payload, refusal) = classify(&e);
            let status = if refusal { Status::Refused } else { Status::Error };
            (status, vec![payload.kind.clone()], None, Some(payload), String::new())
        }
    };
    ReportDocument {
        schema_version: SCHEMA_VERSION,
        version: version_string(),
        job: echo,
        status,
        labels,
        result,
        error,
        text,
    }
}

fn execute(job: &JobSpec) -> Result<Rendered, JobError> {
    let p = &job.params;
    if p.cap < 2 {
        return Err(JobError::Input("--cap must be at least 2".into()));
    }
    let prepared = prepare(&job.input)?;
    let phi = if job.command.needs_map() { Some(endomorphism(&job.input, &prepared)?) } else { None };
    let phi = phi.as_ref();
    match job.command {
        Command::Check => Ok(check(phi.unwrap(), &prepared)),
        Command::Contracting => Ok(contracting(&phi.unwrap().contracting_check()?)),
        Command::Lambda => lambda(phi.unwrap(), p),
        Command::Entropy => {
            let seq = entropy_report(phi.unwrap(), p.max_n, p.cap)?;
            let labels = vec![if seq.exact_if_multiplicative { "MULTIPLICATIVE" } else { "UPPER_BOUND" }.into()];
            Ok(Rendered { result: sequence_json(&seq), labels, text: sequence_text(&seq) })
        }
        Command::Kunz => kunz(phi.unwrap(), p),
        Command::Hk => hk(phi.unwrap(), p),
        Command::Nagata => nagata(phi.unwrap(), p),
        Command::Phi => phi_command(phi.unwrap(), &job.input, &prepared, p),
        Command::HilbertSamuel => hilbert_samuel(&prepared.local, p),
        Command::Regularity => {
            let v = prepared.local.regularity_check(p.max_big_n.max(1))?;
            Ok(Rendered { result: json!(v), labels: vec![regularity_label(&v).into()], text: regularity_text(&v) })
        }
    }
}

fn classify(e: &JobError) -> (ErrorPayload, bool) {
    let payload = |kind: &str, details: Value| ErrorPayload { kind: kind.into(), message: e.to_string(), details };
    match e {
        JobError::Input(_) => (payload("INPUT_ERROR", Value::Null), false),
        JobError::Parse { context, src, source } => (
            payload(
                "PARSE_ERROR",
                json!({ "context": context, "source": src, "position": source.position, "reason": source.kind.to_string() }),
            ),
            false,
        ),
        JobError::Algebra(_) => (payload("INPUT_ERROR", Value::Null), false),
        JobError::Ring(r) => classify_ring(r, payload),
        JobError::Endomorphism(err) => classify_endo(err, payload),
        JobError::Dynamics(d) => match d {
            DynamicsError::NotFiniteLength { n, ladder } => {
                (payload("NOT_FINITE_LENGTH", json!({ "n": n, "ladder": ladder_json(ladder) })), true)
            }
            DynamicsError::IdealNotPrimary { ladder } => {
                (payload("NOT_FINITE_LENGTH", json!({ "ladder": ladder_json(ladder) })), true)
            }
            DynamicsError::QUnavailable { n_max } => (payload("Q_UNAVAILABLE", json!({ "max_n": n_max })), true),
            DynamicsError::InvalidParameter(_) => (payload("INVALID_PARAMETER", Value::Null), false),
            DynamicsError::BoundViolated { len_in, len_out, lambda } => (
                payload(
                    "BOUND_VIOLATED",
                    json!({ "len_in": len_in.to_string(), "len_out": len_out.to_string(), "lambda": lambda.to_string() }),
                ),
                false,
            ),
            DynamicsError::Ring(r) => classify_ring(r, payload),
            DynamicsError::Endomorphism(err) => classify_endo(err, payload),
        },
    }
}

fn classify_ring(r: &LocalRingError, payload: impl Fn(&str, Value) -> ErrorPayload) -> (ErrorPayload, bool) {
    match r {
        LocalRingError::Groebner(GroebnerError::CapacityExceeded { cap }) => {
            (payload("CAPACITY_EXCEEDED", json!({ "cap": cap })), true)
        }
        LocalRingError::Groebner(GroebnerError::Algebra(_)) => (payload("INPUT_ERROR", Value::Null), false),
        LocalRingError::RelationNotInMaximalIdeal(rel) => {
            (payload("RELATION_NOT_IN_MAXIMAL_IDEAL", json!({ "relation": rel })), false)
        }
    }
}

fn classify_endo(e: &EndomorphismError, payload: impl Fn(&str, Value) -> ErrorPayload) -> (ErrorPayload, bool) {
    match e {
        EndomorphismError::NotLocal { variable, image } => {
            (payload("NOT_LOCAL", json!({ "variable": variable, "image": image })), false)
        }
        EndomorphismError::WellDefinedness { relation, normal_form } => (
            payload("WELL_DEFINEDNESS_FAILURE", json!({ "relation": relation, "normal_form": normal_form })),
            false,
        ),
        EndomorphismError::ArityMismatch { expected, got } => {
            (payload("INPUT_ERROR", json!({ "expected": expected, "got": got })), false)
        }
        EndomorphismError::Algebra(_) => (payload("INPUT_ERROR", Value::Null), false),
        EndomorphismError::Ring(r) => classify_ring(r, payload),
    }
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn ladder_json(ladder: &[(u32, u64)]) -> Value {
    Value::Array(ladder.iter().map(|&(n, l)| json!([n, l.to_string()])).collect())
}

fn rate_json(r: &EntropyRate) -> Value {
    json!({ "n": r.n, "lambda": r.lambda.to_string(), "expression": rate_expr(r), "decimal": r.decimal() })
}

fn rate_expr(r: &EntropyRate) -> String {
    format!("log({})/{}", r.lambda, r.n)
}

fn ratio_decimal(q: &BigRational) -> String {
    let approx = q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN);
    significant_digits(approx, 12)
}

fn sequence_json(seq: &LambdaSequence) -> Value {
    json!({
        "lambda": seq.values.iter().map(|&(n, l)| json!([n, l.to_string()])).collect::<Vec<_>>(),
        "rates": seq.rates.iter().map(|r| json!([r.n, rate_json(r)])).collect::<Vec<_>>(),
        "running_upper_bounds": seq.running_upper_bounds.iter().zip(&seq.rates)
            .map(|(b, r)| json!([r.n, rate_json(b)])).collect::<Vec<_>>(),
        "entropy_upper_bound": rate_json(&seq.entropy_upper_bound),
        "exact_if_multiplicative": seq.exact_if_multiplicative,
    })
}

fn sequence_text(seq: &LambdaSequence) -> String {
    let mut out = String::new();
    let width = seq.values.iter().map(|v| v.1.to_string().len()).max().unwrap_or(1).max(13);
    let _ = writeln!(out, "{:>3}  {:>width$}  log(lambda)/n", "n", "lambda(phi^n)");
    for r in &seq.rates {
        let _ = writeln!(out, "{:>3}  {:>width$}  {}", r.n, r.lambda, r.decimal());
    }
    let b = &seq.entropy_upper_bound;
    let _ = writeln!(out, "entropy upper bound: {} = {}", rate_expr(b), b.decimal());
    if seq.exact_if_multiplicative {
        let _ = writeln!(out, "lambda(phi^n) = lambda(phi)^n for every computed n");
    }
    out
}

fn check(phi: &Endomorphism, prepared: &Prepared) -> Rendered {
    let vars = prepared.ring.variables();
    let images = strings(phi.images());
    let mut text = format!("well-defined local endomorphism of {}\n", ring_display(prepared));
    for (v, img) in vars.iter().zip(&images) {
        let _ = writeln!(text, "  {v} -> {img}");
    }
    Rendered {
        result: json!({
            "images": vars.iter().zip(&images).map(|(v, i)| json!([v, i])).collect::<Vec<_>>(),
            "relation_basis": strings(prepared.local.relation_basis().elements()),
        }),
        labels: vec!["WELL_DEFINED".into()],
        text,
    }
}

fn ring_display(prepared: &Prepared) -> String {
    let base = format!("{}[{}]", prepared.ring.field(), prepared.ring.variables().join(","));
    let rels = prepared.local.relations().generators();
    if rels.is_empty() {
        base
    } else {
        format!("{base}/({})", strings(rels).join(", "))
    }
}

fn contracting_label(v: &ContractingVerdict) -> &'static str {
    match v {
        ContractingVerdict::Contracting { .. } => "CONTRACTING",
        ContractingVerdict::NotContracting { .. } => "NOT_CONTRACTING",
    }
}

fn contracting_text(v: &ContractingVerdict) -> String {
    match v {
        ContractingVerdict::Contracting { embedding_dim } => {
            format!("CONTRACTING: phi^{embedding_dim}(m) lies in m^2\n")
        }
        ContractingVerdict::NotContracting { embedding_dim, variable, residue } => format!(
            "NOT_CONTRACTING: phi^{embedding_dim}({variable}) = {residue} modulo m^2\n"
        ),
    }
}

fn contracting(v: &ContractingVerdict) -> Rendered {
    Rendered { result: json!(v), labels: vec![contracting_label(v).into()], text: contracting_text(v) }
}

fn lambda(phi: &Endomorphism, p: &Params) -> Result<Rendered, JobError> {
    let len = lambda_ladder(phi, p.n, p.cap)?;
    let value = len.finite().ok_or(DynamicsError::NotFiniteLength { n: p.n, ladder: len.ladder.clone() })?;
    let stabilized = len.stabilized_at.expect("finite lengths stabilize");
    Ok(Rendered {
        result: json!({
            "n": p.n,
            "lambda": value.to_string(),
            "stabilized_at": stabilized,
            "ladder": ladder_json(&len.ladder),
        }),
        labels: vec![],
        text: format!("lambda(phi^{}) = {value}\n(truncation ladder stabilized at N = {stabilized})\n", p.n),
    })
}

fn regularity_label(v: &RegularityVerdict) -> &'static str {
    match v {
        RegularityVerdict::RegularUpToN { .. } => "REGULAR_UP_TO_N",
        RegularityVerdict::NotRegular { .. } => "NOT_REGULAR",
    }
}

fn regularity_text(v: &RegularityVerdict) -> String {
    match v {
        RegularityVerdict::RegularUpToN { n_max, embedding_dim } => format!(
            "REGULAR_UP_TO_N: length(R/m^N) = binom(N-1+{embedding_dim}, {embedding_dim}) for N <= {n_max}\n"
        ),
        RegularityVerdict::NotRegular { witness, length, expected, embedding_dim } => format!(
            "NOT_REGULAR: length(R/m^{witness}) = {length}, a regular ring of dimension {embedding_dim} has {expected}\n"
        ),
    }
}

fn kunz(phi: &Endomorphism, p: &Params) -> Result<Rendered, JobError> {
    let report = kunz_test(phi, p.max_n, p.max_big_n, p.cap)?;
    let verdict = match &report.verdict {
        KunzVerdict::CertifiedNotRegular { witness, lambda, lambda_one_pow } => json!({
            "label": report.verdict.label(),
            "witness": witness,
            "lambda": lambda.to_string(),
            "lambda_one_pow": lambda_one_pow.to_string(),
        }),
        KunzVerdict::ConsistentWithRegular { up_to } | KunzVerdict::InconclusiveNotContracting { up_to } => {
            json!({ "label": report.verdict.label(), "up_to": up_to })
        }
    };
    let mut text = sequence_text(&report.lambda_seq);
    text.push_str(&contracting_text(&report.contracting));
    match &report.verdict {
        KunzVerdict::CertifiedNotRegular { witness, lambda, lambda_one_pow } => {
            let _ = writeln!(
                text,
                "CERTIFIED_NOT_REGULAR: lambda(phi^{witness}) = {lambda} < {lambda_one_pow} = lambda(phi)^{witness}"
            );
        }
        KunzVerdict::ConsistentWithRegular { up_to } => {
            let _ = writeln!(text, "CONSISTENT_WITH_REGULAR: lambda(phi^n) = lambda(phi)^n for n <= {up_to} (evidence only)");
        }
        KunzVerdict::InconclusiveNotContracting { .. } => {
            let _ = writeln!(text, "INCONCLUSIVE_NOT_CONTRACTING: the test needs a contracting map");
        }
    }
    let _ = write!(text, "cross-check: {}", regularity_text(&report.cross_check));
    Ok(Rendered {
        result: json!({
            "lambda_sequence": sequence_json(&report.lambda_seq),
            "contracting": report.contracting,
            "verdict": verdict,
            "regularity_cross_check": report.cross_check,
        }),
        labels: vec![
            report.verdict.label().into(),
            contracting_label(&report.contracting).into(),
            regularity_label(&report.cross_check).into(),
        ],
        text,
    })
}

fn hk(phi: &Endomorphism, p: &Params) -> Result<Rendered, JobError> {
    let q = p.q.as_deref().map(parse_rational).transpose()?;
    let est = hk_estimate(phi, p.max_n, q, p.cap)?;
    let mut text = format!("q = {} ({})\n{:>3}  lambda(phi^n)/q^n\n", est.q, est.provenance.label(), "n");
    for (n, r) in &est.ratios {
        let _ = writeln!(text, "{n:>3}  {r} ~ {}", ratio_decimal(r));
    }
    Ok(Rendered {
        result: json!({
            "q": est.q.to_string(),
            "q_provenance": est.provenance.label(),
            "ratios": est.ratios.iter().map(|(n, r)| json!([n, r.to_string()])).collect::<Vec<_>>(),
            "ratio_decimals": est.ratios.iter().map(|(n, r)| json!([n, ratio_decimal(r)])).collect::<Vec<_>>(),
            "lambda_sequence": sequence_json(&est.lambda_seq),
        }),
        labels: vec![est.provenance.label().into()],
        text,
    })
}

fn nagata(phi: &Endomorphism, p: &Params) -> Result<Rendered, JobError> {
    let report = nagata_sample_test(phi, p.n, p.samples, p.seed, p.cap)?;
    let sample_json = |s: &crate::dynamics::NagataSample| {
        json!({
            "ideal": strings(&s.ideal),
            "image": strings(&s.image),
            "colength": s.colength.to_string(),
            "lhs": s.lhs.to_string(),
            "rhs": s.rhs.to_string(),
            "equal": s.equal,
        })
    };
    let label = if report.witness.is_some() { "NOT_FLAT_CERTIFIED" } else { "FLAT_ON_SAMPLES" };
    let mut text = format!(
        "lambda(phi^{}) = {}; {} sampled m-primary ideals (seed {})\n",
        report.n,
        report.lambda,
        report.samples.len(),
        p.seed
    );
    match report.witness {
        Some(i) => {
            let s = &report.samples[i];
            let _ = writeln!(
                text,
                "NOT_FLAT_CERTIFIED: sample {i} q = ({}) has length(R/phi^n(q)R) = {} but length(R/q) * lambda = {}",
                strings(&s.ideal).join(", "),
                s.lhs,
                s.rhs
            );
        }
        None => {
            let _ = writeln!(text, "FLAT_ON_SAMPLES: length(R/phi^n(q)R) = length(R/q) * lambda for every sample");
        }
    }
    Ok(Rendered {
        result: json!({
            "n": report.n,
            "lambda": report.lambda.to_string(),
            "seed": p.seed,
            "samples": report.samples.iter().map(sample_json).collect::<Vec<_>>(),
            "witness": report.witness.map(|i| json!({ "index": i, "sample": sample_json(&report.samples[i]) })),
        }),
        labels: vec![label.into()],
        text,
    })
}

fn phi_command(phi: &Endomorphism, input: &InputSpec, prepared: &Prepared, p: &Params) -> Result<Rendered, JobError> {
    let srcs = input.ideal.as_ref().ok_or_else(|| JobError::Input("`phi` needs an [ideal] section".into()))?;
    let gens = parse_all(&prepared.ring, srcs, |i| format!("ideal generator {}", i + 1))?;
    let out = phi_cyclic(phi, &gens, p.n, p.cap)?;
    let label = if out.strict { "STRICT" } else { "EQUAL" };
    let text = format!(
        "phi^{n}(a)R = ({})\nlength(R/a) = {}, length(R/phi^{n}(a)R) = {}, lambda(phi^{n}) = {}\n{label}: {} {} {} * {}\n",
        strings(&out.image).join(", "),
        out.len_in,
        out.len_out,
        out.lambda,
        out.len_out,
        if out.strict { "<" } else { "=" },
        out.len_in,
        out.lambda,
        n = p.n,
    );
    Ok(Rendered {
        result: json!({
            "n": p.n,
            "ideal": strings(&gens),
            "image": strings(&out.image),
            "len_in": out.len_in.to_string(),
            "len_out": out.len_out.to_string(),
            "lambda": out.lambda.to_string(),
        }),
        labels: vec![label.into()],
        text,
    })
}

fn hilbert_samuel(local: &LocalRingPresentation, p: &Params) -> Result<Rendered, JobError> {
    let values = (1..=p.max_big_n.max(1))
        .map(|n| local.hilbert_samuel(n).map(|l| (n, l)))
        .collect::<Result<Vec<_>, _>>()?;
    let edim = local.embedding_dim()?;
    let mut text = format!("embedding dimension {edim}\n{:>3}  length(R/m^N)\n", "N");
    for (n, l) in &values {
        let _ = writeln!(text, "{n:>3}  {l}");
    }
    Ok(Rendered {
        result: json!({ "embedding_dim": edim, "values": ladder_json(&values) }),
        labels: vec![],
        text,
    })
}
