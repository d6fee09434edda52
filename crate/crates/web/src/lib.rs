//! WebAssembly bindings behind `www/index.html`.
//!
//! Every export takes a job file as TOML text and returns a JSON string.
//! Failures come back as `{"error": {"kind": .., "message": ..}}` so the page
//! never has to catch exceptions.

use entrolab::groebner::{maximal_ideal_power, GroebnerError, StandardMonomials, DEFAULT_MONOMIAL_CAP};
use entrolab::job::{run, Command, InputSpec, JobSpec, OutputMode, Params};
use entrolab::local::LocalRingPresentation;
use entrolab::algebra::{FieldSpec, PolyRing, Polynomial};
use entrolab::parse::parse_polynomial;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const DEMO_CAP: u32 = 256;

fn error(kind: &str, message: impl ToString) -> String {
    json!({ "error": { "kind": kind, "message": message.to_string() } }).to_string()
}

fn run_command(job_toml: &str, command: Command, max_n: u32) -> String {
    let input = match InputSpec::from_toml(job_toml) {
        Ok(i) => i,
        Err(e) => return error("INPUT_ERROR", e),
    };
    let params = Params { max_n, cap: DEMO_CAP, ..Params::default() };
    let doc = run(&JobSpec { input, command, params, output: OutputMode::Json });
    serde_json::to_string(&doc).expect("report serializes")
}

/// `lambda(phi^n)` for `n <= max_n` with entropy rates and bounds.
#[wasm_bindgen]
pub fn lambda_sequence(job_toml: &str, max_n: u32) -> String {
    run_command(job_toml, Command::Entropy, max_n)
}

/// Kunz test report.
#[wasm_bindgen]
pub fn kunz(job_toml: &str, max_n: u32) -> String {
    run_command(job_toml, Command::Kunz, max_n)
}

/// Standard monomials of `R/J` for `J` generated by the comma- or
/// newline-separated `generators`, together with the leading monomials of
/// the Groebner basis that cuts them out.
#[wasm_bindgen]
pub fn staircase(job_toml: &str, generators: &str) -> String {
    match staircase_value(job_toml, generators) {
        Ok(v) => v.to_string(),
        Err((kind, message)) => error(kind, message),
    }
}

fn staircase_value(job_toml: &str, generators: &str) -> Result<Value, (&'static str, String)> {
    let input = InputSpec::from_toml(job_toml).map_err(|e| ("INPUT_ERROR", e.to_string()))?;
    let field = FieldSpec::new(input.characteristic).map_err(|e| ("INPUT_ERROR", e.to_string()))?;
    let ring = PolyRing::new(field, input.variables.clone()).map_err(|e| ("INPUT_ERROR", e.to_string()))?;
    let parse = |src: &str| parse_polynomial(src.trim(), &ring).map_err(|e| ("PARSE_ERROR", format!("`{}`: {e}", src.trim())));
    let relations = input.relations.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
    let gens = generators
        .split([',', '\n'])
        .filter(|s| !s.trim().is_empty())
        .map(parse)
        .collect::<Result<Vec<Polynomial>, _>>()?;
    let local = LocalRingPresentation::new(&ring, relations).map_err(|e| ("INPUT_ERROR", e.to_string()))?;
    let len = local.local_length(&gens, DEMO_CAP).map_err(|e| ("INPUT_ERROR", e.to_string()))?;
    let (Some(length), Some(n)) = (len.finite(), len.stabilized_at) else {
        return Err(("NOT_FINITE_LENGTH", format!("the ideal is not m-primary (no stabilization up to N = {DEMO_CAP})")));
    };
    let ideal = local
        .relations()
        .extended(gens.iter().cloned().chain(maximal_ideal_power(&ring, n)))
        .map_err(|e| ("INPUT_ERROR", e.to_string()))?;
    let basis = ideal.basis();
    let monomials = match basis.standard_monomials(DEFAULT_MONOMIAL_CAP) {
        Ok(StandardMonomials::Finite(ms)) => ms,
        Ok(StandardMonomials::Infinite) => unreachable!("m^N is in the ideal"),
        Err(GroebnerError::CapacityExceeded { cap }) => {
            return Err(("CAPACITY_EXCEEDED", format!("more than {cap} standard monomials")))
        }
        Err(e) => return Err(("INPUT_ERROR", e.to_string())),
    };
    Ok(json!({
        "variables": input.variables,
        "length": length.to_string(),
        "truncation": n,
        "standard_monomials": monomials.iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(),
        "leading_monomials": basis.leading_monomials().iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(),
        "basis": basis.elements().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    }))
}
