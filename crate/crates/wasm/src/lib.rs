//! Browser bindings for keycomp. Every export takes text and returns a JSON
//! document; errors surface as thrown JavaScript errors.

use keycomp::io::{
    emit_report, parse_comparison, parse_sim_spec, ComparisonFormat, ReportFormat, SimOverrides,
};
use keycomp::{AnalysisOptions, EffectModel};
use wasm_bindgen::prelude::*;

fn comparison_format(text: &str) -> ComparisonFormat {
    if text.trim_start().starts_with('{') {
        ComparisonFormat::Json
    } else {
        ComparisonFormat::Csv
    }
}

fn parse_model(model: &str) -> Result<Option<EffectModel>, String> {
    if model.is_empty() {
        Ok(None)
    } else {
        model
            .parse::<EffectModel>()
            .map(Some)
            .map_err(|e| e.to_string())
    }
}

fn to_text(bytes: Vec<u8>) -> String {
    String::from_utf8(bytes).expect("reports are UTF-8")
}

pub fn analyze_text(input: &str, model: &str, k: f64, alpha: f64) -> Result<String, String> {
    let comparison = parse_comparison(
        input.as_bytes(),
        comparison_format(input),
        parse_model(model)?,
    )
    .map_err(|e| e.to_string())?;
    let report = keycomp::analyze(
        &comparison,
        &AnalysisOptions {
            coverage_factor: k,
            alpha,
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(to_text(emit_report(&report, ReportFormat::Json)))
}

pub fn expected_doe_text(input: &str, model: &str) -> Result<String, String> {
    let comparison = parse_comparison(
        input.as_bytes(),
        comparison_format(input),
        parse_model(model)?,
    )
    .map_err(|e| e.to_string())?;
    let expected = keycomp::expected_doe(&comparison).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&expected).map_err(|e| e.to_string())
}

/// `n_reps` and `seed` of zero keep the values from the spec.
pub fn verify_text(spec: &str, n_reps: u32, seed: u32, z: f64) -> Result<String, String> {
    let overrides = SimOverrides {
        model: None,
        n_reps: (n_reps > 0).then_some(n_reps.into()),
        seed: (seed > 0).then_some(seed.into()),
    };
    let spec = parse_sim_spec(spec.as_bytes(), overrides).map_err(|e| e.to_string())?;
    let report = keycomp::verify_model(&spec, z).map_err(|e| e.to_string())?;
    Ok(to_text(emit_report(&report, ReportFormat::Json)))
}

/// Reference value, degrees of equivalence and consistency check for a CSV
/// or JSON comparison.
#[wasm_bindgen]
pub fn analyze(input: &str, model: &str, k: f64, alpha: f64) -> Result<String, JsError> {
    analyze_text(input, model, k, alpha).map_err(|e| JsError::new(&e))
}

/// Model expectations of the deviations; every laboratory needs a budget.
#[wasm_bindgen]
pub fn expected_doe(input: &str, model: &str) -> Result<String, JsError> {
    expected_doe_text(input, model).map_err(|e| JsError::new(&e))
}

/// Simulates a spec and checks the predicted moments.
#[wasm_bindgen]
pub fn verify(spec: &str, n_reps: u32, seed: u32, z: f64) -> Result<String, JsError> {
    verify_text(spec, n_reps, seed, z).map_err(|e| JsError::new(&e))
}
