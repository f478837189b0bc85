//! Browser bindings for the filtration engines: three string-in/string-out
//! entry points behind `wasm-bindgen`, returning the same JSON reports as the
//! CLI. Errors come back as `{"error": "..."}` objects rather than JS throws,
//! so the page can render them inline.

use diffop_core::filtration::FiltrationMode;
use diffop_core::report::{self, PolyAction, ReportFormat, RunError, DEFAULT_SEED};
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

fn emit(result: Result<report::Report, RunError>) -> String {
    match result {
        Ok(report) => report.emit(ReportFormat::Json),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn parse_mode(mode: &str) -> Result<Option<FiltrationMode>, RunError> {
    match mode {
        "auto" | "" => Ok(None),
        "comm" => Ok(Some(FiltrationMode::Commutative)),
        "nc" => Ok(Some(FiltrationMode::Noncommutative)),
        other => Err(RunError::Usage(format!("unknown mode '{other}'"))),
    }
}

/// Filtration levels of the algebra described by `spec_json`, as a JSON
/// report. `mode` is "auto", "comm" or "nc"; `nmax` 0 means the default
/// dim(A)+1.
#[wasm_bindgen]
pub fn filtration_report(spec_json: &str, mode: &str, nmax: u32, bases: bool) -> String {
    let n_max = if nmax == 0 { None } else { Some(nmax as usize) };
    emit(
        parse_mode(mode)
            .and_then(|m| report::run_filtration(spec_json, m, n_max, bases, DEFAULT_SEED)),
    )
}

/// Level-by-level comparison of all definitions on a commutative algebra.
#[wasm_bindgen]
pub fn compare_report(spec_json: &str, nmax: u32) -> String {
    let n_max = if nmax == 0 { None } else { Some(nmax as usize) };
    emit(report::run_compare(spec_json, n_max, DEFAULT_SEED))
}

/// Divided-power operator playground: normal form and order of `expr`, its
/// action on `apply_to` when nonempty, and the naive-subalgebra test in
/// ℤ-mode.
#[wasm_bindgen]
pub fn poly_playground(expr: &str, apply_to: &str, vars: u32, scalars: &str) -> String {
    let vars = vars as usize;
    let normalized = report::run_poly(
        PolyAction::Normalize {
            expr: expr.to_string(),
        },
        vars,
        scalars,
        DEFAULT_SEED,
    );
    let mut merged = match normalized {
        Err(e) => return json!({ "error": e.to_string() }).to_string(),
        Ok(r) => r.results,
    };
    if !apply_to.trim().is_empty() {
        match report::run_poly(
            PolyAction::Apply {
                expr: expr.to_string(),
                to: apply_to.to_string(),
            },
            vars,
            scalars,
            DEFAULT_SEED,
        ) {
            Err(e) => return json!({ "error": e.to_string() }).to_string(),
            Ok(r) => {
                merged["argument"] = r.results["argument"].clone();
                merged["result"] = r.results["result"].clone();
            }
        }
    }
    if scalars == "Z" {
        match report::run_poly(
            PolyAction::Naive {
                expr: expr.to_string(),
            },
            vars,
            scalars,
            DEFAULT_SEED,
        ) {
            Err(e) => return json!({ "error": e.to_string() }).to_string(),
            Ok(r) => {
                merged["is_naive"] = r.results["is_naive"].clone();
            }
        }
    }
    merged.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filtration_report_works_on_host() {
        let out = filtration_report(r#"{"preset":"dual_numbers"}"#, "auto", 3, false);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["results"]["stabilized_at"], serde_json::json!(2));
    }

    #[test]
    fn errors_come_back_as_json() {
        let out = filtration_report("{", "auto", 2, false);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("error").is_some());
    }

    #[test]
    fn playground_applies_and_tests_naive() {
        let out = poly_playground("tX^2", "X^3", 1, "Z");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"], serde_json::json!("3*X"));
        assert_eq!(v["is_naive"], serde_json::json!(false));
    }
}
