//! Browser bindings. Every function takes and returns JSON text so the page
//! needs no generated types; failures come back as `{"error": {...}}`.

use sigmatrop::job::{run_str, JobError, RunOptions};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(job: serde_json::Value) -> String {
    match run_str(&job.to_string(), RunOptions::default()) {
        Ok(doc) => serde_json::to_string(&doc.result).expect("results serialize"),
        Err(e) => error_json(&e),
    }
}

fn error_json(e: &JobError) -> String {
    e.to_json().to_string()
}

/// Runs a whole job document and returns the result document.
#[wasm_bindgen]
pub fn run_job(job: &str) -> String {
    match run_str(job, RunOptions::default()) {
        Ok(doc) => doc.to_json(),
        Err(e) => error_json(&e),
    }
}

/// Tropical curve of a polynomial in x, y under the trivial or a p-adic
/// valuation (`p = 0` for trivial).
#[wasm_bindgen]
pub fn tropical_curve(poly: &str, p: u32) -> String {
    let valuation = if p == 0 {
        serde_json::json!({ "kind": "trivial" })
    } else {
        serde_json::json!({ "kind": "p_adic", "p": p })
    };
    respond(serde_json::json!({
        "version": 1,
        "command": "trop",
        "payload": { "generators": [poly], "rank": 2, "valuation": valuation },
    }))
}

/// Σ⁰ of `ℤ[ρ₁^±, …, ρₙ^±]`, the rationals given comma-separated.
#[wasm_bindgen]
pub fn sigma_scalar(rhos: &str) -> String {
    let rhos: Vec<&str> = rhos.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    respond(serde_json::json!({
        "version": 1,
        "command": "group",
        "payload": { "module": { "kind": "scalar", "rhos": rhos } },
    }))
}

/// Amoeba sample of a polynomial in x, y with its limit directions.
#[wasm_bindgen]
pub fn amoeba(poly: &str, s_max: f64, steps: u32, angles: u32) -> String {
    respond(serde_json::json!({
        "version": 1,
        "command": "amoeba",
        "payload": {
            "f": poly,
            "s_min": -s_max,
            "s_max": s_max,
            "steps": steps,
            "angles": angles,
            "fibration": "both",
            "min_radius": s_max * 0.6,
        },
    }))
}
