//! Browser bindings. Every function takes and returns plain strings or
//! numbers so the page needs no generated type glue beyond wasm-bindgen.

use classnet_core::interchange::import_pajek;
use classnet_core::metrics::{annotate, communities};
use classnet_core::survey::score_audit;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Parses a Pajek network and returns the annotated graph plus its
/// communities as JSON.
pub fn analyze_pajek_json(text: &str) -> Result<String, String> {
    let g = import_pajek(text, "upload").map_err(|e| e.to_string())?;
    let annotated = annotate(&g);
    let partition = communities(&g);
    Ok(json!({ "graph": annotated, "communities": partition }).to_string())
}

/// Mutual ties of a weighted directed network at `min_weight`, annotated.
pub fn mutual_ties_json(text: &str, min_weight: u8) -> Result<String, String> {
    let g = import_pajek(text, "upload").map_err(|e| e.to_string())?;
    let projected = g.mutual_projection(min_weight).map_err(|e| e.to_string())?;
    Ok(json!({ "min_weight": min_weight, "graph": annotate(&projected) }).to_string())
}

pub fn audit_json(items: &[i32]) -> Result<String, String> {
    let items: Vec<i64> = items.iter().map(|&x| i64::from(x)).collect();
    let result = score_audit(&items).map_err(|e| e.to_string())?;
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn analyze_pajek(text: &str) -> Result<String, JsError> {
    analyze_pajek_json(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mutual_ties(text: &str, min_weight: u8) -> Result<String, JsError> {
    mutual_ties_json(text, min_weight).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn audit(items: &[i32]) -> Result<String, JsError> {
    audit_json(items).map_err(|e| JsError::new(&e))
}
