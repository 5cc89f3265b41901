//! Browser bindings. Every export returns JSON text; the plain functions below
//! carry the logic so they can be tested off the browser.

use finegrad::enumerate::{fine_gradings, Family, Options};
use finegrad::octonion_d4;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Larger sizes take minutes on a single thread.
pub const BROWSER_MAX_N: usize = 10;

fn options() -> Options {
    Options { premerge: false, max_n: BROWSER_MAX_N, workers: 1 }
}

pub fn enumerate_json(family: &str, n: usize) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e: finegrad::Error| e.to_string())?;
    let e = fine_gradings(family, n, &options()).map_err(|e| e.to_string())?;
    let v = json!({ "family": e.family, "n": e.n, "count": e.count(), "count_tag": e.count_tag(), "reports": e.reports() });
    Ok(v.to_string())
}

pub fn components_json(family: &str, n: usize, index: usize) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e: finegrad::Error| e.to_string())?;
    let e = fine_gradings(family, n, &options()).map_err(|e| e.to_string())?;
    let c = index.checked_sub(1).and_then(|i| e.classes.get(i)).ok_or(format!("index must be 1..{}", e.count()))?;
    let comps: Vec<_> =
        c.grading.components.iter().map(|(g, b)| json!({ "degree": g.to_string(), "dim": b.len() })).collect();
    Ok(json!({ "report": c.report, "components": comps }).to_string())
}

pub fn d4_json() -> Result<String, String> {
    let rows = octonion_d4::d4_table(&options()).map_err(|e| e.to_string())?;
    Ok(json!({ "count": rows.len(), "rows": rows }).to_string())
}

#[wasm_bindgen]
pub fn enumerate(family: &str, n: usize) -> Result<String, JsError> {
    enumerate_json(family, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn components(family: &str, n: usize, index: usize) -> Result<String, JsError> {
    components_json(family, n, index).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn d4_table() -> Result<String, JsError> {
    d4_json().map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn enumerates() {
        let v = parse(&enumerate_json("sl", 3).unwrap());
        assert_eq!(v["count"], 4);
        assert!(enumerate_json("gl", 3).is_err());
        assert!(enumerate_json("sl", 12).unwrap_err().contains("12"));
    }

    #[test]
    fn lists_components() {
        let v = parse(&components_json("sl", 2, 2).unwrap());
        assert_eq!(v["components"].as_array().unwrap().len(), 3);
        assert!(components_json("sl", 2, 0).is_err());
    }

    #[test]
    fn d4_rows() {
        assert_eq!(parse(&d4_json().unwrap())["count"], 17);
    }
}
