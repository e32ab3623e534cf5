//! Browser bindings. Every export takes plain values and returns a JSON
//! string; errors surface as JS exceptions.

use cicert_core::bounds::{bounds_report, pattern_landscape};
use cicert_core::macaulay::certify_verdict;
use cicert_core::{Certificate, DegreePattern, PolySystem};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn parse_degrees(d: &str) -> Result<Vec<u32>, String> {
    d.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("bad degree {t:?}")))
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Bounds report for `n`, comma-separated degrees `d` and optional `q`.
pub fn bounds(n: usize, d: &str, q: Option<u64>) -> Result<String, String> {
    let p = DegreePattern::new(n, parse_degrees(d)?).map_err(|e| e.to_string())?;
    bounds_report(&p, q).map(|r| to_json(&r)).map_err(|e| e.to_string())
}

/// All patterns with Bezout number `b`.
pub fn patterns(b: u64, n: usize, s: usize) -> Result<String, String> {
    pattern_landscape(b, n, s)
        .map(|l| to_json(&l))
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Outcome {
    cert: Certificate,
    pass: bool,
    conclusion: &'static str,
    macaulay_degree: u32,
    rank: usize,
    cols: usize,
}

#[derive(Serialize)]
struct Certified {
    field: String,
    n: usize,
    s: usize,
    d: Vec<u32>,
    results: Vec<Outcome>,
}

/// Runs the certificates in `certs` (`all` or a comma list) on a system
/// given in the system file format.
pub fn certify(system: &str, certs: &str) -> Result<String, String> {
    let certs = Certificate::parse_list(certs).map_err(|e| e.to_string())?;
    let sys = PolySystem::from_file_text(system).map_err(|e| e.to_string())?;
    let mut results = Vec::new();
    for cert in certs {
        let v = certify_verdict(&sys, cert).map_err(|e| e.to_string())?;
        results.push(Outcome {
            cert,
            pass: v.empty,
            conclusion: if v.empty { cert.guarantee() } else { "inconclusive" },
            macaulay_degree: v.degree,
            rank: v.rank,
            cols: v.cols,
        });
    }
    let p = sys.pattern();
    Ok(to_json(&Certified {
        field: sys.field().to_string(),
        n: p.n(),
        s: p.s(),
        d: p.degrees().to_vec(),
        results,
    }))
}

#[wasm_bindgen(js_name = boundsReport)]
pub fn bounds_report_js(n: u32, d: &str, q: Option<u32>) -> Result<String, JsError> {
    bounds(n as usize, d, q.map(u64::from)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = patternLandscape)]
pub fn pattern_landscape_js(b: u32, n: u32, s: u32) -> Result<String, JsError> {
    patterns(b.into(), n as usize, s as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = certifySystem)]
pub fn certify_system_js(system: &str, certs: &str) -> Result<String, JsError> {
    certify(system, certs).map_err(|e| JsError::new(&e))
}
