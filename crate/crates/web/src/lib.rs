//! Browser bindings for the certificate demo page in `www/`.
//!
//! Each operation has a plain Rust form returning JSON, and a thin
//! `wasm_bindgen` export that turns errors into JavaScript exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use c21_core::func_core::Interval;
use c21_core::gallery;
use c21_core::radial_ma::{construct, named_profile, verify_radial_with, PROFILES};
use c21_core::sqrt_lift::lift::third;
use c21_core::sqrt_lift::{certify_c21_1d, lift_with, CheckConfig, PositivityMode, SignConvention};

/// Samples per certificate; small enough for an interactive page.
pub const DEMO_SAMPLES: usize = 2049;
/// Largest table or curve the page may request.
pub const MAX_POINTS: usize = 2001;

fn points(n: usize) -> Result<usize, String> {
    if (2..=MAX_POINTS).contains(&n) {
        Ok(n)
    } else {
        Err(format!("point count {n} must lie in [2, {MAX_POINTS}]"))
    }
}

/// Families and radial profiles the page offers.
pub fn catalog() -> Result<Value, String> {
    let fams = gallery::all_families().map_err(|e| e.to_string())?;
    let lifts: Vec<Value> = fams
        .iter()
        .filter(|f| f.fn1d.is_some())
        .map(|f| json!({ "selector": f.selector(), "info": f.describe() }))
        .collect();
    let profiles: Vec<Value> = PROFILES.iter().map(|(n, d)| json!({ "name": n, "description": d })).collect();
    Ok(json!({ "lifts": lifts, "profiles": profiles }))
}

/// Radial solution for a named profile: its report and `n` table rows.
pub fn radial(profile: &str, n: usize) -> Result<Value, String> {
    let n = points(n)?;
    let p = named_profile(profile).map_err(|e| e.to_string())?;
    let sol = construct(&p).map_err(|e| e.to_string())?;
    let report =
        verify_radial_with(&sol, &CheckConfig::default().with_samples(DEMO_SAMPLES)).map_err(|e| e.to_string())?;
    Ok(json!({ "report": report, "table": sol.table(n) }))
}

/// Certificate for the lift of a gallery family on the inner half of its domain,
/// with `n` samples of `u_x`, `u_xx` and `|u_xxx|` for plotting.
pub fn lift_certificate(selector: &str, n: usize) -> Result<Value, String> {
    let n = points(n)?;
    let spec = gallery::family(selector).map_err(|e| e.to_string())?;
    let f = spec.fn1d.ok_or_else(|| format!("family `{selector}` has no one-dimensional function"))?;
    let d = f.domain();
    let i = Interval::centered(d.center(), d.radius() / 2.0).map_err(|e| e.to_string())?;
    let cfg = CheckConfig::default().with_samples(DEMO_SAMPLES);
    let report = match certify_c21_1d(&f, i, PositivityMode::ZeroAllowed, &cfg) {
        Ok(r) => serde_json::to_value(r).expect("report serializes"),
        Err(e) => json!({ "name": "c21_1d", "passed": false, "error": e.to_string() }),
    };
    let l =
        lift_with(&f.with_domain(i), SignConvention::OddAbout(i.center()), DEMO_SAMPLES).map_err(|e| e.to_string())?;
    let curve: Vec<Value> = i
        .linspace(n)
        .into_iter()
        .map(|x| {
            let [v, d1, d2, ..] = f.derivs(x);
            let u3 = if l.is_zero(x) { 0.0 } else { third(v, d1, d2).abs() };
            json!([x, l.u_x(x), l.u_xx_extended(x), u3])
        })
        .collect();
    Ok(json!({ "report": report, "columns": ["x", "u_x", "u_xx", "abs_u_xxx"], "curve": curve }))
}

fn export(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = catalog)]
pub fn catalog_js() -> Result<String, JsError> {
    export(catalog())
}

#[wasm_bindgen(js_name = radial)]
pub fn radial_js(profile: &str, n: usize) -> Result<String, JsError> {
    export(radial(profile, n))
}

#[wasm_bindgen(js_name = liftCertificate)]
pub fn lift_certificate_js(selector: &str, n: usize) -> Result<String, JsError> {
    export(lift_certificate(selector, n))
}
