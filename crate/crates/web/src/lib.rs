//! WebAssembly bindings for the static demo page in `www/`.
//!
//! The logic lives in plain functions returning `Result<_, String>` so it can
//! be tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use linksig_core::catalog;
use linksig_core::invariants::{hosokawa_two_component, slope};
use linksig_core::sampler::{self, record_color};
use linksig_core::{LaurentPoly, TorusPoint, DEFAULT_TAU};
use wasm_bindgen::prelude::*;

/// Square RGBA image of signatures together with a one-line summary.
#[wasm_bindgen]
pub struct Heatmap {
    side: u32,
    rgba: Vec<u8>,
    summary: String,
}

#[wasm_bindgen]
impl Heatmap {
    #[wasm_bindgen(getter)]
    pub fn side(&self) -> u32 {
        self.side
    }

    #[wasm_bindgen(getter)]
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn summary(&self) -> String {
        self.summary.clone()
    }
}

/// Keys with a two-dimensional picture: two-colored entries with Seifert data,
/// and the Brunnian family on the face where the first coordinate is 1.
pub fn heatmap_keys() -> Vec<String> {
    catalog::list()
        .into_iter()
        .filter(|k| {
            let Ok(e) = catalog::get(k) else { return false };
            match (&e.link, &e.slope) {
                (Some(l), _) if l.mu() == 2 => l.has_seifert(),
                (Some(_), Some(_)) => true,
                _ => false,
            }
        })
        .map(str::to_string)
        .collect()
}

pub fn heatmap_for(key: &str, n: u32) -> Result<Heatmap, String> {
    if !(2..=200).contains(&n) {
        return Err("grid size must be between 2 and 200".into());
    }
    let e = catalog::get(key).map_err(|e| e.to_string())?;
    let link = e.link.as_ref().ok_or("entry has no link data")?;
    let n = n as i64;
    let points: Vec<TorusPoint> = match (link.mu(), &e.slope) {
        (2, _) if link.has_seifert() => sampler::grid(n, 2, false).map_err(|e| e.to_string())?.collect(),
        (3, Some(_)) => sampler::grid(n, 2, false)
            .map_err(|e| e.to_string())?
            .map(|w| {
                let mut t = vec![0.into()];
                t.extend_from_slice(w.turns());
                TorusPoint::new(t).expect("valid turns")
            })
            .collect(),
        _ => return Err(format!("{key} has no two-dimensional signature picture")),
    };
    let records = sampler::sample_map(link, &points, e.slope.as_ref(), DEFAULT_TAU);
    let mut rgba = Vec::with_capacity(records.len() * 4);
    let mut counts = [0usize; 3];
    for r in &records {
        rgba.extend_from_slice(&record_color(r));
        rgba.push(255);
        match r.sigma.filter(|_| r.is_trusted()) {
            Some(s) if s < 0 => counts[0] += 1,
            Some(0) => counts[1] += 1,
            Some(_) => counts[2] += 1,
            None => {}
        }
    }
    let what = if link.mu() == 2 { "interior" } else { "face w1 = 1" };
    Ok(Heatmap {
        side: (n - 1) as u32,
        rgba,
        summary: format!(
            "{key}, {what}, N = {n}: {} negative, {} zero, {} positive",
            counts[0], counts[1], counts[2]
        ),
    })
}

/// Slope of the Brunnian link `l(n)` at the given turns of the remaining colors.
pub fn brunnian_slope(n: u32, q1: &str, q2: &str) -> Result<String, String> {
    let e = catalog::get(&format!("l({n})")).map_err(|e| e.to_string())?;
    let data = e.slope.as_ref().expect("Brunnian entries carry slope data");
    let w: TorusPoint = format!("{q1},{q2}").parse().map_err(|e: linksig_core::Error| e.to_string())?;
    let v = slope(data, &w, DEFAULT_TAU).map_err(|e| e.to_string())?;
    Ok(match v.finite() {
        Some(x) => format!("{:.10}", x).trim_end_matches('0').trim_end_matches('.').to_string(),
        None => "inf".to_string(),
    })
}

/// Hosokawa polynomial of a two-component, two-colored link from its
/// Alexander polynomial and linking number.
pub fn hosokawa_text(delta: &str, lk: i64) -> Result<String, String> {
    let d = LaurentPoly::parse(delta, 2).map_err(|e| e.to_string())?;
    let h = hosokawa_two_component(&d, lk).map_err(|e| e.to_string())?;
    Ok(h.to_string())
}

#[wasm_bindgen(js_name = heatmapKeys)]
pub fn js_heatmap_keys() -> Vec<String> {
    heatmap_keys()
}

#[wasm_bindgen(js_name = heatmap)]
pub fn js_heatmap(key: &str, n: u32) -> Result<Heatmap, JsError> {
    heatmap_for(key, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = brunnianSlope)]
pub fn js_brunnian_slope(n: u32, q1: &str, q2: &str) -> Result<String, JsError> {
    brunnian_slope(n, q1, q2).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = hosokawa)]
pub fn js_hosokawa(delta: &str, lk: i64) -> Result<String, JsError> {
    hosokawa_text(delta, lk).map_err(|e| JsError::new(&e))
}
