//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations back the page: the amplitude profile of a single
//! collision, the efficiency curve over the rail separation together with its
//! optimum, and output density maps for Gaussian rails. Each has a plain Rust
//! counterpart so the logic is testable off the browser.

use polariton_core::modes::{density_maps, ChannelGeometry, DensityMap, GridSpec, ModeOptions};
use polariton_core::scattering::amplitude_profile;
use polariton_core::sweeps::{optimal_separation, sweep_separation, Optimum};
use polariton_core::{ModelParams, Sign, SolverOptions};
use wasm_bindgen::prelude::*;

/// Radial table size used in the browser; smaller than the library default.
pub const TABLE_NODES: usize = 384;

fn options() -> ModeOptions {
    ModeOptions {
        table_nodes: TABLE_NODES,
        ..Default::default()
    }
}

fn model(d_b: f64) -> Result<ModelParams, String> {
    ModelParams::dimensionless(d_b, Sign::Positive).map_err(|e| e.to_string())
}

fn grid(max: f64, points: usize) -> Result<Vec<f64>, String> {
    if !max.is_finite() || max <= 0.0 || !(2..=2000).contains(&points) {
        return Err(format!(
            "need max > 0 and 2..=2000 points, got {max}, {points}"
        ));
    }
    Ok((0..points)
        .map(|k| max * k as f64 / (points - 1) as f64)
        .collect())
}

/// Rows of `[r, |T|^2, |H|^2, flux]`, flattened.
pub fn amplitude_rows(d_b: f64, r_max: f64, points: usize) -> Result<Vec<f64>, String> {
    let m = model(d_b)?;
    let rs = grid(r_max, points)?;
    let mut out = Vec::with_capacity(4 * points);
    for a in amplitude_profile(&m, &rs, &SolverOptions::default()) {
        let a = a.map_err(|e| e.to_string())?;
        out.extend([a.r_perp, a.t.norm_sqr(), a.h.norm_sqr(), a.flux]);
    }
    Ok(out)
}

/// Rows of `[L, eta, F]`, flattened.
pub fn efficiency_rows(
    d_b: f64,
    waist: f64,
    l_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let m = model(d_b)?;
    let ls = grid(l_max, points)?;
    let rows = sweep_separation(&m, &ls, waist, &options()).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * points);
    for r in rows {
        out.extend([
            r.separation,
            r.eta.unwrap_or(f64::NAN),
            r.figure_of_merit.unwrap_or(f64::NAN),
        ]);
    }
    Ok(out)
}

pub fn optimum(d_b: f64, waist: f64) -> Result<Optimum, String> {
    optimal_separation(&model(d_b)?, waist, None, &options()).map_err(|e| e.to_string())
}

pub fn density(d_b: f64, waist: f64, separation: f64, step: f64) -> Result<DensityMap, String> {
    let g = ChannelGeometry::symmetric(separation, waist).map_err(|e| e.to_string())?;
    let mut grid = GridSpec::around(&g).map_err(|e| e.to_string())?;
    grid.step = step;
    density_maps(&model(d_b)?, &g, &grid, &options()).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = amplitudeProfile)]
pub fn amplitude_profile_js(d_b: f64, r_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    amplitude_rows(d_b, r_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = efficiencyCurve)]
pub fn efficiency_curve_js(
    d_b: f64,
    waist: f64,
    l_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    efficiency_rows(d_b, waist, l_max, points).map_err(|e| JsError::new(&e))
}

/// `[L_opt, eta, F]` at the optimum.
#[wasm_bindgen(js_name = optimalSeparation)]
pub fn optimal_separation_js(d_b: f64, waist: f64) -> Result<Vec<f64>, JsError> {
    let o = optimum(d_b, waist).map_err(|e| JsError::new(&e))?;
    Ok(vec![o.separation, o.eta, o.figure_of_merit])
}

#[wasm_bindgen]
pub struct DensityView {
    map: DensityMap,
}

#[wasm_bindgen]
impl DensityView {
    #[wasm_bindgen(getter)]
    pub fn size(&self) -> usize {
        self.map.points_per_axis
    }

    #[wasm_bindgen(getter)]
    pub fn extent(&self) -> Vec<f64> {
        let g = &self.map.grid;
        vec![
            g.center[0] - g.half_width,
            g.center[0] + g.half_width,
            g.center[1] - g.half_width,
            g.center[1] + g.half_width,
        ]
    }

    pub fn photon(&self) -> Vec<f64> {
        self.map.photon_density.clone()
    }

    #[wasm_bindgen(js_name = spinWave)]
    pub fn spin_wave(&self) -> Vec<f64> {
        self.map.spin_wave_density.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn norm(&self) -> f64 {
        self.map.photon_norm
    }
}

#[wasm_bindgen(js_name = densityMap)]
pub fn density_map_js(
    d_b: f64,
    waist: f64,
    separation: f64,
    step: f64,
) -> Result<DensityView, JsError> {
    density(d_b, waist, separation, step)
        .map(|map| DensityView { map })
        .map_err(|e| JsError::new(&e))
}
