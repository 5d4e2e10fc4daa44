//! WebAssembly bindings for the billiards demo page in `www/`.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(e: billiards_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// A validated oval with a single Fourier mode of perturbation.
#[wasm_bindgen]
pub struct Billiard {
    table: demo::Table,
}

#[wasm_bindgen]
impl Billiard {
    #[wasm_bindgen(constructor)]
    pub fn new(surface: &str, rho0: f64, j: i32, re: f64, im: f64, epsilon: f64) -> Result<Billiard, JsError> {
        let kind = demo::surface_from_name(surface)
            .ok_or_else(|| JsError::new(&format!("unknown surface `{surface}`")))?;
        let table = demo::Table::new(kind, rho0, j as i64, re, im, epsilon).map_err(js)?;
        Ok(Billiard { table })
    }

    pub fn outline(&self, samples: usize) -> Vec<f64> {
        self.table.outline(samples)
    }

    pub fn orbit(&self, theta0: f64, psi0: f64, steps: usize) -> Result<Vec<f64>, JsError> {
        self.table.orbit(theta0, psi0, steps).map_err(js)
    }

    #[wasm_bindgen(js_name = phasePortrait)]
    pub fn phase_portrait(&self, theta0: f64, orbits: usize, steps: usize) -> Result<Vec<f64>, JsError> {
        self.table.phase_portrait(theta0, orbits, steps).map_err(js)
    }

    pub fn melnikov(&self, m: u32, n: u32, grid: usize) -> Result<Melnikov, JsError> {
        self.table.melnikov(m, n, grid).map(|inner| Melnikov { inner }).map_err(js)
    }
}

#[wasm_bindgen]
pub struct Melnikov {
    inner: demo::MelnikovCurves,
}

#[wasm_bindgen]
impl Melnikov {
    #[wasm_bindgen(getter)]
    pub fn thetas(&self) -> Vec<f64> {
        self.inner.thetas.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn predicted(&self) -> Vec<f64> {
        self.inner.predicted.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn numerical(&self) -> Vec<f64> {
        self.inner.numerical.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn constant(&self) -> f64 {
        self.inner.constant
    }

    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.inner.verdict.to_string()
    }
}
