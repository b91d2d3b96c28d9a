//! Browser bindings: three interactive runs (echo distribution, per-kick
//! `P(0)`, FWHM sweep) returned as flat `Float64Array`s for plotting.

use qkr_core::experiment::{self, ExperimentParams};
use qkr_core::MidpointMode;
use wasm_bindgen::prelude::*;

fn params(
    kicks: usize,
    epsilon: f64,
    phi: f64,
    sigma_p: f64,
    members: usize,
    n_max: usize,
) -> ExperimentParams {
    ExperimentParams {
        kicks,
        epsilon,
        phi,
        sigma_p,
        members,
        n_max,
        midpoint_mode: MidpointMode::Replace,
        ..Default::default()
    }
}

fn to_js(err: qkr_core::QkrError) -> JsValue {
    JsValue::from_str(&err.to_string())
}

/// Echo run restricted to `|p| <= window` recoils.
#[wasm_bindgen]
pub struct EchoView {
    p: Vec<f64>,
    initial: Vec<f64>,
    raw: Vec<f64>,
    convolved: Vec<f64>,
    fwhm: f64,
    fwhm_unconvolved: f64,
    p0: f64,
}

#[wasm_bindgen]
impl EchoView {
    /// Momentum grid, recoils.
    #[wasm_bindgen(getter)]
    pub fn p(&self) -> Vec<f64> {
        self.p.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn initial(&self) -> Vec<f64> {
        self.initial.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn raw(&self) -> Vec<f64> {
        self.raw.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn convolved(&self) -> Vec<f64> {
        self.convolved.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn fwhm(&self) -> f64 {
        self.fwhm
    }
    #[wasm_bindgen(getter, js_name = fwhmUnconvolved)]
    pub fn fwhm_unconvolved(&self) -> f64 {
        self.fwhm_unconvolved
    }
    #[wasm_bindgen(getter)]
    pub fn p0(&self) -> f64 {
        self.p0
    }
}

#[wasm_bindgen(js_name = echoDistribution)]
pub fn echo_distribution(
    kicks: usize,
    epsilon: f64,
    phi: f64,
    sigma_p: f64,
    members: usize,
    n_max: usize,
    window: f64,
) -> Result<EchoView, JsValue> {
    let out =
        experiment::echo(&params(kicks, epsilon, phi, sigma_p, members, n_max)).map_err(to_js)?;
    let keep: Vec<usize> = out
        .final_raw
        .grid()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.abs() <= window)
        .map(|(i, _)| i)
        .collect();
    let pick = |v: &[f64]| keep.iter().map(|&i| v[i]).collect::<Vec<_>>();
    Ok(EchoView {
        p: pick(out.final_raw.grid()),
        initial: pick(out.initial.density()),
        raw: pick(out.final_raw.density()),
        convolved: pick(out.final_convolved.density()),
        fwhm: out.analysis.fwhm,
        fwhm_unconvolved: out.fwhm_unconvolved,
        p0: out.analysis.p0_fraction,
    })
}

/// `P(0)` after each kick, one value per kick.
#[wasm_bindgen(js_name = p0Sequence)]
pub fn p0_sequence(
    kicks: usize,
    epsilon: f64,
    phi: f64,
    sigma_p: f64,
    members: usize,
    n_max: usize,
) -> Result<Vec<f64>, JsValue> {
    let rows = experiment::p0_sequence(&params(kicks, epsilon, phi, sigma_p, members, n_max))
        .map_err(to_js)?;
    Ok(rows.into_iter().map(|(_, p)| p).collect())
}

/// Flattened rows `[ε, fwhm_convolved, fwhm_unconvolved, p0, ...]`.
#[wasm_bindgen(js_name = fwhmSweep)]
pub fn fwhm_sweep(
    kicks: usize,
    phi: f64,
    sigma_p: f64,
    members: usize,
    n_max: usize,
    epsilons: Vec<f64>,
) -> Result<Vec<f64>, JsValue> {
    let rows = experiment::fwhm_sweep(&params(kicks, 1.0, phi, sigma_p, members, n_max), &epsilons)
        .map_err(to_js)?;
    Ok(rows
        .into_iter()
        .flat_map(|r| {
            [
                r.epsilon,
                r.fwhm_convolved,
                r.fwhm_unconvolved,
                r.p0_fraction,
            ]
        })
        .collect())
}
