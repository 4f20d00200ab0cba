//! Browser bindings. [`PacketView`] holds all the logic and is plain Rust so
//! it can be tested natively; [`Packet`] is the thin `wasm_bindgen` wrapper
//! the page talks to.

use gausspacket::dynamics::contractive_analysis;
use gausspacket::wavepacket::{auto_grid_span, evaluate_packet, GridSpec, PhaseTracker};
use gausspacket::{
    coherent_alpha, delta, moments, solve_squeeze, validate_initial, CorrSign, InitialGaussian,
    SqueezeParams, SystemParams,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Grid points used for drawing; plenty for a canvas a few hundred pixels wide.
pub const DISPLAY_POINTS: usize = 512;

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub delta: f64,
    pub r: f64,
    pub theta: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    /// Present only for a contracting free packet.
    pub tau: Option<f64>,
    pub var_min: Option<f64>,
    pub window: f64,
}

pub struct PacketView {
    sys: SystemParams,
    init: InitialGaussian,
    sq: SqueezeParams,
    window: f64,
    grid: GridSpec,
    tracker: PhaseTracker,
}

impl PacketView {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        oscillator: bool,
        mass: f64,
        omega: f64,
        hbar: f64,
        x0: f64,
        p0: f64,
        dx0: f64,
        dp0: f64,
        plus: bool,
    ) -> Result<Self, String> {
        let sys = if oscillator {
            SystemParams::oscillator(mass, omega, hbar)
        } else {
            SystemParams::free_mass(mass, hbar)
        }
        .map_err(|e| e.to_string())?;
        let sign = if plus {
            CorrSign::Plus
        } else {
            CorrSign::Minus
        };
        let init = validate_initial(&sys, &InitialGaussian::new(x0, p0, dx0, dp0, sign))
            .map_err(|e| e.to_string())?;
        let sq = solve_squeeze(&sys, &init).map_err(|e| e.to_string())?;
        let window = match sys.period() {
            Some(period) => 2.0 * period,
            None => 5.0 * mass,
        };
        let auto = auto_grid_span(&sys, &init, 0.0, window).map_err(|e| e.to_string())?;
        let grid =
            GridSpec::new(auto.x_min, auto.x_max, DISPLAY_POINTS).map_err(|e| e.to_string())?;
        Ok(PacketView {
            sys,
            init,
            sq,
            window,
            grid,
            tracker: PhaseTracker::new(),
        })
    }

    pub fn summary(&self) -> Summary {
        let alpha = coherent_alpha(&self.sys, &self.sq, self.init.x0, self.init.p0).alpha;
        let contract = contractive_analysis(&self.sys, &self.init).ok();
        Summary {
            delta: delta(&self.sys, &self.init),
            r: self.sq.r,
            theta: self.sq.theta,
            alpha_re: alpha.re,
            alpha_im: alpha.im,
            tau: contract.map(|c| c.tau),
            var_min: contract.map(|c| c.var_min),
            window: self.window,
        }
    }

    /// `samples` pairs `(t, var_x)` over `[0, window]`, flattened.
    pub fn variance_curve(&self, samples: usize) -> Vec<f64> {
        let samples = samples.max(2);
        let mut out = Vec::with_capacity(2 * samples);
        for k in 0..samples {
            let t = self.window * k as f64 / (samples - 1) as f64;
            let var_x = moments(&self.sys, &self.init, t).map_or(f64::NAN, |m| m.var_x);
            out.extend([t, var_x]);
        }
        out
    }

    /// Rows `(x, re, im, density)` at time `t`, flattened. Successive calls
    /// share one phase tracker, so scrubbing in time keeps the phase smooth.
    pub fn wavefield(&mut self, t: f64) -> Result<Vec<f64>, String> {
        let wf = evaluate_packet(
            &self.sys,
            &self.init,
            t,
            &self.grid,
            &mut self.tracker,
            false,
        )
        .map_err(|e| e.to_string())?;
        let mut out = Vec::with_capacity(4 * self.grid.n);
        for (x, v) in self.grid.points().zip(&wf.values) {
            out.extend([x, v.re, v.im, v.norm_sqr()]);
        }
        Ok(out)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
}

#[wasm_bindgen]
pub struct Packet {
    view: PacketView,
}

#[wasm_bindgen]
impl Packet {
    #[wasm_bindgen(constructor)]
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        oscillator: bool,
        mass: f64,
        omega: f64,
        hbar: f64,
        x0: f64,
        p0: f64,
        dx0: f64,
        dp0: f64,
        plus: bool,
    ) -> Result<Packet, JsError> {
        PacketView::new(oscillator, mass, omega, hbar, x0, p0, dx0, dp0, plus)
            .map(|view| Packet { view })
            .map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = summaryJson)]
    pub fn summary_json(&self) -> String {
        serde_json::to_string(&self.view.summary()).unwrap_or_default()
    }

    #[wasm_bindgen(js_name = varianceCurve)]
    pub fn variance_curve(&self, samples: usize) -> Vec<f64> {
        self.view.variance_curve(samples)
    }

    pub fn wavefield(&mut self, t: f64) -> Result<Vec<f64>, JsError> {
        self.view.wavefield(t).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = gridBounds)]
    pub fn grid_bounds(&self) -> Vec<f64> {
        let g = self.view.grid();
        vec![g.x_min, g.x_max]
    }
}
