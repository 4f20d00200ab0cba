//! FFT helpers on periodic uniform grids.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::system::SystemParams;
use crate::wavepacket::GridSpec;

/// Angular wavenumbers in FFT order for a grid of period `x_max - x_min`.
pub fn wavenumbers(grid: &GridSpec) -> Vec<f64> {
    let n = grid.n;
    let dk = TAU / grid.length();
    (0..n)
        .map(|j| {
            let j = if j < n / 2 {
                j as f64
            } else {
                j as f64 - n as f64
            };
            j * dk
        })
        .collect()
}

/// Forward/inverse transform pair for one grid size. The inverse is
/// normalized, so `inverse(forward(v)) == v`.
pub struct Transform {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    scale: f64,
}

impl Transform {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Transform {
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); len],
            scale: 1.0 / n as f64,
        }
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, &mut self.scratch);
        for v in data.iter_mut() {
            *v *= self.scale;
        }
    }

    /// Multiplies by `symbol(k)` in Fourier space.
    pub fn apply_symbol(&mut self, data: &mut [Complex64], symbol: &[Complex64]) {
        self.forward(data);
        for (v, s) in data.iter_mut().zip(symbol) {
            *v *= s;
        }
        self.inverse(data);
    }
}

/// `H psi` with the kinetic term applied spectrally.
pub fn apply_hamiltonian(sys: &SystemParams, grid: &GridSpec, psi: &[Complex64]) -> Vec<Complex64> {
    let c = sys.hbar * sys.hbar / (2.0 * sys.mass);
    let symbol: Vec<Complex64> = wavenumbers(grid)
        .into_iter()
        .map(|k| Complex64::new(c * k * k, 0.0))
        .collect();
    let mut out = psi.to_vec();
    Transform::new(grid.n).apply_symbol(&mut out, &symbol);
    for (j, (o, p)) in out.iter_mut().zip(psi).enumerate() {
        *o += p * sys.potential(grid.x(j));
    }
    out
}
