//! Split-step Fourier integrator for `i hbar dPsi/dt = (p^2/2m + V) Psi`.
//!
//! Strang splitting: half potential kick, full kinetic drift in Fourier space,
//! half potential kick. With `V = 0` the drift is exact, so free-mass runs are
//! exact up to grid truncation for any step count. Nothing here touches the
//! mode functions; the initial packet is built straight from the four
//! initial parameters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{wavenumbers, Transform};
use crate::system::{
    delta, validate_initial, InitialGaussian, SystemKind, SystemParams, Tolerances,
};
use crate::wavepacket::{auto_grid, GridSpec, WaveField, EDGE_DENSITY_RATIO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveSpec {
    pub t_final: f64,
    pub steps: usize,
    /// Fail with `BoundaryLeak` when density reaches the grid edge.
    pub strict: bool,
}

impl EvolveSpec {
    /// `ceil(t_final * max(w, |p0|/(m dx0), 1) * 200)` steps.
    pub fn with_default_steps(
        sys: &SystemParams,
        init: &InitialGaussian,
        t_final: f64,
        strict: bool,
    ) -> Self {
        EvolveSpec {
            t_final,
            steps: default_steps(sys, init, t_final),
            strict,
        }
    }
}

pub fn default_steps(sys: &SystemParams, init: &InitialGaussian, t_final: f64) -> usize {
    let w = if sys.is_oscillator() { sys.omega } else { 0.0 };
    let rate = w.max(init.p0.abs() / (sys.mass * init.dx0)).max(1.0);
    ((t_final.abs() * rate * 200.0).ceil() as usize).max(1)
}

/// Distances between two fields on the same grid. Norms are dx-weighted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub l2_error: f64,
    pub max_error: f64,
    /// `min_phi || a - e^{i phi} b ||`.
    pub phase_aligned_l2: f64,
    /// `||a||^2 - ||b||^2`.
    pub norm_drift: f64,
}

/// Propagates `wf0` by `spec.t_final` in `spec.steps` Strang steps.
pub fn split_step_evolve(
    sys: &SystemParams,
    wf0: &WaveField,
    spec: &EvolveSpec,
) -> Result<WaveField> {
    sys.validate()?;
    let grid = wf0.grid;
    grid.validate()?;
    if wf0.values.len() != grid.n {
        return Err(Error::InvalidGrid(format!(
            "{} samples on a grid of {}",
            wf0.values.len(),
            grid.n
        )));
    }
    if spec.steps == 0 || !spec.t_final.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need finite t_final and steps >= 1, got {} / {}",
            spec.t_final, spec.steps
        )));
    }
    let norm = wf0.norm();
    if (norm - 1.0).abs() > Tolerances::default().norm_eps {
        return Err(Error::NotNormalized { norm });
    }

    let dt = spec.t_final / spec.steps as f64;
    let h = sys.hbar;
    let drift: Vec<Complex64> = wavenumbers(&grid)
        .into_iter()
        .map(|k| Complex64::from_polar(1.0, -h * k * k * dt / (2.0 * sys.mass)))
        .collect();
    let kick: Option<Vec<Complex64>> = match sys.kind {
        SystemKind::FreeMass => None,
        SystemKind::Oscillator => Some(
            grid.points()
                .map(|x| Complex64::from_polar(1.0, -sys.potential(x) * dt / (2.0 * h)))
                .collect(),
        ),
    };

    let mut psi = wf0.values.clone();
    let mut fft = Transform::new(grid.n);
    let check = |psi: &[Complex64], step: usize| -> Result<()> {
        let peak = psi.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        let edge = psi[0].norm_sqr().max(psi[grid.n - 1].norm_sqr());
        let ratio = if peak > 0.0 { edge / peak } else { 0.0 };
        if ratio >= EDGE_DENSITY_RATIO {
            return Err(Error::BoundaryLeak {
                t: wf0.t + step as f64 * dt,
                ratio,
            });
        }
        Ok(())
    };
    if spec.strict {
        check(&psi, 0)?;
    }
    for step in 1..=spec.steps {
        if let Some(kick) = &kick {
            mul(&mut psi, kick);
        }
        fft.apply_symbol(&mut psi, &drift);
        if let Some(kick) = &kick {
            mul(&mut psi, kick);
        }
        if spec.strict {
            check(&psi, step)?;
        }
    }

    Ok(WaveField {
        grid,
        t: wf0.t + spec.t_final,
        values: psi,
    })
}

fn mul(psi: &mut [Complex64], factor: &[Complex64]) {
    for (p, f) in psi.iter_mut().zip(factor) {
        *p *= f;
    }
}

pub fn compare(a: &WaveField, b: &WaveField) -> Result<ComparisonReport> {
    let same_time = (a.t - b.t).abs() <= 1e-12 * a.t.abs().max(1.0);
    if a.grid != b.grid || !same_time || a.values.len() != b.values.len() {
        return Err(Error::GridMismatch);
    }
    let dx = a.grid.dx();
    let l2 = |phase: Complex64| {
        (a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - phase * y).norm_sqr())
            .sum::<f64>()
            * dx)
            .sqrt()
    };
    let overlap: Complex64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| y.conj() * x)
        .sum();
    let best = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let l2_error = l2(Complex64::new(1.0, 0.0));
    Ok(ComparisonReport {
        l2_error,
        max_error: a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max),
        phase_aligned_l2: l2(best).min(l2_error),
        norm_drift: a.norm() - b.norm(),
    })
}

/// The initial packet straight from its four parameters:
///
/// ```text
/// (2 pi dx0^2)^{-1/4} e^{-i phi/2} e^{i p0 x/hbar} e^{-(1 -+ i delta)(x - x0)^2 / (4 dx0^2)}
/// ```
///
/// with `phi = atan2(+-delta, 1 + 2 s dx0^2/hbar)` (`s = m w`, or 1 for the
/// free mass), the principal-branch phase the closed-form packet carries at
/// `t = 0`. The two are therefore comparable without phase alignment.
pub fn initial_packet(
    sys: &SystemParams,
    init: &InitialGaussian,
    grid: &GridSpec,
) -> Result<WaveField> {
    let init = validate_initial(sys, init)?;
    grid.validate()?;
    let h = sys.hbar;
    let vx = init.dx0 * init.dx0;
    let signed_delta = init.corr_sign.signum() * delta(sys, &init);
    let chirp = Complex64::new(1.0, -signed_delta) / (4.0 * vx);
    let phase = signed_delta.atan2(1.0 + 2.0 * sys.quadrature_scale() * vx / h);
    let prefactor = Complex64::from_polar((std::f64::consts::TAU * vx).powf(-0.25), -0.5 * phase);
    let values = grid
        .points()
        .map(|x| {
            let d = x - init.x0;
            prefactor * (Complex64::new(0.0, init.p0 * x / h) - chirp * (d * d)).exp()
        })
        .collect();
    Ok(WaveField {
        grid: *grid,
        t: 0.0,
        values,
    })
}

/// Sampled minimum of the position variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleMinimum {
    pub t_star: f64,
    pub var_star: f64,
}

/// Evolves the free-mass packet numerically over `[0, t_max]` and returns
/// the time sample with the smallest position variance. Uses no closed-form
/// moments.
pub fn oracle_contractive_min(
    sys: &SystemParams,
    init: &InitialGaussian,
    t_max: f64,
    samples: usize,
) -> Result<OracleMinimum> {
    let init = validate_initial(sys, init)?;
    if sys.kind != SystemKind::FreeMass {
        return Err(Error::NotContractive(
            "only the free mass has a contractive state",
        ));
    }
    if delta(sys, &init) == 0.0 {
        return Err(Error::NotContractive(
            "minimum-uncertainty packets only spread",
        ));
    }
    if samples == 0 || t_max.is_nan() || t_max <= 0.0 || !t_max.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need t_max > 0 and samples >= 1, got {t_max} / {samples}"
        )));
    }
    let grid = auto_grid(sys, &init, t_max)?;
    let mut wf = initial_packet(sys, &init, &grid)?;
    let step = EvolveSpec {
        t_final: t_max / samples as f64,
        steps: 1,
        strict: false,
    };
    let mut best = OracleMinimum {
        t_star: 0.0,
        var_star: position_variance(&wf),
    };
    for k in 1..=samples {
        wf = split_step_evolve(sys, &wf, &step)?;
        let var = position_variance(&wf);
        if var < best.var_star {
            best = OracleMinimum {
                t_star: t_max * k as f64 / samples as f64,
                var_star: var,
            };
        }
    }
    Ok(best)
}

fn position_variance(wf: &WaveField) -> f64 {
    let norm: f64 = wf.densities().sum();
    let mean = wf
        .grid
        .points()
        .zip(wf.densities())
        .map(|(x, d)| x * d)
        .sum::<f64>()
        / norm;
    wf.grid
        .points()
        .zip(wf.densities())
        .map(|(x, d)| (x - mean).powi(2) * d)
        .sum::<f64>()
        / norm
}
