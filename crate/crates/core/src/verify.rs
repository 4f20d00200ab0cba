//! Numerical self-checks run by `gausspacket verify`.
//!
//! Each check reduces to one worst-case number compared against a threshold.
//! Everything is deterministic: sweeps use fixed grids, never an RNG.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{moments, moments_closed_form, MomentSet};
use crate::error::Result;
use crate::modes::{general_mode, wronskian};
use crate::oracle::{compare, default_steps, initial_packet, split_step_evolve, EvolveSpec};
use crate::spectral::apply_hamiltonian;
use crate::squeeze::{solve_squeeze, variances_from_squeeze, SqueezeParams};
use crate::system::{validate_initial_with, InitialGaussian, SystemKind, SystemParams, Tolerances};
use crate::wavepacket::{
    auto_grid, auto_grid_with_margin, evaluate_packet, grid_moments, PhaseTracker,
};

pub const ROUND_TRIP_EPS: f64 = 1e-10;
pub const DUAL_PATH_EPS: f64 = 1e-10;
pub const SATURATION_EPS: f64 = 1e-10;
pub const GRID_MOMENT_EPS: f64 = 1e-6;
pub const RESIDUAL_EPS: f64 = 1e-4;
pub const RESIDUAL_STEP: f64 = 1e-3;
pub const RESIDUAL_GRID_SIGMAS: f64 = 12.0;
/// Halving the Strang step should cut the error by 4 within 20%.
pub const CONVERGENCE_RANGE: (f64, f64) = (3.2, 4.8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: String,
    pub passed: bool,
}

impl CheckResult {
    fn below(name: &str, value: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            value,
            threshold: format!("< {threshold:e}"),
            passed: value < threshold,
        }
    }

    fn within(name: &str, value: f64, (lo, hi): (f64, f64)) -> Self {
        CheckResult {
            name: name.to_string(),
            value,
            threshold: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Time window used for sweeps: `[0, 5m]` for the free mass, two periods for
/// the oscillator.
pub fn check_window(sys: &SystemParams) -> f64 {
    match sys.kind {
        SystemKind::FreeMass => 5.0 * sys.mass,
        SystemKind::Oscillator => 2.0 * TAU / sys.omega,
    }
}

pub fn run_verification(
    sys: &SystemParams,
    init: &InitialGaussian,
    tol: &Tolerances,
    level: VerifyLevel,
) -> Result<VerifyReport> {
    tol.validate()?;
    let init = validate_initial_with(sys, init, tol.uncertainty_eps)?;
    let mut checks = vec![
        CheckResult::below(
            "wronskian",
            wronskian_defect(sys, &init)?,
            tol.wronskian_eps,
        ),
        CheckResult::below(
            "representation_round_trip",
            round_trip_defect(sys, &init)?,
            ROUND_TRIP_EPS,
        ),
        CheckResult::below(
            "dual_path_moments",
            dual_path_defect(sys, &init)?,
            DUAL_PATH_EPS,
        ),
        CheckResult::below(
            "robertson_schroedinger",
            saturation_defect(sys, &init)?,
            SATURATION_EPS,
        ),
        CheckResult::below(
            "normalization",
            normalization_defect(sys, &init)?,
            tol.norm_eps,
        ),
        CheckResult::below(
            "grid_moments",
            grid_moment_defect(sys, &init)?,
            GRID_MOMENT_EPS,
        ),
        CheckResult::below(
            "oracle_agreement",
            oracle_defect(sys, &init)?,
            tol.oracle_l2_eps,
        ),
        CheckResult::below(
            "schroedinger_residual",
            schroedinger_residual(
                sys,
                &init,
                0.1 * check_window(sys),
                residual_step(sys, &init),
            )?,
            RESIDUAL_EPS,
        ),
    ];
    if level == VerifyLevel::Full {
        checks.push(CheckResult::within(
            "strang_convergence",
            strang_convergence_factor(sys, &init)?,
            CONVERGENCE_RANGE,
        ));
    }
    Ok(VerifyReport { checks })
}

fn sweep_times(sys: &SystemParams, count: usize) -> impl Iterator<Item = f64> {
    let t_max = check_window(sys);
    (0..=count).map(move |k| t_max * k as f64 / count as f64)
}

fn relative(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Largest gap between two moment sets; variances relative to themselves,
/// correlation relative to `sqrt(var_x var_p)`.
pub fn moment_gap(a: &MomentSet, b: &MomentSet) -> f64 {
    let cov_scale = (a.var_x * a.var_p).sqrt();
    relative(a.var_x, b.var_x, a.var_x.abs().max(b.var_x.abs()))
        .max(relative(a.var_p, b.var_p, a.var_p.abs().max(b.var_p.abs())))
        .max(relative(a.cov_xp, b.cov_xp, cov_scale))
}

/// `max |m(u u'* - u' u*) - i|` over `t` in `[-10, 10]` for the packet's own
/// squeeze and a fixed `(r, theta)` lattice.
pub fn wronskian_defect(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let own = solve_squeeze(sys, init)?;
    let lattice = (0..=6).flat_map(|i| {
        (0..8).map(move |j| SqueezeParams::new(0.5 * i as f64, TAU * j as f64 / 8.0))
    });
    let mut worst: f64 = 0.0;
    for sq in std::iter::once(own).chain(lattice) {
        for k in -20..=20 {
            let mv = general_mode(sys, &sq, 0.5 * k as f64);
            worst = worst.max((wronskian(sys, &mv) - Complex64::i()).norm());
        }
    }
    Ok(worst)
}

pub fn round_trip_defect(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let sq = solve_squeeze(sys, init)?;
    let v = variances_from_squeeze(sys, &sq);
    let back = solve_squeeze(
        sys,
        &InitialGaussian {
            dx0: v.var_x.sqrt(),
            dp0: v.var_p.sqrt(),
            ..*init
        },
    )?;
    let cov = init.initial_correlation(sys);
    Ok(relative(v.var_x, init.dx0 * init.dx0, v.var_x)
        .max(relative(v.var_p, init.dp0 * init.dp0, v.var_p))
        .max(relative(v.cov_xp, cov, (v.var_x * v.var_p).sqrt()))
        .max(relative(back.r, sq.r, sq.r.max(1.0)))
        .max(angle_gap(back.theta, sq.theta)))
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn dual_path_defect(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in sweep_times(sys, 200) {
        for t in [t, -t] {
            worst = worst.max(moment_gap(
                &moments(sys, init, t)?,
                &moments_closed_form(sys, init, t),
            ));
        }
    }
    Ok(worst)
}

/// `max |var_x var_p - cov^2 - hbar^2/4| / (hbar^2/4)`.
pub fn saturation_defect(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let bound = sys.hbar * sys.hbar / 4.0;
    let mut worst: f64 = 0.0;
    for t in sweep_times(sys, 200) {
        let ms = moments(sys, init, t)?;
        worst = worst.max((ms.uncertainty_determinant() - bound).abs() / bound);
    }
    Ok(worst)
}

pub fn normalization_defect(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let grid = auto_grid(sys, init, check_window(sys))?;
    let mut tracker = PhaseTracker::new();
    let mut worst: f64 = 0.0;
    for t in sweep_times(sys, 20) {
        let wf = evaluate_packet(sys, init, t, &grid, &mut tracker, true)?;
        worst = worst.max((wf.norm() - 1.0).abs());
    }
    Ok(worst)
}

pub fn grid_moment_defect(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let grid = auto_grid(sys, init, check_window(sys))?;
    let mut tracker = PhaseTracker::new();
    let mut worst: f64 = 0.0;
    for t in sweep_times(sys, 5) {
        let wf = evaluate_packet(sys, init, t, &grid, &mut tracker, true)?;
        let g = grid_moments(&wf, sys.hbar)?;
        let e = moments(sys, init, t)?;
        let spread = e.var_x.sqrt();
        let dp = e.var_p.sqrt();
        worst = worst
            .max(moment_gap(&g, &e))
            .max(relative(g.mean_x, e.mean_x, spread))
            .max(relative(g.mean_p, e.mean_p, dp));
    }
    Ok(worst)
}

/// Free mass: l2 distance at `t = 1`. Oscillator: phase-aligned l2 distance
/// after one period.
pub fn oracle_defect(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let t_final = match sys.kind {
        SystemKind::FreeMass => 1.0,
        SystemKind::Oscillator => TAU / sys.omega,
    };
    let steps = match sys.kind {
        SystemKind::FreeMass => default_steps(sys, init, t_final),
        SystemKind::Oscillator => default_steps(sys, init, t_final).max(ORACLE_OSC_STEPS),
    };
    let grid = auto_grid(sys, init, t_final)?;
    let start = initial_packet(sys, init, &grid)?;
    let evolved = split_step_evolve(
        sys,
        &start,
        &EvolveSpec {
            t_final,
            steps,
            strict: true,
        },
    )?;
    let analytic = evaluate_packet(sys, init, t_final, &grid, &mut PhaseTracker::new(), true)?;
    let report = compare(&evolved, &analytic)?;
    Ok(match sys.kind {
        SystemKind::FreeMass => report.l2_error,
        SystemKind::Oscillator => report.phase_aligned_l2,
    })
}

/// Step count for the one-period oscillator comparison.
pub const ORACLE_OSC_STEPS: usize = 4000;

/// `1e-3` in units of the packet's fastest time scale (the same rate that sets
/// the default split-step count); exactly `1e-3` for unit parameters.
pub fn residual_step(sys: &SystemParams, init: &InitialGaussian) -> f64 {
    let w = if sys.is_oscillator() { sys.omega } else { 0.0 };
    let rate = w.max(init.p0.abs() / (sys.mass * init.dx0)).max(1.0);
    RESIDUAL_STEP / rate
}

/// `||i hbar dPsi/dt - H Psi|| / ||H Psi||` with a central difference of step `h`.
pub fn schroedinger_residual(
    sys: &SystemParams,
    init: &InitialGaussian,
    t: f64,
    h: f64,
) -> Result<f64> {
    let grid = auto_grid_with_margin(sys, init, t - h, t + h, RESIDUAL_GRID_SIGMAS)?;
    let mut tracker = PhaseTracker::new();
    let before = evaluate_packet(sys, init, t - h, &grid, &mut tracker, true)?;
    let now = evaluate_packet(sys, init, t, &grid, &mut tracker, true)?;
    let after = evaluate_packet(sys, init, t + h, &grid, &mut tracker, true)?;
    let h_psi = apply_hamiltonian(sys, &grid, &now.values);
    let scale = Complex64::new(0.0, sys.hbar / (2.0 * h));
    let (mut num, mut den) = (0.0, 0.0);
    for ((a, b), hp) in after.values.iter().zip(&before.values).zip(&h_psi) {
        num += (scale * (a - b) - hp).norm_sqr();
        den += hp.norm_sqr();
    }
    Ok((num / den).sqrt())
}

/// Ratio of the oscillator's Strang errors at steps `N` and `2N` over one
/// period. A free mass is checked in an oscillator of unit frequency (the
/// free drift is exact and has no time-step error to measure).
pub fn strang_convergence_factor(sys: &SystemParams, init: &InitialGaussian) -> Result<f64> {
    let osc = match sys.kind {
        SystemKind::Oscillator => *sys,
        SystemKind::FreeMass => SystemParams::oscillator(sys.mass, 1.0, sys.hbar)?,
    };
    let period = 2.0 * PI / osc.omega;
    let grid = auto_grid(&osc, init, period)?;
    let start = initial_packet(&osc, init, &grid)?;
    let analytic = evaluate_packet(&osc, init, period, &grid, &mut PhaseTracker::new(), true)?;
    let error = |steps: usize| -> Result<f64> {
        let wf = split_step_evolve(
            &osc,
            &start,
            &EvolveSpec {
                t_final: period,
                steps,
                strict: false,
            },
        )?;
        Ok(compare(&wf, &analytic)?.l2_error)
    };
    let coarse = CONVERGENCE_STEPS;
    Ok(error(coarse)? / error(2 * coarse)?)
}

/// Coarse step count for the convergence check; small enough that time-step
/// error dominates the spatial error.
pub const CONVERGENCE_STEPS: usize = 100;
