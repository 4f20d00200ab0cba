//! Classical trajectory, exact quantum moments, and the contractive-state
//! analysis for the free mass.
//!
//! Moments are available along two independent routes: [`moments`] reads them
//! off the squeezed mode (`var_x = hbar |u_r|^2` and friends), while
//! [`moments_closed_form`] propagates `(dx0, dp0, +-delta)` through the
//! Heisenberg equations directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::general_mode;
use crate::squeeze::solve_squeeze;
use crate::system::{delta, CorrSign, InitialGaussian, SystemKind, SystemParams};

/// Point on the classical trajectory with the action accumulated from `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub t: f64,
    pub x_c: f64,
    pub p_c: f64,
    pub action: f64,
}

/// First and second moments of a pure Gaussian state. `cov_xp` is the
/// symmetrized correlation `<(x - x_c)(p - p_c) + (p - p_c)(x - x_c)>/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
}

impl MomentSet {
    /// Robertson-Schroedinger determinant `var_x var_p - cov_xp^2`; `hbar^2/4` for pure Gaussians.
    pub fn uncertainty_determinant(&self) -> f64 {
        self.var_x * self.var_p - self.cov_xp * self.cov_xp
    }
}

pub fn classical_trajectory(sys: &SystemParams, x0: f64, p0: f64, t: f64) -> ClassicalState {
    let m = sys.mass;
    match sys.kind {
        SystemKind::FreeMass => ClassicalState {
            t,
            x_c: x0 + p0 * t / m,
            p_c: p0,
            action: p0 * p0 * t / (2.0 * m),
        },
        SystemKind::Oscillator => {
            let w = sys.omega;
            let (s, c) = (w * t).sin_cos();
            let (s2, c2) = (2.0 * w * t).sin_cos();
            // integral of (p0^2/2m - m w^2 x0^2/2) cos 2wt' - w x0 p0 sin 2wt'
            let k = p0 * p0 / (2.0 * m) - 0.5 * m * w * w * x0 * x0;
            ClassicalState {
                t,
                x_c: x0 * c + p0 / (m * w) * s,
                p_c: p0 * c - m * w * x0 * s,
                action: k * s2 / (2.0 * w) - 0.5 * x0 * p0 * (1.0 - c2),
            }
        }
    }
}

/// Moments at time `t` from the squeezed mode function.
pub fn moments(sys: &SystemParams, init: &InitialGaussian, t: f64) -> Result<MomentSet> {
    let sq = solve_squeeze(sys, init)?;
    let mv = general_mode(sys, &sq, t);
    let cl = classical_trajectory(sys, init.x0, init.p0, t);
    let h = sys.hbar;
    let m = sys.mass;
    Ok(MomentSet {
        mean_x: cl.x_c,
        mean_p: cl.p_c,
        var_x: h * mv.u.norm_sqr(),
        var_p: h * m * m * mv.udot.norm_sqr(),
        cov_xp: h * m * (mv.u * mv.udot.conj()).re,
    })
}

/// Moments at time `t` from the explicit variance formulas in
/// `(dx0, dp0, delta, sign)`; independent of the mode construction.
pub fn moments_closed_form(sys: &SystemParams, init: &InitialGaussian, t: f64) -> MomentSet {
    let cl = classical_trajectory(sys, init.x0, init.p0, t);
    let h = sys.hbar;
    let m = sys.mass;
    let vx = init.dx0 * init.dx0;
    let vp = init.dp0 * init.dp0;
    let sd = init.corr_sign.signum() * delta(sys, init);
    let (var_x, var_p, cov_xp) = match sys.kind {
        SystemKind::FreeMass => {
            let tm = t / m;
            (vx + h * sd * tm + vp * tm * tm, vp, 0.5 * h * sd + vp * tm)
        }
        SystemKind::Oscillator => {
            let mw = m * sys.omega;
            let (s, c) = (sys.omega * t).sin_cos();
            let (s2, c2) = (2.0 * sys.omega * t).sin_cos();
            (
                vx * c * c + h * sd / (2.0 * mw) * s2 + vp / (mw * mw) * s * s,
                vp * c * c - 0.5 * mw * h * sd * s2 + mw * mw * vx * s * s,
                0.5 * h * sd * c2 + 0.5 * s2 * (vp / mw - mw * vx),
            )
        }
    };
    MomentSet {
        mean_x: cl.x_c,
        mean_p: cl.p_c,
        var_x,
        var_p,
        cov_xp,
    }
}

/// Timing of the free-mass contractive state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractiveAnalysis {
    /// Time of minimum position variance, `hbar m delta / (2 dp0^2)`.
    pub tau: f64,
    /// Minimum position variance, `hbar^2 / (4 dp0^2)`.
    pub var_min: f64,
    /// The variance is back at `dx0^2` here (`2 tau`).
    pub t_return: f64,
}

/// Minimum of `dx0^2 - hbar delta t/m + dp0^2 t^2/m^2`.
///
/// At the minimum the correlation vanishes, so the pure-state determinant
/// gives `var_min = hbar^2 / (4 dp0^2)` exactly. (The often-quoted
/// `3 dx0^2/4 + hbar^2/(4 dp0^2)` does not follow from the quadratic.)
pub fn contractive_analysis(
    sys: &SystemParams,
    init: &InitialGaussian,
) -> Result<ContractiveAnalysis> {
    if sys.kind != SystemKind::FreeMass {
        return Err(Error::NotContractive(
            "only the free mass has a contractive state",
        ));
    }
    let d = delta(sys, init);
    if d == 0.0 {
        return Err(Error::NotContractive(
            "minimum-uncertainty packets only spread",
        ));
    }
    if init.corr_sign != CorrSign::Minus {
        return Err(Error::NotContractive(
            "a positive correlation makes the variance grow from t = 0",
        ));
    }
    let vp = init.dp0 * init.dp0;
    let tau = sys.hbar * sys.mass * d / (2.0 * vp);
    Ok(ContractiveAnalysis {
        tau,
        var_min: sys.hbar * sys.hbar / (4.0 * vp),
        t_return: 2.0 * tau,
    })
}

/// Large-`delta` approximation of the position spread `Delta x_t` (a standard
/// deviation, not a variance): `|dx0 +- hbar delta t / (2 m dx0)|` for the free
/// mass and `|dx0 cos wt +- hbar delta sin wt / (2 m w dx0)|` for the oscillator.
pub fn approx_spread_large_delta(sys: &SystemParams, init: &InitialGaussian, t: f64) -> f64 {
    let sd = init.corr_sign.signum() * delta(sys, init);
    let dx0 = init.dx0;
    let h = sys.hbar;
    let m = sys.mass;
    match sys.kind {
        SystemKind::FreeMass => (dx0 + sd * h * t / (2.0 * m * dx0)).abs(),
        SystemKind::Oscillator => {
            let w = sys.omega;
            let (s, c) = (w * t).sin_cos();
            (dx0 * c + sd * h / (2.0 * m * w * dx0) * s).abs()
        }
    }
}
