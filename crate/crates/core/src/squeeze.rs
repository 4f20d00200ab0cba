//! Map between the initial Gaussian `(x0, p0, dx0, dp0, +-)` and the
//! coherent-squeezed representation `(r, theta, alpha)`.
//!
//! With `C = cosh 2r`, `A = sinh 2r cos theta`, `B = sinh 2r sin theta` and
//! quadrature scale `s` (`m w` for the oscillator, 1 for the free mass):
//!
//! ```text
//! C = (s dx0^2 + dp0^2/s) / hbar
//! A = (s dx0^2 - dp0^2/s) / hbar
//! B = +-delta
//! ```
//!
//! `C^2 - A^2 - B^2 = 1` is exactly the statement that `delta` was built from
//! `dx0 dp0`. The squeeze operator's complex parameter would be
//! `z = e^{i(pi - theta)} r`; only `(r, theta)` is carried here.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{delta, InitialGaussian, SystemParams};

/// Below this `r` the angle is meaningless and is pinned to 0.
pub const R_ZERO: f64 = 1e-14;

/// Squeeze parameter `r >= 0` and angle `theta` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    pub r: f64,
    pub theta: f64,
}

impl SqueezeParams {
    /// Builds the canonical representative: a negative `r` is folded into
    /// `theta + pi`, `theta` is wrapped into `[0, 2 pi)`, and `theta = 0`
    /// when `r` vanishes.
    pub fn new(r: f64, theta: f64) -> Self {
        let (r, theta) = if r < 0.0 {
            (-r, theta + std::f64::consts::PI)
        } else {
            (r, theta)
        };
        if r < R_ZERO {
            return SqueezeParams { r: 0.0, theta: 0.0 };
        }
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        SqueezeParams { r, theta }
    }

    /// `(cosh 2r, sinh 2r cos theta, sinh 2r sin theta)`.
    pub fn hyperbolic_components(&self) -> (f64, f64, f64) {
        let s = (2.0 * self.r).sinh();
        (
            (2.0 * self.r).cosh(),
            s * self.theta.cos(),
            s * self.theta.sin(),
        )
    }
}

/// Coherent amplitude `alpha` of the displaced squeezed state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitude {
    pub alpha: Complex64,
}

/// Initial second moments `(dx0^2, dp0^2, Delta(xp)_0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialVariances {
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
}

/// Solves for `(r, theta)` from validated initial data.
pub fn solve_squeeze(sys: &SystemParams, init: &InitialGaussian) -> Result<SqueezeParams> {
    let s = sys.quadrature_scale();
    let qx = s * init.dx0 * init.dx0 / sys.hbar;
    let qp = init.dp0 * init.dp0 / (s * sys.hbar);
    let c = qx + qp;
    let a = qx - qp;
    let b = init.corr_sign.signum() * delta(sys, init);

    if c < 1.0 - 1e-12 {
        return Err(Error::InconsistentVariances { cosh_2r: c });
    }
    // sinh 2r = hypot(A, B) is well conditioned near r = 0, where
    // acosh(C) loses half the digits.
    let r = 0.5 * a.hypot(b).asinh();
    Ok(SqueezeParams::new(r, b.atan2(a)))
}

/// Inverse of [`solve_squeeze`]: the initial variances and correlation
/// encoded by `(r, theta)`. The correlation sign is carried by `theta`.
pub fn variances_from_squeeze(sys: &SystemParams, sq: &SqueezeParams) -> InitialVariances {
    let s = sys.quadrature_scale();
    let (c, a, b) = sq.hyperbolic_components();
    InitialVariances {
        var_x: sys.hbar * (c + a) / (2.0 * s),
        var_p: sys.hbar * s * (c - a) / 2.0,
        cov_xp: sys.hbar * b / 2.0,
    }
}

/// `alpha = [sqrt(s)(cosh r - e^{i theta} sinh r) x0
///           + i (cosh r + e^{i theta} sinh r) p0 / sqrt(s)] / sqrt(2 hbar)`.
pub fn coherent_alpha(
    sys: &SystemParams,
    sq: &SqueezeParams,
    x0: f64,
    p0: f64,
) -> CoherentAmplitude {
    let root_s = sys.quadrature_scale().sqrt();
    let mix = Complex64::from_polar(sq.r.sinh(), sq.theta);
    let cosh_r = sq.r.cosh();
    let alpha = ((cosh_r - mix) * (root_s * x0) + Complex64::i() * (cosh_r + mix) * (p0 / root_s))
        / (2.0 * sys.hbar).sqrt();
    CoherentAmplitude { alpha }
}
