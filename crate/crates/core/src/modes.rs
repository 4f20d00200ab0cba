//! Classical mode functions.
//!
//! A mode `u(t)` solves the classical equation of motion (`u'' = 0` or
//! `u'' + w^2 u = 0`) and is normalized by the Wronskian condition
//! `m (u conj(u') - u' conj(u)) = i`. The squeezed family
//! `u_r = cosh(r) u0 + e^{-i theta} sinh(r) conj(u0)` keeps that normalization
//! for every `(r, theta)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::squeeze::SqueezeParams;
use crate::system::{SystemKind, SystemParams};

/// A mode function and its time derivative at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeValue {
    pub u: Complex64,
    pub udot: Complex64,
}

impl ModeValue {
    pub fn conj(&self) -> ModeValue {
        ModeValue {
            u: self.u.conj(),
            udot: self.udot.conj(),
        }
    }
}

/// The preferred mode `u0`: `(1 - i t/m)/sqrt(2)` for the free mass,
/// `e^{-i w t}/sqrt(2 m w)` for the oscillator.
pub fn preferred_mode(sys: &SystemParams, t: f64) -> ModeValue {
    match sys.kind {
        SystemKind::FreeMass => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            ModeValue {
                u: Complex64::new(s, -s * t / sys.mass),
                udot: Complex64::new(0.0, -s / sys.mass),
            }
        }
        SystemKind::Oscillator => {
            let w = sys.omega;
            let u = Complex64::from_polar(1.0 / (2.0 * sys.mass * w).sqrt(), -w * t);
            ModeValue {
                u,
                udot: Complex64::new(0.0, -w) * u,
            }
        }
    }
}

/// Squeezed mode `u_r(t)`; the derivative is the same linear combination
/// of `u0'` and `conj(u0')`.
pub fn general_mode(sys: &SystemParams, sq: &SqueezeParams, t: f64) -> ModeValue {
    let base = preferred_mode(sys, t);
    let (sinh_r, cosh_r) = (sq.r.sinh(), sq.r.cosh());
    let mix = Complex64::from_polar(sinh_r, -sq.theta);
    ModeValue {
        u: base.u * cosh_r + mix * base.u.conj(),
        udot: base.udot * cosh_r + mix * base.udot.conj(),
    }
}

/// `m (u conj(u') - u' conj(u))`; equals `i` for a properly normalized mode.
pub fn wronskian(sys: &SystemParams, mv: &ModeValue) -> Complex64 {
    (mv.u * mv.udot.conj() - mv.udot * mv.u.conj()) * sys.mass
}
