//! Domain types shared by every other module: which Hamiltonian, the four
//! initial packet parameters, and validation of the uncertainty constraint.
//!
//! All quantities are plain numbers in natural units. For the free mass the
//! squeeze relations compare `dx0^2` and `dp0^2` directly, which matches the
//! preferred mode `u0(t) = (1 - i t/m)/sqrt(2)`; free-mass inputs must be given
//! in units consistent with that mode.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed below `hbar/2` in `dx0*dp0`.
pub const UNCERTAINTY_REL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemKind {
    FreeMass,
    Oscillator,
}

/// Hamiltonian `p^2/2m` (free mass) or `p^2/2m + m w^2 x^2/2` (oscillator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub kind: SystemKind,
    pub mass: f64,
    /// Angular frequency; ignored for the free mass.
    pub omega: f64,
    pub hbar: f64,
}

impl SystemParams {
    pub fn free_mass(mass: f64, hbar: f64) -> Result<Self> {
        let sys = SystemParams {
            kind: SystemKind::FreeMass,
            mass,
            omega: 0.0,
            hbar,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn oscillator(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        let sys = SystemParams {
            kind: SystemKind::Oscillator,
            mass,
            omega,
            hbar,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("hbar", self.hbar)?;
        if self.kind == SystemKind::Oscillator {
            positive("omega", self.omega)?;
        }
        Ok(())
    }

    pub fn is_oscillator(&self) -> bool {
        self.kind == SystemKind::Oscillator
    }

    /// The factor `s` that balances position against momentum in the ladder
    /// operators: `m w` for the oscillator, 1 for the free mass.
    pub fn quadrature_scale(&self) -> f64 {
        match self.kind {
            SystemKind::FreeMass => 1.0,
            SystemKind::Oscillator => self.mass * self.omega,
        }
    }

    /// Potential energy at `x`.
    pub fn potential(&self, x: f64) -> f64 {
        match self.kind {
            SystemKind::FreeMass => 0.0,
            SystemKind::Oscillator => 0.5 * self.mass * self.omega * self.omega * x * x,
        }
    }

    /// Oscillation period `2 pi / w`, `None` for the free mass.
    pub fn period(&self) -> Option<f64> {
        self.is_oscillator()
            .then(|| 2.0 * std::f64::consts::PI / self.omega)
    }
}

/// Sign of the initial position-momentum correlation, `Delta(xp)_0 = +-hbar*delta/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CorrSign {
    #[default]
    Plus,
    Minus,
}

impl CorrSign {
    pub fn signum(self) -> f64 {
        match self {
            CorrSign::Plus => 1.0,
            CorrSign::Minus => -1.0,
        }
    }
}

/// Four-parameter initial Gaussian: centroid `(x0, p0)` and spreads
/// `(dx0, dp0)`, plus the sign of the correlation they imply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialGaussian {
    pub x0: f64,
    pub p0: f64,
    pub dx0: f64,
    pub dp0: f64,
    pub corr_sign: CorrSign,
}

impl InitialGaussian {
    pub fn new(x0: f64, p0: f64, dx0: f64, dp0: f64, corr_sign: CorrSign) -> Self {
        InitialGaussian {
            x0,
            p0,
            dx0,
            dp0,
            corr_sign,
        }
    }

    /// Initial symmetrized correlation `+-hbar*delta/2`.
    pub fn initial_correlation(&self, sys: &SystemParams) -> f64 {
        self.corr_sign.signum() * sys.hbar * delta(sys, self) / 2.0
    }
}

/// Tolerances used by the verification checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub uncertainty_eps: f64,
    pub wronskian_eps: f64,
    pub norm_eps: f64,
    pub oracle_l2_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            uncertainty_eps: UNCERTAINTY_REL_EPS,
            wronskian_eps: 1e-12,
            norm_eps: 1e-8,
            oracle_l2_eps: 1e-5,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        positive("uncertainty_eps", self.uncertainty_eps)?;
        positive("wronskian_eps", self.wronskian_eps)?;
        positive("norm_eps", self.norm_eps)?;
        positive("oracle_l2_eps", self.oracle_l2_eps)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_nan() || value <= 0.0 {
        return Err(Error::NonPositive { name, value });
    }
    if !value.is_finite() {
        return Err(Error::NonFinite { name, value });
    }
    Ok(())
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// Checks positivity and `dx0*dp0 >= hbar/2` (up to a relative `1e-12`
/// slack), and canonicalizes the sign to `Plus` at minimum uncertainty.
pub fn validate_initial(sys: &SystemParams, init: &InitialGaussian) -> Result<InitialGaussian> {
    validate_initial_with(sys, init, UNCERTAINTY_REL_EPS)
}

/// [`validate_initial`] with a caller-chosen relative slack `eps` below `hbar/2`.
pub fn validate_initial_with(
    sys: &SystemParams,
    init: &InitialGaussian,
    eps: f64,
) -> Result<InitialGaussian> {
    positive("uncertainty_eps", eps)?;
    sys.validate()?;
    finite("x0", init.x0)?;
    finite("p0", init.p0)?;
    positive("dx0", init.dx0)?;
    positive("dp0", init.dp0)?;

    let bound = sys.hbar / 2.0;
    let product = init.dx0 * init.dp0;
    if product < bound - eps * bound {
        return Err(Error::UncertaintyViolation { product, bound });
    }

    let mut out = *init;
    if delta(sys, init) == 0.0 {
        out.corr_sign = CorrSign::Plus;
    }
    Ok(out)
}

/// Deviation from minimum uncertainty, `sqrt((2 dx0 dp0 / hbar)^2 - 1)`.
///
/// Products within the relative `1e-12` slack of `hbar/2` (on either side)
/// count as minimum uncertainty and give exactly 0.
pub fn delta(sys: &SystemParams, init: &InitialGaussian) -> f64 {
    let ratio = 2.0 * init.dx0 * init.dp0 / sys.hbar;
    if ratio - 1.0 <= UNCERTAINTY_REL_EPS {
        return 0.0;
    }
    ((ratio - 1.0) * (ratio + 1.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> SystemParams {
        SystemParams::free_mass(1.0, 1.0).unwrap()
    }

    #[test]
    fn minimum_uncertainty_boundary_is_valid() {
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 0.5, CorrSign::Minus);
        let v = validate_initial(&free(), &init).unwrap();
        assert_eq!(v.corr_sign, CorrSign::Plus);
        assert_eq!(delta(&free(), &v), 0.0);
    }

    #[test]
    fn below_bound_is_rejected() {
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 0.4, CorrSign::Plus);
        match validate_initial(&free(), &init) {
            Err(Error::UncertaintyViolation { product, bound }) => {
                assert_eq!(product, 0.4);
                assert_eq!(bound, 0.5);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn ordinary_input_passes_unchanged() {
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 1.0, CorrSign::Plus);
        assert_eq!(validate_initial(&free(), &init).unwrap(), init);
        let minus = InitialGaussian {
            corr_sign: CorrSign::Minus,
            ..init
        };
        assert_eq!(validate_initial(&free(), &minus).unwrap(), minus);
    }

    #[test]
    fn non_positive_inputs() {
        let init = InitialGaussian::new(0.0, 0.0, 0.0, 1.0, CorrSign::Plus);
        assert!(matches!(
            validate_initial(&free(), &init),
            Err(Error::NonPositive { name: "dx0", .. })
        ));
        let init = InitialGaussian::new(0.0, 0.0, 1.0, -1.0, CorrSign::Plus);
        assert!(matches!(
            validate_initial(&free(), &init),
            Err(Error::NonPositive { name: "dp0", .. })
        ));
        assert!(matches!(
            SystemParams::free_mass(0.0, 1.0),
            Err(Error::NonPositive { name: "mass", .. })
        ));
        assert!(SystemParams::oscillator(1.0, 0.0, 1.0).is_err());
        assert!(SystemParams::oscillator(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn rounding_just_below_bound_is_tolerated() {
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 0.5 * (1.0 - 1e-14), CorrSign::Minus);
        let v = validate_initial(&free(), &init).unwrap();
        assert_eq!(delta(&free(), &v), 0.0);
    }

    #[test]
    fn custom_slack() {
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 0.5 * (1.0 - 1e-9), CorrSign::Minus);
        assert!(validate_initial(&free(), &init).is_err());
        let v = validate_initial_with(&free(), &init, 1e-8).unwrap();
        assert_eq!(v.corr_sign, CorrSign::Plus);
        assert!(validate_initial_with(&free(), &init, 0.0).is_err());
    }

    #[test]
    fn delta_values() {
        let sys = free();
        let d = delta(
            &sys,
            &InitialGaussian::new(0.0, 0.0, 1.0, 1.0, CorrSign::Plus),
        );
        assert!((d - 3f64.sqrt()).abs() < 1e-15);
        let d = delta(
            &sys,
            &InitialGaussian::new(0.0, 0.0, 2.0, 0.25, CorrSign::Plus),
        );
        assert_eq!(d, 0.0);
        let heavy = SystemParams::free_mass(1.0, 2.0).unwrap();
        let d = delta(
            &heavy,
            &InitialGaussian::new(0.0, 0.0, 1.0, 2.0, CorrSign::Plus),
        );
        assert!((d - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn delta_vanishes_only_at_the_bound() {
        let sys = free();
        let at = |dp0: f64| {
            delta(
                &sys,
                &InitialGaussian::new(0.0, 0.0, 1.0, dp0, CorrSign::Plus),
            )
        };
        assert_eq!(at(0.5 * (1.0 + 1e-13)), 0.0);
        assert!(at(0.5 * (1.0 + 1e-10)) > 0.0);
        let mut last = 0.0;
        for k in 0..200 {
            let d = at(0.5 + 0.01 * k as f64);
            assert!(d >= last);
            last = d;
        }
    }

    #[test]
    fn validation_is_idempotent() {
        let init = InitialGaussian::new(0.3, -1.0, 0.7, 2.0, CorrSign::Minus);
        let once = validate_initial(&free(), &init).unwrap();
        assert_eq!(validate_initial(&free(), &once).unwrap(), once);
    }
}
