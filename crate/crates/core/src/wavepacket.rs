//! The travelling Gaussian packet on a spatial grid.
//!
//! ```text
//! Psi(x, t) = (sqrt(2 pi hbar) conj(u_r))^{-1/2} e^{-i S_c/hbar} e^{i p_c x/hbar}
//!             exp(-(1 - 2i cov_xp/hbar) (x - x_c)^2 / (4 var_x))
//! ```
//!
//! `|prefactor|^2 = 1/(sqrt(2 pi) Delta x_t)`, so the packet is unit-normalized.
//! The complex square root follows the branch that is continuous in `t`,
//! starting from the principal branch at `t = 0`; [`PhaseTracker`] carries
//! that branch along a time path.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{classical_trajectory, MomentSet};
use crate::error::{Error, Result};
use crate::modes::general_mode;
use crate::spectral::{wavenumbers, Transform};
use crate::squeeze::{coherent_alpha, solve_squeeze, SqueezeParams};
use crate::system::{validate_initial, InitialGaussian, SystemKind, SystemParams, Tolerances};

/// Density at the grid edge, relative to the peak, above which a grid counts
/// as too narrow.
pub const EDGE_DENSITY_RATIO: f64 = 1e-8;

/// Half-width of auto grids in units of the largest position spread.
pub const AUTO_GRID_SIGMAS: f64 = 8.0;

pub const AUTO_GRID_POINTS: usize = 4096;

/// Uniform periodic grid: `x_j = x_min + j (x_max - x_min)/n` for `j < n`.
/// `x_max` is the periodic image of `x_min` and is not sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < 16 {
            return Err(Error::InvalidGrid(format!(
                "need at least 16 points, got {n}"
            )));
        }
        Ok(GridSpec { x_min, x_max, n })
    }

    pub fn validate(&self) -> Result<()> {
        GridSpec::new(self.x_min, self.x_max, self.n).map(|_| ())
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.x(j))
    }
}

/// Complex amplitudes sampled on a grid at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveField {
    pub grid: GridSpec,
    pub t: f64,
    pub values: Vec<Complex64>,
}

impl WaveField {
    /// Trapezoidal (periodic) `integral |Psi|^2 dx`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn densities(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|v| v.norm_sqr())
    }

    /// Largest edge density relative to the peak density.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.densities().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.values[0].norm_sqr();
        let last = self.values[self.grid.n - 1].norm_sqr();
        first.max(last) / peak
    }
}

/// Unwraps `arg(conj(u_r(t)))` along a time path so the square-root prefactor
/// stays continuous. Owned by one packet evaluation sequence; it re-anchors at
/// `t = 0` whenever it is handed a different system or squeeze.
#[derive(Debug, Clone, Default)]
pub struct PhaseTracker {
    state: Option<TrackerState>,
}

#[derive(Debug, Clone)]
struct TrackerState {
    sys: SystemParams,
    sq: SqueezeParams,
    t: f64,
    last_arg: f64,
}

impl PhaseTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unwrapped argument at the most recent update, if any.
    pub fn last_arg(&self) -> Option<f64> {
        self.state.as_ref().map(|s| s.last_arg)
    }

    /// Moves to time `t` and returns the continuous argument of `conj(u_r(t))`.
    pub fn advance(&mut self, sys: &SystemParams, sq: &SqueezeParams, t: f64) -> f64 {
        let fresh = match &self.state {
            Some(s) => s.sys != *sys || s.sq != *sq,
            None => true,
        };
        if fresh {
            self.state = Some(TrackerState {
                sys: *sys,
                sq: *sq,
                t: 0.0,
                last_arg: general_mode(sys, sq, 0.0).u.conj().arg(),
            });
        }
        let state = self.state.as_mut().expect("tracker state");

        // d arg(conj u)/dt = 1/(2 m |u|^2) > 0; bound it to size the substeps
        // so consecutive samples move by at most pi/4.
        let max_rate = match sys.kind {
            SystemKind::FreeMass => 2.0 * sys.mass * general_mode(sys, sq, 0.0).udot.norm_sqr(),
            SystemKind::Oscillator => sys.omega * (2.0 * sq.r).exp(),
        };
        let span = t - state.t;
        let steps = ((span.abs() * max_rate / FRAC_PI_4).ceil() as usize).max(1);
        for k in 1..=steps {
            let tk = if k == steps {
                t
            } else {
                state.t + span * k as f64 / steps as f64
            };
            let principal = general_mode(sys, sq, tk).u.conj().arg();
            state.last_arg += wrap_angle(principal - state.last_arg);
        }
        state.t = t;
        state.last_arg
    }
}

/// Wraps into `(-pi, pi]`.
fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Closed-form Gaussian at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketShape {
    pub t: f64,
    pub x_c: f64,
    pub p_c: f64,
    pub action: f64,
    pub var_x: f64,
    pub cov_xp: f64,
    pub prefactor: Complex64,
    pub hbar: f64,
}

impl PacketShape {
    pub fn amplitude(&self, x: f64) -> Complex64 {
        let d = x - self.x_c;
        let exponent = Complex64::new(-1.0, 2.0 * self.cov_xp / self.hbar)
            * (d * d / (4.0 * self.var_x))
            + Complex64::new(0.0, (self.p_c * x - self.action) / self.hbar);
        self.prefactor * exponent.exp()
    }

    /// Density relative to the peak at `x`.
    pub fn relative_density(&self, x: f64) -> f64 {
        let d = x - self.x_c;
        (-d * d / (2.0 * self.var_x)).exp()
    }
}

/// Packet parameters at time `t`. The centroid comes from the coherent
/// amplitude, `x_c = sqrt(hbar)(u_r alpha + c.c.)`, `p_c = sqrt(hbar) m (u_r' alpha + c.c.)`.
pub fn packet_shape(
    sys: &SystemParams,
    init: &InitialGaussian,
    t: f64,
    tracker: &mut PhaseTracker,
) -> Result<PacketShape> {
    let init = validate_initial(sys, init)?;
    let sq = solve_squeeze(sys, &init)?;
    let alpha = coherent_alpha(sys, &sq, init.x0, init.p0).alpha;
    let mv = general_mode(sys, &sq, t);
    let h = sys.hbar;
    let root_h = h.sqrt();

    let arg = tracker.advance(sys, &sq, t);
    let modulus = (TAU * h).sqrt() * mv.u.norm();
    let prefactor = Complex64::from_polar(modulus.powf(-0.5), -0.5 * arg);

    Ok(PacketShape {
        t,
        x_c: 2.0 * root_h * (mv.u * alpha).re,
        p_c: 2.0 * root_h * sys.mass * (mv.udot * alpha).re,
        action: classical_trajectory(sys, init.x0, init.p0, t).action,
        var_x: h * mv.u.norm_sqr(),
        cov_xp: h * sys.mass * (mv.u * mv.udot.conj()).re,
        prefactor,
        hbar: h,
    })
}

/// Samples the analytic packet at time `t`. A grid whose edge density
/// exceeds `1e-8` of the peak is an error in `strict` mode and a logged
/// warning otherwise.
pub fn evaluate_packet(
    sys: &SystemParams,
    init: &InitialGaussian,
    t: f64,
    grid: &GridSpec,
    tracker: &mut PhaseTracker,
    strict: bool,
) -> Result<WaveField> {
    grid.validate()?;
    let shape = packet_shape(sys, init, t, tracker)?;
    let ratio = shape
        .relative_density(grid.x_min)
        .max(shape.relative_density(grid.x_max));
    if ratio >= EDGE_DENSITY_RATIO {
        if strict {
            return Err(Error::GridTooNarrow { t, ratio });
        }
        log::warn!(
            "grid [{}, {}] is narrow at t = {t}: edge density ratio {ratio:e}",
            grid.x_min,
            grid.x_max
        );
    }
    Ok(WaveField {
        grid: *grid,
        t,
        values: grid.points().map(|x| shape.amplitude(x)).collect(),
    })
}

/// Grid covering `[min x_c - 8 max Delta x, max x_c + 8 max Delta x]` for
/// `t` in `[0, t_max]`.
pub fn auto_grid(sys: &SystemParams, init: &InitialGaussian, t_max: f64) -> Result<GridSpec> {
    if t_max.is_nan() || t_max < 0.0 || !t_max.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "t_max must be finite and >= 0, got {t_max}"
        )));
    }
    auto_grid_span(sys, init, 0.0, t_max)
}

/// [`auto_grid`] over an arbitrary time window. Uses at least 4096 points,
/// more (a power of two) when the momentum content would otherwise alias.
pub fn auto_grid_span(
    sys: &SystemParams,
    init: &InitialGaussian,
    t_start: f64,
    t_end: f64,
) -> Result<GridSpec> {
    auto_grid_with_margin(sys, init, t_start, t_end, AUTO_GRID_SIGMAS)
}

/// [`auto_grid_span`] with a custom half-width in units of the position
/// spread. Spectral derivatives need wider margins than quadrature does:
/// at 8 sigma the edge amplitude is still `e^-16`.
pub fn auto_grid_with_margin(
    sys: &SystemParams,
    init: &InitialGaussian,
    t_start: f64,
    t_end: f64,
    sigmas: f64,
) -> Result<GridSpec> {
    if sigmas.is_nan() || sigmas <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "margin must be positive, got {sigmas}"
        )));
    }
    let init = validate_initial(sys, init)?;
    let sq = solve_squeeze(sys, &init)?;
    let (t0, t1) = if t_start <= t_end {
        (t_start, t_end)
    } else {
        (t_end, t_start)
    };

    // free-mass extremes sit at the endpoints; the oscillator is sampled
    let samples = if t1 > t0 { 4096 } else { 0 };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut p_max: f64 = 0.0;
    let mut dp_max: f64 = 0.0;
    for k in 0..=samples {
        let t = if samples == 0 {
            t0
        } else {
            t0 + (t1 - t0) * k as f64 / samples as f64
        };
        let cl = classical_trajectory(sys, init.x0, init.p0, t);
        let mv = general_mode(sys, &sq, t);
        let sigma = (sys.hbar * mv.u.norm_sqr()).sqrt();
        let dp = (sys.hbar * mv.udot.norm_sqr()).sqrt() * sys.mass;
        lo = lo.min(cl.x_c - sigmas * sigma);
        hi = hi.max(cl.x_c + sigmas * sigma);
        p_max = p_max.max(cl.p_c.abs());
        dp_max = dp_max.max(dp);
    }

    // Nyquist wavenumber pi/dx must clear the momentum distribution
    let k_needed = (p_max + 10.0 * dp_max) / sys.hbar;
    let n_needed = ((hi - lo) * k_needed / PI).ceil() as usize;
    let n = n_needed.max(AUTO_GRID_POINTS).next_power_of_two();
    GridSpec::new(lo, hi, n)
}

/// Position moments by quadrature of `|Psi|^2`; momentum moments by applying
/// `p = -i hbar d/dx` spectrally. The correlation is the symmetrized
/// `Re <(x - <x>) Psi | (p - <p>) Psi>`.
pub fn grid_moments(wf: &WaveField, hbar: f64) -> Result<MomentSet> {
    wf.grid.validate()?;
    let norm = wf.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > Tolerances::default().norm_eps {
        return Err(Error::NotNormalized { norm });
    }
    let dx = wf.grid.dx();
    let xs: Vec<f64> = wf.grid.points().collect();

    let mean_x = xs
        .iter()
        .zip(wf.densities())
        .map(|(x, d)| x * d)
        .sum::<f64>()
        * dx
        / norm;
    let var_x = xs
        .iter()
        .zip(wf.densities())
        .map(|(x, d)| (x - mean_x).powi(2) * d)
        .sum::<f64>()
        * dx
        / norm;

    let ks = wavenumbers(&wf.grid);
    let mut fft = Transform::new(wf.grid.n);
    let mut spectrum = wf.values.clone();
    fft.forward(&mut spectrum);
    let total: f64 = spectrum.iter().map(|c| c.norm_sqr()).sum();
    let mean_p = ks
        .iter()
        .zip(&spectrum)
        .map(|(k, c)| hbar * k * c.norm_sqr())
        .sum::<f64>()
        / total;
    let var_p = ks
        .iter()
        .zip(&spectrum)
        .map(|(k, c)| (hbar * k - mean_p).powi(2) * c.norm_sqr())
        .sum::<f64>()
        / total;

    // (p - <p>) Psi back in position space
    for (c, k) in spectrum.iter_mut().zip(&ks) {
        *c *= hbar * k - mean_p;
    }
    fft.inverse(&mut spectrum);
    let cov_xp = xs
        .iter()
        .zip(&wf.values)
        .zip(&spectrum)
        .map(|((x, psi), ppsi)| ((psi.conj() * (x - mean_x)) * ppsi).re)
        .sum::<f64>()
        * dx
        / norm;

    Ok(MomentSet {
        mean_x,
        mean_p,
        var_x,
        var_p,
        cov_xp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::moments;
    use crate::system::{delta, CorrSign};

    fn free() -> SystemParams {
        SystemParams::free_mass(1.0, 1.0).unwrap()
    }

    fn osc() -> SystemParams {
        SystemParams::oscillator(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(1.0, 1.0, 64).is_err());
        assert!(GridSpec::new(0.0, 1.0, 8).is_err());
        assert!(GridSpec::new(f64::NAN, 1.0, 64).is_err());
        let g = GridSpec::new(-8.0, 8.0, 16).unwrap();
        assert_eq!(g.dx(), 1.0);
        assert_eq!(g.x(15), 7.0);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(0.5), 0.5);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn auto_grid_examples() {
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 0.5, CorrSign::Plus);
        let g = auto_grid(&free(), &init, 0.0).unwrap();
        assert!((g.x_min + 8.0).abs() < 1e-12 && (g.x_max - 8.0).abs() < 1e-12);
        assert_eq!(g.n, 4096);

        let g = auto_grid(&free(), &init, 2.0).unwrap();
        assert!(g.x_max >= 8.0 * 2f64.sqrt() - 1e-12);

        let moving = InitialGaussian { p0: 5.0, ..init };
        let g = auto_grid(&free(), &moving, 2.0).unwrap();
        assert!(g.x_min < 0.0 && g.x_max > 10.0);

        assert!(auto_grid(&free(), &init, -1.0).is_err());
    }

    #[test]
    fn initial_packet_is_textbook_gaussian() {
        let (x0, p0, dx0) = (0.7, 1.3, 1.2);
        let init = InitialGaussian::new(x0, p0, dx0, 0.5 / dx0, CorrSign::Plus);
        let grid = GridSpec::new(-12.0, 12.0, 512).unwrap();
        for sys in [free(), osc()] {
            let wf =
                evaluate_packet(&sys, &init, 0.0, &grid, &mut PhaseTracker::new(), true).unwrap();
            let norm = (TAU * dx0 * dx0).powf(-0.25);
            for (x, v) in grid.points().zip(&wf.values) {
                let expected = Complex64::from_polar(
                    norm * (-(x - x0).powi(2) / (4.0 * dx0 * dx0)).exp(),
                    p0 * x,
                );
                assert!((v - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn initial_chirp_follows_correlation_sign() {
        let grid = GridSpec::new(-10.0, 10.0, 256).unwrap();
        for sign in [CorrSign::Plus, CorrSign::Minus] {
            let init = InitialGaussian::new(0.0, 0.0, 1.0, 1.0, sign);
            let d = delta(&free(), &init);
            let wf = evaluate_packet(&free(), &init, 0.0, &grid, &mut PhaseTracker::new(), true)
                .unwrap();
            let shape = Complex64::new(1.0, -sign.signum() * d) / 4.0;
            let reference = wf.values[grid.n / 2];
            for (x, v) in grid.points().zip(&wf.values).skip(100).take(56) {
                let expected = reference * (-shape * x * x).exp();
                assert!((v - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn narrow_grid_is_reported() {
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 1.0, CorrSign::Plus);
        let grid = GridSpec::new(-3.0, 3.0, 64).unwrap();
        let err = evaluate_packet(&free(), &init, 0.0, &grid, &mut PhaseTracker::new(), true);
        assert!(matches!(err, Err(Error::GridTooNarrow { .. })));
        assert!(
            evaluate_packet(&free(), &init, 0.0, &grid, &mut PhaseTracker::new(), false).is_ok()
        );
    }

    #[test]
    fn normalization_on_auto_grid() {
        for sys in [free(), osc()] {
            let init = InitialGaussian::new(1.0, -2.0, 0.8, 1.5, CorrSign::Minus);
            let grid = auto_grid(&sys, &init, 5.0).unwrap();
            let mut tracker = PhaseTracker::new();
            for t in [0.0, 1.0, 2.5, 5.0] {
                let wf = evaluate_packet(&sys, &init, t, &grid, &mut tracker, true).unwrap();
                assert!((wf.norm() - 1.0).abs() < 1e-8, "norm {}", wf.norm());
            }
        }
    }

    #[test]
    fn grid_moments_match_closed_form() {
        for sys in [free(), SystemParams::oscillator(1.5, 0.8, 1.0).unwrap()] {
            let init = InitialGaussian::new(0.5, 1.0, 1.1, 0.9, CorrSign::Minus);
            let grid = auto_grid(&sys, &init, 3.0).unwrap();
            let mut tracker = PhaseTracker::new();
            for t in [0.0, 1.2, 3.0] {
                let wf = evaluate_packet(&sys, &init, t, &grid, &mut tracker, true).unwrap();
                let g = grid_moments(&wf, sys.hbar).unwrap();
                let e = moments(&sys, &init, t).unwrap();
                assert!((g.mean_x - e.mean_x).abs() < 1e-8);
                assert!((g.mean_p - e.mean_p).abs() < 1e-8);
                assert!((g.var_x - e.var_x).abs() < 1e-6 * e.var_x);
                assert!((g.var_p - e.var_p).abs() < 1e-6 * e.var_p);
                assert!((g.cov_xp - e.cov_xp).abs() < 1e-6 * e.var_x.max(e.var_p));
            }
        }
    }

    #[test]
    fn unnormalized_field_is_rejected() {
        let grid = GridSpec::new(-5.0, 5.0, 64).unwrap();
        let wf = WaveField {
            grid,
            t: 0.0,
            values: vec![Complex64::new(1.0, 0.0); 64],
        };
        assert!(matches!(
            grid_moments(&wf, 1.0),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn tracker_is_continuous_over_many_periods() {
        let sys = osc();
        let init = InitialGaussian::new(0.0, 0.0, 1.0, 2.0, CorrSign::Plus);
        let sq = solve_squeeze(&sys, &init).unwrap();
        let mut tracker = PhaseTracker::new();
        let mut last = tracker.advance(&sys, &sq, 0.0);
        let t_end = 10.0 * sys.period().unwrap();
        for k in 1..=4000 {
            let a = tracker.advance(&sys, &sq, t_end * k as f64 / 4000.0);
            assert!((a - last).abs() < PI / 2.0);
            assert!(a >= last, "argument of conj(u) must increase");
            last = a;
        }
        // one full turn of conj(u) per period
        let start = general_mode(&sys, &sq, 0.0).u.conj().arg();
        assert!((last - start - 10.0 * TAU).abs() < 1e-9);
    }

    #[test]
    fn jumping_straight_to_late_time_matches_stepping() {
        let sys = osc();
        let init = InitialGaussian::new(0.0, 0.0, 0.3, 3.0, CorrSign::Minus);
        let sq = solve_squeeze(&sys, &init).unwrap();
        let mut stepped = PhaseTracker::new();
        for k in 0..=200 {
            stepped.advance(&sys, &sq, 0.1 * k as f64);
        }
        let direct = PhaseTracker::new().advance(&sys, &sq, 20.0);
        assert!((stepped.last_arg().unwrap() - direct).abs() < 1e-12);
    }
}
