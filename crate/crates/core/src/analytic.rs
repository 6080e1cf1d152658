//! Closed-form amplification of the post-selected atom–source displacement.
//!
//! Two branches of the ensemble, `|1;N⟩` and `|2;N⟩`, are pre-selected in
//! `(|1⟩ + |2⟩)/√2` and post-selected in `(|1⟩ − |2⟩)/√2`. Each branch falls
//! towards the source with its own gravitational mass, and the probe (the
//! relative coordinate) ends up shifted by an amount that depends on the
//! interference of the two branches.
//!
//! Both published amplification formulas are implemented as printed:
//!
//! * leading order: `1 + α sin f_L / (1 − cos f_L)`, with
//!   `f_L = −T(⟨V⟩₂ − ⟨V⟩₁) − T N Δm`, divergent at `f_L = 2nπ`;
//! * all orders: `1 − α e^{−g} sin f / (1 − e^{−g} cos f)`, with
//!   `f = (2/3) N Δm x_cl² / T + T(⟨V⟩₂ − ⟨V⟩₁) + T N Δm`
//!   and `g = N² d² Δm² x_cl² / T²`,
//!
//! where `α = N Δm d² / T`. Since `f ≈ −f_L` the two agree for `g → 0`.
//! The `T N Δm` terms ("fast phase") are only included on request.
//!
//! Quantities are natural units throughout.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::gravity::{Geometry, GravityError, GravitySource};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error("observation time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("dropped correction 2TΔm/(N m1 m̄ d²) = {0:e} is not negligible")]
    ApproximationBreakdown(f64),
    #[error("transition probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
}

/// Upper bound on the neglected term `2TΔm/(N m1 m̄ d²)`.
pub const NEGLECTED_TERM_LIMIT: f64 = 1e-6;

/// `|1 − cos f|` below which the leading formula is reported as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e-12;

/// Cold-atom ensemble parameters in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleParams {
    atoms: f64,
    ground_mass: f64,
    splitting: f64,
    width: f64,
    kinetic_mass: f64,
}

impl EnsembleParams {
    /// `atoms` N, ground-state atomic mass `m1` (eV), level splitting
    /// `Δm = E₂ − E₁` (eV) and probe width `d` (eV⁻¹). The kinetic mass is
    /// taken as `m̄ = N m1`.
    pub fn new(atoms: f64, ground_mass: f64, splitting: f64, width: f64) -> Result<Self, AnalyticError> {
        let bad = |msg: String| Err(AnalyticError::InvalidEnsemble(msg));
        if !(atoms >= 1.0) || !atoms.is_finite() {
            return bad(format!("N must be at least 1, got {atoms}"));
        }
        if !(ground_mass > 0.0) || !ground_mass.is_finite() {
            return bad(format!("m1 must be positive, got {ground_mass}"));
        }
        if !(splitting > 0.0) || !splitting.is_finite() {
            return bad(format!("dm must be positive, got {splitting}"));
        }
        if splitting / ground_mass > 1e-9 {
            return bad(format!(
                "dm/m1 = {:e} exceeds 1e-9; the splitting must be non-relativistic",
                splitting / ground_mass
            ));
        }
        if !(width > 0.0) || !width.is_finite() {
            return bad(format!("d must be positive, got {width}"));
        }
        Ok(EnsembleParams {
            atoms,
            ground_mass,
            splitting,
            width,
            kinetic_mass: atoms * ground_mass,
        })
    }

    pub fn atoms(&self) -> f64 {
        self.atoms
    }
    pub fn ground_mass(&self) -> f64 {
        self.ground_mass
    }
    pub fn splitting(&self) -> f64 {
        self.splitting
    }
    pub fn width(&self) -> f64 {
        self.width
    }
    /// m̄ = N m1.
    pub fn kinetic_mass(&self) -> f64 {
        self.kinetic_mass
    }
    /// N Δm, the mass difference between the two branches.
    pub fn branch_mass_gap(&self) -> f64 {
        self.atoms * self.splitting
    }
}

/// Interference phase and damping exponent at one observation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFunctions {
    /// All-orders phase `f(T)` (radians).
    pub f: f64,
    /// Leading-order phase `f_L(T)` (radians).
    pub f_leading: f64,
    /// Damping exponent `g(T) >= 0`.
    pub g: f64,
    pub include_fast_phase: bool,
}

/// The reduced numbers every closed-form result depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    /// α = N Δm d² / T
    pub alpha: f64,
    pub f: f64,
    pub f_leading: f64,
    pub g: f64,
    /// s = T / (m̄ d²), the free-spreading parameter of the probe.
    pub spread: f64,
}

/// Post-selected branch amplitudes. Only the relative phase is physical, so
/// `c1` is kept real: `c1 = 1/2`, `c2 = −e^{i·relative_phase}/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCoefficients {
    pub c1: Complex64,
    pub c2: Complex64,
    /// `−T(⟨V⟩₂ − ⟨V⟩₁) − T N Δm` (the latter only with the fast phase).
    pub relative_phase: f64,
}

/// Leading-order amplification with its divergence flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingAmplification {
    /// `±∞` when `diverged`.
    pub value: f64,
    pub diverged: bool,
}

/// One row of an amplification sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationPoint {
    pub time: f64,
    pub f: f64,
    pub g: f64,
    pub amp_leading: f64,
    pub leading_diverged: bool,
    pub amp_exact: f64,
    pub p_tran: f64,
    pub x_cl: f64,
    pub x_mean: f64,
    pub variance: f64,
}

/// `1 − cos f` without cancellation.
fn one_minus_cos(f: f64) -> f64 {
    let s = (0.5 * f).sin();
    2.0 * s * s
}

/// `1 − e^{−g} cos f` written as a sum of non-negative terms.
fn damped_denominator(f: f64, g: f64) -> f64 {
    -(-g).exp_m1() + (-g).exp() * one_minus_cos(f)
}

/// Leading-order amplification `1 + α sin f / (1 − cos f)`.
pub fn amp_leading_reduced(alpha: f64, f_leading: f64) -> LeadingAmplification {
    let denom = one_minus_cos(f_leading);
    let s = f_leading.sin();
    if denom < DIVERGENCE_THRESHOLD {
        let value = if s < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
        return LeadingAmplification { value, diverged: true };
    }
    LeadingAmplification {
        value: 1.0 + alpha * s / denom,
        diverged: false,
    }
}

/// All-orders amplification `1 − α e^{−g} sin f / (1 − e^{−g} cos f)`.
pub fn amp_exact_reduced(alpha: f64, f: f64, g: f64) -> f64 {
    1.0 - alpha * (-g).exp() * f.sin() / damped_denominator(f, g)
}

/// Post-selection probability `(1 − e^{−g} cos f)/2`.
pub fn transition_probability_reduced(f: f64, g: f64) -> f64 {
    0.5 * damped_denominator(f, g)
}

/// Atom–source system with its linearized gravitational coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Experiment {
    pub ensemble: EnsembleParams,
    pub source: GravitySource,
    geometry: Geometry,
}

impl Experiment {
    pub fn new(ensemble: EnsembleParams, source: GravitySource, separation: f64) -> Result<Self, AnalyticError> {
        let geometry = Geometry::new(&source, separation)?;
        Ok(Experiment {
            ensemble,
            source,
            geometry,
        })
    }

    pub fn separation(&self) -> f64 {
        self.geometry.separation()
    }

    pub fn classical_displacement(&self, time: f64) -> Result<f64, AnalyticError> {
        Ok(self.source.classical_displacement(self.separation(), time)?)
    }

    /// `⟨V⟩₂ − ⟨V⟩₁`, evaluated directly on the mass gap `N Δm` (the
    /// potential is linear in the probe mass).
    pub fn potential_gap(&self) -> Result<f64, AnalyticError> {
        Ok(self
            .source
            .potential(self.ensemble.branch_mass_gap(), self.separation())?)
    }

    /// `2TΔm/(N m1 m̄ d²)`, the size of the terms the all-orders result drops.
    pub fn neglected_term(&self, time: f64) -> f64 {
        let e = &self.ensemble;
        2.0 * time * e.splitting / (e.atoms * e.ground_mass * e.kinetic_mass * e.width * e.width)
    }

    fn check_time(&self, time: f64) -> Result<(), AnalyticError> {
        if !(time > 0.0) || !time.is_finite() {
            return Err(AnalyticError::NonPositiveTime(time));
        }
        let neglected = self.neglected_term(time);
        if !(neglected < NEGLECTED_TERM_LIMIT) {
            return Err(AnalyticError::ApproximationBreakdown(neglected));
        }
        Ok(())
    }

    fn fast_phase(&self, time: f64, include: bool) -> f64 {
        if include {
            time * self.ensemble.branch_mass_gap()
        } else {
            0.0
        }
    }

    pub fn branch_coefficients(&self, time: f64, include_fast_phase: bool) -> Result<BranchCoefficients, AnalyticError> {
        if time < 0.0 {
            return Err(AnalyticError::NonPositiveTime(time));
        }
        let mut relative_phase = -time * self.potential_gap()?;
        if include_fast_phase {
            relative_phase -= self.fast_phase(time, true);
        }
        Ok(BranchCoefficients {
            c1: Complex64::new(0.5, 0.0),
            c2: -0.5 * Complex64::from_polar(1.0, relative_phase),
            relative_phase,
        })
    }

    pub fn phase_functions(&self, time: f64, include_fast_phase: bool) -> Result<PhaseFunctions, AnalyticError> {
        self.check_time(time)?;
        let e = &self.ensemble;
        let x_cl = self.classical_displacement(time)?;
        let gap = e.branch_mass_gap();
        let potential_term = time * self.potential_gap()?;
        let damping = gap * e.width * x_cl / time;
        let mut f = 2.0 * gap * x_cl * x_cl / (3.0 * time) + potential_term;
        let mut f_leading = -potential_term;
        if include_fast_phase {
            let fast = self.fast_phase(time, true);
            f += fast;
            f_leading -= fast;
        }
        Ok(PhaseFunctions {
            f,
            f_leading,
            g: damping * damping,
            include_fast_phase,
        })
    }

    pub fn dimensionless(&self, time: f64, include_fast_phase: bool) -> Result<DimensionlessParams, AnalyticError> {
        let phases = self.phase_functions(time, include_fast_phase)?;
        let e = &self.ensemble;
        let d2 = e.width * e.width;
        Ok(DimensionlessParams {
            alpha: e.branch_mass_gap() * d2 / time,
            f: phases.f,
            f_leading: phases.f_leading,
            g: phases.g,
            spread: time / (e.kinetic_mass * d2),
        })
    }

    pub fn amp_leading(&self, time: f64, include_fast_phase: bool) -> Result<LeadingAmplification, AnalyticError> {
        let p = self.dimensionless(time, include_fast_phase)?;
        Ok(amp_leading_reduced(p.alpha, p.f_leading))
    }

    pub fn amp_exact(&self, time: f64, include_fast_phase: bool) -> Result<f64, AnalyticError> {
        let p = self.dimensionless(time, include_fast_phase)?;
        Ok(amp_exact_reduced(p.alpha, p.f, p.g))
    }

    pub fn transition_probability(&self, time: f64, include_fast_phase: bool) -> Result<f64, AnalyticError> {
        let p = self.phase_functions(time, include_fast_phase)?;
        Ok(transition_probability_reduced(p.f, p.g))
    }

    pub fn surviving_atoms(&self, p_tran: f64) -> Result<f64, AnalyticError> {
        if !(0.0..=1.0).contains(&p_tran) {
            return Err(AnalyticError::BadProbability(p_tran));
        }
        Ok(self.ensemble.atoms * p_tran)
    }

    /// Free-spreading variance `d(T)² = (d²/2)(1 + (T/(m̄ d²))²)` of the probe
    /// position density.
    pub fn pointer_variance_leading(&self, time: f64) -> Result<f64, AnalyticError> {
        if time < 0.0 {
            return Err(AnalyticError::NonPositiveTime(time));
        }
        let e = &self.ensemble;
        let d2 = e.width * e.width;
        let s = time / (e.kinetic_mass * d2);
        Ok(0.5 * d2 * (1.0 + s * s))
    }

    pub fn point(&self, time: f64, include_fast_phase: bool) -> Result<AmplificationPoint, AnalyticError> {
        let p = self.dimensionless(time, include_fast_phase)?;
        let leading = amp_leading_reduced(p.alpha, p.f_leading);
        let amp_exact = amp_exact_reduced(p.alpha, p.f, p.g);
        let x_cl = self.classical_displacement(time)?;
        Ok(AmplificationPoint {
            time,
            f: p.f,
            g: p.g,
            amp_leading: leading.value,
            leading_diverged: leading.diverged,
            amp_exact,
            p_tran: transition_probability_reduced(p.f, p.g),
            x_cl,
            x_mean: amp_exact * x_cl,
            variance: self.pointer_variance_leading(time)?,
        })
    }

    /// d f_L / dT: the leading phase is linear in the observation time.
    pub fn leading_phase_rate(&self, include_fast_phase: bool) -> Result<f64, AnalyticError> {
        Ok(-self.potential_gap()? - self.fast_phase(1.0, include_fast_phase))
    }

    /// Times in `(0, t_max]` at which `f_L = 2nπ`, or `None` when there are
    /// more than `limit` of them.
    pub fn leading_resonances(&self, t_max: f64, include_fast_phase: bool, limit: usize) -> Result<Option<Vec<f64>>, AnalyticError> {
        let rate = self.leading_phase_rate(include_fast_phase)?.abs();
        if rate == 0.0 {
            return Ok(Some(Vec::new()));
        }
        let period = 2.0 * PI / rate;
        let count = (t_max / period).floor();
        if count > limit as f64 {
            return Ok(None);
        }
        Ok(Some(
            (1..=count as usize)
                .map(|n| 2.0 * PI * n as f64 / rate)
                .filter(|&t| t <= t_max)
                .collect(),
        ))
    }

    /// Time in `[lo, hi]` maximizing `|amp_exact|`, by golden-section search.
    /// The bracket must contain a single peak.
    pub fn exact_peak(&self, lo: f64, hi: f64, include_fast_phase: bool) -> Result<f64, AnalyticError> {
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        let score = |t: f64| self.amp_exact(t, include_fast_phase).map(|a| -a.abs());
        let (mut a, mut b) = (lo, hi);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (score(c)?, score(d)?);
        for _ in 0..200 {
            if (b - a).abs() <= 1e-13 * b.abs() {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = score(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = score(d)?;
            }
        }
        Ok(0.5 * (a + b))
    }
}
