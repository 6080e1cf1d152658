//! Dimensionless two-branch problem behind both oracle modes.
//!
//! Lengths are measured in `d` and times in `T`. Branch 1 then has mass
//! `1/s`, branch 2 is heavier by `α`, both share the acceleration `A = −2X`
//! (so that the classical displacement is `X = x_cl/d`), and `χ` is the
//! relative phase the constant potentials leave on the coefficients.

use num_complex::Complex64;

use super::gaussian::{GaussianPacket, PacketPair};
use super::grid::{grid_half_extent, split_step_evolve, GridSettings, GridWavefunction};
use super::moments::BranchSet;
use super::OracleError;
use crate::analytic::{amp_exact_reduced, Experiment};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedProblem {
    /// Branch 1 mass `m̄ d²/T = 1/s`.
    pub mass: f64,
    /// Branch mass gap `N Δm d²/T = α`.
    pub mass_gap: f64,
    /// Common acceleration in units `d/T²`.
    pub acceleration: f64,
    /// Relative coefficient phase `χ`.
    pub chi: f64,
}

/// Which printed analytic formula an oracle value is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// `1 + α e^{−g} sin f_L/(1 − e^{−g} cos f_L)`, `f_L = χ`.
    Leading,
    /// `1 − α e^{−g} sin f/(1 − e^{−g} cos f)`, `f = (2/3)αX² − χ`.
    Exact,
}

impl SignConvention {
    pub const ALL: [SignConvention; 2] = [SignConvention::Leading, SignConvention::Exact];

    pub fn name(&self) -> &'static str {
        match self {
            SignConvention::Leading => "leading",
            SignConvention::Exact => "exact",
        }
    }
}

impl ReducedProblem {
    /// From the groups α, X = x_cl/d, s = T/(m̄ d²) and χ.
    pub fn from_groups(alpha: f64, displacement: f64, spread: f64, chi: f64) -> Result<Self, OracleError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(OracleError::BadReduction(format!("alpha must be positive, got {alpha}")));
        }
        if !(spread > 0.0) || !spread.is_finite() {
            return Err(OracleError::BadReduction(format!("spread must be positive, got {spread}")));
        }
        if !displacement.is_finite() || !chi.is_finite() {
            return Err(OracleError::BadReduction("non-finite displacement or phase".into()));
        }
        Ok(ReducedProblem {
            mass: 1.0 / spread,
            mass_gap: alpha,
            acceleration: -2.0 * displacement,
            chi,
        })
    }

    /// Reduction of the physical experiment at observation time `time`.
    pub fn from_experiment(exp: &Experiment, time: f64, include_fast_phase: bool) -> Result<Self, OracleError> {
        let groups = exp.dimensionless(time, include_fast_phase)?;
        let x_cl = exp.classical_displacement(time)?;
        let chi = exp.branch_coefficients(time, include_fast_phase)?.relative_phase;
        Self::from_groups(groups.alpha, x_cl / exp.ensemble.width(), groups.spread, chi)
    }

    pub fn alpha(&self) -> f64 {
        self.mass_gap
    }

    pub fn spread(&self) -> f64 {
        1.0 / self.mass
    }

    /// `X = x_cl/d`.
    pub fn displacement(&self) -> f64 {
        -0.5 * self.acceleration
    }

    /// `g = α² X²`.
    pub fn damping(&self) -> f64 {
        (self.mass_gap * self.displacement()).powi(2)
    }

    pub fn masses(&self) -> [f64; 2] {
        [self.mass, self.mass + self.mass_gap]
    }

    pub fn forces(&self) -> [f64; 2] {
        [self.mass * self.acceleration, (self.mass + self.mass_gap) * self.acceleration]
    }

    pub fn coefficients(&self) -> [Complex64; 2] {
        [Complex64::new(0.5, 0.0), -0.5 * Complex64::from_polar(1.0, self.chi)]
    }

    pub fn initial_packet(&self) -> GaussianPacket {
        GaussianPacket::ground(1.0).expect("unit width is valid")
    }

    pub fn packet_pair(&self) -> Result<PacketPair, OracleError> {
        PacketPair::propagate(
            &self.initial_packet(),
            self.mass,
            self.mass_gap,
            self.mass * self.acceleration,
            self.mass_gap * self.acceleration,
            1.0,
        )
    }

    pub fn closed_form_branches(&self) -> Result<BranchSet, OracleError> {
        Ok(BranchSet::closed_form(&self.packet_pair()?, self.coefficients()))
    }

    /// Symmetric grid extent from the closed-form end states, or an error
    /// when the momenta cannot be resolved at `points` samples.
    pub fn grid_extent(&self, points: usize) -> Result<f64, OracleError> {
        let pair = self.packet_pair()?;
        let ends = [pair.first, pair.second()];
        let center = ends.iter().map(|p| p.center.abs()).fold(0.0, f64::max);
        let std = ends.iter().map(|p| p.position_std()).fold(self.initial_packet().position_std(), f64::max);
        let half = grid_half_extent(center, std);
        let nyquist = std::f64::consts::PI * points as f64 / (2.0 * half);
        let needed = ends
            .iter()
            .map(|p| p.momentum.abs() + 12.0 * p.momentum_std())
            .fold(0.0, f64::max);
        if !(needed <= nyquist) || !half.is_finite() {
            return Err(OracleError::NotRepresentable(format!(
                "momentum {needed:e} exceeds the grid limit {nyquist:e} at {points} points"
            )));
        }
        Ok(half)
    }

    /// Evolves both branches on the grid.
    pub fn grid_branches(&self, settings: &GridSettings) -> Result<BranchSet, OracleError> {
        let half = self.grid_extent(settings.points)?;
        let initial = self.initial_packet();
        let mut evolved = Vec::with_capacity(2);
        for (label, (mass, force)) in self.masses().into_iter().zip(self.forces()).enumerate() {
            let wf = GridWavefunction::from_packet(&initial, -half, half, settings.points, label as u8 + 1)?;
            let potential: Vec<f64> = (0..wf.len()).map(|k| force * wf.x(k)).collect();
            evolved.push(split_step_evolve(&wf, mass, &potential, 1.0, settings.steps)?);
        }
        BranchSet::grid(&evolved[0], &evolved[1], self.coefficients())
    }

    /// The printed formulas evaluated on this problem.
    pub fn analytic(&self, convention: SignConvention) -> f64 {
        let alpha = self.mass_gap;
        let g = self.damping();
        match convention {
            SignConvention::Leading => amp_exact_reduced(alpha, -self.chi, g),
            SignConvention::Exact => {
                let f = 2.0 / 3.0 * alpha * self.displacement().powi(2) - self.chi;
                amp_exact_reduced(alpha, f, g)
            }
        }
    }
}
