//! Independent wave-packet check of the closed-form amplification.
//!
//! The two internal-state branches are modelled as probe wavefunctions with
//! their own mass and force. Closed-form mode propagates Gaussians exactly;
//! grid mode runs a split-step evolution on the dimensionless problem. Both
//! post-select and read off the pointer moments.

pub mod gaussian;
pub mod grid;
pub mod moments;
pub mod reduction;

use thiserror::Error;

use crate::analytic::{AnalyticError, Experiment};

pub use gaussian::{propagate_gaussian_linear, GaussianPacket, Overlaps, PacketPair};
pub use grid::{split_step_evolve, GridSettings, GridWavefunction};
pub use moments::{post_select_moments, BranchSet, Moments};
pub use reduction::{ReducedProblem, SignConvention};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error("packet is not normalizable: Re w = {0}")]
    NotNormalizable(f64),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("evolution time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("grid escape: boundary mass {boundary_mass:e}, need half extent of at least {required_half_extent:e}")]
    GridEscape {
        boundary_mass: f64,
        required_half_extent: f64,
    },
    #[error("post-selection extinguished: norm {0:e}")]
    Extinguished(f64),
    #[error("not representable on the grid: {0}")]
    NotRepresentable(String),
    #[error("bad reduction: {0}")]
    BadReduction(String),
}

/// `|a − b| / max(|b|, 1)`: relative away from zero, absolute near it, so
/// amplifications crossing zero are compared sensibly.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    ClosedForm,
    Grid(GridSettings),
}

/// Oracle result; lengths in the units of the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    /// `mean / x_cl`; NaN when `degenerate`.
    pub amplification: f64,
    /// Set when `x_cl = 0` and the ratio is undefined.
    pub degenerate: bool,
    pub norm: f64,
    pub mean: f64,
    pub x_cl: f64,
    pub variance: f64,
}

impl ReducedProblem {
    /// Post-selected pointer moments in units of `d`.
    pub fn solve(&self, mode: &OracleMode) -> Result<OraclePoint, OracleError> {
        let branches = match mode {
            OracleMode::ClosedForm => self.closed_form_branches()?,
            OracleMode::Grid(settings) => self.grid_branches(settings)?,
        };
        Ok(point_from(&branches, self.displacement())?)
    }
}

pub(crate) fn point_from(branches: &BranchSet, x_cl: f64) -> Result<OraclePoint, OracleError> {
    let m = post_select_moments(branches)?;
    let degenerate = x_cl == 0.0;
    Ok(OraclePoint {
        amplification: if degenerate { f64::NAN } else { m.mean / x_cl },
        degenerate,
        norm: m.norm,
        mean: m.mean,
        x_cl,
        variance: m.variance,
    })
}

/// Oracle amplification of the physical experiment at observation time
/// `time` (natural units). Both modes work on the dimensionless reduction,
/// which for closed-form mode is only a change of units.
pub fn oracle_amplification(exp: &Experiment, time: f64, include_fast_phase: bool, mode: &OracleMode) -> Result<OraclePoint, OracleError> {
    let reduced = ReducedProblem::from_experiment(exp, time, include_fast_phase)?;
    let d = exp.ensemble.width();
    let p = reduced.solve(mode)?;
    Ok(OraclePoint {
        mean: p.mean * d,
        x_cl: p.x_cl * d,
        variance: p.variance * d * d,
        ..p
    })
}
