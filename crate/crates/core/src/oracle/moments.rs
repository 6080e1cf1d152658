//! Post-selection of the two-branch pointer state and its moments.

use num_complex::Complex64;

use super::gaussian::{Overlaps, PacketPair};
use super::grid::{grid_overlaps, GridWavefunction};
use super::OracleError;

/// Norm below which the post-selected state counts as extinguished.
pub const EXTINGUISHED_NORM: f64 = 1e-30;
/// Cancellation floor relative to `|c₁|² + |c₂|²`: below it the norm is
/// rounding noise.
pub const EXTINGUISHED_RELATIVE: f64 = 1e-14;

/// Two branches with their post-selection coefficients, reduced to the
/// overlap integrals every moment needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSet {
    pub coefficients: [Complex64; 2],
    pub overlaps: Overlaps,
}

impl BranchSet {
    pub fn closed_form(pair: &PacketPair, coefficients: [Complex64; 2]) -> Self {
        BranchSet {
            coefficients,
            overlaps: pair.overlaps(),
        }
    }

    pub fn grid(first: &GridWavefunction, second: &GridWavefunction, coefficients: [Complex64; 2]) -> Result<Self, OracleError> {
        Ok(BranchSet {
            coefficients,
            overlaps: grid_overlaps(first, second)?,
        })
    }

    pub fn with_coefficients(&self, coefficients: [Complex64; 2]) -> Self {
        BranchSet { coefficients, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// `⟨φ_f|φ_f⟩`, the post-selection probability.
    pub norm: f64,
    pub mean: f64,
    pub variance: f64,
}

fn quadratic_form(c: &[Complex64; 2], table: &[[Complex64; 2]; 2]) -> f64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            sum += c[i].conj() * c[j] * table[i][j];
        }
    }
    sum.re
}

pub fn post_select_moments(branches: &BranchSet) -> Result<Moments, OracleError> {
    let c = &branches.coefficients;
    let ov = &branches.overlaps;
    let norm = quadratic_form(c, &ov.i0);
    let scale = c[0].norm_sqr() + c[1].norm_sqr();
    if !(norm >= EXTINGUISHED_NORM.max(EXTINGUISHED_RELATIVE * scale)) {
        return Err(OracleError::Extinguished(norm));
    }
    let shift = quadratic_form(c, &ov.i1) / norm;
    let second = quadratic_form(c, &ov.i2) / norm;
    Ok(Moments {
        norm,
        mean: ov.origin + shift,
        variance: second - shift * shift,
    })
}
