//! Finite-dimensional von Neumann measurement toolkit: weak values, the
//! ordinary (non post-selected) pointer distribution, and leading-order
//! pointer shifts.
//!
//! The probe is always the symmetric Gaussian `exp(-x²/2d²)/(πd²)^{1/4}`,
//! whose position density has variance `d²/2`. The system–probe coupling is
//! impulsive.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeakError {
    #[error("state vector must contain at least one non-zero finite amplitude")]
    ZeroState,
    #[error("observable is not Hermitian (max |A - A†| = {0:e})")]
    NotHermitian(f64),
    #[error("observable must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("post-selection singular: |<psi_f|psi_i>| = {overlap:e} is below {threshold:e}")]
    SingularPostSelection { overlap: f64, threshold: f64 },
    #[error("probe width must be positive, got {0}")]
    BadWidth(f64),
    #[error("invalid sampling grid: {0}")]
    BadGrid(String),
}

/// Pure state of the measured system. Normalization is not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, WeakError> {
        let finite = amplitudes.iter().all(|a| a.re.is_finite() && a.im.is_finite());
        if !finite || amplitudes.iter().all(|a| a.norm_sqr() == 0.0) {
            return Err(WeakError::ZeroState);
        }
        Ok(StateVector { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self, WeakError> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }
}

/// Hermitian operator on the measured system.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DMatrix<Complex64>,
}

impl Observable {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, WeakError> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(WeakError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let skew = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(skew <= 1e-12 * scale) {
            return Err(WeakError::NotHermitian(skew));
        }
        Ok(Observable { matrix })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, WeakError> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(WeakError::NotSquare { rows: n, cols: r.len() });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Pauli σ_z.
    pub fn sigma_z() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Observable {
            matrix: DMatrix::from_row_slice(2, 2, &[one, 0.0.into(), 0.0.into(), -one]),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let v = nalgebra::DVector::from_column_slice(&psi.amplitudes);
        StateVector {
            amplitudes: (&self.matrix * v).iter().copied().collect(),
        }
    }

    /// Eigenvalues with the squared overlaps of `psi` on each eigenspace.
    /// Eigenvalues closer than `1e-10 * spectral radius` are merged.
    pub fn spectral_weights(&self, psi: &StateVector) -> Vec<(f64, f64)> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let col = eig.eigenvectors.column(k);
                let amp: Complex64 = col
                    .iter()
                    .zip(&psi.amplitudes)
                    .map(|(e, p)| e.conj() * p)
                    .sum();
                (a, amp.norm_sqr())
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let radius = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
        let tol = 1e-10 * radius.max(f64::MIN_POSITIVE);
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (a, w) in pairs {
            match merged.last_mut() {
                Some(last) if (a - last.0).abs() <= tol => last.1 += w,
                _ => merged.push((a, w)),
            }
        }
        merged
    }
}

/// ⟨ψ_f|O|ψ_i⟩/⟨ψ_f|ψ_i⟩ together with the data needed to judge how well
/// conditioned the post-selection is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue {
    pub value: Complex64,
    /// ⟨ψ_f|ψ_i⟩
    pub overlap: Complex64,
    /// |⟨ψ_f|ψ_i⟩| / (‖ψ_i‖‖ψ_f‖), in [0, 1].
    pub conditioning: f64,
}

/// Threshold below which the pre/post overlap counts as orthogonal,
/// relative to `‖ψ_i‖‖ψ_f‖`.
pub const DEFAULT_ORTHOGONALITY: f64 = 1e-12;

pub fn weak_value(
    observable: &Observable,
    psi_i: &StateVector,
    psi_f: &StateVector,
) -> Result<WeakValue, WeakError> {
    weak_value_with_threshold(observable, psi_i, psi_f, DEFAULT_ORTHOGONALITY)
}

pub fn weak_value_with_threshold(
    observable: &Observable,
    psi_i: &StateVector,
    psi_f: &StateVector,
    relative_threshold: f64,
) -> Result<WeakValue, WeakError> {
    if psi_i.dim() != observable.dim() {
        return Err(WeakError::DimensionMismatch(psi_i.dim(), observable.dim()));
    }
    if psi_f.dim() != observable.dim() {
        return Err(WeakError::DimensionMismatch(psi_f.dim(), observable.dim()));
    }
    let scale = psi_i.norm() * psi_f.norm();
    let overlap = psi_f.inner(psi_i);
    let threshold = relative_threshold * scale;
    if !(overlap.norm() > threshold) {
        return Err(WeakError::SingularPostSelection {
            overlap: overlap.norm(),
            threshold,
        });
    }
    let numerator = psi_f.inner(&observable.apply(psi_i));
    Ok(WeakValue {
        value: numerator / overlap,
        overlap,
        conditioning: overlap.norm() / scale,
    })
}

/// Uniform sampling `x_min, x_min + h, ..., x_max` with `points` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Sampling {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self, WeakError> {
        if points < 2 || !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(WeakError::BadGrid(format!(
                "need x_min < x_max and at least 2 points, got [{x_min}, {x_max}] with {points}"
            )));
        }
        Ok(Sampling { x_min, x_max, points })
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + self.step() * k as f64
    }
}

/// Position density of the probe after an ordinary (unselected) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerDistribution {
    pub sampling: Sampling,
    pub density: Vec<f64>,
    /// `(g·a_k, w_k)`: peak location and weight of each eigenspace.
    pub components: Vec<(f64, f64)>,
}

impl PointerDistribution {
    /// Trapezoidal integral of the sampled density.
    pub fn integral(&self) -> f64 {
        let h = self.sampling.step();
        let n = self.density.len();
        h * (self.density.iter().sum::<f64>() - 0.5 * (self.density[0] + self.density[n - 1]))
    }

    /// Sample positions of interior local maxima.
    pub fn peaks(&self) -> Vec<f64> {
        self.density
            .windows(3)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0] && w[1] >= w[2])
            .map(|(k, _)| self.sampling.x(k + 1))
            .collect()
    }
}

/// |⟨x|φ_i⟩|² for the symmetric probe of width `d`.
pub fn probe_density(x: f64, d: f64) -> f64 {
    (-(x * x) / (d * d)).exp() / (std::f64::consts::PI.sqrt() * d)
}

/// P(x) = Σ_k |⟨a_k|ψ_i⟩|² |φ_i(x − g a_k)|², with ψ_i normalized first.
pub fn pointer_distribution(
    observable: &Observable,
    psi_i: &StateVector,
    coupling: f64,
    d: f64,
    sampling: Sampling,
) -> Result<PointerDistribution, WeakError> {
    if psi_i.dim() != observable.dim() {
        return Err(WeakError::DimensionMismatch(psi_i.dim(), observable.dim()));
    }
    if !(d > 0.0) {
        return Err(WeakError::BadWidth(d));
    }
    let norm2 = psi_i.norm().powi(2);
    let components: Vec<(f64, f64)> = observable
        .spectral_weights(psi_i)
        .into_iter()
        .map(|(a, w)| (coupling * a, w / norm2))
        .collect();
    let density = (0..sampling.points)
        .map(|k| {
            let x = sampling.x(k);
            components.iter().map(|&(c, w)| w * probe_density(x - c, d)).sum()
        })
        .collect();
    Ok(PointerDistribution {
        sampling,
        density,
        components,
    })
}

/// How the probe couples to the measured observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// exp(−i g O p̂): the pointer is translated, shift g·Re W.
    Momentum,
    /// exp(−i W x̂): the pointer is boosted, shift d²·Im W.
    Position,
}

/// Leading-order shift of the post-selected pointer mean.
///
/// For [`Coupling::Position`] the weak value is expected to already carry the
/// interaction time (as in `W = T ⟨ψ_f|V'|ψ(T)⟩/⟨ψ_f|ψ(T)⟩`) and `strength` is
/// ignored.
pub fn pointer_shift_leading(w: &WeakValue, coupling: Coupling, strength: f64, d: f64) -> f64 {
    match coupling {
        Coupling::Momentum => strength * w.value.re,
        Coupling::Position => d * d * w.value.im,
    }
}
