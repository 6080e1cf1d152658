//! Split-step spectral evolution on a periodic grid.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

use super::gaussian::{GaussianPacket, Overlaps};
use super::OracleError;

/// Fraction of the grid (per side) watched by the boundary-mass check.
pub const BOUNDARY_FRACTION: usize = 32;
/// Largest probability tolerated in the watched edge regions.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSettings {
    pub points: usize,
    pub steps: usize,
}

impl Default for GridSettings {
    fn default() -> Self {
        GridSettings {
            points: 4096,
            steps: 1000,
        }
    }
}

/// Samples `ψ(x_k)` at `x_k = x_min + k (x_max − x_min)/n`, `k < n`; the grid
/// is periodic so `x_max` itself is not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    pub samples: Vec<Complex64>,
    pub x_min: f64,
    pub x_max: f64,
    pub branch_label: u8,
}

impl GridWavefunction {
    pub fn new(samples: Vec<Complex64>, x_min: f64, x_max: f64, branch_label: u8) -> Result<Self, OracleError> {
        let n = samples.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(OracleError::BadGrid(format!("point count {n} is not a power of two")));
        }
        if !(x_max > x_min) {
            return Err(OracleError::BadGrid(format!("empty extent [{x_min}, {x_max}]")));
        }
        Ok(GridWavefunction {
            samples,
            x_min,
            x_max,
            branch_label,
        })
    }

    pub fn from_packet(packet: &GaussianPacket, x_min: f64, x_max: f64, points: usize, branch_label: u8) -> Result<Self, OracleError> {
        let dx = (x_max - x_min) / points as f64;
        let samples = (0..points).map(|k| packet.eval(x_min + k as f64 * dx)).collect();
        Self::new(samples, x_min, x_max, branch_label)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.len() as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx()
    }

    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx()
    }

    /// Probability in the outer `1/32` of the grid at either end.
    pub fn boundary_mass(&self) -> f64 {
        let edge = self.len() / BOUNDARY_FRACTION;
        let head: f64 = self.samples[..edge].iter().map(|z| z.norm_sqr()).sum();
        let tail: f64 = self.samples[self.len() - edge..].iter().map(|z| z.norm_sqr()).sum();
        (head + tail) * self.dx() / self.norm()
    }

    /// Half-width a centred grid needs for this state.
    pub fn required_half_extent(&self) -> f64 {
        let norm = self.norm();
        let w: Vec<f64> = self.samples.iter().map(|z| z.norm_sqr()).collect();
        let dx = self.dx();
        let mean = w.iter().enumerate().map(|(k, p)| p * self.x(k)).sum::<f64>() * dx / norm;
        let var = w.iter().enumerate().map(|(k, p)| p * (self.x(k) - mean).powi(2)).sum::<f64>() * dx / norm;
        grid_half_extent(mean, var.sqrt())
    }

    /// `‖ψ − φ‖₂` against another wavefunction on the same grid.
    pub fn l2_distance(&self, other: &GridWavefunction) -> f64 {
        let sum: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (sum * self.dx()).sqrt()
    }

    /// `‖ψ − φ‖₂` against a closed-form packet sampled on this grid.
    pub fn l2_distance_to(&self, packet: &GaussianPacket) -> f64 {
        let sum: f64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, a)| (a - packet.eval(self.x(k))).norm_sqr())
            .sum();
        (sum * self.dx()).sqrt()
    }

    fn same_grid(&self, other: &GridWavefunction) -> bool {
        self.len() == other.len() && self.x_min == other.x_min && self.x_max == other.x_max
    }
}

/// Half extent `12·max(σ, |centre| + 6σ)` of the default grid layout.
pub fn grid_half_extent(center: f64, std: f64) -> f64 {
    12.0 * std.max(center.abs() + 6.0 * std)
}

/// Angular wavenumbers in FFT order.
fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dx);
    (0..n)
        .map(|k| if k < n / 2 { k as f64 } else { k as f64 - n as f64 } * dk)
        .collect()
}

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Plans {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

/// Strang splitting: half kinetic step, full potential step, half kinetic
/// step, repeated `steps` times. `potential[k]` is sampled at `wf.x(k)`.
pub fn split_step_evolve(
    wf: &GridWavefunction,
    mass: f64,
    potential: &[f64],
    time: f64,
    steps: usize,
) -> Result<GridWavefunction, OracleError> {
    let n = wf.len();
    if steps == 0 {
        return Err(OracleError::BadGrid("at least one step is required".into()));
    }
    if potential.len() != n {
        return Err(OracleError::BadGrid(format!(
            "potential has {} samples, grid has {n}",
            potential.len()
        )));
    }
    if !(mass > 0.0) {
        return Err(OracleError::NonPositiveMass(mass));
    }
    if !(time >= 0.0) {
        return Err(OracleError::NegativeTime(time));
    }
    let dt = time / steps as f64;
    let scale = 1.0 / n as f64;
    let half_kinetic: Vec<Complex64> = wavenumbers(n, wf.dx())
        .iter()
        .map(|k| Complex64::from_polar(scale, -0.25 * k * k * dt / mass))
        .collect();
    let full_kinetic: Vec<Complex64> = half_kinetic.iter().map(|z| z * z / scale).collect();
    let kick: Vec<Complex64> = potential
        .iter()
        .map(|v| Complex64::from_polar(1.0, -v * dt))
        .collect();

    let plans = Plans::new(n);
    let mut buf = wf.samples.clone();
    let mut scratch = vec![Complex64::new(0.0, 0.0); plans.forward.get_inplace_scratch_len()];

    // Adjacent half kinetic steps are merged; `full_kinetic` carries one 1/n
    // normalisation, the half steps at either end carry theirs.
    plans.forward.process_with_scratch(&mut buf, &mut scratch);
    for step in 0..steps {
        let factors = if step == 0 { &half_kinetic } else { &full_kinetic };
        for (z, f) in buf.iter_mut().zip(factors) {
            *z *= f;
        }
        plans.inverse.process_with_scratch(&mut buf, &mut scratch);
        for (z, f) in buf.iter_mut().zip(&kick) {
            *z *= f;
        }
        plans.forward.process_with_scratch(&mut buf, &mut scratch);
    }
    for (z, f) in buf.iter_mut().zip(&half_kinetic) {
        *z *= f;
    }
    plans.inverse.process_with_scratch(&mut buf, &mut scratch);

    let out = GridWavefunction {
        samples: buf,
        ..wf.clone()
    };
    let boundary_mass = out.boundary_mass();
    if !(boundary_mass < BOUNDARY_MASS_LIMIT) {
        return Err(OracleError::GridEscape {
            boundary_mass,
            required_half_extent: out.required_half_extent(),
        });
    }
    Ok(out)
}

/// Numerical overlaps `∫ψ_i* ψ_j xᵏ dx` about `x = 0`.
pub fn grid_overlaps(first: &GridWavefunction, second: &GridWavefunction) -> Result<Overlaps, OracleError> {
    if !first.same_grid(second) {
        return Err(OracleError::BadGrid("branches live on different grids".into()));
    }
    let dx = first.dx();
    let branches = [&first.samples, &second.samples];
    let zero = Complex64::new(0.0, 0.0);
    let mut tables = [[[zero; 2]; 2]; 3];
    for i in 0..2 {
        for j in 0..2 {
            let mut sums = [zero; 3];
            for k in 0..first.len() {
                let x = first.x(k);
                let v = branches[i][k].conj() * branches[j][k];
                sums[0] += v;
                sums[1] += v * x;
                sums[2] += v * x * x;
            }
            for (t, s) in tables.iter_mut().zip(sums) {
                t[i][j] = s * dx;
            }
        }
    }
    Ok(Overlaps {
        origin: 0.0,
        i0: tables[0],
        i1: tables[1],
        i2: tables[2],
    })
}

#[cfg(test)]
mod tests {
    use super::super::gaussian::propagate_gaussian_linear;
    use super::*;

    fn grid(points: usize, half: f64) -> (GaussianPacket, GridWavefunction) {
        let p = GaussianPacket::ground(1.0).unwrap();
        let wf = GridWavefunction::from_packet(&p, -half, half, points, 1).unwrap();
        (p, wf)
    }

    fn linear(wf: &GridWavefunction, force: f64) -> Vec<f64> {
        (0..wf.len()).map(|k| force * wf.x(k)).collect()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridWavefunction::new(vec![Complex64::new(0.0, 0.0); 100], 0.0, 1.0, 1).is_err());
        assert!(GridWavefunction::new(vec![Complex64::new(0.0, 0.0); 64], 1.0, 1.0, 1).is_err());
        let (_, wf) = grid(64, 10.0);
        assert!(split_step_evolve(&wf, 1.0, &[0.0; 64], 1.0, 0).is_err());
        assert!(split_step_evolve(&wf, 1.0, &[0.0; 32], 1.0, 1).is_err());
    }

    #[test]
    fn norm_conserved() {
        let (_, wf) = grid(2048, 20.0);
        let pot: Vec<f64> = (0..2048).map(|k| 0.05 * wf.x(k).powi(2) + 0.3 * wf.x(k)).collect();
        let out = split_step_evolve(&wf, 1.0, &pot, 2.0, 1000).unwrap();
        assert!((out.norm() - wf.norm()).abs() < 1e-12, "{}", out.norm() - wf.norm());
    }

    #[test]
    fn free_matches_closed_form() {
        let (p, wf) = grid(2048, 20.0);
        let out = split_step_evolve(&wf, 1.0, &vec![0.0; 2048], 2.0, 1000).unwrap();
        let exact = propagate_gaussian_linear(&p, 1.0, 0.0, 2.0).unwrap();
        let err = out.l2_distance_to(&exact);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn linear_matches_closed_form() {
        let (p, wf) = grid(2048, 20.0);
        let out = split_step_evolve(&wf, 2.0, &linear(&wf, 0.3), 1.0, 1000).unwrap();
        let exact = propagate_gaussian_linear(&p, 2.0, 0.3, 1.0).unwrap();
        let err = out.l2_distance_to(&exact);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn second_order_in_step() {
        let (p, wf) = grid(1024, 20.0);
        let pot = linear(&wf, 1.5);
        let exact = propagate_gaussian_linear(&p, 1.0, 1.5, 1.0).unwrap();
        let coarse = split_step_evolve(&wf, 1.0, &pot, 1.0, 50).unwrap().l2_distance_to(&exact);
        let fine = split_step_evolve(&wf, 1.0, &pot, 1.0, 100).unwrap().l2_distance_to(&exact);
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.8, "{ratio}");
    }

    #[test]
    fn escape_is_reported() {
        let (_, wf) = grid(256, 6.0);
        let err = split_step_evolve(&wf, 1.0, &linear(&wf, -2.0), 3.0, 200).unwrap_err();
        match err {
            OracleError::GridEscape { required_half_extent, .. } => assert!(required_half_extent > 6.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_overlaps_of_single_packet() {
        let p = GaussianPacket::new(0.5, 0.2, Complex64::new(1.0, 0.0), 0.0).unwrap();
        let wf = GridWavefunction::from_packet(&p, -16.0, 16.0, 1024, 1).unwrap();
        let ov = grid_overlaps(&wf, &wf).unwrap();
        assert!((ov.i0[0][0].re - 1.0).abs() < 1e-12);
        assert!((ov.i1[0][1].re - 0.5).abs() < 1e-12);
        assert!((ov.i2[1][1].re - 0.25 - 0.5).abs() < 1e-12);
    }
}
