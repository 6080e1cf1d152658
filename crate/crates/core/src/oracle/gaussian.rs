//! Exact Gaussian evolution under `H = p²/2m + F x`.
//!
//! A packet is `(Re w/π)^{1/4} exp(−(w/2)(x−q)² + ip(x−q) + iγ)` with complex
//! `w`. Linear potentials keep it Gaussian, so four numbers carry the whole
//! state.

use num_complex::Complex64;

use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub center: f64,
    pub momentum: f64,
    /// `w`; the real part is the inverse squared width, the imaginary part
    /// the chirp.
    pub width_param: Complex64,
    /// Global phase γ in radians.
    pub phase: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, momentum: f64, width_param: Complex64, phase: f64) -> Result<Self, OracleError> {
        if !(width_param.re > 0.0) || !width_param.im.is_finite() || !width_param.re.is_finite() {
            return Err(OracleError::NotNormalizable(width_param.re));
        }
        Ok(GaussianPacket {
            center,
            momentum,
            width_param,
            phase,
        })
    }

    /// Probe ground state `e^{−x²/2d²}/(πd²)^{1/4}`.
    pub fn ground(width: f64) -> Result<Self, OracleError> {
        Self::new(0.0, 0.0, Complex64::new(1.0 / (width * width), 0.0), 0.0)
    }

    pub fn amplitude(&self) -> f64 {
        (self.width_param.re / std::f64::consts::PI).powf(0.25)
    }

    /// `∫|ψ|²` evaluated from the width parameter; 1 by construction.
    pub fn norm(&self) -> f64 {
        self.amplitude().powi(2) * (std::f64::consts::PI / self.width_param.re).sqrt()
    }

    /// Standard deviation of `|ψ|²`.
    pub fn position_std(&self) -> f64 {
        (0.5 / self.width_param.re).sqrt()
    }

    /// Standard deviation of the momentum density.
    pub fn momentum_std(&self) -> f64 {
        (0.5 / self.width_param.inv().re).sqrt()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let y = x - self.center;
        let exponent = -0.5 * self.width_param * y * y + Complex64::new(0.0, self.momentum * y + self.phase);
        self.amplitude() * exponent.exp()
    }

    pub fn translated(&self, shift: f64) -> Self {
        GaussianPacket {
            center: self.center + shift,
            ..*self
        }
    }
}

/// Dispersion factor `D = 1 + i w t / m`.
fn dispersion(width_param: Complex64, mass: f64, time: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) + Complex64::new(0.0, time / mass) * width_param
}

/// Classical action `∫(p ẋ − H) dt` along the trajectory.
fn action(center: f64, momentum: f64, mass: f64, force: f64, t: f64) -> f64 {
    momentum * momentum * t / (2.0 * mass) - momentum * force * t * t / mass + force * force * t * t * t / (3.0 * mass)
        - force * center * t
}

pub fn propagate_gaussian_linear(packet: &GaussianPacket, mass: f64, force: f64, time: f64) -> Result<GaussianPacket, OracleError> {
    if !(time >= 0.0) {
        return Err(OracleError::NegativeTime(time));
    }
    if !(mass > 0.0) {
        return Err(OracleError::NonPositiveMass(mass));
    }
    let d = dispersion(packet.width_param, mass, time);
    Ok(GaussianPacket {
        center: packet.center + packet.momentum * time / mass - force * time * time / (2.0 * mass),
        momentum: packet.momentum - force * time,
        width_param: packet.width_param / d,
        phase: packet.phase + action(packet.center, packet.momentum, mass, force, time) - 0.5 * d.arg(),
    })
}

/// Overlap integrals `∫ψ_i* ψ_j yᵏ dx`, k = 0, 1, 2, with `y = x − origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlaps {
    pub origin: f64,
    pub i0: [[Complex64; 2]; 2],
    pub i1: [[Complex64; 2]; 2],
    pub i2: [[Complex64; 2]; 2],
}

/// Two packets that started from the same state and evolved with slightly
/// different masses and forces, stored as the first packet plus exact
/// differences. Nothing of order `m` or `F` is ever subtracted, so the pair
/// stays accurate however heavy the probe is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketPair {
    pub first: GaussianPacket,
    pub d_center: f64,
    pub d_momentum: f64,
    pub d_width_param: Complex64,
    pub d_phase: f64,
}

impl PacketPair {
    /// Evolve `initial` for `time` under (`mass`, `force`) and
    /// (`mass + d_mass`, `force + d_force`).
    pub fn propagate(
        initial: &GaussianPacket,
        mass: f64,
        d_mass: f64,
        force: f64,
        d_force: f64,
        time: f64,
    ) -> Result<Self, OracleError> {
        let first = propagate_gaussian_linear(initial, mass, force, time)?;
        let m2 = mass + d_mass;
        if !(m2 > 0.0) {
            return Err(OracleError::NonPositiveMass(m2));
        }
        let (q0, p0, w0, t) = (initial.center, initial.momentum, initial.width_param, time);
        let mm = mass * m2;
        // F₂M₁ − F₁M₂ and F₂²M₁ − F₁²M₂ without forming the large products twice.
        let skew = d_force * mass - force * d_mass;
        let square_skew = d_force * (2.0 * force + d_force) * mass - force * force * d_mass;
        let d1 = dispersion(w0, mass, t);
        let dd = Complex64::new(0.0, -t * d_mass / mm) * w0;
        let d2 = d1 + dd;
        let d_width_param = -w0 * dd / (d1 * d2);
        let d_action = -p0 * p0 * t * d_mass / (2.0 * mm) - p0 * t * t * skew / mm + t * t * t * square_skew / (3.0 * mm)
            - d_force * q0 * t;
        let d_gouy = -0.5 * (Complex64::new(1.0, 0.0) + dd / d1).arg();
        Ok(PacketPair {
            first,
            d_center: -p0 * t * d_mass / mm - 0.5 * t * t * skew / mm,
            d_momentum: -d_force * t,
            d_width_param,
            d_phase: d_action + d_gouy,
        })
    }

    pub fn second(&self) -> GaussianPacket {
        GaussianPacket {
            center: self.first.center + self.d_center,
            momentum: self.first.momentum + self.d_momentum,
            width_param: self.first.width_param + self.d_width_param,
            phase: self.first.phase + self.d_phase,
        }
    }

    /// Analytic overlaps about the first packet's centre.
    pub fn overlaps(&self) -> Overlaps {
        let w1 = self.first.width_param;
        let w2 = w1 + self.d_width_param;
        let a1 = (w1.re / std::f64::consts::PI).powf(0.25);
        let a2 = (w2.re / std::f64::consts::PI).powf(0.25);
        let (dq, dp) = (self.d_center, self.d_momentum);
        let p2 = self.first.momentum + dp;
        let i = Complex64::i();

        let a = w1.conj() + w2;
        let b = w2 * dq + i * dp;
        let c = -0.5 * w2 * dq * dq - i * p2 * dq + i * self.d_phase;
        let base = a1 * a2 * (2.0 * std::f64::consts::PI / a).sqrt() * (b * b / (2.0 * a) + c).exp();
        let mean = b / a;
        let cross = [base, mean * base, (mean * mean + a.inv()) * base];

        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s1 = 0.5 / w1.re;
        let s2 = 0.5 / w2.re;
        Overlaps {
            origin: self.first.center,
            i0: [[one, cross[0]], [cross[0].conj(), one]],
            i1: [[zero, cross[1]], [cross[1].conj(), Complex64::new(dq, 0.0)]],
            i2: [[Complex64::new(s1, 0.0), cross[2]], [cross[2].conj(), Complex64::new(dq * dq + s2, 0.0)]],
        }
    }
}
