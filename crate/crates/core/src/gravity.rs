//! Newtonian potentials of the external source and their linearization
//! around the initial separation.
//!
//! All arguments and results are natural units (see [`crate::units`]).
//! The displacement coordinate `x` grows away from the source (`r = R + x`),
//! so an attracted probe has `x_cl <= 0`.

use thiserror::Error;

use crate::units::gravitational_constant;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GravityError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("r = {r} lies inside the cylinder of radius {radius}")]
    InsideCylinder { r: f64, radius: f64 },
    #[error("observation time must be non-negative, got {0}")]
    NegativeTime(f64),
}

/// Shape of the external gravitating body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GravitySource {
    /// Point mass `M` (eV).
    PointMass { mass: f64 },
    /// Infinite cylinder with mass per unit length `density` (eV²) and
    /// radius `radius` (eV⁻¹).
    Cylinder { density: f64, radius: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<(), GravityError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GravityError::NonPositive { name, value })
    }
}

impl GravitySource {
    pub fn point_mass(mass: f64) -> Result<Self, GravityError> {
        positive("M", mass)?;
        Ok(GravitySource::PointMass { mass })
    }

    pub fn cylinder(density: f64, radius: f64) -> Result<Self, GravityError> {
        positive("rho", density)?;
        positive("l", radius)?;
        Ok(GravitySource::Cylinder { density, radius })
    }

    fn check_radius(&self, r: f64) -> Result<(), GravityError> {
        positive("r", r)?;
        if let GravitySource::Cylinder { radius, .. } = *self {
            if r < radius {
                return Err(GravityError::InsideCylinder { r, radius });
            }
        }
        Ok(())
    }

    /// Classical potential energy V_G(r) of a probe of mass `m`.
    ///
    /// Point mass: `-G M m / r`. Cylinder: `2 m G rho ln(r / (l sqrt(e)))`,
    /// which vanishes at `r = l sqrt(e)`.
    pub fn potential(&self, m: f64, r: f64) -> Result<f64, GravityError> {
        self.check_radius(r)?;
        let g = gravitational_constant();
        Ok(match *self {
            GravitySource::PointMass { mass } => -g * mass * m / r,
            GravitySource::Cylinder { density, radius } => {
                2.0 * m * g * density * ((r / radius).ln() - 0.5)
            }
        })
    }

    /// dV_G/dr, always positive. The force on the probe is its negative.
    pub fn gradient(&self, m: f64, r: f64) -> Result<f64, GravityError> {
        self.check_radius(r)?;
        let g = gravitational_constant();
        Ok(match *self {
            GravitySource::PointMass { mass } => g * mass * m / (r * r),
            GravitySource::Cylinder { density, .. } => 2.0 * m * g * density / r,
        })
    }

    /// Gravitational acceleration magnitude at `r`, independent of the probe.
    pub fn acceleration(&self, r: f64) -> Result<f64, GravityError> {
        self.gradient(1.0, r)
    }

    /// x_cl(T) = -(T²/2m) dV_G(R)/dr, evaluated with an explicit probe mass.
    ///
    /// The mass cancels for both source shapes; this form exists so that the
    /// cancellation can be checked.
    pub fn classical_displacement_with_mass(
        &self,
        m: f64,
        separation: f64,
        time: f64,
    ) -> Result<f64, GravityError> {
        if time < 0.0 {
            return Err(GravityError::NegativeTime(time));
        }
        positive("m", m)?;
        Ok(-(time * time) / (2.0 * m) * self.gradient(m, separation)?)
    }

    /// Classical displacement of the probe after `time`; never positive.
    pub fn classical_displacement(&self, separation: f64, time: f64) -> Result<f64, GravityError> {
        if time < 0.0 {
            return Err(GravityError::NegativeTime(time));
        }
        Ok(-0.5 * time * time * self.acceleration(separation)?)
    }

    /// |x_cl(T)| / R: how far the linearized potential is being stretched.
    pub fn linearization_validity(&self, separation: f64, time: f64) -> Result<f64, GravityError> {
        Ok(self.classical_displacement(separation, time)?.abs() / separation)
    }
}

/// Initial separation `R` plus displacement `x`, with `r = R + x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    separation: f64,
    displacement: f64,
}

impl Geometry {
    pub fn new(source: &GravitySource, separation: f64) -> Result<Self, GravityError> {
        positive("R", separation)?;
        source.check_radius(separation)?;
        Ok(Geometry {
            separation,
            displacement: 0.0,
        })
    }

    pub fn with_displacement(self, displacement: f64) -> Self {
        Geometry {
            displacement,
            ..self
        }
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn displacement(&self) -> f64 {
        self.displacement
    }

    pub fn r(&self) -> f64 {
        self.separation + self.displacement
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{from_natural, to_natural, Dimension, Quantity, G_SI};

    fn kg(v: f64) -> f64 {
        to_natural(Quantity::kilograms(v).unwrap())
    }
    fn m(v: f64) -> f64 {
        to_natural(Quantity::metres(v).unwrap())
    }
    fn s(v: f64) -> f64 {
        to_natural(Quantity::seconds(v).unwrap())
    }
    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn point_potential_in_joules() {
        let src = GravitySource::point_mass(kg(100.0)).unwrap();
        let v = src.potential(kg(1.0), m(0.1)).unwrap();
        let joules = from_natural(v, Dimension::Energy).unwrap().value();
        assert!(rel(joules, -G_SI * 100.0 / 0.1) < 1e-9, "{joules}");
        assert!(rel(joules, -6.6743e-8) < 1e-9);
    }

    #[test]
    fn point_gradient_in_newtons() {
        let src = GravitySource::point_mass(kg(100.0)).unwrap();
        let grad = src.gradient(kg(1.0), m(0.1)).unwrap();
        // eV per eV⁻¹ -> J/m: eV² · (J/eV) / (m per eV⁻¹)
        let newtons = grad / to_natural(Quantity::joules(1.0).unwrap()) * m(1.0);
        assert!(rel(newtons, 6.6743e-7) < 1e-9, "{newtons}");
    }

    #[test]
    fn cylinder_zero_at_reference_radius() {
        let src = GravitySource::cylinder(1e30, 100.0).unwrap();
        let r0 = 100.0 * 0.5f64.exp();
        assert!(src.potential(3.0, r0).unwrap().abs() < 1e-12 * src.gradient(3.0, r0).unwrap() * r0);
    }

    #[test]
    fn cylinder_rejects_inside() {
        let src = GravitySource::cylinder(1.0, 10.0).unwrap();
        assert!(matches!(src.potential(1.0, 9.0), Err(GravityError::InsideCylinder { .. })));
        assert!(src.gradient(1.0, 10.0).is_ok());
        assert!(Geometry::new(&src, 5.0).is_err());
    }

    #[test]
    fn rejects_bad_radius() {
        let src = GravitySource::point_mass(1.0).unwrap();
        assert!(src.potential(1.0, 0.0).is_err());
        assert!(src.potential(1.0, -1.0).is_err());
        assert!(GravitySource::point_mass(0.0).is_err());
        assert!(GravitySource::cylinder(1.0, -1.0).is_err());
    }

    #[test]
    fn point_potential_diverges_negative() {
        let src = GravitySource::point_mass(1.0).unwrap();
        let mut prev = 0.0;
        for k in 0..7 {
            let v = src.potential(1.0, 10f64.powi(-k)).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn gradient_matches_central_difference() {
        let sources = [
            GravitySource::point_mass(kg(100.0)).unwrap(),
            GravitySource::cylinder(kg(50.0) / m(1.0), m(0.02)).unwrap(),
        ];
        for src in sources {
            for r in [m(0.05), m(0.1), m(0.7)] {
                let h = 1e-6 * r;
                let fd = (src.potential(2.0, r + h).unwrap() - src.potential(2.0, r - h).unwrap())
                    / (2.0 * h);
                let an = src.gradient(2.0, r).unwrap();
                assert!(rel(fd, an) < 1e-6, "{fd} {an}");
                assert!(an > 0.0);
            }
        }
    }

    #[test]
    fn cylinder_gradient_is_inverse_r() {
        let src = GravitySource::cylinder(7.0, 1.0).unwrap();
        let c = 2.0 * src.gradient(1.0, 2.0).unwrap();
        for r in [3.0, 10.0, 1e4] {
            assert!(rel(r * src.gradient(1.0, r).unwrap(), c) < 1e-14);
        }
    }

    #[test]
    fn classical_displacement_benchmark() {
        let src = GravitySource::point_mass(kg(100.0)).unwrap();
        let x = src.classical_displacement(m(0.1), s(0.5)).unwrap();
        let metres = from_natural(x, Dimension::Length).unwrap().value();
        let oracle = -G_SI * 100.0 * 0.25 / (2.0 * 0.01);
        assert!(rel(metres, oracle) < 1e-9, "{metres} vs {oracle}");
        assert!(rel(metres, -8.343e-8) < 1e-3);
        assert_eq!(src.classical_displacement(m(0.1), 0.0).unwrap(), 0.0);
        let x2 = src.classical_displacement(m(0.1), s(1.0)).unwrap();
        assert!(rel(x2, 4.0 * x) < 1e-14);
        let ratio = src.linearization_validity(m(0.1), s(0.5)).unwrap();
        assert!(rel(ratio, 8.343e-7) < 1e-3);
        assert_eq!(src.linearization_validity(m(0.1), 0.0).unwrap(), 0.0);
        assert!(src.classical_displacement(m(0.1), -1.0).is_err());
    }

    #[test]
    fn displacement_is_mass_independent() {
        let sources = [
            GravitySource::point_mass(kg(100.0)).unwrap(),
            GravitySource::cylinder(kg(50.0) / m(1.0), m(0.02)).unwrap(),
        ];
        for src in sources {
            let a = src.classical_displacement_with_mass(kg(1e-25), m(0.1), s(0.5)).unwrap();
            let b = src.classical_displacement_with_mass(kg(3.7e3), m(0.1), s(0.5)).unwrap();
            let c = src.classical_displacement(m(0.1), s(0.5)).unwrap();
            assert!(rel(a, b) <= 1e-14);
            assert!(rel(a, c) <= 1e-14);
            assert!(a <= 0.0);
        }
    }

    #[test]
    fn validity_monotone_in_time() {
        let src = GravitySource::cylinder(1e3, 1.0).unwrap();
        let mut prev = -1.0;
        for k in 0..50 {
            let v = src.linearization_validity(5.0, k as f64 * 0.1).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn geometry_r() {
        let src = GravitySource::point_mass(1.0).unwrap();
        let g = Geometry::new(&src, 2.0).unwrap().with_displacement(-0.5);
        assert_eq!(g.r(), 1.5);
        assert_eq!(g.separation(), 2.0);
        assert_eq!(g.displacement(), -0.5);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn potentials_increase_with_r(r in 1.0f64..1e6, dr in 1e-3f64..1e3) {
                for src in [
                    GravitySource::point_mass(1e40).unwrap(),
                    GravitySource::cylinder(1e40, 1.0).unwrap(),
                ] {
                    prop_assert!(src.potential(1.0, r + dr).unwrap() > src.potential(1.0, r).unwrap());
                }
            }
        }
    }
}
