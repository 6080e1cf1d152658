//! Physical constants and conversion between SI and natural units.
//!
//! Natural units here mean ħ = c = 1 with energies measured in eV, so lengths
//! and times carry dimension eV⁻¹, masses eV, and linear mass densities eV².
//! Everything past this module works with plain `f64` values in these units.
//!
//! Constants are CODATA 2018:
//!
//! | constant | value |
//! |----------|-------|
//! | ħ        | 6.582119569×10⁻¹⁶ eV·s |
//! | ħc       | 197.3269804 MeV·fm |
//! | G        | 6.67430×10⁻¹¹ m³ kg⁻¹ s⁻² |
//! | c        | 299792458 m/s (exact) |
//! | e        | 1.602176634×10⁻¹⁹ J/eV (exact) |

use std::fmt;

use thiserror::Error;

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582119569e-16;
/// ħc in eV·m (197.3269804 MeV·fm).
pub const HBARC_EV_M: f64 = 197.3269804e-9;
/// Newtonian constant of gravitation in m³ kg⁻¹ s⁻².
pub const G_SI: f64 = 6.67430e-11;
/// Speed of light in m/s.
pub const C_M_PER_S: f64 = 299_792_458.0;
/// Joules per electronvolt.
pub const JOULE_PER_EV: f64 = 1.602176634e-19;
/// Unified atomic mass unit in kg.
pub const ATOMIC_MASS_UNIT_KG: f64 = 1.660_539_066_60e-27;

/// Natural-unit value of one metre (eV⁻¹).
const PER_METRE: f64 = 1.0 / HBARC_EV_M;
/// Natural-unit value of one second (eV⁻¹).
const PER_SECOND: f64 = 1.0 / HBAR_EV_S;
/// Natural-unit value of one kilogram (eV).
const PER_KILOGRAM: f64 = C_M_PER_S * C_M_PER_S / JOULE_PER_EV;
/// Natural-unit value of one joule (eV).
const PER_JOULE: f64 = 1.0 / JOULE_PER_EV;

/// G in eV⁻².
pub fn gravitational_constant() -> f64 {
    G_SI * PER_METRE.powi(3) / (PER_KILOGRAM * PER_SECOND * PER_SECOND)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitsError {
    #[error("quantity value must be finite, got {0}")]
    NonFinite(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("expected a {expected} quantity for {name}, got {found}")]
    WrongDimension {
        name: &'static str,
        expected: Dimension,
        found: Dimension,
    },
}

/// The physical dimensions this crate knows how to convert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Length,
    Time,
    Mass,
    Energy,
    MassDensityPerLength,
    Dimensionless,
}

impl Dimension {
    /// Multiplier taking an SI value to its natural-unit value.
    fn natural_factor(self) -> f64 {
        match self {
            Dimension::Length => PER_METRE,
            Dimension::Time => PER_SECOND,
            Dimension::Mass => PER_KILOGRAM,
            Dimension::Energy => PER_JOULE,
            Dimension::MassDensityPerLength => PER_KILOGRAM / PER_METRE,
            Dimension::Dimensionless => 1.0,
        }
    }

    /// SI unit symbol used when printing.
    pub fn si_symbol(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::Time => "s",
            Dimension::Mass => "kg",
            Dimension::Energy => "J",
            Dimension::MassDensityPerLength => "kg/m",
            Dimension::Dimensionless => "",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Mass => "mass",
            Dimension::Energy => "energy",
            Dimension::MassDensityPerLength => "mass density per length",
            Dimension::Dimensionless => "dimensionless",
        };
        f.write_str(name)
    }
}

/// An SI value tagged with its dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    value: f64,
    dimension: Dimension,
}

impl Quantity {
    pub fn new(value: f64, dimension: Dimension) -> Result<Self, UnitsError> {
        if !value.is_finite() {
            return Err(UnitsError::NonFinite(value));
        }
        Ok(Quantity { value, dimension })
    }

    pub fn metres(value: f64) -> Result<Self, UnitsError> {
        Self::new(value, Dimension::Length)
    }

    pub fn seconds(value: f64) -> Result<Self, UnitsError> {
        Self::new(value, Dimension::Time)
    }

    pub fn kilograms(value: f64) -> Result<Self, UnitsError> {
        Self::new(value, Dimension::Mass)
    }

    pub fn joules(value: f64) -> Result<Self, UnitsError> {
        Self::new(value, Dimension::Energy)
    }

    pub fn electronvolts(value: f64) -> Result<Self, UnitsError> {
        Self::new(value * JOULE_PER_EV, Dimension::Energy)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    fn expect(self, name: &'static str, expected: Dimension) -> Result<f64, UnitsError> {
        if self.dimension != expected {
            return Err(UnitsError::WrongDimension {
                name,
                expected,
                found: self.dimension,
            });
        }
        Ok(to_natural(self))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dimension {
            Dimension::Dimensionless => write!(f, "{:e}", self.value),
            d => write!(f, "{:e} {}", self.value, d.si_symbol()),
        }
    }
}

/// Natural-unit value (powers of eV) of an SI quantity.
pub fn to_natural(q: Quantity) -> f64 {
    q.value * q.dimension.natural_factor()
}

/// Inverse of [`to_natural`].
pub fn from_natural(value: f64, dimension: Dimension) -> Result<Quantity, UnitsError> {
    Quantity::new(value / dimension.natural_factor(), dimension)
}

/// Interference phase GMΔmNT/R in radians.
///
/// `dm` is the internal level splitting as an energy; it enters the
/// gravitational coupling as the mass ΔE/c², which is what the natural-unit
/// product does automatically.
pub fn gravitational_phase(
    source_mass: Quantity,
    dm: Quantity,
    atoms: f64,
    time: Quantity,
    separation: Quantity,
) -> Result<f64, UnitsError> {
    let m = source_mass.expect("M", Dimension::Mass)?;
    let de = dm.expect("dm", Dimension::Energy)?;
    let t = time.expect("T", Dimension::Time)?;
    let r = separation.expect("R", Dimension::Length)?;
    for (name, v) in [("M", m), ("dm", de), ("N", atoms), ("R", r)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(UnitsError::NonPositive { name, value: v });
        }
    }
    if t < 0.0 {
        return Err(UnitsError::NonPositive { name: "T", value: t });
    }
    Ok(gravitational_constant() * m * de * atoms * t / r)
}
