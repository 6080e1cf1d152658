//! Weak-value amplification of gravitationally induced displacements.

pub mod analytic;
pub mod cli;
pub mod gravity;
pub mod oracle;
pub mod units;
pub mod weak;
