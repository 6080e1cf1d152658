//! SI ⇄ natural units (ħ = c = 1, energies in eV).
use weakgrav::units::{from_natural, gravitational_constant, gravitational_phase, to_natural, Quantity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = [
        Quantity::metres(1e-3)?,
        Quantity::seconds(0.5)?,
        Quantity::kilograms(100.0)?,
        Quantity::electronvolts(1e-5)?,
    ];
    for q in samples {
        let n = to_natural(q);
        let back = from_natural(n, q.dimension())?;
        println!("{q:>14} -> {n:.6e} (natural) -> {back}");
    }
    println!("G = {:.6e} eV^-2", gravitational_constant());

    let phase = gravitational_phase(
        Quantity::kilograms(100.0)?,
        Quantity::electronvolts(1e-5)?,
        1e15,
        Quantity::seconds(0.5)?,
        Quantity::metres(0.1)?,
    )?;
    println!("GMNΔmT/R at the benchmark = {phase:.4} rad (2π = {:.4})", 2.0 * std::f64::consts::PI);
    Ok(())
}
