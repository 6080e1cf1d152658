//! Post-selection success rate and surviving atoms around the first peak.
use weakgrav::analytic::{EnsembleParams, Experiment};
use weakgrav::gravity::GravitySource;
use weakgrav::units::{to_natural, Quantity, ATOMIC_MASS_UNIT_KG, HBAR_EV_S};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = |v: f64| to_natural(Quantity::kilograms(v).unwrap());
    let m = |v: f64| to_natural(Quantity::metres(v).unwrap());
    let s = |v: f64| to_natural(Quantity::seconds(v).unwrap());
    let ensemble = EnsembleParams::new(1e15, kg(86.909180527 * ATOMIC_MASS_UNIT_KG), 1e-5, m(1e-3))?;
    let exp = Experiment::new(ensemble, GravitySource::point_mass(kg(100.0))?, m(0.1))?;

    let root = exp.leading_resonances(s(1.0), false, 8)?.unwrap()[0];
    let peak = exp.exact_peak(0.98 * root, root, false)?;
    let p = exp.transition_probability(peak, false)?;
    println!("at the exact peak (T = {:.5} s)", peak * HBAR_EV_S);
    println!("  p_tran          = {p:.3e}");
    println!("  surviving atoms = {:.3e}", exp.surviving_atoms(p)?);
    println!("  π²/2 (d/R)²     = {:.3e}", std::f64::consts::PI.powi(2) / 2.0 * 1e-4);
    for t in [0.1, 0.25, 0.5, 0.75, 1.0] {
        println!("  T = {t:4} s: p_tran = {:.4e}", exp.transition_probability(s(t), false)?);
    }
    Ok(())
}
