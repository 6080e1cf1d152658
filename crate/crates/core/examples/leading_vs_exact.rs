//! Leading-order divergence against the finite all-orders peak near the
//! first resonance of the benchmark.
use weakgrav::analytic::{EnsembleParams, Experiment};
use weakgrav::gravity::GravitySource;
use weakgrav::units::{to_natural, Quantity, ATOMIC_MASS_UNIT_KG, HBAR_EV_S};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = |v: f64| to_natural(Quantity::kilograms(v).unwrap());
    let m = |v: f64| to_natural(Quantity::metres(v).unwrap());
    let ensemble = EnsembleParams::new(1e15, kg(86.909180527 * ATOMIC_MASS_UNIT_KG), 1e-5, m(1e-3))?;
    let exp = Experiment::new(ensemble, GravitySource::point_mass(kg(100.0))?, m(0.1))?;

    let to_s = |t: f64| t * HBAR_EV_S;
    let root = exp.leading_resonances(to_natural(Quantity::seconds(1.0)?), false, 8)?.unwrap()[0];
    let peak = exp.exact_peak(0.98 * root, 1.0 * root, false)?;
    println!("first f = 2π root at T = {:.6} s", to_s(root));
    println!("largest |amp_exact| at T = {:.6} s: {:.1}", to_s(peak), exp.amp_exact(peak, false)?);

    println!("{:>10} {:>14} {:>14} {:>10}", "T [s]", "amp_leading", "amp_exact", "g");
    for k in -6..=6 {
        let t = root * (1.0 + 0.004 * k as f64);
        let p = exp.point(t, false)?;
        println!("{:>10.5} {:>14.2} {:>14.2} {:>10.3e}", to_s(t), p.amp_leading, p.amp_exact, p.g);
    }
    let d = exp.dimensionless(to_natural(Quantity::seconds(0.5)?), false)?;
    println!("prefactor NΔmd²/T at 0.5 s: {:.1}", d.alpha);
    Ok(())
}
