//! Both oracle modes against the two printed closed forms on a desk-scale
//! problem (α = 2, g = 10⁻², s = 0.2), and the closed-form oracle on the
//! physical benchmark.
use std::f64::consts::PI;

use weakgrav::analytic::{EnsembleParams, Experiment};
use weakgrav::gravity::GravitySource;
use weakgrav::oracle::{oracle_amplification, GridSettings, OracleMode, ReducedProblem, SignConvention};
use weakgrav::units::{to_natural, Quantity, ATOMIC_MASS_UNIT_KG};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (alpha, g, s) = (2.0, 1e-2, 0.2);
    let x = -f64::sqrt(g) / alpha;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "χ", "closed", "grid", "leading", "exact");
    for k in 0..=8 {
        let chi = 2.0 * PI + 0.1 * (k as f64 - 4.0);
        let r = ReducedProblem::from_groups(alpha, x, s, chi)?;
        let closed = r.solve(&OracleMode::ClosedForm)?;
        let grid = r.solve(&OracleMode::Grid(GridSettings::default()))?;
        println!(
            "{chi:>6.3} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            closed.amplification,
            grid.amplification,
            r.analytic(SignConvention::Leading),
            r.analytic(SignConvention::Exact)
        );
    }

    let kg = |v: f64| to_natural(Quantity::kilograms(v).unwrap());
    let m = |v: f64| to_natural(Quantity::metres(v).unwrap());
    let ensemble = EnsembleParams::new(1e15, kg(86.909180527 * ATOMIC_MASS_UNIT_KG), 1e-5, m(1e-3))?;
    let exp = Experiment::new(ensemble, GravitySource::point_mass(kg(100.0))?, m(0.1))?;
    let t = to_natural(Quantity::seconds(0.5)?);
    let o = oracle_amplification(&exp, t, false, &OracleMode::ClosedForm)?;
    println!("benchmark 0.5 s: oracle {:.4}, amp_exact {:.4}", o.amplification, exp.amp_exact(t, false)?);
    match oracle_amplification(&exp, t, false, &OracleMode::Grid(GridSettings::default())) {
        Ok(p) => println!("grid: {}", p.amplification),
        Err(e) => println!("grid: {e}"),
    }
    Ok(())
}
