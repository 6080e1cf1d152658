//! Weak values of σ_z: amplification beyond the spectrum as pre/post states
//! approach orthogonality.
use weakgrav::weak::{pointer_distribution, pointer_shift_leading, weak_value, Coupling, Observable, Sampling, StateVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sz = Observable::sigma_z();
    for deg in [15.0f64, 22.5, 30.0, 40.0, 44.0] {
        let t = deg.to_radians();
        let psi_i = StateVector::from_real(&[t.cos(), t.sin()])?;
        let psi_f = StateVector::from_real(&[t.cos(), -t.sin()])?;
        let w = weak_value(&sz, &psi_i, &psi_f)?;
        let shift = pointer_shift_leading(&w, Coupling::Momentum, 0.01, 1.0);
        println!(
            "θ = {deg:>4}°  W = {:>9.4}  1/cos2θ = {:>9.4}  shift(g = 0.01 d) = {shift:.5} d",
            w.value.re,
            1.0 / (2.0 * t).cos()
        );
    }

    // Strong coupling separates the eigenvalue peaks.
    let psi = StateVector::from_real(&[1.0, 1.0])?;
    let dist = pointer_distribution(&sz, &psi, 5.0, 1.0, Sampling::new(-12.0, 12.0, 2401)?)?;
    println!("g = 5d peaks at {:?}, integral {:.10}", dist.peaks(), dist.integral());

    let orthogonal = weak_value(&sz, &StateVector::from_real(&[1.0, 0.0])?, &StateVector::from_real(&[0.0, 1.0])?);
    println!("orthogonal pre/post: {}", orthogonal.unwrap_err());
    Ok(())
}
