//! Split-step evolution against the exact Gaussian under a linear potential.
use weakgrav::oracle::{propagate_gaussian_linear, split_step_evolve, GaussianPacket, GridWavefunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (mass, force, time) = (1.0, 0.8, 2.0);
    let packet = GaussianPacket::ground(1.0)?;
    let wf = GridWavefunction::from_packet(&packet, -24.0, 24.0, 2048, 1)?;
    let potential: Vec<f64> = (0..wf.len()).map(|k| force * wf.x(k)).collect();
    let exact = propagate_gaussian_linear(&packet, mass, force, time)?;
    println!("exact centre {:.6}, momentum {:.6}", exact.center, exact.momentum);
    for steps in [125, 250, 500, 1000] {
        let out = split_step_evolve(&wf, mass, &potential, time, steps)?;
        println!(
            "steps {steps:>5}: L2 error {:.3e}, norm drift {:.1e}",
            out.l2_distance_to(&exact),
            out.norm() - wf.norm()
        );
    }
    Ok(())
}
