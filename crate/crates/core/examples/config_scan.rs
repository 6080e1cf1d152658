//! A small sweep driven by the same config text the CLI reads.
use weakgrav::cli::{parse_config, run_scan};

const CONFIG: &str = "
M  = 100 kg
R  = 10 cm
N  = 1e15
dm = 1e-5 eV
d  = 1 mm
T  = 0.5 .. 0.6 s / 20
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config(CONFIG)?;
    let table = run_scan(&config, Some(2))?;
    for w in &table.warnings {
        println!("warning: {w}");
    }
    for r in &table.rows {
        println!(
            "T = {:.4} s  f = {:7.4}  amp_exact = {:>10.2}  p_tran = {:.3e}{}",
            r.t_seconds,
            r.f_rad,
            r.amp_exact,
            r.p_tran,
            if r.leading_diverged { "  (leading diverges)" } else { "" }
        );
    }
    Ok(())
}
