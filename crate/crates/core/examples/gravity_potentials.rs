//! Point and cylinder sources: potential, force and free fall.
use weakgrav::gravity::GravitySource;
use weakgrav::units::{from_natural, to_natural, Dimension, Quantity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = |v: f64| to_natural(Quantity::kilograms(v).unwrap());
    let m = |v: f64| to_natural(Quantity::metres(v).unwrap());
    let s = |v: f64| to_natural(Quantity::seconds(v).unwrap());

    let sources = [
        ("point 100 kg", GravitySource::point_mass(kg(100.0))?),
        ("cylinder 50 kg/m, l = 2 cm", GravitySource::cylinder(kg(50.0) / m(1.0), m(0.02))?),
    ];
    for (name, src) in sources {
        println!("{name}");
        for r in [0.05, 0.1, 0.2] {
            let v = from_natural(src.potential(kg(1.0), m(r))?, Dimension::Energy)?;
            let x = from_natural(src.classical_displacement(m(r), s(0.5))?, Dimension::Length)?;
            println!("  R = {r:4} m   V(1 kg) = {v:>12}   x_cl(0.5 s) = {x}");
        }
    }
    Ok(())
}
