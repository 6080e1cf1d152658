//! JSON front end to the weak-value toolkit.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use super::run::number;
use super::CliError;
use crate::weak::{pointer_distribution, pointer_shift_leading, weak_value, Coupling, Observable, Sampling, StateVector};

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(r) => Complex64::new(r, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct SamplingSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakValueSpec {
    pub dimension: Option<usize>,
    pub observable: Vec<Vec<Entry>>,
    pub psi_i: Vec<Entry>,
    pub psi_f: Vec<Entry>,
    #[serde(default = "default_coupling")]
    pub coupling: String,
    pub g: f64,
    pub d: f64,
    pub sampling: Option<SamplingSpec>,
}

fn default_coupling() -> String {
    "momentum".into()
}

fn complex(z: Complex64) -> Value {
    json!({ "re": number(z.re), "im": number(z.im) })
}

fn vector(entries: &[Entry]) -> Vec<Complex64> {
    entries.iter().map(|&e| e.into()).collect()
}

pub fn run_weakvalue(spec_text: &str) -> Result<Value, CliError> {
    let spec: WeakValueSpec =
        serde_json::from_str(spec_text).map_err(|e| CliError::Config(format!("weak-value spec: {e}")))?;
    if let Some(n) = spec.dimension {
        if n != spec.observable.len() {
            return Err(CliError::Config(format!(
                "dimension is {n} but the observable has {} rows",
                spec.observable.len()
            )));
        }
    }
    let coupling = match spec.coupling.as_str() {
        "momentum" => Coupling::Momentum,
        "position" => Coupling::Position,
        other => return Err(CliError::Config(format!("coupling must be momentum or position, got {other:?}"))),
    };
    let rows: Vec<Vec<Complex64>> = spec.observable.iter().map(|r| vector(r)).collect();
    let observable = Observable::from_rows(&rows)?;
    let psi_i = StateVector::new(vector(&spec.psi_i))?;
    let psi_f = StateVector::new(vector(&spec.psi_f))?;
    let w = weak_value(&observable, &psi_i, &psi_f)?;
    let mut out = json!({
        "weak_value": complex(w.value),
        "overlap": complex(w.overlap),
        "conditioning": number(w.conditioning),
        "pointer_shift": number(pointer_shift_leading(&w, coupling, spec.g, spec.d)),
    });
    if let Some(s) = spec.sampling {
        let sampling = Sampling::new(s.x_min, s.x_max, s.points)?;
        let dist = pointer_distribution(&observable, &psi_i, spec.g, spec.d, sampling)?;
        let xs: Vec<Value> = (0..sampling.points).map(|k| number(sampling.x(k))).collect();
        let ps: Vec<Value> = dist.density.iter().map(|&p| number(p)).collect();
        out["distribution"] = json!({ "x": xs, "density": ps, "integral": number(dist.integral()) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(theta: f64, phi: f64) -> String {
        format!(
            r#"{{"dimension": 2, "observable": [[1, 0], [0, -1]], "psi_i": [{}, {}], "psi_f": [{}, {}], "g": 0.01, "d": 1}}"#,
            theta.cos(),
            theta.sin(),
            phi.cos(),
            -phi.sin()
        )
    }

    #[test]
    fn sigma_z_pi_over_8() {
        let t = std::f64::consts::PI / 8.0;
        let v = run_weakvalue(&spec(t, t)).unwrap();
        let re = v["weak_value"]["re"].as_f64().unwrap();
        assert!((re - 2f64.sqrt()).abs() < 1e-12, "{re}");
    }

    #[test]
    fn identical_states_give_expectation() {
        let v = run_weakvalue(&spec(0.3, -0.3)).unwrap();
        let re = v["weak_value"]["re"].as_f64().unwrap();
        assert!((re - (0.6f64).cos()).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_is_singular() {
        let t = std::f64::consts::PI / 4.0;
        let err = run_weakvalue(&spec(t, -t + std::f64::consts::FRAC_PI_2)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("post-selection singular"), "{err}");
    }

    #[test]
    fn complex_entries_and_distribution() {
        let text = r#"{"observable": [[0, [0, -1]], [[0, 1], 0]], "psi_i": [1, 0], "psi_f": [1, [0, 1]],
                      "coupling": "position", "g": 0.0, "d": 2, "sampling": {"x_min": -20, "x_max": 20, "points": 801}}"#;
        let v = run_weakvalue(text).unwrap();
        assert!((v["distribution"]["integral"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn malformed_spec_is_config_error() {
        assert_eq!(run_weakvalue("{").unwrap_err().exit_code(), 1);
        assert_eq!(run_weakvalue(r#"{"observable": [[1]], "psi_i": [1], "psi_f": [1], "g": 1, "d": 1, "colour": 3}"#).unwrap_err().exit_code(), 1);
    }
}
