//! Dimensionless configs for `compare`: the groups α, X, s and χ at the
//! reference time, with `--T` measured in units of that time.
//!
//! ```text
//! alpha = 2
//! g     = 1e-2     # or X = -0.05
//! s     = 0.2
//! chi   = 6.2
//! ```

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use super::config::ConfigError;
use super::run::number;
use super::CliError;
use crate::analytic::{amp_leading_reduced, transition_probability_reduced};
use crate::oracle::{relative_difference, GridSettings, OracleError, OracleMode, ReducedProblem, SignConvention};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedConfig {
    pub alpha: f64,
    pub displacement: f64,
    pub spread: f64,
    pub chi: f64,
    pub grid: GridSettings,
}

const KEYS: &[&str] = &["alpha", "X", "g", "s", "chi", "grid_points", "grid_steps"];

/// True when the text is a dimensionless config.
pub fn is_reduced(text: &str) -> bool {
    text.lines()
        .filter_map(|l| l.split('#').next()?.split_once('='))
        .any(|(k, _)| k.trim() == "alpha")
}

pub fn parse_reduced_config(text: &str) -> Result<ReducedConfig, ConfigError> {
    let mut values: HashMap<&str, (usize, f64)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |key: &str, msg: String| ConfigError {
            line: Some(line),
            key: key.to_string(),
            message: msg,
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(content, "expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(key, "unknown key".into()));
        }
        let v: f64 = value
            .parse()
            .map_err(|_| err(key, format!("cannot parse number {value:?}")))?;
        if !v.is_finite() {
            return Err(err(key, format!("{key} must be finite")));
        }
        if values.insert(key, (line, v)).is_some() {
            return Err(err(key, "duplicate key".into()));
        }
    }
    let get = |key: &str| {
        values.get(key).copied().ok_or_else(|| ConfigError {
            line: None,
            key: key.to_string(),
            message: "missing key".into(),
        })
    };
    let positive = |key: &str| -> Result<f64, ConfigError> {
        let (line, v) = get(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(ConfigError {
                line: Some(line),
                key: key.to_string(),
                message: format!("{key} must be positive"),
            })
        }
    };
    let alpha = positive("alpha")?;
    let spread = positive("s")?;
    let displacement = match (values.get("X"), values.get("g")) {
        (Some(&(_, x)), None) => x,
        (None, Some(_)) => -positive("g")?.sqrt() / alpha,
        _ => {
            return Err(ConfigError {
                line: None,
                key: "X".into(),
                message: "give exactly one of X or g".into(),
            })
        }
    };
    let chi = get("chi")?.1;
    let mut grid = GridSettings::default();
    if let Some(&(_, v)) = values.get("grid_points") {
        grid.points = v as usize;
    }
    if let Some(&(_, v)) = values.get("grid_steps") {
        grid.steps = v as usize;
    }
    if grid.points < 64 || !grid.points.is_power_of_two() || grid.steps == 0 {
        return Err(ConfigError {
            line: None,
            key: "grid_points".into(),
            message: "grid_points must be a power of two ≥ 64 and grid_steps positive".into(),
        });
    }
    Ok(ReducedConfig {
        alpha,
        displacement,
        spread,
        chi,
        grid,
    })
}

impl ReducedConfig {
    /// Groups at `t` reference times: α ∝ 1/t, X ∝ t², s ∝ t, χ ∝ t.
    pub fn at(&self, t: f64) -> Result<ReducedProblem, OracleError> {
        ReducedProblem::from_groups(self.alpha / t, self.displacement * t * t, self.spread * t, self.chi * t)
    }
}

pub fn run_compare_reduced(config: &ReducedConfig, t: f64) -> Result<Value, CliError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(CliError::Config(format!("--T must be positive, got {t}")));
    }
    let r = config.at(t)?;
    let closed = r.solve(&OracleMode::ClosedForm)?;
    let grid = match r.solve(&OracleMode::Grid(config.grid)) {
        Ok(p) => Some(p),
        Err(OracleError::NotRepresentable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let amp_exact = r.analytic(SignConvention::Exact);
    let leading = amp_leading_reduced(r.alpha(), r.chi);
    let f = 2.0 / 3.0 * r.alpha() * r.displacement().powi(2) - r.chi;

    let mut methods = vec![
        ("amp_exact", amp_exact),
        ("amp_leading", leading.value),
        ("oracle_closed", closed.amplification),
    ];
    if let Some(g) = &grid {
        methods.push(("oracle_grid", g.amplification));
    }
    let mut differences = Map::new();
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            differences.insert(
                format!("{}_vs_{}", methods[i].0, methods[j].0),
                number(relative_difference(methods[i].1, methods[j].1)),
            );
        }
    }
    let mut errors = Map::new();
    let mut best = (SignConvention::Leading, f64::INFINITY);
    for c in SignConvention::ALL {
        let e = relative_difference(r.analytic(c), closed.amplification);
        errors.insert(c.name().into(), number(e));
        if e < best.1 {
            best = (c, e);
        }
    }
    Ok(json!({
        "groups": { "alpha": number(r.alpha()), "X": number(r.displacement()), "s": number(r.spread()),
                    "chi": number(r.chi), "g": number(r.damping()) },
        "T": number(t),
        "amp_exact": number(amp_exact),
        "amp_leading": number(leading.value),
        "leading_diverged": leading.diverged,
        "oracle_closed": number(closed.amplification),
        "oracle_grid": match &grid {
            Some(g) => number(g.amplification),
            None => Value::String("not representable".into()),
        },
        "p_tran": number(transition_probability_reduced(f, r.damping())),
        "oracle_p_tran": number(closed.norm),
        "relative_differences": differences,
        "sign_convention": { "errors": errors, "verdict": best.0.name(), "error": number(best.1) },
    }))
}
