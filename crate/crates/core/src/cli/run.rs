//! Sweeps, single points, comparison reports and their serialisation.

use std::fmt::Write;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::config::{OutputFormat, RunConfig};
use super::CliError;
use crate::analytic::{AmplificationPoint, Experiment};
use crate::oracle::{oracle_amplification, relative_difference, OracleError, OracleMode, ReducedProblem, SignConvention};
use crate::units::{from_natural, to_natural, Dimension, Quantity};

/// Most resonance times a scan will insert.
pub const RESONANCE_CAP: usize = 64;

pub const COLUMNS: [&str; 10] = [
    "T_seconds",
    "f_rad",
    "g",
    "amp_leading",
    "leading_diverged",
    "amp_exact",
    "p_tran",
    "x_cl_m",
    "x_mean_m",
    "variance_m2",
];

/// One output row in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub t_seconds: f64,
    pub f_rad: f64,
    pub g: f64,
    pub amp_leading: f64,
    pub leading_diverged: bool,
    pub amp_exact: f64,
    pub p_tran: f64,
    pub x_cl_m: f64,
    pub x_mean_m: f64,
    pub variance_m2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub config: RunConfig,
    pub warnings: Vec<String>,
    pub rows: Vec<ScanRow>,
}

fn seconds(t: f64) -> f64 {
    to_natural(Quantity::seconds(t).expect("finite time"))
}

fn si(v: f64, dim: Dimension) -> f64 {
    from_natural(v, dim).map(|q| q.value()).unwrap_or(f64::NAN)
}

fn row(point: &AmplificationPoint, t_seconds: f64) -> ScanRow {
    let metres = |v: f64| si(v, Dimension::Length);
    let m2 = si(1.0, Dimension::Length).powi(2);
    ScanRow {
        t_seconds,
        f_rad: point.f,
        g: point.g,
        amp_leading: point.amp_leading,
        leading_diverged: point.leading_diverged,
        amp_exact: point.amp_exact,
        p_tran: point.p_tran,
        x_cl_m: metres(point.x_cl),
        x_mean_m: metres(point.x_mean),
        variance_m2: point.variance * m2,
    }
}

/// Scan times: the configured grid plus, when enabled and few enough, the
/// times where the leading phase hits `2nπ`.
pub fn scan_times(config: &RunConfig, exp: &Experiment, warnings: &mut Vec<String>) -> Result<Vec<f64>, CliError> {
    let mut times = config.time.times();
    if config.resonances {
        let t_max = seconds(config.time.stop_s);
        match exp.leading_resonances(t_max, config.include_fast_phase, RESONANCE_CAP)? {
            Some(roots) => {
                let t_min = config.time.start_s;
                let per_second = si(1.0, Dimension::Time);
                let extra: Vec<f64> = roots.iter().map(|t| t * per_second).filter(|&t| t > t_min).collect();
                if !extra.is_empty() {
                    warnings.push(format!("inserted {} leading-order resonance times", extra.len()));
                }
                times.extend(extra);
                times.sort_by(f64::total_cmp);
                times.dedup();
            }
            None => warnings.push(format!("more than {RESONANCE_CAP} leading-order resonances; none inserted")),
        }
    }
    Ok(times)
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Numerical(e.to_string()))
}

pub fn run_scan(config: &RunConfig, workers: Option<usize>) -> Result<ScanTable, CliError> {
    let exp = config.experiment()?;
    let mut warnings = Vec::new();
    let times = scan_times(config, &exp, &mut warnings)?;
    let fast = config.include_fast_phase;
    let rows = pool(workers)?.install(|| {
        times
            .par_iter()
            .map(|&t| Ok(row(&exp.point(seconds(t), fast)?, t)))
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let last = seconds(config.time.stop_s);
    let stretch = exp.source.linearization_validity(exp.separation(), last)?;
    if stretch > config.linearization_warn {
        warnings.push(format!(
            "|x_cl|/R reaches {stretch:e} at T = {} s; the linearized potential may be inaccurate",
            config.time.stop_s
        ));
    }
    Ok(ScanTable {
        config: config.clone(),
        warnings,
        rows,
    })
}

/// `{:.16e}` keeps 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for line in self.config.to_config_text().lines() {
            let _ = writeln!(s, "# {line}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "#! {w}");
        }
        let _ = writeln!(s, "{}", COLUMNS.join(","));
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                num(r.t_seconds),
                num(r.f_rad),
                num(r.g),
                num(r.amp_leading),
                r.leading_diverged,
                num(r.amp_exact),
                num(r.p_tran),
                num(r.x_cl_m),
                num(r.x_mean_m),
                num(r.variance_m2)
            );
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(row_json).collect();
        json!({
            "config": self.config.to_config_text(),
            "warnings": self.warnings,
            "columns": COLUMNS,
            "rows": rows,
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => pretty(&self.to_json()),
        }
    }
}

/// JSON number, or a string for values JSON cannot carry.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{v}")))
}

fn row_json(r: &ScanRow) -> Value {
    let mut m = Map::new();
    m.insert("T_seconds".into(), number(r.t_seconds));
    m.insert("f_rad".into(), number(r.f_rad));
    m.insert("g".into(), number(r.g));
    m.insert("amp_leading".into(), number(r.amp_leading));
    m.insert("leading_diverged".into(), Value::Bool(r.leading_diverged));
    m.insert("amp_exact".into(), number(r.amp_exact));
    m.insert("p_tran".into(), number(r.p_tran));
    m.insert("x_cl_m".into(), number(r.x_cl_m));
    m.insert("x_mean_m".into(), number(r.x_mean_m));
    m.insert("variance_m2".into(), number(r.variance_m2));
    Value::Object(m)
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn check_time(t_seconds: f64) -> Result<(), CliError> {
    if !(t_seconds > 0.0) || !t_seconds.is_finite() {
        return Err(CliError::Config(format!("--T must be positive, got {t_seconds}")));
    }
    Ok(())
}

fn oracle_entry(result: Result<f64, OracleError>) -> Result<Value, CliError> {
    match result {
        Ok(v) => Ok(number(v)),
        Err(OracleError::NotRepresentable(reason)) => Ok(json!({ "not_representable": reason })),
        Err(e) => Err(e.into()),
    }
}

/// Analytic row at one time, plus the oracle amplifications the config asks for.
pub fn run_point(config: &RunConfig, t_seconds: f64) -> Result<Value, CliError> {
    check_time(t_seconds)?;
    let exp = config.experiment()?;
    let t = seconds(t_seconds);
    let fast = config.include_fast_phase;
    let r = row(&exp.point(t, fast)?, t_seconds);
    let mut v = row_json(&r);
    let obj = v.as_object_mut().expect("object");
    if config.oracle.closed() {
        let closed = oracle_amplification(&exp, t, fast, &OracleMode::ClosedForm).map(|p| p.amplification);
        obj.insert("oracle_closed".into(), oracle_entry(closed)?);
    }
    if config.oracle.grid() {
        let grid = oracle_amplification(&exp, t, fast, &OracleMode::Grid(config.grid)).map(|p| p.amplification);
        obj.insert("oracle_grid".into(), oracle_entry(grid)?);
    }
    obj.insert("surviving_atoms".into(), number(exp.surviving_atoms(r.p_tran)?));
    Ok(json!({ "config": config.to_config_text(), "point": v }))
}

pub fn point_csv(point: &Value) -> String {
    let p = &point["point"];
    let mut s = String::new();
    if let Some(cfg) = point["config"].as_str() {
        for line in cfg.lines() {
            let _ = writeln!(s, "# {line}");
        }
    }
    let obj = p.as_object().expect("object");
    let keys: Vec<&String> = obj.keys().collect();
    let _ = writeln!(s, "{}", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","));
    let cells: Vec<String> = obj
        .values()
        .map(|v| match v {
            Value::Number(n) => num(n.as_f64().unwrap_or(f64::NAN)),
            Value::String(t) => t.clone(),
            Value::Bool(b) => b.to_string(),
            other => other.to_string().replace(',', ";"),
        })
        .collect();
    let _ = writeln!(s, "{}", cells.join(","));
    s
}

/// Analytic formulas against both oracle modes at one time.
pub fn run_compare(config: &RunConfig, t_seconds: f64) -> Result<Value, CliError> {
    check_time(t_seconds)?;
    let exp = config.experiment()?;
    let t = seconds(t_seconds);
    let fast = config.include_fast_phase;
    let point = exp.point(t, fast)?;
    let reduced = ReducedProblem::from_experiment(&exp, t, fast)?;

    let closed = reduced.solve(&OracleMode::ClosedForm)?;
    let grid = match reduced.solve(&OracleMode::Grid(config.grid)) {
        Ok(p) => Some(p),
        Err(OracleError::NotRepresentable(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut methods: Vec<(&str, f64)> = vec![
        ("amp_exact", point.amp_exact),
        ("amp_leading", point.amp_leading),
        ("oracle_closed", closed.amplification),
    ];
    if let Some(g) = &grid {
        methods.push(("oracle_grid", g.amplification));
    }
    let mut differences = Map::new();
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            let (a, b) = (methods[i], methods[j]);
            differences.insert(format!("{}_vs_{}", a.0, b.0), number(relative_difference(a.1, b.1)));
        }
    }

    let mut conventions = Map::new();
    let mut best = (SignConvention::Leading, f64::INFINITY);
    for c in SignConvention::ALL {
        let err = relative_difference(reduced.analytic(c), closed.amplification);
        conventions.insert(c.name().into(), number(err));
        if err < best.1 {
            best = (c, err);
        }
    }

    Ok(json!({
        "config": config.to_config_text(),
        "T_seconds": number(t_seconds),
        "amp_exact": number(point.amp_exact),
        "amp_leading": number(point.amp_leading),
        "leading_diverged": point.leading_diverged,
        "oracle_closed": number(closed.amplification),
        "oracle_grid": match &grid {
            Some(g) => number(g.amplification),
            None => Value::String("not representable".into()),
        },
        "p_tran": number(point.p_tran),
        "oracle_p_tran": number(closed.norm),
        "surviving_atoms": number(exp.surviving_atoms(point.p_tran)?),
        "relative_differences": differences,
        "sign_convention": {
            "errors": conventions,
            "verdict": best.0.name(),
            "error": number(best.1),
        },
    }))
}
