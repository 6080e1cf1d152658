//! The nine acceptance criteria. Each test prints one PASS/FAIL line.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use weakgrav::analytic::{EnsembleParams, Experiment};
use weakgrav::cli::{parse_config, run_scan, ScanRow};
use weakgrav::gravity::GravitySource;
use weakgrav::oracle::{
    post_select_moments, propagate_gaussian_linear, relative_difference, split_step_evolve, GaussianPacket,
    GridSettings, GridWavefunction, OracleMode, ReducedProblem, SignConvention,
};
use weakgrav::units::{gravitational_phase, to_natural, Quantity, ATOMIC_MASS_UNIT_KG};
use weakgrav::weak::{pointer_distribution, pointer_shift_leading, weak_value, Coupling, Observable, Sampling, StateVector};

fn report(criterion: u32, pass: bool, detail: String) {
    println!("criterion {criterion}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
}

fn benchmark() -> Experiment {
    let kg = |v: f64| to_natural(Quantity::kilograms(v).unwrap());
    let m = |v: f64| to_natural(Quantity::metres(v).unwrap());
    let ensemble = EnsembleParams::new(1e15, kg(86.909180527 * ATOMIC_MASS_UNIT_KG), 1e-5, m(1e-3)).unwrap();
    Experiment::new(ensemble, GravitySource::point_mass(kg(100.0)).unwrap(), m(0.1)).unwrap()
}

const SWEEP: &str = "M = 100 kg\nR = 10 cm\nN = 1e15\ndm = 1e-5 eV\nd = 1 mm\nT = 0 .. 1 s / 10000\n";

fn sweep() -> Vec<ScanRow> {
    run_scan(&parse_config(SWEEP).unwrap(), None).unwrap().rows
}

fn first_root_seconds() -> f64 {
    let exp = benchmark();
    let one = to_natural(Quantity::seconds(1.0).unwrap());
    exp.leading_resonances(one, false, 16).unwrap().unwrap()[0] / one
}

/// Row with the largest |amp_exact| within 5% of the first root.
fn first_peak(rows: &[ScanRow]) -> ScanRow {
    let root = first_root_seconds();
    *rows
        .iter()
        .filter(|r| (r.t_seconds - root).abs() < 0.05 * root)
        .max_by(|a, b| a.amp_exact.abs().total_cmp(&b.amp_exact.abs()))
        .unwrap()
}

#[test]
fn criterion_1_phase_benchmark() {
    let phase = gravitational_phase(
        Quantity::kilograms(100.0).unwrap(),
        Quantity::electronvolts(1e-5).unwrap(),
        1e15,
        Quantity::seconds(0.5).unwrap(),
        Quantity::metres(0.1).unwrap(),
    )
    .unwrap();
    let off = (phase - 2.0 * PI).abs() / (2.0 * PI);
    let pass = (phase - 5.63).abs() < 0.02 && off <= 0.15;
    report(1, pass, format!("phase {phase:.4} rad, {:.1}% below 2π", 100.0 * off));
    assert!(pass);
}

#[test]
fn criterion_2_amplification_scale() {
    let t = to_natural(Quantity::seconds(0.5).unwrap());
    let alpha = benchmark().dimensionless(t, false).unwrap().alpha;
    let pass = (alpha - 340.0).abs() < 5.0 && alpha > 1e2 && alpha < 1e4;
    report(2, pass, format!("NΔmd²/T = {alpha:.1}, factor {:.2} below 10³", 1e3 / alpha));
    assert!(pass);
}

#[test]
fn criterion_3_divergence_vs_finite_peaks() {
    let rows = sweep();
    let spacing = 1e-4;
    let flagged: Vec<&ScanRow> = rows.iter().filter(|r| r.leading_diverged).collect();
    let near_roots = flagged.iter().all(|r| {
        let n = (r.f_rad.abs() / (2.0 * PI)).round();
        n >= 1.0 && (r.f_rad.abs() - 2.0 * PI * n).abs() < 1e-3
    });
    let max_exact = rows.iter().map(|r| r.amp_exact.abs()).fold(0.0, f64::max);
    let root = first_root_seconds();
    let peak = first_peak(&rows);
    let shift = peak.t_seconds - root;
    let pass = !flagged.is_empty() && near_roots && max_exact.is_finite() && shift.abs() > spacing;
    report(
        3,
        pass,
        format!(
            "{} diverged rows, max|amp_exact| = {max_exact:.1}, first peak at {:.4} s vs root {root:.4} s (shift {shift:.4} s)",
            flagged.len(),
            peak.t_seconds
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_transition_probability() {
    let rows = sweep();
    let peak = first_peak(&rows);
    let atoms = 1e15 * peak.p_tran;
    let pass = (1e-4..=1e-3).contains(&peak.p_tran) && (1e11..=1e12).contains(&atoms);
    report(4, pass, format!("p_tran at first peak {:.3e}, surviving atoms {atoms:.3e}", peak.p_tran));
    assert!(pass);
}

struct Desk {
    alpha: f64,
    g: f64,
    spread: f64,
}

fn desk_sets() -> Vec<Desk> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..24)
        .map(|_| Desk {
            alpha: rng.gen_range(1.0..4.0),
            g: 10f64.powf(rng.gen_range(-3.0..-1.0)),
            spread: 10f64.powf(rng.gen_range(-2.0..(0.5f64).log10())),
        })
        .collect()
}

fn chis() -> Vec<f64> {
    (0..16).map(|k| 4.0 * PI * k as f64 / 15.0).collect()
}

struct SetOutcome {
    convention_errors: [f64; 2],
    grid_error: f64,
    variance_error: f64,
    variance_over_g: f64,
}

fn evaluate(set: &Desk) -> SetOutcome {
    let x = -set.g.sqrt() / set.alpha;
    let base = ReducedProblem::from_groups(set.alpha, x, set.spread, 0.0).unwrap();
    let closed = base.closed_form_branches().unwrap();
    let grid = base.grid_branches(&GridSettings::default()).unwrap();
    let free = 0.5 * (1.0 + set.spread * set.spread);
    let mut out = SetOutcome {
        convention_errors: [0.0; 2],
        grid_error: 0.0,
        variance_error: 0.0,
        variance_over_g: 0.0,
    };
    for chi in chis() {
        let r = ReducedProblem { chi, ..base };
        let c = r.coefficients();
        let mc = post_select_moments(&closed.with_coefficients(c)).unwrap();
        let mg = post_select_moments(&grid.with_coefficients(c)).unwrap();
        let (ac, ag) = (mc.mean / x, mg.mean / x);
        out.grid_error = out.grid_error.max(relative_difference(ag, ac));
        for (k, conv) in SignConvention::ALL.iter().enumerate() {
            out.convention_errors[k] = out.convention_errors[k].max(relative_difference(r.analytic(*conv), ac));
        }
        let f = 2.0 / 3.0 * set.alpha * x * x - chi;
        if 1.0 - (-set.g).exp() * f.cos() > 0.1 {
            let dev = (mc.variance / free - 1.0).abs();
            out.variance_error = out.variance_error.max(dev / (10.0 * set.g * set.g));
            out.variance_over_g = out.variance_over_g.max(dev / set.g);
        }
    }
    out
}

fn outcomes() -> Vec<SetOutcome> {
    desk_sets().par_iter().map(evaluate).collect()
}

#[test]
fn criterion_5_oracle_equivalence() {
    let start = std::time::Instant::now();
    let results = outcomes();
    let grid_worst = results.iter().map(|r| r.grid_error).fold(0.0, f64::max);
    let grid_pass = grid_worst <= 1e-6;
    report(
        5,
        grid_pass,
        format!("[grid vs closed form] worst relative difference {grid_worst:.2e} over {} sets", results.len()),
    );

    let winners: Vec<usize> = results
        .iter()
        .map(|r| if r.convention_errors[0] <= r.convention_errors[1] { 0 } else { 1 })
        .collect();
    let same_winner = winners.iter().all(|&w| w == winners[0]);
    let worst = |k: usize| results.iter().map(|r| r.convention_errors[k]).fold(0.0, f64::max);
    let best = results
        .iter()
        .map(|r| r.convention_errors[0].min(r.convention_errors[1]))
        .fold(0.0, f64::max);
    let convention_pass = same_winner && best <= 1e-6;
    report(
        5,
        convention_pass,
        format!(
            "[printed formulas vs closed-form oracle] worst error leading-sign {:.2e}, exact-sign {:.2e}; the oracle phase \
             exceeds the printed one by 2ΔM x_cl²/T, so neither matches",
            worst(0),
            worst(1)
        ),
    );
    println!("criterion 5 runtime {:.1} s", start.elapsed().as_secs_f64());
    assert!(grid_pass && convention_pass);
}

#[test]
fn criterion_6_variance_non_amplification() {
    let results = outcomes();
    let worst = results.iter().map(|r| r.variance_error).fold(0.0, f64::max);
    let per_g = results.iter().map(|r| r.variance_over_g).fold(0.0, f64::max);
    let pass = worst <= 1.0;
    report(
        6,
        pass,
        format!("worst |Var/d(T)² − 1| is {worst:.2e} × 10g²; it is {per_g:.2} × g, first order in g"),
    );
    assert!(pass);
}

#[test]
fn criterion_7_negative_amplification() {
    let rows = sweep();
    let negative = rows.iter().filter(|r| r.amp_exact < 0.0).count();
    let min = rows.iter().map(|r| r.amp_exact).fold(f64::INFINITY, f64::min);
    report(7, negative > 0, format!("{negative} rows with amp_exact < 0, minimum {min:.1}"));
    assert!(negative > 0);
}

/// Post-selected pointer mean for momentum coupling, by quadrature.
fn exact_pointer_mean(theta: f64, g: f64) -> f64 {
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    let phi = |x: f64| (-(x * x) / 2.0).exp();
    let h = 1e-3;
    let (mut num, mut den) = (0.0, 0.0);
    for k in -20_000..=20_000 {
        let x = k as f64 * h;
        let amp = c2 * phi(x - g) - s2 * phi(x + g);
        num += x * amp * amp;
        den += amp * amp;
    }
    num / den
}

#[test]
fn criterion_8_weak_core() {
    let sz = Observable::sigma_z();
    let mut weak_err: f64 = 0.0;
    for theta in [PI / 12.0, PI / 8.0, PI / 6.0] {
        let psi_i = StateVector::from_real(&[theta.cos(), theta.sin()]).unwrap();
        let psi_f = StateVector::from_real(&[theta.cos(), -theta.sin()]).unwrap();
        let w = weak_value(&sz, &psi_i, &psi_f).unwrap();
        weak_err = weak_err.max((w.value - Complex64::new(1.0 / (2.0 * theta).cos(), 0.0)).norm());
    }

    let theta = PI / 8.0;
    let psi_i = StateVector::from_real(&[theta.cos(), theta.sin()]).unwrap();
    let psi_f = StateVector::from_real(&[theta.cos(), -theta.sin()]).unwrap();
    let w = weak_value(&sz, &psi_i, &psi_f).unwrap();
    let err = |g: f64| (pointer_shift_leading(&w, Coupling::Momentum, g, 1.0) - exact_pointer_mean(theta, g)).abs();
    let (e1, e2) = (err(0.02), err(0.01));
    let ratio = e1 / e2;

    let dist = pointer_distribution(&sz, &psi_i, 0.3, 1.0, Sampling::new(-15.0, 15.0, 3001).unwrap()).unwrap();
    let integral_err = (dist.integral() - 1.0).abs();

    let pass = weak_err <= 1e-12 && ratio >= 3.2 && integral_err <= 1e-8;
    report(
        8,
        pass,
        format!("weak-value error {weak_err:.1e}, shift error ratio under g-halving {ratio:.2}, integral error {integral_err:.1e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_9_numerical_hygiene() {
    let packet = GaussianPacket::ground(1.0).unwrap();
    let wf = GridWavefunction::from_packet(&packet, -20.0, 20.0, 2048, 1).unwrap();
    let quadratic: Vec<f64> = (0..wf.len()).map(|k| 0.05 * wf.x(k).powi(2)).collect();
    let norm_drift = (split_step_evolve(&wf, 1.0, &quadratic, 2.0, 1000).unwrap().norm() - wf.norm()).abs();

    let free = split_step_evolve(&wf, 1.0, &vec![0.0; wf.len()], 2.0, 1000)
        .unwrap()
        .l2_distance_to(&propagate_gaussian_linear(&packet, 1.0, 0.0, 2.0).unwrap());
    let (mass, force) = (2.0, 0.3);
    let linear_pot: Vec<f64> = (0..wf.len()).map(|k| force * wf.x(k)).collect();
    let linear = split_step_evolve(&wf, mass, &linear_pot, 1.0, 1000)
        .unwrap()
        .l2_distance_to(&propagate_gaussian_linear(&packet, mass, force, 1.0).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut composition: f64 = 0.0;
    for _ in 0..200 {
        let p0 = GaussianPacket::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-2.0..2.0),
            Complex64::new(rng.gen_range(0.3..3.0), rng.gen_range(-1.0..1.0)),
            0.0,
        )
        .unwrap();
        let (m, f, t1, t2) = (
            rng.gen_range(0.2..5.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..3.0),
        );
        let a = propagate_gaussian_linear(&propagate_gaussian_linear(&p0, m, f, t1).unwrap(), m, f, t2).unwrap();
        let b = propagate_gaussian_linear(&p0, m, f, t1 + t2).unwrap();
        let scale = |v: f64| v.abs().max(1.0);
        composition = composition
            .max((a.center - b.center).abs() / scale(b.center))
            .max((a.momentum - b.momentum).abs() / scale(b.momentum))
            .max((a.width_param - b.width_param).norm() / b.width_param.norm().max(1.0))
            .max((a.phase - b.phase).abs() / scale(b.phase));
    }
    let pass = norm_drift <= 1e-12 && free <= 1e-8 && linear <= 1e-8 && composition <= 1e-12;
    report(
        9,
        pass,
        format!("norm drift {norm_drift:.1e}, free L2 {free:.1e}, linear L2 {linear:.1e}, composition {composition:.1e}"),
    );
    assert!(pass);
}

#[test]
fn desk_scale_modes_agree_by_oracle_mode() {
    // Same check through the public per-point entry point.
    let r = ReducedProblem::from_groups(2.0, -0.05, 0.2, 2.0 * PI - 0.1).unwrap();
    let a = r.solve(&OracleMode::ClosedForm).unwrap().amplification;
    let b = r.solve(&OracleMode::Grid(GridSettings::default())).unwrap().amplification;
    assert!(relative_difference(b, a) < 1e-6);
}
