//! Cross-module properties of the analytic formulas and the oracle.

use std::f64::consts::PI;

use weakgrav::analytic::{EnsembleParams, Experiment};
use weakgrav::gravity::GravitySource;
use weakgrav::oracle::{oracle_amplification, relative_difference, OracleMode, ReducedProblem};
use weakgrav::units::{to_natural, Quantity, ATOMIC_MASS_UNIT_KG};

fn benchmark() -> Experiment {
    let kg = |v: f64| to_natural(Quantity::kilograms(v).unwrap());
    let m = |v: f64| to_natural(Quantity::metres(v).unwrap());
    let ensemble = EnsembleParams::new(1e15, kg(86.909180527 * ATOMIC_MASS_UNIT_KG), 1e-5, m(1e-3)).unwrap();
    Experiment::new(ensemble, GravitySource::point_mass(kg(100.0)).unwrap(), m(0.1)).unwrap()
}

fn s(v: f64) -> f64 {
    to_natural(Quantity::seconds(v).unwrap())
}

#[test]
fn dense_sweep_probability_and_finiteness() {
    let exp = benchmark();
    let n = 100_000;
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=n {
        let t = s(k as f64 / n as f64);
        let p = exp.point(t, false).unwrap();
        assert!((0.0..=1.0).contains(&p.p_tran), "p_tran {} at {k}", p.p_tran);
        assert!(p.amp_exact.is_finite());
        // amp_exact − 1 only changes sign where sin f does
        let cur = (p.amp_exact - 1.0, p.f.sin());
        if let Some((a, sf)) = prev {
            if a.signum() != cur.0.signum() {
                assert!(sf.signum() != cur.1.signum() || cur.1 == 0.0, "sign change without a root of sin f at {k}");
            }
        }
        prev = Some(cur);
    }
}

#[test]
fn exact_peaks_are_displaced_from_roots() {
    let exp = benchmark();
    let roots = exp.leading_resonances(s(1.8), false, 8).unwrap().unwrap();
    assert!(roots.len() >= 3);
    for root in roots {
        let lo = exp.exact_peak(0.98 * root, root, false).unwrap();
        let hi = exp.exact_peak(root, 1.02 * root, false).unwrap();
        for peak in [lo, hi] {
            let resolution = 1e-9 * root;
            assert!((peak - root).abs() > 1e3 * resolution, "peak {peak} root {root}");
            assert!(exp.amp_exact(peak, false).unwrap().abs() > exp.amp_exact(root, false).unwrap().abs());
        }
    }
}

#[test]
fn benchmark_closed_form_oracle_tracks_analytic() {
    // The printed phase lacks 2ΔM x_cl²/T (≈ 5e-6 rad here), so agreement is
    // at the 1e-5 level rather than 1e-6.
    let exp = benchmark();
    for t in [0.1, 0.3, 0.5, 0.8] {
        let o = oracle_amplification(&exp, s(t), false, &OracleMode::ClosedForm).unwrap();
        let a = exp.amp_exact(s(t), false).unwrap();
        assert!(relative_difference(o.amplification, a) < 1e-4, "T = {t}: {} vs {a}", o.amplification);
        let p = exp.transition_probability(s(t), false).unwrap();
        assert!(((o.norm - p) / p).abs() < 1e-4, "T = {t}: {} vs {p}", o.norm);
    }
}

#[test]
fn benchmark_variance_matches_free_spreading() {
    let exp = benchmark();
    for t in [0.1, 0.3, 0.5, 0.8] {
        let pt = exp.phase_functions(s(t), false).unwrap();
        if 1.0 - (-pt.g).exp() * pt.f.cos() <= 0.1 {
            continue;
        }
        let o = oracle_amplification(&exp, s(t), false, &OracleMode::ClosedForm).unwrap();
        let free = exp.pointer_variance_leading(s(t)).unwrap();
        let dev = (o.variance / free - 1.0).abs();
        println!("T = {t} s: variance deviation {dev:.2e}, g = {:.2e}", pt.g);
        assert!(dev < 1e-2, "T = {t}: {dev}");
    }
}

#[test]
fn variance_deviation_is_first_order_in_g() {
    // Tiny spread: the unequal branch masses add a g-independent part of order α s³.
    let (alpha, spread, chi) = (2.0, 1e-6, 2.0);
    let dev = |g: f64| {
        let r = ReducedProblem::from_groups(alpha, -g.sqrt() / alpha, spread, chi).unwrap();
        let p = r.solve(&OracleMode::ClosedForm).unwrap();
        (p.variance / (0.5 * (1.0 + spread * spread)) - 1.0).abs()
    };
    let ratio = dev(1e-3) / dev(1e-4);
    assert!((ratio - 10.0).abs() < 0.5, "{ratio}");
}

#[test]
fn corrected_phase_reproduces_oracle() {
    // With spreading negligible the oracle equals the all-orders form with
    // phase θ = χ + (4/3) α X².
    for (alpha, g) in [(1.0, 1e-3), (3.0, 1e-2), (4.0, 0.1)] {
        let x = -f64::sqrt(g) / alpha;
        for k in 0..32 {
            let chi = 4.0 * PI * k as f64 / 31.0;
            let r = ReducedProblem::from_groups(alpha, x, 1e-9, chi).unwrap();
            let o = r.solve(&OracleMode::ClosedForm).unwrap();
            let theta = chi + 4.0 / 3.0 * alpha * x * x;
            let c = (-g).exp();
            let expected = 1.0 + alpha * c * theta.sin() / (1.0 - c * theta.cos());
            assert!(relative_difference(o.amplification, expected) < 1e-7, "{} vs {expected}", o.amplification);
            assert!(((o.norm - 0.5 * (1.0 - c * theta.cos())) / o.norm).abs() < 1e-9);
        }
    }
}

#[test]
fn per_branch_masses_leave_displacement_unchanged() {
    let exp = benchmark();
    let r = ReducedProblem::from_experiment(&exp, s(0.5), false).unwrap();
    let pair = r.packet_pair().unwrap();
    let x = r.displacement();
    assert!(((pair.first.center - x) / x).abs() < 1e-14);
    assert!((pair.d_center / x).abs() < 1e-14);
}

#[test]
fn fast_phase_changes_only_f() {
    let exp = benchmark();
    for t in [0.05, 0.37, 0.9] {
        let off = exp.point(s(t), false).unwrap();
        let on = exp.point(s(t), true).unwrap();
        assert_eq!(off.g.to_bits(), on.g.to_bits());
        assert_eq!(off.x_cl.to_bits(), on.x_cl.to_bits());
        assert_eq!(off.variance.to_bits(), on.variance.to_bits());
        assert_ne!(off.f, on.f);
    }
}
