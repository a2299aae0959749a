use super::*;
use crate::representation::ModulusRepresentation;
use crate::xi_oracle::{xi_mod_sq, xi_real};
use approx::assert_relative_eq;

fn sig(s: f64) -> SigmaParam {
    SigmaParam::new(s).unwrap()
}

#[test]
fn scan_positive_and_anchored() {
    let cfg = EvalConfig::default();
    let r = scan_inequality(sig(0.75), 20.0, 0.25, ScanRoute::Representation, &cfg).unwrap();
    assert_eq!(r.grid.len(), 81);
    assert!(r.all_positive());
    assert!(r.min_value > 0.0);
    let xs = xi_real(0.75, &cfg).unwrap();
    assert_relative_eq!(r.values[0], 2.0 * xs * xs, max_relative = 1e-10);
    for (&t, &v) in r.grid.iter().zip(&r.values).step_by(9) {
        assert_relative_eq!(v, 2.0 * xi_mod_sq(sig(0.75), t, &cfg).unwrap(), max_relative = 1e-5);
    }
}

#[test]
fn routes_agree() {
    let cfg = EvalConfig::default();
    let a = Evaluator::new(sig(0.6), ScanRoute::Representation, &cfg).unwrap();
    let b = Evaluator::new(sig(0.6), ScanRoute::JEta, &cfg).unwrap();
    for t in [0.0, 0.75, 3.5, 9.25] {
        assert_relative_eq!(a.eval(t).unwrap().value, b.eval(t).unwrap().value, max_relative = 1e-7);
    }
}

#[test]
fn classification() {
    assert_eq!(classify(1.0, 0.1), PointStatus::Positive);
    assert_eq!(classify(0.05, 0.1), PointStatus::Indeterminate);
    assert_eq!(classify(-0.05, 0.1), PointStatus::Indeterminate);
    assert_eq!(classify(-1.0, 0.1), PointStatus::Violation);
}

#[test]
fn rejects_sigma_off_range() {
    let e = scan_inequality(sig(0.4), 1.0, 0.5, ScanRoute::Representation, &EvalConfig::default());
    assert!(e.is_err());
}

#[test]
fn levels_formula() {
    let cfg = EvalConfig::default();
    let l = truncation_levels(0.5, sig(0.75), 1, &cfg).unwrap();
    assert_eq!(l.c_const, 1.0);
    assert_eq!(l.n1, 6);
    assert_eq!(l.n2, 7282);
    assert!(l.app1_passes);
    let tight = truncation_levels(0.1, sig(0.75), 1, &cfg).unwrap();
    assert!(tight.n1 >= l.n1 && tight.n2 >= l.n2);
}

#[test]
fn thmsd_cell_passes() {
    let cfg = EvalConfig::default();
    let r = check_prop_thmsd(sig(0.75), 1, 0.5, DEFAULT_N2_CAP, &cfg).unwrap();
    assert!(!r.substituted);
    assert!(r.passes_23d3, "{r:?}");
    // V^N is within the bound of 2|ξ|² at the grid minimum.
    let v = 2.0 * xi_mod_sq(sig(0.75), r.min_t, &cfg).unwrap();
    assert!((r.min_v - v).abs() < r.approx_error_bound);
    assert!((r.min_v - v).abs() < 1e-9);
    let capped = check_prop_thmsd(sig(0.75), 1, 0.5, 100, &cfg).unwrap();
    assert!(capped.substituted);
    assert_eq!(capped.n2_used, 100);
}

#[test]
fn poly_approaches_modulus() {
    let cfg = EvalConfig::default();
    let v = poly_approx_v(sig(0.75), 8, 200, 1.0, &cfg).unwrap();
    assert_relative_eq!(v, 2.0 * xi_mod_sq(sig(0.75), 1.0, &cfg).unwrap(), max_relative = 1e-9);
}

#[test]
fn odd_count_truncation_positive() {
    let cfg = EvalConfig::default();
    let ts: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
    for v in partial_cosine_bound(sig(0.75), 2, &ts, &cfg).unwrap() {
        assert!(v > 0.0);
    }
}

#[test]
fn lemma_moment_bound_holds() {
    let cfg = EvalConfig::default();
    for n in 0..3 {
        let (lhs, rhs) = lemma_moment_bound(sig(0.75), 2, n, &cfg).unwrap();
        assert!(lhs > 0.0 && lhs < rhs, "n={n}: {lhs} vs {rhs}");
    }
}

#[test]
fn sampler_table_and_moments() {
    let cfg = EvalConfig::default();
    let rep = ModulusRepresentation::new(sig(0.75), &cfg).unwrap();
    let s = XSampler::from_representation(&rep, 0.75).unwrap();
    assert!(s.table_err < 1e-8);
    assert_relative_eq!(s.norm, rep.w_cosine_integral(0.0).unwrap().value, max_relative = 1e-10);
    let (xs, trials) = s.sample_many(100_000, 7);
    assert!(xs.iter().all(|&x| x >= 0.0));
    let rate = xs.len() as f64 / trials as f64;
    assert!(rate > 0.0 && rate <= 1.0);
    let d = ks_statistic(&xs, |x| s.cdf(x));
    assert!(d < ks_critical_1pct(xs.len()), "KS {d}");
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
    let m1 = rep.w_moment(0, 8.0).unwrap().value;
    let exact = crate::quadrature::integrate_finite(|x| rep.w(x).unwrap() * (-0.75 * x).exp() * x, 0.0, 8.0, &cfg).unwrap().value / m1;
    assert!((mean - exact).abs() < 4.0 * sd / (xs.len() as f64).sqrt());
    // Same seed, same draws.
    assert_eq!(s.sample_many(1000, 7).0, xs[..1000].to_vec());
}

#[test]
fn monte_carlo_band() {
    let cfg = EvalConfig::default();
    let rep = ModulusRepresentation::new(sig(0.75), &cfg).unwrap();
    let s = XSampler::from_representation(&rep, 0.75).unwrap();
    let reps = mc_reports(&rep, &s, &[0.0, 5.0], 200_000, 11).unwrap();
    assert_eq!(reps[0].estimate, 1.0);
    assert!(reps[1].z_score < 4.0);
    assert!(reps[1].mm_holds && reps[1].mm_holds_mc);
}

#[test]
fn kernel_positive_and_tail() {
    let cfg = EvalConfig::default();
    let k = KKernel::new(sig(0.75), &cfg).unwrap();
    for x in [0.0, 1.0, 2.0, 5.0, 10.0] {
        assert!(k.eval(x).unwrap() > 0.0);
    }
    assert_relative_eq!(k.eval(6.0).unwrap(), k.tail_form(6.0), max_relative = 1e-14);
}

#[test]
fn kernel_fourier_identity() {
    let cfg = EvalConfig::default();
    let k = KKernel::new(sig(0.75), &cfg).unwrap();
    for t in [0.0, 1.0, 5.0, 10.0] {
        let f = k.fourier(t).unwrap().value;
        let want = k.fourier_from_modulus(xi_mod_sq(sig(0.75), t, &cfg).unwrap(), t);
        assert_relative_eq!(f, want, max_relative = 1e-6);
        assert_relative_eq!(f, k.fourier(-t).unwrap().value, max_relative = 1e-12);
    }
    let norm = k.fourier(0.0).unwrap().value;
    assert!((k.autocorrelation(0.0, norm).unwrap().value - 1.0).abs() < 1e-12);
}

#[test]
fn box_kernel_zero_located() {
    let cfg = EvalConfig::default();
    let r = orthogonalization_scan_with(|t| box_kernel_autocorrelation(t, &cfg), 5.0, 0.1, 1e-11).unwrap();
    let z = r.iota_found.expect("sin t / t vanishes at pi");
    assert!((z.t - std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn no_orthogonalization_short_range() {
    let cfg = EvalConfig::default();
    let r = orthogonalization_scan(sig(0.75), 10.0, 0.5, &cfg).unwrap();
    assert!(r.iota_found.is_none());
    assert!(r.min_a > 0.0 && r.values.iter().all(|a| a.abs() <= 1.0));
}
