use num_complex::Complex64;
use proptest::prelude::*;
use xi_ineq::xi_oracle::{xi, xi_mod_sq};
use xi_ineq::{EvalConfig, SigmaParam};

#[test]
fn symmetric_on_grid() {
    let cfg = EvalConfig::default();
    let one = Complex64::new(1.0, 0.0);
    for i in 0..4 {
        for j in 0..5 {
            let s = Complex64::new(-0.5 + 0.6 * i as f64, -12.0 + 6.0 * j as f64);
            let (a, b) = (xi(s, &cfg).unwrap(), xi(one - s, &cfg).unwrap());
            assert!((a - b).norm() <= 1e-12 * a.norm(), "s = {s}: {a} vs {b}");
        }
    }
}

#[test]
fn real_on_critical_line() {
    let cfg = EvalConfig::default();
    for t in [0.0, 3.0, 14.0, 25.0] {
        let v = xi(Complex64::new(0.5, t), &cfg).unwrap();
        assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1e-30), "t = {t}: {v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modulus_even_in_t(s in 0.55f64..0.95, t in 0.0f64..15.0) {
        let cfg = EvalConfig::default();
        let sp = SigmaParam::new(s).unwrap();
        let a = xi_mod_sq(sp, t, &cfg).unwrap();
        let b = xi_mod_sq(sp, -t, &cfg).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}
