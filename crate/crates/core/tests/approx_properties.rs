use approx::assert_relative_eq;
use proptest::prelude::*;
use rexi_core::approx::{
    cf_best_approximation, faber_cf, faber_coefficients, hankel_matrix, singular_values,
    FaberCfOptions, JoukowskiMap, PartialFractionApproximation,
};
use rexi_core::C64;
use std::f64::consts::PI;

fn c64() -> impl Strategy<Value = C64> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(re, im)| C64::new(re, im))
}

/// Shifts kept off the imaginary axis so evaluation on it stays finite.
fn shift() -> impl Strategy<Value = C64> {
    (0.1..5.0f64, -12.0..12.0f64, any::<bool>())
        .prop_map(|(re, im, left)| C64::new(if left { -re } else { re }, im))
}

fn approximation() -> impl Strategy<Value = PartialFractionApproximation> {
    (1usize..8).prop_flat_map(|k| {
        (
            prop::collection::vec(shift(), k),
            prop::collection::vec(c64(), k),
            0.5..20.0f64,
        )
            .prop_filter_map("distinct shifts", |(s, w, r1)| {
                PartialFractionApproximation::new(s, w, r1).ok()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_linear_in_weights(a in approximation(), scale in c64(), x in -20.0..20.0f64) {
        let z = C64::new(0.0, x);
        let w2: Vec<C64> = a.weights().iter().map(|w| w * scale).collect();
        let b = PartialFractionApproximation::new(a.shifts().to_vec(), w2, a.r1()).unwrap();
        let lhs = b.evaluate(z).unwrap();
        let rhs = a.evaluate(z).unwrap() * scale;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn stabilize_scales_the_function(a in approximation(), eps in 1e-12..1e-2f64, x in -20.0..20.0f64) {
        let z = C64::new(0.0, x);
        let s = a.stabilize(eps).unwrap();
        prop_assert_eq!(s.shifts(), a.shifts());
        let expected = a.evaluate(z).unwrap() * (1.0 - eps);
        prop_assert!((s.evaluate(z).unwrap() - expected).norm() <= 1e-13 * (1.0 + expected.norm()));
        prop_assert!(s.is_stabilized());
    }

    #[test]
    fn json_round_trip_is_bitwise(a in approximation(), eps in prop::option::of(1e-10..1e-3f64)) {
        let a = a.with_measured_error(512).unwrap();
        let a = match eps {
            Some(e) => a.stabilize(e).unwrap(),
            None => a,
        };
        let back = PartialFractionApproximation::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(back, a);
    }

    /// The CF error has modulus `σ_{n+1}` everywhere on the unit circle.
    #[test]
    fn cf_error_has_modulus_sigma(
        coeffs in prop::collection::vec(c64(), 7..14),
        frac in 0.1..0.5f64,
    ) {
        let l = coeffs.len() - 1;
        let n = ((l as f64 * frac) as usize).max(1);
        let best = cf_best_approximation(&coeffs, n).unwrap();
        let h = hankel_matrix(&coeffs, l, l + 1).unwrap();
        let sv = singular_values(&h);
        prop_assume!(sv[n] > 1e-8 * sv[0]);
        assert_relative_eq!(best.sigma(), sv[n], max_relative = 1e-10);
        for k in 0..64 {
            let z = C64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0);
            let e = best.error(z);
            prop_assert!((e.norm() - best.sigma()).abs() <= 1e-8 * best.leading_sigma());
            prop_assert!((best.target(z) - best.eval(z) - e).norm() <= 1e-9 * best.leading_sigma());
        }
    }

    /// Faber coefficients of `1 / (w - η(z_k))` are `-z_k^{-j-1} / η'(z_k)`.
    #[test]
    fn faber_coefficients_of_simple_pole(r1 in 1.0..20.0f64, modulus in 1.5..4.0f64, arg in 0.0..(2.0 * PI)) {
        let map = JoukowskiMap::new(r1).unwrap();
        let zk = C64::from_polar(modulus, arg);
        let sk = map.eval(zk).unwrap();
        let dk = map.derivative(zk).unwrap();
        let series = faber_coefficients(&map, |w| (w - sk).inv(), 20, 1.0 + 1e-4, 1024).unwrap();
        for j in 0..=20i64 {
            let expected = -zk.powi(-(j as i32) - 1) / dk;
            prop_assert!((series.get(j) - expected).norm() <= 1e-12 * (1.0 + 1.0 / dk.norm()));
        }
    }
}

#[test]
fn default_construction() {
    let a = faber_cf(
        &JoukowskiMap::new(10.0).unwrap(),
        &FaberCfOptions::default(),
    )
    .unwrap();
    assert_eq!(a.len(), 16);
    assert!(a.sup_error() > 5e-10 && a.sup_error() < 1e-8);
    for (i, s) in a.shifts().iter().enumerate() {
        assert!(s.re.abs() > 1e-10, "shift {i} on the interval");
        assert!(a
            .shifts()
            .iter()
            .any(|t| (t - s.conj()).norm() < 1e-5 * s.norm().max(1.0)));
    }
    let dev = a.max_deviation_on_interval(10.0, 20001).unwrap();
    assert!(dev > 0.0);
    assert!(
        a.stabilize(1e-8)
            .unwrap()
            .max_deviation_on_interval(10.0, 20001)
            .unwrap()
            <= 0.0
    );
}
