use entropic_sums::{eta, eta_argmax, q_log, Alpha};
use proptest::prelude::*;

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![0.01f64..10.0, Just(1.0), Just(2.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eta_is_midpoint_concave(x in 0.0f64..=1.0, z in 0.0f64..=1.0, al in alpha()) {
        let a = Alpha::new(al).unwrap();
        let mid = eta(0.5 * (x + z), a).unwrap();
        let chord = 0.5 * (eta(x, a).unwrap() + eta(z, a).unwrap());
        prop_assert!(mid >= chord - 1e-12, "x={x} z={z} a={al}: {mid} < {chord}");
    }

    #[test]
    fn q_log_product_identity(x in 1e-6f64..=1.0, y in 1e-6f64..=1.0, al in alpha()) {
        let a = Alpha::new(al).unwrap();
        let lhs = q_log(x * y, a).unwrap();
        let rhs = q_log(x, a).unwrap() + x.powf(1.0 - al) * q_log(y, a).unwrap();
        // absolute 1e-10 where the values are O(1); relative beyond that
        let scale = lhs.abs().max(1.0);
        prop_assert!((lhs - rhs).abs() < 1e-10 * scale, "x={x} y={y} a={al}: {lhs} vs {rhs}");
    }
}

#[test]
fn continuous_across_the_shannon_switch() {
    for al in [1.0 - 1e-9, 1.0 + 1e-9] {
        let a = Alpha::new(al).unwrap();
        for i in 0..1000 {
            let x = i as f64 / 999.0;
            let shannon = if x > 0.0 { -x * x.ln() } else { 0.0 };
            assert!((eta(x, a).unwrap() - shannon).abs() < 1e-6, "x={x} a={al}");
        }
    }
}

#[test]
fn argmax_dominates_a_grid() {
    for al in [0.05, 0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0] {
        let a = Alpha::new(al).unwrap();
        let top = eta(eta_argmax(a), a).unwrap();
        for i in 0..=10_000 {
            let x = i as f64 / 10_000.0;
            assert!(top >= eta(x, a).unwrap() - 1e-15, "a={al} x={x}");
        }
    }
}
