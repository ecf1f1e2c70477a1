//! Randomized invariants for the special-function layer and the spectra.

use magsteklov::specfun::{
    exp_taylor_remainder, laguerre, laguerre_dx, laguerre_scaled, LaguerreArgs,
};
use magsteklov::spectra::{
    b2_steklov_eigenvalue, spectrum, Domain, Family, MagneticParameter,
};
use proptest::prelude::*;

/// Half-integer degrees m ± 1/2 for 0 <= m <= 10.
fn half_integer_nu() -> impl Strategy<Value = f64> {
    (0u32..=10, prop::bool::ANY).prop_map(|(m, plus)| m as f64 + if plus { 0.5 } else { -0.5 })
}

fn integer_alpha() -> impl Strategy<Value = f64> {
    (-12i32..=3).prop_map(|a| a as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laguerre_three_term_recurrence(
        nu in half_integer_nu(),
        alpha in integer_alpha(),
        x in 1e-3f64..=10.0,
    ) {
        let l_prev = laguerre(LaguerreArgs::new(nu - 1.0, alpha, x)).unwrap();
        let l = laguerre(LaguerreArgs::new(nu, alpha, x)).unwrap();
        let l_next = laguerre(LaguerreArgs::new(nu + 1.0, alpha, x)).unwrap();
        let lhs = (nu + 1.0) * l_next;
        let term_mid = (2.0 * nu + alpha + 1.0 - x) * l;
        let term_prev = (nu + alpha) * l_prev;
        let rhs = term_mid - term_prev;
        // Relative to the recurrence's own term scale (the subtraction on the
        // right can cancel); skip triples where all terms nearly vanish
        // (adjacent to a common zero).
        let scale = lhs.abs().max(term_mid.abs()).max(term_prev.abs());
        prop_assume!(scale > 1e-12);
        prop_assert!(
            (lhs - rhs).abs() <= 1e-10 * scale,
            "nu={nu}, alpha={alpha}, x={x}: lhs={lhs:e}, rhs={rhs:e}"
        );
    }

    #[test]
    fn laguerre_derivative_matches_finite_difference(
        nu in half_integer_nu(),
        alpha in integer_alpha(),
        x in 0.1f64..=10.0,
    ) {
        let h = 1e-5;
        let (plus, scale_plus) = laguerre_scaled(LaguerreArgs::new(nu, alpha, x + h)).unwrap();
        let (minus, scale_minus) = laguerre_scaled(LaguerreArgs::new(nu, alpha, x - h)).unwrap();
        let fd = (plus - minus) / (2.0 * h);
        let exact = laguerre_dx(LaguerreArgs::new(nu, alpha, x)).unwrap();
        // The stencil has its own error floor: truncation h²/6·f‴ (estimated
        // from the derivative identity) plus the function's rounding noise
        // amplified by 1/(2h); high-degree oscillatory cases are judged
        // against that model rather than failed outright.
        let hh = 1e-2;
        let d_plus = laguerre_dx(LaguerreArgs::new(nu, alpha, x + hh)).unwrap();
        let d_minus = laguerre_dx(LaguerreArgs::new(nu, alpha, x - hh)).unwrap();
        let f3 = (d_plus - 2.0 * exact + d_minus) / (hh * hh);
        let scale = exact.abs().max(plus.abs()).max(1e-8);
        let allowed = 1e-7 * scale
            + h * h / 6.0 * 2.0 * f3.abs()
            + 4.0 * f64::EPSILON * (scale_plus + scale_minus) / (2.0 * h);
        prop_assert!(
            (exact - fd).abs() <= allowed,
            "nu={nu}, alpha={alpha}, x={x}: exact={exact:e}, fd={fd:e}"
        );
    }

    #[test]
    fn exp_remainder_reconstructs_exp(t in -20.0f64..=20.0, k in 0u32..=30) {
        let mut partial = 0.0;
        let mut term = 1.0;
        let mut scale: f64 = t.exp();
        for j in 0..=k {
            if j > 0 {
                term *= t / j as f64;
            }
            partial += term;
            scale = scale.max(term.abs());
        }
        let rebuilt = partial + exp_taylor_remainder(k, t).unwrap();
        prop_assert!(
            (rebuilt - t.exp()).abs() <= 1e-13 * scale,
            "t={t}, k={k}: rebuilt={rebuilt:e}, exp={:e}", t.exp()
        );
    }

    #[test]
    fn b2_eigenvalues_are_positive_and_continuous(k in 1u32..=20, t in 0.01f64..=30.0) {
        for family in [Family::B2Plus, Family::B2Minus] {
            let v = b2_steklov_eigenvalue(k, family, MagneticParameter::new(t).unwrap()).unwrap();
            let v_eps =
                b2_steklov_eigenvalue(k, family, MagneticParameter::new(t + 1e-7).unwrap()).unwrap();
            prop_assert!(v > 0.0);
            prop_assert!((v_eps - v).abs() <= 1e-4 * v.max(1.0), "k={k}, t={t}: jump {v} -> {v_eps}");
        }
    }

    #[test]
    fn spectra_are_sorted_with_zero_mode(t in 0.0f64..=8.0, k_max in 2u32..=12) {
        for domain in [Domain::S1, Domain::S3, Domain::B2] {
            let spec = spectrum(domain, MagneticParameter::new(t).unwrap(), k_max).unwrap();
            prop_assert!(spec.records.windows(2).all(|w| w[0].value <= w[1].value));
            prop_assert!(spec.records.iter().all(|r| r.value >= -1e-12));
        }
    }
}
