use convect_core::poly::ExactPoly;
use convect_core::rational::Rational;
use convect_core::slp_basis::*;
use proptest::prelude::*;

const MAX_INDEX: usize = 30;

/// Gauss-Legendre nodes/weights on [0, 1] by Newton iteration on P_n.
/// Exact for polynomials of degree <= 2n - 1.
fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|j| {
            let mut t = (std::f64::consts::PI * (j as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, t);
                for k in 1..n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                let step = p1 / dp;
                t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - t * t) * dp * dp);
            (0.5 * (t + 1.0), 0.5 * w)
        })
        .collect()
}

#[test]
fn orthogonality_up_to_thirty() {
    let rule = gauss_legendre_unit(40);
    let tables: Vec<Vec<f64>> = rule.iter().map(|&(x, _)| q_values(MAX_INDEX, x)).collect();
    for i in 0..=MAX_INDEX {
        for j in 0..=MAX_INDEX {
            let integral: f64 = rule
                .iter()
                .zip(&tables)
                .map(|(&(_, w), q)| w * q[i] * q[j])
                .sum();
            let expected = if i == j {
                1.0 / (2.0 * i as f64 + 1.0)
            } else {
                0.0
            };
            assert!((integral - expected).abs() < 1e-13, "({i},{j}): {integral}");
        }
    }
}

#[test]
fn endpoint_conditions_are_exact() {
    let zero = Rational::zero();
    let one = Rational::one();
    for i in 1..=MAX_INDEX {
        let phi = phi_poly(i).unwrap();
        let beta = beta_poly(i).unwrap();
        let dbeta = beta.derivative();
        for x in [&zero, &one] {
            assert!(phi.eval(x).is_zero(), "phi_{i}");
            assert!(beta.eval(x).is_zero(), "beta_{i}");
            assert!(dbeta.eval(x).is_zero(), "beta'_{i}");
        }
    }
}

#[test]
fn second_derivative_of_beta_is_q() {
    for i in 1..=MAX_INDEX {
        assert_eq!(
            beta_poly(i).unwrap().nth_derivative(2),
            q_poly(i + 1),
            "beta_{i}"
        );
        assert_eq!(beta_poly(i).unwrap().derivative(), phi_poly(i + 1).unwrap());
        assert_eq!(phi_poly(i).unwrap().derivative(), q_poly(i), "phi_{i}");
    }
}

#[test]
fn q_is_one_at_right_end() {
    for i in 0..=MAX_INDEX {
        assert_eq!(q_poly(i).eval(&Rational::one()), Rational::one());
        assert_eq!(eval_q(i, 1.0).unwrap(), 1.0);
    }
}

#[test]
fn recurrences_hold_exactly() {
    for i in 1..=MAX_INDEX {
        let lhs = q_poly(i).scale(&Rational::from(2 * (2 * i as i64 + 1)));
        let rhs = &q_poly(i + 1).derivative() - &q_poly(i - 1).derivative();
        assert_eq!(lhs, rhs, "derivative relation at {i}");
    }
    for i in 0..=MAX_INDEX {
        let combo = multiply_by_x(i)
            .into_iter()
            .fold(ExactPoly::zero(), |acc, (k, c)| &acc + &q_poly(k).scale(&c));
        assert_eq!(combo, q_poly(i).mul_x(), "x Q_{i}");
    }
}

#[test]
fn recurrences_hold_on_dense_grid() {
    for i in 1..=MAX_INDEX {
        let terms = multiply_by_x(i);
        for j in 0..=1000 {
            let x = j as f64 / 1000.0;
            assert!(
                derivative_relation_residual(i, x).unwrap() < 1e-12,
                "({i}, {x})"
            );
            let q = q_values(i + 1, x);
            let combo: f64 = terms.iter().map(|(k, c)| c.to_f64() * q[*k]).sum();
            assert!((x * q[i] - combo).abs() < 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn q_bounded_and_reflected(i in 0usize..40, x in 0.0f64..=1.0) {
        let q = eval_q(i, x).unwrap();
        prop_assert!(q.abs() <= 1.0 + 1e-12);
        let reflected = eval_q(i, 1.0 - x).unwrap();
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((reflected - sign * q).abs() < 1e-12);
    }

    #[test]
    fn beta_derivatives_consistent(i in 1usize..20, x in 0.01f64..0.99) {
        // truncation h^2 |f'''| / 6 stays below ~1e-7 for Q''_{i+1}, i < 20
        let h = 1e-6;
        let d1 = (eval_beta(i, x + h).unwrap() - eval_beta(i, x - h).unwrap()) / (2.0 * h);
        prop_assert!((d1 - eval_beta_derivative(i, 1, x).unwrap()).abs() < 1e-8);
        let d2 = (eval_beta_derivative(i, 1, x + h).unwrap() - eval_beta_derivative(i, 1, x - h).unwrap()) / (2.0 * h);
        prop_assert!((d2 - eval_beta_derivative(i, 2, x).unwrap()).abs() < 1e-6);
    }
}
