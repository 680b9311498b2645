use lambda_elim::analysis::{compare_trajectories, Method, Picture};
use lambda_elim::elim::{gamma_relevant_amplitudes, propagate_effective, rough_effective, shifted_rough_effective};
use lambda_elim::exact::{decompose, propagate_exact};
use lambda_elim::resolvent::{green_effective, residues, ProjectedResolvent};
use lambda_elim::trajectory::uniform_grid;
use lambda_elim::{reduce, LambdaParams, State2, C64};
use nalgebra::Matrix2;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = LambdaParams> {
    (0.3f64..3.0, any::<bool>(), -0.2f64..0.2, 0.01f64..0.2, -3.2f64..3.2, 0.01f64..0.2, -3.2f64..3.2).prop_map(
        |(bd, neg, d, ma, pa, mb, pb)| {
            let bd = if neg { -bd } else { bd };
            LambdaParams::new(d * bd.abs(), bd, C64::from_polar(ma * bd.abs(), pa), C64::from_polar(mb * bd.abs(), pb))
                .unwrap()
        },
    )
}

fn state() -> impl Strategy<Value = State2> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| {
            let n = (a * a + b * b + c * c + d * d).sqrt();
            State2::new(C64::new(a / n, b / n), C64::new(c / n, d / n)).unwrap()
        })
}

fn max_abs(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn reduction_round_trips(p in params()) {
        let red = reduce(&p).unwrap();
        let (d, oa, ob) = red.expand(p.big_delta());
        let scale = p.delta().abs().max(p.omega_a().norm()).max(p.omega_b().norm());
        prop_assert!((d - p.delta()).abs() <= 1e-14 * scale);
        prop_assert!((oa - p.omega_a()).norm() <= 1e-14 * scale);
        prop_assert!((ob - p.omega_b()).norm() <= 1e-14 * scale);
        prop_assert!(red.lambda >= 0.0);
        let top = red.lambda.max(red.lambda_a.norm()).max(red.lambda_b.norm());
        prop_assert!((top - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reduction_is_scale_covariant(p in params(), s in 0.01f64..100.0) {
        let a = reduce(&p).unwrap();
        let b = reduce(&p.scaled(s).unwrap()).unwrap();
        prop_assert!((a.epsilon - b.epsilon).abs() < 1e-14);
        prop_assert!((a.lambda - b.lambda).abs() < 1e-13);
        prop_assert!((a.lambda_a - b.lambda_a).norm() < 1e-13);
        prop_assert!((a.lambda_b - b.lambda_b).norm() < 1e-13);
        prop_assert_eq!(a.lambda_sign, b.lambda_sign);
    }

    #[test]
    fn exact_propagation_conserves_norm(p in params(), s in state()) {
        let times = uniform_grid(200.0 / p.big_delta().abs(), 64);
        let traj = propagate_exact(&decompose(&p, &s.into()), &times);
        prop_assert!(traj.max_norm_deviation() <= 1e-12);
    }

    #[test]
    fn effective_propagation_is_unitary(p in params(), s in state(), eta in -0.9f64..4.0) {
        let h = shifted_rough_effective(&p, eta).unwrap();
        prop_assert!(h.hermiticity_defect() <= 1e-14 * p.big_delta().abs());
        let traj = propagate_effective(&h, &s, &uniform_grid(5000.0 / p.big_delta().abs(), 64));
        prop_assert!(traj.max_norm_deviation() <= 1e-13);
    }

    #[test]
    fn shifted_coupling_scales_as_inverse_shift(p in params(), eta in -0.99f64..5.0) {
        prop_assume!((1.0 + eta).abs() > 1e-3);
        let h0 = rough_effective(&p);
        let h = shifted_rough_effective(&p, eta).unwrap();
        let expected = h0.raman_coupling().norm() / (1.0 + eta).abs();
        prop_assert!((h.raman_coupling().norm() - expected).abs() <= 1e-14 * expected.max(1e-300));
    }

    #[test]
    fn rough_elimination_uses_relevant_component(p in params(), s in state()) {
        // H_eff (alpha, beta) = P H0 P (alpha, beta) + P V Q gamma_rel
        let h = rough_effective(&p);
        let g = gamma_relevant_amplitudes(&p, s.alpha(), s.beta());
        let (a, b) = (s.alpha(), s.beta());
        let lhs_a = h.matrix()[(0, 0)] * a + h.matrix()[(0, 1)] * b;
        let lhs_b = h.matrix()[(1, 0)] * a + h.matrix()[(1, 1)] * b;
        let rhs_a = -0.5 * p.delta() * a + 0.5 * p.omega_a().conj() * g;
        let rhs_b = 0.5 * p.delta() * b + 0.5 * p.omega_b().conj() * g;
        prop_assert!((lhs_a - rhs_a).norm() <= 1e-15 * p.big_delta().abs());
        prop_assert!((lhs_b - rhs_b).norm() <= 1e-15 * p.big_delta().abs());
    }

    #[test]
    fn green_at_origin_is_rough(p in params()) {
        let g = green_effective(&p, 0.0).unwrap();
        prop_assert!(g.max_entry_difference(&rough_effective(&p)) <= 1e-14 * p.big_delta().abs());
    }

    #[test]
    fn residues_are_complete(p in params()) {
        let r = residues(&p, 0.0).unwrap();
        prop_assert!(max_abs(&(r.sum() - Matrix2::identity())) <= 1e-12);
    }

    #[test]
    fn coupling_matrix_is_rank_one(p in params()) {
        let m = ProjectedResolvent::new(&p).unwrap();
        let k = m.coupling_matrix();
        let red = reduce(&p).unwrap();
        prop_assert!(max_abs(&(k - k.adjoint())) == 0.0);
        prop_assert!(k.determinant().norm() <= 1e-14);
        prop_assert!(((k[(0, 0)] + k[(1, 1)]).re - red.coupling_norm_sqr()).abs() <= 1e-14);
    }

    #[test]
    fn comparison_is_symmetric(p in params(), s in state(), eta in 0.0f64..3.0) {
        let times = uniform_grid(50.0 / p.big_delta().abs(), 32);
        let ex = propagate_exact(&decompose(&p, &s.into()), &times);
        let ef = propagate_effective(&shifted_rough_effective(&p, eta).unwrap(), &s, &times);
        let m = (Method::Exact, Method::Shifted { eta });
        let r1 = compare_trajectories(&ex, &ef, &p, Picture::Natural, m).unwrap();
        let r2 = compare_trajectories(&ef, &ex, &p, Picture::Natural, m).unwrap();
        prop_assert_eq!(r1.max_amplitude_error, r2.max_amplitude_error);
        prop_assert_eq!(r1.max_population_error, r2.max_population_error);
    }
}
