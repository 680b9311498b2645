use lambda_elim::analysis::{
    driven_mode_solution, effective_error, expansion_convergence, ratio_test, scaling_study, DrivenMode, Method,
    OrderCheck, RatioTest, Sign, TimeWindow,
};
use lambda_elim::elim::{gamma_relevant, gamma_relevant_amplitudes, gamma_relevant_exact};
use lambda_elim::exact::{decompose, propagate_exact};
use lambda_elim::resolvent::{leading_order_residues, pole_approx_resolvent, residues};
use lambda_elim::trajectory::uniform_grid;
use lambda_elim::{reduce, LambdaParams, State2, C64};
use lambda_elim_testkit::{reference_dark_params, reference_params, reference_state};

const FACTORS: [f64; 3] = [1.0, 0.5, 0.25];

fn family(base: &LambdaParams) -> Vec<LambdaParams> {
    FACTORS.iter().map(|&f| base.with_scaled_couplings(f).unwrap()).collect()
}

fn check<F: Fn(&LambdaParams) -> f64>(base: &LambdaParams, order: u32, mode: OrderCheck, residual: F) -> RatioTest {
    let ps = family(base);
    let eps: Vec<f64> = ps.iter().map(|p| reduce(p).unwrap().epsilon).collect();
    let res: Vec<f64> = ps.iter().map(residual).collect();
    ratio_test(&eps, &res, order, mode).unwrap()
}

fn assert_passed(name: &str, t: &RatioTest) {
    assert!(t.passed, "{name}: residuals {:?}, ratios {:?}, expected {:?}", t.residuals, t.ratios, t.expected);
}

#[test]
fn expansion_table_detuned_branch_is_second_order() {
    let rows = expansion_convergence(&reference_params(), &reference_state(), &FACTORS, OrderCheck::Exact).unwrap();
    for (name, _, t) in &rows {
        assert_passed(name, t);
    }
}

#[test]
fn expansion_table_dark_branch() {
    let rows =
        expansion_convergence(&reference_dark_params(), &reference_state(), &FACTORS, OrderCheck::AtLeast).unwrap();
    for (name, _, t) in &rows {
        assert_passed(name, t);
    }
}

#[test]
fn relevant_part_at_origin_matches_slow_modes() {
    let s = reference_state();
    for base in [reference_params(), reference_dark_params()] {
        let t = check(&base, 2, OrderCheck::AtLeast, |p| {
            let d = decompose(p, &s.into());
            (d.c[0] + d.c[1] - gamma_relevant(p, &s)).norm()
        });
        assert_passed("C1 + C2", &t);
    }
}

#[test]
fn relevant_part_follows_ground_amplitudes() {
    let s = reference_state();
    let t = check(&reference_params(), 2, OrderCheck::Exact, |p| {
        let d = decompose(p, &s.into());
        uniform_grid(200.0, 401)
            .into_iter()
            .map(|t| {
                let a = d.amplitudes_at(t);
                (gamma_relevant_exact(&d, t) - gamma_relevant_amplitudes(p, a[0], a[1])).norm()
            })
            .fold(0.0, f64::max)
    });
    assert_passed("gamma_rel(t)", &t);
}

#[test]
fn excited_amplitude_averages_to_relevant_part() {
    // Simpson average of the exact gamma over one period of the fast mode.
    let s = reference_state();
    let t = check(&reference_params(), 2, OrderCheck::AtLeast, |p| {
        let d = decompose(p, &s.into());
        let period = 2.0 * std::f64::consts::PI / (d.roots[2] * p.big_delta()).abs();
        let n = 2000;
        [10.0, 50.0, 120.0]
            .iter()
            .map(|&tc| {
                let h = period / n as f64;
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..=n {
                    let w = if k == 0 || k == n {
                        1.0
                    } else if k % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    acc += w * d.amplitudes_at(tc - 0.5 * period + k as f64 * h)[2];
                }
                let avg = acc * h / 3.0 / period;
                (avg - gamma_relevant_exact(&d, tc)).norm()
            })
            .fold(0.0, f64::max)
    });
    assert_passed("<gamma>", &t);
}

#[test]
fn residues_approach_leading_order_tables() {
    for base in [reference_params(), reference_dark_params()] {
        let t = check(&base, 2, OrderCheck::AtLeast, |p| {
            let r = residues(p, 0.0).unwrap();
            let red = reduce(p).unwrap();
            let roots = r.poles.map(|z| z / p.big_delta());
            let lead = leading_order_residues(&red, &roots, p.big_delta(), 0.0);
            (0..3)
                .flat_map(|k| (r.residues[k] - lead[k]).iter().map(|x| x.norm()).collect::<Vec<_>>())
                .fold(0.0, f64::max)
        });
        assert_passed("residues", &t);
    }
}

#[test]
fn pole_approximation_roots_track_exact_poles() {
    for base in [reference_params(), reference_dark_params()] {
        let t = check(&base, 2, OrderCheck::AtLeast, |p| {
            let exact = residues(p, 0.0).unwrap().poles;
            let approx = pole_approx_resolvent(p).roots();
            let mut ground = [exact[0], exact[1]];
            ground.sort_by(f64::total_cmp);
            // relative to the slow scale |Delta| eps
            let scale = p.big_delta().abs() * reduce(p).unwrap().epsilon;
            (ground[0] - approx[0]).abs().max((ground[1] - approx[1]).abs()) / scale
        });
        assert_passed("poles", &t);
    }
}

#[test]
fn rough_populations_converge_at_second_order() {
    let s = reference_state();
    let w = TimeWindow::default();
    let t = check(&reference_params(), 2, OrderCheck::Exact, |p| {
        effective_error(p, Method::Rough, &s, &w).unwrap().max_population_error
    });
    assert_passed("rough populations", &t);
}

#[test]
fn green_near_ground_energies_is_second_order() {
    let s = reference_state();
    let w = TimeWindow::default();
    let t = check(&reference_params(), 2, OrderCheck::AtLeast, |p| {
        let e0 = 0.5 * p.big_delta() * reduce(p).unwrap().epsilon;
        effective_error(p, Method::Green { e0 }, &s, &w).unwrap().max_amplitude_error
    });
    assert_passed("green", &t);
}

#[test]
fn scaling_slopes() {
    let s = reference_state();
    let w = TimeWindow::default();
    let base = reference_params();
    let rough = scaling_study(&base, &FACTORS, Method::Rough, &s, &w).unwrap();
    assert!(rough.slope > 1.8, "rough slope {}", rough.slope);
    let shifted = scaling_study(&base, &FACTORS, Method::Shifted { eta: 3.0 }, &s, &w).unwrap();
    assert!(shifted.slope > 0.8, "shifted slope {}", shifted.slope);
    let e_rough = effective_error(&base, Method::Rough, &s, &w).unwrap().max_amplitude_error;
    let e_shift = effective_error(&base, Method::Shifted { eta: 3.0 }, &s, &w).unwrap().max_amplitude_error;
    assert!(e_shift > 5.0 * e_rough);
}

#[test]
fn dropping_fast_drive_is_second_order() {
    let residual = |eps: f64| {
        let mode = DrivenMode {
            f0: C64::new(0.6, 0.2),
            sign: Sign::Minus,
            delta: 2.0 * 0.7 * eps,
            rabi: C64::from_polar(2.0 * 0.9 * eps, 0.3),
            a_slow: C64::new(0.4, -0.1) * eps,
            omega_slow: -1.3 * eps,
            a_fast: C64::new(-0.2, 0.5) * eps,
            big_delta: 1.0,
            eta: 0.0,
        };
        let slow = mode.without_fast_term();
        uniform_grid(200.0, 2001)
            .into_iter()
            .map(|t| (driven_mode_solution(&mode, t).unwrap() - driven_mode_solution(&slow, t).unwrap()).norm())
            .fold(0.0, f64::max)
    };
    let eps = [0.05, 0.025, 0.0125];
    let t = ratio_test(&eps, &eps.map(residual), 2, OrderCheck::Exact).unwrap();
    assert_passed("driven mode", &t);
}

#[test]
fn exact_state_keeps_excited_population_small() {
    let s = reference_state();
    for p in family(&reference_params()) {
        let red = reduce(&p).unwrap();
        let bound = 4.0 * red.epsilon.powi(2) * (red.lambda_a.norm() + red.lambda_b.norm()).powi(2);
        let traj = propagate_exact(&decompose(&p, &s.into()), &uniform_grid(200.0, 2001));
        let peak = traj.populations(2).into_iter().fold(0.0, f64::max);
        assert!(peak < bound, "{peak} >= {bound}");
    }
}

#[test]
fn ground_state_without_coupling_is_stationary_in_population() {
    let p = LambdaParams::new(0.2, 1.0, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap();
    let s = State2::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
    let traj = propagate_exact(&decompose(&p, &s.into()), &uniform_grid(50.0, 11));
    for pop in traj.populations(0) {
        assert!((pop - 0.36).abs() < 1e-15);
    }
}
