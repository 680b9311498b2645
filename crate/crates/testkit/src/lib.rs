//! Oracles that share no code path with the library routines they check.
//!
//! * [`integrate_three_level`] integrates the amplitude equations directly
//!   with an adaptive Dormand-Prince 5(4) scheme.
//! * [`cubic_roots_trig`] solves the characteristic cubic by the
//!   trigonometric method with Newton polishing.

use std::f64::consts::PI;

use lambda_elim::{LambdaParams, State2};
use num_complex::Complex64 as C64;
use rand::Rng;

const I: C64 = C64::new(0.0, 1.0);

/// Ground state used throughout the reference scenario:
/// `alpha0 = sqrt(1/3)`, `beta0 = sqrt(2/3)`.
pub fn reference_state() -> State2 {
    State2::new(C64::new((1.0f64 / 3.0).sqrt(), 0.0), C64::new((2.0f64 / 3.0).sqrt(), 0.0)).unwrap()
}

/// `delta / Delta = 0.1`, `Omega_a / Delta = 0.1 exp(-i pi/3)`,
/// `Omega_b / Delta = 0.1 exp(-i pi/2)` with `Delta = 1` (so `eps = 0.05`).
pub fn reference_params() -> LambdaParams {
    LambdaParams::new(0.1, 1.0, C64::from_polar(0.1, -PI / 3.0), C64::from_polar(0.1, -PI / 2.0)).unwrap()
}

/// Same couplings with `delta = 0` (dark-state branch).
pub fn reference_dark_params() -> LambdaParams {
    LambdaParams::new(0.0, 1.0, C64::from_polar(0.1, -PI / 3.0), C64::from_polar(0.1, -PI / 2.0)).unwrap()
}

/// Random parameters with `eps <= max_eps`, random phases, random sign and
/// magnitude of `Delta`.
pub fn random_params<R: Rng>(rng: &mut R, max_eps: f64) -> LambdaParams {
    let bd: f64 = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let lim = 2.0 * max_eps * bd.abs();
    let delta = rng.random_range(-lim..lim);
    let oa = C64::from_polar(rng.random_range(0.05 * lim..lim), rng.random_range(-PI..PI));
    let ob = C64::from_polar(rng.random_range(0.05 * lim..lim), rng.random_range(-PI..PI));
    LambdaParams::new(delta, bd, oa, ob).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R) -> State2 {
    let a = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let b = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    State2::new(a / n, b / n).unwrap()
}

/// Right-hand side of
/// `i alpha' = -delta/2 alpha + Oa*/2 gamma`,
/// `i beta'  =  delta/2 beta  + Ob*/2 gamma`,
/// `i gamma' =  Oa/2 alpha + Ob/2 beta + Delta gamma`.
fn amplitude_rhs(p: &LambdaParams, y: &[C64; 3]) -> [C64; 3] {
    let (d, bd, oa, ob) = (p.delta(), p.big_delta(), p.omega_a(), p.omega_b());
    [
        -I * (-0.5 * d * y[0] + 0.5 * oa.conj() * y[2]),
        -I * (0.5 * d * y[1] + 0.5 * ob.conj() * y[2]),
        -I * (0.5 * oa * y[0] + 0.5 * ob * y[1] + bd * y[2]),
    ]
}

fn axpy(y: &[C64; 3], h: f64, terms: &[(f64, &[C64; 3])]) -> [C64; 3] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..3 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Adaptive Dormand-Prince 5(4) integration of the amplitude equations,
/// stepping exactly onto every requested sample time (ascending, starting
/// at or after 0).
pub fn integrate_three_level(p: &LambdaParams, y0: [C64; 3], times: &[f64], rtol: f64, atol: f64) -> Vec<[C64; 3]> {
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] =
        [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];
    let f = |y: &[C64; 3]| amplitude_rhs(p, y);

    let mut out = Vec::with_capacity(times.len());
    let mut t = 0.0;
    let mut y = y0;
    let mut h = 1e-3 / p.big_delta().abs();
    for &target in times {
        while target - t > 1e-15 * target.abs().max(1.0) {
            let step = h.min(target - t);
            let k1 = f(&y);
            let k2 = f(&axpy(&y, step, &[(1.0 / 5.0, &k1)]));
            let k3 = f(&axpy(&y, step, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]));
            let k4 = f(&axpy(&y, step, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]));
            let k5 = f(&axpy(
                &y,
                step,
                &[(19372.0 / 6561.0, &k1), (-25360.0 / 2187.0, &k2), (64448.0 / 6561.0, &k3), (-212.0 / 729.0, &k4)],
            ));
            let k6 = f(&axpy(
                &y,
                step,
                &[
                    (9017.0 / 3168.0, &k1),
                    (-355.0 / 33.0, &k2),
                    (46732.0 / 5247.0, &k3),
                    (49.0 / 176.0, &k4),
                    (-5103.0 / 18656.0, &k5),
                ],
            ));
            let ks = [k1, k2, k3, k4, k5, k6];
            let terms5: Vec<(f64, &[C64; 3])> = B5[..6].iter().copied().zip(ks.iter()).collect();
            let y5 = axpy(&y, step, &terms5);
            let k7 = f(&y5);
            let mut err = 0.0f64;
            for i in 0..3 {
                let mut e = C64::new(0.0, 0.0);
                for (j, k) in ks.iter().enumerate() {
                    e += (B5[j] - B4[j]) * k[i];
                }
                e += (B5[6] - B4[6]) * k7[i];
                let sc = atol + rtol * y[i].norm().max(y5[i].norm());
                err = err.max((step * e).norm() / sc);
            }
            if err <= 1.0 {
                t += step;
                y = y5;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if step == h || err > 1.0 {
                h = step * factor;
            }
        }
        out.push(y);
    }
    out
}

/// Characteristic cubic coefficients `[c2, c1, c0]` of
/// `x^3 + c2 x^2 + c1 x + c0`, straight from the physical parameters.
pub fn cubic_coefficients(p: &LambdaParams) -> [f64; 3] {
    let bd = p.big_delta();
    let le = p.delta() / (2.0 * bd);
    let a2 = p.omega_a().norm_sqr() / (4.0 * bd * bd);
    let b2 = p.omega_b().norm_sqr() / (4.0 * bd * bd);
    [-1.0, -(le * le + a2 + b2), le * le + le * (a2 - b2)]
}

/// Real roots (ascending) of a cubic with three real roots, by the
/// trigonometric method followed by Newton polishing.
pub fn cubic_roots_trig(c: [f64; 3]) -> [f64; 3] {
    let [a, b, d] = c;
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
    let mut roots = if p.abs() < 1e-300 {
        [-q.cbrt() - shift; 3]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        [0.0, 1.0, 2.0].map(|k| m * (theta - 2.0 * PI * k / 3.0).cos() - shift)
    };
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let f = ((*r + a) * *r + b) * *r + d;
            let fp = (3.0 * *r + 2.0 * a) * *r + b;
            if fp.abs() < 1e-300 {
                break;
            }
            let next = *r - f / fp;
            let fn_ = ((next + a) * next + b) * next + d;
            if fn_.abs() < f.abs() {
                *r = next;
            } else {
                break;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Orders ascending roots like the library: root nearest 1 last.
pub fn order_like_library(sorted: [f64; 3]) -> [f64; 3] {
    let far = (0..3).min_by(|&i, &j| (sorted[i] - 1.0).abs().total_cmp(&(sorted[j] - 1.0).abs())).unwrap();
    let mut rest = (0..3).filter(|&i| i != far).map(|i| sorted[i]);
    [rest.next().unwrap(), rest.next().unwrap(), sorted[far]]
}
