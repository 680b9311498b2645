//! Physical and reduced parameters of the lambda system, plus state vectors.
//!
//! Units are `hbar = 1`: every energy is an angular frequency, and `Delta * t`
//! is the natural dimensionless time.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Above this value of `epsilon` the perturbative expansions are not
/// trustworthy; [`reduce`] logs a warning but still succeeds.
pub const REGIME_WARNING_EPSILON: f64 = 0.2;

/// Relative tolerance for the consistency of `(delta_a, delta_b)` with
/// `(delta, Delta)`.
pub const DETUNING_CONSISTENCY_TOL: f64 = 1e-12;

/// Tolerance on `| |psi|^2 - 1 |` accepted when constructing a state.
pub const NORM_TOL: f64 = 1e-9;

/// Below `DARK_BRANCH_THRESHOLD * max(|lambda_a|, |lambda_b|)` the reduced
/// detuning is treated as zero when picking leading-order expansions.
pub const DARK_BRANCH_THRESHOLD: f64 = 1e-8;

/// Rotating-frame parameters of the lambda system.
///
/// `delta` is the two-photon detuning, `big_delta` the mean one-photon
/// detuning of the excited level and `omega_a`, `omega_b` the complex Rabi
/// frequencies of the `a-e` and `b-e` transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaParams {
    delta: f64,
    big_delta: f64,
    omega_a: C64,
    omega_b: C64,
    laser_detunings: Option<(f64, f64)>,
}

impl LambdaParams {
    pub fn new(delta: f64, big_delta: f64, omega_a: C64, omega_b: C64) -> Result<Self> {
        for (name, v) in [
            ("delta", delta),
            ("big_delta", big_delta),
            ("omega_a.re", omega_a.re),
            ("omega_a.im", omega_a.im),
            ("omega_b.re", omega_b.re),
            ("omega_b.im", omega_b.im),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite ({v})")));
            }
        }
        if big_delta == 0.0 {
            return Err(Error::InvalidRegime("the common detuning Delta must be nonzero".into()));
        }
        Ok(Self { delta, big_delta, omega_a, omega_b, laser_detunings: None })
    }

    /// Builds the parameters from the individual laser detunings, with
    /// `delta = delta_a - delta_b` and `Delta = (delta_a + delta_b) / 2`.
    pub fn from_laser_detunings(delta_a: f64, delta_b: f64, omega_a: C64, omega_b: C64) -> Result<Self> {
        let p = Self::new(delta_a - delta_b, 0.5 * (delta_a + delta_b), omega_a, omega_b)?;
        p.with_laser_detunings(delta_a, delta_b)
    }

    /// Attaches the individual laser detunings as bookkeeping, checking that
    /// they reproduce `delta` and `Delta`.
    pub fn with_laser_detunings(mut self, delta_a: f64, delta_b: f64) -> Result<Self> {
        let tol = DETUNING_CONSISTENCY_TOL * self.big_delta.abs();
        let d_err = (self.delta - (delta_a - delta_b)).abs();
        let bd_err = (self.big_delta - 0.5 * (delta_a + delta_b)).abs();
        if !(d_err <= tol && bd_err <= tol) {
            return Err(Error::InvalidParameter(format!(
                "laser detunings ({delta_a}, {delta_b}) are inconsistent with delta = {}, Delta = {}",
                self.delta, self.big_delta
            )));
        }
        self.laser_detunings = Some((delta_a, delta_b));
        Ok(self)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn big_delta(&self) -> f64 {
        self.big_delta
    }

    pub fn omega_a(&self) -> C64 {
        self.omega_a
    }

    pub fn omega_b(&self) -> C64 {
        self.omega_b
    }

    /// `(delta_a, delta_b)` if they were supplied.
    pub fn laser_detunings(&self) -> Option<(f64, f64)> {
        self.laser_detunings
    }

    /// Multiplies `delta`, `omega_a` and `omega_b` by `factor`, keeping
    /// `Delta` fixed, so that `epsilon` scales by `factor`.
    pub fn with_scaled_couplings(&self, factor: f64) -> Result<Self> {
        Self::new(self.delta * factor, self.big_delta, self.omega_a * factor, self.omega_b * factor)
    }

    /// Multiplies every frequency, `Delta` included, by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.delta * factor, self.big_delta * factor, self.omega_a * factor, self.omega_b * factor)
    }
}

/// Dimensionless bookkeeping for the perturbative expansion.
///
/// `lambda * epsilon = |delta / (2 Delta)|` and
/// `lambda_k * epsilon = Omega_k / (2 Delta)`. The sign of `delta / (2 Delta)`
/// is kept separately in `lambda_sign` so that `lambda` itself is never
/// negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    pub epsilon: f64,
    pub lambda: f64,
    pub lambda_a: C64,
    pub lambda_b: C64,
    /// `+1` or `-1`, the sign of `delta / Delta`.
    pub lambda_sign: f64,
}

impl ReducedParams {
    /// `lambda` carrying the sign of `delta / Delta`.
    pub fn signed_lambda(&self) -> f64 {
        self.lambda_sign * self.lambda
    }

    /// `|lambda_a|^2 + |lambda_b|^2`.
    pub fn coupling_norm_sqr(&self) -> f64 {
        self.lambda_a.norm_sqr() + self.lambda_b.norm_sqr()
    }

    /// True when the reduced detuning is negligible against the couplings,
    /// i.e. the dark-state (`lambda = 0`) expansions apply.
    pub fn is_dark_branch(&self) -> bool {
        let scale = self.lambda_a.norm().max(self.lambda_b.norm());
        self.lambda <= DARK_BRANCH_THRESHOLD * scale
    }

    /// Recovers `(delta, Omega_a, Omega_b)` for a given `Delta`.
    pub fn expand(&self, big_delta: f64) -> (f64, C64, C64) {
        let scale = 2.0 * big_delta * self.epsilon;
        (self.signed_lambda() * scale, self.lambda_a * scale, self.lambda_b * scale)
    }
}

/// Computes the reduced parameters with the normalization
/// `max(lambda, |lambda_a|, |lambda_b|) = 1`.
pub fn reduce(params: &LambdaParams) -> Result<ReducedParams> {
    let two_bd = 2.0 * params.big_delta;
    let largest = params.delta.abs().max(params.omega_a.norm()).max(params.omega_b.norm());
    if largest == 0.0 {
        return Err(Error::DegenerateInput("delta, Omega_a and Omega_b all vanish; epsilon is undefined".into()));
    }
    let epsilon = largest / two_bd.abs();
    if epsilon > REGIME_WARNING_EPSILON {
        log::warn!(
            "epsilon = {epsilon:.3} exceeds {REGIME_WARNING_EPSILON}; |Delta| >> |delta|, |Omega| is not satisfied"
        );
    }
    let scale = two_bd * epsilon;
    let signed = params.delta / scale;
    Ok(ReducedParams {
        epsilon,
        lambda: signed.abs(),
        lambda_a: params.omega_a / scale,
        lambda_b: params.omega_b / scale,
        lambda_sign: if signed < 0.0 { -1.0 } else { 1.0 },
    })
}

fn check_norm(norm_sqr: f64) -> Result<()> {
    if !norm_sqr.is_finite() {
        return Err(Error::InvalidState("amplitudes are not finite".into()));
    }
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidState(format!("squared norm is {norm_sqr}, expected 1 within {NORM_TOL}")));
    }
    Ok(())
}

/// Normalized three-level state `(alpha, beta, gamma)` on `{|a>, |b>, |e>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State3([C64; 3]);

impl State3 {
    pub fn new(alpha: C64, beta: C64, gamma: C64) -> Result<Self> {
        check_norm(alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr())?;
        Ok(Self([alpha, beta, gamma]))
    }

    pub fn amplitudes(&self) -> [C64; 3] {
        self.0
    }

    pub fn alpha(&self) -> C64 {
        self.0[0]
    }

    pub fn beta(&self) -> C64 {
        self.0[1]
    }

    pub fn gamma(&self) -> C64 {
        self.0[2]
    }
}

impl From<State2> for State3 {
    fn from(s: State2) -> Self {
        Self([s.0[0], s.0[1], C64::new(0.0, 0.0)])
    }
}

/// Normalized ground-manifold state `(alpha, beta)` on `{|a>, |b>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State2([C64; 2]);

impl State2 {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        check_norm(alpha.norm_sqr() + beta.norm_sqr())?;
        Ok(Self([alpha, beta]))
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.0
    }

    pub fn alpha(&self) -> C64 {
        self.0[0]
    }

    pub fn beta(&self) -> C64 {
        self.0[1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn reference() -> LambdaParams {
        LambdaParams::new(0.1, 1.0, C64::from_polar(0.1, -PI / 3.0), C64::from_polar(0.1, -PI / 2.0)).unwrap()
    }

    #[test]
    fn reference_reduction() {
        let r = reduce(&reference()).unwrap();
        assert!((r.epsilon - 0.05).abs() < 1e-15);
        assert!((r.lambda - 1.0).abs() < 1e-14);
        assert!((r.lambda_a.norm() - 1.0).abs() < 1e-14);
        assert!((r.lambda_b.norm() - 1.0).abs() < 1e-14);
        assert_eq!(r.lambda_sign, 1.0);
    }

    #[test]
    fn hand_evaluated_normalization() {
        let p = LambdaParams::new(0.02, 1.0, C64::new(0.1, 0.0), C64::new(0.05, 0.0)).unwrap();
        let r = reduce(&p).unwrap();
        assert!((r.epsilon - 0.05).abs() < 1e-15);
        assert!((r.lambda - 0.2).abs() < 1e-14);
        assert!((r.lambda_a - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((r.lambda_b - C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_coupling_is_degenerate() {
        let p = LambdaParams::new(0.0, 1.0, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert!(matches!(reduce(&p), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn zero_big_delta_is_rejected() {
        let e = LambdaParams::new(0.1, 0.0, C64::new(0.1, 0.0), C64::new(0.1, 0.0));
        assert!(matches!(e, Err(Error::InvalidRegime(_))));
    }

    #[test]
    fn negative_delta_keeps_lambda_nonnegative() {
        let p = LambdaParams::new(-0.1, 1.0, C64::new(0.05, 0.0), C64::new(0.05, 0.0)).unwrap();
        let r = reduce(&p).unwrap();
        assert!(r.lambda > 0.0);
        assert_eq!(r.lambda_sign, -1.0);
        let (d, _, _) = r.expand(1.0);
        assert!((d + 0.1).abs() < 1e-15);
    }

    #[test]
    fn laser_detunings_must_be_consistent() {
        let p = LambdaParams::from_laser_detunings(1.05, 0.95, C64::new(0.1, 0.0), C64::new(0.1, 0.0)).unwrap();
        assert!((p.delta() - 0.1).abs() < 1e-15);
        assert!((p.big_delta() - 1.0).abs() < 1e-15);
        assert!(p.with_laser_detunings(1.0, 1.0).is_err());
    }

    #[test]
    fn dark_branch_detection() {
        let p = LambdaParams::new(0.0, 1.0, C64::new(0.1, 0.0), C64::new(0.1, 0.0)).unwrap();
        assert!(reduce(&p).unwrap().is_dark_branch());
        assert!(!reduce(&reference()).unwrap().is_dark_branch());
    }

    #[test]
    fn states_must_be_normalized() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        assert!(State2::new(one, one).is_err());
        assert!(State3::new(zero, zero, one).is_ok());
        let s: State3 = State2::new(zero, one).unwrap().into();
        assert_eq!(s.gamma(), zero);
    }
}
