//! Projected resolvent of the lambda system.
//!
//! With `P = |a><a| + |b><b|` and `Q = |e><e|`, the ground-manifold block of
//! the Green's function is `P G(z) P = P / M(z)` where
//!
//! ```text
//! M(z) = z + lambda eps Delta sigma_z - (Delta eps)^2 / (z - Delta) K
//! K    = [[|lambda_a|^2, lambda_a* lambda_b], [lambda_a lambda_b*, |lambda_b|^2]]
//! ```
//!
//! Residues of `exp(-i z t) / M(z)` are evaluated in closed form. Writing
//! `N(z) = (z - Delta) M(z)`, a polynomial matrix, one has
//! `M(z)^-1 = adj N(z) / c(z)` with `c` the monic characteristic cubic, so
//! the residue at a simple pole `z_k` is `adj N(z_k) / c'(z_k)` times the
//! phase. No contour is ever discretized.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

use crate::elim::{EffectiveHamiltonian2, Provenance};
use crate::error::{Error, Result};
use crate::exact::characteristic_roots;
use crate::system::{reduce, LambdaParams, ReducedParams};

/// Poles closer than this (relative to `|Delta|`) are treated as coincident.
pub const POLE_SEPARATION_TOL: f64 = 1e-10;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0))
}

/// `Omega Omega^dagger / 4` restricted to the ground manifold:
/// `[[|Oa|^2, Oa* Ob], [Oa Ob*, |Ob|^2]] / 4`.
#[rustfmt::skip]
fn coupling_block(params: &LambdaParams) -> Matrix2<C64> {
    let (oa, ob) = (params.omega_a(), params.omega_b());
    Matrix2::new(
        c(oa.norm_sqr()), oa.conj() * ob,
        oa * ob.conj(), c(ob.norm_sqr()),
    ) * c(0.25)
}

/// `P H0 P = diag(-delta/2, delta/2)`.
fn projected_bare(params: &LambdaParams) -> Matrix2<C64> {
    sigma_z() * c(-0.5 * params.delta())
}

/// `P R(z) P` for the lambda system. Here `P V P = 0` and `Q V Q = 0`, so
/// only the second-order term survives:
/// `(1/4) / (z - Delta) [[|Oa|^2, Oa* Ob], [Oa Ob*, |Ob|^2]]`.
pub fn displacement_operator(params: &LambdaParams, z: C64) -> Result<Matrix2<C64>> {
    let bd = params.big_delta();
    let gap = z - bd;
    if gap.norm() <= f64::EPSILON * bd.abs() {
        return Err(Error::PoleOfDisplacement(bd));
    }
    Ok(coupling_block(params) / gap)
}

/// `M(z)` and its pieces, in the reduced-parameter form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedResolvent {
    params: LambdaParams,
    reduced: ReducedParams,
    reference_energy: f64,
}

impl ProjectedResolvent {
    pub fn new(params: &LambdaParams) -> Result<Self> {
        Ok(Self { params: *params, reduced: reduce(params)?, reference_energy: 0.0 })
    }

    /// Describes the same system with every energy shifted by `e0`; the
    /// resolvent then reads `M(z - e0)`.
    pub fn with_reference_energy(mut self, e0: f64) -> Self {
        self.reference_energy = e0;
        self
    }

    pub fn params(&self) -> &LambdaParams {
        &self.params
    }

    pub fn reference_energy(&self) -> f64 {
        self.reference_energy
    }

    /// `K = [[|la|^2, la* lb], [la lb*, |lb|^2]]`, Hermitian and of rank at
    /// most one.
    pub fn coupling_matrix(&self) -> Matrix2<C64> {
        let (la, lb) = (self.reduced.lambda_a, self.reduced.lambda_b);
        Matrix2::new(c(la.norm_sqr()), la.conj() * lb, la * lb.conj(), c(lb.norm_sqr()))
    }

    pub fn eval(&self, z: C64) -> Result<Matrix2<C64>> {
        let z = z - self.reference_energy;
        let bd = self.params.big_delta();
        let gap = z - bd;
        if gap.norm() <= f64::EPSILON * bd.abs() {
            return Err(Error::PoleOfDisplacement(bd + self.reference_energy));
        }
        let r = &self.reduced;
        let scale = bd * r.epsilon;
        Ok(Matrix2::identity() * z + sigma_z() * c(r.signed_lambda() * r.epsilon * bd)
            - self.coupling_matrix() * (scale * scale / gap))
    }

    pub fn determinant(&self, z: C64) -> Result<C64> {
        Ok(self.eval(z)?.determinant())
    }
}

fn reduced_or_decoupled(params: &LambdaParams) -> Result<ReducedParams> {
    match reduce(params) {
        Ok(r) => Ok(r),
        Err(Error::DegenerateInput(_)) => {
            Ok(ReducedParams { epsilon: 0.0, lambda: 0.0, lambda_a: c(0.0), lambda_b: c(0.0), lambda_sign: 1.0 })
        }
        Err(e) => Err(e),
    }
}

/// Poles `z_k = Delta x_k` of `P G(z) P`, ordered like the characteristic
/// roots.
pub fn resolvent_poles(params: &LambdaParams) -> Result<[f64; 3]> {
    let bd = params.big_delta();
    Ok(characteristic_roots(&reduced_or_decoupled(params)?).map(|x| bd * x))
}

/// Coefficients `[1, c2, c1, c0]` of `(z - Delta) det M(z)` in the variable
/// `x = z / Delta`, built from the physical parameters.
pub fn determinant_polynomial(params: &LambdaParams) -> [f64; 4] {
    let bd = params.big_delta();
    let half = 0.5 * params.delta() / bd;
    let na = params.omega_a().norm_sqr() / (4.0 * bd * bd);
    let nb = params.omega_b().norm_sqr() / (4.0 * bd * bd);
    [1.0, -1.0, -(half * half + na + nb), half * half + half * (na - nb)]
}

/// `N(z) = (z - Delta) M(z)`, a quadratic matrix polynomial in `z`.
fn numerator(params: &LambdaParams, z: f64) -> Matrix2<C64> {
    let bare = Matrix2::identity() * c(z) - projected_bare(params);
    bare * c(z - params.big_delta()) - coupling_block(params)
}

fn adjugate(m: &Matrix2<C64>) -> Matrix2<C64> {
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// Poles and residue matrices of `exp(-i z t) P / M(z)` at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueSet {
    pub t: f64,
    pub poles: [f64; 3],
    pub residues: [Matrix2<C64>; 3],
}

impl ResidueSet {
    pub fn sum(&self) -> Matrix2<C64> {
        self.residues.iter().sum()
    }

    /// Sum over the two ground-like poles only: the pole approximation of
    /// the projected propagator.
    pub fn retained_sum(&self) -> Matrix2<C64> {
        self.residues[0] + self.residues[1]
    }
}

pub fn residues(params: &LambdaParams, t: f64) -> Result<ResidueSet> {
    let poles = resolvent_poles(params)?;
    let tol = POLE_SEPARATION_TOL * params.big_delta().abs();
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (poles[i] - poles[j]).abs() < tol {
                return Err(Error::DegeneratePoles(poles[i], poles[j]));
            }
        }
    }
    let residues = [0usize, 1, 2].map(|k| {
        let zk = poles[k];
        let deriv: f64 = (0..3).filter(|&j| j != k).map(|j| zk - poles[j]).product();
        adjugate(&numerator(params, zk)) * (C64::from_polar(1.0, -zk * t) / deriv)
    });
    Ok(ResidueSet { t, poles, residues })
}

/// `P U(t) P`, the ground-manifold block of the evolution operator, as the
/// sum of all three residues.
pub fn projected_propagator(params: &LambdaParams, t: f64) -> Result<Matrix2<C64>> {
    Ok(residues(params, t)?.sum())
}

/// Leading-order residues in `epsilon` at time `t`, given the exact roots.
///
/// For `lambda != 0` the ground-like residues are the bare projectors with
/// first-order mixing `lambda_a* lambda_b eps / (2 lambda)`; for the dark
/// branch they project on the bright and dark superpositions. The excited
/// residue is `O(eps^2)` and returned as zero.
pub fn leading_order_residues(red: &ReducedParams, roots: &[f64; 3], big_delta: f64, t: f64) -> [Matrix2<C64>; 3] {
    let (la, lb) = (red.lambda_a, red.lambda_b);
    let phase = |k: usize| C64::from_polar(1.0, -big_delta * roots[k] * t);
    let zero = Matrix2::zeros();
    if red.is_dark_branch() {
        let s = red.coupling_norm_sqr();
        let bright = Matrix2::new(c(la.norm_sqr()), la.conj() * lb, la * lb.conj(), c(lb.norm_sqr())) / c(s);
        let dark = Matrix2::new(c(lb.norm_sqr()), -la.conj() * lb, -la * lb.conj(), c(la.norm_sqr())) / c(s);
        [bright * phase(0), dark * phase(1), zero]
    } else {
        let mix = la.conj() * lb * (red.epsilon / (2.0 * red.signed_lambda()));
        let a_like = Matrix2::new(c(1.0), mix, mix.conj(), c(0.0));
        let b_like = Matrix2::new(c(0.0), -mix, -mix.conj(), c(1.0));
        // level a sits at -lambda eps, the lower root when lambda > 0
        if red.lambda_sign > 0.0 {
            [a_like * phase(0), b_like * phase(1), zero]
        } else {
            [b_like * phase(0), a_like * phase(1), zero]
        }
    }
}

/// `P H0 P + P R(e0) P` in the natural frame.
pub fn green_effective(params: &LambdaParams, e0: f64) -> Result<EffectiveHamiltonian2> {
    green_effective_with_origin(params, 0.0, e0)
}

/// Effective Hamiltonian when every unperturbed energy is shifted by
/// `origin`, with the displacement operator evaluated at `e0`.
///
/// `green_effective_with_origin(p, e, e)` equals `green_effective(p, 0)`
/// plus `e` times the identity.
pub fn green_effective_with_origin(params: &LambdaParams, origin: f64, e0: f64) -> Result<EffectiveHamiltonian2> {
    if !(origin.is_finite() && e0.is_finite()) {
        return Err(Error::InvalidParameter("energies must be finite".into()));
    }
    let bd = params.big_delta();
    let detuning = e0 - origin;
    if let Ok(red) = reduce(params) {
        if detuning.abs() > bd.abs() * red.epsilon {
            log::warn!(
                "|E0| = {:.3e} exceeds |Delta| eps = {:.3e}; the effective Hamiltonian is outside its accuracy window",
                detuning.abs(),
                bd.abs() * red.epsilon
            );
        }
    }
    let r = displacement_operator(params, c(detuning))?;
    let m = projected_bare(params) + Matrix2::identity() * c(origin) + r;
    Ok(EffectiveHamiltonian2::new(m, Provenance::Green { e0 }))
}

/// `M0(z) = z - P H0 P - P R(0) P`: the resolvent with its irrelevant pole
/// discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleApproximation {
    params: LambdaParams,
}

pub fn pole_approx_resolvent(params: &LambdaParams) -> PoleApproximation {
    PoleApproximation { params: *params }
}

impl PoleApproximation {
    /// `z + lambda eps Delta sigma_z + (Delta eps)^2 / Delta K`.
    pub fn eval(&self, z: C64) -> Matrix2<C64> {
        let bd = self.params.big_delta();
        Matrix2::identity() * z - projected_bare(&self.params) + coupling_block(&self.params) / c(bd)
    }

    pub fn determinant(&self, z: C64) -> C64 {
        self.eval(z).determinant()
    }

    /// The two real roots of `det M0(z) = 0`, ascending.
    pub fn roots(&self) -> [f64; 2] {
        // det M0(z) = z^2 + p z + q
        let m = self.eval(c(0.0));
        let p = (m[(0, 0)] + m[(1, 1)]).re;
        let q = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
        let disc = (p * p - 4.0 * q).max(0.0).sqrt();
        // stable quadratic formula
        let big = -0.5 * (p + p.signum() * disc);
        if big == 0.0 {
            return [0.0, 0.0];
        }
        let (r1, r2) = (big, q / big);
        if r1 <= r2 {
            [r1, r2]
        } else {
            [r2, r1]
        }
    }
}
