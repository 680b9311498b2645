//! Effective two-level Hamiltonians from eliminating the excited state, and
//! closed-form two-level propagation.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::exact::ModeDecomposition;
use crate::system::{LambdaParams, State2};
use crate::trajectory::Trajectory2;

/// How an effective Hamiltonian was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// `d gamma / dt = 0` in the natural picture.
    Rough,
    /// The same Ansatz applied in the picture shifted by `eta * Delta`,
    /// then shifted back.
    Shifted { eta: f64 },
    /// `P H0 P + P R(E0) P` from the projected resolvent.
    Green { e0: f64 },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Rough => write!(f, "rough"),
            Provenance::Shifted { eta } => write!(f, "shifted(eta={eta})"),
            Provenance::Green { e0 } => write!(f, "green(E0={e0})"),
        }
    }
}

/// A 2x2 Hermitian Hamiltonian on `{|a>, |b>}`, always expressed in the
/// natural (unshifted) rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian2 {
    matrix: Matrix2<C64>,
    provenance: Provenance,
}

impl EffectiveHamiltonian2 {
    pub fn new(matrix: Matrix2<C64>, provenance: Provenance) -> Self {
        Self { matrix, provenance }
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `Omega_R` such that the lower off-diagonal entry is `-Omega_R / 2`.
    pub fn raman_coupling(&self) -> C64 {
        -2.0 * self.matrix[(1, 0)]
    }

    /// Phase `phi` of `Omega_R = |Omega_R| exp(i phi)`.
    pub fn raman_phase(&self) -> f64 {
        self.raman_coupling().arg()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.matrix - self.matrix.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (h0, h) = pauli_split(&self.matrix);
        let r = h.norm();
        [h0 - r, h0 + r]
    }

    /// Adds `shift` times the identity.
    pub fn shifted_by(&self, shift: f64) -> Self {
        Self { matrix: self.matrix + Matrix2::identity() * C64::new(shift, 0.0), provenance: self.provenance }
    }

    /// Largest entrywise `|H_ij - G_ij|`.
    pub fn max_entry_difference(&self, other: &Self) -> f64 {
        (self.matrix - other.matrix).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Coefficients `g` of `gamma = g_a alpha + g_b beta` obtained by setting
/// the excited-state derivative to zero, with the excited-level energy
/// scaled by `1 + eta`.
fn adiabatic_gamma_coefficients(params: &LambdaParams, eta: f64) -> [C64; 2] {
    let denom = 2.0 * params.big_delta() * (1.0 + eta);
    [-params.omega_a() / denom, -params.omega_b() / denom]
}

/// Substitutes `gamma = g . (alpha, beta)` into the ground-state equations.
fn substituted_hamiltonian(params: &LambdaParams, g: [C64; 2]) -> Matrix2<C64> {
    let d = params.delta();
    let v = [0.5 * params.omega_a().conj(), 0.5 * params.omega_b().conj()];
    let h0 = [-0.5 * d, 0.5 * d];
    Matrix2::from_fn(|i, j| {
        let bare = if i == j { C64::new(h0[i], 0.0) } else { C64::new(0.0, 0.0) };
        bare + v[i] * g[j]
    })
}

/// Effective Hamiltonian of the rough elimination in the natural picture:
///
/// `H_eff = -[[delta/2 + |Omega_a|^2/4Delta, Omega_R*/2],
///            [Omega_R/2, -delta/2 + |Omega_b|^2/4Delta]]`
/// with `Omega_R = Omega_a Omega_b* / 2Delta`.
pub fn rough_effective(params: &LambdaParams) -> EffectiveHamiltonian2 {
    let g = adiabatic_gamma_coefficients(params, 0.0);
    EffectiveHamiltonian2::new(substituted_hamiltonian(params, g), Provenance::Rough)
}

/// Rough elimination performed in the picture shifted by `eta * Delta` and
/// shifted back: light shifts and Raman coupling pick up `1 / (1 + eta)`.
pub fn shifted_rough_effective(params: &LambdaParams, eta: f64) -> Result<EffectiveHamiltonian2> {
    if !eta.is_finite() {
        return Err(Error::InvalidParameter(format!("eta must be finite, got {eta}")));
    }
    if eta == -1.0 {
        return Err(Error::SingularPicture(eta));
    }
    let g = adiabatic_gamma_coefficients(params, eta);
    Ok(EffectiveHamiltonian2::new(substituted_hamiltonian(params, g), Provenance::Shifted { eta }))
}

/// Leading term of the relevant excited-state amplitude,
/// `-(Omega_a / 2Delta) alpha - (Omega_b / 2Delta) beta`.
///
/// Shares its coefficients with [`rough_effective`], which is why the rough
/// and rigorous procedures coincide in the natural picture.
pub fn gamma_relevant(params: &LambdaParams, s: &State2) -> C64 {
    gamma_relevant_amplitudes(params, s.alpha(), s.beta())
}

/// [`gamma_relevant`] for arbitrary (not necessarily normalized) amplitudes.
pub fn gamma_relevant_amplitudes(params: &LambdaParams, alpha: C64, beta: C64) -> C64 {
    let g = adiabatic_gamma_coefficients(params, 0.0);
    g[0] * alpha + g[1] * beta
}

/// `sum_{k=1,2} C_k exp(-i x_k Delta t)`: the exact excited amplitude with
/// its fast component removed.
pub fn gamma_relevant_exact(decomp: &ModeDecomposition, t: f64) -> C64 {
    let ph = decomp.phases(t);
    decomp.c[0] * ph[0] + decomp.c[1] * ph[1]
}

/// [`gamma_relevant_exact`] in the picture shifted by `eta * Delta`.
pub fn gamma_relevant_exact_shifted(decomp: &ModeDecomposition, t: f64, eta: f64) -> C64 {
    let bd = decomp.big_delta;
    (0..2).map(|k| decomp.c[k] * C64::from_polar(1.0, -bd * (decomp.roots[k] + eta) * t)).sum()
}

/// `(h0, (hx, hy, hz))` with `H = h0 I + hx sx + hy sy + hz sz`.
/// Assumes `H` is Hermitian.
fn pauli_split(m: &Matrix2<C64>) -> (f64, nalgebra::Vector3<f64>) {
    let h0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let hz = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let off = m[(1, 0)];
    (h0, nalgebra::Vector3::new(off.re, off.im, hz))
}

/// `exp(-i H t)` in closed form from the identity/traceless split.
pub fn effective_propagator(h: &EffectiveHamiltonian2, t: f64) -> Matrix2<C64> {
    let (h0, v) = pauli_split(&h.matrix);
    let r = v.norm();
    let theta = r * t;
    // sin(r t) / r, finite as r -> 0
    let sinc_t = if theta.abs() < 1e-8 { t * (1.0 - theta * theta / 6.0) } else { theta.sin() / r };
    let c = C64::new(theta.cos(), 0.0);
    let i = C64::new(0.0, 1.0);
    let (x, y, z) = (v[0], v[1], v[2]);
    #[rustfmt::skip]
    let sigma_dot = Matrix2::new(
        C64::new(z, 0.0), C64::new(x, -y),
        C64::new(x, y), C64::new(-z, 0.0),
    );
    let u = Matrix2::identity() * c - sigma_dot * (i * sinc_t);
    u * C64::from_polar(1.0, -h0 * t)
}

pub fn propagate_effective(h: &EffectiveHamiltonian2, initial: &State2, times: &[f64]) -> Trajectory2 {
    let psi = Vector2::from(initial.amplitudes());
    let amps = times
        .iter()
        .map(|&t| {
            let out = effective_propagator(h, t) * psi;
            [out[0], out[1]]
        })
        .collect();
    Trajectory2::new(times.to_vec(), amps)
}
