//! Exact solution of the three-level problem.
//!
//! The spectrum comes from the Hermitian eigen-decomposition of the
//! rotating-frame Hamiltonian. The characteristic cubic is kept as an
//! independent cross-check and solved through its companion matrix.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::system::{reduce, LambdaParams, ReducedParams, State3};
use crate::trajectory::Trajectory3;

const ZERO: C64 = C64::new(0.0, 0.0);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The rotating-frame Hamiltonian on `{|a>, |b>, |e>}` (with `hbar = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian3(Matrix3<C64>);

impl Hamiltonian3 {
    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    /// Largest `|H_ij - conj(H_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[rustfmt::skip]
pub fn build_hamiltonian(params: &LambdaParams) -> Hamiltonian3 {
    let (d, bd) = (params.delta(), params.big_delta());
    let (oa, ob) = (params.omega_a(), params.omega_b());
    Hamiltonian3(Matrix3::new(
        re(-0.5 * d), ZERO, 0.5 * oa.conj(),
        ZERO, re(0.5 * d), 0.5 * ob.conj(),
        0.5 * oa, 0.5 * ob, re(bd),
    ))
}

/// `H / Delta` expressed through the reduced parameters.
#[rustfmt::skip]
fn reduced_matrix(red: &ReducedParams) -> Matrix3<C64> {
    let le = red.signed_lambda() * red.epsilon;
    let (la, lb) = (red.lambda_a * red.epsilon, red.lambda_b * red.epsilon);
    Matrix3::new(
        re(-le), ZERO, la.conj(),
        ZERO, re(le), lb.conj(),
        la, lb, re(1.0),
    )
}

/// Index permutation placing the root nearest 1 last and the other two in
/// ascending order.
fn root_order(x: &[f64; 3]) -> [usize; 3] {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let far = idx
        .iter()
        .copied()
        .min_by(|&i, &j| (x[i] - 1.0).abs().total_cmp(&(x[j] - 1.0).abs()).then(x[i].total_cmp(&x[j])))
        .unwrap();
    let mut rest = idx.into_iter().filter(|&i| i != far);
    [rest.next().unwrap(), rest.next().unwrap(), far]
}

/// Ordered eigenpairs of `H / Delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    /// Dimensionless eigenvalues `x_k`, eigenvalue of `H` is `Delta * x_k`.
    pub roots: [f64; 3],
    /// Orthonormal eigenvectors as columns, in the order of `roots`.
    pub vectors: Matrix3<C64>,
    pub big_delta: f64,
}

fn ordered_eigensystem(m: Matrix3<C64>, big_delta: f64) -> Eigensystem {
    let eig = m.symmetric_eigen();
    let x = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    let order = root_order(&x);
    let mut vectors = Matrix3::zeros();
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    Eigensystem { roots: order.map(|k| x[k]), vectors, big_delta }
}

pub fn eigensystem(params: &LambdaParams) -> Eigensystem {
    let h = build_hamiltonian(params);
    ordered_eigensystem(h.0.unscale(params.big_delta()), params.big_delta())
}

/// The three real roots of the characteristic cubic, ordered so that `x_3`
/// is nearest 1 and `x_1 <= x_2`.
pub fn characteristic_roots(red: &ReducedParams) -> [f64; 3] {
    ordered_eigensystem(reduced_matrix(red), 1.0).roots
}

/// Coefficients `[c3, c2, c1, c0]` of the monic characteristic cubic
/// `x^3 - x^2 - (lambda^2 + |lambda_a|^2 + |lambda_b|^2) eps^2 x
///  + lambda^2 eps^2 + lambda eps^3 (|lambda_a|^2 - |lambda_b|^2)`.
pub fn characteristic_polynomial(red: &ReducedParams) -> [f64; 4] {
    let e = red.epsilon;
    let l = red.signed_lambda();
    let (na, nb) = (red.lambda_a.norm_sqr(), red.lambda_b.norm_sqr());
    [1.0, -1.0, -(l * l + na + nb) * e * e, l * l * e * e + l * e * e * e * (na - nb)]
}

/// Roots of a monic cubic `[1, c2, c1, c0]` as eigenvalues of its companion
/// matrix, in no particular order.
pub fn companion_roots(coeffs: &[f64; 4]) -> [C64; 3] {
    let [c3, c2, c1, c0] = *coeffs;
    #[rustfmt::skip]
    let companion = Matrix3::new(
        -c2 / c3, -c1 / c3, -c0 / c3,
        1.0, 0.0, 0.0,
        0.0, 1.0, 0.0,
    );
    let ev = companion.complex_eigenvalues();
    [ev[0], ev[1], ev[2]]
}

/// Mode decomposition `alpha(t) = sum_k A_k exp(-i Delta x_k t)` (and the
/// same for `beta` with `B_k`, `gamma` with `C_k`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    pub roots: [f64; 3],
    pub a: [C64; 3],
    pub b: [C64; 3],
    pub c: [C64; 3],
    pub big_delta: f64,
}

impl ModeDecomposition {
    pub fn phases(&self, t: f64) -> [C64; 3] {
        self.roots.map(|x| C64::from_polar(1.0, -self.big_delta * x * t))
    }

    pub fn amplitudes_at(&self, t: f64) -> [C64; 3] {
        let ph = self.phases(t);
        let sum = |coef: &[C64; 3]| coef.iter().zip(ph.iter()).map(|(c, p)| c * p).sum::<C64>();
        [sum(&self.a), sum(&self.b), sum(&self.c)]
    }

    /// `(sum A_k, sum B_k, sum C_k)`, equal to the initial state.
    pub fn initial_amplitudes(&self) -> [C64; 3] {
        [self.a.iter().sum(), self.b.iter().sum(), self.c.iter().sum()]
    }
}

/// Projects the initial state on the eigenvectors of the Hamiltonian.
///
/// Near-degenerate eigenvalues are harmless here: the eigenbasis of the
/// Hermitian matrix is always orthonormal.
pub fn decompose(params: &LambdaParams, initial: &State3) -> ModeDecomposition {
    let es = eigensystem(params);
    let psi0 = Vector3::from(initial.amplitudes());
    let weights = es.vectors.adjoint() * psi0;
    let coef = |row: usize| -> [C64; 3] { [0, 1, 2].map(|k| weights[k] * es.vectors[(row, k)]) };
    ModeDecomposition { roots: es.roots, a: coef(0), b: coef(1), c: coef(2), big_delta: es.big_delta }
}

pub fn propagate_exact(decomp: &ModeDecomposition, times: &[f64]) -> Trajectory3 {
    let amps = times.iter().map(|&t| decomp.amplitudes_at(t)).collect();
    Trajectory3::new(times.to_vec(), amps)
}

/// Full unitary `exp(-i H t)`.
pub fn propagator(params: &LambdaParams, t: f64) -> Matrix3<C64> {
    let es = eigensystem(params);
    let phases = Matrix3::from_diagonal(&Vector3::from(es.roots.map(|x| C64::from_polar(1.0, -es.big_delta * x * t))));
    es.vectors * phases * es.vectors.adjoint()
}

/// Convenience wrapper: reduce, then solve the cubic.
pub fn roots_for(params: &LambdaParams) -> Result<[f64; 3]> {
    Ok(characteristic_roots(&reduce(params)?))
}
