use thiserror::Error;

/// Errors produced by the simulation and elimination routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The common detuning vanishes, or another regime precondition is broken.
    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    /// All couplings vanish, so no smallness parameter can be defined.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The shifted picture with `eta == -1` moves the excited level onto the
    /// energy origin.
    #[error("singular picture: eta = {0} makes the excited-state detuning vanish")]
    SingularPicture(f64),

    /// The displacement operator was evaluated on its pole `z = Delta`.
    #[error("displacement operator evaluated at its pole z = {0}")]
    PoleOfDisplacement(f64),

    /// Two resolvent poles coincide, so residues are not simple.
    #[error("resolvent poles {0} and {1} coincide; use the dark-state (lambda = 0) branch")]
    DegeneratePoles(f64, f64),

    /// A driven-mode denominator vanished.
    #[error("resonant denominator in driven-mode solution: {0}")]
    Resonance(String),

    /// A state vector is not normalized or not finite.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A parameter was not finite or otherwise outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two trajectories were sampled on different time grids.
    #[error("time grids differ: {0}")]
    GridMismatch(String),

    /// Scaling or ratio data cannot support a fit.
    #[error("degenerate data: {0}")]
    DegenerateData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
