use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("site index {site} out of range for a lattice with {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lattice with {sites} sites exceeds the exact-engine limit of {max} sites")]
    LatticeTooLarge { sites: usize, max: usize },

    /// An energy denominator of the second-order expansion is (nearly) zero:
    /// the sector is not separated from a virtual state and the effective
    /// Hamiltonian does not exist.
    #[error(
        "Schrieffer-Wolff expansion invalid: |E_m - E_beta| = {gap:e} below guard {guard:e} \
         for sector state {state:#x} and virtual state {virtual_state:#x}"
    )]
    SwDegenerate {
        state: u128,
        virtual_state: u128,
        gap: f64,
        guard: f64,
    },

    #[error("sector basis would hold {states} states, above the cap of {cap}")]
    BasisTooLarge { states: usize, cap: usize },

    #[error(
        "Krylov step did not reach tolerance {tol:e} (estimate {estimate:e}) with dimension \
         {krylov_dim}; split the step into at least {required_substeps} substeps"
    )]
    KrylovTolerance {
        tol: f64,
        estimate: f64,
        krylov_dim: usize,
        required_substeps: usize,
    },

    #[error("norm drifted to {norm} (|norm - 1| above {tol:e})")]
    NormDrift { norm: f64, tol: f64 },

    #[error("state is not normalized: sum |psi|^2 = {0}")]
    Unnormalized(f64),

    #[error("eigensolver did not converge: achieved residual {residual:e}")]
    NonConvergence { residual: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("time grid is not uniform at sample {index}")]
    NonUniformGrid { index: usize },

    #[error("analysis window [{t_min}, {t_max}] contains fewer than two samples")]
    EmptyWindow { t_min: f64, t_max: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SwDegenerate { .. }
                | Error::KrylovTolerance { .. }
                | Error::NormDrift { .. }
                | Error::NonConvergence { .. }
        )
    }
}
