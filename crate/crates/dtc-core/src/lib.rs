//! Simulator for discrete time-crystal signatures in a harmonically driven
//! spin-1/2 Ising chain.
//!
//! The model is an open chain of N spin-1/2 sites with Hamiltonian
//!
//! ```text
//! H(t) = -h cos²(ωt/2) Σ_j σ_j^x  -  J Σ_j σ_j^z σ_{j+1}^z  +  λ Σ_j (σ_j^y + σ_j^z)
//! ```
//!
//! driven with period `T = 2π/ω`. Near the resonance `hT/2 = π/2` the drive
//! flips every spin once per period, so observables transverse to the flip
//! axis respond at half the drive frequency; interactions can lock that
//! subharmonic response against detuning (`ε`) and static-field (`λ`)
//! imperfections — a discrete time crystal.
//!
//! Three engines share one model layer:
//!
//! * [`meanfield`] — the semiclassical single-spinor reduction: a classical
//!   Hamiltonian in canonical variables `(Q, P)`, integrated by fixed-step
//!   RK4; Poincaré surfaces of section and stroboscopic series.
//! * [`mps`] — full quantum dynamics in a matrix-product-state
//!   representation with a third-order Trotter splitting and bond-dimension
//!   truncation.
//! * [`ed`] — a dense exact-evolution oracle for small N used to validate
//!   the MPS engine.
//!
//! [`analysis`] turns stroboscopic series into power spectra and
//! subharmonic-peak diagnostics; [`io`] and the `dtc` binary provide a
//! config-file driven CLI with per-experiment manifests.

pub mod analysis;
pub mod ed;
pub mod figures;
pub mod io;
pub mod linalg;
pub mod meanfield;
pub mod model;
pub mod mps;
pub mod runner;

pub use analysis::{PowerSpectrum, StroboscopicSeries};
pub use meanfield::{MeanFieldState, PsosCloud, Trajectory};
pub use model::{MagnetizationAxis, ModelParams, ProductStateSpec};
pub use mps::MpsState;

/// Unified error type for every engine and the IO layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("coordinate pole: |Q| = {q:.17} is too close to 1 while h or λ is active")]
    Pole { q: f64 },

    #[error("state is not normalized: norm = {norm:.17}")]
    Unnormalized { norm: f64 },

    #[error("numerical decomposition failed: {0}")]
    Decomposition(String),

    #[error(
        "truncation budget exceeded in period {period}: discarded weight {weight:.3e} > budget {budget:.3e}"
    )]
    TruncationBudget {
        period: usize,
        weight: f64,
        budget: f64,
    },

    #[error(
        "norm drift {drift:.3e} in period {period} exceeds truncation weight {allowed:.3e} + 1e-10"
    )]
    NormDrift {
        period: usize,
        drift: f64,
        allowed: f64,
    },

    #[error(
        "integrator norm drift {drift:.3e} in period {period} exceeds {allowed:.1e}; reduce the time step"
    )]
    IntegrationDrift {
        period: usize,
        drift: f64,
        allowed: f64,
    },

    #[error("empty series")]
    EmptySeries,

    #[error("series length {0} is odd; the ω/2 bin requires an even number of samples")]
    OddSeriesLength(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error("{stage}: {source}")]
    Io {
        stage: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(stage: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            stage: stage.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Crate version reported in manifests and over the C ABI.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
