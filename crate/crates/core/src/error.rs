use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("system of {requested} qubits exceeds the capacity of {max}")]
    Capacity { requested: usize, max: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("energy denominator vanishes at q = {q}")]
    Singular { q: f64 },

    #[error("mean spin length {length:e} is below the definedness threshold")]
    UndefinedMeanSpin { length: f64 },

    #[error("{n_theta} phase samples cannot resolve harmonics up to {max_harmonic} (need at least {required})")]
    Aliasing {
        n_theta: usize,
        max_harmonic: usize,
        required: usize,
    },

    #[error("extremal-coherence extraction needs an even number of sites, got {0}")]
    UnsupportedParity(usize),

    #[error("Wigner element {value:e} too small to divide by")]
    Conditioning { value: f64 },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
