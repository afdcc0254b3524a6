use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("path speed {v} m/s is not below the wave speed {c} m/s")]
    Superluminal { v: f64, c: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// The equivalent tap range reaches into the previous multicarrier symbol.
    #[error("maximum equivalent delay tap {l_max_prime} is not below M = {m}")]
    TapRange { l_max_prime: i64, m: usize },

    #[error("zero-padding range is empty: m_min = {m_min}, m_max = {m_max}")]
    ZpRange { m_min: i64, m_max: i64 },

    #[error("frame has energy at delay bin {m}, outside the zero-padding support [{m_min}, {m_max}]")]
    ZpSupport { m: usize, m_min: usize, m_max: usize },

    #[error("delay index {0} outside [-M+1, M-1]")]
    PhaseIndex(i64),

    #[error("kernel mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("signal has zero power")]
    ZeroPower,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors that describe a physically or structurally infeasible
    /// configuration (as opposed to I/O or caller bugs).
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::Superluminal { .. }
                | Error::InvalidChannel(_)
                | Error::TapRange { .. }
                | Error::ZpRange { .. }
        )
    }
}
