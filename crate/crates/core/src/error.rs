use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample rate {sample_rate_hz} Hz is below the bandwidth {bandwidth_hz} Hz (aliasing)")]
    Aliasing {
        sample_rate_hz: f64,
        bandwidth_hz: f64,
    },

    #[error("sample rate mismatch: {0} Hz vs {1} Hz")]
    RateMismatch(f64, f64),

    #[error("probe waveform is identically zero")]
    DegenerateProbe,

    #[error("probe spectrum has near-zero bins and no regularization was given")]
    IllConditioned,

    #[error("every channel impulse response is identically zero")]
    DegenerateChannel,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("peak lies at the edge of the record; no half-power crossing on both sides")]
    EdgePeak,

    #[error("background power is zero")]
    DegenerateBackground,

    #[error("malformed ensemble file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
