use thiserror::Error;

/// Unified error type for the synthesis and verification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A distribution or model parameter is out of its valid domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Truncation bounds leave less than 1e-6 of the distribution mass.
    #[error("unreachable support: truncation [{min}, {max}] keeps probability {mass:.3e}")]
    UnreachableSupport { min: f64, max: f64, mass: f64 },

    /// Grammar data is unusable (empty grapheme lists, bad placement map...).
    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),

    /// Configuration file problem (parse error, unknown key, bad value).
    #[error("config error: {0}")]
    Config(String),

    /// A structured data file failed to load or validate.
    #[error("data error in {file}: {message}")]
    Data { file: String, message: String },

    /// A grapheme required by a name has no engram in the inventory.
    #[error("engram inventory has no entry for grapheme '{grapheme}' ({form})")]
    InventoryGap { grapheme: String, form: String },

    /// A contact point is too far from the trajectory to be enforced.
    #[error("contact point ({x:.3}, {y:.3}) is {dist:.3} mm from the trajectory (limit {limit:.3})")]
    ContactViolation { x: f64, y: f64, dist: f64, limit: f64 },

    /// Stroke duration too short to be sampled at the output rate.
    #[error("degenerate stroke: duration {duration:.6} s below minimum {min:.6} s")]
    DegenerateStroke { duration: f64, min: f64 },

    /// Mismatched structures fed to the same pipeline stage.
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// Generic invalid input to an operation (empty sequence, dim mismatch...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Trajectory has no ink to render.
    #[error("degenerate image: trajectory has no pen-down extent")]
    DegenerateImage,

    /// The evaluation protocol cannot run on the given dataset.
    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 config, 3 data, 4 protocol.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => 2,
            Error::Data { .. } | Error::InventoryGap { .. } | Error::Io(_) => 3,
            Error::Protocol(_) | Error::Structural(_) => 4,
            _ => 1,
        }
    }
}
