use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported derivative {0}")]
    UnsupportedOrder(String),

    #[error("training diverged at epoch {epoch} (loss = {loss})")]
    Diverged { epoch: usize, loss: f64 },

    #[error("point {index}: {source}")]
    AtPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite dictionary entry at point {point}, term `{term}`")]
    NonFinite { point: usize, term: String },

    #[error("derivative bundle lacks primitive `{0}`")]
    MissingPrimitive(String),

    #[error("normal equations are rank deficient")]
    RankDeficient,

    #[error("best-subset enumeration is limited to {limit} columns, got {got}; use stlsq instead")]
    TooManyColumns { limit: usize, got: usize },

    #[error("unknown PDE preset `{0}`")]
    UnknownPreset(String),

    #[error("subsample size {m} must be in 1..={n}")]
    BadSubsample { m: usize, n: usize },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_point(index: usize, source: Error) -> Error {
        Error::AtPoint {
            index,
            source: Box::new(source),
        }
    }
}
