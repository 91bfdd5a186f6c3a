use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for tree with {p} vertices")]
    VertexOutOfRange { index: usize, p: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("tree has a single vertex; nothing remains after deleting the root")]
    SingleVertex,
    #[error("snowflake expects {expected} child degrees, got {got}")]
    SnowflakeLength { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("not a shape fraction: {0}")]
    NotShapeFraction(String),
    #[error("no tree within p_max = {p_max}")]
    NoTree { p_max: usize },
    #[error("invalid JostData: {0}")]
    InvalidJost(String),
    #[error("pole of the S-function at sqrt(lambda) = {re}{im:+}i")]
    SPole { re: f64, im: f64 },
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("potential is not symmetric about l/2 (max deviation {0:e})")]
    AsymmetricPotential(f64),
    #[error("non-finite value during integration at sqrt(lambda) = {re}{im:+}i")]
    NonFinite { re: f64, im: f64 },
    #[error("invalid scan rectangle: {0}")]
    InvalidRect(String),
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("period not detected")]
    PeriodNotDetected,
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping stage labels.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}
