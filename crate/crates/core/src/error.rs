use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("composite of consecutive maps is nonzero below valuation {bound} (entry ({row}, {col}))")]
    ComplexNotComposable { row: usize, col: usize, bound: u32 },

    #[error("precision exhausted: no certified result up to N = {precision}")]
    PrecisionExhausted { precision: u32 },

    #[error("tau lies in H_1: every coordinate of {0:?} is divisible by p")]
    TauInH1(Vec<u64>),

    #[error("module carries no free resolution")]
    NoResolution,

    #[error("invalid resolution: {0}")]
    InvalidResolution(String),

    #[error("level {level} is below the structure base level {base}")]
    LevelBelowBase { level: u32, base: u32 },

    #[error("law not applicable: {0}")]
    LawNotApplicable(String),

    #[error("presentation is singular at working precision")]
    SingularPresentation,

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("sequence too short: {len} values, at least {min} required")]
    SequenceTooShort { len: usize, min: usize },

    #[error("semilinearity broken: image of relation column {column} (generator {generator}) leaves the relation submodule at level {level}")]
    SemilinearityBroken { column: usize, generator: usize, level: u32 },

    #[error("action is not unipotent modulo p on the level-0 coinvariants")]
    NotUnipotent,

    #[error("submodule saturation did not stabilise within {iterations} rounds")]
    SaturationDiverged { iterations: usize },

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("invalid Gamma-module: {0}")]
    InvalidGammaModule(String),

    #[error("matrix of dimension {dim} exceeds the configured ceiling {ceiling}")]
    TooLarge { dim: usize, ceiling: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
