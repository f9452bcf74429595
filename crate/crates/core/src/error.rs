use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid game: {}", .0.join("; "))]
    InvalidGame(Vec<String>),

    #[error("profile does not match the game's strategy space: {0}")]
    StrategyMismatch(String),

    #[error("outcomes are defined over different play sets")]
    PlaySetMismatch,

    #[error("monitoring cost must be non-negative, got {0}")]
    NegativeCost(String),

    #[error("equilibrium is not regular: {0}")]
    Degenerate(String),

    #[error("unknown component `{0}`")]
    UnknownComponent(String),

    #[error("no surviving cost found: {0}")]
    NoSurvivingCost(String),

    #[error("inconsistent construction: {0}")]
    Inconsistent(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
