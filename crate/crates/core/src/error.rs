use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input contains no color points")]
    EmptyInput,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("seeding failed: {0}")]
    Seeding(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("centroids {first} and {second} coincide")]
    DegenerateCentroids { first: usize, second: usize },

    #[error("cluster {cluster} has zero total membership weight")]
    EmptyCluster { cluster: usize },

    #[error("reference set has not been scanned")]
    Unscanned,

    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
}
