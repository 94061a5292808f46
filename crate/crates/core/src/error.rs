use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A dataset file does not match the expected column layout.
    #[error("column `{column}`: {reason}")]
    Schema { column: String, reason: String },

    #[error("bag {bag}: {source}")]
    Bag {
        bag: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate split in fold {fold}: {reason}")]
    DegenerateSplit { fold: usize, reason: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn in_bag(self, bag: usize) -> Self {
        Error::Bag {
            bag,
            source: Box::new(self),
        }
    }
}
