use thiserror::Error;

use crate::smallcanc::SmallCancellationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("letter references generator {index} but the alphabet has {rank} generators")]
    Alphabet { index: usize, rank: usize },

    #[error("invalid generator name `{0}`")]
    InvalidName(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("relator {0} is empty after reduction")]
    DegenerateRelator(usize),

    #[error("presentation is not certified C'(1/6); Dehn's algorithm is not a decision procedure here")]
    CertificateMissing,

    #[error("no verified presentation after {rounds} rounds (last ratio {})", .report.ratio)]
    ConstructionFailure {
        rounds: usize,
        report: Box<SmallCancellationReport>,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
