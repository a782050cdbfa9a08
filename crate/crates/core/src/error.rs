use thiserror::Error;

use crate::words::{Letter, Word};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which of the two input subgroups an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    H,
    K,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::H => f.write_str("H"),
            Side::K => f.write_str("K"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("letter {0} has no image under the substitution")]
    UnknownLetter(Letter),

    #[error("letter {letter} lies outside an alphabet of rank {rank}")]
    LetterOutOfAlphabet { letter: Letter, rank: u32 },

    #[error("the subgroup is trivial")]
    TrivialSubgroup,

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("a connected component is complete over the alphabet")]
    CompleteComponent,

    #[error("alphabet has {size} letters, at least {required} needed")]
    AlphabetTooSmall { size: usize, required: usize },

    #[error("reduced rank of the join graph is {0}, at least 2 needed")]
    RankTooSmall(i64),

    #[error("letter {0} does not label an edge of the join graph")]
    LetterAbsentFromZ(Letter),

    #[error(
        "{side} has finite index {index} in the join of rank {join_rank}: \
         rank {rank} = ({join_rank}-1)*{index}+1"
    )]
    FiniteIndexSubgroup {
        side: Side,
        index: usize,
        join_rank: usize,
        rank: usize,
    },

    #[error("elimination loop exceeded {0} iterations")]
    NonTermination(usize),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("word {0} is empty but a nonempty word is required")]
    EmptyWord(Word),

    #[error("internal assertion failed: {0}")]
    ConservativityViolation(String),
}

impl Error {
    /// Process exit status the CLI reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::LetterOutOfAlphabet { .. } | Error::EmptyWord(_) => 2,
            Error::ConservativityViolation(_) | Error::NonTermination(_) => 3,
            _ => 1,
        }
    }

    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::UnknownLetter(_) => "UnknownLetter",
            Error::LetterOutOfAlphabet { .. } => "LetterOutOfAlphabet",
            Error::TrivialSubgroup => "TrivialSubgroup",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::CompleteComponent => "CompleteComponent",
            Error::AlphabetTooSmall { .. } => "AlphabetTooSmall",
            Error::RankTooSmall(_) => "RankTooSmall",
            Error::LetterAbsentFromZ(_) => "LetterAbsentFromZ",
            Error::FiniteIndexSubgroup { .. } => "FiniteIndexSubgroup",
            Error::NonTermination(_) => "NonTermination",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::EmptyWord(_) => "EmptyWord",
            Error::ConservativityViolation(_) => "ConservativityViolation",
        }
    }
}

/// Fails with [`Error::ConservativityViolation`] unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::ConservativityViolation(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
