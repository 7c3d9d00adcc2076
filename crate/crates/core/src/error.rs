use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("base index {index} outside [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pairing ({i},{j}) is not increasing")]
    NotIncreasing { i: usize, j: usize },
    #[error("base {base} belongs to more than one pairing")]
    SharedEndpoint { base: usize },
    #[error("gap {gap} outside [0, {n}]")]
    BadGap { gap: usize, n: usize },
    #[error("base {base} is paired")]
    BaseIsPaired { base: usize },
    #[error("structure has the wrong type for this operation")]
    WrongType,
    #[error("({i},{j}) is not a pairing")]
    NotAPairing { i: usize, j: usize },
    #[error("expected {expected} children, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("word length {got} does not match {expected} bases")]
    LengthMismatch { expected: usize, got: usize },
    #[error("pairing ({i},{j}) has exactly one blank end")]
    HalfBlankPairing { i: usize, j: usize },
    #[error("intervals {first} and {second} overlap or are out of order")]
    OverlappingIntervals { first: String, second: String },
    #[error("interval {interval} exceeds [1, {n}]")]
    OutOfRange { interval: String, n: usize },
    #[error("({i},{j}) is not a pairing of the sequence")]
    UnknownPairing { i: usize, j: usize },
    #[error("letter {letter:?} is not in the alphabet")]
    UnknownLetter { letter: char },
    #[error("invalid alphabet: {0}")]
    BadAlphabet(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("generator {name}: {source}")]
    Structure {
        name: String,
        #[source]
        source: StructureError,
    },
    #[error("generator {0} is trivial (an identity or empty structure)")]
    Trivial(String),
    #[error("generator {name} has {n} bases, more than {limit}")]
    TooLarge { name: String, n: usize, limit: usize },
    #[error("duplicate generator name {0}")]
    Duplicate(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("generator type does not match the input intervals")]
    WrongType,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("negative score {value} for {entry}")]
    NegativeScore { entry: String, value: i64 },
    #[error("identity score for {entry} must be 0, got {value}")]
    NonZeroIdentity { entry: String, value: i64 },
    #[error("pair substitution {entry} is a mismatch with score 0")]
    UnboundedRatio { entry: String },
    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("both inputs must be type-0 folded sequences")]
    TypeMismatch,
    #[error("letter {letter:?} is not in the score alphabet")]
    UnknownLetter { letter: char },
    #[error("{total} bases exceed the size limit {limit}")]
    TooLarge { total: usize, limit: usize },
    #[error("traceback requested but choices were not recorded")]
    MissingRecords,
}
