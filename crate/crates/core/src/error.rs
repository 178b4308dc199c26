use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty chord symbol")]
    EmptyInput,
    #[error("unknown root note in {0:?} (expected A-G)")]
    UnknownRoot(String),
    #[error("unknown chord quality in {0:?}")]
    UnknownQuality(String),
    #[error("empty progression")]
    EmptyProgression,
    #[error("chord {index} ({token:?}): {source}")]
    Token {
        index: usize,
        token: String,
        #[source]
        source: Box<ParseError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fret position (string {string}, fret {fret}) is off the fretboard")]
pub struct OutOfRange {
    pub string: i32,
    pub fret: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("no playable shape for {chord} within a stretch of {max_stretch} frets")]
    NoShapes { chord: String, max_stretch: u8 },
    #[error("PatternTooShort: {npm} notes per measure cannot hold the {tones} tones of {chord}")]
    PatternTooShort { chord: String, npm: usize, tones: usize },
    #[error("EmptyLayer: chord {chord_index} ({chord}) has no playable shape")]
    EmptyLayer { chord_index: usize, chord: String },
    #[error("invalid weight configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("no path from source to sink")]
    NoPath,
}

/// Any failure of the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Generation(#[from] GenerationError),
    #[error(transparent)]
    Path(#[from] PathError),
}
