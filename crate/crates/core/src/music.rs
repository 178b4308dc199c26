//! Pitch classes, chord qualities and the chord-symbol grammar.
//!
//! A chord symbol is `<A-G>[#|b]<quality>`. The note letter is case-sensitive,
//! the quality token is not. Every quality is a stack of thirds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

const SHARP_NAMES: [&str; 12] = [
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B",
];

/// One of the twelve chromatic classes, `C = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PitchClass(u8);

impl PitchClass {
    pub fn new(value: i32) -> Self {
        PitchClass(value.rem_euclid(12) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn transpose(self, semitones: i32) -> Self {
        PitchClass::new(i32::from(self.0) + semitones)
    }

    /// Shortest distance around the chromatic circle, in `[0, 6]`.
    pub fn circular_distance(self, other: PitchClass) -> u8 {
        let d = (i32::from(self.0) - i32::from(other.0)).rem_euclid(12) as u8;
        d.min(12 - d)
    }

    pub fn name(self) -> &'static str {
        SHARP_NAMES[self.0 as usize]
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A tertian chord quality: canonical token plus the semitone steps between
/// successive chord tones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChordQuality {
    name: &'static str,
    intervals: &'static [u8],
}

impl ChordQuality {
    pub const MAJ7: ChordQuality = ChordQuality { name: "maj7", intervals: &[4, 3, 4] };
    pub const MIN7: ChordQuality = ChordQuality { name: "min7", intervals: &[3, 4, 3] };
    pub const DOM7: ChordQuality = ChordQuality { name: "7", intervals: &[4, 3, 3] };
    pub const HALF_DIM7: ChordQuality = ChordQuality { name: "m7b5", intervals: &[3, 3, 4] };
    pub const DIM7: ChordQuality = ChordQuality { name: "dim7", intervals: &[3, 3, 3] };
    pub const MAJ: ChordQuality = ChordQuality { name: "maj", intervals: &[4, 3] };
    pub const MIN: ChordQuality = ChordQuality { name: "min", intervals: &[3, 4] };

    /// Every supported quality, in a fixed order.
    pub const ALL: [ChordQuality; 7] = [
        Self::MAJ7,
        Self::MIN7,
        Self::DOM7,
        Self::HALF_DIM7,
        Self::DIM7,
        Self::MAJ,
        Self::MIN,
    ];

    /// Looks up a quality token, ignoring case. The empty token is a major triad.
    pub fn from_token(token: &str) -> Option<ChordQuality> {
        let quality = match token.to_ascii_lowercase().as_str() {
            "maj7" => Self::MAJ7,
            "min7" | "m7" | "-7" => Self::MIN7,
            "7" => Self::DOM7,
            "m7b5" | "min7b5" => Self::HALF_DIM7,
            "dim7" | "o7" => Self::DIM7,
            "maj" | "" => Self::MAJ,
            "min" | "m" => Self::MIN,
            _ => return None,
        };
        Some(quality)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn intervals(&self) -> &'static [u8] {
        self.intervals
    }

    pub fn tone_count(&self) -> usize {
        self.intervals.len() + 1
    }

    /// Semitone offset of each chord tone above the root, root first.
    pub fn offsets(&self) -> Vec<i32> {
        let mut acc = 0;
        std::iter::once(0)
            .chain(self.intervals.iter().map(|&step| {
                acc += i32::from(step);
                acc
            }))
            .collect()
    }
}

/// A parsed chord symbol such as `Amin7`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChordSymbol {
    pub root: PitchClass,
    pub quality: ChordQuality,
    pub source_text: String,
}

impl ChordSymbol {
    pub fn new(root: PitchClass, quality: ChordQuality) -> Self {
        let source_text = format!("{}{}", root.name(), quality.name());
        ChordSymbol { root, quality, source_text }
    }

    pub fn tone_count(&self) -> usize {
        self.quality.tone_count()
    }

    /// Root letter plus canonical quality token; reparses to the same chord.
    pub fn canonical(&self) -> String {
        format!("{}{}", self.root.name(), self.quality.name())
    }
}

impl fmt::Display for ChordSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source_text)
    }
}

/// A non-empty sequence of chords, one per measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    chords: Vec<ChordSymbol>,
}

impl Progression {
    pub fn new(chords: Vec<ChordSymbol>) -> Result<Self, ParseError> {
        if chords.is_empty() {
            return Err(ParseError::EmptyProgression);
        }
        Ok(Progression { chords })
    }

    pub fn chords(&self) -> &[ChordSymbol] {
        &self.chords
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_tone_count(&self) -> usize {
        self.chords.iter().map(ChordSymbol::tone_count).max().unwrap_or(0)
    }
}

pub fn parse_chord_symbol(text: &str) -> Result<ChordSymbol, ParseError> {
    if text.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    if text.chars().any(char::is_whitespace) {
        return Err(ParseError::UnknownQuality(text.to_string()));
    }
    let mut chars = text.chars();
    let letter = chars.next().unwrap_or_default();
    let natural = match letter {
        'C' => 0,
        'D' => 2,
        'E' => 4,
        'F' => 5,
        'G' => 7,
        'A' => 9,
        'B' => 11,
        _ => return Err(ParseError::UnknownRoot(text.to_string())),
    };
    let rest = chars.as_str();
    let (accidental, quality_token) = match rest.as_bytes().first() {
        Some(b'#') => (1, &rest[1..]),
        Some(b'b') => (-1, &rest[1..]),
        _ => (0, rest),
    };
    let quality = ChordQuality::from_token(quality_token)
        .ok_or_else(|| ParseError::UnknownQuality(text.to_string()))?;
    Ok(ChordSymbol {
        root: PitchClass::new(natural + accidental),
        quality,
        source_text: text.to_string(),
    })
}

/// Chord tones in stack order, root first.
pub fn chord_tones(chord: &ChordSymbol) -> Vec<PitchClass> {
    chord
        .quality
        .offsets()
        .into_iter()
        .map(|offset| chord.root.transpose(offset))
        .collect()
}

/// Splits on commas and whitespace; empty tokens are skipped.
pub fn parse_progression(text: &str) -> Result<Progression, ParseError> {
    let chords = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|token| !token.is_empty())
        .enumerate()
        .map(|(index, token)| {
            parse_chord_symbol(token).map_err(|source| ParseError::Token {
                index,
                token: token.to_string(),
                source: Box::new(source),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Progression::new(chords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pcs(values: &[u8]) -> Vec<PitchClass> {
        values.iter().map(|&v| PitchClass::new(i32::from(v))).collect()
    }

    #[test]
    fn parses_common_chords() {
        let amin7 = parse_chord_symbol("Amin7").unwrap();
        assert_eq!(amin7.root.value(), 9);
        assert_eq!(amin7.quality.intervals(), &[3, 4, 3]);

        let d7 = parse_chord_symbol("D7").unwrap();
        assert_eq!(d7.root.value(), 2);
        assert_eq!(d7.quality.intervals(), &[4, 3, 3]);
    }

    #[test]
    fn rejects_bad_roots_and_qualities() {
        assert!(matches!(parse_chord_symbol("H7"), Err(ParseError::UnknownRoot(_))));
        assert!(matches!(parse_chord_symbol("amin7"), Err(ParseError::UnknownRoot(_))));
        assert!(matches!(parse_chord_symbol("C9"), Err(ParseError::UnknownQuality(_))));
        assert!(matches!(parse_chord_symbol("C7/E"), Err(ParseError::UnknownQuality(_))));
        assert!(matches!(parse_chord_symbol(""), Err(ParseError::EmptyInput)));
    }

    #[test]
    fn quality_is_case_insensitive_and_aliased() {
        for token in ["Am7", "A-7", "AMIN7", "Amin7", "AM7"] {
            assert_eq!(parse_chord_symbol(token).unwrap().quality, ChordQuality::MIN7, "{token}");
        }
        assert_eq!(parse_chord_symbol("Bm7b5").unwrap().quality, ChordQuality::HALF_DIM7);
        assert_eq!(parse_chord_symbol("Bmin7b5").unwrap().quality, ChordQuality::HALF_DIM7);
        assert_eq!(parse_chord_symbol("Co7").unwrap().quality, ChordQuality::DIM7);
        assert_eq!(parse_chord_symbol("C").unwrap().quality, ChordQuality::MAJ);
    }

    #[test]
    fn enharmonic_roots_agree() {
        let sharp = parse_chord_symbol("A#7").unwrap();
        let flat = parse_chord_symbol("Bb7").unwrap();
        assert_eq!(sharp.root, flat.root);
        assert_eq!(parse_chord_symbol("Cb").unwrap().root.value(), 11);
    }

    #[test]
    fn chord_tone_examples() {
        assert_eq!(chord_tones(&parse_chord_symbol("Amin7").unwrap()), pcs(&[9, 0, 4, 7]));
        assert_eq!(chord_tones(&parse_chord_symbol("D7").unwrap()), pcs(&[2, 6, 9, 0]));
        assert_eq!(chord_tones(&parse_chord_symbol("Cmaj").unwrap()), pcs(&[0, 4, 7]));
    }

    #[test]
    fn vocabulary_fits_within_an_octave_with_distinct_tones() {
        for quality in ChordQuality::ALL {
            assert!(quality.intervals().iter().all(|&i| i == 3 || i == 4));
            assert!((2..=3).contains(&quality.intervals().len()));
            assert!(quality.intervals().iter().map(|&i| u32::from(i)).sum::<u32>() <= 11);
            for root in 0..12 {
                let tones = chord_tones(&ChordSymbol::new(PitchClass::new(root), quality));
                let mut distinct = tones.clone();
                distinct.sort();
                distinct.dedup();
                assert_eq!(distinct.len(), quality.tone_count());
            }
        }
    }

    #[test]
    fn progression_splitting() {
        let prog = parse_progression("Amin7, D7").unwrap();
        assert_eq!(prog.len(), 2);
        assert_eq!(prog.chords()[1].source_text, "D7");
        assert_eq!(parse_progression("Amin7 D7 Gmaj7").unwrap().len(), 3);
        let skipped = parse_progression("Amin7,,D7").unwrap();
        assert_eq!(skipped.chords().iter().map(|c| c.canonical()).collect::<Vec<_>>(), ["Amin7", "D7"]);
        assert_eq!(parse_progression("D7 D7").unwrap().len(), 2);
    }

    #[test]
    fn progression_errors() {
        assert_eq!(parse_progression(" , ").unwrap_err(), ParseError::EmptyProgression);
        match parse_progression("Amin7, Hmin7").unwrap_err() {
            ParseError::Token { index, token, .. } => {
                assert_eq!(index, 1);
                assert_eq!(token, "Hmin7");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn circular_distance_wraps() {
        assert_eq!(PitchClass::new(11).circular_distance(PitchClass::new(0)), 1);
        assert_eq!(PitchClass::new(0).circular_distance(PitchClass::new(6)), 6);
        assert_eq!(PitchClass::new(-3), PitchClass::new(9));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn token() -> impl Strategy<Value = String> {
            let letters = prop::sample::select(vec!["A", "B", "C", "D", "E", "F", "G"]);
            let accidentals = prop::sample::select(vec!["", "#", "b"]);
            let qualities = prop::sample::select(vec![
                "maj7", "min7", "m7", "-7", "7", "m7b5", "min7b5", "dim7", "o7", "maj", "min", "m", "",
                "MIN7", "Maj7",
            ]);
            (letters, accidentals, qualities).prop_map(|(l, a, q)| format!("{l}{a}{q}"))
        }

        proptest! {
            #[test]
            fn print_then_parse_is_stable(text in token()) {
                let first = parse_chord_symbol(&text).unwrap();
                let second = parse_chord_symbol(&first.canonical()).unwrap();
                prop_assert_eq!(first.root, second.root);
                prop_assert_eq!(first.quality, second.quality);
                prop_assert_eq!(first.canonical(), second.canonical());
            }
        }
    }
}
