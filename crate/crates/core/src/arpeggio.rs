//! Rule-based arpeggio shapes.
//!
//! From every fretboard cell holding the chord root, the remaining chord tones
//! are stacked one interval at a time, each on the same string higher up or on
//! a higher string. A shape is kept when its whole fret span fits the hand
//! stretch.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::GenerationError;
use crate::fretboard::{positions_of_pitch, positions_of_pitch_class, FretPosition, Pitch};
use crate::music::{ChordQuality, ChordSymbol};

/// Maximum fret span of one shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StretchConfig {
    pub max_stretch: u8,
}

impl Default for StretchConfig {
    fn default() -> Self {
        StretchConfig { max_stretch: 4 }
    }
}

/// Root-relative identifier of a shape: the same fingering moved to another
/// root shares its fingerprint. Rendered as 16 lowercase hex digits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fingerprint(String);

impl Fingerprint {
    pub const LEN: usize = 16;

    pub fn of_shape(quality: &ChordQuality, positions: &[FretPosition]) -> Self {
        let Some(root) = positions.first() else {
            return Fingerprint::from_digest(quality.name().as_bytes());
        };
        let mut canonical = String::from(quality.name());
        canonical.push(':');
        for p in positions {
            let ds = i32::from(p.string_idx) - i32::from(root.string_idx);
            let df = i32::from(p.fret) - i32::from(root.fret);
            canonical.push_str(&format!("{ds},{df};"));
        }
        Fingerprint::from_digest(canonical.as_bytes())
    }

    fn from_digest(bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        let hex: String = digest[..Self::LEN / 2].iter().map(|b| format!("{b:02x}")).collect();
        Fingerprint(hex)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("malformed fingerprint {0:?}: expected {len} lowercase hex digits", len = Fingerprint::LEN)]
pub struct MalformedFingerprint(pub String);

impl FromStr for Fingerprint {
    type Err = MalformedFingerprint;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let valid = s.len() == Self::LEN && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b));
        if valid {
            Ok(Fingerprint(s.to_string()))
        } else {
            Err(MalformedFingerprint(s.to_string()))
        }
    }
}

impl TryFrom<String> for Fingerprint {
    type Error = MalformedFingerprint;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Fingerprint> for String {
    fn from(value: Fingerprint) -> Self {
        value.0
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One playable realization of a chord: a position per chord tone, ascending
/// in pitch, root first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArpeggioShape {
    pub chord: ChordSymbol,
    pub positions: Vec<FretPosition>,
    pub fingerprint: Fingerprint,
}

impl ArpeggioShape {
    pub fn new(chord: ChordSymbol, positions: Vec<FretPosition>) -> Self {
        let fingerprint = Fingerprint::of_shape(&chord.quality, &positions);
        ArpeggioShape { chord, positions, fingerprint }
    }

    pub fn fret_span(&self) -> u8 {
        fret_span(&self.positions)
    }
}

/// A notes-per-measure long run of chord-tone positions. The stored order is
/// only a starting point; weights treat it as an unordered tone set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TonePattern {
    pub positions: Vec<FretPosition>,
    pub shape_ref: Fingerprint,
}

pub(crate) fn fret_span(positions: &[FretPosition]) -> u8 {
    let min = positions.iter().map(|p| p.fret).min().unwrap_or(0);
    let max = positions.iter().map(|p| p.fret).max().unwrap_or(0);
    max - min
}

/// All shapes of `chord` that fit within `cfg.max_stretch` frets, ordered by
/// root position and then lexicographically.
pub fn generate_shapes(chord: &ChordSymbol, cfg: StretchConfig) -> Result<Vec<ArpeggioShape>, GenerationError> {
    let offsets = chord.quality.offsets();
    let mut found: Vec<Vec<FretPosition>> = Vec::new();
    for root in positions_of_pitch_class(chord.root) {
        let root_pitch = i32::from(root.pitch().midi());
        let targets: Vec<i32> = offsets.iter().map(|o| root_pitch + o).collect();
        let mut stack = vec![root];
        extend(&targets, cfg.max_stretch, root.fret, root.fret, &mut stack, &mut found);
    }
    found.sort();
    found.dedup();
    if found.is_empty() {
        return Err(GenerationError::NoShapes {
            chord: chord.source_text.clone(),
            max_stretch: cfg.max_stretch,
        });
    }
    Ok(found.into_iter().map(|positions| ArpeggioShape::new(chord.clone(), positions)).collect())
}

fn extend(
    targets: &[i32],
    max_stretch: u8,
    lo: u8,
    hi: u8,
    stack: &mut Vec<FretPosition>,
    found: &mut Vec<Vec<FretPosition>>,
) {
    let Some(&target) = targets.get(stack.len()) else {
        found.push(stack.clone());
        return;
    };
    let Ok(target) = u8::try_from(target) else { return };
    let last = *stack.last().expect("stack holds the root");
    for next in positions_of_pitch(Pitch(target)) {
        let climbs = next.string_idx > last.string_idx || (next.string_idx == last.string_idx && next.fret > last.fret);
        let (lo, hi) = (lo.min(next.fret), hi.max(next.fret));
        if climbs && hi - lo <= max_stretch {
            stack.push(next);
            extend(targets, max_stretch, lo, hi, stack, found);
            stack.pop();
        }
    }
}

/// Expands a shape into the `npm`-note patterns that become graph nodes.
///
/// Longer measures cycle through the shape's tones.
pub fn expand_patterns(shape: &ArpeggioShape, npm: usize) -> Result<Vec<TonePattern>, GenerationError> {
    let tones = shape.positions.len();
    if npm < tones {
        return Err(GenerationError::PatternTooShort {
            chord: shape.chord.source_text.clone(),
            npm,
            tones,
        });
    }
    let positions = shape.positions.iter().copied().cycle().take(npm).collect();
    Ok(vec![TonePattern { positions, shape_ref: shape.fingerprint.clone() }])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fretboard::all_positions;
    use crate::music::{chord_tones, parse_chord_symbol, PitchClass};

    fn pos(s: u8, f: u8) -> FretPosition {
        FretPosition::at(s, f)
    }

    fn stretch(d: u8) -> StretchConfig {
        StretchConfig { max_stretch: d }
    }

    /// Independent enumeration: product of all candidate cells per chord tone,
    /// filtered by the shape rules.
    fn brute_force(chord: &ChordSymbol, d: u8) -> Vec<Vec<FretPosition>> {
        let offsets = chord.quality.offsets();
        let per_tone: Vec<Vec<FretPosition>> = chord_tones(chord)
            .into_iter()
            .map(|pc| all_positions().filter(|p| p.pitch_class() == pc).collect())
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_tone.len()];
        'outer: loop {
            let combo: Vec<FretPosition> = idx.iter().zip(&per_tone).map(|(&i, cells)| cells[i]).collect();
            let root = i32::from(combo[0].pitch().midi());
            let ok = combo.iter().zip(&offsets).all(|(p, o)| i32::from(p.pitch().midi()) == root + o)
                && combo.windows(2).all(|w| w[0].string_idx <= w[1].string_idx)
                && fret_span(&combo) <= d;
            if ok {
                out.push(combo);
            }
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < per_tone[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        out.sort();
        out
    }

    fn positions_of(shapes: &[ArpeggioShape]) -> Vec<Vec<FretPosition>> {
        shapes.iter().map(|s| s.positions.clone()).collect()
    }

    #[test]
    fn amin7_contains_both_worked_shapes() {
        let amin7 = parse_chord_symbol("Amin7").unwrap();
        let shapes = positions_of(&generate_shapes(&amin7, stretch(4)).unwrap());
        assert!(shapes.contains(&vec![pos(0, 5), pos(0, 8), pos(1, 7), pos(2, 5)]));
        assert!(shapes.contains(&vec![pos(0, 5), pos(1, 3), pos(2, 2), pos(2, 5)]));
    }

    #[test]
    fn zero_stretch_has_no_min7_shape() {
        let amin7 = parse_chord_symbol("Amin7").unwrap();
        assert!(brute_force(&amin7, 0).is_empty());
        assert!(matches!(generate_shapes(&amin7, stretch(0)), Err(GenerationError::NoShapes { .. })));
    }

    #[test]
    fn matches_brute_force_for_a_few_chords() {
        for token in ["Amin7", "D7", "Gmaj7", "Bm7b5", "Ebdim7", "F#m", "C"] {
            let chord = parse_chord_symbol(token).unwrap();
            for d in 1..=5 {
                let oracle = brute_force(&chord, d);
                match generate_shapes(&chord, stretch(d)) {
                    Ok(shapes) => assert_eq!(positions_of(&shapes), oracle, "{token} D={d}"),
                    Err(_) => assert!(oracle.is_empty(), "{token} D={d}"),
                }
            }
        }
    }

    #[test]
    fn shapes_satisfy_invariants_and_grow_with_stretch() {
        for quality in ChordQuality::ALL {
            for root in 0..12 {
                let chord = ChordSymbol::new(PitchClass::new(root), quality);
                let tones = chord_tones(&chord);
                let mut previous: Vec<Vec<FretPosition>> = Vec::new();
                for d in 1..=6 {
                    let shapes = generate_shapes(&chord, stretch(d)).unwrap_or_default();
                    for shape in &shapes {
                        assert_eq!(shape.positions.len(), chord.tone_count());
                        assert!(shape.positions.windows(2).all(|w| w[0].pitch() < w[1].pitch()));
                        assert!(shape.positions.windows(2).all(|w| w[0].string_idx <= w[1].string_idx));
                        let pcs: Vec<_> = shape.positions.iter().map(|p| p.pitch_class()).collect();
                        assert_eq!(pcs, tones);
                        assert!(shape.fret_span() <= d);
                    }
                    let current = positions_of(&shapes);
                    assert!(previous.iter().all(|s| current.contains(s)));
                    assert!(current.windows(2).all(|w| w[0] < w[1]));
                    previous = current;
                }
            }
        }
    }

    #[test]
    fn expansion() {
        let amin7 = parse_chord_symbol("Amin7").unwrap();
        let shape = ArpeggioShape::new(amin7, vec![pos(0, 5), pos(1, 3), pos(2, 2), pos(2, 5)]);
        let same = expand_patterns(&shape, 4).unwrap();
        assert_eq!(same.len(), 1);
        assert_eq!(same[0].positions, shape.positions);
        assert_eq!(same[0].shape_ref, shape.fingerprint);

        let doubled = expand_patterns(&shape, 8).unwrap();
        assert_eq!(doubled[0].positions.len(), 8);
        for p in &shape.positions {
            assert_eq!(doubled[0].positions.iter().filter(|q| *q == p).count(), 2);
        }
        assert!(matches!(expand_patterns(&shape, 3), Err(GenerationError::PatternTooShort { npm: 3, tones: 4, .. })));
    }

    #[test]
    fn fingerprints_are_root_relative() {
        let a = parse_chord_symbol("Amin7").unwrap();
        let b = parse_chord_symbol("Bmin7").unwrap();
        let d7 = parse_chord_symbol("D7").unwrap();
        let on_a = ArpeggioShape::new(a.clone(), vec![pos(0, 5), pos(0, 8), pos(1, 7), pos(2, 5)]);
        let on_b = ArpeggioShape::new(b, vec![pos(0, 7), pos(0, 10), pos(1, 9), pos(2, 7)]);
        let other = ArpeggioShape::new(a, vec![pos(0, 5), pos(1, 3), pos(2, 2), pos(2, 5)]);
        let same_offsets_other_quality = ArpeggioShape::new(d7, vec![pos(0, 5), pos(0, 8), pos(1, 7), pos(2, 5)]);
        assert_eq!(on_a.fingerprint, on_b.fingerprint);
        assert_ne!(on_a.fingerprint, other.fingerprint);
        assert_ne!(on_a.fingerprint, same_offsets_other_quality.fingerprint);
        assert!(on_a.fingerprint.as_str().parse::<Fingerprint>().is_ok());
    }

    #[test]
    fn fingerprint_syntax() {
        assert!("0123456789abcdef".parse::<Fingerprint>().is_ok());
        assert!("0123456789ABCDEF".parse::<Fingerprint>().is_err());
        assert!("0123456789abcde".parse::<Fingerprint>().is_err());
        assert!("0123456789abcdeg".parse::<Fingerprint>().is_err());
    }
}
