//! Six-string, 22-fret guitar in standard tuning.
//!
//! String 0 is the low E string. Fret 0 is the open string and counts as a
//! playable position, so the grid has 6 x 23 = 138 cells.

use serde::{Deserialize, Serialize};

use crate::error::OutOfRange;
use crate::music::PitchClass;

pub const STRING_COUNT: u8 = 6;
pub const FRET_COUNT: u8 = 22;
pub const CELL_COUNT: usize = STRING_COUNT as usize * (FRET_COUNT as usize + 1);

/// MIDI note of each open string, low E to high e.
pub const OPEN_TUNING: [u8; 6] = [40, 45, 50, 55, 59, 64];

/// Row labels for tablature, indexed by string.
pub const STRING_LABELS: [char; 6] = ['E', 'A', 'D', 'G', 'B', 'e'];

/// A (string, fret) cell. Ordering is by string, then fret.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FretPosition {
    pub string_idx: u8,
    pub fret: u8,
}

impl FretPosition {
    pub fn new(string_idx: i32, fret: i32) -> Result<Self, OutOfRange> {
        if !(0..i32::from(STRING_COUNT)).contains(&string_idx) || !(0..=i32::from(FRET_COUNT)).contains(&fret) {
            return Err(OutOfRange { string: string_idx, fret });
        }
        Ok(FretPosition { string_idx: string_idx as u8, fret: fret as u8 })
    }

    /// Infallible constructor for positions already known to be in bounds.
    ///
    /// Panics when out of bounds.
    pub const fn at(string_idx: u8, fret: u8) -> Self {
        assert!(string_idx < STRING_COUNT && fret <= FRET_COUNT);
        FretPosition { string_idx, fret }
    }

    pub fn pitch(self) -> Pitch {
        Pitch(OPEN_TUNING[self.string_idx as usize] + self.fret)
    }

    pub fn pitch_class(self) -> PitchClass {
        self.pitch().pitch_class()
    }
}

/// Absolute pitch as a MIDI note number; low E open is 40.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pitch(pub u8);

impl Pitch {
    pub fn midi(self) -> u8 {
        self.0
    }

    pub fn pitch_class(self) -> PitchClass {
        PitchClass::new(i32::from(self.0))
    }
}

/// Weighting of the fret-wise distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DistanceConfig {
    /// Cost of each string crossed, in frets.
    pub string_change_penalty: f64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig { string_change_penalty: 2.0 }
    }
}

pub fn pitch_at(string_idx: i32, fret: i32) -> Result<Pitch, OutOfRange> {
    FretPosition::new(string_idx, fret).map(FretPosition::pitch)
}

/// Every cell of the fretboard, ordered by (string, fret).
pub fn all_positions() -> impl Iterator<Item = FretPosition> {
    (0..STRING_COUNT).flat_map(|s| (0..=FRET_COUNT).map(move |f| FretPosition { string_idx: s, fret: f }))
}

/// All cells sounding `pc`, ordered by (string, fret).
pub fn positions_of_pitch_class(pc: PitchClass) -> Vec<FretPosition> {
    all_positions().filter(|p| p.pitch_class() == pc).collect()
}

/// All cells sounding exactly `pitch`.
pub fn positions_of_pitch(pitch: Pitch) -> impl Iterator<Item = FretPosition> {
    (0..STRING_COUNT).filter_map(move |s| {
        let open = OPEN_TUNING[s as usize];
        let fret = pitch.0.checked_sub(open)?;
        (fret <= FRET_COUNT).then_some(FretPosition { string_idx: s, fret })
    })
}

/// `|Δfret| + penalty · |Δstring|`
pub fn fret_distance(a: FretPosition, b: FretPosition, cfg: &DistanceConfig) -> f64 {
    let frets = f64::from(a.fret.abs_diff(b.fret));
    let strings = f64::from(a.string_idx.abs_diff(b.string_idx));
    frets + cfg.string_change_penalty * strings
}
