//! Chord-tone soloing lines for guitar.
//!
//! Each chord of a progression gets a layer of playable arpeggio patterns;
//! consecutive layers are fully connected with edges weighted by how close the
//! transition tones sit on the fretboard. The cheapest source-to-sink path
//! picks one pattern per chord, and [`pathfinder::assemble_line`] orders the
//! tones so each chord change lands on its closest pair of notes.
//!
//! ```
//! use chordtone::{generate, music::parse_progression, GenerateOptions, PreferenceStore};
//!
//! let progression = parse_progression("Amin7, D7").unwrap();
//! let out = generate(&progression, &GenerateOptions::default(), &PreferenceStore::new()).unwrap();
//! assert_eq!(out.line.slots.len(), 8);
//! print!("{}", out.tab);
//! ```

pub mod arpeggio;
pub mod error;
pub mod fretboard;
pub mod graph;
pub mod music;
pub mod pathfinder;
pub mod prefs;
pub mod tab;

use serde::{Deserialize, Serialize};

pub use arpeggio::{Fingerprint, StretchConfig};
pub use error::Error;
pub use fretboard::{DistanceConfig, FretPosition};
pub use graph::{build_graph, ToneGraph, WeightConfig};
pub use pathfinder::{assemble_line, shortest_path, SoloLine, TonePath};
pub use prefs::{PreferenceStore, Verdict, Votes};
pub use tab::{render_json, render_tab, LineDocument, TabDocument};

use music::Progression;

/// Version tag of every JSON document this crate writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerateOptions {
    pub npm: usize,
    pub stretch: StretchConfig,
    pub weights: WeightConfig,
    /// Start the path from a random fretboard cell drawn from `seed`.
    pub randomize_start: bool,
    /// Drives both the random start and the ordering shuffle.
    pub seed: u64,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            npm: 4,
            stretch: StretchConfig::default(),
            weights: WeightConfig::default(),
            randomize_start: false,
            seed: 0,
        }
    }
}

/// The pattern picked for one chord.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChosenShape {
    pub chord_index: usize,
    pub fingerprint: Fingerprint,
    pub positions: Vec<FretPosition>,
}

#[derive(Clone, Debug)]
pub struct Generation {
    pub graph: ToneGraph,
    pub path: TonePath,
    pub line: SoloLine,
    pub tab: TabDocument,
    pub shapes: Vec<ChosenShape>,
}

impl Generation {
    pub fn document(&self) -> LineDocument {
        render_json(&self.line)
    }
}

/// Runs the whole pipeline: graph, shortest path, line assembly, rendering.
pub fn generate(
    progression: &Progression,
    options: &GenerateOptions,
    prefs: &PreferenceStore,
) -> Result<Generation, Error> {
    let randomize = options.randomize_start.then_some(options.seed);
    let graph = build_graph(progression, options.npm, options.stretch, options.weights, prefs, randomize)?;
    let path = shortest_path(&graph)?;
    let line = assemble_line(&path, &graph, options.seed);
    let tab = render_tab(&line);
    let shapes = path
        .node_ids
        .iter()
        .filter_map(|&id| graph.node(id))
        .map(|n| ChosenShape {
            chord_index: n.chord_index,
            fingerprint: n.shape_ref.clone(),
            positions: n.positions.clone(),
        })
        .collect();
    Ok(Generation { graph, path, line, tab, shapes })
}
