//! One-shot generation from the command line.

use std::io::{self, Read, Write};
use std::path::PathBuf;

use chordtone::error::Error as EngineError;
use chordtone::music::parse_progression;
use chordtone::{generate, DistanceConfig, GenerateOptions, PreferenceStore, StretchConfig, WeightConfig};
use clap::{Parser, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GENERATION: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tab,
    Json,
    GraphDump,
}

fn non_negative(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(format!("{s} is not a non-negative number"))
    }
}

/// Chord-tone soloing lines mapped to guitar tablature.
#[derive(Debug, Parser)]
#[command(name = "chordtone", version)]
pub struct Cli {
    /// Chord progression, e.g. "Amin7, D7, Gmaj7". Read from stdin when absent.
    #[arg(short, long)]
    pub progression: Option<String>,

    /// Notes per measure.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..))]
    pub npm: u16,

    /// Largest fret span of one arpeggio shape.
    #[arg(long, default_value_t = 4)]
    pub stretch: u8,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Start from a random fretboard cell (seeded by --seed).
    #[arg(long)]
    pub randomize_start: bool,

    /// Cost of crossing one string, in frets.
    #[arg(long, default_value_t = 2.0, value_parser = non_negative)]
    pub penalty: f64,

    /// Coefficient of the transition-distance term.
    #[arg(short = 'a', long = "coeff-transition", default_value_t = 1.0, value_parser = non_negative)]
    pub coeff_transition: f64,

    /// Coefficient of the hand-travel term.
    #[arg(short = 'b', long = "coeff-hand-move", default_value_t = 0.0, value_parser = non_negative)]
    pub coeff_hand_move: f64,

    /// Coefficient of the like/dislike term.
    #[arg(short = 'c', long = "coeff-preference", default_value_t = 0.0, value_parser = non_negative)]
    pub coeff_preference: f64,

    /// Weight per net dislike.
    #[arg(long, default_value_t = 1.0, value_parser = non_negative)]
    pub preference_unit: f64,

    #[arg(long, value_enum, default_value_t = Format::Tab)]
    pub format: Format,

    /// Like/dislike counters written by the server.
    #[arg(long)]
    pub prefs_file: Option<PathBuf>,
}

impl Cli {
    fn weights(&self) -> WeightConfig {
        WeightConfig {
            distance: DistanceConfig { string_change_penalty: self.penalty },
            coeff_transition: self.coeff_transition,
            coeff_hand_move: self.coeff_hand_move,
            coeff_preference: self.coeff_preference,
            preference_unit: self.preference_unit,
        }
    }
}

/// Runs one generation. Only the rendered artifact goes to `stdout`.
pub fn run(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = match &cli.progression {
        Some(text) => text.clone(),
        None => {
            let mut buf = String::new();
            if let Err(e) = stdin.read_to_string(&mut buf) {
                let _ = writeln!(stderr, "error: reading progression from stdin: {e}");
                return EXIT_IO;
            }
            buf
        }
    };

    let progression = match parse_progression(&text) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_PARSE;
        }
    };

    let prefs = match &cli.prefs_file {
        Some(path) => match PreferenceStore::load(path) {
            Ok(store) => store,
            Err(e) => {
                let _ = writeln!(stderr, "error: preference file {}: {e}", path.display());
                return EXIT_IO;
            }
        },
        None => PreferenceStore::new(),
    };

    let seed = match (cli.seed, cli.randomize_start) {
        (Some(seed), _) => seed,
        (None, true) => {
            let seed = rand::random();
            let _ = writeln!(stderr, "seed: {seed}");
            seed
        }
        (None, false) => 0,
    };

    let options = GenerateOptions {
        npm: usize::from(cli.npm),
        stretch: StretchConfig { max_stretch: cli.stretch },
        weights: cli.weights(),
        randomize_start: cli.randomize_start,
        seed,
    };
    let generation = match generate(&progression, &options, &prefs) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return match e {
                EngineError::Parse(_) => EXIT_PARSE,
                _ => EXIT_GENERATION,
            };
        }
    };

    let rendered = match cli.format {
        Format::Tab => generation.tab.to_string(),
        Format::Json => pretty(&generation.document()),
        Format::GraphDump => pretty(&generation.graph.dump()),
    };
    if let Err(e) = stdout.write_all(rendered.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            let _ = writeln!(stderr, "error: writing output: {e}");
            return EXIT_IO;
        }
    }
    EXIT_OK
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize") + "\n"
}
