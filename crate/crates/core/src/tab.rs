//! ASCII tablature and JSON output for a [`SoloLine`].
//!
//! Tab layout, high e on top:
//!
//! ```text
//!   Amin7          D7
//! e|--------------|--------------|
//! B|--------------|--------------|
//! G|--------------|-----------5--|
//! D|--2--------5--|--4-----7-----|
//! A|--------3-----|-----5--------|
//! E|-----5--------|--------------|
//! ```
//!
//! Every note takes one cell as wide as the widest fret number in its measure,
//! right-aligned and padded with `-`. Cells are separated by `--`, and each
//! measure is framed by `--` on both sides before its closing `|`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fretboard::{FretPosition, STRING_COUNT, STRING_LABELS};
use crate::pathfinder::SoloLine;
use crate::FORMAT_VERSION;

/// A chord-name header and six string rows, high e first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabDocument {
    pub chord_row: String,
    pub rows: [String; 6],
}

impl fmt::Display for TabDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.chord_row)?;
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

fn render_measure(notes: &[FretPosition], string_idx: u8, out: &mut String) {
    let width = notes.iter().map(|p| p.fret.to_string().len()).max().unwrap_or(1);
    out.push_str("--");
    for (k, note) in notes.iter().enumerate() {
        if k > 0 {
            out.push_str("--");
        }
        if note.string_idx == string_idx {
            out.push_str(&format!("{:->width$}", note.fret));
        } else {
            out.push_str(&"-".repeat(width));
        }
    }
    out.push_str("--|");
}

pub fn render_tab(line: &SoloLine) -> TabDocument {
    let rows: [String; 6] = std::array::from_fn(|row| {
        let string_idx = STRING_COUNT - 1 - row as u8;
        let mut text = format!("{}|", STRING_LABELS[string_idx as usize]);
        for range in &line.chord_boundaries {
            render_measure(&line.slots[range.clone()], string_idx, &mut text);
        }
        text
    });

    let mut chord_row = String::from("  ");
    let mut column = 2;
    for (k, range) in line.chord_boundaries.iter().enumerate() {
        let name = line.chords.get(k).map(String::as_str).unwrap_or("");
        if chord_row.len() < column {
            chord_row.push_str(&" ".repeat(column - chord_row.len()));
        } else if chord_row.len() > column {
            chord_row.push(' ');
        }
        chord_row.push_str(name);
        let mut measure = String::new();
        render_measure(&line.slots[range.clone()], 0, &mut measure);
        column += measure.len();
    }

    TabDocument { chord_row: chord_row.trim_end().to_string(), rows }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NoteRecord {
    pub slot: usize,
    pub string_idx: u8,
    pub fret: u8,
    pub midi: u8,
    pub chord_index: usize,
}

/// Structured form of a solo line; field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LineDocument {
    pub format_version: u32,
    pub chords: Vec<String>,
    pub npm: usize,
    pub notes: Vec<NoteRecord>,
    pub total_cost: f64,
}

pub fn render_json(line: &SoloLine) -> LineDocument {
    let notes = line
        .slots
        .iter()
        .enumerate()
        .map(|(slot, p)| NoteRecord {
            slot,
            string_idx: p.string_idx,
            fret: p.fret,
            midi: p.pitch().midi(),
            chord_index: line.chord_of_slot(slot).unwrap_or(0),
        })
        .collect();
    LineDocument {
        format_version: FORMAT_VERSION,
        chords: line.chords.clone(),
        npm: line.npm,
        notes,
        total_cost: line.total_cost,
    }
}
