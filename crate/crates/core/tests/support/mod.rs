//! Independent oracles and readers shared by the integration suites.
//!
//! Nothing here calls the code paths it checks: shapes are enumerated by
//! brute force over the whole grid, path costs by exhaustive enumeration with
//! weights recomputed from raw positions, and tablature is parsed back from
//! text.

#![allow(dead_code)]

use chordtone::fretboard::{FretPosition, OPEN_TUNING};
use chordtone::music::{ChordQuality, ChordSymbol, PitchClass, Progression};
use chordtone::{LineDocument, SoloLine, ToneGraph};
use rand::Rng;

pub fn pos(s: u8, f: u8) -> FretPosition {
    FretPosition::at(s, f)
}

fn midi(p: FretPosition) -> i32 {
    i32::from(OPEN_TUNING[p.string_idx as usize]) + i32::from(p.fret)
}

fn grid() -> Vec<FretPosition> {
    let mut cells = Vec::new();
    for s in 0..6 {
        for f in 0..=22 {
            cells.push(pos(s, f));
        }
    }
    cells
}

/// Every tuple with one cell per chord tone, exact stacked pitches above the
/// root, non-decreasing strings and a fret span within `d`.
pub fn brute_force_shapes(chord: &ChordSymbol, d: u8) -> Vec<Vec<FretPosition>> {
    let mut offsets = vec![0i32];
    for &step in chord.quality.intervals() {
        offsets.push(offsets.last().unwrap() + i32::from(step));
    }
    let root_pc = i32::from(chord.root.value());
    let cells = grid();
    let per_tone: Vec<Vec<FretPosition>> = offsets
        .iter()
        .map(|o| cells.iter().copied().filter(|&p| (midi(p) - root_pc - o).rem_euclid(12) == 0).collect())
        .collect();

    let mut out = Vec::new();
    let mut idx = vec![0usize; per_tone.len()];
    'outer: loop {
        let combo: Vec<FretPosition> = idx.iter().zip(&per_tone).map(|(&i, c)| c[i]).collect();
        let root = midi(combo[0]);
        let lo = combo.iter().map(|p| p.fret).min().unwrap();
        let hi = combo.iter().map(|p| p.fret).max().unwrap();
        if combo.iter().zip(&offsets).all(|(&p, o)| midi(p) == root + o)
            && combo.windows(2).all(|w| w[0].string_idx <= w[1].string_idx)
            && hi - lo <= d
        {
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

/// `|Δfret| + penalty · |Δstring|`, minimised over all cross pairs.
pub fn raw_min_distance(a: &[FretPosition], b: &[FretPosition], penalty: f64) -> f64 {
    let mut best = f64::INFINITY;
    for p in a {
        for q in b {
            let d = (f64::from(p.fret) - f64::from(q.fret)).abs()
                + penalty * (f64::from(p.string_idx) - f64::from(q.string_idx)).abs();
            best = best.min(d);
        }
    }
    best
}

/// Cheapest route through the layers by enumerating every combination, with
/// inter-layer weights recomputed from positions (pure transition distance;
/// source and sink edges cost zero).
pub fn brute_force_path_cost(graph: &ToneGraph, penalty: f64) -> f64 {
    let layers = graph.layers();
    let matrices: Vec<Vec<Vec<f64>>> = layers
        .windows(2)
        .map(|pair| {
            pair[0]
                .iter()
                .map(|a| pair[1].iter().map(|b| raw_min_distance(&a.positions, &b.positions, penalty)).collect())
                .collect()
        })
        .collect();

    fn walk(matrices: &[Vec<Vec<f64>>], layer: usize, at: usize, acc: f64, best: &mut f64) {
        if layer == matrices.len() {
            *best = best.min(acc);
            return;
        }
        for (next, w) in matrices[layer][at].iter().enumerate() {
            walk(matrices, layer + 1, next, acc + w, best);
        }
    }

    let mut best = f64::INFINITY;
    for start in 0..layers[0].len() {
        walk(&matrices, 0, start, 0.0, &mut best);
    }
    best
}

pub fn random_progression(rng: &mut impl Rng, min: usize, max: usize) -> Progression {
    let len = rng.random_range(min..=max);
    let chords = (0..len)
        .map(|_| {
            let quality = ChordQuality::ALL[rng.random_range(0..ChordQuality::ALL.len())];
            ChordSymbol::new(PitchClass::new(rng.random_range(0..12)), quality)
        })
        .collect();
    Progression::new(chords).unwrap()
}

/// Recovers a solo line from rendered tablature text.
///
/// Each note is a run of digits on exactly one string row; the runs of a
/// measure ordered by their last column give the slot order.
pub fn read_tab(text: &str) -> SoloLine {
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7, "chord row plus six strings");
    let chords: Vec<String> = lines[0].split_whitespace().map(str::to_string).collect();
    let rows = &lines[1..];
    let labels = ['e', 'B', 'G', 'D', 'A', 'E'];
    let width = rows[0].len();
    for (row, label) in rows.iter().zip(labels) {
        assert_eq!(row.len(), width);
        assert!(row.starts_with(&format!("{label}|")));
    }

    let bars: Vec<usize> = rows[0].char_indices().filter(|&(_, c)| c == '|').map(|(i, _)| i).collect();
    let mut slots = Vec::new();
    let mut boundaries = Vec::new();
    for window in bars.windows(2) {
        let (start, end) = (window[0] + 1, window[1]);
        let mut notes: Vec<(usize, FretPosition)> = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let string_idx = 5 - r as u8;
            let bytes = &row.as_bytes()[start..end];
            let mut i = 0;
            while i < bytes.len() {
                if bytes[i].is_ascii_digit() {
                    let run_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let fret: u8 = std::str::from_utf8(&bytes[run_start..i]).unwrap().parse().unwrap();
                    notes.push((i, pos(string_idx, fret)));
                } else {
                    i += 1;
                }
            }
        }
        notes.sort_by_key(|&(col, _)| col);
        let first = slots.len();
        slots.extend(notes.into_iter().map(|(_, p)| p));
        boundaries.push(first..slots.len());
    }
    let npm = boundaries.first().map_or(0, |r| r.len());
    SoloLine { chords, npm, slots, chord_boundaries: boundaries, total_cost: 0.0 }
}

/// Rebuilds a solo line from its JSON document.
pub fn read_json(doc: &LineDocument) -> SoloLine {
    let mut boundaries: Vec<std::ops::Range<usize>> = Vec::new();
    let mut slots = Vec::new();
    for note in &doc.notes {
        assert_eq!(note.slot, slots.len());
        let p = pos(note.string_idx, note.fret);
        assert_eq!(midi(p), i32::from(note.midi));
        slots.push(p);
        if boundaries.len() <= note.chord_index {
            boundaries.push(note.slot..note.slot);
        }
        boundaries[note.chord_index].end = note.slot + 1;
    }
    SoloLine {
        chords: doc.chords.clone(),
        npm: doc.npm,
        slots,
        chord_boundaries: boundaries,
        total_cost: doc.total_cost,
    }
}
