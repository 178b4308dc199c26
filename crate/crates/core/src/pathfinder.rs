//! Shortest source-to-sink path and ordering of the chosen tones into a line.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::PathError;
use crate::fretboard::{fret_distance, DistanceConfig, FretPosition};
use crate::graph::{NodeId, PatternNode, ToneGraph};

/// One pattern node per chord, in progression order.
#[derive(Clone, Debug, PartialEq)]
pub struct TonePath {
    pub node_ids: Vec<NodeId>,
    pub total_cost: f64,
}

/// The ordered solo line: `npm` slots per chord.
#[derive(Clone, Debug, PartialEq)]
pub struct SoloLine {
    pub chords: Vec<String>,
    pub npm: usize,
    pub slots: Vec<FretPosition>,
    pub chord_boundaries: Vec<Range<usize>>,
    pub total_cost: f64,
}

impl SoloLine {
    pub fn measure(&self, chord_index: usize) -> &[FretPosition] {
        &self.slots[self.chord_boundaries[chord_index].clone()]
    }

    pub fn chord_of_slot(&self, slot: usize) -> Option<usize> {
        self.chord_boundaries.iter().position(|r| r.contains(&slot))
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    cost: f64,
    node: NodeId,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    // min-heap on (cost, node)
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from source to sink. Among equal-cost routes each node keeps the
/// predecessor with the smallest id.
pub fn shortest_path(graph: &ToneGraph) -> Result<TonePath, PathError> {
    let source = graph.source_id();
    let sink = graph.sink_id();
    let n = sink + 1;

    let mut adjacency: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
    for edge in graph.edges() {
        adjacency[edge.from].push((edge.to, edge.weight));
    }

    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<NodeId>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier { cost: 0.0, node: source });

    while let Some(Frontier { cost, node }) = heap.pop() {
        if settled[node] {
            continue;
        }
        settled[node] = true;
        for &(next, weight) in &adjacency[node] {
            let candidate = cost + weight;
            if candidate < dist[next] {
                dist[next] = candidate;
                pred[next] = Some(node);
                heap.push(Frontier { cost: candidate, node: next });
            } else if candidate == dist[next] && pred[next].is_some_and(|p| node < p) {
                pred[next] = Some(node);
            }
        }
    }

    if !dist[sink].is_finite() {
        return Err(PathError::NoPath);
    }
    let mut node_ids = Vec::with_capacity(graph.layers().len());
    let mut cursor = pred[sink].ok_or(PathError::NoPath)?;
    while cursor != source {
        node_ids.push(cursor);
        cursor = pred[cursor].ok_or(PathError::NoPath)?;
    }
    node_ids.reverse();
    if node_ids.len() != graph.layers().len() {
        return Err(PathError::NoPath);
    }
    Ok(TonePath { node_ids, total_cost: dist[sink] })
}

/// Closest cross pair between `from` and `to`, skipping index `exclude` of
/// `from`. Ties go to the lexicographically smallest pair of positions.
pub fn transition_pair(
    from: &[FretPosition],
    to: &[FretPosition],
    exclude: Option<usize>,
    cfg: &DistanceConfig,
) -> Option<(usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, &a) in from.iter().enumerate() {
        if Some(i) == exclude {
            continue;
        }
        for (j, &b) in to.iter().enumerate() {
            let d = fret_distance(a, b, cfg);
            let better = match best {
                None => true,
                Some((bd, bi, bj)) => d < bd || (d == bd && (a, b) < (from[bi], to[bj])),
            };
            if better {
                best = Some((d, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Orders the tones of each chosen node into measures.
///
/// At each chord change the closest pair of tones goes into the last slot of
/// the outgoing measure and the first slot of the incoming one. When a measure
/// already starts with an incoming transition tone, its outgoing tone is picked
/// from the rest. All other slots get a seeded shuffle of the unplaced tones.
pub fn assemble_line(path: &TonePath, graph: &ToneGraph, seed: u64) -> SoloLine {
    let nodes: Vec<&PatternNode> = path
        .node_ids
        .iter()
        .map(|&id| graph.node(id).expect("path node belongs to the graph"))
        .collect();
    let npm = graph.npm();
    let cfg = &graph.weights().distance;

    let mut slots: Vec<Vec<Option<FretPosition>>> = nodes.iter().map(|_| vec![None; npm]).collect();
    let mut used: Vec<Vec<bool>> = nodes.iter().map(|n| vec![false; n.positions.len()]).collect();
    let mut incoming: Vec<Option<usize>> = vec![None; nodes.len()];

    for k in 0..nodes.len().saturating_sub(1) {
        let (from, to) = (&nodes[k].positions, &nodes[k + 1].positions);
        let exclude = incoming[k].filter(|_| from.len() > 1);
        let (i, j) = match (npm == 1, incoming[k]) {
            // a one-slot measure already holds its only tone
            (true, Some(i)) => (i, transition_pair(&from[i..=i], to, None, cfg).map_or(0, |(_, j)| j)),
            _ => transition_pair(from, to, exclude, cfg).expect("patterns are non-empty"),
        };
        slots[k][npm - 1] = Some(from[i]);
        used[k][i] = true;
        slots[k + 1][0] = Some(to[j]);
        used[k + 1][j] = true;
        incoming[k + 1] = Some(j);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut line = Vec::with_capacity(npm * nodes.len());
    for (k, node) in nodes.iter().enumerate() {
        let mut rest: Vec<FretPosition> = node
            .positions
            .iter()
            .zip(&used[k])
            .filter(|(_, &u)| !u)
            .map(|(&p, _)| p)
            .collect();
        rest.shuffle(&mut rng);
        let mut rest = rest.into_iter();
        for slot in &mut slots[k] {
            if slot.is_none() {
                *slot = rest.next();
            }
        }
        line.extend(slots[k].iter().map(|s| s.expect("every slot filled")));
    }

    SoloLine {
        chords: graph.chords().iter().map(|c| c.source_text.clone()).collect(),
        npm,
        slots: line,
        chord_boundaries: (0..nodes.len()).map(|k| k * npm..(k + 1) * npm).collect(),
        total_cost: path.total_cost,
    }
}
